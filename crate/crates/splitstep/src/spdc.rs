//! Pair-coupling amplitude Γ(k_s, k_i) on the walk lattice.
//!
//! A pump mode couples to two sublattices with amplitudes E₁, E₂ (optionally
//! under a Gaussian envelope in the total momentum k_s + k_i). The signal
//! and idler photons inherit phase-matching phases φ_s, φ_i from the walk
//! band structure, giving the two-sublattice interference
//!
//! ```text
//! Γ = γ (E₁ e^{-i|φ_s + φ_i|} + E₂)            (AbsSum convention)
//! Γ = γ (E₁ e^{-i(φ_s + φ_i)} + E₂)            (Product convention)
//! ```
//!
//! in the planar (n_z = 0) limit, or the full eigenmode overlap
//! `γ Σ_j E_j u_{s,j}(k_s) u_{i,j}(k_i)` over the two sublattice components.
//! Grids of |Γ|² over the Brillouin zone reproduce the contrast between the
//! structured coupling of distinct topological sectors and the smooth map of
//! plain down-conversion; the 2D Fourier transform of Γ gives the joint
//! signal/idler position correlation.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::walk::{band_eigenvector, brillouin_grid, relative_phase, Band, Quasimomentum, WalkAngles};

/// Largest tolerated fraction of invalid grid cells, one percent.
const INVALID_BUDGET: f64 = 0.01;

/// Pump profile over total momentum: either flat or a Gaussian of width
/// `sigma` (radians, same units as k) centered on `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvelopeKind {
    Constant,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpEnvelope {
    pub kind: EnvelopeKind,
    pub amplitude1: f64,
    pub amplitude2: f64,
    pub sigma: f64,
    pub center: f64,
}

impl PumpEnvelope {
    pub fn constant(amplitude1: f64, amplitude2: f64) -> Self {
        assert!(amplitude1.is_finite() && amplitude2.is_finite());
        Self {
            kind: EnvelopeKind::Constant,
            amplitude1,
            amplitude2,
            sigma: 1.0,
            center: 0.0,
        }
    }

    pub fn gaussian(amplitude1: f64, amplitude2: f64, sigma: f64) -> Self {
        Self::gaussian_centered(amplitude1, amplitude2, sigma, 0.0)
    }

    pub fn gaussian_centered(amplitude1: f64, amplitude2: f64, sigma: f64, center: f64) -> Self {
        assert!(amplitude1.is_finite() && amplitude2.is_finite() && center.is_finite());
        assert!(sigma.is_finite() && sigma > 0.0, "gaussian width must be positive");
        Self {
            kind: EnvelopeKind::Gaussian,
            amplitude1,
            amplitude2,
            sigma,
            center,
        }
    }
}

/// Relative sign between the signal and idler phase-matching phases,
/// φ_s = ±φ_i.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSign {
    Correlated,
    Anticorrelated,
}

impl PhaseSign {
    pub fn apply(&self, phi: f64) -> f64 {
        match self {
            PhaseSign::Correlated => phi,
            PhaseSign::Anticorrelated => -phi,
        }
    }
}

/// Which exponent enters the planar coupling: the literal non-analytic
/// |φ_s + φ_i| or the plain sum. Both have the same magnitude for real
/// pump amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseConvention {
    AbsSum,
    Product,
}

/// Full configuration of a coupling computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpdcConfig {
    pub signal: WalkAngles,
    pub idler: WalkAngles,
    pub phase_sign: PhaseSign,
    pub gamma0: f64,
    pub convention: PhaseConvention,
}

impl SpdcConfig {
    pub fn new(
        signal: WalkAngles,
        idler: WalkAngles,
        phase_sign: PhaseSign,
        gamma0: f64,
        convention: PhaseConvention,
    ) -> Self {
        assert!(gamma0.is_finite() && gamma0 > 0.0, "gamma0 must be positive");
        Self {
            signal,
            idler,
            phase_sign,
            gamma0,
            convention,
        }
    }
}

/// Sublattice pump amplitudes at total momentum `k_total`.
pub fn pump_amplitude(env: &PumpEnvelope, k_total: f64) -> (f64, f64) {
    match env.kind {
        EnvelopeKind::Constant => (env.amplitude1, env.amplitude2),
        EnvelopeKind::Gaussian => {
            let d = k_total - env.center;
            let g = (-d * d / (2.0 * env.sigma * env.sigma)).exp();
            (env.amplitude1 * g, env.amplitude2 * g)
        }
    }
}

/// Planar-limit coupling amplitude from the phase-matching phases alone.
pub fn coupling_planar(
    cfg: &SpdcConfig,
    env: &PumpEnvelope,
    ks: Quasimomentum,
    ki: Quasimomentum,
) -> Result<C64> {
    let phi_s = relative_phase(cfg.signal, ks)?;
    let phi_i = cfg.phase_sign.apply(relative_phase(cfg.idler, ki)?);
    let (e1, e2) = pump_amplitude(env, ks.radians() + ki.radians());
    let total = phi_s + phi_i;
    let exponent = match cfg.convention {
        PhaseConvention::AbsSum => -total.abs(),
        PhaseConvention::Product => -total,
    };
    Ok(cfg.gamma0 * (e1 * C64::from_polar(1.0, exponent) + C64::new(e2, 0.0)))
}

/// Two-sublattice eigenmode overlap, γ Σ_j E_j u_{s,j}(k_s) u_{i,j}(k_i).
pub fn coupling_two_sublattice(
    cfg: &SpdcConfig,
    env: &PumpEnvelope,
    ks: Quasimomentum,
    ki: Quasimomentum,
    band_s: Band,
    band_i: Band,
) -> Result<C64> {
    let us = band_eigenvector(cfg.signal, ks, band_s)?;
    let ui = band_eigenvector(cfg.idler, ki, band_i)?;
    let (e1, e2) = pump_amplitude(env, ks.radians() + ki.radians());
    Ok(cfg.gamma0 * (e1 * us.c0() * ui.c0() + e2 * us.c1() * ui.c1()))
}

/// Complex coupling amplitudes sampled on an M×M momentum grid.
///
/// Cells where the phase is undefined carry a NaN marker and are counted in
/// `invalid_cells`; construction fails once more than one percent of the
/// grid is invalid.
#[derive(Debug, Clone)]
pub struct CouplingGrid {
    pub num_k: usize,
    pub k_values: Vec<f64>,
    /// Row-major over (k_s index, k_i index).
    pub values: Vec<C64>,
    pub invalid_cells: usize,
}

impl CouplingGrid {
    pub fn value(&self, i_ks: usize, i_ki: usize) -> C64 {
        self.values[i_ks * self.num_k + i_ki]
    }

    pub fn is_valid(&self, i_ks: usize, i_ki: usize) -> bool {
        let v = self.value(i_ks, i_ki);
        v.re.is_finite() && v.im.is_finite()
    }

    /// |Γ|² in the same row-major layout, NaN on invalid cells.
    pub fn magnitude_squared(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// For each fixed k_i, the number of strict local maxima of |Γ|² along
    /// the k_s axis, with periodic wraparound.
    pub fn signal_axis_maxima_counts(&self) -> Vec<usize> {
        let m = self.num_k;
        let mag = self.magnitude_squared();
        (0..m)
            .map(|i_ki| {
                let column: Vec<f64> = (0..m).map(|i_ks| mag[i_ks * m + i_ki]).collect();
                periodic_local_maxima(&column)
            })
            .collect()
    }
}

/// Strict local maxima of a periodic sequence.
pub fn periodic_local_maxima(values: &[f64]) -> usize {
    let m = values.len();
    if m < 3 {
        return 0;
    }
    (0..m)
        .filter(|&j| {
            let v = values[j];
            v > values[(j + m - 1) % m] && v > values[(j + 1) % m]
        })
        .count()
}

/// Planar coupling sampled on the uniform M×M Brillouin-zone grid.
pub fn coupling_grid(cfg: &SpdcConfig, env: &PumpEnvelope, num_k: usize) -> Result<CouplingGrid> {
    if num_k < 16 {
        return Err(Error::InvalidParameter(format!(
            "coupling_grid needs at least 16 samples per axis, got {num_k}"
        )));
    }
    let k_values = brillouin_grid(num_k);
    let values: Vec<C64> = k_values
        .par_iter()
        .flat_map_iter(|&ks| {
            let k_values = k_values.clone();
            let cfg = *cfg;
            let env = *env;
            k_values.into_iter().map(move |ki| {
                coupling_planar(&cfg, &env, Quasimomentum::new(ks), Quasimomentum::new(ki))
                    .unwrap_or(C64::new(f64::NAN, f64::NAN))
            })
        })
        .collect();
    let invalid_cells = values.iter().filter(|v| !(v.re.is_finite() && v.im.is_finite())).count();
    let total = num_k * num_k;
    if invalid_cells as f64 > INVALID_BUDGET * total as f64 {
        return Err(Error::GridDegenerate {
            invalid: invalid_cells,
            total,
        });
    }
    Ok(CouplingGrid {
        num_k,
        k_values,
        values,
        invalid_cells,
    })
}

/// Joint detection probability over signal/idler lattice sites.
#[derive(Debug, Clone)]
pub struct PositionMap {
    pub num_k: usize,
    /// Lattice sites in ascending order, centered on zero.
    pub sites: Vec<i64>,
    /// Row-major over (signal site, idler site); sums to one.
    pub values: Vec<f64>,
}

impl PositionMap {
    pub fn value(&self, i_s: usize, i_i: usize) -> f64 {
        self.values[i_s * self.num_k + i_i]
    }

    /// Index of lattice site x in `sites`.
    pub fn site_index(&self, x: i64) -> usize {
        let m = self.num_k as i64;
        (x + m / 2) as usize
    }
}

/// Squared magnitude of the 2D Fourier transform of Γ over (k_s, k_i),
/// normalized to unit sum. The transform kernel is e^{-i(k_s x_s + k_i x_i)},
/// so a plane-wave factor e^{i k x₀} concentrates weight at site x₀.
pub fn joint_position_map(grid: &CouplingGrid) -> Result<PositionMap> {
    if grid.invalid_cells > 0 {
        return Err(Error::InvalidGrid);
    }
    let m = grid.num_k;
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);

    let mut data = grid.values.clone();
    // rows: transform over the k_i index
    for row in data.chunks_exact_mut(m) {
        fft.process(row);
    }
    // columns: transform over the k_s index
    let mut column = vec![C64::new(0.0, 0.0); m];
    for j in 0..m {
        for i in 0..m {
            column[i] = data[i * m + j];
        }
        fft.process(&mut column);
        for i in 0..m {
            data[i * m + j] = column[i];
        }
    }

    // recentre FFT indices onto lattice sites (fftshift on both axes)
    let offset = (m / 2) as i64;
    let site_of = |t: usize| -> i64 {
        if t <= (m - 1) / 2 {
            t as i64
        } else {
            t as i64 - m as i64
        }
    };
    let mut values = vec![0.0; m * m];
    for ts in 0..m {
        for ti in 0..m {
            let xs = (site_of(ts) + offset) as usize;
            let xi = (site_of(ti) + offset) as usize;
            values[xs * m + xi] = data[ts * m + ti].norm_sqr();
        }
    }
    let sum: f64 = values.iter().sum();
    assert!(sum > 0.0, "position map of an identically zero grid");
    for v in &mut values {
        *v /= sum;
    }
    let sites: Vec<i64> = (0..m).map(|i| i as i64 - offset).collect();
    Ok(PositionMap {
        num_k: m,
        sites,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn unit_config(sign: PhaseSign, convention: PhaseConvention) -> SpdcConfig {
        let angles = WalkAngles::new(0.4, 0.0);
        SpdcConfig::new(angles, angles, sign, 1.0, convention)
    }

    #[test]
    fn constant_pump_ignores_momentum() {
        let env = PumpEnvelope::constant(1.0, 1.0);
        assert_eq!(pump_amplitude(&env, 0.0), (1.0, 1.0));
        assert_eq!(pump_amplitude(&env, 5.3), (1.0, 1.0));
    }

    #[test]
    fn gaussian_pump_peaks_at_center_and_decays_by_width() {
        let env = PumpEnvelope::gaussian(1.0, 1.0, 10.0);
        let (a, b) = pump_amplitude(&env, 0.0);
        assert!(close(a, 1.0, 1e-15) && close(b, 1.0, 1e-15));
        let (a, b) = pump_amplitude(&env, 10.0);
        let g = (-0.5_f64).exp();
        assert!(close(a, g, 1e-15) && close(b, g, 1e-15));
    }

    #[test]
    fn planar_coupling_adds_in_phase() {
        // anticorrelated signs cancel the phases at equal momenta
        let cfg = unit_config(PhaseSign::Anticorrelated, PhaseConvention::AbsSum);
        let env = PumpEnvelope::constant(1.0, 1.0);
        let k = Quasimomentum::new(0.7);
        let g = coupling_planar(&cfg, &env, k, k).unwrap();
        assert!((g - C64::new(2.0, 0.0)).norm() < 1e-12);
        assert!(close(g.norm_sqr(), 4.0, 1e-12));
    }

    #[test]
    fn planar_coupling_cancels_in_antiphase() {
        // φ = π/2 − k at θ₂ = 0, so correlated phases at k = 0 sum to π
        let cfg = unit_config(PhaseSign::Correlated, PhaseConvention::AbsSum);
        let env = PumpEnvelope::constant(1.0, 1.0);
        let k = Quasimomentum::new(0.0);
        let g = coupling_planar(&cfg, &env, k, k).unwrap();
        assert!(g.norm() < 1e-12);
    }

    #[test]
    fn planar_coupling_matches_the_closed_form() {
        let angles = WalkAngles::new(0.01, 0.001);
        let cfg = SpdcConfig::new(angles, angles, PhaseSign::Correlated, 1.0, PhaseConvention::AbsSum);
        let env = PumpEnvelope::constant(1.0, 1.0);
        let k = Quasimomentum::new(1.2);
        let g = coupling_planar(&cfg, &env, k, k).unwrap();
        let phi = relative_phase(angles, k).unwrap();
        assert!(close(g.norm_sqr(), 2.0 + 2.0 * (2.0 * phi).cos(), 1e-12));
    }

    #[test]
    fn single_sublattice_limit_has_half_weight() {
        // θ₁ = π/2 makes n_z vanish for every k, so |u_j| = 1/√2
        let angles = WalkAngles::new(PI / 2.0, 0.3);
        let cfg = SpdcConfig::new(angles, angles, PhaseSign::Correlated, 1.0, PhaseConvention::Product);
        let env = PumpEnvelope::constant(1.0, 0.0);
        let g = coupling_two_sublattice(
            &cfg,
            &env,
            Quasimomentum::new(0.9),
            Quasimomentum::new(-1.3),
            Band::Plus,
            Band::Plus,
        )
        .unwrap();
        assert!(close(g.norm(), 0.5, 1e-12));
    }

    #[test]
    fn two_sublattice_overlap_reduces_to_planar_product_form() {
        // in the n_z = 0 limit the eigenmode overlap equals the Product-form
        // planar coupling up to the dropped normalization: a factor 1/2 and
        // a global phase e^{iΣ}
        let angles = WalkAngles::new(PI / 2.0, 0.3);
        let cfg = SpdcConfig::new(angles, angles, PhaseSign::Correlated, 1.0, PhaseConvention::Product);
        let env = PumpEnvelope::constant(0.8, 1.1);
        for (ks, ki) in [(0.9, -1.3), (2.1, 0.4), (-0.7, -2.9)] {
            let ks = Quasimomentum::new(ks);
            let ki = Quasimomentum::new(ki);
            let two = coupling_two_sublattice(&cfg, &env, ks, ki, Band::Plus, Band::Plus).unwrap();
            let planar = coupling_planar(&cfg, &env, ks, ki).unwrap();
            let total = relative_phase(angles, ks).unwrap() + relative_phase(angles, ki).unwrap();
            let rebuilt = 0.5 * C64::from_polar(1.0, total) * planar;
            assert!((two - rebuilt).norm() < 1e-9);
        }
    }

    #[test]
    fn coupling_magnitude_obeys_the_triangle_bound() {
        let angles = WalkAngles::new(0.7, 0.2);
        let cfg = SpdcConfig::new(angles, angles, PhaseSign::Correlated, 1.3, PhaseConvention::AbsSum);
        let env = PumpEnvelope::gaussian(0.9, 1.4, 2.0);
        for j in 0..10_000 {
            let ks = Quasimomentum::new(-PI + 6.1e-4 * j as f64);
            let ki = Quasimomentum::new(PI - 5.9e-4 * j as f64);
            let (e1, e2) = pump_amplitude(&env, ks.radians() + ki.radians());
            let bound = 1.3 * (e1.abs() + e2.abs()) + 1e-12;
            let g = coupling_planar(&cfg, &env, ks, ki).unwrap();
            assert!(g.norm() <= bound);
            let g2 = coupling_two_sublattice(&cfg, &env, ks, ki, Band::Plus, Band::Minus).unwrap();
            assert!(g2.norm() <= bound);
        }
    }

    #[test]
    fn grid_values_respect_the_amplitude_bound_everywhere() {
        let angles = WalkAngles::new(0.01, 9.0 * PI / 20.0);
        let cfg = SpdcConfig::new(angles, angles, PhaseSign::Correlated, 1.0, PhaseConvention::AbsSum);
        let env = PumpEnvelope::constant(1.0, 1.0);
        let grid = coupling_grid(&cfg, &env, 64).unwrap();
        for v in &grid.values {
            assert!(v.norm() <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn grid_degenerates_when_the_phase_is_undefined_everywhere() {
        let angles = WalkAngles::new(0.0, 0.0);
        let cfg = SpdcConfig::new(angles, angles, PhaseSign::Correlated, 1.0, PhaseConvention::AbsSum);
        let env = PumpEnvelope::constant(1.0, 1.0);
        match coupling_grid(&cfg, &env, 16) {
            Err(Error::GridDegenerate { invalid, total }) => {
                assert_eq!(invalid, total);
            }
            other => panic!("expected GridDegenerate, got {other:?}"),
        }
    }

    #[test]
    fn wide_gaussian_matches_the_constant_pump() {
        let angles = WalkAngles::new(0.01, 0.001);
        let cfg = SpdcConfig::new(angles, angles, PhaseSign::Correlated, 1.0, PhaseConvention::AbsSum);
        let wide = coupling_grid(&cfg, &PumpEnvelope::gaussian(1.0, 1.0, 500.0), 64).unwrap();
        let flat = coupling_grid(&cfg, &PumpEnvelope::constant(1.0, 1.0), 64).unwrap();
        for (a, b) in wide.values.iter().zip(flat.values.iter()) {
            assert!((a - b).norm() <= 1e-4 * b.norm() + 1e-15);
        }
    }

    #[test]
    fn narrower_gaussian_never_increases_the_magnitude() {
        let angles = WalkAngles::new(0.01, 0.001);
        let cfg = SpdcConfig::new(angles, angles, PhaseSign::Correlated, 1.0, PhaseConvention::AbsSum);
        let narrow = coupling_grid(&cfg, &PumpEnvelope::gaussian(1.0, 1.0, 1.5), 64).unwrap();
        let wide = coupling_grid(&cfg, &PumpEnvelope::gaussian(1.0, 1.0, 6.0), 64).unwrap();
        for (a, b) in narrow.values.iter().zip(wide.values.iter()) {
            assert!(a.norm() <= b.norm() + 1e-12);
        }
    }

    #[test]
    fn coarse_and_fine_grids_agree_at_shared_momenta() {
        let angles = WalkAngles::new(0.01, 0.001);
        let cfg = SpdcConfig::new(angles, angles, PhaseSign::Correlated, 1.0, PhaseConvention::AbsSum);
        let env = PumpEnvelope::constant(1.0, 1.0);
        let coarse = coupling_grid(&cfg, &env, 32).unwrap();
        let fine = coupling_grid(&cfg, &env, 64).unwrap();
        for i in 0..32 {
            for j in 0..32 {
                let a = coarse.value(i, j);
                let b = fine.value(2 * i, 2 * j);
                assert!((a - b).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn position_map_of_a_constant_grid_is_a_point() {
        let grid = CouplingGrid {
            num_k: 16,
            k_values: brillouin_grid(16),
            values: vec![C64::new(0.7, 0.0); 256],
            invalid_cells: 0,
        };
        let map = joint_position_map(&grid).unwrap();
        let center = map.site_index(0);
        assert!(close(map.value(center, center), 1.0, 1e-12));
        assert!(close(map.values.iter().sum::<f64>(), 1.0, 1e-12));
    }

    #[test]
    fn position_map_obeys_the_shift_theorem() {
        let k_values = brillouin_grid(16);
        let mut values = Vec::with_capacity(256);
        for &ks in &k_values {
            for &ki in &k_values {
                values.push(C64::from_polar(1.0, ks - ki));
            }
        }
        let grid = CouplingGrid {
            num_k: 16,
            k_values,
            values,
            invalid_cells: 0,
        };
        let map = joint_position_map(&grid).unwrap();
        let peak = map.value(map.site_index(1), map.site_index(-1));
        assert!(close(peak, 1.0, 1e-12));
    }

    #[test]
    fn position_map_rejects_invalid_cells() {
        let mut values = vec![C64::new(1.0, 0.0); 256];
        values[10] = C64::new(f64::NAN, f64::NAN);
        let grid = CouplingGrid {
            num_k: 16,
            k_values: brillouin_grid(16),
            values,
            invalid_cells: 1,
        };
        assert!(matches!(joint_position_map(&grid), Err(Error::InvalidGrid)));
    }

    #[test]
    fn periodic_maxima_counting() {
        assert_eq!(periodic_local_maxima(&[0.0, 1.0, 0.0, 2.0, 0.5, 0.1]), 2);
        // the boundary wraps: the first sample can be a maximum
        assert_eq!(periodic_local_maxima(&[3.0, 1.0, 0.0, 1.0, 0.0, 1.5]), 2);
        assert_eq!(periodic_local_maxima(&[0.0, 1.0, 0.0, 1.0, 0.0, 1.5]), 3);
        assert_eq!(periodic_local_maxima(&[1.0, 1.0, 1.0]), 0);
    }
}
