//! Real-space state-vector evolution of the split-step walk.
//!
//! The walker lives on a bounded lattice x ∈ [−L, L] with a two-component
//! spin per site. One step applies, right to left, the coin R(θ₂), a
//! translation, the coin R(θ₁) and a second translation. In the `HalfStep`
//! convention the first translation moves only the V component left and the
//! second only the H component right, which reproduces the momentum-space
//! dispersion of the walk exactly; `FullStep` applies the full two-sided
//! translation twice, which rescales the dispersion argument k → 2k.
//!
//! The lattice is sized so the walker never touches the edge: amplitudes at
//! x = ±L stay exactly zero, so the bounded evolution coincides with the
//! infinite-lattice one.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::walk::WalkAngles;

/// Spin/polarization basis labels, H = (1, 0)ᵀ and V = (0, 1)ᵀ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    H,
    V,
}

/// Which translation convention a step uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepConvention {
    HalfStep,
    FullStep,
}

impl StepConvention {
    /// Sites next to the edge that must be vacant before a step.
    fn margin(&self) -> usize {
        match self {
            StepConvention::HalfStep => 2,
            StepConvention::FullStep => 3,
        }
    }
}

/// Spatial coin profile: homogeneous angles, or θ₁ switching sign of the
/// lattice at x = 0 with a uniform θ₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleProfile {
    Homogeneous(WalkAngles),
    Boundary {
        theta1_left: f64,
        theta1_right: f64,
        theta2: f64,
    },
}

impl AngleProfile {
    pub fn boundary(theta1_left: f64, theta1_right: f64, theta2: f64) -> Self {
        // canonicalize through WalkAngles so stored angles are wrapped
        let left = WalkAngles::new(theta1_left, theta2);
        let right = WalkAngles::new(theta1_right, theta2);
        AngleProfile::Boundary {
            theta1_left: left.theta1(),
            theta1_right: right.theta1(),
            theta2: left.theta2(),
        }
    }

    pub fn theta1_at(&self, x: i64) -> f64 {
        match self {
            AngleProfile::Homogeneous(a) => a.theta1(),
            AngleProfile::Boundary {
                theta1_left,
                theta1_right,
                ..
            } => {
                if x < 0 {
                    *theta1_left
                } else {
                    *theta1_right
                }
            }
        }
    }

    pub fn theta2_at(&self, _x: i64) -> f64 {
        match self {
            AngleProfile::Homogeneous(a) => a.theta2(),
            AngleProfile::Boundary { theta2, .. } => *theta2,
        }
    }
}

/// The symmetric initial spin (1, i)/√2.
pub fn symmetric_spin() -> [C64; 2] {
    let s = 1.0 / 2.0_f64.sqrt();
    [C64::new(s, 0.0), C64::new(0.0, s)]
}

/// Complex amplitudes over (position, spin) on x ∈ [−L, L].
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    amps: Vec<C64>,
    half_extent: usize,
    step_count: usize,
}

impl WalkState {
    /// Walker localized at the origin with the given (normalized) spin.
    pub fn localized(half_extent: usize, spin: [C64; 2]) -> Result<Self> {
        if half_extent < 2 {
            return Err(Error::InvalidParameter(
                "lattice half extent must be at least 2".into(),
            ));
        }
        let norm = (spin[0].norm_sqr() + spin[1].norm_sqr()).sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidParameter("initial spin must not vanish".into()));
        }
        let sites = 2 * half_extent + 1;
        let mut amps = vec![C64::new(0.0, 0.0); 2 * sites];
        let center = 2 * half_extent; // site x = 0, spin H
        amps[center] = spin[0] / norm;
        amps[center + 1] = spin[1] / norm;
        Ok(Self {
            amps,
            half_extent,
            step_count: 0,
        })
    }

    /// State from a raw amplitude vector laid out as [x = −L..L] × [H, V];
    /// the amplitudes are normalized to unit total weight.
    pub fn from_amplitudes(half_extent: usize, amps: Vec<C64>) -> Result<Self> {
        let expected = 2 * (2 * half_extent + 1);
        if amps.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "amplitude vector has length {}, lattice needs {expected}",
                amps.len()
            )));
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq < 1e-24 {
            return Err(Error::InvalidParameter("amplitude vector must not vanish".into()));
        }
        let norm = norm_sq.sqrt();
        Ok(Self {
            amps: amps.into_iter().map(|a| a / norm).collect(),
            half_extent,
            step_count: 0,
        })
    }

    pub fn half_extent(&self) -> usize {
        self.half_extent
    }

    pub fn step_count(&self) -> usize {
        self.step_count
    }

    fn index(&self, x: i64, spin: Spin) -> usize {
        let l = self.half_extent as i64;
        debug_assert!(x.abs() <= l);
        let site = (x + l) as usize;
        2 * site + if spin == Spin::H { 0 } else { 1 }
    }

    pub fn amplitude(&self, x: i64, spin: Spin) -> C64 {
        self.amps[self.index(x, spin)]
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Marginal position distribution P(x), indexed by x + L.
    pub fn position_distribution(&self) -> Vec<f64> {
        self.amps
            .chunks_exact(2)
            .map(|site| site[0].norm_sqr() + site[1].norm_sqr())
            .collect()
    }

    /// Extreme occupied positions, or None for a null state.
    pub fn support(&self) -> Option<(i64, i64)> {
        let l = self.half_extent as i64;
        let occupied: Vec<i64> = (-l..=l)
            .filter(|&x| {
                self.amplitude(x, Spin::H) != C64::new(0.0, 0.0)
                    || self.amplitude(x, Spin::V) != C64::new(0.0, 0.0)
            })
            .collect();
        Some((*occupied.first()?, *occupied.last()?))
    }

    fn check_margin(&self, margin: usize) -> Result<()> {
        // amplitudes move at most one site per translation, so support can
        // only enter the edge band by being caught here first; scanning the
        // band alone is equivalent to scanning the whole lattice
        let l = self.half_extent as i64;
        let limit = l - margin as i64;
        let zero = C64::new(0.0, 0.0);
        for x in (-l..-limit).chain(limit + 1..=l) {
            if self.amplitude(x, Spin::H) != zero || self.amplitude(x, Spin::V) != zero {
                return Err(Error::EdgeOverflow {
                    half_extent: self.half_extent,
                    step: self.step_count,
                });
            }
        }
        Ok(())
    }

    /// Rotate every site's spin by the coin angle, which takes one value on
    /// each side of the origin.
    fn apply_coin(&mut self, theta_left: f64, theta_right: f64) {
        let l = self.half_extent as i64;
        let left = (theta_left.cos(), theta_left.sin());
        let right = (theta_right.cos(), theta_right.sin());
        for x in -l..=l {
            let (c, s) = if x < 0 { left } else { right };
            let ih = self.index(x, Spin::H);
            let h = self.amps[ih];
            let v = self.amps[ih + 1];
            self.amps[ih] = c * h - s * v;
            self.amps[ih + 1] = s * h + c * v;
        }
    }

    fn shift_v_left(&mut self) {
        let l = self.half_extent as i64;
        for x in -l..l {
            let dst = self.index(x, Spin::V);
            let src = self.index(x + 1, Spin::V);
            self.amps[dst] = self.amps[src];
        }
        let last = self.index(l, Spin::V);
        self.amps[last] = C64::new(0.0, 0.0);
    }

    fn shift_h_right(&mut self) {
        let l = self.half_extent as i64;
        for x in (-l + 1..=l).rev() {
            let dst = self.index(x, Spin::H);
            let src = self.index(x - 1, Spin::H);
            self.amps[dst] = self.amps[src];
        }
        let first = self.index(-l, Spin::H);
        self.amps[first] = C64::new(0.0, 0.0);
    }

    fn shift_full(&mut self) {
        self.shift_h_right();
        self.shift_v_left();
    }
}

/// Advance the state by one walk step. Fails with [`Error::EdgeOverflow`]
/// when the occupied region is too close to the lattice edge for the step
/// to complete without touching it.
pub fn step(state: &mut WalkState, profile: &AngleProfile, convention: StepConvention) -> Result<()> {
    state.check_margin(convention.margin())?;
    state.apply_coin(profile.theta2_at(-1), profile.theta2_at(0));
    match convention {
        StepConvention::HalfStep => state.shift_v_left(),
        StepConvention::FullStep => state.shift_full(),
    }
    state.apply_coin(profile.theta1_at(-1), profile.theta1_at(0));
    match convention {
        StepConvention::HalfStep => state.shift_h_right(),
        StepConvention::FullStep => state.shift_full(),
    }
    state.step_count += 1;
    Ok(())
}

/// Position distribution summary of one evolution step.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkStats {
    /// P(x) indexed by x + L over the lattice the stats were taken on.
    pub distribution: Vec<f64>,
    pub mean: f64,
    pub sigma: f64,
    pub step_count: usize,
}

impl WalkStats {
    pub fn from_state(state: &WalkState) -> Self {
        let distribution = state.position_distribution();
        let l = state.half_extent() as i64;
        Self::from_distribution(distribution, -l, state.step_count())
    }

    fn from_distribution(distribution: Vec<f64>, first_site: i64, step_count: usize) -> Self {
        let mut mean = 0.0;
        let mut second = 0.0;
        for (i, p) in distribution.iter().enumerate() {
            let x = first_site + i as i64;
            mean += x as f64 * p;
            second += (x as f64) * (x as f64) * p;
        }
        let sigma = (second - mean * mean).max(0.0).sqrt();
        Self {
            distribution,
            mean,
            sigma,
            step_count,
        }
    }
}

/// Evolve for `steps` steps, returning one stats record per step including
/// the initial state, so the result has `steps + 1` entries.
pub fn evolve(
    initial: &WalkState,
    profile: &AngleProfile,
    steps: usize,
    convention: StepConvention,
) -> Result<Vec<WalkStats>> {
    let required = match convention {
        StepConvention::HalfStep => 2 * steps + 2,
        StepConvention::FullStep => 4 * steps + 2,
    };
    if initial.half_extent() <= required {
        return Err(Error::EdgeOverflow {
            half_extent: initial.half_extent(),
            step: initial.step_count(),
        });
    }
    let mut state = initial.clone();
    let mut stats = Vec::with_capacity(steps + 1);
    stats.push(WalkStats::from_state(&state));
    for _ in 0..steps {
        step(&mut state, profile, convention)?;
        stats.push(WalkStats::from_state(&state));
    }
    Ok(stats)
}

/// Least-squares slope of log σ_N against log N over the fit range.
pub fn scaling_exponent(stats: &[WalkStats], fit_range: (usize, usize)) -> Result<f64> {
    let (n_min, n_max) = fit_range;
    let points: Vec<(f64, f64)> = stats
        .iter()
        .filter(|s| s.step_count >= n_min.max(1) && s.step_count <= n_max && s.sigma > 0.0)
        .map(|s| ((s.step_count as f64).ln(), s.sigma.ln()))
        .collect();
    if points.len() < 2 {
        return Err(Error::InsufficientData { n_min, n_max });
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in points {
        cov += (x - mean_x) * (y - mean_y);
        var += (x - mean_x) * (x - mean_x);
    }
    if var == 0.0 {
        return Err(Error::InsufficientData { n_min, n_max });
    }
    Ok(cov / var)
}

/// Symmetric binomial distribution after N coin flips: the classical
/// random-walk baseline with σ = √N.
pub fn classical_baseline(steps: usize) -> WalkStats {
    assert!(steps >= 1, "classical baseline needs at least one step");
    let n = steps;
    let mut distribution = vec![0.0; 2 * n + 1];
    let mut p = 0.5_f64.powi(n as i32);
    for j in 0..=n {
        // position x = 2j − N at index x + N
        distribution[2 * j] = p;
        p *= (n - j) as f64 / (j + 1) as f64;
    }
    WalkStats::from_distribution(distribution, -(n as i64), steps)
}

/// Probability of finding the walker within `radius` sites of the origin
/// after `steps` half-step evolutions from the symmetric localized start.
pub fn bound_state_fraction(profile: &AngleProfile, steps: usize, radius: usize) -> Result<f64> {
    let half_extent = 2 * steps + 3;
    let initial = WalkState::localized(half_extent, symmetric_spin())?;
    let stats = evolve(&initial, profile, steps, StepConvention::HalfStep)?;
    let last = stats.last().expect("evolve returns at least the initial stats");
    let l = half_extent as i64;
    let fraction = last
        .distribution
        .iter()
        .enumerate()
        .filter(|(i, _)| (*i as i64 - l).abs() <= radius as i64)
        .map(|(_, p)| p)
        .sum();
    Ok(fraction)
}
