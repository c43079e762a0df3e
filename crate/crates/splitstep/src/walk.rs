//! Momentum-space description of the split-step quantum walk.
//!
//! One step of the walk composes two coin rotations with spin-dependent
//! half translations,
//!
//! ```text
//! U(θ₁, θ₂) = T_H R(θ₁) T_V R(θ₂),
//! ```
//!
//! where `R(θ)` is the real y-rotation coin, `T_V` moves the V component one
//! site left and `T_H` moves the H component one site right. Restricted to
//! the momentum sector k the step is a 2×2 unitary `U(k) = e^{-iH(k)}` with
//! `H(k) = E(k) n(k)·σ`, so the walk is fully described by
//!
//! * the quasi-energy dispersion `cos E(k) = cos k cos θ₁ cos θ₂ − sin θ₁ sin θ₂`,
//! * the unit Bloch vector `n(k)` with components
//!   `n_x = sin k sin θ₁ cos θ₂ / sin E`,
//!   `n_y = (cos k sin θ₁ cos θ₂ + sin θ₂ cos θ₁) / sin E`,
//!   `n_z = −sin k cos θ₁ cos θ₂ / sin E`,
//! * the band eigenvectors `u±(k)` of `n·σ`, and
//! * the planar angle `φ(k) = atan2(n_y, n_x)`, whose winding across the
//!   Brillouin zone labels the topological sector and which acts as the
//!   phase-matching phase for pair coupling.
//!
//! Everything here is a pure function of its arguments; the bands touch
//! (`sin E = 0`) on the lines θ₂ = ±θ₁ and there the Bloch vector is
//! reported as a [`Error::GapClosure`] rather than a garbage value.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance on |sin E| below which the bands are treated as touching.
pub const GAP_TOLERANCE: f64 = 1e-9;
/// Pole guard for the ratio form of the band eigenvectors.
const RATIO_POLE_TOLERANCE: f64 = 1e-12;
/// Both planar components below this bound make φ(k) undefined.
const PHASE_TOLERANCE: f64 = 1e-12;
/// Rounding slack allowed on the arccos argument before it counts as a bug.
const COS_OVERSHOOT: f64 = 1e-12;

/// Wrap an angle into the canonical branch (−π, π].
pub fn wrap_to_principal(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Wrap a momentum into the first Brillouin zone [−π, π).
fn wrap_to_zone(k: f64) -> f64 {
    let r = k.rem_euclid(TAU);
    if r >= PI {
        r - TAU
    } else {
        r
    }
}

/// The j-th point of the uniform `num_k`-point grid covering [−π, π).
pub fn brillouin_sample(j: usize, num_k: usize) -> f64 {
    -PI + (j as f64) * (TAU / num_k as f64)
}

/// Uniform momentum grid over the Brillouin zone, endpoint excluded.
pub fn brillouin_grid(num_k: usize) -> Vec<f64> {
    (0..num_k).map(|j| brillouin_sample(j, num_k)).collect()
}

/// Rotation-angle pair (θ₁, θ₂) defining a split-step walk.
///
/// Angles are wrapped into (−π, π] on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkAngles {
    theta1: f64,
    theta2: f64,
}

impl WalkAngles {
    pub fn new(theta1: f64, theta2: f64) -> Self {
        assert!(
            theta1.is_finite() && theta2.is_finite(),
            "walk angles must be finite, got ({theta1}, {theta2})"
        );
        Self {
            theta1: wrap_to_principal(theta1),
            theta2: wrap_to_principal(theta2),
        }
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }
}

/// Momentum in the first Brillouin zone [−π, π), wrapped on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quasimomentum(f64);

impl Quasimomentum {
    pub fn new(k: f64) -> Self {
        assert!(k.is_finite(), "quasimomentum must be finite, got {k}");
        Self(wrap_to_zone(k))
    }

    pub fn radians(&self) -> f64 {
        self.0
    }
}

/// Quasi-energy on the arccos principal branch [0, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiEnergy(f64);

impl QuasiEnergy {
    fn from_cosine(c: f64) -> Self {
        assert!(
            c.abs() <= 1.0 + COS_OVERSHOOT,
            "dispersion cosine {c} overshoots [-1, 1] beyond rounding slack"
        );
        Self(c.clamp(-1.0, 1.0).acos())
    }

    pub fn radians(&self) -> f64 {
        self.0
    }
}

/// Unit Bloch vector decomposing the walk Hamiltonian at one momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub nx: f64,
    pub ny: f64,
    pub nz: f64,
    pub energy: QuasiEnergy,
}

impl BlochVector {
    /// Euclidean norm of (nx, ny, nz); equals 1 up to rounding and plays the
    /// role of the eigenvalue scale λ in the eigenvector formulas.
    pub fn norm(&self) -> f64 {
        (self.nx * self.nx + self.ny * self.ny + self.nz * self.nz).sqrt()
    }
}

/// Band label for the two quasi-energy bands ±E(k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    Plus,
    Minus,
}

impl Band {
    pub fn sign(&self) -> f64 {
        match self {
            Band::Plus => 1.0,
            Band::Minus => -1.0,
        }
    }
}

/// Normalized two-component band eigenvector with a fixed gauge: the first
/// component is real and non-negative (the second is, when the first
/// vanishes), so outputs are deterministic and directly comparable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandEigenvector {
    band: Band,
    c0: C64,
    c1: C64,
}

impl BandEigenvector {
    fn normalized(band: Band, c0: C64, c1: C64) -> Self {
        let norm = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        assert!(norm > 1e-150, "eigenvector constructed from a null vector");
        let mut c0 = c0 / norm;
        let mut c1 = c1 / norm;
        let anchor = if c0.norm() > RATIO_POLE_TOLERANCE { c0 } else { c1 };
        let phase = anchor / anchor.norm();
        c0 /= phase;
        c1 /= phase;
        Self { band, c0, c1 }
    }

    /// Eigenvector via the component ratio (n_x + i n_y)/(n_z ± λ).
    ///
    /// Undefined at n_z = ∓λ where the ratio diverges; the caller must keep
    /// a distance of at least 1e-12 from that pole.
    pub fn ratio_form(bloch: &BlochVector, band: Band) -> Self {
        let lambda = bloch.norm();
        let denom = bloch.nz + band.sign() * lambda;
        assert!(
            denom.abs() > RATIO_POLE_TOLERANCE,
            "ratio form evaluated at its pole (n_z {} λ)",
            if band == Band::Plus { "= -" } else { "= +" }
        );
        let c0 = C64::new(1.0, 0.0);
        let c1 = C64::new(bloch.nx, bloch.ny) / denom;
        Self::normalized(band, c0, c1)
    }

    /// Eigenvector in closed form, (n_x − i n_y, ±λ − n_z) up to
    /// normalization; finite exactly where the ratio form has its pole.
    pub fn explicit_form(bloch: &BlochVector, band: Band) -> Self {
        let lambda = bloch.norm();
        let c0 = C64::new(bloch.nx, -bloch.ny);
        let c1 = C64::new(band.sign() * lambda - bloch.nz, 0.0);
        Self::normalized(band, c0, c1)
    }

    /// Eigenvector of n·σ for the requested band, switching to the closed
    /// form near the ratio-form pole.
    pub fn from_bloch(bloch: &BlochVector, band: Band) -> Self {
        let lambda = bloch.norm();
        if (bloch.nz + band.sign() * lambda).abs() > RATIO_POLE_TOLERANCE {
            Self::ratio_form(bloch, band)
        } else {
            Self::explicit_form(bloch, band)
        }
    }

    pub fn band(&self) -> Band {
        self.band
    }

    pub fn c0(&self) -> C64 {
        self.c0
    }

    pub fn c1(&self) -> C64 {
        self.c1
    }

    pub fn components(&self) -> [C64; 2] {
        [self.c0, self.c1]
    }
}

/// Quasi-energy E(k) on the principal branch.
pub fn dispersion(angles: WalkAngles, k: Quasimomentum) -> QuasiEnergy {
    let c = k.radians().cos() * angles.theta1().cos() * angles.theta2().cos()
        - angles.theta1().sin() * angles.theta2().sin();
    QuasiEnergy::from_cosine(c)
}

/// Unit Bloch vector n(k); fails with [`Error::GapClosure`] when the bands
/// touch and the decomposition is undefined.
pub fn bloch_vector(angles: WalkAngles, k: Quasimomentum) -> Result<BlochVector> {
    let energy = dispersion(angles, k);
    let sin_e = energy.radians().sin();
    if sin_e.abs() <= GAP_TOLERANCE {
        return Err(Error::GapClosure {
            k: k.radians(),
            energy: energy.radians(),
            tolerance: GAP_TOLERANCE,
        });
    }
    let (t1, t2, kr) = (angles.theta1(), angles.theta2(), k.radians());
    Ok(BlochVector {
        nx: kr.sin() * t1.sin() * t2.cos() / sin_e,
        ny: (kr.cos() * t1.sin() * t2.cos() + t2.sin() * t1.cos()) / sin_e,
        nz: -kr.sin() * t2.cos() * t1.cos() / sin_e,
        energy,
    })
}

/// Band eigenvector u±(k) of the walk Hamiltonian at momentum k.
pub fn band_eigenvector(angles: WalkAngles, k: Quasimomentum, band: Band) -> Result<BandEigenvector> {
    let bloch = bloch_vector(angles, k)?;
    Ok(BandEigenvector::from_bloch(&bloch, band))
}

/// Planar Bloch angle φ(k) = atan2(n_y, n_x) on the branch (−π, π].
///
/// Computed from the un-normalized numerators, so it stays defined across
/// gap closings; it is undefined only when both in-plane components vanish.
pub fn relative_phase(angles: WalkAngles, k: Quasimomentum) -> Result<f64> {
    let (t1, t2, kr) = (angles.theta1(), angles.theta2(), k.radians());
    let x = kr.sin() * t1.sin() * t2.cos();
    let y = kr.cos() * t1.sin() * t2.cos() + t2.sin() * t1.cos();
    if x.abs() <= PHASE_TOLERANCE && y.abs() <= PHASE_TOLERANCE {
        return Err(Error::PhaseUndefined { k: kr });
    }
    Ok(y.atan2(x))
}

/// φ sampled on the uniform Brillouin-zone grid and unwrapped so that
/// consecutive samples differ by less than π. The first sample is on the
/// principal branch.
pub fn relative_phase_curve(angles: WalkAngles, num_k: usize) -> Result<Vec<(f64, f64)>> {
    if num_k < 16 {
        return Err(Error::InvalidParameter(format!(
            "relative_phase_curve needs at least 16 samples, got {num_k}"
        )));
    }
    let mut curve: Vec<(f64, f64)> = Vec::with_capacity(num_k);
    let mut prev_raw = 0.0;
    for j in 0..num_k {
        let k = brillouin_sample(j, num_k);
        let raw = relative_phase(angles, Quasimomentum::new(k))?;
        if j == 0 {
            curve.push((k, raw));
        } else {
            let unwrapped = curve[j - 1].1 + wrap_to_principal(raw - prev_raw);
            curve.push((k, unwrapped));
        }
        prev_raw = raw;
    }
    Ok(curve)
}
