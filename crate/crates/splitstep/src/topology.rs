//! Topological diagnostics of the walk band structure.
//!
//! The per-band Zak phase is computed as a discretized Wilson loop,
//!
//! ```text
//! Z = −Im log ∏_j ⟨u(k_j)|u(k_{j+1})⟩,  k_M = k_0,
//! ```
//!
//! which is exactly invariant under any per-k gauge rotation of the
//! eigenvectors. The integer winding number counts how often the planar
//! angle φ(k) wraps as k crosses the Brillouin zone once, with the loop
//! closed through the periodicity φ(k + 2π) = φ(k); positive values mean
//! counterclockwise rotation of (n_x, n_y) with increasing k.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::walk::{
    band_eigenvector, brillouin_sample, relative_phase, relative_phase_curve, wrap_to_principal,
    Band, Quasimomentum, WalkAngles,
};

/// Smallest admissible Wilson-loop overlap magnitude.
const OVERLAP_TOLERANCE: f64 = 1e-6;
/// Largest admissible distance of the winding estimate from an integer.
const WINDING_RESIDUAL_LIMIT: f64 = 0.05;

/// Zak phases of the two bands and their sum, all reported in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZakResult {
    pub zak_plus: f64,
    pub zak_minus: f64,
    pub zak_total: f64,
    pub num_k: usize,
}

/// Integer winding of φ(k) with the rounding residual that quantified it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingResult {
    pub w: i32,
    pub residual: f64,
    pub samples: usize,
}

/// One cell of a phase-diagram sweep: a quantized winding number, or a
/// boundary marker where the computation degenerated (gap closing, undefined
/// phase, non-quantized estimate).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindingCell {
    Winding(i32),
    Boundary,
}

/// Winding-number map over a rectangle of coin angles.
#[derive(Debug, Clone)]
pub struct PhaseDiagram {
    pub theta1_values: Vec<f64>,
    pub theta2_values: Vec<f64>,
    /// Row-major over (θ₁ index, θ₂ index).
    pub cells: Vec<WindingCell>,
}

impl PhaseDiagram {
    pub fn cell(&self, i1: usize, i2: usize) -> WindingCell {
        self.cells[i1 * self.theta2_values.len() + i2]
    }
}

/// Berry phase of a discrete loop of normalized spinors, −Im log of the
/// product of consecutive overlaps with periodic wraparound.
pub fn wilson_loop_phase(spinors: &[[C64; 2]]) -> Result<f64> {
    let m = spinors.len();
    let mut product = C64::new(1.0, 0.0);
    for j in 0..m {
        let a = spinors[j];
        let b = spinors[(j + 1) % m];
        let overlap = a[0].conj() * b[0] + a[1].conj() * b[1];
        let mag = overlap.norm();
        if mag < OVERLAP_TOLERANCE {
            return Err(Error::DegenerateOverlap { magnitude: mag });
        }
        // keep the running product on the unit circle; only its phase matters
        product *= overlap / mag;
    }
    Ok(wrap_to_principal(-product.arg()))
}

fn band_spinors(angles: WalkAngles, num_k: usize, band: Band) -> Result<Vec<[C64; 2]>> {
    (0..num_k)
        .map(|j| {
            let k = Quasimomentum::new(brillouin_sample(j, num_k));
            band_eigenvector(angles, k, band).map(|u| u.components())
        })
        .collect()
}

/// Per-band Zak phases from the discretized Wilson loop.
pub fn zak_phase(angles: WalkAngles, num_k: usize) -> Result<ZakResult> {
    if num_k < 64 {
        return Err(Error::InvalidParameter(format!(
            "zak_phase needs at least 64 samples, got {num_k}"
        )));
    }
    let zak_plus = wilson_loop_phase(&band_spinors(angles, num_k, Band::Plus)?)?;
    let zak_minus = wilson_loop_phase(&band_spinors(angles, num_k, Band::Minus)?)?;
    Ok(ZakResult {
        zak_plus,
        zak_minus,
        zak_total: wrap_to_principal(zak_plus + zak_minus),
        num_k,
    })
}

/// The analytic diagnostic φ(−π/2) − φ(π/2), with both phases folded onto
/// the single-argument arctangent branch (−π/2, π/2].
///
/// For the split-step walk this evaluates to −2 atan(tan θ₂ / tan θ₁).
pub fn phi_difference(angles: WalkAngles) -> Result<f64> {
    let fold = |phi: f64| {
        if phi > FRAC_PI_2 {
            phi - PI
        } else if phi < -FRAC_PI_2 {
            phi + PI
        } else {
            phi
        }
    };
    let at = |k: f64| relative_phase(angles, Quasimomentum::new(k)).map(fold);
    Ok(at(-FRAC_PI_2)? - at(FRAC_PI_2)?)
}

/// The literal tangent ratio tan θ₂ / tan θ₁, reported next to
/// [`phi_difference`] for comparison.
pub fn tangent_ratio(angles: WalkAngles) -> f64 {
    angles.theta2().tan() / angles.theta1().tan()
}

/// Integer winding of the planar angle over one Brillouin zone.
pub fn winding_number(angles: WalkAngles, num_k: usize) -> Result<WindingResult> {
    if num_k < 64 {
        return Err(Error::InvalidParameter(format!(
            "winding_number needs at least 64 samples, got {num_k}"
        )));
    }
    let curve = relative_phase_curve(angles, num_k)?;
    let first = curve[0].1;
    let last = curve[num_k - 1].1;
    // close the loop across the zone boundary: φ at k_0 + 2π equals φ at k_0
    let closure = wrap_to_principal(wrap_to_principal(first) - wrap_to_principal(last));
    let turns = (last + closure - first) / TAU;
    let rounded = turns.round();
    let residual = (turns - rounded).abs();
    if residual >= WINDING_RESIDUAL_LIMIT {
        return Err(Error::NonQuantized { residual });
    }
    Ok(WindingResult {
        w: rounded as i32,
        residual,
        samples: num_k,
    })
}

/// Inclusive linear grid; a single-point grid sits at the range start.
pub fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    assert!(n >= 1, "linspace needs at least one point");
    if n == 1 {
        return vec![range.0];
    }
    let step = (range.1 - range.0) / (n - 1) as f64;
    (0..n).map(|i| range.0 + i as f64 * step).collect()
}

/// Winding number evaluated over a grid of coin angles; cells where the
/// computation degenerates become boundary markers instead of aborting the
/// sweep.
pub fn phase_diagram(
    theta1_range: (f64, f64),
    theta2_range: (f64, f64),
    grid: usize,
    num_k: usize,
) -> Result<PhaseDiagram> {
    if grid == 0 {
        return Err(Error::InvalidParameter("phase_diagram needs a non-empty grid".into()));
    }
    let theta1_values = linspace(theta1_range, grid);
    let theta2_values = linspace(theta2_range, grid);
    let cells: Vec<WindingCell> = theta1_values
        .par_iter()
        .flat_map_iter(|&t1| {
            let theta2_values = theta2_values.clone();
            theta2_values.into_iter().map(move |t2| {
                match winding_number(WalkAngles::new(t1, t2), num_k) {
                    Ok(res) => WindingCell::Winding(res.w),
                    Err(_) => WindingCell::Boundary,
                }
            })
        })
        .collect();
    Ok(PhaseDiagram {
        theta1_values,
        theta2_values,
        cells,
    })
}
