//! Shared helpers for the integration suites: a self-contained ring-lattice
//! walk step (independent of the library's bounded-lattice code) and the
//! momentum-sector extraction used to verify the dispersion relation.
#![allow(dead_code)]

use num_complex::Complex64 as C64;
use splitstep::evolution::StepConvention;
use std::f64::consts::TAU;

/// One walk step on a periodic ring of `size` sites. The state is laid out
/// site-major, two spin amplitudes per site. Built directly from the step
/// definition (coin, translation, coin, translation) so it provides an
/// independent reference for the library's bounded-lattice implementation.
pub fn ring_step(state: &mut Vec<C64>, size: usize, theta1: f64, theta2: f64, convention: StepConvention) {
    let coin = |state: &mut Vec<C64>, theta: f64| {
        let (c, s) = (theta.cos(), theta.sin());
        for site in 0..size {
            let h = state[2 * site];
            let v = state[2 * site + 1];
            state[2 * site] = c * h - s * v;
            state[2 * site + 1] = s * h + c * v;
        }
    };
    let shift_v_left = |state: &mut Vec<C64>| {
        let old: Vec<C64> = (0..size).map(|s| state[2 * s + 1]).collect();
        for site in 0..size {
            state[2 * site + 1] = old[(site + 1) % size];
        }
    };
    let shift_h_right = |state: &mut Vec<C64>| {
        let old: Vec<C64> = (0..size).map(|s| state[2 * s]).collect();
        for site in 0..size {
            state[2 * site] = old[(site + size - 1) % size];
        }
    };
    coin(state, theta2);
    match convention {
        StepConvention::HalfStep => shift_v_left(state),
        StepConvention::FullStep => {
            shift_h_right(state);
            shift_v_left(state);
        }
    }
    coin(state, theta1);
    match convention {
        StepConvention::HalfStep => shift_h_right(state),
        StepConvention::FullStep => {
            shift_h_right(state);
            shift_v_left(state);
        }
    }
}

/// The 2×2 block of the one-step operator in the momentum sector
/// k = 2π m / size, extracted numerically from the ring operator.
pub fn sector_matrix(
    size: usize,
    m: usize,
    theta1: f64,
    theta2: f64,
    convention: StepConvention,
) -> [[C64; 2]; 2] {
    let k = TAU * m as f64 / size as f64;
    let norm = 1.0 / (size as f64).sqrt();
    let mut block = [[C64::new(0.0, 0.0); 2]; 2];
    for (col, spin) in [0usize, 1usize].iter().enumerate() {
        let mut state = vec![C64::new(0.0, 0.0); 2 * size];
        for site in 0..size {
            state[2 * site + spin] = norm * C64::from_polar(1.0, k * site as f64);
        }
        ring_step(&mut state, size, theta1, theta2, convention);
        for (row, spin_out) in [0usize, 1usize].iter().enumerate() {
            let mut overlap = C64::new(0.0, 0.0);
            for site in 0..size {
                let bra = norm * C64::from_polar(1.0, k * site as f64);
                overlap += bra.conj() * state[2 * site + spin_out];
            }
            block[row][col] = overlap;
        }
    }
    block
}

/// Eigenvalue phases of a 2×2 unitary block, as absolute values sorted
/// ascending (the sector spectrum is e^{∓iE}).
pub fn eigenphase_magnitudes(block: &[[C64; 2]; 2]) -> (f64, f64) {
    let tr = block[0][0] + block[1][1];
    let det = block[0][0] * block[1][1] - block[0][1] * block[1][0];
    let disc = (tr * tr - 4.0 * det).sqrt();
    let l1 = (tr + disc) / 2.0;
    let l2 = (tr - disc) / 2.0;
    let a = l1.arg().abs();
    let b = l2.arg().abs();
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}
