//! Joint position-space correlation of the photon pair: the squared 2D
//! Fourier transform of Γ(k_s, k_i), normalized to a joint detection
//! probability over lattice sites.
//!
//! ```bash
//! cargo run -p splitstep --release --example position_correlations
//! ```

use splitstep::cli::figure_preset;
use splitstep::output::{normalize_grayscale, write_pgm};
use splitstep::spdc::{coupling_grid, joint_position_map, PhaseConvention, PumpEnvelope, SpdcConfig};
use splitstep::walk::WalkAngles;

fn main() {
    let num_k = 128;
    for name in ["2a", "2b"] {
        let p = figure_preset(name).unwrap();
        let angles = WalkAngles::new(p.theta1, p.theta2);
        let cfg = SpdcConfig::new(angles, angles, p.phase_sign, 1.0, PhaseConvention::AbsSum);
        let grid = coupling_grid(&cfg, &PumpEnvelope::constant(1.0, 1.0), num_k).unwrap();
        let map = joint_position_map(&grid).unwrap();

        // weight concentrated within a few sites of the origin
        let mut near = 0.0;
        for (i, &xs) in map.sites.iter().enumerate() {
            for (j, &xi) in map.sites.iter().enumerate() {
                if xs.abs() <= 2 && xi.abs() <= 2 {
                    near += map.value(i, j);
                }
            }
        }
        let (pixels, ..) = normalize_grayscale(&map.values);
        let path = format!("position_map_{name}.pgm");
        write_pgm(&path, num_k, num_k, &pixels).expect("write PGM");
        println!("{name}: weight within |x| <= 2 of the origin: {near:.4} -> {path}");
    }
}
