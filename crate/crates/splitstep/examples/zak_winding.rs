//! Topological invariants of the two sectors: Wilson-loop Zak phases, the
//! phase-difference diagnostic with its literal tangent-ratio companion,
//! and the integer winding number.
//!
//! ```bash
//! cargo run -p splitstep --example zak_winding
//! ```

use splitstep::topology::{phi_difference, tangent_ratio, winding_number, zak_phase};
use splitstep::walk::WalkAngles;

fn main() {
    for (label, angles) in [
        ("winding sector", WalkAngles::new(0.4, 0.001)),
        ("trivial sector", WalkAngles::new(0.001, 0.4)),
    ] {
        let zak = zak_phase(angles, 1024).expect("gap open");
        let w = winding_number(angles, 512).expect("phase defined");
        let diff = phi_difference(angles).expect("phase defined at +-pi/2");
        println!(
            "{label} (theta1 = {}, theta2 = {}):",
            angles.theta1(),
            angles.theta2()
        );
        println!("  zak_plus  = {:+.6}", zak.zak_plus);
        println!("  zak_minus = {:+.6}", zak.zak_minus);
        println!("  zak_total = {:+.6}", zak.zak_total);
        println!("  winding   = {} (residual {:.2e})", w.w, w.residual);
        println!(
            "  phi(-pi/2) - phi(pi/2) = {diff:+.6}   tan ratio = {:+.6}",
            tangent_ratio(angles)
        );
    }
}
