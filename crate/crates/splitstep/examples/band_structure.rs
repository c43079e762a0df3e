//! Band structure of the split-step walk: quasi-energy, Bloch vector and
//! planar phase across the Brillouin zone, for one angle pair in each
//! topological sector.
//!
//! ```bash
//! cargo run -p splitstep --example band_structure
//! ```

use splitstep::output::{format_float, write_csv};
use splitstep::walk::{bloch_vector, brillouin_sample, dispersion, relative_phase, Quasimomentum, WalkAngles};

fn main() {
    let num_k = 256;
    let cases = [("winding", WalkAngles::new(0.4, 0.001)), ("trivial", WalkAngles::new(0.001, 0.4))];

    for (label, angles) in cases {
        let header: Vec<String> = ["k", "energy", "nx", "ny", "nz", "phi"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut rows = Vec::with_capacity(num_k);
        for j in 0..num_k {
            let k = Quasimomentum::new(brillouin_sample(j, num_k));
            let energy = dispersion(angles, k);
            let n = bloch_vector(angles, k).expect("gap stays open for these angles");
            let phi = relative_phase(angles, k).expect("phase defined for these angles");
            rows.push(vec![
                format_float(k.radians()),
                format_float(energy.radians()),
                format_float(n.nx),
                format_float(n.ny),
                format_float(n.nz),
                format_float(phi),
            ]);
        }
        let path = format!("band_structure_{label}.csv");
        write_csv(&path, &header, &rows).expect("write CSV");

        let e0 = dispersion(angles, Quasimomentum::new(0.0)).radians();
        let epi = dispersion(angles, Quasimomentum::new(std::f64::consts::PI)).radians();
        println!(
            "{label}: theta = ({}, {}), E(0) = {e0:.4}, E(pi) = {epi:.4} -> {path}",
            angles.theta1(),
            angles.theta2()
        );
    }

    // the bands touch where theta2 = -theta1 (at k = 0): the Bloch vector
    // is undefined there and reported as an error, not a garbage value
    let closed = bloch_vector(WalkAngles::new(0.5, -0.5), Quasimomentum::new(0.0));
    println!("gap closure example: {closed:?}");
}
