//! Winding-number map over the coin-angle plane. Cells where the gap closes
//! or the phase degenerates are marked as boundary cells; they trace the
//! lines θ₂ = ±θ₁ separating the sectors.
//!
//! ```bash
//! cargo run -p splitstep --release --example phase_diagram
//! ```

use std::f64::consts::FRAC_PI_2;

use splitstep::output::{write_pgm, format_float, write_csv};
use splitstep::topology::{phase_diagram, WindingCell};

fn main() {
    let grid = 65;
    let pd = phase_diagram((-FRAC_PI_2, FRAC_PI_2), (-FRAC_PI_2, FRAC_PI_2), grid, 256)
        .expect("grid parameters are valid");

    let mut counts = std::collections::BTreeMap::new();
    for cell in &pd.cells {
        *counts
            .entry(match cell {
                WindingCell::Winding(w) => format!("w={w}"),
                WindingCell::Boundary => "boundary".to_string(),
            })
            .or_insert(0usize) += 1;
    }
    println!("cell counts over a {grid}x{grid} grid: {counts:?}");

    let mut header = vec!["theta1".to_string()];
    header.extend(pd.theta2_values.iter().map(|&t| format_float(t)));
    let mut rows = Vec::new();
    for (i1, &t1) in pd.theta1_values.iter().enumerate() {
        let mut row = vec![format_float(t1)];
        for i2 in 0..grid {
            row.push(match pd.cell(i1, i2) {
                WindingCell::Winding(w) => w.to_string(),
                WindingCell::Boundary => String::new(),
            });
        }
        rows.push(row);
    }
    write_csv("phase_diagram.csv", &header, &rows).expect("write CSV");

    let pixels: Vec<u8> = pd
        .cells
        .iter()
        .map(|cell| match cell {
            WindingCell::Winding(-1) => 64,
            WindingCell::Winding(0) => 128,
            WindingCell::Winding(1) => 192,
            WindingCell::Winding(_) => 32,
            WindingCell::Boundary => 255,
        })
        .collect();
    write_pgm("phase_diagram.pgm", grid, grid, &pixels).expect("write PGM");
    println!("wrote phase_diagram.csv and phase_diagram.pgm");
}
