//! Mean against variance of the rate over 100 random profiles, written as
//! CSV and SVG.
//!
//! cargo run --release --example phase_transition -- [out_dir]

use std::path::PathBuf;

use restart_rate::experiments::{emit, run_phase_transition, Format};
use restart_rate::profile_gen::{DEFAULT_A, DEFAULT_B, DEFAULT_C};
use restart_rate::rate::Tolerances;

fn main() -> restart_rate::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let t = run_phase_transition(100, 64, 0, (DEFAULT_A, DEFAULT_B, DEFAULT_C), &Tolerances::default())?;
    for row in t.rows.iter().step_by(8) {
        println!("p = {:.4}  mean = {:.6e}  var = {:.3e}", row[0], row[1], row[2]);
    }
    println!("knee at p = {}", t.metadata["knee_p"]);
    emit(&t, Format::Csv, dir.join("phase_transition.csv"))?;
    emit(&t, Format::Svg, dir.join("phase_transition.svg"))?;
    println!("wrote {}", dir.join("phase_transition.{csv,svg}").display());
    Ok(())
}
