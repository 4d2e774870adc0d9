//! Optimal randomization across the parametric landscape families.

use restart_rate::experiments::{default_family_range, linspace, run_family_sweep};
use restart_rate::profile_gen::{DEFAULT_A, DEFAULT_B, DEFAULT_C};
use restart_rate::rate::PStarOptions;
use restart_rate::Family;

fn main() -> restart_rate::Result<()> {
    for family in [Family::Exponential, Family::Polynomial, Family::Logarithmic] {
        let (lo, hi) = default_family_range(family)?;
        let t = run_family_sweep(
            family,
            &linspace(lo, hi, 8),
            (DEFAULT_A, DEFAULT_B, DEFAULT_C),
            &PStarOptions::default(),
        )?;
        println!("{family}");
        for row in &t.rows {
            let chosen = if row[3] == 1.0 { "G1" } else { "A2" };
            println!("  param {:>6.3}  p_best {:.4}  xi {:.6e}  {chosen}", row[0], row[1], row[2]);
        }
    }
    Ok(())
}
