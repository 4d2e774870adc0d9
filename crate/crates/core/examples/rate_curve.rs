//! Rate of the fixed-probability restart class across p for a random
//! profile, against the restart-only-at-minima algorithm.
//!
//! cargo run --example rate_curve -- [seed]

use restart_rate::profile_gen::generate;
use restart_rate::rate::{find_p_best, lemma1_margin, unit_grid, xi_crit};
use restart_rate::{AlgorithmConfig, FamilySpec};

fn main() -> restart_rate::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let profile = generate(&FamilySpec::random(seed))?;
    println!("a = {}, b = {}, c = {}", profile.a, profile.b, profile.c);
    println!("q(1) - q(0)(1 - q(0)) = {:.3e}", lemma1_margin(&profile));

    let g1 = xi_crit(&AlgorithmConfig::g1(), &profile)?;
    println!("G1: xi_crit = {:.6e}", g1.xi_crit);
    for p in unit_grid(16) {
        let r = xi_crit(&AlgorithmConfig::a2(p), &profile)?;
        let bar = "#".repeat((60.0 * r.xi_crit / g1.xi_crit.max(r.xi_crit)) as usize);
        println!("p = {p:.4}  xi = {:.6e}  {bar}", r.xi_crit);
    }

    let best = find_p_best(&profile)?;
    println!(
        "p* = {:.6} (xi {:.6e}); best overall: {:?} at p = {:.6}",
        best.a2.p_star, best.a2.xi, best.chosen, best.p_best
    );
    Ok(())
}
