//! When does randomizing beat restarting only at local minima?

use restart_rate::profile_gen::generate;
use restart_rate::rate::{corollary2_min_depth, find_p_best, theorem2_check};
use restart_rate::FamilySpec;

fn main() -> restart_rate::Result<()> {
    let mut agree = 0;
    let mut flagged = 0;
    for seed in 0..40 {
        let profile = generate(&FamilySpec::random(seed))?;
        let (lhs, holds) = theorem2_check(&profile)?;
        let best = find_p_best(&profile)?;
        let a2_wins = best.a2.xi >= best.xi_g1;
        if holds {
            flagged += 1;
            agree += a2_wins as usize;
        }
        println!(
            "seed {seed:>2}: lhs = {lhs:>8.4} condition {holds:<5}  best A2 {:.4e}  G1 {:.4e}",
            best.a2.xi, best.xi_g1
        );
    }
    println!("{agree}/{flagged} flagged profiles have an A2 design at least as fast as G1");

    for (q0, p2) in [(0.1, 0.01), (0.01, 0.001), (0.001, 1e-5)] {
        println!("q(0) = {q0}, min p2 = {p2}: depth >= {:.2}", corollary2_min_depth(q0, p2)?);
    }
    Ok(())
}
