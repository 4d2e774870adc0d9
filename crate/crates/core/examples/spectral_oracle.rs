//! Compare the exact tail exponent of the restart chain with the critical
//! exponent of the extracted profile on random landscapes.

use restart_rate::chain::{build_kernel, exact_tail_exponent};
use restart_rate::rate::xi_crit;
use restart_rate::{bounds, AlgorithmConfig, DiscreteLandscape, RestartSet};

fn main() -> restart_rate::Result<()> {
    let product = bounds::constants().product;
    println!("{:>5} {:>4} {:>6} {:>14} {:>14} {:>14}", "seed", "n", "p", "log rho", "-xi_crit", "lower bound");
    for seed in 0..8 {
        let n = 20 + 25 * seed as usize;
        let l = DiscreteLandscape::random(n, n / 3, seed)?;
        let designs = [
            (AlgorithmConfig::g1(), RestartSet::G1),
            (AlgorithmConfig::a2(0.5), RestartSet::A2),
        ];
        for (config, set) in designs {
            let Ok(profile) = l.extract_profile(0.0, &set) else {
                println!("{seed:>5} {n:>4}: single well, skipped");
                break;
            };
            let kernel = build_kernel(&l, config.p, &set)?;
            let log_rho = exact_tail_exponent(&kernel, 0.0)?;
            let xi = xi_crit(&config, &profile)?.xi_crit;
            println!(
                "{seed:>5} {n:>4} {:>6.2} {log_rho:>14.10} {:>14.10} {:>14.10}",
                config.p,
                -xi,
                -product * xi
            );
        }
    }
    Ok(())
}
