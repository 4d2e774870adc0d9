//! Estimate the tail exponent of the hitting time by simulation and compare
//! with the exact value.
//!
//! cargo run --release --example monte_carlo_tail -- [runs] [seed]

use restart_rate::chain::{build_kernel, default_cap, exact_tail_exponent, simulate_tau, Start};
use restart_rate::{DiscreteLandscape, RestartSet};

fn main() -> restart_rate::Result<()> {
    let mut args = std::env::args().skip(1);
    let runs = args.next().and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);

    let l = DiscreteLandscape::path(&[0.0, 2.0, 1.0, 3.0])?;
    let kernel = build_kernel(&l, 1.0, &RestartSet::G1)?;
    let exact = exact_tail_exponent(&kernel, 0.0)?;
    let curve = simulate_tau(&kernel, 0.0, Start::Restart, runs, seed, default_cap(Some(exact)))?;
    let (slope, window) = curve.fit(None)?;

    let exact_curve = kernel.exact_survival(0.0, Start::Restart, 8)?;
    for (n, (p, e)) in curve.p_hat().iter().zip(exact_curve).enumerate() {
        println!("N = {n:>2}: simulated {p:.5}  exact {e:.5}");
    }
    println!("exact log rho = {exact:.6}");
    println!("fitted slope  = {slope:.6} over N in {window:?} ({runs} runs)");
    Ok(())
}
