//! Solve for the universal constants and turn a critical exponent into a
//! two-sided interval for the convergence rate.

use restart_rate::{rate_interval, solve_alpha_gamma};

fn main() -> restart_rate::Result<()> {
    let c = solve_alpha_gamma()?;
    println!("alpha* = {:.10}", c.alpha_star);
    println!("gamma* = {:.10}", c.gamma_star);
    println!("alpha* gamma* = {:.10}", c.product);
    println!("residuals = {:?}", c.residuals);

    for xi in [0.01, 0.1, 0.5] {
        let [lo, hi] = rate_interval(xi)?;
        println!("xi_crit = {xi}: rate in [{lo:.5}, {hi:.5}]");
    }
    Ok(())
}
