//! Universal constants `α*`, `γ*` of the two-sided rate bound.
//!
//! With the shape function `f(y) = y e^{1−y}`, `(α*, γ*)` is the unique
//! solution in `(1, ∞)²` of
//!
//! ```text
//! γ f(γ) + (1/α) f(1/α) = 1
//!     f(γ) +     f(1/α) = 1
//! ```
//!
//! and the asymptotic rate is sandwiched as
//! `−α*γ*·ξ_crit ≤ rate ≤ −ξ_crit`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Residual required of a solution.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub alpha_star: f64,
    pub gamma_star: f64,
    pub product: f64,
    pub residuals: [f64; 2],
}

/// `y e^{1−y}`; unimodal with maximum 1 at `y = 1`.
pub fn shape_fn(y: f64) -> f64 {
    y * (1.0 - y).exp()
}

fn shape_deriv(y: f64) -> f64 {
    (1.0 - y) * (1.0 - y).exp()
}

/// Residuals of the two equations at `(α, γ)`.
pub fn residuals(alpha: f64, gamma: f64) -> [f64; 2] {
    let u = 1.0 / alpha;
    [
        gamma * shape_fn(gamma) + u * shape_fn(u) - 1.0,
        shape_fn(gamma) + shape_fn(u) - 1.0,
    ]
}

fn norm(r: [f64; 2]) -> f64 {
    r[0].hypot(r[1])
}

fn jacobian(alpha: f64, gamma: f64) -> [[f64; 2]; 2] {
    let u = 1.0 / alpha;
    let du = -1.0 / (alpha * alpha);
    [
        [
            (shape_fn(u) + u * shape_deriv(u)) * du,
            shape_fn(gamma) + gamma * shape_deriv(gamma),
        ],
        [shape_deriv(u) * du, shape_deriv(gamma)],
    ]
}

/// Outcome of a single Newton run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NewtonOutcome {
    Converged(f64, f64),
    Diverged,
    Singular,
}

/// Damped Newton with backtracking from `(alpha, gamma)`, kept inside
/// `(1, ∞)²`.
pub fn newton(alpha: f64, gamma: f64, max_iter: usize) -> NewtonOutcome {
    match newton_raw(alpha, gamma, max_iter) {
        // α → 1 with γ → ∞ drives both residuals to 0 without a solution
        NewtonOutcome::Converged(a, _) if a < 1.0 + 1e-6 => NewtonOutcome::Diverged,
        other => other,
    }
}

fn newton_raw(mut alpha: f64, mut gamma: f64, max_iter: usize) -> NewtonOutcome {
    let mut r = residuals(alpha, gamma);
    for _ in 0..max_iter {
        if norm(r) < 1e-15 {
            return NewtonOutcome::Converged(alpha, gamma);
        }
        let j = jacobian(alpha, gamma);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 || !det.is_finite() {
            return NewtonOutcome::Singular;
        }
        let da = -(j[1][1] * r[0] - j[0][1] * r[1]) / det;
        let dg = -(-j[1][0] * r[0] + j[0][0] * r[1]) / det;
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-12 {
            let (a, g) = (alpha + t * da, gamma + t * dg);
            if a > 1.0 && g > 1.0 {
                let trial = residuals(a, g);
                if norm(trial) < norm(r) {
                    alpha = a;
                    gamma = g;
                    r = trial;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return if norm(r) < 1e-13 {
                NewtonOutcome::Converged(alpha, gamma)
            } else {
                NewtonOutcome::Diverged
            };
        }
        if alpha > 1e8 || gamma > 1e8 {
            return NewtonOutcome::Diverged;
        }
    }
    if norm(r) < 1e-13 {
        NewtonOutcome::Converged(alpha, gamma)
    } else {
        NewtonOutcome::Diverged
    }
}

/// `γ > 1` with `f(γ) = level`, for `level ∈ (0, 1)`.
fn gamma_for_level(level: f64) -> f64 {
    let (mut lo, mut hi) = (1.0, 2.0);
    while shape_fn(hi) > level {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if shape_fn(mid) > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Nested bisection: the second equation gives `γ` as a function of
/// `u = 1/α`, and the first is then a scalar equation in `u`.
fn nested_bisection() -> Option<(f64, f64)> {
    let g = |u: f64| {
        let gamma = gamma_for_level(1.0 - shape_fn(u));
        gamma * shape_fn(gamma) + u * shape_fn(u) - 1.0
    };
    let n = 200;
    let grid: Vec<f64> = (1..n).map(|k| k as f64 / n as f64).collect();
    let (mut lo, mut hi) = grid
        .windows(2)
        .find(|w| g(w[0]).signum() != g(w[1]).signum())
        .map(|w| (w[0], w[1]))?;
    let glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid).signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = 0.5 * (lo + hi);
    Some((1.0 / u, gamma_for_level(1.0 - shape_fn(u))))
}

/// Solves the system: damped Newton from the best point of a coarse grid,
/// falling back to nested bisection.
pub fn solve_alpha_gamma() -> Result<BoundConstants> {
    let mut seed = (2.0, 2.0);
    let mut best = f64::INFINITY;
    for i in 1..=40 {
        for k in 1..=40 {
            let (a, g) = (1.0 + 0.25 * i as f64, 1.0 + 0.25 * k as f64);
            let r = norm(residuals(a, g));
            if r < best {
                best = r;
                seed = (a, g);
            }
        }
    }
    let (alpha, gamma) = match newton(seed.0, seed.1, 100) {
        NewtonOutcome::Converged(a, g) => (a, g),
        _ => nested_bisection()
            .ok_or_else(|| Error::numerical("alpha/gamma system: no sign change found"))?,
    };
    let residuals = residuals(alpha, gamma);
    if residuals.iter().any(|r| r.abs() >= RESIDUAL_TOL) || alpha <= 1.0 || gamma <= 1.0 {
        return Err(Error::numerical(format!(
            "alpha/gamma system did not converge: ({alpha}, {gamma}) residuals {residuals:?}"
        )));
    }
    Ok(BoundConstants {
        alpha_star: alpha,
        gamma_star: gamma,
        product: alpha * gamma,
        residuals,
    })
}

static CONSTANTS: OnceLock<BoundConstants> = OnceLock::new();

/// Process-wide cached constants.
pub fn constants() -> &'static BoundConstants {
    CONSTANTS.get_or_init(|| solve_alpha_gamma().expect("alpha/gamma system is well posed"))
}

/// `[−α*γ*·ξ_crit, −ξ_crit]`.
pub fn rate_interval(xi_crit: f64) -> Result<[f64; 2]> {
    if !(xi_crit > 0.0 && xi_crit.is_finite()) {
        return Err(Error::input(format!("xi_crit = {xi_crit} must be positive")));
    }
    Ok([-constants().product * xi_crit, -xi_crit])
}
