//! The critical exponent `ξ_crit(p)` and everything built on it.
//!
//! `Q(ξ, p)` is the defect of the renewal equation for the hitting time of
//! the target sublevel set: one minus the moment generating function of a
//! failed restart cycle. Its unique positive root is the tail exponent
//! `ξ_crit`. With `x = p e^ξ` and `w_j = q(j) + p2(j)`,
//!
//! ```text
//! Q(ξ,p) = 1 − (1−p) e^ξ/(1−x) Σ p1(j)
//!            − e^ξ Σ p2(j) x^j
//!            − (1−p) e^ξ Σ w_j Σ_{i<j} x^i
//! ```

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::error::{Error, Result};
use crate::profile::LandscapeProfile;

/// Default number of points in `p`-grids over `[0, 1)`.
pub const DEFAULT_GRID: usize = 512;

/// Restart-set mode of an algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Pure descent, restarting only at local minima (`p = 1`, `A = X \ F`).
    G1,
    /// Restart with probability `1 − p` everywhere (`A = X`).
    A2,
    /// Explicit restart set, encoded in the profile's `p1`/`p2` split.
    General,
}

impl Mode {
    /// The profile as seen by this mode: `G1` moves all outside mass to
    /// `p2`, `A2` moves it to `p1`, `General` uses the profile as given.
    pub fn view<'a>(&self, profile: &'a LandscapeProfile) -> Cow<'a, LandscapeProfile> {
        match self {
            Mode::G1 => Cow::Owned(profile.g1_view()),
            Mode::A2 => Cow::Owned(profile.a2_view()),
            Mode::General => Cow::Borrowed(profile),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::G1 => "g1",
            Mode::A2 => "a2",
            Mode::General => "general",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "g1" => Ok(Mode::G1),
            "a2" => Ok(Mode::A2),
            "general" => Ok(Mode::General),
            _ => Err(Error::input(format!("unknown mode '{s}' (expected g1, a2 or general)"))),
        }
    }
}

/// A design point: randomization level and restart-set mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmConfig {
    pub p: f64,
    pub mode: Mode,
}

impl AlgorithmConfig {
    pub fn g1() -> Self {
        Self { p: 1.0, mode: Mode::G1 }
    }

    pub fn a2(p: f64) -> Self {
        Self { p, mode: Mode::A2 }
    }

    pub fn general(p: f64) -> Self {
        Self { p, mode: Mode::General }
    }

    /// Checks admissibility against a profile. `A2` needs `p < 1`, as does
    /// a general restart set with free traps; `G1` needs `p = 1`.
    pub fn validate(&self, profile: &LandscapeProfile) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::input(format!("p = {} outside [0, 1]", self.p)));
        }
        match self.mode {
            Mode::G1 if self.p != 1.0 => Err(Error::input("mode g1 fixes p = 1")),
            Mode::A2 if self.p >= 1.0 => Err(Error::input("mode a2 requires p < 1")),
            Mode::General if self.p >= 1.0 && profile.has_free_traps() => Err(Error::input(
                "a restart set with free traps requires p < 1",
            )),
            _ => Ok(()),
        }
    }
}

/// Root-finding and optimization tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Bracket width at which bisection hands over to safeguarded Newton.
    pub handoff: f64,
    /// Target residual `|Q(ξ_crit, p)|`.
    pub residual: f64,
    /// Interval width for the golden-section search over `p`.
    pub optimizer: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            handoff: 1e-10,
            residual: 1e-12,
            optimizer: 1e-10,
        }
    }
}

/// Output of [`xi_crit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    pub xi_crit: f64,
    pub p: f64,
    pub mode: Mode,
    pub residual: f64,
    /// `[−α*γ*·ξ_crit, −ξ_crit]`.
    pub bounds: [f64; 2],
    /// Final root bracket.
    pub bracket: [f64; 2],
}

fn check_pole(p: f64, e: f64, s1: f64) -> Result<f64> {
    let denom = 1.0 - p * e;
    if s1 > 0.0 && denom == 0.0 {
        return Err(Error::numerical("pole: p e^xi = 1"));
    }
    Ok(denom)
}

/// `Q(ξ, p)` on the raw profile, without applying a mode view.
pub fn q_raw(xi: f64, p: f64, profile: &LandscapeProfile) -> Result<f64> {
    let e = xi.exp();
    let x = p * e;
    let s1 = profile.p1_total();
    let denom = check_pole(p, e, s1)?;
    let mut value = 1.0;
    if s1 > 0.0 && p < 1.0 {
        value -= (1.0 - p) * e / denom * s1;
    }
    let (mut xpow, mut geom) = (1.0, 0.0);
    for j in 0..=profile.max_depth() {
        let p2 = profile.p2_at(j);
        let w = profile.q_at(j) + p2;
        value -= e * p2 * xpow + (1.0 - p) * e * w * geom;
        geom += xpow;
        xpow *= x;
    }
    Ok(value)
}

/// `∂Q/∂ξ` on the raw profile.
pub fn dq_dxi_raw(xi: f64, p: f64, profile: &LandscapeProfile) -> Result<f64> {
    let e = xi.exp();
    let x = p * e;
    let s1 = profile.p1_total();
    let denom = check_pole(p, e, s1)?;
    let mut slope = 0.0;
    if s1 > 0.0 && p < 1.0 {
        slope += (1.0 - p) * s1 * e / (denom * denom);
    }
    // weighted geometric sum Σ_{i<j} (i+1) x^i, accumulated alongside x^j
    let (mut xpow, mut wgeom) = (1.0, 0.0);
    for j in 0..=profile.max_depth() {
        let p2 = profile.p2_at(j);
        let w = profile.q_at(j) + p2;
        slope += p2 * (j as f64 + 1.0) * e * xpow + (1.0 - p) * w * e * wgeom;
        wgeom += (j as f64 + 1.0) * xpow;
        xpow *= x;
    }
    Ok(-slope)
}

/// `Q(ξ, p)` for a configuration; the profile is viewed through the mode.
pub fn eval_q(xi: f64, config: &AlgorithmConfig, profile: &LandscapeProfile) -> Result<f64> {
    if !(0.0..=1.0).contains(&config.p) {
        return Err(Error::input(format!("p = {} outside [0, 1]", config.p)));
    }
    q_raw(xi, config.p, &config.mode.view(profile))
}

/// `∂Q/∂ξ` for a configuration.
pub fn eval_dq_dxi(xi: f64, config: &AlgorithmConfig, profile: &LandscapeProfile) -> Result<f64> {
    dq_dxi_raw(xi, config.p, &config.mode.view(profile))
}

/// `Q1(ξ) = 1 − e^ξ Σ p2(j) e^{jξ}`, the minimal-randomization case. Reads
/// `p2` as stored.
pub fn eval_q1(xi: f64, profile: &LandscapeProfile) -> Result<f64> {
    if profile.p2_total() <= 0.0 {
        return Err(Error::input("Q1 needs outside mass in p2 (use the g1 view)"));
    }
    let e = xi.exp();
    let sum: f64 = profile
        .p2
        .iter()
        .enumerate()
        .map(|(j, m)| m * (j as f64 * xi).exp())
        .sum();
    Ok(1.0 - e * sum)
}

/// `Q2(ξ, p) = (1 − e^ξ + (1−p) e^ξ Σ q(j) p^j e^{jξ}) / (1 − p e^ξ)`.
/// Requires `p2 ≡ 0`.
pub fn eval_q2(xi: f64, p: f64, profile: &LandscapeProfile) -> Result<f64> {
    if profile.p2_total() > 0.0 {
        return Err(Error::input("Q2 requires p2 = 0 (use the a2 view)"));
    }
    let denom = 1.0 - p * xi.exp();
    if denom == 0.0 {
        return Err(Error::numerical("pole: p e^xi = 1"));
    }
    Ok(q2_tilde(xi, p, profile) / denom)
}

/// Numerator of `Q2`: `(1 − p e^ξ)·Q2`.
pub fn q2_tilde(xi: f64, p: f64, profile: &LandscapeProfile) -> f64 {
    let e = xi.exp();
    let x = p * e;
    let mut sum = 0.0;
    let mut xpow = 1.0;
    for &q in &profile.q {
        sum += q * xpow;
        xpow *= x;
    }
    1.0 - e + (1.0 - p) * e * sum
}

/// `∂Q̃2/∂p = Σ q(j) p^{j−1} e^{(j+1)ξ} [j − (1+j)p]`.
pub fn q2_tilde_dp(xi: f64, p: f64, profile: &LandscapeProfile) -> f64 {
    let e = xi.exp();
    let x = p * e;
    let mut total = -profile.q_at(0) * e;
    // p^{j-1} e^{(j+1)ξ} = e^2 x^{j-1}
    let mut xpow = 1.0;
    for (j, &q) in profile.q.iter().enumerate().skip(1) {
        let j = j as f64;
        total += q * e * e * xpow * (j - (1.0 + j) * p);
        xpow *= x;
    }
    total
}

/// `∂Q̃2/∂ξ = −e^ξ + (1−p) Σ q(j)(j+1) p^j e^{(j+1)ξ}`.
pub fn q2_tilde_dxi(xi: f64, p: f64, profile: &LandscapeProfile) -> f64 {
    let e = xi.exp();
    let x = p * e;
    let mut sum = 0.0;
    let mut xpow = 1.0;
    for (j, &q) in profile.q.iter().enumerate() {
        sum += q * (j as f64 + 1.0) * xpow;
        xpow *= x;
    }
    -e + (1.0 - p) * e * sum
}

/// Unique positive root of `Q(·, p)` with default tolerances.
pub fn xi_crit(config: &AlgorithmConfig, profile: &LandscapeProfile) -> Result<RateResult> {
    xi_crit_with(config, profile, &Tolerances::default())
}

pub fn xi_crit_with(
    config: &AlgorithmConfig,
    profile: &LandscapeProfile,
    tol: &Tolerances,
) -> Result<RateResult> {
    config.validate(profile)?;
    let view = config.mode.view(profile);
    let (xi, bracket) = find_root(config.p, &view, tol)?;
    let residual = q_raw(xi, config.p, &view)?.abs();
    Ok(RateResult {
        xi_crit: xi,
        p: config.p,
        mode: config.mode,
        residual,
        bounds: bounds::rate_interval(xi)?,
        bracket,
    })
}

/// Bisection to the handoff width, then Newton safeguarded by the bracket.
fn find_root(p: f64, profile: &LandscapeProfile, tol: &Tolerances) -> Result<(f64, [f64; 2])> {
    let s1 = profile.p1_total();
    let has_pole = s1 > 0.0 && p > 0.0 && p < 1.0;
    // Past the pole (x ≥ 1) the formula changes sign; treat it as −∞.
    let eval = |xi: f64| -> Result<f64> {
        if has_pole && p * xi.exp() >= 1.0 {
            Ok(f64::NEG_INFINITY)
        } else {
            q_raw(xi, p, profile)
        }
    };

    let at_zero = eval(0.0)?;
    if at_zero.is_nan() || at_zero <= 0.0 {
        return Err(Error::numerical(format!(
            "Q(0, p) = {at_zero} is not positive; no positive root"
        )));
    }
    let mut lo = 0.0;
    let mut hi;
    if has_pole {
        hi = -p.ln();
    } else {
        // e^{(deg+1)ξ} must stay finite
        let cap = 700.0 / (profile.max_depth() as f64 + 3.0);
        hi = 1.0_f64.min(cap);
        loop {
            let v = eval(hi)?;
            if v <= 0.0 {
                break;
            }
            lo = hi;
            if hi >= cap {
                return Err(Error::numerical(format!(
                    "no sign change of Q(., {p}) below xi = {cap}"
                )));
            }
            hi = (hi * 2.0).min(cap);
        }
    }

    while hi - lo > tol.handoff {
        let mid = 0.5 * (lo + hi);
        if eval(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut xi = 0.5 * (lo + hi);
    for _ in 0..100 {
        let v = eval(xi)?;
        if v == 0.0 {
            return Ok((xi, [lo, hi]));
        }
        if v > 0.0 {
            lo = xi;
        } else {
            hi = xi;
        }
        let slope = dq_dxi_raw(xi, p, profile)?;
        let newton = xi - v / slope;
        let next = if slope < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == xi || (next - xi).abs() <= 2.0 * f64::EPSILON * xi.abs() {
            break;
        }
        xi = next;
    }
    Ok((xi, [lo, hi]))
}

/// Coefficients `c_ji` of `(1 − p e^ξ)·Q(ξ, p) = Σ_j e^{jξ} Σ_{i≤j} c_ji p^i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    /// Row `j` holds `c_j0 ..= c_jj`.
    pub rows: Vec<Vec<f64>>,
}

impl CoefficientTable {
    pub fn build(mode: Mode, profile: &LandscapeProfile) -> Self {
        let view = mode.view(profile);
        let n = view.max_depth() + 3;
        let mut rows: Vec<Vec<f64>> = (0..n).map(|j| vec![0.0; j + 1]).collect();
        // 1 − p e^ξ
        rows[0][0] += 1.0;
        rows[1][1] -= 1.0;
        // −(1−p) e^ξ Σp1
        let s1 = view.p1_total();
        rows[1][0] -= s1;
        rows[1][1] += s1;
        for j in 0..=view.max_depth() {
            let p2 = view.p2_at(j);
            // −p2(j) p^j e^{(j+1)ξ} (1 − p e^ξ)
            rows[j + 1][j] -= p2;
            rows[j + 2][j + 1] += p2;
            if j >= 1 {
                // −(1−p) w_j (e^ξ − p^j e^{(j+1)ξ}) after telescoping
                let w = view.q_at(j) + p2;
                rows[1][0] -= w;
                rows[1][1] += w;
                rows[j + 1][j] += w;
                rows[j + 1][j + 1] -= w;
            }
        }
        Self { rows }
    }

    /// Highest power of `e^ξ`, i.e. `(a ∨ b) + 2`.
    pub fn degree(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn coeff(&self, j: usize, i: usize) -> f64 {
        self.rows
            .get(j)
            .and_then(|row| row.get(i))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn eval(&self, xi: f64, p: f64) -> f64 {
        let e = xi.exp();
        let mut epow = 1.0;
        let mut total = 0.0;
        for row in &self.rows {
            let inner = row.iter().rev().fold(0.0, |acc, c| acc * p + c);
            total += epow * inner;
            epow *= e;
        }
        total
    }

    /// Coefficients in `p` of `Σ_i p^i · i · Σ_{j≥i} c_ji e^{jξ}`, the
    /// stationarity polynomial whose root is the optimal `p` at fixed `ξ`.
    pub fn stationarity_poly(&self, xi: f64) -> Vec<f64> {
        let e = xi.exp();
        let n = self.rows.len();
        (0..n)
            .map(|i| {
                let inner: f64 = (i..n).map(|j| self.coeff(j, i) * e.powi(j as i32)).sum();
                i as f64 * inner
            })
            .collect()
    }
}

/// Implicit derivative `dξ_crit/dp` for the `A2` view of the profile.
pub fn dxi_dp(p: f64, profile: &LandscapeProfile) -> Result<f64> {
    let view = profile.a2_view();
    let xi = xi_crit(&AlgorithmConfig::a2(p), &view)?.xi_crit;
    Ok(dxi_dp_at(xi, p, &view))
}

fn dxi_dp_at(xi: f64, p: f64, view: &LandscapeProfile) -> f64 {
    -q2_tilde_dp(xi, p, view) / q2_tilde_dxi(xi, p, view)
}

/// `q(1) − q(0)(1 − q(0))`: positive values force an interior optimum.
pub fn lemma1_margin(profile: &LandscapeProfile) -> f64 {
    let q0 = profile.q_at(0);
    profile.q_at(1) - q0 * (1.0 - q0)
}

/// Options for [`find_p_star_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PStarOptions {
    pub grid: usize,
    pub tol: Tolerances,
}

impl Default for PStarOptions {
    fn default() -> Self {
        Self {
            grid: DEFAULT_GRID,
            tol: Tolerances::default(),
        }
    }
}

/// Optimal randomization level within `A2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PStar {
    pub p_star: f64,
    pub xi: f64,
    /// Residuals of the stationarity equation `∂Q̃2/∂p = 0` and the root
    /// equation `Q̃2 = 0` at the optimum. Only the second is expected to
    /// vanish when the optimum sits at `p = 0`.
    pub residuals: [f64; 2],
    pub derivative: f64,
}

/// `ξ_crit` of the `A2` view at each `p` of the grid `k / n`, `k < n`.
pub fn a2_curve(profile: &LandscapeProfile, grid: &[f64], tol: &Tolerances) -> Result<Vec<f64>> {
    let view = profile.a2_view();
    grid.iter()
        .map(|&p| Ok(xi_crit_with(&AlgorithmConfig::a2(p), &view, tol)?.xi_crit))
        .collect()
}

/// `n` points `k/n`, `k = 0..n`, excluding `p = 1`.
pub fn unit_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 / n as f64).collect()
}

pub fn find_p_star(profile: &LandscapeProfile) -> Result<PStar> {
    find_p_star_with(profile, &PStarOptions::default())
}

/// Coarse grid, golden-section refinement, then bisection on the sign of
/// `dξ_crit/dp` when the refined bracket straddles a stationary point.
pub fn find_p_star_with(profile: &LandscapeProfile, opts: &PStarOptions) -> Result<PStar> {
    if opts.grid < 2 {
        return Err(Error::input("p-grid needs at least 2 points"));
    }
    let view = profile.a2_view();
    let tol = &opts.tol;
    let xi_at = |p: f64| -> Result<f64> {
        Ok(xi_crit_with(&AlgorithmConfig::a2(p), &view, tol)?.xi_crit)
    };
    let grid = unit_grid(opts.grid);
    let values = a2_curve(&view, &grid, tol)?;
    let k = argmax(&values);

    let upper_cap = 1.0 - 1e-12;
    let lo = if k == 0 { 0.0 } else { grid[k - 1] };
    let hi = if k + 1 < grid.len() { grid[k + 1] } else { upper_cap };

    let (mut a, mut b) = (lo, hi);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (xi_at(c)?, xi_at(d)?);
    while b - a > tol.optimizer {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = xi_at(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = xi_at(d)?;
        }
    }
    let mut best_p = 0.5 * (a + b);
    let mut best_xi = xi_at(best_p)?;
    if values[k] > best_xi {
        best_p = grid[k];
        best_xi = values[k];
    }

    // derivative polish
    let deriv = |p: f64| -> Result<f64> { Ok(dxi_dp_at(xi_at(p)?, p, &view)) };
    let (mut l, mut r) = (lo, hi);
    let (dl, dr) = (deriv(l)?, deriv(r)?);
    if dl > 0.0 && dr < 0.0 {
        for _ in 0..200 {
            let m = 0.5 * (l + r);
            if m <= l || m >= r {
                break;
            }
            if deriv(m)? > 0.0 {
                l = m;
            } else {
                r = m;
            }
        }
        let m = 0.5 * (l + r);
        let xm = xi_at(m)?;
        if xm >= best_xi {
            best_p = m;
            best_xi = xm;
        }
    }

    if best_p < 0.0 || (k == 0 && values[0] >= best_xi) {
        best_p = 0.0;
        best_xi = values[0];
    }
    Ok(PStar {
        p_star: best_p,
        xi: best_xi,
        residuals: [
            q2_tilde_dp(best_xi, best_p, &view),
            q2_tilde(best_xi, best_p, &view),
        ],
        derivative: dxi_dp_at(best_xi, best_p, &view),
    })
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chosen {
    A2,
    G1,
}

/// Best randomization level over `A2 ∪ {G1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PBest {
    pub p_best: f64,
    pub chosen: Chosen,
    pub xi: f64,
    pub xi_g1: f64,
    pub a2: PStar,
}

pub fn find_p_best(profile: &LandscapeProfile) -> Result<PBest> {
    find_p_best_with(profile, &PStarOptions::default())
}

/// Ties go to `G1`, which uses fewer random bits.
pub fn find_p_best_with(profile: &LandscapeProfile, opts: &PStarOptions) -> Result<PBest> {
    let a2 = find_p_star_with(profile, opts)?;
    let xi_g1 = xi_crit_with(&AlgorithmConfig::g1(), profile, &opts.tol)?.xi_crit;
    let (p_best, chosen, xi) = if xi_g1 >= a2.xi {
        (1.0, Chosen::G1, xi_g1)
    } else {
        (a2.p_star, Chosen::A2, a2.xi)
    };
    Ok(PBest {
        p_best,
        chosen,
        xi,
        xi_g1,
        a2,
    })
}

/// Left-hand side `Σ p2(j)/(1−q(0))^{j+1}` of the sufficient condition for a
/// nonzero optimal randomization, evaluated on the `G1` view, and whether
/// it reaches 1.
pub fn theorem2_check(profile: &LandscapeProfile) -> Result<(f64, bool)> {
    let q0 = profile.q_at(0);
    if q0 >= 1.0 {
        return Err(Error::degenerate("q(0) = 1: the condition divides by zero"));
    }
    let base = 1.0 - q0;
    let view = profile.g1_view();
    let lhs: f64 = view
        .p2
        .iter()
        .enumerate()
        .map(|(j, m)| m / base.powi(j as i32 + 1))
        .sum();
    Ok((lhs, lhs >= 1.0))
}

/// Smallest outside depth `a` that guarantees an interior optimum for fixed
/// `q(0)` and `min p2`.
pub fn corollary2_min_depth(q0: f64, p2_min: f64) -> Result<f64> {
    if !(q0 > 0.0 && q0 < 1.0) {
        return Err(Error::input(format!("q(0) = {q0} must lie in (0, 1)")));
    }
    if !(p2_min > 0.0 && p2_min.is_finite()) {
        return Err(Error::input(format!("p2_min = {p2_min} must be positive")));
    }
    Ok(-(1.0 + q0 / p2_min).ln() / (1.0 - q0).ln() - 1.0)
}
