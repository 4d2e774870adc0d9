//! The restart chain on a concrete landscape.
//!
//! From `x`, the chain moves to `D(x)` with probability `p·1_A(x)` and
//! otherwise redraws from `μ`. The hitting time `τ(ε)` of `L(ε)` has a
//! geometric tail whose exponent is the log spectral radius of the kernel
//! restricted to `B(ε)`; [`exact_tail_exponent`] computes it directly and
//! [`simulate_tau`] estimates the survival curve by Monte Carlo.

use std::fmt::Write as _;

use nalgebra::{DMatrix, Schur};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::{DiscreteLandscape, NodeId, RestartSet};

/// Below this many states the spectral radius comes from a dense eigensolver.
pub const DENSE_LIMIT: usize = 64;
/// Relative change in the power-iteration ratio that counts as converged.
pub const POWER_TOL: f64 = 1e-12;
/// Survival probabilities below `NOISE_COUNT / n_runs` are not fitted.
pub const NOISE_COUNT: f64 = 50.0;

#[derive(Debug, Clone)]
pub struct RestartKernel {
    ids: Vec<NodeId>,
    energy: Vec<f64>,
    mass: Vec<f64>,
    /// `p·1_A(x)`.
    descend_prob: Vec<f64>,
    target: Vec<usize>,
    p: f64,
}

/// Where trajectories start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    Restart,
    Node(NodeId),
}

pub fn build_kernel(
    landscape: &DiscreteLandscape,
    p: f64,
    set: &RestartSet,
) -> Result<RestartKernel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("p = {p} outside [0, 1]")));
    }
    if *set == RestartSet::G1 && p != 1.0 {
        return Err(Error::input("restart set g1 fixes p = 1"));
    }
    let in_a = landscape.restart_mask(set)?;
    let n = landscape.len();
    Ok(RestartKernel {
        ids: landscape.ids().to_vec(),
        energy: landscape.energies().to_vec(),
        mass: landscape.masses().to_vec(),
        descend_prob: in_a.iter().map(|&a| if a { p } else { 0.0 }).collect(),
        target: (0..n).map(|i| landscape.descent_index(i)).collect(),
        p,
    })
}

impl RestartKernel {
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Transition probabilities out of `id`, merged and sorted by target id.
    pub fn row(&self, id: NodeId) -> Result<Vec<(NodeId, f64)>> {
        let i = self
            .ids
            .binary_search(&id)
            .map_err(|_| Error::input(format!("unknown node id {id}")))?;
        let stay = self.descend_prob[i];
        let mut row: Vec<(NodeId, f64)> = self
            .ids
            .iter()
            .zip(&self.mass)
            .map(|(&y, &m)| (y, (1.0 - stay) * m))
            .collect();
        row[self.target[i]].1 += stay;
        row.retain(|&(_, w)| w > 0.0);
        Ok(row)
    }

    fn above(&self, epsilon: f64) -> Result<Vec<bool>> {
        let eps = self
            .energy
            .iter()
            .copied()
            .find(|&f| (f - epsilon).abs() <= 1e-12 * epsilon.abs().max(1.0))
            .ok_or_else(|| Error::input(format!("epsilon = {epsilon} is not an attained energy")))?;
        Ok(self.energy.iter().map(|&f| f > eps).collect())
    }

    /// One step of `π ↦ π M` on the block `B(ε)`.
    fn step(&self, above: &[bool], pi: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let mut restarted = 0.0;
        for (i, &w) in pi.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let stay = self.descend_prob[i];
            let t = self.target[i];
            if above[t] {
                out[t] += w * stay;
            }
            restarted += w * (1.0 - stay);
        }
        for (i, o) in out.iter_mut().enumerate() {
            if above[i] {
                *o += restarted * self.mass[i];
            }
        }
    }

    fn start_vector(&self, above: &[bool], start: Start) -> Result<Vec<f64>> {
        match start {
            Start::Restart => Ok(self
                .mass
                .iter()
                .zip(above)
                .map(|(&m, &b)| if b { m } else { 0.0 })
                .collect()),
            Start::Node(id) => {
                let i = self
                    .ids
                    .binary_search(&id)
                    .map_err(|_| Error::input(format!("unknown node id {id}")))?;
                let mut v = vec![0.0; self.len()];
                if above[i] {
                    v[i] = 1.0;
                }
                Ok(v)
            }
        }
    }

    /// Exact `P(τ(ε) > N)` for `N = 0..=n_max`.
    pub fn exact_survival(&self, epsilon: f64, start: Start, n_max: usize) -> Result<Vec<f64>> {
        let above = self.above(epsilon)?;
        let mut pi = self.start_vector(&above, start)?;
        let mut next = vec![0.0; pi.len()];
        let mut out = Vec::with_capacity(n_max + 1);
        for _ in 0..=n_max {
            out.push(pi.iter().sum());
            self.step(&above, &pi, &mut next);
            std::mem::swap(&mut pi, &mut next);
        }
        Ok(out)
    }

    /// Dense copy of the block on `B(ε)`, rows and columns in index order.
    pub fn dense_block(&self, epsilon: f64) -> Result<DMatrix<f64>> {
        let above = self.above(epsilon)?;
        let idx: Vec<usize> = (0..self.len()).filter(|&i| above[i]).collect();
        let mut pos = vec![usize::MAX; self.len()];
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = k;
        }
        let n = idx.len();
        let mut m = DMatrix::zeros(n, n);
        for (r, &i) in idx.iter().enumerate() {
            let stay = self.descend_prob[i];
            for (c, &j) in idx.iter().enumerate() {
                m[(r, c)] = (1.0 - stay) * self.mass[j];
            }
            if pos[self.target[i]] != usize::MAX {
                m[(r, pos[self.target[i]])] += stay;
            }
        }
        Ok(m)
    }
}

/// `log ρ` of the kernel restricted to `B(ε)`, started from `μ`.
pub fn exact_tail_exponent(kernel: &RestartKernel, epsilon: f64) -> Result<f64> {
    let above = kernel.above(epsilon)?;
    let n_above = above.iter().filter(|&&b| b).count();
    if n_above == 0 {
        return Err(Error::degenerate("B(epsilon) is empty; tau is 0"));
    }
    let rho = if n_above < DENSE_LIMIT {
        match spectral_radius_dense(kernel, epsilon) {
            Ok(rho) => rho,
            Err(e) => {
                log::debug!("{e}; falling back to power iteration");
                spectral_radius_power(kernel, &above)?
            }
        }
    } else {
        spectral_radius_power(kernel, &above)?
    };
    check_rho(rho)
}

fn check_rho(rho: f64) -> Result<f64> {
    if rho <= 0.0 {
        return Err(Error::degenerate("the hitting time is bounded; the tail exponent is -inf"));
    }
    if rho >= 1.0 - 1e-15 {
        return Err(Error::degenerate("B(epsilon) cannot be escaped"));
    }
    Ok(rho.ln())
}

pub fn spectral_radius_dense(kernel: &RestartKernel, epsilon: f64) -> Result<f64> {
    let m = kernel.dense_block(epsilon)?;
    let schur = Schur::try_new(m, 1e-14, 100_000)
        .ok_or_else(|| Error::numerical("dense eigensolver did not converge"))?;
    Ok(schur
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// Power iteration on the distribution restricted to `B(ε)`; the ratio of
/// successive masses converges to the spectral radius of the part reachable
/// from `μ`.
pub fn spectral_radius_power_from(kernel: &RestartKernel, epsilon: f64) -> Result<f64> {
    let above = kernel.above(epsilon)?;
    spectral_radius_power(kernel, &above)
}

fn spectral_radius_power(kernel: &RestartKernel, above: &[bool]) -> Result<f64> {
    let mut pi = kernel.start_vector(above, Start::Restart)?;
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|v| *v /= total);
    let mut next = vec![0.0; pi.len()];
    let mut prev_ratio = f64::NAN;
    let mut calm = 0;
    for _ in 0..1_000_000 {
        kernel.step(above, &pi, &mut next);
        let ratio: f64 = next.iter().sum();
        if ratio == 0.0 {
            return Ok(0.0);
        }
        next.iter_mut().for_each(|v| *v /= ratio);
        std::mem::swap(&mut pi, &mut next);
        if (ratio - prev_ratio).abs() <= POWER_TOL * ratio {
            calm += 1;
            if calm >= 5 {
                return Ok(ratio);
            }
        } else {
            calm = 0;
        }
        prev_ratio = ratio;
    }
    Err(Error::numerical("power iteration did not converge"))
}

/// Empirical survival counts: `survivors[N]` runs had `τ > N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivalCurve {
    pub n_runs: u64,
    pub survivors: Vec<u64>,
}

impl SurvivalCurve {
    pub fn p_hat(&self) -> Vec<f64> {
        self.survivors
            .iter()
            .map(|&s| s as f64 / self.n_runs as f64)
            .collect()
    }

    pub fn noise_floor(&self) -> f64 {
        NOISE_COUNT / self.n_runs as f64
    }

    pub fn fit(&self, window: Option<(usize, usize)>) -> Result<(f64, (usize, usize))> {
        fit_tail_exponent(&self.p_hat(), self.noise_floor(), window)
    }

    /// CSV with columns `N,survivors,p_hat`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,survivors,p_hat\n");
        for (n, (&s, p)) in self.survivors.iter().zip(self.p_hat()).enumerate() {
            writeln!(out, "{n},{s},{p}").unwrap();
        }
        out
    }
}

/// Default survival cap: `⌈50/|log ρ|⌉` when the exact exponent is known.
pub fn default_cap(exact_log_rho: Option<f64>) -> usize {
    match exact_log_rho {
        Some(l) if l < 0.0 && l.is_finite() => (50.0 / l.abs()).ceil() as usize,
        _ => 10_000,
    }
}

/// Runs `n_runs` independent trajectories up to `cap` steps. Run `k` uses
/// stream `k` of a ChaCha8 generator keyed by `seed`, so results do not
/// depend on scheduling.
pub fn simulate_tau(
    kernel: &RestartKernel,
    epsilon: f64,
    start: Start,
    n_runs: u64,
    seed: u64,
    cap: usize,
) -> Result<SurvivalCurve> {
    if n_runs == 0 {
        return Err(Error::input("n_runs must be at least 1"));
    }
    let above = kernel.above(epsilon)?;
    let restart = WeightedIndex::new(&kernel.mass)
        .map_err(|e| Error::input(format!("restart measure: {e}")))?;
    let start_index = match start {
        Start::Restart => None,
        Start::Node(id) => Some(
            kernel
                .ids
                .binary_search(&id)
                .map_err(|_| Error::input(format!("unknown node id {id}")))?,
        ),
    };
    let taus: Vec<usize> = (0..n_runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(run);
            let mut x = start_index.unwrap_or_else(|| restart.sample(&mut rng));
            let mut k = 0;
            while above[x] && k <= cap {
                let u: f64 = rng.random();
                x = if u < kernel.descend_prob[x] {
                    kernel.target[x]
                } else {
                    restart.sample(&mut rng)
                };
                k += 1;
            }
            k
        })
        .collect();
    let mut survivors = vec![0u64; cap + 1];
    for tau in taus {
        // τ > N for N < τ
        for s in survivors.iter_mut().take(tau.min(cap + 1)) {
            *s += 1;
        }
    }
    Ok(SurvivalCurve { n_runs, survivors })
}

/// Least-squares slope of `log P(τ > N)` against `N`. The default window
/// starts at 0 and extends while the survival stays at or above `floor`.
pub fn fit_tail_exponent(
    p_hat: &[f64],
    floor: f64,
    window: Option<(usize, usize)>,
) -> Result<(f64, (usize, usize))> {
    let (lo, hi) = match window {
        Some(w) => w,
        None => {
            let len = p_hat.iter().take_while(|&&p| p >= floor && p > 0.0).count();
            if len == 0 {
                return Err(Error::input("survival curve is below the noise floor everywhere"));
            }
            (0, len - 1)
        }
    };
    if hi <= lo || hi >= p_hat.len() {
        return Err(Error::input(format!("fit window ({lo}, {hi}) is empty or out of range")));
    }
    if p_hat[lo..=hi].iter().any(|&p| p <= 0.0) {
        return Err(Error::input("survival curve has zeros inside the fit window"));
    }
    let xs: Vec<f64> = (lo..=hi).map(|n| n as f64).collect();
    let ys: Vec<f64> = p_hat[lo..=hi].iter().map(|p| p.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok((sxy / sxx, (lo, hi)))
}

/// Exact and Monte Carlo tail exponents side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub exact_log_rho: f64,
    pub mc_exponent: f64,
    pub n_runs: u64,
    pub fit_window: (usize, usize),
}

pub fn estimate_tail(
    kernel: &RestartKernel,
    epsilon: f64,
    n_runs: u64,
    seed: u64,
) -> Result<(TailEstimate, SurvivalCurve)> {
    let exact = exact_tail_exponent(kernel, epsilon)?;
    let curve = simulate_tau(kernel, epsilon, Start::Restart, n_runs, seed, default_cap(Some(exact)))?;
    let (slope, window) = curve.fit(None)?;
    Ok((
        TailEstimate {
            exact_log_rho: exact,
            mc_exponent: slope,
            n_runs,
            fit_window: window,
        },
        curve,
    ))
}
