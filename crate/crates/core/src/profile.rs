//! Depth profiles: the distributional summary that fully determines `Q(ξ, p)`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a profile.
pub const MASS_TOL: f64 = 1e-12;
/// Tolerance on the outside/inside mass ratio.
pub const RATIO_TOL: f64 = 1e-9;

/// Depth-indexed `μ`-masses of a landscape relative to the well of the
/// target sublevel set.
///
/// `q[j]` is the mass inside the target well at depth `j`; `p1[j]` and
/// `p2[j]` are the masses outside it whose descent ends in a local minimum
/// inside the restart set (`p1`) or in its complement (`p2`). `a` and `b`
/// are the largest supported depths outside and inside the well, and `c`
/// is the outside/inside mass ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeProfile {
    pub a: usize,
    pub b: usize,
    pub c: f64,
    pub q: Vec<f64>,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
}

impl LandscapeProfile {
    /// Builds a profile from the three mass vectors, deriving `a`, `b` and
    /// `c`, and validates it. `p1` and `p2` are zero-padded to equal length;
    /// trailing zero depths are trimmed.
    pub fn new(q: Vec<f64>, p1: Vec<f64>, p2: Vec<f64>) -> Result<Self> {
        let profile = Self::from_masses(q, p1, p2);
        profile.validate()?;
        Ok(profile)
    }

    /// Same as [`LandscapeProfile::new`] without validation. Useful for
    /// degenerate profiles (for instance an empty trap side) that the rate
    /// formulas can still evaluate.
    pub fn from_masses(mut q: Vec<f64>, mut p1: Vec<f64>, mut p2: Vec<f64>) -> Self {
        trim_zeros(&mut q);
        let len = p1.len().max(p2.len());
        p1.resize(len, 0.0);
        p2.resize(len, 0.0);
        while p1.len() > 1 && p1[p1.len() - 1] == 0.0 && p2[p2.len() - 1] == 0.0 {
            p1.pop();
            p2.pop();
        }
        let inside: f64 = q.iter().sum();
        let outside: f64 = p1.iter().sum::<f64>() + p2.iter().sum::<f64>();
        let c = if inside > 0.0 { outside / inside } else { f64::INFINITY };
        Self {
            a: p1.len().saturating_sub(1),
            b: q.len().saturating_sub(1),
            c,
            q,
            p1,
            p2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q.len() != self.b + 1 {
            return Err(Error::input(format!(
                "q has {} entries, expected b + 1 = {}",
                self.q.len(),
                self.b + 1
            )));
        }
        if self.p1.len() != self.a + 1 || self.p2.len() != self.a + 1 {
            return Err(Error::input(format!(
                "p1/p2 have {}/{} entries, expected a + 1 = {}",
                self.p1.len(),
                self.p2.len(),
                self.a + 1
            )));
        }
        let all = self.q.iter().chain(&self.p1).chain(&self.p2);
        if all.clone().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::input("profile masses must be finite and nonnegative"));
        }
        let total: f64 = all.sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::input(format!("profile masses sum to {total}, expected 1")));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::input(format!("mass ratio c = {} must be positive", self.c)));
        }
        let ratio = self.trap_total() / self.q_total();
        if (ratio - self.c).abs() > RATIO_TOL * self.c.max(1.0) {
            return Err(Error::input(format!(
                "mass ratio c = {} disagrees with masses ({ratio})",
                self.c
            )));
        }
        if self.q[self.b] <= 0.0 {
            return Err(Error::input("q[b] must be positive (b is the largest inside depth)"));
        }
        if self.p1[self.a].max(self.p2[self.a]) <= 0.0 {
            return Err(Error::input(
                "p1[a] or p2[a] must be positive (a is the largest outside depth)",
            ));
        }
        Ok(())
    }

    /// `q(j)`, zero outside the stored range.
    pub fn q_at(&self, j: usize) -> f64 {
        self.q.get(j).copied().unwrap_or(0.0)
    }

    pub fn p1_at(&self, j: usize) -> f64 {
        self.p1.get(j).copied().unwrap_or(0.0)
    }

    pub fn p2_at(&self, j: usize) -> f64 {
        self.p2.get(j).copied().unwrap_or(0.0)
    }

    pub fn q_total(&self) -> f64 {
        self.q.iter().sum()
    }

    pub fn p1_total(&self) -> f64 {
        self.p1.iter().sum()
    }

    pub fn p2_total(&self) -> f64 {
        self.p2.iter().sum()
    }

    /// Total mass outside the target well.
    pub fn trap_total(&self) -> f64 {
        self.p1_total() + self.p2_total()
    }

    /// `a ∨ b`.
    pub fn max_depth(&self) -> usize {
        self.a.max(self.b)
    }

    /// Whether some outside mass descends into a local minimum inside the
    /// restart set, i.e. whether the decomposition's third part is nonempty.
    pub fn has_free_traps(&self) -> bool {
        self.p1.iter().any(|&m| m > 0.0)
    }

    /// Smallest `p2(j)` over `j ∈ [0, a]`.
    pub fn p2_min(&self) -> f64 {
        self.p2.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// The same depth weights with all outside mass assigned to `p2`, as seen
    /// by the minimal-randomization algorithm.
    pub fn g1_view(&self) -> Self {
        let trap = self.p1.iter().zip(&self.p2).map(|(x, y)| x + y).collect();
        Self {
            p1: vec![0.0; self.a + 1],
            p2: trap,
            ..self.clone()
        }
    }

    /// The same depth weights with all outside mass assigned to `p1`, as seen
    /// by algorithms that may restart anywhere.
    pub fn a2_view(&self) -> Self {
        let trap = self.p1.iter().zip(&self.p2).map(|(x, y)| x + y).collect();
        Self {
            p1: trap,
            p2: vec![0.0; self.a + 1],
            ..self.clone()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let profile: Self = serde_json::from_str(text)?;
        profile.validate()?;
        Ok(profile)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn trim_zeros(v: &mut Vec<f64>) {
    while v.len() > 1 && v[v.len() - 1] == 0.0 {
        v.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1() -> LandscapeProfile {
        LandscapeProfile::new(vec![0.4, 0.1], vec![0.3, 0.2], vec![]).unwrap()
    }

    #[test]
    fn derives_depths_and_ratio() {
        let p = ex1();
        assert_eq!((p.a, p.b), (1, 1));
        assert!((p.c - 1.0).abs() < 1e-15);
        assert_eq!(p.p2, vec![0.0, 0.0]);
        assert!(p.has_free_traps());
    }

    #[test]
    fn views_move_trap_mass() {
        let p = LandscapeProfile::new(vec![0.4, 0.1], vec![0.1, 0.2], vec![0.2, 0.0]).unwrap();
        let g1 = p.g1_view();
        assert_eq!(g1.p1, vec![0.0, 0.0]);
        assert!((g1.p2[0] - 0.3).abs() < 1e-15);
        let a2 = p.a2_view();
        assert_eq!(a2.p2, vec![0.0, 0.0]);
        assert!((a2.p1[0] - 0.3).abs() < 1e-15);
        g1.validate().unwrap();
        a2.validate().unwrap();
    }

    #[test]
    fn rejects_bad_mass() {
        assert!(LandscapeProfile::new(vec![0.4, 0.1], vec![0.3, 0.3], vec![]).is_err());
        let mut p = ex1();
        p.c = 2.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn rejects_empty_trap_side() {
        assert!(LandscapeProfile::new(vec![1.0], vec![], vec![]).is_err());
    }

    #[test]
    fn json_layout() {
        let text = ex1().to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["a", "b", "c", "q", "p1", "p2"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(LandscapeProfile::from_json(&text).unwrap(), ex1());
    }
}
