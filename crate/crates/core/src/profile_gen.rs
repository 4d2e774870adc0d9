//! Random and parametric profile families.
//!
//! Every family produces inside weights for depths `0..=b` and outside
//! ("trap") weights for depths `0..=a`, rescaled so the inside mass is
//! `1/(1+c)` and the outside mass is `c/(1+c)`. How the outside mass is
//! divided between `p1` and `p2` is controlled by [`TrapSplit`].

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::LandscapeProfile;

/// Default largest outside depth used by the experiments.
pub const DEFAULT_A: usize = 20;
/// Default largest inside depth used by the experiments.
pub const DEFAULT_B: usize = 10;
/// Default outside/inside mass ratio used by the experiments.
pub const DEFAULT_C: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Random,
    /// Weights `β^j`, `β ≥ 1`.
    Exponential,
    /// Weights `(j+1)^α`, `α > 0`.
    Polynomial,
    /// Weights `ln(j+2)^γ`, `γ > 0`.
    Logarithmic,
}

impl Family {
    pub fn check_steepness(self, s: f64) -> Result<()> {
        let ok = match self {
            Family::Random => true,
            Family::Exponential => s >= 1.0 && s.is_finite(),
            Family::Polynomial | Family::Logarithmic => s > 0.0 && s.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::input(format!("steepness {s} outside the domain of the {self} family")))
        }
    }

    /// Unnormalized weight of depth `j`.
    fn weight(self, steepness: f64, j: usize) -> f64 {
        let j = j as f64;
        match self {
            Family::Random => unreachable!("random family has no deterministic weights"),
            Family::Exponential => steepness.powf(j),
            Family::Polynomial => (j + 1.0).powf(steepness),
            Family::Logarithmic => (j + 2.0).ln().powf(steepness),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Random => "random",
            Family::Exponential => "exponential",
            Family::Polynomial => "polynomial",
            Family::Logarithmic => "logarithmic",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(Family::Random),
            "exponential" | "exp" => Ok(Family::Exponential),
            "polynomial" | "poly" => Ok(Family::Polynomial),
            "logarithmic" | "log" => Ok(Family::Logarithmic),
            _ => Err(Error::input(format!("unknown family '{s}'"))),
        }
    }
}

/// Assignment of outside mass to `p1` (descent ends inside the restart set)
/// or `p2` (descent ends outside it).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrapSplit {
    /// Everything to `p2`: restarts happen only at local minima.
    G1,
    /// Everything to `p1`: the restart set is the whole space.
    A2,
    /// Each depth split by an independent uniform fraction.
    General,
}

impl FromStr for TrapSplit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "g1" => Ok(TrapSplit::G1),
            "a2" => Ok(TrapSplit::A2),
            "general" => Ok(TrapSplit::General),
            _ => Err(Error::input(format!("unknown trap split '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    /// `β`, `α` or `γ` depending on the family; ignored for random profiles.
    pub steepness: f64,
    pub a: usize,
    pub b: usize,
    pub c: f64,
    pub seed: u64,
    pub split: TrapSplit,
}

impl FamilySpec {
    /// A random-family spec with the default experiment constants.
    pub fn random(seed: u64) -> Self {
        Self {
            family: Family::Random,
            steepness: 1.0,
            a: DEFAULT_A,
            b: DEFAULT_B,
            c: DEFAULT_C,
            seed,
            split: TrapSplit::A2,
        }
    }

    /// A parametric spec with the default experiment constants.
    pub fn parametric(family: Family, steepness: f64) -> Self {
        Self {
            family,
            steepness,
            ..Self::random(0)
        }
    }

    pub fn with_shape(mut self, a: usize, b: usize, c: f64) -> Self {
        self.a = a;
        self.b = b;
        self.c = c;
        self
    }

    pub fn with_split(mut self, split: TrapSplit) -> Self {
        self.split = split;
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::input(format!("mass ratio c = {} must be positive", self.c)));
        }
        self.family.check_steepness(self.steepness)
    }
}

/// Dispatches to [`random_profile`] or [`parametric_profile`].
pub fn generate(spec: &FamilySpec) -> Result<LandscapeProfile> {
    match spec.family {
        Family::Random => random_profile(spec),
        _ => parametric_profile(spec),
    }
}

/// Profile with iid uniform inside and outside weights. Deterministic for a
/// fixed seed; every entry is strictly positive.
pub fn random_profile(spec: &FamilySpec) -> Result<LandscapeProfile> {
    if spec.family != Family::Random {
        return Err(Error::input("random_profile requires the random family"));
    }
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let inside: Vec<f64> = (0..=spec.b).map(|_| positive_uniform(&mut rng)).collect();
    let outside: Vec<f64> = (0..=spec.a).map(|_| positive_uniform(&mut rng)).collect();
    Ok(assemble(spec, inside, outside, &mut rng))
}

/// Profile whose inside and outside weights follow the family's steepness law.
pub fn parametric_profile(spec: &FamilySpec) -> Result<LandscapeProfile> {
    if spec.family == Family::Random {
        return Err(Error::input("parametric_profile requires a parametric family"));
    }
    spec.check()?;
    let weight = |j| spec.family.weight(spec.steepness, j);
    let inside: Vec<f64> = (0..=spec.b).map(weight).collect();
    let outside: Vec<f64> = (0..=spec.a).map(weight).collect();
    if inside.iter().chain(&outside).any(|w| !w.is_finite()) {
        return Err(Error::input(format!(
            "{} weights overflow at steepness {}",
            spec.family, spec.steepness
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    Ok(assemble(spec, inside, outside, &mut rng))
}

fn positive_uniform(rng: &mut impl Rng) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

fn normalize(weights: &mut [f64], target: f64) {
    let total: f64 = weights.iter().sum();
    let scale = target / total;
    weights.iter_mut().for_each(|w| *w *= scale);
}

fn assemble(
    spec: &FamilySpec,
    mut inside: Vec<f64>,
    mut outside: Vec<f64>,
    rng: &mut impl Rng,
) -> LandscapeProfile {
    normalize(&mut inside, 1.0 / (1.0 + spec.c));
    normalize(&mut outside, spec.c / (1.0 + spec.c));
    let zeros = vec![0.0; outside.len()];
    let (p1, p2) = match spec.split {
        TrapSplit::G1 => (zeros, outside),
        TrapSplit::A2 => (outside, zeros),
        TrapSplit::General => {
            let (p1, p2) = outside
                .iter()
                .map(|&w| {
                    let u: f64 = rng.random();
                    (w * u, w * (1.0 - u))
                })
                .unzip();
            (p1, p2)
        }
    };
    LandscapeProfile {
        a: spec.a,
        b: spec.b,
        c: spec.c,
        q: inside,
        p1,
        p2,
    }
}
