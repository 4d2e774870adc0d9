//! Experiment drivers producing [`ExperimentTable`]s, and their CSV, JSON
//! and SVG renderings.
//!
//! The plotted "rate" is always `ξ_crit`, so larger is faster.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::profile::LandscapeProfile;
use crate::profile_gen::{generate, Family, FamilySpec};
use crate::rate::{
    a2_curve, find_p_best_with, unit_grid, xi_crit_with, AlgorithmConfig, Chosen, PStarOptions,
    Tolerances,
};

pub const RATE_CONVENTION: &str = "rate = xi_crit (larger is faster)";
pub const DEFAULT_LANDSCAPES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "svg" => Ok(Self::Svg),
            other => Err(Error::input(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
            Self::Svg => "svg",
        })
    }
}

impl ExperimentTable {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let k = self
            .columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::input(format!("no column {name:?}")))?;
        Ok(self.rows.iter().map(|r| r[k]).collect())
    }

    fn check_nonempty(&self) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::input(format!("table {:?} has no rows", self.name)));
        }
        Ok(())
    }

    /// Header row then one line per row. Floats use the shortest
    /// representation that parses back to the same value.
    pub fn to_csv(&self) -> Result<String> {
        self.check_nonempty()?;
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn from_csv(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let columns = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for record in r.records() {
            let row = record?
                .iter()
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|e| Error::input(format!("bad number {s:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(Self {
            name: name.into(),
            columns,
            rows,
            metadata: BTreeMap::new(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        self.check_nonempty()?;
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Line plot with the first column on the x axis and one polyline per
    /// remaining column, sharing a y axis.
    pub fn to_svg(&self) -> Result<String> {
        self.check_nonempty()?;
        const W: f64 = 640.0;
        const H: f64 = 400.0;
        const M: f64 = 50.0;
        const COLOURS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
        let xs: Vec<f64> = self.rows.iter().map(|r| r[0]).collect();
        let ys: Vec<f64> = self.rows.iter().flat_map(|r| r[1..].iter().copied()).collect();
        let (x0, x1) = finite_range(&xs);
        let (y0, y1) = finite_range(&ys);
        let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
        let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

        let mut s = String::new();
        writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#).unwrap();
        writeln!(s, r#"<title>{}</title>"#, escape(&self.name)).unwrap();
        writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(&self.name)).unwrap();
        writeln!(s, r#"<line class="axis" x1="{M}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#, H - M, W - M, H - M).unwrap();
        writeln!(s, r#"<line class="axis" x1="{M}" y1="{M}" x2="{M}" y2="{}" stroke="black"/>"#, H - M).unwrap();
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#, W / 2.0, H - 12.0, escape(&self.columns[0])).unwrap();
        writeln!(s, r#"<text x="{M}" y="{}" font-size="10">{x0:.4}</text>"#, H - M + 14.0).unwrap();
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="end" font-size="10">{x1:.4}</text>"#, W - M, H - M + 14.0).unwrap();
        writeln!(s, r#"<text x="4" y="{}" font-size="10">{y0:.4}</text>"#, H - M).unwrap();
        writeln!(s, r#"<text x="4" y="{M}" font-size="10">{y1:.4}</text>"#).unwrap();
        for (k, name) in self.columns.iter().enumerate().skip(1) {
            let colour = COLOURS[(k - 1) % COLOURS.len()];
            let points: Vec<String> = self
                .rows
                .iter()
                .filter(|r| r[0].is_finite() && r[k].is_finite())
                .map(|r| format!("{:.2},{:.2}", sx(r[0]), sy(r[k])))
                .collect();
            writeln!(s, r#"<polyline data-column="{}" fill="none" stroke="{colour}" points="{}"/>"#, escape(name), points.join(" ")).unwrap();
            writeln!(s, r#"<text x="{}" y="{}" font-size="11" fill="{colour}">{}</text>"#, W - M + 4.0, M + 14.0 * k as f64, escape(name)).unwrap();
        }
        s.push_str("</svg>\n");
        Ok(s)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
            Format::Svg => self.to_svg(),
        }
    }
}

/// Writes `table` to `path` in the given format.
pub fn emit(table: &ExperimentTable, format: Format, path: impl AsRef<Path>) -> Result<()> {
    let text = table.render(format)?;
    std::fs::write(path, text)?;
    Ok(())
}

fn finite_range(v: &[f64]) -> (f64, f64) {
    let (lo, hi) = v
        .iter()
        .filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Default parameter range swept for each parametric family.
pub fn default_family_range(family: Family) -> Result<(f64, f64)> {
    match family {
        Family::Exponential => Ok((1.0, 4.0)),
        Family::Polynomial | Family::Logarithmic => Ok((0.25, 4.0)),
        Family::Random => Err(Error::input("the random family has no steepness parameter")),
    }
}

fn profile_meta(table: &mut ExperimentTable, profile: &LandscapeProfile) {
    table
        .meta("a", profile.a)
        .meta("b", profile.b)
        .meta("c", profile.c);
}

fn tol_meta(tol: &Tolerances) -> Value {
    json!({
        "handoff": tol.handoff,
        "residual": tol.residual,
        "optimizer": tol.optimizer,
    })
}

/// `ξ_crit` of the `A2` view across a `grid`-point p-grid, next to the
/// constant `G1` value.
pub fn run_rate_curve(profile: &LandscapeProfile, grid: usize, tol: &Tolerances) -> Result<ExperimentTable> {
    profile.validate()?;
    if grid == 0 {
        return Err(Error::input("grid must have at least one point"));
    }
    let ps = unit_grid(grid);
    let a2 = a2_curve(profile, &ps, tol)?;
    let g1 = xi_crit_with(&AlgorithmConfig::g1(), profile, tol)?.xi_crit;
    let mut t = ExperimentTable::new("rate_curve", &["p", "xi_crit_a2", "xi_crit_g1"]);
    t.rows = ps.iter().zip(&a2).map(|(&p, &x)| vec![p, x, g1]).collect();
    let best = a2.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    profile_meta(&mut t, profile);
    t.meta("grid", grid)
        .meta("tolerances", tol_meta(tol))
        .meta("rate_convention", RATE_CONVENTION)
        .meta("a2_beats_g1", best > g1);
    Ok(t)
}

/// Mean and population variance of the `A2` rate over `n_landscapes`
/// random profiles (seeds `seed, seed+1, ...`) at each grid point.
pub fn run_phase_transition(
    n_landscapes: usize,
    grid: usize,
    seed: u64,
    shape: (usize, usize, f64),
    tol: &Tolerances,
) -> Result<ExperimentTable> {
    if n_landscapes == 0 || grid == 0 {
        return Err(Error::input("need at least one landscape and one grid point"));
    }
    let (a, b, c) = shape;
    let ps = unit_grid(grid);
    let curves: Vec<Vec<f64>> = (0..n_landscapes)
        .into_par_iter()
        .map(|k| {
            let spec = FamilySpec::random(seed.wrapping_add(k as u64)).with_shape(a, b, c);
            a2_curve(&generate(&spec)?, &ps, tol)
        })
        .collect::<Result<_>>()?;
    let n = n_landscapes as f64;
    let mut t = ExperimentTable::new("phase_transition", &["p", "mean_rate", "var_rate"]);
    for (i, &p) in ps.iter().enumerate() {
        let mean = curves.iter().map(|c| c[i]).sum::<f64>() / n;
        let var = curves.iter().map(|c| (c[i] - mean).powi(2)).sum::<f64>() / n;
        t.rows.push(vec![p, mean, var]);
    }
    let mean = t.column("mean_rate")?;
    let var = t.column("var_rate")?;
    t.meta("seed", seed)
        .meta("n_landscapes", n_landscapes)
        .meta("grid", grid)
        .meta("a", a)
        .meta("b", b)
        .meta("c", c)
        .meta("tolerances", tol_meta(tol))
        .meta("rate_convention", RATE_CONVENTION)
        .meta("variance", "population");
    if let Some(k) = knee_index(&var, &mean) {
        t.meta("knee_p", ps[k]).meta("knee_index", k);
    }
    Ok(t)
}

/// Index of maximal curvature of the planar curve `(x_i, y_i)` after
/// rescaling both coordinates to `[0, 1]`. Endpoints are never chosen.
pub fn knee_index(x: &[f64], y: &[f64]) -> Option<usize> {
    if x.len() < 3 || x.len() != y.len() {
        return None;
    }
    let scale = |v: &[f64]| -> Vec<f64> {
        let (lo, hi) = finite_range(v);
        v.iter().map(|z| (z - lo) / (hi - lo)).collect()
    };
    let (x, y) = (scale(x), scale(y));
    (1..x.len() - 1)
        .map(|i| {
            let (dx, dy) = ((x[i + 1] - x[i - 1]) / 2.0, (y[i + 1] - y[i - 1]) / 2.0);
            let (ddx, ddy) = (x[i + 1] - 2.0 * x[i] + x[i - 1], y[i + 1] - 2.0 * y[i] + y[i - 1]);
            let speed = (dx * dx + dy * dy).powf(1.5);
            let k = if speed > 0.0 { (dx * ddy - dy * ddx).abs() / speed } else { 0.0 };
            (i, k)
        })
        .filter(|(_, k)| k.is_finite())
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}

/// Best randomization level over `A2 ∪ {G1}` for each family parameter.
/// `chosen` is 0 for `A2` and 1 for `G1`.
pub fn run_family_sweep(
    family: Family,
    params: &[f64],
    shape: (usize, usize, f64),
    opts: &PStarOptions,
) -> Result<ExperimentTable> {
    if params.is_empty() {
        return Err(Error::input("empty parameter grid"));
    }
    let (a, b, c) = shape;
    let rows: Vec<Vec<f64>> = params
        .par_iter()
        .map(|&s| {
            let spec = FamilySpec::parametric(family, s).with_shape(a, b, c);
            let best = find_p_best_with(&generate(&spec)?, opts)?;
            let chosen = match best.chosen {
                Chosen::A2 => 0.0,
                Chosen::G1 => 1.0,
            };
            Ok(vec![s, best.p_best, best.xi, chosen])
        })
        .collect::<Result<_>>()?;
    let mut t = ExperimentTable::new(
        format!("family_sweep_{family}"),
        &["param", "p_best", "xi_at_p_best", "chosen"],
    );
    t.rows = rows;
    t.meta("family", family.to_string())
        .meta("a", a)
        .meta("b", b)
        .meta("c", c)
        .meta("grid", opts.grid)
        .meta("tolerances", tol_meta(&opts.tol))
        .meta("rate_convention", RATE_CONVENTION);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1() -> LandscapeProfile {
        LandscapeProfile::new(vec![0.4, 0.1], vec![0.3, 0.2], vec![]).unwrap()
    }

    #[test]
    fn rate_curve_shape() {
        let t = run_rate_curve(&ex1(), 64, &Tolerances::default()).unwrap();
        assert_eq!(t.rows.len(), 64);
        assert!((t.rows[0][1] - (5.0f64 / 3.0).ln()).abs() < 1e-12);
        let g1 = t.column("xi_crit_g1").unwrap();
        assert!(g1.iter().all(|&v| v == g1[0]));
    }

    #[test]
    fn single_landscape_has_zero_variance() {
        let t = run_phase_transition(1, 16, 5, (20, 10, 1000.0), &Tolerances::default()).unwrap();
        assert!(t.column("var_rate").unwrap().iter().all(|&v| v == 0.0));
        assert_eq!(t.metadata["seed"], json!(5));
    }

    #[test]
    fn csv_round_trip() {
        let t = run_rate_curve(&ex1(), 32, &Tolerances::default()).unwrap();
        let back = ExperimentTable::from_csv(t.name.clone(), &t.to_csv().unwrap()).unwrap();
        assert_eq!(back.columns, t.columns);
        assert_eq!(back.rows, t.rows);
    }

    #[test]
    fn svg_polylines() {
        let t = run_phase_transition(3, 8, 1, (5, 4, 10.0), &Tolerances::default()).unwrap();
        let svg = t.to_svg().unwrap();
        assert_eq!(svg.matches("<polyline").count(), t.columns.len() - 1);
        assert!(svg.contains("class=\"axis\""));
    }

    #[test]
    fn empty_table_rejected() {
        let t = ExperimentTable::new("empty", &["x"]);
        assert!(t.to_csv().is_err());
        assert!(t.to_json().is_err());
    }

    #[test]
    fn flat_exponential_matches_direct() {
        let opts = PStarOptions { grid: 64, ..Default::default() };
        let t = run_family_sweep(Family::Exponential, &[1.0], (20, 10, 1000.0), &opts).unwrap();
        let flat = generate(&FamilySpec::parametric(Family::Exponential, 1.0)).unwrap();
        let direct = find_p_best_with(&flat, &opts).unwrap();
        assert_eq!(t.rows[0][1], direct.p_best);
        assert_eq!(t.rows[0][2], direct.xi);
    }

    #[test]
    fn knee_of_corner() {
        let x = [0.0, 1.0, 2.0, 2.0, 2.0];
        let y = [0.0, 0.0, 0.0, 1.0, 2.0];
        assert_eq!(knee_index(&x, &y), Some(2));
        assert_eq!(knee_index(&x[..2], &y[..2]), None);
    }

    #[test]
    fn linspace_ends() {
        let v = linspace(1.0, 4.0, 32);
        assert_eq!(v.len(), 32);
        assert_eq!(v[0], 1.0);
        assert_eq!(v[31], 4.0);
    }
}
