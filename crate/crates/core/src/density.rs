//! Growth-exponent fits of trace counts against width, and the integer
//! verdict on the fitted exponent.

use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rank::family_rank;
use crate::scheme::{certify, SchemeParams};
use crate::trace::TraceMatrix;
use crate::zoo::{FamilySpec, RankTruth};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountSource {
    /// Closed form when the family has one, enumeration otherwise.
    Auto,
    Enumerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitOptions {
    pub integrality_tolerance: f64,
    /// Largest tail residual (natural-log units) still called a clean fit.
    pub residual_tolerance: f64,
    /// Pairwise slope that rising slopes must pass to be called superpolynomial.
    pub superpolynomial_ceiling: f64,
    /// An integer verdict needs `max N / min N` at least this large.
    pub min_span: f64,
    pub count_source: CountSource,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            integrality_tolerance: 0.15,
            residual_tolerance: 0.25,
            superpolynomial_ceiling: 4.0,
            min_span: 10.0,
            count_source: CountSource::Auto,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GridPoint {
    #[serde(rename = "N")]
    pub width: usize,
    pub count: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Verdict {
    Integer(i64),
    Superpolynomial,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityEstimate {
    /// Slope of `log count` against `log N` over the tail of the grid.
    pub exponent: f64,
    #[serde(rename = "constant_K")]
    pub constant_k: f64,
    pub grid: Vec<GridPoint>,
    /// Index of the first grid point used by the fit.
    pub tail_start: usize,
    pub residual: f64,
    pub nearest_integer: i64,
    pub integrality_gap: f64,
    pub pairwise_slopes: Vec<f64>,
    pub verdict: Verdict,
}

impl DensityEstimate {
    pub fn integer(&self) -> Option<i64> {
        match self.verdict {
            Verdict::Integer(k) => Some(k),
            _ => None,
        }
    }

    /// Plot-ready rows `N,count,logN,logcount`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,count,logN,logcount\n");
        for p in &self.grid {
            let (x, y) = logs(p);
            writeln!(out, "{},{},{x},{y}", p.width, p.count).unwrap();
        }
        out
    }
}

fn logs(p: &GridPoint) -> (f64, f64) {
    ((p.width as f64).ln(), (p.count as f64).ln())
}

/// Powers of two from 16 to 4096 for closed-form families, 16 to 256 when
/// rows must be enumerated, and 4 to 12 for `full`.
pub fn default_grid(spec: &FamilySpec) -> Vec<usize> {
    match spec {
        FamilySpec::Full => (4..=12).collect(),
        FamilySpec::Product(..) => (4..=8).map(|e| 1 << e).collect(),
        _ => (4..=12).map(|e| 1 << e).collect(),
    }
}

pub fn count_at(spec: &FamilySpec, width: usize, source: CountSource) -> Result<u128> {
    if source == CountSource::Auto {
        if let Some(c) = spec.expected_count(width)? {
            return Ok(c);
        }
    }
    Ok(spec.generate(width)?.distinct_count() as u128)
}

pub fn fit(spec: &FamilySpec, grid: &[usize]) -> Result<DensityEstimate> {
    fit_with(spec, grid, &FitOptions::default())
}

pub fn fit_with(spec: &FamilySpec, grid: &[usize], opts: &FitOptions) -> Result<DensityEstimate> {
    check_grid(grid)?;
    let points = grid
        .par_iter()
        .map(|&w| count_at(spec, w, opts.count_source).map(|count| GridPoint { width: w, count }))
        .collect::<Result<Vec<_>>>()?;
    fit_points(points, opts)
}

fn check_grid(grid: &[usize]) -> Result<()> {
    if grid.len() < 4 {
        return Err(Error::Grid(format!("need at least 4 widths, got {}", grid.len())));
    }
    if grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Grid("widths must be positive and strictly increasing".into()));
    }
    Ok(())
}

/// Fits measured `(N, count)` pairs.
pub fn fit_points(points: Vec<GridPoint>, opts: &FitOptions) -> Result<DensityEstimate> {
    let widths: Vec<usize> = points.iter().map(|p| p.width).collect();
    check_grid(&widths)?;
    if points.iter().any(|p| p.count == 0) {
        return Err(Error::Grid("counts must be positive".into()));
    }

    let xy: Vec<(f64, f64)> = points.iter().map(logs).collect();
    let tail_start = xy.len() / 2;
    let tail = &xy[tail_start..];
    let (slope, intercept) = least_squares(tail);
    let residual = tail.iter().map(|&(x, y)| (y - (intercept + slope * x)).abs()).fold(0.0, f64::max);
    let nearest = slope.round();
    let gap = (slope - nearest).abs();

    let pairwise: Vec<f64> = xy.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
    let rising = pairwise.windows(2).all(|w| w[1] > w[0]);
    let top = *pairwise.last().expect("at least 3 slopes");
    let span = widths[widths.len() - 1] as f64 / widths[0] as f64;

    let verdict = if rising && top > opts.superpolynomial_ceiling {
        Verdict::Superpolynomial
    } else if gap <= opts.integrality_tolerance && residual <= opts.residual_tolerance && span >= opts.min_span {
        Verdict::Integer(nearest as i64)
    } else {
        Verdict::Inconclusive
    };

    Ok(DensityEstimate {
        exponent: slope,
        constant_k: intercept.exp(),
        grid: points,
        tail_start,
        residual,
        nearest_integer: nearest as i64,
        integrality_gap: gap,
        pairwise_slopes: pairwise,
        verdict,
    })
}

fn least_squares(xy: &[(f64, f64)]) -> (f64, f64) {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// `distinct_count(m) ≤ K · width^ℓ`.
pub fn check_bound(m: &TraceMatrix, k: f64, exponent: f64) -> bool {
    m.distinct_count() as f64 <= k * (m.width() as f64).powf(exponent)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankAtWidth {
    #[serde(rename = "N")]
    pub width: usize,
    pub rank: usize,
}

/// Fitted exponent, stabilized switch rank and least certifiable scheme size
/// for one family, side by side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoincidenceReport {
    pub family: FamilySpec,
    pub window: usize,
    pub expected_rank: RankTruth,
    pub family_exponent: f64,
    pub verdict: Verdict,
    pub fitted_integer: Option<i64>,
    pub rank_trace: Vec<RankAtWidth>,
    pub stable: bool,
    pub stabilized_rank: usize,
    pub certify_width: usize,
    pub min_certifiable_n: usize,
    pub agree: bool,
    pub estimate: DensityEstimate,
}

/// Widths at which the switch rank is sampled: from `2(b+1)(ℓ+1)` (at least
/// 12) upward, where `b` bounds the rank.
pub fn stabilization_widths(rank_bound: usize, window: usize) -> Vec<usize> {
    let s = (2 * (rank_bound + 1) * (window + 1)).max(12);
    vec![s, s + 2 * (window + 1), 2 * s]
}

pub fn coincidence_report(spec: &FamilySpec, grid: &[usize], window: usize) -> Result<CoincidenceReport> {
    coincidence_report_with(spec, grid, window, &FitOptions::default())
}

pub fn coincidence_report_with(
    spec: &FamilySpec,
    grid: &[usize],
    window: usize,
    opts: &FitOptions,
) -> Result<CoincidenceReport> {
    let expected = spec.expected_rank(window);
    let bound = expected.bound().ok_or_else(|| Error::InvalidFamily {
        family: spec.to_string(),
        reason: "coincidence needs a family of finite rank".into(),
    })?;
    let estimate = fit_with(spec, grid, opts)?;

    let mut rank_trace = Vec::new();
    let mut largest = None;
    for width in stabilization_widths(bound, window) {
        let m = spec.generate(width)?;
        rank_trace.push(RankAtWidth { width, rank: family_rank(&m, window) });
        largest = Some(m);
    }
    let largest = largest.expect("three widths");
    let stabilized_rank = rank_trace.last().unwrap().rank;
    let stable = rank_trace.iter().all(|r| r.rank == stabilized_rank);

    let mut min_certifiable_n = None;
    for n in 0..=largest.width() {
        if certify(&largest, &SchemeParams::new(n, window)?).is_certified() {
            min_certifiable_n = Some(n);
            break;
        }
    }
    let min_certifiable_n = min_certifiable_n.expect("n = width always certifies");

    let fitted_integer = estimate.integer();
    let agree = stable
        && fitted_integer == Some(stabilized_rank as i64)
        && min_certifiable_n == stabilized_rank;
    Ok(CoincidenceReport {
        family: spec.clone(),
        window,
        expected_rank: expected,
        family_exponent: estimate.exponent,
        verdict: estimate.verdict,
        fitted_integer,
        rank_trace,
        stable,
        stabilized_rank,
        certify_width: largest.width(),
        min_certifiable_n,
        agree,
        estimate,
    })
}
