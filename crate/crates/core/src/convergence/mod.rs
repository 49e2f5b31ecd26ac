//! Partial sums of sine, cosine and exponential series, windowed uniform
//! tail probes, decay statistics, pointwise conditions at `2lπ/r`, the
//! log-integral bound and the divergence of the mod-6 counterexample.
//!
//! Every supremum reported here is taken over a finite grid and is a lower
//! bound on the true supremum. Infinite tails are cut to a window of `K + 1`
//! terms.

mod lemma;
mod pointwise;

pub use lemma::{divergence_demo, log_integral_bound, DivergenceReport, DivergenceRow, LogIntegralReport};
pub use pointwise::{
    pointwise_condition, valid_l_range, PointwiseLine, PointwiseReport, PointwiseRow, PointwiseVerdict, OSC_TOL,
};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::grid::log_log_slope;
pub use crate::kernels::SeriesKind;
use crate::kernels::{direct_table, sbp_table, KernelError, KernelPoint};
use crate::report::f64_or_inf;
use crate::sequences::{Sequence, SequenceError, TermTable};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConvergenceError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("invalid parameter {name}: {msg}")]
    Parameter { name: &'static str, msg: String },
    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),
}

pub(crate) fn bad(name: &'static str, msg: impl Into<String>) -> ConvergenceError {
    ConvergenceError::Parameter { name, msg: msg.into() }
}

/// `Σ a_k sin(ckx)`, `Σ a_k cos(ckx)` or `Σ a_k e^{ickx}`.
#[derive(Debug, Clone)]
pub struct SeriesSpec {
    pub kind: SeriesKind,
    pub seq: Sequence,
    pub c: f64,
}

impl SeriesSpec {
    pub fn new(kind: SeriesKind, seq: Sequence, c: f64) -> Result<Self, ConvergenceError> {
        if !(c.is_finite() && c > 0.0) {
            return Err(bad("c", format!("must be a positive finite number, got {c}")));
        }
        Ok(SeriesSpec { kind, seq, c })
    }

    /// Interval the sup is taken over: `(0, π/c)` for sine series (both
    /// endpoints give zero), `[0, 2π/c)` otherwise.
    pub fn domain(&self) -> (f64, f64) {
        let period = match self.kind {
            SeriesKind::Sine => std::f64::consts::PI,
            _ => std::f64::consts::TAU,
        };
        (0.0, period / self.c)
    }
}

/// How a partial sum is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Direct,
    Sbp { r: u64 },
}

impl Method {
    fn validate(self) -> Result<(), ConvergenceError> {
        match self {
            Method::Sbp { r: 0 } => Err(bad("r", "summation by parts needs r >= 1")),
            _ => Ok(()),
        }
    }

    /// Whether `theta = c·x` can be used with this method.
    fn usable(self, theta: f64) -> bool {
        match self {
            Method::Direct => theta.is_finite(),
            Method::Sbp { r } => KernelPoint::usable(theta, r as i64),
        }
    }
}

/// `Σ_{k=1}^{N}` of the series at `x`.
pub fn partial_sum(spec: &SeriesSpec, n_terms: u64, x: f64, method: Method) -> Result<Complex64, ConvergenceError> {
    window_sum(spec, 1, n_terms, x, method)
}

/// `Σ_{k=n}^{m}` of the series at `x`.
pub fn window_sum(spec: &SeriesSpec, n: u64, m: u64, x: f64, method: Method) -> Result<Complex64, ConvergenceError> {
    if n == 0 {
        return Err(SequenceError::Domain(0).into());
    }
    if m < n {
        return Err(bad("N", format!("need at least one term, got range {n}..={m}")));
    }
    method.validate()?;
    if !x.is_finite() {
        return Err(bad("x", format!("must be finite, got {x}")));
    }
    let theta = spec.c * x;
    match method {
        Method::Direct => {
            let table = spec.seq.tabulate(m)?;
            Ok(direct_table(&table, spec.kind, n, m, theta))
        }
        Method::Sbp { r } => {
            KernelPoint::new(theta, r as i64)?;
            let table = spec.seq.tabulate(m + r)?;
            Ok(sbp_table(&table, spec.kind, n, m, r, theta))
        }
    }
}

/// Direct window sum with a rotating phasor, reseeded every 256 steps.
fn rotating_window(table: &TermTable, kind: SeriesKind, n: u64, m: u64, theta: f64) -> Complex64 {
    const RESEED: u64 = 256;
    let step = Complex64::from_polar(1.0, theta);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut z = Complex64::new(1.0, 0.0);
    for k in n..=m {
        if (k - n) % RESEED == 0 {
            z = Complex64::from_polar(1.0, k as f64 * theta);
        }
        let a = table.get(k);
        acc += match kind {
            SeriesKind::Sine => a * z.im,
            SeriesKind::Cosine => a * z.re,
            SeriesKind::Exponential => a * z,
        };
        z *= step;
    }
    acc
}

/// Where the sup over `x` is sampled.
#[derive(Debug, Clone, PartialEq)]
pub enum XGrid {
    /// `count` points at half-step offsets across the series domain, so
    /// neither the endpoints nor `2lπ/(rc)` for the usual `r` are hit.
    Uniform {
        count: usize,
    },
    Points(Vec<f64>),
}

impl Default for XGrid {
    fn default() -> Self {
        XGrid::Uniform { count: DEFAULT_X_COUNT }
    }
}

pub const DEFAULT_X_COUNT: usize = 4096;

impl XGrid {
    pub fn points(&self, spec: &SeriesSpec) -> Vec<f64> {
        match self {
            XGrid::Uniform { count } => {
                let (lo, hi) = spec.domain();
                let h = (hi - lo) / *count as f64;
                (0..*count).map(|j| lo + (j as f64 + 0.5) * h).collect()
            }
            XGrid::Points(p) => p.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridDescription {
    pub kind: &'static str,
    pub count: usize,
    pub lo: f64,
    pub hi: f64,
    /// Points dropped because `|sin(rcx/2)| < eps` on the summation-by-parts path.
    pub excluded_singular: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailRow {
    pub n: u64,
    /// Max over the grid itself.
    pub grid_sup: f64,
    /// `max(grid_sup, local refinement)`; equals `grid_sup` for explicit point grids.
    pub sup: f64,
    pub argmax_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailProbeReport {
    pub kind: SeriesKind,
    pub c: f64,
    pub method: Method,
    /// Each tail is `Σ_{k=n}^{n+K}`.
    pub window: u64,
    pub grid: GridDescription,
    pub rows: Vec<TailRow>,
    /// Log-log slope of `sup` against `n`; `None` when fewer than two sups are positive.
    pub trend_slope: Option<f64>,
    pub strictly_decreasing: bool,
    pub note: &'static str,
}

const GOLDEN_STEPS: usize = 48;

/// Windowed sup of `|Σ_{k=n}^{n+K} a_k·basis(ckx)|` over an x-grid, for each
/// `n` in `n_grid`.
pub fn tail_probe(
    spec: &SeriesSpec,
    n_grid: &[u64],
    window: u64,
    grid: &XGrid,
    method: Method,
) -> Result<TailProbeReport, ConvergenceError> {
    if window == 0 {
        return Err(bad("K", "window must be at least 1"));
    }
    if n_grid.is_empty() {
        return Err(ConvergenceError::EmptyGrid("n_grid"));
    }
    if n_grid[0] == 0 || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("n_grid", "must be strictly increasing positive integers"));
    }
    method.validate()?;
    if matches!(grid, XGrid::Uniform { count: 0 }) {
        return Err(ConvergenceError::EmptyGrid("x grid"));
    }
    let raw = grid.points(spec);
    if raw.iter().any(|x| !x.is_finite()) {
        return Err(bad("x", "grid points must be finite"));
    }
    let xs: Vec<f64> = raw.iter().copied().filter(|&x| method.usable(spec.c * x)).collect();
    if xs.is_empty() {
        return Err(ConvergenceError::EmptyGrid("x grid after excluding singular points"));
    }
    let (lo, hi) = match grid {
        XGrid::Uniform { .. } => spec.domain(),
        XGrid::Points(_) => (
            xs.iter().copied().fold(f64::INFINITY, f64::min),
            xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ),
    };
    let description = GridDescription {
        kind: match grid {
            XGrid::Uniform { .. } => "uniform",
            XGrid::Points(_) => "points",
        },
        count: xs.len(),
        lo,
        hi,
        excluded_singular: raw.len() - xs.len(),
    };

    let extra = match method {
        Method::Sbp { r } => r,
        Method::Direct => 0,
    };
    let last = n_grid[n_grid.len() - 1];
    let table = spec.seq.tabulate(last + window + extra)?;
    let eval = |n: u64, x: f64| -> f64 {
        let theta = spec.c * x;
        match method {
            Method::Direct => rotating_window(&table, spec.kind, n, n + window, theta).norm(),
            Method::Sbp { r } if method.usable(theta) => sbp_table(&table, spec.kind, n, n + window, r, theta).norm(),
            Method::Sbp { .. } => 0.0,
        }
    };

    // only uniform grids are refined; explicit points are taken as given
    let spacing = match grid {
        XGrid::Uniform { .. } if xs.len() > 1 => (hi - lo) / xs.len() as f64,
        _ => 0.0,
    };
    let mut rows = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let values: Vec<f64> = xs.par_iter().map(|&x| eval(n, x)).collect();
        let (best, grid_sup) =
            values.iter().enumerate().fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
            );
        let mut argmax_x = xs[best];
        let mut sup = grid_sup;
        if spacing > 0.0 {
            let period = std::f64::consts::TAU / (spec.c * (n + window) as f64);
            let (x, v) = refine(|x| eval(n, x), &xs, &values, spacing, period, lo, hi);
            if v > sup {
                sup = v;
                argmax_x = x;
            }
        }
        rows.push(TailRow {
            n,
            grid_sup,
            sup,
            argmax_x,
        });
    }
    let trend_slope = log_log_slope(rows.iter().map(|r| (r.n as f64, r.sup)));
    let strictly_decreasing = rows.windows(2).all(|w| w[1].sup < w[0].sup);
    Ok(TailProbeReport {
        kind: spec.kind,
        c: spec.c,
        method,
        window,
        grid: description,
        rows,
        trend_slope,
        strictly_decreasing,
        note: "sup is a lower bound on the true supremum of a windowed tail",
    })
}

const REFINE_CANDIDATES: usize = 8;
const SUBSTEPS_PER_PERIOD: f64 = 8.0;
const MAX_SUBSTEPS: usize = 512;

/// Local search around the best grid points and the cell next to the lower
/// end, where tails of decaying coefficients peak at `x ~ 1/n`. Each cell is
/// scanned finely enough to resolve the window's oscillation period before a
/// golden-section polish.
fn refine(
    f: impl Fn(f64) -> f64 + Sync,
    xs: &[f64],
    values: &[f64],
    spacing: f64,
    period: f64,
    lo: f64,
    hi: f64,
) -> (f64, f64) {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    let mut candidates: Vec<usize> = order.into_iter().take(REFINE_CANDIDATES).collect();
    if !candidates.contains(&0) {
        candidates.push(0);
    }
    let steps = ((2.0 * spacing * SUBSTEPS_PER_PERIOD / period).ceil() as usize).clamp(4, MAX_SUBSTEPS);
    let sub = 2.0 * spacing / steps as f64;
    let points: Vec<f64> = candidates
        .iter()
        .flat_map(|&i| (0..=steps).map(move |j| xs[i] - spacing + j as f64 * sub))
        .filter(|&x| x >= lo && x <= hi)
        .collect();
    let scanned: Vec<f64> = points.par_iter().map(|&x| f(x)).collect();
    let (best, _) = scanned.iter().enumerate().fold(
        (0, f64::NEG_INFINITY),
        |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
    );
    let x0 = points.get(best).copied().unwrap_or(xs[0]);
    let (x, v) = golden_max(&f, (x0 - sub).max(lo), (x0 + sub).min(hi));
    let v0 = scanned.get(best).copied().unwrap_or(f64::NEG_INFINITY);
    if v >= v0 {
        (x, v)
    } else {
        (x0, v0)
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_STEPS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Which decay statistic to tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayKind {
    /// `n ln n·|a_n|`
    NLogN,
    /// `n^{2−1/p}·|a_n|`
    NPow { p: f64 },
}

impl DecayKind {
    fn statistic(self, n: u64, abs_a: f64) -> f64 {
        let x = n as f64;
        match self {
            DecayKind::NLogN => x * x.ln() * abs_a,
            DecayKind::NPow { p } => x.powf(2.0 - 1.0 / p) * abs_a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecayVerdict {
    Decaying,
    NotDecaying,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub n: u64,
    #[serde(serialize_with = "f64_or_inf")]
    pub statistic: f64,
    /// Max of the statistic over grid points `≥ n`.
    #[serde(serialize_with = "f64_or_inf")]
    pub tail_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub kind: DecayKind,
    pub rows: Vec<DecayRow>,
    pub verdict: DecayVerdict,
}

/// Share of the mid-grid tail max the last value must fall below to count as decaying.
pub const DECAY_FACTOR: f64 = 0.9;

pub fn decay_condition(seq: &Sequence, kind: DecayKind, n_grid: &[u64]) -> Result<DecayReport, ConvergenceError> {
    if n_grid.is_empty() {
        return Err(ConvergenceError::EmptyGrid("n_grid"));
    }
    if n_grid[0] == 0 || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("n_grid", "must be strictly increasing positive integers"));
    }
    if let DecayKind::NPow { p } = kind {
        if !(p.is_finite() && p >= 1.0) {
            return Err(bad("p", format!("must be >= 1, got {p}")));
        }
    }
    let stats: Vec<f64> = n_grid
        .iter()
        .map(|&n| seq.term(n).map(|a| kind.statistic(n, a.norm())))
        .collect::<Result<_, _>>()?;
    let mut tail = stats.clone();
    for i in (0..tail.len().saturating_sub(1)).rev() {
        tail[i] = tail[i].max(tail[i + 1]);
    }
    let verdict = if stats.len() < 3 {
        DecayVerdict::Inconclusive
    } else {
        let mid = tail[stats.len() / 2];
        let last = tail[stats.len() - 1];
        if last == 0.0 || last < DECAY_FACTOR * mid {
            DecayVerdict::Decaying
        } else if last >= mid * (1.0 - 1e-9) && last > 0.0 {
            DecayVerdict::NotDecaying
        } else {
            DecayVerdict::Inconclusive
        }
    };
    let rows = n_grid
        .iter()
        .zip(stats.iter().zip(&tail))
        .map(|(&n, (&statistic, &tail_max))| DecayRow { n, statistic, tail_max })
        .collect();
    Ok(DecayReport { kind, rows, verdict })
}

/// `sup_{n≥1} ln n / n^{1−1/p} = 1/(e(1−1/p))`.
pub fn log_power_constant(p: f64) -> f64 {
    1.0 / (std::f64::consts::E * (1.0 - 1.0 / p))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationReport {
    pub p: f64,
    pub constant: f64,
    pub nlogn: DecayReport,
    pub npow: DecayReport,
    /// Largest `n ln n|a_n| / (K_p n^{2−1/p}|a_n|)` over the grid; at most 1 always.
    pub max_domination_ratio: f64,
    pub domination_holds: bool,
    /// A decaying `n^{2−1/p}` statistic never comes with a non-decaying `n ln n` one.
    pub verdicts_consistent: bool,
}

/// Compares the two decay conditions for `p > 1`. The domination
/// `n ln n|a_n| ≤ K_p·n^{2−1/p}|a_n|` makes the `n^{2−1/p}` condition the
/// stronger one, so decay of the power statistic forces decay of `n ln n|a_n|`.
pub fn power_implies_log_decay(seq: &Sequence, p: f64, n_grid: &[u64]) -> Result<ImplicationReport, ConvergenceError> {
    if !(p.is_finite() && p > 1.0) {
        return Err(bad("p", format!("the comparison needs p > 1, got {p}")));
    }
    let nlogn = decay_condition(seq, DecayKind::NLogN, n_grid)?;
    let npow = decay_condition(seq, DecayKind::NPow { p }, n_grid)?;
    let constant = log_power_constant(p);
    let max_domination_ratio = nlogn
        .rows
        .iter()
        .zip(&npow.rows)
        .filter(|(_, b)| b.statistic > 0.0)
        .map(|(a, b)| a.statistic / (constant * b.statistic))
        .fold(0.0, f64::max);
    let domination_holds = max_domination_ratio <= 1.0 + 1e-12;
    let verdicts_consistent = !(npow.verdict == DecayVerdict::Decaying && nlogn.verdict == DecayVerdict::NotDecaying);
    Ok(ImplicationReport {
        p,
        constant,
        nlogn,
        npow,
        max_domination_ratio,
        domination_holds,
        verdicts_consistent,
    })
}

#[cfg(test)]
mod tests;
