//! Majorants `β_n`, block variations and finite-range membership
//! certificates for the general monotone classes `GM(p, β, r)` and the
//! historical classes expressible through them.
//!
//! A sequence is in `GM(p, β, r)` when
//!
//! ```text
//! ( Σ_{n=m}^{2m-1} |a_n − a_{n+r}|^p )^{1/p} ≤ C β_m   for every m ≥ 1.
//! ```
//!
//! Numerically only finitely many `m` can be inspected, so a
//! [`MembershipProfile`] records the ratio variation/majorant on a grid of
//! `m`, fits its growth rate, and issues a verdict.

mod spec;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{log_log_slope, lp_norm};
use crate::report::f64_or_inf;
use crate::sequences::{Sequence, SequenceError, TermTable};

pub use spec::ClassSpec;

/// Default truncation of the supremum in `β₃`.
pub const DEFAULT_M_CAP: u64 = 1 << 16;
/// Default truncation of the infinite RBVS tail sum.
pub const DEFAULT_TAIL_CAP: u64 = 1 << 20;
/// Relative tolerance for the embedding inequalities.
pub const EMBEDDING_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("invalid parameter {name}: {msg}")]
    Parameter { name: &'static str, msg: String },
}

fn param_err(name: &'static str, msg: impl Into<String>) -> ClassError {
    ClassError::Parameter { name, msg: msg.into() }
}

/// Lower-bound schedule `b(n)` for the supremum in `β₃`; nondecreasing and
/// unbounded by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "factor")]
pub enum BSchedule {
    /// `b(n) = n`
    Identity,
    /// `b(n) = k·n`
    Multiple(u64),
    /// `b(n) = ⌈√n⌉`
    Sqrt,
}

impl BSchedule {
    pub fn at(self, n: u64) -> u64 {
        match self {
            BSchedule::Identity => n,
            BSchedule::Multiple(k) => n.saturating_mul(k),
            BSchedule::Sqrt => {
                let mut s = (n as f64).sqrt() as u64;
                while s * s < n {
                    s += 1;
                }
                while s > 0 && (s - 1) * (s - 1) >= n {
                    s -= 1;
                }
                s.max(1)
            }
        }
    }

    fn validate(self) -> Result<(), ClassError> {
        match self {
            BSchedule::Multiple(0) => Err(param_err("b_schedule", "multiple must be at least 1")),
            _ => Ok(()),
        }
    }
}

/// Which majorant to compare the block variation against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BetaSpec {
    /// `β_n = |a_n|`
    Beta1,
    /// `β_n = Σ_{k=[n/c]}^{[cn]} |a_k|/k`
    Beta2 { c_scale: f64 },
    /// `β_n = (1/n) sup_{m ≥ b(n)} m^{1-1/q} (Σ_{k=m}^{2m} |a_k|^q)^{1/q}`,
    /// the supremum truncated at `m_cap`.
    Beta3 { q: f64, b_schedule: BSchedule, m_cap: u64 },
}

impl BetaSpec {
    pub fn beta3(q: f64) -> BetaSpec {
        BetaSpec::Beta3 {
            q,
            b_schedule: BSchedule::Identity,
            m_cap: DEFAULT_M_CAP,
        }
    }

    pub fn validate(&self) -> Result<(), ClassError> {
        match *self {
            BetaSpec::Beta1 => Ok(()),
            BetaSpec::Beta2 { c_scale } => check_c_scale(c_scale),
            BetaSpec::Beta3 { q, b_schedule, m_cap } => {
                check_q(q)?;
                b_schedule.validate()?;
                if m_cap == 0 {
                    return Err(param_err("m_cap", "must be at least 1"));
                }
                Ok(())
            }
        }
    }

    /// Largest index of `a` the majorant reads at `n`.
    fn reach(&self, n: u64) -> u64 {
        match *self {
            BetaSpec::Beta1 => n,
            BetaSpec::Beta2 { c_scale } => beta2_window(n, c_scale).1,
            BetaSpec::Beta3 { m_cap, .. } => 2 * m_cap,
        }
    }
}

fn check_c_scale(c_scale: f64) -> Result<(), ClassError> {
    if c_scale.is_finite() && c_scale > 1.0 {
        Ok(())
    } else {
        Err(param_err("c_scale", format!("must be > 1, got {c_scale}")))
    }
}

fn check_q(q: f64) -> Result<(), ClassError> {
    if q.is_finite() && q > 0.0 {
        Ok(())
    } else {
        Err(param_err("q", format!("must be > 0, got {q}")))
    }
}

fn check_p(p: f64) -> Result<(), ClassError> {
    if p.is_finite() && p > 0.0 {
        Ok(())
    } else {
        Err(param_err("p", format!("must be > 0, got {p}")))
    }
}

fn check_index(name: &'static str, v: u64) -> Result<(), ClassError> {
    if v == 0 {
        Err(param_err(name, "must be at least 1"))
    } else {
        Ok(())
    }
}

fn beta2_window(n: u64, c_scale: f64) -> (u64, u64) {
    let lo = ((n as f64 / c_scale).floor() as u64).max(1);
    let hi = ((c_scale * n as f64).floor() as u64).max(lo);
    (lo, hi)
}

/// `β₁` at `n`: `|a_n|`.
pub fn beta1(seq: &Sequence, n: u64) -> Result<f64, ClassError> {
    Ok(seq.term(n)?.norm())
}

/// `β₂` at `n`: `Σ |a_k|/k` over `k ∈ [⌊n/c⌋, ⌊cn⌋]`, lower end clamped to 1.
pub fn beta2(seq: &Sequence, n: u64, c_scale: f64) -> Result<f64, ClassError> {
    check_c_scale(c_scale)?;
    check_index("n", n)?;
    let (lo, hi) = beta2_window(n, c_scale);
    let mut sum = 0.0;
    for k in lo..=hi {
        sum += seq.term(k)?.norm() / k as f64;
    }
    Ok(sum)
}

/// Value of a truncated `β₃` supremum with its witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Beta3Value {
    pub value: f64,
    /// Maximising `m`; the smallest one on ties.
    pub argmax: u64,
    /// `argmax == m_cap`: the supremum may lie beyond the truncation.
    pub at_cap: bool,
}

/// `β₃(q)` at `n`, maximising over integer `m ∈ [b(n), m_cap]`.
pub fn beta3(seq: &Sequence, n: u64, q: f64, b_schedule: BSchedule, m_cap: u64) -> Result<Beta3Value, ClassError> {
    check_q(q)?;
    check_index("n", n)?;
    b_schedule.validate()?;
    let lower = b_schedule.at(n);
    if m_cap < lower {
        return Err(param_err("m_cap", format!("m_cap = {m_cap} is below b(n) = {lower}")));
    }
    let table = seq.tabulate(2 * m_cap)?;
    Ok(Beta3Scan::new(&table, q).eval(n, lower, m_cap))
}

/// Compensated prefix sums of `|a_k|^q` so every window `Σ_{k=m}^{2m}` is a
/// difference of two prefixes without losing the small late windows.
struct Beta3Scan {
    hi: Vec<f64>,
    lo: Vec<f64>,
    q: f64,
}

impl Beta3Scan {
    fn new(table: &TermTable, q: f64) -> Self {
        let len = table.len() as usize;
        let mut hi = Vec::with_capacity(len + 1);
        let mut lo = Vec::with_capacity(len + 1);
        let (mut s, mut c) = (0.0f64, 0.0f64);
        hi.push(0.0);
        lo.push(0.0);
        for v in table.as_slice() {
            let t = v.norm().powf(q);
            let sum = s + t;
            // TwoSum error term
            let bp = sum - s;
            let err = (s - (sum - bp)) + (t - bp);
            s = sum;
            c += err;
            hi.push(s);
            lo.push(c);
        }
        Beta3Scan { hi, lo, q }
    }

    fn window(&self, m: u64) -> f64 {
        let (a, b) = ((m - 1) as usize, (2 * m) as usize);
        ((self.hi[b] - self.hi[a]) + (self.lo[b] - self.lo[a])).max(0.0)
    }

    fn inner(&self, m: u64) -> f64 {
        let w = self.window(m);
        if self.q == 1.0 {
            w
        } else {
            (m as f64).powf(1.0 - 1.0 / self.q) * w.powf(1.0 / self.q)
        }
    }

    fn eval(&self, n: u64, lower: u64, m_cap: u64) -> Beta3Value {
        let (mut best, mut argmax) = (f64::NEG_INFINITY, lower);
        for m in lower..=m_cap {
            let v = self.inner(m);
            if v > best {
                best = v;
                argmax = m;
            }
        }
        Beta3Value {
            value: best.max(0.0) / n as f64,
            argmax,
            at_cap: argmax == m_cap,
        }
    }
}

/// `(Σ_{n=m}^{2m-1} |Δ_r a_n|^p)^{1/p}`.
pub fn block_variation(seq: &Sequence, m: u64, p: f64, r: u64) -> Result<f64, ClassError> {
    check_p(p)?;
    check_index("m", m)?;
    check_index("r", r)?;
    let table = seq.tabulate(2 * m - 1 + r)?;
    Ok(block_variation_table(&table, m, p, r))
}

pub(crate) fn block_variation_table(table: &TermTable, m: u64, p: f64, r: u64) -> f64 {
    let diffs: Vec<f64> = (m..2 * m).map(|n| table.delta(n, r).norm()).collect();
    lp_norm(&diffs, p)
}

/// Block norm of the shifted differences `Δ_{r1} a_{n + j r1}`, `n ∈ [m, 2m-1]`.
fn shifted_block_variation(table: &TermTable, m: u64, p: f64, r: u64, shift: u64) -> f64 {
    let diffs: Vec<f64> = (m..2 * m).map(|n| table.delta(n + shift, r).norm()).collect();
    lp_norm(&diffs, p)
}

/// Class parameters `(p, β, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    pub p: f64,
    pub beta: BetaSpec,
    pub r: u64,
}

impl ClassParams {
    pub fn new(p: f64, beta: BetaSpec, r: u64) -> Result<Self, ClassError> {
        check_p(p)?;
        check_index("r", r)?;
        beta.validate()?;
        Ok(ClassParams { p, beta, r })
    }
}

/// Thresholds behind a [`Verdict`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileOptions {
    /// Bounded needs a fitted slope at most this.
    pub slope_tol: f64,
    /// Growing needs a fitted slope at least this.
    pub growth_tol: f64,
    /// Fewer samples than this give `Inconclusive` unless the ratio is identically 0.
    pub min_samples: usize,
    /// The slope is fitted over samples with `m ≥ m_max / 2^fit_octaves`.
    pub fit_octaves: f64,
    /// Bounded also needs the top-octave maximum within this fraction of the
    /// maximum below it.
    pub top_octave_growth: f64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            slope_tol: 0.05,
            growth_tol: 0.1,
            min_samples: 8,
            fit_octaves: 2.0,
            top_octave_growth: 0.10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    BoundedConsistent,
    GrowingInconsistent,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::BoundedConsistent => "BoundedConsistent",
            Verdict::GrowingInconsistent => "GrowingInconsistent",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

impl std::str::FromStr for Verdict {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "boundedconsistent" | "bounded" => Ok(Verdict::BoundedConsistent),
            "growinginconsistent" | "growing" => Ok(Verdict::GrowingInconsistent),
            "inconclusive" => Ok(Verdict::Inconclusive),
            other => Err(format!("unknown verdict '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileSample {
    pub m: u64,
    pub variation: f64,
    pub beta: f64,
    #[serde(serialize_with = "f64_or_inf")]
    pub ratio: f64,
    /// `β₃` witness, when the majorant is `β₃`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_argmax: Option<u64>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub beta_at_cap: bool,
}

/// RBVS tail truncation bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailTruncation {
    pub tail_cap: u64,
    /// Geometric extrapolation of `Σ_{n ≥ tail_cap} |Δ_1 a_n|` from the last
    /// two dyadic blocks; infinite when they do not shrink.
    #[serde(serialize_with = "f64_or_inf")]
    pub residual_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipProfile {
    pub class_name: String,
    pub class_params: ClassParams,
    pub samples: Vec<ProfileSample>,
    /// Log-log slope of the ratio over the top `fit_octaves` of the grid.
    pub fitted_slope: f64,
    /// Log-log slope over every sample, for reference.
    pub global_slope: f64,
    #[serde(serialize_with = "f64_or_inf")]
    pub max_ratio: f64,
    pub verdict: Verdict,
    pub options: ProfileOptions,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TailTruncation>,
}

fn ratio(variation: f64, beta: f64) -> f64 {
    if variation == 0.0 {
        0.0
    } else if beta == 0.0 {
        f64::INFINITY
    } else {
        variation / beta
    }
}

fn check_grid(m_grid: &[u64]) -> Result<(), ClassError> {
    if m_grid.is_empty() {
        return Err(param_err("m_grid", "must be nonempty"));
    }
    if m_grid[0] == 0 {
        return Err(param_err("m_grid", "entries must be at least 1"));
    }
    if m_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(param_err("m_grid", "must be strictly increasing"));
    }
    Ok(())
}

/// Ratio of block variation to majorant on every `m` of `m_grid`, with the
/// fitted growth and verdict.
pub fn membership_profile(
    seq: &Sequence,
    params: &ClassParams,
    m_grid: &[u64],
    options: &ProfileOptions,
) -> Result<MembershipProfile, ClassError> {
    let params = ClassParams::new(params.p, params.beta, params.r)?;
    check_grid(m_grid)?;
    let m_max = *m_grid.last().unwrap_or(&1);
    if let BetaSpec::Beta3 { b_schedule, m_cap, .. } = params.beta {
        if let Some(&m) = m_grid.iter().find(|&&m| b_schedule.at(m) > m_cap) {
            return Err(param_err(
                "m_cap",
                format!("m_cap = {m_cap} is below b({m}) = {}", b_schedule.at(m)),
            ));
        }
    }
    let reach = (2 * m_max - 1 + params.r).max(params.beta.reach(m_max));
    let table = seq.tabulate(reach)?;
    let scan = match params.beta {
        BetaSpec::Beta3 { q, .. } => Some(Beta3Scan::new(&table, q)),
        _ => None,
    };

    let samples: Vec<ProfileSample> = m_grid
        .par_iter()
        .map(|&m| {
            let variation = block_variation_table(&table, m, params.p, params.r);
            let (beta, beta_argmax, beta_at_cap) = match (params.beta, &scan) {
                (BetaSpec::Beta1, _) => (table.get(m).norm(), None, false),
                (BetaSpec::Beta2 { c_scale }, _) => {
                    let (lo, hi) = beta2_window(m, c_scale);
                    ((lo..=hi).map(|k| table.get(k).norm() / k as f64).sum(), None, false)
                }
                (BetaSpec::Beta3 { b_schedule, m_cap, .. }, Some(scan)) => {
                    let v = scan.eval(m, b_schedule.at(m), m_cap);
                    (v.value, Some(v.argmax), v.at_cap)
                }
                (BetaSpec::Beta3 { .. }, None) => unreachable!("scan built for beta3"),
            };
            ProfileSample {
                m,
                variation,
                beta,
                ratio: ratio(variation, beta),
                beta_argmax,
                beta_at_cap,
            }
        })
        .collect();

    Ok(assess(class_label(&params), params, samples, options, None))
}

fn class_label(params: &ClassParams) -> String {
    let beta = match params.beta {
        BetaSpec::Beta1 => "beta1".to_string(),
        BetaSpec::Beta2 { c_scale } => format!("beta2,c={c_scale}"),
        BetaSpec::Beta3 { q, .. } => format!("beta3,q={q}"),
    };
    format!("gm(p={},{beta},r={})", params.p, params.r)
}

fn assess(
    class_name: String,
    class_params: ClassParams,
    samples: Vec<ProfileSample>,
    options: &ProfileOptions,
    truncation: Option<TailTruncation>,
) -> MembershipProfile {
    let max_ratio = samples.iter().map(|s| s.ratio).fold(0.0, f64::max);
    let m_max = samples.last().map_or(1, |s| s.m) as f64;
    let fit_floor = m_max / 2f64.powf(options.fit_octaves);
    let fitted_slope = log_log_slope(
        samples
            .iter()
            .filter(|s| s.m as f64 >= fit_floor)
            .map(|s| (s.m as f64, s.ratio)),
    )
    .unwrap_or(0.0);
    let global_slope = log_log_slope(samples.iter().map(|s| (s.m as f64, s.ratio))).unwrap_or(0.0);

    let top_floor = m_max / 2.0;
    let below_max = samples
        .iter()
        .filter(|s| (s.m as f64) <= top_floor)
        .map(|s| s.ratio)
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))));
    let top_max = samples
        .iter()
        .filter(|s| (s.m as f64) > top_floor)
        .map(|s| s.ratio)
        .fold(0.0, f64::max);
    let top_octave_ok = below_max.is_none_or(|b| top_max <= (1.0 + options.top_octave_growth) * b);

    let verdict = if !max_ratio.is_finite() {
        Verdict::GrowingInconsistent
    } else if max_ratio == 0.0 {
        Verdict::BoundedConsistent
    } else if samples.len() < options.min_samples {
        Verdict::Inconclusive
    } else if fitted_slope <= options.slope_tol && top_octave_ok {
        Verdict::BoundedConsistent
    } else if fitted_slope >= options.growth_tol {
        Verdict::GrowingInconsistent
    } else {
        Verdict::Inconclusive
    };

    MembershipProfile {
        class_name,
        class_params,
        samples,
        fitted_slope,
        global_slope,
        max_ratio,
        verdict,
        options: *options,
        truncation,
    }
}

/// `GMS = GM(1, β₁, 1)`.
pub fn is_gms(seq: &Sequence, m_grid: &[u64], options: &ProfileOptions) -> Result<MembershipProfile, ClassError> {
    let params = ClassParams::new(1.0, BetaSpec::Beta1, 1)?;
    let mut profile = membership_profile(seq, &params, m_grid, options)?;
    profile.class_name = "gms".into();
    Ok(profile)
}

/// `MVBVS` for a fixed `λ`, certified as `GM(1, β₂ with c = λ, 1)`.
pub fn is_mvbvs(
    seq: &Sequence,
    lambda: f64,
    m_grid: &[u64],
    options: &ProfileOptions,
) -> Result<MembershipProfile, ClassError> {
    if !(lambda.is_finite() && lambda >= 2.0) {
        return Err(param_err("lambda", format!("must be >= 2, got {lambda}")));
    }
    let params = ClassParams::new(1.0, BetaSpec::Beta2 { c_scale: lambda }, 1)?;
    let mut profile = membership_profile(seq, &params, m_grid, options)?;
    profile.class_name = format!("mvbvs(lambda={lambda})");
    Ok(profile)
}

/// `SBVS₂ = GM(1, β₃(1), 1)`.
pub fn is_sbvs2(
    seq: &Sequence,
    b_schedule: BSchedule,
    m_cap: u64,
    m_grid: &[u64],
    options: &ProfileOptions,
) -> Result<MembershipProfile, ClassError> {
    let beta = BetaSpec::Beta3 {
        q: 1.0,
        b_schedule,
        m_cap,
    };
    let params = ClassParams::new(1.0, beta, 1)?;
    let mut profile = membership_profile(seq, &params, m_grid, options)?;
    profile.class_name = "sbvs2".into();
    Ok(profile)
}

/// RBVS: `Σ_{n ≥ m} |Δ_1 a_n| ≤ C |a_m|`, tail summed up to `tail_cap − 1`.
pub fn is_rbvs_window(
    seq: &Sequence,
    tail_cap: u64,
    m_grid: &[u64],
    options: &ProfileOptions,
) -> Result<MembershipProfile, ClassError> {
    check_grid(m_grid)?;
    if tail_cap < 4 {
        return Err(param_err("tail_cap", "must be at least 4"));
    }
    let m_max = *m_grid.last().unwrap_or(&1);
    if m_max >= tail_cap {
        return Err(param_err(
            "tail_cap",
            format!("tail_cap = {tail_cap} must exceed the largest m = {m_max}"),
        ));
    }
    let table = seq.tabulate(tail_cap)?;
    // suffix[n] = Σ_{k=n}^{tail_cap-1} |Δ_1 a_k|, summed from the small end
    let mut suffix = vec![0.0f64; tail_cap as usize + 1];
    for n in (1..tail_cap).rev() {
        suffix[n as usize] = suffix[n as usize + 1] + table.delta(n, 1).norm();
    }
    let block = |lo: u64, hi: u64| suffix[lo as usize] - suffix[hi as usize];
    let last = block(tail_cap / 2, tail_cap);
    let prev = block(tail_cap / 4, tail_cap / 2);
    let residual_bound = if last == 0.0 {
        0.0
    } else if prev > 0.0 && last < prev {
        let rho = last / prev;
        last * rho / (1.0 - rho)
    } else {
        f64::INFINITY
    };

    let samples = m_grid
        .iter()
        .map(|&m| {
            let variation = suffix[m as usize];
            let beta = table.get(m).norm();
            ProfileSample {
                m,
                variation,
                beta,
                ratio: ratio(variation, beta),
                beta_argmax: None,
                beta_at_cap: false,
            }
        })
        .collect();
    let params = ClassParams::new(1.0, BetaSpec::Beta1, 1)?;
    Ok(assess(
        "rbvs".into(),
        params,
        samples,
        options,
        Some(TailTruncation {
            tail_cap,
            residual_bound,
        }),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddingRow {
    pub m: u64,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(serialize_with = "f64_or_inf")]
    pub violation: f64,
}

/// Per-`m` check of an inequality `lhs ≤ rhs`; `violation` is the relative
/// excess `(lhs − rhs)/rhs`, 0 when the inequality holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub rows: Vec<EmbeddingRow>,
    #[serde(serialize_with = "f64_or_inf")]
    pub max_violation: f64,
    pub holds: bool,
}

fn embedding_report(rows: Vec<EmbeddingRow>) -> EmbeddingReport {
    let max_violation = rows.iter().map(|r| r.violation).fold(0.0, f64::max);
    EmbeddingReport {
        rows,
        max_violation,
        holds: max_violation <= EMBEDDING_TOL,
    }
}

fn relative_excess(lhs: f64, rhs: f64) -> f64 {
    if lhs <= rhs {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        (lhs - rhs) / rhs
    }
}

/// ℓ^p monotonicity behind `GM(p1, β, r) ⊆ GM(p2, β, r)` for `p1 ≤ p2`:
/// the `p2` block norm never exceeds the `p1` block norm.
pub fn embedding_check_p(
    seq: &Sequence,
    p1: f64,
    p2: f64,
    r: u64,
    m_grid: &[u64],
) -> Result<EmbeddingReport, ClassError> {
    check_p(p1)?;
    check_p(p2)?;
    if p1 > p2 {
        return Err(param_err("p1", format!("p1 = {p1} exceeds p2 = {p2}")));
    }
    check_index("r", r)?;
    check_grid(m_grid)?;
    let m_max = *m_grid.last().unwrap_or(&1);
    let table = seq.tabulate(2 * m_max - 1 + r)?;
    let rows = m_grid
        .iter()
        .map(|&m| {
            let lhs = block_variation_table(&table, m, p2, r);
            let rhs = block_variation_table(&table, m, p1, r);
            EmbeddingRow {
                m,
                lhs,
                rhs,
                violation: relative_excess(lhs, rhs),
            }
        })
        .collect();
    Ok(embedding_report(rows))
}

/// Telescoping bound behind `GM(p, β, r1) ⊆ GM(p, β, r2)` for `r1 | r2`:
/// `‖Δ_{r2} a‖_{p,[m,2m)} ≤ Σ_j ‖Δ_{r1} a_{·+j r1}‖_{p,[m,2m)}`.
pub fn embedding_check_r(
    seq: &Sequence,
    r1: u64,
    r2: u64,
    p: f64,
    m_grid: &[u64],
) -> Result<EmbeddingReport, ClassError> {
    check_index("r1", r1)?;
    check_index("r2", r2)?;
    if r2 % r1 != 0 {
        return Err(param_err("r1", format!("r1 = {r1} does not divide r2 = {r2}")));
    }
    if !(p.is_finite() && p >= 1.0) {
        return Err(param_err("p", format!("the triangle inequality needs p >= 1, got {p}")));
    }
    check_grid(m_grid)?;
    let m_max = *m_grid.last().unwrap_or(&1);
    let table = seq.tabulate(2 * m_max - 1 + r2)?;
    let rows = m_grid
        .iter()
        .map(|&m| {
            let lhs = block_variation_table(&table, m, p, r2);
            let rhs: f64 = (0..r2 / r1)
                .map(|j| shifted_block_variation(&table, m, p, r1, j * r1))
                .sum();
            EmbeddingRow {
                m,
                lhs,
                rhs,
                violation: relative_excess(lhs, rhs),
            }
        })
        .collect();
    Ok(embedding_report(rows))
}

/// Convenience for tests and the CLI: a zero-padded complex table.
pub fn scaled(seq: &Sequence, len: u64, factor: Complex64) -> Result<Sequence, ClassError> {
    let table = seq.tabulate(len)?;
    Ok(Sequence::table(table.as_slice().iter().map(|v| v * factor))?)
}
