//! The log-integral bound and the divergence of the mod-6 counterexample at `2π/3`.

use serde::Serialize;

use super::{bad, ConvergenceError};
use crate::sequences::{CounterexampleParams, Sequence};

/// Slack allowed on `integral ≤ ln p`.
pub const BOUND_SLACK: f64 = 1e-12;
/// Required agreement between the closed form and the quadrature.
pub const QUADRATURE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogIntegralReport {
    pub n: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub p: f64,
    pub lower: f64,
    pub upper: f64,
    /// `ln ln(n + N) − ln ln(n + N^{1/p})`
    pub integral: f64,
    /// Adaptive Simpson estimate of the same integral.
    pub quadrature: f64,
    pub bound: f64,
    pub ok: bool,
    pub quadrature_agrees: bool,
}

/// `∫_{n+N^{1/p}}^{n+N} dk/(k ln k) ≤ ln p` for `n, N ≥ 1`, `p ≥ 1`.
pub fn log_integral_bound(n: u64, big_n: u64, p: f64) -> Result<LogIntegralReport, ConvergenceError> {
    if n == 0 {
        return Err(bad("n", "must be at least 1"));
    }
    if big_n == 0 {
        return Err(bad("N", "must be at least 1"));
    }
    if !(p.is_finite() && p >= 1.0) {
        return Err(bad("p", format!("must be >= 1, got {p}")));
    }
    let nf = n as f64;
    let upper = nf + big_n as f64;
    let lower = if p == 1.0 {
        upper
    } else {
        nf + (big_n as f64).powf(1.0 / p)
    };
    // ln(ln u / ln l) with ln u − ln l = ln(1 + (u − l)/l)
    let ln_lower = lower.ln();
    let integral = ((upper - lower) / lower).ln_1p() / ln_lower;
    let integral = integral.ln_1p();
    let quadrature = integrate_inv_k_ln_k(lower, upper);
    let bound = p.ln();
    Ok(LogIntegralReport {
        n,
        big_n,
        p,
        lower,
        upper,
        integral,
        quadrature,
        bound,
        ok: integral <= bound + BOUND_SLACK,
        quadrature_agrees: (quadrature - integral).abs() <= QUADRATURE_TOL,
    })
}

fn integrate_inv_k_ln_k(a: f64, b: f64) -> f64 {
    let f = |k: f64| 1.0 / (k * k.ln());
    // pieces with b/a ≤ 2 keep the integrand smooth on each
    let mut total = 0.0;
    let mut lo = a;
    while lo < b {
        let hi = (2.0 * lo).min(b);
        total += adaptive_simpson(&f, lo, hi, 1e-13, 40);
        lo = hi;
    }
    total
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceRow {
    #[serde(rename = "N")]
    pub big_n: u64,
    /// `6N + 5`
    pub terms: u64,
    /// `Σ_{k=1}^{6N+5} a_k sin(2πk/3)`
    pub s: f64,
    /// `4 sin(2π/3)·Σ_{k=1}^{N} 1/((6k+5) ln(6k+5))`
    pub lower_bound: f64,
    /// `sin(2π/3)·[(a_1 − a_2 + a_4 − a_5) + Σ_{k=1}^{N} (a_{6k+1} − a_{6k+2} + a_{6k+4} − a_{6k+5})]`
    pub regrouped: f64,
    pub above_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub p: f64,
    pub x0: f64,
    pub rows: Vec<DivergenceRow>,
    pub bound_holds: bool,
    pub strictly_increasing: bool,
    /// `S` at the last grid point minus `S` at the first.
    pub growth: f64,
    /// Largest `|S − regrouped|`.
    pub max_regroup_error: f64,
}

/// Partial sums of the counterexample's sine series at `x0 = 2π/3`.
pub fn divergence_demo(p: f64, big_n_grid: &[u64]) -> Result<DivergenceReport, ConvergenceError> {
    CounterexampleParams::new(p)?;
    if big_n_grid.is_empty() {
        return Err(ConvergenceError::EmptyGrid("N_grid"));
    }
    if big_n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("N_grid", "must be strictly increasing"));
    }
    let last = big_n_grid[big_n_grid.len() - 1];
    if last > u64::MAX / 8 {
        return Err(bad("N_grid", "too large"));
    }
    let seq = Sequence::counterexample(p)?;
    let table = seq.tabulate(6 * last + 5)?;
    let a = |k: u64| table.get(k).re;
    let sin0 = 3f64.sqrt() / 2.0;
    // sin(2πk/3) by residue, avoiding argument reduction error at large k
    let weight = |k: u64| match k % 3 {
        1 => sin0,
        2 => -sin0,
        _ => 0.0,
    };

    let mut s = Kahan::default();
    let mut bound = Kahan::default();
    let mut blocks = Kahan::default();
    blocks.add(a(1) - a(2) + a(4) - a(5));
    let mut k_term = 0u64;
    let mut k_block = 0u64;
    let mut rows = Vec::with_capacity(big_n_grid.len());
    for &big_n in big_n_grid {
        let terms = 6 * big_n + 5;
        while k_term < terms {
            k_term += 1;
            s.add(a(k_term) * weight(k_term));
        }
        while k_block < big_n {
            k_block += 1;
            let j = 6.0 * k_block as f64 + 5.0;
            bound.add(1.0 / (j * j.ln()));
            let b = 6 * k_block;
            blocks.add((a(b + 1) - a(b + 2)) + (a(b + 4) - a(b + 5)));
        }
        let lower_bound = 4.0 * sin0 * bound.sum;
        let s = s.sum;
        rows.push(DivergenceRow {
            big_n,
            terms,
            s,
            lower_bound,
            regrouped: sin0 * blocks.sum,
            above_bound: s >= lower_bound,
        });
    }
    let growth = rows[rows.len() - 1].s - rows[0].s;
    Ok(DivergenceReport {
        p,
        x0: std::f64::consts::TAU / 3.0,
        bound_holds: rows.iter().all(|r| r.above_bound),
        strictly_increasing: rows.windows(2).all(|w| w[1].s > w[0].s),
        growth,
        max_regroup_error: rows.iter().map(|r| (r.s - r.regrouped).abs()).fold(0.0, f64::max),
        rows,
    })
}

#[derive(Default)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}
