//! Partial sums at the points `2lπ/r`, where the kernels with step `r` are
//! singular and summation by parts gives nothing.

use std::ops::RangeInclusive;

use num_complex::Complex64;
use serde::Serialize;

use super::{bad, ConvergenceError, SeriesKind};
use crate::sequences::Sequence;

/// Oscillation below which the top two octaves count as settled.
pub const OSC_TOL: f64 = 1e-6;
/// Successive octave increments must keep at least this share of the previous one.
const TREND_RATIO: f64 = 0.75;
const MIN_N_MAX: u64 = 16;

/// Admissible `l` for the point `2lπ/r`.
///
/// Sine needs `r ≥ 3`: `1..=r/2 − 1` for even `r`, `1..=⌊r/2⌋` for odd `r`.
/// Cosine and exponential use `0..=⌊r/2⌋`.
pub fn valid_l_range(kind: SeriesKind, r: u64) -> Result<RangeInclusive<u64>, ConvergenceError> {
    match kind {
        SeriesKind::Sine if r < 3 => Err(bad("r", format!("sine series need r >= 3, got {r}"))),
        SeriesKind::Sine if r % 2 == 0 => Ok(1..=r / 2 - 1),
        SeriesKind::Sine => Ok(1..=r / 2),
        _ if r == 0 => Err(bad("r", "must be at least 1")),
        _ => Ok(0..=r / 2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum PointwiseVerdict {
    Convergent,
    Inconclusive,
    DivergentTrend,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointwiseRow {
    pub n: u64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointwiseLine {
    pub l: u64,
    pub x: f64,
    pub rows: Vec<PointwiseRow>,
    /// Diameter of `{S_N}` over grid points in `[N_max/4, N_max]`.
    pub oscillation: f64,
    pub verdict: PointwiseVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointwiseReport {
    pub kind: SeriesKind,
    pub r: u64,
    pub n_max: u64,
    pub osc_tol: f64,
    pub heuristic: bool,
    pub lines: Vec<PointwiseLine>,
    /// Worst verdict over all `l`.
    pub verdict: PointwiseVerdict,
}

/// `S_N = Σ_{k=1}^{N} a_k·basis(2lπk/r)` for `N = 1, 2, 4, …` up to `n_max`
/// (always included). Verdicts are heuristic: `Convergent` when the top two
/// octaves oscillate less than [`OSC_TOL`], `DivergentTrend` when the last three
/// octave increments point the same way without shrinking below 3/4 of each other.
/// An empty `l_values` means every admissible `l`.
pub fn pointwise_condition(
    seq: &Sequence,
    kind: SeriesKind,
    r: u64,
    l_values: &[u64],
    n_max: u64,
) -> Result<PointwiseReport, ConvergenceError> {
    let range = valid_l_range(kind, r)?;
    if n_max < MIN_N_MAX {
        return Err(bad("N_max", format!("must be at least {MIN_N_MAX}, got {n_max}")));
    }
    let ls: Vec<u64> = if l_values.is_empty() {
        range.clone().collect()
    } else {
        l_values.to_vec()
    };
    if let Some(&l) = ls.iter().find(|l| !range.contains(l)) {
        return Err(bad(
            "l",
            format!(
                "{l} outside {}..={} for {} series with r = {r}",
                range.start(),
                range.end(),
                kind.name()
            ),
        ));
    }
    let mut checkpoints: Vec<u64> = std::iter::successors(Some(1u64), |&n| n.checked_mul(2))
        .take_while(|&n| n < n_max)
        .collect();
    checkpoints.push(n_max);

    let table = seq.tabulate(n_max)?;
    let mut lines = Vec::with_capacity(ls.len());
    for l in ls {
        let x = std::f64::consts::TAU * l as f64 / r as f64;
        // basis(2lπk/r) only depends on k mod r
        let cycle: Vec<Complex64> = (0..r)
            .map(|j| kind.basis(std::f64::consts::TAU * ((l * j) % r) as f64 / r as f64))
            .collect();
        let mut rows = Vec::with_capacity(checkpoints.len());
        let (mut sum, mut comp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let mut next = 0;
        for k in 1..=n_max {
            let term = table.get(k) * cycle[(k % r) as usize] - comp;
            let t = sum + term;
            comp = (t - sum) - term;
            sum = t;
            if k == checkpoints[next] {
                rows.push(PointwiseRow {
                    n: k,
                    re: sum.re,
                    im: sum.im,
                });
                next += 1;
            }
        }
        let (oscillation, verdict) = assess(&rows, n_max);
        lines.push(PointwiseLine {
            l,
            x,
            rows,
            oscillation,
            verdict,
        });
    }
    let verdict = lines
        .iter()
        .map(|l| l.verdict)
        .max()
        .unwrap_or(PointwiseVerdict::Convergent);
    Ok(PointwiseReport {
        kind,
        r,
        n_max,
        osc_tol: OSC_TOL,
        heuristic: true,
        lines,
        verdict,
    })
}

fn assess(rows: &[PointwiseRow], n_max: u64) -> (f64, PointwiseVerdict) {
    let top: Vec<Complex64> = rows
        .iter()
        .filter(|row| row.n >= n_max / 4)
        .map(|row| Complex64::new(row.re, row.im))
        .collect();
    let oscillation = top
        .iter()
        .flat_map(|a| top.iter().map(move |b| (a - b).norm()))
        .fold(0.0, f64::max);
    if oscillation < OSC_TOL {
        return (oscillation, PointwiseVerdict::Convergent);
    }
    let sums: Vec<Complex64> = rows.iter().map(|row| Complex64::new(row.re, row.im)).collect();
    let inc: Vec<Complex64> = sums.windows(2).map(|w| w[1] - w[0]).collect();
    let trending = inc.len() >= 3
        && inc[inc.len() - 3..]
            .windows(2)
            .all(|w| (w[1] * w[0].conj()).re > 0.0 && w[1].norm() >= TREND_RATIO * w[0].norm());
    let verdict = if trending {
        PointwiseVerdict::DivergentTrend
    } else {
        PointwiseVerdict::Inconclusive
    };
    (oscillation, verdict)
}
