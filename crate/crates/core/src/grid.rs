//! Index grids and the small amount of curve fitting the probes need.

/// `start, start·ratio, …` (`count` entries, strictly increasing, saturating).
pub fn geometric_grid(start: u64, ratio: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut v = start.max(1);
    for _ in 0..count {
        if out.last().is_some_and(|&last| last >= v) {
            break;
        }
        out.push(v);
        v = v.saturating_mul(ratio.max(2));
    }
    out
}

/// Least-squares slope of `ln y` against `ln x`, over points with `x, y > 0`
/// and finite. Returns `None` with fewer than two usable points.
pub fn log_log_slope(points: impl IntoIterator<Item = (f64, f64)>) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .into_iter()
        .filter(|&(x, y)| x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// `(Σ v^p)^{1/p}` for nonnegative `v`, scaled by the maximum so tiny or
/// huge magnitudes neither underflow nor overflow.
pub(crate) fn lp_norm(values: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        return values.iter().sum();
    }
    let max = values.iter().copied().fold(0.0f64, f64::max);
    if max == 0.0 || !max.is_finite() {
        return max;
    }
    let s: f64 = values.iter().map(|v| (v / max).powf(p)).sum();
    max * s.powf(1.0 / p)
}
