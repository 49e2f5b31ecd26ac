//! Dirichlet-type kernels and summation by parts with step `r`.
//!
//! For integer `k` and nonzero integer `r` (negative `r` is allowed and is
//! simply substituted into the closed form):
//!
//! ```text
//! D̃_{k,r}(x) = cos((k + r/2)x) / (2 sin(rx/2))
//! D_{k,r}(x)  = sin((k + r/2)x) / (2 sin(rx/2))
//! ```
//!
//! For `x ≠ 2lπ/r` and `m ≥ n` the partial sums are rewritten as
//!
//! ```text
//! Σ_{k=n}^{m} a_k sin kx = − Σ_{k=n}^{m} Δ_r a_k D̃_{k,r}(x)
//!                          + Σ_{k=m+1}^{m+r} a_k D̃_{k,−r}(x)
//!                          − Σ_{k=n}^{n+r−1} a_k D̃_{k,−r}(x)
//!
//! Σ_{k=n}^{m} a_k cos kx =   Σ_{k=n}^{m} Δ_r a_k D_{k,r}(x)
//!                          − Σ_{k=m+1}^{m+r} a_k D_{k,−r}(x)
//!                          + Σ_{k=n}^{n+r−1} a_k D_{k,−r}(x)
//!
//! Σ_{k=n}^{m} a_k e^{ikx} = −i / (2 sin(rx/2)) · ( Σ_{k=n}^{m} Δ_r a_k e^{i(k+r/2)x}
//!                                                + Σ_{k=m+1}^{m+r} a_k e^{i(k−r/2)x}
//!                                                − Σ_{k=n}^{n+r−1} a_k e^{i(k−r/2)x} )
//! ```
//!
//! All three follow from `2 sin(rx/2)·e^{ikx} = −i (e^{i(k+r/2)x} − e^{i(k−r/2)x})`
//! and an index shift by `r`; note that the cosine identity needs the
//! sine-numerator kernel `D`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sequences::{Sequence, SequenceError, TermTable};

/// Smallest admissible `|sin(rx/2)|`.
pub const EPS_SING: f64 = 1e-12;
/// Identity tolerance: `|sbp − direct| ≤ SBP_TOL·(1 + |direct|)`.
pub const SBP_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("x = {x} is within {margin:e} of a kernel singularity for r = {r} (need |sin(rx/2)| >= {EPS_SING:e})")]
    Singular { x: f64, r: i64, margin: f64 },
    #[error("invalid parameter {name}: {msg}")]
    Parameter { name: &'static str, msg: String },
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// Trigonometric system of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Sine,
    Cosine,
    Exponential,
}

impl SeriesKind {
    pub const ALL: [SeriesKind; 3] = [SeriesKind::Sine, SeriesKind::Cosine, SeriesKind::Exponential];

    /// `sin θ`, `cos θ` or `e^{iθ}`.
    #[inline]
    pub fn basis(self, theta: f64) -> Complex64 {
        match self {
            SeriesKind::Sine => Complex64::new(theta.sin(), 0.0),
            SeriesKind::Cosine => Complex64::new(theta.cos(), 0.0),
            SeriesKind::Exponential => Complex64::from_polar(1.0, theta),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::Sine => "sine",
            SeriesKind::Cosine => "cosine",
            SeriesKind::Exponential => "exponential",
        }
    }
}

impl std::str::FromStr for SeriesKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sin" | "sine" => Ok(SeriesKind::Sine),
            "cos" | "cosine" => Ok(SeriesKind::Cosine),
            "exp" | "exponential" => Ok(SeriesKind::Exponential),
            other => Err(format!("unknown series kind '{other}'")),
        }
    }
}

/// An evaluation point `x` for kernels with step `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelPoint {
    pub x: f64,
    pub r: i64,
    /// `|sin(rx/2)|`
    pub singularity_margin: f64,
}

impl KernelPoint {
    pub fn margin(x: f64, r: i64) -> f64 {
        (r as f64 * x / 2.0).sin().abs()
    }

    pub fn new(x: f64, r: i64) -> Result<Self, KernelError> {
        if r == 0 {
            return Err(KernelError::Parameter {
                name: "r",
                msg: "must be nonzero".into(),
            });
        }
        if !x.is_finite() {
            return Err(KernelError::Parameter {
                name: "x",
                msg: format!("must be finite, got {x}"),
            });
        }
        let margin = Self::margin(x, r);
        if !(margin >= EPS_SING) {
            return Err(KernelError::Singular { x, r, margin });
        }
        Ok(KernelPoint {
            x,
            r,
            singularity_margin: margin,
        })
    }

    pub fn usable(x: f64, r: i64) -> bool {
        Self::new(x, r).is_ok()
    }
}

/// `D̃_{k,r}(x) = cos((k + r/2)x) / (2 sin(rx/2))`.
pub fn dirichlet_cos(k: i64, r: i64, x: f64) -> Result<f64, KernelError> {
    KernelPoint::new(x, r)?;
    Ok(dtilde(k as f64, r as f64, x))
}

/// `D_{k,r}(x) = sin((k + r/2)x) / (2 sin(rx/2))`.
pub fn dirichlet_sin(k: i64, r: i64, x: f64) -> Result<f64, KernelError> {
    KernelPoint::new(x, r)?;
    Ok(dsine(k as f64, r as f64, x))
}

#[inline]
fn dtilde(k: f64, r: f64, x: f64) -> f64 {
    ((k + r / 2.0) * x).cos() / (2.0 * (r * x / 2.0).sin())
}

#[inline]
fn dsine(k: f64, r: f64, x: f64) -> f64 {
    ((k + r / 2.0) * x).sin() / (2.0 * (r * x / 2.0).sin())
}

fn check_range(n: u64, m: u64, r: u64) -> Result<(), KernelError> {
    if n == 0 {
        return Err(KernelError::Sequence(SequenceError::Domain(0)));
    }
    if r == 0 {
        return Err(KernelError::Sequence(SequenceError::Step(0)));
    }
    if m < n {
        return Err(KernelError::Parameter {
            name: "m",
            msg: format!("need m >= n, got m = {m} < n = {n}"),
        });
    }
    Ok(())
}

/// Right-hand side of the sine identity; equals `Σ_{k=n}^{m} a_k sin kx`.
pub fn sbp_sin(seq: &Sequence, n: u64, m: u64, r: u64, x: f64) -> Result<Complex64, KernelError> {
    sbp(seq, SeriesKind::Sine, n, m, r, x)
}

/// Right-hand side of the cosine identity; equals `Σ_{k=n}^{m} a_k cos kx`.
pub fn sbp_cos(seq: &Sequence, n: u64, m: u64, r: u64, x: f64) -> Result<Complex64, KernelError> {
    sbp(seq, SeriesKind::Cosine, n, m, r, x)
}

/// Right-hand side of the exponential identity; equals `Σ_{k=n}^{m} a_k e^{ikx}`.
pub fn sbp_exp(seq: &Sequence, n: u64, m: u64, r: u64, x: f64) -> Result<Complex64, KernelError> {
    sbp(seq, SeriesKind::Exponential, n, m, r, x)
}

pub fn sbp(seq: &Sequence, kind: SeriesKind, n: u64, m: u64, r: u64, x: f64) -> Result<Complex64, KernelError> {
    check_range(n, m, r)?;
    KernelPoint::new(x, r as i64)?;
    let table = seq.tabulate(m + r)?;
    Ok(sbp_table(&table, kind, n, m, r, x))
}

/// Summation-by-parts evaluation over a table holding at least `a_1..=a_{m+r}`.
/// The caller has checked `1 ≤ n ≤ m`, `r ≥ 1` and kernel usability.
pub(crate) fn sbp_table(table: &TermTable, kind: SeriesKind, n: u64, m: u64, r: u64, x: f64) -> Complex64 {
    let rf = r as f64;
    let zero = Complex64::new(0.0, 0.0);
    match kind {
        SeriesKind::Sine => {
            let main: Complex64 = (n..=m).map(|k| table.delta(k, r) * dtilde(k as f64, rf, x)).sum();
            let upper: Complex64 = (m + 1..=m + r).map(|k| table.get(k) * dtilde(k as f64, -rf, x)).sum();
            let lower: Complex64 = (n..n + r).map(|k| table.get(k) * dtilde(k as f64, -rf, x)).sum();
            zero - main + upper - lower
        }
        SeriesKind::Cosine => {
            let main: Complex64 = (n..=m).map(|k| table.delta(k, r) * dsine(k as f64, rf, x)).sum();
            let upper: Complex64 = (m + 1..=m + r).map(|k| table.get(k) * dsine(k as f64, -rf, x)).sum();
            let lower: Complex64 = (n..n + r).map(|k| table.get(k) * dsine(k as f64, -rf, x)).sum();
            main - upper + lower
        }
        SeriesKind::Exponential => {
            let half = rf / 2.0;
            let main: Complex64 = (n..=m)
                .map(|k| table.delta(k, r) * Complex64::from_polar(1.0, (k as f64 + half) * x))
                .sum();
            let upper: Complex64 = (m + 1..=m + r)
                .map(|k| table.get(k) * Complex64::from_polar(1.0, (k as f64 - half) * x))
                .sum();
            let lower: Complex64 = (n..n + r)
                .map(|k| table.get(k) * Complex64::from_polar(1.0, (k as f64 - half) * x))
                .sum();
            let factor = Complex64::new(0.0, -1.0 / (2.0 * (half * x).sin()));
            factor * (main + upper - lower)
        }
    }
}

/// `Σ_{k=n}^{m} a_k · basis(kx)` by direct summation.
pub fn direct_sum(seq: &Sequence, kind: SeriesKind, n: u64, m: u64, x: f64) -> Result<Complex64, KernelError> {
    check_range(n, m, 1)?;
    let table = seq.tabulate(m)?;
    Ok(direct_table(&table, kind, n, m, x))
}

pub(crate) fn direct_table(table: &TermTable, kind: SeriesKind, n: u64, m: u64, x: f64) -> Complex64 {
    (n..=m).map(|k| table.get(k) * kind.basis(k as f64 * x)).sum()
}

/// One randomized identity check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SbpCase {
    pub trial: usize,
    pub kind: SeriesKind,
    pub len: usize,
    pub n: u64,
    pub m: u64,
    pub r: u64,
    pub x: f64,
    pub margin: f64,
    pub direct: Complex64,
    pub sbp: Complex64,
    pub abs_err: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SbpSweepReport {
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub min_margin: f64,
    /// Largest `|sbp − direct| / (1 + |direct|)` over all cases.
    pub max_scaled_error: f64,
    pub failures: usize,
    pub pass: bool,
    pub cases: Vec<SbpCase>,
}

/// Bounds of the randomized sweep.
pub const SWEEP_MAX_LEN: usize = 220;
pub const SWEEP_MAX_N: u64 = 20;
pub const SWEEP_MAX_SPAN: u64 = 200;
pub const SWEEP_MAX_R: u64 = 6;
pub const SWEEP_MIN_MARGIN: f64 = 1e-3;

/// Randomized check of all three identities against direct summation:
/// complex sequences of length ≤ 220 (zero beyond), `n ≤ 20`,
/// `m ≤ n + 200`, `r ≤ 6`, `x` uniform on `[0, 2π)` with margin ≥ 1e-3.
pub fn sbp_sweep(trials: usize, seed: u64) -> SbpSweepReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(3 * trials);
    for trial in 0..trials {
        let len = rng.gen_range(1..=SWEEP_MAX_LEN);
        let values: Vec<Complex64> = (0..len)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let n = rng.gen_range(1..=SWEEP_MAX_N);
        let m = rng.gen_range(n..=n + SWEEP_MAX_SPAN);
        let r = rng.gen_range(1..=SWEEP_MAX_R);
        let x = loop {
            let x = rng.gen_range(0.0..std::f64::consts::TAU);
            if KernelPoint::margin(x, r as i64) >= SWEEP_MIN_MARGIN {
                break x;
            }
        };
        let margin = KernelPoint::margin(x, r as i64);
        let table = Sequence::table(values)
            .and_then(|s| s.tabulate(m + r))
            .expect("finite random table");
        for kind in SeriesKind::ALL {
            let direct = direct_table(&table, kind, n, m, x);
            let sbp = sbp_table(&table, kind, n, m, r, x);
            let abs_err = (sbp - direct).norm();
            let bound = SBP_TOL * (1.0 + direct.norm());
            cases.push(SbpCase {
                trial,
                kind,
                len,
                n,
                m,
                r,
                x,
                margin,
                direct,
                sbp,
                abs_err,
                bound,
                pass: abs_err <= bound,
            });
        }
    }
    let max_scaled_error = cases
        .iter()
        .map(|c| c.abs_err / (1.0 + c.direct.norm()))
        .fold(0.0, f64::max);
    let failures = cases.iter().filter(|c| !c.pass).count();
    SbpSweepReport {
        trials,
        seed,
        tolerance: SBP_TOL,
        min_margin: SWEEP_MIN_MARGIN,
        max_scaled_error,
        failures,
        pass: failures == 0,
        cases,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop, prop_assert, prop_assume, proptest, Strategy};
    use std::f64::consts::PI;

    fn oracle(values: &[Complex64], kind: SeriesKind, n: u64, m: u64, x: f64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for k in n..=m {
            let a = values.get(k as usize - 1).copied().unwrap_or_default();
            let t = k as f64 * x;
            s += a * match kind {
                SeriesKind::Sine => Complex64::new(t.sin(), 0.0),
                SeriesKind::Cosine => Complex64::new(t.cos(), 0.0),
                SeriesKind::Exponential => Complex64::new(t.cos(), t.sin()),
            };
        }
        s
    }

    #[test]
    fn kernel_examples() {
        assert!(dirichlet_cos(0, 1, PI).unwrap().abs() < 1e-16);
        assert!(dirichlet_cos(0, 2, PI / 2.0).unwrap().abs() < 1e-16);
        assert_eq!(dirichlet_cos(3, 2, 1.0).unwrap(), 4f64.cos() / (2.0 * 1f64.sin()));
        assert!((dirichlet_sin(0, 2, PI / 2.0).unwrap() - 0.5).abs() < 1e-16);
        assert!((dirichlet_sin(1, 1, PI).unwrap() + 0.5).abs() < 1e-16);
        let expected = (6.5f64 * 0.7).sin() / (2.0 * (1.5f64 * 0.7).sin());
        assert_eq!(dirichlet_sin(5, 3, 0.7).unwrap(), expected);
    }

    #[test]
    fn singular_points_are_rejected() {
        assert!(matches!(dirichlet_cos(0, 1, 0.0), Err(KernelError::Singular { .. })));
        assert!(matches!(
            dirichlet_sin(2, 3, 2.0 * PI / 3.0),
            Err(KernelError::Singular { .. })
        ));
        assert!(matches!(
            dirichlet_sin(2, 3, 2.0 * PI / 3.0 + 1e-14),
            Err(KernelError::Singular { .. })
        ));
        assert!(dirichlet_sin(2, 3, 2.0 * PI / 3.0 + 1e-9).is_ok());
        assert!(dirichlet_cos(0, 0, 1.0).is_err());
        assert!(dirichlet_cos(0, 1, f64::NAN).is_err());
    }

    #[test]
    fn negative_step_kernel() {
        let (k, r, x) = (4i64, 3i64, 0.8f64);
        let neg = dirichlet_cos(k, -r, x).unwrap();
        assert_eq!(neg, ((k as f64 - 1.5) * x).cos() / (2.0 * (-1.5 * x).sin()));
        // D̃_{k,r}(−x) = −D̃_{k,−r}(x)
        let flipped = dirichlet_cos(k, r, -x).unwrap();
        let reference = -((k as f64 + 1.5) * x).cos() / (2.0 * (1.5 * x).sin());
        assert!((flipped - reference).abs() < 1e-15);
        assert!((dirichlet_cos(k, -r, x).unwrap() + dirichlet_cos(k - r, r, x).unwrap()).abs() < 1e-15);
        assert!((dirichlet_sin(k, -r, x).unwrap() + dirichlet_sin(k - r, r, x).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn identity_examples() {
        let zero = Sequence::zero();
        for kind in SeriesKind::ALL {
            assert_eq!(sbp(&zero, kind, 1, 10, 2, 0.4).unwrap(), Complex64::new(0.0, 0.0));
        }
        let spike1 = Sequence::table([1.0]).unwrap();
        assert!((sbp_sin(&spike1, 1, 1, 1, 1.0).unwrap() - 1f64.sin()).norm() < 1e-14);
        assert!((sbp_cos(&spike1, 1, 1, 2, 0.5).unwrap() - 0.5f64.cos()).norm() < 1e-14);
        let spike2 = Sequence::table([0.0, 1.0]).unwrap();
        let e = sbp_exp(&spike2, 1, 3, 1, 0.3).unwrap();
        assert!((e - Complex64::from_polar(1.0, 0.6)).norm() < 1e-14);

        let harmonic = Sequence::power_log(1.0, 1.0, 0.0).unwrap();
        let values: Vec<Complex64> = (1..=60).map(|k| Complex64::new(1.0 / k as f64, 0.0)).collect();
        let d = oracle(&values, SeriesKind::Sine, 2, 50, 0.9);
        assert!((sbp_sin(&harmonic, 2, 50, 3, 0.9).unwrap() - d).norm() <= 1e-9 * (1.0 + d.norm()));

        let inv_sq = Sequence::power_log(1.0, 2.0, 0.0).unwrap();
        let values: Vec<Complex64> = (1..=90).map(|k| Complex64::new(1.0 / (k * k) as f64, 0.0)).collect();
        let d = oracle(&values, SeriesKind::Cosine, 3, 80, 2.0);
        assert!((sbp_cos(&inv_sq, 3, 80, 2, 2.0).unwrap() - d).norm() <= 1e-9 * (1.0 + d.norm()));
    }

    #[test]
    fn random_complex_exp_example() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let values: Vec<Complex64> = (0..70)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let seq = Sequence::table(values.clone()).unwrap();
        let d = oracle(&values, SeriesKind::Exponential, 5, 60, 1.3);
        assert!((sbp_exp(&seq, 5, 60, 4, 1.3).unwrap() - d).norm() <= 1e-9 * (1.0 + d.norm()));
    }

    #[test]
    fn printed_boundary_conventions_fail_the_oracle() {
        // The variants with a "+" on the lower sine boundary, D̃ in the cosine
        // identity, or no a_k in the exponential boundary sums all miss.
        let values: Vec<Complex64> = (1..=40).map(|k| Complex64::new(1.0 / k as f64, 0.0)).collect();
        let table = Sequence::table(values.clone()).unwrap().tabulate(40).unwrap();
        let (n, m, r, x) = (3u64, 30u64, 2u64, 0.9f64);
        let rf = r as f64;

        let main: Complex64 = (n..=m).map(|k| table.delta(k, r) * dtilde(k as f64, rf, x)).sum();
        let upper: Complex64 = (m + 1..=m + r).map(|k| table.get(k) * dtilde(k as f64, -rf, x)).sum();
        let lower: Complex64 = (n..n + r).map(|k| table.get(k) * dtilde(k as f64, -rf, x)).sum();
        let printed_sin = -main + upper + lower;
        let d = oracle(&values, SeriesKind::Sine, n, m, x);
        assert!((printed_sin - d).norm() > 1e-3);
        assert!((sbp_table(&table, SeriesKind::Sine, n, m, r, x) - d).norm() < 1e-12);

        let main: Complex64 = (n..=m).map(|k| table.delta(k, r) * dtilde(k as f64, rf, x)).sum();
        let printed_cos = main - upper + lower;
        let d = oracle(&values, SeriesKind::Cosine, n, m, x);
        assert!((printed_cos - d).norm() > 1e-3);

        let half = rf / 2.0;
        let main: Complex64 = (n..=m)
            .map(|k| table.delta(k, r) * Complex64::from_polar(1.0, -(k as f64 + half) * x))
            .sum();
        let up: Complex64 = (m + 1..=m + r)
            .map(|k| Complex64::from_polar(1.0, -(k as f64 - half) * x))
            .sum();
        let lo: Complex64 = (n..n + r)
            .map(|k| Complex64::from_polar(1.0, -(k as f64 - half) * x))
            .sum();
        let printed_exp = Complex64::new(0.0, -1.0 / (2.0 * (half * x).sin())) * (main - up + lo);
        let d = oracle(&values, SeriesKind::Exponential, n, m, x);
        assert!((printed_exp - d).norm() > 1e-3);
    }

    #[test]
    fn argument_errors() {
        let s = Sequence::zero();
        assert!(sbp_sin(&s, 5, 4, 1, 1.0).is_err());
        assert!(sbp_sin(&s, 0, 4, 1, 1.0).is_err());
        assert!(sbp_sin(&s, 1, 4, 0, 1.0).is_err());
        assert!(matches!(sbp_cos(&s, 1, 4, 2, PI), Err(KernelError::Singular { .. })));
    }

    #[test]
    fn sweep_is_deterministic_and_passes() {
        let a = sbp_sweep(25, 7);
        let b = sbp_sweep(25, 7);
        assert_eq!(a, b);
        assert!(a.pass, "max scaled error {}", a.max_scaled_error);
        assert_eq!(a.cases.len(), 75);
        assert_ne!(sbp_sweep(25, 8).cases[0].x, a.cases[0].x);
    }

    fn real_values() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-2.0f64..2.0, 1..220)
    }

    proptest! {
        #[test]
        fn exp_is_cos_plus_i_sin(values in real_values(), n in 1u64..=20, span in 0u64..=200, r in 1u64..=6, x in 0.0f64..6.28) {
            prop_assume!(KernelPoint::margin(x, r as i64) >= 1e-3);
            let seq = Sequence::table(values).unwrap();
            let m = n + span;
            let e = sbp_exp(&seq, n, m, r, x).unwrap();
            let c = sbp_cos(&seq, n, m, r, x).unwrap();
            let s = sbp_sin(&seq, n, m, r, x).unwrap();
            let combined = c + Complex64::new(0.0, 1.0) * s;
            prop_assert!((e - combined).norm() <= 1e-9 * (1.0 + e.norm()));
        }

        #[test]
        fn identities_match_direct(values in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..220),
                                   n in 1u64..=20, span in 0u64..=200, r in 1u64..=6, x in 0.0f64..6.28) {
            prop_assume!(KernelPoint::margin(x, r as i64) >= 1e-3);
            let values: Vec<Complex64> = values.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
            let seq = Sequence::table(values.clone()).unwrap();
            let m = n + span;
            for kind in SeriesKind::ALL {
                let d = oracle(&values, kind, n, m, x);
                let got = sbp(&seq, kind, n, m, r, x).unwrap();
                prop_assert!((got - d).norm() <= 1e-9 * (1.0 + d.norm()), "{:?}", kind);
            }
        }
    }
}
