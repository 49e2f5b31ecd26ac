use super::*;
use crate::sequences::CounterexampleParams;
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

fn sine(seq: Sequence) -> SeriesSpec {
    SeriesSpec::new(SeriesKind::Sine, seq, 1.0).unwrap()
}

fn harmonic() -> Sequence {
    Sequence::power_log(1.0, 1.0, 0.0).unwrap()
}

fn log_squared() -> Sequence {
    Sequence::closed_form("1/(n*ln(n+1)^2)").unwrap()
}

/// Independent sine-series oracle: plain loop, `sin` evaluated per term.
fn sine_oracle(a: impl Fn(u64) -> f64, n: u64, m: u64, x: f64) -> f64 {
    (n..=m).map(|k| a(k) * (k as f64 * x).sin()).sum()
}

#[test]
fn partial_sum_examples() {
    let z = partial_sum(&sine(harmonic()), 50, 0.0, Method::Direct).unwrap();
    assert_eq!(z, Complex64::new(0.0, 0.0));
    let v = partial_sum(&sine(harmonic()), 3, PI / 2.0, Method::Direct).unwrap();
    assert!((v.re - 2.0 / 3.0).abs() < 1e-15);
    let ce = Sequence::counterexample(2.0).unwrap();
    let p = CounterexampleParams::new(2.0).unwrap();
    let got = partial_sum(&sine(ce), 11, TAU / 3.0, Method::Direct).unwrap();
    let want = sine_oracle(|k| p.term(k), 1, 11, TAU / 3.0);
    assert!((got.re - want).abs() < 1e-14);
    assert_eq!(got.im, 0.0);
}

#[test]
fn frequency_scale_enters_the_argument() {
    let spec = SeriesSpec::new(SeriesKind::Cosine, harmonic(), 2.5).unwrap();
    let got = partial_sum(&spec, 40, 0.3, Method::Direct).unwrap();
    let want: f64 = (1..=40).map(|k| (2.5 * k as f64 * 0.3).cos() / k as f64).sum();
    assert!((got.re - want).abs() < 1e-13);
    let via_sbp = partial_sum(&spec, 40, 0.3, Method::Sbp { r: 3 }).unwrap();
    assert!((via_sbp - got).norm() < 1e-12);
}

#[test]
fn partial_sum_errors() {
    assert!(SeriesSpec::new(SeriesKind::Sine, harmonic(), 0.0).is_err());
    assert!(SeriesSpec::new(SeriesKind::Sine, harmonic(), f64::NAN).is_err());
    let spec = sine(harmonic());
    assert!(partial_sum(&spec, 0, 1.0, Method::Direct).is_err());
    assert!(partial_sum(&spec, 5, f64::INFINITY, Method::Direct).is_err());
    assert!(partial_sum(&spec, 5, 1.0, Method::Sbp { r: 0 }).is_err());
    assert!(matches!(
        partial_sum(&spec, 5, TAU / 3.0, Method::Sbp { r: 3 }),
        Err(ConvergenceError::Kernel(KernelError::Singular { .. }))
    ));
}

#[test]
fn tail_probe_of_zero_sequence_is_zero() {
    let rep = tail_probe(
        &sine(Sequence::zero()),
        &[1, 10, 100],
        50,
        &XGrid::Uniform { count: 64 },
        Method::Direct,
    )
    .unwrap();
    assert!(rep.rows.iter().all(|r| r.sup == 0.0 && r.grid_sup == 0.0));
    assert_eq!(rep.trend_slope, None);
    assert!(!rep.strictly_decreasing);
}

#[test]
fn tail_probe_argument_checks() {
    let spec = sine(harmonic());
    let g = XGrid::Uniform { count: 16 };
    assert!(tail_probe(&spec, &[], 10, &g, Method::Direct).is_err());
    assert!(tail_probe(&spec, &[4, 4], 10, &g, Method::Direct).is_err());
    assert!(tail_probe(&spec, &[0, 4], 10, &g, Method::Direct).is_err());
    assert!(tail_probe(&spec, &[4], 0, &g, Method::Direct).is_err());
    assert!(tail_probe(&spec, &[4], 10, &XGrid::Uniform { count: 0 }, Method::Direct).is_err());
    assert!(tail_probe(&spec, &[4], 10, &XGrid::Points(vec![]), Method::Direct).is_err());
    assert!(tail_probe(&spec, &[4], 10, &XGrid::Points(vec![TAU / 3.0]), Method::Sbp { r: 3 }).is_err());
}

#[test]
fn uniform_grid_stays_inside_the_domain() {
    let spec = sine(harmonic());
    let pts = XGrid::Uniform { count: 8 }.points(&spec);
    assert_eq!(pts.len(), 8);
    assert!((pts[0] - PI / 16.0).abs() < 1e-15);
    assert!(pts.iter().all(|&x| x > 0.0 && x < PI));
    let exp = SeriesSpec::new(SeriesKind::Exponential, harmonic(), 2.0).unwrap();
    let pts = XGrid::Uniform { count: 4 }.points(&exp);
    assert!(pts.iter().all(|&x| x > 0.0 && x < PI));
    // half-step offsets avoid 2lπ/(rc) for every r ≤ 6 when the count is even
    for r in 1..=6 {
        assert!(XGrid::default()
            .points(&spec)
            .iter()
            .all(|&x| KernelPoint::usable(x, r)));
    }
}

#[test]
fn tail_probe_matches_oracle_and_refinement_only_raises() {
    let spec = sine(log_squared());
    let xs: Vec<f64> = (0..40).map(|j| 0.01 + 0.075 * j as f64).collect();
    let rep = tail_probe(&spec, &[8, 64], 300, &XGrid::Points(xs.clone()), Method::Direct).unwrap();
    for row in &rep.rows {
        let grid = xs
            .iter()
            .map(|&x| {
                sine_oracle(
                    |k| 1.0 / (k as f64 * ((k + 1) as f64).ln().powi(2)),
                    row.n,
                    row.n + 300,
                    x,
                )
                .abs()
            })
            .fold(0.0, f64::max);
        assert!((row.grid_sup - grid).abs() < 1e-12 * (1.0 + grid));
        assert!(row.sup >= row.grid_sup);
    }
    // adding points never lowers the sup
    let mut more = xs.clone();
    more.extend((0..40).map(|j| 0.04 + 0.075 * j as f64));
    let finer = tail_probe(&spec, &[8, 64], 300, &XGrid::Points(more), Method::Direct).unwrap();
    for (a, b) in rep.rows.iter().zip(&finer.rows) {
        assert!(b.grid_sup >= a.grid_sup);
    }
}

#[test]
fn tail_probe_sbp_path_agrees_and_drops_singular_points() {
    let spec = sine(harmonic());
    let xs = vec![0.3, TAU / 3.0, 1.1, 2.0];
    let direct = tail_probe(&spec, &[10, 40], 200, &XGrid::Points(xs.clone()), Method::Direct).unwrap();
    let sbp = tail_probe(&spec, &[10, 40], 200, &XGrid::Points(xs), Method::Sbp { r: 3 }).unwrap();
    assert_eq!(sbp.grid.excluded_singular, 1);
    assert_eq!(direct.grid.excluded_singular, 0);
    // the dropped point is not the maximiser here, so grid sups agree
    for (a, b) in direct.rows.iter().zip(&sbp.rows) {
        assert!((a.grid_sup - b.grid_sup).abs() < 1e-10);
    }
}

#[test]
fn counterexample_tail_grows_at_two_thirds_pi() {
    let spec = sine(Sequence::counterexample(2.0).unwrap());
    let grid = XGrid::Points(vec![TAU / 3.0]);
    let sups: Vec<f64> = [10u64, 1_000, 100_000]
        .iter()
        .map(|&k| tail_probe(&spec, &[1], k, &grid, Method::Direct).unwrap().rows[0].sup)
        .collect();
    assert!(sups.windows(2).all(|w| w[1] > w[0]), "{sups:?}");
}

#[test]
fn log_squared_tail_decreases() {
    let spec = sine(log_squared());
    let rep = tail_probe(
        &spec,
        &[16, 64, 256, 1024],
        2000,
        &XGrid::Uniform { count: 1024 },
        Method::Direct,
    )
    .unwrap();
    assert!(rep.strictly_decreasing, "{:?}", rep.rows);
    assert!(rep.trend_slope.unwrap() < 0.0);
}

#[test]
fn decay_examples() {
    let inv_sq = Sequence::power_log(1.0, 2.0, 0.0).unwrap();
    let grid: Vec<u64> = (1..=20).map(|j| 1u64 << j).collect();
    let rep = decay_condition(&inv_sq, DecayKind::NLogN, &grid).unwrap();
    assert_eq!(rep.verdict, DecayVerdict::Decaying);
    for row in &rep.rows {
        let n = row.n as f64;
        assert!((row.statistic - n.ln() / n).abs() < 1e-15);
    }
    assert!(rep.rows.windows(2).all(|w| w[0].tail_max >= w[1].tail_max));

    let n = 22_026u64; // ≈ e^10
    let rep = decay_condition(&log_squared(), DecayKind::NLogN, &[n]).unwrap();
    assert!((rep.rows[0].statistic - 0.1).abs() < 1e-4);
    assert_eq!(rep.verdict, DecayVerdict::Inconclusive);
}

#[test]
fn counterexample_decay_statistics() {
    let ce = Sequence::counterexample(2.0).unwrap();
    let grid: Vec<u64> = (1..=6).map(|j| 10u64.pow(j)).collect();
    let rep = decay_condition(&ce, DecayKind::NLogN, &grid).unwrap();
    assert_eq!(rep.verdict, DecayVerdict::NotDecaying);
    for row in &rep.rows {
        assert!((row.statistic - 3.0).abs() < 0.2, "{row:?}");
        let n_a = row.statistic / (row.n as f64).ln();
        assert!(n_a <= 3.0 / ((row.n + 1) as f64).ln());
    }
}

#[test]
fn decay_argument_checks() {
    let s = harmonic();
    assert!(decay_condition(&s, DecayKind::NLogN, &[]).is_err());
    assert!(decay_condition(&s, DecayKind::NLogN, &[0, 2]).is_err());
    assert!(decay_condition(&s, DecayKind::NLogN, &[5, 3]).is_err());
    assert!(decay_condition(&s, DecayKind::NPow { p: 0.5 }, &[2, 3]).is_err());
    assert!(power_implies_log_decay(&s, 1.0, &[2, 3]).is_err());
    assert!(power_implies_log_decay(&s, 0.5, &[2, 3]).is_err());
}

#[test]
fn power_statistic_dominates_log_statistic() {
    let grid: Vec<u64> = (1..=24).map(|j| 1u64 << j).collect();
    for p in [1.5, 2.0, 4.0] {
        // decays under n ln n but not under n^{2−1/p} (for p near 1 the
        // power statistic n^{1−1/p}/ln²n only turns upward far beyond 2^24)
        let rep = power_implies_log_decay(&log_squared(), p, &grid).unwrap();
        assert!(rep.domination_holds && rep.verdicts_consistent);
        assert_eq!(rep.nlogn.verdict, DecayVerdict::Decaying);
        assert_ne!(rep.npow.verdict, DecayVerdict::Decaying);
        // decays under both
        let fast = Sequence::power_log(1.0, 2.0, 0.0).unwrap();
        let rep = power_implies_log_decay(&fast, p, &grid).unwrap();
        assert!(rep.domination_holds && rep.verdicts_consistent);
        assert_eq!(rep.npow.verdict, DecayVerdict::Decaying);
        assert_eq!(rep.nlogn.verdict, DecayVerdict::Decaying);
    }
}

#[test]
fn log_power_constant_is_the_supremum() {
    for p in [1.2, 2.0, 3.0] {
        let a = 1.0 - 1.0 / p;
        let k = log_power_constant(p);
        let best = (1..200_000u64)
            .map(|n| (n as f64).ln() / (n as f64).powf(a))
            .fold(0.0, f64::max);
        // the sup sits at n = e^{1/(1−1/p)}, which need not be an integer
        assert!(best <= k && best > 0.99 * k, "p={p} best={best} k={k}");
    }
}

#[test]
fn l_ranges() {
    assert!(valid_l_range(SeriesKind::Sine, 2).is_err());
    assert_eq!(valid_l_range(SeriesKind::Sine, 3).unwrap(), 1..=1);
    assert_eq!(valid_l_range(SeriesKind::Sine, 4).unwrap(), 1..=1);
    assert_eq!(valid_l_range(SeriesKind::Sine, 6).unwrap(), 1..=2);
    assert_eq!(valid_l_range(SeriesKind::Sine, 7).unwrap(), 1..=3);
    assert_eq!(valid_l_range(SeriesKind::Cosine, 1).unwrap(), 0..=0);
    assert_eq!(valid_l_range(SeriesKind::Exponential, 5).unwrap(), 0..=2);
    assert!(valid_l_range(SeriesKind::Cosine, 0).is_err());
}

#[test]
fn pointwise_examples() {
    let rep = pointwise_condition(&Sequence::zero(), SeriesKind::Sine, 3, &[1], 1 << 10).unwrap();
    assert_eq!(rep.verdict, PointwiseVerdict::Convergent);
    assert!(rep.heuristic);
    assert!(rep.lines[0].rows.iter().all(|r| r.re == 0.0 && r.im == 0.0));

    let inv_sq = Sequence::power_log(1.0, 2.0, 0.0).unwrap();
    let rep = pointwise_condition(&inv_sq, SeriesKind::Sine, 3, &[1], 1 << 20).unwrap();
    assert_eq!(
        rep.verdict,
        PointwiseVerdict::Convergent,
        "{}",
        rep.lines[0].oscillation
    );
    let last = rep.lines[0].rows.last().unwrap();
    let want = sine_oracle(|k| 1.0 / (k * k) as f64, 1, 1 << 20, TAU / 3.0);
    assert!((last.re - want).abs() < 1e-9);

    let ce = Sequence::counterexample(2.0).unwrap();
    let rep = pointwise_condition(&ce, SeriesKind::Sine, 3, &[1], 1 << 22).unwrap();
    assert_eq!(rep.verdict, PointwiseVerdict::DivergentTrend);
}

#[test]
fn pointwise_defaults_and_errors() {
    let s = harmonic();
    let rep = pointwise_condition(&s, SeriesKind::Cosine, 4, &[], 64).unwrap();
    assert_eq!(rep.lines.iter().map(|l| l.l).collect::<Vec<_>>(), vec![0, 1, 2]);
    assert_eq!(rep.lines[0].rows.last().unwrap().n, 64);
    assert!(pointwise_condition(&s, SeriesKind::Sine, 4, &[2], 64).is_err());
    assert!(pointwise_condition(&s, SeriesKind::Sine, 3, &[0], 64).is_err());
    assert!(pointwise_condition(&s, SeriesKind::Sine, 3, &[1], 8).is_err());
    // the cosine series of 1/k diverges at x = 0
    let rep = pointwise_condition(&s, SeriesKind::Cosine, 1, &[0], 1 << 16).unwrap();
    assert_eq!(rep.verdict, PointwiseVerdict::DivergentTrend);
}

#[test]
fn log_integral_bound_grid() {
    for n in [1u64, 10, 1000] {
        for big_n in [1u64, 100, 1_000_000] {
            for p in [1.0, 1.5, 2.0, 4.0, 10.0] {
                let rep = log_integral_bound(n, big_n, p).unwrap();
                assert!(rep.ok, "{rep:?}");
                assert!(rep.quadrature_agrees, "{rep:?}");
            }
        }
    }
}

#[test]
fn log_integral_bound_examples() {
    let rep = log_integral_bound(7, 12345, 1.0).unwrap();
    assert_eq!(rep.integral, 0.0);
    assert_eq!(rep.quadrature, 0.0);
    assert!(rep.ok);
    let rep = log_integral_bound(1, 1_000_000, 2.0).unwrap();
    let closed = (1_000_001f64.ln() / 1001f64.ln()).ln();
    assert!((rep.integral - closed).abs() < 1e-14);
    assert!(rep.ok && rep.integral <= 2f64.ln());
    let rep = log_integral_bound(100, 100, 4.0).unwrap();
    assert!(rep.ok && rep.integral <= 4f64.ln());
    assert!(log_integral_bound(1, 10, 0.9).is_err());
    assert!(log_integral_bound(0, 10, 2.0).is_err());
    assert!(log_integral_bound(1, 0, 2.0).is_err());
}

#[test]
fn divergence_examples() {
    let p = CounterexampleParams::new(2.0).unwrap();
    let rep = divergence_demo(2.0, &[0, 1000]).unwrap();
    let five = sine_oracle(|k| p.term(k), 1, 5, TAU / 3.0);
    assert!((rep.rows[0].s - five).abs() < 1e-14);
    assert_eq!(rep.rows[0].lower_bound, 0.0);
    assert!(rep.rows[0].s >= 0.0);
    let direct = sine_oracle(|k| p.term(k), 1, 6005, TAU / 3.0);
    assert!((rep.rows[1].s - direct).abs() < 1e-9);
    assert!(rep.bound_holds && rep.strictly_increasing);
    assert!(rep.max_regroup_error < 1e-12);
    assert!(divergence_demo(1.0, &[10]).is_err());
    assert!(divergence_demo(2.0, &[]).is_err());
    assert!(divergence_demo(2.0, &[10, 10]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn direct_and_sbp_partial_sums_agree(n_terms in 1u64..400, r in 1u64..=6, x in 0.01f64..6.27, c in 0.5f64..3.0, kind in 0usize..3) {
        let theta = c * x;
        prop_assume!(KernelPoint::margin(theta, r as i64) >= 1e-3);
        let spec = SeriesSpec::new(SeriesKind::ALL[kind], log_squared(), c).unwrap();
        let d = partial_sum(&spec, n_terms, x, Method::Direct).unwrap();
        let s = partial_sum(&spec, n_terms, x, Method::Sbp { r }).unwrap();
        prop_assert!((d - s).norm() <= 1e-9 * (1.0 + d.norm()));
    }

    #[test]
    fn rotating_window_matches_direct(n in 1u64..500, len in 0u64..3000, x in 0.0f64..6.3, kind in 0usize..3) {
        let kind = SeriesKind::ALL[kind];
        let table = harmonic().tabulate(n + len).unwrap();
        let a = rotating_window(&table, kind, n, n + len, x);
        let b = direct_table(&table, kind, n, n + len, x);
        prop_assert!((a - b).norm() <= 1e-11 * (1.0 + b.norm()));
    }

    #[test]
    fn log_integral_bound_holds(n in 1u64..100_000, big_n in 1u64..10_000_000, p in 1.0f64..20.0) {
        let rep = log_integral_bound(n, big_n, p).unwrap();
        prop_assert!(rep.ok);
        prop_assert!(rep.quadrature_agrees, "{:?}", rep);
    }
}
