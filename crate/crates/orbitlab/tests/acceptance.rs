//! Acceptance suite: one test per criterion, each asserting the stated
//! tolerances and runtime budget and printing a pass line (run with
//! `cargo test --test acceptance -- --nocapture` to see them).

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbitlab::arith::{ledger_sums_to_zero, log_abs_ledger, ProjPoint};
use orbitlab::config::{parse_forms, to_binform};
use orbitlab::degrees::{alpha_estimate, product_map_profile, recursion_verify};
use orbitlab::heights::SubschemeSpec;
use orbitlab::lang_siegel::{banach_profile, check_hypothesis, ratio_series, roth_scan};
use orbitlab::maps::{
    certify_p1_morphism, extend_periodic, iterate_morphism, iterate_orbit, DynamicalSystem,
    OrbitPoint, P1Morphism, ProductMap,
};
use orbitlab::multiplicity::{backward_cocycle, chain_rule_check};
use orbitlab::Place;

const DEGREE_CAP: u64 = 1024;

fn pt(v: &[i64]) -> ProjPoint {
    ProjPoint::from_i64(v)
}

fn morphism(src: &str) -> P1Morphism {
    let forms = parse_forms(src).unwrap();
    certify_p1_morphism(to_binform(&forms[0]).unwrap(), to_binform(&forms[1]).unwrap()).unwrap()
}

fn single_orbit(f: &P1Morphism, x0: &ProjPoint, n_max: usize) -> Vec<orbitlab::maps::OrbitRecord> {
    let sys = DynamicalSystem::Projective(f.as_rational_map());
    let (recs, stop) = iterate_orbit(&sys, OrbitPoint::Single(x0.clone()), n_max, 1 << 20);
    extend_periodic(recs, &stop, n_max)
}

fn check_runtime(start: Instant, limit_s: f64, label: &str) -> f64 {
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < limit_s,
        "{label}: runtime {elapsed:.2}s exceeds the {limit_s}s budget"
    );
    elapsed
}

#[test]
fn criterion_1_product_formula() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20260810);
    for _ in 0..10_000 {
        let num = rng.gen_range(1..=1_000_000_000i64) * if rng.gen_bool(0.5) { -1 } else { 1 };
        let den = rng.gen_range(1..=1_000_000_000i64);
        let a = BigRational::new(BigInt::from(num), BigInt::from(den));
        let ledger = log_abs_ledger(&a).unwrap();
        assert!(
            ledger_sums_to_zero(&a, &ledger),
            "product formula broke at {num}/{den}"
        );
    }
    let t = check_runtime(start, 5.0, "criterion 1");
    println!("PASS criterion 1 (product formula, 10^4 random rationals, exact): {t:.2}s");
}

#[test]
fn criterion_2_squaring_alpha_desk_instance() {
    let start = Instant::now();
    let f = morphism("s^2 | t^2");
    let orbit = single_orbit(&f, &pt(&[2, 1]), 12);
    assert_eq!(orbit.len(), 13);
    let ln2 = std::f64::consts::LN_2;
    for rec in &orbit {
        // coordinates are exactly (2^(2^n) : 1)
        let p = rec.point.as_single().unwrap();
        assert_eq!(p.coords()[0], BigInt::from(2u32).pow(1u32 << rec.n));
        assert_eq!(p.coords()[1], BigInt::from(1));
        let expect = (1u64 << rec.n) as f64 * ln2;
        assert!((rec.height - expect).abs() <= 1e-12 * expect.max(1.0));
    }
    // the root sequence increases strictly toward 2, so the sharp tail
    // statement [2 (log 2)^{1/12}, 2] is read off the final entry
    let profile = product_map_profile(&[2]).unwrap();
    let est = alpha_estimate(&orbit, 1, Some(&profile)).unwrap();
    let lo = 2.0 * ln2.powf(1.0 / 12.0);
    assert!(est.alpha_lower >= lo - 1e-12);
    assert!(est.alpha_upper <= 2.0 + 1e-12);
    assert_eq!(est.classified_value, Some(2.0));
    assert!(est.sequence.iter().all(|&v| v <= 2.0 + 1e-12));
    let t = check_runtime(start, 1.0, "criterion 2");
    println!(
        "PASS criterion 2 (squaring desk instance: h_n = 2^n log 2 exact, tail in [{lo:.6}, 2], classified 2): {t:.2}s"
    );
}

#[test]
fn criterion_3_product_map_alpha_values() {
    let start = Instant::now();
    let cube = morphism("s^3 | t^3");
    let sq = morphism("s^2 | t^2");
    let profile = product_map_profile(&[3, 2]).unwrap();
    assert_eq!(profile.d_seq(), &[1.0, 3.0, 6.0]);
    assert_eq!(profile.mu_seq(), &[3.0, 2.0]);
    assert_eq!(profile.peak(), Some(2));
    let cases = [
        (pt(&[1, 1]), pt(&[1, 1]), 1.0),
        (pt(&[1, 1]), pt(&[2, 1]), 2.0),
        (pt(&[2, 1]), pt(&[2, 1]), 3.0),
    ];
    for (x1, x2, expect) in cases {
        let prod = ProductMap::new(vec![cube.clone(), sq.clone()]).unwrap();
        let sys = DynamicalSystem::Product(prod);
        let (recs, stop) = iterate_orbit(
            &sys,
            OrbitPoint::Tuple(vec![x1.clone(), x2.clone()]),
            10,
            1 << 20,
        );
        let recs = extend_periodic(recs, &stop, 10);
        let est = alpha_estimate(&recs, 4, Some(&profile)).unwrap();
        assert_eq!(
            est.classified_value,
            Some(expect),
            "start ({x1}, {x2}): bracket [{}, {}]",
            est.alpha_lower,
            est.alpha_upper
        );
    }
    let t = check_runtime(start, 1.0, "criterion 3");
    println!("PASS criterion 3 (product (x^3, x^2): profile exact, alpha classified 1/2/3): {t:.2}s");
}

#[test]
fn criterion_4_recursion_on_product_orbit() {
    let start = Instant::now();
    let cube = morphism("s^3 | t^3");
    let sq = morphism("s^2 | t^2");
    let prod = ProductMap::new(vec![cube, sq]).unwrap();
    let sys = DynamicalSystem::Product(prod);
    let (recs, _) = iterate_orbit(
        &sys,
        OrbitPoint::Tuple(vec![pt(&[2, 1]), pt(&[2, 1])]),
        10,
        1 << 20,
    );
    let heights: Vec<f64> = recs.iter().map(|r| r.height).collect();
    let report = recursion_verify(&heights, 3.0, 2.0, 2, 0.9, 2, 0, 1e-6).unwrap();
    assert!(report.best_c > 0.0, "best_C = {}", report.best_c);
    assert!(report.violations.is_empty());
    assert!(report.pairs_checked > 0);
    let t = check_runtime(start, 1.0, "criterion 4");
    println!(
        "PASS criterion 4 (k-step height recursion on the (2,2)-orbit: best_C = {:.6} > 0, no violations): {t:.2}s",
        report.best_c
    );
}

#[test]
fn criterion_5_cocycle_suite() {
    let start = Instant::now();
    let sq = morphism("s^2 | t^2");
    let cheb = morphism("2*s^2 - t^2 | t^2");

    // squaring at (0:1): kappa_{-n} = 2^n for n <= 8, exactly
    let table = backward_cocycle(&sq, &pt(&[0, 1]), 8, DEGREE_CAP).unwrap();
    let expect: Vec<u64> = (0..=8).map(|n| 1u64 << n).collect();
    assert_eq!(table.entries, expect);

    // Chebyshev at (1:1): kappa = 1,2,2,2,2,2 for n = 1..6, exactly
    let table = backward_cocycle(&cheb, &pt(&[1, 1]), 6, DEGREE_CAP).unwrap();
    assert_eq!(table.entries[1..], [1, 2, 2, 2, 2, 2]);

    // chain rule: exact equality at every rational-chain sample
    let samples = [pt(&[0, 1]), pt(&[1, 1]), pt(&[-1, 1]), pt(&[2, 1]), pt(&[1, 0])];
    for (f, g) in [(&sq, &sq), (&sq, &cheb), (&cheb, &sq), (&cheb, &cheb)] {
        let report = chain_rule_check(f, g, &samples, DEGREE_CAP).unwrap();
        for s in report {
            assert!(
                s.equal,
                "chain rule failed at {}: {} != {} * {}",
                s.point, s.composite, s.inner, s.outer
            );
        }
    }

    // power identity: the cocycle of f^2 is the stride-2 subsample
    let cheb2 = iterate_morphism(&cheb, 2, DEGREE_CAP).unwrap();
    let t1 = backward_cocycle(&cheb, &pt(&[1, 1]), 8, DEGREE_CAP).unwrap();
    let t2 = backward_cocycle(&cheb2, &pt(&[1, 1]), 4, DEGREE_CAP).unwrap();
    for n in 0..=4usize {
        assert_eq!(t2.entries[n], t1.entries[2 * n], "power identity at n = {n}");
    }
    let sq2 = iterate_morphism(&sq, 2, DEGREE_CAP).unwrap();
    let t1 = backward_cocycle(&sq, &pt(&[0, 1]), 8, DEGREE_CAP).unwrap();
    let t2 = backward_cocycle(&sq2, &pt(&[0, 1]), 4, DEGREE_CAP).unwrap();
    for n in 0..=4usize {
        assert_eq!(t2.entries[n], t1.entries[2 * n]);
    }

    let t = check_runtime(start, 30.0, "criterion 5");
    println!("PASS criterion 5 (cocycle tables, chain rule, power identity; cap 1024): {t:.2}s");
}

#[test]
fn criterion_6_slow_growth_desk_instance() {
    let start = Instant::now();
    let y = SubschemeSpec::from_points(vec![(pt(&[1, 0]), 1)]).unwrap();
    let places = [Place::Infinite];

    // theorem instance: x -> 1/(x^2+1) from (2:1)
    let f = morphism("t^2 | s^2 + t^2");
    let orbit = single_orbit(&f, &pt(&[2, 1]), 10);
    let rep = check_hypothesis(&f, &y, &orbit, 6, 5, DEGREE_CAP, None).unwrap();
    assert_eq!((rep.e_lower, rep.e_upper), (1.0, 1.0), "e(f;Y) bracket");
    assert!(rep.alpha.alpha_lower > 1.5, "alpha bracket too low");
    assert!(rep.holds);
    let series = ratio_series(&orbit, &y, &places).unwrap();
    let at_10 = series.entries.iter().find(|e| e.n == 10).unwrap();
    assert!(at_10.ratio < 0.1, "ratio at n=10 is {}", at_10.ratio);

    // negative control: x -> x^2 - 1 from (3:1); Y is totally ramified
    // over itself, the hypothesis fails, the ratio sticks at 1
    let g = morphism("s^2 - t^2 | t^2");
    let orbit = single_orbit(&g, &pt(&[3, 1]), 10);
    let rep = check_hypothesis(&g, &y, &orbit, 6, 5, DEGREE_CAP, None).unwrap();
    assert!(!rep.holds, "negative control must report hypothesis failure");
    let series = ratio_series(&orbit, &y, &places).unwrap();
    assert!(series.entries.iter().all(|e| e.ratio == 1.0));

    let t = check_runtime(start, 5.0, "criterion 6");
    println!("PASS criterion 6 (slow-growth instance passes, negative control fails, ratio shapes exact): {t:.2}s");
}

#[test]
fn criterion_7_banach_exactness() {
    let start = Instant::now();
    let horizon = 10_000usize;
    for k in [2usize, 3, 5] {
        let set: Vec<usize> = (0..=horizon).step_by(k).collect();
        let grid: Vec<usize> = (1..=horizon).filter(|d| (d + 1) % k == 0).collect();
        let profile = banach_profile(&set, horizon, &grid);
        for e in &profile.entries {
            // exact rational identity: max_count * k == d + 1
            assert_eq!(
                e.max_count * k,
                e.d + 1,
                "density at k={k}, d={} is not exactly 1/k",
                e.d
            );
        }
    }
    let t = check_runtime(start, 1.0, "criterion 7");
    println!("PASS criterion 7 (window density exactly 1/k for k in {{2,3,5}} at N = 10^4): {t:.2}s");
}

#[test]
fn criterion_8_roth_stabilization() {
    let start = Instant::now();
    let y = SubschemeSpec::from_points(vec![(pt(&[0, 1]), 1)]).unwrap();
    let places = [Place::Infinite];
    let scan_100 = roth_scan(&y, &places, 0.5, 100f64.ln()).unwrap();
    let scan_200 = roth_scan(&y, &places, 0.5, 200f64.ln()).unwrap();
    assert_eq!(scan_100.height_limit, 100);
    assert_eq!(scan_200.height_limit, 200);
    let a: Vec<&ProjPoint> = scan_100.violators.iter().map(|v| &v.point).collect();
    let b: Vec<&ProjPoint> = scan_200.violators.iter().map(|v| &v.point).collect();
    assert_eq!(a, b, "violator sets must agree across height bounds");
    let t = check_runtime(start, 60.0, "criterion 8");
    println!(
        "PASS criterion 8 (violator set stable across B: {} violators; {} and {} points scanned): {t:.2}s",
        a.len(),
        scan_100.points_scanned,
        scan_200.points_scanned
    );
}

#[test]
fn criterion_9_byte_identical_reruns() {
    use orbitlab::runner::{parse_config, run_experiment, ExperimentKind};
    let start = Instant::now();
    let configs: Vec<(ExperimentKind, &str)> = vec![
        (
            ExperimentKind::Orbit,
            r#"{"map": "s^2 | t^2", "start": ["2","1"], "n_max": 12}"#,
        ),
        (
            ExperimentKind::Alpha,
            r#"{"map": "s^2 | t^2", "start": ["2","1"], "n_max": 12, "tail_window": 1}"#,
        ),
        (
            ExperimentKind::Alpha,
            r#"{"map": {"product": ["s^3 | t^3", "s^2 | t^2"]}, "start": [["2","1"],["2","1"]], "n_max": 10, "tail_window": 4}"#,
        ),
        (
            ExperimentKind::Recursion,
            r#"{"map": {"product": ["s^3 | t^3", "s^2 | t^2"]}, "start": [["2","1"],["2","1"]], "n_max": 10,
               "recursion": {"mu_l": 3.0, "mu_l_plus_1": 2.0, "m": 2, "eta": 0.9, "n0": 2}}"#,
        ),
        (
            ExperimentKind::Cocycle,
            r#"{"map": "2*s^2 - t^2 | t^2", "start": ["1","1"], "cocycle_n_max": 6, "tail_window": 3}"#,
        ),
        (
            ExperimentKind::Ratio,
            r#"{"map": "t^2 | s^2 + t^2", "start": ["2","1"], "n_max": 10,
               "subscheme": {"points": [{"coords": [1, 0]}]}, "places": ["inf"], "theta": 0.5}"#,
        ),
        (
            ExperimentKind::Density,
            r#"{"density": {"horizon": 10000, "d_grid": [2999, 5999, 8999], "set": {"multiples_of": 3}}}"#,
        ),
        (
            ExperimentKind::Roth,
            r#"{"subscheme": {"points": [{"coords": [0, 1]}]}, "places": ["inf"],
               "epsilon": 0.5, "height_bound": 4.605170185988092}"#,
        ),
    ];
    for (kind, json) in configs {
        let config = parse_config(json).unwrap();
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let out_a = run_experiment(kind, &config, dir_a.path(), true).unwrap();
        let out_b = run_experiment(kind, &config, dir_b.path(), true).unwrap();
        assert_eq!(out_a.files.len(), out_b.files.len());
        for (fa, fb) in out_a.files.iter().zip(&out_b.files) {
            assert_eq!(fa.file_name(), fb.file_name());
            let ba = std::fs::read(fa).unwrap();
            let bb = std::fs::read(fb).unwrap();
            assert_eq!(
                ba,
                bb,
                "bytes differ across runs for {} ({:?})",
                fa.file_name().unwrap().to_string_lossy(),
                kind
            );
        }
    }
    let t = start.elapsed().as_secs_f64();
    println!("PASS criterion 9 (byte-identical CSV/JSON/SVG across reruns of every kind): {t:.2}s");
}

/// The remaining exactness statement of criterion 1's module: the
/// valuation representation makes |a|_p = p^{-val} an identity, checked
/// here on a structured sweep rather than random draws.
#[test]
fn valuation_power_identity_sweep() {
    for p in [2u64, 3, 5, 7] {
        let place = Place::finite_u64(p).unwrap();
        for e in 0..6u32 {
            for m in [1i64, 7, 11] {
                if (m as u64).is_multiple_of(p) {
                    continue;
                }
                let a = BigRational::new(
                    BigInt::from(m) * BigInt::from(p).pow(e),
                    BigInt::from(1),
                );
                let got = orbitlab::arith::abs_value(&place, &a).unwrap();
                let expect = (p as f64).powi(-(e as i32));
                assert!((got - expect).abs() <= 1e-12 * expect);
            }
        }
    }
}
