//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with the measured numbers (run with `--nocapture` to see them on
//! success). Criteria are asserted exactly as stated; where a stated band is
//! unattainable the test stays red and prints the measured analysis rather
//! than loosening the threshold.

use std::process::Command;
use std::sync::LazyLock;
use std::time::Instant;
use zetalab::chain::{distinctness_experiment, evaluate_chain};
use zetalab::functionals::{
    calibrate_cbar, fermat_probe, fit_fourth_moment_coeffs, functional_f1, CoeffFit,
    FermatRational,
};
use zetalab::ladder::{check_partition_properties, j_hat, reverse_iterate, LadderMode};
use zetalab::quadrature::{fourth_moment, moment_integral, second_moment_j, IntegrandKind};
use zetalab::special::zeta_on_sigma;
use zetalab::zeros::{build_zero_table, ZeroTable};
use zetalab::{Constants, PrecisionPolicy, TWO_PI_SQ};

fn policy() -> PrecisionPolicy {
    PrecisionPolicy::default()
}

fn constants() -> Constants {
    Constants::default()
}

static TABLE: LazyLock<ZeroTable> =
    LazyLock::new(|| build_zero_table(7200.0, &policy()).expect("zero table to 7200"));

/// Geometric grid used by the narrow fit.
fn short_grid() -> Vec<f64> {
    let (lo, hi, n) = (500.0f64, 5000.0f64, 8usize);
    let r = (hi / lo).powf(1.0 / (n - 1) as f64);
    (0..n).map(|i| lo * r.powi(i as i32)).collect()
}

/// The narrow grid extended to 1e4.
fn long_grid() -> Vec<f64> {
    let mut g = short_grid();
    g.push(7071.0);
    g.push(10000.0);
    g
}

static FIT: LazyLock<CoeffFit> = LazyLock::new(|| {
    fit_fourth_moment_coeffs(&long_grid(), &constants(), &policy()).expect("coefficient fit")
});

static CBAR_1: LazyLock<f64> =
    LazyLock::new(|| calibrate_cbar(1, 5000.0, &TABLE, &policy()).expect("cbar calibration"));

#[test]
fn criterion_01_zero_engine() {
    let start = Instant::now();
    let p = policy();
    let table = build_zero_table(1000.0, &p).unwrap();
    let reference = zetalab_oracle::find_zeros(4.0, 95.0);
    assert!(reference.len() >= 25, "oracle returned too few zeros");
    let mut worst = 0.0f64;
    for (mine, theirs) in table.zeros().iter().zip(reference.iter().take(25)) {
        worst = worst.max((mine - theirs).abs());
    }
    let mut worst_count = 0.0f64;
    for k in 1..=20 {
        let t = 50.0 * k as f64;
        let estimate = zetalab::special::rs_theta(t, &p).unwrap() / std::f64::consts::PI + 1.0;
        let defect = (table.count_to(t) as f64 - estimate).abs();
        worst_count = worst_count.max(defect);
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "ACCEPTANCE 01 zero engine: first-25 worst diff {worst:.2e}, \
         count defect {worst_count:.2}, {elapsed:.1}s"
    );
    assert!(worst < 1e-6, "zero mismatch {worst}");
    assert!(worst_count < 2.0, "count defect {worst_count}");
    assert!(elapsed < 60.0, "runtime {elapsed}s");
}

#[test]
fn criterion_02_second_moment() {
    let start = Instant::now();
    let p = policy();
    let rec = second_moment_j(1000.0, &p).unwrap();
    let oracle = zetalab_oracle::integrate(
        |t| zetalab_oracle::z_fn_boosted(t, 2.0).powi(2),
        0.0,
        1000.0,
        0.05,
    );
    let main_term = j_hat(1000.0);
    let rel_dev = (rec.value - main_term).abs() / rec.value;
    let elapsed = start.elapsed().as_secs_f64();
    let oracle_ok = (rec.value - oracle).abs() <= rec.err_estimate;
    let band_ok = rel_dev < 0.03;
    println!(
        "ACCEPTANCE 02 second moment: J(1000) = {:.4} vs oracle {oracle:.4} \
         (err estimate {:.2e}, oracle clause {}), main term {main_term:.1} \
         rel dev {:.3} vs 0.03 ({}), {elapsed:.1}s",
        rec.value,
        rec.err_estimate,
        if oracle_ok { "PASS" } else { "FAIL" },
        rel_dev,
        if band_ok { "PASS" } else { "FAIL" },
    );
    assert!(elapsed < 60.0, "runtime {elapsed}s");
    assert!(
        oracle_ok,
        "J(1000) = {} vs oracle {} beyond err estimate {}",
        rec.value, oracle, rec.err_estimate
    );
    // The stated comparator T ln(T/2pi) - T omits the first-order 2 gamma T
    // term of the classical expansion T ln(T/2pi) + (2 gamma - 1) T, so the
    // measured deviation sits near 2 gamma / ln(T/2pi) ~ 22 percent and
    // cannot reach 3 percent at any desk-scale height. Asserted as stated.
    assert!(
        band_ok,
        "relative deviation from the stated main term is {rel_dev:.4}; \
         the full classical main term including (2 gamma - 1) T gives {:.4}",
        (rec.value - (main_term + (2.0 * 0.577_215_664_901_532_9 - 1.0) * 1000.0)).abs()
            / rec.value
    );
}

#[test]
fn criterion_03_fourth_moment() {
    let start = Instant::now();
    let (c, p) = (constants(), policy());
    for t in [2000.0, 5000.0, 1e4] {
        let rec = fourth_moment(t, &p).unwrap();
        let ratio = rec.value / (t * t.ln().powi(4) / TWO_PI_SQ);
        println!("ACCEPTANCE 03 fourth moment: leading ratio at T={t} is {ratio:.3}");
        assert!(ratio > 0.5 && ratio < 2.0, "ratio {ratio} at T={t}");
    }
    let narrow = fit_fourth_moment_coeffs(&short_grid(), &c, &p).unwrap();
    let wide = fit_fourth_moment_coeffs(&long_grid(), &c, &p).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "ACCEPTANCE 03 fourth moment: residual narrow {:.3e} -> wide {:.3e}, \
         a = {:?}, {elapsed:.1}s",
        narrow.residual, wide.residual, wide.a_coeffs
    );
    assert!(
        wide.residual < narrow.residual,
        "residual did not decrease: {} -> {}",
        narrow.residual,
        wide.residual
    );
    assert_eq!(wide.a_coeffs[0], Constants::a0());
    assert!(elapsed < 600.0, "runtime {elapsed}s");
}

#[test]
fn criterion_04_ladder_properties() {
    let (c, p) = (constants(), policy());
    let seq = reverse_iterate(5000.0, 3, LadderMode::Integral, &c, &p).unwrap();
    for w in seq.iterates.windows(2) {
        assert!(w[0] < w[1], "ordering violated");
    }
    let rep = check_partition_properties(&seq, &c, &p).unwrap();
    println!(
        "ACCEPTANCE 04 ladder: equidistance {:.4}, increment defect {:.4}, \
         model ratios {:?}",
        rep.equidistance_defect, rep.increment_defect, rep.model_ratios
    );
    assert!(rep.equidistance_defect < 0.2);
    assert!(rep.increment_defect < 0.2);
    for r in &rep.model_ratios {
        assert!(*r > 0.7 && *r < 1.4, "model ratio {r}");
    }
    let integral = reverse_iterate(1000.0, 1, LadderMode::Integral, &c, &p).unwrap();
    let asymptotic = reverse_iterate(1000.0, 1, LadderMode::Asymptotic, &c, &p).unwrap();
    let gap = (integral.iterates[1] / asymptotic.iterates[1] - 1.0).abs();
    println!("ACCEPTANCE 04 ladder: mode agreement at T=1000 is {gap:.4}");
    assert!(gap < 0.02, "modes differ by {gap}");
}

#[test]
fn criterion_05_first_functional() {
    let (c, p) = (constants(), policy());
    for x in [0.5, 1.0, 2.0] {
        let dev = |tau: f64| {
            let s = functional_f1(x, tau, LadderMode::Asymptotic, &c, &p).unwrap();
            (s.value / x - 1.0).abs()
        };
        let (d3, d4) = (dev(1e3), dev(1e4));
        println!("ACCEPTANCE 05 first functional: x={x} deviation {d3:.4} -> {d4:.4}");
        assert!(d4 < 0.25, "x={x}: deviation {d4}");
        assert!(d4 < d3, "x={x}: deviation did not shrink ({d3} -> {d4})");
    }
}

#[test]
fn criterion_06_identity_composition() {
    let (c, p) = (constants(), policy());
    let coeffs = &*FIT;
    let sigma = 1.0;
    let zeta2 = zeta_on_sigma(2.0 * sigma, 0.0, &p).unwrap().re;
    let cs = zetalab::functionals::c_coeffs(sigma, &coeffs.a_coeffs, &p).unwrap();
    let composed_ratio = |t: f64| {
        let u = reverse_iterate(t, 1, LadderMode::Asymptotic, &c, &p)
            .unwrap()
            .iterates[1];
        let a = moment_integral(t, u, IntegrandKind::Sigma2 { sigma }, &p, None)
            .unwrap()
            .value;
        let cr2 = moment_integral(t, u, IntegrandKind::Crit2, &p, None)
            .unwrap()
            .value;
        let b = fourth_moment(t, &p).unwrap().value;
        let mut denom = 0.0;
        for (s, coef) in cs.iter().enumerate() {
            denom += coef * cr2.powi(4 - s as i32) * a.powi(s as i32);
        }
        let lhs = a.powi(4) * b / denom;
        lhs / (zeta2.powi(4) * t / TWO_PI_SQ)
    };
    let r3 = composed_ratio(1e3);
    let r4 = composed_ratio(1e4);
    let band_ok = (r4 - 1.0).abs() <= 0.25;
    println!(
        "ACCEPTANCE 06 identity: ratio {r3:.4} at T=1e3 -> {r4:.4} at T=1e4 \
         (band 1 +/- 0.25: {})",
        if band_ok { "PASS" } else { "FAIL" }
    );
    assert!(
        (r4 - 1.0).abs() < (r3 - 1.0).abs(),
        "no improvement: {r3} -> {r4}"
    );
    // The composed left side divided by zeta^4 T / (2 pi^2) carries the
    // fourth power of the O(1) defect of the quotient substitution, about
    // 4 (ln 2pi - 2 gamma) / ln T at height T; at T = 1e4 that sits near
    // +0.3, outside the stated band. Asserted as stated.
    assert!(band_ok, "identity ratio at T=1e4 is {r4:.4}, outside 1 +/- 0.25");
}

#[test]
fn criterion_07_chain_instance() {
    let start = Instant::now();
    let (mut c, p) = (constants(), policy());
    c.cbar.insert(1, *CBAR_1);
    let x = c.one_minus_c();
    let grid = [1e3, 3e3, 1e4];
    let rep = evaluate_chain(
        x,
        1.0,
        1,
        &grid,
        LadderMode::Asymptotic,
        &FIT,
        &TABLE,
        &c,
        &p,
    )
    .unwrap();
    assert_eq!(rep.complete_rows(), 7, "incomplete chain report");
    for (m, row) in rep.ratios.iter().enumerate() {
        let vals: Vec<f64> = row.iter().map(|c| c.value().unwrap()).collect();
        println!(
            "ACCEPTANCE 07 chain: member {} ratios {:?}",
            zetalab::chain::MEMBER_NAMES[m],
            vals
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!("ACCEPTANCE 07 chain: {elapsed:.1}s");
    assert!(elapsed < 1800.0, "runtime {elapsed}s");
    // all seven ratios at tau = 1e4 inside (0.5, 2)
    for (m, row) in rep.ratios.iter().enumerate() {
        let r = row[2].value().unwrap();
        assert!(
            r > 0.5 && r < 2.0,
            "member {} ratio {r} at tau=1e4 outside (0.5, 2)",
            zetalab::chain::MEMBER_NAMES[m]
        );
    }
    // members with O(1/ln tau) error: divisor sum, gamma ratio, sigma
    // moment; |ratio - 1| must decrease across the grid
    let mut failures = Vec::new();
    for m in [2usize, 4, 5] {
        let devs: Vec<f64> = rep.ratios[m]
            .iter()
            .map(|c| (c.value().unwrap() - 1.0).abs())
            .collect();
        let ok = devs[0] > devs[1] && devs[1] > devs[2];
        println!(
            "ACCEPTANCE 07 chain: member {} |ratio-1| {:?} decreasing: {}",
            zetalab::chain::MEMBER_NAMES[m],
            devs,
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            failures.push(format!(
                "{} {:?}",
                zetalab::chain::MEMBER_NAMES[m],
                devs
            ));
        }
    }
    assert!(
        failures.is_empty(),
        "deviations not strictly decreasing for: {}; the shared basic-state \
         integral carries a real few-percent fluctuation at tau = 3e3 \
         (cross-checked against the independent oracle), which exceeds the \
         smooth O(1/ln tau) decrement of these members at desk heights",
        failures.join("; ")
    );
}

#[test]
fn criterion_08_distinctness() {
    let (c, p) = (constants(), policy());
    let rep = distinctness_experiment(1.0, 2.0, &[1e3, 3e3, 1e4], LadderMode::Asymptotic, &c, &p)
        .unwrap();
    let at_1e4 = rep.ratios[2];
    println!(
        "ACCEPTANCE 08 distinctness: ratio at tau=1e4 is {at_1e4:.4}, \
         extrapolated {:.4} +/- {:.1e}",
        rep.extrapolated_limit, rep.fit_std_error
    );
    assert!((at_1e4 - 2.0).abs() < 0.2, "ratio {at_1e4}");
    assert!(rep.separated_from_one);
    let same = distinctness_experiment(1.0, 1.0, &[1e3, 3e3, 1e4], LadderMode::Asymptotic, &c, &p)
        .unwrap();
    assert!(same.ratios.iter().all(|r| *r == 1.0), "{:?}", same.ratios);
    assert!(!same.separated_from_one);
}

#[test]
fn criterion_09_fermat_probe() {
    let start = Instant::now();
    let (c, p) = (constants(), policy());
    let fr = FermatRational::new(1, 1, 1, 3).unwrap();
    assert_eq!(fr.value_f64().unwrap(), 2.0);
    let grid = [1e3, 3e3, 1e4, 3e4];
    let (_, verdict) = fermat_probe(&fr, 1.0, &grid, &FIT, LadderMode::Asymptotic, &c, &p).unwrap();
    println!(
        "ACCEPTANCE 09 fermat (1,1,1,3): limit {:.4} +/- {:.2e}, separated {}",
        verdict.extrapolated_limit, verdict.fit_std_error, verdict.separated_from_one
    );
    assert!(
        (verdict.extrapolated_limit / 2.0 - 1.0).abs() < 0.25,
        "extrapolated {} vs 2",
        verdict.extrapolated_limit
    );
    assert!(verdict.separated_from_one);

    let fr = FermatRational::new(3, 4, 5, 3).unwrap();
    assert_eq!(
        fr.value(),
        &num_rational_check(91, 125),
        "exact rational mismatch"
    );
    // x = 91/125 = 0.728 sits close to the excluded value and the low-tau
    // trajectory is fluctuation-dominated, so the verdict needs high points
    // where the fit error shrinks below the separation margin
    let grid = [3e4, 1e5, 2e5];
    let (samples, verdict) =
        fermat_probe(&fr, 1.0, &grid, &FIT, LadderMode::Asymptotic, &c, &p).unwrap();
    let values: Vec<f64> = samples.iter().map(|s| s.value).collect();
    println!(
        "ACCEPTANCE 09 fermat (3,4,5,3): trajectory {values:?}, limit {:.4} +/- {:.2e}, \
         separated {}, {:.0}s",
        verdict.extrapolated_limit,
        verdict.fit_std_error,
        verdict.separated_from_one,
        start.elapsed().as_secs_f64()
    );
    assert!(verdict.separated_from_one);
}

fn num_rational_check(n: i64, d: i64) -> num_rational::BigRational {
    num_rational::BigRational::new(n.into(), d.into())
}

#[test]
fn criterion_10_determinism() {
    let bin = env!("CARGO_BIN_EXE_zetalab");
    let dir = std::env::temp_dir().join(format!("zetalab-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cache_a = dir.join("cache-a");
    let cache_b = dir.join("cache-b");
    let runs: Vec<Vec<String>> = vec![
        vec![
            "moment".into(),
            "--kind".into(),
            "crit2".into(),
            "--upper".into(),
            "300".into(),
        ],
        vec![
            "ladder".into(),
            "--t".into(),
            "1000".into(),
            "--k".into(),
            "2".into(),
        ],
        vec![
            "functional".into(),
            "--kind".into(),
            "f1".into(),
            "--tau".into(),
            "1000".into(),
        ],
        vec![
            "chain".into(),
            "--tau".into(),
            "400".into(),
            "--tau".into(),
            "800".into(),
        ],
        vec![
            "fermat".into(),
            "--triple".into(),
            "1".into(),
            "1".into(),
            "1".into(),
            "--n".into(),
            "3".into(),
            "--tau".into(),
            "400".into(),
            "--tau".into(),
            "600".into(),
            "--tau".into(),
            "800".into(),
        ],
    ];
    for args in &runs {
        let run = |cache: &std::path::Path| {
            let out = Command::new(bin)
                .args(args)
                .arg("--cache-dir")
                .arg(cache)
                .output()
                .expect("spawn zetalab");
            assert!(
                out.status.success(),
                "command {:?} failed: {}",
                args,
                String::from_utf8_lossy(&out.stdout)
            );
            out.stdout
        };
        // warm cache in dir A, rerun from the same cache, then recompute
        // from scratch in dir B: all three byte-identical up to the
        // cache-dir line embedded in the config block
        let first = run(&cache_a);
        let second = run(&cache_a);
        assert_eq!(first, second, "cache-served rerun differs for {args:?}");
        let fresh = run(&cache_b);
        let strip = |bytes: &[u8]| -> Vec<String> {
            String::from_utf8_lossy(bytes)
                .lines()
                .filter(|l| !l.starts_with("# cache_dir"))
                .map(|l| l.to_string())
                .collect()
        };
        assert_eq!(
            strip(&first),
            strip(&fresh),
            "fresh recomputation differs for {args:?}"
        );
        println!("ACCEPTANCE 10 determinism: {:?} byte-identical", args[0]);
    }
    std::fs::remove_dir_all(&dir).ok();
}
