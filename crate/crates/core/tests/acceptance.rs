//! Acceptance criteria, one test per criterion. Each test prints a single
//! `criterion N: PASS|FAIL ...` line (visible with `--nocapture`, and always
//! shown for failures).

use std::f64::consts::PI;

use debruijn_core::asymptotics::{convergence_report, growth_constant, law_ratio, total_counts};
use debruijn_core::egf::{
    closed_form, corollary1_total, edge_series, expand_bivariate, seidel_ratio_holds, theorem1_f, ClosedForm,
    EdgeRestrictions, TruncatedEGF,
};
use debruijn_core::oracle::{counts_by_last, total};
use debruijn_core::spectral::{discretize, eigenfunction, find_lambda, SpectralProblem};
use debruijn_core::{build_debruijn, build_named, build_signed, ExactTriangle, Side, SystemName, UpDownPeriod};
use num_bigint::BigInt;
use num_rational::BigRational;

fn report(n: u32, pass: bool, detail: impl AsRef<str>) {
    println!("criterion {n}: {} {}", if pass { "PASS" } else { "FAIL" }, detail.as_ref());
    assert!(pass, "criterion {n} failed: {}", detail.as_ref());
}

/// Every normalized period with length in `2..=max_len`.
fn normalized_periods(max_len: usize) -> Vec<UpDownPeriod> {
    (2..=max_len)
        .flat_map(|m| {
            (0..1u32 << (m - 1)).map(move |mask| {
                let mut bits: Vec<u8> = (0..m - 1).map(|i| ((mask >> i) & 1) as u8).collect();
                bits.push(0);
                UpDownPeriod::new(bits).unwrap()
            })
        })
        .collect()
}

fn p(s: &str) -> UpDownPeriod {
    s.parse().unwrap()
}

#[test]
fn criterion_01_oracle_equivalence() {
    let periods = normalized_periods(5);
    let mut mismatches = Vec::new();
    for q in &periods {
        let t = build_debruijn(q, 9).unwrap();
        for n in 1..=9 {
            let counts: Vec<BigInt> = counts_by_last(q, n).unwrap().into_iter().map(BigInt::from).collect();
            if t.row(n) != counts.as_slice() {
                mismatches.push(format!("{q} n={n}"));
            }
        }
    }
    report(
        1,
        mismatches.is_empty(),
        format!("{} periods x n<=9, mismatches {:?}", periods.len(), mismatches),
    );
}

#[test]
fn criterion_02_theorem1_end_to_end() {
    let periods = normalized_periods(4);
    let mut mismatches = Vec::new();
    for q in &periods {
        let f = theorem1_f(q, 9).unwrap();
        let expanded = expand_bivariate(&f, 9).unwrap();
        let signed: Vec<Vec<BigRational>> = build_signed(q, 9)
            .unwrap()
            .rows()
            .iter()
            .map(|r| r.iter().cloned().map(BigRational::from_integer).collect())
            .collect();
        if expanded != signed {
            mismatches.push(q.to_string());
        }
    }
    report(2, mismatches.is_empty(), format!("{} periods, mismatches {:?}", periods.len(), mismatches));
}

#[test]
fn criterion_03_corollary1_totals() {
    let periods = normalized_periods(4);
    let mut mismatches = Vec::new();
    let mut odd = 0;
    for q in &periods {
        if q.zero_count() % 2 == 1 {
            odd += 1;
        }
        let series = corollary1_total(q, 9).unwrap();
        for n in 1..=9 {
            let expected = BigRational::from_integer(BigInt::from(total(q, n).unwrap()));
            if series.coeff(n) != &expected {
                mismatches.push(format!("{q} n={n}"));
            }
        }
    }
    report(
        3,
        mismatches.is_empty(),
        format!("{} periods ({odd} with odd r), mismatches {:?}", periods.len(), mismatches),
    );
}

fn compare_edges(label: &str, t: &ExactTriangle, form: &EdgeRestrictions, order: usize, out: &mut Vec<String>) {
    for (side, expected) in [(Side::Left, &form.left), (Side::Right, &form.right)] {
        let got = edge_series(t, side, order).unwrap();
        if &got != expected {
            let k = (0..=order).find(|&k| got.coeff(k) != expected.coeff(k)).unwrap();
            out.push(format!(
                "{label} {side:?} edge differs at t^{k}/{k}!: triangle {} vs closed form {}",
                got.coeff(k),
                expected.coeff(k)
            ));
        }
    }
}

#[test]
fn criterion_04_closed_forms() {
    let order = 20;
    let mut failures = Vec::new();

    let sech = TruncatedEGF::one(order).try_div(&TruncatedEGF::cosh_scaled(1, order)).unwrap();
    if theorem1_f(&p("10"), order).unwrap() != sech {
        failures.push("f^(10)* != 1/cosh".to_string());
    }

    let mut checked = 0;
    for name in SystemName::ALL {
        let sys = build_named(name, order + 1).unwrap();
        let forms = closed_form(name, order).unwrap();
        let tris = sys.triangles();
        match forms {
            ClosedForm::Single(r) => compare_edges(name.as_str(), tris[0].1, &r, order, &mut failures),
            ClosedForm::Pair { left, right } => {
                compare_edges(&format!("{name} L"), tris[0].1, &left, order, &mut failures);
                compare_edges(&format!("{name} R"), tris[1].1, &right, order, &mut failures);
            }
        }
        checked += 2 * tris.len();
    }
    report(4, failures.is_empty(), format!("{checked} edge identities to order {order}; failures {failures:?}"));
}

#[test]
fn criterion_05_seidel_edge_law() {
    let order = 20;
    let mut triangles: Vec<(String, ExactTriangle)> = normalized_periods(4)
        .into_iter()
        .map(|q| (q.to_string(), build_signed(&q, order + 1).unwrap()))
        .collect();
    for name in SystemName::ALL {
        let sys = build_named(name, order + 1).unwrap();
        for (label, t) in sys.triangles() {
            triangles.push((format!("{name} {label}"), t.clone()));
        }
    }
    let failures: Vec<&str> = triangles
        .iter()
        .filter(|(_, t)| {
            let l = edge_series(t, Side::Left, order).unwrap();
            let r = edge_series(t, Side::Right, order).unwrap();
            !seidel_ratio_holds(&l, &r)
        })
        .map(|(s, _)| s.as_str())
        .collect();
    report(5, failures.is_empty(), format!("{} triangles, failures {failures:?}", triangles.len()));
}

/// First positive root of `cos t cosh t + 1` by bisection on `[1, 2.5]`.
fn beam_root() -> f64 {
    let f = |t: f64| t.cos() * t.cosh() + 1.0;
    let (mut a, mut b) = (1.0f64, 2.5f64);
    while b - a > 1e-15 {
        let c = (a + b) / 2.0;
        if f(a).signum() == f(c).signum() {
            a = c;
        } else {
            b = c;
        }
    }
    (a + b) / 2.0
}

#[test]
fn criterion_06_eigenvalues() {
    let l10 = find_lambda(&SpectralProblem::new(&p("10"), 0).unwrap(), 1e-13).unwrap();
    let l1100 = find_lambda(&SpectralProblem::new(&p("1100"), 0).unwrap(), 1e-13).unwrap();
    let beam = beam_root();
    let (e1, e2) = ((l10 - PI / 2.0).abs(), (l1100 - beam).abs());
    report(
        6,
        e1 <= 1e-9 && e2 <= 1e-8,
        format!("(10)* {l10:.15} err {e1:.1e}; (1100)* {l1100:.15} err {e2:.1e} (gamma = {:.6})", 2.0 * l1100),
    );
}

#[test]
fn criterion_07_eigenfunctions() {
    let q = p("10");
    let mut errs = Vec::new();
    for (l, exact) in [(0, (|t: f64| (PI * t / 2.0).sin()) as fn(f64) -> f64), (1, |t: f64| (PI * t / 2.0).cos())] {
        let prob = SpectralProblem::new(&q, l).unwrap();
        let lambda = find_lambda(&prob, 1e-13).unwrap();
        let sol = eigenfunction(&prob, lambda, 1001).unwrap();
        let err = sol
            .grid
            .iter()
            .zip(&sol.samples)
            .map(|(&t, u)| (u - exact(t)).abs())
            .fold(0.0, f64::max);
        errs.push(err);
    }
    report(7, errs.iter().all(|&e| e <= 1e-8), format!("sup errors sin {:.1e}, cos {:.1e}", errs[0], errs[1]));
}

#[test]
fn criterion_08_two_method_agreement() {
    let mut lines = Vec::new();
    let mut pass = true;
    for s in ["10", "110", "1100"] {
        let q = p(s);
        let lambda = find_lambda(&SpectralProblem::new(&q, 0).unwrap(), 1e-13).unwrap();
        for n in [100, 200, 400] {
            let est = discretize(&q, n).unwrap().lambda_estimate(1e-14).unwrap();
            let err = (est - lambda).abs();
            pass &= err <= 5.0 / n as f64;
            lines.push(format!("{s}@{n}: n*err={:.3}", err * n as f64));
        }
    }
    report(8, pass, format!("bound n*err <= 5; {}", lines.join(", ")));
}

#[test]
fn criterion_09_sine_law_constants() {
    let q = p("10");
    let c: Vec<f64> = (0..2).map(|l| growth_constant(&q, l, 100).unwrap()).collect();
    report(
        9,
        c.iter().all(|x| (1.9..=2.1).contains(x)),
        format!("c_2,0 = {:.6}, c_2,1 = {:.6}", c[0], c[1]),
    );
}

#[test]
fn criterion_10_andre_growth() {
    let totals = total_counts(&p("10"), 25).unwrap();
    let ratio = law_ratio(&totals[24], 25, 2.0, PI / 2.0);
    report(10, (0.99..=1.01).contains(&ratio), format!("ratio at n=25: {ratio:.12}"));
}

#[test]
fn criterion_11_carlitz_scoville_growth() {
    let q = p("1100");
    let lambda = find_lambda(&SpectralProblem::new(&q, 0).unwrap(), 1e-13).unwrap();
    let totals = total_counts(&q, 41).unwrap();
    let ratio = law_ratio(&totals[39], 40, 4.0, lambda);
    let next = law_ratio(&totals[40], 41, 4.0, lambda);
    report(
        11,
        (0.98..=1.02).contains(&ratio),
        format!("ratio at n=40: {ratio:.6} (n=41: {next:.6}), gamma = {:.6}", 2.0 * lambda),
    );
}

#[test]
fn criterion_12_convergence_monotonicity() {
    let mut lines = Vec::new();
    let mut pass = true;
    for s in ["10", "1100"] {
        let q = p(s);
        for l in 0..q.len() {
            let rows = [40 + l, 80 + l, 160 + l];
            let rep = convergence_report(&q, l, &rows).unwrap();
            pass &= rep.is_strictly_decreasing();
            let errs: Vec<String> = rep.rows.iter().map(|r| format!("{:.4}", r.error)).collect();
            lines.push(format!("{s} l={l}: [{}]", errs.join(", ")));
        }
    }
    report(12, pass, lines.join("; "));
}
