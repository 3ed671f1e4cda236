//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::time::{Duration, Instant};

use ulamlab::report::Status;
use ulamlab::suites::{run_suite, Suite};
use ulamlab_core::elliptic3::{m3_elliptic, m3_truncated_series, omega_roots};
use ulamlab_core::genfun::{binomial_by_double_contour, gf_a_coefficients, pair_gf_base, series_sqrt_reciprocal};
use ulamlab_core::genfun::m2_closed_form;
use ulamlab_core::numkernel::{binomial, LogReal};
use ulamlab_core::perm_oracle::{brute_second_moment_table, walk_count_a, walk_count_unpinned};
use ulamlab_core::ratefun::{
    comb_a_convergence, diagonal_saddle, multinomial_stirling_ratio, rate_a, saddle_xyz, second_moment_convergence,
    varadhan_second_moment, RateForm, RateQuery,
};
use ulamlab_core::solvable::{distinct_parts_gf, expect_n, mc_n, partition_counts, solve_z};
use ulamlab_core::ulam_exact::{comb_a, second_moment, Mode};
use ulamlab_core::{ExactRational, Limits, Result};

type Criterion<'a> = (u32, Box<dyn Fn() -> Result<Outcome> + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn within(elapsed: Duration, budget_secs: u64) -> bool {
    elapsed < Duration::from_secs(budget_secs)
}

fn criterion_1(limits: &Limits) -> Result<Outcome> {
    let start = Instant::now();
    let mut mismatches = 0;
    for n in 1..=7usize {
        let table = brute_second_moment_table(n, limits)?;
        for k in 1..=n {
            for l in 1..=n {
                if second_moment(n as u64, k as u64, l as u64, limits)?.value != table[k - 1][l - 1] {
                    mismatches += 1;
                }
            }
        }
    }
    let v = second_moment(3, 2, 2, limits)?.value.to_string();
    let t = start.elapsed();
    outcome(
        mismatches == 0 && v == "19/6" && within(t, 60),
        format!("{mismatches} mismatches over n <= 7, E[Z_3,2^2] = {v}, {:.1}s", t.as_secs_f64()),
    )
}

fn criterion_2(limits: &Limits) -> Result<Outcome> {
    let start = Instant::now();
    let mut mismatches = 0;
    for k in 0..=8usize {
        for l in 0..=8 - k {
            for j in 0..=k.min(l) + 2 {
                let a = comb_a(k, l, j, Mode::Exact, limits)?;
                if a.exact() != Some(&walk_count_a(k, l, j, limits)?) {
                    mismatches += 1;
                }
            }
        }
    }
    let pinned = walk_count_a(1, 0, 0, limits)?;
    let unpinned = walk_count_unpinned(1, 0, 0, limits)?;
    let t = start.elapsed();
    outcome(
        mismatches == 0 && pinned == 1.into() && unpinned == 2.into() && within(t, 60),
        format!(
            "{mismatches} mismatches for k+l <= 8; A(1,0,0): pinned walks {pinned}, unpinned walks {unpinned}; {:.1}s",
            t.as_secs_f64()
        ),
    )
}

fn criterion_3(limits: &Limits) -> Result<Outcome> {
    let g = gf_a_coefficients(12, limits)?;
    let mut bad = 0;
    for k in 0..=12u32 {
        for l in 0..=12 - k {
            for j in 0..=12 - k - l {
                let a = comb_a(k as usize, l as usize, j as usize, Mode::Exact, limits)?;
                if g.coeff(&[k, l, j]) != ExactRational::from_integer(a.exact().expect("exact mode").clone()) {
                    bad += 1;
                }
            }
        }
    }
    let pair = series_sqrt_reciprocal(&pair_gf_base(14), 14)?;
    let mut bad_pair = 0;
    for a in 0..=14u32 {
        for b in 0..=14 - a {
            let c = binomial(u64::from(a + b), i64::from(a));
            if pair.coeff(&[a, b]) != ExactRational::from_integer(&c * &c) {
                bad_pair += 1;
            }
        }
    }
    outcome(
        bad == 0 && bad_pair == 0,
        format!("{bad} coefficient mismatches (k+l+j <= 12), {bad_pair} squared-binomial mismatches (a+b <= 14)"),
    )
}

fn criterion_4() -> Result<Outcome> {
    let p = |t: i32| 0.2 + 2.8 * f64::from(t) / 9.0;
    let (mut forms, mut variety, mut sym): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..10 {
        for j in 0..10 {
            for m in 0..10 {
                let q = RateQuery::new(p(i), p(j), p(m))?;
                let xyz = rate_a(&q, RateForm::Xyz)?;
                forms = forms.max((xyz - rate_a(&q, RateForm::HForm)?).abs());
                variety = variety.max(saddle_xyz(&q).variety_residual().abs());
                if i == j {
                    let s = rate_a(&q, RateForm::Symmetric)?;
                    sym = sym.max((s - xyz).abs()).max((s - rate_a(&q, RateForm::HForm)?).abs());
                }
            }
        }
    }
    outcome(
        forms < 1e-10 && sym < 1e-12 && variety < 1e-12,
        format!("max |xyz - hform| = {forms:.2e}, max symmetric-form gap = {sym:.2e}, max variety residual = {variety:.2e}"),
    )
}

fn criterion_5() -> Result<Outcome> {
    let start = Instant::now();
    let pts = comb_a_convergence(&RateQuery::new(1.0, 1.0, 1.0)?, &[8, 16, 32, 48])?;
    let t = start.elapsed();
    let decreasing = pts.windows(2).all(|w| w[1].error < w[0].error);
    let last = pts.last().expect("nonempty").error;
    let errs: Vec<String> = pts.iter().map(|p| format!("N={} err={:.4}", p.size, p.error)).collect();
    outcome(
        decreasing && last < 0.3 && within(t, 300),
        format!("{}; {:.1}s", errs.join(", "), t.as_secs_f64()),
    )
}

fn criterion_6() -> Result<Outcome> {
    let start = Instant::now();
    let pts = second_moment_convergence(1.0, 1.0, &[400, 900, 1600, 2500])?;
    let t = start.elapsed();
    let (_, g_star) = varadhan_second_moment(1.0, 1.0)?;
    let decreasing = pts.windows(2).all(|w| w[1].0.error < w[0].0.error);
    let last = pts.last().expect("nonempty");
    let overlap_rel = (last.1 - g_star).abs() / g_star;
    let errs: Vec<String> = pts.iter().map(|(p, _)| format!("n={} err={:.4}", p.size, p.error)).collect();
    outcome(
        decreasing && last.0.error < 0.3 && overlap_rel < 0.1 && within(t, 600),
        format!(
            "{}; dominant overlap/sqrt(n) {:.4} vs {g_star:.4} ({:.1}% off); {:.1}s",
            errs.join(", "),
            last.1,
            100.0 * overlap_rel,
            t.as_secs_f64()
        ),
    )
}

fn criterion_7(limits: &Limits) -> Result<Outcome> {
    let records = run_suite(Suite::Rates, limits);
    let has = |id: &str| records.iter().any(|r| r.check_id == id);
    let mut missing = Vec::new();
    for k in ["0.5", "1", "2"] {
        for id in [format!("lemma_value_vs_optimization_k{k}"), format!("mixed_value_vs_optimization_{k}_{k}")] {
            if !has(&id) {
                missing.push(id);
            }
        }
    }
    for id in ["mixed_value_vs_optimization_1_2", "mixed_value_vs_optimization_1_4"] {
        if !has(id) {
            missing.push(id.to_string());
        }
    }
    let foc: Vec<_> = records
        .iter()
        .filter(|r| r.check_id.starts_with("mixed_implicit_equation_is_first_order_condition"))
        .collect();
    let foc_ok = foc.len() == 3 && foc.iter().all(|r| r.status == Status::Pass && r.tolerance <= 1e-8);
    let discrepancies = records.iter().filter(|r| r.status == Status::Discrepancy).count();
    let mixed_11 = records.iter().find(|r| r.check_id == "mixed_value_vs_optimization_1_1");
    let mixed_flagged = mixed_11.is_some_and(|r| r.status == Status::Discrepancy);
    let fails = records.iter().filter(|r| r.status == Status::Fail).count();
    outcome(
        missing.is_empty() && foc_ok && mixed_flagged && fails == 0,
        format!(
            "{} records, {discrepancies} discrepancies, {fails} failures, implicit equation = first-order condition: {foc_ok}, missing {missing:?}",
            records.len()
        ),
    )
}

fn criterion_8() -> Result<Outcome> {
    let series_err = (m3_elliptic(0.1, 0.1, 0.1)? - m3_truncated_series([0.01; 3], 40)).abs();
    let (x1, x2) = (0.1f64, 0.2f64);
    let limit_err = (m3_elliptic(x1, x2, 1e-6)? - m2_closed_form(x1 * x1, x2 * x2)).abs();
    let o = omega_roots(0.1, 0.1, 0.1)?;
    let product_err = (o.plus_plus * o.plus_minus - 1.0).abs().max((o.minus_plus * o.minus_minus - 1.0).abs());
    let root_err = (o.plus_plus - 10.0).abs();
    outcome(
        series_err < 1e-8 && limit_err < 1e-10 && product_err < 1e-12 && root_err < 1e-13,
        format!(
            "series gap {series_err:.2e}, x3 -> 0 gap {limit_err:.2e}, omega product gap {product_err:.2e}, omega_++ - 10 = {root_err:.2e}"
        ),
    )
}

fn criterion_9(limits: &Limits) -> Result<Outcome> {
    let mut mc_ok = true;
    let mut mc_detail = Vec::new();
    for (n, k) in [(5usize, 2usize), (10, 3), (20, 4)] {
        let est = mc_n(n, k, 2.0, 100_000, 42, limits)?;
        let exact = expect_n(n as u64, k as u64, 2.0)?;
        let z = (est.mean - exact) / est.stderr;
        mc_ok &= z.abs() <= 3.0;
        mc_detail.push(format!("({n},{k}) z={z:+.2}"));
    }
    let mut replica: f64 = 0.0;
    for kappa in [0.2, 0.7, 1.0, 1.9, 3.5] {
        for t in [0.3, 1.0, 2.2, 6.0] {
            let s = solve_z(1, kappa, t)?;
            replica = replica.max((s.ld_value - kappa * (2.0 - 2.0 * kappa.ln() + t.ln())).abs());
        }
    }
    let tables = partition_counts(200, 15)?;
    let shift = tables.shift_identity_holds();
    let gf = distinct_parts_gf(200, 15) == tables.rho;
    outcome(
        mc_ok && replica < 1e-10 && shift && gf,
        format!(
            "Monte Carlo t=2: {}; m=1 ansatz gap {replica:.2e}; shift identity {shift}; generating function {gf}",
            mc_detail.join(" ")
        ),
    )
}

fn criterion_10() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for k in 0..=30usize {
        for l in 0..=30usize {
            let exact = LogReal::from_bigint(&binomial((k + l) as u64, k as i64)).to_f64();
            worst = worst.max((binomial_by_double_contour(k, l)? - exact).abs() / exact);
        }
    }
    let stirling = multinomial_stirling_ratio(&[100, 100])?;
    let d = diagonal_saddle(1.0, 1.0, 10_000)?;
    let identity = (d.exponent - rate_a(&RateQuery::new(1.0, 1.0, 1.0)?, RateForm::Xyz)?).abs();
    let disc = (d.scaled_discriminant / 0.4 - 1.0).abs();
    let gap = (d.scaled_gap - 1.0).abs();
    let t = start.elapsed();
    outcome(
        worst < 1e-8 && (stirling - 1.0).abs() < 0.01 && identity < 1e-12 && disc < 0.02 && gap < 0.02,
        format!(
            "contour max rel err {worst:.2e} (k,l <= 30); Stirling ratio {stirling:.5}; saddle exponent gap {identity:.2e}; \
             N·discriminant off {:.3}%, scaled gap off {:.3}% at N=10^4; {:.1}s",
            100.0 * disc,
            100.0 * gap,
            t.as_secs_f64()
        ),
    )
}

fn main() {
    let limits = Limits::default();
    let criteria: Vec<Criterion> = vec![
        (1, Box::new(|| criterion_1(&limits))),
        (2, Box::new(|| criterion_2(&limits))),
        (3, Box::new(|| criterion_3(&limits))),
        (4, Box::new(criterion_4)),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(|| criterion_7(&limits))),
        (8, Box::new(criterion_8)),
        (9, Box::new(|| criterion_9(&limits))),
        (10, Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (id, run) in &criteria {
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!("criterion {id}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
