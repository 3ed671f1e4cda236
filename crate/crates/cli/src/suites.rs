//! The verification suites behind `ulamlab verify`.

use std::str::FromStr;

use ulamlab_core::elliptic3::{
    elliptic_k, factorize, kappa_tau, m3_by_contour, m3_by_interval, m3_elliptic, m3_truncated_series, omega_roots,
};
use ulamlab_core::genfun::{
    binomial_by_double_contour, gf_a_coefficients, gf_a_tilde, m2_closed_form, mgen_step, pair_gf_base,
    series_sqrt_reciprocal, singularity_radius_check,
};
use ulamlab_core::numkernel::{binomial, LogReal};
use ulamlab_core::perm_oracle::{
    brute_moments, brute_second_moment_table, check_gamma2_identity, walk_count_a, walk_count_unpinned,
};
use ulamlab_core::quad::integrate;
use ulamlab_core::ratefun::{
    comb_a_convergence, diagonal_saddle, first_moment_convergence, first_moment_rate, ld_mixed_printed,
    ld_second_moment_printed, ld_second_moment_printed_alt, multinomial_stirling_ratio, rate_a, saddle_xyz,
    solve_p_mixed, varadhan_second_moment, RateForm, RateQuery,
};
use ulamlab_core::solvable::{
    dilog, distinct_parts_gf, expect_n, mc_n, partition_counts, poisson_ld_check, replica_to_zero, solve_z,
};
use ulamlab_core::ulam_exact::{all_or_nothing_bound, comb_a, second_moment, second_moment_log, Mode};
use ulamlab_core::{Error, ExactRational, Limits};

use num_complex::Complex64;

use crate::report::VerificationRecord as Rec;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Exact,
    Gf,
    Elliptic,
    Rates,
    Solvable,
}

impl FromStr for Suite {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "all" => Suite::All,
            "exact" => Suite::Exact,
            "gf" => Suite::Gf,
            "elliptic" => Suite::Elliptic,
            "rates" => Suite::Rates,
            "solvable" => Suite::Solvable,
            other => return Err(CliError::Usage(format!("unknown suite {other:?}"))),
        })
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Exact => "exact",
            Suite::Gf => "gf",
            Suite::Elliptic => "elliptic",
            Suite::Rates => "rates",
            Suite::Solvable => "solvable",
        }
    }
}

pub fn run_suite(suite: Suite, limits: &Limits) -> Vec<Rec> {
    match suite {
        Suite::All => [Suite::Exact, Suite::Gf, Suite::Elliptic, Suite::Rates, Suite::Solvable]
            .into_iter()
            .flat_map(|s| run_suite(s, limits))
            .collect(),
        Suite::Exact => exact_suite(limits),
        Suite::Gf => gf_suite(limits),
        Suite::Elliptic => elliptic_suite(limits),
        Suite::Rates => rates_suite(),
        Suite::Solvable => solvable_suite(limits),
    }
}

/// Runs `f`, turning an error into a failed record.
fn guarded(id: &str, f: impl FnOnce() -> Result<Vec<Rec>, Error>) -> Vec<Rec> {
    f().unwrap_or_else(|e| vec![Rec::errored(id, e)])
}

fn exact_str(a: &ExactRational) -> String {
    a.to_string()
}

fn exact_suite(limits: &Limits) -> Vec<Rec> {
    let mut out = Vec::new();
    out.extend(guarded("second_moment_n3_k2", || {
        let m = second_moment(3, 2, 2, limits)?;
        Ok(vec![Rec::exact("second_moment_n3_k2", exact_str(&m.value), "19/6")])
    }));
    for n in 1..=7usize {
        let id = format!("second_moment_vs_enumeration_n{n}");
        out.extend(guarded(&id, || {
            let table = brute_second_moment_table(n, limits)?;
            let mut ok = true;
            for k in 1..=n {
                for l in 1..=n {
                    let formula = second_moment(n as u64, k as u64, l as u64, limits)?.value;
                    ok &= formula == table[k - 1][l - 1];
                }
            }
            Ok(vec![Rec::property(&id, ok, n * n, "overlap-sum formula equals enumeration over S_n")])
        }));
    }
    out.extend(guarded("walk_count_vs_comb_a", || {
        let mut ok = true;
        let mut cases = 0;
        for k in 0..=8usize {
            for l in 0..=8 - k {
                for j in 0..=k.min(l) + 2 {
                    let a = comb_a(k, l, j, Mode::Exact, limits)?;
                    ok &= &walk_count_a(k, l, j, limits)? == a.exact().expect("exact mode");
                    cases += 1;
                }
            }
        }
        Ok(vec![Rec::property(
            "walk_count_vs_comb_a",
            ok,
            cases,
            "k+l <= 8, j <= min(k,l)+2, last visit time pinned to k+l",
        )])
    }));
    out.extend(guarded("walk_count_1_0_0", || {
        let pinned = walk_count_a(1, 0, 0, limits)?;
        let unpinned = walk_count_unpinned(1, 0, 0, limits)?;
        Ok(vec![Rec::exact("walk_count_1_0_0", pinned, 1).note(format!(
            "without pinning the last visit time the walk sum gives {unpinned}"
        ))])
    }));
    let mut gamma_ok = true;
    let mut gamma_cases = 0;
    for l in 0..=30 {
        for m in 0..=30 - l {
            gamma_ok &= check_gamma2_identity(l, m);
            gamma_cases += 1;
        }
    }
    out.push(Rec::property(
        "four_part_multinomial_identity",
        gamma_ok,
        gamma_cases,
        "sum_n multinomial(l+m; n,n,l-n,m-n) = C(l+m,l)^2 for l+m <= 30",
    ));
    out.extend(guarded("third_moment_bound_n6_k2", || {
        let bound = all_or_nothing_bound(6, 2, 3, limits)?;
        let brute = brute_moments(6, &[2], 3, limits)?;
        let mut r = Rec::property("third_moment_bound_n6_k2", bound <= brute, 1, "all-or-nothing sum <= E[Z^3]");
        r.lhs = exact_str(&bound).into();
        r.rhs = exact_str(&brute).into();
        Ok(vec![r])
    }));
    out.extend(guarded("bound_r2_is_second_moment", || {
        let mut ok = true;
        for n in 1..=8u64 {
            for k in 1..=n {
                ok &= all_or_nothing_bound(n, k, 2, limits)? == second_moment(n, k, k, limits)?.value;
            }
        }
        Ok(vec![Rec::property("bound_r2_is_second_moment", ok, 36, "r = 2 bound is an identity")])
    }));
    out.extend(guarded("second_moment_log_vs_exact", || {
        let exact = second_moment(60, 12, 9, limits)?.value;
        let log = second_moment_log(60, 12, 9)?.value;
        let e = LogReal::from_rational(&exact);
        Ok(vec![Rec::numeric("second_moment_log_vs_exact", log.logmag(), e.logmag(), 1e-11)
            .normalized("natural log of E[Z_{60,12} Z_{60,9}]")])
    }));
    out
}

fn gf_suite(limits: &Limits) -> Vec<Rec> {
    let mut out = Vec::new();
    out.extend(guarded("gf_coefficients_vs_comb_a", || {
        let d = 12u32;
        let g = gf_a_coefficients(d as usize, limits)?;
        let mut ok = true;
        let mut cases = 0;
        for k in 0..=d {
            for l in 0..=d - k {
                for j in 0..=d - k - l {
                    let a = comb_a(k as usize, l as usize, j as usize, Mode::Exact, limits)?;
                    ok &= g.coeff(&[k, l, j]) == ExactRational::from_integer(a.exact().expect("exact").clone());
                    cases += 1;
                }
            }
        }
        Ok(vec![Rec::property("gf_coefficients_vs_comb_a", ok, cases, "k+l+j <= 12")])
    }));
    out.extend(guarded("pair_gf_squared_binomials", || {
        let s = series_sqrt_reciprocal(&pair_gf_base(14), 14)?;
        let mut ok = true;
        let mut cases = 0;
        for a in 0..=14u32 {
            for b in 0..=14 - a {
                let c = binomial(u64::from(a + b), i64::from(a));
                ok &= s.coeff(&[a, b]) == ExactRational::from_integer(&c * &c);
                cases += 1;
            }
        }
        Ok(vec![Rec::property("pair_gf_squared_binomials", ok, cases, "a+b <= 14")])
    }));
    out.extend(guarded("gf_tilde_r2_is_gf_a", || {
        let ok = gf_a_tilde(2, 8, limits)? == gf_a_coefficients(8, limits)?;
        Ok(vec![Rec::property("gf_tilde_r2_is_gf_a", ok, 1, "total degree <= 8")])
    }));
    out.extend(guarded("singularity_radius", || {
        let c = singularity_radius_check()?;
        Ok(vec![
            Rec::numeric("singularity_radius", c.radius, c.closed_form, 1e-14).note("root of sqrt(1-4r) = r vs sqrt(5)-2"),
            Rec::property(
                "singularity_radius_sign_change",
                c.denominator_below > 0.0 && c.denominator_above < 0.0,
                2,
                "denominator positive just inside, negative just outside the diagonal radius",
            ),
        ])
    }));
    out.extend(guarded("m2_contour_example", || {
        let one = Complex64::new(1.0, 0.0);
        let m1 = |z: &[Complex64]| one / (one - z[0]);
        let v = mgen_step(m1, &[0.01], 0.1, 0.1, limits)?;
        let mut worst: f64 = 0.0;
        for a in 1..=5 {
            for b in 1..=5 {
                let (z1, z2) = (0.01 * f64::from(a), 0.01 * f64::from(b));
                let x = z2.sqrt();
                let w = mgen_step(m1, &[z1], x, x, limits)?;
                worst = worst.max((w.re - m2_closed_form(z1, z2)).abs());
            }
        }
        Ok(vec![
            Rec::numeric("m2_contour_example", v.re, 1.0 / 0.96f64.sqrt(), 1e-12),
            Rec::numeric("m2_contour_grid", worst, 0.0, 1e-10).note("max error over a 5x5 grid in [0.01,0.05]^2"),
        ])
    }));
    for (k, l) in [(2, 2), (5, 7), (12, 12)] {
        let id = format!("double_contour_binomial_{k}_{l}");
        out.extend(guarded(&id, || {
            let exact = LogReal::from_bigint(&binomial((k + l) as u64, k as i64)).to_f64();
            Ok(vec![Rec::relative(&id, binomial_by_double_contour(k, l)?, exact, 1e-8)])
        }));
    }
    out
}

fn elliptic_suite(limits: &Limits) -> Vec<Rec> {
    guarded("elliptic", || {
        let mut out = Vec::new();
        let v = m3_elliptic(0.1, 0.1, 0.1)?;
        out.push(
            Rec::numeric("m3_vs_series", v, m3_truncated_series([0.01; 3], 40), 1e-8)
                .note("degree-40 truncation at z = (0.01, 0.01, 0.01)"),
        );
        let (x1, x2) = (0.1f64, 0.2f64);
        let (z1, z2) = (x1 * x1, x2 * x2);
        let closed = 1.0 / (1.0 - 2.0 * (z1 + z2) + (z1 - z2).powi(2)).sqrt();
        out.push(Rec::numeric("m3_x3_limit", m3_elliptic(x1, x2, 1e-6)?, closed, 1e-10));
        out.push(Rec::numeric("m3_x3_zero", m3_elliptic(x1, x2, 0.0)?, closed, 1e-14));
        let o = omega_roots(0.1, 0.1, 0.1)?;
        out.push(Rec::numeric("omega_plus_product", o.plus_plus * o.plus_minus, 1.0, 1e-12));
        out.push(Rec::numeric("omega_minus_product", o.minus_plus * o.minus_minus, 1.0, 1e-12));
        out.push(Rec::numeric("omega_plus_plus", o.plus_plus, 10.0, 1e-13));
        out.push(Rec::numeric("omega_plus_minus", o.plus_minus, 0.1, 1e-15));
        out.push(Rec::property(
            "omega_ordering",
            0.0 < o.plus_minus && o.plus_minus < o.minus_minus && o.minus_minus < 1.0 && 1.0 < o.minus_plus && o.minus_plus < o.plus_plus,
            1,
            "0 < Ω+- < Ω-- < 1 < Ω-+ < Ω++",
        ));
        for x in [(0.1, 0.1, 0.1), (0.15, 0.05, 0.1)] {
            let e = m3_elliptic(x.0, x.1, x.2)?;
            out.push(Rec::numeric(format!("m3_contour_{}_{}_{}", x.0, x.1, x.2), m3_by_contour(x.0, x.1, x.2, limits)?, e, 1e-8));
            out.push(Rec::numeric(format!("m3_interval_{}_{}_{}", x.0, x.1, x.2), m3_by_interval(x.0, x.1, x.2)?, e, 1e-8));
        }
        let k = 0.5;
        let oracle = integrate(|p: f64| 1.0 / (1.0 - k * k * p.sin().powi(2)).sqrt(), 0.0, std::f64::consts::FRAC_PI_2, 1e-14);
        out.push(Rec::numeric("elliptic_k_half", elliptic_k(k)?, oracle, 1e-10));
        let product = kappa_tau(0.1, 0.2, 0.0, 1)?;
        out.push(
            Rec::numeric("kappa_x3_zero_cross_form", product, 1.0 / m2_closed_form(0.01, 0.04), 1e-14)
                .note("on x3 = 0 the four-factor product is sqrt(1 - 2(z1+z2) + (z1-z2)^2)"),
        );
        out.push(Rec::numeric("modulus_x3_zero", factorize(0.2, 0.3, 0.0)?.modulus, 0.0, 0.0));
        Ok(out)
    })
}

const PER_ROOT_N: &str = "per sqrt(n)";

fn rates_suite() -> Vec<Rec> {
    guarded("rates", || {
        let mut out = Vec::new();
        let q = |k, l, g| RateQuery::new(k, l, g);
        let mut worst_forms: f64 = 0.0;
        let mut worst_variety: f64 = 0.0;
        for i in 0..10 {
            for j in 0..10 {
                for m in 0..10 {
                    let p = |t: i32| 0.2 + 2.8 * f64::from(t) / 9.0;
                    let qq = q(p(i), p(j), p(m))?;
                    worst_forms = worst_forms.max((rate_a(&qq, RateForm::Xyz)? - rate_a(&qq, RateForm::HForm)?).abs());
                    worst_variety = worst_variety.max(saddle_xyz(&qq).variety_residual().abs());
                }
            }
        }
        out.push(Rec::numeric("rate_xyz_vs_hform_grid", worst_forms, 0.0, 1e-10).note("max over a 10^3 grid in [0.2,3]^3"));
        out.push(Rec::numeric("saddle_variety_residual_grid", worst_variety, 0.0, 1e-12).note("Z^2 = 1 - 2(X+Y) + (X-Y)^2"));
        let mut worst_sym: f64 = 0.0;
        for k in [0.3, 1.0, 2.5] {
            for g in [0.1, 1.0, 4.0] {
                let qq = q(k, k, g)?;
                let s = rate_a(&qq, RateForm::Symmetric)?;
                worst_sym = worst_sym
                    .max((s - rate_a(&qq, RateForm::Xyz)?).abs())
                    .max((s - rate_a(&qq, RateForm::HForm)?).abs());
            }
        }
        out.push(Rec::numeric("rate_symmetric_form", worst_sym, 0.0, 1e-12));
        out.push(
            Rec::numeric("rate_value_1_1_1", rate_a(&q(1.0, 1.0, 1.0)?, RateForm::Xyz)?, 2.5 * 5f64.ln(), 1e-12)
                .normalized("per N for A(N,N,N)"),
        );

        for k in [0.5, 1.0, 2.0] {
            let lemma = ld_second_moment_printed(k)?;
            let (oracle, g_star) = (lemma.oracle_value.expect("set"), lemma.optimizer_gamma.expect("set"));
            out.push(
                Rec::audit(format!("lemma_value_vs_optimization_k{k}"), lemma.printed_value, oracle, 1e-8)
                    .normalized(PER_ROOT_N)
                    .note(format!("P = {:.12}, implied overlap 4Pκ = {:.9}, optimal overlap {g_star:.9}", lemma.p, 4.0 * lemma.p * k)),
            );
            out.push(
                Rec::audit(format!("lemma_overlap_vs_optimization_k{k}"), 4.0 * lemma.p * k, g_star, 1e-8)
                    .normalized("overlap j / sqrt(n)"),
            );
            let mixed = ld_mixed_printed(k, k)?;
            out.push(
                Rec::audit(format!("mixed_value_vs_optimization_{k}_{k}"), mixed.printed_value, oracle, 1e-8)
                    .normalized(PER_ROOT_N)
                    .note(format!("P = {:.12}", mixed.p)),
            );
            let p = solve_p_mixed(k, k)?;
            let g = 4.0 * p * k;
            let lhs = (2.0 * k - g).powi(4) * (k - g).powi(4);
            let rhs = g * (4.0 * k - 3.0 * g).powi(3);
            out.push(
                Rec::relative(format!("mixed_implicit_equation_is_first_order_condition_k{k}"), lhs, rhs, 1e-8)
                    .note("(2κ-g)^4 (κ-g)^4 = g (4κ-3g)^3 at g = 4Pκ"),
            );
            out.push(Rec::numeric(format!("mixed_overlap_vs_optimization_k{k}"), g, g_star, 1e-8));
        }
        for (k, l) in [(1.0, 2.0), (1.0, 4.0)] {
            let mixed = ld_mixed_printed(k, l)?;
            out.push(
                Rec::audit(
                    format!("mixed_value_vs_optimization_{k}_{l}"),
                    mixed.printed_value,
                    mixed.oracle_value.expect("set"),
                    1e-8,
                )
                .normalized(PER_ROOT_N)
                .note(format!("P = {:.12}, optimal overlap {:.9}", mixed.p, mixed.optimizer_gamma.expect("set"))),
            );
        }
        let k = 8.0 / 3.0;
        let a = ld_second_moment_printed(k)?.printed_value;
        out.push(Rec::numeric("lemma_two_forms_agree", a, ld_second_moment_printed_alt(k)?, 1e-12).normalized(PER_ROOT_N));
        out.push(Rec::numeric("lemma_value_at_p_one_eighth", a, 2.0 * k * (1.5 - std::f64::consts::LN_2), 1e-12));

        let (v, _) = varadhan_second_moment(1.0, 1.0)?;
        out.push(
            Rec::property("optimization_exceeds_independent_sector", v > 2.0 * first_moment_rate(1.0), 1, format!("value {v:.12} vs 4"))
                .normalized(PER_ROOT_N),
        );
        let first = first_moment_convergence(1.0, &[10_000]);
        out.push(Rec::numeric("first_moment_n10000", first[0].finite_value, first[0].limit, 0.1).normalized(PER_ROOT_N));
        let conv = comb_a_convergence(&q(1.0, 1.0, 1.0)?, &[8, 16, 32])?;
        out.push(
            Rec::property(
                "comb_a_rate_convergence",
                conv.windows(2).all(|w| w[1].error < w[0].error),
                conv.len(),
                format!(
                    "errors {}",
                    conv.iter().map(|c| format!("N={}: {:.4}", c.size, c.error)).collect::<Vec<_>>().join(", ")
                ),
            )
            .normalized("per N"),
        );

        for (k, g) in [(1.0, 1.0), (0.5, 2.0)] {
            let d = diagonal_saddle(k, g, 10_000)?;
            out.push(Rec::numeric(format!("saddle_exponent_identity_{k}_{g}"), d.exponent, rate_a(&q(k, k, g)?, RateForm::Xyz)?, 1e-12));
            out.push(Rec::relative(format!("saddle_scaled_discriminant_{k}_{g}"), d.scaled_discriminant, 2.0 / (4.0 * k + g), 0.02));
            out.push(Rec::relative(format!("saddle_scaled_gap_{k}_{g}"), d.scaled_gap, 1.0, 0.02));
        }
        out.push(Rec::relative("stirling_ratio_100_100", multinomial_stirling_ratio(&[100, 100])?, 1.0, 0.01));
        out.push(Rec::relative("stirling_ratio_50_50_50_50", multinomial_stirling_ratio(&[50, 50, 50, 50])?, 1.0, 0.01));
        Ok(out)
    })
}

fn solvable_suite(limits: &Limits) -> Vec<Rec> {
    guarded("solvable", || {
        let mut out = Vec::new();
        for (n, k) in [(5usize, 2usize), (10, 3), (20, 4)] {
            let t = 2.0;
            let est = mc_n(n, k, t, 100_000, 42, limits)?;
            let exact = expect_n(n as u64, k as u64, t)?;
            out.push(
                Rec::numeric(format!("mc_vs_expectation_n{n}_k{k}"), est.mean, exact, 3.0 * est.stderr)
                    .note(format!("t = {t}, 100000 samples, seed 42, tolerance is 3 standard errors")),
            );
        }
        let mut worst: f64 = 0.0;
        for k in [0.2, 0.7, 1.0, 1.9, 3.5] {
            for t in [0.3, 1.0, 2.2, 6.0] {
                let s = solve_z(1, k, t)?;
                worst = worst.max((s.ld_value - k * (2.0 - 2.0 * f64::ln(k) + f64::ln(t))).abs());
            }
        }
        out.push(Rec::numeric("replica_single_copy_grid", worst, 0.0, 1e-10).note("ansatz at m = 1 vs κ(2 - 2 ln κ + ln t)").normalized(PER_ROOT_N));
        let mut worst_constraint: f64 = 0.0;
        for m in 2..=5 {
            let s = solve_z(m, 1.0, 1.0)?;
            let (a, b) = s.constraint_residuals();
            worst_constraint = worst_constraint.max(a.abs()).max(b.abs()).max((s.ld_value - s.constrained_sum_value()).abs());
        }
        out.push(Rec::numeric("replica_constraints", worst_constraint, 0.0, 1e-10).note("m = 2..5, κ = t = 1"));
        let two = solve_z(2, 1.0, 1.0)?;
        out.push(
            Rec::property("replica_second_moment_dominates", two.ld_value >= 2.0 * solve_z(1, 1.0, 1.0)?.ld_value, 1, "m = 2 value >= twice the m = 1 value")
                .note("ansatz value"),
        );
        let tables = partition_counts(200, 15)?;
        out.push(Rec::property("partition_shift_identity", tables.shift_identity_holds(), 201 * 16, "ρ(n,k) = p(n - C(k,2), k) for n <= 200, k <= 15"));
        out.push(Rec::property("partition_generating_function", distinct_parts_gf(200, 15) == tables.rho, 201 * 16, "coefficients of prod (1 + q^j z)"));
        out.push(Rec::exact("partition_9_3", &tables.rho[9][3], 3));
        out.push(Rec::numeric("dilog_one", dilog(1.0)?, std::f64::consts::PI.powi(2) / 6.0, 1e-15));
        out.push(Rec::numeric("dilog_minus_one", dilog(-1.0)?, -std::f64::consts::PI.powi(2) / 12.0, 1e-15));
        let q3 = integrate(|y: f64| y.ln_1p() / y, 1e-300, 3.0, 1e-14);
        out.push(Rec::numeric("dilog_minus_three", -dilog(-3.0)?, q3, 1e-11));
        let (z, v) = replica_to_zero(1.0, 1.0)?;
        out.push(
            Rec::property("replica_to_zero_1_1", z.is_finite() && v > 0.0, 1, format!("z = {z:.12}, value = {v:.12}"))
                .note("ansatz value")
                .normalized(PER_ROOT_N),
        );
        out.push(Rec::property(
            "replica_to_zero_boundary",
            matches!(replica_to_zero(1.5, 1.0), Err(Error::Infeasible { .. })),
            1,
            "κ/sqrt(t) >= sqrt(2) is infeasible",
        ));
        for kappa in [1.0, 2.0] {
            let (t, v) = poisson_ld_check(kappa)?;
            out.push(Rec::numeric(format!("poisson_maximum_value_k{kappa}"), v, 0.0, 1e-10));
            out.push(Rec::numeric(format!("poisson_maximizer_k{kappa}"), t, kappa, 1e-5 * kappa));
        }
        Ok(out)
    })
}
