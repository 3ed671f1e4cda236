//! Large-deviation rates in the critical scaling `k ~ κ sqrt(n)`.
//!
//! All values are per `sqrt(n)` unless a function says otherwise. The
//! optimization engine [`varadhan_second_moment`] is the reference for the
//! second moment; the closed-form expressions in [`ld_second_moment_printed`]
//! and [`ld_mixed_printed`] are evaluated as stated and compared against it.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::limits::Limits;
use crate::numkernel::{multinomial, LogReal};
use crate::quad::{bisect, golden_max};
use crate::ulam_exact::{comb_a, ln_mean_z, second_moment_log, Mode};

/// Offset applied to open bracket endpoints before bisection.
const BRACKET_NUDGE: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateQuery {
    pub kappa: f64,
    pub lambda: f64,
    pub gamma: f64,
}

impl RateQuery {
    pub fn new(kappa: f64, lambda: f64, gamma: f64) -> Result<Self> {
        if !(kappa >= 0.0 && lambda >= 0.0 && gamma >= 0.0) || kappa + lambda + gamma <= 0.0 {
            return domain(format!("rate query needs nonnegative, not all zero arguments ({kappa},{lambda},{gamma})"));
        }
        Ok(RateQuery { kappa, lambda, gamma })
    }

    /// `γ / (2(κ+λ))`, the overlap ratio of the h-form.
    pub fn rho_mixed(&self) -> f64 {
        self.gamma / (2.0 * (self.kappa + self.lambda))
    }

    /// `γ / (4κ)`, the overlap ratio of the symmetric form.
    pub fn rho_symmetric(&self) -> f64 {
        self.gamma / (4.0 * self.kappa)
    }
}

/// Point on the variety `Z^2 = 1 - 2(X+Y) + (X-Y)^2` selected by `(κ, λ, γ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddleTriple {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SaddleTriple {
    /// `1 - 2(X+Y) + (X-Y)^2 - Z^2`.
    pub fn variety_residual(&self) -> f64 {
        1.0 - 2.0 * (self.x + self.y) + (self.x - self.y).powi(2) - self.z * self.z
    }
}

/// A closed-form value next to the optimization reference.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateResult {
    pub printed_value: f64,
    pub oracle_value: Option<f64>,
    pub optimizer_gamma: Option<f64>,
    /// `|printed - oracle|` when both are present.
    pub discrepancy: Option<f64>,
    /// Root of the closed form's implicit equation.
    pub p: f64,
}

impl RateResult {
    fn with_oracle(printed_value: f64, p: f64, oracle: (f64, f64)) -> Self {
        RateResult {
            printed_value,
            oracle_value: Some(oracle.0),
            optimizer_gamma: Some(oracle.1),
            discrepancy: Some((printed_value - oracle.0).abs()),
            p,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateForm {
    Xyz,
    HForm,
    Symmetric,
}

impl std::str::FromStr for RateForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xyz" => Ok(RateForm::Xyz),
            "hform" => Ok(RateForm::HForm),
            "symmetric" => Ok(RateForm::Symmetric),
            other => domain(format!("unknown rate form {other:?} (xyz|hform|symmetric)")),
        }
    }
}

/// `ψ(x) = -x ln x`, continuous at 0.
pub fn psi(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// Binary entropy `h(θ) = ψ(θ) + ψ(1-θ)`.
pub fn entropy(theta: f64) -> f64 {
    psi(theta) + psi(1.0 - theta)
}

/// `c · ln v`, zero when `c = 0` regardless of `v`.
fn weighted_ln(c: f64, v: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * v.ln()
    }
}

/// `lim n^{-1/2} ln E[Z_{n,k}] = 2κ(1 - ln κ)`.
pub fn first_moment_rate(kappa: f64) -> f64 {
    2.0 * kappa - 2.0 * weighted_ln(kappa, kappa)
}

pub fn saddle_xyz(q: &RateQuery) -> SaddleTriple {
    let RateQuery { kappa: k, lambda: l, gamma: g } = *q;
    let s = k + l + g;
    let t = 2.0 * k + 2.0 * l + g;
    SaddleTriple {
        x: k * (2.0 * k + g) / (s * t),
        y: l * (2.0 * l + g) / (s * t),
        z: (g * (2.0 * k + g) * (2.0 * l + g) / t).sqrt() / s,
    }
}

/// `lim (1/N) ln A(κN, λN, γN)`.
pub fn rate_a(q: &RateQuery, form: RateForm) -> Result<f64> {
    let RateQuery { kappa: k, lambda: l, gamma: g } = *q;
    match form {
        RateForm::Xyz => {
            let s = saddle_xyz(q);
            Ok(-weighted_ln(k, s.x) - weighted_ln(l, s.y) - weighted_ln(g, s.z))
        }
        RateForm::HForm => {
            let total = k + l;
            let rho = q.rho_mixed();
            let theta = k / total;
            let mixed = ((1.0 + rho) * theta + rho * (1.0 - theta)) / (1.0 + 2.0 * rho);
            let half = entropy(0.5);
            Ok(total
                * (2.0 * std::f64::consts::LN_2 - psi(1.0 + rho)
                    + psi(rho)
                    + entropy(theta)
                    - half
                    + (1.0 + 2.0 * rho) * (entropy(mixed) - half)))
        }
        RateForm::Symmetric => {
            if k != l {
                return domain(format!("symmetric form needs κ = λ (got {k}, {l})"));
            }
            let rho = q.rho_symmetric();
            Ok(2.0 * k * (2.0 * std::f64::consts::LN_2 - psi(1.0 + rho) + psi(rho)))
        }
    }
}

/// The exponent `V(g) = first_moment_rate(κ+λ-g) + rate_A(κ-g, λ-g, g)` of the
/// overlap-`g sqrt(n)` term of the second moment.
pub fn second_moment_exponent(kappa: f64, lambda: f64, g: f64) -> f64 {
    let q = RateQuery {
        kappa: kappa - g,
        lambda: lambda - g,
        gamma: g,
    };
    first_moment_rate(kappa + lambda - g) + rate_a(&q, RateForm::Xyz).expect("xyz form is total")
}

/// `dV/dg = 2 ln(κ+λ-g) + ln X + ln Y - ln Z` at `(κ-g, λ-g, g)`.
pub fn second_moment_exponent_slope(kappa: f64, lambda: f64, g: f64) -> f64 {
    let s = saddle_xyz(&RateQuery {
        kappa: kappa - g,
        lambda: lambda - g,
        gamma: g,
    });
    2.0 * (kappa + lambda - g).ln() + s.x.ln() + s.y.ln() - s.z.ln()
}

/// `lim n^{-1/2} ln E[Z_{n,k} Z_{n,l}]` as `max_g V(g)` over `g ∈ [0, min(κ,λ)]`.
/// Returns `(value, argmax g)`.
///
/// A 400-point scan locates the basin, golden section narrows it, and a
/// bisection on the analytic slope fixes the maximizer.
pub fn varadhan_second_moment(kappa: f64, lambda: f64) -> Result<(f64, f64)> {
    if !(kappa > 0.0 && lambda > 0.0) {
        return domain(format!("varadhan optimization needs κ, λ > 0 ({kappa},{lambda})"));
    }
    let hi = kappa.min(lambda);
    let v = |g: f64| second_moment_exponent(kappa, lambda, g);
    let steps = 400;
    let grid: Vec<f64> = (0..=steps).map(|i| hi * i as f64 / steps as f64).collect();
    let mut best = 0;
    for (i, &g) in grid.iter().enumerate() {
        if v(g) > v(grid[best]) {
            best = i;
        }
    }
    if best == 0 || best == steps {
        let g = grid[best];
        return Ok((v(g), g));
    }
    let (lo_b, hi_b) = (grid[best - 1], grid[best + 1]);
    let (g_golden, _) = golden_max(v, lo_b, hi_b, 1e-10);
    let slope = |g: f64| second_moment_exponent_slope(kappa, lambda, g);
    let g = match bisect(slope, lo_b, hi_b, 1e-16) {
        Ok(g) => g,
        Err(_) => g_golden,
    };
    Ok((v(g), g))
}

/// Root in `(0, 1/4)` of `8P / ((1-2P)(1-4P)) = κ`.
pub fn solve_p_symmetric(kappa: f64) -> Result<f64> {
    if kappa <= 0.0 {
        return domain(format!("κ must be positive (got {kappa})"));
    }
    let f = |p: f64| 8.0 * p / ((1.0 - 2.0 * p) * (1.0 - 4.0 * p)) - kappa;
    bisect(f, BRACKET_NUDGE, 0.25 - BRACKET_NUDGE, 1e-16)
}

/// Closed-form `lim n^{-1/2} ln E[Z_{n,k}^2]` from the `P(κ)` parametrization,
/// per `sqrt(n)`, compared with [`varadhan_second_moment`].
pub fn ld_second_moment_printed(kappa: f64) -> Result<RateResult> {
    let p = solve_p_symmetric(kappa)?;
    let per_2k = 2.0 - 4.0 * p - 6.0 * std::f64::consts::LN_2 + (1.0 - 4.0 * p).ln() - 2.0 * p.ln();
    Ok(RateResult::with_oracle(2.0 * kappa * per_2k, p, varadhan_second_moment(kappa, kappa)?))
}

/// The same quantity through the second printed form
/// `first_moment_rate(κ)/κ - 4P - 2 ln(1-2P) - ln(1-4P)` (per `2κ`).
pub fn ld_second_moment_printed_alt(kappa: f64) -> Result<f64> {
    let p = solve_p_symmetric(kappa)?;
    let per_2k = first_moment_rate(kappa) / kappa - 4.0 * p - 2.0 * (1.0 - 2.0 * p).ln() - (1.0 - 4.0 * p).ln();
    Ok(2.0 * kappa * per_2k)
}

/// Angles of the mixed closed form after ordering so that `λ <= κ`:
/// `(sin^2 θ, cos^2 θ, cos 2θ)`.
fn mixed_angles(kappa: f64, lambda: f64) -> (f64, f64, f64) {
    let (k, l) = if lambda <= kappa { (kappa, lambda) } else { (lambda, kappa) };
    let total = k + l;
    (l / total, k / total, (k - l) / total)
}

/// Residual of the mixed implicit equation
/// `((κ+λ)/4)^4 = P(1-3P)^3 / ((1-2P)^2 ((1-2P)^2 - cos^2 2θ) ((1-4P)^2 - cos^2 2θ)^2)`.
pub fn mixed_implicit_residual(kappa: f64, lambda: f64, p: f64) -> f64 {
    let (_, _, c2) = mixed_angles(kappa, lambda);
    let c2sq = c2 * c2;
    let rhs = p * (1.0 - 3.0 * p).powi(3)
        / ((1.0 - 2.0 * p).powi(2) * ((1.0 - 2.0 * p).powi(2) - c2sq) * ((1.0 - 4.0 * p).powi(2) - c2sq).powi(2));
    ((kappa + lambda) / 4.0).powi(4) - rhs
}

/// Root of the mixed implicit equation on `(0, sin^2 θ / 2)`.
pub fn solve_p_mixed(kappa: f64, lambda: f64) -> Result<f64> {
    if !(kappa > 0.0 && lambda > 0.0) {
        return domain(format!("κ, λ must be positive ({kappa},{lambda})"));
    }
    let (s2, _, _) = mixed_angles(kappa, lambda);
    let hi = s2 / 2.0;
    bisect(
        |p| mixed_implicit_residual(kappa, lambda, p),
        BRACKET_NUDGE,
        hi * (1.0 - 1e-15),
        1e-16,
    )
}

/// Closed-form `lim n^{-1/2} ln E[Z_{n,k} Z_{n,l}]`, per `sqrt(n)`, compared
/// with [`varadhan_second_moment`].
pub fn ld_mixed_printed(kappa: f64, lambda: f64) -> Result<RateResult> {
    let p = solve_p_mixed(kappa, lambda)?;
    let (s2, c2, cos2) = mixed_angles(kappa, lambda);
    let per_total = 2.0 * (1.0 - 2.0 * p) - 2.0 * std::f64::consts::LN_2 - 0.5 * p.ln() - 0.5 * (1.0 - 3.0 * p).ln()
        - 2.0 * p * (1.0 - 4.0 * p).ln()
        + 0.5 * cos2 * ((2.0 * s2 - 2.0 * p) / (2.0 * c2 - 2.0 * p)).ln()
        + s2 * (2.0 * c2 - 4.0 * p).ln()
        + c2 * (2.0 * s2 - 4.0 * p).ln();
    Ok(RateResult::with_oracle(
        (kappa + lambda) * per_total,
        p,
        varadhan_second_moment(kappa, lambda)?,
    ))
}

/// Saddle-point quantities for the symmetric diagonal `A(κN, κN, γN)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalSaddle {
    pub n: u64,
    pub t_n: f64,
    pub s_n: f64,
    pub t_star: f64,
    pub s_star: f64,
    /// `sqrt(1-4t) - s`.
    pub gap: f64,
    /// `sqrt(1-4t) + s`.
    pub sum: f64,
    /// `1 - 4t - s^2`.
    pub discriminant: f64,
    /// `N · discriminant`; tends to `2/(4κ+γ)`.
    pub scaled_discriminant: f64,
    /// `gap · sqrt(γ(4κ+γ)) · N`; tends to 1.
    pub scaled_gap: f64,
    /// `-2κ ln t* - γ ln s*`.
    pub exponent: f64,
}

/// Finite-`N` saddle `t_N = κ/(4κ+γ) - κ/((4κ+γ)^2 N)`,
/// `s_N = sqrt(γ/(4κ+γ)) - (2κ+γ)/(sqrt(γ) (4κ+γ)^{3/2} N)` and derived quantities.
pub fn diagonal_saddle(kappa: f64, gamma: f64, n: u64) -> Result<DiagonalSaddle> {
    if !(kappa > 0.0 && gamma > 0.0) || n == 0 {
        return domain(format!("diagonal saddle needs κ, γ > 0 and N >= 1 ({kappa},{gamma},{n})"));
    }
    let nf = n as f64;
    let w = 4.0 * kappa + gamma;
    let t_star = kappa / w;
    let s_star = (gamma / w).sqrt();
    let t_n = t_star - kappa / (w * w * nf);
    let s_n = s_star - (2.0 * kappa + gamma) / (gamma.sqrt() * w.powf(1.5) * nf);
    let root = (1.0 - 4.0 * t_n).sqrt();
    let gap = root - s_n;
    let discriminant = 1.0 - 4.0 * t_n - s_n * s_n;
    Ok(DiagonalSaddle {
        n,
        t_n,
        s_n,
        t_star,
        s_star,
        gap,
        sum: root + s_n,
        discriminant,
        scaled_discriminant: nf * discriminant,
        scaled_gap: gap * (gamma * w).sqrt() * nf,
        exponent: -2.0 * kappa * t_star.ln() - gamma * s_star.ln(),
    })
}

/// `multinomial(parts) / stirling(parts)` where
/// `stirling = (2π)^{-(r-1)/2} S^{S+1/2} / prod λ_i^{λ_i+1/2}`, `S = sum λ_i`.
pub fn multinomial_stirling_ratio(parts: &[u64]) -> Result<f64> {
    if parts.is_empty() || parts.contains(&0) {
        return domain("Stirling comparison needs nonempty positive parts");
    }
    let s: f64 = parts.iter().map(|&p| p as f64).sum();
    let ln_asym = -0.5 * (parts.len() as f64 - 1.0) * (2.0 * std::f64::consts::PI).ln() + (s + 0.5) * s.ln()
        - parts.iter().map(|&p| (p as f64 + 0.5) * (p as f64).ln()).sum::<f64>();
    let ln_exact = LogReal::from_bigint(&multinomial(parts)).logmag();
    Ok((ln_exact - ln_asym).exp())
}

/// One row of a finite-size convergence table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub size: u64,
    pub finite_value: f64,
    pub limit: f64,
    pub error: f64,
}

/// `(1/N) ln A(κN, λN, γN)` against `rate_A(κ, λ, γ)` for each `N` (log-space).
pub fn comb_a_convergence(q: &RateQuery, sizes: &[u64]) -> Result<Vec<ConvergencePoint>> {
    let limit = rate_a(q, RateForm::Xyz)?;
    sizes
        .iter()
        .map(|&n| {
            let scale = |c: f64| (c * n as f64).round() as usize;
            let a = comb_a(scale(q.kappa), scale(q.lambda), scale(q.gamma), Mode::LogSpace, &Limits::default())?;
            let finite_value = a.to_log().logmag() / n as f64;
            Ok(ConvergencePoint {
                size: n,
                finite_value,
                limit,
                error: (finite_value - limit).abs(),
            })
        })
        .collect()
}

/// `n^{-1/2} ln E[Z_{n,⌊κ√n⌋} Z_{n,⌊λ√n⌋}]` against the optimization value,
/// with the rescaled dominant overlap `refined argmax j / sqrt(n)`.
pub fn second_moment_convergence(kappa: f64, lambda: f64, ns: &[u64]) -> Result<Vec<(ConvergencePoint, f64)>> {
    let (limit, _) = varadhan_second_moment(kappa, lambda)?;
    ns.iter()
        .map(|&n| {
            let root = (n as f64).sqrt();
            let k = (kappa * root).floor() as u64;
            let l = (lambda * root).floor() as u64;
            let r = second_moment_log(n, k, l)?;
            let finite_value = r.value.logmag() / root;
            Ok((
                ConvergencePoint {
                    size: n,
                    finite_value,
                    limit,
                    error: (finite_value - limit).abs(),
                },
                r.refined_argmax_j() / root,
            ))
        })
        .collect()
}

/// `n^{-1/2} ln E[Z_{n,⌊κ√n⌋}]` against `first_moment_rate(κ)`.
pub fn first_moment_convergence(kappa: f64, ns: &[u64]) -> Vec<ConvergencePoint> {
    let limit = first_moment_rate(kappa);
    ns.iter()
        .map(|&n| {
            let root = (n as f64).sqrt();
            let finite_value = ln_mean_z(n, (kappa * root).floor() as u64) / root;
            ConvergencePoint {
                size: n,
                finite_value,
                limit,
                error: (finite_value - limit).abs(),
            }
        })
        .collect()
}
