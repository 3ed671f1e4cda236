//! Truncated multivariate power series with exact rational coefficients, the
//! generating functions of `A` and `Ã_r`, and trapezoidal contour quadrature
//! for diagonal (Hadamard-product) extraction.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::numkernel::{multinomial, rational_to_f64, ExactRational, LogReal};
use crate::quad::bisect;

/// Truncated power series in `nvars` variables; terms of total degree above
/// `max_total_degree` are never stored, and absent keys are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMV {
    nvars: usize,
    max_total_degree: usize,
    coeffs: BTreeMap<Vec<u32>, ExactRational>,
}

impl SeriesMV {
    pub fn zero(nvars: usize, max_total_degree: usize) -> Self {
        SeriesMV {
            nvars,
            max_total_degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, max_total_degree: usize, c: ExactRational) -> Self {
        let mut s = Self::zero(nvars, max_total_degree);
        s.set(&vec![0; nvars], c);
        s
    }

    pub fn one(nvars: usize, max_total_degree: usize) -> Self {
        Self::constant(nvars, max_total_degree, ExactRational::one())
    }

    /// The monomial `x_var`.
    pub fn var(nvars: usize, max_total_degree: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        let mut s = Self::zero(nvars, max_total_degree);
        s.set(&e, ExactRational::one());
        s
    }

    /// Builds a series from `(exponents, coefficient)` pairs, dropping terms past the truncation.
    pub fn from_terms(
        nvars: usize,
        max_total_degree: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, ExactRational)>,
    ) -> Self {
        let mut s = Self::zero(nvars, max_total_degree);
        for (e, c) in terms {
            let cur = s.coeff(&e);
            s.set(&e, cur + c);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_total_degree(&self) -> usize {
        self.max_total_degree
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> ExactRational {
        self.coeffs.get(exps).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn constant_term(&self) -> ExactRational {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn set(&mut self, exps: &[u32], c: ExactRational) {
        assert_eq!(exps.len(), self.nvars, "exponent arity");
        if degree(exps) > self.max_total_degree {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(exps);
        } else {
            self.coeffs.insert(exps.to_vec(), c);
        }
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &ExactRational)> {
        self.coeffs.iter()
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&[u32]) -> bool) {
        self.coeffs.retain(|e, _| keep(e));
    }

    pub fn add(&self, other: &SeriesMV) -> SeriesMV {
        self.check_compatible(other);
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            let cur = out.coeff(e);
            out.set(e, cur + c);
        }
        out
    }

    pub fn sub(&self, other: &SeriesMV) -> SeriesMV {
        self.add(&other.scale(&-ExactRational::one()))
    }

    pub fn scale(&self, c: &ExactRational) -> SeriesMV {
        let mut out = Self::zero(self.nvars, self.max_total_degree);
        for (e, v) in &self.coeffs {
            out.set(e, v * c);
        }
        out
    }

    /// Truncated product.
    pub fn mul(&self, other: &SeriesMV) -> SeriesMV {
        self.check_compatible(other);
        let d = self.max_total_degree.min(other.max_total_degree);
        let mut acc: BTreeMap<Vec<u32>, ExactRational> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            let da = degree(ea);
            for (eb, cb) in &other.coeffs {
                if da + degree(eb) > d {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(ExactRational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        SeriesMV {
            nvars: self.nvars,
            max_total_degree: d,
            coeffs: acc,
        }
    }

    pub fn pow(&self, n: u32) -> SeriesMV {
        let mut out = Self::one(self.nvars, self.max_total_degree);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `sum_n c_n u^n` for `u` without constant term; exact up to the truncation.
    fn compose_power_series(u: &SeriesMV, coeff: impl Fn(usize) -> ExactRational) -> SeriesMV {
        let mut out = Self::zero(u.nvars, u.max_total_degree);
        let mut power = Self::one(u.nvars, u.max_total_degree);
        for n in 0..=u.max_total_degree {
            if power.is_empty() {
                break;
            }
            out = out.add(&power.scale(&coeff(n)));
            power = power.mul(u);
        }
        out
    }

    /// `1 / self`, requiring a nonzero constant term.
    pub fn reciprocal(&self) -> Result<SeriesMV> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::Domain("series reciprocal needs a nonzero constant term".into()));
        }
        let inv_c = c.recip();
        let mut u = self.scale(&inv_c);
        u.set(&vec![0; self.nvars], ExactRational::zero());
        let neg_one = -ExactRational::one();
        let s = Self::compose_power_series(&u, |n| {
            if n % 2 == 0 {
                ExactRational::one()
            } else {
                neg_one.clone()
            }
        });
        Ok(s.scale(&inv_c))
    }

    /// Inserts this series into a larger variable set: variable `i` becomes
    /// variable `positions[i]` of an `nvars`-variable series.
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> SeriesMV {
        assert_eq!(positions.len(), self.nvars);
        let mut out = Self::zero(nvars, self.max_total_degree);
        for (e, c) in &self.coeffs {
            let mut ne = vec![0; nvars];
            for (i, &p) in positions.iter().enumerate() {
                ne[p] = e[i];
            }
            out.set(&ne, c.clone());
        }
        out
    }

    /// Evaluates the truncated polynomial at a real point.
    pub fn eval(&self, point: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .map(|(e, c)| {
                rational_to_f64(c)
                    * e.iter()
                        .zip(point)
                        .map(|(&k, &x)| x.powi(k as i32))
                        .product::<f64>()
            })
            .sum()
    }

    /// CSV rows `e_1,...,e_n,numerator,denominator` in exponent order.
    pub fn to_csv(&self, var_names: &[&str]) -> String {
        let mut out = String::new();
        for v in var_names {
            let _ = write!(out, "{v},");
        }
        out.push_str("numerator,denominator\n");
        for (e, c) in &self.coeffs {
            for k in e {
                let _ = write!(out, "{k},");
            }
            let _ = writeln!(out, "{},{}", c.numer(), c.denom());
        }
        out
    }

    fn check_compatible(&self, other: &SeriesMV) {
        assert_eq!(self.nvars, other.nvars, "series arity mismatch");
    }
}

fn degree(e: &[u32]) -> usize {
    e.iter().map(|&k| k as usize).sum()
}

/// `base^{-1/2}` to total degree `max_degree` via the binomial series
/// `(1+u)^{-1/2} = sum_n C(-1/2, n) u^n`.
pub fn series_sqrt_reciprocal(base: &SeriesMV, max_degree: usize) -> Result<SeriesMV> {
    if base.constant_term() != ExactRational::one() {
        return Err(Error::Domain(format!(
            "inverse square root needs constant term 1 (got {})",
            base.constant_term()
        )));
    }
    let mut u = base.clone();
    u.max_total_degree = max_degree.min(base.max_total_degree);
    u.retain(|e| degree(e) <= max_degree);
    u.set(&vec![0; base.nvars], ExactRational::zero());
    let half = ExactRational::new(1.into(), 2.into());
    // C(-1/2, n) = C(-1/2, n-1) * (-1/2 - (n-1)) / n
    let mut coeffs = vec![ExactRational::one()];
    for n in 1..=max_degree {
        let prev = coeffs[n - 1].clone();
        let factor = (-half.clone() - ExactRational::from_integer((n as i64 - 1).into()))
            / ExactRational::from_integer((n as i64).into());
        coeffs.push(prev * factor);
    }
    Ok(SeriesMV::compose_power_series(&u, |n| coeffs[n].clone()))
}

/// `1 - 2(x+y) + (x-y)^2` in two variables.
pub fn pair_gf_base(max_degree: usize) -> SeriesMV {
    let int = |v: i64| ExactRational::from_integer(v.into());
    SeriesMV::from_terms(
        2,
        max_degree,
        [
            (vec![0, 0], int(1)),
            (vec![1, 0], int(-2)),
            (vec![0, 1], int(-2)),
            (vec![2, 0], int(1)),
            (vec![1, 1], int(-2)),
            (vec![0, 2], int(1)),
        ],
    )
}

/// `sum A(k,l,j) x^k y^l z^j = 1 / (sqrt(1 - 2(x+y) + (x-y)^2) - z)` to total degree `max_degree`.
///
/// Computed as the series reciprocal of `base * base^{-1/2} - z`.
pub fn gf_a_coefficients(max_degree: usize, limits: &Limits) -> Result<SeriesMV> {
    if max_degree > limits.series_cap {
        return Err(Error::CapExceeded {
            what: "three-variable generating function degree",
            requested: max_degree as u64,
            cap: limits.series_cap as u64,
        });
    }
    let base = pair_gf_base(max_degree);
    let inv_sqrt = series_sqrt_reciprocal(&base, max_degree)?;
    let sqrt = base.mul(&inv_sqrt).embed(3, &[0, 1]);
    let denom = sqrt.sub(&SeriesMV::var(3, max_degree, 2));
    denom.reciprocal()
}

/// `M^(2)_r(x) = sum multinomial(α)^2 x^α` truncated at total degree `max_degree`.
pub fn squared_multinomial_series(r: usize, max_degree: usize) -> SeriesMV {
    let mut s = SeriesMV::zero(r, max_degree);
    let mut e = vec![0u32; r];
    fill_exponents(&mut e, 0, max_degree, &mut |e| {
        let parts: Vec<u64> = e.iter().map(|&k| u64::from(k)).collect();
        let m = multinomial(&parts);
        s.set(e, ExactRational::from_integer(&m * &m));
    });
    s
}

fn fill_exponents(e: &mut Vec<u32>, pos: usize, budget: usize, f: &mut impl FnMut(&[u32])) {
    if pos == e.len() {
        f(e);
        return;
    }
    for k in 0..=budget {
        e[pos] = k as u32;
        fill_exponents(e, pos + 1, budget - k, f);
    }
    e[pos] = 0;
}

/// `sum Ã_r(k, j) x^k w^j = 1 / (M^(2)_r(x)^{-1} - w)`; `w` is the last variable.
pub fn gf_a_tilde(r: usize, max_degree: usize, limits: &Limits) -> Result<SeriesMV> {
    if !(1..=3).contains(&r) {
        return Err(Error::Domain(format!("gf_a_tilde supports r in 1..=3 (got {r})")));
    }
    if max_degree > limits.series_cap {
        return Err(Error::CapExceeded {
            what: "Ã_r generating function degree",
            requested: max_degree as u64,
            cap: limits.series_cap as u64,
        });
    }
    let positions: Vec<usize> = (0..r).collect();
    let m_inv = squared_multinomial_series(r, max_degree).reciprocal()?.embed(r + 1, &positions);
    m_inv.sub(&SeriesMV::var(r + 1, max_degree, r)).reciprocal()
}

/// `(1/2π) ∫ f(ρ e^{iθ}) dθ` by the trapezoidal rule, doubling the node count
/// from `limits.contour_min_nodes` until two successive estimates agree to
/// `limits.contour_tol` (relative to `max(1, |estimate|)`).
///
/// Nodes are evaluated in parallel and summed in index order.
pub fn contour_mean<F>(f: F, radius: f64, limits: &Limits) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    contour_mean_tol(f, radius, limits, limits.contour_tol)
}

fn contour_mean_tol<F>(f: F, radius: f64, limits: &Limits, tol: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let eval = |n: usize| -> Complex64 {
        let vals: Vec<Complex64> = (0..n)
            .into_par_iter()
            .map(|m| f(Complex64::from_polar(radius, 2.0 * PI * m as f64 / n as f64)))
            .collect();
        vals.iter().sum::<Complex64>() / n as f64
    };
    let mut n = limits.contour_min_nodes.max(1).next_power_of_two();
    let mut prev = eval(n);
    while n < limits.contour_max_nodes {
        n *= 2;
        let cur = eval(n);
        if (cur - prev).norm() < tol * cur.norm().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    let last = eval(n);
    Err(Error::NotConverged {
        nodes: n,
        last: format!("{last}"),
        previous: format!("{prev}"),
    })
}

/// Diagonal (Hadamard product) of two univariate generating functions:
/// `(1/2πi) ∮ F(xω) G(y/ω) dω/ω = sum_n f_n g_n (xy)^n` on the unit circle.
pub fn diagonal_contour<F, G>(f_outer: F, f_inner: G, x: f64, y: f64, limits: &Limits) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    G: Fn(Complex64) -> Complex64 + Sync,
{
    contour_mean(|w| f_outer(w * x) * f_inner(y / w), 1.0, limits)
}

/// One step of the contour recurrence
/// `M^(2)_r(z_1..z_{r-1}, x_r y_r) = (1/2πi) ∮ M^(2)_{r-1}(z ω / ((1 - x_r ω)(ω - y_r))) dω / ((1 - x_r ω)(ω - y_r))`.
pub fn mgen_step<F>(inner: F, zs: &[f64], x_r: f64, y_r: f64, limits: &Limits) -> Result<Complex64>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    contour_mean(
        |w| {
            let d = (Complex64::new(1.0, 0.0) - w * x_r) * (w - y_r);
            let args: Vec<Complex64> = zs.iter().map(|&z| w * z / d).collect();
            // dω/(2πi) = ω dθ/(2π)
            w * inner(&args) / d
        },
        1.0,
        limits,
    )
}

/// `M^(2)_2(z1, z2) = 1 / sqrt((1 - z1 - z2)^2 - 4 z1 z2)` for real arguments in the domain.
pub fn m2_closed_form(z1: f64, z2: f64) -> f64 {
    1.0 / ((1.0 - z1 - z2).powi(2) - 4.0 * z1 * z2).sqrt()
}

/// `(1/4π^2) ∫∫ f(ρ_1 e^{iθ}, ρ_2 e^{iφ}) dθ dφ` on an `n × n` trapezoidal grid,
/// doubling `n` until successive estimates agree to `rel_tol` relative.
pub fn torus_mean<F>(f: F, radii: (f64, f64), max_nodes: usize, rel_tol: f64) -> Result<Complex64>
where
    F: Fn(Complex64, Complex64) -> Complex64 + Sync,
{
    let eval = |n: usize| -> Complex64 {
        let ws: Vec<Complex64> = (0..n)
            .map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64))
            .collect();
        let rows: Vec<Complex64> = (0..n)
            .into_par_iter()
            .map(|a| {
                let u = ws[a] * radii.0;
                ws.iter().map(|&w| f(u, w * radii.1)).sum::<Complex64>()
            })
            .collect();
        rows.iter().sum::<Complex64>() / (n * n) as f64
    };
    let mut n = 16usize;
    let mut prev = eval(n);
    let mut cur = prev;
    while n < max_nodes {
        n *= 2;
        (prev, cur) = (cur, eval(n));
        if (cur - prev).norm() <= rel_tol * cur.norm() {
            return Ok(cur);
        }
    }
    Err(Error::NotConverged {
        nodes: n,
        last: format!("{cur}"),
        previous: format!("{prev}"),
    })
}

/// `C(k+l, k)` recovered from the double Cauchy integral of `1/(1-x-y)` on
/// circles of radii `k/(k+l+1)` and `l/(k+l+1)`:
/// `C(k+l,k) = (k+l+1)^{k+l+1} / (k^k l^l) · (1/4π²) ∫∫ e^{-ikθ-ilφ} / (1 - k(e^{iθ}-1) - l(e^{iφ}-1))`.
pub fn binomial_by_double_contour(k: usize, l: usize) -> Result<f64> {
    let (kf, lf) = (k as f64, l as f64);
    let total = kf + lf + 1.0;
    let ln_prefactor = total * total.ln() - crate::numkernel::xlny(kf, kf) - crate::numkernel::xlny(lf, lf);
    let one = Complex64::new(1.0, 0.0);
    let mean = torus_mean(
        |u, v| {
            // u = e^{iθ}, v = e^{iφ} on the unit circles
            let phase = u.powi(-(k as i32)) * v.powi(-(l as i32));
            phase / (one - (u - one) * kf - (v - one) * lf)
        },
        (1.0, 1.0),
        1 << 12,
        1e-12,
    )?;
    Ok(LogReal::from_ln(ln_prefactor).to_f64() * mean.re)
}

/// The dominant positive singularity of `gf_a` on the diagonal `x = y = z = r`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusCheck {
    /// Root of `sqrt(1 - 4r) = r` found by bisection.
    pub radius: f64,
    /// `sqrt(5) - 2`.
    pub closed_form: f64,
    /// Denominator `sqrt(1-2(x+y)+(x-y)^2) - z` at `(r, r, r - 1e-6)`.
    pub denominator_below: f64,
    /// Same at `(r, r, r + 1e-3)`.
    pub denominator_above: f64,
}

/// Denominator of the three-variable generating function at a real point.
pub fn gf_a_denominator(x: f64, y: f64, z: f64) -> f64 {
    (1.0 - 2.0 * (x + y) + (x - y).powi(2)).sqrt() - z
}

pub fn singularity_radius_check() -> Result<RadiusCheck> {
    let radius = bisect(|r| (1.0 - 4.0 * r).sqrt() - r, 0.0, 0.25, 1e-17)?;
    Ok(RadiusCheck {
        radius,
        closed_form: 5f64.sqrt() - 2.0,
        denominator_below: gf_a_denominator(radius, radius, radius - 1e-6),
        denominator_above: gf_a_denominator(radius, radius, radius + 1e-3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::binomial;
    use crate::ulam_exact::{comb_a, Mode};

    fn int(v: i64) -> ExactRational {
        ExactRational::from_integer(v.into())
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn central_binomials_from_one_minus_4x() {
        let base = SeriesMV::from_terms(1, 4, [(vec![0], int(1)), (vec![1], int(-4))]);
        let s = series_sqrt_reciprocal(&base, 4).unwrap();
        let got: Vec<_> = (0..=4).map(|a| s.coeff(&[a])).collect();
        assert_eq!(got, [1, 2, 6, 20, 70].map(int).to_vec());
    }

    #[test]
    fn sqrt_reciprocal_of_one_and_bad_constant() {
        let one = SeriesMV::one(2, 6);
        assert_eq!(series_sqrt_reciprocal(&one, 6).unwrap(), one);
        let two = SeriesMV::constant(2, 6, int(2));
        assert!(series_sqrt_reciprocal(&two, 6).is_err());
        assert!(series_sqrt_reciprocal(&SeriesMV::zero(2, 6), 6).is_err());
    }

    #[test]
    fn pair_gf_is_squared_binomials() {
        let s = series_sqrt_reciprocal(&pair_gf_base(14), 14).unwrap();
        assert_eq!(s.coeff(&[1, 1]), int(4));
        for a in 0..=14u32 {
            for b in 0..=14 - a {
                let c = binomial(u64::from(a + b), i64::from(a));
                assert_eq!(s.coeff(&[a, b]), ExactRational::from_integer(&c * &c));
            }
        }
        // squaring and multiplying back gives 1 within the truncation
        assert_eq!(s.mul(&s).mul(&pair_gf_base(14)), SeriesMV::one(2, 14));
    }

    #[test]
    fn gf_a_examples_and_geometric_structure() {
        let g = gf_a_coefficients(10, &lim()).unwrap();
        assert_eq!(g.coeff(&[1, 1, 1]), int(10));
        for j in 0..=10 {
            assert_eq!(g.coeff(&[0, 0, j]), int(1));
        }
        // sum_j S^{j+1} z^j with S the pair series
        let s = series_sqrt_reciprocal(&pair_gf_base(10), 10).unwrap().embed(3, &[0, 1]);
        let mut geo = SeriesMV::zero(3, 10);
        let mut zj = SeriesMV::one(3, 10);
        let mut sp = s.clone();
        for _ in 0..=10 {
            geo = geo.add(&sp.mul(&zj));
            sp = sp.mul(&s);
            zj = zj.mul(&SeriesMV::var(3, 10, 2));
        }
        assert_eq!(g, geo);
        assert!(matches!(gf_a_coefficients(15, &lim()), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn gf_a_matches_convolution_powers() {
        let d = 12u32;
        let g = gf_a_coefficients(d as usize, &lim()).unwrap();
        for k in 0..=d {
            for l in 0..=d - k {
                for j in 0..=d - k - l {
                    let a = comb_a(k as usize, l as usize, j as usize, Mode::Exact, &lim()).unwrap();
                    let a = ExactRational::from_integer(a.exact().unwrap().clone());
                    assert_eq!(g.coeff(&[k, l, j]), a, "({k},{l},{j})");
                }
            }
        }
    }

    #[test]
    fn gf_a_tilde_examples() {
        let t2 = gf_a_tilde(2, 8, &lim()).unwrap();
        assert_eq!(t2, gf_a_coefficients(8, &lim()).unwrap());
        let t1 = gf_a_tilde(1, 8, &lim()).unwrap();
        for k in 0..=8 {
            assert_eq!(t1.coeff(&[k, 0]), int(1));
        }
        let t3 = gf_a_tilde(3, 6, &lim()).unwrap();
        assert_eq!(t3.coeff(&[1, 1, 1, 0]), int(36));
        assert!(gf_a_tilde(4, 3, &lim()).is_err());
    }

    #[test]
    fn csv_columns() {
        let g = gf_a_coefficients(2, &lim()).unwrap();
        let csv = g.to_csv(&["k", "l", "j"]);
        assert!(csv.starts_with("k,l,j,numerator,denominator\n"));
        assert!(csv.contains("\n1,1,0,4,1\n"));
    }

    #[test]
    fn m2_by_contour_recurrence() {
        let m1 = |z: &[Complex64]| Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - z[0]);
        let v = mgen_step(m1, &[0.01], 0.1, 0.1, &lim()).unwrap();
        assert!((v.re - 1.0 / 0.96f64.sqrt()).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
        let v0 = mgen_step(m1, &[0.3], 0.5, 0.0, &lim()).unwrap();
        assert!((v0.re - 1.0 / 0.7).abs() < 1e-12);
        for a in 1..=5 {
            for b in 1..=5 {
                let (z1, z2) = (0.01 * a as f64, 0.01 * b as f64);
                let x = z2.sqrt();
                let v = mgen_step(m1, &[z1], x, x, &lim()).unwrap();
                assert!((v.re - m2_closed_form(z1, z2)).abs() < 1e-10, "({z1},{z2})");
            }
        }
    }

    #[test]
    fn hadamard_of_geometric_series() {
        let geo = |z: Complex64| Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - z);
        let v = diagonal_contour(geo, geo, 0.5, 0.4, &lim()).unwrap();
        assert!((v.re - 1.0 / 0.8).abs() < 1e-13);
        // sum_k C(4,k)^2 = C(8,4)
        let quartic = |z: Complex64| (Complex64::new(1.0, 0.0) + z).powi(4);
        let v = diagonal_contour(quartic, quartic, 1.0, 1.0, &lim()).unwrap();
        assert!((v.re - 70.0).abs() < 1e-10);
    }

    #[test]
    fn nonconvergence_is_reported() {
        let tight = Limits {
            contour_max_nodes: 64,
            ..lim()
        };
        let geo = |z: Complex64| Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - z);
        let err = diagonal_contour(geo, geo, 0.99, 0.99, &tight).unwrap_err();
        assert!(matches!(err, Error::NotConverged { .. }));
    }

    #[test]
    fn binomial_from_double_contour() {
        assert!((binomial_by_double_contour(2, 2).unwrap() - 6.0).abs() < 1e-8);
        for (k, l) in [(0, 0), (3, 0), (5, 7), (12, 12)] {
            let exact = binomial((k + l) as u64, k as i64);
            let exact = LogReal::from_bigint(&exact).to_f64();
            let got = binomial_by_double_contour(k, l).unwrap();
            assert!(((got - exact) / exact).abs() < 1e-8, "({k},{l}) {got} vs {exact}");
        }
    }

    #[test]
    fn singularity_radius() {
        let c = singularity_radius_check().unwrap();
        assert!((c.radius - c.closed_form).abs() < 1e-14);
        assert!((c.radius - 0.236_067_977_499_789_7).abs() < 1e-14);
        assert!(c.denominator_below > 0.0);
        assert!(c.denominator_above < 0.0);
    }

    #[test]
    fn reciprocal_roundtrip() {
        let g = gf_a_coefficients(6, &lim()).unwrap();
        let inv = g.reciprocal().unwrap();
        assert_eq!(g.mul(&inv), SeriesMV::one(3, 6));
    }
}
