//! Exact moment formulas for `Z_{n,k}` and the arrays `A(k,l,j)` and `Ã_r`.
//!
//! `A(·,·,j)` is the `(j+1)`-fold truncated 2-D convolution power of
//! `B(a,b) = C(a+b,a)^2`; `Ã_r` is the same construction in `r` dimensions with
//! squared multinomials. Both are evaluated either exactly (big integers) or in
//! log space, through one convolution engine.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::limits::Limits;
use crate::numkernel::{binomial, factorial, log_sum_exp, multinomial, ExactRational, LogReal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Exact,
    LogSpace,
}

/// A value of `A` or `Ã_r` in the requested mode.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigInt),
    Log(LogReal),
}

impl Scalar {
    pub fn to_log(&self) -> LogReal {
        match self {
            Scalar::Exact(v) => LogReal::from_bigint(v),
            Scalar::Log(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&BigInt> {
        match self {
            Scalar::Exact(v) => Some(v),
            Scalar::Log(_) => None,
        }
    }
}

/// Semiring used by the convolution engine.
pub(crate) trait ConvRing: Clone + Send + Sync {
    fn product(a: &Self, b: &Self) -> Self;
    /// Sum in the given (left-to-right) order.
    fn total(terms: &[Self]) -> Self;
}

impl ConvRing for BigInt {
    fn product(a: &Self, b: &Self) -> Self {
        a * b
    }
    fn total(terms: &[Self]) -> Self {
        terms.iter().sum()
    }
}

impl ConvRing for LogReal {
    fn product(a: &Self, b: &Self) -> Self {
        *a * *b
    }
    fn total(terms: &[Self]) -> Self {
        log_sum_exp(terms)
    }
}

/// Dense `r`-dimensional table indexed by `0..=max_d` on each axis, row-major.
#[derive(Clone, Debug)]
pub(crate) struct Grid<T> {
    extents: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<T>,
}

impl<T: ConvRing> Grid<T> {
    fn from_fn(maxes: &[usize], f: impl Fn(&[usize]) -> T) -> Self {
        let extents: Vec<usize> = maxes.iter().map(|m| m + 1).collect();
        let strides = strides_of(&extents);
        let len = extents.iter().product();
        let mut idx = vec![0usize; extents.len()];
        let mut data = Vec::with_capacity(len);
        for flat in 0..len {
            decode(flat, &strides, &mut idx);
            data.push(f(&idx));
        }
        Grid {
            extents,
            strides,
            data,
        }
    }

    pub(crate) fn get(&self, idx: &[usize]) -> &T {
        let flat: usize = idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum();
        &self.data[flat]
    }

    /// Truncated convolution `out[i] = sum_{a <= i} self[a] * other[i - a]`.
    ///
    /// Cells are computed independently (in parallel); each cell sums its terms
    /// in a fixed odometer order, so results do not depend on thread count.
    fn convolve(&self, other: &Grid<T>) -> Grid<T> {
        let extents = self.extents.clone();
        let strides = self.strides.clone();
        let r = extents.len();
        let data: Vec<T> = (0..self.data.len())
            .into_par_iter()
            .map_init(
                || (vec![0usize; r], vec![0usize; r], Vec::<T>::new()),
                |(idx, a, terms), flat| {
                    decode(flat, &strides, idx);
                    terms.clear();
                    a.iter_mut().for_each(|x| *x = 0);
                    loop {
                        let mut fa = 0;
                        let mut fb = 0;
                        for d in 0..r {
                            fa += a[d] * strides[d];
                            fb += (idx[d] - a[d]) * strides[d];
                        }
                        terms.push(T::product(&self.data[fa], &other.data[fb]));
                        // odometer over the sub-box 0 <= a <= idx, last axis fastest
                        let mut d = r;
                        loop {
                            if d == 0 {
                                return T::total(terms);
                            }
                            d -= 1;
                            if a[d] < idx[d] {
                                a[d] += 1;
                                break;
                            }
                            a[d] = 0;
                        }
                    }
                },
            )
            .collect();
        Grid {
            extents,
            strides,
            data,
        }
    }
}

fn strides_of(extents: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; extents.len()];
    for d in (0..extents.len().saturating_sub(1)).rev() {
        strides[d] = strides[d + 1] * extents[d + 1];
    }
    strides
}

fn decode(mut flat: usize, strides: &[usize], idx: &mut [usize]) {
    for (i, s) in idx.iter_mut().zip(strides) {
        *i = flat / s;
        flat %= s;
    }
}

/// Successive truncated convolution powers `B, B*B, B*B*B, ...` of a base grid.
pub(crate) struct ConvolutionPowers<T> {
    base: Grid<T>,
    current: Option<Grid<T>>,
}

impl<T: ConvRing> ConvolutionPowers<T> {
    pub(crate) fn new(base: Grid<T>) -> Self {
        ConvolutionPowers {
            base,
            current: None,
        }
    }
}

impl<T: ConvRing> Iterator for ConvolutionPowers<T> {
    type Item = Grid<T>;

    fn next(&mut self) -> Option<Grid<T>> {
        let next = match &self.current {
            None => self.base.clone(),
            Some(prev) => self.base.convolve(prev),
        };
        self.current = Some(next.clone());
        Some(next)
    }
}

/// Squared multinomial base grid `B_r(α) = multinomial(α)^2` with `α <= maxes`.
pub(crate) fn squared_multinomial_exact(maxes: &[usize]) -> Grid<BigInt> {
    Grid::from_fn(maxes, |idx| {
        let parts: Vec<u64> = idx.iter().map(|&i| i as u64).collect();
        let m = multinomial(&parts);
        &m * &m
    })
}

pub(crate) fn squared_multinomial_log(maxes: &[usize]) -> Grid<LogReal> {
    Grid::from_fn(maxes, |idx| {
        let parts: Vec<u64> = idx.iter().map(|&i| i as u64).collect();
        LogReal::from_bigint(&multinomial(&parts)).powi(2)
    })
}

fn check_exact_cap(what: &'static str, factors: &[usize], limits: &Limits) -> Result<()> {
    let requested = factors
        .iter()
        .fold(1u64, |acc, &f| acc.saturating_mul(f.max(1) as u64));
    if requested > limits.exact_cap {
        return Err(Error::CapExceeded {
            what,
            requested,
            cap: limits.exact_cap,
        });
    }
    Ok(())
}

/// `E[Z_{n,k}] = C(n,k) / k!`; zero when `k > n`.
pub fn mean_z(n: u64, k: u64) -> ExactRational {
    ExactRational::new(binomial(n, k as i64), BigInt::from(factorial(k as usize)))
}

/// `ln E[Z_{n,k}]` (or `-inf` when `k > n`).
pub fn ln_mean_z(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    LogReal::from_bigint(&binomial(n, k as i64)).logmag()
        - LogReal::from_bigint(&BigInt::from(factorial(k as usize))).logmag()
}

/// Table of `A(a, b, j)` for `a <= max_k`, `b <= max_l` at fixed `j`.
#[derive(Clone, Debug)]
pub struct CombSlice {
    pub j: usize,
    pub max_k: usize,
    pub max_l: usize,
    pub values: SliceValues,
}

#[derive(Clone, Debug)]
pub enum SliceValues {
    Exact(Vec<Vec<BigInt>>),
    Log(Vec<Vec<LogReal>>),
}

impl CombSlice {
    pub fn get(&self, a: usize, b: usize) -> Scalar {
        match &self.values {
            SliceValues::Exact(t) => Scalar::Exact(t[a][b].clone()),
            SliceValues::Log(t) => Scalar::Log(t[a][b]),
        }
    }

    /// CSV with columns `k,l,j,value` (exact) or `k,l,j,log_value` (natural
    /// log; every entry is positive).
    pub fn to_csv(&self, header: bool) -> String {
        let mut out = String::new();
        if header {
            out.push_str(match self.values {
                SliceValues::Exact(_) => "k,l,j,value\n",
                SliceValues::Log(_) => "k,l,j,log_value\n",
            });
        }
        for a in 0..=self.max_k {
            for b in 0..=self.max_l {
                let v = match &self.values {
                    SliceValues::Exact(t) => t[a][b].to_string(),
                    SliceValues::Log(t) => crate::numkernel::fmt_sig(t[a][b].logmag(), 15),
                };
                let _ = writeln!(out, "{a},{b},{},{v}", self.j);
            }
        }
        out
    }
}

fn grid_to_rows<T: ConvRing>(g: &Grid<T>, max_k: usize, max_l: usize) -> Vec<Vec<T>> {
    (0..=max_k)
        .map(|a| (0..=max_l).map(|b| g.get(&[a, b]).clone()).collect())
        .collect()
}

/// All slices `A(·,·,j)` for `j = 0..=max_j`.
pub fn comb_a_slices(
    max_k: usize,
    max_l: usize,
    max_j: usize,
    mode: Mode,
    limits: &Limits,
) -> Result<Vec<CombSlice>> {
    match mode {
        Mode::Exact => {
            check_exact_cap("exact A table", &[max_k, max_l, max_j], limits)?;
            Ok(ConvolutionPowers::new(squared_multinomial_exact(&[max_k, max_l]))
                .take(max_j + 1)
                .enumerate()
                .map(|(j, g)| CombSlice {
                    j,
                    max_k,
                    max_l,
                    values: SliceValues::Exact(grid_to_rows(&g, max_k, max_l)),
                })
                .collect())
        }
        Mode::LogSpace => Ok(ConvolutionPowers::new(squared_multinomial_log(&[max_k, max_l]))
            .take(max_j + 1)
            .enumerate()
            .map(|(j, g)| CombSlice {
                j,
                max_k,
                max_l,
                values: SliceValues::Log(grid_to_rows(&g, max_k, max_l)),
            })
            .collect()),
    }
}

pub fn comb_a_slice(max_k: usize, max_l: usize, j: usize, mode: Mode, limits: &Limits) -> Result<CombSlice> {
    Ok(comb_a_slices(max_k, max_l, j, mode, limits)?
        .pop()
        .expect("at least one slice"))
}

/// `A(k, l, j)`.
pub fn comb_a(k: usize, l: usize, j: usize, mode: Mode, limits: &Limits) -> Result<Scalar> {
    match mode {
        Mode::Exact => check_exact_cap("exact A", &[k, l, j], limits)?,
        Mode::LogSpace => {}
    }
    Ok(comb_a_slice(k, l, j, mode, limits)?.get(k, l))
}

/// `Ã_r(k_1, ..., k_r, j)`.
pub fn comb_a_tilde(r: usize, ks: &[usize], j: usize, mode: Mode, limits: &Limits) -> Result<Scalar> {
    if r == 0 || ks.len() != r {
        return domain(format!("Ã_r needs r >= 1 and exactly r lengths (r = {r}, got {})", ks.len()));
    }
    match mode {
        Mode::Exact => {
            let mut f = ks.to_vec();
            f.push(j);
            check_exact_cap("exact Ã_r", &f, limits)?;
            let g = ConvolutionPowers::new(squared_multinomial_exact(ks))
                .nth(j)
                .expect("infinite iterator");
            Ok(Scalar::Exact(g.get(ks).clone()))
        }
        Mode::LogSpace => {
            let g = ConvolutionPowers::new(squared_multinomial_log(ks))
                .nth(j)
                .expect("infinite iterator");
            Ok(Scalar::Log(*g.get(ks)))
        }
    }
}

/// `E[Z_{n,k} Z_{n,l}]` with its decomposition over the overlap size `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentResult {
    pub n: u64,
    pub k: u64,
    pub l: u64,
    pub order: u32,
    pub value: ExactRational,
    /// `per_j_terms[j] = E[Z_{n,k+l-j}] A(k-j, l-j, j)`.
    pub per_j_terms: Vec<ExactRational>,
}

/// Log-space counterpart of [`MomentResult`] for sizes beyond the exact cap.
#[derive(Clone, Debug, PartialEq)]
pub struct LogMomentResult {
    pub n: u64,
    pub k: u64,
    pub l: u64,
    pub value: LogReal,
    pub per_j_terms: Vec<LogReal>,
}

impl LogMomentResult {
    /// Index of the largest term.
    pub fn argmax_j(&self) -> usize {
        let mut best = 0;
        for (j, t) in self.per_j_terms.iter().enumerate() {
            if t.logmag() > self.per_j_terms[best].logmag() {
                best = j;
            }
        }
        best
    }

    /// Sub-grid location of the dominant `j`: vertex of the parabola through
    /// the log-terms at the argmax and its two neighbours.
    pub fn refined_argmax_j(&self) -> f64 {
        let j = self.argmax_j();
        if j == 0 || j + 1 >= self.per_j_terms.len() {
            return j as f64;
        }
        let (a, b, c) = (
            self.per_j_terms[j - 1].logmag(),
            self.per_j_terms[j].logmag(),
            self.per_j_terms[j + 1].logmag(),
        );
        let curv = a - 2.0 * b + c;
        if curv >= 0.0 || !curv.is_finite() {
            return j as f64;
        }
        j as f64 + 0.5 * (a - c) / curv
    }
}

fn check_moment_args(n: u64, k: u64, l: u64) -> Result<()> {
    if k < 1 || l < 1 || k > n || l > n {
        return domain(format!("second moment needs 1 <= k, l <= n (n={n}, k={k}, l={l})"));
    }
    Ok(())
}

/// `E[Z_{n,k} Z_{n,l}] = sum_j E[Z_{n,k+l-j}] A(k-j, l-j, j)`, exactly.
pub fn second_moment(n: u64, k: u64, l: u64, limits: &Limits) -> Result<MomentResult> {
    check_moment_args(n, k, l)?;
    let (ku, lu) = (k as usize, l as usize);
    let jmax = ku.min(lu);
    check_exact_cap("exact second moment", &[ku, lu, jmax], limits)?;
    let per_j_terms: Vec<ExactRational> = ConvolutionPowers::new(squared_multinomial_exact(&[ku, lu]))
        .take(jmax + 1)
        .enumerate()
        .map(|(j, g)| {
            let a = g.get(&[ku - j, lu - j]).clone();
            mean_z(n, k + l - j as u64) * ExactRational::from_integer(a)
        })
        .collect();
    let value = per_j_terms.iter().sum();
    Ok(MomentResult {
        n,
        k,
        l,
        order: 2,
        value,
        per_j_terms,
    })
}

/// Log-space `E[Z_{n,k} Z_{n,l}]`, usable far beyond the exact cap.
pub fn second_moment_log(n: u64, k: u64, l: u64) -> Result<LogMomentResult> {
    check_moment_args(n, k, l)?;
    let (ku, lu) = (k as usize, l as usize);
    let jmax = ku.min(lu);
    let per_j_terms: Vec<LogReal> = ConvolutionPowers::new(squared_multinomial_log(&[ku, lu]))
        .take(jmax + 1)
        .enumerate()
        .map(|(j, g)| LogReal::from_ln(ln_mean_z(n, k + l - j as u64)) * *g.get(&[ku - j, lu - j]))
        .collect();
    let value = log_sum_exp(&per_j_terms);
    Ok(LogMomentResult {
        n,
        k,
        l,
        value,
        per_j_terms,
    })
}

/// All-or-nothing lower bound
/// `E[Z_{n,k}^r] >= sum_j E[Z_{n, rk-(r-1)j}] Ã_r(k-j, ..., k-j, j)`; an identity for `r = 2`.
pub fn all_or_nothing_bound(n: u64, k: u64, r: usize, limits: &Limits) -> Result<ExactRational> {
    if r < 2 || k < 1 || k > n {
        return domain(format!("all-or-nothing bound needs r >= 2 and 1 <= k <= n (n={n}, k={k}, r={r})"));
    }
    let ku = k as usize;
    let mut factors = vec![ku; r];
    factors.push(ku);
    check_exact_cap("exact all-or-nothing bound", &factors, limits)?;
    let mut total = ExactRational::zero();
    for (j, g) in ConvolutionPowers::new(squared_multinomial_exact(&vec![ku; r]))
        .take(ku + 1)
        .enumerate()
    {
        let len = r as u64 * k - (r as u64 - 1) * j as u64;
        let a = g.get(&vec![ku - j; r]).clone();
        total += mean_z(n, len) * ExactRational::from_integer(a);
    }
    Ok(total)
}

/// Reference evaluation of `A(k,l,j)` straight from the defining double sum
/// over compositions; exponential cost.
pub fn comb_a_by_compositions(k: usize, l: usize, j: usize) -> BigInt {
    let alphas = compositions(k, j + 1);
    let betas = compositions(l, j + 1);
    let mut total = BigInt::zero();
    for a in &alphas {
        for b in &betas {
            let mut prod = BigInt::one();
            for (&ar, &br) in a.iter().zip(b) {
                let c = binomial((ar + br) as u64, ar as i64);
                prod *= &c * &c;
            }
            total += prod;
        }
    }
    total
}

/// Weak compositions of `total` into `parts` non-negative parts.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=rem {
            cur.push(x);
            rec(rem - x, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn lim() -> Limits {
        Limits::default()
    }

    fn exact_a(k: usize, l: usize, j: usize) -> BigInt {
        comb_a(k, l, j, Mode::Exact, &lim()).unwrap().exact().unwrap().clone()
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean_z(4, 2), ExactRational::from_integer(3.into()));
        assert_eq!(mean_z(7, 1), ExactRational::from_integer(7.into()));
        assert_eq!(mean_z(3, 2), ExactRational::new(3.into(), 2.into()));
        assert!(mean_z(3, 4).is_zero());
    }

    #[test]
    fn comb_a_examples() {
        assert_eq!(exact_a(2, 1, 0), BigInt::from(9));
        for j in 0..6 {
            assert_eq!(exact_a(0, 0, j), BigInt::one());
        }
        assert_eq!(exact_a(1, 1, 1), BigInt::from(10));
        for k in 0..6 {
            for l in 0..6 {
                let c = binomial((k + l) as u64, k as i64);
                assert_eq!(exact_a(k, l, 0), &c * &c);
            }
        }
    }

    #[test]
    fn comb_a_matches_composition_sums() {
        for k in 0..=8 {
            for l in 0..=8 - k {
                for j in 0..=8 - k - l {
                    assert_eq!(exact_a(k, l, j), comb_a_by_compositions(k, l, j), "A({k},{l},{j})");
                }
            }
        }
    }

    #[test]
    fn comb_a_symmetric() {
        let slices = comb_a_slices(12, 12, 12, Mode::Exact, &Limits { exact_cap: u64::MAX, ..lim() }).unwrap();
        for s in &slices {
            for a in 0..=12 {
                for b in 0..=12 {
                    assert_eq!(s.get(a, b), s.get(b, a));
                }
            }
            assert_eq!(s.get(0, 0), Scalar::Exact(BigInt::one()));
        }
    }

    #[test]
    fn logspace_matches_exact() {
        let exact = comb_a_slices(20, 20, 20, Mode::Exact, &lim()).unwrap();
        let logs = comb_a_slices(20, 20, 20, Mode::LogSpace, &lim()).unwrap();
        for (e, l) in exact.iter().zip(&logs) {
            for a in 0..=20 {
                for b in 0..=20 {
                    let d = e.get(a, b).to_log().rel_diff(&l.get(a, b).to_log());
                    assert!(d <= 1e-8, "rel diff {d} at ({a},{b},{})", e.j);
                    assert!(d <= 1e-9 * (e.j as f64 + 1.0));
                }
            }
        }
    }

    #[test]
    fn exact_cap_enforced() {
        let err = comb_a(21, 20, 20, Mode::Exact, &lim()).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
        assert!(comb_a(21, 20, 20, Mode::LogSpace, &lim()).is_ok());
    }

    #[test]
    fn second_moment_examples() {
        let m = second_moment(3, 2, 2, &lim()).unwrap();
        assert_eq!(m.value, ExactRational::new(19.into(), 6.into()));
        assert_eq!(m.value, m.per_j_terms.iter().sum::<ExactRational>());
        for n in 1..12u64 {
            let m = second_moment(n, 1, 1, &lim()).unwrap();
            assert_eq!(m.value, ExactRational::from_integer((n * n).into()));
        }
        assert!(second_moment(3, 4, 1, &lim()).is_err());
        assert!(second_moment(3, 0, 1, &lim()).is_err());
    }

    #[test]
    fn second_moment_symmetric() {
        for n in 1..=9 {
            for k in 1..=n {
                for l in 1..=n {
                    assert_eq!(
                        second_moment(n, k, l, &lim()).unwrap().value,
                        second_moment(n, l, k, &lim()).unwrap().value
                    );
                }
            }
        }
    }

    #[test]
    fn log_second_moment_matches_exact() {
        for (n, k, l) in [(7, 3, 4), (12, 5, 5), (30, 9, 6)] {
            let e = second_moment(n, k, l, &lim()).unwrap();
            let g = second_moment_log(n, k, l).unwrap();
            assert!(LogReal::from_rational(&e.value).rel_diff(&g.value) < 1e-12);
        }
    }

    #[test]
    fn a_tilde_examples() {
        for k in 0..=4 {
            for l in 0..=4 {
                for j in 0..=4 {
                    assert_eq!(
                        comb_a_tilde(2, &[k, l], j, Mode::Exact, &lim()).unwrap(),
                        Scalar::Exact(exact_a(k, l, j))
                    );
                }
            }
        }
        for k in 0..6 {
            assert_eq!(
                comb_a_tilde(1, &[k], 0, Mode::Exact, &lim()).unwrap(),
                Scalar::Exact(BigInt::one())
            );
        }
        assert_eq!(
            comb_a_tilde(3, &[1, 1, 1], 0, Mode::Exact, &lim()).unwrap(),
            Scalar::Exact(BigInt::from(36))
        );
        let log = comb_a_tilde(3, &[2, 1, 3], 2, Mode::LogSpace, &lim()).unwrap();
        let ex = comb_a_tilde(3, &[2, 1, 3], 2, Mode::Exact, &lim()).unwrap();
        assert!(log.to_log().rel_diff(&ex.to_log()) < 1e-12);
        assert!(comb_a_tilde(2, &[1], 0, Mode::Exact, &lim()).is_err());
    }

    #[test]
    fn all_or_nothing_r2_is_second_moment() {
        for n in 1..=8 {
            for k in 1..=n {
                assert_eq!(
                    all_or_nothing_bound(n, k, 2, &lim()).unwrap(),
                    second_moment(n, k, k, &lim()).unwrap().value
                );
            }
        }
    }

    #[test]
    fn all_or_nothing_bounds_constant_z1() {
        // Z_{4,1} = 4 identically, so E[Z^3] = 64
        let b = all_or_nothing_bound(4, 1, 3, &lim()).unwrap();
        assert!(b <= ExactRational::from_integer(64.into()));
        assert!(b.to_f64().unwrap() > 0.0);
    }

    #[test]
    fn slice_csv_layout() {
        let s = comb_a_slice(1, 1, 1, Mode::Exact, &lim()).unwrap();
        let csv = s.to_csv(true);
        assert_eq!(csv.lines().next(), Some("k,l,j,value"));
        assert!(csv.contains("1,1,1,10"));
    }

    #[test]
    fn convolution_is_thread_count_independent() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| comb_a_slice(15, 15, 15, Mode::LogSpace, &lim()).unwrap())
        };
        let (a, b) = (run(1), run(4));
        for x in 0..=15 {
            for y in 0..=15 {
                assert_eq!(a.get(x, y).to_log().logmag().to_bits(), b.get(x, y).to_log().logmag().to_bits());
            }
        }
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 4);
        assert_eq!(compositions(0, 3), vec![vec![0, 0, 0]]);
        assert_eq!(compositions(2, 3).len(), binomial(4, 2).to_usize().unwrap());
    }
}
