//! Exact and log-space arithmetic shared by the rest of the crate.
//!
//! Exact quantities are [`BigInt`] / [`ExactRational`] values. Quantities too
//! large for `f64` (e.g. `A(48,48,48)`) are carried as [`LogReal`]: a sign and
//! the natural log of the magnitude.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact arbitrary-precision fraction, always reduced with a positive denominator.
pub type ExactRational = BigRational;

/// Default number of factorials kept in the shared memo table.
pub const DEFAULT_FACTORIAL_CAP: usize = 10_000;

/// Signed real stored as `sign * exp(logmag)`.
///
/// `logmag` is meaningless (and normalized to `-inf`) when `sign == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogReal {
    sign: i8,
    logmag: f64,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal {
        sign: 0,
        logmag: f64::NEG_INFINITY,
    };
    pub const ONE: LogReal = LogReal {
        sign: 1,
        logmag: 0.0,
    };

    pub fn new(sign: i8, logmag: f64) -> Self {
        if sign == 0 || logmag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogReal {
                sign: sign.signum(),
                logmag,
            }
        }
    }

    /// Positive value with the given natural log.
    pub fn from_ln(logmag: f64) -> Self {
        Self::new(1, logmag)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    pub fn from_bigint(x: &BigInt) -> Self {
        match x.sign() {
            Sign::NoSign => Self::ZERO,
            Sign::Plus => Self::new(1, ln_biguint(x.magnitude())),
            Sign::Minus => Self::new(-1, ln_biguint(x.magnitude())),
        }
    }

    pub fn from_rational(x: &ExactRational) -> Self {
        if x.is_zero() {
            return Self::ZERO;
        }
        let sign = if x.is_negative() { -1 } else { 1 };
        let logmag = ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude());
        Self::new(sign, logmag)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of `|x|`; `-inf` for zero.
    pub fn logmag(&self) -> f64 {
        self.logmag
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// `ln(x)` for positive values.
    pub fn ln(&self) -> Option<f64> {
        (self.sign > 0).then_some(self.logmag)
    }

    /// Value as `f64`; overflows to `±inf` / underflows to `0` outside double range.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.logmag.exp(),
        }
    }

    pub fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && n % 2 != 0 { -1 } else { 1 };
        Self::new(sign, self.logmag * f64::from(n))
    }

    /// Pairwise signed addition.
    pub fn add(&self, other: &LogReal) -> LogReal {
        log_sum_exp(&[*self, *other])
    }

    /// Relative distance `|a - b| / max(|a|, |b|)` computed in log space.
    pub fn rel_diff(&self, other: &LogReal) -> f64 {
        if self.sign != other.sign {
            return if self.is_zero() && other.is_zero() { 0.0 } else { 2.0 };
        }
        if self.is_zero() {
            return 0.0;
        }
        let d = (self.logmag - other.logmag).abs();
        -(-d).exp_m1()
    }
}

impl Mul for LogReal {
    type Output = LogReal;
    fn mul(self, rhs: LogReal) -> LogReal {
        if self.is_zero() || rhs.is_zero() {
            LogReal::ZERO
        } else {
            LogReal::new(self.sign * rhs.sign, self.logmag + rhs.logmag)
        }
    }
}

impl Neg for LogReal {
    type Output = LogReal;
    fn neg(self) -> LogReal {
        LogReal::new(-self.sign, self.logmag)
    }
}

impl fmt::Display for LogReal {
    /// `sign,logmag` with 15 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0,-inf")
        } else {
            write!(f, "{},{}", self.sign, fmt_sig(self.logmag, 15))
        }
    }
}

/// Formats `x` with `digits` significant digits in plain or scientific form.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits in u64") as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("top 64 bits") as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Signed sum of log-space values.
///
/// Positive and negative parts are each accumulated left to right after a
/// max-shift, then combined; an exact tie yields zero.
pub fn log_sum_exp(values: &[LogReal]) -> LogReal {
    let pos = shifted_sum(values.iter().filter(|v| v.sign > 0).map(|v| v.logmag));
    let neg = shifted_sum(values.iter().filter(|v| v.sign < 0).map(|v| v.logmag));
    match (pos, neg) {
        (None, None) => LogReal::ZERO,
        (Some(p), None) => LogReal::from_ln(p),
        (None, Some(n)) => LogReal::new(-1, n),
        (Some(p), Some(n)) => match p.partial_cmp(&n) {
            Some(Ordering::Equal) | None => LogReal::ZERO,
            Some(Ordering::Greater) => LogReal::new(1, p + (-(n - p).exp()).ln_1p()),
            Some(Ordering::Less) => LogReal::new(-1, n + (-(p - n).exp()).ln_1p()),
        },
    }
}

/// `ln(sum(exp(l)))` over an iterator of logs, `None` if empty.
fn shifted_sum(logs: impl Iterator<Item = f64> + Clone) -> Option<f64> {
    let max = logs.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return None;
    }
    if max == f64::INFINITY {
        return Some(f64::INFINITY);
    }
    let s: f64 = logs.map(|l| (l - max).exp()).sum();
    Some(max + s.ln())
}

/// Log-sum-exp over plain positive log values.
pub fn ln_sum_exp(logs: &[f64]) -> f64 {
    shifted_sum(logs.iter().copied()).unwrap_or(f64::NEG_INFINITY)
}

/// Binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    BigInt::from(acc)
}

/// Multinomial coefficient `(sum parts)! / prod(part!)`.
pub fn multinomial(parts: &[u64]) -> BigInt {
    let mut total = 0u64;
    let mut acc = BigInt::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p as i64);
    }
    acc
}

/// Memoized factorials. The table grows on demand up to `cap`; larger
/// arguments are computed directly without being stored.
pub struct FactorialTable {
    cap: usize,
    table: RwLock<Vec<BigUint>>,
}

impl FactorialTable {
    pub fn new(cap: usize) -> Self {
        FactorialTable {
            cap,
            table: RwLock::new(vec![BigUint::one()]),
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn get(&self, n: usize) -> BigUint {
        if n > self.cap {
            let mut acc = self.get(self.cap);
            for i in self.cap + 1..=n {
                acc *= i as u64;
            }
            return acc;
        }
        {
            let t = self.table.read().expect("factorial table poisoned");
            if let Some(v) = t.get(n) {
                return v.clone();
            }
        }
        let mut t = self.table.write().expect("factorial table poisoned");
        while t.len() <= n {
            let next = t.last().expect("non-empty") * (t.len() as u64);
            t.push(next);
        }
        t[n].clone()
    }
}

/// `n!` from the process-wide table (cap [`DEFAULT_FACTORIAL_CAP`]).
pub fn factorial(n: usize) -> BigUint {
    static TABLE: OnceLock<FactorialTable> = OnceLock::new();
    TABLE
        .get_or_init(|| FactorialTable::new(DEFAULT_FACTORIAL_CAP))
        .get(n)
}

/// `ln |x|` of an exact rational; `-inf` for zero.
pub fn ln_rational(x: &ExactRational) -> f64 {
    LogReal::from_rational(x).logmag()
}

pub fn rational_to_f64(x: &ExactRational) -> f64 {
    LogReal::from_rational(x).to_f64()
}

/// `x * ln(y)` with the convention `0 * ln(0) = 0`.
pub fn xlny(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;
    use proptest::prelude::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn binomial_matches_factorial_ratio() {
        let oracle = factorial(100) / (factorial(50) * factorial(50));
        assert_eq!(binomial(100, 50), BigInt::from(oracle));
    }

    #[test]
    fn pascal_and_symmetry_up_to_200() {
        for n in 1..=200u64 {
            for k in 0..=n as i64 {
                assert_eq!(binomial(n, k), binomial(n, n as i64 - k));
                assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k),
                    "Pascal at ({n},{k})"
                );
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(&[1, 1]), BigInt::from(2));
        assert_eq!(multinomial(&[0, 0, 1, 1]), BigInt::from(2));
        assert_eq!(multinomial(&[1, 1, 1]), BigInt::from(6));
        assert_eq!(multinomial(&[]), BigInt::one());
    }

    #[test]
    fn factorial_table_beyond_cap() {
        let t = FactorialTable::new(5);
        assert_eq!(t.get(5), BigUint::from(120u32));
        assert_eq!(t.get(7), BigUint::from(5040u32));
        assert_eq!(t.get(3), BigUint::from(6u32));
    }

    #[test]
    fn log_sum_exp_basics() {
        let s = log_sum_exp(&[LogReal::from_f64(2.0), LogReal::from_f64(3.0)]);
        assert!((s.logmag() - 5f64.ln()).abs() < 1e-15);
        assert_eq!(s.sign(), 1);

        let x = LogReal::from_ln(12.5);
        assert!(log_sum_exp(&[x, -x]).is_zero());
        assert!(log_sum_exp(&[]).is_zero());

        let d = log_sum_exp(&[LogReal::from_f64(2.0), LogReal::from_f64(-5.0)]);
        assert_eq!(d.sign(), -1);
        assert!((d.to_f64() + 3.0).abs() < 1e-14);
    }

    #[test]
    fn log_sum_exp_matches_exact_sum() {
        let mut rng = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = || {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            rng
        };
        let mut exact = ExactRational::zero();
        let mut logs = Vec::new();
        for _ in 0..100 {
            let num = BigInt::from(next() % 1_000_000 + 1) * BigInt::from(10u32).pow((next() % 40) as u32);
            let den = BigInt::from(next() % 1_000 + 1);
            let q = ExactRational::new(num, den);
            logs.push(LogReal::from_rational(&q));
            exact += q;
        }
        let got = log_sum_exp(&logs);
        assert!(got.rel_diff(&LogReal::from_rational(&exact)) < 1e-12);
    }

    #[test]
    fn huge_bigint_logs() {
        let f = BigInt::from(factorial(1000));
        let ln = LogReal::from_bigint(&f).logmag();
        let oracle: f64 = (1..=1000).map(|i| (i as f64).ln()).sum();
        assert!((ln - oracle).abs() / oracle < 1e-14);
    }

    #[test]
    fn display_format() {
        assert_eq!(LogReal::from_f64(1.0).to_string(), "1,0");
        assert_eq!(LogReal::ZERO.to_string(), "0,-inf");
        assert_eq!(fmt_sig(std::f64::consts::PI, 15), "3.14159265358979");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn rational_logreal_roundtrip(mant in 1.0f64..10.0, e in -300.0f64..300.0) {
            // value = mant * e^e, built as an exact rational from its f64 form
            let x = mant * e.exp();
            let q = ExactRational::from_f64(x).unwrap();
            let l = LogReal::from_rational(&q);
            prop_assert!((l.to_f64() - x).abs() <= 1e-12 * x);
            prop_assert!((l.logmag() - x.ln()).abs() <= 1e-12 * x.ln().abs().max(1.0));
        }

        #[test]
        fn multinomial_permutation_invariant(mut parts in proptest::collection::vec(0u64..12, 0..5), seed in any::<u64>()) {
            let a = multinomial(&parts);
            let n = parts.len();
            if n > 1 {
                parts.swap(seed as usize % n, (seed / 7) as usize % n);
                parts.reverse();
            }
            prop_assert_eq!(a, multinomial(&parts));
        }
    }
}
