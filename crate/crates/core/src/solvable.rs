//! Sums of i.i.d. Exp(1) variables: `N_{n,k}(t)` counts the `k`-subsets of
//! `X_1..X_n` whose sum is at most `t`. Exact first moments, a seeded Monte
//! Carlo estimator, the replica-symmetric ansatz and its `m → 0` limit, and
//! partition-count tables for the distinct-parts picture.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::limits::Limits;
use crate::numkernel::{binomial, LogReal};
use crate::quad::{bisect, golden_max, integrate};

/// Regularized lower incomplete gamma `P(k, t)` for integer `k >= 1`.
pub fn regularized_gamma_p(k: u64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let kf = k as f64;
    if t < kf + 1.0 {
        // e^{-t} t^k / k! · sum_{i>=0} t^i / ((k+1)...(k+i))
        let ln_lead = -t + kf * t.ln() - ln_factorial(k);
        let mut term = 1.0;
        let mut sum = 1.0;
        for i in 1..10_000 {
            term *= t / (kf + i as f64);
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        (ln_lead.exp() * sum).min(1.0)
    } else {
        // Q(k, t) = e^{-t} sum_{i<k} t^i / i!, all terms positive
        let mut term = (-t).exp();
        let mut q = term;
        for i in 1..k {
            term *= t / i as f64;
            q += term;
        }
        1.0 - q
    }
}

fn ln_factorial(k: u64) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// `E[N_{n,k}(t)] = C(n,k) P(k,t)`.
pub fn expect_n(n: u64, k: u64, t: f64) -> Result<f64> {
    if k < 1 || k > n || !(t >= 0.0) {
        return domain(format!("expectation needs 1 <= k <= n and t >= 0 (n={n}, k={k}, t={t})"));
    }
    Ok(LogReal::from_bigint(&binomial(n, k as i64)).to_f64() * regularized_gamma_p(k, t))
}

/// Number of `k`-subsets of the ascending `xs` with sum at most `t`.
pub fn count_small_sums(xs: &[f64], k: usize, t: f64) -> u64 {
    let n = xs.len();
    // suffix sums for the largest-completion shortcut
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + xs[i];
    }
    fn go(xs: &[f64], suffix: &[f64], start: usize, r: usize, budget: f64) -> u64 {
        let n = xs.len();
        if r == 0 {
            return 1;
        }
        if n - start < r {
            return 0;
        }
        // every completion fits: the r largest remaining elements fit
        if suffix[n - r] <= budget {
            return binomial((n - start) as u64, r as i64)
                .try_into()
                .expect("subset count fits in u64");
        }
        if r == 1 {
            return xs[start..].partition_point(|&x| x <= budget) as u64;
        }
        let mut total = 0;
        for i in start..=n - r {
            // cheapest completion starting at i
            if suffix[i] - suffix[i + r] > budget {
                break;
            }
            total += go(xs, suffix, i + 1, r - 1, budget - xs[i]);
        }
        total
    }
    go(xs, &suffix, 0, k, t)
}

/// Per-sample seed from the master seed (splitmix64 finalizer).
pub fn sample_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Monte Carlo estimate of `E[N_{n,k}(t)]`. Each sample draws from its own
/// stream seeded by [`sample_seed`], so the result does not depend on the
/// thread count.
pub fn mc_n(n: usize, k: usize, t: f64, samples: u64, seed: u64, limits: &Limits) -> Result<McEstimate> {
    if n > limits.mc_n_cap {
        return Err(Error::CapExceeded {
            what: "Monte Carlo n",
            requested: n as u64,
            cap: limits.mc_n_cap as u64,
        });
    }
    if k > limits.mc_k_cap {
        return Err(Error::CapExceeded {
            what: "Monte Carlo k",
            requested: k as u64,
            cap: limits.mc_k_cap as u64,
        });
    }
    if k < 1 || k > n || samples < 2 || t.is_nan() {
        return domain(format!("Monte Carlo needs 1 <= k <= n, samples >= 2 (n={n}, k={k}, samples={samples})"));
    }
    let counts: Vec<u64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, i));
            let mut xs: Vec<f64> = (0..n).map(|_| Exp1.sample(&mut rng)).collect();
            xs.sort_by(f64::total_cmp);
            count_small_sums(&xs, k, t)
        })
        .collect();
    let (sum, sum_sq) = counts.iter().fold((0u128, 0u128), |(s, q), &c| {
        (s + u128::from(c), q + u128::from(c) * u128::from(c))
    });
    let m = samples as f64;
    let mean = sum as f64 / m;
    let var = ((sum_sq as f64) - (sum as f64) * mean) / (m - 1.0);
    Ok(McEstimate {
        mean,
        stderr: (var.max(0.0) / m).sqrt(),
        samples,
    })
}

/// `f_m(z) = sum_{l=1}^m C(m,l) z^l / l`.
pub fn f_m(m: u32, z: f64) -> f64 {
    let mut c = 1.0;
    let mut zl = 1.0;
    let mut total = 0.0;
    for l in 1..=m {
        c = c * f64::from(m - l + 1) / f64::from(l);
        zl *= z;
        total += c * zl / f64::from(l);
    }
    total
}

/// `f_m(z) = ∫_0^z ((1+y)^m - 1) / y dy` for real `m` by adaptive quadrature.
pub fn f_m_integral(m: f64, z: f64) -> f64 {
    integrate(
        |y| if y == 0.0 { m } else { (m * y.ln_1p()).exp_m1() / y },
        0.0,
        z,
        1e-14,
    )
}

/// Replica-symmetric critical point for the `m`-th moment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicaSolution {
    pub m: u32,
    pub t: f64,
    pub kappa: f64,
    pub z: f64,
    /// Overlap lengths `κ_l`, `l = 1..=m`.
    pub kappa_l: Vec<f64>,
    /// Overlap budgets `τ_l`, `l = 1..=m`.
    pub tau_l: Vec<f64>,
    pub ld_value: f64,
}

impl ReplicaSolution {
    /// `(sum C(m-1,l-1) κ_l - κ, sum C(m-1,l-1) τ_l - t)`.
    pub fn constraint_residuals(&self) -> (f64, f64) {
        let mut c = 1.0;
        let (mut sk, mut st) = (0.0, 0.0);
        for l in 1..=self.m {
            if l > 1 {
                c = c * f64::from(self.m - l + 1) / f64::from(l - 1);
            }
            sk += c * self.kappa_l[(l - 1) as usize];
            st += c * self.tau_l[(l - 1) as usize];
        }
        (sk - self.kappa, st - self.t)
    }

    /// `sum C(m,l) κ_l (2 - 2 ln κ_l + ln τ_l)`.
    pub fn constrained_sum_value(&self) -> f64 {
        let mut c = 1.0;
        let mut total = 0.0;
        for l in 1..=self.m {
            c = c * f64::from(self.m - l + 1) / f64::from(l);
            let (k, tau) = (self.kappa_l[(l - 1) as usize], self.tau_l[(l - 1) as usize]);
            total += c * k * (2.0 - 2.0 * k.ln() + tau.ln());
        }
        total
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("l,kappa_l,tau_l\n");
        for (i, (k, tau)) in self.kappa_l.iter().zip(&self.tau_l).enumerate() {
            out.push_str(&format!("{},{k:e},{tau:e}\n", i + 1));
        }
        out
    }
}

/// Solves `((1+z)^m - 1) / sqrt(f_m(z)) = κ sqrt(m) / sqrt(t)` and fills in `κ_l`, `τ_l`.
pub fn solve_z(m: u32, kappa: f64, t: f64) -> Result<ReplicaSolution> {
    if m < 1 || !(kappa > 0.0 && t > 0.0) {
        return domain(format!("replica solve needs m >= 1, κ > 0, t > 0 (m={m}, κ={kappa}, t={t})"));
    }
    let target = kappa * f64::from(m).sqrt() / t.sqrt();
    let lhs = |u: f64| {
        let z = u.exp();
        (f64::from(m) * z.ln_1p()).exp_m1() / f_m(m, z).sqrt()
    };
    let (mut lo, mut hi) = (-1.0, 1.0);
    while lhs(lo) > target {
        lo *= 2.0;
        if lo < -1400.0 {
            return Err(Error::Infeasible {
                target,
                supremum: f64::INFINITY,
                reason: "target below the attainable range of the implicit equation".into(),
            });
        }
    }
    while lhs(hi) < target {
        hi *= 2.0;
        if hi > 1400.0 / f64::from(m) {
            return Err(Error::Infeasible {
                target,
                supremum: lhs(hi),
                reason: "target above the attainable range of the implicit equation".into(),
            });
        }
    }
    let z = bisect(|u| lhs(u) - target, lo, hi, 1e-16)?.exp();
    let f = f_m(m, z);
    let scale = (f64::from(m) * t / f).sqrt();
    let kappa_l: Vec<f64> = (1..=m).map(|l| scale * z.powi(l as i32) / f64::from(l)).collect();
    let tau_l: Vec<f64> = (1..=m)
        .map(|l| scale * scale * z.powi(l as i32) / f64::from(l * l))
        .collect();
    let mut sol = ReplicaSolution {
        m,
        t,
        kappa,
        z,
        kappa_l,
        tau_l,
        ld_value: 0.0,
    };
    sol.ld_value = replica_moment_ld(&sol);
    Ok(sol)
}

/// Ansatz value `sqrt(mt / f_m(z)) [2 f_m(z) - ln z ((1+z)^m - 1)]` for `lim n^{-1/2} ln E[N^m]`.
pub fn replica_moment_ld(sol: &ReplicaSolution) -> f64 {
    let m = f64::from(sol.m);
    let f = f_m(sol.m, sol.z);
    (m * sol.t / f).sqrt() * (2.0 * f - sol.z.ln() * (m * sol.z.ln_1p()).exp_m1())
}

/// Dilogarithm `Li_2(x) = sum x^l / l^2` for real `x <= 1`.
pub fn dilog(x: f64) -> Result<f64> {
    use std::f64::consts::PI;
    if x > 1.0 || x.is_nan() {
        return domain(format!("real dilogarithm needs x <= 1 (got {x})"));
    }
    if x == 1.0 {
        return Ok(PI * PI / 6.0);
    }
    if x.abs() <= 0.5 {
        return Ok(dilog_series(x));
    }
    if x > 0.5 {
        return Ok(PI * PI / 6.0 - x.ln() * (-x).ln_1p() - dilog_series(1.0 - x));
    }
    if x >= -1.0 {
        // x/(x-1) ∈ [1/3, 1/2]
        let l = (-x).ln_1p();
        return Ok(-dilog_series(x / (x - 1.0)) - 0.5 * l * l);
    }
    let l = (-x).ln();
    Ok(-PI * PI / 6.0 - 0.5 * l * l - dilog(1.0 / x)?)
}

fn dilog_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = 0.0;
    for l in 1..200 {
        let add = term / f64::from(l * l);
        sum += add;
        if add.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
        term *= x;
    }
    sum
}

/// `ln(1+z) / sqrt(-Li_2(-z))`, increasing from 0 to `sqrt 2`.
pub fn replica_zero_ratio(z: f64) -> f64 {
    z.ln_1p() / (-dilog(-z).expect("argument is negative")).sqrt()
}

/// `m → 0` limit of the ansatz: solves `ln(1+z)/sqrt(-Li_2(-z)) = κ/sqrt(t)` and
/// returns `(z, sqrt(t / -Li_2(-z)) [-2 Li_2(-z) - ln z ln(1+z)])`.
pub fn replica_to_zero(kappa: f64, t: f64) -> Result<(f64, f64)> {
    if !(kappa > 0.0 && t > 0.0) {
        return domain(format!("κ and t must be positive ({kappa},{t})"));
    }
    let target = kappa / t.sqrt();
    let sup = std::f64::consts::SQRT_2;
    if target >= sup {
        return Err(Error::Infeasible {
            target,
            supremum: sup,
            reason: "k distinct parts need a sum of at least k(k+1)/2, so κ/sqrt(t) < sqrt(2)".into(),
        });
    }
    let g = |u: f64| replica_zero_ratio(u.exp()) - target;
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    while g(lo) > 0.0 && lo > -1400.0 {
        lo *= 2.0;
    }
    while g(hi) < 0.0 && hi < 700.0 {
        hi = (hi * 2.0).min(700.0);
        if hi == 700.0 {
            break;
        }
    }
    if g(hi) < 0.0 {
        return Err(Error::Infeasible {
            target,
            supremum: replica_zero_ratio(hi.exp()),
            reason: "target too close to sqrt(2) for double precision".into(),
        });
    }
    let z = bisect(g, lo, hi, 1e-16)?.exp();
    let li = -dilog(-z)?;
    Ok((z, (t / li).sqrt() * (2.0 * li - z.ln() * z.ln_1p())))
}

/// `ρ(n,k)` (partitions of `n` into `k` distinct parts) and `p(n,k)` (into `k` parts).
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionTables {
    pub max_n: usize,
    pub max_k: usize,
    /// `rho[n][k]`.
    pub rho: Vec<Vec<BigUint>>,
    /// `p[n][k]`.
    pub p: Vec<Vec<BigUint>>,
}

pub const PARTITION_CELL_CAP: usize = 10_000;

pub fn partition_counts(max_n: usize, max_k: usize) -> Result<PartitionTables> {
    let cells = (max_n + 1) * (max_k + 1);
    if cells > PARTITION_CELL_CAP {
        return Err(Error::CapExceeded {
            what: "partition table cells",
            requested: cells as u64,
            cap: PARTITION_CELL_CAP as u64,
        });
    }
    let mut rho = vec![vec![BigUint::zero(); max_k + 1]; max_n + 1];
    let mut p = vec![vec![BigUint::zero(); max_k + 1]; max_n + 1];
    rho[0][0] = BigUint::one();
    p[0][0] = BigUint::one();
    for n in 1..=max_n {
        for k in 1..=max_k.min(n) {
            rho[n][k] = &rho[n - k][k] + &rho[n - k][k - 1];
            p[n][k] = &p[n - 1][k - 1] + &p[n - k][k];
        }
    }
    Ok(PartitionTables { max_n, max_k, rho, p })
}

impl PartitionTables {
    /// Whether `ρ(n,k) = p(n - C(k,2), k)` on every cell with `n >= C(k,2)`.
    pub fn shift_identity_holds(&self) -> bool {
        (0..=self.max_n).all(|n| {
            (0..=self.max_k).all(|k| {
                let shift = k * k.saturating_sub(1) / 2;
                n < shift || self.rho[n][k] == self.p[n - shift][k]
            })
        })
    }
}

/// Coefficients `[q^n z^k]` of `prod_{j=1}^{max_n} (1 + q^j z)`, truncated.
pub fn distinct_parts_gf(max_n: usize, max_k: usize) -> Vec<Vec<BigUint>> {
    let mut c = vec![vec![BigUint::zero(); max_k + 1]; max_n + 1];
    c[0][0] = BigUint::one();
    for j in 1..=max_n {
        for n in (j..=max_n).rev() {
            for k in (1..=max_k).rev() {
                let add = c[n - j][k - 1].clone();
                c[n][k] += add;
            }
        }
    }
    c
}

/// `N^{-1/2} ln ρ(round(t N), round(κ sqrt N))` for each `N`, next to the
/// `m → 0` ansatz value. A trend comparison only.
pub fn partition_trend(kappa: f64, t: f64, sizes: &[usize]) -> Result<Vec<(usize, f64, f64)>> {
    let (_, limit) = replica_to_zero(kappa, t)?;
    let max_n = sizes.iter().map(|&s| (t * s as f64).round() as usize).max().unwrap_or(0);
    let max_k = sizes
        .iter()
        .map(|&s| (kappa * (s as f64).sqrt()).round() as usize)
        .max()
        .unwrap_or(0);
    let tables = partition_counts(max_n, max_k)?;
    Ok(sizes
        .iter()
        .map(|&s| {
            let n = (t * s as f64).round() as usize;
            let k = (kappa * (s as f64).sqrt()).round() as usize;
            let v = LogReal::from_bigint(&tables.rho[n][k].clone().into()).logmag() / (s as f64).sqrt();
            (s, v, limit)
        })
        .collect())
}

/// Maximum over `t` of `κ ln(t/κ) - t + κ`, returned as `(argmax, max)`.
pub fn poisson_ld_check(kappa: f64) -> Result<(f64, f64)> {
    if kappa <= 0.0 {
        return domain(format!("κ must be positive (got {kappa})"));
    }
    let f = |t: f64| poisson_ld(kappa, t);
    let steps = 1000;
    let hi = 10.0 * kappa;
    let mut best = 1;
    for i in 1..=steps {
        if f(hi * i as f64 / steps as f64) > f(hi * best as f64 / steps as f64) {
            best = i;
        }
    }
    let lo_b = hi * (best - 1).max(1) as f64 / steps as f64;
    let hi_b = hi * (best + 1).min(steps) as f64 / steps as f64;
    Ok(golden_max(f, lo_b, hi_b, 1e-12 * kappa))
}

/// `κ ln(t/κ) - t + κ`.
pub fn poisson_ld(kappa: f64, t: f64) -> f64 {
    kappa * (t / kappa).ln() - t + kappa
}
