//! Brute-force ground truth: permutation enumeration for `Z`-moments,
//! lattice-walk enumeration for `A(k,l,j)`, and small identities.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::limits::Limits;
use crate::numkernel::{binomial, factorial, multinomial, ExactRational};

/// Number of increasing subsequences of length `k` in `perm` (values `1..=n`).
pub fn count_increasing_subsequences(perm: &[usize], k: usize) -> Result<u128> {
    validate_permutation(perm)?;
    if k < 1 || k > perm.len() {
        return domain(format!("need 1 <= k <= n (k={k}, n={})", perm.len()));
    }
    Ok(z_profile(perm)[k])
}

fn validate_permutation(perm: &[usize]) -> Result<()> {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    for &v in perm {
        if v == 0 || v > n || seen[v] {
            return Err(Error::InvalidPermutation(format!("{perm:?} is not a permutation of 1..={n}")));
        }
        seen[v] = true;
    }
    Ok(())
}

/// `Z_{n,k}(π)` for every `k = 0..=n` (index 0 holds the empty subsequence count 1).
///
/// `ends[i][len]` counts increasing subsequences of length `len` ending at position `i`.
pub fn z_profile(perm: &[usize]) -> Vec<u128> {
    let n = perm.len();
    let mut ends = vec![vec![0u128; n + 1]; n];
    let mut z = vec![0u128; n + 1];
    z[0] = 1;
    for i in 0..n {
        ends[i][1] = 1;
        for p in 0..i {
            if perm[p] < perm[i] {
                for len in 2..=p + 2 {
                    ends[i][len] += ends[p][len - 1];
                }
            }
        }
        for len in 1..=i + 1 {
            z[len] += ends[i][len];
        }
    }
    z
}

/// Longest increasing subsequence length by patience sorting.
pub fn lis_length(perm: &[usize]) -> usize {
    let mut piles: Vec<usize> = Vec::new();
    for &v in perm {
        match piles.binary_search(&v) {
            Ok(_) => {}
            Err(pos) if pos == piles.len() => piles.push(v),
            Err(pos) => piles[pos] = v,
        }
    }
    piles.len()
}

/// Lexicographic successor in place; `false` after the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Visits every permutation of `1..=n` whose first entry is `first`.
fn for_each_with_first(n: usize, first: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = std::iter::once(first)
        .chain((1..=n).filter(|&v| v != first))
        .collect();
    loop {
        f(&p);
        if !next_permutation(&mut p[1..]) {
            break;
        }
    }
}

/// Sum over `S_n` of `g(Z-profile)`, partitioned by first entry and reduced in
/// prefix order. Exact integers, so the result is schedule independent.
fn sum_over_permutations(n: usize, g: impl Fn(&[u128]) -> BigInt + Sync) -> BigInt {
    if n == 0 {
        return g(&[1]);
    }
    let partials: Vec<BigInt> = (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut acc = BigInt::zero();
            for_each_with_first(n, first, |p| acc += g(&z_profile(p)));
            acc
        })
        .collect();
    partials.into_iter().sum()
}

/// `E[Z_{n,k_1} ⋯ Z_{n,k_m}]` over uniform `S_n` by full enumeration.
///
/// `order` is the number of factors; a single length with `order > 1`
/// means the power `E[Z_{n,k}^order]`.
pub fn brute_moments(n: usize, ks: &[usize], order: usize, limits: &Limits) -> Result<ExactRational> {
    if n > limits.perm_cap {
        return Err(Error::CapExceeded {
            what: "permutation enumeration",
            requested: n as u64,
            cap: limits.perm_cap as u64,
        });
    }
    if !(1..=3).contains(&order) {
        return domain(format!("order must be 1, 2 or 3 (got {order})"));
    }
    let factors: Vec<usize> = match ks.len() {
        1 => vec![ks[0]; order],
        m if m == order => ks.to_vec(),
        m => return domain(format!("{m} lengths given for a moment of order {order}")),
    };
    if factors.iter().any(|&k| k < 1 || k > n) {
        return domain(format!("lengths {factors:?} must lie in 1..={n}"));
    }
    let total = sum_over_permutations(n, |z| factors.iter().map(|&k| BigInt::from(z[k])).product());
    Ok(ExactRational::new(total, BigInt::from(factorial(n))))
}

/// All mixed moments `E[Z_{n,k} Z_{n,l}]` for `1 <= k, l <= n` from one enumeration.
pub fn brute_second_moment_table(n: usize, limits: &Limits) -> Result<Vec<Vec<ExactRational>>> {
    if n > limits.perm_cap || n == 0 {
        return Err(Error::CapExceeded {
            what: "permutation enumeration",
            requested: n as u64,
            cap: limits.perm_cap as u64,
        });
    }
    let partials: Vec<Vec<u128>> = (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut acc = vec![0u128; (n + 1) * (n + 1)];
            for_each_with_first(n, first, |p| {
                let z = z_profile(p);
                for k in 1..=n {
                    for l in 1..=n {
                        acc[k * (n + 1) + l] += z[k] * z[l];
                    }
                }
            });
            acc
        })
        .collect();
    let den = BigInt::from(factorial(n));
    Ok((1..=n)
        .map(|k| {
            (1..=n)
                .map(|l| {
                    let s: u128 = partials.iter().map(|p| p[k * (n + 1) + l]).sum();
                    ExactRational::new(BigInt::from(s), den.clone())
                })
                .collect()
        })
        .collect())
}

/// A 2-D nearest-neighbour walk of length `k + l` ending at `(k - l, 0)`,
/// with `j` additional axis-visit times beyond `t_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkSpec {
    pub length: usize,
    pub endpoint: (i64, i64),
    pub j: usize,
}

impl WalkSpec {
    pub fn new(k: usize, l: usize, j: usize) -> Self {
        WalkSpec {
            length: k + l,
            endpoint: (k as i64 - l as i64, 0),
            j,
        }
    }
}

const STEPS: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

/// `4^{k+l} * sum_{t_0 <= ... <= t_j = k+l} P(W_{k+l} = (k-l,0), W_{t_r} on the x-axis)`.
///
/// Enumerates every walk with the right endpoint; for each, counts the
/// non-decreasing `(j+1)`-tuples of axis-visit times whose last entry is
/// pinned to `k + l`. Without the pin the sum would overcount
/// (e.g. `(1,0,0)` would give 2 instead of `A(1,0,0) = 1`).
pub fn walk_count_a(k: usize, l: usize, j: usize, limits: &Limits) -> Result<BigInt> {
    let walk = WalkSpec::new(k, l, j);
    if walk.length > limits.walk_cap {
        return Err(Error::CapExceeded {
            what: "lattice-walk enumeration",
            requested: walk.length as u64,
            cap: limits.walk_cap as u64,
        });
    }
    let mut total = BigInt::zero();
    walk_dfs(&walk, 0, (0, 0), 1, &mut |axis_times| {
        total += count_pinned_tuples(axis_times, walk.j);
    });
    Ok(total)
}

/// The same walk sum with `t_j` left free: non-decreasing `(j+1)`-tuples of
/// axis-visit times. Differs from `A(k, l, j)` already at `(1, 0, 0)`.
pub fn walk_count_unpinned(k: usize, l: usize, j: usize, limits: &Limits) -> Result<BigInt> {
    let walk = WalkSpec::new(k, l, j);
    if walk.length > limits.walk_cap {
        return Err(Error::CapExceeded {
            what: "lattice-walk enumeration",
            requested: walk.length as u64,
            cap: limits.walk_cap as u64,
        });
    }
    let mut total = BigInt::zero();
    walk_dfs(&walk, 0, (0, 0), 1, &mut |axis_times| {
        total += binomial((axis_times + j) as u64, (j + 1) as i64);
    });
    Ok(total)
}

fn walk_dfs(
    walk: &WalkSpec,
    t: usize,
    pos: (i64, i64),
    axis_count: usize,
    on_walk: &mut impl FnMut(usize),
) {
    if t == walk.length {
        if pos == walk.endpoint {
            on_walk(axis_count);
        }
        return;
    }
    let remaining = (walk.length - t) as i64;
    for (dx, dy) in STEPS {
        let next = (pos.0 + dx, pos.1 + dy);
        let dist = (next.0 - walk.endpoint.0).abs() + (next.1 - walk.endpoint.1).abs();
        if dist > remaining - 1 {
            continue;
        }
        let on_axis = usize::from(next.1 == 0);
        walk_dfs(walk, t + 1, next, axis_count + on_axis, on_walk);
    }
}

/// Non-decreasing tuples `t_0 <= ... <= t_{j-1}` drawn from `axis_times`
/// distinct axis times (the final `t_j` is pinned): multisets of size `j`.
fn count_pinned_tuples(axis_times: usize, j: usize) -> BigInt {
    if j == 0 {
        return BigInt::from(1);
    }
    binomial((axis_times + j - 1) as u64, j as i64)
}

/// `sum_n multinomial(l+m; n, n, l-n, m-n) == C(l+m, l)^2`.
pub fn check_gamma2_identity(l: usize, m: usize) -> bool {
    let lhs: BigInt = (0..=l.min(m))
        .map(|n| multinomial(&[n as u64, n as u64, (l - n) as u64, (m - n) as u64]))
        .sum();
    let c = binomial((l + m) as u64, l as i64);
    lhs == &c * &c
}
