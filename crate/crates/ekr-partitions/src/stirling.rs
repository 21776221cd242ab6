//! Stirling numbers of the second kind and the growth bounds built on them.
//!
//! `stirling` is the number source of record (memoized recurrence); the
//! explicit alternating sum is kept as an independent oracle. Threshold
//! predicates are evaluated by clearing logarithms to integer powers, so no
//! floating point is involved anywhere.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

/// Rows 0..=512 are memoized; larger n falls back to a rolling row.
const MEMO_ROWS: usize = 513;

static TABLE: OnceLock<RwLock<Vec<Vec<BigInt>>>> = OnceLock::new();

fn table() -> &'static RwLock<Vec<Vec<BigInt>>> {
    TABLE.get_or_init(|| RwLock::new(vec![vec![BigInt::one()]]))
}

/// S(n, k), the number of partitions of an n-set into k non-empty blocks.
///
/// Conventions: S(0, 0) = 1; zero whenever k <= 0 < n, k > n, or an argument
/// is negative. Signed arguments let size formulas pass differences through
/// without case analysis.
pub fn stirling(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 {
        return BigInt::zero();
    }
    if k == 0 {
        return if n == 0 { BigInt::one() } else { BigInt::zero() };
    }
    if k > n {
        return BigInt::zero();
    }
    let (n, k) = (n as usize, k as usize);
    if n < MEMO_ROWS {
        memoized(n, k)
    } else {
        rolling(n, k)
    }
}

fn memoized(n: usize, k: usize) -> BigInt {
    {
        let t = table().read().unwrap();
        if n < t.len() {
            return t[n][k].clone();
        }
    }
    let mut t = table().write().unwrap();
    while t.len() <= n {
        let m = t.len();
        let row = {
            let prev = t.last().unwrap();
            let mut row = Vec::with_capacity(m + 1);
            row.push(BigInt::zero());
            for j in 1..m {
                row.push(&prev[j - 1] + &prev[j] * (j as u64));
            }
            row.push(BigInt::one());
            row
        };
        t.push(row);
    }
    t[n][k].clone()
}

/// S(n, k) with O(k) memory, for n past the memo cap.
fn rolling(n: usize, k: usize) -> BigInt {
    let mut row = vec![BigInt::zero(); k + 1];
    row[0] = BigInt::one();
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = &row[j - 1] + &row[j] * (j as u64);
        }
        row[0] = BigInt::zero();
    }
    row[k].clone()
}

/// Independent oracle: S(n, k) = (1/k!) * sum_j (-1)^j C(k, j) (k-j)^n.
pub fn stirling_explicit(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 {
        return BigInt::zero();
    }
    if k == 0 {
        return if n == 0 { BigInt::one() } else { BigInt::zero() };
    }
    let mut sum = BigInt::zero();
    for j in 0..=k {
        let term = binomial(k, j) * BigInt::from(k - j).pow(n as u64);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (q, r) = num_integer::Integer::div_rem(&sum, &factorial(k as u64));
    debug_assert!(r.is_zero(), "alternating sum not divisible by k!");
    q
}

/// C(n, k); zero outside 0 <= k <= n.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Lower bound (r^2 + r + 2) r^(n-r-1) / 2 - 1 for S(n, r), valid for
/// 1 <= r < n. Exact rational so tight cases compare cleanly.
pub fn rennie_dobson_lower(n: u32, r: u32) -> BigRational {
    assert!(1 <= r && r < n, "need 1 <= r < n");
    let r_big = BigInt::from(r);
    let poly = &r_big * &r_big + &r_big + 2;
    let power = BigInt::from(r).pow((n - r - 1) as u64);
    BigRational::new(poly * power, BigInt::from(2)) - BigRational::one()
}

/// Whether S(n, k) >= (2^((n-1)/(k-1)) - 1) S(n-1, k-1), checked in the
/// integer-exact form (S(n,k) + S(n-1,k-1))^(k-1) >= 2^(n-1) S(n-1,k-1)^(k-1).
pub fn ratio_bound_holds(n: u32, k: u32) -> bool {
    assert!(2 <= k && k <= n, "need n >= k >= 2");
    let s = stirling(n as i64, k as i64);
    let s_prev = stirling(n as i64 - 1, k as i64 - 1);
    let lhs = (s + &s_prev).pow((k - 1) as u64);
    let rhs = (BigInt::one() << (n - 1)) * s_prev.pow((k - 1) as u64);
    lhs >= rhs
}

/// Same comparison but with both sides returned, for tightness reporting.
pub fn ratio_bound_sides(n: u32, k: u32) -> (BigInt, BigInt) {
    let s = stirling(n as i64, k as i64);
    let s_prev = stirling(n as i64 - 1, k as i64 - 1);
    let lhs = (s + &s_prev).pow((k - 1) as u64);
    let rhs = (BigInt::one() << (n - 1)) * s_prev.pow((k - 1) as u64);
    (lhs, rhs)
}

/// ((t+1)(k-t+1))^(k-t+1), the cleared form of the threshold
/// L(k, t) = (t+1) + (k-t+1) log2((t+1)(k-t+1)).
fn l_threshold_power(k: i64, t: i64) -> BigInt {
    BigInt::from((t + 1) * (k - t + 1)).pow((k - t + 1) as u64)
}

/// Whether n >= L(k, t), as the integer comparison
/// 2^(n-t-1) >= ((t+1)(k-t+1))^(k-t+1).
pub fn meets_l(n: i64, k: i64, t: i64) -> bool {
    assert!(1 <= t && t < k, "need 1 <= t < k");
    if n - t - 1 < 0 {
        return false;
    }
    (BigInt::one() << (n - t - 1) as u64) >= l_threshold_power(k, t)
}

/// Whether n >= 2 L(k, t), as the integer comparison
/// 2^(n-2(t+1)) >= ((t+1)(k-t+1))^(2(k-t+1)).
pub fn meets_2l(n: i64, k: i64, t: i64) -> bool {
    assert!(1 <= t && t < k, "need 1 <= t < k");
    if n - 2 * (t + 1) < 0 {
        return false;
    }
    (BigInt::one() << (n - 2 * (t + 1)) as u64) >= l_threshold_power(k, t).pow(2u32)
}

/// Smallest n with n >= L(k, t).
pub fn min_n_for_l(k: i64, t: i64) -> i64 {
    min_n(t + 1, l_threshold_power(k, t))
}

/// Smallest n with n >= 2 L(k, t).
pub fn min_n_for_2l(k: i64, t: i64) -> i64 {
    min_n(2 * (t + 1), l_threshold_power(k, t).pow(2u32))
}

/// Smallest n with 2^(n - offset) >= power.
fn min_n(offset: i64, power: BigInt) -> i64 {
    debug_assert!(power.is_positive());
    let bits = power.bits() as i64;
    // 2^(bits-1) <= power < 2^bits, with equality on the left iff power is a
    // power of two.
    let exact = (BigInt::one() << (bits - 1) as u64) == power;
    offset + if exact { bits - 1 } else { bits }
}
