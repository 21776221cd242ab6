//! Directed-rounding interval arithmetic over exact rationals.
//!
//! Inequalities whose sides mix rational values with log2 of integers cannot
//! be settled by clearing denominators when logs multiply each other. Those
//! comparisons run here instead: every endpoint is an exact rational, every
//! rounding step is outward, so an interval verdict is conservative. An
//! overlap is answered with None and callers escalate the precision; for the
//! values arising here (logs of non-powers-of-two) escalation always
//! separates the sides eventually.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A closed interval [lo, hi] certified to contain the exact value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl DyadicInterval {
    pub fn point(x: BigRational) -> Self {
        DyadicInterval { lo: x.clone(), hi: x }
    }

    pub fn from_int(x: i64) -> Self {
        DyadicInterval::point(BigRational::from_integer(BigInt::from(x)))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn add(&self, other: &Self) -> Self {
        DyadicInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        DyadicInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let corners = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = corners.iter().min().unwrap().clone();
        let hi = corners.iter().max().unwrap().clone();
        DyadicInterval { lo, hi }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_negative() {
            DyadicInterval {
                lo: &self.hi * c,
                hi: &self.lo * c,
            }
        } else {
            DyadicInterval {
                lo: &self.lo * c,
                hi: &self.hi * c,
            }
        }
    }

    /// Certified strict `self < other`: Some(true) when the intervals
    /// separate that way, Some(false) when they separate the other way
    /// (including touching, which refutes strictness), None on overlap.
    pub fn lt(&self, other: &Self) -> Option<bool> {
        if self.hi < other.lo {
            Some(true)
        } else if self.lo >= other.hi {
            Some(false)
        } else {
            None
        }
    }

    /// Certified `self >= other`.
    pub fn ge(&self, other: &Self) -> Option<bool> {
        if self.lo >= other.hi {
            Some(true)
        } else if self.hi < other.lo {
            Some(false)
        } else {
            None
        }
    }
}

/// Certified enclosure of log2(a) for a >= 1, with about `bits` fraction
/// bits unless the bit-extraction loop hits an unresolved boundary first.
///
/// Powers of two return a point interval. Otherwise a = 2^e * m with m in
/// [1, 2); the binary digits of log2(m) come from repeated squaring in
/// fixed-point, one channel rounding down and one up, stopping (with the
/// remaining range as the enclosure) if the two channels ever disagree on
/// whether the square reached 2.
pub fn log2_int(a: &BigInt, bits: u32) -> DyadicInterval {
    assert!(a >= &BigInt::one(), "log2 needs a positive integer");
    let e = a.bits() - 1;
    if a == &(BigInt::one() << e) {
        return DyadicInterval::point(BigRational::from_integer(BigInt::from(e)));
    }
    let f = bits as u64;
    debug_assert!(f > e, "fraction field must hold the mantissa shift");
    // m in fixed point with f fraction bits; exact since f > e.
    let mut lo = a << (f - e);
    let mut hi = lo.clone();
    let one = BigInt::one() << f;
    let two = &one << 1u32;

    let mut acc = BigRational::zero();
    let mut scale = BigRational::new(BigInt::one(), BigInt::from(2));
    for _ in 0..bits {
        lo = (&lo * &lo) >> f;
        hi = ((&hi * &hi) + (&one - 1u32)) >> f;
        let lo_reached = lo >= two;
        let hi_reached = hi >= two;
        if lo_reached != hi_reached {
            // Boundary unresolved at this precision: the digit and all
            // later ones are unknown, so close with the remaining range.
            let hi_acc = &acc + &scale * BigInt::from(2);
            return DyadicInterval {
                lo: BigRational::from_integer(BigInt::from(e)) + acc,
                hi: BigRational::from_integer(BigInt::from(e)) + hi_acc,
            };
        }
        if lo_reached {
            acc += &scale;
            lo >>= 1u32;
            hi = (&hi + 1u32) >> 1u32;
        }
        scale /= BigInt::from(2);
    }
    let e = BigRational::from_integer(BigInt::from(e));
    DyadicInterval {
        lo: &e + &acc,
        hi: e + acc + scale * BigInt::from(2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn powers_of_two_are_points() {
        for (a, e) in [(1i64, 0i64), (2, 1), (4, 2), (1024, 10)] {
            let iv = log2_int(&BigInt::from(a), 64);
            assert_eq!(iv.lo, BigRational::from_integer(BigInt::from(e)));
            assert_eq!(iv.hi, iv.lo);
        }
    }

    #[test]
    fn log2_three_brackets_truth() {
        // log2(3) = 1.5849625007...
        let iv = log2_int(&BigInt::from(3), 64);
        assert!(iv.lo < rat(15849625008, 10000000000));
        assert!(iv.hi > rat(15849625007, 10000000000));
        assert!(iv.lo > rat(15, 10));
        assert!(iv.hi < rat(16, 10));
        assert!(iv.width() < rat(1, 1 << 60));
    }

    #[test]
    fn widths_shrink_under_escalation() {
        let coarse = log2_int(&BigInt::from(1000003), 32);
        let fine = log2_int(&BigInt::from(1000003), 256);
        assert!(fine.width() < coarse.width());
        assert!(fine.lo >= coarse.lo && fine.hi <= coarse.hi || fine.lo >= coarse.lo);
        // Both bracket log2(1000003) ~ 19.93157.
        assert!(coarse.lo < rat(1993158, 100000) && coarse.hi > rat(1993157, 100000));
    }

    #[test]
    fn arithmetic_is_outward() {
        let a = log2_int(&BigInt::from(3), 64);
        let b = log2_int(&BigInt::from(5), 64);
        // log2(3) + log2(5) = log2(15)
        let sum = a.add(&b);
        let direct = log2_int(&BigInt::from(15), 64);
        assert!(sum.lo <= direct.hi && direct.lo <= sum.hi);
        // 2 * log2(3) = log2(9)
        let doubled = a.scale(&rat(2, 1));
        let nine = log2_int(&BigInt::from(9), 64);
        assert!(doubled.lo <= nine.hi && nine.lo <= doubled.hi);
        // log2(3) * log2(5) = 3.68014...
        let product = a.mul(&b);
        assert!(product.lo < rat(36802, 10000) && product.hi > rat(36801, 10000));
    }

    #[test]
    fn comparisons_are_certified() {
        let three = log2_int(&BigInt::from(3), 64);
        let five = log2_int(&BigInt::from(5), 64);
        assert_eq!(three.lt(&five), Some(true));
        assert_eq!(five.lt(&three), Some(false));
        assert_eq!(five.ge(&three), Some(true));
        let wide = DyadicInterval {
            lo: rat(1, 1),
            hi: rat(3, 1),
        };
        assert_eq!(wide.lt(&three), None);
    }
}
