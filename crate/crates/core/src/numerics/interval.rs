use alloc::vec::Vec;

use crate::{Error, Result};

/// A closed interval of the extended real line, or the empty set.
///
/// Non-empty intervals satisfy `lo <= hi`; either end may be infinite. The
/// empty interval is stored as `[+∞, -∞]`, which makes intersection a plain
/// max/min.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const EMPTY: Interval = Interval {
        lo: f64::INFINITY,
        hi: f64::NEG_INFINITY,
    };

    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Unchecked constructor for constants.
    pub(crate) const fn raw(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// `[-half, half]`.
    pub fn symmetric(half: f64) -> Result<Self> {
        Interval::new(-half, half)
    }

    pub fn point(x: f64) -> Result<Self> {
        Interval::new(x, x)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.is_empty() || (self.lo.is_finite() && self.hi.is_finite())
    }

    pub fn is_real_line(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }

    pub fn length(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.is_empty() || (self.lo <= other.lo && other.hi <= self.hi)
    }

    pub fn intersection(&self, other: &Interval) -> Interval {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo > hi {
            Interval::EMPTY
        } else {
            Interval { lo, hi }
        }
    }

    /// Disjoint up to a shared endpoint (a null set for every measure here).
    pub fn is_disjoint(&self, other: &Interval) -> bool {
        let common = self.intersection(other);
        common.is_empty() || common.length() == 0.0
    }

    pub fn shifted(&self, s: f64) -> Interval {
        if self.is_empty() {
            *self
        } else {
            Interval {
                lo: self.lo + s,
                hi: self.hi + s,
            }
        }
    }

    /// Reflection `x -> -x`.
    pub fn reflected(&self) -> Interval {
        if self.is_empty() {
            *self
        } else {
            Interval {
                lo: -self.hi,
                hi: -self.lo,
            }
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Split a bounded interval into `n` equal, adjacent pieces.
    pub fn partition(&self, n: usize) -> Result<Vec<Interval>> {
        if !self.is_bounded() {
            return Err(Error::UnboundedInterval);
        }
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "bins",
                value: 0.0,
            });
        }
        if self.is_empty() {
            return Ok(Vec::new());
        }
        let width = self.length() / n as f64;
        Ok((0..n)
            .map(|i| {
                let lo = if i == 0 {
                    self.lo
                } else {
                    self.lo + width * i as f64
                };
                let hi = if i + 1 == n {
                    self.hi
                } else {
                    self.lo + width * (i + 1) as f64
                };
                Interval { lo, hi }
            })
            .collect())
    }

    /// The parts of the interval with `x <= 0` and `x >= 0`.
    pub fn split_at_zero(&self) -> (Interval, Interval) {
        let neg = self.intersection(&Interval {
            lo: f64::NEG_INFINITY,
            hi: 0.0,
        });
        let pos = self.intersection(&Interval {
            lo: 0.0,
            hi: f64::INFINITY,
        });
        (neg, pos)
    }
}

impl core::fmt::Display for Interval {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_reversed_and_nan() {
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(f64::NAN, 0.0).is_err());
        assert!(Interval::new(f64::INFINITY, f64::INFINITY).is_err());
        assert!(Interval::new(f64::NEG_INFINITY, 2.0).is_ok());
    }

    #[test]
    fn empty_behaves_as_bottom() {
        let a = Interval::new(0.0, 1.0).unwrap();
        assert_eq!(Interval::EMPTY.length(), 0.0);
        assert_eq!(a.intersection(&Interval::EMPTY), Interval::EMPTY);
        assert!(a.is_disjoint(&Interval::EMPTY));
        assert_eq!(a.hull(&Interval::EMPTY), a);
        assert!(a.contains_interval(&Interval::EMPTY));
    }

    #[test]
    fn infinite_length() {
        assert_eq!(Interval::REAL_LINE.length(), f64::INFINITY);
        assert!(!Interval::REAL_LINE.is_bounded());
        assert!(Interval::REAL_LINE.is_real_line());
    }

    #[test]
    fn touching_intervals_are_disjoint() {
        let a = Interval::new(0.0, 1.0).unwrap();
        let b = Interval::new(1.0, 2.0).unwrap();
        let c = Interval::new(0.5, 2.0).unwrap();
        assert!(a.is_disjoint(&b));
        assert!(!a.is_disjoint(&c));
    }

    #[test]
    fn partition_covers_exactly() {
        let a = Interval::new(-2.0, 2.0).unwrap();
        let bins = a.partition(64).unwrap();
        assert_eq!(bins.len(), 64);
        assert_eq!(bins[0].lo(), -2.0);
        assert_eq!(bins[63].hi(), 2.0);
        for w in bins.windows(2) {
            assert_eq!(w[0].hi(), w[1].lo());
        }
        assert!(Interval::REAL_LINE.partition(4).is_err());
    }

    #[test]
    fn split_at_zero_halves() {
        let a = Interval::new(-1.0, 3.0).unwrap();
        let (n, p) = a.split_at_zero();
        assert_eq!(n, Interval::new(-1.0, 0.0).unwrap());
        assert_eq!(p, Interval::new(0.0, 3.0).unwrap());
        let (n, _) = Interval::new(2.0, 3.0).unwrap().split_at_zero();
        assert!(n.is_empty());
    }

    proptest! {
        #[test]
        fn intersection_is_commutative_and_contained(
            a in -10.0f64..10.0, la in 0.0f64..5.0,
            b in -10.0f64..10.0, lb in 0.0f64..5.0,
        ) {
            let x = Interval::new(a, a + la).unwrap();
            let y = Interval::new(b, b + lb).unwrap();
            let i = x.intersection(&y);
            prop_assert_eq!(i, y.intersection(&x));
            prop_assert!(x.contains_interval(&i) && y.contains_interval(&i));
            prop_assert!(i.length() >= 0.0);
            let disjoint = (a + la) <= b || (b + lb) <= a;
            prop_assert_eq!(x.is_disjoint(&y), disjoint);
        }
    }
}
