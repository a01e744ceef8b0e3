//! Scalar fields for the polynomial oracle.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num_traits::{One, Zero};

/// Exact field arithmetic on top of the `num-traits` identities.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// 0 for characteristic zero.
    const CHARACTERISTIC: u64;
    const NAME: &'static str;

    fn from_i64(x: i64) -> Self;

    /// Multiplicative inverse; `None` for zero.
    fn inverse(&self) -> Option<Self>;
}

impl Field for BigRational {
    const CHARACTERISTIC: u64 = 0;
    const NAME: &'static str = "rationals";

    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// The prime field with `P` elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Gf<const P: u64>(u64);

const fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

impl<const P: u64> Gf<P> {
    const CHECK: () = assert!(is_prime(P) && P < (1 << 31), "P must be a small prime");

    pub fn new(x: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::CHECK;
        Gf(x % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Gf::new(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Debug for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {P})", self.0)
    }
}

impl<const P: u64> fmt::Display for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Gf<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Gf((self.0 + o.0) % P)
    }
}

impl<const P: u64> Sub for Gf<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Gf((self.0 + P - o.0) % P)
    }
}

impl<const P: u64> Mul for Gf<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Gf(self.0 * o.0 % P)
    }
}

impl<const P: u64> Neg for Gf<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Gf((P - self.0) % P)
    }
}

impl<const P: u64> Zero for Gf<P> {
    fn zero() -> Self {
        Gf(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Gf<P> {
    fn one() -> Self {
        Gf::new(1)
    }
}

impl<const P: u64> Field for Gf<P> {
    const CHARACTERISTIC: u64 = P;
    const NAME: &'static str = if P == 2 {
        "gf2"
    } else if P == 3 {
        "gf3"
    } else {
        "gfp"
    };

    fn from_i64(x: i64) -> Self {
        Gf::new(x.rem_euclid(P as i64) as u64)
    }

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type F7 = Gf<7>;

    proptest! {
        #[test]
        fn gf_axioms(a in 0u64..7, b in 0u64..7, c in 0u64..7) {
            let (a, b, c) = (F7::new(a), F7::new(b), F7::new(c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a - b + b, a);
            prop_assert_eq!(a + (-a), F7::zero());
            if !a.is_zero() {
                prop_assert_eq!(a * a.inverse().unwrap(), F7::one());
            }
        }

        #[test]
        fn from_i64_is_a_ring_map(x in -1000i64..1000, y in -1000i64..1000) {
            prop_assert_eq!(F7::from_i64(x) * F7::from_i64(y), F7::from_i64(x * y));
            prop_assert_eq!(F7::from_i64(x) + F7::from_i64(y), F7::from_i64(x + y));
        }
    }

    #[test]
    fn characteristics() {
        assert_eq!(Gf::<2>::from_i64(2), Gf::<2>::zero());
        assert_eq!(Gf::<3>::from_i64(-1), Gf::<3>::new(2));
        assert_eq!(<BigRational as Field>::CHARACTERISTIC, 0);
        let half = BigRational::from_i64(2).inverse().unwrap();
        assert_eq!(half.to_string(), "1/2");
        assert!(BigRational::zero().inverse().is_none());
    }
}
