//! Arithmetic of exponents mod 2, exposed multiplicatively as signs `±1`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

/// A residue mod 2. `Parity::EVEN` corresponds to the sign `+1`,
/// `Parity::ODD` to `-1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Parity(bool);

impl Parity {
    pub const EVEN: Parity = Parity(false);
    pub const ODD: Parity = Parity(true);

    /// Parity of an integer (works for negative values).
    pub fn of(n: i64) -> Parity {
        Parity(n & 1 != 0)
    }

    /// Parity of a product, without forming the product.
    pub fn of_product(a: i64, b: i64) -> Parity {
        Parity((a & 1 != 0) && (b & 1 != 0))
    }

    /// Parity of the binomial coefficient `C(n, 2) = n(n-1)/2`.
    pub fn choose2(n: i64) -> Parity {
        // n(n-1)/2 is odd exactly when n ≡ 2, 3 mod 4.
        Parity(n.rem_euclid(4) == 2 || n.rem_euclid(4) == 3)
    }

    pub fn is_odd(self) -> bool {
        self.0
    }

    /// The sign `(-1)^self`.
    pub fn sign(self) -> i32 {
        if self.0 {
            -1
        } else {
            1
        }
    }

    /// Inverse of [`Parity::sign`]. Panics on values other than `±1`.
    pub fn from_sign(s: i32) -> Parity {
        match s {
            1 => Parity::EVEN,
            -1 => Parity::ODD,
            _ => panic!("sign must be +1 or -1, got {s}"),
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity(self.0 ^ rhs.0)
    }
}

impl AddAssign for Parity {
    fn add_assign(&mut self, rhs: Parity) {
        self.0 ^= rhs.0;
    }
}

impl Sum for Parity {
    fn sum<I: Iterator<Item = Parity>>(iter: I) -> Parity {
        iter.fold(Parity::EVEN, |a, b| a + b)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.0 { "-1" } else { "+1" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_of_sum_is_product_of_signs() {
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                let p = Parity::of(a) + Parity::of(b);
                assert_eq!(p.sign(), Parity::of(a).sign() * Parity::of(b).sign());
            }
        }
    }

    #[test]
    fn product_parity_matches_direct() {
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                assert_eq!(Parity::of_product(a, b), Parity::of(a * b));
            }
        }
    }

    #[test]
    fn choose2_matches_direct() {
        for n in 0i64..=40 {
            assert_eq!(Parity::choose2(n), Parity::of(n * (n - 1) / 2));
        }
    }
}
