//! Exact coefficient arithmetic over the rational numbers and prime fields.
//!
//! All arithmetic is exact; rationals are kept fully reduced with a positive
//! denominator (the canonical form `num_rational` maintains) and prime-field
//! values live in `[0, p)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Which coefficient field is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    /// The rational numbers.
    Q,
    /// The prime field with `p` elements, `p` prime and `p < 2^31`.
    Fp(u32),
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Q => write!(f, "Q"),
            FieldTag::Fp(p) => write!(f, "F{}", p),
        }
    }
}

impl FieldTag {
    pub fn validate(self) -> Result<Self> {
        match self {
            FieldTag::Q => Ok(self),
            FieldTag::Fp(p) => {
                if p < 2 || p >= (1 << 31) || !is_prime(p) {
                    Err(Error::Parse {
                        pos: 0,
                        msg: format!("{} is not a prime below 2^31", p),
                    })
                } else {
                    Ok(self)
                }
            }
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    let n = n as u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of the active coefficient field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Q(BigRational),
    Fp { p: u32, v: u32 },
}

impl FieldElem {
    pub fn tag(&self) -> FieldTag {
        match self {
            FieldElem::Q(_) => FieldTag::Q,
            FieldElem::Fp { p, .. } => FieldTag::Fp(*p),
        }
    }

    pub fn zero(tag: FieldTag) -> Self {
        match tag {
            FieldTag::Q => FieldElem::Q(BigRational::zero()),
            FieldTag::Fp(p) => FieldElem::Fp { p, v: 0 },
        }
    }

    pub fn one(tag: FieldTag) -> Self {
        match tag {
            FieldTag::Q => FieldElem::Q(BigRational::one()),
            FieldTag::Fp(p) => FieldElem::Fp { p, v: 1 },
        }
    }

    pub fn from_i64(tag: FieldTag, n: i64) -> Self {
        match tag {
            FieldTag::Q => FieldElem::Q(BigRational::from(BigInt::from(n))),
            FieldTag::Fp(p) => {
                let m = n.rem_euclid(p as i64) as u32;
                FieldElem::Fp { p, v: m }
            }
        }
    }

    pub fn from_bigint(tag: FieldTag, n: &BigInt) -> Self {
        match tag {
            FieldTag::Q => FieldElem::Q(BigRational::from(n.clone())),
            FieldTag::Fp(p) => {
                let m = n.mod_floor_u32(p);
                FieldElem::Fp { p, v: m }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_zero(),
            FieldElem::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_one(),
            FieldElem::Fp { v, .. } => *v == 1,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.tag() == other.tag() {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other).expect("field mismatch");
        match (self, other) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a + b),
            (FieldElem::Fp { p, v: a }, FieldElem::Fp { v: b, .. }) => FieldElem::Fp {
                p: *p,
                v: ((*a as u64 + *b as u64) % *p as u64) as u32,
            },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldElem::Q(a) => FieldElem::Q(-a),
            FieldElem::Fp { p, v } => FieldElem::Fp {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other).expect("field mismatch");
        match (self, other) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a * b),
            (FieldElem::Fp { p, v: a }, FieldElem::Fp { v: b, .. }) => FieldElem::Fp {
                p: *p,
                v: ((*a as u64 * *b as u64) % *p as u64) as u32,
            },
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(match self {
            FieldElem::Q(a) => FieldElem::Q(a.recip()),
            FieldElem::Fp { p, v } => FieldElem::Fp {
                p: *p,
                v: mod_inverse(*v, *p),
            },
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Deterministic ordering used only to canonicalize output, not algebra.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (FieldElem::Q(a), FieldElem::Q(b)) => a.cmp(b),
            (FieldElem::Fp { v: a, .. }, FieldElem::Fp { v: b, .. }) => a.cmp(b),
            (FieldElem::Q(_), _) => std::cmp::Ordering::Less,
            (_, FieldElem::Q(_)) => std::cmp::Ordering::Greater,
        }
    }
}

trait ModFloor {
    fn mod_floor_u32(&self, p: u32) -> u32;
}

impl ModFloor for BigInt {
    fn mod_floor_u32(&self, p: u32) -> u32 {
        use num_integer::Integer;
        let m = self.mod_floor(&BigInt::from(p));
        let (_, digits) = m.to_u32_digits();
        *digits.first().unwrap_or(&0)
    }
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    // extended Euclid on i64; p < 2^31 so no overflow
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "{} not invertible mod {}", a, p);
    t.rem_euclid(p as i64) as u32
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Fp { v, .. } => write!(f, "{}", v),
        }
    }
}

impl FieldElem {
    /// Numerator magnitude printed without sign, for term rendering.
    pub fn abs_display(&self) -> String {
        match self {
            FieldElem::Q(r) => {
                let n = r.numer().abs();
                if r.denom().is_one() {
                    format!("{}", n)
                } else {
                    format!("{}/{}", n, r.denom())
                }
            }
            FieldElem::Fp { v, .. } => format!("{}", v),
        }
    }

    /// Whether the canonical rendering starts with a minus sign.
    pub fn is_display_negative(&self) -> bool {
        match self {
            FieldElem::Q(r) => r.is_negative(),
            FieldElem::Fp { .. } => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_canonical_form() {
        let a = FieldElem::from_i64(FieldTag::Q, 4);
        let b = FieldElem::from_i64(FieldTag::Q, 6);
        let q = a.div(&b).unwrap();
        match q {
            FieldElem::Q(r) => {
                assert_eq!(r.numer(), &BigInt::from(2));
                assert_eq!(r.denom(), &BigInt::from(3));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn fp_wraps_and_inverts() {
        let t = FieldTag::Fp(7);
        let a = FieldElem::from_i64(t, -3);
        assert_eq!(a, FieldElem::Fp { p: 7, v: 4 });
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).is_one());
    }

    #[test]
    fn fp2_is_valid_field() {
        FieldTag::Fp(2).validate().unwrap();
        assert!(FieldTag::Fp(6).validate().is_err());
        assert!(FieldTag::Fp(1).validate().is_err());
    }

    #[test]
    fn zero_inverse_rejected() {
        assert_eq!(
            FieldElem::zero(FieldTag::Q).inv().unwrap_err(),
            Error::ZeroInput
        );
    }
}
