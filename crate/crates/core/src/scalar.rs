//! Exact scalar rings: `Z/p`, `Q` and `Z`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative scalar ring with trivial conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    /// Integers modulo a prime `p`.
    Zp(u32),
    Q,
    Z,
}

impl Ring {
    pub const Z2: Ring = Ring::Zp(2);

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Z)
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Ring::Zp(p) => *p,
            _ => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match self {
            Ring::Zp(p) => Scalar::Mod { p: *p, v: n.rem_euclid(*p as i64) as u32 },
            Ring::Q => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Ring::Z => Scalar::Int(BigInt::from(n)),
        }
    }

    /// Interprets `num / den` in this ring. Fails when the denominator is not
    /// invertible (zero, divisible by `p`, or non-unit in `Z`).
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Option<Scalar> {
        if den.is_zero() {
            return None;
        }
        match self {
            Ring::Zp(p) => {
                let pb = BigInt::from(*p);
                let n = num.mod_floor(&pb).to_u32()?;
                let d = den.mod_floor(&pb).to_u32()?;
                let dinv = Scalar::Mod { p: *p, v: d }.inverse()?;
                Some(&Scalar::Mod { p: *p, v: n } * &dinv)
            }
            Ring::Q => Some(Scalar::Rat(BigRational::new(num.clone(), den.clone()))),
            Ring::Z => {
                let (q, r) = num.div_rem(den);
                r.is_zero().then_some(Scalar::Int(q))
            }
        }
    }

    /// Name used by the description language (`Z2`, `Z5`, `Q`, `Z`).
    pub fn name(&self) -> String {
        match self {
            Ring::Zp(p) => format!("Z{p}"),
            Ring::Q => "Q".into(),
            Ring::Z => "Z".into(),
        }
    }

    pub fn parse(name: &str) -> Option<Ring> {
        match name {
            "Q" => Some(Ring::Q),
            "Z" => Some(Ring::Z),
            _ => {
                let p: u32 = name.strip_prefix('Z')?.parse().ok()?;
                is_prime(p).then_some(Ring::Zp(p))
            }
        }
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// An exact scalar tagged with its ring.
///
/// `Z/p` values are kept in `[0, p)` and rationals in lowest terms.
/// Mixing scalars of different rings is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Mod { p: u32, v: u32 },
    Rat(BigRational),
    Int(BigInt),
}

impl Scalar {
    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Mod { p, .. } => Ring::Zp(*p),
            Scalar::Rat(_) => Ring::Q,
            Scalar::Int(_) => Ring::Z,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { v, .. } => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Int(n) => n.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { v, .. } => *v == 1,
            Scalar::Rat(r) => r.is_one(),
            Scalar::Int(n) => n.is_one(),
        }
    }

    /// True for values printed with a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Mod { .. } => false,
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Int(n) => n.is_negative(),
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Mod { p, v } => {
                if *v == 0 {
                    return None;
                }
                // Fermat: v^(p-2)
                let (p64, mut base, mut exp, mut acc) = (*p as u64, *v as u64, *p as u64 - 2, 1u64);
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % p64;
                    }
                    base = base * base % p64;
                    exp >>= 1;
                }
                Some(Scalar::Mod { p: *p, v: acc as u32 })
            }
            Scalar::Rat(r) => (!r.is_zero()).then(|| Scalar::Rat(r.recip())),
            Scalar::Int(n) => {
                if n.is_one() || (-n).is_one() {
                    Some(Scalar::Int(n.clone()))
                } else {
                    None
                }
            }
        }
    }

    /// Lifts the scalar to a rational number (residues map to their representative).
    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Mod { v, .. } => BigRational::from_integer(BigInt::from(*v)),
            Scalar::Rat(r) => r.clone(),
            Scalar::Int(n) => BigRational::from_integer(n.clone()),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar ring mismatch: {} vs {}", a.ring(), b.ring())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { p, v }, Scalar::Mod { p: q, v: w }) if p == q => {
                Scalar::Mod { p: *p, v: ((*v as u64 + *w as u64) % *p as u64) as u32 }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { p, v }, Scalar::Mod { p: q, v: w }) if p == q => {
                Scalar::Mod { p: *p, v: ((*v as u64 * *w as u64) % *p as u64) as u32 }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { p, v } => Scalar::Mod { p: *p, v: (*p - *v) % *p },
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Int(a) => Scalar::Int(-a),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { v, .. } => write!(f, "{v}"),
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Int(n) => write!(f, "{n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_stay_reduced() {
        let r = Ring::Zp(5);
        let a = r.from_int(-7);
        assert_eq!(a, Scalar::Mod { p: 5, v: 3 });
        assert_eq!(&a * &a.inverse().unwrap(), r.one());
        assert!((&r.from_int(2) + &r.from_int(3)).is_zero());
    }

    #[test]
    fn characteristic_two_addition() {
        let one = Ring::Z2.one();
        assert!((&one + &one).is_zero());
        assert_eq!(-&one, one);
    }

    #[test]
    fn rationals_in_lowest_terms() {
        let half = Ring::Q.from_fraction(&BigInt::from(2), &BigInt::from(4)).unwrap();
        assert_eq!(half.to_string(), "1/2");
        assert_eq!(&half + &half, Ring::Q.one());
    }

    #[test]
    fn fractions_in_finite_fields_and_integers() {
        let third = Ring::Zp(7).from_fraction(&BigInt::from(1), &BigInt::from(3)).unwrap();
        assert_eq!(&third * &Ring::Zp(7).from_int(3), Ring::Zp(7).one());
        assert!(Ring::Zp(3).from_fraction(&BigInt::from(1), &BigInt::from(3)).is_none());
        assert!(Ring::Z.from_fraction(&BigInt::from(1), &BigInt::from(2)).is_none());
        assert_eq!(Ring::Z.from_fraction(&BigInt::from(6), &BigInt::from(-2)), Some(Ring::Z.from_int(-3)));
    }

    #[test]
    fn ring_names() {
        assert_eq!(Ring::parse("Z2"), Some(Ring::Z2));
        assert_eq!(Ring::parse("Z4"), None);
        assert_eq!(Ring::parse("Q"), Some(Ring::Q));
        assert_eq!(Ring::Zp(11).name(), "Z11");
    }
}
