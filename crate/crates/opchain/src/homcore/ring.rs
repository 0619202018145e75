//! Exact coefficient rings: the integers, the rationals, and prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::{Error, Result};

/// The ground ring of a computation. Everything downstream is exact; there
/// are no floating-point coefficients anywhere.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum CoefficientRing {
    Integers,
    Rationals,
    PrimeField(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A scalar in one of the three ring families. The variant must match the
/// ring it is used with; all arithmetic goes through [`CoefficientRing`].
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Mod(u64),
}

impl CoefficientRing {
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(CoefficientRing::PrimeField(p))
        } else {
            Err(Error::Validation(format!("{p} is not prime")))
        }
    }

    /// Ring tag used in JSON documents: "Z", "Q" or "Fp:<p>".
    pub fn tag(&self) -> String {
        match self {
            CoefficientRing::Integers => "Z".to_string(),
            CoefficientRing::Rationals => "Q".to_string(),
            CoefficientRing::PrimeField(p) => format!("Fp:{p}"),
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "Z" => Ok(CoefficientRing::Integers),
            "Q" => Ok(CoefficientRing::Rationals),
            _ => {
                if let Some(p) = tag.strip_prefix("Fp:") {
                    let p: u64 = p
                        .parse()
                        .map_err(|_| Error::Validation(format!("bad ring tag {tag}")))?;
                    CoefficientRing::prime_field(p)
                } else {
                    Err(Error::Validation(format!("bad ring tag {tag}")))
                }
            }
        }
    }

    /// CLI-facing ring names: "Z", "Q", "F2", "F3", ...
    pub fn from_cli_name(name: &str) -> Result<Self> {
        match name {
            "Z" => Ok(CoefficientRing::Integers),
            "Q" => Ok(CoefficientRing::Rationals),
            _ => {
                if let Some(p) = name.strip_prefix('F') {
                    let p: u64 = p
                        .parse()
                        .map_err(|_| Error::Validation(format!("unknown ring {name}")))?;
                    CoefficientRing::prime_field(p)
                } else {
                    Err(Error::Validation(format!("unknown ring {name}")))
                }
            }
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, CoefficientRing::Integers)
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            CoefficientRing::Integers => Scalar::Int(BigInt::from(v)),
            CoefficientRing::Rationals => Scalar::Rat(BigRational::from(BigInt::from(v))),
            CoefficientRing::PrimeField(p) => {
                let m = v.rem_euclid(*p as i64) as u64;
                Scalar::Mod(m)
            }
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            CoefficientRing::Integers => Scalar::Int(v.clone()),
            CoefficientRing::Rationals => Scalar::Rat(BigRational::from(v.clone())),
            CoefficientRing::PrimeField(p) => {
                let m = v.mod_floor(&BigInt::from(*p));
                Scalar::Mod(u64::try_from(m).expect("reduced residue fits"))
            }
        }
    }

    fn check(&self, a: &Scalar) {
        let ok = matches!(
            (self, a),
            (CoefficientRing::Integers, Scalar::Int(_))
                | (CoefficientRing::Rationals, Scalar::Rat(_))
                | (CoefficientRing::PrimeField(_), Scalar::Mod(_))
        );
        assert!(ok, "scalar {a:?} does not belong to ring {self:?}");
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.check(a);
        self.check(b);
        match (self, a, b) {
            (_, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (_, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (CoefficientRing::PrimeField(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod((x + y) % p)
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.check(a);
        match (self, a) {
            (_, Scalar::Int(x)) => Scalar::Int(-x),
            (_, Scalar::Rat(x)) => Scalar::Rat(-x),
            (CoefficientRing::PrimeField(p), Scalar::Mod(x)) => Scalar::Mod((p - x) % p),
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.check(a);
        self.check(b);
        match (self, a, b) {
            (_, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (_, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (CoefficientRing::PrimeField(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => unreachable!(),
        }
    }

    /// Multiplicative inverse, when it exists in the ring.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        self.check(a);
        match (self, a) {
            (CoefficientRing::Integers, Scalar::Int(x)) => {
                if x.abs().is_one() {
                    Some(Scalar::Int(x.clone()))
                } else {
                    None
                }
            }
            (CoefficientRing::Rationals, Scalar::Rat(x)) => {
                if x.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(x.recip()))
                }
            }
            (CoefficientRing::PrimeField(p), Scalar::Mod(x)) => {
                if *x == 0 {
                    None
                } else {
                    // Fermat: x^(p-2) mod p
                    let mut base = *x as u128;
                    let mut acc: u128 = 1;
                    let mut e = p - 2;
                    let m = *p as u128;
                    while e > 0 {
                        if e & 1 == 1 {
                            acc = acc * base % m;
                        }
                        base = base * base % m;
                        e >>= 1;
                    }
                    Some(Scalar::Mod(acc as u64))
                }
            }
            _ => unreachable!(),
        }
    }

    /// Exact division a / b, when the quotient lies in the ring.
    pub fn div_exact(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.check(a);
        self.check(b);
        match (self, a, b) {
            (CoefficientRing::Integers, Scalar::Int(x), Scalar::Int(y)) => {
                if y.is_zero() {
                    return None;
                }
                let (q, r) = x.div_rem(y);
                if r.is_zero() {
                    Some(Scalar::Int(q))
                } else {
                    None
                }
            }
            _ => self.inv(b).map(|bi| self.mul(a, &bi)),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        self.check(a);
        match a {
            Scalar::Int(x) => x.is_zero(),
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Mod(x) => *x == 0,
        }
    }

    /// Parses a scalar from its decimal form; "a/b" is accepted over Q.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let bad = || Error::Validation(format!("cannot parse scalar {s:?} over {}", self.tag()));
        match self {
            CoefficientRing::Integers => {
                let v: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Scalar::Int(v))
            }
            CoefficientRing::Rationals => {
                if let Some((n, d)) = s.split_once('/') {
                    let n: BigInt = n.parse().map_err(|_| bad())?;
                    let d: BigInt = d.parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(bad());
                    }
                    Ok(Scalar::Rat(BigRational::new(n, d)))
                } else {
                    let v: BigInt = s.parse().map_err(|_| bad())?;
                    Ok(Scalar::Rat(BigRational::from(v)))
                }
            }
            CoefficientRing::PrimeField(_) => {
                let v: BigInt = s.parse().map_err(|_| bad())?;
                Ok(self.from_bigint(&v))
            }
        }
    }

    /// Enumerates all ring elements for finite rings, `None` otherwise.
    pub fn enumerate(&self) -> Option<Vec<Scalar>> {
        match self {
            CoefficientRing::PrimeField(p) => Some((0..*p).map(Scalar::Mod).collect()),
            _ => None,
        }
    }
}

impl Scalar {
    /// Decimal rendering used in all serialized output.
    pub fn render(&self) -> String {
        match self {
            Scalar::Int(x) => x.to_string(),
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Mod(x) => x.to_string(),
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Scalar::Int(x) => Some(x),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(CoefficientRing::prime_field(2).is_ok());
        assert!(CoefficientRing::prime_field(97).is_ok());
        assert!(CoefficientRing::prime_field(1).is_err());
        assert!(CoefficientRing::prime_field(91).is_err()); // 7 * 13
    }

    #[test]
    fn field_inverse() {
        let f7 = CoefficientRing::PrimeField(7);
        for x in 1..7u64 {
            let inv = f7.inv(&Scalar::Mod(x)).unwrap();
            assert_eq!(f7.mul(&Scalar::Mod(x), &inv), Scalar::Mod(1));
        }
        let z = CoefficientRing::Integers;
        assert_eq!(z.inv(&z.from_i64(-1)), Some(z.from_i64(-1)));
        assert_eq!(z.inv(&z.from_i64(2)), None);
    }

    #[test]
    fn div_exact_over_z() {
        let z = CoefficientRing::Integers;
        assert_eq!(z.div_exact(&z.from_i64(6), &z.from_i64(3)), Some(z.from_i64(2)));
        assert_eq!(z.div_exact(&z.from_i64(3), &z.from_i64(2)), None);
        let q = CoefficientRing::Rationals;
        assert_eq!(
            q.div_exact(&q.from_i64(3), &q.from_i64(2)).unwrap(),
            q.parse("3/2").unwrap()
        );
    }

    #[test]
    fn parse_and_render() {
        let q = CoefficientRing::Rationals;
        let v = q.parse("-4/6").unwrap();
        assert_eq!(v.render(), "-2/3");
        let f3 = CoefficientRing::PrimeField(3);
        assert_eq!(f3.parse("5").unwrap(), Scalar::Mod(2));
        assert_eq!(f3.parse("-1").unwrap(), Scalar::Mod(2));
        assert_eq!(CoefficientRing::from_tag("Fp:5").unwrap(), CoefficientRing::PrimeField(5));
        assert_eq!(CoefficientRing::from_cli_name("F2").unwrap(), CoefficientRing::PrimeField(2));
    }
}
