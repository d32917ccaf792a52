//! Exact coefficient arithmetic.
//!
//! Two coefficient fields are supported: arbitrary-precision rationals
//! (the default) and prime fields F_p selected per run. There is no
//! floating point anywhere in the engine; every scalar is exact.
//! Rationals are kept in lowest terms with a positive denominator (the
//! canonical form `num-rational` maintains).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

use crate::error::{EngineError, Result};

/// The coefficient field a model is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Rationals,
    /// F_p for a prime `p`. Arithmetic uses u128 intermediates, so any
    /// prime fitting in a u64 is fine.
    Prime(u64),
}

impl Field {
    /// Build an F_p field handle, rejecting non-primes.
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(EngineError::InvalidInput(format!(
                "{p} is not prime; prime fields require a prime modulus"
            )));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::zero()),
            Field::Prime(p) => Scalar::Mod { p: *p, v: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        self.integer(1)
    }

    /// The image of an integer in this field.
    pub fn integer(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Mod {
                p: *p,
                v: n.rem_euclid(*p as i64) as u64,
            },
        }
    }

    /// (-1)^exp as a scalar; the Koszul sign helper.
    pub fn sign(&self, exp: i64) -> Scalar {
        if exp.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.integer(-1)
        }
    }

    /// Parse an exact scalar: `p`, `-p`, or `p/q` over the rationals, a
    /// decimal residue over F_p.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = |why: &str| {
            EngineError::Catalog(format!("cannot parse scalar '{s}' over {self}: {why}"))
        };
        match self {
            Field::Rationals => {
                let (num_str, den_str) = match s.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (s, "1"),
                };
                let num: BigInt = num_str.trim().parse().map_err(|_| bad("bad numerator"))?;
                let den: BigInt = den_str.trim().parse().map_err(|_| bad("bad denominator"))?;
                if den.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            Field::Prime(p) => {
                let n: i128 = s.parse().map_err(|_| bad("expected an integer residue"))?;
                Ok(Scalar::Mod {
                    p: *p,
                    v: n.rem_euclid(*p as i128) as u64,
                })
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact element of the run's coefficient field.
///
/// Mixing scalars from different fields is a programming error (a single
/// catalog fixes one field per run) and panics; all user-facing paths go
/// through one `Field`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { p: u64, v: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Mod { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Mod { p, v: a }, Scalar::Mod { p: q, v: b }) => {
                assert_eq!(p, q, "scalar field mismatch");
                Scalar::Mod {
                    p: *p,
                    v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                }
            }
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod { p, v } => Scalar::Mod {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Mod { p, v: a }, Scalar::Mod { p: q, v: b }) => {
                assert_eq!(p, q, "scalar field mismatch");
                Scalar::Mod {
                    p: *p,
                    v: ((*a as u128 * *b as u128) % *p as u128) as u64,
                }
            }
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(EngineError::DivisionByZero(
                "inverse of the zero scalar".into(),
            ));
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Mod { p, v } => Scalar::Mod {
                p: *p,
                v: mod_pow(*v, p - 2, *p),
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inverse()?))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    acc as u64
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    // Deterministic Miller-Rabin for u64.
    let d = (n - 1) >> (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        let mut r = d;
        while r != n - 1 {
            x = (x as u128 * x as u128 % n as u128) as u64;
            r <<= 1;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
