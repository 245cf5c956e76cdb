//! Exact arithmetic in ℤ, the Gaussian integers ℤ[i] and the Eisenstein
//! integers ℤ[ω].
//!
//! Every element carries its ring tag and a pair of arbitrary-precision
//! coordinates `(a, b)` read as `a`, `a + b·i` or `a + b·ω` with
//! `ω² = −1 − ω`. Mixing rings in an operator is a programming error and
//! panics; the fallible entry points ([`RingElement::exact_div`]) report it.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::FriezeError;

/// Which ring an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Ring {
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "Zi")]
    Zi,
    #[serde(rename = "Zw")]
    Zw,
}

impl Ring {
    pub fn name(self) -> &'static str {
        match self {
            Ring::Z => "Z",
            Ring::Zi => "Zi",
            Ring::Zw => "Zw",
        }
    }

    pub fn one(self) -> RingElement {
        RingElement::from_coords(self, BigInt::one(), BigInt::zero())
    }

    pub fn zero(self) -> RingElement {
        RingElement::from_coords(self, BigInt::zero(), BigInt::zero())
    }

    pub fn int(self, n: i64) -> RingElement {
        RingElement::from_coords(self, BigInt::from(n), BigInt::zero())
    }

    /// The units of the ring, in canonical order.
    pub fn units(self) -> Vec<RingElement> {
        let mut out: Vec<RingElement> = match self {
            Ring::Z => vec![self.int(1), self.int(-1)],
            Ring::Zi | Ring::Zw => elements_with_norm_at_most(self, &BigInt::one())
                .into_iter()
                .filter(|x| !x.is_zero())
                .collect(),
        };
        out.sort();
        out
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ring {
    type Err = FriezeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Z" => Ok(Ring::Z),
            "Zi" => Ok(Ring::Zi),
            "Zw" => Ok(Ring::Zw),
            other => Err(FriezeError::InvalidInput(format!("unknown ring `{other}`"))),
        }
    }
}

/// An element of ℤ, ℤ[i] or ℤ[ω].
///
/// Ordering is by ring, then by norm, then by coordinates. This gives the
/// canonical order used for divisor lists and frieze deduplication.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: Ring,
    a: BigInt,
    b: BigInt,
}

impl RingElement {
    /// Builds an element from coordinates. For ℤ the second coordinate must be 0.
    pub fn from_coords(ring: Ring, a: BigInt, b: BigInt) -> Self {
        assert!(
            ring != Ring::Z || b.is_zero(),
            "integer element with non-zero imaginary coordinate"
        );
        RingElement { ring, a, b }
    }

    pub fn new(ring: Ring, a: i64, b: i64) -> Self {
        Self::from_coords(ring, BigInt::from(a), BigInt::from(b))
    }

    pub fn integer(n: i64) -> Self {
        Self::new(Ring::Z, n, 0)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn coords(&self) -> (&BigInt, &BigInt) {
        (&self.a, &self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// `|a|` in ℤ, `a²+b²` in ℤ[i], `a²−ab+b²` in ℤ[ω].
    pub fn norm(&self) -> BigInt {
        match self.ring {
            Ring::Z => self.a.abs(),
            Ring::Zi => &self.a * &self.a + &self.b * &self.b,
            Ring::Zw => &self.a * &self.a - &self.a * &self.b + &self.b * &self.b,
        }
    }

    /// The squared complex absolute value. Equals `norm` except in ℤ, where
    /// it is `a²`. Used for triangle-inequality comparisons across rings.
    pub fn abs_squared(&self) -> BigInt {
        match self.ring {
            Ring::Z => &self.a * &self.a,
            _ => self.norm(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.abs_squared().is_one()
    }

    /// Strictly positive rational integer.
    pub fn is_positive_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_positive()
    }

    /// Sign of an integer-valued element; `None` for zero or non-real values.
    pub fn integer_sign(&self) -> Option<i8> {
        if !self.b.is_zero() || self.a.is_zero() {
            return None;
        }
        Some(if self.a.is_positive() { 1 } else { -1 })
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.b.is_zero() {
            self.a.to_i64()
        } else {
            None
        }
    }

    /// Complex conjugate in ℤ[i] and ℤ[ω]; identity in ℤ.
    pub fn conj(&self) -> Self {
        match self.ring {
            Ring::Z => self.clone(),
            Ring::Zi => RingElement { ring: Ring::Zi, a: self.a.clone(), b: -&self.b },
            // conj(a + bω) = a + bω² = (a − b) − bω
            Ring::Zw => RingElement { ring: Ring::Zw, a: &self.a - &self.b, b: -&self.b },
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), FriezeError> {
        if self.ring != other.ring {
            return Err(FriezeError::RingMismatch(self.ring, other.ring));
        }
        Ok(())
    }

    /// The quotient `self / divisor` if it lies in the ring.
    pub fn exact_div(&self, divisor: &Self) -> Result<Option<Self>, FriezeError> {
        self.check_same(divisor)?;
        if divisor.is_zero() {
            return Err(FriezeError::DivisionByZero);
        }
        if self.ring == Ring::Z {
            let (q, r) = self.a.div_rem(&divisor.a);
            return Ok(r.is_zero().then(|| RingElement { ring: Ring::Z, a: q, b: BigInt::zero() }));
        }
        // self / d = self · conj(d) / N(d)
        let n = divisor.norm();
        let p = self * &divisor.conj();
        let (qa, ra) = p.a.div_rem(&n);
        let (qb, rb) = p.b.div_rem(&n);
        if ra.is_zero() && rb.is_zero() {
            Ok(Some(RingElement { ring: self.ring, a: qa, b: qb }))
        } else {
            Ok(None)
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        matches!(other.exact_div(self), Ok(Some(_)))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = self.ring.one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// JSON encoding: ℤ as a bare integer, ℤ[i] and ℤ[ω] as `[a, b]`.
    /// Coordinates beyond the i64 range are written as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        fn coord(x: &BigInt) -> serde_json::Value {
            match x.to_i64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(x.to_string()),
            }
        }
        match self.ring {
            Ring::Z => coord(&self.a),
            _ => serde_json::Value::Array(vec![coord(&self.a), coord(&self.b)]),
        }
    }

    pub fn from_json(ring: Ring, v: &serde_json::Value) -> Result<Self, FriezeError> {
        fn coord(v: &serde_json::Value) -> Result<BigInt, FriezeError> {
            match v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| FriezeError::InvalidInput(format!("non-integer value {n}"))),
                serde_json::Value::String(s) => s
                    .parse::<BigInt>()
                    .map_err(|_| FriezeError::InvalidInput(format!("bad integer `{s}`"))),
                other => Err(FriezeError::InvalidInput(format!("expected integer, got {other}"))),
            }
        }
        match (ring, v) {
            (Ring::Z, serde_json::Value::Array(_)) => {
                Err(FriezeError::InvalidInput("integer ring values are bare integers".into()))
            }
            (Ring::Z, _) => Ok(RingElement::from_coords(Ring::Z, coord(v)?, BigInt::zero())),
            (_, serde_json::Value::Array(xs)) if xs.len() == 2 => {
                Ok(RingElement::from_coords(ring, coord(&xs[0])?, coord(&xs[1])?))
            }
            _ => Err(FriezeError::InvalidInput(format!("expected [a, b] for ring {ring}"))),
        }
    }
}

impl PartialOrd for RingElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RingElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ring
            .cmp(&other.ring)
            .then_with(|| self.norm().cmp(&other.norm()))
            .then_with(|| other.a.cmp(&self.a))
            .then_with(|| other.b.cmp(&self.b))
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = match self.ring {
            Ring::Z => return write!(f, "{}", self.a),
            Ring::Zi => "i",
            Ring::Zw => "w",
        };
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let b = if self.b.is_one() {
            String::new()
        } else if self.b == -BigInt::one() {
            "-".to_string()
        } else {
            self.b.to_string()
        };
        if self.a.is_zero() {
            write!(f, "{b}{unit}")
        } else if self.b.is_negative() {
            write!(f, "{}{b}{unit}", self.a)
        } else {
            write!(f, "{}+{b}{unit}", self.a)
        }
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        RingElement { ring: self.ring, a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        RingElement { ring: self.ring, a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        let (a, b, c, d) = (&self.a, &self.b, &rhs.a, &rhs.b);
        let (re, im) = match self.ring {
            Ring::Z => (a * c, BigInt::zero()),
            // (a+bi)(c+di) = (ac−bd) + (ad+bc)i
            Ring::Zi => (a * c - b * d, a * d + b * c),
            // (a+bω)(c+dω) = ac + (ad+bc)ω + bdω², ω² = −1−ω
            Ring::Zw => {
                let bd = b * d;
                (a * c - &bd, a * d + b * c - bd)
            }
        };
        RingElement { ring: self.ring, a: re, b: im }
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement { ring: self.ring, a: -&self.a, b: -&self.b }
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for RingElement {
            type Output = RingElement;
            fn $f(self, rhs: RingElement) -> RingElement {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&RingElement> for RingElement {
            type Output = RingElement;
            fn $f(self, rhs: &RingElement) -> RingElement {
                (&self).$f(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

/// All elements of norm at most `bound`, zero included, in canonical order.
pub fn elements_with_norm_at_most(ring: Ring, bound: &BigInt) -> Vec<RingElement> {
    let mut out = Vec::new();
    match ring {
        Ring::Z => {
            let m = bound.to_i64().expect("bound fits in i64");
            for a in -m..=m {
                out.push(RingElement::integer(a));
            }
        }
        Ring::Zi | Ring::Zw => {
            // a²−ab+b² ≥ (a²+b²)/2, so |a|,|b| ≤ sqrt(2·bound) covers both rings.
            let r = (bound * 2u32).sqrt().to_i64().expect("bound fits in i64") + 1;
            for a in -r..=r {
                for b in -r..=r {
                    let x = RingElement::new(ring, a, b);
                    if &x.norm() <= bound {
                        out.push(x);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// All divisors of a non-zero element, in canonical order.
///
/// Candidates are the elements whose norm divides `norm(x)`; each is kept if
/// it divides `x` exactly.
pub fn divisors(x: &RingElement) -> Result<Vec<RingElement>, FriezeError> {
    if x.is_zero() {
        return Err(FriezeError::InvalidInput("divisors of zero".into()));
    }
    let n = x.norm();
    let mut out: Vec<RingElement> = elements_with_norm_at_most(x.ring(), &n)
        .into_iter()
        .filter(|d| !d.is_zero() && n.is_multiple_of(&d.norm()) && d.divides(x))
        .collect();
    out.sort();
    Ok(out)
}

/// Number of positive divisors of `m ≥ 1`.
pub fn divisor_count(m: u64) -> u64 {
    assert!(m >= 1, "divisor_count needs m >= 1");
    let mut count = 0;
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            count += if d * d == m { 1 } else { 2 };
        }
        d += 1;
    }
    count
}

/// Positive divisors of `m ≥ 1` in increasing order.
pub fn positive_divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}
