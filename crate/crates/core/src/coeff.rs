//! Laurent polynomials in `q` with exact rational coefficients.
//!
//! This is the scalar ring for every expansion in the crate. Only Laurent
//! polynomials (never genuine rational functions) arise from straightening,
//! bar involution, bosons and the canonical-basis solver, so the ring
//! `Q[q, q^-1]` is enough.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A Laurent polynomial `sum_e c_e q^e` with rational coefficients.
///
/// Terms are kept sorted by exponent and no stored coefficient is zero, so
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentRat {
    terms: Vec<(i32, BigRational)>,
}

/// The lattices and predicates used to normalize canonical bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lattice {
    /// `q Q[q]`: every exponent is at least 1.
    QPlus,
    /// `q^-1 Q[q^-1]`: every exponent is at most -1.
    QMinusInverse,
    /// Fixed by `q -> q^-1`.
    BarSymmetric,
    /// Every coefficient is an integer.
    IntegerCoeffs,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseLaurentError {
    #[error("empty Laurent string")]
    Empty,
    #[error("malformed term `{0}`")]
    BadTerm(String),
}

impl LaurentRat {
    pub fn zero() -> Self {
        LaurentRat { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::monomial(BigRational::from_integer(BigInt::from(c)), 0)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    /// `q^e`.
    pub fn q_pow(e: i32) -> Self {
        Self::monomial(BigRational::one(), e)
    }

    pub fn monomial(c: BigRational, e: i32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentRat { terms: vec![(e, c)] }
        }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i32, BigRational)>,
    {
        let mut acc: BTreeMap<i32, BigRational> = BTreeMap::new();
        for (e, c) in iter {
            *acc.entry(e).or_insert_with(BigRational::zero) += c;
        }
        LaurentRat {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_int_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i32, i64)>,
    {
        Self::from_terms(
            iter.into_iter()
                .map(|(e, c)| (e, BigRational::from_integer(BigInt::from(c)))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Sorted `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> &[(i32, BigRational)] {
        &self.terms
    }

    pub fn coeff(&self, e: i32) -> BigRational {
        match self.terms.binary_search_by_key(&e, |(x, _)| *x) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The bar involution on scalars: `q -> q^-1`.
    pub fn bar(&self) -> Self {
        LaurentRat {
            terms: self.terms.iter().rev().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i32) -> Self {
        LaurentRat {
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentRat {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn lattice_member(&self, which: Lattice) -> bool {
        match which {
            Lattice::QPlus => self.terms.iter().all(|(e, _)| *e >= 1),
            Lattice::QMinusInverse => self.terms.iter().all(|(e, _)| *e <= -1),
            Lattice::BarSymmetric => self.bar() == *self,
            Lattice::IntegerCoeffs => self.terms.iter().all(|(_, c)| c.is_integer()),
        }
    }

    /// Splits `f = g + h` with `g` bar-symmetric and `h` in `q^-1 Q[q^-1]`.
    ///
    /// `g` copies the coefficients of `f` at non-negative exponents and
    /// mirrors the strictly positive ones.
    pub fn symmetric_part_split(&self) -> (LaurentRat, LaurentRat) {
        let g = LaurentRat::from_terms(self.terms.iter().flat_map(|(e, c)| {
            let e = *e;
            let mirrored = if e > 0 { Some((-e, c.clone())) } else { None };
            (e >= 0)
                .then(|| (e, c.clone()))
                .into_iter()
                .chain(mirrored)
        }));
        let h = self - &g;
        (g, h)
    }

    /// The mirror image of [`symmetric_part_split`](Self::symmetric_part_split):
    /// `f = g + h` with `g` bar-symmetric and `h` in `q Q[q]`.
    pub fn symmetric_part_split_plus(&self) -> (LaurentRat, LaurentRat) {
        let (g, h) = self.bar().symmetric_part_split();
        (g.bar(), h.bar())
    }

    /// Exact division. Returns `None` when `divisor` does not divide `self`
    /// in `Q[q, q^-1]` or when `divisor` is zero.
    pub fn div_exact(&self, divisor: &LaurentRat) -> Option<LaurentRat> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        // Long division from the top degree down.
        let (dtop, dlead) = divisor.terms.last().cloned().unwrap();
        let dlow = divisor.min_exp().unwrap();
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((rtop, rlead)) = rem.terms.last().cloned() {
            if rem.min_exp().unwrap() - dlow > rtop - dtop {
                return None;
            }
            let qe = rtop - dtop;
            let qc = rlead / &dlead;
            let step = divisor.shift(qe).scale(&qc);
            rem = &rem - &step;
            quotient.push((qe, qc));
        }
        Some(LaurentRat::from_terms(quotient))
    }

    /// Evaluation at an exact rational point (used only by tests).
    pub fn eval(&self, q: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let p = if *e >= 0 {
                num_traits::pow(q.clone(), *e as usize)
            } else {
                num_traits::pow(q.recip(), (-*e) as usize)
            };
            acc += c * p;
        }
        acc
    }
}

fn add_terms(a: &[(i32, BigRational)], b: &[(i32, BigRational)], negate_b: bool) -> LaurentRat {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
            out.push((b[j].0, c));
            j += 1;
        } else {
            let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
            if !c.is_zero() {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    LaurentRat { terms: out }
}

impl<'a> Add<&'a LaurentRat> for &'a LaurentRat {
    type Output = LaurentRat;
    fn add(self, rhs: &LaurentRat) -> LaurentRat {
        add_terms(&self.terms, &rhs.terms, false)
    }
}

impl<'a> Sub<&'a LaurentRat> for &'a LaurentRat {
    type Output = LaurentRat;
    fn sub(self, rhs: &LaurentRat) -> LaurentRat {
        add_terms(&self.terms, &rhs.terms, true)
    }
}

impl<'a> Mul<&'a LaurentRat> for &'a LaurentRat {
    type Output = LaurentRat;
    fn mul(self, rhs: &LaurentRat) -> LaurentRat {
        if self.is_zero() || rhs.is_zero() {
            return LaurentRat::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if rhs.terms.len() == 1 {
            let (e, c) = &rhs.terms[0];
            return LaurentRat {
                terms: self.terms.iter().map(|(x, y)| (x + e, y * c)).collect(),
            };
        }
        if self.terms.len() == 1 {
            return rhs * self;
        }
        let mut acc: BTreeMap<i32, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                *acc.entry(e1 + e2).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        LaurentRat {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &LaurentRat {
    type Output = LaurentRat;
    fn neg(self) -> LaurentRat {
        LaurentRat {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentRat {
    type Output = LaurentRat;
    fn neg(self) -> LaurentRat {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<LaurentRat> for LaurentRat {
            type Output = LaurentRat;
            fn $method(self, rhs: LaurentRat) -> LaurentRat {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a LaurentRat> for LaurentRat {
            type Output = LaurentRat;
            fn $method(self, rhs: &LaurentRat) -> LaurentRat {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<LaurentRat> for &'a LaurentRat {
            type Output = LaurentRat;
            fn $method(self, rhs: LaurentRat) -> LaurentRat {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&LaurentRat> for LaurentRat {
    fn add_assign(&mut self, rhs: &LaurentRat) {
        *self = &*self + rhs;
    }
}

impl AddAssign<LaurentRat> for LaurentRat {
    fn add_assign(&mut self, rhs: LaurentRat) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&LaurentRat> for LaurentRat {
    fn sub_assign(&mut self, rhs: &LaurentRat) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&LaurentRat> for LaurentRat {
    fn mul_assign(&mut self, rhs: &LaurentRat) {
        *self = &*self * rhs;
    }
}

impl From<i64> for LaurentRat {
    fn from(c: i64) -> Self {
        LaurentRat::from_int(c)
    }
}

impl From<BigRational> for LaurentRat {
    fn from(c: BigRational) -> Self {
        LaurentRat::constant(c)
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Renders with exponents descending as `coef*q^exp` terms joined by `+`/`-`,
/// e.g. `q^2-q^-1`, `3-1/2*q^-2`. Unit coefficients are omitted.
impl fmt::Display for LaurentRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            if *e == 0 {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "q^{}", e)?;
            } else {
                write!(f, "{}*q^{}", fmt_rational(&abs), e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentRat({})", self)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl FromStr for LaurentRat {
    type Err = ParseLaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(ParseLaurentError::Empty);
        }
        if s == "0" {
            return Ok(LaurentRat::zero());
        }
        // Split at +/- signs that start a term (not those following `^`).
        let bytes = s.as_bytes();
        let mut pieces = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                pieces.push(&s[start..i]);
                start = i;
            }
        }
        pieces.push(&s[start..]);

        let mut terms = Vec::new();
        for piece in pieces {
            let bad = || ParseLaurentError::BadTerm(piece.to_string());
            let (sign, body) = match piece.as_bytes()[0] {
                b'-' => (-1, &piece[1..]),
                b'+' => (1, &piece[1..]),
                _ => (1, piece),
            };
            let (coef, exp) = if let Some(idx) = body.find('q') {
                let coef_str = body[..idx].trim_end_matches('*');
                let coef = if coef_str.is_empty() {
                    BigRational::one()
                } else {
                    parse_rational(coef_str).ok_or_else(bad)?
                };
                let rest = &body[idx + 1..];
                let exp = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|x| x.parse::<i32>().ok())
                        .ok_or_else(bad)?
                };
                (coef, exp)
            } else {
                (parse_rational(body).ok_or_else(bad)?, 0)
            };
            let coef = if sign < 0 { -coef } else { coef };
            terms.push((exp, coef));
        }
        Ok(LaurentRat::from_terms(terms))
    }
}

/// JSON form: `[[exponent, "num/den"], ...]` sorted by exponent.
impl Serialize for LaurentRat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            seq.serialize_element(&(e, format!("{}/{}", c.numer(), c.denom())))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentRat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Vec<(i32, String)> = Vec::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            let c = parse_rational(&c)
                .ok_or_else(|| de::Error::custom(format!("bad rational `{}`", c)))?;
            terms.push((e, c));
        }
        Ok(LaurentRat::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentRat {
        s.parse().unwrap()
    }

    #[test]
    fn bar_examples() {
        assert_eq!(p("q^2+2").bar(), p("q^-2+2"));
        assert_eq!(LaurentRat::zero().bar(), LaurentRat::zero());
        assert_eq!(p("q^1-q^-1").bar(), p("q^-1-q^1"));
    }

    #[test]
    fn lattice_examples() {
        assert!(p("-q^-1").lattice_member(Lattice::QMinusInverse));
        assert!(p("q+q^-1").lattice_member(Lattice::BarSymmetric));
        assert!(!LaurentRat::one().lattice_member(Lattice::QMinusInverse));
        assert!(p("2*q^3-7").lattice_member(Lattice::IntegerCoeffs));
        assert!(!p("1/2*q^3").lattice_member(Lattice::IntegerCoeffs));
        assert!(p("q^2+q").lattice_member(Lattice::QPlus));
        assert!(LaurentRat::zero().lattice_member(Lattice::QMinusInverse));
    }

    #[test]
    fn split_examples() {
        let (g, h) = p("q^2+3+q^-1").symmetric_part_split();
        assert_eq!(g, p("q^2+3+q^-2"));
        assert_eq!(h, p("q^-1-q^-2"));

        let (g, h) = p("q^-3").symmetric_part_split();
        assert!(g.is_zero());
        assert_eq!(h, p("q^-3"));

        let (g, h) = p("5").symmetric_part_split();
        assert_eq!(g, p("5"));
        assert!(h.is_zero());
    }

    #[test]
    fn display_and_parse() {
        let f = LaurentRat::from_int_terms([(2, 1), (-1, -1)]);
        assert_eq!(f.to_string(), "q^2-q^-1");
        assert_eq!(p("-q^-1+q^2"), f);
        let g = p("3-1/2*q^-2");
        assert_eq!(g.to_string(), "3-1/2*q^-2");
        assert_eq!(p("q"), LaurentRat::q_pow(1));
        assert!(p("0").is_zero());
        assert!("q^x".parse::<LaurentRat>().is_err());
    }

    #[test]
    fn json_format() {
        let f = p("q^2-1/2");
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"[[0,"-1/2"],[2,"1/1"]]"#);
        let back: LaurentRat = serde_json::from_str(r#"[[0,"-1/2"],[2,"1/1"]]"#).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn exact_division() {
        // (1 - q^-4) / (1 - q^-2) = 1 + q^-2
        let num = p("1-q^-4");
        let den = p("1-q^-2");
        assert_eq!(num.div_exact(&den), Some(p("1+q^-2")));
        assert_eq!(p("q^2+1").div_exact(&p("q^1+1")), None);
        assert_eq!(p("3*q^5").div_exact(&p("q^2")), Some(p("3*q^3")));
    }

    fn arb_laurent() -> impl Strategy<Value = LaurentRat> {
        prop::collection::vec((-6i32..=6, -5i64..=5, 1i64..=3), 0..6).prop_map(|v| {
            LaurentRat::from_terms(v.into_iter().map(|(e, n, d)| {
                (e, BigRational::new(BigInt::from(n), BigInt::from(d)))
            }))
        })
    }

    proptest! {
        #[test]
        fn bar_is_involutive_ring_hom(f in arb_laurent(), g in arb_laurent()) {
            prop_assert_eq!(f.bar().bar(), f.clone());
            prop_assert_eq!((&f + &g).bar(), &f.bar() + &g.bar());
            prop_assert_eq!((&f * &g).bar(), &f.bar() * &g.bar());
        }

        #[test]
        fn split_reassembles(f in arb_laurent()) {
            let (g, h) = f.symmetric_part_split();
            prop_assert_eq!(&g + &h, f.clone());
            prop_assert!(g.lattice_member(Lattice::BarSymmetric));
            prop_assert!(h.lattice_member(Lattice::QMinusInverse));
            prop_assert_eq!(g.is_zero(), f.lattice_member(Lattice::QMinusInverse));

            let (g, h) = f.symmetric_part_split_plus();
            prop_assert_eq!(&g + &h, f.clone());
            prop_assert!(g.lattice_member(Lattice::BarSymmetric));
            prop_assert!(h.lattice_member(Lattice::QPlus));
        }

        #[test]
        fn display_parse_roundtrip(f in arb_laurent()) {
            let s = f.to_string();
            prop_assert_eq!(s.parse::<LaurentRat>().unwrap(), f);
        }

        #[test]
        fn division_inverts_multiplication(f in arb_laurent(), g in arb_laurent()) {
            prop_assume!(!g.is_zero());
            let prod = &f * &g;
            prop_assert_eq!(prod.div_exact(&g), Some(f));
        }
    }
}
