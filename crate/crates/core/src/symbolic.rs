//! Exact univariate polynomials in the formal variable `q` and the closed
//! forms assembled from them: inverse zeta coefficients, stabilizer orders,
//! per-family sieve sums and the final point-count polynomial.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ff::{self, FieldDesc, FieldElem};
use crate::plane::FamilyKind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolicError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("{dividend} is not divisible by {divisor}")]
    NotExact { dividend: String, divisor: String },
    #[error("tuple size {0} is outside 0..=5")]
    BadTupleSize(u32),
    #[error("brute-force stabilizers are only supported for q in {{2, 3, 4, 5}}, got {0}")]
    UnsupportedField(u64),
    #[error("the cusp-family count for {0} points is not a polynomial in q")]
    NotPolynomial(u32),
    #[error("coefficient {0} does not fit the serialized integer range")]
    Overflow(String),
    #[error("explicit part disagrees between characteristics: odd {odd}, two {two}")]
    CharacteristicMismatch { odd: String, two: String },
    #[error("type tables: {0}")]
    Tables(String),
}

/// A polynomial in `q` with exact rational coefficients; zero coefficients
/// are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    terms: BTreeMap<u32, BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly::default()
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    /// The variable `q`.
    pub fn q() -> Self {
        QPoly::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        QPoly::constant(BigRational::from_integer(c.into()))
    }

    pub fn monomial(c: BigRational, exp: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        QPoly { terms }
    }

    /// `Σ c·q^e` from integer `(e, c)` pairs.
    pub fn from_int_terms(terms: &[(u32, i64)]) -> Self {
        terms.iter().fold(QPoly::zero(), |acc, &(e, c)| acc + QPoly::monomial(BigRational::from_integer(c.into()), e))
    }

    /// `Σ (n/d)·q^e` from `(e, n, d)` triples.
    pub fn from_triples(triples: &[(u32, i64, i64)]) -> Result<Self, SymbolicError> {
        let mut out = QPoly::zero();
        for &(e, n, d) in triples {
            if d == 0 {
                return Err(SymbolicError::DivisionByZero);
            }
            out = out + QPoly::monomial(BigRational::new(n.into(), d.into()), e);
        }
        Ok(out)
    }

    /// `Π (q - r)` over the given integer roots, times `c`.
    pub fn from_roots(c: BigRational, roots: &[i64]) -> Self {
        roots.iter().fold(QPoly::constant(c), |acc, &r| acc * (QPoly::q() - QPoly::from_int(r)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: u32) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly { terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> QPoly {
        (0..k).fold(QPoly::one(), |acc, _| acc * self.clone())
    }

    fn add_term(&mut self, exp: u32, c: BigRational) {
        let entry = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Polynomial division that fails unless the remainder is zero.
    pub fn exact_div(&self, divisor: &QPoly) -> Result<QPoly, SymbolicError> {
        let dd = divisor.degree().ok_or(SymbolicError::DivisionByZero)?;
        let lead = divisor.coeff(dd);
        let mut rem = self.clone();
        let mut quot = QPoly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.coeff(rd) / &lead;
            let step = QPoly::monomial(c, rd - dd);
            rem = rem - divisor.clone() * step.clone();
            quot = quot + step;
        }
        if !rem.is_zero() {
            return Err(SymbolicError::NotExact { dividend: self.to_string(), divisor: divisor.to_string() });
        }
        Ok(quot)
    }

    pub fn eval(&self, q: &BigInt) -> BigRational {
        let q = BigRational::from_integer(q.clone());
        let mut acc = BigRational::zero();
        let mut prev = self.degree().unwrap_or(0);
        for (&e, c) in self.terms.iter().rev() {
            for _ in e..prev {
                acc *= &q;
            }
            acc += c;
            prev = e;
        }
        for _ in 0..prev {
            acc *= &q;
        }
        acc
    }

    pub fn eval_int(&self, q: i64) -> BigRational {
        self.eval(&BigInt::from(q))
    }

    /// `(exponent, numerator, denominator)` triples in ascending exponent order.
    pub fn to_triples(&self) -> Result<Vec<(u32, i64, i64)>, SymbolicError> {
        self.terms
            .iter()
            .map(|(&e, c)| {
                let n = c.numer().to_i64().ok_or_else(|| SymbolicError::Overflow(c.to_string()))?;
                let d = c.denom().to_i64().ok_or_else(|| SymbolicError::Overflow(c.to_string()))?;
                Ok((e, n, d))
            })
            .collect()
    }
}

impl Add for QPoly {
    type Output = QPoly;

    fn add(mut self, rhs: QPoly) -> QPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Neg for QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Sub for QPoly {
    type Output = QPoly;

    fn sub(self, rhs: QPoly) -> QPoly {
        self + (-rhs)
    }
}

impl Mul for QPoly {
    type Output = QPoly;

    fn mul(self, rhs: QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &rhs.terms {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

impl std::iter::Sum for QPoly {
    fn sum<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::zero(), |a, b| a + b)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (&e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = mag.is_one();
            if e == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !unit {
                write!(f, "{mag} ")?;
            }
            if e == 1 {
                f.write_str("q")?;
            } else {
                write!(f, "q^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let triples = self.to_triples().map_err(serde::ser::Error::custom)?;
        triples.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let triples = Vec::<(u32, i64, i64)>::deserialize(deserializer)?;
        QPoly::from_triples(&triples).map_err(serde::de::Error::custom)
    }
}

/// The spaces whose inverse zeta functions enter the sieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// Projective space `P^n`.
    Pn(u32),
    /// `P^n` with one rational point removed.
    PnMinusPoint(u32),
}

/// Coefficient of `t^w` in `1/Z(X; t)`, i.e. in `Π (1 - q^i t)` over
/// `i = 0..=n` for `P^n` and `i = 1..=n` with a point removed.
pub fn zeta_inverse_pi(space: Space, w: u32) -> QPoly {
    let exps: Vec<u32> = match space {
        Space::Pn(n) => (0..=n).collect(),
        Space::PnMinusPoint(n) => (1..=n).collect(),
    };
    // coeffs[k] is the t^k coefficient of the partial product.
    let mut coeffs = vec![QPoly::one()];
    for e in exps {
        let factor = QPoly::monomial(-BigRational::one(), e);
        let mut next = coeffs.clone();
        next.push(QPoly::zero());
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].clone() + c.clone() * factor.clone();
        }
        coeffs = next;
    }
    coeffs.get(w as usize).cloned().unwrap_or_default()
}

/// `|PGL_3(F_q)| = q^3 (q^3 - 1)(q^2 - 1)`.
pub fn pgl3_order() -> QPoly {
    let q = QPoly::q();
    q.pow(3) * (q.pow(3) - QPoly::one()) * (q.pow(2) - QPoly::one())
}

/// Order of the subgroup of `PGL_3(F_q)` fixing `P` and the family's tangent set.
pub fn stabilizer_order(kind: FamilyKind) -> QPoly {
    let q = QPoly::q();
    let qm1 = q.clone() - QPoly::one();
    match kind {
        FamilyKind::Split => QPoly::from_int(2) * q.pow(2) * qm1.pow(2),
        FamilyKind::NonSplit => QPoly::from_int(2) * (q.pow(4) - q.pow(2)),
        FamilyKind::Cusp => q.pow(3) * qm1.pow(2),
    }
}

/// Number of family members singular at a fixed set of `s` points in
/// general position (no three on a line through `P`). For the cusp family
/// and `s = 5` the expression `1 - q^-1` is not a polynomial and an error is
/// returned; its weight in the sieve is zero anyway.
pub fn family_affine_count(kind: FamilyKind, s: u32) -> Result<QPoly, SymbolicError> {
    if s > 5 {
        return Err(SymbolicError::BadTupleSize(s));
    }
    if kind == FamilyKind::Cusp && s == 5 {
        return Err(SymbolicError::NotPolynomial(s));
    }
    let full = QPoly::monomial(BigRational::one(), 15 - 3 * s);
    Ok(match kind {
        FamilyKind::Split | FamilyKind::NonSplit => full,
        FamilyKind::Cusp => full - QPoly::monomial(BigRational::one(), 14 - 3 * s),
    })
}

/// `Σ_{w=0}^{5} π_w(P^2 - P) · |family(w)|`, before dividing by the stabilizer.
/// The sum starts at the empty tuple; terms with `π_w = 0` are skipped.
pub fn sieve_numerator(kind: FamilyKind) -> QPoly {
    (0..=5)
        .map(|w| (w, zeta_inverse_pi(Space::PnMinusPoint(2), w)))
        .filter(|(_, pi)| !pi.is_zero())
        .map(|(w, pi)| pi * family_affine_count(kind, w).expect("nonzero weights occur for w <= 2"))
        .sum()
}

/// The family's contribution to the point count: the sieve numerator divided
/// by the stabilizer order.
pub fn sieve_closed_form(kind: FamilyKind) -> Result<QPoly, SymbolicError> {
    sieve_numerator(kind).exact_div(&stabilizer_order(kind))
}

/// Sum of the three family contributions and the explicit correction from
/// the type tables. Both characteristic columns must give the same correction.
pub fn main_theorem() -> Result<QPoly, SymbolicError> {
    use crate::typetables::{self, Char};
    let rows = typetables::load_rows().map_err(|e| SymbolicError::Tables(e.to_string()))?;
    let odd = typetables::table_total(&rows, Char::Odd);
    let two = typetables::table_total(&rows, Char::Two);
    if odd != two {
        return Err(SymbolicError::CharacteristicMismatch { odd: odd.to_string(), two: two.to_string() });
    }
    let mut total = odd;
    for kind in FamilyKind::ALL {
        total = total + sieve_closed_form(kind)?;
    }
    Ok(total)
}

/// Count elements of `PGL_3(F_q)` fixing `P = (0:0:1)` and mapping the
/// family's pair of tangents at `P` to itself, by enumerating all 3x3
/// matrices over `F_q` normalized so the first nonzero entry is 1.
pub fn stabilizer_brute_force(kind: FamilyKind, q: u64) -> Result<u64, SymbolicError> {
    let (fd, cone) = tangent_cone(kind, q)?;
    let elems: Vec<FieldElem> = fd.base_elements();
    let n = elems.len() as u64;
    let mut count = 0u64;
    let mut m = [FieldElem::ZERO; 9];
    for idx in 0..n.pow(9) {
        let mut v = idx;
        for e in m.iter_mut() {
            *e = elems[(v % n) as usize];
            v /= n;
        }
        if m.iter().find(|e| !e.is_zero()) != Some(&FieldElem::ONE) {
            continue;
        }
        // Column vectors: the image of (0,0,1) is the third column.
        if !(m[2].is_zero() && m[5].is_zero()) || det3(&fd, &m).is_zero() {
            continue;
        }
        if preserves_cone(&fd, &cone, [m[0], m[1], m[3], m[4]]) {
            count += 1;
        }
    }
    Ok(count)
}

/// Number of invertible 3x3 matrices over `F_q` up to scalars, by enumeration.
pub fn pgl3_brute_force(q: u64) -> Result<u64, SymbolicError> {
    let (fd, _) = tangent_cone(FamilyKind::Split, q)?;
    let elems: Vec<FieldElem> = fd.base_elements();
    let n = elems.len() as u64;
    let mut invertible = 0u64;
    let mut m = [FieldElem::ZERO; 9];
    for idx in 0..n.pow(9) {
        let mut v = idx;
        for e in m.iter_mut() {
            *e = elems[(v % n) as usize];
            v /= n;
        }
        if !det3(&fd, &m).is_zero() {
            invertible += 1;
        }
    }
    Ok(invertible / (n - 1))
}

/// `GF(q^2)` with base `F_q`, and the coefficients of `x^2, xy, y^2` in the
/// tangent cone. Matrices are enumerated over the base subfield.
fn tangent_cone(kind: FamilyKind, q: u64) -> Result<(FieldDesc, [FieldElem; 3]), SymbolicError> {
    let (p, s) = match q {
        2 | 3 | 5 => (q, 1),
        4 => (2, 2),
        _ => return Err(SymbolicError::UnsupportedField(q)),
    };
    let fd2 = ff::make_field(p, s, 2 * s).map_err(|_| SymbolicError::UnsupportedField(q))?;
    let cone = match kind {
        FamilyKind::Split => [FieldElem::ZERO, FieldElem::ONE, FieldElem::ZERO],
        FamilyKind::Cusp => [FieldElem::ZERO, FieldElem::ZERO, FieldElem::ONE],
        FamilyKind::NonSplit => {
            let qd = ff::quadratic_data(&fd2).map_err(|_| SymbolicError::UnsupportedField(q))?;
            [FieldElem::ONE, qd.t, qd.n]
        }
    };
    Ok((fd2, cone))
}

fn det3(fd: &FieldDesc, m: &[FieldElem; 9]) -> FieldElem {
    let minor = |a: usize, b: usize, c: usize, d: usize| fd.sub(fd.mul(m[a], m[d]), fd.mul(m[b], m[c]));
    let t0 = fd.mul(m[0], minor(4, 5, 7, 8));
    let t1 = fd.mul(m[1], minor(3, 5, 6, 8));
    let t2 = fd.mul(m[2], minor(3, 4, 6, 7));
    fd.add(fd.sub(t0, t1), t2)
}

/// `Q(ax + by, cx + dy)` is a nonzero multiple of `Q(x, y)`.
fn preserves_cone(fd: &FieldDesc, cone: &[FieldElem; 3], abcd: [FieldElem; 4]) -> bool {
    let [al, be, ga] = *cone;
    let [a, b, c, d] = abcd;
    let two = fd.from_int(2);
    let x2 = fd.add(fd.add(fd.mul(al, fd.mul(a, a)), fd.mul(be, fd.mul(a, c))), fd.mul(ga, fd.mul(c, c)));
    let xy = fd.add(
        fd.add(fd.mul(two, fd.mul(al, fd.mul(a, b))), fd.mul(be, fd.add(fd.mul(a, d), fd.mul(b, c)))),
        fd.mul(two, fd.mul(ga, fd.mul(c, d))),
    );
    let y2 = fd.add(fd.add(fd.mul(al, fd.mul(b, b)), fd.mul(be, fd.mul(b, d))), fd.mul(ga, fd.mul(d, d)));
    let img = [x2, xy, y2];
    let cross = |i: usize, j: usize| fd.sub(fd.mul(img[i], cone[j]), fd.mul(img[j], cone[i]));
    cross(0, 1).is_zero() && cross(0, 2).is_zero() && cross(1, 2).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn zeta_coefficients() {
        let q = QPoly::q();
        assert_eq!(zeta_inverse_pi(Space::PnMinusPoint(2), 1), -(q.clone() + q.pow(2)));
        assert_eq!(zeta_inverse_pi(Space::PnMinusPoint(2), 2), q.pow(3));
        assert!(zeta_inverse_pi(Space::PnMinusPoint(2), 3).is_zero());
        assert_eq!(zeta_inverse_pi(Space::Pn(2), 0), QPoly::one());
        assert!(zeta_inverse_pi(Space::Pn(2), 4).is_zero());
    }

    #[test]
    fn stabilizer_values() {
        assert_eq!(stabilizer_order(FamilyKind::Split).eval_int(2), int(8));
        assert_eq!(stabilizer_order(FamilyKind::NonSplit).eval_int(2), int(24));
        assert_eq!(stabilizer_order(FamilyKind::Cusp).eval_int(3), int(108));
        assert_eq!(pgl3_order().eval_int(2), int(168));
    }

    #[test]
    fn affine_counts() {
        assert_eq!(family_affine_count(FamilyKind::Split, 0).unwrap(), QPoly::from_int_terms(&[(15, 1)]));
        assert_eq!(family_affine_count(FamilyKind::Cusp, 0).unwrap().eval_int(2), int(16384));
        assert_eq!(family_affine_count(FamilyKind::Split, 5).unwrap(), QPoly::one());
        assert!(family_affine_count(FamilyKind::Split, 6).is_err());
        assert_eq!(family_affine_count(FamilyKind::Cusp, 5), Err(SymbolicError::NotPolynomial(5)));
        assert_eq!(family_affine_count(FamilyKind::Cusp, 4).unwrap(), QPoly::from_int_terms(&[(3, 1), (2, -1)]));
    }

    #[test]
    fn closed_forms() {
        let half = BigRational::new(1.into(), 2.into());
        let split = QPoly::from_int_terms(&[(11, 1), (10, 1)]).scale(&half);
        let nonsplit = QPoly::from_int_terms(&[(11, 1), (10, -1)]).scale(&half);
        let cusp = QPoly::from_int_terms(&[(10, 1), (8, -1)]);
        assert_eq!(sieve_closed_form(FamilyKind::Split).unwrap(), split);
        assert_eq!(sieve_closed_form(FamilyKind::NonSplit).unwrap(), nonsplit);
        assert_eq!(sieve_closed_form(FamilyKind::Cusp).unwrap(), cusp);
        assert_eq!(sieve_numerator(FamilyKind::Split), QPoly::from_int_terms(&[(15, 1), (14, -1), (13, -1), (12, 1)]));
        assert_eq!(sieve_numerator(FamilyKind::Cusp), QPoly::from_int_terms(&[(15, 1), (14, -2), (12, 2), (11, -1)]));
    }

    #[test]
    fn exact_division() {
        let a = QPoly::from_int_terms(&[(3, 2), (1, -1), (0, 5)]);
        let b = QPoly::from_int_terms(&[(2, 1), (0, 3)]);
        assert_eq!((a.clone() * b.clone()).exact_div(&b).unwrap(), a);
        assert!(matches!(a.exact_div(&b), Err(SymbolicError::NotExact { .. })));
        assert_eq!(a.exact_div(&QPoly::zero()), Err(SymbolicError::DivisionByZero));
    }

    #[test]
    fn display_and_json() {
        let p = QPoly::from_int_terms(&[(11, 1), (10, 1), (8, -1), (0, 1)]);
        assert_eq!(p.to_string(), "q^11 + q^10 - q^8 + 1");
        let half = QPoly::from_triples(&[(1, -1, 2), (0, 3, 1)]).unwrap();
        assert_eq!(half.to_string(), "-1/2 q + 3");
        let json = serde_json::to_string(&half).unwrap();
        assert_eq!(json, "[[0,3,1],[1,-1,2]]");
        assert_eq!(serde_json::from_str::<QPoly>(&json).unwrap(), half);
        assert_eq!(QPoly::zero().to_string(), "0");
    }

    #[test]
    fn brute_force_stabilizers_at_two() {
        assert_eq!(pgl3_brute_force(2).unwrap(), 168);
        assert_eq!(stabilizer_brute_force(FamilyKind::Split, 2).unwrap(), 8);
        assert_eq!(stabilizer_brute_force(FamilyKind::NonSplit, 2).unwrap(), 24);
        assert_eq!(stabilizer_brute_force(FamilyKind::Cusp, 2).unwrap(), 8);
        assert!(stabilizer_brute_force(FamilyKind::Cusp, 7).is_err());
    }
}
