//! Projective plane points, plane quintics and the three families of quintics
//! with a prescribed delta-one singularity at `P = (0:0:1)`.
//!
//! Monomials `x^a y^b z^c` (`a + b + c = 5`) are indexed in descending
//! lexicographic order on `(a, b)`: `x^5, x^4y, x^4z, x^3y^2, ..., z^5`.
//! Every coefficient vector in the crate, and every serialization, uses this
//! order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ff::{self, FieldDesc, FieldElem, FieldError};

pub const NUM_MONOMIALS: usize = 21;

/// Exponents `(a, b, c)` of `x^a y^b z^c` in canonical order.
pub const MONOMIALS: [(u8, u8, u8); NUM_MONOMIALS] = build_monomials();

const fn build_monomials() -> [(u8, u8, u8); NUM_MONOMIALS] {
    let mut out = [(0u8, 0u8, 0u8); NUM_MONOMIALS];
    let mut k = 0;
    let mut a = 5i32;
    while a >= 0 {
        let mut b = 5 - a;
        while b >= 0 {
            out[k] = (a as u8, b as u8, (5 - a - b) as u8);
            k += 1;
            b -= 1;
        }
        a -= 1;
    }
    out
}

/// Canonical index of `x^a y^b z^c`.
pub const fn monomial_index(a: u8, b: u8, c: u8) -> usize {
    assert!(a + b + c == 5);
    // Monomials with x-degree > a come first: sum_{a'>a} (6 - a').
    let a = a as usize;
    let before = (5 - a) * (5 - a + 1) / 2;
    before + (5 - a - b as usize)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaneError {
    #[error("families are only implemented over prime fields, got q = {0}")]
    NotPrimeField(u64),
    #[error("curve index {idx} out of range for a family of size {size}")]
    IndexOutOfRange { idx: u64, size: u64 },
    #[error("x^2 - {t}x + {n} is reducible over F_{q}")]
    ReducibleTangents { t: u32, n: u32, q: u64 },
    #[error("form is not a member of the {0} family")]
    NotInFamily(FamilyKind),
    #[error("unknown family `{0}` (expected split, nonsplit or cusp)")]
    UnknownFamily(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Split,
    NonSplit,
    Cusp,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 3] = [FamilyKind::Split, FamilyKind::NonSplit, FamilyKind::Cusp];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Split => "split",
            FamilyKind::NonSplit => "nonsplit",
            FamilyKind::Cusp => "cusp",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = PlaneError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "split" => Ok(FamilyKind::Split),
            "nonsplit" | "non-split" => Ok(FamilyKind::NonSplit),
            "cusp" => Ok(FamilyKind::Cusp),
            other => Err(PlaneError::UnknownFamily(other.to_string())),
        }
    }
}

/// A point of the projective plane over some `GF(q^i)`, normalized so that
/// the first nonzero coordinate (scanning x, y, z) is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    pub x: FieldElem,
    pub y: FieldElem,
    pub z: FieldElem,
}

impl ProjPoint {
    /// The point `P = (0:0:1)`.
    pub const P: ProjPoint = ProjPoint { x: FieldElem::ZERO, y: FieldElem::ZERO, z: FieldElem::ONE };

    /// Normalize `(x:y:z)`; `None` for the zero vector.
    pub fn normalized(fd: &FieldDesc, x: FieldElem, y: FieldElem, z: FieldElem) -> Option<ProjPoint> {
        let lead = [x, y, z].into_iter().find(|c| !c.is_zero())?;
        let inv = fd.inv(lead);
        Some(ProjPoint { x: fd.mul(x, inv), y: fd.mul(y, inv), z: fd.mul(z, inv) })
    }

    pub fn is_p(&self) -> bool {
        *self == ProjPoint::P
    }

    pub fn coords(&self) -> [FieldElem; 3] {
        [self.x, self.y, self.z]
    }
}

/// Number of points of `P^2(F_Q)`.
pub fn plane_point_count(field_size: u64) -> u64 {
    field_size * field_size + field_size + 1
}

/// All points of `P^2` over `fd`, each once, normalized. Order: `(1:y:z)` with
/// `y` major and `z` minor by element index, then `(0:1:z)`, then `(0:0:1)`.
pub fn enumerate_points(fd: &FieldDesc, exclude_p: bool) -> impl Iterator<Item = ProjPoint> + '_ {
    let size = fd.size();
    let affine = (0..size)
        .flat_map(move |y| (0..size).map(move |z| ProjPoint { x: FieldElem::ONE, y: FieldElem(y), z: FieldElem(z) }));
    let line = (0..size).map(|z| ProjPoint { x: FieldElem::ZERO, y: FieldElem::ONE, z: FieldElem(z) });
    let last = if exclude_p { None } else { Some(ProjPoint::P) };
    affine.chain(line).chain(last)
}

/// Coordinatewise Frobenius over the base field.
pub fn frobenius_point(fd: &FieldDesc, pt: &ProjPoint) -> ProjPoint {
    ProjPoint { x: fd.frobenius(pt.x), y: fd.frobenius(pt.y), z: fd.frobenius(pt.z) }
}

/// Smallest `d >= 1` with `Frob^d(pt) = pt`.
pub fn point_exact_degree(fd: &FieldDesc, pt: &ProjPoint) -> u32 {
    let mut d = 1;
    let mut cur = frobenius_point(fd, pt);
    while cur != *pt {
        cur = frobenius_point(fd, &cur);
        d += 1;
    }
    d
}

/// The Frobenius orbit of a normalized point.
pub fn orbit(fd: &FieldDesc, pt: &ProjPoint) -> Vec<ProjPoint> {
    let mut out = vec![*pt];
    let mut cur = frobenius_point(fd, pt);
    while cur != *pt {
        out.push(cur);
        cur = frobenius_point(fd, &cur);
    }
    out
}

/// A plane quintic over a prime field, coefficients stored as residues mod `p`
/// in canonical monomial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuinticForm {
    pub coeffs: [u32; NUM_MONOMIALS],
    pub family: Option<FamilyKind>,
}

impl QuinticForm {
    pub fn new(coeffs: [u32; NUM_MONOMIALS]) -> Self {
        QuinticForm { coeffs, family: None }
    }

    /// Build a form from `(a, b, c, coefficient)` terms (coefficients reduced mod `p`).
    pub fn from_terms(p: u32, terms: &[(u8, u8, u8, i64)]) -> Self {
        let mut coeffs = [0u32; NUM_MONOMIALS];
        for &(a, b, c, v) in terms {
            let i = monomial_index(a, b, c);
            coeffs[i] = ((coeffs[i] as i64 + v).rem_euclid(p as i64)) as u32;
        }
        QuinticForm::new(coeffs)
    }

    pub fn coeff(&self, a: u8, b: u8, c: u8) -> u32 {
        self.coeffs[monomial_index(a, b, c)]
    }
}

/// `(F, F_x, F_y, F_z)` at `pt`, with derivative multipliers reduced mod `p`.
pub fn eval_with_partials(fd: &FieldDesc, form: &QuinticForm, pt: &ProjPoint) -> [FieldElem; 4] {
    let powers = |v: FieldElem| {
        let mut out = [FieldElem::ONE; 6];
        for k in 1..6 {
            out[k] = fd.mul(out[k - 1], v);
        }
        out
    };
    let (px, py, pz) = (powers(pt.x), powers(pt.y), powers(pt.z));
    let mut acc = [FieldElem::ZERO; 4];
    for (i, &(a, b, c)) in MONOMIALS.iter().enumerate() {
        let coeff = form.coeffs[i];
        if coeff == 0 {
            continue;
        }
        let (a, b, c) = (a as usize, b as usize, c as usize);
        let yz = fd.mul(py[b], pz[c]);
        acc[0] = fd.add(acc[0], fd.scale(coeff, fd.mul(px[a], yz)));
        if a > 0 {
            let v = fd.mul(px[a - 1], yz);
            acc[1] = fd.add(acc[1], fd.scale(coeff * a as u32, v));
        }
        if b > 0 {
            let v = fd.mul(fd.mul(px[a], py[b - 1]), pz[c]);
            acc[2] = fd.add(acc[2], fd.scale(coeff * b as u32, v));
        }
        if c > 0 {
            let v = fd.mul(fd.mul(px[a], py[b]), pz[c - 1]);
            acc[3] = fd.add(acc[3], fd.scale(coeff * c as u32, v));
        }
    }
    acc
}

/// `F` and all three partials vanish at `pt`.
pub fn is_singular_at(fd: &FieldDesc, form: &QuinticForm, pt: &ProjPoint) -> bool {
    eval_with_partials(fd, form, pt).iter().all(|v| v.is_zero())
}

/// One of the three families over a prime field `F_q`, with its tangent data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    kind: FamilyKind,
    q: u32,
    /// `(t, n)` of the non-split tangent pair `x^2 + t xy + n y^2`.
    tangent: (u32, u32),
    fixed: [u32; NUM_MONOMIALS],
    free: [usize; 15],
    /// Position of `x^3 z^2` among the free monomials.
    cusp_slot: usize,
}

/// Canonical indices of the 15 free monomials (those of `F_3`, `F_4`, `F_5`).
pub fn free_monomials() -> [usize; 15] {
    let mut out = [0usize; 15];
    let mut k = 0;
    for (i, &(_, _, c)) in MONOMIALS.iter().enumerate() {
        if c <= 2 {
            out[k] = i;
            k += 1;
        }
    }
    out
}

impl Family {
    /// The family over the prime field `F_q`. The non-split family uses the
    /// trace and norm of the generator of the canonical `GF(q^2)`.
    pub fn new(kind: FamilyKind, q: u64) -> Result<Family, PlaneError> {
        if !ff::is_prime(q) || q > u16::MAX as u64 {
            return Err(PlaneError::NotPrimeField(q));
        }
        let tangent = if kind == FamilyKind::NonSplit {
            let fd2 = ff::make_field(q, 1, 2)?;
            let qd = ff::quadratic_data(&fd2)?;
            // t = alpha + F(alpha) is the trace; the tangent product is x^2 + t xy + n y^2.
            (qd.t.index() as u32, qd.n.index() as u32)
        } else {
            (0, 0)
        };
        Ok(Family::build(kind, q as u32, tangent))
    }

    /// A non-split family with tangent product `x^2 + t xy + n y^2`, which
    /// must be irreducible over `F_q`.
    pub fn non_split_with(q: u64, t: u32, n: u32) -> Result<Family, PlaneError> {
        if !ff::is_prime(q) || q > u16::MAX as u64 {
            return Err(PlaneError::NotPrimeField(q));
        }
        let qq = q as u32;
        let (t, n) = (t % qq, n % qq);
        let has_root = (0..qq).any(|x| (x * x + t * x + n) % qq == 0);
        if has_root {
            return Err(PlaneError::ReducibleTangents { t, n, q });
        }
        Ok(Family::build(FamilyKind::NonSplit, qq, (t, n)))
    }

    fn build(kind: FamilyKind, q: u32, tangent: (u32, u32)) -> Family {
        let mut fixed = [0u32; NUM_MONOMIALS];
        match kind {
            FamilyKind::Split => fixed[monomial_index(1, 1, 3)] = 1,
            FamilyKind::NonSplit => {
                fixed[monomial_index(2, 0, 3)] = 1;
                fixed[monomial_index(1, 1, 3)] = tangent.0;
                fixed[monomial_index(0, 2, 3)] = tangent.1;
            }
            FamilyKind::Cusp => fixed[monomial_index(0, 2, 3)] = 1,
        }
        let free = free_monomials();
        let cusp_slot = free.iter().position(|&i| i == monomial_index(3, 0, 2)).unwrap();
        Family { kind, q, tangent, fixed, free, cusp_slot }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn tangent_pair(&self) -> (u32, u32) {
        self.tangent
    }

    /// Coefficients forced by the family (the degree-2 part at `P`).
    pub fn fixed_part(&self) -> &[u32; NUM_MONOMIALS] {
        &self.fixed
    }

    pub fn free_monomials(&self) -> &[usize; 15] {
        &self.free
    }

    /// Slot of `x^3 z^2` in [`Family::free_monomials`].
    pub fn cusp_slot(&self) -> usize {
        self.cusp_slot
    }

    fn radix(&self, slot: usize) -> u64 {
        if self.kind == FamilyKind::Cusp && slot == self.cusp_slot {
            self.q as u64 - 1
        } else {
            self.q as u64
        }
    }

    /// `q^15` for the nodal families, `(q-1) q^14` for the cusp family.
    pub fn size(&self) -> u64 {
        (0..15).map(|k| self.radix(k)).product()
    }

    /// Decode a curve index without validation. The least significant digit
    /// is the first free monomial in canonical order; in the cusp family the
    /// `x^3 z^2` digit `d` stands for the coefficient `d + 1`.
    pub fn decode_into(&self, mut idx: u64, coeffs: &mut [u32; NUM_MONOMIALS]) {
        *coeffs = self.fixed;
        for (slot, &mono) in self.free.iter().enumerate() {
            let r = self.radix(slot);
            let mut digit = (idx % r) as u32;
            idx /= r;
            if self.kind == FamilyKind::Cusp && slot == self.cusp_slot {
                digit += 1;
            }
            coeffs[mono] = digit;
        }
    }

    pub fn curve(&self, idx: u64) -> Result<QuinticForm, PlaneError> {
        let size = self.size();
        if idx >= size {
            return Err(PlaneError::IndexOutOfRange { idx, size });
        }
        let mut coeffs = [0u32; NUM_MONOMIALS];
        self.decode_into(idx, &mut coeffs);
        Ok(QuinticForm { coeffs, family: Some(self.kind) })
    }

    pub fn contains(&self, form: &QuinticForm) -> bool {
        let free_ok = self.free.iter().all(|&i| form.coeffs[i] < self.q);
        let fixed_ok = (0..NUM_MONOMIALS).filter(|i| !self.free.contains(i)).all(|i| form.coeffs[i] == self.fixed[i]);
        let cusp_ok = self.kind != FamilyKind::Cusp || form.coeffs[monomial_index(3, 0, 2)] != 0;
        free_ok && fixed_ok && cusp_ok
    }

    /// Inverse of [`Family::curve`].
    pub fn index_of(&self, form: &QuinticForm) -> Result<u64, PlaneError> {
        if !self.contains(form) {
            return Err(PlaneError::NotInFamily(self.kind));
        }
        let mut idx = 0u64;
        for slot in (0..15).rev() {
            let mut digit = form.coeffs[self.free[slot]] as u64;
            if self.kind == FamilyKind::Cusp && slot == self.cusp_slot {
                digit -= 1;
            }
            idx = idx * self.radix(slot) + digit;
        }
        Ok(idx)
    }
}

/// Convenience wrapper: `Family::new(kind, q)?.curve(idx)`.
pub fn curve_from_index(kind: FamilyKind, idx: u64, q: u64) -> Result<QuinticForm, PlaneError> {
    Family::new(kind, q)?.curve(idx)
}
