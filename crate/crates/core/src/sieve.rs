//! Sieve sums over conjugate point tuples, computed from ranks of linear
//! systems over `F_q`.
//!
//! A curve of a family is singular at a point `R` of exact degree `d` exactly
//! when the three partial derivatives vanish at `R` (plus `F` itself in
//! characteristic 5, where Euler's identity gives nothing). Each such condition
//! is one `F_{q^d}`-linear equation in the 15 free coefficients, which lie in
//! `F_q`; writing it in the power basis of `F_{q^d}` gives `d` equations over
//! `F_q`. Because the coefficients are rational, vanishing at `R` implies
//! vanishing on the whole Frobenius orbit, so one representative per orbit is
//! enough.
//!
//! Tuples are unordered sets of distinct orbits. They are enumerated
//! depth-first with orbits ordered by `(degree, representative)`, extending an
//! incrementally reduced system so that shared prefixes are eliminated once.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat;
use crate::ff::{self, FieldDesc, FieldError};
use crate::par::Exec;
use crate::plane::{
    self, enumerate_points, eval_with_partials, point_exact_degree, Family, FamilyKind, PlaneError, ProjPoint,
    QuinticForm, NUM_MONOMIALS,
};
use crate::symbolic;

/// Largest tuple weight the sieve handles.
pub const MAX_WEIGHT: u32 = 5;

const NCOLS: usize = 15;
/// A row of the augmented system: 15 coefficients followed by the right-hand side.
type Row = [u64; NCOLS + 1];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SieveError {
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("sieve sums need a prime q with q^15 < 2^62, got q = {0}")]
    UnsupportedField(u64),
    #[error("tuple weight {0} exceeds {MAX_WEIGHT}")]
    WeightTooLarge(u32),
    #[error("point {point:?} was given degree {claimed} but has exact degree {actual}")]
    DegreeMismatch { point: ProjPoint, claimed: u32, actual: u32 },
    #[error("the tuple contains P = (0:0:1)")]
    ContainsP,
    #[error("two representatives lie in the same Frobenius orbit")]
    RepeatedOrbit,
}

/// One Frobenius orbit of `P^2 - {P}`, given by a representative over `GF(q^degree)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitRep {
    pub degree: u32,
    pub point: ProjPoint,
}

/// The augmented linear system `A c = b` for one set of orbits, over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub q: u64,
    pub matrix: Vec<Vec<u64>>,
    pub rhs: Vec<u64>,
}

impl LinearSystem {
    pub fn rank(&self) -> usize {
        crate::linalg::rank(&self.matrix, self.q)
    }

    /// `q^(15 - rank)` if consistent, otherwise 0.
    pub fn solution_count(&self) -> u64 {
        match crate::linalg::solution_dimension(&self.matrix, &self.rhs, NCOLS, self.q) {
            Some(dim) => self.q.pow(dim as u32),
            None => 0,
        }
    }
}

fn check_q(q: u64) -> Result<(), SieveError> {
    if !ff::is_prime(q) || q > 17 {
        return Err(SieveError::UnsupportedField(q));
    }
    Ok(())
}

/// Conditions imposed at a singular point: the partials, and `F` itself when `p = 5`.
fn condition_slots(p: u64) -> &'static [usize] {
    if p == 5 {
        &[0, 1, 2, 3]
    } else {
        &[1, 2, 3]
    }
}

/// Weil-restricted rows for one orbit representative.
fn orbit_rows(family: &Family, fd: &FieldDesc, pt: &ProjPoint) -> Vec<Row> {
    let p = fd.p();
    let d = fd.m() as usize;
    let fixed = QuinticForm::new(*family.fixed_part());
    let fixed_vals = eval_with_partials(fd, &fixed, pt);
    let column_vals: Vec<[ff::FieldElem; 4]> = family
        .free_monomials()
        .iter()
        .map(|&mono| {
            let mut coeffs = [0u32; NUM_MONOMIALS];
            coeffs[mono] = 1;
            eval_with_partials(fd, &QuinticForm::new(coeffs), pt)
        })
        .collect();
    let mut rows = Vec::with_capacity(4 * d);
    for &slot in condition_slots(p) {
        let rhs = fd.coeffs(fd.neg(fixed_vals[slot]));
        let cols: Vec<Vec<u32>> = column_vals.iter().map(|v| fd.coeffs(v[slot])).collect();
        for k in 0..d {
            let mut row = [0u64; NCOLS + 1];
            for (j, c) in cols.iter().enumerate() {
                row[j] = c[k] as u64;
            }
            row[NCOLS] = rhs[k] as u64;
            rows.push(row);
        }
    }
    rows
}

/// A system kept in reduced form while rows are appended.
#[derive(Debug, Clone)]
struct Echelon {
    p: u64,
    rows: Vec<(Row, usize)>,
    inconsistent: bool,
}

impl Echelon {
    fn new(p: u64) -> Self {
        Echelon { p, rows: Vec::with_capacity(NCOLS), inconsistent: false }
    }

    fn push(&mut self, mut row: Row) {
        if self.inconsistent {
            return;
        }
        let p = self.p;
        for (r, piv) in &self.rows {
            let f = row[*piv];
            if f != 0 {
                for k in 0..=NCOLS {
                    row[k] = (row[k] + (p - f) * r[k]) % p;
                }
            }
        }
        match (0..NCOLS).find(|&k| row[k] != 0) {
            Some(piv) => {
                let inv = crate::linalg::inv_mod(row[piv], p);
                for v in row.iter_mut() {
                    *v = *v * inv % p;
                }
                self.rows.push((row, piv));
            }
            None if row[NCOLS] != 0 => self.inconsistent = true,
            None => {}
        }
    }

    fn solutions(&self) -> u64 {
        if self.inconsistent {
            0
        } else {
            self.p.pow((NCOLS - self.rows.len()) as u32)
        }
    }
}

/// The unconstrained system and, for the cusp family, the same system with
/// the `x^3 z^2` coefficient forced to zero.
#[derive(Debug, Clone)]
struct State {
    all: Echelon,
    forced: Option<Echelon>,
}

impl State {
    fn new(family: &Family) -> Self {
        let p = family.q() as u64;
        let forced = (family.kind() == FamilyKind::Cusp).then(|| {
            let mut e = Echelon::new(p);
            let mut row = [0u64; NCOLS + 1];
            row[family.cusp_slot()] = 1;
            e.push(row);
            e
        });
        State { all: Echelon::new(p), forced }
    }

    fn extend(&mut self, rows: &[Row]) {
        for &r in rows {
            self.all.push(r);
            if let Some(f) = self.forced.as_mut() {
                f.push(r);
            }
        }
    }

    fn count(&self) -> u64 {
        let all = self.all.solutions();
        match &self.forced {
            Some(f) => all - f.solutions(),
            None => all,
        }
    }
}

/// Orbits of `P^2 - {P}` of degree at most `max_degree`, sorted by
/// `(degree, representative)`; the representative is the least point of its orbit.
#[derive(Debug, Clone)]
pub struct OrbitCatalog {
    q: u64,
    fields: Vec<FieldDesc>,
    orbits: Vec<OrbitRep>,
}

impl OrbitCatalog {
    pub fn new(q: u64, max_degree: u32) -> Result<OrbitCatalog, SieveError> {
        let mut fields = Vec::new();
        let mut orbits = Vec::new();
        for d in 1..=max_degree {
            let fd = ff::make_field(q, 1, d)?;
            for pt in enumerate_points(&fd, true) {
                if point_exact_degree(&fd, &pt) != d {
                    continue;
                }
                if plane::orbit(&fd, &pt).iter().all(|o| *o >= pt) {
                    orbits.push(OrbitRep { degree: d, point: pt });
                }
            }
            fields.push(fd);
        }
        orbits.sort();
        Ok(OrbitCatalog { q, fields, orbits })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn orbits(&self) -> &[OrbitRep] {
        &self.orbits
    }

    /// `GF(q^d)` as used for representatives of degree `d`.
    pub fn field(&self, d: u32) -> &FieldDesc {
        &self.fields[d as usize - 1]
    }

    /// Number of orbits of each degree `1..=max_degree`.
    pub fn counts_by_degree(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.fields.len()];
        for o in &self.orbits {
            out[o.degree as usize - 1] += 1;
        }
        out
    }
}

fn validate_tuple(fields: &mut Vec<FieldDesc>, q: u64, reps: &[OrbitRep]) -> Result<(), SieveError> {
    let weight: u32 = reps.iter().map(|r| r.degree).sum();
    if weight > MAX_WEIGHT {
        return Err(SieveError::WeightTooLarge(weight));
    }
    for r in reps {
        while fields.len() < r.degree as usize {
            let d = fields.len() as u32 + 1;
            fields.push(ff::make_field(q, 1, d)?);
        }
        if r.point.is_p() {
            return Err(SieveError::ContainsP);
        }
        let fd = &fields[r.degree as usize - 1];
        let actual = point_exact_degree(fd, &r.point);
        if actual != r.degree {
            return Err(SieveError::DegreeMismatch { point: r.point, claimed: r.degree, actual });
        }
    }
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            if a.degree == b.degree && plane::orbit(&fields[a.degree as usize - 1], &a.point).contains(&b.point) {
                return Err(SieveError::RepeatedOrbit);
            }
        }
    }
    Ok(())
}

/// The Weil-restricted system of `family` for the orbits `reps`.
pub fn linear_system(family: &Family, reps: &[OrbitRep]) -> Result<LinearSystem, SieveError> {
    let q = family.q() as u64;
    check_q(q)?;
    let mut fields = Vec::new();
    validate_tuple(&mut fields, q, reps)?;
    let mut matrix = Vec::new();
    let mut rhs = Vec::new();
    for r in reps {
        for row in orbit_rows(family, &fields[r.degree as usize - 1], &r.point) {
            matrix.push(row[..NCOLS].to_vec());
            rhs.push(row[NCOLS]);
        }
    }
    Ok(LinearSystem { q, matrix, rhs })
}

/// Number of curves of `family` singular at every point of every orbit in `reps`.
/// For the cusp family only curves with a nonzero `x^3 z^2` coefficient count.
pub fn count_solutions(family: &Family, reps: &[OrbitRep]) -> Result<u64, SieveError> {
    let q = family.q() as u64;
    check_q(q)?;
    let mut fields = Vec::new();
    validate_tuple(&mut fields, q, reps)?;
    let mut state = State::new(family);
    for r in reps {
        state.extend(&orbit_rows(family, &fields[r.degree as usize - 1], &r.point));
    }
    Ok(state.count())
}

/// A family together with the rows of every orbit up to degree 5.
#[derive(Debug, Clone)]
pub struct Sieve {
    family: Family,
    catalog: OrbitCatalog,
    rows: Vec<Vec<Row>>,
}

impl Sieve {
    pub fn new(family: Family) -> Result<Sieve, SieveError> {
        let q = family.q() as u64;
        check_q(q)?;
        let catalog = OrbitCatalog::new(q, MAX_WEIGHT)?;
        let rows = catalog.orbits().iter().map(|o| orbit_rows(&family, catalog.field(o.degree), &o.point)).collect();
        Ok(Sieve { family, catalog, rows })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn catalog(&self) -> &OrbitCatalog {
        &self.catalog
    }

    /// `Σ (-1)^{#orbits} |C(S)|` over all sets `S` of distinct orbits of total degree `w`.
    pub fn sum(&self, w: u32, exec: Exec) -> Result<i64, SieveError> {
        if w > MAX_WEIGHT {
            return Err(SieveError::WeightTooLarge(w));
        }
        let base = State::new(&self.family);
        if w == 0 {
            return Ok(base.count() as i64);
        }
        let orbits = self.catalog.orbits();
        let firsts = orbits.iter().take_while(|o| o.degree <= w).count();
        let parts = exec.map(firsts, |i| {
            let mut state = base.clone();
            state.extend(&self.rows[i]);
            self.descend(i + 1, w - orbits[i].degree, &state, -1)
        });
        Ok(parts.into_iter().sum())
    }

    /// Signed count of all extensions of `state` by orbits from index `start`
    /// on whose degrees add up to `remaining`. `sign` is the sign of `state`.
    fn descend(&self, start: usize, remaining: u32, state: &State, sign: i64) -> i64 {
        if state.all.inconsistent {
            return 0;
        }
        if remaining == 0 {
            return sign * state.count() as i64;
        }
        let orbits = self.catalog.orbits();
        let mut acc = 0;
        for (j, orbit) in orbits.iter().enumerate().skip(start) {
            let d = orbit.degree;
            if d > remaining {
                break;
            }
            let mut next = state.clone();
            next.extend(&self.rows[j]);
            acc += self.descend(j + 1, remaining - d, &next, -sign);
        }
        acc
    }

    pub fn per_weight(&self, exec: Exec) -> Result<Vec<i64>, SieveError> {
        (0..=MAX_WEIGHT).map(|w| self.sum(w, exec)).collect()
    }
}

/// `sieve_sum(family, q, w)` for the canonical family of `kind` over `F_q`.
pub fn sieve_sum(kind: FamilyKind, q: u64, w: u32, exec: Exec) -> Result<i64, SieveError> {
    Sieve::new(Family::new(kind, q)?)?.sum(w, exec)
}

/// `stabilizer_order · closed form` at `q`, the expected value of the total.
pub fn closed_form_total(kind: FamilyKind, q: u64) -> i64 {
    let value = symbolic::sieve_numerator(kind).eval_int(q as i64);
    i64::try_from(value.to_integer()).expect("closed-form total fits in i64")
}

/// The census side of the two-way incidence count for a single curve: the
/// signed number of weight-`w` tuples inside its singular locus, computed
/// from its orbit counts `m_1, m_2, ...`.
pub fn incidence_term(orbit_counts: &[u64], w: u32) -> i64 {
    let v = combinat::pi_w_from_orbits(orbit_counts, w).expect("orbit counts are valid");
    i64::try_from(v).expect("incidence term fits in i64")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveReport {
    pub family: FamilyKind,
    pub q: u64,
    pub per_w: Vec<i64>,
    pub total: i64,
    pub closed_form_total: i64,
    /// Census-side values per weight, when a census was supplied.
    pub oracle_totals: Option<Vec<i64>>,
}

impl SieveReport {
    pub fn total_matches(&self) -> bool {
        self.total == self.closed_form_total
    }

    pub fn oracle_matches(&self) -> Option<bool> {
        self.oracle_totals.as_ref().map(|o| *o == self.per_w)
    }

    pub fn pass(&self) -> bool {
        self.total_matches() && self.oracle_matches().unwrap_or(true)
    }
}

/// All per-weight sums for one family, with the closed-form comparison.
pub fn run_sieve(kind: FamilyKind, q: u64, exec: Exec) -> Result<SieveReport, SieveError> {
    let sieve = Sieve::new(Family::new(kind, q)?)?;
    let per_w = sieve.per_weight(exec)?;
    let total = per_w.iter().sum();
    Ok(SieveReport {
        family: kind,
        q,
        per_w,
        total,
        closed_form_total: closed_form_total(kind, q),
        oracle_totals: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldElem;

    fn rational(x: u64, y: u64, z: u64) -> OrbitRep {
        OrbitRep { degree: 1, point: ProjPoint { x: FieldElem(x), y: FieldElem(y), z: FieldElem(z) } }
    }

    #[test]
    fn catalog_counts_match_mobius_inversion() {
        for q in [2u64, 3] {
            let cat = OrbitCatalog::new(q, 5).unwrap();
            let counts: Vec<u64> = (1..=5).map(|d| q.pow(2 * d) + q.pow(d)).collect();
            assert_eq!(cat.counts_by_degree(), combinat::mobius_orbit_counts(&counts).unwrap());
        }
    }

    #[test]
    fn empty_and_generic_point() {
        let split = Family::new(FamilyKind::Split, 2).unwrap();
        assert_eq!(count_solutions(&split, &[]).unwrap(), 1 << 15);
        let sys = linear_system(&split, &[rational(1, 1, 1)]).unwrap();
        assert_eq!(sys.rank(), 3);
        assert_eq!(count_solutions(&split, &[rational(1, 1, 1)]).unwrap(), 4096);
    }

    #[test]
    fn two_points_on_a_line_through_p() {
        // (1:0:0) and (1:0:1) lie on y = 0, which passes through P.
        let split = Family::new(FamilyKind::Split, 2).unwrap();
        assert_eq!(count_solutions(&split, &[rational(1, 0, 0), rational(1, 0, 1)]).unwrap(), 1 << 10);
    }

    #[test]
    fn cusp_with_collinear_pair_is_empty() {
        let cusp = Family::new(FamilyKind::Cusp, 3).unwrap();
        assert_eq!(count_solutions(&cusp, &[rational(1, 1, 0), rational(1, 1, 2)]).unwrap(), 0);
    }

    #[test]
    fn bad_tuples_are_rejected() {
        let split = Family::new(FamilyKind::Split, 2).unwrap();
        let p = OrbitRep { degree: 1, point: ProjPoint::P };
        assert_eq!(count_solutions(&split, &[p]), Err(SieveError::ContainsP));
        let wrong = OrbitRep { degree: 2, point: ProjPoint { x: FieldElem(1), y: FieldElem(0), z: FieldElem(0) } };
        assert!(matches!(count_solutions(&split, &[wrong]), Err(SieveError::DegreeMismatch { .. })));
        assert_eq!(count_solutions(&split, &[rational(1, 1, 1), rational(1, 1, 1)]), Err(SieveError::RepeatedOrbit));
        let many: Vec<_> = [(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 1, 1), (0, 1, 1), (1, 0, 1)]
            .iter()
            .map(|&(x, y, z)| rational(x, y, z))
            .collect();
        assert_eq!(count_solutions(&split, &many), Err(SieveError::WeightTooLarge(6)));
    }

    #[test]
    fn incremental_matches_batch() {
        let cat = OrbitCatalog::new(2, 3).unwrap();
        for kind in FamilyKind::ALL {
            let fam = Family::new(kind, 2).unwrap();
            for (i, a) in cat.orbits().iter().enumerate().step_by(3) {
                for b in cat.orbits()[i + 1..].iter().step_by(5) {
                    if a.degree + b.degree > 5 {
                        continue;
                    }
                    let sys = linear_system(&fam, &[*a, *b]).unwrap();
                    let direct = sys.solution_count();
                    let expect = if kind == FamilyKind::Cusp {
                        let mut forced = sys.clone();
                        let mut e = vec![0u64; NCOLS];
                        e[fam.cusp_slot()] = 1;
                        forced.matrix.push(e);
                        forced.rhs.push(0);
                        direct - forced.solution_count()
                    } else {
                        direct
                    };
                    assert_eq!(count_solutions(&fam, &[*a, *b]).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn totals_match_closed_forms_at_two() {
        for kind in FamilyKind::ALL {
            let report = run_sieve(kind, 2, Exec::Sequential).unwrap();
            assert_eq!(report.per_w[0] as u64, Family::new(kind, 2).unwrap().size());
            assert!(report.total_matches(), "{report:?}");
        }
        assert_eq!(closed_form_total(FamilyKind::Split, 2), 12288);
    }
}
