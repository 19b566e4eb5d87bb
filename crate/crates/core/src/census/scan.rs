//! The scanning strategy: test one representative of every Frobenius orbit.

use crate::ff::{self, FieldDesc, FieldElem};
use crate::plane::{enumerate_points, is_singular_at, orbit, point_exact_degree, ProjPoint, QuinticForm, MONOMIALS};

use super::{Budget, CensusError, OrbitCounts, MAX_PROFILE_DEGREE};

/// Orbit representatives of one degree with their 21 monomial values.
#[derive(Debug, Clone)]
struct DegreeTable {
    fd: FieldDesc,
    points: Vec<ProjPoint>,
    values: Vec<[u32; 21]>,
}

/// Precomputed orbit representatives of `P^2 - {P}` up to `precomputed`
/// degrees; higher degrees up to 9 are enumerated point by point.
#[derive(Debug, Clone)]
pub struct Scanner {
    q: u64,
    tables: Vec<DegreeTable>,
    fields: Vec<FieldDesc>,
}

impl Scanner {
    pub fn new(q: u64, precomputed: u32) -> Result<Scanner, CensusError> {
        let precomputed = precomputed.min(MAX_PROFILE_DEGREE);
        let mut fields = Vec::new();
        let mut tables = Vec::new();
        for d in 1..=MAX_PROFILE_DEGREE {
            let fd = ff::make_field(q, 1, d)?;
            if d <= precomputed {
                let mut points = Vec::new();
                let mut values = Vec::new();
                for pt in enumerate_points(&fd, true) {
                    if point_exact_degree(&fd, &pt) != d || orbit(&fd, &pt).iter().any(|o| *o < pt) {
                        continue;
                    }
                    values.push(monomial_values(&fd, &pt));
                    points.push(pt);
                }
                tables.push(DegreeTable { fd: fd.clone(), points, values });
            }
            fields.push(fd);
        }
        Ok(Scanner { q, tables, fields })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Number of precomputed representatives of each degree.
    pub fn representative_counts(&self) -> Vec<usize> {
        self.tables.iter().map(|t| t.points.len()).collect()
    }

    /// Exact-degree orbit counts `m_1, ..., m_max_degree`, stopping early per `budget`.
    pub fn orbit_counts(&self, form: &QuinticForm, max_degree: u32, budget: Budget) -> OrbitCounts {
        let mut counts = OrbitCounts::default();
        for d in 1..=max_degree.min(MAX_PROFILE_DEGREE) {
            match self.tables.get(d as usize - 1) {
                Some(table) => {
                    for (pt, vals) in table.points.iter().zip(&table.values) {
                        if value_is_zero(&table.fd, form, vals) && is_singular_at(&table.fd, form, pt) {
                            counts.add(d, 1);
                            if budget.stop_within(&counts, d) {
                                return counts;
                            }
                        }
                    }
                }
                None => {
                    let fd = &self.fields[d as usize - 1];
                    let mut found = 0u64;
                    for pt in enumerate_points(fd, true) {
                        if is_singular_at(fd, form, &pt) && point_exact_degree(fd, &pt) == d {
                            found += 1;
                            if found.is_multiple_of(d as u64) {
                                counts.add(d, 1);
                                if budget.stop_within(&counts, d) {
                                    return counts;
                                }
                            }
                        }
                    }
                }
            }
            counts.complete_through = d;
            if budget.stop_after(&counts, d) {
                return counts;
            }
        }
        counts
    }

    /// Number of singular points other than `P` over `GF(q^d)` by direct enumeration.
    pub fn count_points_over(&self, form: &QuinticForm, d: u32) -> Result<u64, CensusError> {
        let fd = ff::make_field(self.q, 1, d)?;
        Ok(enumerate_points(&fd, true).filter(|pt| is_singular_at(&fd, form, pt)).count() as u64)
    }
}

fn monomial_values(fd: &FieldDesc, pt: &ProjPoint) -> [u32; 21] {
    let powers = |v: FieldElem| {
        let mut out = [FieldElem::ONE; 6];
        for k in 1..6 {
            out[k] = fd.mul(out[k - 1], v);
        }
        out
    };
    let (px, py, pz) = (powers(pt.x), powers(pt.y), powers(pt.z));
    let mut out = [0u32; 21];
    for (i, &(a, b, c)) in MONOMIALS.iter().enumerate() {
        out[i] = fd.mul(fd.mul(px[a as usize], py[b as usize]), pz[c as usize]).0 as u32;
    }
    out
}

#[inline]
fn value_is_zero(fd: &FieldDesc, form: &QuinticForm, vals: &[u32; 21]) -> bool {
    if fd.p() == 2 {
        let mut acc = 0u32;
        for (c, v) in form.coeffs.iter().zip(vals) {
            if *c != 0 {
                acc ^= v;
            }
        }
        return acc == 0;
    }
    let mut acc = FieldElem::ZERO;
    for (&c, &v) in form.coeffs.iter().zip(vals) {
        if c != 0 {
            acc = fd.add(acc, fd.scale(c, FieldElem(v as u64)));
        }
    }
    acc.is_zero()
}
