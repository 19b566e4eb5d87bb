//! The elimination strategy: project from `P` and find singular points line by line.
//!
//! Write `F = z^3 a + z^2 b + z c + d` with `a, b, c, d` binary forms in
//! `(x, y)` of degrees 2 to 5. On the line through `P` with direction `(u:v)`,
//! the point `(su : sv : t)` satisfies `F = s^2 g(s, t)` with the binary cubic
//! `g = a t^3 + b s t^2 + c s^2 t + d s^3`, coefficients evaluated at `(u, v)`.
//! A singular point other than `P` is a double root of `g`, so its direction
//! is a root of the discriminant `D(u, v)`, a binary form of degree 14, and
//! in fact a multiple root: the two colliding roots of `g` separate linearly
//! as the direction moves. Only roots of degree at most 9 can carry singular
//! points of a reduced quintic.
//!
//! On each candidate line the singular points are the common roots of `F` and
//! its three partials restricted to the line. Their gcd `G` is a polynomial of
//! degree at most 5 in `t` over `GF(q^e)`, and an irreducible factor of degree
//! `k` is one Frobenius orbit of exact degree `e k`. If `D` vanishes
//! identically, every line through `P` is examined instead.

use crate::combinat::mobius;
use crate::ff::{self, FieldDesc, FieldElem};
use crate::plane::{QuinticForm, MONOMIALS};

use super::poly::{self, Poly};
use super::{Budget, CensusError, OrbitCounts, MAX_PROFILE_DEGREE};

/// Outcome of the elimination for one curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub counts: OrbitCounts,
    /// A whole line through `P` is singular, so the singular locus is infinite.
    pub infinite: bool,
    /// The discriminant vanished and every direction was examined.
    pub swept: bool,
}

#[derive(Debug, Clone)]
pub struct Eliminator {
    q: u64,
    base: FieldDesc,
    /// `GF(q^e)` for `e = 1..=9`.
    fields: Vec<FieldDesc>,
    /// Least element of each Frobenius orbit of exact degree `e`, per `e`.
    directions: Vec<Vec<FieldElem>>,
}

impl Eliminator {
    pub fn new(q: u64) -> Result<Eliminator, CensusError> {
        let base = ff::make_field(q, 1, 1)?;
        let mut fields = Vec::new();
        let mut directions = Vec::new();
        for e in 1..=MAX_PROFILE_DEGREE {
            let fd = ff::make_field(q, 1, e)?;
            let reps =
                fd.elements().filter(|&v| fd.degree_of(v) == e && orbit_of(&fd, v).iter().all(|&w| w >= v)).collect();
            directions.push(reps);
            fields.push(fd);
        }
        Ok(Eliminator { q, base, fields, directions })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The discriminant `D(1, v)` as a polynomial of formal degree 14 over `F_q`.
    pub fn discriminant(&self, form: &QuinticForm) -> Poly {
        let fd = &self.base;
        let part = |c: u8| -> Poly {
            let mut out = vec![FieldElem::ZERO; 6 - c as usize];
            for (i, &(_, b, cc)) in MONOMIALS.iter().enumerate() {
                if cc == c {
                    out[b as usize] = FieldElem(form.coeffs[i] as u64);
                }
            }
            out
        };
        let (a, b, c, d) = (part(3), part(2), part(1), part(0));
        let m = |x: &Poly, y: &Poly| poly::mul(fd, x, y);
        let sc = |k: i64, x: &Poly| -> Poly { x.iter().map(|&v| fd.mul(fd.from_int(k), v)).collect() };
        let bc = m(&b, &c);
        let ad = m(&a, &d);
        let terms = [
            m(&bc, &bc),
            sc(-4, &m(&a, &m(&c, &m(&c, &c)))),
            sc(-4, &m(&m(&b, &b), &m(&b, &d))),
            sc(-27, &m(&ad, &ad)),
            sc(18, &m(&ad, &bc)),
        ];
        let mut out = vec![FieldElem::ZERO; 15];
        for t in &terms {
            for (i, &v) in t.iter().enumerate() {
                out[i] = fd.add(out[i], v);
            }
        }
        out
    }

    /// Singular orbits of `form` other than `P`, by exact degree up to 9.
    pub fn eliminate(&self, form: &QuinticForm, budget: Budget) -> Elimination {
        let mut disc = self.discriminant(form);
        poly::trim(&mut disc);
        let mut counts = OrbitCounts::default();
        let mut infinite = self.analyze_line(form, 1, FieldElem::ZERO, FieldElem::ONE, &mut counts);
        if disc.is_empty() {
            for e in 1..=MAX_PROFILE_DEGREE {
                for &v in &self.directions[e as usize - 1] {
                    infinite |= self.analyze_line(form, e, FieldElem::ONE, v, &mut counts);
                }
                counts.complete_through = e;
                if e >= 5 && (infinite || budget.stop_after(&counts, e)) {
                    break;
                }
            }
            return Elimination { counts, infinite, swept: true };
        }
        // A singular point off `P` makes its direction a multiple root of `D`.
        let deriv = poly::derivative(&self.base, &disc);
        let repeated = poly::gcd(&self.base, &disc, &deriv);
        if poly::degree(&repeated).unwrap_or(0) > 0 {
            let parts = poly::distinct_degree_parts(&self.base, &repeated, MAX_PROFILE_DEGREE as usize);
            for (e, part) in parts {
                if poly::degree(&part).unwrap_or(0) == 0 {
                    continue;
                }
                let e = e as u32;
                let fd = &self.fields[e as usize - 1];
                let mut roots = poly::split_roots(fd, &part);
                while let Some(&v) = roots.first() {
                    let orb = orbit_of(fd, v);
                    roots.retain(|r| !orb.contains(r));
                    infinite |= self.analyze_line(form, e, FieldElem::ONE, v, &mut counts);
                }
            }
        }
        counts.complete_through = MAX_PROFILE_DEGREE;
        Elimination { counts, infinite, swept: false }
    }

    /// Add the singular orbits on the line through `P` and `(x0 : y0 : 0)`,
    /// a point of exact degree `e`. Returns whether the whole line is singular.
    fn analyze_line(&self, form: &QuinticForm, e: u32, x0: FieldElem, y0: FieldElem, counts: &mut OrbitCounts) -> bool {
        let fd = &self.fields[e as usize - 1];
        let powers = |v: FieldElem| {
            let mut out = [FieldElem::ONE; 6];
            for k in 1..6 {
                out[k] = fd.mul(out[k - 1], v);
            }
            out
        };
        let (px, py) = (powers(x0), powers(y0));
        let mut rest: [Poly; 4] = std::array::from_fn(|_| vec![FieldElem::ZERO; 6]);
        for (i, &(a, b, c)) in MONOMIALS.iter().enumerate() {
            let w = form.coeffs[i];
            if w == 0 {
                continue;
            }
            let (a, b, c) = (a as usize, b as usize, c as usize);
            let base = fd.scale(w, fd.mul(px[a], py[b]));
            rest[0][c] = fd.add(rest[0][c], base);
            if a > 0 {
                let v = fd.scale(w * a as u32, fd.mul(px[a - 1], py[b]));
                rest[1][c] = fd.add(rest[1][c], v);
            }
            if b > 0 {
                let v = fd.scale(w * b as u32, fd.mul(px[a], py[b - 1]));
                rest[2][c] = fd.add(rest[2][c], v);
            }
            if c > 0 {
                let v = fd.scale(w * c as u32, fd.mul(px[a], py[b]));
                rest[3][c - 1] = fd.add(rest[3][c - 1], v);
            }
        }
        let g = rest.iter().fold(Vec::new(), |acc, r| poly::gcd(fd, &acc, r));
        if g.is_empty() {
            add_whole_line(counts, e, fd.size());
            return true;
        }
        let deg = poly::degree(&g).unwrap_or(0);
        if deg > 0 {
            for (k, n) in poly::factor_degree_counts(fd, &g, deg).into_iter().enumerate() {
                if n > 0 {
                    counts.add(e * (k as u32 + 1), n as u64);
                }
            }
        }
        false
    }
}

/// Orbits of exact degree `e k` on a fully singular line defined over `GF(Q)`, `Q = q^e`,
/// for every `e k <= 9`.
fn add_whole_line(counts: &mut OrbitCounts, e: u32, big_q: u64) {
    let mut k = 1u32;
    while e * k <= MAX_PROFILE_DEGREE {
        let exact: i64 =
            (1..=k).filter(|j| k.is_multiple_of(*j)).map(|j| mobius((k / j) as u64) * (big_q as i64).pow(j)).sum();
        counts.add(e * k, exact as u64 / k as u64);
        k += 1;
    }
    // Points of higher degree exist as well; they only matter through the weight.
    counts.add_beyond(1);
}

fn orbit_of(fd: &FieldDesc, v: FieldElem) -> Vec<FieldElem> {
    let mut out = vec![v];
    let mut w = fd.frobenius(v);
    while w != v {
        out.push(w);
        w = fd.frobenius(w);
    }
    out
}
