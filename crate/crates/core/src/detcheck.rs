//! Polynomial identity checks for three independence determinants.
//!
//! Each case builds a square matrix of point conditions whose entries are
//! polynomials in up to four parameters `(α, β, γ, δ)` and compares its
//! determinant with a product formula at every point of the grid
//! `{0, ..., 15}^k` over three large primes. The determinant and the target
//! both have degree at most 15 in each parameter, so agreement on 16 values
//! per parameter proves the identity over each `F_p` (up to the sign, which
//! depends on the unstated row and column order and is reported, not
//! asserted). Agreement modulo all three primes is then strong evidence for
//! the identity over the integers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::par::Exec;
use crate::plane::{monomial_index, MONOMIALS};

pub const PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];
pub const GRID: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DetCase {
    #[serde(rename = "GENPOS5")]
    GenPos5,
    #[serde(rename = "LINES")]
    Lines,
    #[serde(rename = "CUSP4")]
    Cusp4,
}

impl DetCase {
    pub const ALL: [DetCase; 3] = [DetCase::GenPos5, DetCase::Lines, DetCase::Cusp4];

    pub fn name(self) -> &'static str {
        match self {
            DetCase::GenPos5 => "GENPOS5",
            DetCase::Lines => "LINES",
            DetCase::Cusp4 => "CUSP4",
        }
    }

    /// Number of parameters the matrix actually depends on.
    pub fn num_vars(self) -> usize {
        match self {
            DetCase::Lines => 1,
            DetCase::GenPos5 | DetCase::Cusp4 => 4,
        }
    }

    pub fn size(self) -> usize {
        match self {
            DetCase::GenPos5 => 15,
            DetCase::Lines => 4,
            DetCase::Cusp4 => 12,
        }
    }
}

impl fmt::Display for DetCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DetCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "GENPOS5" => Ok(DetCase::GenPos5),
            "LINES" => Ok(DetCase::Lines),
            "CUSP4" => Ok(DetCase::Cusp4),
            other => Err(format!("unknown determinant case `{other}` (expected GENPOS5, LINES or CUSP4)")),
        }
    }
}

#[derive(Clone, Copy)]
enum Cond {
    OnCurve,
    Dx,
    Dy,
    Dz,
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Value of the condition `cond` applied to `x^a y^b z^c` at `pt`.
fn entry(cond: Cond, (a, b, c): (u8, u8, u8), pt: [u64; 3], p: u64) -> u64 {
    let (a, b, c) = (a as u64, b as u64, c as u64);
    let [x, y, z] = pt;
    let mono =
        |da: u64, db: u64, dc: u64| pow_mod(x, a - da, p) * pow_mod(y, b - db, p) % p * pow_mod(z, c - dc, p) % p;
    match cond {
        Cond::OnCurve => mono(0, 0, 0),
        Cond::Dx if a > 0 => a * mono(1, 0, 0) % p,
        Cond::Dy if b > 0 => b * mono(0, 1, 0) % p,
        Cond::Dz if c > 0 => c * mono(0, 0, 1) % p,
        _ => 0,
    }
}

fn rows_for(points: &[[u64; 3]], conds: &[Cond], columns: &[(u8, u8, u8)], p: u64) -> Vec<Vec<u64>> {
    let mut rows = Vec::with_capacity(points.len() * conds.len());
    for &pt in points {
        for &cond in conds {
            rows.push(columns.iter().map(|&m| entry(cond, m, pt, p)).collect());
        }
    }
    rows
}

/// The square condition matrix of `case` at `vars = [α, β, γ, δ]` over `F_p`.
pub fn build_matrix(case: DetCase, vars: [u64; 4], p: u64) -> Vec<Vec<u64>> {
    let [al, be, ga, de] = vars.map(|v| v % p);
    match case {
        DetCase::GenPos5 => {
            let excluded = [(2, 0, 3), (1, 1, 3), (0, 2, 3), (1, 0, 4), (0, 1, 4), (0, 0, 5)];
            let columns: Vec<_> = MONOMIALS.iter().copied().filter(|m| !excluded.contains(m)).collect();
            // At (1:0:0) the x-derivative is five times the value (Euler), so the
            // y-derivative takes its place there. CUSP4 swaps y for x at (0:1:0)
            // for the same reason.
            let mut rows = rows_for(&[[1, 0, 0]], &[Cond::OnCurve, Cond::Dy, Cond::Dz], &columns, p);
            let points = [[0, 1, 0], [1, 1, 1], [1, al, be], [1, ga, de]];
            rows.extend(rows_for(&points, &[Cond::OnCurve, Cond::Dx, Cond::Dz], &columns, p));
            rows
        }
        DetCase::Lines => {
            let columns = [(3, 0, 0), (2, 1, 0), (1, 2, 0), (0, 3, 0)];
            let points = [[1, 0, 0], [0, 1, 0], [1, 1, 0], [1, al, 0]];
            let mut rows = Vec::new();
            for pt in points {
                rows.push(
                    columns
                        .iter()
                        .map(|&(a, b, c)| pow_mod(pt[0], a, p) * pow_mod(pt[1], b, p) % p * pow_mod(pt[2], c, p) % p)
                        .collect(),
                );
            }
            rows
        }
        DetCase::Cusp4 => {
            let columns = [
                (0, 3, 2),
                (1, 3, 1),
                (2, 2, 1),
                (3, 1, 1),
                (4, 0, 1),
                (2, 3, 0),
                (3, 2, 0),
                (4, 1, 0),
                (5, 0, 0),
                (1, 4, 0),
                (0, 4, 1),
                (0, 5, 0),
            ];
            debug_assert!(columns.iter().all(|&(a, b, c)| monomial_index(a, b, c) < 21));
            let mut rows = rows_for(&[[0, 1, 0]], &[Cond::OnCurve, Cond::Dx, Cond::Dz], &columns, p);
            let points = [[1, 1, 1], [1, al, be], [1, ga, de]];
            rows.extend(rows_for(&points, &[Cond::OnCurve, Cond::Dy, Cond::Dz], &columns, p));
            rows
        }
    }
}

/// The product formula for `case` at `vars` over `F_p`, without any sign.
pub fn target(case: DetCase, vars: [u64; 4], p: u64) -> u64 {
    let [al, be, ga, de] = vars.map(|v| v % p);
    let m = |a: u64, b: u64| a * b % p;
    let s = |a: u64, b: u64| (a + p - b) % p;
    let one = 1 % p;
    match case {
        DetCase::GenPos5 => {
            // αβγ − αβδ − αγδ + βγδ − βγ + αδ
            let conic = (m(m(al, be), ga) + p - m(m(al, be), de) + p - m(m(al, ga), de) + m(m(be, ga), de) + p
                - m(be, ga)
                + m(al, de))
                % p;
            let mut t = pow_mod(conic, 4, p);
            t = m(t, s(al, ga));
            t = m(t, s(al, one));
            t = m(t, m(al, al));
            t = m(t, s(ga, one));
            m(t, m(ga, ga))
        }
        DetCase::Lines => m(al, s(al, one)),
        DetCase::Cusp4 => {
            // αβγ − αγδ − αβ + γδ + α − γ
            let conic = (m(m(al, be), ga) + p - m(m(al, ga), de) + p - m(al, be) + m(ga, de) + al + p - ga) % p;
            let mut t = pow_mod(conic, 3, p);
            t = m(t, pow_mod(s(al, ga), 2, p));
            t = m(t, pow_mod(s(al, one), 2, p));
            m(t, pow_mod(s(ga, one), 2, p))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub case: DetCase,
    pub prime: u64,
    /// `+1` or `-1` when determined; 0 when the target vanishes on the whole grid.
    pub sign: i8,
    pub grid_points: u64,
    pub mismatches: u64,
    /// First grid point `(α, β, γ, δ)` where the identity fails.
    pub witness: Option<[u64; 4]>,
}

impl PrimeReport {
    pub fn pass(&self) -> bool {
        self.mismatches == 0 && self.sign != 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: DetCase,
    pub primes: Vec<PrimeReport>,
    pub pass: bool,
}

fn grid_point(case: DetCase, idx: u64) -> [u64; 4] {
    let mut vars = [0u64; 4];
    let mut v = idx;
    for slot in vars.iter_mut().take(case.num_vars()) {
        *slot = v % GRID;
        v /= GRID;
    }
    vars
}

/// Compare `det` with `± target` over the whole grid for one prime.
pub fn verify_identity_mod(case: DetCase, p: u64, exec: Exec) -> PrimeReport {
    let points = GRID.pow(case.num_vars() as u32);
    let chunk = GRID.pow(case.num_vars() as u32 - 1).max(1);
    let chunks = points.div_ceil(chunk) as usize;
    // Each chunk reports (index, det, target) for grid points where they differ
    // and a nonzero sample deciding the sign.
    let per_chunk = exec.map(chunks, |c| {
        let mut pos: Option<u64> = None;
        let mut neg: Option<u64> = None;
        let mut pairs = Vec::new();
        for idx in (c as u64 * chunk)..((c as u64 + 1) * chunk).min(points) {
            let vars = grid_point(case, idx);
            let d = linalg::det(&build_matrix(case, vars, p), p);
            let t = target(case, vars, p);
            if d != t && pos.is_none() {
                pos = Some(idx);
            }
            if d != (p - t) % p && neg.is_none() {
                neg = Some(idx);
            }
            if t != 0 && pairs.is_empty() {
                pairs.push((d, t));
            }
        }
        (pos, neg, pairs.first().copied(), c)
    });
    let first_nonzero = per_chunk.iter().find_map(|r| r.2);
    let sign: i8 = match first_nonzero {
        Some((d, t)) if d == t => 1,
        Some((d, t)) if d == (p - t) % p => -1,
        _ => 0,
    };
    let bad: Vec<u64> = per_chunk
        .iter()
        .filter_map(|&(pos, neg, _, _)| match sign {
            1 => pos,
            -1 => neg,
            _ => pos.or(neg),
        })
        .collect();
    // Count mismatching points exactly only if some chunk failed.
    let mismatches = if bad.is_empty() {
        0
    } else {
        (0..points)
            .filter(|&idx| {
                let vars = grid_point(case, idx);
                let d = linalg::det(&build_matrix(case, vars, p), p);
                let t = target(case, vars, p);
                let expect = if sign == -1 { (p - t) % p } else { t };
                d != expect
            })
            .count() as u64
    };
    PrimeReport {
        case,
        prime: p,
        sign,
        grid_points: points,
        mismatches,
        witness: bad.first().map(|&idx| grid_point(case, idx)),
    }
}

/// Run the grid check over all three primes; the sign must agree across primes.
pub fn verify_identity(case: DetCase, exec: Exec) -> CaseReport {
    let primes: Vec<PrimeReport> = PRIMES.iter().map(|&p| verify_identity_mod(case, p, exec)).collect();
    let sign = primes[0].sign;
    let pass = primes.iter().all(|r| r.pass() && r.sign == sign);
    CaseReport { case, primes, pass }
}
