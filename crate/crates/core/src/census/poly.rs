//! Dense univariate polynomials over a [`FieldDesc`], lowest degree first.
//! Just enough arithmetic for the elimination strategy: gcds, modular
//! powering, distinct-degree splitting and root finding for split polynomials.

use crate::ff::{FieldDesc, FieldElem};

pub type Poly = Vec<FieldElem>;

pub fn trim(a: &mut Poly) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

pub fn degree(a: &Poly) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn monic(fd: &FieldDesc, a: &Poly) -> Poly {
    let mut out = a.clone();
    trim(&mut out);
    if let Some(&lead) = out.last() {
        let inv = fd.inv(lead);
        for c in out.iter_mut() {
            *c = fd.mul(*c, inv);
        }
    }
    out
}

pub fn sub(fd: &FieldDesc, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(FieldElem::ZERO);
            let y = b.get(i).copied().unwrap_or(FieldElem::ZERO);
            fd.sub(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

pub fn mul(fd: &FieldDesc, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fd.add(out[i + j], fd.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by a nonzero `b`.
pub fn divrem(fd: &FieldDesc, a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut r = a.clone();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv = fd.inv(b[db]);
    let mut quot = vec![FieldElem::ZERO; r.len() - db];
    for k in (db..r.len()).rev() {
        let c = r[k];
        if c.is_zero() {
            continue;
        }
        let f = fd.mul(c, inv);
        quot[k - db] = f;
        for (i, &bi) in b[..=db].iter().enumerate() {
            r[k - db + i] = fd.sub(r[k - db + i], fd.mul(f, bi));
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut quot);
    (quot, r)
}

pub fn rem(fd: &FieldDesc, a: &Poly, b: &Poly) -> Poly {
    divrem(fd, a, b).1
}

/// Monic gcd; the gcd of two zero polynomials is zero.
pub fn gcd(fd: &FieldDesc, a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(fd, &x, &y);
        x = y;
        y = r;
    }
    monic(fd, &x)
}

pub fn mulmod(fd: &FieldDesc, a: &Poly, b: &Poly, m: &Poly) -> Poly {
    rem(fd, &mul(fd, a, b), m)
}

pub fn powmod(fd: &FieldDesc, base: &Poly, mut e: u64, m: &Poly) -> Poly {
    let mut acc = rem(fd, &vec![FieldElem::ONE], m);
    let mut b = rem(fd, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(fd, &acc, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(fd, &b, &b, m);
        }
    }
    acc
}

pub fn eval(fd: &FieldDesc, a: &Poly, x: FieldElem) -> FieldElem {
    a.iter().rev().fold(FieldElem::ZERO, |acc, &c| fd.add(fd.mul(acc, x), c))
}

/// Formal derivative.
pub fn derivative(fd: &FieldDesc, a: &Poly) -> Poly {
    let mut out: Poly = a.iter().enumerate().skip(1).map(|(i, &c)| fd.scale(i as u32, c)).collect();
    trim(&mut out);
    out
}

/// The polynomial `t`.
pub fn var() -> Poly {
    vec![FieldElem::ZERO, FieldElem::ONE]
}

/// For a nonzero `f` over `GF(Q)`, the number of distinct monic irreducible
/// factors of each degree `1..=max_degree`. Repeated factors are counted once.
pub fn factor_degree_counts(fd: &FieldDesc, f: &Poly, max_degree: usize) -> Vec<usize> {
    distinct_degree_parts(fd, f, max_degree).iter().map(|(k, part)| degree(part).unwrap_or(0) / k).collect()
}

/// `(k, E_k)` for `k = 1..=max_degree`, where `E_k` is the product of the
/// distinct monic irreducible factors of `f` of degree exactly `k`.
pub fn distinct_degree_parts(fd: &FieldDesc, f: &Poly, max_degree: usize) -> Vec<(usize, Poly)> {
    let f = monic(fd, f);
    let n = degree(&f).unwrap_or(0);
    let mut parts: Vec<(usize, Poly)> = Vec::with_capacity(max_degree);
    if n == 0 {
        return (1..=max_degree).map(|k| (k, vec![FieldElem::ONE])).collect();
    }
    let t = var();
    let first = powmod(fd, &t, fd.size(), &f);
    // frob = t^(Q^k) mod f
    let mut frob = first.clone();
    for k in 1..=max_degree {
        if k > 1 {
            frob = compose_mod(fd, &frob, &first, &f);
        }
        let all = gcd(fd, &f, &sub(fd, &frob, &t));
        let mut exact = all;
        for (j, part) in &parts {
            if k % j == 0 && degree(part).unwrap_or(0) > 0 {
                exact = divrem(fd, &exact, part).0;
            }
        }
        parts.push((k, monic(fd, &exact)));
    }
    parts
}

/// `h(g) mod m`. Since coefficients lie in `GF(Q)`, `h^Q = h(t^Q)`.
pub fn compose_mod(fd: &FieldDesc, h: &Poly, g: &Poly, m: &Poly) -> Poly {
    let mut acc: Poly = Vec::new();
    for &c in h.iter().rev() {
        acc = mulmod(fd, &acc, g, m);
        let mut with_c = acc.clone();
        if with_c.is_empty() {
            with_c.push(FieldElem::ZERO);
        }
        with_c[0] = fd.add(with_c[0], c);
        trim(&mut with_c);
        acc = with_c;
    }
    rem(fd, &acc, m)
}

/// All roots of a squarefree `f` that splits into linear factors over `fd`,
/// by equal-degree splitting with a deterministic sequence of shifts.
pub fn split_roots(fd: &FieldDesc, f: &Poly) -> Vec<FieldElem> {
    let f = monic(fd, f);
    let mut out = Vec::new();
    let mut stack = vec![f];
    let size = fd.size();
    let mut shift = 0u64;
    while let Some(g) = stack.pop() {
        match degree(&g) {
            None | Some(0) => continue,
            Some(1) => {
                out.push(fd.neg(g[0]));
                continue;
            }
            Some(_) => {}
        }
        let mut attempts = 0u64;
        let d = loop {
            attempts += 1;
            assert!(attempts <= 4 * size + 64, "polynomial does not split into distinct linear factors");
            shift += 1;
            let a = FieldElem(shift % size);
            let probe = splitting_probe(fd, &g, a);
            let d = gcd(fd, &g, &probe);
            let dd = degree(&d).unwrap_or(0);
            if dd > 0 && dd < degree(&g).unwrap() {
                break d;
            }
        };
        let other = divrem(fd, &g, &d).0;
        stack.push(d);
        stack.push(other);
    }
    out.sort();
    out
}

/// A polynomial whose gcd with `g` is a proper factor for about half of all `a`.
fn splitting_probe(fd: &FieldDesc, g: &Poly, a: FieldElem) -> Poly {
    let size = fd.size();
    if fd.p() == 2 {
        // Absolute trace of a*t: sum of (a t)^(2^i) for i < log2(size).
        let bits = size.trailing_zeros();
        let mut term = rem(fd, &vec![FieldElem::ZERO, a], g);
        let mut acc = term.clone();
        for _ in 1..bits {
            term = mulmod(fd, &term, &term, g);
            acc = add(fd, &acc, &term);
        }
        acc
    } else {
        let shifted = vec![a, FieldElem::ONE];
        let h = powmod(fd, &shifted, (size - 1) / 2, g);
        sub(fd, &h, &vec![FieldElem::ONE])
    }
}

pub fn add(fd: &FieldDesc, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(FieldElem::ZERO);
            let y = b.get(i).copied().unwrap_or(FieldElem::ZERO);
            fd.add(x, y)
        })
        .collect();
    trim(&mut out);
    out
}
