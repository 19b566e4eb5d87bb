//! Arithmetic in small finite fields `GF(p^m)` with a designated base field
//! `F_q`, `q = p^s`, `s | m`.
//!
//! Elements are stored as their index `Σ c_i p^i`, where `c_0..c_{m-1}` are
//! the coordinates in the power basis of the modulus. In characteristic two
//! the index is the coordinate bitmask and addition is XOR.
//!
//! Fields of at most [`TABLE_LIMIT`] elements carry log/antilog tables (plus
//! Zech logarithms in odd characteristic); larger fields fall back to
//! schoolbook multiplication followed by reduction. Both paths produce
//! identical results.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field size, as a power of two.
pub const MAX_FIELD_BITS: u32 = 40;

/// Fields up to this many elements get log/antilog tables.
pub const TABLE_LIMIT: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("degree and base exponent must be positive")]
    ZeroDegree,
    #[error("base exponent {s} does not divide degree {m}")]
    BadSubfield { s: u32, m: u32 },
    #[error("field size {p}^{m} exceeds 2^{MAX_FIELD_BITS}")]
    TooLarge { p: u64, m: u32 },
    #[error("modulus is not a monic irreducible polynomial of degree {0} over F_p")]
    NotIrreducible(u32),
    #[error("attempted to invert zero")]
    ZeroInverse,
    #[error("quadratic data needs a degree-2 extension of the base field (s = {s}, m = {m})")]
    NotQuadratic { s: u32, m: u32 },
    #[error("trace or norm of the generator is not in the base field")]
    NotInBase,
}

/// A field element, stored as its index `Σ c_i p^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct FieldElem(pub u64);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone)]
struct Tables {
    /// `exp[i] = g^i` for `0 <= i < 2(size-1)`.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`.
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, `NO_LOG` when `1 + g^k = 0`. Odd characteristic only.
    zech: Vec<u32>,
}

/// Description of `GF(p^m)` with base subfield `F_q`, `q = p^s`.
#[derive(Debug, Clone)]
pub struct FieldDesc {
    p: u64,
    s: u32,
    m: u32,
    q: u64,
    size: u64,
    /// Monic modulus, constant term first, length `m + 1`.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.s == other.s && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldDesc {}

/// Trace and norm of the adjoined generator of a quadratic extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticData {
    pub t: FieldElem,
    pub n: FieldElem,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_size(p: u64, m: u32) -> Result<u64, FieldError> {
    let mut size: u64 = 1;
    for _ in 0..m {
        size = size.checked_mul(p).ok_or(FieldError::TooLarge { p, m })?;
        if size > 1u64 << MAX_FIELD_BITS {
            return Err(FieldError::TooLarge { p, m });
        }
    }
    Ok(size)
}

/// Build `GF(p^m)` with base field `F_{p^s}` and the canonical modulus: the
/// lexicographically smallest monic irreducible of degree `m`, comparing
/// coefficients from the constant term upward.
pub fn make_field(p: u64, s: u32, m: u32) -> Result<FieldDesc, FieldError> {
    validate_params(p, s, m)?;
    let modulus = smallest_irreducible(p as u32, m);
    FieldDesc::build(p, s, m, modulus)
}

fn validate_params(p: u64, s: u32, m: u32) -> Result<(), FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if s == 0 || m == 0 {
        return Err(FieldError::ZeroDegree);
    }
    if !m.is_multiple_of(s) {
        return Err(FieldError::BadSubfield { s, m });
    }
    checked_size(p, m)?;
    Ok(())
}

impl FieldDesc {
    /// Build a field from an explicit monic modulus (constant term first, length `m + 1`).
    pub fn with_modulus(p: u64, s: u32, modulus: &[u32]) -> Result<FieldDesc, FieldError> {
        if modulus.len() < 2 {
            return Err(FieldError::ZeroDegree);
        }
        let m = (modulus.len() - 1) as u32;
        validate_params(p, s, m)?;
        let pp = p as u32;
        if *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= pp) || !fp_poly::is_irreducible(modulus, pp) {
            return Err(FieldError::NotIrreducible(m));
        }
        FieldDesc::build(p, s, m, modulus.to_vec())
    }

    fn build(p: u64, s: u32, m: u32, modulus: Vec<u32>) -> Result<FieldDesc, FieldError> {
        let size = checked_size(p, m)?;
        let q = checked_size(p, s)?;
        let mut fd = FieldDesc { p, s, m, q, size, modulus, tables: None };
        if size <= TABLE_LIMIT {
            fd.tables = Some(fd.build_tables());
        }
        Ok(fd)
    }

    fn build_tables(&self) -> Tables {
        let n = (self.size - 1) as usize;
        let g = self.find_generator();
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![NO_LOG; self.size as usize];
        let mut cur = FieldElem::ONE;
        for (i, slot) in exp.iter_mut().take(n).enumerate() {
            *slot = cur.0 as u32;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_schoolbook(cur, g);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        let mut zech = Vec::new();
        if self.p != 2 {
            zech = vec![NO_LOG; n];
            for (k, z) in zech.iter_mut().enumerate() {
                let v = self.add_digits(FieldElem::ONE, FieldElem(exp[k] as u64));
                if !v.is_zero() {
                    *z = log[v.0 as usize];
                }
            }
        }
        Tables { exp, log, zech }
    }

    fn find_generator(&self) -> FieldElem {
        let n = self.size - 1;
        if n == 1 {
            return FieldElem::ONE;
        }
        let factors = prime_factors(n);
        (1..self.size)
            .map(FieldElem)
            .find(|&g| factors.iter().all(|&r| self.pow_schoolbook(g, n / r) != FieldElem::ONE))
            .expect("multiplicative group is cyclic")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Order of the base field.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Number of elements, `p^m`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Degree over the base field, `m / s`.
    pub fn degree_over_base(&self) -> u32 {
        self.m / self.s
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// The prime-field element `k mod p`.
    pub fn from_int(&self, k: i64) -> FieldElem {
        FieldElem(k.rem_euclid(self.p as i64) as u64)
    }

    /// The generator `x` of the power basis (equal to 0 when `m = 1` and the modulus is `x`).
    pub fn generator(&self) -> FieldElem {
        if self.m == 1 {
            FieldElem((self.p as u32 - self.modulus[0]) as u64 % self.p)
        } else {
            FieldElem(self.p)
        }
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut v = a.0;
        for _ in 0..self.m {
            out.push((v % self.p) as u32);
            v /= self.p;
        }
        out
    }

    /// Element with the given power-basis coordinates (must have length `m`, entries in `[0, p)`).
    pub fn from_coeffs(&self, c: &[u32]) -> FieldElem {
        assert_eq!(c.len(), self.m as usize, "coordinate vector has wrong length");
        let mut v = 0u64;
        for &ci in c.iter().rev() {
            assert!((ci as u64) < self.p, "coordinate out of range");
            v = v * self.p + ci as u64;
        }
        FieldElem(v)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.size).map(FieldElem)
    }

    /// Elements of the base field `F_q`, in increasing index order.
    pub fn base_elements(&self) -> Vec<FieldElem> {
        if self.s == self.m {
            return self.elements().collect();
        }
        if self.s == 1 {
            return (0..self.p).map(FieldElem).collect();
        }
        self.elements().filter(|&a| self.frobenius(a) == a).collect()
    }

    pub fn is_in_base(&self, a: FieldElem) -> bool {
        if self.s == 1 {
            a.0 < self.p
        } else {
            self.frobenius(a) == a
        }
    }

    fn add_digits(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut place = 1u64;
        while x != 0 || y != 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        FieldElem(out)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        match &self.tables {
            Some(t) => {
                let n = (self.size - 1) as u32;
                let la = t.log[a.0 as usize];
                let lb = t.log[b.0 as usize];
                let k = if lb >= la { lb - la } else { lb + n - la };
                let z = t.zech[k as usize];
                if z == NO_LOG {
                    FieldElem::ZERO
                } else {
                    FieldElem(t.exp[(la + z) as usize] as u64)
                }
            }
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        if self.p == 3 {
            if let Some(t) = &self.tables {
                // -1 = g^((size-1)/2)
                let half = ((self.size - 1) / 2) as u32;
                return FieldElem(t.exp[(t.log[a.0 as usize] + half) as usize] as u64);
            }
        }
        let mut v = a.0;
        let mut out = 0u64;
        let mut place = 1u64;
        while v != 0 {
            let d = v % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            v /= self.p;
        }
        FieldElem(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize] + t.log[b.0 as usize];
                FieldElem(t.exp[l as usize] as u64)
            }
            None => self.mul_schoolbook(a, b),
        }
    }

    /// Multiply by the prime-field scalar `k mod p`.
    #[inline]
    pub fn scale(&self, k: u32, a: FieldElem) -> FieldElem {
        match k as u64 % self.p {
            0 => FieldElem::ZERO,
            1 => a,
            k if k + 1 == self.p => self.neg(a),
            k => self.mul(FieldElem(k), a),
        }
    }

    fn mul_schoolbook(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let m = self.m as usize;
        let p = self.p;
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (m..2 * m - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &r) in self.modulus[..m].iter().enumerate() {
                let idx = k - m + i;
                prod[idx] = (prod[idx] + (p - c) * r as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..m].iter().map(|&d| d as u32).collect();
        self.from_coeffs(&digits)
    }

    fn pow_schoolbook(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_schoolbook(acc, base);
            }
            base = self.mul_schoolbook(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = self.size - 1;
                let l = (t.log[a.0 as usize] as u128 * (e % n) as u128 % n as u128) as usize;
                FieldElem(t.exp[l] as u64)
            }
            None => self.pow_schoolbook(a, e),
        }
    }

    pub fn checked_inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(match &self.tables {
            Some(t) => {
                let n = (self.size - 1) as u32;
                let l = t.log[a.0 as usize];
                FieldElem(t.exp[((n - l) % n) as usize] as u64)
            }
            None => self.pow_schoolbook(a, self.size - 2),
        })
    }

    /// Inverse of a nonzero element.
    ///
    /// Panics on zero: inverting zero is always a caller bug.
    #[inline]
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        self.checked_inv(a).expect("inverse of zero field element")
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b))
    }

    /// `a^q`: Frobenius over the base field.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.q)
    }

    /// Smallest `d >= 1` with `a^(q^d) = a`, i.e. the degree of `a` over `F_q`.
    pub fn degree_of(&self, a: FieldElem) -> u32 {
        let mut d = 1;
        let mut b = self.frobenius(a);
        while b != a {
            b = self.frobenius(b);
            d += 1;
        }
        d
    }
}

/// Trace and norm over `F_q` of the residue class of the adjoined generator,
/// for a field of degree 2 over its base.
pub fn quadratic_data(fd2: &FieldDesc) -> Result<QuadraticData, FieldError> {
    if fd2.m != 2 * fd2.s {
        return Err(FieldError::NotQuadratic { s: fd2.s, m: fd2.m });
    }
    let alpha = fd2.generator();
    let conj = fd2.frobenius(alpha);
    let t = fd2.add(alpha, conj);
    let n = fd2.mul(alpha, conj);
    if !fd2.is_in_base(t) || !fd2.is_in_base(n) || fd2.is_in_base(alpha) {
        return Err(FieldError::NotInBase);
    }
    Ok(QuadraticData { t, n })
}

/// `X^2 - tX + n` has no root in the base field of `fd`.
pub fn quadratic_is_irreducible(fd: &FieldDesc, qd: QuadraticData) -> bool {
    fd.base_elements().into_iter().all(|x| {
        let v = fd.add(fd.sub(fd.mul(x, x), fd.mul(qd.t, x)), qd.n);
        !v.is_zero()
    })
}

fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1];
    }
    let m = m as usize;
    let total = (p as u64).pow(m as u32);
    // Constant term is the most significant digit of the search order.
    for j in total / p as u64..total {
        let mut poly = vec![0u32; m + 1];
        poly[m] = 1;
        let mut v = j;
        for k in (0..m).rev() {
            poly[k] = (v % p as u64) as u32;
            v /= p as u64;
        }
        if fp_poly::is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Minimal dense polynomial arithmetic over `F_p`, used only to validate moduli.
pub(crate) mod fp_poly {
    fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p) as u64;
        while r.len() > db {
            let k = r.len() - 1 - db;
            let c = r[r.len() - 1] as u64 * lead_inv % p as u64;
            for (i, &bi) in b.iter().enumerate() {
                let v = (r[k + i] as u64 + (p as u64 - c) * bi as u64) % p as u64;
                r[k + i] = v as u32;
            }
            r = trim(r);
        }
        r
    }

    fn mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|v| v as u32).collect();
        rem(&prod, f, p)
    }

    fn powmod(a: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
        let mut base = rem(a, f, p);
        let mut acc = vec![1u32];
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, f, p);
            }
            base = mulmod(&base, &base, f, p);
            e >>= 1;
        }
        acc
    }

    fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out = vec![0u32; n];
        for (i, o) in out.iter_mut().enumerate() {
            let x = *a.get(i).unwrap_or(&0);
            let y = *b.get(i).unwrap_or(&0);
            *o = (x + p - y) % p;
        }
        trim(out)
    }

    /// `x^(p^k) mod f`.
    fn frob_power(f: &[u32], k: usize, p: u32) -> Vec<u32> {
        let mut h = rem(&[0, 1], f, p);
        for _ in 0..k {
            h = powmod(&h, p as u64, f, p);
        }
        h
    }

    /// Rabin's test for a monic polynomial given constant term first.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let m = f.len() - 1;
        if m == 1 {
            return true;
        }
        let x = vec![0u32, 1];
        if !sub(&frob_power(f, m, p), &rem(&x, f, p), p).is_empty() {
            return false;
        }
        let mut n = m;
        let mut primes = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                primes.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        primes.into_iter().all(|r| {
            let h = sub(&frob_power(f, m / r, p), &x, p);
            gcd(f, &h, p).len() == 1
        })
    }
}
