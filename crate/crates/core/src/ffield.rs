//! Arithmetic in `F_q`, `q = p^f`.
//!
//! Elements are stored by their radix-`p` packing: the element
//! `c_0 + c_1 x + ... + c_{f-1} x^{f-1}` of `Z_p[x]/(m)` is the integer
//! `c_0 + c_1 p + ... + c_{f-1} p^{f-1}` in `[0, q)`. The same integers are used in
//! group-spec files and reports.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{is_prime, prime_divisors};

/// Largest field order for which arithmetic is supported.
pub const FIELD_CEILING: u64 = 1 << 32;
/// Largest field order for which exp/log tables are built.
pub const LOG_TABLE_CEILING: u64 = 1 << 20;
const ADD_TABLE_CEILING: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Element with the given integer encoding. The caller guarantees `i < q`.
    pub const fn from_index(i: u32) -> Self {
        FieldElem(i)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The field `F_{p^f}` with a fixed modulus and multiplicative generator.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u64,
    f: u32,
    q: u64,
    /// Low coefficients `c_0..c_{f-1}` of the monic modulus `x^f + ...`.
    modulus: Vec<u64>,
    omega: FieldElem,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Vec<u32>,
}

// Polynomials over Z_p, little-endian coefficient vectors.

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128;
    let mut b128 = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b128 % m128;
        }
        b128 = b128 * b128 % m128;
        e >>= 1;
    }
    r as u64
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// `a * b mod (x^f + low)` for a monic modulus given by its low coefficients.
fn poly_mulmod(a: &[u64], b: &[u64], low: &[u64], p: u64) -> Vec<u64> {
    let f = low.len();
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (f..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &m) in low.iter().enumerate() {
            let k = deg - f + i;
            prod[k] = (prod[k] + (p - c) * m) % p;
        }
    }
    prod.truncate(f);
    trim(&mut prod);
    prod
}

fn poly_powmod(base: &[u64], mut e: u64, low: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &b, low, p);
        }
        e >>= 1;
        if e > 0 {
            b = poly_mulmod(&b, &b, low, p);
        }
    }
    result
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for (i, &bi) in b.iter().enumerate() {
            let k = dr - db + i;
            r[k] = (r[k] + (p - c) * bi % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: `x^f + low` is irreducible iff `gcd(x^(p^k) - x, m) = 1` for `k <= f/2`.
fn is_irreducible(low: &[u64], p: u64) -> bool {
    let f = low.len();
    let mut full = low.to_vec();
    full.push(1);
    let x = vec![0u64, 1];
    let mut xpk = x.clone();
    for _ in 1..=f / 2 {
        xpk = poly_powmod(&xpk, p, low, p);
        let mut diff = xpk.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        let g = poly_gcd(&full, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn decode(mut x: u64, p: u64, f: u32) -> Vec<u64> {
    let mut c = Vec::with_capacity(f as usize);
    for _ in 0..f {
        c.push(x % p);
        x /= p;
    }
    trim(&mut c);
    c
}

fn encode(c: &[u64], p: u64) -> u64 {
    c.iter().rev().fold(0u64, |acc, &d| acc * p + d)
}

/// Constructs `F_{p^f}`: the least monic irreducible of degree `f` (ordered by the
/// integer packing of its low coefficients) and the least element of full order.
pub fn make_field(p: u64, f: u32) -> Result<FieldCtx> {
    FieldCtx::new(p, f)
}

impl FieldCtx {
    pub fn new(p: u64, f: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 {
            return Err(Error::OutOfRange("field degree must be positive".into()));
        }
        let q = p
            .checked_pow(f)
            .filter(|&q| q <= FIELD_CEILING)
            .ok_or(Error::FieldTooLarge { p, f })?;

        let modulus = (0..q)
            .map(|c| {
                let mut low = decode(c, p, f);
                low.resize(f as usize, 0);
                low
            })
            .find(|low| is_irreducible(low, p))
            .expect("an irreducible polynomial of every degree exists");

        let mut ctx = FieldCtx {
            p,
            f,
            q,
            modulus,
            omega: FieldElem::ONE,
            exp: Vec::new(),
            log: Vec::new(),
            add_table: Vec::new(),
        };

        let order = q - 1;
        let cofactors: Vec<u64> = prime_divisors(order).into_iter().map(|r| order / r).collect();
        ctx.omega = (1..q)
            .map(|i| FieldElem(i as u32))
            .find(|&x| cofactors.iter().all(|&c| ctx.slow_pow(x, c) != FieldElem::ONE))
            .expect("the multiplicative group is cyclic");

        if q <= LOG_TABLE_CEILING {
            // Doubled so that a product needs no reduction of the exponent sum.
            let mut exp = vec![0u32; 2 * order as usize];
            let mut log = vec![0u32; q as usize];
            let mut cur = FieldElem::ONE;
            for k in 0..order as usize {
                exp[k] = cur.0;
                exp[k + order as usize] = cur.0;
                log[cur.0 as usize] = k as u32;
                cur = ctx.slow_mul(cur, ctx.omega);
            }
            ctx.exp = exp;
            ctx.log = log;
        }
        if q <= ADD_TABLE_CEILING && p != 2 && f > 1 {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = ctx.digit_add(a as u32, b as u32);
                }
            }
            ctx.add_table = t;
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Low coefficients of the monic modulus.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The stored multiplicative generator `ω`.
    pub fn generator(&self) -> FieldElem {
        self.omega
    }

    pub fn has_log_table(&self) -> bool {
        !self.log.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(|i| FieldElem(i as u32))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.q).map(|i| FieldElem(i as u32))
    }

    /// Checked conversion from an integer encoding.
    pub fn elem(&self, index: u64) -> Result<FieldElem> {
        if index < self.q {
            Ok(FieldElem(index as u32))
        } else {
            Err(Error::OutOfRange(format!("{index} is not an element of F_{}", self.q)))
        }
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u64> {
        let mut c = decode(x.0 as u64, self.p, self.f);
        c.resize(self.f as usize, 0);
        c
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Result<FieldElem> {
        if c.len() > self.f as usize || c.iter().any(|&d| d >= self.p) {
            return Err(Error::OutOfRange("coefficients do not describe a field element".into()));
        }
        Ok(FieldElem(encode(c, self.p) as u32))
    }

    fn digit_add(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.f {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u32
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            FieldElem(a.0 ^ b.0)
        } else if self.f == 1 {
            FieldElem(((a.0 as u64 + b.0 as u64) % self.p) as u32)
        } else if !self.add_table.is_empty() {
            FieldElem(self.add_table[(a.0 as u64 * self.q + b.0 as u64) as usize])
        } else {
            FieldElem(self.digit_add(a.0, b.0))
        }
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 {
            return a;
        }
        let c: Vec<u64> = self.coeffs(a).into_iter().map(|d| (self.p - d) % self.p).collect();
        FieldElem(encode(&c, self.p) as u32)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    fn slow_mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let ca = decode(a.0 as u64, self.p, self.f);
        let cb = decode(b.0 as u64, self.p, self.f);
        let prod = poly_mulmod(&ca, &cb, &self.modulus, self.p);
        FieldElem(encode(&prod, self.p) as u32)
    }

    fn slow_pow(&self, x: FieldElem, e: u64) -> FieldElem {
        let c = decode(x.0 as u64, self.p, self.f);
        let r = poly_powmod(&c, e, &self.modulus, self.p);
        FieldElem(encode(&r, self.p) as u32)
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        if self.log.is_empty() {
            return self.slow_mul(a, b);
        }
        let k = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        FieldElem(self.exp[k])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow_u(a, self.q - 2))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `x^e` for a nonnegative exponent; `0^0 = 1`.
    pub fn pow_u(&self, x: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if x.is_zero() {
            return FieldElem::ZERO;
        }
        if self.log.is_empty() {
            return self.slow_pow(x, e);
        }
        let n = self.q - 1;
        let k = (self.log[x.0 as usize] as u128 * (e % n) as u128) % n as u128;
        FieldElem(self.exp[k as usize])
    }

    /// `x^e`; negative exponents go through the inverse.
    pub fn pow(&self, x: FieldElem, e: i64) -> Result<FieldElem> {
        if e >= 0 {
            Ok(self.pow_u(x, e as u64))
        } else {
            Ok(self.pow_u(self.inv(x)?, e.unsigned_abs()))
        }
    }

    /// `ω^k` for any integer `k`.
    pub fn omega_pow(&self, k: i64) -> FieldElem {
        let n = (self.q - 1) as i64;
        self.pow_u(self.omega, k.rem_euclid(n) as u64)
    }

    /// The Frobenius power `x ↦ x^(p^e)`; `e` is taken modulo `f`.
    pub fn frobenius(&self, x: FieldElem, e: u32) -> FieldElem {
        let e = e % self.f;
        if e == 0 || x.is_zero() {
            return x;
        }
        self.pow_u(x, self.p.pow(e))
    }

    /// Discrete logarithm base `ω`.
    pub fn dlog(&self, x: FieldElem) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroLog);
        }
        if self.log.is_empty() {
            return Err(Error::NoLogTable(self.q));
        }
        Ok(self.log[x.0 as usize] as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: FieldElem) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let mut n = self.q - 1;
        for r in prime_divisors(self.q - 1) {
            while n.is_multiple_of(r) && self.pow_u(x, n / r) == FieldElem::ONE {
                n /= r;
            }
        }
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_generator_is_one() {
        let k = make_field(2, 1).unwrap();
        assert_eq!(k.q(), 2);
        assert_eq!(k.generator(), FieldElem::ONE);
    }

    #[test]
    fn f16_generator_order() {
        let k = make_field(2, 4).unwrap();
        let w = k.generator();
        assert_eq!(k.pow_u(w, 15), FieldElem::ONE);
        assert_ne!(k.pow_u(w, 3), FieldElem::ONE);
        assert_ne!(k.pow_u(w, 5), FieldElem::ONE);
        // x^4 + x + 1 is the least irreducible quartic over F_2.
        assert_eq!(k.modulus(), &[1, 1, 0, 0]);
    }

    #[test]
    fn f9_units() {
        let k = make_field(3, 2).unwrap();
        assert_eq!(k.nonzero_elements().count(), 8);
        assert_eq!(k.order(k.generator()).unwrap(), 8);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(make_field(4, 2), Err(Error::NotPrime(4))));
        assert!(matches!(make_field(2, 33), Err(Error::FieldTooLarge { .. })));
        assert!(make_field(3, 0).is_err());
    }

    #[test]
    fn inverse_pairs_and_lagrange() {
        for (p, f) in [(2, 4), (3, 2), (5, 1), (7, 2), (2, 8)] {
            let k = make_field(p, f).unwrap();
            let w = k.generator();
            let q = k.q();
            assert_eq!(k.mul(w, k.pow_u(w, q - 2)), FieldElem::ONE);
            assert_eq!(k.pow_u(w, q - 1), FieldElem::ONE);
            assert!(matches!(k.inv(FieldElem::ZERO), Err(Error::ZeroInverse)));
            assert_eq!(k.pow(w, -1).unwrap(), k.inv(w).unwrap());
        }
    }

    #[test]
    fn char_two_doubling_vanishes() {
        let k = make_field(2, 4).unwrap();
        for a in k.elements() {
            assert_eq!(k.add(a, a), FieldElem::ZERO);
        }
    }

    #[test]
    fn lagrange_exhaustive_small_fields() {
        for (p, f) in [(2, 12), (3, 7), (5, 5), (61, 2)] {
            let k = make_field(p, f).unwrap();
            assert!(k.q() <= 1 << 12 || p == 61);
            for x in k.nonzero_elements() {
                assert_eq!(k.pow_u(x, k.q() - 1), FieldElem::ONE);
            }
        }
    }

    #[test]
    fn table_free_arithmetic_agrees_with_tables() {
        let k = make_field(3, 5).unwrap();
        for a in k.elements().step_by(7) {
            for b in k.elements().step_by(5) {
                assert_eq!(k.mul(a, b), k.slow_mul(a, b));
            }
        }
        let big = make_field(2, 21).unwrap();
        assert!(!big.has_log_table());
        let w = big.generator();
        assert_eq!(big.pow_u(w, big.q() - 1), FieldElem::ONE);
        assert!(matches!(big.dlog(w), Err(Error::NoLogTable(_))));
    }

    #[test]
    fn frobenius_properties() {
        let k = make_field(2, 4).unwrap();
        let w = k.generator();
        assert_eq!(k.frobenius(w, 0), w);
        for x in k.elements() {
            let mut y = x;
            for _ in 0..4 {
                y = k.frobenius(y, 1);
            }
            assert_eq!(y, x);
            assert_eq!(k.frobenius(k.frobenius(x, 2), 2), x);
        }
        let k9 = make_field(3, 2).unwrap();
        for x in k9.elements() {
            assert_eq!(k9.frobenius(k9.frobenius(x, 1), 1), x);
        }
    }

    #[test]
    fn frobenius_is_ring_automorphism() {
        for (p, f) in [(2, 8), (3, 4), (5, 3), (7, 2)] {
            let k = make_field(p, f).unwrap();
            if k.q() > 256 {
                continue;
            }
            for e in 0..f {
                for a in k.elements() {
                    for b in k.elements() {
                        let fa = k.frobenius(a, e);
                        let fb = k.frobenius(b, e);
                        assert_eq!(k.frobenius(k.add(a, b), e), k.add(fa, fb));
                        assert_eq!(k.frobenius(k.mul(a, b), e), k.mul(fa, fb));
                    }
                }
            }
        }
    }

    #[test]
    fn dlog_examples_and_bijection() {
        let k = make_field(2, 4).unwrap();
        let w = k.generator();
        assert_eq!(k.dlog(FieldElem::ONE).unwrap(), 0);
        assert_eq!(k.dlog(w).unwrap(), 1);
        assert!(matches!(k.dlog(FieldElem::ZERO), Err(Error::ZeroLog)));
        for a in 0..15 {
            for b in 0..15 {
                let x = k.mul(k.pow_u(w, a), k.pow_u(w, b));
                assert_eq!(k.dlog(x).unwrap(), (a + b) % 15);
            }
        }
        for (p, f) in [(2, 12), (3, 7), (5, 5)] {
            let k = make_field(p, f).unwrap();
            let mut seen = vec![false; (k.q() - 1) as usize];
            for x in k.nonzero_elements() {
                let l = k.dlog(x).unwrap() as usize;
                assert!(!seen[l]);
                seen[l] = true;
                assert_eq!(k.pow_u(k.generator(), l as u64), x);
            }
        }
    }

    #[test]
    fn field_axioms_f81() {
        let k = make_field(3, 4).unwrap();
        for a in k.elements() {
            assert_eq!(k.add(a, k.neg(a)), FieldElem::ZERO);
            assert_eq!(k.add(a, FieldElem::ZERO), a);
            for b in k.elements().step_by(3) {
                assert_eq!(k.add(a, b), k.add(b, a));
                assert_eq!(k.sub(k.add(a, b), b), a);
                let c = FieldElem::from_index(17);
                assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
            }
        }
    }

    #[test]
    fn coefficient_round_trip() {
        let k = make_field(5, 3).unwrap();
        for x in k.elements() {
            assert_eq!(k.from_coeffs(&k.coeffs(x)).unwrap(), x);
        }
        assert!(k.from_coeffs(&[5]).is_err());
        assert!(k.elem(125).is_err());
    }
}
