//! Packed arithmetic in `GF(p^k)`. An element is stored as the integer
//! `sum c_i p^i` where `sum c_i t^i` is its residue modulo the field modulus.

use std::sync::OnceLock;

use super::primes::{factorize, is_prime, pow_mod};
use crate::error::{Error, Result};

const TABLE_LIMIT: u64 = 1 << 18;

pub(crate) struct FiniteField {
    pub p: u64,
    pub k: u32,
    pub size: u64,
    /// Monic modulus, low-to-high, length `k + 1`.
    pub modulus: Vec<u64>,
    tables: Option<Tables>,
    generator: OnceLock<u64>,
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    pub fn search(p: u64, k: u32, seed: u64) -> Result<Self> {
        check_params(p, k)?;
        let span = p.pow(k);
        for offset in 0..span {
            let code = (seed.wrapping_add(offset)) % span;
            let mut m = digits(code, p, k as usize);
            m.push(1);
            if is_irreducible(&m, p) {
                return Ok(Self::build(p, m));
            }
        }
        Err(Error::Internal(format!(
            "no irreducible polynomial of degree {k} mod {p}"
        )))
    }

    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self> {
        let mut m: Vec<u64> = modulus.to_vec();
        while m.last() == Some(&0) {
            m.pop();
        }
        if m.len() < 2 {
            return Err(Error::InvalidField(
                "modulus must have positive degree".into(),
            ));
        }
        check_params(p, (m.len() - 1) as u32)?;
        if m.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(format!(
                "modulus coefficients must lie in 0..{p}"
            )));
        }
        let lead = *m.last().unwrap();
        if lead != 1 {
            let inv = pow_mod(lead, p - 2, p);
            for c in m.iter_mut() {
                *c = mulm(*c, inv, p);
            }
        }
        if !is_irreducible(&m, p) {
            return Err(Error::InvalidField(format!(
                "modulus {modulus:?} is reducible mod {p}"
            )));
        }
        Ok(Self::build(p, m))
    }

    fn build(p: u64, modulus: Vec<u64>) -> Self {
        let k = (modulus.len() - 1) as u32;
        let size = p.pow(k);
        let mut f = FiniteField {
            p,
            k,
            size,
            modulus,
            tables: None,
            generator: OnceLock::new(),
        };
        if size <= TABLE_LIMIT && k > 1 {
            let g = f.generator();
            let n = (size - 1) as usize;
            let mut exp = vec![0u32; 2 * n];
            let mut log = vec![0u32; size as usize];
            let mut x = 1u64;
            for i in 0..n {
                exp[i] = x as u32;
                exp[i + n] = x as u32;
                log[x as usize] = i as u32;
                x = f.mul_slow(x, g);
            }
            f.tables = Some(Tables { exp, log });
        }
        f
    }

    /// Packed index of a multiplicative generator (smallest by packed order).
    pub fn generator(&self) -> u64 {
        *self.generator.get_or_init(|| {
            let n = self.size - 1;
            let factors = factorize(n);
            (1..self.size)
                .find(|&g| factors.iter().all(|&(r, _)| self.pow(g, n / r) != 1))
                .expect("multiplicative group is cyclic")
        })
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        if self.p == 2 {
            return a ^ b;
        }
        let (p, mut a, mut b) = (self.p, a, b);
        let (mut out, mut place) = (0u64, 1u64);
        for _ in 0..self.k {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.k == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        if self.p == 2 {
            return a;
        }
        let (p, mut a) = (self.p, a);
        let (mut out, mut place) = (0u64, 1u64);
        for _ in 0..self.k {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.k == 1 {
            return mulm(a, b, self.p);
        }
        if let Some(t) = &self.tables {
            let i = t.log[a as usize] as usize + t.log[b as usize] as usize;
            return t.exp[i] as u64;
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let p = self.p;
        let k = self.k as usize;
        let da = digits(a, p, k);
        let db = digits(b, p, k);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulm(x, y, p)) % p;
            }
        }
        for i in (k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let sub = mulm(c, self.modulus[j], p);
                prod[i - k + j] = (prod[i - k + j] + p - sub) % p;
            }
            prod[i] = 0;
        }
        pack(&prod[..k], p)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let n = self.size - 1;
            let l = t.log[a as usize] as u128 * (e % n) as u128 % n as u128;
            return t.exp[l as usize] as u64;
        }
        let (mut base, mut acc) = (a, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            let n = (self.size - 1) as usize;
            let l = t.log[a as usize] as usize;
            return Some(t.exp[(n - l) % n] as u64);
        }
        Some(self.pow(a, self.size - 2))
    }

    /// Residue coefficients of a packed element, low-to-high, length `k`.
    pub fn coeffs(&self, a: u64) -> Vec<u64> {
        digits(a, self.p, self.k as usize)
    }

    pub fn pack(&self, coeffs: &[u64]) -> u64 {
        pack(coeffs, self.p)
    }
}

fn check_params(p: u64, k: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::CompositeCharacteristic(p));
    }
    if k == 0 {
        return Err(Error::InvalidField(
            "extension degree must be positive".into(),
        ));
    }
    let size = (p as u128).checked_pow(k);
    if size.is_none_or(|s| s >= 1u128 << 62) {
        return Err(Error::InvalidField(format!(
            "GF({p}^{k}) is too large to represent"
        )));
    }
    Ok(())
}

pub(crate) fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn digits(mut a: u64, p: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(a % p);
        a /= p;
    }
    out
}

fn pack(c: &[u64], p: u64) -> u64 {
    c.iter().rev().fold(0u64, |acc, &x| acc * p + x)
}

// Polynomials over GF(p) as low-to-high coefficient vectors.

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let inv_lead = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = mulm(r[top], inv_lead, p);
        for j in 0..=dm {
            let s = mulm(c, m[j], p);
            r[top - dm + j] = (r[top - dm + j] + p - s) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulm(x, y, p)) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
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

/// `t^(p^e) mod m`.
fn frob_t(e: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut x = vec![0u64, 1];
    for _ in 0..e {
        x = poly_powmod(&x, p, m, p);
    }
    x
}

/// Rabin's irreducibility test for a monic `m` over `GF(p)`.
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let k = (m.len() - 1) as u32;
    if k == 1 {
        return true;
    }
    let t = vec![0u64, 1];
    let reduced_t = poly_rem(&t, m, p);
    if frob_t(k, m, p) != reduced_t {
        return false;
    }
    for (r, _) in factorize(k as u64) {
        let mut x = frob_t(k / r as u32, m, p);
        x.resize(x.len().max(2), 0);
        x[1] = (x[1] + p - 1) % p;
        trim(&mut x);
        let g = poly_gcd(m, &x, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(m: &[u64], p: u64) -> bool {
        // Oracle: no root and no monic factor of degree <= deg/2 by trial division.
        let k = m.len() - 1;
        for d in 1..=k / 2 {
            for code in 0..p.pow(d as u32) {
                let mut f = digits(code, p, d);
                f.push(1);
                if poly_rem(m, &f, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        for p in [2u64, 3, 5] {
            for k in 1..=4u32 {
                for code in 0..p.pow(k) {
                    let mut m = digits(code, p, k as usize);
                    m.push(1);
                    assert_eq!(
                        is_irreducible(&m, p),
                        brute_irreducible(&m, p),
                        "{m:?} mod {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn tables_agree_with_slow_path() {
        let f = FiniteField::search(3, 3, 0).unwrap();
        for a in 0..27 {
            for b in 0..27 {
                assert_eq!(
                    f.mul(a, b),
                    if a == 0 || b == 0 {
                        0
                    } else {
                        f.mul_slow(a, b)
                    }
                );
            }
        }
        for a in 1..27 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn generator_has_full_order() {
        let f = FiniteField::search(2, 5, 0).unwrap();
        let g = f.generator();
        let mut seen = std::collections::HashSet::new();
        let mut x = 1;
        for _ in 0..31 {
            seen.insert(x);
            x = f.mul(x, g);
        }
        assert_eq!(seen.len(), 31);
    }
}
