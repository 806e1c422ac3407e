//! Exact ground fields: rationals, cyclotomic fields `Q(zeta_N)`, and finite
//! fields `GF(p^k)`, together with univariate polynomial utilities.
//!
//! A [`FieldDesc`] is a cheap shared handle; every [`Scalar`] carries the
//! descriptor of the field it lives in.

mod cyclo_roots;
mod embed;
mod finite;
pub mod primes;
mod reduce;
mod scalar;
mod unipoly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use embed::Embedding;
pub(crate) use finite::FiniteField;
pub use reduce::PrimeReduction;
pub use scalar::Scalar;
pub use unipoly::{ddf, roots_in_field, squarefree_part, UniPoly};

pub(crate) enum FieldInner {
    /// `Q[t]/Phi_N(t)`; `index == 1` is plain `Q`.
    Cyclotomic {
        index: u64,
        phi: usize,
        /// `Phi_N`, low-to-high, monic with integer coefficients.
        modulus: Vec<BigInt>,
    },
    Finite(FiniteField),
}

/// Descriptor of an exact ground field.
#[derive(Clone)]
pub struct FieldDesc(pub(crate) Arc<FieldInner>);

impl FieldDesc {
    /// The rational numbers.
    pub fn rationals() -> Self {
        Self::cyclotomic(1)
    }

    /// `Q(zeta_N)` presented as `Q[t]/Phi_N(t)`.
    pub fn cyclotomic(index: u64) -> Self {
        assert!(index >= 1, "cyclotomic index must be positive");
        let modulus = cyclotomic_polynomial(index);
        let phi = modulus.len() - 1;
        FieldDesc(Arc::new(FieldInner::Cyclotomic {
            index,
            phi,
            modulus,
        }))
    }

    /// `GF(p^k)` with the first irreducible monic modulus found by trial,
    /// starting at candidate number `seed`.
    pub fn finite(p: u64, k: u32, seed: u64) -> Result<Self> {
        Ok(FieldDesc(Arc::new(FieldInner::Finite(
            FiniteField::search(p, k, seed)?,
        ))))
    }

    /// `GF(p^k)` with an explicit modulus given low-to-high; `k` is its degree.
    pub fn finite_with_modulus(p: u64, modulus: &[u64]) -> Result<Self> {
        Ok(FieldDesc(Arc::new(FieldInner::Finite(
            FiniteField::with_modulus(p, modulus)?,
        ))))
    }

    /// Parses `"Q"`, `"Q(zeta N)"` or `"GF(p^k)"` / `"GF(p)"`.
    pub fn from_spec(spec: &str, modulus: Option<&[u64]>) -> Result<Self> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidField(format!("cannot parse field spec {spec:?}"));
        if s == "Q" || s == "QQ" {
            return Ok(Self::rationals());
        }
        if let Some(rest) = s.strip_prefix("Q(zeta").and_then(|r| r.strip_suffix(')')) {
            let n: u64 = rest.parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            return Ok(Self::cyclotomic(n));
        }
        if let Some(rest) = s.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            let (p, k) = match rest.split_once('^') {
                Some((p, k)) => (
                    p.parse::<u64>().map_err(|_| bad())?,
                    k.parse::<u32>().map_err(|_| bad())?,
                ),
                None => (rest.parse::<u64>().map_err(|_| bad())?, 1),
            };
            return match modulus {
                Some(m) => {
                    let f = Self::finite_with_modulus(p, m)?;
                    if f.extension_degree() != k as usize {
                        return Err(Error::InvalidField(format!(
                            "modulus has degree {} but spec asks for GF({p}^{k})",
                            f.extension_degree()
                        )));
                    }
                    Ok(f)
                }
                None => Self::finite(p, k, 0),
            };
        }
        Err(bad())
    }

    pub(crate) fn inner(&self) -> &FieldInner {
        &self.0
    }

    pub(crate) fn finite_data(&self) -> Option<&FiniteField> {
        match self.inner() {
            FieldInner::Finite(f) => Some(f),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self.inner() {
            FieldInner::Cyclotomic { .. } => 0,
            FieldInner::Finite(f) => f.p,
        }
    }

    /// Degree over the prime field.
    pub fn extension_degree(&self) -> usize {
        match self.inner() {
            FieldInner::Cyclotomic { phi, .. } => *phi,
            FieldInner::Finite(f) => f.k as usize,
        }
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<u64> {
        self.finite_data().map(|f| f.size)
    }

    pub fn cyclotomic_index(&self) -> Option<u64> {
        match self.inner() {
            FieldInner::Cyclotomic { index, .. } => Some(*index),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.finite_data().is_some()
    }

    /// The defining modulus over the prime field, low-to-high.
    pub fn modulus(&self) -> UniPoly {
        let prime = self.prime_field();
        let coeffs = match self.inner() {
            FieldInner::Cyclotomic { modulus, .. } => {
                modulus.iter().map(|c| prime.from_bigint(c)).collect()
            }
            FieldInner::Finite(f) => f.modulus.iter().map(|&c| prime.from_u64(c)).collect(),
        };
        UniPoly::new(coeffs, &prime)
    }

    /// `Q` or `GF(p)`.
    pub fn prime_field(&self) -> FieldDesc {
        match self.inner() {
            FieldInner::Cyclotomic { .. } => FieldDesc::rationals(),
            FieldInner::Finite(f) => {
                if f.k == 1 {
                    self.clone()
                } else {
                    FieldDesc::finite_with_modulus(f.p, &[0, 1]).expect("t is irreducible")
                }
            }
        }
    }

    /// Human-readable spec string, parseable by [`FieldDesc::from_spec`].
    pub fn name(&self) -> String {
        match self.inner() {
            FieldInner::Cyclotomic { index: 1, .. } => "Q".to_string(),
            FieldInner::Cyclotomic { index, .. } => format!("Q(zeta {index})"),
            FieldInner::Finite(f) if f.k == 1 => format!("GF({})", f.p),
            FieldInner::Finite(f) => format!("GF({}^{})", f.p, f.k),
        }
    }

    pub fn same(&self, other: &FieldDesc) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (self.inner(), other.inner()) {
            (FieldInner::Cyclotomic { index: a, .. }, FieldInner::Cyclotomic { index: b, .. }) => {
                a == b
            }
            (FieldInner::Finite(a), FieldInner::Finite(b)) => a.p == b.p && a.modulus == b.modulus,
            _ => false,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero_in(self)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_u64(&self, v: u64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        Scalar::from_bigint_in(self, v)
    }

    /// Embeds a rational; fails in characteristic p when p divides the denominator.
    pub fn from_rational(&self, v: &BigRational) -> Result<Scalar> {
        let num = self.from_bigint(v.numer());
        let den = self.from_bigint(v.denom());
        Ok(num * den.inv()?)
    }

    /// The class of `t`: `zeta_N` for cyclotomic fields, `g` for `GF(p^k)`.
    pub fn generator(&self) -> Scalar {
        Scalar::residue_generator(self)
    }

    /// Element of a finite field from its packed index `0..q`
    /// (base-p digits are the residue coefficients).
    pub fn element(&self, index: u64) -> Scalar {
        let f = self.finite_data().expect("element() needs a finite field");
        assert!(index < f.size, "element index out of range");
        Scalar::from_packed(self, index)
    }

    /// All elements of a finite field in packed-index order.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        let q = self.order().expect("elements() needs a finite field");
        (0..q).map(move |i| Scalar::from_packed(self, i))
    }

    /// A generator of the multiplicative group of a finite field.
    pub fn multiplicative_generator(&self) -> Result<Scalar> {
        let f = self
            .finite_data()
            .ok_or_else(|| Error::Precondition("multiplicative generator needs GF(p^k)".into()))?;
        Ok(Scalar::from_packed(self, f.generator()))
    }

    /// An element of exact multiplicative order `order`.
    pub fn primitive_root_of_unity(&self, order: u64) -> Result<Scalar> {
        if order == 0 {
            return Err(Error::Precondition("root of unity of order 0".into()));
        }
        match self.inner() {
            FieldInner::Finite(f) => {
                if order.is_multiple_of(f.p) || (f.size - 1) % order != 0 {
                    return Err(self.too_small_for_roots(order));
                }
                let g = Scalar::from_packed(self, f.generator());
                Ok(g.pow((f.size - 1) / order))
            }
            FieldInner::Cyclotomic { index, .. } => {
                let n = *index;
                if n % order == 0 {
                    return Ok(self.generator().pow(n / order));
                }
                // w generates the full group of roots of unity of Q(zeta_N).
                let (w, w_order) = if n % 2 == 0 {
                    (self.generator(), n)
                } else {
                    (-self.generator(), 2 * n)
                };
                if w_order % order != 0 {
                    return Err(self.too_small_for_roots(order));
                }
                Ok(w.pow(w_order / order))
            }
        }
    }

    /// Whether a primitive `order`-th root of unity exists in this field.
    pub fn has_roots_of_unity(&self, order: u64) -> bool {
        match self.inner() {
            FieldInner::Finite(f) => !order.is_multiple_of(f.p) && (f.size - 1) % order == 0,
            FieldInner::Cyclotomic { index, .. } => {
                let w_order = if index % 2 == 0 { *index } else { 2 * index };
                order > 0 && w_order % order == 0
            }
        }
    }

    /// Minimal enlargement of this field that contains the `order`-th roots of unity.
    pub fn suggest_extension_for_roots(&self, order: u64) -> String {
        match self.inner() {
            FieldInner::Finite(f) => {
                if order.is_multiple_of(f.p) {
                    return "none: order divisible by the characteristic".to_string();
                }
                let mut e = 1u32;
                loop {
                    let q = (f.size as u128).pow(e);
                    if (q - 1).is_multiple_of(order as u128) {
                        break;
                    }
                    e += 1;
                    if e > 64 {
                        return "unbounded".to_string();
                    }
                }
                format!("GF({}^{})", f.p, f.k * e)
            }
            FieldInner::Cyclotomic { index, .. } => {
                let l = num_integer::lcm(*index, order);
                let l = if l % 2 == 1 && l > 1 { l } else { l.max(1) };
                FieldDesc::cyclotomic(l).name()
            }
        }
    }

    pub(crate) fn too_small_for_roots(&self, order: u64) -> Error {
        Error::FieldTooSmall {
            field: self.name(),
            needed: format!("primitive {order}-th root of unity"),
            suggestion: self.suggest_extension_for_roots(order),
        }
    }

    /// A degree-`m` extension together with the embedding of this field into it.
    pub fn finite_extension(&self, m: u32) -> Result<Embedding> {
        Embedding::finite_extension(self, m)
    }
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for FieldDesc {}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.inner() {
            FieldInner::Finite(ff) => write!(f, "{} mod {:?}", self.name(), ff.modulus),
            _ => write!(f, "{}", self.name()),
        }
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Builds a field from `(p, k, seed)`: `p = 0, k = 1` is `Q`, `p = 0, k > 1`
/// is `Q(zeta_k)`, `p > 0` is `GF(p^k)` with a seeded modulus search.
pub fn field_make(p: u64, k: u32, seed: u64) -> Result<FieldDesc> {
    if k == 0 {
        return Err(Error::InvalidField(
            "extension degree must be positive".into(),
        ));
    }
    if p == 0 {
        Ok(FieldDesc::cyclotomic(k as u64))
    } else {
        FieldDesc::finite(p, k, seed)
    }
}

/// `Phi_n` as integer coefficients, low-to-high.
pub(crate) fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    // t^n - 1 divided by Phi_d for every proper divisor d of n.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            num = divide_monic_exact(&num, &div);
        }
    }
    num
}

fn divide_monic_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut q = vec![BigInt::zero(); nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}
