use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{FieldDesc, FieldInner};
use crate::error::{Error, Result};

/// An element of a [`FieldDesc`].
#[derive(Clone)]
pub struct Scalar {
    field: FieldDesc,
    repr: Repr,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Repr {
    /// Residue coefficients modulo `Phi_N`, low-to-high, no trailing zeros.
    Cyc(Vec<BigRational>),
    /// Packed finite-field element.
    Fin(u64),
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl Scalar {
    pub(crate) fn zero_in(field: &FieldDesc) -> Scalar {
        let repr = match field.inner() {
            FieldInner::Cyclotomic { .. } => Repr::Cyc(Vec::new()),
            FieldInner::Finite(_) => Repr::Fin(0),
        };
        Scalar {
            field: field.clone(),
            repr,
        }
    }

    pub(crate) fn from_bigint_in(field: &FieldDesc, v: &BigInt) -> Scalar {
        let repr = match field.inner() {
            FieldInner::Cyclotomic { .. } => {
                let mut c = vec![BigRational::from_integer(v.clone())];
                trim(&mut c);
                Repr::Cyc(c)
            }
            FieldInner::Finite(f) => {
                let r = v.mod_floor(&BigInt::from(f.p));
                Repr::Fin(r.to_u64().unwrap())
            }
        };
        Scalar {
            field: field.clone(),
            repr,
        }
    }

    pub(crate) fn residue_generator(field: &FieldDesc) -> Scalar {
        match field.inner() {
            FieldInner::Cyclotomic { .. } => {
                Scalar::from_cyc_coeffs(field, vec![BigRational::zero(), BigRational::one()])
            }
            FieldInner::Finite(f) if f.k == 1 => {
                Scalar::from_packed(field, (f.p - f.modulus[0]) % f.p)
            }
            FieldInner::Finite(f) => Scalar::from_packed(field, f.p),
        }
    }

    pub(crate) fn from_packed(field: &FieldDesc, v: u64) -> Scalar {
        Scalar {
            field: field.clone(),
            repr: Repr::Fin(v),
        }
    }

    /// Element of `GF(p^k)` from residue coefficients (any length, reduced
    /// modulo the field modulus).
    pub fn from_residue(field: &FieldDesc, coeffs: &[u64]) -> Scalar {
        let f = field
            .finite_data()
            .expect("from_residue needs a finite field");
        if coeffs.len() <= f.k as usize {
            let c: Vec<u64> = coeffs.iter().map(|&x| x % f.p).collect();
            return Scalar::from_packed(field, f.pack(&c));
        }
        let g = Scalar::residue_generator(field);
        let mut acc = field.zero();
        for &c in coeffs.iter().rev() {
            acc = acc * &g + field.from_u64(c);
        }
        acc
    }

    /// Element of a cyclotomic field from rational coefficients in `zeta`.
    pub fn from_cyc_coeffs(field: &FieldDesc, coeffs: Vec<BigRational>) -> Scalar {
        let FieldInner::Cyclotomic { phi, modulus, .. } = field.inner() else {
            panic!("from_cyc_coeffs needs a cyclotomic field");
        };
        let mut c = coeffs;
        reduce_cyc(&mut c, *phi, modulus);
        Scalar {
            field: field.clone(),
            repr: Repr::Cyc(c),
        }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    /// Packed index of a finite-field element.
    pub fn packed(&self) -> Option<u64> {
        match self.repr {
            Repr::Fin(v) => Some(v),
            _ => None,
        }
    }

    /// Coefficients in `zeta` of a cyclotomic element.
    pub fn cyc_coeffs(&self) -> Option<&[BigRational]> {
        match &self.repr {
            Repr::Cyc(c) => Some(c),
            _ => None,
        }
    }

    /// The value as a rational, if it lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.repr {
            Repr::Cyc(c) if c.len() <= 1 => {
                Some(c.first().cloned().unwrap_or_else(BigRational::zero))
            }
            _ => None,
        }
    }

    /// The value as an integer in `0..p`, if it lies in the prime field.
    pub fn to_prime_residue(&self) -> Option<u64> {
        match (&self.repr, self.field.finite_data()) {
            (Repr::Fin(v), Some(f)) if *v < f.p => Some(*v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Cyc(c) => c.is_empty(),
            Repr::Fin(v) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Cyc(c) => c.len() == 1 && c[0].is_one(),
            Repr::Fin(v) => *v == 1,
        }
    }

    fn check(&self, other: &Scalar) {
        if !self.field.same(&other.field) {
            panic!(
                "{}",
                Error::FieldMismatch(self.field.name(), other.field.name())
            );
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = match (&self.repr, self.field.inner()) {
            (Repr::Fin(v), FieldInner::Finite(f)) => Repr::Fin(f.inv(*v).unwrap()),
            (Repr::Cyc(c), FieldInner::Cyclotomic { modulus, phi, .. }) => {
                if c.len() == 1 {
                    Repr::Cyc(vec![c[0].recip()])
                } else {
                    let m: Vec<BigRational> = modulus
                        .iter()
                        .map(|x| BigRational::from_integer(x.clone()))
                        .collect();
                    let mut inv = rat_inverse_mod(c, &m);
                    reduce_cyc(&mut inv, *phi, modulus);
                    Repr::Cyc(inv)
                }
            }
            _ => unreachable!(),
        };
        Ok(Scalar {
            field: self.field.clone(),
            repr,
        })
    }

    pub fn pow(&self, e: u64) -> Scalar {
        if let (Repr::Fin(v), Some(f)) = (&self.repr, self.field.finite_data()) {
            return Scalar::from_packed(&self.field, f.pow(*v, e));
        }
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<Scalar> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// `a^(p^e)`, the e-th power of Frobenius.
    pub fn frobenius(&self, e: u32) -> Result<Scalar> {
        let f = self
            .field
            .finite_data()
            .ok_or_else(|| Error::CharacteristicZero(self.field.name()))?;
        let mut x = self.clone();
        for _ in 0..(e % f.k) {
            x = x.pow(f.p);
        }
        Ok(x)
    }

    /// The unique p-th root in a finite field.
    pub fn pth_root(&self) -> Result<Scalar> {
        let f = self
            .field
            .finite_data()
            .ok_or_else(|| Error::CharacteristicZero(self.field.name()))?;
        self.frobenius(f.k - 1)
    }

    /// Number of nonzero residue terms; 0 for zero.
    pub(crate) fn term_count(&self) -> usize {
        match (&self.repr, self.field.finite_data()) {
            (Repr::Cyc(c), _) => c.iter().filter(|x| !x.is_zero()).count(),
            (Repr::Fin(v), Some(f)) => f.coeffs(*v).iter().filter(|&&x| x != 0).count(),
            _ => 0,
        }
    }

    /// Sign and magnitude text for a single-term value; compound values
    /// return `(false, text)` with the full expression.
    pub(crate) fn signed_text(&self) -> (bool, String) {
        if self.term_count() > 1 {
            return (false, self.to_string());
        }
        match &self.repr {
            Repr::Cyc(c) => {
                let Some((i, v)) = c.iter().enumerate().find(|(_, v)| !v.is_zero()) else {
                    return (false, "0".into());
                };
                let neg = v.is_negative();
                (neg, cyc_term(&v.abs(), i))
            }
            Repr::Fin(_) => (false, self.to_string()),
        }
    }
}

fn fmt_rational(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn power_text(var: &str, i: usize) -> String {
    match i {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{i}"),
    }
}

fn term_text(coeff: String, is_one: bool, var: &str, i: usize) -> String {
    if i == 0 {
        coeff
    } else if is_one {
        power_text(var, i)
    } else {
        format!("{coeff}*{}", power_text(var, i))
    }
}

fn cyc_term(abs: &BigRational, i: usize) -> String {
    term_text(fmt_rational(abs), abs.is_one(), "zeta", i)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.repr, self.field.inner()) {
            (Repr::Cyc(c), _) => {
                if c.is_empty() {
                    return f.write_str("0");
                }
                let mut first = true;
                for (i, v) in c.iter().enumerate().rev() {
                    if v.is_zero() {
                        continue;
                    }
                    let t = cyc_term(&v.abs(), i);
                    match (first, v.is_negative()) {
                        (true, false) => write!(f, "{t}")?,
                        (true, true) => write!(f, "-{t}")?,
                        (false, false) => write!(f, " + {t}")?,
                        (false, true) => write!(f, " - {t}")?,
                    }
                    first = false;
                }
                Ok(())
            }
            (Repr::Fin(v), FieldInner::Finite(ff)) => {
                if *v == 0 {
                    return f.write_str("0");
                }
                let parts: Vec<String> = ff
                    .coeffs(*v)
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| term_text(c.to_string(), c == 1, "g", i))
                    .collect();
                f.write_str(&parts.join(" + "))
            }
            _ => unreachable!(),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field.name())
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && self.field.same(&other.field)
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

/// A canonical total order (not a field order), used for deterministic output.
impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.repr.cmp(&other.repr)
    }
}

fn reduce_cyc(c: &mut Vec<BigRational>, phi: usize, modulus: &[BigInt]) {
    trim(c);
    while c.len() > phi {
        let top = c.len() - 1;
        let lead = c[top].clone();
        for (j, m) in modulus.iter().enumerate() {
            if !m.is_zero() {
                c[top - phi + j] -= &lead * m;
            }
        }
        debug_assert!(c[top].is_zero());
        trim(c);
    }
}

fn rat_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db)];
    while r.len() > db {
        let top = r.len() - 1;
        let c = &r[top] * &lead_inv;
        for (j, bj) in b.iter().enumerate() {
            r[top - db + j] -= &c * bj;
        }
        q[top - db] = c;
        trim(&mut r);
    }
    (q, r)
}

fn rat_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn rat_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(BigRational::zero)
                - b.get(i).cloned().unwrap_or_else(BigRational::zero)
        })
        .collect();
    trim(&mut out);
    out
}

/// Inverse of `a` modulo the irreducible `m` by the extended Euclidean algorithm.
fn rat_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1) = (Vec::new(), vec![BigRational::one()]);
    while r1.len() > 1 {
        let (q, r) = rat_divrem(&r0, &r1);
        let s = rat_sub(&s0, &rat_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let c = r1[0].recip();
    s1.iter().map(|x| x * &c).collect()
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Fin(a), Repr::Fin(b)) => {
                Repr::Fin(self.field.finite_data().unwrap().add(*a, *b))
            }
            (Repr::Cyc(a), Repr::Cyc(b)) => {
                let n = a.len().max(b.len());
                let mut out: Vec<BigRational> = (0..n)
                    .map(|i| match (a.get(i), b.get(i)) {
                        (Some(x), Some(y)) => x + y,
                        (Some(x), None) | (None, Some(x)) => x.clone(),
                        (None, None) => unreachable!(),
                    })
                    .collect();
                trim(&mut out);
                Repr::Cyc(out)
            }
            _ => unreachable!(),
        };
        Scalar {
            field: self.field.clone(),
            repr,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let repr = match &self.repr {
            Repr::Fin(a) => Repr::Fin(self.field.finite_data().unwrap().neg(*a)),
            Repr::Cyc(a) => Repr::Cyc(a.iter().map(|x| -x).collect()),
        };
        Scalar {
            field: self.field.clone(),
            repr,
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        if let (Repr::Fin(a), Repr::Fin(b)) = (&self.repr, &rhs.repr) {
            return Scalar::from_packed(&self.field, self.field.finite_data().unwrap().sub(*a, *b));
        }
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        let repr = match (&self.repr, &rhs.repr, self.field.inner()) {
            (Repr::Fin(a), Repr::Fin(b), FieldInner::Finite(f)) => Repr::Fin(f.mul(*a, *b)),
            (Repr::Cyc(a), Repr::Cyc(b), FieldInner::Cyclotomic { phi, modulus, .. }) => {
                let mut out = rat_mul(a, b);
                reduce_cyc(&mut out, *phi, modulus);
                Repr::Cyc(out)
            }
            _ => unreachable!(),
        };
        Scalar {
            field: self.field.clone(),
            repr,
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero; use [`Scalar::inv`] for a checked inverse.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = &*self + &rhs;
    }
}
