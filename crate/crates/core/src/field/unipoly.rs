use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{cyclo_roots, FieldDesc, FieldInner, Scalar};
use crate::error::{Error, Result};

/// Dense univariate polynomial over a [`FieldDesc`], low-to-high, with no
/// trailing zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
    field: FieldDesc,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>, field: &FieldDesc) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly {
            coeffs,
            field: field.clone(),
        }
    }

    pub fn from_i64s(coeffs: &[i64], field: &FieldDesc) -> Self {
        Self::new(coeffs.iter().map(|&c| field.from_i64(c)).collect(), field)
    }

    pub fn zero(field: &FieldDesc) -> Self {
        Self::new(Vec::new(), field)
    }

    pub fn constant(c: Scalar) -> Self {
        let f = c.field().clone();
        Self::new(vec![c], &f)
    }

    /// `c * t^n`.
    pub fn monomial(c: Scalar, n: usize) -> Self {
        let f = c.field().clone();
        let mut v = vec![f.zero(); n];
        v.push(c);
        Self::new(v, &f)
    }

    /// The variable `t`.
    pub fn t(field: &FieldDesc) -> Self {
        Self::monomial(field.one(), 1)
    }

    /// `t - a`.
    pub fn linear_root(a: &Scalar) -> Self {
        let f = a.field().clone();
        Self::new(vec![-a, f.one()], &f)
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect(), &self.field)
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) if !l.is_one() => self.scale(&l.inv().unwrap()),
            _ => self.clone(),
        }
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.from_u64(i as u64))
            .collect();
        Self::new(c, &self.field)
    }

    pub fn divrem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = d.lead().unwrap().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((UniPoly::zero(&self.field), self.clone()));
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (0..r.len() - dd).rev() {
            let c = &r[i + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&c * dj);
            }
            q[i] = c;
        }
        Ok((UniPoly::new(q, &self.field), UniPoly::new(r, &self.field)))
    }

    pub fn rem(&self, d: &UniPoly) -> Result<UniPoly> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mulmod(&self, other: &UniPoly, m: &UniPoly) -> UniPoly {
        (self * other).rem(m).unwrap()
    }

    pub fn powmod(&self, mut e: u64, m: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::constant(self.field.one()).rem(m).unwrap();
        let mut base = self.rem(m).unwrap();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m);
            }
        }
        acc
    }

    /// `self(g)`.
    pub fn compose(&self, g: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// Applies a coefficient map (which may change the field).
    pub fn map_coeffs(&self, field: &FieldDesc, f: impl Fn(&Scalar) -> Scalar) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(f).collect(), field)
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut acc = UniPoly::constant(self.field.one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let body = if c.term_count() > 1 {
                format!("({c})")
            } else {
                c.to_string()
            };
            match i {
                0 => write!(f, "{body}")?,
                _ if c.is_one() => write!(f, "t^{i}")?,
                _ => write!(f, "{body}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field.name())
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(
            (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect(),
            &self.field,
        )
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(
            (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect(),
            &self.field,
        )
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect(), &self.field)
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out, &self.field)
    }
}

/// Monic product of the distinct irreducible factors of `f`.
pub fn squarefree_part(f: &UniPoly) -> UniPoly {
    if f.degree().unwrap_or(0) == 0 {
        return UniPoly::constant(f.field.one());
    }
    let d = f.derivative();
    if d.is_zero() {
        // f = g(t^p): take p-th roots of the coefficients.
        let p = f.field.characteristic() as usize;
        let g = UniPoly::new(
            f.coeffs
                .iter()
                .step_by(p)
                .map(|c| c.pth_root().expect("positive characteristic"))
                .collect(),
            &f.field,
        );
        return squarefree_part(&g);
    }
    let c = f.gcd(&d);
    let w = f.exact_div(&c).unwrap().monic();
    let rest = squarefree_part(&c);
    let common = w.gcd(&rest);
    (&w * &rest).exact_div(&common).unwrap().monic()
}

/// Distinct-degree factorization of a squarefree polynomial over a finite
/// field: `(i, product of the monic irreducible factors of degree i)`.
pub fn ddf(f: &UniPoly) -> Result<Vec<(usize, UniPoly)>> {
    let q = f
        .field
        .order()
        .ok_or_else(|| Error::Precondition("ddf needs a finite field".into()))?;
    if f.is_zero() {
        return Err(Error::Precondition("ddf of the zero polynomial".into()));
    }
    let mut rest = f.monic();
    let t = UniPoly::t(&f.field);
    let mut h = t.clone();
    let mut out = Vec::new();
    let mut i = 0;
    while rest.degree().unwrap() >= 2 * (i + 1) {
        i += 1;
        h = h.powmod(q, &rest);
        let g = rest.gcd(&(&h - &t));
        if g.degree().unwrap() > 0 {
            rest = rest.exact_div(&g).unwrap();
            h = h.rem(&rest).unwrap();
            out.push((i, g));
        }
    }
    if let Some(d) = rest.degree().filter(|&d| d > 0) {
        out.push((d, rest));
    }
    Ok(out)
}

/// Distinct roots of a monic product of distinct linear factors over `GF(q)`.
fn split_linear(g: &UniPoly, out: &mut Vec<Scalar>) {
    let field = g.field.clone();
    let q = field.order().unwrap();
    let d = g.degree().unwrap();
    if d == 0 {
        return;
    }
    if d == 1 {
        out.push(-&g.coeffs[0] * &g.coeffs[1].inv().unwrap());
        return;
    }
    if q <= 4096 {
        out.extend(field.elements().filter(|a| g.eval(a).is_zero()));
        return;
    }
    let p = field.characteristic();
    let k = field.extension_degree() as u32;
    let t = UniPoly::t(&field);
    let gen = field.multiplicative_generator().unwrap();
    let mut c = field.one();
    loop {
        // Split by a random-looking but deterministic element sequence.
        let probe = if p == 2 {
            let ct = t.scale(&c);
            let mut acc = UniPoly::zero(&field);
            let mut term = ct.rem(g).unwrap();
            for _ in 0..k {
                acc = &acc + &term;
                term = term.mulmod(&term, g);
            }
            acc
        } else {
            let lin = &t + &UniPoly::constant(c.clone());
            &lin.powmod((q - 1) / 2, g) - &UniPoly::constant(field.one())
        };
        let h = g.gcd(&probe);
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < d {
            split_linear(&h, out);
            split_linear(&g.exact_div(&h).unwrap().monic(), out);
            return;
        }
        c = &c * &gen + &field.one();
    }
}

/// Roots of `f` in its coefficient field, repeated by multiplicity and
/// sorted in the canonical scalar order.
///
/// Complete over finite fields and over `Q`. Over `Q(zeta_N)` roots are found
/// by a modular search; linear factors are always found, higher-degree
/// factors are searched on a best-effort basis.
pub fn roots_in_field(f: &UniPoly) -> Vec<Scalar> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let distinct = match f.field.inner() {
        FieldInner::Finite(_) => {
            let sf = squarefree_part(f);
            let t = UniPoly::t(&f.field);
            let q = f.field.order().unwrap();
            let frob = t.powmod(q, &sf);
            let lin = sf.gcd(&(&frob - &t));
            let mut out = Vec::new();
            split_linear(&lin, &mut out);
            out
        }
        FieldInner::Cyclotomic { .. } => cyclo_roots::distinct_roots(&squarefree_part(f)),
    };
    let mut roots = Vec::new();
    for r in distinct {
        let lin = UniPoly::linear_root(&r);
        let mut g = f.clone();
        while let Some(q) = g.exact_div(&lin) {
            roots.push(r.clone());
            g = q;
        }
    }
    roots.sort();
    roots
}
