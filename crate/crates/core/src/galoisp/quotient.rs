//! Arithmetic in `K(x_1..x_n)[x_0] / (f)` with unreduced fractional coefficients.

use super::ProjectionPoly;
use crate::error::{precondition, Result};
use crate::MultiPoly;

/// Polynomial in `x_0` with coefficients in `K[x_1..x_n]`, lowest degree first.
pub(crate) type X0Poly = Vec<MultiPoly>;

pub(crate) fn trim(mut a: X0Poly) -> X0Poly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn add(a: &[MultiPoly], b: &[MultiPoly]) -> X0Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trim(out)
}

fn scale(a: &[MultiPoly], c: &MultiPoly) -> X0Poly {
    trim(a.iter().map(|x| x * c).collect())
}

fn mul(a: &[MultiPoly], b: &[MultiPoly], zero: &MultiPoly) -> X0Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![zero.clone(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(out)
}

/// An element `num / den` of the quotient ring, `num` reduced to degree below `deg f`.
#[derive(Clone, Debug)]
pub struct QuotientElement {
    num: X0Poly,
    den: MultiPoly,
}

impl QuotientElement {
    pub fn numerator(&self) -> &[MultiPoly] {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }
}

/// The ring `K(x_1..x_n)[x_0] / (f)`.
pub struct Quotient<'a> {
    f: &'a ProjectionPoly,
}

impl<'a> Quotient<'a> {
    pub fn new(f: &'a ProjectionPoly) -> Self {
        Quotient { f }
    }

    fn zero_base(&self) -> MultiPoly {
        MultiPoly::zero(self.f.base_vars(), self.f.field())
    }

    fn one_base(&self) -> MultiPoly {
        MultiPoly::one(self.f.base_vars(), self.f.field())
    }

    /// Pseudo-remainder: `L^k a = q f + r`; returns `(r, k)`.
    fn reduce(&self, a: X0Poly) -> (X0Poly, u32) {
        let fc = self.f.coeffs();
        let d = fc.len() - 1;
        let lead = &fc[d];
        let scalar_lead = lead
            .is_constant()
            .then(|| lead.constant_term().inv().unwrap());
        let mut a = trim(a);
        let mut k = 0;
        while a.len() > d {
            let top = a.len() - 1;
            let c = a[top].clone();
            let shift = top - d;
            match &scalar_lead {
                Some(inv) => {
                    let c = c.scale(inv);
                    for (i, fi) in fc.iter().enumerate() {
                        a[i + shift] = &a[i + shift] - &(&c * fi);
                    }
                }
                None => {
                    for x in a.iter_mut() {
                        *x = &*x * lead;
                    }
                    for (i, fi) in fc.iter().enumerate() {
                        a[i + shift] = &a[i + shift] - &(&c * fi);
                    }
                    k += 1;
                }
            }
            a = trim(a);
        }
        (a, k)
    }

    /// `num / den` for a numerator given as a polynomial in `x_0..x_n` (`x_0` first).
    pub fn element(&self, num: &MultiPoly, den: &MultiPoly) -> Result<QuotientElement> {
        if num.nvars() != self.f.base_vars() + 1 || den.nvars() != self.f.base_vars() {
            return precondition("numerator must live in x0..xn and denominator in x1..xn");
        }
        if den.is_zero() {
            return precondition("zero denominator");
        }
        let cs = num.coeffs_in(0).iter().map(drop_first_var).collect();
        Ok(self.from_parts(cs, den.clone()))
    }

    pub fn from_base(&self, c: &MultiPoly) -> QuotientElement {
        self.from_parts(vec![c.clone()], self.one_base())
    }

    pub fn x0(&self) -> QuotientElement {
        self.from_parts(vec![self.zero_base(), self.one_base()], self.one_base())
    }

    fn from_parts(&self, num: X0Poly, den: MultiPoly) -> QuotientElement {
        let (num, k) = self.reduce(num);
        let den = if k == 0 {
            den
        } else {
            &den * &self.f.lead().pow(k)
        };
        QuotientElement { num, den }
    }

    pub fn add(&self, a: &QuotientElement, b: &QuotientElement) -> QuotientElement {
        if a.den == b.den {
            return QuotientElement {
                num: add(&a.num, &b.num),
                den: a.den.clone(),
            };
        }
        if let Ok(Some(q)) = b.den.exact_divide(&a.den) {
            return QuotientElement {
                num: add(&scale(&a.num, &q), &b.num),
                den: b.den.clone(),
            };
        }
        if let Ok(Some(q)) = a.den.exact_divide(&b.den) {
            return QuotientElement {
                num: add(&a.num, &scale(&b.num, &q)),
                den: a.den.clone(),
            };
        }
        QuotientElement {
            num: add(&scale(&a.num, &b.den), &scale(&b.num, &a.den)),
            den: &a.den * &b.den,
        }
    }

    pub fn neg(&self, a: &QuotientElement) -> QuotientElement {
        QuotientElement {
            num: a.num.iter().map(|c| -c).collect(),
            den: a.den.clone(),
        }
    }

    pub fn sub(&self, a: &QuotientElement, b: &QuotientElement) -> QuotientElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &QuotientElement, b: &QuotientElement) -> QuotientElement {
        let num = mul(&a.num, &b.num, &self.zero_base());
        self.from_parts(num, &a.den * &b.den)
    }
}

/// `x_1..x_n` of an `(n+1)`-variable polynomial free of `x_0`, as an `n`-variable one.
pub(crate) fn drop_first_var(c: &MultiPoly) -> MultiPoly {
    let n = c.nvars() - 1;
    MultiPoly::from_terms(
        n,
        c.field(),
        c.terms()
            .map(|(m, s)| (crate::Monomial(m.0[1..].to_vec()), s.clone())),
    )
}

/// Checks `lead(f) * prod (T - r_i) = f(T)` in the quotient ring.
///
/// Returns `false` for an inseparable `f` (`df/dx_0 = 0`) without expanding.
pub fn splitting_certificate_check(f: &ProjectionPoly, roots: &[QuotientElement]) -> Result<bool> {
    if roots.len() != f.degree() {
        return precondition(format!(
            "{} roots supplied for a polynomial of degree {}",
            roots.len(),
            f.degree()
        ));
    }
    if f.is_inseparable() {
        return Ok(false);
    }
    let ring = Quotient::new(f);
    // prod (T - r_i), coefficients lowest degree first.
    let mut prod = vec![ring.from_base(&ring.one_base())];
    for r in roots {
        let mut next = Vec::with_capacity(prod.len() + 1);
        next.push(ring.neg(&ring.mul(r, &prod[0])));
        for j in 1..prod.len() {
            next.push(ring.sub(&prod[j - 1], &ring.mul(r, &prod[j])));
        }
        next.push(prod[prod.len() - 1].clone());
        prod = next;
    }
    let lead = ring.from_base(f.lead());
    for (j, c) in prod.iter().enumerate() {
        let lhs = ring.mul(&lead, c);
        let diff = ring.sub(&lhs, &ring.from_base(&f.coeffs()[j]));
        if !diff.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
