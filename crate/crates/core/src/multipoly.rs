//! Sparse multivariate polynomials with graded-lex term order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldDesc, Scalar, UniPoly};
use crate::linalg::{det, Matrix};

/// Exponent vector. Ordered graded-lex with `X0 > X1 > ...`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<u32>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
    field: FieldDesc,
}

/// A polynomial together with the degree all its terms share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPoly {
    pub poly: MultiPoly,
    pub degree: u32,
}

impl MultiPoly {
    pub fn zero(nvars: usize, field: &FieldDesc) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
            field: field.clone(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let field = c.field().clone();
        Self::from_terms(nvars, &field, [(Monomial::one(nvars), c)])
    }

    pub fn one(nvars: usize, field: &FieldDesc) -> Self {
        Self::constant(nvars, field.one())
    }

    pub fn var(nvars: usize, i: usize, field: &FieldDesc) -> Self {
        Self::from_terms(nvars, field, [(Monomial::var(nvars, i), field.one())])
    }

    pub fn monomial(c: Scalar, exps: Vec<u32>) -> Self {
        let field = c.field().clone();
        let n = exps.len();
        Self::from_terms(n, &field, [(Monomial(exps), c)])
    }

    /// Sums repeated monomials and drops zero coefficients.
    pub fn from_terms(
        nvars: usize,
        field: &FieldDesc,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Self {
        let mut p = Self::zero(nvars, field);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    /// Linear form `sum c_i X_i`.
    pub fn linear_form(coeffs: &[Scalar], field: &FieldDesc) -> Self {
        let n = coeffs.len();
        Self::from_terms(
            n,
            field,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, i), c.clone())),
        )
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Scalar) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.total_degree() == self.min_degree()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Indices of the variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(
            self.nvars,
            &self.field,
            self.terms.iter().map(|(m, x)| (m.clone(), x * c)),
        )
    }

    pub fn map_coeffs(&self, field: &FieldDesc, f: impl Fn(&Scalar) -> Scalar) -> Self {
        Self::from_terms(
            self.nvars,
            field,
            self.terms.iter().map(|(m, x)| (m.clone(), f(x))),
        )
    }

    /// Multiplies by the monic normalization of the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv().unwrap()),
            _ => self.clone(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.nvars, &self.field);
        let mut base = self.clone();
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

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong length");
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(e as u64);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Homogeneous parts indexed `0..=deg`.
    pub fn homog_parts(&self) -> Vec<HomogPoly> {
        let deg = self.total_degree().unwrap_or(0);
        let mut parts: Vec<HomogPoly> = (0..=deg)
            .map(|d| HomogPoly {
                poly: Self::zero(self.nvars, &self.field),
                degree: d,
            })
            .collect();
        for (m, c) in &self.terms {
            parts[m.degree() as usize]
                .poly
                .terms
                .insert(m.clone(), c.clone());
        }
        parts
    }

    /// Homogeneous part of degree `d` (zero when absent).
    pub fn homog_part(&self, d: u32) -> Self {
        Self::from_terms(
            self.nvars,
            &self.field,
            self.terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Exact quotient `self / den` by leading-term reduction; `Ok(None)`
    /// when `den` does not divide `self`.
    pub fn exact_divide(&self, den: &MultiPoly) -> Result<Option<MultiPoly>> {
        let (lm, lc) = den.leading_term().ok_or(Error::DivisionByZero)?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut q = Self::zero(self.nvars, &self.field);
        while let Some((m, c)) = rem.leading_term() {
            let Some(qm) = m.div(lm) else {
                return Ok(None);
            };
            let qc = c * &lc_inv;
            let step = Self::from_terms(self.nvars, &self.field, [(qm, qc)]);
            rem = &rem - &(&step * den);
            q = &q + &step;
        }
        Ok(Some(q))
    }

    /// General substitution `X_i -> subs[i]`; the result lives in the ring of the substitutes.
    pub fn compose(&self, subs: &[MultiPoly]) -> MultiPoly {
        assert_eq!(subs.len(), self.nvars, "substitution has wrong length");
        let target_vars = subs.first().map_or(0, |s| s.nvars);
        let mut cache: Vec<Vec<MultiPoly>> = subs
            .iter()
            .map(|s| vec![Self::one(s.nvars, &self.field)])
            .collect();
        let mut out = Self::zero(target_vars, &self.field);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap() * &subs[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// `F(T x)`: each `X_i` becomes `sum_j T[i][j] X_j`. Fails on singular `T`.
    pub fn linear_substitute(&self, t: &Matrix) -> Result<MultiPoly> {
        if t.len() != self.nvars || t.iter().any(|r| r.len() != self.nvars) {
            return Err(Error::DimensionMismatch(format!(
                "transform must be {n}x{n}",
                n = self.nvars
            )));
        }
        if det(t)?.is_zero() {
            return Err(Error::SingularTransform);
        }
        Ok(self.linear_substitute_unchecked(t))
    }

    /// As [`MultiPoly::linear_substitute`] for a possibly non-square or
    /// singular matrix (`nvars` rows, any number of columns).
    pub fn linear_substitute_unchecked(&self, t: &Matrix) -> MultiPoly {
        let subs: Vec<MultiPoly> = t
            .iter()
            .map(|row| Self::linear_form(row, &self.field))
            .collect();
        self.compose(&subs)
    }

    pub fn partial(&self, var: usize) -> MultiPoly {
        Self::from_terms(
            self.nvars,
            &self.field,
            self.terms
                .iter()
                .filter(|(m, _)| m.0[var] > 0)
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    let k = e[var];
                    e[var] -= 1;
                    (Monomial(e), c * &self.field.from_u64(k as u64))
                }),
        )
    }

    pub fn partials(&self) -> Vec<MultiPoly> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// Coefficients of `t^0, t^1, ...` in `F(X + t v)`, up to the total degree.
    pub fn taylor_coeffs(&self, v: &[Scalar]) -> Vec<MultiPoly> {
        assert_eq!(v.len(), self.nvars, "direction has wrong length");
        let n = self.nvars;
        let subs: Vec<MultiPoly> = (0..n)
            .map(|j| {
                let mut s = Self::var(n + 1, j, &self.field);
                s.add_term(Monomial::var(n + 1, n), &v[j]);
                s
            })
            .collect();
        let shifted = self.compose(&subs);
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut out = vec![Self::zero(n, &self.field); deg + 1];
        for (m, c) in &shifted.terms {
            let k = m.0[n] as usize;
            out[k].add_term(Monomial(m.0[..n].to_vec()), c);
        }
        out
    }

    /// Hasse derivative `D_v^(order) F`: coefficient of `t^order` in `F(X + t v)`.
    pub fn hasse_derivative(&self, v: &[Scalar], order: u32) -> MultiPoly {
        self.taylor_coeffs(v)
            .into_iter()
            .nth(order as usize)
            .unwrap_or_else(|| Self::zero(self.nvars, &self.field))
    }

    /// Substitutes a value for one variable (the variable stays, unused).
    pub fn specialize(&self, var: usize, value: &Scalar) -> MultiPoly {
        let mut out = Self::zero(self.nvars, &self.field);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e[var];
            e[var] = 0;
            out.add_term(Monomial(e), &(c * &value.pow(k as u64)));
        }
        out
    }

    /// Re-embeds into a ring with `new_nvars` variables, sending `X_i` to `X_{map[i]}`.
    pub fn remap_vars(&self, new_nvars: usize, map: &[usize]) -> MultiPoly {
        Self::from_terms(
            new_nvars,
            &self.field,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0; new_nvars];
                for (i, &k) in m.0.iter().enumerate() {
                    if k > 0 {
                        e[map[i]] += k;
                    }
                }
                (Monomial(e), c.clone())
            }),
        )
    }

    /// Writes `self` as `sum_k c_k(X) X_var^k`; returns `c_0, c_1, ...`.
    pub fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(self.nvars, &self.field); deg + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e[var] as usize;
            e[var] = 0;
            out[k].add_term(Monomial(e), c);
        }
        out
    }

    /// Univariate view when only `var` occurs.
    pub fn to_unipoly(&self, var: usize) -> Option<UniPoly> {
        let cs = self.coeffs_in(var);
        let coeffs = cs
            .iter()
            .map(|c| c.is_constant().then(|| c.constant_term()))
            .collect::<Option<Vec<Scalar>>>()?;
        Some(UniPoly::new(coeffs, &self.field))
    }

    /// `sum c_k X_var^k` from a univariate polynomial.
    pub fn from_unipoly(u: &UniPoly, nvars: usize, var: usize) -> MultiPoly {
        Self::from_terms(
            nvars,
            u.field(),
            u.coeffs().iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; nvars];
                e[var] = k as u32;
                (Monomial(e), c.clone())
            }),
        )
    }

    /// Homogenizes with respect to a new variable placed at index `at`.
    pub fn homogenize(&self, at: usize) -> MultiPoly {
        let d = self.total_degree().unwrap_or(0);
        let map: Vec<usize> = (0..self.nvars)
            .map(|i| if i < at { i } else { i + 1 })
            .collect();
        Self::from_terms(
            self.nvars + 1,
            &self.field,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0; self.nvars + 1];
                for (i, &k) in m.0.iter().enumerate() {
                    e[map[i]] = k;
                }
                e[at] = d - m.degree();
                (Monomial(e), c.clone())
            }),
        )
    }

    /// Debug rendering with names `X0, X1, ...`.
    pub fn render_default(&self) -> String {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("X{i}")).collect();
        crate::polyparse::render(self, &names).unwrap()
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_default())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_default())
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            field: self.field.clone(),
        }
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.nvars, &self.field);
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                out.add_term(ma.mul(mb), &(a * b));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_make;
    use crate::linalg::{identity, mat_mul};
    use crate::polyparse::parse_str;
    use proptest::prelude::*;

    fn q() -> FieldDesc {
        FieldDesc::rationals()
    }

    fn p(text: &str, vars: &[&str], f: &FieldDesc) -> MultiPoly {
        parse_str(text, vars, f).unwrap()
    }

    #[test]
    fn homog_parts_examples() {
        let v = ["x1", "x2"];
        let f = p("x1 + x1^4 + x2^4", &v, &q());
        let parts = f.homog_parts();
        assert_eq!(parts.len(), 5);
        assert_eq!(parts[1].poly, p("x1", &v, &q()));
        assert_eq!(parts[4].poly, p("x1^4 + x2^4", &v, &q()));
        assert!(parts[0].poly.is_zero() && parts[2].poly.is_zero() && parts[3].poly.is_zero());

        let zero = MultiPoly::zero(2, &q());
        assert!(zero.homog_parts().iter().all(|h| h.poly.is_zero()));

        // Oracle: expand (1+x1)^4 + 1 + x2^4 + x3^4 term by term.
        let v = ["x1", "x2", "x3"];
        let g = p("(1 + x1)^4 + 1 + x2^4 + x3^4", &v, &q());
        let parts = g.homog_parts();
        assert_eq!(parts[0].poly, p("2", &v, &q()));
        assert_eq!(parts[1].poly, p("4*x1", &v, &q()));
        assert_eq!(parts[2].poly, p("6*x1^2", &v, &q()));
        assert_eq!(parts[3].poly, p("4*x1^3", &v, &q()));
        assert_eq!(parts[4].poly, p("x1^4 + x2^4 + x3^4", &v, &q()));
    }

    #[test]
    fn exact_divide_examples() {
        let v = ["x1", "x2"];
        let num = p("3*x1*x2", &v, &q());
        assert_eq!(
            num.exact_divide(&p("x1", &v, &q())).unwrap(),
            Some(p("3*x2", &v, &q()))
        );
        assert_eq!(
            p("x1^2 + x2^2", &v, &q())
                .exact_divide(&p("x1", &v, &q()))
                .unwrap(),
            None
        );
        assert_eq!(
            num.exact_divide(&MultiPoly::zero(2, &q())),
            Err(Error::DivisionByZero)
        );

        // f1, f2 of X1(X0+X2)^3 + X2^4 at X0 = 1
        let vv = ["X0", "X1", "X2"];
        let fx = p("X1*(X0 + X2)^3 + X2^4", &vv, &q()).specialize(0, &q().one());
        let f1 = fx.homog_part(1);
        let f2 = fx.homog_part(2);
        assert_eq!(f1, p("X1", &vv, &q()));
        assert_eq!(f2, p("3*X1*X2", &vv, &q()));
        assert_eq!(f2.exact_divide(&f1).unwrap(), Some(p("3*X2", &vv, &q())));
    }

    #[test]
    fn linear_substitute_examples() {
        let vv = ["X0", "X1", "X2"];
        let f = p("X1*(X0 + X2)^3 + X2^4", &vv, &q());
        assert_eq!(f.linear_substitute(&identity(3, &q())).unwrap(), f);
        let mut t = identity(3, &q());
        t[0][2] = q().from_i64(-1);
        assert_eq!(
            f.linear_substitute(&t).unwrap(),
            p("X1*X0^3 + X2^4", &vv, &q())
        );

        let k = FieldDesc::cyclotomic(4);
        let g = p("X0^4 + X1^4", &["X0", "X1"], &k);
        let mut d = identity(2, &k);
        d[0][0] = k.generator();
        assert_eq!(g.linear_substitute(&d).unwrap(), g);

        let mut s = identity(3, &q());
        s[0][0] = q().zero();
        assert_eq!(f.linear_substitute(&s), Err(Error::SingularTransform));
    }

    #[test]
    fn hasse_examples() {
        let qq = q();
        let f = p("X0^2", &["X0", "X1"], &qq);
        let e0 = vec![qq.one(), qq.zero()];
        assert_eq!(f.hasse_derivative(&e0, 0), f);
        assert_eq!(f.hasse_derivative(&e0, 1), p("2*X0", &["X0", "X1"], &qq));

        for pr in [2u64, 3, 5] {
            let fp = field_make(pr, 1, 0).unwrap();
            let g = MultiPoly::var(2, 0, &fp).pow(pr as u32);
            let e0 = vec![fp.one(), fp.zero()];
            assert!(g.hasse_derivative(&e0, 1).is_zero());
            assert!(g.partial(0).is_zero());
            assert_eq!(g.hasse_derivative(&e0, pr as u32), MultiPoly::one(2, &fp));
        }
    }

    #[test]
    fn partials_examples() {
        let f2 = field_make(2, 1, 0).unwrap();
        let vars = ["X", "Y", "Z", "W"];
        let f = p("Z*W^2 - X^2*W - Y^3", &vars, &f2);
        let parts = f.partials();
        assert_eq!(parts[0], MultiPoly::zero(4, &f2));
        assert_eq!(parts[1], p("-Y^2", &vars, &f2));
        assert_eq!(parts[2], p("W^2", &vars, &f2));
        assert_eq!(parts[3], p("-X^2", &vars, &f2));

        let fermat = p("X^4 + Y^4 + Z^4 + W^4", &vars, &q());
        let want: Vec<MultiPoly> = vars
            .iter()
            .map(|v| p(&format!("4*{v}^3"), &vars, &q()))
            .collect();
        assert_eq!(fermat.partials(), want);
        assert!(p("7", &vars, &q()).partials().iter().all(|d| d.is_zero()));
    }

    fn arb_poly(nvars: usize, field: FieldDesc) -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec((proptest::collection::vec(0u32..4, nvars), -4i64..5), 0..7)
            .prop_map(move |ts| {
                MultiPoly::from_terms(
                    nvars,
                    &field,
                    ts.into_iter()
                        .map(|(e, c)| (Monomial(e), field.from_i64(c))),
                )
            })
    }

    fn arb_matrix(n: usize, field: FieldDesc) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-2i64..3, n * n).prop_map(move |v| {
            (0..n)
                .map(|i| (0..n).map(|j| field.from_i64(v[i * n + j])).collect())
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn ring_axioms(a in arb_poly(3, q()), b in arb_poly(3, q()), c in arb_poly(3, q())) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() && !b.is_zero() {
                prop_assert_eq!((&a * &b).total_degree().unwrap(),
                                a.total_degree().unwrap() + b.total_degree().unwrap());
            }
        }

        #[test]
        fn homog_reassembly(a in arb_poly(3, q())) {
            let sum = a.homog_parts().iter().fold(MultiPoly::zero(3, &q()), |acc, h| &acc + &h.poly);
            prop_assert_eq!(sum, a.clone());
            for h in a.homog_parts() {
                prop_assert!(h.poly.terms().all(|(m, _)| m.degree() == h.degree));
            }
        }

        #[test]
        fn exact_divide_roundtrip(a in arb_poly(3, q()), b in arb_poly(3, q())) {
            prop_assume!(!b.is_zero());
            let prod = &a * &b;
            prop_assert_eq!(prod.exact_divide(&b).unwrap(), Some(a));
        }

        #[test]
        fn substitution_is_functorial(f in arb_poly(3, q()), t1 in arb_matrix(3, q()), t2 in arb_matrix(3, q())) {
            let lhs = f.linear_substitute_unchecked(&t1).linear_substitute_unchecked(&t2);
            let rhs = f.linear_substitute_unchecked(&mat_mul(&t1, &t2));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn hasse_product_rule(f in arb_poly(3, q()), g in arb_poly(3, q()), v in proptest::collection::vec(-3i64..4, 3)) {
            let v: Vec<Scalar> = v.iter().map(|&x| q().from_i64(x)).collect();
            let lhs = (&f * &g).hasse_derivative(&v, 1);
            let rhs = &(&f * &g.hasse_derivative(&v, 1)) + &(&g * &f.hasse_derivative(&v, 1));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn taylor_completeness(f in arb_poly(3, field_make(3, 1, 0).unwrap()), v in proptest::collection::vec(0u64..3, 3)) {
            let fld = field_make(3, 1, 0).unwrap();
            let v: Vec<Scalar> = v.iter().map(|&x| fld.from_u64(x)).collect();
            // F(X + t v) computed directly in four variables (t = X3).
            let subs: Vec<MultiPoly> = (0..3).map(|j| {
                &MultiPoly::var(4, j, &fld) + &MultiPoly::var(4, 3, &fld).scale(&v[j])
            }).collect();
            let direct = f.compose(&subs);
            let t = MultiPoly::var(4, 3, &fld);
            let mut rebuilt = MultiPoly::zero(4, &fld);
            for (i, c) in f.taylor_coeffs(&v).iter().enumerate() {
                rebuilt = &rebuilt + &(&c.remap_vars(4, &[0, 1, 2]) * &t.pow(i as u32));
            }
            prop_assert_eq!(rebuilt, direct);
        }
    }
}
