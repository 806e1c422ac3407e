//! Galois-point criteria in characteristic zero (and the tame range of
//! positive characteristic): the divisibility criterion on the homogeneous
//! parts at `P`, the normal form
//! `g_m X0^(d-m) + g_d`, the cyclic generator and the fixed hyperplane.

mod bounds;
mod lines;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{precondition, Error, Result};
use crate::field::primes::{binomial_mod, split_prime_power};
use crate::field::Scalar;
use crate::linalg::{identity, Matrix};
use crate::multipoly::MultiPoly;
use crate::polyparse::render;
use crate::projgeom::{
    dehomogenize_at, multiplicity, Chart, Hyperplane, Hypersurface, ProjPoint, ProjTransform, Tri,
};

pub use bounds::{counts_and_bounds, m_of, BoundsRecord};
pub use lines::{find_galois_on_line, independent_check, IndependenceReport, LinePoint, LineScan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    InnerGalois,
    OuterGalois,
    NotGalois,
    Unknown,
}

impl Verdict {
    pub fn is_galois(self) -> bool {
        matches!(self, Verdict::InnerGalois | Verdict::OuterGalois)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::InnerGalois => "inner_galois",
            Verdict::OuterGalois => "outer_galois",
            Verdict::NotGalois => "not_galois",
            Verdict::Unknown => "unknown",
        })
    }
}

/// `Z/n`, or `(Z/p)^e ⋊ Z/l` with `l | p^e - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupDescriptor {
    Cyclic { order: u64 },
    Semidirect { p: u64, e: u32, l: u64 },
}

impl GroupDescriptor {
    pub fn order(&self) -> u64 {
        match *self {
            GroupDescriptor::Cyclic { order } => order,
            GroupDescriptor::Semidirect { p, e, l } => p.pow(e) * l,
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupDescriptor::Cyclic { order } => write!(f, "cyclic({order})"),
            GroupDescriptor::Semidirect { p, e, l } => write!(f, "(Z/{p})^{e} x| Z/{l}"),
        }
    }
}

impl Serialize for GroupDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        match *self {
            GroupDescriptor::Cyclic { order } => {
                m.serialize_entry("kind", "cyclic")?;
                m.serialize_entry("order", &order)?;
            }
            GroupDescriptor::Semidirect { p, e, l } => {
                m.serialize_entry("kind", "semidirect")?;
                m.serialize_entry("p", &p)?;
                m.serialize_entry("e", &e)?;
                m.serialize_entry("l", &l)?;
                m.serialize_entry("order", &self.order())?;
            }
        }
        m.end()
    }
}

/// Group shape for a Galois point of multiplicity `m` on a degree-`d` hypersurface in characteristic `p`.
///
/// Writes `d - m = p^e l` with `p ∤ l`; a Galois group of this order is
/// `(Z/p)^e ⋊ Z/l`, which forces `l | p^e - 1`.
pub fn group_descriptor(p: u64, d: u32, m: u32) -> Result<GroupDescriptor> {
    let k = (d - m) as u64;
    if k < 2 {
        return precondition("d - m must be at least 2");
    }
    if p == 0 {
        return Ok(GroupDescriptor::Cyclic { order: k });
    }
    let (e, l) = split_prime_power(k, p);
    if e == 0 {
        return Ok(GroupDescriptor::Cyclic { order: k });
    }
    let pe = p.pow(e);
    if (pe - 1) % l != 0 {
        return Err(Error::Inconsistency(format!(
            "d - m = {k} = {p}^{e} * {l} but {l} does not divide {p}^{e} - 1"
        )));
    }
    Ok(GroupDescriptor::Semidirect { p, e, l })
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisVerdict {
    pub point: ProjPoint,
    pub verdict: Verdict,
    pub m: u32,
    pub group: Option<GroupDescriptor>,
    /// `X = T Z` with `F(T Z) = g_m Z0^(d-m) + g_d`.
    pub normal_transform: Option<ProjTransform>,
    pub normal_form: Option<String>,
    pub generator: Option<ProjTransform>,
    pub fixed_hyperplane: Option<Hyperplane>,
    pub witness: Option<String>,
    pub hypotheses: Vec<String>,
}

impl GaloisVerdict {
    pub(crate) fn bare(point: &ProjPoint, verdict: Verdict, m: u32) -> Self {
        GaloisVerdict {
            point: point.clone(),
            verdict,
            m,
            group: None,
            normal_transform: None,
            normal_form: None,
            generator: None,
            fixed_hyperplane: None,
            witness: None,
            hypotheses: Vec::new(),
        }
    }

    pub fn is_galois(&self) -> bool {
        self.verdict.is_galois()
    }
}

/// Names `x0, x1, ...` for rendering chart polynomials.
pub(crate) fn chart_names(nvars: usize) -> Vec<String> {
    (0..nvars).map(|i| format!("x{i}")).collect()
}

pub(crate) fn render_chart(f: &MultiPoly) -> String {
    render(f, &chart_names(f.nvars())).unwrap()
}

/// Why the criterion cannot be applied in characteristic `p`, if it cannot.
pub(crate) fn wild_reason(p: u64, k: u32) -> Option<String> {
    if p == 0 {
        return None;
    }
    let k = k as u64;
    if k.is_multiple_of(p) {
        return Some(format!("p = {p} divides d - m = {k}"));
    }
    (1..k)
        .find(|&i| binomial_mod(k, i, p) == 0)
        .map(|i| format!("binomial C({k}, {i}) vanishes mod {p}"))
}

fn standard_hypotheses(x: &Hypersurface) -> Vec<String> {
    let mut h = Vec::new();
    match x.irreducible.verdict {
        Tri::Yes => {}
        _ => h.push(format!(
            "X irreducible and reduced (unverified: {})",
            x.irreducible.evidence
        )),
    }
    h.push("s(X) <= n - 2 (used for the converse direction)".into());
    let p = x.field().characteristic();
    if p > 0 {
        h.push("tame-char extension of the characteristic-zero criterion".into());
    }
    h
}

/// Homogeneous parts `f_0..f_d` of the chart polynomial.
pub(crate) fn chart_parts(chart: &Chart, d: u32) -> Vec<MultiPoly> {
    (0..=d).map(|i| chart.f.homog_part(i)).collect()
}

struct Shift {
    /// `S` with `Y = S Z`, `Z0 = Y0 + h(Y)`.
    matrix: Matrix,
}

fn shift_matrix(h: &MultiPoly, nvars: usize) -> Shift {
    let field = h.field();
    let mut s = identity(nvars, field);
    for j in 1..nvars {
        s[0][j] = -h.coeff(&crate::multipoly::Monomial::var(nvars, j));
    }
    Shift { matrix: s }
}

/// The divisibility criterion at `P`; on success also the normal form, generator and fixed hyperplane.
pub fn check_condition_1m(x: &Hypersurface, p: &ProjPoint) -> Result<GaloisVerdict> {
    let d = x.degree();
    let m = multiplicity(x, p);
    if m > 1 {
        return precondition(format!(
            "{p} has multiplicity {m}; Galois points are taken in the smooth locus or off X"
        ));
    }
    let field = x.field().clone();
    let char_p = field.characteristic();
    let k = d - m;
    let mut out = GaloisVerdict::bare(p, Verdict::Unknown, m);
    out.hypotheses = standard_hypotheses(x);
    if let Some(reason) = wild_reason(char_p, k) {
        out.witness = Some(format!(
            "unknown (wild case): criterion requires tame case; {reason}"
        ));
        return Ok(out);
    }
    let chart = dehomogenize_at(x, p);
    let f = chart_parts(&chart, d);
    let kk = field.from_u64(k as u64);
    let den = f[m as usize].scale(&kk);
    let Some(h) = f[m as usize + 1].exact_divide(&den)? else {
        out.verdict = Verdict::NotGalois;
        out.witness = Some(format!(
            "f_{m} = {} does not divide f_{} = {}",
            render_chart(&f[m as usize]),
            m + 1,
            render_chart(&f[m as usize + 1])
        ));
        return Ok(out);
    };
    if !(h.is_zero() || (h.is_homogeneous() && h.total_degree() == Some(1))) {
        out.verdict = Verdict::NotGalois;
        out.witness = Some(format!("h = {} is not a linear form", render_chart(&h)));
        return Ok(out);
    }
    let fm = &f[m as usize];
    for i in 0..k {
        let binom = field.from_u64(binomial_mod(k as u64, i as u64, char_p));
        let expected = &fm.scale(&binom) * &h.pow(i);
        let actual = &f[(m + i) as usize];
        if &expected != actual {
            out.verdict = Verdict::NotGalois;
            out.witness = Some(format!(
                "f_{} required {} but actual {}",
                m + i,
                render_chart(&expected),
                render_chart(actual)
            ));
            return Ok(out);
        }
    }
    out.verdict = if m == 1 {
        Verdict::InnerGalois
    } else {
        Verdict::OuterGalois
    };
    out.group = Some(group_descriptor(0, d, m)?);
    let nvars = x.nvars();
    let shift = shift_matrix(&h, nvars);
    let t = chart.transform.compose(&ProjTransform::new(shift.matrix)?);
    let g = t.pull_back(x.poly());
    check_normal_shape(&g, m, d)?;
    out.normal_form = Some(g.render_default());
    let tinv = t.inverse();
    let fixed = Hyperplane::new(tinv.matrix()[0].clone())?;
    match field.primitive_root_of_unity(k as u64) {
        Ok(zeta) => {
            let mut diag = vec![field.one(); nvars];
            diag[0] = zeta;
            let sigma = t.compose(&ProjTransform::diagonal(&diag)?).compose(&tinv);
            verify_generator(x, &sigma, k)?;
            for j in 1..nvars {
                let col: Vec<Scalar> = t.matrix().iter().map(|r| r[j].clone()).collect();
                let q = ProjPoint::new(col)?;
                if sigma.apply(&q) != q || !fixed.contains(&q) {
                    return Err(Error::Inconsistency(
                        "generator does not fix the fixed hyperplane".into(),
                    ));
                }
            }
            out.generator = Some(sigma);
        }
        Err(e) => out
            .hypotheses
            .push(format!("generator not constructed: {e}")),
    }
    out.fixed_hyperplane = Some(fixed);
    out.normal_transform = Some(t);
    Ok(out)
}

/// `g` has the shape `g_m Z0^(d-m) + g_d` (no other powers of `Z0`).
fn check_normal_shape(g: &MultiPoly, m: u32, d: u32) -> Result<()> {
    let k = d - m;
    let ok = g.terms().all(|(mono, _)| {
        let e0 = mono.0[0];
        e0 == 0 || e0 == k
    });
    if !ok {
        return Err(Error::Inconsistency(format!(
            "normal form {} has middle powers of the first coordinate",
            g.render_default()
        )));
    }
    Ok(())
}

/// `F(sigma X) = c F` with `c^k = 1`, and `sigma^k` scalar.
fn verify_generator(x: &Hypersurface, sigma: &ProjTransform, k: u32) -> Result<()> {
    let f = x.poly();
    let pulled = sigma.pull_back(f);
    let (mono, lead) = f.leading_term().unwrap();
    let c = &pulled.coeff(mono) * &lead.inv()?;
    if pulled != f.scale(&c) || !c.pow(k as u64).is_one() {
        return Err(Error::Inconsistency("generator does not preserve F".into()));
    }
    if !sigma.pow(k).is_scalar() {
        return Err(Error::Inconsistency(
            "generator order does not divide d - m".into(),
        ));
    }
    Ok(())
}

/// The normal transform and the transformed hypersurface `g_m Z0^(d-m) + g_d`.
pub fn to_normal_form(x: &Hypersurface, p: &ProjPoint) -> Result<(ProjTransform, Hypersurface)> {
    let v = check_condition_1m(x, p)?;
    let Some(t) = v.normal_transform else {
        return precondition(format!(
            "{p} does not satisfy the Galois criterion ({})",
            v.verdict
        ));
    };
    let y = x.transformed(&t);
    Ok((t, y))
}

pub fn galois_generator(x: &Hypersurface, p: &ProjPoint) -> Result<ProjTransform> {
    let v = check_condition_1m(x, p)?;
    if !v.is_galois() {
        return precondition(format!("{p} is not a Galois point ({})", v.verdict));
    }
    match v.generator {
        Some(g) => Ok(g),
        None => Err(x.field().too_small_for_roots((x.degree() - v.m) as u64)),
    }
}

pub fn fixed_hyperplane(x: &Hypersurface, p: &ProjPoint) -> Result<Hyperplane> {
    let v = check_condition_1m(x, p)?;
    v.fixed_hyperplane
        .ok_or_else(|| Error::Precondition(format!("{p} is not a Galois point ({})", v.verdict)))
}

/// The quartic shortcut `f_2^2 = 3 f_1 f_3` at a smooth point, cross-checked against (1)_1.
pub fn quartic_inner_test(x: &Hypersurface, p: &ProjPoint) -> Result<GaloisVerdict> {
    if x.degree() != 4 {
        return precondition("the quartic test needs d = 4");
    }
    let char_p = x.field().characteristic();
    if char_p == 2 || char_p == 3 {
        return precondition("the quartic test needs p = 0 or p > 3");
    }
    if multiplicity(x, p) != 1 {
        return precondition(format!("{p} is not a smooth point of X"));
    }
    let chart = dehomogenize_at(x, p);
    let f = chart_parts(&chart, 4);
    let lhs = f[2].pow(2);
    let rhs = &f[1].scale(&x.field().from_i64(3)) * &f[3];
    let full = check_condition_1m(x, p)?;
    if (lhs == rhs) != full.is_galois() {
        return Err(Error::Inconsistency(format!(
            "quartic shortcut and condition (1)_1 disagree at {p}"
        )));
    }
    if lhs == rhs {
        return Ok(full);
    }
    let mut out = GaloisVerdict::bare(p, Verdict::NotGalois, 1);
    out.hypotheses = standard_hypotheses(x);
    out.witness = Some(format!(
        "f_2^2 = {} but 3 f_1 f_3 = {}",
        render_chart(&lhs),
        render_chart(&rhs)
    ));
    Ok(out)
}
