//! Galois certification in positive characteristic.
//!
//! Sufficiency comes from explicit splitting certificates in the quotient ring
//! `K(x_1..x_n)[x_0]/(f)`; necessity from the specialization oracle.

mod oracle;
mod quotient;

use std::fmt;

use serde::{Serialize, Serializer};

pub use crate::galois0::{group_descriptor, GroupDescriptor, Verdict};
pub use oracle::{specialization_oracle, OracleVerdict, SpecializationReport, Witness};
pub use quotient::{splitting_certificate_check, Quotient, QuotientElement};

use crate::error::{precondition, Error, Result};
use crate::field::{ddf, roots_in_field, squarefree_part, Embedding, FieldDesc, Scalar, UniPoly};
use crate::linalg::Matrix;
use crate::polyparse::{parse_str, render};
use crate::projgeom::{multiplicity, Hypersurface, ProjPoint, ProjTransform};
use crate::MultiPoly;
use quotient::drop_first_var;

/// The minimal-polynomial candidate of `x_0` over `K(x_1..x_n)` for the projection from `P`.
///
/// Coordinates: `X = T (x_0, x_1, ..., x_n, 1)` where the first column of `T`
/// is `P` and the others are the standard vectors not at `P`'s leading index.
#[derive(Clone, Debug)]
pub struct ProjectionPoly {
    field: FieldDesc,
    base_vars: usize,
    coeffs: Vec<MultiPoly>,
    transform: Option<ProjTransform>,
}

impl ProjectionPoly {
    /// From a polynomial in `x_0..x_n`, `x_0` first.
    pub fn from_multipoly(f: &MultiPoly) -> Result<Self> {
        if f.nvars() < 2 {
            return precondition("projection polynomial needs at least one base variable");
        }
        let coeffs: Vec<MultiPoly> = f.coeffs_in(0).iter().map(drop_first_var).collect();
        Self::from_coeffs(coeffs, f.nvars() - 1, f.field())
    }

    pub fn from_coeffs(
        coeffs: Vec<MultiPoly>,
        base_vars: usize,
        field: &FieldDesc,
    ) -> Result<Self> {
        let coeffs = quotient::trim(coeffs);
        if coeffs.len() < 2 {
            return Err(Error::Precondition(
                "projection is not generically finite (x0 does not occur)".into(),
            ));
        }
        Ok(ProjectionPoly {
            field: field.clone(),
            base_vars,
            coeffs,
            transform: None,
        })
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn base_vars(&self) -> usize {
        self.base_vars
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients of `x_0^0, x_0^1, ...` as polynomials in `x_1..x_n`.
    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> MultiPoly {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.base_vars, &self.field))
    }

    pub fn lead(&self) -> &MultiPoly {
        self.coeffs.last().unwrap()
    }

    pub fn transform(&self) -> Option<&ProjTransform> {
        self.transform.as_ref()
    }

    /// `df/dx_0 = 0`.
    pub fn is_inseparable(&self) -> bool {
        let p = self.field.characteristic();
        p > 0
            && self
                .coeffs
                .iter()
                .enumerate()
                .all(|(k, c)| c.is_zero() || (k as u64).is_multiple_of(p))
    }

    /// As a polynomial in `x_0..x_n`.
    pub fn to_multipoly(&self) -> MultiPoly {
        let n = self.base_vars + 1;
        let mut out = MultiPoly::zero(n, &self.field);
        let shift: Vec<usize> = (1..n).collect();
        for (k, c) in self.coeffs.iter().enumerate() {
            let mut x = MultiPoly::var(n, 0, &self.field).pow(k as u32);
            x = &x * &c.remap_vars(n, &shift);
            out = &out + &x;
        }
        out
    }

    pub fn names(&self) -> Vec<String> {
        (0..=self.base_vars).map(|i| format!("x{i}")).collect()
    }

    pub fn render(&self) -> String {
        render(&self.to_multipoly(), &self.names()).unwrap()
    }

    /// Coefficientwise image under a field embedding.
    pub fn map_field(&self, e: &Embedding) -> ProjectionPoly {
        ProjectionPoly {
            field: e.target.clone(),
            base_vars: self.base_vars,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.map_coeffs(&e.target, |s| e.map(s)))
                .collect(),
            transform: None,
        }
    }
}

impl fmt::Display for ProjectionPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for ProjectionPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

/// `T` with `P` as first column and the other standard vectors after it.
fn projection_transform(p: &ProjPoint) -> ProjTransform {
    let n = p.len();
    let field = p.field();
    let j = p.lead_index();
    let mut m: Matrix = vec![vec![field.zero(); n]; n];
    for (i, c) in p.coords().iter().enumerate() {
        m[i][0] = c.clone();
    }
    for (c, i) in (0..n).filter(|&i| i != j).enumerate() {
        m[i][c + 1] = field.one();
    }
    ProjTransform::new(m).expect("projection transform is invertible")
}

/// `F(T (x_0, ..., x_n, 1))` as a polynomial in `x_0` over `K(x_1..x_n)`.
pub fn projection_polynomial(x: &Hypersurface, p: &ProjPoint) -> Result<ProjectionPoly> {
    if x.nvars() < 3 {
        return precondition("projection needs a hypersurface in P^2 or higher");
    }
    let t = projection_transform(p);
    let n = x.nvars() - 1;
    let g = t.pull_back(x.poly()).specialize(n, &x.field().one());
    let g = g.remap_vars(n, &(0..n).chain(std::iter::once(0)).collect::<Vec<_>>());
    let mut f = ProjectionPoly::from_multipoly(&g).map_err(|_| {
        Error::Precondition(format!(
            "{p} is a strange center: the projection is not generically finite"
        ))
    })?;
    if f.is_inseparable() {
        return precondition(format!(
            "{p} is a strange center: the projection is inseparable"
        ));
    }
    f.transform = Some(t);
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdditivePattern {
    /// `sum c_i x_0^{p^i} + c` with scalar `c_i`.
    Additive,
    /// `a (x_0 + beta)^l + g` with `p` not dividing `l`.
    Kummer,
    /// `B x_0^q + B^q x_0 + C`.
    FermatType,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdditiveForm {
    pub pattern: AdditivePattern,
    pub e: u32,
    pub l: u64,
    pub decomposition: String,
    /// The shift `beta` with `x_0 + beta` the Kummer generator (rendered).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<String>,
    #[serde(skip)]
    recipe: Recipe,
}

#[derive(Clone, Debug)]
enum Recipe {
    /// Roots `x_0 + u` with `A(u) = 0`.
    Translate(UniPoly),
    /// Roots `x_0 + c B` with `c^q + c = 0`.
    Fermat { b: MultiPoly, q: u64 },
    /// Roots `z (x_0 + beta) - beta` with `z^l = 1`.
    Kummer { l: u64, beta: MultiPoly },
}

fn power_of(k: usize, p: u64) -> Option<u32> {
    let mut e = 0;
    let mut v = k as u64;
    if v == 0 {
        return None;
    }
    while v.is_multiple_of(p) {
        v /= p;
        e += 1;
    }
    (v == 1).then_some(e)
}

/// Recognizes the supported shapes of `f`; `None` when none applies or `p = 0`.
pub fn additive_form_check(f: &ProjectionPoly) -> Option<AdditiveForm> {
    let p = f.field.characteristic();
    if p == 0 {
        return None;
    }
    let d = f.degree();
    let names = f.names();
    let base_names = &names[1..];
    let show = |c: &MultiPoly| render(c, base_names).unwrap();
    let support: Vec<usize> = (1..=d).filter(|&k| !f.coeffs[k].is_zero()).collect();

    if let Some(e) = power_of(d, p) {
        if e > 0 && support == [1, d] {
            let b = f.coeffs[d].clone();
            if !b.is_constant() && f.coeffs[1] == b.pow(d as u32) {
                return Some(AdditiveForm {
                    pattern: AdditivePattern::FermatType,
                    e,
                    l: 1,
                    decomposition: format!(
                        "B x0^{d} + B^{d} x0 + C with B = {}, C = {}",
                        show(&b),
                        show(&f.coeffs[0])
                    ),
                    shift: None,
                    recipe: Recipe::Fermat { b, q: d as u64 },
                });
            }
        }
        let additive = e > 0
            && support.iter().all(|&k| power_of(k, p).is_some())
            && support.iter().all(|&k| f.coeffs[k].is_constant());
        if additive {
            let a = UniPoly::new(
                (0..=d)
                    .map(|k| {
                        if k == 0 {
                            f.field.zero()
                        } else {
                            f.coeffs[k].constant_term()
                        }
                    })
                    .collect(),
                &f.field,
            );
            return Some(AdditiveForm {
                pattern: AdditivePattern::Additive,
                e,
                l: 1,
                decomposition: format!("A(x0) + c with A(u) = {}, c = {}", a, show(&f.coeffs[0])),
                shift: None,
                recipe: Recipe::Translate(a),
            });
        }
    }

    let l = d as u64;
    if !l.is_multiple_of(p) && d >= 2 {
        let a = f.lead().clone();
        let zero = MultiPoly::zero(f.base_vars, &f.field);
        let (beta_num, beta_den) = if a.is_constant() {
            (
                f.coeffs[d - 1].clone(),
                &a.constant_term() * &f.field.from_u64(l),
            )
        } else {
            (zero.clone(), f.field.one())
        };
        let inv = beta_den.inv().unwrap();
        let beta = beta_num.scale(&inv);
        // f(y - beta) must be a y^l + g.
        let n = f.base_vars + 1;
        let shift_map: Vec<usize> = (1..n).collect();
        let y_minus_beta = &MultiPoly::var(n, 0, &f.field) - &beta.remap_vars(n, &shift_map);
        let mut subs = vec![y_minus_beta];
        subs.extend((1..n).map(|i| MultiPoly::var(n, i, &f.field)));
        let shifted = f.to_multipoly().compose(&subs);
        let cs = shifted.coeffs_in(0);
        if cs[1..d].iter().all(|c| c.is_zero()) {
            let g = drop_first_var(&cs[0]);
            return Some(AdditiveForm {
                pattern: AdditivePattern::Kummer,
                e: 0,
                l,
                decomposition: format!(
                    "a y^{l} + g with y = x0 + beta, a = {}, g = {}",
                    show(&a),
                    show(&g)
                ),
                shift: Some(show(&beta)),
                recipe: Recipe::Kummer { l, beta },
            });
        }
    }
    None
}

/// Smallest extension degree `m` over which `g` splits into distinct linear factors.
fn splitting_degree(g: &UniPoly) -> Option<u32> {
    if g.derivative().is_zero() || g.gcd(&g.derivative()).degree() != Some(0) {
        return None;
    }
    let parts = ddf(g).ok()?;
    let mut m: u64 = 1;
    for (i, _) in parts {
        m = num_integer::lcm(m, i as u64);
    }
    u32::try_from(m).ok()
}

const MAX_ROOT_FIELD: f64 = 1e15;

/// Distinct roots of a separable `g`, in `g`'s field or the smallest extension containing them all.
fn split_in_extension(g: &UniPoly, src: &FieldDesc) -> Result<(Option<Embedding>, Vec<Scalar>)> {
    let d = g.degree().unwrap_or(0);
    let roots = roots_in_field(&squarefree_part(g));
    if roots.len() == d {
        return Ok((None, roots));
    }
    let q = src.order().ok_or_else(|| Error::FieldTooSmall {
        field: src.name(),
        needed: format!("all roots of {g}"),
        suggestion: "a finite field or a larger cyclotomic field".into(),
    })?;
    let m =
        splitting_degree(g).ok_or_else(|| Error::Precondition(format!("{g} is not separable")))?;
    if (q as f64).powi(m as i32) > MAX_ROOT_FIELD {
        return Err(Error::FieldTooSmall {
            field: src.name(),
            needed: format!("all roots of {g}"),
            suggestion: format!(
                "GF({}^{})",
                src.characteristic(),
                src.extension_degree() as u32 * m
            ),
        });
    }
    let e = src.finite_extension(m)?;
    let roots = roots_in_field(&e.map_poly(g));
    Ok((Some(e), roots))
}

/// Resolves a recognized shape into explicit roots, possibly over an extension.
///
/// Returns the polynomial over the field of the roots together with the roots.
pub fn recipe_roots(
    f: &ProjectionPoly,
    form: &AdditiveForm,
) -> Result<(ProjectionPoly, Vec<QuotientElement>)> {
    let n = f.base_vars + 1;
    let shift_map: Vec<usize> = (1..n).collect();
    let (emb, us) = match &form.recipe {
        Recipe::Translate(a) => split_in_extension(a, &f.field)?,
        Recipe::Fermat { q, .. } => {
            let mut c = vec![f.field.zero(); *q as usize + 1];
            c[1] = f.field.one();
            c[*q as usize] = f.field.one();
            split_in_extension(&UniPoly::new(c, &f.field), &f.field)?
        }
        Recipe::Kummer { l, .. } => {
            let mut c = vec![f.field.zero(); *l as usize + 1];
            c[0] = -&f.field.one();
            c[*l as usize] = f.field.one();
            split_in_extension(&UniPoly::new(c, &f.field), &f.field)?
        }
    };
    let g = match &emb {
        Some(e) => f.map_field(e),
        None => f.clone(),
    };
    let field = g.field.clone();
    let lift = |c: &MultiPoly| match &emb {
        Some(e) => c.map_coeffs(&field, |s| e.map(s)).remap_vars(n, &shift_map),
        None => c.remap_vars(n, &shift_map),
    };
    let ring = Quotient::new(&g);
    let x0 = MultiPoly::var(n, 0, &field);
    let one = MultiPoly::one(n - 1, &field);
    let mut roots = Vec::with_capacity(us.len());
    for u in &us {
        let num = match &form.recipe {
            Recipe::Translate(_) => &x0 + &MultiPoly::constant(n, u.clone()),
            Recipe::Fermat { b, .. } => &x0 + &lift(b).scale(u),
            Recipe::Kummer { beta, .. } => {
                let beta = lift(beta);
                &(&x0 + &beta).scale(u) - &beta
            }
        };
        roots.push(ring.element(&num, &one)?);
    }
    Ok((g, roots))
}

/// Root source for [`certify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootSource {
    /// Whatever [`additive_form_check`] recognizes.
    Auto,
    Additive,
    Kummer,
    FermatInner,
    FermatOuter,
    /// Polynomials in `x0..xn`.
    Explicit(Vec<String>),
}

impl RootSource {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "auto" => RootSource::Auto,
            "additive" => RootSource::Additive,
            "kummer" => RootSource::Kummer,
            "fermat-inner" => RootSource::FermatInner,
            "fermat-outer" => RootSource::FermatOuter,
            other => RootSource::Explicit(other.split(';').map(|s| s.trim().to_string()).collect()),
        })
    }

    fn accepts(&self, pattern: AdditivePattern) -> bool {
        match self {
            RootSource::Auto => true,
            RootSource::Additive => pattern == AdditivePattern::Additive,
            RootSource::Kummer | RootSource::FermatOuter => pattern == AdditivePattern::Kummer,
            RootSource::FermatInner => pattern == AdditivePattern::FermatType,
            RootSource::Explicit(_) => false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyReport {
    pub point: ProjPoint,
    pub multiplicity: u32,
    pub projection: ProjectionPoly,
    pub degree: usize,
    pub pattern: Option<AdditiveForm>,
    pub certificate: bool,
    /// Field over which the roots were written.
    pub certificate_field: String,
    pub certificate_note: String,
    pub oracle: SpecializationReport,
    pub group: Option<GroupDescriptor>,
    pub verdict: Verdict,
}

/// Certificate plus oracle for the projection from `P`.
///
/// A true certificate together with an oracle failure is reported as an
/// inconsistency error.
pub fn certify(
    x: &Hypersurface,
    p: &ProjPoint,
    source: &RootSource,
    trials: usize,
    ext_degree: u32,
    seed: u64,
) -> Result<CertifyReport> {
    let char_p = x.field().characteristic();
    if char_p == 0 {
        return Err(Error::CharacteristicZero(x.field().name()));
    }
    let m = multiplicity(x, p);
    let f = projection_polynomial(x, p)?;
    let form = additive_form_check(&f);
    let (cert_poly, roots, note) = match source {
        RootSource::Explicit(list) => {
            let ring = Quotient::new(&f);
            let names = f.names();
            let one = MultiPoly::one(f.base_vars, &f.field);
            let roots = list
                .iter()
                .map(|s| ring.element(&parse_str(s, &names, &f.field)?, &one))
                .collect::<Result<Vec<_>>>()?;
            (f.clone(), Some(roots), "explicit roots".to_string())
        }
        _ => match &form {
            Some(form) if source.accepts(form.pattern) => match recipe_roots(&f, form) {
                Ok((g, roots)) => (g, Some(roots), format!("{:?} recipe", form.pattern)),
                Err(e) => (f.clone(), None, format!("no roots: {e}")),
            },
            Some(form) => (
                f.clone(),
                None,
                format!(
                    "requested recipe does not match the recognized {:?} shape",
                    form.pattern
                ),
            ),
            None => (f.clone(), None, "no supported shape recognized".to_string()),
        },
    };
    let certificate = match &roots {
        Some(r) => splitting_certificate_check(&cert_poly, r)?,
        None => false,
    };
    let oracle = specialization_oracle(&cert_poly, trials, ext_degree, seed)?;
    if certificate && oracle.verdict == OracleVerdict::Fail {
        return Err(Error::Inconsistency(format!(
            "splitting certificate holds at {p} but the specialization oracle found {:?}",
            oracle.witness
        )));
    }
    let group = if certificate {
        Some(group_descriptor(char_p, x.degree(), m)?)
    } else {
        None
    };
    let verdict = match (certificate, oracle.verdict) {
        (true, _) if m == 0 => Verdict::OuterGalois,
        (true, _) => Verdict::InnerGalois,
        (false, OracleVerdict::Fail) => Verdict::NotGalois,
        _ => Verdict::Unknown,
    };
    Ok(CertifyReport {
        point: p.clone(),
        multiplicity: m,
        degree: f.degree(),
        projection: f,
        pattern: form,
        certificate,
        certificate_field: cert_poly.field.name(),
        certificate_note: note,
        oracle,
        group,
        verdict,
    })
}
