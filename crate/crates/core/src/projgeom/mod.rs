//! Projective points, hyperplanes and transforms; hypersurface geometry.

mod enumerate;
mod probes;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{precondition, Error, Result};
use crate::field::{FieldDesc, Scalar};
use crate::linalg::{det, identity, inverse, mat_mul, mat_vec, Matrix};
use crate::multipoly::MultiPoly;
use crate::polyparse::{parse_str, render};

pub use enumerate::{enumeration_budget, point_at, point_count, random_point, ProjectiveSpace};
pub use probes::{
    irreducibility_probe, is_singular_point, restrict_to_line, singular_probe, squarefree_probe,
    IrreducibilityReport, SingProbeReport,
};

/// Three-valued verdict used by flags and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub verdict: Tri,
    pub evidence: String,
}

impl Flag {
    pub fn unknown() -> Self {
        Flag {
            verdict: Tri::Unknown,
            evidence: "not checked".into(),
        }
    }

    pub fn yes(evidence: impl Into<String>) -> Self {
        Flag {
            verdict: Tri::Yes,
            evidence: evidence.into(),
        }
    }
}

/// A point of projective space, normalized so its first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        let Some(lead) = coords.iter().find(|c| !c.is_zero()) else {
            return precondition("projective point with all coordinates zero");
        };
        let inv = lead.inv()?;
        Ok(ProjPoint {
            coords: coords.iter().map(|c| c * &inv).collect(),
        })
    }

    pub fn from_i64s(coords: &[i64], field: &FieldDesc) -> Result<Self> {
        Self::new(coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// The coordinate point `e_i`.
    pub fn coordinate(nvars: usize, i: usize, field: &FieldDesc) -> Self {
        let mut c = vec![field.zero(); nvars];
        c[i] = field.one();
        ProjPoint { coords: c }
    }

    /// Parses `"a0:a1:...:an"`, each coordinate a constant expression.
    pub fn parse(text: &str, field: &FieldDesc) -> Result<Self> {
        let no_vars: [&str; 0] = [];
        let coords = text
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(':')
            .map(|s| Ok(parse_str(s, &no_vars, field)?.constant_term()))
            .collect::<Result<Vec<Scalar>>>()?;
        Self::new(coords)
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn field(&self) -> &FieldDesc {
        self.coords[0].field()
    }

    /// Index of the first nonzero coordinate.
    pub fn lead_index(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).unwrap()
    }

    /// Whether `self`, `a`, `b` are collinear (rank of the 3 vectors is at most 2).
    pub fn on_line(&self, a: &ProjPoint, b: &ProjPoint) -> bool {
        crate::linalg::rank(&vec![
            a.coords.clone(),
            b.coords.clone(),
            self.coords.clone(),
        ]) <= 2
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| {
                let s = c.to_string();
                if s.contains(' ') {
                    format!("({s})")
                } else {
                    s
                }
            })
            .collect();
        write!(f, "({})", parts.join(":"))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A hyperplane `sum c_i X_i = 0`, normalized so the first nonzero `c_i` is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    form: Vec<Scalar>,
}

impl Hyperplane {
    pub fn new(form: Vec<Scalar>) -> Result<Self> {
        let Some(lead) = form.iter().find(|c| !c.is_zero()) else {
            return precondition("hyperplane with zero form");
        };
        let inv = lead.inv()?;
        Ok(Hyperplane {
            form: form.iter().map(|c| c * &inv).collect(),
        })
    }

    /// `X_i = 0`.
    pub fn coordinate(nvars: usize, i: usize, field: &FieldDesc) -> Self {
        let mut c = vec![field.zero(); nvars];
        c[i] = field.one();
        Hyperplane { form: c }
    }

    pub fn from_poly(f: &MultiPoly) -> Result<Self> {
        if !f.is_homogeneous() || f.total_degree() != Some(1) {
            return precondition("hyperplane form must be homogeneous of degree 1");
        }
        let n = f.nvars();
        Self::new(
            (0..n)
                .map(|i| f.coeff(&crate::multipoly::Monomial::var(n, i)))
                .collect(),
        )
    }

    pub fn form(&self) -> &[Scalar] {
        &self.form
    }

    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::linear_form(&self.form, self.form[0].field())
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        let mut acc = self.form[0].field().zero();
        for (a, b) in self.form.iter().zip(p.coords()) {
            acc += &(a * b);
        }
        acc.is_zero()
    }

    pub fn render(&self, names: &[String]) -> String {
        render(&self.to_poly(), names).unwrap()
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.to_poly().render_default())
    }
}

impl fmt::Debug for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Hyperplane {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_poly().render_default())
    }
}

/// An invertible linear change of coordinates `X = T Y`.
///
/// Points map as column vectors (`P -> T P`); polynomials pull back as
/// `F -> F(T Y)`, so `F(T Q) = 0` iff `Q` lies on the pulled-back hypersurface.
#[derive(Clone, PartialEq, Eq)]
pub struct ProjTransform {
    matrix: Matrix,
}

impl ProjTransform {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if det(&matrix)?.is_zero() {
            return Err(Error::SingularTransform);
        }
        Ok(ProjTransform { matrix })
    }

    pub fn identity(n: usize, field: &FieldDesc) -> Self {
        ProjTransform {
            matrix: identity(n, field),
        }
    }

    pub fn diagonal(entries: &[Scalar]) -> Result<Self> {
        let field = entries[0].field().clone();
        let mut m = identity(entries.len(), &field);
        for (i, e) in entries.iter().enumerate() {
            m[i][i] = e.clone();
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(mat_vec(&self.matrix, p.coords())).expect("invertible transform")
    }

    pub fn inverse(&self) -> Self {
        ProjTransform {
            matrix: inverse(&self.matrix).expect("invertible transform"),
        }
    }

    /// `self * other` (apply `other` first to points).
    pub fn compose(&self, other: &ProjTransform) -> Self {
        ProjTransform {
            matrix: mat_mul(&self.matrix, &other.matrix),
        }
    }

    /// `F(T Y)`.
    pub fn pull_back(&self, f: &MultiPoly) -> MultiPoly {
        f.linear_substitute_unchecked(&self.matrix)
    }

    /// Whether the transform is a scalar multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        let c = &self.matrix[0][0];
        self.matrix.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, x)| if i == j { x == c } else { x.is_zero() })
        })
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar() && self.matrix[0][0].is_one()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.dim(), self.matrix[0][0].field());
        for _ in 0..e {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn rendered(&self) -> Vec<Vec<String>> {
        self.matrix
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

impl fmt::Debug for ProjTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rendered())
    }
}

impl Serialize for ProjTransform {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rendered().serialize(s)
    }
}

/// A hypersurface `F = 0` in `P^(n+1)` with cached flags.
#[derive(Clone, Debug)]
pub struct Hypersurface {
    f: MultiPoly,
    d: u32,
    pub squarefree: Flag,
    pub irreducible: Flag,
}

impl Hypersurface {
    pub fn new(f: MultiPoly) -> Result<Self> {
        if f.is_zero() {
            return precondition("defining polynomial is zero");
        }
        if !f.is_homogeneous() {
            return precondition("defining polynomial is not homogeneous");
        }
        let d = f.total_degree().unwrap();
        if d == 0 {
            return precondition("defining polynomial is constant");
        }
        if f.nvars() < 2 {
            return precondition("need at least two homogeneous variables");
        }
        Ok(Hypersurface {
            f,
            d,
            squarefree: Flag::unknown(),
            irreducible: Flag::unknown(),
        })
    }

    pub fn with_irreducible(mut self, flag: Flag) -> Self {
        if flag.verdict == Tri::Yes {
            self.squarefree = Flag::yes("irreducible");
        }
        self.irreducible = flag;
        self
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.f
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Dimension `n` (the ambient space is `P^(n+1)`).
    pub fn dim(&self) -> usize {
        self.f.nvars() - 2
    }

    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }

    pub fn field(&self) -> &FieldDesc {
        self.f.field()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.f.eval(p.coords()).is_zero()
    }

    /// Pulls back along `T`, keeping flags (they are projective invariants).
    pub fn transformed(&self, t: &ProjTransform) -> Hypersurface {
        Hypersurface {
            f: t.pull_back(&self.f),
            d: self.d,
            squarefree: self.squarefree.clone(),
            irreducible: self.irreducible.clone(),
        }
    }
}

/// Affine chart centred at a point: `f(x) = F(T(1, x_1, ..., x_{n+1}))`.
#[derive(Clone, Debug)]
pub struct Chart {
    /// Polynomial in the same `n+2` variables with `X0` set to 1 (so `X0` does not occur).
    pub f: MultiPoly,
    /// Sends `(1:0:...:0)` to the chart centre.
    pub transform: ProjTransform,
}

/// Transform with `P` (scaled so its last nonzero coordinate is 1) as first
/// column and the remaining standard basis vectors, in order, after it.
pub fn centering_transform(p: &ProjPoint) -> ProjTransform {
    let n = p.len();
    let field = p.field().clone();
    let j = (0..n).rev().find(|&i| !p.coords()[i].is_zero()).unwrap();
    let inv = p.coords()[j].inv().unwrap();
    let col0: Vec<Scalar> = p.coords().iter().map(|c| c * &inv).collect();
    let mut m = vec![vec![field.zero(); n]; n];
    for i in 0..n {
        m[i][0] = col0[i].clone();
    }
    let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    for (c, &i) in others.iter().enumerate() {
        m[i][c + 1] = field.one();
    }
    ProjTransform::new(m).expect("centering transform is invertible")
}

pub fn dehomogenize_at(x: &Hypersurface, p: &ProjPoint) -> Chart {
    let t = centering_transform(p);
    let f = t.pull_back(x.poly()).specialize(0, &x.field().one());
    Chart { f, transform: t }
}

/// Least `i` with a nonzero degree-`i` part in the chart at `P` (0 when `P` is off `X`).
pub fn multiplicity(x: &Hypersurface, p: &ProjPoint) -> u32 {
    dehomogenize_at(x, p).f.min_degree().unwrap_or(0)
}

fn gradient(f: &MultiPoly, p: &ProjPoint) -> Vec<Scalar> {
    f.partials().iter().map(|d| d.eval(p.coords())).collect()
}

/// The Gauss map value at a point: the tuple of partial derivatives.
pub fn gauss_map(x: &Hypersurface, p: &ProjPoint) -> Vec<Scalar> {
    gradient(x.poly(), p)
}

pub fn tangent_space(x: &Hypersurface, p: &ProjPoint) -> Result<Hyperplane> {
    if multiplicity(x, p) != 1 {
        return precondition(format!("{p} is not a smooth point of the hypersurface"));
    }
    Hyperplane::new(gradient(x.poly(), p))
}

pub fn hessian_at(x: &Hypersurface, p: &ProjPoint) -> Scalar {
    let parts = x.poly().partials();
    let m: Matrix = parts
        .iter()
        .map(|d| d.partials().iter().map(|dd| dd.eval(p.coords())).collect())
        .collect();
    det(&m).unwrap()
}

/// The first polar `sum v_j dF/dX_j`.
pub fn polar(f: &MultiPoly, v: &[Scalar]) -> MultiPoly {
    f.partials()
        .iter()
        .zip(v)
        .fold(MultiPoly::zero(f.nvars(), f.field()), |acc, (d, c)| {
            &acc + &d.scale(c)
        })
}

/// Whether `P` is a strange center: the first polar at `P` vanishes identically.
pub fn is_strange_center(x: &Hypersurface, p: &ProjPoint) -> Result<bool> {
    if x.irreducible.verdict != Tri::Yes {
        return precondition("strange-center test needs an irreducible hypersurface");
    }
    Ok(polar(x.poly(), p.coords()).is_zero())
}

/// `X ∩ H` as a hypersurface in the coordinates of `H`.
#[derive(Clone, Debug)]
pub struct Section {
    pub hypersurface: Hypersurface,
    /// `(n+2) x (n+1)` matrix with `X = E Y` on `H`.
    pub embedding: Matrix,
    /// The ambient coordinate eliminated using `H`.
    pub solved_var: usize,
}

impl Section {
    /// Coordinates of a point of `H` in the section's projective space.
    pub fn to_section(&self, p: &ProjPoint) -> Result<ProjPoint> {
        ProjPoint::new(
            p.coords()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != self.solved_var)
                .map(|(_, c)| c.clone())
                .collect(),
        )
    }

    pub fn from_section(&self, q: &ProjPoint) -> ProjPoint {
        ProjPoint::new(mat_vec(&self.embedding, q.coords())).expect("embedding is injective")
    }
}

pub fn hyperplane_section(x: &Hypersurface, h: &Hyperplane) -> Result<Section> {
    let n = x.nvars();
    let field = x.field().clone();
    let j = (0..n).rev().find(|&i| !h.form()[i].is_zero()).unwrap();
    let inv = h.form()[j].inv()?;
    let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    let mut e = vec![vec![field.zero(); n - 1]; n];
    for (c, &i) in others.iter().enumerate() {
        e[i][c] = field.one();
        e[j][c] = -&(&h.form()[i] * &inv);
    }
    let g = x.poly().linear_substitute_unchecked(&e);
    if g.is_zero() {
        return precondition("the hyperplane contains the hypersurface");
    }
    let mut hs = Hypersurface::new(g)?;
    hs.squarefree = Flag::unknown();
    Ok(Section {
        hypersurface: hs,
        embedding: e,
        solved_var: j,
    })
}

/// The three verdicts of the section condition, plus the unchecked part.
#[derive(Clone, Debug, Serialize)]
pub struct StarReport {
    pub degree: Tri,
    pub irreducible: Tri,
    pub not_strange: Tri,
    pub singular_dimension: String,
    pub irreducibility_evidence: String,
}

impl StarReport {
    pub fn passed(&self) -> bool {
        self.degree == Tri::Yes && self.irreducible == Tri::Yes && self.not_strange == Tri::Yes
    }
}

pub fn star_check(
    x: &Hypersurface,
    h: &Hyperplane,
    p: &ProjPoint,
    trials: usize,
    seed: u64,
) -> Result<(Section, StarReport)> {
    if !h.contains(p) {
        return precondition("the point does not lie on the hyperplane");
    }
    let mut section = hyperplane_section(x, h)?;
    let degree = if section.hypersurface.degree() == x.degree() {
        Tri::Yes
    } else {
        Tri::No
    };
    let probe = irreducibility_probe(&section.hypersurface, trials, seed);
    section.hypersurface.irreducible = Flag {
        verdict: probe.verdict,
        evidence: probe.evidence.clone(),
    };
    let q = section.to_section(p)?;
    let not_strange = match is_strange_center(&section.hypersurface, &q) {
        Ok(true) => Tri::No,
        Ok(false) => Tri::Yes,
        Err(_) => Tri::Unknown,
    };
    let singular_dimension = if x.field().is_finite() {
        "not checked by star_check; use singular_probe on the section".to_string()
    } else {
        "assumed: a general hyperplane section drops the singular dimension by one".to_string()
    };
    Ok((
        section,
        StarReport {
            degree,
            irreducible: probe.verdict,
            not_strange,
            singular_dimension,
            irreducibility_evidence: probe.evidence,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_make;

    fn q() -> FieldDesc {
        FieldDesc::rationals()
    }

    fn hs(text: &str, vars: &[&str], f: &FieldDesc) -> Hypersurface {
        Hypersurface::new(parse_str(text, vars, f).unwrap()).unwrap()
    }

    const V3: [&str; 3] = ["X0", "X1", "X2"];
    const V4: [&str; 4] = ["X0", "X1", "X2", "X3"];

    #[test]
    fn dehomogenize_examples() {
        let fermat = hs("X0^4 + X1^4 + X2^4 + X3^4", &V4, &q());
        let p = ProjPoint::coordinate(4, 0, &q());
        let c = dehomogenize_at(&fermat, &p);
        assert_eq!(c.f, parse_str("1 + X1^4 + X2^4 + X3^4", &V4, &q()).unwrap());
        assert!(c.transform.is_identity());

        let x = hs("X1*X0^3 + X1^4 + X2^4", &V3, &q());
        let p = ProjPoint::from_i64s(&[-1, 1, 0], &q()).unwrap();
        let c = dehomogenize_at(&x, &p);
        // w = X1, u = X2 in chart coordinates
        assert_eq!(
            c.f,
            parse_str("3*X1 - 3*X1^2 + X1^3 + X2^4", &V3, &q()).unwrap()
        );
        assert_eq!(c.transform.apply(&ProjPoint::coordinate(3, 0, &q())), p);
    }

    #[test]
    fn multiplicity_examples() {
        let x = hs("X1*X0^3 + X1^4 + X2^4", &V3, &q());
        assert_eq!(
            multiplicity(&x, &ProjPoint::from_i64s(&[1, 1, 0], &q()).unwrap()),
            0
        );
        assert_eq!(multiplicity(&x, &ProjPoint::coordinate(3, 0, &q())), 1);
        let y = hs("X0^2*X1^2 + X2^4", &V3, &q());
        assert_eq!(multiplicity(&y, &ProjPoint::coordinate(3, 0, &q())), 2);
    }

    #[test]
    fn tangent_examples() {
        let x = hs("X1*X0^3 + X1^4 + X2^4 + X3^4", &V4, &q());
        let p = ProjPoint::coordinate(4, 0, &q());
        assert_eq!(
            tangent_space(&x, &p).unwrap(),
            Hyperplane::coordinate(4, 1, &q())
        );
        assert!(tangent_space(&x, &ProjPoint::from_i64s(&[1, 1, 0, 0], &q()).unwrap()).is_err());

        // Oracle: gradient (4, 4 zeta^3, 0, 0) at (1 : zeta : 0 : 0), zeta = zeta_8.
        let k = FieldDesc::cyclotomic(8);
        let z = k.generator();
        let f = hs("X0^4 + X1^4 + X2^4 + X3^4", &V4, &k);
        let p = ProjPoint::new(vec![k.one(), z.clone(), k.zero(), k.zero()]).unwrap();
        assert!(f.contains(&p));
        let t = tangent_space(&f, &p).unwrap();
        assert_eq!(
            t,
            Hyperplane::new(vec![
                k.from_i64(4),
                k.from_i64(4) * z.pow(3),
                k.zero(),
                k.zero()
            ])
            .unwrap()
        );
        assert!(t.contains(&p));
    }

    #[test]
    fn hessian_examples() {
        let f = hs("X0^4 + X1^4 + X2^4 + X3^4", &V4, &q());
        assert!(hessian_at(&f, &ProjPoint::coordinate(4, 0, &q())).is_zero());
        let g = hs("X0^4 + X1^4", &["X0", "X1"], &q());
        assert_eq!(
            hessian_at(&g, &ProjPoint::from_i64s(&[1, 1], &q()).unwrap()),
            q().from_i64(144)
        );
    }

    #[test]
    fn strange_center_examples() {
        let cone = hs("X0^4 + X1^4", &V4, &q()).with_irreducible(Flag::yes("test"));
        assert!(is_strange_center(&cone, &ProjPoint::coordinate(4, 2, &q())).unwrap());
        let f2 = field_make(2, 1, 0).unwrap();
        let ex1 = hs("Z*W^2 - X^2*W - Y^3", &["X", "Y", "Z", "W"], &f2)
            .with_irreducible(Flag::yes("test fixture"));
        assert!(!is_strange_center(&ex1, &ProjPoint::coordinate(4, 1, &f2)).unwrap());
        let unknown = hs("X0^4 + X1^4", &V4, &q());
        assert!(is_strange_center(&unknown, &ProjPoint::coordinate(4, 2, &q())).is_err());
    }

    #[test]
    fn section_examples() {
        let f = hs("X0^4 + X1^4 + X2^4 + X3^4", &V4, &q());
        let s = hyperplane_section(&f, &Hyperplane::coordinate(4, 3, &q())).unwrap();
        assert_eq!(
            s.hypersurface.poly(),
            &parse_str("X0^4 + X1^4 + X2^4", &V3, &q()).unwrap()
        );

        let cone = hs("X0*X1^3", &V3, &q());
        assert!(hyperplane_section(&cone, &Hyperplane::coordinate(3, 2, &q())).is_ok());
        assert!(hyperplane_section(&cone, &Hyperplane::coordinate(3, 0, &q())).is_err());
        let lin = hs("X0^4", &V3, &q());
        assert!(hyperplane_section(&lin, &Hyperplane::coordinate(3, 0, &q())).is_err());
    }

    #[test]
    fn euler_relation() {
        let f = parse_str("X1*X0^3 + X1^4 + 3*X2^4 - X0*X1*X2^2", &V3, &q()).unwrap();
        let euler = (0..3).fold(MultiPoly::zero(3, &q()), |acc, i| {
            &acc + &(&MultiPoly::var(3, i, &q()) * &f.partial(i))
        });
        assert_eq!(euler, f.scale(&q().from_i64(4)));
    }

    #[test]
    fn gauss_map_on_example_one() {
        // phi(x, y) = (x : y : x^p + y^(p+1) : 1) lies on Z W^p - X^p W - Y^(p+1) = 0
        let p = 2u64;
        let f = field_make(2, 4, 0).unwrap();
        let x = hs("Z*W^2 - X^2*W - Y^3", &["X", "Y", "Z", "W"], &f);
        for (a, b) in [(3u64, 5u64), (7, 11), (1, 0), (12, 9)] {
            let (xv, yv) = (f.element(a), f.element(b));
            let pt = ProjPoint::new(vec![
                xv.clone(),
                yv.clone(),
                xv.pow(p) + yv.pow(p + 1),
                f.one(),
            ])
            .unwrap();
            assert!(x.contains(&pt));
            let g = ProjPoint::new(gauss_map(&x, &pt)).unwrap();
            let want = ProjPoint::new(vec![f.zero(), -yv.pow(p), f.one(), -xv.pow(p)]).unwrap();
            assert_eq!(g, want);
        }
    }

    #[test]
    fn point_parsing() {
        let k = FieldDesc::cyclotomic(3);
        let p = ProjPoint::parse("2:zeta:0", &k).unwrap();
        assert_eq!(p.coords()[0], k.one());
        assert_eq!(p.to_string(), "(1:1/2*zeta:0)");
        assert!(ProjPoint::parse("0:0", &k).is_err());
    }

    #[test]
    fn multiplicity_is_transform_invariant() {
        let x = hs("X1*X0^3 + X1^4 + X2^4", &V3, &q());
        let p = ProjPoint::coordinate(3, 0, &q());
        // T fixes (1:0:0) as a column vector.
        let t = ProjTransform::new(vec![
            vec![q().from_i64(2), q().from_i64(1), q().from_i64(-1)],
            vec![q().zero(), q().from_i64(1), q().from_i64(3)],
            vec![q().zero(), q().from_i64(1), q().from_i64(1)],
        ])
        .unwrap();
        assert_eq!(t.apply(&p), p);
        let y = x.transformed(&t);
        assert_eq!(multiplicity(&y, &p), multiplicity(&x, &p));
    }
}
