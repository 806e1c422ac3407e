//! Galois points on a line `P(t) = A + t B`, and independence of Galois point sets.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{check_condition_1m, wild_reason, GaloisVerdict, GroupDescriptor, Verdict};
use crate::error::{precondition, Error, Result};
use crate::field::primes::binomial_mod;
use crate::field::{roots_in_field, squarefree_part, FieldDesc, Scalar, UniPoly};
use crate::linalg::{complete_basis, inverse, mat_mul, nullspace, rank, Matrix};
use crate::multipoly::MultiPoly;
use crate::projgeom::{multiplicity, Hypersurface, ProjPoint, ProjTransform};

#[derive(Clone, Debug, Serialize)]
pub struct LinePoint {
    /// Parameter value, or `"inf"` for `B`.
    pub parameter: String,
    pub point: ProjPoint,
    pub verdict: Verdict,
    pub group: Option<GroupDescriptor>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LineScan {
    pub a: ProjPoint,
    pub b: ProjPoint,
    /// Coefficient polynomials in `t` whose common roots are the outer Galois parameters.
    pub outer_system: Vec<String>,
    /// Same for inner points; the first entry is `F(A + t B)`.
    pub inner_system: Vec<String>,
    pub outer_gcd: String,
    pub inner_gcd: String,
    /// `"outer"` or `"inner"` when the corresponding system vanishes identically.
    pub identically_satisfied: Option<String>,
    pub points: Vec<LinePoint>,
    /// Number of Galois points on the line over the algebraic closure, when finite.
    pub closure_count: Option<usize>,
    pub outer_count: Option<usize>,
    pub inner_count: Option<usize>,
    pub notes: Vec<String>,
}

/// `f_i(t, y)`: parts of `F(A + tB + y_1 B + sum_{i>=2} y_i C_i)` of degree `i` in `y`.
/// Variable 0 is `t`, variables `1..` are `y`.
fn parametrized_parts(x: &Hypersurface, a: &[Scalar], b: &[Scalar]) -> Vec<MultiPoly> {
    let field = x.field();
    let n = x.nvars();
    let comp = complete_basis(&[a.to_vec(), b.to_vec()], n, field);
    let subs: Vec<MultiPoly> = (0..n)
        .map(|j| {
            let mut s = MultiPoly::constant(n, a[j].clone());
            s = &s + &MultiPoly::var(n, 0, field).scale(&b[j]);
            s = &s + &MultiPoly::var(n, 1, field).scale(&b[j]);
            for (i, c) in comp.iter().enumerate() {
                s = &s + &MultiPoly::var(n, i + 2, field).scale(&c[j]);
            }
            s
        })
        .collect();
    let g = x.poly().compose(&subs);
    let d = x.degree() as usize;
    let mut parts = vec![MultiPoly::zero(n, field); d + 1];
    for (m, c) in g.terms() {
        let ydeg: u32 = m.0[1..].iter().sum();
        parts[ydeg as usize] = &parts[ydeg as usize] + &MultiPoly::monomial(c.clone(), m.0.clone());
    }
    parts
}

/// Coefficients (in `t`) of every `y`-monomial of `e`.
fn t_coefficients(e: &MultiPoly) -> Vec<UniPoly> {
    let field = e.field();
    let mut by_y: BTreeMap<Vec<u32>, Vec<Scalar>> = BTreeMap::new();
    for (m, c) in e.terms() {
        let deg_t = m.0[0] as usize;
        let entry = by_y.entry(m.0[1..].to_vec()).or_default();
        if entry.len() <= deg_t {
            entry.resize(deg_t + 1, field.zero());
        }
        entry[deg_t] = c.clone();
    }
    by_y.into_values().map(|v| UniPoly::new(v, field)).collect()
}

fn t_only(e: &MultiPoly) -> UniPoly {
    let field = e.field();
    let mut v = Vec::new();
    for (m, c) in e.terms() {
        let k = m.0[0] as usize;
        if v.len() <= k {
            v.resize(k + 1, field.zero());
        }
        v[k] = c.clone();
    }
    UniPoly::new(v, field)
}

fn gcd_all(polys: &[UniPoly], field: &FieldDesc) -> UniPoly {
    polys.iter().fold(UniPoly::zero(field), |g, p| {
        if g.is_zero() {
            p.monic()
        } else {
            g.gcd(p)
        }
    })
}

/// Cleared identities `f_{m+i} k^i f_m^(i-1) = C(k, i) f_{m+1}^i`, `2 <= i <= k-1`.
fn cleared_system(parts: &[MultiPoly], m: usize, k: u64, p: u64) -> Vec<UniPoly> {
    let field = parts[0].field();
    let kk = field.from_u64(k);
    let mut out = Vec::new();
    for i in 2..k as usize {
        let lhs = &parts[m + i].scale(&kk.pow(i as u64)) * &parts[m].pow(i as u32 - 1);
        let rhs = parts[m + 1]
            .pow(i as u32)
            .scale(&field.from_u64(binomial_mod(k, i as u64, p)));
        out.extend(
            t_coefficients(&(&lhs - &rhs))
                .into_iter()
                .filter(|u| !u.is_zero()),
        );
    }
    out
}

/// Removes from the squarefree part of `g` the roots shared with `bad`.
fn clean_roots(g: &UniPoly, bad: &UniPoly) -> UniPoly {
    let s = squarefree_part(g);
    if bad.is_zero() {
        return UniPoly::constant(g.field().one());
    }
    let common = s.gcd(bad);
    s.exact_div(&common).unwrap_or(s)
}

fn line_point(parameter: String, v: GaloisVerdict) -> LinePoint {
    LinePoint {
        parameter,
        point: v.point,
        verdict: v.verdict,
        group: v.group,
    }
}

fn point_at(a: &[Scalar], b: &[Scalar], t: &Scalar) -> Result<ProjPoint> {
    ProjPoint::new(a.iter().zip(b).map(|(x, y)| x + &(y * t)).collect())
}

fn verified(x: &Hypersurface, p: &ProjPoint, why: &str) -> Result<GaloisVerdict> {
    let v = check_condition_1m(x, p)?;
    if !v.is_galois() {
        return Err(Error::Inconsistency(format!(
            "{p} solves the {why} line system but fails the criterion ({})",
            v.witness.clone().unwrap_or_default()
        )));
    }
    Ok(v)
}

/// Galois points of `X` on the line through `A` and `B`.
pub fn find_galois_on_line(x: &Hypersurface, a: &ProjPoint, b: &ProjPoint) -> Result<LineScan> {
    if a == b {
        return precondition("the two points defining the line coincide");
    }
    let field = x.field().clone();
    let char_p = field.characteristic();
    let d = x.degree() as u64;
    let (av, bv) = (a.coords(), b.coords());
    let parts = parametrized_parts(x, av, bv);
    let f0 = t_only(&parts[0]);
    let mut notes = Vec::new();

    let outer_system = match wild_reason(char_p, d as u32) {
        None => cleared_system(&parts, 0, d, char_p),
        Some(r) => {
            notes.push(format!("outer criterion inapplicable: {r}"));
            Vec::new()
        }
    };
    let mut inner_system = vec![f0.clone()];
    match wild_reason(char_p, d as u32 - 1) {
        None => inner_system.extend(cleared_system(&parts, 1, d - 1, char_p)),
        Some(r) => notes.push(format!("inner criterion inapplicable: {r}")),
    }
    let inner_system: Vec<UniPoly> = inner_system.into_iter().filter(|u| !u.is_zero()).collect();
    let outer_applicable = wild_reason(char_p, d as u32).is_none();
    let inner_applicable = wild_reason(char_p, d as u32 - 1).is_none();

    let outer_gcd = gcd_all(&outer_system, &field);
    let inner_gcd = gcd_all(&inner_system, &field);
    let singular_t = gcd_all(&t_coefficients(&parts[1]), &field);

    let outer_identically = outer_applicable && !f0.is_zero() && outer_gcd.is_zero();
    let inner_identically = inner_applicable && inner_gcd.is_zero() && !singular_t.is_zero();
    let identically = match (outer_identically, inner_identically) {
        (true, true) => Some("outer and inner".to_string()),
        (true, false) => Some("outer".to_string()),
        (false, true) => Some("inner".to_string()),
        _ => None,
    };
    if identically.is_some() {
        notes.push("criterion identities hold along the whole line (a cone is expected)".into());
    }

    let mut finite: Vec<(Scalar, &str)> = Vec::new();
    let mut outer_count = (!outer_identically).then_some(0usize);
    let mut inner_count = (!inner_identically).then_some(0usize);
    if outer_applicable && !f0.is_zero() && !outer_identically {
        let g = clean_roots(&outer_gcd, &f0);
        outer_count = Some(g.degree().unwrap_or(0));
        let mut r = roots_in_field(&g);
        r.dedup();
        finite.extend(r.into_iter().map(|t| (t, "outer")));
    }
    if inner_applicable && !inner_identically {
        let g = clean_roots(&inner_gcd, &singular_t);
        inner_count = Some(g.degree().unwrap_or(0));
        let mut r = roots_in_field(&g);
        r.dedup();
        finite.extend(r.into_iter().map(|t| (t, "inner")));
    }
    if !outer_applicable || !inner_applicable {
        notes.push("counts cover only the applicable criteria".into());
    }
    finite.sort_by(|x, y| x.0.cmp(&y.0));
    let mut points = Vec::new();
    for (t, why) in finite {
        let p = point_at(av, bv, &t)?;
        points.push(line_point(t.to_string(), verified(x, &p, why)?));
    }
    if multiplicity(x, b) <= 1 {
        let v = check_condition_1m(x, b)?;
        if v.is_galois() {
            let slot = if v.m == 0 {
                &mut outer_count
            } else {
                &mut inner_count
            };
            if let Some(c) = slot.as_mut() {
                *c += 1;
            }
            points.push(line_point("inf".into(), v));
        }
    }
    let closure = match (outer_count, inner_count) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    if closure.is_some_and(|c| c > points.len()) {
        notes.push("some Galois points on this line are defined only over an extension of the working field".into());
    }

    Ok(LineScan {
        a: a.clone(),
        b: b.clone(),
        outer_system: outer_system.iter().map(|u| u.to_string()).collect(),
        inner_system: inner_system.iter().map(|u| u.to_string()).collect(),
        outer_gcd: outer_gcd.to_string(),
        inner_gcd: inner_gcd.to_string(),
        identically_satisfied: identically,
        points,
        closure_count: closure,
        outer_count,
        inner_count,
        notes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub independent: bool,
    /// `(i, j, Galois points on the line P_i P_j over the closure)`.
    pub pairs: Vec<(usize, usize, Option<usize>)>,
    /// Columns: the points, then a basis of the common fixed locus.
    pub adapted: Option<ProjTransform>,
    pub generators_diagonal: Option<bool>,
    pub notes: Vec<String>,
}

/// Pairwise line counts for a list of Galois points: Galois points of the same
/// kind (inner or outer) as the pair, or of either kind for a mixed pair.
pub(crate) fn pair_counts(
    x: &Hypersurface,
    points: &[ProjPoint],
) -> Result<Vec<(usize, usize, Option<usize>)>> {
    let kinds: Vec<bool> = points.iter().map(|p| x.contains(p)).collect();
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let scan = find_galois_on_line(x, &points[i], &points[j])?;
            let c = match (kinds[i], kinds[j]) {
                (true, true) => scan.inner_count,
                (false, false) => scan.outer_count,
                _ => scan.closure_count,
            };
            out.push((i, j, c));
        }
    }
    Ok(out)
}

pub fn independent_check(x: &Hypersurface, points: &[ProjPoint]) -> Result<IndependenceReport> {
    let mut verdicts = Vec::new();
    for p in points {
        let v = check_condition_1m(x, p)?;
        if !v.is_galois() {
            return precondition(format!("{p} is not a verified Galois point"));
        }
        verdicts.push(v);
    }
    let pairs = pair_counts(x, points)?;
    let independent = pairs.iter().all(|&(_, _, c)| c == Some(2));
    let mut report = IndependenceReport {
        independent,
        pairs,
        adapted: None,
        generators_diagonal: None,
        notes: Vec::new(),
    };
    if !independent {
        return Ok(report);
    }
    let n = x.nvars();
    if points.len() > n {
        return Err(Error::Inconsistency(format!(
            "{} independent Galois points exceed the bound n + 2 = {n}",
            points.len()
        )));
    }
    let field = x.field();
    let forms: Matrix = verdicts
        .iter()
        .map(|v| v.fixed_hyperplane.as_ref().unwrap().form().to_vec())
        .collect();
    let mut cols: Matrix = points.iter().map(|p| p.coords().to_vec()).collect();
    for v in nullspace(&forms, n, field) {
        let mut trial = cols.clone();
        trial.push(v.clone());
        if rank(&trial) > rank(&cols) {
            cols = trial;
        }
    }
    if cols.len() < n {
        report
            .notes
            .push("common fixed locus does not complete the points to a basis".into());
        let extra = complete_basis(&cols, n, field);
        cols.extend(extra);
    }
    let t: Matrix = (0..n)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let tinv = inverse(&t)?;
    let mut diagonal = true;
    let mut all_generators = true;
    for (i, v) in verdicts.iter().enumerate() {
        let Some(sigma) = &v.generator else {
            all_generators = false;
            continue;
        };
        let m = mat_mul(&mat_mul(&tinv, sigma.matrix()), &t);
        diagonal &= diagonal_shape(&m, i);
    }
    report.generators_diagonal = all_generators.then_some(diagonal);
    if !all_generators {
        report
            .notes
            .push("some generators need roots of unity outside the working field".into());
    }
    report.adapted = Some(ProjTransform::new(t)?);
    Ok(report)
}

/// `m` is a scalar multiple of `diag[z, ..., z, 1, z, ..., z]` with `1` at position `i`, `z != 1`.
fn diagonal_shape(m: &Matrix, i: usize) -> bool {
    let n = m.len();
    for r in 0..n {
        for c in 0..n {
            if r != c && !m[r][c].is_zero() {
                return false;
            }
        }
    }
    let Ok(inv) = m[i][i].inv() else {
        return false;
    };
    let z: Vec<Scalar> = (0..n)
        .filter(|&j| j != i)
        .map(|j| &m[j][j] * &inv)
        .collect();
    z.windows(2).all(|w| w[0] == w[1]) && !z[0].is_one()
}
