//! Vertex spaces, cone decomposition `X = Y # M2`, and joins with the vertex.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::field::{FieldDesc, Scalar};
use crate::linalg::{complete_basis, mat_vec, nullspace, rank, rref, Matrix};
use crate::multipoly::{Monomial, MultiPoly};
use crate::projgeom::{polar, Hypersurface, ProjPoint, ProjTransform};

/// `F(X + t v) = F(X)` identically.
pub fn is_vertex_direction(f: &MultiPoly, v: &[Scalar]) -> bool {
    f.taylor_coeffs(v).iter().skip(1).all(|c| c.is_zero())
}

/// Basis of `{ v in span(dirs) : polar_v F = 0 }`.
fn polar_kernel(f: &MultiPoly, dirs: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let field = f.field();
    let polars: Vec<MultiPoly> = dirs.iter().map(|d| polar(f, d)).collect();
    let monos: BTreeSet<Monomial> = polars
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
        .collect();
    let a: Matrix = monos
        .iter()
        .map(|m| polars.iter().map(|p| p.coeff(m)).collect())
        .collect();
    nullspace(&a, dirs.len(), field)
        .into_iter()
        .map(|c| combine(dirs, &c, f.nvars(), field))
        .collect()
}

fn combine(dirs: &[Vec<Scalar>], c: &[Scalar], n: usize, field: &FieldDesc) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    for (d, ck) in dirs.iter().zip(c) {
        for (vi, di) in v.iter_mut().zip(d) {
            *vi += &(ck * di);
        }
    }
    v
}

/// Vertex space of `F` intersected with `span(dirs)`.
fn vertex_within(f: &MultiPoly, dirs: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    if dirs.is_empty() || f.is_zero() {
        return Ok(dirs.to_vec());
    }
    let field = f.field();
    let w1 = polar_kernel(f, dirs);
    let p = field.characteristic();
    if w1.is_empty() || p == 0 {
        return Ok(w1);
    }
    // Coordinates with W1 as the last block: F' = F(T Y) has every exponent of
    // the last block divisible by p.
    let n = f.nvars();
    let k = w1.len();
    let mut cols = complete_basis(&w1, n, field);
    cols.extend(w1.iter().cloned());
    let t: Matrix = (0..n)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let fp = f.linear_substitute(&t)?;
    let block: Vec<usize> = (n - k..n).collect();
    if block.iter().all(|&j| fp.degree_in(j) == 0) {
        return Ok(w1);
    }
    // G(Y_<, Z) with Z_j = Y_j^p; v in the block is a vertex of F' iff v^(p) is one of G.
    let g = MultiPoly::from_terms(
        n,
        field,
        fp.terms().map(|(m, c)| {
            let mut e = m.0.clone();
            for &j in &block {
                debug_assert_eq!(e[j] as u64 % p, 0);
                e[j] /= p as u32;
            }
            (Monomial(e), c.clone())
        }),
    );
    let unit_block: Vec<Vec<Scalar>> = block
        .iter()
        .map(|&j| {
            let mut e = vec![field.zero(); n];
            e[j] = field.one();
            e
        })
        .collect();
    let sub = vertex_within(&g, &unit_block)?;
    sub.iter()
        .map(|u| {
            let root = u
                .iter()
                .map(|x| x.pth_root())
                .collect::<Result<Vec<Scalar>>>()?;
            Ok(mat_vec(&t, &root))
        })
        .collect()
}

/// Basis (in reduced row echelon form) of the maximal vertex space of `X`.
pub fn vertex_space(x: &Hypersurface) -> Result<Vec<ProjPoint>> {
    let f = x.poly();
    let field = x.field();
    let n = f.nvars();
    let found = vertex_within(f, &crate::linalg::identity(n, field))?;
    if found.is_empty() {
        return Ok(Vec::new());
    }
    let (m, pivots) = rref(&found);
    let basis: Vec<Vec<Scalar>> = m.into_iter().take(pivots.len()).collect();
    for v in &basis {
        if !is_vertex_direction(f, v) {
            return Err(Error::Inconsistency(format!(
                "vertex candidate {v:?} fails the translation check"
            )));
        }
    }
    basis.into_iter().map(ProjPoint::new).collect()
}

/// `X = Y # M2`: `M2` the vertex space, `M1` a complement spanned by standard basis vectors.
#[derive(Clone, Debug)]
pub struct ConeDecomposition {
    pub m2_basis: Vec<ProjPoint>,
    /// Columns: the `M1` basis, then the `M2` basis. `F(T Y)` involves only `Y_0..Y_a`.
    pub transform: ProjTransform,
    pub m1_basis: Vec<ProjPoint>,
    /// `Y` in the `a+1` coordinates of `M1`.
    pub base: Hypersurface,
}

impl ConeDecomposition {
    pub fn a(&self) -> usize {
        self.m1_basis.len() - 1
    }

    /// Projection along `M2` to `M1`, in `Y`'s coordinates.
    pub fn project(&self, p: &ProjPoint) -> Result<ProjPoint> {
        let y = mat_vec(self.transform.inverse().matrix(), p.coords());
        let head: Vec<Scalar> = y[..self.m1_basis.len()].to_vec();
        if head.iter().all(|c| c.is_zero()) {
            return precondition(format!("{p} lies in the vertex space"));
        }
        ProjPoint::new(head)
    }

    /// Point of `M1` in ambient coordinates from `Y`'s coordinates.
    pub fn lift(&self, q: &ProjPoint) -> ProjPoint {
        let field = q.field();
        let mut y = q.coords().to_vec();
        y.resize(self.transform.dim(), field.zero());
        ProjPoint::new(mat_vec(self.transform.matrix(), &y)).unwrap()
    }

    /// `F` recomputed from `Y` and the recorded transform.
    pub fn rejoin(&self) -> MultiPoly {
        let n = self.transform.dim();
        let map: Vec<usize> = (0..self.m1_basis.len()).collect();
        let g = self.base.poly().remap_vars(n, &map);
        self.transform.inverse().pull_back(&g)
    }
}

pub fn cone_decompose(x: &Hypersurface) -> Result<Option<ConeDecomposition>> {
    let m2 = vertex_space(x)?;
    if m2.is_empty() {
        return Ok(None);
    }
    let field = x.field();
    let n = x.nvars();
    let m2_rows: Vec<Vec<Scalar>> = m2.iter().map(|p| p.coords().to_vec()).collect();
    let m1_rows = complete_basis(&m2_rows, n, field);
    let cols: Vec<&Vec<Scalar>> = m1_rows.iter().chain(&m2_rows).collect();
    let t = ProjTransform::new(
        (0..n)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect(),
    )?;
    let fp = t.pull_back(x.poly());
    let a1 = m1_rows.len();
    if (a1..n).any(|j| fp.degree_in(j) > 0) {
        return Err(Error::Inconsistency(
            "transformed form involves vertex coordinates".into(),
        ));
    }
    let keep: Vec<usize> = (0..n).map(|i| i.min(a1.saturating_sub(1))).collect();
    let y = fp.remap_vars(a1, &keep);
    let base = Hypersurface::new(y)?.with_irreducible(x.irreducible.clone());
    let dec = ConeDecomposition {
        m2_basis: m2,
        transform: t,
        m1_basis: m1_rows
            .into_iter()
            .map(ProjPoint::new)
            .collect::<Result<_>>()?,
        base,
    };
    if &dec.rejoin() != x.poly() {
        return Err(Error::Inconsistency(
            "cone decomposition does not re-join to F".into(),
        ));
    }
    Ok(Some(dec))
}

/// The linear join `S # M2` with `M2` removed.
#[derive(Clone, Debug)]
pub struct JoinSet {
    pub base: Vec<ProjPoint>,
    pub m2: Vec<ProjPoint>,
}

impl JoinSet {
    pub fn contains(&self, p: &ProjPoint) -> bool {
        let m2: Matrix = self.m2.iter().map(|v| v.coords().to_vec()).collect();
        let with_p = |mut rows: Matrix| {
            let r = rank(&rows);
            rows.push(p.coords().to_vec());
            rank(&rows) == r
        };
        if with_p(m2.clone()) {
            return false;
        }
        self.base.iter().any(|s| {
            let mut rows = m2.clone();
            rows.push(s.coords().to_vec());
            with_p(rows)
        })
    }

    /// Every point over a finite field: `s + sum mu_i m_i` for all `mu`.
    pub fn enumerate(&self) -> Result<Vec<ProjPoint>> {
        let Some(first) = self.base.first() else {
            return Ok(Vec::new());
        };
        let field = first.field().clone();
        let q = field
            .order()
            .ok_or_else(|| Error::CharacteristicZero(field.name()))?;
        let k = self.m2.len() as u32;
        let total = q.checked_pow(k).ok_or(Error::BudgetExceeded {
            needed: u128::MAX,
            budget: crate::projgeom::enumeration_budget(),
        })?;
        let mut out = BTreeMap::new();
        for s in &self.base {
            for mut idx in 0..total {
                let mut v = s.coords().to_vec();
                for m in &self.m2 {
                    let mu = field.element(idx % q);
                    idx /= q;
                    for (vi, mi) in v.iter_mut().zip(m.coords()) {
                        *vi += &(&mu * mi);
                    }
                }
                let p = ProjPoint::new(v)?;
                out.insert(p.clone(), ());
            }
        }
        Ok(out.into_keys().collect())
    }
}

pub fn join_point_sets(s: &[ProjPoint], m2: &[ProjPoint]) -> Result<JoinSet> {
    let mut rows: Matrix = m2.iter().map(|v| v.coords().to_vec()).collect();
    let r = rank(&rows);
    for p in s {
        rows.push(p.coords().to_vec());
        if rank(&rows) == r {
            return precondition(format!("{p} lies in M2"));
        }
        rows.pop();
    }
    Ok(JoinSet {
        base: s.to_vec(),
        m2: m2.to_vec(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub point: ProjPoint,
    pub projected: ProjPoint,
    pub galois_on_cone: bool,
    pub galois_on_base: bool,
    pub agree: bool,
}

/// Runs `test` on `(X, P)` and on `(Y, P')` with `P'` the projection of `P` to `M1`.
pub fn transfer_check<F>(
    x: &Hypersurface,
    dec: &ConeDecomposition,
    p: &ProjPoint,
    test: F,
) -> Result<TransferReport>
where
    F: Fn(&Hypersurface, &ProjPoint) -> Result<bool>,
{
    let projected = dec.project(p)?;
    let on_x = test(x, p)?;
    let on_y = test(&dec.base, &projected)?;
    Ok(TransferReport {
        point: p.clone(),
        projected,
        galois_on_cone: on_x,
        galois_on_base: on_y,
        agree: on_x == on_y,
    })
}
