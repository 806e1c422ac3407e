//! The invariants `r`, `mu`, `t` of a Galois point set and the case bounds on its size.

use serde::Serialize;

use super::check_condition_1m;
use super::lines::pair_counts;
use crate::error::{precondition, Result};
use crate::linalg::rank;
use crate::projgeom::{tangent_space, Hypersurface, ProjPoint};

/// `m(n, s) = floor((n + s + 1) / 2)`.
pub fn m_of(n: i64, s: i64) -> i64 {
    (n + s + 1).div_euclid(2)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsRecord {
    pub n: i64,
    pub d: u32,
    pub s: i64,
    pub m: i64,
    pub inner_count: usize,
    pub outer_count: usize,
    /// Size of a largest independent subset of the inner points, minus one.
    pub r: Option<i64>,
    /// Number of lines carrying four inner points, minus one.
    pub mu: i64,
    /// `n - dim` of the intersection of the tangent spaces at the points of `independent`.
    pub t: Option<i64>,
    /// A largest independent subset of the inner points.
    pub independent: Vec<ProjPoint>,
    pub inner_case: Option<String>,
    pub inner_bound: Option<i64>,
    pub inner_ok: Option<bool>,
    /// `4 (floor(n/2) + 1)` for quartics.
    pub quartic_bound: Option<i64>,
    pub outer_case: Option<String>,
    pub outer_bound: Option<i64>,
    pub outer_ok: Option<bool>,
}

/// The applicable inner case and its bound.
pub fn inner_case(n: i64, d: u32, s: i64) -> (String, i64) {
    let m = m_of(n, s);
    if d >= 5 {
        return ("II".into(), m + 1);
    }
    match s {
        -1 => ("I-0".into(), 4 * (m + 1)),
        _ if (n + s) % 2 == 1 => ("I-1".into(), 4 * (m - s - 1) + (s + 2)),
        0 => ("I-2".into(), 4 * m + 1),
        1 => ("I-3".into(), 4 * (m - 1)),
        _ => ("I-4".into(), 4 * (m - s - 1) + (s + 2)),
    }
}

pub fn outer_case(n: i64, s: i64) -> (String, i64) {
    if s == -1 {
        ("T2-1".into(), n + 2)
    } else {
        ("T2-2".into(), n - s)
    }
}

/// A largest clique in the graph on `0..k` with the given edges (first found in index order).
fn max_clique(k: usize, edge: &dyn Fn(usize, usize) -> bool) -> Vec<usize> {
    fn grow(
        cur: &mut Vec<usize>,
        cand: &[usize],
        edge: &dyn Fn(usize, usize) -> bool,
        best: &mut Vec<usize>,
    ) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        for (idx, &v) in cand.iter().enumerate() {
            if cur.len() + cand.len() - idx <= best.len() {
                return;
            }
            let next: Vec<usize> = cand[idx + 1..]
                .iter()
                .copied()
                .filter(|&w| edge(v, w))
                .collect();
            cur.push(v);
            grow(cur, &next, edge, best);
            cur.pop();
        }
    }
    let mut best = Vec::new();
    let all: Vec<usize> = (0..k).collect();
    grow(&mut Vec::new(), &all, edge, &mut best);
    best
}

/// Number of lines containing at least four of the points.
fn four_point_lines(points: &[ProjPoint]) -> usize {
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if lines.iter().any(|l| l.contains(&i) && l.contains(&j)) {
                continue;
            }
            let on: Vec<usize> = (0..points.len())
                .filter(|&k| points[k].on_line(&points[i], &points[j]))
                .collect();
            lines.push(on);
        }
    }
    lines.iter().filter(|l| l.len() >= 4).count()
}

/// Bookkeeping for a verified list of Galois points, given the singular dimension `s`.
pub fn counts_and_bounds(
    x: &Hypersurface,
    galois_set: &[ProjPoint],
    s: i64,
) -> Result<BoundsRecord> {
    let n = x.dim() as i64;
    let d = x.degree();
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    for p in galois_set {
        let v = check_condition_1m(x, p)?;
        if !v.is_galois() {
            return precondition(format!("{p} is not a verified Galois point"));
        }
        if v.m == 1 {
            inner.push(p.clone());
        } else {
            outer.push(p.clone());
        }
    }
    let m = m_of(n, s);
    let independent: Vec<ProjPoint> = if inner.is_empty() {
        Vec::new()
    } else {
        let pairs = pair_counts(x, &inner)?;
        let edge = |i: usize, j: usize| {
            let (a, b) = (i.min(j), i.max(j));
            pairs
                .iter()
                .any(|&(p, q, c)| p == a && q == b && c == Some(2))
        };
        max_clique(inner.len(), &edge)
            .into_iter()
            .map(|i| inner[i].clone())
            .collect()
    };
    let r = (!independent.is_empty()).then(|| independent.len() as i64 - 1);
    let mu = four_point_lines(&inner) as i64 - 1;
    let t = if independent.is_empty() {
        None
    } else {
        let forms = independent
            .iter()
            .map(|p| Ok(tangent_space(x, p)?.form().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Some(rank(&forms) as i64 - 1)
    };
    let (ic, ib) = inner_case(n, d, s);
    let (oc, ob) = outer_case(n, s);
    Ok(BoundsRecord {
        n,
        d,
        s,
        m,
        inner_count: inner.len(),
        outer_count: outer.len(),
        r,
        mu,
        t,
        independent,
        inner_ok: Some(inner.len() as i64 <= ib),
        inner_case: Some(ic),
        inner_bound: Some(ib),
        quartic_bound: (d == 4).then_some(4 * (n / 2 + 1)),
        outer_ok: Some(outer.len() as i64 <= ob),
        outer_case: Some(oc),
        outer_bound: Some(ob),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_table() {
        assert_eq!(m_of(2, -1), 1);
        assert_eq!(inner_case(2, 4, -1), ("I-0".into(), 8));
        assert_eq!(inner_case(2, 5, -1), ("II".into(), 2));
        assert_eq!(outer_case(2, -1), ("T2-1".into(), 4));
        assert_eq!(inner_case(3, 4, 0), ("I-1".into(), 4 * (2 - 0 - 1) + 2));
        assert_eq!(inner_case(4, 4, 0), ("I-2".into(), 4 * 2 + 1));
        assert_eq!(inner_case(5, 4, 1), ("I-3".into(), 4 * (3 - 1)));
        assert_eq!(inner_case(6, 4, 2), ("I-4".into(), 4 * (4 - 2 - 1) + 4));
        assert_eq!(outer_case(4, 1), ("T2-2".into(), 3));
    }

    #[test]
    fn clique_search() {
        let edge = |i: usize, j: usize| (i + j) % 2 == 1 || i.abs_diff(j) == 2;
        assert_eq!(max_clique(5, &edge).len(), 4);
        assert!(max_clique(0, &|_, _| true).is_empty());
        assert_eq!(max_clique(4, &|_, _| true), vec![0, 1, 2, 3]);
    }
}
