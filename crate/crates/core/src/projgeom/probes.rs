//! Randomized irreducibility and singular-locus probes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::enumerate::{enumeration_budget, point_count, ProjectiveSpace};
use super::{Hypersurface, ProjPoint, Tri};
use crate::error::{Error, Result};
use crate::fastpoly::{merged_max_exp, PackedPoly};
use crate::field::{ddf, PrimeReduction, Scalar, UniPoly};
use crate::multipoly::MultiPoly;

/// `F(A + tB)` as a polynomial in `t`.
pub fn restrict_to_line(f: &MultiPoly, a: &[Scalar], b: &[Scalar]) -> UniPoly {
    let field = f.field();
    let lines: Vec<UniPoly> = a
        .iter()
        .zip(b)
        .map(|(x, y)| UniPoly::new(vec![x.clone(), y.clone()], field))
        .collect();
    let maxe: Vec<u32> = (0..f.nvars()).map(|i| f.degree_in(i)).collect();
    let pows: Vec<Vec<UniPoly>> = lines
        .iter()
        .zip(&maxe)
        .map(|(l, &m)| {
            let mut row = vec![UniPoly::constant(field.one())];
            for _ in 0..m {
                let next = row.last().unwrap() * l;
                row.push(next);
            }
            row
        })
        .collect();
    let mut acc = UniPoly::zero(field);
    for (m, c) in f.terms() {
        let mut t = UniPoly::constant(c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = &t * &pows[i][e as usize];
            }
        }
        acc = &acc + &t;
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct IrreducibilityReport {
    pub verdict: Tri,
    pub squarefree: Tri,
    pub evidence: String,
}

/// Bitmask of the proper factor degrees `1..d-1` realizable by products of
/// irreducible factors with the given degree multiset.
fn subset_sums(degrees: &[usize], d: usize) -> Vec<bool> {
    let mut reach = vec![false; d + 1];
    reach[0] = true;
    for &k in degrees {
        for s in (k..=d).rev() {
            if reach[s - k] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// Outcome of restricting to one random line.
enum LineOutcome {
    /// Degree dropped (the line meets the hypersurface at infinity in a bad way).
    Degenerate,
    NotSquarefree,
    Split(Vec<usize>),
}

fn restrict_random_line(f: &MultiPoly, d: usize, rng: &mut ChaCha8Rng) -> LineOutcome {
    let field = f.field();
    let a: Vec<Scalar> = (0..f.nvars())
        .map(|_| field.random_element(rng, 0))
        .collect();
    let b: Vec<Scalar> = (0..f.nvars())
        .map(|_| field.random_element(rng, 0))
        .collect();
    let g = restrict_to_line(f, &a, &b);
    if g.degree() != Some(d) {
        return LineOutcome::Degenerate;
    }
    let dg = g.derivative();
    if dg.is_zero() || g.gcd(&dg).degree() != Some(0) {
        return LineOutcome::NotSquarefree;
    }
    let mut degrees = Vec::new();
    for (k, prod) in ddf(&g.monic()).expect("squarefree restriction") {
        let count = prod.degree().unwrap() / k;
        degrees.extend(std::iter::repeat_n(k, count));
    }
    LineOutcome::Split(degrees)
}

/// State accumulated over all lines: which proper factor degrees remain possible.
struct Tally {
    d: usize,
    possible: Vec<bool>,
    squarefree_witness: bool,
    full_degree_lines: usize,
    patterns: Vec<Vec<usize>>,
}

impl Tally {
    fn new(d: usize) -> Self {
        Tally {
            d,
            possible: vec![true; d + 1],
            squarefree_witness: false,
            full_degree_lines: 0,
            patterns: Vec::new(),
        }
    }

    fn absorb(&mut self, outcome: LineOutcome) {
        match outcome {
            LineOutcome::Degenerate => {}
            LineOutcome::NotSquarefree => self.full_degree_lines += 1,
            LineOutcome::Split(degs) => {
                self.full_degree_lines += 1;
                self.squarefree_witness = true;
                let reach = subset_sums(&degs, self.d);
                for k in 1..self.d {
                    self.possible[k] &= reach[k];
                }
                if !self.patterns.contains(&degs) {
                    self.patterns.push(degs);
                }
            }
        }
    }

    fn certified(&self) -> bool {
        self.squarefree_witness && (1..self.d).all(|k| !self.possible[k])
    }
}

fn probe_over(f: &MultiPoly, lines: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
    for _ in 0..lines {
        tally.absorb(restrict_random_line(f, tally.d, rng));
        if tally.certified() {
            return;
        }
    }
}

/// Maps `F` into the fields where random lines are drawn: the ground field and
/// two extensions for finite fields, degree-one reductions for cyclotomic fields.
fn probe_fields(f: &MultiPoly) -> Vec<(String, MultiPoly)> {
    let field = f.field();
    if field.is_finite() {
        let q = field.order().unwrap() as f64;
        let mut out = vec![(field.name(), f.clone())];
        for m in [2u32, 3] {
            if q.powi(m as i32) > 1e15 {
                break;
            }
            if let Ok(e) = field.finite_extension(m) {
                out.push((e.target.name(), f.map_coeffs(&e.target, |c| e.map(c))));
            }
        }
        return out;
    }
    let (_, lead) = f.leading_term().unwrap();
    let monic = f.scale(&lead.inv().unwrap());
    let mut out = Vec::new();
    for ell in PrimeReduction::split_primes(field, 1000, 12) {
        let r = PrimeReduction::new(field, ell).unwrap();
        let mut ok = true;
        let mut terms = Vec::new();
        for (m, c) in monic.terms() {
            match r.reduce(c) {
                Some(v) => terms.push((m.clone(), v)),
                None => ok = false,
            }
        }
        if !ok {
            continue;
        }
        let reduced = MultiPoly::from_terms(f.nvars(), &r.target, terms);
        if reduced.total_degree() == f.total_degree() {
            out.push((
                format!("{} (reduction mod {ell})", r.target.name()),
                reduced,
            ));
        }
        if out.len() == 3 {
            break;
        }
    }
    out
}

/// Certifies irreducibility over the ground field from factor-degree patterns
/// of restrictions to random lines.
///
/// A factorization `F = G H` with `deg G = k` forces every full-degree
/// restriction to have a factor of degree `k`; once no `k` in `1..d` survives
/// all observed patterns, `F` is irreducible. Over `Q(zeta_N)` the test runs on
/// reductions at primes of good reduction, which preserve any factorization.
pub fn irreducibility_probe(x: &Hypersurface, trials: usize, seed: u64) -> IrreducibilityReport {
    let d = x.degree() as usize;
    if d == 1 {
        return IrreducibilityReport {
            verdict: Tri::Yes,
            squarefree: Tri::Yes,
            evidence: "linear form".into(),
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::new(d);
    let mut where_ = String::new();
    for (name, f) in probe_fields(x.poly()) {
        probe_over(&f, trials.max(1), &mut rng, &mut tally);
        if tally.certified() {
            where_ = name;
            break;
        }
    }
    let squarefree = if tally.squarefree_witness {
        Tri::Yes
    } else {
        Tri::Unknown
    };
    if tally.certified() {
        return IrreducibilityReport {
            verdict: Tri::Yes,
            squarefree,
            evidence: format!(
                "line restrictions over {where_} exclude every factor degree 1..{}",
                d - 1
            ),
        };
    }
    let evidence = if tally.full_degree_lines == 0 {
        "no full-degree line restriction found".to_string()
    } else if !tally.squarefree_witness {
        "unknown (not squarefree suspected: every line restriction has a repeated factor)"
            .to_string()
    } else {
        let ks: Vec<String> = (1..d)
            .filter(|&k| tally.possible[k])
            .map(|k| k.to_string())
            .collect();
        format!(
            "unknown (reducibility suspected: witnessed split specialization pattern; factor degrees {{{}}} never excluded)",
            ks.join(", ")
        )
    };
    IrreducibilityReport {
        verdict: Tri::Unknown,
        squarefree,
        evidence,
    }
}

/// Squarefreeness only; returns a witness description when certified.
pub fn squarefree_probe(x: &Hypersurface, trials: usize, seed: u64) -> (Tri, String) {
    let r = irreducibility_probe(x, trials, seed);
    if r.verdict == Tri::Yes || r.squarefree == Tri::Yes {
        (
            Tri::Yes,
            "a full-degree line restriction is squarefree".into(),
        )
    } else {
        (Tri::Unknown, r.evidence)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SingProbeReport {
    /// Singular points over `GF(q^m)` for `m = 1..max_ext`.
    pub counts: Vec<u64>,
    pub field_sizes: Vec<u64>,
    /// Estimated dimension of the singular locus (`-1` when empty).
    pub estimate: i64,
    pub budget: u128,
    /// Singular points over the ground field, listed when there are at most 32.
    pub support: Option<Vec<ProjPoint>>,
}

const SUPPORT_LIMIT: usize = 32;

fn singular_points(f: &MultiPoly, space: &ProjectiveSpace, collect: bool) -> (u64, Vec<u64>) {
    let mut polys = vec![PackedPoly::new(f)];
    for d in f.partials() {
        if !d.is_zero() {
            polys.push(PackedPoly::new(&d));
        }
    }
    let maxe = merged_max_exp(&polys);
    let test = |x: &[u64]| {
        let pows = polys[0].power_table(x, &maxe);
        polys.iter().all(|p| p.eval_with(&pows) == 0)
    };
    if collect {
        let hits = space.par_filter_map(|x| test(x).then_some(()));
        let idx: Vec<u64> = hits
            .iter()
            .take(SUPPORT_LIMIT + 1)
            .map(|(i, _)| *i)
            .collect();
        (hits.len() as u64, idx)
    } else {
        (space.par_count(test), Vec::new())
    }
}

fn estimate_dimension(counts: &[u64], sizes: &[u64]) -> i64 {
    let nz: Vec<(f64, f64)> = counts
        .iter()
        .zip(sizes)
        .filter(|(c, _)| **c > 0)
        .map(|(&c, &q)| ((c as f64).ln(), (q as f64).ln()))
        .collect();
    match nz.as_slice() {
        [] => -1,
        [(c, q)] => (c / q).round() as i64,
        [first, .., last] => {
            if last.1 == first.1 {
                (last.0 / last.1).round() as i64
            } else {
                ((last.0 - first.0) / (last.1 - first.1)).round().max(0.0) as i64
            }
        }
    }
}

/// Counts points where `F` and all partials vanish over `GF(q^m)`, `m = 1..max_ext`,
/// and estimates the dimension of the singular locus from their growth.
pub fn singular_probe(x: &Hypersurface, max_ext: u32) -> Result<SingProbeReport> {
    let field = x.field();
    let q = field
        .order()
        .ok_or_else(|| Error::CharacteristicZero(field.name()))?;
    let budget = enumeration_budget();
    let nvars = x.nvars();
    let mut needed = 0u128;
    for m in 1..=max_ext.max(1) {
        let qm = (q as u128).checked_pow(m).unwrap_or(u128::MAX);
        needed = needed.saturating_add(if qm > u64::MAX as u128 {
            u128::MAX
        } else {
            point_count(qm as u64, nvars)
        });
    }
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut counts = Vec::new();
    let mut sizes = Vec::new();
    let mut support = None;
    for m in 1..=max_ext.max(1) {
        let e = field.finite_extension(m)?;
        let f = x.poly().map_coeffs(&e.target, |c| e.map(c));
        let space = ProjectiveSpace::new(&e.target, nvars)?;
        let (count, idx) = singular_points(&f, &space, m == 1);
        if m == 1 && idx.len() <= SUPPORT_LIMIT {
            support = Some(idx.iter().map(|&i| space.point(i)).collect());
        }
        counts.push(count);
        sizes.push(space.q());
    }
    Ok(SingProbeReport {
        estimate: estimate_dimension(&counts, &sizes),
        counts,
        field_sizes: sizes,
        budget,
        support,
    })
}

/// Whether `P` is singular on `X` (all partials and `F` vanish).
pub fn is_singular_point(x: &Hypersurface, p: &ProjPoint) -> bool {
    x.contains(p)
        && x.poly()
            .partials()
            .iter()
            .all(|d| d.eval(p.coords()).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{field_make, FieldDesc};
    use crate::polyparse::parse_str;

    fn hs(text: &str, vars: &[&str], f: &FieldDesc) -> Hypersurface {
        Hypersurface::new(parse_str(text, vars, f).unwrap()).unwrap()
    }

    #[test]
    fn restriction_matches_pointwise_evaluation() {
        let k = FieldDesc::cyclotomic(5);
        let f = parse_str("X^3*Y - zeta*Z^4 + X*Y*Z^2", &["X", "Y", "Z"], &k).unwrap();
        let a = vec![k.from_i64(1), k.generator(), k.from_i64(-2)];
        let b = vec![k.from_i64(3), k.zero(), k.generator().pow(2)];
        let g = restrict_to_line(&f, &a, &b);
        for t in [-2i64, 0, 1, 5] {
            let tt = k.from_i64(t);
            let pt: Vec<Scalar> = a.iter().zip(&b).map(|(x, y)| x + &(y * &tt)).collect();
            assert_eq!(g.eval(&tt), f.eval(&pt));
        }
    }

    #[test]
    fn certifies_irreducible_quartics() {
        let f9 = field_make(3, 2, 0).unwrap();
        let x = hs("X0^4 + X1^4 + X2^4 + X3^4", &["X0", "X1", "X2", "X3"], &f9);
        assert_eq!(irreducibility_probe(&x, 20, 1).verdict, Tri::Yes);
        let q = FieldDesc::rationals();
        let y = hs("X0^3*X1 + X1^4 + X2^4", &["X0", "X1", "X2"], &q);
        assert_eq!(irreducibility_probe(&y, 20, 1).verdict, Tri::Yes);
        let lin = hs("X0 + X1", &["X0", "X1", "X2"], &q);
        assert_eq!(irreducibility_probe(&lin, 1, 0).verdict, Tri::Yes);
    }

    #[test]
    fn never_certifies_reducible() {
        let q = FieldDesc::rationals();
        let x = hs("X1*(X0^3 + X1^3 + X2^3)", &["X0", "X1", "X2"], &q);
        for seed in 0..5 {
            let r = irreducibility_probe(&x, 30, seed);
            assert_eq!(r.verdict, Tri::Unknown);
            assert!(
                r.evidence.contains("reducibility suspected"),
                "{}",
                r.evidence
            );
        }
        let f4 = field_make(2, 2, 0).unwrap();
        let sq = hs(
            "(X0 + X1)^2*(X0^2 + X1*X2 + X2^2)",
            &["X0", "X1", "X2"],
            &f4,
        );
        let r = irreducibility_probe(&sq, 20, 3);
        assert_eq!(r.verdict, Tri::Unknown);
        assert_ne!(r.squarefree, Tri::Yes);
    }

    #[test]
    fn singular_probe_examples() {
        let f16 = field_make(2, 4, 0).unwrap();
        let ex1 = hs("Z*W^2 - X^2*W - Y^3", &["X", "Y", "Z", "W"], &f16);
        let r = singular_probe(&ex1, 1).unwrap();
        assert_eq!(r.counts, vec![1]);
        assert_eq!(r.estimate, 0);
        assert_eq!(
            r.support.unwrap(),
            vec![ProjPoint::from_i64s(&[0, 0, 1, 0], &f16).unwrap()]
        );

        let f9 = field_make(3, 2, 0).unwrap();
        let fermat = hs("X0^4 + X1^4 + X2^4", &["X0", "X1", "X2"], &f9);
        let r = singular_probe(&fermat, 2).unwrap();
        assert_eq!(r.counts, vec![0, 0]);
        assert_eq!(r.estimate, -1);
    }

    #[test]
    fn dimension_estimates() {
        assert_eq!(estimate_dimension(&[0, 0], &[4, 16]), -1);
        assert_eq!(estimate_dimension(&[1, 1], &[16, 256]), 0);
        assert_eq!(estimate_dimension(&[17, 257], &[16, 256]), 1);
        assert_eq!(estimate_dimension(&[5], &[4]), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let f = field_make(2, 8, 0).unwrap();
        let x = hs(
            "X0^4 + X1^4 + X2^4 + X3^4 + X4^4",
            &["X0", "X1", "X2", "X3", "X4"],
            &f,
        );
        assert!(matches!(
            singular_probe(&x, 2),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
