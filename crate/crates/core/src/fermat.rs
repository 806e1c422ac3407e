//! Fermat hypersurfaces `X_0^{q+1} + ... + X_{n+1}^{q+1}` in characteristic `p`, `q = p^e`.

use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::field::primes::{factorize, prime_power_exponent};
use crate::field::{field_make, FieldDesc};
use crate::galois0::{group_descriptor, GaloisVerdict, GroupDescriptor, Verdict};
use crate::galoisp::{
    additive_form_check, projection_polynomial, recipe_roots, specialization_oracle,
    splitting_certificate_check, AdditivePattern, OracleVerdict, ProjectionPoly,
};
use crate::polyparse::render;
use crate::projgeom::{Flag, Hypersurface, ProjPoint, ProjectiveSpace};
use crate::MultiPoly;

/// `e` with `q = p^e`, if `q >= 3` is a power of the characteristic.
fn q_exponent(q: u64, field: &FieldDesc) -> Result<u32> {
    let p = field.characteristic();
    if p == 0 {
        return Err(Error::CharacteristicZero(field.name()));
    }
    let e = prime_power_exponent(q, p)
        .filter(|&e| e > 0)
        .ok_or_else(|| Error::Precondition(format!("q = {q} is not a power of p = {p}")))?;
    Ok(e)
}

pub fn fermat_hypersurface(n: usize, q: u64, field: &FieldDesc) -> Result<Hypersurface> {
    let e = q_exponent(q, field)?;
    if q < 3 {
        return precondition(format!("q = {q} gives degree {} < 4", q + 1));
    }
    if !(field.extension_degree() as u32).is_multiple_of(2 * e) {
        return Err(Error::FieldTooSmall {
            field: field.name(),
            needed: format!("GF({q}^2)"),
            suggestion: format!("GF({}^{})", field.characteristic(), 2 * e),
        });
    }
    let nvars = n + 2;
    let f = (0..nvars).fold(MultiPoly::zero(nvars, field), |acc, i| {
        &acc + &MultiPoly::var(nvars, i, field).pow(q as u32 + 1)
    });
    Ok(Hypersurface::new(f)?.with_irreducible(Flag::yes("smooth Fermat hypersurface")))
}

/// All normalized coordinates satisfy `a^{q^2} = a`.
pub fn is_fq2_rational(p: &ProjPoint, q: u64) -> Result<bool> {
    let e = q_exponent(q, p.field())?;
    for a in p.coords() {
        if a.frobenius(2 * e)? != *a {
            return Ok(false);
        }
    }
    Ok(true)
}

fn base_names(f: &ProjectionPoly) -> Vec<String> {
    f.names()[1..].to_vec()
}

fn shown(f: &ProjectionPoly, c: &MultiPoly) -> String {
    render(c, &base_names(f)).unwrap()
}

fn oracle_witness(f: &ProjectionPoly, seed: u64) -> Option<String> {
    let rep = specialization_oracle(f, 50, 2, seed).ok()?;
    match rep.verdict {
        OracleVerdict::Fail => rep.witness.map(|w| {
            format!(
                "specialization x1..xn = ({}) factors with degrees {:?}",
                w.values.join(", "),
                w.degrees
            )
        }),
        _ => None,
    }
}

/// Structural test: `f = B x0^q + B^q x0 + C` with vanishing `x0^{q+1}` coefficient.
fn inner_structure(f: &ProjectionPoly, q: u64) -> std::result::Result<(), String> {
    let qi = q as usize;
    let lead = f.coeff(qi + 1);
    if !lead.is_zero() {
        return Err(format!(
            "x0^{} coefficient {} is nonzero",
            qi + 1,
            shown(f, &lead)
        ));
    }
    let b = f.coeff(qi);
    if b.is_zero() {
        return Err("degenerate: the x0^q coefficient vanishes".into());
    }
    let b1 = f.coeff(1);
    let bq = b.pow(q as u32);
    if b1 != bq {
        return Err(format!(
            "x0 coefficient {} differs from (x0^q coefficient)^q = {}",
            shown(f, &b1),
            shown(f, &bq)
        ));
    }
    Ok(())
}

/// Structural test: after `x0 -> x0 - beta`, the `x0^q` and `x0` coefficients vanish.
fn outer_structure(f: &ProjectionPoly, q: u64) -> std::result::Result<MultiPoly, String> {
    let qi = q as usize;
    let lead = f.coeff(qi + 1);
    if !lead.is_constant() || lead.is_zero() {
        return Err(format!(
            "x0^{} coefficient {} is not a nonzero constant",
            qi + 1,
            shown(f, &lead)
        ));
    }
    let beta = f.coeff(qi).scale(&lead.constant_term().inv().unwrap());
    let n = f.base_vars() + 1;
    let field = f.field();
    let shift: Vec<usize> = (1..n).collect();
    let mut subs = vec![&MultiPoly::var(n, 0, field) - &beta.remap_vars(n, &shift)];
    subs.extend((1..n).map(|i| MultiPoly::var(n, i, field)));
    let shifted = f.to_multipoly().compose(&subs).coeffs_in(0);
    let at = |k: usize| {
        shifted
            .get(k)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(n, field))
    };
    for k in [qi, 1] {
        let c = at(k);
        if !c.is_zero() {
            return Err(format!(
                "after the shift by beta = {} the x0^{k} coefficient is {}",
                shown(f, &beta),
                render(&c, &f.names()).unwrap()
            ));
        }
    }
    Ok(beta)
}

fn certified(f: &ProjectionPoly, patterns: &[AdditivePattern]) -> Result<bool> {
    match additive_form_check(f) {
        Some(form) if patterns.contains(&form.pattern) => {
            let (g, roots) = recipe_roots(f, &form)?;
            splitting_certificate_check(&g, &roots)
        }
        _ => Ok(false),
    }
}

fn verdict_record(
    p: &ProjPoint,
    verdict: Verdict,
    m: u32,
    group: Option<GroupDescriptor>,
) -> GaloisVerdict {
    let mut v = GaloisVerdict::bare(p, verdict, m);
    v.group = group;
    v
}

fn check_point(
    x: &Hypersurface,
    p: &ProjPoint,
    q: u64,
    with_oracle: bool,
) -> Result<GaloisVerdict> {
    let f = projection_polynomial(x, p)?;
    let field = x.field();
    let char_p = field.characteristic();
    let d = x.degree();
    if x.contains(p) {
        match inner_structure(&f, q) {
            Ok(()) => {
                let ok = certified(
                    &f,
                    &[AdditivePattern::FermatType, AdditivePattern::Additive],
                )?;
                if !ok {
                    return Err(Error::Inconsistency(format!(
                        "inner structure holds at {p} but the splitting certificate fails"
                    )));
                }
                let mut v = verdict_record(
                    p,
                    Verdict::InnerGalois,
                    1,
                    Some(group_descriptor(char_p, d, 1)?),
                );
                v.normal_form = Some(f.render());
                v.hypotheses
                    .push("splitting certificate: roots x0 + cB with c^q + c = 0".into());
                Ok(v)
            }
            Err(why) => {
                let mut v = verdict_record(p, Verdict::NotGalois, 1, None);
                if why.starts_with("degenerate") {
                    v.verdict = Verdict::Unknown;
                }
                v.witness = Some(match with_oracle.then(|| oracle_witness(&f, 0)).flatten() {
                    Some(w) => format!("{why}; {w}"),
                    None => why,
                });
                Ok(v)
            }
        }
    } else {
        match outer_structure(&f, q) {
            Ok(beta) => {
                let ok = certified(&f, &[AdditivePattern::Kummer])?;
                if !ok {
                    return Err(Error::Inconsistency(format!(
                        "outer structure holds at {p} but the Kummer certificate fails"
                    )));
                }
                let mut v = verdict_record(
                    p,
                    Verdict::OuterGalois,
                    0,
                    Some(group_descriptor(char_p, d, 0)?),
                );
                v.normal_form = Some(f.render());
                v.hypotheses.push(format!(
                    "splitting certificate: roots z (x0 + beta) - beta with z^{} = 1, beta = {}",
                    q + 1,
                    shown(&f, &beta)
                ));
                Ok(v)
            }
            Err(why) => {
                let mut v = verdict_record(p, Verdict::NotGalois, 0, None);
                v.witness = Some(match with_oracle.then(|| oracle_witness(&f, 0)).flatten() {
                    Some(w) => format!("{why}; {w}"),
                    None => why,
                });
                Ok(v)
            }
        }
    }
}

fn checked_surface(n: usize, q: u64, field: &FieldDesc) -> Result<Hypersurface> {
    fermat_hypersurface(n, q, field)
}

/// Inner case at `P` on `F_n(q+1)`.
pub fn fermat_inner_check(p: &ProjPoint, n: usize, q: u64) -> Result<GaloisVerdict> {
    let x = checked_surface(n, q, p.field())?;
    if !x.contains(p) {
        return precondition(format!("{p} is not on the Fermat hypersurface"));
    }
    check_point(&x, p, q, true)
}

/// Outer case at `P` off `F_n(q+1)`.
pub fn fermat_outer_check(p: &ProjPoint, n: usize, q: u64) -> Result<GaloisVerdict> {
    let x = checked_surface(n, q, p.field())?;
    if x.contains(p) {
        return precondition(format!("{p} lies on the Fermat hypersurface"));
    }
    check_point(&x, p, q, true)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub index: u64,
    pub point: ProjPoint,
    pub rational: bool,
    pub verdict: Verdict,
    /// `inner` or `outer`.
    pub case: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub n: usize,
    pub q: u64,
    pub field: String,
    pub total: u64,
    pub rational: u64,
    pub galois: u64,
    pub inner_galois: u64,
    pub outer_galois: u64,
    pub not_galois: u64,
    /// Points where the verdict and rationality disagree.
    pub mismatches: Vec<ProjPoint>,
    #[serde(skip)]
    pub rows: Vec<ScanRow>,
}

/// Classifies every point of `P^{n+1}(GF(q^{2 ext}))` and compares with `GF(q^2)`-rationality.
pub fn scan(n: usize, q: u64, ambient_ext: u32, seed: u64) -> Result<ScanReport> {
    let p = factorize(q)
        .first()
        .map(|&(p, _)| p)
        .ok_or_else(|| Error::Precondition(format!("q = {q} is not a prime power")))?;
    let e = prime_power_exponent(q, p)
        .ok_or_else(|| Error::Precondition(format!("q = {q} is not a prime power")))?;
    if ambient_ext == 0 {
        return precondition("ambient extension degree must be positive");
    }
    let field = field_make(p, 2 * e * ambient_ext, seed)?;
    let x = fermat_hypersurface(n, q, &field)?;
    let space = ProjectiveSpace::new(&field, n + 2)?;
    space.check_budget()?;
    let rows = space.par_filter_map(|packed| {
        let pt = space.to_point(packed);
        let rational = is_fq2_rational(&pt, q);
        let v = check_point(&x, &pt, q, false);
        Some((pt, rational, v))
    });
    let mut report = ScanReport {
        n,
        q,
        field: field.name(),
        total: rows.len() as u64,
        rational: 0,
        galois: 0,
        inner_galois: 0,
        outer_galois: 0,
        not_galois: 0,
        mismatches: Vec::new(),
        rows: Vec::with_capacity(rows.len()),
    };
    for (index, (point, rational, v)) in rows {
        let rational = rational?;
        let v = v?;
        match v.verdict {
            Verdict::InnerGalois => report.inner_galois += 1,
            Verdict::OuterGalois => report.outer_galois += 1,
            _ => report.not_galois += 1,
        }
        report.rational += rational as u64;
        if v.is_galois() != rational {
            report.mismatches.push(point.clone());
        }
        report.rows.push(ScanRow {
            index,
            case: if v.m == 0 { "outer" } else { "inner" },
            point,
            rational,
            verdict: v.verdict,
        });
    }
    report.galois = report.inner_galois + report.outer_galois;
    Ok(report)
}

/// The section by `X_i = a X_0`, rescaled to a Fermat hypersurface in `P^n`.
///
/// Returns the rescaled section and the image of `P`, or `None` when
/// `1 + a^{q+1} = 0` or no `(q+1)`-th root of it exists in the field.
pub fn rescaled_section(
    p: &ProjPoint,
    n: usize,
    q: u64,
    i: usize,
) -> Result<Option<(Hypersurface, ProjPoint)>> {
    let field = p.field();
    if p.coords()[0].is_zero() || i == 0 || i > n + 1 {
        return precondition("section needs P = (1:a_1:...) and 1 <= i <= n+1");
    }
    let a = &p.coords()[i];
    let c = &field.one() + &a.pow(q + 1);
    if c.is_zero() {
        return Ok(None);
    }
    let Some(r) = field.elements().find(|r| r.pow(q + 1) == c) else {
        return Ok(None);
    };
    let rinv = r.inv()?;
    let coords: Vec<_> = p
        .coords()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(j, v)| if j == 0 { v.clone() } else { v * &rinv })
        .collect();
    let image = ProjPoint::new(coords)?;
    Ok(Some((fermat_hypersurface(n - 1, q, field)?, image)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldDesc {
        field_make(3, 2, 0).unwrap()
    }

    #[test]
    fn construction() {
        let f81 = field_make(3, 4, 0).unwrap();
        let x = fermat_hypersurface(1, 3, &f81).unwrap();
        assert_eq!(x.poly().render_default(), "X0^4 + X1^4 + X2^4");
        let s = fermat_hypersurface(2, 3, &f9()).unwrap();
        assert_eq!(s.poly().render_default(), "X0^4 + X1^4 + X2^4 + X3^4");
        let f4 = field_make(2, 2, 0).unwrap();
        assert!(fermat_hypersurface(1, 2, &f4).is_err());
        assert!(matches!(
            fermat_hypersurface(1, 3, &field_make(3, 1, 0).unwrap()),
            Err(Error::FieldTooSmall { .. })
        ));
    }

    #[test]
    fn rationality() {
        let f81 = field_make(3, 4, 0).unwrap();
        let g = f81.generator();
        let emb = f9().finite_extension(2).unwrap();
        for a in f9().elements() {
            let p = ProjPoint::new(vec![f81.one(), emb.map(&a), f81.zero()]).unwrap();
            assert!(is_fq2_rational(&p, 3).unwrap());
        }
        let p = ProjPoint::new(vec![f81.one(), g.clone(), f81.zero()]).unwrap();
        assert!(!is_fq2_rational(&p, 3).unwrap());
        let scaled = ProjPoint::new(vec![g.clone(), &g * &g, f81.zero()]).unwrap();
        assert_eq!(scaled, p);
        let rational_scaled = ProjPoint::new(vec![g.clone(), g.clone(), f81.zero()]).unwrap();
        assert!(is_fq2_rational(&rational_scaled, 3).unwrap());
    }

    #[test]
    fn inner_points_over_f9() {
        let f = f9();
        let x = fermat_hypersurface(2, 3, &f).unwrap();
        let on: Vec<ProjPoint> = ProjectiveSpace::new(&f, 4)
            .unwrap()
            .points()
            .filter(|p| x.contains(p) && p.coords()[0].is_zero())
            .take(5)
            .collect();
        assert!(!on.is_empty());
        for p in on {
            let v = fermat_inner_check(&p, 2, 3).unwrap();
            assert_eq!(v.verdict, Verdict::InnerGalois, "{p}");
            assert_eq!(
                v.group,
                Some(GroupDescriptor::Semidirect { p: 3, e: 1, l: 1 })
            );
        }
    }

    #[test]
    fn outer_points() {
        let f = f9();
        let v = fermat_outer_check(&ProjPoint::from_i64s(&[1, 0, 0], &f).unwrap(), 1, 3).unwrap();
        assert_eq!(v.verdict, Verdict::OuterGalois);
        assert_eq!(v.group, Some(GroupDescriptor::Cyclic { order: 4 }));
        let x = fermat_hypersurface(1, 3, &f).unwrap();
        let off: Vec<ProjPoint> = ProjectiveSpace::new(&f, 3)
            .unwrap()
            .points()
            .filter(|p| !x.contains(p) && p.coords().iter().all(|c| !c.is_zero()))
            .collect();
        assert!(!off.is_empty());
        for p in off {
            assert_eq!(
                fermat_outer_check(&p, 1, 3).unwrap().verdict,
                Verdict::OuterGalois
            );
        }

        let f81 = field_make(3, 4, 0).unwrap();
        let p = ProjPoint::new(vec![f81.one(), f81.generator(), f81.zero()]).unwrap();
        let v = fermat_outer_check(&p, 1, 3).unwrap();
        assert_eq!(v.verdict, Verdict::NotGalois);
        let w = v.witness.unwrap();
        assert!(
            w.contains("after the shift") && w.contains("factors with degrees"),
            "{w}"
        );
    }

    #[test]
    fn non_rational_inner_point() {
        // Every GF(81)-point of the quartic curve is GF(9)-rational, so go to GF(729).
        let f = field_make(3, 6, 0).unwrap();
        let x = fermat_hypersurface(1, 3, &f).unwrap();
        let p = f
            .elements()
            .filter(|a| a.frobenius(2).unwrap() != *a)
            .find_map(|a| {
                let c = &f.one() + &a.pow(4);
                let t4 = crate::UniPoly::new(vec![c, f.zero(), f.zero(), f.zero(), f.one()], &f);
                let r = crate::field::roots_in_field(&t4).into_iter().next()?;
                Some(ProjPoint::new(vec![f.one(), a, r]).unwrap())
            })
            .unwrap();
        assert!(x.contains(&p) && !is_fq2_rational(&p, 3).unwrap());
        let v = fermat_inner_check(&p, 1, 3).unwrap();
        assert_eq!(v.verdict, Verdict::NotGalois);
        assert!(v.witness.unwrap().contains("factors with degrees"));
    }

    #[test]
    fn no_degenerate_points_on_the_quartic_curve() {
        let f = f9();
        let x = fermat_hypersurface(1, 3, &f).unwrap();
        for p in ProjectiveSpace::new(&f, 3)
            .unwrap()
            .points()
            .filter(|p| x.contains(p))
        {
            let g = projection_polynomial(&x, &p).unwrap();
            assert!(!g.coeff(3).is_zero(), "{p}");
        }
    }

    #[test]
    fn scan_over_f9() {
        let r = scan(1, 3, 1, 0).unwrap();
        assert_eq!(
            (r.total, r.galois, r.inner_galois, r.outer_galois),
            (91, 91, 28, 63)
        );
        assert!(r.mismatches.is_empty());
        let r = scan(2, 3, 1, 0).unwrap();
        assert_eq!((r.total, r.galois), (820, 820));
    }

    #[test]
    fn rational_points_have_the_structure() {
        for (q, k) in [(3u64, 2u32), (4, 4)] {
            let p = if q == 3 { 3 } else { 2 };
            let f = field_make(p, k, 0).unwrap();
            for n in [1usize, 2] {
                let x = fermat_hypersurface(n, q, &f).unwrap();
                for pt in ProjectiveSpace::new(&f, n + 2)
                    .unwrap()
                    .points()
                    .step_by(if n == 2 { 7 } else { 1 })
                {
                    let g = projection_polynomial(&x, &pt).unwrap();
                    if x.contains(&pt) {
                        assert!(inner_structure(&g, q).is_ok(), "{pt}");
                    } else {
                        assert!(outer_structure(&g, q).is_ok(), "{pt}");
                    }
                }
            }
        }
    }

    #[test]
    fn sections_stay_fermat_and_galois() {
        let f = f9();
        let x = fermat_hypersurface(2, 3, &f).unwrap();
        let mut checked = 0;
        for p in ProjectiveSpace::new(&f, 4)
            .unwrap()
            .points()
            .filter(|p| !p.coords()[0].is_zero())
            .step_by(11)
        {
            for i in 1..=3 {
                let Some((y, image)) = rescaled_section(&p, 2, 3, i).unwrap() else {
                    continue;
                };
                assert_eq!(y.nvars(), 3);
                let v = check_point(&y, &image, 3, false).unwrap();
                assert!(v.is_galois(), "{p} -> {image}");
                assert_eq!(x.contains(&p), y.contains(&image));
                checked += 1;
            }
        }
        assert!(checked > 20);
    }
}
