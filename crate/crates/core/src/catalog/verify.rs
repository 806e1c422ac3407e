use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{CatalogInstance, Equality, PointKind};
use crate::conelib::{cone_decompose, transfer_check, vertex_space, ConeDecomposition};
use crate::error::{precondition, Result};
use crate::field::Scalar;
use crate::galois0::{
    check_condition_1m, counts_and_bounds, find_galois_on_line, BoundsRecord, GroupDescriptor,
    Verdict,
};
use crate::galoisp::{certify, RootSource};
use crate::projgeom::{
    hessian_at, multiplicity, point_count, random_point, singular_probe, star_check, Hyperplane,
    Hypersurface, ProjPoint, StarReport,
};

pub const LIMITATION: &str = "exactness is verified only over the declared search space: coordinate lines and the claimed \
four-point lines, sampled members of infinite families, and in positive characteristic the singular-point enumeration";

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Specialization-oracle trials per certified point.
    pub trials: usize,
    /// Oracle samples are drawn from `GF(q^ext)`.
    pub ext: u32,
    pub seed: u64,
    pub fiber_pairs: usize,
    pub base_points: usize,
    /// Largest extension degree for the singular-point probe; chosen from the budget when unset.
    pub probe_ext: Option<u32>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 20,
            ext: 1,
            seed: 0,
            fiber_pairs: 20,
            base_points: 10,
            probe_ext: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    pub details: Vec<String>,
    pub witness: Option<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Check {
            name: name.to_string(),
            outcome: Outcome::Pass,
            details: Vec::new(),
            witness: None,
        }
    }

    fn skipped(name: &str, why: impl Into<String>) -> Self {
        Check {
            outcome: Outcome::Skipped,
            details: vec![why.into()],
            ..Check::new(name)
        }
    }

    fn fail(&mut self, witness: impl Into<String>) {
        self.outcome = Outcome::Fail;
        if self.witness.is_none() {
            self.witness = Some(witness.into());
        } else {
            self.details.push(witness.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.details.push(s.into());
    }

    fn from_result(name: &str, r: Result<Check>) -> Check {
        r.unwrap_or_else(|e| {
            let mut c = Check::new(name);
            c.fail(format!("error: {e}"));
            c
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub id: String,
    pub equation: String,
    pub field: String,
    pub representative: Option<String>,
    pub checks: Vec<Check>,
    pub found_inner: Vec<ProjPoint>,
    pub found_outer: Vec<ProjPoint>,
    /// Galois points on the scanned lines over the algebraic closure.
    pub closure_inner: Option<usize>,
    pub closure_outer: Option<usize>,
    pub bounds: Option<BoundsRecord>,
    pub limitation: String,
    pub passed: bool,
}

fn kind_of(v: Verdict) -> Option<PointKind> {
    match v {
        Verdict::InnerGalois => Some(PointKind::Inner),
        Verdict::OuterGalois => Some(PointKind::Outer),
        _ => None,
    }
}

/// Galois verdict and group at `p`: the criterion in characteristic 0, a certificate otherwise.
pub fn judge(
    x: &Hypersurface,
    p: &ProjPoint,
    opts: &VerifyOptions,
) -> Result<(Verdict, Option<GroupDescriptor>, String)> {
    if x.field().characteristic() == 0 {
        if multiplicity(x, p) > 1 {
            return Ok((Verdict::NotGalois, None, "singular point".into()));
        }
        let v = check_condition_1m(x, p)?;
        let why = v.witness.clone().unwrap_or_default();
        Ok((v.verdict, v.group, why))
    } else {
        let r = certify(x, p, &RootSource::Auto, opts.trials, opts.ext, opts.seed)?;
        Ok((r.verdict, r.group, r.certificate_note))
    }
}

fn check_claimed(inst: &CatalogInstance, opts: &VerifyOptions) -> Result<Check> {
    const NAME: &str = "claimed-points";
    if inst.claimed_points.is_empty() {
        return Ok(Check::skipped(NAME, "no isolated points claimed"));
    }
    let x = &inst.hypersurface;
    let mut c = Check::new(NAME);
    let results: Vec<_> = inst
        .claimed_points
        .par_iter()
        .map(|cp| (cp, judge(x, &cp.point, opts)))
        .collect();
    for (cp, r) in results {
        let (v, g, why) = r?;
        if kind_of(v) != Some(cp.kind) {
            c.fail(format!(
                "{}: expected {:?} Galois, got {v} ({why})",
                cp.point, cp.kind
            ));
        } else if g.as_ref() != Some(&cp.group) {
            c.fail(format!(
                "{}: expected group {}, got {g:?}",
                cp.point, cp.group
            ));
        }
    }
    c.note(format!(
        "{} claimed points checked",
        inst.claimed_points.len()
    ));
    Ok(c)
}

struct ScanSummary {
    check: Check,
    found: BTreeMap<ProjPoint, PointKind>,
    closure_inner: Option<usize>,
    closure_outer: Option<usize>,
}

fn coordinate_line_scans(inst: &CatalogInstance) -> Result<ScanSummary> {
    const NAME: &str = "line-scans";
    let x = &inst.hypersurface;
    let field = x.field();
    let n = x.nvars();
    let mut summary = ScanSummary {
        check: Check::new(NAME),
        found: BTreeMap::new(),
        closure_inner: None,
        closure_outer: None,
    };
    if field.characteristic() > 0 {
        summary.check = Check::skipped(
            NAME,
            "positive characteristic: families are sampled instead",
        );
        return Ok(summary);
    }
    if inst.claimed_flags.is_cone {
        summary.check = Check::skipped(
            NAME,
            "cones carry infinitely many Galois points; see the cone check",
        );
        return Ok(summary);
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let scans = pairs
        .par_iter()
        .map(|&(i, j)| {
            let a = ProjPoint::coordinate(n, i, field);
            let b = ProjPoint::coordinate(n, j, field);
            find_galois_on_line(x, &a, &b)
        })
        .collect::<Result<Vec<_>>>()?;
    let c = &mut summary.check;
    for scan in &scans {
        if let Some(how) = &scan.identically_satisfied {
            c.fail(format!(
                "line {} {} satisfies the {how} criterion identically",
                scan.a, scan.b
            ));
        }
        for lp in &scan.points {
            if let Some(k) = kind_of(lp.verdict) {
                summary.found.insert(lp.point.clone(), k);
            }
        }
    }
    let coord_kind = |i: usize| {
        summary
            .found
            .get(&ProjPoint::coordinate(n, i, field))
            .copied()
    };
    let mut totals = [Some(0usize), Some(0usize)];
    for k in 0..n {
        match coord_kind(k) {
            Some(PointKind::Inner) => totals[0] = totals[0].map(|t| t + 1),
            Some(PointKind::Outer) => totals[1] = totals[1].map(|t| t + 1),
            None => {}
        }
    }
    for (scan, &(i, j)) in scans.iter().zip(&pairs) {
        for (slot, count, kind) in [
            (0, scan.inner_count, PointKind::Inner),
            (1, scan.outer_count, PointKind::Outer),
        ] {
            let ends = [i, j]
                .iter()
                .filter(|&&e| coord_kind(e) == Some(kind))
                .count();
            totals[slot] = match (totals[slot], count) {
                (Some(t), Some(c)) => Some(t + c - ends),
                _ => None,
            };
        }
    }
    summary.closure_inner = totals[0];
    summary.closure_outer = totals[1];
    let explicit = |k: PointKind| summary.found.values().filter(|&&v| v == k).count();
    c.note(format!("{} coordinate lines scanned", scans.len()));
    for (kind, claimed, closure) in [
        (PointKind::Inner, inst.claimed_counts.inner, totals[0]),
        (PointKind::Outer, inst.claimed_counts.outer, totals[1]),
    ] {
        let found = explicit(kind);
        c.note(format!(
            "{kind:?}: {found} found in the field, {} over the closure",
            closure.map_or("unknown".into(), |v| v.to_string())
        ));
        if let Some(want) = claimed {
            if closure != Some(want) {
                c.fail(format!(
                    "{kind:?} count over the closure is {closure:?}, claimed {want}"
                ));
            }
            if found < want {
                c.note(format!(
                    "{} {kind:?} points lie outside {}",
                    want - found,
                    field.name()
                ));
            }
        }
    }
    for cp in &inst.claimed_points {
        if summary.found.get(&cp.point) != Some(&cp.kind) {
            c.fail(format!(
                "claimed point {} not found by the line scans",
                cp.point
            ));
        }
    }
    Ok(summary)
}

fn check_hessian(inst: &CatalogInstance, found: &BTreeMap<ProjPoint, PointKind>) -> Check {
    const NAME: &str = "hessian";
    let x = &inst.hypersurface;
    let mut pts: Vec<&ProjPoint> = inst
        .claimed_points
        .iter()
        .filter(|c| c.kind == PointKind::Inner)
        .map(|c| &c.point)
        .collect();
    pts.extend(
        found
            .iter()
            .filter(|(_, &k)| k == PointKind::Inner)
            .map(|(p, _)| p),
    );
    for fam in inst
        .claimed_families
        .iter()
        .filter(|f| f.kind == PointKind::Inner)
    {
        pts.extend(&fam.samples);
    }
    pts.sort();
    pts.dedup();
    if pts.is_empty() {
        return Check::skipped(NAME, "no inner Galois points");
    }
    let mut c = Check::new(NAME);
    for p in &pts {
        let h = hessian_at(x, p);
        if !h.is_zero() {
            c.fail(format!("H(F)({p}) = {h}"));
        }
    }
    c.note(format!("Hessian vanishes at {} inner points", pts.len()));
    c
}

fn galois_any(x: &Hypersurface, p: &ProjPoint) -> Result<bool> {
    if multiplicity(x, p) > 1 {
        return Ok(false);
    }
    Ok(check_condition_1m(x, p)?.is_galois())
}

fn random_scalar(rng: &mut ChaCha8Rng, x: &Hypersurface) -> Scalar {
    x.field().random_element(rng, 5)
}

/// Points of the fiber over `base` (in `Y`'s coordinates) away from the vertex space.
fn fiber_point(
    dec: &ConeDecomposition,
    base: &ProjPoint,
    x: &Hypersurface,
    rng: &mut ChaCha8Rng,
) -> ProjPoint {
    let lifted = dec.lift(base);
    let mut c = lifted.coords().to_vec();
    for m in &dec.m2_basis {
        let mu = random_scalar(rng, x);
        for (ci, mi) in c.iter_mut().zip(m.coords()) {
            *ci += &(&mu * mi);
        }
    }
    ProjPoint::new(c).unwrap()
}

fn check_cone(inst: &CatalogInstance, opts: &VerifyOptions) -> Result<Check> {
    let x = &inst.hypersurface;
    let mut c = Check::new("cone");
    let vs = vertex_space(x)?;
    let vdim = vs.len() as i64 - 1;
    c.note(format!("vertex space of dimension {vdim}"));
    if vdim != inst.claimed_flags.vertex_dim {
        c.fail(format!(
            "vertex dimension {vdim}, claimed {}",
            inst.claimed_flags.vertex_dim
        ));
    }
    if !inst.claimed_flags.is_cone {
        return Ok(c);
    }
    let Some(dec) = cone_decompose(x)? else {
        c.fail("no cone decomposition");
        return Ok(c);
    };
    if x.field().characteristic() != 0 {
        c.note("transfer checks use the characteristic-zero criterion and are skipped");
        return Ok(c);
    }
    let y = &dec.base;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut bases: Vec<ProjPoint> = Vec::new();
    for cp in &inst.claimed_points {
        if bases.len() == opts.base_points {
            break;
        }
        let b = dec.project(&cp.point)?;
        if !bases.contains(&b) {
            bases.push(b);
        }
    }
    while bases.len() < opts.base_points {
        bases.push(random_point(y.field(), y.nvars(), &mut rng, 5));
    }
    let mut agree = 0;
    for b in &bases {
        let lifted = dec.lift(b);
        let r = transfer_check(x, &dec, &lifted, galois_any)?;
        if r.agree {
            agree += 1;
        } else {
            c.fail(format!("{} on X vs {} on Y disagree", r.point, r.projected));
        }
    }
    c.note(format!(
        "{agree}/{} base points agree between X and Y",
        bases.len()
    ));
    let mut fibers = 0;
    for k in 0..opts.fiber_pairs {
        let b = &bases[k % bases.len()];
        let on_y = galois_any(y, b)?;
        let p1 = fiber_point(&dec, b, x, &mut rng);
        let p2 = fiber_point(&dec, b, x, &mut rng);
        let (v1, v2) = (galois_any(x, &p1)?, galois_any(x, &p2)?);
        if v1 == v2 && v1 == on_y {
            fibers += 1;
        } else {
            c.fail(format!(
                "fiber over {b}: {p1} -> {v1}, {p2} -> {v2}, base {on_y}"
            ));
        }
    }
    c.note(format!("{fibers}/{} fiber pairs agree", opts.fiber_pairs));
    for fam in &inst.claimed_families {
        for p in &fam.samples {
            if !galois_any(x, p)? {
                c.fail(format!("family sample {p} is not Galois"));
            }
        }
    }
    Ok(c)
}

fn probe_degree(inst: &CatalogInstance, opts: &VerifyOptions) -> u32 {
    if let Some(e) = opts.probe_ext {
        return e;
    }
    let q = inst.hypersurface.field().order().unwrap();
    let n = inst.hypersurface.nvars();
    if q.checked_pow(2)
        .is_some_and(|q2| point_count(q2, n) <= 2_000_000)
    {
        2
    } else {
        1
    }
}

fn check_char_p(inst: &CatalogInstance, opts: &VerifyOptions) -> Result<Check> {
    const NAME: &str = "char-p";
    let x = &inst.hypersurface;
    let field = x.field();
    if field.characteristic() == 0 {
        return Ok(Check::skipped(
            NAME,
            format!(
                "characteristic 0: singular locus ({}) accepted as a hypothesis",
                inst.claimed_flags.sing_description
            ),
        ));
    }
    let mut c = Check::new(NAME);
    let probe = singular_probe(x, probe_degree(inst, opts))?;
    c.note(format!(
        "singular points {:?} over fields of size {:?}, dimension estimate {}",
        probe.counts, probe.field_sizes, probe.estimate
    ));
    if probe.estimate != inst.claimed_flags.sing_dim {
        c.fail(format!(
            "singular dimension estimate {}, claimed {} ({})",
            probe.estimate, inst.claimed_flags.sing_dim, inst.claimed_flags.sing_description
        ));
    }
    if let Some(want) = &inst.claimed_flags.sing_support {
        let mut got = probe.support.clone().unwrap_or_default();
        got.sort();
        if &got != want {
            c.fail(format!("singular support {got:?}, claimed {want:?}"));
        }
    }
    for fam in &inst.claimed_families {
        let results: Vec<_> = fam
            .samples
            .par_iter()
            .map(|p| {
                (
                    p,
                    certify(x, p, &RootSource::Auto, opts.trials, opts.ext, opts.seed),
                )
            })
            .collect();
        for (p, r) in results {
            let r = r?;
            if kind_of(r.verdict) != Some(fam.kind) {
                c.fail(format!(
                    "{p}: expected {:?} Galois, got {} ({})",
                    fam.kind, r.verdict, r.certificate_note
                ));
            } else if r.group.as_ref() != Some(&fam.group) {
                c.fail(format!(
                    "{p}: expected group {}, got {:?}",
                    fam.group, r.group
                ));
            }
        }
        c.note(format!(
            "{} sampled points of {} certified",
            fam.samples.len(),
            fam.description
        ));
    }
    Ok(c)
}

fn check_counts(
    inst: &CatalogInstance,
    scan: &ScanSummary,
) -> Result<(Check, Option<BoundsRecord>)> {
    const NAME: &str = "counts-and-bounds";
    let x = &inst.hypersurface;
    if x.field().characteristic() > 0 || inst.claimed_flags.is_cone {
        return Ok((
            Check::skipped(NAME, "finite bounds apply to non-cones in characteristic 0"),
            None,
        ));
    }
    let inner_found = scan
        .found
        .values()
        .filter(|&&k| k == PointKind::Inner)
        .count();
    let outer_found = scan.found.len() - inner_found;
    if Some(inner_found) != scan.closure_inner || Some(outer_found) != scan.closure_outer {
        return Ok((
            Check::skipped(
                NAME,
                "some Galois points on the scanned lines lie outside the field",
            ),
            None,
        ));
    }
    let pts: Vec<ProjPoint> = scan.found.keys().cloned().collect();
    let b = counts_and_bounds(x, &pts, inst.claimed_flags.sing_dim)?;
    let mut c = Check::new(NAME);
    c.note(format!(
        "inner {} (bound {:?}, case {:?}), outer {} (bound {:?}, case {:?}), r = {:?}, mu = {}, t = {:?}",
        b.inner_count, b.inner_bound, b.inner_case, b.outer_count, b.outer_bound, b.outer_case, b.r, b.mu, b.t
    ));
    if b.inner_ok == Some(false) || b.outer_ok == Some(false) {
        c.fail("a count exceeds its bound");
    }
    match inst.equality {
        Some(Equality::Inner) if Some(b.inner_count as i64) != b.inner_bound => c.fail(format!(
            "inner count {} does not attain the bound {:?}",
            b.inner_count, b.inner_bound
        )),
        Some(Equality::Outer) if Some(b.outer_count as i64) != b.outer_bound => c.fail(format!(
            "outer count {} does not attain the bound {:?}",
            b.outer_count, b.outer_bound
        )),
        _ => {}
    }
    let cl = &inst.claimed_counts;
    for (name, got, want) in [
        ("r", b.r, cl.r),
        ("t", b.t, cl.t),
        ("mu", Some(b.mu), cl.mu),
    ] {
        if want.is_some() && got != want {
            c.fail(format!("{name} = {got:?}, claimed {want:?}"));
        }
    }
    if x.degree() == 4 && b.inner_count > 0 {
        let r = b.r.unwrap();
        let expect = 4 * (b.mu + 1) + (r - b.mu);
        if b.inner_count as i64 != expect {
            c.fail(format!(
                "inner count {} differs from 4(mu+1)+(r-mu) = {expect}",
                b.inner_count
            ));
        }
    }
    Ok((c, Some(b)))
}

/// Replays every applicable check; failures become report entries.
pub fn verify(inst: &CatalogInstance, opts: &VerifyOptions) -> VerifyReport {
    let scan = coordinate_line_scans(inst).unwrap_or_else(|e| {
        let mut check = Check::new("line-scans");
        check.fail(format!("error: {e}"));
        ScanSummary {
            check,
            found: BTreeMap::new(),
            closure_inner: None,
            closure_outer: None,
        }
    });
    let tasks: [&(dyn Fn() -> (Check, Option<BoundsRecord>) + Sync); 5] = [
        &|| {
            (
                Check::from_result("claimed-points", check_claimed(inst, opts)),
                None,
            )
        },
        &|| (check_hessian(inst, &scan.found), None),
        &|| (Check::from_result("cone", check_cone(inst, opts)), None),
        &|| (Check::from_result("char-p", check_char_p(inst, opts)), None),
        &|| match check_counts(inst, &scan) {
            Ok(r) => r,
            Err(e) => (Check::from_result("counts-and-bounds", Err(e)), None),
        },
    ];
    let done: Vec<(Check, Option<BoundsRecord>)> = tasks.par_iter().map(|t| t()).collect();
    let mut checks = vec![done[0].0.clone(), scan.check.clone()];
    let mut bounds = None;
    for (chk, b) in done.into_iter().skip(1) {
        checks.push(chk);
        if b.is_some() {
            bounds = b;
        }
    }
    let passed = checks.iter().all(|c| c.outcome != Outcome::Fail);
    let split = |k: PointKind| {
        scan.found
            .iter()
            .filter(|(_, &v)| v == k)
            .map(|(p, _)| p.clone())
            .collect()
    };
    VerifyReport {
        schema: 1,
        id: inst.id.clone(),
        equation: inst.equation.clone(),
        field: inst.field.clone(),
        representative: inst
            .representative
            .as_ref()
            .map(|r| format!("{r} (chosen representative of the family, not canonical)")),
        found_inner: split(PointKind::Inner),
        found_outer: split(PointKind::Outer),
        closure_inner: scan.closure_inner,
        closure_outer: scan.closure_outer,
        checks,
        bounds,
        limitation: LIMITATION.to_string(),
        passed,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionRecord {
    pub hyperplane: Hyperplane,
    pub star: StarReport,
    pub section_equation: String,
    pub verdict_on_section: Verdict,
    pub group_on_section: Option<GroupDescriptor>,
    pub group_preserved: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionSweep {
    pub point: ProjPoint,
    pub group: Option<GroupDescriptor>,
    pub attempted: usize,
    pub rejected: usize,
    pub records: Vec<SectionRecord>,
}

fn random_hyperplane_through(p: &ProjPoint, rng: &mut ChaCha8Rng) -> Option<Hyperplane> {
    let field = p.field();
    let j = p.lead_index();
    let mut form: Vec<Scalar> = (0..p.len()).map(|_| field.random_element(rng, 5)).collect();
    form[j] = field.zero();
    let s = form
        .iter()
        .zip(p.coords())
        .fold(field.zero(), |acc, (a, b)| &acc + &(a * b));
    form[j] = -&(&s * &p.coords()[j].inv().ok()?);
    Hyperplane::new(form).ok()
}

/// Section of `x` by `h` through `p`, with the verdict of `p` on it compared to `group`.
pub fn section_at(
    x: &Hypersurface,
    p: &ProjPoint,
    h: &Hyperplane,
    group: Option<&GroupDescriptor>,
    seed: u64,
    opts: &VerifyOptions,
) -> Result<SectionRecord> {
    let (section, star) = star_check(x, h, p, 20, seed)?;
    let q = section.to_section(p)?;
    let (sv, sg, _) = judge(&section.hypersurface, &q, opts)?;
    let names: Vec<String> = (0..section.hypersurface.nvars())
        .map(|i| format!("Y{i}"))
        .collect();
    Ok(SectionRecord {
        hyperplane: h.clone(),
        star,
        section_equation: crate::polyparse::render(section.hypersurface.poly(), &names)?,
        verdict_on_section: sv,
        group_preserved: sv.is_galois() && sg.map(|g| g.order()) == group.map(|g| g.order()),
        group_on_section: sg,
    })
}

/// Random hyperplanes through a Galois point `p` until `count` pass the section
/// condition; for each, the verdict and group of `p` on the section.
pub fn section_preservation(
    x: &Hypersurface,
    p: &ProjPoint,
    count: usize,
    opts: &VerifyOptions,
) -> Result<SectionSweep> {
    let (v, group, why) = judge(x, p, opts)?;
    if !v.is_galois() {
        return precondition(format!("{p} is not a verified Galois point ({why})"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut sweep = SectionSweep {
        point: p.clone(),
        group,
        attempted: 0,
        rejected: 0,
        records: Vec::new(),
    };
    let limit = 10 * count.max(1);
    while sweep.records.len() < count && sweep.attempted < limit {
        sweep.attempted += 1;
        let Some(h) = random_hyperplane_through(p, &mut rng) else {
            sweep.rejected += 1;
            continue;
        };
        let rec = section_at(
            x,
            p,
            &h,
            group.as_ref(),
            opts.seed.wrapping_add(sweep.attempted as u64),
            opts,
        )?;
        if !rec.star.passed() {
            sweep.rejected += 1;
            continue;
        }
        sweep.records.push(rec);
    }
    Ok(sweep)
}
