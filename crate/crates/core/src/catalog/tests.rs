use super::*;
use crate::polyparse::parse_str;

fn field(spec: &str) -> FieldDesc {
    FieldDesc::from_spec(spec, None).unwrap()
}

fn built(id: &str, params: Params) -> CatalogInstance {
    let f = field(&default_field(id, &params).unwrap());
    build(id, &params, &f).unwrap()
}

fn np(n: usize, s: i64) -> Params {
    Params {
        n: Some(n),
        s: Some(s),
        ..Params::default()
    }
}

fn check<'a>(r: &'a VerifyReport, name: &str) -> &'a Check {
    r.checks.iter().find(|c| c.name == name).unwrap()
}

fn assert_passed(r: &VerifyReport) {
    let failed: Vec<_> = r
        .checks
        .iter()
        .filter(|c| c.outcome == Outcome::Fail)
        .collect();
    assert!(r.passed, "{} failed: {failed:?}", r.id);
}

#[test]
fn i0_plane_form() {
    let inst = built("I-0", Params::default());
    assert_eq!(inst.equation, "X0^3*X2 + X1^3*X3 + X2^4 + X3^4");
    assert_eq!(inst.claimed_counts.inner, Some(8));
    assert_eq!(inst.claimed_points.len(), 8);
    assert!(inst.notes.is_empty());
    let r = verify(&inst, &VerifyOptions::default());
    assert_passed(&r);
    assert_eq!(r.found_inner.len(), 8);
    assert_eq!(r.closure_inner, Some(8));
    let b = r.bounds.unwrap();
    assert_eq!(
        (b.inner_bound, b.r, b.mu, b.t),
        (Some(8), Some(1), 1, Some(1))
    );
}

#[test]
fn i0_over_q_counts_over_the_closure() {
    let inst = build("I-0", &Params::default(), &FieldDesc::rationals()).unwrap();
    assert_eq!(inst.claimed_points.len(), 4);
    assert_eq!(inst.notes.len(), 1);
    let r = verify(&inst, &VerifyOptions::default());
    assert_passed(&r);
    assert_eq!((r.found_inner.len(), r.closure_inner), (4, Some(8)));
    assert_eq!(check(&r, "counts-and-bounds").outcome, Outcome::Skipped);
}

#[test]
fn ii_quintic() {
    let inst = built("II", Params::default());
    assert_eq!(inst.field, "Q(zeta 4)");
    assert_eq!(inst.equation, "X0^4*X2 + X1^4*X3 + X2^5 + X3^5");
    assert_eq!(inst.claimed_counts.inner, Some(2));
    for cp in &inst.claimed_points {
        assert_eq!(cp.group, GroupDescriptor::Cyclic { order: 4 });
    }
    let r = verify(&inst, &VerifyOptions::default());
    assert_passed(&r);
    assert_eq!(
        r.found_inner,
        inst.claimed_points
            .iter()
            .map(|c| c.point.clone())
            .collect::<Vec<_>>()
    );
    assert_eq!(r.bounds.unwrap().inner_bound, Some(2));
}

#[test]
fn fermat_outer_points() {
    let inst = built("T2-1", Params::default());
    assert_eq!(inst.equation, "X0^4 + X1^4 + X2^4 + X3^4");
    let r = verify(&inst, &VerifyOptions::default());
    assert_passed(&r);
    assert_eq!((r.found_outer.len(), r.closure_outer), (4, Some(4)));
    assert!(r.found_inner.is_empty());
}

#[test]
fn equations_of_the_remaining_ids() {
    let cases = [
        ("I-1", "X0^3*X3 + X1^3*X4 + X2^3*X4 + X3^4"),
        ("I-2", "X0^3*X2 + X1^3*X3 + X2^4"),
        ("I-3", "X0^3*X1 + X1^4 + X2^2*X3^2 + X2^2*X4^2"),
        ("I-4i", "X0^3*X1 + X1^4 + X2^2*X3^2 + X2^2*X4^2 + X2^2*X5^2"),
        ("I-4ii", "X0^3*X4 + X1^3*X4 + X2^3*X4 + X3^3*X4 + X5^4"),
        ("T2-2", "X0^4 + X1^4 + X2^2*X3^2 + X2^2*X4^2"),
        ("EX-EVEN-i", "X0^3*X3 + X1^3*X4 + X2^3*X3"),
        ("EX-EVEN-ii", "X0^3*X3 + X1^3*X3 + X2^3*X3 + X4^4"),
        ("EX1", "X^2*W + Y^3 + Z*W^2"),
        ("EX2", "X^2*W^2 + Y^4 + Z*W^3"),
    ];
    for (id, eq) in cases {
        assert_eq!(built(id, Params::default()).equation, eq, "{id}");
    }
    let with_a = built(
        "I-1",
        Params {
            a: Some(1),
            ..Params::default()
        },
    );
    assert_eq!(with_a.equation, "X0^3*X3 + X1^3*X4 + X2^3*X4 + X3^4 + X4^4");
}

#[test]
fn every_id_round_trips_through_the_parser() {
    for id in IDS {
        let inst = built(id, Params::default());
        let f = inst.hypersurface.field();
        let parsed = parse_str(&inst.equation, &inst.vars, f).unwrap();
        assert_eq!(&parsed, inst.hypersurface.poly(), "{id}");
    }
}

#[test]
fn every_default_instance_verifies() {
    for id in IDS {
        let inst = built(id, Params::default());
        let r = verify(&inst, &VerifyOptions::default());
        assert_passed(&r);
        assert_eq!(r.limitation, verify::LIMITATION);
        assert_eq!(r.representative.is_some(), inst.representative.is_some());
    }
}

#[test]
fn larger_parameters_verify() {
    let cases = [
        ("I-0", np(4, -1), 12),
        ("I-1", np(4, 1), 7),
        ("I-2", np(4, 0), 9),
        ("I-3", np(5, 1), 8),
        ("I-4ii", np(5, 3), 5),
        ("II", np(3, 0), 3),
        ("EX-EVEN-i", np(5, 1), 7),
    ];
    for (id, params, count) in cases {
        let inst = built(id, params);
        assert_eq!(inst.claimed_counts.inner, Some(count), "{id}");
        let r = verify(&inst, &VerifyOptions::default());
        assert_passed(&r);
        assert_eq!(r.closure_inner, Some(count), "{id}");
    }
}

#[test]
fn even_examples_claim_r_t_mu() {
    let i = built("EX-EVEN-i", np(5, 1));
    let ii = built("EX-EVEN-ii", np(5, 1));
    let m = i.params.m;
    assert_eq!(m, 3);
    assert_eq!(
        (i.claimed_counts.r, i.claimed_counts.t, i.claimed_counts.mu),
        (Some(m), Some(m - 1), Some(m - 3))
    );
    assert_eq!(
        (
            ii.claimed_counts.r,
            ii.claimed_counts.t,
            ii.claimed_counts.mu
        ),
        (Some(m), Some(m - 2), Some(m - 3))
    );
    let r = verify(&ii, &VerifyOptions::default());
    assert_passed(&r);
    assert_eq!(r.bounds.unwrap().t, Some(m - 2));
}

#[test]
fn flagged_representatives() {
    assert_eq!(
        built("I-3", Params::default()).representative.as_deref(),
        Some("G = X2^2*(X3^2 + X4^2)")
    );
    assert_eq!(
        built("T2-2", Params::default()).representative.as_deref(),
        Some("G = X2^2*(X3^2 + X4^2)")
    );
    assert_eq!(
        built("I-4ii", Params::default()).representative.as_deref(),
        Some("A_i = X4, G_2 = X5^4")
    );
    assert!(built("I-0", Params::default()).representative.is_none());
}

#[test]
fn invalid_parameters() {
    let q12 = field("Q(zeta 12)");
    assert!(build("I-1", &np(4, 0), &q12).is_err());
    assert!(build("I-2", &np(3, 0), &q12).is_err());
    assert!(build("I-4ii", &np(5, 1), &q12).is_err());
    assert!(build(
        "II",
        &Params {
            d: Some(4),
            ..Params::default()
        },
        &q12
    )
    .is_err());
    assert!(build("I-0", &np(2, 0), &q12).is_err());
    assert!(build("EX1", &Params::default(), &q12).is_err());
    assert!(build("I-0", &Params::default(), &field("GF(5)")).is_err());
    assert!(build("nope", &Params::default(), &q12).is_err());
}

#[test]
fn example1_over_f4_samples_every_nonzero_a() {
    let f4 = field("GF(2^2)");
    let inst = build("EX1", &Params::default(), &f4).unwrap();
    let fam = &inst.claimed_families[0];
    assert_eq!(fam.samples.len(), 3);
    assert_eq!(fam.group, GroupDescriptor::Semidirect { p: 2, e: 1, l: 1 });
    let r = verify(&inst, &VerifyOptions::default());
    assert_passed(&r);
    assert!(check(&r, "char-p").details[0].contains("dimension estimate 0"));
}

#[test]
fn examples_in_characteristic_three() {
    let f9 = field("GF(3^2)");
    for id in ["EX1", "EX2"] {
        let inst = build(
            id,
            &Params {
                samples: Some(3),
                ..Params::default()
            },
            &f9,
        )
        .unwrap();
        let r = verify(&inst, &VerifyOptions::default());
        assert_passed(&r);
    }
}

#[test]
fn cone_over_i0() {
    let inst = built(
        "CONE-I0",
        Params {
            vertex: Some(2),
            ..Params::default()
        },
    );
    assert_eq!(inst.hypersurface.nvars(), 6);
    assert_eq!(inst.claimed_flags.vertex_dim, 1);
    let r = verify(&inst, &VerifyOptions::default());
    assert_passed(&r);
    let c = check(&r, "cone");
    assert!(c.details.contains(&"20/20 fiber pairs agree".to_string()));
    assert!(c
        .details
        .contains(&"10/10 base points agree between X and Y".to_string()));
}

#[test]
fn wrong_claims_are_reported() {
    let mut inst = built("I-0", Params::default());
    inst.claimed_counts.inner = Some(9);
    inst.claimed_flags.vertex_dim = 0;
    inst.claimed_points[0].group = GroupDescriptor::Cyclic { order: 4 };
    let r = verify(&inst, &VerifyOptions::default());
    assert!(!r.passed);
    for name in ["claimed-points", "line-scans", "cone"] {
        assert_eq!(check(&r, name).outcome, Outcome::Fail, "{name}");
    }
}

#[test]
fn sections_keep_the_group() {
    for id in ["I-0", "II"] {
        let inst = built(id, Params::default());
        let p = &inst.claimed_points[0].point;
        let sweep =
            section_preservation(&inst.hypersurface, p, 3, &VerifyOptions::default()).unwrap();
        assert_eq!(sweep.records.len(), 3);
        assert!(sweep.records.iter().all(|r| r.group_preserved), "{id}");
    }
}

#[test]
fn list_covers_every_id() {
    let l = list();
    assert_eq!(l.len(), IDS.len());
    assert_eq!(l[0].default_field, "Q(zeta 12)");
    assert_eq!(l[6].default_field, "Q(zeta 4)");
}
