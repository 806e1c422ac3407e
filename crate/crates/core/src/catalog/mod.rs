//! Named hypersurfaces with many Galois points: the extremal forms of the
//! inner and outer bounds, the even `n + s` examples, two characteristic-`p`
//! surfaces with infinitely many Galois points, and a cone.

mod verify;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use verify::{
    judge, section_at, section_preservation, verify, Check, Outcome, SectionRecord, SectionSweep,
    VerifyOptions, VerifyReport,
};

use crate::error::{precondition, Result};
use crate::field::{roots_in_field, FieldDesc, Scalar, UniPoly};
use crate::galois0::{group_descriptor, m_of, GroupDescriptor};
use crate::polyparse::render;
use crate::projgeom::{Flag, Hypersurface, ProjPoint};
use crate::MultiPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Inner,
    Outer,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimedPoint {
    pub point: ProjPoint,
    pub kind: PointKind,
    pub group: GroupDescriptor,
}

/// An infinite set of claimed Galois points, with the sampled members that get checked.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimedFamily {
    pub description: String,
    pub kind: PointKind,
    pub group: GroupDescriptor,
    pub samples: Vec<ProjPoint>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClaimedCounts {
    pub inner: Option<usize>,
    pub outer: Option<usize>,
    pub r: Option<i64>,
    pub mu: Option<i64>,
    pub t: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimedFlags {
    pub is_cone: bool,
    /// Projective dimension of the vertex space, `-1` when empty.
    pub vertex_dim: i64,
    pub sing_dim: i64,
    pub sing_description: String,
    pub sing_support: Option<Vec<ProjPoint>>,
}

/// Optional overrides; unset values take the per-id defaults.
#[derive(Clone, Debug, Default)]
pub struct Params {
    pub n: Option<usize>,
    pub s: Option<i64>,
    pub d: Option<u32>,
    /// The coefficient `a` in `{0, 1}` of the `I-1` form.
    pub a: Option<u8>,
    /// Number of vertex coordinates added by `CONE-I0`.
    pub vertex: Option<usize>,
    /// Sampled members of each infinite family.
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolvedParams {
    pub n: usize,
    pub s: i64,
    pub d: u32,
    pub m: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
}

/// Which bound the instance attains with equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Equality {
    Inner,
    Outer,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogInstance {
    pub id: String,
    pub title: String,
    pub equation: String,
    pub vars: Vec<String>,
    pub field: String,
    pub params: ResolvedParams,
    #[serde(skip_serializing)]
    pub hypersurface: Hypersurface,
    pub claimed_points: Vec<ClaimedPoint>,
    pub claimed_families: Vec<ClaimedFamily>,
    pub claimed_counts: ClaimedCounts,
    pub claimed_flags: ClaimedFlags,
    pub equality: Option<Equality>,
    /// Set when free data of the form (`G`, `A_i`) was pinned to a chosen representative.
    pub representative: Option<String>,
    pub notes: Vec<String>,
}

pub const IDS: [&str; 14] = [
    "I-0",
    "I-1",
    "I-2",
    "I-3",
    "I-4i",
    "I-4ii",
    "II",
    "T2-1",
    "T2-2",
    "EX-EVEN-i",
    "EX-EVEN-ii",
    "EX1",
    "EX2",
    "CONE-I0",
];

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub title: &'static str,
    pub default_params: String,
    pub default_field: String,
}

fn title(id: &str) -> &'static str {
    match id {
        "I-0" => "smooth quartic with 4(m+1) inner Galois points",
        "I-1" => "quartic, n+s odd, 4(m-s-1)+(s+2) inner Galois points",
        "I-2" => "quartic, s=0 and n even, 4m+1 inner Galois points",
        "I-3" => "quartic, s=1 and n+s even, 4(m-1) inner Galois points",
        "I-4i" => "quartic, s=2 and n+s even, 4(m-s-1)+(s+2) inner Galois points, first form",
        "I-4ii" => "quartic, s>=2 and n+s even, 4(m-s-1)+(s+2) inner Galois points, second form",
        "II" => "degree d>=5 with m+1 inner Galois points",
        "T2-1" => "Fermat hypersurface with n+2 outer Galois points",
        "T2-2" => "singular hypersurface with n-s outer Galois points",
        "EX-EVEN-i" => "n+s even with r=m, t=m-s, mu=m-s-2",
        "EX-EVEN-ii" => "n+s even with r=m, t=m-s-1, mu=m-s-2",
        "EX1" => "ZW^p - X^pW - Y^(p+1): a line of inner Galois points",
        "EX2" => "ZW^(p^2-1) - X^pW^(p^2-p) - Y^(p^2): a plane of outer Galois points",
        "CONE-I0" => "cone over the I-0 quartic",
        _ => "",
    }
}

fn unknown_id<T>(id: &str) -> Result<T> {
    precondition(format!(
        "unknown catalog id {id:?}; known ids: {}",
        IDS.join(", ")
    ))
}

/// Per-id defaults for `n`, `s`, `d`.
fn defaults(id: &str) -> Result<(usize, i64, u32)> {
    Ok(match id {
        "I-0" | "T2-1" | "CONE-I0" => (2, -1, 4),
        "I-1" => (3, 0, 4),
        "I-2" => (2, 0, 4),
        "I-3" => (3, 1, 4),
        "I-4i" => (4, 2, 4),
        "I-4ii" => (4, 2, 4),
        "II" => (2, -1, 5),
        "T2-2" => (3, 1, 4),
        "EX-EVEN-i" | "EX-EVEN-ii" => (3, 1, 4),
        "EX1" | "EX2" => (2, 0, 0),
        _ => return unknown_id(id),
    })
}

/// Field in which every claimed point and Galois generator is defined.
pub fn default_field(id: &str, params: &Params) -> Result<String> {
    let (_, _, d0) = defaults(id)?;
    let d = params.d.unwrap_or(d0);
    Ok(match id {
        "EX1" | "EX2" => "GF(2^4)".into(),
        "II" => format!("Q(zeta {})", lcm(d as u64 - 1, 4)),
        "T2-1" | "T2-2" => format!("Q(zeta {})", lcm(d as u64, 4)),
        _ => "Q(zeta 12)".into(),
    })
}

fn lcm(a: u64, b: u64) -> u64 {
    a / num_integer::gcd(a, b) * b
}

pub fn list() -> Vec<CatalogEntry> {
    IDS.iter()
        .map(|&id| {
            let (n, s, d) = defaults(id).unwrap();
            let default_params = match id {
                "EX1" | "EX2" => "p from the field".to_string(),
                _ => format!("n={n} s={s} d={d}"),
            };
            CatalogEntry {
                id,
                title: title(id),
                default_params,
                default_field: default_field(id, &Params::default()).unwrap(),
            }
        })
        .collect()
}

/// Incremental construction of a form and its claimed coordinate-structure points.
struct Form {
    nvars: usize,
    field: FieldDesc,
    f: MultiPoly,
    points: Vec<ClaimedPoint>,
    /// Roots of `a^3 = -1` in the field.
    cube_roots: Vec<Scalar>,
    used_blocks: bool,
}

impl Form {
    fn new(nvars: usize, field: &FieldDesc) -> Self {
        let t3 = UniPoly::from_i64s(&[1, 0, 0, 1], field);
        let mut cube_roots = roots_in_field(&t3);
        cube_roots.sort();
        cube_roots.dedup();
        Form {
            nvars,
            field: field.clone(),
            f: MultiPoly::zero(nvars, field),
            points: Vec::new(),
            cube_roots,
            used_blocks: false,
        }
    }

    fn x(&self, i: usize) -> MultiPoly {
        MultiPoly::var(self.nvars, i, &self.field)
    }

    fn add(&mut self, t: MultiPoly) {
        self.f = &self.f + &t;
    }

    fn coordinate(&self, i: usize) -> ProjPoint {
        ProjPoint::coordinate(self.nvars, i, &self.field)
    }

    fn claim(&mut self, p: ProjPoint, kind: PointKind, group: GroupDescriptor) {
        self.points.push(ClaimedPoint {
            point: p,
            kind,
            group,
        });
    }

    /// `X_b X_i^3 + X_b^4`: the line `X_i X_b` carries `e_i` and `a e_i + e_b`, `a^3 = -1`.
    fn quartic_block(&mut self, i: usize, b: usize) {
        self.add(&self.x(b) * &self.x(i).pow(3));
        self.add(self.x(b).pow(4));
        self.used_blocks = true;
        let g = GroupDescriptor::Cyclic { order: 3 };
        self.claim(self.coordinate(i), PointKind::Inner, g);
        for a in self.cube_roots.clone() {
            let mut c = vec![self.field.zero(); self.nvars];
            c[i] = a;
            c[b] = self.field.one();
            self.claim(ProjPoint::new(c).unwrap(), PointKind::Inner, g);
        }
    }

    /// `A X_i^(d-1)` with `A` a coordinate other than `X_i`: `e_i` is inner Galois.
    fn power_term(&mut self, a: usize, i: usize, d: u32) {
        self.add(&self.x(a) * &self.x(i).pow(d - 1));
        self.claim(
            self.coordinate(i),
            PointKind::Inner,
            GroupDescriptor::Cyclic {
                order: d as u64 - 1,
            },
        );
    }

    fn pure_power(&mut self, i: usize, d: u32) {
        self.add(self.x(i).pow(d));
    }

    fn missing_cube_roots(&self) -> Option<String> {
        (self.cube_roots.len() < 3).then(|| {
            format!(
                "{} lacks the cube roots of -1; points a e_i + e_b with a^3 = -1 need Q(zeta 3)",
                self.field.name()
            )
        })
    }
}

fn std_names(nvars: usize) -> Vec<String> {
    (0..nvars).map(|i| format!("X{i}")).collect()
}

struct Draft {
    title_suffix: Option<String>,
    form: Form,
    vars: Vec<String>,
    params: ResolvedParams,
    families: Vec<ClaimedFamily>,
    counts: ClaimedCounts,
    flags: ClaimedFlags,
    equality: Option<Equality>,
    representative: Option<String>,
    notes: Vec<String>,
}

fn smooth_flags() -> ClaimedFlags {
    ClaimedFlags {
        is_cone: false,
        vertex_dim: -1,
        sing_dim: -1,
        sing_description: "smooth".into(),
        sing_support: None,
    }
}

fn sing_flags(s: i64, description: impl Into<String>) -> ClaimedFlags {
    ClaimedFlags {
        is_cone: false,
        vertex_dim: -1,
        sing_dim: s,
        sing_description: description.into(),
        sing_support: None,
    }
}

fn resolved(n: usize, s: i64, d: u32) -> ResolvedParams {
    ResolvedParams {
        n,
        s,
        d,
        m: m_of(n as i64, s),
        a: None,
        vertex: None,
    }
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        precondition(msg)
    }
}

fn require_char0(field: &FieldDesc, id: &str) -> Result<()> {
    require(
        field.characteristic() == 0,
        format!(
            "{id} is a characteristic-zero instance; got {}",
            field.name()
        ),
    )
}

fn draft(form: Form, n: usize, s: i64, d: u32) -> Draft {
    Draft {
        title_suffix: None,
        vars: std_names(form.nvars),
        form,
        params: resolved(n, s, d),
        families: Vec::new(),
        counts: ClaimedCounts::default(),
        flags: smooth_flags(),
        equality: None,
        representative: None,
        notes: Vec::new(),
    }
}

fn i0(n: usize, field: &FieldDesc) -> Result<Draft> {
    require(n >= 1, "I-0 needs n >= 1")?;
    let m = m_of(n as i64, -1) as usize;
    let mut form = Form::new(n + 2, field);
    for i in 0..=m {
        form.quartic_block(i, m + 1 + i);
    }
    for j in 2 * m + 2..=n + 1 {
        form.pure_power(j, 4);
    }
    let mut dr = draft(form, n, -1, 4);
    dr.counts.inner = Some(4 * (m + 1));
    dr.counts.r = Some(m as i64);
    dr.counts.mu = Some(m as i64);
    dr.equality = Some(Equality::Inner);
    Ok(dr)
}

fn i1(n: usize, s: i64, a: u8, field: &FieldDesc) -> Result<Draft> {
    require(s >= 0 && s <= n as i64 - 2, "I-1 needs 0 <= s <= n - 2")?;
    require((n as i64 + s) % 2 == 1, "I-1 needs n + s odd")?;
    require(a <= 1, "I-1 needs a in {0, 1}")?;
    let m = m_of(n as i64, s);
    let (mu, s_) = (m as usize, s as usize);
    let mut form = Form::new(n + 2, field);
    for i in 0..(mu - s_ - 1) {
        form.quartic_block(i, mu + 1 + i);
    }
    let c = 2 * mu - s_;
    for j in mu - s_ - 1..=mu {
        form.power_term(c, j, 4);
    }
    if a == 1 {
        form.pure_power(c, 4);
    }
    let mut dr = draft(form, n, s, 4);
    dr.params.a = Some(a);
    dr.counts.inner = Some((4 * (m - s - 1) + (s + 2)) as usize);
    dr.counts.r = Some(m);
    dr.counts.mu = Some(m - s - 2);
    dr.flags = sing_flags(s, format!("dimension {s}"));
    dr.equality = Some(Equality::Inner);
    Ok(dr)
}

fn i2(n: usize, field: &FieldDesc) -> Result<Draft> {
    require(n >= 2 && n.is_multiple_of(2), "I-2 needs n even and n >= 2")?;
    let m = m_of(n as i64, 0) as usize;
    let mut form = Form::new(n + 2, field);
    for i in 0..m {
        form.quartic_block(i, m + 1 + i);
    }
    form.power_term(2 * m + 1, m, 4);
    let mut dr = draft(form, n, 0, 4);
    dr.counts.inner = Some(4 * m + 1);
    dr.counts.r = Some(m as i64);
    dr.counts.mu = Some(m as i64 - 1);
    dr.flags = sing_flags(0, "the point e_(2m+1)");
    dr.equality = Some(Equality::Inner);
    Ok(dr)
}

fn i3(n: usize, field: &FieldDesc) -> Result<Draft> {
    require(n >= 3 && n % 2 == 1, "I-3 needs n odd and n >= 3")?;
    let m = m_of(n as i64, 1) as usize;
    let mut form = Form::new(n + 2, field);
    for i in 0..=m - 2 {
        form.quartic_block(i, m - 1 + i);
    }
    let (u, v, w) = (n - 1, n, n + 1);
    form.add(&form.x(u).pow(2) * &(&form.x(v).pow(2) + &form.x(w).pow(2)));
    let mut dr = draft(form, n, 1, 4);
    dr.counts.inner = Some(4 * (m - 1));
    dr.counts.r = Some(m as i64 - 2);
    dr.counts.mu = Some(m as i64 - 2);
    dr.flags = sing_flags(1, format!("contains the line X0 = ... = X{} = 0", n - 1));
    dr.equality = Some(Equality::Inner);
    dr.representative = Some(format!("G = X{u}^2*(X{v}^2 + X{w}^2)"));
    Ok(dr)
}

fn i4i(n: usize, field: &FieldDesc) -> Result<Draft> {
    require(
        n >= 4 && n.is_multiple_of(2),
        "I-4i needs s = 2, n even and n >= 4",
    )?;
    let m = m_of(n as i64, 2) as usize;
    let mut form = Form::new(n + 2, field);
    for i in 0..=m - 3 {
        form.quartic_block(i, m - 2 + i);
    }
    let u = n - 2;
    let rest = (u + 1..=n + 1).fold(MultiPoly::zero(n + 2, field), |acc, j| {
        &acc + &form.x(j).pow(2)
    });
    form.add(&form.x(u).pow(2) * &rest);
    let mut dr = draft(form, n, 2, 4);
    dr.counts.inner = Some(4 * (m - 2));
    dr.counts.r = Some(m as i64 - 3);
    dr.counts.mu = Some(m as i64 - 3);
    dr.flags = sing_flags(2, format!("contains the plane X0 = ... = X{u} = 0"));
    dr.equality = Some(Equality::Inner);
    dr.representative = Some(format!(
        "G_1 = X{u}^2*({})",
        (u + 1..=n + 1)
            .map(|j| format!("X{j}^2"))
            .collect::<Vec<_>>()
            .join(" + ")
    ));
    Ok(dr)
}

/// The form shared by `I-4ii` and the second even example: quartic blocks, the
/// chain `X_(2m-s)(X_(m-s-1)^3 + ... + X_m^3)` and `X_(2m-s+1)^4`.
fn even_second(n: usize, s: i64, field: &FieldDesc) -> Result<(Draft, i64)> {
    require(s >= 1 && s <= n as i64 - 2, "needs 1 <= s <= n - 2")?;
    require((n as i64 + s) % 2 == 0, "needs n + s even")?;
    let m = m_of(n as i64, s);
    let (mu, s_) = (m as usize, s as usize);
    let mut form = Form::new(n + 2, field);
    for i in 0..(mu - s_ - 1) {
        form.quartic_block(i, mu + 1 + i);
    }
    let c = 2 * mu - s_;
    for j in mu - s_ - 1..=mu {
        form.power_term(c, j, 4);
    }
    form.pure_power(c + 1, 4);
    let mut dr = draft(form, n, s, 4);
    dr.counts.inner = Some((4 * (m - s - 1) + (s + 2)) as usize);
    dr.counts.r = Some(m);
    dr.counts.mu = Some(m - s - 2);
    dr.flags = sing_flags(s, format!("dimension {s}"));
    Ok((dr, m))
}

fn i4ii(n: usize, s: i64, field: &FieldDesc) -> Result<Draft> {
    require(s >= 2, "I-4ii needs s >= 2")?;
    let (mut dr, m) = even_second(n, s, field)?;
    dr.equality = Some(Equality::Inner);
    dr.representative = Some(format!("A_i = X{}, G_2 = X{}^4", 2 * m - s, n + 1));
    Ok(dr)
}

fn even_i(n: usize, s: i64, field: &FieldDesc) -> Result<Draft> {
    require(
        s >= 1 && s <= n as i64 - 2,
        "EX-EVEN-i needs 1 <= s <= n - 2",
    )?;
    require((n as i64 + s) % 2 == 0, "EX-EVEN-i needs n + s even")?;
    let m = m_of(n as i64, s);
    let (mu, s_) = (m as usize, s as usize);
    let mut form = Form::new(n + 2, field);
    for i in 0..(mu - s_ - 1) {
        form.quartic_block(i, mu + 1 + i);
    }
    let c = 2 * mu - s_;
    form.power_term(c, mu - s_ - 1, 4);
    form.power_term(c + 1, mu - s_, 4);
    for j in mu - s_ + 1..=mu {
        form.power_term(c, j, 4);
    }
    let mut dr = draft(form, n, s, 4);
    dr.counts.inner = Some((4 * (m - s - 1) + (s + 2)) as usize);
    dr.counts.r = Some(m);
    dr.counts.t = Some(m - s);
    dr.counts.mu = Some(m - s - 2);
    dr.flags = sing_flags(s, format!("dimension {s}"));
    Ok(dr)
}

fn even_ii(n: usize, s: i64, field: &FieldDesc) -> Result<Draft> {
    let (mut dr, m) = even_second(n, s, field)?;
    dr.counts.t = Some(m - s - 1);
    Ok(dr)
}

fn ii(n: usize, s: i64, d: u32, field: &FieldDesc) -> Result<Draft> {
    require(d >= 5, "II needs d >= 5")?;
    require(s >= -1 && s <= n as i64 - 2, "II needs -1 <= s <= n - 2")?;
    let m = m_of(n as i64, s);
    let (mu, c) = (m as usize, (2 * m - s) as usize);
    let mut form = Form::new(n + 2, field);
    for i in 0..((m - s) as usize) {
        form.power_term(mu + 1 + i, i, d);
    }
    for j in (m - s) as usize..=mu {
        form.power_term(c, j, d);
    }
    for j in mu + 1..=n + 1 {
        form.pure_power(j, d);
    }
    let mut dr = draft(form, n, s, d);
    dr.counts.inner = Some(mu + 1);
    dr.counts.r = Some(m);
    dr.counts.mu = Some(-1);
    dr.equality = Some(Equality::Inner);
    let g = (mu + 1..=n + 1)
        .map(|j| format!("X{j}^{d}"))
        .collect::<Vec<_>>()
        .join(" + ");
    dr.representative = Some(if s >= 0 {
        format!("A_i = X{c}, G = {g}")
    } else {
        format!("G = {g}")
    });
    if s >= 0 {
        dr.flags = sing_flags(s, format!("dimension {s}"));
    }
    Ok(dr)
}

fn t21(n: usize, d: u32, field: &FieldDesc) -> Result<Draft> {
    require(d >= 4, "T2-1 needs d >= 4")?;
    let mut form = Form::new(n + 2, field);
    for i in 0..n + 2 {
        form.pure_power(i, d);
        form.claim(
            form.coordinate(i),
            PointKind::Outer,
            GroupDescriptor::Cyclic { order: d as u64 },
        );
    }
    let mut dr = draft(form, n, -1, d);
    dr.counts.outer = Some(n + 2);
    dr.equality = Some(Equality::Outer);
    Ok(dr)
}

fn t22(n: usize, s: i64, d: u32, field: &FieldDesc) -> Result<Draft> {
    require(d >= 4, "T2-2 needs d >= 4")?;
    require(s >= 0 && s <= n as i64 - 2, "T2-2 needs 0 <= s <= n - 2")?;
    let k = n - s as usize;
    let mut form = Form::new(n + 2, field);
    for i in 0..k {
        form.pure_power(i, d);
        form.claim(
            form.coordinate(i),
            PointKind::Outer,
            GroupDescriptor::Cyclic { order: d as u64 },
        );
    }
    let rest = (k + 1..=n + 1).fold(MultiPoly::zero(n + 2, field), |acc, j| {
        &acc + &form.x(j).pow(d - 2)
    });
    form.add(&form.x(k).pow(2) * &rest);
    let mut dr = draft(form, n, s, d);
    dr.counts.outer = Some(k);
    dr.flags = sing_flags(s, format!("contains X0 = ... = X{k} = 0, of dimension {s}"));
    dr.equality = Some(Equality::Outer);
    dr.representative = Some(format!(
        "G = X{k}^2*({})",
        (k + 1..=n + 1)
            .map(|j| format!("X{j}^{}", d - 2))
            .collect::<Vec<_>>()
            .join(" + ")
    ));
    Ok(dr)
}

/// `count` distinct nonzero elements of a finite field, drawn with `seed`.
fn nonzero_sample(field: &FieldDesc, count: usize, seed: u64) -> Vec<Scalar> {
    let q = field.order().unwrap();
    let mut idx: Vec<u64> = (1..q).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    idx.shuffle(&mut rng);
    let mut out: Vec<Scalar> = idx
        .into_iter()
        .take(count)
        .map(|i| field.element(i))
        .collect();
    out.sort();
    out
}

const XYZW: [&str; 4] = ["X", "Y", "Z", "W"];

fn char_p(field: &FieldDesc, id: &str) -> Result<u64> {
    let p = field.characteristic();
    require(
        p > 0,
        format!(
            "{id} is a positive-characteristic instance; got {}",
            field.name()
        ),
    )?;
    Ok(p)
}

fn ex1(field: &FieldDesc, samples: usize, seed: u64) -> Result<Draft> {
    let p = char_p(field, "EX1")?;
    let pu = p as u32;
    let mut form = Form::new(4, field);
    let (x, y, z, w) = (form.x(0), form.x(1), form.x(2), form.x(3));
    form.add(&z * &w.pow(pu));
    form.add(-&(&x.pow(pu) * &w));
    form.add(-&y.pow(pu + 1));
    let group = group_descriptor(p, pu + 1, 1)?;
    let pts = nonzero_sample(field, samples, seed)
        .into_iter()
        .map(|a| ProjPoint::new(vec![field.one(), field.zero(), a, field.zero()]).unwrap())
        .collect();
    let mut dr = draft(form, 2, 0, pu + 1);
    dr.vars = XYZW.iter().map(|s| s.to_string()).collect();
    dr.families.push(ClaimedFamily {
        description: "(1:0:a:0), a != 0: the line Y = W = 0 without (0:0:1:0) and (1:0:0:0)".into(),
        kind: PointKind::Inner,
        group,
        samples: pts,
    });
    dr.flags = ClaimedFlags {
        is_cone: false,
        vertex_dim: -1,
        sing_dim: 0,
        sing_description: "the point (0:0:1:0)".into(),
        sing_support: Some(vec![ProjPoint::coordinate(4, 2, field)]),
    };
    dr.title_suffix = Some(format!("p = {p}"));
    Ok(dr)
}

fn ex2(field: &FieldDesc, samples: usize, seed: u64) -> Result<Draft> {
    let p = char_p(field, "EX2")?;
    let pu = p as u32;
    let q2 = pu * pu;
    let mut form = Form::new(4, field);
    let (x, y, z, w) = (form.x(0), form.x(1), form.x(2), form.x(3));
    form.add(&z * &w.pow(q2 - 1));
    form.add(-&(&x.pow(pu) * &w.pow(q2 - pu)));
    form.add(-&y.pow(q2));
    let group = group_descriptor(p, q2, 0)?;
    let bs = nonzero_sample(field, samples, seed);
    let as_ = nonzero_sample(field, samples, seed.wrapping_add(1));
    let pts = bs
        .into_iter()
        .zip(as_)
        .map(|(b, a)| ProjPoint::new(vec![field.one(), b, a, field.zero()]).unwrap())
        .collect();
    let q = field.order().unwrap();
    let support = (q < 32).then(|| {
        let mut v: Vec<ProjPoint> = field
            .elements()
            .map(|c| ProjPoint::new(vec![field.one(), field.zero(), c, field.zero()]).unwrap())
            .collect();
        v.push(ProjPoint::coordinate(4, 2, field));
        v.sort();
        v
    });
    let mut dr = draft(form, 2, 1, q2);
    dr.vars = XYZW.iter().map(|s| s.to_string()).collect();
    dr.families.push(ClaimedFamily {
        description: "(1:b:a:0), a, b != 0: points of W = 0 off the lines Y = W = 0 and Z = W = 0"
            .into(),
        kind: PointKind::Outer,
        group,
        samples: pts,
    });
    dr.flags = ClaimedFlags {
        is_cone: false,
        vertex_dim: -1,
        sing_dim: 1,
        sing_description: "the line Y = W = 0".into(),
        sing_support: support,
    };
    dr.title_suffix = Some(format!("p = {p}"));
    Ok(dr)
}

fn cone_i0(n: usize, k: usize, field: &FieldDesc) -> Result<Draft> {
    require(k >= 1, "CONE-I0 needs at least one vertex coordinate")?;
    let base = i0(n, field)?;
    let nv = n + 2 + k;
    let map: Vec<usize> = (0..n + 2).collect();
    let mut form = Form::new(nv, field);
    form.f = base.form.f.remap_vars(nv, &map);
    let lift = |p: &ProjPoint| {
        let mut c = p.coords().to_vec();
        c.resize(nv, field.zero());
        ProjPoint::new(c).unwrap()
    };
    form.points = base
        .form
        .points
        .iter()
        .map(|cp| ClaimedPoint {
            point: lift(&cp.point),
            kind: cp.kind,
            group: cp.group,
        })
        .collect();
    let samples = form
        .points
        .iter()
        .take(4)
        .enumerate()
        .map(|(j, cp)| {
            let mut c = cp.point.coords().to_vec();
            for (i, v) in c.iter_mut().enumerate().skip(n + 2) {
                *v = field.from_i64((j + i) as i64 % 5 + 1);
            }
            ProjPoint::new(c).unwrap()
        })
        .collect();
    let mut dr = draft(form, n + k, k as i64 - 1, 4);
    dr.params.vertex = Some(k);
    dr.families.push(ClaimedFamily {
        description: format!(
            "joins of the I-0 Galois points with the vertex space X0 = ... = X{} = 0, minus the vertex",
            n + 1
        ),
        kind: PointKind::Inner,
        group: GroupDescriptor::Cyclic { order: 3 },
        samples,
    });
    dr.flags = ClaimedFlags {
        is_cone: true,
        vertex_dim: k as i64 - 1,
        sing_dim: k as i64 - 1,
        sing_description: "the vertex space".into(),
        sing_support: None,
    };
    dr.notes.push(format!("base: I-0 with n = {n}"));
    Ok(dr)
}

pub fn build(id: &str, params: &Params, field: &FieldDesc) -> Result<CatalogInstance> {
    let (n0, s0, d0) = defaults(id)?;
    let n = params.n.unwrap_or(n0);
    let s = params.s.unwrap_or(s0);
    let d = params.d.unwrap_or(d0);
    let samples = params.samples.unwrap_or(5);
    let seed = params.seed.unwrap_or(0);
    if !matches!(id, "EX1" | "EX2") {
        require_char0(field, id)?;
    }
    let fixed_d = |want: u32| require(d == want, format!("{id} has degree {want}"));
    let fixed_s = |want: i64| require(s == want, format!("{id} has s = {want}"));
    let dr = match id {
        "I-0" => {
            fixed_d(4)?;
            fixed_s(-1)?;
            i0(n, field)?
        }
        "I-1" => {
            fixed_d(4)?;
            i1(n, s, params.a.unwrap_or(0), field)?
        }
        "I-2" => {
            fixed_d(4)?;
            fixed_s(0)?;
            i2(n, field)?
        }
        "I-3" => {
            fixed_d(4)?;
            fixed_s(1)?;
            i3(n, field)?
        }
        "I-4i" => {
            fixed_d(4)?;
            fixed_s(2)?;
            i4i(n, field)?
        }
        "I-4ii" => {
            fixed_d(4)?;
            i4ii(n, s, field)?
        }
        "II" => ii(n, s, d, field)?,
        "T2-1" => {
            fixed_s(-1)?;
            t21(n, d, field)?
        }
        "T2-2" => t22(n, s, d, field)?,
        "EX-EVEN-i" => {
            fixed_d(4)?;
            even_i(n, s, field)?
        }
        "EX-EVEN-ii" => {
            fixed_d(4)?;
            even_ii(n, s, field)?
        }
        "EX1" => ex1(field, samples, seed)?,
        "EX2" => ex2(field, samples, seed)?,
        "CONE-I0" => {
            fixed_d(4)?;
            cone_i0(n, params.vertex.unwrap_or(1), field)?
        }
        _ => return unknown_id(id),
    };
    finish(id, dr)
}

fn finish(id: &str, mut dr: Draft) -> Result<CatalogInstance> {
    let form = dr.form;
    if form.used_blocks {
        dr.notes.extend(form.missing_cube_roots());
    }
    let equation = render(&form.f, &dr.vars)?;
    let irreducible = Flag::yes("irreducible catalog form");
    let hypersurface = Hypersurface::new(form.f)?.with_irreducible(irreducible);
    let mut title = title(id).to_string();
    if let Some(sfx) = dr.title_suffix {
        title = format!("{title}, {sfx}");
    }
    let mut points = form.points;
    points.sort_by(|a, b| a.point.cmp(&b.point));
    points.dedup_by(|a, b| a.point == b.point);
    Ok(CatalogInstance {
        id: id.to_string(),
        title,
        equation,
        vars: dr.vars,
        field: form.field.name(),
        params: dr.params,
        hypersurface,
        claimed_points: points,
        claimed_families: dr.families,
        claimed_counts: dr.counts,
        claimed_flags: dr.flags,
        equality: dr.equality,
        representative: dr.representative,
        notes: dr.notes,
    })
}

#[cfg(test)]
mod tests;
