use std::fs;

use galois_locus::catalog::{self, Params, VerifyOptions};
use galois_locus::conelib::{cone_decompose, vertex_space};
use galois_locus::fermat;
use galois_locus::galois0::{check_condition_1m, find_galois_on_line, LineScan};
use galois_locus::galoisp::{certify, RootSource};
use galois_locus::polyparse::render;
use galois_locus::projgeom::{ProjPoint, ProjTransform};
use galois_locus::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::input::{self, Input};
use crate::{CatalogArgs, CatalogCommand, Cli, Command};

pub struct Output {
    pub stdout: String,
    pub failed: bool,
}

#[derive(Serialize)]
struct Tagged<'a, T: Serialize> {
    schema: u32,
    #[serde(flatten)]
    body: &'a T,
}

fn json<T: Serialize>(body: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Tagged { schema: 1, body })
        .map_err(|e| Error::Precondition(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn ok(stdout: String) -> Result<Output> {
    Ok(Output {
        stdout,
        failed: false,
    })
}

#[derive(Serialize)]
struct Described<'a, T: Serialize> {
    field: String,
    equation: String,
    #[serde(flatten)]
    body: &'a T,
}

fn described<'a, T: Serialize>(inp: &Input, body: &'a T) -> Result<Described<'a, T>> {
    Ok(Described {
        field: inp.x.field().name(),
        equation: render(inp.x.poly(), &inp.vars)?,
        body,
    })
}

#[derive(Serialize)]
struct ConeOutput {
    is_cone: bool,
    vertex_dim: i64,
    #[serde(rename = "M2_basis")]
    m2_basis: Vec<ProjPoint>,
    #[serde(rename = "Y_poly")]
    y_poly: Option<String>,
    transform: Option<ProjTransform>,
}

#[derive(Serialize)]
struct Lines {
    lines: Vec<LineScan>,
}

#[derive(Serialize)]
struct Entries {
    entries: Vec<catalog::CatalogEntry>,
}

pub fn run(cli: &Cli) -> Result<Output> {
    let seed = cli.seed;
    match &cli.command {
        Command::Analyze { poly, point } => {
            let inp = input::load(poly, seed)?;
            let p = input::point(point.as_deref(), &inp)?;
            let v = check_condition_1m(&inp.x, &p)?;
            ok(json(&described(&inp, &v)?)?)
        }
        Command::Certify {
            poly,
            point,
            recipe,
            roots,
            trials,
            ext,
        } => {
            let inp = input::load(poly, seed)?;
            let p = input::point(point.as_deref(), &inp)?;
            let source = if !roots.is_empty() {
                RootSource::Explicit(roots.clone())
            } else {
                match recipe.as_str() {
                    "auto" | "additive" | "kummer" | "fermat-inner" | "fermat-outer" => {
                        RootSource::parse(recipe)?
                    }
                    other => return Err(Error::Precondition(format!("unknown recipe {other:?}"))),
                }
            };
            let r = certify(&inp.x, &p, &source, *trials, *ext, seed)?;
            ok(json(&described(&inp, &r)?)?)
        }
        Command::ScanFermat { n, q, ext, csv } => scan_fermat(*n, *q, *ext, csv.as_deref(), seed),
        Command::Cone { poly } => {
            let inp = input::load(poly, seed)?;
            let vertex = vertex_space(&inp.x)?;
            let dec = cone_decompose(&inp.x)?;
            let y_poly = match &dec {
                Some(d) => {
                    let names: Vec<String> = (0..d.base.nvars()).map(|i| format!("Y{i}")).collect();
                    Some(render(d.base.poly(), &names)?)
                }
                None => None,
            };
            let out = ConeOutput {
                is_cone: dec.is_some(),
                vertex_dim: vertex.len() as i64 - 1,
                m2_basis: vertex,
                y_poly,
                transform: dec.map(|d| d.transform),
            };
            ok(json(&described(&inp, &out)?)?)
        }
        Command::Section {
            poly,
            point,
            hyperplane,
            count,
        } => {
            let inp = input::load(poly, seed)?;
            let p = input::point(point.as_deref(), &inp)?;
            let opts = VerifyOptions {
                seed,
                ..VerifyOptions::default()
            };
            match hyperplane {
                Some(h) => {
                    let h = input::hyperplane(h, inp.x.field())?;
                    let (_, group, _) = catalog::judge(&inp.x, &p, &opts)?;
                    let rec = catalog::section_at(&inp.x, &p, &h, group.as_ref(), seed, &opts)?;
                    Ok(Output {
                        failed: !(rec.star.passed() && rec.group_preserved),
                        stdout: json(&described(&inp, &rec)?)?,
                    })
                }
                None => {
                    let sweep = catalog::section_preservation(&inp.x, &p, *count, &opts)?;
                    Ok(Output {
                        failed: sweep.records.len() < *count
                            || sweep.records.iter().any(|r| !r.group_preserved),
                        stdout: json(&described(&inp, &sweep)?)?,
                    })
                }
            }
        }
        Command::LineScan { poly, a, b } => {
            let inp = input::load(poly, seed)?;
            let pairs: Vec<(ProjPoint, ProjPoint)> = match (a, b) {
                (Some(a), Some(b)) => {
                    vec![(input::point(Some(a), &inp)?, input::point(Some(b), &inp)?)]
                }
                _ => {
                    let n = inp.x.nvars();
                    let k = inp.x.field();
                    (0..n)
                        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                        .map(|(i, j)| {
                            (
                                ProjPoint::coordinate(n, i, k),
                                ProjPoint::coordinate(n, j, k),
                            )
                        })
                        .collect()
                }
            };
            let lines = pairs
                .par_iter()
                .map(|(a, b)| find_galois_on_line(&inp.x, a, b))
                .collect::<Result<Vec<_>>>()?;
            ok(json(&described(&inp, &Lines { lines })?)?)
        }
        Command::Catalog { command } => run_catalog(command, seed),
    }
}

fn scan_fermat(
    n: usize,
    q: u64,
    ext: u32,
    csv_path: Option<&std::path::Path>,
    seed: u64,
) -> Result<Output> {
    let report = fermat::scan(n, q, ext, seed)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Precondition(format!("csv: {e}"));
    w.write_record(["point", "rational", "verdict", "case"])
        .map_err(io)?;
    for row in &report.rows {
        w.write_record([
            row.point.to_string(),
            row.rational.to_string(),
            row.verdict.to_string(),
            row.case.to_string(),
        ])
        .map_err(io)?;
    }
    let table = String::from_utf8(
        w.into_inner()
            .map_err(|e| Error::Precondition(e.to_string()))?,
    )
    .expect("csv output is utf-8");
    let failed = !report.mismatches.is_empty();
    let summary = json(&report)?;
    let stdout = match csv_path {
        Some(path) => {
            fs::write(path, table)
                .map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
            summary
        }
        None => {
            eprint!("{summary}");
            table
        }
    };
    Ok(Output { stdout, failed })
}

fn params(args: &CatalogArgs, seed: u64) -> Params {
    Params {
        n: args.n,
        s: args.s,
        d: args.d,
        a: args.a,
        vertex: args.vertex,
        samples: args.samples,
        seed: Some(seed),
    }
}

fn instance(args: &CatalogArgs, seed: u64) -> Result<catalog::CatalogInstance> {
    let params = params(args, seed);
    let spec = match &args.field {
        Some(f) => f.clone(),
        None => catalog::default_field(&args.id, &params)?,
    };
    let field = input::field(&spec, args.modulus.as_deref())?;
    catalog::build(&args.id, &params, &field)
}

fn run_catalog(command: &CatalogCommand, seed: u64) -> Result<Output> {
    match command {
        CatalogCommand::List => ok(json(&Entries {
            entries: catalog::list(),
        })?),
        CatalogCommand::Build(args) => ok(json(&instance(args, seed)?)?),
        CatalogCommand::Verify { args, trials, ext } => {
            let inst = instance(args, seed)?;
            let opts = VerifyOptions {
                trials: *trials,
                ext: *ext,
                seed,
                ..VerifyOptions::default()
            };
            let report = catalog::verify(&inst, &opts);
            let mut stdout = serde_json::to_string_pretty(&report)
                .map_err(|e| Error::Precondition(format!("serialization failed: {e}")))?;
            stdout.push('\n');
            Ok(Output {
                stdout,
                failed: !report.passed,
            })
        }
    }
}
