use std::fs;

use galois_locus::polyparse::{parse_str, PolyEnvelope};
use galois_locus::projgeom::{irreducibility_probe, Flag, Hyperplane, Hypersurface, ProjPoint};
use galois_locus::{Error, FieldDesc, Result, Scalar};
use serde::Deserialize;

use crate::PolyArgs;

#[derive(Deserialize)]
struct InputFile {
    #[serde(flatten)]
    envelope: PolyEnvelope,
    #[serde(default)]
    point: Option<String>,
}

pub struct Input {
    pub x: Hypersurface,
    pub vars: Vec<String>,
    pub point: Option<String>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

pub fn field(spec: &str, modulus: Option<&[u64]>) -> Result<FieldDesc> {
    FieldDesc::from_spec(spec, modulus)
}

/// The hypersurface named by `--input` or by `--field/--vars/--poly`, with an irreducibility probe attached.
pub fn load(args: &PolyArgs, seed: u64) -> Result<Input> {
    let (env, point) = match &args.input {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let file: InputFile = serde_json::from_str(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            (file.envelope, file.point)
        }
        None => {
            let (Some(field), Some(vars), Some(poly)) = (&args.field, &args.vars, &args.poly)
            else {
                return Err(usage("give --input or all of --field, --vars and --poly"));
            };
            let env = PolyEnvelope {
                field: field.clone(),
                vars: vars.clone(),
                poly: poly.clone(),
                modulus: None,
            };
            (env, None)
        }
    };
    let modulus = args.modulus.as_deref().or(env.modulus.as_deref());
    let k = field(&env.field, modulus)?;
    let f = parse_str(&env.poly, &env.vars, &k)?;
    let x = Hypersurface::new(f)?;
    let probe = irreducibility_probe(&x, 20, seed);
    let x = x.with_irreducible(Flag {
        verdict: probe.verdict,
        evidence: probe.evidence,
    });
    Ok(Input {
        x,
        vars: env.vars,
        point,
    })
}

pub fn point(flag: Option<&str>, input: &Input) -> Result<ProjPoint> {
    let text = flag
        .or(input.point.as_deref())
        .ok_or_else(|| usage("a point is required (--point or \"point\" in the input file)"))?;
    let p = ProjPoint::parse(text, input.x.field())?;
    if p.len() != input.x.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, hypersurface has {} variables",
            p.len(),
            input.x.nvars()
        )));
    }
    Ok(p)
}

pub fn hyperplane(text: &str, field: &FieldDesc) -> Result<Hyperplane> {
    let no_vars: [&str; 0] = [];
    let form = text
        .split(',')
        .map(|s| Ok(parse_str(s, &no_vars, field)?.constant_term()))
        .collect::<Result<Vec<Scalar>>>()?;
    Hyperplane::new(form)
}
