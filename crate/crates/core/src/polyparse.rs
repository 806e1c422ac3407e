//! Polynomial expression language: parser and canonical renderer.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" exponent)?
//! exponent := INT ("^" exponent)?
//! atom   := INT | IDENT | "(" expr ")"
//! ```
//!
//! `zeta` is the generator of `Q(zeta N)` and `g` the generator of `GF(p^k)`;
//! variable names shadow both. Division is allowed only by nonzero constants.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::field::{FieldDesc, Scalar};
use crate::multipoly::MultiPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    Juxtaposition,
    UnknownIdentifier(String),
    ExponentOverflow,
    NonIntegerExponent,
    InvalidScalar(String),
    NonConstantDivisor,
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Lexical(c) => write!(f, "unexpected character {c:?}"),
            Self::UnexpectedToken(t) => write!(f, "unexpected token {t:?}"),
            Self::UnexpectedEnd => write!(f, "unexpected end of input"),
            Self::Juxtaposition => {
                write!(f, "missing operator (juxtaposition is not multiplication)")
            }
            Self::UnknownIdentifier(s) => write!(f, "unknown identifier {s:?}"),
            Self::ExponentOverflow => write!(f, "exponent exceeds 2^31"),
            Self::NonIntegerExponent => {
                write!(f, "exponent must be a non-negative integer literal")
            }
            Self::InvalidScalar(s) => write!(f, "invalid scalar: {s}"),
            Self::NonConstantDivisor => write!(f, "divisor must be a nonzero constant"),
        }
    }
}

/// A parse failure at a character offset (0-based) in the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {pos}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

fn err<T>(pos: usize, kind: ParseErrorKind) -> std::result::Result<T, ParseError> {
    Err(ParseError { pos, kind })
}

/// Text, variable names and field spec of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolySource {
    pub text: String,
    pub variable_names: Vec<String>,
    pub field_spec: String,
}

/// JSON envelope accepted by the command-line tool.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyEnvelope {
    pub field: String,
    pub vars: Vec<String>,
    pub poly: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Int(n) => n.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self, Tok::Int(_) | Tok::Ident(_) | Tok::LParen)
    }
}

fn lex(text: &str) -> std::result::Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((start, Tok::Int(s.parse().unwrap())));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => return err(start, ParseErrorKind::Lexical(other)),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
    field: &'a FieldDesc,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> PResult<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let d = self.unary()?;
                    if !d.is_constant() {
                        return err(at, ParseErrorKind::NonConstantDivisor);
                    }
                    let inv = d.constant_term().inv().map_err(|_| ParseError {
                        pos: at,
                        kind: ParseErrorKind::InvalidScalar(format!(
                            "divisor is zero in {}",
                            self.field.name()
                        )),
                    })?;
                    acc = acc.scale(&inv);
                }
                Some(t) if t.starts_atom() => {
                    return err(self.here(), ParseErrorKind::Juxtaposition)
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<MultiPoly> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> PResult<MultiPoly> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let e = self.exponent()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> PResult<u32> {
        let at = self.here();
        let base = match self.toks.get(self.pos) {
            Some((_, Tok::Int(n))) => n.clone(),
            Some(_) => return err(at, ParseErrorKind::NonIntegerExponent),
            None => return err(at, ParseErrorKind::UnexpectedEnd),
        };
        self.pos += 1;
        let limit = BigInt::from(1u64 << 31);
        if base > limit {
            return err(at, ParseErrorKind::ExponentOverflow);
        }
        let mut value: u64 = base.try_into().unwrap();
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let e = self.exponent()?;
            let mut acc: u64 = 1;
            for _ in 0..e {
                acc = acc.saturating_mul(value);
                if acc > 1 << 31 {
                    return err(at, ParseErrorKind::ExponentOverflow);
                }
            }
            value = acc;
        }
        if value > 1 << 31 {
            return err(at, ParseErrorKind::ExponentOverflow);
        }
        Ok(value as u32)
    }

    fn atom(&mut self) -> PResult<MultiPoly> {
        let at = self.here();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return err(at, ParseErrorKind::UnexpectedEnd);
        };
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(MultiPoly::constant(
                self.nvars(),
                self.field.from_bigint(&n),
            )),
            Tok::Ident(name) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(MultiPoly::var(self.nvars(), i, self.field));
                }
                let is_gen = match name.as_str() {
                    "zeta" => self.field.cyclotomic_index().is_some_and(|n| n > 1),
                    "g" => self.field.is_finite() && self.field.extension_degree() > 1,
                    _ => false,
                };
                if is_gen {
                    Ok(MultiPoly::constant(self.nvars(), self.field.generator()))
                } else {
                    err(at, ParseErrorKind::UnknownIdentifier(name))
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                match self.toks.get(self.pos) {
                    Some((_, Tok::RParen)) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    Some((p, t)) => err(*p, ParseErrorKind::UnexpectedToken(t.text())),
                    None => err(self.end, ParseErrorKind::UnexpectedEnd),
                }
            }
            other => err(at, ParseErrorKind::UnexpectedToken(other.text())),
        }
    }
}

/// Parses `text` as a polynomial in `vars` over `field`.
pub fn parse_str<S: AsRef<str>>(text: &str, vars: &[S], field: &FieldDesc) -> Result<MultiPoly> {
    let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
    validate_names(&vars)?;
    let toks = lex(text)?;
    let end = text.chars().count();
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        vars: &vars,
        field,
    };
    let f = p.expr()?;
    if let Some((at, t)) = p.toks.get(p.pos) {
        let kind = if t.starts_atom() {
            ParseErrorKind::Juxtaposition
        } else {
            ParseErrorKind::UnexpectedToken(t.text())
        };
        return Err(ParseError { pos: *at, kind }.into());
    }
    Ok(f)
}

fn validate_names(vars: &[String]) -> Result<()> {
    for (i, v) in vars.iter().enumerate() {
        let ok = v
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(Error::Precondition(format!("invalid variable name {v:?}")));
        }
        if vars[..i].contains(v) {
            return Err(Error::Precondition(format!(
                "duplicate variable name {v:?}"
            )));
        }
    }
    Ok(())
}

pub fn parse(src: &PolySource) -> Result<MultiPoly> {
    let field = FieldDesc::from_spec(&src.field_spec, None)?;
    parse_str(&src.text, &src.variable_names, &field)
}

/// Parses a JSON envelope `{"field": ..., "vars": [...], "poly": ...}`.
pub fn parse_envelope(json: &str) -> Result<(FieldDesc, Vec<String>, MultiPoly)> {
    let env: PolyEnvelope = serde_json::from_str(json)
        .map_err(|e| Error::Precondition(format!("malformed polynomial envelope: {e}")))?;
    let field = FieldDesc::from_spec(&env.field, env.modulus.as_deref())?;
    let f = parse_str(&env.poly, &env.vars, &field)?;
    Ok((field, env.vars, f))
}

pub fn envelope(f: &MultiPoly, names: &[String]) -> Result<PolyEnvelope> {
    let modulus = f
        .field()
        .finite_data()
        .and_then(|ff| (ff.k > 1).then(|| ff.modulus.clone()));
    Ok(PolyEnvelope {
        field: f.field().name(),
        vars: names.to_vec(),
        poly: render(f, names)?,
        modulus,
    })
}

fn monomial_text(exps: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, n)| {
            if *e == 1 {
                n.clone()
            } else {
                format!("{n}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

fn term_text(c: &Scalar, mono: &str) -> String {
    if c.term_count() > 1 {
        return if mono.is_empty() {
            c.to_string()
        } else {
            format!("({c})*{mono}")
        };
    }
    let (neg, body) = c.signed_text();
    let sign = if neg { "-" } else { "" };
    match (mono.is_empty(), body == "1") {
        (true, _) => format!("{sign}{body}"),
        (false, true) => format!("{sign}{mono}"),
        (false, false) => format!("{sign}{body}*{mono}"),
    }
}

/// Canonical text: terms in descending graded-lex order.
pub fn render<S: AsRef<str>>(f: &MultiPoly, names: &[S]) -> Result<String> {
    if names.len() != f.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "{} names for {} variables",
            names.len(),
            f.nvars()
        )));
    }
    let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
    if f.is_zero() {
        return Ok("0".into());
    }
    let mut out = String::new();
    for (m, c) in f.terms() {
        let t = term_text(c, &monomial_text(&m.0, &names));
        if out.is_empty() {
            out = t;
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field_make;
    use crate::multipoly::Monomial;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q() -> FieldDesc {
        FieldDesc::rationals()
    }

    fn perr(text: &str, vars: &[&str], f: &FieldDesc) -> ParseError {
        match parse_str(text, vars, f) {
            Err(Error::Parse(e)) => e,
            other => panic!("expected parse error for {text:?}, got {other:?}"),
        }
    }

    #[test]
    fn parse_examples() {
        let vars = ["X0", "X1", "X2"];
        let f = parse_str("X1*X0^3 + X1^4 + X2^4", &vars, &q()).unwrap();
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.coeff(&Monomial(vec![3, 1, 0])), q().one());
        assert!(parse_str("0", &vars, &q()).unwrap().is_zero());

        let f2 = field_make(2, 1, 0).unwrap();
        let g = parse_str("Z*W^2 - X^2*W - Y^3", &["X", "Y", "Z", "W"], &f2).unwrap();
        assert_eq!(g.num_terms(), 3);
        assert_eq!(g.total_degree(), Some(3));
    }

    #[test]
    fn precedence() {
        let v = ["x", "y"];
        assert_eq!(
            parse_str("-x^2", &v, &q()).unwrap(),
            -parse_str("x*x", &v, &q()).unwrap()
        );
        assert_eq!(
            parse_str("2^3^2", &v, &q()).unwrap(),
            parse_str("512", &v, &q()).unwrap()
        );
        assert_eq!(
            parse_str("x - y - x", &v, &q()).unwrap(),
            parse_str("-y", &v, &q()).unwrap()
        );
        assert_eq!(
            parse_str("-1/2*x", &v, &q()).unwrap().to_string(),
            "-1/2*X0"
        );
        assert_eq!(
            parse_str("(x+y)^2", &v, &q()).unwrap(),
            parse_str("x^2 + 2*x*y + y^2", &v, &q()).unwrap()
        );
    }

    #[test]
    fn render_examples() {
        let v = ["X1", "X2"];
        assert_eq!(render(&MultiPoly::zero(2, &q()), &v).unwrap(), "0");
        assert_eq!(
            render(&parse_str("X1 + X1^4", &v, &q()).unwrap(), &v).unwrap(),
            "X1^4 + X1"
        );
        assert!(render(&MultiPoly::zero(2, &q()), &["a"]).is_err());
        let k = FieldDesc::cyclotomic(3);
        let f = parse_str("(zeta + 1)*X1 - zeta^2", &v, &k).unwrap();
        assert_eq!(render(&f, &v).unwrap(), "(zeta + 1)*X1 + zeta + 1");
        let f9 = field_make(3, 2, 0).unwrap();
        let f = parse_str("g*X1^2 - X2", &v, &f9).unwrap();
        assert_eq!(render(&f, &v).unwrap(), "g*X1^2 + 2*X2");
    }

    #[test]
    fn negative_corpus() {
        let v = ["x", "y"];
        let cases: Vec<(&str, usize)> = vec![
            ("(x + y", 6),
            ("x + y)", 5),
            ("2x", 1),
            ("x y", 2),
            ("x^1.5", 3),
            ("x^(1)", 2),
            ("x^y", 2),
            ("x + ", 4),
            ("x $ y", 2),
            ("z + 1", 0),
            ("x^4294967296", 2),
            ("x^2^40", 2),
            ("x/y", 2),
            ("x/0", 2),
            ("()", 1),
            ("* x", 0),
            ("(x)(y)", 3),
        ];
        for (text, pos) in cases {
            let e = perr(text, &v, &q());
            assert_eq!(e.pos, pos, "{text:?}: {e}");
        }
        assert_eq!(perr("2x", &v, &q()).kind, ParseErrorKind::Juxtaposition);
        assert_eq!(
            perr("x^4294967296", &v, &q()).kind,
            ParseErrorKind::ExponentOverflow
        );
        assert_eq!(
            perr("z", &v, &q()).kind,
            ParseErrorKind::UnknownIdentifier("z".into())
        );
        assert_eq!(
            perr("zeta", &v, &q()).kind,
            ParseErrorKind::UnknownIdentifier("zeta".into())
        );
        let f3 = field_make(3, 1, 0).unwrap();
        assert!(matches!(
            perr("x/3", &v, &f3).kind,
            ParseErrorKind::InvalidScalar(_)
        ));
    }

    #[test]
    fn variables_shadow_generators() {
        let f9 = field_make(3, 2, 0).unwrap();
        let f = parse_str("g^2", &["g"], &f9).unwrap();
        assert_eq!(f.total_degree(), Some(2));
    }

    #[test]
    fn envelope_roundtrip() {
        let json = r#"{"field": "GF(3^2)", "vars": ["X", "Y"], "poly": "g*X^3 + Y^3"}"#;
        let (field, vars, f) = parse_envelope(json).unwrap();
        assert_eq!(field.order(), Some(9));
        let env = envelope(&f, &vars).unwrap();
        let back = serde_json::to_string(&env).unwrap();
        let (_, _, f2) = parse_envelope(&back).unwrap();
        assert_eq!(f, f2);
        let src = PolySource {
            text: "X + 1".into(),
            variable_names: vec!["X".into()],
            field_spec: "Q(zeta 5)".into(),
        };
        assert_eq!(parse(&src).unwrap().num_terms(), 2);
    }

    fn arb_scalar(field: FieldDesc) -> BoxedStrategy<Scalar> {
        match field.order() {
            Some(q) => (0..q).prop_map(move |i| field.element(i)).boxed(),
            None => {
                let phi = field.extension_degree();
                proptest::collection::vec((-9i64..10, 1i64..5), phi)
                    .prop_map(move |v| {
                        Scalar::from_cyc_coeffs(
                            &field,
                            v.iter()
                                .map(|&(a, b)| BigRational::new(a.into(), b.into()))
                                .collect(),
                        )
                    })
                    .boxed()
            }
        }
    }

    fn arb_poly(field: FieldDesc) -> impl Strategy<Value = MultiPoly> {
        let f2 = field.clone();
        proptest::collection::vec(
            (proptest::collection::vec(0u32..5, 3), arb_scalar(field)),
            0..6,
        )
        .prop_map(move |ts| {
            MultiPoly::from_terms(3, &f2, ts.into_iter().map(|(e, c)| (Monomial(e), c)))
        })
    }

    fn roundtrip(f: &MultiPoly) -> bool {
        let names = ["A", "B1", "c_2"];
        let text = render(f, &names).unwrap();
        parse_str(&text, &names, f.field()).unwrap() == *f
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn roundtrip_rationals(f in arb_poly(FieldDesc::rationals())) {
            prop_assert!(roundtrip(&f));
        }
        #[test]
        fn roundtrip_cyclotomic(f in arb_poly(FieldDesc::cyclotomic(5))) {
            prop_assert!(roundtrip(&f));
        }
        #[test]
        fn roundtrip_gf27(f in arb_poly(field_make(3, 3, 0).unwrap())) {
            prop_assert!(roundtrip(&f));
        }
        #[test]
        fn roundtrip_gf2(f in arb_poly(field_make(2, 1, 0).unwrap())) {
            prop_assert!(roundtrip(&f));
        }
    }
}
