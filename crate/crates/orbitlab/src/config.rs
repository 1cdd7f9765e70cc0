//! Experiment configuration: a single JSON document, with defining forms
//! in a small textual polynomial grammar.
//!
//! Grammar: integer coefficients, variables `s,t` (two of them) or
//! `x0..xN`, operators `+ - * ^`, parentheses, forms separated by `|`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{Place, ProjPoint};
use crate::heights::SubschemeSpec;
use crate::maps::{certify_p1_morphism, DynamicalSystem, OrbitPoint, P1Morphism, ProductMap, RationalSelfMap};
use crate::poly::{BinForm, MultiPoly};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpecConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<StartConfig>,
    #[serde(default = "defaults::n_max")]
    pub n_max: usize,
    #[serde(default = "defaults::bit_budget")]
    pub bit_budget: u64,
    #[serde(default = "defaults::tail_window")]
    pub tail_window: usize,
    #[serde(default = "defaults::degree_cap")]
    pub degree_cap: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cocycle_n_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subscheme: Option<SubschemeConfig>,
    #[serde(default = "defaults::places")]
    pub places: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recursion: Option<RecursionConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<DensityConfig>,
    /// Degree-ratio profile mu_1 >= mu_2 >= ... for maps whose profile the
    /// artifact cannot derive; conclusions become conditional on it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile_mu: Option<Vec<f64>>,
    #[serde(default)]
    pub svg_log_y: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
}

mod defaults {
    pub fn n_max() -> usize {
        12
    }
    pub fn bit_budget() -> u64 {
        65_536
    }
    pub fn tail_window() -> usize {
        5
    }
    pub fn degree_cap() -> u64 {
        1024
    }
    pub fn places() -> Vec<String> {
        vec!["inf".into()]
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpecConfig {
    Single(String),
    Product { product: Vec<String> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordVal {
    Int(i64),
    Str(String),
}

impl CoordVal {
    fn to_bigint(&self) -> Result<BigInt, String> {
        match self {
            CoordVal::Int(v) => Ok(BigInt::from(*v)),
            CoordVal::Str(s) => s
                .parse::<BigInt>()
                .map_err(|e| format!("bad integer coordinate {s:?}: {e}")),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartConfig {
    Single(Vec<CoordVal>),
    Tuple(Vec<Vec<CoordVal>>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubschemeConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forms: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointConfig>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    pub coords: Vec<CoordVal>,
    #[serde(default = "defaults_mult")]
    pub mult: u32,
}

fn defaults_mult() -> u32 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecursionConfig {
    pub mu_l: f64,
    pub mu_l_plus_1: f64,
    pub m: usize,
    pub eta: f64,
    #[serde(default)]
    pub n0: usize,
    #[serde(default)]
    pub s: usize,
    #[serde(default = "defaults_floor")]
    pub violation_floor: f64,
}

fn defaults_floor() -> f64 {
    1e-6
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    pub horizon: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_grid: Option<Vec<usize>>,
    pub set: SetConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetConfig {
    MultiplesOf(u64),
    Squares,
    Explicit(Vec<usize>),
}

// ---- polynomial grammar ----------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

/// Variable universe of a form string: `s,t` onto indices 0,1 or `x0..xN`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarStyle {
    St,
    Indexed,
}

fn tokenize(input: &str, nvars_hint: Option<usize>) -> Result<(Vec<Token>, VarStyle, usize), String> {
    let mut toks = Vec::new();
    let mut style: Option<VarStyle> = None;
    let mut max_index = 0usize;
    let bytes: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Token::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                toks.push(Token::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Token::Star);
                i += 1;
            }
            '^' => {
                toks.push(Token::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Token::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Token::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = bytes[start..i].iter().collect();
                toks.push(Token::Int(lit.parse().expect("digits parse")));
            }
            's' | 't' => {
                match style {
                    Some(VarStyle::Indexed) => {
                        return Err(format!("variable {c} mixed with x-indexed variables"))
                    }
                    _ => style = Some(VarStyle::St),
                }
                toks.push(Token::Var(if c == 's' { 0 } else { 1 }));
                max_index = max_index.max(1);
                i += 1;
            }
            'x' => {
                match style {
                    Some(VarStyle::St) => {
                        return Err("variable x mixed with s,t variables".into())
                    }
                    _ => style = Some(VarStyle::Indexed),
                }
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err("x must carry an index, e.g. x0".into());
                }
                let idx: usize = bytes[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|e| format!("bad variable index: {e}"))?;
                max_index = max_index.max(idx);
                toks.push(Token::Var(idx));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    let style = style.unwrap_or(VarStyle::St);
    if let Some(hint) = nvars_hint {
        if max_index + 1 > hint {
            return Err(format!(
                "variable index {} out of range for {} coordinates",
                max_index, hint
            ));
        }
        max_index = hint - 1;
    }
    Ok((toks, style, max_index + 1))
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<MultiPoly, String> {
        let mut acc = if matches!(self.peek(), Some(Token::Minus)) {
            self.next();
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = acc.add(&rhs);
                }
                Some(Token::Minus) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, String> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.next();
            let rhs = self.factor()?;
            acc = acc.mul(&rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, String> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.next();
            match self.next() {
                Some(Token::Int(e)) => {
                    let e: u32 = e
                        .try_into()
                        .map_err(|_| "exponent out of range".to_string())?;
                    Ok(base.pow(e))
                }
                other => Err(format!("expected integer exponent after ^, found {other:?}")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, String> {
        match self.next().cloned() {
            Some(Token::Int(v)) => Ok(MultiPoly::constant(self.nvars, v)),
            Some(Token::Var(i)) => Ok(MultiPoly::variable(self.nvars, i)),
            Some(Token::Minus) => Ok(self.atom()?.neg()),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    other => Err(format!("expected ), found {other:?}")),
                }
            }
            other => Err(format!("expected a coefficient, variable, or (, found {other:?}")),
        }
    }
}

/// Parse one polynomial in `nvars` variables.
pub fn parse_polynomial(input: &str, nvars: usize) -> Result<MultiPoly, String> {
    let (toks, _, _) = tokenize(input, Some(nvars))?;
    let mut parser = Parser {
        toks: &toks,
        pos: 0,
        nvars,
    };
    let poly = parser.expr()?;
    if parser.pos != toks.len() {
        return Err(format!("trailing tokens in {input:?}"));
    }
    Ok(poly)
}

/// Parse a `|`-separated list of forms; the variable count is inferred
/// from the variables used across all forms.
pub fn parse_forms(input: &str) -> Result<Vec<MultiPoly>, String> {
    let pieces: Vec<&str> = input.split('|').collect();
    if pieces.iter().any(|p| p.trim().is_empty()) {
        return Err("empty form between separators".into());
    }
    // first pass to agree on the variable universe
    let mut nvars = 0usize;
    let mut style: Option<VarStyle> = None;
    for p in &pieces {
        let (_, st, nv) = tokenize(p, None)?;
        nvars = nvars.max(nv);
        match (style, st) {
            (None, s) => style = Some(s),
            (Some(a), b) if a != b => return Err("forms mix s,t with x-indexed variables".into()),
            _ => {}
        }
    }
    if style == Some(VarStyle::St) {
        nvars = 2;
    }
    pieces
        .iter()
        .map(|p| parse_polynomial(p, nvars))
        .collect()
}

/// Parsed binary form from a 2-variable polynomial.
pub fn to_binform(p: &MultiPoly) -> Result<BinForm, String> {
    if p.nvars() != 2 {
        return Err("binary form needs exactly the variables s,t".into());
    }
    let d = p
        .homogeneous_degree()
        .ok_or_else(|| format!("{p} is not homogeneous"))? as usize;
    let mut coeffs = vec![BigInt::from(0); d + 1];
    for (e, c) in p.terms() {
        coeffs[e[0] as usize] = c.clone();
    }
    Ok(BinForm::new(coeffs))
}

// ---- resolution into domain values -----------------------------------------

/// What went wrong with a config: grammar-level trouble parses as a
/// config error (exit code 2), semantic trouble as validation (exit 3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    Parse(String),
    Validation(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Parse(m) => write!(f, "{m}"),
            ConfigError::Validation(m) => write!(f, "{m}"),
        }
    }
}

fn parse_err(m: String) -> ConfigError {
    ConfigError::Parse(m)
}

fn valid_err(m: impl ToString) -> ConfigError {
    ConfigError::Validation(m.to_string())
}

/// Everything the runner needs, validated.
pub struct Resolved {
    pub system: Option<DynamicalSystem>,
    pub morphism: Option<P1Morphism>,
    pub product_degrees: Option<Vec<u64>>,
    pub start: Option<OrbitPoint>,
    pub subscheme: Option<SubschemeSpec>,
    pub places: Vec<Place>,
}

pub fn resolve(config: &ExperimentConfig) -> Result<Resolved, ConfigError> {
    let mut morphism = None;
    let mut product_degrees = None;
    let system = match &config.map {
        None => None,
        Some(MapSpecConfig::Single(src)) => {
            let forms = parse_forms(src).map_err(parse_err)?;
            let map = RationalSelfMap::new(forms.clone()).map_err(valid_err)?;
            if forms.len() == 2 {
                // a P^1 pair that certifies is remembered for the
                // fiber-side experiments
                let f = to_binform(&forms[0]).map_err(parse_err)?;
                let g = to_binform(&forms[1]).map_err(parse_err)?;
                if let Ok(m) = certify_p1_morphism(f, g) {
                    morphism = Some(m);
                }
            }
            Some(DynamicalSystem::Projective(map))
        }
        Some(MapSpecConfig::Product { product }) => {
            let mut factors = Vec::new();
            for src in product {
                let forms = parse_forms(src).map_err(parse_err)?;
                if forms.len() != 2 {
                    return Err(valid_err(format!(
                        "product factor {src:?} must have two forms"
                    )));
                }
                let f = to_binform(&forms[0]).map_err(parse_err)?;
                let g = to_binform(&forms[1]).map_err(parse_err)?;
                factors.push(certify_p1_morphism(f, g).map_err(valid_err)?);
            }
            product_degrees = Some(factors.iter().map(|f| f.degree() as u64).collect());
            Some(DynamicalSystem::Product(
                ProductMap::new(factors).map_err(valid_err)?,
            ))
        }
    };
    let start = match &config.start {
        None => None,
        Some(StartConfig::Single(coords)) => {
            let ints = coords
                .iter()
                .map(|c| c.to_bigint())
                .collect::<Result<Vec<_>, _>>()
                .map_err(parse_err)?;
            Some(OrbitPoint::Single(
                ProjPoint::normalize(&ints).map_err(valid_err)?,
            ))
        }
        Some(StartConfig::Tuple(tuple)) => {
            let mut pts = Vec::new();
            for coords in tuple {
                let ints = coords
                    .iter()
                    .map(|c| c.to_bigint())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(parse_err)?;
                pts.push(ProjPoint::normalize(&ints).map_err(valid_err)?);
            }
            Some(OrbitPoint::Tuple(pts))
        }
    };
    // shape agreement between the system and the start point
    match (&system, &start) {
        (Some(DynamicalSystem::Projective(map)), Some(OrbitPoint::Single(p))) => {
            if map.dim() != p.dim() {
                return Err(valid_err(format!(
                    "map acts on P^{} but the start point lives in P^{}",
                    map.dim(),
                    p.dim()
                )));
            }
        }
        (Some(DynamicalSystem::Product(map)), Some(OrbitPoint::Tuple(ps))) => {
            if map.factors().len() != ps.len() {
                return Err(valid_err(
                    "product map and start tuple have different lengths",
                ));
            }
            if ps.iter().any(|p| p.dim() != 1) {
                return Err(valid_err("product start points must lie on P^1"));
            }
        }
        (Some(DynamicalSystem::Projective(_)), Some(OrbitPoint::Tuple(_))) => {
            return Err(valid_err("a projective-space map needs a single start point"));
        }
        (Some(DynamicalSystem::Product(_)), Some(OrbitPoint::Single(_))) => {
            return Err(valid_err("a product map needs a tuple of start points"));
        }
        _ => {}
    }
    let subscheme = match &config.subscheme {
        None => None,
        Some(sc) => Some(resolve_subscheme(sc)?),
    };
    let mut places = Vec::new();
    for s in &config.places {
        if s == "inf" || s == "oo" {
            places.push(Place::Infinite);
        } else {
            let p: num_bigint::BigUint = s
                .parse()
                .map_err(|e| parse_err(format!("bad place {s:?}: {e}")))?;
            places.push(Place::finite(p).map_err(valid_err)?);
        }
    }
    if places.is_empty() {
        places.push(Place::Infinite);
    }
    Ok(Resolved {
        system,
        morphism,
        product_degrees,
        start,
        subscheme,
        places,
    })
}

fn resolve_subscheme(sc: &SubschemeConfig) -> Result<SubschemeSpec, ConfigError> {
    match (&sc.forms, &sc.points) {
        (Some(_), Some(_)) => Err(valid_err("subscheme: give forms or points, not both")),
        (None, None) => Err(valid_err("subscheme: give forms or points")),
        (Some(forms), None) => {
            let mut polys = Vec::new();
            let mut nvars = 0usize;
            for f in forms {
                let (_, _, nv) = tokenize(f, None).map_err(parse_err)?;
                nvars = nvars.max(nv);
            }
            for f in forms {
                polys.push(parse_polynomial(f, nvars).map_err(parse_err)?);
            }
            SubschemeSpec::from_forms(polys).map_err(valid_err)
        }
        (None, Some(points)) => {
            let mut pts = Vec::new();
            for p in points {
                let ints = p
                    .coords
                    .iter()
                    .map(|c| c.to_bigint())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(parse_err)?;
                pts.push((ProjPoint::normalize(&ints).map_err(valid_err)?, p.mult));
            }
            SubschemeSpec::from_points(pts).map_err(valid_err)
        }
    }
}
