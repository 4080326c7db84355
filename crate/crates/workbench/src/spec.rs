//! Spec files: a trinomial variety (or a hypersurface example) plus the
//! derivations, invariant, points and options the commands work on.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use trinomial_core::lnd::Derivation;
use trinomial_core::orbit::Point;
use trinomial_core::poly::{parse_polynomial, parse_var, Rational, RationalFunction, Scope, Var};
use trinomial_core::variety::{example_hypersurface, HypersurfaceExample, PresentedAlgebra, TrinomialData};

use crate::error::CliError;

const TOP_LEVEL_KEYS: [&str; 9] = ["type", "m", "blocks", "A", "derivations", "invariant", "options", "points", "example"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleParams {
    pub k: u32,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
    pub p: u32,
    pub r: Vec<u32>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Options {
    pub epsilon: Option<f64>,
    pub cap: Option<u32>,
    pub degree: Option<Vec<i64>>,
    pub max_image_degree: Option<u32>,
    /// Same-stratum pairs transported per closed stratum by `census`.
    pub spot_checks: Option<usize>,
}

impl Options {
    /// Values set in `other` win.
    pub fn overridden_by(&self, other: &Options) -> Options {
        Options {
            epsilon: other.epsilon.or(self.epsilon),
            cap: other.cap.or(self.cap),
            degree: other.degree.clone().or_else(|| self.degree.clone()),
            max_image_degree: other.max_image_degree.or(self.max_image_degree),
            spot_checks: other.spot_checks.or(self.spot_checks),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpecFile {
    /// Hex SHA-256 of the file bytes.
    pub digest: String,
    pub variety: Option<TrinomialData>,
    pub example: Option<(ExampleParams, HypersurfaceExample)>,
    pub derivations: BTreeMap<String, Derivation>,
    pub invariant: Option<RationalFunction>,
    pub points: Option<(Point, Point)>,
    pub options: Options,
}

impl SpecFile {
    pub fn data(&self) -> Result<&TrinomialData, CliError> {
        self.variety.as_ref().ok_or_else(|| CliError::MissingInput("this command needs a trinomial variety".into()))
    }

    /// The algebra the derivations live on: the example hypersurface when
    /// one is given, the trinomial variety otherwise.
    pub fn algebra(&self) -> Result<PresentedAlgebra, CliError> {
        if let Some((_, ex)) = &self.example {
            return Ok(ex.algebra.clone());
        }
        Ok(self.data()?.relations()?)
    }

    /// Named derivations, falling back to the example's own derivation.
    pub fn derivations_or_example(&self) -> Vec<(String, Derivation)> {
        if self.derivations.is_empty() {
            if let Some((_, ex)) = &self.example {
                return vec![("example".to_string(), ex.derivation.clone())];
            }
        }
        self.derivations.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub fn invariant_or_example(&self) -> Option<RationalFunction> {
        self.invariant.clone().or_else(|| self.example.as_ref().map(|(_, ex)| ex.invariant.clone()))
    }
}

pub fn parse_spec_file(path: &Path) -> Result<SpecFile, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_spec_bytes(&bytes)
}

pub fn parse_spec_bytes(bytes: &[u8]) -> Result<SpecFile, CliError> {
    let digest = hex_digest(bytes);
    let doc: Value = serde_json::from_slice(bytes)
        .map_err(|e| CliError::Json { line: e.line(), column: e.column(), message: e.to_string() })?;
    let obj = doc.as_object().ok_or_else(|| CliError::schema("", "spec must be a JSON object"))?;
    if let Some(key) = obj.keys().find(|k| !TOP_LEVEL_KEYS.contains(&k.as_str())) {
        return Err(CliError::schema(format!("/{key}"), "unknown key"));
    }

    let example = match obj.get("example") {
        Some(v) => {
            let params = parse_example(v)?;
            let ex = example_hypersurface(params.k, &params.b, &params.c, params.p, &params.r)?;
            Some((params, ex))
        }
        None => None,
    };
    let variety = if example.is_none() || obj.contains_key("type") { Some(parse_variety(obj)?) } else { None };

    let universe: BTreeSet<Var> = match (&example, &variety) {
        (Some((_, ex)), _) => ex.algebra.universe(),
        (None, Some(d)) => d.universe(),
        (None, None) => BTreeSet::new(),
    };
    let derivations = match obj.get("derivations") {
        Some(v) => parse_derivations(v, &universe)?,
        None => BTreeMap::new(),
    };
    let invariant = obj.get("invariant").map(|v| parse_invariant(v, &universe)).transpose()?;
    let points = obj.get("points").map(|v| parse_points(v, &universe)).transpose()?;
    let options = obj.get("options").map(parse_options).transpose()?.unwrap_or_default();
    Ok(SpecFile { digest, variety, example, derivations, invariant, points, options })
}

pub fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, base: &str) -> Result<&'a Value, CliError> {
    obj.get(key).ok_or_else(|| CliError::schema(format!("{base}/{key}"), "required field is missing"))
}

fn uint(v: &Value, pointer: &str) -> Result<u32, CliError> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| CliError::schema(pointer, "expected a non-negative integer"))
}

fn array<'a>(v: &'a Value, pointer: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| CliError::schema(pointer, "expected an array"))
}

fn uint_list(v: &Value, pointer: &str) -> Result<Vec<u32>, CliError> {
    array(v, pointer)?.iter().enumerate().map(|(k, x)| uint(x, &format!("{pointer}/{k}"))).collect()
}

fn rational(v: &Value, pointer: &str) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => Rational::from_str(s.trim())
            .map_err(|_| CliError::schema(pointer, format!("{s:?} is not a rational of the form p or p/q"))),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().expect("checked").into())),
        _ => Err(CliError::schema(pointer, "expected an integer or a rational string")),
    }
}

fn rational_list(v: &Value, pointer: &str) -> Result<Vec<Rational>, CliError> {
    array(v, pointer)?.iter().enumerate().map(|(k, x)| rational(x, &format!("{pointer}/{k}"))).collect()
}

fn parse_variety(obj: &Map<String, Value>) -> Result<TrinomialData, CliError> {
    let kind = uint(field(obj, "type", "")?, "/type")?;
    let m = match obj.get("m") {
        Some(v) => uint(v, "/m")?,
        None => 0,
    };
    let blocks = array(field(obj, "blocks", "")?, "/blocks")?;
    let mut exponents = Vec::with_capacity(blocks.len());
    for (k, b) in blocks.iter().enumerate() {
        let base = format!("/blocks/{k}");
        let b = b.as_object().ok_or_else(|| CliError::schema(&base, "expected an object with field l"))?;
        exponents.push(uint_list(field(b, "l", &base)?, &format!("{base}/l"))?);
    }
    let a = field(obj, "A", "")?;
    match kind {
        1 => Ok(TrinomialData::type1(exponents, rational_list(a, "/A")?, m)),
        2 => {
            let rows = array(a, "/A")?;
            if rows.len() != 2 {
                return Err(CliError::schema("/A", "type 2 needs two rows of constants"));
            }
            Ok(TrinomialData::type2(exponents, [rational_list(&rows[0], "/A/0")?, rational_list(&rows[1], "/A/1")?], m))
        }
        _ => Err(CliError::schema("/type", "type must be 1 or 2")),
    }
}

fn parse_example(v: &Value) -> Result<ExampleParams, CliError> {
    let obj = v.as_object().ok_or_else(|| CliError::schema("/example", "expected an object"))?;
    Ok(ExampleParams {
        k: uint(field(obj, "k", "/example")?, "/example/k")?,
        b: uint_list(field(obj, "b", "/example")?, "/example/b")?,
        c: uint_list(field(obj, "c", "/example")?, "/example/c")?,
        p: uint(field(obj, "p", "/example")?, "/example/p")?,
        r: uint_list(field(obj, "r", "/example")?, "/example/r")?,
    })
}

fn polynomial_at(
    v: &Value,
    pointer: &str,
    universe: &BTreeSet<Var>,
) -> Result<trinomial_core::poly::SparsePolynomial, CliError> {
    let text = v.as_str().ok_or_else(|| CliError::schema(pointer, "expected a polynomial string"))?;
    let p = parse_polynomial(text, Scope::Vars(universe))
        .map_err(|source| CliError::Polynomial { pointer: pointer.to_string(), source })?;
    if let Some(param) = p.variables().into_iter().find(Var::is_param) {
        return Err(CliError::schema(pointer, format!("parameter {param} is not allowed here")));
    }
    Ok(p)
}

fn var_at(name: &str, pointer: &str, universe: &BTreeSet<Var>) -> Result<Var, CliError> {
    let v = parse_var(name, Scope::Vars(universe))
        .map_err(|source| CliError::Polynomial { pointer: pointer.to_string(), source })?;
    if v.is_param() {
        return Err(CliError::schema(pointer, format!("parameter {v} is not a generator")));
    }
    Ok(v)
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn parse_derivations(v: &Value, universe: &BTreeSet<Var>) -> Result<BTreeMap<String, Derivation>, CliError> {
    let obj = v.as_object().ok_or_else(|| CliError::schema("/derivations", "expected an object of named derivations"))?;
    let mut out = BTreeMap::new();
    for (name, images) in obj {
        let base = format!("/derivations/{}", escape(name));
        let images = images.as_object().ok_or_else(|| CliError::schema(&base, "expected an object"))?;
        let mut map = BTreeMap::new();
        for (var, text) in images {
            let pointer = format!("{base}/{}", escape(var));
            map.insert(var_at(var, &pointer, universe)?, polynomial_at(text, &pointer, universe)?);
        }
        out.insert(name.clone(), Derivation::new(map));
    }
    Ok(out)
}

fn parse_invariant(v: &Value, universe: &BTreeSet<Var>) -> Result<RationalFunction, CliError> {
    let obj = v.as_object().ok_or_else(|| CliError::schema("/invariant", "expected an object with num and den"))?;
    let num = polynomial_at(field(obj, "num", "/invariant")?, "/invariant/num", universe)?;
    let den = polynomial_at(field(obj, "den", "/invariant")?, "/invariant/den", universe)?;
    if den.is_zero() {
        return Err(CliError::schema("/invariant/den", "denominator is zero"));
    }
    Ok(RationalFunction::new(num, den))
}

fn complex(v: &Value, pointer: &str) -> Result<Complex64, CliError> {
    let number = |x: &Value| x.as_f64().ok_or_else(|| CliError::schema(pointer, "expected a number or [re, im]"));
    match v {
        Value::Array(parts) if parts.len() == 2 => Ok(Complex64::new(number(&parts[0])?, number(&parts[1])?)),
        _ => Ok(Complex64::new(number(v)?, 0.0)),
    }
}

fn parse_point(v: &Value, pointer: &str, universe: &BTreeSet<Var>) -> Result<Point, CliError> {
    let obj = v.as_object().ok_or_else(|| CliError::schema(pointer, "expected an object of coordinates"))?;
    obj.iter()
        .map(|(name, x)| {
            let p = format!("{pointer}/{}", escape(name));
            Ok((var_at(name, &p, universe)?, complex(x, &p)?))
        })
        .collect()
}

fn parse_points(v: &Value, universe: &BTreeSet<Var>) -> Result<(Point, Point), CliError> {
    let obj = v.as_object().ok_or_else(|| CliError::schema("/points", "expected an object with alpha and beta"))?;
    Ok((
        parse_point(field(obj, "alpha", "/points")?, "/points/alpha", universe)?,
        parse_point(field(obj, "beta", "/points")?, "/points/beta", universe)?,
    ))
}

fn parse_options(v: &Value) -> Result<Options, CliError> {
    let obj = v.as_object().ok_or_else(|| CliError::schema("/options", "expected an object"))?;
    let mut out = Options::default();
    for (key, x) in obj {
        let pointer = format!("/options/{}", escape(key));
        match key.as_str() {
            "epsilon" => {
                let e = x.as_f64().filter(|e| *e > 0.0);
                out.epsilon = Some(e.ok_or_else(|| CliError::schema(&pointer, "expected a positive number"))?);
            }
            "cap" => out.cap = Some(uint(x, &pointer)?),
            "max_image_degree" => out.max_image_degree = Some(uint(x, &pointer)?),
            "spot_checks" => out.spot_checks = Some(uint(x, &pointer)? as usize),
            "degree" => {
                let list = array(x, &pointer)?;
                let degree = list
                    .iter()
                    .enumerate()
                    .map(|(k, d)| d.as_i64().ok_or_else(|| CliError::schema(format!("{pointer}/{k}"), "expected an integer")))
                    .collect::<Result<Vec<_>, _>>()?;
                out.degree = Some(degree);
            }
            _ => return Err(CliError::schema(pointer, "unknown option")),
        }
    }
    Ok(out)
}
