//! Command dispatch. Every command returns a JSON payload and whether the
//! analysis came out negative (exit code 2).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};
use trinomial_core::lattice::{algebra_grading_group, grading_group, Degree, GradingGroup};
use trinomial_core::lnd::{
    check_locally_nilpotent, check_preserves_ideal, classify_type, exponential, homogeneity_degree,
    search_homogeneous_lnds, Derivation, LndError, LndType, NilpotencyVerdict, SearchBounds,
};
use trinomial_core::orbit::{
    admissible_supports, census, orbit_counts, transport, OrbitError, PatternSampler, TransportCertificate,
    DEFAULT_EPSILON,
};
use trinomial_core::poly::RationalFunction;
use trinomial_core::rigidity::{rigidity_verdict, Target};
use trinomial_core::variety::PresentedAlgebra;

use crate::error::CliError;
use crate::spec::{Options, SpecFile};

const DEFAULT_SPOT_CHECKS: usize = 3;
const DEFAULT_MAX_IMAGE_DEGREE: u32 = 2;
const SAMPLE_ATTEMPTS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Rigidity,
    Grading,
    Strata,
    Census,
    LndCheck,
    LndSearch,
    Exp,
    Transport,
    ExampleHypersurface,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Validate,
        Command::Rigidity,
        Command::Grading,
        Command::Strata,
        Command::Census,
        Command::LndCheck,
        Command::LndSearch,
        Command::Exp,
        Command::Transport,
        Command::ExampleHypersurface,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Rigidity => "rigidity",
            Command::Grading => "grading",
            Command::Strata => "strata",
            Command::Census => "census",
            Command::LndCheck => "lnd-check",
            Command::LndSearch => "lnd-search",
            Command::Exp => "exp",
            Command::Transport => "transport",
            Command::ExampleHypersurface => "example-hypersurface",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| CliError::UnknownCommand(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub payload: Value,
    /// The analysis answered "no": invalid data, not an LND, no transport.
    pub negative: bool,
}

impl Outcome {
    fn positive(payload: Value) -> Self {
        Outcome { payload, negative: false }
    }
}

/// Runs `cmd`; `options` are command-line values that override the ones in
/// the spec file.
pub fn run_command<R: Rng + ?Sized>(
    cmd: Command,
    spec: &SpecFile,
    options: &Options,
    rng: &mut R,
) -> Result<Outcome, CliError> {
    let opts = spec.options.overridden_by(options);
    match cmd {
        Command::Validate => validate(spec),
        Command::Rigidity => rigidity(spec),
        Command::Grading => grading(spec),
        Command::Strata => strata(spec),
        Command::Census => census_report(spec, &opts, rng),
        Command::LndCheck => lnd_check(spec, &opts),
        Command::LndSearch => lnd_search(spec, &opts),
        Command::Exp => exp(spec, &opts),
        Command::Transport => transport_report(spec, &opts),
        Command::ExampleHypersurface => example(spec, &opts),
    }
}

fn validate(spec: &SpecFile) -> Result<Outcome, CliError> {
    let Some(data) = &spec.variety else {
        // The example was already built while parsing.
        return Ok(Outcome::positive(json!({"valid": true, "violations": []})));
    };
    let report = data.validate();
    let violations: Vec<Value> =
        report.violations.iter().map(|v| json!({"path": v.path, "kind": format!("{:?}", v.kind)})).collect();
    Ok(Outcome { payload: json!({"valid": report.is_ok(), "violations": violations}), negative: !report.is_ok() })
}

fn rigidity(spec: &SpecFile) -> Result<Outcome, CliError> {
    let data = spec.data()?;
    let x = rigidity_verdict(data, Target::X)?;
    let y = rigidity_verdict(data, Target::Y)?;
    Ok(Outcome::positive(json!({"X": x.to_json(), "Y": y.to_json()})))
}

fn big_to_json(x: &num_bigint::BigInt) -> Value {
    use num_traits::ToPrimitive;
    x.to_i64().map_or_else(|| Value::String(x.to_string()), Value::from)
}

fn grading_json(group: &GradingGroup) -> Value {
    let m = &group.relation_matrix;
    let rows: Vec<Value> = (0..m.rows()).map(|i| m.row(i).iter().map(big_to_json).collect()).collect();
    let grading = group.grading();
    let weights: serde_json::Map<String, Value> = grading
        .weights
        .iter()
        .map(|(v, d)| (v.to_string(), json!({"free": d.free, "torsion": d.torsion})))
        .collect();
    json!({
        "variables": group.variables.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "relation_matrix": rows,
        "free_rank": group.free_rank,
        "torsion": group.torsion.iter().map(big_to_json).collect::<Vec<_>>(),
        "weights": weights,
    })
}

fn algebra_group(spec: &SpecFile, alg: &PresentedAlgebra) -> Result<GradingGroup, CliError> {
    match (&spec.example, &spec.variety) {
        (None, Some(data)) => Ok(grading_group(data)?),
        _ => Ok(algebra_grading_group(alg)),
    }
}

fn grading(spec: &SpecFile) -> Result<Outcome, CliError> {
    let alg = spec.algebra()?;
    Ok(Outcome::positive(grading_json(&algebra_group(spec, &alg)?)))
}

fn strata(spec: &SpecFile) -> Result<Outcome, CliError> {
    let data = spec.data()?;
    let mut out = Vec::new();
    for (pattern, dimension) in admissible_supports(data)? {
        let orbits = orbit_counts(data, &pattern)?;
        out.push(json!({
            "pattern": pattern.to_json(),
            "dimension": dimension,
            "diagonal_orbits": orbits.map(|o| o.diagonal),
            "torus_orbits": orbits.map(|o| o.torus),
        }));
    }
    Ok(Outcome::positive(json!({"strata": out})))
}

fn census_report<R: Rng + ?Sized>(spec: &SpecFile, opts: &Options, rng: &mut R) -> Result<Outcome, CliError> {
    let data = spec.data()?;
    let eps = opts.epsilon.unwrap_or(DEFAULT_EPSILON);
    let pairs = opts.spot_checks.unwrap_or(DEFAULT_SPOT_CHECKS);
    let result = census(data)?;
    let sampler = PatternSampler::new(data)?;
    let mut checks = Vec::new();
    for entry in result.closed_strata() {
        let mut done = 0usize;
        let mut flagged = 0usize;
        let mut max_residual = 0.0f64;
        for _ in 0..pairs {
            let a = sampler.sample_in_stratum(&entry.pattern, eps, SAMPLE_ATTEMPTS, rng);
            let b = sampler.sample_in_stratum(&entry.pattern, eps, SAMPLE_ATTEMPTS, rng);
            let (Some(a), Some(b)) = (a, b) else { continue };
            let cert = transport(&a.point, &b.point, data, eps)?;
            done += 1;
            flagged += cert.flagged() as usize;
            max_residual = max_residual.max(cert.residual);
        }
        checks.push(json!({
            "pattern": entry.pattern.to_json(),
            "pairs": done,
            "root_of_unity_flags": flagged,
            "max_residual": max_residual,
        }));
    }
    let mut payload = result.to_json();
    payload["transport_spot_checks"] = Value::Array(checks);
    payload["epsilon"] = json!(eps);
    Ok(Outcome::positive(payload))
}

fn lnd_type_label(t: LndType) -> &'static str {
    match t {
        LndType::Vertical => "vertical",
        LndType::Horizontal => "horizontal",
    }
}

fn rational_function_json(f: &RationalFunction) -> Value {
    json!({"num": f.num.to_string(), "den": f.den.to_string()})
}

/// Ideal, nilpotency, degree and type of one derivation. The flag is true
/// when the derivation is a conclusive LND.
fn derivation_report(
    spec: &SpecFile,
    alg: &PresentedAlgebra,
    delta: &Derivation,
    invariant: Option<&RationalFunction>,
    cap: Option<u32>,
) -> Result<(Value, bool), CliError> {
    let ideal = check_preserves_ideal(alg, delta)?;
    if !ideal.preserved {
        let residues: Vec<String> = ideal.residues.iter().map(ToString::to_string).collect();
        return Ok((
            json!({"derivation": delta.to_json(), "verdict": "IdealNotPreserved", "residues": residues}),
            false,
        ));
    }
    let nil = check_locally_nilpotent(alg, delta, cap)?;
    let nil_degrees: serde_json::Map<String, Value> =
        nil.nil_degrees.iter().map(|(v, d)| (v.to_string(), json!(d))).collect();
    let is_lnd = nil.verdict == NilpotencyVerdict::LocallyNilpotent;
    let mut report = json!({
        "derivation": delta.to_json(),
        "verdict": if is_lnd { "LND" } else { "NotLND" },
        "cap": nil.cap,
        "nil_degrees": nil_degrees,
    });
    if delta.is_zero() {
        return Ok((report, is_lnd));
    }
    let w = algebra_group(spec, alg)?.grading();
    report["degree"] = match homogeneity_degree(alg, delta, &w) {
        Ok(d) => json!({"free": d.free, "torsion": d.torsion}),
        Err(LndError::NotHomogeneous { .. } | LndError::ZeroDerivation) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    match classify_type(alg, delta, invariant) {
        Ok(t) => {
            report["type"] = json!(lnd_type_label(t.kind));
            report["type_paths_agree"] = json!(t.paths_agree());
            if let Some(v) = &t.invariant_value {
                report["invariant_image"] = rational_function_json(v);
            }
        }
        Err(LndError::MissingInvariant) => report["type"] = Value::Null,
        Err(e) => return Err(e.into()),
    }
    Ok((report, is_lnd))
}

fn named_derivations(spec: &SpecFile) -> Result<Vec<(String, Derivation)>, CliError> {
    let list = spec.derivations_or_example();
    if list.is_empty() {
        return Err(CliError::MissingInput("the spec file has no derivations".into()));
    }
    Ok(list)
}

fn lnd_check(spec: &SpecFile, opts: &Options) -> Result<Outcome, CliError> {
    let alg = spec.algebra()?;
    let invariant = spec.invariant_or_example();
    let mut reports = serde_json::Map::new();
    let mut negative = false;
    for (name, delta) in named_derivations(spec)? {
        let (report, ok) = derivation_report(spec, &alg, &delta, invariant.as_ref(), opts.cap)?;
        negative |= !ok;
        reports.insert(name, report);
    }
    Ok(Outcome { payload: json!({"derivations": reports}), negative })
}

fn lnd_search(spec: &SpecFile, opts: &Options) -> Result<Outcome, CliError> {
    let alg = spec.algebra()?;
    let free = opts.degree.clone().ok_or_else(|| CliError::MissingInput("lnd-search needs --degree".into()))?;
    let w = algebra_group(spec, &alg)?.grading();
    let g0 = Degree { free, torsion: Vec::new() };
    let mut bounds = SearchBounds::new(opts.max_image_degree.unwrap_or(DEFAULT_MAX_IMAGE_DEGREE));
    bounds.cap = opts.cap;
    let found = search_homogeneous_lnds(&alg, &w, &g0, &bounds)?;
    Ok(Outcome::positive(json!({
        "degree": g0.free,
        "max_image_degree": bounds.max_image_degree,
        "found": found.iter().map(Derivation::to_json).collect::<Vec<_>>(),
    })))
}

fn exp(spec: &SpecFile, opts: &Options) -> Result<Outcome, CliError> {
    let alg = spec.algebra()?;
    let invariant = spec.invariant_or_example();
    let mut reports = serde_json::Map::new();
    let mut negative = false;
    for (name, delta) in named_derivations(spec)? {
        let (mut report, ok) = derivation_report(spec, &alg, &delta, invariant.as_ref(), opts.cap)?;
        if ok {
            let phi = exponential(&alg, &delta, opts.cap)?;
            report["exp"] = phi.to_json();
            report["preserves_relations"] = json!(phi.relation_residues(&alg).iter().all(|r| r.is_zero()));
            report["one_parameter_group"] = json!(phi.composition_defects(&alg).values().all(|r| r.is_zero()));
        }
        negative |= !ok;
        reports.insert(name, report);
    }
    Ok(Outcome { payload: json!({"derivations": reports}), negative })
}

fn point_json(p: &trinomial_core::orbit::Point) -> Value {
    let map: serde_json::Map<String, Value> = p.iter().map(|(v, z)| (v.to_string(), complex_json(*z))).collect();
    Value::Object(map)
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn transport_report(spec: &SpecFile, opts: &Options) -> Result<Outcome, CliError> {
    let data = spec.data()?;
    let (alpha, beta) = spec.points.as_ref().ok_or_else(|| CliError::MissingInput("transport needs points".into()))?;
    let eps = opts.epsilon.unwrap_or(DEFAULT_EPSILON);
    let base = json!({"alpha": point_json(alpha), "beta": point_json(beta), "epsilon": eps});
    let result: Result<TransportCertificate, OrbitError> = transport(alpha, beta, data, eps);
    let (extra, negative) = match result {
        Ok(cert) => (json!({"transported": true, "certificate": cert.to_json()}), false),
        Err(e @ (OrbitError::DifferentStrata { .. } | OrbitError::EmptySupport)) => {
            (json!({"transported": false, "reason": e.to_string()}), true)
        }
        Err(e) => return Err(e.into()),
    };
    let mut payload = base;
    for (k, v) in extra.as_object().expect("object") {
        payload[k] = v.clone();
    }
    Ok(Outcome { payload, negative })
}

fn example(spec: &SpecFile, opts: &Options) -> Result<Outcome, CliError> {
    let (params, ex) =
        spec.example.as_ref().ok_or_else(|| CliError::MissingInput("example-hypersurface needs an example".into()))?;
    let relation = ex.algebra.relations.polys().next().map(ToString::to_string).unwrap_or_default();
    let (check, ok) = derivation_report(spec, &ex.algebra, &ex.derivation, Some(&ex.invariant), opts.cap)?;
    Ok(Outcome {
        payload: json!({
            "parameters": {"k": params.k, "b": params.b, "c": params.c, "p": params.p, "r": params.r},
            "variables": ex.algebra.variables.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "relation": relation,
            "invariant": rational_function_json(&ex.invariant),
            "check": check,
        }),
        negative: !ok,
    })
}
