use std::fs;

use nacoalg::closure::{generated_subcoalgebra, simplicity_probe, Budget, ClosureVerdict};
use nacoalg::coalgebra::{
    anticocommutativity_check, coassociativity_check, cocommutativity_check, coderivation_check, parse_spec_json,
    spec_to_json, validate_shift_bound, CheckReport, CoalgebraSpec,
};
use nacoalg::constructions::{
    antisymmetrize, builtin, builtin_algebra, builtin_catalog, gelfand_dorfman, graded_dual, kantor, BuiltinKind,
};
use nacoalg::dual::{bruteforce_identity, grassmann_envelope_check_with, DualAlgebra, GrassmannConfig};
use nacoalg::exactlin::{format_scalar, int, FormalVector};
use nacoalg::identities::{
    builtin_identities, check_identity, lookup_identity, parse_identity, parse_signature, IdentityOptions, NAPoly, SignRule,
};
use sha2::{Digest, Sha256};

use crate::report::{ClosureJson, ConstructionJson, ExampleJson, Outcome, ProductJson, Report, SampleJson, SpecSource};
use crate::{
    CheckArgs, ClosureArgs, ClosureMode, ConstructArgs, Construction, DualCommand, ExportArgs, Failure, IdentityArgs,
    SpecArgs,
};

type Result<T> = std::result::Result<T, Failure>;

/// Check names besides the catalog identities.
const NAMED_CHECKS: &[&str] =
    &["coassoc", "cocomm", "anticocomm", "coderivation", "shift-bound", "novikov", "lie", "right-alternative", "moufang", "jordan"];

fn suggest<'a>(name: &str, candidates: impl IntoIterator<Item = &'a str>) -> Option<&'a str> {
    candidates
        .into_iter()
        .map(|c| (strsim::jaro_winkler(name, c), c))
        .filter(|(score, _)| *score > 0.8)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, c)| c)
}

fn unknown(what: &str, name: &str, candidates: Vec<&str>) -> Failure {
    let hint = match suggest(name, candidates.iter().copied()) {
        Some(s) => format!("; did you mean `{s}`?"),
        None => String::new(),
    };
    Failure::usage(format!("unknown {what} `{name}`{hint} (known: {})", candidates.join(", ")))
}

fn load_builtin(name: &str) -> Result<CoalgebraSpec> {
    builtin(name).map_err(|_| {
        let names = builtin_catalog().iter().filter(|b| b.kind == BuiltinKind::Coalgebra).map(|b| b.name).collect();
        unknown("example", name, names)
    })
}

fn load_spec(args: &SpecArgs, report: &mut Report) -> Result<CoalgebraSpec> {
    match (&args.example, &args.spec) {
        (Some(name), _) => {
            let spec = load_builtin(name)?;
            report.spec = Some(SpecSource { kind: "builtin", name: name.clone(), path: None, sha256: None });
            Ok(spec)
        }
        (None, Some(path)) => {
            let bytes = fs::read(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            let digest = hex::encode(Sha256::digest(&bytes));
            let text = String::from_utf8(bytes).map_err(|_| Failure::usage(format!("{} is not UTF-8", path.display())))?;
            let spec = parse_spec_json(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            report.spec = Some(SpecSource {
                kind: "file",
                name: spec.name().to_string(),
                path: Some(path.display().to_string()),
                sha256: Some(digest),
            });
            Ok(spec)
        }
        (None, None) => Err(Failure::usage("give a spec with --example NAME or --spec FILE")),
    }
}

fn identity_options(a: &IdentityArgs) -> IdentityOptions {
    IdentityOptions { koszul_pairing: a.koszul_pairing }
}

/// A catalog name or an expression in the identity language.
fn resolve_identity(text: &str, a: &IdentityArgs) -> Result<NAPoly> {
    let mut p = match lookup_identity(text) {
        Ok(p) => p,
        Err(_) => parse_identity(text).map_err(|e| Failure::usage(format!("identity `{text}`: {e}")))?,
    };
    if let Some(sig) = &a.signature {
        let sig = parse_signature(sig).map_err(|e| Failure::usage(e.to_string()))?;
        p = p.with_signature(sig).map_err(|e| Failure::usage(e.to_string()))?;
    }
    if a.super_signs {
        p = p.with_sign_rule(SignRule::Super);
    }
    Ok(p)
}

fn catalog_check(spec: &CoalgebraSpec, name: &str, max: u64, opts: IdentityOptions) -> Result<CheckReport> {
    let p = lookup_identity(name)?;
    Ok(check_identity(spec, name, &p, max, opts)?)
}

fn run_named(spec: &CoalgebraSpec, name: &str, max: u64, opts: IdentityOptions) -> Result<Vec<CheckReport>> {
    let graded = spec.is_graded();
    Ok(match name {
        "coassoc" => vec![coassociativity_check(spec, max)?],
        "cocomm" => vec![cocommutativity_check(spec, max, graded)?],
        "anticocomm" => vec![anticocommutativity_check(spec, max, graded)?],
        "coderivation" => vec![coderivation_check(spec, max)?],
        "shift-bound" => vec![validate_shift_bound(spec, max)],
        "novikov" => vec![
            catalog_check(spec, "left-symmetry", max, opts)?,
            catalog_check(spec, "novikov-right-commutativity", max, opts)?,
        ],
        "lie" => vec![anticocommutativity_check(spec, max, graded)?, catalog_check(spec, "jacobi", max, opts)?],
        "right-alternative" => vec![catalog_check(spec, "right-alternativity-linearized", max, opts)?],
        "moufang" => vec![catalog_check(spec, "moufang-linearized", max, opts)?],
        "jordan" => {
            let which = if graded { "super-jordan-linearized" } else { "jordan-linearized" };
            vec![catalog_check(spec, which, max, opts)?]
        }
        other => vec![catalog_check(spec, other, max, opts)?],
    })
}

pub fn check(a: &CheckArgs, report: &mut Report) -> Result<Outcome> {
    let catalog = builtin_identities();
    let mut known: Vec<&str> = NAMED_CHECKS.to_vec();
    known.extend(catalog.iter().map(|e| e.name));
    if let Some(bad) = a.checks.iter().find(|c| !known.contains(&c.as_str())) {
        return Err(unknown("check", bad, known));
    }
    if a.checks.is_empty() && a.identity.is_empty() {
        return Err(Failure::usage("nothing to check; pass --checks or --identity"));
    }
    let identities: Vec<(String, NAPoly)> =
        a.identity.iter().map(|t| Ok((t.clone(), resolve_identity(t, &a.identity_opts)?))).collect::<Result<_>>()?;
    let spec = load_spec(&a.source, report)?;
    let opts = identity_options(&a.identity_opts);
    for name in &a.checks {
        for r in run_named(&spec, name, a.max_index, opts)? {
            report.add_check(&r);
        }
    }
    for (text, p) in &identities {
        report.add_check(&check_identity(&spec, text, p, a.max_index, opts)?);
    }
    Ok(report.outcome_from_checks())
}

pub fn closure(a: &ClosureArgs, report: &mut Report) -> Result<Outcome> {
    if let Some(ClosureMode::Simplicity(s)) = &a.mode {
        let spec = load_spec(&s.source, report)?;
        report.seeds.push(s.seed);
        report.add_check(&simplicity_probe(&spec, s.horizon, s.trials, s.seed)?);
        return Ok(report.outcome_from_checks());
    }
    if a.generators.is_empty() {
        return Err(Failure::usage("give generators with --generators, e.g. --generators f:1"));
    }
    let spec = load_spec(&a.source, report)?;
    let gens: Vec<FormalVector> = a
        .generators
        .iter()
        .map(|g| spec.parse_vector(g.trim()).map_err(|e| Failure::usage(format!("generator `{g}`: {e}"))))
        .collect::<Result<_>>()?;
    let budget = Budget { max_steps: a.max_steps, max_dim: a.max_dim };
    let trace = generated_subcoalgebra(&spec, &gens, budget)?;
    let names = gens.iter().map(ToString::to_string).collect();
    let (dimension, outcome) = match trace.verdict {
        ClosureVerdict::Closed(d) => (Some(d), Outcome::Pass),
        ClosureVerdict::BudgetExceeded => (None, Outcome::BudgetExceeded),
    };
    report.closure = Some(ClosureJson::new(names, &trace, budget, dimension));
    Ok(outcome)
}

fn sample_deltas(spec: &CoalgebraSpec) -> Vec<SampleJson> {
    spec.labels_up_to(3)
        .into_iter()
        .take(8)
        .map(|l| SampleJson {
            label: l.to_string(),
            delta: spec.delta(&l).map(|t| t.to_string()).unwrap_or_else(|e| format!("error: {e}")),
        })
        .collect()
}

pub fn construct(a: &ConstructArgs, report: &mut Report) -> Result<Outcome> {
    let (label, result) = match a.construction {
        Construction::GradedDual => {
            let name = a.algebra.as_deref().ok_or_else(|| Failure::usage("graded-dual needs --algebra NAME"))?;
            // the derivation of the top kept degree lands one degree higher
            let alg = builtin_algebra(name, a.horizon + 1).map_err(|_| {
                let names = builtin_catalog().iter().filter(|b| b.kind == BuiltinKind::GradedAlgebra).map(|b| b.name).collect();
                unknown("algebra", name, names)
            })?;
            report.spec = Some(SpecSource { kind: "algebra", name: name.to_string(), path: None, sha256: None });
            ("graded-dual", graded_dual(&alg, a.horizon)?)
        }
        c => {
            if a.algebra.is_some() {
                return Err(Failure::usage("--algebra only applies to graded-dual"));
            }
            let spec = load_spec(&a.source, report)?;
            match c {
                Construction::GelfandDorfman => ("gelfand-dorfman", gelfand_dorfman(&spec)?),
                Construction::Antisymmetrize => ("antisymmetrize", antisymmetrize(&spec)?),
                Construction::Kantor => ("kantor", kantor(&spec)?),
                Construction::GradedDual => unreachable!("handled above"),
            }
        }
    };
    fs::write(&a.output, spec_to_json(&result)).map_err(|e| Failure::usage(format!("cannot write {}: {e}", a.output.display())))?;
    report.construction = Some(ConstructionJson {
        construction: label.to_string(),
        result: result.name().to_string(),
        shift_bound: result.shift_bound(),
        graded: result.is_graded(),
        differential: result.is_differential(),
        sample: sample_deltas(&result),
    });
    report.output = Some(a.output.display().to_string());
    Ok(Outcome::Info)
}

fn format_functional(v: &FormalVector) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (l, c)) in v.iter().enumerate() {
        let neg = c < &int(0);
        let abs = if neg { -c.clone() } else { c.clone() };
        out.push_str(match (k == 0, neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        });
        if abs != int(1) {
            out.push_str(&format!("{}*", format_scalar(&abs)));
        }
        out.push_str(&format!("ξ[{l}]"));
    }
    out
}

pub fn dual(cmd: &DualCommand, report: &mut Report) -> Result<Outcome> {
    match cmd {
        DualCommand::Product(a) => {
            let spec = load_spec(&a.source, report)?;
            let opts = IdentityOptions { koszul_pairing: a.koszul_pairing };
            let pairs: Vec<(FormalVector, FormalVector)> = match (&a.left, &a.right) {
                (Some(l), Some(r)) => {
                    let parse = |s: &str| spec.parse_vector(s).map_err(|e| Failure::usage(format!("functional `{s}`: {e}")));
                    vec![(parse(l)?, parse(r)?)]
                }
                _ => {
                    let coords: Vec<FormalVector> = spec.labels_up_to(a.bound).into_iter().map(FormalVector::basis).collect();
                    coords.iter().flat_map(|x| coords.iter().map(move |y| (x.clone(), y.clone()))).collect()
                }
            };
            let reach = pairs.iter().map(|(x, y)| x.max_index().unwrap_or(0) + y.max_index().unwrap_or(0)).max().unwrap_or(0);
            let alg = DualAlgebra::new(&spec, reach + spec.shift_bound(), opts)?;
            let table = a.left.is_none();
            for (x, y) in &pairs {
                let p = alg.product(x, y)?;
                if table && p.is_zero() {
                    continue;
                }
                report.products.push(ProductJson { left: x.to_string(), right: y.to_string(), product: format_functional(&p) });
            }
            Ok(Outcome::Info)
        }
        DualCommand::Identity(a) => {
            let p = resolve_identity(&a.identity, &a.identity_opts)?;
            let spec = load_spec(&a.source, report)?;
            report.add_check(&bruteforce_identity(&spec, &a.identity, &p, a.bound, identity_options(&a.identity_opts))?);
            Ok(report.outcome_from_checks())
        }
        DualCommand::Grassmann(a) => {
            let spec = load_spec(&a.source, report)?;
            report.seeds.push(a.seed);
            let cfg = GrassmannConfig {
                generators: a.generators,
                samples: a.samples,
                seed: a.seed,
                max_index: a.max_index,
                ..GrassmannConfig::default()
            };
            report.add_check(&grassmann_envelope_check_with(&spec, &cfg)?);
            Ok(report.outcome_from_checks())
        }
    }
}

pub fn list_examples(report: &mut Report) -> Result<Outcome> {
    for b in builtin_catalog() {
        report.examples.push(ExampleJson {
            name: b.name.to_string(),
            kind: match b.kind {
                BuiltinKind::Coalgebra => "coalgebra",
                BuiltinKind::GradedAlgebra => "algebra",
            },
            description: b.description.to_string(),
            lineage: b.lineage.to_string(),
        });
    }
    Ok(Outcome::Info)
}

pub fn export(a: &ExportArgs, report: &mut Report) -> Result<Outcome> {
    let spec = load_builtin(&a.example)?;
    report.spec = Some(SpecSource { kind: "builtin", name: a.example.clone(), path: None, sha256: None });
    fs::write(&a.output, spec_to_json(&spec)).map_err(|e| Failure::usage(format!("cannot write {}: {e}", a.output.display())))?;
    report.output = Some(a.output.display().to_string());
    Ok(Outcome::Info)
}
