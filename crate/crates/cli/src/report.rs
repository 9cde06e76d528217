//! Report model shared by all commands, rendered as text or JSON.

use std::fmt::Write as _;

use nacoalg::closure::{Budget, ClosureTrace};
use nacoalg::coalgebra::CheckReport;
use serde::Serialize;

pub const ENGINE: &str = "nacoalg";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    BudgetExceeded,
    Info,
    Error,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Pass | Outcome::Info => 0,
            Outcome::Fail => 1,
            Outcome::Error => 2,
            Outcome::BudgetExceeded => 3,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::BudgetExceeded => "budget-exceeded",
            Outcome::Info => "info",
            Outcome::Error => "error",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Engine {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecSource {
    /// `builtin`, `file` or `algebra`.
    pub kind: &'static str,
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Interval {
    pub family: String,
    pub lo: u64,
    pub hi: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub context: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckJson {
    pub name: String,
    pub verdict: String,
    pub checked: Vec<Interval>,
    pub failures: usize,
    pub witnesses: Vec<WitnessJson>,
    pub notes: Vec<String>,
}

impl From<&CheckReport> for CheckJson {
    fn from(r: &CheckReport) -> Self {
        CheckJson {
            name: r.name.clone(),
            verdict: r.verdict.to_string(),
            checked: r.checked.iter().map(|c| Interval { family: c.family.to_string(), lo: c.lo, hi: c.hi }).collect(),
            failures: r.failures,
            witnesses: r
                .witnesses
                .iter()
                .map(|w| WitnessJson {
                    label: w.label.as_ref().map(ToString::to_string),
                    context: w.context.clone(),
                    residual: w.residual.as_ref().map(ToString::to_string),
                })
                .collect(),
            notes: r.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BudgetJson {
    pub max_steps: usize,
    pub max_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureJson {
    pub generators: Vec<String>,
    /// `finite-dimensional` or `divergence-evidence`.
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    pub dims: Vec<usize>,
    pub added: Vec<Vec<String>>,
    pub budget: BudgetJson,
}

impl ClosureJson {
    pub fn new(generators: Vec<String>, trace: &ClosureTrace, budget: Budget, dimension: Option<usize>) -> Self {
        ClosureJson {
            generators,
            verdict: if dimension.is_some() { "finite-dimensional" } else { "divergence-evidence" },
            dimension,
            dims: trace.dims.clone(),
            added: trace.added.iter().map(|a| a.iter().map(ToString::to_string).collect()).collect(),
            budget: BudgetJson { max_steps: budget.max_steps, max_dim: budget.max_dim },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleJson {
    pub label: String,
    pub delta: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructionJson {
    pub construction: String,
    pub result: String,
    pub shift_bound: u64,
    pub graded: bool,
    pub differential: bool,
    pub sample: Vec<SampleJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductJson {
    pub left: String,
    pub right: String,
    pub product: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleJson {
    pub name: String,
    pub kind: &'static str,
    pub description: String,
    pub lineage: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub engine: Engine,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<SpecSource>,
    pub seeds: Vec<u64>,
    pub checks: Vec<CheckJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure: Option<ClosureJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<ProductJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub examples: Vec<ExampleJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub outcome: Outcome,
    pub exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Report {
        Report {
            engine: Engine { name: ENGINE, version: VERSION },
            command,
            spec: None,
            seeds: Vec::new(),
            checks: Vec::new(),
            closure: None,
            construction: None,
            products: Vec::new(),
            examples: Vec::new(),
            output: None,
            error: None,
            outcome: Outcome::Info,
            exit_code: 0,
            timing_ms: None,
        }
    }

    pub fn add_check(&mut self, r: &CheckReport) {
        self.checks.push(CheckJson::from(r));
    }

    /// Pass iff every recorded check passed.
    pub fn outcome_from_checks(&self) -> Outcome {
        if self.checks.iter().all(|c| c.verdict == "pass") {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn finish(&mut self, outcome: Outcome) {
        self.outcome = outcome;
        self.exit_code = outcome.exit_code();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.engine.name, self.engine.version);
        let _ = writeln!(s, "command: {}", self.command.join(" "));
        if let Some(src) = &self.spec {
            match (&src.path, &src.sha256) {
                (Some(p), Some(h)) => {
                    let _ = writeln!(s, "spec: {} from {p} (sha256 {h})", src.name);
                }
                _ => {
                    let _ = writeln!(s, "spec: {} {}", src.kind, src.name);
                }
            }
        }
        if !self.seeds.is_empty() {
            let seeds: Vec<String> = self.seeds.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "seed: {}", seeds.join(", "));
        }
        for e in &self.examples {
            let _ = writeln!(s, "{:<16} {:<10} {}  [{}]", e.name, e.kind, e.description, e.lineage);
        }
        for c in &self.checks {
            let _ = write!(s, "{}: {}", c.name, c.verdict);
            if !c.checked.is_empty() {
                let parts: Vec<String> = c.checked.iter().map(|i| format!("{}[{}..={}]", i.family, i.lo, i.hi)).collect();
                let _ = write!(s, " (verified on {})", parts.join(", "));
            }
            if c.failures > 0 {
                let _ = write!(s, ", {} failing", c.failures);
            }
            s.push('\n');
            for w in &c.witnesses {
                let _ = write!(s, "  witness");
                if let Some(l) = &w.label {
                    let _ = write!(s, " {l}");
                }
                if !w.context.is_empty() {
                    let _ = write!(s, " [{}]", w.context);
                }
                if let Some(r) = &w.residual {
                    let _ = write!(s, ": {r}");
                }
                s.push('\n');
            }
            for n in &c.notes {
                let _ = writeln!(s, "  note: {n}");
            }
        }
        if let Some(c) = &self.closure {
            let _ = writeln!(s, "generators: {}", c.generators.join(", "));
            match c.dimension {
                Some(d) => {
                    let _ = writeln!(s, "closure: finite-dimensional, dimension {d}");
                }
                None => {
                    let _ = writeln!(
                        s,
                        "closure: divergence evidence (still growing after {} steps; evidence, not proof)",
                        c.added.len()
                    );
                }
            }
            let dims: Vec<String> = c.dims.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "dims: {}", dims.join(", "));
            for (k, a) in c.added.iter().enumerate().take(8) {
                let _ = writeln!(s, "  step {}: +{}", k + 1, if a.is_empty() { "nothing".to_string() } else { a.join(", ") });
            }
        }
        if let Some(c) = &self.construction {
            let _ = writeln!(s, "construction: {} -> {} (shift bound {})", c.construction, c.result, c.shift_bound);
            for x in &c.sample {
                let _ = writeln!(s, "  Δ({}) = {}", x.label, x.delta);
            }
        }
        for p in &self.products {
            let _ = writeln!(s, "ξ[{}] · ξ[{}] = {}", p.left, p.right, p.product);
        }
        if let Some(o) = &self.output {
            let _ = writeln!(s, "wrote {o}");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(s, "error: {e}");
        }
        let _ = writeln!(s, "result: {}", self.outcome.as_str());
        if let Some(t) = self.timing_ms {
            let _ = writeln!(s, "time: {t} ms");
        }
        s
    }
}
