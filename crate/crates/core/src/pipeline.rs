//! Problem files, the decide/verify pipeline and its JSON report.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::bezoutiant::{
    build_kernel, build_m_functions, check_adjoint_identity, check_phi_difference,
    default_alpha_beta, normalize_pair, BezoutKernel,
};
use crate::error::{BezoutError, ParseError};
use crate::exact::{DensityPoly, GaussianRational};
use crate::oplab::{residual_study, ResidualReport};
use crate::symbol::{decide, CoeffClass, Outcome, Verdict};
use crate::transform::{closed_form, reflected_transform};
use crate::zeros::{
    abs_grid, compare_zero_sets, locate_zeros, matching_distance, structure_checks, SearchRect,
    StructureFlags, ZeroComparison, ZeroSet,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_CONFLICT: i32 = 3;

/// Zero sets claimed equal must pair up within this distance.
pub const MATCH_TOL: f64 = 1e-6;
pub const AXIS_TOL: f64 = 1e-7;
pub const MIN_GRID: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Decide,
    Zeros,
    Kernel,
    OperatorCheck,
}

impl Task {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "decide" => Some(Task::Decide),
            "zeros" => Some(Task::Zeros),
            "kernel" => Some(Task::Kernel),
            "operator-check" => Some(Task::OperatorCheck),
            _ => None,
        }
    }

    pub fn all() -> BTreeSet<Task> {
        [Task::Decide, Task::Zeros, Task::Kernel, Task::OperatorCheck]
            .into_iter()
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProblemSpec {
    #[serde(serialize_with = "crate::exact::serialize_rational")]
    pub a: BigRational,
    pub psi1: DensityPoly,
    pub psi2: DensityPoly,
    pub coeff_class: CoeffClass,
    pub rect: SearchRect,
    pub grid_n: usize,
    pub tol: f64,
    /// Radius under which two zeros count as common.
    pub delta: f64,
    pub tasks: BTreeSet<Task>,
}

impl ProblemSpec {
    pub fn new(psi1: DensityPoly, psi2: DensityPoly, a: BigRational) -> Self {
        Self {
            a,
            psi1,
            psi2,
            coeff_class: CoeffClass::Rational,
            rect: SearchRect::new(-20.0, 20.0, -6.0, 6.0),
            grid_n: 64,
            tol: 1e-12,
            delta: 1e-3,
            tasks: Task::all(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let root: Value = serde_json::from_str(text).map_err(|e| {
            ParseError::Json(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        let obj = root
            .as_object()
            .ok_or_else(|| field("$", "expected an object"))?;
        let a = match obj.get("a") {
            Some(Value::String(s)) => {
                crate::exact::parse_rational(s).map_err(|e| field("a", &e.to_string()))?
            }
            Some(Value::Number(n)) => crate::exact::parse_rational(&n.to_string())
                .map_err(|e| field("a", &e.to_string()))?,
            Some(_) => return Err(field("a", "expected a rational string")),
            None => return Err(field("a", "missing")),
        };
        if !a.is_positive() {
            return Err(field("a", "must be positive"));
        }
        let psi1 = coeff_list(obj.get("psi1"), "psi1")?;
        let psi2 = coeff_list(obj.get("psi2"), "psi2")?;
        let mut spec = ProblemSpec::new(psi1, psi2, a);
        if let Some(v) = obj.get("coeff_class") {
            spec.coeff_class = serde_json::from_value(v.clone()).map_err(|_| {
                field(
                    "coeff_class",
                    "expected \"rational\" or \"nonalgebraic-float\"",
                )
            })?;
        }
        if let Some(v) = obj.get("rect") {
            spec.rect =
                serde_json::from_value(v.clone()).map_err(|e| field("rect", &e.to_string()))?;
        }
        if let Some(v) = obj.get("grid_n") {
            spec.grid_n = v
                .as_u64()
                .ok_or_else(|| field("grid_n", "expected a positive integer"))?
                as usize;
        }
        if let Some(v) = obj.get("tol") {
            spec.tol = v
                .as_f64()
                .ok_or_else(|| field("tol", "expected a number"))?;
        }
        if let Some(v) = obj.get("delta") {
            spec.delta = v
                .as_f64()
                .ok_or_else(|| field("delta", "expected a number"))?;
        }
        if let Some(v) = obj.get("tasks") {
            let list = v
                .as_array()
                .ok_or_else(|| field("tasks", "expected a list"))?;
            spec.tasks = list
                .iter()
                .enumerate()
                .map(|(k, t)| {
                    t.as_str()
                        .and_then(Task::parse)
                        .ok_or_else(|| field(&format!("tasks[{k}]"), "unknown task"))
                })
                .collect::<Result<_, _>>()?;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ParseError> {
        if !self.a.is_positive() {
            return Err(field("a", "must be positive"));
        }
        if self.grid_n < MIN_GRID {
            return Err(field("grid_n", &format!("must be at least {MIN_GRID}")));
        }
        if !self.rect.is_valid() {
            return Err(field("rect", "empty rectangle or nonpositive margin"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(field("tol", "must be positive"));
        }
        if self.delta.is_nan() || self.delta <= 0.0 {
            return Err(field("delta", "must be positive"));
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("spec serializes");
        format!("{:x}", Sha256::digest(canonical.as_bytes()))
    }
}

fn field(path: &str, reason: &str) -> ParseError {
    ParseError::Field {
        path: path.to_string(),
        reason: reason.to_string(),
    }
}

fn coeff_list(v: Option<&Value>, name: &str) -> Result<DensityPoly, ParseError> {
    let list = v
        .ok_or_else(|| field(name, "missing"))?
        .as_array()
        .ok_or_else(|| field(name, "expected a list of coefficients"))?;
    if list.is_empty() {
        return Err(field(name, "coefficient list is empty"));
    }
    let coeffs = list
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let path = format!("{name}[{k}]");
            match c {
                Value::String(s) => {
                    GaussianRational::parse(s).map_err(|e| field(&path, &e.to_string()))
                }
                Value::Number(n) => GaussianRational::parse(&n.to_string())
                    .map_err(|e| field(&path, &e.to_string())),
                Value::Object(_) => {
                    serde_json::from_value(c.clone()).map_err(|e| field(&path, &e.to_string()))
                }
                _ => Err(field(&path, "expected a rational string")),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DensityPoly::new(coeffs))
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub kernel: BezoutKernel,
    pub adjoint_identity: bool,
    pub phi_difference: bool,
    pub diagonal_continuous: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroSets {
    pub f1: ZeroSet,
    pub f21: ZeroSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct Structure {
    pub f1: StructureFlags,
    pub f21: StructureFlags,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub spec_hash: String,
    pub timing_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub banner: Option<String>,
    pub exit_code: i32,
    pub verdict: Verdict,
    pub kernel: Option<KernelReport>,
    pub zero_sets: Option<ZeroSets>,
    pub comparison: Option<ZeroComparison>,
    pub structure: Option<Structure>,
    pub operator: Option<ResidualReport>,
    pub conflicts: Vec<String>,
    pub notes: Vec<String>,
    pub provenance: Provenance,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Failure before a verdict exists.
#[derive(Debug)]
pub enum RunError {
    Parse(ParseError),
    Input(BezoutError),
    Io(String),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Parse(e) => write!(f, "{e}"),
            RunError::Input(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT
    }
}

impl From<ParseError> for RunError {
    fn from(e: ParseError) -> Self {
        RunError::Parse(e)
    }
}

/// Runs the requested tasks in the order normalize → decide → kernel →
/// zeros → operator-check. The verdict is always computed.
pub fn run_spec(spec: &ProblemSpec) -> Result<Report, RunError> {
    let start = Instant::now();
    spec.validate()?;
    let verdict =
        decide(&spec.psi1, &spec.psi2, &spec.a, spec.coeff_class).map_err(RunError::Input)?;
    let mut notes = Vec::new();
    let mut conflicts = Vec::new();

    let pair = match normalize_pair(&spec.psi1, &spec.psi2, &spec.a) {
        Ok(p) => Some(p),
        Err(e) => {
            notes.push(format!("operator tasks skipped: {e}"));
            None
        }
    };

    let mut kernel = None;
    if spec.tasks.contains(&Task::Kernel) || spec.tasks.contains(&Task::OperatorCheck) {
        if let Some(pair) = &pair {
            let (alpha, beta) = default_alpha_beta();
            let mf = build_m_functions(pair, &alpha, &beta).map_err(RunError::Input)?;
            let k = build_kernel(pair);
            if spec.tasks.contains(&Task::Kernel) {
                kernel = Some(KernelReport {
                    adjoint_identity: check_adjoint_identity(&k, &mf),
                    phi_difference: check_phi_difference(&mf),
                    diagonal_continuous: k.diagonal_continuous(),
                    kernel: k.clone(),
                });
            }
        }
    }

    let mut zero_sets = None;
    let mut comparison = None;
    let mut structure = None;
    if spec.tasks.contains(&Task::Zeros) {
        let f1 = closed_form(&spec.psi1, &spec.a).map_err(RunError::Input)?;
        let f21 = reflected_transform(&spec.psi2, &spec.a).map_err(RunError::Input)?;
        match (
            locate_zeros(&f1, &spec.rect, spec.tol),
            locate_zeros(&f21, &spec.rect, spec.tol),
        ) {
            (Ok(z1), Ok(z21)) => {
                let cmp = compare_zero_sets(&z1, &z21, spec.delta);
                let s = Structure {
                    f1: structure_checks(&z1, AXIS_TOL),
                    f21: structure_checks(&z21, AXIS_TOL),
                };
                conflicts.extend(consistency(&verdict, &z1, &z21, &cmp, &s));
                zero_sets = Some(ZeroSets { f1: z1, f21: z21 });
                comparison = Some(cmp);
                structure = Some(s);
            }
            (r1, r21) => {
                for (name, r) in [("F1", r1.err()), ("F21", r21.err())] {
                    if let Some(e) = r {
                        notes.push(format!("zero search for {name} failed: {e}"));
                    }
                }
            }
        }
    }

    let mut operator = None;
    if spec.tasks.contains(&Task::OperatorCheck) {
        if let Some(pair) = &pair {
            let (alpha, beta) = default_alpha_beta();
            let mf = build_m_functions(pair, &alpha, &beta).map_err(RunError::Input)?;
            let k = build_kernel(pair);
            let report = residual_study(pair, &k, &mf, &[spec.grid_n, 2 * spec.grid_n]);
            if report.t_operator_norm > report.t_norm_bound * (1.0 + 1e-9) {
                notes.push("discretized ‖T‖ exceeds the envelope bound".into());
            }
            operator = Some(report);
        }
    }

    let numeric_failure = notes.iter().any(|n| n.starts_with("zero search"));
    let exit_code = if !conflicts.is_empty() {
        EXIT_CONFLICT
    } else if verdict.outcome == Outcome::Inconclusive || numeric_failure {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    let banner = (!conflicts.is_empty()).then(|| format!("CONFLICT: {}", conflicts.join("; ")));
    Ok(Report {
        banner,
        exit_code,
        verdict,
        kernel,
        zero_sets,
        comparison,
        structure,
        operator,
        conflicts,
        notes,
        provenance: Provenance {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            spec_hash: spec.hash(),
            timing_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}

/// Disagreements between the symbolic verdict and the located zeros.
pub fn consistency(
    verdict: &Verdict,
    z1: &ZeroSet,
    z21: &ZeroSet,
    cmp: &ZeroComparison,
    s: &Structure,
) -> Vec<String> {
    let mut out = Vec::new();
    match verdict.outcome {
        Outcome::NoCommonZeros if cmp.has_common_zero() => {
            out.push(format!(
                "verdict no_common_zeros but {} numerically common pair(s)",
                cmp.common.len()
            ));
        }
        Outcome::ZeroSetsCoincide => match matching_distance(&z1.points(), &z21.points()) {
            Some(d) if d <= MATCH_TOL => {}
            Some(d) => out.push(format!(
                "verdict zero_sets_coincide but zero sets differ by {d:e}"
            )),
            None => out.push(format!(
                "verdict zero_sets_coincide but zero counts differ ({} vs {})",
                z1.zeros.len(),
                z21.zeros.len()
            )),
        },
        _ => {}
    }
    // the flags describe F of the first density after ordering; F_{2,1} has
    // the conjugate zeros of F₂, which share both structural properties
    let first = if verdict.diagnostics.swapped {
        s.f21
    } else {
        s.f1
    };
    if verdict.no_real_zeros && !first.no_real_zeros {
        out.push("verdict claims no real zeros but a real zero was located".into());
    }
    if verdict.no_conjugate_pairs && !first.no_conjugate_pairs {
        out.push("verdict claims no conjugate pairs but one was located".into());
    }
    out
}

/// Reads `spec_path`, runs it and writes the JSON report to `out_path`.
/// Returns the report's exit code.
pub fn run(spec_path: &std::path::Path, out_path: &std::path::Path) -> Result<Report, RunError> {
    let text = std::fs::read_to_string(spec_path)
        .map_err(|e| RunError::Io(format!("{}: {e}", spec_path.display())))?;
    let spec = ProblemSpec::parse(&text)?;
    let report = run_spec(&spec)?;
    std::fs::write(out_path, report.to_json())
        .map_err(|e| RunError::Io(format!("{}: {e}", out_path.display())))?;
    Ok(report)
}

/// `|F₁|` and `|F_{2,1}|` on an `n × n` grid over the problem's rectangle, as
/// CSV rows `re,im,absF1,absF21`, row-major in `Im` then `Re`.
pub fn emit_grid(spec: &ProblemSpec, n: usize) -> Result<String, RunError> {
    let f1 = closed_form(&spec.psi1, &spec.a).map_err(RunError::Input)?;
    let f21 = reflected_transform(&spec.psi2, &spec.a).map_err(RunError::Input)?;
    let g1 = abs_grid(&f1, &spec.rect, n, n);
    let g21 = abs_grid(&f21, &spec.rect, n, n);
    let mut out = String::from("re,im,absF1,absF21\n");
    for ((x, y, v1), (_, _, v21)) in g1.into_iter().zip(g21) {
        out.push_str(&format!("{x:.17e},{y:.17e},{v1:.17e},{v21:.17e}\n"));
    }
    Ok(out)
}
