//! Command-line front end.
//!
//! Every command produces a JSON report and an exit code: `0` on success,
//! `1` when the input is well formed but a check fails, `2` on malformed or
//! invalid input. Reports are rendered with sorted keys so identical inputs
//! give byte-identical output.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::balance::{balance, unbalance_report};
use crate::curve::{
    arithmetic_genus, prune_ordering, validate_curve, CurveDocument, TreeLikeCurve,
};
use crate::dvr::{
    det_trace_identity, kernel_layer_element, sl_kernel_check, torsor_correct, TruncatedMatrix,
    TruncatedRing,
};
use crate::error::Error;
use crate::field::Field;
use crate::gpb::{
    build_rational_flag, check_no_kernel_section, check_projections, parabolic_slope,
    phi_rank_degree, picard_rth_root, rth_power, GluingFlag, GpbClass,
};
use crate::rational;
use crate::stability::{
    det_compatibility, lambda_check, polarization_from_ample, seshadri_slope, AmpleDegrees,
    Polarization,
};
use crate::twist::{euler_char_total, BundleClass};

#[derive(Debug, Parser)]
#[command(
    name = "nodal-stab",
    version,
    about = "Semistability checks and twist balancing on tree-like nodal curves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a curve document and report its genus.
    Validate(CurveArgs),
    /// Print the leaf-pruning order with G(i), B(i) and ν(i).
    Order(CurveArgs),
    /// Evaluate the λ-semistability windows of a bundle class.
    Check(ClassArgs),
    /// Twist a bundle class until it is λ-semistable.
    Balance(ClassArgs),
    /// Parabolic slopes, rational gluing flags, projection checks and roots.
    Gpb(GpbArgs),
    /// Determinant and trace identities over a truncated ring.
    Dvr(DvrArgs),
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub curve: PathBuf,
}

#[derive(Debug, Args)]
pub struct ClassArgs {
    #[arg(long)]
    pub curve: PathBuf,
    #[arg(long)]
    pub bundle: PathBuf,
    /// Polarization document; defaults to the ample degrees or to uniform weights.
    #[arg(long)]
    pub pol: Option<PathBuf>,
    /// Ample degrees document `{"degrees":{"1":2,...}}`.
    #[arg(long, conflicts_with = "pol")]
    pub ample: Option<PathBuf>,
    /// Determinant multidegree document `{"multidegree":{...}}`.
    #[arg(long)]
    pub det: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GpbArgs {
    /// Gluing flag document; checks both projections and single-factor
    /// intersections.
    #[arg(long)]
    pub flag: Option<PathBuf>,
    /// Field descriptor such as `F7` or `Q`.
    #[arg(long)]
    pub field: Option<Field>,
    #[arg(long)]
    pub rank: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub degree: Option<i64>,
    /// Number of nodes.
    #[arg(long, default_value_t = 1)]
    pub nodes: usize,
    /// Genus of the normalization.
    #[arg(long, default_value_t = 0)]
    pub genus: u32,
    /// Build the rational-normalization flag with this `a` (`r·a ≤ d`).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<i64>,
    /// Comma-separated gluing scalars to take `rank`-th roots of.
    #[arg(long, value_delimiter = ',')]
    pub roots: Vec<String>,
}

#[derive(Debug, Args)]
pub struct DvrArgs {
    /// Document `{"field":"F5","n":1,"matrix":[[1,2],[3,4]],"cocycle":[...],"gammas":[...]}`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub field: Option<Field>,
    /// Truncation order `n` (`π^{n+1} = 0`).
    #[arg(long)]
    pub n: Option<usize>,
    /// Matrix over the prime field, rows separated by `;`, e.g. `1,2;3,4`.
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,
}

/// Input for the `dvr` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DvrDocument {
    pub field: Field,
    pub n: usize,
    #[serde(default)]
    pub matrix: Option<Vec<Vec<i64>>>,
    /// Matrices over the truncated ring, entries as coefficient vectors.
    #[serde(default)]
    pub cocycle: Vec<Vec<Vec<Vec<i64>>>>,
    /// Coefficient vectors of scalars in `1 + πⁿR`.
    #[serde(default)]
    pub gammas: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
struct DetDocument {
    multidegree: BTreeMap<u32, i64>,
}

/// Report plus exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, code: 0 }
    }

    fn verdict(report: Value, pass: bool) -> Self {
        Outcome {
            report,
            code: if pass { 0 } else { 1 },
        }
    }
}

/// Failure that aborts a command.
#[derive(Debug)]
enum Failure {
    Input { kind: &'static str, message: String },
    Semantic(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure::Input {
            kind: "Usage",
            message: message.into(),
        }
    }

    fn into_outcome(self) -> Outcome {
        match self {
            Failure::Input { kind, message } => Outcome {
                report: json!({"error": {"kind": kind, "message": message}}),
                code: 2,
            },
            Failure::Semantic(e) => Outcome {
                report: json!({"error": {"kind": e.kind(), "message": e.to_string()}}),
                code: 1,
            },
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input {
        kind: "Io",
        message: format!("{}: {e}", path.display()),
    })?;
    serde_json::from_str(&text).map_err(|e| Failure::Input {
        kind: "ParseError",
        message: format!("{}: {e}", path.display()),
    })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Validate(args) => cmd_validate(args),
        Command::Order(args) => cmd_order(args),
        Command::Check(args) => cmd_check(args),
        Command::Balance(args) => cmd_balance(args),
        Command::Gpb(args) => cmd_gpb(args),
        Command::Dvr(args) => cmd_dvr(args),
    };
    result.unwrap_or_else(Failure::into_outcome)
}

/// Deterministic rendering: sorted keys, two-space indent, trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("values render");
    s.push('\n');
    s
}

fn cmd_validate(args: &CurveArgs) -> Result<Outcome, Failure> {
    let doc: CurveDocument = read_json(&args.curve)?;
    Ok(Outcome::ok(to_value(&validate_curve(&doc)?)))
}

fn load_curve(path: &Path) -> Result<TreeLikeCurve, Failure> {
    let doc: CurveDocument = read_json(path)?;
    Ok(TreeLikeCurve::try_from(doc)?)
}

fn cmd_order(args: &CurveArgs) -> Result<Outcome, Failure> {
    let curve = load_curve(&args.curve)?;
    let ord = prune_ordering(&curve);
    let steps: Vec<Value> = (0..curve.len())
        .map(|pos| {
            let good: Vec<u32> = ord.good(pos).iter().map(|&j| curve.id(j)).collect();
            let bad: Vec<u32> = curve.ids().filter(|id| !good.contains(id)).collect();
            json!({
                "index": pos + 1,
                "component": curve.id(ord.component_at(pos)),
                "next": ord.next(pos).map(|up| curve.id(ord.component_at(up))),
                "good": good,
                "bad": bad,
            })
        })
        .collect();
    Ok(Outcome::ok(json!({
        "ordering": ord.ids(&curve),
        "arithmetic_genus": arithmetic_genus(&curve),
        "steps": steps,
    })))
}

struct ClassInputs {
    curve: TreeLikeCurve,
    bundle: BundleClass,
    pol: Polarization,
}

fn load_class(args: &ClassArgs) -> Result<ClassInputs, Failure> {
    let curve = load_curve(&args.curve)?;
    let bundle: BundleClass = read_json(&args.bundle)?;
    bundle.check(&curve)?;
    let pol = match (&args.pol, &args.ample) {
        (Some(path), _) => read_json::<Polarization>(path)?,
        (None, Some(path)) => {
            let h: AmpleDegrees = read_json(path)?;
            h.check(&curve)?;
            polarization_from_ample(&h)?
        }
        (None, None) => Polarization::uniform(&curve),
    };
    pol.check(&curve)?;
    Ok(ClassInputs { curve, bundle, pol })
}

fn cmd_check(args: &ClassArgs) -> Result<Outcome, Failure> {
    let ClassInputs { curve, bundle, pol } = load_class(args)?;
    let ord = prune_ordering(&curve);
    let report = lambda_check(&curve, &ord, &bundle, &pol)?;
    let mut pass = report.pass;
    let mut out = json!({
        "lambda": to_value(&report),
        "seshadri_slope": rational::format(&seshadri_slope(&curve, &bundle, &pol)?),
        "unbalance": to_value(&unbalance_report(&curve, &bundle, &pol)?),
    });
    if let Some(path) = &args.det {
        let det: DetDocument = read_json(path)?;
        let verdict = det_compatibility(&curve, &bundle, &det.multidegree)?;
        pass &= verdict.pass;
        out["determinant"] = to_value(&verdict);
    }
    out["pass"] = json!(pass);
    Ok(Outcome::verdict(out, pass))
}

fn cmd_balance(args: &ClassArgs) -> Result<Outcome, Failure> {
    let ClassInputs { curve, bundle, pol } = load_class(args)?;
    let result = balance(&curve, &bundle, &pol)?;
    Ok(Outcome::ok(json!({
        "ordering": result.ordering,
        "twist": result.twist.coeffs,
        "multidegree": result.class.multidegree,
        "rank": result.class.rank,
        "chi": euler_char_total(&curve, &result.class)?,
        "steps": to_value(&result.steps),
    })))
}

fn cmd_gpb(args: &GpbArgs) -> Result<Outcome, Failure> {
    let mut out = serde_json::Map::new();
    let mut pass = true;

    if let Some(path) = &args.flag {
        let flag: GluingFlag = read_json(path)?;
        let proj = check_projections(&flag);
        let kernel = check_no_kernel_section(&flag);
        pass &= proj.locally_free && kernel.pass;
        out.insert("flag".into(), to_value(&flag));
        out.insert("projections".into(), to_value(&proj));
        out.insert("kernel".into(), to_value(&kernel));
    }

    if let (Some(rank), Some(degree)) = (args.rank, args.degree) {
        let class = GpbClass::canonical(rank, degree, args.nodes)?;
        out.insert(
            "parabolic_slope".into(),
            json!(rational::format(&parabolic_slope(&class)?)),
        );
        out.insert(
            "phi".into(),
            to_value(&phi_rank_degree(&class, args.genus)?),
        );

        if let Some(a) = args.a {
            let field = args.field.unwrap_or(Field::Rationals);
            match build_rational_flag(field, rank as usize, degree, a) {
                Ok(flag) => {
                    let proj = check_projections(&flag);
                    let kernel = check_no_kernel_section(&flag);
                    pass &= proj.locally_free && kernel.pass;
                    out.insert(
                        "rational_flag".into(),
                        json!({
                            "flag": to_value(&flag),
                            "projections": to_value(&proj),
                            "kernel": to_value(&kernel),
                        }),
                    );
                }
                Err(e @ (Error::SingularProjection { .. } | Error::DegreeBound { .. })) => {
                    pass = false;
                    out.insert(
                        "rational_flag".into(),
                        json!({"error": {"kind": e.kind(), "message": e.to_string()}}),
                    );
                }
                Err(e) => return Err(e.into()),
            }
        }
    }

    if !args.roots.is_empty() {
        let field = args
            .field
            .ok_or_else(|| Failure::usage("--roots needs --field"))?;
        let r = args
            .rank
            .ok_or_else(|| Failure::usage("--roots needs --rank"))?;
        let scalars = args
            .roots
            .iter()
            .map(|s| field.parse_elem(s))
            .collect::<Result<Vec<_>, _>>()?;
        match picard_rth_root(field, r, &scalars) {
            Ok(roots) => {
                let fmt = |xs: &[rational::Rational]| -> Vec<String> {
                    xs.iter().map(|x| field.format_elem(x)).collect()
                };
                out.insert(
                    "roots".into(),
                    json!({
                        "field": field,
                        "scalars": fmt(&scalars),
                        "roots": fmt(&roots),
                        "powers": fmt(&rth_power(field, r, &roots)),
                    }),
                );
            }
            Err(e @ Error::NoRoot(..)) => return Err(Failure::Semantic(e)),
            Err(e) => return Err(e.into()),
        }
    }

    if out.is_empty() {
        return Err(Failure::usage(
            "gpb needs --flag, --rank with --degree, or --roots",
        ));
    }
    out.insert("pass".into(), json!(pass));
    Ok(Outcome::verdict(Value::Object(out), pass))
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<i64>>, Failure> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim().parse::<i64>().map_err(|_| Failure::Input {
                        kind: "ParseError",
                        message: format!("matrix entry {x:?} is not an integer"),
                    })
                })
                .collect()
        })
        .collect()
}

fn cmd_dvr(args: &DvrArgs) -> Result<Outcome, Failure> {
    let doc = match (&args.input, args.field, args.n) {
        (Some(path), _, _) => read_json::<DvrDocument>(path)?,
        (None, Some(field), Some(n)) => DvrDocument {
            field,
            n,
            matrix: args.matrix.as_deref().map(parse_matrix).transpose()?,
            cocycle: Vec::new(),
            gammas: Vec::new(),
        },
        _ => return Err(Failure::usage("dvr needs --input, or --field with --n")),
    };
    let ring = TruncatedRing::new(doc.field, doc.n)?;
    let mut out = serde_json::Map::new();
    out.insert("ring".into(), json!(ring.to_string()));
    let mut pass = true;

    if let Some(a) = &doc.matrix {
        let identity = det_trace_identity(doc.field, a, doc.n)?;
        let kernel = sl_kernel_check(&kernel_layer_element(ring, a)?)?;
        pass &= identity.holds && kernel.agrees;
        out.insert("det_trace".into(), to_value(&identity));
        out.insert("sl_kernel".into(), to_value(&kernel));
    }

    if !doc.cocycle.is_empty() || !doc.gammas.is_empty() {
        let cocycle = doc
            .cocycle
            .iter()
            .map(|m| TruncatedMatrix::from_coeffs(ring, m))
            .collect::<Result<Vec<_>, _>>()?;
        let gammas = doc
            .gammas
            .iter()
            .map(|g| ring.scalar(g))
            .collect::<Result<Vec<_>, _>>()?;
        let corrected = torsor_correct(&cocycle, &gammas)?;
        let dets: Vec<Value> = corrected.iter().map(|m| to_value(&m.det())).collect();
        out.insert(
            "torsor".into(),
            json!({"corrected": to_value(&corrected), "determinants": dets}),
        );
    }

    if out.len() == 1 {
        return Err(Failure::usage("dvr needs a matrix or a cocycle"));
    }
    out.insert("pass".into(), json!(pass));
    Ok(Outcome::verdict(Value::Object(out), pass))
}
