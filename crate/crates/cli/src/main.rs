//! `vcfan`: classify, analyze and verify fans over the cut cube.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use vcfan_core::classify::{
    classification_report, cohomology_class_label, enumerate_type2, necklace_count,
    variety_isomorphic,
};
use vcfan_core::cohomology::{
    isotropic_mod_x, presentation_from_pair, ring_det_invariant, top_power_x, RingSummary,
};
use vcfan_core::fans::{
    fan_from_pair, fan_isomorphism, pair_from_fan, Fan, FanDocument, PairDocument, VcPair,
};
use vcfan_core::json::{ints, JsonInt};
use vcfan_core::projectivity::{
    build_lp, fan_projectivity, lp_feasible_fm, projectivity_report, ProjectivityDocument,
};
use vcfan_core::verify::{verify, VerificationReport};
use vcfan_core::Error;

#[derive(Parser)]
#[command(
    name = "vcfan",
    version,
    about = "Fans, cohomology and projectivity of toric manifolds over the cut cube"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, env = "VCFAN_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Type, determinant, normal form, labels and projectivity of a pair or fan.
    Classify {
        /// Pair or fan document; stdin when omitted or `-`.
        input: Option<PathBuf>,
        /// Skip the linear program.
        #[arg(long)]
        no_projectivity: bool,
    },
    /// Type 2 variety classes in dimension n.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long = "type", default_value_t = 2)]
        type_index: u8,
        #[arg(long)]
        no_projectivity: bool,
    },
    /// Betti numbers, relations and ring invariants.
    Cohomology { input: Option<PathBuf> },
    /// Projectivity decision with its certificate.
    Projective {
        input: Option<PathBuf>,
        /// Also decide by Fourier–Motzkin elimination (n <= 3 only).
        #[arg(long)]
        fm: bool,
    },
    /// Compares two pairs or fans.
    Iso { first: PathBuf, second: PathBuf },
    /// Emits the fan document of the input.
    Fan { input: Option<PathBuf> },
    /// Emits the pair document of the input.
    Pair { input: Option<PathBuf> },
    /// Runs the built-in checks of the classification results.
    VerifyPaper {
        /// A single claim id, or `all`.
        #[arg(long, default_value = "all")]
        scope: String,
    },
}

/// Failure category, mapped to the exit code.
enum Failure {
    /// A property check failed (exit 1).
    Property(String),
    /// The input was rejected (exit 2).
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Structural(_) => Failure::Property(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

enum Input {
    Pair(VcPair),
    Fan(Fan),
}

impl Input {
    fn pair(&self) -> Result<VcPair, Failure> {
        match self {
            Input::Pair(p) => Ok(p.clone()),
            Input::Fan(f) => Ok(pair_from_fan(f)?),
        }
    }

    fn fan(&self) -> Result<Fan, Failure> {
        match self {
            Input::Pair(p) => Ok(fan_from_pair(p)?),
            Input::Fan(f) => Ok(f.clone()),
        }
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<Input, Failure> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("cannot read stdin: {e}")))?;
            s
        }
    };
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Failure::Input("expected a JSON object".into()))?;
    if obj.contains_key("A") {
        let doc: PairDocument = serde_json::from_value(value)
            .map_err(|e| Failure::Input(format!("bad pair document: {e}")))?;
        Ok(Input::Pair(doc.to_pair()?))
    } else if obj.contains_key("rays") {
        let doc: FanDocument = serde_json::from_value(value)
            .map_err(|e| Failure::Input(format!("bad fan document: {e}")))?;
        Ok(Input::Fan(doc.to_fan()?))
    } else {
        Err(Failure::Input(
            "document has neither \"A\" (pair) nor \"rays\" (fan)".into(),
        ))
    }
}

#[derive(Serialize)]
struct EnumerateClass {
    a: Vec<i64>,
    ones: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    projective: Option<bool>,
}

#[derive(Serialize)]
struct EnumerateReport {
    n: usize,
    #[serde(rename = "type")]
    type_index: u8,
    count: usize,
    formula: JsonInt,
    #[serde(skip_serializing_if = "Option::is_none")]
    projective_count: Option<usize>,
    classes: Vec<EnumerateClass>,
}

#[derive(Serialize)]
struct Isotropic {
    exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<JsonInt>>,
}

#[derive(Serialize)]
struct RingInvariants {
    abs_det: JsonInt,
    top_power: JsonInt,
    isotropic_mod_x: Isotropic,
}

#[derive(Serialize)]
struct CohomologyReport {
    #[serde(flatten)]
    ring: RingSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    invariants: Option<RingInvariants>,
}

#[derive(Serialize)]
struct IsoReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    variety_isomorphic: Option<bool>,
    fans_isomorphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    permutation: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lattice_map: Option<Vec<Vec<JsonInt>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cohomology_labels_equal: Option<bool>,
}

fn cmd_classify(input: Option<&PathBuf>, projectivity: bool) -> Result<Value, Failure> {
    let p = read_input(input)?.pair()?;
    let report = classification_report(&p, projectivity)?;
    Ok(serde_json::to_value(report.to_document()).expect("serializable"))
}

fn cmd_enumerate(n: usize, type_index: u8, projectivity: bool) -> Result<Value, Failure> {
    if type_index != 2 {
        return Err(Failure::Input(
            "only Type 2 has finitely many classes per dimension".into(),
        ));
    }
    if !(3..=16).contains(&n) {
        return Err(Failure::Input(format!(
            "enumeration needs 3 <= n <= 16, got {n}"
        )));
    }
    let classes = enumerate_type2(n)?;
    let formula = necklace_count(n as u64)?;
    if num_bigint::BigInt::from(classes.len()) != formula.clone().into() {
        return Err(Failure::Property(format!(
            "enumerated {} classes but the formula gives {formula}",
            classes.len()
        )));
    }
    let mut out = Vec::with_capacity(classes.len());
    for a in classes {
        let projective = if projectivity {
            Some(projectivity_report(&VcPair::type2(&a)?)?.projective)
        } else {
            None
        };
        out.push(EnumerateClass {
            ones: a.iter().filter(|&&v| v == 1).count(),
            a,
            projective,
        });
    }
    let report = EnumerateReport {
        n,
        type_index,
        count: out.len(),
        formula: JsonInt(formula.into()),
        projective_count: projectivity
            .then(|| out.iter().filter(|c| c.projective == Some(true)).count()),
        classes: out,
    };
    Ok(serde_json::to_value(report).expect("serializable"))
}

fn cmd_cohomology(input: Option<&PathBuf>) -> Result<Value, Failure> {
    let p = read_input(input)?.pair()?;
    let r = presentation_from_pair(&p)?;
    let invariants = if p.n() >= 3 {
        let iso = isotropic_mod_x(&r)?;
        Some(RingInvariants {
            abs_det: JsonInt(ring_det_invariant(&r)?),
            top_power: JsonInt(top_power_x(&r)?),
            isotropic_mod_x: Isotropic {
                exists: iso.exists(),
                witness: iso.witness_class().map(|w| ints(&w.coords)),
            },
        })
    } else {
        None
    };
    let report = CohomologyReport {
        ring: r.summary(),
        invariants,
    };
    Ok(serde_json::to_value(report).expect("serializable"))
}

fn cmd_projective(input: Option<&PathBuf>, fm: bool) -> Result<Value, Failure> {
    let input = read_input(input)?;
    let doc: ProjectivityDocument = match &input {
        Input::Pair(p) if p.n() >= 3 => projectivity_report(p)?.to_document(),
        other => fan_projectivity(&other.fan()?)?.to_document(),
    };
    let mut out = serde_json::to_value(&doc).expect("serializable");
    if fm {
        let f = input.fan()?;
        if f.n() > 3 {
            return Err(Failure::Input(format!("--fm needs n <= 3, got {}", f.n())));
        }
        let fixed: Vec<usize> = (1..=f.n()).collect();
        let second = lp_feasible_fm(&build_lp(&f)?, &fixed);
        out["fourier_motzkin"] = Value::Bool(second);
        if second != doc.projective {
            return Err(Failure::Property(format!(
                "simplex says {} but Fourier–Motzkin says {second}",
                doc.projective
            )));
        }
    }
    Ok(out)
}

fn cmd_iso(first: &PathBuf, second: &PathBuf) -> Result<Value, Failure> {
    let (a, b) = (read_input(Some(first))?, read_input(Some(second))?);
    let (fa, fb) = (a.fan()?, b.fan()?);
    let found = if fa.n() == fb.n() {
        fan_isomorphism(&fa, &fb)?
    } else {
        None
    };
    let (pa, pb) = (a.pair()?, b.pair()?);
    let variety = if pa.n() >= 3 && pb.n() >= 3 {
        let v = variety_isomorphic(&pa, &pb)?;
        if v != found.is_some() {
            return Err(Failure::Property(
                "normal forms and the fan search disagree".into(),
            ));
        }
        Some(v)
    } else {
        None
    };
    let labels = Some(cohomology_class_label(&pa)? == cohomology_class_label(&pb)?);
    let report = IsoReport {
        variety_isomorphic: variety,
        fans_isomorphic: found.is_some(),
        permutation: found.as_ref().map(|(s, _)| s.images_one_based()),
        lattice_map: found
            .as_ref()
            .map(|(_, r)| r.to_rows().iter().map(|row| ints(row)).collect()),
        cohomology_labels_equal: labels,
    };
    Ok(serde_json::to_value(report).expect("serializable"))
}

fn cmd_verify(scope: &str, seed: u64) -> Result<(Value, bool), Failure> {
    let scope = (scope != "all").then_some(scope);
    let report: VerificationReport = verify(scope, seed)?;
    let ok = report.all_passed();
    Ok((serde_json::to_value(report).expect("serializable"), ok))
}

/// Plain-text rendering: aligned `key  value` lines, with arrays of objects
/// as tables.
fn render_text(v: &Value) -> String {
    let mut out = String::new();
    let Value::Object(map) = v else {
        return format!("{v}\n");
    };
    let width = map.keys().map(String::len).max().unwrap_or(0);
    let mut tables = Vec::new();
    for (k, val) in map {
        match val {
            Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
                tables.push((k, items));
            }
            Value::Object(_) => {
                out.push_str(&format!("{k}:\n"));
                for line in render_text(val).lines() {
                    out.push_str(&format!("  {line}\n"));
                }
            }
            _ => out.push_str(&format!("{k:<width$}  {}\n", scalar(val))),
        }
    }
    for (name, items) in tables {
        out.push_str(&format!("\n{name}:\n"));
        let cols: Vec<&String> = items[0].as_object().expect("object").keys().collect();
        let cells: Vec<Vec<String>> = items
            .iter()
            .map(|it| {
                cols.iter()
                    .map(|c| it.get(c.as_str()).map(scalar).unwrap_or_default())
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = cols
            .iter()
            .enumerate()
            .map(|(i, c)| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain([c.len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |row: Vec<String>| -> String {
            row.iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        out.push_str(&line(cols.iter().map(|c| c.to_string()).collect()));
        out.push('\n');
        for row in cells {
            out.push_str(&line(row));
            out.push('\n');
        }
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn run(cli: &Cli) -> Result<(Value, bool), Failure> {
    let ok = |v: Value| Ok((v, true));
    match &cli.command {
        Command::Classify {
            input,
            no_projectivity,
        } => ok(cmd_classify(input.as_ref(), !no_projectivity)?),
        Command::Enumerate {
            n,
            type_index,
            no_projectivity,
        } => ok(cmd_enumerate(*n, *type_index, !no_projectivity)?),
        Command::Cohomology { input } => ok(cmd_cohomology(input.as_ref())?),
        Command::Projective { input, fm } => ok(cmd_projective(input.as_ref(), *fm)?),
        Command::Iso { first, second } => ok(cmd_iso(first, second)?),
        Command::Fan { input } => ok(serde_json::to_value(
            read_input(input.as_ref())?.fan()?.to_document(),
        )
        .expect("serializable")),
        Command::Pair { input } => ok(serde_json::to_value(
            read_input(input.as_ref())?.pair()?.to_document(),
        )
        .expect("serializable")),
        Command::VerifyPaper { scope } => cmd_verify(scope, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match run(&cli) {
        Ok((value, passed)) => {
            let text = match cli.format {
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&value).expect("serializable")
                ),
                Format::Text => render_text(&value),
            };
            print!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Property(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
