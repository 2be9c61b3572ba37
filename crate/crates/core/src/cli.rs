//! Command-line front end.
//!
//! Exit codes: `0` success, `2` input error, `3` verification failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::coeff::CoefficientScheme;
use crate::derivative::{derivative, derivative_via_mobius, is_boolean_derivative};
use crate::error::{Error, Result};
use crate::interaction::{
    efficiency_check, interaction_direct, interaction_mobius, ltilde_targets, recursion_check, InteractionReport,
    Method, ReportRow,
};
use crate::io::{dense_values_json, function_fingerprint, parse_attributes, parse_model, parse_values, split_labels, Values};
use crate::product::{ProductElement, ProductLattice, DEFAULT_MAX_ELEMENTS};
use crate::transforms::{mobius, zeta, LatticeFunction};
use crate::value::{format_decimal, format_rational, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

const DIGITS: usize = 12;
const MAX_DERIVATIVE_PAIRS: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "latint", version, about = "Interaction indices on products of finite lattices")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest product that may be enumerated.
    #[arg(long, global = true, env = "LATINT_MAX_ELEMENTS")]
    pub max_elements: Option<u128>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structure report for every attribute of a model.
    Check(CheckArgs),
    /// Möbius transform of a function (or its inverse).
    Mobius(MobiusArgs),
    /// Derivative of a function with respect to an element.
    Derivative(DerivativeArgs),
    /// Importance and interaction indices.
    Interact(InteractArgs),
    /// Run identity checks on a function.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Shapley,
    Banzhaf,
}

impl SchemeArg {
    fn scheme(self) -> CoefficientScheme {
        match self {
            SchemeArg::Shapley => CoefficientScheme::shapley(),
            SchemeArg::Banzhaf => CoefficientScheme::banzhaf(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Mobius,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Efficiency,
    Recursion,
    MobiusEquiv,
    DerivativeBoolean,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Efficiency => "efficiency",
            Suite::Recursion => "recursion",
            Suite::MobiusEquiv => "mobius-equiv",
            Suite::DerivativeBoolean => "derivative-boolean",
        }
    }
}

#[derive(Debug, Args)]
pub struct Inputs {
    /// Model JSON; optional for capacity and bi-capacity values.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Values JSON.
    #[arg(long)]
    pub values: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MobiusArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Treat the values as Möbius masses and rebuild the function.
    #[arg(long)]
    pub inverse: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DerivativeArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Element to differentiate by, labels separated by commas.
    #[arg(long)]
    pub y: String,
    /// Point of evaluation (default: bottom).
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InteractArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long, value_enum, default_value = "shapley")]
    pub scheme: SchemeArg,
    /// `all`, `all-ltilde`, `all-irreducible`, or an element as labels
    /// separated by commas; repeatable.
    #[arg(long, default_value = "all")]
    pub target: Vec<String>,
    #[arg(long, value_enum, default_value = "direct")]
    pub method: MethodArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Suites to run (default: all); repeatable.
    #[arg(long, value_enum)]
    pub suite: Vec<Suite>,
    #[arg(long, value_enum, default_value = "shapley")]
    pub scheme: SchemeArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn run(cli: Cli) -> i32 {
    if let Some(t) = cli.threads {
        // the global pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let limit = cli.max_elements.unwrap_or(DEFAULT_MAX_ELEMENTS);
    let result = match cli.command {
        Command::Check(a) => cmd_check(&a),
        Command::Mobius(a) => cmd_mobius(&a, limit),
        Command::Derivative(a) => cmd_derivative(&a, limit),
        Command::Interact(a) => cmd_interact(&a, limit),
        Command::Verify(a) => cmd_verify(&a, limit),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Parse(format!("stdout: {e}")))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn load(inputs: &Inputs, limit: u128) -> Result<Values> {
    let model = match &inputs.model {
        Some(path) => Some(Arc::new(parse_model(&read(path)?)?.with_max_elements(limit))),
        None => None,
    };
    let values = parse_values(&read(&inputs.values)?, model)?;
    if inputs.model.is_none() {
        // shorthand domains are built with the default limit
        if let Values::Dense(f) = values {
            let values_domain = f.domain_arc().clone();
            let domain = Arc::new(f.domain_arc().as_ref().clone().with_max_elements(limit));
            return LatticeFunction::new(domain, f.into_values()).map(Values::Dense).map_err(|e| hint(e, &values_domain));
        }
    }
    Ok(values)
}

fn hint(e: Error, domain: &ProductLattice) -> Error {
    match e {
        Error::Size { .. } if domain.lattices().all(|l| l.len() <= 3 && l.flags().is_linear) => Error::Parse(format!(
            "{e}; for products of two- or three-element chains use the bitset path (capacity / bi-capacity values with the classical API) or raise --max-elements"
        )),
        other => other,
    }
}

fn dense(values: &Values) -> Result<LatticeFunction<Rational>> {
    values.to_dense().map_err(|e| hint(e, values.domain()))
}

fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn decimal_json(r: &Rational) -> Value {
    Value::String(format_decimal(r, DIGITS))
}

fn labels_json(p: &ProductLattice, x: &ProductElement) -> Value {
    Value::from(p.labels(x))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

fn attribute_names(p: &ProductLattice) -> Vec<String> {
    p.attributes().iter().map(|a| a.name.clone()).collect()
}

fn cmd_check(args: &CheckArgs) -> Result<i32> {
    let attributes = parse_attributes(&read(&args.model)?)?;
    let mut warnings = Vec::new();
    let mut rows = Vec::new();
    let mut all_lattices = true;
    let mut irreducible_total = 0usize;
    let mut size: u128 = 1;
    for (name, l) in &attributes {
        let flags = l.flags();
        all_lattices &= flags.is_lattice;
        size = size.saturating_mul(l.len() as u128);
        let mut row = json!({ "name": name, "elements": l.len(), "flags": flags });
        if flags.is_lattice {
            let ji: Vec<&str> = l.join_irreducibles().members.iter().map(|&e| l.label(e)).collect();
            irreducible_total += ji.len();
            row["join_irreducibles"] = Value::from(ji);
            if !flags.is_lower_locally_distributive {
                warnings.push(format!("attribute `{name}` is not lower locally distributive; some targets have no unique minimal decomposition"));
            }
            if !flags.is_distributive {
                warnings.push(format!("attribute `{name}` is not distributive; Möbius-side indices are unavailable"));
            }
        } else {
            warnings.push(format!("attribute `{name}` is not a lattice"));
        }
        rows.push(row);
    }
    let report = json!({
        "attributes": rows,
        "product_size": size.to_string(),
        "join_irreducibles": irreducible_total,
        "warnings": warnings,
    });
    emit(args.out.as_ref(), &pretty(&report))?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    Ok(if all_lattices { EXIT_OK } else { EXIT_INPUT })
}

fn cmd_mobius(args: &MobiusArgs, limit: u128) -> Result<i32> {
    let input = dense(&load(&args.inputs, limit)?)?;
    let output = if args.inverse { zeta(&input) } else { mobius(&input) };
    let (v, m) = if args.inverse { (&output, &input) } else { (&input, &output) };
    let p = input.domain_arc();
    let text = match args.format {
        Format::Json => {
            let rows: Vec<Value> = v
                .iter()
                .zip(m.values())
                .map(|((x, gv), mv)| {
                    json!({
                        "point": labels_json(p, &x),
                        "v": rational_json(gv),
                        "m": rational_json(mv),
                        "v_decimal": decimal_json(gv),
                        "m_decimal": decimal_json(mv),
                    })
                })
                .collect();
            let mut doc = dense_values_json(&output);
            doc["attributes"] = Value::from(attribute_names(p));
            doc["transform"] = Value::from(if args.inverse { "zeta" } else { "mobius" });
            doc["lattice_fingerprint"] = Value::from(p.fingerprint());
            doc["rows"] = Value::from(rows);
            pretty(&doc)
        }
        Format::Csv => {
            let mut header = attribute_names(p);
            header.extend(["v", "m", "v_decimal", "m_decimal"].map(String::from));
            let mut text = csv_line(&header);
            for ((x, gv), mv) in v.iter().zip(m.values()) {
                let mut fields = p.labels(&x);
                fields.extend([format_rational(gv), format_rational(mv), format_decimal(gv, DIGITS), format_decimal(mv, DIGITS)]);
                text.push_str(&csv_line(&fields));
            }
            text
        }
    };
    emit(args.out.as_ref(), &text)?;
    Ok(EXIT_OK)
}

fn parse_element(p: &ProductLattice, text: &str) -> Result<ProductElement> {
    p.parse_labels(&split_labels(text))
}

fn cmd_derivative(args: &DerivativeArgs, limit: u128) -> Result<i32> {
    let values = load(&args.inputs, limit)?;
    let p = values.domain().clone();
    let y = parse_element(&p, &args.y)?;
    let x = match &args.x {
        Some(t) => parse_element(&p, t)?,
        None => p.bottom(),
    };
    let value = derivative(&values, &y, &x)?;
    let members: Vec<Value> = p
        .minimal_decomposition(&y)?
        .into_iter()
        .map(|i| labels_json(&p, &p.irreducible_point(i)))
        .collect();
    let boolean = is_boolean_derivative(&p, &y, &x)?;
    let mut report = json!({
        "y": labels_json(&p, &y),
        "x": labels_json(&p, &x),
        "decomposition": members,
        "value": rational_json(&value),
        "decimal": decimal_json(&value),
        "boolean": boolean,
    });
    if boolean {
        if let Ok(f) = values.to_dense() {
            let via = derivative_via_mobius(&mobius(&f), &y, &x)?;
            report["via_mobius"] = rational_json(&via);
        }
    }
    emit(args.out.as_ref(), &pretty(&report))?;
    Ok(EXIT_OK)
}

fn targets(p: &ProductLattice, specs: &[String]) -> Result<Vec<ProductElement>> {
    let mut out = Vec::new();
    for spec in specs {
        match spec.as_str() {
            "all" | "all-ltilde" => out.extend(ltilde_targets(p)?),
            "all-irreducible" => out.extend(p.join_irreducibles().into_iter().map(|i| p.irreducible_point(i))),
            labels => out.push(parse_element(p, labels)?),
        }
    }
    Ok(out)
}

fn cell(v: Option<&Rational>, f: fn(&Rational) -> String) -> String {
    v.map(f).unwrap_or_default()
}

fn decimal(r: &Rational) -> String {
    format_decimal(r, DIGITS)
}

fn row_json(p: &ProductLattice, row: &ReportRow<Rational>) -> Value {
    let names = attribute_names(p);
    let mut obj = json!({
        "target": labels_json(p, &row.target),
        "support": row.support.iter().map(|&k| names[k].clone()).collect::<Vec<_>>(),
        "extended": row.extended,
    });
    if let Some(v) = row.value() {
        obj["value"] = rational_json(v);
        obj["decimal"] = decimal_json(v);
    }
    if let Some(v) = &row.direct {
        obj["direct"] = rational_json(v);
    }
    if let Some(v) = &row.mobius {
        obj["mobius"] = rational_json(v);
    }
    if let Some(a) = row.agreement() {
        obj["agree"] = Value::from(a);
    }
    if let Some(reason) = &row.skipped {
        obj["skipped"] = Value::from(reason.clone());
    }
    obj
}

fn cmd_interact(args: &InteractArgs, limit: u128) -> Result<i32> {
    let values = load(&args.inputs, limit)?;
    let p = values.domain().clone();
    let scheme = args.scheme.scheme();
    let method = match args.method {
        MethodArg::Direct => Method::Direct,
        MethodArg::Mobius => Method::Mobius,
        MethodArg::Both => Method::Both,
    };
    let dense_values = if method != Method::Direct && p.all_distributive() { Some(dense(&values)?) } else { None };
    let masses = dense_values.as_ref().map(mobius);
    let targets = targets(&p, &args.target)?;
    let mut report = InteractionReport::compute(&values, masses.as_ref(), &targets, &scheme, method);
    report.function_fingerprint = dense_values.as_ref().map(function_fingerprint);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let text = match args.format {
        Format::Json => {
            let doc = json!({
                "scheme": report.scheme,
                "method": report.method.name(),
                "lattice_fingerprint": report.lattice_fingerprint,
                "function_fingerprint": report.function_fingerprint,
                "attributes": attribute_names(&p),
                "warnings": report.warnings,
                "rows": report.rows.iter().map(|r| row_json(&p, r)).collect::<Vec<_>>(),
            });
            pretty(&doc)
        }
        Format::Csv => {
            let names = attribute_names(&p);
            let mut header = names.clone();
            header.extend(
                ["support", "value", "decimal", "direct", "mobius", "agree", "extended", "skipped"].map(String::from),
            );
            let mut text = csv_line(&header);
            for row in &report.rows {
                let mut fields = p.labels(&row.target);
                let support: Vec<&str> = row.support.iter().map(|&k| names[k].as_str()).collect();
                fields.push(support.join(" "));
                fields.push(cell(row.value(), format_rational));
                fields.push(cell(row.value(), decimal));
                fields.push(cell(row.direct.as_ref(), format_rational));
                fields.push(cell(row.mobius.as_ref(), format_rational));
                fields.push(row.agreement().map(|a| a.to_string()).unwrap_or_default());
                fields.push(row.extended.to_string());
                fields.push(row.skipped.clone().unwrap_or_default());
                text.push_str(&csv_line(&fields));
            }
            text
        }
    };
    emit(args.out.as_ref(), &text)?;
    Ok(if report.disagreements() > 0 { EXIT_VERIFY } else { EXIT_OK })
}

struct SuiteResult {
    status: &'static str,
    detail: Value,
}

fn skipped(reason: impl std::fmt::Display) -> SuiteResult {
    SuiteResult { status: "skipped", detail: json!({ "reason": reason.to_string() }) }
}

fn tally(checks: usize, failures: Vec<Value>) -> SuiteResult {
    let status = if failures.is_empty() { "pass" } else { "fail" };
    SuiteResult { status, detail: json!({ "checks": checks, "failures": failures.len(), "failed": failures }) }
}

fn run_suite(suite: Suite, values: &Values, scheme: &CoefficientScheme) -> Result<SuiteResult> {
    let p = values.domain();
    match suite {
        Suite::Efficiency => {
            if !p.all_linear() {
                return Ok(skipped("efficiency is checked on products of chains only"));
            }
            if scheme.name() != "shapley" {
                return Ok(skipped("efficiency characterizes the Shapley scheme"));
            }
            let out = efficiency_check(values, scheme)?;
            Ok(SuiteResult {
                status: if out.pass { "pass" } else { "fail" },
                detail: json!({ "lhs": rational_json(&out.lhs), "rhs": rational_json(&out.rhs) }),
            })
        }
        Suite::Recursion => {
            if !p.all_linear() {
                return Ok(skipped("the recursion applies to products of chains only"));
            }
            let mut failures = Vec::new();
            let targets = ltilde_targets(p)?;
            for x in &targets {
                let out = recursion_check(values, x, scheme)?;
                if !out.pass {
                    failures.push(json!({ "target": labels_json(p, x), "lhs": rational_json(&out.lhs), "rhs": rational_json(&out.rhs) }));
                }
            }
            Ok(tally(targets.len(), failures))
        }
        Suite::MobiusEquiv => {
            if !p.all_distributive() {
                return Ok(skipped("the Möbius-side formula needs distributive attributes"));
            }
            let m = mobius(&dense(values)?);
            let mut failures = Vec::new();
            let targets = ltilde_targets(p)?;
            for x in &targets {
                let a = interaction_direct(values, x, scheme)?;
                let b = interaction_mobius(&m, x, scheme)?;
                if a != b {
                    failures.push(json!({ "target": labels_json(p, x), "direct": rational_json(&a), "mobius": rational_json(&b) }));
                }
            }
            Ok(tally(targets.len(), failures))
        }
        Suite::DerivativeBoolean => {
            let f = dense(values)?;
            let size = f.values().len();
            if size.saturating_mul(size) > MAX_DERIVATIVE_PAIRS {
                return Ok(skipped(format!("{size}^2 pairs exceed the limit of {MAX_DERIVATIVE_PAIRS}")));
            }
            let m = mobius(&f);
            let elements: Vec<ProductElement> = p.elements()?.collect();
            let mut checks = 0;
            let mut failures = Vec::new();
            for y in &elements {
                if p.minimal_decomposition(y).is_err() {
                    continue;
                }
                for x in &elements {
                    if !is_boolean_derivative(p, y, x)? {
                        continue;
                    }
                    checks += 1;
                    let a = derivative(&f, y, x)?;
                    let b = derivative_via_mobius(&m, y, x)?;
                    if a != b {
                        failures.push(json!({ "y": labels_json(p, y), "x": labels_json(p, x), "derivative": rational_json(&a), "mobius": rational_json(&b) }));
                    }
                }
            }
            Ok(tally(checks, failures))
        }
    }
}

fn cmd_verify(args: &VerifyArgs, limit: u128) -> Result<i32> {
    let values = load(&args.inputs, limit)?;
    let scheme = args.scheme.scheme();
    let suites = if args.suite.is_empty() {
        vec![Suite::Efficiency, Suite::Recursion, Suite::MobiusEquiv, Suite::DerivativeBoolean]
    } else {
        args.suite.clone()
    };
    let mut rows = Vec::new();
    let mut failed = false;
    for suite in suites {
        let result = run_suite(suite, &values, &scheme)?;
        failed |= result.status == "fail";
        let mut row = json!({ "suite": suite.name(), "status": result.status });
        if let (Value::Object(dst), Value::Object(src)) = (&mut row, result.detail) {
            dst.extend(src);
        }
        rows.push(row);
    }
    let doc = json!({ "scheme": scheme.name(), "pass": !failed, "suites": rows });
    emit(args.out.as_ref(), &pretty(&doc))?;
    Ok(if failed { EXIT_VERIFY } else { EXIT_OK })
}
