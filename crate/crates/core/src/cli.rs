//! Command-line front end. `run` parses arguments, dispatches to the
//! pipelines and writes the report; the binary only maps the result to an
//! exit status.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::latex::{ratfn_latex, var_latex};
use crate::algebra::{parse_number, var, RatFn, Scalar};
use crate::cartan::{run_cartan, Branch, CartanError, CartanRun};
use crate::exterior::{dual_structure, StructureEquationSet};
use crate::liealg::{lie_pipeline, maurer_cartan, GradedLieAlgebra, LieError};
use crate::model::{builtin_m14, builtin_m14_symbolic, parse_model, CRModel, ModelError};
use crate::moduli::{
    cartan_invariant, decide_from_reports, invariance_oracle, invariant_checked, lie_invariant, seed_from_env, BranchChoice, InvariantReport,
    ModuliError,
};
use crate::vecfield::{build_frame, commutator_table, Frame, StructureFunctions, VecFieldError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MATH: i32 = 2;

const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{kind}: {msg}")]
    Math { kind: &'static str, msg: String },
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Math { .. } => EXIT_MATH,
        }
    }

    /// One-line diagnostic for the error stream.
    pub fn diagnostic(&self) -> String {
        match self {
            CliError::Usage(m) => format!("error[usage]: {m}"),
            CliError::Io(m) => format!("error[io]: {m}"),
            CliError::Math { kind, msg } => format!("error[{kind}]: {msg}"),
        }
    }
}

fn math(kind: &'static str, e: impl ToString) -> CliError {
    CliError::Math { kind, msg: e.to_string() }
}

impl From<ModuliError> for CliError {
    fn from(e: ModuliError) -> Self {
        match e {
            ModuliError::DegenerateModel(_) => math("degenerate-model", e),
            ModuliError::NotInFamily => CliError::Usage(e.to_string()),
            ModuliError::PipelineMismatch(_) => math("pipeline-mismatch", e),
            ModuliError::OracleViolation(_) => math("oracle-violation", e),
            ModuliError::Cartan(c) => c.into(),
            ModuliError::Lie(l) => l.into(),
            e => math("failure", e),
        }
    }
}

impl From<CartanError> for CliError {
    fn from(e: CartanError) -> Self {
        match e {
            CartanError::DegenerateModel(_) => math("degenerate-model", e),
            CartanError::NormalizationFailed(_) => math("normalization-failed", e),
            e => math("failure", e),
        }
    }
}

impl From<VecFieldError> for CliError {
    fn from(e: VecFieldError) -> Self {
        math("degenerate-model", e)
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> Self {
        match e {
            LieError::Table(_) => CliError::Usage(e.to_string()),
            e => math("failure", e),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "cr-moduli", version, about = "Moduli of type (1,4) CR-models: Cartan and Lie pipelines, invariant and equivalence")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frame L, Lbar, T, S, Sbar, U of the model
    Frame {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Commutator table of the frame
    Table {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Structure equations of the dual coframe
    Coframe {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Stage-by-stage Cartan equivalence run
    Cartan {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "+1", allow_hyphen_values = true, value_parser = parse_branch)]
        branch: BranchChoice,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Maurer-Cartan equations of g(r,b) and their rescaling
    Lie {
        /// Modulus r = |a|; symbolic when omitted
        #[arg(long, allow_hyphen_values = true, conflicts_with = "table")]
        r: Option<String>,
        /// Real parameter b; symbolic when omitted
        #[arg(long, allow_hyphen_values = true, conflicts_with = "table")]
        b: Option<String>,
        /// Lie algebra table (JSON) whose Maurer-Cartan equations to print
        #[arg(long)]
        table: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Class tag and invariant of a model
    Invariant {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = PipelineArg::Cartan)]
        pipeline: PipelineArg,
        #[arg(long, default_value = "+1", allow_hyphen_values = true, value_parser = parse_branch)]
        branch: BranchChoice,
        /// Include the pipeline name and the derivation trail in JSON output
        #[arg(long)]
        trail: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Decide equivalence of two models
    Equiv {
        /// First model: `a=..,b=..` or a model file
        #[arg(long)]
        m1: String,
        /// Second model: `a=..,b=..` or a model file
        #[arg(long)]
        m2: String,
        #[arg(long, value_enum, default_value_t = PipelineArg::Cartan)]
        pipeline: PipelineArg,
        #[arg(long, default_value = "+1", allow_hyphen_values = true, value_parser = parse_branch)]
        branch: BranchChoice,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check invariance under random admissible transformations
    Oracle {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// RNG seed; falls back to CR_MODULI_SEED, then 0
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Built-in family (only `m14`)
    #[arg(long, conflicts_with = "model")]
    pub builtin: Option<String>,
    /// Parameter a as an exact literal such as `1+1i` or `1/2-3/4i`
    #[arg(long, allow_hyphen_values = true, conflicts_with = "model")]
    pub a: Option<String>,
    /// Parameter b as an exact literal
    #[arg(long, allow_hyphen_values = true, conflicts_with = "model")]
    pub b: Option<String>,
    /// Model file in the model DSL
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PipelineArg {
    Cartan,
    Lie,
    /// Both pipelines, required to agree
    Both,
}

fn parse_branch(s: &str) -> Result<BranchChoice, String> {
    match s {
        "+1" | "1" | "plus" => Ok(BranchChoice::One(Branch::Plus)),
        "-1" | "minus" => Ok(BranchChoice::One(Branch::Minus)),
        "both" => Ok(BranchChoice::Both),
        _ => Err(format!("expected +1, -1 or both, found '{s}'")),
    }
}

fn branches(c: BranchChoice) -> Vec<Branch> {
    match c {
        BranchChoice::One(b) => vec![b],
        BranchChoice::Both => Branch::BOTH.to_vec(),
    }
}

fn literal(name: &str, s: &str) -> Result<Scalar, CliError> {
    let g = parse_number(s).map_err(|e| CliError::Usage(format!("--{name} '{s}': {e}")))?;
    Ok(RatFn::constant(g))
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_model_file(path: &PathBuf) -> Result<CRModel, CliError> {
    let text = read_file(path)?;
    parse_model(&text).map_err(|e: ModelError| CliError::Usage(format!("{}: {e}", path.display())))
}

impl ModelArgs {
    /// The model named by the arguments. Without any source the family is
    /// left symbolic; a missing `a` or `b` stays symbolic as well.
    pub fn resolve(&self) -> Result<CRModel, CliError> {
        if let Some(p) = &self.model {
            return load_model_file(p);
        }
        if let Some(name) = &self.builtin {
            if name != "m14" {
                return Err(CliError::Usage(format!("unknown builtin '{name}' (available: m14)")));
            }
        }
        if self.a.is_none() && self.b.is_none() {
            return Ok(builtin_m14_symbolic());
        }
        let a = match &self.a {
            Some(s) => literal("a", s)?,
            None => RatFn::var(var::A),
        };
        let b = match &self.b {
            Some(s) => {
                let b = literal("b", s)?;
                if b.conj() != b {
                    return Err(CliError::Usage(format!("--b '{s}' must be real")));
                }
                b
            }
            None => RatFn::var(var::B),
        };
        Ok(builtin_m14(&a, &b))
    }
}

/// `a=..,b=..` or a model file path.
fn model_slot(spec: &str) -> Result<CRModel, CliError> {
    if !spec.contains('=') {
        return load_model_file(&PathBuf::from(spec));
    }
    let mut args = ModelArgs { builtin: None, a: None, b: None, model: None };
    for part in spec.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| CliError::Usage(format!("expected key=value in '{part}'")))?;
        let slot = match k.trim() {
            "a" => &mut args.a,
            "b" => &mut args.b,
            other => return Err(CliError::Usage(format!("unknown model key '{other}' (expected a or b)"))),
        };
        if slot.is_some() {
            return Err(CliError::Usage(format!("duplicate key '{}'", k.trim())));
        }
        *slot = Some(v.trim().to_string());
    }
    if args.a.is_none() || args.b.is_none() {
        return Err(CliError::Usage(format!("model '{spec}' needs both a and b")));
    }
    args.resolve()
}

fn report(m: &CRModel, pipeline: PipelineArg, branch: BranchChoice) -> Result<InvariantReport, CliError> {
    Ok(match pipeline {
        PipelineArg::Cartan => cartan_invariant(m, branch)?,
        PipelineArg::Lie => lie_invariant(m)?,
        PipelineArg::Both => invariant_checked(m, branch)?,
    })
}

fn json_line(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

fn no_latex(what: &str) -> CliError {
    CliError::Usage(format!("latex output is not available for {what}"))
}

fn role_latex(r: &str) -> String {
    match r.strip_suffix("bar") {
        Some(base) if !base.is_empty() => format!("\\bar{{{base}}}"),
        _ => r.to_string(),
    }
}

fn aligned(lines: &[String]) -> String {
    format!("\\begin{{aligned}}\n{}\n\\end{{aligned}}\n", lines.join(" \\\\\n"))
}

fn coeff_latex(c: &RatFn) -> String {
    if c.is_one() {
        String::new()
    } else if c.num().len() == 1 && c.is_polynomial() {
        ratfn_latex(c)
    } else {
        format!("\\left({}\\right)", ratfn_latex(c))
    }
}

fn render_frame(f: &Frame, fmt: Format) -> String {
    match fmt {
        Format::Text => {
            let mut s = String::new();
            for (r, v) in f.roles.iter().zip(&f.fields) {
                s.push_str(&format!("{r} = {v}\n"));
            }
            s.push_str(&format!("# U from {}\n", f.u_source));
            s
        }
        Format::Json => {
            let fields: serde_json::Map<String, Value> = f.roles.iter().zip(&f.fields).map(|(r, v)| (r.clone(), v.to_json())).collect();
            json_line(&json!({
                "coordinates": f.space.coords().iter().map(|c| c.name()).collect::<Vec<_>>(),
                "roles": f.roles,
                "fields": fields,
                "u_source": f.u_source,
                "determinant": f.determinant.to_string(),
            }))
        }
        Format::Latex => {
            let lines: Vec<String> = f
                .roles
                .iter()
                .zip(&f.fields)
                .map(|(r, v)| {
                    let terms: Vec<String> =
                        v.components().map(|(x, c)| format!("{}\\frac{{\\partial}}{{\\partial {}}}", coeff_latex(c), var_latex(*x))).collect();
                    let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                    format!("{} &= {}", role_latex(r), body)
                })
                .collect();
            aligned(&lines)
        }
    }
}

fn render_table(t: &StructureFunctions, fmt: Format) -> String {
    match fmt {
        Format::Text => t.to_string(),
        Format::Json => json_line(&t.to_json()),
        Format::Latex => {
            let mut lines = Vec::new();
            for i in 0..t.dim() {
                for j in i + 1..t.dim() {
                    let terms: Vec<String> = (0..t.dim())
                        .filter_map(|k| {
                            let c = t.coeff(i, j, k);
                            (!c.is_zero()).then(|| format!("{}{}", coeff_latex(&c), role_latex(&t.roles[k])))
                        })
                        .collect();
                    if terms.is_empty() {
                        continue;
                    }
                    lines.push(format!("[{}, {}] &= {}", role_latex(&t.roles[i]), role_latex(&t.roles[j]), terms.join(" + ")));
                }
            }
            aligned(&lines)
        }
    }
}

fn set_text(s: &StructureEquationSet) -> String {
    let mut out = format!("== {} ==\n{}", s.stage, s.render_text());
    if !out.ends_with('\n') {
        out.push('\n');
    }
    for n in &s.notes {
        out.push_str(&format!("# {n}\n"));
    }
    out
}

fn render_set(s: &StructureEquationSet, fmt: Format) -> String {
    match fmt {
        Format::Text => set_text(s),
        Format::Json => json_line(&s.to_json()),
        Format::Latex => format!("{}\n", s.render_latex()),
    }
}

fn map_text(title: &str, v: &Value) -> String {
    let mut s = format!("-- {title} --\n");
    if let Some(m) = v.as_object() {
        for (k, x) in m {
            s.push_str(&format!("{k} = {}\n", x.as_str().unwrap_or_default()));
        }
    }
    s
}

fn cartan_text(run: &CartanRun) -> String {
    let mut s = format!("branch {}\n", run.branch.eps());
    s.push_str(&set_text(&run.lifted.base));
    s.push_str(&set_text(&run.structure));
    s.push_str(&map_text("torsions", &run.torsion.to_json()));
    s.push_str(&format!("== absorbed ==\nrank {}\n", run.absorption.rank));
    s.push_str(&map_text("essential torsions", &run.essential.table.to_json()));
    s.push_str(&map_text("absorption", &run.absorption.to_json()));
    s.push_str(&set_text(&run.reduced));
    s.push_str(&set_text(&run.prolonged));
    for st in &run.reformed.stages {
        s.push_str(&set_text(st));
    }
    s.push_str(&format!("class {}\n", run.reformed.class.tag()));
    for (k, v) in &run.reformed.invariants {
        s.push_str(&format!("{k} = {v}\n"));
    }
    s
}

fn cartan_latex(run: &CartanRun) -> String {
    let mut s = String::new();
    let mut sets = vec![&run.lifted.base, &run.reduced, &run.prolonged];
    sets.extend(run.reformed.stages.iter());
    for st in sets {
        s.push_str(&format!("% {}\n{}\n", st.stage, st.render_latex()));
    }
    for (_, v) in &run.reformed.invariants {
        s.push_str(&format!("\\mathfrak{{R}} = {}\n", ratfn_latex(v)));
    }
    s
}

fn cmd_cartan(m: &CRModel, branch: BranchChoice, fmt: Format) -> Result<String, CliError> {
    let mut runs = Vec::new();
    for b in branches(branch) {
        runs.push(run_cartan(m, b)?);
    }
    if let [r1, r2] = runs.as_slice() {
        if r1.reformed.class != r2.reformed.class || r1.reformed.invariants != r2.reformed.invariants {
            return Err(math("pipeline-mismatch", "branches +1 and -1 give different invariants"));
        }
    }
    Ok(match fmt {
        Format::Text => runs.iter().map(cartan_text).collect::<Vec<_>>().join("\n"),
        Format::Latex => runs.iter().map(cartan_latex).collect::<Vec<_>>().join("\n"),
        Format::Json if runs.len() == 1 => json_line(&runs[0].to_json()),
        Format::Json => json_line(&json!({"branches": runs.iter().map(|r| r.to_json()).collect::<Vec<_>>()})),
    })
}

fn optional_literal(name: &str, s: &Option<String>, symbolic: crate::algebra::Var) -> Result<Scalar, CliError> {
    match s {
        Some(s) => literal(name, s),
        None => Ok(RatFn::var(symbolic)),
    }
}

fn cmd_lie(r: &Option<String>, b: &Option<String>, table: &Option<PathBuf>, fmt: Format) -> Result<String, CliError> {
    if let Some(path) = table {
        let text = read_file(path)?;
        let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let alg = GradedLieAlgebra::from_json(&v)?;
        return Ok(render_set(&maurer_cartan(&alg), fmt));
    }
    let r = optional_literal("r", r, var::R)?;
    let b = optional_literal("b", b, var::B)?;
    let run = lie_pipeline(&r, &b)?;
    let mut sets = vec![&run.maurer_cartan, &run.split];
    sets.extend(run.normalized.iter());
    Ok(match fmt {
        Format::Text => {
            let mut s: String = sets.iter().map(|x| set_text(x)).collect();
            if let Some(c) = &run.coefficient {
                s.push_str(&format!("coefficient of zeta_new/\\sigma in d(mu_new) = {c}\n"));
            }
            s
        }
        Format::Latex => sets.iter().map(|x| format!("% {}\n{}\n", x.stage, x.render_latex())).collect(),
        Format::Json => json_line(&json!({
            "stages": sets.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "coefficient": run.coefficient.as_ref().map(|c| c.to_string()),
        })),
    })
}

fn render_report(rep: &InvariantReport, fmt: Format, trail: bool) -> String {
    match fmt {
        Format::Text => {
            let mut s = format!("{rep}\n");
            if trail {
                for t in &rep.trail {
                    s.push_str(&format!("# {t}\n"));
                }
            }
            s
        }
        Format::Json if trail => json_line(&rep.to_json()),
        Format::Json => json_line(&json!({
            "class": rep.class.tag(),
            "invariant": rep.invariant.as_ref().map(|r| r.to_string()),
        })),
        Format::Latex => match &rep.invariant {
            Some(r) => format!("\\mathfrak{{R}} = {} \\quad (\\text{{{}}})\n", ratfn_latex(r), rep.class.tag()),
            None => format!("\\text{{{}}}\n", rep.class.tag()),
        },
    }
}

/// Runs one parsed command and returns the report text.
pub fn execute(cli: &Cli) -> Result<(String, Option<PathBuf>, i32), CliError> {
    let (text, out, code) = match &cli.command {
        Command::Frame { model, out } => {
            let f = build_frame(&model.resolve()?)?;
            (render_frame(&f, out.format), out, EXIT_OK)
        }
        Command::Table { model, out } => {
            let t = commutator_table(&build_frame(&model.resolve()?)?)?;
            (render_table(&t, out.format), out, EXIT_OK)
        }
        Command::Coframe { model, out } => {
            let f = build_frame(&model.resolve()?)?;
            let t = commutator_table(&f)?;
            let s = dual_structure(&f, &t).map_err(|e| math("failure", e))?;
            (render_set(&s, out.format), out, EXIT_OK)
        }
        Command::Cartan { model, branch, out } => (cmd_cartan(&model.resolve()?, *branch, out.format)?, out, EXIT_OK),
        Command::Lie { r, b, table, out } => (cmd_lie(r, b, table, out.format)?, out, EXIT_OK),
        Command::Invariant { model, pipeline, branch, trail, out } => {
            let rep = report(&model.resolve()?, *pipeline, *branch)?;
            (render_report(&rep, out.format, *trail), out, EXIT_OK)
        }
        Command::Equiv { m1, m2, pipeline, branch, out } => {
            let (m1, m2) = (model_slot(m1)?, model_slot(m2)?);
            let cert = decide_from_reports(report(&m1, *pipeline, *branch)?, report(&m2, *pipeline, *branch)?);
            let text = match out.format {
                Format::Text => {
                    let mut s = format!("{}\n", cert.verdict.name());
                    for w in &cert.witness_chain {
                        s.push_str(&format!("# {w}\n"));
                    }
                    s
                }
                Format::Json => json_line(&cert.to_json()),
                Format::Latex => return Err(no_latex("equiv")),
            };
            (text, out, EXIT_OK)
        }
        Command::Oracle { model, samples, seed, out } => {
            let seed = seed.unwrap_or_else(|| seed_from_env(DEFAULT_SEED));
            let rep = invariance_oracle(&model.resolve()?, *samples, seed)?;
            let code = if rep.passed() { EXIT_OK } else { EXIT_MATH };
            let text = match out.format {
                Format::Text => {
                    let mut s = format!("seed {seed}, {} samples, base {}\n", rep.samples.len(), rep.base);
                    for (n, x) in rep.samples.iter().enumerate() {
                        s.push_str(&format!("{n}: {} -> M({}, {}): {}, {}\n", x.transformation, x.a, x.b, x.report, x.verdict.name()));
                    }
                    for v in &rep.violations {
                        s.push_str(&format!("violation: {v}\n"));
                    }
                    s.push_str(if rep.passed() { "passed\n" } else { "FAILED\n" });
                    s
                }
                Format::Json => json_line(&rep.to_json()),
                Format::Latex => return Err(no_latex("oracle")),
            };
            (text, out, code)
        }
    };
    Ok((text, out.output.clone(), code))
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `stdout` or the requested file and diagnostics to `stderr`.
/// Returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = execute(&cli).and_then(|(text, path, code)| {
        match path {
            Some(p) => fs::write(&p, text.as_bytes()).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
            None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
        }
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.diagnostic());
            e.exit_code()
        }
    }
}
