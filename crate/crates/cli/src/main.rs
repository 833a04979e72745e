//! `primerline`: command-line front end for the primer product line.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 validation violations,
//! 3 generation failure. Results go to stdout and diagnostics to stderr.
//! With `--format json`, stdout carries exactly one JSON document whose
//! `status` field names the exit class.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use primerline::costmodel::{self, CostInputs};
use primerline::diag::has_errors;
use primerline::featmodel::{
    check_configuration, count_configurations, parse_model, Configuration, FeatureModel,
    DEFAULT_CLONE_CAP,
};
use primerline::generator::{generate_primer, write_bundle, GenError};
use primerline::idinstance::{parse_instance, validate_instance, IdInstance};
use primerline::idspec::{
    derive_specification, generate_editor_schema, preset_specification, IdSpecification,
};
use primerline::Diagnostic;

#[derive(Parser)]
#[command(
    name = "primerline",
    version,
    about = "Instructional-design product line toolchain"
)]
struct Cli {
    /// Output format for results.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Feature model commands.
    #[command(subcommand)]
    Model(ModelCmd),
    /// Configuration commands.
    #[command(subcommand)]
    Config(ConfigCmd),
    /// Instructional-design specification commands.
    #[command(subcommand)]
    Spec(SpecCmd),
    /// Editor schema commands.
    #[command(subcommand)]
    Editor(EditorCmd),
    /// Instance document commands.
    #[command(subcommand)]
    Instance(InstanceCmd),
    /// Primer bundle commands.
    #[command(subcommand)]
    Primer(PrimerCmd),
    /// Product-line cost commands.
    #[command(subcommand)]
    Cost(CostCmd),
}

#[derive(Subcommand)]
enum ModelCmd {
    /// Parse a feature model and report problems.
    Check { model: PathBuf },
    /// Count the valid configurations of a feature model.
    Count {
        model: PathBuf,
        /// Largest clone count explored per feature.
        #[arg(long, default_value_t = DEFAULT_CLONE_CAP)]
        clone_cap: u32,
    },
}

#[derive(Subcommand)]
enum ConfigCmd {
    /// Check a configuration against a feature model.
    Check { model: PathBuf, config: PathBuf },
}

#[derive(Subcommand)]
enum SpecCmd {
    /// Derive a specification from a configuration.
    Derive {
        model: PathBuf,
        config: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Emit one of the four preset specifications.
    Preset {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        number: u8,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum EditorCmd {
    /// Generate the editor form schema for a specification.
    Schema {
        spec: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum InstanceCmd {
    /// Validate an instance document against a specification.
    Validate {
        spec: PathBuf,
        instance: PathBuf,
        /// Directory that asset paths are resolved against.
        #[arg(long)]
        assets: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PrimerCmd {
    /// Generate a primer bundle directory.
    Build {
        spec: PathBuf,
        instance: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Directory that asset paths are resolved against.
        #[arg(long)]
        assets: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CostCmd {
    /// Cost, savings and break-even of a product line.
    Report(CostArgs),
}

#[derive(Args)]
struct CostArgs {
    /// Organizational cost, person-weeks.
    #[arg(long)]
    org: u32,
    /// Core asset base cost, person-weeks.
    #[arg(long)]
    cab: u32,
    /// Unique part of each product, person-weeks.
    #[arg(long)]
    unique: u32,
    /// Cost of reusing the asset base per product, person-weeks.
    #[arg(long)]
    reuse: u32,
    /// Cost of one stand-alone product, person-weeks.
    #[arg(long)]
    product: u32,
    /// Number of products.
    #[arg(long)]
    n: u32,
    /// Emit the cost curve for 1..=MAX products.
    #[arg(long, value_name = "MAX", value_parser = clap::value_parser!(u32).range(1..))]
    curve: Option<u32>,
    /// Write the curve as CSV to FILE.
    #[arg(long, value_name = "FILE", requires = "curve")]
    csv: Option<PathBuf>,
}

enum Failure {
    Io(String),
    Invalid(Vec<Diagnostic>),
    Generation(Vec<Diagnostic>),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Generation(_) => 3,
        }
    }
}

/// A finished command: human-readable text, the same result as JSON fields,
/// and any warnings.
#[derive(Default)]
struct Outcome {
    text: String,
    fields: Map<String, Value>,
    warnings: Vec<Diagnostic>,
}

impl Outcome {
    fn new(text: impl Into<String>) -> Self {
        Outcome {
            text: text.into(),
            ..Default::default()
        }
    }

    fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }
}

fn status_name(code: u8) -> &'static str {
    match code {
        0 => "ok",
        1 => "error",
        2 => "invalid",
        _ => "failed",
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn invalid(code: &'static str, message: impl Into<String>) -> Failure {
    Failure::Invalid(vec![Diagnostic::error(code, "", message)])
}

fn load_model(path: &Path) -> Result<FeatureModel, Failure> {
    parse_model(&read(path)?).map_err(Failure::Invalid)
}

fn load_config(path: &Path) -> Result<Configuration, Failure> {
    Configuration::from_json(&read(path)?).map_err(|e| invalid("CONFIG_JSON", e.to_string()))
}

fn load_spec(path: &Path) -> Result<IdSpecification, Failure> {
    IdSpecification::from_json(&read(path)?).map_err(|e| invalid("INVALID_SPEC", e.to_string()))
}

fn load_instance(path: &Path) -> Result<IdInstance, Failure> {
    parse_instance(&read(path)?).map_err(Failure::Invalid)
}

/// Writes `text` to `output` or, without one, returns it for stdout.
fn emit(output: &Option<PathBuf>, text: String, what: &str) -> Result<Outcome, Failure> {
    let value: Value = serde_json::from_str(&text).expect("canonical JSON parses");
    match output {
        Some(path) => {
            write(path, &text)?;
            Ok(
                Outcome::new(format!("wrote {what} to {}\n", path.display()))
                    .field("output", path.display().to_string())
                    .field(what, value),
            )
        }
        None => Ok(Outcome::new(text).field(what, value)),
    }
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Model(ModelCmd::Check { model }) => {
            let m = load_model(&model)?;
            Ok(Outcome::new(format!(
                "model {}: {} features, {} constraints\n",
                m.name,
                m.feature_count(),
                m.constraints.len()
            ))
            .field("model", m.name.clone())
            .field("features", m.feature_count())
            .field("constraints", m.constraints.len()))
        }
        Command::Model(ModelCmd::Count { model, clone_cap }) => {
            let m = load_model(&model)?;
            let n = count_configurations(&m, clone_cap).map_err(|e| {
                Failure::Generation(vec![Diagnostic::error(e.code(), "", e.to_string())])
            })?;
            Ok(Outcome::new(format!("{n}\n"))
                .field("count", n)
                .field("clone_cap", clone_cap))
        }
        Command::Config(ConfigCmd::Check { model, config }) => {
            let m = load_model(&model)?;
            let c = load_config(&config)?;
            let report = check_configuration(&m, &c);
            if report.valid {
                Ok(Outcome::new("configuration is valid\n").field("valid", true))
            } else {
                Err(Failure::Invalid(report.diagnostics))
            }
        }
        Command::Spec(SpecCmd::Derive {
            model,
            config,
            output,
        }) => {
            let m = load_model(&model)?;
            let c = load_config(&config)?;
            let spec =
                derive_specification(&m, &c).map_err(|e| Failure::Invalid(e.diagnostics()))?;
            emit(&output, spec.to_json(), "spec")
        }
        Command::Spec(SpecCmd::Preset { number, output }) => {
            let spec = preset_specification(number as usize).expect("range checked by parser");
            emit(&output, spec.to_json(), "spec")
        }
        Command::Editor(EditorCmd::Schema { spec, output }) => {
            let s = load_spec(&spec)?;
            emit(&output, generate_editor_schema(&s).to_json(), "schema")
        }
        Command::Instance(InstanceCmd::Validate {
            spec,
            instance,
            assets,
        }) => {
            let s = load_spec(&spec)?;
            let i = load_instance(&instance)?;
            let diagnostics = validate_instance(&i, &s, assets.as_deref());
            if has_errors(&diagnostics) {
                return Err(Failure::Invalid(diagnostics));
            }
            let mut out = Outcome::new(format!(
                "instance conforms to {} ({} lessons, {} warnings)\n",
                s.name,
                i.lessons.len(),
                diagnostics.len()
            ))
            .field("lessons", i.lessons.len());
            out.warnings = diagnostics;
            Ok(out)
        }
        Command::Primer(PrimerCmd::Build {
            spec,
            instance,
            output,
            assets,
        }) => {
            let s = load_spec(&spec)?;
            let i = load_instance(&instance)?;
            let warnings: Vec<Diagnostic> = validate_instance(&i, &s, assets.as_deref());
            let bundle = generate_primer(&i, &s, assets.as_deref()).map_err(|e| match e {
                GenError::ValidationErrorsPresent(d) => Failure::Invalid(d.0),
                other => Failure::Generation(vec![Diagnostic::error(
                    other.code(),
                    "",
                    other.to_string(),
                )]),
            })?;
            let files = write_bundle(&bundle, &output).map_err(|e| Failure::Io(e.to_string()))?;
            let steps: usize = bundle.lessons.iter().map(|l| l.steps.len()).sum();
            let mut out = Outcome::new(format!(
                "wrote {} files to {} ({} lessons, {} steps)\n",
                files.len(),
                output.display(),
                bundle.lessons.len(),
                steps
            ))
            .field("output", output.display().to_string())
            .field(
                "files",
                files
                    .iter()
                    .map(|f| {
                        f.strip_prefix(&output)
                            .unwrap_or(f)
                            .to_string_lossy()
                            .replace('\\', "/")
                    })
                    .collect::<Vec<_>>(),
            )
            .field("lessons", bundle.lessons.len())
            .field("steps", steps);
            out.warnings = warnings;
            Ok(out)
        }
        Command::Cost(CostCmd::Report(args)) => cost_report(args),
    }
}

fn pm_value(r: num_rational::Ratio<i64>) -> Value {
    if r.is_integer() {
        json!(r.to_integer())
    } else {
        json!(*r.numer() as f64 / *r.denom() as f64)
    }
}

fn pm_text(r: num_rational::Ratio<i64>) -> String {
    pm_value(r).to_string()
}

fn cost_report(args: CostArgs) -> Result<Outcome, Failure> {
    let inputs: CostInputs<i64> = CostInputs {
        c_org: args.org.into(),
        c_cab: args.cab.into(),
        c_unique: args.unique.into(),
        c_reuse: args.reuse.into(),
        c_product: args.product.into(),
        n: args.n.into(),
    };
    let r = costmodel::report(&inputs, args.curve.map(u64::from))
        .map_err(|e| invalid("COST_INPUT", e.to_string()))?;
    if let Some(path) = &args.csv {
        write(path, &costmodel::curve_csv(&r.curve))?;
    }
    let break_even = match r.break_even {
        Some(n) => format!("{n} products"),
        None => "never".to_string(),
    };
    let mut text = format!(
        "C_SPL         {} pw = {} pm ({} pm rounded)\n\
         C_standalone  {} pw = {} pm ({} pm rounded)\n\
         savings       {} pw = {} pm exact, {} pm paper-style\n\
         break-even    {}\n",
        r.c_spl_pw,
        pm_text(r.c_spl_pm),
        pm_text(r.c_spl_pm_rounded()),
        r.c_standalone_pw,
        pm_text(r.c_standalone_pm),
        pm_text(r.c_standalone_pm_rounded()),
        r.savings.exact_pw,
        pm_text(r.savings.exact_pm),
        pm_text(r.savings.paper_style_pm),
        break_even
    );
    if !r.curve.is_empty() && args.csv.is_none() {
        text.push_str(&costmodel::curve_csv(&r.curve));
    }
    let curve: Vec<Value> = r
        .curve
        .iter()
        .map(|p| json!({"n": p.n, "spl_pw": p.spl_pw, "standalone_pw": p.standalone_pw}))
        .collect();
    let mut out = Outcome::new(text)
        .field("c_spl_pw", r.c_spl_pw)
        .field("c_spl_pm", pm_value(r.c_spl_pm))
        .field("c_spl_pm_rounded", pm_value(r.c_spl_pm_rounded()))
        .field("c_standalone_pw", r.c_standalone_pw)
        .field("c_standalone_pm", pm_value(r.c_standalone_pm))
        .field(
            "c_standalone_pm_rounded",
            pm_value(r.c_standalone_pm_rounded()),
        )
        .field("savings_exact_pw", r.savings.exact_pw)
        .field("savings_exact_pm", pm_value(r.savings.exact_pm))
        .field("savings_paper_style_pm", pm_value(r.savings.paper_style_pm))
        .field("break_even", r.break_even.map_or(Value::Null, Value::from));
    if !curve.is_empty() {
        out = out.field("curve", curve);
    }
    if let Some(path) = &args.csv {
        out = out.field("csv", path.display().to_string());
    }
    Ok(out)
}

fn print_json(
    code: u8,
    mut fields: Map<String, Value>,
    diagnostics: &[Diagnostic],
    message: Option<String>,
) {
    fields.insert("status".into(), status_name(code).into());
    fields.insert("exit_code".into(), code.into());
    fields.insert(
        "diagnostics".into(),
        serde_json::to_value(diagnostics).expect("diagnostics serialize"),
    );
    if let Some(m) = message {
        fields.insert("message".into(), m.into());
    }
    println!("{}", Value::Object(fields));
}

fn wants_json(args: &[String]) -> bool {
    args.windows(2)
        .any(|w| w[0] == "--format" && w[1] == "json")
        || args.iter().any(|a| a == "--format=json")
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            if wants_json(&argv) {
                print_json(1, Map::new(), &[], Some(e.to_string()));
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let format = cli.format;
    match run(cli.command) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("{w}");
            }
            match format {
                Format::Text => print!("{}", out.text),
                Format::Json => print_json(0, out.fields, &out.warnings, None),
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let code = failure.exit_code();
            let (diagnostics, message) = match failure {
                Failure::Io(m) => (Vec::new(), Some(m)),
                Failure::Invalid(d) | Failure::Generation(d) => (d, None),
            };
            if let Some(m) = &message {
                eprintln!("error: {m}");
            }
            for d in &diagnostics {
                eprintln!("{d}");
            }
            if format == Format::Json {
                print_json(code, Map::new(), &diagnostics, message);
            }
            ExitCode::from(code)
        }
    }
}
