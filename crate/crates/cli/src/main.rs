use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qident_core::families::{family_value, FamilyId, ParamBinding};
use qident_core::limits::{limit_check, LimitId, LimitReport, DEFAULT_PRECISION, DEFAULT_STEPS};
use qident_core::numerics::Rational;
use qident_core::properties::{self, PropertyReport};
use qident_core::verify::{
    self, list_identities, sample_binding, trial_seed, ModeSelection, Summary, VerificationReport,
};

const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "qident", version, about = "Exact checks of q-polynomial generating functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Free,
    Consistent,
    Both,
}

impl From<ModeArg> for ModeSelection {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Free => ModeSelection::Free,
            ModeArg::Consistent => ModeSelection::Consistent,
            ModeArg::Both => ModeSelection::Both,
        }
    }
}

#[derive(Args)]
struct ParamArgs {
    /// Parameter assignment `name=value` with an exact rational value; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_param)]
    params: Vec<(String, Rational)>,
}

impl ParamArgs {
    fn binding(&self) -> Result<ParamBinding, String> {
        let mut b = ParamBinding::new();
        for (name, value) in &self.params {
            if b.contains(name) {
                return Err(format!("parameter {name} given twice"));
            }
            b.set(name, value.clone());
        }
        Ok(b)
    }
}

fn parse_param(text: &str) -> Result<(String, Rational), String> {
    ParamBinding::parse_assignment(text).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// List the registered identities.
    List {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate one family polynomial exactly.
    Eval {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Verify identities by exact coefficient comparison.
    Verify {
        /// Identity to verify.
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        id: Option<String>,
        /// Verify every registered identity.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 16)]
        order: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run a numeric q -> 1 limit check.
    Limit {
        /// Limit to check; all of them when omitted.
        #[arg(long)]
        id: Option<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: u32,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run every identity, property suite and limit check.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 16)]
        order: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE)
}

fn outcome(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Exit quietly when stdout is closed early, as in `qident list | head`.
fn restore_sigpipe() {
    #[cfg(unix)]
    // SAFETY: called once at startup before any other threads exist.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() -> ExitCode {
    restore_sigpipe();
    let cli = Cli::parse();
    match cli.command {
        Command::List { format } => list(format),
        Command::Eval { family, n, params, format } => eval(&family, n, &params, format),
        Command::Verify { id, all, params, order, seed, trials, mode, format } => {
            let binding = match params.binding() {
                Ok(b) => b,
                Err(e) => return usage(e),
            };
            match (id, all) {
                (_, true) => {
                    if !params.params.is_empty() {
                        return usage("--param cannot be combined with --all");
                    }
                    let summary = verify::verify_all(seed, trials as usize, order, mode.into(), None);
                    print_summary(&summary, format);
                    outcome(summary.all_passed())
                }
                (Some(id), false) => verify_one(&id, &binding, order, seed, trials as usize, mode.into(), format),
                (None, false) => usage("either --id or --all is required"),
            }
        }
        Command::Limit { id, params, precision, steps, format } => {
            let binding = match params.binding() {
                Ok(b) => b,
                Err(e) => return usage(e),
            };
            let ids = match id {
                Some(text) => match text.parse::<LimitId>() {
                    Ok(id) => vec![id],
                    Err(e) => return usage(e),
                },
                None => LimitId::ALL.to_vec(),
            };
            let mut reports = Vec::new();
            for id in ids {
                match limit_check(id, &binding, precision, steps) {
                    Ok(r) => reports.push(r),
                    Err(e) => return usage(e),
                }
            }
            print_limits(&reports, format);
            outcome(reports.iter().all(LimitReport::passed))
        }
        Command::Selftest { seed, trials, order, format } => selftest(seed, trials as usize, order, format),
    }
}

fn list(format: Format) -> ExitCode {
    let specs = list_identities();
    match format {
        Format::Json => {
            let rows: Vec<_> = specs
                .iter()
                .map(|s| {
                    json!({
                        "id": s.id,
                        "description": s.description,
                        "schema": s.schema(),
                        "modes": modes_text(s.modes),
                        "note": s.note,
                    })
                })
                .collect();
            println!("{}", serde_json::Value::Array(rows));
        }
        Format::Text => {
            let width = specs.iter().map(|s| s.id.len()).max().unwrap_or(2);
            let schema_width = specs.iter().map(|s| s.schema().len()).max().unwrap_or(6);
            println!("{:<width$}  {:<16}  {:<schema_width$}  DESCRIPTION", "ID", "MODES", "SCHEMA");
            for s in specs {
                println!("{:<width$}  {:<16}  {:<schema_width$}  {}", s.id, modes_text(s.modes), s.schema(), s.description);
            }
        }
    }
    ExitCode::SUCCESS
}

fn modes_text(m: verify::ModeSupport) -> &'static str {
    match m {
        verify::ModeSupport::Both => "free,consistent",
        verify::ModeSupport::FreeOnly => "free",
    }
}

fn eval(family: &str, n: usize, params: &ParamArgs, format: Format) -> ExitCode {
    let family: FamilyId = match family.parse() {
        Ok(f) => f,
        Err(e) => return usage(e),
    };
    let binding = match params.binding() {
        Ok(b) => b,
        Err(e) => return usage(e),
    };
    let value = match family_value(family, n, &binding) {
        Ok(v) => v,
        Err(e) => return usage(e),
    };
    let q = if family.is_q() { binding.base().ok().map(|b| b.q().to_string()) } else { None };
    match format {
        Format::Json => {
            let out = json!({
                "family": family.name(),
                "n": n,
                "q": q,
                "binding": binding.to_text_map(),
                "value": value.to_string(),
            });
            println!("{out}");
        }
        Format::Text => {
            match &q {
                Some(q) => println!("# {family} n={n} q={q} ({binding})"),
                None => println!("# {family} n={n} ({binding})"),
            }
            println!("{value}");
        }
    }
    ExitCode::SUCCESS
}

fn verify_one(
    id: &str,
    binding: &ParamBinding,
    order: usize,
    seed: u64,
    trials: usize,
    modes: ModeSelection,
    format: Format,
) -> ExitCode {
    let Some(spec) = verify::lookup(id) else {
        return usage(format!("unknown identity {id}"));
    };
    let reports: Vec<VerificationReport> = if binding.iter().next().is_some() {
        vec![verify::verify_identity(id, binding, order)]
    } else {
        let mut out = Vec::new();
        for mode in modes.modes_for(spec.modes) {
            for trial in 0..trials {
                match sample_binding(id, trial_seed(seed, trial), mode) {
                    Ok(b) => out.push(verify::verify_identity_in_mode(id, &b, order, mode)),
                    Err(e) => return usage(e),
                }
            }
        }
        out
    };
    if reports.len() == 1 && format == Format::Json {
        println!("{}", reports[0].to_json());
        return outcome(reports[0].passed());
    }
    let summary = Summary::from_reports(reports);
    print_summary(&summary, format);
    outcome(summary.all_passed())
}

fn mismatch_text(r: &VerificationReport) -> String {
    match (&r.first_mismatch, &r.message) {
        (Some(m), _) => format!("t^{}: lhs {} rhs {}", m.power, m.lhs, m.rhs),
        (None, Some(msg)) => msg.clone(),
        (None, None) => String::new(),
    }
}

fn binding_text(r: &VerificationReport) -> String {
    r.binding.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn print_summary(summary: &Summary, format: Format) {
    match format {
        Format::Json => println!("{}", summary.to_json()),
        Format::Text => {
            let rows: Vec<[String; 5]> = summary
                .reports
                .iter()
                .map(|r| [r.id.clone(), r.mode.to_string(), r.status.to_string(), r.order.to_string(), binding_text(r)])
                .collect();
            let header = ["ID", "MODE", "STATUS", "ORDER", "BINDING"].map(String::from);
            let mut widths = header.clone().map(|h| h.len());
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |row: &[String; 5]| {
                let cells: Vec<String> = row.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
                cells.join("  ").trim_end().to_string()
            };
            println!("{}", line(&header));
            for (row, report) in rows.iter().zip(&summary.reports) {
                let extra = mismatch_text(report);
                if extra.is_empty() {
                    println!("{}", line(row));
                } else {
                    println!("{}  {}", line(row), extra);
                }
            }
            println!(
                "total {}  passed {}  failed {}  errors {}",
                summary.total, summary.passed, summary.failed, summary.errors
            );
        }
    }
}

fn print_limits(reports: &[LimitReport], format: Format) {
    match format {
        Format::Json => {
            if let [single] = reports {
                println!("{}", single.to_json());
            } else {
                let values: Vec<serde_json::Value> =
                    reports.iter().map(|r| serde_json::to_value(r).expect("limit report serializes")).collect();
                println!("{}", serde_json::Value::Array(values));
            }
        }
        Format::Text => {
            for r in reports {
                let params = r.binding.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
                let rate = r.rate.map_or_else(|| "-".to_string(), |x| format!("{x:.3}"));
                let last = r.steps.last().map_or(0.0, |s| s.error);
                println!(
                    "{:<10} {:<5} target {:.12e}  final error {:.3e}  rate {}  ({params}, {} bits)",
                    r.id, r.status.to_string(), r.target, last, rate, r.precision_bits
                );
                for s in &r.steps {
                    println!("    q = {:<22} error = {:.6e}", s.q, s.error);
                }
            }
        }
    }
}

fn selftest(seed: u64, trials: usize, order: usize, format: Format) -> ExitCode {
    let summary = verify::verify_all(seed, trials, order, ModeSelection::Both, None);
    let props = properties::run_all();
    let mut limits = Vec::new();
    for id in LimitId::ALL {
        match limit_check(id, &ParamBinding::new(), DEFAULT_PRECISION, DEFAULT_STEPS) {
            Ok(r) => limits.push(r),
            Err(e) => return usage(e),
        }
    }
    let ok = summary.all_passed() && props.iter().all(PropertyReport::passed) && limits.iter().all(LimitReport::passed);
    match format {
        Format::Json => {
            let out = json!({
                "verify": summary,
                "properties": props,
                "limits": limits,
                "passed": ok,
            });
            println!("{out}");
        }
        Format::Text => {
            println!(
                "identities: total {}  passed {}  failed {}  errors {}",
                summary.total, summary.passed, summary.failed, summary.errors
            );
            for r in summary.reports.iter().filter(|r| !r.passed()) {
                println!("  {} {} {} {}  {}", r.id, r.mode, r.status, binding_text(r), mismatch_text(r));
            }
            for p in &props {
                println!("property {:<22} {:<5} ({} cases)", p.name, p.status.to_string(), p.cases);
            }
            for r in &limits {
                let last = r.steps.last().map_or(0.0, |s| s.error);
                println!("limit    {:<22} {:<5} (final error {:.3e})", r.id, r.status.to_string(), last);
            }
            println!("{}", if ok { "selftest passed" } else { "selftest FAILED" });
        }
    }
    outcome(ok)
}
