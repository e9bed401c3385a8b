use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use backlund_core::models::{dump_models, registry};
use backlund_core::numeric::{
    integrate, invariant_drift, write_csv, write_trajectory, NumericConfig, NumericError, Output, Params, Termination,
};
use backlund_core::scalar::fmt_rational;
use backlund_core::verify::{run_suite, Scope, SuiteOptions, VariantSelection};
use backlund_core::weyl::{
    apply_word_to_point, calibrate_convention, parameter_action, translation_shift, verify_group_relations, Context,
    ExactPoint, GroupWord, WeylError,
};
use backlund_core::Rational;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "backlund", version, about = "Exact and numerical checks for the five-dimensional system and its symmetries")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    /// Print every model as JSON documents and exit. Without a command, runs `verify all`.
    #[arg(long)]
    dump_models: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the symbolic verification suite.
    Verify {
        #[arg(value_parser = parse_scope)]
        scope: Scope,
        #[arg(long, value_parser = VariantSelection::from_str, default_value = "both")]
        variant: VariantSelection,
        /// Restrict to one map.
        #[arg(long)]
        map: Option<String>,
        #[arg(long, default_value_t = 20)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also write the output to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Words in the affine Weyl group.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Integrate a system numerically.
    Integrate {
        system: String,
        /// `alpha0=..,alpha2=..,eta=..`; `alpha1` defaults to `1 - alpha0 - alpha2`.
        #[arg(long)]
        params: String,
        /// Initial state, comma separated, in the system's order.
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        /// `start,end`.
        #[arg(long, allow_hyphen_values = true)]
        span: String,
        #[arg(long)]
        abs_tol: Option<f64>,
        #[arg(long)]
        rel_tol: Option<f64>,
        /// Sample at equal steps instead of every accepted step.
        #[arg(long)]
        fixed_step: Option<f64>,
        /// CSV path; a JSON sidecar is written next to it. Without it the CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Check the defining relations.
    Relations {
        #[arg(long, default_value_t = 20)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Parameter action of a word.
    Action { word: String },
    /// Translation part of a word.
    Shift { word: String },
    /// Apply a word to an exact point.
    Apply {
        word: String,
        /// `x=1,y=2/3,...,alpha0=..,alpha2=..,eta=..,t=..`
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Records,
}

fn parse_scope(s: &str) -> Result<Scope, String> {
    s.parse().map_err(|e: String| format!("{e}; expected one of {}", Scope::NAMES.join(", ")))
}

/// Errors with their exit code.
struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

fn fail(msg: impl Into<String>) -> Failure {
    Failure { code: 1, msg: msg.into() }
}

fn weyl_err(e: WeylError) -> Failure {
    match e {
        WeylError::Parse(_) | WeylError::PiOutsideTh2 => usage(e.to_string()),
        other => fail(other.to_string()),
    }
}

fn numeric_err(e: NumericError) -> Failure {
    match e {
        NumericError::Usage(_) | NumericError::Model(_) => usage(e.to_string()),
        other => fail(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    if cli.dump_models {
        print!("{}", dump_models(registry()));
        return Ok(true);
    }
    let command = cli.command.unwrap_or(Command::Verify {
        scope: Scope::All,
        variant: VariantSelection::Both,
        map: None,
        seed: 20,
        samples: 20,
        format: Format::Text,
        out: None,
    });
    match command {
        Command::Verify { scope, variant, map, seed, samples, format, out } => {
            if let Some(m) = &map {
                if registry().variants(m).is_empty() {
                    return Err(usage(format!("unknown map `{m}`")));
                }
            }
            let opts = SuiteOptions { variant, map, seed, samples };
            let reports = run_suite(scope, &opts);
            let mut text = String::new();
            for r in &reports {
                match format {
                    Format::Text => text.push_str(&r.to_text()),
                    Format::Records => {
                        text.push_str(&r.to_record());
                        text.push('\n');
                    }
                }
            }
            let passed = reports.iter().filter(|r| r.passed()).count();
            if matches!(format, Format::Text) {
                let _ = write!(text, "{passed}/{} checks passed", reports.len());
                let resolved: Vec<String> = reports
                    .iter()
                    .filter_map(|r| Some(format!("{} -> {}", r.check_id.strip_prefix("disputed/")?, r.resolved_variant?)))
                    .collect();
                if !resolved.is_empty() {
                    let _ = write!(text, "; resolved variants: {}", resolved.join(", "));
                }
                text.push('\n');
            }
            print!("{text}");
            if let Some(path) = out {
                std::fs::write(&path, &text).map_err(|e| fail(format!("{}: {e}", path.display())))?;
            }
            Ok(!reports.is_empty() && passed == reports.len())
        }
        Command::Group { command } => group(command),
        Command::Integrate { system, params, init, span, abs_tol, rel_tol, fixed_step, out } => {
            integrate_cmd(&system, &params, &init, &span, abs_tol, rel_tol, fixed_step, out)
        }
    }
}

fn context_of(word: &str) -> Context {
    if word.contains("pi") || word.contains('π') {
        Context::Th2
    } else {
        Context::Th1
    }
}

fn parse_word(word: &str) -> Result<GroupWord, Failure> {
    GroupWord::parse(word, context_of(word)).map_err(weyl_err)
}

fn sign(s: i8) -> &'static str {
    if s < 0 {
        "-1"
    } else {
        "+1"
    }
}

fn group(cmd: GroupCommand) -> Result<bool, Failure> {
    match cmd {
        GroupCommand::Relations { seed, samples } => {
            let r = verify_group_relations(samples, seed).map_err(|e| fail(e.to_string()))?;
            print!("{}", r.to_text());
            Ok(r.passed())
        }
        GroupCommand::Action { word } => {
            let w = parse_word(&word)?;
            let a = parameter_action(&w).map_err(weyl_err)?;
            println!("word: {w}");
            println!("convention: {}", calibrate_convention().map_err(weyl_err)?);
            for (i, row) in a.matrix.iter().enumerate() {
                let terms: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
                println!("alpha{i}' = [{}] . alpha + {}", terms.join(" "), a.offset[i]);
            }
            println!("eta sign: {}", sign(a.eta_sign));
            println!("indep sign: {}", sign(a.indep_sign));
            Ok(true)
        }
        GroupCommand::Shift { word } => {
            let w = parse_word(&word)?;
            let s = translation_shift(&w).map_err(weyl_err)?;
            match s.shift {
                Some([a, b, c]) => {
                    println!("shift ({a}, {b}, {c}), eta {}, indep {}", sign(s.eta_sign), sign(s.indep_sign));
                    Ok(true)
                }
                None => {
                    println!("not a translation, eta {}, indep {}", sign(s.eta_sign), sign(s.indep_sign));
                    Ok(false)
                }
            }
        }
        GroupCommand::Apply { word, point } => {
            let w = parse_word(&word)?;
            let p = parse_point(&point, w.context)?;
            let img = apply_word_to_point(&w, &p).map_err(weyl_err)?;
            println!("{}", img.display(w.context));
            println!("{}", img.to_json(w.context));
            Ok(true)
        }
    }
}

/// Integer, `a/b` or decimal, read exactly.
fn parse_rational(s: &str) -> Result<Rational, Failure> {
    let s = s.trim();
    let bad = || usage(format!("not a number: `{s}`"));
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || s.contains('/') {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let den = format!("1{}", "0".repeat(frac.len()));
        return Rational::from_str(&format!("{digits}/{den}")).map_err(|_| bad());
    }
    Rational::from_str(s).map_err(|_| bad())
}

fn key_values(src: &str) -> Result<Vec<(String, String)>, Failure> {
    src.split(',')
        .filter(|kv| !kv.trim().is_empty())
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| usage(format!("expected name=value, got `{kv}`")))
        })
        .collect()
}

fn parse_point(src: &str, ctx: Context) -> Result<ExactPoint, Failure> {
    let reg = registry();
    let sys = reg.system(ctx.system_id()).map_err(|e| fail(e.to_string()))?;
    let kv = key_values(src)?;
    let names: Vec<String> = sys
        .state
        .iter()
        .chain(reg.alphas().iter())
        .chain([reg.sym("eta"), sys.indep].iter())
        .map(|s| reg.table.name(*s).to_string())
        .collect();
    if let Some((k, _)) = kv.iter().find(|(k, _)| !names.contains(k)) {
        return Err(usage(format!("unknown coordinate `{k}`; expected {}", names.join(", "))));
    }
    let get = |name: &str| -> Result<Option<Rational>, Failure> {
        kv.iter().find(|(k, _)| k == name).map(|(_, v)| parse_rational(v)).transpose()
    };
    let need = |name: &str| get(name)?.ok_or_else(|| usage(format!("missing `{name}`")));
    let state = sys.state.iter().map(|s| need(reg.table.name(*s))).collect::<Result<Vec<_>, _>>()?;
    let a0 = need("alpha0")?;
    let a2 = need("alpha2")?;
    let one = Rational::from_integer(1.into());
    let a1 = match get("alpha1")? {
        Some(a1) => a1,
        None => one - a0.clone() - a2.clone(),
    };
    Ok(ExactPoint { state, alphas: [a0, a1, a2], eta: need("eta")?, indep: need(reg.table.name(sys.indep))? })
}

fn floats(src: &str) -> Result<Vec<f64>, Failure> {
    src.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| usage(format!("not a number: `{v}`")))).collect()
}

#[allow(clippy::too_many_arguments)]
fn integrate_cmd(
    system: &str,
    params: &str,
    init: &str,
    span: &str,
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
    fixed_step: Option<f64>,
    out: Option<PathBuf>,
) -> Result<bool, Failure> {
    let reg = registry();
    let sys = reg.system(system).map_err(|e| usage(e.to_string()))?;
    let kv = key_values(params)?;
    if let Some((k, _)) = kv.iter().find(|(k, _)| !["alpha0", "alpha1", "alpha2", "eta"].contains(&k.as_str())) {
        return Err(usage(format!("unknown parameter `{k}`")));
    }
    let get = |name: &str| -> Result<Option<f64>, Failure> {
        kv.iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.parse::<f64>().map_err(|_| usage(format!("not a number: `{v}`"))))
            .transpose()
    };
    let a0 = get("alpha0")?.unwrap_or(0.0);
    let a2 = get("alpha2")?.unwrap_or(0.0);
    let eta = get("eta")?.unwrap_or(0.0);
    let p = match get("alpha1")? {
        Some(a1) => Params::new(a0, a1, a2, eta),
        None => Params::normalized(a0, a2, eta),
    };
    let y0 = floats(init)?;
    let span = match floats(span)?.as_slice() {
        &[a, b] => (a, b),
        _ => return Err(usage("span needs two values: start,end")),
    };
    let defaults = NumericConfig::default();
    let cfg = defaults.clone().with_tolerances(abs_tol.unwrap_or(defaults.abs_tol), rel_tol.unwrap_or(defaults.rel_tol));
    let output = fixed_step.map_or(Output::Adaptive, Output::FixedStep);
    let tr = integrate(system, &p, &y0, span, output, &cfg).map_err(numeric_err)?;

    match &out {
        Some(path) => {
            let side = write_trajectory(&tr, path).map_err(numeric_err)?;
            println!("wrote {} and {}", path.display(), side.display());
        }
        None => write_csv(&tr, std::io::stdout().lock()).map_err(numeric_err)?,
    }
    let summary = |line: String| {
        if out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    };
    summary(format!(
        "{}: {} samples, {} accepted / {} rejected steps, termination {}",
        sys.id,
        tr.len(),
        tr.meta.accepted_steps,
        tr.meta.rejected_steps,
        serde_json::to_value(tr.meta.termination).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
    ));
    for integral in reg.integrals.iter().filter(|i| i.system_id == sys.id) {
        let d = invariant_drift(&tr, &integral.id).map_err(numeric_err)?;
        summary(format!(
            "drift of {} (lambda {}): {d:.3e}",
            integral.id,
            fmt_rational(&integral.lambda)
        ));
    }
    Ok(tr.meta.termination == Termination::Completed)
}
