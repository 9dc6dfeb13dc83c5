use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use motivic_cover::blowup::{blowup, check_invariance, Verdict};
use motivic_cover::config::{render_set, validate, ComponentSet, Configuration};
use motivic_cover::format;
use motivic_cover::milnor::graph_to_config;
use motivic_cover::motive::{breakdown, motive, motive_expansion};
use motivic_cover::random::{sweep, Bounds};
use motivic_cover::realization::{euler_closed_form, zeta_closed_form, zeta_expansion};
use motivic_cover::Error;

// Shadow the std printing macros so a closed pipe (`motivic ... | head`)
// ends the process quietly instead of panicking.
macro_rules! println {
    ($($t:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout(), $($t)*) {
            exit_on_write_error(e);
        }
    }};
}

macro_rules! print {
    ($($t:tt)*) => {{
        use std::io::Write;
        if let Err(e) = write!(std::io::stdout(), $($t)*) {
            exit_on_write_error(e);
        }
    }};
}

fn exit_on_write_error(e: std::io::Error) -> ! {
    if e.kind() == std::io::ErrorKind::BrokenPipe {
        std::process::exit(0);
    }
    eprintln!("error: writing output: {e}");
    std::process::exit(3);
}

#[derive(Parser)]
#[command(name = "motivic", version, about = "Motivic infinite cyclic covers of SNC divisors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(clap::Args)]
struct Selection {
    /// `all`, `exceptional`, or comma-separated component ids. Defaults to
    /// `all` for configurations and `exceptional` for resolution graphs.
    #[arg(long, short = 'A')]
    select: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration or resolution graph.
    Validate { path: PathBuf },
    /// Print the motivic infinite cyclic cover S^A.
    Motive {
        path: PathBuf,
        #[command(flatten)]
        sel: Selection,
        /// Print one line per stratum.
        #[arg(long)]
        breakdown: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Blow up along a center and emit the new configuration.
    Blowup {
        path: PathBuf,
        center: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare S^A before and after a blow-up.
    CheckInvariance {
        path: PathBuf,
        center: PathBuf,
        #[command(flatten)]
        sel: Selection,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Zeta function of the realization of S^A.
    Zeta {
        path: PathBuf,
        #[command(flatten)]
        sel: Selection,
        /// Also print the per-stratum closed form and compare.
        #[arg(long)]
        closed_form: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Euler characteristic of the realization of S^A.
    Euler {
        path: PathBuf,
        #[command(flatten)]
        sel: Selection,
        #[arg(long)]
        closed_form: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Run the invariance check on random configurations.
    RandomSweep {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 5)]
        max_ambient_dim: u32,
        #[arg(long, default_value_t = 6)]
        max_components: usize,
        #[arg(long, default_value_t = 6)]
        max_multiplicity: i64,
    },
}

enum Failure {
    /// Validation, parse or verdict failure.
    Invalid(String),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EmptySelection => Failure::Usage(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Input {
    config: Configuration,
    is_graph: bool,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Input, Failure> {
    let text = read(path)?;
    if format::is_graph_json(&text) {
        let g = format::graph_from_json(&text)?;
        Ok(Input { config: graph_to_config(&g)?, is_graph: true })
    } else {
        Ok(Input { config: format::config_from_json(&text)?, is_graph: false })
    }
}

fn resolve(input: &Input, sel: &Selection) -> Result<ComponentSet, Failure> {
    let spec = sel.select.clone().unwrap_or_else(|| if input.is_graph { "exceptional" } else { "all" }.to_string());
    input.config.select(&spec).map_err(|e| match e {
        Error::EmptySelection => Failure::Usage(format!("selection '{spec}' is empty")),
        Error::UnknownComponent(id) => Failure::Usage(format!("selection names unknown component {id}")),
        e => e.into(),
    })
}

fn print_json(v: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&v).unwrap());
}

fn cmd_validate(path: &Path) -> Outcome {
    let text = read(path)?;
    if format::is_graph_json(&text) {
        let g = format::graph_from_json(&text)?;
        graph_to_config(&g)?;
        println!("valid resolution graph");
        return Ok(());
    }
    let c = format::config_from_json_unchecked(&text)?;
    let d = validate(&c);
    if d.is_empty() {
        println!("valid");
        Ok(())
    } else {
        for x in &d {
            println!("{x}");
        }
        Err(Failure::Invalid(format!("{} diagnostic(s)", d.len())))
    }
}

fn cmd_motive(path: &Path, sel: &Selection, show: bool, fmt: OutputFormat) -> Outcome {
    let input = load(path)?;
    let a = resolve(&input, sel)?;
    let total = motive(&input.config, &a).map_err(|e| match e {
        Error::Unrepresentable { .. } => {
            Failure::Invalid(format!("{e}\nthe zeta and euler commands still apply to this input"))
        }
        e => e.into(),
    })?;
    let terms = if show { breakdown(&input.config, &a)? } else { Vec::new() };
    match fmt {
        OutputFormat::Text => {
            for t in &terms {
                println!("{t}");
            }
            if show {
                println!("total: {total}");
            } else {
                println!("{total}");
            }
        }
        OutputFormat::Structured => {
            let rows: Vec<_> = terms
                .iter()
                .map(|t| {
                    json!({
                        "stratum": t.stratum.iter().map(|x| x.as_str()).collect::<Vec<_>>(),
                        "sign": t.sign,
                        "cover_class": t.cover.to_string(),
                        "torus_power": t.torus_pow,
                        "term": t.term.to_string(),
                    })
                })
                .collect();
            let mut v = json!({ "selection": render_set(&a), "motive": total.to_string() });
            if show {
                v["breakdown"] = json!(rows);
            }
            print_json(v);
        }
    }
    Ok(())
}

fn load_center(path: &Path) -> Result<motivic_cover::BlowupCenter, Failure> {
    Ok(format::center_from_json(&read(path)?)?)
}

fn cmd_blowup(path: &Path, center: &Path, out: Option<&Path>) -> Outcome {
    let input = load(path)?;
    let center = load_center(center)?;
    let b = blowup(&input.config, &center)?;
    let text = format::config_to_json(&b.config)?;
    eprintln!("exceptional component: {}", b.exceptional);
    match out {
        Some(p) => fs::write(p, text + "\n").map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_check(path: &Path, center: &Path, sel: &Selection, fmt: OutputFormat) -> Outcome {
    let input = load(path)?;
    let a = resolve(&input, sel)?;
    let center = load_center(center)?;
    let rep = check_invariance(&input.config, &center, &a)?;
    match fmt {
        OutputFormat::Text => print!("{rep}"),
        OutputFormat::Structured => print_json(json!({
            "verdict": rep.verdict.to_string(),
            "exceptional": rep.exceptional.as_str(),
            "selection": render_set(&rep.selection),
            "selection_after": render_set(&rep.selection_after),
            "before": rep.before.known.to_string(),
            "after": rep.after.known.to_string(),
            "difference": rep.difference.to_string(),
        })),
    }
    match rep.verdict {
        Verdict::Pass => Ok(()),
        Verdict::Fail => Err(Failure::Invalid("invariance check failed".into())),
    }
}

fn cmd_zeta(path: &Path, sel: &Selection, closed: bool, fmt: OutputFormat) -> Outcome {
    let input = load(path)?;
    let a = resolve(&input, sel)?;
    let x = motive_expansion(&input.config, &a)?;
    let z = zeta_expansion(&x);
    let cf = if closed { Some(zeta_closed_form(&input.config, &a)?) } else { None };
    let agree = cf.as_ref().map(|c| c == &z);
    report(fmt, "zeta", z.to_string(), cf.map(|c| c.to_string()), agree)
}

fn cmd_euler(path: &Path, sel: &Selection, closed: bool, fmt: OutputFormat) -> Outcome {
    let input = load(path)?;
    let a = resolve(&input, sel)?;
    let e = motive_expansion(&input.config, &a)?.euler();
    let cf = if closed { Some(euler_closed_form(&input.config, &a)?) } else { None };
    let agree = cf.as_ref().map(|c| c == &e);
    report(fmt, "euler", e.to_string(), cf.map(|c| c.to_string()), agree)
}

fn report(fmt: OutputFormat, key: &str, value: String, closed: Option<String>, agree: Option<bool>) -> Outcome {
    let marker = agree.map(|b| if b { "AGREE" } else { "DISAGREE" });
    match fmt {
        OutputFormat::Text => {
            println!("{value}");
            if let (Some(c), Some(m)) = (&closed, marker) {
                println!("closed form: {c}");
                println!("{m}");
            }
        }
        OutputFormat::Structured => {
            let mut v = json!({ key: value });
            if let (Some(c), Some(m)) = (closed, marker) {
                v["closed_form"] = json!(c);
                v["comparison"] = json!(m);
            }
            print_json(v);
        }
    }
    match agree {
        Some(false) => Err(Failure::Invalid("closed form disagrees".into())),
        _ => Ok(()),
    }
}

fn cmd_sweep(seed: u64, count: u64, bounds: Bounds) -> Outcome {
    if bounds.max_ambient_dim < 2 || bounds.max_components < 2 || bounds.max_multiplicity < 1 {
        return Err(Failure::Usage(
            "bounds need ambient dimension >= 2, components >= 2, multiplicity >= 1".into(),
        ));
    }
    let s = sweep(seed, count, &bounds);
    print!("{s}");
    if s.all_passed() {
        Ok(())
    } else {
        Err(Failure::Invalid(format!("{} case(s) failed", s.failed)))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { path } => cmd_validate(path),
        Command::Motive { path, sel, breakdown, format } => cmd_motive(path, sel, *breakdown, *format),
        Command::Blowup { path, center, out } => cmd_blowup(path, center, out.as_deref()),
        Command::CheckInvariance { path, center, sel, format } => cmd_check(path, center, sel, *format),
        Command::Zeta { path, sel, closed_form, format } => cmd_zeta(path, sel, *closed_form, *format),
        Command::Euler { path, sel, closed_form, format } => cmd_euler(path, sel, *closed_form, *format),
        Command::RandomSweep { seed, count, max_ambient_dim, max_components, max_multiplicity } => cmd_sweep(
            *seed,
            *count,
            Bounds {
                max_ambient_dim: *max_ambient_dim,
                max_components: *max_components,
                max_multiplicity: *max_multiplicity,
            },
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("i/o error: {m}");
            ExitCode::from(3)
        }
    }
}
