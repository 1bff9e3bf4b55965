use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use homfly_cli::job::{FieldChoice, Format, Normalization, ParseError};
use homfly_cli::report::VerdictStatus;
use homfly_cli::{emit, parse_input, run, CliError};
use homfly_homology::projector::ProjectorCache;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FieldArg {
    Rational,
    Prime,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Relative,
    Normalized,
}

/// Coloured triply graded homology of braid closures.
///
/// Reads a TOML job document (`colours`, `word`, optional `[options]`) and
/// prints the homology as a rational series together with a coefficient
/// table. Flags override the document's options.
#[derive(Parser, Debug)]
#[command(name = "hhom", version)]
struct Args {
    /// Job document; `-` reads standard input.
    input: PathBuf,
    #[arg(long, value_enum)]
    field: Option<FieldArg>,
    /// Maximal number of full twists per projector.
    #[arg(long)]
    twist_depth: Option<usize>,
    /// Lowest homological degree kept in projectors.
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<i64>,
    /// Table bounds on the q exponent, as `lo,hi`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    q_window: Option<Vec<i64>>,
    /// Table bounds on the a exponent, as `lo,hi`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a_window: Option<Vec<i64>>,
    /// Table bounds on the t exponent, as `lo,hi`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    t_window: Option<Vec<i64>>,
    /// Also compute H_N for this N.
    #[arg(long)]
    dn: Option<u32>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, value_enum)]
    normalization: Option<ModeArg>,
    /// Projector cache directory (default: $HOMFLY_CACHE_DIR).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Append timing and cache statistics.
    #[arg(long)]
    stats: bool,
}

fn pair(v: Vec<i64>) -> Result<[i64; 2], CliError> {
    match v[..] {
        [lo, hi] => Ok([lo, hi]),
        _ => Err(CliError::Parse(ParseError::Invalid(
            "window flags take two values, lo,hi".into(),
        ))),
    }
}

fn main_inner(args: Args) -> Result<(String, bool), CliError> {
    let text = if args.input.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Io(e.to_string()))?
    } else {
        std::fs::read_to_string(&args.input)
            .map_err(|e| CliError::Io(format!("{}: {e}", args.input.display())))?
    };
    let mut job = parse_input(&text)?;
    let o = &mut job.options;
    if let Some(f) = args.field {
        o.field = match f {
            FieldArg::Rational => FieldChoice::Rational,
            FieldArg::Prime => FieldChoice::Prime,
        };
    }
    if let Some(d) = args.twist_depth {
        o.twist_depth = d;
    }
    if let Some(t) = args.t_min {
        o.t_min = t;
    }
    if let Some(w) = args.q_window {
        o.window.q = pair(w)?;
    }
    if let Some(w) = args.a_window {
        o.window.a = pair(w)?;
    }
    if let Some(w) = args.t_window {
        o.window.t = pair(w)?;
    }
    if args.dn.is_some() {
        o.dn = args.dn;
    }
    if let Some(f) = args.format {
        o.format = match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        };
    }
    if let Some(m) = args.normalization {
        o.normalization = match m {
            ModeArg::Relative => Normalization::Relative,
            ModeArg::Normalized => Normalization::Normalized,
        };
    }
    let mut cache = ProjectorCache::new(args.cache_dir);
    let report = run(&job, &mut cache, args.stats)?;
    let ok = report.specialization.status != VerdictStatus::Mismatch;
    Ok((emit(&report, job.options.format), ok))
}

fn main() -> ExitCode {
    match main_inner(Args::parse()) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("hhom: specialization does not match the oracle");
                ExitCode::from(4)
            }
        }
        Err(e) => {
            eprintln!("hhom: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
