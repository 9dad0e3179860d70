use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde::Serialize;

use exprado::decide::{DecideOptions, PrimeChoice};
use exprado::search::{find_progression, rado_number, vdw_number, DEFAULT_CEILING};
use exprado::witness::find_positive_solution_doubling;
use exprado::{dsl, rado, search, witness};

mod render;

#[derive(Parser)]
#[command(name = "exprado", version)]
#[command(about = "Decide partition regularity of exponential equation systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Print machine-readable JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a system and print the certificate.
    Decide {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
        /// Skip the witness for regular systems.
        #[arg(long)]
        no_witness: bool,
        #[arg(long, default_value_t = 2)]
        a: u64,
        #[arg(long, default_value_t = 2)]
        b: u64,
        /// Prime for the forbidding colouring, or `auto`.
        #[arg(long, default_value = "auto", value_parser = parse_prime)]
        p: PrimeChoice,
        /// Variable bound for verifying the colouring (default: sized to the system).
        #[arg(long)]
        verify_bound: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: u64,
        /// Largest entry tried for the exponent vector z.
        #[arg(long, default_value_t = 64)]
        z_bound: u64,
        #[arg(long, default_value_t = rado::DEFAULT_COLUMN_CAP)]
        column_cap: usize,
    },
    /// Print the associated linear system.
    Linearize {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Lift an exponent vector z to a witness and verify it.
    Witness {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
        /// Explicit z, comma separated. Searched for when omitted.
        #[arg(long, value_delimiter = ',')]
        z: Option<Vec<u64>>,
        #[arg(long, default_value_t = 64)]
        z_bound: u64,
        #[arg(long, default_value_t = 2)]
        a: u64,
        #[arg(long, default_value_t = 2)]
        b: u64,
        /// Also list the exponential pattern with weight budget 2W(z).
        #[arg(long)]
        pattern: bool,
    },
    /// Search for a monochromatic solution with all variables in [2, var-bound].
    Search {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
        #[arg(long, value_parser = parse_spec)]
        colouring: search::ColouringSpec,
        #[arg(long, default_value_t = 20)]
        var_bound: u64,
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: u64,
    },
    /// Evaluate a colouring spec.
    Colouring {
        #[arg(long, value_parser = parse_spec)]
        spec: search::ColouringSpec,
        /// Points to colour.
        #[arg(long, required = true, num_args = 1..)]
        eval: Vec<u64>,
        /// Evaluate along the sequence 2^(d*2^x) instead.
        #[arg(long)]
        restrict: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Number of prime factors with multiplicity.
    Nu {
        x: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Lowest nonzero base-p digit of x.
    Cp {
        p: u64,
        x: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Least N such that every k-colouring of [N] has a monochromatic solution.
    RadoNumber {
        /// Matrix file, or the matrix text itself with --inline.
        matrix: String,
        #[arg(long)]
        inline: bool,
        #[arg(long, default_value_t = 2)]
        colours: usize,
        #[arg(long, default_value_t = 100)]
        max: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Van der Waerden number W_k(l) by exhaustive search.
    Vdw {
        #[arg(long, default_value_t = 2)]
        colours: usize,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 100)]
        max: u64,
        /// Instead of W_k(l), look for an l-term progression in this colour table.
        #[arg(long, value_delimiter = ',')]
        table: Option<Vec<u64>>,
        #[command(flatten)]
        out: Output,
    },
}

fn parse_prime(s: &str) -> Result<PrimeChoice, String> {
    if s == "auto" {
        return Ok(PrimeChoice::Auto);
    }
    s.parse().map(PrimeChoice::Fixed).map_err(|_| format!("expected `auto` or a prime, got {s:?}"))
}

fn parse_spec(s: &str) -> Result<search::ColouringSpec, String> {
    dsl::parse_colouring(s).map_err(|e| e.message)
}

type CmdResult = Result<(String, u8), String>;

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_system(path: &Path) -> Result<exprado::ExpSystem, String> {
    let text = read(path)?;
    let sys = dsl::parse_system(&text).map_err(|e| format!("{}:{e}", path.display()))?;
    let problems = exprado::validate(&sys);
    if !problems.is_empty() {
        return Err(format!("{}: {}", path.display(), problems.join("; ")));
    }
    Ok(sys)
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
        s.push('\n');
        s
    } else {
        text()
    }
}

fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Decide { file, out, no_witness, a, b, p, verify_bound, ceiling, z_bound, column_cap } => {
            let opts = DecideOptions { witness: !no_witness, a, b, prime: p, verify_bound, ceiling, z_bound, column_cap };
            let text = read(&file)?;
            let report = exprado::decide_text(&text, &opts).map_err(|e| format!("{}: {e}", file.display()))?;
            let code = report.exit_code() as u8;
            Ok((emit(out.json, &report, || render::decision(&report)), code))
        }
        Command::Linearize { file, out } => {
            let sys = exprado::normalize(&read_system(&file)?).system;
            let lin = exprado::build_linear_system(&sys);
            Ok((emit(out.json, &lin, || dsl::print_matrix(&lin.matrix)), 0))
        }
        Command::Witness { file, out, z, z_bound, a, b, pattern } => {
            let sys = exprado::normalize(&read_system(&file)?).system;
            let z = match z {
                Some(z) => z,
                None => {
                    let lin = exprado::build_linear_system(&sys);
                    find_positive_solution_doubling(&lin.matrix, 1, z_bound)
                        .map(|(z, _)| z)
                        .ok_or_else(|| format!("no positive solution with entries <= {z_bound}"))?
                }
            };
            let w = witness::lift(&sys, &z, a, b).map_err(|e| e.to_string())?;
            let report = render::WitnessOutput::new(&sys, w, pattern);
            Ok((emit(out.json, &report, || render::witness(&report)), 0))
        }
        Command::Search { file, out, colouring, var_bound, ceiling } => {
            let sys = exprado::normalize(&read_system(&file)?).system;
            let report = search::search_exp(&sys, &colouring, var_bound, &BigUint::from(ceiling));
            let code = if report.outcome.is_found() { 0 } else { 1 };
            Ok((emit(out.json, &report, || render::search(&report)), code))
        }
        Command::Colouring { spec, eval, restrict, out } => {
            let colours = eval
                .iter()
                .map(|&x| match restrict {
                    Some(d) => search::d_restrict(&spec, d, x).map_err(|e| e.to_string()),
                    None => Ok(spec.colour(x)),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let rows: Vec<render::ColourRow> = eval
                .iter()
                .zip(colours)
                .map(|(&x, colour)| render::ColourRow { x, colour: render::colour_json(colour) })
                .collect();
            let report = render::ColouringOutput { spec: dsl::print_colouring(&spec), restrict, colours: rows };
            Ok((emit(out.json, &report, || render::colouring(&report)), 0))
        }
        Command::Nu { x, out } => {
            let v = witness::nu(x).map_err(|e| e.to_string())?;
            Ok((emit(out.json, &serde_json::json!({ "x": x, "nu": v }), || format!("{v}\n")), 0))
        }
        Command::Cp { p, x, out } => {
            let v = rado::rado_colour(p, x).map_err(|e| e.to_string())?;
            Ok((emit(out.json, &serde_json::json!({ "p": p, "x": x, "colour": v }), || format!("{v}\n")), 0))
        }
        Command::RadoNumber { matrix, inline, colours, max, out } => {
            let text = if inline { matrix.clone() } else { read(Path::new(&matrix))? };
            let m = dsl::parse_matrix(&text).map_err(|e| e.to_string())?;
            if colours == 0 {
                return Err("--colours must be at least 1".into());
            }
            let r = rado_number(&m, colours, max);
            Ok((emit(out.json, &r, || render::bounded_number(&r)), 0))
        }
        Command::Vdw { colours, length, max, table, out } => {
            if length == 0 || colours == 0 {
                return Err("--length and --colours must be at least 1".into());
            }
            match table {
                Some(t) => {
                    let ap = find_progression(&t, length);
                    let value = ap.map(|(a, d)| serde_json::json!({ "a": a, "d": d }));
                    let text = || match ap {
                        Some((a, d)) => format!("a={a} d={d}\n"),
                        None => "not found\n".to_string(),
                    };
                    Ok((emit(out.json, &value, text), if ap.is_some() { 0 } else { 1 }))
                }
                None => {
                    let r = vdw_number(colours, length, max);
                    Ok((emit(out.json, &r, || render::bounded_number(&r)), 0))
                }
            }
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
