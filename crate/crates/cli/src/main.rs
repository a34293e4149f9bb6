use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use euler_selmer::arith::fq::FqField;
use euler_selmer::curves::{count_points, extension_count, torsion_bound_over_f, WeierstrassModel};
use euler_selmer::cyclotomic::{field_degree, splitting};
use euler_selmer::render::{local_data_rows, report_text, table};
use euler_selmer::request::AnalysisRequest;
use euler_selmer::selmer::{analyze, corank_report, place_descriptor, tau_p, DEFAULT_SAMPLES};
use euler_selmer::tate::{tate_at, PlaceDescriptor};
use euler_selmer::local::Ramification;

#[derive(Parser)]
#[command(name = "euler-selmer", version, about = "Euler characteristics of Selmer groups over p-adic Lie extensions of Q(mu_m)")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline from a JSON request (file path or - for stdin).
    Analyze {
        input: String,
        #[arg(long)]
        precision_digits: Option<i64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Tate's algorithm and Euler factor at the places of Q(mu_m) above a prime.
    Local {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        conductor: u64,
        /// Explicit residue degree; overrides the conductor.
        #[arg(long, requires = "e")]
        f: Option<usize>,
        /// Explicit ramification index; cyclotomic when l divides e's tower, else tame.
        #[arg(long, requires = "f")]
        e: Option<usize>,
        #[arg(long)]
        cyclotomic: bool,
        #[arg(long)]
        precision_digits: Option<i64>,
    },
    /// Decomposition (e, f, g) of a prime in Q(mu_m).
    Splitting {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        conductor: u64,
    },
    /// Bounds on the p-primary torsion over Q(mu_m).
    Torsion {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        conductor: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long)]
        certificate: Option<BigInt>,
    },
    /// Sum of local degrees above p of potentially supersingular reduction.
    Tau {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        conductor: u64,
    },
    /// Corank window and predictions.
    Coranks {
        #[arg(long)]
        conductor: u64,
        #[arg(long)]
        tau: u64,
        #[arg(long)]
        sigma_index: Option<u64>,
    },
    /// Number of points of the reduction over F_{l^f}.
    Count {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        degree: u32,
    },
}

fn parse_curve(s: &str) -> Result<WeierstrassModel, String> {
    let parts: Vec<&str> = s.trim_matches(|c| c == '[' || c == ']').split(',').map(str::trim).collect();
    WeierstrassModel::parse(&parts).map_err(|e| format!("--curve: {e}"))
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("serializable")),
        Format::Text => print!("{}", text()),
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    let format = cli.format;
    match cli.command {
        Command::Analyze { input, precision_digits, samples } => {
            let text = read_input(&input)?;
            let mut req = AnalysisRequest::from_json(&text).map_err(|e| e.to_string())?;
            if let Some(n) = precision_digits {
                req.options.precision_digits = Some(n);
            }
            if let Some(s) = samples {
                req.options.samples = s;
            }
            let report = analyze(&req.to_input().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            emit(format, &report, || report_text(&report));
            Ok(report.exit_code())
        }
        Command::Local { curve, prime, conductor, f, e, cyclotomic, precision_digits } => {
            let model = parse_curve(&curve)?;
            let (place, g) = match (f, e) {
                (Some(f), Some(e)) => {
                    let ramification = match (e, cyclotomic) {
                        (1, _) => Ramification::Unramified,
                        (_, true) => {
                            let field = euler_selmer::local::LocalField::new(prime, f, e, 1, true).map_err(|x| x.to_string())?;
                            field.ramification()
                        }
                        _ => Ramification::Tame,
                    };
                    (PlaceDescriptor { ell: prime, e, f, ramification }, 1)
                }
                _ => {
                    let s = splitting(prime, conductor).map_err(|e| e.to_string())?;
                    (place_descriptor(&s), s.g)
                }
            };
            let data = tate_at(&model, place, precision_digits).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct Out<'a> {
                places: u64,
                data: &'a euler_selmer::tate::LocalReductionData,
            }
            emit(format, &Out { places: g, data: &data }, || {
                format!("{} place(s)\n{}", g, local_data_rows(&[(format!("v{prime}"), &data)]))
            });
            Ok(0)
        }
        Command::Splitting { prime, conductor } => {
            let s = splitting(prime, conductor).map_err(|e| e.to_string())?;
            emit(format, &s, || {
                table(
                    &["l", "m", "e", "f", "g", "residue field"],
                    &[vec![
                        prime.to_string(),
                        conductor.to_string(),
                        s.e.to_string(),
                        s.f.to_string(),
                        s.g.to_string(),
                        format!("F_{}^{}", prime, s.f),
                    ]],
                )
            });
            Ok(0)
        }
        Command::Torsion { curve, prime, conductor, samples, certificate } => {
            let model = parse_curve(&curve)?;
            let t = torsion_bound_over_f(&model, prime, conductor, samples, certificate.as_ref()).map_err(|e| e.to_string())?;
            emit(format, &t, || {
                table(
                    &["p", "lower", "upper", "exact", "certified", "primes"],
                    &[vec![
                        t.p.to_string(),
                        t.lower.to_string(),
                        t.upper.to_string(),
                        t.exact.to_string(),
                        t.certified.to_string(),
                        t.sampled_primes.len().to_string(),
                    ]],
                )
            });
            Ok(0)
        }
        Command::Tau { curve, prime, conductor } => {
            let model = parse_curve(&curve)?;
            let tau = tau_p(&model, prime, conductor).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct Out {
                tau_p: u64,
                field_degree: u64,
            }
            let out = Out { tau_p: tau, field_degree: field_degree(conductor) };
            emit(format, &out, || format!("tau_p = {}  [F:Q] = {}\n", out.tau_p, out.field_degree));
            Ok(0)
        }
        Command::Coranks { conductor, tau, sigma_index } => {
            let degree = field_degree(conductor);
            if tau > degree {
                return Err(format!("tau = {tau} exceeds [F:Q] = {degree}"));
            }
            let r = corank_report(degree, tau, sigma_index);
            emit(format, &r, || {
                let mut s = format!("window ({}, {}){}\n", r.window.0, r.window.1, if r.pinned { " pinned" } else { "" });
                if let Some(p) = &r.predictions {
                    s.push_str(&format!("global {} local {} conjectural {}\n", p.global_h1, p.local_sum, p.conjectural_rank));
                }
                s
            });
            Ok(0)
        }
        Command::Count { curve, prime, degree } => {
            let model = parse_curve(&curve)?;
            let base = FqField::new(prime, 1).map_err(|e| e.to_string())?;
            let reduced = model.integral_model().reduce(&base).map_err(|e| e.to_string())?;
            let n1 = count_points(&reduced).map_err(|e| e.to_string())?;
            let n = extension_count(&BigInt::from(n1), &BigInt::from(prime), degree).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct Out {
                q: String,
                count: String,
            }
            let out = Out { q: BigInt::from(prime).pow(degree).to_string(), count: n.to_string() };
            emit(format, &out, || format!("#E(F_{}) = {}\n", out.q, out.count));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
