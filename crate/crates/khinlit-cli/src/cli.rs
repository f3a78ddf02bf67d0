//! Command-line front end.
//!
//! Exit codes: 0 success (or verification pass/inconclusive), 1
//! verification fail, 2 usage or domain error, 3 numeric or resource
//! error. Results go to standard output in JSON (default) or CSV;
//! diagnostics go to standard error.

use clap::{Parser, Subcommand, ValueEnum};
use khinlit::constants::{self, CaseId, ConstantQuery, Family, ScalarField};
use khinlit::special::{quadrature, solve_critical, steinhaus_pair_moment, CriticalExponent};
use khinlit::tensor::MixedNormSpec;
use khinlit::verify::{
    check_hl_exponents, verify_lambda_mixed_bound, verify_mixed_littlewood,
    verify_multiple_khinchine, KhinchineMode, LittlewoodVariant, Verdict, VerificationReport,
    VerifyOptions,
};
use khinlit::{norms, ComplexTensor, Error, ExecPolicy, Exponent};
use serde_json::json;

use crate::acceptance::{run_suite, SuiteConfig};
use crate::io::read_tensor;
use crate::report::{report_to_csv, report_to_json, verdict_str, REPORT_CSV_HEADER};

const EXIT_OK: i32 = 0;
const EXIT_VERIFY_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_RESOURCE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "khinlit",
    version,
    about = "Optimal Khinchine/Littlewood constants and certified multilinear norm bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Maximum enumerated grid points per operation.
    #[arg(long, global = true, env = "KHINLIT_BUDGET", default_value_t = ExecPolicy::DEFAULT_BUDGET)]
    budget: u64,

    /// Seed for Monte Carlo and ascent restarts.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    samples: u64,

    /// Base tolerance for deterministic verification margins.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads (0 = auto).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    KhinchineLowerReal,
    KhinchineUpperReal,
    SteinhausLower,
    SteinhausUpper,
    MultipleLower,
    MultipleUpper,
    MixedLittlewood,
    CaseTable,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::KhinchineLowerReal => Family::KhinchineLowerReal,
            FamilyArg::KhinchineUpperReal => Family::KhinchineUpperReal,
            FamilyArg::SteinhausLower => Family::SteinhausLower,
            FamilyArg::SteinhausUpper => Family::SteinhausUpper,
            FamilyArg::MultipleLower => Family::MultipleLower,
            FamilyArg::MultipleUpper => Family::MultipleUpper,
            FamilyArg::MixedLittlewood => Family::MixedLittlewood,
            FamilyArg::CaseTable => Family::CaseTable,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    I,
    Ii,
    Iii,
    Iv,
}

impl From<CaseArg> for CaseId {
    fn from(c: CaseArg) -> CaseId {
        match c {
            CaseArg::I => CaseId::I,
            CaseArg::Ii => CaseId::II,
            CaseArg::Iii => CaseId::III,
            CaseArg::Iv => CaseId::IV,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichCritical {
    P0,
    P1,
    Alpha,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Discrete,
    Mc,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a named constant family.
    Constants {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Exponent p (a number or `inf`).
        #[arg(long, default_value = "inf")]
        p: String,
        /// Degree m.
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, value_enum, default_value_t = FieldArg::Complex)]
        field: FieldArg,
        /// Case-table row (required with --family case-table).
        #[arg(long, value_enum)]
        case: Option<CaseArg>,
    },
    /// Solve for a critical exponent.
    Critical {
        #[arg(long, value_enum)]
        which: WhichCritical,
    },
    /// The two-variable phase moment with its quadrature cross-check.
    Moment {
        #[arg(long)]
        p: f64,
    },
    /// Exact maximum of |T| over the roots-of-unity grid.
    GridNorm {
        /// Tensor file (`-` for stdin).
        #[arg(long)]
        tensor: String,
        /// Roots-of-unity order.
        #[arg(long = "M")]
        order: u32,
    },
    /// Nested mixed sequence norm of a coefficient tensor.
    MixedNorm {
        #[arg(long)]
        tensor: String,
        /// Comma-separated exponents, outermost first (numbers or `inf`).
        #[arg(long)]
        t: String,
        /// Comma-separated 1-based visit order (default identity).
        #[arg(long)]
        sigma: Option<String>,
        /// Comma-separated domain exponents (default all `inf`).
        #[arg(long)]
        p: Option<String>,
    },
    /// Verify the m-fold Khinchine inequality on an array.
    VerifyKhinchine {
        #[arg(long)]
        tensor: String,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Discrete)]
        mode: ModeArg,
        /// Roots-of-unity order (discrete mode).
        #[arg(long = "M", default_value_t = 4)]
        order: u32,
    },
    /// Verify the mixed Littlewood inequality with the optimal constant.
    VerifyLittlewood {
        #[arg(long)]
        tensor: String,
        /// Domain exponent of slot 1 (a number in [2, inf] or `inf`).
        #[arg(long)]
        p: String,
        #[arg(long = "M")]
        order: u32,
        /// Nesting variant: `id` or `sigma<j>` (slot 1 swapped with slot j).
        #[arg(long, default_value = "id")]
        variant: String,
    },
    /// Verify the (lambda, 2) mixed-norm bound with constant sqrt(2)^(m-1).
    VerifyPra {
        #[arg(long)]
        tensor: String,
        /// Comma-separated domain exponents with sum of reciprocals < 1/2.
        #[arg(long)]
        p: String,
        #[arg(long = "M")]
        order: u32,
    },
    /// Check Hardy-Littlewood exponent admissibility.
    HlCheck {
        /// Comma-separated domain exponents.
        #[arg(long)]
        p: String,
        /// Comma-separated summing exponents.
        #[arg(long)]
        t: String,
    },
    /// Run the acceptance suite, one JSON line per criterion.
    Report {},
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::Numeric(_)) | Some(Error::Resource { .. }) => EXIT_RESOURCE,
                Some(_) => EXIT_USAGE,
                None => EXIT_USAGE,
            }
        }
    }
}

fn parse_exponent(s: &str) -> anyhow::Result<Exponent> {
    s.parse::<Exponent>().map_err(anyhow::Error::new)
}

fn parse_exponent_list(s: &str) -> anyhow::Result<Vec<Exponent>> {
    s.split(',').map(|part| parse_exponent(part)).collect()
}

fn dispatch(cli: &Cli) -> anyhow::Result<i32> {
    let policy = ExecPolicy::new(cli.budget, cli.threads);
    let opts = VerifyOptions { policy, tolerance: cli.tolerance };
    match &cli.command {
        Command::Constants { family, p, m, field, case } => {
            let mut query = ConstantQuery::new((*family).into(), parse_exponent(p)?)
                .with_m(*m)
                .with_field(match field {
                    FieldArg::Real => ScalarField::Real,
                    FieldArg::Complex => ScalarField::Complex,
                });
            if let Some(case) = case {
                query = query.with_case((*case).into());
            }
            let value = constants::evaluate(&query)?;
            let points: serde_json::Map<String, serde_json::Value> = value
                .critical_points_used
                .iter()
                .map(|(k, v)| (k.clone(), json!(v)))
                .collect();
            match cli.format {
                Format::Json => println!(
                    "{}",
                    json!({
                        "family": format!("{:?}", query.family),
                        "p": p,
                        "m": m,
                        "value": value.value,
                        "branch": value.branch,
                        "critical_points": points,
                    })
                ),
                Format::Csv => {
                    println!("family,p,m,value,branch");
                    println!("{:?},{},{},{},{}", query.family, p, m, value.value, value.branch);
                }
            }
            Ok(EXIT_OK)
        }
        Command::Critical { which } => {
            let root = solve_critical(match which {
                WhichCritical::P0 => CriticalExponent::P0,
                WhichCritical::P1 => CriticalExponent::P1,
                WhichCritical::Alpha => CriticalExponent::Alpha,
            })?;
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&root)?),
                Format::Csv => {
                    println!("root,residual,iterations,bracket_lo,bracket_hi");
                    println!(
                        "{},{},{},{},{}",
                        root.root, root.residual, root.iterations, root.bracket.0, root.bracket.1
                    );
                }
            }
            Ok(EXIT_OK)
        }
        Command::Moment { p } => {
            let value = steinhaus_pair_moment(*p)?;
            let quad = quadrature(
                |t| ((1.0 + t.cos()).powi(2) + t.sin().powi(2)).powf(0.5 * p),
                0.0,
                2.0 * std::f64::consts::PI,
                1e-12,
            )? / (2.0 * std::f64::consts::PI);
            let rooted = value.powf(1.0 / p);
            match cli.format {
                Format::Json => println!(
                    "{}",
                    json!({
                        "p": p,
                        "moment": value,
                        "rooted": rooted,
                        "quadrature": quad,
                        "oracle_gap": (value - quad).abs(),
                    })
                ),
                Format::Csv => {
                    println!("p,moment,rooted,quadrature,oracle_gap");
                    println!("{},{},{},{},{}", p, value, rooted, quad, (value - quad).abs());
                }
            }
            Ok(EXIT_OK)
        }
        Command::GridNorm { tensor, order } => {
            let t = read_tensor(tensor)?;
            let value = norms::grid_norm_with(&t, *order, &policy)?;
            match cli.format {
                Format::Json => println!(
                    "{}",
                    json!({ "M": order, "shape": t.shape(), "value": value })
                ),
                Format::Csv => {
                    println!("M,value");
                    println!("{order},{value}");
                }
            }
            Ok(EXIT_OK)
        }
        Command::MixedNorm { tensor, t, sigma, p } => {
            let tens = read_tensor(tensor)?;
            let m = tens.order();
            let exps = parse_exponent_list(t)?;
            let visit: Vec<usize> = match sigma {
                Some(s) => s
                    .split(',')
                    .map(|part| {
                        part.trim()
                            .parse::<usize>()
                            .map_err(|_| anyhow::anyhow!("cannot parse slot index {part:?}"))
                            .and_then(|v| {
                                if v >= 1 {
                                    Ok(v - 1)
                                } else {
                                    Err(anyhow::anyhow!("slot indices are 1-based"))
                                }
                            })
                    })
                    .collect::<anyhow::Result<_>>()?,
                None => (0..m).collect(),
            };
            let domain = match p {
                Some(s) => parse_exponent_list(s)?,
                None => vec![Exponent::INF; m],
            };
            let spec = MixedNormSpec::new(visit.clone(), exps, domain)?;
            let lambda = spec.lambda();
            let value = tens.mixed_norm(&spec)?;
            match cli.format {
                Format::Json => println!(
                    "{}",
                    json!({
                        "sigma": visit.iter().map(|v| v + 1).collect::<Vec<_>>(),
                        "t": spec.t().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                        "lambda": lambda,
                        "value": value,
                    })
                ),
                Format::Csv => {
                    println!("value,lambda");
                    println!("{},{}", value, lambda.map_or(String::from("undefined"), |l| l.to_string()));
                }
            }
            Ok(EXIT_OK)
        }
        Command::VerifyKhinchine { tensor, p, mode, order } => {
            let t = read_tensor(tensor)?;
            let mode = match mode {
                ModeArg::Discrete => KhinchineMode::Discrete { order: *order },
                ModeArg::Mc => KhinchineMode::MonteCarlo { samples: cli.samples, seed: cli.seed },
            };
            let rep = verify_multiple_khinchine(&t, *p, mode, &opts)?;
            emit_report(cli.format, &rep);
            Ok(report_exit(&rep))
        }
        Command::VerifyLittlewood { tensor, p, order, variant } => {
            let t = read_tensor(tensor)?;
            let variant = parse_variant(variant)?;
            let rep = verify_mixed_littlewood(&t, parse_exponent(p)?, variant, *order, &opts)?;
            emit_report(cli.format, &rep);
            Ok(report_exit(&rep))
        }
        Command::VerifyPra { tensor, p, order } => {
            let t = read_tensor(tensor)?;
            let rep = verify_lambda_mixed_bound(&t, &parse_exponent_list(p)?, *order, &opts)?;
            emit_report(cli.format, &rep);
            Ok(report_exit(&rep))
        }
        Command::HlCheck { p, t } => {
            let verdict = check_hl_exponents(&parse_exponent_list(p)?, &parse_exponent_list(t)?)?;
            match cli.format {
                Format::Json => println!(
                    "{}",
                    json!({
                        "admissible": verdict.admissible,
                        "sum_inv_p": verdict.sum_inv_p,
                        "sum_inv_t": verdict.sum_inv_t,
                        "bound": verdict.bound,
                        "t_min": if verdict.t_range.0.is_finite() {
                            json!(verdict.t_range.0)
                        } else {
                            json!("inf")
                        },
                        "t_max": verdict.t_range.1,
                        "violations": verdict.violations,
                    })
                ),
                Format::Csv => {
                    println!("admissible,sum_inv_p,sum_inv_t,bound,violations");
                    println!(
                        "{},{},{},{},{}",
                        verdict.admissible,
                        verdict.sum_inv_p,
                        verdict.sum_inv_t,
                        verdict.bound,
                        crate::report::csv_field(&verdict.violations.join("; ")),
                    );
                }
            }
            Ok(if verdict.admissible { EXIT_OK } else { EXIT_VERIFY_FAIL })
        }
        Command::Report {} => {
            let cfg = SuiteConfig { threads: cli.threads, budget: cli.budget };
            let outcomes = run_suite(&cfg);
            let mut all_pass = true;
            for outcome in &outcomes {
                println!("{}", outcome.json_line());
                eprintln!(
                    "criterion {:>2} {:<28} {}  ({:.2?})",
                    outcome.index,
                    outcome.name,
                    if outcome.pass { "pass" } else { "FAIL" },
                    outcome.elapsed
                );
                for f in &outcome.failures {
                    eprintln!("    - {f}");
                }
                all_pass &= outcome.pass;
            }
            Ok(if all_pass { EXIT_OK } else { EXIT_VERIFY_FAIL })
        }
    }
}

fn parse_variant(s: &str) -> anyhow::Result<LittlewoodVariant> {
    if s == "id" {
        return Ok(LittlewoodVariant::Identity);
    }
    if let Some(j) = s.strip_prefix("sigma") {
        let j: usize = j.parse().map_err(|_| anyhow::anyhow!("cannot parse variant {s:?}"))?;
        return Ok(LittlewoodVariant::Swap(j));
    }
    anyhow::bail!("variant must be `id` or `sigma<j>`, got {s:?}")
}

fn emit_report(format: Format, rep: &VerificationReport) {
    match format {
        Format::Json => println!("{}", report_to_json(rep)),
        Format::Csv => {
            println!("{REPORT_CSV_HEADER}");
            println!("{}", report_to_csv(rep));
        }
    }
}

fn report_exit(rep: &VerificationReport) -> i32 {
    match rep.verdict {
        Verdict::Pass | Verdict::Inconclusive => {
            if rep.verdict == Verdict::Inconclusive {
                eprintln!("verdict: inconclusive ({})", verdict_str(rep.verdict));
            }
            EXIT_OK
        }
        Verdict::Fail => EXIT_VERIFY_FAIL,
    }
}
