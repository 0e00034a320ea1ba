//! Unified command-line entry point.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;

use zecklab::distribution;
use zecklab::far_difference;
use zecklab::spectral;
use zecklab::zeckendorf;
use zecklab::{PlrsSequence, PlrsSpec};

#[derive(Parser)]
#[command(name = "zecklab", version, about = "Generalized Zeckendorf decomposition laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct SpecArg {
    /// Preset name (fibonacci, decimal), inline JSON {"coeffs":[...]}, or a
    /// path to a JSON file; detected by the first character.
    #[arg(long)]
    spec: String,
}

impl SpecArg {
    fn parse(&self) -> Result<PlrsSpec, String> {
        match self.spec.as_str() {
            "fibonacci" => return Ok(PlrsSpec::fibonacci()),
            "decimal" => return Ok(PlrsSpec::decimal()),
            _ => {}
        }
        let json = if self.spec.starts_with('{') {
            self.spec.clone()
        } else {
            std::fs::read_to_string(&self.spec)
                .map_err(|e| format!("cannot read spec file {}: {e}", self.spec))?
        };
        serde_json::from_str(&json).map_err(|e| format!("invalid spec JSON: {e}"))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Greedy generalized Zeckendorf decomposition of an integer.
    Decompose {
        #[command(flatten)]
        spec: SpecArg,
        /// The integer to decompose (decimal string, arbitrary size).
        #[arg(long)]
        n: String,
    },
    /// Exact summand-count distribution p_{n,k} at one level.
    Dist {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Exact moments of the summand count at one level.
    Moments {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        level: usize,
        /// Highest moment order (>= 2).
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Gaussian-convergence diagnostics at one level.
    Gaussian {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 6)]
        max_even_order: usize,
    },
    /// Roots of the characteristic polynomial A(y) at a sampled x.
    Roots {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 1.0)]
        x: f64,
    },
    /// Linear fit of the asymptotic mean summand count over a window.
    Lek {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Far-difference (signed Fibonacci) representations.
    Fardiff {
        #[command(subcommand)]
        command: FardiffCommand,
    },
    /// Run the bijection and table oracles up to a level; exit 2 on failure.
    Verify {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        max_level: usize,
    },
}

#[derive(Subcommand)]
enum FardiffCommand {
    /// Far-difference representation of any integer.
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        n: String,
    },
    /// Bivariate statistics of positive/negative summand counts.
    Stats {
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Serialize)]
struct DecomposeOut {
    value: String,
    level: usize,
    coeffs: Vec<u64>,
    summands: u64,
}

#[derive(Serialize)]
struct DistRow {
    k: usize,
    count: String,
}

#[derive(Serialize)]
struct DistOut {
    level: usize,
    delta: String,
    counts: Vec<DistRow>,
}

#[derive(Serialize)]
struct ExactStat {
    exact: String,
    float: f64,
}

fn exact(r: &BigRational) -> ExactStat {
    ExactStat {
        exact: r.to_string(),
        float: zecklab::num_util::ratio_to_f64(r),
    }
}

#[derive(Serialize)]
struct MomentsOut {
    level: usize,
    mean: ExactStat,
    variance: ExactStat,
    centered_moments: Vec<ExactStat>,
    standardized_moments: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct GaussianOut {
    level: usize,
    skewness: f64,
    excess_kurtosis: f64,
    standardized_even_moments: Vec<EvenMoment>,
    ks_distance: f64,
}

#[derive(Serialize)]
struct EvenMoment {
    order: usize,
    value: f64,
    gaussian_target: f64,
}

#[derive(Serialize)]
struct RootsOut {
    x: f64,
    poly_coeffs: Vec<String>,
    roots: Vec<[f64; 2]>,
    dominant: usize,
    min_pairwise_gap: f64,
    has_multiple_root: bool,
}

#[derive(Serialize)]
struct LekOut {
    c: ExactStat,
    d: ExactStat,
    residual_tail: Vec<f64>,
}

#[derive(Serialize)]
struct FardiffDecomposeOut {
    value: String,
    terms: Vec<(u32, i8)>,
    positive_summands: u64,
    negative_summands: u64,
}

#[derive(Serialize)]
struct FardiffStatsOut {
    level: usize,
    total: String,
    ek: ExactStat,
    el: ExactStat,
    var_k: ExactStat,
    var_l: ExactStat,
    cov_kl: ExactStat,
    corr_kl: Option<f64>,
    corr_sum_diff: Option<f64>,
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serialize"));
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Decompose { spec, n } => {
            let spec = spec.parse()?;
            let value: BigUint = n.parse().map_err(|e| format!("invalid --n: {e}"))?;
            // grow the sequence until the value is strictly below the last term
            let mut count = spec.depth() + 2;
            let seq = loop {
                let seq = PlrsSequence::build(spec.clone(), count).map_err(|e| e.to_string())?;
                if *seq.term(count) > value {
                    break seq;
                }
                count *= 2;
            };
            let d = zeckendorf::decompose(&seq, &value).map_err(|e| e.to_string())?;
            emit(&DecomposeOut {
                value: d.value().to_string(),
                level: d.level(),
                coeffs: d.coeffs().to_vec(),
                summands: d.summands(),
            });
        }
        Command::Dist {
            spec,
            level,
            format,
        } => {
            let table =
                distribution::build_table(&spec.parse()?, level).map_err(|e| e.to_string())?;
            match format {
                Format::Csv => {
                    println!("k,count");
                    for (k, c) in table.support() {
                        println!("{k},{c}");
                    }
                }
                Format::Json => emit(&DistOut {
                    level,
                    delta: table.delta().to_string(),
                    counts: table
                        .support()
                        .map(|(k, c)| DistRow {
                            k,
                            count: c.to_string(),
                        })
                        .collect(),
                }),
            }
        }
        Command::Moments { spec, level, order } => {
            if order < 2 {
                return Err("--order must be >= 2".into());
            }
            let table =
                distribution::build_table(&spec.parse()?, level).map_err(|e| e.to_string())?;
            let m = distribution::moments(&table, order);
            emit(&MomentsOut {
                level,
                mean: exact(&m.mean),
                variance: exact(&m.variance),
                centered_moments: m.centered.iter().map(exact).collect(),
                standardized_moments: m.standardized.clone(),
            });
        }
        Command::Gaussian {
            spec,
            level,
            max_even_order,
        } => {
            let table =
                distribution::build_table(&spec.parse()?, level).map_err(|e| e.to_string())?;
            let g = distribution::gaussian_metrics(&table, max_even_order)
                .map_err(|e| e.to_string())?;
            emit(&GaussianOut {
                level,
                skewness: g.skewness,
                excess_kurtosis: g.excess_kurtosis,
                standardized_even_moments: g
                    .standardized_even_moments
                    .iter()
                    .map(|&(order, value, target)| EvenMoment {
                        order,
                        value,
                        gaussian_target: target,
                    })
                    .collect(),
                ks_distance: g.ks_distance,
            });
        }
        Command::Roots { spec, x } => {
            if !(x > 0.0) {
                return Err("--x must be positive".into());
            }
            let xr = BigRational::from_float(x).ok_or("non-finite --x")?;
            let report = spectral::root_report(&spec.parse()?, &xr).map_err(|e| e.to_string())?;
            emit(&RootsOut {
                x: report.x_value,
                poly_coeffs: report.poly_coeffs.iter().map(|c| c.to_string()).collect(),
                roots: report
                    .analysis
                    .roots
                    .iter()
                    .map(|r| [r.re, r.im])
                    .collect(),
                dominant: report.analysis.dominant,
                min_pairwise_gap: report.analysis.min_pairwise_gap,
                has_multiple_root: report.analysis.has_multiple_root,
            });
        }
        Command::Lek { spec, from, to } => {
            let fit =
                spectral::lekkerkerker_fit(&spec.parse()?, from, to).map_err(|e| e.to_string())?;
            emit(&LekOut {
                c: exact(&fit.c_exact),
                d: exact(&fit.d_exact),
                residual_tail: fit.residual_tail,
            });
        }
        Command::Fardiff { command } => match command {
            FardiffCommand::Decompose { n } => {
                let value: BigInt = n.parse().map_err(|e| format!("invalid --n: {e}"))?;
                let sd = far_difference::fd_decompose(&value);
                emit(&FardiffDecomposeOut {
                    value: value.to_string(),
                    terms: sd.terms().to_vec(),
                    positive_summands: sd.positive_count(),
                    negative_summands: sd.negative_count(),
                });
            }
            FardiffCommand::Stats { level, format } => {
                if level == 0 {
                    return Err("--level must be >= 1".into());
                }
                let table = far_difference::fd_table(level);
                let s = far_difference::fd_stats(&table);
                match format {
                    Format::Csv => {
                        println!("stat,value,exact");
                        println!("ek,{},{}", s.ek_f64(), s.ek);
                        println!("el,{},{}", s.el_f64(), s.el);
                        println!("var_k,{},{}", s.var_k_f64(), s.var_k);
                        println!("var_l,{},{}", s.var_l_f64(), s.var_l);
                        let corr = s.corr_kl.map_or(String::new(), |c| c.to_string());
                        println!("corr_kl,{corr},");
                        let csd = s.corr_sum_diff.map_or(String::new(), |c| c.to_string());
                        println!("corr_sum_diff,{csd},");
                    }
                    Format::Json => emit(&FardiffStatsOut {
                        level,
                        total: table.total().to_string(),
                        ek: exact(&s.ek),
                        el: exact(&s.el),
                        var_k: exact(&s.var_k),
                        var_l: exact(&s.var_l),
                        cov_kl: exact(&s.cov_kl),
                        corr_kl: s.corr_kl,
                        corr_sum_diff: s.corr_sum_diff,
                    }),
                }
            }
        },
        Command::Verify { spec, max_level } => {
            let spec = spec.parse()?;
            let seq = PlrsSequence::build(spec.clone(), max_level + 2)
                .map_err(|e| e.to_string())?;
            let mut failed = false;
            for n in 1..=max_level {
                match zeckendorf::verify_bijection(&seq, n) {
                    Err(e) => {
                        eprintln!("level {n}: skipped ({e})");
                        continue;
                    }
                    Ok(report) => {
                        let table = distribution::build_table(&spec, n)
                            .map_err(|e| e.to_string())?;
                        let mut hist = std::collections::BTreeMap::new();
                        for d in zecklab::plrs::enumerate_legal(&seq, n)
                            .map_err(|e| e.to_string())?
                        {
                            *hist.entry(d.summands() as usize).or_insert(0u64) += 1;
                        }
                        let table_ok = table
                            .support()
                            .map(|(k, c)| (k, c.to_string()))
                            .eq(hist.iter().map(|(&k, &c)| (k, c.to_string())));
                        let ok = report.is_clean() && table_ok;
                        println!(
                            "level {n}: checked {} values, bijection {}, table {}",
                            report.checked,
                            if report.is_clean() { "ok" } else { "FAILED" },
                            if table_ok { "ok" } else { "FAILED" },
                        );
                        for f in &report.failures {
                            eprintln!("  {f}");
                        }
                        failed |= !ok;
                    }
                }
            }
            if failed {
                return Ok(2);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are success paths; everything else is usage error
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
