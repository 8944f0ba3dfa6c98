//! Command-line frontend.
//!
//! Exit status: 0 on success, 1 on usage or input errors, 2 on numerical
//! failures. Defaults resolve as flags over config-file entries over built-in
//! values; the config file holds `key = value` lines.

use crate::error::{Error, Result};
use crate::experiments::{self, ExperimentReport};
use crate::jacobi::JacobiParams;
use crate::kernel;
use crate::multiplier::{self, DiagonalCache, MultiplierSpec};
use crate::quadrature;
use crate::seq_ops::{self, EvalMode, FiniteSequence, WeightSeq};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

/// Environment variable providing the default worker thread count.
pub const THREADS_ENV: &str = "FOURIER_JACOBI_THREADS";

const CACHE_FILE: &str = "diagonals.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelMethod {
    /// O(1) closed-form entries (diagonal by quadrature).
    Closed,
    /// Direct quadrature of p_m p_n over the interval; the slow oracle.
    Quad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchOp {
    Hilbert,
    Q,
    Apply,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Key = value config file; flags override file entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Jacobi parameter alpha (> -1).
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Jacobi parameter beta (> -1).
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Sequence-space exponent p >= 1.
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Default truncation length for generated sequences and windows.
    #[arg(long, global = true)]
    n_trunc: Option<usize>,
    /// Output format for tabular results.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (FOURIER_JACOBI_THREADS supplies the default).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory holding the persistent kernel-diagonal cache.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Run both the fast and the direct path and require agreement.
    #[arg(long, global = true)]
    verify: bool,
}

#[derive(Debug, Parser)]
#[command(
    name = "fourier-jacobi",
    version,
    about = "Discrete Fourier-Jacobi interval multipliers",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Evaluate an orthonormal polynomial (or its derivative) at a point.
    Eval {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        deriv: bool,
    },
    /// A kernel entry K_[a,b](m, n) or a whole row of given truncation.
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: Option<usize>,
        /// Row truncation; emits CSV of the row instead of a single entry.
        #[arg(long, conflicts_with = "n")]
        row: Option<usize>,
        #[arg(long, value_enum, default_value_t = KernelMethod::Closed)]
        method: KernelMethod,
    },
    /// Apply the interval multiplier to a sequence.
    Apply {
        /// Input: delta:k, const:c:N, pow:g:N, or file:<path>.
        #[arg(long)]
        seq: String,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        /// Use the O(N log N) decomposition instead of kernel summation.
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        n_out: Option<usize>,
    },
    /// Recovery error of the symmetric multiplier over r = 1 - 2^-k.
    Converge {
        #[arg(long)]
        seq: String,
        /// Dyadic radius grid k1..k2 (inclusive), r = 1 - 2^-k.
        #[arg(long)]
        r_grid: String,
    },
    /// Near-band kernel sums on [0, 1 - 1/m^2] with a log m fit.
    Diverge {
        #[arg(long, value_delimiter = ',', required = true)]
        m_list: Vec<usize>,
    },
    /// Truncated l^1 norms of T delta_m on the same intervals.
    L1growth {
        #[arg(long, value_delimiter = ',', required = true)]
        m_list: Vec<usize>,
    },
    /// Operator quotient scan over an interval grid and input family.
    Scan {
        /// Comma-separated intervals a:b, e.g. "-1:0,-1:0.5,-0.5:0.5".
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Comma-separated input generators (default: a small delta family).
        #[arg(long)]
        f_family: Option<String>,
    },
    /// Discrete Muckenhoupt constant of a weight.
    Apweight {
        /// Weight tag: const:c or pow:gamma.
        #[arg(long)]
        weight: String,
        /// Window length.
        #[arg(long = "N")]
        n: usize,
    },
    /// Timing table comparing naive and fast evaluation.
    Bench {
        #[arg(long, value_enum)]
        op: BenchOp,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
    },
}

/// Resolved configuration: flag > config file > default.
#[derive(Debug, Clone)]
struct Config {
    params: JacobiParams,
    p: f64,
    tol: f64,
    n_trunc: usize,
    format: OutputFormat,
    output: Option<PathBuf>,
    threads: Option<usize>,
    cache_dir: Option<PathBuf>,
    verify: bool,
}

fn parse_config_file(path: &Path) -> Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading config file {}", path.display()), e))?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            what: "config file line",
            detail: format!("line {}: expected key = value, got {line:?}", lineno + 1),
        })?;
        let key = key.trim().to_string();
        match key.as_str() {
            "alpha" | "beta" | "p" | "tol" | "n_trunc" | "format" | "output" | "threads"
            | "cache_dir" => {
                map.insert(key, value.trim().to_string());
            }
            other => {
                return Err(Error::Parse {
                    what: "config file key",
                    detail: format!("unknown key {other:?}"),
                })
            }
        }
    }
    Ok(map)
}

fn file_value<T: std::str::FromStr>(
    map: &HashMap<String, String>,
    key: &'static str,
) -> Result<Option<T>> {
    match map.get(key) {
        None => Ok(None),
        Some(text) => text.parse().map(Some).map_err(|_| Error::Parse {
            what: "config file value",
            detail: format!("{key} = {text:?}"),
        }),
    }
}

impl Config {
    fn resolve(args: &GlobalArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => parse_config_file(path)?,
            None => HashMap::new(),
        };
        let alpha = args.alpha.or(file_value(&file, "alpha")?).unwrap_or(0.0);
        let beta = args.beta.or(file_value(&file, "beta")?).unwrap_or(0.0);
        let format = match (&args.format, file.get("format")) {
            (Some(f), _) => *f,
            (None, Some(text)) => match text.as_str() {
                "csv" => OutputFormat::Csv,
                "json" => OutputFormat::Json,
                other => {
                    return Err(Error::Parse {
                        what: "config file value",
                        detail: format!("format = {other:?}"),
                    })
                }
            },
            (None, None) => OutputFormat::Csv,
        };
        let env_threads = match std::env::var(THREADS_ENV) {
            Ok(text) => Some(text.parse().map_err(|_| Error::Parse {
                what: "thread environment variable",
                detail: format!("{THREADS_ENV} = {text:?}"),
            })?),
            Err(_) => None,
        };
        Ok(Self {
            params: JacobiParams::new(alpha, beta)?,
            p: args.p.or(file_value(&file, "p")?).unwrap_or(2.0),
            tol: args
                .tol
                .or(file_value(&file, "tol")?)
                .unwrap_or(quadrature::DEFAULT_TOL),
            n_trunc: args
                .n_trunc
                .or(file_value(&file, "n_trunc")?)
                .unwrap_or(256),
            format,
            output: args
                .output
                .clone()
                .or_else(|| file.get("output").map(PathBuf::from)),
            threads: args
                .threads
                .or(file_value(&file, "threads")?)
                .or(env_threads),
            cache_dir: args
                .cache_dir
                .clone()
                .or_else(|| file.get("cache_dir").map(PathBuf::from)),
            verify: args.verify,
        })
    }

    fn emit(&self, body: &str) -> Result<()> {
        match &self.output {
            Some(path) => std::fs::write(path, body)
                .map_err(|e| Error::io(format!("writing {}", path.display()), e)),
            None => {
                print!("{body}");
                std::io::stdout()
                    .flush()
                    .map_err(|e| Error::io("flushing stdout", e))
            }
        }
    }

    fn emit_report(&self, report: &ExperimentReport) -> Result<()> {
        let mut buf = Vec::new();
        match self.format {
            OutputFormat::Csv => report.write_csv(&mut buf),
            OutputFormat::Json => report.write_json(&mut buf),
        }
        .map_err(|e| Error::io("rendering report", e))?;
        self.emit(&String::from_utf8(buf).expect("reports are UTF-8"))
    }

    fn emit_sequence(&self, seq: &FiniteSequence) -> Result<()> {
        let mut buf = Vec::new();
        match self.format {
            OutputFormat::Csv => seq
                .write_csv(&mut buf)
                .map_err(|e| Error::io("rendering", e))?,
            OutputFormat::Json => {
                let value = serde_json::json!({ "values": seq.values() });
                serde_json::to_writer_pretty(&mut buf, &value)
                    .map_err(|e| Error::io("rendering", e.into()))?;
            }
        }
        self.emit(&String::from_utf8(buf).expect("sequences are UTF-8"))
    }
}

/// Parses and runs the process arguments; returns the process exit code.
pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(if err.is_numerical() { 2 } else { 1 })
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let cfg = Config::resolve(&cli.global)?;
    match cfg.threads {
        Some(threads) if threads >= 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Parse {
                    what: "thread pool",
                    detail: e.to_string(),
                })?;
            pool.install(|| dispatch(&cfg, &cli.command))
        }
        Some(_) => Err(Error::Parse {
            what: "thread count",
            detail: "need at least one thread".into(),
        }),
        None => dispatch(&cfg, &cli.command),
    }
}

fn load_cache(cfg: &Config) -> Result<DiagonalCache> {
    let cache = DiagonalCache::new();
    if let Some(dir) = &cfg.cache_dir {
        let path = dir.join(CACHE_FILE);
        if path.exists() {
            cache.load_csv(&path)?;
        }
    }
    Ok(cache)
}

fn save_cache(cfg: &Config, cache: &DiagonalCache) -> Result<()> {
    if let Some(dir) = &cfg.cache_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::io(format!("creating cache dir {}", dir.display()), e))?;
        cache.save_csv(&dir.join(CACHE_FILE))?;
    }
    Ok(())
}

fn parse_interval_grid(text: &str) -> Result<Vec<(f64, f64)>> {
    text.split(',')
        .map(|pair| {
            let (a, b) = pair.split_once(':').ok_or_else(|| Error::Parse {
                what: "interval grid",
                detail: format!("expected a:b, got {pair:?}"),
            })?;
            let parse = |s: &str| -> Result<f64> {
                s.trim().parse().map_err(|_| Error::Parse {
                    what: "interval endpoint",
                    detail: s.to_string(),
                })
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

fn parse_dyadic_grid(text: &str) -> Result<Vec<f64>> {
    let (lo, hi) = text.split_once("..").ok_or_else(|| Error::Parse {
        what: "r grid",
        detail: format!("expected k1..k2, got {text:?}"),
    })?;
    let parse = |s: &str| -> Result<u32> {
        s.trim().parse().map_err(|_| Error::Parse {
            what: "r grid bound",
            detail: s.to_string(),
        })
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo == 0 || hi < lo || hi > 52 {
        return Err(Error::Parse {
            what: "r grid",
            detail: format!("need 1 <= k1 <= k2 <= 52, got {lo}..{hi}"),
        });
    }
    Ok((lo..=hi).map(|k| 1.0 - 2f64.powi(-(k as i32))).collect())
}

fn dispatch(cfg: &Config, cmd: &Cmd) -> Result<()> {
    match cmd {
        Cmd::Eval { n, x, deriv } => {
            let value = if *deriv {
                cfg.params.orthonormal_derivative(*n, *x)?
            } else {
                cfg.params.orthonormal(*n, *x)?
            };
            cfg.emit(&format!("{value}\n"))
        }
        Cmd::Kernel {
            a,
            b,
            m,
            n,
            row,
            method,
        } => match (n, row) {
            (Some(n), None) => {
                let value = match method {
                    KernelMethod::Closed => kernel::interval(&cfg.params, *a, *b, *m, *n, cfg.tol)?,
                    KernelMethod::Quad => quadrature::integrate_measure(
                        &cfg.params,
                        |x| {
                            cfg.params.orthonormal_unchecked(*m, x)
                                * cfg.params.orthonormal_unchecked(*n, x)
                        },
                        *a,
                        *b,
                        cfg.tol,
                    )?,
                };
                cfg.emit(&format!("{value}\n"))
            }
            (None, Some(trunc)) => {
                let slice = match method {
                    KernelMethod::Closed => {
                        kernel::interval_row(&cfg.params, *a, *b, *m, *trunc, cfg.tol)?
                    }
                    KernelMethod::Quad => {
                        let values = (0..*trunc)
                            .map(|n| {
                                quadrature::integrate_measure(
                                    &cfg.params,
                                    |x| {
                                        cfg.params.orthonormal_unchecked(*m, x)
                                            * cfg.params.orthonormal_unchecked(n, x)
                                    },
                                    *a,
                                    *b,
                                    cfg.tol,
                                )
                            })
                            .collect::<Result<Vec<f64>>>()?;
                        return {
                            // emit in the same CSV shape as a closed-form row
                            let mut body = format!(
                                "# kernel alpha={:.16e} beta={:.16e} a={:.16e} b={:.16e} m={} trunc={}\nn,value\n",
                                cfg.params.alpha(), cfg.params.beta(), a, b, m, trunc
                            );
                            for (n, v) in values.iter().enumerate() {
                                body.push_str(&format!("{},{:.16e}\n", n, v));
                            }
                            cfg.emit(&body)
                        };
                    }
                };
                let mut buf = Vec::new();
                slice
                    .write_csv(&mut buf)
                    .map_err(|e| Error::io("rendering kernel row", e))?;
                cfg.emit(&String::from_utf8(buf).expect("CSV is UTF-8"))
            }
            _ => Err(Error::Parse {
                what: "kernel arguments",
                detail: "pass exactly one of --n or --row".into(),
            }),
        },
        Cmd::Apply {
            seq,
            a,
            b,
            fast,
            n_out,
        } => {
            let f = FiniteSequence::parse_generator(seq, Some(cfg.n_trunc))?;
            let n_out = n_out.unwrap_or_else(|| MultiplierSpec::default_n_out(&f));
            let spec = MultiplierSpec::new(cfg.params, *a, *b, f.len(), n_out)?;
            let cache = load_cache(cfg)?;
            let out = if *fast {
                multiplier::apply_fast(&spec, &f, &cache)?
            } else {
                multiplier::apply_direct(&spec, &f, &cache)?
            };
            if cfg.verify {
                let other = if *fast {
                    multiplier::apply_direct(&spec, &f, &cache)?
                } else {
                    multiplier::apply_fast(&spec, &f, &cache)?
                };
                let worst = out
                    .values()
                    .iter()
                    .zip(other.values())
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0f64, f64::max);
                if worst > 1e-8 {
                    return Err(Error::ToleranceNotReached {
                        tol: 1e-8,
                        budget: 0,
                        best: worst,
                        change: worst,
                    });
                }
                eprintln!("verify: max |fast - direct| = {worst:e}");
            }
            save_cache(cfg, &cache)?;
            cfg.emit_sequence(&out)
        }
        Cmd::Converge { seq, r_grid } => {
            let f = FiniteSequence::parse_generator(seq, Some(cfg.n_trunc))?;
            let r_list = parse_dyadic_grid(r_grid)?;
            let cache = load_cache(cfg)?;
            let report =
                experiments::run_convergence(&cfg.params, &f, cfg.p, &r_list, None, &cache)?;
            save_cache(cfg, &cache)?;
            cfg.emit_report(&report)
        }
        Cmd::Diverge { m_list } => {
            let report = experiments::run_divergence(&cfg.params, m_list)?;
            cfg.emit_report(&report)
        }
        Cmd::L1growth { m_list } => {
            let cache = load_cache(cfg)?;
            let report = experiments::run_l1_growth(&cfg.params, m_list, &cache)?;
            save_cache(cfg, &cache)?;
            cfg.emit_report(&report)
        }
        Cmd::Scan { grid, f_family } => {
            let intervals = parse_interval_grid(grid)?;
            let family: Vec<FiniteSequence> = match f_family {
                Some(text) => text
                    .split(',')
                    .map(|gen| FiniteSequence::parse_generator(gen, Some(cfg.n_trunc)))
                    .collect::<Result<_>>()?,
                None => [0usize, 1, 2, 4, 8, 16]
                    .iter()
                    .map(|&k| FiniteSequence::delta(k, cfg.n_trunc))
                    .collect(),
            };
            let cache = load_cache(cfg)?;
            let report = experiments::run_boundedness_scan(
                &cfg.params,
                cfg.p,
                &intervals,
                &family,
                cfg.n_trunc,
                &cache,
            )?;
            save_cache(cfg, &cache)?;
            cfg.emit_report(&report)
        }
        Cmd::Apweight { weight, n } => {
            let w = WeightSeq::parse_tag(weight, *n)?;
            let constant = seq_ops::ap_constant(&w, cfg.p, *n)?;
            let body = format!(
                "# apweight weight={} p={:.16e} N={}\np,N,constant\n{:.16e},{},{:.16e}\n",
                weight, cfg.p, n, cfg.p, n, constant
            );
            cfg.emit(&body)
        }
        Cmd::Bench { op, sizes } => run_bench(cfg, *op, sizes),
    }
}

/// Deterministic pseudo-random input for benchmarks (splitmix64 bits mapped
/// into [-1, 1]).
fn bench_input(len: usize, mut state: u64) -> FiniteSequence {
    let values = (0..len)
        .map(|_| {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 52) as f64 * 2.0 - 1.0
        })
        .collect();
    FiniteSequence::new(values).expect("bench input is finite")
}

fn time_it<T>(f: impl Fn() -> T) -> f64 {
    let reps = 3;
    let mut best = f64::INFINITY;
    for _ in 0..reps {
        let start = Instant::now();
        std::hint::black_box(f());
        best = best.min(start.elapsed().as_secs_f64());
    }
    best
}

fn run_bench(cfg: &Config, op: BenchOp, sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::Parse {
            what: "bench sizes",
            detail: "need at least one size".into(),
        });
    }
    let mut body = format!(
        "# bench op={:?} alpha={:.16e} beta={:.16e}\nsize,naive_seconds,fast_seconds,speedup\n",
        op,
        cfg.params.alpha(),
        cfg.params.beta()
    );
    for (i, &size) in sizes.iter().enumerate() {
        if size == 0 {
            return Err(Error::Parse {
                what: "bench size",
                detail: "sizes must be positive".into(),
            });
        }
        let f = bench_input(size, 0x5eed + i as u64);
        let (naive, fast) = match op {
            BenchOp::Hilbert => (
                time_it(|| seq_ops::hilbert_transform(&f, EvalMode::Naive)),
                time_it(|| seq_ops::hilbert_transform(&f, EvalMode::Fast)),
            ),
            BenchOp::Q => {
                let a = cfg.params.alpha() + cfg.params.beta() + 1.0;
                (
                    time_it(|| seq_ops::q_transform(&f, a, EvalMode::Naive)),
                    time_it(|| seq_ops::q_transform(&f, a, EvalMode::Fast)),
                )
            }
            BenchOp::Apply => {
                let cache = DiagonalCache::new();
                let input = bench_input(size.min(64), 0xf00d).resized(size.min(64));
                let spec = MultiplierSpec::new(cfg.params, -1.0, 0.5, input.len(), size)?;
                // warm the diagonal cache so timings compare the two paths
                cache.diagonal_batch(&cfg.params, 0.5, input.len().min(size))?;
                (
                    time_it(|| multiplier::apply_direct(&spec, &input, &cache)),
                    time_it(|| multiplier::apply_fast(&spec, &input, &cache)),
                )
            }
        };
        body.push_str(&format!(
            "{},{:.6e},{:.6e},{:.3e}\n",
            size,
            naive,
            fast,
            naive / fast
        ));
    }
    cfg.emit(&body)
}
