//! `bench`: run benchmark evaluations, the hint ablation, the robustness
//! study, and the numeric probes from the command line.
//!
//! Generation needs either a live chat endpoint (BENCH_LLM_ENDPOINT,
//! optionally BENCH_LLM_MODEL and BENCH_LLM_TOKEN) or a warm replay cache
//! (--llm-cache). Success rates are report data; the exit code only says
//! whether the run completed.

use anyhow::{anyhow, bail, Context, Result};
use benchtop::eval::{
    default_hint_ladder, render_ablation, render_report, render_table, run_evaluation,
    run_hint_ablation, run_robustness, EvalRequest, Method, ReportFormat,
};
use benchtop::llm::{
    regression_probe, sinusoid_probe, ChatClient, GenerationConfig, NumberFormatting,
    RegressionProbeConfig, ReplayClient, SinusoidProbeConfig,
};
use benchtop::sim::{task_kind_from_name, SimConfig, TaskSpec, ALL_TASK_NAMES};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "bench", about = "compliant-manipulation benchmark runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Number of evaluation rollouts per cell.
    #[arg(long, default_value_t = 10)]
    evals: u32,
    /// Completions drawn per prompt (best-of-n).
    #[arg(long, default_value_t = 5)]
    samples: u32,
    /// Base seed; rollout i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Replay cache directory for chat completions.
    #[arg(long)]
    llm_cache: Option<PathBuf>,
    /// Geometry/controller override file (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Enforce the documented [-0.4, 0.4] force-threshold range.
    #[arg(long, default_value_t = false)]
    strict_range: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one method on one task.
    Run {
        /// One of: fmb-circle, fmb-star, fmb-halfpipe, rgmc-unroute,
        /// rgmc-route, nist-connector, nist-connector-perception.
        #[arg(long)]
        task: String,
        /// scripted | reference | ptp | fixed-compliance | ours-zero |
        /// ours-few | canned:PATH  (ptp/fixed-compliance take an optional :BASE).
        #[arg(long)]
        method: String,
        #[command(flatten)]
        common: CommonArgs,
        /// Report format: table | csv | json.
        #[arg(long, default_value = "table")]
        report: String,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify generation failures across hint subsets.
    AblateHints {
        #[arg(long, default_value = "rgmc-unroute")]
        task: String,
        /// Failing candidates collected per hint subset.
        #[arg(long, default_value_t = 15)]
        failures: u32,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the unroute task from both forced start sides.
    Robustness {
        #[arg(long, default_value = "reference")]
        method: String,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "table")]
        report: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numeric probes against the chat endpoint.
    Probe {
        #[command(subcommand)]
        kind: ProbeKind,
    },
}

#[derive(Subcommand)]
enum ProbeKind {
    /// In-context linear regression across pair counts and precisions.
    Regression {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated pair counts to sweep.
        #[arg(long, default_value = "2,4,8,16")]
        pairs: String,
        /// Comma-separated decimal precisions to sweep.
        #[arg(long, default_value = "1,2,3")]
        decimals: String,
        /// CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sinusoid extrapolation across frequencies.
    Sinusoid {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated frequencies to sweep.
        #[arg(long, default_value = "0.25,0.5,1.0")]
        frequencies: String,
        /// Comma-separated decimal precisions to sweep.
        #[arg(long, default_value = "1,2,3")]
        decimals: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            task,
            method,
            common,
            report,
            out,
        } => {
            let format = ReportFormat::parse(&report)
                .ok_or_else(|| anyhow!("unknown report format `{report}`"))?;
            let sim = load_sim(&common)?;
            let task_spec = parse_task(&task, &sim)?;
            let method = Method::parse(&method)
                .ok_or_else(|| anyhow!("unknown method `{method}`"))?;
            let mut req = EvalRequest::new(task_spec, method);
            req.n_evals = common.evals;
            req.num_samples = common.samples;
            req.seed = common.seed;
            req.strict_range = common.strict_range;
            let client = build_client(&common)?;
            let report = run_evaluation(&req, &sim, client_ref(&client))?;
            write_or_print(&render_report(&report, format), out.as_deref())?;
            eprintln!(
                "completed in {:.2}s: {}/{} successes, {} faults",
                report.wall_clock_s, report.successes, report.n_evals, report.faults
            );
            Ok(())
        }
        Command::AblateHints {
            task,
            failures,
            common,
            out,
        } => {
            let sim = load_sim(&common)?;
            let task_spec = parse_task(&task, &sim)?;
            let client = build_client(&common)?
                .ok_or_else(|| anyhow!("the ablation needs --llm-cache or a live endpoint"))?;
            let cells = run_hint_ablation(
                &task_spec,
                &default_hint_ladder(),
                failures,
                &client,
                &sim,
                common.seed,
            )?;
            let text = render_ablation(&cells);
            write_or_print(&text, out.as_deref())?;
            Ok(())
        }
        Command::Robustness {
            method,
            common,
            report,
            out,
        } => {
            let format = ReportFormat::parse(&report)
                .ok_or_else(|| anyhow!("unknown report format `{report}`"))?;
            let sim = load_sim(&common)?;
            let task_spec = parse_task("rgmc-unroute", &sim)?;
            let method = Method::parse(&method)
                .ok_or_else(|| anyhow!("unknown method `{method}`"))?;
            let mut req = EvalRequest::new(task_spec, method);
            req.n_evals = common.evals;
            req.num_samples = common.samples;
            req.seed = common.seed;
            req.strict_range = common.strict_range;
            let client = build_client(&common)?;
            let (left, right) = run_robustness(&req, &sim, client_ref(&client))?;
            let text = match format {
                ReportFormat::Table => render_table(&[left, right]),
                _ => {
                    let mut text = render_report(&left, format);
                    text.push_str(&render_report(&right, format));
                    text
                }
            };
            write_or_print(&text, out.as_deref())?;
            Ok(())
        }
        Command::Probe { kind } => run_probe(kind),
    }
}

fn run_probe(kind: ProbeKind) -> Result<()> {
    match kind {
        ProbeKind::Regression {
            common,
            pairs,
            decimals,
            out,
        } => {
            let client = require_client(&common)?;
            let mut csv = String::from("num_pairs,decimals,formatting,expected,predicted,abs_error\n");
            for num_pairs in parse_list::<usize>(&pairs)? {
                for decimals in parse_list::<usize>(&decimals)? {
                    for formatting in [NumberFormatting::Plain, NumberFormatting::DigitSpaced] {
                        let cfg = RegressionProbeConfig {
                            num_pairs,
                            decimals,
                            formatting,
                            seed: common.seed,
                        };
                        let r = regression_probe(&cfg, &client)?;
                        csv.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            num_pairs,
                            decimals,
                            formatting.name(),
                            r.expected,
                            r.predicted.map(|v| v.to_string()).unwrap_or_default(),
                            r.abs_error.map(|v| v.to_string()).unwrap_or_default()
                        ));
                    }
                }
            }
            write_or_print(&csv, out.as_deref())
        }
        ProbeKind::Sinusoid {
            common,
            frequencies,
            decimals,
            out,
        } => {
            let client = require_client(&common)?;
            let mut csv = String::from("frequency,decimals,horizon,rms_error\n");
            for frequency in parse_list::<f64>(&frequencies)? {
                for decimals in parse_list::<usize>(&decimals)? {
                    let cfg = SinusoidProbeConfig {
                        frequency,
                        decimals,
                        ..Default::default()
                    };
                    let r = sinusoid_probe(&cfg, &client)?;
                    csv.push_str(&format!(
                        "{},{},{},{}\n",
                        frequency,
                        decimals,
                        cfg.horizon,
                        r.rms_error.map(|v| v.to_string()).unwrap_or_default()
                    ));
                }
            }
            write_or_print(&csv, out.as_deref())
        }
    }
}

fn load_sim(common: &CommonArgs) -> Result<SimConfig> {
    match &common.config {
        Some(path) => {
            Ok(SimConfig::load(path).with_context(|| format!("loading config {}", path.display()))?)
        }
        None => Ok(SimConfig::default()),
    }
}

fn parse_task(name: &str, sim: &SimConfig) -> Result<TaskSpec> {
    let kind = task_kind_from_name(name).ok_or_else(|| {
        anyhow!(
            "unknown task `{name}`; expected one of {}",
            ALL_TASK_NAMES.join(", ")
        )
    })?;
    let spec = TaskSpec::new(kind, sim);
    spec.validate()?;
    Ok(spec)
}

/// The client stack: replay cache when requested, live endpoint from the
/// environment when configured. None means purely offline methods only.
fn build_client(common: &CommonArgs) -> Result<Option<ReplayClient>> {
    let mut cfg = GenerationConfig::from_env();
    cfg.num_samples = common.samples.max(1);
    cfg.cache_dir = common.llm_cache.clone();
    if cfg.cache_dir.is_none() && cfg.endpoint.is_none() {
        return Ok(None);
    }
    Ok(Some(cfg.client()?))
}

fn require_client(common: &CommonArgs) -> Result<ReplayClient> {
    build_client(common)?
        .ok_or_else(|| anyhow!("probes need --llm-cache or BENCH_LLM_ENDPOINT"))
}

fn client_ref(client: &Option<ReplayClient>) -> Option<&dyn ChatClient> {
    client.as_ref().map(|c| c as &dyn ChatClient)
}

fn write_or_print(text: &str, out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|e| anyhow!("bad list entry `{part}`: {e}"))
        })
        .collect::<Result<Vec<T>>>()
        .and_then(|v| {
            if v.is_empty() {
                bail!("empty list")
            } else {
                Ok(v)
            }
        })
}
