//! Print the success counts of every (task, method) cell the benchmark
//! tables care about, over a handful of seeds.

use benchtop::eval::{run_evaluation, run_robustness, EvalRequest, Method, ProgramSource};
use benchtop::sim::{task_kind_from_name, SimConfig, TaskSpec};

fn cell(task: &str, method: &str, seed: u64) -> (u32, u32, u32, f64) {
    let kind = task_kind_from_name(task).unwrap();
    let mut req = EvalRequest::new(TaskSpec::with_defaults(kind), Method::parse(method).unwrap());
    req.seed = seed;
    let r = run_evaluation(&req, &SimConfig::default(), None).unwrap();
    (r.successes, r.failures, r.faults, r.wall_clock_s)
}

fn main() {
    let seeds: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("seed"))
        .collect();
    let seeds = if seeds.is_empty() {
        vec![0, 100, 2000, 30000, 400000]
    } else {
        seeds
    };
    for (task, method) in [
        ("fmb-circle", "reference"),
        ("fmb-circle", "scripted"),
        ("fmb-star", "reference"),
        ("fmb-star", "scripted"),
        ("fmb-halfpipe", "reference"),
        ("fmb-halfpipe", "scripted"),
        ("rgmc-unroute", "reference"),
        ("rgmc-unroute", "ptp"),
        ("rgmc-unroute", "fixed-compliance"),
        ("rgmc-route", "reference"),
        ("rgmc-route", "ptp"),
        ("rgmc-route", "fixed-compliance"),
        ("nist-connector", "reference"),
        ("nist-connector-perception", "reference"),
    ] {
        for &seed in &seeds {
            let (s, f, x, wall) = cell(task, method, seed);
            println!(
                "{task:<28} {method:<18} seed {seed:>6}: {s:>2}/{} ok, {f} fail, {x} fault   ({wall:.2}s)",
                s + f + x
            );
        }
        println!();
    }

    for &seed in &seeds {
        let kind = task_kind_from_name("rgmc-unroute").unwrap();
        for method in [
            Method::Reference,
            Method::PtpCodegen {
                base: ProgramSource::Reference,
            },
        ] {
            let mut req = EvalRequest::new(TaskSpec::with_defaults(kind), method.clone());
            req.seed = seed;
            let (l, r) = run_robustness(&req, &SimConfig::default(), None).unwrap();
            println!(
                "robustness {:<18} seed {seed:>6}: left {:>2}/10 ({} faults), right {:>2}/10 ({} faults)",
                method.name(),
                l.successes,
                l.faults,
                r.successes,
                r.faults
            );
        }
    }
}
