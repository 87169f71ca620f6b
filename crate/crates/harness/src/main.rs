//! CLI: `prophet run <config.json>`, `prophet verify <suite>`,
//! `prophet list-algorithms`.

use std::process::ExitCode;

use prophet_harness::config::ExperimentConfig;
use prophet_harness::{experiment, verify};
use prophet_core::prophet::{prophet_for, AlgorithmName, EnvFamily, RatioClaim};

fn usage() -> ExitCode {
    eprintln!(
        "usage:
  prophet run <config.json>      run one experiment; writes <output>.json/.csv when configured
  prophet verify <suite>         run a verification suite: {}
  prophet list-algorithms        list algorithm names and their claimed ratios

environment:
  PROPHET_WORKERS=<n>            number of worker threads for trials (default 1)",
        verify::SUITES.join(", ")
    );
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.first().map(String::as_str) {
        Some("run") => {
            let Some(path) = args.get(1) else { return usage() };
            match run(path) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Some("verify") => {
            let Some(suite) = args.get(1) else { return usage() };
            match verify::run_suite(suite) {
                Ok(results) => {
                    let mut all_pass = true;
                    for r in &results {
                        println!("{} {} - {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail);
                        all_pass &= r.pass;
                    }
                    if all_pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Some("list-algorithms") => {
            list_algorithms();
            ExitCode::SUCCESS
        }
        _ => usage(),
    }
}

fn run(path: &str) -> prophet_harness::Result<()> {
    let text = std::fs::read_to_string(path)?;
    let config = ExperimentConfig::from_json(&text)?;
    let report = experiment::run_experiment(&config)?;
    println!(
        "trials {}  mean welfare {:.6}  mean revenue {:.6}  mean benchmark {:.6}",
        report.records.len(),
        report.mean_welfare,
        report.mean_revenue,
        report.mean_benchmark
    );
    println!(
        "welfare ratio {:.6} (+- {:.6})  revenue ratio {:.6} (+- {:.6})",
        report.welfare_ratio,
        report.welfare_ratio_ci_half,
        report.revenue_ratio,
        report.revenue_ratio_ci_half
    );
    if let Some(prefix) = &config.output {
        report.write(prefix)?;
        println!("wrote {prefix}.json and {prefix}.csv");
    }
    Ok(())
}

fn list_algorithms() {
    println!("algorithms (config `algorithm` field):");
    for name in AlgorithmName::all() {
        println!("  {}", name.as_str());
    }
    println!("\nenvironment-family bindings and claimed competitive ratios:");
    for family in [
        ("uniform-k", EnvFamily::UniformK),
        ("partition", EnvFamily::Partition),
        ("graphic", EnvFamily::Graphic),
        ("transversal", EnvFamily::Transversal),
        ("laminar-approx", EnvFamily::LaminarApprox),
        ("general-iid", EnvFamily::GeneralIid),
        ("matching", EnvFamily::Matching),
    ] {
        let binding = prophet_for(family.1);
        let ratio = match binding.ratio {
            RatioClaim::Constant(c) => format!("{c:.4}"),
            RatioClaim::PerBlock(c) => format!("{c:.4} per block"),
            RatioClaim::AsymptoticInK => "1 - O(1/sqrt k)".into(),
        };
        println!(
            "  {:<15} -> {:<18} ratio {}{}",
            family.0,
            binding.algorithm.as_str(),
            ratio,
            if binding.asserted { "" } else { " (reported only)" }
        );
    }
}
