use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bisect_core::io::{parse_graph, write_graph};
use bisect_core::oracle::{audit_cycle_family, audit_path_family, exact_max_bisection, exact_max_cut};
use bisect_core::WeightedMultigraph;
use bisect_harness::generate::{generate, GraphClass, WeightModel};
use bisect_harness::report::SolverReport;
use bisect_harness::solve::{solve, MethodChoice};
use bisect_harness::sweep::{sweep, BoundKind, SweepConfig};
use bisect_harness::HarnessError;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bisect", version, about = "Maximum-weight bisections with exact guarantees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cycles,
    Paths,
}

#[derive(Subcommand)]
enum Command {
    /// Bisect a graph and report the guaranteed and achieved weights.
    Solve {
        #[arg(long, default_value = "auto")]
        method: MethodChoice,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive maximum bisection (or cut) of a small graph.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cut: bool,
    },
    /// Check every gadget distribution of a family against its claimed bounds.
    Audit {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        max_len: usize,
    },
    /// Compare many instances against a bound ratio.
    Sweep {
        #[arg(long)]
        class: GraphClass,
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long)]
        bound: BoundKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "unit")]
        weights: WeightModel,
    },
    /// Write a generated instance.
    Gen {
        #[arg(long)]
        class: GraphClass,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value = "unit")]
        weights: WeightModel,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_graph(path: &PathBuf) -> Result<WeightedMultigraph, HarnessError> {
    Ok(parse_graph(&std::fs::read_to_string(path)?)?)
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Solve { method, input, seed, json } => {
            let g = read_graph(&input)?;
            let start = Instant::now();
            let s = solve(method, &g, seed)?;
            let report = SolverReport::new(&g, &s, seed, start.elapsed().as_millis() as u64);
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                println!("method {}", report.method);
                println!("achieved {}", report.achieved);
                println!("bound {}", report.guaranteed_bound);
                println!("side_x {:?}", report.side_x);
                for (k, v) in &report.flags {
                    println!("{k}: {v}");
                }
            }
            Ok(())
        }
        Command::Oracle { input, cut } => {
            let g = read_graph(&input)?;
            let (w, in_x) = if cut {
                exact_max_cut(&g)?
            } else {
                let (w, b) = exact_max_bisection(&g)?;
                (w, b.mask(g.n()))
            };
            println!("{}", bisect_core::rational::to_text(&w));
            let side: Vec<usize> = (0..g.n()).filter(|&v| in_x[v]).map(|v| v + 1).collect();
            println!("side_x {side:?}");
            Ok(())
        }
        Command::Audit { family, max_len } => {
            let entries = match family {
                Family::Cycles => audit_cycle_family(max_len),
                Family::Paths => audit_path_family(max_len),
            };
            let mut bad = 0;
            for (label, result) in &entries {
                match result {
                    Ok(r) if r.passed() => println!("ok   {label}"),
                    Ok(r) => {
                        bad += 1;
                        println!("FAIL {label}: {}", r.violations.join("; "));
                    }
                    Err(e) => {
                        bad += 1;
                        println!("FAIL {label}: {e}");
                    }
                }
            }
            println!("{} hosts audited, {bad} with violations", entries.len());
            if bad > 0 {
                return Err(HarnessError::GuaranteeViolated(format!("{bad} gadget audits failed")));
            }
            Ok(())
        }
        Command::Sweep { class, n_min, n_max, samples, bound, seed, weights } => {
            let report = sweep(&SweepConfig { class, n_min, n_max, samples, bound, seed, weights })?;
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            Ok(())
        }
        Command::Gen { class, n, weights, seed, out } => {
            let g = generate(class, n, seed, weights)?;
            let text = write_graph(&g);
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
