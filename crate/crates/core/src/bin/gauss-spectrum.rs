use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gauss_spectrum::discretize::{assemble, mesh_domain, AssembledSystem, Mesh};
use gauss_spectrum::eigensolve::{solve_dirichlet_lambda1_with, solve_neumann_mu1_with, Method, SolverOptions};
use gauss_spectrum::geometry::ConvexDomain;
use gauss_spectrum::scenarios::{run_scenario, write_outputs, ReportFormat, ScenarioOutput, ScenarioParams, CATALOG};
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "gauss-spectrum", version, about = "Gaussian-weighted Neumann eigenvalues on convex domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one named scenario and write its report and plots.
    Run {
        scenario: String,
        /// Positional scenario parameters (see `list`).
        args: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run every scenario with default parameters.
    Catalog {
        /// Number of scenarios to run at once.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        common: Common,
    },
    /// List scenarios and their positional parameters.
    List,
    /// Mesh a domain given as JSON and write the mesh as JSON.
    Mesh {
        /// Domain JSON file.
        #[arg(long, conflicts_with = "json")]
        domain: Option<PathBuf>,
        /// Inline domain JSON, e.g. '{"kind":"disk","center":[0,0],"radius":1}'.
        #[arg(long)]
        json: Option<String>,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Assemble a mesh and export stiffness and mass as triplet text.
    Assemble {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve the Neumann (or Dirichlet) eigenproblem on a mesh.
    Solve {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        dirichlet: bool,
        #[arg(long, value_enum, default_value_t = SolverKind::Auto)]
        method: SolverKind,
    },
}

#[derive(clap::Args, Clone)]
struct Common {
    /// Extra scenario parameter as key=value; repeatable.
    #[arg(long = "param", value_name = "K=V")]
    params: Vec<String>,
    /// Coarsest mesh size.
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    tail_tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy)]
enum SolverKind {
    Auto,
    Dense,
    Iterative,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { scenario, args, common } => {
            let params = build_params(&scenario, &args, &common)?;
            Ok(run_one(&scenario, &params, &common)?)
        }
        Command::Catalog { jobs, common } => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
            let results: Vec<Result<bool>> = pool.install(|| {
                CATALOG
                    .par_iter()
                    .map(|(name, _, _)| {
                        let params = build_params(name, &[], &common)?;
                        run_one(name, &params, &common)
                    })
                    .collect()
            });
            let mut ok = true;
            for ((name, _, _), r) in CATALOG.iter().zip(results) {
                match r {
                    Ok(pass) => ok &= pass,
                    Err(e) => {
                        eprintln!("{name}: error: {e:#}");
                        ok = false;
                    }
                }
            }
            Ok(ok)
        }
        Command::List => {
            for (name, positional, about) in CATALOG {
                println!("{name:<22} [{}]  {about}", positional.join(" "));
            }
            Ok(true)
        }
        Command::Mesh { domain, json, h, out } => {
            let text = match (domain, json) {
                (Some(path), _) => read(&path)?,
                (None, Some(s)) => s,
                (None, None) => bail!("give a domain with --domain FILE or --json STRING"),
            };
            let domain: ConvexDomain = serde_json::from_str(&text).context("parsing domain JSON")?;
            let mesh = mesh_domain(&domain, h)?;
            std::fs::write(&out, mesh.to_json()).with_context(|| format!("writing {}", out.display()))?;
            println!("{} vertices, {} cells -> {}", mesh.num_vertices(), mesh.num_cells(), out.display());
            Ok(true)
        }
        Command::Assemble { mesh, out } => {
            let sys = load_system(&mesh)?;
            std::fs::create_dir_all(&out)?;
            std::fs::write(out.join("stiffness.txt"), sys.stiffness.to_triplet_text())?;
            std::fs::write(out.join("mass.txt"), sys.mass.to_triplet_text())?;
            println!("{} dofs, gaussian mass {:.12}", sys.dof_count, sys.gaussian_mass);
            Ok(true)
        }
        Command::Solve { mesh, count, dirichlet, method } => {
            let m = Mesh::from_json(&read(&mesh)?)?;
            let sys = assemble(&m)?;
            let method = match method {
                SolverKind::Auto => Method::Auto,
                SolverKind::Dense => Method::Dense,
                SolverKind::Iterative => Method::Iterative,
            };
            let opts = SolverOptions::with_method(method);
            let result = if dirichlet {
                solve_dirichlet_lambda1_with(&sys, &m.boundary_vertices(), count, &opts)?
            } else {
                solve_neumann_mu1_with(&sys, count, &opts)?
            };
            for (v, r) in result.eigenvalues.iter().zip(&result.residual_norms) {
                println!("{v:.15e}  residual {r:.3e}");
            }
            Ok(true)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_system(path: &Path) -> Result<AssembledSystem> {
    Ok(assemble(&Mesh::from_json(&read(path)?)?)?)
}

fn build_params(scenario: &str, args: &[String], common: &Common) -> Result<ScenarioParams> {
    let Some((_, positional, _)) = CATALOG.iter().find(|c| c.0 == scenario) else {
        let names: Vec<&str> = CATALOG.iter().map(|c| c.0).collect();
        bail!("unknown scenario '{scenario}'; expected one of {}", names.join(", "));
    };
    if args.len() > positional.len() {
        bail!("scenario '{scenario}' takes at most {} positional parameter(s): {}", positional.len(), positional.join(" "));
    }
    let mut params = ScenarioParams { h: common.h, tail_tol: common.tail_tol, seed: common.seed, ..ScenarioParams::default() };
    for (key, value) in positional.iter().zip(args) {
        params.values.insert((*key).to_string(), value.clone());
    }
    for kv in &common.params {
        let (k, v) = kv.split_once('=').with_context(|| format!("--param expects key=value, got '{kv}'"))?;
        params.values.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(params)
}

fn run_one(scenario: &str, params: &ScenarioParams, common: &Common) -> Result<bool> {
    let start = Instant::now();
    let output: ScenarioOutput = run_scenario(scenario, params).with_context(|| format!("scenario {scenario}"))?;
    let seconds = start.elapsed().as_secs_f64();
    let format = match common.format {
        Format::Json => ReportFormat::Json,
        Format::Csv => ReportFormat::Csv,
    };
    let written = write_outputs(&output, &common.out, format)?;
    if let Some(dir) = written.first().and_then(|p| p.parent()) {
        let timing = serde_json::json!({ "scenario_id": scenario, "runtime_seconds": seconds });
        std::fs::write(dir.join("timing.json"), serde_json::to_string_pretty(&timing)?)?;
    }
    let report = &output.report;
    for c in &report.bound_checks {
        let tag = match (c.enforced, c.pass) {
            (false, _) => "info",
            (true, true) => "PASS",
            (true, false) => "FAIL",
        };
        println!("[{scenario}] {tag} {}: {:.9e} {} {:.9e} (tol {:e})", c.claim, c.lhs, c.relation, c.rhs, c.tolerance);
    }
    println!(
        "[{scenario}] {} in {seconds:.2} s, {} file(s) in {}",
        if report.passed { "passed" } else { "FAILED" },
        written.len(),
        common.out.join(&report.scenario_id).display()
    );
    Ok(report.passed)
}
