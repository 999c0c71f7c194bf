use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use subqubo::io::{load_problem_file, Problem};
use subqubo::search::is_hit;
use subqubo::{
    brute_force_solve_capped, build_qubo, decode, effective_rhs, export_sampler_script, gen_random,
    save_problem, save_report, simulated_anneal, sweep, verify_solution, AnnealSchedule,
    BinaryEncoding, Error, ProblemFile, RandomInstance, Solver, SubrangeField, SubrangeSpec,
    SweepOptions,
};

const EXIT_OK: u8 = 0;
const EXIT_NO_HIT: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "subqubo",
    version,
    about = "Least-squares systems as subrange QUBO instances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random integer instance with a known solution.
    Gen(GenArgs),
    /// Build the QUBO matrix of one subrange.
    Build(BuildArgs),
    /// Solve one subrange with the exhaustive or annealing solver.
    Solve(SolveArgs),
    /// Search every subrange of the total range.
    Sweep(SweepArgs),
    /// Print a D-Wave sampler script for one subrange.
    Export(ExportArgs),
    /// Residual ||Ax - b||^2 of a candidate solution.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct EncodingArgs {
    /// Qubits per variable; overrides the file's encoding.
    #[arg(long)]
    qubits_per_var: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverKind {
    Brute,
    Sa,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, value_enum, default_value = "brute")]
    solver: SolverKind,
    /// Annealing reads.
    #[arg(long, default_value_t = 1000)]
    reads: u64,
    /// Annealing sweeps per read.
    #[arg(long, default_value_t = 200)]
    sweeps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest QUBO the exhaustive solver accepts.
    #[arg(long, default_value_t = subqubo::solvers::DEFAULT_BRUTE_FORCE_CAP)]
    brute_cap: usize,
}

impl SolverArgs {
    fn solver(&self) -> Solver {
        match self.solver {
            SolverKind::Brute => Solver::BruteForce {
                cap: self.brute_cap,
            },
            SolverKind::Sa => Solver::Anneal(AnnealSchedule {
                num_reads: self.reads,
                sweeps_per_read: self.sweeps,
                seed: self.seed,
                ..AnnealSchedule::default()
            }),
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, short)]
    n: usize,
    #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
    entry_min: i64,
    #[arg(long, default_value_t = 9, allow_hyphen_values = true)]
    entry_max: i64,
    #[arg(long, default_value_t = -128, allow_hyphen_values = true)]
    x_min: i64,
    #[arg(long, default_value_t = 126, allow_hyphen_values = true)]
    x_max: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    qubits_per_var: u32,
    /// Sweep bound s stored in the file.
    #[arg(long)]
    subrange_bound: Option<u64>,
    /// Store the window holding the generated solution instead of a bound.
    #[arg(long, conflicts_with = "subrange_bound")]
    solution_window: bool,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
struct BuildArgs {
    problem: PathBuf,
    #[command(flatten)]
    encoding: EncodingArgs,
    /// Write the matrix JSON here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    problem: PathBuf,
    #[command(flatten)]
    encoding: EncodingArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    problem: PathBuf,
    #[command(flatten)]
    encoding: EncodingArgs,
    /// Subrange bound s; overrides the file.
    #[arg(long)]
    subrange_bound: Option<u64>,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    stop_on_hit: bool,
    #[arg(long)]
    json: bool,
    /// Write the full report JSON here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    problem: PathBuf,
    #[command(flatten)]
    encoding: EncodingArgs,
    #[arg(long, default_value_t = 1000)]
    reads: u64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    problem: PathBuf,
    /// Comma-separated solution, e.g. `21,-17`.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    x: Vec<f64>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Build(a) => build(a),
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Export(a) => export(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn load(path: &PathBuf, encoding: &EncodingArgs) -> Result<Problem, Error> {
    let mut file = load_problem_file(path)?;
    if let Some(bits) = encoding.qubits_per_var {
        file.encoding = BinaryEncoding::with_bits(bits)?;
    }
    file.validate()
}

/// The file's explicit window, or no translation.
fn window(problem: &Problem) -> Result<Option<SubrangeSpec>, Error> {
    match &problem.spec {
        Some(spec) => Ok(Some(spec.clone())),
        None if problem.encoding.is_subrange_mode() => Ok(Some(SubrangeSpec::zero(
            problem.system.n(),
            &problem.encoding,
        )?)),
        None => Ok(None),
    }
}

fn effective_c(problem: &Problem) -> Result<(Vec<f64>, f64, Option<SubrangeSpec>), Error> {
    match window(problem)? {
        Some(spec) => {
            let rhs = effective_rhs(&problem.system, &spec)?;
            Ok((rhs.c().to_vec(), rhs.target_energy(), Some(spec)))
        }
        None => {
            let c = problem.system.b().to_vec();
            let target = -c.iter().map(|v| v * v).sum::<f64>();
            Ok((c, target, None))
        }
    }
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("JSON values serialize")
    );
}

fn gen(args: GenArgs) -> Result<u8, Error> {
    let params = RandomInstance {
        n: args.n,
        entries: args.entry_min..=args.entry_max,
        solution: args.x_min..=args.x_max,
        seed: args.seed,
    };
    let (system, x) = gen_random(&params)?;
    let encoding = BinaryEncoding::with_bits(args.qubits_per_var)?;
    let subrange = if args.solution_window {
        let width = encoding.subrange_width()?;
        Some(SubrangeField::Explicit {
            translations: x.iter().map(|v| v.div_euclid(width) * width).collect(),
            s: None,
        })
    } else {
        args.subrange_bound.map(|s| SubrangeField::Bound { s })
    };
    save_problem(&args.out, &ProblemFile::new(&system, encoding, subrange))?;
    print_json(&json!({ "problem": args.out, "x": x }));
    Ok(EXIT_OK)
}

fn build(args: BuildArgs) -> Result<u8, Error> {
    let problem = load(&args.problem, &args.encoding)?;
    let (c, target, spec) = effective_c(&problem)?;
    let q = build_qubo(&problem.system, &c, &problem.encoding)?;
    let value = json!({
        "T": spec.map(|s| s.translations()),
        "c": c,
        "target_energy": target,
        "qubo": q,
    });
    match args.out {
        Some(path) => std::fs::write(path, serde_json::to_string_pretty(&value).unwrap() + "\n")?,
        None => print_json(&value),
    }
    Ok(EXIT_OK)
}

fn solve(args: SolveArgs) -> Result<u8, Error> {
    let problem = load(&args.problem, &args.encoding)?;
    let (c, target, spec) = effective_c(&problem)?;
    let q = build_qubo(&problem.system, &c, &problem.encoding)?;
    let (best, assignments, reads) = match args.solver.solver() {
        Solver::BruteForce { cap } => {
            let g = brute_force_solve_capped(&q, cap)?;
            (g.min_energy, g.minimizers, None)
        }
        Solver::Anneal(schedule) => {
            let set = simulated_anneal(&q, &schedule)?;
            let ground = set.ground_records();
            let count: u64 = ground.iter().map(|r| r.occurrences).sum();
            (
                ground[0].energy,
                ground.iter().map(|r| r.assignment.clone()).collect(),
                Some((count, set.total_reads())),
            )
        }
    };
    let hit = is_hit(best, target, problem.system.is_integral());
    let decoded: Vec<Vec<f64>> = match &spec {
        Some(spec) => assignments
            .iter()
            .map(|a| decode(a, &problem.encoding, spec))
            .collect::<Result<_, _>>()?,
        None => assignments
            .iter()
            .map(|a| subqubo::decode_residues(a, problem.system.n(), &problem.encoding))
            .collect::<Result<_, _>>()?,
    };
    if args.json {
        print_json(&json!({
            "T": spec.map(|s| s.translations()),
            "target_energy": target,
            "best_energy": best,
            "hit": hit,
            "assignments": assignments,
            "x": decoded,
            "ground_occurrences": reads.map(|r| r.0),
            "total_reads": reads.map(|r| r.1),
        }));
    } else {
        println!("target energy: {target:?}");
        println!("best energy:   {best:?}");
        for (a, x) in assignments.iter().zip(&decoded) {
            println!("  {a} -> x = {x:?}");
        }
        if let Some((count, total)) = reads {
            println!("ground state seen in {count} of {total} reads");
        }
        println!("{}", if hit { "hit" } else { "no hit" });
    }
    Ok(if hit { EXIT_OK } else { EXIT_NO_HIT })
}

fn run_sweep(args: SweepArgs) -> Result<u8, Error> {
    let problem = load(&args.problem, &args.encoding)?;
    let bound = args
        .subrange_bound
        .or(problem.bound)
        .ok_or_else(|| Error::Config("no subrange bound: pass --subrange-bound".into()))?;
    let report = sweep(
        &problem.system,
        &problem.encoding,
        bound,
        &args.solver.solver(),
        SweepOptions {
            stop_on_hit: args.stop_on_hit,
            ..SweepOptions::default()
        },
    )?;
    if let Some(path) = &args.report {
        save_report(path, &report)?;
    }
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        println!(
            "{} of {} windows searched, total range {:?}",
            report.per_subrange.len(),
            report.windows,
            report.total_range
        );
        for r in report.hit_results() {
            println!(
                "hit: T = {:?}, energy {:?}, x = {:?}",
                r.translation, r.best_energy, r.solutions
            );
        }
        if let Some(i) = report.approximate {
            let r = &report.per_subrange[i];
            println!(
                "no hit; closest window T = {:?} with gap {:?} (best {:?}, target {:?})",
                r.translation,
                r.gap(),
                r.best_energy,
                r.target_energy
            );
        }
    }
    Ok(if report.hits.is_empty() {
        EXIT_NO_HIT
    } else {
        EXIT_OK
    })
}

fn export(args: ExportArgs) -> Result<u8, Error> {
    let problem = load(&args.problem, &args.encoding)?;
    let (c, _, _) = effective_c(&problem)?;
    let q = build_qubo(&problem.system, &c, &problem.encoding)?;
    let script = export_sampler_script(&q, args.reads);
    match args.out {
        Some(path) => std::fs::write(path, script)?,
        None => print!("{script}"),
    }
    Ok(EXIT_OK)
}

fn verify(args: VerifyArgs) -> Result<u8, Error> {
    let file = load_problem_file(&args.problem)?;
    let problem = file.validate()?;
    let residual = verify_solution(&problem.system, &args.x)?;
    if args.json {
        print_json(&json!({ "x": args.x, "residual": residual }));
    } else {
        println!("residual: {residual:?}");
    }
    Ok(if residual == 0.0 {
        EXIT_OK
    } else {
        EXIT_NO_HIT
    })
}
