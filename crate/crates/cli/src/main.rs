//! `zhcount`: evaluate ZH diagrams, encode formulae and run the counting
//! reductions from the command line.
//!
//! Exit status is 0 on success, 1 when a decision comes out false or a
//! witness is absent, and 2 on any error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use zhcount::encoder::{counting_state, encode_formula};
use zhcount::evaluator::{bit_string, ContractionOrder, Evaluator, ExactMatrix};
use zhcount::formula::{
    count_sat_with, decode01, encode01, parse, to_cnf, CnfFormula, Formula, Limits, SatCompareInstance, Word01,
};
use zhcount::graph::Diagram;
use zhcount::random::instance_corpus;
use zhcount::reductions::{build_circuit_extraction, build_contains_entry, build_state_eq, DyadicK};
use zhcount::scalar::ExactScalar;
use zhcount::solvers::{bits_to_string, sat_compare_bits, Solver, Verdict};

#[derive(Parser)]
#[command(name = "zhcount", version, about = "Exact phase-free ZH diagrams and #SAT reductions")]
struct Cli {
    /// Contraction order used by the evaluator.
    #[arg(long, global = true, value_enum, default_value_t = Order::Greedy)]
    order: Order,
    /// Largest number of variables or boundary wires enumerated by brute force.
    #[arg(long, global = true, default_value_t = 20)]
    max_vars: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Greedy,
    Sequential,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a diagram file to its exact matrix.
    Eval {
        diagram: PathBuf,
        /// Print the matrix as JSON instead of a grid.
        #[arg(long)]
        json: bool,
    },
    /// Compile a formula to a diagram with one input per variable and one output.
    Encode {
        formula: String,
        #[command(flatten)]
        vars: VarsArg,
        /// Emit the counting state (all inputs fed with |0⟩ + |1⟩) instead.
        #[arg(long)]
        counting: bool,
    },
    /// Evaluate the counting state of a formula and cross-check against brute force.
    Count {
        formula: String,
        #[command(flatten)]
        vars: VarsArg,
        #[arg(long)]
        json: bool,
    },
    /// Build the diagrams of a reduction.
    Reduce {
        #[command(subcommand)]
        which: Reduce,
    },
    /// Decide a diagram problem by enumeration and print a verdict.
    Solve {
        #[command(subcommand)]
        which: Solve,
    },
    /// Check reduction/oracle agreement on one instance or a random corpus.
    Verify {
        /// Instance file; omit with --random.
        instance: Option<PathBuf>,
        /// Check this many generated instances instead.
        #[arg(long, conflicts_with = "instance")]
        random: Option<usize>,
        #[command(flatten)]
        gen: GenArgs,
    },
    /// Print a generated corpus of SAT&Compare#SAT instances as JSON.
    Corpus {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[command(flatten)]
        gen: GenArgs,
    },
    /// Convert a formula to CNF over the same variables and print it as DIMACS.
    Cnf {
        formula: String,
        #[command(flatten)]
        vars: VarsArg,
    },
    /// The 0-1 word encoding of CNF formulae.
    Word {
        #[command(subcommand)]
        which: WordCmd,
    },
}

#[derive(Args)]
struct VarsArg {
    /// Comma-separated variable order; defaults to order of first occurrence.
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    n_max: usize,
    #[arg(long, default_value_t = 3)]
    m_max: usize,
}

#[derive(Subcommand)]
enum Reduce {
    /// Instance to the pair (D1, D2) of the state-equality problem.
    StateEq {
        instance: PathBuf,
        /// Write d1.json and d2.json here instead of printing the pair.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Instance to a diagram containing the entry k exactly at the witnesses.
    ContainsEntry {
        instance: PathBuf,
        /// Dyadic rational, e.g. 0, -3, 3/4 or 3/2^2.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        k: DyadicK,
    },
    /// Formula to a one-wire circuit [[a0, a1], [a1, -a0]].
    CircuitExtraction {
        formula: String,
        #[command(flatten)]
        vars: VarsArg,
    },
}

#[derive(Subcommand)]
enum Solve {
    /// First basis state v with ⟦D1⟧|v⟩ = ⟦D2⟧|v⟩.
    StateEq { d1: PathBuf, d2: PathBuf },
    /// First entry of the diagram equal to k; the witness is the input bits
    /// followed by the output bits.
    ContainsEntry {
        diagram: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
    },
    /// Whether two diagrams denote the same matrix.
    Compare { d1: PathBuf, d2: PathBuf },
    /// Whether a diagram denotes the zero matrix.
    IsZero { diagram: PathBuf },
    /// Brute-force SAT&Compare#SAT on an instance file.
    SatCompare { instance: PathBuf },
}

#[derive(Subcommand)]
enum WordCmd {
    /// Encode a formula (converted to CNF) or a DIMACS file as a 0-1 word.
    Encode {
        /// Formula text; use --dimacs to read a CNF file instead.
        formula: Option<String>,
        #[arg(long, conflicts_with = "formula")]
        dimacs: Option<PathBuf>,
        #[command(flatten)]
        vars: VarsArg,
    },
    /// Decode a 0-1 word (spaces allowed) to a CNF formula over x1..xk.
    Decode { word: String },
}

struct Ctx {
    solver: Solver,
    limits: Limits,
}

impl Ctx {
    fn evaluator(&self) -> Evaluator {
        self.solver.evaluator
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_diagram(path: &Path) -> Result<Diagram> {
    let d = Diagram::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    d.check().with_context(|| format!("checking {}", path.display()))?;
    Ok(d)
}

fn load_instance(path: &Path) -> Result<SatCompareInstance> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn formula_and_vars(src: &str, vars: &VarsArg) -> Result<(Formula, Vec<String>)> {
    let phi = parse(src).with_context(|| format!("parsing formula `{src}`"))?;
    let vars = vars.vars.clone().unwrap_or_else(|| phi.var_order());
    Ok((phi, vars))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// `|1⟩ + 7|0⟩`: nonzero amplitudes, highest basis state first.
fn ket(m: &ExactMatrix) -> String {
    let mut terms: Vec<(u64, &ExactScalar)> = m.entries().map(|(r, _, v)| (r, v)).collect();
    terms.sort_by_key(|t| std::cmp::Reverse(t.0));
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(r, v)| {
            let basis = format!("|{}⟩", bit_string(*r, m.n_out()));
            if v.is_one() {
                basis
            } else {
                format!("{}{basis}", v.pretty())
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn verdict(answer: bool) -> ExitCode {
    if answer {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn emit_verdict(v: &Verdict) -> Result<ExitCode> {
    print_json(v)?;
    Ok(verdict(v.answer))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let order = match cli.order {
        Order::Greedy => ContractionOrder::Greedy,
        Order::Sequential => ContractionOrder::Sequential,
    };
    let ctx = Ctx {
        solver: Solver { evaluator: Evaluator::with_order(order), max_enumerated: cli.max_vars },
        limits: Limits { max_vars: cli.max_vars, ..Limits::default() },
    };
    match cli.command {
        Command::Eval { diagram, json } => {
            let m = ctx.evaluator().evaluate(&load_diagram(&diagram)?)?;
            if json {
                println!("{}", m.to_json());
            } else if let Some(s) = m.as_scalar() {
                println!("{}", s.pretty());
            } else {
                println!("{m}");
            }
        }
        Command::Encode { formula, vars, counting } => {
            let (phi, vars) = formula_and_vars(&formula, &vars)?;
            ctx.limits.check_vars(vars.len())?;
            let d = if counting { counting_state(&phi, &vars)? } else { encode_formula(&phi, &vars)? };
            println!("{}", d.to_json());
        }
        Command::Count { formula, vars, json } => return count(&ctx, &formula, &vars, json),
        Command::Reduce { which } => reduce(which)?,
        Command::Solve { which } => return solve(&ctx, which),
        Command::Verify { instance, random, gen } => {
            let instances = match (instance, random) {
                (Some(path), None) => vec![load_instance(&path)?],
                (None, Some(n)) => instance_corpus(gen.seed, n, gen.n_max, gen.m_max),
                _ => bail!("give an instance file or --random N"),
            };
            let mut failed = 0;
            for (i, inst) in instances.iter().enumerate() {
                if instances.len() > 1 {
                    println!("instance {i}: n = {}, m = {}", inst.n(), inst.m());
                }
                if !verify(&ctx, inst)? {
                    failed += 1;
                }
            }
            println!("{}: {} of {} instances agree", if failed == 0 { "PASS" } else { "FAIL" }, instances.len() - failed, instances.len());
            return Ok(verdict(failed == 0));
        }
        Command::Corpus { count, gen } => {
            print_json(&instance_corpus(gen.seed, count, gen.n_max, gen.m_max))?;
        }
        Command::Cnf { formula, vars } => {
            let (phi, vars) = formula_and_vars(&formula, &vars)?;
            print!("{}", to_cnf(&phi, &vars, &ctx.limits)?.to_dimacs());
        }
        Command::Word { which } => match which {
            WordCmd::Encode { formula, dimacs, vars } => {
                let cnf = match (formula, dimacs) {
                    (Some(src), None) => {
                        let (phi, vars) = formula_and_vars(&src, &vars)?;
                        to_cnf(&phi, &vars, &ctx.limits)?
                    }
                    (None, Some(path)) => CnfFormula::from_dimacs(&read(&path)?)?,
                    _ => bail!("give a formula or --dimacs FILE"),
                };
                let w = encode01(&cnf);
                println!("{}", w.grouped());
            }
            WordCmd::Decode { word } => {
                let w: Word01 = word.parse()?;
                let cnf = decode01(&w);
                println!("{}", cnf.to_formula());
                print!("{}", cnf.to_dimacs());
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CountReport {
    state: String,
    amplitudes: ExactMatrix,
    count: u64,
    brute_force: u64,
}

fn count(ctx: &Ctx, formula: &str, vars: &VarsArg, json: bool) -> Result<ExitCode> {
    let (phi, vars) = formula_and_vars(formula, vars)?;
    let brute_force = count_sat_with(&phi, &vars, &ctx.limits)?;
    let m = ctx.evaluator().evaluate(&counting_state(&phi, &vars)?)?;
    let (num, e) = m.get(1, 0).as_dyadic()?;
    if e != 0 {
        bail!("counting state has a non-integer amplitude {}", m.get(1, 0));
    }
    let count = u64::try_from(&num).context("count out of range")?;
    let report = CountReport { state: ket(&m), amplitudes: m, count, brute_force };
    if json {
        print_json(&report)?;
    } else {
        println!("{}", report.state);
        println!("count {} (brute force {})", report.count, report.brute_force);
    }
    if count != brute_force {
        bail!("counting state gives {count} but brute force gives {brute_force}");
    }
    Ok(ExitCode::SUCCESS)
}

fn reduce(which: Reduce) -> Result<()> {
    match which {
        Reduce::StateEq { instance, out_dir } => {
            let se = build_state_eq(&load_instance(&instance)?)?;
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(&dir)?;
                    for (name, d) in [("d1.json", &se.d1), ("d2.json", &se.d2)] {
                        let path = dir.join(name);
                        fs::write(&path, d.to_json()).with_context(|| format!("writing {}", path.display()))?;
                    }
                }
                None => print_json(&se)?,
            }
        }
        Reduce::ContainsEntry { instance, k } => {
            println!("{}", build_contains_entry(&load_instance(&instance)?, k)?.to_json());
        }
        Reduce::CircuitExtraction { formula, vars } => {
            let (phi, vars) = formula_and_vars(&formula, &vars)?;
            println!("{}", build_circuit_extraction(&phi, &vars)?.to_json());
        }
    }
    Ok(())
}

fn parse_entry(k: &str) -> Result<ExactScalar> {
    match k.parse::<DyadicK>() {
        Ok(k) => Ok(k.value()),
        Err(_) => k.parse::<ExactScalar>().map_err(|e| anyhow::anyhow!("bad entry `{k}`: {e}")),
    }
}

fn solve(ctx: &Ctx, which: Solve) -> Result<ExitCode> {
    let s = &ctx.solver;
    let v = match which {
        Solve::StateEq { d1, d2 } => match s.solve_state_eq(&load_diagram(&d1)?, &load_diagram(&d2)?)? {
            Some(w) => Verdict::yes(&w, None),
            None => Verdict::absent(),
        },
        Solve::ContainsEntry { diagram, k } => {
            let k = parse_entry(&k)?;
            match s.solve_contains_entry(&load_diagram(&diagram)?, &k)? {
                Some((row, col)) => Verdict::yes(&[col, row].concat(), Some(k)),
                None => Verdict::absent(),
            }
        }
        Solve::Compare { d1, d2 } => {
            let same = s.compare_diagrams(&load_diagram(&d1)?, &load_diagram(&d2)?)?;
            Verdict { answer: same, witness: None, entry: None }
        }
        Solve::IsZero { diagram } => {
            Verdict { answer: s.is_zero(&load_diagram(&diagram)?)?, witness: None, entry: None }
        }
        Solve::SatCompare { instance } => match sat_compare_bits(&load_instance(&instance)?, &ctx.limits)? {
            Some(w) => Verdict::yes(&w, None),
            None => Verdict::absent(),
        },
    };
    emit_verdict(&v)
}

fn show(w: &Option<Vec<bool>>) -> String {
    match w {
        Some(bits) if bits.is_empty() => "yes (no x variables)".into(),
        Some(bits) => format!("yes at {}", bits_to_string(bits)),
        None => "absent".into(),
    }
}

/// Prints one line per check and returns whether every check agrees with
/// the brute-force decision.
fn verify(ctx: &Ctx, inst: &SatCompareInstance) -> Result<bool> {
    let oracle = sat_compare_bits(inst, &ctx.limits)?;
    println!("  sat-compare (brute force): {}", show(&oracle));
    let mut ok = true;
    let mut line = |name: String, got: Option<Vec<bool>>| {
        let agree = got == oracle;
        ok &= agree;
        println!("  {name}: {} [{}]", show(&got), if agree { "agree" } else { "DISAGREE" });
    };
    let se = build_state_eq(inst)?;
    line("state-eq".into(), ctx.solver.solve_state_eq(&se.d1, &se.d2)?);
    for k in [DyadicK::integer(0), DyadicK::integer(1), DyadicK::new(3, 2)] {
        let d = build_contains_entry(inst, k)?;
        let hit = ctx.solver.solve_contains_entry(&d, &k.value())?;
        line(format!("contains-entry k = {k}"), hit.map(|(_, col)| col));
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
