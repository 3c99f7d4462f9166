//! The `coalres` command line.
//!
//! Exit codes: 10 satisfiable, 20 unsatisfiable, 30 timeout, 0 for `HOLDS`
//! and successful `gen`/`bench` runs, 2 for `FAILS`, 1 for every error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{gen_suite, render_table, run_suite, summarize, BenchParams};
use crate::engine::{saturate_with_stats, EngineConfig, Stats, Verdict};
use crate::formula::parse;
use crate::semantics::Cgm;
use crate::snf::{negate_for_validity, normalize, parse_problem, CoalitionProblem};

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_TIMEOUT: i32 = 30;
pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 2;
pub const EXIT_ERROR: i32 = 1;

#[derive(Parser, Debug)]
#[command(name = "coalres", version, about = "Resolution prover for Coalition Logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide satisfiability (or validity) of a formula or coalition problem.
    Prove(ProveArgs),
    /// Generate a suite of random formulas.
    Gen(GenArgs),
    /// Evaluate a formula or problem on a model file.
    Check(CheckArgs),
    /// Prove every problem below a directory and tabulate per set.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Formula,
    Problem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Args, Debug)]
struct EngineArgs {
    /// Per-problem time limit in seconds.
    #[arg(long, default_value_t = 100.0)]
    timeout: f64,
    /// Shuffle seed for the clause queue; 0 keeps FIFO order.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    sigma_rule: Switch,
    /// Give up once this many clauses are stored.
    #[arg(long)]
    max_clauses: Option<usize>,
    /// Delete stored clauses subsumed by a newly derived one.
    #[arg(long, value_enum, default_value_t = Switch::On)]
    backward_subsumption: Switch,
}

impl EngineArgs {
    fn config(&self) -> anyhow::Result<EngineConfig> {
        if !(self.timeout.is_finite() && self.timeout > 0.0) {
            bail!("--timeout must be a positive number of seconds");
        }
        Ok(EngineConfig {
            timeout: Duration::from_secs_f64(self.timeout),
            sigma_rule: self.sigma_rule == Switch::On,
            seed: self.seed,
            max_clauses: self.max_clauses,
            backward_subsumption: self.backward_subsumption == Switch::On,
        })
    }
}

#[derive(Args, Debug)]
struct ProveArgs {
    input: PathBuf,
    /// Input syntax; by default `.clp` files are problems and anything else
    /// is a formula.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Test validity: refute the negation of the formula.
    #[arg(long)]
    valid: bool,
    /// Print the refutation (or the saturated clause set) after the verdict.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    porcelain: bool,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(short = 'N', long = "props")]
    n_props: u32,
    #[arg(short = 'A', long = "agents")]
    n_agents: u32,
    #[arg(short = 'L', long = "conjuncts")]
    n_conjuncts: u32,
    #[arg(short = 'D', long = "degree")]
    modal_degree: u32,
    #[arg(short = 'P', long = "probability")]
    probability: f64,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CheckArgs {
    model: PathBuf,
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    dir: PathBuf,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    porcelain: bool,
    #[command(flatten)]
    engine: EngineArgs,
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Prove(a) => prove(&a, out),
        Command::Gen(a) => generate(&a, out),
        Command::Check(a) => check(&a, out),
        Command::Bench(a) => bench(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn format_of(path: &Path, explicit: Option<Format>) -> Format {
    explicit.unwrap_or(if path.extension().is_some_and(|e| e == "clp") {
        Format::Problem
    } else {
        Format::Formula
    })
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path, format: Format, valid: bool) -> anyhow::Result<CoalitionProblem> {
    let text = read(path)?;
    let name = path.display().to_string();
    match format {
        Format::Problem => {
            if valid {
                bail!("--valid applies to formulas only");
            }
            Ok(parse_problem(&name, &text)?)
        }
        Format::Formula => {
            let f = parse(&text).with_context(|| name.clone())?;
            let f = if valid { negate_for_validity(&f) } else { f };
            let mut p = normalize(&f);
            p.name = name;
            Ok(p)
        }
    }
}

/// What `prove` reports besides the verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub verdict: &'static str,
    pub stats: Stats,
    pub proof_steps: Option<usize>,
}

impl RunReport {
    pub fn new(v: &Verdict, stats: Stats) -> Self {
        RunReport {
            verdict: v.tag(),
            stats,
            proof_steps: v.proof().ok().map(|p| p.derived().count()),
        }
    }

    pub fn porcelain(&self) -> String {
        let s = &self.stats;
        let mut out = format!(
            "verdict={}\nelapsed={:.6}\ninput={}\ngiven={}\ngenerated={}\nderived={}\nsubsumed={}\nremoved={}\ntautologies={}\n",
            self.verdict,
            s.elapsed.as_secs_f64(),
            s.input,
            s.given,
            s.generated,
            s.derived,
            s.subsumed,
            s.removed,
            s.tautologies
        );
        if let Some(n) = self.proof_steps {
            out.push_str(&format!("proof_steps={n}\n"));
        }
        out
    }

    /// One comment line, ignored when the trace is read back.
    pub fn summary(&self) -> String {
        let s = &self.stats;
        format!(
            "# {} input, {} given, {} derived, {} subsumed, {} tautologies, {:.3} s\n",
            s.input,
            s.given,
            s.derived,
            s.subsumed,
            s.tautologies,
            s.elapsed.as_secs_f64()
        )
    }
}

fn prove(a: &ProveArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let config = a.engine.config()?;
    let problem = load(&a.input, format_of(&a.input, a.format), a.valid)?;
    let (verdict, stats) = saturate_with_stats(&problem, &config);
    let report = RunReport::new(&verdict, stats);
    if a.porcelain {
        out.write_all(report.porcelain().as_bytes())?;
    } else {
        writeln!(out, "{}", verdict.tag())?;
        out.write_all(report.summary().as_bytes())?;
    }
    if a.trace {
        let text = match &verdict {
            Verdict::Unsatisfiable { .. } => verdict.proof()?.trace(),
            _ => verdict.derivation().trace(),
        };
        out.write_all(text.as_bytes())?;
    }
    Ok(match verdict {
        Verdict::Satisfiable { .. } => EXIT_SAT,
        Verdict::Unsatisfiable { .. } => EXIT_UNSAT,
        Verdict::Timeout { .. } => EXIT_TIMEOUT,
    })
}

fn generate(a: &GenArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let params = BenchParams {
        n_props: a.n_props,
        n_agents: a.n_agents,
        n_conjuncts: a.n_conjuncts,
        modal_degree: a.modal_degree,
        probability: a.probability,
        seed: a.seed,
    };
    let suite = gen_suite(&params, a.count, &a.out)?;
    writeln!(out, "{}", suite.manifest.display())?;
    Ok(0)
}

fn check(a: &CheckArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let model = Cgm::parse(&read(&a.model)?).with_context(|| a.model.display().to_string())?;
    let agents = model.agents();
    let holds = match format_of(&a.input, a.format) {
        Format::Formula => {
            let f = parse(&read(&a.input)?).with_context(|| a.input.display().to_string())?;
            if !f.agents().is_subset(&agents) {
                bail!("the formula mentions agents {{{}}} but the model has agents {{{agents}}}", f.agents());
            }
            model.eval(model.init(), &f)
        }
        Format::Problem => {
            let p = load(&a.input, Format::Problem, false)?;
            if !p.sigma().is_subset(&agents) {
                bail!("the problem mentions agents {{{}}} but the model has agents {{{agents}}}", p.sigma());
            }
            model.check_problem(&p)
        }
    };
    writeln!(out, "{}", if holds { "HOLDS" } else { "FAILS" })?;
    Ok(if holds { EXIT_HOLDS } else { EXIT_FAILS })
}

fn bench(a: &BenchArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let config = a.engine.config()?;
    let runs = run_suite(&a.dir, &config, a.jobs)?;
    let rows = summarize(&runs, config.timeout);
    if a.porcelain {
        for r in &rows {
            writeln!(
                out,
                "set={} problems={} solved={} sat={} unsat={} timeouts={} avg_secs={:.6}",
                r.set, r.problems, r.solved, r.sat, r.unsat, r.timeouts, r.avg_secs
            )?;
        }
    } else {
        out.write_all(render_table(&rows).as_bytes())?;
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("coalres").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_str(&[]).0, EXIT_ERROR);
        assert_eq!(run_str(&["prove"]).0, EXIT_ERROR);
        assert_eq!(run_str(&["prove", "x.cl", "--sigma-rule", "maybe"]).0, EXIT_ERROR);
        let (code, _, err) = run_str(&["prove", "/nonexistent/x.cl"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("cannot read"));
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn formats() {
        assert_eq!(format_of(Path::new("a.clp"), None), Format::Problem);
        assert_eq!(format_of(Path::new("a.cl"), None), Format::Formula);
        assert_eq!(format_of(Path::new("a.clp"), Some(Format::Formula)), Format::Formula);
    }
}
