//! Random coalition CNF formulas and benchmark suites.
//!
//! A formula is a conjunction of `L` clauses, each a disjunction of three
//! literals; a literal is an atom negated with probability 0.5. An atom of
//! degree 0 is one of the propositions `p1..pN`. An atom of degree `d > 0`
//! is, with probability `P`, `<A> c` for a random clause `c` of degree
//! `d - 1` and a coalition `A` drawn uniformly from the subsets of
//! `{1..A}`, and a proposition otherwise.
//!
//! Randomness comes from ChaCha8. Every file has its own stream, derived
//! from the suite seed, the set parameters and the file index, so a file's
//! content does not depend on which other files are generated.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::engine::{saturate, EngineConfig, Verdict};
use crate::formula::{parse, Agent, Coalition, Formula};
use crate::snf::{normalize, parse_problem};

pub const MANIFEST: &str = "manifest.txt";
pub const FORMAT_VERSION: u32 = 1;
/// Disjuncts per clause.
pub const CLAUSE_WIDTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchParams {
    pub n_props: u32,
    pub n_agents: u32,
    pub n_conjuncts: u32,
    pub modal_degree: u32,
    pub probability: f64,
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("no problem files under {0}")]
    Empty(PathBuf),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> BenchError + '_ {
    move |source| BenchError::Io {
        path: path.to_owned(),
        source,
    }
}

impl BenchParams {
    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |m: &str| Err(BenchError::Params(m.to_owned()));
        if self.n_props < 1 {
            return fail("N must be at least 1");
        }
        if self.n_agents < 1 {
            return fail("A must be at least 1");
        }
        if self.n_agents > 16 {
            return fail("A must be at most 16");
        }
        if self.n_conjuncts < 1 {
            return fail("L must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.probability) {
            return fail("P must lie in [0, 1]");
        }
        Ok(())
    }

    /// `N-A-LLL-D`, e.g. `5-2-009-1`.
    pub fn set_name(&self) -> String {
        format!("{}-{}-{:03}-{}", self.n_props, self.n_agents, self.n_conjuncts, self.modal_degree)
    }

    /// The generator for file `index` of this set.
    pub fn rng_for(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let stream = [
            u64::from(self.n_props),
            u64::from(self.n_agents),
            u64::from(self.n_conjuncts),
            u64::from(self.modal_degree),
            self.probability.to_bits(),
            index,
        ]
        .into_iter()
        .fold(0x5EED_u64, |h, x| splitmix64(h ^ x));
        rng.set_stream(stream);
        rng
    }

    pub fn manifest(&self, count: usize) -> String {
        format!(
            "format-version={FORMAT_VERSION}\nrng=chacha8\nn_props={}\nn_agents={}\nn_conjuncts={}\nmodal_degree={}\nprobability={}\nseed={}\ncount={count}\n",
            self.n_props, self.n_agents, self.n_conjuncts, self.modal_degree, self.probability, self.seed
        )
    }

    /// Inverse of [`BenchParams::manifest`].
    pub fn from_manifest(text: &str) -> Result<(BenchParams, usize), String> {
        let get = |key: &str| -> Result<String, String> {
            text.lines()
                .filter_map(|l| l.split_once('='))
                .find(|(k, _)| k.trim() == key)
                .map(|(_, v)| v.trim().to_owned())
                .ok_or_else(|| format!("missing `{key}`"))
        };
        let num = |key: &str, v: String| v.parse::<u64>().map_err(|_| format!("bad `{key}`: {v}"));
        let version = num("format-version", get("format-version")?)?;
        if version != u64::from(FORMAT_VERSION) {
            return Err(format!("unsupported format version {version}"));
        }
        let p = BenchParams {
            n_props: num("n_props", get("n_props")?)? as u32,
            n_agents: num("n_agents", get("n_agents")?)? as u32,
            n_conjuncts: num("n_conjuncts", get("n_conjuncts")?)? as u32,
            modal_degree: num("modal_degree", get("modal_degree")?)? as u32,
            probability: get("probability")?.parse().map_err(|_| "bad `probability`".to_owned())?,
            seed: num("seed", get("seed")?)?,
        };
        let count = num("count", get("count")?)? as usize;
        Ok((p, count))
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Gen<'a, R> {
    p: &'a BenchParams,
    rng: &'a mut R,
}

impl<R: Rng> Gen<'_, R> {
    fn prop(&mut self) -> Formula {
        Formula::prop(format!("p{}", self.rng.random_range(1..=self.p.n_props)))
    }

    fn coalition(&mut self) -> Coalition {
        let bits: u32 = self.rng.random_range(0..1u32 << self.p.n_agents);
        (0..self.p.n_agents)
            .filter(|i| bits >> i & 1 == 1)
            .map(|i| Agent::new(i + 1).expect("positive"))
            .collect()
    }

    fn atom(&mut self, degree: u32) -> Formula {
        if degree > 0 && self.rng.random_bool(self.p.probability) {
            let a = self.coalition();
            Formula::coop(a, self.clause(degree - 1))
        } else {
            self.prop()
        }
    }

    fn literal(&mut self, degree: u32) -> Formula {
        let atom = self.atom(degree);
        if self.rng.random_bool(0.5) {
            Formula::not(atom)
        } else {
            atom
        }
    }

    fn clause(&mut self, degree: u32) -> Formula {
        Formula::disjunction((0..CLAUSE_WIDTH).map(|_| self.literal(degree)))
    }
}

/// A random formula; see the module documentation.
pub fn gen_formula(p: &BenchParams, rng: &mut impl Rng) -> Formula {
    let mut g = Gen { p, rng };
    Formula::conjunction((0..p.n_conjuncts).map(|_| g.clause(p.modal_degree)))
}

/// Formula `index` (1-based) of the set described by `p`.
pub fn gen_indexed(p: &BenchParams, index: u64) -> Formula {
    gen_formula(p, &mut p.rng_for(index))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Suite {
    pub dir: PathBuf,
    pub manifest: PathBuf,
    pub files: Vec<PathBuf>,
}

/// Writes `count` formulas to `out/<set name>/problem_<i>.cl` together with
/// a manifest.
pub fn gen_suite(p: &BenchParams, count: usize, out: &Path) -> Result<Suite, BenchError> {
    p.validate()?;
    let dir = out.join(p.set_name());
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let files = (1..=count)
        .into_par_iter()
        .map(|i| {
            let path = dir.join(format!("problem_{i}.cl"));
            let text = format!("{}\n", gen_indexed(p, i as u64));
            fs::write(&path, text).map_err(io_err(&path))?;
            Ok(path)
        })
        .collect::<Result<Vec<_>, BenchError>>()?;
    let manifest = dir.join(MANIFEST);
    fs::write(&manifest, p.manifest(count)).map_err(io_err(&manifest))?;
    Ok(Suite { dir, manifest, files })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Sat,
    Unsat,
    Timeout,
}

#[derive(Debug, Clone)]
pub struct ProblemRun {
    pub set: String,
    pub path: PathBuf,
    pub outcome: Outcome,
    pub elapsed: Duration,
}

/// Per-set figures; timeouts enter the average at the cap.
#[derive(Debug, Clone, PartialEq)]
pub struct SetSummary {
    pub set: String,
    pub problems: usize,
    pub solved: usize,
    pub sat: usize,
    pub unsat: usize,
    pub timeouts: usize,
    pub avg_secs: f64,
}

/// Loads a `.cl` formula or `.clp` problem file as a coalition problem.
pub fn load_problem(path: &Path) -> Result<crate::snf::CoalitionProblem, BenchError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let input = |message: String| BenchError::Input {
        path: path.to_owned(),
        message,
    };
    if path.extension().is_some_and(|e| e == "clp") {
        parse_problem(&path.display().to_string(), &text).map_err(|e| input(e.to_string()))
    } else {
        let f = parse(&text).map_err(|e| input(e.to_string()))?;
        let mut c = normalize(&f);
        c.name = path.display().to_string();
        Ok(c)
    }
}

/// Problem files below `dir`: `.cl` and `.clp` files in `dir` itself and in
/// its immediate subdirectories, grouped by directory name and sorted by
/// the number embedded in the file name.
pub fn collect(dir: &Path) -> Result<Vec<(String, PathBuf)>, BenchError> {
    fn files_in(dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
        let mut out = Vec::new();
        for entry in fs::read_dir(dir).map_err(io_err(dir))? {
            let path = entry.map_err(io_err(dir))?.path();
            if path.is_file() && path.extension().is_some_and(|e| e == "cl" || e == "clp") {
                out.push(path);
            }
        }
        out.sort_by_key(|p| {
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let digits: String = stem.chars().filter(char::is_ascii_digit).collect();
            (digits.parse::<u64>().unwrap_or(u64::MAX), stem)
        });
        Ok(out)
    }
    let name = |p: &Path| p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut out: Vec<(String, PathBuf)> = files_in(dir)?.into_iter().map(|f| (name(dir), f)).collect();
    let mut subdirs: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    subdirs.sort();
    for sub in subdirs {
        let set = name(&sub);
        out.extend(files_in(&sub)?.into_iter().map(|f| (set.clone(), f)));
    }
    if out.is_empty() {
        return Err(BenchError::Empty(dir.to_owned()));
    }
    Ok(out)
}

/// Proves every problem below `dir` with `jobs` worker threads.
pub fn run_suite(dir: &Path, config: &EngineConfig, jobs: usize) -> Result<Vec<ProblemRun>, BenchError> {
    let files = collect(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        files
            .par_iter()
            .map(|(set, path)| {
                let problem = load_problem(path)?;
                let start = Instant::now();
                let verdict = saturate(&problem, config);
                let elapsed = start.elapsed();
                let outcome = match verdict {
                    Verdict::Satisfiable { .. } => Outcome::Sat,
                    Verdict::Unsatisfiable { .. } => Outcome::Unsat,
                    Verdict::Timeout { .. } => Outcome::Timeout,
                };
                Ok(ProblemRun {
                    set: set.clone(),
                    path: path.clone(),
                    outcome,
                    elapsed,
                })
            })
            .collect()
    })
}

/// Groups runs by set, in set-name order.
pub fn summarize(runs: &[ProblemRun], cap: Duration) -> Vec<SetSummary> {
    let mut sets: Vec<&str> = runs.iter().map(|r| r.set.as_str()).collect();
    sets.sort_unstable();
    sets.dedup();
    sets.into_iter()
        .map(|set| {
            let rs: Vec<&ProblemRun> = runs.iter().filter(|r| r.set == set).collect();
            let count = |o: Outcome| rs.iter().filter(|r| r.outcome == o).count();
            let total: f64 = rs
                .iter()
                .map(|r| match r.outcome {
                    Outcome::Timeout => cap.as_secs_f64(),
                    _ => r.elapsed.as_secs_f64(),
                })
                .sum();
            let (sat, unsat, timeouts) = (count(Outcome::Sat), count(Outcome::Unsat), count(Outcome::Timeout));
            SetSummary {
                set: set.to_owned(),
                problems: rs.len(),
                solved: sat + unsat,
                sat,
                unsat,
                timeouts,
                avg_secs: total / rs.len() as f64,
            }
        })
        .collect()
}

pub fn render_table(rows: &[SetSummary]) -> String {
    let mut out = format!(
        "{:<12} {:>8} {:>7} {:>5} {:>6} {:>9} {:>12}\n",
        "set", "problems", "solved", "sat", "unsat", "timeouts", "avg time (s)"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<12} {:>8} {:>7} {:>5} {:>6} {:>9} {:>12.4}\n",
            r.set, r.problems, r.solved, r.sat, r.unsat, r.timeouts, r.avg_secs
        ));
    }
    out
}
