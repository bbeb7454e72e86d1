//! Subcommands. Each returns the text to print and the exit code; errors
//! are reported by the caller with exit code 2.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dimp8::generate::{gen_named, gen_planted_yes, gen_random_p8_free, Family, GenKind, GenSpec, RNG_ALGORITHM};
use dimp8::{check_dim, matching_weight, oracle_min_dim, solve_dim, Graph, SolveOptions, DEFAULT_ORACLE_LIMIT};

use crate::format::{parse_graph, parse_matching, write_graph};
use crate::record::{ResultRecord, WeightField};

#[derive(Parser, Debug)]
#[command(name = "dimp8", version, about = "Minimum-weight dominating induced matchings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one graph file.
    Solve(SolveArgs),
    /// Exhaustive reference search.
    Oracle(OracleArgs),
    /// Verify a matching file against a graph file.
    Check(CheckArgs),
    /// Generate instances.
    Gen(GenArgs),
    /// Time the solver over a directory of graph files.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SolveOpts {
    /// Search for an induced P8 first and flag the result if one exists.
    #[arg(long)]
    pub check_p8_free: bool,
    /// Branches allowed per anchor edge (default 10·n³).
    #[arg(long, value_name = "N")]
    pub branch_cap: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 1, value_name = "T")]
    pub threads: usize,
    /// Report millis as 0 so output is reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

impl SolveOpts {
    pub fn options(&self) -> SolveOptions {
        SolveOptions {
            branch_cap: self.branch_cap,
            threads: self.threads,
            record_timing: !self.no_timing,
            check_p8_free: self.check_p8_free,
        }
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub path: PathBuf,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub opts: SolveOpts,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    pub path: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT, value_name = "N")]
    pub max_edges: usize,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub path: PathBuf,
    /// File of `e <u> <v>` lines.
    #[arg(long, value_name = "PATH")]
    pub matching: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindArg {
    Random,
    Planted,
    Named,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub n: usize,
    /// Edge probability, as a decimal (0.35) or a fraction (7/20).
    #[arg(long, default_value = "1/3")]
    pub p: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Planted matching size (default n/4).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub wmin: u64,
    #[arg(long, default_value_t = 1)]
    pub wmax: u64,
    /// Reject disconnected random samples.
    #[arg(long)]
    pub connected: bool,
    /// Number of instances, with consecutive seeds.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    /// Output file (single instance) or directory (with --count > 1);
    /// standard output when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    pub dir: PathBuf,
    #[command(flatten)]
    pub opts: SolveOpts,
}

/// Text for standard output and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

pub fn run(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Solve(a) => run_solve(&a),
        Command::Oracle(a) => run_oracle(&a),
        Command::Check(a) => run_check(&a),
        Command::Gen(a) => run_gen(&a),
        Command::Bench(a) => run_bench(&a),
    }
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(rec: &ResultRecord, json: bool) -> Output {
    let stdout = if json { rec.to_json() + "\n" } else { rec.to_text() };
    Output {
        stdout,
        code: if rec.found() { 0 } else { 1 },
    }
}

pub fn run_solve(a: &SolveArgs) -> Result<Output> {
    let g = read_graph(&a.path)?;
    let out = solve_dim(&g, &a.opts.options());
    Ok(emit(&ResultRecord::from_solve(&out), a.json))
}

pub fn run_oracle(a: &OracleArgs) -> Result<Output> {
    let g = read_graph(&a.path)?;
    let start = Instant::now();
    let out = oracle_min_dim(&g, a.max_edges)?;
    let millis = if a.no_timing {
        0
    } else {
        start.elapsed().as_millis() as u64
    };
    Ok(emit(&ResultRecord::from_oracle(&out, millis), a.json))
}

pub fn run_check(a: &CheckArgs) -> Result<Output> {
    let g = read_graph(&a.path)?;
    let text = fs::read_to_string(&a.matching).with_context(|| format!("reading {}", a.matching.display()))?;
    let m = parse_matching(&text, &g).with_context(|| format!("parsing {}", a.matching.display()))?;
    let report = check_dim(&g, &m)?;
    let (stdout, code) = if let Some((e, f)) = report.conflict {
        (
            format!(
                "violation: not an induced matching: ({},{}) and ({},{})\n",
                e.u() + 1,
                e.v() + 1,
                f.u() + 1,
                f.v() + 1
            ),
            1,
        )
    } else if let Some((e, c)) = report.first_violation(&g) {
        (format!("violation: edge ({},{}) count {c}\n", e.u() + 1, e.v() + 1), 1)
    } else {
        (
            format!("ok: dominating induced matching, weight {}\n", matching_weight(&g, &m)?),
            0,
        )
    };
    Ok(Output { stdout, code })
}

/// "0.35" or "7/20" as a numerator/denominator pair.
pub fn parse_probability(s: &str) -> Result<(u32, u32)> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse::<u32>()?, b.trim().parse::<u32>()?),
        None => {
            let (int, frac) = s.split_once('.').unwrap_or((s, ""));
            if frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                bail!("bad probability {s:?}");
            }
            let den = 10u32.pow(frac.len() as u32);
            let int: u32 = if int.is_empty() { 0 } else { int.parse()? };
            let frac: u32 = if frac.is_empty() { 0 } else { frac.parse()? };
            let num = int
                .checked_mul(den)
                .and_then(|x| x.checked_add(frac))
                .with_context(|| format!("probability {s:?} outside [0, 1]"))?;
            (num, den)
        }
    };
    if den == 0 || num > den {
        bail!("probability {s:?} outside [0, 1]");
    }
    Ok((num, den))
}

fn gen_one(a: &GenArgs, seed: u64) -> Result<(Graph, Vec<String>)> {
    let p = parse_probability(&a.p)?;
    let mut comments = vec![format!("generator {RNG_ALGORITHM} seed {seed}")];
    let g = match a.kind {
        KindArg::Random => {
            let spec = GenSpec {
                kind: GenKind::RandomP8Free,
                n: a.n,
                p,
                seed,
                weights: (a.wmin, a.wmax),
                connected: a.connected,
            };
            comments.push(format!(
                "kind random n {} p {}/{} connected {}",
                a.n, p.0, p.1, a.connected
            ));
            gen_random_p8_free(&spec)?
        }
        KindArg::Planted => {
            let k = a.k.unwrap_or((a.n / 4).max(1));
            let spec = GenSpec {
                kind: GenKind::PlantedYes { k },
                n: a.n,
                p,
                seed,
                weights: (a.wmin, a.wmax),
                connected: true,
            };
            let (g, m) = gen_planted_yes(&spec, k)?;
            comments.push(format!("kind planted n {} k {k}", a.n));
            comments.push(format!("planted weight {}", matching_weight(&g, &m)?));
            g
        }
        KindArg::Named => {
            let fam: Family = a
                .family
                .as_deref()
                .context("--family is required with --kind named")?
                .parse()?;
            comments.push(format!("kind named {fam:?} n {}", a.n));
            gen_named(fam, a.n)?
        }
    };
    Ok((g, comments))
}

pub fn run_gen(a: &GenArgs) -> Result<Output> {
    if a.count == 0 {
        bail!("--count must be positive");
    }
    if a.count == 1 {
        let (g, comments) = gen_one(a, a.seed)?;
        let text = write_graph(&g, &comments);
        return Ok(match &a.out {
            Some(path) => {
                fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
                Output {
                    stdout: String::new(),
                    code: 0,
                }
            }
            None => Output { stdout: text, code: 0 },
        });
    }
    let dir = a.out.as_ref().context("--out DIR is required with --count > 1")?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let kind = match a.kind {
        KindArg::Random => "random",
        KindArg::Planted => "planted",
        KindArg::Named => "named",
    };
    let mut listing = String::new();
    for i in 0..a.count {
        let seed = a.seed + i;
        let (g, comments) = gen_one(a, seed)?;
        let path = dir.join(format!("{kind}_n{:03}_s{seed}.dim", a.n));
        fs::write(&path, write_graph(&g, &comments)).with_context(|| format!("writing {}", path.display()))?;
        listing += &format!("{}\n", path.display());
    }
    Ok(Output {
        stdout: listing,
        code: 0,
    })
}

fn median(sorted: &[u64]) -> u64 {
    let l = sorted.len();
    if l % 2 == 1 {
        sorted[l / 2]
    } else {
        (sorted[l / 2 - 1] + sorted[l / 2]) / 2
    }
}

pub fn run_bench(a: &BenchArgs) -> Result<Output> {
    let mut files: Vec<PathBuf> = fs::read_dir(&a.dir)
        .with_context(|| format!("reading {}", a.dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    let opts = a.opts.options();
    let mut rows = Vec::new();
    for path in &files {
        let g = read_graph(path)?;
        let rec = ResultRecord::from_solve(&solve_dim(&g, &opts));
        let name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let weight = match rec.weight {
            Some(WeightField::Finite(x)) => x.to_string(),
            Some(WeightField::Text(t)) => t,
            None => String::new(),
        };
        rows.push((g.n(), name, g.m(), rec.status, weight, rec.diagnostics.millis));
    }
    rows.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
    let mut out = String::from("instance,n,m,status,weight,millis\n");
    for (n, name, m, status, weight, ms) in &rows {
        out += &format!("{name},{n},{m},{status},{weight},{ms}\n");
    }
    out += "\nn,instances,median_millis,max_millis\n";
    let mut i = 0;
    while i < rows.len() {
        let n = rows[i].0;
        let mut times: Vec<u64> = rows[i..].iter().take_while(|r| r.0 == n).map(|r| r.5).collect();
        i += times.len();
        times.sort_unstable();
        out += &format!("{n},{},{},{}\n", times.len(), median(&times), times[times.len() - 1]);
    }
    Ok(Output { stdout: out, code: 0 })
}
