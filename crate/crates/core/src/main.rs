use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use sepsolve::bench::{self, maxcut, sparse, BenchVariant, PlantedParams, SparseMode};
use sepsolve::frontends::{mwc_root_reduce, solve_mwc, solve_oct};
use sepsolve::graph::{parse_mwc, parse_oct, write_mwc, write_solution, MwcInstance};
use sepsolve::impsep::solve_mwc_impsep;
use sepsolve::matroid::{greedy_oct, mwc_kernel, oct_kernel, KernelOptions, KernelStats, DEFAULT_PRIME};
use sepsolve::solver::{Limits, SolverVariant};

#[derive(Parser)]
#[command(name = "sepsolve", version, about = "Exact OCT and Multiway Cut solvers, kernels and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Csp,
    Lb1,
    Lb2,
}

impl VariantArg {
    fn with_cc(self, cc: bool) -> SolverVariant {
        let base = match self {
            VariantArg::Csp => SolverVariant::CSP,
            VariantArg::Lb1 => SolverVariant::LB1,
            VariantArg::Lb2 => SolverVariant::LB2,
        };
        base.with_cc(cc)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Csp,
    Impsep,
}

#[derive(clap::Args)]
struct SolveOpts {
    #[arg(long, value_enum, default_value = "lb2")]
    variant: VariantArg,
    /// Split into connected components at every node.
    #[arg(long)]
    cc: bool,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

impl SolveOpts {
    fn limits(&self) -> Limits {
        self.timeout.map_or_else(Limits::none, |s| Limits::timeout(Duration::from_secs_f64(s)))
    }
}

#[derive(clap::Args)]
struct KernelArgs {
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ceiling on the representative-set working memory.
    #[arg(long)]
    mem_limit: Option<u128>,
}

impl KernelArgs {
    fn options(&self) -> KernelOptions {
        let d = KernelOptions::default();
        KernelOptions { prime: self.prime, seed: self.seed, mem_limit: self.mem_limit.or(d.mem_limit) }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance; `.mwc` files are Multiway Cut, anything else OCT.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Solve an OCT instance (`n m` header, then one edge per line).
    SolveOct {
        file: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Solve a Multiway Cut instance (`n m t` header, terminals, edges).
    SolveMwc {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "csp")]
        algo: Algo,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Vertices that may be made undeletable, from a greedy transversal.
    KernelOct {
        file: PathBuf,
        #[command(flatten)]
        kernel: KernelArgs,
    },
    /// Root reduction, then the kernel, for a known optimum `K`.
    KernelMwc {
        file: PathBuf,
        #[arg(long)]
        opt: usize,
        #[command(flatten)]
        kernel: KernelArgs,
        /// Write the reduced instance here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a generated benchmark instance.
    #[command(subcommand)]
    Gen(Gen),
    /// Run every manifest instance and write the result table.
    Bench {
        #[arg(long)]
        manifest: PathBuf,
        /// Comma-separated: csp, lb1, lb2, each optionally +cc, and impsep.
        #[arg(long, default_value = "csp,lb1,lb2")]
        variants: String,
        #[arg(long, default_value_t = 3600.0)]
        timeout: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Max Cut reduction of a named small graph.
    Maxcut {
        #[arg(long)]
        source: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Core clique K0 with one satellite clique per terminal.
    Planted {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Terminals from a 5-scattered set of an OCT-format graph.
    Sparse {
        #[arg(long)]
        input: PathBuf,
        /// 3, 4, 5 or max.
        #[arg(long)]
        t: SparseMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_mwc(path: &Path) -> Result<MwcInstance> {
    parse_mwc(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn print_solution(opt: Option<usize>, solution: &[usize]) -> Result<()> {
    match opt {
        Some(_) => print!("{}", write_solution(solution)),
        None => bail!("timeout"),
    }
    Ok(())
}

fn solve_oct_file(file: &Path, opts: &SolveOpts) -> Result<()> {
    let inst = parse_oct(&read(file)?).with_context(|| format!("parsing {}", file.display()))?;
    let res = solve_oct(&inst.graph, opts.variant.with_cc(opts.cc), opts.limits());
    info!("nodes {}", res.result.stats.nodes);
    print_solution(res.opt, &res.solution)
}

fn solve_mwc_file(file: &Path, algo: Algo, opts: &SolveOpts) -> Result<()> {
    let inst = read_mwc(file)?;
    let (opt, solution) = match algo {
        Algo::Csp => {
            let res = solve_mwc(&inst, opts.variant.with_cc(opts.cc), opts.limits())?;
            info!("nodes {}", res.result.stats.nodes);
            (res.opt, res.solution)
        }
        Algo::Impsep => {
            let res = solve_mwc_impsep(&inst, opts.cc, opts.limits())?;
            (res.opt, res.solution)
        }
    };
    print_solution(opt, &solution)
}

fn stats_line(size_label: &str, size: usize, s: &KernelStats) -> String {
    format!(
        "{size_label} {size} rank {} family {} representative {} peak_bytes {} rounds {} rejected {}",
        s.rank, s.family, s.representative, s.peak_bytes, s.rounds, s.rejected
    )
}

fn write_instance(dir: &Path, name: &str, inst: &MwcInstance) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, write_mwc(inst)).with_context(|| format!("writing {}", path.display()))?;
    println!("{}", path.display());
    Ok(())
}

fn generate(g: Gen) -> Result<()> {
    match g {
        Gen::Maxcut { source, out_dir } => {
            let h = maxcut::source_graph(&source).with_context(|| format!("unknown source {source:?}, expected one of {:?}", maxcut::SOURCES))?;
            write_instance(&out_dir, &format!("maxcut_{source}.mwc"), &bench::gen_maxcut(&h))
        }
        Gen::Planted { t, a, b, p, seed, out_dir } => {
            let params = PlantedParams { t, a, b, p, seed };
            if !(0.0..=1.0).contains(&p) {
                bail!("edge probability {p} outside [0, 1]");
            }
            let planted = bench::gen_planted(&params);
            if planted.seed != seed {
                info!("used seed {} after regeneration", planted.seed);
            }
            write_instance(&out_dir, &params.file_name(), &planted.instance)
        }
        Gen::Sparse { input, t, seed, out_dir } => {
            let g = parse_oct(&read(&input)?).with_context(|| format!("parsing {}", input.display()))?.graph;
            let inst = bench::gen_sparse(&g, t, seed)?;
            let name = input.file_stem().map_or_else(|| "graph".into(), |s| s.to_string_lossy().into_owned());
            write_instance(&out_dir, &sparse::file_name(&name, t), &inst)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve { file, opts } => {
            if file.extension().is_some_and(|e| e == "mwc") {
                solve_mwc_file(&file, Algo::Csp, &opts)
            } else {
                solve_oct_file(&file, &opts)
            }
        }
        Command::SolveOct { file, opts } => solve_oct_file(&file, &opts),
        Command::SolveMwc { file, algo, opts } => solve_mwc_file(&file, algo, &opts),
        Command::KernelOct { file, kernel } => {
            let g = parse_oct(&read(&file)?)?.graph;
            let y = greedy_oct(&g);
            let k = oct_kernel(&g, &y, &kernel.options())?;
            println!("{}", k.undeletable.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
            println!("{}", stats_line("y", k.y.len(), &k.stats));
            Ok(())
        }
        Command::KernelMwc { file, opt, kernel, out } => {
            let inst = read_mwc(&file)?;
            let red = mwc_root_reduce(&inst)?;
            let left = opt.checked_sub(red.deleted.len()).with_context(|| format!("the root reduction already deletes {} vertices", red.deleted.len()))?;
            info!("root reduction: {} deleted, {} undeletable, remaining budget {left}", red.deleted.len(), red.undeletable.len());
            let k = mwc_kernel(&red.instance, left, &kernel.options())?;
            let text = write_mwc(&k.instance);
            match out {
                Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            eprintln!("{}", stats_line("k", left, &k.stats));
            Ok(())
        }
        Command::Gen(g) => generate(g),
        Command::Bench { manifest, variants, timeout, out } => {
            let variants: Vec<BenchVariant> = bench::parse_variants(&variants).map_err(anyhow::Error::msg)?;
            let files = bench::read_manifest(&manifest)?;
            let rows = bench::run_experiments(&files, &variants, Duration::from_secs_f64(timeout));
            let csv = bench::to_csv(&rows, &variants)?;
            match out {
                Some(path) => std::fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{csv}"),
            }
            Ok(())
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
