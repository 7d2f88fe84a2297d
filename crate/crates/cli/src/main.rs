use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use epsnet_cli::bench::{build_net, loglog_slopes, run_bench, write_csv, Algorithm, BenchConfig};
use epsnet_cli::generate::{generate_points, Generator};
use epsnet_cli::io::{apply_constants, format_points, parse_points, NetJson};
use epsnet_cli::svg::write_svg;
use epsnet_core::arrangement::{build_trapezoidation, sample_cutting};
use epsnet_core::geometry::Segment;
use epsnet_core::improved::{nudged_lines, Config};
use epsnet_core::rational::{format_rational, int, parse_rational, Rational};
use epsnet_core::slab::build_slabs;
use epsnet_core::verifier::is_weak_eps_net;
use epsnet_core::{ensure_general_position, Line, PointSet};

#[derive(Parser)]
#[command(
    name = "epsnet",
    version,
    about = "Weak epsilon-nets for planar point sets with respect to convex ranges"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a point set.
    Gen(GenArgs),
    /// Build a net for a point file and verify it.
    Build(BuildArgs),
    /// Verify a net JSON file against a point file.
    Verify(VerifyArgs),
    /// Sweep algorithms, eps, n, seeds and generators into a CSV.
    Bench(BenchArgs),
    /// Draw points, a net and optionally a decomposition as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value = "uniform")]
    kind: Generator,
    #[arg(long)]
    n: usize,
    #[arg(long, env = "EPSNET_SEED", default_value_t = 1)]
    seed: u64,
    /// Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstArgs {
    #[arg(long, value_parser = rational)]
    eta: Option<Rational>,
    #[arg(long = "eps-tilde", value_parser = rational)]
    eps_tilde: Option<Rational>,
    /// key = value lines: C0, C_hat, C1, C_prime, C_cut, depth_cap.
    #[arg(long)]
    constants: Option<PathBuf>,
}

impl ConstArgs {
    fn config(&self, seed: u64) -> Result<Config> {
        let mut cfg = Config {
            seed,
            ..Config::default()
        };
        if let Some(path) = &self.constants {
            apply_constants(&mut cfg, &read(path)?)?;
        }
        if let Some(eta) = &self.eta {
            cfg.eta = eta.clone();
        }
        if let Some(t) = &self.eps_tilde {
            cfg.eps_tilde = t.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long, value_parser = rational)]
    eps: Rational,
    #[arg(long, default_value = "improved")]
    algo: Algorithm,
    #[arg(long, env = "EPSNET_SEED", default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    consts: ConstArgs,
    /// Net JSON destination; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long = "no-verify")]
    no_verify: bool,
    /// Perturb the input into general position instead of rejecting it.
    #[arg(long)]
    perturb: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long)]
    net: PathBuf,
    /// Overrides the epsilon stored in the net file.
    #[arg(long, value_parser = rational)]
    eps: Option<Rational>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', value_parser = rational, default_values = ["0.4", "0.3", "0.2", "0.15"])]
    eps: Vec<Rational>,
    #[arg(long, value_delimiter = ',', default_values = ["64"])]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<u64>,
    #[arg(long, env = "EPSNET_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_values = ["uniform"])]
    generators: Vec<Generator>,
    #[arg(long, value_delimiter = ',', default_values = ["trivial", "quadratic", "improved"])]
    algo: Vec<Algorithm>,
    #[command(flatten)]
    consts: ConstArgs,
    /// Defaults to stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long)]
    net: Option<PathBuf>,
    /// Overlay the trapezoidation of this many balanced vertical slabs.
    #[arg(long)]
    slabs: Option<usize>,
    /// Overlay the trapezoidation of a sampled r-cutting of the spanned lines.
    #[arg(long)]
    cutting: Option<usize>,
    #[arg(long, env = "EPSNET_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    svg: PathBuf,
}

fn rational(s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|e| anyhow!("{e}"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_points(path: &Path, perturb: Option<u64>) -> Result<PointSet> {
    let ps = PointSet::checked(parse_points(&read(path)?)?);
    if ps.is_empty() {
        bail!("{} holds no points", path.display());
    }
    if ps.is_general_position() {
        return Ok(ps);
    }
    match perturb {
        Some(seed) => Ok(ensure_general_position(ps, seed)?),
        None => bail!(
            "{} is not in general position (distinct x, no three collinear); use --perturb",
            path.display()
        ),
    }
}

fn gen(a: GenArgs) -> Result<bool> {
    let ps = generate_points(a.kind, a.n, a.seed)?;
    emit(a.out.as_deref(), &format_points(ps.points()))?;
    Ok(true)
}

fn build(a: BuildArgs) -> Result<bool> {
    let ps = load_points(&a.points, a.perturb.then_some(a.seed))?;
    if a.eps <= int(0) {
        bail!("eps must be positive");
    }
    let cfg = a.consts.config(a.seed)?;
    let (net, params) = build_net(a.algo, &ps, &a.eps, &cfg)?;
    emit(
        a.out.as_deref(),
        &NetJson::new(&net, &a.eps, a.algo.name(), params).to_json(),
    )?;
    if let Some(svg) = &a.svg {
        write_svg(svg, &ps, Some(&net), None)?;
    }
    if a.no_verify {
        eprintln!("net size {} (not verified)", net.len());
        return Ok(true);
    }
    let report = is_weak_eps_net(&ps, &net, &a.eps);
    eprintln!(
        "net size {}; max unpierced {} vs threshold {}: {}",
        net.len(),
        report.max_unpierced,
        report.threshold,
        if report.is_net {
            "verified"
        } else {
            "NOT a net"
        }
    );
    Ok(report.is_net)
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let ps = load_points(&a.points, None)?;
    let nj = NetJson::parse(&read(&a.net)?)?;
    let eps = match a.eps {
        Some(e) => e,
        None => nj.epsilon()?,
    };
    let report = is_weak_eps_net(&ps, &nj.net()?, &eps);
    println!("n = {}", ps.len());
    println!("eps = {}", format_rational(&eps));
    println!("net size = {}", nj.size);
    println!("threshold = {}", report.threshold);
    println!("max unpierced = {}", report.max_unpierced);
    println!("witness = {:?}", report.witness);
    println!("is_net = {}", report.is_net);
    Ok(report.is_net)
}

fn bench(a: BenchArgs) -> Result<bool> {
    let seeds = if a.seeds.is_empty() {
        vec![a.seed]
    } else {
        a.seeds.clone()
    };
    let config = BenchConfig {
        algorithms: a.algo.clone(),
        eps: a.eps.clone(),
        ns: a.n.clone(),
        seeds,
        generators: a.generators.clone(),
        base: a.consts.config(a.seed)?,
    };
    let rows = run_bench(&config);
    match &a.csv {
        Some(p) => write_csv(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
            &rows,
        )?,
        None => write_csv(std::io::stdout().lock(), &rows)?,
    }
    for (algo, s) in loglog_slopes(&rows) {
        match s {
            Some(s) => eprintln!("{algo}: log-log slope of size vs 1/eps = {s:.3}"),
            None => eprintln!("{algo}: log-log slope undefined"),
        }
    }
    let failed = rows.iter().filter(|r| !r.is_net).count();
    if failed > 0 {
        eprintln!("{failed} of {} rows failed", rows.len());
    }
    Ok(failed == 0)
}

fn render(a: RenderArgs) -> Result<bool> {
    let ps = load_points(&a.points, None)?;
    let net = match &a.net {
        Some(p) => Some(NetJson::parse(&read(p)?)?.net()?),
        None => None,
    };
    let mut lines: Vec<Line> = Vec::new();
    if let Some(r) = a.slabs {
        lines.extend(build_slabs(&ps, r)?.lines);
    }
    if let Some(r) = a.cutting {
        let n = ps.len();
        let edges: Vec<Segment> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| Segment::new(i, j)))
            .collect();
        let source = nudged_lines(&ps, &edges);
        let cfg = Config::default();
        lines.extend(sample_cutting(&source, r, &cfg.c_cut, a.seed, cfg.max_attempts)?.sample);
    }
    let decomposition = if a.slabs.is_some() || a.cutting.is_some() {
        Some(build_trapezoidation(&lines, &ps)?)
    } else {
        None
    };
    write_svg(&a.svg, &ps, net.as_ref(), decomposition.as_ref())?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Gen(a) => gen(a),
        Cmd::Build(a) => build(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Bench(a) => bench(a),
        Cmd::Render(a) => render(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
