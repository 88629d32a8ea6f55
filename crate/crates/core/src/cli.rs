//! Command-line front end. `run` parses arguments and never exits the process; the binary
//! maps the returned exit code.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::csp::{
    balls_from_csp, brute_solve_csp, check_ball_instance, embed_csp, equivalence_suite, max_disjoint_one_per_group,
    random_leq_csp, BallInstance, LeqCspInstance, SelectOutcome, SolveOutcome,
};
use crate::dimension::{default_ladder, estimate_dimension, geometric_ladder, verify_dimension_bound, ScalePair};
use crate::fractal::{gen_f, gen_h, gen_integer_grid, gen_sierpinski_carpet, CrossbarParams, RowStructure};
use crate::geometry::rational::{self, int, Rational};
use crate::geometry::PointSet;
use crate::spanner::{
    build_carpet_spanner, build_carpet_tree_decomposition, build_greedy_spanner, extract_grid_minor,
    separator_tree_decomposition, validate_minor, validate_tree_decomposition, verify_spanner, GridMinorCertificate,
    SpannerGraph, TreeDecomposition,
};
use crate::svg::render_svg;
use crate::tsp::{
    check_structure, exact_covers, held_karp_optimal_path, held_karp_path_between, reduce_exact_cover_to_tsp,
    to_tsplib, witness_path_from_cover, ExactCoverInstance, TspReductionOutput,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

const DEFAULT_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommandResult {
    pub exit_code: i32,
    pub artifacts: Vec<PathBuf>,
    pub summary: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "cantor-forge",
    version,
    about = "Fractal point sets, spanner certificates and reduction compilers"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Node budget for the brute-force searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Generate a point set or a random instance.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Dimension estimates and bound checks.
    #[command(subcommand)]
    Dim(DimCmd),
    /// Build spanners.
    #[command(subcommand)]
    Spanner(SpannerCmd),
    /// Extract a grid-minor certificate from a spanner.
    Minor(MinorArgs),
    /// Tree decomposition of a spanner.
    Treedec(TreedecArgs),
    /// Run one of the two reductions.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Brute-force oracles.
    #[command(subcommand)]
    Solve(SolveCmd),
    /// Verification suites; exit 1 on the first violation.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Re-emit an artifact as CSV, SVG or TSPLIB.
    #[command(subcommand)]
    Export(ExportCmd),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct CrossbarArgs {
    #[arg(long, default_value_t = 3)]
    pub l: u32,
    #[arg(long, default_value_t = 1)]
    pub v: u32,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long)]
    pub k: u32,
}

#[derive(Subcommand, Debug)]
pub enum GenCmd {
    /// f^{l,v,d}(k).
    Crossbar(CrossbarArgs),
    /// h_m^{l,v,d}(k) for the 0-based axis m.
    Bar {
        #[command(flatten)]
        p: CrossbarArgs,
        #[arg(long, default_value_t = 0)]
        axis: u32,
    },
    /// Discrete Sierpiński carpet.
    Carpet {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        box_points: bool,
    },
    /// {0..n-1}^d.
    Grid {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        d: u32,
    },
    /// Generator parameters from a JSON file.
    Params {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Random ≤-CSP instance.
    Csp {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        unsat: bool,
    },
}

/// `{"family": "crossbar|carpet|grid", ...}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GenParams {
    Crossbar {
        l: u32,
        v: u32,
        d: u32,
        k: u32,
    },
    Carpet {
        k: u32,
        #[serde(default)]
        box_points: bool,
    },
    Grid {
        n: u32,
        d: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LadderKind {
    Default,
    Geometric,
}

#[derive(Args, Debug, Clone)]
pub struct LadderArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub l: u32,
    #[arg(long, value_enum, default_value_t = LadderKind::Default)]
    pub ladder: LadderKind,
    /// Finest level for the default ladder (ε = side/l^j, j = 1..levels).
    #[arg(long, default_value_t = 4)]
    pub levels: u32,
    #[arg(long, default_value_t = 64)]
    pub centers: usize,
}

#[derive(Subcommand, Debug)]
pub enum DimCmd {
    Estimate {
        #[command(flatten)]
        ladder: LadderArgs,
        #[arg(long)]
        claimed: Option<f64>,
    },
    Verify(DimVerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct DimVerifyArgs {
    #[command(flatten)]
    pub ladder: LadderArgs,
    #[arg(long)]
    pub delta: f64,
    #[arg(long = "bigc")]
    pub big_c: f64,
}

#[derive(Subcommand, Debug)]
pub enum SpannerCmd {
    /// Greedy c-spanner of a point set.
    Greedy {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "1")]
        c: String,
    },
    /// The carpet spanner of depth k.
    Carpet {
        #[arg(long)]
        k: u32,
    },
}

#[derive(Args, Debug)]
pub struct MinorArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value = "1")]
    pub c: String,
    /// Full-row length; defaults to the bounding-box extent plus one.
    #[arg(long)]
    pub row_len: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TreedecArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Use the carpet-specific decomposition.
    #[arg(long)]
    pub carpet: bool,
    #[arg(long, default_value_t = 6)]
    pub leaf: usize,
}

#[derive(Subcommand, Debug)]
pub enum ReduceCmd {
    CspToBalls {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        l: u32,
        #[arg(long, default_value_t = 1)]
        v: u32,
    },
    XcToTsp {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        l: u32,
        #[arg(long, default_value_t = 1)]
        v: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum SolveCmd {
    Csp {
        #[arg(long = "in")]
        input: PathBuf,
    },
    Balls {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// All exact covers.
    Xc {
        #[arg(long = "in")]
        input: PathBuf,
    },
    HeldKarp {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        to: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    Dim(DimVerifyArgs),
    Spanner {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        c: String,
    },
    Minor {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    Treedec {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
    },
    CspEquiv {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long = "delta-max", default_value_t = 3)]
        delta_max: u32,
        #[arg(long, default_value_t = 3)]
        l: u32,
        #[arg(long, default_value_t = 1)]
        v: u32,
    },
    /// Structural checks plus a witness for every exact cover.
    TspStructure {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExportCmd {
    Points {
        #[arg(long = "in")]
        input: PathBuf,
    },
    Graph {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// TSPLIB body to --out, target and labels to <out>.sidecar.json.
    Tsplib {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "cantor-forge")]
        name: String,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verify(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Verify(_) => EXIT_VERIFY,
            Failure::Budget(_) => EXIT_BUDGET,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

type Res<T> = Result<T, Failure>;

struct Ctx {
    g: Global,
    artifacts: Vec<PathBuf>,
    /// Set when the primary output went to stdout, so the summary goes to stderr.
    stdout_used: bool,
}

impl Ctx {
    fn write(&mut self, path: &Path, content: &str) -> Res<()> {
        fs::write(path, content).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        self.artifacts.push(path.to_path_buf());
        Ok(())
    }

    /// Primary output: --out or stdout.
    fn emit(&mut self, content: &str) -> Res<()> {
        match self.g.out.clone() {
            Some(p) => self.write(&p, content),
            None => {
                print!("{content}");
                if !content.ends_with('\n') {
                    println!();
                }
                self.stdout_used = true;
                Ok(())
            }
        }
    }

    fn emit_json<T: Serialize>(&mut self, v: &T) -> Res<()> {
        let s = serde_json::to_string_pretty(v).map_err(usage)?;
        self.emit(&s)
    }

    /// Point sets honour --format.
    fn emit_points(&mut self, p: &PointSet) -> Res<()> {
        match self.g.format {
            Format::Json => self.emit(&p.to_json()),
            Format::Csv => self.emit(&p.to_csv()),
            Format::Svg => self.emit(&render_svg(p, &[])),
        }
    }

    fn emit_graph(&mut self, g: &SpannerGraph) -> Res<()> {
        match self.g.format {
            Format::Json => self.emit(&g.to_json()),
            Format::Svg => {
                let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
                self.emit(&render_svg(g.points(), &edges))
            }
            Format::Csv => Err(Failure::Usage("graphs have no CSV form".into())),
        }
    }

    fn only_json(&self, what: &str) -> Res<()> {
        if self.g.format != Format::Json {
            return Err(Failure::Usage(format!("{what} is only written as JSON")));
        }
        Ok(())
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Res<T> {
    let s = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_rational(s: &str) -> Res<Rational> {
    rational::parse(s).ok_or_else(|| Failure::Usage(format!("not a number: {s:?}")))
}

fn params(a: &CrossbarArgs) -> Res<CrossbarParams> {
    CrossbarParams::new(a.l, a.v, a.d, a.k).map_err(usage)
}

fn pairs_for(p: &PointSet, a: &LadderArgs) -> Vec<ScalePair> {
    match a.ladder {
        LadderKind::Default => default_ladder(p, a.l, 1..=a.levels),
        LadderKind::Geometric => geometric_ladder(p, a.l, &int(1)),
    }
}

/// Parses and runs; clap's own usage errors and --help are reported with their usual text.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            CommandResult {
                exit_code: code,
                artifacts: vec![],
                summary: if code == EXIT_OK {
                    String::new()
                } else {
                    "usage error".into()
                },
            }
        }
    }
}

pub fn execute(cli: Cli) -> CommandResult {
    let mut ctx = Ctx {
        g: cli.global.clone(),
        artifacts: Vec::new(),
        stdout_used: false,
    };
    log::debug!("command: {:?}", cli.cmd);
    let r = dispatch(&mut ctx, cli.cmd);
    let (exit_code, summary) = match r {
        Ok(s) => (EXIT_OK, s),
        Err(f) => {
            let code = f.code();
            let msg = match f {
                Failure::Usage(m) => format!("error: {m}"),
                Failure::Verify(m) => format!("FAIL: {m}"),
                Failure::Budget(m) => format!("budget exceeded: {m}"),
            };
            (code, msg)
        }
    };
    if ctx.stdout_used || exit_code != EXIT_OK {
        eprintln!("{summary}");
    } else {
        println!("{summary}");
    }
    CommandResult {
        exit_code,
        artifacts: ctx.artifacts,
        summary,
    }
}

fn dispatch(ctx: &mut Ctx, cmd: Cmd) -> Res<String> {
    match cmd {
        Cmd::Gen(c) => run_gen(ctx, c),
        Cmd::Dim(c) => run_dim(ctx, c),
        Cmd::Spanner(c) => run_spanner(ctx, c),
        Cmd::Minor(a) => run_minor(ctx, a),
        Cmd::Treedec(a) => run_treedec(ctx, a),
        Cmd::Reduce(c) => run_reduce(ctx, c),
        Cmd::Solve(c) => run_solve(ctx, c),
        Cmd::Verify(c) => run_verify(ctx, c),
        Cmd::Export(c) => run_export(ctx, c),
    }
}

fn gen_from(ctx: &mut Ctx, p: GenParams) -> Res<String> {
    match p {
        GenParams::Crossbar { l, v, d, k } => {
            let pr = CrossbarParams::new(l, v, d, k).map_err(usage)?;
            let f = gen_f(&pr).map_err(usage)?;
            ctx.emit_points(&f)?;
            let mut s = format!("|P| = {}; core grid (l-v)^(kd) = {}", f.len(), pr.core_count());
            if (l, v, d) == (3, 1, 2) {
                s.push_str(&format!("; bound 2*6^k = {}", pr.f_bound()));
            }
            Ok(s)
        }
        GenParams::Carpet { k, box_points } => {
            let c = gen_sierpinski_carpet(k, box_points).map_err(usage)?;
            ctx.emit_points(&c)?;
            Ok(format!("|P| = {}; cells 8^k = {}", c.len(), 8u128.pow(k)))
        }
        GenParams::Grid { n, d } => {
            let g = gen_integer_grid(n, d).map_err(usage)?;
            ctx.emit_points(&g)?;
            Ok(format!("|P| = {}; n^d = {}", g.len(), (n as u128).pow(d)))
        }
    }
}

fn run_gen(ctx: &mut Ctx, c: GenCmd) -> Res<String> {
    match c {
        GenCmd::Crossbar(a) => gen_from(
            ctx,
            GenParams::Crossbar {
                l: a.l,
                v: a.v,
                d: a.d,
                k: a.k,
            },
        ),
        GenCmd::Bar { p, axis } => {
            let pr = params(&p)?;
            let h = gen_h(&pr, axis).map_err(usage)?;
            ctx.emit_points(&h)?;
            Ok(format!("|P| = {}; (l(l-v)^(d-1))^k = {}", h.len(), pr.h_count()))
        }
        GenCmd::Carpet { k, box_points } => gen_from(ctx, GenParams::Carpet { k, box_points }),
        GenCmd::Grid { n, d } => gen_from(ctx, GenParams::Grid { n, d }),
        GenCmd::Params { input } => {
            let p: GenParams = read_json(&input)?;
            gen_from(ctx, p)
        }
        GenCmd::Csp { d, n, delta, unsat } => {
            ctx.only_json("a CSP instance")?;
            if d == 0 || n == 0 || delta == 0 {
                return Err(Failure::Usage("d, n and delta must be positive".into()));
            }
            let i = random_leq_csp(ctx.g.seed, d, n, delta, unsat);
            ctx.emit(&i.to_json())?;
            Ok(format!("{} variables, {} edges", i.vars.len(), i.edges.len()))
        }
    }
}

fn run_dim(ctx: &mut Ctx, c: DimCmd) -> Res<String> {
    match c {
        DimCmd::Estimate { ladder, claimed } => {
            ctx.only_json("a dimension report")?;
            let p: PointSet = read_json(&ladder.input)?;
            let pairs = pairs_for(&p, &ladder);
            let rep = estimate_dimension(&p, &pairs, ladder.centers, ctx.g.seed, claimed).map_err(usage)?;
            ctx.emit_json(&rep)?;
            Ok(match rep.fitted_exponent {
                Some(e) => format!("fitted exponent {e:.4} over {} scale pairs", pairs.len()),
                None => "no fit: all ratios coincide".into(),
            })
        }
        DimCmd::Verify(a) => verify_dim(ctx, a),
    }
}

fn verify_dim(ctx: &mut Ctx, a: DimVerifyArgs) -> Res<String> {
    ctx.only_json("a violation list")?;
    let p: PointSet = read_json(&a.ladder.input)?;
    let pairs = pairs_for(&p, &a.ladder);
    let v = verify_dimension_bound(&p, a.delta, a.big_c, &pairs, a.ladder.centers, ctx.g.seed).map_err(usage)?;
    ctx.emit_json(&v)?;
    match v.first() {
        None => Ok(format!("no violations over {} scale pairs", pairs.len())),
        Some(x) => Err(Failure::Verify(format!(
            "{} violations; first at eps={} r={}: count {} > {:.3}",
            v.len(),
            x.eps,
            x.r,
            x.count,
            x.bound
        ))),
    }
}

fn run_spanner(ctx: &mut Ctx, c: SpannerCmd) -> Res<String> {
    let g = match c {
        SpannerCmd::Greedy { input, c } => {
            let p: PointSet = read_json(&input)?;
            build_greedy_spanner(&p, &parse_rational(&c)?).map_err(usage)?
        }
        SpannerCmd::Carpet { k } => build_carpet_spanner(k).map_err(usage)?,
    };
    ctx.emit_graph(&g)?;
    Ok(format!("{} vertices, {} edges", g.len(), g.edges().len()))
}

fn default_row_len(p: &PointSet) -> usize {
    let (lo, hi) = p.bbox();
    let ext = lo.iter().zip(&hi).map(|(a, b)| b - a).max().unwrap_or_else(|| int(0));
    ext.to_integer().try_into().map(|e: usize| e + 1).unwrap_or(1)
}

fn run_minor(ctx: &mut Ctx, a: MinorArgs) -> Res<String> {
    ctx.only_json("a minor certificate")?;
    let g: SpannerGraph = read_json(&a.graph)?;
    let c = parse_rational(&a.c)?;
    let len = a.row_len.unwrap_or_else(|| default_row_len(g.points()));
    let rows = RowStructure::detect(g.points(), len);
    let cert = extract_grid_minor(&g, &rows, &c).map_err(|e| Failure::Verify(e.to_string()))?;
    ctx.emit_json(&cert)?;
    let chk = validate_minor(&g, &cert);
    if !chk.ok {
        return Err(Failure::Verify(format!(
            "certificate invalid: {:?} {:?}",
            chk.failure, chk.detail
        )));
    }
    Ok(format!("grid minor of side {} (spacing {})", cert.side, cert.spacing))
}

fn run_treedec(ctx: &mut Ctx, a: TreedecArgs) -> Res<String> {
    ctx.only_json("a tree decomposition")?;
    let g: SpannerGraph = read_json(&a.graph)?;
    let t = if a.carpet {
        build_carpet_tree_decomposition(&g).map_err(usage)?
    } else {
        separator_tree_decomposition(&g, a.leaf.max(1))
    };
    ctx.emit_json(&t)?;
    let chk = validate_tree_decomposition(&g, &t);
    if !chk.ok {
        return Err(Failure::Verify(format!(
            "decomposition invalid: {:?} {:?}",
            chk.failure, chk.detail
        )));
    }
    Ok(format!("width {} over {} bags", t.width, t.bags.len()))
}

fn report_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".report.json");
    PathBuf::from(s)
}

fn run_reduce(ctx: &mut Ctx, c: ReduceCmd) -> Res<String> {
    ctx.only_json("a compiled instance")?;
    match c {
        ReduceCmd::CspToBalls { input, l, v } => {
            let i: LeqCspInstance = read_json(&input)?;
            i.validate().map_err(usage)?;
            let e = embed_csp(&i, l, v).map_err(usage)?;
            let b = balls_from_csp(&e.instance).map_err(usage)?;
            let chk = check_ball_instance(&b).map_err(|e| Failure::Verify(e.to_string()))?;
            ctx.emit(&b.to_json())?;
            if let Some(out) = ctx.g.out.clone() {
                let rep = serde_json::json!({ "embedding": e, "checks": chk });
                ctx.write(&report_path(&out), &serde_json::to_string_pretty(&rep).map_err(usage)?)?;
            }
            if !chk.ok() {
                return Err(Failure::Verify(format!("ball checks failed: {chk:?}")));
            }
            Ok(format!(
                "{} balls in {} groups, alpha = {}, {} chain variables",
                b.centers.len(),
                b.groups.len(),
                rational::fraction_string(&b.alpha),
                e.chain_count()
            ))
        }
        ReduceCmd::XcToTsp { input, l, v } => {
            let raw: ExactCoverInstance = read_json(&input)?;
            let xc = ExactCoverInstance::new(raw.m, raw.sets).map_err(usage)?;
            log::info!("compiling exact cover with m = {}", xc.m);
            let out = reduce_exact_cover_to_tsp(&xc, l, v).map_err(|e| match e {
                crate::tsp::TspError::Structure { .. } => Failure::Verify(e.to_string()),
                other => usage(other),
            })?;
            ctx.emit(&out.to_json())?;
            if let Some(o) = ctx.g.out.clone() {
                let rep = check_structure(&out).map_err(usage)?;
                ctx.write(&report_path(&o), &serde_json::to_string_pretty(&rep).map_err(usage)?)?;
            }
            Ok(format!(
                "{} points, N = {}, alpha = {:.6}",
                out.points.len(),
                out.alpha.n,
                out.alpha.total
            ))
        }
    }
}

fn run_solve(ctx: &mut Ctx, c: SolveCmd) -> Res<String> {
    ctx.only_json("a solver outcome")?;
    let budget = ctx.g.budget;
    match c {
        SolveCmd::Csp { input } => {
            let i: LeqCspInstance = read_json(&input)?;
            let o = brute_solve_csp(&i, budget).map_err(usage)?;
            ctx.emit_json(&o)?;
            match o {
                SolveOutcome::Sat(_) => Ok("SAT".into()),
                SolveOutcome::Unsat => Ok("UNSAT".into()),
                SolveOutcome::Budget => Err(Failure::Budget(format!("{budget} nodes"))),
            }
        }
        SolveCmd::Balls { input } => {
            let b: BallInstance = read_json(&input)?;
            let o = max_disjoint_one_per_group(&b, budget);
            ctx.emit_json(&o)?;
            match o {
                SelectOutcome::Full(_) => Ok("full selection".into()),
                SelectOutcome::None => Ok("no full selection".into()),
                SelectOutcome::Budget => Err(Failure::Budget(format!("{budget} nodes"))),
            }
        }
        SolveCmd::Xc { input } => {
            let raw: ExactCoverInstance = read_json(&input)?;
            let xc = ExactCoverInstance::new(raw.m, raw.sets).map_err(usage)?;
            if xc.m > 20 {
                return Err(Failure::Budget(format!("2^{} subsets", xc.m)));
            }
            let covers = exact_covers(&xc);
            ctx.emit_json(&covers)?;
            Ok(format!("{} exact covers", covers.len()))
        }
        SolveCmd::HeldKarp { input, from, to } => {
            let p: PointSet = read_json(&input)?;
            let (len, path) = match (from, to) {
                (Some(s), Some(t)) => held_karp_path_between(&p, s, t),
                (None, None) => held_karp_optimal_path(&p),
                _ => return Err(Failure::Usage("give both --from and --to, or neither".into())),
            }
            .map_err(|e| match e {
                crate::tsp::TspError::TooLarge { .. } => Failure::Budget(e.to_string()),
                other => usage(other),
            })?;
            ctx.emit_json(&serde_json::json!({ "length": len, "path": path }))?;
            Ok(format!("optimal path length {len:.9}"))
        }
    }
}

#[derive(Serialize)]
struct TspVerifyReport {
    structure: crate::tsp::StructureReport,
    covers: Vec<Vec<usize>>,
    witness_lengths: Vec<f64>,
    target: f64,
}

fn run_verify(ctx: &mut Ctx, c: VerifyCmd) -> Res<String> {
    if let VerifyCmd::Dim(a) = c {
        return verify_dim(ctx, a);
    }
    ctx.only_json("a verification report")?;
    match c {
        VerifyCmd::Dim(_) => unreachable!("handled above"),
        VerifyCmd::Spanner { graph, c } => {
            let g: SpannerGraph = read_json(&graph)?;
            let r = verify_spanner(&g, &parse_rational(&c)?).map_err(usage)?;
            ctx.emit_json(&r)?;
            let ms = r.max_stretch.map_or("inf".to_string(), |s| format!("{s:.6}"));
            if r.ok {
                Ok(format!("spanner ok, max stretch {ms} over {} pairs", r.pairs))
            } else {
                Err(Failure::Verify(format!("max stretch {ms} at pair {:?}", r.worst_pair)))
            }
        }
        VerifyCmd::Minor { graph, cert } => {
            let g: SpannerGraph = read_json(&graph)?;
            let cert: GridMinorCertificate = read_json(&cert)?;
            let chk = validate_minor(&g, &cert);
            ctx.emit_json(&chk)?;
            if chk.ok {
                Ok(format!("certificate of side {} valid", cert.side))
            } else {
                Err(Failure::Verify(format!("{:?}: {:?}", chk.failure, chk.detail)))
            }
        }
        VerifyCmd::Treedec { graph, td } => {
            let g: SpannerGraph = read_json(&graph)?;
            let t: TreeDecomposition = read_json(&td)?;
            let chk = validate_tree_decomposition(&g, &t);
            ctx.emit_json(&chk)?;
            if chk.ok {
                Ok(format!("decomposition of width {} valid", t.width))
            } else {
                Err(Failure::Verify(format!("{:?}: {:?}", chk.failure, chk.detail)))
            }
        }
        VerifyCmd::CspEquiv {
            count,
            d,
            n,
            delta_max,
            l,
            v,
        } => {
            let s = equivalence_suite(ctx.g.seed, count, d, n, delta_max, l, v, ctx.g.budget).map_err(usage)?;
            ctx.emit_json(&s)?;
            if s.budget_hits > 0 {
                return Err(Failure::Budget(format!(
                    "{} of {} trials hit the budget",
                    s.budget_hits, s.count
                )));
            }
            if s.agreed != s.count {
                let bad = s.trials.iter().find(|t| !t.agrees()).expect("a disagreeing trial");
                return Err(Failure::Verify(format!(
                    "{}/{} equivalent; first mismatch at seed {}",
                    s.agreed, s.count, bad.seed
                )));
            }
            Ok(format!("{}/{} equivalent", s.agreed, s.count))
        }
        VerifyCmd::TspStructure { input } => {
            let out: TspReductionOutput = read_json(&input)?;
            let structure = check_structure(&out).map_err(usage)?;
            if out.xc.m > 20 {
                return Err(Failure::Budget(format!("2^{} subsets", out.xc.m)));
            }
            let covers = exact_covers(&out.xc);
            let mut witness_lengths = Vec::new();
            for c in &covers {
                let w = witness_path_from_cover(&out, c).map_err(|e| Failure::Verify(e.to_string()))?;
                witness_lengths.push(w.length);
            }
            let rep = TspVerifyReport {
                structure: structure.clone(),
                covers: covers.clone(),
                witness_lengths: witness_lengths.clone(),
                target: out.alpha.total,
            };
            ctx.emit_json(&rep)?;
            if let Some(f) = structure.failures.first() {
                return Err(Failure::Verify(format!("{}: {}", f.0, f.1)));
            }
            if let Some(l) = witness_lengths.iter().find(|&&l| (l - out.alpha.total).abs() > 1e-6) {
                return Err(Failure::Verify(format!(
                    "witness length {l} vs target {}",
                    out.alpha.total
                )));
            }
            Ok(format!(
                "structure ok ({} components); {} covers, witnesses at target {:.6}",
                structure.n_components,
                covers.len(),
                out.alpha.total
            ))
        }
    }
}

fn run_export(ctx: &mut Ctx, c: ExportCmd) -> Res<String> {
    match c {
        ExportCmd::Points { input } => {
            let p: PointSet = read_json(&input)?;
            ctx.emit_points(&p)?;
            Ok(format!("{} points", p.len()))
        }
        ExportCmd::Graph { input } => {
            let g: SpannerGraph = read_json(&input)?;
            ctx.emit_graph(&g)?;
            Ok(format!("{} vertices, {} edges", g.len(), g.edges().len()))
        }
        ExportCmd::Tsplib { input, name } => {
            let out: TspReductionOutput = read_json(&input)?;
            let (body, side) = to_tsplib(&out, &name);
            ctx.emit(&body)?;
            if let Some(o) = ctx.g.out.clone() {
                let mut s = o.as_os_str().to_owned();
                s.push(".sidecar.json");
                ctx.write(Path::new(&s), &serde_json::to_string_pretty(&side).map_err(usage)?)?;
            }
            Ok(format!("{} nodes, target {:.6}", side.dimension, side.alpha.total))
        }
    }
}
