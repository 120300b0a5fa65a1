//! Command-line front end: validates category files, certifies the plaquette
//! operator, exports operators and computes spectra.
//!
//! Every check is printed as one record per line. The process exits with 0
//! when every check passed, 1 when a check failed and 2 on errors, which are
//! written to stderr as a JSON record with a stable `kind`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use stringnet::category::builtins;
use stringnet::category::io::load_category;
use stringnet::category::validate::{check_tetrahedral, tetra_admissible, validate_all};
use stringnet::certify::certify_all;
use stringnet::hamiltonian::plaquette::plaquette_block;
use stringnet::hamiltonian::{
    assemble_hamiltonian, AssembleOptions, DanglingPolicy, Hamiltonian, LoopSum, Sector, SparseOperator,
};
use stringnet::lattice::{build_patch, Boundary, HoneycombPatch};
use stringnet::spectrum::{eigensolve, Method};
use stringnet::string_op::{commutator_residual, string_operator, unit_omegas, StringPath};
use stringnet::{Category, Error, Exec, Label, Result, ValidationReport};

#[derive(Parser)]
#[command(name = "stringnet", version, about = "Generalized Levin-Wen string-net models")]
struct Cli {
    /// Absolute tolerance for residual checks.
    #[arg(long, global = true, env = "STRINGNET_TOL", default_value_t = stringnet::DEFAULT_TOL)]
    tol: f64,

    /// Record format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Run every sweep on the calling thread.
    #[arg(long, global = true)]
    serial: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Fusion rules, dimensions, pentagon, unitarity and mirror checks.
    Validate(CategoryArg),
    /// Tetrahedral symmetry of the F-symbols and of the fusion rules.
    Tetra(CategoryArg),
    /// Hermiticity, idempotency, commutativity and Levin-Wen agreement of B_p.
    Certify(CategoryArg),
    /// One block of B_p (or B_p^s) for fixed external legs.
    BuildPlaquette(PlaquetteArgs),
    /// The Hamiltonian of a honeycomb patch.
    Assemble(AssembleArgs),
    /// Lowest eigenpairs of the Hamiltonian of a patch.
    Spectrum(SpectrumArgs),
    /// A closed string operator along a vertex path.
    StringOp(StringArgs),
}

#[derive(Args)]
struct CategoryArg {
    /// Category file, or `builtin:<name>`.
    #[arg(long, short)]
    category: String,
}

#[derive(Args)]
struct PlaquetteArgs {
    #[command(flatten)]
    category: CategoryArg,
    /// Six external legs a,b,c,d,e,f. Label names take precedence over indices.
    #[arg(long)]
    ext: String,
    /// A single loop label instead of the weighted sum.
    #[arg(long)]
    s: Option<String>,
    /// Matrix Market output for the block.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PatchArgs {
    #[command(flatten)]
    category: CategoryArg,
    /// Patch size as ROWSxCOLS.
    #[arg(long, default_value = "1x1")]
    patch: String,
    /// open or torus.
    #[arg(long, default_value = "open")]
    boundary: String,
    /// all or branching-valid.
    #[arg(long, default_value = "branching-valid")]
    sector: String,
    /// free, vacuum, or a comma list of labels for the dangling edges.
    #[arg(long, default_value = "vacuum")]
    dangling: String,
    /// Largest configuration space to enumerate.
    #[arg(long, default_value_t = 1 << 24)]
    cap: u128,
}

#[derive(Args)]
struct AssembleArgs {
    #[command(flatten)]
    patch: PatchArgs,
    /// Matrix Market output for H.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    patch: PatchArgs,
    /// dense or iterative.
    #[arg(long, default_value = "dense")]
    method: String,
    /// Number of eigenpairs.
    #[arg(long, short, default_value_t = 8)]
    k: usize,
    /// Matrix Market output for the eigenvectors.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StringArgs {
    #[command(flatten)]
    patch: PatchArgs,
    /// Closed path as a comma list of vertex indices.
    #[arg(long, conflicts_with = "plaquette")]
    path: Option<String>,
    /// Use the boundary of this plaquette as the path.
    #[arg(long)]
    plaquette: Option<usize>,
    /// String label (name or index).
    #[arg(long)]
    s: String,
    /// Matrix Market output for the operator.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

struct Ctx {
    tol: f64,
    format: Format,
    exec: Exec,
    out: Vec<String>,
    passed: bool,
}

impl Ctx {
    fn report(&mut self, rep: &ValidationReport) {
        self.passed &= rep.passed;
        self.out.push(match self.format {
            Format::Json => rep.to_json_line(),
            Format::Text => rep.to_string(),
        });
    }

    fn record(&mut self, value: serde_json::Value) {
        self.out.push(value.to_string());
    }
}

fn load(arg: &CategoryArg) -> Result<Category> {
    match arg.category.strip_prefix("builtin:") {
        Some(name) => builtins::by_name(name).ok_or_else(|| Error::Parse(format!("unknown built-in `{name}`"))),
        None => load_category(&arg.category),
    }
}

fn parse_list<T>(text: &str, mut f: impl FnMut(&str) -> Result<T>) -> Result<Vec<T>> {
    text.split(',').filter(|s| !s.trim().is_empty()).map(|s| f(s.trim())).collect()
}

fn parse_patch(text: &str, boundary: &str) -> Result<HoneycombPatch> {
    let (r, c) = text.split_once(['x', 'X']).ok_or_else(|| Error::Parse(format!("patch `{text}` is not ROWSxCOLS")))?;
    let dim = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad patch size `{text}`")));
    build_patch(dim(r)?, dim(c)?, boundary.parse::<Boundary>()?)
}

fn parse_dangling(cat: &Category, text: &str) -> Result<DanglingPolicy> {
    match text {
        "free" => Ok(DanglingPolicy::Free),
        "vacuum" => Ok(DanglingPolicy::Vacuum),
        list => Ok(DanglingPolicy::Labels(parse_list(list, |s| cat.parse_label(s))?)),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn labels_json(labels: &[Label]) -> Vec<usize> {
    labels.iter().map(|l| l.idx()).collect()
}

fn assemble(ctx: &Ctx, cat: &Category, args: &PatchArgs) -> Result<(HoneycombPatch, Hamiltonian)> {
    let patch = parse_patch(&args.patch, &args.boundary)?;
    let mut opts = AssembleOptions::new(args.sector.parse::<Sector>()?, parse_dangling(cat, &args.dangling)?);
    opts.cap = args.cap;
    opts.exec = ctx.exec;
    let h = assemble_hamiltonian(cat, &patch, &opts)?;
    Ok((patch, h))
}

fn hermiticity(ctx: &mut Ctx, op: &SparseOperator, check: &str) {
    let mut rep = ValidationReport::new(check, ctx.tol);
    rep.record(Vec::new(), op.hermiticity_residual(), "max |A - A^dagger|");
    ctx.report(&rep);
}

fn run(ctx: &mut Ctx, command: &Command) -> Result<()> {
    match command {
        Command::Validate(arg) => {
            let cat = load(arg)?;
            for rep in validate_all(&cat, ctx.tol) {
                ctx.report(&rep);
            }
        }
        Command::Tetra(arg) => {
            let cat = load(arg)?;
            if cat.has_f_data() {
                ctx.report(&check_tetrahedral(&cat, ctx.tol));
            }
            ctx.report(&tetra_admissible(cat.ring()));
        }
        Command::Certify(arg) => {
            let cat = load(arg)?;
            for rep in certify_all(&cat, ctx.tol, ctx.exec)? {
                ctx.report(&rep);
            }
        }
        Command::BuildPlaquette(args) => {
            let cat = load(&args.category)?;
            if !cat.has_f_data() {
                return Err(Error::Structure(format!("category `{}` has no F-symbols", cat.name())));
            }
            let ext: Vec<Label> = parse_list(&args.ext, |s| cat.parse_label(s))?;
            let ext: [Label; 6] = ext
                .try_into()
                .map_err(|v: Vec<Label>| Error::Parse(format!("expected 6 external legs, got {}", v.len())))?;
            let sum = match &args.s {
                Some(s) => LoopSum::Single(cat.parse_label(s)?),
                None => LoopSum::Weighted,
            };
            let block = plaquette_block(&cat, &ext, sum);
            let op = SparseOperator::from_dense(&block.dense())?;
            if let Some(path) = &args.out {
                write_file(path, &op.to_matrix_market())?;
            }
            ctx.record(json!({
                "block": "plaquette",
                "ext": labels_json(&ext),
                "s": args.s.as_ref().map(|s| cat.parse_label(s).map(|l| l.idx())).transpose()?,
                "dim": op.dim(),
                "nnz": op.nnz(),
                "internal": block.configs.iter().map(|c| labels_json(c)).collect::<Vec<_>>(),
            }));
            hermiticity(ctx, &op, "block_hermiticity");
        }
        Command::Assemble(args) => {
            let cat = load(&args.patch.category)?;
            let (patch, h) = assemble(ctx, &cat, &args.patch)?;
            if let Some(path) = &args.out {
                h.op.write_matrix_market(path)?;
            }
            ctx.record(json!({
                "operator": "hamiltonian",
                "vertices": patch.num_vertices(),
                "edges": patch.num_edges(),
                "plaquettes": patch.num_plaquettes(),
                "dim": h.op.dim(),
                "nnz": h.op.nnz(),
            }));
            hermiticity(ctx, &h.op, "hamiltonian_hermiticity");
        }
        Command::Spectrum(args) => {
            let cat = load(&args.patch.category)?;
            let (_, h) = assemble(ctx, &cat, &args.patch)?;
            let res = eigensolve(&h.op, args.k, args.method.parse::<Method>()?)?;
            if let Some(path) = &args.out {
                write_file(path, &res.eigenvectors_matrix_market())?;
            }
            ctx.out.push(res.to_json_line());
            let mut rep =
                ValidationReport::new("eigen_residuals", stringnet::spectrum::RESIDUAL_TOL * h.op.norm_inf().max(1.0));
            for (i, &r) in res.residuals.iter().enumerate() {
                rep.record(vec![i], r, "||H x - lambda x||");
            }
            ctx.report(&rep);
        }
        Command::StringOp(args) => {
            let cat = load(&args.patch.category)?;
            let (patch, h) = assemble(ctx, &cat, &args.patch)?;
            let path = match (&args.path, args.plaquette) {
                (Some(list), _) => {
                    let vertices = parse_list(list, |s| {
                        s.parse::<usize>().map_err(|_| Error::Parse(format!("bad vertex index `{s}`")))
                    })?;
                    StringPath::from_vertices(&patch, &vertices)?
                }
                (None, Some(p)) => StringPath::hexagon(&patch, p)?,
                (None, None) => return Err(Error::Path("give --path or --plaquette".into())),
            };
            let s = cat.parse_label(&args.s)?;
            let w = string_operator(&cat, &patch, &h.basis, &path, s, &unit_omegas(path.len()), ctx.exec)?;
            if let Some(out) = &args.out {
                w.write_matrix_market(out)?;
            }
            ctx.record(json!({
                "operator": "string",
                "s": s.idx(),
                "vertices": path.steps().iter().map(|st| st.vertex).collect::<Vec<_>>(),
                "cases": path.cases().iter().map(|c| c.tag()).collect::<Vec<_>>(),
                "dim": w.dim(),
                "nnz": w.nnz(),
            }));
            let mut rep = ValidationReport::new("string_commutes_with_h", ctx.tol);
            rep.record(Vec::new(), commutator_residual(&w, &h.op)?, "||[W, H]||_inf");
            ctx.report(&rep);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ctx = Ctx {
        tol: cli.tol,
        format: cli.format,
        exec: if cli.serial { Exec::Serial } else { Exec::default() },
        out: Vec::new(),
        passed: true,
    };
    let result = run(&mut ctx, &cli.command);
    let mut stdout = std::io::stdout().lock();
    for line in &ctx.out {
        let _ = writeln!(stdout, "{line}");
    }
    match result {
        Ok(()) if ctx.passed => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
