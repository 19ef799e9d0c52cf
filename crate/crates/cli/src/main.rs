//! `ahs`: command-line front end for the exact invariant calculus.
//!
//! Exit codes: 0 on success, 1 when an operator check comes back negative,
//! 2 on bad input of any kind.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use ahs_core::conformal_normalization::{
    matrix_strings, normalize_connection, normalize_from_ricci, rho_tensor, trace_curvature, CurvatureInput,
    ParsedCurvature,
};
use ahs_core::jet_obstruction::{solve_weights, verify_operator, WeightSet};
use ahs_core::rational::{frac, to_display_string, to_fraction_string, to_latex};
use ahs_core::representation::projections;
use ahs_core::term_engine::{algebraic_obstruction, expand, filter_by_tau, render, Format};
use ahs_core::{Expansion, Family, GradedLieAlgebra, Matrix, ProjectorKind, Rational, RepDescriptor, Representation};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "ahs", version, about = "Exact invariant calculus on |1|-graded geometries")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutFormat::Text, global = true)]
    format: OutFormat,
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Latex,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Text => Format::Text,
            OutFormat::Latex => Format::Latex,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a graded Lie algebra.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Expand the k-th order difference of invariant and covariant derivatives.
    Expand(ExpandArgs),
    /// Check or classify candidate invariant operators.
    #[command(subcommand)]
    Operator(OperatorCmd),
    /// Conformal normalization and related quantities.
    #[command(subcommand)]
    Conformal(ConformalCmd),
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Dimensions, basis and structure constants, e.g. `algebra info conformal(4)`.
    Info {
        /// `grassmannian(p,q)`, `conformal(m)` or `conformal(m,n)`, `lagrangian(n)`, `spinorial(n)`.
        family: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Filter {
    /// The whole difference.
    All,
    /// Terms without τ.
    Correction,
    /// Terms linear in τ.
    Linear,
    /// Terms linear in τ acting on the (k−1)-st derivative.
    Algebraic,
}

#[derive(Args)]
struct ExpandArgs {
    /// Order k of the difference.
    #[arg(long, required_unless_present = "count_only")]
    order: Option<usize>,
    #[arg(long, value_enum, default_value_t = Filter::All)]
    filter: Filter,
    /// Keep only terms with exactly this many occurrences of τ (overrides --filter).
    #[arg(long)]
    tau: Option<usize>,
    /// Print the term-count table instead of the terms.
    #[arg(long, requires = "max_order")]
    count_only: bool,
    /// Largest order in the count table.
    #[arg(long)]
    max_order: Option<usize>,
}

#[derive(Args)]
struct OperatorArgs {
    /// Dimension m of the conformal geometry.
    #[arg(long)]
    dim: usize,
    /// Signature defect n, giving conformal(m,n).
    #[arg(long, default_value_t = 0)]
    signature: usize,
    /// Representation, e.g. `density:w=-1`, `standard`, `tensor(standard,dual)`.
    #[arg(long)]
    rep: String,
    #[arg(long)]
    order: usize,
    /// `sym0`, `trace`, `alt` or `sym3_0`.
    #[arg(long)]
    projector: String,
}

#[derive(Subcommand)]
enum OperatorCmd {
    /// Decide invariance and print the curved formula; exit 1 when obstructed.
    Check(OperatorArgs),
    /// Weights of the representation family for which the operator is invariant.
    SolveWeight(OperatorArgs),
}

#[derive(Subcommand)]
enum ConformalCmd {
    /// Deformation tensor making the curvature traces vanish.
    Normalize {
        /// Curvature JSON file, `-` for standard input.
        #[arg(long)]
        input: PathBuf,
    },
    /// Rho tensor from Ricci data.
    Rho {
        #[arg(long)]
        input: PathBuf,
    },
    /// Zero-order coefficient of the conformal Laplacian.
    LaplacianCoefficient {
        #[arg(long)]
        dim: usize,
    },
}

/// A failure mapped to exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(String, ExitCode), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((doc, code)) => match emit(&cli, &doc) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("error: {}", e.0);
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {}", e.0);
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, doc: &str) -> Result<(), Failure> {
    let mut text = doc.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Algebra(AlgebraCmd::Info { family }) => algebra_info(family, cli.format),
        Command::Expand(a) => run_expand(a, cli.format),
        Command::Operator(OperatorCmd::Check(a)) => operator_check(a, cli.format),
        Command::Operator(OperatorCmd::SolveWeight(a)) => operator_solve(a, cli.format),
        Command::Conformal(ConformalCmd::Normalize { input }) => conformal_normalize(input, cli.format),
        Command::Conformal(ConformalCmd::Rho { input }) => conformal_rho(input, cli.format),
        Command::Conformal(ConformalCmd::LaplacianCoefficient { dim }) => laplacian(*dim, cli.format),
    }
}

fn ok(doc: String) -> Outcome {
    Ok((doc, ExitCode::SUCCESS))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn algebra_info(spec: &str, f: OutFormat) -> Outcome {
    let family: Family = spec.parse()?;
    let alg = GradedLieAlgebra::build(family)?;
    let d = alg.descriptor();
    let grade_labels = |g: i8| -> Vec<&str> { (0..alg.dim_grade(g)).map(|i| alg.label(g, i)).collect() };
    match f {
        OutFormat::Json => ok(serde_json::to_string_pretty(&d)?),
        OutFormat::Text => {
            let mut s = String::new();
            writeln!(s, "family: {family}")?;
            writeln!(s, "matrix size: {}", alg.matrix_size())?;
            writeln!(s, "dimensions: g-1 = {}, g0 = {}, g1 = {} (total {})", d.dims[0], d.dims[1], d.dims[2], alg.dim())?;
            for g in [-1i8, 0, 1] {
                writeln!(s, "g{g}: {}", grade_labels(g).join(" "))?;
            }
            write!(s, "nonzero structure constants: {}", d.structure_constants.len())?;
            ok(s)
        }
        OutFormat::Latex => ok(format!(
            r"\dim\mathfrak{{g}}_{{-1}} = {}, \quad \dim\mathfrak{{g}}_0 = {}, \quad \dim\mathfrak{{g}}_1 = {}",
            d.dims[0], d.dims[1], d.dims[2]
        )),
    }
}

fn count_table(max: usize, f: OutFormat) -> Outcome {
    let mut full = Vec::new();
    let mut corr = Vec::new();
    let mut lin = Vec::new();
    for k in 1..=max {
        let e = expand(k, None);
        full.push(e.len());
        corr.push(filter_by_tau(&e, 0).len());
        lin.push(filter_by_tau(&e, 1).len());
    }
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>();
    match f {
        OutFormat::Json => ok(pretty(&json!({
            "orders": (1..=max).collect::<Vec<_>>(),
            "full": full,
            "correction": corr,
            "linear_obstruction": lin,
        }))),
        OutFormat::Text => {
            let orders: Vec<String> = (1..=max).map(|k| k.to_string()).collect();
            let width = join(&full).iter().chain(&orders).map(String::len).max().unwrap_or(1);
            let row = |name: &str, v: &[String]| {
                let cells: Vec<String> = v.iter().map(|c| format!("{c:>width$}")).collect();
                format!("{name:<18} {}", cells.join(" "))
            };
            ok([
                row("order", &orders),
                row("full", &join(&full)),
                row("correction", &join(&corr)),
                row("linear obstruction", &join(&lin)),
            ]
            .join("\n"))
        }
        OutFormat::Latex => {
            let cols = "r".repeat(max);
            let line = |name: &str, v: &[String]| format!("{name} & {} \\\\", v.join(" & "));
            let orders: Vec<String> = (1..=max).map(|k| k.to_string()).collect();
            ok(format!(
                "\\begin{{tabular}}{{l{cols}}}\n{}\n\\hline\n{}\n{}\n{}\n\\end{{tabular}}",
                line("order", &orders),
                line("full", &join(&full)),
                line("correction", &join(&corr)),
                line("linear obstruction", &join(&lin)),
            ))
        }
    }
}

fn run_expand(a: &ExpandArgs, f: OutFormat) -> Outcome {
    if a.count_only {
        return count_table(a.max_order.expect("clap enforces --max-order"), f);
    }
    let k = a.order.expect("clap enforces --order");
    let e: Expansion = match (a.tau, a.filter) {
        (Some(j), _) => filter_by_tau(&expand(k, Some(j)), j),
        (None, Filter::All) => expand(k, None),
        (None, Filter::Correction) => filter_by_tau(&expand(k, Some(0)), 0),
        (None, Filter::Linear) => filter_by_tau(&expand(k, Some(1)), 1),
        (None, Filter::Algebraic) => algebraic_obstruction(k),
    };
    ok(render(&e, f.into()))
}

fn conformal_algebra(m: usize, n: usize) -> Result<Arc<GradedLieAlgebra>, Failure> {
    let family = Family::Conformal { m, n };
    family.validate()?;
    Ok(Arc::new(GradedLieAlgebra::build(family)?))
}

fn operator_setup(a: &OperatorArgs) -> Result<(Representation, ProjectorKind), Failure> {
    let alg = conformal_algebra(a.dim, a.signature)?;
    let desc: RepDescriptor = a.rep.parse()?;
    let kind: ProjectorKind = a.projector.parse()?;
    if kind.order() != a.order {
        return Err(Failure(format!("projector {kind} acts on order {}, not {}", kind.order(), a.order)));
    }
    Ok((Representation::new(alg, &desc)?, kind))
}

fn weights_text(w: &WeightSet, latex: bool) -> String {
    match w {
        WeightSet::All => "all".into(),
        WeightSet::Finite(v) if v.is_empty() => "none".into(),
        WeightSet::Finite(v) => {
            let f = if latex { to_latex } else { to_display_string };
            v.iter().map(f).collect::<Vec<_>>().join(", ")
        }
    }
}

fn operator_check(a: &OperatorArgs, f: OutFormat) -> Outcome {
    let (rep, kind) = operator_setup(a)?;
    let v = verify_operator(&rep, a.order, kind)?;
    let code = if v.invariant { ExitCode::SUCCESS } else { ExitCode::from(1) };
    let doc = match f {
        OutFormat::Json => serde_json::to_string_pretty(&v)?,
        OutFormat::Latex => v.formula_latex.clone(),
        OutFormat::Text => {
            let mut s = String::new();
            writeln!(s, "operator: {kind} of order {} on {}", a.order, rep.descriptor)?;
            writeln!(s, "invariant: {}", if v.invariant { "yes" } else { "no" })?;
            writeln!(s, "invariant weights: {}", weights_text(&v.weights, false))?;
            if let Some(w) = &v.obstruction_witness {
                writeln!(
                    s,
                    "obstruction witness: Z = {}, psi index {}, row {}, value {}",
                    w.z,
                    w.psi_index,
                    w.row,
                    to_display_string(&w.value)
                )?;
            }
            for (name, c) in &v.coefficients {
                writeln!(s, "coefficient {name}: {}", to_display_string(&ahs_core::rational::parse(c)?))?;
            }
            write!(s, "formula: {}", v.formula_latex)?;
            s
        }
    };
    Ok((doc, code))
}

fn operator_solve(a: &OperatorArgs, f: OutFormat) -> Outcome {
    let (rep, kind) = operator_setup(a)?;
    let phi = projections(&rep.algebra, a.order, kind, rep.carrier_dim)?;
    let w = solve_weights(&rep.algebra, &rep.descriptor, a.order, &phi)?;
    match f {
        OutFormat::Json => ok(pretty(&json!({ "weights": w }))),
        OutFormat::Latex => ok(format!("w \\in \\{{{}\\}}", weights_text(&w, true))),
        OutFormat::Text => ok(format!("w = {}", weights_text(&w, false))),
    }
}

fn read_input(path: &PathBuf) -> Result<CurvatureInput, Failure> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?
    };
    Ok(CurvatureInput::from_json(&text)?)
}

fn matrix_text(m: &Matrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows()).map(|r| m.row(r).iter().map(to_display_string).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|r| r.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn matrix_latex(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows()).map(|r| m.row(r).iter().map(to_latex).collect::<Vec<_>>().join(" & ")).collect();
    format!("\\begin{{pmatrix}}{}\\end{{pmatrix}}", rows.join(r" \\ "))
}

fn conformal_normalize(input: &PathBuf, f: OutFormat) -> Outcome {
    let doc = read_input(input)?;
    let alg = conformal_algebra(doc.m, 0)?;
    let norm = match doc.resolve(&alg)? {
        ParsedCurvature::Ricci { ricci, .. } => normalize_from_ricci(&alg, &ricci)?,
        ParsedCurvature::Full(k) => normalize_connection(&alg, &k)?,
    };
    let g = &norm.gamma.gamma;
    match f {
        OutFormat::Json => ok(serde_json::to_string_pretty(&norm.report())?),
        OutFormat::Latex => ok(format!("\\Gamma = {}", matrix_latex(g))),
        OutFormat::Text => {
            let mut s = String::new();
            writeln!(s, "Gamma:\n{}", matrix_text(g))?;
            writeln!(s, "deformed trace max |entry|: {}", to_display_string(&norm.deformed_trace_max_abs))?;
            if let Some(v) = norm.deformed_curvature_vanishes {
                writeln!(s, "deformed curvature vanishes: {v}")?;
            }
            write!(s, "unique: {} (rank {} of {})", norm.unique, norm.rank, norm.unknowns)?;
            ok(s)
        }
    }
}

fn conformal_rho(input: &PathBuf, f: OutFormat) -> Outcome {
    let doc = read_input(input)?;
    let alg = conformal_algebra(doc.m, 0)?;
    let (ricci, scalar) = match doc.resolve(&alg)? {
        ParsedCurvature::Ricci { ricci, scalar } => (ricci, scalar),
        ParsedCurvature::Full(k) => {
            let ricci = trace_curvature(&alg, &k.kappa_0)?;
            let scalar = ricci.trace();
            (ricci, scalar)
        }
    };
    let rho = rho_tensor(&alg, &ricci, &scalar)?;
    match f {
        OutFormat::Json => ok(pretty(&json!({
            "gamma": matrix_strings(&rho.gamma),
            "ricci": matrix_strings(&ricci),
            "scalar": to_fraction_string(&scalar),
        }))),
        OutFormat::Latex => ok(format!("\\Gamma = {}", matrix_latex(&rho.gamma))),
        OutFormat::Text => ok(format!("Gamma:\n{}\nscalar curvature: {}", matrix_text(&rho.gamma), to_display_string(&scalar))),
    }
}

fn laplacian(m: usize, f: OutFormat) -> Outcome {
    if m < 3 {
        return Err(Failure("the conformal Laplacian needs dimension at least 3".into()));
    }
    let alg = conformal_algebra(m, 0)?;
    let w: Rational = frac(m as i64 - 2, 2);
    let rep = Representation::new(alg, &RepDescriptor::Density(w.clone()))?;
    let v = verify_operator(&rep, 2, ProjectorKind::Trace)?;
    if !v.invariant {
        return Err(Failure(format!("trace operator is not invariant at w = {}", to_display_string(&w))));
    }
    let c = ahs_core::rational::parse(v.coefficients.get("R").ok_or_else(|| Failure("no scalar-curvature coefficient".into()))?)?;
    match f {
        OutFormat::Json => ok(pretty(&json!({
            "m": m,
            "weight": to_fraction_string(&w),
            "coefficient": to_fraction_string(&c),
            "formula_latex": v.formula_latex,
        }))),
        OutFormat::Latex => ok(v.formula_latex),
        OutFormat::Text => ok(to_display_string(&c)),
    }
}
