//! Command-line front end: runs identity suites and prints algebra and
//! module data.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use loopwitt::coeffalg::BPresentationSpec;
use loopwitt::syntax::{format_elem, parse_elem};
use loopwitt::{
    build_irrep, BElem, BPresentation, Degree, DominantWeight, GaussRat, IdentityReport, LoopElem,
    Matrix, RunConfig, TensorModule, Validated,
};

#[derive(Parser)]
#[command(
    name = "loopwitt",
    version,
    about = "Exact checks for loop-Witt algebras and their tensor modules"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for JSON reports.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Restricts the run to the named suite; repeatable.
    #[arg(long = "suite", global = true)]
    suites: Vec<String>,
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Runs every configured suite and reports failures.
    VerifyAll,
    /// Prints the bracket of two elements, e.g. `bracket "D(1;1)*1" "D(1;-1)*1"`.
    Bracket {
        x: String,
        y: String,
        /// Ambient rank; inferred from the first degree when omitted.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Dimension, weight table and optionally the E_ij matrices of V(μ, c).
    IrrepInfo {
        /// Comma-separated dominant weight, e.g. `1,1`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu: Option<Vec<u32>>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        /// Includes every E_ij matrix.
        #[arg(long)]
        matrices: bool,
    },
    /// Slice table and sample action matrices of the configured module, as JSON.
    ModuleInfo,
    /// Runs the configured suites and writes every report to `--out`.
    Export,
}

/// A failure with its exit code: 1 for failed suites, 2 for bad input.
struct Exit(u8, String);

fn input_error(msg: impl std::fmt::Display) -> Exit {
    Exit(2, msg.to_string())
}

fn load_config(g: &Global) -> Result<RunConfig, Exit> {
    let mut cfg = match &g.config {
        Some(path) => {
            let src = fs::read_to_string(path)
                .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
            RunConfig::from_json(&src)
                .map_err(|e| input_error(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if !g.suites.is_empty() {
        cfg.suites = g.suites.clone();
    }
    Ok(cfg)
}

fn validated(g: &Global) -> Result<Validated, Exit> {
    load_config(g)?.validate().map_err(input_error)
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<(), Exit> {
    fs::create_dir_all(dir).map_err(|e| input_error(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, format!("{body}\n"))
        .map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write_reports(dir: &Path, reports: &[IdentityReport]) -> Result<(), Exit> {
    for r in reports {
        write_file(dir, &format!("{}.json", r.suite), &to_json(r))?;
    }
    let summary: Vec<Value> = reports
        .iter()
        .map(|r| json!({"suite": r.suite, "cases": r.cases, "failures": r.failures.len()}))
        .collect();
    write_file(dir, "summary.json", &to_json(&summary))
}

fn suite_outcome(reports: &[IdentityReport]) -> Result<(), Exit> {
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.suite.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Exit(1, format!("failing suites: {}", failed.join(", "))))
    }
}

fn print_reports(reports: &[IdentityReport], as_json: bool) {
    if as_json {
        println!("{}", to_json(&reports));
        return;
    }
    for r in reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!(
            "{:<20} {status}  {} cases, {} failures, {} ms",
            r.suite,
            r.cases,
            r.failures.len(),
            r.wall_time_ms
        );
        for f in r.failures.iter().take(3) {
            println!("    {}", f.spec);
            for e in f.residual_nonzero_entries.iter().take(3) {
                println!("        {e}");
            }
        }
    }
}

fn verify_all(g: &Global) -> Result<(), Exit> {
    let v = validated(g)?;
    let reports = v.run();
    print_reports(&reports, g.json);
    if let Some(dir) = &g.out {
        write_reports(dir, &reports)?;
    }
    suite_outcome(&reports)
}

fn export(g: &Global) -> Result<(), Exit> {
    let dir = g
        .out
        .as_ref()
        .ok_or_else(|| input_error("export requires --out <dir>"))?;
    let v = validated(g)?;
    let reports = v.run();
    write_reports(dir, &reports)?;
    write_file(dir, "config.json", &to_json(v.config()))?;
    write_file(
        dir,
        "irrep.json",
        &to_json(&irrep_json(v.module().rep(), true)),
    )?;
    write_file(
        dir,
        "module.json",
        &to_json(&module_json(v.module()).map_err(input_error)?),
    )?;
    if !g.json {
        println!("wrote {} reports to {}", reports.len(), dir.display());
    } else {
        println!("{}", to_json(&reports));
    }
    suite_outcome(&reports)
}

fn bracket(g: &Global, x: &str, y: &str, n: Option<usize>) -> Result<(), Exit> {
    let pres = match &g.config {
        Some(_) => load_config(g)?.b.build().map_err(input_error)?,
        None => BPresentation::trivial(),
    };
    let parse = |label: &str, src: &str, rank: Option<usize>| -> Result<LoopElem, Exit> {
        parse_elem(src, rank, &pres).map_err(|e| input_error(format!("{label}: {e}")))
    };
    let a = parse("first operand", x, n)?;
    let b = parse("second operand", y, n.or(Some(a.rank())))?;
    let z = a.bracket(&b).map_err(input_error)?;
    if g.json {
        let out = json!({"x": format_elem(&a), "y": format_elem(&b), "bracket": format_elem(&z)});
        println!("{}", to_json(&out));
    } else {
        println!("{}", format_elem(&z));
    }
    Ok(())
}

fn matrix_json(m: &Matrix) -> Value {
    Value::from(
        (0..m.rows())
            .map(|i| {
                Value::from(
                    (0..m.cols())
                        .map(|j| m.get(i, j).to_exact_string())
                        .collect::<Vec<_>>(),
                )
            })
            .collect::<Vec<_>>(),
    )
}

fn irrep_json(rep: &loopwitt::Irrep, matrices: bool) -> Value {
    let weights: Vec<Value> = rep
        .weight_table()
        .into_iter()
        .map(|(w, mult)| json!({"weight": w, "multiplicity": mult}))
        .collect();
    let mut out = json!({
        "n": rep.rank(),
        "mu": rep.mu().coords(),
        "c": rep.c().to_exact_string(),
        "dim": rep.dim(),
        "weights": weights,
    });
    if matrices {
        let mut mats = serde_json::Map::new();
        for i in 0..rep.rank() {
            for j in 0..rep.rank() {
                mats.insert(format!("E{}{}", i + 1, j + 1), matrix_json(rep.e(i, j)));
            }
        }
        out["matrices"] = Value::Object(mats);
    }
    out
}

fn irrep_info(
    g: &Global,
    mu: Option<Vec<u32>>,
    n: Option<usize>,
    c: Option<String>,
    matrices: bool,
) -> Result<(), Exit> {
    let cfg = load_config(g)?;
    let (mu, n) = match (mu, n) {
        (Some(mu), Some(n)) => (mu, n),
        (Some(mu), None) => {
            let n = mu.len() + 1;
            (mu, n)
        }
        (None, Some(n)) if g.config.is_none() => (vec![0; n.saturating_sub(1)], n),
        (None, Some(n)) => (cfg.mu.clone(), n),
        (None, None) => (cfg.mu.clone(), cfg.n),
    };
    let c: GaussRat = c
        .unwrap_or(cfg.c)
        .parse()
        .map_err(|e| input_error(format!("c: {e}")))?;
    let rep = build_irrep(&DominantWeight::new(mu), &c, n).map_err(input_error)?;
    let info = irrep_json(&rep, matrices);
    if g.json {
        println!("{}", to_json(&info));
        return Ok(());
    }
    println!(
        "n = {}, mu = {:?}, c = {}",
        rep.rank(),
        rep.mu().coords(),
        rep.c()
    );
    println!("dim = {}", rep.dim());
    println!("weight spaces:");
    for (w, mult) in rep.weight_table() {
        println!("    ({}) x {mult}", w.join(", "));
    }
    if matrices {
        for i in 0..n {
            for j in 0..n {
                println!("E{}{}:", i + 1, j + 1);
                let m = rep.e(i, j);
                for r in 0..m.rows() {
                    let row: Vec<String> = (0..m.cols())
                        .map(|k| m.get(r, k).to_exact_string())
                        .collect();
                    println!("    [{}]", row.join(", "));
                }
            }
        }
    }
    Ok(())
}

/// Matrix of `x` from slice 0 to the slice it lands in.
fn sample(
    module: &TensorModule,
    label: String,
    x: &LoopElem,
    shift: Degree,
) -> loopwitt::Result<Value> {
    let src = Degree::zero(module.rank());
    let m = module.op_matrix(x, std::slice::from_ref(&src), std::slice::from_ref(&shift))?;
    Ok(json!({"element": label, "src": src.0, "dst": shift.0, "matrix": matrix_json(&m)}))
}

fn module_json(module: &TensorModule) -> loopwitt::Result<Value> {
    let n = module.rank();
    let pres = module.presentation();
    let one = BElem::one(pres);
    let slices: Vec<Value> = module
        .weight_decomposition()
        .into_iter()
        .map(|(m, d)| json!({"m": m.0, "dim": d}))
        .collect();
    let mut samples = Vec::new();
    for i in 0..n {
        let zero = Degree::zero(n);
        let d = LoopElem::d_basis(i, zero.clone(), one.clone());
        samples.push(sample(module, format_elem(&d), &d, zero)?);
        let unit = Degree::unit(n, i);
        let t = LoopElem::t(unit.clone(), one.clone());
        samples.push(sample(module, format_elem(&t), &t, unit.clone())?);
        for j in 0..n {
            let dj = LoopElem::d_basis(j, unit.clone(), one.clone());
            samples.push(sample(module, format_elem(&dj), &dj, unit.clone())?);
        }
    }
    Ok(json!({
        "n": n,
        "window_radius": module.window().radius(),
        "slices": slices,
        "alpha": module.alpha().iter().map(GaussRat::to_exact_string).collect::<Vec<_>>(),
        "mu": module.rep().mu().coords(),
        "c": module.rep().c().to_exact_string(),
        "B": BPresentationSpec::from(&**pres),
        "samples": samples,
    }))
}

fn module_info(g: &Global) -> Result<(), Exit> {
    let v = validated(g)?;
    let out = module_json(v.module()).map_err(input_error)?;
    println!("{}", to_json(&out));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match cli.command {
        Command::VerifyAll => verify_all(g),
        Command::Bracket { x, y, n } => bracket(g, &x, &y, n),
        Command::IrrepInfo { mu, n, c, matrices } => irrep_info(g, mu, n, c, matrices),
        Command::ModuleInfo => module_info(g),
        Command::Export => export(g),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
