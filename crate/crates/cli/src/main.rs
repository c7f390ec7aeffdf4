use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mtcalc::cardy::{
    build_cardy_case, check_modular_invariance, check_triple, triple_from_json, triple_to_json,
    Brane,
};
use mtcalc::double::build_double;
use mtcalc::dsl::eval_str;
use mtcalc::frobenius::{algebra_from_json, check_algebra, check_frobenius, check_symmetric, Host};
use mtcalc::modular::{check_modular_relations, modular_data, s_action};
use mtcalc::sl2z::check_sl2z;
use mtcalc::suite::run_all;
use mtcalc::validate::validate_category;
use mtcalc::{builtins, load_category, CategoryData, CheckReport, Error, HomMorphism};

/// println! that ignores a closed stdout.
macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

const SCHEMA: &str = include_str!("../report.schema.json");

#[derive(Parser)]
#[command(name = "mtcalc", version, about = "Modular tensor category calculator")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Category data file (JSON).
    #[arg(long, global = true, conflicts_with = "builtin")]
    category: Option<PathBuf>,
    /// Built-in category: trivial, fibonacci, ising, z3.
    #[arg(long, global = true)]
    builtin: Option<String>,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for independent checks.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the category axioms.
    Validate {
        /// Category file; same as --category.
        file: Option<PathBuf>,
    },
    /// Print labels, dimensions, twists and global data.
    Info {
        /// Describe the doubled category instead.
        #[arg(long)]
        double: bool,
    },
    /// Print the S and T matrices.
    Smatrix,
    /// Check the modular relations between S and T.
    CheckRelations,
    /// Check an algebra presentation (JSON) against the algebra, Frobenius and symmetry axioms.
    CheckFrobenius { file: PathBuf },
    /// Check modular invariance of a closed algebra presented in the double.
    CheckModularInvariance { file: PathBuf },
    /// Construct the Cardy-case triple for a boundary object and print it as JSON.
    BuildCardy {
        /// Boundary object, e.g. "sigma" or "1+2*tau".
        #[arg(long)]
        brane: String,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check a Cardy triple (JSON) written by build-cardy.
    CheckCardy { file: PathBuf },
    /// Check S·α = β·S on every external pair.
    CheckSl2z,
    /// Evaluate a diagram expression, e.g. "(trace (twist tau))".
    Eval { expr: String },
    /// Run every checker.
    RunAll,
    /// Print the JSON schema of check reports.
    Schema,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads.max(1))
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Io(_) | Error::Parse(_) | Error::Schema(_) | Error::Usage(_) => 2,
                _ => 1,
            })
        }
    }
}

fn category(g: &Global, file: Option<&Path>) -> Result<CategoryData, Error> {
    match (file.or(g.category.as_deref()), &g.builtin) {
        (Some(p), _) => load_category(p),
        (None, Some(name)) => builtins::builtin(name),
        (None, None) => Err(Error::Usage(
            "no category given; use --category PATH or --builtin NAME".into(),
        )),
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let src = fs::read_to_string(path)?;
    serde_json::from_str(&src).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit(g: &Global, reports: &[CheckReport]) -> bool {
    if g.json {
        outln!(
            "{}",
            serde_json::to_string_pretty(reports).expect("reports serialize")
        );
    } else {
        for r in reports {
            outln!("{}", r.line());
            if !r.parts.is_empty() {
                for l in r.leaves() {
                    outln!("  {}", l.line());
                }
            }
        }
    }
    reports.iter().all(|r| r.pass)
}

fn cplx(v: mtcalc::numeric::C64) -> Value {
    json!([v.re, v.im])
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let g = &cli.global;
    match &cli.cmd {
        Cmd::Schema => {
            outln!("{SCHEMA}");
            Ok(true)
        }
        Cmd::Validate { file } => {
            let cat = category(g, file.as_deref())?;
            Ok(emit(g, &[validate_category(&cat, g.tol)]))
        }
        Cmd::Info { double } => {
            let base = category(g, None)?;
            let d;
            let cat = if *double {
                d = build_double(&base);
                &d.cat
            } else {
                &base
            };
            info(g, cat);
            Ok(true)
        }
        Cmd::Smatrix => {
            let cat = category(g, None)?;
            smatrix(g, &cat);
            Ok(true)
        }
        Cmd::CheckRelations => {
            let cat = category(g, None)?;
            Ok(emit(g, &[check_modular_relations(&cat, g.tol)]))
        }
        Cmd::CheckSl2z => {
            let cat = category(g, None)?;
            Ok(emit(g, &[check_sl2z(&cat, g.tol)]))
        }
        Cmd::CheckFrobenius { file } => {
            let base = category(g, None)?;
            let v = read_json(file)?;
            let d = build_double(&base);
            let host = v.get("host").and_then(Value::as_str).unwrap_or("base");
            let cat = if host == "double" { &d.cat } else { &base };
            let a = algebra_from_json(cat, &v)?;
            let mut reports = vec![
                check_algebra(cat, &a, g.tol),
                check_frobenius(cat, &a, g.tol),
            ];
            if a.phi.is_some() {
                reports.push(check_symmetric(cat, &a, g.tol));
            }
            Ok(emit(g, &reports))
        }
        Cmd::CheckModularInvariance { file } => {
            let base = category(g, None)?;
            let d = build_double(&base);
            let a = algebra_from_json(&d.cat, &read_json(file)?)?;
            if a.host != Host::Double {
                return Err(Error::Schema(
                    "modular invariance needs an algebra with host \"double\"".into(),
                ));
            }
            Ok(emit(g, &[check_modular_invariance(&d, &a, g.tol)]))
        }
        Cmd::BuildCardy { brane, out } => {
            let base = category(g, None)?;
            let d = build_double(&base);
            let b = Brane::parse(&base, brane)?;
            let t = build_cardy_case(&d, &b)?;
            let text = serde_json::to_string_pretty(&triple_to_json(&d, &t)?).expect("json");
            match out {
                Some(p) => fs::write(p, text + "\n")?,
                None => outln!("{text}"),
            }
            Ok(true)
        }
        Cmd::CheckCardy { file } => {
            let base = category(g, None)?;
            let d = build_double(&base);
            let t = triple_from_json(&d, &read_json(file)?)?;
            Ok(emit(g, &[check_triple(&d, &t, g.tol)]))
        }
        Cmd::Eval { expr } => {
            let cat = category(g, None)?;
            let h = eval_str(&cat, expr)?;
            print_morphism(g, &cat, &h);
            Ok(true)
        }
        Cmd::RunAll => {
            let cat = category(g, None)?;
            Ok(emit(g, &run_all(&cat, g.tol)))
        }
    }
}

fn info(g: &Global, cat: &CategoryData) {
    let labels: Vec<Value> = (0..cat.rank())
        .map(|a| {
            json!({
                "name": cat.name_of(a),
                "dual": cat.name_of(cat.dual(a)),
                "dim": cat.dim(a),
                "theta": cplx(cat.theta(a)),
                "fs": cat.fs(a),
            })
        })
        .collect();
    let v = json!({
        "name": cat.name,
        "rank": cat.rank(),
        "labels": labels,
        "dsq": cat.dsq(),
        "p_plus": cplx(cat.p_plus()),
        "p_minus": cplx(cat.p_minus()),
        "d": cplx(cat.big_d()),
    });
    if g.json {
        outln!("{}", serde_json::to_string_pretty(&v).expect("json"));
        return;
    }
    outln!("{}: rank {}, D^2 = {:.12}", cat.name, cat.rank(), cat.dsq());
    outln!(
        "p+ = {:.6}, p- = {:.6}, D = {:.6}",
        cat.p_plus(),
        cat.p_minus(),
        cat.big_d()
    );
    for a in 0..cat.rank() {
        outln!(
            "  {:<10} dual {:<10} dim {:<10.6} theta {:.6}  fs {:+}",
            cat.name_of(a),
            cat.name_of(cat.dual(a)),
            cat.dim(a),
            cat.theta(a),
            cat.fs(a)
        );
    }
}

fn smatrix(g: &Global, cat: &CategoryData) {
    let s = s_action(cat, cat.unit());
    let md = modular_data(cat);
    let rows: Vec<Vec<Value>> = (0..s.nrows())
        .map(|i| (0..s.ncols()).map(|j| cplx(s[(i, j)])).collect())
        .collect();
    let t: Vec<Value> = (0..cat.rank()).map(|a| cplx(cat.theta(a))).collect();
    if g.json {
        let v = json!({ "labels": md.labels, "s": rows, "t": t, "see": cplx(md.see) });
        outln!("{}", serde_json::to_string_pretty(&v).expect("json"));
        return;
    }
    outln!("S (rows, columns: {})", md.labels.join(" "));
    for i in 0..s.nrows() {
        let row: Vec<String> = (0..s.ncols()).map(|j| fmt_c(s[(i, j)])).collect();
        outln!("  {}", row.join("  "));
    }
    outln!(
        "T = diag({})",
        (0..cat.rank())
            .map(|a| fmt_c(cat.theta(a)))
            .collect::<Vec<_>>()
            .join(", ")
    );
}

fn fmt_c(v: mtcalc::numeric::C64) -> String {
    let re = if v.re.abs() < 5e-13 { 0.0 } else { v.re };
    let im = if v.im.abs() < 5e-13 { 0.0 } else { v.im };
    format!("{re:+.9}{im:+.9}i")
}

fn print_morphism(g: &Global, cat: &CategoryData, h: &HomMorphism) {
    let names = |w: &[usize]| {
        w.iter()
            .map(|&a| cat.name_of(a).to_string())
            .collect::<Vec<_>>()
    };
    if let Some(v) = h.scalar_value() {
        if g.json {
            outln!("{}", json!({ "scalar": cplx(v) }));
        } else {
            outln!("{}", fmt_c(v));
        }
        return;
    }
    let blocks: Vec<Value> = h
        .blocks
        .iter()
        .map(|(&c, m)| {
            let rows: Vec<Vec<Value>> = (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| cplx(m[(i, j)])).collect())
                .collect();
            json!({ "charge": cat.name_of(c), "matrix": rows })
        })
        .collect();
    if g.json {
        outln!(
            "{}",
            json!({ "src": names(&h.src), "tgt": names(&h.tgt), "blocks": blocks })
        );
        return;
    }
    outln!("{} -> {}", names(&h.src).join(" "), names(&h.tgt).join(" "));
    for (&c, m) in &h.blocks {
        outln!("  charge {}:", cat.name_of(c));
        for i in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols()).map(|j| fmt_c(m[(i, j)])).collect();
            outln!("    {}", row.join("  "));
        }
    }
}
