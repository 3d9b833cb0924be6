use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use normtrace_core::agcode::{basis_for, weight_table, WeightFamily, COMBO_MONOMIALS};
use normtrace_core::census::{
    full_census, intersect_count, special_case_sweep, Family, Prediction, Sampling,
};
use normtrace_core::curve::enumerate_points;
use normtrace_core::surface::{build_s1, classify_detailed, count_points, eta};
use normtrace_core::{Coeffs, Element, FieldTower, Level, Workbench};

#[derive(Parser, Debug)]
#[command(
    name = "normtrace",
    version,
    about = "Norm-trace curve intersections, cubic surfaces and AG-code weights"
)]
struct Cli {
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for sampled sweeps; recorded in every output header.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print field elements as polynomials instead of integer encodings.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moduli, α and the normal basis of the tower.
    FieldInfo(FieldArgs),
    /// Affine points of N(x) = T(y) as CSV.
    CurvePoints(OutputArgs),
    /// Number of x with N(x) = T(A x³ + B x² + C x + D).
    Intersect(TupleArgs),
    /// Classification of the surface S_1 for one tuple.
    Classify(TupleArgs),
    /// Sweep a family of tuples and check every bound.
    Census(CensusArgs),
    /// Singular points of S_2 for B = C = 0 against the predicted sets.
    SpecialB0c0(OutputArgs),
    /// Weights of the one-point code, sorted into cases.
    CodeWeights(CodeArgs),
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Base field size, a prime power.
    #[arg(long)]
    q: u32,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long)]
    q: u32,
    #[arg(long, value_enum, default_value_t = Emit::Csv)]
    emit: Emit,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TupleArgs {
    #[arg(long)]
    q: u32,
    /// A,B,C,D as canonical encodings in F_{q^3}.
    #[arg(long, value_parser = parse_coeffs)]
    coeffs: Coeffs,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[arg(long)]
    q: u32,
    /// all, A_nonzero, B0C0 or a0.
    #[arg(long, default_value = "A_nonzero")]
    family: Family,
    #[arg(long, value_enum, default_value_t = Emit::Csv)]
    emit: Emit,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Draw this many tuples uniformly (with --seed) instead of sweeping.
    #[arg(long)]
    sample: Option<usize>,
}

#[derive(Args, Debug)]
struct CodeArgs {
    #[arg(long)]
    q: u32,
    /// Divisor degree; defaults to 3q².
    #[arg(long)]
    k: Option<u32>,
    /// a0b0d0, a0b0_dnonzero or full.
    #[arg(long, default_value = "a0b0d0")]
    family: WeightFamily,
    #[arg(long, value_enum, default_value_t = Emit::Csv)]
    emit: Emit,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Csv,
    Json,
}

fn parse_coeffs(s: &str) -> Result<Coeffs, String> {
    let v: Vec<u32> = s
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c, d] => Ok(Coeffs::new(a, b, c, d)),
        _ => Err(format!(
            "expected four comma-separated integers, got {}",
            v.len()
        )),
    }
}

/// `q = p^h` with `p` prime.
fn split_q(q: u32) -> Result<(u32, u32)> {
    if q < 2 {
        bail!("--q must be a prime power, got {q}");
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2");
    let (mut r, mut h) = (q, 0);
    while r.is_multiple_of(p) {
        r /= p;
        h += 1;
    }
    if r != 1 {
        bail!("--q must be a prime power, got {q}");
    }
    Ok((p, h))
}

fn workbench(q: u32) -> Result<Workbench> {
    let (p, h) = split_q(q)?;
    Workbench::build(p, h).with_context(|| format!("building the field tower for q = {q}"))
}

fn check_coeffs(t: &FieldTower, k: Coeffs) -> Result<()> {
    for (name, c) in [("A", k.a), ("B", k.b), ("C", k.c), ("D", k.d)] {
        if c >= t.cubic_size() {
            bail!(
                "--coeffs: {name} = {c} is not below q^3 = {}",
                t.cubic_size()
            );
        }
    }
    Ok(())
}

/// Reproducibility header shared by every output.
struct Meta {
    p: u32,
    h: u32,
    modulus1: Vec<u32>,
    modulus2: Vec<u32>,
    alpha: u32,
    seed: u64,
}

impl Meta {
    fn new(t: &FieldTower, seed: u64) -> Self {
        Meta {
            p: t.p(),
            h: t.h(),
            modulus1: t.modulus1().to_vec(),
            modulus2: t.modulus2().to_vec(),
            alpha: t.alpha().code,
            seed,
        }
    }

    fn json(&self) -> Value {
        json!({
            "tool": "normtrace",
            "version": env!("CARGO_PKG_VERSION"),
            "p": self.p,
            "h": self.h,
            "modulus1": self.modulus1,
            "modulus2": self.modulus2,
            "alpha": self.alpha,
            "seed": self.seed,
        })
    }

    fn csv_line(&self, extra: &str) -> String {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(";");
        format!(
            "# normtrace {} p={} h={} modulus1={} modulus2={} alpha={} seed={}{extra}",
            env!("CARGO_PKG_VERSION"),
            self.p,
            self.h,
            join(&self.modulus1),
            join(&self.modulus2),
            self.alpha,
            self.seed,
        )
    }
}

struct Ctx {
    seed: u64,
    pretty: bool,
}

impl Ctx {
    fn elem(&self, t: &FieldTower, level: Level, code: u32) -> String {
        if self.pretty {
            t.pretty(Element::new(level, code))
        } else {
            code.to_string()
        }
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(w: &mut dyn Write, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, v)?;
    writeln!(w)?;
    Ok(())
}

fn field_info(ctx: &Ctx, a: &FieldArgs) -> Result<bool> {
    let wb = workbench(a.q)?;
    let t = wb.tower();
    let al = t.alpha();
    let conj: Vec<u32> = (0..3).map(|k| t.cfrob(al.code, k)).collect();
    let v = json!({
        "meta": Meta::new(t, ctx.seed).json(),
        "q": t.q(),
        "cubic_size": t.cubic_size(),
        "alpha": ctx.elem(t, Level::Cubic, al.code),
        "normal_basis": conj.iter().map(|&c| ctx.elem(t, Level::Cubic, c)).collect::<Vec<_>>(),
        "norm_alpha": ctx.elem(t, Level::Base, t.cnorm(al.code)),
        "trace_alpha": ctx.elem(t, Level::Base, t.ctrace(al.code)),
    });
    write_json(&mut io::stdout().lock(), &v)?;
    Ok(true)
}

fn curve_points(ctx: &Ctx, a: &OutputArgs) -> Result<bool> {
    let wb = workbench(a.q)?;
    let t = wb.tower();
    let pts = enumerate_points(t);
    let meta = Meta::new(t, ctx.seed);
    let mut w = sink(&a.out)?;
    match a.emit {
        Emit::Csv => {
            writeln!(w, "{}", meta.csv_line(""))?;
            writeln!(w, "x,y")?;
            for p in &pts.points {
                writeln!(
                    w,
                    "{},{}",
                    ctx.elem(t, Level::Cubic, p.x),
                    ctx.elem(t, Level::Cubic, p.y)
                )?;
            }
        }
        Emit::Json => {
            let v = json!({
                "meta": meta.json(),
                "count": pts.len(),
                "points": pts.points.iter()
                    .map(|p| [ctx.elem(t, Level::Cubic, p.x), ctx.elem(t, Level::Cubic, p.y)])
                    .collect::<Vec<_>>(),
            });
            write_json(&mut w, &v)?;
        }
    }
    w.flush()?;
    Ok(true)
}

fn intersect(a: &TupleArgs) -> Result<bool> {
    let wb = workbench(a.q)?;
    check_coeffs(wb.tower(), a.coeffs)?;
    println!("{}", intersect_count(wb.tower(), a.coeffs));
    Ok(true)
}

fn classify(ctx: &Ctx, a: &TupleArgs) -> Result<bool> {
    let wb = workbench(a.q)?;
    let t = wb.tower();
    check_coeffs(t, a.coeffs)?;
    let form = build_s1(t, a.coeffs);
    let c = classify_detailed(&wb, &form)?;
    let count = count_points(&wb, &form, 1)?;
    let v = json!({
        "meta": Meta::new(t, ctx.seed).json(),
        "coeffs": [a.coeffs.a, a.coeffs.b, a.coeffs.c, a.coeffs.d],
        "s1": form.display(t, ctx.pretty).to_string(),
        "verdict": c.class.name(),
        "delta": c.class.delta(),
        "pattern": c.class.pattern().to_string(),
        "count_d1": count,
        "eta": eta(t.q() as u64, count),
    });
    write_json(&mut io::stdout().lock(), &v)?;
    Ok(true)
}

fn census(ctx: &Ctx, a: &CensusArgs) -> Result<bool> {
    let wb = workbench(a.q)?;
    let t = wb.tower();
    let sampling = a.sample.map(|count| Sampling {
        count,
        seed: ctx.seed,
    });
    let c = full_census(&wb, a.family, sampling)?;
    let meta = Meta::new(t, ctx.seed);
    let mut w = sink(&a.out)?;
    match a.emit {
        Emit::Csv => {
            writeln!(w, "{}", meta.csv_line(&format!(" family={}", a.family)))?;
            writeln!(w, "A,B,C,D,count,verdict,delta,pattern,eta,bound,bound_ok")?;
            for r in &c.records {
                let k = r.coeffs;
                let e = |x| ctx.elem(t, Level::Cubic, x);
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    e(k.a),
                    e(k.b),
                    e(k.c),
                    e(k.d),
                    r.count,
                    r.class.name(),
                    r.class.delta(),
                    r.class.pattern(),
                    r.eta.map_or("NA".to_string(), |v| v.to_string()),
                    r.bound,
                    r.bound_ok,
                )?;
            }
        }
        Emit::Json => {
            let v = json!({
                "meta": meta.json(),
                "family": a.family.name(),
                "records": c.records,
                "summary": c.summary,
            });
            write_json(&mut w, &v)?;
        }
    }
    w.flush()?;
    let s = &c.summary;
    eprintln!(
        "{} records, {} counterexamples, {} class-bound failures, {} cross-check failures",
        s.records,
        s.counterexamples.len(),
        s.bound_failures.len(),
        s.cross_check_failures
    );
    for r in &s.counterexamples {
        eprintln!("counterexample: {r:?}");
    }
    Ok(s.counterexamples.is_empty())
}

fn special_b0c0(ctx: &Ctx, a: &OutputArgs) -> Result<bool> {
    let wb = workbench(a.q)?;
    let t = wb.tower();
    let reports = special_case_sweep(&wb)?;
    let meta = Meta::new(t, ctx.seed);
    // N maps F_{q^3}^* onto F_q^*, so at q = 2 every A has N(A) = 1.
    let vacuous = (t.q() == 2).then_some("N(A) != 1");
    let mut w = sink(&a.out)?;
    let points = |v: &[[u32; 3]]| -> String {
        v.iter()
            .map(|p| p.map(|c| ctx.elem(t, Level::Cubic, c)).join(":"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    match a.emit {
        Emit::Csv => {
            let extra = vacuous.map_or(String::new(), |b| {
                format!(" vacuous_branch={}", b.replace(' ', ""))
            });
            writeln!(w, "{}", meta.csv_line(&extra))?;
            writeln!(
                w,
                "A,D,E,norm_A,degenerate,predicted,found,exceeded,s1_consistent,matches"
            )?;
            for r in &reports {
                let predicted = match &r.predicted {
                    Prediction::Exceeded => "exceeded".to_string(),
                    Prediction::Points(p) => points(p),
                };
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{},{}",
                    ctx.elem(t, Level::Cubic, r.a),
                    ctx.elem(t, Level::Cubic, r.d),
                    ctx.elem(t, Level::Base, r.e),
                    ctx.elem(t, Level::Base, r.norm_a),
                    r.degenerate,
                    predicted,
                    points(&r.found),
                    r.exceeded,
                    r.s1_consistent,
                    r.matches
                )?;
            }
        }
        Emit::Json => {
            let v = json!({
                "meta": meta.json(),
                "vacuous_branch": vacuous,
                "reports": reports,
            });
            write_json(&mut w, &v)?;
        }
    }
    w.flush()?;
    Ok(reports.iter().all(|r| r.matches && r.s1_consistent))
}

fn monomial_name((i, j): (u32, u32)) -> String {
    let part = |v: &str, e: u32| match e {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{v}^{e}"),
    };
    let s = format!("{}{}", part("x", i), part("y", j));
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

fn code_weights(ctx: &Ctx, a: &CodeArgs) -> Result<bool> {
    let wb = workbench(a.q)?;
    let t = wb.tower();
    let k = a.k.unwrap_or(3 * a.q * a.q);
    let basis = basis_for(t.q(), k);
    let missing: Vec<String> = COMBO_MONOMIALS
        .iter()
        .filter(|m| basis.position(**m).is_none())
        .map(|&m| monomial_name(m))
        .collect();
    let table = weight_table(&wb, k, a.family, None)?;
    let meta = Meta::new(t, ctx.seed);
    let mut w = sink(&a.out)?;
    match a.emit {
        Emit::Csv => {
            let mut extra = format!(
                " k={k} family={} basis={} designed_distance={}",
                a.family,
                basis
                    .monomials
                    .iter()
                    .map(|&m| monomial_name(m))
                    .collect::<Vec<_>>()
                    .join(";"),
                table.designed_distance
            );
            if !missing.is_empty() {
                extra.push_str(&format!(" missing={}", missing.join(";")));
            }
            writeln!(w, "{}", meta.csv_line(&extra))?;
            writeln!(w, "case,coeffs,weight,claimed_bound,ok")?;
            for r in &table.rows {
                let coeffs: Vec<String> = r
                    .coeffs
                    .iter()
                    .map(|&c| ctx.elem(t, Level::Cubic, c))
                    .collect();
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    r.case,
                    coeffs.join(":"),
                    r.weight,
                    r.claimed,
                    r.ok
                )?;
            }
        }
        Emit::Json => {
            let v = json!({
                "meta": meta.json(),
                "basis": basis.monomials.iter().map(|&m| monomial_name(m)).collect::<Vec<_>>(),
                "missing": missing,
                "table": table,
            });
            write_json(&mut w, &v)?;
        }
    }
    w.flush()?;
    eprintln!(
        "{} functions, {} case/weight rows, {} failing, {} fiber mismatches",
        table.functions,
        table.rows.len(),
        table.rows.iter().filter(|r| !r.ok).count(),
        table.fiber_mismatches
    );
    Ok(table.all_ok() && table.fiber_mismatches == 0)
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let ctx = Ctx {
        seed: cli.seed,
        pretty: cli.pretty,
    };
    match &cli.command {
        Command::FieldInfo(a) => field_info(&ctx, a),
        Command::CurvePoints(a) => curve_points(&ctx, a),
        Command::Intersect(a) => intersect(a),
        Command::Classify(a) => classify(&ctx, a),
        Command::Census(a) => census(&ctx, a),
        Command::SpecialB0c0(a) => special_b0c0(&ctx, a),
        Command::CodeWeights(a) => code_weights(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
