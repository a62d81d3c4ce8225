use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dpw_core::complex::default_report_depth;
use dpw_core::surface::{check_fiber, slc_interval, CurveKind};
use dpw_core::{
    build_fiber, chamber_model, compute_walls, count_strata, enumerate_eckardt_triples, enumerate_lines,
    enumerate_roots, enumerate_vertex_subsystems, fmt_q, parse_rational, polarization_restriction,
    BoundaryComplex, CompatibilityMode, DynkinType, Error, FiberComplex, StratumType, VertexKind, Q,
};

mod check;

#[derive(Parser)]
#[command(name = "dpw", version, about = "Walls and stable models of marked cubic and quartic del Pezzo fibers")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Action {
    #[default]
    Count,
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Show {
    Show,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stats {
    Stats,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountOnly {
    Count,
}

#[derive(Subcommand)]
enum Cmd {
    /// Positive roots of the rank-n lattice.
    Roots {
        #[arg(long)]
        n: usize,
        #[arg(value_enum, default_value_t)]
        action: Action,
    },
    /// Lines of the degree 9-n surface.
    Lines {
        #[arg(long)]
        n: usize,
        #[arg(value_enum, default_value_t)]
        action: Action,
    },
    /// Root subsystems of one boundary kind, e.g. `A3xA3`.
    Subsystems {
        #[arg(long)]
        n: usize,
        #[arg(long = "type", value_parser = parse_kind)]
        ty: VertexKind,
        #[arg(value_enum, default_value_t)]
        action: Action,
    },
    /// Vertex counts and f-vector prefix of the boundary complex.
    Complex {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "geometric", value_parser = parse_mode)]
        mode: CompatibilityMode,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(value_enum)]
        action: Stats,
    },
    /// Boundary strata of the cubic moduli space by type, e.g. `a4`, `ab`.
    Strata {
        #[arg(long = "type", value_parser = parse_stratum)]
        ty: StratumType,
        #[arg(value_enum)]
        action: CountOnly,
    },
    /// Triples of lines through a common point.
    Eckardt {
        #[arg(value_enum)]
        action: CountOnly,
    },
    /// A catalogued fiber, at its top chamber or at the given weight.
    Fiber {
        #[arg(long = "type")]
        ty: String,
        #[arg(long, value_parser = parse_weight)]
        weight: Option<Q>,
        #[arg(value_enum)]
        action: Show,
    },
    /// The stable model of a fiber at an exact weight.
    StableModel {
        #[arg(long = "type")]
        ty: String,
        #[arg(long, value_parser = parse_weight)]
        weight: Q,
    },
    /// Walls, chambers and wall kinds in one degree.
    Walls {
        #[arg(long)]
        degree: u32,
    },
    /// Run the invariant suite; exits nonzero on any failure.
    Check {
        #[arg(long, required = true)]
        all: bool,
    },
}

fn parse_weight(s: &str) -> Result<Q, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_kind(s: &str) -> Result<VertexKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<CompatibilityMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_stratum(s: &str) -> Result<StratumType, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A rendered report: the table text and the JSON value.
struct Report {
    table: String,
    json: Value,
    ok: bool,
}

impl Report {
    fn new(table: String, json: Value) -> Self {
        Report { table, json, ok: true }
    }
}

fn root_list(n: usize, action: Action) -> Result<Report, Error> {
    let roots = enumerate_roots(n)?;
    let labels: Vec<String> = roots.iter().map(|r| r.root_label().unwrap_or_else(|| r.to_string())).collect();
    Ok(match action {
        Action::Count => Report::new(roots.len().to_string(), json!({ "n": n, "count": roots.len() })),
        Action::List => Report::new(labels.join("\n"), json!({ "n": n, "count": roots.len(), "roots": labels })),
    })
}

fn line_list(n: usize, action: Action) -> Result<Report, Error> {
    let lines = enumerate_lines(n)?;
    let coeffs: Vec<Vec<i64>> = lines.iter().map(|l| l.coeffs().to_vec()).collect();
    Ok(match action {
        Action::Count => Report::new(lines.len().to_string(), json!({ "n": n, "count": lines.len() })),
        Action::List => Report::new(
            lines.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("\n"),
            json!({ "n": n, "count": lines.len(), "lines": coeffs }),
        ),
    })
}

fn subsystem_list(n: usize, kind: VertexKind, action: Action) -> Result<Report, Error> {
    let subs = enumerate_vertex_subsystems(n, kind)?;
    let ty: DynkinType = kind.dynkin();
    let head = json!({ "n": n, "type": ty.to_string(), "count": subs.len() });
    Ok(match action {
        Action::Count => Report::new(subs.len().to_string(), head),
        Action::List => {
            let simple: Vec<Vec<String>> = subs
                .iter()
                .map(|s| s.simple_roots().iter().map(|r| r.root_label().unwrap_or_else(|| r.to_string())).collect())
                .collect();
            let table = simple.iter().map(|s| s.join(" ")).collect::<Vec<_>>().join("\n");
            let mut j = head;
            j["simple_roots"] = json!(simple);
            Report::new(table, j)
        }
    })
}

fn complex_stats(n: usize, mode: CompatibilityMode, depth: Option<usize>) -> Result<Report, Error> {
    let cx = BoundaryComplex::build(n, mode)?;
    let report = cx.report(depth.unwrap_or_else(|| default_report_depth(n)));
    let mut t = format!("n = {n}, mode = {mode}\n");
    for (ty, k) in &report.vertex_counts_by_type {
        t.push_str(&format!("vertices {ty:<8} {k}\n"));
    }
    let f: Vec<String> = report.f_vector_prefix.iter().map(u64::to_string).collect();
    t.push_str(&format!("f-vector prefix ({})", f.join(", ")));
    let json = serde_json::to_value(&report).map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(Report::new(t, json))
}

fn fiber_table(f: &FiberComplex) -> Result<String, Error> {
    let slc = slc_interval(f);
    let mut t = format!(
        "{} (degree {}, tier {}) on ({}, {}]: {} components\n",
        f.fiber_type,
        f.degree,
        f.tier,
        fmt_q(&f.chamber.0),
        fmt_q(&f.chamber.1),
        f.components.len()
    );
    for comp in &f.components {
        let r = polarization_restriction(f, comp.id)?;
        let lines = comp.curves.iter().filter(|c| c.kind == CurveKind::Line).count();
        let doubles = comp.curves.iter().filter(|c| c.kind == CurveKind::Double).count();
        t.push_str(&format!(
            "  [{:>2}] {:<8} lines {:>2}  double {:>2}  K+cB = {}\n",
            comp.id,
            comp.role.to_string(),
            lines,
            doubles,
            r.format(&comp.basis)
        ));
    }
    let bound = slc.c_max.map(|c| fmt_q(&c)).unwrap_or_else(|| "none".into());
    t.push_str(&format!("special points {}, slc bound {bound}", f.special_points.len()));
    Ok(t)
}

fn fiber_report(f: &FiberComplex) -> Result<Report, Error> {
    let json = serde_json::to_value(f).map_err(|e| Error::Invalid(e.to_string()))?;
    let mut r = Report::new(fiber_table(f)?, json);
    let v = check_fiber(f);
    if !v.is_empty() {
        r.ok = false;
        for x in v {
            r.table.push_str(&format!("\nviolation: {}", x.message));
        }
    }
    Ok(r)
}

fn walls_report(degree: u32) -> Result<Report, Error> {
    let w = compute_walls(degree)?;
    let mut t = w.walls.iter().map(fmt_q).collect::<Vec<_>>().join(" ");
    for ch in &w.chambers {
        let tag = ch.crossing_tag.map(|t| t.to_string()).unwrap_or_else(|| "-".into());
        let models: Vec<String> = ch.models.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        t.push_str(&format!(
            "\n({}, {}] crossing {:<11} {}",
            fmt_q(&ch.interval.lo),
            fmt_q(&ch.interval.hi),
            tag,
            models.join(" ")
        ));
    }
    let json = serde_json::from_str(&w.to_json()?).map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(Report::new(t, json))
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.cmd {
        Cmd::Roots { n, action } => root_list(*n, *action),
        Cmd::Lines { n, action } => line_list(*n, *action),
        Cmd::Subsystems { n, ty, action } => subsystem_list(*n, *ty, *action),
        Cmd::Complex { n, mode, depth, .. } => complex_stats(*n, *mode, *depth),
        Cmd::Strata { ty, .. } => {
            let k = count_strata(ty)?;
            Ok(Report::new(k.to_string(), json!({ "type": ty.to_string(), "count": k })))
        }
        Cmd::Eckardt { .. } => {
            let k = enumerate_eckardt_triples()?.len();
            Ok(Report::new(k.to_string(), json!({ "count": k })))
        }
        Cmd::Fiber { ty, weight, .. } => {
            let f = match weight {
                Some(c) => chamber_model(ty, *c)?,
                None => build_fiber(ty)?,
            };
            fiber_report(&f)
        }
        Cmd::StableModel { ty, weight } => fiber_report(&chamber_model(ty, *weight)?),
        Cmd::Walls { degree } => walls_report(*degree),
        Cmd::Check { .. } => {
            let results = check::run_all();
            let ok = results.iter().all(|r| r.pass);
            let table = results.iter().map(check::CheckResult::line).collect::<Vec<_>>().join("\n");
            let json = serde_json::to_value(&results).map_err(|e| Error::Invalid(e.to_string()))?;
            Ok(Report { table, json, ok })
        }
    }
}

fn emit(cli: &Cli, report: &Report) -> std::io::Result<()> {
    let text = match cli.format {
        Format::Table => report.table.clone(),
        Format::Json => serde_json::to_string_pretty(&report.json).expect("serializable"),
    };
    match &cli.out {
        Some(path) => fs::write(path, text + "\n"),
        None => writeln!(std::io::stdout().lock(), "{text}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&cli, &report) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

