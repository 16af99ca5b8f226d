//! Command-line front end: every subcommand is a thin wrapper over one
//! library call, plus an SVG renderer for drawings.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use octi::compact::{compact_xp, CompactError};
use octi::flow::{drawing_from_lengths, solve_realization, FlowError};
use octi::hardgen::{gen_instance, witness_drawing, CnfFormula, HardgenError, Variant};
use octi::oracle::{oracle_min_area_with, OracleConfig, OracleError, DEFAULT_NODE_BUDGET};
use octi::shadow::realize_fpt;
use octi::{
    compute_params, derive_faces, parse_drawing, parse_rep, serialize_drawing, serialize_rep, validate_drawing,
    validate_rep, GridDrawing, OctiRep,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("drawing does not match the representation: {0}")]
    InvalidDrawing(String),
}

/// One `<line>` per edge and one `<circle>` per vertex. The canvas is the
/// bounding box plus a margin of one grid unit on every side; y points up
/// in the drawing and down on screen.
pub fn render_svg(rep: &OctiRep, drw: &GridDrawing, scale: i64) -> Result<String, RenderError> {
    if let Some(v) = validate_drawing(rep, drw).first() {
        return Err(RenderError::InvalidDrawing(format!("{v:?}")));
    }
    let (x0, y0, x1, y1) = drw.bounds().unwrap_or((0, 0, 0, 0));
    let sx = |x: i64| (x - x0 + 1) * scale;
    let sy = |y: i64| (y1 - y + 1) * scale;
    let (w, h) = ((x1 - x0 + 2) * scale, (y1 - y0 + 2) * scale);
    let stroke = (scale / 10).max(1);
    let radius = (scale / 6).max(1);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    for e in 0..rep.edge_count() {
        let (a, b, _) = rep.edge(e);
        let (p, q) = (drw.position(a), drw.position(b));
        let _ = writeln!(
            out,
            r#"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="{stroke}"/>"#,
            sx(p.0),
            sy(p.1),
            sx(q.0),
            sy(q.1)
        );
    }
    for &(x, y) in drw.coords() {
        let _ = writeln!(
            out,
            r#"  <circle cx="{}" cy="{}" r="{radius}" fill="black"/>"#,
            sx(x),
            sy(y)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[derive(Parser, Debug)]
#[command(name = "octi", about = "Octilinear representation realizer")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate a representation and print its parameters.
    Check { orep: PathBuf },
    /// Print ω, φ, κ and δ.
    Params { orep: PathBuf },
    /// Find a drawing: flow for convex input, the shadow pipeline otherwise.
    Realize {
        orep: PathBuf,
        #[arg(short)]
        o: PathBuf,
        #[arg(long)]
        force_fpt: bool,
    },
    /// Minimum-area drawing over diagonal lengths up to L.
    Compact {
        orep: PathBuf,
        #[arg(long, value_name = "L")]
        max_diag: i64,
        #[arg(short)]
        o: PathBuf,
    },
    /// Exhaustive minimum-area search on a bounded grid.
    Oracle {
        orep: PathBuf,
        #[arg(long)]
        max_side: i64,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Build a reduction instance from a DIMACS formula. With `--assign`, the
    /// witness drawing goes next to the output with an `.odraw` extension.
    Gen {
        variant: Variant,
        #[arg(long)]
        cnf: PathBuf,
        /// Truth values of x1..xn as a string of 0s and 1s.
        #[arg(long, requires = "unit")]
        assign: Option<String>,
        #[arg(long, requires = "assign")]
        unit: Option<i64>,
        #[arg(short)]
        o: PathBuf,
    },
    /// Write a drawing as SVG.
    Render {
        orep: PathBuf,
        odraw: PathBuf,
        #[arg(short)]
        o: PathBuf,
        #[arg(long, default_value_t = 20)]
        scale: i64,
    },
}

struct Failure {
    code: i32,
    msg: String,
}

fn fail(code: i32, msg: impl std::fmt::Display) -> Failure {
    Failure {
        code,
        msg: msg.to_string(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn load_rep(path: &Path) -> Result<OctiRep, Failure> {
    parse_rep(&read(path)?).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn flow_error(e: FlowError) -> Failure {
    match e {
        FlowError::Infeasible { .. } => fail(EXIT_INFEASIBLE, "unrealizable"),
        e => fail(EXIT_INFEASIBLE, e),
    }
}

/// Runs one command line (including the program name) and returns the exit
/// code. Normal output goes to `out`, diagnostics to `err`.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<(), Failure> {
    let say = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(|e| fail(EXIT_USAGE, e));
    match cmd {
        Cmd::Check { orep } => {
            let rep = load_rep(&orep)?;
            let violations = validate_rep(&rep);
            for v in &violations {
                say(out, format!("violation: {v:?}"))?;
            }
            if !violations.is_empty() {
                return Err(fail(EXIT_INFEASIBLE, format!("{} violations", violations.len())));
            }
            let stats = compute_params(&rep).map_err(|e| fail(EXIT_INFEASIBLE, format!("{e:?}")))?;
            say(out, "valid".into())?;
            say(out, stats.to_string())
        }
        Cmd::Params { orep } => {
            let rep = load_rep(&orep)?;
            let stats = compute_params(&rep).map_err(|e| fail(EXIT_INFEASIBLE, format!("{e:?}")))?;
            say(out, stats.to_string())
        }
        Cmd::Realize { orep, o, force_fpt } => {
            let rep = load_rep(&orep)?;
            let drw = realize(&rep, force_fpt)?;
            write(&o, &serialize_drawing(&drw))?;
            say(out, format!("width={} height={}", drw.width(), drw.height()))
        }
        Cmd::Compact { orep, max_diag, o } => {
            let rep = load_rep(&orep)?;
            let res = compact_xp(&rep, max_diag).map_err(|e| match e {
                CompactError::Flow(e) => flow_error(e),
                e @ CompactError::NoFeasibleAssignment { .. } => fail(EXIT_INFEASIBLE, e),
                e @ CompactError::TooManyAssignments { .. } => fail(EXIT_BUDGET, e),
            })?;
            write(&o, &serialize_drawing(&res.drawing))?;
            say(out, format!("area={}", res.area))
        }
        Cmd::Oracle { orep, max_side, budget } => {
            let rep = load_rep(&orep)?;
            let cfg = OracleConfig {
                node_budget: budget,
                ..OracleConfig::default()
            };
            match oracle_min_area_with(&rep, max_side, &cfg) {
                Ok(Some((area, drw))) => {
                    say(out, format!("area={area}"))?;
                    write!(out, "{}", serialize_drawing(&drw)).map_err(|e| fail(EXIT_USAGE, e))
                }
                Ok(None) => Err(fail(
                    EXIT_INFEASIBLE,
                    format!("no drawing with side at most {max_side}"),
                )),
                Err(e @ OracleError::BudgetExceeded { .. }) => Err(fail(EXIT_BUDGET, e)),
                Err(e) => Err(fail(EXIT_INFEASIBLE, e)),
            }
        }
        Cmd::Gen {
            variant,
            cnf,
            assign,
            unit,
            o,
        } => {
            let formula = CnfFormula::parse_dimacs(&read(&cnf)?).map_err(|e| fail(EXIT_USAGE, e))?;
            let inst = gen_instance(&formula, variant).map_err(|e| fail(EXIT_INFEASIBLE, e))?;
            write(&o, &serialize_rep(&inst.rep))?;
            say(
                out,
                compute_params(&inst.rep).map(|s| s.to_string()).unwrap_or_default(),
            )?;
            if let (Some(bits), Some(unit)) = (assign, unit) {
                let assignment = parse_bits(&bits)?;
                let drw = witness_drawing(&inst, &assignment, unit).map_err(|e| match e {
                    e @ HardgenError::UnsatisfiableAtUnit1 { .. } => fail(EXIT_INFEASIBLE, e),
                    e => fail(EXIT_USAGE, e),
                })?;
                let path = o.with_extension("odraw");
                write(&path, &serialize_drawing(&drw))?;
                say(
                    out,
                    format!(
                        "witness {} width={} height={}",
                        path.display(),
                        drw.width(),
                        drw.height()
                    ),
                )?;
            }
            Ok(())
        }
        Cmd::Render { orep, odraw, o, scale } => {
            if scale < 1 {
                return Err(fail(EXIT_USAGE, "--scale must be positive"));
            }
            let rep = load_rep(&orep)?;
            let drw =
                parse_drawing(&read(&odraw)?).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", odraw.display())))?;
            let svg = render_svg(&rep, &drw, scale).map_err(|e| fail(EXIT_INFEASIBLE, e))?;
            write(&o, &svg)
        }
    }
}

fn parse_bits(bits: &str) -> Result<Vec<bool>, Failure> {
    bits.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(fail(EXIT_USAGE, format!("--assign takes 0s and 1s, got `{c}`"))),
        })
        .collect()
}

/// Flow when the representation is convex, shadow pipeline otherwise.
fn realize(rep: &OctiRep, force_fpt: bool) -> Result<GridDrawing, Failure> {
    if let Some(v) = validate_rep(rep).first() {
        return Err(fail(EXIT_INFEASIBLE, format!("invalid representation: {v:?}")));
    }
    let faces = derive_faces(rep).map_err(|e| fail(EXIT_INFEASIBLE, format!("{e:?}")))?;
    if !force_fpt && octi::rep::is_convex(rep, &faces) {
        let lens = solve_realization(rep).map_err(flow_error)?;
        return drawing_from_lengths(rep, &lens).map_err(flow_error);
    }
    match realize_fpt(rep) {
        Ok(Some(drw)) => Ok(drw),
        Ok(None) => Err(fail(EXIT_INFEASIBLE, "unrealizable")),
        Err(e) => Err(fail(EXIT_INFEASIBLE, e)),
    }
}

/// Caps rayon's pool at `OCTI_THREADS` when that is set to a positive number.
pub fn init_threads() {
    if let Some(n) = std::env::var("OCTI_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}
