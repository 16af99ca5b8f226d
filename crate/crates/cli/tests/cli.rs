use std::path::{Path, PathBuf};
use std::process::Command;

use octi::compact::compact_xp;
use octi::fixtures;
use octi::hardgen::{expected_dims, gen_instance, CnfFormula, Variant};
use octi::oracle::oracle_min_area;
use octi::{parse_drawing, parse_rep, serialize_drawing, serialize_rep, validate_drawing, GridDrawing, OctiRep};
use octi_cli::{render_svg, run, EXIT_BUDGET, EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn octi(args: &[&str]) -> Out {
    let argv: Vec<String> = std::iter::once("octi")
        .chain(args.iter().copied())
        .map(String::from)
        .collect();
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut o, &mut e);
    Out {
        code,
        stdout: String::from_utf8(o).unwrap(),
        stderr: String::from_utf8(e).unwrap(),
    }
}

fn put(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn put_rep(dir: &Path, name: &str, rep: &OctiRep) -> String {
    put(dir, name, &serialize_rep(rep))
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn drawing_at(p: &str) -> GridDrawing {
    parse_drawing(&std::fs::read_to_string(p).unwrap()).unwrap()
}

const SAMPLE_CNF: &str = "p cnf 3 3\n1 2 3 0\n-1 -2 3 0\n-1 2 3 0\n";

#[test]
fn check_prints_params_of_the_square() {
    let dir = tempfile::tempdir().unwrap();
    let sq = put_rep(dir.path(), "square.orep", &fixtures::unit_square());
    let out = octi(&["check", &sq]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.contains("ω=4 φ=1 κ=4 δ=0"), "{}", out.stdout);
    let p = octi(&["params", &sq]);
    assert_eq!(p.stdout.trim(), "ω=4 φ=1 κ=4 δ=0");
}

#[test]
fn check_reports_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let junk = put(dir.path(), "junk.orep", "not a representation\n");
    assert_eq!(octi(&["check", &junk]).code, EXIT_USAGE);
    assert_eq!(octi(&["check", &path(dir.path(), "missing.orep")]).code, EXIT_USAGE);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &[][..],
        &["frobnicate"][..],
        &["compact", "x.orep"][..],
        &["gen", "t7", "--cnf", "a", "-o", "b"][..],
    ] {
        let out = octi(args);
        assert_eq!(out.code, EXIT_USAGE, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(octi(&["--help"]).code, EXIT_OK);
}

#[test]
fn realize_matches_library_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let rep = fixtures::split_hexagon();
    let f = put_rep(dir.path(), "hexagon.orep", &rep);
    let o = path(dir.path(), "out.odraw");
    let out = octi(&["realize", &f, "-o", &o]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let drw = drawing_at(&o);
    assert!(validate_drawing(&rep, &drw).is_empty());
    let lens = octi::flow::solve_realization(&rep).unwrap();
    let lib = octi::flow::drawing_from_lengths(&rep, &lens).unwrap();
    assert_eq!(serialize_drawing(&drw), serialize_drawing(&lib));

    let l = fixtures::l_shape();
    let lf = put_rep(dir.path(), "l.orep", &l);
    for extra in [&[][..], &["--force-fpt"][..]] {
        let mut args = vec!["realize", lf.as_str(), "-o", o.as_str()];
        args.extend_from_slice(extra);
        assert_eq!(octi(&args).code, EXIT_OK);
        assert!(validate_drawing(&l, &drawing_at(&o)).is_empty());
    }
}

#[test]
fn compact_prints_minimum_area() {
    let dir = tempfile::tempdir().unwrap();
    let rep = fixtures::right_triangle();
    let t = put_rep(dir.path(), "triangle.orep", &rep);
    let o = path(dir.path(), "out.odraw");
    let out = octi(&["compact", &t, "--max-diag", "3", "-o", &o]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(out.stdout.trim(), "area=1");
    let lib = compact_xp(&rep, 3).unwrap();
    assert_eq!(std::fs::read_to_string(&o).unwrap(), serialize_drawing(&lib.drawing));
    assert_eq!(
        octi(&["compact", &t, "--max-diag", "0", "-o", &o]).code,
        EXIT_INFEASIBLE
    );
}

#[test]
fn oracle_area_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let rep = fixtures::octagon();
    let f = put_rep(dir.path(), "oct.orep", &rep);
    let out = octi(&["oracle", &f, "--max-side", "4"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let (area, _) = oracle_min_area(&rep, 4).unwrap().unwrap();
    assert_eq!(out.stdout.lines().next().unwrap(), format!("area={area}"));
    assert_eq!(octi(&["oracle", &f, "--max-side", "1"]).code, EXIT_INFEASIBLE);
    assert_eq!(
        octi(&["oracle", &f, "--max-side", "8", "--budget", "3"]).code,
        EXIT_BUDGET
    );
}

#[test]
fn gen_writes_instance_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = put(dir.path(), "sample.cnf", SAMPLE_CNF);
    let o = path(dir.path(), "t1.orep");
    let out = octi(&["gen", "t1", "--cnf", &cnf, "--assign", "011", "--unit", "1", "-o", &o]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let rep = parse_rep(&std::fs::read_to_string(&o).unwrap()).unwrap();
    let lib = gen_instance(&CnfFormula::parse_dimacs(SAMPLE_CNF).unwrap(), Variant::T1Convex).unwrap();
    assert_eq!(serialize_rep(&rep), serialize_rep(&lib.rep));
    let drw = drawing_at(&path(dir.path(), "t1.odraw"));
    assert!(validate_drawing(&rep, &drw).is_empty());
    assert_eq!((drw.width() as u64, drw.height() as u64), expected_dims(3, 3, 1));

    let unsat = octi(&["gen", "t1", "--cnf", &cnf, "--assign", "100", "--unit", "1", "-o", &o]);
    assert_eq!(unsat.code, EXIT_INFEASIBLE);
    assert_eq!(
        octi(&["gen", "t1", "--cnf", &cnf, "--assign", "01x", "--unit", "1", "-o", &o]).code,
        EXIT_USAGE
    );
    let k = path(dir.path(), "k.orep");
    let out = octi(&["gen", "kappa8", "--cnf", &cnf, "-o", &k]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("κ=8"), "{}", out.stdout);
}

#[test]
fn render_square_and_triangle() {
    let sq = fixtures::unit_square();
    let drw = GridDrawing::new(vec![(0, 0), (1, 0), (1, 1), (0, 1)]);
    let svg = render_svg(&sq, &drw, 20).unwrap();
    assert!(svg.contains(r#"width="60" height="60""#));
    assert_eq!(svg.matches("<line").count(), 4);
    assert_eq!(svg.matches("<circle").count(), 4);
    assert_eq!(svg, render_svg(&sq, &drw, 20).unwrap());
    // Screen y grows downward: vertex (0, 0) sits at the bottom left.
    assert!(svg.contains(r#"<circle cx="20" cy="40""#));
    assert!(render_svg(&sq, &GridDrawing::new(vec![(0, 0), (2, 0), (1, 1), (0, 1)]), 20).is_err());

    let tri = fixtures::right_triangle();
    let lens = octi::flow::solve_realization(&tri).unwrap();
    let d = octi::flow::drawing_from_lengths(&tri, &lens).unwrap();
    let svg = render_svg(&tri, &d, 10).unwrap();
    let diagonal = svg.lines().filter(|l| l.contains("<line")).any(|l| {
        let num = |k: &str| -> i64 {
            let s = &l[l.find(&format!(r#" {k}=""#)).unwrap() + k.len() + 3..];
            s[..s.find('"').unwrap()].parse().unwrap()
        };
        let (dx, dy) = (num("x2") - num("x1"), num("y2") - num("y1"));
        dx != 0 && dx.abs() == dy.abs()
    });
    assert!(diagonal);
}

#[test]
fn render_command_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let rep = fixtures::unit_square();
    let r = put_rep(dir.path(), "sq.orep", &rep);
    let d = put(
        dir.path(),
        "sq.odraw",
        &serialize_drawing(&GridDrawing::new(vec![(0, 0), (1, 0), (1, 1), (0, 1)])),
    );
    let o = path(dir.path(), "sq.svg");
    assert_eq!(octi(&["render", &r, &d, "-o", &o, "--scale", "20"]).code, EXIT_OK);
    let svg = std::fs::read_to_string(&o).unwrap();
    assert_eq!(svg, render_svg(&rep, &drawing_at(&d), 20).unwrap());
}

#[test]
fn binary_honours_exit_codes_and_thread_cap() {
    let dir = tempfile::tempdir().unwrap();
    let sq = put_rep(dir.path(), "square.orep", &fixtures::unit_square());
    let bin = PathBuf::from(env!("CARGO_BIN_EXE_octi"));
    let st = Command::new(&bin)
        .args(["check", &sq])
        .env("OCTI_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&st.stdout).contains("ω=4"));
    let st = Command::new(&bin).arg("nonsense").output().unwrap();
    assert_eq!(st.status.code(), Some(EXIT_USAGE));
}
