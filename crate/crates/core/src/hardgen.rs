//! 3-SAT reduction instances and their gadgets.
//!
//! Layouts are written with coordinates that are linear in the unit length
//! `U` and the literal lengths `λ_i`. They are planarized at the reference
//! point `U = 2`, `λ_i = 3` and read back as a representation; evaluating the
//! same coordinates elsewhere gives witness drawings of that representation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use crate::drawing::{validate_drawing, GridDrawing};
use crate::rep::{derive_faces, validate_rep, Corner, Direction, EdgeId, OctiRep, RepBuilder, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HardgenError {
    #[error("DIMACS line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("unknown gadget kind `{0}`")]
    UnknownKind(String),
    #[error("unknown variant `{0}`")]
    UnknownVariant(String),
    #[error("assignment falsifies clause {clause}, so there is no drawing with unit 1")]
    UnsatisfiableAtUnit1 { clause: usize },
    #[error("assignment has {got} values for {n} variables")]
    AssignmentLength { got: usize, n: usize },
    #[error("unit {unit} is not supported for {variant}")]
    UnsupportedUnit { unit: i64, variant: Variant },
    #[error("degenerate layout: {0}")]
    Degenerate(String),
}

/// Conjunction of 3-literal clauses over variables `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub n: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(n: usize, clauses: Vec<[i32; 3]>) -> Result<CnfFormula, HardgenError> {
        if n == 0 || clauses.is_empty() {
            return Err(HardgenError::InvalidFormula(
                "need at least one variable and one clause".into(),
            ));
        }
        for (j, c) in clauses.iter().enumerate() {
            if let Some(l) = c.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > n) {
                return Err(HardgenError::InvalidFormula(format!(
                    "clause {j}: literal {l} out of range"
                )));
            }
        }
        Ok(CnfFormula { n, clauses })
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    /// Reads `p cnf n m` followed by zero-terminated clauses; `c` lines are
    /// comments.
    pub fn parse_dimacs(text: &str) -> Result<CnfFormula, HardgenError> {
        let err = |line: usize, msg: &str| HardgenError::Dimacs { line, msg: msg.into() };
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if header.is_some() || parts.len() != 4 || parts[1] != "cnf" {
                    return Err(err(line_no, "expected a single `p cnf <vars> <clauses>`"));
                }
                let n = parts[2].parse().map_err(|_| err(line_no, "bad variable count"))?;
                let m = parts[3].parse().map_err(|_| err(line_no, "bad clause count"))?;
                header = Some((n, m));
                continue;
            }
            if header.is_none() {
                return Err(err(line_no, "clause before header"));
            }
            for tok in line.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|_| err(line_no, &format!("bad literal `{tok}`")))?;
                if lit != 0 {
                    current.push(lit);
                    continue;
                }
                let clause: [i32; 3] = current
                    .as_slice()
                    .try_into()
                    .map_err(|_| err(line_no, &format!("clause with {} literals", current.len())))?;
                clauses.push(clause);
                current.clear();
            }
        }
        let (n, m) = header.ok_or_else(|| err(0, "missing header"))?;
        if !current.is_empty() {
            return Err(err(text.lines().count(), "unterminated clause"));
        }
        if clauses.len() != m {
            return Err(err(0, &format!("header says {m} clauses, found {}", clauses.len())));
        }
        CnfFormula::new(n, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.n, self.m());
        for c in &self.clauses {
            out.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        out
    }

    /// Index of the first clause with no true literal.
    pub fn falsified_clause(&self, assignment: &[bool]) -> Option<usize> {
        let value = |l: i32| assignment[l.unsigned_abs() as usize - 1] == (l > 0);
        self.clauses.iter().position(|c| !c.iter().any(|&l| value(l)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// Unit-length construction with a left copy chain; every internal face
    /// convex, four reflex corners in total.
    T1Convex,
    /// General construction where only the outer face has reflex corners.
    Phi1,
    /// General construction with each parity gadget in its own face.
    Kappa8,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::T1Convex => "t1",
            Variant::Phi1 => "phi1",
            Variant::Kappa8 => "kappa8",
        })
    }
}

impl FromStr for Variant {
    type Err = HardgenError;
    fn from_str(s: &str) -> Result<Variant, HardgenError> {
        match s.to_ascii_lowercase().as_str() {
            "t1" | "t1convex" => Ok(Variant::T1Convex),
            "phi1" => Ok(Variant::Phi1),
            "kappa8" => Ok(Variant::Kappa8),
            _ => Err(HardgenError::UnknownVariant(s.into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetKind {
    Propagation,
    Rerouting,
    Copy,
    Variable,
    ClauseUnit,
    ClauseGeneral,
    Parity,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 7] = [
        GadgetKind::Propagation,
        GadgetKind::Rerouting,
        GadgetKind::Copy,
        GadgetKind::Variable,
        GadgetKind::ClauseUnit,
        GadgetKind::ClauseGeneral,
        GadgetKind::Parity,
    ];
}

impl FromStr for GadgetKind {
    type Err = HardgenError;
    fn from_str(s: &str) -> Result<GadgetKind, HardgenError> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "propagation" => Ok(GadgetKind::Propagation),
            "rerouting" => Ok(GadgetKind::Rerouting),
            "copy" => Ok(GadgetKind::Copy),
            "variable" => Ok(GadgetKind::Variable),
            "clauseunit" => Ok(GadgetKind::ClauseUnit),
            "clausegeneral" => Ok(GadgetKind::ClauseGeneral),
            "parity" => Ok(GadgetKind::Parity),
            _ => Err(HardgenError::UnknownKind(s.into())),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GadgetParams {
    /// Counterclockwise quarter turns applied to the whole gadget; this is
    /// how a rerouting gadget is oriented.
    pub quarter_turns: u8,
    /// Pin the gadget's unit edges to one common length with stacks of
    /// diagonally split squares. Used by the variable and clause gadgets.
    pub tied: bool,
}

/// A standalone gadget with its information-carrying edges named.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub rep: OctiRep,
    /// A drawing of `rep`, absent when the gadget is built to be infeasible.
    pub drawing: Option<GridDrawing>,
    pub labels: BTreeMap<&'static str, Vec<EdgeId>>,
}

#[derive(Clone, Debug)]
pub struct HardInstance {
    pub rep: OctiRep,
    pub variant: Variant,
    pub n: usize,
    pub m: usize,
    /// Signed literal -> edges on its side of the variable triangle.
    pub literal_edges: BTreeMap<i32, Vec<EdgeId>>,
    /// Variable -> the three unit edges on its triangle's vertical side.
    pub unit_edges: BTreeMap<usize, Vec<EdgeId>>,
    formula: CnfFormula,
    coords: Vec<(Lin, Lin)>,
}

impl HardInstance {
    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }
}

/// `(width, height)` of the unit-`unit` drawing of the convex construction.
pub fn expected_dims(n: u64, m: u64, unit: u64) -> (u64, u64) {
    let step = 2 * unit + 2;
    (step * (3 * n + 7 * m) + unit, step * (3 * n + 5) + unit)
}

/// `9/4 · h(1)·w(1) < h(2)·w(2)`, in integers.
pub fn gap_holds(n: u64, m: u64) -> bool {
    let (w1, h1) = expected_dims(n, m, 1);
    let (w2, h2) = expected_dims(n, m, 2);
    9 * (h1 as u128) * (w1 as u128) < 4 * (h2 as u128) * (w2 as u128)
}

// ---------------------------------------------------------------------------
// Symbolic coordinates

/// Linear form over `[1, U, λ_1, ..., λ_n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Lin(Vec<i64>);

impl Lin {
    fn eval(&self, at: &[i64]) -> i64 {
        self.0.iter().zip(at).map(|(a, b)| a * b).sum()
    }
}

impl Add<&Lin> for &Lin {
    type Output = Lin;
    fn add(self, o: &Lin) -> Lin {
        Lin(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Lin> for &Lin {
    type Output = Lin;
    fn sub(self, o: &Lin) -> Lin {
        Lin(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Add<i64> for &Lin {
    type Output = Lin;
    fn add(self, c: i64) -> Lin {
        let mut v = self.clone();
        v.0[0] += c;
        v
    }
}

impl Mul<i64> for &Lin {
    type Output = Lin;
    fn mul(self, k: i64) -> Lin {
        Lin(self.0.iter().map(|a| a * k).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident $rhs:ty),*) => {$(
        impl $tr<$rhs> for Lin {
            type Output = Lin;
            fn $f(self, o: $rhs) -> Lin {
                (&self).$f(o)
            }
        }
    )*};
}
forward_owned!(Add add &Lin, Sub sub &Lin, Add add i64, Mul mul i64);

impl Add<Lin> for Lin {
    type Output = Lin;
    fn add(self, o: Lin) -> Lin {
        &self + &o
    }
}

impl Sub<Lin> for Lin {
    type Output = Lin;
    fn sub(self, o: Lin) -> Lin {
        &self - &o
    }
}

type Pt = (Lin, Lin);
type Seg = (Pt, Pt);

#[derive(Clone, Copy)]
struct Ctx {
    dim: usize,
}

impl Ctx {
    fn c(&self, v: i64) -> Lin {
        let mut l = vec![0; self.dim];
        l[0] = v;
        Lin(l)
    }

    fn u(&self) -> Lin {
        let mut l = vec![0; self.dim];
        l[1] = 1;
        Lin(l)
    }

    /// `λ_i`, `i` counted from 1.
    fn lam(&self, i: usize) -> Lin {
        let mut l = vec![0; self.dim];
        l[1 + i] = 1;
        Lin(l)
    }

    /// Left end of copy gadget `j` along a chain: `(2j + 1)(U + 1)`.
    fn gadget(&self, j: usize) -> Lin {
        (self.u() + 1) * (2 * j as i64 + 1)
    }
}

#[derive(Default)]
struct Sketch {
    segs: Vec<Seg>,
}

impl Sketch {
    fn seg(&mut self, a: (Lin, Lin), b: (Lin, Lin)) -> usize {
        self.segs.push((a, b));
        self.segs.len() - 1
    }

    fn path(&mut self, pts: &[(Lin, Lin)]) {
        for w in pts.windows(2) {
            self.seg(w[0].clone(), w[1].clone());
        }
    }

    fn hline(&mut self, y: &Lin, x0: &Lin, x1: &Lin) -> usize {
        self.seg((x0.clone(), y.clone()), (x1.clone(), y.clone()))
    }

    fn vline(&mut self, x: &Lin, y0: &Lin, y1: &Lin) -> usize {
        self.seg((x.clone(), y0.clone()), (x.clone(), y1.clone()))
    }
}

// ---------------------------------------------------------------------------
// Planarization

struct NumSeg {
    p: (i64, i64),
    d: (i64, i64),
    len: i64,
}

fn cross(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

fn sub2(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 - b.0, a.1 - b.1)
}

impl NumSeg {
    fn new(p: (i64, i64), q: (i64, i64)) -> Option<NumSeg> {
        let (dir, len) = Direction::from_delta(q.0 - p.0, q.1 - p.1)?;
        Some(NumSeg {
            p,
            d: dir.vector(),
            len,
        })
    }

    /// Steps from `p` if `x` lies on the segment's line in direction `d`.
    fn steps_to(&self, x: (i64, i64)) -> Option<i64> {
        let w = sub2(x, self.p);
        if cross(w, self.d) != 0 {
            return None;
        }
        Some(if self.d.0 != 0 { w.0 / self.d.0 } else { w.1 / self.d.1 })
    }
}

/// Symbolic point where the line through `a` with direction `da` meets the
/// line through `b` with direction `db`; one of them must be axis-parallel.
fn meet(a: &Pt, da: (i64, i64), b: &Pt, db: (i64, i64)) -> Result<Pt, HardgenError> {
    let along = |b: &Pt, db: (i64, i64), x: Option<&Lin>, y: Option<&Lin>| -> Pt {
        // `b`'s line evaluated at the given abscissa or ordinate.
        let slope = db.0 * db.1;
        match (x, y) {
            (Some(x), _) if db.1 == 0 => (x.clone(), b.1.clone()),
            (Some(x), _) => (x.clone(), &b.1 + &((x - &b.0) * slope)),
            (_, Some(y)) if db.0 == 0 => (b.0.clone(), y.clone()),
            (_, Some(y)) => (&b.0 + &((y - &b.1) * slope), y.clone()),
            _ => unreachable!(),
        }
    };
    if da.0 == 0 {
        Ok(along(b, db, Some(&a.0), None))
    } else if da.1 == 0 {
        Ok(along(b, db, None, Some(&a.1)))
    } else if db.0 == 0 || db.1 == 0 {
        meet(b, db, a, da)
    } else {
        Err(HardgenError::Degenerate("two diagonals cross".into()))
    }
}

struct Planar {
    points: Vec<Pt>,
    num: Vec<(i64, i64)>,
    edges: Vec<(VertexId, VertexId)>,
    /// Edges covering each input segment, in order.
    seg_edges: Vec<Vec<EdgeId>>,
    rep: OctiRep,
}

fn planarize(segs: &[Seg], at: &[i64]) -> Result<Planar, HardgenError> {
    let eval = |p: &Pt| (p.0.eval(at), p.1.eval(at));
    let num: Vec<NumSeg> = segs
        .iter()
        .enumerate()
        .map(|(i, (p, q))| {
            NumSeg::new(eval(p), eval(q)).ok_or_else(|| {
                HardgenError::Degenerate(format!("segment {i} is not octilinear: {:?} {:?}", eval(p), eval(q)))
            })
        })
        .collect::<Result<_, _>>()?;

    let mut points: Vec<Pt> = Vec::new();
    let mut coords: Vec<(i64, i64)> = Vec::new();
    let mut by_sym: HashMap<Pt, usize> = HashMap::new();
    let mut by_num: HashMap<(i64, i64), usize> = HashMap::new();
    let mut intern = |p: &Pt| -> Result<usize, HardgenError> {
        if let Some(&id) = by_sym.get(p) {
            return Ok(id);
        }
        let xy = eval(p);
        if by_num.contains_key(&xy) {
            return Err(HardgenError::Degenerate(format!("distinct points meet at {xy:?}")));
        }
        let id = points.len();
        points.push(p.clone());
        coords.push(xy);
        by_sym.insert(p.clone(), id);
        by_num.insert(xy, id);
        Ok(id)
    };

    let mut edges = Vec::new();
    let mut edge_of: HashMap<(usize, usize), EdgeId> = HashMap::new();
    let mut seg_edges = Vec::with_capacity(segs.len());
    for (i, si) in num.iter().enumerate() {
        let mut stops: Vec<(i64, Pt)> = vec![(0, segs[i].0.clone()), (si.len, segs[i].1.clone())];
        for (j, sj) in num.iter().enumerate() {
            if i == j {
                continue;
            }
            let end = (sj.p.0 + sj.d.0 * sj.len, sj.p.1 + sj.d.1 * sj.len);
            for (sym, e) in [(&segs[j].0, sj.p), (&segs[j].1, end)] {
                if let Some(t) = si.steps_to(e) {
                    if t > 0 && t < si.len {
                        stops.push((t, sym.clone()));
                    }
                }
            }
            let c = cross(si.d, sj.d);
            if c == 0 {
                continue;
            }
            let w = sub2(sj.p, si.p);
            let (sn, rn) = (cross(w, sj.d), cross(w, si.d));
            let inside = |num: i64, len: i64| {
                // 0 < num / c < len
                let (num, den) = if c < 0 { (-num, -c) } else { (num, c) };
                num > 0 && num < len * den
            };
            if !inside(sn, si.len) || !inside(rn, sj.len) {
                continue;
            }
            if sn % c != 0 || rn % c != 0 {
                return Err(HardgenError::Degenerate(format!(
                    "segments {i} and {j} cross off the grid"
                )));
            }
            stops.push((sn / c, meet(&segs[i].0, si.d, &segs[j].0, sj.d)?));
        }
        stops.sort_by_key(|s| s.0);
        stops.dedup_by(|a, b| a.0 == b.0);
        let ids: Vec<usize> = stops.iter().map(|(_, p)| intern(p)).collect::<Result<_, _>>()?;
        let mut mine = Vec::with_capacity(ids.len() - 1);
        for w in ids.windows(2) {
            let key = (w[0].min(w[1]), w[0].max(w[1]));
            let e = *edge_of.entry(key).or_insert_with(|| {
                edges.push((w[0], w[1]));
                edges.len() - 1
            });
            mine.push(e);
        }
        seg_edges.push(mine);
    }

    let mut b = RepBuilder::new(points.len());
    for &(u, v) in &edges {
        let (dir, _) = Direction::from_delta(coords[v].0 - coords[u].0, coords[v].1 - coords[u].1)
            .expect("pieces of octilinear segments are octilinear");
        b.add_edge(u, v, dir);
    }
    let rep = b.build();
    if let Some(v) = validate_rep(&rep).first() {
        return Err(HardgenError::Degenerate(v.to_string()));
    }
    if !rep.is_connected() {
        return Err(HardgenError::Degenerate("layout is disconnected".into()));
    }
    Ok(Planar {
        points,
        num: coords,
        edges,
        seg_edges,
        rep,
    })
}

/// First thing met by the axis ray from `p` in direction `rv`: a vertex or
/// the interior of an edge.
fn first_hit(
    edges: &[(VertexId, VertexId)],
    num: &[(i64, i64)],
    v: VertexId,
    rv: (i64, i64),
) -> Option<Result<VertexId, EdgeId>> {
    let p = num[v];
    let mut best: Option<(i64, Result<VertexId, EdgeId>)> = None;
    for (e, &(a, b)) in edges.iter().enumerate() {
        if a == v || b == v {
            continue;
        }
        let seg = NumSeg::new(num[a], num[b])?;
        let mut consider = |t: i64, hit: Result<VertexId, EdgeId>| {
            if t > 0 && best.as_ref().is_none_or(|(bt, _)| t < *bt) {
                best = Some((t, hit));
            }
        };
        let cr = cross(rv, seg.d);
        let w = sub2(seg.p, p);
        if cr == 0 {
            if cross(w, rv) == 0 {
                for x in [a, b] {
                    let dx = sub2(num[x], p);
                    consider(dx.0 * rv.0 + dx.1 * rv.1, Ok(x));
                }
            }
            continue;
        }
        let (t, s) = (cross(w, seg.d) / cr, cross(w, rv) / cr);
        if (0..=seg.len).contains(&s) {
            let hit = match s {
                0 => Ok(a),
                s if s == seg.len => Ok(b),
                _ => Err(e),
            };
            consider(t, hit);
        }
    }
    best.map(|(_, hit)| hit)
}

/// Axis ray from a reflex corner into its face, ending at the first thing
/// it meets. The first hit must be the same at every parameter point in
/// `checks`, so the ray is part of every drawing evaluated there.
fn shoot(pl: &Planar, checks: &[Vec<(i64, i64)>], c: &Corner) -> Result<Seg, HardgenError> {
    let back = pl.rep.dir(c.in_dart).opposite();
    let v = c.vertex;
    let from = pl.points[v].clone();
    for r in [Direction::E, Direction::N, Direction::W, Direction::S] {
        let k = back.ccw_to(r);
        if k == 0 || k >= c.units || k > 4 || c.units - k > 4 {
            continue;
        }
        let rv = r.vector();
        let Some(hit) = first_hit(&pl.edges, &pl.num, v, rv) else {
            continue;
        };
        if checks.iter().any(|num| first_hit(&pl.edges, num, v, rv) != Some(hit)) {
            continue;
        }
        let to = match hit {
            Ok(x) => {
                // Symbols may differ; only the evaluated drawings matter.
                let aligned = |num: &Vec<(i64, i64)>| {
                    if r.is_horizontal() {
                        num[x].1 == num[v].1
                    } else {
                        num[x].0 == num[v].0
                    }
                };
                if !aligned(&pl.num) || !checks.iter().all(aligned) {
                    continue;
                }
                pl.points[x].clone()
            }
            Err(e) => {
                let (a, b) = pl.edges[e];
                let d = NumSeg::new(pl.num[a], pl.num[b]).expect("octilinear edge").d;
                meet(&from, rv, &pl.points[a], d)?
            }
        };
        return Ok((from, to));
    }
    Err(HardgenError::Degenerate(format!(
        "no stable ray from the reflex corner at {:?}",
        pl.num[v]
    )))
}

/// Adds axis rays until no internal face has a reflex corner outside
/// `exempt`. Rays are chosen to stay valid at every point of `checks`.
fn convexify(
    segs: &mut Vec<Seg>,
    exempt: &BTreeSet<Pt>,
    at: &[i64],
    checks: &[Vec<i64>],
) -> Result<Planar, HardgenError> {
    for _ in 0..8 {
        let pl = planarize(segs, at)?;
        let faces = derive_faces(&pl.rep).map_err(|e| HardgenError::Degenerate(e.to_string()))?;
        let nums: Vec<Vec<(i64, i64)>> = checks
            .iter()
            .map(|ps| pl.points.iter().map(|(x, y)| (x.eval(ps), y.eval(ps))).collect())
            .collect();
        let mut rays = Vec::new();
        for face in faces.faces.iter().filter(|f| !f.is_outer) {
            for c in face.corners.iter().filter(|c| c.is_reflex()) {
                if !exempt.contains(&pl.points[c.vertex]) {
                    rays.push(shoot(&pl, &nums, c)?);
                }
            }
        }
        if rays.is_empty() {
            return Ok(pl);
        }
        segs.extend(rays);
    }
    Err(HardgenError::Degenerate("convexification did not settle".into()))
}

/// Unit-1 parameter points of satisfying assignments: all of them for few
/// variables, otherwise those among a fixed spread of patterns. Falsifying
/// patterns are skipped since their drawings overlap anyway.
fn unit1_checks(formula: &CnfFormula) -> Vec<Vec<i64>> {
    let n = formula.n;
    let patterns: Vec<u64> = if n <= 6 {
        (0..1u64 << n).collect()
    } else {
        let mut x = 0x9e37_79b9_7f4a_7c15u64;
        let mut v = vec![0, u64::MAX, 0x5555_5555_5555_5555, 0xaaaa_aaaa_aaaa_aaaa];
        for _ in 0..12 {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            v.push(x);
        }
        v
    };
    patterns
        .into_iter()
        .filter(|&bits| {
            let assign: Vec<bool> = (0..n).map(|i| i < 64 && bits >> i & 1 == 1).collect();
            formula.falsified_clause(&assign).is_none()
        })
        .map(|bits| {
            let mut at = vec![1, 1];
            at.extend((0..n).map(|i| if i < 64 && bits >> i & 1 == 1 { 2 } else { 1 }));
            at
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Reduction layouts

struct Layout {
    segs: Vec<Seg>,
    literal_segs: BTreeMap<i32, usize>,
    unit_segs: BTreeMap<usize, Vec<usize>>,
    exempt: BTreeSet<Pt>,
}

/// Reference parameters: `U = 2` and every `λ_i = 3`.
fn reference_params(n: usize) -> Vec<i64> {
    let mut at = vec![3; n + 2];
    at[0] = 1;
    at[1] = 2;
    at
}

fn layout(f: &CnfFormula, variant: Variant) -> Layout {
    let n = f.n;
    let m = f.m();
    let cx = Ctx { dim: n + 2 };
    let k = |v: i64| cx.c(v);
    let u = cx.u();
    let general = variant != Variant::T1Convex;
    let parity_gadgets = if general { 6 } else { 0 };
    let clause_gadgets = if general { 8 } else { 7 };
    let units = if general { 4 } else { 3 };
    let bottom = 3 * n + parity_gadgets * n + clause_gadgets * m;
    let step = &u * 2 + 2;
    let width = &u + &(&step * bottom as i64);
    let band = &u * 6 + 4;
    let band_base = |i: usize| &(&u * 10 + 2) + &(&band * (n - i) as i64);
    let height = if general {
        &band_base(1) + &(&u * 6 + 6)
    } else {
        &u + &(&step * (3 * n + 5) as i64)
    };
    let zero = k(0);
    let mut s = Sketch::default();
    let mut exempt = BTreeSet::new();

    s.path(&[
        (zero.clone(), zero.clone()),
        (width.clone(), zero.clone()),
        (width.clone(), height.clone()),
        (zero.clone(), height.clone()),
        (zero.clone(), zero.clone()),
    ]);
    s.hline(&u, &zero, &width);
    s.vline(&u, &zero, &height);
    s.seg((zero.clone(), zero.clone()), (u.clone(), u.clone()));
    for j in 0..bottom {
        let a = cx.gadget(j);
        let b = &a + &(&u * 2 + 1);
        s.vline(&a, &zero, &u);
        s.vline(&b, &zero, &u);
        s.seg((a.clone(), zero.clone()), (&a + &u, u.clone()));
        s.seg((b.clone(), zero.clone()), (&a + &(&u + 1), u.clone()));
    }
    if !general {
        for j in 0..3 * n + 5 {
            let a = cx.gadget(j);
            let b = &a + &(&u * 2 + 1);
            s.hline(&a, &zero, &u);
            s.hline(&b, &zero, &u);
            s.seg((zero.clone(), a.clone()), (u.clone(), &a + &u));
            s.seg((zero.clone(), b.clone()), (u.clone(), &a + &(&u + 1)));
        }
    }

    // Column [c, c + w] coming down from `top`, turning right into the row
    // [z, z + w] that runs to `end`.
    let down_right = |s: &mut Sketch, c: &Lin, w: &Lin, top: &Lin, z: &Lin, end: &Lin| {
        let cw = c + w;
        let zw = z + w;
        s.vline(c, top, &zw);
        s.vline(&cw, top, &zw);
        s.hline(&zw, c, &cw);
        s.vline(&cw, z, &zw);
        s.seg((c.clone(), zw.clone()), (cw.clone(), z.clone()));
        s.hline(z, &cw, end);
        s.hline(&zw, &cw, end);
    };
    // Unit column [c, c + U] rising from the bottom row to `z`, turning
    // right (or left) into the row [z, z + U] that runs to `end`.
    let up_turn = |s: &mut Sketch, c: &Lin, z: &Lin, end: &Lin, right: bool| {
        let cu = c + &u;
        let zu = z + &u;
        s.vline(c, &u, z);
        s.vline(&cu, &u, z);
        s.hline(z, c, &cu);
        if right {
            s.vline(&cu, z, &zu);
            s.seg((c.clone(), z.clone()), (cu.clone(), zu.clone()));
            s.hline(z, &cu, end);
            s.hline(&zu, &cu, end);
        } else {
            s.vline(c, z, &zu);
            s.seg((cu.clone(), z.clone()), (c.clone(), zu.clone()));
            s.hline(z, end, c);
            s.hline(&zu, end, c);
        }
    };
    // Copy gadget inside the row [y0, y0 + h] at `c`; the copies land on the
    // bottom side (or the top side when `up`).
    let row_copy = |s: &mut Sketch, c: &Lin, y0: &Lin, h: &Lin, up: bool| {
        let c2 = &(c + &(h * 2)) + 1;
        let yh = y0 + h;
        s.vline(c, y0, &yh);
        s.vline(&c2, y0, &yh);
        let (from, to) = if up { (y0, &yh) } else { (&yh, y0) };
        s.seg((c.clone(), from.clone()), (c + h, to.clone()));
        s.seg((c2.clone(), from.clone()), (&c2 - h, to.clone()));
    };

    // Variables, top to bottom; x_i's rows sit in band i.
    let mut literal_segs = BTreeMap::new();
    let mut unit_segs = BTreeMap::new();
    // literal -> (row bottom, row height)
    let mut rows: BTreeMap<i32, (Lin, Lin)> = BTreeMap::new();
    for i in 1..=n {
        let base = band_base(i);
        let lam = cx.lam(i);
        let x = &cx.gadget(3 * (i - 1) + 2) + &(&u + 1);
        let y = &base + &(&u * 3 + 3);
        for t in 0..3 {
            let c = cx.gadget(3 * (i - 1) + t);
            let z = &y + &(&u * (2 - t as i64));
            up_turn(&mut s, &c, &z, &x, true);
        }
        let sides = (0..3)
            .map(|q| s.vline(&x, &(&y + &(&u * q)), &(&y + &(&u * (q + 1)))))
            .collect();
        unit_segs.insert(i, sides);
        let x_lam = &x + &lam;
        let x_3u = &x + &(&u * 3);
        literal_segs.insert(i as i32, s.hline(&y, &x, &x_lam));
        literal_segs.insert(-(i as i32), s.hline(&y, &x_lam, &x_3u));
        s.seg((x_3u.clone(), y.clone()), (x.clone(), &y + &(&u * 3)));
        let not_lam = &(&u * 3) - &lam;
        let pos_row = &base + 1;
        let neg_row = &(&base + 2) + &lam;
        down_right(&mut s, &x, &lam, &y, &pos_row, &width);
        down_right(&mut s, &x_lam, &not_lam, &y, &neg_row, &width);
        rows.insert(i as i32, (pos_row, lam.clone()));
        rows.insert(-(i as i32), (neg_row, not_lam));
    }

    if general {
        for i in 1..=n {
            let zone = cx.gadget(3 * n + parity_gadgets * (i - 1));
            let unit_col = cx.gadget(3 * n + parity_gadgets * (i - 1) + 3);
            s.vline(&unit_col, &u, &height);
            s.vline(&(&unit_col + &u), &u, &height);
            let starts = [(i as i32, &zone + 1), (-(i as i32), &(&zone + &(&u * 7)) + 8)];
            for (lit, g) in starts {
                let (y0, h) = rows[&lit].clone();
                row_copy(&mut s, &g, &y0, &h, true);
                let top = &y0 + &h;
                let gh = &g + &h;
                s.vline(&g, &top, &height);
                s.vline(&gh, &top, &height);
                // Chamfered block on the column's end, outside the frame.
                let y1 = &height + &u;
                let y2 = &y1 + 1;
                let corners = [
                    (g.clone(), y1.clone()),
                    (&g + 1, y2.clone()),
                    (&gh + -1, y2),
                    (gh.clone(), y1),
                ];
                s.path(&[
                    (g.clone(), height.clone()),
                    corners[0].clone(),
                    corners[1].clone(),
                    corners[2].clone(),
                    corners[3].clone(),
                    (gh.clone(), height.clone()),
                ]);
                exempt.extend(corners);
            }
        }
        if variant == Variant::Kappa8 {
            let lid = &height + &(&u * 2 + 2);
            s.vline(&zero, &height, &lid);
            s.vline(&width, &height, &lid);
            s.hline(&lid, &zero, &width);
            for i in 1..=n + 1 {
                let x = cx.gadget(3 * n + parity_gadgets * (i - 1));
                s.vline(&x, &height, &lid);
            }
        }
    }

    // Clauses; their rows live in the band between the bottom row and x_n.
    // The line under them gives downward rays a vertex-free target.
    s.hline(&(&u + 1), &u, &width);
    let floor = &u + 2;
    for (jj, clause) in f.clauses.iter().enumerate() {
        let a = cx.gadget(3 * n + parity_gadgets * n + clause_gadgets * jj);
        let mut lits = *clause;
        // Top row first: smaller variable, negated literal above the plain one.
        lits.sort_by_key(|&l| (l.unsigned_abs(), l > 0));
        let heights: Vec<Lin> = lits.iter().map(|l| rows[l].1.clone()).collect();
        let mut cs: Vec<Lin> = Vec::with_capacity(3);
        let mut left_copy = [true; 3];
        for t in 0..3 {
            if t == 0 {
                cs.push(&(&a + &(&u * 2)) + 1);
            } else if lits[t] == lits[t - 1] {
                cs.push(&(&cs[t - 1] + &heights[t - 1]) + 1);
                left_copy[t] = !left_copy[t - 1];
            } else {
                cs.push(&(&cs[t - 1] + &(&u * 3)) + 1);
            }
        }
        let xl = &(&cs[2] + &(&u * 3)) + 1;
        let q = if general { 12 } else { 11 };
        let xr = &(&a + &(&(&u + 1) * q)) + -1;
        let total = heights.iter().fold(k(0), |acc, h| &acc + h);
        for t in 0..3 {
            let (y0, h) = rows[&lits[t]].clone();
            if left_copy[t] {
                row_copy(&mut s, &cs[t], &y0, &h, false);
            }
            let below: Lin = heights[t + 1..].iter().fold(k(0), |acc, h| &acc + h);
            let z = &floor + &below;
            down_right(&mut s, &cs[t], &h, &y0, &z, &xl);
        }
        for w in 0..units {
            let c = &a + &(&(&u + 1) * (q + w as i64));
            let z = &floor + &(&u * w as i64);
            up_turn(&mut s, &c, &z, &xr, false);
        }
        let top = &floor + &total;
        s.hline(&floor, &xl, &xr);
        s.hline(&top, &xl, &xr);
        s.vline(&xl, &floor, &top);
        s.vline(&xr, &floor, &top);
    }

    Layout {
        segs: s.segs,
        literal_segs,
        unit_segs,
        exempt,
    }
}

/// Builds the reduction instance of `formula` for `variant`.
pub fn gen_instance(formula: &CnfFormula, variant: Variant) -> Result<HardInstance, HardgenError> {
    let CnfFormula { n, .. } = *formula;
    let mut lay = layout(formula, variant);
    let checks = if variant == Variant::T1Convex {
        unit1_checks(formula)
    } else {
        Vec::new()
    };
    let pl = convexify(&mut lay.segs, &lay.exempt, &reference_params(n), &checks)?;
    let literal_edges = lay
        .literal_segs
        .iter()
        .map(|(&l, &sg)| (l, pl.seg_edges[sg].clone()))
        .collect();
    let unit_edges = lay
        .unit_segs
        .iter()
        .map(|(&i, sgs)| (i, sgs.iter().flat_map(|&sg| pl.seg_edges[sg].iter().copied()).collect()))
        .collect();
    Ok(HardInstance {
        rep: pl.rep,
        variant,
        n,
        m: formula.m(),
        literal_edges,
        unit_edges,
        formula: formula.clone(),
        coords: pl.points,
    })
}

/// Drawing of the instance with unit length `unit`.
///
/// At unit 1 the literal of `x_i` has length 2 if `assignment[i - 1]` holds
/// and 1 otherwise, which needs a satisfying assignment. At unit 2 every
/// literal has length 3 and the assignment is not used.
pub fn witness_drawing(inst: &HardInstance, assignment: &[bool], unit: i64) -> Result<GridDrawing, HardgenError> {
    if assignment.len() != inst.n {
        return Err(HardgenError::AssignmentLength {
            got: assignment.len(),
            n: inst.n,
        });
    }
    let at = match unit {
        1 if inst.variant == Variant::T1Convex => {
            if let Some(clause) = inst.formula.falsified_clause(assignment) {
                return Err(HardgenError::UnsatisfiableAtUnit1 { clause });
            }
            let mut at = vec![1, 1];
            at.extend(assignment.iter().map(|&t| if t { 2 } else { 1 }));
            at
        }
        2 => reference_params(inst.n),
        _ => {
            return Err(HardgenError::UnsupportedUnit {
                unit,
                variant: inst.variant,
            })
        }
    };
    let drw = GridDrawing::new(inst.coords.iter().map(|(x, y)| (x.eval(&at), y.eval(&at))).collect());
    if let Some(v) = validate_drawing(&inst.rep, &drw).first() {
        return Err(HardgenError::Degenerate(format!("witness at unit {unit}: {v:?}")));
    }
    Ok(drw)
}

// ---------------------------------------------------------------------------
// Standalone gadgets

fn gadget_from_sketch(
    kind: GadgetKind,
    s: Sketch,
    labels: Vec<(&'static str, Vec<usize>)>,
    turns: u8,
) -> Result<Gadget, HardgenError> {
    let turn = |p: &Pt| -> Pt {
        let mut p = p.clone();
        for _ in 0..turns % 4 {
            p = (&p.1 * -1, p.0);
        }
        p
    };
    let segs: Vec<Seg> = s.segs.iter().map(|(a, b)| (turn(a), turn(b))).collect();
    let at = [1, 1];
    let pl = planarize(&segs, &at)?;
    let labels = labels
        .into_iter()
        .map(|(name, sgs)| {
            (
                name,
                sgs.iter().flat_map(|&sg| pl.seg_edges[sg].iter().copied()).collect(),
            )
        })
        .collect();
    Ok(Gadget {
        kind,
        drawing: Some(GridDrawing::new(pl.num.clone()).normalized()),
        rep: pl.rep,
        labels,
    })
}

/// Clause face whose literal and unit edges are all pinned to the width of
/// diagonally split squares, so the free edge on the unit side must have
/// length zero: no drawing exists.
fn tied_clause(kind: GadgetKind, units: usize, turns: u8) -> Gadget {
    let d = |dir: Direction| dir.rotate(2 * (turns % 4) as i64);
    let mut b = RepBuilder::new(0);
    let lits: Vec<VertexId> = (0..4).map(|_| b.add_vertex()).collect();
    let outer: Vec<VertexId> = (0..4).map(|_| b.add_vertex()).collect();
    let right: Vec<VertexId> = (0..=units).map(|_| b.add_vertex()).collect();
    let far: Vec<VertexId> = (0..=units).map(|_| b.add_vertex()).collect();
    let top = b.add_vertex();
    let far_top = b.add_vertex();
    let strip: Vec<VertexId> = (0..4).map(|_| b.add_vertex()).collect();
    let mut labels: BTreeMap<&'static str, Vec<EdgeId>> = BTreeMap::new();
    // Literal side and the column of squares to its left.
    for t in 0..3 {
        let e = b.add_edge(lits[t], lits[t + 1], d(Direction::N));
        labels.entry("literals").or_default().push(e);
        b.add_edge(outer[t], outer[t + 1], d(Direction::N));
        b.add_edge(outer[t], lits[t + 1], d(Direction::NE));
    }
    for t in 0..4 {
        b.add_edge(outer[t], lits[t], d(Direction::E));
    }
    // Unit side and the column of squares to its right.
    for t in 0..units {
        let e = b.add_edge(right[t], right[t + 1], d(Direction::N));
        labels.entry("units").or_default().push(e);
        b.add_edge(far[t], far[t + 1], d(Direction::N));
        b.add_edge(right[t], far[t + 1], d(Direction::NE));
    }
    for t in 0..=units {
        b.add_edge(right[t], far[t], d(Direction::E));
    }
    let free = b.add_edge(right[units], top, d(Direction::N));
    labels.insert("free", vec![free]);
    b.add_edge(lits[0], right[0], d(Direction::E));
    b.add_edge(lits[3], top, d(Direction::E));
    b.add_edge(top, far_top, d(Direction::E));
    b.add_edge(far[units], far_top, d(Direction::N));
    // A strip below ties the two column widths together.
    b.add_edge(strip[0], strip[1], d(Direction::E));
    b.add_edge(strip[1], strip[2], d(Direction::E));
    b.add_edge(strip[2], strip[3], d(Direction::E));
    b.add_edge(strip[0], outer[0], d(Direction::N));
    b.add_edge(strip[1], lits[0], d(Direction::N));
    b.add_edge(strip[2], right[0], d(Direction::N));
    b.add_edge(strip[3], far[0], d(Direction::N));
    b.add_edge(strip[0], lits[0], d(Direction::NE));
    b.add_edge(strip[2], far[0], d(Direction::NE));
    Gadget {
        kind,
        rep: b.build(),
        drawing: None,
        labels,
    }
}

/// Builds one gadget on its own.
pub fn build_gadget(kind: GadgetKind, params: &GadgetParams) -> Result<Gadget, HardgenError> {
    let cx = Ctx { dim: 2 };
    let k = |v: i64| cx.c(v);
    let p = |x: i64, y: i64| (k(x), k(y));
    let mut s = Sketch::default();
    let turns = params.quarter_turns;
    let labels = match kind {
        GadgetKind::Propagation => {
            let left = vec![s.seg(p(0, 0), p(0, 1)), s.seg(p(0, 1), p(0, 3))];
            let bottom = vec![s.seg(p(0, 0), p(1, 0)), s.seg(p(1, 0), p(2, 0))];
            let right = vec![s.seg(p(2, 0), p(2, 3))];
            let top = vec![s.seg(p(0, 3), p(2, 3))];
            vec![("left", left), ("right", right), ("bottom", bottom), ("top", top)]
        }
        GadgetKind::Rerouting => {
            let horizontal = vec![s.seg(p(0, 0), p(2, 0))];
            let vertical = vec![s.seg(p(2, 0), p(2, 2))];
            s.seg(p(0, 0), p(2, 2));
            vec![("horizontal", horizontal), ("vertical", vertical)]
        }
        GadgetKind::Copy => {
            let source = vec![s.seg(p(0, 0), p(0, 2))];
            let side = vec![s.seg(p(5, 0), p(5, 2))];
            let top_left = vec![s.seg(p(0, 2), p(2, 2))];
            let top_right = vec![s.seg(p(3, 2), p(5, 2))];
            s.seg(p(2, 2), p(3, 2));
            s.seg(p(0, 0), p(5, 0));
            s.seg(p(0, 0), p(2, 2));
            s.seg(p(5, 0), p(3, 2));
            vec![
                ("source", source),
                ("side", side),
                ("top_left", top_left),
                ("top_right", top_right),
            ]
        }
        GadgetKind::Variable => {
            let units = (0..3).map(|t| s.seg(p(0, 2 * t), p(0, 2 * t + 2))).collect();
            let pos = vec![s.seg(p(0, 0), p(4, 0))];
            let neg = vec![s.seg(p(4, 0), p(6, 0))];
            s.seg(p(6, 0), p(0, 6));
            if params.tied {
                s.seg(p(-2, 0), p(-2, 6));
                for t in 0..4 {
                    s.seg(p(-2, 2 * t), p(0, 2 * t));
                }
                for t in 0..3 {
                    s.seg(p(-2, 2 * t), p(0, 2 * t + 2));
                }
            }
            vec![("units", units), ("literal", pos), ("negated", neg)]
        }
        GadgetKind::ClauseUnit | GadgetKind::ClauseGeneral => {
            let units = if kind == GadgetKind::ClauseUnit { 3 } else { 4 };
            if params.tied {
                return Ok(tied_clause(kind, units, turns));
            }
            // Literal lengths 2, 2, 1 against unit 1.
            let marks = [0, 2, 4, 5];
            let lits = (0..3).map(|t| s.seg(p(0, marks[t]), p(0, marks[t + 1]))).collect();
            let unit_edges = (0..units).map(|t| s.seg(p(3, t as i64), p(3, t as i64 + 1))).collect();
            let free = vec![s.seg(p(3, units as i64), p(3, 5))];
            s.seg(p(0, 0), p(3, 0));
            s.seg(p(0, 5), p(3, 5));
            vec![("literals", lits), ("units", unit_edges), ("free", free)]
        }
        GadgetKind::Parity => {
            // Columns for x, the unit and not-x under a common top; a
            // chamfered block sits on each literal column.
            s.path(&[p(0, 0), p(12, 0), p(12, 4), p(0, 4), p(0, 0)]);
            let mut labels = Vec::new();
            for (name, x0, w) in [("literal", 1, 3), ("unit", 5, 2), ("negated", 8, 3)] {
                s.seg(p(x0, 0), p(x0, 4));
                s.seg(p(x0 + w, 0), p(x0 + w, 4));
                labels.push((name, vec![s.seg(p(x0, 0), p(x0 + w, 0))]));
                if name != "unit" {
                    s.path(&[
                        p(x0, 4),
                        p(x0, 6),
                        p(x0 + 1, 7),
                        p(x0 + w - 1, 7),
                        p(x0 + w, 6),
                        p(x0 + w, 4),
                    ]);
                }
            }
            labels
        }
    };
    gadget_from_sketch(kind, s, labels, turns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::solve_realization;
    use crate::oracle::{oracle_for_each, oracle_realize, OracleConfig};
    use crate::rep::compute_params;
    use proptest::prelude::*;

    fn sample() -> CnfFormula {
        CnfFormula::new(3, vec![[1, 2, 3], [-1, -2, 3], [-1, 2, 3]]).unwrap()
    }

    fn length(d: &GridDrawing, rep: &OctiRep, edges: &[EdgeId]) -> i64 {
        edges
            .iter()
            .map(|&e| {
                let (a, b, _) = rep.edge(e);
                let (p, q) = (d.position(a), d.position(b));
                (p.0 - q.0).abs().max((p.1 - q.1).abs())
            })
            .sum()
    }

    /// Runs `check` on every oracle drawing inside `grid`; returns how many.
    fn every_drawing(g: &Gadget, grid: (i64, i64), mut check: impl FnMut(&GridDrawing)) -> usize {
        let mut seen = 0;
        oracle_for_each(&g.rep, grid, &OracleConfig::default(), &mut |d| {
            check(d);
            seen += 1;
            true
        })
        .unwrap();
        seen
    }

    #[test]
    fn dims_match_closed_forms() {
        assert_eq!(expected_dims(3, 3, 1), (121, 57));
        assert_eq!(expected_dims(3, 3, 2), (182, 86));
        assert_eq!(expected_dims(1, 1, 1), (41, 33));
        for n in 1..20 {
            for m in 1..20 {
                assert_eq!(expected_dims(n, m, 1), (12 * n + 28 * m + 1, 12 * n + 21));
                assert_eq!(expected_dims(n, m, 2), (18 * n + 42 * m + 2, 18 * n + 32));
            }
        }
    }

    #[test]
    fn gap_against_rational_form() {
        for n in 1..=30u64 {
            for m in 1..=30u64 {
                let (w1, h1) = (12 * n + 28 * m + 1, 12 * n + 21);
                let (w2, h2) = (18 * n + 42 * m + 2, 18 * n + 32);
                let lhs = num_rational::Ratio::new(9 * h1 * w1, 4);
                assert_eq!(gap_holds(n, m), lhs < num_rational::Ratio::from_integer(h2 * w2));
                assert!(gap_holds(n, m));
            }
        }
    }

    #[test]
    fn dimacs_round_trip_and_errors() {
        let text = "c sample\np cnf 3 3\n1 2 3 0\n-1 -2 3 0\n-1 2\n3 0\n";
        let f = CnfFormula::parse_dimacs(text).unwrap();
        assert_eq!(f, sample());
        assert_eq!(CnfFormula::parse_dimacs(&f.to_dimacs()).unwrap(), f);
        for bad in [
            "1 2 3 0\n",
            "p cnf 3 1\n1 2 0\n",
            "p cnf 3 2\n1 2 3 0\n",
            "p cnf 2 1\n1 2 3 0\n",
            "p cnf 3 1\n1 2 x 0\n",
            "p cnf 3 1\n1 2 3\n",
        ] {
            assert!(CnfFormula::parse_dimacs(bad).is_err(), "{bad:?}");
        }
        assert!(CnfFormula::new(2, vec![[1, 0, 2]]).is_err());
    }

    #[test]
    fn names_parse() {
        for v in [Variant::T1Convex, Variant::Phi1, Variant::Kappa8] {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert!("t2".parse::<Variant>().is_err());
        for k in GadgetKind::ALL {
            assert_eq!(format!("{k:?}").parse::<GadgetKind>().unwrap(), k);
        }
        assert_eq!("clause-unit".parse::<GadgetKind>().unwrap(), GadgetKind::ClauseUnit);
        assert!(matches!(
            "spiral".parse::<GadgetKind>(),
            Err(HardgenError::UnknownKind(_))
        ));
    }

    #[test]
    fn t1_instance_and_witnesses() {
        let inst = gen_instance(&sample(), Variant::T1Convex).unwrap();
        assert!(validate_rep(&inst.rep).is_empty());
        assert_eq!(compute_params(&inst.rep).unwrap().omega, 4);
        let a = [false, true, true];
        let d1 = witness_drawing(&inst, &a, 1).unwrap();
        assert_eq!((d1.width(), d1.height()), (121, 57));
        for (i, &t) in a.iter().enumerate() {
            let pos = length(&d1, &inst.rep, &inst.literal_edges[&(i as i32 + 1)]);
            let neg = length(&d1, &inst.rep, &inst.literal_edges[&-(i as i32 + 1)]);
            assert_eq!(pos, if t { 2 } else { 1 });
            assert_eq!(pos + neg, 3);
            for &e in &inst.unit_edges[&(i + 1)] {
                assert_eq!(length(&d1, &inst.rep, &[e]), 1);
            }
        }
        let d2 = witness_drawing(&inst, &a, 2).unwrap();
        assert_eq!((d2.width(), d2.height()), (182, 86));
        assert_eq!(
            witness_drawing(&inst, &[true, false, false], 1),
            Err(HardgenError::UnsatisfiableAtUnit1 { clause: 2 })
        );
        assert!(matches!(
            witness_drawing(&inst, &[true], 1),
            Err(HardgenError::AssignmentLength { .. })
        ));
        assert!(matches!(
            witness_drawing(&inst, &a, 3),
            Err(HardgenError::UnsupportedUnit { .. })
        ));
    }

    #[test]
    fn general_variants() {
        let phi = gen_instance(&sample(), Variant::Phi1).unwrap();
        assert!(validate_rep(&phi.rep).is_empty());
        assert_eq!(compute_params(&phi.rep).unwrap().phi, 1);
        assert!(witness_drawing(&phi, &[true; 3], 2).is_ok());
        assert!(matches!(
            witness_drawing(&phi, &[true; 3], 1),
            Err(HardgenError::UnsupportedUnit { .. })
        ));
        let kappa = gen_instance(&sample(), Variant::Kappa8).unwrap();
        assert!(validate_rep(&kappa.rep).is_empty());
        assert_eq!(compute_params(&kappa.rep).unwrap().kappa, 8);
        assert!(witness_drawing(&kappa, &[false; 3], 2).is_ok());
    }

    #[test]
    fn every_gadget_builds_in_every_orientation() {
        for kind in GadgetKind::ALL {
            for quarter_turns in 0..4 {
                for tied in [false, true] {
                    let g = build_gadget(kind, &GadgetParams { quarter_turns, tied }).unwrap();
                    assert!(validate_rep(&g.rep).is_empty(), "{kind:?}");
                    if let Some(d) = &g.drawing {
                        assert!(validate_drawing(&g.rep, d).is_empty(), "{kind:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn propagation_keeps_opposite_sides_equal() {
        for quarter_turns in [0, 1] {
            let g = build_gadget(
                GadgetKind::Propagation,
                &GadgetParams {
                    quarter_turns,
                    tied: false,
                },
            )
            .unwrap();
            let seen = every_drawing(&g, (5, 5), |d| {
                let l = |name| length(d, &g.rep, &g.labels[name]);
                assert_eq!(l("left"), l("right"));
                assert_eq!(l("top"), l("bottom"));
            });
            assert!(seen > 10);
        }
    }

    #[test]
    fn rerouting_turns_a_length_by_ninety_degrees() {
        let g = build_gadget(GadgetKind::Rerouting, &GadgetParams::default()).unwrap();
        let seen = every_drawing(&g, (6, 6), |d| {
            assert_eq!(
                length(d, &g.rep, &g.labels["horizontal"]),
                length(d, &g.rep, &g.labels["vertical"])
            );
        });
        assert_eq!(seen, 6);
    }

    #[test]
    fn copy_triplicates() {
        let g = build_gadget(GadgetKind::Copy, &GadgetParams::default()).unwrap();
        let seen = every_drawing(&g, (8, 4), |d| {
            let l = |name| length(d, &g.rep, &g.labels[name]);
            let s = l("source");
            assert_eq!((l("side"), l("top_left"), l("top_right")), (s, s, s));
        });
        assert!(seen > 0);
    }

    #[test]
    fn tied_variable_sums_to_three_units() {
        let g = build_gadget(
            GadgetKind::Variable,
            &GadgetParams {
                quarter_turns: 0,
                tied: true,
            },
        )
        .unwrap();
        let mut splits = BTreeSet::new();
        let seen = every_drawing(&g, (8, 6), |d| {
            let units: Vec<i64> = g.labels["units"].iter().map(|&e| length(d, &g.rep, &[e])).collect();
            assert!(units.iter().all(|&u| u == units[0]));
            let x = length(d, &g.rep, &g.labels["literal"]);
            let nx = length(d, &g.rep, &g.labels["negated"]);
            assert_eq!(x + nx, 3 * units[0]);
            splits.insert((units[0], x));
        });
        assert!(seen > 0);
        // At unit 2 every split of six into two positive parts shows up.
        assert!((1..6).all(|x| splits.contains(&(2, x))));
    }

    #[test]
    fn clause_needs_a_long_literal() {
        for kind in [GadgetKind::ClauseUnit, GadgetKind::ClauseGeneral] {
            let open = build_gadget(kind, &GadgetParams::default()).unwrap();
            assert!(solve_realization(&open.rep).is_ok());
            let tied = build_gadget(
                kind,
                &GadgetParams {
                    quarter_turns: 0,
                    tied: true,
                },
            )
            .unwrap();
            assert!(validate_rep(&tied.rep).is_empty());
            let verdict = solve_realization(&tied.rep);
            assert!(
                matches!(verdict, Err(crate::flow::FlowError::Infeasible { .. })),
                "{kind:?}: {verdict:?}"
            );
            assert_eq!(oracle_realize(&tied.rep, (10, 10)).unwrap(), None, "{kind:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn random_small_formulas(
            n in 1usize..=4,
            raw in prop::collection::vec(prop::array::uniform3((1i32..=4, any::<bool>())), 1..=3),
        ) {
            let clauses: Vec<[i32; 3]> = raw
                .iter()
                .map(|c| c.map(|(v, s)| { let v = (v - 1) % n as i32 + 1; if s { v } else { -v } }))
                .collect();
            let f = CnfFormula::new(n, clauses).unwrap();
            let inst = gen_instance(&f, Variant::T1Convex).unwrap();
            prop_assert!(validate_rep(&inst.rep).is_empty());
            prop_assert_eq!(compute_params(&inst.rep).unwrap().omega, 4);
            let (n64, m64) = (n as u64, f.m() as u64);
            let d2 = witness_drawing(&inst, &vec![true; n], 2).unwrap();
            prop_assert_eq!((d2.width() as u64, d2.height() as u64), expected_dims(n64, m64, 2));
            for bits in 0..1u32 << n {
                let a: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
                match witness_drawing(&inst, &a, 1) {
                    Ok(d) => {
                        prop_assert!(f.falsified_clause(&a).is_none());
                        prop_assert_eq!((d.width() as u64, d.height() as u64), expected_dims(n64, m64, 1));
                    }
                    Err(e) => prop_assert_eq!(e, HardgenError::UnsatisfiableAtUnit1 { clause: f.falsified_clause(&a).unwrap() }),
                }
            }
        }
    }
}
