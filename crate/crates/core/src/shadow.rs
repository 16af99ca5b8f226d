//! Realizability for representations with reflex corners.
//!
//! Every face gets a shadow cycle inset from its boundary, wired to the
//! boundary by horizontal and vertical connectors. The shadow is then
//! enclosed in a rectangle `J` and every reflex corner of a shadow face is
//! closed off by horizontal alignment edges; each such extension is convex
//! and goes to the flow solver.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::drawing::{validate_drawing, GridDrawing};
use crate::flow::{drawing_from_lengths, solve_realization, FlowError};
use crate::oracle::{oracle_realize_with, OracleConfig, OracleError};
use crate::rep::{derive_faces, validate_rep, Dart, DartId, Direction, EdgeId, FaceId, OctiRep, RepBuilder, VertexId};

/// Distance of each shadow-cycle line from its boundary line, measured
/// along a grid axis. Even so that every inset corner is a lattice point.
const INSET: i64 = 2;

/// Scale applied to a drawing before its shadow is inserted by [`lift_drawing`].
pub const LIFT_SCALE: i64 = 16;

const AXES: [Direction; 4] = [Direction::E, Direction::N, Direction::W, Direction::S];

/// Extensions handed to the solver per parallel batch.
const BATCH: usize = 32;

fn cross(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

fn add(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 + b.0, a.1 + b.1)
}

fn times(k: i64, d: Direction) -> (i64, i64) {
    let (x, y) = d.vector();
    (k * x, k * y)
}

/// Grid shift of the line along `d` towards its right-hand side.
fn right_shift(d: Direction) -> (i64, i64) {
    let normal = if d.is_diagonal() { d.rotate(-1) } else { d.rotate(-2) };
    times(INSET, normal)
}

/// Shadow vertex position relative to its corner vertex: where the two
/// boundary lines meet after both are shifted into the face.
pub fn inset_delta(d_in: Direction, d_out: Direction) -> (i64, i64) {
    let (a, b) = (d_in.vector(), d_out.vector());
    let c1 = cross(a, right_shift(d_in));
    let c2 = cross(b, right_shift(d_out));
    let det = cross(a, b);
    assert!(det != 0, "parallel corner has no inset point");
    let nx = c1 * b.0 - a.0 * c2;
    let ny = b.1 * c1 - a.1 * c2;
    debug_assert!(nx % det == 0 && ny % det == 0);
    (nx / det, ny / det)
}

/// Positive integers `(s, t)` with `s p + t q = r`.
fn positive_combo(p: (i64, i64), q: (i64, i64), r: (i64, i64)) -> Option<(i64, i64)> {
    let det = cross(p, q);
    if det == 0 {
        return None;
    }
    let (sn, tn) = (cross(r, q), cross(p, r));
    if sn % det != 0 || tn % det != 0 {
        return None;
    }
    let (s, t) = (sn / det, tn / det);
    (s > 0 && t > 0).then_some((s, t))
}

fn strictly_inside(from: Direction, units: u8, d: Direction) -> bool {
    let k = from.ccw_to(d);
    k > 0 && k < units
}

/// Whether `d` splits the sector of `units` starting at `from` into two
/// parts of at most four units each.
fn splits_convex(from: Direction, units: u8, d: Direction) -> bool {
    let k = from.ccw_to(d);
    k > 0 && k < units && k <= 4 && units - k <= 4
}

/// How a shadow vertex is tied to its corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connector {
    /// Edge from the corner vertex straight to the shadow vertex.
    Direct(Direction),
    /// Edge from the corner vertex to a subdivision vertex on the cycle edge
    /// leaving the shadow vertex along `along`, `offset` steps from it.
    OnCycle {
        along: Direction,
        dir: Direction,
        offset: i64,
    },
    /// Edge to the shadow vertex from a subdivision vertex on the boundary
    /// edge at the corner vertex that points along `along`, `offset` steps
    /// from it.
    OnBoundary {
        along: Direction,
        dir: Direction,
        offset: i64,
    },
}

impl Connector {
    pub fn direction(&self) -> Direction {
        match *self {
            Connector::Direct(d) => d,
            Connector::OnCycle { dir, .. } | Connector::OnBoundary { dir, .. } => dir,
        }
    }
}

/// Connector for a corner entered along `d_in` and left along `d_out`.
///
/// Reflex corners subdivide the shadow cycle and convex ones the boundary
/// when the inset point is not straight up, down or sideways. The leaving
/// edge is tried before the entering one. Every choice splits the angles it
/// touches into parts of at most 90 degrees, which keeps the faces between
/// the input and the shadow cycles convex.
pub fn choose_connector(d_in: Direction, d_out: Direction, units: u8) -> Connector {
    let back = d_in.opposite();
    let delta = inset_delta(d_in, d_out);
    // Every split must leave convex parts: the corner itself for reflex
    // corners, the outside of the cycle corner at the shadow vertex otherwise.
    let fits = |c: Direction| {
        if units >= 5 {
            splits_convex(back, units, c)
        } else {
            splits_convex(d_out, 8 - units, c.opposite())
        }
    };
    if let Some((dir, _)) = Direction::from_delta(delta.0, delta.1) {
        if !dir.is_diagonal() && fits(dir) {
            return Connector::Direct(dir);
        }
    }
    let mut alongs = [d_out, back];
    if units >= 5 {
        alongs.sort_by_key(|d| (!d.is_diagonal(), d.is_vertical()));
    }
    for along in alongs {
        for c in AXES.into_iter().filter(|&c| fits(c)) {
            if units >= 5 {
                let neg = times(-1, along);
                if let Some((_, lambda)) = positive_combo(c.vector(), neg, delta) {
                    return Connector::OnCycle {
                        along,
                        dir: c,
                        offset: lambda,
                    };
                }
            } else if let Some((sigma, _)) = positive_combo(along.vector(), c.vector(), delta) {
                return Connector::OnBoundary {
                    along,
                    dir: c,
                    offset: sigma,
                };
            }
        }
    }
    unreachable!("no connector for corner {d_in}->{d_out} with {units} units")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowCorner {
    pub vertex: VertexId,
    pub face: FaceId,
    pub units: u8,
    /// Dart of the input arriving at the corner.
    pub in_dart: DartId,
    pub shadow: VertexId,
    pub connector: Connector,
    /// Where the connector meets the cycle or the boundary, if subdivided.
    pub subdivision: Option<VertexId>,
    /// `shadow - vertex` in a drawing lifted by [`lift_drawing`].
    pub inset: (i64, i64),
}

/// What an edge of the shadow representation stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShadowEdge {
    /// A piece of an input edge.
    Original(EdgeId),
    /// A piece of the shadow cycle of an input face.
    Cycle(FaceId),
    /// The connector of the given corner (index into `corners`).
    Connector(usize),
}

#[derive(Clone, Debug)]
pub struct ShadowResult {
    pub rep: OctiRep,
    /// Vertices `0..original_vertices` of `rep` are the input vertices.
    pub original_vertices: usize,
    /// One entry per strictly convex or reflex corner of the input.
    pub corners: Vec<ShadowCorner>,
    /// Shadow cycle of each input face, in boundary order.
    pub cycles: Vec<Vec<VertexId>>,
    pub subdivisions: Vec<VertexId>,
    pub edge_kinds: Vec<ShadowEdge>,
    /// Outer face of the input.
    pub outer_face: FaceId,
}

impl ShadowResult {
    /// Shadow vertices of `v` in face `f` (more than one only at cut vertices).
    pub fn shadows_of(&self, v: VertexId, f: FaceId) -> Vec<VertexId> {
        self.corners
            .iter()
            .filter(|c| c.vertex == v && c.face == f)
            .map(|c| c.shadow)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ShadowError {
    #[error("invalid representation: {0}")]
    Invalid(String),
    #[error("representation is disconnected")]
    Disconnected,
    #[error("vertex {0} has degree 1")]
    Pendant(VertexId),
}

pub fn build_shadow(rep: &OctiRep) -> Result<ShadowResult, ShadowError> {
    if let Some(v) = validate_rep(rep).first() {
        return Err(ShadowError::Invalid(v.to_string()));
    }
    if !rep.is_connected() {
        return Err(ShadowError::Disconnected);
    }
    if let Some(v) = (0..rep.vertex_count()).find(|&v| rep.degree(v) == 1) {
        return Err(ShadowError::Pendant(v));
    }
    let faces = derive_faces(rep).map_err(|e| ShadowError::Invalid(e.to_string()))?;
    let outer_face = faces
        .outer
        .ok_or_else(|| ShadowError::Invalid("no outer face".into()))?;
    let n = rep.vertex_count();

    let mut next_vertex = n;
    let mut corners = Vec::new();
    // Per face, indices into `corners` in boundary order.
    let mut face_corners: Vec<Vec<usize>> = vec![Vec::new(); faces.len()];
    for (f, face) in faces.faces.iter().enumerate() {
        for c in face.corners.iter().filter(|c| !c.is_flat()) {
            let (d_in, d_out) = (rep.dir(c.in_dart), rep.dir(c.out_dart));
            face_corners[f].push(corners.len());
            corners.push(ShadowCorner {
                vertex: c.vertex,
                face: f,
                units: c.units,
                in_dart: c.in_dart,
                shadow: next_vertex,
                connector: choose_connector(d_in, d_out, c.units),
                subdivision: None,
                inset: inset_delta(d_in, d_out),
            });
            next_vertex += 1;
        }
    }
    // Where each boundary connector meets the input: edge, whether measured
    // from its tail, and distance.
    let boundary_spot = |c: &ShadowCorner| match c.connector {
        Connector::OnBoundary { along, offset, .. } => {
            let out = faces.faces[c.face]
                .corners
                .iter()
                .find(|k| k.in_dart == c.in_dart)
                .unwrap()
                .out_dart;
            // On the leaving edge the corner is the tail of `out`; on the
            // entering edge it is the head of `in_dart`.
            let (edge, near_tail) = if along == rep.dir(out) {
                (out / 2, out % 2 == 0)
            } else {
                (c.in_dart / 2, c.in_dart % 2 == 1)
            };
            Some((edge, near_tail, offset))
        }
        _ => None,
    };
    let mut subdivisions = Vec::new();
    // Two sharp corners on either side of one edge can meet it at the same
    // point; their connectors leave on opposite sides and share the vertex.
    let mut shared: BTreeMap<(EdgeId, bool, i64), VertexId> = BTreeMap::new();
    for c in corners.iter_mut() {
        let spot = boundary_spot(c);
        if matches!(c.connector, Connector::Direct(_)) {
            continue;
        }
        if let Some(&v) = spot.and_then(|k| shared.get(&k)) {
            c.subdivision = Some(v);
            continue;
        }
        c.subdivision = Some(next_vertex);
        subdivisions.push(next_vertex);
        if let Some(k) = spot {
            shared.insert(k, next_vertex);
        }
        next_vertex += 1;
    }

    let mut b = RepBuilder::new(next_vertex);
    let mut kinds = Vec::new();
    let chain = |b: &mut RepBuilder, kinds: &mut Vec<ShadowEdge>, stops: &[VertexId], dir, kind| {
        let first = b.edge_count();
        for w in stops.windows(2) {
            b.add_edge(w[0], w[1], dir);
            kinds.push(kind);
        }
        first
    };

    // Input edges, split where convex corners attach their connectors.
    // Subdivisions near the tail come first, ordered by distance.
    let mut on_edge: Vec<Vec<(bool, i64, VertexId)>> = vec![Vec::new(); rep.edge_count()];
    for (&(edge, near_tail, offset), &v) in &shared {
        let key = if near_tail { offset } else { -offset };
        on_edge[edge].push((!near_tail, key, v));
    }
    for (e, along) in on_edge.iter_mut().enumerate() {
        let (u, v, dir) = rep.edge(e);
        along.sort();
        let mut stops = vec![u];
        stops.extend(along.iter().map(|&(_, _, s)| s));
        stops.push(v);
        chain(&mut b, &mut kinds, &stops, dir, ShadowEdge::Original(e));
    }

    // Shadow cycles, split where reflex corners attach their connectors.
    let mut cycles = Vec::with_capacity(faces.len());
    let mut outer_edge = None;
    for (f, list) in face_corners.iter().enumerate() {
        let m = list.len();
        cycles.push(list.iter().map(|&i| corners[i].shadow).collect());
        for k in 0..m {
            let (ci, cj) = (&corners[list[k]], &corners[list[(k + 1) % m]]);
            let fc = &faces.faces[f];
            let out = fc.corners.iter().find(|x| x.in_dart == ci.in_dart).unwrap().out_dart;
            let dir = rep.dir(out);
            let mut stops = vec![ci.shadow];
            if let Connector::OnCycle { along, .. } = ci.connector {
                if along == dir {
                    stops.push(ci.subdivision.unwrap());
                }
            }
            if let Connector::OnCycle { along, .. } = cj.connector {
                if along == dir.opposite() {
                    stops.push(cj.subdivision.unwrap());
                }
            }
            stops.push(cj.shadow);
            let first = chain(&mut b, &mut kinds, &stops, dir, ShadowEdge::Cycle(f));
            if f == outer_face && k == 0 {
                outer_edge = Some(first);
            }
        }
    }

    for (i, c) in corners.iter().enumerate() {
        match c.connector {
            Connector::Direct(d) => {
                b.add_edge(c.vertex, c.shadow, d);
            }
            Connector::OnCycle { dir, .. } => {
                b.add_edge(c.vertex, c.subdivision.unwrap(), dir);
            }
            Connector::OnBoundary { dir, .. } => {
                b.add_edge(c.subdivision.unwrap(), c.shadow, dir);
            }
        }
        kinds.push(ShadowEdge::Connector(i));
    }

    let shadow_rep = b.build_raw(outer_edge.map(|e| 2 * e));
    debug_assert!(validate_rep(&shadow_rep).is_empty(), "{:?}", validate_rep(&shadow_rep));
    Ok(ShadowResult {
        rep: shadow_rep,
        original_vertices: n,
        corners,
        cycles,
        subdivisions,
        edge_kinds: kinds,
        outer_face,
    })
}

/// Inserts the shadow into a drawing of the input scaled by [`LIFT_SCALE`].
pub fn lift_drawing(shadow: &ShadowResult, drawing: &GridDrawing) -> GridDrawing {
    let mut coords = vec![(0, 0); shadow.rep.vertex_count()];
    for (v, slot) in coords.iter_mut().enumerate().take(shadow.original_vertices) {
        let (x, y) = drawing.position(v);
        *slot = (LIFT_SCALE * x, LIFT_SCALE * y);
    }
    for c in &shadow.corners {
        let at = coords[c.vertex];
        let s = add(at, c.inset);
        coords[c.shadow] = s;
        match c.connector {
            Connector::Direct(_) => {}
            Connector::OnCycle { along, offset, .. } => coords[c.subdivision.unwrap()] = add(s, times(offset, along)),
            Connector::OnBoundary { along, offset, .. } => {
                coords[c.subdivision.unwrap()] = add(at, times(offset, along))
            }
        }
    }
    GridDrawing::new(coords)
}

/// Compares oracle realizability of `rep` in `grid` with that of its shadow.
///
/// A drawing of `rep` is lifted and validated against the shadow. Without
/// one, the shadow is searched in the same grid with the input vertices
/// placed first; any drawing of the shadow restricts to one of `rep`.
pub fn shadow_equiv_check(
    rep: &OctiRep,
    shadow: &ShadowResult,
    grid: (i64, i64),
    cfg: &OracleConfig,
) -> Result<bool, OracleError> {
    match oracle_realize_with(rep, grid, cfg)?.0 {
        Some(d) => Ok(validate_drawing(&shadow.rep, &lift_drawing(shadow, &d)).is_empty()),
        None => {
            let cfg = OracleConfig {
                first_vertices: shadow.original_vertices,
                ..*cfg
            };
            Ok(oracle_realize_with(&shadow.rep, grid, &cfg)?.0.is_none())
        }
    }
}

/// Horizontal edge from a reflex corner added by an extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alignment {
    pub from: VertexId,
    pub dir: Direction,
    pub target: AlignTarget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlignTarget {
    Vertex(VertexId),
    /// A new vertex subdividing an edge of the base graph.
    Edge {
        base: EdgeId,
        vertex: VertexId,
    },
}

#[derive(Clone, Debug)]
pub struct Extension {
    /// Shadow, `J` and alignment edges; the outer face lies outside `J`.
    pub rep: OctiRep,
    /// Corners of `J` counterclockwise from the lower left.
    pub j_cycle: [VertexId; 4],
    pub alignments: Vec<Alignment>,
    /// Subdivision vertices on each split base edge, in order from its tail.
    pub subdivision_orders: BTreeMap<EdgeId, Vec<VertexId>>,
}

/// The shadow plus a disjoint rectangle `J` around it. Returns the
/// representation, the corners of `J`, and a dart of `J` facing inwards.
pub fn base_graph(shadow: &ShadowResult) -> (OctiRep, [VertexId; 4], DartId) {
    let rep = &shadow.rep;
    let n = rep.vertex_count();
    let m = rep.edge_count();
    let mut darts = rep.darts().to_vec();
    let j = [n, n + 1, n + 2, n + 3];
    for (k, dir) in [Direction::E, Direction::N, Direction::W, Direction::S]
        .into_iter()
        .enumerate()
    {
        darts.push(Dart { origin: j[k], dir });
        darts.push(Dart {
            origin: j[(k + 1) % 4],
            dir: dir.opposite(),
        });
    }
    (assemble(n + 4, darts, Some(2 * m)), j, 2 * m + 1)
}

fn assemble(vertex_count: usize, darts: Vec<Dart>, outer: Option<DartId>) -> OctiRep {
    let mut rotation = vec![Vec::new(); vertex_count];
    for (d, dart) in darts.iter().enumerate() {
        rotation[dart.origin].push(d);
    }
    for rot in &mut rotation {
        rot.sort_by_key(|&d| (darts[d].dir, d));
    }
    OctiRep::from_parts(vertex_count, darts, rotation, outer)
}

fn face_walk(rep: &OctiRep, start: DartId) -> Vec<DartId> {
    let mut walk = vec![start];
    let mut d = rep.face_next(start).expect("dart in rotation");
    while d != start {
        walk.push(d);
        d = rep.face_next(d).expect("dart in rotation");
    }
    walk
}

/// Necessary condition for a drawing: identifying endpoints of edges with
/// no extent along an axis leaves the strict order along that axis acyclic.
fn order_consistent(rep: &OctiRep) -> bool {
    let n = rep.vertex_count();
    for axis in 0..2 {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let extent = |d: Direction| {
            let (x, y) = d.vector();
            if axis == 0 {
                x
            } else {
                y
            }
        };
        for e in 0..rep.edge_count() {
            let (u, v, d) = rep.edge(e);
            if extent(d) == 0 {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                parent[a] = b;
            }
        }
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for e in 0..rep.edge_count() {
            let (u, v, d) = rep.edge(e);
            let s = extent(d);
            if s == 0 {
                continue;
            }
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return false;
            }
            let (lo, hi) = if s > 0 { (a, b) } else { (b, a) };
            succ[lo].push(hi);
            indeg[hi] += 1;
        }
        let roots: Vec<usize> = (0..n).filter(|&x| find(&mut parent, x) == x).collect();
        let mut stack: Vec<usize> = roots.iter().copied().filter(|&r| indeg[r] == 0).collect();
        let mut seen = 0;
        while let Some(x) = stack.pop() {
            seen += 1;
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    stack.push(y);
                }
            }
        }
        if seen != roots.len() {
            return false;
        }
    }
    true
}

#[derive(Clone)]
struct Partial {
    vertex_count: usize,
    darts: Vec<Dart>,
    /// Base edge each current edge is a piece of.
    base_edge: Vec<EdgeId>,
    alignments: Vec<Alignment>,
    next: usize,
}

/// Depth-first stream of the planar extensions of a shadow.
///
/// Every horizontal direction strictly inside a reflex corner of a shadow
/// face (or of the face between the shadow and `J`) needs an alignment
/// edge. Requirements are served in a fixed order; each one picks a vertex
/// or an edge on the boundary of the face its direction currently points
/// into, so alignments never cross and choosing among the pieces of an
/// already split edge enumerates the subdivision orders. Branches whose
/// face angle sums or axis orders are contradictory are cut.
pub struct Extensions {
    requirements: Vec<(VertexId, Direction)>,
    j: [VertexId; 4],
    j_inner: DartId,
    outer: DartId,
    base_heads: Vec<(VertexId, VertexId, Direction)>,
    stack: Vec<Partial>,
}

pub fn enumerate_extensions(shadow: &ShadowResult) -> Extensions {
    let (base, j, j_inner) = base_graph(shadow);
    let faces = derive_faces(&base).expect("shadow is valid");
    let outer = base.outer_dart().expect("base has an outer dart");
    let mut requirements = Vec::new();
    for (f, face) in faces.faces.iter().enumerate() {
        if Some(f) == faces.outer {
            continue;
        }
        for c in face.corners.iter().filter(|c| c.is_reflex()) {
            let from = base.dir(c.in_dart).opposite();
            for dir in [Direction::E, Direction::W] {
                if strictly_inside(from, c.units, dir) {
                    requirements.push((c.vertex, dir));
                }
            }
        }
    }
    requirements.sort();
    let keep = order_consistent(&base);
    let start = Partial {
        vertex_count: base.vertex_count(),
        darts: base.darts().to_vec(),
        base_edge: (0..base.edge_count()).collect(),
        alignments: Vec::new(),
        next: 0,
    };
    Extensions {
        requirements,
        j,
        j_inner,
        outer,
        base_heads: (0..base.edge_count()).map(|e| base.edge(e)).collect(),
        stack: if keep { vec![start] } else { Vec::new() },
    }
}

impl Extensions {
    pub fn requirements(&self) -> &[(VertexId, Direction)] {
        &self.requirements
    }

    fn rep_of(&self, p: &Partial) -> OctiRep {
        assemble(p.vertex_count, p.darts.clone(), Some(self.outer))
    }

    fn children(&self, p: &Partial, rep: &OctiRep, v: VertexId, dir: Direction) -> Vec<Partial> {
        let rot = rep.rotation(v);
        let k = rot.len();
        let slot = (0..k).find(|&i| {
            let (d1, d2) = (rot[i], rot[(i + 1) % k]);
            let units = if k == 1 { 8 } else { rep.dir(d1).ccw_to(rep.dir(d2)) };
            strictly_inside(rep.dir(d1), units, dir)
        });
        let Some(slot) = slot else {
            return Vec::new();
        };
        let mut walk = face_walk(rep, rot[slot] ^ 1);
        let (_, comp) = rep.components();
        if comp[v] != comp[self.j[0]] {
            let sum: u32 = walk
                .iter()
                .map(|&t| rep.corner_units(t, rep.face_next(t).unwrap()) as u32)
                .sum();
            if sum == 4 * walk.len() as u32 + 8 {
                walk.extend(face_walk(rep, self.j_inner));
            }
        }
        let adjacent = |w: VertexId| rep.rotation(v).iter().any(|&d| rep.head(d) == w);
        let back = dir.opposite();
        let mut out = Vec::new();
        for &t in &walk {
            let w = rep.head(t);
            let units = rep.corner_units(t, rep.face_next(t).unwrap());
            if w != v && strictly_inside(rep.dir(t ^ 1), units, back) && !adjacent(w) {
                let mut c = p.clone();
                c.darts.push(Dart { origin: v, dir });
                c.darts.push(Dart { origin: w, dir: back });
                c.base_edge.push(usize::MAX);
                c.alignments.push(Alignment {
                    from: v,
                    dir,
                    target: AlignTarget::Vertex(w),
                });
                out.push(c);
            }
            let d = rep.dir(t);
            if !d.is_horizontal() && rep.origin(t) != v && w != v && (5..=7).contains(&d.ccw_to(back)) {
                let e = t / 2;
                let mut c = p.clone();
                let y = c.vertex_count;
                c.vertex_count += 1;
                let (fwd, tail_head) = (c.darts[2 * e], c.darts[2 * e + 1]);
                c.darts[2 * e + 1].origin = y;
                c.darts.push(Dart {
                    origin: y,
                    dir: fwd.dir,
                });
                c.darts.push(tail_head);
                c.base_edge.push(p.base_edge[e]);
                c.darts.push(Dart { origin: v, dir });
                c.darts.push(Dart { origin: y, dir: back });
                c.base_edge.push(usize::MAX);
                c.alignments.push(Alignment {
                    from: v,
                    dir,
                    target: AlignTarget::Edge {
                        base: p.base_edge[e],
                        vertex: y,
                    },
                });
                out.push(c);
            }
        }
        out.retain_mut(|c| {
            c.next += 1;
            let r = self.rep_of(c);
            validate_rep(&r).is_empty() && order_consistent(&r)
        });
        out
    }

    fn finish(&self, p: Partial, rep: OctiRep) -> Option<Extension> {
        if !rep.is_connected() {
            return None;
        }
        let faces = derive_faces(&rep).ok()?;
        let convex = faces
            .faces
            .iter()
            .all(|f| f.is_outer || f.corners.iter().all(|c| !c.is_reflex()));
        if !convex {
            return None;
        }
        let mut orders = BTreeMap::new();
        for (b, &(tail, head, dir)) in self.base_heads.iter().enumerate() {
            if !p.base_edge.iter().skip(self.base_heads.len()).any(|&x| x == b) {
                continue;
            }
            let mut inner = Vec::new();
            let mut cur = tail;
            while cur != head {
                let d = rep
                    .rotation(cur)
                    .iter()
                    .copied()
                    .find(|&d| rep.dir(d) == dir && p.base_edge[d / 2] == b)?;
                cur = rep.head(d);
                if cur != head {
                    inner.push(cur);
                }
            }
            orders.insert(b, inner);
        }
        Some(Extension {
            rep,
            j_cycle: self.j,
            alignments: p.alignments,
            subdivision_orders: orders,
        })
    }
}

impl Iterator for Extensions {
    type Item = Extension;

    fn next(&mut self) -> Option<Extension> {
        while let Some(mut p) = self.stack.pop() {
            let rep = self.rep_of(&p);
            if p.next == self.requirements.len() {
                if let Some(ext) = self.finish(p, rep) {
                    return Some(ext);
                }
                continue;
            }
            let (v, dir) = self.requirements[p.next];
            if rep.rotation(v).iter().any(|&d| rep.dir(d) == dir) {
                p.next += 1;
                self.stack.push(p);
                continue;
            }
            let kids = self.children(&p, &rep, v, dir);
            self.stack.extend(kids.into_iter().rev());
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FptError {
    #[error("rejected input: {0}")]
    Rejected(String),
    #[error("coordinates overflow while reinserting degree-1 vertices")]
    Overflow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FptReport {
    /// A drawing of the input, or `None` if it has no realization.
    pub drawing: Option<GridDrawing>,
    /// Extensions handed to the flow solver, over all components.
    pub extensions: u64,
}

/// A drawing of `rep`, or `None` if it has no realization.
pub fn realize_fpt(rep: &OctiRep) -> Result<Option<GridDrawing>, FptError> {
    realize_fpt_report(rep).map(|r| r.drawing)
}

/// As [`realize_fpt`], also counting extensions.
///
/// Degree-1 vertices are peeled off first (a shadow cycle cannot follow a
/// full-turn corner) and put back afterwards: after scaling a drawing by 3,
/// a unit edge from a vertex into a free direction meets nothing else.
/// Components are realized separately and placed side by side.
pub fn realize_fpt_report(rep: &OctiRep) -> Result<FptReport, FptError> {
    if let Some(v) = validate_rep(rep).first() {
        return Err(FptError::Rejected(v.to_string()));
    }
    let (count, comp) = rep.components();
    let mut coords = vec![(0i64, 0i64); rep.vertex_count()];
    let mut extensions = 0;
    let mut x_offset = 0;
    for c in 0..count {
        let verts: Vec<VertexId> = (0..rep.vertex_count()).filter(|&v| comp[v] == c).collect();
        let (sub, _) = induced(rep, &verts);
        let report = realize_connected(&sub)?;
        extensions += report.extensions;
        let Some(d) = report.drawing else {
            return Ok(FptReport {
                drawing: None,
                extensions,
            });
        };
        let d = d.normalized();
        for (i, &v) in verts.iter().enumerate() {
            let (x, y) = d.position(i);
            coords[v] = (x + x_offset, y);
        }
        x_offset += d.width() + 1;
    }
    Ok(FptReport {
        drawing: Some(GridDrawing::new(coords)),
        extensions,
    })
}

/// The subrepresentation on `verts` (a union of components), relabeled in
/// the given order.
fn induced(rep: &OctiRep, verts: &[VertexId]) -> (OctiRep, Vec<usize>) {
    let mut index = vec![usize::MAX; rep.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        index[v] = i;
    }
    let mut b = RepBuilder::new(verts.len());
    for e in 0..rep.edge_count() {
        let (u, v, d) = rep.edge(e);
        if index[u] != usize::MAX && index[v] != usize::MAX {
            b.add_edge(index[u], index[v], d);
        }
    }
    (b.build(), index)
}

fn realize_connected(rep: &OctiRep) -> Result<FptReport, FptError> {
    let n = rep.vertex_count();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| rep.degree(v)).collect();
    // Each layer: (leaf, neighbor, direction from neighbor to leaf).
    let mut layers: Vec<Vec<(VertexId, VertexId, Direction)>> = Vec::new();
    loop {
        let mut layer = Vec::new();
        for v in 0..n {
            if !alive[v] || degree[v] != 1 {
                continue;
            }
            let d = rep.rotation(v).iter().copied().find(|&d| alive[rep.head(d)]).unwrap();
            let u = rep.head(d);
            // Of an isolated edge keep the smaller endpoint.
            if degree[u] == 1 && u > v {
                continue;
            }
            layer.push((v, u, rep.dir(d).opposite()));
        }
        if layer.is_empty() {
            break;
        }
        for &(v, u, _) in &layer {
            alive[v] = false;
            degree[u] -= 1;
        }
        layers.push(layer);
    }

    let core: Vec<VertexId> = (0..n).filter(|&v| alive[v]).collect();
    let mut pos: Vec<Option<(i64, i64)>> = vec![None; n];
    let mut extensions = 0;
    if core.len() == 1 {
        pos[core[0]] = Some((0, 0));
    } else {
        let (sub, _) = induced(rep, &core);
        let shadow = build_shadow(&sub).map_err(|e| FptError::Rejected(e.to_string()))?;
        let mut stream = enumerate_extensions(&shadow);
        let mut found = None;
        loop {
            let batch: Vec<Extension> = stream.by_ref().take(BATCH).collect();
            if batch.is_empty() {
                break;
            }
            extensions += batch.len() as u64;
            found = batch.par_iter().find_map_first(solve_extension);
            if found.is_some() {
                break;
            }
        }
        let Some(d) = found else {
            return Ok(FptReport {
                drawing: None,
                extensions,
            });
        };
        for (i, &v) in core.iter().enumerate() {
            pos[v] = Some(d.position(i));
        }
    }

    for layer in layers.iter().rev() {
        let place = |pos: &mut Vec<Option<(i64, i64)>>| {
            for &(v, u, dir) in layer {
                let at = pos[u].expect("neighbor placed before leaf");
                pos[v] = Some(add(at, dir.vector()));
            }
        };
        let mut trial = pos.clone();
        place(&mut trial);
        if placed_valid(rep, &trial) {
            pos = trial;
            continue;
        }
        for p in pos.iter_mut().flatten() {
            *p = (
                p.0.checked_mul(3).ok_or(FptError::Overflow)?,
                p.1.checked_mul(3).ok_or(FptError::Overflow)?,
            );
        }
        place(&mut pos);
    }
    let coords = pos.into_iter().map(|p| p.expect("every vertex placed")).collect();
    Ok(FptReport {
        drawing: Some(GridDrawing::new(coords).normalized()),
        extensions,
    })
}

/// Whether the placed vertices draw the part of `rep` they induce.
fn placed_valid(rep: &OctiRep, pos: &[Option<(i64, i64)>]) -> bool {
    let verts: Vec<VertexId> = (0..rep.vertex_count()).filter(|&v| pos[v].is_some()).collect();
    let (sub, _) = induced(rep, &verts);
    let drawing = GridDrawing::new(verts.iter().map(|&v| pos[v].unwrap()).collect());
    validate_drawing(&sub, &drawing).is_empty()
}

fn solve_extension(ext: &Extension) -> Option<GridDrawing> {
    match solve_realization(&ext.rep) {
        Ok(lengths) => drawing_from_lengths(&ext.rep, &lengths).ok(),
        Err(FlowError::Infeasible { .. }) => None,
        Err(e) => {
            debug_assert!(false, "extension rejected by the solver: {e}");
            None
        }
    }
}
