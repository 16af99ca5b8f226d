//! Octilinear representations: a plane graph given by a rotation system
//! whose darts carry one of the eight octilinear directions.
//!
//! Edge `e` owns darts `2e` (first endpoint to second) and `2e + 1`
//! (reverse). A dart's face is the face on its right-hand side; the face
//! successor of `u -> v` is the dart counterclockwise-next after `v -> u`
//! in the rotation at `v`. With this convention internal faces are walked
//! clockwise and the outer face counterclockwise.

use std::collections::VecDeque;
use std::fmt;

pub type VertexId = usize;
pub type DartId = usize;
pub type EdgeId = usize;
pub type FaceId = usize;

/// One of the eight octilinear directions, counted counterclockwise from
/// east in steps of 45 degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction(u8);

impl Direction {
    pub const E: Direction = Direction(0);
    pub const NE: Direction = Direction(1);
    pub const N: Direction = Direction(2);
    pub const NW: Direction = Direction(3);
    pub const W: Direction = Direction(4);
    pub const SW: Direction = Direction(5);
    pub const S: Direction = Direction(6);
    pub const SE: Direction = Direction(7);

    pub const ALL: [Direction; 8] = [
        Direction(0),
        Direction(1),
        Direction(2),
        Direction(3),
        Direction(4),
        Direction(5),
        Direction(6),
        Direction(7),
    ];

    pub fn new(value: u8) -> Option<Direction> {
        (value < 8).then_some(Direction(value))
    }

    /// Wraps any integer onto the eight directions.
    pub fn wrapping(value: i64) -> Direction {
        Direction(value.rem_euclid(8) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_diagonal(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn is_horizontal(self) -> bool {
        self.0 == 0 || self.0 == 4
    }

    pub fn is_vertical(self) -> bool {
        self.0 == 2 || self.0 == 6
    }

    pub fn opposite(self) -> Direction {
        Direction((self.0 + 4) % 8)
    }

    /// Rotates counterclockwise by `steps` eighth-turns.
    pub fn rotate(self, steps: i64) -> Direction {
        Direction::wrapping(self.0 as i64 + steps)
    }

    /// Counterclockwise distance from `self` to `other`, in `0..8`.
    pub fn ccw_to(self, other: Direction) -> u8 {
        (other.0 + 8 - self.0) % 8
    }

    /// Unit grid step along this direction.
    pub fn vector(self) -> (i64, i64) {
        match self.0 {
            0 => (1, 0),
            1 => (1, 1),
            2 => (0, 1),
            3 => (-1, 1),
            4 => (-1, 0),
            5 => (-1, -1),
            6 => (0, -1),
            _ => (1, -1),
        }
    }

    /// Horizontal extent contributed per unit of length (0 or 1).
    pub fn has_width(self) -> bool {
        !self.is_vertical()
    }

    /// Vertical extent contributed per unit of length (0 or 1).
    pub fn has_height(self) -> bool {
        !self.is_horizontal()
    }

    /// Recovers `(direction, length)` from a grid displacement, if the
    /// displacement is a positive multiple of an octilinear unit step.
    pub fn from_delta(dx: i64, dy: i64) -> Option<(Direction, i64)> {
        if dx == 0 && dy == 0 {
            return None;
        }
        let len = if dx == 0 {
            dy.abs()
        } else if dy == 0 || dx.abs() == dy.abs() {
            dx.abs()
        } else {
            return None;
        };
        let step = (dx.signum(), dy.signum());
        Direction::ALL
            .into_iter()
            .find(|d| d.vector() == step)
            .map(|d| (d, len))
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dart {
    pub origin: VertexId,
    pub dir: Direction,
}

/// Angle classification of a corner measured in eighth-turns.
pub fn is_reflex(units: u8) -> bool {
    units >= 5
}

pub fn is_inflex(units: u8) -> bool {
    (1..=3).contains(&units)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OctiRep {
    vertex_count: usize,
    darts: Vec<Dart>,
    rotation: Vec<Vec<DartId>>,
    outer_dart: Option<DartId>,
}

impl OctiRep {
    /// Assembles a representation from raw parts without checking any
    /// invariant; use [`validate_rep`] afterwards.
    pub fn from_parts(
        vertex_count: usize,
        darts: Vec<Dart>,
        rotation: Vec<Vec<DartId>>,
        outer_dart: Option<DartId>,
    ) -> OctiRep {
        OctiRep {
            vertex_count,
            darts,
            rotation,
            outer_dart,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.darts.len() / 2
    }

    pub fn dart_count(&self) -> usize {
        self.darts.len()
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn dart(&self, d: DartId) -> Dart {
        self.darts[d]
    }

    pub fn twin(d: DartId) -> DartId {
        d ^ 1
    }

    pub fn edge_of(d: DartId) -> EdgeId {
        d / 2
    }

    pub fn origin(&self, d: DartId) -> VertexId {
        self.darts[d].origin
    }

    pub fn head(&self, d: DartId) -> VertexId {
        self.darts[d ^ 1].origin
    }

    pub fn dir(&self, d: DartId) -> Direction {
        self.darts[d].dir
    }

    /// Endpoints and direction of edge `e`, oriented along dart `2e`.
    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId, Direction) {
        (self.origin(2 * e), self.head(2 * e), self.dir(2 * e))
    }

    pub fn rotation(&self, v: VertexId) -> &[DartId] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<DartId>] {
        &self.rotation
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v].len()
    }

    pub fn outer_dart(&self) -> Option<DartId> {
        self.outer_dart
    }

    pub fn set_outer_dart(&mut self, d: Option<DartId>) {
        self.outer_dart = d;
    }

    /// Overwrites a single dart's direction; used to build corrupted
    /// fixtures for the validator.
    pub fn set_dart_direction(&mut self, d: DartId, dir: Direction) {
        self.darts[d].dir = dir;
    }

    /// The dart counterclockwise-next after `d` around its origin.
    pub fn rotation_next(&self, d: DartId) -> Option<DartId> {
        let rot = self.rotation.get(self.origin(d))?;
        let pos = rot.iter().position(|&x| x == d)?;
        Some(rot[(pos + 1) % rot.len()])
    }

    /// Face successor of `d`: counterclockwise-next after `twin(d)` at the head.
    pub fn face_next(&self, d: DartId) -> Option<DartId> {
        self.rotation_next(d ^ 1)
    }

    /// Units of the corner at the head of `d` between `d` and its face successor.
    pub fn corner_units(&self, d: DartId, next: DartId) -> u8 {
        let units = self.dir(d ^ 1).ccw_to(self.dir(next));
        if units == 0 && next == (d ^ 1) {
            8
        } else {
            units
        }
    }

    pub fn is_diagonal_edge(&self, e: EdgeId) -> bool {
        self.dir(2 * e).is_diagonal()
    }

    /// Dart of edge `e` leaving `v`, if `v` is an endpoint.
    pub fn dart_from(&self, e: EdgeId, v: VertexId) -> Option<DartId> {
        if self.origin(2 * e) == v {
            Some(2 * e)
        } else if self.origin(2 * e + 1) == v {
            Some(2 * e + 1)
        } else {
            None
        }
    }

    /// First dart `u -> v`, if any.
    pub fn find_dart(&self, u: VertexId, v: VertexId) -> Option<DartId> {
        (0..self.darts.len()).find(|&d| self.origin(d) == u && self.head(d) == v)
    }

    /// Connected components over vertices, as a component index per vertex.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut comp = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        for start in 0..self.vertex_count {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &d in self.rotation.get(v).map(Vec::as_slice).unwrap_or(&[]) {
                    let w = self.head(d);
                    if w < self.vertex_count && comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count > 0 && self.components().0 == 1
    }

    /// Relabels vertices: new id of vertex `v` is `perm[v]`. Edge ids and
    /// rotations are carried over.
    pub fn relabel_vertices(&self, perm: &[VertexId]) -> OctiRep {
        let darts = self
            .darts
            .iter()
            .map(|d| Dart {
                origin: perm[d.origin],
                dir: d.dir,
            })
            .collect();
        let mut rotation = vec![Vec::new(); self.vertex_count];
        for (v, rot) in self.rotation.iter().enumerate() {
            rotation[perm[v]] = rot.clone();
        }
        OctiRep {
            vertex_count: self.vertex_count,
            darts,
            rotation,
            outer_dart: self.outer_dart,
        }
    }
}

/// Incremental constructor. Rotations are derived by sorting each vertex's
/// darts by direction, which is the only counterclockwise order a
/// realizable representation can have.
#[derive(Clone, Debug, Default)]
pub struct RepBuilder {
    vertex_count: usize,
    darts: Vec<Dart>,
}

impl RepBuilder {
    pub fn new(vertex_count: usize) -> RepBuilder {
        RepBuilder {
            vertex_count,
            darts: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.darts.len() / 2
    }

    /// Adds the edge `u -> v` leaving `u` in direction `dir`.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, dir: Direction) -> EdgeId {
        assert!(u < self.vertex_count && v < self.vertex_count, "vertex out of range");
        self.darts.push(Dart { origin: u, dir });
        self.darts.push(Dart {
            origin: v,
            dir: dir.opposite(),
        });
        self.darts.len() / 2 - 1
    }

    /// Adds a path `u -> ... -> v` of `segments` edges in direction `dir`,
    /// creating `segments - 1` fresh interior vertices.
    pub fn add_path(&mut self, u: VertexId, v: VertexId, dir: Direction, segments: usize) -> Vec<EdgeId> {
        assert!(segments >= 1);
        let mut prev = u;
        let mut edges = Vec::with_capacity(segments);
        for i in 0..segments {
            let next = if i + 1 == segments { v } else { self.add_vertex() };
            edges.push(self.add_edge(prev, next, dir));
            prev = next;
        }
        edges
    }

    fn sorted_rotation(&self) -> Vec<Vec<DartId>> {
        let mut rotation = vec![Vec::new(); self.vertex_count];
        for (d, dart) in self.darts.iter().enumerate() {
            rotation[dart.origin].push(d);
        }
        for rot in &mut rotation {
            rot.sort_by_key(|&d| (self.darts[d].dir, d));
        }
        rotation
    }

    /// Finishes with the outer face given as the face on the left of `u -> v`.
    pub fn build_with_outer_left(self, u: VertexId, v: VertexId) -> OctiRep {
        let mut rep = self.build_raw(None);
        let outer = rep.find_dart(v, u);
        rep.outer_dart = outer;
        rep
    }

    /// Finishes with the given dart's face as the outer face.
    pub fn build_raw(self, outer_dart: Option<DartId>) -> OctiRep {
        let rotation = self.sorted_rotation();
        OctiRep {
            vertex_count: self.vertex_count,
            darts: self.darts,
            rotation,
            outer_dart,
        }
    }

    /// Finishes and picks as outer face the face of vertex 0's component
    /// whose corner sum is `4k + 8`.
    pub fn build(self) -> OctiRep {
        let mut rep = self.build_raw(None);
        rep.outer_dart = find_outer_dart(&rep);
        rep
    }
}

/// The first face (in canonical order) of vertex 0's component whose
/// corner units sum to `4k + 8`.
pub fn find_outer_dart(rep: &OctiRep) -> Option<DartId> {
    if rep.dart_count() == 0 {
        return None;
    }
    let (_, comp) = rep.components();
    let faces = trace_faces(rep).ok()?;
    faces
        .iter()
        .find(|f| {
            let sum: u32 = f.corners.iter().map(|c| c.units as u32).sum();
            comp[rep.origin(f.darts[0])] == comp[rep.origin(0)] && sum == 4 * f.corners.len() as u32 + 8
        })
        .map(|f| f.darts[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Corner {
    pub vertex: VertexId,
    pub face: FaceId,
    /// Angle in eighth-turns, in `1..=8` for valid representations.
    pub units: u8,
    /// Dart arriving at the corner's vertex along the face.
    pub in_dart: DartId,
    /// Dart leaving the corner's vertex along the face.
    pub out_dart: DartId,
}

impl Corner {
    pub fn is_reflex(&self) -> bool {
        is_reflex(self.units)
    }

    pub fn is_inflex(&self) -> bool {
        is_inflex(self.units)
    }

    pub fn is_flat(&self) -> bool {
        self.units == 4
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Boundary darts in traversal order, starting at the smallest dart id.
    pub darts: Vec<DartId>,
    /// `corners[i]` sits at the head of `darts[i]`.
    pub corners: Vec<Corner>,
    pub is_outer: bool,
}

impl Face {
    pub fn unit_sum(&self) -> u32 {
        self.corners.iter().map(|c| c.units as u32).sum()
    }

    pub fn reflex_count(&self) -> usize {
        self.corners.iter().filter(|c| c.is_reflex()).count()
    }

    pub fn inflex_count(&self) -> usize {
        self.corners.iter().filter(|c| c.is_inflex()).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSet {
    pub faces: Vec<Face>,
    pub dart_face: Vec<FaceId>,
    pub outer: Option<FaceId>,
}

impl FaceSet {
    pub fn face_of(&self, d: DartId) -> FaceId {
        self.dart_face[d]
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn corners(&self) -> impl Iterator<Item = &Corner> {
        self.faces.iter().flat_map(|f| f.corners.iter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FaceError {
    #[error("rotation at vertex {vertex} does not list dart {dart}")]
    DartNotInRotation { vertex: VertexId, dart: DartId },
    #[error("face traversal starting at dart {start} does not close")]
    OpenTraversal { start: DartId },
}

fn trace_faces(rep: &OctiRep) -> Result<Vec<Face>, FaceError> {
    let n = rep.dart_count();
    for d in 0..n {
        let v = rep.origin(d);
        if v >= rep.vertex_count() || !rep.rotation(v).contains(&d) {
            return Err(FaceError::DartNotInRotation { vertex: v, dart: d });
        }
    }
    let mut seen = vec![false; n];
    let mut faces = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let face_id = faces.len();
        let mut darts = Vec::new();
        let mut corners = Vec::new();
        let mut d = start;
        loop {
            if seen[d] {
                return Err(FaceError::OpenTraversal { start });
            }
            seen[d] = true;
            let next = rep.face_next(d).ok_or(FaceError::DartNotInRotation {
                vertex: rep.head(d),
                dart: d ^ 1,
            })?;
            darts.push(d);
            corners.push(Corner {
                vertex: rep.head(d),
                face: face_id,
                units: rep.corner_units(d, next),
                in_dart: d,
                out_dart: next,
            });
            d = next;
            if d == start {
                break;
            }
        }
        faces.push(Face {
            darts,
            corners,
            is_outer: false,
        });
    }
    Ok(faces)
}

/// Traces every face of the rotation system and flags the outer face.
pub fn derive_faces(rep: &OctiRep) -> Result<FaceSet, FaceError> {
    let mut faces = trace_faces(rep)?;
    let mut dart_face = vec![0; rep.dart_count()];
    for (fid, face) in faces.iter().enumerate() {
        for &d in &face.darts {
            dart_face[d] = fid;
        }
    }
    let outer = rep.outer_dart().filter(|&d| d < rep.dart_count()).map(|d| dart_face[d]);
    if let Some(o) = outer {
        faces[o].is_outer = true;
    }
    Ok(FaceSet {
        faces,
        dart_face,
        outer,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepViolation {
    DartOriginOutOfRange {
        dart: DartId,
    },
    TwinDirectionMismatch {
        dart: DartId,
    },
    RotationMismatch {
        vertex: VertexId,
        dart: DartId,
    },
    IsolatedVertex {
        vertex: VertexId,
    },
    MaxDegreeExceeded {
        vertex: VertexId,
        degree: usize,
    },
    CornerAngleInvalid {
        vertex: VertexId,
        dart: DartId,
        units: u8,
    },
    VertexAngleSum {
        vertex: VertexId,
        sum: u32,
    },
    FaceTraversal(FaceError),
    FaceAngleSum {
        face: FaceId,
        sum: u32,
        expected: u32,
    },
    EulerViolation {
        component: usize,
        vertices: usize,
        edges: usize,
        faces: usize,
    },
    OuterFaceMissing,
    OuterFaceNotOuter {
        face: FaceId,
    },
}

impl fmt::Display for RepViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use RepViolation::*;
        match self {
            DartOriginOutOfRange { dart } => write!(f, "dart {dart}: origin out of range"),
            TwinDirectionMismatch { dart } => {
                write!(f, "dart {dart}: twin direction is not the opposite direction")
            }
            RotationMismatch { vertex, dart } => {
                write!(
                    f,
                    "vertex {vertex}: rotation entry {dart} inconsistent with dart origins"
                )
            }
            IsolatedVertex { vertex } => write!(f, "vertex {vertex}: degree 0"),
            MaxDegreeExceeded { vertex, degree } => {
                write!(f, "vertex {vertex}: degree {degree} exceeds 8")
            }
            CornerAngleInvalid { vertex, dart, units } => {
                write!(f, "vertex {vertex}: corner after dart {dart} has {units} units")
            }
            VertexAngleSum { vertex, sum } => {
                write!(f, "vertex {vertex}: corner units sum to {sum}, expected 8")
            }
            FaceTraversal(e) => write!(f, "face traversal: {e}"),
            FaceAngleSum { face, sum, expected } => {
                write!(f, "face {face}: corner units sum to {sum}, expected {expected}")
            }
            EulerViolation {
                component,
                vertices,
                edges,
                faces,
            } => write!(
                f,
                "component {component}: v - e + f = {vertices} - {edges} + {faces} != 2"
            ),
            OuterFaceMissing => write!(f, "no outer dart designated"),
            OuterFaceNotOuter { face } => {
                write!(f, "designated outer face {face} does not have outer angle sum")
            }
        }
    }
}

/// Checks every representation invariant and reports all violations.
pub fn validate_rep(rep: &OctiRep) -> Vec<RepViolation> {
    use RepViolation::*;
    let mut out = Vec::new();
    let n = rep.vertex_count();
    let mut structural = false;

    for d in 0..rep.dart_count() {
        if rep.origin(d) >= n {
            out.push(DartOriginOutOfRange { dart: d });
            structural = true;
        } else if rep.dir(d ^ 1) != rep.dir(d).opposite() && d % 2 == 0 {
            out.push(TwinDirectionMismatch { dart: d });
        }
    }
    if rep.rotations().len() != n {
        out.push(RotationMismatch {
            vertex: n,
            dart: usize::MAX,
        });
        return out;
    }
    let mut listed = vec![0usize; rep.dart_count()];
    for v in 0..n {
        for &d in rep.rotation(v) {
            if d >= rep.dart_count() || rep.origin(d) != v {
                out.push(RotationMismatch { vertex: v, dart: d });
                structural = true;
            } else {
                listed[d] += 1;
            }
        }
    }
    for (d, &count) in listed.iter().enumerate() {
        if count != 1 && rep.origin(d) < n {
            out.push(RotationMismatch {
                vertex: rep.origin(d),
                dart: d,
            });
            structural = true;
        }
    }
    if structural {
        return out;
    }

    for v in 0..n {
        let deg = rep.degree(v);
        if deg == 0 {
            out.push(IsolatedVertex { vertex: v });
            continue;
        }
        if deg > 8 {
            out.push(MaxDegreeExceeded { vertex: v, degree: deg });
        }
        let rot = rep.rotation(v);
        let mut sum = 0u32;
        for i in 0..deg {
            let d = rot[i];
            let next = rot[(i + 1) % deg];
            let units = if deg == 1 { 8 } else { rep.dir(d).ccw_to(rep.dir(next)) };
            if units == 0 || (units == 8 && deg > 1) {
                out.push(CornerAngleInvalid {
                    vertex: v,
                    dart: d,
                    units,
                });
            }
            sum += units as u32;
        }
        if sum != 8 {
            out.push(VertexAngleSum { vertex: v, sum });
        }
    }

    let faces = match derive_faces(rep) {
        Ok(f) => f,
        Err(e) => {
            out.push(FaceTraversal(e));
            return out;
        }
    };
    let (comp_count, comp) = rep.components();
    let outer_comp = faces.outer.map(|o| comp[rep.origin(faces.faces[o].darts[0])]);
    let mut comp_has_outer = vec![false; comp_count];
    if let Some(c) = outer_comp {
        comp_has_outer[c] = true;
    }
    for (fid, face) in faces.faces.iter().enumerate() {
        let k = face.corners.len() as u32;
        let sum = face.unit_sum();
        let c = comp[rep.origin(face.darts[0])];
        if Some(fid) == faces.outer {
            if sum != 4 * k + 8 {
                out.push(OuterFaceNotOuter { face: fid });
            }
            continue;
        }
        if sum == 4 * k + 8 && !comp_has_outer[c] {
            comp_has_outer[c] = true;
            continue;
        }
        if sum + 8 != 4 * k {
            out.push(FaceAngleSum {
                face: fid,
                sum,
                expected: (4 * k).saturating_sub(8),
            });
        }
    }
    if rep.dart_count() > 0 && faces.outer.is_none() {
        out.push(OuterFaceMissing);
    }

    let mut verts = vec![0usize; comp_count];
    let mut edges = vec![0usize; comp_count];
    let mut face_counts = vec![0usize; comp_count];
    for v in 0..n {
        verts[comp[v]] += 1;
    }
    for e in 0..rep.edge_count() {
        edges[comp[rep.origin(2 * e)]] += 1;
    }
    for face in &faces.faces {
        face_counts[comp[rep.origin(face.darts[0])]] += 1;
    }
    for c in 0..comp_count {
        if edges[c] == 0 {
            continue;
        }
        if verts[c] + face_counts[c] != edges[c] + 2 {
            out.push(EulerViolation {
                component: c,
                vertices: verts[c],
                edges: edges[c],
                faces: face_counts[c],
            });
        }
    }
    out
}

/// The four reflex-corner and diagonal parameters of a representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ParamStats {
    /// Total number of reflex corners.
    pub omega: usize,
    /// Number of faces with at least one reflex corner.
    pub phi: usize,
    /// Maximum number of reflex corners in one face.
    pub kappa: usize,
    /// Number of diagonal edges.
    pub delta: usize,
}

impl fmt::Display for ParamStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ω={} φ={} κ={} δ={}", self.omega, self.phi, self.kappa, self.delta)
    }
}

pub fn compute_params_with(rep: &OctiRep, faces: &FaceSet) -> ParamStats {
    let mut stats = ParamStats::default();
    for face in &faces.faces {
        let r = face.reflex_count();
        stats.omega += r;
        if r > 0 {
            stats.phi += 1;
        }
        stats.kappa = stats.kappa.max(r);
    }
    stats.delta = (0..rep.edge_count()).filter(|&e| rep.is_diagonal_edge(e)).count();
    stats
}

/// Computes the parameters over all faces, including the outer face.
pub fn compute_params(rep: &OctiRep) -> Result<ParamStats, FaceError> {
    let faces = derive_faces(rep)?;
    Ok(compute_params_with(rep, &faces))
}

/// True if no internal face has a reflex corner, the outer face has no
/// strictly convex corner, and no vertex has degree 1.
pub fn is_convex(rep: &OctiRep, faces: &FaceSet) -> bool {
    (0..rep.vertex_count()).all(|v| rep.degree(v) != 1)
        && faces.faces.iter().all(|f| {
            if f.is_outer {
                f.corners.iter().all(|c| !c.is_inflex())
            } else {
                f.corners.iter().all(|c| !c.is_reflex())
            }
        })
}
