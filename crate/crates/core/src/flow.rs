//! Realization of convex representations through two coupled flow
//! networks, one carrying widths and one carrying heights.
//!
//! Every edge has one length variable `x_e >= 1`. An edge with nonzero
//! width gives an arc in the width network from the face above it to the
//! face below it; an edge with nonzero height gives an arc in the height
//! network from the face on its left to the face on its right. A diagonal
//! edge appears in both networks with the same variable. The outer face is
//! split into a source (arc tails) and a sink (arc heads).

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::drawing::GridDrawing;
use crate::lp::{LinearProgram, LpOutcome, Q};
use crate::rep::{derive_faces, is_convex, validate_rep, DartId, EdgeId, FaceId, FaceSet, OctiRep, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    /// Widths; arcs run from the upper face to the lower face.
    Horizontal,
    /// Heights; arcs run from the left face to the right face.
    Vertical,
}

impl Axis {
    /// Sign of a dart's displacement along this axis.
    pub fn sign(self, rep: &OctiRep, d: DartId) -> i64 {
        let (dx, dy) = rep.dir(d).vector();
        match self {
            Axis::Horizontal => dx,
            Axis::Vertical => dy,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FlowNode {
    Source,
    Sink,
    Face(FaceId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlowArc {
    pub edge: EdgeId,
    pub tail: FlowNode,
    pub head: FlowNode,
}

#[derive(Clone, Debug)]
pub struct FlowNetworks {
    pub faces: FaceSet,
    /// Width network.
    pub horizontal: Vec<FlowArc>,
    /// Height network.
    pub vertical: Vec<FlowArc>,
    /// `(horizontal arc, vertical arc)` index pairs sharing a variable.
    pub coupled: Vec<(usize, usize)>,
}

impl FlowNetworks {
    pub fn arcs(&self, axis: Axis) -> &[FlowArc] {
        match axis {
            Axis::Horizontal => &self.horizontal,
            Axis::Vertical => &self.vertical,
        }
    }

    pub fn internal_faces(&self) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.faces.len()).filter(move |&f| Some(f) != self.faces.outer)
    }

    /// Conservation row of face `f`: `(edge, coefficient)` with inflow
    /// positive. Self-loops cancel.
    pub fn conservation_row(&self, axis: Axis, f: FaceId) -> Vec<(EdgeId, i64)> {
        let mut row: BTreeMap<EdgeId, i64> = BTreeMap::new();
        for a in self.arcs(axis) {
            if a.head == FlowNode::Face(f) {
                *row.entry(a.edge).or_default() += 1;
            }
            if a.tail == FlowNode::Face(f) {
                *row.entry(a.edge).or_default() -= 1;
            }
        }
        row.into_iter().filter(|(_, c)| *c != 0).collect()
    }
}

/// Positive integer length per edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LengthAssignment {
    pub lengths: Vec<i64>,
}

impl LengthAssignment {
    pub fn new(lengths: Vec<i64>) -> LengthAssignment {
        LengthAssignment { lengths }
    }

    pub fn get(&self, e: EdgeId) -> i64 {
        self.lengths[e]
    }

    pub fn total(&self) -> i64 {
        self.lengths.iter().sum()
    }

    pub fn diagonal_lengths(&self, rep: &OctiRep) -> BTreeMap<EdgeId, i64> {
        (0..rep.edge_count())
            .filter(|&e| rep.is_diagonal_edge(e))
            .map(|e| (e, self.lengths[e]))
            .collect()
    }

    /// Every internal face closes horizontally and vertically.
    pub fn satisfies_conservation(&self, rep: &OctiRep, faces: &FaceSet) -> bool {
        self.lengths.len() == rep.edge_count()
            && self.lengths.iter().all(|&l| l >= 1)
            && faces.faces.iter().enumerate().all(|(f, face)| {
                Some(f) == faces.outer
                    || [Axis::Horizontal, Axis::Vertical].iter().all(|&axis| {
                        face.darts
                            .iter()
                            .map(|&d| axis.sign(rep, d) * self.lengths[d / 2])
                            .sum::<i64>()
                            == 0
                    })
            })
    }
}

/// Multipliers on face conservation rows whose combination has only
/// nonpositive edge coefficients with a negative total, which no
/// assignment with all lengths at least 1 can satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    pub multipliers: Vec<(Axis, FaceId, BigRational)>,
}

impl InfeasibilityCertificate {
    /// Recomputes the combination from the face boundaries.
    pub fn verify(&self, rep: &OctiRep, faces: &FaceSet) -> bool {
        let mut combo = vec![Q::zero(); rep.edge_count()];
        for (axis, f, z) in &self.multipliers {
            if Some(*f) == faces.outer || *f >= faces.len() {
                return false;
            }
            for &d in &faces.faces[*f].darts {
                combo[d / 2] += z * BigInt::from(axis.sign(rep, d));
            }
        }
        let total: Q = combo.iter().sum();
        combo.iter().all(|c| !c.is_positive()) && total.is_negative()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FlowError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no length assignment satisfies conservation")]
    Infeasible {
        certificate: Option<InfeasibilityCertificate>,
    },
    #[error("edge lengths do not close at vertex {vertex}")]
    ClosureViolation { vertex: VertexId },
    #[error("scaled lengths exceed the 64-bit range")]
    LengthOverflow,
}

/// Checks validity, connectivity and convexity; returns the faces.
pub fn check_preconditions(rep: &OctiRep) -> Result<FaceSet, FlowError> {
    let pre = FlowError::PreconditionViolated;
    if let Some(v) = validate_rep(rep).first() {
        return Err(pre(format!("invalid representation: {v}")));
    }
    if !rep.is_connected() {
        return Err(pre("representation is disconnected".into()));
    }
    let faces = derive_faces(rep).map_err(|e| pre(e.to_string()))?;
    if !is_convex(rep, &faces) {
        let what = faces
            .faces
            .iter()
            .find_map(|f| {
                f.corners.iter().find_map(|c| {
                    if f.is_outer && c.is_inflex() {
                        Some(format!("inflex outer corner at vertex {}", c.vertex))
                    } else if !f.is_outer && c.is_reflex() {
                        Some(format!("reflex internal corner at vertex {}", c.vertex))
                    } else {
                        None
                    }
                })
            })
            .unwrap_or_else(|| "degree-1 vertex".into());
        return Err(pre(what));
    }
    Ok(faces)
}

pub fn build_networks(rep: &OctiRep) -> Result<FlowNetworks, FlowError> {
    let faces = check_preconditions(rep)?;
    Ok(networks_for(rep, faces))
}

fn networks_for(rep: &OctiRep, faces: FaceSet) -> FlowNetworks {
    let node = |f: FaceId, tail: bool| match (Some(f) == faces.outer, tail) {
        (true, true) => FlowNode::Source,
        (true, false) => FlowNode::Sink,
        (false, _) => FlowNode::Face(f),
    };
    let mut horizontal = Vec::new();
    let mut vertical = Vec::new();
    let mut coupled = Vec::new();
    for e in 0..rep.edge_count() {
        let mut h = None;
        for (axis, arcs) in [(Axis::Horizontal, &mut horizontal), (Axis::Vertical, &mut vertical)] {
            let d = 2 * e;
            let pos = match axis.sign(rep, d) {
                0 => continue,
                s if s > 0 => d,
                _ => d ^ 1,
            };
            arcs.push(FlowArc {
                edge: e,
                tail: node(faces.face_of(pos ^ 1), true),
                head: node(faces.face_of(pos), false),
            });
            if axis == Axis::Horizontal {
                h = Some(arcs.len() - 1);
            } else if let Some(hi) = h {
                coupled.push((hi, arcs.len() - 1));
            }
        }
    }
    FlowNetworks {
        faces,
        horizontal,
        vertical,
        coupled,
    }
}

fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Feasibility of `x >= 1` with conservation in both networks. Feasible
/// solutions are scaled by the lcm of their denominators.
pub fn solve_realization(rep: &OctiRep) -> Result<LengthAssignment, FlowError> {
    let nets = build_networks(rep)?;
    let m = rep.edge_count();
    let mut lp = LinearProgram::new(m);
    let mut row_keys = Vec::new();
    for axis in [Axis::Horizontal, Axis::Vertical] {
        for f in nets.internal_faces() {
            let row = nets.conservation_row(axis, f);
            if row.is_empty() {
                continue;
            }
            // x = y + 1
            let rhs: i64 = -row.iter().map(|(_, c)| c).sum::<i64>();
            lp.add_row(row.into_iter().map(|(e, c)| (e, q(c))), q(rhs));
            row_keys.push((axis, f));
        }
    }
    match lp.solve() {
        LpOutcome::Optimal { values, .. } => {
            let xs: Vec<Q> = values.into_iter().map(|y| y + Q::one()).collect();
            let scale = xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let lengths = xs
                .iter()
                .map(|x| (x.numer() * (&scale / x.denom())).to_i64())
                .collect::<Option<Vec<i64>>>()
                .ok_or(FlowError::LengthOverflow)?;
            Ok(LengthAssignment::new(lengths))
        }
        LpOutcome::Infeasible { certificate } => Err(FlowError::Infeasible {
            certificate: Some(InfeasibilityCertificate {
                multipliers: row_keys
                    .into_iter()
                    .zip(certificate)
                    .filter(|(_, z)| !z.is_zero())
                    .map(|((a, f), z)| (a, f, z))
                    .collect(),
            }),
        }),
        LpOutcome::Unbounded => unreachable!("zero objective"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinExtents {
    pub width: i64,
    pub height: i64,
    pub lengths: LengthAssignment,
}

/// Minimum width and height with every diagonal fixed to `diag`. The two
/// networks share no variables once diagonals are fixed, so each is
/// minimized on its own.
pub fn min_extents(rep: &OctiRep, diag: &BTreeMap<EdgeId, i64>) -> Result<MinExtents, FlowError> {
    let nets = build_networks(rep)?;
    min_extents_with(rep, &nets, diag)
}

/// As [`min_extents`] with prebuilt networks.
pub fn min_extents_with(
    rep: &OctiRep,
    nets: &FlowNetworks,
    diag: &BTreeMap<EdgeId, i64>,
) -> Result<MinExtents, FlowError> {
    for e in (0..rep.edge_count()).filter(|&e| rep.is_diagonal_edge(e)) {
        match diag.get(&e) {
            Some(&l) if l >= 1 => {}
            Some(_) => return Err(FlowError::PreconditionViolated(format!("diagonal {e} fixed below 1"))),
            None => return Err(FlowError::PreconditionViolated(format!("diagonal {e} not fixed"))),
        }
    }
    let (h, v) = rayon::join(
        || minimize_axis(rep, nets, diag, Axis::Horizontal),
        || minimize_axis(rep, nets, diag, Axis::Vertical),
    );
    let (h, v) = (h?, v?);
    let mut lengths = vec![0i64; rep.edge_count()];
    for (e, l) in h.into_iter().chain(v) {
        lengths[e] = l;
    }
    for (&e, &l) in diag {
        lengths[e] = l;
    }
    let extent = |axis: Axis| {
        nets.arcs(axis)
            .iter()
            .filter(|a| a.tail == FlowNode::Source)
            .map(|a| lengths[a.edge])
            .sum::<i64>()
    };
    Ok(MinExtents {
        width: extent(Axis::Horizontal),
        height: extent(Axis::Vertical),
        lengths: LengthAssignment::new(lengths),
    })
}

/// Optimal lengths of the non-diagonal edges of one network.
fn minimize_axis(
    rep: &OctiRep,
    nets: &FlowNetworks,
    diag: &BTreeMap<EdgeId, i64>,
    axis: Axis,
) -> Result<Vec<(EdgeId, i64)>, FlowError> {
    let vars: Vec<EdgeId> = nets
        .arcs(axis)
        .iter()
        .map(|a| a.edge)
        .filter(|&e| !rep.is_diagonal_edge(e))
        .collect();
    let index: BTreeMap<EdgeId, usize> = vars.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut lp = LinearProgram::new(vars.len());
    for f in nets.internal_faces() {
        let row = nets.conservation_row(axis, f);
        let mut rhs = 0i64;
        let mut coeffs = Vec::new();
        for (e, c) in row {
            match index.get(&e) {
                Some(&i) => {
                    coeffs.push((i, q(c)));
                    rhs -= c;
                }
                None => rhs -= c * diag[&e],
            }
        }
        lp.add_row(coeffs, q(rhs));
    }
    for a in nets.arcs(axis) {
        if a.tail == FlowNode::Source {
            if let Some(&i) = index.get(&a.edge) {
                lp.set_objective(i, Q::one());
            }
        }
    }
    match lp.solve() {
        LpOutcome::Optimal { values, .. } => vars
            .iter()
            .zip(values)
            .map(|(&e, y)| {
                if !y.is_integer() {
                    return Err(FlowError::PreconditionViolated(format!(
                        "non-integral optimum on edge {e}"
                    )));
                }
                let l = (y.to_integer() + BigInt::one())
                    .to_i64()
                    .ok_or(FlowError::LengthOverflow)?;
                Ok((e, l))
            })
            .collect(),
        LpOutcome::Infeasible { .. } => Err(FlowError::Infeasible { certificate: None }),
        LpOutcome::Unbounded => unreachable!("nonnegative objective"),
    }
}

/// Places vertex 0 at the origin and propagates along edges, then
/// translates so the minimum coordinates are zero.
pub fn drawing_from_lengths(rep: &OctiRep, lens: &LengthAssignment) -> Result<GridDrawing, FlowError> {
    let n = rep.vertex_count();
    if lens.lengths.len() != rep.edge_count() || lens.lengths.iter().any(|&l| l < 1) {
        return Err(FlowError::PreconditionViolated(
            "one positive length per edge required".into(),
        ));
    }
    if n == 0 {
        return Ok(GridDrawing::new(Vec::new()));
    }
    let mut pos: Vec<Option<(i64, i64)>> = vec![None; n];
    pos[0] = Some((0, 0));
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        let (x, y) = pos[u].expect("queued vertices are placed");
        for &d in rep.rotation(u) {
            let (dx, dy) = rep.dir(d).vector();
            let l = lens.lengths[d / 2];
            let p = (x + dx * l, y + dy * l);
            let v = rep.head(d);
            match pos[v] {
                None => {
                    pos[v] = Some(p);
                    queue.push_back(v);
                }
                Some(q) if q != p => return Err(FlowError::ClosureViolation { vertex: v }),
                Some(_) => {}
            }
        }
    }
    let coords = pos
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| FlowError::PreconditionViolated("representation is disconnected".into()))?;
    Ok(GridDrawing::new(coords).normalized())
}
