//! Area compaction for convex representations by enumerating diagonal
//! lengths. Once every diagonal has a fixed length, width and height are
//! minimized independently by [`min_extents`](crate::flow::min_extents).

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::drawing::GridDrawing;
use crate::flow::{
    build_networks, drawing_from_lengths, min_extents_with, solve_realization, FlowError, LengthAssignment,
};
use crate::rep::{Direction, EdgeId, OctiRep, RepBuilder, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkeletonEdge {
    Diagonal(EdgeId),
    /// Maximal horizontal or vertical path, in order from the tail.
    Path(Vec<EdgeId>),
}

/// Contraction to the vertices incident to a diagonal.
#[derive(Clone, Debug)]
pub struct SkeletonRep {
    pub rep: OctiRep,
    /// Skeleton vertex -> original vertex.
    pub vertex_map: Vec<VertexId>,
    /// Skeleton edge -> what it stands for.
    pub edge_map: Vec<SkeletonEdge>,
}

pub fn build_skeleton(rep: &OctiRep) -> Result<SkeletonRep, FlowError> {
    crate::flow::check_preconditions(rep)?;
    let n = rep.vertex_count();
    let mut keep = vec![false; n];
    for e in (0..rep.edge_count()).filter(|&e| rep.is_diagonal_edge(e)) {
        let (u, v, _) = rep.edge(e);
        keep[u] = true;
        keep[v] = true;
    }
    let vertex_map: Vec<VertexId> = (0..n).filter(|&v| keep[v]).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &v) in vertex_map.iter().enumerate() {
        index[v] = i;
    }
    let mut b = RepBuilder::new(vertex_map.len());
    let mut edge_map = Vec::new();
    for e in (0..rep.edge_count()).filter(|&e| rep.is_diagonal_edge(e)) {
        let (u, v, d) = rep.edge(e);
        b.add_edge(index[u], index[v], d);
        edge_map.push(SkeletonEdge::Diagonal(e));
    }
    // Walk east and north only, so each path is found once.
    for dir in [Direction::E, Direction::N] {
        for &s in &vertex_map {
            let mut path = Vec::new();
            let mut cur = s;
            while let Some(d) = rep.rotation(cur).iter().copied().find(|&d| rep.dir(d) == dir) {
                path.push(d / 2);
                cur = rep.head(d);
                if keep[cur] {
                    b.add_edge(index[s], index[cur], dir);
                    edge_map.push(SkeletonEdge::Path(path));
                    break;
                }
            }
        }
    }
    Ok(SkeletonRep {
        rep: b.build(),
        vertex_map,
        edge_map,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactResult {
    pub drawing: GridDrawing,
    pub area: i64,
    pub width: i64,
    pub height: i64,
    pub lengths: LengthAssignment,
    /// Diagonal edge -> chosen length.
    pub diagonals: BTreeMap<EdgeId, i64>,
    /// Number of diagonal assignments evaluated (one `min_extents` each).
    pub evaluations: u64,
    /// The bound was at least the witness-derived default, so the witness
    /// assignment itself was among those tried.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CompactError {
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("no diagonal assignment in [1, {bound}] is feasible")]
    NoFeasibleAssignment { bound: i64 },
    #[error("{bound}^{delta} assignments is too many to enumerate")]
    TooManyAssignments { bound: i64, delta: usize },
}

/// Sum of the diagonal lengths of the scaled feasible solution (1 when there
/// are no diagonals).
pub fn default_bound(rep: &OctiRep) -> Result<i64, FlowError> {
    let lens = solve_realization(rep)?;
    Ok(lens.diagonal_lengths(rep).values().sum::<i64>().max(1))
}

/// Minimum-area drawing over all diagonal lengths in `[1, bound]`. Ties go
/// to smaller `(W, H)`, then to the lexicographically smaller assignment.
pub fn compact_xp(rep: &OctiRep, bound: i64) -> Result<CompactResult, CompactError> {
    if bound < 1 {
        return Err(CompactError::NoFeasibleAssignment { bound });
    }
    let nets = build_networks(rep)?;
    let diags: Vec<EdgeId> = (0..rep.edge_count()).filter(|&e| rep.is_diagonal_edge(e)).collect();
    let delta = diags.len();
    let total = (bound as u64)
        .checked_pow(delta as u32)
        .filter(|&t| t <= 1 << 40)
        .ok_or(CompactError::TooManyAssignments { bound, delta })?;
    let certified = match default_bound(rep) {
        Ok(b) => bound >= b,
        Err(FlowError::Infeasible { .. }) => false,
        Err(e) => return Err(e.into()),
    };

    let assignment = |mut idx: u64| -> Vec<i64> {
        // Most significant digit first, so index order is lexicographic.
        let mut vals = vec![0i64; delta];
        for slot in vals.iter_mut().rev() {
            *slot = (idx % bound as u64) as i64 + 1;
            idx /= bound as u64;
        }
        vals
    };
    type Best = (i64, i64, i64, Vec<i64>, LengthAssignment);
    let key = |b: &Best| (b.0, b.1, b.2, b.3.clone());
    let best: Option<Best> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let vals = assignment(idx);
            let diag: BTreeMap<EdgeId, i64> = diags.iter().copied().zip(vals.iter().copied()).collect();
            match min_extents_with(rep, &nets, &diag) {
                Ok(ext) => Some((ext.width * ext.height, ext.width, ext.height, vals, ext.lengths)),
                Err(_) => None,
            }
        })
        .reduce_with(|a, b| if key(&b) < key(&a) { b } else { a });

    let (area, width, height, vals, lengths) = best.ok_or(CompactError::NoFeasibleAssignment { bound })?;
    let drawing = drawing_from_lengths(rep, &lengths)?;
    Ok(CompactResult {
        drawing,
        area,
        width,
        height,
        lengths,
        diagonals: diags.into_iter().zip(vals).collect(),
        evaluations: total,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::{bbox_area, validate_drawing};
    use crate::fixtures;

    #[test]
    fn skeleton_examples() {
        let sq = build_skeleton(&fixtures::unit_square()).unwrap();
        assert_eq!(sq.rep.vertex_count(), 0);
        assert!(sq.edge_map.is_empty());

        let tri = build_skeleton(&fixtures::right_triangle()).unwrap();
        assert_eq!(tri.vertex_map, vec![0, 2]);
        assert_eq!(tri.edge_map, vec![SkeletonEdge::Diagonal(2)]);

        // split_hexagon: diagonals c-d and f-g; d-e is vertical, e-f horizontal,
        // g-a vertical, a-b-c horizontal.
        let hex = build_skeleton(&fixtures::split_hexagon()).unwrap();
        assert_eq!(hex.vertex_map, vec![2, 3, 5, 6]);
        assert_eq!(hex.edge_map.len(), 2);
    }

    #[test]
    fn skeleton_contracts_straight_paths() {
        let oct = build_skeleton(&fixtures::octagon()).unwrap();
        assert_eq!(oct.vertex_map.len(), 8);
        let paths = oct
            .edge_map
            .iter()
            .filter(|e| matches!(e, SkeletonEdge::Path(_)))
            .count();
        assert_eq!(paths, 4);
        assert!(oct.vertex_map.len() <= 2 * 4);
    }

    #[test]
    fn compaction_examples() {
        let sq = compact_xp(&fixtures::unit_square(), 1).unwrap();
        assert_eq!(sq.area, 1);
        assert_eq!(sq.evaluations, 1);

        let tri = compact_xp(&fixtures::right_triangle(), 3).unwrap();
        assert_eq!(tri.area, 1);
        assert_eq!(tri.drawing.coords(), &[(0, 0), (1, 0), (1, 1)]);
        assert_eq!(tri.evaluations, 3);

        let ch = compact_xp(&fixtures::square_with_chord(), 3).unwrap();
        assert_eq!(ch.area, 1);
        assert!(validate_drawing(&fixtures::square_with_chord(), &ch.drawing).is_empty());
        assert_eq!(bbox_area(&ch.drawing), 1);
    }

    #[test]
    fn hexagon_compacts_to_reference() {
        let rep = fixtures::split_hexagon();
        let r = compact_xp(&rep, 3).unwrap();
        assert_eq!((r.width, r.height, r.area), (3, 2, 6));
        assert_eq!(r.evaluations, 9);
        assert_eq!(r.lengths.lengths, fixtures::split_hexagon_reference_lengths());
    }
}
