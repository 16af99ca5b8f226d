//! Integer grid drawings and their validation against a representation.

use std::fmt;

use crate::rep::{Direction, EdgeId, OctiRep, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridDrawing {
    coords: Vec<(i64, i64)>,
}

impl GridDrawing {
    pub fn new(coords: Vec<(i64, i64)>) -> GridDrawing {
        GridDrawing { coords }
    }

    pub fn coords(&self) -> &[(i64, i64)] {
        &self.coords
    }

    pub fn position(&self, v: VertexId) -> (i64, i64) {
        self.coords[v]
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// `(min_x, min_y, max_x, max_y)`, or `None` for an empty drawing.
    pub fn bounds(&self) -> Option<(i64, i64, i64, i64)> {
        let first = *self.coords.first()?;
        Some(
            self.coords
                .iter()
                .fold((first.0, first.1, first.0, first.1), |(a, b, c, d), &(x, y)| {
                    (a.min(x), b.min(y), c.max(x), d.max(y))
                }),
        )
    }

    pub fn width(&self) -> i64 {
        self.bounds().map_or(0, |(a, _, c, _)| c - a)
    }

    pub fn height(&self) -> i64 {
        self.bounds().map_or(0, |(_, b, _, d)| d - b)
    }

    /// Translates so the minimum coordinates are zero.
    pub fn normalized(&self) -> GridDrawing {
        match self.bounds() {
            Some((mx, my, _, _)) => GridDrawing::new(self.coords.iter().map(|&(x, y)| (x - mx, y - my)).collect()),
            None => self.clone(),
        }
    }

    pub fn scaled(&self, factor: i64) -> GridDrawing {
        GridDrawing::new(self.coords.iter().map(|&(x, y)| (x * factor, y * factor)).collect())
    }

    /// Keeps the first `n` vertices.
    pub fn truncated(&self, n: usize) -> GridDrawing {
        GridDrawing::new(self.coords[..n].to_vec())
    }
}

/// Area of the smallest axis-parallel rectangle containing the drawing.
pub fn bbox_area(drw: &GridDrawing) -> i64 {
    drw.width() * drw.height()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DrawingViolation {
    VertexCountMismatch {
        expected: usize,
        found: usize,
    },
    DirectionMismatch {
        edge: EdgeId,
        expected: Direction,
        delta: (i64, i64),
    },
    CoincidentVertices {
        a: VertexId,
        b: VertexId,
    },
    VertexOnEdge {
        vertex: VertexId,
        edge: EdgeId,
    },
    EdgesIntersect {
        a: EdgeId,
        b: EdgeId,
    },
}

impl DrawingViolation {
    pub fn is_simplicity_violation(&self) -> bool {
        matches!(
            self,
            DrawingViolation::CoincidentVertices { .. }
                | DrawingViolation::VertexOnEdge { .. }
                | DrawingViolation::EdgesIntersect { .. }
        )
    }
}

impl fmt::Display for DrawingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DrawingViolation::*;
        match self {
            VertexCountMismatch { expected, found } => {
                write!(f, "drawing has {found} vertices, representation has {expected}")
            }
            DirectionMismatch { edge, expected, delta } => write!(
                f,
                "edge {edge}: displacement {delta:?} is not a positive multiple of direction {expected}"
            ),
            CoincidentVertices { a, b } => write!(f, "vertices {a} and {b} coincide (not simple)"),
            VertexOnEdge { vertex, edge } => {
                write!(f, "vertex {vertex} lies on edge {edge} (not simple)")
            }
            EdgesIntersect { a, b } => write!(f, "edges {a} and {b} intersect (not simple)"),
        }
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// `p` lies on the closed segment `ab`.
pub(crate) fn on_segment(p: (i64, i64), a: (i64, i64), b: (i64, i64)) -> bool {
    cross(a, b, p) == 0 && p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

/// Closed segments `ab` and `cd` share at least one point.
pub(crate) fn segments_intersect(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> bool {
    let d1 = cross(c, d, a).signum();
    let d2 = cross(c, d, b).signum();
    let d3 = cross(a, b, c).signum();
    let d4 = cross(a, b, d).signum();
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    on_segment(a, c, d) || on_segment(b, c, d) || on_segment(c, a, b) || on_segment(d, a, b)
}

/// Two segments sharing exactly the endpoint `p` overlap beyond `p`.
fn overlap_at_shared(p: (i64, i64), a: (i64, i64), b: (i64, i64)) -> bool {
    let va = (a.0 - p.0, a.1 - p.1);
    let vb = (b.0 - p.0, b.1 - p.1);
    va.0 as i128 * vb.1 as i128 == va.1 as i128 * vb.0 as i128
        && va.0 as i128 * vb.0 as i128 + va.1 as i128 * vb.1 as i128 > 0
}

/// Checks edge directions, positive extents and simplicity; reports all
/// violations found.
pub fn validate_drawing(rep: &OctiRep, drw: &GridDrawing) -> Vec<DrawingViolation> {
    use DrawingViolation::*;
    let mut out = Vec::new();
    if drw.len() != rep.vertex_count() {
        out.push(VertexCountMismatch {
            expected: rep.vertex_count(),
            found: drw.len(),
        });
        return out;
    }
    let pos = drw.coords();
    for e in 0..rep.edge_count() {
        let (u, v, dir) = rep.edge(e);
        let delta = (pos[v].0 - pos[u].0, pos[v].1 - pos[u].1);
        let ok = rep.dir(2 * e + 1) == dir.opposite()
            && Direction::from_delta(delta.0, delta.1).is_some_and(|(d, _)| d == dir);
        if !ok {
            out.push(DirectionMismatch {
                edge: e,
                expected: dir,
                delta,
            });
        }
    }

    let mut order: Vec<VertexId> = (0..pos.len()).collect();
    order.sort_by_key(|&v| pos[v]);
    for w in order.windows(2) {
        if pos[w[0]] == pos[w[1]] {
            out.push(CoincidentVertices {
                a: w[0].min(w[1]),
                b: w[0].max(w[1]),
            });
        }
    }

    for e in 0..rep.edge_count() {
        let (u, v, _) = rep.edge(e);
        for w in 0..pos.len() {
            if w != u && w != v && pos[w] != pos[u] && pos[w] != pos[v] && on_segment(pos[w], pos[u], pos[v]) {
                out.push(VertexOnEdge { vertex: w, edge: e });
            }
        }
    }

    let m = rep.edge_count();
    let boxes: Vec<_> = (0..m)
        .map(|e| {
            let (u, v, _) = rep.edge(e);
            (
                pos[u].0.min(pos[v].0),
                pos[u].1.min(pos[v].1),
                pos[u].0.max(pos[v].0),
                pos[u].1.max(pos[v].1),
            )
        })
        .collect();
    for a in 0..m {
        let (a0, a1, _) = rep.edge(a);
        for b in (a + 1)..m {
            let bb = boxes[b];
            let ab = boxes[a];
            if bb.0 > ab.2 || ab.0 > bb.2 || bb.1 > ab.3 || ab.1 > bb.3 {
                continue;
            }
            let (b0, b1, _) = rep.edge(b);
            let shared: Vec<VertexId> = [a0, a1].into_iter().filter(|x| *x == b0 || *x == b1).collect();
            let bad = match shared.len() {
                0 => segments_intersect(pos[a0], pos[a1], pos[b0], pos[b1]),
                1 => {
                    let s = shared[0];
                    let oa = if a0 == s { a1 } else { a0 };
                    let ob = if b0 == s { b1 } else { b0 };
                    overlap_at_shared(pos[s], pos[oa], pos[ob])
                }
                _ => true,
            };
            if bad {
                out.push(EdgesIntersect { a, b });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn square_drawing(c: [(i64, i64); 4]) -> GridDrawing {
        GridDrawing::new(c.to_vec())
    }

    #[test]
    fn accepts_unit_square() {
        let rep = fixtures::unit_square();
        let drw = square_drawing([(0, 0), (1, 0), (1, 1), (0, 1)]);
        assert!(validate_drawing(&rep, &drw).is_empty());
        assert_eq!(bbox_area(&drw), 1);
    }

    #[test]
    fn reports_direction_mismatch() {
        let rep = fixtures::unit_square();
        let drw = square_drawing([(0, 0), (2, 0), (1, 1), (0, 1)]);
        let report = validate_drawing(&rep, &drw);
        assert!(report
            .iter()
            .any(|v| matches!(v, DrawingViolation::DirectionMismatch { edge: 1, .. })));
    }

    #[test]
    fn reports_coincident_vertices() {
        let rep = fixtures::unit_square();
        let drw = square_drawing([(0, 0), (0, 0), (1, 1), (0, 1)]);
        let report = validate_drawing(&rep, &drw);
        assert!(report
            .iter()
            .any(|v| matches!(v, DrawingViolation::CoincidentVertices { .. })));
        assert!(report.iter().any(DrawingViolation::is_simplicity_violation));
    }

    #[test]
    fn reports_crossing_edges() {
        // Bow tie: 0-1 east, 1-2 northwest, 2-3 east, 3-0 southwest.
        let mut b = crate::rep::RepBuilder::new(4);
        b.add_edge(0, 1, Direction::E);
        b.add_edge(1, 2, Direction::NW);
        b.add_edge(2, 3, Direction::E);
        b.add_edge(3, 0, Direction::SW);
        let rep = b.build_raw(Some(0));
        let drw = GridDrawing::new(vec![(0, 0), (2, 0), (0, 2), (2, 2)]);
        let report = validate_drawing(&rep, &drw);
        assert!(report
            .iter()
            .any(|v| matches!(v, DrawingViolation::EdgesIntersect { .. })));
    }

    #[test]
    fn area_examples() {
        assert_eq!(bbox_area(&GridDrawing::new(vec![(0, 0), (2, 0), (2, 3), (0, 3)])), 6);
        assert_eq!(bbox_area(&GridDrawing::new(vec![(5, 7)])), 0);
    }

    #[test]
    fn overlapping_collinear_edges_are_not_simple() {
        let mut b = crate::rep::RepBuilder::new(3);
        b.add_edge(0, 1, Direction::E);
        b.add_edge(0, 2, Direction::E);
        let rep = b.build_raw(Some(0));
        let drw = GridDrawing::new(vec![(0, 0), (1, 0), (2, 0)]);
        assert!(!validate_drawing(&rep, &drw).is_empty());
    }
}
