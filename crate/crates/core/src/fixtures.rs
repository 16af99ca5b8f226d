//! Small named representations used by tests, examples and the CLI docs.

use crate::rep::{Direction, OctiRep, RepBuilder};

use Direction as D;

/// Square 0-1-2-3 with 0 at the bottom left, counterclockwise.
pub fn unit_square() -> OctiRep {
    let mut b = RepBuilder::new(4);
    b.add_edge(0, 1, D::E);
    b.add_edge(1, 2, D::N);
    b.add_edge(2, 3, D::W);
    b.add_edge(3, 0, D::S);
    b.build_with_outer_left(1, 0)
}

/// Right isoceles triangle: east leg 0-1, north leg 1-2, hypotenuse 2-0.
pub fn right_triangle() -> OctiRep {
    let mut b = RepBuilder::new(3);
    b.add_edge(0, 1, D::E);
    b.add_edge(1, 2, D::N);
    b.add_edge(2, 0, D::SW);
    b.build_with_outer_left(1, 0)
}

/// Unit square with a northeast chord from corner 0 to corner 2 (edge 4).
pub fn square_with_chord() -> OctiRep {
    let mut b = RepBuilder::new(4);
    b.add_edge(0, 1, D::E);
    b.add_edge(1, 2, D::N);
    b.add_edge(2, 3, D::W);
    b.add_edge(3, 0, D::S);
    b.add_edge(0, 2, D::NE);
    b.build_with_outer_left(1, 0)
}

/// Axis-parallel rectangle with `w` unit edges along each horizontal side
/// and `h` along each vertical side (flat corners in between).
pub fn grid_rectangle(w: usize, h: usize) -> OctiRep {
    let mut b = RepBuilder::new(4);
    b.add_path(0, 1, D::E, w);
    b.add_path(1, 2, D::N, h);
    b.add_path(2, 3, D::W, w);
    b.add_path(3, 0, D::S, h);
    // The outer face lies right of the first bottom dart.
    b.build_raw(Some(0))
}

/// Two convex faces glued along a vertical edge, with two diagonals on the
/// outer boundary. A realizing flow needs value 2 on the top edge `e->f`
/// (width) and the middle edge `b->f` (height), 1 everywhere else.
///
/// ```text
///   g . f ---- e
///  /    |      |
/// a --- b --- c/ d
/// ```
/// Vertices: a=0 b=1 c=2 d=3 e=4 f=5 g=6.
pub fn split_hexagon() -> OctiRep {
    let mut b = RepBuilder::new(7);
    b.add_edge(0, 1, D::E); // 0: a-b
    b.add_edge(1, 2, D::E); // 1: b-c
    b.add_edge(2, 3, D::NE); // 2: c-d
    b.add_edge(3, 4, D::N); // 3: d-e
    b.add_edge(4, 5, D::W); // 4: e-f, width 2
    b.add_edge(5, 6, D::SW); // 5: f-g
    b.add_edge(6, 0, D::S); // 6: g-a
    b.add_edge(1, 5, D::N); // 7: b-f, height 2
    b.build_with_outer_left(1, 0)
}

/// The flow value each edge of [`split_hexagon`] carries in the reference
/// realization.
pub fn split_hexagon_reference_lengths() -> Vec<i64> {
    vec![1, 1, 1, 1, 2, 1, 1, 2]
}

/// Octagon with unit sides, alternating axis-parallel and diagonal edges.
pub fn octagon() -> OctiRep {
    let mut b = RepBuilder::new(8);
    let dirs = [D::E, D::NE, D::N, D::NW, D::W, D::SW, D::S, D::SE];
    for (i, d) in dirs.iter().enumerate() {
        b.add_edge(i, (i + 1) % 8, *d);
    }
    b.build_with_outer_left(1, 0)
}

/// L-shaped hexagon: one reflex corner in the internal face.
///
/// ```text
/// 5 -- 4
/// |    |
/// |    3 -- 2
/// |         |
/// 0 ------- 1
/// ```
pub fn l_shape() -> OctiRep {
    let mut b = RepBuilder::new(6);
    b.add_edge(0, 1, D::E);
    b.add_edge(1, 2, D::N);
    b.add_edge(2, 3, D::W);
    b.add_edge(3, 4, D::N);
    b.add_edge(4, 5, D::W);
    b.add_edge(5, 0, D::S);
    b.build_with_outer_left(1, 0)
}
