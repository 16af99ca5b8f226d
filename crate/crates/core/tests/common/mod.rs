//! Random valid representations, read off random planar octilinear drawings.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use octi::{validate_drawing, validate_rep, Direction, GridDrawing, OctiRep, RepBuilder};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Grows a drawing on a `side` x `side` grid by adding segments of length
/// 1..=3 from existing vertices, then strips degree-1 vertices. Returns the
/// representation of the drawing and the drawing itself, or `None` when
/// nothing with a cycle survived.
pub fn random_drawing(
    rng: &mut StdRng,
    side: i64,
    max_vertices: usize,
    attempts: usize,
) -> Option<(OctiRep, GridDrawing)> {
    let mut verts: Vec<(i64, i64)> = vec![(rng.random_range(0..=side), rng.random_range(0..=side))];
    let mut index: BTreeMap<(i64, i64), usize> = BTreeMap::from([(verts[0], 0)]);
    // Lattice points inside edges, unit steps in both orientations, and
    // unit squares crossed by a diagonal.
    let mut inner: BTreeSet<(i64, i64)> = BTreeSet::new();
    let mut steps: BTreeSet<((i64, i64), (i64, i64))> = BTreeSet::new();
    let mut squares: BTreeSet<(i64, i64)> = BTreeSet::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for _ in 0..attempts {
        let from = verts[rng.random_range(0..verts.len())];
        let (dx, dy) = Direction::new(rng.random_range(0..8u8)).unwrap().vector();
        let len = rng.random_range(1..=3i64);
        let to = (from.0 + dx * len, from.1 + dy * len);
        if to.0 < 0 || to.1 < 0 || to.0 > side || to.1 > side || inner.contains(&to) {
            continue;
        }
        if !index.contains_key(&to) && verts.len() >= max_vertices {
            continue;
        }
        let pts: Vec<(i64, i64)> = (0..=len).map(|k| (from.0 + dx * k, from.1 + dy * k)).collect();
        let interior_free = pts[1..pts.len() - 1]
            .iter()
            .all(|p| !index.contains_key(p) && !inner.contains(p));
        let step = |a: (i64, i64), b: (i64, i64)| if a < b { (a, b) } else { (b, a) };
        let steps_free = pts.windows(2).all(|w| !steps.contains(&step(w[0], w[1])));
        let square = |a: (i64, i64), b: (i64, i64)| (a.0.min(b.0), a.1.min(b.1));
        let squares_free = dx == 0 || dy == 0 || pts.windows(2).all(|w| !squares.contains(&square(w[0], w[1])));
        if !(interior_free && steps_free && squares_free) {
            continue;
        }
        let v = *index.entry(to).or_insert_with(|| {
            verts.push(to);
            verts.len() - 1
        });
        inner.extend(pts[1..pts.len() - 1].iter().copied());
        for w in pts.windows(2) {
            steps.insert(step(w[0], w[1]));
            if dx != 0 && dy != 0 {
                squares.insert(square(w[0], w[1]));
            }
        }
        edges.push((index[&from], v));
    }
    // Strip pendants.
    let mut alive = vec![true; edges.len()];
    loop {
        let mut deg = vec![0usize; verts.len()];
        for (k, &(a, b)) in edges.iter().enumerate() {
            if alive[k] {
                deg[a] += 1;
                deg[b] += 1;
            }
        }
        let mut changed = false;
        for (k, &(a, b)) in edges.iter().enumerate() {
            if alive[k] && (deg[a] == 1 || deg[b] == 1) {
                alive[k] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let kept: Vec<(usize, usize)> = edges.iter().zip(&alive).filter(|(_, &a)| a).map(|(&e, _)| e).collect();
    if kept.is_empty() {
        return None;
    }
    // Keep the component of the first surviving edge.
    let mut comp = BTreeSet::from([kept[0].0]);
    loop {
        let before = comp.len();
        for &(a, b) in &kept {
            if comp.contains(&a) || comp.contains(&b) {
                comp.insert(a);
                comp.insert(b);
            }
        }
        if comp.len() == before {
            break;
        }
    }
    let ids: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut b = RepBuilder::new(ids.len());
    for &(u, v) in kept.iter().filter(|(u, _)| comp.contains(u)) {
        let (p, q) = (verts[u], verts[v]);
        let (dir, _) = Direction::from_delta(q.0 - p.0, q.1 - p.1).unwrap();
        b.add_edge(ids[&u], ids[&v], dir);
    }
    let rep = b.build();
    let drw = GridDrawing::new(comp.iter().map(|&v| verts[v]).collect()).normalized();
    assert!(
        validate_rep(&rep).is_empty(),
        "generator produced an invalid representation"
    );
    assert!(
        validate_drawing(&rep, &drw).is_empty(),
        "generator produced an invalid drawing"
    );
    Some((rep, drw))
}

/// Like [`random_drawing`] but retries until something survives.
pub fn random_rep(rng: &mut StdRng, side: i64, max_vertices: usize) -> (OctiRep, GridDrawing) {
    loop {
        if let Some(found) = random_drawing(rng, side, max_vertices, 6 * max_vertices) {
            return found;
        }
    }
}
