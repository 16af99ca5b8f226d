//! Exhaustive enumeration of small connected representations, up to
//! relabeling and the eight symmetries of the square grid.
//!
//! Every valid connected representation is reached by: a cycle, then a
//! sequence of ears (a new path between two existing vertices, possibly the
//! same one) and lollipops (a new path ending in a new cycle), then pendant
//! leaves. Removing a non-bridge edge from a leafless representation and
//! stripping the resulting leaves undoes exactly one ear or lollipop, and
//! both removals preserve validity, which makes the growth complete.
//!
//! Pruning uses two monotonicity facts: a leaf addition never lowers the
//! reflex count, and an ear or lollipop lowers it by at most two (it splits
//! at most two existing corners). For convex targets the outer cycle is
//! grown first and every ear goes into an internal face, so outer inflex
//! corners are permanent and each internal reflex corner needs a later ear.

use std::collections::HashSet;

use crate::rep::{derive_faces, validate_rep, Direction, FaceSet, OctiRep, RepBuilder, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusKind {
    /// Valid convex representations.
    Convex,
    /// Valid representations with at most this many reflex corners.
    MaxOmega(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusConfig {
    pub max_edges: usize,
    pub kind: CorpusKind,
}

/// One of the eight grid symmetries: direction `d` maps to
/// `sign * d + 2 * quarter_turns`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub reflect: bool,
    pub quarter_turns: u8,
}

impl Symmetry {
    pub fn all() -> impl Iterator<Item = Symmetry> {
        (0..8).map(|i| Symmetry {
            reflect: i >= 4,
            quarter_turns: i % 4,
        })
    }

    pub fn apply(self, d: Direction) -> Direction {
        let v = d.value() as i64;
        let v = if self.reflect { -v } else { v };
        Direction::wrapping(v + 2 * self.quarter_turns as i64)
    }

    pub fn apply_point(self, (x, y): (i64, i64)) -> (i64, i64) {
        let (x, y) = if self.reflect { (x, -y) } else { (x, y) };
        match self.quarter_turns % 4 {
            0 => (x, y),
            1 => (-y, x),
            2 => (-x, -y),
            _ => (y, -x),
        }
    }
}

/// Applies a grid symmetry; edge ids and endpoints are kept.
pub fn transform_rep(rep: &OctiRep, s: Symmetry) -> OctiRep {
    let mut b = RepBuilder::new(rep.vertex_count());
    for e in 0..rep.edge_count() {
        let (u, v, d) = rep.edge(e);
        b.add_edge(u, v, s.apply(d));
    }
    // A reflection swaps the sides of every dart.
    let outer = rep.outer_dart().map(|d| if s.reflect { d ^ 1 } else { d });
    b.build_raw(outer)
}

/// Canonical code of a connected representation: the lexicographically
/// smallest breadth-first description over all start vertices and grid
/// symmetries. Equal codes mean equal representations up to relabeling
/// and symmetry.
pub fn canonical_code(rep: &OctiRep) -> Vec<u8> {
    canonical_labeling(rep).0
}

fn canonical_labeling(rep: &OctiRep) -> (Vec<u8>, Symmetry, Vec<VertexId>) {
    let n = rep.vertex_count();
    let mut best: Option<(Vec<u8>, Symmetry, Vec<VertexId>)> = None;
    for s in Symmetry::all() {
        for start in 0..n {
            let (code, order) = bfs_code(rep, s, start);
            if best.as_ref().is_none_or(|(b, _, _)| code < *b) {
                best = Some((code, s, order));
            }
        }
    }
    best.unwrap_or_else(|| {
        let id = Symmetry {
            reflect: false,
            quarter_turns: 0,
        };
        (Vec::new(), id, Vec::new())
    })
}

fn bfs_code(rep: &OctiRep, s: Symmetry, start: VertexId) -> (Vec<u8>, Vec<VertexId>) {
    let n = rep.vertex_count();
    let mut label = vec![u8::MAX; n];
    let mut order = vec![start];
    label[start] = 0;
    let mut code = Vec::with_capacity(3 * rep.dart_count());
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        let mut darts: Vec<(u8, VertexId)> = rep
            .rotation(u)
            .iter()
            .map(|&d| (s.apply(rep.dir(d)).value(), rep.head(d)))
            .collect();
        darts.sort_unstable();
        code.push(darts.len() as u8);
        for (dir, v) in darts {
            if label[v] == u8::MAX {
                label[v] = order.len() as u8;
                order.push(v);
            }
            code.push(dir);
            code.push(label[v]);
        }
        i += 1;
    }
    (code, order)
}

/// The representation relabeled and transformed into its canonical form:
/// vertices in canonical order, edges sorted by endpoints.
pub fn canonical_form(rep: &OctiRep) -> OctiRep {
    let (_, s, order) = canonical_labeling(rep);
    let mut label = vec![0; rep.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        label[v] = i;
    }
    let mut edges: Vec<(VertexId, VertexId, Direction)> = (0..rep.edge_count())
        .map(|e| {
            let (u, v, d) = rep.edge(e);
            let (u, v, d) = (label[u], label[v], s.apply(d));
            if u <= v {
                (u, v, d)
            } else {
                (v, u, d.opposite())
            }
        })
        .collect();
    edges.sort_by_key(|&(u, v, d)| (u, v, d));
    let mut b = RepBuilder::new(rep.vertex_count());
    for (u, v, d) in edges {
        b.add_edge(u, v, d);
    }
    b.build()
}

fn omega(faces: &FaceSet) -> usize {
    faces.corners().filter(|c| c.is_reflex()).count()
}

fn internal_reflex(faces: &FaceSet) -> usize {
    faces
        .faces
        .iter()
        .filter(|f| !f.is_outer)
        .map(|f| f.reflex_count())
        .sum()
}

fn outer_inflex(faces: &FaceSet) -> usize {
    faces
        .faces
        .iter()
        .filter(|f| f.is_outer)
        .map(|f| f.inflex_count())
        .sum()
}

/// Edge list of a representation, for rebuilding with additions.
fn edge_list(rep: &OctiRep) -> Vec<(VertexId, VertexId, Direction)> {
    (0..rep.edge_count()).map(|e| rep.edge(e)).collect()
}

fn build(n: usize, edges: &[(VertexId, VertexId, Direction)]) -> Option<OctiRep> {
    let mut b = RepBuilder::new(n);
    for &(u, v, d) in edges {
        b.add_edge(u, v, d);
    }
    let rep = b.build();
    validate_rep(&rep).is_empty().then_some(rep)
}

/// Enumerates direction assignments for `new_edges` (pairs of vertex ids,
/// new vertices numbered from `base_n`), keeping directions distinct at
/// every vertex, and calls `f` with each valid result.
fn for_each_extension(
    base_n: usize,
    base_edges: &[(VertexId, VertexId, Direction)],
    extra_vertices: usize,
    new_edges: &[(VertexId, VertexId)],
    f: &mut dyn FnMut(OctiRep),
) {
    let n = base_n + extra_vertices;
    let mut used = vec![0u8; n];
    for &(u, v, d) in base_edges {
        used[u] |= 1 << d.value();
        used[v] |= 1 << d.opposite().value();
    }
    let mut edges = base_edges.to_vec();
    fn rec(
        i: usize,
        n: usize,
        new_edges: &[(VertexId, VertexId)],
        used: &mut Vec<u8>,
        edges: &mut Vec<(VertexId, VertexId, Direction)>,
        f: &mut dyn FnMut(OctiRep),
    ) {
        if i == new_edges.len() {
            if let Some(rep) = build(n, edges) {
                f(rep);
            }
            return;
        }
        let (u, v) = new_edges[i];
        for d in Direction::ALL {
            let (bu, bv) = (1u8 << d.value(), 1u8 << d.opposite().value());
            if used[u] & bu != 0 || used[v] & bv != 0 {
                continue;
            }
            used[u] |= bu;
            used[v] |= bv;
            edges.push((u, v, d));
            rec(i + 1, n, new_edges, used, edges, f);
            edges.pop();
            used[u] &= !bu;
            used[v] &= !bv;
        }
    }
    rec(0, n, new_edges, &mut used, &mut edges, f);
}

struct Generator {
    cfg: CorpusConfig,
    seen: HashSet<Vec<u8>>,
    out: Vec<OctiRep>,
}

impl Generator {
    fn keep(&self, faces: &FaceSet, rep: &OctiRep) -> bool {
        match self.cfg.kind {
            CorpusKind::Convex => crate::rep::is_convex(rep, faces),
            CorpusKind::MaxOmega(w) => omega(faces) <= w,
        }
    }

    /// Whether a leafless state can still grow into a target.
    fn leafless_viable(&self, faces: &FaceSet, m: usize) -> bool {
        let remaining = self.cfg.max_edges - m;
        match self.cfg.kind {
            CorpusKind::Convex => outer_inflex(faces) == 0 && internal_reflex(faces) <= 2 * remaining,
            CorpusKind::MaxOmega(w) => omega(faces) <= w + 2 * remaining,
        }
    }

    fn visit(&mut self, rep: &OctiRep) -> Option<FaceSet> {
        let code = canonical_code(rep);
        if !self.seen.insert(code) {
            return None;
        }
        let faces = derive_faces(rep).ok()?;
        if self.keep(&faces, rep) {
            self.out.push(canonical_form(rep));
        }
        Some(faces)
    }

    fn cycles(&mut self) -> Vec<OctiRep> {
        let mut found = Vec::new();
        let max = self.cfg.max_edges;
        let mut turns = Vec::new();
        fn rec(turns: &mut Vec<i64>, sum: i64, max: usize, found: &mut Vec<Vec<i64>>) {
            let k = turns.len();
            if k >= 3 && sum == 8 {
                found.push(turns.clone());
            }
            if k == max {
                return;
            }
            for t in -3..=3 {
                // Remaining turns can change the sum by at most 3 each.
                if (8 - (sum + t)).abs() > 3 * (max - k - 1) as i64 {
                    continue;
                }
                turns.push(t);
                rec(turns, sum + t, max, found);
                turns.pop();
            }
        }
        let mut seqs = Vec::new();
        rec(&mut turns, 0, max, &mut seqs);
        for seq in seqs {
            let k = seq.len();
            if self.cfg.kind == CorpusKind::Convex && seq.iter().any(|&t| t < 0) {
                continue;
            }
            for d0 in [0, 1] {
                let mut d = d0;
                let mut edges = Vec::with_capacity(k);
                for (i, t) in seq.iter().enumerate() {
                    edges.push((i, (i + 1) % k, Direction::wrapping(d)));
                    d += t;
                }
                if let Some(rep) = build(k, &edges) {
                    found.push(rep);
                }
            }
        }
        found
    }

    fn run(mut self) -> Vec<OctiRep> {
        let mut leafless: Vec<OctiRep> = Vec::new();
        let mut stack: Vec<OctiRep> = Vec::new();
        for c in self.cycles() {
            if let Some(faces) = self.visit(&c) {
                if self.leafless_viable(&faces, c.edge_count()) {
                    stack.push(c);
                }
            }
        }
        while let Some(rep) = stack.pop() {
            leafless.push(rep.clone());
            let m = rep.edge_count();
            let n = rep.vertex_count();
            let base = edge_list(&rep);
            let outer_before: Option<Vec<usize>> = match self.cfg.kind {
                CorpusKind::Convex => {
                    let faces = derive_faces(&rep).expect("valid");
                    faces.outer.map(|o| {
                        let mut d = faces.faces[o].darts.clone();
                        d.sort_unstable();
                        d
                    })
                }
                CorpusKind::MaxOmega(_) => None,
            };
            let mut children = Vec::new();
            let mut collect = |r: OctiRep| children.push(r);
            for c in 1..=(self.cfg.max_edges - m) {
                // Ears u -> w_1 -> ... -> v.
                for u in 0..n {
                    for v in u..n {
                        if u == v && c < 3 {
                            continue;
                        }
                        let path: Vec<(usize, usize)> = (0..c)
                            .map(|i| {
                                let a = if i == 0 { u } else { n + i - 1 };
                                let b = if i + 1 == c { v } else { n + i };
                                (a, b)
                            })
                            .collect();
                        for_each_extension(n, &base, c - 1, &path, &mut collect);
                    }
                }
                // Lollipops: stick of s edges from u, then a loop of c - s edges.
                if self.cfg.kind != CorpusKind::Convex {
                    for s in 1..c.saturating_sub(2) {
                        let l = c - s;
                        for u in 0..n {
                            let mut path = Vec::new();
                            for i in 0..s {
                                let a = if i == 0 { u } else { n + i - 1 };
                                path.push((a, n + i));
                            }
                            let knot = n + s - 1;
                            for i in 0..l {
                                let a = if i == 0 { knot } else { n + s + i - 1 };
                                let b = if i + 1 == l { knot } else { n + s + i };
                                path.push((a, b));
                            }
                            for_each_extension(n, &base, s + l - 1, &path, &mut collect);
                        }
                    }
                }
            }
            for child in children {
                if let Some(before) = &outer_before {
                    let faces = derive_faces(&child).expect("valid");
                    let after = faces.outer.map(|o| {
                        let mut d = faces.faces[o].darts.clone();
                        d.sort_unstable();
                        d
                    });
                    if after.as_ref() != Some(before) {
                        continue;
                    }
                }
                if let Some(faces) = self.visit(&child) {
                    if self.leafless_viable(&faces, child.edge_count()) {
                        stack.push(child);
                    }
                }
            }
        }

        if let CorpusKind::MaxOmega(w) = self.cfg.kind {
            // Trees start from a single edge.
            let mut stack: Vec<OctiRep> = Vec::new();
            for d in [Direction::E, Direction::NE] {
                if let Some(rep) = build(2, &[(0, 1, d)]) {
                    if let Some(faces) = self.visit(&rep) {
                        if omega(&faces) <= w {
                            stack.push(rep);
                        }
                    }
                }
            }
            for rep in leafless {
                let faces = derive_faces(&rep).expect("valid");
                if omega(&faces) <= w {
                    stack.push(rep);
                }
            }
            while let Some(rep) = stack.pop() {
                if rep.edge_count() == self.cfg.max_edges {
                    continue;
                }
                let n = rep.vertex_count();
                let base = edge_list(&rep);
                let mut children = Vec::new();
                for u in 0..n {
                    for_each_extension(n, &base, 1, &[(u, n)], &mut |r| children.push(r));
                }
                for child in children {
                    if let Some(faces) = self.visit(&child) {
                        if omega(&faces) <= w {
                            stack.push(child);
                        }
                    }
                }
            }
        }
        let mut out = self.out;
        out.sort_by_cached_key(|r| (r.edge_count(), canonical_code(r)));
        out
    }
}

/// All canonical representations of the requested kind with at most
/// `max_edges` edges, sorted by edge count and canonical code.
pub fn enumerate_corpus(cfg: CorpusConfig) -> Vec<OctiRep> {
    Generator {
        cfg,
        seen: HashSet::new(),
        out: Vec::new(),
    }
    .run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rep::compute_params;

    #[test]
    fn symmetric_copies_share_a_code() {
        let rep = fixtures::split_hexagon();
        let code = canonical_code(&rep);
        for s in Symmetry::all() {
            let t = transform_rep(&rep, s);
            assert!(validate_rep(&t).is_empty());
            assert_eq!(canonical_code(&t), code);
        }
        assert_ne!(canonical_code(&fixtures::unit_square()), code);
        let perm: Vec<usize> = (0..7).rev().collect();
        assert_eq!(canonical_code(&rep.relabel_vertices(&perm)), code);
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        for rep in [
            fixtures::split_hexagon(),
            fixtures::l_shape(),
            fixtures::square_with_chord(),
        ] {
            let c = canonical_form(&rep);
            assert!(validate_rep(&c).is_empty());
            assert_eq!(canonical_code(&c), canonical_code(&rep));
            assert_eq!(canonical_form(&c), c);
        }
    }

    /// Every connected simple graph on at most `max_edges + 1` vertices
    /// with every direction assignment, deduplicated by canonical code.
    fn brute_force(max_edges: usize, keep: impl Fn(&OctiRep) -> bool) -> HashSet<Vec<u8>> {
        let mut out = HashSet::new();
        for n in 2..=max_edges + 1 {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
            for mask in 0u64..(1 << pairs.len()) {
                let m = mask.count_ones() as usize;
                if m == 0 || m > max_edges {
                    continue;
                }
                let chosen: Vec<(usize, usize)> = (0..pairs.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| pairs[i])
                    .collect();
                for code in 0..8u64.pow(m as u32) {
                    let mut b = RepBuilder::new(n);
                    let mut c = code;
                    for &(u, v) in &chosen {
                        b.add_edge(u, v, Direction::wrapping((c % 8) as i64));
                        c /= 8;
                    }
                    let rep = b.build();
                    if rep.is_connected() && validate_rep(&rep).is_empty() && keep(&rep) {
                        out.insert(canonical_code(&rep));
                    }
                }
            }
        }
        out
    }

    fn codes(corpus: &[OctiRep]) -> HashSet<Vec<u8>> {
        corpus.iter().map(canonical_code).collect()
    }

    #[test]
    fn growth_matches_brute_force_up_to_four_edges() {
        for kind in [CorpusKind::Convex, CorpusKind::MaxOmega(4), CorpusKind::MaxOmega(8)] {
            let corpus = enumerate_corpus(CorpusConfig { max_edges: 4, kind });
            let expected = brute_force(4, |r| {
                let faces = derive_faces(r).unwrap();
                match kind {
                    CorpusKind::Convex => crate::rep::is_convex(r, &faces),
                    CorpusKind::MaxOmega(w) => omega(&faces) <= w,
                }
            });
            assert_eq!(codes(&corpus), expected, "{kind:?}");
            assert_eq!(corpus.len(), expected.len());
        }
    }

    #[test]
    fn cycles_match_brute_force_up_to_six_edges() {
        let corpus = enumerate_corpus(CorpusConfig {
            max_edges: 6,
            kind: CorpusKind::MaxOmega(6),
        });
        let cycles: HashSet<Vec<u8>> = corpus
            .iter()
            .filter(|r| r.edge_count() == r.vertex_count() && (0..r.vertex_count()).all(|v| r.degree(v) == 2))
            .map(canonical_code)
            .collect();
        let mut expected = HashSet::new();
        for k in 3..=6usize {
            for code in 0..8u64.pow(k as u32) {
                let mut b = RepBuilder::new(k);
                let mut c = code;
                for i in 0..k {
                    b.add_edge(i, (i + 1) % k, Direction::wrapping((c % 8) as i64));
                    c /= 8;
                }
                let rep = b.build();
                if validate_rep(&rep).is_empty() {
                    expected.insert(canonical_code(&rep));
                }
            }
        }
        assert_eq!(cycles, expected);
    }

    #[test]
    fn small_convex_corpus() {
        let corpus = enumerate_corpus(CorpusConfig {
            max_edges: 4,
            kind: CorpusKind::Convex,
        });
        // Convex turn sequences up to symmetry: 2 triangles, 4 triangles with
        // a flat vertex and 8 quadrilaterals.
        assert_eq!(corpus.iter().filter(|r| r.edge_count() == 3).count(), 2);
        assert_eq!(corpus.iter().filter(|r| r.edge_count() == 4).count(), 12);
    }

    #[test]
    fn omega_corpus_respects_bound() {
        let corpus = enumerate_corpus(CorpusConfig {
            max_edges: 4,
            kind: CorpusKind::MaxOmega(3),
        });
        assert!(!corpus.is_empty());
        for rep in &corpus {
            assert!(validate_rep(rep).is_empty());
            assert!(compute_params(rep).unwrap().omega <= 3);
        }
        // A single edge has two reflex leaf corners.
        assert!(corpus.iter().any(|r| r.edge_count() == 1));
    }
}
