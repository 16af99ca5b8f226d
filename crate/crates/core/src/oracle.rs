//! Brute-force realization on a bounded grid: backtracking over vertex
//! placements in breadth-first order. Vertex 0 is anchored at the origin;
//! the bounding box is enforced incrementally so negative coordinates are
//! allowed during search and the result is translated at the end.

use std::collections::VecDeque;

use crate::drawing::{on_segment, segments_intersect, validate_drawing, GridDrawing};
use crate::rep::{validate_rep, DartId, EdgeId, OctiRep, VertexId};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Maximum number of placement attempts before giving up.
    pub node_budget: u64,
    /// Vertices `0..first_vertices` are placed before all others, so a
    /// search over a supergraph fails as early as one over that subgraph.
    pub first_vertices: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            first_vertices: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("node budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("invalid representation: {0}")]
    InvalidRep(String),
}

/// Some drawing inside `[0, W] x [0, H]`, or `None` if there is none.
pub fn oracle_realize(rep: &OctiRep, grid: (i64, i64)) -> Result<Option<GridDrawing>, OracleError> {
    oracle_realize_with(rep, grid, &OracleConfig::default()).map(|(d, _)| d)
}

/// As [`oracle_realize`], also returning the number of nodes visited.
///
/// Grids are searched in increasing size up to `grid`; any drawing in a
/// smaller grid also lies in the full one, and the last round is the full
/// grid, so the answer is unchanged while small solutions are found fast.
pub fn oracle_realize_with(
    rep: &OctiRep,
    grid: (i64, i64),
    cfg: &OracleConfig,
) -> Result<(Option<GridDrawing>, u64), OracleError> {
    let mut s = Search::new(rep, grid, cfg, cfg.node_budget, false)?;
    if grid.0 < 0 || grid.1 < 0 {
        return Ok((None, 0));
    }
    for k in 0..=grid.0.max(grid.1) {
        s.w = k.min(grid.0);
        s.h = k.min(grid.1);
        s.dfs(0)?;
        if s.best.is_some() {
            break;
        }
    }
    Ok((s.best.map(|(_, d)| d), s.nodes))
}

/// Minimum bounding-box area over drawings with width and height at most
/// `max_side`.
pub fn oracle_min_area(rep: &OctiRep, max_side: i64) -> Result<Option<(i64, GridDrawing)>, OracleError> {
    oracle_min_area_with(rep, max_side, &OracleConfig::default())
}

/// Branch and bound on the partial bounding-box area, seeded with the
/// first drawing found by [`oracle_realize_with`].
pub fn oracle_min_area_with(
    rep: &OctiRep,
    max_side: i64,
    cfg: &OracleConfig,
) -> Result<Option<(i64, GridDrawing)>, OracleError> {
    if max_side < 0 {
        return Ok(None);
    }
    let (seed, used) = oracle_realize_with(rep, (max_side, max_side), cfg)?;
    let Some(seed) = seed else {
        return Ok(None);
    };
    let mut s = Search::new(
        rep,
        (max_side, max_side),
        cfg,
        cfg.node_budget.saturating_sub(used),
        true,
    )?;
    s.best = Some((seed.width() * seed.height(), seed));
    s.dfs(0)?;
    Ok(s.best)
}

type Visitor<'a> = &'a mut dyn FnMut(&GridDrawing) -> bool;

/// Calls `visit` on every drawing with vertex 0 at the origin whose
/// bounding box fits in `grid`, until it returns `false`. Returns the number
/// of nodes visited.
pub fn oracle_for_each(
    rep: &OctiRep,
    grid: (i64, i64),
    cfg: &OracleConfig,
    visit: &mut dyn FnMut(&GridDrawing) -> bool,
) -> Result<u64, OracleError> {
    let mut s = Search::new(rep, grid, cfg, cfg.node_budget, false)?;
    if grid.0 < 0 || grid.1 < 0 {
        return Ok(0);
    }
    s.visitor = Some(visit);
    s.dfs(0)?;
    Ok(s.nodes)
}

struct Search<'a> {
    rep: &'a OctiRep,
    order: Vec<VertexId>,
    /// Dart from the BFS parent into `order[k]`, `None` for component roots.
    parent: Vec<Option<DartId>>,
    /// Darts from `order[k]` to neighbors placed before it.
    back: Vec<Vec<DartId>>,
    pos: Vec<Option<(i64, i64)>>,
    placed: Vec<VertexId>,
    edges: Vec<EdgeId>,
    w: i64,
    h: i64,
    nodes: u64,
    budget: u64,
    minimize: bool,
    best: Option<(i64, GridDrawing)>,
    visitor: Option<Visitor<'a>>,
    stopped: bool,
}

impl<'a> Search<'a> {
    fn new(
        rep: &'a OctiRep,
        grid: (i64, i64),
        cfg: &OracleConfig,
        budget: u64,
        minimize: bool,
    ) -> Result<Self, OracleError> {
        if let Some(v) = validate_rep(rep).first() {
            return Err(OracleError::InvalidRep(v.to_string()));
        }
        let n = rep.vertex_count();
        let mut rank = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut parent = Vec::with_capacity(n);
        // Breadth-first, first over the preferred prefix, then over the rest
        // continuing from everything already ordered.
        for allowed in [cfg.first_vertices.min(n), n] {
            let mut queue: VecDeque<VertexId> = order.iter().copied().collect();
            loop {
                while let Some(u) = queue.pop_front() {
                    for &d in rep.rotation(u) {
                        let v = rep.head(d);
                        if v < allowed && rank[v] == usize::MAX {
                            rank[v] = order.len();
                            order.push(v);
                            parent.push(Some(d));
                            queue.push_back(v);
                        }
                    }
                }
                let Some(root) = (0..allowed).find(|&r| rank[r] == usize::MAX) else {
                    break;
                };
                rank[root] = order.len();
                order.push(root);
                parent.push(None);
                queue.push_back(root);
            }
        }
        let back = order
            .iter()
            .map(|&v| {
                rep.rotation(v)
                    .iter()
                    .copied()
                    .filter(|&d| rank[rep.head(d)] < rank[v])
                    .collect()
            })
            .collect();
        Ok(Search {
            rep,
            order,
            parent,
            back,
            pos: vec![None; n],
            placed: Vec::with_capacity(n),
            edges: Vec::new(),
            w: grid.0,
            h: grid.1,
            nodes: 0,
            budget,
            minimize,
            best: None,
            visitor: None,
            stopped: false,
        })
    }

    fn bounds_with(&self, p: (i64, i64)) -> (i64, i64, i64, i64) {
        self.placed.iter().fold((p.0, p.1, p.0, p.1), |(a, b, c, d), &v| {
            let (x, y) = self.pos[v].expect("placed");
            (a.min(x), b.min(y), c.max(x), d.max(y))
        })
    }

    /// Bounding box with `p` still fits (and beats the incumbent area).
    fn fits(&self, p: (i64, i64)) -> bool {
        let (a, b, c, d) = self.bounds_with(p);
        if c - a > self.w || d - b > self.h {
            return false;
        }
        match &self.best {
            Some((area, _)) if self.minimize => (c - a) * (d - b) < *area,
            _ => true,
        }
    }

    fn done(&self) -> bool {
        match self.visitor {
            Some(_) => self.stopped,
            None => !self.minimize && self.best.is_some(),
        }
    }

    fn dfs(&mut self, k: usize) -> Result<(), OracleError> {
        if k == self.order.len() {
            let coords = self.pos.iter().map(|p| p.expect("all placed")).collect();
            let drw = GridDrawing::new(coords).normalized();
            assert!(
                validate_drawing(self.rep, &drw).is_empty(),
                "oracle produced an invalid drawing"
            );
            if let Some(visit) = self.visitor.as_mut() {
                self.stopped = !visit(&drw);
                return Ok(());
            }
            let area = drw.width() * drw.height();
            if self.best.as_ref().is_none_or(|(a, _)| area < *a) {
                self.best = Some((area, drw));
            }
            return Ok(());
        }
        let v = self.order[k];
        match self.parent[k] {
            Some(d) => {
                let (px, py) = self.pos[self.rep.origin(d)].expect("parent placed");
                let (dx, dy) = self.rep.dir(d).vector();
                for len in 1.. {
                    let p = (px + dx * len, py + dy * len);
                    if !self.fits(p) {
                        break;
                    }
                    self.try_place(k, v, p)?;
                    if self.done() {
                        return Ok(());
                    }
                }
            }
            None if k == 0 => self.try_place(k, v, (0, 0))?,
            None => {
                let (a, b, c, d) = self.bounds_with((0, 0));
                for x in (c - self.w)..=(a + self.w) {
                    for y in (d - self.h)..=(b + self.h) {
                        if self.fits((x, y)) {
                            self.try_place(k, v, (x, y))?;
                            if self.done() {
                                return Ok(());
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn try_place(&mut self, k: usize, v: VertexId, p: (i64, i64)) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(OracleError::BudgetExceeded { budget: self.budget });
        }
        if !self.consistent(k, p) {
            return Ok(());
        }
        self.pos[v] = Some(p);
        self.placed.push(v);
        let added = self.back[k].len();
        for &d in &self.back[k] {
            self.edges.push(d / 2);
        }
        let r = self.dfs(k + 1);
        self.edges.truncate(self.edges.len() - added);
        self.placed.pop();
        self.pos[v] = None;
        r
    }

    fn consistent(&self, k: usize, p: (i64, i64)) -> bool {
        let rep = self.rep;
        if self.placed.iter().any(|&u| self.pos[u] == Some(p)) {
            return false;
        }
        for &d in &self.back[k] {
            let q = self.pos[rep.head(d)].expect("back neighbor placed");
            match crate::rep::Direction::from_delta(q.0 - p.0, q.1 - p.1) {
                Some((dir, _)) if dir == rep.dir(d) => {}
                _ => return false,
            }
        }
        // p must not sit inside an existing edge.
        for &e in &self.edges {
            let (a, b, _) = rep.edge(e);
            let (pa, pb) = (self.pos[a].expect("placed"), self.pos[b].expect("placed"));
            if on_segment(p, pa, pb) {
                return false;
            }
        }
        for &d in &self.back[k] {
            let w = rep.head(d);
            let q = self.pos[w].expect("placed");
            for &u in &self.placed {
                if u != w {
                    let pu = self.pos[u].expect("placed");
                    if on_segment(pu, p, q) {
                        return false;
                    }
                }
            }
            for &e in &self.edges {
                let (a, b, _) = rep.edge(e);
                if a == w || b == w {
                    // Sharing w, the edges can only overlap along a common ray.
                    let other = if a == w { b } else { a };
                    let po = self.pos[other].expect("placed");
                    if same_ray(q, p, po) {
                        return false;
                    }
                    continue;
                }
                let (pa, pb) = (self.pos[a].expect("placed"), self.pos[b].expect("placed"));
                if segments_intersect(p, q, pa, pb) {
                    return false;
                }
            }
        }
        true
    }
}

/// `a` and `b` leave `o` in the same direction.
fn same_ray(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> bool {
    let va = (a.0 - o.0, a.1 - o.1);
    let vb = (b.0 - o.0, b.1 - o.1);
    va.0 as i128 * vb.1 as i128 == va.1 as i128 * vb.0 as i128
        && va.0 as i128 * vb.0 as i128 + va.1 as i128 * vb.1 as i128 > 0
}
