//! Interface loops under monochromatic boundary conditions.
//!
//! Two extractors are provided. The direct tracer collects every edge that
//! separates a Yellow hexagon from a Blue one and follows them around. The
//! algorithmic one peels the domain with explorations: a region whose
//! boundary is all one color is explored between two far-apart boundary
//! points with the opposite color pretended on one arc; the explored strip is
//! removed and every leftover piece is queued again, mixed pieces being
//! explored from a color change of their own boundary. Real interface edges
//! found on the way, plus the joining edges between removed hexagons and the
//! region's boundary, are pasted into loops at the end.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exploration::{ExplorationError, LatticePath};
use crate::hexlattice::{BoundaryWalk, DirEdge, HexCoord, LatticeDomain, NO_SLOT, Vertex};
use crate::percolation::{Color, Coloring};
use crate::rng::splitmix64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoopError {
    #[error("domain is not lattice-Jordan")]
    NotJordan,
    #[error("boundary colors are not monochromatic")]
    NotMonochromatic,
    #[error("construction exceeded its budget of {0} explorations")]
    NonTermination(usize),
    #[error("pasted edges leave an open chain at {0:?}")]
    OpenChain(Vertex),
    #[error("region at {0} has no usable color change on its outer boundary")]
    AmbiguousComponent(HexCoord),
    #[error("boundary arc is empty")]
    DegenerateArc,
    #[error(transparent)]
    Exploration(#[from] ExplorationError),
}

/// A closed interface loop, Yellow on the left, starting at its smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeLoop {
    edges: Vec<DirEdge>,
}

impl LatticeLoop {
    /// Builds the canonical form from a closed chain of edges.
    pub fn from_cycle(mut edges: Vec<DirEdge>) -> Self {
        let start = (0..edges.len()).min_by_key(|&i| edges[i].tail()).unwrap_or(0);
        edges.rotate_left(start);
        Self { edges }
    }

    pub fn edges(&self) -> &[DirEdge] {
        &self.edges
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.edges.iter().map(|e| e.tail()).collect()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn points(&self, mesh: f64) -> Vec<[f64; 2]> {
        self.edges.iter().map(|e| e.tail().position(mesh)).collect()
    }

    /// Twice the signed area in the exact integer units of
    /// [`Vertex::scaled_position`].
    pub fn signed_area2(&self) -> i64 {
        let pts: Vec<(i64, i64)> = self.edges.iter().map(|e| e.tail().scaled_position()).collect();
        let n = pts.len();
        (0..n)
            .map(|i| {
                let (x0, y0) = pts[i];
                let (x1, y1) = pts[(i + 1) % n];
                x0 * y1 - x1 * y0
            })
            .sum()
    }

    /// Enclosed area at the given mesh.
    pub fn area(&self, mesh: f64) -> f64 {
        // a scaled unit square has area (√3/2)·(1/2)
        (self.signed_area2().abs() as f64) * 0.5 * (3f64.sqrt() / 4.0) * mesh * mesh
    }

    /// Counterclockwise loops have their Yellow side inside.
    pub fn yellow_inside(&self) -> bool {
        self.signed_area2() > 0
    }

    /// Strict containment of a scaled point that is not on the loop.
    pub fn encloses(&self, p: (i64, i64)) -> bool {
        let pts: Vec<(i64, i64)> = self.edges.iter().map(|e| e.tail().scaled_position()).collect();
        let (px, py) = p;
        let mut inside = false;
        let n = pts.len();
        for i in 0..n {
            let (x0, y0) = pts[i];
            let (x1, y1) = pts[(i + 1) % n];
            if (y0 > py) != (y1 > py) {
                // x-coordinate of the crossing compared with px, exactly
                let lhs = (x1 - x0) as i128 * (py - y0) as i128;
                let rhs = (px - x0) as i128 * (y1 - y0) as i128;
                let crosses_right = if y1 > y0 { lhs > rhs } else { lhs < rhs };
                if crosses_right {
                    inside = !inside;
                }
            }
        }
        inside
    }

    fn bbox(&self) -> (i64, i64, i64, i64) {
        let mut b = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
        for e in &self.edges {
            let (x, y) = e.tail().scaled_position();
            b = (b.0.min(x), b.1.min(y), b.2.max(x), b.3.max(y));
        }
        b
    }
}

/// A set of loops in canonical order together with their nesting forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopEnsemble {
    pub loops: Vec<LatticeLoop>,
    pub parent: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleRecord {
    pub mesh: f64,
    pub loops: Vec<Vec<[f64; 2]>>,
    /// Index of the surrounding loop, or -1 for roots.
    pub parent: Vec<i64>,
}

impl LoopEnsemble {
    pub fn from_loops(mut loops: Vec<LatticeLoop>) -> Self {
        loops.sort();
        let parent = nesting_of(&loops);
        Self { loops, parent }
    }

    pub fn len(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.loops.iter().map(|l| l.len()).sum()
    }

    pub fn depth(&self, i: usize) -> usize {
        let mut d = 1;
        let mut cur = self.parent[i];
        while let Some(p) = cur {
            d += 1;
            cur = self.parent[p];
        }
        d
    }

    pub fn record(&self, mesh: f64) -> EnsembleRecord {
        EnsembleRecord {
            mesh,
            loops: self.loops.iter().map(|l| l.points(mesh)).collect(),
            parent: self.parent.iter().map(|p| p.map_or(-1, |i| i as i64)).collect(),
        }
    }

    /// CSV rows `loop,length,area,depth,yellow_inside`.
    pub fn write_summary_csv<W: std::io::Write>(&self, w: W, mesh: f64) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["loop", "length", "area", "depth", "yellow_inside"])?;
        for (i, l) in self.loops.iter().enumerate() {
            out.serialize((i, l.len(), l.area(mesh), self.depth(i), l.yellow_inside()))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Parent of every loop: the smallest loop strictly enclosing its first vertex.
fn nesting_of(loops: &[LatticeLoop]) -> Vec<Option<usize>> {
    let boxes: Vec<_> = loops.iter().map(|l| l.bbox()).collect();
    let areas: Vec<i64> = loops.iter().map(|l| l.signed_area2().abs()).collect();
    (0..loops.len())
        .map(|i| {
            let p = loops[i].edges[0].tail().scaled_position();
            (0..loops.len())
                .filter(|&j| j != i && areas[j] > areas[i])
                .filter(|&j| {
                    let b = boxes[j];
                    p.0 > b.0 && p.0 < b.2 && p.1 > b.1 && p.1 < b.3 && loops[j].encloses(p)
                })
                .min_by_key(|&j| areas[j])
        })
        .collect()
}

/// Parent map of an ensemble (recomputed from geometry).
pub fn nesting_tree(e: &LoopEnsemble) -> Vec<Option<usize>> {
    nesting_of(&e.loops)
}

/// Real colors of the domain and its boundary loop under monochromatic
/// boundary conditions.
struct Colors<'c, 'd> {
    c: &'c Coloring<'d>,
    boundary: Color,
}

impl<'c, 'd> Colors<'c, 'd> {
    fn new(c: &'c Coloring<'d>) -> Result<Self, LoopError> {
        let boundary = match c.pretend() {
            None => Color::Blue,
            Some(p) => {
                let first = p[0];
                if p.iter().any(|&x| x != first) {
                    return Err(LoopError::NotMonochromatic);
                }
                first
            }
        };
        Ok(Self { c, boundary })
    }

    #[inline]
    fn get(&self, h: HexCoord) -> Option<Color> {
        let d = self.c.domain();
        match d.slot(h) {
            Some(i) => Some(self.c.colors()[i]),
            None => d.boundary_position(h).map(|_| self.boundary),
        }
    }
}

/// The interface edge between two adjacent hexagons, Yellow on the left,
/// if their colors differ.
#[inline]
fn interface_between(a: HexCoord, ca: Color, b: HexCoord, cb: Color) -> Option<DirEdge> {
    match (ca, cb) {
        (Color::Yellow, Color::Blue) => DirEdge::between(a, b),
        (Color::Blue, Color::Yellow) => DirEdge::between(b, a),
        _ => None,
    }
}

/// All interface edges with at least one side in the domain, sorted.
pub fn interface_edges(c: &Coloring<'_>) -> Result<Vec<DirEdge>, LoopError> {
    let cols = Colors::new(c)?;
    let mut out = Vec::new();
    for (i, &h) in c.domain().hexes().iter().enumerate() {
        let ch = c.colors()[i];
        for nb in h.neighbors() {
            let inside = c.domain().contains(nb);
            // count domain pairs once, from the smaller hexagon
            if inside && nb < h {
                continue;
            }
            if let Some(e) = cols.get(nb).and_then(|cn| interface_between(h, ch, nb, cn)) {
                out.push(e);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Links a set of interface edges into closed loops by matching each
/// edge's head with the unique edge leaving that vertex.
fn link_cycles(edges: impl IntoIterator<Item = DirEdge>) -> Result<Vec<LatticeLoop>, LoopError> {
    let mut by_tail: HashMap<Vertex, DirEdge> = HashMap::new();
    for e in edges {
        by_tail.insert(e.tail(), e);
    }
    let mut starts: Vec<Vertex> = by_tail.keys().copied().collect();
    starts.sort_unstable();
    let mut used: HashSet<Vertex> = HashSet::new();
    let mut loops = Vec::new();
    for s in starts {
        if used.contains(&s) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = s;
        loop {
            let e = *by_tail.get(&v).ok_or(LoopError::OpenChain(v))?;
            used.insert(v);
            cycle.push(e);
            v = e.head();
            if v == s {
                break;
            }
            if used.contains(&v) {
                return Err(LoopError::OpenChain(v));
            }
        }
        loops.push(LatticeLoop::from_cycle(cycle));
    }
    Ok(loops)
}

/// Every interface loop, traced edge by edge. At each vertex the outgoing
/// edge is chosen by the same turn rule the exploration uses.
pub fn extract_loops_direct(c: &Coloring<'_>) -> Result<LoopEnsemble, LoopError> {
    let cols = Colors::new(c)?;
    let edges = interface_edges(c)?;
    let set: HashSet<DirEdge> = edges.iter().copied().collect();
    let mut used: HashSet<DirEdge> = HashSet::new();
    let mut loops = Vec::new();
    for &start in &edges {
        if used.contains(&start) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut e = start;
        loop {
            used.insert(e);
            cycle.push(e);
            let w = cols.get(e.wedge()).expect("interface wedge lies next to the domain");
            e = e.advance(w.is_yellow());
            debug_assert!(set.contains(&e));
            if e == start {
                break;
            }
        }
        loops.push(LatticeLoop::from_cycle(cycle));
    }
    Ok(LoopEnsemble::from_loops(loops))
}

/// How the two exploration endpoints of a monochromatic region are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SeedRule {
    /// The boundary hexagons realizing the larger of the maximal horizontal
    /// and vertical center distances; the lower or more western one is `x`.
    #[default]
    MaxDistance,
    /// Uniformly chosen distinct positions, derived from this seed.
    Random(u64),
}

fn choose_endpoints(walk: &BoundaryWalk, rule: SeedRule, salt: u64) -> (usize, usize) {
    let n = walk.group_count();
    match rule {
        SeedRule::MaxDistance => {
            let scaled: Vec<(i64, i64)> = walk.group_hex.iter().map(|h| (2 * h.q as i64 + h.r as i64, 3 * h.r as i64)).collect();
            let (xmin, xmax) = scaled.iter().fold((i64::MAX, i64::MIN), |(a, b), p| (a.min(p.0), b.max(p.0)));
            let (ymin, ymax) = scaled.iter().fold((i64::MAX, i64::MIN), |(a, b), p| (a.min(p.1), b.max(p.1)));
            // horizontal units are √3/2, vertical units 1/2
            let use_x = 3 * (xmax - xmin).pow(2) >= (ymax - ymin).pow(2);
            let key = |g: usize| if use_x { scaled[g].0 } else { scaled[g].1 };
            let lo = if use_x { xmin } else { ymin };
            let hi = if use_x { xmax } else { ymax };
            let pick = |target: i64| {
                (0..n)
                    .filter(|&g| key(g) == target)
                    .min_by_key(|&g| (walk.group_hex[g], g))
                    .expect("extreme value is attained")
            };
            (pick(lo), pick(hi))
        }
        SeedRule::Random(seed) => {
            let h = splitmix64(seed ^ splitmix64(salt));
            let x = (h % n as u64) as usize;
            let y = (x + 1 + (splitmix64(h) % (n as u64 - 1)) as usize) % n;
            (x, y)
        }
    }
}

/// Work state of the algorithmic extraction: which region owns each domain
/// hexagon (`NO_SLOT` once removed).
struct Peeler<'c, 'd> {
    cols: Colors<'c, 'd>,
    owner: Vec<u32>,
    next_id: u32,
    pool: HashSet<DirEdge>,
    explorations: usize,
}

impl Peeler<'_, '_> {
    #[inline]
    fn owned_by(&self, h: HexCoord, id: u32) -> bool {
        self.cols.c.domain().slot(h).is_some_and(|i| self.owner[i] == id)
    }

    #[inline]
    fn real(&self, h: HexCoord) -> Color {
        self.cols.get(h).expect("hexagon next to the domain")
    }

    fn has_interface(&self, hexes: &[HexCoord]) -> bool {
        hexes.iter().any(|&h| {
            let ch = self.real(h);
            h.neighbors().iter().any(|&nb| self.real(nb) != ch)
        })
    }

    /// Explores one region and returns the pieces left over.
    fn process(&mut self, id: u32, hexes: Vec<HexCoord>, rule: SeedRule) -> Result<Vec<(u32, Vec<HexCoord>)>, LoopError> {
        if !self.has_interface(&hexes) {
            for &h in &hexes {
                let i = self.cols.c.domain().slot(h).expect("domain hexagon");
                self.owner[i] = NO_SLOT;
            }
            return Ok(Vec::new());
        }
        self.explorations += 1;
        let walk = BoundaryWalk::outer(hexes[0], |h| self.owned_by(h, id));
        let group_color: Vec<Color> = walk.group_hex.iter().map(|&h| self.real(h)).collect();
        let outside: HashSet<Color> = hexes
            .iter()
            .flat_map(|h| h.neighbors())
            .filter(|&nb| !self.owned_by(nb, id))
            .map(|nb| self.real(nb))
            .collect();
        let ng = walk.group_count();

        // pretend[g] overrides the color of boundary group g
        let (x, pretend): (usize, Vec<Option<Color>>) = if outside.len() == 1 {
            let c = group_color[0];
            let (x, y) = choose_endpoints(&walk, rule, ((hexes[0].q as u64) << 32) ^ hexes[0].r as u32 as u64);
            let in_xy = |g: usize| (g + ng - x) % ng < (y + ng - x) % ng;
            let flip = |g: usize| match c {
                Color::Blue => !in_xy(g),
                Color::Yellow => in_xy(g),
            };
            (x, (0..ng).map(|g| flip(g).then_some(c.opposite())).collect())
        } else {
            let x = (0..ng)
                .find(|&g| group_color[(g + ng - 1) % ng] == Color::Yellow && group_color[g] == Color::Blue)
                .ok_or(LoopError::AmbiguousComponent(hexes[0]))?;
            (x, vec![None; ng])
        };

        let edge_group: HashMap<DirEdge, usize> = (0..ng)
            .flat_map(|g| walk.group_edges(g).map(move |i| (i, g)))
            .map(|(i, g)| (walk.edges[i], g))
            .collect();
        let wedge_color = |e: DirEdge| -> Color {
            let w = e.wedge();
            if self.owned_by(w, id) {
                return self.real(w);
            }
            let boundary_edge = if self.owned_by(e.left, id) {
                DirEdge::new(e.left, e.dir as usize + 1)
            } else {
                DirEdge::new(e.right(), e.dir as usize + 2)
            };
            match edge_group.get(&boundary_edge) {
                Some(&g) => pretend[g].unwrap_or(group_color[g]),
                None => self.real(w),
            }
        };
        let prev = walk.group_hex[(x + ng - 1) % ng];
        let start = DirEdge::between(prev, walk.group_hex[x]).expect("consecutive boundary hexagons touch");
        debug_assert!(self.owned_by(start.wedge(), id));
        let path = crate::exploration::walk_through(start, |h| self.owned_by(h, id), wedge_color, 12 * hexes.len() + 24)?;

        let fat: HashSet<HexCoord> = path
            .iter()
            .flat_map(|e| [e.left, e.right()])
            .filter(|&h| self.owned_by(h, id))
            .collect();
        for &e in &path {
            if self.real(e.left) == Color::Yellow && self.real(e.right()) == Color::Blue {
                self.pool.insert(e);
            }
        }
        // joining edges between removed hexagons and the region's outside
        for &f in &fat {
            let cf = self.real(f);
            for nb in f.neighbors() {
                if !self.owned_by(nb, id) {
                    if let Some(e) = interface_between(f, cf, nb, self.real(nb)) {
                        self.pool.insert(e);
                    }
                }
            }
        }
        let d = self.cols.c.domain();
        for &f in &fat {
            self.owner[d.slot(f).expect("domain hexagon")] = NO_SLOT;
        }
        // split what is left into connected pieces with fresh ids
        let mut pieces = Vec::new();
        for &h in &hexes {
            if !self.owned_by(h, id) {
                continue;
            }
            let new_id = self.next_id;
            self.next_id += 1;
            let mut piece = vec![h];
            self.owner[d.slot(h).expect("domain hexagon")] = new_id;
            let mut k = 0;
            while k < piece.len() {
                for nb in piece[k].neighbors() {
                    if self.owned_by(nb, id) {
                        self.owner[d.slot(nb).expect("domain hexagon")] = new_id;
                        piece.push(nb);
                    }
                }
                k += 1;
            }
            piece.sort_unstable();
            pieces.push((new_id, piece));
        }
        Ok(pieces)
    }
}

/// Every interface loop, built by iterated explorations as described in the
/// module docs. `rule` picks the endpoints in monochromatic regions.
pub fn extract_loops_algorithmic(c: &Coloring<'_>, rule: SeedRule) -> Result<LoopEnsemble, LoopError> {
    let d = c.domain();
    if !d.is_lattice_jordan() {
        return Err(LoopError::NotJordan);
    }
    let cols = Colors::new(c)?;
    let interface_count = interface_edges(c)?.len();
    let budget = d.len() + interface_count;
    let mut peeler = Peeler { cols, owner: vec![0; d.len()], next_id: 1, pool: HashSet::new(), explorations: 0 };
    let mut queue = VecDeque::from([(0u32, d.hexes().to_vec())]);
    while let Some((id, hexes)) = queue.pop_front() {
        if peeler.explorations > budget {
            return Err(LoopError::NonTermination(budget));
        }
        queue.extend(peeler.process(id, hexes, rule)?);
    }
    let loops = link_cycles(peeler.pool)?;
    Ok(LoopEnsemble::from_loops(loops))
}

/// Pastes the maximal excursions of the loops touching the boundary arc
/// `[b, a)` into one path from position `a` to position `b`, joined by
/// boundary edges. With that arc colored Yellow and `[a, b)` Blue this is
/// the path an exploration from `a` to `b` would trace.
pub fn paste_excursions(e: &LoopEnsemble, d: &LatticeDomain, a: usize, b: usize) -> Result<LatticePath, LoopError> {
    if !d.is_lattice_jordan() {
        return Err(LoopError::NotJordan);
    }
    let ng = d.boundary_adjacent().len();
    if a == b || a >= ng || b >= ng {
        return Err(LoopError::DegenerateArc);
    }
    let walk = d.boundary_walk();
    let ne = walk.edges.len();
    let mut group_of = vec![0usize; ne];
    for g in 0..ng {
        for i in walk.group_edges(g) {
            group_of[i] = g;
        }
    }
    let index: HashMap<DirEdge, usize> = walk.edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let in_gamma = |g: usize| (g + ng - b) % ng < (a + ng - b) % ng;
    let origin = walk.group_start[a];
    let rank = |i: usize| (origin + ne - i) % ne;

    // (min rank, max rank, loop, position of min contact, position of max contact)
    let mut spans: Vec<(usize, usize, usize, usize, usize)> = Vec::new();
    for (li, l) in e.loops.iter().enumerate() {
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for (pos, edge) in l.edges().iter().enumerate() {
            let Some(&i) = index.get(edge) else { continue };
            if !in_gamma(group_of[i]) {
                continue;
            }
            let r = rank(i);
            best = Some(match best {
                None => (r, r, pos, pos),
                Some((lo, hi, plo, phi)) => {
                    let (lo, plo) = if r < lo { (r, pos) } else { (lo, plo) };
                    let (hi, phi) = if r > hi { (r, pos) } else { (hi, phi) };
                    (lo, hi, plo, phi)
                }
            });
        }
        if let Some((lo, hi, plo, phi)) = best {
            spans.push((lo, hi, li, plo, phi));
        }
    }
    spans.sort_by_key(|s| (s.0, std::cmp::Reverse(s.1)));
    let mut maximal: Vec<(usize, usize, usize, usize, usize)> = Vec::new();
    for s in spans {
        if maximal.last().is_none_or(|m| s.0 > m.1) {
            maximal.push(s);
        }
    }

    let mut edges = vec![d.entry_edge(a)];
    let connect = |edges: &mut Vec<DirEdge>, from_rank: usize, to_rank: usize| {
        for r in from_rank..=to_rank {
            edges.push(walk.edges[(origin + ne - r) % ne].reversed());
        }
    };
    let mut next_rank = 1;
    for (lo, hi, li, plo, phi) in maximal {
        if lo > next_rank {
            connect(&mut edges, next_rank, lo - 1);
        }
        let l = e.loops[li].edges();
        let m = l.len();
        let mut k = (plo + 1) % m;
        while k != phi {
            edges.push(l[k]);
            k = (k + 1) % m;
        }
        next_rank = hi + 1;
    }
    let end_rank = rank(walk.group_start[b]);
    if end_rank >= next_rank {
        connect(&mut edges, next_rank, end_rank);
    }
    edges.push(d.entry_edge(b).reversed());
    Ok(LatticePath::new(edges))
}

/// Does the path touch `first` (as a left or right hexagon) before `second`?
/// False when it touches neither.
pub fn touches_first(path: &LatticePath, first: &[HexCoord], second: &[HexCoord]) -> bool {
    let a: HashSet<HexCoord> = first.iter().copied().collect();
    let b: HashSet<HexCoord> = second.iter().copied().collect();
    for e in &path.edges {
        for h in [e.left, e.right()] {
            if a.contains(&h) {
                return true;
            }
            if b.contains(&h) {
                return false;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexlattice::{build_domain, shapes};

    fn h(q: i32, r: i32) -> HexCoord {
        HexCoord::new(q, r)
    }

    #[test]
    fn all_blue_is_empty() {
        let d = build_domain(shapes::rhombus(4, 5), 1.0).unwrap();
        let c = Coloring::uniform(&d, Color::Blue);
        assert!(extract_loops_direct(&c).unwrap().is_empty());
        assert!(extract_loops_algorithmic(&c, SeedRule::MaxDistance).unwrap().is_empty());
    }

    #[test]
    fn one_yellow_hexagon() {
        let d = build_domain(shapes::hex_ball(2), 1.0).unwrap();
        let c = Coloring::from_fn(&d, |x| if x == h(0, 0) { Color::Yellow } else { Color::Blue });
        let direct = extract_loops_direct(&c).unwrap();
        assert_eq!(direct.len(), 1);
        assert_eq!(direct.loops[0].len(), 6);
        assert!(direct.loops[0].yellow_inside());
        assert_eq!(extract_loops_algorithmic(&c, SeedRule::MaxDistance).unwrap(), direct);
    }

    #[test]
    fn area_of_a_hexagon() {
        let d = build_domain([h(0, 0)], 1.0).unwrap();
        let e = extract_loops_direct(&Coloring::uniform(&d, Color::Yellow)).unwrap();
        let expect = 1.5 * 3f64.sqrt();
        assert!((e.loops[0].area(1.0) - expect).abs() < 1e-12);
    }

    #[test]
    fn mixed_boundary_is_rejected() {
        let d = build_domain([h(0, 0)], 1.0).unwrap();
        let c = Coloring::uniform(&d, Color::Yellow).with_pretend(crate::exploration::default_pretend(6, 0, 3));
        assert_eq!(extract_loops_direct(&c).unwrap_err(), LoopError::NotMonochromatic);
    }

    #[test]
    fn degenerate_arc() {
        let d = build_domain([h(0, 0)], 1.0).unwrap();
        let e = LoopEnsemble::from_loops(Vec::new());
        assert_eq!(paste_excursions(&e, &d, 2, 2).unwrap_err(), LoopError::DegenerateArc);
    }
}
