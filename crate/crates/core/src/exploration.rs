//! The chordal exploration process and the objects built from it.
//!
//! An exploration walks along tiling edges keeping Yellow hexagons on its
//! left and Blue ones on its right. At the head of the current edge exactly
//! one hexagon (the wedge) is new; the walker turns so that the wedge ends up
//! on the side of its color. Outside the domain the boundary colors are used.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hexlattice::{DirEdge, HexCoord, LatticeDomain, Vertex};
use crate::percolation::{Color, Coloring, SiteColors};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExplorationError {
    #[error("domain is not lattice-Jordan")]
    NotJordan,
    #[error("boundary positions {0} and {1} do not bound a Blue and a Yellow arc")]
    BadSplitPoints(usize, usize),
    #[error("component {0} matches none of the four boundary patterns")]
    AmbiguousComponent(usize),
    #[error("walk left the explored region at {0}")]
    Escaped(HexCoord),
}

/// An edge path of the hexagonal tiling; consecutive edges share a vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePath {
    pub edges: Vec<DirEdge>,
}

/// JSON form: embedded vertices plus exact corner ids `[q, r, up]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathRecord {
    pub points: Vec<[f64; 2]>,
    pub corners: Vec<[i32; 3]>,
}

impl LatticePath {
    pub fn new(edges: Vec<DirEdge>) -> Self {
        Self { edges }
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `len() + 1` vertices, or none for the empty path.
    pub fn vertices(&self) -> Vec<Vertex> {
        match self.edges.first() {
            None => Vec::new(),
            Some(first) => std::iter::once(first.tail()).chain(self.edges.iter().map(|e| e.head())).collect(),
        }
    }

    pub fn points(&self, mesh: f64) -> Vec<[f64; 2]> {
        self.vertices().into_iter().map(|v| v.position(mesh)).collect()
    }

    pub fn start(&self) -> Option<DirEdge> {
        self.edges.first().copied()
    }

    pub fn end(&self) -> Option<DirEdge> {
        self.edges.last().copied()
    }

    pub fn record(&self, mesh: f64) -> PathRecord {
        let vs = self.vertices();
        PathRecord {
            points: vs.iter().map(|v| v.position(mesh)).collect(),
            corners: vs.iter().map(|v| [v.q, v.r, i32::from(v.kind == crate::hexlattice::CornerKind::Up)]).collect(),
        }
    }

    /// Edges are chained and no vertex repeats.
    pub fn is_simple_chain(&self) -> bool {
        let chained = self.edges.windows(2).all(|w| w[0].head() == w[1].tail());
        let vs = self.vertices();
        let distinct: HashSet<Vertex> = vs.iter().copied().collect();
        chained && distinct.len() == vs.len()
    }
}

/// An infinite walk driven by a wedge-color oracle; yields the start edge
/// first and then one edge per step.
pub struct Walker<C> {
    edge: DirEdge,
    started: bool,
    wedge_yellow: C,
}

impl<C: FnMut(DirEdge) -> bool> Walker<C> {
    /// `wedge_yellow(e)` reports whether the wedge hexagon at the head of `e`
    /// counts as Yellow.
    pub fn new(start: DirEdge, wedge_yellow: C) -> Self {
        Self { edge: start, started: false, wedge_yellow }
    }
}

impl<C: FnMut(DirEdge) -> bool> Iterator for Walker<C> {
    type Item = DirEdge;

    fn next(&mut self) -> Option<DirEdge> {
        if self.started {
            let y = (self.wedge_yellow)(self.edge);
            self.edge = self.edge.advance(y);
        }
        self.started = true;
        Some(self.edge)
    }
}

/// Walk from `start` until an edge with both sides outside `inside` is
/// reached (the start edge itself excepted). The wedge colors come from
/// `color_at`. Returns the edges including both ends; `max_steps` guards
/// against runaway walks.
pub fn walk_through(
    start: DirEdge,
    inside: impl Fn(HexCoord) -> bool,
    mut color_at: impl FnMut(DirEdge) -> Color,
    max_steps: usize,
) -> Result<Vec<DirEdge>, ExplorationError> {
    let mut edges = Vec::new();
    for e in Walker::new(start, |e| color_at(e).is_yellow()) {
        edges.push(e);
        if edges.len() > 1 && !inside(e.left) && !inside(e.right()) {
            return Ok(edges);
        }
        if edges.len() > max_steps {
            return Err(ExplorationError::Escaped(e.wedge()));
        }
    }
    unreachable!("walker is infinite")
}

/// Boundary colors of the default chordal setup: `[x, y)` Blue, `[y, x)` Yellow.
pub fn default_pretend(n: usize, x: usize, y: usize) -> Vec<Color> {
    (0..n)
        .map(|i| if (i + n - x) % n < (y + n - x) % n { Color::Blue } else { Color::Yellow })
        .collect()
}

fn check_split(d: &LatticeDomain, x: usize, y: usize) -> Result<(), ExplorationError> {
    if !d.is_lattice_jordan() {
        return Err(ExplorationError::NotJordan);
    }
    let n = d.boundary_adjacent().len();
    if x >= n || y >= n || x == y {
        return Err(ExplorationError::BadSplitPoints(x, y));
    }
    Ok(())
}

/// Lazily generated exploration in a lattice-Jordan domain: site colors come
/// from `sites`, boundary colors from `boundary` (by boundary position). The
/// iterator yields the start edge at position `x` and stops after the first
/// edge whose two sides are both outside the domain.
pub struct Exploration<'d, S, B> {
    domain: &'d LatticeDomain,
    sites: S,
    boundary: B,
    edge: DirEdge,
    steps: usize,
    done: bool,
}

impl<'d, S: SiteColors, B: Fn(usize) -> Color> Exploration<'d, S, B> {
    pub fn new(domain: &'d LatticeDomain, sites: S, boundary: B, x: usize) -> Result<Self, ExplorationError> {
        if !domain.is_lattice_jordan() {
            return Err(ExplorationError::NotJordan);
        }
        let n = domain.boundary_adjacent().len();
        if x >= n || boundary((x + n - 1) % n) != Color::Yellow || boundary(x) != Color::Blue {
            return Err(ExplorationError::BadSplitPoints(x, x));
        }
        let edge = domain.entry_edge(x);
        debug_assert!(domain.contains(edge.wedge()));
        Ok(Self { domain, sites, boundary, edge, steps: 0, done: false })
    }

    #[inline]
    fn color(&self, h: HexCoord) -> Color {
        if self.domain.contains(h) {
            self.sites.site_color(h)
        } else {
            let pos = self.domain.boundary_position(h).expect("walker stays next to the domain");
            (self.boundary)(pos)
        }
    }
}

impl<S: SiteColors, B: Fn(usize) -> Color> Iterator for Exploration<'_, S, B> {
    type Item = DirEdge;

    fn next(&mut self) -> Option<DirEdge> {
        if self.done {
            return None;
        }
        if self.steps > 0 {
            let y = self.color(self.edge.wedge()).is_yellow();
            self.edge = self.edge.advance(y);
            if !self.domain.contains(self.edge.left) && !self.domain.contains(self.edge.right()) {
                self.done = true;
            }
        }
        self.steps += 1;
        Some(self.edge)
    }
}

/// Chordal exploration from boundary position `x` to `y`. Uses the coloring's
/// boundary colors when attached, otherwise `[x, y)` Blue and `[y, x)` Yellow.
pub fn explore_chordal(c: &Coloring<'_>, x: usize, y: usize) -> Result<LatticePath, ExplorationError> {
    let d = c.domain();
    check_split(d, x, y)?;
    let pretend = match c.pretend() {
        Some(p) => p.to_vec(),
        None => default_pretend(d.boundary_adjacent().len(), x, y),
    };
    let edges: Vec<DirEdge> = Exploration::new(d, c, |i| pretend[i], x)?.collect();
    Ok(LatticePath::new(edges))
}

/// Hexagons of the domain incident to the path.
pub fn fatten(path: &LatticePath, d: &LatticeDomain) -> BTreeSet<HexCoord> {
    path.edges
        .iter()
        .flat_map(|e| [e.left, e.right()])
        .filter(|&h| d.contains(h))
        .collect()
}

/// Explored hexagons at time `t` plus those cut off from the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeHull {
    pub explored: BTreeSet<HexCoord>,
    pub disconnected: BTreeSet<HexCoord>,
    pub time: usize,
}

impl LatticeHull {
    pub fn hexes(&self) -> BTreeSet<HexCoord> {
        self.explored.union(&self.disconnected).copied().collect()
    }
}

/// Domain hexagons reachable from `seeds` without entering `blocked`.
fn flood(d: &LatticeDomain, seeds: impl IntoIterator<Item = HexCoord>, blocked: &BTreeSet<HexCoord>) -> HashSet<HexCoord> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    for s in seeds {
        if d.contains(s) && !blocked.contains(&s) && seen.insert(s) {
            queue.push_back(s);
        }
    }
    while let Some(h) = queue.pop_front() {
        for nb in h.neighbors() {
            if d.contains(nb) && !blocked.contains(&nb) && seen.insert(nb) {
                queue.push_back(nb);
            }
        }
    }
    seen
}

/// The lattice hull after `t` steps, relative to the target point at
/// boundary position `b`. Hexagons count as connected to the target when a
/// chain of domain hexagons reaches the hexagon at the target corner without
/// crossing an edge the prefix has walked along.
pub fn fill_hull(c: &Coloring<'_>, path: &LatticePath, t: usize, b: usize) -> LatticeHull {
    let d = c.domain();
    let t = t.min(path.len());
    let prefix = &path.edges[..t];
    let explored = fatten(&LatticePath::new(prefix.to_vec()), d);
    let walls: HashSet<DirEdge> = prefix.iter().flat_map(|&e| [e, e.reversed()]).collect();
    let seed = d.entry_edge(b % d.boundary_adjacent().len()).wedge();
    let mut reach = HashSet::from([seed]);
    let mut queue = VecDeque::from([seed]);
    while let Some(h) = queue.pop_front() {
        for (dir, nb) in h.neighbors().into_iter().enumerate() {
            if d.contains(nb) && !walls.contains(&DirEdge::new(h, dir)) && reach.insert(nb) {
                queue.push_back(nb);
            }
        }
    }
    let disconnected = d
        .hexes()
        .iter()
        .copied()
        .filter(|h| !explored.contains(h) && !reach.contains(h))
        .collect();
    LatticeHull { explored, disconnected, time: t }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentType {
    /// Touches the fattened path and the arc from `y` to `x`.
    MixedArc = 1,
    /// Touches the fattened path and the arc from `x` to `y`.
    BlueArc = 2,
    /// Touches only Yellow hexagons of the fattened path.
    YellowPocket = 3,
    /// Touches only Blue hexagons of the fattened path.
    BluePocket = 4,
}

#[derive(Debug, Clone)]
pub struct Component {
    pub domain: LatticeDomain,
    pub kind: ComponentType,
    /// For mixed components: positions in the component's boundary loop where
    /// its boundary turns from Yellow to Blue and from Blue back to Yellow,
    /// counting the arc from `y` to `x` as Blue.
    pub color_change: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct SubdomainReport {
    pub components: Vec<Component>,
}

/// Connected components of the domain minus `removed`, each sorted, in order
/// of their smallest hexagon.
pub fn components_without(d: &LatticeDomain, removed: &BTreeSet<HexCoord>) -> Vec<Vec<HexCoord>> {
    let mut seen: HashSet<HexCoord> = HashSet::new();
    let mut out = Vec::new();
    for &h in d.hexes() {
        if removed.contains(&h) || seen.contains(&h) {
            continue;
        }
        let comp = flood(d, [h], removed);
        seen.extend(comp.iter().copied());
        let mut v: Vec<HexCoord> = comp.into_iter().collect();
        v.sort_unstable();
        out.push(v);
    }
    out
}

/// Colors a component sees along its outer boundary; the Yellow run that is
/// longest (first on ties) is taken as the Yellow side, and its two ends are
/// the color-change positions.
fn extremal_change_points(group_colors: &[Color]) -> Option<(usize, usize)> {
    let n = group_colors.len();
    let blue = group_colors.iter().position(|&c| c == Color::Blue)?;
    group_colors.iter().position(|&c| c == Color::Yellow)?;
    let mut best: Option<(usize, usize)> = None; // (length, start)
    let mut k = 0;
    while k < n {
        let i = (blue + k) % n;
        if group_colors[i] == Color::Yellow {
            let start = i;
            let mut len = 0;
            while group_colors[(start + len) % n] == Color::Yellow {
                len += 1;
            }
            if best.is_none_or(|(l, _)| len > l) {
                best = Some((len, start));
            }
            k += len;
        } else {
            k += 1;
        }
    }
    let (len, start) = best?;
    // Yellow to Blue at the first group after the run, Blue to Yellow at its start
    Some(((start + len) % n, start))
}

/// Types every component left after removing the fattened path of a
/// completed exploration from `x` to `y`.
pub fn classify_components(c: &Coloring<'_>, path: &LatticePath, x: usize, y: usize) -> Result<SubdomainReport, ExplorationError> {
    let d = c.domain();
    check_split(d, x, y)?;
    let fat = fatten(path, d);
    let n = d.boundary_adjacent().len();
    let in_arc_xy = |pos: usize| (pos + n - x) % n < (y + n - x) % n;
    let mut components = Vec::new();
    for (idx, hexes) in components_without(d, &fat).into_iter().enumerate() {
        let (mut f_yellow, mut f_blue, mut arc_xy, mut arc_yx) = (false, false, false, false);
        for h in &hexes {
            for nb in h.neighbors() {
                if fat.contains(&nb) {
                    match c.color(nb) {
                        Some(Color::Yellow) => f_yellow = true,
                        _ => f_blue = true,
                    }
                } else if let Some(pos) = d.boundary_position(nb) {
                    if in_arc_xy(pos) {
                        arc_xy = true;
                    } else {
                        arc_yx = true;
                    }
                }
            }
        }
        let f_any = f_yellow || f_blue;
        let kind = match (f_any, arc_xy, arc_yx) {
            (true, false, true) => ComponentType::MixedArc,
            (true, true, false) => ComponentType::BlueArc,
            (true, false, false) if !f_blue => ComponentType::YellowPocket,
            (true, false, false) if !f_yellow => ComponentType::BluePocket,
            _ => return Err(ExplorationError::AmbiguousComponent(idx)),
        };
        let domain = LatticeDomain::new(hexes, d.mesh()).expect("component is nonempty");
        let color_change = (kind == ComponentType::MixedArc)
            .then(|| {
                let colors: Vec<Color> = domain
                    .boundary_adjacent()
                    .iter()
                    .map(|h| if fat.contains(h) { c.color(*h).unwrap_or(Color::Blue) } else { Color::Blue })
                    .collect();
                extremal_change_points(&colors)
            })
            .flatten();
        components.push(Component { domain, kind, color_change });
    }
    Ok(SubdomainReport { components })
}

/// A region a path may leave: a set of hexagons (a vertex is inside when one
/// of its three hexagons is) or a closed disc in the plane.
#[derive(Debug, Clone)]
pub enum Region {
    Hexes(HashSet<HexCoord>),
    Disc { center: [f64; 2], radius: f64, mesh: f64 },
}

impl Region {
    pub fn contains_vertex(&self, v: Vertex) -> bool {
        match self {
            Region::Hexes(set) => v.hexes().iter().any(|h| set.contains(h)),
            Region::Disc { center, radius, mesh } => {
                let [px, py] = v.position(*mesh);
                (px - center[0]).hypot(py - center[1]) <= *radius
            }
        }
    }
}

/// Number of steps until the walk first stands on a vertex outside
/// `region`. Step `t` ends at the head of edge `t`, so step 0 is the start
/// vertex on the boundary; the outer end of the final boundary edge is not
/// visited. Returns the number of edges when the walk never leaves.
pub fn first_exit(path: &LatticePath, region: &Region) -> usize {
    let visited = path.len().saturating_sub(1);
    path.edges[..visited]
        .iter()
        .position(|e| !region.contains_vertex(e.head()))
        .unwrap_or(path.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexlattice::{build_domain, shapes};

    fn h(q: i32, r: i32) -> HexCoord {
        HexCoord::new(q, r)
    }

    #[test]
    fn single_yellow_hexagon_hand_trace() {
        let d = build_domain([h(0, 0)], 1.0).unwrap();
        let c = Coloring::uniform(&d, Color::Yellow);
        // ring: W, SW, SE, E, NE, NW; Blue on [0, 3) = W, SW, SE
        let p = explore_chordal(&c, 0, 3).unwrap();
        assert_eq!(p.len(), 5);
        assert!(p.is_simple_chain());
        let inner: Vec<HexCoord> = p.edges[1..4].iter().map(|e| e.right()).collect();
        assert_eq!(inner, vec![h(-1, 0), h(0, -1), h(1, -1)]);
        assert!(p.edges[1..4].iter().all(|e| e.left == h(0, 0)));
        // the path hugs corners 2, 3, 4, 5 of the hexagon
        let vs = p.vertices();
        assert_eq!(&vs[1..5], &[h(0, 0).corner(2), h(0, 0).corner(3), h(0, 0).corner(4), h(0, 0).corner(5)]);
        assert_eq!(fatten(&p, &d), BTreeSet::from([h(0, 0)]));
    }

    #[test]
    fn single_blue_hexagon_goes_the_other_way() {
        let d = build_domain([h(0, 0)], 1.0).unwrap();
        let c = Coloring::uniform(&d, Color::Blue);
        let p = explore_chordal(&c, 0, 3).unwrap();
        assert_eq!(p.len(), 5);
        assert!(p.edges[1..4].iter().all(|e| e.right() == h(0, 0)));
    }

    #[test]
    fn errors() {
        let d = build_domain([h(0, 0)], 1.0).unwrap();
        let c = Coloring::uniform(&d, Color::Yellow);
        assert_eq!(explore_chordal(&c, 2, 2).unwrap_err(), ExplorationError::BadSplitPoints(2, 2));
        assert_eq!(explore_chordal(&c, 0, 9).unwrap_err(), ExplorationError::BadSplitPoints(0, 9));
        let ring = build_domain(h(0, 0).neighbors(), 1.0).unwrap();
        let cr = Coloring::uniform(&ring, Color::Yellow);
        assert_eq!(explore_chordal(&cr, 0, 3).unwrap_err(), ExplorationError::NotJordan);
    }

    #[test]
    fn fatten_empty_path() {
        let d = build_domain([h(0, 0)], 1.0).unwrap();
        assert!(fatten(&LatticePath::default(), &d).is_empty());
    }

    #[test]
    fn first_exit_hand_trace() {
        let d = build_domain([h(0, 0)], 1.0).unwrap();
        let c = Coloring::uniform(&d, Color::Yellow);
        let p = explore_chordal(&c, 0, 3).unwrap();
        let all = Region::Hexes(d.hexes().iter().copied().collect());
        assert_eq!(first_exit(&p, &all), p.len());
        // steps 0 and 1 stand on corners 2 and 3 of the origin, both touching
        // W; corner 4 does not
        let start_ring = Region::Hexes(HashSet::from([h(-1, 1), h(-1, 0)]));
        assert_eq!(first_exit(&p, &start_ring), 2);
    }

    #[test]
    fn hull_at_time_zero_is_empty() {
        let d = build_domain(shapes::rhombus(4, 4), 1.0).unwrap();
        let c = crate::percolation::sample_coloring(&d, 0.5, 1);
        let p = explore_chordal(&c, 0, 8).unwrap();
        let hull = fill_hull(&c, &p, 0, 8);
        assert!(hull.hexes().is_empty());
    }

    #[test]
    fn change_points() {
        use Color::{Blue as B, Yellow as Y};
        assert_eq!(extremal_change_points(&[Y, Y, B, B, B]), Some((2, 0)));
        assert_eq!(extremal_change_points(&[B, Y, B, Y, Y, B]), Some((5, 3)));
        assert_eq!(extremal_change_points(&[B, B]), None);
    }
}
