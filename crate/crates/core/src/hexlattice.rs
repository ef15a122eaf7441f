//! Triangular-lattice sites drawn as pointy-top hexagons.
//!
//! Sites use axial coordinates `(q, r)`. The embedding of a site at mesh `δ`
//! is `δ·(√3·(q + r/2), 1.5·r)`, so neighboring centers sit `√3·δ` apart and
//! every hexagon has circumradius `δ`.
//!
//! Interfaces live on the edges of the hexagonal tiling. An edge is always
//! handled as a [`DirEdge`]: the hexagon on its left plus the direction of
//! the hexagon on its right. Vertices of the tiling are named by the unique
//! hexagon that has them as its top or bottom corner (see [`Vertex`]).

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod shapes;

/// Axial offsets of the six neighbors, counterclockwise starting from east:
/// E, NE, NW, W, SW, SE.
pub const DIRECTIONS: [(i32, i32); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("a lattice domain needs at least one hexagon")]
    EmptyDomain,
    #[error("domain is not lattice-Jordan")]
    NotJordan,
    #[error("split positions {0} and {1} coincide")]
    CoincidentSplitPoints(usize, usize),
    #[error("boundary position {0} out of range for a loop of length {1}")]
    PositionOutOfRange(usize, usize),
    #[error("mesh must be positive and finite, got {0}")]
    BadMesh(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HexCoord {
    pub q: i32,
    pub r: i32,
}

impl HexCoord {
    pub const fn new(q: i32, r: i32) -> Self {
        Self { q, r }
    }

    #[inline]
    pub fn neighbor(self, dir: usize) -> HexCoord {
        let (dq, dr) = DIRECTIONS[dir % 6];
        HexCoord::new(self.q + dq, self.r + dr)
    }

    /// The six neighbors in [`DIRECTIONS`] order.
    pub fn neighbors(self) -> [HexCoord; 6] {
        std::array::from_fn(|d| self.neighbor(d))
    }

    /// Direction index `d` with `self.neighbor(d) == other`, if adjacent.
    pub fn direction_to(self, other: HexCoord) -> Option<usize> {
        let delta = (other.q - self.q, other.r - self.r);
        DIRECTIONS.iter().position(|&d| d == delta)
    }

    pub fn is_adjacent(self, other: HexCoord) -> bool {
        self.direction_to(other).is_some()
    }

    /// Center in the plane at the given mesh.
    pub fn center(self, mesh: f64) -> [f64; 2] {
        [
            mesh * SQRT3 * (self.q as f64 + 0.5 * self.r as f64),
            mesh * 1.5 * self.r as f64,
        ]
    }

    /// Corner `k` (at angle `30° + 60°·k`) as a tiling vertex.
    pub fn corner(self, k: usize) -> Vertex {
        let HexCoord { q, r } = self;
        match k % 6 {
            0 => Vertex::down(q, r + 1),
            1 => Vertex::up(q, r),
            2 => Vertex::down(q - 1, r + 1),
            3 => Vertex::up(q, r - 1),
            4 => Vertex::down(q, r),
            _ => Vertex::up(q + 1, r - 1),
        }
    }

    /// Hexagonal (cube) distance.
    pub fn distance(self, other: HexCoord) -> i32 {
        let dq = other.q - self.q;
        let dr = other.r - self.r;
        (dq.abs() + dr.abs() + (dq + dr).abs()) / 2
    }
}

impl fmt::Display for HexCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.q, self.r)
    }
}

/// Which corner of the naming hexagon a vertex is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CornerKind {
    Down,
    Up,
}

/// A vertex of the hexagonal tiling, i.e. a point where three hexagons meet.
///
/// `Up(q, r)` is the top corner of hexagon `(q, r)`; `Down(q, r)` its bottom
/// corner. Every vertex has exactly one such name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub q: i32,
    pub r: i32,
    pub kind: CornerKind,
}

impl Vertex {
    pub const fn up(q: i32, r: i32) -> Self {
        Self { q, r, kind: CornerKind::Up }
    }

    pub const fn down(q: i32, r: i32) -> Self {
        Self { q, r, kind: CornerKind::Down }
    }

    /// The three hexagons meeting at this vertex.
    pub fn hexes(self) -> [HexCoord; 3] {
        let Vertex { q, r, kind } = self;
        match kind {
            CornerKind::Up => [HexCoord::new(q, r), HexCoord::new(q - 1, r + 1), HexCoord::new(q, r + 1)],
            CornerKind::Down => [HexCoord::new(q, r), HexCoord::new(q, r - 1), HexCoord::new(q + 1, r - 1)],
        }
    }

    pub fn position(self, mesh: f64) -> [f64; 2] {
        let [x, y] = HexCoord::new(self.q, self.r).center(mesh);
        match self.kind {
            CornerKind::Up => [x, y + mesh],
            CornerKind::Down => [x, y - mesh],
        }
    }

    /// Exact position in units of `(√3/2·δ, δ/2)`; used for orientation tests.
    pub fn scaled_position(self) -> (i64, i64) {
        let x = 2 * self.q as i64 + self.r as i64;
        let y = 3 * self.r as i64;
        match self.kind {
            CornerKind::Up => (x, y + 2),
            CornerKind::Down => (x, y - 2),
        }
    }

    /// The three vertices joined to this one by a tiling edge.
    pub fn neighbors(self) -> [Vertex; 3] {
        let Vertex { q, r, kind } = self;
        match kind {
            CornerKind::Up => [Vertex::down(q, r + 1), Vertex::down(q - 1, r + 1), Vertex::down(q - 1, r + 2)],
            CornerKind::Down => [Vertex::up(q, r - 1), Vertex::up(q + 1, r - 1), Vertex::up(q + 1, r - 2)],
        }
    }
}

/// A directed tiling edge, stored as the hexagon on its left together with
/// the direction (index into [`DIRECTIONS`]) of the hexagon on its right.
///
/// Walking along the edge, `left` is on the walker's left. The edge runs from
/// corner `dir - 1` of `left` to corner `dir` of `left`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirEdge {
    pub left: HexCoord,
    pub dir: u8,
}

impl DirEdge {
    pub fn new(left: HexCoord, dir: usize) -> Self {
        Self { left, dir: (dir % 6) as u8 }
    }

    /// The edge separating two adjacent hexagons, oriented with `left` on the left.
    pub fn between(left: HexCoord, right: HexCoord) -> Option<Self> {
        left.direction_to(right).map(|d| DirEdge::new(left, d))
    }

    /// The directed edge from `tail` to `head`, if they are adjacent vertices.
    pub fn from_vertices(tail: Vertex, head: Vertex) -> Option<Self> {
        let ht = tail.hexes();
        let hh = head.hexes();
        let shared: Vec<HexCoord> = ht.iter().copied().filter(|h| hh.contains(h)).collect();
        if shared.len() != 2 {
            return None;
        }
        [(shared[0], shared[1]), (shared[1], shared[0])]
            .into_iter()
            .filter_map(|(l, r)| DirEdge::between(l, r))
            .find(|e| e.tail() == tail && e.head() == head)
    }

    #[inline]
    pub fn right(self) -> HexCoord {
        self.left.neighbor(self.dir as usize)
    }

    /// The hexagon wedged between the two possible continuations at the head.
    #[inline]
    pub fn wedge(self) -> HexCoord {
        self.left.neighbor(self.dir as usize + 1)
    }

    #[inline]
    pub fn head(self) -> Vertex {
        self.left.corner(self.dir as usize)
    }

    #[inline]
    pub fn tail(self) -> Vertex {
        self.left.corner(self.dir as usize + 5)
    }

    pub fn reversed(self) -> Self {
        DirEdge::new(self.right(), self.dir as usize + 3)
    }

    /// Next edge of a walk that keeps the "left" class on its left: when the
    /// wedge hexagon belongs to the left class it becomes the new left
    /// hexagon, otherwise it becomes the new right hexagon.
    #[inline]
    pub fn advance(self, wedge_on_left: bool) -> Self {
        if wedge_on_left {
            DirEdge::new(self.wedge(), self.dir as usize + 5)
        } else {
            DirEdge::new(self.left, self.dir as usize + 1)
        }
    }

    /// Embedded midpoint of the edge.
    pub fn midpoint(self, mesh: f64) -> [f64; 2] {
        let a = self.tail().position(mesh);
        let b = self.head().position(mesh);
        [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
    }
}

/// Dense lookup table from hexagons in a bounding box to slot numbers.
#[derive(Debug, Clone)]
pub struct HexIndex {
    q0: i32,
    r0: i32,
    width: usize,
    height: usize,
    slots: Vec<u32>,
}

pub const NO_SLOT: u32 = u32::MAX;

impl HexIndex {
    /// Builds an index over the bounding box of `hexes` grown by `pad` in
    /// each axial direction; `hexes[i]` gets slot `i`.
    pub fn new(hexes: &[HexCoord], pad: i32) -> Self {
        let (mut qmin, mut qmax, mut rmin, mut rmax) = (i32::MAX, i32::MIN, i32::MAX, i32::MIN);
        for h in hexes {
            qmin = qmin.min(h.q);
            qmax = qmax.max(h.q);
            rmin = rmin.min(h.r);
            rmax = rmax.max(h.r);
        }
        if hexes.is_empty() {
            (qmin, qmax, rmin, rmax) = (0, 0, 0, 0);
        }
        let q0 = qmin - pad;
        let r0 = rmin - pad;
        let width = (qmax - qmin + 1 + 2 * pad) as usize;
        let height = (rmax - rmin + 1 + 2 * pad) as usize;
        let mut slots = vec![NO_SLOT; width * height];
        for (i, h) in hexes.iter().enumerate() {
            let cell = ((h.r - r0) as usize) * width + (h.q - q0) as usize;
            slots[cell] = i as u32;
        }
        Self { q0, r0, width, height, slots }
    }

    #[inline]
    pub fn cell(&self, h: HexCoord) -> Option<usize> {
        let dq = h.q - self.q0;
        let dr = h.r - self.r0;
        if dq < 0 || dr < 0 || dq as usize >= self.width || dr as usize >= self.height {
            return None;
        }
        Some(dr as usize * self.width + dq as usize)
    }

    #[inline]
    pub fn get(&self, h: HexCoord) -> Option<usize> {
        let slot = self.slots[self.cell(h)?];
        (slot != NO_SLOT).then_some(slot as usize)
    }

    pub fn cell_count(&self) -> usize {
        self.slots.len()
    }

    pub fn hex_of_cell(&self, cell: usize) -> HexCoord {
        HexCoord::new(self.q0 + (cell % self.width) as i32, self.r0 + (cell / self.width) as i32)
    }
}

/// Walks the boundary of a hexagon set keeping the set on the left, starting
/// from the boundary edge `start` (left inside, right outside). Returns the
/// closed cycle of directed boundary edges.
pub(crate) fn walk_boundary(start: DirEdge, inside: impl Fn(HexCoord) -> bool) -> Vec<DirEdge> {
    let mut edges = vec![start];
    let mut e = start;
    loop {
        e = e.advance(inside(e.wedge()));
        if e == start {
            return edges;
        }
        edges.push(e);
    }
}

/// The outer boundary cycle of a region split into runs of consecutive
/// edges that share their outside hexagon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryWalk {
    /// Directed boundary edges, inside hexagon on the left, counterclockwise.
    pub edges: Vec<DirEdge>,
    /// `group_start[g]` is the index in `edges` of the first edge of group `g`.
    pub group_start: Vec<usize>,
    /// Outside hexagon of each group.
    pub group_hex: Vec<HexCoord>,
}

impl BoundaryWalk {
    /// Outer boundary of the region containing `anchor`, where `anchor` is the
    /// lexicographically smallest member. Groups are rotated so that the
    /// lexicographically smallest outside hexagon comes first.
    pub(crate) fn outer(anchor: HexCoord, inside: impl Fn(HexCoord) -> bool) -> Self {
        // (q - 1, r) has a smaller q than every member, so it lies in the
        // unbounded part of the complement.
        let raw = walk_boundary(DirEdge::new(anchor, 3), &inside);
        let n = raw.len();
        // rotate so the cycle starts at a group boundary
        let first_break = (0..n)
            .find(|&i| raw[i].right() != raw[(i + n - 1) % n].right())
            .unwrap_or(0);
        let mut edges: Vec<DirEdge> = (0..n).map(|i| raw[(first_break + i) % n]).collect();
        let mut group_start = Vec::new();
        let mut group_hex = Vec::new();
        for (i, e) in edges.iter().enumerate() {
            if i == 0 || e.right() != edges[i - 1].right() {
                group_start.push(i);
                group_hex.push(e.right());
            }
        }
        // canonical start: first occurrence of the smallest outside hexagon
        let g0 = (0..group_hex.len()).min_by_key(|&g| (group_hex[g], g)).unwrap_or(0);
        if g0 != 0 {
            let shift = group_start[g0];
            edges.rotate_left(shift);
            group_hex.rotate_left(g0);
            group_start.rotate_left(g0);
            for s in group_start.iter_mut() {
                *s = (*s + n - shift) % n;
            }
        }
        Self { edges, group_start, group_hex }
    }

    pub fn group_count(&self) -> usize {
        self.group_hex.len()
    }

    /// Edge indices belonging to group `g`.
    pub fn group_edges(&self, g: usize) -> std::ops::Range<usize> {
        let start = self.group_start[g];
        let end = if g + 1 < self.group_start.len() { self.group_start[g + 1] } else { self.edges.len() };
        start..end
    }

    /// The vertex where group `g - 1` hands over to group `g`.
    pub fn transition_vertex(&self, g: usize) -> Vertex {
        self.edges[self.group_start[g]].tail()
    }

    /// True when no outside hexagon occurs in two different groups.
    pub fn groups_distinct(&self) -> bool {
        let set: HashSet<HexCoord> = self.group_hex.iter().copied().collect();
        set.len() == self.group_hex.len()
    }
}

/// A finite set of hexagons at a given mesh together with its connectivity
/// flags and, when lattice-Jordan, its counterclockwise adjacent T-loop.
#[derive(Debug, Clone)]
pub struct LatticeDomain {
    mesh: f64,
    hexes: Vec<HexCoord>,
    index: HexIndex,
    connected: bool,
    simply_connected: bool,
    lattice_jordan: bool,
    walk: BoundaryWalk,
    boundary_index: HexIndex,
}

impl PartialEq for LatticeDomain {
    fn eq(&self, other: &Self) -> bool {
        self.mesh == other.mesh && self.hexes == other.hexes
    }
}

/// JSON form `{mesh, hexes: [[q, r], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainRecord {
    pub mesh: f64,
    pub hexes: Vec<[i32; 2]>,
}

/// Builds a domain from any collection of hexagons (duplicates are ignored).
pub fn build_domain(hexes: impl IntoIterator<Item = HexCoord>, mesh: f64) -> Result<LatticeDomain, LatticeError> {
    LatticeDomain::new(hexes, mesh)
}

impl LatticeDomain {
    pub fn new(hexes: impl IntoIterator<Item = HexCoord>, mesh: f64) -> Result<Self, LatticeError> {
        if !(mesh > 0.0 && mesh.is_finite()) {
            return Err(LatticeError::BadMesh(mesh));
        }
        let mut hexes: Vec<HexCoord> = hexes.into_iter().collect();
        hexes.sort_unstable();
        hexes.dedup();
        if hexes.is_empty() {
            return Err(LatticeError::EmptyDomain);
        }
        let index = HexIndex::new(&hexes, 2);
        let inside = |h: HexCoord| index.get(h).is_some();

        let connected = {
            let mut seen = vec![false; hexes.len()];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            let mut count = 1;
            while let Some(i) = queue.pop_front() {
                for nb in hexes[i].neighbors() {
                    if let Some(j) = index.get(nb) {
                        if !seen[j] {
                            seen[j] = true;
                            count += 1;
                            queue.push_back(j);
                        }
                    }
                }
            }
            count == hexes.len()
        };

        // On the hexagonal tiling the boundary of a hexagon set is a disjoint
        // union of simple cycles: one outer cycle per connected piece plus one
        // per bounded complementary component.
        let boundary_cycles = {
            let mut seen: HashSet<DirEdge> = HashSet::new();
            let mut cycles = 0usize;
            for &h in &hexes {
                for d in 0..6 {
                    let e = DirEdge::new(h, d);
                    if inside(e.right()) || seen.contains(&e) {
                        continue;
                    }
                    cycles += 1;
                    for b in walk_boundary(e, inside) {
                        seen.insert(b);
                    }
                }
            }
            cycles
        };
        let simply_connected = connected && boundary_cycles == 1;

        let walk = BoundaryWalk::outer(hexes[0], inside);
        let lattice_jordan = simply_connected && walk.groups_distinct();
        let boundary_index = HexIndex::new(&walk.group_hex, 1);
        Ok(Self { mesh, hexes, index, connected, simply_connected, lattice_jordan, walk, boundary_index })
    }

    pub fn from_record(rec: &DomainRecord) -> Result<Self, LatticeError> {
        Self::new(rec.hexes.iter().map(|&[q, r]| HexCoord::new(q, r)), rec.mesh)
    }

    pub fn to_record(&self) -> DomainRecord {
        DomainRecord { mesh: self.mesh, hexes: self.hexes.iter().map(|h| [h.q, h.r]).collect() }
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    /// Hexagons in lexicographic `(q, r)` order; this is the canonical order
    /// used for colorings and dumps.
    pub fn hexes(&self) -> &[HexCoord] {
        &self.hexes
    }

    pub fn len(&self) -> usize {
        self.hexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hexes.is_empty()
    }

    #[inline]
    pub fn contains(&self, h: HexCoord) -> bool {
        self.index.get(h).is_some()
    }

    /// Canonical position of `h`, if it belongs to the domain.
    #[inline]
    pub fn slot(&self, h: HexCoord) -> Option<usize> {
        self.index.get(h)
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn is_simply_connected(&self) -> bool {
        self.simply_connected
    }

    pub fn is_lattice_jordan(&self) -> bool {
        self.lattice_jordan
    }

    /// Hexagons adjacent to the domain along its outer boundary, in
    /// counterclockwise order from the lexicographically smallest one. For a
    /// lattice-Jordan domain this is the adjacent T-loop.
    pub fn boundary_adjacent(&self) -> &[HexCoord] {
        &self.walk.group_hex
    }

    pub fn boundary_walk(&self) -> &BoundaryWalk {
        &self.walk
    }

    /// Position of an outside hexagon in [`Self::boundary_adjacent`].
    #[inline]
    pub fn boundary_position(&self, h: HexCoord) -> Option<usize> {
        self.boundary_index.get(h)
    }

    /// Edge that starts a walk from boundary position `x`: it separates
    /// `boundary[x - 1]` (left) from `boundary[x]` (right) and heads into the
    /// domain.
    pub fn entry_edge(&self, x: usize) -> DirEdge {
        let n = self.walk.group_count();
        let prev = self.walk.group_hex[(x + n - 1) % n];
        let cur = self.walk.group_hex[x % n];
        DirEdge::between(prev, cur).expect("consecutive boundary hexagons are adjacent")
    }

    /// Splits the adjacent T-loop at positions `x` and `y` into the
    /// counterclockwise arcs `[x, y)` and `[y, x)`.
    pub fn boundary_arcs(&self, x: usize, y: usize) -> Result<(Vec<HexCoord>, Vec<HexCoord>), LatticeError> {
        if !self.lattice_jordan {
            return Err(LatticeError::NotJordan);
        }
        let n = self.walk.group_count();
        for p in [x, y] {
            if p >= n {
                return Err(LatticeError::PositionOutOfRange(p, n));
            }
        }
        if x == y {
            return Err(LatticeError::CoincidentSplitPoints(x, y));
        }
        let ring = &self.walk.group_hex;
        let arc = |from: usize, to: usize| -> Vec<HexCoord> {
            let len = (to + n - from) % n;
            (0..len).map(|k| ring[(from + k) % n]).collect()
        };
        Ok((arc(x, y), arc(y, x)))
    }

    /// Bounding box `[xmin, ymin, xmax, ymax]` of the hexagon centers.
    pub fn center_bounds(&self) -> [f64; 4] {
        let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for h in &self.hexes {
            let [x, y] = h.center(self.mesh);
            b[0] = b[0].min(x);
            b[1] = b[1].min(y);
            b[2] = b[2].max(x);
            b[3] = b[3].max(y);
        }
        b
    }
}

/// Boundary arcs as a free function, mirroring [`LatticeDomain::boundary_arcs`].
pub fn boundary_arcs(d: &LatticeDomain, x: usize, y: usize) -> Result<(Vec<HexCoord>, Vec<HexCoord>), LatticeError> {
    d.boundary_arcs(x, y)
}
