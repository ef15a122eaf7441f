//! Site colorings of lattice domains, cluster labels and crossing queries.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::hexlattice::{HexCoord, LatticeDomain};
use crate::rng::{SITE_GENERATOR, SiteHash};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Blue,
    Yellow,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Blue => Color::Yellow,
            Color::Yellow => Color::Blue,
        }
    }

    pub fn is_yellow(self) -> bool {
        self == Color::Yellow
    }
}

/// Anything that can report the color of a site of the domain.
pub trait SiteColors {
    fn site_color(&self, h: HexCoord) -> Color;
}

impl<T: SiteColors + ?Sized> SiteColors for &T {
    #[inline]
    fn site_color(&self, h: HexCoord) -> Color {
        (**self).site_color(h)
    }
}

/// Colors drawn straight from the site hash, with no storage. Blue has
/// probability `p`.
#[derive(Debug, Clone, Copy)]
pub struct HashedColors {
    hash: SiteHash,
    p: f64,
}

impl HashedColors {
    pub fn new(p: f64, seed: u64) -> Self {
        Self { hash: SiteHash::new(seed), p }
    }
}

impl SiteColors for HashedColors {
    #[inline]
    fn site_color(&self, h: HexCoord) -> Color {
        if self.hash.unit(h) < self.p { Color::Blue } else { Color::Yellow }
    }
}

/// A coloring of every hexagon of a domain, optionally with colors for the
/// adjacent boundary loop.
#[derive(Debug, Clone)]
pub struct Coloring<'a> {
    domain: &'a LatticeDomain,
    colors: Vec<Color>,
    pretend: Option<Vec<Color>>,
}

impl PartialEq for Coloring<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.colors == other.colors && self.pretend == other.pretend
    }
}

/// Dump of a coloring: one character per hexagon in canonical order
/// (`1` Blue, `0` Yellow).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColoringDump {
    pub generator: String,
    pub seed: Option<u64>,
    pub p: Option<f64>,
    pub hexes: usize,
    pub bits: String,
}

/// Colors every hexagon of `d` independently, Blue with probability `p`.
pub fn sample_coloring(d: &LatticeDomain, p: f64, seed: u64) -> Coloring<'_> {
    assert!((0.0..=1.0).contains(&p), "p = {p} is not a probability");
    let field = HashedColors::new(p, seed);
    Coloring::from_fn(d, |h| field.site_color(h))
}

impl<'a> Coloring<'a> {
    pub fn from_fn(domain: &'a LatticeDomain, mut f: impl FnMut(HexCoord) -> Color) -> Self {
        let colors = domain.hexes().iter().map(|&h| f(h)).collect();
        Self { domain, colors, pretend: None }
    }

    pub fn uniform(domain: &'a LatticeDomain, color: Color) -> Self {
        Self { domain, colors: vec![color; domain.len()], pretend: None }
    }

    /// Colors in canonical hexagon order.
    pub fn from_colors(domain: &'a LatticeDomain, colors: Vec<Color>) -> Self {
        assert_eq!(colors.len(), domain.len());
        Self { domain, colors, pretend: None }
    }

    /// Bit `i` of `mask` set means hexagon `i` (canonical order) is Blue.
    pub fn from_mask(domain: &'a LatticeDomain, mask: u64) -> Self {
        let colors = (0..domain.len())
            .map(|i| if mask >> i & 1 == 1 { Color::Blue } else { Color::Yellow })
            .collect();
        Self { domain, colors, pretend: None }
    }

    /// Attaches colors for the boundary loop, indexed by boundary position.
    pub fn with_pretend(mut self, pretend: Vec<Color>) -> Self {
        assert_eq!(pretend.len(), self.domain.boundary_adjacent().len());
        self.pretend = Some(pretend);
        self
    }

    /// Monochromatic boundary conditions.
    pub fn with_boundary(self, color: Color) -> Self {
        let n = self.domain.boundary_adjacent().len();
        self.with_pretend(vec![color; n])
    }

    pub fn domain(&self) -> &'a LatticeDomain {
        self.domain
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn pretend(&self) -> Option<&[Color]> {
        self.pretend.as_deref()
    }

    /// Color of a hexagon of the domain.
    #[inline]
    pub fn color(&self, h: HexCoord) -> Option<Color> {
        self.domain.slot(h).map(|i| self.colors[i])
    }

    /// Domain color, else boundary color if one was attached.
    pub fn color_or_pretend(&self, h: HexCoord) -> Option<Color> {
        self.color(h).or_else(|| {
            let pos = self.domain.boundary_position(h)?;
            self.pretend.as_ref().map(|p| p[pos])
        })
    }

    /// Blue and Yellow exchanged everywhere, boundary included.
    pub fn swapped(&self) -> Self {
        Self {
            domain: self.domain,
            colors: self.colors.iter().map(|c| c.opposite()).collect(),
            pretend: self.pretend.as_ref().map(|p| p.iter().map(|c| c.opposite()).collect()),
        }
    }

    pub fn blue_count(&self) -> usize {
        self.colors.iter().filter(|&&c| c == Color::Blue).count()
    }

    pub fn dump(&self, seed: Option<u64>, p: Option<f64>) -> ColoringDump {
        ColoringDump {
            generator: SITE_GENERATOR.to_string(),
            seed,
            p,
            hexes: self.colors.len(),
            bits: self.colors.iter().map(|&c| if c == Color::Blue { '1' } else { '0' }).collect(),
        }
    }

    /// CSV rows `q,r,blue` in canonical order.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["q", "r", "blue"])?;
        for (h, c) in self.domain.hexes().iter().zip(&self.colors) {
            out.serialize((h.q, h.r, u8::from(*c == Color::Blue)))?;
        }
        out.flush()?;
        Ok(())
    }
}

impl SiteColors for Coloring<'_> {
    #[inline]
    fn site_color(&self, h: HexCoord) -> Color {
        self.color(h).expect("site outside the colored domain")
    }
}

/// Cluster id per hexagon (canonical order) and the color of each cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabels {
    pub label: Vec<usize>,
    pub cluster_color: Vec<Color>,
}

impl ClusterLabels {
    pub fn count(&self) -> usize {
        self.cluster_color.len()
    }
}

/// Labels maximal monochromatic connected sets by breadth-first search.
pub fn color_clusters(c: &Coloring<'_>) -> ClusterLabels {
    let d = c.domain();
    let hexes = d.hexes();
    let mut label = vec![usize::MAX; hexes.len()];
    let mut cluster_color = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..hexes.len() {
        if label[start] != usize::MAX {
            continue;
        }
        let id = cluster_color.len();
        let col = c.colors()[start];
        cluster_color.push(col);
        label[start] = id;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            for nb in hexes[i].neighbors() {
                if let Some(j) = d.slot(nb) {
                    if label[j] == usize::MAX && c.colors()[j] == col {
                        label[j] = id;
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    ClusterLabels { label, cluster_color }
}

/// Domain hexagons touching an arc: arc members inside the domain stand for
/// themselves, outside members contribute their domain neighbors.
fn arc_contacts(d: &LatticeDomain, arc: &[HexCoord]) -> Vec<bool> {
    let mut mark = vec![false; d.len()];
    for &a in arc {
        if let Some(i) = d.slot(a) {
            mark[i] = true;
        } else {
            for nb in a.neighbors() {
                if let Some(j) = d.slot(nb) {
                    mark[j] = true;
                }
            }
        }
    }
    mark
}

/// Is there a path of `color` hexagons inside the domain from a hexagon
/// touching `from_arc` to one touching `to_arc`?
pub fn has_crossing(c: &Coloring<'_>, from_arc: &[HexCoord], to_arc: &[HexCoord], color: Color) -> bool {
    let d = c.domain();
    let target = arc_contacts(d, to_arc);
    let mut seen = arc_contacts(d, from_arc);
    let mut queue: VecDeque<usize> = VecDeque::new();
    for i in 0..d.len() {
        if seen[i] {
            if c.colors()[i] == color {
                queue.push_back(i);
            } else {
                seen[i] = false;
            }
        }
    }
    while let Some(i) = queue.pop_front() {
        if target[i] {
            return true;
        }
        for nb in d.hexes()[i].neighbors() {
            if let Some(j) = d.slot(nb) {
                if !seen[j] && c.colors()[j] == color {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    false
}

/// The four sides of an `a × b` rhombus `0 ≤ q < a, 0 ≤ r < b` as hexagon
/// lists: `(left q = 0, right q = a-1, bottom r = 0, top r = b-1)`.
pub fn rhombus_sides(a: i32, b: i32) -> [Vec<HexCoord>; 4] {
    [
        (0..b).map(|r| HexCoord::new(0, r)).collect(),
        (0..b).map(|r| HexCoord::new(a - 1, r)).collect(),
        (0..a).map(|q| HexCoord::new(q, 0)).collect(),
        (0..a).map(|q| HexCoord::new(q, b - 1)).collect(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexlattice::{build_domain, shapes};

    #[test]
    fn degenerate_densities() {
        let d = build_domain(shapes::rhombus(6, 6), 1.0).unwrap();
        assert!(sample_coloring(&d, 1.0, 3).colors().iter().all(|&c| c == Color::Blue));
        assert!(sample_coloring(&d, 0.0, 3).colors().iter().all(|&c| c == Color::Yellow));
    }

    #[test]
    fn critical_blue_fraction_within_binomial_band() {
        let d = build_domain(shapes::rhombus(100, 100), 1.0).unwrap();
        let blue = sample_coloring(&d, 0.5, 2024).blue_count() as f64;
        // 3 sigma for n = 10^4 is 150
        assert!((blue - 5000.0).abs() <= 150.0, "{blue}");
    }

    #[test]
    fn coloring_is_deterministic_and_stable_under_enlargement() {
        let small = build_domain(shapes::rhombus(5, 5), 1.0).unwrap();
        let big = build_domain(shapes::rhombus(9, 9), 1.0).unwrap();
        let a = sample_coloring(&small, 0.5, 11);
        assert_eq!(a, sample_coloring(&small, 0.5, 11));
        let b = sample_coloring(&big, 0.5, 11);
        for &h in small.hexes() {
            assert_eq!(a.color(h), b.color(h));
        }
    }

    #[test]
    fn cluster_counts_trivial() {
        let d = build_domain(shapes::hex_ball(2), 1.0).unwrap();
        assert_eq!(color_clusters(&Coloring::uniform(&d, Color::Blue)).count(), 1);
        let one = Coloring::from_fn(&d, |h| if h == HexCoord::new(0, 0) { Color::Yellow } else { Color::Blue });
        assert_eq!(color_clusters(&one).count(), 2);
    }

    #[test]
    fn dumps() {
        let d = build_domain(shapes::rhombus(2, 2), 1.0).unwrap();
        let c = Coloring::from_mask(&d, 0b0110);
        assert_eq!(c.dump(None, None).bits, "0110");
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "q,r,blue\n0,0,0\n0,1,1\n1,0,1\n1,1,0\n");
    }

    #[test]
    fn crossing_trivial_cases() {
        let d = build_domain(shapes::rhombus(4, 4), 1.0).unwrap();
        let ring = d.boundary_adjacent();
        let (a, b) = (&ring[..2], &ring[6..8]);
        assert!(has_crossing(&Coloring::uniform(&d, Color::Blue), a, b, Color::Blue));
        assert!(!has_crossing(&Coloring::uniform(&d, Color::Yellow), a, b, Color::Blue));
    }
}
