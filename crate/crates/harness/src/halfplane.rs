//! The half-plane approximation: a wide strip of hexagons whose bottom row
//! is split at the origin into Yellow (left) and Blue (right) boundary.

use num_complex::Complex64;
use percolab_core::exploration::{Exploration, default_pretend};
use percolab_core::hexlattice::{HexCoord, LatticeDomain, Vertex, shapes};
use percolab_core::percolation::{Color, SiteColors};

use crate::HarnessError;

/// Height of the bottom boundary's lowest vertices above the real axis.
pub const AXIS_OFFSET: f64 = 0.25;

pub struct Strip {
    pub domain: LatticeDomain,
    pub width: f64,
    pub start: usize,
    pretend: Vec<Color>,
}

impl Strip {
    /// Lattice units throughout: circumradius 1, bottom row centers at `y = 0`.
    pub fn new(width: f64, height: i32) -> Result<Self, HarnessError> {
        let domain = LatticeDomain::new(shapes::strip(width, height), 1.0)?;
        let ring = domain.boundary_adjacent();
        let n = ring.len();
        let start = domain
            .boundary_position(HexCoord::new(1, -1))
            .filter(|&x| ring[(x + n - 1) % n] == HexCoord::new(0, -1))
            .ok_or_else(|| HarnessError::Config("strip does not contain the origin hexagon".into()))?;
        let top = (0..n)
            .filter(|&i| ring[i].r == height)
            .min_by(|&a, &b| ring[a].center(1.0)[0].abs().total_cmp(&ring[b].center(1.0)[0].abs()))
            .ok_or_else(|| HarnessError::Config("strip has no top side".into()))?;
        let pretend = default_pretend(n, start, top);
        Ok(Self { domain, width, start, pretend })
    }

    /// Exploration from the origin with Blue boundary to the right.
    pub fn explore<S: SiteColors>(&self, sites: S) -> Exploration<'_, S, impl Fn(usize) -> Color + '_> {
        Exploration::new(&self.domain, sites, move |i| self.pretend[i], self.start).expect("strip is lattice-Jordan")
    }

    /// Upper half-plane coordinates: the start vertex of the exploration
    /// sits at `i·AXIS_OFFSET`.
    pub fn to_half_plane(v: Vertex) -> Complex64 {
        let [x, y] = v.position(1.0);
        Complex64::new(x, y + 1.0 + AXIS_OFFSET)
    }
}

/// Hexagon centers in half-plane coordinates.
pub fn center_in_half_plane(h: HexCoord) -> Complex64 {
    let [x, y] = h.center(1.0);
    Complex64::new(x, y + 1.0 + AXIS_OFFSET)
}

/// Mirror image across the vertical line through the origin vertex.
pub fn mirror(h: HexCoord) -> HexCoord {
    HexCoord::new(-h.q - h.r, h.r)
}

/// Colors of the mirror image, swapped: the exploration of this coloring is
/// the mirror image of the original exploration.
pub struct MirroredSwapped<S>(pub S);

impl<S: SiteColors> SiteColors for MirroredSwapped<S> {
    #[inline]
    fn site_color(&self, h: HexCoord) -> Color {
        self.0.site_color(mirror(h)).opposite()
    }
}

pub struct Swapped<S>(pub S);

impl<S: SiteColors> SiteColors for Swapped<S> {
    #[inline]
    fn site_color(&self, h: HexCoord) -> Color {
        self.0.site_color(h).opposite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use percolab_core::percolation::HashedColors;

    #[test]
    fn exploration_starts_at_the_origin() {
        let s = Strip::new(40.0, 10).unwrap();
        let first = s.explore(HashedColors::new(0.5, 1)).next().unwrap();
        let head = Strip::to_half_plane(first.head());
        assert!((head - Complex64::new(0.0, AXIS_OFFSET)).norm() < 1e-12);
        assert_eq!(mirror(mirror(HexCoord::new(3, -2))), HexCoord::new(3, -2));
        let [x, y] = mirror(HexCoord::new(3, 2)).center(1.0);
        let [x0, y0] = HexCoord::new(3, 2).center(1.0);
        assert!((x + x0).abs() < 1e-12 && y == y0);
    }
}
