//! Hexagon sets for the standard test domains.

use std::collections::BTreeSet;

use super::{HexCoord, LatticeDomain};
use crate::rng::splitmix64;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// `a × b` rhombus: `0 ≤ q < a`, `0 ≤ r < b`.
pub fn rhombus(a: i32, b: i32) -> Vec<HexCoord> {
    (0..a).flat_map(|q| (0..b).map(move |r| HexCoord::new(q, r))).collect()
}

/// Hexagons whose centers lie within `radius` (in units of the mesh) of the
/// origin's center.
pub fn disc(radius: f64) -> Vec<HexCoord> {
    let rmax = (radius / 1.5).ceil() as i32 + 1;
    let mut out = Vec::new();
    for r in -rmax..=rmax {
        let qc = -(r as f64) / 2.0;
        let span = (radius / SQRT3).ceil() as i32 + 2;
        for q in (qc as i32 - span)..=(qc as i32 + span) {
            let [x, y] = HexCoord::new(q, r).center(1.0);
            if x * x + y * y <= radius * radius {
                out.push(HexCoord::new(q, r));
            }
        }
    }
    out
}

/// Hexagons at cube distance at most `k` from the origin.
pub fn hex_ball(k: i32) -> Vec<HexCoord> {
    let mut out = Vec::new();
    for q in -k..=k {
        for r in -k..=k {
            let h = HexCoord::new(q, r);
            if h.distance(HexCoord::new(0, 0)) <= k {
                out.push(h);
            }
        }
    }
    out
}

/// Rows `0 ≤ r < height` of hexagons whose center abscissa lies in
/// `[-width/2, width/2]` (in mesh units). Row 0 is the bottom edge and the
/// origin hexagon sits in its middle.
pub fn strip(width: f64, height: i32) -> Vec<HexCoord> {
    let half = width / 2.0;
    let mut out = Vec::new();
    for r in 0..height {
        let lo = (-half / SQRT3 - r as f64 / 2.0).ceil() as i32;
        let hi = (half / SQRT3 - r as f64 / 2.0).floor() as i32;
        out.extend((lo..=hi).map(|q| HexCoord::new(q, r)));
    }
    out
}

/// A connected blob of `n` hexagons grown from the origin by repeatedly
/// adding a random boundary neighbor.
pub fn random_blob(n: usize, seed: u64) -> Vec<HexCoord> {
    let mut set = BTreeSet::from([HexCoord::new(0, 0)]);
    let mut state = seed;
    while set.len() < n {
        let frontier: Vec<HexCoord> = set
            .iter()
            .flat_map(|h| h.neighbors())
            .filter(|h| !set.contains(h))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        state = splitmix64(state);
        set.insert(frontier[(state % frontier.len() as u64) as usize]);
    }
    set.into_iter().collect()
}

/// The small lattice-Jordan domains used for exhaustive checks: every
/// rhombus `a × b` with `a ≤ b` and `a·b ≤ max_hexes`, the radius-1
/// hexagonal ball when it fits, and lattice-Jordan random blobs of every
/// size from 3 to `max_hexes` (two seeds each). Duplicate sets are dropped.
pub fn small_domain_family(max_hexes: usize) -> Vec<LatticeDomain> {
    let mut seen: BTreeSet<Vec<HexCoord>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |hexes: Vec<HexCoord>, out: &mut Vec<LatticeDomain>| -> bool {
        let d = LatticeDomain::new(hexes, 1.0).expect("nonempty");
        let fresh = d.is_lattice_jordan() && seen.insert(d.hexes().to_vec());
        if fresh {
            out.push(d);
        }
        fresh
    };
    for a in 1..=max_hexes as i32 {
        for b in a..=max_hexes as i32 {
            if (a * b) as usize <= max_hexes {
                push(rhombus(a, b), &mut out);
            }
        }
    }
    if max_hexes >= 7 {
        push(hex_ball(1), &mut out);
    }
    for n in 3..=max_hexes {
        let mut found = 0;
        let mut seed = n as u64 * 1000;
        while found < 2 && seed < n as u64 * 1000 + 200 {
            if push(random_blob(n, seed), &mut out) {
                found += 1;
            }
            seed += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_shapes_are_lattice_jordan() {
        for hexes in [rhombus(5, 3), disc(10.0), hex_ball(3), strip(40.0, 12)] {
            let d = LatticeDomain::new(hexes, 1.0).unwrap();
            assert!(d.is_lattice_jordan(), "{} hexes", d.len());
        }
    }

    #[test]
    fn disc_size_tracks_area() {
        let n = disc(30.0).len() as f64;
        // one hexagon per area 3√3/2
        let expected = std::f64::consts::PI * 900.0 / (1.5 * SQRT3);
        assert!((n / expected - 1.0).abs() < 0.05, "{n} vs {expected}");
    }

    #[test]
    fn strip_is_centered() {
        let s = strip(20.0, 3);
        assert!(s.contains(&HexCoord::new(0, 0)));
        for h in &s {
            assert!(h.center(1.0)[0].abs() <= 10.0 + 1e-9);
        }
    }

    #[test]
    fn family_sizes() {
        let fam = small_domain_family(12);
        assert!(fam.len() >= 15);
        assert!(fam.iter().all(|d| d.len() <= 12 && d.is_lattice_jordan()));
        assert!(fam.iter().any(|d| d.len() == 1));
        assert!(fam.iter().any(|d| d.len() == 12));
    }
}
