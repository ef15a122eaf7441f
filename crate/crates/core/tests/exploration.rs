use std::collections::{BTreeSet, HashMap, HashSet};

use percolab_core::exploration::{
    ComponentType, LatticePath, Region, classify_components, components_without, default_pretend, explore_chordal, fatten,
    fill_hull, first_exit, walk_through,
};
use percolab_core::hexlattice::{DirEdge, HexCoord, LatticeDomain, build_domain, shapes};
use percolab_core::loop_ensemble::touches_first;
use percolab_core::percolation::{Color, Coloring, has_crossing, sample_coloring};
use proptest::prelude::*;

fn h(q: i32, r: i32) -> HexCoord {
    HexCoord::new(q, r)
}

fn arc(d: &LatticeDomain, from: usize, to: usize) -> Vec<HexCoord> {
    d.boundary_arcs(from, to).unwrap().0
}

/// Left hexagon Yellow and right hexagon Blue at every edge, boundary
/// hexagons taking the default pretend colors.
fn sides_are_correct(c: &Coloring<'_>, p: &LatticePath, x: usize, y: usize) -> bool {
    let d = c.domain();
    let pretend = default_pretend(d.boundary_adjacent().len(), x, y);
    let color = |x: HexCoord| c.color(x).or_else(|| d.boundary_position(x).map(|i| pretend[i]));
    p.edges.iter().all(|e| color(e.left) == Some(Color::Yellow) && color(e.right()) == Some(Color::Blue))
}

/// Exploration from `z[0]` with `[z0, z2)` Blue decides the Blue crossing
/// from `[z0, z1)` to `[z2, z3)`: the path reaches `[z2, z3)` before `[z1, z2)`.
fn crossing_agrees(c: &Coloring<'_>, z: [usize; 4]) -> bool {
    let d = c.domain();
    let p = explore_chordal(c, z[0], z[2]).unwrap();
    assert!(p.is_simple_chain());
    assert!(sides_are_correct(c, &p, z[0], z[2]));
    let by_path = touches_first(&p, &arc(d, z[2], z[3]), &arc(d, z[1], z[2]));
    by_path == has_crossing(c, &arc(d, z[0], z[1]), &arc(d, z[2], z[3]), Color::Blue)
}

#[test]
fn crossing_equivalence_on_the_nine_hexagon_rhombus() {
    let d = build_domain(shapes::rhombus(3, 3), 1.0).unwrap();
    let n = d.boundary_adjacent().len();
    let mut quads = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for e in c + 1..n {
                    let z = [a, b, c, e];
                    for rot in 0..4 {
                        quads.push([z[rot], z[(rot + 1) % 4], z[(rot + 2) % 4], z[(rot + 3) % 4]]);
                    }
                }
            }
        }
    }
    for mask in 0..(1u64 << 9) {
        let c = Coloring::from_mask(&d, mask);
        for &z in &quads {
            assert!(crossing_agrees(&c, z), "mask {mask:#b}, z {z:?}");
        }
    }
}

#[test]
fn crossing_equivalence_on_small_domains() {
    for d in shapes::small_domain_family(12) {
        let n = d.boundary_adjacent().len();
        let quads = [[0, n / 4, n / 2, 3 * n / 4], [1, 2, n / 2, n - 1], [n - 1, 0, 2, 4]];
        for mask in 0..(1u64 << d.len()) {
            let c = Coloring::from_mask(&d, mask);
            for z in quads {
                assert!(crossing_agrees(&c, z), "{} hexes, mask {mask:#b}, z {z:?}", d.len());
            }
        }
    }
}

#[test]
fn crossing_equivalence_on_random_rhombi() {
    let d = build_domain(shapes::rhombus(50, 50), 1.0).unwrap();
    let ring = d.boundary_adjacent();
    let corner = |x: HexCoord| ring.iter().position(|&y| y == x).unwrap();
    // the four sides between the ring corners below each rhombus corner
    let z = [corner(h(-1, 0)), corner(h(50, -1)), corner(h(50, 49)), corner(h(-1, 50))];
    for seed in 0..10_000 {
        assert!(crossing_agrees(&sample_coloring(&d, 0.5, seed), z), "seed {seed}");
    }
}

#[test]
fn exploration_is_deterministic() {
    let d = build_domain(shapes::disc(15.0), 1.0).unwrap();
    let n = d.boundary_adjacent().len();
    let c = sample_coloring(&d, 0.5, 99);
    let a = explore_chordal(&c, 3, n / 2).unwrap();
    assert_eq!(a.vertices(), explore_chordal(&c.clone(), 3, n / 2).unwrap().vertices());
    let json = serde_json::to_string(&a.record(1.0)).unwrap();
    assert!(json.starts_with("{\"points\":[["));
}

/// Domain rows split at `cut`: rows below Blue, rows from `cut` up Yellow,
/// with the split points on the left and right sides at the same height.
fn stripes(d: &LatticeDomain, cut: i32, width: i32) -> (Coloring<'_>, usize, usize) {
    let c = Coloring::from_fn(d, |x| if x.r < cut { Color::Blue } else { Color::Yellow });
    let ring = d.boundary_adjacent();
    let n = ring.len();
    let find = |pred: &dyn Fn(HexCoord, HexCoord) -> bool| (0..n).find(|&i| pred(ring[(i + n - 1) % n], ring[i])).unwrap();
    let x = find(&|prev, cur| prev.r >= cut && cur.r < cut && cur.q < 0);
    let y = find(&|prev, cur| prev.r < cut && cur.r >= cut && cur.q >= width);
    (c, x, y)
}

#[test]
fn straight_interface_hull_is_the_fattened_prefix() {
    let d = build_domain(shapes::rhombus(8, 6), 1.0).unwrap();
    let (c, x, y) = stripes(&d, 3, 8);
    let p = explore_chordal(&c, x, y).unwrap();
    for e in &p.edges[1..p.len() - 1] {
        assert_eq!((e.left.r, e.right().r), (3, 2));
    }
    // the last two edges run along the right side into the target corner;
    // from there on the walked interface separates the two halves
    for t in 0..p.len() - 2 {
        let hull = fill_hull(&c, &p, t, y);
        assert!(hull.disconnected.is_empty(), "t = {t}");
        assert_eq!(hull.explored, fatten(&LatticePath::new(p.edges[..t].to_vec()), &d));
    }
}

#[test]
fn pocket_around_one_hexagon_joins_the_hull() {
    // Yellow stalk from the left side out to a Yellow ring around (3, 3);
    // the center stays Blue
    let d = build_domain(shapes::rhombus(8, 7), 1.0).unwrap();
    let center = h(3, 3);
    let yellow: HashSet<HexCoord> = center.neighbors().into_iter().chain([h(0, 3), h(1, 3)]).collect();
    let c0 = Coloring::from_fn(&d, |x| if yellow.contains(&x) { Color::Yellow } else { Color::Blue });
    let (_, x, y) = stripes(&d, 3, 8);
    let p = explore_chordal(&c0, x, y).unwrap();
    assert!(sides_are_correct(&c0, &p, x, y));
    assert!(!fatten(&p, &d).contains(&center));
    let enclosed_at = (0..=p.len()).find(|&t| fill_hull(&c0, &p, t, y).disconnected.contains(&center)).unwrap();
    assert!(enclosed_at > 0);
    // once enclosed it stays in the hull and the walk never comes back
    for t in enclosed_at..=p.len() {
        assert!(fill_hull(&c0, &p, t, y).hexes().contains(&center));
    }
    assert!(p.edges[enclosed_at..].iter().all(|e| e.left != center && e.right() != center));
}

#[test]
fn hulls_grow_and_are_never_reentered() {
    let d = build_domain(shapes::rhombus(20, 20), 1.0).unwrap();
    let n = d.boundary_adjacent().len();
    for seed in 0..15 {
        let c = sample_coloring(&d, 0.5, seed);
        let (x, y) = (0, n / 2);
        let p = explore_chordal(&c, x, y).unwrap();
        let mut prev: BTreeSet<HexCoord> = BTreeSet::new();
        for t in 0..=p.len() {
            let hull = fill_hull(&c, &p, t, y);
            let now = hull.hexes();
            assert!(prev.is_subset(&now), "seed {seed}, t {t}");
            for e in &p.edges[t..] {
                assert!(!hull.disconnected.contains(&e.left) && !hull.disconnected.contains(&e.right()));
            }
            prev = now;
        }
    }
}

#[test]
fn two_stripe_coloring_has_one_mixed_and_one_blue_arc_component() {
    let d = build_domain(shapes::rhombus(5, 5), 1.0).unwrap();
    let (c, x, y) = stripes(&d, 2, 5);
    let p = explore_chordal(&c, x, y).unwrap();
    let report = classify_components(&c, &p, x, y).unwrap();
    let mut kinds: Vec<ComponentType> = report.components.iter().map(|k| k.kind).collect();
    kinds.sort_by_key(|k| *k as u8);
    assert_eq!(kinds, vec![ComponentType::MixedArc, ComponentType::BlueArc]);
    for comp in &report.components {
        match comp.kind {
            ComponentType::MixedArc => {
                assert!(comp.domain.hexes().iter().all(|x| x.r >= 3));
                assert!(comp.color_change.is_some());
            }
            _ => {
                assert!(comp.domain.hexes().iter().all(|x| x.r == 0));
                assert!(comp.color_change.is_none());
            }
        }
    }
}

#[test]
fn single_hexagon_leaves_no_components() {
    let d = build_domain([h(0, 0)], 1.0).unwrap();
    for color in [Color::Blue, Color::Yellow] {
        let c = Coloring::uniform(&d, color);
        let p = explore_chordal(&c, 0, 3).unwrap();
        assert!(classify_components(&c, &p, 0, 3).unwrap().components.is_empty());
    }
}

#[test]
fn sealed_pockets_on_the_four_by_three_rhombus() {
    let d = build_domain(shapes::rhombus(4, 3), 1.0).unwrap();
    let n = d.boundary_adjacent().len();
    assert_eq!(n, 16);
    // the six neighbors of (1, 1) Blue, everything else Yellow: the walk
    // circles the Blue ring with it on its right, sealing (1, 1) off
    let ring: HashSet<HexCoord> = h(1, 1).neighbors().into_iter().collect();
    let c = Coloring::from_fn(&d, |x| if ring.contains(&x) { Color::Blue } else { Color::Yellow });
    let p = explore_chordal(&c, 0, n / 2).unwrap();
    let report = classify_components(&c, &p, 0, n / 2).unwrap();
    assert_eq!(report.components.len(), 1);
    assert_eq!(report.components[0].kind, ComponentType::BluePocket);
    assert_eq!(report.components[0].domain.hexes(), &[h(1, 1)]);

    // Blue only at (0, 0), (0, 1), (0, 2), (3, 2): the Yellow hexagons around
    // (2, 1) are all on the left of the walk
    let blue = [h(0, 0), h(0, 1), h(0, 2), h(3, 2)];
    let c = Coloring::from_fn(&d, |x| if blue.contains(&x) { Color::Blue } else { Color::Yellow });
    let p = explore_chordal(&c, 0, n / 2).unwrap();
    let report = classify_components(&c, &p, 0, n / 2).unwrap();
    assert_eq!(report.components.len(), 1);
    assert_eq!(report.components[0].kind, ComponentType::YellowPocket);
    assert_eq!(report.components[0].domain.hexes(), &[h(2, 1)]);
}

#[test]
fn classification_partitions_the_unexplored_hexagons() {
    for d in shapes::small_domain_family(10) {
        let n = d.boundary_adjacent().len();
        for (x, y) in [(0, n / 2), (n - 1, 2)] {
            for mask in 0..(1u64 << d.len()) {
                let c = Coloring::from_mask(&d, mask);
                let p = explore_chordal(&c, x, y).unwrap();
                let fat = fatten(&p, &d);
                let report = classify_components(&c, &p, x, y).unwrap();
                let mut covered: Vec<HexCoord> = report.components.iter().flat_map(|k| k.domain.hexes().to_vec()).collect();
                covered.sort();
                let rest: Vec<HexCoord> = d.hexes().iter().copied().filter(|h| !fat.contains(h)).collect();
                assert_eq!(covered, rest);
                assert_eq!(report.components.len(), components_without(&d, &fat).len());
                for k in &report.components {
                    assert_eq!(k.kind == ComponentType::MixedArc, k.color_change.is_some());
                }
            }
        }
    }
}

#[test]
fn first_exit_whole_domain_and_monotone_in_the_region() {
    let d = build_domain(shapes::disc(12.0), 1.0).unwrap();
    let n = d.boundary_adjacent().len();
    for seed in 0..10 {
        let c = sample_coloring(&d, 0.5, seed);
        let p = explore_chordal(&c, 0, n / 2).unwrap();
        let all = Region::Hexes(d.hexes().iter().copied().collect());
        assert_eq!(first_exit(&p, &all), p.len());
        let start = p.vertices()[0].position(1.0);
        let mut last = 0;
        for radius in [1.5, 3.0, 6.0, 12.0, 24.0, 100.0] {
            let t = first_exit(&p, &Region::Disc { center: start, radius, mesh: 1.0 });
            assert!(t >= last);
            last = t;
        }
        assert_eq!(last, p.len());
    }
}

type Continuations = HashMap<Vec<DirEdge>, usize>;

/// Given the first `k` edges, the rest of the walk is a function of the
/// hexagons not yet seen, each still uniform. Collect the continuation law
/// from the full enumeration and from a fresh walk started at edge `k - 1`
/// with the prefix's sides fixed to their realized colors.
#[test]
fn markov_property_by_enumeration() {
    for d in shapes::small_domain_family(12) {
        let n = d.boundary_adjacent().len();
        let (x, y) = (0, n / 2);
        let pretend = default_pretend(n, x, y);
        let paths: Vec<LatticePath> =
            (0..(1u64 << d.len())).map(|m| explore_chordal(&Coloring::from_mask(&d, m), x, y).unwrap()).collect();
        for k in 1..=4 {
            let mut classes: HashMap<Vec<DirEdge>, Continuations> = HashMap::new();
            for p in paths.iter().filter(|p| p.len() > k) {
                *classes.entry(p.edges[..k].to_vec()).or_default().entry(p.edges[k..].to_vec()).or_default() += 1;
            }
            for (prefix, law) in classes {
                let prefix_path = LatticePath::new(prefix.clone());
                let fixed: HashMap<HexCoord, Color> = prefix
                    .iter()
                    .flat_map(|e| [(e.left, Color::Yellow), (e.right(), Color::Blue)])
                    .filter(|(h, _)| d.contains(*h))
                    .collect();
                let free: Vec<HexCoord> = d.hexes().iter().copied().filter(|h| !fixed.contains_key(h)).collect();
                assert_eq!(fatten(&prefix_path, &d).len(), fixed.len());
                assert_eq!(law.values().sum::<usize>(), 1 << free.len(), "class size");
                let mut fresh = Continuations::new();
                for m in 0..(1u64 << free.len()) {
                    let mut colors = fixed.clone();
                    for (i, &f) in free.iter().enumerate() {
                        colors.insert(f, if m >> i & 1 == 1 { Color::Blue } else { Color::Yellow });
                    }
                    let color_at = |e: DirEdge| {
                        let w = e.wedge();
                        colors.get(&w).copied().unwrap_or_else(|| pretend[d.boundary_position(w).unwrap()])
                    };
                    let walk = walk_through(prefix[k - 1], |h| d.contains(h), color_at, 10_000).unwrap();
                    *fresh.entry(walk[1..].to_vec()).or_default() += 1;
                }
                assert_eq!(law, fresh);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn paths_on_random_blobs_are_simple_and_correctly_sided(
        size in 2usize..120, shape_seed in any::<u64>(), seed in any::<u64>(), xs in any::<u16>(), ys in any::<u16>()
    ) {
        let d = build_domain(shapes::random_blob(size, shape_seed), 1.0).unwrap();
        prop_assume!(d.is_lattice_jordan());
        let n = d.boundary_adjacent().len();
        let (x, y) = (xs as usize % n, ys as usize % n);
        prop_assume!(x != y);
        let c = sample_coloring(&d, 0.5, seed);
        let p = explore_chordal(&c, x, y).unwrap();
        prop_assert!(p.is_simple_chain());
        prop_assert!(sides_are_correct(&c, &p, x, y));
        prop_assert_eq!(p.start(), Some(d.entry_edge(x)));
        prop_assert_eq!(p.end(), Some(d.entry_edge(y).reversed()));
        prop_assert!(fatten(&p, &d).iter().all(|h| p.edges.iter().any(|e| e.left == *h || e.right() == *h)));
    }
}
