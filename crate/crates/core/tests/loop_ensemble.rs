use std::collections::HashSet;

use percolab_core::exploration::{default_pretend, explore_chordal};
use percolab_core::hexlattice::{HexCoord, build_domain, shapes};
use percolab_core::loop_ensemble::{
    LoopError, SeedRule, extract_loops_algorithmic, extract_loops_direct, interface_edges, nesting_tree, paste_excursions,
    touches_first,
};
use percolab_core::percolation::{Color, Coloring, sample_coloring};
use proptest::prelude::*;

fn h(q: i32, r: i32) -> HexCoord {
    HexCoord::new(q, r)
}

#[test]
fn exhaustive_small_domains_agree() {
    for d in shapes::small_domain_family(12) {
        for mask in 0..(1u64 << d.len()) {
            let c = Coloring::from_mask(&d, mask);
            let direct = extract_loops_direct(&c).unwrap();
            let algo = extract_loops_algorithmic(&c, SeedRule::MaxDistance)
                .unwrap_or_else(|e| panic!("{} hexes, mask {mask:#b}: {e}", d.len()));
            assert_eq!(algo, direct, "{} hexes, mask {mask:#b}", d.len());
        }
    }
}

#[test]
fn random_seed_rule_gives_the_same_loops() {
    for d in shapes::small_domain_family(9) {
        for mask in 0..(1u64 << d.len()) {
            let c = Coloring::from_mask(&d, mask);
            let direct = extract_loops_direct(&c).unwrap();
            for seed in 0..3 {
                assert_eq!(extract_loops_algorithmic(&c, SeedRule::Random(seed)).unwrap(), direct);
            }
        }
    }
}

#[test]
fn random_rhombus_configurations_agree() {
    let d = build_domain(shapes::rhombus(50, 50), 1.0).unwrap();
    for seed in 0..40 {
        let c = sample_coloring(&d, 0.5, seed);
        let direct = extract_loops_direct(&c).unwrap();
        assert_eq!(extract_loops_algorithmic(&c, SeedRule::MaxDistance).unwrap(), direct, "seed {seed}");
        assert_eq!(extract_loops_algorithmic(&c, SeedRule::Random(seed)).unwrap(), direct, "seed {seed}");
    }
}

#[test]
fn yellow_boundary_is_supported() {
    let d = build_domain(shapes::rhombus(8, 7), 1.0).unwrap();
    for seed in 0..30 {
        let c = sample_coloring(&d, 0.5, seed).with_boundary(Color::Yellow);
        assert_eq!(
            extract_loops_algorithmic(&c, SeedRule::MaxDistance).unwrap(),
            extract_loops_direct(&c).unwrap()
        );
    }
}

#[test]
fn every_interface_edge_in_exactly_one_loop() {
    let d = build_domain(shapes::disc(12.0), 1.0).unwrap();
    for seed in 0..20 {
        let c = sample_coloring(&d, 0.5, seed);
        let e = extract_loops_direct(&c).unwrap();
        let mut seen = HashSet::new();
        for l in &e.loops {
            for &edge in l.edges() {
                assert!(seen.insert(edge), "edge in two loops");
            }
            // closed and vertex-simple
            let vs: HashSet<_> = l.vertices().into_iter().collect();
            assert_eq!(vs.len(), l.len());
            for (i, edge) in l.edges().iter().enumerate() {
                assert_eq!(edge.head(), l.edges()[(i + 1) % l.len()].tail());
                assert_eq!(c.color_or_pretend(edge.left).unwrap_or(Color::Blue), Color::Yellow);
                assert_eq!(c.color_or_pretend(edge.right()).unwrap_or(Color::Blue), Color::Blue);
            }
        }
        let all: HashSet<_> = interface_edges(&c).unwrap().into_iter().collect();
        assert_eq!(seen, all);
    }
}

#[test]
fn swap_invariance_of_counts() {
    let d = build_domain(shapes::rhombus(20, 20), 1.0).unwrap();
    for seed in 0..20 {
        let c = sample_coloring(&d, 0.5, seed);
        let a = extract_loops_direct(&c).unwrap();
        let b = extract_loops_direct(&c.swapped().with_boundary(Color::Yellow)).unwrap();
        assert_eq!(a.len(), b.len());
        assert_eq!(a.edge_count(), b.edge_count());
    }
}

/// Hexagonal ball of radius 4: Yellow ring at distance 3, Blue elsewhere
/// except a Yellow center.
fn ring_with_core() -> (percolab_core::hexlattice::LatticeDomain, Vec<Color>) {
    let d = build_domain(shapes::hex_ball(4), 1.0).unwrap();
    let colors = d
        .hexes()
        .iter()
        .map(|x| match x.distance(h(0, 0)) {
            0 | 3 => Color::Yellow,
            _ => Color::Blue,
        })
        .collect();
    (d, colors)
}

#[test]
fn ring_with_core_nests_three_deep() {
    let (d, colors) = ring_with_core();
    let c = Coloring::from_colors(&d, colors);
    let e = extract_loops_direct(&c).unwrap();
    assert_eq!(e.len(), 3);
    let depths: Vec<usize> = (0..3).map(|i| e.depth(i)).collect();
    let mut sorted = depths.clone();
    sorted.sort();
    assert_eq!(sorted, vec![1, 2, 3]);
    // outer contour 42 edges, inner contour 30, cell 6; orientation alternates
    let by_depth = |k: usize| &e.loops[depths.iter().position(|&x| x == k).unwrap()];
    assert_eq!((by_depth(1).len(), by_depth(2).len(), by_depth(3).len()), (42, 30, 6));
    assert!(by_depth(1).yellow_inside() && !by_depth(2).yellow_inside() && by_depth(3).yellow_inside());
    assert_eq!(nesting_tree(&e), e.parent);
    assert_eq!(extract_loops_algorithmic(&c, SeedRule::MaxDistance).unwrap(), e);
}

#[test]
fn side_by_side_loops_are_roots() {
    let d = build_domain(shapes::rhombus(7, 3), 1.0).unwrap();
    let c = Coloring::from_fn(&d, |x| if x == h(1, 1) || x == h(5, 1) { Color::Yellow } else { Color::Blue });
    let e = extract_loops_direct(&c).unwrap();
    assert_eq!(e.len(), 2);
    assert_eq!(e.parent, vec![None, None]);
    assert!(nesting_tree(&extract_loops_direct(&Coloring::uniform(&d, Color::Blue)).unwrap()).is_empty());
}

#[test]
fn not_jordan_is_rejected() {
    let d = build_domain(h(0, 0).neighbors(), 1.0).unwrap();
    let c = Coloring::uniform(&d, Color::Yellow);
    assert_eq!(extract_loops_algorithmic(&c, SeedRule::MaxDistance).unwrap_err(), LoopError::NotJordan);
}

/// Crossing functional shared by both paths: with `c` the midpoint of arc
/// `[a, b)` and `d` the midpoint of `[b, a)`, does the path reach `[b, d)`
/// before `[c, b)`?
fn functional(ring: &[HexCoord], path: &percolab_core::exploration::LatticePath, a: usize, b: usize) -> bool {
    let n = ring.len();
    let c = (a + ((b + n - a) % n) / 2) % n;
    let dd = (b + ((a + n - b) % n) / 2) % n;
    let arc = |from: usize, to: usize| -> Vec<HexCoord> { (0..(to + n - from) % n).map(|k| ring[(from + k) % n]).collect() };
    touches_first(path, &arc(b, dd), &arc(c, b))
}

#[test]
fn no_touching_loop_gives_the_boundary_chain() {
    let d = build_domain(shapes::rhombus(3, 3), 1.0).unwrap();
    let c = Coloring::uniform(&d, Color::Blue);
    let e = extract_loops_direct(&c).unwrap();
    let n = d.boundary_adjacent().len();
    let p = paste_excursions(&e, &d, 0, n / 2).unwrap();
    assert!(p.is_simple_chain());
    let explored = explore_chordal(&c, 0, n / 2).unwrap();
    assert_eq!(p, explored);
    // every edge but the two ends runs along the domain with a boundary hexagon on its left
    assert!(p.edges[1..p.len() - 1].iter().all(|x| !d.contains(x.left) && d.contains(x.right())));
}

#[test]
fn single_cluster_touching_the_arc() {
    // 3 x 4 rhombus with a Yellow column at q = 0 touching the left side
    let d = build_domain(shapes::rhombus(3, 4), 1.0).unwrap();
    let c = Coloring::from_fn(&d, |x| if x.q == 0 && x.r <= 2 { Color::Yellow } else { Color::Blue });
    let e = extract_loops_direct(&c).unwrap();
    assert_eq!(e.len(), 1);
    let ring = d.boundary_adjacent();
    // b on the right side, a on the bottom: the arc [b, a) runs over the top
    // and down the left side
    let b = ring.iter().position(|&x| x == h(3, 1)).unwrap();
    let a = ring.iter().position(|&x| x == h(2, -1)).unwrap();
    let p = paste_excursions(&e, &d, a, b).unwrap();
    let mixed = c.clone().with_pretend(default_pretend(ring.len(), a, b));
    assert_eq!(p, explore_chordal(&mixed, a, b).unwrap());
    let loop_edges: HashSet<_> = e.loops[0].edges().iter().copied().collect();
    let shared = p.edges.iter().filter(|x| loop_edges.contains(x)).count();
    assert!(shared > 0 && shared < e.loops[0].len());
}

#[test]
fn pasted_paths_match_explorations_per_configuration() {
    let mut total = 0usize;
    let mut identical = 0usize;
    for d in shapes::small_domain_family(12) {
        let n = d.boundary_adjacent().len();
        for (a, b) in [(0, n / 2), (n / 3, 0), (1, n - 2)] {
            for mask in 0..(1u64 << d.len()) {
                let c = Coloring::from_mask(&d, mask);
                let e = extract_loops_direct(&c).unwrap();
                let pasted = paste_excursions(&e, &d, a, b).unwrap();
                let explored = explore_chordal(&c.clone().with_pretend(default_pretend(n, a, b)), a, b).unwrap();
                assert_eq!(
                    functional(d.boundary_adjacent(), &pasted, a, b),
                    functional(d.boundary_adjacent(), &explored, a, b)
                );
                total += 1;
                identical += usize::from(pasted == explored);
            }
        }
    }
    assert_eq!(identical, total);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blob_colorings_agree(n in 3usize..40, shape_seed in 0u64..1000, color_seed in any::<u64>()) {
        let d = build_domain(shapes::random_blob(n, shape_seed), 1.0).unwrap();
        prop_assume!(d.is_lattice_jordan());
        let c = sample_coloring(&d, 0.5, color_seed);
        let direct = extract_loops_direct(&c).unwrap();
        prop_assert_eq!(extract_loops_algorithmic(&c, SeedRule::MaxDistance).unwrap(), direct.clone());
        prop_assert_eq!(extract_loops_algorithmic(&c, SeedRule::Random(color_seed)).unwrap(), direct);
    }
}
