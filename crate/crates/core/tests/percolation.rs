use std::collections::VecDeque;

use percolab_core::hexlattice::{HexCoord, build_domain, shapes};
use percolab_core::percolation::{Color, Coloring, color_clusters, has_crossing, rhombus_sides, sample_coloring};
use proptest::prelude::*;

/// Component ids by plain breadth-first search, numbered in order of first
/// appearance along the canonical hexagon order.
fn bfs_components(c: &Coloring<'_>) -> Vec<usize> {
    let d = c.domain();
    let mut id = vec![usize::MAX; d.len()];
    let mut next = 0;
    for s in 0..d.len() {
        if id[s] != usize::MAX {
            continue;
        }
        id[s] = next;
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            for nb in d.hexes()[i].neighbors() {
                if let Some(j) = d.slot(nb) {
                    if id[j] == usize::MAX && c.colors()[j] == c.colors()[i] {
                        id[j] = next;
                        queue.push_back(j);
                    }
                }
            }
        }
        next += 1;
    }
    id
}

/// Same partition up to renaming of labels.
fn same_partition(a: &[usize], b: &[usize]) -> bool {
    let n = a.len();
    (0..n).all(|i| (0..n).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

#[test]
fn cluster_labels_match_bfs_on_all_rhombus_colorings() {
    let d = build_domain(shapes::rhombus(3, 3), 1.0).unwrap();
    for mask in 0..(1u64 << 9) {
        let c = Coloring::from_mask(&d, mask);
        let labels = color_clusters(&c);
        let oracle = bfs_components(&c);
        assert!(same_partition(&labels.label, &oracle), "mask {mask:#b}");
        assert_eq!(labels.count(), oracle.iter().max().unwrap() + 1);
        for (i, &l) in labels.label.iter().enumerate() {
            assert_eq!(labels.cluster_color[l], c.colors()[i]);
        }
    }
}

fn duality_holds(c: &Coloring<'_>, l: i32) -> bool {
    let [left, right, bottom, top] = rhombus_sides(l, l);
    has_crossing(c, &left, &right, Color::Blue) != has_crossing(c, &bottom, &top, Color::Yellow)
}

#[test]
fn rhombus_duality_exhaustive() {
    for l in 1..=3 {
        let d = build_domain(shapes::rhombus(l, l), 1.0).unwrap();
        for mask in 0..(1u64 << (l * l)) {
            assert!(duality_holds(&Coloring::from_mask(&d, mask), l), "L = {l}, mask {mask:#b}");
        }
    }
}

#[test]
fn rhombus_duality_sampled() {
    let d = build_domain(shapes::rhombus(50, 50), 1.0).unwrap();
    for seed in 0..1000 {
        assert!(duality_holds(&sample_coloring(&d, 0.5, seed), 50), "seed {seed}");
    }
}

#[test]
fn swapping_colors_maps_blue_crossings_to_yellow_crossings() {
    let d = build_domain(shapes::rhombus(30, 30), 1.0).unwrap();
    let [left, right, ..] = rhombus_sides(30, 30);
    let (mut blue, mut yellow_swapped) = (0, 0);
    for seed in 0..400 {
        let c = sample_coloring(&d, 0.5, seed);
        blue += usize::from(has_crossing(&c, &left, &right, Color::Blue));
        yellow_swapped += usize::from(has_crossing(&c.swapped(), &left, &right, Color::Yellow));
    }
    assert_eq!(blue, yellow_swapped);
    // and the Blue estimate is near 1/2 by symmetry of the square rhombus
    let p = blue as f64 / 400.0;
    assert!((p - 0.5).abs() < 4.0 * 0.025, "{p}");
}

#[test]
fn crossing_uses_outside_arcs_through_their_neighbors() {
    let d = build_domain(shapes::rhombus(4, 1), 1.0).unwrap();
    let c = Coloring::uniform(&d, Color::Blue);
    let west = [HexCoord::new(-1, 0)];
    let east = [HexCoord::new(4, 0)];
    assert!(has_crossing(&c, &west, &east, Color::Blue));
    let gap = Coloring::from_fn(&d, |x| if x.q == 2 { Color::Yellow } else { Color::Blue });
    assert!(!has_crossing(&gap, &west, &east, Color::Blue));
    assert!(!has_crossing(&gap, &west, &east, Color::Yellow));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn clusters_respect_adjacency(n in 1usize..150, shape_seed in any::<u64>(), seed in any::<u64>(), p in 0.0f64..=1.0) {
        let d = build_domain(shapes::random_blob(n, shape_seed), 1.0).unwrap();
        let c = sample_coloring(&d, p, seed);
        let labels = color_clusters(&c);
        prop_assert!(same_partition(&labels.label, &bfs_components(&c)));
        for (i, h) in d.hexes().iter().enumerate() {
            for nb in h.neighbors() {
                if let Some(j) = d.slot(nb) {
                    let same_color = c.colors()[i] == c.colors()[j];
                    prop_assert_eq!(same_color, labels.label[i] == labels.label[j]);
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let d = build_domain(shapes::disc(8.0), 1.0).unwrap();
        let (a, b) = (sample_coloring(&d, p, seed), sample_coloring(&d, p, seed));
        prop_assert_eq!(a.colors(), b.colors());
    }
}
