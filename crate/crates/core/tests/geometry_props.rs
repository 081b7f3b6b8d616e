mod common;

use std::collections::BTreeSet;

use common::{brute_force_maps, connected_graph, graph};
use digifix::generate::cycle;
use digifix::spectrum::all_continuous_selfmaps;
use digifix::{
    articulation_fixed_points, articulation_points, fix_structure, forced_fixed_points, minimal_paths, DigitalImage,
    FixStructure, SearchOptions, SelfMap,
};
use proptest::prelude::*;

/// Every shortest path from `x` to `y`, by depth-first search over all simple paths.
fn all_geodesics(g: &DigitalImage, x: usize, y: usize) -> Vec<Vec<usize>> {
    fn walk(g: &DigitalImage, y: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = *path.last().unwrap();
        if v == y {
            out.push(path.clone());
            return;
        }
        for w in g.neighbors(v).collect::<Vec<_>>() {
            if !path.contains(&w) {
                path.push(w);
                walk(g, y, path, out);
                path.pop();
            }
        }
    }
    let mut simple = Vec::new();
    walk(g, y, &mut vec![x], &mut simple);
    let Some(d) = simple.iter().map(Vec::len).min() else {
        return simple;
    };
    simple.retain(|p| p.len() == d);
    simple.sort();
    simple
}

fn components_without(g: &DigitalImage, v: usize) -> usize {
    let rest: BTreeSet<usize> = (0..g.len()).filter(|&w| w != v).collect();
    g.induced(&rest).unwrap().0.connected_components().len()
}

/// Random trees: vertex `i > 0` hangs off an earlier vertex.
fn tree(max_n: usize) -> impl Strategy<Value = DigitalImage> {
    (1..=max_n)
        .prop_flat_map(|n| proptest::collection::vec(any::<prop::sample::Index>(), n - 1))
        .prop_map(|parents| {
            let n = parents.len() + 1;
            let edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
            DigitalImage::from_edges("tree", n, &edges).unwrap()
        })
}

fn fix_is_connected(g: &DigitalImage, t: &[usize]) -> bool {
    let fix: BTreeSet<usize> = (0..t.len()).filter(|&i| t[i] == i).collect();
    fix.is_empty() || g.induced(&fix).unwrap().0.is_connected()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn geodesics_match_exhaustive_search(g in connected_graph(8), x in any::<prop::sample::Index>(), y in any::<prop::sample::Index>()) {
        let (x, y) = (x.index(g.len()), y.index(g.len()));
        let oracle = all_geodesics(&g, x, y);
        let m = minimal_paths(&g, x, y, usize::MAX).unwrap();
        prop_assert_eq!(m.distance, oracle[0].len() - 1);
        prop_assert_eq!(m.count, Some(oracle.len() as u128));
        let listed: Vec<Vec<usize>> = m.geodesics.iter().map(|p| p.vertices.clone()).collect();
        prop_assert_eq!(&listed, &oracle);
        prop_assert!(!m.truncated);
        let common: BTreeSet<usize> = oracle[0].iter().copied().filter(|v| oracle.iter().all(|p| p.contains(v))).collect();
        prop_assert_eq!(&m.on_every, &common);
        let capped = minimal_paths(&g, x, y, 1).unwrap();
        prop_assert_eq!(capped.geodesics.len(), 1);
        prop_assert_eq!(capped.truncated, oracle.len() > 1);
    }

    #[test]
    fn points_forced_by_geodesics_are_fixed(g in graph(6)) {
        for t in brute_force_maps(&g) {
            let f = SelfMap::new(&g, t).unwrap();
            let forced = forced_fixed_points(&f).unwrap();
            prop_assert!(forced.confirmed);
            prop_assert_eq!(&forced.forced, &f.fix());
            let art = articulation_fixed_points(&f).unwrap();
            prop_assert!(art.confirmed);
        }
    }

    #[test]
    fn unique_geodesics_between_fixed_points_are_fixed(g in connected_graph(6)) {
        for t in brute_force_maps(&g) {
            let fix: Vec<usize> = (0..t.len()).filter(|&i| t[i] == i).collect();
            for &a in &fix {
                for &b in &fix {
                    let paths = all_geodesics(&g, a, b);
                    if paths.len() == 1 {
                        prop_assert!(paths[0].iter().all(|&v| t[v] == v));
                    }
                }
            }
        }
    }

    #[test]
    fn articulation_points_match_removal(g in graph(8)) {
        let base = g.connected_components().len();
        let oracle: BTreeSet<usize> = (0..g.len()).filter(|&v| components_without(&g, v) > base).collect();
        prop_assert_eq!(articulation_points(&g), oracle);
    }

    #[test]
    fn trees_have_connected_fixed_point_sets(g in tree(7)) {
        for t in brute_force_maps(&g) {
            prop_assert!(fix_is_connected(&g, &t));
            let f = SelfMap::new(&g, t).unwrap();
            prop_assert!(matches!(fix_structure(&f).unwrap(), FixStructure::Empty | FixStructure::Connected));
        }
    }
}

#[test]
fn cycle_fixed_point_sets() {
    for n in 1..=9 {
        let c = cycle(n).unwrap();
        let mut opposite_pairs = 0;
        let maps = if n <= 6 {
            brute_force_maps(&c)
        } else {
            all_continuous_selfmaps(&c, &SearchOptions::default()).unwrap().0
        };
        for t in maps {
            let f = SelfMap::new(&c, t.clone()).unwrap();
            let s = fix_structure(&f).unwrap();
            if fix_is_connected(&c, &t) {
                assert!(matches!(s, FixStructure::Empty | FixStructure::Connected), "C_{n} {t:?}");
                continue;
            }
            let fix: Vec<usize> = (0..n).filter(|&i| t[i] == i).collect();
            assert!(n % 2 == 0 && fix.len() == 2 && fix[1] - fix[0] == n / 2, "C_{n} {t:?}");
            assert_eq!(
                s,
                FixStructure::Disconnected {
                    components: vec![vec![fix[0]], vec![fix[1]]],
                    antipodal_pair: Some((fix[0], fix[1])),
                }
            );
            opposite_pairs += 1;
        }
        assert_eq!(opposite_pairs > 0, n % 2 == 0 && n >= 4, "C_{n}");
    }
}
