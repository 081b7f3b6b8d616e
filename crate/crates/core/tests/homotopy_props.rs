mod common;

use std::collections::{BTreeSet, HashMap};

use common::{brute_force_maps, connected_graph, graph};
use digifix::generate::{cycle, fig_sexample, fig_xexample, interval, wedge_cycles_8};
use digifix::homotopy::homotopy_spectrum;
use digifix::homotopy::one_step_neighbors;
use digifix::spectrum::all_continuous_selfmaps;
use digifix::{
    cycle_map, disjoint_union, find_homotopy_path, fixed_point_spectrum, homotopy_class, homotopy_classes,
    is_rigid_image, is_rigid_map, product, wedge, CycleMapKind, DigitalImage, HomotopyOptions, PathSearch,
    SearchOptions, SelfMap, Spectrum,
};
use proptest::prelude::*;

fn opts() -> HomotopyOptions {
    HomotopyOptions::default()
}

/// Classes as sets of target arrays, computed from every function by
/// flood fill over pointwise-adjacent-or-equal pairs.
fn oracle_classes(g: &DigitalImage) -> BTreeSet<BTreeSet<Vec<usize>>> {
    let maps = brute_force_maps(g);
    let close = |a: &[usize], b: &[usize]| a.iter().zip(b).all(|(&x, &y)| g.adjacent_or_equal(x, y));
    let mut seen = vec![false; maps.len()];
    let mut out = BTreeSet::new();
    for s in 0..maps.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut class = BTreeSet::new();
        while let Some(i) = stack.pop() {
            class.insert(maps[i].clone());
            for j in 0..maps.len() {
                if !seen[j] && close(&maps[i], &maps[j]) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        out.insert(class);
    }
    out
}

fn computed_classes(g: &DigitalImage) -> BTreeSet<BTreeSet<Vec<usize>>> {
    homotopy_classes(g, &opts())
        .unwrap()
        .into_iter()
        .map(|c| c.members.unwrap().into_iter().map(SelfMap::into_targets).collect())
        .collect()
}

fn rigid(g: &DigitalImage) -> bool {
    is_rigid_image(g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classes_match_the_multi_step_oracle(g in graph(5)) {
        prop_assert_eq!(computed_classes(&g), oracle_classes(&g));
    }

    #[test]
    fn class_bookkeeping(g in graph(5)) {
        let classes = homotopy_classes(&g, &opts()).unwrap();
        let (maps, _) = all_continuous_selfmaps(&g, &SearchOptions::default()).unwrap();
        prop_assert_eq!(classes.iter().map(|c| c.size).sum::<usize>(), maps.len());
        let union = classes.iter().fold(Spectrum::new(), |acc, c| acc.union(&c.fix_counts));
        prop_assert_eq!(&union, &fixed_point_spectrum(&g).unwrap().0);
        for w in classes.windows(2) {
            prop_assert!(w[0].representative.targets() < w[1].representative.targets());
        }
        for c in &classes {
            prop_assert!(c.complete);
            prop_assert!(c.min_fixed().unwrap() <= c.max_fixed().unwrap());
            let members = c.members.as_ref().unwrap();
            prop_assert_eq!(members.len(), c.size);
            let f = &c.representative;
            prop_assert_eq!(is_rigid_map(f, &opts()).unwrap(), c.size == 1);
            if c.size == 1 {
                prop_assert_eq!(&c.fix_counts, &Spectrum::from([f.fix_count()]));
            }
            let again = homotopy_class(f, &opts()).unwrap();
            prop_assert_eq!(again.size, c.size);
            prop_assert_eq!(&again.fix_counts, &c.fix_counts);
            let last = members.last().unwrap();
            match find_homotopy_path(f, last, &opts()).unwrap() {
                PathSearch::Found(p) => {
                    prop_assert!(digifix::verify_homotopy_path(&p));
                    prop_assert_eq!(p.start().unwrap(), f);
                    prop_assert_eq!(p.end().unwrap(), last);
                }
                other => prop_assert!(false, "no path: {:?}", other),
            }
        }
    }

    #[test]
    fn constant_maps_realise_small_counts(g in connected_graph(7)) {
        let n = g.len();
        prop_assume!(n >= 2);
        // constants at adjacent points are one step apart, so in a connected
        // image every one-step neighbor of every constant lies in S(c)
        let mut reached = Spectrum::new();
        for x in 0..n {
            let c = SelfMap::constant(&g, x).unwrap();
            for h in one_step_neighbors(&c, &opts()).unwrap() {
                reached.insert(h.fix_count());
            }
        }
        prop_assert!(Spectrum::range(0, n.min(3)).is_subset(&reached));
        for x in 0..n {
            let k = g.closed_neighborhood(x).unwrap().len();
            prop_assert!(Spectrum::range(0, k).is_subset(&reached));
        }
    }

    #[test]
    fn constant_class_spectrum(g in connected_graph(5)) {
        let n = g.len();
        prop_assume!(n >= 2);
        let s = homotopy_spectrum(&SelfMap::constant(&g, 0).unwrap()).unwrap();
        prop_assert!(Spectrum::range(0, n.min(3)).is_subset(&s));
    }

    #[test]
    fn disjoint_union_is_rigid_iff_both_parts_are(a in graph(4), b in graph(4)) {
        prop_assert_eq!(rigid(&disjoint_union(&a, &b)), rigid(&a) && rigid(&b));
    }

    #[test]
    fn product_is_rigid_iff_factors_are(a in graph(3), b in graph(3), u in 1usize..=2) {
        let p = product(&[a.clone(), b.clone()], u).unwrap();
        prop_assert_eq!(rigid(&p), rigid(&a) && rigid(&b));
    }

    #[test]
    fn wedge_of_rigid_images_is_rigid(a in graph(5), b in graph(5), i in 0usize..5, j in 0usize..5) {
        prop_assume!(rigid(&a) && rigid(&b));
        let w = wedge(&a, &b, i % a.len(), j % b.len()).unwrap();
        prop_assert!(rigid(&w));
    }
}

#[test]
fn product_rigidity_with_a_rigid_factor() {
    let w = wedge_cycles_8();
    let pt = interval(0, 0).unwrap();
    let two = interval(0, 1).unwrap();
    assert!(rigid(&product(&[w.clone(), pt], 1).unwrap()));
    assert!(!rigid(&product(&[w.clone(), two], 2).unwrap()));
    let gap = DigitalImage::from_edges("gap", 2, &[]).unwrap();
    assert!(rigid(&product(&[w, gap], 1).unwrap()));
}

#[test]
fn wedge_of_non_rigid_cycles_can_be_rigid() {
    let w = wedge_cycles_8();
    assert!(rigid(&w));
    assert!(w.connected_components().len() == 1);
    // the preset is the union of two 8-point digital circles meeting in one point
    let (s, _) = fixed_point_spectrum(&w).unwrap();
    assert!(s.contains(w.len()));
}

#[test]
fn rigid_images_are_not_contractible() {
    for img in [wedge_cycles_8(), fig_xexample(), fig_sexample()] {
        let id = SelfMap::identity(&img);
        assert_eq!(homotopy_spectrum(&id).unwrap(), Spectrum::from([img.len()]));
        let c = SelfMap::constant(&img, 0).unwrap();
        assert_eq!(find_homotopy_path(&id, &c, &opts()).unwrap(), PathSearch::NotHomotopic);
    }
}

#[test]
fn automorphisms_of_rigid_images_are_rigid() {
    for img in [fig_xexample(), fig_sexample(), wedge_cycles_8()] {
        let pts = img.points().unwrap();
        let hi = |k: usize| pts.iter().map(|p| p.0[k]).max().unwrap();
        let lo = |k: usize| pts.iter().map(|p| p.0[k]).min().unwrap();
        let (sx, sy) = (lo(0) + hi(0), lo(1) + hi(1));
        // lattice symmetries of the bounding box that carry the image onto itself
        let moves: [&dyn Fn(i64, i64) -> (i64, i64); 4] =
            [&|x, y| (x, y), &|x, y| (sx - x, y), &|x, y| (x, sy - y), &|x, y| (sx - x, sy - y)];
        let autos: Vec<SelfMap> = moves
            .iter()
            .filter(|m| {
                pts.iter().all(|p| {
                    let (x, y) = m(p.0[0], p.0[1]);
                    img.index_of(&vec![x, y].into()).is_some()
                })
            })
            .map(|m| {
                SelfMap::from_point_fn(&img, |p| {
                    let (x, y) = m(p.0[0], p.0[1]);
                    vec![x, y].into()
                })
                .unwrap()
            })
            .collect();
        for f in &autos {
            assert!(f.is_bijection() && f.is_continuous());
        }
        assert!(autos.len() >= 2, "{}", img.name());
        for f in &autos {
            assert!(is_rigid_map(f, &opts()).unwrap());
            assert_eq!(homotopy_spectrum(f).unwrap(), Spectrum::from([f.fix_count()]));
        }
    }
}

#[test]
fn cycle_classes() {
    for n in 1..=4 {
        let c = cycle(n).unwrap();
        let classes = homotopy_classes(&c, &opts()).unwrap();
        assert_eq!(classes.len(), 1, "C_{n}");
        let expected = if n == 1 { Spectrum::from([1]) } else { Spectrum::range(0, n) };
        assert_eq!(classes[0].fix_counts, expected);
    }
    for n in 5..=9 {
        let c = cycle(n).unwrap();
        let classes = homotopy_classes(&c, &opts()).unwrap();
        assert_eq!(classes.len(), 3, "C_{n}");
        let rotations: BTreeSet<Vec<usize>> = (0..n)
            .map(|d| cycle_map(&c, CycleMapKind::Rotation(d)).unwrap().into_targets())
            .collect();
        let flips: BTreeSet<Vec<usize>> = (0..n)
            .map(|d| cycle_map(&c, CycleMapKind::FlipComposed(d)).unwrap().into_targets())
            .collect();
        let by_members: HashMap<BTreeSet<Vec<usize>>, Spectrum> = classes
            .iter()
            .map(|k| {
                let m = k.members.clone().unwrap().into_iter().map(SelfMap::into_targets).collect();
                (m, k.fix_counts.clone())
            })
            .collect();
        assert_eq!(by_members[&rotations], Spectrum::from([0, n]));
        // x_i -> x_{d-i} fixes x_i iff 2i = d mod n, which has one solution for odd n
        let flip_s = if n % 2 == 1 { Spectrum::from([1]) } else { Spectrum::from([0, 2]) };
        assert_eq!(by_members[&flips], flip_s);
        let rest: Vec<_> = by_members.keys().filter(|k| **k != rotations && **k != flips).collect();
        assert_eq!(rest.len(), 1);
        assert!(rest[0].contains(&vec![0; n]));
        assert_eq!(by_members[rest[0]], Spectrum::range(0, n / 2 + 1));
        // maps homotopic to an isomorphism are isomorphisms
        for t in rotations.iter().chain(&flips) {
            assert!(SelfMap::new(&c, t.clone()).unwrap().is_bijection());
        }
        for t in rest[0] {
            assert!(!SelfMap::new(&c, t.clone()).unwrap().is_bijection());
        }
    }
}

#[test]
fn interval_identity_spectrum() {
    for len in 1..=6 {
        let img = interval(0, len).unwrap();
        let s = homotopy_spectrum(&SelfMap::identity(&img)).unwrap();
        assert_eq!(s, Spectrum::range(0, len as usize + 1));
        assert!(!rigid(&img));
    }
    assert!(rigid(&interval(3, 3).unwrap()));
}
