#![allow(dead_code)]

use digifix::DigitalImage;
use proptest::prelude::*;

/// Graphs on `1..=max_n` abstract vertices.
pub fn graph(max_n: usize) -> impl Strategy<Value = DigitalImage> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)))
        .prop_map(|(n, bits)| {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            let edges: Vec<(usize, usize)> = pairs.zip(bits).filter(|(_, on)| *on).map(|(e, _)| e).collect();
            DigitalImage::from_edges("g", n, &edges).unwrap()
        })
}

/// Connected graphs: a random graph plus a spanning path in index order.
pub fn connected_graph(max_n: usize) -> impl Strategy<Value = DigitalImage> {
    graph(max_n).prop_map(|g| {
        let n = g.len();
        let mut edges = g.edges();
        edges.extend((1..n).map(|i| (i - 1, i)));
        DigitalImage::from_edges("cg", n, &edges).unwrap()
    })
}

/// Every function on `0..n`, as target arrays in lexicographic order.
pub fn all_functions(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(n as u32);
    (0..total).map(move |mut code| {
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        t
    })
}

/// Continuity straight from the definition, using neighborhood sets.
pub fn continuous_by_definition(image: &DigitalImage, t: &[usize]) -> bool {
    image.edges().iter().all(|&(a, b)| {
        t[a] == t[b] || image.closed_neighborhood(t[a]).unwrap().contains(&t[b])
    })
}

/// All continuous self-maps by brute force over every function.
pub fn brute_force_maps(image: &DigitalImage) -> Vec<Vec<usize>> {
    all_functions(image.len())
        .filter(|t| continuous_by_definition(image, t))
        .collect()
}
