//! Brute-force references for the verify suite. Everything here works from
//! the adjacency relation alone and shares no code with the searches it checks.

use std::collections::{BTreeSet, VecDeque};

use digifix::DigitalImage;

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

pub fn close(g: &DigitalImage, a: usize, b: usize) -> bool {
    a == b || g.is_adjacent(a, b)
}

/// Adjacent points go to adjacent-or-equal points.
pub fn continuous_by_edges(g: &DigitalImage, t: &[usize]) -> bool {
    g.edges().iter().all(|&(a, b)| close(g, t[a], t[b]))
}

/// Connectedness of every vertex subset, indexed by bit mask (`n <= 16`).
pub fn connected_table(g: &DigitalImage) -> Vec<bool> {
    let n = g.len();
    (0..1u32 << n)
        .map(|mask| {
            let Some(start) = (0..n).find(|&i| mask >> i & 1 == 1) else {
                return true;
            };
            let mut seen = 1u32 << start;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in 0..n {
                    if mask >> w & 1 == 1 && seen >> w & 1 == 0 && g.is_adjacent(v, w) {
                        seen |= 1 << w;
                        queue.push_back(w);
                    }
                }
            }
            seen == mask
        })
        .collect()
}

/// The image of every connected subset is connected.
pub fn continuous_by_subsets(t: &[usize], connected: &[bool]) -> bool {
    (1..connected.len()).filter(|&m| connected[m]).all(|mask| {
        let image = (0..t.len()).filter(|&i| mask >> i & 1 == 1).fold(0usize, |acc, i| acc | 1 << t[i]);
        connected[image]
    })
}

pub fn brute_maps(g: &DigitalImage) -> Vec<Vec<usize>> {
    all_functions(g.len()).filter(|t| continuous_by_edges(g, t)).collect()
}

pub fn fix_count(t: &[usize]) -> usize {
    t.iter().enumerate().filter(|(i, &v)| *i == v).count()
}

pub fn brute_spectrum(g: &DigitalImage) -> BTreeSet<usize> {
    brute_maps(g).iter().map(|t| fix_count(t)).collect()
}

/// Some continuous map moves exactly one point.
pub fn moves_exactly_one(g: &DigitalImage) -> bool {
    let n = g.len();
    (0..n).any(|x| {
        (0..n).filter(|&y| y != x).any(|y| {
            let mut t: Vec<usize> = (0..n).collect();
            t[x] = y;
            continuous_by_edges(g, &t)
        })
    })
}

/// Least number of moved points over continuous maps moving `x`.
pub fn pull_index(g: &DigitalImage, x: usize) -> Option<usize> {
    brute_maps(g)
        .iter()
        .filter(|t| t[x] != x)
        .map(|t| g.len() - fix_count(t))
        .min()
}

/// Classes of the relation "joined by a chain of pointwise adjacent-or-equal
/// continuous maps", as sorted lists of target arrays.
pub fn multi_step_classes(g: &DigitalImage) -> Vec<Vec<Vec<usize>>> {
    let maps = brute_maps(g);
    let mut label = vec![usize::MAX; maps.len()];
    let mut classes = Vec::new();
    for s in 0..maps.len() {
        if label[s] != usize::MAX {
            continue;
        }
        let id = classes.len();
        label[s] = id;
        let mut members = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            for j in 0..maps.len() {
                if label[j] == usize::MAX && (0..g.len()).all(|v| close(g, maps[i][v], maps[j][v])) {
                    label[j] = id;
                    members.push(j);
                    queue.push_back(j);
                }
            }
        }
        let mut class: Vec<Vec<usize>> = members.into_iter().map(|i| maps[i].clone()).collect();
        class.sort();
        classes.push(class);
    }
    classes.sort();
    classes
}

/// Points lying on every shortest path from `a` to `b`, by listing all simple paths.
pub fn on_every_geodesic(g: &DigitalImage, a: usize, b: usize) -> Option<BTreeSet<usize>> {
    fn walk(g: &DigitalImage, b: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = *path.last().expect("path starts nonempty");
        if v == b {
            out.push(path.clone());
            return;
        }
        for w in g.neighbors(v).collect::<Vec<_>>() {
            if !path.contains(&w) {
                path.push(w);
                walk(g, b, path, out);
                path.pop();
            }
        }
    }
    let mut paths = Vec::new();
    walk(g, b, &mut vec![a], &mut paths);
    let shortest = paths.iter().map(Vec::len).min()?;
    paths.retain(|p| p.len() == shortest);
    Some(paths[0].iter().copied().filter(|v| paths.iter().all(|p| p.contains(v))).collect())
}

pub fn fix_connected(t: &[usize], connected: &[bool]) -> bool {
    let mask = (0..t.len()).filter(|&i| t[i] == i).fold(0usize, |acc, i| acc | 1 << i);
    connected[mask]
}
