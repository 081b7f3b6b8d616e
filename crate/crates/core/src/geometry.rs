//! Where fixed points must lie: geodesics, forced fixed points,
//! articulation points and the shape of `Fix(f)`.

use std::collections::{BTreeSet, VecDeque};

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::image::DigitalImage;
use crate::selfmap::SelfMap;

/// A path given by its vertices; its length is the number of edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWitness {
    pub vertices: Vec<usize>,
}

impl PathWitness {
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Nonempty, in range, consecutive vertices adjacent.
    pub fn verify(&self, image: &DigitalImage) -> bool {
        !self.vertices.is_empty()
            && self.vertices.iter().all(|&v| v < image.len())
            && self.vertices.windows(2).all(|w| image.is_adjacent(w[0], w[1]))
    }
}

/// BFS distances from `s`; `usize::MAX` marks unreachable points.
pub fn distances(image: &DigitalImage, s: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; image.len()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for w in image.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Number of shortest paths from the source to each point, or `None` on overflow.
fn geodesic_counts(image: &DigitalImage, dist: &[usize]) -> Option<Vec<u128>> {
    let mut order: Vec<usize> = (0..image.len()).filter(|&v| dist[v] != usize::MAX).collect();
    order.sort_by_key(|&v| dist[v]);
    let mut count = vec![0u128; image.len()];
    count[order[0]] = 1;
    for &v in &order[1..] {
        let mut c: u128 = 0;
        for u in image.neighbors(v) {
            if dist[u] != usize::MAX && dist[u] + 1 == dist[v] {
                c = c.checked_add(count[u])?;
            }
        }
        count[v] = c;
    }
    Some(count)
}

/// Points lying on every geodesic from `x` to `y`: a point on some geodesic
/// is on all of them iff it is alone at its distance from `x`.
fn on_every_by_layers(dx: &[usize], dy: &[usize], d: usize) -> BTreeSet<usize> {
    let mut layer: Vec<Option<usize>> = vec![None; d + 1];
    let mut crowded = vec![false; d + 1];
    for v in 0..dx.len() {
        if dx[v] != usize::MAX && dy[v] != usize::MAX && dx[v] + dy[v] == d {
            let k = dx[v];
            if layer[k].is_some() {
                crowded[k] = true;
            }
            layer[k] = Some(v);
        }
    }
    (0..=d).filter(|&k| !crowded[k]).filter_map(|k| layer[k]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPaths {
    pub distance: usize,
    /// Geodesics in lexicographic order, at most the requested cap.
    pub geodesics: Vec<PathWitness>,
    /// True when more geodesics exist than were listed.
    pub truncated: bool,
    /// Total number of geodesics, if it fits in `u128`.
    pub count: Option<u128>,
    /// Points lying on every geodesic (the endpoints included).
    pub on_every: BTreeSet<usize>,
}

/// Distance between `x` and `y`, up to `cap` geodesics, and the points common to all geodesics.
pub fn minimal_paths(image: &DigitalImage, x: usize, y: usize, cap: usize) -> Result<MinimalPaths> {
    image.check_index(x)?;
    image.check_index(y)?;
    let dx = distances(image, x);
    if dx[y] == usize::MAX {
        return Err(Error::Disconnected(x, y));
    }
    let dy = distances(image, y);
    let d = dx[y];
    let cx = geodesic_counts(image, &dx);
    let cy = geodesic_counts(image, &dy);
    let count = cx.as_ref().map(|c| c[y]);
    let on_every = match (&cx, &cy) {
        (Some(cx), Some(cy)) => {
            let total = cx[y];
            (0..image.len())
                .filter(|&v| dx[v] != usize::MAX && dy[v] != usize::MAX && dx[v] + dy[v] == d)
                .filter(|&v| cx[v].checked_mul(cy[v]) == Some(total))
                .collect()
        }
        _ => on_every_by_layers(&dx, &dy, d),
    };

    let mut geodesics = Vec::new();
    let mut truncated = false;
    let mut stack = vec![x];
    walk(image, &dx, &dy, d, &mut stack, cap, &mut geodesics, &mut truncated);
    Ok(MinimalPaths {
        distance: d,
        geodesics,
        truncated,
        count,
        on_every,
    })
}

#[allow(clippy::too_many_arguments)]
fn walk(
    image: &DigitalImage,
    dx: &[usize],
    dy: &[usize],
    d: usize,
    stack: &mut Vec<usize>,
    cap: usize,
    out: &mut Vec<PathWitness>,
    truncated: &mut bool,
) {
    if *truncated {
        return;
    }
    let v = *stack.last().expect("path starts at x");
    if dy[v] == 0 {
        if out.len() == cap {
            *truncated = true;
        } else {
            out.push(PathWitness {
                vertices: stack.clone(),
            });
        }
        return;
    }
    for w in image.neighbors(v) {
        if dx[w] == dx[v] + 1 && dy[w] != usize::MAX && dx[w] + dy[w] == d {
            stack.push(w);
            walk(image, dx, dy, d, stack, cap, out, truncated);
            stack.pop();
        }
    }
}

/// Predicted fixed points together with whether the map actually fixes them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcedFixedPoints {
    pub forced: BTreeSet<usize>,
    pub confirmed: bool,
}

/// Closes `Fix(f)` under "a point on every geodesic between two fixed
/// points is fixed" and checks the result against `Fix(f)`.
pub fn forced_fixed_points(f: &SelfMap<'_>) -> Result<ForcedFixedPoints> {
    if !f.is_continuous() {
        return Err(Error::Precondition("map is not continuous".into()));
    }
    let image = f.image();
    let n = image.len();
    let dist: Vec<Vec<usize>> = (0..n).map(|s| distances(image, s)).collect();
    let mut forced = f.fix();
    loop {
        let current: Vec<usize> = forced.iter().copied().collect();
        let mut added = false;
        for (i, &a) in current.iter().enumerate() {
            for &b in &current[i + 1..] {
                let d = dist[a][b];
                if d == usize::MAX {
                    continue;
                }
                for v in on_every_by_layers(&dist[a], &dist[b], d) {
                    added |= forced.insert(v);
                }
            }
        }
        if !added {
            break;
        }
    }
    let confirmed = forced.iter().all(|&v| f.apply(v) == v);
    Ok(ForcedFixedPoints { forced, confirmed })
}

/// Cut vertices: points whose removal splits their component.
pub fn articulation_points(image: &DigitalImage) -> BTreeSet<usize> {
    let n = image.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut cut = BTreeSet::new();
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent, neighbors still to scan)
        let mut stack: Vec<(usize, usize, Vec<usize>)> = vec![(root, usize::MAX, image.neighbors(root).collect())];
        while let Some(top) = stack.last_mut() {
            let (v, parent) = (top.0, top.1);
            if let Some(w) = top.2.pop() {
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, image.neighbors(w).collect()));
                } else if w != parent {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if parent != root && low[v] >= disc[parent] {
                        cut.insert(parent);
                    }
                }
            }
        }
        if root_children > 1 {
            cut.insert(root);
        }
    }
    cut
}

/// Articulation points that separate two fixed points of `f` within their
/// component, which must therefore be fixed, with a check that they are.
pub fn articulation_fixed_points(f: &SelfMap<'_>) -> Result<ForcedFixedPoints> {
    if !f.is_continuous() {
        return Err(Error::Precondition("map is not continuous".into()));
    }
    let image = f.image();
    let n = image.len();
    let fix = f.fix();
    let mut forced = BTreeSet::new();
    for v in articulation_points(image) {
        let mut rest = Bitset::full(n);
        rest.remove(v);
        let (sub, old) = image.induced(&rest.iter().collect())?;
        let comps = sub
            .connected_components()
            .into_iter()
            .filter(|c| c.iter().any(|&i| image.is_adjacent(v, old[i])))
            .filter(|c| c.iter().any(|&i| fix.contains(&old[i])))
            .count();
        if comps >= 2 {
            forced.insert(v);
        }
    }
    let confirmed = forced.iter().all(|v| fix.contains(v));
    Ok(ForcedFixedPoints { forced, confirmed })
}

/// Connectivity of `Fix(f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixStructure {
    Empty,
    Connected,
    Disconnected {
        components: Vec<Vec<usize>>,
        /// For a cycle, the two fixed points, which sit at opposite positions.
        antipodal_pair: Option<(usize, usize)>,
    },
}

/// Cyclic order of the points when the image is a digital cycle with at least 4 points.
fn cycle_order(image: &DigitalImage) -> Option<Vec<usize>> {
    let n = image.len();
    if n < 4 || !image.is_connected() || (0..n).any(|v| image.degree(v) != 2) {
        return None;
    }
    let mut order = vec![0];
    let mut prev = usize::MAX;
    let mut v = 0;
    while order.len() < n {
        let next = image.neighbors(v).find(|&w| w != prev)?;
        prev = v;
        v = next;
        order.push(v);
    }
    Some(order)
}

/// Classifies `Fix(f)`. On a digital cycle a disconnected fixed point set
/// must be two opposite points of an even cycle; anything else is reported
/// as an invariant violation.
pub fn fix_structure(f: &SelfMap<'_>) -> Result<FixStructure> {
    if !f.is_continuous() {
        return Err(Error::Precondition("map is not continuous".into()));
    }
    let image = f.image();
    let fix = f.fix();
    if fix.is_empty() {
        return Ok(FixStructure::Empty);
    }
    let (sub, old) = image.induced(&fix)?;
    let components: Vec<Vec<usize>> = sub
        .connected_components()
        .into_iter()
        .map(|c| c.into_iter().map(|i| old[i]).collect())
        .collect();
    if components.len() == 1 {
        return Ok(FixStructure::Connected);
    }
    let antipodal_pair = match cycle_order(image) {
        None => None,
        Some(order) => {
            let n = order.len();
            let pos = |v: usize| order.iter().position(|&w| w == v).expect("on cycle");
            let pair: Vec<usize> = fix.iter().copied().collect();
            let opposite = n % 2 == 0 && pair.len() == 2 && (pos(pair[0]) + n - pos(pair[1])) % n == n / 2;
            if !opposite {
                return Err(Error::Invariant(format!(
                    "fixed point set {pair:?} of a map on a {n}-cycle is disconnected but not an opposite pair"
                )));
            }
            Some((pair[0], pair[1]))
        }
    };
    Ok(FixStructure::Disconnected {
        components,
        antipodal_pair,
    })
}
