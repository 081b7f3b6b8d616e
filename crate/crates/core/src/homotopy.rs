//! Homotopy of self-maps, computed on the graph whose vertices are the
//! continuous self-maps and whose edges join maps that are pointwise
//! adjacent-or-equal (one-step homotopies).

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use crate::bitset::Bitset;
use crate::csp::{find_map, Solver};
use crate::error::{Error, Result};
use crate::image::DigitalImage;
use crate::search::{Budget, Flow, Plan, Search, Visitor};
use crate::selfmap::{same_image, targets_continuous, SelfMap};
use crate::spectrum::{all_continuous_selfmaps, SearchOptions, Spectrum, DEFAULT_NODE_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomotopyOptions {
    /// Node budget for each neighbor search (and for the map census in
    /// [`homotopy_classes`]).
    pub node_budget: u64,
    /// Stop exploring a class once it holds more maps than this.
    pub max_maps: usize,
    /// Members are returned only for classes up to this size.
    pub retain_members: usize,
}

impl Default for HomotopyOptions {
    fn default() -> Self {
        HomotopyOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            max_maps: 10_000_000,
            retain_members: 1_000_000,
        }
    }
}

/// Maps `f ⟷= g` pointwise; continuity is not checked here.
fn pointwise_close(image: &DigitalImage, f: &[usize], g: &[usize]) -> bool {
    f.iter().zip(g).all(|(&a, &b)| image.adjacent_or_equal(a, b))
}

/// True iff `f` and `g` are continuous and `f(x) ⟷= g(x)` for every `x`.
pub fn one_step_homotopic(f: &SelfMap<'_>, g: &SelfMap<'_>) -> Result<bool> {
    if !same_image(f.image(), g.image()) {
        return Err(Error::ImageMismatch);
    }
    Ok(f.is_continuous() && g.is_continuous() && pointwise_close(f.image(), f.targets(), g.targets()))
}

struct Gather {
    maps: Vec<Vec<usize>>,
}

impl Visitor for Gather {
    fn complete(&mut self, targets: &[usize]) -> Flow {
        self.maps.push(targets.to_vec());
        Flow::Continue
    }
}

fn neighbor_domain(image: &DigitalImage, f: &[usize]) -> Vec<Bitset> {
    f.iter().map(|&t| image.closed_row(t).clone()).collect()
}

/// All continuous `g` with `g(x) ⟷= f(x)` for every `x`, including `f`, in search order.
fn neighbors_of(image: &DigitalImage, plan: &Plan, f: &[usize], node_budget: u64) -> Result<Vec<Vec<usize>>> {
    let domain = neighbor_domain(image, f);
    let search = Search {
        domain: Some(&domain),
        ..Search::new(image, plan)
    };
    let mut g = Gather { maps: Vec::new() };
    search.run(None, &mut g, Some(&Budget::new(node_budget)))?;
    Ok(g.maps)
}

/// The one-step neighbors of a continuous map (every continuous map
/// pointwise adjacent-or-equal to it, the map itself included).
pub fn one_step_neighbors<'a>(f: &SelfMap<'a>, opts: &HomotopyOptions) -> Result<Vec<SelfMap<'a>>> {
    let image = f.image();
    let plan = Plan::bfs(image, 0);
    let maps = neighbors_of(image, &plan, f.targets(), opts.node_budget)?;
    Ok(maps.into_iter().map(|t| SelfMap::new_unchecked(image, t)).collect())
}

/// A homotopy class, possibly only partly explored.
#[derive(Clone, Debug)]
pub struct HomotopyClass<'a> {
    /// Lexicographically least member found.
    pub representative: SelfMap<'a>,
    /// Sorted members, when the class is complete and small enough to keep.
    pub members: Option<Vec<SelfMap<'a>>>,
    /// Number of members found.
    pub size: usize,
    /// `#Fix(g)` over the members found; equals `S(f)` when complete.
    pub fix_counts: Spectrum,
    pub complete: bool,
}

impl HomotopyClass<'_> {
    /// `M(f)`, known only for a complete class.
    pub fn min_fixed(&self) -> Option<usize> {
        self.complete.then(|| self.fix_counts.min()).flatten()
    }

    /// `X(f)`, known only for a complete class.
    pub fn max_fixed(&self) -> Option<usize> {
        self.complete.then(|| self.fix_counts.max()).flatten()
    }

    pub fn contains(&self, g: &SelfMap<'_>) -> Option<bool> {
        self.members
            .as_ref()
            .map(|m| m.binary_search_by(|h| h.targets().cmp(g.targets())).is_ok())
    }
}

fn fix_count(targets: &[usize]) -> usize {
    targets.iter().enumerate().filter(|(i, &t)| *i == t).count()
}

/// Breadth-first exploration of the one-step map graph from `start`.
struct Exploration {
    maps: Vec<Vec<usize>>,
    parent: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
    complete: bool,
    /// Position of `goal` once reached.
    hit: Option<usize>,
}

/// Maps expanded per parallel round, which bounds the neighbor lists held at once.
const EXPLORE_CHUNK: usize = 256;

fn explore(image: &DigitalImage, start: &[usize], goal: Option<&[usize]>, opts: &HomotopyOptions) -> Exploration {
    let plan = Plan::bfs(image, 0);
    let mut ex = Exploration {
        maps: vec![start.to_vec()],
        parent: vec![0],
        index: HashMap::from([(start.to_vec(), 0)]),
        complete: true,
        hit: None,
    };
    if goal == Some(start) {
        ex.hit = Some(0);
        return ex;
    }
    let mut layer = 0..1;
    while !layer.is_empty() {
        let next_start = ex.maps.len();
        let mut chunk_start = layer.start;
        while chunk_start < layer.end {
            let chunk = chunk_start..(chunk_start + EXPLORE_CHUNK).min(layer.end);
            // maps already indexed are dropped in parallel; the index is
            // only mutated during the sequential merge below
            let found: Vec<Result<Vec<Vec<usize>>>> = ex.maps[chunk.clone()]
                .par_iter()
                .map(|f| {
                    neighbors_of(image, &plan, f, opts.node_budget)
                        .map(|nbrs| nbrs.into_iter().filter(|g| !ex.index.contains_key(g)).collect())
                })
                .collect();
            for (offset, nbrs) in found.into_iter().enumerate() {
                let Ok(nbrs) = nbrs else {
                    ex.complete = false;
                    return ex;
                };
                for g in nbrs {
                    if ex.index.contains_key(&g) {
                        continue;
                    }
                    let id = ex.maps.len();
                    if goal == Some(g.as_slice()) {
                        ex.hit = Some(id);
                    }
                    ex.index.insert(g.clone(), id);
                    ex.maps.push(g);
                    ex.parent.push(chunk.start + offset);
                    if ex.hit.is_some() || ex.maps.len() > opts.max_maps {
                        // stopped early, so the class is not fully explored
                        ex.complete = false;
                        return ex;
                    }
                }
            }
            chunk_start = chunk.end;
        }
        layer = next_start..ex.maps.len();
    }
    ex
}

fn class_from<'a>(image: &'a DigitalImage, maps: Vec<Vec<usize>>, complete: bool, opts: &HomotopyOptions) -> HomotopyClass<'a> {
    let fix_counts: Spectrum = maps.iter().map(|m| fix_count(m)).collect();
    let size = maps.len();
    let representative = maps.iter().min().cloned().expect("class is nonempty");
    let members = (complete && size <= opts.retain_members).then(|| {
        let mut sorted = maps;
        sorted.sort();
        sorted.into_iter().map(|t| SelfMap::new_unchecked(image, t)).collect()
    });
    HomotopyClass {
        representative: SelfMap::new_unchecked(image, representative),
        members,
        size,
        fix_counts,
        complete,
    }
}

/// The class of a continuous map `f` and its spectrum `S(f)`.
pub fn homotopy_class<'a>(f: &SelfMap<'a>, opts: &HomotopyOptions) -> Result<HomotopyClass<'a>> {
    if !f.is_continuous() {
        return Err(Error::Precondition("map is not continuous".into()));
    }
    let image = f.image();
    let ex = explore(image, f.targets(), None, opts);
    Ok(class_from(image, ex.maps, ex.complete, opts))
}

/// `S(f)` computed with default options; fails unless the class is fully explored.
pub fn homotopy_spectrum(f: &SelfMap<'_>) -> Result<Spectrum> {
    let opts = HomotopyOptions::default();
    let class = homotopy_class(f, &opts)?;
    if class.complete {
        Ok(class.fix_counts)
    } else {
        Err(Error::BudgetExceeded {
            budget: opts.max_maps as u64,
        })
    }
}

/// True iff no continuous map other than `f` is one step from `f`, which
/// makes `f` the only member of its class.
///
/// Such a map must move some `x` to a neighbor of `f(x)`, so one search per
/// point pins that move and keeps the remaining domains arc consistent. Each
/// search has its own node budget; a map found anywhere settles the answer
/// even if another search ran out.
pub fn is_rigid_map(f: &SelfMap<'_>, opts: &HomotopyOptions) -> Result<bool> {
    if !f.is_continuous() {
        return Err(Error::Precondition("map is not continuous".into()));
    }
    let image = f.image();
    let domain = neighbor_domain(image, f.targets());
    let found = AtomicBool::new(false);
    let outcomes: Vec<Result<bool>> = (0..image.len())
        .into_par_iter()
        .map(|x| {
            let moved = moves_point(image, f.targets(), &domain, x, opts.node_budget, &found);
            if matches!(moved, Ok(true)) {
                found.store(true, Ordering::Relaxed);
            }
            moved
        })
        .collect();
    if found.load(Ordering::Relaxed) {
        return Ok(false);
    }
    // nothing was cancelled, so every search ran to its end
    outcomes.into_iter().find(Result::is_err).unwrap_or(Ok(false)).map(|_| true)
}

/// Whether a continuous `g` one step from `f` has `g(x) != f(x)`.
fn moves_point(
    image: &DigitalImage,
    f: &[usize],
    domain: &[Bitset],
    x: usize,
    node_budget: u64,
    cancel: &AtomicBool,
) -> Result<bool> {
    let budget = Budget::new(node_budget);
    let solver = Solver {
        prefer: Some(f),
        budget: &budget,
        cancel: Some(cancel),
    };
    for y in image.neighbors(f[x]) {
        let mut d = domain.to_vec();
        d[x] = Bitset::from_indices(image.len(), [y]);
        if find_map(image, d, &solver)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Rigidity of the identity map.
pub fn is_rigid_image(image: &DigitalImage) -> Result<bool> {
    is_rigid_map(&SelfMap::identity(image), &HomotopyOptions::default())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Every homotopy class of self-maps of `image`, sorted by representative.
/// Fails if the image has more continuous self-maps than `opts.max_maps`.
pub fn homotopy_classes<'a>(image: &'a DigitalImage, opts: &HomotopyOptions) -> Result<Vec<HomotopyClass<'a>>> {
    let (mut maps, _) = all_continuous_selfmaps(
        image,
        &SearchOptions {
            node_budget: opts.node_budget,
        },
    )?;
    if maps.len() > opts.max_maps {
        return Err(Error::BudgetExceeded {
            budget: opts.max_maps as u64,
        });
    }
    maps.sort();
    let index: HashMap<&[usize], usize> = maps.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let plan = Plan::bfs(image, 0);
    let mut uf = UnionFind((0..maps.len()).collect());
    for start in (0..maps.len()).step_by(EXPLORE_CHUNK) {
        let chunk = start..(start + EXPLORE_CHUNK).min(maps.len());
        let links: Vec<Vec<usize>> = maps[chunk]
            .par_iter()
            .map(|f| {
                neighbors_of(image, &plan, f, opts.node_budget)
                    .map(|nbrs| nbrs.iter().map(|g| index[g.as_slice()]).collect())
            })
            .collect::<Result<_>>()?;
        for (offset, nbrs) in links.iter().enumerate() {
            for &j in nbrs {
                uf.union(start + offset, j);
            }
        }
    }
    // roots are the least index of each class, and maps are sorted, so
    // grouping by root in index order yields classes ordered by representative
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..maps.len() {
        let r = uf.find(i);
        let s = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[s].push(i);
    }
    drop(index);
    let mut maps: Vec<Option<Vec<usize>>> = maps.into_iter().map(Some).collect();
    Ok(groups
        .into_iter()
        .map(|g| {
            let members = g.iter().map(|&i| maps[i].take().expect("each map in one class")).collect();
            class_from(image, members, true, opts)
        })
        .collect())
}

/// A chain of continuous maps, consecutive maps pointwise adjacent-or-equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyPath<'a> {
    pub steps: Vec<SelfMap<'a>>,
}

impl<'a> HomotopyPath<'a> {
    pub fn start(&self) -> Option<&SelfMap<'a>> {
        self.steps.first()
    }

    pub fn end(&self) -> Option<&SelfMap<'a>> {
        self.steps.last()
    }
}

/// Checks that the path is nonempty, lives on one image, every step is
/// continuous, and consecutive steps are pointwise adjacent-or-equal.
pub fn verify_homotopy_path(p: &HomotopyPath<'_>) -> bool {
    let Some(first) = p.steps.first() else {
        return false;
    };
    let image = first.image();
    p.steps
        .iter()
        .all(|s| same_image(s.image(), image) && targets_continuous(image, s.targets()))
        && p.steps
            .windows(2)
            .all(|w| pointwise_close(image, w[0].targets(), w[1].targets()))
}

/// Result of searching for a homotopy between two maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathSearch<'a> {
    Found(HomotopyPath<'a>),
    /// The class of the start map was fully explored without meeting the goal.
    NotHomotopic,
    /// A budget ran out first.
    Inconclusive,
}

/// A shortest homotopy from `f` to `g`, by breadth-first search from `f`.
pub fn find_homotopy_path<'a>(f: &SelfMap<'a>, g: &SelfMap<'a>, opts: &HomotopyOptions) -> Result<PathSearch<'a>> {
    if !same_image(f.image(), g.image()) {
        return Err(Error::ImageMismatch);
    }
    if !f.is_continuous() || !g.is_continuous() {
        return Err(Error::Precondition("map is not continuous".into()));
    }
    let image = f.image();
    let ex = explore(image, f.targets(), Some(g.targets()), opts);
    let Some(mut at) = ex.hit else {
        return Ok(if ex.complete {
            PathSearch::NotHomotopic
        } else {
            PathSearch::Inconclusive
        });
    };
    let mut chain = vec![at];
    while at != 0 {
        at = ex.parent[at];
        chain.push(at);
    }
    chain.reverse();
    let steps = chain
        .into_iter()
        .map(|i| SelfMap::new_unchecked(image, ex.maps[i].clone()))
        .collect();
    Ok(PathSearch::Found(HomotopyPath { steps }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{cycle, fig_sexample, fig_xexample, interval, wedge_cycles_8};
    use crate::selfmap::{cycle_map, CycleMapKind};

    fn spectrum_of(f: &SelfMap<'_>) -> Spectrum {
        homotopy_spectrum(f).unwrap()
    }

    #[test]
    fn one_step_examples() {
        let c5 = cycle(5).unwrap();
        let id = SelfMap::identity(&c5);
        let r1 = cycle_map(&c5, CycleMapKind::Rotation(1)).unwrap();
        let l = cycle_map(&c5, CycleMapKind::FlipComposed(0)).unwrap();
        assert!(one_step_homotopic(&id, &r1).unwrap());
        assert!(!one_step_homotopic(&id, &l).unwrap());
        assert!(one_step_homotopic(&l, &l).unwrap());
        let other = interval(0, 4).unwrap();
        assert_eq!(
            one_step_homotopic(&id, &SelfMap::identity(&other)).unwrap_err(),
            Error::ImageMismatch
        );
    }

    #[test]
    fn cycle_spectra() {
        let c7 = cycle(7).unwrap();
        let opts = HomotopyOptions::default();
        let class = homotopy_class(&SelfMap::identity(&c7), &opts).unwrap();
        assert!(class.complete);
        assert_eq!(class.fix_counts, Spectrum::from([0, 7]));
        assert_eq!(class.size, 7);
        assert_eq!((class.min_fixed(), class.max_fixed()), (Some(0), Some(7)));
        for d in 0..7 {
            let r = cycle_map(&c7, CycleMapKind::Rotation(d)).unwrap();
            assert_eq!(class.contains(&r), Some(true));
        }
        let c = SelfMap::constant(&c7, 0).unwrap();
        assert_eq!(spectrum_of(&c), Spectrum::range(0, 4));
        let c6 = cycle(6).unwrap();
        let l = cycle_map(&c6, CycleMapKind::FlipComposed(0)).unwrap();
        assert_eq!(spectrum_of(&l), Spectrum::from([0, 2]));
    }

    #[test]
    fn class_census() {
        let opts = HomotopyOptions::default();
        let c7 = cycle(7).unwrap();
        let classes = homotopy_classes(&c7, &opts).unwrap();
        assert_eq!(classes.len(), 3);
        let union = classes.iter().fold(Spectrum::new(), |acc, c| acc.union(&c.fix_counts));
        assert_eq!(union, Spectrum::from([0, 1, 2, 3, 4, 7]));
        assert_eq!(homotopy_classes(&cycle(4).unwrap(), &opts).unwrap().len(), 1);
        assert_eq!(homotopy_classes(&cycle(1).unwrap(), &opts).unwrap().len(), 1);
    }

    #[test]
    fn rigidity() {
        assert!(is_rigid_image(&wedge_cycles_8()).unwrap());
        assert!(is_rigid_image(&fig_xexample()).unwrap());
        assert!(is_rigid_image(&fig_sexample()).unwrap());
        assert!(!is_rigid_image(&interval(0, 4).unwrap()).unwrap());
        let c5 = cycle(5).unwrap();
        assert!(!is_rigid_map(&SelfMap::identity(&c5), &HomotopyOptions::default()).unwrap());

        let x = fig_xexample();
        let rot = SelfMap::from_point_fn(&x, |p| vec![6 - p.0[0], 2 - p.0[1]].into()).unwrap();
        assert!(is_rigid_map(&rot, &HomotopyOptions::default()).unwrap());
        assert_eq!(rot.fix_count(), 0);

        let s = fig_sexample();
        let refl = SelfMap::from_point_fn(&s, |p| vec![p.0[0], 2 - p.0[1]].into()).unwrap();
        assert!(is_rigid_map(&refl, &HomotopyOptions::default()).unwrap());
        assert_eq!(refl.fix_count(), 3);
        assert_eq!(spectrum_of(&refl), Spectrum::from([3]));
    }

    #[test]
    fn paths() {
        let c5 = cycle(5).unwrap();
        let r = |d| cycle_map(&c5, CycleMapKind::Rotation(d)).unwrap();
        let p = HomotopyPath {
            steps: vec![r(0), r(1), r(2)],
        };
        assert!(verify_homotopy_path(&p));
        let bad = HomotopyPath {
            steps: vec![r(0), cycle_map(&c5, CycleMapKind::FlipComposed(0)).unwrap()],
        };
        assert!(!verify_homotopy_path(&bad));
        assert!(!verify_homotopy_path(&HomotopyPath { steps: vec![] }));
        let discontinuous = SelfMap::new(&c5, vec![0, 2, 2, 3, 4]).unwrap();
        assert!(!verify_homotopy_path(&HomotopyPath {
            steps: vec![discontinuous]
        }));

        let opts = HomotopyOptions::default();
        match find_homotopy_path(&r(0), &r(2), &opts).unwrap() {
            PathSearch::Found(path) => {
                assert!(verify_homotopy_path(&path));
                assert_eq!(path.steps.len(), 3);
                assert_eq!(path.end(), Some(&r(2)));
            }
            other => panic!("{other:?}"),
        }
        let l = cycle_map(&c5, CycleMapKind::FlipComposed(0)).unwrap();
        assert_eq!(find_homotopy_path(&r(0), &l, &opts).unwrap(), PathSearch::NotHomotopic);
        let tight = HomotopyOptions { max_maps: 2, ..opts };
        let c = SelfMap::constant(&c5, 0).unwrap();
        let far = SelfMap::new(&c5, vec![0, 1, 2, 2, 1]).unwrap();
        assert_eq!(find_homotopy_path(&c, &far, &tight).unwrap(), PathSearch::Inconclusive);
    }
}
