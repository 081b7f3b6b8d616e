//! Enumeration of continuous self-maps and the fixed point spectrum `F(X)`,
//! pull indices, and the `#X - 1` membership criterion.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::image::DigitalImage;
use crate::search::{Budget, Flow, Outcome, Plan, Search, Visitor};
use crate::selfmap::SelfMap;

/// Default node budget for exhaustive searches.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// A sorted set of fixed-point counts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Spectrum(BTreeSet<usize>);

impl Spectrum {
    pub fn new() -> Self {
        Spectrum(BTreeSet::new())
    }

    /// `{lo, lo+1, ..., hi}`.
    pub fn range(lo: usize, hi: usize) -> Self {
        Spectrum((lo..=hi).collect())
    }

    pub fn insert(&mut self, v: usize) {
        self.0.insert(v);
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn values(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn is_subset(&self, other: &Spectrum) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &Spectrum) -> Spectrum {
        Spectrum(self.0.union(&other.0).copied().collect())
    }
}

impl FromIterator<usize> for Spectrum {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Spectrum(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[usize; N]> for Spectrum {
    fn from(v: [usize; N]) -> Self {
        v.into_iter().collect()
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumOp {
    /// Sum-set.
    Oplus,
    /// Product-set.
    Otimes,
}

pub fn combine_spectra(a: &Spectrum, b: &Spectrum, op: SpectrumOp) -> Spectrum {
    let mut out = Spectrum::new();
    for x in a.iter() {
        for y in b.iter() {
            out.insert(match op {
                SpectrumOp::Oplus => x + y,
                SpectrumOp::Otimes => x * y,
            });
        }
    }
    out
}

/// Folds [`combine_spectra`] over a list; the empty fold is `{0}` for ⊕ and `{1}` for ⊗.
pub fn combine_all<'s>(spectra: impl IntoIterator<Item = &'s Spectrum>, op: SpectrumOp) -> Spectrum {
    let unit = match op {
        SpectrumOp::Oplus => Spectrum::from([0]),
        SpectrumOp::Otimes => Spectrum::from([1]),
    };
    spectra
        .into_iter()
        .fold(unit, |acc, s| combine_spectra(&acc, s, op))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    pub maps_enumerated: u64,
    pub nodes_visited: u64,
    pub elapsed: Duration,
    pub truncated: bool,
}

impl EnumerationStats {
    fn from_outcome(out: Outcome, started: Instant, truncated: bool) -> Self {
        EnumerationStats {
            maps_enumerated: out.maps,
            // the root counts as a visited node
            nodes_visited: out.nodes + 1,
            elapsed: started.elapsed(),
            truncated,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub node_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

struct Collect<F> {
    visit: F,
    limit: Option<u64>,
    seen: u64,
}

impl<F: FnMut(&[usize])> Visitor for Collect<F> {
    fn complete(&mut self, targets: &[usize]) -> Flow {
        (self.visit)(targets);
        self.seen += 1;
        match self.limit {
            Some(l) if self.seen >= l => Flow::Stop,
            _ => Flow::Continue,
        }
    }
}

/// Visits every continuous self-map exactly once (sequentially, in search
/// order) and stops after `limit` maps, if given.
pub fn enumerate_continuous_selfmaps<F: FnMut(&[usize])>(
    image: &DigitalImage,
    limit: Option<u64>,
    visit: F,
) -> EnumerationStats {
    let started = Instant::now();
    let plan = Plan::bfs(image, 0);
    let search = Search::new(image, &plan);
    let mut c = Collect {
        visit,
        limit,
        seen: 0,
    };
    if limit == Some(0) {
        return EnumerationStats::from_outcome(Outcome::default(), started, true);
    }
    let out = search.run(None, &mut c, None).expect("no budget");
    EnumerationStats::from_outcome(out, started, out.stopped)
}

/// Collects all continuous self-maps in parallel. The output order is the
/// sequential search order.
pub fn all_continuous_selfmaps(
    image: &DigitalImage,
    opts: &SearchOptions,
) -> Result<(Vec<Vec<usize>>, EnumerationStats)> {
    struct Gather(Vec<Vec<usize>>);
    impl Visitor for Gather {
        fn complete(&mut self, targets: &[usize]) -> Flow {
            self.0.push(targets.to_vec());
            Flow::Continue
        }
    }
    let started = Instant::now();
    let plan = Plan::bfs(image, 0);
    let search = Search::new(image, &plan);
    let budget = Budget::new(opts.node_budget);
    let branches = search.run_branches(|_| Gather(Vec::new()), Some(&budget))?;
    let mut maps = Vec::new();
    let mut out = Outcome::default();
    for (g, o) in branches {
        maps.extend(g.0);
        out = out.merge(o);
    }
    Ok((maps, EnumerationStats::from_outcome(out, started, false)))
}

/// Number of continuous self-maps, counted in parallel.
pub fn count_continuous_selfmaps(image: &DigitalImage, opts: &SearchOptions) -> Result<u64> {
    struct Count;
    impl Visitor for Count {
        fn complete(&mut self, _: &[usize]) -> Flow {
            Flow::Continue
        }
    }
    let plan = Plan::bfs(image, 0);
    let search = Search::new(image, &plan);
    let budget = Budget::new(opts.node_budget);
    Ok(search
        .run_branches(|_| Count, Some(&budget))?
        .iter()
        .map(|(_, o)| o.maps)
        .sum())
}

/// Tracks fixed points of the partial map and prunes subtrees whose
/// reachable fixed-point counts are all already known.
struct SpectrumVisitor {
    n: usize,
    fixed: usize,
    found: Bitset,
}

impl Visitor for SpectrumVisitor {
    #[inline]
    fn accept(&mut self, depth: usize, v: usize, t: usize) -> bool {
        let fixed = self.fixed + usize::from(v == t);
        let remaining = self.n - depth - 1;
        if self.found.all_in_range(fixed, fixed + remaining) {
            return false;
        }
        self.fixed = fixed;
        true
    }

    #[inline]
    fn retract(&mut self, _depth: usize, v: usize, t: usize) {
        self.fixed -= usize::from(v == t);
    }

    fn complete(&mut self, _targets: &[usize]) -> Flow {
        self.found.insert(self.fixed);
        Flow::Continue
    }
}

/// `F(X)` with the default node budget.
pub fn fixed_point_spectrum(image: &DigitalImage) -> Result<(Spectrum, EnumerationStats)> {
    fixed_point_spectrum_with(image, &SearchOptions::default())
}

/// `F(X)`: the exact set of fixed-point counts of continuous self-maps.
///
/// The search branches on the target of the first vertex; each branch runs
/// independently (in parallel) with its own record of counts found so far,
/// so both the spectrum and the statistics are independent of scheduling.
/// Exceeding the node budget is an error, never a partial answer.
pub fn fixed_point_spectrum_with(
    image: &DigitalImage,
    opts: &SearchOptions,
) -> Result<(Spectrum, EnumerationStats)> {
    let started = Instant::now();
    let n = image.len();
    let plan = Plan::bfs(image, 0);
    let identity: Vec<usize> = (0..n).collect();
    let search = Search {
        prefer: Some(&identity),
        ..Search::new(image, &plan)
    };
    let budget = Budget::new(opts.node_budget);
    let branches = search.run_branches(
        |_| SpectrumVisitor {
            n,
            fixed: 0,
            found: Bitset::new(n + 1),
        },
        Some(&budget),
    )?;
    let mut spectrum = Spectrum::new();
    let mut out = Outcome::default();
    for (v, o) in branches {
        spectrum.0.extend(v.found.iter());
        out = out.merge(o);
    }
    Ok((spectrum, EnumerationStats::from_outcome(out, started, false)))
}

struct PullVisitor {
    moved: usize,
    best: usize,
    witness: Option<Vec<usize>>,
}

impl Visitor for PullVisitor {
    #[inline]
    fn accept(&mut self, _depth: usize, v: usize, t: usize) -> bool {
        let moved = self.moved + usize::from(v != t);
        if moved >= self.best {
            return false;
        }
        self.moved = moved;
        true
    }

    #[inline]
    fn retract(&mut self, _depth: usize, v: usize, t: usize) {
        self.moved -= usize::from(v != t);
    }

    fn complete(&mut self, targets: &[usize]) -> Flow {
        self.best = self.moved;
        self.witness = Some(targets.to_vec());
        // one moved point is optimal
        if self.best == 1 {
            Flow::Stop
        } else {
            Flow::Continue
        }
    }
}

/// Pull index `P(x)` together with a continuous map attaining it.
pub fn pull_index_with<'a>(
    image: &'a DigitalImage,
    x: usize,
    opts: &SearchOptions,
) -> Result<(usize, SelfMap<'a>)> {
    image.check_index(x)?;
    let n = image.len();
    if n < 2 {
        return Err(Error::Precondition(
            "pull index is undefined: no continuous map moves the only point".into(),
        ));
    }
    let plan = Plan::bfs(image, x);
    let mut domain = vec![Bitset::full(n); n];
    domain[x].remove(x);
    let identity: Vec<usize> = (0..n).collect();
    let search = Search {
        domain: Some(&domain),
        prefer: Some(&identity),
        ..Search::new(image, &plan)
    };
    let mut v = PullVisitor {
        moved: 0,
        best: n + 1,
        witness: None,
    };
    search.run(None, &mut v, Some(&Budget::new(opts.node_budget)))?;
    let targets = v.witness.expect("a map moving x exists when #X > 1");
    Ok((v.best, SelfMap::new_unchecked(image, targets)))
}

/// `P(x)`: the fewest points moved by a continuous map that moves `x`.
pub fn pull_index(image: &DigitalImage, x: usize) -> Result<usize> {
    pull_index_with(image, x, &SearchOptions::default()).map(|(p, _)| p)
}

/// Pull indices of every point.
pub fn pull_indices(image: &DigitalImage, opts: &SearchOptions) -> Result<Vec<usize>> {
    use rayon::prelude::*;
    (0..image.len())
        .into_par_iter()
        .map(|x| pull_index_with(image, x, opts).map(|(p, _)| p))
        .collect()
}

/// The lexicographically least pair of distinct points with `N(x1) ⊆ N*(x2)`.
/// For connected images with more than one point such a pair exists exactly
/// when `#X - 1 ∈ F(X)`.
pub fn nminus1_criterion(image: &DigitalImage) -> Option<(usize, usize)> {
    let n = image.len();
    (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| a != b && image.open_row(a).is_subset(image.closed_row(b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{cube, cycle, fig_sexample, interval};

    #[test]
    fn enumeration_counts() {
        let c3 = cycle(3).unwrap();
        let stats = enumerate_continuous_selfmaps(&c3, None, |_| {});
        assert_eq!(stats.maps_enumerated, 27);
        assert!(!stats.truncated);
        assert!(stats.maps_enumerated <= stats.nodes_visited);
        let pt = cycle(1).unwrap();
        assert_eq!(enumerate_continuous_selfmaps(&pt, None, |_| {}).maps_enumerated, 1);
        let stats = enumerate_continuous_selfmaps(&c3, Some(5), |_| {});
        assert_eq!(stats.maps_enumerated, 5);
        assert!(stats.truncated);
    }

    #[test]
    fn spectra_of_examples() {
        let (s, _) = fixed_point_spectrum(&interval(1, 3).unwrap()).unwrap();
        assert_eq!(s, Spectrum::range(0, 3));
        let (s, _) = fixed_point_spectrum(&cycle(7).unwrap()).unwrap();
        assert_eq!(s, Spectrum::from([0, 1, 2, 3, 4, 7]));
        let (s, _) = fixed_point_spectrum(&cube()).unwrap();
        assert_eq!(s, Spectrum::from([0, 1, 2, 3, 4, 5, 6, 8]));
    }

    #[test]
    fn spectrum_budget_is_hard_error() {
        let opts = SearchOptions { node_budget: 50 };
        assert_eq!(
            fixed_point_spectrum_with(&cube(), &opts).unwrap_err(),
            Error::BudgetExceeded { budget: 50 }
        );
    }

    #[test]
    fn pull_examples() {
        let i = interval(1, 3).unwrap();
        assert_eq!(pull_index(&i, 1).unwrap(), 2);
        assert_eq!(pull_index(&i, 2).unwrap(), 1);
        assert_eq!(pull_index(&i, 0).unwrap(), 1);
        let (p, f) = pull_index_with(&i, 1, &SearchOptions::default()).unwrap();
        assert_eq!(f.moved().len(), p);
        assert!(f.is_continuous());
        assert!(pull_index(&cycle(1).unwrap(), 0).is_err());
        let s = fig_sexample();
        for x in 0..s.len() {
            assert!(pull_index(&s, x).unwrap() >= 3);
        }
    }

    #[test]
    fn criterion_examples() {
        assert_eq!(nminus1_criterion(&cycle(5).unwrap()), None);
        assert_eq!(nminus1_criterion(&cube()), None);
        assert_eq!(nminus1_criterion(&interval(1, 3).unwrap()), Some((0, 1)));
    }

    #[test]
    fn combinators() {
        let a = Spectrum::range(0, 3);
        assert_eq!(
            combine_spectra(&a, &a, SpectrumOp::Otimes),
            Spectrum::from([0, 1, 2, 3, 4, 6, 9])
        );
        assert_eq!(combine_spectra(&a, &Spectrum::from([0]), SpectrumOp::Oplus), a);
        let one = Spectrum::from([1]);
        assert_eq!(combine_spectra(&one, &one, SpectrumOp::Oplus), Spectrum::from([2]));
        assert_eq!(combine_all([&a, &a, &one], SpectrumOp::Otimes).max(), Some(9));
        assert_eq!(combine_all([], SpectrumOp::Oplus), Spectrum::from([0]));
        assert_eq!(Spectrum::from([2, 0]).to_string(), "{0,2}");
    }
}
