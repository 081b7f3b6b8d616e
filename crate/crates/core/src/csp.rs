//! Search for one continuous map inside per-point target domains, keeping
//! the domains arc consistent after every choice.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, Ordering};

use crate::bitset::Bitset;
use crate::error::Result;
use crate::image::DigitalImage;
use crate::search::Budget;

/// Prunes targets with no compatible target at some neighbor, until stable.
/// Returns false if a domain empties.
pub(crate) fn make_consistent(image: &DigitalImage, domains: &mut [Bitset], seeds: impl IntoIterator<Item = usize>) -> bool {
    let n = image.len();
    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    for v in seeds {
        if !queued[v] {
            queued[v] = true;
            queue.push_back(v);
        }
    }
    let closed = image.closed_rows();
    while let Some(w) = queue.pop_front() {
        queued[w] = false;
        // targets reachable from D(w) in one step
        let mut reach = Bitset::new(n);
        for b in domains[w].iter() {
            reach.union_with(&closed[b]);
        }
        for z in image.neighbors(w) {
            if domains[z].is_subset(&reach) {
                continue;
            }
            domains[z].intersect_with(&reach);
            if domains[z].is_empty() {
                return false;
            }
            if !queued[z] {
                queued[z] = true;
                queue.push_back(z);
            }
        }
    }
    true
}

/// Settings shared by one solver run.
pub(crate) struct Solver<'s> {
    pub prefer: Option<&'s [usize]>,
    pub budget: &'s Budget,
    /// When set, the search gives up and reports no map.
    pub cancel: Option<&'s AtomicBool>,
}

/// A continuous map `g` with `g(v)` in `domains[v]` for every `v`, trying
/// `prefer[v]` first at each choice. Each choice is charged to the budget.
pub(crate) fn find_map(image: &DigitalImage, mut domains: Vec<Bitset>, s: &Solver<'_>) -> Result<Option<Vec<usize>>> {
    let n = image.len();
    if domains.iter().any(Bitset::is_empty) || !make_consistent(image, &mut domains, 0..n) {
        return Ok(None);
    }
    solve(image, domains, s)
}

fn solve(image: &DigitalImage, domains: Vec<Bitset>, s: &Solver<'_>) -> Result<Option<Vec<usize>>> {
    if s.cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
        return Ok(None);
    }
    let open = (0..domains.len())
        .filter(|&v| domains[v].count() > 1)
        .min_by_key(|&v| (domains[v].count(), v));
    let Some(v) = open else {
        // singletons that are pairwise consistent along every edge
        return Ok(Some(domains.iter().map(|d| d.iter().next().expect("nonempty")).collect()));
    };
    let first = s.prefer.map(|p| p[v]).filter(|&t| domains[v].contains(t));
    let order = first.into_iter().chain(domains[v].iter().filter(|&t| Some(t) != first));
    for t in order {
        s.budget.charge(1)?;
        let mut next = domains.clone();
        next[v] = Bitset::from_indices(image.len(), [t]);
        if make_consistent(image, &mut next, [v]) {
            if let Some(found) = solve(image, next, s)? {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}
