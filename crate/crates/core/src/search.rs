//! Backtracking over continuous self-maps.
//!
//! Vertices are assigned in a fixed plan order. The candidates for a vertex
//! are its domain intersected with `N*(f(u))` for every earlier-assigned
//! neighbor `u`, so continuity holds incrementally and complete maps never
//! need re-checking. With a BFS plan every vertex after the first in its
//! component has an assigned neighbor, bounding its candidates by the
//! maximum closed-neighborhood size.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::image::DigitalImage;

#[derive(Clone, Debug)]
pub(crate) struct Plan {
    pub order: Vec<usize>,
    /// For each position, the neighbors of `order[pos]` placed earlier.
    pub back: Vec<Vec<usize>>,
}

impl Plan {
    /// BFS from `root`, then BFS over the remaining components by smallest index.
    pub fn bfs(image: &DigitalImage, root: usize) -> Plan {
        let n = image.len();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let starts = std::iter::once(root).chain(0..n).filter(|&s| s < n);
        for s in starts {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let from = order.len();
            order.push(s);
            let mut i = from;
            while i < order.len() {
                let v = order[i];
                i += 1;
                for w in image.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        order.push(w);
                    }
                }
            }
        }
        Self::from_order(image, order)
    }

    pub fn index_order(image: &DigitalImage) -> Plan {
        Self::from_order(image, (0..image.len()).collect())
    }

    fn from_order(image: &DigitalImage, order: Vec<usize>) -> Plan {
        let mut pos = vec![usize::MAX; image.len()];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(p, &v)| image.neighbors(v).filter(|&u| pos[u] < p).collect())
            .collect();
        Plan { order, back }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flow {
    Continue,
    Stop,
}

pub(crate) trait Visitor {
    /// Called after `v ↦ t` is placed at `depth`. Returning `false` prunes the
    /// subtree; the visitor must then leave its state as it was.
    #[inline]
    fn accept(&mut self, _depth: usize, _v: usize, _t: usize) -> bool {
        true
    }

    /// Undo for an accepted assignment.
    #[inline]
    fn retract(&mut self, _depth: usize, _v: usize, _t: usize) {}

    fn complete(&mut self, targets: &[usize]) -> Flow;
}

/// Node budget shared by the workers of one computation.
pub(crate) struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
        }
    }

    pub fn charge(&self, nodes: u64) -> Result<()> {
        let total = self.used.fetch_add(nodes, Ordering::Relaxed) + nodes;
        if total > self.limit {
            Err(Error::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }
}

const FLUSH_EVERY: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Outcome {
    pub nodes: u64,
    pub maps: u64,
    pub stopped: bool,
}

impl Outcome {
    pub fn merge(self, other: Outcome) -> Outcome {
        Outcome {
            nodes: self.nodes + other.nodes,
            maps: self.maps + other.maps,
            stopped: self.stopped || other.stopped,
        }
    }
}

pub(crate) struct Search<'a> {
    pub image: &'a DigitalImage,
    pub plan: &'a Plan,
    /// Optional per-vertex restriction of the targets.
    pub domain: Option<&'a [Bitset]>,
    /// Try `v ↦ prefer[v]` before the other candidates.
    pub prefer: Option<&'a [usize]>,
}

struct Run<'r, 'a, V> {
    search: &'r Search<'a>,
    targets: Vec<usize>,
    scratch: Vec<Bitset>,
    full: Bitset,
    visitor: &'r mut V,
    budget: Option<&'r Budget>,
    pending: u64,
    out: Outcome,
}

impl<V: Visitor> Run<'_, '_, V> {
    fn candidates(&mut self, depth: usize) {
        let s = self.search;
        let v = s.plan.order[depth];
        let cand = &mut self.scratch[depth];
        match s.domain {
            Some(d) => cand.copy_from(&d[v]),
            None => cand.copy_from(&self.full),
        }
        let closed = s.image.closed_rows();
        for &u in &s.plan.back[depth] {
            cand.intersect_with(&closed[self.targets[u]]);
        }
    }

    fn node(&mut self) -> Result<()> {
        self.out.nodes += 1;
        self.pending += 1;
        if self.pending >= FLUSH_EVERY {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        let pending = std::mem::take(&mut self.pending);
        match self.budget {
            Some(b) if pending > 0 => b.charge(pending),
            _ => Ok(()),
        }
    }

    fn try_target(&mut self, depth: usize, v: usize, t: usize) -> Result<Flow> {
        self.targets[v] = t;
        self.node()?;
        if !self.visitor.accept(depth, v, t) {
            return Ok(Flow::Continue);
        }
        let flow = self.descend(depth + 1)?;
        self.visitor.retract(depth, v, t);
        Ok(flow)
    }

    fn descend(&mut self, depth: usize) -> Result<Flow> {
        let n = self.search.plan.order.len();
        if depth == n {
            self.out.maps += 1;
            return Ok(self.visitor.complete(&self.targets));
        }
        self.candidates(depth);
        let v = self.search.plan.order[depth];
        let cand = std::mem::replace(&mut self.scratch[depth], Bitset::new(0));
        let mut flow = Flow::Continue;
        let first = self.search.prefer.map(|p| p[v]).filter(|&t| cand.contains(t));
        if let Some(t) = first {
            flow = self.try_target(depth, v, t)?;
        }
        if flow == Flow::Continue {
            for t in cand.iter() {
                if Some(t) == first {
                    continue;
                }
                flow = self.try_target(depth, v, t)?;
                if flow == Flow::Stop {
                    break;
                }
            }
        }
        self.scratch[depth] = cand;
        Ok(flow)
    }
}

impl<'a> Search<'a> {
    pub fn new(image: &'a DigitalImage, plan: &'a Plan) -> Self {
        Search {
            image,
            plan,
            domain: None,
            prefer: None,
        }
    }

    /// Targets allowed for the first vertex of the plan, in search order.
    pub fn root_candidates(&self) -> Vec<usize> {
        let Some(&v) = self.plan.order.first() else {
            return Vec::new();
        };
        let all = Bitset::full(self.image.len());
        let cand = self.domain.map_or(&all, |d| &d[v]);
        let mut out: Vec<usize> = cand.iter().collect();
        if let Some(first) = self.prefer.map(|p| p[v]) {
            if let Some(p) = out.iter().position(|&t| t == first) {
                out.remove(p);
                out.insert(0, first);
            }
        }
        out
    }

    /// Depth-first search; `root_target` pins the first vertex of the plan.
    pub fn run<V: Visitor>(
        &self,
        root_target: Option<usize>,
        visitor: &mut V,
        budget: Option<&Budget>,
    ) -> Result<Outcome> {
        let n = self.image.len();
        let mut run = Run {
            search: self,
            targets: vec![usize::MAX; n],
            scratch: vec![Bitset::new(n); n],
            full: Bitset::full(n),
            visitor,
            budget,
            pending: 0,
            out: Outcome::default(),
        };
        let flow = match root_target {
            Some(t) if n > 0 => {
                let v = self.plan.order[0];
                run.try_target(0, v, t)?
            }
            _ => run.descend(0)?,
        };
        run.out.stopped = flow == Flow::Stop;
        run.flush()?;
        Ok(run.out)
    }

    /// Runs one independent search per root candidate in parallel. Results
    /// come back in root-candidate order regardless of scheduling.
    pub fn run_branches<V, F>(&self, make: F, budget: Option<&Budget>) -> Result<Vec<(V, Outcome)>>
    where
        V: Visitor + Send,
        F: Fn(usize) -> V + Sync,
    {
        if self.image.is_empty() {
            let mut v = make(0);
            let out = self.run(None, &mut v, budget)?;
            return Ok(vec![(v, out)]);
        }
        self.root_candidates()
            .into_par_iter()
            .map(|t| {
                let mut v = make(t);
                let out = self.run(Some(t), &mut v, budget)?;
                Ok((v, out))
            })
            .collect()
    }
}
