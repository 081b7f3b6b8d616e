//! Lasso certificates of rigidity.
//!
//! A lasso is an induced loop of length at least 5 together with an induced
//! path `r(0), ..., r(k)` ending on it at `r(k)`. The point `r(k-1)` stays off
//! the loop and is not adjacent to the two loop neighbors of `r(k)`; earlier
//! path points may touch the loop. If every ordered pair of adjacent points
//! starts a lasso without right angles, the image is rigid, and no maps are
//! enumerated to show it.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::DigitalImage;
use crate::spectrum::DEFAULT_NODE_BUDGET;

/// True iff `a ↔ b ↔ c` lie on a 4-cycle `a, b, c, d` of four distinct points.
pub fn right_angle(image: &DigitalImage, a: usize, b: usize, c: usize) -> Result<bool> {
    for v in [a, b, c] {
        image.check_index(v)?;
    }
    if a == c || !image.is_adjacent(a, b) || !image.is_adjacent(b, c) {
        return Err(Error::Precondition(format!(
            "({a},{b},{c}) is not a pair of consecutive edges"
        )));
    }
    Ok(corner(image, a, b, c))
}

fn corner(image: &DigitalImage, a: usize, b: usize, c: usize) -> bool {
    let mut common = image.open_row(a).clone();
    common.intersect_with(image.open_row(c));
    common.iter().any(|d| d != b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    /// The loop `p(x_0), ..., p(x_{m-1})`, starting where the path ends.
    pub loop_: Vec<usize>,
    /// The path `r(0), ..., r(k)`.
    pub path: Vec<usize>,
}

impl Lasso {
    /// Checks every lasso condition, the absence of right angles included,
    /// directly against the image.
    pub fn verify(&self, image: &DigitalImage) -> bool {
        let (p, r) = (&self.loop_, &self.path);
        let n = image.len();
        let m = p.len();
        if m < 5 || r.len() < 2 || p.iter().chain(r).any(|&v| v >= n) {
            return false;
        }
        let k = r.len() - 1;
        if r[k] != p[0] || !induced_cycle(image, p) || !induced_path(image, r) {
            return false;
        }
        let tail = r[k - 1];
        if p.contains(&tail) {
            return false;
        }
        if image.is_adjacent(p[1], tail) || image.is_adjacent(p[m - 1], tail) {
            return false;
        }
        let loop_corners = (0..m).any(|i| corner(image, p[(i + m - 1) % m], p[i], p[(i + 1) % m]));
        let path_corners = r.windows(3).any(|w| corner(image, w[0], w[1], w[2]));
        let junction = corner(image, tail, p[0], p[1]) || corner(image, tail, p[0], p[m - 1]);
        !(loop_corners || path_corners || junction)
    }

    pub fn start(&self) -> (usize, usize) {
        (self.path[0], self.path[1])
    }
}

fn distinct(vs: &[usize]) -> bool {
    let mut s = vs.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

/// Adjacent exactly when consecutive.
fn induced_path(image: &DigitalImage, r: &[usize]) -> bool {
    distinct(r)
        && (0..r.len()).all(|i| (i + 1..r.len()).all(|j| image.is_adjacent(r[i], r[j]) == (j == i + 1)))
}

/// Adjacent exactly when cyclically consecutive.
fn induced_cycle(image: &DigitalImage, p: &[usize]) -> bool {
    let m = p.len();
    distinct(p)
        && (0..m).all(|i| {
            (i + 1..m).all(|j| image.is_adjacent(p[i], p[j]) == (j == i + 1 || (i == 0 && j == m - 1)))
        })
}

struct Finder<'a> {
    image: &'a DigitalImage,
    max_loop: usize,
    budget: u64,
    nodes: u64,
    path: Vec<usize>,
    on_path: Vec<bool>,
    cycle: Vec<usize>,
    on_cycle: Vec<bool>,
}

impl Finder<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(Error::BudgetExceeded { budget: self.budget })
        } else {
            Ok(())
        }
    }

    /// Extends the induced path depth-first, trying a loop at every end point.
    fn paths(&mut self) -> Result<Option<Lasso>> {
        self.tick()?;
        if let Some(l) = self.loop_at_end()? {
            return Ok(Some(l));
        }
        let k = self.path.len() - 1;
        let end = self.path[k];
        let nbrs: Vec<usize> = self.image.neighbors(end).collect();
        for w in nbrs {
            if self.on_path[w] || self.path[..k].iter().any(|&u| self.image.is_adjacent(u, w)) {
                continue;
            }
            if k >= 1 && corner(self.image, self.path[k - 1], end, w) {
                continue;
            }
            self.path.push(w);
            self.on_path[w] = true;
            let found = self.paths()?;
            self.on_path[w] = false;
            self.path.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn loop_at_end(&mut self) -> Result<Option<Lasso>> {
        let k = self.path.len() - 1;
        if k == 0 {
            return Ok(None);
        }
        let anchor = self.path[k];
        self.cycle.clear();
        self.cycle.push(anchor);
        self.on_cycle[anchor] = true;
        let found = self.grow_loop();
        self.on_cycle[anchor] = false;
        found
    }

    fn grow_loop(&mut self) -> Result<Option<Lasso>> {
        self.tick()?;
        let g = self.image;
        let i = self.cycle.len();
        if i >= self.max_loop {
            return Ok(None);
        }
        let k = self.path.len() - 1;
        let tail = self.path[k - 1];
        let anchor = self.cycle[0];
        let last = self.cycle[i - 1];
        let nbrs: Vec<usize> = g.neighbors(last).collect();
        for w in nbrs {
            if self.on_cycle[w] || w == tail {
                continue;
            }
            // no chords to earlier loop points other than a closing edge to the anchor
            if i >= 3 && self.cycle[1..i - 1].iter().any(|&u| g.is_adjacent(u, w)) {
                continue;
            }
            let closes = i >= 2 && g.is_adjacent(anchor, w);
            if i == 1 && (g.is_adjacent(w, tail) || corner(g, tail, anchor, w)) {
                continue;
            }
            if i >= 2 && corner(g, self.cycle[i - 2], last, w) {
                continue;
            }
            if closes {
                let m = i + 1;
                let p1 = self.cycle[1];
                if m < 5
                    || g.is_adjacent(w, tail)
                    || corner(g, tail, anchor, w)
                    || corner(g, last, w, anchor)
                    || corner(g, w, anchor, p1)
                {
                    continue;
                }
                let mut loop_ = self.cycle.clone();
                loop_.push(w);
                return Ok(Some(Lasso {
                    loop_,
                    path: self.path.clone(),
                }));
            }
            self.cycle.push(w);
            self.on_cycle[w] = true;
            let found = self.grow_loop();
            self.on_cycle[w] = false;
            self.cycle.pop();
            if let Some(l) = found? {
                return Ok(Some(l));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LassoOptions {
    /// Longest loop considered; `None` means `#X`.
    pub max_loop: Option<usize>,
    /// Search steps allowed per ordered pair.
    pub node_budget: u64,
}

impl Default for LassoOptions {
    fn default() -> Self {
        LassoOptions {
            max_loop: None,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// The first lasso without right angles whose path starts `x, x'`, in
/// depth-first order over paths (neighbors by index) and then loops.
pub fn find_lasso(image: &DigitalImage, x: usize, x_prime: usize, opts: &LassoOptions) -> Result<Option<Lasso>> {
    image.check_index(x)?;
    image.check_index(x_prime)?;
    if !image.is_adjacent(x, x_prime) {
        return Err(Error::Precondition(format!("{x} and {x_prime} are not adjacent")));
    }
    let n = image.len();
    let mut f = Finder {
        image,
        max_loop: opts.max_loop.unwrap_or(n).min(n),
        budget: opts.node_budget,
        nodes: 0,
        path: vec![x, x_prime],
        on_path: vec![false; n],
        cycle: Vec::new(),
        on_cycle: vec![false; n],
    };
    f.on_path[x] = true;
    f.on_path[x_prime] = true;
    f.paths()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LassoCertificate {
    /// A lasso for every ordered adjacent pair, in pair order.
    Certified(Vec<Lasso>),
    /// Ordered pairs with no lasso; says nothing about rigidity.
    NotCertified { missing: Vec<(usize, usize)> },
}

impl LassoCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, LassoCertificate::Certified(_))
    }
}

/// Searches a lasso for both orientations of every edge, in parallel.
pub fn lasso_rigidity_certificate(image: &DigitalImage, opts: &LassoOptions) -> Result<LassoCertificate> {
    let pairs: Vec<(usize, usize)> = image.edges().into_iter().flat_map(|(a, b)| [(a, b), (b, a)]).collect();
    let found: Vec<Option<Lasso>> = pairs
        .par_iter()
        .map(|&(x, y)| find_lasso(image, x, y, opts))
        .collect::<Result<_>>()?;
    let missing: Vec<(usize, usize)> = pairs
        .iter()
        .zip(&found)
        .filter(|(_, l)| l.is_none())
        .map(|(&p, _)| p)
        .collect();
    if missing.is_empty() {
        Ok(LassoCertificate::Certified(found.into_iter().flatten().collect()))
    } else {
        Ok(LassoCertificate::NotCertified { missing })
    }
}
