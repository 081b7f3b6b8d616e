//! Finite digital images: lattice points (or abstract vertices) with a
//! symmetric, irreflexive adjacency relation stored as bitset rows.
//!
//! Coordinates are metadata. Every algorithm in the crate reads only the
//! adjacency rows; `c_u` and `NP_u` adjacencies are compiled to rows when
//! the image is built.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::bitset::Bitset;
use crate::error::{Error, Result};

/// A lattice point of `Z^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<i64>);

impl Point {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for Point {
    fn from(v: Vec<i64>) -> Self {
        Point(v)
    }
}

impl<const N: usize> From<[i64; N]> for Point {
    fn from(v: [i64; N]) -> Self {
        Point(v.to_vec())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `c_u` adjacency: the points differ, every coordinate differs by at most 1,
/// and at most `u` coordinates differ.
pub fn cu_adjacent(x: &Point, y: &Point, u: usize) -> Result<bool> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    if u == 0 || u > x.dim() {
        return Err(Error::AdjacencyOutOfRange { u, max: x.dim() });
    }
    Ok(cu_unchecked(x, y, u))
}

fn cu_unchecked(x: &Point, y: &Point, u: usize) -> bool {
    let mut differing = 0;
    for (a, b) in x.0.iter().zip(&y.0) {
        match (a - b).abs() {
            0 => {}
            1 => differing += 1,
            _ => return false,
        }
    }
    (1..=u).contains(&differing)
}

/// Provenance of an image's adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdjacencySpec {
    /// `c_u` on the image coordinates.
    Cu { u: usize },
    /// Unordered vertex pairs, normalized to `(min, max)` and sorted.
    Explicit { edges: Vec<(usize, usize)> },
    /// `NP_u` product of the factor images.
    Npu { u: usize, factors: Vec<DigitalImage> },
}

#[derive(Clone, PartialEq, Eq)]
pub struct DigitalImage {
    name: String,
    dimension: usize,
    points: Option<Vec<Point>>,
    open: Vec<Bitset>,
    closed: Vec<Bitset>,
    spec: AdjacencySpec,
}

impl fmt::Debug for DigitalImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitalImage")
            .field("name", &self.name)
            .field("size", &self.len())
            .field("edges", &self.edges())
            .finish()
    }
}

fn normalize_edges(size: usize, edges: &[(usize, usize)]) -> Result<Vec<(usize, usize)>> {
    let mut out = BTreeSet::new();
    for &(a, b) in edges {
        for i in [a, b] {
            if i >= size {
                return Err(Error::IndexOutOfRange { index: i, size });
            }
        }
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        out.insert((a.min(b), a.max(b)));
    }
    Ok(out.into_iter().collect())
}

fn check_points(points: &[Point]) -> Result<usize> {
    let dim = points.first().map_or(0, Point::dim);
    let mut seen = HashSet::with_capacity(points.len());
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint(p.0.clone()));
        }
    }
    Ok(dim)
}

impl DigitalImage {
    /// Builds and validates an image.
    ///
    /// `size` is used for abstract images (no points); when points are given
    /// the size is their count. For `Npu` specs the points and rows are
    /// derived from the factors, and any supplied points must match them.
    pub fn build(
        name: impl Into<String>,
        points: Option<Vec<Point>>,
        size: usize,
        spec: AdjacencySpec,
    ) -> Result<Self> {
        let name = name.into();
        if let AdjacencySpec::Npu { u, factors } = spec {
            let built = product_named(name, &factors, u)?;
            if let Some(pts) = points {
                if built.points.as_ref() != Some(&pts) {
                    return Err(Error::Invariant(
                        "points do not match the product of the factors".into(),
                    ));
                }
            }
            return Ok(built);
        }
        let (size, dimension) = match &points {
            Some(p) => (p.len(), check_points(p)?),
            None => (size, 0),
        };
        let mut open = vec![Bitset::new(size); size];
        let spec = match spec {
            AdjacencySpec::Cu { u } => {
                let pts = points.as_ref().ok_or(Error::MissingCoordinates)?;
                if u == 0 || u > dimension {
                    return Err(Error::AdjacencyOutOfRange { u, max: dimension });
                }
                for i in 0..size {
                    for j in i + 1..size {
                        if cu_unchecked(&pts[i], &pts[j], u) {
                            open[i].insert(j);
                            open[j].insert(i);
                        }
                    }
                }
                AdjacencySpec::Cu { u }
            }
            AdjacencySpec::Explicit { edges } => {
                let edges = normalize_edges(size, &edges)?;
                for &(a, b) in &edges {
                    open[a].insert(b);
                    open[b].insert(a);
                }
                AdjacencySpec::Explicit { edges }
            }
            AdjacencySpec::Npu { .. } => unreachable!(),
        };
        Ok(Self::from_rows(name, dimension, points, open, spec))
    }

    fn from_rows(
        name: String,
        dimension: usize,
        points: Option<Vec<Point>>,
        open: Vec<Bitset>,
        spec: AdjacencySpec,
    ) -> Self {
        let closed = open
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut c = row.clone();
                c.insert(i);
                c
            })
            .collect();
        let image = DigitalImage {
            name,
            dimension,
            points,
            open,
            closed,
            spec,
        };
        debug_assert!(image.check_relation().is_ok());
        image
    }

    /// Points of `Z^n` with `c_u` adjacency.
    pub fn from_points(name: impl Into<String>, points: Vec<Point>, u: usize) -> Result<Self> {
        Self::build(name, Some(points), 0, AdjacencySpec::Cu { u })
    }

    /// Abstract vertices `0..size` with the given undirected edges.
    pub fn from_edges(
        name: impl Into<String>,
        size: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        Self::build(
            name,
            None,
            size,
            AdjacencySpec::Explicit {
                edges: edges.to_vec(),
            },
        )
    }

    fn explicit_from_rows(name: String, points: Option<Vec<Point>>, open: Vec<Bitset>) -> Self {
        let edges = rows_to_edges(&open);
        let dimension = points
            .as_ref()
            .and_then(|p| p.first())
            .map_or(0, Point::dim);
        Self::from_rows(
            name,
            dimension,
            points,
            open,
            AdjacencySpec::Explicit { edges },
        )
    }

    /// Checks symmetry, irreflexivity, distinct points and agreement of the
    /// rows with a `c_u` adjacency.
    pub fn check_relation(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if self.open[i].contains(i) {
                return Err(Error::SelfLoop(i));
            }
            for j in self.open[i].iter() {
                if !self.open[j].contains(i) {
                    return Err(Error::Invariant(format!("adjacency {i}->{j} is not symmetric")));
                }
            }
        }
        if let Some(points) = &self.points {
            check_points(points)?;
            if let AdjacencySpec::Cu { u } = self.spec {
                for i in 0..n {
                    for j in 0..n {
                        if i != j && cu_unchecked(&points[i], &points[j], u) != self.open[i].contains(j) {
                            return Err(Error::Invariant(format!(
                                "adjacency of {i},{j} disagrees with c_{u}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn len(&self) -> usize {
        self.open.len()
    }

    pub fn is_empty(&self) -> bool {
        self.open.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> Option<&[Point]> {
        self.points.as_deref()
    }

    pub fn spec(&self) -> &AdjacencySpec {
        &self.spec
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.points.as_ref()?.iter().position(|q| q == p)
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                size: self.len(),
            })
        }
    }

    #[inline]
    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.open[i].contains(j)
    }

    /// The reflexive closure of adjacency.
    #[inline]
    pub fn adjacent_or_equal(&self, i: usize, j: usize) -> bool {
        self.closed[i].contains(j)
    }

    pub fn open_row(&self, i: usize) -> &Bitset {
        &self.open[i]
    }

    pub fn closed_row(&self, i: usize) -> &Bitset {
        &self.closed[i]
    }

    pub(crate) fn closed_rows(&self) -> &[Bitset] {
        &self.closed
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.open[i].iter()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.open[i].count()
    }

    /// `N*(i)`: the vertex together with its neighbors.
    pub fn closed_neighborhood(&self, i: usize) -> Result<BTreeSet<usize>> {
        self.check_index(i)?;
        Ok(self.closed[i].iter().collect())
    }

    /// `N(i)`.
    pub fn open_neighborhood(&self, i: usize) -> Result<BTreeSet<usize>> {
        self.check_index(i)?;
        Ok(self.open[i].iter().collect())
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        rows_to_edges(&self.open)
    }

    pub fn edge_count(&self) -> usize {
        self.open.iter().map(Bitset::count).sum::<usize>() / 2
    }

    /// BFS partition; components are ordered by their smallest vertex and
    /// each component is sorted.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Whether `set` induces a connected subgraph. The empty set counts as connected.
    pub fn is_connected_subset(&self, set: &Bitset) -> bool {
        let Some(start) = set.iter().next() else {
            return true;
        };
        let mut seen = Bitset::new(self.len());
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in self.open[v].iter() {
                if set.contains(w) && !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen.count() == set.count()
    }

    /// Subimage induced on `subset` (kept in ascending index order).
    /// Returns the image and the map from new to old indices.
    pub fn induced(&self, subset: &BTreeSet<usize>) -> Result<(DigitalImage, Vec<usize>)> {
        for &i in subset {
            self.check_index(i)?;
        }
        let old: Vec<usize> = subset.iter().copied().collect();
        let mut open = vec![Bitset::new(old.len()); old.len()];
        for (a, &i) in old.iter().enumerate() {
            for (b, &j) in old.iter().enumerate() {
                if self.is_adjacent(i, j) {
                    open[a].insert(b);
                }
            }
        }
        let points = self
            .points
            .as_ref()
            .map(|p| old.iter().map(|&i| p[i].clone()).collect::<Vec<_>>());
        let name = format!("{}[induced]", self.name);
        let image = match (&self.spec, points) {
            (AdjacencySpec::Cu { u }, Some(points)) if !points.is_empty() => {
                Self::from_rows(name, self.dimension, Some(points), open, AdjacencySpec::Cu { u: *u })
            }
            (_, points) => Self::explicit_from_rows(name, points, open),
        };
        Ok((image, old))
    }
}

fn rows_to_edges(open: &[Bitset]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (i, row) in open.iter().enumerate() {
        for j in row.iter().filter(|&j| j > i) {
            edges.push((i, j));
        }
    }
    edges
}

/// `NP_u` product. Vertices are ordered lexicographically with the first
/// factor varying slowest.
pub fn product(factors: &[DigitalImage], u: usize) -> Result<DigitalImage> {
    let name = format!(
        "np{u}({})",
        factors.iter().map(|f| f.name()).collect::<Vec<_>>().join(",")
    );
    product_named(name, factors, u)
}

fn product_named(name: String, factors: &[DigitalImage], u: usize) -> Result<DigitalImage> {
    if u == 0 || u > factors.len() {
        return Err(Error::AdjacencyOutOfRange {
            u,
            max: factors.len(),
        });
    }
    if let Some(i) = factors.iter().position(|f| f.is_empty()) {
        return Err(Error::InvalidParameter(format!("factor {i} is empty")));
    }
    let sizes: Vec<usize> = factors.iter().map(DigitalImage::len).collect();
    let total: usize = sizes.iter().product();
    let decode = |mut idx: usize| -> Vec<usize> {
        let mut out = vec![0; sizes.len()];
        for k in (0..sizes.len()).rev() {
            out[k] = idx % sizes[k];
            idx /= sizes[k];
        }
        out
    };
    let tuples: Vec<Vec<usize>> = (0..total).map(decode).collect();
    let mut open = vec![Bitset::new(total); total];
    for p in 0..total {
        for q in p + 1..total {
            let mut adjacent = 0;
            let mut ok = true;
            for (k, f) in factors.iter().enumerate() {
                let (a, b) = (tuples[p][k], tuples[q][k]);
                if a == b {
                    continue;
                }
                if f.is_adjacent(a, b) {
                    adjacent += 1;
                } else {
                    ok = false;
                    break;
                }
            }
            if ok && (1..=u).contains(&adjacent) {
                open[p].insert(q);
                open[q].insert(p);
            }
        }
    }
    let points = if factors.iter().all(|f| f.points.is_some()) {
        Some(
            tuples
                .iter()
                .map(|t| {
                    Point(
                        t.iter()
                            .zip(factors)
                            .flat_map(|(&i, f)| f.points.as_ref().unwrap()[i].0.clone())
                            .collect(),
                    )
                })
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let dimension = points.as_ref().map_or(0, |_| factors.iter().map(|f| f.dimension).sum());
    Ok(DigitalImage::from_rows(
        name,
        dimension,
        points,
        open,
        AdjacencySpec::Npu {
            u,
            factors: factors.to_vec(),
        },
    ))
}

/// Identifies `a0` in `a` with `b0` in `b`. Vertices of `a` keep their
/// indices; the remaining vertices of `b` follow in order. The wedge point
/// index is recorded in the name.
pub fn wedge(a: &DigitalImage, b: &DigitalImage, a0: usize, b0: usize) -> Result<DigitalImage> {
    a.check_index(a0)?;
    b.check_index(b0)?;
    let na = a.len();
    let n = na + b.len() - 1;
    let map_b = |j: usize| -> usize {
        match j.cmp(&b0) {
            std::cmp::Ordering::Equal => a0,
            std::cmp::Ordering::Less => na + j,
            std::cmp::Ordering::Greater => na + j - 1,
        }
    };
    let mut open = vec![Bitset::new(n); n];
    for (i, j) in a.edges() {
        open[i].insert(j);
        open[j].insert(i);
    }
    for (i, j) in b.edges() {
        let (x, y) = (map_b(i), map_b(j));
        open[x].insert(y);
        open[y].insert(x);
    }
    let name = format!("wedge({},{};x0={a0})", a.name, b.name);
    Ok(DigitalImage::explicit_from_rows(name, None, open))
}

/// Vertices of `b` are shifted by `#a`; no cross edges.
pub fn disjoint_union(a: &DigitalImage, b: &DigitalImage) -> DigitalImage {
    let na = a.len();
    let n = na + b.len();
    let mut open = vec![Bitset::new(n); n];
    for (i, j) in a.edges() {
        open[i].insert(j);
        open[j].insert(i);
    }
    for (i, j) in b.edges() {
        open[na + i].insert(na + j);
        open[na + j].insert(na + i);
    }
    DigitalImage::explicit_from_rows(format!("union({},{})", a.name, b.name), None, open)
}

/// Default vertex limit for [`are_isomorphic`].
pub const ISOMORPHISM_SIZE_LIMIT: usize = 32;

/// Searches for an adjacency-preserving bijection `A -> B` (index `i` of `A`
/// goes to `witness[i]` of `B`).
pub fn are_isomorphic(a: &DigitalImage, b: &DigitalImage) -> Result<Option<Vec<usize>>> {
    are_isomorphic_with_limit(a, b, ISOMORPHISM_SIZE_LIMIT)
}

pub fn are_isomorphic_with_limit(
    a: &DigitalImage,
    b: &DigitalImage,
    limit: usize,
) -> Result<Option<Vec<usize>>> {
    for img in [a, b] {
        if img.len() > limit {
            return Err(Error::SizeLimit {
                size: img.len(),
                limit,
            });
        }
    }
    if a.len() != b.len() || a.edge_count() != b.edge_count() {
        return Ok(None);
    }
    let deg_a: Vec<usize> = (0..a.len()).map(|i| a.degree(i)).collect();
    let deg_b: Vec<usize> = (0..b.len()).map(|i| b.degree(i)).collect();
    let mut sa = deg_a.clone();
    let mut sb = deg_b.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(None);
    }
    // Assign A's vertices in BFS order so each new vertex tends to have a mapped neighbor.
    let order: Vec<usize> = a.connected_components().iter().flat_map(|c| bfs_from(a, c[0])).collect();
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    #[allow(clippy::too_many_arguments)]
    fn go(
        a: &DigitalImage,
        b: &DigitalImage,
        order: &[usize],
        deg_a: &[usize],
        deg_b: &[usize],
        depth: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for w in 0..b.len() {
            if used[w] || deg_a[v] != deg_b[w] {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&u| a.is_adjacent(u, v) == b.is_adjacent(map[u], w));
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if go(a, b, order, deg_a, deg_b, depth + 1, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
    Ok(go(a, b, &order, &deg_a, &deg_b, 0, &mut map, &mut used).then_some(map))
}

fn bfs_from(image: &DigitalImage, s: usize) -> Vec<usize> {
    let mut seen = Bitset::new(image.len());
    seen.insert(s);
    let mut out = vec![s];
    let mut i = 0;
    while i < out.len() {
        let v = out[i];
        i += 1;
        for w in image.neighbors(v) {
            if !seen.contains(w) {
                seen.insert(w);
                out.push(w);
            }
        }
    }
    out
}
