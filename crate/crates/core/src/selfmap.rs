//! Self-maps of a digital image as dense target arrays.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::image::{DigitalImage, Point};

#[derive(Clone)]
pub struct SelfMap<'a> {
    image: &'a DigitalImage,
    targets: Vec<usize>,
}

impl PartialEq for SelfMap<'_> {
    fn eq(&self, other: &Self) -> bool {
        same_image(self.image, other.image) && self.targets == other.targets
    }
}

impl Eq for SelfMap<'_> {}

impl fmt::Debug for SelfMap<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SelfMap{:?}", self.targets)
    }
}

pub(crate) fn same_image(a: &DigitalImage, b: &DigitalImage) -> bool {
    std::ptr::eq(a, b) || (a.len() == b.len() && a.edges() == b.edges())
}

/// Continuity of a raw target array: adjacent points go to adjacent-or-equal points.
pub(crate) fn targets_continuous(image: &DigitalImage, targets: &[usize]) -> bool {
    (0..image.len()).all(|x| {
        let row = image.closed_row(targets[x]);
        image.neighbors(x).all(|y| row.contains(targets[y]))
    })
}

impl<'a> SelfMap<'a> {
    pub fn new(image: &'a DigitalImage, targets: Vec<usize>) -> Result<Self> {
        if targets.len() != image.len() {
            return Err(Error::InvalidParameter(format!(
                "map has {} targets for an image of {} points",
                targets.len(),
                image.len()
            )));
        }
        for &t in &targets {
            image.check_index(t)?;
        }
        Ok(SelfMap { image, targets })
    }

    pub(crate) fn new_unchecked(image: &'a DigitalImage, targets: Vec<usize>) -> Self {
        debug_assert_eq!(targets.len(), image.len());
        SelfMap { image, targets }
    }

    pub fn identity(image: &'a DigitalImage) -> Self {
        SelfMap {
            image,
            targets: (0..image.len()).collect(),
        }
    }

    pub fn constant(image: &'a DigitalImage, value: usize) -> Result<Self> {
        image.check_index(value)?;
        Ok(SelfMap {
            image,
            targets: vec![value; image.len()],
        })
    }

    /// Builds a map from a function on coordinates. Every image point must land in the image.
    pub fn from_point_fn(image: &'a DigitalImage, f: impl Fn(&Point) -> Point) -> Result<Self> {
        let points = image.points().ok_or(Error::MissingCoordinates)?;
        let targets = points
            .iter()
            .map(|p| {
                let q = f(p);
                image
                    .index_of(&q)
                    .ok_or_else(|| Error::InvalidParameter(format!("{p:?} maps to {q:?}, outside the image")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SelfMap { image, targets })
    }

    pub fn image(&self) -> &'a DigitalImage {
        self.image
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn into_targets(self) -> Vec<usize> {
        self.targets
    }

    pub fn apply(&self, x: usize) -> usize {
        self.targets[x]
    }

    pub fn is_continuous(&self) -> bool {
        targets_continuous(self.image, &self.targets)
    }

    pub fn fix(&self) -> BTreeSet<usize> {
        (0..self.targets.len()).filter(|&i| self.targets[i] == i).collect()
    }

    /// Points moved by the map.
    pub fn moved(&self) -> BTreeSet<usize> {
        (0..self.targets.len()).filter(|&i| self.targets[i] != i).collect()
    }

    pub fn fix_count(&self) -> usize {
        self.targets.iter().enumerate().filter(|(i, &t)| *i == t).count()
    }

    pub fn is_identity(&self) -> bool {
        self.targets.iter().enumerate().all(|(i, &t)| i == t)
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.targets.len()];
        for &t in &self.targets {
            if std::mem::replace(&mut seen[t], true) {
                return false;
            }
        }
        true
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &SelfMap<'a>) -> Result<SelfMap<'a>> {
        compose(self, f)
    }

    /// Transports the map along an isomorphism `iso: X -> Y`, giving `iso ∘ f ∘ iso⁻¹` on `Y`.
    pub fn conjugate<'b>(&self, iso: &[usize], other: &'b DigitalImage) -> Result<SelfMap<'b>> {
        let n = self.targets.len();
        if iso.len() != n || other.len() != n {
            return Err(Error::ImageMismatch);
        }
        let mut targets = vec![0; n];
        for x in 0..n {
            targets[iso[x]] = iso[self.targets[x]];
        }
        Ok(SelfMap {
            image: other,
            targets,
        })
    }
}

/// `(g ∘ f)(i) = g(f(i))`.
pub fn compose<'a>(g: &SelfMap<'a>, f: &SelfMap<'a>) -> Result<SelfMap<'a>> {
    if !same_image(g.image, f.image) {
        return Err(Error::ImageMismatch);
    }
    Ok(SelfMap {
        image: f.image,
        targets: f.targets.iter().map(|&y| g.targets[y]).collect(),
    })
}

/// The continuous map with no fixed points: for the lexicographically least
/// adjacent pair `(x0, x1)`, send `x0` to `x1` and everything else to `x0`.
pub fn fixed_point_free_map(image: &DigitalImage) -> Result<SelfMap<'_>> {
    let (x0, x1) = image.edges().first().copied().ok_or(Error::NoEdge)?;
    let mut targets = vec![x0; image.len()];
    targets[x0] = x1;
    Ok(SelfMap { image, targets })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleMapKind {
    /// `x_i ↦ x_j`
    Constant(usize),
    /// `x_i ↦ x_{i+d}`
    Rotation(usize),
    /// `x_i ↦ x_{d-i}`
    FlipComposed(usize),
}

/// Standard maps on the `n`-cycle built by [`crate::generate::cycle`].
pub fn cycle_map(cycle: &DigitalImage, kind: CycleMapKind) -> Result<SelfMap<'_>> {
    let n = cycle.len();
    let standard = n == 1 || (0..n).all(|i| cycle.is_adjacent(i, (i + 1) % n));
    if n == 0 || !standard || cycle.edge_count() != if n <= 2 { n - 1 } else { n } {
        return Err(Error::Precondition("image is not a standard digital cycle".into()));
    }
    let param = match kind {
        CycleMapKind::Constant(p) | CycleMapKind::Rotation(p) | CycleMapKind::FlipComposed(p) => p,
    };
    if param >= n {
        return Err(Error::InvalidParameter(format!("parameter {param} out of range 0..{n}")));
    }
    let targets = (0..n)
        .map(|i| match kind {
            CycleMapKind::Constant(j) => j,
            CycleMapKind::Rotation(d) => (i + d) % n,
            CycleMapKind::FlipComposed(d) => (d + n - i) % n,
        })
        .collect();
    Ok(SelfMap {
        image: cycle,
        targets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{cycle, interval};

    #[test]
    fn continuity_examples() {
        let c5 = cycle(5).unwrap();
        assert!(SelfMap::identity(&c5).is_continuous());
        assert!(SelfMap::constant(&c5, 0).unwrap().is_continuous());
        let f = SelfMap::new(&c5, vec![0, 2, 2, 3, 4]).unwrap();
        assert!(!f.is_continuous());
        assert!(SelfMap::new(&c5, vec![0, 1, 2, 3, 5]).is_err());
        assert!(SelfMap::new(&c5, vec![0, 1]).is_err());
    }

    #[test]
    fn fix_examples() {
        let c7 = cycle(7).unwrap();
        assert_eq!(SelfMap::identity(&c7).fix().len(), 7);
        assert_eq!(SelfMap::constant(&c7, 0).unwrap().fix(), BTreeSet::from([0]));
        let c6 = cycle(6).unwrap();
        let l = cycle_map(&c6, CycleMapKind::FlipComposed(0)).unwrap();
        assert_eq!(l.fix(), BTreeSet::from([0, 3]));
        assert_eq!(l.moved(), BTreeSet::from([1, 2, 4, 5]));
    }

    #[test]
    fn composition_examples() {
        let c5 = cycle(5).unwrap();
        let r1 = cycle_map(&c5, CycleMapKind::Rotation(1)).unwrap();
        let r2 = cycle_map(&c5, CycleMapKind::Rotation(2)).unwrap();
        assert_eq!(compose(&r1, &r1).unwrap(), r2);
        let f = SelfMap::new(&c5, vec![0, 0, 1, 1, 0]).unwrap();
        assert_eq!(compose(&SelfMap::identity(&c5), &f).unwrap(), f);
        let c6 = cycle(6).unwrap();
        let l = cycle_map(&c6, CycleMapKind::FlipComposed(0)).unwrap();
        assert!(l.after(&l).unwrap().is_identity());
        let other = cycle(6).unwrap().with_name("other");
        let i5 = interval(0, 5).unwrap();
        assert!(compose(&SelfMap::identity(&other), &l).is_ok());
        assert_eq!(
            compose(&SelfMap::identity(&i5), &SelfMap::identity(&c6)).unwrap_err(),
            Error::ImageMismatch
        );
    }

    #[test]
    fn fixed_point_free() {
        let i = interval(0, 1).unwrap();
        let f = fixed_point_free_map(&i).unwrap();
        assert_eq!(f.targets(), &[1, 0]);
        assert!(f.is_continuous());
        let c9 = cycle(9).unwrap();
        let f = fixed_point_free_map(&c9).unwrap();
        assert!(f.is_continuous());
        assert_eq!(f.fix_count(), 0);
        assert_eq!(fixed_point_free_map(&cycle(1).unwrap()).unwrap_err(), Error::NoEdge);
    }

    #[test]
    fn cycle_maps() {
        let c5 = cycle(5).unwrap();
        assert!(cycle_map(&c5, CycleMapKind::Rotation(0)).unwrap().is_identity());
        assert_eq!(cycle_map(&c5, CycleMapKind::FlipComposed(0)).unwrap().fix(), BTreeSet::from([0]));
        assert_eq!(cycle_map(&c5, CycleMapKind::Rotation(1)).unwrap().fix_count(), 0);
        assert!(cycle_map(&c5, CycleMapKind::Rotation(5)).is_err());
        assert!(cycle_map(&interval(0, 4).unwrap(), CycleMapKind::Rotation(1)).is_err());
    }
}
