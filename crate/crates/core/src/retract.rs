//! Retractions onto subsets and deformation retractions.

use std::collections::BTreeSet;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::homotopy::{find_homotopy_path, HomotopyOptions, HomotopyPath, PathSearch};
use crate::image::DigitalImage;
use crate::search::{Budget, Flow, Plan, Search, Visitor};
use crate::selfmap::SelfMap;
use crate::spectrum::SearchOptions;

/// A continuous map of `X` into `A` fixing `A` pointwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractionWitness<'a> {
    pub subset: BTreeSet<usize>,
    pub map: SelfMap<'a>,
}

impl RetractionWitness<'_> {
    pub fn verify(&self) -> bool {
        let f = &self.map;
        f.is_continuous()
            && self.subset.iter().all(|&a| f.apply(a) == a)
            && f.targets().iter().all(|t| self.subset.contains(t))
    }
}

struct First(Option<Vec<usize>>);

impl Visitor for First {
    fn complete(&mut self, targets: &[usize]) -> Flow {
        self.0 = Some(targets.to_vec());
        Flow::Stop
    }
}

/// The lexicographically least retraction of `image` onto `subset`, if any.
pub fn find_retraction<'a>(
    image: &'a DigitalImage,
    subset: &BTreeSet<usize>,
    opts: &SearchOptions,
) -> Result<Option<RetractionWitness<'a>>> {
    if subset.is_empty() {
        return Err(Error::Precondition("retract onto an empty set".into()));
    }
    for &a in subset {
        image.check_index(a)?;
    }
    let n = image.len();
    let onto = Bitset::from_indices(n, subset.iter().copied());
    let domain: Vec<Bitset> = (0..n)
        .map(|v| {
            if onto.contains(v) {
                Bitset::from_indices(n, [v])
            } else {
                onto.clone()
            }
        })
        .collect();
    // index order with ascending candidates visits maps lexicographically
    let plan = Plan::index_order(image);
    let search = Search {
        domain: Some(&domain),
        ..Search::new(image, &plan)
    };
    let mut first = First(None);
    search.run(None, &mut first, Some(&Budget::new(opts.node_budget)))?;
    Ok(first.0.map(|targets| RetractionWitness {
        subset: subset.clone(),
        map: SelfMap::new_unchecked(image, targets),
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deformation<'a> {
    /// A homotopy from the identity to the retraction.
    Yes(HomotopyPath<'a>),
    No,
    Inconclusive,
}

/// Whether the retraction, viewed as a self-map, is homotopic to the identity.
pub fn is_deformation_retraction<'a>(
    w: &RetractionWitness<'a>,
    opts: &HomotopyOptions,
) -> Result<Deformation<'a>> {
    if !w.verify() {
        return Err(Error::Precondition("not a retraction".into()));
    }
    let id = SelfMap::identity(w.map.image());
    Ok(match find_homotopy_path(&id, &w.map, opts)? {
        PathSearch::Found(p) => Deformation::Yes(p),
        PathSearch::NotHomotopic => Deformation::No,
        PathSearch::Inconclusive => Deformation::Inconclusive,
    })
}
