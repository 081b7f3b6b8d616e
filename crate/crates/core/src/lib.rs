//! Fixed point theory of finite digital images.
//!
//! A digital image is a finite set of points with a symmetric, irreflexive
//! adjacency. This crate enumerates digitally continuous self-maps and
//! computes fixed point invariants from them: the fixed point spectrum
//! `F(X)`, homotopy fixed point spectra `S(f)`, pull indices, rigidity, and
//! lasso-based rigidity certificates.
//!
//! ```
//! use digifix::generate::cycle;
//! use digifix::{fixed_point_spectrum, Spectrum};
//!
//! let c7 = cycle(7).unwrap();
//! let (f, _stats) = fixed_point_spectrum(&c7).unwrap();
//! assert_eq!(f, Spectrum::from([0, 1, 2, 3, 4, 7]));
//! ```

mod bitset;
mod csp;
pub mod error;
pub mod generate;
pub mod geometry;
pub mod homotopy;
pub mod image;
pub mod io;
pub mod lasso;
pub mod report;
pub mod retract;
mod search;
pub mod selfmap;
pub mod spectrum;

pub use bitset::Bitset;
pub use error::{Error, Result};
pub use geometry::{
    articulation_fixed_points, articulation_points, fix_structure, forced_fixed_points, minimal_paths,
    FixStructure, ForcedFixedPoints, MinimalPaths, PathWitness,
};
pub use homotopy::{
    find_homotopy_path, homotopy_class, homotopy_classes, is_rigid_image, is_rigid_map, one_step_homotopic,
    verify_homotopy_path, HomotopyClass, HomotopyOptions, HomotopyPath, PathSearch,
};
pub use image::{are_isomorphic, cu_adjacent, disjoint_union, product, wedge, AdjacencySpec, DigitalImage, Point};
pub use io::{load_image, load_map, parse_image, save_image};
pub use lasso::{find_lasso, lasso_rigidity_certificate, right_angle, Lasso, LassoCertificate, LassoOptions};
pub use report::{write_report, Report, ReportFormat};
pub use retract::{find_retraction, is_deformation_retraction, Deformation, RetractionWitness};
pub use selfmap::{compose, cycle_map, fixed_point_free_map, CycleMapKind, SelfMap};
pub use spectrum::{
    combine_spectra, fixed_point_spectrum, nminus1_criterion, pull_index, EnumerationStats, SearchOptions,
    Spectrum, SpectrumOp,
};
