//! Exact factorization workbench for block monoids of zero-sum sequences.
//!
//! A Krull domain with class group `G` whose prime divisors live in the
//! classes `G0 ⊆ G` has the same factorization lengths as the block monoid
//! `B(G0)`: atoms are minimal zero-sum sequences and atomic equalities are
//! pairs of atom multisets with equal content. This crate enumerates atoms,
//! computes every irredundant atomic equality as an indecomposable solution of
//! a homogeneous linear Diophantine system, classifies atoms as good or bad,
//! and checks half-factoriality statements against those classifications.
//!
//! ```
//! use hfdlab::{ClassSubset, FiniteAbelianGroup, Instance};
//!
//! let group = FiniteAbelianGroup::new(vec![6]).unwrap();
//! let classes = ClassSubset::from_residues(&group, &[2, 3, 4]).unwrap();
//! let instance = Instance::build(classes, hfdlab::DEFAULT_CAP).unwrap();
//! let verdicts = instance.classify(None);
//! assert_eq!(instance.atoms.len(), 4);
//! assert!(!hfdlab::analysis::is_hfd(&verdicts));
//! ```

pub mod analysis;
pub mod blockmonoid;
pub mod certify;
mod error;
pub mod group;
pub mod hilbert;
pub mod lattice;
pub mod localization;
pub mod quadratic;
pub mod relation;
pub mod report;
pub mod survey;

pub use blockmonoid::{AtomTable, ClassSubset, FactorizationVector, ZeroSumSequence};
pub use error::{Error, Result};
pub use group::{FiniteAbelianGroup, GroupElement};
pub use relation::{AtomClassification, Instance, Relation, Verdict};

/// Default limit on the number of candidate vectors the completion procedure
/// may generate before giving up.
pub const DEFAULT_CAP: usize = 1_000_000;
