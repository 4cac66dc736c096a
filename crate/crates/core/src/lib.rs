//! Game Description Logic with Integers: formulas over games whose states
//! carry integer-valued variables and whose actions take integer parameters.
//!
//! - [`formula`]: syntax trees, parser, printer, desugaring.
//! - [`model`]: signatures, state-transition models, paths, the Nim family.
//! - [`eval`]: term valuation, satisfaction along a path, global truth.
//! - [`translate`]: translations into plain GDL and the reverse embedding.
//! - [`analysis`]: subformula counts of source and translated descriptions.

pub mod formula;
pub mod model;
pub mod eval;
pub mod translate;
pub mod analysis;
