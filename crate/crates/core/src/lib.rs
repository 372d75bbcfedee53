//! Exact computer algebra over weighted-graded quotient rings.
//!
//! The crate provides, bottom up:
//!
//! - exact scalars over `Q` or a prime field, sparse multivariate
//!   polynomials with weighted monomial orders, and a small expression
//!   parser ([`poly`], [`parse`]);
//! - Buchberger's algorithm for ideals and submodules of free modules,
//!   normal forms, syzygies, elimination, and colon/saturation
//!   computations ([`groebner`], [`ring`]);
//! - finitely presented modules over a quotient ring with the homological
//!   toolkit: maps with lifting certificates, kernels, Hom, tensor, Ext^1,
//!   torsion, rank, minimal generators, pushouts, and split tests
//!   ([`fpmod`], [`homological`]);
//! - endomorphism algebras with involution, strong self-duality, balanced
//!   self tensor products over the endomorphism ring, and torsion
//!   detection in them ([`star`], [`matstar`]);
//! - an independent brute-force oracle over tiny finite rings that
//!   cross-checks the matrix-algebra structure results ([`oracle`]).

pub mod error;
pub mod groebner;
pub mod field;
pub mod fpmod;
pub mod homological;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ring;

pub use error::{Error, Result};
pub use field::{FieldElem, FieldTag};
pub use groebner::{all_s_pairs_reduce, buchberger, normal_form, toric_ideal, GbConfig, GroebnerBasis};
pub use monomial::{ModuleCmp, Monomial, MonomialOrder};
pub use fpmod::{identity_cols, mat_apply, mat_compose, mul_vector, present_ideal, present_subquotient, Extension, FPModule, Minimalization, ModuleMap, TorsionData};
pub use homological::{direct_sum_with_maps, ext1, find_isomorphism, flatten_matrix, hom_module, hom_on_gens, is_simple_residue, pushout, splits, unflatten_matrix, HomModule, IsoSearch};
pub use ring::{QuotientRing, RSpan, SubmoduleGens};
pub use poly::{ArithOp, Poly, PolyRing, WeightedDegree};
