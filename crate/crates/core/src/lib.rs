//! Integral point sets over finite affine spaces.
//!
//! A point set in `F_q^m` (odd `q`) is *integral* when the squared Euclidean
//! distance between any two of its points is a square in `F_q`, i.e. the
//! "distance" exists inside the field itself. This crate provides the pieces
//! needed to study such sets computationally:
//!
//! * [`ffield`] — arithmetic in `F_q = F_{p^r}`, quadratic classes, square
//!   roots, Frobenius, and a canonical integer encoding of field elements;
//! * [`geometry`] — points of `F_q^m`, the standard bilinear form, squared
//!   distances, the integrality predicate, and solutions of `a² + b² = γ`;
//! * [`counting`] — exact counts of square/zero/non-square norm vectors,
//!   vertex degrees and common-neighbor numbers of the integral-distance
//!   graph, and strong-regularity reports;
//! * [`symmetry`] — orthogonal matrices, distance-preserving affine maps,
//!   group orders, and constructive transitivity witnesses;
//! * [`clique`] — the graph of integral differences, exact maximum-clique
//!   search with symmetry reductions, and `I(m, q)`, the maximum cardinality
//!   of an integral point set;
//! * [`constructions`] — explicit large integral point sets (lines,
//!   hyperplane sets, circle-plus-line sets, isotropic planes, products).
//!
//! Counting formulas return arbitrary-precision integers; searches return
//! explicit witnesses that are always re-verified before being reported.

pub mod clique;
pub mod constructions;
pub mod counting;
pub mod ffield;
pub mod geometry;
pub mod symmetry;

pub(crate) mod parallel;
