//! Homology of binary images over GF(2).
//!
//! The pipeline builds the cubical complex of the black pixels, pairs
//! vertices with edges by an admissible discrete vector field, eliminates
//! the pairs with an explicit reduction `(f, g, h)`, and reads Betti
//! numbers off the much smaller reduced complex. Every identity the result
//! relies on is checked at runtime: admissibility of the field, the
//! triangular pivot block, the reduction axioms, and agreement with an
//! independent reconstruction of the same reduction through the basic
//! perturbation lemma.

pub mod complex;
pub mod error;
pub mod gf2;
pub mod image;
pub mod morse;
pub mod perturbation;
pub mod pipeline;
pub mod report;
pub mod vector_field;

pub use complex::{
    from_truncated, verify_reduction, BettiVector, Degree, FGChainComplex, ReductionTriple,
    TruncatedComplex,
};
pub use error::{Error, Result};
pub use gf2::{Gf2Matrix, Permutation};
pub use image::{
    boundary_matrices, build_cubical, count_components, parse_netpbm, parse_pbm, parse_pgm,
    BinaryImage, CubicalComplex,
};
pub use morse::{hexagonal_reduce, reorder, ReorderedComplex};
pub use perturbation::{
    bpl, bpl_decomposed, decompose, hexagonal_general, nilpotency_bound, vf_reduction_via_bpl,
    Decomposition, Perturbation, SplitComplex,
};
pub use pipeline::{
    reduce_pipeline, reduce_pipeline_with, reduce_truncated, run_checks, Checks, PipelineOptions,
    PipelineReport, PipelineResult,
};
pub use report::VerificationReport;
pub use vector_field::{check_admissible, rs_algorithm, sort_by_lambda, DiscreteVectorField};
