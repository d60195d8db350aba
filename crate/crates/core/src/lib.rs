//! Quotient modules of H²(𝔻ᵈ) by homogeneous ideals: graded linear algebra,
//! compressed coordinate multipliers as block operators, spectral diagnostics
//! and quantitative claim verification.

pub mod bergman;
pub mod error;
pub mod frame;
pub mod ideal;
pub mod linalg;
pub mod poly;
pub mod spectral;
pub mod verify;

pub use error::{QmodError, Result};
pub use frame::{
    commutator_blocks, commutator_of, compress_general, compress_multiplier, frame_shift,
    BlockOperator, QuotientFrame,
};
pub use ideal::{
    b_basis, ideal_intersection_per_degree, ideal_power, ideal_product, j_theta, DegreeBasis,
    GradedIdeal, LinePower,
};
pub use poly::{HPoly, MultiIndex, ThetaDirection, UniPoly};
pub use spectral::{
    essential_spectrum_probe, fit_decay, profile, schatten_1inf_indicator, DecayFit,
    SpectralProfile,
};
pub use verify::{
    boundary_witness, extrapolate_cumulative, nonnormality_demo, random_homogeneous,
    verify_asymptotic_orthogonality, verify_coefficient_decay, verify_rg_module_map,
    verify_shift_coefficients, verify_shift_defect, verify_trace_formula, verify_zero_blocks,
    VerificationReport,
};
