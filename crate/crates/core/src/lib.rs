//! Sum-of-squares certification over predicted monomial bases.
//!
//! A polynomial is SOS when `p = z_Bᵀ Q z_B` for some PSD `Q` and monomial
//! basis `B`. Instead of solving once over every lattice point of the half
//! Newton polytope, [`pipeline::certify`] starts from a predicted basis,
//! repairs it until its pairwise products cover the support, and grows it
//! along a geometric schedule that ends at the full pool.

pub mod datagen;
pub mod error;
pub(crate) mod lp;
pub mod newton;
pub mod pipeline;
pub mod polycore;
pub mod predictor;
pub mod sdp;

pub use error::{Error, Result};
pub use newton::{half_polytope_points, lower_bound_combinatorial, lower_bound_vertices};
pub use pipeline::{certify, CertifyConfig, CertifyOutcome, CertifyStatus};
pub use polycore::{covers, detokenize, tokenize, Basis, Monomial, Permutation, Polynomial};
pub use sdp::{solve_feasibility, verify_certificate, SdpConfig, SdpStatus};
