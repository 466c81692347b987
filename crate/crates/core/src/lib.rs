//! Semiclassical wave packets in `d` dimensions.
//!
//! The polynomial prefactors `P_k` of the packets are built by the raising
//! recurrence ([`tables::build_recurrence`]), by Taylor extraction from the
//! closed-form generating function ([`tables::build_generating`]) and from
//! the Rodrigues formula ([`tables::build_rodrigues`]). A fourth table comes
//! from applying the raising operators symbolically
//! ([`wavepacket::build_ladder`]). The
//! [`verify`] module compares them; [`gram`] checks orthonormality of the
//! resulting packets by Gauss-Hermite quadrature.
//!
//! Axis arguments (`l`) are zero-based throughout.

pub mod error;
pub mod exec;
pub mod export;
pub mod gram;
pub mod linalg;
pub mod multiindex;
pub mod params;
pub mod poly;
pub mod quadrature;
pub mod tables;
pub mod verify;
pub mod wavepacket;

pub use error::{Error, Result};
pub use exec::Exec;
pub use gram::{eval_grid, gram_matrix, GramMatrix, GridSpec};
pub use linalg::{check_admissible, inv_sqrt_det, polar_decompose, AdmissibilityReport, ComplexMatrix, PolarForm, C64};
pub use multiindex::{enumerate_upto, MultiIndex};
pub use params::{generate_params, generate_params_with, GeneratorOptions, PacketParams, ParamsFile};
pub use poly::{Frame, SparsePoly};
pub use quadrature::{gauss_hermite, QuadratureRule};
pub use tables::{
    build_generating, build_recurrence, build_rodrigues, build_table, eval_generating, BuildOptions, Method,
    PolyTable,
};
pub use wavepacket::{build_ladder, eval_phi0, eval_phik, GaussianState};
