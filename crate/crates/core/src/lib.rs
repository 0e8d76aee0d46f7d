//! Sharp point-line incidence constructions built from generalized arithmetic
//! progressions over number fields, with exact verification.
//!
//! For a nice basis `Λ` of a number field `K` (products of basis elements are
//! integer combinations of the basis), the grid `A_r(Λ) × A_{N/r}(Λ)` carries
//! a family of `Ω(N²/r³)` lines, each containing `|A_r(Λ)|` grid points.
//!
//! * [`numberfield`]: exact arithmetic from structure constants.
//! * [`gap`]: the symmetric coefficient boxes `A_m(Λ)`.
//! * [`construction`]: parameters, grids, line families and the registry of
//!   named construction strategies.
//! * [`incidence`]: exact richness verification and a brute-force oracle.
//! * [`export`]: CSV/JSON tables for plotting.

pub mod construction;
pub mod export;
pub mod gap;
pub mod incidence;
pub mod json;
pub mod numberfield;

pub use construction::{
    derive_params, evaluate_line_at, ConstructionError, ConstructionParams, ConstructionRegistry,
    ConstructionRequest, ConstructionStrategy, Line, PointGrid,
};
pub use gap::{integer_nth_root, GapBox};
pub use incidence::{verify_construction, IncidenceError, RichnessReport, VerifyOptions};
pub use numberfield::{BasisSpec, IntElement, MinimalPolynomial, RatElement, StructureTable};
