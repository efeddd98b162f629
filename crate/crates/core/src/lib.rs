//! Khovanov homology and Bar-Natan's characteristic-two deformation of links.
//!
//! The crate computes homology over `F₂[u]/uᵏ` of the cube-of-resolutions
//! complex of a planar diagram, the u-adic spectral sequence of that complex,
//! and the exterior-algebra model of the branched-double-cover E¹ page
//! together with its identification with reduced `BN²`.
//!
//! Modules, bottom-up:
//! - [`ringalg`]: `F₂[u]/uᵏ` arithmetic, bit-packed `F₂` matrices, nilpotent
//!   block decomposition.
//! - [`linkdiag`]: PD parsing, braid and plat closures, resolutions, the
//!   Kauffman-bracket Jones oracle, the bundled link table.
//! - [`khcube`]: the bigraded chain complex.
//! - [`homology`]: module-valued bigraded homology, Euler characteristic,
//!   connecting maps and the exact triangle.
//! - [`sseq`]: spectral sequences of finite filtered `F₂` complexes.
//! - [`brcover`]: the E¹ complex on exterior algebras and the map `φ`.

pub mod brcover;
pub mod homology;
pub mod khcube;
pub mod linkdiag;
pub mod par;
pub mod ringalg;
pub mod sseq;

pub use homology::{bigraded_homology, ModuleDecomp};
pub use khcube::{build_complex, FreeComplex, GradedComplex};
pub use linkdiag::{parse_pd, Diagram};
