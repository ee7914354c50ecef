//! Certified mutation pipelines for semiorthogonal decompositions of
//! Thaddeus moduli spaces of stable pairs.
//!
//! The engine reconstructs, step by step, the standard mutation sequences
//! ("weaves") relating the Beilinson collection on `M_0 ≅ P^{d+g-2}` to
//! decompositions of the maximal stable-pair space `M_{i_d}(d)`, the
//! even-determinant noncommutative resolution, and the quasi-BPS categories
//! on the Hecke correspondence. Every mutation and reordering step is
//! certified against inequality-based vanishing criteria, and the final
//! decompositions are cross-checked numerically through Hochschild-homology
//! ledgers derived from bivariate Hodge polynomials.
//!
//! Blocks are purely symbolic labels for Fourier-Mukai kernels; no sheaf
//! theory is performed. All scheduling arithmetic is exact rational.

pub mod error;
pub mod lattice;
pub mod oracle;
pub mod weights;
pub mod hodge;
pub mod twill;
pub mod pipeline;
pub mod plainweave;
pub mod hecke;
pub mod emit;
pub mod report;

pub use error::EngineError;
pub use lattice::{Ambient, Annotation, Block, KernelFamily, LineBundle, ModuliParams, Sod};
pub use oracle::{Certificate, Predicate, Verdict};
