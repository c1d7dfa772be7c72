//! k-systems, abstract objective functions and polynomial-size certificates
//! for graphs of simple polytopes.
//!
//! * [`graph`]: polytope graphs, orientations, h-vectors and `H^k` sums.
//! * [`ksystem`]: k-frames and k-system validation.
//! * [`certificate`]: verifiers for face and AOF certificates, and facet
//!   reconstruction from the 2-faces.
//! * [`oracle`]: generated instances with known faces, used as ground truth.
//! * [`search`]: exhaustive orientation and k-system search.
//! * [`format`]: canonical JSON documents.
//! * [`cli`]: the `ksys` command-line tool.

pub mod certificate;
pub mod cli;
pub mod error;
pub mod format;
pub mod graph;
pub mod ksystem;
pub mod oracle;
pub mod search;

pub use error::{Error, Result};
