//! Formal concept enumeration.
//!
//! Two Close-by-One engines list every formal concept of a binary context:
//!
//! * [`horizontal`] keeps the context as packed rows and extents as object
//!   lists, with a local queue per recursion frame;
//! * [`vertical`] keeps both context columns and extents as block-sparse bit
//!   arrays and records spawned children in one queue indexed by concept
//!   number.
//!
//! [`oracle`] provides a brute-force reference, [`io`] the file formats and
//! [`bench`] the timing and storage comparison used by the `fca` binary.

pub mod bench;
pub mod bits;
pub mod cli;
pub mod context;
pub mod engine;
pub mod error;
pub mod horizontal;
pub mod io;
pub mod oracle;
pub mod vertical;

pub use bits::{BlockExtent, HorizontalContext, VerticalContext, WordWidth};
pub use context::{AttributeSet, Concept, ConceptSet, FormalContext, IndexSet, ObjectSet};
pub use engine::{ConceptTree, Enumeration, EnumerationStats, Enumerator, IncludeBottom, TreeNode};
pub use error::{FcaError, Result};
pub use horizontal::{enumerate_horizontal, HorizontalEngineConfig};
pub use vertical::{enumerate_vertical, VerticalEngineConfig};
