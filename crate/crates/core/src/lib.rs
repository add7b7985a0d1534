//! Perfect secret sharing on hypercube and lattice graphs, with exact
//! entropy-method lower bounds.
//!
//! ```
//! use hypershare::entropy::{check_perfect, ratio_report};
//! use hypershare::scheme::build_cube_scheme;
//!
//! let s = build_cube_scheme(3, None)?;
//! assert!(check_perfect(&s)?.is_perfect());
//! assert_eq!(ratio_report(&s).worst, hypershare::Rational::new(3, 2));
//!
//! let bundle = s.deal(&[4, 1], 7)?;
//! assert_eq!(s.reconstruct_bundle(&bundle, 0b000, 0b001)?, vec![4, 1]);
//! # Ok::<(), hypershare::Error>(())
//! ```

pub mod bounds;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod field;
pub mod graphs;
pub mod rational;
pub mod scheme;

pub use error::{Error, Result};
pub use rational::Rational;
