//! Spectral and combinatorial weights of rooted trees.
//!
//! * [`tree`]: rooted/unrooted trees, generators, rooted sum, product and
//!   power, moment and root-transmission.
//! * [`exact`]: exact integer path, bottleneck and neckbottle matrices,
//!   their inverses and Kronecker forms.
//! * [`spectral`]: Perron value, Perron vector, Perron entropy.
//! * [`fiedler`]: type I / type II classification and algebraic connectivity.
//! * [`bounds`]: machine checks of the moment/Perron-value inequalities and
//!   ratio experiments.
//! * [`cli`]: the command-line front end.

pub mod bounds;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod exact;
pub mod fiedler;
pub mod format;
pub mod rng;
pub mod spectral;
pub mod tree;

pub use error::{Error, Result};
pub use exact::ExactMatrix;
pub use spectral::{EntropyResult, SpectralResult};
pub use tree::{RootedTree, UnrootedTree};
