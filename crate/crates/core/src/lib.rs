//! Attention dynamics on content-competition networks.
//!
//! Disseminators compete for viewer attention through a Lotka–Volterra
//! model with a boredom memory term. The competition weights come from
//! cosine similarity of content profiles, and the largest eigenvalue `λ` of
//! the weight matrix controls the steady attention of the spectrally reduced
//! system. The imitation intervention (one node copying another's content)
//! is analysed through the rank-two perturbation it induces on the weights.
//!
//! Modules:
//! - [`network`]: profiles, network construction and the random generators
//! - [`spectral`]: power iteration, eigenvector centrality, `μ`
//! - [`dynamics`]: full and reduced simulators, closed-form fixed point
//! - [`imitation`]: the intervention and its perturbation analysis
//! - [`experiments`]: all-pairs scans and noise sweeps
//! - [`report`]: CSV output

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod imitation;
pub mod matrix;
pub mod network;
pub mod ode;
pub mod output;
pub mod report;
pub mod spectral;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use network::{CompetitionNetwork, FeatureProfile, GeneratorSpec, NetworkKind};
pub use spectral::SpectralSummary;

#[cfg(test)]
#[path = "../tests/common/jacobi.rs"]
mod jacobi_oracle;
