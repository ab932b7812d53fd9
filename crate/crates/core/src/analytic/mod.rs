//! The exact Gaussian law of the eigenvalue coordinates and the densities
//! derived from it.

mod density;
mod law;
mod wishart;

pub use density::{forced_real_indices, MixturePart, OrderedJpdf, MAX_UNORDERED_N};
pub use law::{spectral_law, LawMethod, SpectralLaw};
pub use wishart::{TwoByTwoLaw, WishartIndex};
