//! Content-based user models on the hypercube.
//!
//! Items are vertices of `{0,1}^n`, one coordinate per Boolean attribute.
//! A user is modelled as the vertex whose distances to the rated items best
//! match the distances implied by the ratings: a binary vertex under the
//! Hamming distance, or a ternary vertex in `{-1,0,1}^n` under the
//! don't-care distance. Fitting minimizes the sum of absolute deviations.
//!
//! - [`scale`], [`vector`], [`rating`], [`distance`]: domain types and the
//!   star/distance conversions
//! - [`solver`]: objectives and the exact, anytime and export routes
//! - [`eval`]: prediction, cross-validation, training curves, significance
//! - [`data`]: data set files, predictions CSV, summaries, synthetic users

pub mod data;
pub mod distance;
pub mod error;
pub mod eval;
pub mod rating;
pub mod scale;
pub mod solver;
pub mod vector;

pub use distance::{distance, hamming, ternary_distance};
pub use error::{Error, Result};
pub use rating::{distance_to_star, drating_to_star, star_to_drating, DRating, RatingRecord};
pub use scale::{AttributeSpace, RatingScale};
pub use solver::{Budget, FitInstance, FitResult, SolverConfig, SolverKind, Status};
pub use vector::{ItemVector, UserModel, Variant};
