//! Numerical experiments on realized portraits and hyperbolic sequences.

pub mod john;
pub mod julia;
pub mod sectors;
pub mod words;

pub use john::{ray_length_diagnostic, JohnFit};
pub use julia::{critical_values, hyperbolicity_estimate, julia_sample, postcritical_distance, HyperbolicityEstimate, PDEstimate};
pub use sectors::{sector_theorem_check, ProbeCount, SectorReport};
pub use words::{measure_word, word_experiment, SearchOptions, WordMeasurement, WordReport};
