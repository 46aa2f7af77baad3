//! Sampling of stable increments and paths, the inverse subordinator, and
//! the statistics used to compare them.

mod inverse;
mod ks;
mod paths;
mod reflection;
mod samplers;

pub use inverse::{simulate_inverse_subordinator, HittingSampler, InverseMethod, InverseSampler};
pub use ks::{kolmogorov_survival, ks_one_sample, ks_two_sample, KsResult};
pub use paths::{
    fmt17, simulate_extremes, simulate_reflected_path, simulate_reflected_path_from, simulate_subordinator_path,
    simulate_supremum_path, simulate_y_path, PathExtremes, PathSample, ProcessTag,
};
pub use reflection::{reflection_identity_check, reflection_identity_levels, ReflectionEstimate};
pub use samplers::{
    sample_spectrally_negative_increment, sample_subordinator_increment, SpectrallyNegativeSampler,
    SubordinatorSampler,
};

