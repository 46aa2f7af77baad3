//! Closed-form and series evaluation of the densities used throughout the
//! crate, plus the Gamma and Mittag-Leffler functions.

mod gamma;
mod mittag_leffler;
mod stable;

pub use gamma::{gamma_fn, ln_gamma};
pub use mittag_leffler::mittag_leffler;
pub use stable::{
    inverse_subordinator_density, inverse_subordinator_density_beta, reflected_density_from_zero,
    spectrally_negative_density_pos, stable_subordinator_density, OneSidedStable, StableDensities,
};

pub(crate) use gamma::gamma_unchecked;
