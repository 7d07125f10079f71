//! Pattern matrices, the separating functional `L_D`, psd and nonnegative
//! factorizations of pattern matrices, rescaling and degree-reduction
//! experiments.

mod degred;
mod factor;
mod nonneg;
mod pattern;

pub use degred::*;
pub use factor::*;
pub use nonneg::*;
pub use pattern::*;
