//! Dense matrices, a weighted-least-squares solver and seedable random
//! streams. Everything downstream builds on this kernel, so all of it is
//! deterministic given its inputs.

mod matrix;
mod rng;
mod wls;

pub use matrix::Matrix;
pub use rng::Rng;
pub use wls::solve_wls;
