//! Forward and inverse elastic scattering by an unbounded rough surface.
//!
//! * [`kernels`]: Bessel/Hankel functions, Navier Green's tensor, stress kernels.
//! * [`forward`]: Nyström boundary-integral solver producing Cauchy data.
//! * [`imaging`]: the direct imaging function and ridge extraction.
//! * [`verify`]: numerical checks of the underlying identities.

pub mod error;
pub mod forward;
pub mod imaging;
pub mod kernels;
pub mod verify;

pub use error::{Error, Result};
