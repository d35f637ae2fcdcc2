//! Resolution model, interferogram demodulation and magnification fitting for
//! near-field quantum imaging with undetected light.
//!
//! Lengths are SI meters throughout. Camera coordinates relate to crystal
//! coordinates by `x_c = M_d·x_d`, object coordinates by `x_o = M_u·x_u`.

pub mod biphoton;
pub mod config;
pub mod dpsh;
pub mod error;
pub mod fitting;
pub mod imaging;
pub mod io;
pub mod model;
pub mod quadrature;
pub mod signal;
pub mod spreads;
pub mod units;

pub use config::{load_config, parse_config, Config};
pub use error::{Error, Result};
pub use model::{OpticalSetup, RegimeReport, SourceParams};
pub use signal::{Grid1D, Image2D, Plane, Profile1D};
