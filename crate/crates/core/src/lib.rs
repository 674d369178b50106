pub mod aml;
pub mod bigfixed;
pub mod builtin;
pub mod commands;
pub mod error;
pub mod evaluator;
pub mod gamma;
pub mod io;
pub mod linalg;
pub mod manifold;
pub mod numeric;
pub mod par;
pub mod quadrature;
pub mod ring;
pub mod scaled;
pub mod spectra;
pub mod special;
pub mod streams;

pub use error::{Error, Result};
pub use numeric::C64;
pub use ring::{ClassValue, RingPresentation};
pub use scaled::ScaledClass;
pub use streams::CoeffStream;
