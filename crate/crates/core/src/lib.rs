//! Complete sets of mutually unbiased bases from finite presemifields,
//! symplectic spreads and (pseudo-)planar functions, with exact verification
//! in cyclotomic integers.
//!
//! ```
//! use mubforge::ff::make_field;
//! use mubforge::mub::{build_even_symplectic, verify_mub, VerifyMode};
//! use mubforge::semifield::{catalog, Family, Params};
//!
//! let f = make_field(2, 3, None)?;
//! let set = build_even_symplectic(&catalog(&f, Family::Field, &Params::default())?)?;
//! assert_eq!(set.bases().len(), 9);
//! assert!(verify_mub(&set, VerifyMode::Full).passed);
//! # Ok::<(), mubforge::Error>(())
//! ```

pub mod cyclo;
pub mod error;
pub mod ff;
pub mod gr4;
pub mod mub;
pub mod pauli;
pub mod semifield;
pub mod spread;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/semifields.md")]
    mod semifields {}
    #[doc = include_str!("../../../book/src/spreads.md")]
    mod spreads {}
    #[doc = include_str!("../../../book/src/mubs.md")]
    mod mubs {}
    #[doc = include_str!("../../../book/src/pauli.md")]
    mod pauli {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
