//! File formats, parallel drivers and the `cubicwa` command line on top of
//! [`cubicwa_core`].

pub mod cli;
pub mod docs;
pub mod error;
pub mod par;
pub mod text;

pub use error::InputError;
