//! Exact verification engine for nonassociative coalgebras on countable
//! bases.

pub mod closure;
pub mod coalgebra;
pub mod constructions;
pub mod dual;
pub mod error;
pub mod exactlin;
pub mod identities;

pub use error::{Error, Result};
