//! Totally nonnegative flag varieties and coadjoint orbits of the unitary group.
//!
//! The crate certifies total positivity of matrices, unitary flag
//! representatives and orbit points, implements the twist map and its
//! symmetries, constructs Jacobi matrices from Moser data, integrates the
//! Kähler, normal and induced gradient flows together with the Toda flow, and
//! projects flows through amplituhedron maps.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod ampli;
pub mod error;
pub mod flagorbit;
pub mod flows;
pub mod io;
pub mod jacobi;
pub mod linalg;
pub mod perm;
pub mod positivity;
pub mod toda;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, IndexSet, C64};
