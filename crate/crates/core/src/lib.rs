//! Discrete simple pursuit on CAT(K) domains: geodesic geometry for a few
//! concrete spaces, polygonal-curve analytics, the pursuit engine, and
//! monitors for the inequalities the game is known to satisfy.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curves;
pub mod domain;
pub mod error;
pub mod pursuit;
pub mod scenario;
pub mod verify;

pub use domain::{Direction, DomainSpec, GeodesicPath, PathEnd, Point, TieBreak};
pub use error::{Error, Result};
