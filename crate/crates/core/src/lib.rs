//! Linear systems of curves with multiple base points on Hirzebruch surfaces.
//!
//! A system `L_n(a, b, m_1, ..., m_r)` is the class `aF + bH` on `F_n` with
//! `r` general points of the given multiplicities. The crate computes virtual
//! and expected dimensions, detects (-1)-special systems by reducing against
//! (-1)-curves, proves dimensions by degeneration, and estimates them
//! numerically over prime fields.

pub mod curves;
pub mod degeneration;
pub mod error;
pub mod lattice;
pub mod notation;
pub mod oracle;
pub mod reduction;
pub mod scan;
pub mod table1;
pub mod transform;

pub use error::{Error, Result};
pub use lattice::{BlowupClass, DimensionTriple, DivisorClass, SystemSpec};
