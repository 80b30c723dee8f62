//! Metric modulars, the spaces and metrics they generate, modular
//! contractions, and Carathéodory initial-value problems solved by
//! successive approximation in the space of functions of bounded
//! generalized φ-variation.

// `!(x > 0.0)` guards reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
mod extreal;

pub mod fixed_point;
pub mod gv;
pub mod modular;
pub mod ode;
pub mod phi;
pub mod sequences;

pub use error::{Error, Result};
pub use extreal::ExtReal;
pub use gv::{AcFunction, GvModular};
pub use modular::{Flags, Modular};
pub use phi::PhiFunction;
