//! Exact computations with additive higher Chow groups of 0-cycles, absolute
//! Kähler forms, and constant-modulus degenerations.

pub mod curves;
pub mod cycles;
pub mod degeneration;
pub mod error;
pub mod factor;
pub mod field;
pub mod forms;
pub mod milnor;
pub mod parse;
pub mod poly;
pub mod presentation;
pub mod random;
pub mod report;
pub mod verify;

pub use cycles::{QPoint, ZeroCycle};
pub use error::{Error, Result};
pub use field::{Elem, FieldTower};
pub use forms::DifferentialForm;
pub use milnor::MilnorSymbol;
pub use poly::{BaseField, MPoly, RatFn, Scalar};
pub use presentation::PresentationElement;
