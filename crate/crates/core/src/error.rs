use thiserror::Error;

/// Errors raised by the exact-arithmetic layer and the cycle/form machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different field towers")]
    TowerMismatch,
    #[error("field tower has no algebraic extension")]
    NoExtension,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid field tower: {0}")]
    InvalidTower(String),
    #[error("minimal polynomial is not separable")]
    NotSeparable,
    #[error("minimal polynomial is reducible: {0}")]
    NotIrreducible(String),
    #[error("factorization of a degree-{0} part is not supported over this field")]
    UnsupportedDegree(usize),
    #[error("characteristic {characteristic} divides {divisor}")]
    CharacteristicObstruction { characteristic: u64, divisor: i64 },
    #[error("dlog of zero")]
    ZeroArgument,
    #[error("pole of order {0} along the divisor")]
    HigherOrderPole(i64),
    #[error("form has a non-logarithmic pole along the divisor")]
    NonLogarithmicPole,
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("point not in good position: {0}")]
    BadPosition(String),
    #[error("linearity curve needs a*b != 0")]
    ZeroProduct,
    #[error("modulus b must avoid 0 and 1")]
    DegenerateModulus,
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("map is singular at this point (x0 = 1)")]
    Singular,
    #[error("split has a pole at t = 0: {0}")]
    NegativeLimitValuation(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
