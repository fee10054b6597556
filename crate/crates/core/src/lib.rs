//! Graded polynomial identities of the tensor square of the Grassmann algebra.
//!
//! The crate is organised bottom-up: exact scalars, the Grassmann algebra and
//! its tensor square, the free graded algebra, the identity catalog, a
//! normal-form rewriter modulo the identity ideal, identity checkers over
//! finite-rank truncations, and constructive substitution builders.

pub mod acceptance;
pub mod checker;
pub mod freealg;
pub mod grassmann;
pub mod identities;
pub mod rewrite;
pub mod scalar;
pub mod tensor_square;
pub mod witness;

pub use freealg::{parse, parse_polynomial, Expr, GradedPolynomial, VarKind, Variable};
pub use grassmann::{ExteriorMonomial, GradingMap};
pub use scalar::{Field, Scalar};
pub use tensor_square::{BasisElement, BiDegree, GradingScheme, Ranks, TensorElement};
