//! Minimal dense tensor engine with reverse-mode automatic differentiation.
//!
//! Values are `f64`, row-major, with explicit shapes. A [`Tape`] records every
//! operation in construction order, which is already a topological order, so
//! [`Tape::backward`] is a single reverse sweep over the recorded nodes.
//!
//! ```
//! use desc_autograd::{Tape, Tensor};
//!
//! let mut tape = Tape::new();
//! let w = tape.param(&Tensor::scalar(3.0));
//! let sq = tape.mul(w, w).unwrap();
//! tape.backward(sq).unwrap();
//! assert_eq!(tape.grad(w).unwrap(), &[6.0]);
//! ```

mod error;
mod tape;
mod tensor;

pub use error::{Result, TensorError};
pub use tape::{Tape, Var};
pub use tensor::Tensor;
