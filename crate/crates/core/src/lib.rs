//! Braid-group algebra and knot parametrizations.
//!
//! * [`braid`] and [`garside`]: exact braid words, permutation braids, Garside
//!   normal forms and the summit-set solution of the conjugacy problem.
//! * [`holonomic`]: rewriting closed braids into negative-then-positive form
//!   with mechanically checkable isotopy certificates.
//! * [`curve`]: numerical engine for curves `(-f, f', -f'')` built from a
//!   trigonometric series `f`.
//! * [`legendrian`]: the Legendrian cousins of those curves and their fronts.

pub mod braid;
pub mod curve;
pub mod error;
pub mod garside;
pub mod holonomic;
pub mod legendrian;
pub mod par;

pub use braid::{BraidWord, Permutation, PermutationBraid};
pub use error::{BraidError, Result};
pub use garside::NormalForm;
pub use par::Exec;
