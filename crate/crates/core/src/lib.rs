//! Exact Möbius inversion in filtered coalgebras and its Rota–Baxter
//! extension to Hopf-algebraic BPHZ renormalisation.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`]: exact rationals and truncated Laurent series with the
//!   pole-part projection.
//! * [`lincomb`]: finite formal linear combinations over ordered keys.
//! * [`algebra`]: target algebras for convolution (ℚ, Laurent series).
//! * [`coalg`]: the coalgebra contract, linear maps, convolution, and the
//!   Möbius inversion engine.
//! * [`incidence`]: poset, divisibility and (ℕ,+) coalgebras plus the
//!   classical arithmetic-function examples.
//! * [`bialg`]: bialgebras, characters, the `T` operator and the antipode.
//! * [`renorm`]: Rota–Baxter operators, Bogoliubov and Atkinson counter-terms,
//!   Birkhoff decomposition.
//! * [`trees`]: the rooted-forest Hopf algebra and toy Feynman-rule characters.

pub mod algebra;
pub mod bialg;
pub mod coalg;
mod error;
pub mod exact;
pub mod incidence;
pub mod lincomb;
pub mod renorm;
pub mod trees;

pub use algebra::{Algebra, LaurentRing, Rationals};
pub use bialg::{Bialgebra, BialgebraTarget, Character};
pub use coalg::{Coalgebra, LinMap};
pub use error::{Error, ParseError, Result};
pub use exact::{LaurentSeries, Rational};
pub use lincomb::{LinComb, Tensor};
pub use renorm::{BirkhoffPair, RotaBaxter};
pub use trees::{Forest, Tree};
