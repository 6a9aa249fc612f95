//! Fuzzy calculus on α-level endpoint grids.
//!
//! * [`number`]: fuzzy numbers, levelwise addition and scalar
//!   multiplication, and the discretized validity check.
//! * [`calculus`]: fuzzy-valued functions, Seikkala and generalized
//!   Seikkala (gS) derivatives, and their classification.
//! * [`fivp`]: the fuzzy decay problem `y' = −y`, solved in closed form and
//!   with RK4 on the endpoint-coupled system, plus solution validation.
//! * [`format`] and [`cli`]: CSV output and the command-line front end.
//!
//! ```
//! use fuzzcalc::calculus::{classify, exp_decay, DerivativeKind};
//! use fuzzcalc::number::{AlphaGrid, FuzzyNumber};
//!
//! let a = FuzzyNumber::triangular(1.0, 2.0, 3.0, AlphaGrid::default()).unwrap();
//! let g = exp_decay(&a).unwrap();
//! assert_eq!(classify(&g, 0.5).unwrap(), DerivativeKind::GsOnly);
//! ```

pub mod calculus;
pub mod cli;
pub mod fivp;
pub mod format;
pub mod number;

pub use calculus::{DerivativeKind, DerivativeResult, FuzzyFunction};
pub use fivp::{DecayProblem, IvpSolution, SolverConfig};
pub use number::{AlphaGrid, FuzzyNumber, Interval, ValidityReport};
