//! Dual-sequence polynomials `D_n(x,y)`, `S_n(x,y)`, binomially weighted
//! Catalan sums and prime-power residue arithmetic, together with exhaustive
//! verifiers for the congruences they satisfy modulo `p`, `p^2` and `p^3`.
//!
//! * [`modring`]: `Z/p^e`, rational embedding, Legendre symbols, binomial tables.
//! * [`sequences`]: residue-ring evaluation of the sequences.
//! * [`oracle`]: independent exact-rational evaluation for cross-checks.
//! * [`verify`]: per-statement checks and the prime sweep.
//! * [`cli`]: the `dualcong` command line.

pub mod cli;
pub mod error;
pub mod modring;
pub mod oracle;
pub mod sequences;
pub mod statement;
pub mod verify;

pub use error::{Error, Result};
pub use modring::{BinomialTables, ExactRational, Modulus, Residue};
pub use statement::{Params, Statement};
pub use verify::{SweepPlan, VerificationRecord};
