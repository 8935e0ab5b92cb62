//! Exact-arithmetic engine for the combinatorial and sign-theoretic side of
//! open Gromov-Witten theory: orientation signs for fiber products of
//! oriented linear models, boundary-strata combinatorics with their
//! cancellation identities, and an open WDVV equation system over truncated
//! Novikov series.

pub mod cancel;
pub mod constraint;
pub mod decomp;
pub mod exact;
pub mod monoid;
pub mod oriented;
pub mod parity;
pub mod signs;
pub mod twolevel;
pub mod verify;
