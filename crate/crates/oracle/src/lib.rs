//! Synthetic ledgers and brute-force reference implementations.
//!
//! Two halves, both deliberately small: a seeded, counter-based generator
//! that produces sorted, overdraft-free transfer histories with matching
//! rebase snapshots, and naive arbitrary-precision restatements of balance
//! and turnover accounting that share no arithmetic with the main engine.
//! The generator feeds property suites; the restatements are the ground
//! truth those suites compare against.

pub mod balances;
pub mod gen;
pub mod rng;
pub mod velocity;

pub use balances::{oracle_balances, oracle_minted};
pub use gen::{
    generate, generate_cutover_fixture, CutoverFixture, GeneratorConfig, BURN_ROUTE_CHANCE,
};
pub use rng::{OracleRng, ALGORITHM};
pub use velocity::{
    oracle_account_velocities, oracle_global_velocity, oracle_stack_balances, oracle_velocity,
};
