//! Random generators, brute-force oracles and a validator mutation harness
//! shared by the gsnkit test suites and the acceptance runner.

pub mod cycles;
pub mod document;
pub mod expansion;
pub mod impact;
pub mod mutate;
pub mod pattern;
pub mod trace;

use proptest::test_runner::{Config, RngSeed, TestRunner};

/// Fixed seed so every run explores the same cases.
pub const SEED: u64 = 0x6773_6e6b_6974;

/// A proptest configuration with a fixed seed and no failure persistence.
pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        max_shrink_iters: 2048,
        ..Config::default()
    }
}

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new(config(cases))
}
