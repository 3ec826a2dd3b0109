//! Run-wide knobs: numeric tolerance, enumeration bound, caps and seed.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_BOUND: u32 = 12;
pub const DEFAULT_POINT_CAP: usize = 1_000_000;
pub const DEFAULT_WORD_CAP: usize = 8;
pub const DEFAULT_TYPE_CAP: usize = 1_000_000;

static GLOBAL_TOL: AtomicU64 = AtomicU64::new(DEFAULT_TOL.to_bits());

/// Tolerance used by projective comparisons that do not take an explicit one.
pub fn tolerance() -> f64 {
    f64::from_bits(GLOBAL_TOL.load(Ordering::Relaxed))
}

pub fn set_tolerance(tol: f64) -> Result<()> {
    check_tolerance(tol)?;
    GLOBAL_TOL.store(tol.to_bits(), Ordering::Relaxed);
    Ok(())
}

fn check_tolerance(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1e-3 {
        Ok(())
    } else {
        Err(Error::Parse(format!("tolerance {tol} outside (0, 1e-3)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub tolerance: f64,
    pub bound: u32,
    pub word_cap: usize,
    pub point_cap: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tolerance: DEFAULT_TOL,
            bound: DEFAULT_BOUND,
            word_cap: DEFAULT_WORD_CAP,
            point_cap: DEFAULT_POINT_CAP,
            seed: 0,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        check_tolerance(self.tolerance)?;
        if self.bound == 0 || self.word_cap == 0 || self.point_cap == 0 {
            return Err(Error::Parse("caps and bound must be positive".into()));
        }
        Ok(())
    }
}
