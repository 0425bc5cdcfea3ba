//! Validated run configuration: global flags, environment defaults, and the
//! enumeration budget pre-check.

use std::path::PathBuf;
use unitri_core::{Error, Result};

/// Environment variable supplying the default worker count.
pub const WORKERS_ENV: &str = "UNITRI_WORKERS";

/// Default enumeration budget: jobs touching more elements are refused
/// unless overridden.
pub const DEFAULT_BUDGET: u128 = 1 << 34;

/// Default seed for the sampled bounds checks.
pub const DEFAULT_SEED: u64 = 0x5eed_cafe;

/// Global options shared by every subcommand, fully validated.
pub struct RunConfig {
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub override_budget: bool,
    pub budget: u128,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(
        workers: Option<usize>,
        out: Option<PathBuf>,
        override_budget: bool,
        budget: Option<u128>,
        seed: Option<u64>,
    ) -> Result<RunConfig> {
        let workers = match workers {
            Some(w) => w,
            None => workers_from_env()?,
        };
        if workers == 0 {
            return Err(Error::Parse(
                "--workers must be at least 1".to_string(),
            ));
        }
        Ok(RunConfig {
            workers,
            out,
            override_budget,
            budget: budget.unwrap_or(DEFAULT_BUDGET),
            seed: seed.unwrap_or(DEFAULT_SEED),
        })
    }

    /// Refuses jobs that would enumerate more than `budget` elements,
    /// mirroring the library's own guard so a lowered `--budget` bites
    /// before any work starts.
    pub fn precheck(&self, q: u64, exponent: usize) -> Result<()> {
        if self.override_budget {
            return Ok(());
        }
        let mut size: u128 = 1;
        for _ in 0..exponent {
            size = size.saturating_mul(q as u128);
        }
        if size > self.budget {
            let bits = 127 - self.budget.leading_zeros();
            return Err(Error::BudgetExceeded(format!("q^{exponent} = {size}"), bits));
        }
        Ok(())
    }
}

fn workers_from_env() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            Error::Parse(format!(
                "{WORKERS_ENV}={text:?} is not a worker count"
            ))
        }),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |p| p.get())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worker_validation() {
        assert!(RunConfig::new(Some(0), None, false, None, None).is_err());
        let c = RunConfig::new(Some(3), None, false, None, None).unwrap();
        assert_eq!(c.workers, 3);
        assert_eq!(c.budget, DEFAULT_BUDGET);
        assert_eq!(c.seed, DEFAULT_SEED);
    }

    #[test]
    fn budget_precheck() {
        let c = RunConfig::new(Some(1), None, false, Some(1000), None).unwrap();
        assert!(c.precheck(2, 9).is_ok());
        assert!(matches!(c.precheck(2, 10), Err(Error::BudgetExceeded(..))));
        let o = RunConfig::new(Some(1), None, true, Some(1000), None).unwrap();
        assert!(o.precheck(2, 100).is_ok());
    }
}
