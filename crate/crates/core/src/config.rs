use std::path::PathBuf;

use crate::error::NodalError;

pub const DEFAULT_MAX_DELTA: usize = 4;
pub const DEFAULT_SAMPLE_COUNT: usize = 3;
pub const DEFAULT_SEED: u64 = 0x6e6f_6465_7331;

/// Run-time knobs shared by the localization, fitting and CLI layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub max_delta: usize,
    /// Number of independent equivariant samples every integral is checked on.
    pub sample_count: usize,
    pub rng_seed: u64,
    pub cache_path: Option<PathBuf>,
    /// Worker threads; 0 lets rayon decide.
    pub thread_count: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_delta: DEFAULT_MAX_DELTA,
            sample_count: DEFAULT_SAMPLE_COUNT,
            rng_seed: DEFAULT_SEED,
            cache_path: None,
            thread_count: 0,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<(), NodalError> {
        if self.sample_count < 2 {
            return Err(NodalError::Config(format!(
                "sample_count must be at least 2, got {}",
                self.sample_count
            )));
        }
        Ok(())
    }

    pub fn check_delta(&self, delta: usize) -> Result<(), NodalError> {
        if delta > self.max_delta {
            return Err(NodalError::DeltaOutOfRange {
                delta,
                max: self.max_delta,
            });
        }
        Ok(())
    }

    /// Runs `f` on a rayon pool sized by `thread_count`.
    pub fn install<T: Send, F: FnOnce() -> T + Send>(&self, f: F) -> T {
        if self.thread_count == 0 {
            return f();
        }
        match rayon::ThreadPoolBuilder::new()
            .num_threads(self.thread_count)
            .build()
        {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = Config::default();
        assert_eq!(c.max_delta, 4);
        assert_eq!(c.sample_count, 3);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_single_sample() {
        let c = Config {
            sample_count: 1,
            ..Config::default()
        };
        assert!(matches!(c.validate(), Err(NodalError::Config(_))));
    }

    #[test]
    fn delta_cap() {
        let c = Config::default();
        c.check_delta(4).unwrap();
        assert!(matches!(
            c.check_delta(5),
            Err(NodalError::DeltaOutOfRange { delta: 5, max: 4 })
        ));
    }
}
