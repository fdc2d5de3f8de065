use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How long an anytime solver may run.
///
/// Wall-clock budgets suit interactive use; iteration budgets
/// make runs reproducible bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    Time(#[serde(with = "millis")] Duration),
    Iterations(u64),
    Unlimited,
}

impl Budget {
    pub fn millis(ms: u64) -> Self {
        Budget::Time(Duration::from_millis(ms))
    }

    pub(crate) fn validate(self) -> Result<Self> {
        match self {
            Budget::Time(d) if d.is_zero() => Err(Error::domain("time budget must be positive")),
            Budget::Iterations(0) => Err(Error::domain("iteration budget must be positive")),
            b => Ok(b),
        }
    }

    pub fn is_deterministic(self) -> bool {
        !matches!(self, Budget::Time(_))
    }
}

mod millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

/// Cooperative budget check, polled between units of work.
#[derive(Debug)]
pub(crate) struct Clock {
    start: Instant,
    deadline: Option<Instant>,
    limit: u64,
    used: u64,
    expired: bool,
}

/// Wall-clock reads happen once per this many ticks.
const POLL_EVERY: u64 = 16;

impl Clock {
    pub(crate) fn start(budget: Budget) -> Self {
        let start = Instant::now();
        let (deadline, limit) = match budget {
            Budget::Time(d) => (Some(start + d), u64::MAX),
            Budget::Iterations(k) => (None, k),
            Budget::Unlimited => (None, u64::MAX),
        };
        Clock { start, deadline, limit, used: 0, expired: false }
    }

    /// Consumes one unit. Returns `false` once the budget is spent.
    #[inline]
    pub(crate) fn tick(&mut self) -> bool {
        if self.expired {
            return false;
        }
        if self.used >= self.limit {
            self.expired = true;
            return false;
        }
        if let Some(deadline) = self.deadline {
            if self.used % POLL_EVERY == 0 && Instant::now() >= deadline {
                self.expired = true;
                return false;
            }
        }
        self.used += 1;
        true
    }

    pub(crate) fn used(&self) -> u64 {
        self.used
    }

    pub(crate) fn expired(&self) -> bool {
        self.expired
    }

    pub(crate) fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_limit() {
        let mut clock = Clock::start(Budget::Iterations(3));
        assert!(clock.tick() && clock.tick() && clock.tick());
        assert!(!clock.tick());
        assert!(clock.expired());
        assert_eq!(clock.used(), 3);
    }

    #[test]
    fn tiny_time_budget_expires() {
        let mut clock = Clock::start(Budget::Time(Duration::from_nanos(1)));
        std::thread::sleep(Duration::from_millis(1));
        assert!(!clock.tick());
    }

    #[test]
    fn validation_and_serde() {
        assert!(Budget::Iterations(0).validate().is_err());
        assert!(Budget::Time(Duration::ZERO).validate().is_err());
        let json = serde_json::to_string(&Budget::millis(1500)).unwrap();
        assert_eq!(json, r#"{"time":1500}"#);
        assert_eq!(serde_json::to_string(&Budget::Iterations(7)).unwrap(), r#"{"iterations":7}"#);
    }
}
