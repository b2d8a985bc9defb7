use std::time::{Duration, Instant};

/// Run budget for the randomized searches. `None` fields are unbounded.
///
/// `max_iterations` counts tabu steps for the tabu search and outer
/// construction rounds for the greedy family.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub time_limit: Option<Duration>,
    pub max_iterations: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn seconds(secs: f64) -> Self {
        Self {
            time_limit: Some(Duration::from_secs_f64(secs)),
            max_iterations: None,
        }
    }

    pub fn iterations(n: u64) -> Self {
        Self {
            time_limit: None,
            max_iterations: Some(n),
        }
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    pub(crate) fn start(self) -> Clock {
        Clock {
            start: Instant::now(),
            budget: self,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Clock {
    start: Instant,
    budget: Budget,
}

impl Clock {
    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    pub fn out_of_iterations(&self, done: u64) -> bool {
        self.budget.max_iterations.is_some_and(|m| done >= m)
    }

    pub fn out_of_time(&self) -> bool {
        self.budget.time_limit.is_some_and(|t| self.start.elapsed() >= t)
    }

    pub fn expired(&self, done: u64) -> bool {
        self.out_of_iterations(done) || self.out_of_time()
    }
}
