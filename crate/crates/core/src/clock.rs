//! Injected time source. Library code never reads the system clock
//! directly; callers pass a [`SystemClock`] in production and a
//! [`SimClock`] in tests and simulations.

use std::sync::atomic::{AtomicI64, Ordering};
use std::time::{Duration, Instant};

use chrono::{DateTime, FixedOffset, Local, SecondsFormat, TimeZone};

pub trait Clock: Send + Sync {
    fn now(&self) -> DateTime<FixedOffset>;

    fn sleep(&self, duration: Duration);

    fn unix_seconds(&self) -> i64 {
        self.now().timestamp()
    }
}

/// Wall-clock time in the local offset.
#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<FixedOffset> {
        Local::now().fixed_offset()
    }

    fn sleep(&self, duration: Duration) {
        std::thread::sleep(duration);
    }
}

/// Logical clock with millisecond resolution. `sleep` advances it
/// instantly, so a simulated hour of polling costs no wall time.
#[derive(Debug)]
pub struct SimClock {
    millis: AtomicI64,
    offset: FixedOffset,
}

impl SimClock {
    pub fn new(start: DateTime<FixedOffset>) -> Self {
        SimClock {
            millis: AtomicI64::new(start.timestamp_millis()),
            offset: *start.offset(),
        }
    }

    pub fn parse(rfc3339: &str) -> Result<Self, chrono::ParseError> {
        Ok(Self::new(DateTime::parse_from_rfc3339(rfc3339)?))
    }

    pub fn advance(&self, duration: Duration) {
        self.millis
            .fetch_add(duration.as_millis() as i64, Ordering::SeqCst);
    }

    /// Move forward to `millis` (unix epoch). Never moves backwards.
    pub fn advance_to_millis(&self, millis: i64) {
        self.millis.fetch_max(millis, Ordering::SeqCst);
    }

    pub fn now_millis(&self) -> i64 {
        self.millis.load(Ordering::SeqCst)
    }
}

impl Clock for SimClock {
    fn now(&self) -> DateTime<FixedOffset> {
        self.offset
            .timestamp_millis_opt(self.now_millis())
            .single()
            .expect("simulated time in range")
    }

    fn sleep(&self, duration: Duration) {
        self.advance(duration);
    }
}

/// Real time elapsed since construction, replayed from a fixed start
/// instant. Lets a live simulator serve a scenario's timeline.
#[derive(Debug, Clone)]
pub struct ReplayClock {
    start: DateTime<FixedOffset>,
    origin: Instant,
}

impl ReplayClock {
    pub fn new(start: DateTime<FixedOffset>) -> Self {
        ReplayClock { start, origin: Instant::now() }
    }
}

impl Clock for ReplayClock {
    fn now(&self) -> DateTime<FixedOffset> {
        self.start + self.origin.elapsed()
    }

    fn sleep(&self, duration: Duration) {
        std::thread::sleep(duration);
    }
}

impl<C: Clock + ?Sized> Clock for std::sync::Arc<C> {
    fn now(&self) -> DateTime<FixedOffset> {
        (**self).now()
    }

    fn sleep(&self, duration: Duration) {
        (**self).sleep(duration)
    }
}

/// `2018-10-29T12:13:01+01:00`; sub-second digits only when non-zero.
pub fn format_timestamp(t: &DateTime<FixedOffset>) -> String {
    t.to_rfc3339_opts(SecondsFormat::AutoSi, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sim_clock_keeps_offset_and_advances() {
        let clock = SimClock::parse("2018-10-29T12:13:01+01:00").unwrap();
        assert_eq!(format_timestamp(&clock.now()), "2018-10-29T12:13:01+01:00");
        clock.sleep(Duration::from_secs(10));
        assert_eq!(format_timestamp(&clock.now()), "2018-10-29T12:13:11+01:00");
        clock.advance_to_millis(0);
        assert_eq!(clock.unix_seconds(), 1540811591);
    }
}
