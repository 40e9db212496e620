//! Finite event sequences `eta: [0, inf) -> Z`.
//!
//! An event sequence is stored as its list of events ordered by time. Several
//! events may share a sample time when an encoder crosses more than one
//! threshold within one step; they are then ordered by an ordinal so that the
//! key `(time, ordinal)` is strictly increasing.

use std::cmp::Ordering;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::norms::discrepancy_fast;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    /// Position among events sharing `time`, starting at 0.
    pub ordinal: u32,
    pub value: i64,
}

impl Event {
    fn key_cmp(&self, other: &Event) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.ordinal.cmp(&other.ordinal))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EventSequence {
    events: Vec<Event>,
}

impl EventSequence {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a sequence from `(time, value)` pairs with strictly increasing
    /// times. Zero values are dropped.
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, i64)>,
    {
        let mut last: Option<f64> = None;
        let mut events = Vec::new();
        for (index, (time, value)) in pairs.into_iter().enumerate() {
            if !time.is_finite() || last.is_some_and(|l| time <= l) {
                return Err(Error::UnorderedEvents { index });
            }
            last = Some(time);
            if value != 0 {
                events.push(Event {
                    time,
                    ordinal: 0,
                    value,
                });
            }
        }
        Ok(Self { events })
    }

    /// Like [`EventSequence::new`] but accepts repeated times; events at the
    /// same time keep their input order.
    pub fn with_ties<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, i64)>,
    {
        let mut seq = Self::empty();
        for (index, (time, value)) in pairs.into_iter().enumerate() {
            seq.push(time, value)
                .map_err(|_| Error::UnorderedEvents { index })?;
        }
        Ok(seq)
    }

    /// Appends an event at `time >= ` the last event time. Zero values are
    /// ignored.
    pub fn push(&mut self, time: f64, value: i64) -> Result<()> {
        if !time.is_finite() {
            return Err(Error::UnorderedEvents {
                index: self.events.len(),
            });
        }
        let ordinal = match self.events.last() {
            Some(last) if time < last.time => {
                return Err(Error::UnorderedEvents {
                    index: self.events.len(),
                })
            }
            Some(last) if time == last.time => last.ordinal + 1,
            _ => 0,
        };
        if value != 0 {
            self.events.push(Event {
                time,
                ordinal,
                value,
            });
        }
        Ok(())
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn values(&self) -> Vec<i64> {
        self.events.iter().map(|e| e.value).collect()
    }

    pub fn times(&self) -> Vec<f64> {
        self.events.iter().map(|e| e.time).collect()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn discrepancy(&self) -> i64 {
        event_discrepancy(self)
    }

    /// Metric `d(a, b) = ||a - b||_D` on the merged timeline.
    pub fn distance(&self, other: &EventSequence) -> i64 {
        event_discrepancy(&difference(self, other))
    }

    /// Applies an order-preserving map to every timestamp.
    pub fn map_times<F: FnMut(f64) -> f64>(&self, mut f: F) -> Result<Self> {
        let mut out = Self::empty();
        for e in &self.events {
            out.push(f(e.time), e.value)?;
        }
        Ok(out)
    }
}

/// Discrepancy of the value sequence. Timestamps only contribute their order.
pub fn event_discrepancy(eta: &EventSequence) -> i64 {
    discrepancy_fast(&eta.values())
}

/// Events with `a <= t <= b`.
pub fn restrict(eta: &EventSequence, a: f64, b: f64) -> Result<EventSequence> {
    if a.is_nan() || b.is_nan() || a > b {
        return Err(Error::InvalidInterval { a, b });
    }
    Ok(EventSequence {
        events: eta
            .events
            .iter()
            .copied()
            .filter(|e| a <= e.time && e.time <= b)
            .collect(),
    })
}

/// Pointwise `a - b` on the merged `(time, ordinal)` timeline, zeros dropped.
pub fn difference(a: &EventSequence, b: &EventSequence) -> EventSequence {
    let (xs, ys) = (&a.events, &b.events);
    let mut events = Vec::with_capacity(xs.len() + ys.len());
    let (mut i, mut j) = (0, 0);
    while i < xs.len() || j < ys.len() {
        let ord = match (xs.get(i), ys.get(j)) {
            (Some(x), Some(y)) => x.key_cmp(y),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        let ev = match ord {
            Ordering::Less => {
                i += 1;
                xs[i - 1]
            }
            Ordering::Greater => {
                j += 1;
                Event {
                    value: -ys[j - 1].value,
                    ..ys[j - 1]
                }
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
                Event {
                    value: xs[i - 1].value - ys[j - 1].value,
                    ..xs[i - 1]
                }
            }
        };
        if ev.value != 0 {
            events.push(ev);
        }
    }
    EventSequence { events }
}

#[derive(Serialize, Deserialize)]
struct WireEvent {
    t: f64,
    v: i64,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    events: Vec<WireEvent>,
}

impl Serialize for EventSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            events: self
                .events
                .iter()
                .map(|e| WireEvent {
                    t: e.time,
                    v: e.value,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EventSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = Wire::deserialize(deserializer)?;
        EventSequence::with_ties(wire.events.into_iter().map(|e| (e.t, e.v)))
            .map_err(serde::de::Error::custom)
    }
}
