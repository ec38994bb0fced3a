use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::fmt::Debug;

use super::SchedulingError;

/// Handle returned by [`EventQueue::schedule`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventId {
    pub time: f64,
    pub seq: u64,
}

#[derive(Debug, Clone)]
pub struct Event<P> {
    pub time: f64,
    pub seq: u64,
    pub payload: P,
}

impl<P> PartialEq for Event<P> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<P> Eq for Event<P> {}

impl<P> PartialOrd for Event<P> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<P> Ord for Event<P> {
    // Reversed so the max-heap pops the earliest (time, seq) first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub time: f64,
    pub seq: u64,
    pub label: String,
}

/// Pending events ordered by `(time, seq)` plus the simulated clock.
#[derive(Debug)]
pub struct EventQueue<P> {
    heap: BinaryHeap<Event<P>>,
    cancelled: HashSet<u64>,
    next_seq: u64,
    now: f64,
    trace: Option<Vec<TraceEntry>>,
}

impl<P> Default for EventQueue<P> {
    fn default() -> Self {
        Self::new()
    }
}

impl<P> EventQueue<P> {
    pub fn new() -> Self {
        Self {
            heap: BinaryHeap::new(),
            cancelled: HashSet::new(),
            next_seq: 0,
            now: 0.0,
            trace: None,
        }
    }

    /// Records every processed event (time, seq and the payload's `Debug` form).
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn len(&self) -> usize {
        self.heap.len() - self.cancelled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn trace(&self) -> Option<&[TraceEntry]> {
        self.trace.as_deref()
    }

    pub fn schedule(&mut self, time: f64, payload: P) -> Result<EventId, SchedulingError> {
        if time.is_nan() || time < self.now {
            return Err(SchedulingError::InPast { time, now: self.now });
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Event { time, seq, payload });
        Ok(EventId { time, seq })
    }

    /// Schedules `delay` seconds after the current clock.
    pub fn schedule_in(&mut self, delay: f64, payload: P) -> Result<EventId, SchedulingError> {
        self.schedule(self.now + delay, payload)
    }

    /// Marks a pending event as cancelled; returns false if it was unknown
    /// or already cancelled.
    pub fn cancel(&mut self, id: EventId) -> bool {
        let pending = self.heap.iter().any(|e| e.seq == id.seq);
        pending && self.cancelled.insert(id.seq)
    }

    /// Removes the next live event and advances the clock to its time.
    pub fn pop(&mut self) -> Option<Event<P>> {
        while let Some(ev) = self.heap.pop() {
            if self.cancelled.remove(&ev.seq) {
                continue;
            }
            self.now = ev.time;
            return Some(ev);
        }
        None
    }
}

impl<P: Debug> EventQueue<P> {
    /// Drains the queue in `(time, seq)` order, returning the time of the
    /// last processed event (0 when nothing ran).
    pub fn run_until_idle<E, F>(&mut self, mut handler: F) -> Result<f64, E>
    where
        E: From<SchedulingError>,
        F: FnMut(&mut Self, Event<P>) -> Result<(), E>,
    {
        let mut last = 0.0;
        while let Some(ev) = self.pop() {
            last = ev.time;
            if let Some(trace) = self.trace.as_mut() {
                trace.push(TraceEntry {
                    time: ev.time,
                    seq: ev.seq,
                    label: format!("{:?}", ev.payload),
                });
            }
            handler(self, ev)?;
        }
        Ok(last)
    }
}

pub fn schedule<P>(
    queue: &mut EventQueue<P>,
    time: f64,
    payload: P,
) -> Result<EventId, SchedulingError> {
    queue.schedule(time, payload)
}

pub fn run_until_idle<P, E, F>(queue: &mut EventQueue<P>, handler: F) -> Result<f64, E>
where
    P: Debug,
    E: From<SchedulingError>,
    F: FnMut(&mut EventQueue<P>, Event<P>) -> Result<(), E>,
{
    queue.run_until_idle(handler)
}
