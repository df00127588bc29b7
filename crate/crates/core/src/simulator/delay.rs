use std::collections::VecDeque;
use std::fmt;

use crate::bandit::FeedbackEvent;

/// When a play's outcome reaches the policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DelayModel {
    /// Delivered at the end of the step it was played in.
    None,
    /// Delivered `d` steps after the play.
    Fixed(u64),
    /// Everything pending is delivered at steps that are multiples of `B`.
    Batch(u64),
}

impl DelayModel {
    /// Collapses the degenerate forms `fixed(0)` and `batch(1)` to `None`.
    pub fn normalized(self) -> Self {
        match self {
            DelayModel::Fixed(0) | DelayModel::Batch(1) => DelayModel::None,
            other => other,
        }
    }

    pub fn validate(self) -> Result<Self, String> {
        match self {
            DelayModel::Batch(0) => Err("batch size must be >= 1".into()),
            other => Ok(other.normalized()),
        }
    }
}

impl fmt::Display for DelayModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.normalized() {
            DelayModel::None => f.write_str("none"),
            DelayModel::Fixed(d) => write!(f, "fixed:{d}"),
            DelayModel::Batch(b) => write!(f, "batch:{b}"),
        }
    }
}

/// Moves the events due at the end of step `t` from `queue` into `out`.
///
/// `queue` must be ordered by `t_played`, which holds when events are pushed
/// as they are played.
pub fn deliver_due(queue: &mut VecDeque<FeedbackEvent>, t: u64, delay: DelayModel, out: &mut Vec<FeedbackEvent>) {
    match delay.normalized() {
        DelayModel::None => out.extend(queue.drain(..)),
        DelayModel::Fixed(d) => {
            while queue.front().is_some_and(|e| e.t_played + d <= t) {
                out.push(queue.pop_front().unwrap());
            }
        }
        DelayModel::Batch(b) => {
            if t.is_multiple_of(b) {
                out.extend(queue.drain(..));
            }
        }
    }
}

/// Events due at the end of step `t`.
pub fn delayed_feedback_step(queue: &mut VecDeque<FeedbackEvent>, t: u64, delay: DelayModel) -> Vec<FeedbackEvent> {
    let mut out = Vec::new();
    deliver_due(queue, t, delay, &mut out);
    out
}
