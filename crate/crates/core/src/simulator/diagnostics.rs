//! Per-run measurements of the quantities the regret analysis reasons about:
//! saturation of suboptimal arms, the concentration events on their samples,
//! and the gaps between plays of the optimal arm.

use crate::bandit::BanditInstance;

/// `L_i = ⌈24 ln T / Δ_i²⌉` for suboptimal arms, `None` for optimal ones.
pub fn saturation_thresholds(instance: &BanditInstance, horizon: u64) -> Vec<Option<u64>> {
    let log_t = (horizon as f64).ln();
    instance
        .gaps()
        .iter()
        .map(|&gap| (gap > 0.0).then(|| (24.0 * log_t / (gap * gap)).ceil() as u64))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiagnosticsRecord {
    /// `L_i` per arm; `None` for optimal arms.
    pub saturation_threshold: Vec<Option<u64>>,
    /// First step `t` with `k_i(t) ≥ L_i`; `None` if never reached.
    pub saturation_time: Vec<Option<u64>>,
    /// Steps where `k_2(t) ≥ L` and `θ_2(t) > μ_2 + Δ/2`. Only recorded for
    /// Thompson Sampling on two arms with a unique optimum.
    pub e2_violation_steps: Option<Vec<u64>>,
    /// Steps where some saturated arm has `θ_i(t)` outside `μ_i ± Δ_i/2`.
    /// Only recorded for Thompson Sampling.
    pub e_violation_steps: Option<Vec<u64>>,
    /// Steps before the first play of the reference optimal arm.
    pub steps_before_first_optimal_play: u64,
    /// `Y_j = t_{j+1} − t_j − 1` for the reference optimal arm (lowest optimal
    /// index). The last entry is the censored gap `T − t_m` after the final play.
    pub optimal_gaps: Vec<u64>,
}

impl DiagnosticsRecord {
    pub fn e2_violations(&self) -> usize {
        self.e2_violation_steps.as_ref().map_or(0, Vec::len)
    }

    pub fn e_violations(&self) -> usize {
        self.e_violation_steps.as_ref().map_or(0, Vec::len)
    }
}

/// Incremental builder fed once per step by the run loop.
pub(crate) struct DiagnosticsCollector {
    record: DiagnosticsRecord,
    means: Vec<f64>,
    gaps: Vec<f64>,
    reference_arm: usize,
    two_arm_suboptimal: Option<usize>,
    last_optimal_play: Option<u64>,
}

impl DiagnosticsCollector {
    pub fn new(instance: &BanditInstance, horizon: u64, thompson: bool) -> Self {
        let thresholds = saturation_thresholds(instance, horizon);
        let two_arm_suboptimal =
            (thompson && instance.len() == 2 && instance.has_unique_optimum()).then(|| 1 - instance.optimal_arms()[0]);
        Self {
            record: DiagnosticsRecord {
                saturation_time: vec![None; thresholds.len()],
                saturation_threshold: thresholds,
                e2_violation_steps: two_arm_suboptimal.map(|_| Vec::new()),
                e_violation_steps: thompson.then(Vec::new),
                steps_before_first_optimal_play: 0,
                optimal_gaps: Vec::new(),
            },
            means: instance.means(),
            gaps: instance.gaps().to_vec(),
            reference_arm: instance.optimal_arms()[0],
            two_arm_suboptimal,
            last_optimal_play: None,
        }
    }

    /// Called at step `t` after selection, with `plays[i] = k_i(t)` (plays
    /// strictly before `t`) and this step's θ samples when available.
    pub fn observe_step(&mut self, t: u64, plays: &[u64], thetas: Option<&[f64]>, chosen: usize) {
        let mut e_violated = false;
        for (arm, threshold) in self.record.saturation_threshold.iter().enumerate() {
            let Some(threshold) = *threshold else { continue };
            if plays[arm] < threshold {
                continue;
            }
            if self.record.saturation_time[arm].is_none() {
                self.record.saturation_time[arm] = Some(t);
            }
            if let Some(thetas) = thetas {
                let half = 0.5 * self.gaps[arm];
                let theta = thetas[arm];
                if theta < self.means[arm] - half || theta > self.means[arm] + half {
                    e_violated = true;
                }
                if self.two_arm_suboptimal == Some(arm) && theta > self.means[arm] + half {
                    if let Some(steps) = self.record.e2_violation_steps.as_mut() {
                        steps.push(t);
                    }
                }
            }
        }
        if e_violated {
            if let Some(steps) = self.record.e_violation_steps.as_mut() {
                steps.push(t);
            }
        }
        if chosen == self.reference_arm {
            match self.last_optimal_play {
                None => self.record.steps_before_first_optimal_play = t - 1,
                Some(prev) => self.record.optimal_gaps.push(t - prev - 1),
            }
            self.last_optimal_play = Some(t);
        }
    }

    pub fn finish(mut self, horizon: u64) -> DiagnosticsRecord {
        match self.last_optimal_play {
            None => self.record.steps_before_first_optimal_play = horizon,
            Some(last) => self.record.optimal_gaps.push(horizon - last),
        }
        self.record
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_round_up() {
        let inst = BanditInstance::bernoulli(&[0.5, 0.4]).unwrap();
        let l = saturation_thresholds(&inst, 100);
        assert_eq!(l[0], None);
        assert_eq!(l[1], Some((24.0 * 100f64.ln() / 0.01f64).ceil() as u64));
    }

    #[test]
    fn timeline_partition() {
        let inst = BanditInstance::bernoulli(&[0.5, 0.4]).unwrap();
        let mut c = DiagnosticsCollector::new(&inst, 10, false);
        let mut plays = [0u64; 2];
        let choices = [1, 1, 0, 1, 0, 0, 1, 1, 0, 1];
        for (i, &arm) in choices.iter().enumerate() {
            c.observe_step(i as u64 + 1, &plays, None, arm);
            plays[arm] += 1;
        }
        let r = c.finish(10);
        assert_eq!(r.steps_before_first_optimal_play, 2);
        assert_eq!(r.optimal_gaps, vec![1, 0, 2, 1]);
        let total: u64 = r.optimal_gaps.iter().map(|y| y + 1).sum::<u64>() + r.steps_before_first_optimal_play;
        assert_eq!(total, 10);
    }

    #[test]
    fn never_playing_optimal_arm() {
        let inst = BanditInstance::bernoulli(&[0.5, 0.4]).unwrap();
        let c = DiagnosticsCollector::new(&inst, 7, true);
        let r = c.finish(7);
        assert_eq!(r.steps_before_first_optimal_play, 7);
        assert!(r.optimal_gaps.is_empty());
    }
}
