//! Thompson Sampling for stochastic multi-armed bandits.
//!
//! The crate is split the way an experiment is put together:
//!
//! - [`numerics`]: Binomial/Beta kernels, samplers, KL divergence, tail bounds
//!   and the oracle evaluators used to cross-check them.
//! - [`bandit`]: ground-truth arm laws, reward draws, the Bernoulli-trial
//!   reduction for `[0,1]` rewards and posterior counters.
//! - [`policies`]: Thompson Sampling, UCB1 and uniform-random selection.
//! - [`simulator`]: seeded single runs, delayed feedback and parallel Monte
//!   Carlo ensembles with lemma-level diagnostics.
//! - [`bounds`]: closed-form regret bound curves.
//!
//! The deterministic kernels in [`numerics`] and [`bounds`] are generic over
//! the scalar type through [`Real`]; the simulator works in `f64`. The type
//! aliases below pin the common `f64` instantiations.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bandit;
pub mod bounds;
pub mod numerics;
pub mod policies;
mod real;
pub mod simulator;

pub use real::{MaybeInfinite, Real};

pub type BinomialParams64 = numerics::BinomialParams<f64>;
pub type TailBoundQuery64 = numerics::TailBoundQuery<f64>;
pub type BoundSpec64 = bounds::BoundSpec<f64>;
pub type BoundCurve64 = bounds::BoundCurve<f64>;
pub type Extended64 = MaybeInfinite<f64>;

pub use bandit::{ArmLaw, ArmModel, BanditInstance, FeedbackEvent, PosteriorState};
pub use policies::{PolicyKind, PolicyState, Ucb1State};
pub use simulator::{run_monte_carlo, run_single, DelayModel, DiagnosticsRecord, RegretSummary, RunConfig, Trace};
