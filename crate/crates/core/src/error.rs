use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty sample: {0}")]
    EmptySample(&'static str),

    #[error("no lambda up to the cap {cap} satisfies the threshold condition")]
    CapExceeded { cap: f64 },

    #[error("gauge is not superadditive: kappa({lambda}) + kappa({mu}) > kappa({sum})")]
    InvalidGauge { lambda: f64, mu: f64, sum: f64 },

    #[error("functions live on different grids")]
    IncompatibleGrids,

    #[error("modular value is infinite")]
    InfiniteModular,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("seed is too far from its image: w_{lambda}(seed, T seed) is infinite")]
    InfiniteSeed { lambda: f64 },

    #[error("iteration {iteration} produced an infinite modular gap")]
    InfiniteGap { iteration: usize },

    #[error("no convergence after {iterations} iterations (last gap {last_gap})")]
    MaxIter { iterations: usize, last_gap: f64 },

    #[error("iteration diverged at step {iteration}")]
    Diverged { iteration: usize },

    #[error("right-hand side is not finite at t = {t}, x = {x}")]
    NonFiniteRhs { t: f64, x: f64 },

    #[error("Lipschitz spot-check failed at t = {t}: |f(t,x) - f(t,y)| = {lhs} > L|x - y| = {rhs}")]
    LipschitzViolated { t: f64, lhs: f64, rhs: f64 },

    #[error("f(., y0) is not in the Orlicz class for any sampled lambda")]
    NotOrlicz,

    #[error("segment {segment}: {source}")]
    Segment {
        segment: usize,
        #[source]
        source: Box<Error>,
    },
}
