//! Seeded randomized verification suites.
//!
//! Trial `i` draws its inputs from `trial_seed(seed, i)`, so a report does not depend
//! on how trials are scheduled across threads and any violation can be replayed
//! from the seed it records.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fisher::FisherFunction;
use crate::matrix::ComplexMatrix;
use crate::random::{random_complex, random_density, random_hermitian, rng_from_seed, trial_seed, TrialRng};
use crate::skew::{
    basic_margins, convexity_margins, default_p_grid, determinant_margin, gram_pair, inputs_digest, matrix_margin,
    unimodal_margin, wyd_curve, InequalityReport, ObservableTuple, Violation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Basic,
    Matrix,
    Det,
    Pmono,
    Convexity,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Basic, Suite::Matrix, Suite::Det, Suite::Pmono, Suite::Convexity];

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse(s: &str) -> Result<Vec<Suite>> {
        Ok(match s {
            "basic" => vec![Suite::Basic],
            "matrix" => vec![Suite::Matrix],
            "det" => vec![Suite::Det],
            "pmono" => vec![Suite::Pmono],
            "convexity" => vec![Suite::Convexity],
            "all" => Suite::ALL.to_vec(),
            other => return Err(Error::Parse(format!("unknown suite `{other}`"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Basic => "basic",
            Suite::Matrix => "matrix",
            Suite::Det => "det",
            Suite::Pmono => "pmono",
            Suite::Convexity => "convexity",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which observables the suites draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObservableKind {
    /// `(G + G*)/2`.
    Hermitian,
    /// General complex Gaussian `G`.
    NonHermitian,
    /// Alternates by trial index.
    Mixed,
}

impl ObservableKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "hermitian" => Ok(Self::Hermitian),
            "non-hermitian" | "nonhermitian" => Ok(Self::NonHermitian),
            "mixed" => Ok(Self::Mixed),
            other => Err(Error::Parse(format!("unknown observable kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Dimensions cycled over the trials.
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    /// Tuple size for the matrix and determinant suites.
    pub k: usize,
    pub observables: ObservableKind,
    pub p_grid: Vec<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            dims: vec![3],
            trials: 1000,
            seed: 42,
            tol: 1e-9,
            k: 2,
            observables: ObservableKind::Mixed,
            p_grid: default_p_grid(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidConfig("dimensions must be at least 2".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidConfig("tuple size must be at least 1".into()));
        }
        if self.p_grid.len() < 2 {
            return Err(Error::InvalidConfig("p grid needs at least two points".into()));
        }
        Ok(())
    }
}

fn observable(rng: &mut TrialRng, dim: usize, hermitian: bool) -> ComplexMatrix {
    if hermitian {
        random_hermitian(rng, dim).into_inner()
    } else {
        random_complex(rng, dim)
    }
}

/// Normalized margin and input digest of one trial.
fn run_trial(suite: Suite, f: &FisherFunction, cfg: &SuiteConfig, index: usize, seed: u64) -> Result<(f64, String)> {
    let mut rng = rng_from_seed(seed);
    let dim = cfg.dims[index % cfg.dims.len()];
    let hermitian = match cfg.observables {
        ObservableKind::Hermitian => true,
        ObservableKind::NonHermitian => false,
        ObservableKind::Mixed => index.is_multiple_of(2),
    };
    let rho = random_density(&mut rng, dim);
    match suite {
        Suite::Basic => {
            let a = observable(&mut rng, dim, hermitian);
            let (lo, hi) = basic_margins(f, &rho, &a)?;
            Ok((lo.min(hi), inputs_digest(&[rho.as_matrix(), &a])))
        }
        Suite::Matrix | Suite::Det => {
            let members: Vec<ComplexMatrix> = (0..cfg.k).map(|_| observable(&mut rng, dim, hermitian)).collect();
            let tuple = ObservableTuple::new(members)?;
            let gram = gram_pair(f, &rho, &tuple)?;
            let margin = if suite == Suite::Matrix { matrix_margin(&gram)? } else { determinant_margin(&gram)? };
            let mut all = vec![rho.as_matrix()];
            all.extend(tuple.members());
            Ok((margin, inputs_digest(&all)))
        }
        Suite::Pmono => {
            let a = random_hermitian(&mut rng, dim);
            let values = wyd_curve(&rho, &a, &cfg.p_grid)?;
            Ok((unimodal_margin(&cfg.p_grid, &values), inputs_digest(&[rho.as_matrix(), a.as_matrix()])))
        }
        Suite::Convexity => {
            let rho2 = random_density(&mut rng, dim);
            let s: f64 = rng.random_range(0.0..=1.0);
            let a = observable(&mut rng, dim, hermitian);
            let (c, v) = convexity_margins(f, &rho, &rho2, s, &a)?;
            Ok((c.min(v), inputs_digest(&[rho.as_matrix(), rho2.as_matrix(), &a])))
        }
    }
}

fn check_p_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|&p| !(p > 0.0 && p < 1.0)) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig("p grid must be strictly ascending in (0,1)".into()));
    }
    Ok(())
}

/// Runs `cfg.trials` seeded trials of `suite` for `f` in parallel.
pub fn run_suite(suite: Suite, f: &FisherFunction, cfg: &SuiteConfig) -> Result<InequalityReport> {
    cfg.validate()?;
    if suite == Suite::Pmono {
        check_p_grid(&cfg.p_grid)?;
    } else if !f.is_regular() {
        return Err(Error::NotRegular(f.name().to_string()));
    }
    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(cfg.seed, i as u64);
            run_trial(suite, f, cfg, i, seed).map(|(m, d)| (seed, m, d))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut worst = f64::INFINITY;
    let mut violations = Vec::new();
    for (seed, margin, digest) in outcomes {
        worst = worst.min(margin);
        if !(margin >= -cfg.tol) {
            violations.push(Violation { seed, margin, inputs_digest: digest });
        }
    }
    let function_spec = if suite == Suite::Pmono { "wyd".to_string() } else { f.name().to_string() };
    Ok(InequalityReport {
        suite: suite.name().into(),
        function_spec,
        dims: cfg.dims.clone(),
        trials: cfg.trials,
        seed: cfg.seed,
        worst_margin: worst,
        passed: violations.is_empty(),
        violations,
    })
}

/// Runs each suite in turn.
pub fn run_suites(suites: &[Suite], f: &FisherFunction, cfg: &SuiteConfig) -> Result<Vec<InequalityReport>> {
    suites.iter().map(|&s| run_suite(s, f, cfg)).collect()
}

/// Margin and input digest of trial `index`, as computed inside [`run_suite`].
pub fn replay_trial(suite: Suite, f: &FisherFunction, cfg: &SuiteConfig, index: usize) -> Result<(f64, String)> {
    run_trial(suite, f, cfg, index, trial_seed(cfg.seed, index as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig { dims: vec![2, 3], trials: 40, ..Default::default() }
    }

    #[test]
    fn all_suites_pass_for_catalog_samples() {
        for spec in ["max", "wyd:0.3", "bridge:0.5"] {
            let f = FisherFunction::parse(spec).unwrap();
            for r in run_suites(&Suite::ALL, &f, &small()).unwrap() {
                assert!(r.passed, "{spec} {}: {r:?}", r.suite);
                assert_eq!(r.trials, 40);
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let f = FisherFunction::wyd(0.25).unwrap();
        let a = run_suite(Suite::Det, &f, &small()).unwrap();
        let b = run_suite(Suite::Det, &f, &small()).unwrap();
        assert_eq!(a, b);
        let c = run_suite(Suite::Det, &f, &SuiteConfig { seed: 43, ..small() }).unwrap();
        assert_ne!(a.worst_margin, c.worst_margin);
    }

    #[test]
    fn config_errors() {
        let f = FisherFunction::max();
        let bad = SuiteConfig { trials: 0, ..Default::default() };
        assert!(matches!(run_suite(Suite::Basic, &f, &bad), Err(Error::InvalidConfig(_))));
        let bad = SuiteConfig { dims: vec![1], ..Default::default() };
        assert!(run_suite(Suite::Basic, &f, &bad).is_err());
        assert!(matches!(run_suite(Suite::Basic, &FisherFunction::sqrt(), &small()), Err(Error::NotRegular(_))));
        // p monotonicity does not use the function
        assert!(run_suite(Suite::Pmono, &FisherFunction::sqrt(), &small()).unwrap().passed);
        assert_eq!(Suite::parse("all").unwrap().len(), 5);
        assert!(Suite::parse("nope").is_err());
    }

    #[test]
    fn replay_reproduces_the_worst_margin() {
        let f = FisherFunction::wyd(0.7).unwrap();
        let cfg = SuiteConfig { trials: 12, ..small() };
        let r = run_suite(Suite::Convexity, &f, &cfg).unwrap();
        let worst = (0..12)
            .map(|i| replay_trial(Suite::Convexity, &f, &cfg, i).unwrap().0)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(worst, r.worst_margin);
    }
}
