//! The order `f ⪯ g`, the lattice operations and the involution `f^♯`.
//!
//! `f ⪯ g` holds when `φ(t) = (t+1)/2 · f(t)/g(t)` is again a representing function,
//! equivalently when the weights satisfy `h_f ≥ h_g` almost everywhere. The
//! almost-everywhere comparison is approximated on a fixed λ grid.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fisher::FisherFunction;
use crate::membership::{verify_fop_membership, VerifyConfig};
use crate::quadrature::QuadratureConfig;
use crate::weight::{extract_weight, WeightFunction, DEFAULT_EPS_LADDER};

/// Number of λ points used for weight comparison.
pub const WEIGHT_GRID_SIZE: usize = 512;

/// Tolerance of the weight comparison `h_f ≥ h_g`.
pub const WEIGHT_TOL: f64 = 1e-9;

/// Relative tolerance when comparing reconstructed functions pointwise.
pub const EQUALITY_REL_TOL: f64 = 2e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderMethod {
    /// Weight comparison when both weights are available, φ test otherwise.
    Auto,
    WeightComparison,
    PhiMonotonicity,
    /// Runs both and requires agreement.
    Both,
}

impl OrderMethod {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "weight" | "weight_comparison" => Ok(Self::WeightComparison),
            "phi" | "phi_monotonicity" => Ok(Self::PhiMonotonicity),
            "both" => Ok(Self::Both),
            other => Err(Error::Parse(format!("unknown order method `{other}`"))),
        }
    }
}

impl fmt::Display for OrderMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Auto => "auto",
            Self::WeightComparison => "weight_comparison",
            Self::PhiMonotonicity => "phi_monotonicity",
            Self::Both => "both",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderVerdict {
    pub holds: bool,
    /// The method that produced the verdict; `Both` only when the two agreed.
    pub method: OrderMethod,
    pub worst_margin: f64,
    pub grid_size: usize,
}

/// `(t+1)/2 · f(t)/g(t)`.
pub fn phi(f: &FisherFunction, g: &FisherFunction, t: f64) -> Result<f64> {
    Ok(0.5 * (t + 1.0) * f.eval(t)? / g.eval(t)?)
}

/// 256 uniform midpoints plus 256 Chebyshev points clustered at both ends.
pub fn weight_grid() -> Vec<f64> {
    let half = WEIGHT_GRID_SIZE / 2;
    let mut g: Vec<f64> = (0..half).map(|i| (i as f64 + 0.5) / half as f64).collect();
    g.extend((0..half).map(|i| 0.5 * (1.0 - (PI * (i as f64 + 0.5) / half as f64).cos())));
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// The weight of `f`: stored closed form first, then boundary-value extraction on
/// [`weight_grid`], else [`Error::WeightUnavailable`].
pub fn weight_of(f: &FisherFunction) -> Result<WeightFunction> {
    if let Some(h) = f.weight() {
        return Ok(h);
    }
    if !f.has_analytic_continuation() {
        return Err(Error::WeightUnavailable(f.name().to_string()));
    }
    let mut knots = vec![0.0];
    let mut values = Vec::with_capacity(WEIGHT_GRID_SIZE + 2);
    let grid = weight_grid();
    for &l in &grid {
        // keep ε well below the distance from -λ to the branch point at 0
        let ladder = DEFAULT_EPS_LADDER.map(|e| e * l.min(1.0));
        let v = extract_weight(f, l, &ladder)
            .map_err(|e| Error::WeightUnavailable(format!("{}: {e}", f.name())))?;
        values.push(v);
    }
    // constant extension to the endpoints
    values.insert(0, values[0]);
    knots.extend(grid);
    knots.push(1.0);
    values.push(*values.last().expect("non-empty grid"));
    WeightFunction::grid(knots, values)
}

fn compare_weights(hf: &WeightFunction, hg: &WeightFunction) -> OrderVerdict {
    let grid = weight_grid();
    let worst = grid.iter().map(|&l| hf.eval(l) - hg.eval(l)).fold(f64::INFINITY, f64::min);
    OrderVerdict {
        holds: worst >= -WEIGHT_TOL,
        method: OrderMethod::WeightComparison,
        worst_margin: worst,
        grid_size: grid.len(),
    }
}

fn phi_verdict(f: &FisherFunction, g: &FisherFunction, cfg: &VerifyConfig) -> OrderVerdict {
    let report = verify_fop_membership(&FisherFunction::phi(f, g), cfg);
    OrderVerdict {
        holds: report.passed,
        method: OrderMethod::PhiMonotonicity,
        worst_margin: report.worst_margin(),
        grid_size: cfg.trials,
    }
}

pub fn preceq(f: &FisherFunction, g: &FisherFunction, cfg: &VerifyConfig) -> Result<OrderVerdict> {
    preceq_with(f, g, cfg, OrderMethod::Auto)
}

pub fn preceq_with(
    f: &FisherFunction,
    g: &FisherFunction,
    cfg: &VerifyConfig,
    method: OrderMethod,
) -> Result<OrderVerdict> {
    let weights = || -> Result<(WeightFunction, WeightFunction)> { Ok((weight_of(f)?, weight_of(g)?)) };
    match method {
        OrderMethod::Auto => match (f.weight(), g.weight()) {
            (Some(hf), Some(hg)) => Ok(compare_weights(&hf, &hg)),
            _ => Ok(phi_verdict(f, g, cfg)),
        },
        OrderMethod::WeightComparison => {
            let (hf, hg) = weights()?;
            Ok(compare_weights(&hf, &hg))
        }
        OrderMethod::PhiMonotonicity => Ok(phi_verdict(f, g, cfg)),
        OrderMethod::Both => {
            let (hf, hg) = weights()?;
            let w = compare_weights(&hf, &hg);
            let p = phi_verdict(f, g, cfg);
            if w.holds != p.holds {
                return Err(Error::MethodDisagreement { weight: w.holds, phi: p.holds });
            }
            Ok(OrderVerdict { method: OrderMethod::Both, ..w })
        }
    }
}

/// `f ∧ g`, with weight `max(h_f, h_g)`.
pub fn meet(f: &FisherFunction, g: &FisherFunction) -> Result<FisherFunction> {
    let h = WeightFunction::max(weight_of(f)?, weight_of(g)?);
    FisherFunction::from_weight(format!("meet({},{})", f.name(), g.name()), h, QuadratureConfig::default())
}

/// `f ∨ g`, with weight `min(h_f, h_g)`.
pub fn join(f: &FisherFunction, g: &FisherFunction) -> Result<FisherFunction> {
    let h = WeightFunction::min(weight_of(f)?, weight_of(g)?);
    FisherFunction::from_weight(format!("join({},{})", f.name(), g.name()), h, QuadratureConfig::default())
}

/// `f^♯(t) = t/f(t)`; its weight is `1 - h_f`.
pub fn sharp(f: &FisherFunction) -> FisherFunction {
    FisherFunction::sharp(f)
}

/// 40 log-spaced points in `[0.01, 100]`.
pub fn standard_t_grid() -> Vec<f64> {
    (0..40).map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / 39.0)).collect()
}

/// Largest relative difference `|f - g| / g` over [`standard_t_grid`].
pub fn max_relative_difference(f: &FisherFunction, g: &FisherFunction) -> Result<f64> {
    let mut worst = 0.0f64;
    for t in standard_t_grid() {
        let a = f.eval(t)?;
        let b = g.eval(t)?;
        worst = worst.max((a - b).abs() / b.abs());
    }
    Ok(worst)
}

/// Pointwise equality within [`EQUALITY_REL_TOL`].
pub fn functions_equal(f: &FisherFunction, g: &FisherFunction) -> Result<bool> {
    Ok(max_relative_difference(f, g)? <= EQUALITY_REL_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fisher::catalog;

    fn quick() -> VerifyConfig {
        VerifyConfig { trials: 40, ..Default::default() }
    }

    #[test]
    fn phi_values() {
        let f = FisherFunction::wyd(0.3).unwrap();
        for t in [0.1, 1.0, 7.0] {
            assert!((phi(&f, &f, t).unwrap() - 0.5 * (1.0 + t)).abs() < 1e-14);
        }
        let (lo, hi) = (FisherFunction::min(), FisherFunction::max());
        assert!((phi(&lo, &hi, 1.0).unwrap() - 1.0).abs() < 1e-15);
        // φ(t) = t φ(1/t)
        let g = FisherFunction::bridge(0.5).unwrap();
        for t in [0.03, 0.4, 2.5, 60.0] {
            let a = phi(&f, &g, t).unwrap();
            let b = t * phi(&f, &g, 1.0 / t).unwrap();
            assert!((a - b).abs() < 1e-9 * a, "t={t}");
        }
    }

    #[test]
    fn grid_shape() {
        let g = weight_grid();
        assert_eq!(g.len(), WEIGHT_GRID_SIZE);
        assert!(g[0] > 0.0 && g[0] < 1e-4);
        assert!(*g.last().unwrap() < 1.0 && *g.last().unwrap() > 1.0 - 1e-4);
    }

    #[test]
    fn bounds_of_the_order() {
        let cfg = quick();
        let (lo, hi) = (FisherFunction::min(), FisherFunction::max());
        assert!(preceq(&lo, &hi, &cfg).unwrap().holds);
        assert!(!preceq(&hi, &lo, &cfg).unwrap().holds);
        for f in catalog() {
            assert!(preceq(&lo, &f, &cfg).unwrap().holds, "{}", f.name());
            assert!(preceq(&f, &hi, &cfg).unwrap().holds, "{}", f.name());
        }
    }

    #[test]
    fn wyd_chain_by_both_methods() {
        let cfg = quick();
        let a = FisherFunction::wyd(0.3).unwrap();
        let b = FisherFunction::wyd(0.5).unwrap();
        let v = preceq_with(&a, &b, &cfg, OrderMethod::Both).unwrap();
        assert!(v.holds);
        assert_eq!(v.method, OrderMethod::Both);
        let v = preceq_with(&b, &a, &cfg, OrderMethod::Both).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn phi_method_rejects_reversed_pair() {
        let v = preceq_with(&FisherFunction::max(), &FisherFunction::min(), &quick(), OrderMethod::PhiMonotonicity)
            .unwrap();
        assert!(!v.holds);
        assert_eq!(v.method, OrderMethod::PhiMonotonicity);
    }

    #[test]
    fn extracted_weight_of_sharp_wyd() {
        // the sharp of a wyd function has a stored weight; strip it through a custom
        // function with the same analytic continuation
        let p = 0.3;
        let w = FisherFunction::wyd(p).unwrap();
        let w2 = w.clone();
        let f = FisherFunction::custom("wyd-copy", move |t| w.eval(t).unwrap())
            .with_complex(move |z| w2.eval_complex(z).unwrap());
        let h = weight_of(&f).unwrap();
        let grid = weight_grid();
        for &l in grid.iter().step_by(37) {
            let exact = crate::weight::wyd_weight(p, l).unwrap();
            assert!((h.eval(l) - exact).abs() < 1e-7, "λ={l}: {} vs {exact}", h.eval(l));
        }
        // linear interpolation between knots
        for l in [0.05, 0.3, 0.5, 0.8] {
            let exact = crate::weight::wyd_weight(p, l).unwrap();
            assert!((h.eval(l) - exact).abs() < 1e-4, "λ={l}: {} vs {exact}", h.eval(l));
        }
    }

    #[test]
    fn weight_unavailable_without_continuation() {
        let f = FisherFunction::custom("opaque", |t| 0.5 * (1.0 + t));
        assert!(matches!(weight_of(&f), Err(Error::WeightUnavailable(_))));
        assert!(matches!(meet(&f, &FisherFunction::max()), Err(Error::WeightUnavailable(_))));
    }

    #[test]
    fn lattice_extremes_and_idempotence() {
        let (lo, hi) = (FisherFunction::min(), FisherFunction::max());
        assert!(functions_equal(&meet(&lo, &hi).unwrap(), &lo).unwrap());
        assert!(functions_equal(&join(&lo, &hi).unwrap(), &hi).unwrap());
        let f = FisherFunction::wyd(0.3).unwrap();
        assert!(functions_equal(&meet(&f, &f).unwrap(), &f).unwrap());
        assert!(functions_equal(&join(&f, &f).unwrap(), &f).unwrap());
        let g = FisherFunction::wyd(0.5).unwrap();
        assert!(functions_equal(&meet(&f, &g).unwrap(), &f).unwrap());
        assert!(functions_equal(&join(&f, &g).unwrap(), &g).unwrap());
    }

    #[test]
    fn sharp_identities() {
        let t_grid = standard_t_grid();
        let s = sharp(&FisherFunction::max());
        for &t in &t_grid {
            assert!((s.eval(t).unwrap() - 2.0 * t / (1.0 + t)).abs() < 1e-15);
            assert!((sharp(&FisherFunction::sqrt()).eval(t).unwrap() - t.sqrt()).abs() < 1e-12 * t.sqrt());
        }
        for f in catalog() {
            let ss = sharp(&sharp(&f));
            for &t in &t_grid {
                let (a, b) = (ss.eval(t).unwrap(), f.eval(t).unwrap());
                assert!((a - b).abs() <= 1e-12 * b, "{} at {t}", f.name());
            }
        }
    }

    #[test]
    fn regular_sharp_is_not_regular() {
        for f in catalog().into_iter().filter(FisherFunction::is_regular) {
            assert!(!sharp(&f).is_regular(), "{}", f.name());
        }
    }
}
