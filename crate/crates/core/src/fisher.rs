//! Representing functions of quantum Fisher information (operator monotone
//! `f` with `f(1) = 1` and `f(t) = t f(1/t)`) and the transforms derived from them.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::C64;
use crate::quadrature::QuadratureConfig;
use crate::weight::{reconstruct_f, reconstruct_f_zero, reconstruct_log_derivative, WeightFunction};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type ComplexFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// Below this `f(0)` is treated as zero.
const REGULARITY_THRESHOLD: f64 = 1e-9;

#[derive(Clone)]
enum Kind {
    Min,
    Max,
    Sqrt,
    Wyd(f64),
    Weighted { weight: WeightFunction, quad: QuadratureConfig },
    Sharp(Arc<FisherFunction>),
    Phi(Arc<FisherFunction>, Arc<FisherFunction>),
    Custom { eval: RealFn, complex: Option<ComplexFn> },
}

/// A member of the set of representing functions, together with its regularity value `f(0)`.
#[derive(Clone)]
pub struct FisherFunction {
    name: String,
    params: Vec<f64>,
    kind: Kind,
    f_zero: f64,
}

impl fmt::Debug for FisherFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FisherFunction")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("f_zero", &self.f_zero)
            .finish()
    }
}

impl fmt::Display for FisherFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FisherFunction {
    /// `2t/(1+t)`.
    pub fn min() -> Self {
        Self { name: "min".into(), params: vec![], kind: Kind::Min, f_zero: 0.0 }
    }

    /// `(1+t)/2`, the symmetric logarithmic derivative function.
    pub fn max() -> Self {
        Self { name: "max".into(), params: vec![], kind: Kind::Max, f_zero: 0.5 }
    }

    /// `√t`.
    pub fn sqrt() -> Self {
        Self { name: "sqrt".into(), params: vec![], kind: Kind::Sqrt, f_zero: 0.0 }
    }

    /// `p(1-p)(t-1)² / ((t^p - 1)(t^{1-p} - 1))` for `0 < p < 1`.
    pub fn wyd(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::DomainError(format!("p out of range: {p} not in (0,1)")));
        }
        Ok(Self { name: format!("wyd:{p}"), params: vec![p], kind: Kind::Wyd(p), f_zero: p * (1.0 - p) })
    }

    /// The variant bridge with step weight at `1-p`, `0 ≤ p < 1`.
    pub fn bridge(p: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::DomainError(format!("p out of range: {p} not in [0,1)")));
        }
        let mut f =
            Self::from_weight(format!("bridge:{p}"), WeightFunction::step(p)?, QuadratureConfig::default())?;
        f.params = vec![p];
        Ok(f)
    }

    /// The function whose canonical representation has weight `weight`.
    pub fn from_weight(name: impl Into<String>, weight: WeightFunction, quad: QuadratureConfig) -> Result<Self> {
        quad.validate()?;
        let f_zero = match reconstruct_f_zero(&weight, &quad) {
            Ok(v) => v,
            Err(Error::IntegrabilityFailure) => 0.0,
            Err(e) => return Err(e),
        };
        Ok(Self { name: name.into(), params: vec![], kind: Kind::Weighted { weight, quad }, f_zero })
    }

    /// `t / f(t)`.
    pub fn sharp(f: &FisherFunction) -> Self {
        let kind = Kind::Sharp(Arc::new(f.clone()));
        let mut out = Self { name: format!("sharp({})", f.name), params: f.params.clone(), kind, f_zero: 0.0 };
        if !f.is_regular() {
            out.f_zero = out.numerical_f_zero();
        }
        out
    }

    /// `φ(t) = (t+1)/2 · f(t)/g(t)`.
    pub fn phi(f: &FisherFunction, g: &FisherFunction) -> Self {
        let kind = Kind::Phi(Arc::new(f.clone()), Arc::new(g.clone()));
        let mut out = Self { name: format!("phi({},{})", f.name, g.name), params: vec![], kind, f_zero: 0.0 };
        out.f_zero = out.numerical_f_zero();
        out
    }

    /// An arbitrary user function, for controls in the membership tests.
    pub fn custom(name: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        let mut out = Self {
            name: name.into(),
            params: vec![],
            kind: Kind::Custom { eval: Arc::new(eval), complex: None },
            f_zero: 0.0,
        };
        out.f_zero = out.numerical_f_zero();
        out
    }

    /// Attaches an analytic continuation to a custom function.
    pub fn with_complex(mut self, complex: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        if let Kind::Custom { complex: slot, .. } = &mut self.kind {
            *slot = Some(Arc::new(complex));
        }
        self
    }

    /// Parses `min | max | sqrt | wyd:<p> | bridge:<p>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        match spec {
            "min" => return Ok(Self::min()),
            "max" => return Ok(Self::max()),
            "sqrt" => return Ok(Self::sqrt()),
            _ => {}
        }
        let (kind, arg) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown function spec `{spec}`")))?;
        let p: f64 = arg.parse().map_err(|_| Error::Parse(format!("invalid parameter `{arg}`")))?;
        match kind {
            "wyd" => Self::wyd(p),
            "bridge" => Self::bridge(p),
            other => Err(Error::Parse(format!("unknown function kind `{other}`"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// The limit `f(0+)`.
    pub fn f_zero(&self) -> f64 {
        self.f_zero
    }

    pub fn is_regular(&self) -> bool {
        self.f_zero > 0.0
    }

    pub fn wyd_parameter(&self) -> Option<f64> {
        match self.kind {
            Kind::Wyd(p) => Some(p),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::DomainError(format!("t = {t} must be positive and finite")));
        }
        Ok(match &self.kind {
            Kind::Min => 2.0 * t / (1.0 + t),
            Kind::Max => 0.5 * (1.0 + t),
            Kind::Sqrt => t.sqrt(),
            Kind::Wyd(p) => wyd_eval(*p, t),
            Kind::Weighted { weight, quad } => reconstruct_f(weight, t, quad)?,
            Kind::Sharp(f) => t / f.eval(t)?,
            Kind::Phi(f, g) => 0.5 * (t + 1.0) * f.eval(t)? / g.eval(t)?,
            Kind::Custom { eval, .. } => eval(t),
        })
    }

    /// `f'(t) / f(t)`.
    pub fn log_derivative(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::DomainError(format!("t = {t} must be positive and finite")));
        }
        match &self.kind {
            Kind::Min => Ok(1.0 / t - 1.0 / (1.0 + t)),
            Kind::Max => Ok(1.0 / (1.0 + t)),
            Kind::Sqrt => Ok(0.5 / t),
            Kind::Weighted { weight, quad } => reconstruct_log_derivative(weight, t, quad),
            Kind::Sharp(f) => Ok(1.0 / t - f.log_derivative(t)?),
            Kind::Phi(f, g) => Ok(1.0 / (1.0 + t) + f.log_derivative(t)? - g.log_derivative(t)?),
            Kind::Wyd(_) | Kind::Custom { .. } => {
                let h = (1e-6f64).max(1e-6 * t).min(0.5 * t);
                let d = (self.eval(t + h)? - self.eval(t - h)?) / (2.0 * h);
                Ok(d / self.eval(t)?)
            }
        }
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)? * self.log_derivative(t)?)
    }

    pub fn has_analytic_continuation(&self) -> bool {
        match &self.kind {
            Kind::Min | Kind::Max | Kind::Sqrt | Kind::Wyd(_) => true,
            Kind::Sharp(f) => f.has_analytic_continuation(),
            Kind::Custom { complex, .. } => complex.is_some(),
            Kind::Weighted { .. } | Kind::Phi(..) => false,
        }
    }

    /// Analytic continuation with principal branches of the powers.
    pub fn eval_complex(&self, z: C64) -> Result<C64> {
        let one = C64::new(1.0, 0.0);
        match &self.kind {
            Kind::Min => Ok(z * 2.0 / (one + z)),
            Kind::Max => Ok((one + z) * 0.5),
            Kind::Sqrt => Ok(z.sqrt()),
            Kind::Wyd(p) => {
                let d = z - one;
                Ok(d * d * (p * (1.0 - p)) / ((z.powf(*p) - one) * (z.powf(1.0 - p) - one)))
            }
            Kind::Sharp(f) if f.has_analytic_continuation() => Ok(z / f.eval_complex(z)?),
            Kind::Custom { complex: Some(c), .. } => Ok(c(z)),
            _ => Err(Error::UnsupportedAnalyticContinuation(self.name.clone())),
        }
    }

    /// The weight function of the canonical representation, when known in closed form.
    pub fn weight(&self) -> Option<WeightFunction> {
        match &self.kind {
            Kind::Min => Some(WeightFunction::Constant(1.0)),
            Kind::Max => Some(WeightFunction::Constant(0.0)),
            Kind::Sqrt => Some(WeightFunction::Constant(0.5)),
            Kind::Wyd(p) => Some(WeightFunction::Wyd(*p)),
            Kind::Weighted { weight, .. } => Some(weight.clone()),
            Kind::Sharp(f) => f.weight().map(|h| h.complement()),
            Kind::Phi(..) | Kind::Custom { .. } => None,
        }
    }

    /// Same function with every quadrature-backed component using `quad`.
    pub fn with_quadrature(&self, quad: QuadratureConfig) -> Self {
        let kind = match &self.kind {
            Kind::Weighted { weight, .. } => Kind::Weighted { weight: weight.clone(), quad },
            Kind::Sharp(f) => Kind::Sharp(Arc::new(f.with_quadrature(quad))),
            Kind::Phi(f, g) => Kind::Phi(Arc::new(f.with_quadrature(quad)), Arc::new(g.with_quadrature(quad))),
            other => other.clone(),
        };
        Self { kind, ..self.clone() }
    }

    /// `lim_{t→0} f(t)` from values at `t = 1e-6, 1e-7, 1e-8`; zero unless two
    /// successive linear extrapolations agree.
    fn numerical_f_zero(&self) -> f64 {
        let ts = [1e-6, 1e-7, 1e-8];
        let v: Vec<f64> = match ts.iter().map(|&t| self.eval(t)).collect::<Result<Vec<_>>>() {
            Ok(v) => v,
            Err(_) => return 0.0,
        };
        let r1 = (10.0 * v[1] - v[0]) / 9.0;
        let r2 = (10.0 * v[2] - v[1]) / 9.0;
        if !(r1.is_finite() && r2.is_finite()) {
            return 0.0;
        }
        if r2 > REGULARITY_THRESHOLD && (r1 - r2).abs() <= 1e-6 * r2.abs().max(1e-3) {
            r2
        } else {
            0.0
        }
    }
}

/// `ln(expm1(x)/x)`.
fn ln_expm1_ratio(x: f64) -> f64 {
    if x.abs() < 1e-5 {
        (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0).ln()
    } else {
        (x.exp_m1() / x).ln()
    }
}

/// Evaluates the Wigner-Yanase-Dyson function as `g(s)² / (g(ps) g((1-p)s))`
/// with `s = ln t` and `g(x) = (e^x - 1)/x`, which has no cancellation at `t = 1`.
fn wyd_eval(p: f64, t: f64) -> f64 {
    let s = t.ln();
    (2.0 * ln_expm1_ratio(s) - ln_expm1_ratio(p * s) - ln_expm1_ratio((1.0 - p) * s)).exp()
}

/// Catalog members used by the verification suites.
pub fn catalog() -> Vec<FisherFunction> {
    let mut out = vec![FisherFunction::min(), FisherFunction::max(), FisherFunction::sqrt()];
    for p in [0.1, 0.25, 0.3, 0.5, 0.7, 0.75] {
        out.push(FisherFunction::wyd(p).expect("valid p"));
    }
    for p in [0.25, 0.5, 0.9] {
        out.push(FisherFunction::bridge(p).expect("valid p"));
    }
    out
}

/// The regular members of [`catalog`].
pub fn regular_catalog() -> Vec<FisherFunction> {
    catalog().into_iter().filter(FisherFunction::is_regular).collect()
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::DomainError(format!("{name} = {x} must be positive")));
    }
    Ok(())
}

fn require_regular(f: &FisherFunction) -> Result<()> {
    if !f.is_regular() {
        return Err(Error::NotRegular(f.name.clone()));
    }
    Ok(())
}

pub fn eval_f(f: &FisherFunction, t: f64) -> Result<f64> {
    f.eval(t)
}

pub fn f_zero(f: &FisherFunction) -> f64 {
    f.f_zero()
}

/// Morozova-Chentsov function `c(x,y) = 1/(y f(x/y))`.
pub fn mc_function(f: &FisherFunction, x: f64, y: f64) -> Result<f64> {
    check_positive("x", x)?;
    check_positive("y", y)?;
    Ok(1.0 / (y * f.eval(x / y)?))
}

/// `č(x,y) = f(0) c(x,y)`.
pub fn check_c(f: &FisherFunction, x: f64, y: f64) -> Result<f64> {
    require_regular(f)?;
    Ok(f.f_zero * mc_function(f, x, y)?)
}

/// `f̌(t) = f(0)/f(t)`.
pub fn check_f(f: &FisherFunction, t: f64) -> Result<f64> {
    require_regular(f)?;
    Ok(f.f_zero / f.eval(t)?)
}

/// `f̃(t) = (t+1)/2 - (t-1)² f(0)/(2 f(t))`.
pub fn tilde_f(f: &FisherFunction, t: f64) -> Result<f64> {
    require_regular(f)?;
    let d = t - 1.0;
    Ok(0.5 * (t + 1.0) - d * d * f.f_zero / (2.0 * f.eval(t)?))
}

/// `d_c(x,y) = (x+y)/m(c) - (x-y)² c(x,y)` with `m(c) = f(0)`.
pub fn d_c(f: &FisherFunction, x: f64, y: f64) -> Result<f64> {
    require_regular(f)?;
    let d = x - y;
    Ok((x + y) / f.f_zero - d * d * mc_function(f, x, y)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log_grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }

    /// Direct closed form, used only away from `t = 1`.
    fn wyd_direct_formula(p: f64, t: f64) -> f64 {
        p * (1.0 - p) * (t - 1.0).powi(2) / ((t.powf(p) - 1.0) * (t.powf(1.0 - p) - 1.0))
    }

    #[test]
    fn spot_values() {
        assert_eq!(FisherFunction::max().eval(3.0).unwrap(), 2.0);
        assert!((FisherFunction::wyd(0.5).unwrap().eval(4.0).unwrap() - 2.25).abs() < 1e-14);
        assert_eq!(FisherFunction::wyd(0.3).unwrap().eval(1.0).unwrap(), 1.0);
        assert!(FisherFunction::max().eval(0.0).is_err());
        assert!(FisherFunction::max().eval(-1.0).is_err());
    }

    #[test]
    fn f_zero_values() {
        assert_eq!(FisherFunction::max().f_zero(), 0.5);
        assert!((FisherFunction::wyd(0.3).unwrap().f_zero() - 0.21).abs() < 1e-15);
        assert_eq!(FisherFunction::min().f_zero(), 0.0);
        assert!(!FisherFunction::min().is_regular());
        assert!(!FisherFunction::sqrt().is_regular());
    }

    #[test]
    fn numerical_limit_agrees_with_closed_form_f_zero() {
        // closed-form bridge function, analytic at t = 0
        for p in [0.25, 0.5, 0.9] {
            let a = 1.0 - p;
            let g = FisherFunction::custom("probe", move |t: f64| {
                let r = 4.0 * (a + t) * (1.0 + a * t) / ((1.0 + t).powi(2) * (1.0 + a).powi(2));
                0.5 * (1.0 + t) * r.powf(p)
            });
            let f0 = 0.5 * (4.0 * a / (1.0 + a).powi(2)).powf(p);
            assert!((g.f_zero() - f0).abs() < 1e-9, "p={p}: {}", g.f_zero());
        }
    }

    #[test]
    fn wyd_half_is_squared_mean() {
        let f = FisherFunction::wyd(0.5).unwrap();
        for t in log_grid(81, 1e-4, 1e4) {
            let expected = ((1.0 + t.sqrt()) / 2.0).powi(2);
            assert!((f.eval(t).unwrap() - expected).abs() <= 1e-12 * expected.max(1.0));
        }
    }

    #[test]
    fn wyd_near_one_matches_direct_formula_at_crossover() {
        // at |t-1| = 1e-4 the direct formula still has ~1e-8 relative accuracy
        for p in [0.1, 0.3, 0.5] {
            let f = FisherFunction::wyd(p).unwrap();
            for t in [1.0 - 1e-4, 1.0 + 1e-4, 0.5, 2.0, 37.0] {
                let direct = wyd_direct_formula(p, t);
                assert!((f.eval(t).unwrap() - direct).abs() < 1e-8 * direct);
            }
            for t in [1.0 - 1e-9, 1.0 + 1e-12, 1.0 + 1e-15] {
                assert!((f.eval(t).unwrap() - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn normalization_and_functional_equation() {
        for f in catalog() {
            assert!((f.eval(1.0).unwrap() - 1.0).abs() <= 1e-12, "{f}");
            for t in log_grid(41, 1e-4, 1e4) {
                let lhs = f.eval(t).unwrap();
                let rhs = t * f.eval(1.0 / t).unwrap();
                assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0), "{f} at {t}");
            }
        }
    }

    #[test]
    fn catalog_between_extremes() {
        for f in catalog() {
            for t in log_grid(41, 1e-4, 1e4) {
                let v = f.eval(t).unwrap();
                let lo = 2.0 * t / (1.0 + t);
                let hi = 0.5 * (1.0 + t);
                assert!(v >= lo - 1e-12 * hi && v <= hi + 1e-12 * hi, "{f} at {t}: {v}");
            }
        }
    }

    #[test]
    fn wyd_symmetry_in_p() {
        for p in [0.1, 0.2, 0.35] {
            let a = FisherFunction::wyd(p).unwrap();
            let b = FisherFunction::wyd(1.0 - p).unwrap();
            for t in log_grid(21, 1e-3, 1e3) {
                assert!((a.eval(t).unwrap() - b.eval(t).unwrap()).abs() <= 1e-12 * a.eval(t).unwrap().max(1.0));
            }
        }
    }

    #[test]
    fn check_transform_monotone_in_p() {
        let ps: Vec<f64> = (1..=20).map(|i| i as f64 * 0.025).collect();
        for t in log_grid(25, 1e-3, 1e3) {
            let vals: Vec<f64> =
                ps.iter().map(|&p| check_f(&FisherFunction::wyd(p).unwrap(), t).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] >= w[0] - 1e-14), "t={t}");
            let vals: Vec<f64> = ps
                .iter()
                .map(|&p| check_f(&FisherFunction::wyd(1.0 - p).unwrap(), t).unwrap())
                .collect();
            assert!(vals.windows(2).all(|w| w[1] >= w[0] - 1e-14), "t={t}");
        }
    }

    #[test]
    fn mc_and_check_c() {
        let fmax = FisherFunction::max();
        assert_eq!(mc_function(&fmax, 1.0, 1.0).unwrap(), 1.0);
        let w = FisherFunction::wyd(0.5).unwrap();
        assert!((mc_function(&w, 0.3, 0.3).unwrap() - 1.0 / 0.3).abs() < 1e-14);
        let expected = 1.0 / (0.3 * ((1.0 + (7.0f64 / 3.0).sqrt()) / 2.0).powi(2));
        assert!((mc_function(&w, 0.7, 0.3).unwrap() - expected).abs() < 1e-13);
        assert!((check_c(&w, 1.0, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((check_c(&w, 0.2, 0.2).unwrap() - 0.25 / 0.2).abs() < 1e-14);
        assert!(matches!(check_c(&FisherFunction::min(), 1.0, 2.0), Err(Error::NotRegular(_))));
        assert!(mc_function(&w, 0.0, 1.0).is_err());
    }

    #[test]
    fn tilde_of_max_is_min() {
        let f = FisherFunction::max();
        for t in log_grid(31, 1e-3, 1e3) {
            let expected = 2.0 * t / (t + 1.0);
            assert!((tilde_f(&f, t).unwrap() - expected).abs() < 1e-12 * expected.max(1.0));
        }
    }

    #[test]
    fn tilde_bounds_and_concavity() {
        let ts = log_grid(60, 1e-3, 1e2);
        for f in regular_catalog() {
            assert!((tilde_f(&f, 1.0).unwrap() - 1.0).abs() < 1e-12);
            let vals: Vec<f64> = ts.iter().map(|&t| tilde_f(&f, t).unwrap()).collect();
            for (&t, &v) in ts.iter().zip(&vals) {
                assert!(v >= -1e-12 && v <= 0.5 * (1.0 + t) + 1e-12, "{f} at {t}");
            }
            for i in 1..ts.len() - 1 {
                let s1 = (vals[i] - vals[i - 1]) / (ts[i] - ts[i - 1]);
                let s2 = (vals[i + 1] - vals[i]) / (ts[i + 1] - ts[i]);
                let second = (s2 - s1) / (ts[i + 1] - ts[i - 1]);
                assert!(second <= 1e-10, "{f} not concave at {}", ts[i]);
            }
        }
        // tilde_f of the Wigner-Yanase function tends to 0 at the origin
        let w = FisherFunction::wyd(0.5).unwrap();
        assert!(tilde_f(&w, 1e-10).unwrap().abs() < 1e-4);
    }

    #[test]
    fn d_c_homogeneity_identity() {
        for f in regular_catalog() {
            let m = f.f_zero();
            for &(x, y) in &[(0.7, 0.3), (2.0, 1.0), (0.01, 0.9), (5.0, 5.0)] {
                let lhs = 0.5 * m * d_c(&f, x, y).unwrap();
                let rhs = y * tilde_f(&f, x / y).unwrap();
                assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0), "{f} at ({x},{y})");
            }
            assert!((d_c(&f, 0.4, 0.4).unwrap() - 0.8 / m).abs() < 1e-12);
        }
    }

    #[test]
    fn bridge_matches_antiderivative_oracle() {
        // ∫_a^1 K(λ,t) dλ = ln(4(a+t)(1+at) / ((1+t)²(1+a)²)) with a = 1-p
        for p in [0.25, 0.5, 0.9] {
            let f = FisherFunction::bridge(p).unwrap();
            let a = 1.0 - p;
            for t in log_grid(17, 1e-2, 1e2) {
                let log_ratio = (4.0 * (a + t) * (1.0 + a * t) / ((1.0 + t).powi(2) * (1.0 + a).powi(2))).ln();
                let expected = 0.5 * (1.0 + t) * (p * log_ratio).exp();
                assert!((f.eval(t).unwrap() - expected).abs() < 1e-9 * expected, "bridge {p} at {t}");
            }
            let f0 = 0.5 * (4.0 * a / (1.0 + a).powi(2)).powf(p);
            assert!((f.f_zero() - f0).abs() < 1e-9, "bridge {p}: {} vs {f0}", f.f_zero());
        }
        assert_eq!(FisherFunction::bridge(0.0).unwrap().f_zero(), 0.5);
        assert!(FisherFunction::bridge(1.0).is_err());
    }

    #[test]
    fn spec_grammar() {
        assert_eq!(FisherFunction::parse("min").unwrap().name(), "min");
        assert_eq!(FisherFunction::parse("wyd:0.3").unwrap().wyd_parameter(), Some(0.3));
        assert_eq!(FisherFunction::parse("bridge:0.5").unwrap().params(), &[0.5]);
        assert!(matches!(FisherFunction::parse("wyd:1.5"), Err(Error::DomainError(_))));
        assert!(matches!(FisherFunction::parse("wyd:0"), Err(Error::DomainError(_))));
        assert!(matches!(FisherFunction::parse("bridge:1"), Err(Error::DomainError(_))));
        assert!(matches!(FisherFunction::parse("log"), Err(Error::Parse(_))));
        assert!(matches!(FisherFunction::parse("wyd:x"), Err(Error::Parse(_))));
    }

    #[test]
    fn log_derivatives_match_finite_differences() {
        let bridge = FisherFunction::bridge(0.5).unwrap().with_quadrature(QuadratureConfig::tight());
        let fs = vec![
            FisherFunction::min(),
            FisherFunction::max(),
            FisherFunction::sqrt(),
            bridge.clone(),
            FisherFunction::sharp(&bridge),
            FisherFunction::phi(&FisherFunction::wyd(0.3).unwrap(), &bridge),
        ];
        for f in fs {
            for t in [0.05, 0.8, 3.0, 40.0] {
                let h = 1e-5 * t;
                let fd = (f.eval(t + h).unwrap() - f.eval(t - h).unwrap()) / (2.0 * h);
                let d = f.derivative(t).unwrap();
                assert!((fd - d).abs() < 1e-6 * d.abs().max(1.0), "{f} at {t}: {fd} vs {d}");
            }
        }
    }

    #[test]
    fn complex_continuation_agrees_on_real_axis() {
        for f in [FisherFunction::min(), FisherFunction::max(), FisherFunction::sqrt(), FisherFunction::wyd(0.3).unwrap()] {
            for t in [0.2, 3.0] {
                let z = f.eval_complex(C64::new(t, 0.0)).unwrap();
                assert!((z.re - f.eval(t).unwrap()).abs() < 1e-13 && z.im.abs() < 1e-13);
            }
        }
        let b = FisherFunction::bridge(0.5).unwrap();
        assert!(matches!(b.eval_complex(C64::new(1.0, 1.0)), Err(Error::UnsupportedAnalyticContinuation(_))));
    }

    #[test]
    fn sharp_regularity() {
        let s = FisherFunction::sharp(&FisherFunction::min());
        assert!((s.f_zero() - 0.5).abs() < 1e-9);
        assert!(!FisherFunction::sharp(&FisherFunction::max()).is_regular());
        assert!(!FisherFunction::sharp(&FisherFunction::sqrt()).is_regular());
    }
}
