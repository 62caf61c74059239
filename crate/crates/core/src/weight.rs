//! Weight functions `h: [0,1] → [0,1]` and the exponential integral representation
//! of representing functions built from them.
//!
//! A weight `h` determines
//!
//! ```text
//! f(t) = (1+t)/2 · exp ∫₀¹ K(λ,t) h(λ) dλ,
//! K(λ,t) = (λ²-1)(1-t)² / ((λ+t)(1+λt)(1+λ)²)  ≤ 0,
//! ```
//!
//! and, when `∫ h(λ)/λ dλ < ∞`, the transform `f(0)/f(t)` through the kernel
//! `t(λ²-1) / (λ(λ+t)(1+λt))`.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fisher::FisherFunction;
use crate::matrix::C64;
use crate::quadrature::{integrate, QuadratureConfig};

/// Default ε ladder for boundary-value extraction.
pub const DEFAULT_EPS_LADDER: [f64; 3] = [1e-4, 1e-5, 1e-6];

/// Number of straight-line steps used to track `arg f` from `1 + iε` to `-λ + iε`.
const PATH_STEPS: usize = 64;
const MAX_BISECTIONS: usize = 40;

/// Upper bound on the automatically chosen substitution power.
const MAX_ENDPOINT_EXPONENT: f64 = 40.0;

#[derive(Clone, Debug, PartialEq)]
pub enum WeightFunction {
    Constant(f64),
    /// The closed form weight of the Wigner-Yanase-Dyson function with parameter `p`.
    Wyd(f64),
    /// `0` for `λ < 1-p`, `p` for `λ ≥ 1-p`.
    Step(f64),
    /// Piecewise-linear interpolation between knots, clamped to `[0,1]`.
    Grid { knots: Vec<f64>, values: Vec<f64> },
    Max(Box<WeightFunction>, Box<WeightFunction>),
    Min(Box<WeightFunction>, Box<WeightFunction>),
    Complement(Box<WeightFunction>),
}

impl WeightFunction {
    pub fn constant(v: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::DomainError(format!("constant weight {v} not in [0,1]")));
        }
        Ok(Self::Constant(v))
    }

    pub fn wyd(p: f64) -> Result<Self> {
        check_open_unit("p", p)?;
        Ok(Self::Wyd(p))
    }

    pub fn step(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::DomainError(format!("p out of range: {p} not in [0,1]")));
        }
        Ok(Self::Step(p))
    }

    pub fn grid(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(Error::DomainError(
                "grid weight needs at least two knots and one value per knot".into(),
            ));
        }
        if knots.iter().any(|k| !(0.0..=1.0).contains(k)) {
            return Err(Error::DomainError("grid knots must lie in [0,1]".into()));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::DomainError("grid knots must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::DomainError("grid values must be finite".into()));
        }
        let values = values.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Ok(Self::Grid { knots, values })
    }

    /// Reads a two-column CSV with header `lambda,value`.
    pub fn from_csv<P: AsRef<Path>>(path: P) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        let headers = reader.headers().map_err(|e| Error::Parse(e.to_string()))?;
        let names: Vec<&str> = headers.iter().map(str::trim).collect();
        if names != ["lambda", "value"] {
            return Err(Error::Parse(format!(
                "grid CSV header must be `lambda,value`, found `{}`",
                names.join(",")
            )));
        }
        let mut knots = Vec::new();
        let mut values = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            if record.len() != 2 {
                return Err(Error::Parse("grid CSV rows must have two columns".into()));
            }
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}")))
            };
            knots.push(parse(&record[0])?);
            values.push(parse(&record[1])?);
        }
        Self::grid(knots, values)
    }

    /// Parses `const:<v> | wydh:<p> | steph:<p> | grid:<file.csv>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (kind, arg) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("weight spec `{spec}` has no `:`")))?;
        let number = || {
            arg.parse::<f64>().map_err(|_| Error::Parse(format!("invalid number `{arg}`")))
        };
        match kind {
            "const" => Self::constant(number()?),
            "wydh" => Self::wyd(number()?),
            "steph" => Self::step(number()?),
            "grid" => Self::from_csv(arg),
            other => Err(Error::Parse(format!("unknown weight kind `{other}`"))),
        }
    }

    /// Pointwise maximum.
    pub fn max(a: Self, b: Self) -> Self {
        Self::Max(Box::new(a), Box::new(b))
    }

    /// Pointwise minimum.
    pub fn min(a: Self, b: Self) -> Self {
        Self::Min(Box::new(a), Box::new(b))
    }

    /// `1 - h`.
    pub fn complement(&self) -> Self {
        match self {
            Self::Constant(v) => Self::Constant(1.0 - v),
            Self::Complement(inner) => (**inner).clone(),
            Self::Grid { knots, values } => {
                Self::Grid { knots: knots.clone(), values: values.iter().map(|v| 1.0 - v).collect() }
            }
            Self::Max(a, b) => Self::min(a.complement(), b.complement()),
            Self::Min(a, b) => Self::max(a.complement(), b.complement()),
            other => Self::Complement(Box::new(other.clone())),
        }
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        let l = lambda.clamp(0.0, 1.0);
        match self {
            Self::Constant(v) => *v,
            Self::Wyd(p) => wyd_weight_unchecked(*p, l),
            Self::Step(p) => {
                if l >= 1.0 - p {
                    *p
                } else {
                    0.0
                }
            }
            Self::Grid { knots, values } => interpolate(knots, values, l),
            Self::Max(a, b) => a.eval(l).max(b.eval(l)),
            Self::Min(a, b) => a.eval(l).min(b.eval(l)),
            Self::Complement(inner) => 1.0 - inner.eval(l),
        }
    }

    /// Points in `(0,1)` where the weight jumps or kinks.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = match self {
            Self::Step(p) => vec![1.0 - p],
            Self::Grid { knots, .. } => knots.clone(),
            Self::Max(a, b) | Self::Min(a, b) => {
                let mut v = a.breakpoints();
                v.extend(b.breakpoints());
                v
            }
            Self::Complement(inner) => inner.breakpoints(),
            Self::Constant(_) | Self::Wyd(_) => Vec::new(),
        };
        out.retain(|&x| x > 0.0 && x < 1.0);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Exponent `α` with `h(λ) = O(λ^α)` as `λ → 0`; infinite when `h` vanishes near 0.
    pub fn decay_order(&self) -> f64 {
        match self {
            Self::Constant(v) => {
                if *v == 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            Self::Wyd(p) => p.min(1.0 - p),
            Self::Step(p) => {
                if *p == 0.0 || *p < 1.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            Self::Grid { knots, values } => {
                if interpolate(knots, values, 0.0) > 0.0 {
                    0.0
                } else if values[0] == 0.0 && values.get(1) == Some(&0.0) {
                    f64::INFINITY
                } else {
                    1.0
                }
            }
            Self::Max(a, b) => a.decay_order().min(b.decay_order()),
            Self::Min(a, b) => a.decay_order().max(b.decay_order()),
            Self::Complement(inner) => {
                if inner.eval(1e-12) < 1.0 - 1e-6 {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Human readable description in the weight spec grammar where possible.
    pub fn spec_string(&self) -> String {
        match self {
            Self::Constant(v) => format!("const:{v}"),
            Self::Wyd(p) => format!("wydh:{p}"),
            Self::Step(p) => format!("steph:{p}"),
            Self::Grid { knots, .. } => format!("grid[{} knots]", knots.len()),
            Self::Max(a, b) => format!("max({},{})", a.spec_string(), b.spec_string()),
            Self::Min(a, b) => format!("min({},{})", a.spec_string(), b.spec_string()),
            Self::Complement(inner) => format!("1-{}", inner.spec_string()),
        }
    }
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

fn interpolate(knots: &[f64], values: &[f64], x: f64) -> f64 {
    if x <= knots[0] {
        return values[0];
    }
    let last = knots.len() - 1;
    if x >= knots[last] {
        return values[last];
    }
    let i = knots.partition_point(|&k| k <= x) - 1;
    let s = (x - knots[i]) / (knots[i + 1] - knots[i]);
    (values[i] + s * (values[i + 1] - values[i])).clamp(0.0, 1.0)
}

fn check_open_unit(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::DomainError(format!("{name} out of range: {x} not in (0,1)")));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::DomainError(format!("t = {t} must be positive and finite")));
    }
    Ok(())
}

/// The integrand factor `K(λ,t)` multiplying `h(λ)` in the representation of `f`.
pub fn kernel_k(lambda: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::DomainError(format!("lambda = {lambda} not in [0,1]")));
    }
    check_t(t)?;
    Ok(kernel_k_unchecked(lambda, t))
}

fn kernel_k_unchecked(l: f64, t: f64) -> f64 {
    let u = 1.0 - t;
    let w = 1.0 + l;
    (l * l - 1.0) * u * u / ((l + t) * (1.0 + l * t) * w * w)
}

/// `∂K/∂t = (1-λ²)(1-t²) / ((λ+t)²(1+λt)²)`.
fn kernel_k_dt(l: f64, t: f64) -> f64 {
    let a = l + t;
    let b = 1.0 + l * t;
    (1.0 - l * l) * (1.0 - t * t) / (a * a * b * b)
}

/// The kernel of the `f(0)/f(t)` representation.
fn kernel_check(l: f64, t: f64) -> f64 {
    t * (l * l - 1.0) / (l * (l + t) * (1.0 + l * t))
}

/// The kernel giving `f(0) = ½ exp ∫ (λ²-1)/(λ(1+λ)²) h(λ) dλ`.
fn kernel_zero(l: f64) -> f64 {
    let w = 1.0 + l;
    (l * l - 1.0) / (l * w * w)
}

fn substitution_exponent(h: &WeightFunction, q: &QuadratureConfig) -> f64 {
    let alpha = h.decay_order();
    if alpha.is_finite() && alpha > 0.0 {
        q.endpoint_exponent.max((2.0 / alpha).min(MAX_ENDPOINT_EXPONENT))
    } else {
        q.endpoint_exponent
    }
}

/// `∫₀¹ g(λ) h(λ) dλ` under the substitution `λ = u^k`.
fn integrate_against<G>(h: &WeightFunction, g: G, q: &QuadratureConfig) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    let k = substitution_exponent(h, q);
    let breaks: Vec<f64> = h.breakpoints().iter().map(|&b| b.powf(1.0 / k)).collect();
    let integrand = |u: f64| {
        let l = u.powf(k);
        let hv = h.eval(l);
        if hv == 0.0 || l == 0.0 {
            0.0
        } else {
            g(l) * hv * k * u.powf(k - 1.0)
        }
    };
    integrate(integrand, 0.0, 1.0, &breaks, q)
}

/// Numerical divergence test for `∫₀ h(λ)/λ dλ`: compares the contributions of
/// successive decades `[1e-15, 1e-10]` and `[1e-10, 1e-5]` in `ln λ`.
pub fn check_integrable(h: &WeightFunction, q: &QuadratureConfig) -> Result<()> {
    let breaks: Vec<f64> = h.breakpoints().iter().map(|b| b.ln()).collect();
    let tail = |a: f64, b: f64| integrate(|s: f64| h.eval(s.exp()), a.ln(), b.ln(), &breaks, q);
    let near = tail(1e-15, 1e-10)?;
    let far = tail(1e-10, 1e-5)?;
    if near > 1e-12 && near >= 0.9 * far {
        return Err(Error::IntegrabilityFailure);
    }
    Ok(())
}

/// `(1+t)/2 · exp ∫₀¹ K(λ,t) h(λ) dλ`.
pub fn reconstruct_f(h: &WeightFunction, t: f64, q: &QuadratureConfig) -> Result<f64> {
    check_t(t)?;
    if t == 1.0 {
        return Ok(1.0);
    }
    let integral = integrate_against(h, |l| kernel_k_unchecked(l, t), q)?;
    Ok(0.5 * (1.0 + t) * integral.exp())
}

/// `f'(t)/f(t)` for the reconstructed function, differentiating under the integral.
pub fn reconstruct_log_derivative(h: &WeightFunction, t: f64, q: &QuadratureConfig) -> Result<f64> {
    check_t(t)?;
    let integral = integrate_against(h, |l| kernel_k_dt(l, t), q)?;
    Ok(1.0 / (1.0 + t) + integral)
}

/// `f(0)/f(t) = 1/(1+t) · exp ∫₀¹ t(λ²-1)/(λ(λ+t)(1+λt)) h(λ) dλ`.
pub fn reconstruct_check_f(h: &WeightFunction, t: f64, q: &QuadratureConfig) -> Result<f64> {
    check_t(t)?;
    check_integrable(h, q)?;
    let integral = integrate_against(h, |l| kernel_check(l, t), q)?;
    Ok(integral.exp() / (1.0 + t))
}

/// `f(0) = ½ exp ∫₀¹ (λ²-1)/(λ(1+λ)²) h(λ) dλ`; fails with
/// [`Error::IntegrabilityFailure`] when the function is not regular.
pub fn reconstruct_f_zero(h: &WeightFunction, q: &QuadratureConfig) -> Result<f64> {
    check_integrable(h, q)?;
    let integral = integrate_against(h, kernel_zero, q)?;
    Ok(0.5 * integral.exp())
}

fn wyd_weight_unchecked(p: f64, l: f64) -> f64 {
    let a = l.powf(p);
    let b = l.powf(1.0 - p);
    let (s, c) = (p * PI).sin_cos();
    let num = (a + b) * s;
    let den = 1.0 - l - (a - b) * c;
    // num ≥ 0, so atan2 lands in [0, π]
    num.atan2(den) / PI
}

/// `h_p(λ) = (1/π) arctan[(λ^p + λ^{1-p}) sin pπ / (1 - λ - (λ^p - λ^{1-p}) cos pπ)]`,
/// with the branch taken in `[0, π]`.
pub fn wyd_weight(p: f64, lambda: f64) -> Result<f64> {
    check_open_unit("p", p)?;
    check_open_unit("lambda", lambda)?;
    Ok(wyd_weight_unchecked(p, lambda))
}

/// The step weight of the variant bridge: `0` below `1-p`, `p` from `1-p` on.
pub fn bridge_weight(p: f64, lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError(format!("p out of range: {p} not in [0,1]")));
    }
    check_open_unit("lambda", lambda)?;
    Ok(WeightFunction::Step(p).eval(lambda))
}

/// Recovers `h(λ)` from boundary values of the analytic continuation of `f` on the cut `(-1, 0)`.
///
/// For the Wigner-Yanase-Dyson functions this is `-(1/π) arg((1-z^p)(1-z^{1-p}))`
/// at `z = -λ + iε`; otherwise `(1/π) arg f(-λ + iε)` tracked continuously from
/// `1 + iε`. The values over the ε ladder are extrapolated to `ε = 0`.
pub fn extract_weight(f: &FisherFunction, lambda: f64, eps_ladder: &[f64]) -> Result<f64> {
    check_open_unit("lambda", lambda)?;
    if eps_ladder.is_empty() || eps_ladder.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidConfig("ε ladder must be non-empty and positive".into()));
    }
    if !f.has_analytic_continuation() {
        return Err(Error::UnsupportedAnalyticContinuation(f.name().to_string()));
    }
    let values = eps_ladder
        .iter()
        .map(|&eps| boundary_argument(f, lambda, eps))
        .collect::<Result<Vec<f64>>>()?;
    Ok(extrapolate_to_zero(eps_ladder, &values))
}

fn boundary_argument(f: &FisherFunction, lambda: f64, eps: f64) -> Result<f64> {
    let z0 = C64::new(-lambda, eps);
    if let Some(p) = f.wyd_parameter() {
        let one = C64::new(1.0, 0.0);
        let a = (one - z0.powf(p)).arg();
        let b = (one - z0.powf(1.0 - p)).arg();
        return Ok(-(a + b) / PI);
    }
    // f is analytic and zero-free off the negative axis, so any path in the upper
    // half plane works; go up, across and down, bisecting wherever the phase jumps
    let corners = [C64::new(1.0, eps), C64::new(1.0, 1.0), C64::new(-lambda, 1.0), z0];
    let mut prev = f.eval_complex(corners[0])?;
    let mut angle = prev.arg();
    for seg in corners.windows(2) {
        for i in 1..=PATH_STEPS {
            let (a, b) = ((i - 1) as f64 / PATH_STEPS as f64, i as f64 / PATH_STEPS as f64);
            let za = path_point(seg[0], seg[1], a);
            let zb = path_point(seg[0], seg[1], b);
            let (w, step) = track(f, za, zb, prev, 0, lambda)?;
            angle += step;
            prev = w;
        }
    }
    Ok(angle / PI)
}

/// Point at fraction `s` of the segment; vertical segments are spaced
/// geometrically in the imaginary part so the approach to the axis is resolved.
fn path_point(a: C64, b: C64, s: f64) -> C64 {
    if a.re == b.re && a.im > 0.0 && b.im > 0.0 {
        C64::new(a.re, a.im * (b.im / a.im).powf(s))
    } else {
        a + (b - a) * s
    }
}

fn track(f: &FisherFunction, za: C64, zb: C64, wa: C64, depth: usize, lambda: f64) -> Result<(C64, f64)> {
    let wb = f.eval_complex(zb)?;
    if !(wb.re.is_finite() && wb.im.is_finite()) || wb.norm() == 0.0 {
        return Err(Error::BranchTrackingFailure { lambda });
    }
    let step = (wb / wa).arg();
    if step.abs() <= 0.25 * PI {
        return Ok((wb, step));
    }
    if depth >= MAX_BISECTIONS {
        return Err(Error::BranchTrackingFailure { lambda });
    }
    let zm = (za + zb) * 0.5;
    let (wm, s1) = track(f, za, zm, wa, depth + 1, lambda)?;
    let (wb, s2) = track(f, zm, zb, wm, depth + 1, lambda)?;
    Ok((wb, s1 + s2))
}

/// Neville extrapolation of the interpolating polynomial through `(x_i, y_i)` to `x = 0`.
fn extrapolate_to_zero(x: &[f64], y: &[f64]) -> f64 {
    let mut p = y.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
        }
    }
    p[0]
}

/// The curve `p ↦ h_p(λ)` at fixed `λ`.
pub fn figure1_curve(lambda: f64, p_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    check_open_unit("lambda", lambda)?;
    p_grid.iter().map(|&p| Ok((p, wyd_weight(p, lambda)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extracted_weights_match_closed_forms() {
        let cases = [
            (FisherFunction::min(), 1.0),
            (FisherFunction::max(), 0.0),
            (FisherFunction::sqrt(), 0.5),
            (FisherFunction::sharp(&FisherFunction::max()), 1.0),
        ];
        for (f, h) in cases {
            for l in [1e-4, 0.05, 0.5, 0.95] {
                let e = extract_weight(&f, l, &DEFAULT_EPS_LADDER.map(|x| x * l)).unwrap();
                assert!((e - h).abs() < 1e-6, "{} {l}: {e}", f.name());
            }
        }
        for p in [0.1, 0.5, 0.75] {
            let f = FisherFunction::sharp(&FisherFunction::wyd(p).unwrap());
            for l in [0.05, 0.3, 0.9] {
                let e = extract_weight(&f, l, &DEFAULT_EPS_LADDER.map(|x| x * l)).unwrap();
                assert!((e - (1.0 - wyd_weight(p, l).unwrap())).abs() < 1e-6, "{p} {l}: {e}");
            }
        }
        assert!(extract_weight(&FisherFunction::bridge(0.5).unwrap(), 0.5, &DEFAULT_EPS_LADDER).is_err());
    }

    #[test]
    fn kernel_values() {
        assert_eq!(kernel_k(0.3, 1.0).unwrap(), 0.0);
        assert_eq!(kernel_k(1.0, 5.0).unwrap(), 0.0);
        assert!((kernel_k(0.5, 2.0).unwrap() + 1.0 / 15.0).abs() < 1e-16);
        assert!(kernel_k(0.5, 0.0).is_err());
        assert!(kernel_k(1.5, 1.0).is_err());
    }

    #[test]
    fn kernel_is_nonpositive() {
        for i in 0..=50 {
            for j in 0..=40 {
                let l = i as f64 / 50.0;
                let t = 10f64.powf(-4.0 + 8.0 * j as f64 / 40.0);
                assert!(kernel_k(l, t).unwrap() <= 0.0);
            }
        }
    }

    #[test]
    fn kernel_derivative_matches_finite_difference() {
        for &(l, t) in &[(0.2, 0.5), (0.7, 3.0), (0.01, 0.02)] {
            let h = 1e-6 * t;
            let fd = (kernel_k_unchecked(l, t + h) - kernel_k_unchecked(l, t - h)) / (2.0 * h);
            assert!((fd - kernel_k_dt(l, t)).abs() < 1e-6 * (1.0 + fd.abs()));
        }
    }

    #[test]
    fn wyd_weight_spot_values() {
        let l = 3.0 - 2.0 * 2f64.sqrt();
        assert!((wyd_weight(0.5, l).unwrap() - 0.25).abs() < 1e-15);
        let expected = (2.0 * 2f64.sqrt()).atan() / PI;
        assert!((wyd_weight(0.5, 0.5).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.391827).abs() < 1e-6);
        for &p in &[0.1, 0.3, 0.45] {
            for &l in &[0.01, 0.3, 0.9] {
                let a = wyd_weight(p, l).unwrap();
                let b = wyd_weight(1.0 - p, l).unwrap();
                assert!((a - b).abs() < 1e-14);
            }
        }
        assert!(wyd_weight(0.0, 0.5).is_err());
        assert!(wyd_weight(0.5, 1.0).is_err());
    }

    #[test]
    fn wyd_weight_branch_stays_in_unit_interval() {
        for i in 1..100 {
            for j in 1..100 {
                let p = i as f64 / 100.0;
                let l = j as f64 / 100.0;
                let h = wyd_weight(p, l).unwrap();
                assert!((0.0..=1.0).contains(&h));
            }
        }
    }

    #[test]
    fn bridge_steps() {
        assert_eq!(bridge_weight(0.0, 0.99).unwrap(), 0.0);
        assert_eq!(bridge_weight(1.0, 1e-9).unwrap(), 1.0);
        assert_eq!(bridge_weight(0.4, 0.7).unwrap(), 0.4);
        assert_eq!(bridge_weight(0.4, 0.5).unwrap(), 0.0);
        assert!(bridge_weight(1.2, 0.5).is_err());
    }

    #[test]
    fn reconstruct_elementary_weights() {
        let q = QuadratureConfig::default();
        for &t in &[0.01, 0.5, 2.0, 100.0] {
            let f0 = reconstruct_f(&WeightFunction::Constant(0.0), t, &q).unwrap();
            assert_eq!(f0, 0.5 * (1.0 + t));
            let f1 = reconstruct_f(&WeightFunction::Constant(1.0), t, &q).unwrap();
            assert!((f1 - 2.0 * t / (1.0 + t)).abs() < 1e-8 * f1);
            let fh = reconstruct_f(&WeightFunction::Constant(0.5), t, &q).unwrap();
            assert!((fh - t.sqrt()).abs() < 1e-8 * fh);
        }
    }

    #[test]
    fn check_f_elementary_weights() {
        let q = QuadratureConfig::default();
        for &t in &[0.01, 1.0, 7.0] {
            let v = reconstruct_check_f(&WeightFunction::Constant(0.0), t, &q).unwrap();
            assert!((v - 1.0 / (1.0 + t)).abs() < 1e-15);
        }
        assert_eq!(
            reconstruct_check_f(&WeightFunction::Constant(1.0), 2.0, &q),
            Err(Error::IntegrabilityFailure)
        );
        assert_eq!(
            reconstruct_check_f(&WeightFunction::Constant(0.5), 2.0, &q),
            Err(Error::IntegrabilityFailure)
        );
    }

    #[test]
    fn grid_interpolation_and_clamping() {
        let g = WeightFunction::grid(vec![0.0, 0.5, 1.0], vec![0.0, 1.2, 0.4]).unwrap();
        assert_eq!(g.eval(0.25), 0.5);
        assert_eq!(g.eval(0.5), 1.0);
        assert!((g.eval(0.75) - 0.7).abs() < 1e-15);
        assert!(WeightFunction::grid(vec![0.5, 0.2], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn grid_from_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.csv");
        std::fs::write(&path, "lambda,value\n0,0\n0.5,0.25\n1,0.5\n").unwrap();
        let g = WeightFunction::parse(&format!("grid:{}", path.display())).unwrap();
        assert!((g.eval(0.75) - 0.375).abs() < 1e-15);

        let bad = dir.path().join("bad.csv");
        std::fs::write(&bad, "x,y\n0,0\n1,1\n").unwrap();
        assert!(matches!(WeightFunction::from_csv(&bad), Err(Error::Parse(_))));
    }

    #[test]
    fn weight_spec_grammar() {
        assert_eq!(WeightFunction::parse("const:0.5").unwrap(), WeightFunction::Constant(0.5));
        assert_eq!(WeightFunction::parse("wydh:0.3").unwrap(), WeightFunction::Wyd(0.3));
        assert_eq!(WeightFunction::parse("steph:0.4").unwrap(), WeightFunction::Step(0.4));
        assert!(WeightFunction::parse("wydh:1.5").is_err());
        assert!(WeightFunction::parse("const:2").is_err());
        assert!(WeightFunction::parse("foo:1").is_err());
        assert!(WeightFunction::parse("const").is_err());
    }

    #[test]
    fn complement_structure() {
        let h = WeightFunction::max(WeightFunction::Wyd(0.3), WeightFunction::Step(0.2));
        let c = h.complement();
        for &l in &[0.1, 0.5, 0.85] {
            assert!((c.eval(l) - (1.0 - h.eval(l))).abs() < 1e-15);
        }
        assert_eq!(c.complement().eval(0.4), h.eval(0.4));
    }

    #[test]
    fn neville_is_exact_for_quadratics() {
        let x = [1e-4, 1e-5, 1e-6];
        let y: Vec<f64> = x.iter().map(|&e| 0.3 + 2.0 * e - 5.0 * e * e).collect();
        assert!((extrapolate_to_zero(&x, &y) - 0.3).abs() < 1e-14);
    }

    #[test]
    fn figure_curve_domain() {
        assert!(figure1_curve(1.0, &[0.5]).is_err());
        let c = figure1_curve(0.5, &[0.25, 0.5, 0.75]).unwrap();
        assert!((c[0].1 - c[2].1).abs() < 1e-15);
        // decreasing in p on (0, 1/2]
        assert!(c[1].1 < c[0].1);
    }
}
