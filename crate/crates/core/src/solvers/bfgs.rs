//! BFGS with a strong-Wolfe line search.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, GbefError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BfgsConfig {
    /// Convergence threshold on the gradient ∞-norm.
    pub gradient_tolerance: f64,
    pub max_iterations: usize,
    /// Sufficient-decrease constant.
    pub c1: f64,
    /// Curvature constant.
    pub c2: f64,
    pub max_line_search: usize,
}

impl Default for BfgsConfig {
    fn default() -> Self {
        Self { gradient_tolerance: 1e-6, max_iterations: 1000, c1: 1e-4, c2: 0.9, max_line_search: 40 }
    }
}

impl BfgsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.c1 && self.c1 < self.c2 && self.c2 < 1.0) {
            return Err(invalid(format!("line search needs 0 < c1 < c2 < 1, got {} and {}", self.c1, self.c2)));
        }
        if !(self.gradient_tolerance > 0.0) {
            return Err(invalid("gradient tolerance must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BfgsResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient: Vec<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Why the run stopped early, if it did.
    pub message: Option<String>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

struct Objective<'a, F> {
    f: &'a mut F,
    evaluations: usize,
}

impl<F> Objective<'_, F>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    fn eval(&mut self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.evaluations += 1;
        let (v, g) = (self.f)(x)?;
        if !v.is_finite() || g.iter().any(|x| !x.is_finite()) {
            return Err(GbefError::Optimizer {
                message: format!("non-finite objective {v} or gradient"),
                theta: x.to_vec(),
            });
        }
        if g.len() != x.len() {
            return Err(GbefError::Optimizer {
                message: format!("gradient has {} entries for {} parameters", g.len(), x.len()),
                theta: x.to_vec(),
            });
        }
        Ok((v, g))
    }
}

#[derive(Clone)]
struct Point {
    alpha: f64,
    value: f64,
    slope: f64,
    gradient: Vec<f64>,
}

/// Minimizer of the cubic through two points with slopes, if it lies safely
/// inside the bracket.
fn cubic_step(lo: &Point, hi: &Point) -> Option<f64> {
    let d1 = lo.slope + hi.slope - 3.0 * (lo.value - hi.value) / (lo.alpha - hi.alpha);
    let disc = d1 * d1 - lo.slope * hi.slope;
    if disc < 0.0 {
        return None;
    }
    let d2 = (hi.alpha - lo.alpha).signum() * disc.sqrt();
    let denom = hi.slope - lo.slope + 2.0 * d2;
    if denom == 0.0 {
        return None;
    }
    let a = hi.alpha - (hi.alpha - lo.alpha) * (hi.slope + d2 - d1) / denom;
    let (left, right) = (lo.alpha.min(hi.alpha), lo.alpha.max(hi.alpha));
    let margin = 0.1 * (right - left);
    (a.is_finite() && a > left + margin && a < right - margin).then_some(a)
}

fn line_search<F>(
    obj: &mut Objective<'_, F>,
    x: &[f64],
    p: &[f64],
    f0: f64,
    g0: &[f64],
    alpha_init: f64,
    cfg: &BfgsConfig,
) -> Result<Option<Point>>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let slope0 = dot(g0, p);
    let probe = |obj: &mut Objective<'_, F>, alpha: f64| -> Result<Point> {
        let xt: Vec<f64> = x.iter().zip(p).map(|(a, b)| a + alpha * b).collect();
        let (value, gradient) = obj.eval(&xt)?;
        Ok(Point { alpha, value, slope: dot(&gradient, p), gradient })
    };
    let armijo = |pt: &Point| pt.value <= f0 + cfg.c1 * pt.alpha * slope0;
    let curvature = |pt: &Point| pt.slope.abs() <= -cfg.c2 * slope0;

    let mut prev = Point { alpha: 0.0, value: f0, slope: slope0, gradient: g0.to_vec() };
    let mut alpha = alpha_init;
    let mut bracket = None;
    for i in 0..cfg.max_line_search {
        let pt = probe(obj, alpha)?;
        if !armijo(&pt) || (i > 0 && pt.value >= prev.value) {
            bracket = Some((prev.clone(), pt));
            break;
        }
        if curvature(&pt) {
            return Ok(Some(pt));
        }
        if pt.slope >= 0.0 {
            bracket = Some((pt, prev.clone()));
            break;
        }
        prev = pt;
        alpha *= 2.0;
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Ok((prev.alpha > 0.0).then_some(prev));
    };
    for _ in 0..cfg.max_line_search {
        let trial = cubic_step(&lo, &hi).unwrap_or(0.5 * (lo.alpha + hi.alpha));
        if (trial - lo.alpha).abs() < 1e-16 * lo.alpha.abs().max(1.0) {
            break;
        }
        let pt = probe(obj, trial)?;
        if !armijo(&pt) || pt.value >= lo.value {
            hi = pt;
        } else {
            if curvature(&pt) {
                return Ok(Some(pt));
            }
            if pt.slope * (hi.alpha - lo.alpha) >= 0.0 {
                hi = lo;
            }
            lo = pt;
        }
    }
    // accept a strictly improving point even without the curvature condition
    Ok((lo.alpha > 0.0 && lo.value < f0).then_some(lo))
}

/// Minimizes `f`, which returns value and gradient at a point.
pub fn bfgs_minimize<F>(mut f: F, x0: &[f64], cfg: &BfgsConfig) -> Result<BfgsResult>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    cfg.validate()?;
    let n = x0.len();
    let mut obj = Objective { f: &mut f, evaluations: 0 };
    let mut x = x0.to_vec();
    let (mut fx, mut g) = obj.eval(&x)?;
    // inverse Hessian, row-major
    let mut hinv = identity(n);
    let mut scaled = false;
    let mut iterations = 0;
    let mut message = None;

    while inf_norm(&g) > cfg.gradient_tolerance {
        if iterations >= cfg.max_iterations {
            message = Some(format!("reached {} iterations", cfg.max_iterations));
            break;
        }
        let mut p = matvec(&hinv, &g, -1.0);
        if dot(&p, &g) >= 0.0 {
            hinv = identity(n);
            scaled = false;
            p = g.iter().map(|v| -v).collect();
        }
        let alpha_init = if iterations == 0 { (1.0 / inf_norm(&g)).min(1.0) } else { 1.0 };
        let step = match line_search(&mut obj, &x, &p, fx, &g, alpha_init, cfg)? {
            Some(pt) => pt,
            None if scaled || iterations > 0 => {
                // retry once along steepest descent before giving up
                hinv = identity(n);
                scaled = false;
                let sd: Vec<f64> = g.iter().map(|v| -v).collect();
                match line_search(&mut obj, &x, &sd, fx, &g, (1.0 / inf_norm(&g)).min(1.0), cfg)? {
                    Some(pt) => {
                        p = sd;
                        pt
                    }
                    None => {
                        message = Some("line search found no decrease".into());
                        break;
                    }
                }
            }
            None => {
                message = Some("line search found no decrease".into());
                break;
            }
        };
        let s: Vec<f64> = p.iter().map(|v| step.alpha * v).collect();
        let y: Vec<f64> = step.gradient.iter().zip(&g).map(|(a, b)| a - b).collect();
        x.iter_mut().zip(&s).for_each(|(xi, si)| *xi += si);
        fx = step.value;
        g = step.gradient;
        iterations += 1;

        let sy = dot(&s, &y);
        let yy = dot(&y, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * yy.sqrt() && sy > 0.0 {
            if !scaled {
                let gamma = sy / yy;
                hinv.iter_mut().for_each(|v| *v *= gamma);
                scaled = true;
            }
            bfgs_update(&mut hinv, &s, &y, sy);
        }
    }
    let converged = inf_norm(&g) <= cfg.gradient_tolerance;
    Ok(BfgsResult { x, value: fx, gradient: g, iterations, evaluations: obj.evaluations, converged, message })
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

fn matvec(m: &[f64], v: &[f64], scale: f64) -> Vec<f64> {
    let n = v.len();
    (0..n).map(|i| scale * dot(&m[i * n..(i + 1) * n], v)).collect()
}

/// `H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ`.
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    let hy = matvec(h, y, 1.0);
    let yhy = dot(y, &hy);
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] += -rho * (s[i] * hy[j] + hy[i] * s[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}
