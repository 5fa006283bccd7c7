//! Gauss–Legendre rules, fixed and adaptive, for complex-valued integrands.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d.is_finite() { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_lo^hi f(x) dx`.
    pub fn integrate<F>(&self, f: F, lo: f64, hi: f64) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(mid + half * x) * w)
            .sum::<Complex64>()
            * half
    }

    /// Composite rule over `panels` equal subintervals.
    pub fn composite<F>(&self, f: F, lo: f64, hi: f64, panels: usize) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        let h = (hi - lo) / panels as f64;
        (0..panels)
            .map(|k| {
                let a = lo + h * k as f64;
                self.integrate(&f, a, a + h)
            })
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive bisection driven by a fixed Gauss–Legendre rule: a panel is
/// accepted once the whole-panel estimate and the two half-panel estimates
/// agree to `abs_tol + rel_tol·|estimate|`.
pub fn adaptive<F>(
    rule: &GaussLegendre,
    f: &F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let whole = rule.integrate(f, lo, hi);
    adaptive_step(rule, f, lo, hi, whole, abs_tol, rel_tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F>(
    rule: &GaussLegendre,
    f: &F,
    lo: f64,
    hi: f64,
    whole: Complex64,
    abs_tol: f64,
    rel_tol: f64,
    depth: u32,
) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let mid = 0.5 * (lo + hi);
    let left = rule.integrate(f, lo, mid);
    let right = rule.integrate(f, mid, hi);
    let refined = left + right;
    if depth == 0 || (refined - whole).norm() <= abs_tol + rel_tol * refined.norm() {
        return refined;
    }
    adaptive_step(rule, f, lo, mid, left, 0.5 * abs_tol, rel_tol, depth - 1)
        + adaptive_step(rule, f, mid, hi, right, 0.5 * abs_tol, rel_tol, depth - 1)
}

/// `∫ f(z) dz` along the straight segment `from → to`.
pub fn segment_integral<F>(
    rule: &GaussLegendre,
    f: &F,
    from: Complex64,
    to: Complex64,
    panels: usize,
) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let dz = to - from;
    rule.composite(|s| f(from + dz * s), 0.0, 1.0, panels) * dz
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 33] {
            let r = GaussLegendre::new(n);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        let r = GaussLegendre::new(6);
        // ∫_0^2 x^11 dx = 2^12/12
        let v = r.integrate(|x| Complex64::new(x.powi(11), 0.0), 0.0, 2.0);
        assert!((v.re - 4096.0 / 12.0).abs() < 1e-10);
    }

    #[test]
    fn adaptive_oscillatory() {
        let r = GaussLegendre::new(10);
        let f = |t: f64| Complex64::new(0.0, 40.0 * t).exp();
        let v = adaptive(&r, &f, 0.0, 1.0, 1e-14, 1e-13, 30);
        let exact = (Complex64::new(0.0, 40.0).exp() - 1.0) / Complex64::new(0.0, 40.0);
        assert!((v - exact).norm() < 1e-13);
    }

    #[test]
    fn segment_integral_of_analytic() {
        let r = GaussLegendre::new(8);
        let f = |z: Complex64| z * z;
        let (a, b) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 1.0));
        let v = segment_integral(&r, &f, a, b, 2);
        assert!((v - b * b * b / 3.0).norm() < 1e-14);
    }
}
