//! Nyström discretization of the Bezoutiant and its companion operators on
//! a uniform midpoint grid.
//!
//! A grid function is the vector of its node values; an operator with
//! kernel `K` becomes the matrix `K(xᵢ, tⱼ)·wⱼ`. Volterra kernels take the
//! value ½ on the diagonal, which keeps products of discretized operators
//! second-order accurate.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bezoutiant::{kernel_bound, BezoutKernel, MFunctions, NormalizedPair};
use crate::exact::DensityPoly;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub n: usize,
    pub a: f64,
}

impl Grid {
    /// `n` cell midpoints of `[0, a]`, each with weight `a/n`.
    pub fn midpoint(a: f64, n: usize) -> Self {
        let h = a / n as f64;
        Self {
            nodes: (0..n).map(|j| (j as f64 + 0.5) * h).collect(),
            weights: vec![h; n],
            n,
            a,
        }
    }

    pub fn step(&self) -> f64 {
        self.a / self.n as f64
    }

    /// `(∑ wᵢ|fᵢ|²)^{1/2}`.
    pub fn norm(&self, f: &[Complex64]) -> f64 {
        f.iter()
            .zip(&self.weights)
            .map(|(v, w)| w * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn sample(&self, p: &DensityPoly) -> Vec<Complex64> {
        self.nodes
            .iter()
            .map(|&x| p.eval_f64(Complex64::new(x, 0.0)))
            .collect()
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::zero(); n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64 + Sync) -> Self {
        let data = (0..n * n)
            .into_par_iter()
            .map(|k| f(k / n, k % n))
            .collect();
        Self { n, data }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut data = vec![Complex64::zero(); n * n];
        data.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
            for (k, &lhs) in self.row(i).iter().enumerate() {
                if lhs.is_zero() {
                    continue;
                }
                for (o, &rhs) in out.iter_mut().zip(other.row(k)) {
                    *o += lhs * rhs;
                }
            }
        });
        Matrix { n, data }
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(f).map(|(m, v)| m * v).sum())
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(p, q)| p - q)
                .collect(),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Hilbert–Schmidt norm of the operator the matrix represents on `grid`.
    pub fn hilbert_schmidt(&self, grid: &Grid) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += grid.weights[i] * self.get(i, j).norm_sqr() / grid.weights[j];
            }
        }
        acc.sqrt()
    }

    /// Operator norm on the weighted space, by power iteration on `M*M`.
    pub fn operator_norm(&self, grid: &Grid) -> f64 {
        let n = self.n;
        let sw: Vec<f64> = grid.weights.iter().map(|w| w.sqrt()).collect();
        // similarity to the Euclidean setting: D^{1/2} M D^{-1/2}
        let m = Matrix::from_fn(n, |i, j| self.get(i, j) * sw[i] / sw[j]);
        let mh = Matrix::from_fn(n, |i, j| m.get(j, i).conj());
        let mut v: Vec<Complex64> = (0..n)
            .map(|k| Complex64::new(1.0 + 0.1 * (k as f64).sin(), 0.0))
            .collect();
        let mut sigma = 0.0;
        for _ in 0..500 {
            let w = mh.apply(&m.apply(&v));
            let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            let next = norm.sqrt();
            v = w.into_iter().map(|x| x / norm).collect();
            if (next - sigma).abs() <= 1e-13 * next {
                return next;
            }
            sigma = next;
        }
        sigma
    }

    /// Rows `i,j,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,re,im\n");
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                out.push_str(&format!("{i},{j},{:.17e},{:.17e}\n", v.re, v.im));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorLabel {
    T,
    TAdjoint,
    A,
    B1,
    B2,
    B2Adjoint,
    N2N1Adjoint,
}

#[derive(Clone, Debug)]
pub struct DiscretizedOperator {
    pub label: OperatorLabel,
    pub matrix: Matrix,
}

#[derive(Clone, Debug)]
pub struct OperatorSet {
    pub grid: Grid,
    pub ops: Vec<DiscretizedOperator>,
    /// Node values of `N₂` (equivalently of `M₂`, up to the factor).
    pub n2: Vec<Complex64>,
    /// Node values of the function that represents `N₁*`.
    pub n1: Vec<Complex64>,
}

impl OperatorSet {
    pub fn get(&self, label: OperatorLabel) -> &Matrix {
        &self
            .ops
            .iter()
            .find(|op| op.label == label)
            .expect("every label is assembled")
            .matrix
    }
}

fn heaviside(u: f64) -> f64 {
    if u > 0.0 {
        1.0
    } else if u < 0.0 {
        0.0
    } else {
        0.5
    }
}

fn sample_at(p: &DensityPoly, x: f64) -> Complex64 {
    p.eval_f64(Complex64::new(x, 0.0))
}

/// Assembles `T`, `T*`, `A`, `B₁`, `B₂`, `B₂*` and `N₂N₁*` on `grid`.
pub fn discretize_all(
    _pair: &NormalizedPair,
    k: &BezoutKernel,
    mf: &MFunctions,
    grid: &Grid,
) -> OperatorSet {
    let n = grid.n;
    let x = &grid.nodes;
    let w = &grid.weights;
    let a = grid.a;
    let i = Complex64::i();
    let c = k.c.to_complex();

    let t = Matrix::from_fn(n, |p, q| c * k.u_f64(x[p], x[q]) * w[q]);
    let t_adj = Matrix::from_fn(n, |p, q| (c * k.u_f64(x[q], x[p])).conj() * w[q]);
    let a_op = Matrix::from_fn(n, |p, q| i * heaviside(x[p] - x[q]) * w[q]);

    let phi1 = grid.sample(&mf.phi1);
    let phi2 = grid.sample(&mf.phi2);
    // B_k = A + Π P_k*, with P_k* f = −i∫ f·conj Φ_k
    let b1 = Matrix::from_fn(n, |p, q| a_op.get(p, q) - i * phi1[q].conj() * w[q]);
    let b2 = Matrix::from_fn(n, |p, q| a_op.get(p, q) - i * phi2[q].conj() * w[q]);
    let b2_adj = Matrix::from_fn(n, |p, q| (-i * heaviside(x[q] - x[p]) + i * phi2[p]) * w[q]);

    let scale = (mf.alpha.conj() + &mf.beta).to_complex();
    let n2: Vec<Complex64> = x
        .iter()
        .map(|&s| -i * scale * sample_at(&mf.m2, s))
        .collect();
    let n1: Vec<Complex64> = x.iter().map(|&s| sample_at(&mf.m2, a - s)).collect();
    let rank_one = Matrix::from_fn(n, |p, q| n2[p] * n1[q] * w[q]);

    let ops = [
        (OperatorLabel::T, t),
        (OperatorLabel::TAdjoint, t_adj),
        (OperatorLabel::A, a_op),
        (OperatorLabel::B1, b1),
        (OperatorLabel::B2, b2),
        (OperatorLabel::B2Adjoint, b2_adj),
        (OperatorLabel::N2N1Adjoint, rank_one),
    ]
    .into_iter()
    .map(|(label, matrix)| DiscretizedOperator { label, matrix })
    .collect();
    OperatorSet {
        grid: grid.clone(),
        ops,
        n2,
        n1,
    }
}

/// `T·B₁ − B₂*·T − N₂N₁*` on the set's grid.
pub fn identity_defect(ops: &OperatorSet) -> Matrix {
    let t = ops.get(OperatorLabel::T);
    let lhs = t.matmul(ops.get(OperatorLabel::B1));
    let rhs = ops.get(OperatorLabel::B2Adjoint).matmul(t);
    lhs.sub(&rhs).sub(ops.get(OperatorLabel::N2N1Adjoint))
}

/// Hilbert–Schmidt norm of [`identity_defect`].
pub fn identity_residual(ops: &OperatorSet) -> f64 {
    identity_defect(ops).hilbert_schmidt(&ops.grid)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub norm: String,
    pub grid_sizes: Vec<usize>,
    pub residuals: Vec<f64>,
    /// `residual(nₖ) / residual(nₖ₊₁)`; absent when the finer residual is 0.
    pub ratios: Vec<Option<f64>>,
    pub t_operator_norm: f64,
    pub t_norm_bound: f64,
}

impl ResidualReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Residual of the operator identity over a sequence of grid sizes, plus the
/// operator norm of `T` on the finest grid against its envelope bound.
pub fn residual_study(
    pair: &NormalizedPair,
    k: &BezoutKernel,
    mf: &MFunctions,
    sizes: &[usize],
) -> ResidualReport {
    let a = pair.a.to_f64().unwrap_or(f64::NAN);
    let mut residuals = Vec::with_capacity(sizes.len());
    let mut t_operator_norm = 0.0;
    for &n in sizes {
        let ops = discretize_all(pair, k, mf, &Grid::midpoint(a, n));
        residuals.push(identity_residual(&ops));
        t_operator_norm = ops.get(OperatorLabel::T).operator_norm(&ops.grid);
    }
    let ratios = residuals
        .windows(2)
        .map(|w| if w[1] > 0.0 { Some(w[0] / w[1]) } else { None })
        .collect();
    ResidualReport {
        norm: "hilbert-schmidt".into(),
        grid_sizes: sizes.to_vec(),
        residuals,
        ratios,
        t_operator_norm,
        t_norm_bound: t_norm_bound(pair, k),
    }
}

/// `|c|·∫h` for the kernel envelope `h`.
pub fn t_norm_bound(pair: &NormalizedPair, k: &BezoutKernel) -> f64 {
    k.c.to_complex().norm() * kernel_bound(pair).integral()
}

/// Grid 2-norm of `T` applied to `x ↦ e^{izx}`.
pub fn apply_to_exponential(k: &BezoutKernel, z: Complex64, grid: &Grid) -> f64 {
    let c = k.c.to_complex();
    let f: Vec<Complex64> = grid
        .nodes
        .iter()
        .map(|&t| (Complex64::i() * z * t).exp())
        .collect();
    let tf: Vec<Complex64> = grid
        .nodes
        .par_iter()
        .map(|&x| {
            grid.nodes
                .iter()
                .zip(&grid.weights)
                .zip(&f)
                .map(|((&t, &w), &v)| c * k.u_f64(x, t) * w * v)
                .sum()
        })
        .collect();
    grid.norm(&tf)
}

/// `max |(A·1)(xᵢ) − i·xᵢ|`.
pub fn antiderivative_error(ops: &OperatorSet) -> f64 {
    let ones = vec![Complex64::new(1.0, 0.0); ops.grid.n];
    ops.get(OperatorLabel::A)
        .apply(&ones)
        .iter()
        .zip(&ops.grid.nodes)
        .map(|(v, &x)| (v - Complex64::new(0.0, x)).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bezoutiant::{build_kernel, build_m_functions, default_alpha_beta, normalize_pair};
    use crate::exact::{rat, GaussianRational};

    fn setup(psi1: &[i64], psi2: &[i64]) -> (NormalizedPair, BezoutKernel, MFunctions) {
        let pair = normalize_pair(
            &DensityPoly::from_ints(psi1),
            &DensityPoly::from_ints(psi2),
            &rat(1, 1),
        )
        .unwrap();
        let (al, be) = default_alpha_beta();
        let mf = build_m_functions(&pair, &al, &be).unwrap();
        (pair.clone(), build_kernel(&pair), mf)
    }

    #[test]
    fn grid_weights_sum_to_a() {
        let g = Grid::midpoint(2.5, 37);
        assert!((g.weights.iter().sum::<f64>() - 2.5).abs() < 1e-12);
        assert!(g.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(g.nodes[0] > 0.0 && g.nodes[36] < 2.5);
    }

    #[test]
    fn antiderivative_law() {
        let (pair, k, mf) = setup(&[1], &[0, 2]);
        let ops = discretize_all(&pair, &k, &mf, &Grid::midpoint(1.0, 64));
        assert!(antiderivative_error(&ops) < 1e-13);
    }

    #[test]
    fn adjoint_of_t_on_one() {
        let (pair, k, mf) = setup(&[1], &[0, 2]);
        let mut errs = Vec::new();
        for n in [32, 64] {
            let ops = discretize_all(&pair, &k, &mf, &Grid::midpoint(1.0, n));
            let ones = vec![Complex64::new(1.0, 0.0); n];
            let v = ops.get(OperatorLabel::TAdjoint).apply(&ones);
            let err = v
                .iter()
                .zip(&ops.grid.nodes)
                .map(|(v, &x)| (v - Complex64::new(x * (1.0 - x), 0.0)).norm())
                .fold(0.0, f64::max);
            errs.push(err);
        }
        assert!(errs[0] < 1e-3);
        assert!(errs[0] / errs[1] > 3.0);
    }

    #[test]
    fn coincidence_pair_vanishes_exactly() {
        let (pair, k, mf) = setup(&[1], &[1]);
        let ops = discretize_all(&pair, &k, &mf, &Grid::midpoint(1.0, 32));
        assert!(ops.get(OperatorLabel::T).is_exact_zero());
        assert!(ops.get(OperatorLabel::N2N1Adjoint).is_exact_zero());
        assert!(ops.n2.iter().all(|v| v.is_zero()));
        assert_eq!(identity_residual(&ops), 0.0);
        assert_eq!(
            apply_to_exponential(&k, Complex64::new(3.0, 1.0), &ops.grid),
            0.0
        );
    }

    #[test]
    fn second_order_convergence() {
        let (pair, k, mf) = setup(&[1], &[0, 2]);
        let report = residual_study(&pair, &k, &mf, &[32, 64, 128]);
        for r in report.ratios.iter().flatten() {
            assert!((3.2..=4.8).contains(r), "{report:?}");
        }
        assert!(report.t_operator_norm <= report.t_norm_bound);
    }

    #[test]
    fn complex_pair_converges() {
        let a = rat(3, 2);
        let g = |r: i64, i: i64| GaussianRational::from_ints(r, i);
        let psi1 = DensityPoly::new(vec![g(1, 1), g(0, -2), g(1, 0)]);
        let psi2 = DensityPoly::new(vec![g(2, 0), g(1, 3)]);
        let pair = normalize_pair(&psi1, &psi2, &a).unwrap();
        let (al, be) = (g(2, 1), g(0, 1));
        let mf = build_m_functions(&pair, &al, &be).unwrap();
        let k = crate::bezoutiant::build_kernel_with(&pair, &al, &be).unwrap();
        let report = residual_study(&pair, &k, &mf, &[32, 64]);
        let r = report.ratios[0].unwrap();
        assert!((3.2..=4.8).contains(&r), "{report:?}");
    }

    #[test]
    fn exponential_probe() {
        let (_, k, _) = setup(&[1], &[0, 2]);
        let g = Grid::midpoint(1.0, 256);
        let at_zero = apply_to_exponential(&k, Complex64::new(0.0, 0.0), &g);
        let at_2pi = apply_to_exponential(&k, Complex64::new(2.0 * std::f64::consts::PI, 0.0), &g);
        assert!(at_zero > 0.0);
        assert!(at_2pi > 0.01, "{at_2pi}");
        let near = apply_to_exponential(
            &k,
            Complex64::new(2.0 * std::f64::consts::PI + 1e-6, 0.0),
            &g,
        );
        assert!((near - at_2pi).abs() < 1e-4);
    }

    #[test]
    fn csv_and_json() {
        let (pair, k, mf) = setup(&[1], &[0, 2]);
        let ops = discretize_all(&pair, &k, &mf, &Grid::midpoint(1.0, 16));
        assert_eq!(ops.get(OperatorLabel::T).to_csv().lines().count(), 257);
        let json = residual_study(&pair, &k, &mf, &[16, 32]).to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["norm"], "hilbert-schmidt");
        assert_eq!(v["ratios"].as_array().unwrap().len(), 1);
    }
}
