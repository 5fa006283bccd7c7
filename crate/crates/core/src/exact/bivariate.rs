//! Dense bivariate polynomials in `(x, t)`.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use super::poly::DensityPoly;

/// `Σ coeffs[i][j]·x^i·t^j`. Rows index the power of `x`.
///
/// Stored normalized: no all-zero trailing rows and no trailing zeros within
/// a row, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    coeffs: Vec<Vec<GaussianRational>>,
}

impl BivariatePoly {
    pub fn new(mut coeffs: Vec<Vec<GaussianRational>>) -> Self {
        for row in coeffs.iter_mut() {
            while row.last().is_some_and(Zero::is_zero) {
                row.pop();
            }
        }
        while coeffs.last().is_some_and(Vec::is_empty) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![vec![c]])
    }

    /// `c·x^i·t^j`.
    pub fn monomial(c: GaussianRational, i: usize, j: usize) -> Self {
        let mut coeffs = vec![Vec::new(); i + 1];
        coeffs[i] = vec![GaussianRational::zero(); j + 1];
        coeffs[i][j] = c;
        Self::new(coeffs)
    }

    /// Lifts `p(x)` (independent of `t`).
    pub fn from_x(p: &DensityPoly) -> Self {
        Self::new(p.coeffs().iter().map(|c| vec![c.clone()]).collect())
    }

    /// Lifts `p(t)` (independent of `x`).
    pub fn from_t(p: &DensityPoly) -> Self {
        Self::new(vec![p.coeffs().to_vec()])
    }

    pub fn coeff(&self, i: usize, j: usize) -> GaussianRational {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_default()
    }

    pub fn rows(&self) -> &[Vec<GaussianRational>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn degree_t(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .map(Vec::len)
            .max()
            .and_then(|n| n.checked_sub(1))
    }

    /// Coefficient of `x^i` as a polynomial in `t`.
    pub fn x_slice(&self, i: usize) -> DensityPoly {
        DensityPoly::new(self.coeffs.get(i).cloned().unwrap_or_default())
    }

    pub fn eval(&self, x: &GaussianRational, t: &GaussianRational) -> GaussianRational {
        self.coeffs
            .iter()
            .rev()
            .fold(GaussianRational::zero(), |acc, row| {
                let inner = row
                    .iter()
                    .rev()
                    .fold(GaussianRational::zero(), |a, c| &(&a * t) + c);
                &(&acc * x) + &inner
            })
    }

    pub fn eval_f64(&self, x: f64, t: f64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, row| {
                let inner = row
                    .iter()
                    .rev()
                    .fold(Complex64::zero(), |a, c| a * t + c.to_complex());
                acc * x + inner
            })
    }

    /// Float coefficient table for repeated numeric evaluation.
    pub fn to_f64(&self) -> FloatBivariate {
        FloatBivariate {
            rows: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(GaussianRational::to_complex).collect())
                .collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|row| row.iter().map(GaussianRational::conj).collect())
                .collect(),
        )
    }

    /// `(x, t) ↦ p(t, x)`.
    pub fn swap(&self) -> Self {
        let nt = self.degree_t().map_or(0, |d| d + 1);
        let mut out = vec![vec![GaussianRational::zero(); self.coeffs.len()]; nt];
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out[j][i] = c.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|row| row.iter().map(|c| c * k).collect())
                .collect(),
        )
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::constant(GaussianRational::one());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn partial_x(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, row)| {
                    let k = GaussianRational::from(i as i64);
                    row.iter().map(|c| c * &k).collect()
                })
                .collect(),
        )
    }

    pub fn partial_t(&self) -> Self {
        self.swap().partial_x().swap()
    }

    /// The restriction `x ↦ p(x, x)`.
    pub fn diagonal(&self) -> DensityPoly {
        let deg = self.degree_x().unwrap_or(0) + self.degree_t().unwrap_or(0);
        let mut out = vec![GaussianRational::zero(); deg + 1];
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                out[i + j] += c;
            }
        }
        DensityPoly::new(out)
    }

    /// Substitutes a fixed `x`, leaving a polynomial in `t`.
    pub fn at_x(&self, x: &GaussianRational) -> DensityPoly {
        let nt = self.degree_t().map_or(0, |d| d + 1);
        let mut out = vec![GaussianRational::zero(); nt];
        let mut xp = GaussianRational::one();
        for row in &self.coeffs {
            for (j, c) in row.iter().enumerate() {
                out[j] += &(c * &xp);
            }
            xp = &xp * x;
        }
        DensityPoly::new(out)
    }

    /// Substitutes a fixed `t`, leaving a polynomial in `x`.
    pub fn at_t(&self, t: &GaussianRational) -> DensityPoly {
        self.swap().at_x(t)
    }

    /// `∫_{lo(t)}^{hi(t)} p(x, t) dx` as a polynomial in `t`.
    pub fn integrate_x_between(&self, lo: &DensityPoly, hi: &DensityPoly) -> DensityPoly {
        let mut out = DensityPoly::default();
        let (mut lo_pow, mut hi_pow) = (lo.clone(), hi.clone());
        for (i, _) in self.coeffs.iter().enumerate() {
            // ∫ x^i dx = x^{i+1}/(i+1)
            let w = GaussianRational::real(BigRational::new(BigInt::one(), BigInt::from(i + 1)));
            let diff = (&hi_pow - &lo_pow).scale(&w);
            out = &out + &(&diff * &self.x_slice(i));
            lo_pow = &lo_pow * lo;
            hi_pow = &hi_pow * hi;
        }
        out
    }

    /// `∫_{lo(x)}^{hi(x)} p(x, t) dt` as a polynomial in `x`.
    pub fn integrate_t_between(&self, lo: &DensityPoly, hi: &DensityPoly) -> DensityPoly {
        self.swap().integrate_x_between(lo, hi)
    }
}

impl std::fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({c})x^{i}t^{j}")?;
            }
        }
        Ok(())
    }
}

/// Float copy of a [`BivariatePoly`] for hot numeric loops.
#[derive(Clone, Debug)]
pub struct FloatBivariate {
    rows: Vec<Vec<Complex64>>,
}

impl FloatBivariate {
    pub fn eval(&self, x: f64, t: f64) -> Complex64 {
        self.rows.iter().rev().fold(Complex64::zero(), |acc, row| {
            let inner = row.iter().rev().fold(Complex64::zero(), |a, c| a * t + c);
            acc * x + inner
        })
    }
}

fn zip_rows(
    a: &BivariatePoly,
    b: &BivariatePoly,
    f: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational,
) -> BivariatePoly {
    let nx = a.coeffs.len().max(b.coeffs.len());
    let nt = a.degree_t().max(b.degree_t()).map_or(0, |d| d + 1);
    BivariatePoly::new(
        (0..nx)
            .map(|i| (0..nt).map(|j| f(&a.coeff(i, j), &b.coeff(i, j))).collect())
            .collect(),
    )
}

impl<'b> Add<&'b BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: &'b BivariatePoly) -> BivariatePoly {
        zip_rows(self, rhs, |a, b| a + b)
    }
}

impl<'b> Sub<&'b BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: &'b BivariatePoly) -> BivariatePoly {
        zip_rows(self, rhs, |a, b| a - b)
    }
}

impl<'b> Mul<&'b BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: &'b BivariatePoly) -> BivariatePoly {
        if self.is_zero() || rhs.is_zero() {
            return BivariatePoly::default();
        }
        let nx = self.coeffs.len() + rhs.coeffs.len() - 1;
        let nt = self.degree_t().unwrap_or(0) + rhs.degree_t().unwrap_or(0) + 1;
        let mut out = vec![vec![GaussianRational::zero(); nt]; nx];
        for (i1, r1) in self.coeffs.iter().enumerate() {
            for (j1, c1) in r1.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (i2, r2) in rhs.coeffs.iter().enumerate() {
                    for (j2, c2) in r2.iter().enumerate() {
                        out[i1 + i2][j1 + j2] += &(c1 * c2);
                    }
                }
            }
        }
        BivariatePoly::new(out)
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        self.scale(&GaussianRational::from(-1))
    }
}
