//! Univariate polynomials with Gaussian-rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use super::rational::binomial;

/// A polynomial `Σ coeffs[p]·t^p` stored in ascending powers.
///
/// Trailing zero coefficients are always stripped, so the last stored
/// coefficient is the (nonzero) leading one and the zero polynomial has no
/// coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DensityPoly {
    coeffs: Vec<GaussianRational>,
}

impl DensityPoly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// `c·t^power`.
    pub fn monomial(c: GaussianRational, power: usize) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    /// Polynomial with small integer real coefficients, ascending powers.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussianRational::from(c)).collect())
    }

    /// `t^m·(a − t)^n` expanded.
    pub fn bump(m: usize, n: usize, a: &BigRational) -> Self {
        let base = Self::new(vec![
            GaussianRational::real(a.clone()),
            GaussianRational::from(-1),
        ]);
        let mut p = Self::monomial(GaussianRational::one(), m);
        for _ in 0..n {
            p = &p * &base;
        }
        p
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> GaussianRational {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        self.coeffs
            .iter()
            .rev()
            .fold(GaussianRational::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_f64(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * x + c.to_complex())
    }

    /// Coefficients as floats, ascending powers.
    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(GaussianRational::to_complex)
            .collect()
    }

    pub fn derivative(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(order)
            .map(|(p, c)| {
                // falling factorial p·(p−1)···(p−order+1)
                let ff: BigInt = ((p - order + 1)..=p).map(BigInt::from).product();
                c * &GaussianRational::from(ff)
            })
            .collect();
        Self::new(coeffs)
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(GaussianRational::zero());
        for (p, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(&BigRational::new(BigInt::one(), BigInt::from(p + 1))));
        }
        Self::new(coeffs)
    }

    pub fn definite_integral(
        &self,
        lo: &GaussianRational,
        hi: &GaussianRational,
    ) -> GaussianRational {
        let anti = self.antiderivative();
        &anti.eval(hi) - &anti.eval(lo)
    }

    /// Coefficient-wise conjugate: the polynomial `t ↦ conj(p(t))` for real `t`.
    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(GaussianRational::conj).collect())
    }

    /// `t ↦ p(shift + scale·t)`, expanded exactly.
    pub fn compose_affine(&self, shift: &GaussianRational, scale: &GaussianRational) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![GaussianRational::zero(); n];
        let shift_pows: Vec<GaussianRational> = (0..n).map(|k| shift.pow(k as u32)).collect();
        let scale_pows: Vec<GaussianRational> = (0..n).map(|k| scale.pow(k as u32)).collect();
        for (p, c) in self.coeffs.iter().enumerate() {
            // (shift + scale·t)^p = Σ_j C(p,j) shift^{p−j} scale^j t^j
            for (j, slot) in out.iter_mut().enumerate().take(p + 1) {
                let b = GaussianRational::from(binomial(p, j));
                let term = &(&(c * &b) * &shift_pows[p - j]) * &scale_pows[j];
                *slot += &term;
            }
        }
        Self::new(out)
    }

    /// `t ↦ p(a − t)` without conjugation.
    pub fn reflect(&self, a: &BigRational) -> Self {
        self.compose_affine(
            &GaussianRational::real(a.clone()),
            &GaussianRational::from(-1),
        )
    }

    /// `t ↦ conj(p(a − t))`, the reflection used by the coincidence test.
    pub fn reflect_conj(&self, a: &BigRational) -> Self {
        self.reflect(a).conj()
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }
}

/// Exact `∫_lo^hi p(t) dt`.
pub fn poly_definite_integral(
    p: &DensityPoly,
    lo: &GaussianRational,
    hi: &GaussianRational,
) -> GaussianRational {
    p.definite_integral(lo, hi)
}

impl fmt::Debug for DensityPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DensityPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match p {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{p}")?,
            }
        }
        Ok(())
    }
}

impl<'b> Add<&'b DensityPoly> for &DensityPoly {
    type Output = DensityPoly;
    fn add(self, rhs: &'b DensityPoly) -> DensityPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensityPoly::new((0..n).map(|p| &self.coeff(p) + &rhs.coeff(p)).collect())
    }
}

impl<'b> Sub<&'b DensityPoly> for &DensityPoly {
    type Output = DensityPoly;
    fn sub(self, rhs: &'b DensityPoly) -> DensityPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensityPoly::new((0..n).map(|p| &self.coeff(p) - &rhs.coeff(p)).collect())
    }
}

impl<'b> Mul<&'b DensityPoly> for &DensityPoly {
    type Output = DensityPoly;
    fn mul(self, rhs: &'b DensityPoly) -> DensityPoly {
        if self.is_zero() || rhs.is_zero() {
            return DensityPoly::default();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        DensityPoly::new(out)
    }
}

impl Neg for &DensityPoly {
    type Output = DensityPoly;
    fn neg(self) -> DensityPoly {
        DensityPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}
