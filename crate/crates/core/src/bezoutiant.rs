//! Explicit operator Bezoutiant `Tf = c·∫₀ᵃ f(t)·U(x,t) dt`.
//!
//! For normalized densities (`∫₀ᵃ Ψ_k = 1`),
//!
//! ```text
//! U(x,t) = ∫_t^{hi} [Ψ₂(a−s)·conj(Ψ₁(a−s−x+t)) − Ψ₂(s+x−t)·conj(Ψ₁(s))] ds
//! hi = a        for x < t
//! hi = a + t − x for x > t
//! c = −1 / (conj(α) + β)
//! ```
//!
//! Every piece is stored as an exact polynomial, so the structural identities
//! `T*1 = conj(M₂(a−x))` and `Φ₁ − Φ_{2,1} = (α + conj β)·conj(M₂(a−x))` are
//! checked as polynomial equalities.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::BezoutError;
use crate::exact::{BivariatePoly, DensityPoly, GaussianRational};
use crate::quadrature::{adaptive, GaussLegendre};

/// Densities rescaled to unit mass, with the original normalizers kept.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizedPair {
    pub psi1: DensityPoly,
    pub psi2: DensityPoly,
    #[serde(serialize_with = "crate::exact::serialize_rational")]
    pub a: BigRational,
    pub r1: GaussianRational,
    pub r2: GaussianRational,
}

/// `Φ_k`, `M₁`, `M₂` and the free parameters `(α, β)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MFunctions {
    pub phi1: DensityPoly,
    pub phi2: DensityPoly,
    pub m1: DensityPoly,
    pub m2: DensityPoly,
    pub alpha: GaussianRational,
    pub beta: GaussianRational,
    #[serde(serialize_with = "crate::exact::serialize_rational")]
    pub a: BigRational,
}

/// The kernel `c·U(x,t)`, one exact polynomial per side of the diagonal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BezoutKernel {
    pub c: GaussianRational,
    /// `U` on `x < t`.
    pub u_lower: BivariatePoly,
    /// `U` on `x > t`.
    pub u_upper: BivariatePoly,
    #[serde(serialize_with = "crate::exact::serialize_rational")]
    pub a: BigRational,
}

pub fn default_alpha_beta() -> (GaussianRational, GaussianRational) {
    (GaussianRational::one(), GaussianRational::zero())
}

pub fn normalize_pair(
    psi1: &DensityPoly,
    psi2: &DensityPoly,
    a: &BigRational,
) -> Result<NormalizedPair, BezoutError> {
    if !a.is_positive() {
        return Err(BezoutError::NonPositiveEndpoint);
    }
    let zero = GaussianRational::zero();
    let ga = GaussianRational::real(a.clone());
    let mut out = Vec::with_capacity(2);
    for (index, psi) in [psi1, psi2].into_iter().enumerate() {
        if psi.is_zero() {
            return Err(BezoutError::ZeroDensity { index: index + 1 });
        }
        let mass = psi.definite_integral(&zero, &ga);
        let inv = mass
            .inv()
            .ok_or(BezoutError::ZeroMass { index: index + 1 })?;
        out.push((psi.scale(&inv), mass));
    }
    let (psi2, r2) = out.pop().expect("two densities");
    let (psi1, r1) = out.pop().expect("two densities");
    Ok(NormalizedPair {
        psi1,
        psi2,
        a: a.clone(),
        r1,
        r2,
    })
}

impl NormalizedPair {
    /// Exact test of `Ψ₁(x) = conj(Ψ₂(a − x))`.
    pub fn is_coincident(&self) -> bool {
        self.psi1 == self.psi2.reflect_conj(&self.a)
    }

    /// Exact test of `Ψ₁(x) = conj(Ψ₁(a − x))`.
    pub fn first_is_self_reflective(&self) -> bool {
        self.psi1 == self.psi1.reflect_conj(&self.a)
    }

    pub fn swapped(&self) -> Self {
        Self {
            psi1: self.psi2.clone(),
            psi2: self.psi1.clone(),
            a: self.a.clone(),
            r1: self.r2.clone(),
            r2: self.r1.clone(),
        }
    }
}

/// `Φ_k(t) = ∫_t^a Ψ_k(s) ds` for a normalized density.
fn tail_integral(psi: &DensityPoly, a: &BigRational) -> DensityPoly {
    let anti = psi.antiderivative();
    let at_a = anti.eval(&GaussianRational::real(a.clone()));
    &DensityPoly::constant(at_a) - &anti
}

pub fn build_m_functions(
    pair: &NormalizedPair,
    alpha: &GaussianRational,
    beta: &GaussianRational,
) -> Result<MFunctions, BezoutError> {
    let denom = &alpha.conj() + beta;
    let inv = denom.inv().ok_or(BezoutError::DegenerateChoice)?;
    let a = &pair.a;
    let phi1 = tail_integral(&pair.psi1, a);
    let phi2 = tail_integral(&pair.psi2, a);
    let one = DensityPoly::constant(GaussianRational::one());
    let m2 = (&(&phi2 + &phi1.reflect_conj(a)) - &one).scale(&inv);
    let m1 = &phi2 - &m2.scale(beta);
    Ok(MFunctions {
        phi1,
        phi2,
        m1,
        m2,
        alpha: alpha.clone(),
        beta: beta.clone(),
        a: a.clone(),
    })
}

/// Polynomial in `s` whose coefficients are bivariate in `(x, t)`.
#[derive(Clone, Debug, Default)]
struct SPoly(Vec<BivariatePoly>);

impl SPoly {
    /// `cs·s + cx·x + ct·t + c0`.
    fn affine(cs: i64, cx: i64, ct: i64, c0: &GaussianRational) -> Self {
        let mut free = BivariatePoly::constant(c0.clone());
        free = &free + &BivariatePoly::monomial(GaussianRational::from(cx), 1, 0);
        free = &free + &BivariatePoly::monomial(GaussianRational::from(ct), 0, 1);
        SPoly(vec![
            free,
            BivariatePoly::constant(GaussianRational::from(cs)),
        ])
    }

    fn constant(c: &GaussianRational) -> Self {
        SPoly(vec![BivariatePoly::constant(c.clone())])
    }

    fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let zero = BivariatePoly::default();
        SPoly(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&zero) + other.0.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    fn neg(&self) -> Self {
        SPoly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return SPoly::default();
        }
        let mut out = vec![BivariatePoly::default(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        SPoly(out)
    }

    /// `p(L)` by Horner's rule.
    fn compose(p: &DensityPoly, inner: &Self) -> Self {
        p.coeffs().iter().rev().fold(SPoly::default(), |acc, c| {
            acc.mul(inner).add(&SPoly::constant(c))
        })
    }

    /// `∫_{lo}^{hi} (·) ds` with bivariate limits.
    fn integrate(&self, lo: &BivariatePoly, hi: &BivariatePoly) -> BivariatePoly {
        let mut out = BivariatePoly::default();
        for (k, c) in self.0.iter().enumerate() {
            let w = GaussianRational::frac(1, k as i64 + 1);
            let diff = &hi.pow(k + 1) - &lo.pow(k + 1);
            out = &out + &(&diff * c).scale(&w);
        }
        out
    }
}

/// Integrand of `U` as a polynomial in `s`.
fn u_integrand(pair: &NormalizedPair) -> SPoly {
    let ga = GaussianRational::real(pair.a.clone());
    let zero = GaussianRational::zero();
    let psi1_bar = pair.psi1.conj();
    // Ψ₂(a − s)·conj(Ψ₁(a − s − x + t))
    let first = SPoly::compose(&pair.psi2, &SPoly::affine(-1, 0, 0, &ga))
        .mul(&SPoly::compose(&psi1_bar, &SPoly::affine(-1, -1, 1, &ga)));
    // Ψ₂(s + x − t)·conj(Ψ₁(s))
    let second = SPoly::compose(&pair.psi2, &SPoly::affine(1, 1, -1, &zero))
        .mul(&SPoly::compose(&psi1_bar, &SPoly::affine(1, 0, 0, &zero)));
    first.add(&second.neg())
}

pub fn build_kernel(pair: &NormalizedPair) -> BezoutKernel {
    let (alpha, beta) = default_alpha_beta();
    build_kernel_with(pair, &alpha, &beta).expect("default (alpha, beta) is admissible")
}

pub fn build_kernel_with(
    pair: &NormalizedPair,
    alpha: &GaussianRational,
    beta: &GaussianRational,
) -> Result<BezoutKernel, BezoutError> {
    let denom = &alpha.conj() + beta;
    let c = -denom.inv().ok_or(BezoutError::DegenerateChoice)?;
    let integrand = u_integrand(pair);
    let ga = GaussianRational::real(pair.a.clone());
    let lo = BivariatePoly::monomial(GaussianRational::one(), 0, 1);
    let hi_lower = BivariatePoly::constant(ga.clone());
    // a + t − x
    let hi_upper = &(&BivariatePoly::constant(ga) + &lo)
        - &BivariatePoly::monomial(GaussianRational::one(), 1, 0);
    Ok(BezoutKernel {
        c,
        u_lower: integrand.integrate(&lo, &hi_lower),
        u_upper: integrand.integrate(&lo, &hi_upper),
        a: pair.a.clone(),
    })
}

impl BezoutKernel {
    pub fn is_zero(&self) -> bool {
        self.u_lower.is_zero() && self.u_upper.is_zero()
    }

    /// Continuity across `x = t` as a polynomial identity.
    pub fn diagonal_continuous(&self) -> bool {
        self.u_lower.diagonal() == self.u_upper.diagonal()
    }

    /// Exact `U(x, t)`; on the diagonal both pieces agree.
    pub fn u(&self, x: &GaussianRational, t: &GaussianRational) -> GaussianRational {
        if x.re < t.re {
            self.u_lower.eval(x, t)
        } else {
            self.u_upper.eval(x, t)
        }
    }

    pub fn u_f64(&self, x: f64, t: f64) -> Complex64 {
        if x < t {
            self.u_lower.eval_f64(x, t)
        } else {
            self.u_upper.eval_f64(x, t)
        }
    }

    /// `T1 = c·∫₀ᵃ U(x,t) dt` as an exact polynomial in `x`.
    pub fn apply_to_one(&self) -> DensityPoly {
        let x = DensityPoly::from_ints(&[0, 1]);
        let zero = DensityPoly::default();
        let a = DensityPoly::constant(GaussianRational::real(self.a.clone()));
        let upper = self.u_upper.integrate_t_between(&zero, &x);
        let lower = self.u_lower.integrate_t_between(&x, &a);
        (&upper + &lower).scale(&self.c)
    }

    /// `T*1 = conj(c)·∫₀ᵃ conj(U(t,x)) dt` as an exact polynomial in `x`.
    pub fn adjoint_apply_to_one(&self) -> DensityPoly {
        let x = DensityPoly::from_ints(&[0, 1]);
        let zero = DensityPoly::default();
        let a = DensityPoly::constant(GaussianRational::real(self.a.clone()));
        // conj(U(t,x)) with t < x uses the lower piece, t > x the upper piece
        let below = self.u_lower.swap().conj().integrate_t_between(&zero, &x);
        let above = self.u_upper.swap().conj().integrate_t_between(&x, &a);
        (&below + &above).scale(&self.c.conj())
    }

    /// `U` sampled on the uniform `n × n` grid over `[0, a]²` as CSV rows
    /// `x,t,re,im`.
    pub fn grid_csv(&self, n: usize) -> String {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let mut out = String::from("x,t,re,im\n");
        let step = if n > 1 { a / (n - 1) as f64 } else { 0.0 };
        for i in 0..n {
            for j in 0..n {
                let (x, t) = (i as f64 * step, j as f64 * step);
                let u = self.u_f64(x, t);
                out.push_str(&format!("{x:.17e},{t:.17e},{:.17e},{:.17e}\n", u.re, u.im));
            }
        }
        out
    }
}

/// Exact check of `T*1 = conj(M₂(a − x))`.
pub fn check_adjoint_identity(kernel: &BezoutKernel, mf: &MFunctions) -> bool {
    kernel.adjoint_apply_to_one() == mf.m2.reflect_conj(&mf.a)
}

/// Exact check of `Φ₁(t) − Φ_{2,1}(t) = (α + conj β)·conj(M₂(a − t))` where
/// `Φ_{2,1}(t) = 1 − conj(Φ₂(a − t))`.
pub fn check_phi_difference(mf: &MFunctions) -> bool {
    let one = DensityPoly::constant(GaussianRational::one());
    let phi21 = &one - &mf.phi2.reflect_conj(&mf.a);
    let lhs = &mf.phi1 - &phi21;
    let rhs = mf
        .m2
        .reflect_conj(&mf.a)
        .scale(&(&mf.alpha + &mf.beta.conj()));
    lhs == rhs
}

/// Majorant `h(u) = ∫₀ᵃ [|Ψ₂(a−s)·Ψ̄₁(a−s−u)| + |Ψ₂(s+u)·Ψ̄₁(s)|] ds` of the
/// kernel, with `Ψ_k` extended by zero outside `[0, a]`, so that
/// `|U(x,t)| ≤ h(x − t)`.
#[derive(Clone, Debug)]
pub struct KernelEnvelope {
    a: f64,
    psi1_bar: Vec<Complex64>,
    psi2: Vec<Complex64>,
    rule: GaussLegendre,
}

pub fn kernel_bound(pair: &NormalizedPair) -> KernelEnvelope {
    KernelEnvelope {
        a: pair.a.to_f64().unwrap_or(f64::NAN),
        psi1_bar: pair.psi1.conj().to_complex_coeffs(),
        psi2: pair.psi2.to_complex_coeffs(),
        rule: GaussLegendre::new(16),
    }
}

fn horner(c: &[Complex64], x: f64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::zero(), |acc, &p| acc * x + p)
}

impl KernelEnvelope {
    /// `h(u)`; zero for `|u| > a`.
    pub fn eval(&self, u: f64) -> f64 {
        let a = self.a;
        if u.abs() >= a {
            return 0.0;
        }
        let lo = (-u).max(0.0);
        let hi = a.min(a - u);
        let f = |s: f64| {
            let first = (horner(&self.psi2, a - s) * horner(&self.psi1_bar, a - s - u)).norm();
            let second = (horner(&self.psi2, s + u) * horner(&self.psi1_bar, s)).norm();
            Complex64::new(first + second, 0.0)
        };
        adaptive(&self.rule, &f, lo, hi, 1e-14, 1e-13, 30).re
    }

    /// `∫_{−a}^{a} h(u) du`.
    pub fn integral(&self) -> f64 {
        let f = |u: f64| Complex64::new(self.eval(u), 0.0);
        let rule = GaussLegendre::new(8);
        // h is continuous but has kinks; panels keep the estimate honest
        rule.composite(f, -self.a, 0.0, 32).re + rule.composite(f, 0.0, self.a, 32).re
    }

    /// `max |U(x,t)| − h(x − t)` over a uniform grid of `n × n` points.
    pub fn worst_excess(&self, kernel: &BezoutKernel, n: usize) -> f64 {
        let step = self.a / (n - 1) as f64;
        let mut worst = f64::NEG_INFINITY;
        for i in 0..n {
            for j in 0..n {
                let (x, t) = (i as f64 * step, j as f64 * step);
                worst = worst.max(kernel.u_f64(x, t).norm() - self.eval(x - t));
            }
        }
        worst
    }
}
