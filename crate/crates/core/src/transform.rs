//! Closed forms of `F(z) = ∫₀ᵃ e^{izt}·g(t) dt` for polynomial `g`.
//!
//! Repeated integration by parts gives
//!
//! ```text
//! F(z) = e^{iaz}·Σ_{j=1}^{Q+1} p_j z^{-j} + Σ_{j=1}^{Q+1} q_j z^{-j},
//! p_j = (−1)^{j−1} g^{(j−1)}(a) / i^j,   q_j = −(−1)^{j−1} g^{(j−1)}(0) / i^j,
//! ```
//!
//! with a removable singularity at `z = 0`, covered by the Taylor series
//! `Σ (iz)^n μ_n / n!` built from the exact moments `μ_n = ∫₀ᵃ tⁿ g(t) dt`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::BezoutError;
use crate::exact::{DensityPoly, GaussianRational};

/// Below this modulus the moment series is used instead of the Laurent form.
pub const SWITCH_RADIUS: f64 = 0.5;

/// Extra moments beyond the degree kept for the series at the origin.
pub const EXTRA_MOMENTS: usize = 32;

/// Largest `a·|Im z|` for which `e^{iaz}` stays inside double range.
pub const MAX_EXPONENT: f64 = 700.0;

/// Exact closed form of a finite Fourier-type transform of a polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedTransform {
    pub a: BigRational,
    /// The transformed polynomial `g` (already conjugated or reflected).
    pub integrand: DensityPoly,
    /// `p_1, …, p_{Q+1}`: coefficients of `e^{iaz}·z^{-j}`.
    pub osc: Vec<GaussianRational>,
    /// `q_1, …, q_{Q+1}`: coefficients of `z^{-j}`.
    pub plain: Vec<GaussianRational>,
    /// `μ_0, μ_1, …`.
    pub moments: Vec<GaussianRational>,
    numeric: NumericForm,
}

#[derive(Clone, Debug, PartialEq)]
struct NumericForm {
    a: f64,
    osc: Vec<Complex64>,
    plain: Vec<Complex64>,
    /// `i^n μ_n / n!`, so the series is a plain power series in `z`.
    taylor: Vec<Complex64>,
}

/// `z^{Q+1}·F(z) = cos_part(z)·cos(az) + sin_part(z)·sin(az) + free_part(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigForm {
    pub a: BigRational,
    pub cos_part: DensityPoly,
    pub sin_part: DensityPoly,
    pub free_part: DensityPoly,
    /// `Q + 1`, the power of `z` cleared from the denominators.
    pub power: usize,
}

fn check_endpoint(a: &BigRational) -> Result<(), BezoutError> {
    if a.is_positive() {
        Ok(())
    } else {
        Err(BezoutError::NonPositiveEndpoint)
    }
}

/// `i^{-k}` for `k ≥ 0`.
fn inv_i_pow(k: usize) -> GaussianRational {
    match k % 4 {
        0 => GaussianRational::one(),
        1 => GaussianRational::from_ints(0, -1),
        2 => GaussianRational::from(-1),
        _ => GaussianRational::i(),
    }
}

impl ClosedTransform {
    /// Transform of an arbitrary polynomial integrand `g` on `[0, a]`.
    pub fn of_integrand(g: &DensityPoly, a: &BigRational) -> Result<Self, BezoutError> {
        check_endpoint(a)?;
        let ga = GaussianRational::real(a.clone());
        let zero = GaussianRational::zero();
        let terms = g.degree().map_or(0, |q| q + 1);
        let mut osc = Vec::with_capacity(terms);
        let mut plain = Vec::with_capacity(terms);
        for k in 0..terms {
            let dk = g.derivative(k);
            let sign = if k % 2 == 0 {
                GaussianRational::one()
            } else {
                GaussianRational::from(-1)
            };
            let w = &sign * &inv_i_pow(k + 1);
            osc.push(&dk.eval(&ga) * &w);
            plain.push(-(&dk.eval(&zero) * &w));
        }

        let count = terms + EXTRA_MOMENTS + (4.0 * a.to_f64().unwrap_or(0.0)).ceil() as usize;
        let mut moments = Vec::with_capacity(count);
        let mut weighted = g.clone();
        let t = DensityPoly::from_ints(&[0, 1]);
        for _ in 0..count {
            moments.push(weighted.definite_integral(&zero, &ga));
            weighted = &weighted * &t;
        }

        let numeric = NumericForm::build(a, &osc, &plain, &moments);
        Ok(Self {
            a: a.clone(),
            integrand: g.clone(),
            osc,
            plain,
            moments,
            numeric,
        })
    }

    pub fn a_f64(&self) -> f64 {
        self.numeric.a
    }

    /// `F(0) = μ_0`.
    pub fn value_at_zero(&self) -> GaussianRational {
        self.moments.first().cloned().unwrap_or_default()
    }

    /// Whether `e^{iaz}` is representable for `|Im z| ≤ im_bound`.
    pub fn fits_double(&self, im_bound: f64) -> bool {
        self.numeric.a * im_bound.abs() <= MAX_EXPONENT
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if z.norm() < SWITCH_RADIUS {
            self.eval_series(z)
        } else {
            self.eval_laurent(z)
        }
    }

    /// Laurent/exponential branch; singular at `z = 0`.
    pub fn eval_laurent(&self, z: Complex64) -> Complex64 {
        let w = z.inv();
        let horner = |c: &[Complex64]| {
            c.iter()
                .rev()
                .fold(Complex64::zero(), |acc, &p| (acc + p) * w)
        };
        let e = (Complex64::i() * z * self.numeric.a).exp();
        e * horner(&self.numeric.osc) + horner(&self.numeric.plain)
    }

    /// Truncated moment series branch; accurate near the origin.
    pub fn eval_series(&self, z: Complex64) -> Complex64 {
        self.numeric
            .taylor
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, &c| acc * z + c)
    }

    /// Coefficient-wise sum of two transforms on the same interval.
    pub fn add(&self, other: &Self) -> Result<Self, BezoutError> {
        if self.a != other.a {
            return Err(BezoutError::InternalConsistency(
                "transforms over different intervals".into(),
            ));
        }
        Self::of_integrand(&(&self.integrand + &other.integrand), &self.a)
    }
}

impl NumericForm {
    fn build(
        a: &BigRational,
        osc: &[GaussianRational],
        plain: &[GaussianRational],
        moments: &[GaussianRational],
    ) -> Self {
        let mut taylor = Vec::with_capacity(moments.len());
        let mut scale = Complex64::one();
        for (n, mu) in moments.iter().enumerate() {
            if n > 0 {
                scale = scale * Complex64::i() / n as f64;
            }
            taylor.push(mu.to_complex() * scale);
        }
        Self {
            a: a.to_f64().unwrap_or(f64::NAN),
            osc: osc.iter().map(GaussianRational::to_complex).collect(),
            plain: plain.iter().map(GaussianRational::to_complex).collect(),
            taylor,
        }
    }
}

/// `F(z) = ∫₀ᵃ e^{izt}·conj(Ψ(t)) dt`.
pub fn closed_form(psi: &DensityPoly, a: &BigRational) -> Result<ClosedTransform, BezoutError> {
    ClosedTransform::of_integrand(&psi.conj(), a)
}

pub fn eval_transform(f: &ClosedTransform, z: Complex64) -> Complex64 {
    f.eval(z)
}

/// `F_{2,1}(z) = ∫₀ᵃ e^{izt}·Ψ₂(a − t) dt`; no conjugation under the integral.
pub fn reflected_transform(
    psi2: &DensityPoly,
    a: &BigRational,
) -> Result<ClosedTransform, BezoutError> {
    ClosedTransform::of_integrand(&psi2.reflect(a), a)
}

/// `F′(z) = ∫₀ᵃ e^{izt}·i·t·conj(Ψ(t)) dt`.
pub fn derivative_transform(
    psi: &DensityPoly,
    a: &BigRational,
) -> Result<ClosedTransform, BezoutError> {
    differentiate(&closed_form(psi, a)?)
}

/// Closed form of the derivative of any transform.
pub fn differentiate(f: &ClosedTransform) -> Result<ClosedTransform, BezoutError> {
    let it = DensityPoly::new(vec![GaussianRational::zero(), GaussianRational::i()]);
    ClosedTransform::of_integrand(&(&f.integrand * &it), &f.a)
}

/// Splits `e^{iaz} = cos(az) + i·sin(az)` over the Laurent parts and clears
/// the `z^{Q+1}` denominator.
pub fn trig_form(f: &ClosedTransform) -> TrigForm {
    let power = f.osc.len();
    // Σ_j c_j z^{power − j}
    let clear = |c: &[GaussianRational]| {
        let mut coeffs = vec![GaussianRational::zero(); power];
        for (j, cj) in c.iter().enumerate() {
            coeffs[power - 1 - j] = cj.clone();
        }
        DensityPoly::new(coeffs)
    };
    let cos_part = clear(&f.osc);
    let sin_part = cos_part.scale(&GaussianRational::i());
    TrigForm {
        a: f.a.clone(),
        cos_part,
        sin_part,
        free_part: clear(&f.plain),
        power,
    }
}

impl TrigForm {
    /// `P(z)cos(az) + Q(z)sin(az) + R(z)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let az = z * self.a.to_f64().unwrap_or(f64::NAN);
        self.cos_part.eval_f64(z) * az.cos()
            + self.sin_part.eval_f64(z) * az.sin()
            + self.free_part.eval_f64(z)
    }
}
