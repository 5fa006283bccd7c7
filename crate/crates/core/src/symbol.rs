//! The symbol `V(u)`, the differential operator `L(D)`, the closed-form order
//! for monomial densities, and the common-zero verdict built on them.
//!
//! With `Q = deg Ψ₁ ≥ deg Ψ₂`:
//!
//! ```text
//! V(u) = Σ_{p+k=Q}   [(−1)^{k+1} Ψ₂^{(p)}(u)·conj Ψ₁^{(k)}(0) + (−1)^p Ψ₂^{(k)}(a)·conj Ψ₁^{(p)}(a−u)]
//! L(D) = Σ_{p+k+s=Q−1} [(−1)^{k+1} Ψ₂^{(p)}(0)·conj Ψ₁^{(k)}(0) + (−1)^p Ψ₂^{(k)}(a)·conj Ψ₁^{(p)}(a)] D^s
//! ```

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bezoutiant::{normalize_pair, NormalizedPair};
use crate::error::BezoutError;
use crate::exact::rational::factorial;
use crate::exact::{DensityPoly, GaussianRational};

/// `Σ_s coeffs[s]·D^s`, trailing zeros stripped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffOperator {
    pub coeffs: Vec<GaussianRational>,
}

impl DiffOperator {
    fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }
}

fn sign(k: usize) -> GaussianRational {
    if k.is_multiple_of(2) {
        GaussianRational::one()
    } else {
        GaussianRational::from(-1)
    }
}

fn ordered_degree(pair: &NormalizedPair) -> Result<usize, BezoutError> {
    let q1 = pair
        .psi1
        .degree()
        .ok_or(BezoutError::ZeroDensity { index: 1 })?;
    let q2 = pair
        .psi2
        .degree()
        .ok_or(BezoutError::ZeroDensity { index: 2 })?;
    if q1 < q2 {
        return Err(BezoutError::OrderViolation { q1, q2 });
    }
    Ok(q1)
}

pub fn v_symbol(pair: &NormalizedPair) -> Result<DensityPoly, BezoutError> {
    let q = ordered_degree(pair)?;
    let zero = GaussianRational::zero();
    let a = GaussianRational::real(pair.a.clone());
    let mut v = DensityPoly::default();
    for p in 0..=q {
        let k = q - p;
        let d1k_at0 = pair.psi1.derivative(k).eval(&zero).conj();
        let first = pair.psi2.derivative(p).scale(&(&sign(k + 1) * &d1k_at0));
        let d2k_at_a = pair.psi2.derivative(k).eval(&a);
        let second = pair
            .psi1
            .derivative(p)
            .reflect_conj(&pair.a)
            .scale(&(&sign(p) * &d2k_at_a));
        v = &(&v + &first) + &second;
    }
    Ok(v)
}

pub fn l_operator(pair: &NormalizedPair) -> Result<DiffOperator, BezoutError> {
    let q = ordered_degree(pair)?;
    let zero = GaussianRational::zero();
    let a = GaussianRational::real(pair.a.clone());
    let d1_0: Vec<_> = (0..=q)
        .map(|k| pair.psi1.derivative(k).eval(&zero).conj())
        .collect();
    let d1_a: Vec<_> = (0..=q)
        .map(|k| pair.psi1.derivative(k).eval(&a).conj())
        .collect();
    let d2_0: Vec<_> = (0..=q)
        .map(|k| pair.psi2.derivative(k).eval(&zero))
        .collect();
    let d2_a: Vec<_> = (0..=q).map(|k| pair.psi2.derivative(k).eval(&a)).collect();
    let mut coeffs = vec![GaussianRational::zero(); q];
    for (s, slot) in coeffs.iter_mut().enumerate() {
        let total = q - 1 - s;
        for p in 0..=total {
            let k = total - p;
            *slot += &(&sign(k + 1) * &(&d2_0[p] * &d1_0[k]));
            *slot += &(&sign(p) * &(&d2_a[k] * &d1_a[p]));
        }
    }
    Ok(DiffOperator::new(coeffs))
}

/// Order and leading coefficient of `L(D)` for un-normalized monomial
/// densities `Ψ_k = x^{m_k}(a−x)^{n_k}`.
///
/// The two candidate orders come from the lowest nonvanishing derivatives at
/// the endpoints: `n₁ − m₂ − 1` (from `x = 0`) and `m₁ − n₂ − 1` (from
/// `x = a`). When they tie the two leading terms are summed; a vanishing sum
/// is reported as an internal-consistency error rather than trusted.
pub fn monomial_order(
    m1: u32,
    n1: u32,
    m2: u32,
    n2: u32,
    a: &BigRational,
) -> Result<(usize, GaussianRational), BezoutError> {
    let (q1, q2) = ((m1 + n1) as usize, (m2 + n2) as usize);
    if q1 < q2 {
        return Err(BezoutError::OrderViolation { q1, q2 });
    }
    if n1 == m2 && m1 == n2 {
        return Err(BezoutError::CoincidenceCase);
    }
    let r_zero = i64::from(n1) - i64::from(m2) - 1;
    let r_end = i64::from(m1) - i64::from(n2) - 1;
    let apow = |e: u32| {
        let mut acc = BigRational::one();
        for _ in 0..e {
            acc *= a;
        }
        acc
    };
    let from_zero = || {
        let mag = apow(n1 + n2) * BigRational::from_integer(factorial(m2) * factorial(m1));
        GaussianRational::real(mag) * sign(m1 as usize + 1)
    };
    let from_end = || {
        let mag = apow(m1 + m2) * BigRational::from_integer(factorial(n2) * factorial(n1));
        GaussianRational::real(mag) * sign(n2 as usize)
    };
    let (r, leading) = match r_zero.cmp(&r_end) {
        std::cmp::Ordering::Greater => (r_zero, from_zero()),
        std::cmp::Ordering::Less => (r_end, from_end()),
        std::cmp::Ordering::Equal => (r_zero, from_zero() + from_end()),
    };
    if r < 0 {
        return Err(BezoutError::InternalConsistency(format!(
            "negative order {r} outside the coincidence case"
        )));
    }
    if leading.is_zero() {
        return Err(BezoutError::InternalConsistency(format!(
            "leading coefficients cancel at the tied order {r} for (m1,n1,m2,n2)=({m1},{n1},{m2},{n2})"
        )));
    }
    Ok((r as usize, leading))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoeffClass {
    /// Exact rational data; algebraicity is guaranteed.
    Rational,
    /// Coefficients standing for values not known to be algebraic.
    NonalgebraicFloat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    NoCommonZeros,
    ZeroSetsCoincide,
    Inconclusive,
}

/// The criterion that justified an outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Algebraic data and `L(D)` of nonnegative order; transcendence of
    /// `tan(az/2)` at algebraic `z` rules out common zeros.
    NonnegativeOrder,
    /// Algebraic data and `L(D) = 0`; the Bezoutiant kernel is trivial.
    ZeroOperator,
    /// Arbitrary coefficients and `V ≢ 0`.
    NonvanishingSymbol,
    /// `Ψ₁(x) = conj Ψ₂(a−x)`: `T = 0` and the zero sets coincide.
    Coincidence,
    ZeroMass,
    NoCriterion,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Criterion::NonnegativeOrder => "nonnegative_order",
            Criterion::ZeroOperator => "zero_operator",
            Criterion::NonvanishingSymbol => "nonvanishing_symbol",
            Criterion::Coincidence => "coincidence",
            Criterion::ZeroMass => "zero_mass",
            Criterion::NoCriterion => "no_criterion",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Order `r` of `L(D)`; `None` for the zero operator or when not computed.
    pub order: Option<usize>,
    pub zero_operator: Option<bool>,
    pub v_is_zero: Option<bool>,
    /// `Ψ₁(x) ≠ conj Ψ₂(a−x)` on the normalized pair.
    pub not_coincident: Option<bool>,
    pub coeff_class: CoeffClass,
    /// The pair was reordered so that `deg Ψ₁ ≥ deg Ψ₂`.
    pub swapped: bool,
    pub r1: Option<GaussianRational>,
    pub r2: Option<GaussianRational>,
    pub l_coeffs: Vec<GaussianRational>,
    pub v_symbol: Option<DensityPoly>,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub theorem: Criterion,
    /// `F₁` (of the possibly swapped pair) has no real zeros.
    pub no_real_zeros: bool,
    /// `F₁` has no zeros `z`, `conj z` both zero with `z` off the real axis.
    pub no_conjugate_pairs: bool,
    pub diagnostics: Diagnostics,
}

/// Decision on the already ordered, normalized pair: outcome, criterion,
/// operator order and symbol status.
fn classify(
    pair: &NormalizedPair,
    class: CoeffClass,
) -> Result<(Outcome, Criterion, DiffOperator, DensityPoly), BezoutError> {
    let l = l_operator(pair)?;
    let v = v_symbol(pair)?;
    if pair.is_coincident() {
        return Ok((Outcome::ZeroSetsCoincide, Criterion::Coincidence, l, v));
    }
    let (outcome, criterion) = match class {
        CoeffClass::Rational if l.is_zero() => (Outcome::NoCommonZeros, Criterion::ZeroOperator),
        CoeffClass::Rational => (Outcome::NoCommonZeros, Criterion::NonnegativeOrder),
        CoeffClass::NonalgebraicFloat if !v.is_zero() => {
            (Outcome::NoCommonZeros, Criterion::NonvanishingSymbol)
        }
        CoeffClass::NonalgebraicFloat => (Outcome::Inconclusive, Criterion::NoCriterion),
    };
    Ok((outcome, criterion, l, v))
}

/// Full decision procedure for the common zeros of `F₁` and `F_{2,1}`.
///
/// The pair is normalized and reordered so that `deg Ψ₁ ≥ deg Ψ₂`; a density
/// of zero mass yields an `Inconclusive` verdict. Invalid input (zero
/// density, nonpositive `a`) is an error.
pub fn decide(
    psi1: &DensityPoly,
    psi2: &DensityPoly,
    a: &BigRational,
    class: CoeffClass,
) -> Result<Verdict, BezoutError> {
    let swapped = match (psi1.degree(), psi2.degree()) {
        (Some(q1), Some(q2)) => q1 < q2,
        (None, _) => return Err(BezoutError::ZeroDensity { index: 1 }),
        (_, None) => return Err(BezoutError::ZeroDensity { index: 2 }),
    };
    let (first, second) = if swapped { (psi2, psi1) } else { (psi1, psi2) };
    let mut diagnostics = Diagnostics {
        order: None,
        zero_operator: None,
        v_is_zero: None,
        not_coincident: None,
        coeff_class: class,
        swapped,
        r1: None,
        r2: None,
        l_coeffs: Vec::new(),
        v_symbol: None,
        reason: None,
    };
    let pair = match normalize_pair(first, second, a) {
        Ok(pair) => pair,
        Err(BezoutError::ZeroMass { index }) => {
            // index refers to the ordered pair
            let original = if swapped { 3 - index } else { index };
            diagnostics.reason = Some(format!(
                "density {original} integrates to zero over [0, a]; the mass condition fails and no criterion applies"
            ));
            return Ok(Verdict {
                outcome: Outcome::Inconclusive,
                theorem: Criterion::ZeroMass,
                no_real_zeros: false,
                no_conjugate_pairs: false,
                diagnostics,
            });
        }
        Err(e) => return Err(e),
    };

    let (outcome, theorem, l, v) = classify(&pair, class)?;
    diagnostics.order = l.order();
    diagnostics.zero_operator = Some(l.is_zero());
    diagnostics.v_is_zero = Some(v.is_zero());
    diagnostics.not_coincident = Some(!pair.is_coincident());
    diagnostics.r1 = Some(pair.r1.clone());
    diagnostics.r2 = Some(pair.r2.clone());
    diagnostics.l_coeffs = l.coeffs.clone();
    diagnostics.v_symbol = Some(v);
    if outcome == Outcome::Inconclusive {
        diagnostics.reason = Some(
            "V vanishes identically and the coefficients are not known to be algebraic".into(),
        );
    }

    // The structural flags come from the same criteria applied to (Ψ₁, Ψ₁):
    // F_{1,1} has the conjugated zeros of F₁.
    let self_pair = NormalizedPair {
        psi1: pair.psi1.clone(),
        psi2: pair.psi1.clone(),
        a: pair.a.clone(),
        r1: pair.r1.clone(),
        r2: pair.r1.clone(),
    };
    let (self_outcome, ..) = classify(&self_pair, class)?;
    let flag = self_outcome == Outcome::NoCommonZeros;

    Ok(Verdict {
        outcome,
        theorem,
        no_real_zeros: flag,
        no_conjugate_pairs: flag,
        diagnostics,
    })
}

/// Scale factor `R₂·conj(R₁)` relating the normalized `L(D)` to the raw one.
pub fn normalization_scale(pair: &NormalizedPair) -> GaussianRational {
    &pair.r2 * &pair.r1.conj()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bezoutiant::build_kernel;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> DensityPoly {
        DensityPoly::from_ints(c)
    }

    fn pair(p1: &[i64], p2: &[i64], a: i64) -> NormalizedPair {
        normalize_pair(&poly(p1), &poly(p2), &rat(a, 1)).unwrap()
    }

    #[test]
    fn v_symbol_examples() {
        assert!(v_symbol(&pair(&[0, 2], &[1], 1)).unwrap().is_zero());
        assert!(v_symbol(&pair(&[0, 2], &[0, 2], 1)).unwrap().is_zero());
        // coincidence: 2(1 − x) vs 2x
        assert!(v_symbol(&pair(&[2, -2], &[0, 2], 1)).unwrap().is_zero());
    }

    #[test]
    fn l_operator_examples() {
        let l = l_operator(&pair(&[0, 2], &[1], 1)).unwrap();
        assert_eq!(l.coeffs, vec![GaussianRational::from(2)]);
        assert_eq!(l.order(), Some(0));
        let l = l_operator(&pair(&[0, 2], &[0, 2], 1)).unwrap();
        assert_eq!(l.coeffs, vec![GaussianRational::from(4)]);
        let l = l_operator(&pair(&[1], &[1], 1)).unwrap();
        assert!(l.is_zero());
        assert_eq!(l.order(), None);
    }

    #[test]
    fn order_violation() {
        let p = pair(&[1], &[0, 2], 1);
        assert!(matches!(
            l_operator(&p),
            Err(BezoutError::OrderViolation { q1: 0, q2: 1 })
        ));
        assert!(matches!(
            v_symbol(&p),
            Err(BezoutError::OrderViolation { .. })
        ));
    }

    #[test]
    fn monomial_order_examples() {
        let one = rat(1, 1);
        assert_eq!(monomial_order(1, 0, 0, 0, &one).unwrap().0, 0);
        assert_eq!(monomial_order(0, 3, 0, 1, &one).unwrap().0, 2);
        assert_eq!(
            monomial_order(1, 2, 2, 1, &one).unwrap_err(),
            BezoutError::CoincidenceCase
        );
        assert!(matches!(
            monomial_order(0, 0, 1, 1, &one),
            Err(BezoutError::OrderViolation { .. })
        ));
    }

    #[test]
    fn monomial_tie_cancellation_is_surfaced() {
        // symmetric pair x²(1−x)² vs 1: the tied leading terms cancel
        assert!(matches!(
            monomial_order(2, 2, 0, 0, &rat(1, 1)),
            Err(BezoutError::InternalConsistency(_))
        ));
        let p = normalize_pair(
            &DensityPoly::bump(2, 2, &rat(1, 1)),
            &poly(&[1]),
            &rat(1, 1),
        )
        .unwrap();
        assert_eq!(l_operator(&p).unwrap().order(), Some(0));
    }

    #[test]
    fn monomial_leading_matches_general_operator() {
        for a in [rat(1, 1), rat(3, 2)] {
            for (m1, n1, m2, n2) in [
                (1, 0, 0, 0),
                (0, 3, 0, 1),
                (2, 1, 1, 1),
                (1, 1, 0, 0),
                (3, 1, 0, 2),
            ] {
                let (r, leading) = monomial_order(m1, n1, m2, n2, &a).unwrap();
                let p = normalize_pair(
                    &DensityPoly::bump(m1 as usize, n1 as usize, &a),
                    &DensityPoly::bump(m2 as usize, n2 as usize, &a),
                    &a,
                )
                .unwrap();
                let l = l_operator(&p).unwrap();
                assert_eq!(l.order(), Some(r));
                assert_eq!(l.leading().unwrap() * &normalization_scale(&p), leading);
            }
        }
    }

    #[test]
    fn decide_examples() {
        let one = rat(1, 1);
        let v = decide(&poly(&[0, 2]), &poly(&[1]), &one, CoeffClass::Rational).unwrap();
        assert_eq!(v.outcome, Outcome::NoCommonZeros);
        assert_eq!(v.theorem, Criterion::NonnegativeOrder);
        assert_eq!(v.diagnostics.order, Some(0));
        assert!(v.no_real_zeros && v.no_conjugate_pairs);
        assert!(!v.diagnostics.swapped);

        let v = decide(&poly(&[1]), &poly(&[1]), &one, CoeffClass::Rational).unwrap();
        assert_eq!(v.outcome, Outcome::ZeroSetsCoincide);
        assert_eq!(v.theorem, Criterion::Coincidence);
        assert!(!v.no_real_zeros);

        let p1 = DensityPoly::bump(1, 2, &one);
        let p2 = DensityPoly::bump(2, 1, &one);
        let v = decide(&p1, &p2, &one, CoeffClass::Rational).unwrap();
        assert_eq!(v.outcome, Outcome::ZeroSetsCoincide);
    }

    #[test]
    fn decide_zero_mass_is_inconclusive() {
        let v = decide(
            &poly(&[1]),
            &DensityPoly::new(vec![
                GaussianRational::frac(-1, 2),
                GaussianRational::from(1),
            ]),
            &rat(1, 1),
            CoeffClass::Rational,
        )
        .unwrap();
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert_eq!(v.theorem, Criterion::ZeroMass);
        assert!(v
            .diagnostics
            .reason
            .as_deref()
            .unwrap()
            .contains("density 2"));
    }

    #[test]
    fn decide_swaps_and_agrees() {
        let one = rat(1, 1);
        let a = decide(&poly(&[1]), &poly(&[0, 0, 3]), &one, CoeffClass::Rational).unwrap();
        let b = decide(&poly(&[0, 0, 3]), &poly(&[1]), &one, CoeffClass::Rational).unwrap();
        assert!(a.diagnostics.swapped);
        assert!(!b.diagnostics.swapped);
        assert_eq!(a.outcome, b.outcome);
    }

    #[test]
    fn nonalgebraic_branch() {
        let one = rat(1, 1);
        // V ≡ 0 for (2x, 1): no criterion without algebraicity
        let v = decide(
            &poly(&[0, 2]),
            &poly(&[1]),
            &one,
            CoeffClass::NonalgebraicFloat,
        )
        .unwrap();
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert_eq!(v.theorem, Criterion::NoCriterion);
        assert_eq!(v.diagnostics.v_is_zero, Some(true));
        assert!(!v.no_real_zeros);
        // coincidence does not need algebraicity
        let v = decide(
            &poly(&[1]),
            &poly(&[1]),
            &one,
            CoeffClass::NonalgebraicFloat,
        )
        .unwrap();
        assert_eq!(v.outcome, Outcome::ZeroSetsCoincide);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        // The symbol is identically zero for every polynomial pair.
        #[test]
        fn symbol_vanishes_for_polynomials(
            p1 in crate::bezoutiant::tests::arb_density(5),
            p2 in crate::bezoutiant::tests::arb_density(5),
            an in 1i64..6, ad in 1i64..4,
        ) {
            let a = rat(an, ad);
            let (p1, p2) = if p1.degree() >= p2.degree() { (p1, p2) } else { (p2, p1) };
            let Ok(pair) = normalize_pair(&p1, &p2, &a) else { return Ok(()); };
            prop_assert!(v_symbol(&pair).unwrap().is_zero());
        }
    }

    #[test]
    fn coincidence_iff_zero_kernel() {
        let one = rat(1, 1);
        let cases: [(&[i64], &[i64]); 4] = [
            (&[1], &[1]),
            (&[0, 2], &[1]),
            (&[2, -2], &[0, 2]),
            (&[0, 1], &[0, 0, 1]),
        ];
        for (p1, p2) in cases {
            let verdict = decide(&poly(p1), &poly(p2), &one, CoeffClass::Rational).unwrap();
            let p = normalize_pair(&poly(p1), &poly(p2), &one).unwrap();
            assert_eq!(
                verdict.outcome == Outcome::ZeroSetsCoincide,
                build_kernel(&p).is_zero()
            );
        }
    }

    #[test]
    fn verdict_json_fields() {
        let v = decide(
            &poly(&[0, 2]),
            &poly(&[1]),
            &rat(1, 1),
            CoeffClass::Rational,
        )
        .unwrap();
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["outcome"], "no_common_zeros");
        assert_eq!(j["theorem"], "nonnegative_order");
        assert_eq!(j["diagnostics"]["swapped"], false);
        assert_eq!(j["diagnostics"]["r1"]["re"], "1");
    }
}
