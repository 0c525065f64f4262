use std::fmt;

use super::{LatticeError, LatticeVector};
use crate::diffops::Sign;
use crate::model::{spectral_chain, FactorLabels, QuantumState, SystemParams};
use crate::numcore::{falling_factorial, pochhammer, OmegaPoly, Rational};

/// The primitive one-variable ladders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum LadderKind {
    /// K₀^{+A₀}: n₀ → n₀+1, A₀ → A₀−2.
    K0Plus,
    /// K₀^{−A₀}: n₀ → n₀−1, A₀ → A₀+2.
    K0Minus,
    /// J⁺ on an angular slot: n → n+1.
    JPlus(usize),
    /// J⁻ on an angular slot: n → n−1.
    JMinus(usize),
    /// K^{+a} on an angular slot: n → n+1, a → a−2.
    KPlus(usize),
    /// K^{−a} on an angular slot: n → n−1, a → a+2.
    KMinus(usize),
}

impl fmt::Display for LadderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LadderKind::K0Plus => write!(f, "K0+"),
            LadderKind::K0Minus => write!(f, "K0-"),
            LadderKind::JPlus(s) => write!(f, "J+[{s}]"),
            LadderKind::JMinus(s) => write!(f, "J-[{s}]"),
            LadderKind::KPlus(s) => write!(f, "K+a[{s}]"),
            LadderKind::KMinus(s) => write!(f, "K-a[{s}]"),
        }
    }
}

/// Coefficient and labels of the image of one ladder step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderImage {
    pub coefficient: OmegaPoly,
    pub labels: FactorLabels,
}

impl LadderKind {
    fn check(self) -> Result<(), LatticeError> {
        match self {
            LadderKind::K0Plus | LadderKind::K0Minus => Ok(()),
            LadderKind::JPlus(s) | LadderKind::JMinus(s) if (1..=3).contains(&s) => Ok(()),
            // The Jacobi parameters of slot 3 are the fixed couplings a₃, a₄.
            LadderKind::KPlus(s) | LadderKind::KMinus(s) if (1..=2).contains(&s) => Ok(()),
            _ => Err(LatticeError::KindSlotMismatch(self)),
        }
    }

    /// The step applied to a labelled separated function; `None` when the
    /// image lies below the lattice.
    ///
    /// K₀⁺: −2ω(n₀+1)(n₀+A₀); K₀⁻: −2ω; J⁺: −2(n+1)(n+a+b+1);
    /// J⁻: −2(n+a)(n+b); K^{+a}: 2(n+1)(n+a); K^{−a}: 2(n+a+b+1)(n+b).
    pub fn act(self, labels: &FactorLabels) -> Result<Option<LadderImage>, LatticeError> {
        self.check()?;
        let mut out = labels.clone();
        let two = Rational::int(2);
        let coefficient = match self {
            LadderKind::K0Plus | LadderKind::K0Minus => {
                let n = Rational::from(labels.n[0]);
                let a = &labels.radial;
                let c = if self == LadderKind::K0Plus {
                    out.n[0] += 1;
                    out.radial = a - &two;
                    -(&two * (&n + 1) * (&n + a))
                } else {
                    if labels.n[0] == 0 {
                        return Ok(None);
                    }
                    out.n[0] -= 1;
                    out.radial = a + &two;
                    Rational::int(-2)
                };
                OmegaPoly::monomial(c, 1)
            }
            LadderKind::JPlus(s) | LadderKind::JMinus(s) | LadderKind::KPlus(s) | LadderKind::KMinus(s) => {
                let n = Rational::from(labels.n[s]);
                let (a, b) = labels.jacobi[s - 1].clone();
                let c = match self {
                    LadderKind::JPlus(_) => {
                        out.n[s] += 1;
                        -(&two * (&n + 1) * (&n + &a + &b + 1))
                    }
                    LadderKind::JMinus(_) => {
                        if labels.n[s] == 0 {
                            return Ok(None);
                        }
                        out.n[s] -= 1;
                        -(&two * (&n + &a) * (&n + &b))
                    }
                    LadderKind::KPlus(_) => {
                        out.n[s] += 1;
                        out.jacobi[s - 1].0 = &a - &two;
                        &two * (&n + 1) * (&n + &a)
                    }
                    _ => {
                        if labels.n[s] == 0 {
                            return Ok(None);
                        }
                        out.n[s] -= 1;
                        out.jacobi[s - 1].0 = &a + &two;
                        &two * (&n + &a + &b + 1) * (&n + &b)
                    }
                };
                OmegaPoly::constant(c)
            }
        };
        Ok(Some(LadderImage { coefficient, labels: out }))
    }
}

/// One primitive ladder step on a lattice basis state. The target keeps the
/// ladder's own parameter shift in its labels; only the quantum numbers index
/// the returned vector.
pub fn ladder_action(kind: LadderKind, params: &SystemParams, state: &QuantumState) -> Result<LatticeVector, LatticeError> {
    let labels = FactorLabels::of_state(params, state);
    Ok(match kind.act(&labels)? {
        Some(img) => LatticeVector::single(img.labels.state(), img.coefficient),
        None => LatticeVector::zero(),
    })
}

/// The primitive steps making up Ξᵢ^±, in application order.
///
/// Ξᵢ⁺ is qᵢ steps of J⁺ on slot i followed by pᵢ lowering steps on slot i−1
/// (K₀⁻ for i = 1, K^{−a} otherwise); Ξᵢ⁻ uses J⁻ and K₀⁺ / K^{+a}.
pub fn xi_steps(params: &SystemParams, i: usize, sign: Sign) -> Result<Vec<LadderKind>, LatticeError> {
    if !(1..=3).contains(&i) {
        return Err(LatticeError::XiIndex(i));
    }
    let (p, q) = params.ratio(i);
    let j = match sign {
        Sign::Plus => LadderKind::JPlus(i),
        Sign::Minus => LadderKind::JMinus(i),
    };
    let k = match (i, sign) {
        (1, Sign::Plus) => LadderKind::K0Minus,
        (1, Sign::Minus) => LadderKind::K0Plus,
        (_, Sign::Plus) => LadderKind::KMinus(i - 1),
        (_, Sign::Minus) => LadderKind::KPlus(i - 1),
    };
    let mut steps = vec![j; q as usize];
    steps.extend(std::iter::repeat(k).take(p as usize));
    Ok(steps)
}

/// Ξᵢ^± on a basis state, composed step by step from the primitive actions.
///
/// Shifts n_{i−1} by ∓pᵢ and nᵢ by ±qᵢ. Panics if the parameters carried
/// through the steps disagree with the spectral chain of the target.
pub fn xi_action(params: &SystemParams, i: usize, sign: Sign, state: &QuantumState) -> Result<LatticeVector, LatticeError> {
    let mut labels = FactorLabels::of_state(params, state);
    let mut coeff = OmegaPoly::one();
    for step in xi_steps(params, i, sign)? {
        match step.act(&labels)? {
            Some(img) => {
                coeff = coeff * img.coefficient;
                labels = img.labels;
            }
            None => return Ok(LatticeVector::zero()),
        }
    }
    let target = labels.state();
    assert_eq!(
        labels,
        FactorLabels::of_state(params, &target),
        "Ξ{i}{} from {state}: carried parameters disagree with the chain at {target}",
        sign.symbol()
    );
    Ok(LatticeVector::single(target, coeff))
}

/// Which reading of the Ξ₁ Pochhammer formulas to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosedFormReading {
    /// As typeset: (−2)^p ω^p with rising factorials throughout.
    Printed,
    /// (−2)^{p+q} ω^p, with the radial factors of Ξ₁⁻ as falling factorials.
    Corrected,
}

/// Ξ₁^± from its closed Pochhammer form.
///
/// Ξ₁⁺ = (−2)^{p}ω^{p}(n₁+1)_q(n₁+A₁+a₁+1)_q,
/// Ξ₁⁻ = (−2)^{p}ω^{p}(−n₁−A₁)_q(−n₁−a₁)_q(n₀+p)_p(n₀+A₀)_p.
pub fn xi1_closed_form(params: &SystemParams, sign: Sign, state: &QuantumState, reading: ClosedFormReading) -> LatticeVector {
    let (p, q) = params.ratio(1);
    let (pu, qu) = (p as usize, q as usize);
    let target = match sign {
        Sign::Plus => state.shifted(0, -i64::from(p)).and_then(|s| s.shifted(1, i64::from(q))),
        Sign::Minus => state.shifted(0, i64::from(p)).and_then(|s| s.shifted(1, -i64::from(q))),
    };
    let Some(target) = target else {
        return LatticeVector::zero();
    };
    let c = spectral_chain(params, state);
    let n0 = Rational::from(state.n[0]);
    let n1 = Rational::from(state.n[1]);
    let a1 = params.a(1);
    let big_p = Rational::from(p);
    let corrected = reading == ClosedFormReading::Corrected;
    let minus_two = Rational::int(-2);
    let exp = if corrected { p + q } else { p };
    let mut coef = minus_two.pow(exp as i32).expect("nonzero base");
    match sign {
        Sign::Plus => {
            coef = coef * pochhammer(&(&n1 + 1), qu) * pochhammer(&(&n1 + &c.a1 + a1 + 1), qu);
        }
        Sign::Minus => {
            coef = coef * pochhammer(&(-&n1 - &c.a1), qu) * pochhammer(&(-&n1 - a1), qu);
            let (x, y) = (&n0 + &big_p, &n0 + &c.a0);
            coef = if corrected {
                coef * falling_factorial(&x, pu) * falling_factorial(&y, pu)
            } else {
                coef * pochhammer(&x, pu) * pochhammer(&y, pu)
            };
        }
    }
    LatticeVector::single(target, OmegaPoly::monomial(coef, pu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: &str, a: &str) -> SystemParams {
        SystemParams::parse(k, a, None).unwrap()
    }

    #[test]
    fn radial_lowering_is_minus_two_omega() {
        let p = params("1,1,1", "1/2,1/2,1/2,1/2");
        let v = ladder_action(LadderKind::K0Minus, &p, &QuantumState::new(1, 0, 0, 0)).unwrap();
        assert_eq!(v.get(&QuantumState::GROUND), Some(&OmegaPoly::monomial(Rational::int(-2), 1)));
    }

    #[test]
    fn slot3_raise_at_ground() {
        let p = params("1,1,1", "1/2,1/2,1/2,1/2");
        let v = ladder_action(LadderKind::JPlus(3), &p, &QuantumState::GROUND).unwrap();
        assert_eq!(v.get(&QuantumState::new(0, 0, 0, 1)), Some(&OmegaPoly::constant(Rational::int(-4))));
    }

    #[test]
    fn lowering_below_lattice_is_zero() {
        let p = params("2,1,1", "1/3,2/5,3/7,1/2");
        assert!(ladder_action(LadderKind::KMinus(1), &p, &QuantumState::new(3, 0, 2, 2)).unwrap().is_empty());
        assert!(ladder_action(LadderKind::JMinus(2), &p, &QuantumState::new(3, 1, 0, 2)).unwrap().is_empty());
    }

    #[test]
    fn slot3_index_ladder_is_rejected() {
        let p = params("1,1,1", "1,1,1,1");
        assert_eq!(
            ladder_action(LadderKind::KPlus(3), &p, &QuantumState::GROUND),
            Err(LatticeError::KindSlotMismatch(LadderKind::KPlus(3)))
        );
    }

    #[test]
    fn xi1_plus_composed_versus_typeset() {
        let p = params("2,1,1", "1/2,1/2,1/2,1/2");
        let s = QuantumState::new(2, 0, 0, 0);
        let t = QuantumState::new(0, 1, 0, 0);
        let composed = xi_action(&p, 1, Sign::Plus, &s).unwrap();
        assert_eq!(composed.get(&t), Some(&OmegaPoly::monomial(Rational::int(-26), 2)));
        let printed = xi1_closed_form(&p, Sign::Plus, &s, ClosedFormReading::Printed);
        assert_eq!(printed.get(&t), Some(&OmegaPoly::monomial(Rational::int(13), 2)));
        assert_eq!(xi1_closed_form(&p, Sign::Plus, &s, ClosedFormReading::Corrected), composed);
    }

    #[test]
    fn xi2_shifts() {
        let p = params("2,1,1", "1/3,2/5,3/7,1/2");
        let v = xi_action(&p, 2, Sign::Plus, &QuantumState::new(1, 3, 1, 2)).unwrap();
        assert_eq!(v.states().copied().collect::<Vec<_>>(), vec![QuantumState::new(1, 2, 3, 2)]);
    }
}
