use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{xi_action, LatticeError, LatticeOperator, LatticeVector, TripleConvention};
use crate::diffops::Sign;
use crate::model::{spectral_chain, QuantumState, SystemParams};
use crate::numcore::{OmegaPoly, Rational};

/// How P⁽⁻⁾ combines the two orderings of Ξ⁺ and Ξ⁻.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PMinusConvention {
    /// kᵢ(Ξ⁺Ξ⁻ + Ξ⁻Ξ⁺)/A_{i−1}.
    Printed,
    /// kᵢ(Ξ⁺Ξ⁻ − Ξ⁻Ξ⁺)/A_{i−1}.
    Antisymmetric,
}

/// Which coefficients the bracket identities and the L⁻ divisor use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityForm {
    /// Coefficients as typeset, with L⁻ divided by A_{i−1}.
    Printed,
    /// The forms the lattice actions satisfy, with L⁻ divided by k_{i−1}A_{i−1}.
    Corrected,
}

/// The convention pair an identity check runs under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Conventions {
    pub p_minus: PMinusConvention,
    pub triple: TripleConvention,
}

impl Conventions {
    pub const PRINTED: Conventions = Conventions { p_minus: PMinusConvention::Printed, triple: TripleConvention::Six };

    /// Every combination, printed first.
    pub fn all() -> [Conventions; 4] {
        use PMinusConvention as P;
        use TripleConvention as T;
        [
            Conventions { p_minus: P::Printed, triple: T::Six },
            Conventions { p_minus: P::Antisymmetric, triple: T::Six },
            Conventions { p_minus: P::Printed, triple: T::Cyclic },
            Conventions { p_minus: P::Antisymmetric, triple: T::Cyclic },
        ]
    }
}

impl fmt::Display for Conventions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.p_minus {
            PMinusConvention::Printed => "printed",
            PMinusConvention::Antisymmetric => "antisymmetric",
        };
        let t = match self.triple {
            TripleConvention::Six => "six",
            TripleConvention::Cyclic => "cyclic",
        };
        write!(f, "p_minus={p},triple={t}")
    }
}

/// The relations checked by [`check_identity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    BracketMinus,
    BracketPlus,
    BracketPm,
    Cubic,
    CrossCommute,
}

impl Identity {
    pub const ALL: [Identity; 5] =
        [Identity::BracketMinus, Identity::BracketPlus, Identity::BracketPm, Identity::Cubic, Identity::CrossCommute];

    pub fn name(self) -> &'static str {
        match self {
            Identity::BracketMinus => "bracket-minus",
            Identity::BracketPlus => "bracket-plus",
            Identity::BracketPm => "bracket-pm",
            Identity::Cubic => "cubic",
            Identity::CrossCommute => "cross-commute",
        }
    }

    /// Whether the result depends on the P⁽⁻⁾ or triple convention.
    pub fn uses_conventions(self) -> bool {
        matches!(self, Identity::BracketPm | Identity::Cubic)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// α₁ = 1, α₂ = 1/4, α₃ = 0.
pub fn alpha(i: usize) -> Rational {
    match i {
        1 => Rational::one(),
        2 => Rational::new(1, 4),
        3 => Rational::zero(),
        _ => panic!("α index {i} out of range 1..=3"),
    }
}

/// Operator builder over one parameter set; all operators act in ℚ[ω].
#[derive(Clone, Debug)]
pub struct LatticeAlgebra {
    params: Arc<SystemParams>,
}

impl LatticeAlgebra {
    pub fn new(params: &SystemParams) -> Self {
        LatticeAlgebra { params: Arc::new(params.clone()) }
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    /// H for i = 0 and Lᵢ otherwise, as multiplication by the eigenvalue.
    pub fn tower(&self, i: usize) -> LatticeOperator {
        let p = self.params.clone();
        let name = if i == 0 { "H".to_string() } else { format!("L{i}") };
        LatticeOperator::diagonal(name, move |s| spectral_chain(&p, s).eigenvalue(i))
    }

    pub fn xi(&self, i: usize, sign: Sign) -> LatticeOperator {
        assert!((1..=3).contains(&i), "Ξ index {i} out of range 1..=3");
        let p = self.params.clone();
        LatticeOperator::new(format!("Ξ{i}{}", sign.symbol()), move |s| {
            xi_action(&p, i, sign, s).expect("Ξ index checked")
        })
    }

    /// Multiplication by 1/A_{i−1}, or 1/(k_{i−1}A_{i−1}) in the corrected form.
    pub fn inverse_divisor(&self, i: usize, form: IdentityForm) -> LatticeOperator {
        let p = self.params.clone();
        LatticeOperator::diagonal(format!("1/A{}", i - 1), move |s| {
            let mut d = spectral_chain(&p, s).big_a(i - 1).clone();
            if form == IdentityForm::Corrected {
                d = d * p.k(i - 1);
            }
            OmegaPoly::constant(d.recip().expect("A is positive for positive couplings"))
        })
    }

    /// Lᵢ⁺ = Ξᵢ⁺ + Ξᵢ⁻.
    pub fn l_plus(&self, i: usize) -> LatticeOperator {
        self.xi(i, Sign::Plus).plus(&self.xi(i, Sign::Minus)).with_name(format!("L{i}+"))
    }

    /// Lᵢ⁻ = kᵢ(Ξᵢ⁺ − Ξᵢ⁻)/A_{i−1}, the divisor taken at the source state.
    pub fn l_minus(&self, i: usize, form: IdentityForm) -> LatticeOperator {
        self.xi(i, Sign::Plus)
            .minus(&self.xi(i, Sign::Minus))
            .compose(&self.inverse_divisor(i, form))
            .scale(&self.params.k(i))
            .with_name(format!("L{i}-"))
    }

    pub fn l_pm(&self, i: usize, sign: Sign, form: IdentityForm) -> LatticeOperator {
        match sign {
            Sign::Plus => self.l_plus(i),
            Sign::Minus => self.l_minus(i, form),
        }
    }

    /// P⁽⁺⁾ = Ξ⁻Ξ⁺ + Ξ⁺Ξ⁻.
    pub fn p_plus(&self, i: usize) -> LatticeOperator {
        let (xp, xm) = (self.xi(i, Sign::Plus), self.xi(i, Sign::Minus));
        xm.compose(&xp).plus(&xp.compose(&xm)).with_name(format!("P{i}+"))
    }

    /// P⁽⁻⁾ = kᵢ(Ξ⁺Ξ⁻ ± Ξ⁻Ξ⁺)/A_{i−1}.
    pub fn p_minus(&self, i: usize, conv: PMinusConvention, form: IdentityForm) -> LatticeOperator {
        let (xp, xm) = (self.xi(i, Sign::Plus), self.xi(i, Sign::Minus));
        let (a, b) = (xp.compose(&xm), xm.compose(&xp));
        let sum = match conv {
            PMinusConvention::Printed => a.plus(&b),
            PMinusConvention::Antisymmetric => a.minus(&b),
        };
        sum.compose(&self.inverse_divisor(i, form)).scale(&self.params.k(i)).with_name(format!("P{i}-"))
    }

    pub fn p_action(&self, i: usize, sign: Sign, conv: PMinusConvention, form: IdentityForm) -> LatticeOperator {
        match sign {
            Sign::Plus => self.p_plus(i),
            Sign::Minus => self.p_minus(i, conv, form),
        }
    }

    /// LHS − RHS of one identity for index i as a list of named relations.
    pub fn identity_residual_operators(
        &self,
        i: usize,
        which: Identity,
        conv: Conventions,
        form: IdentityForm,
    ) -> Vec<(String, LatticeOperator)> {
        let r = |x: i64| Rational::int(x);
        let k2 = self.params.k(i).square();
        let q = Rational::from(self.params.q(i));
        let al = alpha(i);
        let l = self.tower(i);
        let lp = self.l_plus(i);
        let lm = self.l_minus(i, form);
        let printed = form == IdentityForm::Printed;
        let lc = LatticeOperator::linear_combination;
        let single = |op: LatticeOperator| vec![(which.name().to_string(), op)];
        match which {
            Identity::BracketMinus => {
                // [L, L⁻] + 4k²q²L⁻ + 4αk²qL⁺ (printed); the corrected form drops α.
                let c_lp = if printed { r(4) * &k2 * &q * &al } else { r(4) * &k2 * &q };
                let lhs = l.commutator(&lm);
                single(lc(&[(r(1), &lhs), (r(4) * &k2 * q.square(), &lm), (c_lp, &lp)]))
            }
            Identity::BracketPlus => {
                let lhs = l.commutator(&lp);
                let acl = l.anticommutator(&lm);
                let cube = r(8) * q.pow(3).expect("q > 0") * &k2;
                let terms = if printed {
                    vec![
                        (r(1), &lhs),
                        (r(-2) * &q, &acl),
                        (r(4) * &k2 * &q, &lp),
                        (r(-4) * &k2 * q.square() - cube, &lm),
                    ]
                } else {
                    vec![
                        (r(1), &lhs),
                        (r(-2) * &q, &acl),
                        (r(-4) * &k2 * q.square(), &lp),
                        (r(4) * &al * &k2 * &q - cube, &lm),
                    ]
                };
                single(lc(&terms))
            }
            Identity::BracketPm => {
                let lhs = lp.commutator(&lm);
                let lm2 = lm.compose(&lm);
                let pm = self.p_minus(i, conv.p_minus, form);
                single(lc(&[(r(1), &lhs), (r(-2) * &q, &lm2), (r(2), &pm)]))
            }
            Identity::Cubic => {
                let tri = LatticeOperator::triple(&l, &lm, &lm, conv.triple);
                let lm2 = lm.compose(&lm);
                let lp2 = lp.compose(&lp);
                let acpm = lp.anticommutator(&lm);
                let pp = self.p_plus(i);
                let pm = self.p_minus(i, conv.p_minus, form);
                let pm_sign = if printed { r(4) } else { r(-4) };
                single(lc(&[
                    (r(1), &tri),
                    (r(2) * &k2 * (r(14) * q.square() - r(3) * &al), &lm2),
                    (r(6) * &k2, &lp2),
                    (r(6) * &k2 * &q, &acpm),
                    (r(-12) * &k2, &pp),
                    (pm_sign * &k2 * &q, &pm),
                ]))
            }
            Identity::CrossCommute => {
                let mut out = Vec::new();
                for j in 0..=3 {
                    if j == i {
                        continue;
                    }
                    let lj = self.tower(j);
                    out.push((format!("[{}, L{i}+]", lj.name()), lj.commutator(&lp)));
                    out.push((format!("[{}, L{i}-]", lj.name()), lj.commutator(&lm)));
                }
                for j in 1..=3usize {
                    if j.abs_diff(i) > 1 {
                        let (jp, jm) = (self.l_plus(j), self.l_minus(j, form));
                        for (a, an) in [(&lp, "+"), (&lm, "-")] {
                            for (b, bn) in [(&jp, "+"), (&jm, "-")] {
                                out.push((format!("[L{i}{an}, L{j}{bn}]"), a.commutator(b)));
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// M₁⁻ for k = (2,1,1) with S₁ = −(H²−4ω)(A₁²−a₁²)/16.
    ///
    /// `Printed` uses L₁⁻, L₁⁺ in the first bracket; `XiSplit` uses Ξ₁⁺, Ξ₁⁻.
    /// All denominators are right factors evaluated at the source state.
    pub fn m1_minus(&self, variant: M1Variant) -> Result<LatticeOperator, LatticeError> {
        if !self.params.is_k([2, 1, 1]) {
            return Err(LatticeError::RequiresK211);
        }
        let p = self.params.clone();
        let p1 = Rational::from(p.p(1));
        let q1 = Rational::from(p.q(1));
        let (first, second) = match variant {
            M1Variant::Printed => (self.l_minus(1, IdentityForm::Printed), self.l_plus(1)),
            M1Variant::XiSplit => (self.xi(1, Sign::Plus), self.xi(1, Sign::Minus)),
        };
        let (pa, pb, ps) = (p.clone(), p.clone(), p.clone());
        let (p1a, p1b, p1s) = (p1.clone(), p1.clone(), p1);
        let d_plus = LatticeOperator::diagonal("1/(A0(A0+p1))", move |s| {
            let a0 = spectral_chain(&pa, s).a0;
            OmegaPoly::constant((&a0 * (&a0 + &p1a)).recip().expect("guarded"))
        });
        let d_minus = LatticeOperator::diagonal("1/(A0(A0-p1))", move |s| {
            let a0 = spectral_chain(&pb, s).a0;
            OmegaPoly::constant((&a0 * (&a0 - &p1b)).recip().expect("guarded"))
        });
        let s1 = LatticeOperator::diagonal("S1/(A0²-p1²)", move |s| {
            let c = spectral_chain(&ps, s);
            let e2 = &c.energy * &c.energy - OmegaPoly::monomial(Rational::int(4), 1);
            let a = c.a1.square() - ps.a(1).square();
            let denom = (c.a0.square() - p1s.square()).recip().expect("guarded");
            e2.scale(&(-a * Rational::new(1, 16) * denom))
        });
        let guard_params = p.clone();
        let body = first
            .compose(&d_plus)
            .plus(&second.compose(&d_minus))
            .scale(&-(Rational::new(1, 4) / q1))
            .plus(&s1);
        Ok(LatticeOperator::new("M1-", move |s| {
            let a0 = spectral_chain(&guard_params, s).a0;
            let p1 = Rational::from(guard_params.p(1));
            assert!(m1_regular(&a0, &p1), "M₁⁻ is singular at {s}");
            body.apply_state(s)
        }))
    }
}

fn m1_regular(a0: &Rational, p1: &Rational) -> bool {
    !a0.is_zero() && a0 != p1 && a0 != &-p1.clone()
}

/// Which operators fill the first bracket of M₁⁻.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum M1Variant {
    Printed,
    XiSplit,
}

/// Named residual vectors of one identity at one state; all empty means it holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub parts: Vec<(String, LatticeVector)>,
}

impl Residual {
    pub fn holds(&self) -> bool {
        self.parts.iter().all(|(_, v)| v.is_empty())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.parts.iter().map(|(_, v)| v.max_abs_coeff()).fold(0.0, f64::max)
    }

    /// Names of the relations that fail.
    pub fn failing(&self) -> Vec<&str> {
        self.parts.iter().filter(|(_, v)| !v.is_empty()).map(|(n, _)| n.as_str()).collect()
    }
}

/// LHS − RHS of an identity applied to a basis state.
pub fn check_identity(
    params: &SystemParams,
    i: usize,
    which: Identity,
    state: &QuantumState,
    conv: Conventions,
    form: IdentityForm,
) -> Result<Residual, LatticeError> {
    if !(1..=3).contains(&i) {
        return Err(LatticeError::XiIndex(i));
    }
    let alg = LatticeAlgebra::new(params);
    let parts = alg
        .identity_residual_operators(i, which, conv, form)
        .into_iter()
        .map(|(n, op)| (n, op.apply_state(state)))
        .collect();
    Ok(Residual { parts })
}

/// The defining relations of M₁⁻ at a state: [L₁,M] − L₁⁻, [H,M], [L₂,M], [L₃,M].
pub fn check_m1_minus(params: &SystemParams, state: &QuantumState, variant: M1Variant) -> Result<Residual, LatticeError> {
    let alg = LatticeAlgebra::new(params);
    let m = alg.m1_minus(variant)?;
    let a0 = spectral_chain(params, state).a0;
    if !m1_regular(&a0, &Rational::from(params.p(1))) {
        return Err(LatticeError::SingularDenominator { state: *state, a0 });
    }
    let lm = alg.l_minus(1, IdentityForm::Printed);
    let mut parts = vec![("[L1, M1-] - L1-".to_string(), alg.tower(1).commutator(&m).minus(&lm).apply_state(state))];
    for (j, name) in [(0, "[H, M1-]"), (2, "[L2, M1-]"), (3, "[L3, M1-]")] {
        parts.push((name.to_string(), alg.tower(j).commutator(&m).apply_state(state)));
    }
    Ok(Residual { parts })
}

/// True when every state in the image of Ξᵢ^± has the source energy.
pub fn preserves_energy(params: &SystemParams, i: usize, sign: Sign, state: &QuantumState) -> Result<bool, LatticeError> {
    let e = spectral_chain(params, state).energy;
    let v = xi_action(params, i, sign, state)?;
    let same = v.states().all(|t| spectral_chain(params, t).energy == e);
    Ok(same)
}

/// Room for the two-step chains of identity i: n_{i−1} ≥ 2pᵢ and nᵢ ≥ 2qᵢ.
pub fn identity_interior(params: &SystemParams, i: usize, state: &QuantumState) -> bool {
    let (p, q) = params.ratio(i);
    state.n[i - 1] >= 2 * p && state.n[i] >= 2 * q
}

/// Room for every identity at once: each nⱼ ≥ 2·max over i of (pᵢ, qᵢ).
pub fn globally_interior(params: &SystemParams, state: &QuantumState) -> bool {
    let m = (1..=3).map(|i| params.p(i).max(params.q(i))).max().unwrap_or(0);
    state.n.iter().all(|&n| n >= 2 * m)
}

/// Interior states for an identity within the window nᵢ ≤ nmax. For the
/// cross relations the margins of all three indices are required.
pub fn interior_states(params: &SystemParams, i: usize, which: Identity, nmax: u32) -> Vec<QuantumState> {
    QuantumState::window(nmax)
        .into_iter()
        .filter(|s| match which {
            Identity::CrossCommute => (1..=3).all(|j| identity_interior(params, j, s)),
            _ => identity_interior(params, i, s),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic(k: &str) -> SystemParams {
        SystemParams::parse(k, "1/3,2/5,3/7,1/2", None).unwrap()
    }

    #[test]
    fn corrected_identities_hold() {
        let conv = Conventions { p_minus: PMinusConvention::Antisymmetric, triple: TripleConvention::Six };
        for k in ["2,1,1", "3/2,3/2,1"] {
            let p = generic(k);
            for i in 1..=3 {
                let s = QuantumState::new(6, 6, 6, 6);
                for which in Identity::ALL {
                    let r = check_identity(&p, i, which, &s, conv, IdentityForm::Corrected).unwrap();
                    assert!(r.holds(), "{k} i={i} {which}: {:?}", r.failing());
                }
            }
        }
    }

    #[test]
    fn printed_bracket_minus_holds_only_for_first_index() {
        let p = generic("2,1,1");
        let s = QuantumState::new(5, 4, 6, 5);
        let r = |i| check_identity(&p, i, Identity::BracketMinus, &s, Conventions::PRINTED, IdentityForm::Printed).unwrap();
        assert!(r(1).holds());
        assert!(!r(2).holds());
    }

    #[test]
    fn printed_p_minus_is_multiple_of_p_plus() {
        let p = generic("2,1,1");
        let alg = LatticeAlgebra::new(&p);
        let s = QuantumState::new(4, 4, 4, 4);
        let pm = alg.p_minus(1, PMinusConvention::Printed, IdentityForm::Printed).apply_state(&s);
        let a0 = spectral_chain(&p, &s).a0;
        let pp = alg.p_plus(1).apply_state(&s).scale(&(p.k(1) / a0));
        assert_eq!(pm, pp);
        assert_eq!(pm.states().collect::<Vec<_>>(), vec![&s]);
    }

    #[test]
    fn m1_variants() {
        let p = generic("2,1,1");
        let s = QuantumState::new(6, 6, 6, 6);
        let printed = check_m1_minus(&p, &s, M1Variant::Printed).unwrap();
        assert_eq!(printed.failing(), vec!["[L1, M1-] - L1-"]);
        assert!(check_m1_minus(&p, &s, M1Variant::XiSplit).unwrap().holds());
        assert_eq!(LatticeAlgebra::new(&generic("1,1,1")).m1_minus(M1Variant::Printed).err(), Some(LatticeError::RequiresK211));
    }

    #[test]
    fn l_minus_with_lower_image_off_lattice() {
        let p = generic("2,1,1");
        let alg = LatticeAlgebra::new(&p);
        let s = QuantumState::new(3, 0, 1, 1);
        let lm = alg.l_minus(1, IdentityForm::Printed).apply_state(&s);
        let a0 = spectral_chain(&p, &s).a0;
        let expect = alg.xi(1, Sign::Plus).apply_state(&s).scale(&(p.k(1) / a0));
        assert_eq!(lm, expect);
    }
}
