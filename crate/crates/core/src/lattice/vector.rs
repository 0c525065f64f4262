use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::QuantumState;
use crate::numcore::{OmegaPoly, Rational};

/// Finite linear combination of basis states with coefficients in ℚ[ω].
///
/// Zero coefficients are never stored, so an empty vector is the zero vector
/// and structural equality is vector equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<(QuantumState, OmegaPoly)>", into = "Vec<(QuantumState, OmegaPoly)>")]
pub struct LatticeVector {
    terms: BTreeMap<QuantumState, OmegaPoly>,
}

impl LatticeVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(state: QuantumState) -> Self {
        Self::single(state, OmegaPoly::one())
    }

    pub fn single(state: QuantumState, coeff: OmegaPoly) -> Self {
        let mut v = Self::zero();
        v.add_term(state, coeff);
        v
    }

    /// Adds `coeff` to the coefficient of `state`, dropping it if it cancels.
    pub fn add_term(&mut self, state: QuantumState, coeff: OmegaPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&state) {
            Some(c) => {
                *c = &*c + &coeff;
                if c.is_zero() {
                    self.terms.remove(&state);
                }
            }
            None => {
                self.terms.insert(state, coeff);
            }
        }
    }

    pub fn get(&self, state: &QuantumState) -> Option<&OmegaPoly> {
        self.terms.get(state)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&QuantumState, &OmegaPoly)> {
        self.terms.iter()
    }

    pub fn states(&self) -> impl Iterator<Item = &QuantumState> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &LatticeVector) -> LatticeVector {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(*s, c.clone());
        }
        out
    }

    pub fn minus(&self, other: &LatticeVector) -> LatticeVector {
        self.plus(&other.scale(&Rational::int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> LatticeVector {
        self.scale_poly(&OmegaPoly::constant(c.clone()))
    }

    pub fn scale_poly(&self, c: &OmegaPoly) -> LatticeVector {
        let mut out = Self::zero();
        for (s, x) in &self.terms {
            out.add_term(*s, x * c);
        }
        out
    }

    /// Largest absolute rational coefficient over all states and ω powers.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(OmegaPoly::max_abs_coeff).fold(0.0, f64::max)
    }

    /// Coefficients with ω specialized to a value.
    pub fn eval_at(&self, omega: &Rational) -> BTreeMap<QuantumState, Rational> {
        self.terms
            .iter()
            .map(|(s, c)| (*s, c.eval(omega)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }
}

impl FromIterator<(QuantumState, OmegaPoly)> for LatticeVector {
    fn from_iter<I: IntoIterator<Item = (QuantumState, OmegaPoly)>>(iter: I) -> Self {
        let mut v = Self::zero();
        for (s, c) in iter {
            v.add_term(s, c);
        }
        v
    }
}

impl From<Vec<(QuantumState, OmegaPoly)>> for LatticeVector {
    fn from(v: Vec<(QuantumState, OmegaPoly)>) -> Self {
        v.into_iter().collect()
    }
}

impl From<LatticeVector> for Vec<(QuantumState, OmegaPoly)> {
    fn from(v: LatticeVector) -> Self {
        v.terms.into_iter().collect()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})Ψ{s}")?;
        }
        Ok(())
    }
}
