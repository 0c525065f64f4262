use std::fmt;
use std::sync::Arc;

use super::LatticeVector;
use crate::model::QuantumState;
use crate::numcore::{OmegaPoly, Rational};

type Rule = dyn Fn(&QuantumState) -> LatticeVector + Send + Sync;

/// A linear operator on the lattice span, given by its action on basis states.
#[derive(Clone)]
pub struct LatticeOperator {
    name: String,
    rule: Arc<Rule>,
}

/// How the symmetrized triple product {A,B,C} is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TripleConvention {
    /// Sum over all six orderings.
    Six,
    /// ABC + BCA + CAB.
    Cyclic,
}

impl LatticeOperator {
    pub fn new<F>(name: impl Into<String>, rule: F) -> Self
    where
        F: Fn(&QuantumState) -> LatticeVector + Send + Sync + 'static,
    {
        LatticeOperator { name: name.into(), rule: Arc::new(rule) }
    }

    pub fn identity() -> Self {
        Self::new("I", |s| LatticeVector::basis(*s))
    }

    pub fn zero() -> Self {
        Self::new("0", |_| LatticeVector::zero())
    }

    /// Multiplication by a state-dependent ω-polynomial.
    pub fn diagonal<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&QuantumState) -> OmegaPoly + Send + Sync + 'static,
    {
        Self::new(name, move |s| LatticeVector::single(*s, f(s)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn apply_state(&self, s: &QuantumState) -> LatticeVector {
        (self.rule)(s)
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        let mut out = LatticeVector::zero();
        for (s, c) in v.iter() {
            for (t, x) in self.apply_state(s).iter() {
                out.add_term(*t, x * c);
            }
        }
        out
    }

    pub fn plus(&self, other: &LatticeOperator) -> LatticeOperator {
        let (a, b) = (self.clone(), other.clone());
        Self::new(format!("({} + {})", self.name, other.name), move |s| a.apply_state(s).plus(&b.apply_state(s)))
    }

    pub fn minus(&self, other: &LatticeOperator) -> LatticeOperator {
        let (a, b) = (self.clone(), other.clone());
        Self::new(format!("({} - {})", self.name, other.name), move |s| a.apply_state(s).minus(&b.apply_state(s)))
    }

    pub fn scale(&self, c: &Rational) -> LatticeOperator {
        self.scale_poly(&OmegaPoly::constant(c.clone()))
    }

    pub fn scale_poly(&self, c: &OmegaPoly) -> LatticeOperator {
        let (a, c2) = (self.clone(), c.clone());
        Self::new(format!("({c})·{}", self.name), move |s| a.apply_state(s).scale_poly(&c2))
    }

    /// The product self ∘ other: `other` acts first.
    pub fn compose(&self, other: &LatticeOperator) -> LatticeOperator {
        let (a, b) = (self.clone(), other.clone());
        Self::new(format!("{}{}", self.name, other.name), move |s| a.apply(&b.apply_state(s)))
    }

    /// [A, B] = AB − BA.
    pub fn commutator(&self, other: &LatticeOperator) -> LatticeOperator {
        self.compose(other)
            .minus(&other.compose(self))
            .with_name(format!("[{}, {}]", self.name, other.name))
    }

    /// {A, B} = AB + BA.
    pub fn anticommutator(&self, other: &LatticeOperator) -> LatticeOperator {
        self.compose(other)
            .plus(&other.compose(self))
            .with_name(format!("{{{}, {}}}", self.name, other.name))
    }

    /// Symmetrized triple product {A, B, C}.
    pub fn triple(a: &LatticeOperator, b: &LatticeOperator, c: &LatticeOperator, conv: TripleConvention) -> LatticeOperator {
        let orders: Vec<[&LatticeOperator; 3]> = match conv {
            TripleConvention::Six => vec![[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]],
            TripleConvention::Cyclic => vec![[a, b, c], [b, c, a], [c, a, b]],
        };
        orders
            .into_iter()
            .map(|[x, y, z]| x.compose(&y.compose(z)))
            .reduce(|acc, t| acc.plus(&t))
            .expect("at least one ordering")
            .with_name(format!("{{{}, {}, {}}}", a.name, b.name, c.name))
    }

    /// Σ cᵢ·Opᵢ.
    pub fn linear_combination(terms: &[(Rational, &LatticeOperator)]) -> LatticeOperator {
        terms
            .iter()
            .map(|(c, op)| op.scale(c))
            .reduce(|acc, t| acc.plus(&t))
            .unwrap_or_else(Self::zero)
    }
}

impl fmt::Debug for LatticeOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticeOperator").field("name", &self.name).finish()
    }
}
