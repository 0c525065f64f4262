//! Linear differential operators in (r, θ₁, θ₂, θ₃) as maps from multi-indices
//! to coefficient functions, applied through jets.
//!
//! An operator of order k sends a jet of order m to a jet of order m − k, so
//! operators chain as long as the input jet has enough order. [`DiffOperator::compose`]
//! expands a product into plain terms by the Leibniz rule, differentiating the
//! inner coefficients through their jets.

mod example;
mod ladders;
mod tower;

pub use example::{example_l1_plus, example_l1_plus_groups, spectral_operator, ExampleGroup, SpectralFactor};
pub use ladders::{index_ladder, jacobi_ladder, radial_ladder, xi_chain, Sign};
pub use tower::{build_tower, Tower};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::model::ModelError;
use crate::numcore::{degree, Jet, MultiIndex, NumError, MAX_ORDER, NVARS};

pub use crate::model::Point;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiffOpError {
    #[error("operator of order {op_order} needs an input jet of order {need}, got {have}")]
    InsufficientOrder { op_order: usize, need: usize, have: usize },
    #[error("coefficient {tag} is not evaluable here: {source}")]
    Coefficient { tag: String, source: NumError },
    #[error("this operator is only defined for k = (2,1,1)")]
    RequiresK211,
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

type CoeffFn = dyn Fn(&Point, usize) -> Result<Jet, NumError> + Send + Sync;

/// A coefficient function with a readable tag for reports.
#[derive(Clone)]
pub struct Coefficient {
    tag: String,
    eval: Arc<CoeffFn>,
}

impl Coefficient {
    /// A coefficient given as a jet expression in the coordinate jets (r, θ₁, θ₂, θ₃).
    pub fn new<F>(tag: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[Jet; NVARS]) -> Result<Jet, NumError> + Send + Sync + 'static,
    {
        Coefficient {
            tag: tag.into(),
            eval: Arc::new(move |p: &Point, order| f(&p.variables(order)?)),
        }
    }

    pub fn constant(c: f64) -> Self {
        Coefficient {
            tag: format!("{c}"),
            eval: Arc::new(move |p: &Point, order| Jet::constant(p.coords(), order, c)),
        }
    }

    /// A coefficient that builds its own jet of the requested order at a point.
    pub fn from_point_fn<F>(tag: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Point, usize) -> Result<Jet, NumError> + Send + Sync + 'static,
    {
        Coefficient { tag: tag.into(), eval: Arc::new(f) }
    }

    fn raw(tag: String, eval: Arc<CoeffFn>) -> Self {
        Coefficient { tag, eval }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    /// The coefficient's jet of the given order at `p`.
    pub fn eval(&self, p: &Point, order: usize) -> Result<Jet, DiffOpError> {
        (self.eval)(p, order).map_err(|source| DiffOpError::Coefficient { tag: self.tag.clone(), source })
    }

    fn product(&self, other: &Coefficient) -> Coefficient {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        Coefficient::raw(
            short_tag(format!("({})·({})", self.tag, other.tag)),
            Arc::new(move |p: &Point, m| f(p, m)?.try_mul(&g(p, m)?)),
        )
    }

    fn sum(parts: Vec<Coefficient>) -> Coefficient {
        if parts.len() == 1 {
            return parts.into_iter().next().expect("one part");
        }
        let tag = short_tag(parts.iter().map(|c| c.tag.as_str()).collect::<Vec<_>>().join(" + "));
        let fs: Vec<Arc<CoeffFn>> = parts.into_iter().map(|c| c.eval).collect();
        Coefficient::raw(
            tag,
            Arc::new(move |p: &Point, m| {
                let mut acc = fs[0](p, m)?;
                for f in &fs[1..] {
                    acc = acc.try_add(&f(p, m)?)?;
                }
                Ok(acc)
            }),
        )
    }

    fn scaled(&self, c: f64) -> Coefficient {
        let f = self.eval.clone();
        Coefficient::raw(short_tag(format!("{c}·({})", self.tag)), Arc::new(move |p: &Point, m| Ok(f(p, m)?.scale(c))))
    }

    /// C(μ,ρ)·∂^{σ}(self)·(outer), with `outer` left unchanged.
    fn leibniz_piece(outer: &Coefficient, inner: &Coefficient, sigma: MultiIndex, binom: f64) -> Coefficient {
        let (f, g) = (outer.eval.clone(), inner.eval.clone());
        let ds = degree(&sigma);
        let tag = if ds == 0 {
            format!("({})·({})", outer.tag, inner.tag)
        } else {
            format!("({})·∂{:?}({})", outer.tag, sigma, inner.tag)
        };
        Coefficient::raw(
            short_tag(tag),
            Arc::new(move |p: &Point, m| {
                let need = m + ds;
                if need > MAX_ORDER {
                    return Err(NumError::OrderTooHigh { order: need, max: MAX_ORDER });
                }
                let dg = g(p, need)?.partial(&sigma)?;
                Ok(f(p, m)?.try_mul(&dg)?.scale(binom))
            }),
        )
    }
}

fn short_tag(s: String) -> String {
    if s.chars().count() > 96 {
        "composite".to_string()
    } else {
        s
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coefficient({})", self.tag)
    }
}

/// Σ_μ c_μ ∂^μ with one coefficient per multi-index.
#[derive(Clone, Default)]
pub struct DiffOperator {
    terms: BTreeMap<MultiIndex, Coefficient>,
}

impl DiffOperator {
    pub fn zero() -> Self {
        DiffOperator::default()
    }

    pub fn identity() -> Self {
        Self::zero().with_term([0; NVARS], Coefficient::constant(1.0))
    }

    /// c·(identity) for a constant c.
    pub fn multiple_of_identity(c: f64) -> Self {
        Self::zero().with_term([0; NVARS], Coefficient::constant(c))
    }

    /// Adds `coeff · ∂^mu`, merging with an existing term of the same multi-index.
    pub fn with_term(mut self, mu: MultiIndex, coeff: Coefficient) -> Self {
        self.add_term(mu, coeff);
        self
    }

    fn add_term(&mut self, mu: MultiIndex, coeff: Coefficient) {
        let merged = match self.terms.remove(&mu) {
            Some(old) => Coefficient::sum(vec![old, coeff]),
            None => coeff,
        };
        self.terms.insert(mu, merged);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Coefficient)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_order(&self) -> usize {
        self.terms.keys().map(degree).max().unwrap_or(0)
    }

    pub fn plus(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (mu, c) in &other.terms {
            out.add_term(*mu, c.clone());
        }
        out
    }

    pub fn scale(&self, c: f64) -> DiffOperator {
        DiffOperator { terms: self.terms.iter().map(|(mu, x)| (*mu, x.scaled(c))).collect() }
    }

    pub fn minus(&self, other: &DiffOperator) -> DiffOperator {
        self.plus(&other.scale(-1.0))
    }

    /// f·(self), multiplying every coefficient on the left by `f`.
    pub fn premultiply(&self, f: &Coefficient) -> DiffOperator {
        DiffOperator { terms: self.terms.iter().map(|(mu, x)| (*mu, f.product(x))).collect() }
    }

    /// The product self∘inner as plain terms:
    /// a∂^μ ∘ b∂^ν = Σ_{ρ≤μ} C(μ,ρ) a (∂^{μ−ρ}b) ∂^{ρ+ν}.
    pub fn compose(&self, inner: &DiffOperator) -> DiffOperator {
        let mut out = DiffOperator::zero();
        for (mu, a) in &self.terms {
            for rho in sub_indices(mu) {
                let mut sigma = [0u8; NVARS];
                let mut binom = 1.0;
                for v in 0..NVARS {
                    sigma[v] = mu[v] - rho[v];
                    binom *= binomial(mu[v], rho[v]);
                }
                for (nu, b) in &inner.terms {
                    let mut target = *nu;
                    for v in 0..NVARS {
                        target[v] += rho[v];
                    }
                    out.add_term(target, Coefficient::leibniz_piece(a, b, sigma, binom));
                }
            }
        }
        out
    }

    /// Commutator [self, other] as plain terms.
    pub fn commutator(&self, other: &DiffOperator) -> DiffOperator {
        self.compose(other).minus(&other.compose(self))
    }

    /// Coefficient jets of every term at `p`.
    pub fn coefficients_at(&self, p: &Point, order: usize) -> Result<Vec<(MultiIndex, Jet)>, DiffOpError> {
        self.terms.iter().map(|(mu, c)| Ok((*mu, c.eval(p, order)?))).collect()
    }

    /// Applies the operator to the jet of f at a point, returning a jet of
    /// order `f.order() − max_order`, together with Σ|c_μ ∂^μ f| at the point
    /// as a magnitude scale for relative residuals.
    pub fn apply_jet_scaled(&self, f: &Jet) -> Result<(Jet, f64), DiffOpError> {
        let k = self.max_order();
        if f.order() < k {
            return Err(DiffOpError::InsufficientOrder { op_order: k, need: k, have: f.order() });
        }
        let out_order = f.order() - k;
        let base = f.base();
        let p = Point { r: base[0], theta: [base[1], base[2], base[3]] };
        let mut acc = Jet::zero(base, out_order)?;
        let mut scale = 0.0;
        for (mu, c) in &self.terms {
            let term = c.eval(&p, out_order)?.try_mul(&f.partial(mu)?.truncate(out_order)?)?;
            scale += term.value().abs();
            acc = acc.try_add(&term)?;
        }
        Ok((acc, scale))
    }

    pub fn apply_jet(&self, f: &Jet) -> Result<Jet, DiffOpError> {
        Ok(self.apply_jet_scaled(f)?.0)
    }

    /// Applies the operator to `f` at `p`, asking `f` for a jet of order
    /// `out_order + max_order`.
    pub fn apply<F, E>(&self, f: F, p: &Point, out_order: usize) -> Result<Jet, DiffOpError>
    where
        F: Fn(&Point, usize) -> Result<Jet, E>,
        DiffOpError: From<E>,
    {
        let need = out_order + self.max_order();
        let fj = f(p, need)?;
        if fj.order() < need {
            return Err(DiffOpError::InsufficientOrder { op_order: self.max_order(), need, have: fj.order() });
        }
        self.apply_jet(&fj.truncate(need)?)
    }
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_map();
        for (mu, c) in &self.terms {
            list.entry(mu, &c.tag);
        }
        list.finish()
    }
}

/// Applies `ops[0]` first, then `ops[1]`, and so on.
pub fn apply_chain(ops: &[DiffOperator], f: &Jet) -> Result<Jet, DiffOpError> {
    let mut cur = f.clone();
    for op in ops {
        cur = op.apply_jet(&cur)?;
    }
    Ok(cur)
}

fn sub_indices(mu: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![[0u8; NVARS]];
    for v in 0..NVARS {
        let mut next = Vec::new();
        for base in &out {
            for j in 0..=mu[v] {
                let mut x = *base;
                x[v] = j;
                next.push(x);
            }
        }
        out = next;
    }
    out
}

fn binomial(n: u8, k: u8) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// ∂ with respect to variable `var` (0 = r, 1..3 = θᵢ), raised to `power`.
pub fn partial(var: usize, power: u8) -> DiffOperator {
    let mut mu = [0u8; NVARS];
    mu[var] = power;
    DiffOperator::zero().with_term(mu, Coefficient::constant(1.0))
}
