use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use super::NumError;

/// Number of jet variables: (r, θ₁, θ₂, θ₃).
pub const NVARS: usize = 4;

/// Highest supported truncation order.
pub const MAX_ORDER: usize = 12;

/// Default truncation order for wavefunction jets.
pub const DEFAULT_ORDER: usize = 6;

/// Multi-index of derivative orders in (r, θ₁, θ₂, θ₃).
pub type MultiIndex = [u8; NVARS];

pub fn degree(mu: &MultiIndex) -> usize {
    mu.iter().map(|&m| m as usize).sum()
}

/// μ! = Π μᵢ!.
pub fn multi_factorial(mu: &MultiIndex) -> f64 {
    mu.iter().map(|&m| (1..=m as u32).product::<u32>() as f64).product()
}

pub fn unit(var: usize) -> MultiIndex {
    let mut mu = [0; NVARS];
    mu[var] = 1;
    mu
}

/// Number of coefficients of a jet of the given order, C(order + 4, 4).
pub fn jet_len(order: usize) -> usize {
    (1..=NVARS).fold(1, |acc, i| acc * (order + i) / i)
}

/// Monomials listed degree by degree, so that the table of any order is a
/// prefix of the table of every higher order. Products are sorted by the
/// degree of their result for the same reason.
struct Table {
    monomials: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
    products: Vec<(u32, u32, u32)>,
    product_end: Vec<usize>,
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut monomials = Vec::with_capacity(jet_len(MAX_ORDER));
        for d in 0..=MAX_ORDER {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    for c in (0..=d - a - b).rev() {
                        monomials.push([a as u8, b as u8, c as u8, (d - a - b - c) as u8]);
                    }
                }
            }
        }
        let index: HashMap<MultiIndex, usize> =
            monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut by_degree: Vec<Vec<(u32, u32, u32)>> = vec![Vec::new(); MAX_ORDER + 1];
        for (i, mi) in monomials.iter().enumerate() {
            let di = degree(mi);
            for (j, mj) in monomials.iter().enumerate() {
                if di + degree(mj) > MAX_ORDER {
                    continue;
                }
                let mut s = *mi;
                for v in 0..NVARS {
                    s[v] += mj[v];
                }
                by_degree[di + degree(mj)].push((i as u32, j as u32, index[&s] as u32));
            }
        }
        let mut products = Vec::new();
        let mut product_end = Vec::new();
        for block in by_degree {
            products.extend(block);
            product_end.push(products.len());
        }
        Table { monomials, index, products, product_end }
    })
}

/// Truncated Taylor expansion of a function of (r, θ₁, θ₂, θ₃) at a base point.
///
/// Coefficients are Taylor coefficients, so the partial derivative with
/// multi-index μ is `μ! · coeff(μ)`. Arithmetic truncates at `order`.
#[derive(Clone, PartialEq)]
pub struct Jet {
    base: [f64; NVARS],
    order: usize,
    coeffs: Vec<f64>,
}

impl Jet {
    fn check_order(order: usize) -> Result<(), NumError> {
        if order > MAX_ORDER {
            Err(NumError::OrderTooHigh { order, max: MAX_ORDER })
        } else {
            Ok(())
        }
    }

    pub fn zero(base: [f64; NVARS], order: usize) -> Result<Self, NumError> {
        Self::check_order(order)?;
        Ok(Jet { base, order, coeffs: vec![0.0; jet_len(order)] })
    }

    pub fn constant(base: [f64; NVARS], order: usize, value: f64) -> Result<Self, NumError> {
        let mut j = Self::zero(base, order)?;
        j.coeffs[0] = value;
        Ok(j)
    }

    /// The coordinate function `x_var` expanded at `base`.
    pub fn variable(base: [f64; NVARS], order: usize, var: usize) -> Result<Self, NumError> {
        let mut j = Self::constant(base, order, base[var])?;
        if order > 0 {
            j.coeffs[1 + var] = 1.0;
        }
        Ok(j)
    }

    /// Builds a jet from Taylor coefficients listed in [`Jet::monomials`] order.
    pub fn from_coeffs(base: [f64; NVARS], order: usize, coeffs: Vec<f64>) -> Result<Self, NumError> {
        Self::check_order(order)?;
        if coeffs.len() != jet_len(order) {
            return Err(NumError::Shape { expected: jet_len(order), got: coeffs.len() });
        }
        Ok(Jet { base, order, coeffs })
    }

    /// The multi-indices of a jet of this order, in storage order.
    pub fn monomials(order: usize) -> &'static [MultiIndex] {
        &table().monomials[..jet_len(order.min(MAX_ORDER))]
    }

    /// Same base point and order, with every coefficient replaced by `value`'s constant term.
    pub fn constant_like(&self, value: f64) -> Jet {
        let mut coeffs = vec![0.0; self.coeffs.len()];
        coeffs[0] = value;
        Jet { base: self.base, order: self.order, coeffs }
    }

    pub fn base(&self) -> [f64; NVARS] {
        self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Taylor coefficient of μ; zero beyond the truncation order.
    pub fn coeff(&self, mu: &MultiIndex) -> f64 {
        if degree(mu) > self.order {
            return 0.0;
        }
        self.coeffs[table().index[mu]]
    }

    /// The partial derivative ∂^μ at the base point.
    pub fn derivative(&self, mu: &MultiIndex) -> f64 {
        multi_factorial(mu) * self.coeff(mu)
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Drops all terms above `order`.
    pub fn truncate(&self, order: usize) -> Result<Jet, NumError> {
        if order > self.order {
            return Err(NumError::InsufficientOrder { have: self.order, need: order });
        }
        Ok(Jet { base: self.base, order, coeffs: self.coeffs[..jet_len(order)].to_vec() })
    }

    /// The jet of ∂^μ f, of order `self.order − |μ|`.
    pub fn partial(&self, mu: &MultiIndex) -> Result<Jet, NumError> {
        let d = degree(mu);
        if d > self.order {
            return Err(NumError::InsufficientOrder { have: self.order, need: d });
        }
        let t = table();
        let order = self.order - d;
        let coeffs = t.monomials[..jet_len(order)]
            .iter()
            .map(|alpha| {
                let mut s = *alpha;
                let mut factor = 1.0;
                for v in 0..NVARS {
                    for j in 1..=mu[v] {
                        factor *= (alpha[v] + j) as f64;
                    }
                    s[v] += mu[v];
                }
                factor * self.coeffs[t.index[&s]]
            })
            .collect();
        Ok(Jet { base: self.base, order, coeffs })
    }

    fn check_compatible(&self, other: &Jet) -> Result<(), NumError> {
        if self.order != other.order || self.base != other.base {
            return Err(NumError::JetMismatch {
                left: (self.base, self.order),
                right: (other.base, other.order),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet, NumError> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Jet { base: self.base, order: self.order, coeffs })
    }

    pub fn try_sub(&self, other: &Jet) -> Result<Jet, NumError> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Jet { base: self.base, order: self.order, coeffs })
    }

    /// Truncated Cauchy product.
    pub fn try_mul(&self, other: &Jet) -> Result<Jet, NumError> {
        self.check_compatible(other)?;
        let t = table();
        let mut out = vec![0.0; self.coeffs.len()];
        for &(i, j, k) in &t.products[..t.product_end[self.order]] {
            out[k as usize] += self.coeffs[i as usize] * other.coeffs[j as usize];
        }
        Ok(Jet { base: self.base, order: self.order, coeffs: out })
    }

    pub fn try_div(&self, other: &Jet) -> Result<Jet, NumError> {
        self.check_compatible(other)?;
        self.try_mul(&other.recip()?)
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet { base: self.base, order: self.order, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn add_scalar(&self, c: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Σ cⱼ hʲ with h = self − self(0), by Horner's rule.
    fn compose(&self, c: &[f64]) -> Jet {
        let mut h = self.clone();
        h.coeffs[0] = 0.0;
        let mut acc = self.constant_like(c[self.order]);
        for j in (0..self.order).rev() {
            acc = &acc * &h;
            acc.coeffs[0] += c[j];
        }
        acc
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        let mut c = vec![e; self.order + 1];
        for j in 1..=self.order {
            c[j] = c[j - 1] / j as f64;
        }
        self.compose(&c)
    }

    fn sin_cos_series(&self, shift: usize) -> Vec<f64> {
        let (s, co) = self.value().sin_cos();
        let cycle = [s, co, -s, -co];
        let mut fact = 1.0;
        (0..=self.order)
            .map(|j| {
                if j > 0 {
                    fact *= j as f64;
                }
                cycle[(j + shift) % 4] / fact
            })
            .collect()
    }

    pub fn sin(&self) -> Jet {
        self.compose(&self.sin_cos_series(0))
    }

    pub fn cos(&self) -> Jet {
        self.compose(&self.sin_cos_series(1))
    }

    pub fn ln(&self) -> Result<Jet, NumError> {
        let x = self.value();
        if x <= 0.0 {
            return Err(NumError::Domain { function: "log", value: x });
        }
        let mut c = vec![x.ln(); self.order + 1];
        for j in 1..=self.order {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            c[j] = sign / (j as f64 * x.powi(j as i32));
        }
        Ok(self.compose(&c))
    }

    /// xᵖ for real p. Requires a positive constant term unless p is an integer
    /// (then only x ≠ 0 is needed for negative p).
    pub fn powf(&self, p: f64) -> Result<Jet, NumError> {
        let x = self.value();
        let integral = p.fract() == 0.0;
        if (!integral && x <= 0.0) || (p < 0.0 && x == 0.0) {
            return Err(NumError::Domain { function: "power", value: x });
        }
        if integral && p >= 0.0 && x == 0.0 {
            return Ok(self.powi(p as u32));
        }
        let mut c = Vec::with_capacity(self.order + 1);
        let mut binom = 1.0;
        for j in 0..=self.order {
            if j > 0 {
                binom *= (p - (j - 1) as f64) / j as f64;
            }
            c.push(binom * x.powf(p - j as f64));
        }
        Ok(self.compose(&c))
    }

    pub fn powi(&self, n: u32) -> Jet {
        (0..n).fold(self.constant_like(1.0), |acc, _| &acc * self)
    }

    pub fn sqrt(&self) -> Result<Jet, NumError> {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Result<Jet, NumError> {
        if self.value() == 0.0 {
            return Err(NumError::DivisionByZero);
        }
        self.powf(-1.0)
    }

    /// cos/sin through jet division.
    pub fn cot(&self) -> Result<Jet, NumError> {
        self.cos().try_div(&self.sin())
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("base", &self.base)
            .field("order", &self.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

// The operator forms panic on mismatched base point or order; library code
// only combines jets it built at one point, and the `try_*` forms report it.
impl Add<&Jet> for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.try_add(rhs).expect("jet operands must share base point and order")
    }
}

impl Sub<&Jet> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.try_sub(rhs).expect("jet operands must share base point and order")
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.try_mul(rhs).expect("jet operands must share base point and order")
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

macro_rules! owned_variants {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                self.$m(&rhs)
            }
        }
    )*};
}
owned_variants!(Add add, Sub sub, Mul mul);

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const X0: [f64; 4] = [0.0; 4];

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    fn univariate(j: &Jet) -> Vec<f64> {
        (0..=j.order()).map(|d| j.coeff(&[d as u8, 0, 0, 0])).collect()
    }

    #[test]
    fn table_sizes() {
        assert_eq!(jet_len(0), 1);
        assert_eq!(jet_len(2), 15);
        assert_eq!(jet_len(6), 210);
        for order in 0..=MAX_ORDER {
            assert_eq!(Jet::monomials(order).len(), jet_len(order));
        }
    }

    #[test]
    fn square_of_variable() {
        let x = Jet::variable([2.0, 0.0, 0.0, 0.0], 2, 0).unwrap();
        assert_eq!(univariate(&(&x * &x)), vec![4.0, 4.0, 1.0]);
    }

    #[test]
    fn add_negation_is_zero() {
        let x = Jet::variable([0.3, 0.2, 0.1, 0.4], 3, 1).unwrap().sin();
        assert_eq!((&x + &(-&x)).max_abs(), 0.0);
    }

    #[test]
    fn geometric_series() {
        let x = Jet::variable(X0, 2, 0).unwrap();
        let q = x.constant_like(1.0).try_div(&x.add_scalar(1.0)).unwrap();
        assert_eq!(univariate(&q), vec![1.0, -1.0, 1.0]);
    }

    #[test]
    fn elementary_series() {
        let x = Jet::variable(X0, 3, 0).unwrap();
        let s = univariate(&x.sin());
        for (a, b) in s.iter().zip([0.0, 1.0, 0.0, -1.0 / 6.0]) {
            assert!(close(*a, b));
        }
        let e = univariate(&Jet::variable(X0, 2, 0).unwrap().exp());
        assert_eq!(e, vec![1.0, 1.0, 0.5]);
        let c = Jet::constant(X0, 3, 4.0).unwrap().powf(0.5).unwrap();
        assert_eq!(c.value(), 2.0);
        assert_eq!(c.max_abs(), 2.0);
    }

    #[test]
    fn errors() {
        let z = Jet::variable(X0, 2, 0).unwrap();
        assert!(matches!(z.ln(), Err(NumError::Domain { .. })));
        assert!(matches!(z.recip(), Err(NumError::DivisionByZero)));
        let other = Jet::variable([1.0, 0.0, 0.0, 0.0], 2, 0).unwrap();
        assert!(matches!(z.try_mul(&other), Err(NumError::JetMismatch { .. })));
        assert!(matches!(Jet::zero(X0, MAX_ORDER + 1), Err(NumError::OrderTooHigh { .. })));
    }

    #[test]
    fn partial_of_product() {
        let b = [0.7, 0.3, 0.0, 0.0];
        let r = Jet::variable(b, 4, 0).unwrap();
        let t = Jet::variable(b, 4, 1).unwrap();
        // f = r³ sin t: ∂r ∂t f = 3r² cos t
        let f = &r.powi(3) * &t.sin();
        let d = f.partial(&[1, 1, 0, 0]).unwrap();
        assert_eq!(d.order(), 2);
        assert!(close(d.value(), 3.0 * 0.49 * 0.3f64.cos()));
        assert!(close(f.derivative(&[1, 1, 0, 0]), d.value()));
        // and one further derivative through the partial jet
        assert!(close(d.derivative(&[1, 0, 0, 0]), 6.0 * 0.7 * 0.3f64.cos()));
    }

    #[test]
    fn negative_base_integer_powers() {
        let x = Jet::variable([-2.0, 0.0, 0.0, 0.0], 3, 0).unwrap();
        let a = x.powf(3.0).unwrap();
        let b = x.powi(3);
        for (u, v) in a.coeffs().iter().zip(b.coeffs()) {
            assert!(close(*u, *v));
        }
        let inv = x.recip().unwrap();
        assert!(close(inv.value(), -0.5));
        assert!(close(inv.derivative(&[1, 0, 0, 0]), -0.25));
    }
}
