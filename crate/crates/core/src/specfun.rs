//! Jacobi and Laguerre polynomials by their three-term recurrences, evaluated
//! over any [`PolyArg`]: exact rationals, floats, or jets.

use crate::numcore::{Jet, Rational};

/// Arguments the recurrences can run over.
pub trait PolyArg: Clone {
    fn one_like(&self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    fn add_const(&self, c: &Rational) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
}

impl PolyArg for Rational {
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
    fn add_const(&self, c: &Rational) -> Self {
        self + c
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

impl PolyArg for f64 {
    fn one_like(&self) -> Self {
        1.0
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c.to_f64()
    }
    fn add_const(&self, c: &Rational) -> Self {
        self + c.to_f64()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

impl PolyArg for Jet {
    fn one_like(&self) -> Self {
        self.constant_like(1.0)
    }
    fn scale(&self, c: &Rational) -> Self {
        Jet::scale(self, c.to_f64())
    }
    fn add_const(&self, c: &Rational) -> Self {
        Jet::add_scalar(self, c.to_f64())
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

/// P_n^{(a,b)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiSpec {
    pub n: u32,
    pub a: Rational,
    pub b: Rational,
}

/// L_n^{(α)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaguerreSpec {
    pub n: u32,
    pub alpha: Rational,
}

impl JacobiSpec {
    pub fn new(n: u32, a: Rational, b: Rational) -> Self {
        JacobiSpec { n, a, b }
    }

    pub fn eval<T: PolyArg>(&self, x: &T) -> T {
        jacobi(self.n, &self.a, &self.b, x)
    }
}

impl LaguerreSpec {
    pub fn new(n: u32, alpha: Rational) -> Self {
        LaguerreSpec { n, alpha }
    }

    pub fn eval<T: PolyArg>(&self, x: &T) -> T {
        laguerre(self.n, &self.alpha, x)
    }
}

/// Jacobi polynomial P_n^{(a,b)}(x).
///
/// For m ≥ 2,
/// 2m(m+a+b)(2m+a+b−2)·P_m = (2m+a+b−1)[(2m+a+b)(2m+a+b−2)x + a²−b²]·P_{m−1}
///                           − 2(m+a−1)(m+b−1)(2m+a+b)·P_{m−2}.
///
/// # Panics
/// If a recurrence denominator vanishes, which needs a + b to be a negative
/// integer ≤ −2; the model only produces positive parameters.
pub fn jacobi<T: PolyArg>(n: u32, a: &Rational, b: &Rational, x: &T) -> T {
    let one = x.one_like();
    if n == 0 {
        return one;
    }
    let two = Rational::int(2);
    let ab = a + b;
    let p1 = x.scale(&((&ab + &two) / &two)).add_const(&((a - b) / &two));
    if n == 1 {
        return p1;
    }
    let diff_sq = a.square() - b.square();
    let (mut prev, mut cur) = (one, p1);
    for m in 2..=n {
        let next = jacobi_step(m, a, b, &ab, &diff_sq, x, &prev, &cur);
        prev = cur;
        cur = next;
    }
    cur
}

#[allow(clippy::too_many_arguments)]
fn jacobi_step<T: PolyArg>(
    m: u32,
    a: &Rational,
    b: &Rational,
    ab: &Rational,
    diff_sq: &Rational,
    x: &T,
    prev: &T,
    cur: &T,
) -> T {
    let m = Rational::from(m);
    let two = Rational::int(2);
    let s = &two * &m + ab;
    let denom = &two * &m * (&m + ab) * (&s - &two);
    assert!(!denom.is_zero(), "degenerate Jacobi recurrence for a={a}, b={b}");
    let lin = (&s - 1) * &s * (&s - &two);
    let cst = (&s - 1) * diff_sq;
    let back = &two * (&m + a - 1) * (&m + b - 1) * &s;
    let t = x.scale(&lin).add_const(&cst).times(cur).minus(&prev.scale(&back));
    t.scale(&denom.recip().expect("nonzero"))
}

/// Laguerre polynomial L_n^{(α)}(x), using
/// m·L_m = (2m−1+α−x)·L_{m−1} − (m−1+α)·L_{m−2}.
pub fn laguerre<T: PolyArg>(n: u32, alpha: &Rational, x: &T) -> T {
    let one = x.one_like();
    if n == 0 {
        return one;
    }
    let mut prev = one.clone();
    let mut cur = one.add_const(alpha).minus(x);
    for m in 2..=n {
        let mq = Rational::from(m);
        let lin = one.scale(&(&mq * 2 - 1 + alpha)).minus(x);
        let next = lin.times(&cur).minus(&prev.scale(&(&mq - 1 + alpha))).scale(&mq.recip().expect("m ≥ 2"));
        prev = cur;
        cur = next;
    }
    cur
}
