use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Rational;

/// Exact polynomial in the formal frequency ω with rational coefficients.
///
/// `coeffs[i]` multiplies ωⁱ. Trailing zeros are never stored, so the zero
/// polynomial has an empty coefficient list and structural equality is
/// polynomial equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct OmegaPoly {
    coeffs: Vec<Rational>,
}

impl OmegaPoly {
    pub fn zero() -> Self {
        OmegaPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial ω.
    pub fn omega() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        OmegaPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        OmegaPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, omega: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * omega + c)
    }

    pub fn eval_f64(&self, omega: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * omega + c.to_f64())
    }

    /// Largest absolute coefficient, as a float; a size measure for residuals.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl From<Vec<Rational>> for OmegaPoly {
    fn from(coeffs: Vec<Rational>) -> Self {
        Self::from_coeffs(coeffs)
    }
}

impl From<OmegaPoly> for Vec<Rational> {
    fn from(p: OmegaPoly) -> Self {
        p.coeffs
    }
}

impl From<Rational> for OmegaPoly {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl Add<&OmegaPoly> for &OmegaPoly {
    type Output = OmegaPoly;
    fn add(self, rhs: &OmegaPoly) -> OmegaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        OmegaPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&OmegaPoly> for &OmegaPoly {
    type Output = OmegaPoly;
    fn sub(self, rhs: &OmegaPoly) -> OmegaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        OmegaPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&OmegaPoly> for &OmegaPoly {
    type Output = OmegaPoly;
    fn mul(self, rhs: &OmegaPoly) -> OmegaPoly {
        if self.is_zero() || rhs.is_zero() {
            return OmegaPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        OmegaPoly::from_coeffs(out)
    }
}

impl Mul<&Rational> for &OmegaPoly {
    type Output = OmegaPoly;
    fn mul(self, rhs: &Rational) -> OmegaPoly {
        self.scale(rhs)
    }
}

impl Neg for &OmegaPoly {
    type Output = OmegaPoly;
    fn neg(self) -> OmegaPoly {
        OmegaPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_variants {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<OmegaPoly> for OmegaPoly {
            type Output = OmegaPoly;
            fn $m(self, rhs: OmegaPoly) -> OmegaPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&OmegaPoly> for OmegaPoly {
            type Output = OmegaPoly;
            fn $m(self, rhs: &OmegaPoly) -> OmegaPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<OmegaPoly> for &OmegaPoly {
            type Output = OmegaPoly;
            fn $m(self, rhs: OmegaPoly) -> OmegaPoly {
                self.$m(&rhs)
            }
        }
    )*};
}
owned_variants!(Add add, Sub sub, Mul mul);

impl Neg for OmegaPoly {
    type Output = OmegaPoly;
    fn neg(self) -> OmegaPoly {
        -&self
    }
}

impl fmt::Display for OmegaPoly {
    /// Highest power first, e.g. `4ω^2 - 3/2`, `-12ω`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "ω")?,
                _ => write!(f, "ω^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for OmegaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OmegaPoly({self})")
    }
}

/// Rising factorial x(x+1)···(x+m−1); 1 when m = 0.
pub fn pochhammer(x: &Rational, m: usize) -> Rational {
    (0..m).fold(Rational::one(), |acc, j| acc * (x + Rational::from(j)))
}

/// Falling factorial x(x−1)···(x−m+1); 1 when m = 0.
pub fn falling_factorial(x: &Rational, m: usize) -> Rational {
    (0..m).fold(Rational::one(), |acc, j| acc * (x - Rational::from(j)))
}
