use super::{Coefficient, DiffOpError, DiffOperator};
use crate::model::{AngularSlotGauge, FactorLabels, SystemParams};
use crate::numcore::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// K₀^{±A₀} = (1∓A₀)/r ∂r + (2n₀+A₀+1)ω + (1−A₀²)/r².
pub fn radial_ladder(params: &SystemParams, n0: u32, a0: &Rational, sign: Sign) -> Result<DiffOperator, DiffOpError> {
    let w = params.omega_value()?.to_f64();
    let a = a0.to_f64();
    let d1 = match sign {
        Sign::Plus => 1.0 - a,
        Sign::Minus => 1.0 + a,
    };
    let c0 = (2.0 * f64::from(n0) + a + 1.0) * w;
    let c2 = 1.0 - a * a;
    Ok(DiffOperator::zero()
        .with_term([1, 0, 0, 0], Coefficient::new(format!("{d1}/r"), move |v| Ok(v[0].recip()?.scale(d1))))
        .with_term(
            [0; 4],
            Coefficient::new(format!("{c0} + {c2}/r²"), move |v| Ok(v[0].powi(2).recip()?.scale(c2).add_scalar(c0))),
        ))
}

fn angle_index(gauge: &AngularSlotGauge) -> [u8; 4] {
    let mut mu = [0u8; 4];
    mu[gauge.slot] = 1;
    mu
}

/// J^± on the slot angle θ, with N = 2n+a+b+1:
/// J⁺ = −(N+1)sin(2kθ)/(2k) ∂θ − ½[(N+1)(N+1−c−d)cos(2kθ) − (N+1)(c−d) + a² − b²],
/// J⁻ = (N−1)sin(2kθ)/(2k) ∂θ − ½[(N−1)(N−1+c+d)cos(2kθ) + (N−1)(c−d) + a² − b²].
pub fn jacobi_ladder(gauge: &AngularSlotGauge, n: u32, sign: Sign) -> DiffOperator {
    let big_n = gauge.big_n(n);
    let one = Rational::one();
    let (m, cs) = match sign {
        Sign::Plus => (&big_n + &one, -(&gauge.c + &gauge.d)),
        Sign::Minus => (&big_n - &one, &gauge.c + &gauge.d),
    };
    let k = gauge.k.to_f64();
    let half = Rational::half();
    let d1 = match sign {
        Sign::Plus => -m.to_f64() / (2.0 * k),
        Sign::Minus => m.to_f64() / (2.0 * k),
    };
    let cos_coef = -(&half * &m * (&m + &cs)).to_f64();
    let cd = &gauge.c - &gauge.d;
    let shift = match sign {
        Sign::Plus => -(&m * &cd),
        Sign::Minus => &m * &cd,
    };
    let cst = -(&half * (shift + gauge.a.square() - gauge.b.square())).to_f64();
    let s = gauge.slot;
    DiffOperator::zero()
        .with_term(
            angle_index(gauge),
            Coefficient::new(format!("{d1}·sin(2kθ{s})"), move |v| Ok(v[s].scale(2.0 * k).sin().scale(d1))),
        )
        .with_term(
            [0; 4],
            Coefficient::new(format!("{cos_coef}·cos(2kθ{s}) + {cst}"), move |v| {
                Ok(v[s].scale(2.0 * k).cos().scale(cos_coef).add_scalar(cst))
            }),
        )
}

/// K^{±a} on the slot angle θ:
/// K⁺ = −(1−a)cos/(k sin) ∂θ − 2(n(n+a+b+1)+a(a+b)) − (1−a)(a+c+b+d) − (1−a)(a−c)/sin²,
/// K⁻ = −(1+a)cos/(k sin) ∂θ − 2n(n+a+b+1) − (1+a)(a+c+b+d) + (1+a)(a+c)/sin².
pub fn index_ladder(gauge: &AngularSlotGauge, n: u32, sign: Sign) -> DiffOperator {
    let (a, b, c, d) = (&gauge.a, &gauge.b, &gauge.c, &gauge.d);
    let n = Rational::from(n);
    let one = Rational::one();
    let two = Rational::int(2);
    let nn = &n * (&n + a + b + 1);
    let total = a + c + b + d;
    let (f, cst, inv_sin2) = match sign {
        Sign::Plus => {
            let f = &one - a;
            let cst = -(&two * (&nn + a * (a + b)) + &f * &total);
            let s2 = -(&f * (a - c));
            (f, cst, s2)
        }
        Sign::Minus => {
            let f = &one + a;
            let cst = -(&two * &nn + &f * &total);
            let s2 = &f * (a + c);
            (f, cst, s2)
        }
    };
    let k = gauge.k.to_f64();
    let d1 = -f.to_f64() / k;
    let (cst, inv_sin2) = (cst.to_f64(), inv_sin2.to_f64());
    let s = gauge.slot;
    DiffOperator::zero()
        .with_term(
            angle_index(gauge),
            Coefficient::new(format!("{d1}·cot(kθ{s})"), move |v| Ok(v[s].scale(k).cot()?.scale(d1))),
        )
        .with_term(
            [0; 4],
            Coefficient::new(format!("{cst} + {inv_sin2}/sin²(kθ{s})"), move |v| {
                Ok(v[s].scale(k).sin().powi(2).recip()?.scale(inv_sin2).add_scalar(cst))
            }),
        )
}

/// The one-variable operators composing Ξᵢ^± on the separated function with
/// the given labels, in application order, with parameters advanced per step.
///
/// Ξᵢ⁺ applies qᵢ raising J steps on slot i and then pᵢ lowering steps on
/// slot i−1 (radial K₀⁻ for i = 1, index-raising K^{−a} otherwise); Ξᵢ⁻ is the
/// mirror image. A lowering step taken at degree 0 annihilates its input, so
/// the list stops there.
pub fn xi_chain(
    params: &SystemParams,
    i: usize,
    sign: Sign,
    labels: &FactorLabels,
) -> Result<Vec<DiffOperator>, DiffOpError> {
    let (p, q) = params.ratio(i);
    let mut ops = Vec::new();
    let gauge = labels.gauge(params, i);
    let ni = labels.n[i];
    for j in 0..q {
        match sign {
            Sign::Plus => ops.push(jacobi_ladder(&gauge, ni + j, Sign::Plus)),
            Sign::Minus => {
                ops.push(jacobi_ladder(&gauge, ni - j, Sign::Minus));
                if ni == j {
                    return Ok(ops);
                }
            }
        }
    }
    let m = labels.n[i - 1];
    let two = Rational::int(2);
    for j in 0..p {
        let shift = &two * Rational::from(j);
        let (n, lowering) = match sign {
            Sign::Plus => (m - j, true),
            Sign::Minus => (m + j, false),
        };
        let op = if i == 1 {
            let a0 = if lowering { &labels.radial + &shift } else { &labels.radial - &shift };
            radial_ladder(params, n, &a0, sign.flip())?
        } else {
            let g = labels.gauge(params, i - 1);
            let a = if lowering { &g.a + &shift } else { &g.a - &shift };
            index_ladder(&g.with_a(a), n, sign.flip())
        };
        ops.push(op);
        if lowering && n == 0 {
            break;
        }
    }
    Ok(ops)
}
