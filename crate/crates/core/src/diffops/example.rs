//! The explicit fifth-order expression stated for L₁⁺ at k = (2,1,1), entered
//! term by term. Each coefficient group multiplies a product of the spectral
//! quantities E, A₀², A₁², which become operators through E → H,
//! A₀² → k₁² − L₁ and A₁² → (k₂² − 4L₂)/(4k₁²).

use super::{build_tower, Coefficient, DiffOpError, DiffOperator};
use crate::model::SystemParams;
use crate::numcore::Jet;

/// Spectral factor standing to the right of a coefficient group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectralFactor {
    E,
    A0Sq,
    A1Sq,
}

/// One group: a low-order operator times a monomial in E, A₀², A₁².
#[derive(Clone, Debug)]
pub struct ExampleGroup {
    pub label: &'static str,
    pub operator: DiffOperator,
    pub factors: Vec<SpectralFactor>,
}

// Shorthands for the coefficient functions of the expression; θ enters only
// as cos 4θ₁ and sin 4θ₁.
fn rp(v: &[Jet; 4], e: i32) -> Result<Jet, crate::numcore::NumError> {
    v[0].powf(f64::from(e))
}

fn c4(v: &[Jet; 4]) -> Jet {
    v[1].scale(4.0).cos()
}

fn s4(v: &[Jet; 4]) -> Jet {
    v[1].scale(4.0).sin()
}

const DR: [u8; 4] = [1, 0, 0, 0];
const DRR: [u8; 4] = [2, 0, 0, 0];
const DT: [u8; 4] = [0, 1, 0, 0];
const DRT: [u8; 4] = [1, 1, 0, 0];
const DRRT: [u8; 4] = [2, 1, 0, 0];
const ONE: [u8; 4] = [0; 4];

fn op(terms: Vec<([u8; 4], Coefficient)>) -> DiffOperator {
    terms.into_iter().fold(DiffOperator::zero(), |acc, (mu, c)| acc.with_term(mu, c))
}

/// The coefficient groups with their spectral factors.
pub fn example_l1_plus_groups(params: &SystemParams) -> Result<Vec<ExampleGroup>, DiffOpError> {
    if !params.is_k([2, 1, 1]) {
        return Err(DiffOpError::RequiresK211);
    }
    let a1sq = params.a(1).square().to_f64();
    use SpectralFactor::*;
    let g = |label, operator, factors| ExampleGroup { label, operator, factors };
    Ok(vec![
        g(
            "A0²A1²",
            op(vec![
                (DR, Coefficient::new("−2/r³", |v| Ok(rp(v, -3)?.scale(-2.0)))),
                (ONE, Coefficient::new("6/r⁴", |v| Ok(rp(v, -4)?.scale(6.0)))),
            ]),
            vec![A0Sq, A1Sq],
        ),
        g(
            "A0⁴",
            op(vec![
                (DR, Coefficient::new("−cos4θ₁/(2r³)", |v| Ok(c4(v) * rp(v, -3)?.scale(-0.5)))),
                (DT, Coefficient::new("sin4θ₁/(4r⁴)", |v| Ok(s4(v) * rp(v, -4)?.scale(0.25)))),
                (ONE, Coefficient::new("(1+5cos4θ₁)/(2r⁴)", |v| Ok(c4(v).scale(5.0).add_scalar(1.0) * rp(v, -4)?.scale(0.5)))),
            ]),
            vec![A0Sq, A0Sq],
        ),
        g(
            "E·A1²",
            op(vec![
                (DR, Coefficient::new("−1/r", |v| Ok(rp(v, -1)?.scale(-1.0)))),
                (ONE, Coefficient::new("2/r²", |v| Ok(rp(v, -2)?.scale(2.0)))),
            ]),
            vec![E, A1Sq],
        ),
        g(
            "E²",
            op(vec![
                (DT, Coefficient::new("sin4θ₁/16", |v| Ok(s4(v).scale(1.0 / 16.0)))),
                (ONE, Coefficient::new("cos4θ₁/4 + 1/8", |v| Ok(c4(v).scale(0.25).add_scalar(0.125)))),
            ]),
            vec![E, E],
        ),
        g(
            "E·A0²",
            op(vec![
                (DR, Coefficient::new("−cos4θ₁/(4r)", |v| Ok(c4(v) * rp(v, -1)?.scale(-0.25)))),
                (DT, Coefficient::new("sin4θ₁/(4r²)", |v| Ok(s4(v) * rp(v, -2)?.scale(0.25)))),
                (ONE, Coefficient::new("(3cos4θ₁+1)/(2r²)", |v| Ok(c4(v).scale(3.0).add_scalar(1.0) * rp(v, -2)?.scale(0.5)))),
            ]),
            vec![E, A0Sq],
        ),
        g(
            "A1²",
            op(vec![
                (DR, Coefficient::new("−10/r³", |v| Ok(rp(v, -3)?.scale(-10.0)))),
                (DRR, Coefficient::new("4/r²", |v| Ok(rp(v, -2)?.scale(4.0)))),
                (ONE, Coefficient::new("−6/r⁴", |v| Ok(rp(v, -4)?.scale(-6.0)))),
            ]),
            vec![A1Sq],
        ),
        g(
            "E",
            op(vec![
                (DRT, Coefficient::new("−sin4θ₁/r", |v| Ok(s4(v) * rp(v, -1)?.scale(-1.0)))),
                (
                    DR,
                    Coefficient::new("−(3cos4θ₁+2−a₁²)/r", move |v| {
                        Ok(c4(v).scale(3.0).add_scalar(2.0 - a1sq) * rp(v, -1)?.scale(-1.0))
                    }),
                ),
                (DT, Coefficient::new("5sin4θ₁/(4r²)", |v| Ok(s4(v) * rp(v, -2)?.scale(1.25)))),
                (
                    ONE,
                    Coefficient::new("(6cos4θ₁+5−4a₁²)/(2r²)", move |v| {
                        Ok(c4(v).scale(6.0).add_scalar(5.0 - 4.0 * a1sq) * rp(v, -2)?.scale(0.5))
                    }),
                ),
            ]),
            vec![E],
        ),
        g(
            "A0²",
            op(vec![
                (DRRT, Coefficient::new("−sin4θ₁/(4r²)", |v| Ok(s4(v) * rp(v, -2)?.scale(-0.25)))),
                (DRT, Coefficient::new("13sin4θ₁/(4r³)", |v| Ok(s4(v) * rp(v, -3)?.scale(3.25)))),
                (DRR, Coefficient::new("−(4cos4θ₁+1)/(2r²)", |v| Ok(c4(v).scale(4.0).add_scalar(1.0) * rp(v, -2)?.scale(-0.5)))),
                (
                    DR,
                    Coefficient::new("(13+27cos4θ₁−4a₁²)/(2r³)", move |v| {
                        Ok(c4(v).scale(27.0).add_scalar(13.0 - 4.0 * a1sq) * rp(v, -3)?.scale(0.5))
                    }),
                ),
                (DT, Coefficient::new("−5sin4θ₁/r⁴", |v| Ok(s4(v) * rp(v, -4)?.scale(-5.0)))),
                (
                    ONE,
                    Coefficient::new("−(25cos4θ₁+20−12a₁²)/(2r⁴)", move |v| {
                        Ok(c4(v).scale(25.0).add_scalar(20.0 - 12.0 * a1sq) * rp(v, -4)?.scale(-0.5))
                    }),
                ),
            ]),
            vec![A0Sq],
        ),
        g(
            "1",
            op(vec![
                (DRRT, Coefficient::new("11sin4θ₁/(4r²)", |v| Ok(s4(v) * rp(v, -2)?.scale(2.75)))),
                (
                    DRR,
                    Coefficient::new("(11−8a₁²+14cos4θ₁)/(2r²)", move |v| {
                        Ok(c4(v).scale(14.0).add_scalar(11.0 - 8.0 * a1sq) * rp(v, -2)?.scale(0.5))
                    }),
                ),
                (DRT, Coefficient::new("−23sin4θ₁/(4r³)", |v| Ok(s4(v) * rp(v, -3)?.scale(-5.75)))),
                (
                    DR,
                    Coefficient::new("−(26cos4θ₁+23−20a₁²)/(2r³)", move |v| {
                        Ok(c4(v).scale(26.0).add_scalar(23.0 - 20.0 * a1sq) * rp(v, -3)?.scale(-0.5))
                    }),
                ),
                (DT, Coefficient::new("−21sin4θ₁/(4r⁴)", |v| Ok(s4(v) * rp(v, -4)?.scale(-5.25)))),
                (
                    ONE,
                    Coefficient::new("−3(10cos4θ₁+7−4a₁²)/(2r⁴)", move |v| {
                        Ok(c4(v).scale(10.0).add_scalar(7.0 - 4.0 * a1sq) * rp(v, -4)?.scale(-1.5))
                    }),
                ),
            ]),
            vec![],
        ),
    ])
}

/// The operator each spectral factor stands for.
pub fn spectral_operator(params: &SystemParams, f: SpectralFactor) -> Result<DiffOperator, DiffOpError> {
    let t = build_tower(params)?;
    let k1sq = params.k(1).square().to_f64();
    let k2sq = params.k(2).square().to_f64();
    Ok(match f {
        SpectralFactor::E => t.h,
        SpectralFactor::A0Sq => DiffOperator::multiple_of_identity(k1sq).minus(&t.l1),
        SpectralFactor::A1Sq => DiffOperator::multiple_of_identity(k2sq).minus(&t.l2.scale(4.0)).scale(1.0 / (4.0 * k1sq)),
    })
}

/// The stated expression with every spectral factor replaced by its
/// operator and the products expanded into plain terms.
pub fn example_l1_plus(params: &SystemParams) -> Result<DiffOperator, DiffOpError> {
    let mut total = DiffOperator::zero();
    for g in example_l1_plus_groups(params)? {
        let mut term = g.operator;
        for f in &g.factors {
            term = term.compose(&spectral_operator(params, *f)?);
        }
        total = total.plus(&term);
    }
    Ok(total)
}
