use super::{partial, Coefficient, DiffOpError, DiffOperator};
use crate::model::SystemParams;
use crate::numcore::Jet;

/// The commuting operators H, L₁, L₂, L₃ with the quantum corrections included.
#[derive(Clone, Debug)]
pub struct Tower {
    pub h: DiffOperator,
    pub l1: DiffOperator,
    pub l2: DiffOperator,
    pub l3: DiffOperator,
}

impl Tower {
    /// H for i = 0, Lᵢ otherwise.
    pub fn get(&self, i: usize) -> &DiffOperator {
        match i {
            0 => &self.h,
            1 => &self.l1,
            2 => &self.l2,
            3 => &self.l3,
            _ => panic!("tower index {i} out of range 0..=3"),
        }
    }
}

fn sin_k(v: &Jet, k: f64) -> Jet {
    v.scale(k).sin()
}

fn cos_k(v: &Jet, k: f64) -> Jet {
    v.scale(k).cos()
}

/// L₃ = ∂θ₃² + β₃/cos²(k₃θ₃) + β₄/sin²(k₃θ₃)
/// L₂ = ∂θ₂² + k₂cot(k₂θ₂)∂θ₂ + β₂/cos²(k₂θ₂) + L₃/sin²(k₂θ₂)
/// L₁ = ∂θ₁² + 2k₁cot(k₁θ₁)∂θ₁ + β₁/cos²(k₁θ₁) + (L₂ + (k₁²−k₂²)/4)/sin²(k₁θ₁)
/// H  = ∂r² + (3/r)∂r − ω²r² + (L₁ + 1 − k₁²)/r²
pub fn build_tower(params: &SystemParams) -> Result<Tower, DiffOpError> {
    let w = params.omega_value()?.to_f64();
    let k1 = params.k(1).to_f64();
    let k2 = params.k(2).to_f64();
    let k3 = params.k(3).to_f64();
    let b = [1, 2, 3, 4].map(|i| params.beta(i).to_f64());

    let l3 = partial(3, 2).plus(&DiffOperator::zero().with_term(
        [0; 4],
        Coefficient::new("β₃/cos²(k₃θ₃) + β₄/sin²(k₃θ₃)", move |v| {
            let c = cos_k(&v[3], k3).powi(2).recip()?.scale(b[2]);
            let s = sin_k(&v[3], k3).powi(2).recip()?.scale(b[3]);
            Ok(c + s)
        }),
    ));

    let inv_sin2_2 = Coefficient::new("1/sin²(k₂θ₂)", move |v| sin_k(&v[2], k2).powi(2).recip());
    let l2 = partial(2, 2)
        .with_term([0, 0, 1, 0], Coefficient::new("k₂cot(k₂θ₂)", move |v| Ok(v[2].scale(k2).cot()?.scale(k2))))
        .with_term(
            [0; 4],
            Coefficient::new("β₂/cos²(k₂θ₂)", move |v| Ok(cos_k(&v[2], k2).powi(2).recip()?.scale(b[1]))),
        )
        .plus(&l3.premultiply(&inv_sin2_2));

    let inv_sin2_1 = Coefficient::new("1/sin²(k₁θ₁)", move |v| sin_k(&v[1], k1).powi(2).recip());
    let shift = (k1 * k1 - k2 * k2) / 4.0;
    let l1 = partial(1, 2)
        .with_term([0, 1, 0, 0], Coefficient::new("2k₁cot(k₁θ₁)", move |v| Ok(v[1].scale(k1).cot()?.scale(2.0 * k1))))
        .with_term(
            [0; 4],
            Coefficient::new("β₁/cos²(k₁θ₁) + (k₁²−k₂²)/(4sin²(k₁θ₁))", move |v| {
                let c = cos_k(&v[1], k1).powi(2).recip()?.scale(b[0]);
                let s = sin_k(&v[1], k1).powi(2).recip()?.scale(shift);
                Ok(c + s)
            }),
        )
        .plus(&l2.premultiply(&inv_sin2_1));

    let inv_r2 = Coefficient::new("1/r²", |v| v[0].powi(2).recip());
    let h = partial(0, 2)
        .with_term([1, 0, 0, 0], Coefficient::new("3/r", |v| Ok(v[0].recip()?.scale(3.0))))
        .with_term(
            [0; 4],
            Coefficient::new("−ω²r² + (1−k₁²)/r²", move |v| {
                let r2 = v[0].powi(2);
                Ok(r2.scale(-w * w) + r2.recip()?.scale(1.0 - k1 * k1))
            }),
        )
        .plus(&l1.premultiply(&inv_r2));

    Ok(Tower { h, l1, l2, l3 })
}
