use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{LatticeAlgebra, LatticeOperator};
use crate::model::{QuantumState, SystemParams};
use crate::numcore::Rational;

/// The restriction of each operator to a window of source states, flattened
/// to one row of (source, target) entries per operator with ω specialized.
pub fn window_rows(ops: &[LatticeOperator], window: &[QuantumState], omega: &Rational) -> Vec<BTreeMap<(QuantumState, QuantumState), Rational>> {
    ops.iter()
        .map(|op| {
            let mut row = BTreeMap::new();
            for s in window {
                for (t, c) in op.apply_state(s).eval_at(omega) {
                    row.insert((*s, t), c);
                }
            }
            row
        })
        .collect()
}

/// Exact rank of a set of sparse rows by Gaussian elimination over ℚ.
pub fn rank<K: Ord + Clone>(rows: &[BTreeMap<K, Rational>]) -> usize {
    let mut basis: Vec<(K, BTreeMap<K, Rational>)> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for (pivot, b) in &basis {
            if let Some(f) = r.get(pivot).cloned() {
                for (key, v) in b {
                    let x = r.get(key).cloned().unwrap_or_default() - &f * v;
                    if x.is_zero() {
                        r.remove(key);
                    } else {
                        r.insert(key.clone(), x);
                    }
                }
            }
        }
        if let Some((pivot, lead)) = r.iter().next().map(|(k, v)| (k.clone(), v.clone())) {
            let inv = lead.recip().expect("stored entries are nonzero");
            let normed = r.into_iter().map(|(k, v)| (k, v * &inv)).collect();
            basis.push((pivot, normed));
        }
    }
    basis.len()
}

/// Outcome of the independence smoke test on one window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub window_states: usize,
    pub generators: Vec<String>,
    pub generator_rank: usize,
    pub products: usize,
    pub product_rank: usize,
}

impl IndependenceReport {
    /// No linear relation among the generators (with I) or among the products.
    pub fn independent(&self) -> bool {
        self.generator_rank == self.generators.len() + 1 && self.product_rank == self.products
    }
}

/// Linear independence over ℚ of I, H, L₁, L₁⁺, L₂, L₂⁺, L₃, L₃⁺ restricted to
/// the window nᵢ ≤ nmax at ω = 1, and of the degree-2 products of the diagonal
/// generators with each other and with the Lᵢ⁺. Independence at one value of ω
/// implies independence over ℚ(ω).
pub fn independence_smoke_test(params: &SystemParams, nmax: u32) -> IndependenceReport {
    let alg = LatticeAlgebra::new(params);
    let diag: Vec<LatticeOperator> = (0..=3).map(|i| alg.tower(i)).collect();
    let plus: Vec<LatticeOperator> = (1..=3).map(|i| alg.l_plus(i)).collect();
    let generators = vec![
        diag[0].clone(),
        diag[1].clone(),
        plus[0].clone(),
        diag[2].clone(),
        plus[1].clone(),
        diag[3].clone(),
        plus[2].clone(),
    ];
    let window = QuantumState::window(nmax);
    let one = Rational::one();
    let mut first = vec![LatticeOperator::identity()];
    first.extend(generators.iter().cloned());
    let generator_rank = rank(&window_rows(&first, &window, &one));

    let mut products = first.clone();
    for (a, x) in diag.iter().enumerate() {
        for y in &diag[a..] {
            products.push(x.compose(y));
        }
        for y in &plus {
            products.push(x.compose(y));
        }
    }
    let product_rank = rank(&window_rows(&products, &window, &one));
    IndependenceReport {
        window_states: window.len(),
        generators: generators.iter().map(|g| g.name().to_string()).collect(),
        generator_rank,
        products: products.len(),
        product_rank,
    }
}
