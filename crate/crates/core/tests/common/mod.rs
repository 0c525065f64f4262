#![allow(dead_code)]

use proptest::prelude::*;
use ttw4d::model::{Omega, QuantumState, SystemParams};
use ttw4d::numcore::Rational;

pub const KS: [&str; 6] = ["1,1,1", "2,1,1", "3/2,3/2,1", "2,1,2", "1/2,1,1", "3,3/2,1/2"];

pub fn positive() -> impl Strategy<Value = Rational> {
    (1i64..12, 1i64..8).prop_map(|(n, d)| Rational::new(n, d))
}

/// Parameter sets over a fixed list of k with random positive couplings.
pub fn params_with(omega: Omega) -> impl Strategy<Value = SystemParams> {
    (prop::sample::select(KS.to_vec()), prop::array::uniform4(positive())).prop_map(move |(k, a)| {
        let k = ttw4d::model::parse_list::<3>(k).unwrap();
        SystemParams::new(k, a, omega.clone()).unwrap()
    })
}

pub fn params() -> impl Strategy<Value = SystemParams> {
    params_with(Omega::Fixed(Rational::one()))
}

pub fn formal_params() -> impl Strategy<Value = SystemParams> {
    params_with(Omega::Formal)
}

pub fn state(nmax: u32) -> impl Strategy<Value = QuantumState> {
    prop::array::uniform4(0..=nmax).prop_map(|n| QuantumState::new(n[0], n[1], n[2], n[3]))
}
