mod common;

use common::{params, state};
use proptest::prelude::*;
use ttw4d::diffops::{
    apply_chain, build_tower, example_l1_plus, example_l1_plus_groups, spectral_operator, xi_chain, Sign,
};
use ttw4d::geometry::TestFunction;
use ttw4d::lattice::{ladder_action, xi_action, LadderKind};
use ttw4d::model::{spectral_chain, FactorLabels, QuantumState, SystemParams, Wavefunction};

fn close(a: f64, b: f64, scale: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * scale.max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigen_tower_at_a_sample_point(p in params(), s in state(2), seed in 0u64..1000) {
        let t = build_tower(&p).unwrap();
        let psi = Wavefunction::new(&p, &s).unwrap();
        let c = spectral_chain(&p, &s);
        let pt = p.sample_points(1, seed)[0];
        let f = psi.eval(&pt, 2).unwrap();
        for i in 0..4 {
            let (out, scale) = t.get(i).apply_jet_scaled(&f).unwrap();
            let want = c.eigenvalue(i).eval_f64(1.0) * f.value();
            prop_assert!(close(out.value(), want, scale, 1e-7), "i={} {} vs {}", i, out.value(), want);
        }
    }

    #[test]
    fn operators_are_linear(p in params(), seed in 0u64..1000, alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let t = build_tower(&p).unwrap();
        let fs = TestFunction::family(seed, 2);
        let pt = p.sample_points(1, seed)[0];
        let f = fs[0].jet(&pt, 2).unwrap();
        let g = fs[1].jet(&pt, 2).unwrap();
        let combo = &f.scale(alpha) + &g.scale(beta);
        for i in 0..4 {
            let op = t.get(i);
            let (lhs, scale) = op.apply_jet_scaled(&combo).unwrap();
            let rhs = op.apply_jet(&f).unwrap().value() * alpha + op.apply_jet(&g).unwrap().value() * beta;
            prop_assert!(close(lhs.value(), rhs, scale, 1e-12));
        }
    }

    #[test]
    fn xi_chains_match_lattice(p in params(), s in state(2), i in 1usize..4, plus in any::<bool>(), seed in 0u64..1000) {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let labels = FactorLabels::of_state(&p, &s);
        let chain = xi_chain(&p, i, sign, &labels).unwrap();
        let psi = Wavefunction::new(&p, &s).unwrap();
        let image = xi_action(&p, i, sign, &s).unwrap();
        let pts = p.sample_points(4, seed);
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for pt in &pts {
            let (last, head) = chain.split_last().unwrap();
            let mid = apply_chain(head, &psi.eval(pt, chain.len()).unwrap()).unwrap();
            let (got, terms) = last.apply_jet_scaled(&mid).unwrap();
            let got = got.value();
            let mut want = 0.0;
            for (t, c) in image.iter() {
                want += c.eval_f64(1.0) * Wavefunction::new(&p, t).unwrap().eval(pt, 0).unwrap().value();
            }
            diff = diff.max((got - want).abs());
            scale = scale.max(want.abs()).max(terms);
        }
        prop_assert!(diff <= 1e-7 * scale.max(1e-300), "Xi{}{:?} at {}: diff {} scale {}", i, sign, s, diff, scale);
    }
}

#[test]
fn radial_ladders_on_flat_half() {
    let p = SystemParams::parse("1,1,1", "1/2,1/2,1/2,1/2", Some("1")).unwrap();
    let s = QuantumState::new(2, 1, 0, 1);
    for kind in [LadderKind::K0Plus, LadderKind::K0Minus] {
        let v = ladder_action(kind, &p, &s).unwrap();
        assert_eq!(v.len(), 1, "{kind}");
    }
}

#[test]
fn compose_agrees_with_nesting() {
    let p = SystemParams::parse("2,1,1", "1/3,2/5,3/7,1/2", Some("1")).unwrap();
    let t = build_tower(&p).unwrap();
    let composed = t.l2.compose(&t.l1);
    let f = TestFunction::family(3, 1).remove(0);
    for pt in p.sample_points(5, 9) {
        let nested = t.l2.apply_jet(&t.l1.apply_jet(&f.jet(&pt, 4).unwrap()).unwrap()).unwrap().value();
        let (direct, scale) = composed.apply_jet_scaled(&f.jet(&pt, 4).unwrap()).unwrap();
        assert!(close(direct.value(), nested, scale, 1e-11));
    }
}

#[test]
fn example_operator_is_its_groups() {
    let p = SystemParams::parse("2,1,1", "1/2,1/2,1/2,1/2", Some("1")).unwrap();
    let total = example_l1_plus(&p).unwrap();
    assert_eq!(total.max_order(), 5);
    let groups = example_l1_plus_groups(&p).unwrap();
    assert_eq!(groups.len(), 9);
    let f = TestFunction::family(5, 1).remove(0);
    for pt in p.sample_points(3, 2) {
        let jet = f.jet(&pt, 5).unwrap();
        let mut sum = 0.0;
        for g in &groups {
            let ops: Vec<_> = g.factors.iter().rev().map(|x| spectral_operator(&p, *x).unwrap()).collect();
            let inner = apply_chain(&ops, &jet).unwrap();
            sum += g.operator.apply_jet(&inner).unwrap().value();
        }
        let (direct, scale) = total.apply_jet_scaled(&jet).unwrap();
        assert!(close(direct.value(), sum, scale, 1e-10));
    }
    assert!(example_l1_plus(&SystemParams::parse("3,1,1", "1,1,1,1", Some("1")).unwrap()).is_err());
}
