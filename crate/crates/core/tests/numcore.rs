use num_integer::Integer;
use proptest::prelude::*;
use ttw4d::numcore::{falling_factorial, pochhammer, Jet, MultiIndex, OmegaPoly, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..60, 1i64..25).prop_map(|(n, d)| Rational::new(n, d))
}

fn omega_poly() -> impl Strategy<Value = OmegaPoly> {
    prop::collection::vec(rational(), 0..5).prop_map(OmegaPoly::from_coeffs)
}

proptest! {
    #[test]
    fn rational_ring_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a + (-&a)).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * a.recip().unwrap()).is_one());
        }
    }

    #[test]
    fn rationals_stay_reduced(n in -10_000i64..10_000, d in 1i64..10_000, m in 1i64..50) {
        let r = Rational::new(n * m, d * m);
        prop_assert!(r.denom() > &0.into());
        prop_assert!(r.numer().gcd(r.denom()) == 1.into());
        prop_assert_eq!(r, Rational::new(n, d));
    }

    #[test]
    fn omega_poly_ring_axioms(a in omega_poly(), b in omega_poly(), c in omega_poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!((&a - &a).degree(), None);
    }

    #[test]
    fn omega_poly_evaluation_is_a_homomorphism(a in omega_poly(), b in omega_poly(), w in rational()) {
        prop_assert_eq!((&a * &b).eval(&w), a.eval(&w) * b.eval(&w));
        prop_assert_eq!((&a + &b).eval(&w), a.eval(&w) + b.eval(&w));
    }

    #[test]
    fn leading_coefficient_is_nonzero(a in omega_poly()) {
        if let Some(d) = a.degree() {
            prop_assert!(!a.coeff(d).is_zero());
        }
    }

    #[test]
    fn pochhammer_recurrence(x in rational(), m in 0usize..12) {
        prop_assert_eq!(pochhammer(&x, m + 1), pochhammer(&x, m) * (&x + Rational::from(m)));
        prop_assert_eq!(falling_factorial(&x, m + 1), falling_factorial(&x, m) * (&x - Rational::from(m)));
    }
}

/// A smooth closed-form test function of four variables.
fn f_closed(x: [f64; 4]) -> f64 {
    (0.3 * x[0]).exp() * (x[1] + 0.5 * x[2]).sin() * (1.0 + x[3] * x[3]).ln() + x[0] * x[3] / (2.0 + x[1])
}

fn f_jet(x: [f64; 4], order: usize) -> Jet {
    let v = |i| Jet::variable(x, order, i).unwrap();
    let (x0, x1, x2, x3) = (v(0), v(1), v(2), v(3));
    let a = &(&x0.scale(0.3).exp() * &(&x1 + &x2.scale(0.5)).sin()) * &(&x3 * &x3).add_scalar(1.0).ln().unwrap();
    let b = &(&x0 * &x3) * &x1.add_scalar(2.0).recip().unwrap();
    &a + &b
}

/// Tensor-product central differences with step h.
fn central(f: &dyn Fn([f64; 4]) -> f64, x: [f64; 4], mu: MultiIndex, h: f64) -> f64 {
    let stencils: [&[(f64, f64)]; 4] = [
        &[(0.0, 1.0)],
        &[(1.0, 0.5), (-1.0, -0.5)],
        &[(1.0, 1.0), (0.0, -2.0), (-1.0, 1.0)],
        &[(2.0, 0.5), (1.0, -1.0), (-1.0, 1.0), (-2.0, -0.5)],
    ];
    let mut total = 0.0;
    let s: Vec<&[(f64, f64)]> = mu.iter().map(|&m| stencils[m as usize]).collect();
    for a in s[0] {
        for b in s[1] {
            for c in s[2] {
                for d in s[3] {
                    let y = [x[0] + a.0 * h, x[1] + b.0 * h, x[2] + c.0 * h, x[3] + d.0 * h];
                    total += a.1 * b.1 * c.1 * d.1 * f(y);
                }
            }
        }
    }
    let deg: i32 = mu.iter().map(|&m| i32::from(m)).sum();
    total / h.powi(deg)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn jets_match_finite_differences(
        x0 in 0.5f64..2.0, x1 in 0.2f64..1.2, x2 in -1.0f64..1.0, x3 in 0.3f64..1.5,
    ) {
        let x = [x0, x1, x2, x3];
        let jet = f_jet(x, 3);
        prop_assert!((jet.value() - f_closed(x)).abs() < 1e-14);
        for mu in Jet::monomials(3) {
            let h = 1e-2;
            // Richardson extrapolation of the O(h²) stencils.
            let fd = (4.0 * central(&f_closed, x, *mu, h / 2.0) - central(&f_closed, x, *mu, h)) / 3.0;
            let exact = jet.derivative(mu);
            prop_assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1.0), "mu={:?}: jet {} vs fd {}", mu, exact, fd);
        }
    }

    #[test]
    fn exp_inverts_ln(c0 in 0.3f64..3.0, rest in prop::collection::vec(-1.0f64..1.0, 69)) {
        let mut coeffs = vec![c0];
        coeffs.extend(rest);
        let j = Jet::from_coeffs([0.5, 0.4, 0.3, 0.2], 4, coeffs).unwrap();
        let back = j.ln().unwrap().exp();
        let scale = j.max_abs().max(1.0);
        for (a, b) in back.coeffs().iter().zip(j.coeffs()) {
            prop_assert!((a - b).abs() <= 1e-12 * scale, "{} vs {}", a, b);
        }
    }
}
