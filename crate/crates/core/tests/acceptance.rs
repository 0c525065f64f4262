//! Acceptance gate: one PASS/FAIL line per criterion at its stated tolerance.
//!
//! Criteria 4, 5, 6 and 9 fail as stated; each is followed by a companion
//! line for the corrected form. The process exits nonzero when any other
//! criterion or any companion fails.

use std::time::Instant;

use rayon::prelude::*;
use ttw4d::diffops::{apply_chain, xi_chain, Sign};
use ttw4d::harness::{default_grid, run_suite, SuiteConfig, SuiteId, SuiteReport};
use ttw4d::lattice::{
    alpha, check_identity, check_m1_minus, independence_smoke_test, interior_states, preserves_energy, xi1_closed_form,
    xi_action, ClosedFormReading, Conventions, Identity, IdentityForm, M1Variant, PMinusConvention, TripleConvention,
};
use ttw4d::model::{degeneracy_classes, FactorLabels, Omega, QuantumState, SystemParams, Wavefunction};
use ttw4d::numcore::Rational;

/// Criteria whose stated form is known not to hold.
const DOCUMENTED: [&str; 4] = ["4", "5", "6", "9"];

struct Line {
    id: &'static str,
    pass: bool,
    text: String,
}

fn grid() -> Vec<SystemParams> {
    default_grid(&Omega::Fixed(Rational::one()))
}

fn params(k: &str, a: &str) -> SystemParams {
    SystemParams::parse(k, a, Some("1")).unwrap()
}

fn suite(id: SuiteId, params: Vec<SystemParams>, nmax: u32, points: usize) -> SuiteReport {
    let mut cfg = SuiteConfig::new(id, params);
    cfg.nmax = nmax;
    cfg.points = points;
    run_suite(&cfg).expect("valid configuration")
}

fn worst_failure(r: &SuiteReport) -> String {
    r.failures()
        .max_by(|a, b| a.residual.total_cmp(&b.residual))
        .map(|c| format!("; worst failure {} [{}] {:?}: {:.3e}", c.check, c.params, c.state, c.residual))
        .unwrap_or_default()
}

fn eigen_tower() -> Line {
    let start = Instant::now();
    let r = suite(SuiteId::Eigen, grid(), 3, 20);
    let secs = start.elapsed().as_secs_f64();
    Line {
        id: "1",
        pass: r.pass && secs < 30.0,
        text: format!(
            "eigen tower: {} cases on 8 parameter sets, n_i <= 3, max relative residual {:.3e} (tol 1e-7), {secs:.1} s (limit 30 s){}",
            r.cases.len(),
            r.max_residual,
            worst_failure(&r)
        ),
    }
}

fn ladder_actions() -> Line {
    let r = suite(SuiteId::Ladders, grid(), 4, 20);
    Line {
        id: "2",
        pass: r.pass,
        text: format!(
            "ladder actions: {} cases (10 kinds, 1 <= n <= 4), max relative residual {:.3e} (tol 1e-8){}",
            r.cases.len(),
            r.max_residual,
            worst_failure(&r)
        ),
    }
}

fn energy_invariance() -> Line {
    let window = QuantumState::window(6);
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in grid() {
        for i in 1..=3 {
            for sign in [Sign::Plus, Sign::Minus] {
                let fails: Vec<QuantumState> =
                    window.par_iter().filter(|s| !preserves_energy(&p, i, sign, s).unwrap()).copied().collect();
                checked += window.len();
                bad.extend(fails.into_iter().map(|s| (i, sign, s)));
            }
        }
    }
    Line {
        id: "3",
        pass: bad.is_empty(),
        text: format!("energy invariance: {checked} exact Xi images (all n_j <= 6, 8 sets), {} change E", bad.len()),
    }
}

fn xi1_states(p: &SystemParams) -> Vec<QuantumState> {
    let (p1, q1) = p.ratio(1);
    QuantumState::window(6).into_iter().filter(|s| s.n[0] >= p1 && s.n[1] >= q1).collect()
}

fn closed_form(reading: ClosedFormReading) -> (usize, usize, Option<String>) {
    let mut total = 0;
    let mut differ = 0;
    let mut example = None;
    for k in ["2,1,1", "1,1,1"] {
        for a in ["1/2,1/2,1/2,1/2", "1/3,2/5,3/7,1/2"] {
            let p = params(k, a);
            for s in xi1_states(&p) {
                for sign in [Sign::Plus, Sign::Minus] {
                    total += 1;
                    let composed = xi_action(&p, 1, sign, &s).unwrap();
                    let closed = xi1_closed_form(&p, sign, &s, reading);
                    if composed != closed {
                        differ += 1;
                        example.get_or_insert_with(|| {
                            format!("k=({k}) Xi1{} at {s}: composed {composed}, closed {closed}", sign.symbol())
                        });
                    }
                }
            }
        }
    }
    (total, differ, example)
}

fn xi1_closed_forms() -> Vec<Line> {
    let (total, differ, example) = closed_form(ClosedFormReading::Printed);
    let printed = Line {
        id: "4",
        pass: differ == 0,
        text: format!(
            "Xi1 closed forms as stated: {differ} of {total} interior images differ{}",
            example.map(|e| format!("; e.g. {e}")).unwrap_or_default()
        ),
    };
    let (total, differ, _) = closed_form(ClosedFormReading::Corrected);
    let corrected = Line {
        id: "4c",
        pass: differ == 0,
        text: format!("Xi1 closed forms with factor (-2)^(p+q) and falling radial factors: {differ} of {total} differ"),
    };
    vec![printed, corrected]
}

/// Interior states for one identity: n_j <= 6, widened to 8 when fewer than 20.
fn identity_states(p: &SystemParams, i: usize, which: Identity) -> Vec<QuantumState> {
    let mut states = interior_states(p, i, which, 6);
    if states.len() < 20 && which != Identity::CrossCommute {
        states = interior_states(p, i, which, 8);
    }
    if states.len() <= 24 {
        return states;
    }
    let n = states.len() - 1;
    (0..24).map(|j| states[j * n / 23]).collect()
}

struct AlgebraOutcome {
    holding: usize,
    total: usize,
    few_states: Vec<String>,
    failing: Vec<String>,
    conventions: Vec<String>,
}

fn algebra(form: IdentityForm, candidates: &[Conventions]) -> AlgebraOutcome {
    let mut out = AlgebraOutcome { holding: 0, total: 0, few_states: vec![], failing: vec![], conventions: vec![] };
    for p in grid() {
        for i in 1..=3 {
            for which in Identity::ALL {
                out.total += 1;
                let states = identity_states(&p, i, which);
                if states.len() < 20 && which != Identity::CrossCommute {
                    out.few_states.push(format!("{which} i={i} {p}: {}", states.len()));
                }
                let convs: &[Conventions] = if which.uses_conventions() { candidates } else { &candidates[..1] };
                let found = convs.iter().find(|c| {
                    states.par_iter().all(|s| check_identity(&p, i, which, s, **c, form).unwrap().holds())
                });
                match found {
                    Some(c) => {
                        out.holding += 1;
                        if which.uses_conventions() {
                            out.conventions.push(c.to_string());
                        }
                    }
                    None => out.failing.push(format!("{which} i={i}")),
                }
            }
        }
    }
    out.conventions.sort();
    out.conventions.dedup();
    out.failing.sort();
    out.failing.dedup();
    out
}

fn algebra_identities() -> Vec<Line> {
    let alpha_ok = [alpha(1), alpha(2), alpha(3)] == [Rational::one(), Rational::new(1, 4), Rational::zero()];
    let printed = algebra(IdentityForm::Printed, &Conventions::all());
    let line = |id, o: &AlgebraOutcome, what: &str| Line {
        id,
        pass: o.holding == o.total && o.few_states.is_empty() && alpha_ok,
        text: format!(
            "{what}: {}/{} (set, i, identity) checks hold exactly{}{}{}",
            o.holding,
            o.total,
            if o.failing.is_empty() { String::new() } else { format!("; failing under every convention: {}", o.failing.join(", ")) },
            if o.conventions.is_empty() { String::new() } else { format!("; conventions used: {}", o.conventions.join(" | ")) },
            if o.few_states.is_empty() { String::new() } else { format!("; under 20 interior states: {}", o.few_states.join(", ")) },
        ),
    };
    let antisym = Conventions { p_minus: PMinusConvention::Antisymmetric, triple: TripleConvention::Six };
    let corrected = algebra(IdentityForm::Corrected, &[antisym]);
    vec![
        line("5", &printed, "algebra identities as stated, searched over P(-) x triple conventions"),
        line("5c", &corrected, "algebra identities in corrected form, antisymmetric P(-), 6-term triple, alpha = (1, 1/4, 0)"),
    ]
}

fn m1(variant: M1Variant) -> (usize, Vec<String>) {
    let p = params("2,1,1", "1/2,1/2,1/2,1/2");
    let states = xi1_states(&p);
    let failing: Vec<Vec<String>> = states
        .par_iter()
        .map(|s| {
            let r = check_m1_minus(&p, s, variant).unwrap();
            r.failing().into_iter().map(str::to_string).collect()
        })
        .collect();
    let mut names: Vec<String> = failing.into_iter().flatten().collect();
    names.sort();
    names.dedup();
    (states.len(), names)
}

fn m1_lines() -> Vec<Line> {
    let (n, failing) = m1(M1Variant::Printed);
    let (nc, failing_c) = m1(M1Variant::XiSplit);
    vec![
        Line {
            id: "6",
            pass: failing.is_empty(),
            text: format!(
                "M1- as stated on {n} interior states (n_j <= 6): {}",
                if failing.is_empty() { "all four relations hold".to_string() } else { format!("failing {}", failing.join(", ")) }
            ),
        },
        Line {
            id: "6c",
            pass: failing_c.is_empty(),
            text: format!(
                "M1- with Xi1+/(A0(A0+p)) + Xi1-/(A0(A0-p)) in place of the L1-, L1+ terms on {nc} states: {}",
                if failing_c.is_empty() { "all four relations hold".to_string() } else { format!("failing {}", failing_c.join(", ")) }
            ),
        },
    ]
}

fn curvature() -> Line {
    let r = suite(SuiteId::Curvature, grid(), 0, 50);
    let probe = r.cases.iter().filter(|c| c.check.starts_with("probe")).count();
    Line {
        id: "7",
        pass: r.pass && probe == 4,
        text: format!(
            "curvature: R, W and symmetry defects at 50 points on 8 sets plus {probe} probe checks, max residual {:.3e}{}",
            r.max_residual,
            worst_failure(&r)
        ),
    }
}

fn conformal() -> Line {
    let r = suite(SuiteId::Conformal, grid(), 0, 20);
    Line {
        id: "8",
        pass: r.pass,
        text: format!(
            "conformal covariance: 10 test functions x 20 points on 8 sets, max relative residual {:.3e} (tol 1e-8){}",
            r.max_residual,
            worst_failure(&r)
        ),
    }
}

fn example211() -> Vec<Line> {
    let p = params("2,1,1", "1/2,1/2,1/2,1/2");
    let r = suite(SuiteId::Example211, vec![p.clone()], 3, 20);
    let order = r.cases.iter().find(|c| c.check.contains("order")).expect("order case");
    let matches: Vec<_> = r.cases.iter().filter(|c| c.state.is_some()).collect();
    let worst = matches.iter().map(|c| c.residual).fold(0.0, f64::max);
    let states: Vec<QuantumState> = matches.iter().filter_map(|c| c.state).collect();
    let printed = Line {
        id: "9",
        pass: r.pass && matches.len() >= 10,
        text: format!(
            "fifth-order L1+ for k=(2,1,1): {} ({}), lattice match on {} states: {} pass, worst relative residual {worst:.3e} (tol 1e-7)",
            order.detail.as_deref().unwrap_or(""),
            if order.pass { "ok" } else { "wrong" },
            matches.len(),
            matches.iter().filter(|c| c.pass).count(),
        ),
    };

    // The same states through the composed one-variable ladders.
    let pts = p.sample_points(20, 1);
    let worst_c = states
        .par_iter()
        .map(|s| {
            let labels = FactorLabels::of_state(&p, s);
            let psi = Wavefunction::new(&p, s).unwrap();
            let mut targets = Vec::new();
            for sign in [Sign::Plus, Sign::Minus] {
                for (t, c) in xi_action(&p, 1, sign, s).unwrap().iter() {
                    targets.push((c.eval_f64(1.0), Wavefunction::new(&p, t).unwrap()));
                }
            }
            let chains: Vec<_> = [Sign::Plus, Sign::Minus].map(|sg| xi_chain(&p, 1, sg, &labels).unwrap()).into();
            let mut diff = 0.0f64;
            let mut scale = 0.0f64;
            for pt in &pts {
                let mut got = 0.0;
                for ch in &chains {
                    got += apply_chain(ch, &psi.eval(pt, ch.len()).unwrap()).unwrap().value();
                }
                let want: f64 = targets.iter().map(|(c, t)| c * t.eval(pt, 0).unwrap().value()).sum();
                diff = diff.max((got - want).abs());
                scale = scale.max(want.abs());
            }
            diff / scale
        })
        .reduce(|| 0.0, f64::max);
    let corrected = Line {
        id: "9c",
        pass: worst_c <= 1e-7 && states.len() >= 10,
        text: format!(
            "L1+ as the composed ladder chains of Xi1+ + Xi1- on the same {} states: worst relative residual {worst_c:.3e}",
            states.len()
        ),
    };
    vec![printed, corrected]
}

fn degeneracy_evidence() -> Line {
    let p = params("2,1,1", "1/2,1/2,1/2,1/2");
    let classes = degeneracy_classes(&p, 6);
    let class_of: std::collections::HashMap<QuantumState, usize> =
        classes.iter().enumerate().flat_map(|(c, (_, m))| m.iter().map(move |s| (*s, c))).collect();
    let window = QuantumState::window(6);
    let strays: usize = window
        .par_iter()
        .map(|s| {
            let mut n = 0;
            for i in 1..=3 {
                for sign in [Sign::Plus, Sign::Minus] {
                    n += xi_action(&p, i, sign, s)
                        .unwrap()
                        .states()
                        .filter(|t| class_of.get(t).is_some_and(|c| *c != class_of[s]))
                        .count();
                }
            }
            n
        })
        .sum();
    let ind = independence_smoke_test(&p, 6);
    Line {
        id: "10",
        pass: strays == 0 && ind.independent(),
        text: format!(
            "degeneracy evidence k=(2,1,1), nmax 6: {strays} Xi images leave their E-class ({} classes); window rank {}/{} for I and {}, products {}/{}",
            classes.len(),
            ind.generator_rank,
            ind.generators.len() + 1,
            ind.generators.join(", "),
            ind.product_rank,
            ind.products
        ),
    }
}

fn main() {
    let start = Instant::now();
    let mut lines = vec![eigen_tower(), ladder_actions(), energy_invariance()];
    lines.extend(xi1_closed_forms());
    lines.extend(algebra_identities());
    lines.extend(m1_lines());
    lines.push(curvature());
    lines.push(conformal());
    lines.extend(example211());
    lines.push(degeneracy_evidence());

    let mut unexpected = Vec::new();
    for l in &lines {
        let tag = match (l.pass, DOCUMENTED.contains(&l.id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => {
                unexpected.push(l.id);
                "FAIL"
            }
        };
        println!("{tag} criterion {}: {}", l.id, l.text);
    }
    let failed: Vec<&str> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    println!(
        "acceptance: {} of {} lines pass; failing as stated: {}; unexpected failures: {}; {:.1} s",
        lines.len() - failed.len(),
        lines.len(),
        if failed.is_empty() { "none".to_string() } else { failed.join(", ") },
        if unexpected.is_empty() { "none".to_string() } else { unexpected.join(", ") },
        start.elapsed().as_secs_f64()
    );
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
