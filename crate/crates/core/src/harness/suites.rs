use rayon::prelude::*;

use super::report::params_label;
use super::{spread, CaseRecord, ConventionChoice, ConventionRecord, SuiteConfig, SuiteId, EXACT_STATE_CAP, POINTWISE_NMAX};
use crate::diffops::{
    apply_chain, build_tower, example_l1_plus, index_ladder, jacobi_ladder, radial_ladder, xi_chain, DiffOperator, Sign,
};
use crate::geometry::{
    conformal_identity_check, curvature_at, scalar_curvature_closed, weyl_closed, TestFunction, WeylBranch, SYMMETRY_TOL,
};
use crate::lattice::{
    check_identity, check_m1_minus, identity_interior, independence_smoke_test, interior_states, xi1_closed_form,
    xi_action, ClosedFormReading, Conventions, Identity, IdentityForm, LadderKind, LatticeAlgebra, LatticeError,
    M1Variant, PMinusConvention, TripleConvention,
};
use crate::model::{
    degeneracy_classes, radial_factor, spectral_chain, FactorLabels, Point, QuantumState, SystemParams, Wavefunction,
};
use crate::numcore::{Jet, Rational};

type Parts = (Vec<CaseRecord>, Vec<ConventionRecord>);

pub(super) fn run_one(suite: SuiteId, p: &SystemParams, cfg: &SuiteConfig) -> Parts {
    match suite {
        SuiteId::Eigen => (eigen(p, cfg), vec![]),
        SuiteId::Ladders => (ladders(p, cfg), vec![]),
        SuiteId::Xi => (xi(p, cfg), vec![]),
        SuiteId::Algebra => algebra(p, cfg),
        SuiteId::M1 => (m1(p, cfg), vec![]),
        SuiteId::Curvature => (curvature(p, cfg), vec![]),
        SuiteId::Conformal => (conformal(p, cfg), vec![]),
        SuiteId::Example211 => (example211(p, cfg), vec![]),
        SuiteId::All => unreachable!("expanded by run_suite"),
    }
}

/// Largest |difference| over the points divided by the largest magnitude
/// scale, with the point of the largest difference.
fn sup_relative<F>(points: &[Point], f: F) -> Result<(f64, Option<[f64; 4]>), String>
where
    F: Fn(&Point) -> Result<(f64, f64), String>,
{
    let mut worst = (0.0f64, None);
    let mut scale = 0.0f64;
    for pt in points {
        let (diff, s) = f(pt)?;
        scale = scale.max(s);
        if diff > worst.0 || worst.1.is_none() {
            worst = (diff, Some(pt.coords()));
        }
    }
    Ok((worst.0 / scale.max(f64::MIN_POSITIVE), worst.1))
}

fn omega_f64(p: &SystemParams) -> f64 {
    p.omega_value().map(Rational::to_f64).unwrap_or(1.0)
}

fn eigen(p: &SystemParams, cfg: &SuiteConfig) -> Vec<CaseRecord> {
    let id = SuiteId::Eigen;
    let tol = cfg.tolerance(id);
    let tower = match build_tower(p) {
        Ok(t) => t,
        Err(e) => return vec![CaseRecord::new(id, p, "tower").failed(e.to_string())],
    };
    let w = omega_f64(p);
    let pts = p.sample_points(cfg.points, cfg.seed);
    let states = QuantumState::window(cfg.nmax.min(POINTWISE_NMAX));
    states
        .par_iter()
        .flat_map_iter(|s| {
            let chain = spectral_chain(p, s);
            let psi = Wavefunction::new(p, s);
            (0..4)
                .map(|i| {
                    let name = if i == 0 { "H psi = E psi".to_string() } else { format!("L{i} psi = l{i} psi") };
                    let case = CaseRecord::new(id, p, name).state(*s);
                    let psi = match &psi {
                        Ok(x) => x,
                        Err(e) => return case.failed(e.to_string()),
                    };
                    let lam = chain.eigenvalue(i).eval_f64(w);
                    let r = sup_relative(&pts, |pt| {
                        let f = psi.eval(pt, 2).map_err(|e| e.to_string())?;
                        let (out, scale) = tower.get(i).apply_jet_scaled(&f).map_err(|e| e.to_string())?;
                        let expect = lam * f.value();
                        Ok(((out.value() - expect).abs(), scale.max(expect.abs())))
                    });
                    match r {
                        Ok((res, pt)) => case.numeric(res, tol, pt),
                        Err(e) => case.failed(e),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

fn ladder_kinds() -> Vec<(LadderKind, usize)> {
    let mut out = vec![(LadderKind::K0Plus, 0), (LadderKind::K0Minus, 0)];
    for s in 1..=3 {
        out.push((LadderKind::JPlus(s), s));
        out.push((LadderKind::JMinus(s), s));
    }
    for s in 1..=2 {
        out.push((LadderKind::KPlus(s), s));
        out.push((LadderKind::KMinus(s), s));
    }
    out
}

/// The one-variable operator of a primitive ladder and the factor it acts on.
fn ladder_pieces(kind: LadderKind, p: &SystemParams, labels: &FactorLabels) -> Result<(DiffOperator, usize), String> {
    let sign = |plus: bool| if plus { Sign::Plus } else { Sign::Minus };
    Ok(match kind {
        LadderKind::K0Plus | LadderKind::K0Minus => {
            let op = radial_ladder(p, labels.n[0], &labels.radial, sign(kind == LadderKind::K0Plus)).map_err(|e| e.to_string())?;
            (op, 0)
        }
        LadderKind::JPlus(s) => (jacobi_ladder(&labels.gauge(p, s), labels.n[s], Sign::Plus), s),
        LadderKind::JMinus(s) => (jacobi_ladder(&labels.gauge(p, s), labels.n[s], Sign::Minus), s),
        LadderKind::KPlus(s) => (index_ladder(&labels.gauge(p, s), labels.n[s], Sign::Plus), s),
        LadderKind::KMinus(s) => (index_ladder(&labels.gauge(p, s), labels.n[s], Sign::Minus), s),
    })
}

fn factor(p: &SystemParams, labels: &FactorLabels, slot: usize, w: &Rational, v: &Jet) -> Result<Jet, String> {
    if slot == 0 {
        radial_factor(labels.n[0], &labels.radial, w, v).map_err(|e| e.to_string())
    } else {
        labels.gauge(p, slot).theta(labels.n[slot], v).map_err(|e| e.to_string())
    }
}

fn ladders(p: &SystemParams, cfg: &SuiteConfig) -> Vec<CaseRecord> {
    let id = SuiteId::Ladders;
    let tol = cfg.tolerance(id);
    let w = p.omega_value().cloned().unwrap_or_else(|_| Rational::one());
    let pts = p.sample_points(cfg.points, cfg.seed);
    let top = cfg.nmax.min(4);
    let others = cfg.nmax.min(1);
    let mut jobs = Vec::new();
    for (kind, coord) in ladder_kinds() {
        for s in QuantumState::window(top.max(others)) {
            let moving = s.n[coord];
            let rest_ok = (0..4).all(|j| j == coord || s.n[j] <= others);
            if moving >= 1 && moving <= top && rest_ok {
                jobs.push((kind, coord, s));
            }
        }
    }
    jobs.par_iter()
        .map(|(kind, coord, s)| {
            let case = CaseRecord::new(id, p, kind.to_string()).state(*s);
            let labels = FactorLabels::of_state(p, s);
            let run = || -> Result<(f64, Option<[f64; 4]>), String> {
                let image = kind.act(&labels).map_err(|e| e.to_string())?;
                let (op, slot) = ladder_pieces(*kind, p, &labels)?;
                let coef = image.as_ref().map(|i| i.coefficient.eval_f64(w.to_f64())).unwrap_or(0.0);
                sup_relative(&pts, |pt| {
                    let v = pt.variables(1).map_err(|e| e.to_string())?;
                    let f = factor(p, &labels, slot, &w, &v[*coord])?;
                    let (out, scale) = op.apply_jet_scaled(&f).map_err(|e| e.to_string())?;
                    let expect = match &image {
                        Some(img) => coef * factor(p, &img.labels, slot, &w, &v[*coord].truncate(0).map_err(|e| e.to_string())?)?.value(),
                        None => 0.0,
                    };
                    Ok(((out.value() - expect).abs(), scale.max(expect.abs())))
                })
            };
            match run() {
                Ok((res, pt)) => case.numeric(res, tol, pt),
                Err(e) => case.failed(e),
            }
        })
        .collect()
}

fn signs() -> [Sign; 2] {
    [Sign::Plus, Sign::Minus]
}

fn xi_pairs() -> [(usize, Sign); 6] {
    [(1, Sign::Plus), (1, Sign::Minus), (2, Sign::Plus), (2, Sign::Minus), (3, Sign::Plus), (3, Sign::Minus)]
}

fn xi_name(i: usize, sign: Sign) -> String {
    format!("Xi{i}{}", sign.symbol())
}

fn xi(p: &SystemParams, cfg: &SuiteConfig) -> Vec<CaseRecord> {
    let id = SuiteId::Xi;
    let mut out = Vec::new();
    let window = QuantumState::window(cfg.nmax);

    // One pass computes every Ξ image; energy defects per (i, sign) and
    // class membership of the images are read off it.
    let classes = degeneracy_classes(p, cfg.nmax);
    let class_of: std::collections::HashMap<QuantumState, usize> =
        classes.iter().enumerate().flat_map(|(c, (_, m))| m.iter().map(move |s| (*s, c))).collect();
    let per_state: Vec<([f64; 6], usize)> = window
        .par_iter()
        .map(|s| {
            let e = spectral_chain(p, s).energy;
            let mut defects = [0.0; 6];
            let mut strays = 0;
            for (j, (i, sign)) in xi_pairs().into_iter().enumerate() {
                if let Ok(v) = xi_action(p, i, sign, s) {
                    for t in v.states() {
                        defects[j] = f64::max(defects[j], (&spectral_chain(p, t).energy - &e).max_abs_coeff());
                        strays += usize::from(class_of.get(t).is_some_and(|c| *c != class_of[s]));
                    }
                }
            }
            (defects, strays)
        })
        .collect();
    for (j, (i, sign)) in xi_pairs().into_iter().enumerate() {
        let bad: Vec<(QuantumState, f64)> =
            window.iter().zip(&per_state).filter(|(_, d)| d.0[j] > 0.0).map(|(s, d)| (*s, d.0[j])).collect();
        let worst = bad.iter().map(|b| b.1).fold(0.0, f64::max);
        let mut case = CaseRecord::new(id, p, format!("{} preserves E", xi_name(i, sign)))
            .exact(bad.is_empty(), worst)
            .detail(format!("{} states with n_j <= {}", window.len(), cfg.nmax));
        if let Some((s, _)) = bad.first() {
            case = case.state(*s);
        }
        out.push(case);
    }
    let violations: usize = per_state.iter().map(|d| d.1).sum();
    out.push(
        CaseRecord::new(id, p, "Xi images stay in their E-class")
            .exact(violations == 0, violations as f64)
            .detail(format!("{} classes", classes.len())),
    );

    let reading = match cfg.form {
        IdentityForm::Printed => ClosedFormReading::Printed,
        IdentityForm::Corrected => ClosedFormReading::Corrected,
    };
    let closed_window = QuantumState::window(cfg.nmax.min(6));
    for sign in signs() {
        let bad: Vec<(QuantumState, f64)> = closed_window
            .par_iter()
            .filter_map(|s| {
                let composed = xi_action(p, 1, sign, s).ok()?;
                let closed = xi1_closed_form(p, sign, s, reading);
                let d = composed.minus(&closed);
                (!d.is_empty()).then(|| (*s, d.max_abs_coeff()))
            })
            .collect();
        let worst = bad.iter().map(|b| b.1).fold(0.0, f64::max);
        let mut case = CaseRecord::new(id, p, format!("{} closed form ({reading:?})", xi_name(1, sign)))
            .exact(bad.is_empty(), worst)
            .detail(format!("{} of {} states differ", bad.len(), closed_window.len()));
        if let Some((s, _)) = bad.first() {
            case = case.state(*s);
        }
        out.push(case);
    }

    out.extend(xi_pointwise(p, cfg));
    out
}

/// The composed one-variable ladders applied to Ψ against the lattice image.
fn xi_pointwise(p: &SystemParams, cfg: &SuiteConfig) -> Vec<CaseRecord> {
    let id = SuiteId::Xi;
    let tol = cfg.tolerance(id);
    let w = omega_f64(p);
    let pts = p.sample_points(cfg.points, cfg.seed);
    let mut jobs = Vec::new();
    for s in spread(&QuantumState::window(cfg.nmax.min(2)), EXACT_STATE_CAP) {
        for i in 1..=3 {
            for sign in signs() {
                jobs.push((s, i, sign));
            }
        }
    }
    jobs.par_iter()
        .map(|(s, i, sign)| {
            let case = CaseRecord::new(id, p, format!("{} differential = lattice", xi_name(*i, *sign))).state(*s);
            let run = || -> Result<(f64, Option<[f64; 4]>), String> {
                let labels = FactorLabels::of_state(p, s);
                let chain = xi_chain(p, *i, *sign, &labels).map_err(|e| e.to_string())?;
                let psi = Wavefunction::from_labels(p, labels).map_err(|e| e.to_string())?;
                let image = xi_action(p, *i, *sign, s).map_err(|e| e.to_string())?;
                let targets: Vec<(f64, Wavefunction)> = image
                    .iter()
                    .map(|(t, c)| Ok((c.eval_f64(w), Wavefunction::new(p, t).map_err(|e| e.to_string())?)))
                    .collect::<Result<_, String>>()?;
                let (last, head) = chain.split_last().ok_or("empty chain")?;
                sup_relative(&pts, |pt| {
                    let f = psi.eval(pt, chain.len()).map_err(|e| e.to_string())?;
                    let mid = apply_chain(head, &f).map_err(|e| e.to_string())?;
                    let (out, scale) = last.apply_jet_scaled(&mid).map_err(|e| e.to_string())?;
                    let mut expect = 0.0;
                    for (c, t) in &targets {
                        expect += c * t.eval(pt, 0).map_err(|e| e.to_string())?.value();
                    }
                    Ok(((out.value() - expect).abs(), scale.max(expect.abs())))
                })
            };
            match run() {
                Ok((res, pt)) => case.numeric(res, tol, pt),
                Err(e) => case.failed(e),
            }
        })
        .collect()
}

fn candidates(choice: ConventionChoice, which: Identity) -> Vec<Conventions> {
    if !which.uses_conventions() {
        return vec![Conventions::PRINTED];
    }
    match choice {
        ConventionChoice::Printed => vec![Conventions::PRINTED],
        ConventionChoice::Antisymmetric => {
            vec![Conventions { p_minus: PMinusConvention::Antisymmetric, triple: TripleConvention::Six }]
        }
        ConventionChoice::Auto => Conventions::all().to_vec(),
    }
}

fn algebra(p: &SystemParams, cfg: &SuiteConfig) -> Parts {
    let id = SuiteId::Algebra;
    let label = params_label(p);
    let mut cases = Vec::new();
    let mut records = Vec::new();
    for i in 1..=3 {
        for which in Identity::ALL {
            let name = format!("{which} i={i}");
            let states = spread(&interior_states(p, i, which, cfg.nmax), EXACT_STATE_CAP);
            if states.is_empty() {
                cases.push(CaseRecord::new(id, p, name).failed(format!("no interior states with n_j <= {}", cfg.nmax)));
                continue;
            }
            let mut chosen = None;
            for conv in candidates(cfg.convention, which) {
                let results: Vec<_> =
                    states.par_iter().map(|s| (*s, check_identity(p, i, which, s, conv, cfg.form))).collect();
                let holds = results.iter().all(|(_, r)| r.as_ref().is_ok_and(|r| r.holds()));
                if chosen.is_none() || holds {
                    chosen = Some((conv, holds, results));
                }
                if holds {
                    break;
                }
            }
            let (conv, holds, results) = chosen.expect("at least one candidate");
            if which.uses_conventions() {
                records.push(ConventionRecord {
                    params: label.clone(),
                    index: i,
                    identity: which.name().to_string(),
                    conventions: conv,
                    form: cfg.form,
                    holds,
                });
            }
            for (s, r) in results {
                let case = CaseRecord::new(id, p, name.clone()).state(s).conventions(conv.to_string());
                cases.push(match r {
                    Ok(r) => {
                        let c = case.exact(r.holds(), r.max_abs_coeff());
                        if r.holds() {
                            c
                        } else {
                            c.detail(r.failing().join("; "))
                        }
                    }
                    Err(e) => case.failed(e.to_string()),
                });
            }
        }
    }
    let window = cfg.nmax.min(3);
    let ind = independence_smoke_test(p, window);
    cases.push(
        CaseRecord::new(id, p, "independence")
            .exact(ind.independent(), ((ind.generators.len() + 1 - ind.generator_rank) + (ind.products - ind.product_rank)) as f64)
            .detail(format!(
                "window n_j <= {window}: rank {}/{} for I and {}; products rank {}/{}",
                ind.generator_rank,
                ind.generators.len() + 1,
                ind.generators.join(", "),
                ind.product_rank,
                ind.products
            )),
    );
    (cases, records)
}

fn m1(p: &SystemParams, cfg: &SuiteConfig) -> Vec<CaseRecord> {
    let id = SuiteId::M1;
    let variant = match cfg.form {
        IdentityForm::Printed => M1Variant::Printed,
        IdentityForm::Corrected => M1Variant::XiSplit,
    };
    let (p1, q1) = p.ratio(1);
    let states: Vec<QuantumState> = QuantumState::window(cfg.nmax.min(6))
        .into_iter()
        .filter(|s| s.n[0] >= p1 && s.n[1] >= q1)
        .collect();
    let states = spread(&states, EXACT_STATE_CAP);
    if states.is_empty() {
        return vec![CaseRecord::new(id, p, "M1-").failed(format!("no interior states with n_j <= {}", cfg.nmax))];
    }
    states
        .par_iter()
        .flat_map_iter(|s| match check_m1_minus(p, s, variant) {
            Ok(r) => r
                .parts
                .into_iter()
                .map(|(name, v)| {
                    CaseRecord::new(id, p, format!("{name} ({variant:?})")).state(*s).exact(v.is_empty(), v.max_abs_coeff())
                })
                .collect::<Vec<_>>(),
            Err(e @ LatticeError::SingularDenominator { .. }) => {
                vec![CaseRecord::new(id, p, "M1-").state(*s).detail(format!("skipped: {e}"))]
            }
            Err(e) => vec![CaseRecord::new(id, p, "M1-").state(*s).failed(e.to_string())],
        })
        .collect()
}

fn relative(x: f64, y: f64) -> f64 {
    if y.abs() > 1e-12 {
        (x - y).abs() / y.abs()
    } else {
        (x - y).abs()
    }
}

fn curvature(p: &SystemParams, cfg: &SuiteConfig) -> Vec<CaseRecord> {
    let id = SuiteId::Curvature;
    let tol = cfg.tolerance(id);
    let pts = p.sample_points(cfg.points, cfg.seed);
    let flat_weyl = WeylBranch::of(p) == WeylBranch::Vanishing;
    let reports: Vec<_> = pts.par_iter().map(|pt| (pt, curvature_at(p, pt))).collect();
    let mut worst = [(0.0f64, None); 3];
    let mut errors = Vec::new();
    for (pt, rep) in &reports {
        match rep {
            Ok(rep) => {
                let r = relative(rep.scalar, scalar_curvature_closed(p, pt));
                let w = if flat_weyl { rep.weyl_invariant.abs() } else { relative(rep.weyl_invariant, weyl_closed(p, pt).abs()) };
                let d = rep.symmetry_defects();
                let s = d.max_defect() / d.scale.max(1.0);
                for (slot, v) in worst.iter_mut().zip([r, w, s]) {
                    if v > slot.0 || slot.1.is_none() {
                        *slot = (v, Some(pt.coords()));
                    }
                }
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    let weyl_tol = if flat_weyl { 1e-10 } else { tol };
    let mut out = vec![
        CaseRecord::new(id, p, "scalar curvature = closed form").numeric(worst[0].0, tol, worst[0].1),
        CaseRecord::new(id, p, if flat_weyl { "Weyl invariant vanishes" } else { "Weyl invariant = closed form" })
            .numeric(worst[1].0, weyl_tol, worst[1].1),
        CaseRecord::new(id, p, "Riemann/Weyl symmetries").numeric(worst[2].0, SYMMETRY_TOL, worst[2].1),
    ];
    if !errors.is_empty() {
        out.push(CaseRecord::new(id, p, "curvature evaluation").failed(errors.join("; ")));
    }
    if p.is_k([2, 1, 1]) {
        let k2 = p.k(2).to_f64();
        let k3 = p.k(3).to_f64();
        let probe = Point::new(1.0, std::f64::consts::FRAC_PI_8, 0.5 / k2, 0.5 / k3);
        match curvature_at(p, &probe) {
            Ok(rep) => {
                out.push(CaseRecord::new(id, p, "probe R = 6").numeric(relative(rep.scalar, 6.0), tol, Some(probe.coords())));
                out.push(
                    CaseRecord::new(id, p, "probe W = 12").numeric(relative(rep.weyl_invariant, 12.0), tol, Some(probe.coords())),
                );
            }
            Err(e) => out.push(CaseRecord::new(id, p, "probe").failed(e.to_string())),
        }
    }
    out
}

fn conformal(p: &SystemParams, cfg: &SuiteConfig) -> Vec<CaseRecord> {
    let id = SuiteId::Conformal;
    let tol = cfg.tolerance(id);
    let pts = p.sample_points(cfg.points, cfg.seed);
    let fs = TestFunction::family(cfg.seed, 10);
    fs.par_iter()
        .enumerate()
        .map(|(j, f)| {
            let case = CaseRecord::new(id, p, format!("H f = (lap + V0 - R/6 - W/24) f, f#{j}"))
                .detail(format!("{:?} branch", WeylBranch::of(p)).to_lowercase());
            let mut worst = (0.0f64, None);
            for pt in &pts {
                match conformal_identity_check(p, pt, f) {
                    Ok(r) => {
                        if r.relative > worst.0 || worst.1.is_none() {
                            worst = (r.relative, Some(pt.coords()));
                        }
                    }
                    Err(e) => return case.failed(e.to_string()),
                }
            }
            case.numeric(worst.0, tol, worst.1)
        })
        .collect()
}

fn example211(p: &SystemParams, cfg: &SuiteConfig) -> Vec<CaseRecord> {
    let id = SuiteId::Example211;
    let tol = cfg.tolerance(id);
    let op = match example_l1_plus(p) {
        Ok(op) => op,
        Err(e) => return vec![CaseRecord::new(id, p, "L1+ transcription").failed(e.to_string())],
    };
    let order = op.max_order();
    let mut out = vec![CaseRecord::new(id, p, "L1+ has order 5")
        .exact(order == 5, (order as f64 - 5.0).abs())
        .detail(format!("max derivative order {order}"))];
    let w = omega_f64(p);
    let alg = LatticeAlgebra::new(p);
    let lp = alg.l_plus(1);
    let pts = p.sample_points(cfg.points, cfg.seed);
    let (p1, q1) = p.ratio(1);
    let states: Vec<QuantumState> = QuantumState::window(cfg.nmax.min(POINTWISE_NMAX))
        .into_iter()
        .filter(|s| identity_interior(p, 1, s) || (s.n[0] >= p1 && s.n[1] >= q1))
        .collect();
    let states = spread(&states, 12);
    let cases: Vec<CaseRecord> = states.par_iter().map(|s| {
        let case = CaseRecord::new(id, p, "L1+ psi = (Xi1+ + Xi1-) psi").state(*s);
        let run = || -> Result<(f64, Option<[f64; 4]>), String> {
            let psi = Wavefunction::new(p, s).map_err(|e| e.to_string())?;
            let targets: Vec<(f64, Wavefunction)> = lp
                .apply_state(s)
                .iter()
                .map(|(t, c)| Ok((c.eval_f64(w), Wavefunction::new(p, t).map_err(|e| e.to_string())?)))
                .collect::<Result<_, String>>()?;
            sup_relative(&pts, |pt| {
                let f = psi.eval(pt, order).map_err(|e| e.to_string())?;
                let (val, scale) = op.apply_jet_scaled(&f).map_err(|e| e.to_string())?;
                let mut expect = 0.0;
                for (c, t) in &targets {
                    expect += c * t.eval(pt, 0).map_err(|e| e.to_string())?.value();
                }
                Ok(((val.value() - expect).abs(), scale.max(expect.abs())))
            })
        };
        match run() {
            Ok((res, pt)) => case.numeric(res, tol, pt),
            Err(e) => case.failed(e),
        }
    }).collect();
    out.extend(cases);
    out
}
