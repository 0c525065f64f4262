//! Curvature of the diagonal metric
//! g = dr² + r²dθ₁² + r²sin²(k₁θ₁)dθ₂² + r²sin²(k₁θ₁)sin²(k₂θ₂)dθ₃²,
//! the Laplace–Beltrami operator, and the potentials entering H.
//!
//! All derivatives of the metric come from jets of the closed-form
//! components; tensors are computed as jets so that curvature scalars can
//! serve as operator coefficients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffops::{build_tower, Coefficient, DiffOpError, DiffOperator};
use crate::model::{ModelError, Point, SystemParams};
use crate::numcore::{unit, Jet, NumError, NVARS};

/// Sign applied to R^a_{bcd} = ∂_cΓ^a_{db} − ∂_dΓ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}.
/// With Ricci R_{bd} = R^a_{bad} this reproduces the closed-form scalar curvature.
pub const RIEMANN_SIGN: f64 = 1.0;

/// Tolerance for the symmetry and trace invariants, relative to the largest
/// Riemann component (or absolute when that is below one).
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("W_abcd W^abcd = {0} is negative")]
    NegativeContraction(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    DiffOp(#[from] DiffOpError),
}

/// The diagonal metric components g₀₀ … g₃₃ of one parameter set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricField {
    pub k1: f64,
    pub k2: f64,
}

impl MetricField {
    pub fn new(params: &SystemParams) -> Self {
        MetricField { k1: params.k(1).to_f64(), k2: params.k(2).to_f64() }
    }

    /// g_aa as jets in the coordinate jets (r, θ₁, θ₂, θ₃).
    pub fn components(&self, v: &[Jet; NVARS]) -> [Jet; NVARS] {
        let r2 = v[0].powi(2);
        let s1 = v[1].scale(self.k1).sin().powi(2);
        let s2 = v[2].scale(self.k2).sin().powi(2);
        let g2 = &r2 * &s1;
        let g3 = &g2 * &s2;
        [v[0].constant_like(1.0), r2, g2, g3]
    }

    /// det g = r⁶ sin⁴(k₁θ₁) sin²(k₂θ₂).
    pub fn determinant(&self, v: &[Jet; NVARS]) -> Jet {
        let [a, b, c, d] = self.components(v);
        &(&a * &b) * &(&c * &d)
    }
}

/// Christoffel symbols, Riemann, Ricci, scalar curvature and Weyl tensor as
/// jets of a common order at one point.
#[derive(Clone, Debug)]
pub struct CurvatureJets {
    pub metric: [Jet; NVARS],
    pub inverse: [Jet; NVARS],
    /// Γ^a_{bc} at index [a][b][c].
    pub christoffel: Vec<Jet>,
    /// R_{abcd} with the first index lowered.
    pub riemann: Vec<Jet>,
    pub ricci: Vec<Jet>,
    pub scalar: Jet,
    pub weyl: Vec<Jet>,
    /// W_{abcd}W^{abcd}.
    pub weyl_square: Jet,
}

fn idx3(a: usize, b: usize, c: usize) -> usize {
    (a * NVARS + b) * NVARS + c
}

fn idx4(a: usize, b: usize, c: usize, d: usize) -> usize {
    idx3(a, b, c) * NVARS + d
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// All curvature tensors at `p` as jets of the given order.
pub fn curvature_jets(params: &SystemParams, p: &Point, order: usize) -> Result<CurvatureJets, GeometryError> {
    p.check_cell(params)?;
    Ok(curvature_jets_unchecked(params, p, order)?)
}

fn curvature_jets_unchecked(params: &SystemParams, p: &Point, order: usize) -> Result<CurvatureJets, NumError> {
    let metric_field = MetricField::new(params);
    let v = p.variables(order + 2)?;
    let g = metric_field.components(&v);
    let mut dg = Vec::with_capacity(NVARS * NVARS);
    for ga in &g {
        for c in 0..NVARS {
            dg.push(ga.partial(&unit(c))?);
        }
    }
    let ginv1: Vec<Jet> = g.iter().map(|x| x.recip()?.truncate(order + 1)).collect::<Result<_, _>>()?;
    let zero1 = Jet::zero(p.coords(), order + 1)?;

    // Γ^a_{bc} = ½ g^{aa}(δ_{ac}∂_b g_aa + δ_{ab}∂_c g_aa − δ_{bc}∂_a g_bb)
    let mut gamma1 = Vec::with_capacity(NVARS.pow(3));
    for a in 0..NVARS {
        for b in 0..NVARS {
            for c in 0..NVARS {
                let s = &(&(&dg[a * NVARS + b] * delta(a, c)) + &(&dg[a * NVARS + c] * delta(a, b)))
                    - &(&dg[b * NVARS + a] * delta(b, c));
                let t = if s.max_abs() == 0.0 { zero1.clone() } else { &ginv1[a] * &s.scale(0.5) };
                gamma1.push(t);
            }
        }
    }
    let gamma: Vec<Jet> = gamma1.iter().map(|x| x.truncate(order)).collect::<Result<_, _>>()?;
    let mut dgamma = Vec::with_capacity(NVARS.pow(4));
    for x in &gamma1 {
        for d in 0..NVARS {
            dgamma.push(x.partial(&unit(d))?);
        }
    }
    let dgam = |a, b, c, d| &dgamma[idx3(a, b, c) * NVARS + d];

    let gm: Vec<Jet> = g.iter().map(|x| x.truncate(order)).collect::<Result<_, _>>()?;
    let ginv: Vec<Jet> = ginv1.iter().map(|x| x.truncate(order)).collect::<Result<_, _>>()?;
    let zero = Jet::zero(p.coords(), order)?;

    let mut riemann = Vec::with_capacity(NVARS.pow(4));
    for a in 0..NVARS {
        for b in 0..NVARS {
            for c in 0..NVARS {
                for d in 0..NVARS {
                    let mut up = dgam(a, d, b, c) - dgam(a, c, b, d);
                    for e in 0..NVARS {
                        up = &up + &(&gamma[idx3(a, c, e)] * &gamma[idx3(e, d, b)]);
                        up = &up - &(&gamma[idx3(a, d, e)] * &gamma[idx3(e, c, b)]);
                    }
                    riemann.push(&gm[a] * &up.scale(RIEMANN_SIGN));
                }
            }
        }
    }

    // R_{bd} = R^a_{bad} = g^{aa} R_{abad}
    let mut ricci = Vec::with_capacity(NVARS * NVARS);
    for b in 0..NVARS {
        for d in 0..NVARS {
            let mut acc = zero.clone();
            for a in 0..NVARS {
                acc = &acc + &(&ginv[a] * &riemann[idx4(a, b, a, d)]);
            }
            ricci.push(acc);
        }
    }
    let mut scalar = zero.clone();
    for b in 0..NVARS {
        scalar = &scalar + &(&ginv[b] * &ricci[b * NVARS + b]);
    }

    let gd = |a: usize, b: usize| if a == b { gm[a].clone() } else { zero.clone() };
    let ric = |a: usize, b: usize| &ricci[a * NVARS + b];
    let mut weyl = Vec::with_capacity(NVARS.pow(4));
    let mut weyl_square = zero.clone();
    for a in 0..NVARS {
        for b in 0..NVARS {
            for c in 0..NVARS {
                for d in 0..NVARS {
                    let ricci_part = &(&(&gd(a, c) * ric(b, d)) - &(&gd(a, d) * ric(b, c)))
                        + &(&(&gd(b, d) * ric(a, c)) - &(&gd(b, c) * ric(a, d)));
                    let metric_part = &(&gd(a, c) * &gd(b, d)) - &(&gd(a, d) * &gd(b, c));
                    let w = &(&riemann[idx4(a, b, c, d)] - &ricci_part.scale(0.5))
                        + &(&metric_part * &scalar.scale(1.0 / 6.0));
                    let raise = &(&ginv[a] * &ginv[b]) * &(&ginv[c] * &ginv[d]);
                    weyl_square = &weyl_square + &(&(&w * &w) * &raise);
                    weyl.push(w);
                }
            }
        }
    }

    Ok(CurvatureJets {
        metric: to_array(gm),
        inverse: to_array(ginv),
        christoffel: gamma,
        riemann,
        ricci,
        scalar,
        weyl,
        weyl_square,
    })
}

fn to_array(v: Vec<Jet>) -> [Jet; NVARS] {
    v.try_into().expect("one jet per coordinate")
}

/// Which sign of the closed-form 𝒲 the conformal check uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeylBranch {
    /// k₁ > k₂: 𝒲 = +√(3W·W).
    Positive,
    /// k₁ < k₂: 𝒲 = −√(3W·W).
    Negative,
    /// k₁ = k₂: 𝒲 = 0.
    Vanishing,
}

impl WeylBranch {
    pub fn of(params: &SystemParams) -> Self {
        let d = params.k(1).square() - params.k(2).square();
        if d.is_positive() {
            WeylBranch::Positive
        } else if d.is_negative() {
            WeylBranch::Negative
        } else {
            WeylBranch::Vanishing
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            WeylBranch::Positive => 1.0,
            WeylBranch::Negative => -1.0,
            WeylBranch::Vanishing => 0.0,
        }
    }
}

/// Curvature values at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub point: [f64; NVARS],
    pub christoffel: [[[f64; NVARS]; NVARS]; NVARS],
    /// R_{abcd}, first index lowered.
    pub riemann: [[[[f64; NVARS]; NVARS]; NVARS]; NVARS],
    pub ricci: [[f64; NVARS]; NVARS],
    pub scalar: f64,
    pub weyl: [[[[f64; NVARS]; NVARS]; NVARS]; NVARS],
    /// Diagonal of the inverse metric, for raising indices.
    pub inverse_metric: [f64; NVARS],
    /// W_{abcd}W^{abcd} before scaling and square root.
    pub weyl_contraction: f64,
    pub weyl_invariant: f64,
}

/// Largest violation of each symmetry of R_{abcd} and of Weyl tracelessness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryDefects {
    pub antisym_first: f64,
    pub antisym_last: f64,
    pub pair_exchange: f64,
    pub bianchi: f64,
    pub weyl_trace: f64,
    /// max |R_abcd|, the scale the defects are compared against.
    pub scale: f64,
}

impl SymmetryDefects {
    pub fn max_defect(&self) -> f64 {
        [self.antisym_first, self.antisym_last, self.pair_exchange, self.bianchi, self.weyl_trace]
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// Every defect within `tol` times max(scale, 1).
    pub fn within(&self, tol: f64) -> bool {
        self.max_defect() <= tol * self.scale.max(1.0)
    }
}

impl CurvatureReport {
    pub fn symmetry_defects(&self) -> SymmetryDefects {
        let r = &self.riemann;
        let w = &self.weyl;
        let gi = &self.inverse_metric;
        let mut d = SymmetryDefects {
            antisym_first: 0.0,
            antisym_last: 0.0,
            pair_exchange: 0.0,
            bianchi: 0.0,
            weyl_trace: 0.0,
            scale: 0.0,
        };
        let n = 0..NVARS;
        for a in n.clone() {
            for b in n.clone() {
                for c in n.clone() {
                    for e in n.clone() {
                        let x = r[a][b][c][e];
                        d.scale = d.scale.max(x.abs());
                        d.antisym_first = d.antisym_first.max((x + r[b][a][c][e]).abs());
                        d.antisym_last = d.antisym_last.max((x + r[a][b][e][c]).abs());
                        d.pair_exchange = d.pair_exchange.max((x - r[c][e][a][b]).abs());
                        d.bianchi = d.bianchi.max((x + r[a][c][e][b] + r[a][e][b][c]).abs());
                    }
                }
            }
        }
        // Contract every index pair of the Weyl tensor.
        for x in n.clone() {
            for y in n.clone() {
                let mut t = [0.0f64; 6];
                for m in n.clone() {
                    let g = gi[m];
                    t[0] += g * w[m][m][x][y];
                    t[1] += g * w[m][x][m][y];
                    t[2] += g * w[m][x][y][m];
                    t[3] += g * w[x][m][m][y];
                    t[4] += g * w[x][m][y][m];
                    t[5] += g * w[x][y][m][m];
                }
                d.weyl_trace = t.iter().fold(d.weyl_trace, |acc, v| acc.max(v.abs()));
            }
        }
        d
    }
}

fn nest3(v: &[Jet]) -> [[[f64; NVARS]; NVARS]; NVARS] {
    std::array::from_fn(|a| std::array::from_fn(|b| std::array::from_fn(|c| v[idx3(a, b, c)].value())))
}

fn nest4(v: &[Jet]) -> [[[[f64; NVARS]; NVARS]; NVARS]; NVARS] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| std::array::from_fn(|c| std::array::from_fn(|d| v[idx4(a, b, c, d)].value())))
    })
}

/// √(3 W_abcd W^abcd); a clearly negative contraction signals an engine bug.
pub fn weyl_invariant(report: &CurvatureReport) -> Result<f64, GeometryError> {
    invariant_from_contraction(report.weyl_contraction, report.riemann_scale())
}

impl CurvatureReport {
    fn riemann_scale(&self) -> f64 {
        self.riemann.iter().flatten().flatten().flatten().fold(1.0f64, |m, x| m.max(x.abs()))
    }
}

fn invariant_from_contraction(x: f64, scale: f64) -> Result<f64, GeometryError> {
    if x < -1e-12 * scale * scale {
        return Err(GeometryError::NegativeContraction(x));
    }
    Ok((3.0 * x.max(0.0)).sqrt())
}

/// Curvature values at a cell point.
pub fn curvature_at(params: &SystemParams, p: &Point) -> Result<CurvatureReport, GeometryError> {
    let j = curvature_jets(params, p, 0)?;
    let mut report = CurvatureReport {
        point: p.coords(),
        christoffel: nest3(&j.christoffel),
        riemann: nest4(&j.riemann),
        ricci: std::array::from_fn(|a| std::array::from_fn(|b| j.ricci[a * NVARS + b].value())),
        scalar: j.scalar.value(),
        weyl: nest4(&j.weyl),
        inverse_metric: j.inverse.clone().map(|x| x.value()),
        weyl_contraction: j.weyl_square.value(),
        weyl_invariant: 0.0,
    };
    report.weyl_invariant = weyl_invariant(&report)?;
    Ok(report)
}

/// ℛ = −6/r² + k₁²(6/r² − 2/(r²sin²(k₁θ₁))) + 2k₂²/(r²sin²(k₁θ₁)).
pub fn scalar_curvature_closed(params: &SystemParams, p: &Point) -> f64 {
    let (k1, k2) = (params.k(1).to_f64(), params.k(2).to_f64());
    let r2 = p.r * p.r;
    let s2 = (k1 * p.theta[0]).sin().powi(2);
    -6.0 / r2 + k1 * k1 * (6.0 / r2 - 2.0 / (r2 * s2)) + 2.0 * k2 * k2 / (r2 * s2)
}

/// 𝒲 = 2(k₁² − k₂²)/(r²sin²(k₁θ₁)), signed.
pub fn weyl_closed(params: &SystemParams, p: &Point) -> f64 {
    let (k1, k2) = (params.k(1).to_f64(), params.k(2).to_f64());
    2.0 * (k1 * k1 - k2 * k2) / (p.r * p.r * (k1 * p.theta[0]).sin().powi(2))
}

/// ∇² = Σ g^{aa}∂ₐ² + (∂ₐ(√g g^{aa})/√g)∂ₐ.
pub fn laplace_beltrami(params: &SystemParams) -> DiffOperator {
    let m = MetricField::new(params);
    let mut op = DiffOperator::zero();
    for a in 0..NVARS {
        let mut second = [0u8; NVARS];
        second[a] = 2;
        op = op.with_term(
            second,
            Coefficient::from_point_fn(format!("g^{a}{a}"), move |p, order| {
                m.components(&p.variables(order)?)[a].recip()
            }),
        );
        op = op.with_term(
            unit(a),
            Coefficient::from_point_fn(format!("∂{a}(√g g^{a}{a})/√g"), move |p, order| {
                let v = p.variables(order + 1)?;
                let sqrt_g = m.determinant(&v).sqrt()?;
                let h = sqrt_g.try_mul(&m.components(&v)[a].recip()?)?;
                h.partial(&unit(a))?.try_div(&sqrt_g.truncate(order)?)
            }),
        );
    }
    op
}

fn inv_sq(x: &Jet) -> Result<Jet, NumError> {
    x.powi(2).recip()
}

/// V₀ = −ω²r² + β₁/(r²cos²(k₁θ₁)) + β₂/(r²sin²(k₁θ₁)cos²(k₂θ₂))
///      + β₃/(r²sin²(k₁θ₁)sin²(k₂θ₂)cos²(k₃θ₃)) + β₄/(r²sin²(k₁θ₁)sin²(k₂θ₂)sin²(k₃θ₃)).
pub fn potential_v0(params: &SystemParams) -> Result<Coefficient, GeometryError> {
    let w = params.omega_value()?.to_f64();
    let k = [1, 2, 3].map(|i| params.k(i).to_f64());
    let b = [1, 2, 3, 4].map(|i| params.beta(i).to_f64());
    Ok(Coefficient::new("V0", move |v| {
        let ir2 = inv_sq(&v[0])?;
        let x: Vec<Jet> = (0..3).map(|i| v[i + 1].scale(k[i])).collect();
        let is1 = inv_sq(&x[0].sin())?;
        let is12 = &is1 * &inv_sq(&x[1].sin())?;
        let t1 = inv_sq(&x[0].cos())?.scale(b[0]);
        let t2 = (&is1 * &inv_sq(&x[1].cos())?).scale(b[1]);
        let t3 = (&is12 * &inv_sq(&x[2].cos())?).scale(b[2]);
        let t4 = (&is12 * &inv_sq(&x[2].sin())?).scale(b[3]);
        let angular = &(&t1 + &t2) + &(&t3 + &t4);
        Ok(&v[0].powi(2).scale(-w * w) + &(&ir2 * &angular))
    }))
}

/// V̂₁ + V̂₂ = ¼(k₁² − k₂²)/(r²sin²(k₁θ₁)) + (1 − k₁²)/r².
pub fn quantum_corrections(params: &SystemParams) -> Coefficient {
    let (k1, k2) = (params.k(1).to_f64(), params.k(2).to_f64());
    Coefficient::new("V̂1 + V̂2", move |v| {
        let ir2 = inv_sq(&v[0])?;
        let is1 = inv_sq(&v[1].scale(k1).sin())?;
        Ok(&(&ir2 * &is1).scale(0.25 * (k1 * k1 - k2 * k2)) + &ir2.scale(1.0 - k1 * k1))
    })
}

/// −ℛ/6 − 𝒲/24 with ℛ and √(3W·W) from the curvature engine and 𝒲 signed
/// by the branch of k₁² − k₂².
pub fn curvature_corrections(params: &SystemParams) -> Coefficient {
    let params = params.clone();
    let sign = WeylBranch::of(&params).sign();
    Coefficient::from_point_fn("−ℛ/6 − 𝒲/24", move |p, order| {
        let j = curvature_jets_unchecked(&params, p, order)?;
        let w = if sign == 0.0 { j.scalar.constant_like(0.0) } else { j.weyl_square.scale(3.0).sqrt()?.scale(sign) };
        Ok(&j.scalar.scale(-1.0 / 6.0) - &w.scale(1.0 / 24.0))
    })
}

/// ∇² + V₀ + V̂₁ + V̂₂.
pub fn hamiltonian_with_corrections(params: &SystemParams) -> Result<DiffOperator, GeometryError> {
    Ok(laplace_beltrami(params)
        .with_term([0; NVARS], potential_v0(params)?)
        .with_term([0; NVARS], quantum_corrections(params)))
}

/// ∇² + V₀ − ℛ/6 − 𝒲/24.
pub fn hamiltonian_with_curvature(params: &SystemParams) -> Result<DiffOperator, GeometryError> {
    Ok(laplace_beltrami(params)
        .with_term([0; NVARS], potential_v0(params)?)
        .with_term([0; NVARS], curvature_corrections(params)))
}

/// A smooth test function exp(a·x)(b₀ + Σ bᵢxᵢ²)sin(c·x + d) of the coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub a: [f64; NVARS],
    pub b: [f64; NVARS + 1],
    pub c: [f64; NVARS],
    pub d: f64,
}

impl TestFunction {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let mut draw = |lo: f64, hi: f64| rng.gen_range(lo..hi);
        TestFunction {
            a: std::array::from_fn(|_| draw(-0.5, 0.5)),
            b: std::array::from_fn(|i| if i == 0 { draw(1.0, 2.0) } else { draw(-1.0, 1.0) }),
            c: std::array::from_fn(|_| draw(-1.5, 1.5)),
            d: draw(0.3, 1.2),
        }
    }

    /// `count` functions determined by `seed`.
    pub fn family(seed: u64, count: usize) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| Self::random(&mut rng)).collect()
    }

    pub fn eval(&self, v: &[Jet; NVARS]) -> Jet {
        let lin = |w: &[f64; NVARS]| (0..NVARS).fold(v[0].constant_like(0.0), |acc, i| &acc + &v[i].scale(w[i]));
        let quad = (0..NVARS).fold(v[0].constant_like(self.b[0]), |acc, i| &acc + &v[i].powi(2).scale(self.b[i + 1]));
        &(&lin(&self.a).exp() * &quad) * &lin(&self.c).add_scalar(self.d).sin()
    }

    pub fn jet(&self, p: &Point, order: usize) -> Result<Jet, NumError> {
        Ok(self.eval(&p.variables(order)?))
    }
}

/// Outcome of comparing the tower H with ∇² + V₀ − ℛ/6 − 𝒲/24 on one function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConformalResidual {
    pub residual: f64,
    pub relative: f64,
    pub branch: WeylBranch,
}

/// |Hf − (∇²f + V₀f − ℛf/6 − 𝒲f/24)| at `p`, with H built from the operator tower.
pub fn conformal_identity_check(params: &SystemParams, p: &Point, f: &TestFunction) -> Result<ConformalResidual, GeometryError> {
    p.check_cell(params)?;
    let tower = build_tower(params)?;
    let geo = hamiltonian_with_curvature(params)?;
    let fj = f.jet(p, 2)?;
    let (h, hs) = tower.h.apply_jet_scaled(&fj)?;
    let (g, gs) = geo.apply_jet_scaled(&fj)?;
    let residual = (h.value() - g.value()).abs();
    let scale = hs.max(gs).max(f64::MIN_POSITIVE);
    Ok(ConformalResidual { residual, relative: residual / scale, branch: WeylBranch::of(params) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{spectral_chain, QuantumState, Wavefunction};

    fn params(k: &str) -> SystemParams {
        SystemParams::parse(k, "1/3,2/5,3/7,1/2", Some("1")).unwrap()
    }

    #[test]
    fn probe_211() {
        let p = params("2,1,1");
        let pt = Point::new(1.0, std::f64::consts::FRAC_PI_4 / 2.0, 0.4, 0.4);
        let rep = curvature_at(&p, &pt).unwrap();
        assert!((rep.scalar - 6.0).abs() < 1e-10, "{}", rep.scalar);
        assert!((rep.weyl_invariant - 12.0).abs() < 1e-9, "{}", rep.weyl_invariant);
        assert!(rep.symmetry_defects().within(SYMMETRY_TOL));
    }

    #[test]
    fn flat_case_vanishes() {
        let p = params("1,1,1");
        for pt in p.sample_points(5, 3) {
            let rep = curvature_at(&p, &pt).unwrap();
            assert!(rep.scalar.abs() < 1e-10 && rep.weyl_invariant < 1e-10);
        }
    }

    #[test]
    fn laplacian_of_r_squared() {
        let p = params("2,1,1");
        let lb = laplace_beltrami(&p);
        let pt = Point::new(0.7, 0.3, 0.5, 0.2);
        let out = lb.apply(|q: &Point, m| -> Result<Jet, NumError> { Ok(q.variables(m)?[0].powi(2)) }, &pt, 0).unwrap();
        assert!((out.value() - 8.0).abs() < 1e-12);
        let coefs = lb.coefficients_at(&pt, 0).unwrap();
        let t1 = coefs.iter().find(|(mu, _)| *mu == unit(1)).unwrap().1.value();
        assert!((t1 - 2.0 * 2.0 / (0.6f64).tan() / 0.49).abs() < 1e-12);
    }

    #[test]
    fn corrected_hamiltonian_on_eigenfunction() {
        let p = params("2,1,1");
        let s = QuantumState::new(1, 1, 0, 2);
        let psi = Wavefunction::new(&p, &s).unwrap();
        let e = spectral_chain(&p, &s).energy.eval_f64(1.0);
        let h = hamiltonian_with_corrections(&p).unwrap();
        for pt in p.sample_points(4, 9) {
            let f = psi.eval(&pt, 2).unwrap();
            let (out, scale) = h.apply_jet_scaled(&f).unwrap();
            assert!((out.value() - e * f.value()).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn conformal_identity_small_sample() {
        for k in ["2,1,1", "1/2,1,1"] {
            let p = params(k);
            let fs = TestFunction::family(5, 2);
            for pt in p.sample_points(3, 4) {
                for f in &fs {
                    let r = conformal_identity_check(&p, &pt, f).unwrap();
                    assert!(r.relative < 1e-10, "{k}: {r:?}");
                }
            }
        }
    }
}
