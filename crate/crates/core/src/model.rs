//! Model parameters, lattice states, the spectral parameter chain and the
//! separated eigenfunctions.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numcore::{Jet, NumError, OmegaPoly, Rational, NVARS};
use crate::specfun::{jacobi, laguerre};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("k{0} must be a positive rational, got {1}")]
    NonPositiveK(usize, Rational),
    #[error("a{0} must be a positive rational, got {1}")]
    NonPositiveA(usize, Rational),
    #[error("omega must be positive, got {0}")]
    NonPositiveOmega(Rational),
    #[error("frequency ratio {0} has a numerator or denominator too large for lattice steps")]
    RatioTooLarge(Rational),
    #[error("expected {expected} comma-separated rationals, got {got:?}")]
    Arity { expected: usize, got: String },
    #[error("wavefunctions need a fixed numeric omega")]
    FormalOmega,
    #[error("point {0:?} lies outside the principal cell r > 0, 0 < k_i θ_i < π/2")]
    OutsideCell([f64; NVARS]),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Formal ω for the lattice algebra, or a fixed positive value for numerics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Omega {
    Formal,
    Fixed(Rational),
}

/// Frequencies k₁..k₃, couplings a₁..a₄ and ω.
///
/// The couplings β are derived on demand and cannot be set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemParams {
    k: [Rational; 3],
    a: [Rational; 4],
    omega: Omega,
    ratios: [(u32, u32); 3],
}

impl SystemParams {
    pub fn new(k: [Rational; 3], a: [Rational; 4], omega: Omega) -> Result<Self, ModelError> {
        for (i, ki) in k.iter().enumerate() {
            if !ki.is_positive() {
                return Err(ModelError::NonPositiveK(i + 1, ki.clone()));
            }
        }
        for (i, ai) in a.iter().enumerate() {
            if !ai.is_positive() {
                return Err(ModelError::NonPositiveA(i + 1, ai.clone()));
            }
        }
        if let Omega::Fixed(w) = &omega {
            if !w.is_positive() {
                return Err(ModelError::NonPositiveOmega(w.clone()));
            }
        }
        let mut ratios = [(0, 0); 3];
        let mut prev = Rational::one();
        for i in 0..3 {
            let ratio = &k[i] / &prev;
            let p = ratio.numer().try_into().ok().filter(|&p: &u32| p <= 64);
            let q = ratio.denom().try_into().ok().filter(|&q: &u32| q <= 64);
            match (p, q) {
                (Some(p), Some(q)) => ratios[i] = (p, q),
                _ => return Err(ModelError::RatioTooLarge(ratio)),
            }
            prev = k[i].clone();
        }
        Ok(SystemParams { k, a, omega, ratios })
    }

    /// Parses comma-separated lists such as `"2,1,1"` and `"1/2,1/2,1/2,1/2"`.
    pub fn parse(k: &str, a: &str, omega: Option<&str>) -> Result<Self, ModelError> {
        let k = parse_list::<3>(k)?;
        let a = parse_list::<4>(a)?;
        let omega = match omega.map(str::trim) {
            None | Some("formal") => Omega::Formal,
            Some(w) => Omega::Fixed(w.parse()?),
        };
        Self::new(k, a, omega)
    }

    /// kᵢ for i = 0..=3, with k₀ = 1.
    pub fn k(&self, i: usize) -> Rational {
        if i == 0 {
            Rational::one()
        } else {
            self.k[i - 1].clone()
        }
    }

    pub fn ks(&self) -> &[Rational; 3] {
        &self.k
    }

    /// aᵢ for i = 1..=4.
    pub fn a(&self, i: usize) -> &Rational {
        &self.a[i - 1]
    }

    pub fn couplings(&self) -> &[Rational; 4] {
        &self.a
    }

    /// (pᵢ, qᵢ) with pᵢ/qᵢ = kᵢ/kᵢ₋₁ reduced, i = 1..=3.
    pub fn ratio(&self, i: usize) -> (u32, u32) {
        self.ratios[i - 1]
    }

    pub fn p(&self, i: usize) -> u32 {
        self.ratios[i - 1].0
    }

    pub fn q(&self, i: usize) -> u32 {
        self.ratios[i - 1].1
    }

    /// β₁ = k₁²(¼−a₁²), β₂ = k₂²(¼−a₂²), β₃ = k₃²(¼−a₄²), β₄ = k₃²(¼−a₃²).
    pub fn beta(&self, i: usize) -> Rational {
        let quarter = Rational::new(1, 4);
        let (k, a) = match i {
            1 => (&self.k[0], &self.a[0]),
            2 => (&self.k[1], &self.a[1]),
            3 => (&self.k[2], &self.a[3]),
            4 => (&self.k[2], &self.a[2]),
            _ => panic!("beta index {i} out of range 1..=4"),
        };
        k.square() * (&quarter - a.square())
    }

    pub fn omega(&self) -> &Omega {
        &self.omega
    }

    /// The numeric ω, or an error in formal mode.
    pub fn omega_value(&self) -> Result<&Rational, ModelError> {
        match &self.omega {
            Omega::Fixed(w) => Ok(w),
            Omega::Formal => Err(ModelError::FormalOmega),
        }
    }

    pub fn with_omega(&self, omega: Omega) -> Result<Self, ModelError> {
        Self::new(self.k.clone(), self.a.clone(), omega)
    }

    pub fn is_k(&self, k: [i64; 3]) -> bool {
        self.k.iter().zip(k).all(|(x, y)| *x == Rational::int(y))
    }

    /// Draws `count` points from the middle 60% of each coordinate range,
    /// with r ∈ (0, 2.5/√ω).
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = match &self.omega {
            Omega::Fixed(w) => w.to_f64(),
            Omega::Formal => 1.0,
        };
        let rmax = 2.5 / w.sqrt();
        (0..count)
            .map(|_| {
                let r = rmax * rng.gen_range(0.2..0.8);
                let mut theta = [0.0; 3];
                for (i, t) in theta.iter_mut().enumerate() {
                    *t = FRAC_PI_2 / self.k[i].to_f64() * rng.gen_range(0.2..0.8);
                }
                Point { r, theta }
            })
            .collect()
    }
}

impl fmt::Display for SystemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Rational]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(f, "k=({}) a=({})", join(&self.k), join(&self.a))?;
        match &self.omega {
            Omega::Formal => write!(f, " ω formal"),
            Omega::Fixed(w) => write!(f, " ω={w}"),
        }
    }
}

pub fn parse_list<const N: usize>(s: &str) -> Result<[Rational; N], ModelError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(ModelError::Arity { expected: N, got: s.to_string() });
    }
    let mut out: [Rational; N] = std::array::from_fn(|_| Rational::zero());
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part.parse()?;
    }
    Ok(out)
}

/// Lattice point (n₀, n₁, n₂, n₃).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuantumState {
    pub n: [u32; 4],
}

impl QuantumState {
    pub const GROUND: QuantumState = QuantumState { n: [0; 4] };

    pub fn new(n0: u32, n1: u32, n2: u32, n3: u32) -> Self {
        QuantumState { n: [n0, n1, n2, n3] }
    }

    /// Shifts nᵢ by `delta`; `None` if the result leaves the lattice.
    pub fn shifted(&self, i: usize, delta: i64) -> Option<Self> {
        let v = i64::from(self.n[i]) + delta;
        let mut out = *self;
        out.n[i] = u32::try_from(v).ok()?;
        Some(out)
    }

    /// All states with every nᵢ ≤ nmax, in lexicographic order.
    pub fn window(nmax: u32) -> Vec<QuantumState> {
        let r = 0..=nmax;
        let mut out = Vec::new();
        for n0 in r.clone() {
            for n1 in r.clone() {
                for n2 in r.clone() {
                    for n3 in r.clone() {
                        out.push(QuantumState::new(n0, n1, n2, n3));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for QuantumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.n;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// The separation constants of a lattice state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralData {
    pub a2: Rational,
    pub a1: Rational,
    pub a0: Rational,
    pub ell3: Rational,
    pub ell2: Rational,
    pub ell1: Rational,
    pub energy: OmegaPoly,
}

impl SpectralData {
    /// Aᵢ for i = 0..=2.
    pub fn big_a(&self, i: usize) -> &Rational {
        match i {
            0 => &self.a0,
            1 => &self.a1,
            2 => &self.a2,
            _ => panic!("A index {i} out of range 0..=2"),
        }
    }

    /// ℓᵢ for i = 1..=3.
    pub fn ell(&self, i: usize) -> &Rational {
        match i {
            1 => &self.ell1,
            2 => &self.ell2,
            3 => &self.ell3,
            _ => panic!("ℓ index {i} out of range 1..=3"),
        }
    }

    /// Eigenvalue of the i-th tower operator as an ω-polynomial: E for i = 0, ℓᵢ otherwise.
    pub fn eigenvalue(&self, i: usize) -> OmegaPoly {
        if i == 0 {
            self.energy.clone()
        } else {
            OmegaPoly::constant(self.ell(i).clone())
        }
    }
}

/// A₂, A₁, A₀ and ℓ₃, ℓ₂, ℓ₁, E for a lattice state.
pub fn spectral_chain(params: &SystemParams, state: &QuantumState) -> SpectralData {
    let [n0, n1, n2, n3] = state.n.map(Rational::from);
    let (k1, k2, k3) = (params.k(1), params.k(2), params.k(3));
    let (a1, a2, a3, a4) = (params.a(1), params.a(2), params.a(3), params.a(4));
    let two = Rational::int(2);
    let m3 = &two * &n3 + a3 + a4 + 1;
    let a2_big = &k3 / &k2 * &m3;
    let m2 = &two * &n2 + &a2_big + a2 + 1;
    let a1_big = &k2 / &k1 * &m2;
    let a0_big = &k1 * (&two * &n1 + a1 + &a1_big + 1);
    let ell3 = -(k3.square() * m3.square());
    let ell2 = k2.square() * Rational::new(1, 4) - k2.square() * m2.square();
    let ell1 = k1.square() - a0_big.square();
    let energy = OmegaPoly::omega().scale(&-(Rational::int(4) * &n0 + &two * &a0_big + &two));
    let data = SpectralData { a2: a2_big, a1: a1_big, a0: a0_big, ell3, ell2, ell1, energy };
    debug_assert_eq!(data.energy, energy_expanded(params, state));
    data
}

/// E = −2ω(2n₀ + 2k₁n₁ + 2k₂n₂ + 2k₃n₃ + k₁a₁ + k₂a₂ + k₃a₃ + k₃a₄ + k₁ + k₂ + k₃ + 1).
pub fn energy_expanded(params: &SystemParams, state: &QuantumState) -> OmegaPoly {
    let [n0, n1, n2, n3] = state.n.map(Rational::from);
    let (k1, k2, k3) = (params.k(1), params.k(2), params.k(3));
    let two = Rational::int(2);
    let s = &two * &n0
        + &two * &k1 * &n1
        + &two * &k2 * &n2
        + &two * &k3 * &n3
        + &k1 * params.a(1)
        + &k2 * params.a(2)
        + &k3 * params.a(3)
        + &k3 * params.a(4)
        + &k1
        + &k2
        + &k3
        + 1;
    OmegaPoly::omega().scale(&(-two * s))
}

/// States with every nᵢ ≤ nmax grouped by exact energy, highest E first.
pub fn degeneracy_classes(params: &SystemParams, nmax: u32) -> Vec<(OmegaPoly, Vec<QuantumState>)> {
    let mut classes: BTreeMap<OmegaPoly, Vec<QuantumState>> = BTreeMap::new();
    for s in QuantumState::window(nmax) {
        classes.entry(spectral_chain(params, &s).energy).or_default().push(s);
    }
    let mut out: Vec<_> = classes.into_iter().collect();
    // E is −cω with c > 0, so the smallest c is the highest energy.
    out.sort_by(|x, y| (-x.0.coeff(1)).cmp(&-y.0.coeff(1)));
    out
}

/// A point (r, θ₁, θ₂, θ₃).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub r: f64,
    pub theta: [f64; 3],
}

impl Point {
    pub fn new(r: f64, t1: f64, t2: f64, t3: f64) -> Self {
        Point { r, theta: [t1, t2, t3] }
    }

    pub fn coords(&self) -> [f64; NVARS] {
        [self.r, self.theta[0], self.theta[1], self.theta[2]]
    }

    pub fn in_cell(&self, params: &SystemParams) -> bool {
        self.r > 0.0
            && self.theta.iter().enumerate().all(|(i, t)| {
                let x = params.k(i + 1).to_f64() * t;
                x > 0.0 && x < FRAC_PI_2
            })
    }

    pub fn check_cell(&self, params: &SystemParams) -> Result<(), ModelError> {
        if self.in_cell(params) {
            Ok(())
        } else {
            Err(ModelError::OutsideCell(self.coords()))
        }
    }

    /// Coordinate jets (r, θ₁, θ₂, θ₃) at this point.
    pub fn variables(&self, order: usize) -> Result<[Jet; NVARS], NumError> {
        let base = self.coords();
        Ok([
            Jet::variable(base, order, 0)?,
            Jet::variable(base, order, 1)?,
            Jet::variable(base, order, 2)?,
            Jet::variable(base, order, 3)?,
        ])
    }
}

/// Jacobi parameters and gauge offsets of one angular factor,
/// Θ_n^{(a,b)} = sin^{a+c}(kθ) cos^{b+d}(kθ) P_n^{(a,b)}(cos 2kθ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AngularSlotGauge {
    pub slot: usize,
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub k: Rational,
}

impl AngularSlotGauge {
    /// Slot 3: (a₃, a₄, ½, ½); slot 2: (A₂, a₂, 0, ½); slot 1: (A₁, a₁, −½, ½).
    pub fn for_slot(params: &SystemParams, slot: usize, a: Rational, b: Rational) -> Self {
        let half = Rational::half();
        let c = match slot {
            1 => -&half,
            2 => Rational::zero(),
            3 => half.clone(),
            _ => panic!("angular slot {slot} out of range 1..=3"),
        };
        AngularSlotGauge { slot, a, b, c, d: half, k: params.k(slot) }
    }

    /// The gauge of slot `slot` at a lattice state.
    pub fn at_state(params: &SystemParams, slot: usize, state: &QuantumState) -> Self {
        let chain = spectral_chain(params, state);
        let (a, b) = match slot {
            1 => (chain.a1, params.a(1).clone()),
            2 => (chain.a2, params.a(2).clone()),
            3 => (params.a(3).clone(), params.a(4).clone()),
            _ => panic!("angular slot {slot} out of range 1..=3"),
        };
        Self::for_slot(params, slot, a, b)
    }

    /// N = 2n + a + b + 1.
    pub fn big_n(&self, n: u32) -> Rational {
        Rational::int(2) * Rational::from(n) + &self.a + &self.b + 1
    }

    pub fn with_a(&self, a: Rational) -> Self {
        AngularSlotGauge { a, ..self.clone() }
    }

    /// Θ_n^{(a,b)} evaluated on a jet of the slot angle.
    pub fn theta(&self, n: u32, angle: &Jet) -> Result<Jet, NumError> {
        let x = angle.scale(self.k.to_f64());
        let (s, c) = (x.sin(), x.cos());
        let poly = jacobi(n, &self.a, &self.b, &x.scale(2.0).cos());
        Ok(s.powf((&self.a + &self.c).to_f64())? * c.powf((&self.b + &self.d).to_f64())? * poly)
    }
}

/// Ψ₀ = ω^{A/2} e^{−ωr²/2} r^{A−1} L_n^{(A)}(ωr²) on a jet of r.
pub fn radial_factor(n0: u32, a0: &Rational, omega: &Rational, r: &Jet) -> Result<Jet, NumError> {
    let w = omega.to_f64();
    let r2 = r * r;
    let x = r2.scale(w);
    let pref = w.powf(a0.to_f64() / 2.0);
    let gauss = x.scale(-0.5).exp();
    Ok((gauss * r.powf(a0.to_f64() - 1.0)? * laguerre(n0, a0, &x)).scale(pref))
}

/// Quantum numbers together with the parameters of each separated factor.
///
/// For a lattice state these follow from the spectral chain; ladder steps
/// move through labels that need not come from any lattice state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorLabels {
    pub n: [u32; 4],
    /// Laguerre parameter A₀ of the radial factor.
    pub radial: Rational,
    /// Jacobi parameters (a, b) of the angular slots 1..3.
    pub jacobi: [(Rational, Rational); 3],
}

impl FactorLabels {
    pub fn of_state(params: &SystemParams, state: &QuantumState) -> Self {
        let c = spectral_chain(params, state);
        FactorLabels {
            n: state.n,
            radial: c.a0,
            jacobi: [
                (c.a1, params.a(1).clone()),
                (c.a2, params.a(2).clone()),
                (params.a(3).clone(), params.a(4).clone()),
            ],
        }
    }

    pub fn gauge(&self, params: &SystemParams, slot: usize) -> AngularSlotGauge {
        let (a, b) = self.jacobi[slot - 1].clone();
        AngularSlotGauge::for_slot(params, slot, a, b)
    }

    pub fn state(&self) -> QuantumState {
        QuantumState { n: self.n }
    }
}

/// Separated eigenfunction Ψ = Ψ₀(r)Ψ₁(θ₁)Ψ₂(θ₂)Ψ₃(θ₃).
#[derive(Clone, Debug)]
pub struct Wavefunction {
    params: SystemParams,
    labels: FactorLabels,
    omega: Rational,
}

impl Wavefunction {
    pub fn new(params: &SystemParams, state: &QuantumState) -> Result<Self, ModelError> {
        Self::from_labels(params, FactorLabels::of_state(params, state))
    }

    pub fn from_labels(params: &SystemParams, labels: FactorLabels) -> Result<Self, ModelError> {
        let omega = params.omega_value()?.clone();
        Ok(Wavefunction { params: params.clone(), labels, omega })
    }

    pub fn labels(&self) -> &FactorLabels {
        &self.labels
    }

    /// Factor i (0 radial, 1..3 angular) as a jet of the full point.
    pub fn factor(&self, i: usize, p: &Point, order: usize) -> Result<Jet, ModelError> {
        p.check_cell(&self.params)?;
        let vars = p.variables(order)?;
        Ok(self.factor_on(i, &vars)?)
    }

    fn factor_on(&self, i: usize, vars: &[Jet; NVARS]) -> Result<Jet, NumError> {
        if i == 0 {
            radial_factor(self.labels.n[0], &self.labels.radial, &self.omega, &vars[0])
        } else {
            self.labels.gauge(&self.params, i).theta(self.labels.n[i], &vars[i])
        }
    }

    /// The full product as a jet of the given order.
    pub fn eval(&self, p: &Point, order: usize) -> Result<Jet, ModelError> {
        p.check_cell(&self.params)?;
        let vars = p.variables(order)?;
        let mut acc = self.factor_on(0, &vars)?;
        for i in 1..4 {
            acc = &acc * &self.factor_on(i, &vars)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn params(k: &str, a: &str) -> SystemParams {
        SystemParams::parse(k, a, Some("1")).unwrap()
    }

    #[test]
    fn chain_flat_half() {
        let p = params("1,1,1", "1/2,1/2,1/2,1/2");
        let c = spectral_chain(&p, &QuantumState::GROUND);
        assert_eq!(c.a2, Rational::int(2));
        assert_eq!(c.a1, q(7, 2));
        assert_eq!(c.a0, Rational::int(5));
        assert_eq!(c.ell3, Rational::int(-4));
        assert_eq!(c.ell2, Rational::int(-12));
        assert_eq!(c.ell1, Rational::int(-24));
        assert_eq!(c.energy, OmegaPoly::omega().scale(&Rational::int(-12)));
    }

    #[test]
    fn chain_211() {
        let p = params("2,1,1", "1/2,1/2,1/2,1/2");
        let c = spectral_chain(&p, &QuantumState::GROUND);
        assert_eq!((c.a2, c.a1, c.a0), (Rational::int(2), q(7, 4), q(13, 2)));
        assert_eq!(c.energy, OmegaPoly::omega().scale(&Rational::int(-15)));
    }

    #[test]
    fn ratios_and_betas() {
        let p = params("3/2,3/2,1", "1/3,2/5,3/7,1/2");
        assert_eq!(p.ratio(1), (3, 2));
        assert_eq!(p.ratio(2), (1, 1));
        assert_eq!(p.ratio(3), (2, 3));
        assert_eq!(p.beta(3), Rational::zero());
        assert_eq!(p.beta(4), q(1, 4) - q(9, 49));
    }

    #[test]
    fn invalid_params() {
        assert!(matches!(SystemParams::parse("0,1,1", "1,1,1,1", None), Err(ModelError::NonPositiveK(1, _))));
        assert!(matches!(SystemParams::parse("1,1,1", "1,-1,1,1", None), Err(ModelError::NonPositiveA(2, _))));
        assert!(matches!(SystemParams::parse("1,1", "1,1,1,1", None), Err(ModelError::Arity { .. })));
        assert!(SystemParams::parse("1,1,1", "1,1,1,0.5", None).is_err());
    }

    #[test]
    fn radial_ground_value() {
        let p = params("1,1,1", "1/2,1/2,1/2,1/2");
        let psi = Wavefunction::new(&p, &QuantumState::GROUND).unwrap();
        let pt = Point::new(1.0, 0.3, 0.4, 0.5);
        let f0 = psi.factor(0, &pt, 0).unwrap().value();
        assert!((f0 - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn slot3_ground_is_sin_cos() {
        let p = params("1,1,1", "1/2,1/2,1/2,1/2");
        let psi = Wavefunction::new(&p, &QuantumState::GROUND).unwrap();
        let pt = Point::new(1.0, 0.3, 0.4, 0.5);
        let f3 = psi.factor(3, &pt, 2).unwrap();
        assert!((f3.value() - 0.5f64.sin() * 0.5f64.cos()).abs() < 1e-15);
        assert!((f3.derivative(&[0, 0, 0, 2]) + 4.0 * f3.value()).abs() < 1e-14);
    }

    #[test]
    fn wavefunction_errors() {
        let p = SystemParams::parse("1,1,1", "1,1,1,1", None).unwrap();
        assert!(matches!(Wavefunction::new(&p, &QuantumState::GROUND), Err(ModelError::FormalOmega)));
        let p = params("2,1,1", "1,1,1,1");
        let psi = Wavefunction::new(&p, &QuantumState::GROUND).unwrap();
        assert!(matches!(psi.eval(&Point::new(1.0, 0.8, 0.3, 0.3), 1), Err(ModelError::OutsideCell(_))));
    }

    #[test]
    fn degeneracy_examples() {
        let p = params("2,1,1", "1/2,1/2,1/2,1/2");
        let classes = degeneracy_classes(&p, 2);
        assert_eq!(classes[0].1, vec![QuantumState::GROUND]);
        let e = spectral_chain(&p, &QuantumState::new(2, 0, 0, 0)).energy;
        let class = classes.iter().find(|c| c.0 == e).unwrap();
        assert!(class.1.contains(&QuantumState::new(0, 1, 0, 0)));
        let flat = params("1,1,1", "1/2,1/2,1/2,1/2");
        let first = &degeneracy_classes(&flat, 1)[1].1;
        assert_eq!(first.len(), 4);
    }

    #[test]
    fn samples_stay_in_cell() {
        let p = params("3/2,3/2,1", "1,1,1,1");
        let pts = p.sample_points(50, 7);
        assert!(pts.iter().all(|x| x.in_cell(&p)));
        assert_eq!(pts, p.sample_points(50, 7));
    }
}
