//! Calibrated hypergraph states: phase functions, D and K operators, hypergraph bases,
//! covariance and local maximal entangleability checks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cyclicity::power_map;
use crate::error::{Error, Result};
use crate::galois_ring::{Elem, GaloisRing, Scalar};
use crate::hypergraph::{CalibratedHypergraph, OrdinalMorphism, PolyHypergraph, WeightedHypergraph};
use crate::qudit_space::{
    config_at, config_count, config_index, ef_transpose, for_each_config, roots_of_unity, trace_pairing, Basis,
    FlatState,
};

/// Size guards for dense cross-checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DenseCap {
    /// Largest q^l for dense operator matrices.
    pub operator: usize,
    /// Largest q^{2l} for the extended LME state.
    pub lme: usize,
}

impl Default for DenseCap {
    fn default() -> Self {
        DenseCap { operator: 1024, lme: 4096 }
    }
}

impl DenseCap {
    /// Defaults, with both limits replaced by `HGS_DENSE_CAP` when it parses.
    pub fn from_env() -> Self {
        match std::env::var("HGS_DENSE_CAP").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            Some(c) => DenseCap { operator: c, lme: c },
            None => DenseCap::default(),
        }
    }
}

struct Term {
    value: Scalar,
    factors: Vec<(usize, Vec<Elem>)>,
}

fn compile(hg: &CalibratedHypergraph) -> Vec<Term> {
    let ring = hg.ring();
    hg.edges()
        .values()
        .flat_map(|cal| cal.iter())
        .map(|(w, &value)| Term { value, factors: w.iter().map(|(v, u)| (v, power_map(ring, u))).collect() })
        .collect()
}

fn eval_terms(ring: &GaloisRing, terms: &[Term], x: &[Elem]) -> Scalar {
    terms.iter().fold(0, |acc, t| {
        let prod = t.factors.iter().fold(Elem::ONE, |p, (v, pm)| ring.mul(p, pm[x[*v].index()]));
        ring.scalar_add(acc, ring.scalar_mul(t.value, ring.trace(prod)))
    })
}

/// σ(x) = Σ_X Σ_w ϱ_X(w) tr(Π_r x_r^{w(r)}).
pub fn phase_function(hg: &CalibratedHypergraph, x: &[Elem]) -> Result<Scalar> {
    if x.len() != hg.l() {
        return Err(Error::GradeMismatch { expected: hg.l(), got: x.len() });
    }
    for &e in x {
        hg.ring().check(e)?;
    }
    Ok(eval_terms(hg.ring(), &compile(hg), x))
}

/// σ over all of E[l] in canonical order.
pub fn phase_table(hg: &CalibratedHypergraph) -> Result<Vec<Scalar>> {
    let ring = hg.ring();
    let mut table = vec![0; config_count(ring.order(), hg.l())?];
    let terms = compile(hg);
    for_each_config(ring.order(), hg.l(), |idx, x| table[idx] = eval_terms(ring, &terms, x));
    Ok(table)
}

/// Σ_X α_X tr(Π_{r∈X} x_r).
pub fn weighted_phase_function(wh: &WeightedHypergraph, x: &[Elem]) -> Result<Scalar> {
    if x.len() != wh.l() {
        return Err(Error::GradeMismatch { expected: wh.l(), got: x.len() });
    }
    let ring = wh.ring();
    Ok(wh.edges().iter().fold(0, |acc, (e, &a)| {
        let prod = e.vertices().iter().fold(Elem::ONE, |p, &v| ring.mul(p, x[v]));
        ring.scalar_add(acc, ring.scalar_mul(a, ring.trace(prod)))
    }))
}

/// Σ_X Σ_a τ_X(a) tr(Π_r x_r^{a(r)}) with ordinary powers.
pub fn poly_phase_function(ph: &PolyHypergraph, x: &[Elem]) -> Result<Scalar> {
    if x.len() != ph.l() {
        return Err(Error::GradeMismatch { expected: ph.l(), got: x.len() });
    }
    let ring = ph.ring();
    Ok(ph.edges().values().flat_map(|t| t.iter()).fold(0, |acc, (key, &v)| {
        let prod = key.iter().fold(Elem::ONE, |p, &(r, k)| ring.mul(p, ring.pow(x[r], k as u64)));
        ring.scalar_add(acc, ring.scalar_mul(v, ring.trace(prod)))
    }))
}

/// Flat state with the given phase table over E[l], normalized, computational basis.
pub fn state_from_table(hg_ring: &std::sync::Arc<GaloisRing>, l: usize, table: Vec<Scalar>) -> Result<FlatState> {
    FlatState::new(hg_ring.clone(), l, Basis::Computational, -(l as i64), table)
}

/// |(H,ϱ)⟩ = D_{(H,ϱ)}|0_l⟩.
pub fn build_state(hg: &CalibratedHypergraph) -> Result<FlatState> {
    state_from_table(hg.ring(), hg.l(), phase_table(hg)?)
}

fn check_state(hg: &CalibratedHypergraph, psi: &FlatState) -> Result<()> {
    if **psi.ring() != **hg.ring() {
        return Err(Error::RingMismatch);
    }
    if psi.basis() != Basis::Computational {
        return Err(Error::WrongBasis("computational"));
    }
    if psi.l() != hg.l() {
        return Err(Error::GradeMismatch { expected: hg.l(), got: psi.l() });
    }
    Ok(())
}

/// D_{(H,ϱ)} ψ: adds σ to every phase.
pub fn apply_d(hg: &CalibratedHypergraph, psi: &FlatState) -> Result<FlatState> {
    check_state(hg, psi)?;
    let sigma = phase_table(hg)?;
    let ring = hg.ring();
    let phases = psi.phases().iter().zip(&sigma).map(|(&a, &b)| ring.scalar_add(a, b)).collect();
    FlatState::new(ring.clone(), psi.l(), Basis::Computational, psi.norm_exp(), phases)
}

/// The stabilizer group {K(a)} of a calibrated hypergraph state, with σ cached.
pub struct Stabilizer {
    hg: CalibratedHypergraph,
    sigma: Vec<Scalar>,
}

impl Stabilizer {
    pub fn new(hg: &CalibratedHypergraph) -> Result<Self> {
        Ok(Stabilizer { hg: hg.clone(), sigma: phase_table(hg)? })
    }

    pub fn sigma(&self) -> &[Scalar] {
        &self.sigma
    }

    pub fn state(&self) -> FlatState {
        state_from_table(self.hg.ring(), self.hg.l(), self.sigma.clone()).expect("table size checked")
    }

    /// K(a) = D X(a) D⁺: new(y) = old(y+a) + σ(y) − σ(y+a).
    pub fn apply(&self, a: &[Elem], psi: &FlatState) -> Result<FlatState> {
        check_state(&self.hg, psi)?;
        if a.len() != self.hg.l() {
            return Err(Error::GradeMismatch { expected: self.hg.l(), got: a.len() });
        }
        let ring = self.hg.ring();
        let q = ring.order();
        let mut out = vec![0; self.sigma.len()];
        for_each_config(q, self.hg.l(), |idx, y| {
            let shifted = y.iter().zip(a).fold(0usize, |acc, (&u, &v)| acc * q + ring.add(u, v).index());
            let delta = ring.scalar_add(self.sigma[idx], ring.scalar_neg(self.sigma[shifted]));
            out[idx] = ring.scalar_add(psi.phases()[shifted], delta);
        });
        FlatState::new(ring.clone(), psi.l(), Basis::Computational, psi.norm_exp(), out)
    }

    /// |(H,ϱ),b⟩ = Z(b)|(H,ϱ)⟩.
    pub fn basis_state(&self, b: &[Elem]) -> Result<FlatState> {
        self.state().apply_pauli_z(b)
    }

    /// K(a) in the computational basis.
    pub fn matrix(&self, a: &[Elem]) -> Result<DMatrix<Complex64>> {
        let ring = self.hg.ring();
        let q = ring.order();
        let size = self.sigma.len();
        let roots = roots_of_unity(ring.characteristic());
        let mut m = DMatrix::from_element(size, size, Complex64::new(0.0, 0.0));
        for col in 0..size {
            let x = config_at(q, self.hg.l(), col);
            let y: Vec<Elem> = x.iter().zip(a).map(|(&u, &v)| ring.sub(u, v)).collect();
            let row = config_index(q, &y);
            let ph = ring.scalar_add(self.sigma[row], ring.scalar_neg(self.sigma[col]));
            m[(row, col)] = roots[ph as usize];
        }
        Ok(m)
    }

    /// Σ_b |(H,ϱ),b⟩ ω^{⟨a,b⟩} ⟨(H,ϱ),b| as a dense matrix.
    pub fn spectral_matrix(&self, a: &[Elem]) -> Result<DMatrix<Complex64>> {
        let ring = self.hg.ring();
        let q = ring.order();
        let size = self.sigma.len();
        let roots = roots_of_unity(ring.characteristic());
        let mut m = DMatrix::from_element(size, size, Complex64::new(0.0, 0.0));
        for bi in 0..size {
            let b = config_at(q, self.hg.l(), bi);
            let v = self.basis_state(&b)?.to_dense().into_amplitudes();
            let ev = roots[trace_pairing(ring, a, &b)? as usize];
            m += (&v * v.adjoint()) * ev;
        }
        Ok(m)
    }
}

/// K(a)ψ for the stabilizer of (H,ϱ).
pub fn stabilizer_apply(hg: &CalibratedHypergraph, a: &[Elem], psi: &FlatState) -> Result<FlatState> {
    Stabilizer::new(hg)?.apply(a, psi)
}

/// |(H,ϱ),a⟩.
pub fn basis_state(hg: &CalibratedHypergraph, a: &[Elem]) -> Result<FlatState> {
    Stabilizer::new(hg)?.basis_state(a)
}

/// ℋ_E f|(H,ϱ)⟩ = |G_C f(H,ϱ)⟩, compared exactly.
pub fn check_covariance(hg: &CalibratedHypergraph, f: &OrdinalMorphism) -> Result<bool> {
    let lhs = build_state(hg)?.apply_he_morphism(f)?;
    let rhs = build_state(&hg.apply_morphism(f)?)?;
    Ok(lhs == rhs)
}

/// Dense matrix of ℋ_E f in the computational basis, q^m × q^l.
pub fn he_morphism_matrix(ring: &GaloisRing, f: &OrdinalMorphism) -> Result<DMatrix<Complex64>> {
    let q = ring.order();
    let (l, m) = (f.source_size(), f.target_size());
    let scale = (q as f64).powf((l as f64 - m as f64) / 2.0);
    let mut mat = DMatrix::from_element(config_count(q, m)?, config_count(q, l)?, Complex64::new(0.0, 0.0));
    for_each_config(q, m, |idx, y| {
        let src = ef_transpose(f, y).expect("grade matches");
        mat[(idx, config_index(q, &src))] = Complex64::new(scale, 0.0);
    });
    Ok(mat)
}

fn guard(ring: &GaloisRing, l: usize, cap: usize) -> Result<usize> {
    let size = config_count(ring.order(), l)?;
    if size > cap {
        return Err(Error::TooLarge(format!("dense dimension {size} exceeds cap {cap}")));
    }
    Ok(size)
}

/// ℋf K(a) ℋf⁺ = q^{l−m} Σ_{Ef^t(b)=a} K'(b) for every a, to tolerance `tol`.
pub fn check_stabilizer_pushforward(hg: &CalibratedHypergraph, f: &OrdinalMorphism, cap: &DenseCap, tol: f64) -> Result<bool> {
    let ring = hg.ring();
    let (l, m) = (hg.l(), f.target_size());
    guard(ring, l, cap.operator)?;
    let size_m = guard(ring, m, cap.operator)?;
    let q = ring.order();
    let hf = he_morphism_matrix(ring, f)?;
    let hf_adj = hf.adjoint();
    let k = Stabilizer::new(hg)?;
    let kp = Stabilizer::new(&hg.apply_morphism(f)?)?;
    let kp_mats: Vec<DMatrix<Complex64>> =
        (0..size_m).map(|bi| kp.matrix(&config_at(q, m, bi))).collect::<Result<_>>()?;
    let scale = (q as f64).powi(l as i32 - m as i32);
    let mut ok = true;
    for_each_config(q, l, |_, a| {
        if !ok {
            return;
        }
        let lhs = &hf * k.matrix(a).expect("grade matches") * &hf_adj;
        let mut rhs = DMatrix::from_element(size_m, size_m, Complex64::new(0.0, 0.0));
        for (bi, kb) in kp_mats.iter().enumerate() {
            let b = config_at(q, m, bi);
            if ef_transpose(f, &b).expect("grade matches") == a {
                rhs += kb;
            }
        }
        rhs *= Complex64::new(scale, 0.0);
        ok = (lhs - rhs).camax() <= tol;
    });
    Ok(ok)
}

/// {Z(x)|ψ⟩ : x ∈ E[l]} is orthonormal, by exact inner products.
pub fn lme_exact(hg: &CalibratedHypergraph, cap: &DenseCap) -> Result<bool> {
    let ring = hg.ring();
    let size = guard(ring, hg.l(), cap.operator)?;
    let psi = build_state(hg)?;
    let q = ring.order();
    let states: Vec<FlatState> =
        (0..size).map(|i| psi.apply_pauli_z(&config_at(q, hg.l(), i))).collect::<Result<_>>()?;
    for (i, s) in states.iter().enumerate() {
        for (j, t) in states.iter().enumerate().skip(i) {
            let ip = s.inner_exact(t)?;
            let good = if i == j { ip.is_one() } else { ip.is_zero() };
            if !good {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Reduced density of Σ_x Z(x)|ψ⟩ ⊗ F⁺|x⟩ q^{−l/2} on the first factor equals 1/q^l.
pub fn lme_dense(hg: &CalibratedHypergraph, cap: &DenseCap, tol: f64) -> Result<bool> {
    let ring = hg.ring();
    let size = config_count(ring.order(), hg.l())?;
    if size.checked_mul(size).is_none_or(|s| s > cap.lme) {
        return Err(Error::TooLarge(format!("extended state of dimension {size}^2 exceeds cap {}", cap.lme)));
    }
    let psi = build_state(hg)?;
    let q = ring.order();
    let scale = (size as f64).sqrt().recip();
    let mut m = DMatrix::from_element(size, size, Complex64::new(0.0, 0.0));
    for j in 0..size {
        let col = psi.apply_pauli_z(&config_at(q, hg.l(), j))?.to_dense().into_amplitudes() * Complex64::new(scale, 0.0);
        m.set_column(j, &col);
    }
    let rho = &m * m.adjoint();
    let target = DMatrix::<Complex64>::identity(size, size) * Complex64::new(1.0 / size as f64, 0.0);
    Ok((rho - target).camax() <= tol)
}

/// Both LME paths.
pub fn lme_check(hg: &CalibratedHypergraph, cap: &DenseCap, tol: f64) -> Result<bool> {
    Ok(lme_exact(hg, cap)? && lme_dense(hg, cap, tol)?)
}
