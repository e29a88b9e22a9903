//! Configurations E[l] = R^l, flat multi-qudit states, Pauli operators and the Fourier transform.
//!
//! A [`FlatState`] stores amplitudes q^{n/2} ω^{φ(x)} as the integer table φ together with n.
//! The computational basis is {F⁺|x⟩}; the Hadamard basis is {|x⟩}, on which Z(a) shifts and
//! X(a) multiplies by ω^{⟨a,x⟩}.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::galois_ring::{Elem, GaloisRing, Scalar};
use crate::hypergraph::OrdinalMorphism;

/// Upper bound on q^l for exact phase tables.
pub const MAX_CONFIGS: usize = 1 << 22;

/// A configuration x ∈ E[l].
pub type Config = Vec<Elem>;

/// q^l, or `TooLarge` past [`MAX_CONFIGS`].
pub fn config_count(q: usize, l: usize) -> Result<usize> {
    u32::try_from(l)
        .ok()
        .and_then(|l| q.checked_pow(l))
        .filter(|&c| c <= MAX_CONFIGS)
        .ok_or_else(|| Error::TooLarge(format!("{q}^{l} configurations")))
}

/// Mixed-radix index, last qudit fastest.
pub fn config_index(q: usize, x: &[Elem]) -> usize {
    x.iter().fold(0, |acc, e| acc * q + e.index())
}

pub fn config_at(q: usize, l: usize, mut idx: usize) -> Config {
    let mut x = vec![Elem::ZERO; l];
    for r in (0..l).rev() {
        x[r] = Elem((idx % q) as u32);
        idx /= q;
    }
    x
}

/// Calls `f(index, x)` for every x ∈ E[l] in canonical order.
pub fn for_each_config(q: usize, l: usize, mut f: impl FnMut(usize, &[Elem])) {
    let total = q.pow(l as u32);
    let mut x = vec![Elem::ZERO; l];
    for idx in 0..total {
        f(idx, &x);
        for r in (0..l).rev() {
            if x[r].index() + 1 < q {
                x[r] = Elem(x[r].0 + 1);
                break;
            }
            x[r] = Elem::ZERO;
        }
    }
}

/// ⟨x,y⟩ = Σ_r tr(x_r y_r).
pub fn trace_pairing(ring: &GaloisRing, x: &[Elem], y: &[Elem]) -> Result<Scalar> {
    if x.len() != y.len() {
        return Err(Error::GradeMismatch { expected: x.len(), got: y.len() });
    }
    Ok(pairing(ring, x, y))
}

fn pairing(ring: &GaloisRing, x: &[Elem], y: &[Elem]) -> Scalar {
    x.iter().zip(y).fold(0, |acc, (&a, &b)| ring.scalar_add(acc, ring.trace(ring.mul(a, b))))
}

/// Ef(x)_s = Σ_{f(r)=s} x_r.
pub fn ef(ring: &GaloisRing, f: &OrdinalMorphism, x: &[Elem]) -> Result<Config> {
    if x.len() != f.source_size() {
        return Err(Error::GradeMismatch { expected: f.source_size(), got: x.len() });
    }
    let mut out = vec![Elem::ZERO; f.target_size()];
    for (r, &v) in x.iter().enumerate() {
        let s = f.apply(r);
        out[s] = ring.add(out[s], v);
    }
    Ok(out)
}

/// Ef^t(y)_r = y_{f(r)}.
pub fn ef_transpose(f: &OrdinalMorphism, y: &[Elem]) -> Result<Config> {
    if y.len() != f.target_size() {
        return Err(Error::GradeMismatch { expected: f.target_size(), got: y.len() });
    }
    Ok(f.values().iter().map(|&s| y[s]).collect())
}

/// Concatenation x ⌣ y.
pub fn concat(x: &[Elem], y: &[Elem]) -> Config {
    x.iter().chain(y).copied().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Computational,
    Hadamard,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::Computational => "computational",
            Basis::Hadamard => "hadamard",
        }
    }
}

/// Σ_k c_k ω^k with ω = exp(2πi/p^r) and nonnegative integer counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloSum {
    p: u32,
    counts: Vec<u64>,
}

impl CycloSum {
    pub fn new(p: u32, counts: Vec<u64>) -> Self {
        CycloSum { p, counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Representative with the minimum removed on each fibre k mod p^{r−1}.
    ///
    /// Relations among powers of ω are spanned by Σ_{t<p} ω^{j + t p^{r−1}} = 0, so two count
    /// vectors give the same number iff they differ by a fibre-constant vector.
    fn reduced(&self) -> Vec<u64> {
        let n = self.counts.len();
        let step = n / self.p as usize;
        let mut out = self.counts.clone();
        for j in 0..step {
            let m = (0..self.p as usize).map(|t| out[j + t * step]).min().unwrap_or(0);
            for t in 0..self.p as usize {
                out[j + t * step] -= m;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&c| c == 0)
    }

    /// The value when it is a nonnegative integer.
    pub fn as_integer(&self) -> Option<u64> {
        let red = self.reduced();
        red[1..].iter().all(|&c| c == 0).then_some(red[0])
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.counts.len() as f64;
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| Complex64::from_polar(c as f64, 2.0 * PI * k as f64 / n))
            .sum()
    }
}

/// Σ_{z∈E[l]} ω^{⟨x,z⟩}, evaluated exactly.
pub fn character_sum(ring: &GaloisRing, x: &[Elem]) -> Result<CycloSum> {
    config_count(ring.order(), x.len())?;
    let mut counts = vec![0u64; ring.characteristic() as usize];
    for_each_config(ring.order(), x.len(), |_, z| counts[pairing(ring, x, z) as usize] += 1);
    Ok(CycloSum::new(ring.p(), counts))
}

/// Exact inner product q^{scale/2} · Σ c_k ω^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactInner {
    pub sum: CycloSum,
    pub q: u64,
    pub scale_exp: i64,
}

impl ExactInner {
    pub fn is_zero(&self) -> bool {
        self.sum.is_zero()
    }

    pub fn is_one(&self) -> bool {
        match self.sum.as_integer() {
            Some(m) if self.scale_exp <= 0 => {
                let e = u32::try_from(-self.scale_exp).unwrap_or(u32::MAX);
                self.q.checked_pow(e).is_some_and(|v| (m as u128 * m as u128) == v as u128)
            }
            _ => false,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.sum.to_complex() * (self.q as f64).powf(self.scale_exp as f64 / 2.0)
    }
}

/// ω^k for k ∈ [p^r].
pub fn roots_of_unity(n: u32) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)).collect()
}

/// A state whose amplitudes in the tagged basis are q^{n/2} ω^{φ(x)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatState {
    ring: Arc<GaloisRing>,
    l: usize,
    basis: Basis,
    norm_exp: i64,
    phases: Vec<Scalar>,
}

impl FlatState {
    pub fn new(ring: Arc<GaloisRing>, l: usize, basis: Basis, norm_exp: i64, phases: Vec<Scalar>) -> Result<Self> {
        let count = config_count(ring.order(), l)?;
        if phases.len() != count {
            return Err(Error::SizeMismatch { expected: count, got: phases.len() });
        }
        let n = ring.characteristic();
        let phases = phases.into_iter().map(|v| v % n).collect();
        Ok(FlatState { ring, l, basis, norm_exp, phases })
    }

    /// |0_l⟩ = Σ_x F⁺|x⟩ q^{−l/2}.
    pub fn zero_ket(ring: Arc<GaloisRing>, l: usize) -> Result<Self> {
        let count = config_count(ring.order(), l)?;
        Ok(FlatState { ring, l, basis: Basis::Computational, norm_exp: -(l as i64), phases: vec![0; count] })
    }

    pub fn ring(&self) -> &Arc<GaloisRing> {
        &self.ring
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn norm_exp(&self) -> i64 {
        self.norm_exp
    }

    pub fn phases(&self) -> &[Scalar] {
        &self.phases
    }

    pub fn phase_at(&self, x: &[Elem]) -> Scalar {
        self.phases[config_index(self.ring.order(), x)]
    }

    pub fn is_normalized(&self) -> bool {
        self.norm_exp == -(self.l as i64)
    }

    fn check_grade(&self, a: &[Elem]) -> Result<()> {
        if a.len() != self.l {
            return Err(Error::GradeMismatch { expected: self.l, got: a.len() });
        }
        Ok(())
    }

    fn with_phases(&self, phases: Vec<Scalar>) -> FlatState {
        FlatState { phases, ..self.clone() }
    }

    /// new(x) = old(x + a).
    pub(crate) fn translate(&self, a: &[Elem]) -> FlatState {
        let (ring, q) = (&*self.ring, self.ring.order());
        let mut out = vec![0; self.phases.len()];
        for_each_config(q, self.l, |idx, x| {
            let shifted = x.iter().zip(a).fold(0usize, |acc, (&u, &v)| acc * q + ring.add(u, v).index());
            out[idx] = self.phases[shifted];
        });
        self.with_phases(out)
    }

    /// new(x) = old(x) + ⟨a,x⟩ + c.
    fn add_character(&self, a: &[Elem], c: Scalar) -> FlatState {
        let ring = &*self.ring;
        let mut out = self.phases.clone();
        for_each_config(ring.order(), self.l, |idx, x| {
            out[idx] = ring.scalar_add(ring.scalar_add(out[idx], pairing(ring, a, x)), c);
        });
        self.with_phases(out)
    }

    /// Multiplies by the global phase ω^c.
    pub fn times_phase(&self, c: Scalar) -> FlatState {
        let ring = &*self.ring;
        self.with_phases(self.phases.iter().map(|&v| ring.scalar_add(v, c)).collect())
    }

    /// Z(a) = Σ_x |x+a⟩⟨x|.
    pub fn apply_pauli_z(&self, a: &[Elem]) -> Result<FlatState> {
        self.check_grade(a)?;
        Ok(match self.basis {
            Basis::Computational => self.add_character(a, 0),
            Basis::Hadamard => {
                let neg: Vec<Elem> = a.iter().map(|&v| self.ring.neg(v)).collect();
                self.translate(&neg)
            }
        })
    }

    /// X(a) = Σ_x |x⟩ω^{⟨a,x⟩}⟨x|.
    pub fn apply_pauli_x(&self, a: &[Elem]) -> Result<FlatState> {
        self.check_grade(a)?;
        Ok(match self.basis {
            Basis::Computational => self.translate(a),
            Basis::Hadamard => self.add_character(a, 0),
        })
    }

    /// ℋ_E f = Σ_y F⁺|y⟩ q^{(l−m)/2} ⟨Ef^t(y)|F.
    pub fn apply_he_morphism(&self, f: &OrdinalMorphism) -> Result<FlatState> {
        if self.basis != Basis::Computational {
            return Err(Error::WrongBasis("computational"));
        }
        if f.source_size() != self.l {
            return Err(Error::GradeMismatch { expected: self.l, got: f.source_size() });
        }
        let q = self.ring.order();
        let m = f.target_size();
        let mut out = vec![0; config_count(q, m)?];
        for_each_config(q, m, |idx, y| {
            let src = f.values().iter().fold(0usize, |acc, &s| acc * q + y[s].index());
            out[idx] = self.phases[src];
        });
        Ok(FlatState {
            ring: self.ring.clone(),
            l: m,
            basis: self.basis,
            norm_exp: self.norm_exp + self.l as i64 - m as i64,
            phases: out,
        })
    }

    /// ψ ⊗ φ.
    pub fn tensor(&self, other: &FlatState) -> Result<FlatState> {
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch);
        }
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        let count = config_count(self.ring.order(), self.l + other.l)?;
        let mut out = Vec::with_capacity(count);
        for &a in &self.phases {
            out.extend(other.phases.iter().map(|&b| self.ring.scalar_add(a, b)));
        }
        Ok(FlatState {
            ring: self.ring.clone(),
            l: self.l + other.l,
            basis: self.basis,
            norm_exp: self.norm_exp + other.norm_exp,
            phases: out,
        })
    }

    /// ⟨self|other⟩, exactly.
    pub fn inner_exact(&self, other: &FlatState) -> Result<ExactInner> {
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch);
        }
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        if self.l != other.l {
            return Err(Error::GradeMismatch { expected: self.l, got: other.l });
        }
        let n = self.ring.characteristic();
        let mut counts = vec![0u64; n as usize];
        for (&a, &b) in self.phases.iter().zip(&other.phases) {
            counts[((b + n - a) % n) as usize] += 1;
        }
        Ok(ExactInner {
            sum: CycloSum::new(self.ring.p(), counts),
            q: self.ring.order() as u64,
            scale_exp: self.norm_exp + other.norm_exp,
        })
    }

    /// Some(c) when other = ω^c · self.
    pub fn global_phase_to(&self, other: &FlatState) -> Option<Scalar> {
        if *self.ring != *other.ring || self.basis != other.basis || self.l != other.l || self.norm_exp != other.norm_exp {
            return None;
        }
        let n = self.ring.characteristic();
        let c = (other.phases[0] + n - self.phases[0]) % n;
        self.phases
            .iter()
            .zip(&other.phases)
            .all(|(&a, &b)| (a + c) % n == b)
            .then_some(c)
    }

    pub fn eq_up_to_phase(&self, other: &FlatState) -> bool {
        self.global_phase_to(other).is_some()
    }

    /// Amplitudes in the computational basis.
    pub fn to_dense(&self) -> DenseState {
        let q = self.ring.order();
        let roots = roots_of_unity(self.ring.characteristic());
        let mag = (q as f64).powf(self.norm_exp as f64 / 2.0);
        let amps: Vec<Complex64> = self.phases.iter().map(|&k| roots[k as usize] * mag).collect();
        let dense = DenseState { ring: self.ring.clone(), l: self.l, amps: DVector::from_vec(amps) };
        match self.basis {
            Basis::Computational => dense,
            Basis::Hadamard => dense.fourier(Direction::Forward),
        }
    }

    /// The same vector with the opposite basis tag. Stays flat only for basis kets and
    /// their images, so this goes through dense form and fails if flatness is lost.
    pub fn change_basis(&self, tol: f64) -> Result<FlatState> {
        let dense = match self.basis {
            Basis::Computational => self.to_dense().fourier(Direction::Inverse),
            Basis::Hadamard => self.to_dense(),
        };
        let target = match self.basis {
            Basis::Computational => Basis::Hadamard,
            Basis::Hadamard => Basis::Computational,
        };
        dense.to_flat(target, tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// F = Σ |x⟩ q^{−l/2} ω^{⟨x,y⟩} ⟨y|.
    Forward,
    /// F⁺.
    Inverse,
}

/// Complex amplitude vector of length q^l, indexed like configurations.
#[derive(Clone, Debug)]
pub struct DenseState {
    ring: Arc<GaloisRing>,
    l: usize,
    amps: DVector<Complex64>,
}

impl DenseState {
    pub fn new(ring: Arc<GaloisRing>, l: usize, amps: DVector<Complex64>) -> Result<Self> {
        let count = config_count(ring.order(), l)?;
        if amps.len() != count {
            return Err(Error::SizeMismatch { expected: count, got: amps.len() });
        }
        Ok(DenseState { ring, l, amps })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amps
    }

    /// Applies F_l or F_l⁺ qudit by qudit.
    pub fn fourier(&self, dir: Direction) -> DenseState {
        let f1 = fourier_matrix(&self.ring, 1);
        let f1 = match dir {
            Direction::Forward => f1,
            Direction::Inverse => f1.adjoint(),
        };
        let q = self.ring.order();
        let mut v = self.amps.clone();
        for r in 0..self.l {
            let stride = q.pow((self.l - 1 - r) as u32);
            let block = stride * q;
            let mut out = DVector::from_element(v.len(), Complex64::new(0.0, 0.0));
            for base in (0..v.len()).step_by(block) {
                for off in 0..stride {
                    for a in 0..q {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for b in 0..q {
                            acc += f1[(a, b)] * v[base + b * stride + off];
                        }
                        out[base + a * stride + off] = acc;
                    }
                }
            }
            v = out;
        }
        DenseState { ring: self.ring.clone(), l: self.l, amps: v }
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn approx_eq(&self, other: &DenseState, tol: f64) -> bool {
        self.amps.len() == other.amps.len() && (&self.amps - &other.amps).camax() <= tol
    }

    /// Recovers a flat state if all amplitudes share one magnitude q^{n/2} and phases are
    /// p^r-th roots of unity, to within `tol`.
    pub fn to_flat(&self, basis: Basis, tol: f64) -> Result<FlatState> {
        let q = self.ring.order() as f64;
        let n = self.ring.characteristic();
        let mag = self.amps[0].norm();
        if mag <= tol {
            return Err(Error::OutOfRange("state is not flat".into()));
        }
        let norm_exp = (2.0 * mag.ln() / q.ln()).round() as i64;
        if (q.powf(norm_exp as f64 / 2.0) - mag).abs() > tol {
            return Err(Error::OutOfRange("magnitude is not a power of sqrt(q)".into()));
        }
        let roots = roots_of_unity(n);
        let scale = q.powf(norm_exp as f64 / 2.0);
        let mut phases = Vec::with_capacity(self.amps.len());
        for a in self.amps.iter() {
            let k = roots
                .iter()
                .position(|w| (w * scale - a).norm() <= tol)
                .ok_or_else(|| Error::OutOfRange("state is not flat".into()))?;
            phases.push(k as Scalar);
        }
        FlatState::new(self.ring.clone(), self.l, basis, norm_exp, phases)
    }
}

/// F_l as a dense matrix.
pub fn fourier_matrix(ring: &GaloisRing, l: usize) -> DMatrix<Complex64> {
    let q = ring.order();
    let size = q.pow(l as u32);
    let roots = roots_of_unity(ring.characteristic());
    let scale = (q as f64).powf(-(l as f64) / 2.0);
    let configs: Vec<Config> = (0..size).map(|i| config_at(q, l, i)).collect();
    DMatrix::from_fn(size, size, |i, j| roots[pairing(ring, &configs[i], &configs[j]) as usize] * scale)
}

/// Σ_x |Ef(x)⟩⟨x| in the Hadamard basis.
pub fn he_morphism_matrix_hadamard(ring: &GaloisRing, f: &OrdinalMorphism) -> Result<DMatrix<Complex64>> {
    let q = ring.order();
    let (l, m) = (f.source_size(), f.target_size());
    let mut mat = DMatrix::from_element(config_count(q, m)?, config_count(q, l)?, Complex64::new(0.0, 0.0));
    for_each_config(q, l, |idx, x| {
        let y = ef(ring, f, x).expect("grade matches");
        mat[(config_index(q, &y), idx)] = Complex64::new(1.0, 0.0);
    });
    Ok(mat)
}
