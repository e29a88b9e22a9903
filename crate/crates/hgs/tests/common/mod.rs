//! Shared fixtures, seeded instance generators and the acceptance checks. The checks return
//! `Err(reason)` on the first mismatch so both the acceptance binary and ordinary tests can
//! report them.
#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hgs::canonicalize::{
    effectivize, is_effective, is_primitive, poly_to_calibrated, primitive_core, qubit_to_weighted,
    weighted_to_calibrated,
};
use hgs::cyclicity::{h_x, index_period, monoid_add, special_exponents, CycExponent};
use hgs::field_poly::{
    basic_power_matrix, basic_power_matrix_inverse, gauss_inverse, identity, m_polynomial, mat_mul, power_matrix,
    power_matrix_inverse, reduce_mod_universal, FieldPolynomial,
};
use hgs::hyperstate::{
    build_state, check_covariance, lme_dense, lme_exact, phase_table, poly_phase_function, state_from_table,
    weighted_phase_function, DenseCap, Stabilizer,
};
use hgs::io::parse_hypergraph;
use hgs::io::AnyHypergraph;
use hgs::marked_cz::{marked_phase_table, marked_state, marked_to_calibrated};
use hgs::qudit_space::{config_at, config_count, trace_pairing};
use hgs::{
    named_ring, standard_ring, CalibratedHypergraph, Elem, ExpFn, GaloisRing, Hyperedge, MarkedHypergraph,
    OrdinalMorphism, PolyHypergraph, WeightedHypergraph,
};

pub type Check = Result<(), String>;

/// Tolerance for every floating-point comparison.
pub const TOL: f64 = 1e-9;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|err| err.to_string())
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn load(name: &str) -> AnyHypergraph {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|err| panic!("{name}: {err}"));
    parse_hypergraph(&text).unwrap_or_else(|err| panic!("{name}: {err}"))
}

pub fn calibrated(name: &str) -> CalibratedHypergraph {
    match load(name) {
        AnyHypergraph::Calibrated(h) => h,
        other => panic!("{name} is {}", other.kind()),
    }
}

pub fn marked(name: &str) -> (MarkedHypergraph, Elem) {
    match load(name) {
        AnyHypergraph::Marked(h, x) => (h, x),
        other => panic!("{name} is {}", other.kind()),
    }
}

pub fn ring(name: &str) -> Arc<GaloisRing> {
    named_ring(name).unwrap_or_else(|| panic!("no ring {name}"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random exponent with each component in Z_x.
pub fn random_exponent(ring: &GaloisRing, rng: &mut impl Rng) -> CycExponent {
    let dense: Vec<u32> = ring
        .elements()
        .map(|x| {
            let (i, p) = index_period(ring, x);
            if rng.random_bool(0.3) { rng.random_range(0..i + p) } else { 0 }
        })
        .collect();
    CycExponent::from_dense(ring, &dense).unwrap()
}

pub fn random_edge(l: usize, rng: &mut impl Rng) -> Hyperedge {
    loop {
        let v: Vec<usize> = (0..l).filter(|_| rng.random_bool(0.5)).collect();
        if !v.is_empty() {
            return Hyperedge::new(v).unwrap();
        }
    }
}

/// Sparse random calibration: a few edges, each with a few keys supported inside the edge.
pub fn random_calibrated(ring: &Arc<GaloisRing>, l: usize, rng: &mut impl Rng) -> CalibratedHypergraph {
    let mut h = CalibratedHypergraph::new(ring.clone(), l);
    if l == 0 {
        return h;
    }
    let n = ring.characteristic();
    for _ in 0..rng.random_range(0..4) {
        let x = random_edge(l, rng);
        for _ in 0..rng.random_range(1..4) {
            let pairs = x.vertices().iter().map(|&v| (v, random_exponent(ring, rng))).collect();
            h.add_value(&x, ExpFn::new(ring, pairs), rng.random_range(1..n)).unwrap();
        }
    }
    h
}

pub fn random_weighted(ring: &Arc<GaloisRing>, l: usize, rng: &mut impl Rng) -> WeightedHypergraph {
    let mut w = WeightedHypergraph::new(ring.clone(), l);
    for _ in 0..rng.random_range(0..5) {
        w.set_weight(random_edge(l, rng), rng.random_range(1..ring.characteristic())).unwrap();
    }
    w
}

pub fn random_poly(ring: &Arc<GaloisRing>, l: usize, rng: &mut impl Rng) -> PolyHypergraph {
    let delta = special_exponents(ring).delta;
    let mut ph = PolyHypergraph::new(ring.clone(), l);
    for _ in 0..rng.random_range(0..4) {
        let x = random_edge(l, rng);
        for _ in 0..rng.random_range(1..3) {
            let a: Vec<(usize, u32)> = x.vertices().iter().map(|&v| (v, rng.random_range(0..=delta))).collect();
            ph.add_term(&x, &a, rng.random_range(0..ring.characteristic())).unwrap();
        }
    }
    ph
}

pub fn random_map(l: usize, m: usize, rng: &mut impl Rng) -> OrdinalMorphism {
    OrdinalMorphism::new(m, (0..l).map(|_| rng.random_range(0..m)).collect()).unwrap()
}

fn el(ring: &GaloisRing, c: &[u32]) -> Elem {
    ring.elem(c).unwrap()
}

// ---------------------------------------------------------------- criterion 1

/// Printed sign patterns in the order 00, 01, 10, 11 (1 marks a minus sign).
pub const BELL_SIGNS: [(&str, [u32; 4]); 4] =
    [("bell_00", [0, 0, 0, 1]), ("bell_01", [0, 1, 0, 0]), ("bell_10", [0, 0, 1, 0]), ("bell_11", [0, 1, 1, 1])];

pub fn crit_bell() -> Check {
    for (i, (name, signs)) in BELL_SIGNS.iter().enumerate() {
        let (a0, a1) = ((i >> 1) as u32, (i & 1) as u32);
        let h = calibrated(&format!("{name}.json"));
        let psi = e(build_state(&h))?;
        ensure!(psi.norm_exp() == -2, "{name}: norm exponent {}", psi.norm_exp());
        ensure!(psi.phases() == signs, "{name}: phases {:?}, expected {:?}", psi.phases(), signs);
        for (idx, &s) in signs.iter().enumerate() {
            let (x0, x1) = ((idx >> 1) as u32, (idx & 1) as u32);
            ensure!((a0 * x0 + a1 * x1 + x0 * x1) % 2 == s, "{name}: sigma formula at {idx}");
        }
        let dense = psi.to_dense();
        for (idx, &s) in signs.iter().enumerate() {
            let want = if s == 0 { 0.5 } else { -0.5 };
            let got = dense.amplitudes()[idx];
            ensure!((got.re - want).abs() <= TOL && got.im.abs() <= TOL, "{name}: amplitude {idx} is {got}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- criterion 2

fn pw_s(x: u32) -> u32 {
    if x == 0 { 1 } else { x }
}

/// The printed qutrit phase functions, with x^(0,0,1) = pw_s(x) and x^(1,0,1) = x.
pub fn qutrit_sigma(which: char, x: [u32; 3]) -> u32 {
    let [x0, x1, x2] = x;
    let t = pw_s(x0) * pw_s(x1) * x2;
    let v = match which {
        'a' => t + 2 * pw_s(x0) * x2 + 2 * pw_s(x1) * x2 + x2,
        'b' => pw_s(x0) * x1 + pw_s(x1) * x2 + 2 * x1 + 2 * x2,
        'c' => pw_s(x0) * x1 + pw_s(x1) * x2 + pw_s(x2) * x0 + 2 * x1 + 2 * x2 + 2 * x0,
        'd' => t + pw_s(x0) * x1 + 2 * pw_s(x0) * x2 + 2 * x1,
        'e' => t + pw_s(x0) * x1 + x0 * pw_s(x2) + 2 * pw_s(x0) * x2 + 2 * x0 + 2 * x1,
        _ => unreachable!(),
    };
    v % 3
}

/// Nonzero phases of the printed 27-term expansions.
pub const EXPANSION_C: &[(&str, u32)] =
    &[("021", 1), ("022", 2), ("102", 1), ("112", 1), ("121", 1), ("202", 2), ("210", 1), ("211", 1), ("220", 2)];
pub const EXPANSION_E_EXTRA: &[(&str, u32)] = &[("221", 1), ("222", 2)];

fn digits(idx: usize) -> [u32; 3] {
    [(idx / 9) as u32, (idx / 3 % 3) as u32, (idx % 3) as u32]
}

fn expansion(which: char) -> Vec<u32> {
    let mut out = vec![0; 27];
    let extra: &[(&str, u32)] = if which == 'e' { EXPANSION_E_EXTRA } else { &[] };
    for (ket, ph) in EXPANSION_C.iter().chain(extra) {
        let idx = ket.bytes().fold(0, |acc, b| acc * 3 + (b - b'0') as usize);
        out[idx] = *ph;
    }
    out
}

pub fn crit_qutrit() -> Check {
    for which in ['a', 'b', 'c', 'd', 'e'] {
        let h = calibrated(&format!("qutrit_{which}.json"));
        let psi = e(build_state(&h))?;
        ensure!(psi.norm_exp() == -3, "qutrit_{which}: norm exponent");
        for idx in 0..27 {
            let want = qutrit_sigma(which, digits(idx));
            ensure!(psi.phases()[idx] == want, "qutrit_{which}: phase at {:?} is {}, printed {want}", digits(idx), psi.phases()[idx]);
        }
        if which == 'c' || which == 'e' {
            let printed = expansion(which);
            ensure!(psi.phases() == printed.as_slice(), "qutrit_{which}: expansion differs");
            let dense = psi.to_dense();
            let omega = std::f64::consts::TAU / 3.0;
            let mag = 3f64.powf(-1.5);
            for (idx, &k) in printed.iter().enumerate() {
                let want = num_complex::Complex64::from_polar(mag, omega * k as f64);
                ensure!((dense.amplitudes()[idx] - want).norm() <= TOL, "qutrit_{which}: amplitude {idx}");
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- criterion 3

fn stabilizer_suite(h: &CalibratedHypergraph) -> Result<usize, String> {
    let ring = h.ring();
    let (q, l) = (ring.order(), h.l());
    let size = e(config_count(q, l))?;
    let k = e(Stabilizer::new(h))?;
    let psi = k.state();
    let configs: Vec<Vec<Elem>> = (0..size).map(|i| config_at(q, l, i)).collect();
    let basis: Vec<_> = configs.iter().map(|b| k.basis_state(b)).collect::<Result<_, _>>().map_err(|x| x.to_string())?;
    let mut fixed = 0;
    let mut signatures = HashSet::new();
    for a in &configs {
        let out = e(k.apply(a, &psi))?;
        ensure!(out == psi, "K({a:?}) does not fix the state");
        fixed += 1;
        let mut sig = Vec::with_capacity(size);
        for (b, bs) in configs.iter().zip(&basis) {
            let img = e(k.apply(a, bs))?;
            let c = bs.global_phase_to(&img).ok_or_else(|| format!("K({a:?}) leaves the basis ray of {b:?}"))?;
            ensure!(c == e(trace_pairing(ring, a, b))?, "eigenvalue of K({a:?}) on basis {b:?}");
            sig.push(c);
        }
        signatures.insert(sig);
    }
    ensure!(signatures.len() == size, "K(a) not pairwise distinct");
    let zero = vec![Elem::ZERO; l];
    for bs in &basis {
        ensure!(e(k.apply(&zero, bs))? == *bs, "K(0) is not the identity");
    }
    for a in &configs {
        for b in &configs {
            let ab: Vec<Elem> = a.iter().zip(b).map(|(&u, &v)| ring.add(u, v)).collect();
            for bs in &basis {
                let lhs = e(k.apply(a, &e(k.apply(b, bs))?))?;
                ensure!(lhs == e(k.apply(&ab, bs))?, "K({a:?})K({b:?}) != K(a+b)");
            }
        }
    }
    Ok(fixed)
}

/// Runs the suite and returns "name: N/N" lines.
pub fn crit_stabilizer() -> Result<Vec<String>, String> {
    let mut lines = Vec::new();
    let names = ["bell_00", "bell_01", "bell_10", "bell_11", "qutrit_a", "qutrit_b", "qutrit_c", "qutrit_d", "qutrit_e"];
    for name in names {
        let h = calibrated(&format!("{name}.json"));
        let total = e(config_count(h.ring().order(), h.l()))?;
        let n = stabilizer_suite(&h).map_err(|m| format!("{name}: {m}"))?;
        lines.push(format!("{name}: {n}/{total} stabilizer checks passed"));
    }
    Ok(lines)
}

// ---------------------------------------------------------------- criterion 4

pub fn crit_covariance(instances: usize) -> Check {
    let rings = ["F2", "F3", "F4", "Z4"];
    let mut r = rng(4);
    for i in 0..instances {
        let ring = ring(rings[i % rings.len()]);
        let l = r.random_range(1..=3);
        let m = r.random_range(1..=3);
        let h = random_calibrated(&ring, l, &mut r);
        let f = random_map(l, m, &mut r);
        ensure!(e(check_covariance(&h, &f))?, "instance {i}: covariance fails for f = {:?} on {h:?}", f.values());
        let g = random_calibrated(&ring, r.random_range(0..=3), &mut r);
        let lhs = e(build_state(&e(h.monadic_product(&g))?))?;
        let rhs = e(e(build_state(&h))?.tensor(&e(build_state(&g))?))?;
        ensure!(lhs == rhs, "instance {i}: monadic product is not the tensor product");
    }
    Ok(())
}

// ---------------------------------------------------------------- criterion 5

pub fn crit_trace() -> Check {
    let cases: [(&str, fn(&[u32]) -> u32); 3] = [
        ("F4", |c| c[1] % 2),
        ("GR(4,2)", |c| (2 * c[0] + 3 * c[1]) % 4),
        ("GR(4,3)", |c| (3 * c[0] + 2 * c[1] + 2 * c[2]) % 4),
    ];
    for (name, formula) in cases {
        let r = ring(name);
        for x in r.elements() {
            let c = r.coeffs_of(x).to_vec();
            ensure!(r.trace(x) == formula(&c), "{name}: tr{c:?} = {}", r.trace(x));
            ensure!(e(r.trace_frobenius(x))? == r.trace(x), "{name}: Frobenius trace differs at {c:?}");
        }
        for x in r.elements().filter(|&x| x != Elem::ZERO) {
            ensure!(r.elements().any(|y| r.trace(r.mul(x, y)) != 0), "{name}: trace form degenerate at {x:?}");
        }
    }
    let g43 = ring("GR(4,3)");
    let th = el(&g43, &[0, 1, 0]);
    ensure!(g43.mul(th, g43.mul(th, th)) == el(&g43, &[1, 3, 2]), "GR(4,3): theta^3");
    ensure!(e(g43.trace_frobenius(th))? == 2, "GR(4,3): Frobenius trace of theta");
    Ok(())
}

// ---------------------------------------------------------------- criterion 6

pub fn crit_cyclicity() -> Check {
    let z4 = ring("Z4");
    for (x, want) in [(0, (1, 1)), (1, (0, 1)), (2, (2, 1)), (3, (0, 2))] {
        ensure!(index_period(&z4, Elem(x)) == want, "Z4: element {x}");
    }
    let f4 = ring("F4");
    for (c, want) in [([0, 0], (1, 1)), ([1, 0], (0, 1)), ([0, 1], (0, 3)), ([1, 1], (0, 3))] {
        ensure!(index_period(&f4, el(&f4, &c)) == want, "F4: element {c:?}");
    }
    let g = ring("GR(4,2)");
    let table: [(&[[u32; 2]], (u32, u32)); 6] = [
        (&[[0, 0]], (1, 1)),
        (&[[1, 0]], (0, 1)),
        (&[[2, 0], [0, 2], [2, 2]], (2, 1)),
        (&[[3, 0], [1, 2], [3, 2]], (0, 2)),
        (&[[0, 1], [3, 3]], (0, 3)),
        (&[[1, 1], [2, 1], [3, 1], [0, 3], [1, 3], [2, 3]], (0, 6)),
    ];
    let mut seen = 0;
    for (elems, want) in table {
        for c in elems {
            ensure!(index_period(&g, el(&g, c)) == want, "GR(4,2): element {c:?}");
            seen += 1;
        }
    }
    ensure!(seen == 16, "GR(4,2) table incomplete");
    for name in ["F2", "F3", "F4", "F5", "F7", "F8", "F9", "Z4", "Z8", "Z9", "GR(4,2)"] {
        let r = ring(name);
        for x in r.elements() {
            let (i, p) = index_period(&r, x);
            let size = i + p;
            for u in 0..3 * size as u64 + 2 {
                ensure!(r.pow(x, h_x(&r, x, u) as u64) == r.pow(x, u), "{name}: h_x at {u}");
            }
            for u in 0..size {
                for v in 0..size {
                    let s = e(monoid_add(&r, x, u, v))?;
                    ensure!(s < size, "{name}: sum leaves Z_x");
                    ensure!(r.pow(x, s as u64) == r.mul(r.pow(x, u as u64), r.pow(x, v as u64)), "{name}: x^(u+v)");
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- criteria 7, 8

fn mat(r: &GaloisRing, rows: &[&[&[u32]]]) -> Vec<Vec<Elem>> {
    rows.iter().map(|row| row.iter().map(|c| el(r, c)).collect()).collect()
}

fn mat_f3(rows: [[u32; 3]; 3]) -> Vec<Vec<Elem>> {
    rows.iter().map(|row| row.iter().map(|&v| Elem(v)).collect()).collect()
}

const Z: &[u32] = &[0, 0];
const O: &[u32] = &[1, 0];
const T: &[u32] = &[0, 1];
const OT: &[u32] = &[1, 1];

pub fn crit_matrices() -> Check {
    let f3 = ring("F3");
    ensure!(e(power_matrix(&f3))? == mat_f3([[1, 0, 0], [1, 1, 1], [1, 2, 1]]), "F3: A");
    ensure!(e(power_matrix_inverse(&f3))? == mat_f3([[1, 0, 0], [0, 2, 1], [2, 2, 2]]), "F3: A^-1");
    ensure!(e(basic_power_matrix(&f3))? == mat_f3([[0, 1, 1], [1, 1, 1], [1, 1, 2]]), "F3: C");
    ensure!(e(basic_power_matrix_inverse(&f3))? == mat_f3([[2, 1, 0], [1, 1, 2], [0, 2, 1]]), "F3: C^-1");
    let f4 = ring("F4");
    let a = mat(&f4, &[&[O, Z, Z, Z], &[O, O, O, O], &[O, T, OT, O], &[O, OT, T, O]]);
    let ai = mat(&f4, &[&[O, Z, Z, Z], &[Z, O, OT, T], &[Z, O, T, OT], &[O, O, O, O]]);
    let c = mat(&f4, &[&[Z, O, O, O], &[O, O, O, O], &[O, O, T, O], &[O, O, O, OT]]);
    let ci = mat(&f4, &[&[O, O, Z, Z], &[O, O, T, OT], &[Z, T, T, Z], &[Z, OT, Z, OT]]);
    ensure!(e(power_matrix(&f4))? == a, "F4: A");
    ensure!(e(power_matrix_inverse(&f4))? == ai, "F4: A^-1");
    ensure!(e(basic_power_matrix(&f4))? == c, "F4: C");
    ensure!(e(basic_power_matrix_inverse(&f4))? == ci, "F4: C^-1");
    for name in ["F2", "F3", "F4", "F5"] {
        let r = ring(name);
        let q = r.order();
        let a = e(power_matrix(&r))?;
        let ai = e(power_matrix_inverse(&r))?;
        ensure!(mat_mul(&r, &a, &ai) == identity(q), "{name}: A A^-1");
        ensure!(ai == e(gauss_inverse(&r, &a))?, "{name}: block inverse differs from elimination");
        let c = e(basic_power_matrix(&r))?;
        ensure!(mat_mul(&r, &c, &e(basic_power_matrix_inverse(&r))?) == identity(q), "{name}: C C^-1");
    }
    Ok(())
}

fn poly(r: &GaloisRing, coeffs: &[&[u32]]) -> FieldPolynomial {
    FieldPolynomial::new(coeffs.iter().map(|c| el(r, c)).collect())
}

fn m_of(r: &GaloisRing, dense: &[u32]) -> Result<FieldPolynomial, String> {
    e(m_polynomial(r, &e(CycExponent::from_dense(r, dense))?))
}

pub fn crit_polynomials() -> Check {
    let f3 = ring("F3");
    let p3 = |c: &[u32]| FieldPolynomial::new(c.iter().map(|&v| Elem(v)).collect());
    ensure!(m_of(&f3, &[1, 0, 0])? == p3(&[0, 0, 1]), "F3: m_(1,0,0)");
    ensure!(m_of(&f3, &[0, 0, 1])? == p3(&[1, 1, 2]), "F3: m_(0,0,1)");
    ensure!(m_of(&f3, &[1, 0, 1])? == p3(&[0, 1]), "F3: m_(1,0,1)");
    let f4 = ring("F4");
    let m0010 = m_of(&f4, &[0, 0, 1, 0])?;
    let m0001 = m_of(&f4, &[0, 0, 0, 1])?;
    let m0011 = m_of(&f4, &[0, 0, 1, 1])?;
    ensure!(m0010 == poly(&f4, &[O, T, O, OT]), "F4: m_(0,0,1,0)");
    ensure!(m0001 == poly(&f4, &[O, OT, O, T]), "F4: m_(0,0,0,1)");
    ensure!(m0011 == poly(&f4, &[O, O, Z, O]), "F4: m_(0,0,1,1)");
    let m100 = m_of(&f3, &[1, 0, 0])?;
    ensure!(e(reduce_mod_universal(&f3, &m100.mul(&f3, &m100)))? == m100, "F3: m_(1,0,0)^2 mod e");
    ensure!(e(reduce_mod_universal(&f4, &m0010.mul(&f4, &m0001)))? == m0011, "F4: product identity mod e");
    let mut fields: Vec<Arc<GaloisRing>> = ["F2", "F3", "F4", "F5", "F7", "F8", "F9"].iter().map(|n| ring(n)).collect();
    for (p, d) in [(11, 1), (13, 1), (2, 4)] {
        fields.push(e(standard_ring(p, 1, d))?);
    }
    for r in fields {
        let sp = special_exponents(&r);
        for u in sp.s.iter().chain([&sp.s_star, &sp.q_elem]) {
            let m = e(m_polynomial(&r, u))?;
            for x in r.elements() {
                ensure!(m.eval(&r, x) == hgs::cyclicity::power(&r, x, u), "{}: m_u(x) != x^u", r.name());
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- criterion 9

/// Printed polynomial forms with P(x) = x + 2x².
pub fn marked_sigma(which: char, x: [u32; 3]) -> u32 {
    let p = |v: u32| (v + 2 * v * v) % 3;
    let [x0, x1, x2] = x;
    let ab = p(x0) * x1 + p(x1) * x2;
    let tri = p(x0) * p(x1) * x2;
    let v = match which {
        'a' => tri,
        'b' => ab,
        'c' => ab + p(x2) * x0,
        'd' => ab + tri,
        'e' => ab + p(x2) * x0 + tri,
        _ => unreachable!(),
    };
    v % 3
}

/// True when no weighted hypergraph on [3] over F_3 gives σ up to a constant.
pub fn not_weighted(table: &[u32]) -> Result<bool, String> {
    let f3 = ring("F3");
    let subsets: Vec<Hyperedge> = (1..8u32)
        .map(|m| Hyperedge::new((0..3).filter(|&v| m >> v & 1 == 1).collect()).unwrap())
        .collect();
    // zero weight and absent edge give the same state, so 3^7 weightings cover every
    // sub-hypergraph of the 7 nonempty subsets
    for code in 0..3u32.pow(7) {
        let mut w = WeightedHypergraph::new(f3.clone(), 3);
        let mut c = code;
        for x in &subsets {
            if c % 3 != 0 {
                e(w.set_weight(x.clone(), c % 3))?;
            }
            c /= 3;
        }
        let mut wt = Vec::with_capacity(27);
        for idx in 0..27 {
            wt.push(e(weighted_phase_function(&w, &config_at(3, 3, idx)))?);
        }
        let shift = (table[0] + 3 - wt[0]) % 3;
        if wt.iter().zip(table).all(|(&a, &b)| (a + shift) % 3 == b) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn crit_marked() -> Check {
    for which in ['a', 'b', 'c', 'd', 'e'] {
        let (mh, xstar) = marked(&format!("marked_{which}.json"));
        let cal = calibrated(&format!("qutrit_{which}.json"));
        let direct = e(marked_state(&mh, xstar))?;
        ensure!(direct == e(build_state(&cal))?, "marked_{which}: differs from qutrit_{which}");
        let converted = e(marked_to_calibrated(&mh, xstar))?;
        ensure!(e(build_state(&converted))? == direct, "marked_{which}: converted calibration differs");
        let table = e(marked_phase_table(&mh, xstar))?;
        for idx in 0..27 {
            ensure!(table[idx] == marked_sigma(which, digits(idx)), "marked_{which}: polynomial at {:?}", digits(idx));
        }
    }
    let (mh, xstar) = marked("marked_a.json");
    ensure!(not_weighted(&e(marked_phase_table(&mh, xstar))?)?, "H^a matches a weighted hypergraph");
    Ok(())
}

// ---------------------------------------------------------------- criterion 10

fn key(r: &GaloisRing, pairs: &[(usize, &[u32])]) -> ExpFn {
    ExpFn::new(r, pairs.iter().map(|&(v, d)| (v, CycExponent::from_dense(r, d).unwrap())).collect())
}

/// The printed effective forms (K^i, ς^i), with ς^j the unit calibration at the first key.
pub fn expected_effective(which: char) -> CalibratedHypergraph {
    let r = ring("F3");
    let (u, s): (&[u32], &[u32]) = (&[1, 0, 1], &[0, 0, 1]);
    let mut k = CalibratedHypergraph::new(r.clone(), 3);
    let mut put = |verts: &[usize], pairs: &[(usize, &[u32])], v: u32| {
        k.add_value(&Hyperedge::new(verts.to_vec()).unwrap(), key(&r, pairs), v).unwrap();
    };
    let y = |j: usize| -> (Vec<usize>, Vec<(usize, &[u32])>) {
        match j {
            0..=2 => (vec![j], vec![(j, u)]),
            3 => (vec![0, 1], vec![(0, s), (1, u)]),
            4 => (vec![1, 2], vec![(1, s), (2, u)]),
            5 => (vec![0, 2], vec![(0, u), (2, s)]),
            6 => (vec![0, 1, 2], vec![(0, s), (1, s), (2, u)]),
            _ => unreachable!(),
        }
    };
    // t|_{Y5*} ς^5: the transposition of 0 and 2 applied to the key of ς^5
    let t5: Vec<(usize, &[u32])> = vec![(0, s), (2, u)];
    let terms: Vec<(usize, u32)> = match which {
        'a' => vec![(2, 1), (4, 2), (6, 1)],
        'b' => vec![(1, 2), (2, 2), (3, 1), (4, 1)],
        'c' => vec![(0, 2), (1, 2), (2, 2), (3, 1), (4, 1), (5, 1)],
        'd' => vec![(1, 2), (3, 1), (6, 1)],
        'e' => vec![(0, 2), (1, 2), (3, 1), (5, 1), (6, 1)],
        _ => unreachable!(),
    };
    for (j, v) in terms {
        let (verts, pairs) = y(j);
        put(&verts, &pairs, v);
    }
    if matches!(which, 'a' | 'd' | 'e') {
        put(&[0, 2], &t5, 2);
    }
    k
}

pub fn crit_reduction(instances: usize) -> Check {
    for which in ['a', 'b', 'c', 'd', 'e'] {
        let h = calibrated(&format!("qutrit_{which}.json"));
        let (k, a) = effectivize(&h);
        ensure!(is_effective(&k), "qutrit_{which}: result not effective");
        ensure!(k == expected_effective(which), "qutrit_{which}: effective form differs: {k:?}");
        ensure!(e(build_state(&k))?.times_phase(a) == e(build_state(&h))?, "qutrit_{which}: state not preserved");
    }
    let rings = ["F2", "F3", "F4", "Z4", "GR(4,2)"];
    let mut r = rng(10);
    for i in 0..instances {
        let ring = ring(rings[i % rings.len()]);
        let l = r.random_range(1..=4);
        let h = random_calibrated(&ring, l, &mut r);
        let (k, a) = effectivize(&h);
        ensure!(is_effective(&k), "instance {i}: not effective");
        let (z, core) = e(primitive_core(&k))?;
        ensure!(is_primitive(&core), "instance {i}: core not primitive");
        ensure!(e(core.apply_morphism(&z))? == k, "instance {i}: core does not push forward to K");
        if config_count(ring.order(), l).is_ok_and(|n| n <= 4096) {
            ensure!(e(build_state(&k))?.times_phase(a) == e(build_state(&h))?, "instance {i}: state not preserved");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- criterion 11

pub fn crit_lme() -> Check {
    let cap = DenseCap::default();
    let names = ["bell_00", "bell_01", "bell_10", "bell_11", "qutrit_a", "qutrit_b", "qutrit_c", "qutrit_d", "qutrit_e"];
    for name in names {
        let h = calibrated(&format!("{name}.json"));
        ensure!(e(lme_exact(&h, &cap))?, "{name}: Z-translates not orthonormal");
        ensure!(e(lme_dense(&h, &cap, TOL))?, "{name}: reduced density differs from identity/q^l");
    }
    Ok(())
}

// ---------------------------------------------------------------- criterion 12

pub fn crit_conversions(instances: usize) -> Check {
    let small = ["F2", "F3", "F4", "F5", "F7", "F8", "F9", "Z4", "Z8", "Z9"];
    let mut r = rng(12);
    for i in 0..instances {
        let ring = ring(small[i % small.len()]);
        let l = r.random_range(1..=3);
        let w = random_weighted(&ring, l, &mut r);
        let table: Vec<u32> = (0..e(config_count(ring.order(), l))?)
            .map(|idx| weighted_phase_function(&w, &config_at(ring.order(), l, idx)).unwrap())
            .collect();
        let direct = e(state_from_table(&ring, l, table))?;
        ensure!(e(build_state(&weighted_to_calibrated(&w)))? == direct, "instance {i}: weighted conversion on {}", ring.name());

        let ph = random_poly(&ring, l, &mut r);
        let cal = e(poly_to_calibrated(&ph))?;
        let sigma = e(phase_table(&cal))?;
        for (idx, &s) in sigma.iter().enumerate() {
            let x = config_at(ring.order(), l, idx);
            ensure!(e(poly_phase_function(&ph, &x))? == s, "instance {i}: poly sigma on {} at {x:?}", ring.name());
        }
    }
    let f2 = ring("F2");
    for i in 0..instances {
        let l = r.random_range(1..=5);
        let h = random_calibrated(&f2, l, &mut r);
        let (w, a) = e(qubit_to_weighted(&h))?;
        let back = e(build_state(&weighted_to_calibrated(&w)))?.times_phase(a);
        ensure!(back == e(build_state(&h))?, "F2 instance {i}: qubit_to_weighted does not invert");
    }
    Ok(())
}
