//! Galois rings GR(p^r, d) realised as Z_{p^r}[x]/(h(x)) with table-driven arithmetic.
//!
//! Elements are handles ([`Elem`]) into a canonical ordering of the ring: `0`, `1`, then all
//! remaining coefficient vectors in lexicographic order (coefficient of `θ^0` compared first).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest ring order accepted by [`GaloisRing::new`]. Keeps the q×q tables small.
pub const MAX_ORDER: usize = 1024;

/// A ring element, stored as its position in the canonical element order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Element of the prime subring P ≅ Z_{p^r}, always reduced.
pub type Scalar = u32;

/// The ring GR(p^r, d) together with cached operation tables.
pub struct GaloisRing {
    p: u32,
    r: u32,
    d: usize,
    modulus: Vec<u32>,
    n: u32,
    q: usize,
    coeffs: Vec<u32>,
    by_code: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    trace: Vec<Scalar>,
    iota: Vec<u32>,
    period: Vec<u32>,
    theta: Option<Elem>,
    teichmuller: Vec<Elem>,
}

impl PartialEq for GaloisRing {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.d == other.d && self.modulus == other.modulus
    }
}

impl Eq for GaloisRing {}

impl fmt::Debug for GaloisRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GR({},{}) mod {:?}", self.n, self.d, self.modulus)
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u32;
    while k.saturating_mul(k) <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Builds GR(p^r, d) from a monic modulus given least-significant coefficient first.
pub fn make_ring(p: u32, r: u32, d: usize, modulus: &[u32]) -> Result<Arc<GaloisRing>> {
    GaloisRing::new(p, r, d, modulus).map(Arc::new)
}

/// The modulus used for GR(p^r, d) by [`standard_ring`].
///
/// Degree one uses `x`; GR(2^r,2) uses `1+x+x²`; GR(4,3) uses `3+x+2x²+x³`; anything else
/// gets the first monic polynomial (coefficients in [0,p), lexicographic) irreducible mod p.
pub fn standard_modulus(p: u32, r: u32, d: usize) -> Option<Vec<u32>> {
    match (p, r, d) {
        (_, _, 1) => return Some(vec![0, 1]),
        (2, _, 2) => return Some(vec![1, 1, 1]),
        (2, 2, 3) => return Some(vec![3, 1, 2, 1]),
        _ => {}
    }
    if !is_prime(p) || d == 0 {
        return None;
    }
    let total = (p as u64).checked_pow(d as u32)?;
    (0..total).find_map(|code| {
        let mut m = Vec::with_capacity(d + 1);
        let mut c = code;
        for _ in 0..d {
            m.push((c % p as u64) as u32);
            c /= p as u64;
        }
        m.push(1);
        irreducible_mod_p(&m, p).then_some(m)
    })
}

/// GR(p^r, d) with the modulus chosen by [`standard_modulus`].
pub fn standard_ring(p: u32, r: u32, d: usize) -> Result<Arc<GaloisRing>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let m = standard_modulus(p, r, d)
        .ok_or_else(|| Error::BadParameter(format!("no modulus for p={p} d={d}")))?;
    make_ring(p, r, d, &m)
}

/// Named rings: `F2`, `F3`, `F4`, `F5`, `F7`, `F8`, `F9`, `Z4`, `Z8`, `Z9`, `GR(4,2)`, `GR(4,3)`.
pub fn named_ring(name: &str) -> Option<Arc<GaloisRing>> {
    let (p, r, d) = match name {
        "F2" => (2, 1, 1),
        "F3" => (3, 1, 1),
        "F4" => (2, 1, 2),
        "F5" => (5, 1, 1),
        "F7" => (7, 1, 1),
        "F8" => (2, 1, 3),
        "F9" => (3, 1, 2),
        "Z4" => (2, 2, 1),
        "Z8" => (2, 3, 1),
        "Z9" => (3, 2, 1),
        "GR(4,2)" => (2, 2, 2),
        "GR(4,3)" => (2, 2, 3),
        _ => return None,
    };
    standard_ring(p, r, d).ok()
}

fn poly_rem_mod_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    // b monic
    let mut a: Vec<u32> = a.iter().map(|c| c % p).collect();
    let db = b.len() - 1;
    while a.len() > db {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let t = (lead as u64 * bc as u64 % p as u64) as u32;
                a[shift + i] = (a[shift + i] + p - t) % p;
            }
        }
        a.pop();
    }
    a
}

/// Exhaustive irreducibility test of the mod-p reduction of a monic polynomial.
pub fn irreducible_mod_p(m: &[u32], p: u32) -> bool {
    let d = m.len() - 1;
    for k in 1..=d / 2 {
        let count = (p as u64).pow(k as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(k + 1);
            let mut c = code;
            for _ in 0..k {
                g.push((c % p as u64) as u32);
                c /= p as u64;
            }
            g.push(1);
            if poly_rem_mod_p(m, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl GaloisRing {
    pub fn new(p: u32, r: u32, d: usize, modulus: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 || d == 0 {
            return Err(Error::BadParameter("r and d must be positive".into()));
        }
        let n = (p as u64)
            .checked_pow(r)
            .filter(|&n| n as usize <= MAX_ORDER)
            .ok_or_else(|| Error::TooLarge(format!("p^r exceeds {MAX_ORDER}")))?;
        let q = u32::try_from(d)
            .ok()
            .and_then(|d| n.checked_pow(d))
            .filter(|&q| q as usize <= MAX_ORDER)
            .ok_or_else(|| Error::TooLarge(format!("ring order exceeds {MAX_ORDER}")))?
            as usize;
        let n = n as u32;
        if modulus.len() != d + 1 {
            return Err(Error::NonMonic(d));
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= n) {
            return Err(Error::BadCoefficient { value: c as u64, bound: n });
        }
        if modulus[d] != 1 {
            return Err(Error::NonMonic(d));
        }
        if !irreducible_mod_p(modulus, p) {
            return Err(Error::ReducibleModulus(p));
        }

        // canonical order: lexicographic with c0 most significant, then move 1 to the front
        let mut order: Vec<Vec<u32>> = (0..q)
            .map(|t| {
                let mut v = vec![0u32; d];
                let mut t = t;
                for i in (0..d).rev() {
                    v[i] = (t % n as usize) as u32;
                    t /= n as usize;
                }
                v
            })
            .collect();
        let one_pos = order.iter().position(|v| v[0] == 1 && v[1..].iter().all(|&c| c == 0)).unwrap();
        let one = order.remove(one_pos);
        order.insert(1, one);

        let mut coeffs = Vec::with_capacity(q * d);
        let mut by_code = vec![0u32; q];
        for (idx, v) in order.iter().enumerate() {
            coeffs.extend_from_slice(v);
            by_code[code_of(v, n)] = idx as u32;
        }

        let mut ring = GaloisRing {
            p,
            r,
            d,
            modulus: modulus.to_vec(),
            n,
            q,
            coeffs,
            by_code,
            add: Vec::new(),
            mul: Vec::new(),
            neg: Vec::new(),
            trace: Vec::new(),
            iota: Vec::new(),
            period: Vec::new(),
            theta: None,
            teichmuller: Vec::new(),
        };
        ring.build_tables();
        Ok(ring)
    }

    fn build_tables(&mut self) {
        let (q, d, n) = (self.q, self.d, self.n);
        let mut add = vec![0u32; q * q];
        let mut mul = vec![0u32; q * q];
        let mut neg = vec![0u32; q];
        for a in 0..q {
            let ca = self.coeffs_of(Elem(a as u32)).to_vec();
            let nv: Vec<u32> = ca.iter().map(|&c| (n - c) % n).collect();
            neg[a] = self.by_code[code_of(&nv, n)];
            for b in 0..q {
                let cb = self.coeffs_of(Elem(b as u32));
                let s: Vec<u32> = ca.iter().zip(cb).map(|(&x, &y)| (x + y) % n).collect();
                add[a * q + b] = self.by_code[code_of(&s, n)];
                let m = self.poly_mul_mod(&ca, cb);
                mul[a * q + b] = self.by_code[code_of(&m, n)];
            }
        }
        self.add = add;
        self.mul = mul;
        self.neg = neg;

        // tr(x) = Tr(L_x): sum of the i-th coefficient of x·θ^i
        let basis: Vec<Vec<u32>> = (0..d)
            .map(|i| (0..d).map(|j| u32::from(i == j)).collect())
            .collect();
        self.trace = (0..q)
            .map(|x| {
                let cx = self.coeffs_of(Elem(x as u32)).to_vec();
                let mut t = 0u64;
                for (i, e) in basis.iter().enumerate() {
                    t += self.poly_mul_mod(&cx, e)[i] as u64;
                }
                (t % n as u64) as u32
            })
            .collect();

        let mut iota = vec![0u32; q];
        let mut period = vec![0u32; q];
        let mut seen = vec![u32::MAX; q];
        for x in 0..q {
            let mut touched = Vec::new();
            let mut y = Elem::ONE;
            let mut k = 0u32;
            loop {
                if seen[y.index()] != u32::MAX {
                    iota[x] = seen[y.index()];
                    period[x] = k - seen[y.index()];
                    break;
                }
                seen[y.index()] = k;
                touched.push(y);
                y = self.mul(y, Elem(x as u32));
                k += 1;
            }
            for t in touched {
                seen[t.index()] = u32::MAX;
            }
        }
        self.iota = iota;
        self.period = period;

        let target = (self.p as u64).pow(d as u32) - 1;
        self.theta = (1..q as u32).map(Elem).find(|&x| self.is_unit(x) && self.mult_order(x) == Some(target));
        if let Some(t) = self.theta {
            let mut tm = vec![Elem::ZERO];
            let mut y = Elem::ONE;
            for _ in 0..target {
                tm.push(y);
                y = self.mul(y, t);
            }
            self.teichmuller = tm;
        }
    }

    fn mult_order(&self, x: Elem) -> Option<u64> {
        // the orbit of a unit is purely periodic, so its period is the multiplicative order
        (self.iota[x.index()] == 0).then_some(self.period[x.index()] as u64)
    }

    fn poly_mul_mod(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let (d, n) = (self.d, self.n as u64);
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % n;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..d {
                let t = c * self.modulus[i] as u64 % n;
                prod[k - d + i] = (prod[k - d + i] + n - t) % n;
            }
            prod[k] = 0;
        }
        prod.truncate(d);
        prod.into_iter().map(|c| c as u32).collect()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Characteristic p^r, the order of the prime subring.
    pub fn characteristic(&self) -> u32 {
        self.n
    }

    /// Number of elements q = p^{rd}.
    pub fn order(&self) -> usize {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_field(&self) -> bool {
        self.r == 1
    }

    pub fn is_prime_field(&self) -> bool {
        self.r == 1 && self.d == 1
    }

    /// Element of multiplicative order p^d − 1.
    pub fn primitive_theta(&self) -> Option<Elem> {
        self.theta
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q as u32).map(Elem)
    }

    pub fn coeffs_of(&self, x: Elem) -> &[u32] {
        &self.coeffs[x.index() * self.d..(x.index() + 1) * self.d]
    }

    /// Element with the given coefficients in the basis 1, θ, …, θ^{d−1}.
    pub fn elem(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() != self.d {
            return Err(Error::SizeMismatch { expected: self.d, got: coeffs.len() });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.n) {
            return Err(Error::BadCoefficient { value: c as u64, bound: self.n });
        }
        Ok(Elem(self.by_code[code_of(coeffs, self.n)]))
    }

    /// Checks that a raw index names an element of this ring.
    pub fn check(&self, x: Elem) -> Result<Elem> {
        if x.index() < self.q {
            Ok(x)
        } else {
            Err(Error::OutOfRange(format!("element index {} >= {}", x.0, self.q)))
        }
    }

    /// Image of an integer under Z → P ⊆ R.
    pub fn from_scalar(&self, c: u64) -> Elem {
        let mut v = vec![0u32; self.d];
        v[0] = (c % self.n as u64) as u32;
        Elem(self.by_code[code_of(&v, self.n)])
    }

    /// The scalar c when x = c·1 lies in the prime subring.
    pub fn to_scalar(&self, x: Elem) -> Option<Scalar> {
        let c = self.coeffs_of(x);
        c[1..].iter().all(|&v| v == 0).then_some(c[0])
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.add[a.index() * self.q + b.index()])
    }

    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul[a.index() * self.q + b.index()])
    }

    /// Ordinary power with 0^0 = 1.
    pub fn pow(&self, x: Elem, mut k: u64) -> Elem {
        let mut base = x;
        let mut acc = Elem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a unit.
    pub fn inv(&self, x: Elem) -> Option<Elem> {
        if !self.is_unit(x) {
            return None;
        }
        // the unit group has exponent dividing its order; period of x is its order
        let ord = self.period[x.index()] as u64;
        Some(self.pow(x, ord - 1))
    }

    /// tr(x) = Tr(L_x) in the θ-power basis.
    pub fn trace(&self, x: Elem) -> Scalar {
        self.trace[x.index()]
    }

    pub fn scalar_add(&self, a: Scalar, b: Scalar) -> Scalar {
        ((a as u64 + b as u64) % self.n as u64) as Scalar
    }

    pub fn scalar_mul(&self, a: Scalar, b: Scalar) -> Scalar {
        (a as u64 * b as u64 % self.n as u64) as Scalar
    }

    pub fn scalar_neg(&self, a: Scalar) -> Scalar {
        (self.n - a % self.n) % self.n
    }

    /// True iff x is invertible, i.e. x mod p ≠ 0.
    pub fn is_unit(&self, x: Elem) -> bool {
        self.coeffs_of(x).iter().any(|&c| c % self.p != 0)
    }

    pub fn is_nilpotent(&self, x: Elem) -> bool {
        !self.is_unit(x)
    }

    /// Index ι_x and period π_x of the power sequence of x.
    pub fn index_period(&self, x: Elem) -> (u32, u32) {
        (self.iota[x.index()], self.period[x.index()])
    }

    /// Teichmüller set {0} ∪ {θ^i : 0 ≤ i < p^d − 1}, in that order.
    pub fn teichmuller(&self) -> Result<&[Elem]> {
        if self.theta.is_none() {
            return Err(Error::NoPrimitiveElement);
        }
        Ok(&self.teichmuller)
    }

    /// Digits (a_0, …, a_{r−1}) in the Teichmüller set with x = Σ a_α p^α.
    pub fn p_adic_digits(&self, x: Elem) -> Result<Vec<Elem>> {
        let tm = self.teichmuller()?;
        let p = self.p;
        let mut rem = x;
        let mut digits = Vec::with_capacity(self.r as usize);
        let mut p_pow = Elem::ONE;
        let p_elem = self.from_scalar(p as u64);
        let mut scale = 1u32;
        for _ in 0..self.r {
            let residue: Vec<u32> = self.coeffs_of(rem).iter().map(|&c| (c / scale) % p).collect();
            let digit = *tm
                .iter()
                .find(|&&t| self.coeffs_of(t).iter().map(|&c| c % p).eq(residue.iter().copied()))
                .expect("Teichmüller set covers the residue field");
            digits.push(digit);
            rem = self.sub(rem, self.mul(digit, p_pow));
            p_pow = self.mul(p_pow, p_elem);
            scale *= p;
        }
        debug_assert_eq!(rem, Elem::ZERO);
        Ok(digits)
    }

    /// Ring Frobenius φ(Σ a_α p^α) = Σ a_α^p p^α.
    pub fn frobenius(&self, x: Elem) -> Result<Elem> {
        let digits = self.p_adic_digits(x)?;
        let p_elem = self.from_scalar(self.p as u64);
        let mut acc = Elem::ZERO;
        let mut p_pow = Elem::ONE;
        for a in digits {
            acc = self.add(acc, self.mul(self.pow(a, self.p as u64), p_pow));
            p_pow = self.mul(p_pow, p_elem);
        }
        Ok(acc)
    }

    /// Σ_{i<d} φ^i(x); agrees with [`GaloisRing::trace`].
    pub fn trace_frobenius(&self, x: Elem) -> Result<Scalar> {
        let mut acc = Elem::ZERO;
        let mut y = x;
        for _ in 0..self.d {
            acc = self.add(acc, y);
            y = self.frobenius(y)?;
        }
        self.to_scalar(acc)
            .ok_or_else(|| Error::OutOfRange("Frobenius trace left the prime subring".into()))
    }

    /// Coefficient-array rendering, or the bare integer when d = 1.
    pub fn format_elem(&self, x: Elem) -> String {
        let c = self.coeffs_of(x);
        if self.d == 1 {
            c[0].to_string()
        } else {
            let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }

    /// Short name such as `GR(4,2)` or `F3`.
    pub fn name(&self) -> String {
        if self.r == 1 {
            format!("F{}", self.q)
        } else if self.d == 1 {
            format!("Z{}", self.n)
        } else {
            format!("GR({},{})", self.n, self.d)
        }
    }
}

fn code_of(v: &[u32], n: u32) -> usize {
    v.iter().rev().fold(0usize, |acc, &c| acc * n as usize + c as usize)
}
