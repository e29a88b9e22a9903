//! Polynomial machinery over Galois fields: power matrices, interpolating polynomials m_u,
//! reduction by the universal polynomial x^q − x and the basic power matrix.

use crate::cyclicity::{power, special_exponents, CycExponent};
use crate::error::{Error, Result};
use crate::galois_ring::{Elem, GaloisRing};

/// Square or rectangular matrix over R, row-major.
pub type Matrix = Vec<Vec<Elem>>;

fn require_field(ring: &GaloisRing) -> Result<()> {
    if ring.is_field() {
        Ok(())
    } else {
        Err(Error::NotField)
    }
}

/// Polynomial with coefficients in R, lowest degree first, trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FieldPolynomial {
    coeffs: Vec<Elem>,
}

impl FieldPolynomial {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&Elem::ZERO) {
            coeffs.pop();
        }
        FieldPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, ring: &GaloisRing, x: Elem) -> Elem {
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| ring.add(ring.mul(acc, x), c))
    }

    pub fn add(&self, ring: &GaloisRing, other: &FieldPolynomial) -> FieldPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &FieldPolynomial, i: usize| p.coeffs.get(i).copied().unwrap_or(Elem::ZERO);
        FieldPolynomial::new((0..n).map(|i| ring.add(get(self, i), get(other, i))).collect())
    }

    pub fn mul(&self, ring: &GaloisRing, other: &FieldPolynomial) -> FieldPolynomial {
        if self.is_zero() || other.is_zero() {
            return FieldPolynomial::default();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ring.add(out[i + j], ring.mul(a, b));
            }
        }
        FieldPolynomial::new(out)
    }

    pub fn format(&self, ring: &GaloisRing) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|&c| ring.format_elem(c)).collect();
        format!("[{}]", parts.join(","))
    }
}

/// A_{xk} = x^k for x in canonical order and k ∈ [q].
pub fn power_matrix(ring: &GaloisRing) -> Result<Matrix> {
    require_field(ring)?;
    let q = ring.order();
    Ok(ring.elements().map(|x| (0..q).map(|k| ring.pow(x, k as u64)).collect()).collect())
}

/// A⁻¹ from the block formula in the order (0, 1, ξ, …, ξ^{q−2}), permuted to canonical order.
pub fn power_matrix_inverse(ring: &GaloisRing) -> Result<Matrix> {
    require_field(ring)?;
    let xi = ring.primitive_theta().ok_or(Error::NoPrimitiveElement)?;
    let q = ring.order();
    let minus_one = ring.neg(Elem::ONE);
    // column c of the ξ-ordered block: c = 0 is the element 0, c = 1 + j is ξ^j
    let xi_order: Vec<Elem> =
        std::iter::once(Elem::ZERO).chain((0..q - 1).map(|j| ring.pow(xi, j as u64))).collect();
    let mut inv = vec![vec![Elem::ZERO; q]; q];
    inv[0][xi_order[0].index()] = Elem::ONE;
    for k in 1..q {
        let kb = k - 1;
        let f = if kb == q - 2 { minus_one } else { Elem::ZERO };
        inv[k][xi_order[0].index()] = f;
        for j in 0..q - 1 {
            let t = ring.neg(ring.pow(xi, ((q - 2 - kb) * j) as u64));
            inv[k][xi_order[1 + j].index()] = t;
        }
    }
    Ok(inv)
}

pub fn mat_mul(ring: &GaloisRing, a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Elem::ZERO, |acc, k| ring.add(acc, ring.mul(row[k], b[k][j]))))
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect()).collect()
}

/// Gauss–Jordan inverse over a field.
pub fn gauss_inverse(ring: &GaloisRing, m: &Matrix) -> Result<Matrix> {
    require_field(ring)?;
    let n = m.len();
    let mut a: Vec<Vec<Elem>> = m.iter().zip(identity(n)).map(|(r, e)| r.iter().copied().chain(e).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != Elem::ZERO).ok_or(Error::Singular)?;
        a.swap(col, pivot);
        let inv = ring.inv(a[col][col]).ok_or(Error::Singular)?;
        for v in a[col].iter_mut() {
            *v = ring.mul(*v, inv);
        }
        for r in 0..n {
            if r != col && a[r][col] != Elem::ZERO {
                let factor = a[r][col];
                for c in 0..2 * n {
                    let t = ring.mul(factor, a[col][c]);
                    a[r][c] = ring.sub(a[r][c], t);
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// m_u(x) = Σ_k (Σ_y A⁻¹_{ky} y^u) x^k, the interpolant of x ↦ x^u of degree < q.
pub fn m_polynomial(ring: &GaloisRing, u: &CycExponent) -> Result<FieldPolynomial> {
    let inv = power_matrix_inverse(ring)?;
    let values: Vec<Elem> = ring.elements().map(|y| power(ring, y, u)).collect();
    Ok(FieldPolynomial::new(
        inv.iter()
            .map(|row| row.iter().zip(&values).fold(Elem::ZERO, |acc, (&a, &v)| ring.add(acc, ring.mul(a, v))))
            .collect(),
    ))
}

/// e(x) = x^q − x.
pub fn universal_polynomial(ring: &GaloisRing) -> Result<FieldPolynomial> {
    require_field(ring)?;
    let q = ring.order();
    let mut c = vec![Elem::ZERO; q + 1];
    c[1] = ring.neg(Elem::ONE);
    c[q] = Elem::ONE;
    Ok(FieldPolynomial::new(c))
}

/// Remainder of f modulo x^q − x.
pub fn reduce_mod_universal(ring: &GaloisRing, f: &FieldPolynomial) -> Result<FieldPolynomial> {
    require_field(ring)?;
    let q = ring.order();
    let mut c = f.coeffs.clone();
    for k in (q..c.len()).rev() {
        let v = std::mem::replace(&mut c[k], Elem::ZERO);
        c[k - (q - 1)] = ring.add(c[k - (q - 1)], v);
    }
    Ok(FieldPolynomial::new(c))
}

/// C_{xy} = x^{s(y)}.
pub fn basic_power_matrix(ring: &GaloisRing) -> Result<Matrix> {
    require_field(ring)?;
    let s = special_exponents(ring).s;
    Ok(ring.elements().map(|x| s.iter().map(|sy| power(ring, x, sy)).collect()).collect())
}

pub fn basic_power_matrix_inverse(ring: &GaloisRing) -> Result<Matrix> {
    gauss_inverse(ring, &basic_power_matrix(ring)?)
}

/// c_y with f(x) = Σ_y c_y m_{s(y)}(x): c_y = Σ_z C⁻¹_{yz} f(z).
pub fn expand_in_basic(ring: &GaloisRing, f: &FieldPolynomial) -> Result<Vec<Elem>> {
    require_field(ring)?;
    let q = ring.order();
    if f.coeffs.len() > q {
        return Err(Error::DegreeTooHigh { degree: f.degree(), max: q - 1 });
    }
    let cinv = basic_power_matrix_inverse(ring)?;
    let values: Vec<Elem> = ring.elements().map(|z| f.eval(ring, z)).collect();
    Ok(cinv
        .iter()
        .map(|row| row.iter().zip(&values).fold(Elem::ZERO, |acc, (&a, &v)| ring.add(acc, ring.mul(a, v))))
        .collect())
}

pub fn format_matrix(ring: &GaloisRing, m: &Matrix) -> Vec<String> {
    m.iter()
        .map(|row| row.iter().map(|&e| ring.format_elem(e)).collect::<Vec<_>>().join(" "))
        .collect()
}
