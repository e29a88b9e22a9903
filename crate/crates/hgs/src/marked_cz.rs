//! Marked hypergraphs over prime fields: controlled-Z phases, the indicator polynomial p and
//! the equivalent calibrated hypergraph.

use crate::cyclicity::special_exponents;
use crate::error::{Error, Result};
use crate::field_poly::{basic_power_matrix_inverse, power_matrix_inverse, FieldPolynomial};
use crate::galois_ring::{Elem, GaloisRing, Scalar};
use crate::hypergraph::{CalibratedHypergraph, ExpFn, Hyperedge, MarkedHypergraph};
use crate::hyperstate::{build_state, state_from_table};
use crate::qudit_space::{config_count, for_each_config, FlatState};

fn require_prime_field(ring: &GaloisRing) -> Result<()> {
    if ring.is_prime_field() {
        Ok(())
    } else {
        Err(Error::NotPrimeField)
    }
}

/// The default marked value x* = p − 1.
pub fn default_xstar(ring: &GaloisRing) -> Elem {
    ring.neg(Elem::ONE)
}

fn check_xstar(ring: &GaloisRing, xstar: Elem) -> Result<Elem> {
    ring.check(xstar).map_err(|_| Error::BadMark(format!("marked value {} outside the field", xstar.0)))
}

/// x_r · Π_{c ∈ X∖r} δ_{x_c, x*}.
pub fn cz_phase(ring: &GaloisRing, x: &Hyperedge, target: usize, xstar: Elem, config: &[Elem]) -> Result<Scalar> {
    require_prime_field(ring)?;
    if config.len() <= *x.vertices().last().expect("hyperedges are nonempty") {
        return Err(Error::GradeMismatch { expected: x.vertices()[x.len() - 1] + 1, got: config.len() });
    }
    let fires = x.vertices().iter().filter(|&&c| c != target).all(|&c| config[c] == xstar);
    Ok(if fires { config[target].0 } else { 0 })
}

/// p(x) = Σ_k A⁻¹_{k,x*} x^k, the polynomial of degree < p with p(y) = δ_{y,x*}.
pub fn p_polynomial(ring: &GaloisRing, xstar: Elem) -> Result<FieldPolynomial> {
    require_prime_field(ring)?;
    let xstar = check_xstar(ring, xstar)?;
    let inv = power_matrix_inverse(ring)?;
    Ok(FieldPolynomial::new(inv.iter().map(|row| row[xstar.index()]).collect()))
}

/// Σ_X cz phases over E[l] in canonical order.
pub fn marked_phase_table(mh: &MarkedHypergraph, xstar: Elem) -> Result<Vec<Scalar>> {
    let ring = mh.ring();
    require_prime_field(ring)?;
    let xstar = check_xstar(ring, xstar)?;
    let mut table = vec![0; config_count(ring.order(), mh.l())?];
    for_each_config(ring.order(), mh.l(), |idx, cfg| {
        for (x, &t) in mh.edges() {
            let fires = x.vertices().iter().filter(|&&c| c != t).all(|&c| cfg[c] == xstar);
            if fires {
                table[idx] = ring.scalar_add(table[idx], cfg[t].0);
            }
        }
    });
    Ok(table)
}

/// The state Π_X cz_X |+⟩^l.
pub fn marked_state(mh: &MarkedHypergraph, xstar: Elem) -> Result<FlatState> {
    state_from_table(mh.ring(), mh.l(), marked_phase_table(mh, xstar)?)
}

/// Calibrated hypergraph with the same state: for each control tuple y the key
/// w(c_i) = s(y_i), w(r) = s*, with value Π_i C⁻¹_{y_i,x*}.
pub fn marked_to_calibrated(mh: &MarkedHypergraph, xstar: Elem) -> Result<CalibratedHypergraph> {
    let ring = mh.ring();
    require_prime_field(ring)?;
    let xstar = check_xstar(ring, xstar)?;
    let specials = special_exponents(ring);
    let cinv = basic_power_matrix_inverse(ring)?;
    let coeff: Vec<Scalar> = (0..ring.order()).map(|y| cinv[y][xstar.index()].0).collect();
    let nonzero: Vec<usize> = (0..ring.order()).filter(|&y| coeff[y] != 0).collect();
    let mut out = CalibratedHypergraph::new(ring.clone(), mh.l());
    for (x, &target) in mh.edges() {
        out.add_edge(x.clone())?;
        let controls: Vec<usize> = x.vertices().iter().copied().filter(|&c| c != target).collect();
        let mut choice = vec![0usize; controls.len()];
        loop {
            let mut value: Scalar = 1;
            let mut pairs = vec![(target, specials.s_star.clone())];
            for (i, &c) in controls.iter().enumerate() {
                let y = nonzero[choice[i]];
                value = ring.scalar_mul(value, coeff[y]);
                pairs.push((c, specials.s[y].clone()));
            }
            out.add_value(x, ExpFn::new(ring, pairs), value)?;
            // odometer over nonzero coefficient indices
            let mut i = 0;
            while i < choice.len() {
                choice[i] += 1;
                if choice[i] < nonzero.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// Convenience: the state of marked_to_calibrated, for cross-checks.
pub fn marked_state_via_calibrated(mh: &MarkedHypergraph, xstar: Elem) -> Result<FlatState> {
    build_state(&marked_to_calibrated(mh, xstar)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois_ring::named_ring;

    #[test]
    fn p_over_f3() {
        let r = named_ring("F3").unwrap();
        let p = p_polynomial(&r, default_xstar(&r)).unwrap();
        assert_eq!(p.coeffs(), &[Elem(0), Elem(1), Elem(2)]);
        for y in r.elements() {
            assert_eq!(p.eval(&r, y), if y == Elem(2) { Elem::ONE } else { Elem::ZERO });
        }
    }

    #[test]
    fn rejects_extension_fields() {
        let r = named_ring("F4").unwrap();
        let mh = MarkedHypergraph::new(r.clone(), 2);
        assert_eq!(marked_to_calibrated(&mh, Elem(1)).unwrap_err(), Error::NotPrimeField);
        assert_eq!(p_polynomial(&r, Elem(1)).unwrap_err(), Error::NotPrimeField);
    }

    #[test]
    fn single_cz_matches() {
        let r = named_ring("F3").unwrap();
        let mut mh = MarkedHypergraph::new(r.clone(), 2);
        mh.add_edge(Hyperedge::new(vec![0, 1]).unwrap(), 1).unwrap();
        let a = marked_state(&mh, Elem(2)).unwrap();
        let b = marked_state_via_calibrated(&mh, Elem(2)).unwrap();
        assert_eq!(a, b);
    }
}
