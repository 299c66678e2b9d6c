//! Vertex exponentials `Γ_±(x)` with polynomial coefficients and the pairing
//! `⟨target| Γ_+(x) |u⟩` behind tau functions and wave functions.

use super::ops::alpha_state;
use super::state::FockState;
use super::vector::FockVector;
use crate::error::{Error, Result};
use crate::ring::{Restriction, Ring, Scalar, TruncPoly, Var};

/// `exp(Σ_t s_t α^{(c_t)}_{m_t}) v` for mutually commuting bosons.
///
/// Each `s_t` must have zero constant term, so the series stops once the
/// weight trust is exhausted (raising modes) or the energy floor is reached
/// (lowering modes).
pub fn apply_boson_exp<R: Ring>(
    terms: &[(usize, i32, TruncPoly<R>)],
    v: &FockVector<TruncPoly<R>>,
) -> FockVector<TruncPoly<R>> {
    debug_assert!(terms.iter().all(|(_, _, s)| s.constant_term().is_zero()));
    let mut out = v.clone();
    let mut term = v.clone();
    let mut p = 1i64;
    let mut buf = Vec::new();
    loop {
        let mut next = FockVector::zero(v.n(), term.energy_cut());
        for (st, c) in term.terms() {
            for (color, mode, s) in terms {
                buf.clear();
                alpha_state(*color, *color, *mode, st, &mut buf);
                if buf.is_empty() {
                    continue;
                }
                let cs = c.mul(s);
                if cs.is_zero() {
                    continue;
                }
                for (a, t) in buf.drain(..) {
                    next.add_term(t, cs.scale_scalar(&a));
                }
            }
        }
        term = next.scale_scalar(&Scalar::new(1, p));
        if term.is_zero() {
            break;
        }
        out.add_assign(&term);
        p += 1;
    }
    out
}

fn x_terms<R: Ring>(
    n: usize,
    weight: u32,
    raising: bool,
    restriction: Option<Restriction>,
) -> Vec<(usize, i32, TruncPoly<R>)> {
    let keep = |k: i32| match restriction {
        None => true,
        Some(Restriction::OddOnly) => k % 2 == 1,
        Some(Restriction::X1Only) => k == 1,
    };
    let mut out = Vec::new();
    for c in 1..=n {
        for k in (1..=weight as i32).filter(|&k| keep(k)) {
            let mode = if raising { -k } else { k };
            out.push((c, mode, TruncPoly::var(n, weight, Var::new(c, k as usize))));
        }
    }
    out
}

/// `Γ_+(x) v = Π_j exp(Σ_k x^{(j)}_k α^{(j)}_k) v` up to weight `weight`.
///
/// A component of the result at doubled energy `e` draws on `v` up to
/// `e + 2·weight`, so the exactness bound drops by `2·weight`.
pub fn apply_gamma_plus<R: Ring>(v: &FockVector<R>, weight: u32) -> FockVector<TruncPoly<R>> {
    let n = v.n();
    let lifted = v.map(|c| TruncPoly::constant(n, weight, c.clone()));
    let mut out = apply_boson_exp(&x_terms(n, weight, false, None), &lifted);
    if let Some(c) = v.energy_cut() {
        out.truncate(c - 2 * weight as i32);
    }
    out
}

/// `Γ_−(x) v = Π_j exp(Σ_k x^{(j)}_k α^{(j)}_{−k}) v` up to weight `weight`.
pub fn apply_gamma_minus<R: Ring>(v: &FockVector<R>, weight: u32) -> FockVector<TruncPoly<R>> {
    gamma_minus_restricted(v, weight, None)
}

/// `Γ_−(x) v` with the times outside `restriction` set to zero.
fn gamma_minus_restricted<R: Ring>(
    v: &FockVector<R>,
    weight: u32,
    restriction: Option<Restriction>,
) -> FockVector<TruncPoly<R>> {
    let n = v.n();
    let lifted = v.map(|c| TruncPoly::constant(n, weight, c.clone()));
    apply_boson_exp(&x_terms(n, weight, true, restriction), &lifted)
}

/// Precomputed `Γ_−(x)|target⟩`, the transpose of `⟨target|Γ_+(x)`.
///
/// Since `α_kᵗ = α_{−k}` in the orthonormal wedge basis,
/// `⟨target|Γ_+(x)|u⟩ = Σ_b ⟨b|Γ_−(x)|target⟩ u_b`.
#[derive(Clone, Debug)]
pub struct VacuumPairing {
    target: FockState,
    sign: bool,
    weight: u32,
    dual: FockVector<TruncPoly<Scalar>>,
}

impl VacuumPairing {
    /// `negative` flips the sign of the bra, for targets like `−|s⟩`.
    pub fn new(target: FockState, negative: bool, weight: u32) -> Self {
        Self::restricted(target, negative, weight, None)
    }

    /// As [`VacuumPairing::new`], with the times outside `restriction` set
    /// to zero; the result equals the restriction of the full pairing.
    pub fn restricted(target: FockState, negative: bool, weight: u32, restriction: Option<Restriction>) -> Self {
        let v = FockVector::basis(target.clone(), Scalar::one());
        VacuumPairing {
            dual: gamma_minus_restricted(&v, weight, restriction),
            target,
            sign: negative,
            weight,
        }
    }

    pub fn target(&self) -> &FockState {
        &self.target
    }

    /// Doubled energy `u` must be exact up to.
    pub fn required_cut(&self) -> i32 {
        self.target.energy2() + 2 * self.weight as i32
    }

    /// `±⟨target|Γ_+(x)|u⟩` as a polynomial of trust `weight`.
    pub fn pair<R: Ring>(&self, u: &FockVector<R>) -> Result<TruncPoly<R>> {
        if let Some(c) = u.energy_cut() {
            if c < self.required_cut() {
                return Err(Error::TrustExceeded(format!(
                    "pairing at weight {} needs doubled energy {}, vector exact to {c}",
                    self.weight,
                    self.required_cut()
                )));
            }
        }
        let n = u.n();
        let mut out = TruncPoly::zero(n, self.weight);
        for (st, p) in self.dual.terms() {
            if let Some(c) = u.get(st) {
                for (m, a) in p.terms() {
                    out.add_term(m.clone(), c.scale(a));
                }
            }
        }
        Ok(if self.sign { out.neg() } else { out })
    }
}

/// Coefficient of `s` in `v` (zero if absent); errors above the exactness bound.
pub fn extract_coefficient<R: Ring>(v: &FockVector<TruncPoly<R>>, s: &FockState, weight: u32) -> Result<TruncPoly<R>> {
    Ok(v
        .coefficient(s)?
        .cloned()
        .unwrap_or_else(|| TruncPoly::zero(v.n(), weight)))
}
