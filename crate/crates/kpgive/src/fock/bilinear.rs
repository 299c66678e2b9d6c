//! The bilinear identity `Σ_{j,k} ψ^{+(j)}_k τ ⊗ ψ^{−(j)}_{−k} τ = 0` that
//! characterizes group orbits of the vacuum.

use std::collections::HashMap;

use super::ops::{psi_state, Pm};
use super::state::FockState;
use super::vector::FockVector;
use crate::ring::Ring;

/// Nonzero components of the truncated bilinear tensor.
#[derive(Clone, Debug)]
pub struct BilinearDefect<R: Ring> {
    /// Number of `(u, w)` component pairs that received a contribution.
    pub pairs_checked: usize,
    /// Nonzero components, sorted.
    pub nonzero: Vec<(FockState, FockState, R)>,
    /// Doubled-energy bound `e_u + e_w` inside which components are exact.
    pub trust: Option<i32>,
}

impl<R: Ring> BilinearDefect<R> {
    pub fn is_zero(&self) -> bool {
        self.nonzero.is_empty()
    }
}

fn by_energy<R: Ring>(v: &FockVector<R>) -> Vec<(i32, Vec<(&FockState, &R)>)> {
    let mut out: Vec<(i32, Vec<(&FockState, &R)>)> = Vec::new();
    for (s, c) in v.terms() {
        match out.last_mut() {
            Some((e, list)) if *e == s.energy2() => list.push((s, c)),
            _ => out.push((s.energy2(), vec![(s, c)])),
        }
    }
    out
}

/// Components `(u, w)` with `e_u + e_w <= E` only involve components of `τ`
/// up to `E`, so they are exact when `τ` is exact up to `E`.
pub fn bilinear_defect<R: Ring>(tau: &FockVector<R>) -> BilinearDefect<R> {
    let n = tau.n();
    let emax = tau
        .energy_cut()
        .unwrap_or_else(|| tau.energy_range().map_or(0, |(_, hi)| 2 * hi));
    let mut acc: HashMap<(FockState, FockState), R> = HashMap::new();
    let mut pairs = 0usize;
    let kmax = emax + 3;
    for j in 1..=n {
        let mut k2 = -kmax;
        while k2 <= kmax {
            let u = tau.apply_signed(|s| psi_state(Pm::Plus, j, k2, s));
            let w = tau.apply_signed(|s| psi_state(Pm::Minus, j, -k2, s));
            k2 += 2;
            if u.is_zero() || w.is_zero() {
                continue;
            }
            let (ub, wb) = (by_energy(&u), by_energy(&w));
            for (eu, ulist) in &ub {
                for (ew, wlist) in &wb {
                    if eu + ew > emax {
                        break;
                    }
                    for (us, uc) in ulist {
                        for (ws, wc) in wlist {
                            pairs += 1;
                            let c = uc.mul_ref(wc);
                            acc.entry(((*us).clone(), (*ws).clone()))
                                .and_modify(|a| *a += &c)
                                .or_insert(c);
                        }
                    }
                }
            }
        }
    }
    let mut nonzero: Vec<(FockState, FockState, R)> = acc
        .into_iter()
        .filter(|(_, c)| !Ring::is_zero(c))
        .map(|((u, w), c)| (u, w, c))
        .collect();
    nonzero.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    BilinearDefect {
        pairs_checked: pairs,
        nonzero,
        trust: tau.energy_cut(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ops::{apply_q, charged_vacuum};
    use crate::ring::Scalar;

    #[test]
    fn vacuum_is_decomposable() {
        for n in 1..=3 {
            let v = FockVector::basis(FockState::vacuum(n), Scalar::one());
            assert!(bilinear_defect(&v).is_zero());
        }
    }

    #[test]
    fn charge_shift_sum_is_decomposable() {
        // |0> + Q1 Q2^{-1}|0> is a single rank-one perturbation.
        let mut v = FockVector::basis(FockState::vacuum(2), Scalar::one());
        v.add_assign(&apply_q(1, 1, &apply_q(2, -1, &v.clone())));
        assert!(bilinear_defect(&v).is_zero());
        let (_, st) = charged_vacuum(&[1, -1]);
        assert!(v.get(&st).is_some());
    }

    #[test]
    fn double_excitation_violates_plucker() {
        let ex = FockState::from_modes(1, &[(1, 1), (1, 3)], &[(1, -1), (1, -3)]).unwrap();
        let mut v = FockVector::basis(FockState::vacuum(1), Scalar::one());
        v.add_term(ex, Scalar::one());
        let d = bilinear_defect(&v);
        assert!(!d.is_zero());
    }
}
