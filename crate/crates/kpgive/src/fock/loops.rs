//! Loop algebra and loop group actions on the Fock space, with cut planning.
//!
//! `a = Σ_l a_l ζ^{±l}` sends `v^{(j)}_k ↦ Σ_i (a_l)_{ij} v^{(i)}_{k±l}` and acts
//! on wedges by the Leibniz rule, i.e. as `Σ (a_l)_{ij} α^{(ij)}_{∓l}`.

use super::ops::alpha_state;
use super::vector::{Coeff, FockVector};
use crate::error::{Error, Result};
use crate::givental::element::{LoopAlgebraElement, LoopGroupElement};
use crate::ring::{Ring, Scalar};

/// `a·v`, dropping components above `cut`.
pub fn apply_loop_algebra<C: Coeff>(
    a: &LoopAlgebraElement,
    v: &FockVector<C>,
    cut: Option<i32>,
) -> FockVector<C> {
    let n = a.n();
    let levels: Vec<(i32, Vec<(usize, usize, Scalar)>)> = a
        .levels()
        .map(|(l, m)| {
            let mode = if a.sign().raises() { -(l as i32) } else { l as i32 };
            let mut entries = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let c = m.get(i, j);
                    if !Ring::is_zero(c) {
                        entries.push((i + 1, j + 1, c.clone()));
                    }
                }
            }
            (mode, entries)
        })
        .collect();
    v.apply_linear(cut, |s, out| {
        let mut buf = Vec::new();
        for (mode, entries) in &levels {
            for (i, j, c) in entries {
                buf.clear();
                alpha_state(*i, *j, *mode, s, &mut buf);
                out.extend(buf.drain(..).map(|(sg, t)| (sg * c, t)));
            }
        }
    })
}

/// `exp(a)·v`. Raising elements are truncated at `cut`; lowering elements
/// terminate on their own when `v` is finite.
pub fn apply_exp<C: Coeff>(a: &LoopAlgebraElement, v: &FockVector<C>, cut: Option<i32>) -> FockVector<C> {
    if a.sign().raises() {
        assert!(
            cut.is_some() || v.energy_cut().is_some(),
            "raising exponentials need an energy cut"
        );
    }
    let mut out = v.clone();
    if let Some(c) = cut {
        if a.sign().raises() {
            out.truncate(c);
        }
    }
    let mut term = out.clone();
    let mut p = 1i64;
    loop {
        term = apply_loop_algebra(a, &term, cut).scale_scalar(&Scalar::new(1, p));
        if term.is_zero() {
            break;
        }
        out.add_assign(&term);
        p += 1;
    }
    out
}

/// One step of a group word, in application order.
#[derive(Clone, Copy, Debug)]
pub enum Step<'a> {
    Exp(&'a LoopAlgebraElement),
    /// `1 + ε a` over a ring with a nilpotent `ε`.
    OnePlusEps(&'a LoopAlgebraElement),
}

impl Step<'_> {
    fn element(&self) -> &LoopAlgebraElement {
        match self {
            Step::Exp(a) | Step::OnePlusEps(a) => a,
        }
    }
}

/// Result of applying a group word with cut planning.
#[derive(Clone, Debug)]
pub struct GroupAction<R: Ring> {
    pub vector: FockVector<R>,
    /// False when a lowering exponential acted on an already truncated vector,
    /// so exactness can only be supported empirically (stabilization).
    pub certified: bool,
}

/// `A·(1 + ε b)·v`, exact in doubled energy `<= required` when certified.
///
/// Walking the word from the left, the input of a raising step needs the same
/// exactness as its output, a finite lowering step `1 + εs` needs `2·maxlevel`
/// more, and a lowering exponential needs everything. Each step truncates at
/// `min(energy_cut, need)`.
pub fn apply_group_word<R: Ring>(
    group: &LoopGroupElement,
    eps: Option<&LoopAlgebraElement>,
    v: &FockVector<R>,
    required: i32,
    energy_cut: i32,
) -> Result<GroupAction<R>> {
    let mut steps: Vec<Step> = Vec::new();
    if let Some(b) = eps {
        if !b.is_zero() {
            steps.push(Step::OnePlusEps(b));
        }
    }
    steps.extend(group.factors().iter().rev().map(Step::Exp));
    // need[t]: exactness required of the output of step t.
    let mut need: Vec<Option<i32>> = vec![None; steps.len()];
    let mut after = Some(required);
    for t in (0..steps.len()).rev() {
        need[t] = after;
        let a = steps[t].element();
        after = match (steps[t], a.sign().raises()) {
            (_, true) => after,
            (Step::OnePlusEps(_), false) => after.map(|r| r + 2 * a.max_level() as i32),
            (Step::Exp(_), false) => None,
        };
    }
    let mut cur = v.clone();
    let mut certified = true;
    let mut capped = false;
    for (t, step) in steps.iter().enumerate() {
        let a = step.element();
        let cap = need[t].map_or(energy_cut, |r| r.min(energy_cut));
        if a.sign().raises() && cur.energy_cut().is_none_or(|c| c > cap) {
            if cap < need[t].unwrap_or(i32::MAX) {
                capped = true;
            }
            cur.truncate(cap);
        }
        cur = match step {
            Step::Exp(a) => {
                if !a.sign().raises() && cur.energy_cut().is_some() {
                    certified = false;
                }
                apply_exp(a, &cur, if a.sign().raises() { Some(cap) } else { None })
            }
            Step::OnePlusEps(a) => {
                let eps_unit = R::epsilon_unit().ok_or_else(|| {
                    Error::Precondition("1 + εa needs a coefficient ring with ε".into())
                })?;
                let image = apply_loop_algebra(a, &cur, if a.sign().raises() { Some(cap) } else { None });
                let mut out = cur.clone();
                out.add_assign(&image.map(|c| c.mul_ref(&eps_unit)));
                if !a.sign().raises() {
                    if let Some(c) = cur.energy_cut() {
                        out.truncate(c - 2 * a.max_level() as i32);
                    }
                }
                out
            }
        };
    }
    if certified {
        if let Some(c) = cur.energy_cut() {
            if c < required {
                let why = if capped {
                    format!("energy cut {energy_cut} is below the {required} this computation needs")
                } else {
                    format!("vector exact only up to doubled energy {c}, {required} needed")
                };
                return Err(Error::TrustExceeded(why));
            }
        }
    }
    Ok(GroupAction { vector: cur, certified })
}

/// `A·v` truncated at `energy_cut`.
pub fn apply_loop_group<R: Ring>(
    group: &LoopGroupElement,
    v: &FockVector<R>,
    energy_cut: i32,
) -> Result<GroupAction<R>> {
    apply_group_word(group, None, v, energy_cut, energy_cut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ops::apply_alpha;
    use crate::fock::state::{enumerate_states, FockState};
    use crate::givental::element::LoopSign;
    use crate::ring::{DualScalar, Mat};

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::new(p, d)
    }

    fn vac(n: usize) -> FockVector<Scalar> {
        FockVector::basis(FockState::vacuum(n), Scalar::from(1))
    }

    fn one_by_one(sign: LoopSign, level: u32, c: Scalar) -> LoopAlgebraElement {
        LoopAlgebraElement::monomial(sign, level, Mat::from_rows(vec![vec![c]]).unwrap()).unwrap()
    }

    #[test]
    fn zeta_on_vacuum_is_alpha_minus_one() {
        let a = one_by_one(LoopSign::Plus, 1, q(1, 1));
        let v = apply_loop_algebra(&a, &vac(1), None);
        assert_eq!(v, apply_alpha(1, 1, -1, &vac(1)));
        assert_eq!(v.len(), 1);
        let s = apply_loop_algebra(&one_by_one(LoopSign::Minus, 1, q(1, 1)), &vac(1), None);
        assert!(s.is_zero());
    }

    #[test]
    fn exp_inverse_round_trip() {
        let a = LoopAlgebraElement::new(
            LoopSign::Minus,
            2,
            vec![(1, Mat::from_rows(vec![vec![q(1, 2), q(1, 1)], vec![q(1, 1), q(0, 1)]]).unwrap())],
        )
        .unwrap();
        for st in enumerate_states(2, 6) {
            let v = FockVector::basis(st, q(1, 1));
            let w = apply_exp(&a.scale(&q(-1, 1)), &apply_exp(&a, &v, None), None);
            assert_eq!(w, v);
        }
    }

    #[test]
    fn raising_exp_inverse_within_cut() {
        let a = LoopAlgebraElement::new(
            LoopSign::Plus,
            2,
            vec![(2, Mat::from_rows(vec![vec![q(0, 1), q(1, 3)], vec![q(-1, 3), q(0, 1)]]).unwrap())],
        )
        .unwrap();
        let w = apply_exp(&a.scale(&q(-1, 1)), &apply_exp(&a, &vac(2), Some(10)), Some(10));
        let mut expect = vac(2);
        expect.truncate(10);
        assert_eq!(w, expect);
    }

    #[test]
    fn group_keeps_charge_sector() {
        let a = LoopAlgebraElement::new(
            LoopSign::Plus,
            2,
            vec![(1, Mat::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(0, 1)]]).unwrap())],
        )
        .unwrap();
        let g = LoopGroupElement::exp(a).unwrap();
        let out = apply_loop_group(&g, &vac(2), 8).unwrap();
        assert!(out.certified);
        assert!(out.vector.terms().all(|(s, _)| s.total_charge() == 0));
        assert!(out.vector.terms().any(|(s, _)| s.charges() == vec![1, -1]));
    }

    #[test]
    fn mixed_word_is_flagged() {
        let r = one_by_one(LoopSign::Plus, 1, q(1, 1));
        let s = one_by_one(LoopSign::Minus, 1, q(1, 1));
        let g = LoopGroupElement::new(1, vec![s.clone(), r.clone()]).unwrap();
        let out = apply_loop_group(&g, &vac(1), 8).unwrap();
        assert!(!out.certified);
        let g = LoopGroupElement::new(1, vec![r, s]).unwrap();
        assert!(apply_loop_group(&g, &vac(1), 8).unwrap().certified);
    }

    #[test]
    fn epsilon_step() {
        let r = one_by_one(LoopSign::Plus, 1, q(1, 1));
        let v = vac(1).map(DualScalar::from_scalar);
        let g = LoopGroupElement::identity(1);
        let out = apply_group_word(&g, Some(&r), &v, 6, 6).unwrap();
        assert_eq!(out.vector.len(), 2);
        let e = out.vector.terms().find(|(s, _)| !s.is_vacuum()).unwrap().1;
        assert_eq!(e, &DualScalar::epsilon());
        assert!(apply_group_word(&g, Some(&r), &vac(1), 6, 6).is_err());
    }
}
