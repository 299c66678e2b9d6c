//! Fermions `ψ^{±(j)}_k`, charge shifts `Q_i^{±1}` and bosons `α^{(ij)}_k`.

use super::state::{decode_slot, slot, FockState};
use super::vector::{Coeff, FockVector};
use crate::ring::Scalar;

/// Sign of a fermion: `Plus` wedges, `Minus` contracts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pm {
    Plus,
    Minus,
}

impl Pm {
    pub fn flip(self) -> Pm {
        match self {
            Pm::Plus => Pm::Minus,
            Pm::Minus => Pm::Plus,
        }
    }
}

/// `ψ^{±(j)}_k` on a basis state; `k = k2/2`.
///
/// `ψ^{+(j)}_k` wedges `v^{(j)}_{−k}`, `ψ^{−(j)}_k` contracts `v^{(j)}_k`.
pub fn psi_state(pm: Pm, color: usize, k2: i32, st: &FockState) -> Option<(bool, FockState)> {
    match pm {
        Pm::Plus => st.create(slot(st.n(), color, -k2)),
        Pm::Minus => st.annihilate(slot(st.n(), color, k2)),
    }
}

pub fn apply_psi<C: Coeff>(pm: Pm, color: usize, k2: i32, v: &FockVector<C>) -> FockVector<C> {
    v.apply_signed(|s| psi_state(pm, color, k2, s))
}

/// Fermions that rebuild `st` from the vacuum (first applied first), and the
/// sign `σ` with `st = σ · O_m ⋯ O_1 |0⟩`.
fn factorize(st: &FockState) -> (Vec<(Pm, usize, i32)>, bool) {
    let n = st.n();
    let mut ops = Vec::with_capacity(st.excitations());
    for &h in st.holes() {
        let (c, k2) = decode_slot(n, h);
        ops.push((Pm::Minus, c, k2));
    }
    for &p in st.particles() {
        let (c, k2) = decode_slot(n, p);
        ops.push((Pm::Plus, c, -k2));
    }
    let mut cur = FockState::vacuum(n);
    let mut neg = false;
    for &(pm, c, k2) in &ops {
        let (s, next) = psi_state(pm, c, k2, &cur).expect("rebuilding a valid state");
        neg ^= s;
        cur = next;
    }
    debug_assert!(&cur == st);
    (ops, neg)
}

/// `Q_i^{±1}` on a basis state. It never annihilates.
///
/// Realized through `Q_i ψ^{±(j)}_k = (−1)^{δ_ij+1} ψ^{±(j)}_{k∓δ_ij} Q_i`,
/// `Q_i|0⟩ = ψ^{+(i)}_{−1/2}|0⟩` and `Q_i^{−1}|0⟩ = ψ^{−(i)}_{−1/2}|0⟩`.
pub fn q_state(color: usize, inverse: bool, st: &FockState) -> (bool, FockState) {
    let n = st.n();
    let (ops, mut neg) = factorize(st);
    let vac = FockState::vacuum(n);
    let (s0, mut cur) = if inverse {
        psi_state(Pm::Minus, color, -1, &vac)
    } else {
        psi_state(Pm::Plus, color, -1, &vac)
    }
    .expect("Q on vacuum");
    neg ^= s0;
    // Q_i raises color-i modes by one, Q_i^{-1} lowers them.
    let shift = if inverse { -2 } else { 2 };
    for &(pm, c, k2) in &ops {
        let k2 = if c == color {
            match pm {
                Pm::Plus => k2 - shift,
                Pm::Minus => k2 + shift,
            }
        } else {
            neg ^= true;
            k2
        };
        let (s, next) = psi_state(pm, c, k2, &cur).expect("Q is invertible");
        neg ^= s;
        cur = next;
    }
    (neg, cur)
}

pub fn apply_q<C: Coeff>(color: usize, power: i32, v: &FockVector<C>) -> FockVector<C> {
    let mut out = v.clone();
    for _ in 0..power.unsigned_abs() {
        out = out.apply_signed(|s| Some(q_state(color, power < 0, s)));
    }
    out
}

/// `|k_1,…,k_n⟩ = Q_1^{k_1} ⋯ Q_n^{k_n} |0⟩` as `(negative, state)`.
pub fn charged_vacuum(charges: &[i32]) -> (bool, FockState) {
    let n = charges.len();
    let mut st = FockState::vacuum(n);
    let mut neg = false;
    for (c, &k) in charges.iter().enumerate().rev() {
        for _ in 0..k.unsigned_abs() {
            let (s, next) = q_state(c + 1, k < 0, &st);
            neg ^= s;
            st = next;
        }
    }
    (neg, st)
}

/// `α^{(ij)}_k` on a basis state, appended to `out` as `(coefficient, state)`.
///
/// For `(i,j,k) ≠ (i,i,0)` it moves an occupied `v^{(j)}_b` to an empty
/// `v^{(i)}_{b−k}`; `α^{(i)}_0` is the charge of color `i`.
pub fn alpha_state(i: usize, j: usize, k: i32, st: &FockState, out: &mut Vec<(Scalar, FockState)>) {
    if i == j && k == 0 {
        let q = st.charge(i);
        if q != 0 {
            out.push((Scalar::from(q as i64), st.clone()));
        }
        return;
    }
    let n = st.n();
    let k2 = 2 * k;
    // Candidate source modes b (doubled) of color j.
    let mut cands: Vec<i32> = Vec::new();
    for &p in st.particles() {
        let (c, b2) = decode_slot(n, p);
        if c == j {
            cands.push(b2);
        }
    }
    // Sea modes b < 0 whose target b − k is above the sea.
    let mut b2 = -1;
    while b2 > k2 {
        cands.push(b2);
        b2 -= 2;
    }
    // Sources landing in a hole of color i.
    for &h in st.holes() {
        let (c, h2) = decode_slot(n, h);
        if c == i {
            cands.push(h2 + k2);
        }
    }
    cands.sort_unstable();
    cands.dedup();
    for b2 in cands {
        let Some((s1, mid)) = st.annihilate(slot(n, j, b2)) else {
            continue;
        };
        let Some((s2, dst)) = mid.create(slot(n, i, b2 - k2)) else {
            continue;
        };
        let sign = if s1 ^ s2 { -1 } else { 1 };
        out.push((Scalar::from(sign), dst));
    }
}

pub fn apply_alpha<C: Coeff>(i: usize, j: usize, k: i32, v: &FockVector<C>) -> FockVector<C> {
    v.apply_linear(None, |s, out| alpha_state(i, j, k, s, out))
}
