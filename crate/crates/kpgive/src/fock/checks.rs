//! Exhaustive operator-identity checks on the truncated Fock space: Clifford
//! anticommutators, affine `gl_n` commutators, charge shifts, the vertex
//! operator form of `ψ^{±(i)}(z)` and the `Γ_±` exchange relations.
//!
//! Every identity is applied to each basis state up to a doubled-energy bound
//! without truncating intermediate results, so comparisons are exact.

use rayon::prelude::*;
use serde_json::json;

use super::gamma::apply_boson_exp;
use super::ops::{apply_alpha, apply_psi, apply_q, psi_state, Pm};
use super::state::{enumerate_states, FockState};
use super::vector::FockVector;
use crate::ring::{Ring, Scalar, TruncPoly, Var};

/// Outcome of one identity family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckSummary {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckSummary {
    fn collect(name: &str, results: Vec<(usize, Vec<String>)>) -> Self {
        let mut cases = 0;
        let mut failures = 0;
        let mut first_failure = None;
        for (c, fails) in results {
            cases += c;
            failures += fails.len();
            if first_failure.is_none() {
                first_failure = fails.into_iter().next();
            }
        }
        CheckSummary {
            name: name.to_string(),
            cases,
            failures,
            first_failure,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "check": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "all_zero": self.passed(),
            "first_failure": self.first_failure,
        })
    }
}

type V = FockVector<Scalar>;

fn basis(st: &FockState) -> V {
    FockVector::basis(st.clone(), Scalar::one())
}

fn same(a: &V, b: &V) -> bool {
    a.sub(b).is_zero()
}

fn half(k2: i32) -> String {
    if k2 % 2 == 0 {
        format!("{}", k2 / 2)
    } else {
        format!("{}/2", k2)
    }
}

/// Runs `f` on every basis state up to `e2max`, in parallel.
fn over_states(
    n: usize,
    e2max: i32,
    f: impl Fn(&FockState) -> (usize, Vec<String>) + Sync + Send,
) -> Vec<(usize, Vec<String>)> {
    enumerate_states(n, e2max).par_iter().map(f).collect()
}

/// `{ψ^λ_{(i)k}, ψ^μ_{(j)l}} = δ_{λ,−μ} δ_{ij} δ_{k,−l}` for all colors and
/// all half-integer modes with `|k| <= kmax2/2`.
pub fn clifford_check(n: usize, e2max: i32, kmax2: i32) -> CheckSummary {
    let mut ops = Vec::new();
    for pm in [Pm::Plus, Pm::Minus] {
        for c in 1..=n {
            let mut k2 = -kmax2 | 1;
            while k2 <= kmax2 {
                ops.push((pm, c, k2));
                k2 += 2;
            }
        }
    }
    let res = over_states(n, e2max, |st| {
        let mut cases = 0;
        let mut fails = Vec::new();
        for (a, &(la, ca, ka)) in ops.iter().enumerate() {
            for &(lb, cb, kb) in &ops[a..] {
                cases += 1;
                let mut acc: Vec<(bool, FockState)> = Vec::with_capacity(2);
                for (first, second) in [((lb, cb, kb), (la, ca, ka)), ((la, ca, ka), (lb, cb, kb))] {
                    if let Some((s1, mid)) = psi_state(first.0, first.1, first.2, st) {
                        if let Some((s2, out)) = psi_state(second.0, second.1, second.2, &mid) {
                            acc.push((s1 ^ s2, out));
                        }
                    }
                }
                let total: i32 = match acc.as_slice() {
                    [] => 0,
                    [(neg, out)] if out == st => if *neg { -1 } else { 1 },
                    [(n1, o1), (n2, o2)] if o1 == o2 => {
                        let s = (if *n1 { -1 } else { 1 }) + (if *n2 { -1 } else { 1 });
                        if s == 0 {
                            0
                        } else if o1 == st {
                            s
                        } else {
                            i32::MAX
                        }
                    }
                    _ => i32::MAX,
                };
                let expected = i32::from(la != lb && ca == cb && ka == -kb);
                if total != expected {
                    fails.push(format!(
                        "{{psi{:?}({})_{} , psi{:?}({})_{}}} on {}",
                        la,
                        ca,
                        half(ka),
                        lb,
                        cb,
                        half(kb),
                        st
                    ));
                }
            }
        }
        (cases, fails)
    });
    CheckSummary::collect("clifford", res)
}

/// Affine `gl_n` level-one relations
/// `[α^{(ij)}_p, α^{(kl)}_q] = δ_{jk}α^{(il)}_{p+q} − δ_{il}α^{(kj)}_{p+q} + p δ_{il}δ_{jk}δ_{p,−q}`
/// for `|p|, |q| <= pmax`; the diagonal case is the oscillator algebra.
pub fn oscillator_check(n: usize, e2max: i32, pmax: i32) -> CheckSummary {
    let res = over_states(n, e2max, |st| {
        let w = basis(st);
        let mut cases = 0;
        let mut fails = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        for p in -pmax..=pmax {
                            for q in -pmax..=pmax {
                                cases += 1;
                                let lhs = apply_alpha(i, j, p, &apply_alpha(k, l, q, &w))
                                    .sub(&apply_alpha(k, l, q, &apply_alpha(i, j, p, &w)));
                                let mut rhs = V::zero(n, None);
                                if j == k {
                                    rhs.add_assign(&apply_alpha(i, l, p + q, &w));
                                }
                                if i == l {
                                    rhs = rhs.sub(&apply_alpha(k, j, p + q, &w));
                                    if j == k && p == -q {
                                        rhs.add_assign(&w.scale_scalar(&Scalar::from(p as i64)));
                                    }
                                }
                                if !same(&lhs, &rhs) {
                                    fails.push(format!("[a({i}{j})_{p}, a({k}{l})_{q}] on {st}"));
                                }
                            }
                        }
                    }
                }
            }
        }
        (cases, fails)
    });
    CheckSummary::collect("oscillator", res)
}

/// Charge-shift relations: `Q_iQ_i^{−1} = 1`, `Q_iQ_j = −Q_jQ_i` for `i ≠ j`,
/// `Q_iψ^{±(j)}_k = (−1)^{δ_{ij}+1}ψ^{±(j)}_{k∓δ_{ij}}Q_i`, and
/// `[α^{(i)}_k, Q_j] = δ_{ij}δ_{k0}Q_j`.
pub fn q_relations_check(n: usize, e2max: i32, kmax2: i32) -> CheckSummary {
    let res = over_states(n, e2max, |st| {
        let w = basis(st);
        let mut cases = 0;
        let mut fails = Vec::new();
        let mut check = |ok: bool, what: String| {
            cases += 1;
            if !ok {
                fails.push(format!("{what} on {st}"));
            }
        };
        for i in 1..=n {
            check(same(&apply_q(i, 1, &apply_q(i, -1, &w)), &w), format!("Q{i}Q{i}^-1"));
            check(same(&apply_q(i, -1, &apply_q(i, 1, &w)), &w), format!("Q{i}^-1Q{i}"));
            for j in 1..=n {
                if i != j {
                    let a = apply_q(i, 1, &apply_q(j, 1, &w));
                    let b = apply_q(j, 1, &apply_q(i, 1, &w));
                    check(same(&a, &b.neg()), format!("Q{i}Q{j}+Q{j}Q{i}"));
                }
                for pm in [Pm::Plus, Pm::Minus] {
                    let mut k2 = -kmax2 | 1;
                    while k2 <= kmax2 {
                        let shift = match (i == j, pm) {
                            (false, _) => 0,
                            (true, Pm::Plus) => -2,
                            (true, Pm::Minus) => 2,
                        };
                        let lhs = apply_q(i, 1, &apply_psi(pm, j, k2, &w));
                        let mut rhs = apply_psi(pm, j, k2 + shift, &apply_q(i, 1, &w));
                        if i != j {
                            rhs = rhs.neg();
                        }
                        check(same(&lhs, &rhs), format!("Q{i} psi{pm:?}({j})_{}", half(k2)));
                        k2 += 2;
                    }
                }
                for k in -2..=2 {
                    let lhs = apply_alpha(i, i, k, &apply_q(j, 1, &w))
                        .sub(&apply_q(j, 1, &apply_alpha(i, i, k, &w)));
                    let rhs = if i == j && k == 0 { apply_q(j, 1, &w) } else { V::zero(n, None) };
                    check(same(&lhs, &rhs), format!("[a({i})_{k}, Q{j}]"));
                }
            }
        }
        (cases, fails)
    });
    CheckSummary::collect("q-relations", res)
}

/// Coefficients of `z^p`, `p <= pmax`, in
/// `ψ^{±(i)}(z) = Q_i^{±1} z^{±α^{(i)}_0} Γ^{(i)}_−(±[z]) Γ^{(i)}_+(∓[z^{−1}])`
/// with `ψ(z) = Σ_k ψ_k z^{−k−1/2}`.
pub fn vertex_check(n: usize, e2max: i32, pmax: i32) -> CheckSummary {
    let res = over_states(n, e2max, |st| {
        let w = basis(st);
        let e = st.energy2();
        let mut cases = 0;
        let mut fails = Vec::new();
        for pm in [Pm::Plus, Pm::Minus] {
            let c: i64 = if pm == Pm::Plus { 1 } else { -1 };
            for i in 1..=n {
                let q = st.charge(i) as i64;
                // U_b: coefficient of z^{-b} in Γ_+(∓[z^{-1}]) w,
                // b·U_b = ∓Σ_k α_k U_{b−k}.
                let bmax = (e / 2 + 1) as usize;
                let mut us: Vec<V> = vec![w.clone()];
                for b in 1..=bmax {
                    let mut acc = V::zero(n, None);
                    for k in 1..=b {
                        acc.add_assign(&apply_alpha(i, i, k as i32, &us[b - k]));
                    }
                    us.push(acc.scale_scalar(&Scalar::new(-c, b as i64)));
                }
                let pmin = -(e as i64) / 2 - q.abs() - 1;
                let amax = (pmax as i64 + bmax as i64 - c * q).max(0) as usize;
                // G_a(U_b): coefficient of z^a in Γ_−(±[z]) U_b,
                // a·G_a = ±Σ_k α_{−k} G_{a−k}.
                let gs: Vec<Vec<V>> = us
                    .iter()
                    .map(|u| {
                        let mut g: Vec<V> = vec![u.clone()];
                        for a in 1..=amax {
                            let mut acc = V::zero(n, None);
                            for k in 1..=a {
                                acc.add_assign(&apply_alpha(i, i, -(k as i32), &g[a - k]));
                            }
                            g.push(acc.scale_scalar(&Scalar::new(c, a as i64)));
                        }
                        g
                    })
                    .collect();
                for p in pmin..=pmax as i64 {
                    cases += 1;
                    let lhs = apply_psi(pm, i, (-2 * p - 1) as i32, &w);
                    let mut inner = V::zero(n, None);
                    for (b, g) in gs.iter().enumerate() {
                        let a = p + b as i64 - c * q;
                        if a >= 0 && (a as usize) < g.len() {
                            inner.add_assign(&g[a as usize]);
                        }
                    }
                    let rhs = apply_q(i, c as i32, &inner);
                    if !same(&lhs, &rhs) {
                        fails.push(format!("psi{pm:?}({i}) z^{p} on {st}"));
                    }
                }
            }
        }
        (cases, fails)
    });
    CheckSummary::collect("vertex", res)
}

type P = TruncPoly<Scalar>;
type PV = FockVector<P>;

fn lift(st: &FockState, ncolors: usize, weight: u32) -> PV {
    FockVector::basis(st.clone(), P::one(ncolors, weight))
}

/// Boson terms of `Γ^{(j)}_±(s)` with `s_m` the variable `(var_color, m)`.
fn gamma_terms(j: usize, plus: bool, var_color: usize, ncolors: usize, weight: u32) -> Vec<(usize, i32, P)> {
    (1..=weight as i32)
        .map(|m| {
            let mode = if plus { m } else { -m };
            (j, mode, P::var(ncolors, weight, Var::new(var_color, m as usize)))
        })
        .collect()
}

/// `exp(±Σ_m s_m)`: since `s_m` has weight `m`, its weight-`m` part is the
/// coefficient of `z^m` in `γ(s, ±[z])`.
fn gamma_fn(var_color: usize, ncolors: usize, weight: u32, negate: bool) -> Vec<P> {
    let mut sum = P::zero(ncolors, weight);
    for m in 1..=weight as usize {
        sum.add_assign(&P::var(ncolors, weight, Var::new(var_color, m)));
    }
    if negate {
        sum = sum.neg();
    }
    let e = sum.exp().expect("zero constant term");
    let mut parts = vec![P::zero(ncolors, weight); weight as usize + 1];
    for (mono, c) in e.terms() {
        parts[mono.weight() as usize].add_term(mono.clone(), c.clone());
    }
    parts
}

fn poly_same(a: &PV, b: &PV) -> bool {
    a.sub(b).is_zero()
}

/// `Γ_+(s)|0⟩ = |0⟩`, `⟨0|Γ_−(s) = ⟨0|`, the exchange relation
/// `Γ^{(j)}_+(s)Γ^{(k)}_−(s') = γ(s,s')^{δ_{jk}} Γ^{(k)}_−(s')Γ^{(j)}_+(s)`
/// and the commutation of `Γ^{(j)}_±(s)` past `ψ^{±(k)}_l`, all with `s`,
/// `s'` formal variables up to weight `weight`.
pub fn gamma_check(n: usize, e2max: i32, weight: u32, kmax2: i32) -> CheckSummary {
    let nc = 2 * n;
    let vac = FockState::vacuum(n);
    let mut results = Vec::new();

    // Vacuum invariance.
    let mut fails = Vec::new();
    let mut cases = 0;
    for j in 1..=n {
        cases += 1;
        let v = lift(&vac, nc, weight);
        let out = apply_boson_exp(&gamma_terms(j, true, j, nc, weight), &v);
        if !poly_same(&out, &v) {
            fails.push(format!("Gamma+({j})|0> != |0>"));
        }
    }
    results.push((cases, fails));

    results.extend(over_states(n, e2max, |st| {
        let w = lift(st, nc, weight);
        let mut cases = 0;
        let mut fails = Vec::new();
        for j in 1..=n {
            // <0| Γ_−(s) w = <0|w>.
            cases += 1;
            let out = apply_boson_exp(&gamma_terms(j, false, j, nc, weight), &w);
            let expect = if st.is_vacuum() { P::one(nc, weight) } else { P::zero(nc, weight) };
            let got = out.get(&vac).cloned().unwrap_or_else(|| P::zero(nc, weight));
            if got != expect {
                fails.push(format!("<0|Gamma-({j}) on {st}"));
            }
            for k in 1..=n {
                cases += 1;
                let gp = gamma_terms(j, true, j, nc, weight);
                let gm = gamma_terms(k, false, n + k, nc, weight);
                let lhs = apply_boson_exp(&gp, &apply_boson_exp(&gm, &w));
                let mut rhs = apply_boson_exp(&gm, &apply_boson_exp(&gp, &w));
                if j == k {
                    let mut log = P::zero(nc, weight);
                    for m in 1..=weight as usize {
                        let t = P::var(nc, weight, Var::new(j, m)).mul(&P::var(nc, weight, Var::new(n + k, m)));
                        log.add_assign(&t.scale_scalar(&Scalar::from(m as i64)));
                    }
                    let g = log.exp().expect("zero constant term");
                    rhs = rhs.map(|c| c.mul(&g));
                }
                if !poly_same(&lhs, &rhs) {
                    fails.push(format!("Gamma+({j}) Gamma-({k}) exchange on {st}"));
                }
            }
        }
        // Γ^{(j)}_±(s) ψ^{λ(k)}_l = Σ_m h_m ψ^{λ(k)}_{l±m} Γ^{(j)}_±(s), with
        // h the z-coefficients of γ(s, ±[z^{±1}])^{δ_{jk}}.
        for j in 1..=n {
            for plus in [true, false] {
                let g = gamma_terms(j, plus, j, nc, weight);
                let gw = apply_boson_exp(&g, &w);
                for pm in [Pm::Plus, Pm::Minus] {
                    let h = gamma_fn(j, nc, weight, pm == Pm::Minus);
                    for k in 1..=n {
                        let mut l2 = -kmax2 | 1;
                        while l2 <= kmax2 {
                            cases += 1;
                            let lhs = apply_boson_exp(&g, &apply_psi(pm, k, l2, &w));
                            let mut rhs = PV::zero(n, None);
                            if j == k {
                                for (m, hm) in h.iter().enumerate() {
                                    let shift = if plus { 2 * m as i32 } else { -2 * m as i32 };
                                    rhs.add_assign(&apply_psi(pm, k, l2 + shift, &gw).map(|c| c.mul(hm)));
                                }
                            } else {
                                rhs = apply_psi(pm, k, l2, &gw);
                            }
                            if !poly_same(&lhs, &rhs) {
                                fails.push(format!(
                                    "Gamma{}({j}) psi{pm:?}({k})_{} on {st}",
                                    if plus { "+" } else { "-" },
                                    half(l2)
                                ));
                            }
                            l2 += 2;
                        }
                    }
                }
            }
        }
        (cases, fails)
    }));
    CheckSummary::collect("gamma", results)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_small() {
        let s = clifford_check(2, 6, 7);
        assert!(s.passed(), "{s:?}");
        assert!(s.cases > 0);
    }

    #[test]
    fn oscillator_small() {
        let s = oscillator_check(2, 4, 2);
        assert!(s.passed(), "{s:?}");
    }

    #[test]
    fn q_relations_small() {
        let s = q_relations_check(2, 6, 5);
        assert!(s.passed(), "{s:?}");
    }

    #[test]
    fn vertex_small() {
        for n in 1..=2 {
            let s = vertex_check(n, 6, 3);
            assert!(s.passed(), "{s:?}");
        }
    }

    #[test]
    fn gamma_small() {
        let s = gamma_check(2, 4, 3, 5);
        assert!(s.passed(), "{s:?}");
    }

    #[test]
    fn summary_reports_first_failure() {
        let s = CheckSummary::collect("x", vec![(2, vec![]), (3, vec!["a".into(), "b".into()])]);
        assert_eq!((s.cases, s.failures), (5, 2));
        assert_eq!(s.first_failure.as_deref(), Some("a"));
    }
}
