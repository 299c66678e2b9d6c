//! Acceptance suite: one test per criterion, named `criterion_N_*`.
//!
//! Each test also prints a single `criterion N: PASS|FAIL ...` line (visible
//! with `--nocapture`).

use std::time::{Duration, Instant};

use kpgive::fock::{
    apply_loop_group, bilinear_defect, clifford_check, oscillator_check, q_relations_check, vertex_check,
    FockState, FockVector, Pm,
};
use kpgive::frobenius::{gradient_defect, potential, theta_series, trr_defect, wdvv_defect, DefectSummary};
use kpgive::givental::{
    derive, dual_derivative, kp_dpsi, verify_main_theorem, LoopAlgebraElement, LoopGroupElement, LoopSign, Side,
};
use kpgive::kptau::{orthogonality_defect, wave_psi_with};
use kpgive::ring::{Mat, Restriction, Scalar, TruncPoly, Var};
use kpgive::sample::{direction_suite, group_suite};
use kpgive::stabilize::stabilize;
use kpgive::Cutoffs;

const SEED: u64 = 2024;

fn report(n: u32, ok: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n}: {detail}");
}

/// Twisted elements with n ∈ {1,2,3}, one or two exponential factors, levels ≤ 2.
fn group_sample() -> Vec<LoopGroupElement> {
    group_suite(SEED, 24, &[1, 2, 3], 2)
}

/// `(A, a)` pairs with n ∈ {1, 2}, keeping only nonzero directions.
fn pair_sample(ns: &[usize], count: usize) -> Vec<(LoopGroupElement, LoopAlgebraElement)> {
    group_suite(SEED, count, ns, 2)
        .into_iter()
        .zip(direction_suite(SEED, count, ns))
        .filter(|(_, a)| !a.is_zero())
        .collect()
}

fn odd_cutoffs() -> Cutoffs {
    Cutoffs::from_wz(4, 4)
}

fn theorem_cutoffs() -> Cutoffs {
    Cutoffs::new(28, 4, 6, 4, 6)
}

fn frobenius_payload(g: &LoopGroupElement, c: &Cutoffs) -> kpgive::Result<serde_json::Value> {
    let psi = wave_psi_with::<Scalar>(g, None, Pm::Plus, c, Some(Restriction::X1Only))?;
    let theta = theta_series(&psi, c.theta_depth)?;
    Ok(potential(&theta, c.tdegree)?.to_json())
}

#[test]
fn criterion_1_identity_potential_is_the_cubic() {
    let start = Instant::now();
    let c = Cutoffs::new(24, 5, 5, 6, 5);
    let g = LoopGroupElement::identity(3);
    let psi = wave_psi_with::<Scalar>(&g, None, Pm::Plus, &c, Some(Restriction::X1Only)).unwrap();
    let f = potential(&theta_series(&psi, 3).unwrap(), c.tdegree).unwrap();
    let mut cubic = TruncPoly::zero(3, f.trust);
    for i in 1..=3 {
        cubic.add_assign(&TruncPoly::var(3, f.trust, Var::new(i, 1)).pow(3).scale_scalar(&Scalar::new(1, 6)));
    }
    let wdvv = DefectSummary::of(3, &wdvv_defect(&f));
    let elapsed = start.elapsed();
    let ok = f.f_t == cubic && wdvv.all_zero && elapsed < Duration::from_secs(10);
    report(1, ok, format!("F_t cubic={} wdvv_zero={} in {elapsed:.2?}", f.f_t == cubic, wdvv.all_zero));
}

#[test]
fn criterion_2_fock_relations_on_all_basis_states() {
    let start = Instant::now();
    let checks = [
        clifford_check(2, 12, 13),
        oscillator_check(2, 12, 3),
        q_relations_check(2, 12, 13),
        vertex_check(2, 12, 6),
    ];
    let elapsed = start.elapsed();
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{}: {:?}", c.name, c.first_failure))
        .collect();
    let cases: usize = checks.iter().map(|c| c.cases).sum();
    let ok = failed.is_empty() && elapsed < Duration::from_secs(60);
    report(2, ok, format!("{cases} cases, failures {failed:?}, in {elapsed:.2?}"));
}

#[test]
fn criterion_3_orthogonality_of_sampled_elements() {
    let start = Instant::now();
    let sample = group_sample();
    assert!(sample.len() >= 20);
    assert!(sample.iter().any(|g| g.factors().len() == 2));
    let mut bad = Vec::new();
    for (i, g) in sample.iter().enumerate() {
        let psi = wave_psi_with::<Scalar>(g, None, Pm::Plus, &odd_cutoffs(), Some(Restriction::OddOnly)).unwrap();
        if !orthogonality_defect(&psi).is_zero() {
            bad.push(i);
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(300);
    report(3, ok, format!("{} elements, nonzero defects at {bad:?}, in {elapsed:.2?}", sample.len()));
}

#[test]
fn criterion_4_bilinear_identity_of_sampled_elements() {
    let sample = group_sample();
    let mut bad = Vec::new();
    let mut pairs = 0;
    for (i, g) in sample.iter().enumerate() {
        let v = FockVector::<Scalar>::basis(FockState::vacuum(g.n()), Scalar::new(1, 1));
        let tau = apply_loop_group(g, &v, 12).unwrap().vector;
        let d = bilinear_defect(&tau);
        pairs += d.pairs_checked;
        if !d.is_zero() {
            bad.push(i);
        }
    }
    report(4, bad.is_empty(), format!("{} elements, {pairs} component pairs, nonzero at {bad:?}", sample.len()));
}

#[test]
fn criterion_5_kp_flow_matches_dual_oracle() {
    let pairs = pair_sample(&[1, 2], 30);
    let mut kinds: Vec<(LoopSign, u32)> = pairs.iter().map(|(_, a)| (a.sign(), a.max_level())).collect();
    kinds.sort();
    kinds.dedup();
    assert!(pairs.len() >= 20, "only {} nonzero pairs", pairs.len());
    assert_eq!(kinds.len(), 5, "levels covered: {kinds:?}");
    let c = theorem_cutoffs();
    let mut bad = Vec::new();
    for (i, (g, a)) in pairs.iter().enumerate() {
        let psi = wave_psi_with::<Scalar>(g, None, Pm::Plus, &c, Some(Restriction::X1Only)).unwrap();
        let kp = kp_dpsi(a, &psi).unwrap();
        let dual = dual_derivative(g, a, &c).unwrap().dpsi.truncated(kp.order(), kp.weight());
        if kp != dual {
            bad.push(i);
        }
    }
    report(5, bad.is_empty(), format!("{} pairs covering {kinds:?}, mismatches at {bad:?}", pairs.len()));
}

#[test]
fn criterion_6_main_theorem_on_sampled_pairs() {
    let pairs = pair_sample(&[2], 20);
    assert!(pairs.len() >= 20);
    let c = theorem_cutoffs();
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for (i, (g, a)) in pairs.iter().enumerate() {
        let start = Instant::now();
        if let Err(e) = verify_main_theorem(g, a, &c) {
            bad.push(format!("{i}: {e}"));
        }
        slowest = slowest.max(start.elapsed());
    }
    let ok = bad.is_empty() && slowest < Duration::from_secs(600);
    report(6, ok, format!("{} pairs, slowest {slowest:.2?}, failures {bad:?}", pairs.len()));
}

#[test]
fn criterion_7_gradient_and_trr() {
    let c = Cutoffs::new(22, 4, 4, 4, 4);
    let mut bad = Vec::new();
    let sample = group_sample();
    for (i, g) in sample.iter().enumerate() {
        let psi = wave_psi_with::<Scalar>(g, None, Pm::Plus, &c, Some(Restriction::X1Only)).unwrap();
        let f = potential(&theta_series(&psi, c.theta_depth).unwrap(), c.tdegree).unwrap();
        let n = g.n();
        let mut ok = DefectSummary::of(n, &gradient_defect(&f)).all_zero;
        for s in [2, 3] {
            ok &= DefectSummary::of(n, &trr_defect(&f, s).unwrap()).all_zero;
        }
        if !ok {
            bad.push(i);
        }
    }
    report(7, bad.is_empty(), format!("{} elements, nonzero at {bad:?}", sample.len()));
}

#[test]
fn criterion_8_energy_bump_changes_nothing() {
    let mut changed = Vec::new();
    let sample = group_sample();
    for (i, g) in sample.iter().enumerate() {
        let (_, s) = stabilize(&odd_cutoffs(), |c| {
            Ok(wave_psi_with::<Scalar>(g, None, Pm::Plus, c, Some(Restriction::OddOnly))?.to_json())
        })
        .unwrap();
        let (_, t) = stabilize(&Cutoffs::new(22, 4, 4, 4, 4), |c| frobenius_payload(g, c)).unwrap();
        if !s.stable() || !t.stable() {
            changed.push(format!("group {i}: {:?} {:?}", s.changed.first(), t.changed.first()));
        }
    }
    for (i, (g, a)) in pair_sample(&[2], 6).iter().enumerate() {
        let (_, s) = stabilize(&theorem_cutoffs(), |c| {
            let (legs, _, _) = derive(g, a, c, &Side::ALL)?;
            Ok(serde_json::Value::Array(legs.iter().map(|l| l.to_json()).collect()))
        })
        .unwrap();
        if !s.stable() {
            changed.push(format!("pair {i}: {:?}", s.changed.first()));
        }
    }
    report(8, changed.is_empty(), format!("changed: {changed:?}"));
}

#[test]
fn criterion_9_one_color_examples_on_all_legs() {
    let c = Cutoffs::new(20, 4, 4, 4, 4);
    let id = LoopGroupElement::identity(1);
    let s3 = Scalar::new(5, 3);
    let one = |m: Scalar| Mat::from_rows(vec![vec![m]]).unwrap();
    let s = LoopAlgebraElement::monomial(LoopSign::Minus, 3, one(s3.clone())).unwrap();
    let r = LoopAlgebraElement::monomial(LoopSign::Plus, 1, one(Scalar::new(1, 1))).unwrap();
    let (s_legs, _, _) = derive(&id, &s, &c, &Side::ALL).unwrap();
    let (r_legs, _, _) = derive(&id, &r, &c, &Side::ALL).unwrap();
    let expect = s3.clone() * Scalar::new(-1, 2);
    let mut bad = Vec::new();
    for leg in &s_legs {
        if leg.df != TruncPoly::constant(1, leg.df.trust(), expect.clone()) {
            bad.push(format!("s3 on {}", leg.side));
        }
    }
    for leg in &r_legs {
        if !leg.df.is_zero() {
            bad.push(format!("r on {}", leg.side));
        }
    }
    let ok = bad.is_empty() && s_legs.len() == 4 && r_legs.len() == 4;
    report(9, ok, format!("four legs each, mismatches {bad:?}"));
}
