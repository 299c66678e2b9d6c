//! The verbs: each turns a configuration into a JSON payload and, for the
//! verifying ones, a verdict.

use kpgive::fock::{
    apply_loop_group, bilinear_defect, clifford_check, gamma_check, oscillator_check, q_relations_check,
    vertex_check, CheckSummary, FockState, FockVector, Pm,
};
use kpgive::frobenius::{gradient_defect, potential, theta_series, trr_defect, wdvv_defect, DefectSummary};
use kpgive::givental::{derive, main_theorem_report, LoopGroupElement, Side};
use kpgive::kptau::{orthogonality_defect, tau, wave_psi, wave_psi_with};
use kpgive::ring::{MatrixSeries, Restriction, Scalar, TruncPoly};
use kpgive::stabilize::stabilize;
use kpgive::{Cutoffs, Error, Result};
use serde_json::{json, Value};

use crate::config::RunConfig;

/// Payload plus an optional failing residual (`check`, first offending item).
#[derive(Debug)]
pub struct Outcome {
    pub payload: Value,
    pub failure: Option<(String, String)>,
    pub stabilization: Option<Value>,
}

impl Outcome {
    fn plain(payload: Value) -> Self {
        Outcome {
            payload,
            failure: None,
            stabilization: None,
        }
    }

    fn judged(payload: Value, check: &str, first: Option<String>) -> Self {
        Outcome {
            payload,
            failure: first.map(|m| (check.to_string(), m)),
            stabilization: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CheckTarget {
    Orthogonality,
    Bilinear,
    Wdvv,
    Trr,
    Vertex,
    Gamma,
    Clifford,
    GroupTwist,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum StabilizeTarget {
    Tau,
    Psi,
    Theta,
    Potential,
    Derive,
    VerifyMainTheorem,
}

fn sign_of(minus: bool) -> Pm {
    if minus {
        Pm::Minus
    } else {
        Pm::Plus
    }
}

fn charge(cfg: &RunConfig) -> Result<Vec<i32>> {
    match cfg.options.get("charge") {
        None => Ok(vec![0; cfg.n]),
        Some(v) => {
            let c: Vec<i32> =
                serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("options.charge: {e}")))?;
            if c.len() != cfg.n {
                return Err(Error::Parse(format!("options.charge has {} entries, n = {}", c.len(), cfg.n)));
            }
            Ok(c)
        }
    }
}

fn x1_psi(group: &LoopGroupElement, c: &Cutoffs) -> Result<kpgive::kptau::WaveMatrix<Scalar>> {
    wave_psi_with(group, None, Pm::Plus, c, Some(Restriction::X1Only))
}

fn tau_payload(cfg: &RunConfig, c: &Cutoffs) -> Result<Value> {
    Ok(tau(&cfg.group, &charge(cfg)?, c)?.to_json())
}

fn psi_payload(cfg: &RunConfig, c: &Cutoffs, minus: bool) -> Result<Value> {
    Ok(wave_psi(&cfg.group, sign_of(minus), c)?.to_json())
}

fn theta_payload(cfg: &RunConfig, c: &Cutoffs) -> Result<Value> {
    Ok(theta_series(&x1_psi(&cfg.group, c)?, c.theta_depth)?.to_json())
}

fn potential_payload(cfg: &RunConfig, c: &Cutoffs) -> Result<Value> {
    let theta = theta_series(&x1_psi(&cfg.group, c)?, c.theta_depth)?;
    Ok(potential(&theta, c.tdegree)?.to_json())
}

fn derive_payload(cfg: &RunConfig, c: &Cutoffs, side: Side) -> Result<Value> {
    let (legs, certified, _) = derive(&cfg.group, cfg.algebra()?, c, &[side])?;
    Ok(json!({"certified": certified, "derivative": legs[0].to_json()}))
}

pub fn run_tau(cfg: &RunConfig) -> Result<Outcome> {
    Ok(Outcome::plain(tau_payload(cfg, &cfg.cutoffs)?))
}

pub fn run_psi(cfg: &RunConfig, minus: bool) -> Result<Outcome> {
    Ok(Outcome::plain(psi_payload(cfg, &cfg.cutoffs, minus)?))
}

pub fn run_theta(cfg: &RunConfig) -> Result<Outcome> {
    Ok(Outcome::plain(theta_payload(cfg, &cfg.cutoffs)?))
}

pub fn run_potential(cfg: &RunConfig) -> Result<Outcome> {
    Ok(Outcome::plain(potential_payload(cfg, &cfg.cutoffs)?))
}

pub fn run_derive(cfg: &RunConfig, side: Side) -> Result<Outcome> {
    Ok(Outcome::plain(derive_payload(cfg, &cfg.cutoffs, side)?))
}

pub fn run_verify(cfg: &RunConfig) -> Result<Outcome> {
    let report = main_theorem_report(&cfg.group, cfg.algebra()?, &cfg.cutoffs)?;
    let failure = report
        .residuals
        .iter()
        .find(|(_, d)| !d.all_zero)
        .map(|(name, d)| (name.clone(), d.first_nonzero.clone().unwrap_or_default()));
    Ok(Outcome {
        payload: report.to_json(),
        failure,
        stabilization: None,
    })
}

pub fn run_stabilize(cfg: &RunConfig, target: StabilizeTarget, minus: bool, side: Side) -> Result<Outcome> {
    let (payload, s) = stabilize(&cfg.cutoffs, |c| match target {
        StabilizeTarget::Tau => tau_payload(cfg, c),
        StabilizeTarget::Psi => psi_payload(cfg, c, minus),
        StabilizeTarget::Theta => theta_payload(cfg, c),
        StabilizeTarget::Potential => potential_payload(cfg, c),
        StabilizeTarget::Derive => derive_payload(cfg, c, side),
        StabilizeTarget::VerifyMainTheorem => {
            Ok(main_theorem_report(&cfg.group, cfg.algebra()?, c)?.to_json())
        }
    })?;
    Ok(Outcome {
        payload,
        failure: s.changed.first().map(|p| ("stabilization".to_string(), p.clone())),
        stabilization: Some(s.to_json()),
    })
}

fn series_entries(m: &MatrixSeries<Scalar>) -> Vec<TruncPoly<Scalar>> {
    m.coeffs().iter().flat_map(|c| c.entries().to_vec()).collect()
}

fn summary_outcome(name: &str, payload: Value, d: &DefectSummary) -> Outcome {
    Outcome::judged(payload, name, d.first_nonzero.clone())
}

fn check_outcome(c: CheckSummary) -> Outcome {
    let first = (!c.passed()).then(|| c.first_failure.clone().unwrap_or_default());
    Outcome::judged(c.to_json(), &c.name, first)
}

pub fn run_check(cfg: &RunConfig, target: CheckTarget) -> Result<Outcome> {
    let c = &cfg.cutoffs;
    let n = cfg.n;
    let e = c.energy2;
    let opt = |k: &str, d: i64| cfg.option_u64(k).map_or(d, |v| v as i64);
    Ok(match target {
        CheckTarget::Orthogonality => {
            let psi = wave_psi_with::<Scalar>(&cfg.group, None, Pm::Plus, c, Some(Restriction::OddOnly))?;
            let d = DefectSummary::of(n, &series_entries(&orthogonality_defect(&psi)));
            let payload = json!({"certified": psi.certified, "orthogonality_defect": d.to_json()});
            summary_outcome("orthogonality", payload, &d)
        }
        CheckTarget::Bilinear => {
            let vac = FockVector::basis(FockState::vacuum(n), Scalar::new(1, 1));
            let act = apply_loop_group::<Scalar>(&cfg.group, &vac, e)?;
            let d = bilinear_defect(&act.vector);
            let first = d.nonzero.first().map(|(u, w, _)| format!("{u} (x) {w}"));
            let payload = json!({
                "certified": act.certified,
                "pairs_checked": d.pairs_checked,
                "trust_energy2": d.trust,
                "all_zero": d.is_zero(),
                "first_nonzero": first,
            });
            Outcome::judged(payload, "bilinear", first)
        }
        CheckTarget::Wdvv => {
            let theta = theta_series(&x1_psi(&cfg.group, c)?, c.theta_depth.max(3))?;
            let f = potential(&theta, c.tdegree)?;
            let d = DefectSummary::of(n, &wdvv_defect(&f));
            let payload = json!({"F_t": f.f_t.to_json(), "wdvv_defect": d.to_json()});
            summary_outcome("wdvv", payload, &d)
        }
        CheckTarget::Trr => {
            let theta = theta_series(&x1_psi(&cfg.group, c)?, c.theta_depth.max(3))?;
            let f = potential(&theta, c.tdegree)?;
            let levels: Vec<usize> = match cfg.options.get("trr_s") {
                Some(v) => serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("options.trr_s: {e}")))?,
                None => vec![2, 3],
            };
            let grad = DefectSummary::of(n, &gradient_defect(&f));
            let mut first = grad.first_nonzero.clone().map(|m| ("gradient".to_string(), m));
            let mut per_s = serde_json::Map::new();
            for s in levels {
                let d = DefectSummary::of(n, &trr_defect(&f, s)?);
                if first.is_none() {
                    first = d.first_nonzero.clone().map(|m| (format!("trr s={s}"), m));
                }
                per_s.insert(s.to_string(), d.to_json());
            }
            Outcome {
                payload: json!({"gradient_defect": grad.to_json(), "trr_defect": per_s}),
                failure: first,
                stabilization: None,
            }
        }
        CheckTarget::Vertex => check_outcome(vertex_check(n, e, opt("pmax", 6) as i32)),
        CheckTarget::Gamma => check_outcome(gamma_check(
            n,
            e,
            opt("weight", c.xweight.min(3) as i64) as u32,
            opt("kmax2", (e - 1) as i64) as i32,
        )),
        CheckTarget::Clifford => {
            let kmax2 = opt("kmax2", (e + 1) as i64) as i32;
            let checks = [
                clifford_check(n, e, kmax2),
                oscillator_check(n, e, opt("pmax", 3) as i32),
                q_relations_check(n, e, kmax2),
            ];
            let first = checks
                .iter()
                .find(|c| !c.passed())
                .map(|c| (c.name.clone(), c.first_failure.clone().unwrap_or_default()));
            Outcome {
                payload: Value::Array(checks.iter().map(CheckSummary::to_json).collect()),
                failure: first,
                stabilization: None,
            }
        }
        CheckTarget::GroupTwist => {
            // Twisted levels were already enforced while parsing; this checks
            // the exponentiated series A(−w)ᵗA(w) = Id through z^Z.
            cfg.group.check_twist(c.zorder)?;
            if let Some(a) = &cfg.algebra {
                a.check_twisted()?;
            }
            Outcome::plain(json!({
                "factors": cfg.group.factors().len(),
                "ordered": cfg.group.is_ordered(),
                "checked_through_order": c.zorder,
                "all_zero": true,
            }))
        }
    })
}
