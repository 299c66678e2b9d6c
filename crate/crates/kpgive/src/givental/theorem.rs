//! The equivalence check: the KP flow of `Ψ` under `A ↦ A·exp(εa)` moves the
//! potential exactly as the genus-zero Lee vector field does.
//!
//! Four legs compute `∂F/∂ε` at frozen flat coordinates, all as polynomials
//! in `x₁`:
//! - `lee-theta`: Lee's formula in the flat coordinates `t̃`, composed with `t̃(x₁)`;
//! - `lee-psi`: the same formula written with `Ψ_k`;
//! - `kp-flat`: the flat-coordinate derivative fed with the KP flow of `Ψ`;
//! - `dual-oracle`: a dual-number rerun of the Fock pipeline.

use std::fmt;

use serde_json::{json, Value};

use crate::cutoffs::Cutoffs;
use crate::error::{Error, Result};
use crate::fock::Pm;
use crate::frobenius::{potential, theta_series, DefectSummary};
use crate::givental::element::{LoopAlgebraElement, LoopGroupElement, LoopSign};
use crate::givental::kp::{flat_derivative, kp_dpsi, uniform_dpsi};
use crate::givental::lee::{lee_df_psi, lee_f};
use crate::givental::oracle::dual_derivative;
use crate::kptau::wave_psi_with;
use crate::ring::{MatrixSeries, Restriction, Scalar, TruncPoly};

/// One of the four ways of computing `∂F/∂ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    LeeTheta,
    LeePsi,
    KpFlat,
    DualOracle,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::LeeTheta, Side::LeePsi, Side::KpFlat, Side::DualOracle];

    pub fn name(self) -> &'static str {
        match self {
            Side::LeeTheta => "lee-theta",
            Side::LeePsi => "lee-psi",
            Side::KpFlat => "kp-flat",
            Side::DualOracle => "dual-oracle",
        }
    }

    pub fn parse(s: &str) -> Result<Side> {
        match s {
            "lee-theta" => Ok(Side::LeeTheta),
            "lee-psi" => Ok(Side::LeePsi),
            "kp" | "kp-flat" => Ok(Side::KpFlat),
            "dual" | "dual-oracle" => Ok(Side::DualOracle),
            _ => Err(Error::Parse(format!("unknown side {s:?}"))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `∂F/∂ε` from one leg, with `Ψ̇` where that leg produces it.
#[derive(Clone, Debug)]
pub struct DerivativeReport {
    pub side: Side,
    pub df: TruncPoly<Scalar>,
    pub dpsi: Option<MatrixSeries<Scalar>>,
}

impl DerivativeReport {
    pub fn to_json(&self) -> Value {
        json!({
            "side": self.side.name(),
            "dF": self.df.to_json(),
            "dPsi": self.dpsi.as_ref().map(|d| d.to_json_keyed("dpsi")),
        })
    }
}

/// All legs and the named residuals between them.
#[derive(Clone, Debug)]
pub struct MainTheoremReport {
    pub legs: Vec<DerivativeReport>,
    pub residuals: Vec<(String, DefectSummary)>,
    pub certified: bool,
}

impl MainTheoremReport {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|(_, d)| d.all_zero)
    }

    pub fn leg(&self, side: Side) -> Option<&DerivativeReport> {
        self.legs.iter().find(|l| l.side == side)
    }

    /// The first failing residual as an error.
    pub fn into_result(self) -> Result<Self> {
        if let Some((name, d)) = self.residuals.iter().find(|(_, d)| !d.all_zero) {
            return Err(Error::VerificationFailed {
                check: name.clone(),
                monomial: d.first_nonzero.clone().unwrap_or_default(),
            });
        }
        Ok(self)
    }

    pub fn to_json(&self) -> Value {
        let residuals: serde_json::Map<String, Value> = self
            .residuals
            .iter()
            .map(|(k, d)| (k.clone(), d.to_json()))
            .collect();
        json!({
            "passed": self.passed(),
            "certified": self.certified,
            "legs": self.legs.iter().map(DerivativeReport::to_json).collect::<Vec<_>>(),
            "residuals": residuals,
        })
    }
}

/// z-order of `Ψ` the computation needs.
pub fn required_order(a: &LoopAlgebraElement) -> usize {
    match a.sign() {
        LoopSign::Minus => 3,
        LoopSign::Plus => a.max_level() as usize + 3,
    }
}

fn series_entries(m: &MatrixSeries<Scalar>) -> Vec<TruncPoly<Scalar>> {
    m.coeffs().iter().flat_map(|c| c.entries().to_vec()).collect()
}

fn residual(n: usize, a: &TruncPoly<Scalar>, b: &TruncPoly<Scalar>) -> DefectSummary {
    DefectSummary::of(n, &[a.sub(b)])
}

/// Computes the selected legs. `theta_depth` and `tdegree` come from the
/// cutoffs; the `lee-theta` leg needs `D >= ℓ_max + 3` (r) or `D >= 3` (s).
pub fn derive(
    group: &LoopGroupElement,
    a: &LoopAlgebraElement,
    cutoffs: &Cutoffs,
    sides: &[Side],
) -> Result<(Vec<DerivativeReport>, bool, Option<MatrixSeries<Scalar>>)> {
    group.check_twist(cutoffs.zorder)?;
    a.check_twisted()?;
    if a.n() != group.n() {
        return Err(Error::Structural(format!(
            "algebra element of size {} for a group of size {}",
            a.n(),
            group.n()
        )));
    }
    let need = required_order(a);
    if cutoffs.zorder < need {
        return Err(Error::TrustExceeded(format!(
            "needs z-order {need}, cutoffs give {}",
            cutoffs.zorder
        )));
    }
    let psi = wave_psi_with::<Scalar>(group, None, Pm::Plus, cutoffs, Some(Restriction::X1Only))?;
    let mut certified = psi.certified;
    let mut legs = Vec::new();
    let mut kp = None;
    for &side in sides {
        let leg = match side {
            Side::LeeTheta => {
                let depth = cutoffs.theta_depth.max(need).min(cutoffs.zorder);
                let theta = theta_series(&psi, depth)?;
                let frob = potential(&theta, cutoffs.tdegree)?;
                let in_t = lee_f(a, &frob.theta_t)?;
                let centered: Vec<TruncPoly<Scalar>> = theta
                    .flat_map
                    .iter()
                    .zip(&frob.base_point)
                    .map(|(t, c)| t.sub(&TruncPoly::constant(t.ncolors(), t.trust(), c.clone())))
                    .collect();
                let df = crate::ring::substitute_series(&in_t, &centered, frob.trust)?;
                DerivativeReport { side, df, dpsi: None }
            }
            Side::LeePsi => DerivativeReport {
                side,
                df: lee_df_psi(a, &psi.psi)?,
                dpsi: None,
            },
            Side::KpFlat => {
                let d = kp_dpsi(a, &psi)?;
                let df = flat_derivative(&psi, &d)?;
                kp = Some(d.clone());
                DerivativeReport { side, df, dpsi: Some(d) }
            }
            Side::DualOracle => {
                let d = dual_derivative(group, a, cutoffs)?;
                certified &= d.value.certified;
                DerivativeReport {
                    side,
                    df: d.df,
                    dpsi: Some(d.dpsi),
                }
            }
        };
        legs.push(leg);
    }
    Ok((legs, certified, kp))
}

/// Runs all four legs and the `Ψ̇` cross-checks; never fails on a nonzero
/// residual (see [`verify_main_theorem`]).
pub fn main_theorem_report(
    group: &LoopGroupElement,
    a: &LoopAlgebraElement,
    cutoffs: &Cutoffs,
) -> Result<MainTheoremReport> {
    let n = group.n();
    let (legs, certified, _) = derive(group, a, cutoffs, &Side::ALL)?;
    let get = |s: Side| legs.iter().find(|l| l.side == s).expect("all legs computed");
    let mut residuals = Vec::new();

    let kp = get(Side::KpFlat).dpsi.clone().expect("kp leg has Ψ̇");
    let dual = get(Side::DualOracle).dpsi.clone().expect("dual leg has Ψ̇");
    let dual = dual.truncated(kp.order(), kp.weight());
    residuals.push((
        "dpsi: kp vs dual".to_string(),
        DefectSummary::of(n, &series_entries(&kp.sub(&dual))),
    ));
    let psi = wave_psi_with::<Scalar>(group, None, Pm::Plus, cutoffs, Some(Restriction::X1Only))?;
    let uni = uniform_dpsi(a, &psi)?;
    residuals.push((
        "dpsi: uniform vs kp".to_string(),
        DefectSummary::of(n, &series_entries(&uni.sub(&kp))),
    ));
    let reference = &get(Side::KpFlat).df;
    for side in [Side::LeePsi, Side::LeeTheta, Side::DualOracle] {
        residuals.push((
            format!("dF: {} vs kp-flat", side.name()),
            residual(n, &get(side).df, reference),
        ));
    }
    Ok(MainTheoremReport {
        legs,
        residuals,
        certified,
    })
}

/// As [`main_theorem_report`], failing with `VerificationFailed` (naming the
/// residual and its first nonzero monomial) unless every residual vanishes.
pub fn verify_main_theorem(
    group: &LoopGroupElement,
    a: &LoopAlgebraElement,
    cutoffs: &Cutoffs,
) -> Result<MainTheoremReport> {
    main_theorem_report(group, a, cutoffs)?.into_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Mat;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::new(p, d)
    }

    fn scalar(c: Scalar) -> Mat<Scalar> {
        Mat::from_rows(vec![vec![c]]).unwrap()
    }

    #[test]
    fn s3_at_identity() {
        let s = LoopAlgebraElement::monomial(LoopSign::Minus, 3, scalar(q(1, 1))).unwrap();
        let r = verify_main_theorem(&LoopGroupElement::identity(1), &s, &Cutoffs::new(20, 4, 4, 4, 4)).unwrap();
        for leg in &r.legs {
            assert_eq!(leg.df, TruncPoly::constant(1, leg.df.trust(), q(-1, 2)), "{}", leg.side);
        }
    }

    #[test]
    fn r1_at_identity_vanishes() {
        let a = LoopAlgebraElement::monomial(LoopSign::Plus, 1, scalar(q(1, 1))).unwrap();
        let r = verify_main_theorem(&LoopGroupElement::identity(1), &a, &Cutoffs::new(20, 4, 4, 4, 4)).unwrap();
        for leg in &r.legs {
            assert!(leg.df.is_zero(), "{}", leg.side);
        }
    }

    #[test]
    fn two_colors_s_base_r_direction() {
        let sym = Mat::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(1, 3), q(-1, 1)]]).unwrap();
        let anti = Mat::from_rows(vec![vec![q(0, 1), q(1, 1)], vec![q(-1, 1), q(0, 1)]]).unwrap();
        let g = LoopGroupElement::exp(LoopAlgebraElement::monomial(LoopSign::Minus, 1, sym.clone()).unwrap()).unwrap();
        for a in [
            LoopAlgebraElement::monomial(LoopSign::Plus, 2, anti.clone()).unwrap(),
            LoopAlgebraElement::new(LoopSign::Minus, 2, vec![(1, sym.clone()), (2, anti.clone()), (3, sym.clone())])
                .unwrap(),
        ] {
            let r = main_theorem_report(&g, &a, &Cutoffs::new(24, 3, 5, 3, 5)).unwrap();
            assert!(r.passed(), "{}", r.to_json());
        }
    }

    #[test]
    fn failing_residual_becomes_error() {
        let report = MainTheoremReport {
            legs: Vec::new(),
            residuals: vec![(
                "x".into(),
                DefectSummary {
                    max_monomials_checked: 1,
                    all_zero: false,
                    first_nonzero: Some("x[1,1]".into()),
                },
            )],
            certified: true,
        };
        match report.into_result() {
            Err(Error::VerificationFailed { check, monomial }) => {
                assert_eq!((check.as_str(), monomial.as_str()), ("x", "x[1,1]"));
            }
            other => panic!("{other:?}"),
        }
    }
}
