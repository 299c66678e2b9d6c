//! Tau-function components and the wave matrices `Ψ^±`, `Φ^±` of a loop group
//! element.
//!
//! `Ψ^±_{ik}(A,x)_ℓ = ⟨0|Γ_+(x) Q_i^{∓1} A ψ^{±(k)}_{−ℓ−1/2}|0⟩ / τ_0(x)` with
//! `τ_0 = ⟨0|Γ_+(x) A|0⟩`. The bra `⟨0|Q_i^{∓1}` is realized as the pairing
//! with the state `Q_i^{±1}|0⟩`, since `Q_i` is a signed permutation of the basis.

use rayon::prelude::*;

use crate::cutoffs::Cutoffs;
use crate::error::{Error, Result};
use crate::fock::{
    apply_group_word, charged_vacuum, psi_state, q_state, FockState, FockVector, Pm, VacuumPairing,
};
use crate::givental::element::{LoopAlgebraElement, LoopGroupElement};
use crate::ring::{Mat, MatrixSeries, PolyMatrix, Restriction, Ring, Scalar, TruncPoly};

/// One component `τ_α(x)` of the tau function.
#[derive(Clone, Debug, PartialEq)]
pub struct TauComponent<R: Ring> {
    pub charge: Vec<i32>,
    pub value: TruncPoly<R>,
    pub certified: bool,
}

impl<R: Ring> TauComponent<R> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "charge": self.charge,
            "certified": self.certified,
            "value": self.value.to_json(),
        })
    }
}

/// `A·(1+εb)|0⟩` and the same applied to a fermion on the vacuum.
fn group_on<R: Ring>(
    group: &LoopGroupElement,
    eps: Option<&LoopAlgebraElement>,
    start: (bool, FockState),
    required: i32,
    cutoffs: &Cutoffs,
) -> Result<(FockVector<R>, bool)> {
    let (neg, st) = start;
    let one = if neg { -R::one() } else { R::one() };
    let v = FockVector::basis(st, one);
    let out = apply_group_word(group, eps, &v, required, cutoffs.energy2)?;
    Ok((out.vector, out.certified))
}

/// `τ_α(x) = ⟨0|Q_n^{−k_n}⋯Q_1^{−k_1} Γ_+(x) A (1+εb)|0⟩` up to weight `W`,
/// optionally with the times outside `restriction` set to zero.
pub fn tau_with<R: Ring>(
    group: &LoopGroupElement,
    eps: Option<&LoopAlgebraElement>,
    charge: &[i32],
    cutoffs: &Cutoffs,
    restriction: Option<Restriction>,
) -> Result<TauComponent<R>> {
    let n = group.n();
    if charge.len() != n {
        return Err(Error::Structural(format!("charge vector of length {} for n = {n}", charge.len())));
    }
    let w = cutoffs.xweight;
    if charge.iter().sum::<i32>() != 0 {
        return Ok(TauComponent {
            charge: charge.to_vec(),
            value: TruncPoly::zero(n, w),
            certified: true,
        });
    }
    let (neg, target) = charged_vacuum(charge);
    let pairing = VacuumPairing::restricted(target, neg, w, restriction);
    let (v, certified) = group_on::<R>(group, eps, (false, FockState::vacuum(n)), pairing.required_cut(), cutoffs)?;
    Ok(TauComponent {
        charge: charge.to_vec(),
        value: pairing.pair(&v)?,
        certified,
    })
}

pub fn tau(group: &LoopGroupElement, charge: &[i32], cutoffs: &Cutoffs) -> Result<TauComponent<Scalar>> {
    tau_with(group, None, charge, cutoffs, None)
}

/// A wave matrix `Ψ^±` with its provenance cutoffs.
#[derive(Clone, Debug)]
pub struct WaveMatrix<R: Ring> {
    pub sign: Pm,
    pub psi: MatrixSeries<R>,
    pub cutoffs: Cutoffs,
    /// Times set to zero during the computation, if any.
    pub restriction: Option<Restriction>,
    /// False when some Fock coefficient could only be computed at the cut.
    pub certified: bool,
}

impl<R: Ring> WaveMatrix<R> {
    pub fn n(&self) -> usize {
        self.psi.n()
    }

    pub fn coeff(&self, l: usize) -> &PolyMatrix<R> {
        self.psi.coeff(l)
    }

    /// Sets the times outside `r` to zero. `X1Only` is stronger than `OddOnly`.
    pub fn restrict(&self, r: Restriction) -> Self {
        let r = match (self.restriction, r) {
            (Some(Restriction::X1Only), _) => Restriction::X1Only,
            (_, r) => r,
        };
        WaveMatrix {
            psi: self.psi.restrict(r),
            restriction: Some(r),
            ..self.clone()
        }
    }

    /// JSON report: entries keyed `psi[i][k].z^l` plus the cutoffs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "sign": if self.sign == Pm::Plus { "+" } else { "-" },
            "cutoffs": self.cutoffs,
            "restriction": match self.restriction {
                None => "none",
                Some(Restriction::OddOnly) => "odd",
                Some(Restriction::X1Only) => "x1",
            },
            "certified": self.certified,
            "entries": self.psi.to_json_keyed("psi"),
        })
    }
}

fn pm_targets(n: usize, sign: Pm) -> Vec<(bool, FockState)> {
    (1..=n)
        .map(|i| q_state(i, sign == Pm::Minus, &FockState::vacuum(n)))
        .collect()
}

/// `Ψ^±(A·(1+εb), x, z)` up to `z^Z` and weight `W`, optionally computed
/// directly in a restricted set of times.
pub fn wave_psi_with<R: Ring>(
    group: &LoopGroupElement,
    eps: Option<&LoopAlgebraElement>,
    sign: Pm,
    cutoffs: &Cutoffs,
    restriction: Option<Restriction>,
) -> Result<WaveMatrix<R>> {
    let n = group.n();
    let w = cutoffs.xweight;
    let z = cutoffs.zorder;
    let tau0 = tau_with::<R>(group, eps, &vec![0; n], cutoffs, restriction)?;
    // A deformed element A·exp(εa) need not be triangular; its τ₀ starts at 1 + O(ε).
    let inv = match eps {
        None => tau0.value.invert()?,
        Some(_) => tau0.value.invert_unit()?,
    };
    let pairings: Vec<VacuumPairing> = pm_targets(n, sign)
        .into_iter()
        .map(|(neg, st)| VacuumPairing::restricted(st, neg, w, restriction))
        .collect();
    let required = pairings[0].required_cut();
    let jobs: Vec<(usize, usize)> = (0..n).flat_map(|k| (0..=z).map(move |l| (k, l))).collect();
    let columns: Vec<(usize, usize, Vec<TruncPoly<R>>, bool)> = jobs
        .par_iter()
        .map(|&(k, l)| {
            let vac = FockState::vacuum(n);
            let start = psi_state(sign, k + 1, -(2 * l as i32 + 1), &vac).expect("fermion creates on vacuum");
            let (u, cert) = group_on::<R>(group, eps, start, required, cutoffs)?;
            let col = pairings
                .iter()
                .map(|p| Ok(p.pair(&u)?.mul(&inv)))
                .collect::<Result<Vec<_>>>()?;
            Ok((k, l, col, cert))
        })
        .collect::<Result<_>>()?;
    let mut coeffs = vec![PolyMatrix::zeros(n, n, w); z + 1];
    let mut certified = tau0.certified;
    for (k, l, col, cert) in columns {
        certified &= cert;
        for (i, p) in col.into_iter().enumerate() {
            coeffs[l].set(i, k, p);
        }
    }
    Ok(WaveMatrix {
        sign,
        psi: MatrixSeries::new(coeffs)?,
        cutoffs: *cutoffs,
        restriction,
        certified,
    })
}

pub fn wave_psi(group: &LoopGroupElement, sign: Pm, cutoffs: &Cutoffs) -> Result<WaveMatrix<Scalar>> {
    wave_psi_with(group, None, sign, cutoffs, None)
}

/// Laurent coefficients `Φ^±_p` for `p = pmin..=pmax`.
#[derive(Clone, Debug)]
pub struct LaurentMatrix {
    pub pmin: i32,
    pub coeffs: Vec<PolyMatrix<Scalar>>,
}

impl LaurentMatrix {
    pub fn coeff(&self, p: i32) -> Option<&PolyMatrix<Scalar>> {
        if p < self.pmin {
            return None;
        }
        self.coeffs.get((p - self.pmin) as usize)
    }
}

/// `Φ^±_{ik}(A,x)_p = ⟨0|Γ_+(x) Q_i^{∓1} ψ^{±(k)}_{−p−1/2} A|0⟩ / τ_0` for
/// `−pneg <= p <= pmax`.
pub fn wave_phi(
    group: &LoopGroupElement,
    sign: Pm,
    cutoffs: &Cutoffs,
    pneg: usize,
    pmax: usize,
) -> Result<LaurentMatrix> {
    let n = group.n();
    let w = cutoffs.xweight;
    let tau0 = tau(group, &vec![0; n], cutoffs)?;
    let inv = tau0.value.invert()?;
    let pairings: Vec<VacuumPairing> = pm_targets(n, sign)
        .into_iter()
        .map(|(neg, st)| VacuumPairing::new(st, neg, w))
        .collect();
    // ψ_{-p-1/2} shifts energy by p + 1/2, so negative p needs a deeper A|0⟩.
    let required = pairings[0].required_cut() + 2 * pneg as i32;
    let (tv, _) = group_on::<Scalar>(group, None, (false, FockState::vacuum(n)), required, cutoffs)?;
    let mut coeffs = Vec::new();
    for p in -(pneg as i32)..=(pmax as i32) {
        let mut m = PolyMatrix::zeros(n, n, w);
        for k in 0..n {
            let mut u = tv.apply_signed(|s| psi_state(sign, k + 1, -(2 * p + 1), s));
            let cut = tv.energy_cut().map(|c| c + 2 * p + 1);
            u.limit_trust(cut);
            for (i, pr) in pairings.iter().enumerate() {
                m.set(i, k, pr.pair(&u)?.mul(&inv));
            }
        }
        coeffs.push(m);
    }
    Ok(LaurentMatrix {
        pmin: -(pneg as i32),
        coeffs,
    })
}

/// `Ψ(z)Ψ(−z)ᵗ − Id` after setting the even times to zero.
pub fn orthogonality_defect<R: Ring>(psi: &WaveMatrix<R>) -> MatrixSeries<R> {
    let p = psi.psi.restrict(Restriction::OddOnly);
    let prod = p.mul(&p.negate_z_transpose());
    let id = MatrixSeries::identity(p.n(), p.ncolors(), p.weight(), p.order());
    prod.sub(&id)
}

/// Constant matrix `Ψ(A, 0)_0`.
pub fn psi_at_origin<R: Ring>(psi: &WaveMatrix<R>) -> Mat<R> {
    psi.psi.coeff(0).at_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::givental::element::LoopSign;
    use crate::ring::{Monomial, Var};

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::new(p, d)
    }

    fn exp_diag(n: usize, w: u32, z: usize, negate: bool) -> MatrixSeries<Scalar> {
        // diag_k exp(±Σ_m x^{(k)}_m z^m)
        let mut coeffs = vec![PolyMatrix::zeros(n, n, w); z + 1];
        for k in 0..n {
            let mut lin = vec![TruncPoly::zero(n, w); z + 1];
            for (m, l) in lin.iter_mut().enumerate().skip(1) {
                *l = TruncPoly::var(n, w, Var::new(k + 1, m));
                if negate {
                    *l = l.neg();
                }
            }
            // exp of a z-series with zero constant term
            let mut series = vec![TruncPoly::zero(n, w); z + 1];
            series[0] = TruncPoly::one(n, w);
            let mut power = series.clone();
            for p in 1..=z {
                let mut next = vec![TruncPoly::zero(n, w); z + 1];
                for a in 0..=z {
                    for b in 1..=(z - a) {
                        next[a + b].add_assign(&power[a].mul(&lin[b]));
                    }
                }
                power = next.into_iter().map(|t| t.scale_scalar(&q(1, p as i64))).collect();
                for (s, t) in series.iter_mut().zip(&power) {
                    s.add_assign(t);
                }
            }
            for (l, s) in series.into_iter().enumerate() {
                coeffs[l].set(k, k, s);
            }
        }
        MatrixSeries::new(coeffs).unwrap()
    }

    #[test]
    fn identity_tau_components() {
        let id = LoopGroupElement::identity(2);
        let c = Cutoffs::from_wz(3, 3);
        assert_eq!(tau(&id, &[0, 0], &c).unwrap().value, TruncPoly::one(2, 3));
        assert!(tau(&id, &[1, -1], &c).unwrap().value.is_zero());
    }

    #[test]
    fn identity_wave_functions() {
        let c = Cutoffs::from_wz(3, 3);
        for n in 1..=2 {
            let id = LoopGroupElement::identity(n);
            let plus = wave_psi(&id, Pm::Plus, &c).unwrap();
            assert_eq!(plus.psi, exp_diag(n, 3, 3, false));
            let minus = wave_psi(&id, Pm::Minus, &c).unwrap();
            assert_eq!(minus.psi, exp_diag(n, 3, 3, true));
            assert!(orthogonality_defect(&plus).is_zero());
        }
    }

    #[test]
    fn lowering_tau_has_unit_constant() {
        let a = LoopAlgebraElement::monomial(LoopSign::Minus, 1, Mat::from_rows(vec![vec![q(2, 3)]]).unwrap())
            .unwrap();
        let g = LoopGroupElement::exp(a).unwrap();
        let t = tau(&g, &[0], &Cutoffs::new(12, 4, 4, 4, 4)).unwrap();
        assert_eq!(t.value.constant_term(), Scalar::one());
        assert_eq!(t.value.coeff(&Monomial::one()), Scalar::one());
    }

    #[test]
    fn non_twisted_orthogonality_fails() {
        let m = Mat::from_rows(vec![vec![q(0, 1), q(1, 1)], vec![q(0, 1), q(0, 1)]]).unwrap();
        let a = LoopAlgebraElement::new_unchecked(LoopSign::Minus, 2, vec![(1, m)]).unwrap();
        let g = LoopGroupElement::new_unchecked(2, vec![a]).unwrap();
        let psi = wave_psi(&g, Pm::Plus, &Cutoffs::from_wz(3, 3)).unwrap();
        assert!(!orthogonality_defect(&psi).is_zero());
    }
}
