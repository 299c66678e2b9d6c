//! Independent derivative oracle: rerun the whole Fock pipeline for
//! `A·(1 + εa)` over dual numbers (`ε² = 0`) and read off the ε-parts.

use crate::cutoffs::Cutoffs;
use crate::error::Result;
use crate::fock::Pm;
use crate::frobenius::theta_series;
use crate::givental::element::{LoopAlgebraElement, LoopGroupElement};
use crate::kptau::{wave_psi_with, WaveMatrix};
use crate::ring::{DualScalar, MatrixSeries, Restriction, Ring, Scalar, TruncPoly};

/// Value and ε-parts of `Ψ(A·exp(εa))` and the frozen-coordinate `∂F/∂ε`.
#[derive(Clone, Debug)]
pub struct DualDerivative {
    /// `Ψ(A)`, the value part.
    pub value: WaveMatrix<Scalar>,
    /// `∂Ψ/∂ε` at `ε = 0`.
    pub dpsi: MatrixSeries<Scalar>,
    /// `Ḟ − Σ_i θ^{(2)}_i ṫ^i`, the derivative of `F` at fixed flat coordinates.
    pub df: TruncPoly<Scalar>,
}

fn part(p: &TruncPoly<DualScalar>, eps: bool) -> TruncPoly<Scalar> {
    p.map_coeffs(|c| if eps { c.eps_part().clone() } else { c.value_part().clone() })
}

/// Computes `Ψ(A(1+εa))` in `x₁` over dual numbers and splits it.
///
/// The frozen derivative uses `F = ½Σ_i(θ^{(1)}_iθ^{(2)}_i − θ^{(3)}_i)` over
/// dual numbers and subtracts the drift of the flat coordinates,
/// `∂F/∂ε = ε(F) − Σ_i θ^{(2)}_i ε(θ^{(1)}_i)`.
pub fn dual_derivative(
    group: &LoopGroupElement,
    a: &LoopAlgebraElement,
    cutoffs: &Cutoffs,
) -> Result<DualDerivative> {
    a.check_twisted()?;
    let wave = wave_psi_with::<DualScalar>(group, Some(a), Pm::Plus, cutoffs, Some(Restriction::X1Only))?;
    let value = WaveMatrix {
        sign: wave.sign,
        psi: wave.psi.map_entries(|p| part(p, false)),
        cutoffs: wave.cutoffs,
        restriction: wave.restriction,
        certified: wave.certified,
    };
    let dpsi = wave.psi.map_entries(|p| part(p, true));
    let theta = theta_series(&wave, 3)?;
    let n = group.n();
    let w = wave.psi.weight();
    let mut f = TruncPoly::<DualScalar>::zero(n, w);
    for i in 0..n {
        f.add_assign(&theta.theta[1][i].mul(&theta.theta[2][i]));
        f = f.sub(&theta.theta[3][i]);
    }
    let f = f.scale(&DualScalar::from_scalar(&Scalar::new(1, 2)));
    let mut df = part(&f, true);
    for i in 0..n {
        let drift = part(&theta.theta[2][i], false).mul(&part(&theta.theta[1][i], true));
        df = df.sub(&drift);
    }
    Ok(DualDerivative { value, dpsi, df })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::givental::element::LoopSign;
    use crate::givental::kp::kp_dpsi;
    use crate::kptau::wave_psi_with;
    use crate::ring::Mat;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::new(p, d)
    }

    #[test]
    fn zero_direction_gives_zero() {
        let g = LoopGroupElement::identity(2);
        let a = LoopAlgebraElement::zero(LoopSign::Plus, 2);
        let d = dual_derivative(&g, &a, &Cutoffs::new(16, 3, 4, 3, 4)).unwrap();
        assert!(d.dpsi.is_zero());
        assert!(d.df.is_zero());
    }

    #[test]
    fn value_part_is_the_base_wave_matrix() {
        let s = Mat::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(1, 3), q(-1, 1)]]).unwrap();
        let g = LoopGroupElement::exp(LoopAlgebraElement::monomial(LoopSign::Minus, 1, s.clone()).unwrap()).unwrap();
        let a = LoopAlgebraElement::monomial(LoopSign::Plus, 1, s).unwrap();
        let c = Cutoffs::new(20, 3, 4, 3, 4);
        let d = dual_derivative(&g, &a, &c).unwrap();
        let base = wave_psi_with::<Scalar>(&g, None, Pm::Plus, &c, Some(Restriction::X1Only)).unwrap();
        assert_eq!(d.value.psi, base.psi);
        let kp = kp_dpsi(&a, &base).unwrap();
        assert_eq!(d.dpsi.truncated(kp.order(), kp.weight()), kp);
    }
}
