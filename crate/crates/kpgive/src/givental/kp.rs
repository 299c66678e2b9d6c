//! First-order flows of the wave matrix `Ψ = Ψ^+` under `A ↦ A·exp(εa)`, and
//! the ε-derivative of the potential with flat coordinates frozen.

use crate::error::{Error, Result};
use crate::givental::element::{LoopAlgebraElement, LoopSign};
use crate::kptau::WaveMatrix;
use crate::ring::{Mat, MatrixSeries, PolyMatrix, Restriction, Ring, Scalar, TruncPoly};

fn lift<R: Ring>(m: &Mat<Scalar>) -> Mat<R> {
    m.lift(R::from_scalar)
}

fn zeros<R: Ring>(psi: &MatrixSeries<R>) -> PolyMatrix<R> {
    PolyMatrix::zeros(psi.n(), psi.ncolors(), psi.weight())
}

/// z-order through which the flow of `a` is exact, given `Ψ` through `z^Z`.
fn flow_order<R: Ring>(a: &LoopAlgebraElement, psi: &MatrixSeries<R>) -> Result<usize> {
    let lift = match a.sign() {
        LoopSign::Minus => 0,
        LoopSign::Plus => a.max_level() as usize,
    };
    psi.order().checked_sub(lift).ok_or_else(|| {
        Error::TrustExceeded(format!(
            "flow of level {lift} needs Ψ beyond z^{}",
            psi.order()
        ))
    })
}

fn check_regime<R: Ring>(a: &LoopAlgebraElement, psi: &WaveMatrix<R>) -> Result<()> {
    a.check_twisted()?;
    if a.n() != psi.n() {
        return Err(Error::Structural(format!(
            "algebra element of size {} against Ψ of size {}",
            a.n(),
            psi.n()
        )));
    }
    if a.sign() == LoopSign::Plus && psi.restriction.is_none() {
        return Err(Error::Precondition(
            "the r-flow formula holds after setting the even times to zero".into(),
        ));
    }
    Ok(())
}

/// `a.Ψ_k` for `k = 0..=Z−ℓ_max`:
/// `s.Ψ_k = Σ_{i<k} Ψ_i s_{k−i}` and, summed over levels,
/// `(rζ^ℓ).Ψ_k = Ψ_{ℓ+k}r − Σ_{p=1}^{ℓ}Σ_{q=0}^{ℓ−p}(−1)^{ℓ−p−q}Ψ_q rΨ_{ℓ−p−q}ᵗΨ_{p+k}`.
pub fn kp_dpsi<R: Ring>(a: &LoopAlgebraElement, psi: &WaveMatrix<R>) -> Result<MatrixSeries<R>> {
    check_regime(a, psi)?;
    let p = &psi.psi;
    let order = flow_order(a, p)?;
    let mut out = vec![zeros(p); order + 1];
    match a.sign() {
        LoopSign::Minus => {
            for (k, o) in out.iter_mut().enumerate() {
                for (l, sl) in a.levels() {
                    let l = l as usize;
                    if l <= k {
                        o.add_assign(&p.coeff(k - l).mul_const(&lift(sl)));
                    }
                }
            }
        }
        LoopSign::Plus => {
            for (l, rl) in a.levels() {
                let l = l as usize;
                let r = lift::<R>(rl);
                // C_p = Σ_q (−1)^{ℓ−p−q} Ψ_q r Ψ_{ℓ−p−q}ᵗ, independent of k.
                let cs: Vec<PolyMatrix<R>> = (1..=l)
                    .map(|pp| {
                        let mut c = zeros(p);
                        for q in 0..=l - pp {
                            let j = l - pp - q;
                            let term = p.coeff(q).mul_const(&r).mul(&p.coeff(j).transpose());
                            if j % 2 == 0 {
                                c.add_assign(&term);
                            } else {
                                c = c.sub(&term);
                            }
                        }
                        c
                    })
                    .collect();
                for (k, o) in out.iter_mut().enumerate() {
                    o.add_assign(&p.coeff(l + k).mul_const(&r));
                    for (i, c) in cs.iter().enumerate() {
                        *o = o.sub(&c.mul(p.coeff(i + 1 + k)));
                    }
                }
            }
        }
    }
    MatrixSeries::new(out)
}

/// The same flow from the single formula
/// `Ψ̇ = Ψg(z^{−1}) − (Ψg(z^{−1})Ψ(−z)ᵗ)_−Ψ`, with Laurent products in `z`.
pub fn uniform_dpsi<R: Ring>(a: &LoopAlgebraElement, psi: &WaveMatrix<R>) -> Result<MatrixSeries<R>> {
    check_regime(a, psi)?;
    let p = &psi.psi;
    let order = flow_order(a, p)?;
    let zmax = p.order() as i64;
    // g(z^{−1}) = Σ g_e z^e.
    let g: Vec<(i64, Mat<R>)> = a
        .levels()
        .map(|(l, m)| {
            let e = match a.sign() {
                LoopSign::Minus => l as i64,
                LoopSign::Plus => -(l as i64),
            };
            (e, lift(m))
        })
        .collect();
    let psi_at = |i: i64| -> Option<&PolyMatrix<R>> {
        (0..=zmax).contains(&i).then(|| p.coeff(i as usize))
    };
    // (Ψg)_m for any m (entries below z^0 included).
    let psi_g = |m: i64| -> PolyMatrix<R> {
        let mut acc = zeros(p);
        for (e, ge) in &g {
            if let Some(c) = psi_at(m - e) {
                acc.add_assign(&c.mul_const(ge));
            }
        }
        acc
    };
    // Negative part of M = ΨgΨ(−z)ᵗ: M_{−q} = Σ_j (Ψg)_{−q−j}(−1)^jΨ_jᵗ.
    let depth = g.iter().map(|(e, _)| (-e).max(0)).max().unwrap_or(0);
    let lowest = g.iter().map(|(e, _)| *e).min().unwrap_or(0);
    let m_neg: Vec<PolyMatrix<R>> = (1..=depth)
        .map(|q| {
            let mut acc = zeros(p);
            let mut j = 0i64;
            while -q - j >= lowest {
                if let Some(pj) = psi_at(j) {
                    let term = psi_g(-q - j).mul(&pj.transpose());
                    if j % 2 == 0 {
                        acc.add_assign(&term);
                    } else {
                        acc = acc.sub(&term);
                    }
                }
                j += 1;
            }
            acc
        })
        .collect();
    let out: Vec<PolyMatrix<R>> = (0..=order as i64)
        .map(|k| {
            let mut acc = psi_g(k);
            for (qi, mq) in m_neg.iter().enumerate() {
                let q = qi as i64 + 1;
                if let Some(c) = psi_at(k + q) {
                    acc = acc.sub(&mq.mul(c));
                }
            }
            acc
        })
        .collect();
    MatrixSeries::new(out)
}

/// `∂F/∂ε = ½[Ψ_0ᵗ(−Ψ̇_3Ψ_0ᵗ + Ψ̇_2Ψ_1ᵗ − Ψ̇_1Ψ_2ᵗ + Ψ̇_0Ψ_3ᵗ)Ψ_0]` in `x₁`.
pub fn flat_derivative<R: Ring>(psi: &WaveMatrix<R>, dpsi: &MatrixSeries<R>) -> Result<TruncPoly<R>> {
    if psi.psi.order() < 3 || dpsi.order() < 3 {
        return Err(Error::TrustExceeded(format!(
            "needs Ψ and Ψ̇ through z^3, have z^{} and z^{}",
            psi.psi.order(),
            dpsi.order()
        )));
    }
    let p = psi.psi.restrict(Restriction::X1Only);
    let d = dpsi.restrict(Restriction::X1Only);
    let mut inner = zeros(&p);
    for (sign, i) in [(-1i64, 3usize), (1, 2), (-1, 1), (1, 0)] {
        let term = d.coeff(i).mul(&p.coeff(3 - i).transpose());
        inner.add_assign(&term.scale(&R::from_i64(sign)));
    }
    Ok(p
        .coeff(0)
        .transpose()
        .mul(&inner)
        .mul(p.coeff(0))
        .entry_sum()
        .scale_scalar(&Scalar::new(1, 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutoffs::Cutoffs;
    use crate::fock::Pm;
    use crate::givental::element::LoopGroupElement;
    use crate::kptau::wave_psi_with;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::new(p, d)
    }

    fn psi_of(g: &LoopGroupElement, w: u32, z: usize) -> WaveMatrix<Scalar> {
        let c = Cutoffs::new(2 * (w as i32 + z as i32 + 1) + 8, w, z, w, z);
        wave_psi_with(g, None, Pm::Plus, &c, Some(Restriction::X1Only)).unwrap()
    }

    fn sym() -> Mat<Scalar> {
        Mat::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(1, 3), q(-1, 1)]]).unwrap()
    }

    fn anti() -> Mat<Scalar> {
        Mat::from_rows(vec![vec![q(0, 1), q(2, 1)], vec![q(-2, 1), q(0, 1)]]).unwrap()
    }

    #[test]
    fn s_flow_low_orders() {
        let psi = psi_of(&LoopGroupElement::identity(2), 3, 3);
        let s = LoopAlgebraElement::monomial(LoopSign::Minus, 1, sym()).unwrap();
        let d = kp_dpsi(&s, &psi).unwrap();
        assert!(d.coeff(0).is_zero());
        assert_eq!(d.coeff(1), &psi.coeff(0).mul_const(&sym()));
    }

    #[test]
    fn r_flow_at_identity_is_a_commutator() {
        // (rζ).Ψ_0 = diag(x₁) r − r diag(x₁) at A = Id.
        let psi = psi_of(&LoopGroupElement::identity(2), 3, 3);
        let r = LoopAlgebraElement::monomial(LoopSign::Plus, 1, sym()).unwrap();
        let d = kp_dpsi(&r, &psi).unwrap();
        let x = psi.coeff(1);
        let expect = x.mul_const(&sym()).sub(&PolyMatrix::from_const(&sym(), 2, 3).mul(x));
        assert_eq!(d.coeff(0), &expect);
    }

    #[test]
    fn uniform_formula_agrees() {
        let base = LoopGroupElement::exp(LoopAlgebraElement::monomial(LoopSign::Minus, 2, anti()).unwrap()).unwrap();
        let psi = psi_of(&base, 3, 5);
        for a in [
            LoopAlgebraElement::new(LoopSign::Minus, 2, vec![(1, sym()), (2, anti())]).unwrap(),
            LoopAlgebraElement::new(LoopSign::Plus, 2, vec![(1, sym()), (2, anti())]).unwrap(),
        ] {
            assert_eq!(kp_dpsi(&a, &psi).unwrap(), uniform_dpsi(&a, &psi).unwrap());
        }
    }

    #[test]
    fn r_flow_needs_restricted_times() {
        let c = Cutoffs::from_wz(2, 3);
        let psi = wave_psi_with::<Scalar>(&LoopGroupElement::identity(2), None, Pm::Plus, &c, None).unwrap();
        let r = LoopAlgebraElement::monomial(LoopSign::Plus, 1, sym()).unwrap();
        assert!(matches!(kp_dpsi(&r, &psi), Err(Error::Precondition(_))));
    }

    #[test]
    fn zero_flow_has_zero_derivative() {
        let psi = psi_of(&LoopGroupElement::identity(2), 3, 4);
        let z = MatrixSeries::zeros(2, 2, 3, 4);
        assert!(flat_derivative(&psi, &z).unwrap().is_zero());
    }
}
