//! Genus-zero, no-descendant shadows of the Lee vector fields: `s.F` and
//! `r.F` in terms of θ-vectors, and the same quantities written with `Ψ_k`.

use crate::error::{Error, Result};
use crate::givental::element::{LoopAlgebraElement, LoopSign};
use crate::ring::{Mat, MatrixSeries, PolyMatrix, Ring, Scalar, TruncPoly};

/// `u M vᵗ` for row vectors of polynomials.
fn pair<R: Ring>(u: &[TruncPoly<R>], m: &Mat<Scalar>, v: &[TruncPoly<R>]) -> TruncPoly<R> {
    let n = u.len();
    let mut out = TruncPoly::zero(u[0].ncolors(), u[0].trust().min(v[0].trust()));
    for i in 0..n {
        for j in 0..n {
            let c = m.get(i, j);
            if !c.is_zero() {
                out.add_assign(&u[i].mul(&v[j]).scale_scalar(c));
            }
        }
    }
    out
}

fn need_depth<R: Ring>(theta: &[Vec<TruncPoly<R>>], d: usize) -> Result<()> {
    if theta.len() <= d {
        return Err(Error::TrustExceeded(format!(
            "needs θ^({d}), have depth {}",
            theta.len().saturating_sub(1)
        )));
    }
    Ok(())
}

fn expect_sign(a: &LoopAlgebraElement, sign: LoopSign) -> Result<()> {
    a.check_twisted()?;
    if a.sign() != sign {
        return Err(Error::Precondition(format!(
            "expected a {}-type element",
            sign.symbol()
        )));
    }
    Ok(())
}

/// Levels of `s` beyond 3, which do not enter `s.F`.
pub fn ignored_levels(s: &LoopAlgebraElement) -> Vec<u32> {
    if s.sign() != LoopSign::Minus {
        return Vec::new();
    }
    s.levels().map(|(l, _)| l).filter(|&l| l > 3).collect()
}

/// `s.F = −½θ⁰s₃θ⁰ᵗ + θ⁰s₂θ¹ᵗ − θ⁰s₁θ²ᵗ + ½θ¹s₁θ¹ᵗ`; `theta[d]` is the
/// vector `θ^{(d)}`.
pub fn lee_s_f<R: Ring>(s: &LoopAlgebraElement, theta: &[Vec<TruncPoly<R>>]) -> Result<TruncPoly<R>> {
    expect_sign(s, LoopSign::Minus)?;
    need_depth(theta, 2)?;
    let half = Scalar::new(1, 2);
    let (s1, s2, s3) = (s.level(1), s.level(2), s.level(3));
    let mut out = pair(&theta[0], &s3, &theta[0]).scale_scalar(&-half.clone());
    out.add_assign(&pair(&theta[0], &s2, &theta[1]));
    out = out.sub(&pair(&theta[0], &s1, &theta[2]));
    out.add_assign(&pair(&theta[1], &s1, &theta[1]).scale_scalar(&half));
    Ok(out)
}

/// `r.F = Σ_l (−θ^{l+3}r_lθ⁰ᵗ + θ^{l+2}r_lθ¹ᵗ + ½Σ_{m+m'=l−1}(−1)^{m'+1}θ^{m+2}r_lθ^{m'+2}ᵗ)`.
pub fn lee_r_f<R: Ring>(r: &LoopAlgebraElement, theta: &[Vec<TruncPoly<R>>]) -> Result<TruncPoly<R>> {
    expect_sign(r, LoopSign::Plus)?;
    need_depth(theta, r.max_level() as usize + 3)?;
    let half = Scalar::new(1, 2);
    let mut out = TruncPoly::zero(theta[0][0].ncolors(), theta[0][0].trust());
    for (l, rl) in r.levels() {
        let l = l as usize;
        out = out.sub(&pair(&theta[l + 3], rl, &theta[0]));
        out.add_assign(&pair(&theta[l + 2], rl, &theta[1]));
        for m in 0..l {
            let mp = l - 1 - m;
            let sign = if mp % 2 == 1 { half.clone() } else { -half.clone() };
            out.add_assign(&pair(&theta[m + 2], rl, &theta[mp + 2]).scale_scalar(&sign));
        }
    }
    Ok(out)
}

/// Dispatches on the sign of `a`.
pub fn lee_f<R: Ring>(a: &LoopAlgebraElement, theta: &[Vec<TruncPoly<R>>]) -> Result<TruncPoly<R>> {
    match a.sign() {
        LoopSign::Minus => lee_s_f(a, theta),
        LoopSign::Plus => lee_r_f(a, theta),
    }
}

fn lift<R: Ring>(m: &Mat<Scalar>) -> Mat<R> {
    m.lift(R::from_scalar)
}

/// `Ψ_a M Ψ_bᵗ`.
fn sandwich<R: Ring>(psi: &MatrixSeries<R>, a: usize, m: &Mat<Scalar>, b: usize) -> PolyMatrix<R> {
    psi.coeff(a).mul_const(&lift(m)).mul(&psi.coeff(b).transpose())
}

/// `½[Ψ_0ᵗ M Ψ_0]` with `[·]` the sum of all entries.
fn bracket<R: Ring>(psi: &MatrixSeries<R>, m: &PolyMatrix<R>, c: Scalar) -> TruncPoly<R> {
    psi.coeff(0).transpose().mul(m).mul(psi.coeff(0)).entry_sum().scale_scalar(&c)
}

/// The Lee derivative written with `Ψ = Ψ^+` (in `x₁`):
/// `s.F = ½[Ψ_0ᵗ(−Ψ_2s_1Ψ_0ᵗ + Ψ_1s_1Ψ_1ᵗ − Ψ_0s_1Ψ_2ᵗ − Ψ_1s_2Ψ_0ᵗ + Ψ_0s_2Ψ_1ᵗ − Ψ_0s_3Ψ_0ᵗ)Ψ_0]`,
/// `(r_lζ^l).F = −½[Ψ_0ᵗ(Σ_{i=0}^{l+3}(−1)^iΨ_{l+3−i}r_lΨ_iᵗ)Ψ_0]`.
pub fn lee_df_psi<R: Ring>(a: &LoopAlgebraElement, psi: &MatrixSeries<R>) -> Result<TruncPoly<R>> {
    a.check_twisted()?;
    let top = match a.sign() {
        LoopSign::Minus => 2,
        LoopSign::Plus => a.max_level() as usize + 3,
    };
    if psi.order() < top {
        return Err(Error::TrustExceeded(format!(
            "needs Ψ up to z^{top}, have z^{}",
            psi.order()
        )));
    }
    let n = psi.n();
    let mut inner = PolyMatrix::zeros(n, psi.ncolors(), psi.weight());
    match a.sign() {
        LoopSign::Minus => {
            let (s1, s2, s3) = (a.level(1), a.level(2), a.level(3));
            let terms: [(i64, usize, &Mat<Scalar>, usize); 6] = [
                (-1, 2, &s1, 0),
                (1, 1, &s1, 1),
                (-1, 0, &s1, 2),
                (-1, 1, &s2, 0),
                (1, 0, &s2, 1),
                (-1, 0, &s3, 0),
            ];
            for (c, i, m, j) in terms {
                inner.add_assign(&sandwich(psi, i, m, j).scale(&R::from_i64(c)));
            }
            Ok(bracket(psi, &inner, Scalar::new(1, 2)))
        }
        LoopSign::Plus => {
            for (l, rl) in a.levels() {
                let top = l as usize + 3;
                for i in 0..=top {
                    let c = if i % 2 == 0 { 1 } else { -1 };
                    inner.add_assign(&sandwich(psi, top - i, rl, i).scale(&R::from_i64(c)));
                }
            }
            Ok(bracket(psi, &inner, Scalar::new(-1, 2)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Var;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::new(p, d)
    }

    /// `θ^{(d)}_i = (t^i)^d / d!`, the identity element's θ-vectors.
    fn trivial_theta(n: usize, trust: u32, depth: usize) -> Vec<Vec<TruncPoly<Scalar>>> {
        let mut fact = 1i64;
        (0..=depth)
            .map(|d| {
                if d > 0 {
                    fact *= d as i64;
                }
                (1..=n)
                    .map(|i| {
                        TruncPoly::var(n, trust, Var::new(i, 1))
                            .pow(d as u32)
                            .scale_scalar(&q(1, fact))
                    })
                    .collect()
            })
            .collect()
    }

    fn scalar(c: Scalar) -> Mat<Scalar> {
        Mat::from_rows(vec![vec![c]]).unwrap()
    }

    #[test]
    fn s_flow_on_trivial_structure() {
        let s = LoopAlgebraElement::new(
            LoopSign::Minus,
            1,
            vec![(1, scalar(q(2, 1))), (3, scalar(q(5, 1)))],
        )
        .unwrap();
        let f = lee_s_f(&s, &trivial_theta(1, 6, 3)).unwrap();
        assert_eq!(f, TruncPoly::constant(1, 6, q(-5, 2)));
    }

    #[test]
    fn r_flow_on_trivial_structure_vanishes() {
        let r = LoopAlgebraElement::monomial(LoopSign::Plus, 1, scalar(q(3, 1))).unwrap();
        assert!(lee_r_f(&r, &trivial_theta(1, 6, 4)).unwrap().is_zero());
    }

    #[test]
    fn antisymmetric_s2_is_linear() {
        let s2 = Mat::from_rows(vec![vec![q(0, 1), q(1, 1)], vec![q(-1, 1), q(0, 1)]]).unwrap();
        let s = LoopAlgebraElement::monomial(LoopSign::Minus, 2, s2).unwrap();
        let f = lee_s_f(&s, &trivial_theta(2, 4, 3)).unwrap();
        // (1,1) s₂ (t¹,t²)ᵗ = −t¹ + t²
        let t = |i| TruncPoly::var(2, 4, Var::new(i, 1));
        assert_eq!(f, t(2).sub(&t(1)));
    }

    #[test]
    fn depth_and_sign_are_checked() {
        let r = LoopAlgebraElement::monomial(LoopSign::Plus, 3, scalar(q(1, 1))).unwrap();
        assert!(matches!(lee_r_f(&r, &trivial_theta(1, 4, 4)), Err(Error::TrustExceeded(_))));
        assert!(matches!(lee_s_f(&r, &trivial_theta(1, 4, 4)), Err(Error::Precondition(_))));
    }

    #[test]
    fn psi_form_on_identity() {
        // Ψ(Id) restricted to x₁ is diag exp(x_i z).
        let n = 1;
        let th = trivial_theta(n, 6, 6);
        let coeffs: Vec<PolyMatrix<Scalar>> = th
            .iter()
            .map(|row| PolyMatrix::from_entries(1, vec![row[0].clone()]).unwrap())
            .collect();
        let psi = MatrixSeries::new(coeffs).unwrap();
        let s = LoopAlgebraElement::monomial(LoopSign::Minus, 3, scalar(q(4, 1))).unwrap();
        assert_eq!(lee_df_psi(&s, &psi).unwrap(), TruncPoly::constant(1, 6, q(-2, 1)));
        let r = LoopAlgebraElement::monomial(LoopSign::Plus, 1, scalar(q(1, 1))).unwrap();
        assert!(lee_df_psi(&r, &psi).unwrap().is_zero());
    }
}
