//! θ-vectors, flat coordinates and the genus-zero potential built from a wave
//! matrix, with WDVV, gradient and topological-recursion defects.
//!
//! Everything lives in the `x₁`-only regime: `x^{(i)}_k = 0` for `k >= 2`.
//! Polynomials in `x₁` and in the flat coordinates both use the weight-one
//! variables `Var(i, 1)`, so a degree-`d` monomial has weight `d`.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::kptau::WaveMatrix;
use crate::fock::Pm;
use crate::ring::{
    invert_coordinate_map, substitute_series, PolyMatrix, Restriction, Ring, TruncPoly, Var,
};

/// `θ^{(d)} = (1,…,1)Ψ_0ᵗΨ_d` for `d = 0..=D`, the flat map `t = θ^{(1)}` and
/// its Jacobian `∂t^i/∂x^{(j)}_1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaData<R: Ring> {
    pub n: usize,
    pub trust: u32,
    /// `theta[d][i]`, polynomials in `x₁`.
    pub theta: Vec<Vec<TruncPoly<R>>>,
    pub flat_map: Vec<TruncPoly<R>>,
    pub jacobian: PolyMatrix<R>,
}

impl<R: Ring> ThetaData<R> {
    pub fn depth(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (d, row) in self.theta.iter().enumerate() {
            for (i, p) in row.iter().enumerate() {
                m.insert(format!("theta[{d}][{}]", i + 1), p.to_json());
            }
        }
        for (i, p) in self.flat_map.iter().enumerate() {
            m.insert(format!("flat_map[{}]", i + 1), p.to_json());
        }
        m.insert("jacobian".into(), self.jacobian.to_json());
        Value::Object(m)
    }
}

/// Reads the θ-vectors off `Ψ^+`, restricting to `x₁` first.
///
/// Fails with `InconsistentInput` unless `θ^{(0)} = (1,…,1)`, which holds for
/// twisted elements (`Ψ_0ᵗΨ_0 = Id` on odd times).
pub fn theta_series<R: Ring>(psi: &WaveMatrix<R>, depth: usize) -> Result<ThetaData<R>> {
    if psi.sign != Pm::Plus {
        return Err(Error::Precondition("θ-vectors are read off Ψ⁺".into()));
    }
    if depth > psi.psi.order() {
        return Err(Error::TrustExceeded(format!(
            "θ depth {depth} needs Ψ up to z^{depth}, have z^{}",
            psi.psi.order()
        )));
    }
    let n = psi.n();
    let trust = psi.psi.weight();
    let p = psi.psi.restrict(Restriction::X1Only);
    let p0t = p.coeff(0).transpose();
    let theta: Vec<Vec<TruncPoly<R>>> = (0..=depth)
        .map(|d| p0t.mul(p.coeff(d)).column_sums())
        .collect();
    let one = TruncPoly::one(n, trust);
    if let Some(i) = theta[0].iter().position(|t| *t != one) {
        return Err(Error::InconsistentInput(format!(
            "theta[0][{}] = {} is not 1; the element is not twisted or the cutoffs are too small",
            i + 1,
            theta[0][i]
        )));
    }
    let flat_map = if depth >= 1 {
        theta[1].clone()
    } else {
        vec![TruncPoly::zero(n, trust); n]
    };
    let mut jacobian = PolyMatrix::zeros(n, n, trust.saturating_sub(1));
    for (i, t) in flat_map.iter().enumerate() {
        for j in 0..n {
            jacobian.set(i, j, t.derivative(Var::new(j + 1, 1)));
        }
    }
    Ok(ThetaData {
        n,
        trust,
        theta,
        flat_map,
        jacobian,
    })
}

/// The potential `F = ½ Σ_i (t^i θ^{(2)}_i − θ^{(3)}_i)` in `x₁` and in the
/// recentered flat coordinates `t̃ = t − t(0)`.
///
/// `theta_t` keeps the un-recentered values, so `theta_t[1][i] = t̃^i + t^i(0)`;
/// derivatives in `t̃` and `t` coincide.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusData<R: Ring> {
    pub n: usize,
    pub trust: u32,
    pub base_point: Vec<R>,
    pub f_x: TruncPoly<R>,
    pub f_t: TruncPoly<R>,
    pub theta_t: Vec<Vec<TruncPoly<R>>>,
    /// `x₁(t̃)`, the inverse flat map.
    pub x_of_t: Vec<TruncPoly<R>>,
}

impl<R: Ring> FrobeniusData<R> {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("trust".into(), json!(self.trust));
        m.insert(
            "base_point".into(),
            Value::Array(self.base_point.iter().map(Ring::to_json).collect()),
        );
        m.insert("F_x".into(), self.f_x.to_json());
        m.insert("F_t".into(), self.f_t.to_json());
        for (d, row) in self.theta_t.iter().enumerate() {
            for (i, p) in row.iter().enumerate() {
                m.insert(format!("theta_t[{d}][{}]", i + 1), p.to_json());
            }
        }
        for (i, p) in self.x_of_t.iter().enumerate() {
            m.insert(format!("x_of_t[{}]", i + 1), p.to_json());
        }
        Value::Object(m)
    }

    /// `∂F_t/∂t^{m}` for `m` in `1..=n`.
    pub fn d(&self, f: &TruncPoly<R>, m: usize) -> TruncPoly<R> {
        f.derivative(Var::new(m, 1))
    }

    /// Third derivatives `F_{klm}`, indexed `[k][l][m]` from zero.
    pub fn third_derivatives(&self) -> Vec<Vec<Vec<TruncPoly<R>>>> {
        let n = self.n;
        (1..=n)
            .map(|k| {
                let fk = self.d(&self.f_t, k);
                (1..=n)
                    .map(|l| {
                        let fkl = self.d(&fk, l);
                        (1..=n).map(|m| self.d(&fkl, m)).collect()
                    })
                    .collect()
            })
            .collect()
    }
}

/// `F_x`, then `F_t` and `θ(t̃)` by composing with the inverse flat map,
/// all truncated to degree `min(W, tdegree)`.
pub fn potential<R: Ring>(theta: &ThetaData<R>, tdegree: u32) -> Result<FrobeniusData<R>> {
    if theta.depth() < 3 {
        return Err(Error::Precondition(format!(
            "the potential needs θ up to depth 3, have {}",
            theta.depth()
        )));
    }
    let n = theta.n;
    let trust = theta.trust.min(tdegree);
    let half = R::from_scalar(&crate::ring::Scalar::new(1, 2));
    let mut f_x = TruncPoly::zero(n, trust);
    for i in 0..n {
        f_x.add_assign(&theta.theta[1][i].mul(&theta.theta[2][i]).truncated(trust));
        f_x = f_x.sub(&theta.theta[3][i].truncated(trust));
    }
    let f_x = f_x.scale(&half);
    let base_point: Vec<R> = theta.flat_map.iter().map(TruncPoly::constant_term).collect();
    let centered: Vec<TruncPoly<R>> = theta
        .flat_map
        .iter()
        .zip(&base_point)
        .map(|(t, c)| t.sub(&TruncPoly::constant(n, t.trust(), c.clone())))
        .collect();
    let x_of_t = invert_coordinate_map(&centered)?;
    let f_t = substitute_series(&f_x, &x_of_t, trust)?;
    let theta_t = theta
        .theta
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| substitute_series(p, &x_of_t, trust))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrobeniusData {
        n,
        trust,
        base_point,
        f_x,
        f_t,
        theta_t,
        x_of_t,
    })
}

/// Summary of a family of polynomials that should vanish within trust.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectSummary {
    /// Coefficient slots examined: components × monomials within trust.
    pub max_monomials_checked: usize,
    pub all_zero: bool,
    pub first_nonzero: Option<String>,
}

/// Number of monomials of degree `<= d` in `n` variables.
fn monomial_count(n: usize, d: u32) -> usize {
    // C(n + d, d)
    let mut c: u128 = 1;
    for k in 1..=d as u128 {
        c = c * (n as u128 + k) / k;
    }
    c as usize
}

impl DefectSummary {
    /// Summarizes polynomials in `n` weight-one variables.
    pub fn of<R: Ring>(n: usize, polys: &[TruncPoly<R>]) -> Self {
        let mut checked = 0;
        let mut first = None;
        for p in polys {
            checked += monomial_count(n, p.trust());
            if first.is_none() {
                first = p.first_nonzero().map(|(m, _)| m.key());
            }
        }
        DefectSummary {
            max_monomials_checked: checked,
            all_zero: first.is_none(),
            first_nonzero: first,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "max_monomials_checked": self.max_monomials_checked,
            "all_zero": self.all_zero,
            "first_nonzero": self.first_nonzero,
        })
    }
}

/// `Σ_m F_{klm}F_{mpq} − Σ_m F_{plm}F_{mkq}` for all `(k,l,p,q)`, with the
/// identity metric; ordered lexicographically in `(k,l,p,q)`.
pub fn wdvv_defect<R: Ring>(f: &FrobeniusData<R>) -> Vec<TruncPoly<R>> {
    let n = f.n;
    let c = f.third_derivatives();
    let mut out = Vec::with_capacity(n.pow(4));
    for k in 0..n {
        for l in 0..n {
            for p in 0..n {
                for q in 0..n {
                    let mut acc = TruncPoly::zero(n, f.trust.saturating_sub(3));
                    for m in 0..n {
                        acc.add_assign(&c[k][l][m].mul(&c[m][p][q]));
                        acc = acc.sub(&c[p][l][m].mul(&c[m][k][q]));
                    }
                    out.push(acc);
                }
            }
        }
    }
    out
}

/// `∂F/∂t^m − θ^{(2)}_m` for each `m`.
pub fn gradient_defect<R: Ring>(f: &FrobeniusData<R>) -> Vec<TruncPoly<R>> {
    (0..f.n)
        .map(|m| {
            let d = f.d(&f.f_t, m + 1);
            d.sub(&f.theta_t[2][m].truncated(d.trust()))
        })
        .collect()
}

/// `∂²θ^{(s)}_μ/∂t^k∂t^l − Σ_m F_{klm} ∂θ^{(s−1)}_μ/∂t^m`, ordered by
/// `(k, l, μ)`.
pub fn trr_defect<R: Ring>(f: &FrobeniusData<R>, s: usize) -> Result<Vec<TruncPoly<R>>> {
    if s < 2 {
        return Err(Error::Precondition(format!(
            "topological recursion is stated for s >= 2, got {s}"
        )));
    }
    if s >= f.theta_t.len() {
        return Err(Error::TrustExceeded(format!(
            "θ^({s}) not available (depth {})",
            f.theta_t.len() - 1
        )));
    }
    let n = f.n;
    let c = f.third_derivatives();
    let mut out = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for l in 0..n {
            for mu in 0..n {
                let lhs = f.d(&f.d(&f.theta_t[s][mu], k + 1), l + 1);
                let mut acc = lhs.truncated(f.trust.saturating_sub(3));
                for m in 0..n {
                    let dm = f.d(&f.theta_t[s - 1][mu], m + 1);
                    acc = acc.sub(&c[k][l][m].mul(&dm));
                }
                out.push(acc);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutoffs::Cutoffs;
    use crate::givental::element::{LoopAlgebraElement, LoopGroupElement, LoopSign};
    use crate::kptau::wave_psi_with;
    use crate::ring::{Mat, Scalar};

    fn tvar(n: usize, trust: u32, i: usize) -> TruncPoly<Scalar> {
        TruncPoly::var(n, trust, Var::new(i, 1))
    }

    fn cubic(n: usize, trust: u32) -> TruncPoly<Scalar> {
        let mut f = TruncPoly::zero(n, trust);
        for i in 1..=n {
            f.add_assign(&tvar(n, trust, i).pow(3).scale_scalar(&Scalar::new(1, 6)));
        }
        f
    }

    fn identity_data(n: usize, w: u32, z: usize) -> (ThetaData<Scalar>, FrobeniusData<Scalar>) {
        let c = Cutoffs::new(2 * (w as i32 + z as i32 + 1) + 4, w, z, w, z);
        let psi = wave_psi_with::<Scalar>(&LoopGroupElement::identity(n), None, Pm::Plus, &c, Some(Restriction::X1Only))
            .unwrap();
        let th = theta_series(&psi, z).unwrap();
        let f = potential(&th, w).unwrap();
        (th, f)
    }

    #[test]
    fn identity_theta_is_exponential() {
        let (th, _) = identity_data(2, 4, 4);
        let mut fact = 1i64;
        for d in 0..=4usize {
            if d > 0 {
                fact *= d as i64;
            }
            for i in 1..=2 {
                let expect = tvar(2, 4, i).pow(d as u32).scale_scalar(&Scalar::new(1, fact));
                assert_eq!(th.theta[d][i - 1], expect);
            }
        }
        assert_eq!(th.jacobian.at_zero(), Mat::identity(2));
    }

    #[test]
    fn identity_potential_is_diagonal_cubic() {
        let (_, f) = identity_data(3, 5, 4);
        assert_eq!(f.f_t, cubic(3, 5));
        assert!(wdvv_defect(&f).iter().all(TruncPoly::is_zero));
        assert!(gradient_defect(&f).iter().all(TruncPoly::is_zero));
        for s in 2..=3 {
            assert!(trr_defect(&f, s).unwrap().iter().all(TruncPoly::is_zero));
        }
        assert!(matches!(trr_defect(&f, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn corrupted_cubic_violates_wdvv() {
        let (_, mut f) = identity_data(3, 5, 4);
        let cross = tvar(3, 5, 1).mul(&tvar(3, 5, 2)).mul(&tvar(3, 5, 3));
        f.f_t.add_assign(&cross);
        let s = DefectSummary::of(3, &wdvv_defect(&f));
        assert!(!s.all_zero);
        assert!(s.first_nonzero.is_some());
    }

    #[test]
    fn twisted_element_gives_frobenius_structure() {
        let m = Mat::from_rows(vec![
            vec![Scalar::new(1, 2), Scalar::new(1, 3)],
            vec![Scalar::new(1, 3), Scalar::new(-1, 1)],
        ])
        .unwrap();
        let a = LoopAlgebraElement::monomial(LoopSign::Minus, 1, m).unwrap();
        let g = LoopGroupElement::exp(a).unwrap();
        let c = Cutoffs::new(20, 5, 4, 5, 4);
        let psi = wave_psi_with::<Scalar>(&g, None, Pm::Plus, &c, Some(Restriction::X1Only)).unwrap();
        let th = theta_series(&psi, 4).unwrap();
        let f = potential(&th, 5).unwrap();
        assert!(wdvv_defect(&f).iter().all(TruncPoly::is_zero));
        assert!(gradient_defect(&f).iter().all(TruncPoly::is_zero));
        for s in 2..=4 {
            assert!(trr_defect(&f, s).unwrap().iter().all(TruncPoly::is_zero), "s = {s}");
        }
        // The structure is not the trivial one.
        assert_ne!(f.f_t.truncated(3), cubic(2, 3));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomial_count(1, 3), 4);
        assert_eq!(monomial_count(2, 2), 6);
        assert_eq!(monomial_count(3, 0), 1);
    }
}
