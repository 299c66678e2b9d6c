//! Composition and inversion of coordinate maps in the weight-one variables.

use std::collections::BTreeMap;

use super::matrix::Mat;
use super::poly::{Monomial, TruncPoly, Var};
use super::scalar::Ring;
use crate::error::{Error, Result};

/// Replaces each `t^i` (stored as `Var(i, 1)`) in `f` by `map[i]`.
pub fn substitute_series<R: Ring>(
    f: &TruncPoly<R>,
    map: &[TruncPoly<R>],
    target: u32,
) -> Result<TruncPoly<R>> {
    let map: BTreeMap<Var, TruncPoly<R>> = map
        .iter()
        .enumerate()
        .map(|(i, p)| (Var::new(i + 1, 1), p.clone()))
        .collect();
    f.substitute(&map, target)
}

/// Linear part `J_{ij} = ∂t^i/∂x_j |_0` of a map in the weight-one variables.
pub fn linear_part<R: Ring>(tmap: &[TruncPoly<R>]) -> Mat<R> {
    let n = tmap.len();
    let mut j = Mat::zeros(n);
    for (i, t) in tmap.iter().enumerate() {
        for c in 0..n {
            j.set(i, c, t.coeff(&Monomial::var(Var::new(c + 1, 1))));
        }
    }
    j
}

/// Inverts `t = t(x)` (zero constant terms, invertible linear part) to `x = x(t)`.
///
/// Writing `t = J x + N(x)` with `N` of order `>= 2`, the fixed point of
/// `x ← J⁻¹(t − N(x))` gains one correct degree per step.
pub fn invert_coordinate_map<R: Ring>(tmap: &[TruncPoly<R>]) -> Result<Vec<TruncPoly<R>>> {
    let n = tmap.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let ncolors = tmap[0].ncolors();
    let trust = tmap.iter().map(TruncPoly::trust).min().unwrap();
    for t in tmap {
        if !t.constant_term().is_zero() {
            return Err(Error::Precondition(
                "coordinate map must be recentered (zero constant term)".into(),
            ));
        }
        if t.terms().any(|(m, _)| m.factors().iter().any(|(v, _)| v.level != 1)) {
            return Err(Error::Precondition(
                "coordinate map must only involve weight-one variables".into(),
            ));
        }
    }
    let jac = linear_part(tmap);
    let jinv = jac.inverse().ok_or(Error::NonInvertibleFlatMap)?;
    let nonlinear: Vec<TruncPoly<R>> = tmap
        .iter()
        .map(|t| {
            TruncPoly::from_terms(
                ncolors,
                trust,
                t.terms()
                    .filter(|(m, _)| m.degree() >= 2)
                    .map(|(m, c)| (m.clone(), c.clone())),
            )
        })
        .collect();
    let tvars: Vec<TruncPoly<R>> = (1..=n)
        .map(|i| TruncPoly::var(ncolors, trust, Var::new(i, 1)))
        .collect();
    let apply_jinv = |v: &[TruncPoly<R>]| -> Vec<TruncPoly<R>> {
        (0..n)
            .map(|i| {
                let mut s = TruncPoly::zero(ncolors, trust);
                for (j, vj) in v.iter().enumerate() {
                    s.add_scaled(vj, jinv.get(i, j));
                }
                s
            })
            .collect()
    };
    let mut x = apply_jinv(&tvars);
    for _ in 1..trust {
        let rhs: Vec<TruncPoly<R>> = (0..n)
            .map(|i| Ok(tvars[i].sub(&substitute_series(&nonlinear[i], &x, trust)?)))
            .collect::<Result<_>>()?;
        let next = apply_jinv(&rhs);
        if next == x {
            break;
        }
        x = next;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::scalar::Scalar;
    use proptest::prelude::*;

    type P = TruncPoly<Scalar>;

    fn x(n: usize, w: u32, i: usize) -> P {
        P::var(n, w, Var::new(i, 1))
    }

    #[test]
    fn identity_and_scaling() {
        assert_eq!(invert_coordinate_map(&[x(1, 3, 1)]).unwrap(), vec![x(1, 3, 1)]);
        let two = Scalar::from(2);
        let inv = invert_coordinate_map(&[x(1, 3, 1).scale(&two)]).unwrap();
        assert_eq!(inv, vec![x(1, 3, 1).scale_scalar(&Scalar::new(1, 2))]);
    }

    #[test]
    fn quadratic_map() {
        let t = x(1, 3, 1).add(&x(1, 3, 1).pow(2));
        let inv = invert_coordinate_map(&[t.clone()]).unwrap();
        let expect = x(1, 3, 1)
            .sub(&x(1, 3, 1).pow(2))
            .add(&x(1, 3, 1).pow(3).scale_scalar(&Scalar::from(2)));
        assert_eq!(inv, vec![expect]);
        assert_eq!(substitute_series(&t, &inv, 3).unwrap(), x(1, 3, 1));
    }

    #[test]
    fn singular_jacobian() {
        let t = [x(2, 3, 1).add(&x(2, 3, 2)), x(2, 3, 1).add(&x(2, 3, 2))];
        assert_eq!(invert_coordinate_map(&t), Err(Error::NonInvertibleFlatMap));
    }

    fn arb_map(n: usize, w: u32) -> impl Strategy<Value = Vec<P>> {
        // Identity linear part plus random quadratic and cubic terms.
        let monos: Vec<Monomial> = {
            let mut v = Vec::new();
            for a in 1..=n {
                for b in a..=n {
                    v.push(Monomial::from_factors([(Var::new(a, 1), 1), (Var::new(b, 1), 1)]));
                    for c in b..=n {
                        v.push(Monomial::from_factors([
                            (Var::new(a, 1), 1),
                            (Var::new(b, 1), 1),
                            (Var::new(c, 1), 1),
                        ]));
                    }
                }
            }
            v
        };
        let k = monos.len();
        proptest::collection::vec(proptest::collection::vec(-3i64..4, k), n).prop_map(move |cs| {
            cs.into_iter()
                .enumerate()
                .map(|(i, c)| {
                    let mut p = x(n, w, i + 1);
                    for (m, c) in monos.iter().zip(c) {
                        p.add_term(m.clone(), Scalar::from(c));
                    }
                    p
                })
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn inversion_round_trips(t in arb_map(2, 4)) {
            let inv = invert_coordinate_map(&t).unwrap();
            let ident: Vec<P> = (1..=2).map(|i| x(2, 4, i)).collect();
            for (i, ti) in t.iter().enumerate() {
                prop_assert_eq!(&substitute_series(ti, &inv, 4).unwrap(), &ident[i]);
                prop_assert_eq!(&substitute_series(&inv[i], &t, 4).unwrap(), &ident[i]);
            }
        }
    }
}
