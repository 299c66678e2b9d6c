//! Scalar-valued z-series `Σ_{ℓ=0}^{Z} p_ℓ(x) z^ℓ`.

use super::poly::TruncPoly;
use super::scalar::Ring;
use crate::error::{Error, Result};

/// A z-series whose coefficients are truncated polynomials with a common trust.
#[derive(Clone, PartialEq, Debug)]
pub struct ZSeries<R: Ring> {
    terms: Vec<TruncPoly<R>>,
}

impl<R: Ring> ZSeries<R> {
    pub fn new(terms: Vec<TruncPoly<R>>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Structural("empty z-series".into()));
        }
        let n = terms[0].ncolors();
        if terms.iter().any(|t| t.ncolors() != n) {
            return Err(Error::Structural("z-series with mixed colors".into()));
        }
        let w = terms.iter().map(TruncPoly::trust).min().unwrap();
        Ok(ZSeries {
            terms: terms.into_iter().map(|t| t.truncated(w)).collect(),
        })
    }

    pub fn zero(ncolors: usize, weight: u32, order: usize) -> Self {
        ZSeries {
            terms: vec![TruncPoly::zero(ncolors, weight); order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn weight(&self) -> u32 {
        self.terms[0].trust()
    }

    pub fn coeff(&self, l: usize) -> &TruncPoly<R> {
        &self.terms[l]
    }

    pub fn terms(&self) -> &[TruncPoly<R>] {
        &self.terms
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        let w = self.weight().min(o.weight());
        let mut terms = vec![TruncPoly::zero(self.terms[0].ncolors(), w); order + 1];
        for a in 0..=order {
            for b in 0..=(order - a) {
                terms[a + b].add_assign(&self.terms[a].mul(&o.terms[b]));
            }
        }
        ZSeries { terms }
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        ZSeries {
            terms: (0..=order).map(|l| self.terms[l].add(&o.terms[l])).collect(),
        }
    }

    /// `f(z) ↦ f(−z)`.
    pub fn negate_z(&self) -> Self {
        ZSeries {
            terms: self
                .terms
                .iter()
                .enumerate()
                .map(|(l, t)| if l % 2 == 1 { t.neg() } else { t.clone() })
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(TruncPoly::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::Var;
    use crate::ring::scalar::Scalar;

    #[test]
    fn exp_times_exp_of_negated_z() {
        // e^{xz} e^{-xz} = 1 up to order 3.
        let (w, z) = (4, 3);
        let x = TruncPoly::<Scalar>::var(1, w, Var::new(1, 1));
        let terms: Vec<_> = (0..=z)
            .map(|l| {
                let f: i64 = (1..=l as i64).product();
                x.pow(l as u32).scale_scalar(&Scalar::new(1, f))
            })
            .collect();
        let e = ZSeries::new(terms).unwrap();
        let prod = e.mul(&e.negate_z());
        assert_eq!(prod.coeff(0), &TruncPoly::one(1, w));
        assert!((1..=z).all(|l| prod.coeff(l).is_zero()));
    }
}
