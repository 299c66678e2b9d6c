//! Finite linear combinations of Fock states.

use std::collections::BTreeMap;
use std::fmt;

use super::state::FockState;
use crate::error::{Error, Result};
use crate::ring::{DualScalar, Ring, Scalar, TruncPoly};

/// Coefficient types a [`FockVector`] can carry.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn coeff_is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn negated(&self) -> Self;
    fn scale_scalar(&self, s: &Scalar) -> Self;
}

macro_rules! ring_coeff {
    ($t:ty) => {
        impl Coeff for $t {
            fn coeff_is_zero(&self) -> bool {
                Ring::is_zero(self)
            }
            fn add_assign_ref(&mut self, other: &Self) {
                *self += other;
            }
            fn negated(&self) -> Self {
                -self.clone()
            }
            fn scale_scalar(&self, s: &Scalar) -> Self {
                Ring::scale(self, s)
            }
        }
    };
}

ring_coeff!(Scalar);
ring_coeff!(DualScalar);

impl<R: Ring> Coeff for TruncPoly<R> {
    fn coeff_is_zero(&self) -> bool {
        TruncPoly::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        self.add_assign(other);
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scale_scalar(&self, s: &Scalar) -> Self {
        TruncPoly::scale_scalar(self, s)
    }
}

/// A linear combination of basis states.
///
/// `energy_cut` is the doubled energy up to which every component is exact;
/// `None` means nothing was ever dropped.
#[derive(Clone, PartialEq)]
pub struct FockVector<C: Coeff> {
    n: usize,
    terms: BTreeMap<FockState, C>,
    energy_cut: Option<i32>,
}

impl<C: Coeff> FockVector<C> {
    pub fn zero(n: usize, energy_cut: Option<i32>) -> Self {
        FockVector {
            n,
            terms: BTreeMap::new(),
            energy_cut,
        }
    }

    pub fn basis(state: FockState, c: C) -> Self {
        let mut v = Self::zero(state.n(), None);
        v.add_term(state, c);
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn energy_cut(&self) -> Option<i32> {
        self.energy_cut
    }

    /// Lowers the exactness bound and drops components above it.
    pub fn truncate(&mut self, cut: i32) {
        let cut = self.energy_cut.map_or(cut, |c| c.min(cut));
        self.energy_cut = Some(cut);
        self.terms.retain(|s, _| s.energy2() <= cut);
    }

    /// Marks the vector as exact only up to `cut` without dropping anything.
    pub fn limit_trust(&mut self, cut: Option<i32>) {
        self.energy_cut = match (self.energy_cut, cut) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockState, &C)> {
        self.terms.iter()
    }

    pub fn get(&self, s: &FockState) -> Option<&C> {
        self.terms.get(s)
    }

    /// Coefficient of `s`; errors if `s` lies above the exactness bound.
    pub fn coefficient(&self, s: &FockState) -> Result<Option<&C>> {
        if let Some(cut) = self.energy_cut {
            if s.energy2() > cut {
                return Err(Error::TrustExceeded(format!(
                    "state {s} has doubled energy {} above the cut {cut}",
                    s.energy2()
                )));
            }
        }
        Ok(self.terms.get(s))
    }

    pub fn add_term(&mut self, s: FockState, c: C) {
        if c.coeff_is_zero() {
            return;
        }
        if let Some(cut) = self.energy_cut {
            if s.energy2() > cut {
                return;
            }
        }
        match self.terms.entry(s) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&c);
                if e.get().coeff_is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_signed(&mut self, s: FockState, c: &C, negative: bool) {
        self.add_term(s, if negative { c.negated() } else { c.clone() });
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.limit_trust(other.energy_cut);
        if let Some(cut) = self.energy_cut {
            self.terms.retain(|s, _| s.energy2() <= cut);
        }
        for (s, c) in &other.terms {
            self.add_term(s.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(&other.neg());
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.negated())
    }

    pub fn scale_scalar(&self, s: &Scalar) -> Self {
        if Ring::is_zero(s) {
            return Self::zero(self.n, self.energy_cut);
        }
        self.map(|c| c.scale_scalar(s))
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> FockVector<D> {
        let mut out = FockVector::zero(self.n, self.energy_cut);
        for (s, c) in &self.terms {
            out.add_term(s.clone(), f(c));
        }
        out
    }

    /// Applies an operator given by its action on basis states, each image
    /// being a list of `(scalar, state)` pairs. Output is filtered at `cut`.
    pub fn apply_linear(
        &self,
        cut: Option<i32>,
        f: impl Fn(&FockState, &mut Vec<(Scalar, FockState)>),
    ) -> Self {
        let mut out = Self::zero(self.n, self.energy_cut);
        out.limit_trust(cut);
        let mut buf = Vec::new();
        for (s, c) in &self.terms {
            buf.clear();
            f(s, &mut buf);
            for (a, t) in buf.drain(..) {
                if a == Scalar::one() {
                    out.add_term(t, c.clone());
                } else if a == -Scalar::one() {
                    out.add_term(t, c.negated());
                } else {
                    out.add_term(t, c.scale_scalar(&a));
                }
            }
        }
        out
    }

    /// Applies a signed basis-state map (e.g. a fermion or `Q_i`).
    pub fn apply_signed(&self, f: impl Fn(&FockState) -> Option<(bool, FockState)>) -> Self {
        let mut out = Self::zero(self.n, self.energy_cut);
        for (s, c) in &self.terms {
            if let Some((neg, t)) = f(s) {
                out.add_signed(t, c, neg);
            }
        }
        out
    }

    /// Lowest and highest doubled energies present.
    pub fn energy_range(&self) -> Option<(i32, i32)> {
        let lo = self.terms.keys().next()?.energy2();
        let hi = self.terms.keys().map(FockState::energy2).max()?;
        Some((lo, hi))
    }

    pub fn to_json(&self, coeff: impl Fn(&C) -> serde_json::Value) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(s, c)| {
                    serde_json::json!({
                        "state": s.to_string(),
                        "energy2": s.energy2(),
                        "coeff": coeff(c),
                    })
                })
                .collect(),
        )
    }
}

impl<C: Coeff> fmt::Debug for FockVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FockVector(cut={:?})", self.energy_cut)?;
        for (s, c) in &self.terms {
            writeln!(f, "  {c:?} * |{s}>")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_above_cut_is_an_error() {
        let mut v = FockVector::basis(FockState::vacuum(1), Scalar::one());
        v.truncate(4);
        let high = FockState::from_modes(1, &[(1, 5)], &[(1, -1)]).unwrap();
        assert!(matches!(v.coefficient(&high), Err(Error::TrustExceeded(_))));
        assert_eq!(v.coefficient(&FockState::vacuum(1)).unwrap(), Some(&Scalar::one()));
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut v = FockVector::basis(FockState::vacuum(2), Scalar::from(3));
        v.add_term(FockState::vacuum(2), Scalar::from(-3));
        assert!(v.is_zero());
    }
}
