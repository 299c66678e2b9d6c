//! Weighted-truncated multivariate polynomials in the KP times `x^{(i)}_k`.
//!
//! A [`TruncPoly`] carries its own trust weight `W`: every coefficient of
//! weighted degree `<= W` is exact and nothing above `W` is stored. The weight
//! of `x^{(i)}_k` is `k`. Binary operations propagate `min` of the trusts.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::scalar::{Ring, Scalar};
use crate::error::{Error, Result};

/// The variable `x^{(color)}_{level}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub color: u16,
    pub level: u16,
}

impl Var {
    pub fn new(color: usize, level: usize) -> Self {
        assert!(color >= 1 && level >= 1, "variables are 1-indexed");
        Var {
            color: color as u16,
            level: level as u16,
        }
    }

    pub fn weight(&self) -> u32 {
        self.level as u32
    }
}

/// A monomial as a sorted list of `(variable, exponent)` with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, u16); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var) -> Self {
        let mut m = SmallVec::new();
        m.push((v, 1));
        Monomial(m)
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Var, u16)>) -> Self {
        let mut map: BTreeMap<Var, u16> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *map.entry(v).or_default() += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u16)] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(v, e)| v.weight() * *e as u32).sum()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e as u32).sum()
    }

    pub fn exponent(&self, v: Var) -> u16 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Removes one power of `v`, returning the old exponent (0 if absent).
    fn lower(&self, v: Var) -> Option<(u16, Monomial)> {
        let pos = self.0.iter().position(|(w, _)| *w == v)?;
        let e = self.0[pos].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Some((e, Monomial(out)))
    }

    /// Canonical key `x[i,k]^e*x[j,l]`, or `1` for the empty monomial.
    pub fn key(&self) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    format!("x[{},{}]", v.color, v.level)
                } else {
                    format!("x[{},{}]^{}", v.color, v.level, e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn parse_key(key: &str) -> Result<Monomial> {
        let key = key.trim();
        if key == "1" {
            return Ok(Monomial::one());
        }
        let bad = || Error::Parse(format!("bad monomial key {key:?}"));
        let mut factors = Vec::new();
        for part in key.split('*') {
            let (var, exp) = match part.split_once('^') {
                Some((v, e)) => (v, e.parse::<u16>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let inner = var
                .strip_prefix("x[")
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(bad)?;
            let (c, l) = inner.split_once(',').ok_or_else(bad)?;
            let c: usize = c.trim().parse().map_err(|_| bad())?;
            let l: usize = l.trim().parse().map_err(|_| bad())?;
            if c == 0 || l == 0 || exp == 0 {
                return Err(bad());
            }
            factors.push((Var::new(c, l), exp));
        }
        let m = Monomial::from_factors(factors);
        if m.key() != key {
            return Err(Error::Parse(format!("monomial key {key:?} is not canonical")));
        }
        Ok(m)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Which variables survive [`TruncPoly::restrict`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// Set every `x^{(i)}_{2k}` to zero.
    OddOnly,
    /// Set every `x^{(i)}_k` with `k >= 2` to zero.
    X1Only,
}

/// A polynomial in `x^{(i)}_k` exact up to weighted degree `trust`.
#[derive(Clone, PartialEq)]
pub struct TruncPoly<R: Ring> {
    ncolors: usize,
    trust: u32,
    terms: BTreeMap<Monomial, R>,
}

impl<R: Ring> TruncPoly<R> {
    pub fn zero(ncolors: usize, trust: u32) -> Self {
        TruncPoly {
            ncolors,
            trust,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ncolors: usize, trust: u32, c: R) -> Self {
        let mut p = Self::zero(ncolors, trust);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one(ncolors: usize, trust: u32) -> Self {
        Self::constant(ncolors, trust, R::one())
    }

    pub fn var(ncolors: usize, trust: u32, v: Var) -> Self {
        let mut p = Self::zero(ncolors, trust);
        p.add_term(Monomial::var(v), R::one());
        p
    }

    pub fn from_terms(
        ncolors: usize,
        trust: u32,
        terms: impl IntoIterator<Item = (Monomial, R)>,
    ) -> Self {
        let mut p = Self::zero(ncolors, trust);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ncolors(&self) -> usize {
        self.ncolors
    }

    pub fn trust(&self) -> u32 {
        self.trust
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn constant_term(&self) -> R {
        self.coeff(&Monomial::one())
    }

    /// Highest weight of a stored monomial, if any.
    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::weight).max()
    }

    /// Lowest-ordered nonzero monomial, used to report failed identities.
    pub fn first_nonzero(&self) -> Option<(&Monomial, &R)> {
        self.terms.iter().next()
    }

    /// Adds `c·m`, dropping it if `m` is above trust.
    pub fn add_term(&mut self, m: Monomial, c: R) {
        if c.is_zero() || m.weight() > self.trust {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Same ring, new trust (only lowering is meaningful).
    pub fn truncated(&self, trust: u32) -> Self {
        let trust = trust.min(self.trust);
        TruncPoly {
            ncolors: self.ncolors,
            trust,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() <= trust)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Relabels the number of colors without touching the terms.
    pub fn with_ncolors(mut self, ncolors: usize) -> Self {
        self.ncolors = ncolors;
        self
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ncolors != other.ncolors {
            return Err(Error::Structural(format!(
                "polynomials over {} and {} colors",
                self.ncolors, other.ncolors
            )));
        }
        Ok(())
    }

    fn expect_same(&self, other: &Self) {
        if let Err(e) = self.check_same(other) {
            panic!("{e}");
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.add(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.expect_same(other);
        let mut out = self.truncated(self.trust.min(other.trust));
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TruncPoly {
            ncolors: self.ncolors,
            trust: self.trust,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.expect_same(other);
        if other.trust < self.trust {
            *self = self.truncated(other.trust);
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// Adds `c·other` in place.
    pub fn add_scaled(&mut self, other: &Self, c: &R) {
        self.expect_same(other);
        if other.trust < self.trust {
            *self = self.truncated(other.trust);
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a.mul_ref(c));
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero(self.ncolors, self.trust);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.mul_ref(c));
        }
        out
    }

    pub fn scale_scalar(&self, s: &Scalar) -> Self {
        self.scale(&R::from_scalar(s))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul(other))
    }

    /// Product truncated to `min(self.trust, other.trust)`.
    pub fn mul(&self, other: &Self) -> Self {
        self.expect_same(other);
        let trust = self.trust.min(other.trust);
        let mut out = Self::zero(self.ncolors, trust);
        let rhs: Vec<(&Monomial, u32, &R)> =
            other.terms.iter().map(|(m, c)| (m, m.weight(), c)).collect();
        for (ma, ca) in &self.terms {
            let wa = ma.weight();
            if wa > trust {
                continue;
            }
            for (mb, wb, cb) in &rhs {
                if wa + wb <= trust {
                    out.add_term(ma.mul(mb), ca.mul_ref(cb));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.ncolors, self.trust);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Inverse of a polynomial with constant term exactly 1, up to trust.
    pub fn invert(&self) -> Result<Self> {
        if self.constant_term() != R::one() {
            return Err(Error::NonUnitConstantTerm);
        }
        // 1/(1+u) = sum_k (-u)^k; u has weight >= 1 so k <= trust suffices.
        let mut minus_u = self.neg();
        minus_u.add_term(Monomial::one(), R::one());
        let mut out = Self::one(self.ncolors, self.trust);
        let mut power = Self::one(self.ncolors, self.trust);
        for _ in 0..self.trust {
            power = power.mul(&minus_u);
            if power.is_zero() {
                break;
            }
            out.add_assign(&power);
        }
        Ok(out)
    }

    /// Inverse when the constant term is any unit of the coefficient ring
    /// (e.g. `1 + cε` over dual numbers).
    pub fn invert_unit(&self) -> Result<Self> {
        let c = self.constant_term();
        if c == R::one() {
            return self.invert();
        }
        let cinv = c.try_inverse().ok_or(Error::NonUnitConstantTerm)?;
        Ok(self.scale(&cinv).invert()?.scale(&cinv))
    }

    /// `exp(self)` for a polynomial without constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Precondition(
                "exp of a polynomial with nonzero constant term".into(),
            ));
        }
        let mut out = Self::one(self.ncolors, self.trust);
        let mut power = Self::one(self.ncolors, self.trust);
        for k in 1..=self.trust as i64 {
            power = power.mul(self).scale_scalar(&Scalar::new(1, k));
            if power.is_zero() {
                break;
            }
            out.add_assign(&power);
        }
        Ok(out)
    }

    /// Deletes every monomial containing a forbidden variable.
    pub fn restrict(&self, mode: Restriction) -> Self {
        let keep = |m: &Monomial| {
            m.factors().iter().all(|(v, _)| match mode {
                Restriction::OddOnly => v.level % 2 == 1,
                Restriction::X1Only => v.level == 1,
            })
        };
        TruncPoly {
            ncolors: self.ncolors,
            trust: self.trust,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `∂/∂v`; the trust drops by the weight of `v`.
    pub fn derivative(&self, v: Var) -> Self {
        let trust = self.trust.saturating_sub(v.weight());
        let mut out = Self::zero(self.ncolors, trust);
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.lower(v) {
                out.add_term(rest, c.scale(&Scalar::from(e as i64)));
            }
        }
        out
    }

    /// Applies `f` to every coefficient, e.g. projecting a dual polynomial.
    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> TruncPoly<S> {
        let mut out = TruncPoly::zero(self.ncolors, self.trust);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Substitutes a polynomial for each listed variable; unlisted variables
    /// are kept. Substituted polynomials must have zero constant term, so a
    /// degree-`d` term of `self` only reaches weight `>= d`. The output trust
    /// is `min(target, self.trust, trust of every substituted polynomial)`.
    pub fn substitute(&self, map: &BTreeMap<Var, TruncPoly<R>>, target: u32) -> Result<Self> {
        let mut ncolors = None;
        let mut trust = target.min(self.trust);
        for (v, p) in map {
            if !p.constant_term().is_zero() {
                return Err(Error::TrustExceeded(format!(
                    "substituted series for x[{},{}] has a nonzero constant term; recenter first",
                    v.color, v.level
                )));
            }
            if v.level != 1 {
                return Err(Error::Precondition(
                    "only weight-one variables may be substituted".into(),
                ));
            }
            trust = trust.min(p.trust);
            match ncolors {
                None => ncolors = Some(p.ncolors),
                Some(n) if n != p.ncolors => {
                    return Err(Error::Structural("substitution targets disagree on colors".into()))
                }
                _ => {}
            }
        }
        let ncolors = ncolors.unwrap_or(self.ncolors);
        let mut powers: BTreeMap<(Var, u16), TruncPoly<R>> = BTreeMap::new();
        let mut out = TruncPoly::zero(ncolors, trust);
        for (m, c) in &self.terms {
            let mut term = TruncPoly::constant(ncolors, trust, c.clone());
            for &(v, e) in m.factors() {
                let factor = match map.get(&v) {
                    Some(p) => {
                        if !powers.contains_key(&(v, e)) {
                            let pw = p.truncated(trust).pow(e as u32);
                            powers.insert((v, e), pw);
                        }
                        powers[&(v, e)].clone()
                    }
                    None => TruncPoly::from_terms(
                        ncolors,
                        trust,
                        [(Monomial::from_factors([(v, e)]), R::one())],
                    ),
                };
                term = term.mul(&factor);
                if term.is_zero() {
                    break;
                }
            }
            out.add_assign(&term);
        }
        Ok(out)
    }

    /// Substitutes `x ↦ 0` for every variable.
    pub fn at_zero(&self) -> R {
        self.constant_term()
    }

    /// `{"ncolors": n, "trust": W, "terms": {"x[1,1]^2": "1/2", ...}}`
    pub fn to_json(&self) -> serde_json::Value {
        let mut terms = serde_json::Map::new();
        for (m, c) in &self.terms {
            terms.insert(m.key(), c.to_json());
        }
        serde_json::json!({
            "ncolors": self.ncolors,
            "trust": self.trust,
            "terms": terms,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("polynomial JSON: {what}"));
        let ncolors = v["ncolors"].as_u64().ok_or_else(|| bad("missing ncolors"))? as usize;
        let trust = v["trust"].as_u64().ok_or_else(|| bad("missing trust"))? as u32;
        let terms = v["terms"].as_object().ok_or_else(|| bad("missing terms"))?;
        let mut p = Self::zero(ncolors, trust);
        for (k, c) in terms {
            let m = Monomial::parse_key(k)?;
            if m.weight() > trust {
                return Err(bad("monomial above trust"));
            }
            p.add_term(m, R::from_json(c)?);
        }
        Ok(p)
    }
}

impl<R: Ring> fmt::Display for TruncPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O(w^{})", self.trust + 1);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", m.key())
                }
            })
            .collect();
        write!(f, "{} + O(w^{})", parts.join(" + "), self.trust + 1)
    }
}

impl<R: Ring> fmt::Debug for TruncPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::scalar::DualScalar;
    use proptest::prelude::*;

    type P = TruncPoly<Scalar>;

    fn x(n: usize, w: u32, c: usize, k: usize) -> P {
        P::var(n, w, Var::new(c, k))
    }

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::new(p, d)
    }

    #[test]
    fn difference_of_squares() {
        let one = P::one(1, 2);
        let a = one.add(&x(1, 2, 1, 1));
        let b = one.sub(&x(1, 2, 1, 1));
        let expect = one.sub(&x(1, 2, 1, 1).pow(2));
        assert_eq!(a.mul(&b), expect);
    }

    #[test]
    fn product_above_trust_vanishes() {
        let p = x(1, 3, 1, 2);
        let sq = p.mul(&p);
        assert!(sq.is_zero());
        assert_eq!(sq.trust(), 3);
    }

    #[test]
    fn multinomial_square() {
        // Hand expansion of (1 + x1 + y1)^2.
        let n = 2;
        let x1 = x(n, 2, 1, 1);
        let y1 = x(n, 2, 2, 1);
        let p = P::one(n, 2).add(&x1).add(&y1);
        let sq = p.mul(&p);
        let m = |f: &[(usize, u16)]| Monomial::from_factors(f.iter().map(|&(c, e)| (Var::new(c, 1), e)));
        assert_eq!(sq.len(), 6);
        assert_eq!(sq.coeff(&m(&[])), q(1, 1));
        assert_eq!(sq.coeff(&m(&[(1, 1)])), q(2, 1));
        assert_eq!(sq.coeff(&m(&[(2, 1)])), q(2, 1));
        assert_eq!(sq.coeff(&m(&[(1, 2)])), q(1, 1));
        assert_eq!(sq.coeff(&m(&[(1, 1), (2, 1)])), q(2, 1));
        assert_eq!(sq.coeff(&m(&[(2, 2)])), q(1, 1));
    }

    #[test]
    fn mismatched_colors_is_structural() {
        let a = x(1, 2, 1, 1);
        let b = x(2, 2, 1, 1);
        assert!(matches!(a.try_mul(&b), Err(Error::Structural(_))));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(P::one(1, 3).invert().unwrap(), P::one(1, 3));
        let p = P::one(1, 2).add(&x(1, 2, 1, 1));
        let expect = P::one(1, 2).sub(&x(1, 2, 1, 1)).add(&x(1, 2, 1, 1).pow(2));
        assert_eq!(p.invert().unwrap(), expect);
        let p = P::one(1, 2).add(&x(1, 2, 1, 1)).add(&x(1, 2, 1, 2));
        let expect = P::one(1, 2)
            .sub(&x(1, 2, 1, 1))
            .sub(&x(1, 2, 1, 2))
            .add(&x(1, 2, 1, 1).pow(2));
        assert_eq!(p.invert().unwrap(), expect);
        assert_eq!(p.mul(&expect), P::one(1, 2));
    }

    #[test]
    fn invert_rejects_non_unit() {
        let p = P::constant(1, 2, q(2, 1)).add(&x(1, 2, 1, 1));
        assert_eq!(p.invert(), Err(Error::NonUnitConstantTerm));
    }

    #[test]
    fn restrict_examples() {
        assert!(x(2, 4, 1, 2).restrict(Restriction::OddOnly).is_zero());
        let p = x(2, 4, 1, 1).mul(&x(2, 4, 2, 3));
        assert_eq!(p.restrict(Restriction::OddOnly), p);
        let p = x(1, 4, 1, 1).add(&x(1, 4, 1, 3));
        assert_eq!(p.restrict(Restriction::X1Only), x(1, 4, 1, 1));
    }

    #[test]
    fn derivative_lowers_trust() {
        let p = x(1, 4, 1, 1).pow(3);
        let d = p.derivative(Var::new(1, 1));
        assert_eq!(d.trust(), 3);
        assert_eq!(d, x(1, 3, 1, 1).pow(2).scale_scalar(&q(3, 1)));
    }

    #[test]
    fn substitution_examples() {
        let t = Var::new(1, 1);
        let f = x(1, 3, 1, 1);
        let map = BTreeMap::from([(t, x(1, 3, 1, 1))]);
        assert_eq!(f.substitute(&map, 3).unwrap(), x(1, 3, 1, 1));
        // (t)^2 with t -> x + x^2 gives x^2 + 2x^3.
        let f = x(1, 3, 1, 1).pow(2);
        let map = BTreeMap::from([(t, x(1, 3, 1, 1).add(&x(1, 3, 1, 1).pow(2)))]);
        let expect = x(1, 3, 1, 1).pow(2).add(&x(1, 3, 1, 1).pow(3).scale_scalar(&q(2, 1)));
        assert_eq!(f.substitute(&map, 3).unwrap(), expect);
    }

    #[test]
    fn substitution_rejects_constant_shift() {
        let t = Var::new(1, 1);
        let f = x(1, 3, 1, 1).pow(2);
        let map = BTreeMap::from([(t, P::one(1, 3).add(&x(1, 3, 1, 1)))]);
        assert!(matches!(f.substitute(&map, 3), Err(Error::TrustExceeded(_))));
    }

    #[test]
    fn json_round_trip_and_keys() {
        let p = x(2, 4, 1, 1)
            .pow(2)
            .mul(&x(2, 4, 2, 2))
            .scale_scalar(&q(-3, 7))
            .add(&P::constant(2, 4, q(1, 2)));
        let j = p.to_json();
        assert!(j["terms"].get("x[1,1]^2*x[2,2]").is_some());
        assert_eq!(j["terms"]["1"], "1/2");
        assert_eq!(P::from_json(&j).unwrap(), p);
        assert!(Monomial::parse_key("x[2,1]*x[1,1]").is_err());
    }

    #[test]
    fn dual_coefficients() {
        let e = DualScalar::epsilon();
        let p = TruncPoly::<DualScalar>::one(1, 2).add(
            &TruncPoly::var(1, 2, Var::new(1, 1)).scale(&e),
        );
        let inv = p.invert().unwrap();
        assert_eq!(p.mul(&inv), TruncPoly::one(1, 2));
    }

    fn arb_poly(n: usize, w: u32) -> impl Strategy<Value = P> {
        let vars: Vec<Var> = (1..=n)
            .flat_map(|c| (1..=w as usize).map(move |k| Var::new(c, k)))
            .collect();
        let nv = vars.len();
        proptest::collection::vec(
            (proptest::collection::vec(0u16..3, nv), -5i64..6, 1i64..4),
            0..6,
        )
        .prop_map(move |terms| {
            P::from_terms(
                n,
                w,
                terms.into_iter().map(|(exps, p, d)| {
                    (
                        Monomial::from_factors(vars.iter().copied().zip(exps)),
                        Scalar::new(p, d),
                    )
                }),
            )
        })
    }

    proptest! {
        #[test]
        fn invert_is_inverse(u in arb_poly(2, 4)) {
            let mut p = u.clone();
            let c = p.constant_term();
            p.add_term(Monomial::one(), Scalar::one() - &c);
            let inv = p.invert().unwrap();
            prop_assert_eq!(p.mul(&inv), P::one(2, 4));
        }

        #[test]
        fn truncation_is_stable_under_recompute(a in arb_poly(2, 5), b in arb_poly(2, 5)) {
            // Products computed at higher trust agree within the lower trust.
            let low = a.truncated(3).mul(&b.truncated(3));
            prop_assert_eq!(a.mul(&b).truncated(3), low);
        }
    }
}
