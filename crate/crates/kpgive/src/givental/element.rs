//! Twisted loop algebra elements and loop group elements.
//!
//! An algebra element is `Σ_l a_l ζ^l` (sign `+`, the `r` type) or
//! `Σ_l a_l ζ^{−l}` (sign `−`, the `s` type). It is twisted when
//! `a(−ζ)ᵗ + a(ζ) = 0`, i.e. `a_lᵗ = (−1)^{l+1} a_l`. Group elements are ordered
//! products `exp(a_1) ⋯ exp(a_m)` of such exponentials.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Mat, Ring, Scalar};

/// `+` for positive powers of `ζ`, `−` for negative ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LoopSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl LoopSign {
    /// The `+` side raises Fock energy.
    pub fn raises(self) -> bool {
        self == LoopSign::Plus
    }

    pub fn symbol(self) -> &'static str {
        match self {
            LoopSign::Plus => "+",
            LoopSign::Minus => "-",
        }
    }
}

/// A twisted element of the loop algebra, one sign only.
#[derive(Clone, PartialEq)]
pub struct LoopAlgebraElement {
    sign: LoopSign,
    n: usize,
    terms: BTreeMap<u32, Mat<Scalar>>,
}

fn check_level(level: u32, m: &Mat<Scalar>) -> Result<()> {
    let ok = if level % 2 == 1 {
        m.is_symmetric()
    } else {
        m.is_antisymmetric()
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NotTwisted { level })
    }
}

impl LoopAlgebraElement {
    /// Builds and validates an element; levels must be `>= 1`.
    pub fn new(sign: LoopSign, n: usize, terms: Vec<(u32, Mat<Scalar>)>) -> Result<Self> {
        let a = Self::new_unchecked(sign, n, terms)?;
        for (l, m) in &a.terms {
            check_level(*l, m)?;
        }
        Ok(a)
    }

    /// Like [`new`](Self::new) but without the twist check (used to build
    /// counterexamples).
    pub fn new_unchecked(sign: LoopSign, n: usize, terms: Vec<(u32, Mat<Scalar>)>) -> Result<Self> {
        let mut map: BTreeMap<u32, Mat<Scalar>> = BTreeMap::new();
        for (l, m) in terms {
            if l == 0 {
                return Err(Error::Structural("loop algebra levels start at 1".into()));
            }
            if m.n() != n {
                return Err(Error::Structural(format!(
                    "level {l} matrix is {}x{}, expected {n}x{n}",
                    m.n(),
                    m.n()
                )));
            }
            let e = map.entry(l).or_insert_with(|| Mat::zeros(n));
            *e = e.add(&m);
        }
        map.retain(|_, m| !m.is_zero());
        Ok(LoopAlgebraElement { sign, n, terms: map })
    }

    pub fn zero(sign: LoopSign, n: usize) -> Self {
        LoopAlgebraElement {
            sign,
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Single-level element `m ζ^{±level}`.
    pub fn monomial(sign: LoopSign, level: u32, m: Mat<Scalar>) -> Result<Self> {
        let n = m.n();
        Self::new(sign, n, vec![(level, m)])
    }

    pub fn sign(&self) -> LoopSign {
        self.sign
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn levels(&self) -> impl Iterator<Item = (u32, &Mat<Scalar>)> {
        self.terms.iter().map(|(l, m)| (*l, m))
    }

    pub fn level(&self, l: u32) -> Mat<Scalar> {
        self.terms.get(&l).cloned().unwrap_or_else(|| Mat::zeros(self.n))
    }

    pub fn max_level(&self) -> u32 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_twisted(&self) -> bool {
        self.terms.iter().all(|(l, m)| check_level(*l, m).is_ok())
    }

    pub fn check_twisted(&self) -> Result<()> {
        for (l, m) in &self.terms {
            check_level(*l, m)?;
        }
        Ok(())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let terms = self.terms.iter().map(|(l, m)| (*l, m.scale(c))).collect();
        Self::new_unchecked(self.sign, self.n, terms).expect("same shape")
    }

    /// Keeps only the levels in `range`.
    pub fn restrict_levels(&self, keep: impl Fn(u32) -> bool) -> Self {
        LoopAlgebraElement {
            sign: self.sign,
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(l, _)| keep(**l))
                .map(|(l, m)| (*l, m.clone()))
                .collect(),
        }
    }

    /// Coefficients of `w^0..w^order` where `w = ζ^{±1}` (constant term 0).
    pub fn series(&self, order: usize) -> Vec<Mat<Scalar>> {
        (0..=order).map(|l| self.level(l as u32)).collect()
    }

    /// `exp(a)` as a power series in `w = ζ^{±1}`, up to `w^order`.
    pub fn exp_series(&self, order: usize) -> Vec<Mat<Scalar>> {
        let a = self.series(order);
        let mut out = vec![Mat::zeros(self.n); order + 1];
        out[0] = Mat::identity(self.n);
        let mut power = out.clone();
        for p in 1..=order {
            power = series_mul(&power, &a, order);
            let inv = Scalar::new(1, factorial(p));
            for (o, c) in out.iter_mut().zip(&power) {
                *o = o.add(&c.scale(&inv));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(l, m)| {
                let rows: Vec<Vec<String>> = m
                    .rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(|c| c.to_string()).collect())
                    .collect();
                serde_json::json!({"level": l, "matrix": rows})
            })
            .collect();
        serde_json::json!({"sign": self.sign.symbol(), "terms": terms})
    }

    /// Parses and validates `{"sign":"+","terms":[{"level":1,"matrix":[[..]]}]}`.
    pub fn from_json(v: &serde_json::Value, n: usize) -> Result<Self> {
        let a = Self::from_json_unchecked(v, n)?;
        a.check_twisted()?;
        Ok(a)
    }

    pub fn from_json_unchecked(v: &serde_json::Value, n: usize) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("algebra element: {m}"));
        let sign = match v["sign"].as_str() {
            Some("+") => LoopSign::Plus,
            Some("-") => LoopSign::Minus,
            _ => return Err(bad("sign must be \"+\" or \"-\"")),
        };
        let terms = v["terms"].as_array().ok_or_else(|| bad("missing terms"))?;
        let mut out = Vec::new();
        for t in terms {
            let level = t["level"].as_u64().ok_or_else(|| bad("missing level"))? as u32;
            let rows = t["matrix"].as_array().ok_or_else(|| bad("missing matrix"))?;
            let rows: Vec<Vec<Scalar>> = rows
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| bad("matrix rows must be arrays"))?
                        .iter()
                        .map(Scalar::from_json)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            out.push((level, Mat::from_rows(rows)?));
        }
        Self::new_unchecked(sign, n, out)
    }
}

impl fmt::Debug for LoopAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

fn factorial(p: usize) -> i64 {
    (1..=p as i64).product()
}

/// Product of two matrix power series truncated at `order`.
pub fn series_mul(a: &[Mat<Scalar>], b: &[Mat<Scalar>], order: usize) -> Vec<Mat<Scalar>> {
    let n = a[0].n();
    let mut out = vec![Mat::zeros(n); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            if !bj.is_zero() {
                out[i + j] = out[i + j].add(&ai.mul(bj));
            }
        }
    }
    out
}

/// `A(w) ↦ A(−w)ᵗ` on a matrix power series.
pub fn series_negate_transpose(a: &[Mat<Scalar>]) -> Vec<Mat<Scalar>> {
    a.iter()
        .enumerate()
        .map(|(l, m)| if l % 2 == 1 { m.transpose().neg() } else { m.transpose() })
        .collect()
}

/// `exp(a_1) ⋯ exp(a_m)` with twisted factors.
#[derive(Clone, PartialEq)]
pub struct LoopGroupElement {
    n: usize,
    factors: Vec<LoopAlgebraElement>,
}

impl LoopGroupElement {
    pub fn identity(n: usize) -> Self {
        LoopGroupElement {
            n,
            factors: Vec::new(),
        }
    }

    pub fn new(n: usize, factors: Vec<LoopAlgebraElement>) -> Result<Self> {
        let g = Self::new_unchecked(n, factors)?;
        for f in &g.factors {
            f.check_twisted()?;
        }
        Ok(g)
    }

    pub fn new_unchecked(n: usize, factors: Vec<LoopAlgebraElement>) -> Result<Self> {
        if factors.iter().any(|f| f.n() != n) {
            return Err(Error::Structural("factors of different sizes".into()));
        }
        Ok(LoopGroupElement {
            n,
            factors: factors.into_iter().filter(|f| !f.is_zero()).collect(),
        })
    }

    pub fn exp(a: LoopAlgebraElement) -> Result<Self> {
        Self::new(a.n(), vec![a])
    }

    /// Factors a single-sided series `Id + Σ_{i>=1} A_i w^i` through its
    /// logarithm. The result agrees with the input up to `w^order`; the
    /// logarithm must be twisted. Coefficients beyond `order` are rejected.
    pub fn from_series(sign: LoopSign, coeffs: &[Mat<Scalar>], order: usize) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Structural("empty series".into()));
        }
        let n = coeffs[0].n();
        if coeffs[0] != Mat::identity(n) {
            return Err(Error::Precondition("series must start with the identity".into()));
        }
        if coeffs.len() > order + 1 && coeffs[order + 1..].iter().any(|m| !m.is_zero()) {
            return Err(Error::TrustExceeded(format!(
                "series has terms beyond z-order {order}; raise the order"
            )));
        }
        let mut x: Vec<Mat<Scalar>> = (0..=order)
            .map(|l| coeffs.get(l).cloned().unwrap_or_else(|| Mat::zeros(n)))
            .collect();
        x[0] = Mat::zeros(n);
        // log(1 + X) = Σ (−1)^{k+1} X^k / k
        let mut log = vec![Mat::zeros(n); order + 1];
        let mut power = x.clone();
        for k in 1..=order {
            let c = Scalar::new(if k % 2 == 1 { 1 } else { -1 }, k as i64);
            for (o, p) in log.iter_mut().zip(&power) {
                *o = o.add(&p.scale(&c));
            }
            power = series_mul(&power, &x, order);
        }
        let terms = log
            .into_iter()
            .enumerate()
            .skip(1)
            .map(|(l, m)| (l as u32, m))
            .collect();
        Self::exp(LoopAlgebraElement::new(sign, n, terms)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[LoopAlgebraElement] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// True when no raising factor sits to the right of a lowering one, so
    /// every Fock coefficient is a finite sum (the `R·S` shape).
    pub fn is_ordered(&self) -> bool {
        let mut seen_lowering = false;
        for f in &self.factors {
            if f.sign().raises() {
                if seen_lowering {
                    return false;
                }
            } else {
                seen_lowering = true;
            }
        }
        true
    }

    /// Checks `A(−w)ᵗ A(w) = Id` up to `w^order` for every factor.
    pub fn check_twist(&self, order: usize) -> Result<()> {
        for f in &self.factors {
            let a = f.exp_series(order);
            let prod = series_mul(&series_negate_transpose(&a), &a, order);
            for (l, m) in prod.iter().enumerate() {
                let expect = if l == 0 { Mat::identity(self.n) } else { Mat::zeros(self.n) };
                if *m != expect {
                    return Err(Error::NotTwisted { level: l as u32 });
                }
            }
        }
        Ok(())
    }

    /// Product series when all factors share one sign, as coefficients of
    /// `w^0..w^order` with `w = ζ^{±1}`.
    pub fn series(&self, order: usize) -> Result<(Option<LoopSign>, Vec<Mat<Scalar>>)> {
        let mut out = vec![Mat::zeros(self.n); order + 1];
        out[0] = Mat::identity(self.n);
        let mut sign = None;
        for f in &self.factors {
            match sign {
                None => sign = Some(f.sign()),
                Some(s) if s != f.sign() => {
                    return Err(Error::Precondition(
                        "mixed-sign group elements have no single power series".into(),
                    ))
                }
                _ => {}
            }
            out = series_mul(&out, &f.exp_series(order), order);
        }
        Ok((sign, out))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "factors": self.factors.iter().map(LoopAlgebraElement::to_json).collect::<Vec<_>>()
        })
    }

    pub fn from_json(v: &serde_json::Value, n: usize) -> Result<Self> {
        let g = Self::from_json_unchecked(v, n)?;
        for f in &g.factors {
            f.check_twisted()?;
        }
        Ok(g)
    }

    pub fn from_json_unchecked(v: &serde_json::Value, n: usize) -> Result<Self> {
        let fs = v["factors"]
            .as_array()
            .ok_or_else(|| Error::Parse("group element: missing factors".into()))?;
        let factors = fs
            .iter()
            .map(|f| LoopAlgebraElement::from_json_unchecked(f, n))
            .collect::<Result<Vec<_>>>()?;
        Self::new_unchecked(n, factors)
    }
}

impl fmt::Debug for LoopGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::new(p, d)
    }

    fn sym() -> Mat<Scalar> {
        Mat::from_rows(vec![vec![q(1, 1), q(1, 2)], vec![q(1, 2), q(-2, 1)]]).unwrap()
    }

    fn anti() -> Mat<Scalar> {
        Mat::from_rows(vec![vec![q(0, 1), q(3, 1)], vec![q(-3, 1), q(0, 1)]]).unwrap()
    }

    #[test]
    fn twist_validation() {
        assert!(LoopAlgebraElement::monomial(LoopSign::Plus, 1, sym()).is_ok());
        assert!(LoopAlgebraElement::monomial(LoopSign::Minus, 2, anti()).is_ok());
        assert_eq!(
            LoopAlgebraElement::monomial(LoopSign::Plus, 2, sym()),
            Err(Error::NotTwisted { level: 2 })
        );
        assert_eq!(
            LoopAlgebraElement::monomial(LoopSign::Plus, 1, anti()),
            Err(Error::NotTwisted { level: 1 })
        );
    }

    #[test]
    fn json_round_trip() {
        let a = LoopAlgebraElement::new(LoopSign::Plus, 2, vec![(1, sym()), (2, anti())]).unwrap();
        let j = a.to_json();
        assert_eq!(j["terms"][0]["matrix"][0][1], "1/2");
        assert_eq!(LoopAlgebraElement::from_json(&j, 2).unwrap(), a);
        let g = LoopGroupElement::new(2, vec![a.clone(), a]).unwrap();
        assert_eq!(LoopGroupElement::from_json(&g.to_json(), 2).unwrap(), g);
        let bad = serde_json::json!({"sign":"+","terms":[{"level":2,"matrix":[["1","0"],["0","1"]]}]});
        assert_eq!(
            LoopAlgebraElement::from_json(&bad, 2).unwrap_err().to_string(),
            "twist violation at level 2"
        );
    }

    #[test]
    fn group_twist_and_log() {
        let a = LoopAlgebraElement::new(LoopSign::Minus, 2, vec![(1, sym()), (2, anti())]).unwrap();
        let g = LoopGroupElement::exp(a.clone()).unwrap();
        g.check_twist(6).unwrap();
        let (_, series) = g.series(6).unwrap();
        let back = LoopGroupElement::from_series(LoopSign::Minus, &series, 6).unwrap();
        assert_eq!(back.factors()[0].restrict_levels(|l| l <= 2), a);
        let bad = LoopAlgebraElement::new_unchecked(LoopSign::Plus, 2, vec![(1, anti())]).unwrap();
        let g = LoopGroupElement::new_unchecked(2, vec![bad]).unwrap();
        assert!(g.check_twist(4).is_err());
    }
}
