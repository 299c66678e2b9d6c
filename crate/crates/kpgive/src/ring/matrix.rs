//! Constant matrices, polynomial matrices and matrix-valued z-series.

use std::fmt;

use super::poly::{Restriction, TruncPoly};
use super::scalar::{Ring, Scalar};
use crate::error::{Error, Result};

/// A dense `n×n` matrix over a ring, row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<R: Ring> {
    n: usize,
    data: Vec<R>,
}

impl<R: Ring> Mat<R> {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            data: vec![R::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = R::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Structural("matrix is not square".into()));
        }
        Ok(Mat {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<R>> {
        self.data.chunks(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(R::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        Mat {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Mat {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Mat {
            n: self.n,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        Mat {
            n: self.n,
            data: self.data.iter().map(|a| a.mul_ref(c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += &a.mul_ref(b);
                    }
                }
            }
        }
        out
    }

    pub fn lift<S: Ring>(&self, f: impl Fn(&R) -> S) -> Mat<S> {
        Mat {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Sum of all entries.
    pub fn entry_sum(&self) -> R {
        let mut s = R::zero();
        for a in &self.data {
            s += a;
        }
        s
    }

    /// Inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| a.get(r, col).try_inverse().is_some())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).try_inverse()?;
            for j in 0..n {
                a.data[col * n + j] = a.data[col * n + j].mul_ref(&p);
                inv.data[col * n + j] = inv.data[col * n + j].mul_ref(&p);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let da = a.get(col, j).mul_ref(&f);
                    let di = inv.get(col, j).mul_ref(&f);
                    a.data[r * n + j] -= &da;
                    inv.data[r * n + j] -= &di;
                }
            }
        }
        Some(inv)
    }
}

impl Mat<Scalar> {
    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        *self == self.transpose().neg()
    }
}

/// An `n×n` matrix of truncated polynomials sharing colors and trust.
#[derive(Clone, PartialEq)]
pub struct PolyMatrix<R: Ring> {
    n: usize,
    entries: Vec<TruncPoly<R>>,
}

impl<R: Ring> PolyMatrix<R> {
    pub fn zeros(n: usize, ncolors: usize, trust: u32) -> Self {
        PolyMatrix {
            n,
            entries: vec![TruncPoly::zero(ncolors, trust); n * n],
        }
    }

    pub fn identity(n: usize, ncolors: usize, trust: u32) -> Self {
        let mut m = Self::zeros(n, ncolors, trust);
        for i in 0..n {
            m.entries[i * n + i] = TruncPoly::one(ncolors, trust);
        }
        m
    }

    pub fn from_entries(n: usize, entries: Vec<TruncPoly<R>>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Structural("wrong number of matrix entries".into()));
        }
        Ok(PolyMatrix { n, entries })
    }

    pub fn from_const(m: &Mat<R>, ncolors: usize, trust: u32) -> Self {
        let n = m.n();
        let mut out = Self::zeros(n, ncolors, trust);
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] = TruncPoly::constant(ncolors, trust, m.get(i, j).clone());
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn trust(&self) -> u32 {
        self.entries.iter().map(TruncPoly::trust).min().unwrap_or(u32::MAX)
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncPoly<R> {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: TruncPoly<R>) {
        self.entries[i * self.n + j] = p;
    }

    pub fn entries(&self) -> &[TruncPoly<R>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(TruncPoly::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(j, i).clone());
            }
        }
        PolyMatrix { n, entries }
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::Structural(format!(
                "multiplying {}x{} by {}x{}",
                self.n, self.n, o.n, o.n
            )));
        }
        Ok(self.mul(o))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "matrix dimension mismatch");
        let n = self.n;
        let trust = self.trust().min(o.trust());
        let ncolors = self.entries[0].ncolors();
        let mut out = Self::zeros(n, ncolors, trust);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j].add_assign(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    /// Right multiplication by a constant matrix.
    pub fn mul_const(&self, c: &Mat<R>) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n, self.entries[0].ncolors(), self.trust());
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = c.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j].add_scaled(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (a, b) in self.entries.iter_mut().zip(&o.entries) {
            a.add_assign(b);
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn map_entries<S: Ring>(&self, f: impl Fn(&TruncPoly<R>) -> TruncPoly<S>) -> PolyMatrix<S> {
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn restrict(&self, mode: Restriction) -> Self {
        self.map_entries(|p| p.restrict(mode))
    }

    pub fn truncated(&self, trust: u32) -> Self {
        self.map_entries(|p| p.truncated(trust))
    }

    /// `[M]`: the sum of all entries.
    pub fn entry_sum(&self) -> TruncPoly<R> {
        let mut s = TruncPoly::zero(self.entries[0].ncolors(), self.trust());
        for e in &self.entries {
            s.add_assign(e);
        }
        s
    }

    /// `(1,…,1)·M`, the vector of column sums.
    pub fn column_sums(&self) -> Vec<TruncPoly<R>> {
        (0..self.n)
            .map(|j| {
                let mut s = TruncPoly::zero(self.entries[0].ncolors(), self.trust());
                for i in 0..self.n {
                    s.add_assign(self.get(i, j));
                }
                s
            })
            .collect()
    }

    /// Constant part as a scalar matrix.
    pub fn at_zero(&self) -> Mat<R> {
        let mut m = Mat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(i, j).constant_term());
            }
        }
        m
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.n)
            .map(|i| {
                serde_json::Value::Array((0..self.n).map(|j| self.get(i, j).to_json()).collect())
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

impl<R: Ring> fmt::Debug for PolyMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `Σ_{ℓ=0}^{Z} M_ℓ z^ℓ` with polynomial-matrix coefficients.
///
/// All coefficients share the weight trust `W`; the z-trust is `Z`.
#[derive(Clone, PartialEq)]
pub struct MatrixSeries<R: Ring> {
    coeffs: Vec<PolyMatrix<R>>,
}

impl<R: Ring> MatrixSeries<R> {
    pub fn new(coeffs: Vec<PolyMatrix<R>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Structural("empty matrix series".into()));
        }
        let n = coeffs[0].n();
        if coeffs.iter().any(|c| c.n() != n) {
            return Err(Error::Structural("matrix series with mixed sizes".into()));
        }
        let w = coeffs.iter().map(PolyMatrix::trust).min().unwrap();
        Ok(MatrixSeries {
            coeffs: coeffs.into_iter().map(|c| c.truncated(w)).collect(),
        })
    }

    pub fn identity(n: usize, ncolors: usize, weight: u32, order: usize) -> Self {
        let mut coeffs = vec![PolyMatrix::zeros(n, ncolors, weight); order + 1];
        coeffs[0] = PolyMatrix::identity(n, ncolors, weight);
        MatrixSeries { coeffs }
    }

    pub fn zeros(n: usize, ncolors: usize, weight: u32, order: usize) -> Self {
        MatrixSeries {
            coeffs: vec![PolyMatrix::zeros(n, ncolors, weight); order + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.coeffs[0].n()
    }

    pub fn ncolors(&self) -> usize {
        self.coeffs[0].get(0, 0).ncolors()
    }

    /// z-trust `Z`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Weight trust `W`.
    pub fn weight(&self) -> u32 {
        self.coeffs[0].trust()
    }

    pub fn coeff(&self, l: usize) -> &PolyMatrix<R> {
        &self.coeffs[l]
    }

    pub fn coeffs(&self) -> &[PolyMatrix<R>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PolyMatrix::is_zero)
    }

    pub fn truncated(&self, order: usize, weight: u32) -> Self {
        MatrixSeries {
            coeffs: self.coeffs[..=order.min(self.order())]
                .iter()
                .map(|c| c.truncated(weight))
                .collect(),
        }
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.n() != o.n() {
            return Err(Error::Structural("matrix series dimension mismatch".into()));
        }
        Ok(self.mul(o))
    }

    /// Cauchy product truncated at the smaller z-order and weight.
    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        let w = self.weight().min(o.weight());
        let mut coeffs = vec![PolyMatrix::zeros(self.n(), self.ncolors(), w); order + 1];
        for a in 0..=order {
            for b in 0..=(order - a) {
                if self.coeffs[a].is_zero() || o.coeffs[b].is_zero() {
                    continue;
                }
                coeffs[a + b].add_assign(&self.coeffs[a].mul(&o.coeffs[b]));
            }
        }
        MatrixSeries { coeffs }
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        MatrixSeries {
            coeffs: (0..=order).map(|l| self.coeffs[l].add(&o.coeffs[l])).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        MatrixSeries {
            coeffs: (0..=order).map(|l| self.coeffs[l].sub(&o.coeffs[l])).collect(),
        }
    }

    /// `M(z) ↦ M(−z)ᵗ`.
    pub fn negate_z_transpose(&self) -> Self {
        MatrixSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(l, c)| {
                    let t = c.transpose();
                    if l % 2 == 1 {
                        t.scale(&-R::one())
                    } else {
                        t
                    }
                })
                .collect(),
        }
    }

    pub fn restrict(&self, mode: Restriction) -> Self {
        MatrixSeries {
            coeffs: self.coeffs.iter().map(|c| c.restrict(mode)).collect(),
        }
    }

    pub fn map_entries<S: Ring>(&self, f: impl Fn(&TruncPoly<R>) -> TruncPoly<S>) -> MatrixSeries<S> {
        MatrixSeries {
            coeffs: self.coeffs.iter().map(|c| c.map_entries(&f)).collect(),
        }
    }

    /// JSON keyed `psi[i][k].z^l` (1-based colors).
    pub fn to_json_keyed(&self, prefix: &str) -> serde_json::Value {
        let mut out = serde_json::Map::new();
        for (l, c) in self.coeffs.iter().enumerate() {
            for i in 0..self.n() {
                for k in 0..self.n() {
                    out.insert(
                        format!("{prefix}[{}][{}].z^{}", i + 1, k + 1, l),
                        c.get(i, k).to_json(),
                    );
                }
            }
        }
        serde_json::Value::Object(out)
    }

    pub fn from_json_keyed(v: &serde_json::Value, prefix: &str, n: usize, order: usize) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("matrix series JSON must be an object".into()))?;
        let mut coeffs = Vec::with_capacity(order + 1);
        for l in 0..=order {
            let mut entries = Vec::with_capacity(n * n);
            for i in 0..n {
                for k in 0..n {
                    let key = format!("{prefix}[{}][{}].z^{}", i + 1, k + 1, l);
                    let p = obj
                        .get(&key)
                        .ok_or_else(|| Error::Parse(format!("missing entry {key}")))?;
                    entries.push(TruncPoly::from_json(p)?);
                }
            }
            coeffs.push(PolyMatrix::from_entries(n, entries)?);
        }
        MatrixSeries::new(coeffs)
    }
}

impl<R: Ring> fmt::Debug for MatrixSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, c) in self.coeffs.iter().enumerate() {
            writeln!(f, "z^{l}:")?;
            write!(f, "{c:?}")?;
        }
        Ok(())
    }
}
