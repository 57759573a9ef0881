//! Exact linear algebra over labelled based spaces: dense matrices with
//! rank/kernel/image by Gauss-Jordan elimination, symmetric and exterior
//! powers, duals, tensor products, induced maps, and quotients with a chosen
//! complement basis.
//!
//! Dimensions in this crate stay below ~100, so everything is dense.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, Cyclo7, Rational};
use num_traits::{One, Zero};

/// Exact field scalar. Implemented for `Rational` and `Cyclo7`.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_int(n: i64) -> Self;
    fn to_display(&self) -> String;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_int(n: i64) -> Self {
        crate::exactnum::rat_int(n)
    }
    fn to_display(&self) -> String {
        format_rational(self)
    }
}

impl Scalar for Cyclo7 {
    fn zero() -> Self {
        Cyclo7::zero()
    }
    fn one() -> Self {
        Cyclo7::one()
    }
    fn is_zero(&self) -> bool {
        Cyclo7::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Option<Self> {
        Cyclo7::inv(self)
    }
    fn from_int(n: i64) -> Self {
        Cyclo7::from_rational(crate::exactnum::rat_int(n))
    }
    fn to_display(&self) -> String {
        format!("{}", self)
    }
}

/// Pivot scan order for elimination. Two orders must give the same rank, which
/// the tests use as a self-check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    Forward,
    Reverse,
}

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat<S> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out: Mat<S> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(rhs.get(i, j)))
    }

    pub fn sub(&self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(rhs.get(i, j)))
    }

    pub fn scale(&self, s: &S) -> Mat<S> {
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mul(s))
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() && !self.get(i, j).is_zero() {
                        acc = acc.add(&self.get(i, j).mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product with first-factor-major index convention:
    /// entry ((i,r),(j,c)) at (i*rhs.rows + r, j*rhs.cols + c).
    pub fn kron(&self, rhs: &Mat<S>) -> Mat<S> {
        let mut out = Mat::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for r in 0..rhs.rows {
                    for c in 0..rhs.cols {
                        let b = rhs.get(r, c);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * rhs.rows + r, j * rhs.cols + c, a.mul(b));
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form; returns (rref, pivot column indices).
    pub fn rref(&self, order: PivotOrder) -> (Mat<S>, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let found = match order {
                PivotOrder::Forward => (r..a.rows).find(|&i| !a.get(i, c).is_zero()),
                PivotOrder::Reverse => (r..a.rows).rev().find(|&i| !a.get(i, c).is_zero()),
            };
            let Some(p) = found else { continue };
            for j in 0..a.cols {
                let t = a.get(r, j).clone();
                a.set(r, j, a.get(p, j).clone());
                a.set(p, j, t);
            }
            let pv = a.get(r, c).inv().expect("nonzero pivot");
            for j in 0..a.cols {
                let v = a.get(r, j).mul(&pv);
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i != r && !a.get(i, c).is_zero() {
                    let f = a.get(i, c).clone();
                    for j in 0..a.cols {
                        let v = a.get(i, j).sub(&f.mul(a.get(r, j)));
                        a.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref(PivotOrder::Forward).1.len()
    }

    pub fn rank_with_order(&self, order: PivotOrder) -> usize {
        self.rref(order).1.len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref(PivotOrder::Forward);
        let pivset: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut out = Vec::new();
        for fc in 0..self.cols {
            if pivset.contains(&fc) {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[fc] = S::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = r.get(i, fc).neg();
            }
            out.push(v);
        }
        out
    }

    /// Basis of the column space: the original columns at pivot positions.
    pub fn image_basis(&self) -> Vec<Vec<S>> {
        let (_, pivots) = self.rref(PivotOrder::Forward);
        pivots
            .iter()
            .map(|&c| (0..self.rows).map(|i| self.get(i, c).clone()).collect())
            .collect()
    }

    /// Solve `self * x = b` (any shape); `None` when inconsistent.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref(PivotOrder::Forward);
        // inconsistent iff a pivot lies in the augmented column
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat<S>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, S::one());
        }
        let (r, pivots) = aug.rref(PivotOrder::Forward);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Determinant by fraction-free-ish elimination (field division is exact).
    pub fn det(&self) -> S {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
                return S::zero();
            };
            if p != c {
                for j in 0..n {
                    let t = a.get(c, j).clone();
                    a.set(c, j, a.get(p, j).clone());
                    a.set(p, j, t);
                }
                det = det.neg();
            }
            let pv = a.get(c, c).clone();
            det = det.mul(&pv);
            let pinv = pv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).mul(&pinv);
                for j in c..n {
                    let v = a.get(i, j).sub(&f.mul(a.get(c, j)));
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    /// The matrix as rows of display strings (debug / JSON dumps).
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_display()).collect())
            .collect()
    }
}

impl<S: fmt::Debug> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:?}", self.data[i * self.cols + j]))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A finite-dimensional space with an ordered basis of distinct labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasedSpace {
    pub labels: Vec<String>,
}

impl BasedSpace {
    pub fn new(labels: Vec<String>) -> Self {
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            assert!(seen.insert(l.clone()), "duplicate basis label {l}");
        }
        BasedSpace { labels }
    }

    pub fn with_prefix(prefix: &str, dim: usize) -> Self {
        BasedSpace::new((0..dim).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// An exact matrix between two based spaces (codomain-dim x domain-dim;
/// columns are images of domain basis vectors).
#[derive(Clone, Debug, PartialEq)]
pub struct LinMap<S> {
    pub domain: BasedSpace,
    pub codomain: BasedSpace,
    pub mat: Mat<S>,
}

impl<S: Scalar> LinMap<S> {
    pub fn new(domain: BasedSpace, codomain: BasedSpace, mat: Mat<S>) -> Self {
        assert_eq!(mat.rows(), codomain.dim(), "codomain dimension mismatch");
        assert_eq!(mat.cols(), domain.dim(), "domain dimension mismatch");
        LinMap { domain, codomain, mat }
    }

    pub fn compose(&self, inner: &LinMap<S>) -> LinMap<S> {
        assert_eq!(inner.codomain, self.domain, "composition space mismatch");
        LinMap::new(inner.domain.clone(), self.codomain.clone(), self.mat.mul(&inner.mat))
    }

    /// Rank together with explicit kernel and image bases; the bases verify by
    /// multiplication (kernel vectors map to zero, image vectors are hit).
    pub fn exact_rank(&self) -> RankData<S> {
        let rank = self.mat.rank();
        RankData {
            rank,
            nullity: self.mat.cols() - rank,
            kernel: self.mat.kernel_basis(),
            image: self.mat.image_basis(),
        }
    }

    /// Debug dump as a JSON matrix of scalar strings.
    pub fn dump_json(&self) -> serde_json::Value {
        serde_json::json!({
            "domain": self.domain.labels,
            "codomain": self.codomain.labels,
            "matrix": self.mat.to_string_rows(),
        })
    }
}

pub struct RankData<S> {
    pub rank: usize,
    pub nullity: usize,
    pub kernel: Vec<Vec<S>>,
    pub image: Vec<Vec<S>>,
}

// ---------------------------------------------------------------------------
// bases of symmetric and exterior powers

/// Index multisets of size k over 0..n, ascending lexicographic.
pub fn sym_multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k - 1, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Strictly increasing index k-subsets of 0..n, lexicographic.
pub fn ext_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k {
                break;
            }
            cur.push(i);
            rec(n, k - 1, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn sym_label(labels: &[String], m: &[usize]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < m.len() {
        let j = m[i..].iter().take_while(|&&x| x == m[i]).count();
        if j == 1 {
            parts.push(labels[m[i]].clone());
        } else {
            parts.push(format!("{}^{}", labels[m[i]], j));
        }
        i += j;
    }
    parts.join("*")
}

/// Basis of monomials of degree k, ordered by ascending lexicographic index
/// multiset; dim C(n+k-1, k).
pub fn sym_power(space: &BasedSpace, k: usize) -> BasedSpace {
    assert!(k >= 1, "sym_power requires k >= 1");
    let labels = sym_multisets(space.dim(), k)
        .iter()
        .map(|m| sym_label(&space.labels, m))
        .collect();
    BasedSpace::new(labels)
}

/// Basis of sorted k-subsets; dim C(n, k). Errors when k exceeds the dimension.
pub fn ext_power(space: &BasedSpace, k: usize) -> Result<BasedSpace> {
    assert!(k >= 1, "ext_power requires k >= 1");
    if k > space.dim() {
        return Err(Error::ExteriorPowerVanishes { k, dim: space.dim() });
    }
    let labels = ext_subsets(space.dim(), k)
        .iter()
        .map(|s| {
            s.iter()
                .map(|&i| space.labels[i].clone())
                .collect::<Vec<_>>()
                .join("\u{2227}")
        })
        .collect();
    Ok(BasedSpace::new(labels))
}

pub fn tensor_space(a: &BasedSpace, b: &BasedSpace) -> BasedSpace {
    let mut labels = Vec::with_capacity(a.dim() * b.dim());
    for la in &a.labels {
        for lb in &b.labels {
            labels.push(format!("{la}\u{2297}{lb}"));
        }
    }
    BasedSpace::new(labels)
}

pub fn dual_space(a: &BasedSpace) -> BasedSpace {
    BasedSpace::new(a.labels.iter().map(|l| format!("{l}*")).collect())
}

// ---------------------------------------------------------------------------
// induced maps

/// Matrix of S^k(g) on the multiset basis (columns = images of monomials).
pub fn sym_matrix<S: Scalar>(g: &Mat<S>, k: usize) -> Mat<S> {
    let n = g.rows();
    assert_eq!(n, g.cols());
    let basis = sym_multisets(n, k);
    let index: std::collections::HashMap<Vec<usize>, usize> =
        basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let dim = basis.len();
    let mut out = Mat::zeros(dim, dim);
    for (col, m) in basis.iter().enumerate() {
        // expand the product of images of the factors
        let mut terms: std::collections::HashMap<Vec<usize>, S> = std::collections::HashMap::new();
        terms.insert(Vec::new(), S::one());
        for &l in m {
            let mut next: std::collections::HashMap<Vec<usize>, S> = std::collections::HashMap::new();
            for (mono, coeff) in &terms {
                for i in 0..n {
                    let gi = g.get(i, l);
                    if gi.is_zero() {
                        continue;
                    }
                    let mut nm = mono.clone();
                    nm.push(i);
                    nm.sort_unstable();
                    let v = coeff.mul(gi);
                    next.entry(nm)
                        .and_modify(|e| *e = e.add(&v))
                        .or_insert(v);
                }
            }
            terms = next;
        }
        for (mono, coeff) in terms {
            out.set(index[&mono], col, coeff);
        }
    }
    out
}

/// Matrix of Lambda^k(g) on the subset basis: k x k minors.
pub fn ext_matrix<S: Scalar>(g: &Mat<S>, k: usize) -> Mat<S> {
    let n = g.rows();
    assert_eq!(n, g.cols());
    let basis = ext_subsets(n, k);
    let dim = basis.len();
    let mut out = Mat::zeros(dim, dim);
    for (col, s) in basis.iter().enumerate() {
        for (row, t) in basis.iter().enumerate() {
            let minor = Mat::from_fn(k, k, |i, j| g.get(t[i], s[j]).clone());
            out.set(row, col, minor.det());
        }
    }
    out
}

/// Functorial constructions on an invertible map.
#[derive(Clone, Copy, Debug)]
pub enum Construction {
    Sym(usize),
    Ext(usize),
    Dual,
    /// g (x) g on W (x) W.
    TensorSquare,
}

/// Induced map of an invertible `g` under the given construction. Satisfies
/// induced(gh) = induced(g) * induced(h) and induced(id) = id.
pub fn induced_map<S: Scalar>(g: &LinMap<S>, construction: Construction) -> Result<LinMap<S>> {
    assert_eq!(g.domain, g.codomain, "induced maps need an endomorphism");
    let inv = g.mat.inverse().ok_or(Error::SingularMatrix)?;
    let space = &g.domain;
    Ok(match construction {
        Construction::Sym(k) => {
            let s = sym_power(space, k);
            LinMap::new(s.clone(), s, sym_matrix(&g.mat, k))
        }
        Construction::Ext(k) => {
            let s = ext_power(space, k)?;
            LinMap::new(s.clone(), s, ext_matrix(&g.mat, k))
        }
        Construction::Dual => {
            let s = dual_space(space);
            LinMap::new(s.clone(), s, inv.transpose())
        }
        Construction::TensorSquare => {
            let s = tensor_space(space, space);
            LinMap::new(s.clone(), s, g.mat.kron(&g.mat))
        }
    })
}

// ---------------------------------------------------------------------------
// quotients

/// A quotient of `ambient` by the column span of `relations`, presented on the
/// complement basis chosen by greedy pivoting on the echelon form of the
/// relation matrix.
#[derive(Clone, Debug)]
pub struct QuotientSpace<S> {
    pub ambient: BasedSpace,
    pub relations: Mat<S>,
    /// Ambient label indices whose classes form the quotient basis.
    pub complement: Vec<usize>,
    proj: Mat<S>,
    incl: Mat<S>,
}

impl<S: Scalar> QuotientSpace<S> {
    pub fn new(ambient: BasedSpace, relations: Mat<S>) -> Self {
        let n = ambient.dim();
        assert_eq!(relations.rows(), n, "relations live in the ambient space");
        // row-reduce the transpose: pivot coordinates index the relation span
        let (rt, pivots) = relations.transpose().rref(PivotOrder::Forward);
        let pivset: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let complement: Vec<usize> = (0..n).filter(|c| !pivset.contains(c)).collect();
        let q = complement.len();
        let mut proj = Mat::zeros(q, n);
        let comp_pos: std::collections::HashMap<usize, usize> =
            complement.iter().copied().enumerate().map(|(i, c)| (c, i)).collect();
        for (i, &c) in complement.iter().enumerate() {
            proj.set(i, c, S::one());
        }
        // e_p = (reduced relation with pivot p) - sum of complement coords
        for (j, &p) in pivots.iter().enumerate() {
            for &c in &complement {
                let v = rt.get(j, c);
                if !v.is_zero() {
                    proj.set(comp_pos[&c], p, v.neg());
                }
            }
        }
        let mut incl = Mat::zeros(n, q);
        for (i, &c) in complement.iter().enumerate() {
            incl.set(c, i, S::one());
        }
        QuotientSpace {
            ambient,
            relations,
            complement,
            proj,
            incl,
        }
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// q x n matrix of the projection ambient -> quotient.
    pub fn projection(&self) -> &Mat<S> {
        &self.proj
    }

    /// n x q matrix including the chosen complement back into the ambient.
    pub fn inclusion(&self) -> &Mat<S> {
        &self.incl
    }

    pub fn quotient_space(&self) -> BasedSpace {
        BasedSpace::new(
            self.complement
                .iter()
                .map(|&c| format!("[{}]", self.ambient.labels[c]))
                .collect(),
        )
    }
}
