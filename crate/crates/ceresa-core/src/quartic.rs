//! Ternary quartics and their associated bilinear forms on S^2 A.
//!
//! A quartic is stored through the 15 parameters of the convention
//!
//!   f = sum_j a_j x_j^4 + 4 sum_{j!=k} b_{jk} x_j x_k^3
//!       + 6 sum_{j<k} c_{jk} x_j^2 x_k^2 + 12 sum_j d_j x_j^2 x_k x_l,
//!
//! with {k, l} the complement of j in the last sum. The form Q_C is the
//! 6x6 matrix of f(uv)/24 under the sum-over-permutations pairing of S^4 B
//! with S^4 A; R_C comes from a degree-two element of S^2 A through the
//! contraction-and-antisymmetrize composite; D_C is their sum.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, parse_rational, rat, Rational};
use crate::forms::{pair_index, SymmetricForm6, S2_PAIRS};
use crate::ggcomplex::split_form;
use crate::multilinear::{sym_multisets, Mat, Scalar};

fn rzero() -> Rational {
    Scalar::zero()
}

/// The 15 coefficients (a_j, b_{jk}, c_{jk}, d_j) of a ternary quartic.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarticCoefficients {
    /// a_j, the coefficient of x_j^4.
    pub a: [Rational; 3],
    /// b[j][k] for j != k, the coefficient of x_j x_k^3 divided by 4;
    /// the diagonal is unused and kept at zero.
    pub b: [[Rational; 3]; 3],
    /// c_{01}, c_{02}, c_{12}: coefficients of x_j^2 x_k^2 divided by 6.
    pub c: [Rational; 3],
    /// d_j, the coefficient of x_j^2 x_k x_l divided by 12.
    pub d: [Rational; 3],
}

fn c_slot(j: usize, k: usize) -> usize {
    match if j < k { (j, k) } else { (k, j) } {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 2) => 2,
        _ => panic!("bad c index ({j},{k})"),
    }
}

impl QuarticCoefficients {
    pub fn zero() -> Self {
        QuarticCoefficients {
            a: std::array::from_fn(|_| rzero()),
            b: std::array::from_fn(|_| std::array::from_fn(|_| rzero())),
            c: std::array::from_fn(|_| rzero()),
            d: std::array::from_fn(|_| rzero()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
            && self.b.iter().flatten().all(|x| x.is_zero())
            && self.c.iter().all(|x| x.is_zero())
            && self.d.iter().all(|x| x.is_zero())
    }

    pub fn c_at(&self, j: usize, k: usize) -> &Rational {
        &self.c[c_slot(j, k)]
    }

    /// The Klein quartic x0^3 x1 + x1^3 x2 + x2^3 x0.
    pub fn klein() -> Self {
        let mut q = QuarticCoefficients::zero();
        q.b[1][0] = rat(1, 4);
        q.b[2][1] = rat(1, 4);
        q.b[0][2] = rat(1, 4);
        q
    }

    /// The Fermat quartic x0^4 + x1^4 + x2^4.
    pub fn fermat() -> Self {
        let mut q = QuarticCoefficients::zero();
        q.a = std::array::from_fn(|_| <Rational as Scalar>::one());
        q
    }

    /// Monomial coefficients keyed by exponent vector.
    pub fn to_monomials(&self) -> BTreeMap<[u32; 3], Rational> {
        let mut out = BTreeMap::new();
        let mut put = |e: [u32; 3], v: Rational| {
            if !v.is_zero() {
                out.insert(e, v);
            }
        };
        for j in 0..3 {
            let mut e = [0u32; 3];
            e[j] = 4;
            put(e, self.a[j].clone());
        }
        for j in 0..3 {
            for k in 0..3 {
                if j == k {
                    continue;
                }
                let mut e = [0u32; 3];
                e[j] = 1;
                e[k] = 3;
                put(e, self.b[j][k].mul(&rat(4, 1)));
            }
        }
        for j in 0..3 {
            for k in j + 1..3 {
                let mut e = [0u32; 3];
                e[j] = 2;
                e[k] = 2;
                put(e, self.c_at(j, k).mul(&rat(6, 1)));
            }
        }
        for j in 0..3 {
            let mut e = [1u32; 3];
            e[j] = 2;
            put(e, self.d[j].mul(&rat(12, 1)));
        }
        out
    }

    /// Coordinates over the 15 degree-four monomials in ascending
    /// lexicographic multiset order (the `sym_multisets(3, 4)` basis).
    pub fn to_s4_vector(&self) -> Vec<Rational> {
        let basis = sym_multisets(3, 4);
        let monos = self.to_monomials();
        basis
            .iter()
            .map(|m| {
                let mut e = [0u32; 3];
                for &i in m {
                    e[i] += 1;
                }
                monos.get(&e).cloned().unwrap_or_else(rzero)
            })
            .collect()
    }

    pub fn from_monomials(monos: &BTreeMap<[u32; 3], Rational>) -> Result<Self> {
        let mut q = QuarticCoefficients::zero();
        for (e, v) in monos {
            if e.iter().sum::<u32>() != 4 {
                return Err(Error::NotQuartic(*e));
            }
            let mut sorted: Vec<(u32, usize)> =
                e.iter().enumerate().map(|(i, &x)| (x, i)).collect();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            match (sorted[0].0, sorted[1].0, sorted[2].0) {
                (4, 0, 0) => q.a[sorted[0].1] = v.clone(),
                (3, 1, 0) => q.b[sorted[1].1][sorted[0].1] = v.mul(&rat(1, 4)),
                (2, 2, 0) => q.c[c_slot(sorted[0].1, sorted[1].1)] = v.mul(&rat(1, 6)),
                (2, 1, 1) => q.d[sorted[0].1] = v.mul(&rat(1, 12)),
                _ => unreachable!("partitions of 4 into at most 3 parts"),
            }
        }
        Ok(q)
    }
}

/// JSON shape: {"monomials": {"i,j,k": "p/q", ...}} with exponents of
/// x0, x1, x2 summing to 4.
#[derive(Serialize, Deserialize)]
pub struct QuarticJson {
    pub monomials: BTreeMap<String, String>,
}

/// Parse a monomial map into quartic coefficients, dividing by 4, 6, 12 per
/// the coefficient convention. Rejects non-quartic exponent vectors and
/// malformed rationals.
pub fn parse_quartic(monomials: &BTreeMap<String, String>) -> Result<QuarticCoefficients> {
    let mut map = BTreeMap::new();
    for (key, val) in monomials {
        let parts: Vec<&str> = key.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::BadMonomialKey(key.clone()));
        }
        let mut e = [0u32; 3];
        for (i, p) in parts.iter().enumerate() {
            e[i] = p.parse().map_err(|_| Error::BadMonomialKey(key.clone()))?;
        }
        let v = parse_rational(val)?;
        if !v.is_zero() {
            let entry = map.entry(e).or_insert_with(rzero);
            *entry = entry.add(&v);
        }
    }
    QuarticCoefficients::from_monomials(&map)
}

pub fn quartic_to_json(q: &QuarticCoefficients) -> QuarticJson {
    QuarticJson {
        monomials: q
            .to_monomials()
            .iter()
            .map(|(e, v)| (format!("{},{},{}", e[0], e[1], e[2]), format_rational(v)))
            .collect(),
    }
}

/// The matrix of Q_C on the basis e0^2, e1^2, e2^2, e0e1, e0e2, e1e2, laid
/// out entry by entry from the coefficient convention. Cross-validated in
/// tests against the pairing formula f(uv)/24.
pub fn qc_matrix(f: &QuarticCoefficients) -> SymmetricForm6 {
    let g = |u: usize, v: usize| -> Rational {
        let (p, q) = (S2_PAIRS[u], S2_PAIRS[v]);
        // entry is f(e_p e_q)/24, which depends only on the multiset
        let mut e = [0u32; 3];
        for i in [p.0, p.1, q.0, q.1] {
            e[i] += 1;
        }
        let mut sorted: Vec<(u32, usize)> = e.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        match (sorted[0].0, sorted[1].0, sorted[2].0) {
            (4, 0, 0) => f.a[sorted[0].1].clone(),
            (3, 1, 0) => f.b[sorted[1].1][sorted[0].1].clone(),
            (2, 2, 0) => f.c_at(sorted[0].1, sorted[1].1).clone(),
            (2, 1, 1) => f.d[sorted[0].1].clone(),
            _ => unreachable!(),
        }
    };
    SymmetricForm6::new_unchecked(Mat::from_fn(6, 6, g))
}

/// A degree-two element h = sum p_j e_j^2 + 2 sum_{j<k} q_{jk} e_j e_k.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeTwoElement {
    pub p: [Rational; 3],
    /// q_{01}, q_{02}, q_{12}
    pub q: [Rational; 3],
}

impl DegreeTwoElement {
    pub fn zero() -> Self {
        DegreeTwoElement {
            p: std::array::from_fn(|_| rzero()),
            q: std::array::from_fn(|_| rzero()),
        }
    }

    pub fn e_squared(j: usize) -> Self {
        let mut h = DegreeTwoElement::zero();
        h.p[j] = <Rational as Scalar>::one();
        h
    }

    pub fn is_zero(&self) -> bool {
        self.p.iter().all(|x| x.is_zero()) && self.q.iter().all(|x| x.is_zero())
    }

    /// Coordinates over the squares-first S^2 A basis (mixed basis vectors
    /// carry the factor 2 from the convention above).
    pub fn to_s2_vector(&self) -> [Rational; 6] {
        let two = rat(2, 1);
        [
            self.p[0].clone(),
            self.p[1].clone(),
            self.p[2].clone(),
            self.q[0].mul(&two),
            self.q[1].mul(&two),
            self.q[2].mul(&two),
        ]
    }
}

/// JSON shape: {"p": ["..",..], "q": ["..",..]} with q = (q01, q02, q12).
#[derive(Serialize, Deserialize)]
pub struct DegreeTwoJson {
    pub p: [String; 3],
    pub q: [String; 3],
}

pub fn parse_degree_two(j: &DegreeTwoJson) -> Result<DegreeTwoElement> {
    let mut h = DegreeTwoElement::zero();
    for i in 0..3 {
        h.p[i] = parse_rational(&j.p[i])?;
        h.q[i] = parse_rational(&j.q[i])?;
    }
    Ok(h)
}

/// Image of the basis vector e_a e_b under the defining composite
/// S^2 A -> S^2 Lambda^2 B -> (S^2 B)^(x2), as a 6x6 coefficient array over
/// (S^2 B basis) x (S^2 B basis).
fn rc_tensor_of_basis(a: usize, b: usize) -> Mat<Rational> {
    // alpha: e_i -> x_{i+1} ^ x_{i+2} (indices mod 3), i.e. contraction with
    // the dual volume form
    let alpha = |i: usize| -> ((usize, usize), i64) {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        if j < k {
            ((j, k), 1)
        } else {
            ((k, j), -1)
        }
    };
    let ((b1, b2), sa) = alpha(a);
    let ((b1p, b2p), sb) = alpha(b);
    let coeff = Rational::from_int(sa * sb);
    let mut z: Mat<Rational> = Mat::zeros(6, 6);
    // (b1^b2).(b1'^b2') -> b1b1'(x)b2b2' + b2b2'(x)b1b1' - b1b2'(x)b2b1' - b2b1'(x)b1b2'
    let terms = [
        (pair_index(b1, b1p), pair_index(b2, b2p), 1i64),
        (pair_index(b2, b2p), pair_index(b1, b1p), 1),
        (pair_index(b1, b2p), pair_index(b2, b1p), -1),
        (pair_index(b2, b1p), pair_index(b1, b2p), -1),
    ];
    for (s, t, sign) in terms {
        let v = z.get(s, t).add(&coeff.mul(&Rational::from_int(sign)));
        z.set(s, t, v);
    }
    z
}

/// The matrix of R_C for the degree-two element h, computed from the
/// defining composite with the sum-over-permutations pairing on each slot.
pub fn rc_matrix(h: &DegreeTwoElement) -> SymmetricForm6 {
    let pairing = [
        rat(2, 1),
        rat(2, 1),
        rat(2, 1),
        rat(1, 1),
        rat(1, 1),
        rat(1, 1),
    ];
    let coords = h.to_s2_vector();
    let mut z: Mat<Rational> = Mat::zeros(6, 6);
    for (u, &(a, b)) in S2_PAIRS.iter().enumerate() {
        if coords[u].is_zero() {
            continue;
        }
        let zu = rc_tensor_of_basis(a, b);
        z = z.add(&zu.scale(&coords[u]));
    }
    let m = Mat::from_fn(6, 6, |u, v| pairing[u].mul(z.get(u, v)).mul(&pairing[v]));
    SymmetricForm6::new(m).expect("the composite lands in symmetric tensors")
}

/// D_C = Q_C + R_C with its exact rank and determinant.
pub fn dc_matrix(f: &QuarticCoefficients, h: &DegreeTwoElement) -> SymmetricForm6 {
    qc_matrix(f).add(&rc_matrix(h))
}

/// Recover the quartic from a degree-four form: the inverse of `qc_matrix`.
/// Errors unless the form is multiset-determined (zero R-component).
pub fn quartic_from_form(q: &SymmetricForm6) -> Result<QuarticCoefficients> {
    let (s4, rest) = split_form(q)?;
    if !rest.is_zero() || &s4 != q {
        return Err(Error::NonzeroRComponent);
    }
    let mut f = QuarticCoefficients::zero();
    for j in 0..3 {
        f.a[j] = q.at((j, j), (j, j)).clone();
        let (k, l) = (((j + 1) % 3), ((j + 2) % 3));
        f.d[j] = q.at((j, j), (k, l)).clone();
    }
    for j in 0..3 {
        for k in 0..3 {
            if j != k {
                // b_{jk} multiplies x_j x_k^3 and equals Q(e_k^2, e_k e_j)
                f.b[j][k] = q.at((k, k), (k, j)).clone();
            }
        }
    }
    f.c[0] = q.at((0, 0), (1, 1)).clone();
    f.c[1] = q.at((0, 0), (2, 2)).clone();
    f.c[2] = q.at((1, 1), (2, 2)).clone();
    Ok(f)
}

/// Substitute x_i -> sum_j g[i][j] x_j in the quartic (the coordinate action
/// of g on points of P(A)).
pub fn substitute(f: &QuarticCoefficients, g: &Mat<Rational>) -> QuarticCoefficients {
    assert_eq!((g.rows(), g.cols()), (3, 3));
    let mut out: BTreeMap<[u32; 3], Rational> = BTreeMap::new();
    for (e, coeff) in f.to_monomials() {
        // expand prod_i (sum_j g[i][j] x_j)^{e_i}
        let mut terms: BTreeMap<[u32; 3], Rational> = BTreeMap::new();
        terms.insert([0, 0, 0], <Rational as Scalar>::one());
        for i in 0..3 {
            for _ in 0..e[i] {
                let mut next: BTreeMap<[u32; 3], Rational> = BTreeMap::new();
                for (mono, c) in &terms {
                    for j in 0..3 {
                        let gij = g.get(i, j);
                        if gij.is_zero() {
                            continue;
                        }
                        let mut nm = *mono;
                        nm[j] += 1;
                        let v = c.mul(gij);
                        let entry = next.entry(nm).or_insert_with(rzero);
                        *entry = entry.add(&v);
                    }
                }
                terms = next;
            }
        }
        for (mono, c) in terms {
            let v = coeff.mul(&c);
            let entry = out.entry(mono).or_insert_with(rzero);
            *entry = entry.add(&v);
        }
    }
    out.retain(|_, v| !v.is_zero());
    QuarticCoefficients::from_monomials(&out).expect("substitution preserves degree")
}

/// Change of coordinates by an invertible g: returns the substituted quartic
/// together with the transported form (S^2 g)^T . Q . (S^2 g) / det(g), which
/// keeps the det A twist explicit. Rank is invariant; for det(g) = 1 the
/// determinant is too.
pub fn change_coordinates(
    f: &QuarticCoefficients,
    g: &Mat<Rational>,
) -> Result<(QuarticCoefficients, SymmetricForm6)> {
    let det = g.det();
    let det_inv = det.inv().ok_or(Error::SingularMatrix)?;
    let fg = substitute(f, g);
    let s2 = crate::ggcomplex::sym2_squares_first(g);
    let q = qc_matrix(f);
    let transported = SymmetricForm6::new_unchecked(
        s2.transpose().mul(q.matrix()).mul(&s2).scale(&det_inv),
    );
    Ok((fg, transported))
}
