//! The genus-3 complexes Gr_F^p(V (x) Lambda^. S^2 B) for p = 0, 1, 2, where
//! H = A (+) B carries the symplectic element theta = sum_i e_i ^ x_i and
//! V = Lambda^3 H / theta ^ H.
//!
//! Letters 0..2 stand for e0, e1, e2 (a basis of A) and 3..5 for x0, x1, x2
//! (the dual basis of B). The derivation extension of
//! nabla(x_k) = sum_i e_i (x) x_i x_k replaces one x-letter of a wedge at a
//! time, the new S^2 B slot written on the right; the second differential
//! wedges the two S^2 B slots. Volume forms vol_A = e0^e1^e2 and its dual
//! vol_B trivialize det A and det B wherever they appear.

use crate::error::{Error, Result};
use crate::exactnum::{rat, Rational};
use crate::forms::{pair_index, SymmetricForm6, S2_PAIRS};
use crate::multilinear::{
    ext_subsets, BasedSpace, LinMap, Mat, QuotientSpace, Scalar,
};

const DIM_ABB: usize = 9; // A (x) Lambda^2 B
const DIM_AAB: usize = 9; // Lambda^2 A (x) B
const DIM_L2S2: usize = 15; // Lambda^2 S^2 B

fn one() -> Rational {
    Scalar::one()
}

/// Sort a letter tuple, returning the permutation sign, or `None` on repeats.
fn sort_sign(mut w: [usize; 3]) -> Option<([usize; 3], i64)> {
    let mut sign = 1i64;
    for i in 0..3 {
        for j in 0..2 - i {
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            } else if w[j] == w[j + 1] {
                return None;
            }
        }
    }
    if w[0] == w[1] || w[1] == w[2] {
        return None;
    }
    Some((w, sign))
}

/// Sorted wedge triples with `na` letters from A and `nb` from B,
/// lexicographically ordered.
fn wedge_basis(na: usize, nb: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for ea in ext_subsets(3, na) {
        for xb in ext_subsets(3, nb) {
            let mut w: Vec<usize> = ea.iter().copied().chain(xb.iter().map(|&b| b + 3)).collect();
            w.sort_unstable();
            out.push([w[0], w[1], w[2]]);
        }
    }
    out.sort_unstable();
    out
}

fn wedge_index(basis: &[[usize; 3]], w: &[usize; 3]) -> Option<usize> {
    basis.binary_search(w).ok()
}

/// All single-replacement terms of the derivation extension of nabla on a
/// wedge: (new wedge, S^2 B monomial index, sign).
fn nabla_terms(w: &[usize; 3]) -> Vec<([usize; 3], usize, i64)> {
    let mut out = Vec::new();
    for pos in 0..3 {
        let l = w[pos];
        if l < 3 {
            continue;
        }
        let k = l - 3;
        for m in 0..3 {
            let mut repl = *w;
            repl[pos] = m;
            if let Some((sorted, sign)) = sort_sign(repl) {
                out.push((sorted, pair_index(m, k), sign));
            }
        }
    }
    out
}

/// theta ^ (letter) inside Lambda^3 H, as (wedge, coefficient) pairs.
fn theta_wedge(letter: usize) -> Vec<([usize; 3], Rational)> {
    let mut acc: std::collections::BTreeMap<[usize; 3], Rational> = Default::default();
    for i in 0..3 {
        if let Some((w, sign)) = sort_sign([i, 3 + i, letter]) {
            let e = acc.entry(w).or_insert_with(<Rational as Scalar>::zero);
            *e = e.add(&Rational::from_int(sign));
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// One of the three complexes, with exact differentials. Degrees run 0..2 and
/// the degree-j term is Gr_F^{p-j} V (x) Lambda^j S^2 B.
pub struct GGComplex {
    pub p: u8,
    pub term_dims: [usize; 3],
    /// term0 -> term1
    pub d0: Mat<Rational>,
    /// term1 -> term2
    pub d1: Mat<Rational>,
}

impl GGComplex {
    /// Ranks of the two differentials.
    pub fn diff_ranks(&self) -> (usize, usize) {
        (self.d0.rank(), self.d1.rank())
    }

    /// (h^0, h^1, h^2) by exact rank-nullity.
    pub fn homology_dims(&self) -> (usize, usize, usize) {
        let r0 = self.d0.rank();
        let r1 = self.d1.rank();
        let k1 = self.term_dims[1] - r1;
        (self.term_dims[0] - r0, k1 - r0, self.term_dims[2] - r1)
    }

    /// d1 . d0 == 0, verified exactly.
    pub fn d_squared_is_zero(&self) -> bool {
        if self.term_dims[0] == 0 {
            return true;
        }
        self.d1.mul(&self.d0).is_zero()
    }
}

/// Explicit bases for 1-cocycles and 1-coboundaries of the p = 0 complex.
pub struct CocycleData {
    pub cocycles: Vec<Vec<Rational>>,
    pub coboundaries: Vec<Vec<Rational>>,
}

/// Result of reading a degree-1 element as a bilinear form on S^2 A; the
/// matrix is symmetric exactly when the element is a cocycle.
pub struct FormFromCocycle {
    pub matrix: Mat<Rational>,
    pub symmetric: bool,
}

impl FormFromCocycle {
    pub fn into_form(self) -> Result<SymmetricForm6> {
        if self.symmetric {
            Ok(SymmetricForm6::new_unchecked(self.matrix))
        } else {
            Err(Error::AsymmetricForm)
        }
    }
}

/// Fixed genus-3 context: bases of A and B, the symplectic element, the
/// quotient presentations of Gr_F^{-1} V and Gr_F^0 V, and the ambient
/// differential data.
pub struct GGContext {
    pub space_a: BasedSpace,
    pub space_b: BasedSpace,
    basis_abb: Vec<[usize; 3]>,
    basis_aab: Vec<[usize; 3]>,
    /// (A (x) Lambda^2 B) / theta.B
    v0: QuotientSpace<Rational>,
    /// (Lambda^2 A (x) B) / theta.A
    v1: QuotientSpace<Rational>,
    /// W_ABB -> W_AAB (x) S^2 B, 54 x 9
    nabla_abb: Mat<Rational>,
    /// W_AAB -> Lambda^3 A (x) S^2 B, 6 x 9 (vol_A trivialized)
    nabla_aab: Mat<Rational>,
    /// Lambda^3 B -> W_ABB (x) S^2 B, 54 x 1
    nabla_bbb: Mat<Rational>,
    /// W_AAB -> S^2 B (x) det A: contraction with vol_A then symmetrization
    phi: Mat<Rational>,
    /// W_ABB -> S^2 A (x) det B
    psi: Mat<Rational>,
}

fn eps_sign(i: usize, j: usize, l: usize) -> i64 {
    // sign of the permutation (i, j, l) of (0, 1, 2)
    match (i, j, l) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

fn third(i: usize, j: usize) -> usize {
    3 - i - j
}

impl Default for GGContext {
    fn default() -> Self {
        Self::new()
    }
}

impl GGContext {
    pub fn new() -> Self {
        let basis_abb = wedge_basis(1, 2);
        let basis_aab = wedge_basis(2, 1);
        debug_assert_eq!(basis_abb.len(), DIM_ABB);
        debug_assert_eq!(basis_aab.len(), DIM_AAB);

        // theta ^ x_k spans the relations of V0, theta ^ e_k those of V1
        let mut rel_b: Mat<Rational> = Mat::zeros(DIM_ABB, 3);
        for k in 0..3 {
            for (w, c) in theta_wedge(3 + k) {
                let i = wedge_index(&basis_abb, &w).expect("theta^x_k lies in A(x)L2B");
                rel_b.set(i, k, c);
            }
        }
        let mut rel_a: Mat<Rational> = Mat::zeros(DIM_AAB, 3);
        for k in 0..3 {
            for (w, c) in theta_wedge(k) {
                let i = wedge_index(&basis_aab, &w).expect("theta^e_k lies in L2A(x)B");
                rel_a.set(i, k, c);
            }
        }

        let abb_labels: Vec<String> = basis_abb.iter().map(wedge_label).collect();
        let aab_labels: Vec<String> = basis_aab.iter().map(wedge_label).collect();
        let v0 = QuotientSpace::new(BasedSpace::new(abb_labels), rel_b);
        let v1 = QuotientSpace::new(BasedSpace::new(aab_labels), rel_a);
        assert_eq!(v0.dim(), 6);
        assert_eq!(v1.dim(), 6);

        // ambient nabla matrices
        let mut nabla_abb: Mat<Rational> = Mat::zeros(DIM_AAB * 6, DIM_ABB);
        for (j, w) in basis_abb.iter().enumerate() {
            for (nw, s, sign) in nabla_terms(w) {
                let i = wedge_index(&basis_aab, &nw).expect("one x replaced");
                let v = nabla_abb.get(i * 6 + s, j).add(&Rational::from_int(sign));
                nabla_abb.set(i * 6 + s, j, v);
            }
        }
        let mut nabla_aab: Mat<Rational> = Mat::zeros(6, DIM_AAB);
        for (j, w) in basis_aab.iter().enumerate() {
            for (nw, s, sign) in nabla_terms(w) {
                debug_assert_eq!(nw, [0, 1, 2]);
                let v = nabla_aab.get(s, j).add(&Rational::from_int(sign));
                nabla_aab.set(s, j, v);
            }
        }
        let mut nabla_bbb: Mat<Rational> = Mat::zeros(DIM_ABB * 6, 1);
        for (nw, s, sign) in nabla_terms(&[3, 4, 5]) {
            let i = wedge_index(&basis_abb, &nw).expect("one x replaced");
            let v = nabla_bbb.get(i * 6 + s, 0).add(&Rational::from_int(sign));
            nabla_bbb.set(i * 6 + s, 0, v);
        }

        // phi: (e_i ^ e_j) (x) x_k -> eps_{ijl} x_l x_k, l the missing index
        let mut phi: Mat<Rational> = Mat::zeros(6, DIM_AAB);
        for (col, w) in basis_aab.iter().enumerate() {
            let (i, j, k) = (w[0], w[1], w[2] - 3);
            let l = third(i, j);
            phi.set(pair_index(l, k), col, Rational::from_int(eps_sign(i, j, l)));
        }
        // psi: e_i (x) (x_j ^ x_k) -> eps_{jkl} e_i e_l
        let mut psi: Mat<Rational> = Mat::zeros(6, DIM_ABB);
        for (col, w) in basis_abb.iter().enumerate() {
            let (i, j, k) = (w[0], w[1] - 3, w[2] - 3);
            let l = third(j, k);
            psi.set(pair_index(i, l), col, Rational::from_int(eps_sign(j, k, l)));
        }

        GGContext {
            space_a: BasedSpace::new(vec!["e0".into(), "e1".into(), "e2".into()]),
            space_b: BasedSpace::new(vec!["x0".into(), "x1".into(), "x2".into()]),
            basis_abb,
            basis_aab,
            v0,
            v1,
            nabla_abb,
            nabla_aab,
            nabla_bbb,
            phi,
            psi,
        }
    }

    /// The S^2 pairing <x_s, u> on the squares-first basis: 2 on squares, 1 on mixed
    /// monomials (the sum-over-permutations normalization).
    pub fn pairing_s2(&self) -> [Rational; 6] {
        [
            rat(2, 1),
            rat(2, 1),
            rat(2, 1),
            rat(1, 1),
            rat(1, 1),
            rat(1, 1),
        ]
    }

    /// theta = sum_i e_i ^ x_i as a vector over the 15 sorted 2-subsets of the
    /// six letters.
    pub fn theta_lambda2(&self) -> Vec<Rational> {
        let basis = ext_subsets(6, 2);
        let mut v = vec![<Rational as Scalar>::zero(); 15];
        for i in 0..3 {
            let pos = basis.iter().position(|s| s == &vec![i, 3 + i]).unwrap();
            v[pos] = one();
        }
        v
    }

    /// nabla on H = A (+) B as a map to A (x) S^2 B: x_k maps to
    /// sum_i e_i (x) x_i x_k and A maps to zero. Basis order of the codomain
    /// is (e_i, S^2 B monomial) with the e-index major.
    pub fn nabla_on_h(&self) -> LinMap<Rational> {
        let h = BasedSpace::new(vec![
            "e0".into(),
            "e1".into(),
            "e2".into(),
            "x0".into(),
            "x1".into(),
            "x2".into(),
        ]);
        let cod = BasedSpace::new(
            (0..3)
                .flat_map(|i| {
                    S2_PAIRS
                        .iter()
                        .map(move |&(a, b)| format!("e{i}\u{2297}{}", s2_label(a, b)))
                })
                .collect(),
        );
        let mut m: Mat<Rational> = Mat::zeros(18, 6);
        for k in 0..3 {
            for i in 0..3 {
                m.set(i * 6 + pair_index(i, k), 3 + k, one());
            }
        }
        LinMap::new(h, cod, m)
    }

    /// The derivation extension of nabla to Lambda^2 H (15 -> 15 * 6),
    /// used to check that it annihilates theta.
    pub fn nabla_on_lambda2(&self) -> Mat<Rational> {
        let basis = ext_subsets(6, 2);
        let idx = |s: &[usize]| basis.iter().position(|t| t == s).unwrap();
        let mut m: Mat<Rational> = Mat::zeros(15 * 6, 15);
        for (j, w) in basis.iter().enumerate() {
            for pos in 0..2 {
                let l = w[pos];
                if l < 3 {
                    continue;
                }
                let k = l - 3;
                for r in 0..3 {
                    let mut nw = [w[0], w[1]];
                    nw[pos] = r;
                    if nw[0] == nw[1] {
                        continue;
                    }
                    let sign = if nw[0] < nw[1] { 1 } else { -1 };
                    nw.sort_unstable();
                    let row = idx(&nw) * 6 + pair_index(r, k);
                    let v = m.get(row, j).add(&Rational::from_int(sign));
                    m.set(row, j, v);
                }
            }
        }
        m
    }

    /// Exact check that the derivation extension kills theta, so nabla
    /// descends to V = Lambda^3 H / theta ^ H.
    pub fn nabla_annihilates_theta(&self) -> bool {
        let img = self.nabla_on_lambda2().apply(&self.theta_lambda2());
        img.iter().all(|c| c.is_zero())
    }

    /// Sorted wedge triples spanning the ambient model of A (x) Lambda^2 B.
    pub fn basis_abb(&self) -> &[[usize; 3]] {
        &self.basis_abb
    }

    /// Sorted wedge triples spanning the ambient model of Lambda^2 A (x) B.
    pub fn basis_aab(&self) -> &[[usize; 3]] {
        &self.basis_aab
    }

    /// Quotient presentation of Gr_F^0 V = (A (x) Lambda^2 B)/theta.B.
    pub fn v0(&self) -> &QuotientSpace<Rational> {
        &self.v0
    }

    /// Quotient presentation of Gr_F^{-1} V = (Lambda^2 A (x) B)/theta.A.
    pub fn v1(&self) -> &QuotientSpace<Rational> {
        &self.v1
    }

    /// Build the complex for p in {0, 1, 2}; panics on other p. The
    /// differentials are verified to compose to zero.
    pub fn build_complex(&self, p: u8) -> GGComplex {
        let cpx = match p {
            0 => {
                let d0 = self.project_v1_tensor_s2(&self.nabla_abb.mul(self.v0.inclusion()));
                let d1 = self.d1_matrix(self.v1.inclusion(), &self.nabla_aab, None);
                GGComplex {
                    p,
                    term_dims: [6, 36, 15],
                    d0,
                    d1,
                }
            }
            1 => {
                let d0 = self.project_v0_tensor_s2(&self.nabla_bbb);
                let d1 = self.d1_matrix(self.v0.inclusion(), &self.nabla_abb, Some(&self.v1));
                GGComplex {
                    p,
                    term_dims: [1, 36, 90],
                    d0,
                    d1,
                }
            }
            2 => {
                let id1 = Mat::identity(1);
                let d1 = self.d1_matrix(&id1, &self.nabla_bbb, Some(&self.v0));
                GGComplex {
                    p,
                    term_dims: [0, 6, 90],
                    d0: Mat::zeros(6, 0),
                    d1,
                }
            }
            _ => panic!("p must be 0, 1 or 2"),
        };
        assert!(cpx.d_squared_is_zero(), "differentials must compose to zero");
        cpx
    }

    fn project_v1_tensor_s2(&self, amb: &Mat<Rational>) -> Mat<Rational> {
        self.v1.projection().kron(&Mat::identity(6)).mul(amb)
    }

    fn project_v0_tensor_s2(&self, amb: &Mat<Rational>) -> Mat<Rational> {
        self.v0.projection().kron(&Mat::identity(6)).mul(amb)
    }

    /// Degree-1 differential: lift V_src (x) S^2 B to the ambient wedge model,
    /// apply nabla there, project the target factor, and wedge the new S^2 B
    /// slot with the old one (new on the left).
    fn d1_matrix(
        &self,
        incl_src: &Mat<Rational>,
        nabla_amb: &Mat<Rational>,
        target: Option<&QuotientSpace<Rational>>,
    ) -> Mat<Rational> {
        let vdim = incl_src.cols();
        let tdim = target.map_or(1, |q| q.dim());
        let l2 = ext_subsets(6, 2);
        let l2_idx = |a: usize, b: usize| -> (usize, i64) {
            debug_assert_ne!(a, b);
            let (p, q, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
            (l2.iter().position(|s| s == &vec![p, q]).unwrap(), sign)
        };
        let mut m: Mat<Rational> = Mat::zeros(tdim * DIM_L2S2, vdim * 6);
        for v in 0..vdim {
            let lift: Vec<Rational> = (0..incl_src.rows()).map(|i| incl_src.get(i, v).clone()).collect();
            let img = nabla_amb.apply(&lift); // (target_amb * 6) coords
            let amb_rows = img.len() / 6;
            for s_old in 0..6 {
                let col = v * 6 + s_old;
                for (row, c) in img.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (di, s_new) = (row / 6, row % 6);
                    if s_new == s_old {
                        continue;
                    }
                    let (l2i, sign) = l2_idx(s_new, s_old);
                    let wedge_c = if sign > 0 { c.clone() } else { c.neg() };
                    match target {
                        Some(q) => {
                            for t in 0..tdim {
                                let pc = q.projection().get(t, di);
                                if pc.is_zero() {
                                    continue;
                                }
                                let v2 = m.get(t * DIM_L2S2 + l2i, col).add(&pc.mul(&wedge_c));
                                m.set(t * DIM_L2S2 + l2i, col, v2);
                            }
                        }
                        None => {
                            debug_assert_eq!(amb_rows, 1);
                            let v2 = m.get(l2i, col).add(&wedge_c);
                            m.set(l2i, col, v2);
                        }
                    }
                }
            }
        }
        m
    }

    /// Explicit bases of 1-cocycles (dim 21) and 1-coboundaries (dim 6) of the
    /// p = 0 complex.
    pub fn cocycle_spaces(&self, cpx: &GGComplex) -> Result<CocycleData> {
        if cpx.p != 0 {
            return Err(Error::Invalid("cocycle decomposition applies to the p = 0 complex".into()));
        }
        let cocycles = cpx.d1.kernel_basis();
        let coboundaries = cpx.d0.image_basis();
        Ok(CocycleData {
            cocycles,
            coboundaries,
        })
    }

    /// The two natural isomorphisms (Lambda^2 A (x) B)/theta.A = S^2 B (x) det A
    /// and (A (x) Lambda^2 B)/theta.B = S^2 A (x) det B, with the det factors
    /// trivialized by the volume forms; both are exact rank 6.
    pub fn lemrep_isos(&self) -> (LinMap<Rational>, LinMap<Rational>) {
        let s2b = BasedSpace::new(S2_PAIRS.iter().map(|&(a, b)| s2_label_x(a, b)).collect());
        let s2a = BasedSpace::new(S2_PAIRS.iter().map(|&(a, b)| s2_label(a, b)).collect());
        let first = LinMap::new(
            self.v1.quotient_space(),
            s2b,
            self.phi.mul(self.v1.inclusion()),
        );
        let second = LinMap::new(
            self.v0.quotient_space(),
            s2a,
            self.psi.mul(self.v0.inclusion()),
        );
        (first, second)
    }

    /// The unquotiented contraction Lambda^2 A (x) B -> S^2 B (x) det A; its
    /// kernel is exactly theta.A.
    pub fn phi_ambient(&self) -> &Mat<Rational> {
        &self.phi
    }

    /// The unquotiented contraction A (x) Lambda^2 B -> S^2 A (x) det B.
    pub fn psi_ambient(&self) -> &Mat<Rational> {
        &self.psi
    }

    /// Read a degree-1 element of the p = 0 complex (coordinates v1-index
    /// major, S^2 B slot minor) as a bilinear form on S^2 A. The matrix is
    /// symmetric exactly when the element is a 1-cocycle.
    pub fn cocycle_to_form(&self, z: &[Rational]) -> FormFromCocycle {
        assert_eq!(z.len(), 36, "degree-1 elements have 36 coordinates");
        let phit = self.phi.mul(self.v1.inclusion());
        let pairing = self.pairing_s2();
        // zt[s][t] = sum_v phit[s][v] z[v*6 + t]
        let mut zt: Mat<Rational> = Mat::zeros(6, 6);
        for v in 0..6 {
            for t in 0..6 {
                let c = &z[v * 6 + t];
                if c.is_zero() {
                    continue;
                }
                for s in 0..6 {
                    let p = phit.get(s, v);
                    if p.is_zero() {
                        continue;
                    }
                    let val = zt.get(s, t).add(&p.mul(c));
                    zt.set(s, t, val);
                }
            }
        }
        let matrix = Mat::from_fn(6, 6, |u, v| {
            pairing[u].mul(zt.get(u, v)).mul(&pairing[v])
        });
        let symmetric = (0..6).all(|i| (0..i).all(|j| matrix.get(i, j) == matrix.get(j, i)));
        FormFromCocycle { matrix, symmetric }
    }

    /// Induced action matrices on the three terms of the complex for
    /// g in GL(B) (acting on A by the inverse transpose). Used by the
    /// equivariance checks.
    pub fn term_actions(&self, p: u8, g: &Mat<Rational>) -> Result<[Mat<Rational>; 3]> {
        let rho_b = g.clone();
        let rho_a = g.inverse().ok_or(Error::SingularMatrix)?.transpose();
        let det_b = g.det();
        let det_a = det_b.inv().expect("invertible");
        let s2b = sym2_squares_first(&rho_b);
        let l2s2 = crate::multilinear::ext_matrix(&s2b, 2);
        let ext2_a = crate::multilinear::ext_matrix(&rho_a, 2);
        let ext2_b = crate::multilinear::ext_matrix(&rho_b, 2);
        // ambient actions on the wedge models (subset-major index layouts)
        let amb_abb = rho_a.kron(&ext2_b);
        let amb_aab = ext2_a.kron(&rho_b);
        let act_v0 = self.v0.projection().mul(&amb_abb).mul(self.v0.inclusion());
        let act_v1 = self.v1.projection().mul(&amb_aab).mul(self.v1.inclusion());
        Ok(match p {
            0 => [
                act_v0,
                act_v1.kron(&s2b),
                l2s2.scale(&det_a),
            ],
            1 => [
                Mat::from_fn(1, 1, |_, _| det_b.clone()),
                act_v0.kron(&s2b),
                act_v1.kron(&l2s2),
            ],
            2 => [
                Mat::zeros(0, 0),
                s2b.scale(&det_b),
                act_v0.kron(&l2s2),
            ],
            _ => return Err(Error::Invalid("p must be 0, 1 or 2".into())),
        })
    }
}

/// Matrix of S^2(g) on the squares-first basis of S^2 B.
pub fn sym2_squares_first(g: &Mat<Rational>) -> Mat<Rational> {
    let mut out: Mat<Rational> = Mat::zeros(6, 6);
    for (col, &(j, k)) in S2_PAIRS.iter().enumerate() {
        for a in 0..3 {
            // coefficient of x_a^2
            let c = g.get(a, j).mul(g.get(a, k));
            if !c.is_zero() {
                out.set(pair_index(a, a), col, c);
            }
            for b in a + 1..3 {
                let c = g.get(a, j).mul(g.get(b, k)).add(&g.get(b, j).mul(g.get(a, k)));
                if !c.is_zero() {
                    out.set(pair_index(a, b), col, c);
                }
            }
        }
    }
    out
}

/// Split a symmetric form into its degree-four part (the full symmetrization
/// of the associated 4-index tensor, whose entries depend only on the index
/// multiset) and the complementary part.
pub fn split_form(m: &SymmetricForm6) -> Result<(SymmetricForm6, SymmetricForm6)> {
    let third: Rational = rat(1, 3);
    let q = Mat::from_fn(6, 6, |u, v| {
        let (a, b) = S2_PAIRS[u];
        let (c, d) = S2_PAIRS[v];
        let s = m.at((a, b), (c, d)).add(m.at((a, c), (b, d))).add(m.at((a, d), (b, c)));
        s.mul(&third)
    });
    let q = SymmetricForm6::new_unchecked(q);
    let r = m.sub(&q);
    Ok((q, r))
}

fn wedge_label(w: &[usize; 3]) -> String {
    let name = |l: usize| {
        if l < 3 {
            format!("e{l}")
        } else {
            format!("x{}", l - 3)
        }
    };
    format!("{}\u{2227}{}\u{2227}{}", name(w[0]), name(w[1]), name(w[2]))
}

fn s2_label(a: usize, b: usize) -> String {
    if a == b {
        format!("e{a}^2")
    } else {
        format!("e{a}*e{b}")
    }
}

fn s2_label_x(a: usize, b: usize) -> String {
    if a == b {
        format!("x{a}^2")
    } else {
        format!("x{a}*x{b}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat_int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn ctx() -> GGContext {
        GGContext::new()
    }

    #[test]
    fn nabla_on_h_matches_definition() {
        let n = ctx().nabla_on_h();
        // x0 -> e0 (x) x0^2 + e1 (x) x0x1 + e2 (x) x0x2
        let mut x0 = vec![<Rational as Scalar>::zero(); 6];
        x0[3] = one();
        let img = n.mat.apply(&x0);
        let mut expected = vec![<Rational as Scalar>::zero(); 18];
        expected[pair_index(0, 0)] = one();
        expected[6 + pair_index(0, 1)] = one();
        expected[12 + pair_index(0, 2)] = one();
        assert_eq!(img, expected);
        // e0 -> 0
        let mut e0 = vec![<Rational as Scalar>::zero(); 6];
        e0[0] = one();
        assert!(n.mat.apply(&e0).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn nabla_annihilates_theta() {
        assert!(ctx().nabla_annihilates_theta());
    }

    #[test]
    fn term_dimensions() {
        let c = ctx();
        assert_eq!(c.build_complex(0).term_dims, [6, 36, 15]);
        assert_eq!(c.build_complex(1).term_dims, [1, 36, 90]);
        assert_eq!(c.build_complex(2).term_dims, [0, 6, 90]);
    }

    #[test]
    fn d_squared_zero_all_p() {
        let c = ctx();
        for p in 0..3 {
            assert!(c.build_complex(p).d_squared_is_zero());
        }
    }

    #[test]
    fn homology_dimensions() {
        let c = ctx();
        assert_eq!(c.build_complex(0).homology_dims(), (0, 15, 0));
        assert_eq!(c.build_complex(1).homology_dims(), (0, 0, 55));
        assert_eq!(c.build_complex(2).homology_dims(), (0, 0, 84));
    }

    #[test]
    fn first_differential_rank_p0() {
        // forced by H^0 = 0 and domain dimension 6
        let c = ctx();
        assert_eq!(c.build_complex(0).d0.rank(), 6);
    }

    #[test]
    fn cocycle_and_coboundary_dims() {
        let c = ctx();
        let p0 = c.build_complex(0);
        let data = c.cocycle_spaces(&p0).unwrap();
        assert_eq!(data.cocycles.len(), 21);
        assert_eq!(data.coboundaries.len(), 6);
    }

    #[test]
    fn lemrep_isos_are_isomorphisms() {
        let c = ctx();
        let (first, second) = c.lemrep_isos();
        assert_eq!(first.exact_rank().rank, 6);
        assert_eq!(second.exact_rank().rank, 6);
        // kernel of the unquotiented map equals theta.A exactly (dim 3)
        let phi = c.phi_ambient();
        assert_eq!(phi.rank(), 6);
        let kernel = phi.kernel_basis();
        assert_eq!(kernel.len(), 3);
        for k in 0..3 {
            let mut v = vec![<Rational as Scalar>::zero(); 9];
            for (w, coeff) in theta_wedge(k) {
                let i = wedge_index(&c.basis_aab, &w).unwrap();
                v[i] = coeff;
            }
            assert!(phi.apply(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn lemrep_equivariance_diag123() {
        let c = ctx();
        let mut g = Mat::<Rational>::zeros(3, 3);
        for (i, d) in [1i64, 2, 3].iter().enumerate() {
            g.set(i, i, rat_int(*d));
        }
        // phi-tilde intertwines the V1 action with S^2(rho_B) . det(rho_A)
        let acts = c.term_actions(0, &g).unwrap();
        let act_v1 = {
            let rho_a = g.inverse().unwrap().transpose();
            let ext2_a = crate::multilinear::ext_matrix(&rho_a, 2);
            let amb = ext2_a.kron(&g);
            c.v1.projection().mul(&amb).mul(c.v1.inclusion())
        };
        let _ = acts;
        let (first, _) = c.lemrep_isos();
        let det_a = g.det().inv().unwrap();
        let rhs = sym2_squares_first(&g).scale(&det_a).mul(&first.mat);
        let lhs = first.mat.mul(&act_v1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cocycles_give_symmetric_forms() {
        let c = ctx();
        let p0 = c.build_complex(0);
        let data = c.cocycle_spaces(&p0).unwrap();
        for z in &data.cocycles {
            assert!(c.cocycle_to_form(z).symmetric);
        }
        // zero maps to zero
        let zero = vec![<Rational as Scalar>::zero(); 36];
        let f = c.cocycle_to_form(&zero);
        assert!(f.symmetric && f.matrix.is_zero());
        // a non-cocycle gives an asymmetric matrix with the flag cleared
        let mut z = vec![<Rational as Scalar>::zero(); 36];
        z[3] = one();
        assert!(!c.cocycle_to_form(&z).symmetric);
    }

    #[test]
    fn coboundaries_have_no_degree_four_part() {
        let c = ctx();
        let p0 = c.build_complex(0);
        let data = c.cocycle_spaces(&p0).unwrap();
        for z in &data.coboundaries {
            let form = c.cocycle_to_form(z).into_form().unwrap();
            let (q, r) = split_form(&form).unwrap();
            assert!(q.is_zero(), "coboundary forms lie in the complement of S^4");
            assert_eq!(r, form);
        }
    }

    #[test]
    fn split_form_is_an_exact_projector_pair() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let c = ctx();
        let p0 = c.build_complex(0);
        let data = c.cocycle_spaces(&p0).unwrap();
        for _ in 0..20 {
            // random symmetric form from a random cocycle combination
            let mut z = vec![<Rational as Scalar>::zero(); 36];
            for basis in &data.cocycles {
                let coeff = rat_int(rng.gen_range(-3..=3));
                for (i, b) in basis.iter().enumerate() {
                    z[i] = z[i].add(&coeff.mul(b));
                }
            }
            let m = c.cocycle_to_form(&z).into_form().unwrap();
            let (q, r) = split_form(&m).unwrap();
            assert_eq!(q.add(&r), m);
            let (qq, qr) = split_form(&q).unwrap();
            assert_eq!(qq, q);
            assert!(qr.is_zero());
            let (rq, rr) = split_form(&r).unwrap();
            assert!(rq.is_zero());
            assert_eq!(rr, r);
            assert!(q.is_multiset_determined());
        }
    }

    #[test]
    fn gl_equivariance_random_matrices() {
        let c = ctx();
        let complexes: Vec<GGComplex> = (0..3).map(|p| c.build_complex(p)).collect();
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let mut done = 0;
        while done < 20 {
            let g = Mat::from_fn(3, 3, |_, _| rat_int(rng.gen_range(-3..=3)));
            if g.det().is_zero() {
                continue;
            }
            done += 1;
            for cpx in &complexes {
                let acts = c.term_actions(cpx.p, &g).unwrap();
                if cpx.term_dims[0] > 0 {
                    assert_eq!(
                        acts[1].mul(&cpx.d0),
                        cpx.d0.mul(&acts[0]),
                        "d0 equivariance failed at p = {}",
                        cpx.p
                    );
                }
                assert_eq!(
                    acts[2].mul(&cpx.d1),
                    cpx.d1.mul(&acts[1]),
                    "d1 equivariance failed at p = {}",
                    cpx.p
                );
            }
        }
    }
}
