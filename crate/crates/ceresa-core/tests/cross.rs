//! Cross-module identities tying the complex machinery to the quartic forms:
//! the coboundary pairing of the p = 0 complex equals the R_C composite on
//! the nose, and the degree-four/complement split separates Q_C from R_C.

use ceresa_core::exactnum::{rat, Rational};
use ceresa_core::forms::{SymmetricForm6, S2_PAIRS};
use ceresa_core::ggcomplex::{split_form, GGContext};
use ceresa_core::multilinear::Scalar;
use ceresa_core::quartic::{dc_matrix, qc_matrix, rc_matrix, DegreeTwoElement, QuarticCoefficients};

/// The degree-two element whose squares-first coordinate vector is the u-th
/// standard basis vector (mixed monomials carry the 2q convention).
fn basis_degree_two(u: usize) -> DegreeTwoElement {
    let mut h = DegreeTwoElement::zero();
    let (a, b) = S2_PAIRS[u];
    if a == b {
        h.p[a] = <Rational as Scalar>::one();
    } else {
        let slot = match (a, b) {
            (0, 1) => 0,
            (0, 2) => 1,
            (1, 2) => 2,
            _ => unreachable!(),
        };
        h.q[slot] = rat(1, 2);
    }
    h
}

#[test]
fn coboundary_form_equals_rc_composite() {
    // d(h) read as a bilinear form equals the R_C matrix of h, with no scalar
    // correction: the contraction conventions line up exactly.
    let ctx = GGContext::new();
    let p0 = ctx.build_complex(0);
    let (_, psi_tilde) = ctx.lemrep_isos();
    for u in 0..6 {
        let mut e_u = vec![<Rational as Scalar>::zero(); 6];
        e_u[u] = <Rational as Scalar>::one();
        let v0 = psi_tilde.mat.solve(&e_u).expect("psi-tilde is invertible");
        let z = p0.d0.apply(&v0);
        let form = ctx.cocycle_to_form(&z).into_form().unwrap();
        let rc = rc_matrix(&basis_degree_two(u));
        assert_eq!(form, rc, "mismatch at basis element {u}");
    }
}

#[test]
fn split_separates_qc_from_rc() {
    let f = QuarticCoefficients::klein();
    let h = basis_degree_two(3); // e0 e1
    let d = dc_matrix(&f, &h);
    let (q_part, r_part) = split_form(&d).unwrap();
    assert_eq!(q_part, qc_matrix(&f));
    assert_eq!(r_part, rc_matrix(&h));
    // and the Klein Q matrix alone splits as (itself, 0)
    let (q_only, r_zero) = split_form(&qc_matrix(&f)).unwrap();
    assert_eq!(q_only, qc_matrix(&f));
    assert!(r_zero.is_zero());
}

#[test]
fn symmetric_form_json_roundtrip() {
    let d = dc_matrix(&QuarticCoefficients::klein(), &basis_degree_two(0));
    let json = serde_json::to_value(&d).unwrap();
    assert_eq!(json["rank"], 6);
    let rows: Vec<Vec<String>> = serde_json::from_value(json["matrix"].clone()).unwrap();
    let back = SymmetricForm6::from_string_rows(&rows).unwrap();
    assert_eq!(back, d);
}
