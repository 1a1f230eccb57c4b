use catblocks::exactalg::QMatrix;
use catblocks::tensorrep::pcanonical_n2_rep;
use catblocks::zigzag::{bimodule_k_matrices, build_algebra_a, cartan_data, short_exact_sequences, Element};
use catblocks::{AlgebraA, BasisElt};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn algebra() -> AlgebraA {
    build_algebra_a().expect("relations are consistent and complete")
}

fn element() -> impl Strategy<Value = Element> {
    prop::collection::vec(-3i64..=3, 8).prop_map(|cs| {
        BasisElt::all().into_iter().zip(cs).map(|(b, c)| (b, BigInt::from(c))).collect()
    })
}

/// Matrix of left multiplication by `x` in the basis order of `BasisElt::all`.
fn left_regular(a: &AlgebraA, x: &Element) -> QMatrix {
    let basis = BasisElt::all();
    let mut m = QMatrix::zeros(8, 8);
    for (j, &b) in basis.iter().enumerate() {
        let img = a.mul(x, &Element::basis(b));
        for (i, &c) in basis.iter().enumerate() {
            m.set(i, j, BigRational::from_integer(img.coeff(&c)));
        }
    }
    m
}

proptest! {
    #[test]
    fn associative_and_distributive(x in element(), y in element(), z in element()) {
        let a = algebra();
        prop_assert_eq!(a.mul(&a.mul(&x, &y), &z), a.mul(&x, &a.mul(&y, &z)));
        prop_assert_eq!(a.mul(&x, &y.plus(&z)), a.mul(&x, &y).plus(&a.mul(&x, &z)));
        prop_assert_eq!(a.mul(&y.plus(&z), &x), a.mul(&y, &x).plus(&a.mul(&z, &x)));
        prop_assert_eq!(a.mul(&a.unit(), &x), x.clone());
        prop_assert_eq!(a.mul(&x, &a.unit()), x);
    }

    #[test]
    fn left_regular_representation_is_a_homomorphism(x in element(), y in element()) {
        let a = algebra();
        prop_assert_eq!(left_regular(&a, &a.mul(&x, &y)), left_regular(&a, &x).mul(&left_regular(&a, &y)));
        // faithful: L_x determines x through L_x(1)
        if !x.is_zero() {
            prop_assert!(!left_regular(&a, &x).is_zero());
        }
    }
}

#[test]
fn structure_constants() {
    let a = algebra();
    assert_eq!(a.dim(), 8);
    assert_eq!(a.associativity_failures(), 0);
    assert!(a.unit_acts_trivially());
    assert!(a.idempotents_orthogonal());
    let e0 = Element::basis(BasisElt::idempotent(0));
    let es = Element::basis(BasisElt::idempotent(-2));
    assert_eq!(e0.plus(&es), a.unit());
    // the two arrows compose to the socle element
    let x = BasisElt::new(0, -2, 1);
    let y = BasisElt::new(-2, 0, 1);
    assert!(a.mul_basis(x, y).is_zero());
    assert_eq!(a.mul_basis(BasisElt::new(0, -2, 2), y), Element::basis(BasisElt::new(-2, -2, 2)));
}

#[test]
fn cartan_and_k_level_sequences() {
    let a = algebra();
    let cd = cartan_data(&a);
    assert_eq!(cd.matrix, [[2, 2], [2, 2]]);
    assert_eq!(cd.radical_dim, 6);
    assert!(cd.radical_cubed_zero);
    let ses = short_exact_sequences(&a);
    assert!(ses.projective_sum_holds && ses.verma_sum_holds);
    for i in [0i8, -2] {
        assert_eq!(ses.projective[&i][&0], 2);
        assert_eq!(ses.projective[&i][&-2], 2);
        assert_eq!(ses.baby_verma[&i][&0], 1);
        assert_eq!(ses.baby_verma[&i][&-2], 1);
    }
}

#[test]
fn k_matrices_match_pcanonical() {
    let a = algebra();
    let km = bimodule_k_matrices(&a);
    let m = km.assemble();
    let p = pcanonical_n2_rep(3).unwrap();
    assert_eq!(m.e, p.e);
    assert_eq!(m.f, p.f);
    assert_eq!(m.h, p.h);
    assert_eq!(m.commutator(), QMatrix::from_ints(4, 4, &[-2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2]));
    // E_{-1}[k] = 2[L_0] + 2[L_s]
    let col = km.e_minus1.column(&"[k]".to_string());
    assert_eq!(col.coeff(&"[L_0]".to_string()), BigInt::from(2));
    assert_eq!(col.coeff(&"[L_s]".to_string()), BigInt::from(2));
}
