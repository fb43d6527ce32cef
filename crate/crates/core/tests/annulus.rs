use cheb_core::annulus::*;
use cheb_core::chebyshev::khovanov_complex;
use cheb_core::coeff::FieldElem;
use cheb_core::complex::{simplify, Bn, GradedComplex};
use cheb_core::projector::{p2_complex, projector};
use cheb_core::tl::annular_skein_closure;
use cheb_core::{FlatTangle, TLElement};

fn one(t: FlatTangle) -> GradedComplex<Bn> {
    GradedComplex::one_term(t, 0, 0)
}

#[test]
fn closure_profiles() {
    let p = close_objects(&one(FlatTangle::identity(3))).unwrap();
    assert_eq!(p.records[0], ClosureRecord { tdeg: 0, qshift: 0, essential: 3, trivial: 0 });
    let p = close_objects(&one(FlatTangle::turnback(2, 1).unwrap())).unwrap();
    assert_eq!((p.records[0].essential, p.records[0].trivial), (0, 1));
    let cup = one(FlatTangle::cup(2, 1).unwrap());
    assert!(matches!(close_objects(&cup), Err(cheb_core::Error::BaseMismatch(_))));
}

#[test]
fn identity_closes_to_z_power() {
    for n in 0..4 {
        let t = trace_euler(&one(FlatTangle::identity(n)), 0).unwrap();
        assert_eq!(t.value, AnnularSkeinElement::z_pow(n));
        assert_eq!(t.valid_below, None);
    }
}

#[test]
fn truncated_projectors_close_to_chebyshev() {
    let p2 = p2_complex(12).unwrap();
    let t = trace_euler(&p2.complex, 2).unwrap();
    assert_eq!(t.valid_below, Some(20));
    assert!(compare_with_chebyshev(&t, 2).matches());
    assert!(!compare_with_chebyshev(&t, 1).matches());
    let p3 = projector(3, 16).unwrap();
    let t = trace_euler(&p3.complex, 4).unwrap();
    assert!(t.valid_below.unwrap() >= 16);
    assert!(compare_with_chebyshev(&t, 3).matches());
}

#[test]
fn trace_is_invariant_under_simplify() {
    let p2 = p2_complex(8).unwrap();
    let star = p2.complex.star(&p2.complex).unwrap();
    let mut a = star.clone();
    a.floor = None;
    let b = simplify(&a).unwrap();
    assert_eq!(trace_euler(&a, 0).unwrap().value, trace_euler(&b, 0).unwrap().value);
}

#[test]
fn khovanov_model_closure() {
    for n in 1..=5 {
        let class = cheb_core::chebyshev::euler_characteristic(&khovanov_complex(n)).unwrap();
        let z = AnnularSkeinElement::from_zpoly(&cheb_core::chebyshev::class_closure(&class).unwrap());
        let c = z.chebyshev();
        assert_eq!(c.len(), 1);
        assert_eq!(c[&n], FieldElem::one());
    }
}

#[test]
fn vanishing_rules() {
    let dot = AnnularCobordism { components: vec![AnnularComponent::Essential { dots: 1 }], degree: 0 };
    assert!(essential_dot_vanishing(&dot).unwrap().vanishes);
    let plain = AnnularCobordism { components: vec![AnnularComponent::Essential { dots: 0 }], degree: 0 };
    assert!(!essential_dot_vanishing(&plain).unwrap().vanishes);
    let shifted = AnnularCobordism { components: vec![AnnularComponent::Essential { dots: 0 }], degree: 2 };
    assert!(essential_dot_vanishing(&shifted).unwrap().vanishes);
    let sphere = |genus, dots| AnnularCobordism { components: vec![AnnularComponent::Closed { genus, dots }], degree: 0 };
    assert!(essential_dot_vanishing(&sphere(0, 0)).unwrap().vanishes);
    assert_eq!(essential_dot_vanishing(&sphere(0, 1)).unwrap().scalar, Some(FieldElem::one()));
    assert_eq!(essential_dot_vanishing(&sphere(1, 0)).unwrap().scalar, Some(FieldElem::from_int(2)));
}

#[test]
fn rotation() {
    let id = TLElement::identity(3);
    let (r, e) = cyclicity_rotate(&[id.clone(), id.clone()], 1, 0).unwrap();
    assert_eq!((r, e), (id, 0));
    let e1 = TLElement::e(3, 1).unwrap();
    let e2 = TLElement::e(3, 2).unwrap();
    let word = [e1.clone(), e2.clone()];
    let (r, e) = cyclicity_rotate(&word, 1, 0).unwrap();
    assert_eq!(e, 0);
    assert_eq!(annular_skein_closure(&r).unwrap(), annular_skein_closure(&e2.compose(&e1).unwrap()).unwrap());
    let cap = TLElement::cap(3, 1).unwrap();
    let cup = TLElement::cup(3, 1).unwrap();
    let (r, e) = cyclicity_rotate(&[cap.clone(), cup.clone()], 1, 2).unwrap();
    assert_eq!(e, 2);
    assert_eq!(annular_skein_closure(&r).unwrap(), annular_skein_closure(&cup.compose(&cap).unwrap()).unwrap());
    assert!(matches!(cyclicity_rotate(&word, 5, 0), Err(cheb_core::Error::BadFactorization(_))));
}
