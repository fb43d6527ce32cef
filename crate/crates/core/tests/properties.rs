use cheb_core::coeff::delta;
use cheb_core::tl::markov_trace;
use cheb_core::{FieldElem, FlatTangle, TLElement};
use proptest::prelude::*;

fn tangle(n: usize, m: usize) -> impl Strategy<Value = FlatTangle> {
    let all = FlatTangle::all(n, m);
    (0..all.len(), 0u32..3).prop_map(move |(i, c)| all[i].with_circles(c))
}

fn field() -> impl Strategy<Value = FieldElem> {
    (prop::collection::vec((-4i64..=4, -3i64..=3), 1..4), 0i64..3).prop_map(|(terms, d)| {
        let num = terms.into_iter().fold(FieldElem::zero(), |acc, (c, e)| acc + FieldElem::from_int(c).mul_q_pow(e));
        num.checked_div(&(FieldElem::one() + FieldElem::q_pow(d + 1))).unwrap()
    })
}

fn element(n: usize, m: usize) -> impl Strategy<Value = TLElement> {
    prop::collection::vec((tangle(n, m), field()), 0..4)
        .prop_map(move |terms| TLElement::from_terms(n, m, terms).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(a in tangle(2, 4), b in tangle(4, 2), c in tangle(4, 4)) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identity_and_reflection(a in tangle(3, 5), b in tangle(1, 3)) {
        prop_assert_eq!(&FlatTangle::identity(5).compose(&a).unwrap(), &a);
        prop_assert_eq!(&a.compose(&FlatTangle::identity(3)).unwrap(), &a);
        prop_assert_eq!(&a.reflect().reflect(), &a);
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.reflect(), b.reflect().compose(&a.reflect()).unwrap());
        prop_assert!(ab.is_noncrossing());
        prop_assert!(ab.through_degree() <= a.through_degree().min(b.through_degree()));
    }

    #[test]
    fn factoring_through_the_width(a in tangle(4, 4)) {
        let (top, bottom) = a.without_circles().factor_through();
        prop_assert_eq!(top.n(), a.through_degree());
        prop_assert_eq!(top.compose(&bottom).unwrap(), a.without_circles());
    }

    #[test]
    fn closures_count_circles(a in tangle(3, 3)) {
        let planar = a.planar_closure().unwrap();
        let (essential, trivial) = a.annular_closure().unwrap();
        prop_assert_eq!(essential as usize % 2, a.through_degree() % 2);
        prop_assert!(essential + trivial >= 1);
        prop_assert!(planar >= a.circles());
    }

    #[test]
    fn field_arithmetic(a in field(), b in field(), c in field()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        let s = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<FieldElem>(&s).unwrap(), a);
    }

    #[test]
    fn tl_composition_is_bilinear_and_associative(x in element(2, 2), y in element(2, 2), z in element(2, 2), w in element(2, 2)) {
        let l = x.add(&y).unwrap().compose(&z).unwrap();
        let r = x.compose(&z).unwrap().add(&y.compose(&z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        let l = x.compose(&z).unwrap().compose(&w).unwrap();
        let r = x.compose(&z.compose(&w).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn trace_is_cyclic(x in element(3, 3), y in element(3, 3)) {
        let xy = markov_trace(&x.compose(&y).unwrap()).unwrap();
        let yx = markov_trace(&y.compose(&x).unwrap()).unwrap();
        prop_assert_eq!(xy, yx);
    }

    #[test]
    fn tl_json_round_trip(x in element(3, 1)) {
        let s = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<TLElement>(&s).unwrap(), x);
    }
}

#[test]
fn temperley_lieb_relations() {
    for n in 2..=5 {
        for i in 1..n {
            let e = TLElement::e(n, i).unwrap();
            assert_eq!(e.compose(&e).unwrap(), e.scale(&delta()));
            if i + 1 < n {
                let f = TLElement::e(n, i + 1).unwrap();
                assert_eq!(e.compose(&f).unwrap().compose(&e).unwrap(), e);
                assert_eq!(f.compose(&e).unwrap().compose(&f).unwrap(), f);
            }
            for j in i + 2..n {
                let f = TLElement::e(n, j).unwrap();
                assert_eq!(e.compose(&f).unwrap(), f.compose(&e).unwrap());
            }
        }
    }
}
