use cheb_core::complex::{generator_multiset, ranks, Bn, GradedComplex};
use cheb_core::projector::*;
use cheb_core::FlatTangle;

#[test]
fn p2_shape() {
    let p = p2_complex(12).unwrap();
    let q: Vec<i64> = p.complex.gens.iter().map(|g| g.qshift).collect();
    assert_eq!(&q[..5], &[0, 1, 3, 5, 7]);
    assert!(p.complex.is_complex());
    assert!(p.wide_generators().is_empty());
    assert!(p.eta.is_closed(&GradedComplex::<Bn>::one_term(FlatTangle::identity(2), 0, 0), &p.complex).unwrap());
    assert!(p.complex.degree_violations().is_empty());
}

#[test]
fn p2_periodic_map_is_closed_above_the_tail() {
    let p = p2_complex(12).unwrap();
    let u = p.periodic.clone().unwrap();
    let c = u.commutator(&p.complex, &p.complex).unwrap();
    for &(a, _) in c.entries.keys() {
        assert!(p.complex.gens[a].tdeg <= -11, "U fails to commute at {}", p.complex.gens[a].id);
    }
}

#[test]
fn p2_kills_turnbacks() {
    let p = p2_complex(12).unwrap();
    let r = kills_turnbacks(&p, (-10, 0)).unwrap();
    assert_eq!(r.len(), 1);
    assert!(r[0].killed());
}

#[test]
fn identity_is_not_a_projector() {
    let c = GradedComplex::<Bn>::one_term(FlatTangle::identity(2), 0, 0);
    let fake = TruncatedProjector {
        n: 2,
        depth: None,
        eta: c.identity_map(),
        complex: c,
        safe_window: (0, 0),
        periodic: None,
    };
    let r = kills_turnbacks(&fake, (-2, 0)).unwrap();
    assert!(!r[0].turnback.contractible);
}

#[test]
fn q2_splices_to_p2() {
    let q2 = build_qn(2, &p1_complex(), 12).unwrap();
    assert_eq!(q2.summary().block_sizes, [1, 1, 1, 1]);
    let s = splice_pn(2, &q2, 6, 12).unwrap();
    let p = p2_complex(12).unwrap();
    assert_eq!(generator_multiset(&s.complex), generator_multiset(&p.complex));
    assert!(s.complex.is_complex());
    assert_eq!(s.complex.d.len(), p.complex.d.len());
}

#[test]
fn q3_shifts_and_solve() {
    assert_eq!(qn_shifts(3), [(-5, 6), (-4, 5), (-1, 1), (0, 0)]);
    let p2 = p2_complex(12).unwrap();
    let q3 = build_qn(3, &p2, 8).unwrap();
    let s = q3.summary();
    assert!(s.d_squared_zero);
    assert_eq!(q3.complex().tdeg_range().unwrap().1, 0);
}

#[test]
fn q3_needs_a_deep_enough_p2() {
    let p2 = p2_complex(10).unwrap();
    assert!(matches!(build_qn(3, &p2, 8), Err(cheb_core::Error::HomotopyNotFound(_))));
}

#[test]
fn p3_kills_turnbacks() {
    let p = projector(3, 20).unwrap();
    assert_eq!(p.safe_window, (-4, 0));
    assert!(p.complex.is_complex());
    assert!(p.wide_generators().is_empty());
    let r = ranks(&p.complex);
    assert_eq!(r[&0], 1);
    for rep in kills_turnbacks(&p, p.safe_window).unwrap() {
        assert!(rep.killed(), "B_{} survives", rep.i);
    }
}
