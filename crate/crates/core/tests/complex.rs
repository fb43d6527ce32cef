use cheb_core::cob::{saddle, Comp};
use cheb_core::complex::{
    comb, contractible_on_window, contraction, deloop_pass, gaussian_eliminate, null_homotopy_solve, perturb_transfer, simplify,
    simplify_tracked, splice, Bn, ChainMap, GradedComplex, SplicePart, Tl, TransferData,
};
use cheb_core::coeff::delta;
use cheb_core::tl::KaroubiObject;
use cheb_core::{Error, FieldElem, FlatTangle, TLElement};

fn plain(n: usize) -> KaroubiObject {
    KaroubiObject::plain(n)
}

/// 2 --e--> 2 --(1 − e/δ)--> 2
fn three_term() -> GradedComplex<Tl> {
    let mut c = GradedComplex::<Tl>::new((2, 2));
    for (k, t) in [0, 1, 2].into_iter().enumerate() {
        c.push(format!("x{k}"), t, 0, plain(2));
    }
    let e = TLElement::e(2, 1).unwrap();
    let u = TLElement::identity(2).sub(&e.scale(&delta().inv().unwrap())).unwrap();
    c.add_d(0, 1, e).unwrap();
    c.add_d(1, 2, u).unwrap();
    c
}

fn square(flip: bool) -> GradedComplex<Tl> {
    let mut c = GradedComplex::<Tl>::new((1, 1));
    let a = c.push("a", -1, 0, plain(1));
    let b = c.push("b", 0, 0, plain(1));
    let cc = c.push("c", 0, 0, plain(1));
    let d = c.push("d", 1, 0, plain(1));
    let id = TLElement::identity(1);
    c.add_d(a, b, id.clone()).unwrap();
    c.add_d(a, cc, id.clone()).unwrap();
    c.add_d(b, d, id.clone()).unwrap();
    c.add_d(cc, d, if flip { id } else { id.neg() }).unwrap();
    c
}

fn cap_off(k: usize) -> FlatTangle {
    let pairs: Vec<(usize, usize)> = (0..k / 2).map(|i| (2 * i, 2 * i + 1)).collect();
    FlatTangle::from_pairs(k, 0, &pairs, 0).unwrap()
}

/// Bracket of a single crossing on two strands: Cone(saddle: 1₂ → turnback).
fn crossing() -> GradedComplex<Bn> {
    let id2 = FlatTangle::identity(2);
    let s = saddle(&id2, Comp::SrcArc(0), Comp::SrcArc(1)).unwrap();
    let x = GradedComplex::<Bn>::one_term(id2, 0, 0);
    let y = GradedComplex::<Bn>::one_term(s.tgt().clone(), 0, 0);
    let mut f = ChainMap::zero(0, s.degree().unwrap());
    f.add_entry(0, 0, s).unwrap();
    GradedComplex::cone(&x, &y, &f).unwrap()
}

fn closed_unknot() -> GradedComplex<Bn> {
    let top = GradedComplex::<Bn>::one_term(cap_off(2), 0, 0);
    let bottom = GradedComplex::<Bn>::one_term(cap_off(2).reflect(), 0, 0);
    top.star(&crossing()).unwrap().star(&bottom).unwrap()
}

#[test]
fn d_squared_detects_a_flipped_sign() {
    assert!(GradedComplex::<Tl>::plain(3).is_complex());
    assert!(three_term().is_complex());
    assert!(square(false).is_complex());
    let w = square(true).d_squared_check().unwrap().unwrap_err();
    assert_eq!((w.from, w.to), (0, 3));
}

#[test]
fn cone_of_identity_vanishes() {
    let x = three_term();
    let c = GradedComplex::cone(&x, &x, &x.identity_map()).unwrap();
    assert!(c.is_complex());
    assert_eq!(c.len(), 6);
    assert!(gaussian_eliminate(&c).unwrap().is_empty());
    let v = contractible_on_window(&c, (-5, 5)).unwrap();
    assert!(v.contractible);
}

#[test]
fn cone_of_zero_is_a_direct_sum() {
    let x = GradedComplex::<Tl>::plain(2);
    let y = GradedComplex::<Tl>::plain(2);
    let c = GradedComplex::cone(&x, &y, &ChainMap::zero(0, 0)).unwrap();
    assert_eq!(c.gens.iter().map(|g| g.tdeg).collect::<Vec<_>>(), vec![-1, 0]);
    assert!(c.d.is_empty());
}

#[test]
fn cone_rejects_non_chain_maps() {
    let x = three_term();
    let mut f = ChainMap::zero(0, 0);
    f.add_entry(0, 0, TLElement::identity(2)).unwrap();
    assert!(matches!(GradedComplex::cone(&x, &x, &f), Err(Error::NotClosed(_))));
}

#[test]
fn tensor_with_a_strand() {
    let x = three_term();
    let t = x.tensor(&GradedComplex::<Tl>::plain(1)).unwrap();
    assert!(t.is_complex());
    assert_eq!(t.len(), 3);
    assert_eq!(t.d[&(0, 1)], x.d[&(0, 1)].juxtapose(&TLElement::identity(1)));
    let sq = square(false).tensor(&x).unwrap();
    assert!(sq.is_complex());
    assert_eq!(sq.len(), 12);
}

#[test]
fn null_homotopy_round_trip() {
    let x = three_term();
    let mut h0 = ChainMap::zero(-1, 0);
    h0.add_entry(1, 0, TLElement::identity(2).scale(&FieldElem::from_int(3))).unwrap();
    h0.add_entry(2, 1, TLElement::e(2, 1).unwrap()).unwrap();
    let f = h0.commutator(&x, &x).unwrap();
    assert!(f.is_closed(&x, &x).unwrap());
    let h = null_homotopy_solve(&f, &x, &x, (-3, 3)).unwrap();
    let back = h.commutator(&x, &x).unwrap();
    assert!(back.sub(&f).unwrap().is_zero());
    let zero = null_homotopy_solve(&ChainMap::zero(0, 0), &x, &x, (-3, 3)).unwrap();
    assert!(zero.is_zero());
}

#[test]
fn identity_of_a_nonzero_complex_is_not_null_homotopic() {
    let x = GradedComplex::<Tl>::plain(2);
    let r = null_homotopy_solve(&x.identity_map(), &x, &x, (-1, 1));
    assert!(matches!(r, Err(Error::NotNullHomotopic(_))));
    let v = contractible_on_window(&x, (-1, 1)).unwrap();
    assert!(!v.contractible);
    // e/δ is a proper idempotent, so the three-term complex keeps homology
    assert!(!contractible_on_window(&three_term(), (0, 2)).unwrap().contractible);
}

#[test]
fn truncation_window_is_enforced() {
    let x = three_term().truncate(1);
    assert_eq!(x.len(), 2);
    let r = null_homotopy_solve(&x.identity_map(), &x, &x, (0, 2));
    assert!(matches!(r, Err(Error::WindowTooSmall(_))));
}

#[test]
fn delooping_a_circle() {
    let o = FlatTangle::empty().with_circles(1);
    let c = GradedComplex::<Bn>::one_term(o, 0, 0);
    let d = deloop_pass(&c).unwrap();
    let mut shifts: Vec<i64> = d.gens.iter().map(|g| g.qshift).collect();
    shifts.sort();
    assert_eq!(shifts, vec![-1, 1]);
    assert!(d.gens.iter().all(|g| g.object.circles() == 0));
    assert_eq!(c.euler_class(), d.euler_class());
    let plain = GradedComplex::<Bn>::one_term(FlatTangle::identity(2), 0, 0);
    assert_eq!(deloop_pass(&plain).unwrap().gens, plain.gens);
}

#[test]
fn crossing_bracket_degrees() {
    let c = crossing();
    assert!(c.is_complex());
    assert!(c.degree_violations().is_empty());
    let u = closed_unknot();
    assert!(u.is_complex());
    assert!(u.degree_violations().is_empty());
    assert_eq!(u.circle_count(), 2);
}

#[test]
fn one_crossing_unknot_simplifies_to_two_generators() {
    let u = closed_unknot();
    let s = simplify(&u).unwrap();
    assert_eq!(s.len(), 2);
    assert!(s.d.is_empty());
    assert_eq!(s.euler_class(), u.euler_class());
    assert!(s.degree_violations().is_empty());
    // simplify is idempotent
    assert_eq!(simplify(&s).unwrap().gens, s.gens);
}

#[test]
fn tracked_simplification_is_a_homotopy_equivalence() {
    let u = closed_unknot();
    let t = simplify_tracked(&u).unwrap();
    let s = &t.complex;
    assert!(t.to.is_closed(&u, s).unwrap());
    assert!(t.from.is_closed(s, &u).unwrap());
    let on_s = s.identity_map().sub(&t.to.compose(&t.from).unwrap()).unwrap();
    null_homotopy_solve(&on_s, s, s, (-3, 3)).unwrap();
    let h = t.homotopy.commutator(&u, &u).unwrap();
    assert!(h.sub(&u.identity_map().sub(&t.from.compose(&t.to).unwrap()).unwrap()).unwrap().is_zero());
    let on_u = u.identity_map().sub(&t.from.compose(&t.to).unwrap()).unwrap();
    null_homotopy_solve(&on_u, &u, &u, (-3, 3)).unwrap();
}

#[test]
fn tracked_simplification_over_tl() {
    let x = square(false).tensor(&three_term()).unwrap();
    let t = simplify_tracked(&x).unwrap();
    let s = &t.complex;
    assert!(s.len() < x.len());
    let on_s = s.identity_map().sub(&t.to.compose(&t.from).unwrap()).unwrap();
    null_homotopy_solve(&on_s, s, s, (-5, 5)).unwrap();
    let on_x = x.identity_map().sub(&t.from.compose(&t.to).unwrap()).unwrap();
    null_homotopy_solve(&on_x, &x, &x, (-5, 5)).unwrap();
    let h = t.homotopy.commutator(&x, &x).unwrap();
    assert!(h.sub(&on_x).unwrap().is_zero());
}

#[test]
fn contraction_of_a_cone() {
    let x = square(false).tensor(&three_term()).unwrap();
    let c = GradedComplex::cone(&x, &x, &x.identity_map()).unwrap();
    let h = contraction(&c).unwrap();
    assert!(h.commutator(&c, &c).unwrap().sub(&c.identity_map()).unwrap().is_zero());
    assert!(matches!(contraction(&three_term()), Err(Error::NotNullHomotopic(_))));
}

#[test]
fn star_with_identity_is_neutral() {
    let c = crossing();
    let id = GradedComplex::<Bn>::one_term(FlatTangle::identity(2), 0, 0);
    let l = id.star(&c).unwrap();
    let r = c.star(&id).unwrap();
    for z in [&l, &r] {
        assert_eq!(z.len(), c.len());
        for (k, f) in &c.d {
            assert_eq!(&z.d[k], f);
        }
    }
}

#[test]
fn splice_two_cones() {
    // (A → E) and (𝕥^{-1}E → B) splice to (A → B) with the composite
    let alpha = TLElement::e(2, 1).unwrap();
    let beta = TLElement::e(2, 1).unwrap().compose(&TLElement::identity(2)).unwrap();
    let mut x1 = GradedComplex::<Tl>::new((2, 2));
    let a = x1.push("A", -1, 0, plain(2));
    let e = x1.push("E", 0, 0, plain(2));
    x1.add_d(a, e, alpha.clone()).unwrap();
    let mut x2 = GradedComplex::<Tl>::new((2, 2));
    let e2 = x2.push("E'", -1, 0, plain(2));
    let b = x2.push("B", 0, 0, plain(2));
    x2.add_d(e2, b, beta.clone()).unwrap();
    let z = splice(&[
        SplicePart { complex: x1, input: vec![], output: vec![e] },
        SplicePart { complex: x2, input: vec![e2], output: vec![] },
    ])
    .unwrap();
    assert_eq!(z.len(), 2);
    assert_eq!(z.d[&(0, 1)], beta.compose(&alpha).unwrap());
}

#[test]
fn splice_rejects_mismatched_interfaces() {
    let mut x1 = GradedComplex::<Tl>::new((2, 2));
    let e = x1.push("E", 0, 0, plain(2));
    let mut x2 = GradedComplex::<Tl>::new((2, 2));
    let e2 = x2.push("E'", 0, 0, plain(2));
    let r = splice(&[
        SplicePart { complex: x1, input: vec![], output: vec![e] },
        SplicePart { complex: x2, input: vec![e2], output: vec![] },
    ]);
    assert!(matches!(r, Err(Error::InterfaceMismatch(_))));
}

#[test]
fn transfer_with_identities_keeps_the_twist() {
    let x = square(false);
    let blocks = vec![vec![0], vec![1, 2], vec![3]];
    let ys: Vec<GradedComplex<Tl>> = blocks.iter().map(|b| x.restrict(b)).collect();
    let ids: Vec<ChainMap<Tl>> = ys.iter().map(|y| y.identity_map()).collect();
    let data = TransferData {
        x: x.clone(),
        blocks,
        y: ys,
        f: ids.clone(),
        g: ids,
        h: vec![ChainMap::zero(-1, 0); 3],
    };
    let (y, f) = perturb_transfer(&data).unwrap();
    assert_eq!(y.d, x.d);
    assert!(f.is_closed(&x, &y).unwrap());
}

#[test]
fn transfer_cancels_a_contractible_block() {
    // block 0: A --id--> B, block 1: C, twist A → C
    let mut x = GradedComplex::<Tl>::new((2, 2));
    let a = x.push("A", -1, 0, plain(2));
    let b = x.push("B", 0, 0, plain(2));
    let c = x.push("C", 0, 0, plain(2));
    x.add_d(a, b, TLElement::identity(2)).unwrap();
    x.add_d(a, c, TLElement::e(2, 1).unwrap()).unwrap();
    let mut h0 = ChainMap::zero(-1, 0);
    h0.add_entry(1, 0, TLElement::identity(2)).unwrap();
    let y1 = x.restrict(&[c]);
    let data = TransferData {
        x: x.clone(),
        blocks: vec![vec![a, b], vec![c]],
        y: vec![GradedComplex::new((2, 2)), y1.clone()],
        f: vec![ChainMap::zero(0, 0), y1.identity_map()],
        g: vec![ChainMap::zero(0, 0), y1.identity_map()],
        h: vec![h0, ChainMap::zero(-1, 0)],
    };
    let (y, f) = perturb_transfer(&data).unwrap();
    let g = gaussian_eliminate(&x).unwrap();
    assert_eq!(y.len(), g.len());
    assert_eq!(y.euler_class().unwrap(), x.euler_class().unwrap());
    assert!(f.is_closed(&x, &y).unwrap());
}

#[test]
fn combing_removes_a_killable_backward_arrow() {
    // block 0 = A (label (1,0)), block 1 = C → B (label (0,0)); A → B points backward
    let mut x = GradedComplex::<Tl>::new((2, 2));
    let a = x.push("A", 0, 0, plain(2));
    let c = x.push("C", 0, 0, plain(2));
    let b = x.push("B", 1, 0, plain(2));
    x.add_d(c, b, TLElement::identity(2)).unwrap();
    x.add_d(a, b, TLElement::e(2, 1).unwrap()).unwrap();
    let blocks = vec![vec![a], vec![c, b]];
    let combed = comb(&x, &blocks, &[(1, 0), (0, 0)]).unwrap();
    assert!(combed.is_complex());
    assert!(!combed.d.contains_key(&(a, b)));
    assert_eq!(combed.euler_class().unwrap(), x.euler_class().unwrap());
    // already combed: unchanged
    let again = comb(&combed, &blocks, &[(1, 0), (0, 0)]).unwrap();
    assert_eq!(again.d, combed.d);
}

#[test]
fn combing_reports_a_failed_hypothesis() {
    let mut x = GradedComplex::<Tl>::new((2, 2));
    let a = x.push("A", 0, 0, plain(2));
    let b = x.push("B", 1, 0, plain(2));
    x.add_d(a, b, TLElement::identity(2)).unwrap();
    let r = comb(&x, &[vec![a], vec![b]], &[(1, 0), (0, 0)]);
    assert!(matches!(r, Err(Error::HypothesisFailed(_))));
}

#[test]
fn json_round_trip() {
    let x = square(false);
    let s = serde_json::to_string(&x.to_json()).unwrap();
    let y = GradedComplex::<Tl>::from_json(serde_json::from_str(&s).unwrap()).unwrap();
    assert_eq!(y.gens, x.gens);
    assert_eq!(y.d, x.d);
    let u = closed_unknot();
    let s = serde_json::to_string(&u.to_json()).unwrap();
    let v = GradedComplex::<Bn>::from_json(serde_json::from_str(&s).unwrap()).unwrap();
    assert_eq!(v.gens, u.gens);
    assert_eq!(v.d, u.d);
    let bad = s.replace("\"BN\"", "\"TL\"");
    assert!(GradedComplex::<Bn>::from_json(serde_json::from_str(&bad).unwrap()).is_err());
}

#[test]
fn shift_flips_differential_signs() {
    let x = three_term();
    let y = x.shift(1, 2);
    assert!(y.is_complex());
    assert_eq!(y.gens[0].tdeg, 1);
    assert_eq!(y.gens[0].qshift, 2);
    assert_eq!(y.d[&(0, 1)], x.d[&(0, 1)].neg());
}
