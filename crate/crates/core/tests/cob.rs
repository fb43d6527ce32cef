use std::collections::BTreeMap;

use cheb_core::cob::{self, hom_basis, normalize_component, saddle, tqft, Cob, Comp};
use cheb_core::{FieldElem, FlatTangle};

/// Linear map A^{⊗c1} → A^{⊗c2} of a cobordism between collections of circles.
fn closed_tqft(c: &Cob) -> BTreeMap<(u64, u64), FieldElem> {
    assert_eq!(c.src().points(), 0);
    let c1 = c.src().circles() as usize;
    let mut out: BTreeMap<(u64, u64), FieldElem> = BTreeMap::new();
    for (mask, coeff) in c.terms() {
        let src_dots = mask & ((1 << c1) - 1);
        let tgt = mask >> c1;
        for input in 0u64..(1 << c1) {
            // each source disk pairs by ε(x^dot · x^input)
            let ok = (0..c1).all(|i| ((src_dots >> i) & 1) + ((input >> i) & 1) == 1);
            if ok {
                *out.entry((tgt, input)).or_default() += coeff;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn matmul(a: &BTreeMap<(u64, u64), FieldElem>, b: &BTreeMap<(u64, u64), FieldElem>) -> BTreeMap<(u64, u64), FieldElem> {
    let mut out: BTreeMap<(u64, u64), FieldElem> = BTreeMap::new();
    for ((i, k), x) in a {
        for ((k2, j), y) in b {
            if k == k2 {
                *out.entry((*i, *j)).or_default() += &(x * y);
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn cap_off(k: usize) -> FlatTangle {
    let pairs: Vec<(usize, usize)> = (0..k / 2).map(|i| (2 * i, 2 * i + 1)).collect();
    FlatTangle::from_pairs(k, 0, &pairs, 0).unwrap()
}

/// Close a cobordism over (n, m) into one between circle collections.
fn close(c: &Cob) -> Cob {
    let (n, m) = (c.src().n(), c.src().m());
    let c = if n % 2 == 1 { c.juxtapose(&Cob::identity(&FlatTangle::identity(1))) } else { c.clone() };
    let (n, m) = (n + n % 2, m + m % 2);
    let top = Cob::identity(&cap_off(m));
    let bottom = Cob::identity(&cap_off(n).reflect());
    top.star(&c).unwrap().star(&bottom).unwrap()
}

fn tangles_upto(total: usize) -> Vec<FlatTangle> {
    let mut v = Vec::new();
    for n in 0..=total {
        for m in 0..=total - n {
            if (n + m) % 2 == 0 {
                v.extend(FlatTangle::all(n, m));
            }
        }
    }
    v
}

fn basis(s: &FlatTangle, t: &FlatTangle) -> Vec<Cob> {
    (-6..=6).flat_map(|d| hom_basis(s, t, d).unwrap()).collect()
}

#[test]
fn surface_rewrites_match_frobenius_algebra() {
    for g in 0..4i64 {
        for d in 0..4u32 {
            for b in 0..6usize {
                let curves: Vec<usize> = (0..b).collect();
                let got: BTreeMap<u64, i64> = normalize_component(g, d, &curves).into_iter().collect();
                let want = tqft::connected_surface(g as u32, d, b);
                assert_eq!(got, want, "g={g} d={d} b={b}");
            }
        }
    }
}

#[test]
fn composites_agree_with_closed_tqft() {
    let ts = tangles_upto(4);
    let mut checked = 0;
    for s in &ts {
        for t in ts.iter().filter(|t| t.n() == s.n() && t.m() == s.m()) {
            for u in ts.iter().filter(|u| u.n() == s.n() && u.m() == s.m()) {
                for a in basis(s, t) {
                    for b in basis(t, u) {
                        let ba = b.compose(&a).unwrap();
                        let lhs = closed_tqft(&close(&ba));
                        let rhs = matmul(&closed_tqft(&close(&b)), &closed_tqft(&close(&a)));
                        assert_eq!(lhs, rhs, "{a:?} then {b:?}");
                        if let (Some(x), Some(y)) = (a.degree(), b.degree()) {
                            if !ba.is_zero() {
                                assert_eq!(ba.degree(), Some(x + y));
                            }
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn interchange_law() {
    let id2 = FlatTangle::identity(2);
    let tb = FlatTangle::turnback(2, 1).unwrap();
    let s = saddle(&id2, Comp::SrcArc(0), Comp::SrcArc(1)).unwrap();
    let t = saddle(&tb, Comp::SrcArc(0), Comp::SrcArc(2)).unwrap();
    let x = Cob::dot(&id2, Comp::SrcArc(0)).unwrap();
    // (t ∘ s) ⋆ (s' ∘ x) = (t ⋆ s') ∘ (s ⋆ x)
    let lhs = t.compose(&s).unwrap().star(&s.compose(&x).unwrap()).unwrap();
    let rhs = t.star(&s).unwrap().compose(&s.star(&x).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn associativity_on_random_chains() {
    let id3 = FlatTangle::identity(3);
    let s1 = saddle(&id3, Comp::SrcArc(0), Comp::SrcArc(1)).unwrap();
    let mid = s1.tgt().clone();
    let back = basis(&mid, &id3);
    let loops = basis(&id3, &id3);
    for b in &back {
        for c in loops.iter().take(6) {
            let l = c.compose(b).unwrap().compose(&s1).unwrap();
            let r = c.compose(&b.compose(&s1).unwrap()).unwrap();
            assert_eq!(l, r);
        }
    }
}

#[test]
fn dotted_sphere_and_torus_via_closing() {
    let o = FlatTangle::empty().with_circles(1);
    let e = FlatTangle::empty();
    let cup = Cob::config(&e, &o, 0, FieldElem::one()).unwrap();
    let dcap = Cob::config(&o, &e, 1, FieldElem::one()).unwrap();
    assert_eq!(cob::closed_value(&dcap.compose(&cup).unwrap()), Some(FieldElem::one()));
    let x = Cob::dot(&o, Comp::SrcCircle(0)).unwrap();
    assert!(x.compose(&x).unwrap().is_zero());
}
