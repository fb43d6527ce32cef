use cheb_core::chebyshev::*;
use cheb_core::coeff::{qint, FieldElem};
use cheb_core::complex::ranks;
use itertools::Itertools;

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn indicator(n: usize) -> Vec<FieldElem> {
    (0..=n).map(|k| if k == n { FieldElem::one() } else { FieldElem::zero() }).collect()
}

#[test]
fn pairing_counts() {
    for n in 0..=8 {
        for k in 0..=n / 2 {
            assert_eq!(pairings(n, k).len(), binom(n - k, k), "n={n} k={k}");
        }
    }
    assert_eq!(pairings(4, 2), vec![vec![0, 2]]);
}

#[test]
fn khovanov_ranks_and_d_squared() {
    for n in 0..=8 {
        let v = khovanov_complex(n);
        assert!(v.is_complex(), "d² ≠ 0 for n={n}");
        let r = ranks(&v);
        for k in 0..=n / 2 {
            assert_eq!(r[&-(k as i64)], binom(n - k, k));
        }
    }
    let r4 = ranks(&khovanov_complex(4));
    assert_eq!(r4.values().copied().collect_vec(), vec![1, 3, 1]);
}

#[test]
fn khovanov_closure_is_chebyshev() {
    for n in 0..=8 {
        let class = euler_characteristic(&khovanov_complex(n)).unwrap();
        let coeffs = class_chebyshev(&class).unwrap();
        assert_eq!(coeffs, indicator(n), "n={n}");
        assert_eq!(class_trace(&class).unwrap(), qint(n as u32 + 1));
    }
}

#[test]
fn cone_decomposition() {
    for n in 2..=6 {
        let d = kh_cone_decomposition(n).unwrap();
        assert!(d.matches, "n={n}");
        assert!(d.map_is_iota, "n={n}");
        assert_eq!(d.paired.len() + d.unpaired.len(), khovanov_complex(n).len());
    }
}

#[test]
fn jw_structure_maps() {
    for n in 2..=6 {
        jw_maps(n).unwrap();
    }
    let s = jw_system(5).unwrap();
    assert_eq!(s.n_max(), 5);
}

#[test]
fn jw_triangles() {
    let s = jw_system(6).unwrap();
    for n in 2..=6 {
        let w = triangle_check(&s, n).unwrap();
        assert_eq!(w.cone.len(), 2);
    }
}

#[test]
fn khovanov_triangles() {
    let s = khovanov_system(6).unwrap();
    for n in 2..=6 {
        let w = triangle_check(&s, n).unwrap();
        assert!(w.phi.is_closed(&s.v[n], &w.cone).unwrap(), "n={n}");
    }
}

#[test]
fn theta_between_models() {
    let kh = khovanov_system(4).unwrap();
    let jw = jw_system(4).unwrap();
    let theta = build_theta(&kh, &jw, 4).unwrap();
    assert_eq!(theta.len(), 5);
    for n in 0..=4 {
        assert!(theta[n].is_closed(&kh.v[n], &jw.v[n]).unwrap());
    }
}

#[test]
fn jw_class_is_chebyshev() {
    let s = jw_system(5).unwrap();
    for n in 0..=5 {
        let class = euler_characteristic(&s.v[n]).unwrap();
        assert_eq!(class_chebyshev(&class).unwrap(), indicator(n));
    }
}
