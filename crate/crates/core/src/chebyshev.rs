//! Chebyshev systems in Kar(TL): the Jones–Wenzl model, the Khovanov model V_n, and
//! comparison maps between systems.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::coeff::{qint_ratio, FieldElem};
use crate::complex::{contraction, null_homotopy_solve, ChainMap, GradedComplex, Tl};
use crate::error::{Error, Result};
use crate::tl::{annular_skein_closure, chebyshev_coefficients, jones_wenzl, markov_trace, KaroubiObject, TLElement, ZPoly};

/// Left positions of the pairs, increasing.
pub type Pairing = Vec<usize>;

/// All k-pairings of n dots: k disjoint pairs of neighbouring dots.
pub fn pairings(n: usize, k: usize) -> Vec<Pairing> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Pairing, out: &mut Vec<Pairing>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        let mut p = start;
        while p + 2 * k <= n {
            cur.push(p);
            go(p + 2, n, k - 1, cur, out);
            cur.pop();
            p += 1;
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn pairing_id(s: &Pairing) -> String {
    let body: Vec<String> = s.iter().map(|p| format!("{}{}", p + 1, p + 2)).collect();
    format!("s[{}]", body.join(","))
}

/// Index of each pairing of n dots in `khovanov_complex(n)`.
fn pairing_index(n: usize) -> HashMap<Pairing, usize> {
    let mut idx = HashMap::new();
    for k in 0..=n / 2 {
        for s in pairings(n, k) {
            let i = idx.len();
            idx.insert(s, i);
        }
    }
    idx
}

/// The complex V_n: k-pairings in degree −k, edges s → s∖{p} given by a signed cup.
pub fn khovanov_complex(n: usize) -> GradedComplex<Tl> {
    let mut c = GradedComplex::new((n, n));
    let idx = pairing_index(n);
    let mut order: Vec<(&Pairing, &usize)> = idx.iter().collect();
    order.sort_by_key(|(_, i)| **i);
    for (s, _) in &order {
        c.push(pairing_id(s), -(s.len() as i64), 0, KaroubiObject::plain(n - 2 * s.len()));
    }
    for (s, &i) in &order {
        let k = s.len();
        let len = n - 2 * k;
        for (r, &p) in s.iter().enumerate() {
            let mut t = (*s).clone();
            t.remove(r);
            let unpaired_left = p - 2 * r;
            let sign = if (k - 1 - r) % 2 == 0 { FieldElem::one() } else { FieldElem::from_int(-1) };
            let cup = TLElement::cup(len + 2, unpaired_left + 1).expect("cup position in range").scale(&sign);
            c.add_d(i, idx[&t], cup).expect("degrees are adjacent");
        }
    }
    c
}

/// Explicit splitting of V_n along the status of the rightmost dot.
#[derive(Clone, Debug, Serialize)]
pub struct ConeDecomposition {
    pub n: usize,
    /// Generators of V_n whose rightmost dot is paired, in the order of V_{n−2}.
    pub paired: Vec<usize>,
    /// Generators whose rightmost dot is free, in the order of V_{n−1} ⊗ V.
    pub unpaired: Vec<usize>,
    /// V_n equals Cone(id ⊗ coev) under this bijection.
    pub matches: bool,
    /// The cone map agrees with (π ⊗ id) ∘ (id ⊗ coev).
    pub map_is_iota: bool,
}

/// Compare V_n with Cone(V_{n−2} → V_{n−1} ⊗ V).
pub fn kh_cone_decomposition(n: usize) -> Result<ConeDecomposition> {
    if n < 2 {
        return Err(Error::InvalidPosition { n, i: 2 });
    }
    let vn = khovanov_complex(n);
    let x = khovanov_complex(n - 2);
    let y = khovanov_complex(n - 1).tensor(&GradedComplex::plain(1))?;
    let idx_n = pairing_index(n);
    let idx_x = pairing_index(n - 2);
    let idx_y = pairing_index(n - 1);
    let mut paired = vec![0; x.len()];
    for (s, &i) in &idx_x {
        let mut t = s.clone();
        t.push(n - 2);
        paired[i] = idx_n[&t];
    }
    let mut unpaired = vec![0; y.len()];
    for (s, &i) in &idx_y {
        unpaired[i] = idx_n[s];
    }
    let mut f = ChainMap::zero(0, 0);
    for (s, &i) in &idx_x {
        let len = n - 2 - 2 * s.len();
        let m = TLElement::identity(len).juxtapose(&TLElement::cup(2, 1)?);
        f.add_entry(i, idx_y[s], m)?;
    }
    let cone = GradedComplex::cone(&x, &y, &f)?;
    let mut to_n: Vec<usize> = paired.clone();
    to_n.extend(unpaired.iter().copied());
    let mut matches = cone.len() == vn.len() && cone.d.len() == vn.d.len();
    if matches {
        for (&(a, b), m) in &cone.d {
            if vn.d.get(&(to_n[a], to_n[b])) != Some(m) {
                matches = false;
                break;
            }
        }
        for (i, g) in cone.gens.iter().enumerate() {
            let h = &vn.gens[to_n[i]];
            matches &= g.tdeg == h.tdeg && g.object == h.object;
        }
    }
    let sys = khovanov_system(n - 1)?;
    let iota = sys.iota(n)?;
    let map_is_iota = iota.entries == f.entries;
    Ok(ConeDecomposition { n, paired, unpaired, matches, map_is_iota })
}

/// A Chebyshev system: complexes V^{(n)} and maps π^{(n)}: V^{(n−1)} ⊗ V → V^{(n)}.
#[derive(Clone, Debug)]
pub struct ChebyshevSystem {
    pub name: String,
    pub v: Vec<GradedComplex<Tl>>,
    /// `pi[n]` for n ≥ 1; `pi[0]` is unused.
    pub pi: Vec<ChainMap<Tl>>,
}

impl ChebyshevSystem {
    pub fn n_max(&self) -> usize {
        self.v.len() - 1
    }

    pub fn complex(&self, n: usize) -> Result<&GradedComplex<Tl>> {
        self.v.get(n).ok_or_else(|| Error::NoSuchBlock(format!("{} system has no V^({n})", self.name)))
    }

    /// V^{(n)} ⊗ V
    pub fn tensor_v(&self, n: usize) -> Result<GradedComplex<Tl>> {
        self.complex(n)?.tensor(&GradedComplex::plain(1))
    }

    /// ι^{(n−2)} = (π^{(n−1)} ⊗ id) ∘ (id ⊗ coev): V^{(n−2)} → V^{(n−1)} ⊗ V.
    pub fn iota(&self, n: usize) -> Result<ChainMap<Tl>> {
        if n < 2 || n - 1 > self.n_max() {
            return Err(Error::NoSuchBlock(format!("ι for n = {n}")));
        }
        let x = self.complex(n - 2)?;
        let coev = TLElement::cup(2, 1)?;
        let mut out = ChainMap::zero(0, 0);
        for (&(i, j), p) in &self.pi[n - 1].entries {
            let e = &x.gens[i].object.idempotent;
            let m = p.juxtapose(&TLElement::identity(1)).compose(&e.juxtapose(&coev))?;
            out.add_entry(i, j, m)?;
        }
        Ok(out)
    }
}

/// One-term complex on the object im e.
fn one_term(e: TLElement) -> GradedComplex<Tl> {
    GradedComplex::one_term(KaroubiObject::unchecked(e), 0, 0)
}

/// The Khovanov system with π^{(n)} the inclusion of pairings with a free rightmost dot.
pub fn khovanov_system(n_max: usize) -> Result<ChebyshevSystem> {
    let v: Vec<GradedComplex<Tl>> = (0..=n_max).map(khovanov_complex).collect();
    let mut pi = vec![ChainMap::zero(0, 0)];
    for n in 1..=n_max {
        let idx_n = pairing_index(n);
        let mut m = ChainMap::zero(0, 0);
        for (s, i) in pairing_index(n - 1) {
            let len = n - 2 * s.len();
            m.add_entry(i, idx_n[&s], TLElement::identity(len))?;
        }
        pi.push(m);
    }
    Ok(ChebyshevSystem { name: "khovanov".into(), v, pi })
}

/// Structure maps of the Jones–Wenzl system at one n ≥ 2.
#[derive(Clone, Debug)]
pub struct JwMaps {
    pub n: usize,
    /// im(p_{n−1} ⊔ 1) → im p_n
    pub pi: TLElement,
    /// im p_n → im(p_{n−1} ⊔ 1)
    pub rho: TLElement,
    /// im p_{n−2} → im(p_{n−1} ⊔ 1)
    pub iota: TLElement,
    /// im(p_{n−1} ⊔ 1) → im p_{n−2}
    pub kappa: TLElement,
}

/// π, ρ, ι, κ for the Jones–Wenzl system; checks ικ = id − ρπ, κι = id and πρ = id.
pub fn jw_maps(n: usize) -> Result<JwMaps> {
    if n < 2 {
        return Err(Error::InvalidPosition { n, i: 2 });
    }
    let pn = jones_wenzl(n);
    let p1 = jones_wenzl(n - 1).pad_right(1);
    let p2 = jones_wenzl(n - 2);
    let iota = p1.compose(&p2.juxtapose(&TLElement::cup(2, 1)?))?;
    let kappa = p2
        .compose(&TLElement::cap(n, n - 1)?)?
        .compose(&p1)?
        .scale(&qint_ratio(n as u32 - 1, n as u32));
    let m = JwMaps { n, pi: pn.clone(), rho: pn.clone(), iota, kappa };
    if m.iota.compose(&m.kappa)? != p1.sub(&m.rho.compose(&m.pi)?)? {
        return Err(Error::NotATriangle(format!("dh ≠ id − ρπ at n = {n}")));
    }
    if m.kappa.compose(&m.iota)? != p2 {
        return Err(Error::NotATriangle(format!("hd ≠ id at n = {n}")));
    }
    if m.pi.compose(&m.rho)? != pn {
        return Err(Error::NotATriangle(format!("πρ ≠ id at n = {n}")));
    }
    Ok(m)
}

/// One-term complexes im p_n with π^{(n)} = p_n; the structure identities are checked for each n.
pub fn jw_system(n_max: usize) -> Result<ChebyshevSystem> {
    let v: Vec<GradedComplex<Tl>> = (0..=n_max).map(|n| one_term(jones_wenzl(n))).collect();
    let mut pi = vec![ChainMap::zero(0, 0)];
    for n in 1..=n_max {
        if n >= 2 {
            jw_maps(n)?;
        }
        let mut m = ChainMap::zero(0, 0);
        m.add_entry(0, 0, jones_wenzl(n))?;
        pi.push(m);
    }
    Ok(ChebyshevSystem { name: "jw".into(), v, pi })
}

/// Maps exhibiting V^{(n)} ≃ Cone(ι^{(n−2)}).
#[derive(Clone, Debug)]
pub struct TriangleWitness {
    pub n: usize,
    pub iota: ChainMap<Tl>,
    pub cone: GradedComplex<Tl>,
    /// Cone(ι) → V^{(n)}, equal to π^{(n)} on V^{(n−1)} ⊗ V.
    pub phi_bar: ChainMap<Tl>,
    /// V^{(n)} → Cone(ι), a homotopy inverse of φ̄.
    pub phi: ChainMap<Tl>,
    /// Cone(φ̄) contracts by Gaussian elimination alone.
    pub split: bool,
}

fn full_window(c: &GradedComplex<Tl>) -> (i64, i64) {
    c.tdeg_range().map_or((0, 0), |(lo, hi)| (lo - 1, hi + 1))
}

/// Verify the distinguished triangle V^{(n−2)} → V^{(n−1)} ⊗ V → V^{(n)}.
pub fn triangle_check(sys: &ChebyshevSystem, n: usize) -> Result<TriangleWitness> {
    let fail = |what: &str, e: Error| Error::NotATriangle(format!("{} n = {n}: {what}: {e}", sys.name));
    let x = sys.complex(n - 2)?;
    let y = sys.tensor_v(n - 1)?;
    let vn = sys.complex(n)?;
    let iota = sys.iota(n)?;
    let cone = GradedComplex::cone(x, &y, &iota).map_err(|e| fail("ι is not a chain map", e))?;
    let pi_iota = sys.pi[n].compose(&iota)?;
    let h = null_homotopy_solve(&pi_iota, x, vn, full_window(x)).map_err(|e| fail("π∘ι is not null-homotopic", e))?;
    let off = x.len();
    let mut phi_bar = ChainMap::zero(0, 0);
    for (&(i, j), m) in &h.entries {
        phi_bar.add_entry(i, j, m.clone())?;
    }
    for (&(i, j), m) in &sys.pi[n].entries {
        phi_bar.add_entry(off + i, j, m.clone())?;
    }
    if !phi_bar.is_closed(&cone, vn)? {
        return Err(Error::NotATriangle(format!("{} n = {n}: φ̄ is not a chain map", sys.name)));
    }
    let c2 = GradedComplex::cone(&cone, vn, &phi_bar)?;
    let split = crate::complex::gaussian_eliminate(&c2)?.is_empty();
    let big_h = contraction(&c2).map_err(|e| fail("φ̄ is not a homotopy equivalence", e))?;
    let m = cone.len();
    let mut phi = ChainMap::zero(0, 0);
    for (&(a, b), f) in &big_h.entries {
        if a >= m && b < m {
            phi.add_entry(a - m, b, f.clone())?;
        }
    }
    if !phi.is_closed(vn, &cone)? {
        return Err(Error::NotATriangle(format!("{} n = {n}: extracted φ is not a chain map", sys.name)));
    }
    Ok(TriangleWitness { n, iota, cone, phi_bar, phi, split })
}

fn tensor_id(f: &ChainMap<Tl>) -> Result<ChainMap<Tl>> {
    let mut out = ChainMap::zero(f.tdeg, f.qdeg);
    for (&(i, j), m) in &f.entries {
        out.add_entry(i, j, m.juxtapose(&TLElement::identity(1)))?;
    }
    Ok(out)
}

/// Homotopy equivalences θ^{(n)}: A.V^{(n)} → B.V^{(n)} completing morphisms of triangles.
pub fn build_theta(a: &ChebyshevSystem, b: &ChebyshevSystem, n_max: usize) -> Result<Vec<ChainMap<Tl>>> {
    if a.n_max() < n_max || b.n_max() < n_max {
        return Err(Error::NoSuchBlock(format!("systems stop before n = {n_max}")));
    }
    let mut theta: Vec<ChainMap<Tl>> = Vec::new();
    for n in 0..=n_max.min(1) {
        let (va, vb) = (a.complex(n)?, b.complex(n)?);
        if va.len() != 1 || vb.len() != 1 || va.gens[0].object != vb.gens[0].object {
            return Err(Error::CompletionFailed(format!("V^({n}) differs between the systems")));
        }
        theta.push(va.identity_map());
    }
    for n in 2..=n_max {
        let fail = |what: &str| Error::CompletionFailed(format!("n = {n}: {what}"));
        let wa = triangle_check(a, n)?;
        let wb = triangle_check(b, n)?;
        let xa = a.complex(n - 2)?;
        let yb = b.tensor_v(n - 1)?;
        let t1 = tensor_id(&theta[n - 1])?;
        let t2 = &theta[n - 2];
        let defect = t1.compose(&wa.iota)?.sub(&wb.iota.compose(t2)?)?;
        let h = null_homotopy_solve(&defect, xa, &yb, full_window(xa)).map_err(|_| fail("left square does not commute"))?;
        let (offa, offb) = (xa.len(), b.complex(n - 2)?.len());
        let mut tc = ChainMap::zero(0, 0);
        for (&(i, j), m) in &t2.entries {
            tc.add_entry(i, j, m.clone())?;
        }
        for (&(i, j), m) in &t1.entries {
            tc.add_entry(offa + i, offb + j, m.clone())?;
        }
        for (&(i, j), m) in &h.entries {
            tc.add_entry(i, offb + j, m.clone())?;
        }
        if !tc.is_closed(&wa.cone, &wb.cone)? {
            return Err(fail("cone map is not a chain map"));
        }
        let th = wb.phi_bar.compose(&tc)?.compose(&wa.phi)?;
        let (va, vb) = (a.complex(n)?, b.complex(n)?);
        if !th.is_closed(va, vb)? {
            return Err(fail("θ is not a chain map"));
        }
        let c = GradedComplex::cone(va, vb, &th)?;
        contraction(&c).map_err(|_| fail("θ is not a homotopy equivalence"))?;
        theta.push(th);
    }
    Ok(theta)
}

/// Class of a bounded TL complex: Σ (−1)^t q^{qshift} [idempotent], grouped by strand count.
pub fn euler_characteristic(c: &GradedComplex<Tl>) -> Result<BTreeMap<usize, TLElement>> {
    c.euler_class()
}

/// Annular closure of a class, as a polynomial in z.
pub fn class_closure(class: &BTreeMap<usize, TLElement>) -> Result<ZPoly> {
    let mut out = ZPoly::zero();
    for x in class.values() {
        out = out.add(&annular_skein_closure(x)?);
    }
    Ok(out)
}

/// Coefficients of the closure in the basis S_k.
pub fn class_chebyshev(class: &BTreeMap<usize, TLElement>) -> Result<Vec<FieldElem>> {
    Ok(chebyshev_coefficients(&class_closure(class)?))
}

/// Sum of the Markov traces of the components of a class.
pub fn class_trace(class: &BTreeMap<usize, TLElement>) -> Result<FieldElem> {
    let parts: Vec<FieldElem> = class.values().map(markov_trace).collect::<Result<_>>()?;
    Ok(crate::coeff::sum(parts.iter()))
}
