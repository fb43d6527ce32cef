use std::collections::{BTreeMap, BTreeSet};

use super::{Base, ChainMap, Generator, GradedComplex};
use crate::coeff::FieldElem;
use crate::error::Result;

/// A simplified complex with the equivalence maps to and from the original.
#[derive(Clone, Debug)]
pub struct Tracked<B: Base> {
    pub complex: GradedComplex<B>,
    /// original → simplified
    pub to: ChainMap<B>,
    /// simplified → original
    pub from: ChainMap<B>,
    /// On the original complex, [δ, homotopy] = id − from ∘ to.
    pub homotopy: ChainMap<B>,
}

struct Maps<M> {
    // fin[cur][orig] = component orig → cur of the forward map
    fin: Vec<BTreeMap<usize, M>>,
    // gout[cur][orig] = component cur → orig of the backward map
    gout: Vec<BTreeMap<usize, M>>,
    // homotopy on the original complex, keyed by (orig, orig)
    h: BTreeMap<(usize, usize), M>,
}

struct Work<B: Base> {
    boundary: (usize, usize),
    floor: Option<i64>,
    gens: Vec<Option<Generator<B::Obj>>>,
    out: Vec<BTreeMap<usize, B::Mor>>,
    inn: Vec<BTreeSet<usize>>,
    maps: Option<Maps<B::Mor>>,
}

fn accumulate<B: Base>(map: &mut BTreeMap<usize, B::Mor>, k: usize, f: B::Mor) -> Result<()> {
    if B::is_zero(&f) {
        return Ok(());
    }
    if let Some(old) = map.remove(&k) {
        let s = B::add(&old, &f)?;
        if !B::is_zero(&s) {
            map.insert(k, s);
        }
    } else {
        map.insert(k, f);
    }
    Ok(())
}

impl<B: Base> Work<B> {
    fn new(c: &GradedComplex<B>, track: bool) -> Self {
        let n = c.len();
        let mut out = vec![BTreeMap::new(); n];
        let mut inn = vec![BTreeSet::new(); n];
        for (&(a, b), f) in &c.d {
            out[a].insert(b, f.clone());
            inn[b].insert(a);
        }
        let maps = track.then(|| {
            let ids: Vec<BTreeMap<usize, B::Mor>> =
                (0..n).map(|i| BTreeMap::from([(i, B::identity(&c.gens[i].object))])).collect();
            Maps { fin: ids.clone(), gout: ids, h: BTreeMap::new() }
        });
        Work { boundary: c.boundary, floor: c.floor, gens: c.gens.iter().cloned().map(Some).collect(), out, inn, maps }
    }

    fn add_d(&mut self, a: usize, b: usize, f: B::Mor) -> Result<()> {
        accumulate::<B>(&mut self.out[a], b, f)?;
        if self.out[a].contains_key(&b) {
            self.inn[b].insert(a);
        } else {
            self.inn[b].remove(&a);
        }
        Ok(())
    }

    fn remove(&mut self, i: usize) {
        for b in std::mem::take(&mut self.out[i]).into_keys() {
            self.inn[b].remove(&i);
        }
        for a in std::mem::take(&mut self.inn[i]) {
            self.out[a].remove(&i);
        }
        if let Some(m) = &mut self.maps {
            m.fin[i].clear();
            m.gout[i].clear();
        }
        self.gens[i] = None;
    }

    fn push(&mut self, g: Generator<B::Obj>) -> usize {
        self.gens.push(Some(g));
        self.out.push(BTreeMap::new());
        self.inn.push(BTreeSet::new());
        if let Some(m) = &mut self.maps {
            m.fin.push(BTreeMap::new());
            m.gout.push(BTreeMap::new());
        }
        self.gens.len() - 1
    }

    /// Replace generator i by the summands of a splitting of its object.
    fn split(&mut self, i: usize, parts: Vec<(i64, B::Obj, B::Mor, B::Mor)>) -> Result<()> {
        let g = self.gens[i].clone().expect("live generator");
        let ins: Vec<(usize, B::Mor)> = self.inn[i].iter().map(|&a| (a, self.out[a][&i].clone())).collect();
        let outs: Vec<(usize, B::Mor)> = self.out[i].iter().map(|(b, f)| (*b, f.clone())).collect();
        for (k, (s, obj, fwd, bwd)) in parts.into_iter().enumerate() {
            let p = self.push(Generator { id: format!("{}.{k}", g.id), tdeg: g.tdeg, qshift: g.qshift + s, object: obj });
            for (a, f) in &ins {
                self.add_d(*a, p, B::compose(&fwd, f)?)?;
            }
            for (b, f) in &outs {
                self.add_d(p, *b, B::compose(f, &bwd)?)?;
            }
            if let Some(m) = &mut self.maps {
                let fin: BTreeMap<usize, B::Mor> = m.fin[i]
                    .iter()
                    .map(|(x, f)| Ok((*x, B::compose(&fwd, f)?)))
                    .collect::<Result<_>>()?;
                let gout: BTreeMap<usize, B::Mor> = m.gout[i]
                    .iter()
                    .map(|(x, f)| Ok((*x, B::compose(f, &bwd)?)))
                    .collect::<Result<_>>()?;
                m.fin[p] = fin.into_iter().filter(|(_, f)| !B::is_zero(f)).collect();
                m.gout[p] = gout.into_iter().filter(|(_, f)| !B::is_zero(f)).collect();
            }
        }
        self.remove(i);
        Ok(())
    }

    fn deloop_all(&mut self) -> Result<bool> {
        let mut changed = false;
        let mut i = 0;
        while i < self.gens.len() {
            if let Some(g) = &self.gens[i] {
                if let Some(parts) = B::split(&g.object)? {
                    self.split(i, parts)?;
                    changed = true;
                }
            }
            i += 1;
        }
        Ok(changed)
    }

    /// Cancel d(b → c) = c0·id.
    fn eliminate(&mut self, b: usize, c: usize, c0: &FieldElem) -> Result<()> {
        let inv = c0.inv()?;
        let minus_inv = -inv.clone();
        let d_bc_out: Vec<(usize, B::Mor)> =
            self.out[b].iter().filter(|(e, _)| **e != c).map(|(e, f)| (*e, f.clone())).collect();
        let d_in_c: Vec<(usize, B::Mor)> =
            self.inn[c].iter().filter(|&&a| a != b).map(|&a| (a, self.out[a][&c].clone())).collect();
        for (a, dac) in &d_in_c {
            let scaled = B::scale(dac, &minus_inv);
            for (e, dbe) in &d_bc_out {
                self.add_d(*a, *e, B::compose(dbe, &scaled)?)?;
            }
        }
        if let Some(m) = &mut self.maps {
            // h += G(b) ∘ c0^{-1} ∘ F(c), using the maps before this step
            for (x, fxc) in &m.fin[c] {
                for (y, gby) in &m.gout[b] {
                    let t = B::scale(&B::compose(gby, fxc)?, &inv);
                    if B::is_zero(&t) {
                        continue;
                    }
                    let k = (*x, *y);
                    match m.h.remove(&k) {
                        Some(old) => {
                            let s = B::add(&old, &t)?;
                            if !B::is_zero(&s) {
                                m.h.insert(k, s);
                            }
                        }
                        None => {
                            m.h.insert(k, t);
                        }
                    }
                }
            }
            let fin_c = m.fin[c].clone();
            for (e, dbe) in &d_bc_out {
                let corr = B::scale(dbe, &minus_inv);
                for (x, fxc) in &fin_c {
                    accumulate::<B>(&mut m.fin[*e], *x, B::compose(&corr, fxc)?)?;
                }
            }
            let gout_b = m.gout[b].clone();
            for (a, dac) in &d_in_c {
                let scaled = B::scale(dac, &minus_inv);
                for (x, gbx) in &gout_b {
                    accumulate::<B>(&mut m.gout[*a], *x, B::compose(gbx, &scaled)?)?;
                }
            }
        }
        self.remove(b);
        self.remove(c);
        Ok(())
    }

    fn cancellable(&self, b: usize) -> Option<(usize, FieldElem)> {
        let gb = self.gens[b].as_ref()?;
        let mut best: Option<(usize, usize, FieldElem)> = None;
        for (&c, f) in &self.out[b] {
            let gc = self.gens[c].as_ref().expect("live target");
            if gc.qshift != gb.qshift || gc.object != gb.object {
                continue;
            }
            if let Some(c0) = B::identity_multiple(f, &gb.object) {
                let cost = self.inn[c].len() * self.out[b].len();
                if best.as_ref().is_none_or(|(bc, _, _)| cost < *bc) {
                    best = Some((cost, c, c0));
                }
            }
        }
        best.map(|(_, c, c0)| (c, c0))
    }

    fn eliminate_all(&mut self) -> Result<bool> {
        let mut changed = false;
        loop {
            let mut round = false;
            for b in 0..self.gens.len() {
                if let Some((c, c0)) = self.cancellable(b) {
                    self.eliminate(b, c, &c0)?;
                    round = true;
                }
            }
            if !round {
                return Ok(changed);
            }
            changed = true;
        }
    }

    #[allow(clippy::type_complexity)]
    fn finish(self, original_len: usize) -> (GradedComplex<B>, Option<(ChainMap<B>, ChainMap<B>, ChainMap<B>)>) {
        let live: Vec<usize> = (0..self.gens.len()).filter(|&i| self.gens[i].is_some()).collect();
        let mut pos = vec![usize::MAX; self.gens.len()];
        for (k, &i) in live.iter().enumerate() {
            pos[i] = k;
        }
        let mut c = GradedComplex::new(self.boundary);
        c.floor = self.floor;
        for &i in &live {
            c.gens.push(self.gens[i].clone().unwrap());
            for (b, f) in &self.out[i] {
                c.d.insert((pos[i], pos[*b]), f.clone());
            }
        }
        let maps = self.maps.map(|m| {
            let mut to = ChainMap::zero(0, 0);
            let mut from = ChainMap::zero(0, 0);
            for &i in &live {
                for (x, f) in &m.fin[i] {
                    debug_assert!(*x < original_len);
                    to.entries.insert((*x, pos[i]), f.clone());
                }
                for (x, f) in &m.gout[i] {
                    from.entries.insert((pos[i], *x), f.clone());
                }
            }
            let mut h = ChainMap::zero(-1, 0);
            h.entries = m.h;
            (to, from, h)
        });
        (c, maps)
    }
}

/// Replace every generator that splits (a tangle with circles) by its summands.
pub fn deloop_pass<B: Base>(c: &GradedComplex<B>) -> Result<GradedComplex<B>> {
    let mut w = Work::new(c, false);
    w.deloop_all()?;
    Ok(w.finish(c.len()).0)
}

/// Cancel differential entries that are unit multiples of identities until none remain.
pub fn gaussian_eliminate<B: Base>(c: &GradedComplex<B>) -> Result<GradedComplex<B>> {
    let mut w = Work::new(c, false);
    w.eliminate_all()?;
    Ok(w.finish(c.len()).0)
}

fn run<B: Base>(w: &mut Work<B>) -> Result<()> {
    loop {
        let a = w.deloop_all()?;
        let b = w.eliminate_all()?;
        if !a && !b {
            return Ok(());
        }
    }
}

/// Delooping and Gaussian elimination alternated to a fixpoint.
pub fn simplify<B: Base>(c: &GradedComplex<B>) -> Result<GradedComplex<B>> {
    let mut w = Work::new(c, false);
    run(&mut w)?;
    Ok(w.finish(c.len()).0)
}

/// As `simplify`, also returning the homotopy equivalences.
pub fn simplify_tracked<B: Base>(c: &GradedComplex<B>) -> Result<Tracked<B>> {
    let mut w = Work::new(c, true);
    run(&mut w)?;
    let (complex, maps) = w.finish(c.len());
    let (to, from, homotopy) = maps.expect("tracking was requested");
    Ok(Tracked { complex, to, from, homotopy })
}
