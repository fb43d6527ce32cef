//! Flat (n, m)-tangles: noncrossing matchings plus a count of free circles.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Labels 0..n are B1..Bn, labels n..n+m are T1..Tm.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlatTangle {
    n: u8,
    m: u8,
    matching: Vec<u8>,
    circles: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Identity,
    Cup,
    Cap,
    Turnback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TangleGenerator {
    pub kind: GeneratorKind,
    pub n: usize,
    pub i: usize,
}

impl FlatTangle {
    /// Build from a partner table; validates involution and planarity.
    pub fn from_matching(n: usize, m: usize, matching: Vec<usize>, circles: u32) -> Result<Self> {
        if n + m > u8::MAX as usize {
            return Err(Error::InvalidTangle(format!("too many points: {}", n + m)));
        }
        if matching.len() != n + m || !(n + m).is_multiple_of(2) {
            return Err(Error::InvalidTangle("wrong number of points".into()));
        }
        for (i, &j) in matching.iter().enumerate() {
            if j >= n + m || j == i || matching[j] != i {
                return Err(Error::InvalidTangle(format!("label {i} is not properly matched")));
            }
        }
        let t = FlatTangle {
            n: n as u8,
            m: m as u8,
            matching: matching.into_iter().map(|x| x as u8).collect(),
            circles,
        };
        if !t.is_noncrossing() {
            return Err(Error::InvalidTangle("matching crosses".into()));
        }
        Ok(t)
    }

    pub fn from_pairs(n: usize, m: usize, pairs: &[(usize, usize)], circles: u32) -> Result<Self> {
        let mut matching = vec![usize::MAX; n + m];
        for &(a, b) in pairs {
            if a >= n + m || b >= n + m || matching[a] != usize::MAX || matching[b] != usize::MAX {
                return Err(Error::InvalidTangle(format!("bad pair ({a}, {b})")));
            }
            matching[a] = b;
            matching[b] = a;
        }
        if matching.contains(&usize::MAX) {
            return Err(Error::InvalidTangle("unmatched point".into()));
        }
        Self::from_matching(n, m, matching, circles)
    }

    fn raw(n: usize, m: usize, matching: Vec<u8>, circles: u32) -> Self {
        FlatTangle { n: n as u8, m: m as u8, matching, circles }
    }

    pub fn identity(n: usize) -> Self {
        let matching = (0..2 * n).map(|i| ((i + n) % (2 * n)) as u8).collect();
        Self::raw(n, n, matching, 0)
    }

    /// The empty (0,0) tangle.
    pub fn empty() -> Self {
        Self::raw(0, 0, Vec::new(), 0)
    }

    /// (n, n-2): joins bottom points i and i+1 (1-based).
    pub fn cap(n: usize, i: usize) -> Result<Self> {
        if n < 2 || i < 1 || i > n - 1 {
            return Err(Error::InvalidPosition { n, i });
        }
        let m = n - 2;
        let mut matching = vec![0u8; n + m];
        let (a, b) = (i - 1, i);
        matching[a] = b as u8;
        matching[b] = a as u8;
        let mut t = 0;
        for j in 0..n {
            if j == a || j == b {
                continue;
            }
            matching[j] = (n + t) as u8;
            matching[n + t] = j as u8;
            t += 1;
        }
        Ok(Self::raw(n, m, matching, 0))
    }

    /// (n-2, n): joins top points i and i+1 (1-based).
    pub fn cup(n: usize, i: usize) -> Result<Self> {
        Ok(Self::cap(n, i)?.reflect())
    }

    /// cup_i ∘ cap_i on n strands.
    pub fn turnback(n: usize, i: usize) -> Result<Self> {
        Self::cup(n, i)?.compose(&Self::cap(n, i)?)
    }

    pub fn make_generator(g: TangleGenerator) -> Result<Self> {
        match g.kind {
            GeneratorKind::Identity => Ok(Self::identity(g.n)),
            GeneratorKind::Cap => Self::cap(g.n, g.i),
            GeneratorKind::Cup => Self::cup(g.n, g.i),
            GeneratorKind::Turnback => Self::turnback(g.n, g.i),
        }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn circles(&self) -> u32 {
        self.circles
    }

    pub fn points(&self) -> usize {
        self.matching.len()
    }

    pub fn partner(&self, label: usize) -> usize {
        self.matching[label] as usize
    }

    pub fn is_bottom(&self, label: usize) -> bool {
        label < self.n as usize
    }

    pub fn with_circles(&self, circles: u32) -> Self {
        FlatTangle { circles, ..self.clone() }
    }

    pub fn without_circles(&self) -> Self {
        self.with_circles(0)
    }

    /// Pairs (a, b) with a < b in increasing order of a.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.points()).filter(|&a| a < self.partner(a)).map(|a| (a, self.partner(a))).collect()
    }

    pub fn label_name(&self, label: usize) -> String {
        if label < self.n() {
            format!("B{}", label + 1)
        } else {
            format!("T{}", label - self.n() + 1)
        }
    }

    /// Position of a label in the counterclockwise disc order B1..Bn, Tm..T1.
    pub fn disc_position(&self, label: usize) -> usize {
        let n = self.n();
        if label < n {
            label
        } else {
            n + (self.m() - 1 - (label - n))
        }
    }

    pub fn is_noncrossing(&self) -> bool {
        let total = self.points();
        let mut at = vec![0usize; total];
        for l in 0..total {
            at[self.disc_position(l)] = l;
        }
        let mut stack = Vec::new();
        for pos in 0..total {
            let l = at[pos];
            let pp = self.disc_position(self.partner(l));
            if pp > pos {
                stack.push(pos);
            } else if stack.pop() != Some(pp) {
                return false;
            }
        }
        stack.is_empty()
    }

    /// Vertical stacking: `self` on top of `bottom`.
    pub fn compose(&self, bottom: &FlatTangle) -> Result<FlatTangle> {
        if self.n != bottom.m {
            return Err(Error::BoundaryMismatch(format!(
                "top expects {} points, bottom provides {}",
                self.n, bottom.m
            )));
        }
        let (n, k, m) = (bottom.n(), bottom.m(), self.m());
        let mut out = vec![u8::MAX; n + m];
        let mut mid_seen = vec![false; k];
        // Follow from an outer endpoint until we exit at another outer endpoint.
        let walk = |start_in_bottom: bool, start: usize, mid_seen: &mut Vec<bool>| -> usize {
            let mut in_bottom = start_in_bottom;
            let mut label = start;
            loop {
                if in_bottom {
                    let p = bottom.partner(label);
                    if p < n {
                        return p;
                    }
                    let j = p - n;
                    mid_seen[j] = true;
                    in_bottom = false;
                    label = j;
                } else {
                    let p = self.partner(label);
                    if p >= k {
                        return n + (p - k);
                    }
                    mid_seen[p] = true;
                    in_bottom = true;
                    label = n + p;
                }
            }
        };
        for b in 0..n {
            if out[b] == u8::MAX {
                let e = walk(true, b, &mut mid_seen);
                out[b] = e as u8;
                out[e] = b as u8;
            }
        }
        for t in 0..m {
            if out[n + t] == u8::MAX {
                let e = walk(false, k + t, &mut mid_seen);
                out[n + t] = e as u8;
                out[e] = (n + t) as u8;
            }
        }
        let mut loops = 0;
        for j in 0..k {
            if mid_seen[j] {
                continue;
            }
            loops += 1;
            let mut cur = j;
            loop {
                mid_seen[cur] = true;
                // up through top tangle, then down through bottom tangle
                let up = self.partner(cur);
                debug_assert!(up < k);
                mid_seen[up] = true;
                let down = bottom.partner(n + up) - n;
                if down == j {
                    break;
                }
                cur = down;
            }
        }
        Ok(FlatTangle::raw(n, m, out, self.circles + bottom.circles + loops))
    }

    /// Side-by-side placement with `other` to the right.
    pub fn juxtapose(&self, other: &FlatTangle) -> FlatTangle {
        let (an, am, bn, bm) = (self.n(), self.m(), other.n(), other.m());
        let nn = an + bn;
        let map_a = |l: usize| if l < an { l } else { nn + (l - an) };
        let map_b = |l: usize| if l < bn { an + l } else { nn + am + (l - bn) };
        let mut out = vec![0u8; nn + am + bm];
        for l in 0..self.points() {
            out[map_a(l)] = map_a(self.partner(l)) as u8;
        }
        for l in 0..other.points() {
            out[map_b(l)] = map_b(other.partner(l)) as u8;
        }
        FlatTangle::raw(nn, am + bm, out, self.circles + other.circles)
    }

    /// Mirror top-to-bottom.
    pub fn reflect(&self) -> FlatTangle {
        let (n, m) = (self.n(), self.m());
        let map = |l: usize| if l < n { m + l } else { l - n };
        let mut out = vec![0u8; n + m];
        for l in 0..n + m {
            out[map(l)] = map(self.partner(l)) as u8;
        }
        FlatTangle::raw(m, n, out, self.circles)
    }

    pub fn through_degree(&self) -> usize {
        (0..self.n()).filter(|&b| self.partner(b) >= self.n()).count()
    }

    /// Number of bottom-to-bottom arcs.
    pub fn bottom_arcs(&self) -> usize {
        (0..self.n()).filter(|&b| self.partner(b) < self.n()).count() / 2
    }

    /// Loops obtained by joining Bi to Ti, plus existing circles.
    pub fn planar_closure(&self) -> Result<u32> {
        Ok(self.closure_loops()?.len() as u32 + self.circles)
    }

    /// Number of through strands on each loop of the closure (existing circles excluded).
    fn closure_loops(&self) -> Result<Vec<u32>> {
        if self.n != self.m {
            return Err(Error::NotSquare { n: self.n(), m: self.m() });
        }
        let n = self.n();
        let mut seen = vec![false; 2 * n];
        let mut loops = Vec::new();
        for s in 0..2 * n {
            if seen[s] {
                continue;
            }
            let mut through = 0;
            let mut cur = s;
            loop {
                seen[cur] = true;
                let p = self.partner(cur);
                seen[p] = true;
                if (cur < n) != (p < n) {
                    through += 1;
                }
                // closure arc joins Bi with Ti
                let next = if p < n { p + n } else { p - n };
                if next == s {
                    break;
                }
                cur = next;
            }
            loops.push(through);
        }
        Ok(loops)
    }

    /// (essential, trivial) loop counts in the annular closure.
    ///
    /// A loop winds around the annulus iff it uses an odd number of through strands.
    pub fn annular_closure(&self) -> Result<(u32, u32)> {
        let loops = self.closure_loops()?;
        let essential = loops.iter().filter(|&&t| t % 2 == 1).count() as u32;
        Ok((essential, loops.len() as u32 - essential + self.circles))
    }

    /// Factor a circle-free tangle of through-degree k as `top ∘ bottom`
    /// with bottom: (n, k) and top: (k, m), both of through-degree k.
    pub fn factor_through(&self) -> (FlatTangle, FlatTangle) {
        let (n, m) = (self.n(), self.m());
        let through: Vec<(usize, usize)> =
            (0..n).filter(|&b| self.partner(b) >= n).map(|b| (b, self.partner(b) - n)).collect();
        let k = through.len();
        let mut bot = vec![0u8; n + k];
        let mut top = vec![0u8; k + m];
        for b in 0..n {
            let p = self.partner(b);
            if p < n {
                bot[b] = p as u8;
            }
        }
        for t in 0..m {
            let p = self.partner(n + t);
            if p >= n {
                top[k + t] = (k + p - n) as u8;
            }
        }
        for (idx, &(b, t)) in through.iter().enumerate() {
            bot[b] = (n + idx) as u8;
            bot[n + idx] = b as u8;
            top[idx] = (k + t) as u8;
            top[k + t] = idx as u8;
        }
        (FlatTangle::raw(k, m, top, 0), FlatTangle::raw(n, k, bot, 0))
    }

    /// All circle-free noncrossing (n, m) tangles in a fixed deterministic order.
    pub fn all(n: usize, m: usize) -> Vec<FlatTangle> {
        if !(n + m).is_multiple_of(2) {
            return Vec::new();
        }
        let total = n + m;
        let pos_to_label = |pos: usize| if pos < n { pos } else { n + (m - 1 - (pos - n)) };
        let mut out = Vec::new();
        for pm in noncrossing_matchings(total) {
            let mut matching = vec![0u8; total];
            for (a, b) in pm {
                let (la, lb) = (pos_to_label(a), pos_to_label(b));
                matching[la] = lb as u8;
                matching[lb] = la as u8;
            }
            out.push(FlatTangle::raw(n, m, matching, 0));
        }
        out.sort();
        out
    }

    /// All circle-free (n, m) tangles with exactly `k` through strands.
    pub fn all_with_through_degree(n: usize, m: usize, k: usize) -> Vec<FlatTangle> {
        Self::all(n, m).into_iter().filter(|t| t.through_degree() == k).collect()
    }
}

/// Noncrossing perfect matchings of 0..total on a line.
pub fn noncrossing_matchings(total: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
        if lo >= hi {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        let mut j = lo + 1;
        while j < hi {
            let inner = rec(lo + 1, j);
            let outer = rec(j + 1, hi);
            for a in &inner {
                for b in &outer {
                    let mut v = Vec::with_capacity(a.len() + b.len() + 1);
                    v.push((lo, j));
                    v.extend_from_slice(a);
                    v.extend_from_slice(b);
                    out.push(v);
                }
            }
            j += 2;
        }
        out
    }
    if !total.is_multiple_of(2) {
        return Vec::new();
    }
    rec(0, total)
}

impl fmt::Display for FlatTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})[", self.n, self.m)?;
        for (i, (a, b)) in self.pairs().into_iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}-{}", self.label_name(a), self.label_name(b))?;
        }
        write!(f, "]")?;
        if self.circles > 0 {
            write!(f, "+{}o", self.circles)?;
        }
        Ok(())
    }
}

impl fmt::Debug for FlatTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct TangleJson {
    n: usize,
    m: usize,
    pairs: Vec<(String, String)>,
    circles: u32,
}

fn parse_label(s: &str, n: usize, m: usize) -> std::result::Result<usize, String> {
    let (side, idx) = s.split_at(1);
    let i: usize = idx.parse().map_err(|_| format!("bad label {s}"))?;
    match side {
        "B" if (1..=n).contains(&i) => Ok(i - 1),
        "T" if (1..=m).contains(&i) => Ok(n + i - 1),
        _ => Err(format!("bad label {s}")),
    }
}

impl Serialize for FlatTangle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TangleJson {
            n: self.n(),
            m: self.m(),
            pairs: self.pairs().into_iter().map(|(a, b)| (self.label_name(a), self.label_name(b))).collect(),
            circles: self.circles,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FlatTangle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = TangleJson::deserialize(d)?;
        let mut pairs = Vec::new();
        for (a, b) in &j.pairs {
            pairs.push((
                parse_label(a, j.n, j.m).map_err(D::Error::custom)?,
                parse_label(b, j.n, j.m).map_err(D::Error::custom)?,
            ));
        }
        FlatTangle::from_pairs(j.n, j.m, &pairs, j.circles).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tb(n: usize, i: usize) -> FlatTangle {
        FlatTangle::turnback(n, i).unwrap()
    }

    #[test]
    fn generators() {
        let id3 = FlatTangle::identity(3);
        assert_eq!(id3.pairs(), vec![(0, 3), (1, 4), (2, 5)]);
        assert_eq!(tb(2, 1).pairs(), vec![(0, 1), (2, 3)]);
        let c = FlatTangle::cap(2, 1).unwrap();
        assert_eq!((c.n(), c.m(), c.pairs()), (2, 0, vec![(0, 1)]));
        assert!(matches!(FlatTangle::cap(3, 3), Err(Error::InvalidPosition { .. })));
    }

    #[test]
    fn composition_examples() {
        let t = tb(2, 1);
        assert_eq!(t.compose(&t).unwrap(), t.with_circles(1));
        let x = FlatTangle::identity(2).compose(&t).unwrap();
        assert_eq!(x, t);
        let w = tb(3, 1).compose(&tb(3, 2)).unwrap().compose(&tb(3, 1)).unwrap();
        assert_eq!(w, tb(3, 1));
        assert!(FlatTangle::identity(3).compose(&t).is_err());
    }

    #[test]
    fn juxtaposition_examples() {
        let id2 = FlatTangle::identity(2);
        let id1 = FlatTangle::identity(1);
        assert_eq!(id2.juxtapose(&id1), FlatTangle::identity(3));
        assert_eq!(tb(2, 1).juxtapose(&id1), tb(3, 1));
        let cap = FlatTangle::cap(2, 1).unwrap();
        let cup = FlatTangle::cup(2, 1).unwrap();
        let x = cap.juxtapose(&cup);
        assert_eq!((x.n(), x.m()), (2, 2));
        assert_eq!(x, tb(2, 1));
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(FlatTangle::cap(2, 1).unwrap().reflect(), FlatTangle::cup(2, 1).unwrap());
        assert_eq!(FlatTangle::identity(4).reflect(), FlatTangle::identity(4));
        let x = FlatTangle::from_pairs(4, 0, &[(0, 1), (2, 3)], 0).unwrap();
        assert_eq!(x.reflect().pairs(), vec![(0, 1), (2, 3)]);
        assert_eq!(x.reflect().n(), 0);
    }

    #[test]
    fn degrees_and_closures() {
        assert_eq!(FlatTangle::identity(5).through_degree(), 5);
        assert_eq!(tb(4, 2).through_degree(), 2);
        let x = FlatTangle::from_pairs(4, 4, &[(0, 3), (1, 2), (4, 7), (5, 6)], 0).unwrap();
        assert_eq!(x.through_degree(), 0);
        assert_eq!(FlatTangle::identity(3).planar_closure().unwrap(), 3);
        assert_eq!(tb(2, 1).planar_closure().unwrap(), 1);
        assert_eq!(tb(3, 1).compose(&tb(3, 2)).unwrap().planar_closure().unwrap(), 1);
        assert_eq!(FlatTangle::identity(3).annular_closure().unwrap(), (3, 0));
        assert_eq!(tb(2, 1).annular_closure().unwrap(), (0, 1));
        let p = FlatTangle::from_pairs(3, 3, &[(0, 3), (1, 2), (4, 5)], 0).unwrap();
        assert_eq!(p.annular_closure().unwrap(), (1, 1));
        let shifted = FlatTangle::from_pairs(4, 4, &[(0, 6), (1, 7), (2, 3), (4, 5)], 0).unwrap();
        assert_eq!(shifted.annular_closure().unwrap(), (0, 1));
        assert!(FlatTangle::cap(2, 1).unwrap().planar_closure().is_err());
    }

    #[test]
    fn crossing_rejected() {
        assert!(FlatTangle::from_pairs(2, 2, &[(0, 3), (1, 2)], 0).is_err());
    }

    #[test]
    fn enumeration_counts() {
        // Catalan numbers
        let c: Vec<usize> = (0..6).map(|k| FlatTangle::all(k, k).len()).collect();
        assert_eq!(c, vec![1, 1, 2, 5, 14, 42]);
        assert_eq!(FlatTangle::all_with_through_degree(8, 8, 0).len(), 14 * 14);
    }

    #[test]
    fn factorization() {
        for t in FlatTangle::all(5, 3) {
            let (top, bot) = t.factor_through();
            assert_eq!(top.compose(&bot).unwrap(), t);
        }
    }

    #[test]
    fn json_roundtrip() {
        for t in FlatTangle::all(3, 3) {
            let s = serde_json::to_string(&t.with_circles(2)).unwrap();
            let u: FlatTangle = serde_json::from_str(&s).unwrap();
            assert_eq!(u, t.with_circles(2));
        }
    }
}
