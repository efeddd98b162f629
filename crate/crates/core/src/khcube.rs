//! The cube-of-resolutions complex over `F₂[u]/uᵏ`.
//!
//! Each circle carries `v₊` or `v₋`. Along a cube edge,
//!
//! ```text
//! m(v₊⊗v₊) = v₊   m(v₊⊗v₋) = m(v₋⊗v₊) = v₋   m(v₋⊗v₋) = u·v₋
//! Δ(v₊) = v₊⊗v₋ + v₋⊗v₊ + u·v₊⊗v₊           Δ(v₋) = v₋⊗v₋
//! ```
//!
//! At `k = 1` this is Khovanov's complex with `F₂` coefficients.

use crate::linkdiag::resolve::{resolve_unchecked, Resolution};
use crate::linkdiag::{occurrences, Diagram, EdgeKind, EdgeTransition};
use crate::par;
use crate::ringalg::{RingElem, SparseMat};
use std::collections::BTreeMap;

/// Above this many crossings [`build_complex`] refuses to run.
pub const CROSSING_LIMIT: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KhError {
    #[error("the reduced complex needs a basepoint")]
    BasepointMissing,
    #[error("basepoint arc {0} is not in the diagram")]
    BadBasepoint(u32),
    #[error("generators with v₋ on the pointed circle do not span a subcomplex (degree {degree})")]
    SubcomplexViolation { degree: i64 },
    #[error("{n} crossings exceeds the limit of {limit}")]
    CrossingLimit { n: usize, limit: usize },
    #[error("truncation order must be in 1..=63 (got {0})")]
    BadOrder(u32),
    #[error("d∘d ≠ 0 at {0:?}")]
    DSquaredFailure((i64, i64)),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Plus,
    Minus,
}

/// A basis element of the free module: a state and a label per circle.
/// Bit `c` of `minus` is set when circle `c` (index into the resolution's
/// circles, sorted by id) carries `v₋`. Multiples by `uᵖ` live in the
/// coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub state: u64,
    pub minus: u64,
}

/// A bigraded chain complex of finitely generated free `F₂[u]/uᵏ`-modules
/// with `u` of quantum degree −2.
pub trait FreeComplex: Sync {
    fn order(&self) -> u32;
    /// Smallest homological degree (may have rank 0 if the complex is empty).
    fn min_degree(&self) -> i64;
    fn max_degree(&self) -> i64;
    fn rank(&self, i: i64) -> usize;
    /// Quantum degree of generator `g` in degree `i` (its `u⁰` multiple).
    fn qdeg(&self, i: i64, g: usize) -> i64;
    /// `d: C_i → C_{i+1}` with rows indexed by `C_{i+1}`.
    fn differential(&self, i: i64) -> Option<&SparseMat>;
}

#[derive(Debug, Clone)]
pub struct GradedComplex {
    k: u32,
    reduced: bool,
    basepoint: Option<u32>,
    n_plus: usize,
    n_minus: usize,
    /// Generators by cube weight `|s|`.
    gens: Vec<Vec<Generator>>,
    qdegs: Vec<Vec<i64>>,
    /// `diffs[h]: C_h → C_{h+1}` (cube weights).
    diffs: Vec<SparseMat>,
}

impl FreeComplex for GradedComplex {
    fn order(&self) -> u32 {
        self.k
    }
    fn min_degree(&self) -> i64 {
        -(self.n_minus as i64)
    }
    fn max_degree(&self) -> i64 {
        self.min_degree() + self.gens.len() as i64 - 1
    }
    fn rank(&self, i: i64) -> usize {
        self.weight(i).map_or(0, |h| self.gens[h].len())
    }
    fn qdeg(&self, i: i64, g: usize) -> i64 {
        self.qdegs[self.weight(i).unwrap()][g]
    }
    fn differential(&self, i: i64) -> Option<&SparseMat> {
        self.weight(i).and_then(|h| self.diffs.get(h))
    }
}

impl GradedComplex {
    fn weight(&self, i: i64) -> Option<usize> {
        let h = i + self.n_minus as i64;
        (h >= 0 && (h as usize) < self.gens.len()).then_some(h as usize)
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn basepoint(&self) -> Option<u32> {
        self.basepoint
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    /// Generators in homological degree `i`, in matrix order.
    pub fn generators(&self, i: i64) -> &[Generator] {
        self.weight(i).map_or(&[], |h| &self.gens[h])
    }

    pub fn index_of(&self, i: i64, g: &Generator) -> Option<usize> {
        self.generators(i).binary_search(g).ok()
    }

    pub fn total_rank(&self) -> usize {
        self.gens.iter().map(Vec::len).sum()
    }

    /// Replace the coefficient of one differential entry. Meant for
    /// exercising the consistency checks.
    pub fn set_entry(&mut self, i: i64, row: usize, col: usize, value: RingElem) {
        let h = self.weight(i).expect("degree in range");
        self.diffs[h].set(row, col, value);
    }

    /// The same generators with every coefficient reduced mod `uᵐ`.
    pub fn truncate(&self, m: u32) -> GradedComplex {
        assert!(m >= 1 && m <= self.k);
        GradedComplex { k: m, diffs: self.diffs.iter().map(|d| d.truncate(m)).collect(), ..self.clone() }
    }
}

fn quantum(res_circles: usize, minus: u64, weight: usize, n_plus: usize, n_minus: usize) -> i64 {
    let m = minus.count_ones() as i64;
    (res_circles as i64 - 2 * m) + weight as i64 + n_plus as i64 - 2 * n_minus as i64
}

/// Merge on labels. Returns `(label, u-power)` or nothing if the result is
/// zero mod `uᵏ`.
pub fn merge(a: Label, b: Label, k: u32) -> Vec<(Label, RingElem)> {
    use Label::*;
    match (a, b) {
        (Plus, Plus) => vec![(Plus, RingElem::one(k))],
        (Plus, Minus) | (Minus, Plus) => vec![(Minus, RingElem::one(k))],
        (Minus, Minus) => nonzero(vec![(Minus, RingElem::u_pow(k, 1))]),
    }
}

/// Split on a label.
pub fn split(a: Label, k: u32) -> Vec<((Label, Label), RingElem)> {
    use Label::*;
    match a {
        Plus => nonzero(vec![
            ((Plus, Minus), RingElem::one(k)),
            ((Minus, Plus), RingElem::one(k)),
            ((Plus, Plus), RingElem::u_pow(k, 1)),
        ]),
        Minus => vec![((Minus, Minus), RingElem::one(k))],
    }
}

fn nonzero<T>(v: Vec<(T, RingElem)>) -> Vec<(T, RingElem)> {
    v.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// The edge map on a labeling indexed by circle id.
pub fn apply_edge_map(
    t: &EdgeTransition,
    labeling: &BTreeMap<u32, Label>,
    k: u32,
) -> Vec<(BTreeMap<u32, Label>, RingElem)> {
    let mut rest = BTreeMap::new();
    for &(from, to) in &t.bystanders {
        rest.insert(to, labeling[&from]);
    }
    match t.kind {
        EdgeKind::Merge { src: (a, b), dst } => merge(labeling[&a], labeling[&b], k)
            .into_iter()
            .map(|(l, c)| {
                let mut out = rest.clone();
                out.insert(dst, l);
                (out, c)
            })
            .collect(),
        EdgeKind::Split { src, dst: (a, b) } => split(labeling[&src], k)
            .into_iter()
            .map(|((la, lb), c)| {
                let mut out = rest.clone();
                out.insert(a, la);
                out.insert(b, lb);
                (out, c)
            })
            .collect(),
    }
}

/// Per-edge circle bookkeeping by circle index.
struct EdgeData {
    target: u64,
    /// `(from bit, to bit)` for bystanders.
    moves: Vec<(u32, u32)>,
    kind: EdgeIdx,
}

enum EdgeIdx {
    Merge { a: u32, b: u32, dst: u32 },
    Split { src: u32, a: u32, b: u32 },
}

fn edge_data(q: [u32; 4], x: usize, from: &Resolution, to: &Resolution) -> EdgeData {
    let (fa, fc) = (from.circle_index(q[0]) as u32, from.circle_index(q[2]) as u32);
    let (ta, tc) = (to.circle_index(q[0]) as u32, to.circle_index(q[2]) as u32);
    let moves = from
        .circles
        .iter()
        .enumerate()
        .filter(|&(i, _)| i as u32 != fa && i as u32 != fc)
        .map(|(i, arcs)| (i as u32, to.circle_index(arcs[0]) as u32))
        .collect();
    let kind = if fa != fc { EdgeIdx::Merge { a: fa, b: fc, dst: ta } } else { EdgeIdx::Split { src: fa, a: ta, b: tc } };
    EdgeData { target: from.state | 1 << x, moves, kind }
}

/// Image of one generator under one edge map, as `(target minus-bits, u-power)`.
fn edge_image(e: &EdgeData, minus: u64, k: u32, out: &mut Vec<(u64, u32)>) {
    let mut rest = 0u64;
    for &(f, t) in &e.moves {
        rest |= (minus >> f & 1) << t;
    }
    let lab = |bit: u32| if minus >> bit & 1 == 1 { Label::Minus } else { Label::Plus };
    let set = |l: Label, bit: u32| if l == Label::Minus { 1u64 << bit } else { 0 };
    match e.kind {
        EdgeIdx::Merge { a, b, dst } => {
            for (l, c) in merge(lab(a), lab(b), k) {
                out.push((rest | set(l, dst), c.bits().trailing_zeros()));
            }
        }
        EdgeIdx::Split { src, a, b } => {
            for ((la, lb), c) in split(lab(src), k) {
                out.push((rest | set(la, a) | set(lb, b), c.bits().trailing_zeros()));
            }
        }
    }
}

/// Resolutions of every state, in state order.
pub(crate) fn all_resolutions(d: &Diagram) -> Vec<Resolution> {
    let occ = occurrences(d.crossings());
    par::map_range(1usize << d.crossing_count(), |s| resolve_unchecked(d.crossings(), &occ, s as u64))
}

/// Build the complex. `basepoint` is required when `reduced` and ignored
/// otherwise.
pub fn build_complex(d: &Diagram, k: u32, reduced: bool, basepoint: Option<u32>) -> Result<GradedComplex, KhError> {
    if d.crossing_count() > CROSSING_LIMIT {
        return Err(KhError::CrossingLimit { n: d.crossing_count(), limit: CROSSING_LIMIT });
    }
    build_complex_unbounded(d, k, reduced, basepoint)
}

/// [`build_complex`] without the crossing limit.
pub fn build_complex_unbounded(d: &Diagram, k: u32, reduced: bool, basepoint: Option<u32>) -> Result<GradedComplex, KhError> {
    if !(1..=crate::ringalg::MAX_ORDER).contains(&k) {
        return Err(KhError::BadOrder(k));
    }
    let basepoint = if reduced {
        let b = basepoint.ok_or(KhError::BasepointMissing)?;
        if !d.arcs().contains(&b) {
            return Err(KhError::BadBasepoint(b));
        }
        Some(b)
    } else {
        None
    };
    let n = d.crossing_count();
    let (np, nm) = (d.n_plus(), d.n_minus());
    let res = all_resolutions(d);
    let pointed: Vec<Option<u32>> = res.iter().map(|r| basepoint.map(|b| r.circle_index(b) as u32)).collect();

    let mut gens = vec![Vec::new(); n + 1];
    let mut qdegs = vec![Vec::new(); n + 1];
    for (s, r) in res.iter().enumerate() {
        let h = (s as u64).count_ones() as usize;
        let c = r.circle_count();
        for minus in 0..1u64 << c {
            if matches!(pointed[s], Some(p) if minus >> p & 1 == 1) {
                continue;
            }
            gens[h].push(Generator { state: s as u64, minus });
        }
    }
    for h in 0..=n {
        gens[h].sort_unstable();
        qdegs[h] = gens[h]
            .iter()
            .map(|g| quantum(res[g.state as usize].circle_count(), g.minus, h, np, nm))
            .collect();
    }

    let mut diffs = Vec::with_capacity(n);
    for h in 0..n {
        let src = &gens[h];
        let dst = &gens[h + 1];
        let cols: Vec<Result<Vec<(usize, RingElem)>, ()>> = par::map(src, |g| {
            let from = &res[g.state as usize];
            let mut entries: BTreeMap<usize, u64> = BTreeMap::new();
            let mut buf = Vec::new();
            for x in (0..n).filter(|&x| g.state >> x & 1 == 0) {
                let to = &res[(g.state | 1 << x) as usize];
                let e = edge_data(d.crossings()[x], x, from, to);
                buf.clear();
                edge_image(&e, g.minus, k, &mut buf);
                for &(minus, p) in &buf {
                    if matches!(pointed[e.target as usize], Some(pc) if minus >> pc & 1 == 1) {
                        // lands on a killed generator: fine only if the source is killed too
                        continue;
                    }
                    let tg = Generator { state: e.target, minus };
                    let row = dst.binary_search(&tg).map_err(|_| ())?;
                    *entries.entry(row).or_insert(0) ^= 1 << p;
                }
            }
            Ok(entries.into_iter().filter(|&(_, b)| b != 0).map(|(r, b)| (r, RingElem::new(k, b))).collect())
        });
        let mut m = SparseMat::zeros(k, dst.len(), src.len());
        for (c, col) in cols.into_iter().enumerate() {
            for (r, e) in col.map_err(|_| KhError::SubcomplexViolation { degree: h as i64 - nm as i64 })? {
                m.set(r, c, e);
            }
        }
        diffs.push(m);
    }
    let cx = GradedComplex { k, reduced, basepoint, n_plus: np, n_minus: nm, gens, qdegs, diffs };
    if reduced {
        check_killed_span_closed(d, &cx, &res, &pointed)?;
    }
    if let Err(at) = verify_d_squared(&cx) {
        return Err(KhError::DSquaredFailure(at));
    }
    Ok(cx)
}

/// The generators with `v₋` on the pointed circle must map into their own
/// span, or the quotient is not a complex.
fn check_killed_span_closed(d: &Diagram, cx: &GradedComplex, res: &[Resolution], pointed: &[Option<u32>]) -> Result<(), KhError> {
    let n = d.crossing_count();
    let bad = par::map_range(1usize << n, |s| {
        let pc = pointed[s]?;
        let from = &res[s];
        let mut buf = Vec::new();
        for minus in (0..1u64 << from.circle_count()).filter(|m| m >> pc & 1 == 1) {
            for x in (0..n).filter(|&x| s >> x & 1 == 0) {
                let to = &res[s | 1 << x];
                let e = edge_data(d.crossings()[x], x, from, to);
                buf.clear();
                edge_image(&e, minus, cx.k, &mut buf);
                let tp = pointed[e.target as usize].unwrap();
                if buf.iter().any(|&(m, _)| m >> tp & 1 == 0) {
                    return Some((s as u64).count_ones() as i64 - cx.n_minus as i64);
                }
            }
        }
        None
    });
    match bad.into_iter().flatten().next() {
        Some(degree) => Err(KhError::SubcomplexViolation { degree }),
        None => Ok(()),
    }
}

/// Checks `d_{i+1} ∘ d_i = 0`. On failure returns the bidegree `(i, j)` of
/// the first source generator (in degree order, then matrix order) whose
/// image under `d²` is nonzero.
pub fn verify_d_squared<C: FreeComplex>(c: &C) -> Result<(), (i64, i64)> {
    for i in c.min_degree()..c.max_degree() {
        let (Some(d0), Some(d1)) = (c.differential(i), c.differential(i + 1)) else { continue };
        let dd = d1.mul(d0).expect("consecutive differentials compose");
        if let Some(col) = (0..dd.cols()).find(|&g| !dd.column(g).is_empty()) {
            return Err((i, c.qdeg(i, col)));
        }
    }
    Ok(())
}

/// Every entry `uᵖ` from generator `g` to `g'` must satisfy
/// `q(g') − 2p = q(g)`. Returns the first offending `(i, row, col)`.
pub fn check_homogeneity<C: FreeComplex>(c: &C) -> Result<(), (i64, usize, usize)> {
    for i in c.min_degree()..c.max_degree() {
        let Some(d) = c.differential(i) else { continue };
        for (r, col, e) in d.entries() {
            let ok = e.terms().all(|p| c.qdeg(i + 1, r) - 2 * p as i64 == c.qdeg(i, col));
            if !ok {
                return Err((i, r, col));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkdiag::{edge_transition, from_braid, parse_pd};

    #[test]
    fn edge_maps() {
        use Label::*;
        assert_eq!(merge(Minus, Minus, 2), vec![(Minus, RingElem::u_pow(2, 1))]);
        assert!(merge(Minus, Minus, 1).is_empty());
        assert_eq!(split(Plus, 1).len(), 2);
        let s3 = split(Plus, 3);
        assert_eq!(s3[2], ((Plus, Plus), RingElem::u_pow(3, 1)));
    }

    #[test]
    fn unknot_complexes() {
        let u = parse_pd("U").unwrap();
        let c = build_complex(&u, 2, false, None).unwrap();
        assert_eq!((c.min_degree(), c.max_degree()), (0, 0));
        let mut q: Vec<i64> = (0..2).map(|g| c.qdeg(0, g)).collect();
        q.sort();
        assert_eq!(q, vec![-1, 1]);
        let r = build_complex(&u, 2, true, Some(1)).unwrap();
        assert_eq!(r.rank(0), 1);
        assert_eq!(r.qdeg(0, 0), 1);
        assert_eq!(build_complex(&u, 2, true, None).unwrap_err(), KhError::BasepointMissing);
    }

    #[test]
    fn d_squared_and_homogeneity() {
        let t = parse_pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]").unwrap();
        for k in 1..=3 {
            for (red, bp) in [(false, None), (true, Some(1)), (true, Some(4))] {
                let c = build_complex(&t, k, red, bp).unwrap();
                assert_eq!(verify_d_squared(&c), Ok(()));
                assert_eq!(check_homogeneity(&c), Ok(()));
            }
        }
    }

    #[test]
    fn fault_injection_is_located() {
        let d = from_braid(2, &[1, 1, 1]).unwrap();
        let mut c = build_complex(&d, 2, false, None).unwrap();
        // find an entry of d_0 whose row has a nonzero image under d_1
        let d1 = c.differential(1).unwrap().clone();
        let (i, row, col) = {
            let d0 = c.differential(0).unwrap();
            let row = (0..d0.rows()).find(|&r| !d1.column(r).is_empty()).unwrap();
            let col = (0..d0.cols()).find(|&g| d0.get(row, g).is_zero()).unwrap();
            (0, row, col)
        };
        c.set_entry(i, row, col, RingElem::one(2));
        let at = verify_d_squared(&c).unwrap_err();
        assert_eq!(at.0, 0);
    }

    #[test]
    fn k1_is_k2_without_u() {
        let d = from_braid(3, &[1, -2, 1, -2]).unwrap();
        let c1 = build_complex(&d, 1, false, None).unwrap();
        let c2 = build_complex(&d, 2, false, None).unwrap();
        for i in c1.min_degree()..c1.max_degree() {
            assert_eq!(c1.generators(i), c2.generators(i));
            assert_eq!(c1.differential(i).unwrap(), &c2.differential(i).unwrap().truncate(1));
        }
    }

    #[test]
    fn labeled_edge_map_matches_bit_version() {
        let d = from_braid(3, &[1, -2, 1, -2]).unwrap();
        let c = build_complex(&d, 2, false, None).unwrap();
        let res = all_resolutions(&d);
        for i in c.min_degree()..c.max_degree() {
            let dm = c.differential(i).unwrap();
            for (col, g) in c.generators(i).iter().enumerate() {
                let mut want: BTreeMap<usize, RingElem> = BTreeMap::new();
                let from = &res[g.state as usize];
                let lab: BTreeMap<u32, Label> = from
                    .circle_ids
                    .iter()
                    .enumerate()
                    .map(|(ci, &id)| (id, if g.minus >> ci & 1 == 1 { Label::Minus } else { Label::Plus }))
                    .collect();
                for x in (0..4).filter(|&x| g.state >> x & 1 == 0) {
                    let t = edge_transition(&d, g.state, x).unwrap();
                    let to = &res[t.to_state as usize];
                    for (out, coeff) in apply_edge_map(&t, &lab, 2) {
                        let minus = to
                            .circle_ids
                            .iter()
                            .enumerate()
                            .filter(|(_, id)| out[id] == Label::Minus)
                            .fold(0u64, |m, (ci, _)| m | 1 << ci);
                        let row = c.index_of(i + 1, &Generator { state: t.to_state, minus }).unwrap();
                        let e = want.entry(row).or_insert(RingElem::zero(2));
                        *e += coeff;
                    }
                }
                let got: BTreeMap<usize, RingElem> = dm.column(col).iter().map(|(r, e)| (*r, *e)).collect();
                want.retain(|_, e| !e.is_zero());
                assert_eq!(got, want);
            }
        }
    }
}
