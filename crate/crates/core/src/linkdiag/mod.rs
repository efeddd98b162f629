//! Planar link diagrams.
//!
//! A diagram is a list of crossings in PD form: each crossing is a
//! quadruple `(a, b, c, d)` of arc labels read counterclockwise starting
//! from the incoming under-strand, so the under-strand runs `a → c` and the
//! over-strand joins `b` and `d`. Every arc label occurs exactly twice.
//!
//! Smoothings: the 0-smoothing of `(a, b, c, d)` joins `a` with `b` and `c`
//! with `d`; the 1-smoothing joins `a` with `d` and `b` with `c`. A crossing
//! whose over-strand runs `d → b` is positive.

mod builder;
mod jones;
mod parse;
mod poly;
pub(crate) mod resolve;
mod table;

pub use builder::{from_braid, from_plat, rational_word};
pub use jones::{determinant, kauffman_bracket, kauffman_jones, khovanov_state_sum, normalized_jones};
pub use parse::parse_pd;
pub use poly::LaurentPoly;
pub use resolve::{edge_transition, resolve, EdgeKind, EdgeTransition, Resolution};
pub use table::{bundled_table, parse_table, LinkTable, TableEntry, ALIASES};

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinkError {
    #[error("malformed PD text near `{token}` (offset {offset})")]
    MalformedSyntax { offset: usize, token: String },
    #[error("arc label {label} appears {count} times (expected exactly twice)")]
    ArcMultiplicityError { label: i64, count: usize },
    #[error("diagram is not planar or its orientation is inconsistent: {reason}")]
    NonPlanarOrInconsistentOrientation { reason: String },
    #[error("state has length {got}, diagram has {expected} crossings")]
    StateLengthMismatch { expected: usize, got: usize },
    #[error("crossing {crossing} is already 1-smoothed in this state")]
    CrossingAlreadyOne { crossing: usize },
    #[error("empty braid word needs exactly one strand (got {strands})")]
    EmptyWord { strands: usize },
    #[error("braid letter {letter} out of range for {strands} strands")]
    LetterOutOfRange { letter: i32, strands: usize },
    #[error("strand {strand} closes up without crossings; PD cannot express a split unknotted component")]
    FreeComponent { strand: usize },
    #[error("plat closure needs an even number of strands (got {strands})")]
    OddPlat { strands: usize },
    #[error("arc {arc} is not an arc of this diagram")]
    NoSuchArc { arc: u32 },
    #[error("too many crossings ({n}); at most {max} supported")]
    TooManyCrossings { n: usize, max: usize },
}

/// Most crossings a state bit-mask can address.
pub const MAX_CROSSINGS: usize = 64;

/// An oriented planar diagram.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    crossings: Vec<[u32; 4]>,
    /// Per crossing: the over-strand runs `d → b`.
    over_d_to_b: Vec<bool>,
    components: usize,
    basepoint: Option<u32>,
}

impl Diagram {
    /// The crossingless unknot.
    pub fn unknot() -> Self {
        Diagram { crossings: Vec::new(), over_d_to_b: Vec::new(), components: 1, basepoint: None }
    }

    /// Validate PD quadruples. Labels may be arbitrary integers; they are
    /// relabeled to `1..=2n` preserving their order.
    pub fn from_quads(quads: &[[i64; 4]]) -> Result<Self, LinkError> {
        if quads.is_empty() {
            return Ok(Self::unknot());
        }
        if quads.len() > MAX_CROSSINGS {
            return Err(LinkError::TooManyCrossings { n: quads.len(), max: MAX_CROSSINGS });
        }
        let mut labels: Vec<i64> = quads.iter().flatten().copied().collect();
        labels.sort_unstable();
        let mut i = 0;
        while i < labels.len() {
            let j = labels[i..].iter().take_while(|&&l| l == labels[i]).count();
            if j != 2 {
                return Err(LinkError::ArcMultiplicityError { label: labels[i], count: j });
            }
            i += j;
        }
        labels.dedup();
        let crossings: Vec<[u32; 4]> = quads
            .iter()
            .map(|q| q.map(|l| labels.binary_search(&l).unwrap() as u32 + 1))
            .collect();
        let orientation = infer_orientation(&crossings)?;
        Self::assemble(crossings, orientation)
    }

    fn assemble(crossings: Vec<[u32; 4]>, over_d_to_b: Vec<bool>) -> Result<Self, LinkError> {
        let occ = occurrences(&crossings);
        let walks = strand_walks(&crossings, &occ);
        check_planar(&crossings, &occ)?;
        Ok(Diagram { crossings, over_d_to_b, components: walks.len(), basepoint: None })
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn arc_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn is_unknot_literal(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Sign of crossing `x`: +1 or −1.
    pub fn sign(&self, x: usize) -> i8 {
        if self.over_d_to_b[x] {
            1
        } else {
            -1
        }
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.crossings.len()).map(|x| self.sign(x)).collect()
    }

    pub fn n_plus(&self) -> usize {
        self.over_d_to_b.iter().filter(|&&p| p).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.len() - self.n_plus()
    }

    pub fn writhe(&self) -> i64 {
        self.n_plus() as i64 - self.n_minus() as i64
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn basepoint_arc(&self) -> Option<u32> {
        self.basepoint
    }

    /// Basepoint to use for reduced theories: the chosen one, else arc 1.
    pub fn effective_basepoint(&self) -> u32 {
        self.basepoint.unwrap_or(1)
    }

    pub fn with_basepoint(mut self, arc: u32) -> Result<Self, LinkError> {
        let valid = if self.is_unknot_literal() { arc == 1 } else { (1..=self.arc_count() as u32).contains(&arc) };
        if !valid {
            return Err(LinkError::NoSuchArc { arc });
        }
        self.basepoint = Some(arc);
        Ok(self)
    }

    /// Arcs the basepoint may sit on.
    pub fn arcs(&self) -> Vec<u32> {
        if self.is_unknot_literal() {
            vec![1]
        } else {
            (1..=self.arc_count() as u32).collect()
        }
    }

    /// Mirror image: every crossing changes sign, and the 0- and
    /// 1-smoothings trade places. A positive crossing `(a,b,c,d)` becomes
    /// `(d,a,b,c)`, a negative one becomes `(b,c,d,a)`; orientation is kept.
    pub fn mirror(&self) -> Diagram {
        let crossings = self
            .crossings
            .iter()
            .zip(&self.over_d_to_b)
            .map(|(&[a, b, c, d], &pos)| if pos { [d, a, b, c] } else { [b, c, d, a] })
            .collect();
        // the old under-strand a → c becomes the new over-strand
        let over_d_to_b = self.over_d_to_b.iter().map(|&pos| !pos).collect();
        Diagram {
            crossings,
            over_d_to_b,
            components: self.components,
            basepoint: self.basepoint,
        }
    }

    /// PD text, parseable by [`parse_pd`].
    pub fn render(&self) -> String {
        if self.is_unknot_literal() {
            return "U".to_string();
        }
        let xs: Vec<String> = self
            .crossings
            .iter()
            .map(|[a, b, c, d]| format!("X({a},{b},{c},{d})"))
            .collect();
        format!("PD[{}]", xs.join(", "))
    }

    /// Render with arcs renamed in order of first appearance. Two diagrams
    /// that differ only by a relabeling of arcs give the same string.
    pub fn canonical_form(&self) -> String {
        if self.is_unknot_literal() {
            return "U".to_string();
        }
        let map = self.canonical_labels();
        let mut parts = Vec::new();
        for (q, &pos) in self.crossings.iter().zip(&self.over_d_to_b) {
            let q = q.map(|l| map[l as usize]);
            parts.push(format!("X({},{},{},{}){}", q[0], q[1], q[2], q[3], if pos { '+' } else { '-' }));
        }
        parts.join(",")
    }
}

impl Diagram {
    /// `map[arc]`: the label `arc` gets in [`Diagram::canonical_form`].
    pub fn canonical_labels(&self) -> Vec<u32> {
        let mut map = vec![0u32; self.arc_count() + 1];
        let mut next = 1;
        for l in self.crossings.iter().flatten() {
            if map[*l as usize] == 0 {
                map[*l as usize] = next;
                next += 1;
            }
        }
        if self.is_unknot_literal() {
            map = vec![0, 1];
        }
        map
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram({}", self.render())?;
        if let Some(b) = self.basepoint {
            write!(f, ", basepoint {b}")?;
        }
        write!(f, ")")
    }
}

/// `occ[arc]` lists the two `(crossing, slot)` positions of each arc.
pub(crate) fn occurrences(crossings: &[[u32; 4]]) -> Vec<[(usize, usize); 2]> {
    let mut occ = vec![[(usize::MAX, 0); 2]; 2 * crossings.len() + 1];
    let mut seen = vec![0usize; 2 * crossings.len() + 1];
    for (x, q) in crossings.iter().enumerate() {
        for (p, &l) in q.iter().enumerate() {
            occ[l as usize][seen[l as usize]] = (x, p);
            seen[l as usize] += 1;
        }
    }
    occ
}

#[inline]
pub(crate) fn other_end(occ: &[[(usize, usize); 2]], arc: u32, here: (usize, usize)) -> (usize, usize) {
    let [o1, o2] = occ[arc as usize];
    if o1 == here {
        o2
    } else {
        o1
    }
}

/// One closed strand: the passages `(crossing, entry slot)` in order.
fn strand_walks(crossings: &[[u32; 4]], occ: &[[(usize, usize); 2]]) -> Vec<Vec<(usize, usize)>> {
    let n = crossings.len();
    // visited[x][0] under-strand, visited[x][1] over-strand
    let mut visited = vec![[false; 2]; n];
    let mut walks = Vec::new();
    for x0 in 0..n {
        for s in 0..2 {
            if visited[x0][s] {
                continue;
            }
            let mut walk = Vec::new();
            let (mut x, mut p) = (x0, s);
            loop {
                visited[x][p % 2] = true;
                walk.push((x, p));
                let q = (p + 2) % 4;
                let arc = crossings[x][q];
                let (y, t) = other_end(occ, arc, (x, q));
                x = y;
                p = t;
                if visited[x][p % 2] {
                    break;
                }
            }
            walks.push(walk);
        }
    }
    walks
}

/// Over-strand direction at each crossing, derived by following strands.
///
/// A component that passes under somewhere is oriented by its under
/// passages, which must all agree. A component that only ever passes over
/// is oriented by its labels at its first crossing: the over-strand runs
/// `b → d` when `d = b + 1` or `b > d + 1`, else `d → b`.
fn infer_orientation(crossings: &[[u32; 4]]) -> Result<Vec<bool>, LinkError> {
    let occ = occurrences(crossings);
    let mut over_d_to_b = vec![false; crossings.len()];
    for walk in strand_walks(crossings, &occ) {
        let forward = walk.iter().filter(|&&(_, p)| p == 0).count();
        let backward = walk.iter().filter(|&&(_, p)| p == 2).count();
        let reverse = match (forward, backward) {
            (_, 0) if forward > 0 => false,
            (0, _) if backward > 0 => true,
            (0, 0) => {
                let &(x, p) = walk.iter().min().unwrap();
                let [_, b, _, d] = crossings[x];
                let (b, d) = (b as i64, d as i64);
                let b_to_d = d - b == 1 || b - d > 1;
                // p is 1 (entering at b) or 3 (entering at d)
                (p == 1) != b_to_d
            }
            _ => {
                return Err(LinkError::NonPlanarOrInconsistentOrientation {
                    reason: format!(
                        "a strand enters its under-crossings from both sides (crossing {})",
                        walk[0].0
                    ),
                })
            }
        };
        for &(x, p) in &walk {
            if p % 2 == 1 {
                let enters_d = (p == 3) != reverse;
                over_d_to_b[x] = enters_d;
            }
        }
    }
    Ok(over_d_to_b)
}

/// Face count of the rotation system must satisfy Euler's formula
/// `V − E + F = 2` on every connected piece.
fn check_planar(crossings: &[[u32; 4]], occ: &[[(usize, usize); 2]]) -> Result<(), LinkError> {
    let n = crossings.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for o in occ.iter().skip(1) {
        let (a, b) = (find(&mut parent, o[0].0), find(&mut parent, o[1].0));
        parent[a] = b;
    }
    let pieces = (0..n).filter(|&i| find(&mut parent, i) == i).count();

    let mut seen = vec![[false; 4]; n];
    let mut faces = 0;
    for x in 0..n {
        for p in 0..4 {
            if seen[x][p] {
                continue;
            }
            faces += 1;
            let (mut cx, mut cp) = (x, p);
            while !seen[cx][cp] {
                seen[cx][cp] = true;
                let arc = crossings[cx][cp];
                let (y, t) = other_end(occ, arc, (cx, cp));
                cx = y;
                cp = (t + 1) % 4;
            }
        }
    }
    if faces != n + 2 * pieces {
        return Err(LinkError::NonPlanarOrInconsistentOrientation {
            reason: format!("{faces} faces for {n} crossings in {pieces} piece(s); a planar diagram has {}", n + 2 * pieces),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const TREFOIL_L: &str = "PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]";

    #[test]
    fn unknot_literal() {
        let u = parse_pd("U").unwrap();
        assert_eq!(u.crossing_count(), 0);
        assert_eq!(u.component_count(), 1);
        assert_eq!((u.n_plus(), u.n_minus()), (0, 0));
        assert_eq!(u.mirror(), u);
    }

    #[test]
    fn kink() {
        let d = parse_pd("PD[X(2,1,1,2)]").unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.writhe().abs(), 1);
    }

    #[test]
    fn left_trefoil_signs() {
        let d = parse_pd(TREFOIL_L).unwrap();
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.signs(), vec![-1, -1, -1]);
        assert_eq!(d.n_minus(), 3);
        let m = d.mirror();
        assert_eq!(m.writhe(), 3);
        assert_eq!(m.mirror(), d);
    }

    #[test]
    fn three_disjoint_pairs_are_rejected() {
        // each pair of strands would meet exactly once
        let e = parse_pd("PD[X(1,4,2,3), X(3,6,4,5), X(5,2,6,1)]").unwrap_err();
        assert!(matches!(e, LinkError::NonPlanarOrInconsistentOrientation { .. }), "{e}");
    }

    #[test]
    fn single_occurrence_is_a_multiplicity_error() {
        let e = parse_pd("PD[X(1,4,2,3)]").unwrap_err();
        assert_eq!(e, LinkError::ArcMultiplicityError { label: 1, count: 1 });
        let e = parse_pd("PD[X(1,1,1,2)]").unwrap_err();
        assert_eq!(e, LinkError::ArcMultiplicityError { label: 1, count: 3 });
    }

    #[test]
    fn relabeling_preserves_order() {
        let a = parse_pd("PD[X(10,40,20,50), X(30,60,40,10), X(50,20,60,30)]").unwrap();
        assert_eq!(a, parse_pd(TREFOIL_L).unwrap());
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let a = parse_pd(TREFOIL_L).unwrap();
        let c = parse_pd("PD[X(2,5,3,6), X(4,1,5,2), X(6,3,1,4)]").unwrap();
        assert_eq!(a.canonical_form(), c.canonical_form());
    }

    #[test]
    fn render_round_trip() {
        for s in ["U", TREFOIL_L, "PD[X(2,1,1,2)]", "PD[X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8)]"] {
            let d = parse_pd(s).unwrap();
            assert_eq!(parse_pd(&d.render()).unwrap(), d);
        }
    }

    #[test]
    fn basepoint_bounds() {
        let d = parse_pd(TREFOIL_L).unwrap();
        assert!(d.clone().with_basepoint(6).is_ok());
        assert_eq!(d.with_basepoint(7).unwrap_err(), LinkError::NoSuchArc { arc: 7 });
    }
}
