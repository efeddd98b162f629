//! Diagrams from braid words.
//!
//! Letter `i > 0` is the positive generator `σ_i` crossing strands `i` and
//! `i + 1`; `-i` is its inverse. Crossings are drawn with the braid running
//! upward, endpoints counterclockwise `BL, BR, TR, TL`; in `σ_i` the strand
//! from `BL` to `TR` passes over.

use super::{Diagram, LinkError};

const BL: usize = 0;
const BR: usize = 1;

struct Geometry {
    /// Edge class at `BL, BR, TR, TL`.
    ends: Vec<[usize; 4]>,
    /// The `BL–TR` strand is the over-strand.
    over_bl: Vec<bool>,
    classes: usize,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// Build the stacked crossings of `word`, then glue the free ends with
/// `close(dsu, bottom_edge, top_edge)`.
fn stack(strands: usize, word: &[i32], close: impl Fn(&mut Dsu, &dyn Fn(usize) -> usize, &dyn Fn(usize) -> usize)) -> Result<Geometry, LinkError> {
    for &l in word {
        if l == 0 || l.unsigned_abs() as usize >= strands {
            return Err(LinkError::LetterOutOfRange { letter: l, strands });
        }
    }
    let len = word.len();
    let edge = |t: usize, p: usize| t * strands + p;
    let mut dsu = Dsu((0..(len + 1) * strands).collect());
    for (t, &l) in word.iter().enumerate() {
        let i = l.unsigned_abs() as usize - 1;
        for p in (0..strands).filter(|&p| p != i && p != i + 1) {
            dsu.union(edge(t, p), edge(t + 1, p));
        }
    }
    close(&mut dsu, &|p| edge(0, p), &|p| edge(len, p));

    let mut class_of = vec![usize::MAX; (len + 1) * strands];
    let mut classes = 0;
    let mut touched = Vec::new();
    let mut id = |dsu: &mut Dsu, e: usize, class_of: &mut Vec<usize>| {
        let r = dsu.find(e);
        if class_of[r] == usize::MAX {
            class_of[r] = classes;
            classes += 1;
        }
        class_of[r]
    };
    let mut ends = Vec::with_capacity(len);
    let mut over_bl = Vec::with_capacity(len);
    for (t, &l) in word.iter().enumerate() {
        let i = l.unsigned_abs() as usize - 1;
        let q = [edge(t, i), edge(t, i + 1), edge(t + 1, i + 1), edge(t + 1, i)]
            .map(|e| id(&mut dsu, e, &mut class_of));
        touched.extend(q);
        ends.push(q);
        over_bl.push(l > 0);
    }
    // a class no crossing touches is a closed strand on its own
    for p in 0..strands {
        let r = dsu.find(edge(0, p));
        if class_of[r] == usize::MAX {
            return Err(LinkError::FreeComponent { strand: p + 1 });
        }
    }
    Ok(Geometry { ends, over_bl, classes })
}

/// Orient each component so that it enters its first crossing from below,
/// label arcs consecutively along components, and emit PD quadruples.
fn orient_and_label(g: &Geometry) -> Result<Diagram, LinkError> {
    let n = g.ends.len();
    let mut occ = vec![Vec::with_capacity(2); g.classes];
    for (x, e) in g.ends.iter().enumerate() {
        for (p, &c) in e.iter().enumerate() {
            occ[c].push((x, p));
        }
    }
    debug_assert!(occ.iter().all(|o| o.len() == 2));
    let mut label = vec![0u32; g.classes];
    let mut entry = vec![[usize::MAX; 2]; n]; // per strand pair: entering endpoint
    let mut next = 1u32;
    for x0 in 0..n {
        for start in [BL, BR] {
            if entry[x0][start % 2] != usize::MAX {
                continue;
            }
            let (mut x, mut e) = (x0, start);
            while entry[x][e % 2] == usize::MAX {
                entry[x][e % 2] = e;
                let c = g.ends[x][e];
                label[c] = next;
                next += 1;
                let out = (e + 2) % 4;
                let c_out = g.ends[x][out];
                let &(y, f) = occ[c_out].iter().find(|&&o| o != (x, out)).unwrap();
                x = y;
                e = f;
            }
        }
    }
    let quads: Vec<[i64; 4]> = (0..n)
        .map(|x| {
            let under = if g.over_bl[x] { 1 } else { 0 };
            let e = entry[x][under];
            [0, 1, 2, 3].map(|k| label[g.ends[x][(e + k) % 4]] as i64)
        })
        .collect();
    Diagram::from_quads(&quads)
}

/// Closure of a braid on `strands` strands.
pub fn from_braid(strands: usize, word: &[i32]) -> Result<Diagram, LinkError> {
    if word.is_empty() {
        return if strands == 1 { Ok(Diagram::unknot()) } else { Err(LinkError::EmptyWord { strands }) };
    }
    let g = stack(strands, word, |dsu, bottom, top| {
        for p in 0..strands {
            dsu.union(bottom(p), top(p));
        }
    })?;
    orient_and_label(&g)
}

/// Plat closure: strands `2j−1, 2j` are capped together at the bottom and
/// at the top.
pub fn from_plat(strands: usize, word: &[i32]) -> Result<Diagram, LinkError> {
    if !strands.is_multiple_of(2) || strands == 0 {
        return Err(LinkError::OddPlat { strands });
    }
    if word.is_empty() {
        return if strands == 2 { Ok(Diagram::unknot()) } else { Err(LinkError::FreeComponent { strand: 3 }) };
    }
    let g = stack(strands, word, |dsu, bottom, top| {
        for p in (0..strands).step_by(2) {
            dsu.union(bottom(p), bottom(p + 1));
            dsu.union(top(p), top(p + 1));
        }
    })?;
    orient_and_label(&g)
}

/// Four-plat word of the rational link with Conway notation `a1 a2 … am`.
///
/// Uses `σ2^{a1} σ1^{-a2} σ2^{a3} …`; an even-length notation is first
/// rewritten to odd length via `[…, am] = […, am − 1, 1]`.
pub fn rational_word(conway: &[u32]) -> Vec<i32> {
    let mut c: Vec<u32> = conway.to_vec();
    if c.len().is_multiple_of(2) {
        let last = c.pop().unwrap();
        if last > 1 {
            c.push(last - 1);
            c.push(1);
        } else {
            // [..., a, 1] with even length: fold into [..., a + 1]
            let prev = c.pop().unwrap();
            c.push(prev + 1);
        }
    }
    let mut w = Vec::new();
    for (k, &a) in c.iter().enumerate() {
        let letter = if k % 2 == 0 { 2 } else { -1 };
        w.extend(std::iter::repeat_n(letter, a as usize));
    }
    w
}
