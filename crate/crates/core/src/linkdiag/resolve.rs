use super::{other_end, occurrences, Diagram, LinkError};

/// The circles of one complete resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub state: u64,
    /// Arcs of each circle in cyclic order, circles sorted by id.
    pub circles: Vec<Vec<u32>>,
    /// Circle id: the smallest arc label on it (0 for the crossingless unknot).
    pub circle_ids: Vec<u32>,
    /// `circle_of_arc[arc]`, index 0 unused.
    pub circle_of_arc: Vec<u32>,
}

impl Resolution {
    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    /// Index (into `circles`) of the circle carrying `arc`.
    pub fn circle_index(&self, arc: u32) -> usize {
        if self.circle_of_arc.len() <= 1 {
            0
        } else {
            self.circle_of_arc[arc as usize] as usize
        }
    }
}

/// Partner slot of slot `p` under the given smoothing.
#[inline]
pub(crate) fn partner(p: usize, one: bool) -> usize {
    match (one, p) {
        (false, 0) => 1,
        (false, 1) => 0,
        (false, 2) => 3,
        (false, _) => 2,
        (true, 0) => 3,
        (true, 3) => 0,
        (true, 1) => 2,
        (true, _) => 1,
    }
}

/// Resolve every crossing: bit `x` of `state` picks the smoothing at
/// crossing `x`.
pub fn resolve(d: &Diagram, state: u64) -> Result<Resolution, LinkError> {
    let n = d.crossing_count();
    if n < 64 && state >> n != 0 {
        return Err(LinkError::StateLengthMismatch { expected: n, got: 64 - state.leading_zeros() as usize });
    }
    Ok(resolve_unchecked(d.crossings(), &occurrences(d.crossings()), state))
}

pub(crate) fn resolve_unchecked(crossings: &[[u32; 4]], occ: &[[(usize, usize); 2]], state: u64) -> Resolution {
    if crossings.is_empty() {
        return Resolution { state, circles: vec![vec![]], circle_ids: vec![0], circle_of_arc: vec![0] };
    }
    let m = 2 * crossings.len();
    let mut circle_of_arc = vec![u32::MAX; m + 1];
    let mut circles = Vec::new();
    for start in 1..=m as u32 {
        if circle_of_arc[start as usize] != u32::MAX {
            continue;
        }
        let id = circles.len() as u32;
        let mut arcs = Vec::new();
        let mut arc = start;
        // leave through the first end of the starting arc
        let mut here = occ[arc as usize][0];
        loop {
            circle_of_arc[arc as usize] = id;
            arcs.push(arc);
            let (x, p) = here;
            let q = partner(p, state >> x & 1 == 1);
            let next = crossings[x][q];
            let far = other_end(occ, next, (x, q));
            if next == start && far == occ[start as usize][0] {
                break;
            }
            if circle_of_arc[next as usize] == id {
                break;
            }
            arc = next;
            here = far;
        }
        circles.push(arcs);
    }
    let circle_ids = circles.iter().map(|c| *c.iter().min().unwrap()).collect();
    Resolution { state, circles, circle_ids, circle_of_arc }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Two circles (by id) fuse into one.
    Merge { src: (u32, u32), dst: u32 },
    /// One circle splits into two.
    Split { src: u32, dst: (u32, u32) },
}

/// The change of circles along the cube edge that flips crossing
/// `crossing` from 0 to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTransition {
    pub from_state: u64,
    pub to_state: u64,
    pub crossing: usize,
    pub kind: EdgeKind,
    /// Circle ids untouched by the edge, as `(before, after)` pairs.
    pub bystanders: Vec<(u32, u32)>,
}

pub fn edge_transition(d: &Diagram, state: u64, crossing: usize) -> Result<EdgeTransition, LinkError> {
    if crossing >= d.crossing_count() {
        return Err(LinkError::StateLengthMismatch { expected: d.crossing_count(), got: crossing + 1 });
    }
    if state >> crossing & 1 == 1 {
        return Err(LinkError::CrossingAlreadyOne { crossing });
    }
    let from = resolve(d, state)?;
    let to = resolve(d, state | 1 << crossing)?;
    Ok(transition_between(d.crossings()[crossing], crossing, &from, &to))
}

pub(crate) fn transition_between(q: [u32; 4], crossing: usize, from: &Resolution, to: &Resolution) -> EdgeTransition {
    let [a, _, c, _] = q;
    let (fa, fc) = (from.circle_index(a), from.circle_index(c));
    let (ta, tc) = (to.circle_index(a), to.circle_index(c));
    let kind = if fa != fc {
        EdgeKind::Merge { src: (from.circle_ids[fa], from.circle_ids[fc]), dst: to.circle_ids[ta] }
    } else {
        EdgeKind::Split { src: from.circle_ids[fa], dst: (to.circle_ids[ta], to.circle_ids[tc]) }
    };
    let bystanders = from
        .circles
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != fa && i != fc)
        .map(|(i, arcs)| (from.circle_ids[i], to.circle_ids[to.circle_index(arcs[0])]))
        .collect();
    EdgeTransition { from_state: from.state, to_state: to.state, crossing, kind, bystanders }
}
