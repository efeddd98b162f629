//! Shared fixtures and a dense, brute-force reference pipeline.
//!
//! The oracle rebuilds the complex straight from enhanced states: circles
//! by a fresh union-find, edge maps from the Frobenius algebra
//! `F₂[u][X]/(X² + uX)`, every bidegree as a dense `F₂` matrix, and the
//! module structure from ranks of `uᵃ` on homology. Nothing is shared with
//! the library beyond reading the crossings and signs off a `Diagram`.

#![allow(dead_code)]

use khbn::linkdiag::{bundled_table, Diagram};
use khbn::ModuleDecomp;
use std::collections::BTreeMap;

pub type Bideg = (i64, i64);

/// Table entries as `(name, diagram)`.
pub fn corpus() -> Vec<(String, Diagram)> {
    bundled_table().entries.into_iter().map(|e| (e.name, e.diagram)).collect()
}

pub fn corpus_upto(n: usize) -> Vec<(String, Diagram)> {
    corpus().into_iter().filter(|(_, d)| d.crossing_count() <= n).collect()
}

/// Circles of a state as a map arc ↦ circle number, circles numbered by
/// their smallest arc.
pub fn circles(d: &Diagram, state: u64) -> (usize, Vec<usize>) {
    if d.is_unknot_literal() {
        return (1, vec![0, 0]);
    }
    let n_arcs = d.arc_count();
    let mut parent: Vec<usize> = (0..=n_arcs).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for (x, q) in d.crossings().iter().enumerate() {
        let [a, b, c, e] = q.map(|l| l as usize);
        let pairs = if state >> x & 1 == 0 { [(a, b), (c, e)] } else { [(a, e), (b, c)] };
        for (s, t) in pairs {
            let (rs, rt) = (find(&mut parent, s), find(&mut parent, t));
            parent[rs.max(rt)] = rs.min(rt);
        }
    }
    let mut number = BTreeMap::new();
    let mut of_arc = vec![usize::MAX; n_arcs + 1];
    for arc in 1..=n_arcs {
        let r = find(&mut parent, arc);
        let next = number.len();
        of_arc[arc] = *number.entry(r).or_insert(next);
    }
    (number.len(), of_arc)
}

/// An enhanced state: cube vertex and the set of circles labelled `X`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Gen {
    state: u64,
    minus: u64,
}

/// Element of `C ⊗ F₂[u]/uᵏ` as a set of `(generator, u-power)`.
type Chain = BTreeMap<(Gen, u32), bool>;

fn add(ch: &mut Chain, g: Gen, p: u32, k: u32) {
    if p < k {
        let e = ch.entry((g, p)).or_insert(false);
        *e = !*e;
    }
}

pub struct Dense {
    k: u32,
    /// Basis of each bidegree.
    basis: BTreeMap<Bideg, Vec<(Gen, u32)>>,
    /// `d: (i, j) → (i+1, j)` as rows of the target.
    d: BTreeMap<Bideg, Vec<Vec<bool>>>,
}

impl Dense {
    pub fn build(d: &Diagram, k: u32, basepoint: Option<u32>) -> Dense {
        let n = d.crossing_count();
        let (np, nm) = (d.n_plus() as i64, d.n_minus() as i64);
        let states: Vec<(usize, Vec<usize>)> = (0..1u64 << n).map(|s| circles(d, s)).collect();
        let pointed = |s: u64| basepoint.map(|b| states[s as usize].1[b as usize]);
        let qdeg = |g: &Gen| {
            let c = states[g.state as usize].0 as i64;
            let minus = g.minus.count_ones() as i64;
            let h = g.state.count_ones() as i64;
            (c - minus) - minus + h + np - 2 * nm
        };
        let mut basis: BTreeMap<Bideg, Vec<(Gen, u32)>> = BTreeMap::new();
        for s in 0..1u64 << n {
            let c = states[s as usize].0;
            for minus in 0..1u64 << c {
                if pointed(s).is_some_and(|pc| minus >> pc & 1 == 1) {
                    continue;
                }
                let g = Gen { state: s, minus };
                let i = s.count_ones() as i64 - nm;
                for p in 0..k {
                    basis.entry((i, qdeg(&g) - 2 * p as i64)).or_default().push((g, p));
                }
            }
        }
        let image = |g: Gen, p: u32| -> Chain {
            let mut out = Chain::new();
            let (c0, map0) = &states[g.state as usize];
            for x in 0..n {
                if g.state >> x & 1 == 1 {
                    continue;
                }
                let t = g.state | 1 << x;
                let (c1, map1) = &states[t as usize];
                // circles at the crossing before and after
                let [a, b, c, _e] = d.crossings()[x].map(|l| l as usize);
                let before: Vec<usize> = [map0[a], map0[c]].into();
                let after: Vec<usize> = [map1[a], map1[b]].into();
                // every other circle keeps its label
                let carry = |m1: &mut u64| {
                    for arc in 1..map0.len() {
                        let o = map0[arc];
                        if !before.contains(&o) && g.minus >> o & 1 == 1 {
                            *m1 |= 1 << map1[arc];
                        }
                    }
                };
                let mut base = 0u64;
                carry(&mut base);
                let dropped = |m: u64| pointed(t).is_some_and(|pc| m >> pc & 1 == 1);
                let push = |m: u64, extra: u32, out: &mut Chain| {
                    if !dropped(m) {
                        add(out, Gen { state: t, minus: m }, p + extra, k);
                    }
                };
                if c1 < c0 {
                    // merge of before[0], before[1] into after[0]
                    let xs = before.iter().filter(|&&o| g.minus >> o & 1 == 1).count();
                    let tgt = after[0];
                    match xs {
                        0 => push(base, 0, &mut out),
                        1 => push(base | 1 << tgt, 0, &mut out),
                        _ => push(base | 1 << tgt, 1, &mut out),
                    }
                } else {
                    // split of before[0] into after[0], after[1]
                    let (l, r) = (after[0], after[1]);
                    if g.minus >> before[0] & 1 == 1 {
                        push(base | 1 << l | 1 << r, 0, &mut out);
                    } else {
                        push(base | 1 << l, 0, &mut out);
                        push(base | 1 << r, 0, &mut out);
                        push(base, 1, &mut out);
                    }
                }
            }
            out
        };
        let mut dm = BTreeMap::new();
        for (&(i, j), src) in &basis {
            let Some(tgt) = basis.get(&(i + 1, j)) else { continue };
            let index: BTreeMap<(Gen, u32), usize> = tgt.iter().enumerate().map(|(r, &gp)| (gp, r)).collect();
            let mut m = vec![vec![false; src.len()]; tgt.len()];
            for (col, &(g, p)) in src.iter().enumerate() {
                for (gp, on) in image(g, p) {
                    if on {
                        m[index[&gp]][col] = true;
                    }
                }
            }
            dm.insert((i, j), m);
        }
        Dense { k, basis, d: dm }
    }

    fn dim(&self, b: Bideg) -> usize {
        self.basis.get(&b).map_or(0, Vec::len)
    }

    /// `d` out of `b`, with the right shape even when empty.
    fn d_out(&self, b: Bideg) -> Vec<Vec<bool>> {
        self.d.get(&b).cloned().unwrap_or_else(|| vec![vec![false; self.dim(b)]; self.dim((b.0 + 1, b.1))])
    }

    pub fn d_squared_is_zero(&self) -> bool {
        self.basis.keys().all(|&(i, j)| {
            let d1 = self.d_out((i, j));
            let d2 = self.d_out((i + 1, j));
            let prod = matmul(&d2, &d1, self.dim((i, j)));
            prod.iter().flatten().all(|x| !x)
        })
    }

    /// Cycles at `b` supported on `u`-powers `≥ s`.
    fn cycles_from(&self, b: Bideg, s: u32) -> Vec<Vec<bool>> {
        let cols: Vec<usize> = (0..self.dim(b)).filter(|&c| self.basis[&b][c].1 >= s).collect();
        let d = self.d_out(b);
        let restricted: Vec<Vec<bool>> = d.iter().map(|row| cols.iter().map(|&c| row[c]).collect()).collect();
        null_space(&restricted, cols.len())
            .into_iter()
            .map(|v| {
                let mut full = vec![false; self.dim(b)];
                for (x, &c) in cols.iter().enumerate() {
                    full[c] = v[x];
                }
                full
            })
            .collect()
    }

    fn boundaries(&self, b: Bideg) -> Vec<Vec<bool>> {
        let d = self.d_out((b.0 - 1, b.1));
        transpose(&d, self.dim((b.0 - 1, b.1)))
    }

    /// `dim (span(vs) + B) − dim B` at `b`.
    fn mod_boundaries(&self, b: Bideg, vs: Vec<Vec<bool>>) -> usize {
        let bd = self.boundaries(b);
        let rb = rank(bd.clone());
        rank(bd.into_iter().chain(vs).collect()) - rb
    }

    fn times_u(&self, from: Bideg, a: u32, v: &[bool]) -> Vec<bool> {
        let to = (from.0, from.1 - 2 * a as i64);
        let mut w = vec![false; self.dim(to)];
        if let Some(tb) = self.basis.get(&to) {
            let index: BTreeMap<(Gen, u32), usize> = tb.iter().enumerate().map(|(r, &gp)| (gp, r)).collect();
            for (x, &(g, p)) in self.basis[&from].iter().enumerate() {
                if v[x] && p + a < self.k {
                    w[index[&(g, p + a)]] ^= true;
                }
            }
        }
        w
    }

    pub fn module(&self) -> ModuleDecomp {
        let k = self.k;
        let mut dims = BTreeMap::new();
        let mut graded = BTreeMap::new();
        let mut c: BTreeMap<Bideg, Vec<usize>> = BTreeMap::new();
        for &b in self.basis.keys() {
            let z = self.cycles_from(b, 0);
            let h = self.mod_boundaries(b, z.clone());
            if h == 0 {
                continue;
            }
            dims.insert(b, h);
            let f: Vec<usize> =
                (0..=k).map(|s| if s == k { 0 } else { self.mod_boundaries(b, self.cycles_from(b, s)) }).collect();
            graded.insert(b, (0..k as usize).map(|s| f[s] - f[s + 1]).collect());
            let ranks = (0..=k)
                .map(|a| {
                    let to = (b.0, b.1 - 2 * a as i64);
                    self.mod_boundaries(to, z.iter().map(|v| self.times_u(b, a, v)).collect())
                })
                .collect();
            c.insert(b, ranks);
        }
        let cc = |b: Bideg, a: usize| c.get(&b).map_or(0, |r| r[a]);
        let mut summands: BTreeMap<Bideg, BTreeMap<u32, usize>> = BTreeMap::new();
        for &(i, j) in c.keys() {
            let ge = |l: usize| cc((i, j), l - 1) - cc((i, j + 2), l);
            for l in 1..=k as usize {
                let m = ge(l) - if l < k as usize { ge(l + 1) } else { 0 };
                if m > 0 {
                    summands.entry((i, j)).or_default().insert(l as u32, m);
                }
            }
        }
        ModuleDecomp { k, summands, dims, graded }
    }
}

fn transpose(m: &[Vec<bool>], cols: usize) -> Vec<Vec<bool>> {
    (0..cols).map(|c| m.iter().map(|row| row[c]).collect()).collect()
}

fn matmul(a: &[Vec<bool>], b: &[Vec<bool>], cols: usize) -> Vec<Vec<bool>> {
    a.iter()
        .map(|row| (0..cols).map(|c| row.iter().zip(b).fold(false, |acc, (&x, r)| acc ^ (x & r[c]))).collect())
        .collect()
}

/// Rank of a list of row vectors by plain Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<bool>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&x| rows[x][col]) else { continue };
        rows.swap(r, p);
        for x in 0..rows.len() {
            if x != r && rows[x][col] {
                let pivot = rows[r].clone();
                for (a, b) in rows[x].iter_mut().zip(pivot) {
                    *a ^= b;
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of `{v : m v = 0}`.
pub fn null_space(m: &[Vec<bool>], cols: usize) -> Vec<Vec<bool>> {
    let mut rows: Vec<Vec<bool>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows.len()).find(|&x| rows[x][col]) else { continue };
        rows.swap(r, p);
        for x in 0..rows.len() {
            if x != r && rows[x][col] {
                let pivot = rows[r].clone();
                for (a, b) in rows[x].iter_mut().zip(pivot) {
                    *a ^= b;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![false; cols];
            v[f] = true;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = rows[row][f];
            }
            v
        })
        .collect()
}

/// Dense reference decomposition.
pub fn dense_homology(d: &Diagram, k: u32, reduced: bool) -> ModuleDecomp {
    let bp = reduced.then(|| d.effective_basepoint());
    Dense::build(d, k, bp).module()
}

/// Closed braids on 2..=4 strands with at most `max_len` letters, every
/// strand used.
pub fn braids(max_len: usize) -> impl proptest::strategy::Strategy<Value = Diagram> {
    use proptest::prelude::*;
    (2usize..=4)
        .prop_flat_map(move |s| {
            let letter = (1..s as i32, any::<bool>()).prop_map(|(g, pos)| if pos { g } else { -g });
            (Just(s), proptest::collection::vec(letter, 1..=max_len))
        })
        .prop_filter_map("every generator must occur", |(s, w)| khbn::linkdiag::from_braid(s, &w).ok())
}
