//! Bigraded homology as an `F₂[u]/uᵏ`-module.
//!
//! The complex is flattened to `F₂` one bidegree at a time: the basis at
//! `(i, j)` is every `uᵖ·g` with `q(g) − 2p = j`. Homology classes get
//! explicit cycle representatives, which makes the action of `u` and the
//! connecting maps of the coefficient sequences computable as matrices.

use crate::khcube::{build_complex, FreeComplex, GradedComplex, KhError};
use crate::linkdiag::{Diagram, LaurentPoly};
use crate::par;
use crate::ringalg::{BitVec, F2Mat, Span};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub type Bidegree = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("d∘d ≠ 0 at bidegree {0:?}")]
    DSquaredFailure(Bidegree),
    #[error("lift of a class at {0:?} is not divisible by u, or does not land on a cycle")]
    LiftFailure(Bidegree),
    #[error(transparent)]
    Complex(#[from] KhError),
}

/// Homology as a direct sum of cyclic modules `F₂[u]/uˡ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDecomp {
    pub k: u32,
    /// Summands keyed by the bidegree of their generator (the top of the
    /// `u`-tower), then by length `l`.
    pub summands: BTreeMap<Bidegree, BTreeMap<u32, usize>>,
    /// `F₂`-dimension per bidegree.
    pub dims: BTreeMap<Bidegree, usize>,
    /// Dimensions of the associated graded of the `u`-adic filtration
    /// `F_s H = [Z ∩ uˢC]`: entry `s` is `dim F_s H − dim F_{s+1} H`.
    pub graded: BTreeMap<Bidegree, Vec<usize>>,
}

impl ModuleDecomp {
    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// Rank of multiplication by `u` on the whole module.
    pub fn u_rank(&self) -> usize {
        self.summands.values().flat_map(|m| m.iter()).map(|(&l, &c)| (l as usize - 1) * c).sum()
    }

    /// Multiplicity of each length, ignoring where summands sit.
    pub fn length_multiplicities(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for m in self.summands.values() {
            for (&l, &c) in m {
                *out.entry(l).or_insert(0) += c;
            }
        }
        out
    }

    /// The same module with every quantum degree shifted by `dq`.
    pub fn shift_quantum(&self, dq: i64) -> ModuleDecomp {
        let sh = |(i, j): &Bidegree| (*i, j + dq);
        ModuleDecomp {
            k: self.k,
            summands: self.summands.iter().map(|(b, m)| (sh(b), m.clone())).collect(),
            dims: self.dims.iter().map(|(b, &d)| (sh(b), d)).collect(),
            graded: self.graded.iter().map(|(b, g)| (sh(b), g.clone())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &ModuleDecomp) -> ModuleDecomp {
        assert_eq!(self.k, other.k);
        let mut out = self.clone();
        for (b, m) in &other.summands {
            let e = out.summands.entry(*b).or_default();
            for (&l, &c) in m {
                *e.entry(l).or_insert(0) += c;
            }
        }
        for (b, &d) in &other.dims {
            *out.dims.entry(*b).or_insert(0) += d;
        }
        for (b, g) in &other.graded {
            let e = out.graded.entry(*b).or_insert_with(|| vec![0; self.k as usize]);
            for (x, y) in e.iter_mut().zip(g) {
                *x += y;
            }
        }
        out
    }

    /// Poincaré polynomial as `(i, j) ↦ dim`.
    pub fn poincare(&self) -> &BTreeMap<Bidegree, usize> {
        &self.dims
    }
}

/// The `F₂` basis of one bidegree: pairs `(generator, u-power)`.
#[derive(Debug, Clone, Default)]
struct Block {
    basis: Vec<(usize, u32)>,
}

/// A complex flattened to `F₂`, one block per bidegree.
pub struct Flat<'a, C: FreeComplex> {
    c: &'a C,
    k: u32,
    blocks: BTreeMap<Bidegree, Block>,
    /// `pos[i][g·k + p]`: index of `uᵖg` inside its block.
    pos: BTreeMap<i64, Vec<usize>>,
}

impl<'a, C: FreeComplex> Flat<'a, C> {
    pub fn new(c: &'a C) -> Self {
        let k = c.order();
        let mut blocks: BTreeMap<Bidegree, Block> = BTreeMap::new();
        let mut pos = BTreeMap::new();
        for i in c.min_degree()..=c.max_degree() {
            let mut p_of = vec![0; c.rank(i) * k as usize];
            for g in 0..c.rank(i) {
                for p in 0..k {
                    let j = c.qdeg(i, g) - 2 * p as i64;
                    let b = blocks.entry((i, j)).or_default();
                    p_of[g * k as usize + p as usize] = b.basis.len();
                    b.basis.push((g, p));
                }
            }
            pos.insert(i, p_of);
        }
        Flat { c, k, blocks, pos }
    }

    pub fn complex(&self) -> &C {
        self.c
    }

    pub fn bidegrees(&self) -> impl Iterator<Item = Bidegree> + '_ {
        self.blocks.keys().copied()
    }

    pub fn block_dim(&self, b: Bidegree) -> usize {
        self.blocks.get(&b).map_or(0, |x| x.basis.len())
    }

    /// `(generator, u-power)` of each basis vector at `b`.
    pub fn basis(&self, b: Bidegree) -> &[(usize, u32)] {
        self.blocks.get(&b).map_or(&[], |x| &x.basis)
    }

    /// Index of `uᵖ·g` (degree `i`) inside its block.
    pub fn index(&self, i: i64, g: usize, p: u32) -> usize {
        self.pos[&i][g * self.k as usize + p as usize]
    }

    /// `d: (i, j) → (i + 1, j)` as an `F₂` matrix.
    pub fn diff_block(&self, (i, j): Bidegree) -> F2Mat {
        let cols = self.basis((i, j));
        let rows = self.block_dim((i + 1, j));
        let mut m = F2Mat::zeros(rows, cols.len());
        let Some(d) = self.c.differential(i) else { return m };
        if rows == 0 {
            return m;
        }
        for (ci, &(g, p)) in cols.iter().enumerate() {
            for (&r, e) in d.column(g) {
                for t in e.terms() {
                    if p + t < self.k {
                        m.flip(self.index(i + 1, r, p + t), ci);
                    }
                }
            }
        }
        m
    }

    /// Apply `d` to a vector of block `b`.
    pub fn apply_d(&self, b: Bidegree, v: &BitVec) -> BitVec {
        self.diff_block(b).mul_vec(v)
    }
}

/// Homology of one bidegree with chosen representatives.
#[derive(Debug, Clone)]
pub struct HomologyAt {
    pub reps: Vec<BitVec>,
    span: Span,
    /// Kernel of `d` restricted to each filtration level `uˢC`, `s < k`.
    filtered: Vec<usize>,
}

impl HomologyAt {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of cycle `z`; `None` if `z` is not a cycle
    /// in the span of boundaries and representatives.
    pub fn coords(&self, z: &BitVec) -> Option<BitVec> {
        let (res, combo) = self.span.reduce(z);
        if !res.is_zero() {
            return None;
        }
        let mut out = BitVec::zeros(self.reps.len());
        for t in combo.ones().filter(|&t| t < self.reps.len()) {
            out.set(t, true);
        }
        Some(out)
    }
}

/// Homology of a whole complex, with representatives.
pub struct Homology<'a, C: FreeComplex> {
    pub flat: Flat<'a, C>,
    pub at: BTreeMap<Bidegree, HomologyAt>,
}

impl<'a, C: FreeComplex> Homology<'a, C> {
    pub fn compute(c: &'a C) -> Result<Self, HomologyError> {
        if let Err(b) = crate::khcube::verify_d_squared(c) {
            return Err(HomologyError::DSquaredFailure(b));
        }
        let flat = Flat::new(c);
        let bds: Vec<Bidegree> = flat.bidegrees().collect();
        let k = flat.k;
        let results = par::map(&bds, |&(i, j)| {
            let n = flat.block_dim((i, j));
            let d_out = flat.diff_block((i, j));
            let d_in = flat.diff_block((i - 1, j));
            let z = d_out.kernel_basis();
            let mut span = Span::new(n, z.len());
            for c in 0..d_in.cols() {
                span.insert(&d_in.col(c), None);
            }
            let boundary_rank = span.dim();
            let mut reps = Vec::new();
            for v in &z {
                if span.insert(v, Some(reps.len())) {
                    reps.push(v.clone());
                }
            }
            // dim F_s H for s = 0..k
            let basis = flat.basis((i, j));
            let mut filtered = Vec::with_capacity(k as usize);
            for s in 0..k {
                let cols: Vec<usize> = (0..n).filter(|&x| basis[x].1 >= s).collect();
                let sub = d_out.select(&(0..d_out.rows()).collect::<Vec<_>>(), &cols);
                let mut sp = Span::new(n, 0);
                for c in 0..d_in.cols() {
                    sp.insert(&d_in.col(c), None);
                }
                for kv in sub.kernel_basis() {
                    let full = BitVec::from_indices(n, kv.ones().map(|x| cols[x]));
                    sp.insert(&full, None);
                }
                filtered.push(sp.dim() - boundary_rank);
            }
            ((i, j), HomologyAt { reps, span, filtered })
        });
        let at = results.into_iter().filter(|(_, h)| h.dim() > 0).collect();
        Ok(Homology { flat, at })
    }

    pub fn dim(&self, b: Bidegree) -> usize {
        self.at.get(&b).map_or(0, HomologyAt::dim)
    }

    /// Map a vector of block `from` through `f` (on `(generator, power)`
    /// pairs) into block `to` of `target`'s flattening, then take
    /// coordinates there.
    fn transport<D: FreeComplex>(
        &self,
        from: Bidegree,
        v: &BitVec,
        target: &Homology<'_, D>,
        to: Bidegree,
        f: impl Fn(usize, u32) -> Option<(usize, u32)>,
    ) -> Option<BitVec> {
        let basis = self.flat.basis(from);
        let mut w = BitVec::zeros(target.flat.block_dim(to));
        for x in v.ones() {
            let (g, p) = basis[x];
            if let Some((g2, p2)) = f(g, p) {
                w.flip(target.flat.index(to.0, g2, p2));
            }
        }
        match target.at.get(&to) {
            Some(h) => h.coords(&w),
            None => {
                // zero homology: w must be a boundary; check it is at least a cycle
                Some(BitVec::zeros(0)).filter(|_| target.flat.apply_d(to, &w).is_zero())
            }
        }
    }

    /// Matrix of `u: H(i, j) → H(i, j − 2)`.
    pub fn u_map(&self, (i, j): Bidegree) -> F2Mat {
        let src = self.dim((i, j));
        let dst = self.dim((i, j - 2));
        let mut m = F2Mat::zeros(dst, src);
        let Some(h) = self.at.get(&(i, j)) else { return m };
        let k = self.flat.k;
        for (c, z) in h.reps.iter().enumerate() {
            let coords = self
                .transport((i, j), z, self, (i, j - 2), |g, p| (p + 1 < k).then_some((g, p + 1)))
                .expect("u maps cycles to cycles");
            for r in coords.ones() {
                m.set(r, c, true);
            }
        }
        m
    }

    /// Decompose into cyclic summands.
    pub fn decompose(&self) -> ModuleDecomp {
        let k = self.flat.k;
        let mut dims = BTreeMap::new();
        let mut graded = BTreeMap::new();
        for (&b, h) in &self.at {
            dims.insert(b, h.dim());
            let mut g: Vec<usize> = (0..k as usize)
                .map(|s| h.filtered[s] - h.filtered.get(s + 1).copied().unwrap_or(0))
                .collect();
            g.truncate(k as usize);
            graded.insert(b, g);
        }
        // c[(i, j)][a] = rank of uᵃ restricted to H(i, j)
        let bds: Vec<Bidegree> = self.at.keys().copied().collect();
        let ranks: BTreeMap<Bidegree, Vec<usize>> = par::map(&bds, |&(i, j)| {
            let mut acc = F2Mat::identity(self.dim((i, j)));
            let mut r = vec![self.dim((i, j))];
            for a in 1..=k as i64 {
                acc = self.u_map((i, j - 2 * (a - 1))).mul(&acc);
                r.push(acc.rank());
            }
            assert_eq!(r[k as usize], 0, "uᵏ acts as zero");
            ((i, j), r)
        })
        .into_iter()
        .collect();
        let c = |b: Bidegree, a: usize| ranks.get(&b).map_or(0, |r| r.get(a).copied().unwrap_or(0));
        let mut summands: BTreeMap<Bidegree, BTreeMap<u32, usize>> = BTreeMap::new();
        for &(i, j) in &bds {
            // chains with top at j and length ≥ l: c(j, l−1) − c(j+2, l)
            let at_least = |l: usize| c((i, j), l - 1) - c((i, j + 2), l);
            for l in 1..=k as usize {
                let exact = at_least(l) - if l < k as usize { at_least(l + 1) } else { 0 };
                if exact > 0 {
                    summands.entry((i, j)).or_default().insert(l as u32, exact);
                }
            }
        }
        ModuleDecomp { k, summands, dims, graded }
    }
}

/// Homology of a complex as a module.
pub fn bigraded_homology<C: FreeComplex>(c: &C) -> Result<ModuleDecomp, HomologyError> {
    Ok(Homology::compute(c)?.decompose())
}

/// `Σ (−1)ⁱ dim H^{i,j} qʲ`.
pub fn euler_characteristic(m: &ModuleDecomp) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for (&(i, j), &d) in &m.dims {
        p.add_term(if i.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }, j);
    }
    p
}

/// Homology of the diagram's complex.
pub fn homology_of(d: &Diagram, k: u32, reduced: bool, basepoint: Option<u32>) -> Result<ModuleDecomp, HomologyError> {
    bigraded_homology(&build_complex(d, k, reduced, basepoint)?)
}

/// Reduced homology for every basepoint arc.
pub fn reduced_over_basepoints(d: &Diagram, k: u32) -> Result<Vec<(u32, ModuleDecomp)>, HomologyError> {
    d.arcs().into_iter().map(|a| Ok((a, homology_of(d, k, true, Some(a))?))).collect()
}

/// One node of the long exact sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Node {
    /// `H(C_a)` at the given bidegree.
    A(Bidegree),
    /// `H(C_{a+b})`.
    Middle(Bidegree),
    /// `H(C_b)`.
    B(Bidegree),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TriangleRow {
    pub i: i64,
    pub j: i64,
    /// `dim H(C_a)^{i, j+2b}`, `dim H(C_{a+b})^{i,j}`, `dim H(C_b)^{i,j}`.
    pub dims: [usize; 3],
    /// Ranks of the maps leaving these three nodes.
    pub ranks: [usize; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TriangleReport {
    pub a: u32,
    pub b: u32,
    pub rows: Vec<TriangleRow>,
    pub failures: Vec<Node>,
}

impl TriangleReport {
    pub fn exact(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The three maps of the long exact sequence of
/// `0 → C_a →(·uᵇ) C_{a+b} → C_b → 0`.
pub struct Triangle<'a> {
    pub a: u32,
    pub b: u32,
    pub ha: Homology<'a, GradedComplex>,
    pub hab: Homology<'a, GradedComplex>,
    pub hb: Homology<'a, GradedComplex>,
}

impl<'a> Triangle<'a> {
    /// `ca`, `cab`, `cb` must be the same complex truncated at `a`, `a+b`, `b`.
    pub fn new(ca: &'a GradedComplex, cab: &'a GradedComplex, cb: &'a GradedComplex) -> Result<Self, HomologyError> {
        let (a, b) = (ca.order(), cb.order());
        assert_eq!(cab.order(), a + b);
        Ok(Triangle { a, b, ha: Homology::compute(ca)?, hab: Homology::compute(cab)?, hb: Homology::compute(cb)? })
    }

    /// `α: H_a^{i,j+2b} → H_{a+b}^{i,j}`, multiplication by `uᵇ`.
    pub fn alpha(&self, (i, j): Bidegree) -> F2Mat {
        let from = (i, j + 2 * self.b as i64);
        let mut m = F2Mat::zeros(self.hab.dim((i, j)), self.ha.dim(from));
        if let Some(h) = self.ha.at.get(&from) {
            for (c, z) in h.reps.iter().enumerate() {
                let v = self.ha.transport(from, z, &self.hab, (i, j), |g, p| Some((g, p + self.b))).unwrap();
                for r in v.ones() {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// `β: H_{a+b}^{i,j} → H_b^{i,j}`, reduction mod `uᵇ`.
    pub fn beta(&self, (i, j): Bidegree) -> F2Mat {
        let mut m = F2Mat::zeros(self.hb.dim((i, j)), self.hab.dim((i, j)));
        if let Some(h) = self.hab.at.get(&(i, j)) {
            for (c, z) in h.reps.iter().enumerate() {
                let v = self.hab.transport((i, j), z, &self.hb, (i, j), |g, p| (p < self.b).then_some((g, p))).unwrap();
                for r in v.ones() {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// `δ: H_b^{i,j} → H_a^{i+1,j+2b}`: lift, apply `d`, divide by `uᵇ`.
    pub fn delta(&self, (i, j): Bidegree) -> Result<F2Mat, HomologyError> {
        let to = (i + 1, j + 2 * self.b as i64);
        let mut m = F2Mat::zeros(self.ha.dim(to), self.hb.dim((i, j)));
        let Some(h) = self.hb.at.get(&(i, j)) else { return Ok(m) };
        let fb = &self.hb.flat;
        let fab = &self.hab.flat;
        for (c, z) in h.reps.iter().enumerate() {
            let mut lift = BitVec::zeros(fab.block_dim((i, j)));
            for x in z.ones() {
                let (g, p) = fb.basis((i, j))[x];
                lift.flip(fab.index(i, g, p));
            }
            let dz = fab.apply_d((i, j), &lift);
            let v = self
                .hab
                .transport((i + 1, j), &dz, &self.ha, to, |g, p| {
                    if p >= self.b {
                        Some((g, p - self.b))
                    } else {
                        None
                    }
                })
                .ok_or(HomologyError::LiftFailure((i, j)))?;
            // every term must have been divisible by uᵇ
            if dz.ones().any(|x| fab.basis((i + 1, j))[x].1 < self.b) {
                return Err(HomologyError::LiftFailure((i, j)));
            }
            for r in v.ones() {
                m.set(r, c, true);
            }
        }
        Ok(m)
    }

    /// Check exactness at every node.
    pub fn verify(&self) -> Result<TriangleReport, HomologyError> {
        let two_b = 2 * self.b as i64;
        let mut js = BTreeSet::new();
        let mut is = BTreeSet::new();
        for &(i, j) in self.hab.at.keys().chain(self.hb.at.keys()) {
            js.insert(j);
            is.insert(i);
        }
        for &(i, j) in self.ha.at.keys() {
            js.insert(j - two_b);
            is.insert(i);
        }
        let mut rows = Vec::new();
        let mut failures = Vec::new();
        let (Some(&lo), Some(&hi)) = (is.first(), is.last()) else {
            return Ok(TriangleReport { a: self.a, b: self.b, rows, failures });
        };
        for &j in &js {
            for i in lo - 1..=hi + 1 {
                let al = self.alpha((i, j));
                let be = self.beta((i, j));
                let de = self.delta((i, j))?;
                let de_prev = self.delta((i - 1, j))?;
                let al_next = self.alpha((i + 1, j));
                let dims = [self.ha.dim((i, j + two_b)), self.hab.dim((i, j)), self.hb.dim((i, j))];
                let ranks = [al.rank(), be.rank(), de.rank()];
                // node A: δ_{i−1} in, α out
                let ok_a = al.mul(&de_prev).is_zero() && dims[0] == de_prev.rank() + ranks[0];
                let ok_m = be.mul(&al).is_zero() && dims[1] == ranks[0] + ranks[1];
                let ok_b = de.mul(&be).is_zero() && dims[2] == ranks[1] + ranks[2];
                let _ = al_next;
                if !ok_a {
                    failures.push(Node::A((i, j + two_b)));
                }
                if !ok_m {
                    failures.push(Node::Middle((i, j)));
                }
                if !ok_b {
                    failures.push(Node::B((i, j)));
                }
                if dims.iter().any(|&d| d > 0) {
                    rows.push(TriangleRow { i, j, dims, ranks });
                }
            }
        }
        Ok(TriangleReport { a: self.a, b: self.b, rows, failures })
    }
}

/// The connecting map `H(C₁) → H(C₁)` of `0 → C₁ →(·u) C₂ → C₁ → 0`, per
/// source bidegree; it has bidegree `(+1, +2)`.
pub fn connecting_map(c2: &GradedComplex) -> Result<BTreeMap<Bidegree, F2Mat>, HomologyError> {
    assert_eq!(c2.order(), 2, "connecting_map expects a k = 2 complex");
    let c1 = c2.truncate(1);
    let t = Triangle::new(&c1, c2, &c1)?;
    let mut out = BTreeMap::new();
    for &b in t.hb.at.keys() {
        out.insert(b, t.delta(b)?);
    }
    Ok(out)
}

/// Exactness of the Kh / BN² triangle for a diagram.
pub fn verify_triangle(d: &Diagram, reduced: bool) -> Result<TriangleReport, HomologyError> {
    verify_triangle_general(d, reduced, 1, 1)
}

/// Exactness of the sequence for `0 → C_a → C_{a+b} → C_b → 0`.
pub fn verify_triangle_general(d: &Diagram, reduced: bool, a: u32, b: u32) -> Result<TriangleReport, HomologyError> {
    let bp = reduced.then(|| d.effective_basepoint());
    let cab = build_complex(d, a + b, reduced, bp)?;
    let ca = cab.truncate(a);
    let cb = cab.truncate(b);
    Triangle::new(&ca, &cab, &cb)?.verify()
}
