//! Spectral sequences of finite filtered complexes over `F₂`.
//!
//! Filtrations are increasing in level and `d` may only keep or raise the
//! level. With `F_s` the span of basis vectors of level `≥ s`,
//!
//! ```text
//! Z_r^s = F_s ∩ d⁻¹(F_{s+r})
//! E_r^s = Z_r^s / (Z_{r−1}^{s+1} + d Z_{r−1}^{s−r+1})
//! ```
//!
//! For a complex over `F₂[u]/uᵏ` the `u`-adic level of `uᵖ·g` is `p`.

use crate::homology::{Flat, ModuleDecomp};
use crate::khcube::FreeComplex;
use crate::par;
use crate::ringalg::{BitVec, F2Mat, Span};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Position `(s, i, w)`: filtration level, homological degree, weight.
pub type Position = (i64, i64, i64);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SseqError {
    #[error("differential lowers the filtration level at degree {degree} (row {row}, column {col})")]
    FiltrationViolation { degree: i64, row: usize, col: usize },
    #[error("differential does not preserve the weight at degree {degree}")]
    WeightViolation { degree: i64 },
    #[error("E∞ and the associated graded of homology differ at {0:?}")]
    MismatchAt(Position),
}

/// One weight-homogeneous summand.
#[derive(Debug, Clone)]
struct Piece {
    min_degree: i64,
    levels: Vec<Vec<i64>>,
    /// `d[h]: C_{min+h} → C_{min+h+1}`.
    d: Vec<F2Mat>,
}

impl Piece {
    fn degrees(&self) -> std::ops::Range<i64> {
        self.min_degree..self.min_degree + self.levels.len() as i64
    }

    fn lv(&self, i: i64) -> &[i64] {
        let h = i - self.min_degree;
        if h < 0 || h as usize >= self.levels.len() {
            &[]
        } else {
            &self.levels[h as usize]
        }
    }

    fn dmat(&self, i: i64) -> Option<&F2Mat> {
        let h = i - self.min_degree;
        (h >= 0).then(|| self.d.get(h as usize)).flatten()
    }

    /// Basis of `Z_r^s` in degree `i`.
    fn z(&self, i: i64, s: i64, r: i64) -> Vec<BitVec> {
        let lv = self.lv(i);
        let cols: Vec<usize> = (0..lv.len()).filter(|&c| lv[c] >= s).collect();
        let embed = |v: &BitVec| BitVec::from_indices(lv.len(), v.ones().map(|x| cols[x]));
        let Some(d) = self.dmat(i) else {
            return cols.iter().map(|&c| BitVec::unit(lv.len(), c)).collect();
        };
        let lv1 = self.lv(i + 1);
        let rows: Vec<usize> = (0..lv1.len()).filter(|&x| lv1[x] < s + r).collect();
        d.select(&rows, &cols).kernel_basis().iter().map(embed).collect()
    }

    fn e_dim(&self, i: i64, s: i64, r: i64) -> usize {
        let n = self.lv(i).len();
        let zr = self.z(i, s, r);
        if zr.is_empty() {
            return 0;
        }
        let mut span = Span::new(n, 0);
        if r >= 1 {
            for v in self.z(i, s + 1, r - 1) {
                span.insert(&v, None);
            }
            if let Some(dp) = self.dmat(i - 1) {
                for v in self.z(i - 1, s - r + 1, r - 1) {
                    span.insert(&dp.mul_vec(&v), None);
                }
            }
        } else {
            // r = 0: quotient by F_{s+1}
            for (c, &l) in self.lv(i).iter().enumerate() {
                if l > s {
                    span.insert(&BitVec::unit(n, c), None);
                }
            }
        }
        zr.len() - span.dim()
    }
}

/// A finite filtered complex over `F₂`, split by a weight that `d`
/// preserves.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    pieces: BTreeMap<i64, Piece>,
}

impl FilteredComplex {
    /// From whole-degree data: per degree the level and weight of each
    /// basis vector, and `d[h]: C_{min+h} → C_{min+h+1}`.
    pub fn new(min_degree: i64, levels: Vec<Vec<i64>>, weights: Vec<Vec<i64>>, d: Vec<F2Mat>) -> Result<Self, SseqError> {
        let mut all_w: Vec<i64> = weights.iter().flatten().copied().collect();
        all_w.sort_unstable();
        all_w.dedup();
        for (h, m) in d.iter().enumerate() {
            let deg = min_degree + h as i64;
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    if m.get(r, c) && weights[h + 1][r] != weights[h][c] {
                        return Err(SseqError::WeightViolation { degree: deg });
                    }
                }
            }
        }
        let mut pieces = BTreeMap::new();
        for w in all_w {
            let idx: Vec<Vec<usize>> =
                weights.iter().map(|ws| (0..ws.len()).filter(|&x| ws[x] == w).collect()).collect();
            let lv = idx.iter().zip(&levels).map(|(ix, l)| ix.iter().map(|&x| l[x]).collect()).collect();
            let dd = d.iter().enumerate().map(|(h, m)| m.select(&idx[h + 1], &idx[h])).collect();
            pieces.insert(w, Piece { min_degree, levels: lv, d: dd });
        }
        let f = FilteredComplex { pieces };
        f.check()?;
        Ok(f)
    }

    /// The `u`-adic filtration of a complex over `F₂[u]/uᵏ`, with the
    /// quantum degree as weight.
    pub fn u_adic<C: FreeComplex>(c: &C) -> Self {
        let flat = Flat::new(c);
        let mut by_j: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for (i, j) in flat.bidegrees() {
            by_j.entry(j).or_default().push(i);
        }
        let entries: Vec<(i64, Vec<i64>)> = by_j.into_iter().collect();
        let pieces = par::map(&entries, |(j, is)| {
            let (lo, hi) = (is[0], *is.last().unwrap());
            let levels = (lo..=hi)
                .map(|i| flat.basis((i, *j)).iter().map(|&(_, p)| p as i64).collect())
                .collect();
            let d = (lo..hi).map(|i| flat.diff_block((i, *j))).collect();
            (*j, Piece { min_degree: lo, levels, d })
        });
        FilteredComplex { pieces: pieces.into_iter().collect() }
    }

    fn check(&self) -> Result<(), SseqError> {
        for p in self.pieces.values() {
            for i in p.degrees() {
                let Some(m) = p.dmat(i) else { continue };
                let (l0, l1) = (p.lv(i), p.lv(i + 1));
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        if m.get(r, c) && l1[r] < l0[c] {
                            return Err(SseqError::FiltrationViolation { degree: i, row: r, col: c });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Levels span `lo..=hi` (`(0, 0)` when empty).
    pub fn level_range(&self) -> (i64, i64) {
        let mut it = self.pieces.values().flat_map(|p| p.levels.iter().flatten().copied());
        let first = it.next().unwrap_or(0);
        it.fold((first, first), |(a, b), l| (a.min(l), b.max(l)))
    }

    /// Replace `d` out of degree `i` by zero in every piece. Meant for
    /// exercising [`verify_einfty_gr`].
    pub fn clear_differential(&mut self, i: i64) {
        for p in self.pieces.values_mut() {
            let h = i - p.min_degree;
            if h >= 0 {
                if let Some(m) = p.d.get_mut(h as usize) {
                    *m = F2Mat::zeros(m.rows(), m.cols());
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageTable {
    /// `pages[r]`: nonzero dimensions of `E_r`.
    pub pages: Vec<BTreeMap<Position, usize>>,
    /// First page after which every computed page is the same.
    pub r_stab: usize,
}

impl PageTable {
    pub fn e_infinity(&self) -> &BTreeMap<Position, usize> {
        self.pages.last().expect("at least E₀")
    }

    pub fn total(&self, r: usize) -> usize {
        self.pages[r].values().sum()
    }

    /// `E_r` summed over weights: `(s, i) ↦ dim`.
    pub fn aggregate(&self, r: usize) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for (&(s, i, _), &d) in &self.pages[r] {
            *out.entry((s, i)).or_insert(0) += d;
        }
        out
    }
}

/// Pages `E_0 … E_{r_max}`; `r_max = None` means filtration depth + 1,
/// which is past the last possible differential.
pub fn filtration_pages(f: &FilteredComplex, r_max: Option<usize>) -> PageTable {
    let (lo, hi) = f.level_range();
    let r_max = r_max.unwrap_or((hi - lo + 1) as usize);
    let jobs: Vec<(i64, i64, i64)> = f
        .pieces
        .iter()
        .flat_map(|(&w, p)| p.degrees().flat_map(move |i| (lo..=hi).map(move |s| (w, i, s))))
        .collect();
    let cols = par::map(&jobs, |&(w, i, s)| {
        let p = &f.pieces[&w];
        (0..=r_max as i64).map(|r| p.e_dim(i, s, r)).collect::<Vec<_>>()
    });
    let mut pages = vec![BTreeMap::new(); r_max + 1];
    for (&(w, i, s), dims) in jobs.iter().zip(&cols) {
        for (r, &d) in dims.iter().enumerate() {
            if d > 0 {
                pages[r].insert((s, i, w), d);
            }
        }
    }
    let last = pages.len() - 1;
    let r_stab = (0..=last).find(|&r| pages[r..].iter().all(|p| *p == pages[last])).unwrap();
    PageTable { pages, r_stab }
}

/// `E_∞` must equal the associated graded of homology everywhere.
pub fn verify_einfty_gr(f: &FilteredComplex, m: &ModuleDecomp) -> Result<PageTable, SseqError> {
    let t = filtration_pages(f, None);
    let mut want = BTreeMap::new();
    for (&(i, j), g) in &m.graded {
        for (s, &d) in g.iter().enumerate() {
            if d > 0 {
                want.insert((s as i64, i, j), d);
            }
        }
    }
    let got = t.e_infinity();
    if let Some(pos) = want.keys().chain(got.keys()).find(|p| want.get(p) != got.get(p)) {
        return Err(SseqError::MismatchAt(*pos));
    }
    Ok(t)
}
