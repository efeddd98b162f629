use std::fmt;

#[inline]
fn words(n: usize) -> usize {
    n.div_ceil(64)
}

/// A bit-packed vector over `F₂`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    data: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, data: vec![0; words(len)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in idx {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.data[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % 64);
        if b {
            self.data[i / 64] |= m;
        } else {
            self.data[i / 64] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.data[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest index holding a one, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.first_one_from(0)
    }

    pub fn first_one_from(&self, start: usize) -> Option<usize> {
        if start >= self.len {
            return None;
        }
        let mut w = start / 64;
        let mut cur = self.data[w] & (!0u64 << (start % 64));
        loop {
            if cur != 0 {
                let i = w * 64 + cur.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
            w += 1;
            if w >= self.data.len() {
                return None;
            }
            cur = self.data[w];
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        let mut next = self.first_one();
        std::iter::from_fn(move || {
            let cur = next?;
            next = self.first_one_from(cur + 1);
            Some(cur)
        })
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.data.iter().zip(&other.data) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// A dense `F₂` matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Mat {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Output of [`F2Mat::rank_data`].
#[derive(Clone, Debug)]
pub struct RankData {
    pub rank: usize,
    /// Basis of the null space, as vectors of length `cols`.
    pub kernel_basis: Vec<BitVec>,
    /// Basis of the column space: the pivot columns of the input.
    pub image_basis: Vec<BitVec>,
    /// Pivot columns, in increasing order.
    pub pivots: Vec<usize>,
    pub rref: F2Mat,
}

impl F2Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words(cols);
        F2Mat { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), cols);
            m.row_words_mut(r).copy_from_slice(&v.data);
        }
        m
    }

    pub fn from_cols(rows: usize, cols: &[BitVec]) -> Self {
        Self::from_rows(rows, cols).transpose()
    }

    pub fn from_dense(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                if x & 1 == 1 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / 64];
        let m = 1u64 << (c % 64);
        if b {
            *w |= m;
        } else {
            *w &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / 64] ^= 1u64 << (c % 64);
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec { len: self.cols, data: self.row_words(r).to_vec() }
    }

    pub fn col(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..src * s + s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..dst * s + s])
        };
        // `a` borrows immutably from one half, `b` mutably from the other
        for (x, y) in b.iter_mut().zip(a.iter()) {
            *x ^= y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn transpose(&self) -> F2Mat {
        let mut t = F2Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for (wi, &w) in self.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let c = wi * 64 + w.trailing_zeros() as usize;
                    t.set(c, r, true);
                    w &= w - 1;
                }
            }
        }
        t
    }

    pub fn mul(&self, rhs: &F2Mat) -> F2Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = F2Mat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for (wi, &w) in self.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let k = wi * 64 + w.trailing_zeros() as usize;
                    let src = rhs.row_words(k);
                    let dst = &mut out.data[r * out.stride..(r + 1) * out.stride];
                    for (x, y) in dst.iter_mut().zip(src) {
                        *x ^= y;
                    }
                    w &= w - 1;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len);
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.row_words(r).iter().zip(&v.data) {
                acc ^= a & b;
            }
            if acc.count_ones() % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    pub fn add(&self, rhs: &F2Mat) -> F2Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a ^= b;
        }
        out
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> F2Mat {
        let mut out = F2Mat::zeros(rows.len(), cols.len());
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(ri, ci, true);
                }
            }
        }
        out
    }

    /// Reduce to row echelon form in place; returns the pivot columns.
    ///
    /// Columns are scanned left to right and the pivot for each is the
    /// lowest-index remaining row with a one there. With `full` the pivot
    /// columns are also cleared above the pivot (reduced form).
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(p, next);
            let start = if full { 0 } else { next + 1 };
            for r in start..self.rows {
                if r != next && self.get(r, c) {
                    self.xor_row_into(next, r);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(false).len()
    }

    pub fn rref(&self) -> (F2Mat, Vec<usize>) {
        let mut m = self.clone();
        let p = m.eliminate(true);
        (m, p)
    }

    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// Rank, null space, column space and reduced echelon form together.
    pub fn rank_data(&self) -> RankData {
        let (rref, pivots) = self.rref();
        let kernel_basis = kernel_from_rref(&rref, &pivots);
        let image_basis = pivots.iter().map(|&c| self.col(c)).collect();
        let rank = pivots.len();
        debug_assert_eq!(rank + kernel_basis.len(), self.cols, "rank-nullity");
        RankData { rank, kernel_basis, image_basis, pivots, rref }
    }
}

fn kernel_from_rref(r: &F2Mat, pivots: &[usize]) -> Vec<BitVec> {
    let mut is_pivot = vec![false; r.cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for f in (0..r.cols).filter(|&c| !is_pivot[c]) {
        let mut v = BitVec::zeros(r.cols);
        v.set(f, true);
        for (row, &p) in pivots.iter().enumerate() {
            if r.get(row, f) {
                v.set(p, true);
            }
        }
        out.push(v);
    }
    out
}

impl fmt::Debug for F2Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Mat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// An incrementally built subspace of `F₂ⁿ` in echelon form.
///
/// Every inserted vector may carry a tag; reducing a vector against the
/// span reports which tagged generators were used, which is how homology
/// classes get coordinates with respect to a chosen basis of
/// representatives.
#[derive(Clone, Debug)]
pub struct Span {
    dim: usize,
    tags: usize,
    rows: Vec<(BitVec, BitVec)>,
    pivot_row: Vec<Option<usize>>,
}

impl Span {
    pub fn new(dim: usize, tags: usize) -> Self {
        Span { dim, tags, rows: Vec::new(), pivot_row: vec![None; dim] }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    /// Reduce `v`; returns the residual and the tag combination consumed.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        assert_eq!(v.len(), self.dim);
        let mut v = v.clone();
        let mut combo = BitVec::zeros(self.tags);
        let mut pos = 0;
        while let Some(i) = v.first_one_from(pos) {
            if let Some(r) = self.pivot_row[i] {
                let (row, c) = &self.rows[r];
                v.xor_assign(row);
                combo.xor_assign(c);
            }
            pos = i + 1;
        }
        (v, combo)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Insert `v` with an optional tag. Returns false if `v` was already in
    /// the span (nothing is stored in that case).
    pub fn insert(&mut self, v: &BitVec, tag: Option<usize>) -> bool {
        let (res, mut combo) = self.reduce(v);
        let Some(p) = res.first_one() else {
            return false;
        };
        // residual = v + (rows used); the stored row therefore stands for
        // tag(v) + combo
        if let Some(t) = tag {
            combo.flip(t);
        }
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push((res, combo));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_zero() {
        let id = F2Mat::identity(3);
        let d = id.rank_data();
        assert_eq!(d.rank, 3);
        assert!(d.kernel_basis.is_empty());
        let z = F2Mat::zeros(4, 5);
        let d = z.rank_data();
        assert_eq!(d.rank, 0);
        assert_eq!(d.kernel_basis.len(), 5);
    }

    #[test]
    fn rref_is_idempotent_and_kernel_is_killed() {
        let m = F2Mat::from_dense(&[
            vec![1, 1, 0, 1, 0],
            vec![0, 1, 1, 0, 1],
            vec![1, 0, 1, 1, 1],
            vec![0, 0, 0, 1, 1],
        ]);
        let (r, p) = m.rref();
        let (r2, p2) = r.rref();
        assert_eq!(r, r2);
        assert_eq!(p, p2);
        let d = m.rank_data();
        assert_eq!(d.rank, 3);
        for k in &d.kernel_basis {
            assert!(m.mul_vec(k).is_zero());
        }
    }

    #[test]
    fn pivot_rule_picks_lowest_row() {
        // both rows have a one in column 0; row 0 must become the pivot row
        let m = F2Mat::from_dense(&[vec![1, 0, 1], vec![1, 1, 0]]);
        let (r, p) = m.rref();
        assert_eq!(p, vec![0, 1]);
        assert_eq!(r.row(0), BitVec::from_bools(&[true, false, true]));
    }

    #[test]
    fn span_tracks_tags() {
        let n = 4;
        let mut s = Span::new(n, 2);
        let b = BitVec::from_indices(n, [0, 1]);
        let r0 = BitVec::from_indices(n, [1, 2]);
        let r1 = BitVec::from_indices(n, [3]);
        assert!(s.insert(&b, None));
        assert!(s.insert(&r0, Some(0)));
        assert!(s.insert(&r1, Some(1)));
        // r0 + r1 + b
        let target = BitVec::from_indices(n, [0, 2, 3]);
        let (res, combo) = s.reduce(&target);
        assert!(res.is_zero());
        assert_eq!(combo, BitVec::from_indices(2, [0, 1]));
        assert!(!s.insert(&target, None));
    }

    #[test]
    fn transpose_and_product() {
        let a = F2Mat::from_dense(&[vec![1, 0, 1], vec![0, 1, 1]]);
        let b = a.transpose();
        assert_eq!(b.rows(), 3);
        let p = a.mul(&b);
        assert_eq!(p, F2Mat::from_dense(&[vec![0, 1], vec![1, 0]]));
    }
}
