use std::collections::BTreeMap;

use super::f2::F2Mat;
use super::ring::RingElem;
use super::RingError;

/// A sparse matrix over `F₂[u]/uᵏ`. Absent entries are zero and stored
/// entries are never zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    k: u32,
    rows: usize,
    cols: usize,
    /// Column-major: `cols[c]` maps row → entry.
    data: Vec<BTreeMap<usize, RingElem>>,
}

impl SparseMat {
    pub fn zeros(k: u32, rows: usize, cols: usize) -> Self {
        SparseMat { k, rows, cols, data: vec![BTreeMap::new(); cols] }
    }

    pub fn identity(k: u32, n: usize) -> Self {
        let mut m = Self::zeros(k, n, n);
        for i in 0..n {
            m.add_entry(i, i, RingElem::one(k));
        }
        m
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> RingElem {
        self.data[c].get(&r).copied().unwrap_or_else(|| RingElem::zero(self.k))
    }

    /// Add `e` to the entry at `(r, c)`, dropping it if the sum is zero.
    pub fn add_entry(&mut self, r: usize, c: usize, e: RingElem) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        assert_eq!(e.order(), self.k);
        if e.is_zero() {
            return;
        }
        let col = &mut self.data[c];
        match col.get_mut(&r) {
            Some(x) => {
                *x += e;
                if x.is_zero() {
                    col.remove(&r);
                }
            }
            None => {
                col.insert(r, e);
            }
        }
    }

    pub fn set(&mut self, r: usize, c: usize, e: RingElem) {
        assert!(r < self.rows && c < self.cols);
        if e.is_zero() {
            self.data[c].remove(&r);
        } else {
            self.data[c].insert(r, e);
        }
    }

    pub fn column(&self, c: usize) -> &BTreeMap<usize, RingElem> {
        &self.data[c]
    }

    /// All nonzero entries as `(row, col, value)`, column-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, RingElem)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(&r, &e)| (r, c, e)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn mul(&self, rhs: &SparseMat) -> Result<SparseMat, RingError> {
        if self.cols != rhs.rows || self.k != rhs.k {
            return Err(RingError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = SparseMat::zeros(self.k, self.rows, rhs.cols);
        for (c, col) in rhs.data.iter().enumerate() {
            for (&mid, &b) in col {
                for (&r, &a) in &self.data[mid] {
                    out.add_entry(r, c, a * b);
                }
            }
        }
        Ok(out)
    }

    /// Reduce every entry modulo `uᵐ`.
    pub fn truncate(&self, m: u32) -> SparseMat {
        let mut out = SparseMat::zeros(m, self.rows, self.cols);
        for (r, c, e) in self.entries() {
            out.add_entry(r, c, e.truncate(m));
        }
        out
    }
}

/// Expand a matrix over `F₂[u]/uᵏ` to the `F₂`-matrix of the same linear
/// map on the basis `{uᵖ·eᵢ}`. Index `i·k + p` stands for `uᵖ·eᵢ`, so every
/// ring entry becomes the lower-triangular Toeplitz block of multiplication
/// by that element.
pub fn flatten(m: &SparseMat) -> F2Mat {
    let k = m.order() as usize;
    let mut out = F2Mat::zeros(m.rows() * k, m.cols() * k);
    for (r, c, e) in m.entries() {
        for t in e.terms() {
            let t = t as usize;
            for p in 0..k - t {
                out.set(r * k + p + t, c * k + p, true);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_mat(rng: &mut ChaCha8Rng, k: u32, r: usize, c: usize) -> SparseMat {
        let mut m = SparseMat::zeros(k, r, c);
        for i in 0..r {
            for j in 0..c {
                if rng.gen_bool(0.5) {
                    m.add_entry(i, j, RingElem::new(k, rng.gen()));
                }
            }
        }
        m
    }

    #[test]
    fn flatten_of_u_is_the_shift() {
        let mut m = SparseMat::zeros(2, 1, 1);
        m.add_entry(0, 0, RingElem::u_pow(2, 1));
        let f = flatten(&m);
        assert_eq!(f, F2Mat::from_dense(&[vec![0, 0], vec![1, 0]]));
    }

    #[test]
    fn flatten_of_identity() {
        for k in 1..4 {
            assert_eq!(flatten(&SparseMat::identity(k, 3)), F2Mat::identity(3 * k as usize));
        }
    }

    #[test]
    fn flatten_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..120 {
            let a = random_mat(&mut rng, 3, 3, 4);
            let b = random_mat(&mut rng, 3, 4, 2);
            let ab = a.mul(&b).unwrap();
            assert_eq!(flatten(&ab), flatten(&a).mul(&flatten(&b)));
        }
    }

    #[test]
    fn product_dimension_mismatch() {
        let a = SparseMat::zeros(2, 2, 3);
        let b = SparseMat::zeros(2, 2, 3);
        assert!(matches!(a.mul(&b), Err(RingError::DimensionMismatch { .. })));
    }

    #[test]
    fn cancelling_entries_are_dropped() {
        let mut m = SparseMat::zeros(2, 2, 2);
        m.add_entry(0, 1, RingElem::new(2, 0b11));
        m.add_entry(0, 1, RingElem::new(2, 0b11));
        assert!(m.is_zero());
    }
}
