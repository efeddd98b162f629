//! Jones polynomial two ways: from the Kauffman bracket, and as the graded
//! Euler characteristic of the cube of resolutions.

use super::resolve::{partner, resolve_unchecked};
use super::{occurrences, Diagram, LaurentPoly};

/// Circle count of a state by a plain union of paired endpoints.
fn loops(crossings: &[[u32; 4]], state: u64) -> usize {
    if crossings.is_empty() {
        return 1;
    }
    let m = 2 * crossings.len();
    let mut parent: Vec<usize> = (0..=m).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for (x, q) in crossings.iter().enumerate() {
        let one = state >> x & 1 == 1;
        for p in [0, 2] {
            let a = find(&mut parent, q[p] as usize);
            let b = find(&mut parent, q[partner(p, one)] as usize);
            parent[a] = b;
        }
    }
    (1..=m).filter(|&i| find(&mut parent, i) == i).count()
}

/// `⟨D⟩` in the variable `A`, normalized so the unknot is 1.
pub fn kauffman_bracket(d: &Diagram) -> LaurentPoly {
    let n = d.crossing_count();
    let delta = LaurentPoly::from_terms([(2, -1), (-2, -1)]);
    let mut out = LaurentPoly::zero();
    for s in 0..1u64 << n {
        let b = s.count_ones() as i64;
        let a = n as i64 - b;
        let c = loops(d.crossings(), s);
        out = &out + &delta.pow(c as u32 - 1).shift(a - b);
    }
    out
}

/// Normalized Jones polynomial in `q` (unknot ↦ 1), with `A² = −q⁻¹`.
pub fn normalized_jones(d: &Diagram) -> LaurentPoly {
    let w = d.writhe();
    let f = &kauffman_bracket(d) * &LaurentPoly::monomial(if w % 2 == 0 { 1 } else { -1 }, -3 * w);
    let mut out = LaurentPoly::zero();
    for (e, c) in f.terms() {
        assert!(e % 2 == 0, "odd power of A in the normalized bracket");
        let h = e / 2;
        out.add_term(if h % 2 == 0 { c } else { -c }, -h);
    }
    out
}

/// Unnormalized Jones polynomial: the unknot gives `q + q⁻¹`.
pub fn kauffman_jones(d: &Diagram) -> LaurentPoly {
    &normalized_jones(d) * &LaurentPoly::from_terms([(1, 1), (-1, 1)])
}

/// `(−1)^{n₋} q^{n₊ − 2n₋} Σ_s (−q)^{|s|} (q + q⁻¹)^{#circles(s)}`.
pub fn khovanov_state_sum(d: &Diagram) -> LaurentPoly {
    let n = d.crossing_count();
    let occ = occurrences(d.crossings());
    let v = LaurentPoly::from_terms([(1, 1), (-1, 1)]);
    let mut out = LaurentPoly::zero();
    for s in 0..1u64 << n {
        let r = resolve_unchecked(d.crossings(), &occ, s).circle_count();
        let k = s.count_ones() as i64;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out = &out + &(&v.pow(r as u32) * &LaurentPoly::monomial(sign, k));
    }
    let nm = d.n_minus() as i64;
    let shift = d.n_plus() as i64 - 2 * nm;
    &out * &LaurentPoly::monomial(if nm % 2 == 0 { 1 } else { -1 }, shift)
}

/// `|V(t = −1)|`, i.e. the normalized Jones polynomial at `q = i`.
pub fn determinant(d: &Diagram) -> u64 {
    let (mut re, mut im) = (0i64, 0i64);
    for (e, c) in normalized_jones(d).terms() {
        match e.rem_euclid(4) {
            0 => re += c,
            1 => im += c,
            2 => re -= c,
            _ => im -= c,
        }
    }
    let sq = (re * re + im * im) as u64;
    let r = (sq as f64).sqrt().round() as u64;
    assert_eq!(r * r, sq, "determinant is not an integer");
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkdiag::{from_braid, parse_pd};

    fn p(t: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(t.iter().copied())
    }

    #[test]
    fn right_trefoil() {
        let d = from_braid(2, &[1, 1, 1]).unwrap();
        let want = p(&[(1, 1), (3, 1), (5, 1), (9, -1)]);
        assert_eq!(kauffman_jones(&d), want);
        assert_eq!(khovanov_state_sum(&d), want);
        assert_eq!(determinant(&d), 3);
    }

    #[test]
    fn left_trefoil_is_the_mirror() {
        let d = parse_pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]").unwrap();
        let want = p(&[(-1, 1), (-3, 1), (-5, 1), (-9, -1)]);
        assert_eq!(kauffman_jones(&d), want);
        assert_eq!(khovanov_state_sum(&d), want);
    }

    #[test]
    fn positive_hopf() {
        let d = from_braid(2, &[1, 1]).unwrap();
        assert_eq!(kauffman_jones(&d), p(&[(0, 1), (2, 1), (4, 1), (6, 1)]));
        assert_eq!(determinant(&d), 2);
    }

    #[test]
    fn unknots() {
        let v = p(&[(1, 1), (-1, 1)]);
        for s in ["U", "PD[X(2,1,1,2)]", "PD[X(1,1,2,2)]"] {
            let d = parse_pd(s).unwrap();
            assert_eq!(kauffman_jones(&d), v, "{s}");
            assert_eq!(khovanov_state_sum(&d), v, "{s}");
        }
        let u2 = from_braid(2, &[1, -1]).unwrap();
        assert_eq!(kauffman_jones(&u2), &v * &v);
        assert_eq!(determinant(&u2), 0);
    }
}
