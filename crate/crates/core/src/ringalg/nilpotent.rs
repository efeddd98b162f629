use std::collections::BTreeMap;

use super::f2::F2Mat;
use super::RingError;

/// Jordan type of a nilpotent operator `N` with `Nᵏ = 0`: the number `mⱼ`
/// of cyclic summands `F₂[u]/uʲ` for `j = 1..=k`, where `u` acts as `N`.
///
/// Uses `mⱼ = rank Nʲ⁻¹ − 2·rank Nʲ + rank Nʲ⁺¹`.
pub fn nilpotent_block_multiplicities(
    n: &F2Mat,
    k: u32,
) -> Result<BTreeMap<u32, usize>, RingError> {
    assert_eq!(n.rows(), n.cols(), "operator must be square");
    let d = n.rows();
    let mut ranks = vec![d];
    let mut pow = F2Mat::identity(d);
    for _ in 0..=k {
        pow = pow.mul(n);
        ranks.push(pow.rank());
    }
    if ranks[k as usize] != 0 {
        return Err(RingError::NotNilpotentAtOrderK { k });
    }
    let mut out = BTreeMap::new();
    for j in 1..=k as usize {
        let m = ranks[j - 1] + ranks[j + 1] - 2 * ranks[j];
        out.insert(j as u32, m);
    }
    debug_assert_eq!(out.iter().map(|(&j, &m)| j as usize * m).sum::<usize>(), d);
    Ok(out)
}
