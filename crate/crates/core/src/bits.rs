//! Small bit-mask helpers for subsets of ground sets with at most 32 elements.

/// All `k`-subsets of `{0..n}` as masks, in increasing numeric order (Gosper's hack).
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = u32> {
    assert!(n <= 32);
    let limit: u64 = 1u64 << n;
    let mut cur: u64 = if k > n { limit } else { (1u64 << k) - 1 };
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = cur as u32;
        if cur == 0 {
            done = true;
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            cur = (((r ^ cur) >> 2) / c) | r;
            if cur >= limit {
                done = true;
            }
        }
        Some(out)
    })
}

/// All subsets of `mask` as masks, in increasing numeric order.
pub fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut cur: Option<u32> = Some(0);
    std::iter::from_fn(move || {
        let out = cur?;
        cur = if out == mask { None } else { Some(((out | !mask).wrapping_add(1)) & mask) };
        Some(out)
    })
}

pub fn elements(mask: u32) -> impl Iterator<Item = usize> {
    crate::digraph::BitIter(mask as u64)
}

pub fn full(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Packs the bits of `mask` selected by `keep` into the low positions.
pub fn compress(mask: u32, keep: u32) -> u32 {
    let mut out = 0;
    for (i, b) in elements(keep).enumerate() {
        if mask >> b & 1 == 1 {
            out |= 1 << i;
        }
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
