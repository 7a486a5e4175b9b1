//! Noncrossing set partitions.

use crate::error::{Error, Result};

/// A set partition of `{0, …, m-1}`; blocks are sorted and listed by their
/// smallest element.
pub type Partition = Vec<Vec<usize>>;

pub const MAX_PARTITION_ORDER: usize = 16;

/// Catalan number `C_m = binom(2m, m) / (m + 1)`.
pub fn catalan(m: usize) -> u64 {
    (0..m).fold(1u64, |c, k| c * 2 * (2 * k as u64 + 1) / (k as u64 + 2))
}

/// Whether two distinct blocks cross: `a < b < c < d` with `a, c` in one
/// block and `b, d` in the other.
pub fn is_noncrossing(p: &[Vec<usize>]) -> bool {
    let m = p.iter().map(Vec::len).sum::<usize>();
    let mut label = vec![usize::MAX; m];
    for (k, block) in p.iter().enumerate() {
        for &e in block {
            label[e] = k;
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            if label[b] == label[a] {
                continue;
            }
            for c in b + 1..m {
                if label[c] != label[a] {
                    continue;
                }
                for d in c + 1..m {
                    if label[d] == label[b] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// All noncrossing partitions of `{0, …, m-1}`.
///
/// Generated directly: the block containing the first point is chosen, and
/// each gap it leaves is partitioned recursively.
pub fn nc_partitions(m: usize) -> Result<Vec<Partition>> {
    if m == 0 || m > MAX_PARTITION_ORDER {
        return Err(Error::PartitionOrder(m));
    }
    Ok(nc_on(&(0..m).collect::<Vec<_>>()))
}

fn nc_on(points: &[usize]) -> Vec<Partition> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let rest = points.len() - 1;
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << rest) {
        let mut block = vec![points[0]];
        let mut gaps: Vec<&[usize]> = Vec::new();
        let mut gap_start = 1;
        for k in 0..rest {
            if mask & (1 << k) != 0 {
                let pos = k + 1;
                gaps.push(&points[gap_start..pos]);
                block.push(points[pos]);
                gap_start = pos + 1;
            }
        }
        gaps.push(&points[gap_start..]);
        let mut partials: Vec<Partition> = vec![vec![block]];
        for gap in gaps {
            let sub = nc_on(gap);
            partials = partials
                .into_iter()
                .flat_map(|p| {
                    sub.iter().map(move |s| {
                        let mut q = p.clone();
                        q.extend(s.iter().cloned());
                        q
                    })
                })
                .collect();
        }
        out.extend(partials);
    }
    for p in &mut out {
        p.sort_by_key(|b| b[0]);
    }
    out
}
