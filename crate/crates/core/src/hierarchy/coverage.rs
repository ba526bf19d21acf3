//! Which levels can see a window of ground columns.

use crate::error::Result;

use super::assembly::{Alignment, Geometry};
use super::schedule::ZoomSchedule;

/// Smallest level `k <= top` such that some level-`k` extended zone
/// contains the half-open column window `[lo, hi)`.
pub fn window_coverage(
    s: &ZoomSchedule,
    top: usize,
    window: (i64, i64),
    alignment: &Alignment,
) -> Result<Option<usize>> {
    let (lo, hi) = window;
    if hi <= lo {
        return Ok(Some(0));
    }
    for k in 0..=top {
        let l = s.side_u64(k)? as i64;
        let a = alignment.0.get(k).copied().unwrap_or(0);
        // The block holding `lo`, and the one before it, are the only
        // candidates whose extended zone starts at or left of `lo`.
        let b = (lo - a).div_euclid(l);
        if [b, b + 1]
            .into_iter()
            .any(|c| a + (c - 1) * l <= lo && hi <= a + (c + 2) * l)
        {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Smallest level at which an occurrence `[lo, lo + len)` can fall inside
/// some materialized tile's own group, scanned with a budget of at least
/// `step`. `cap` bounds the per-level budget.
pub fn catching_level(g: &Geometry, lo: i64, len: usize, step: usize, cap: Option<usize>) -> Option<usize> {
    (0..=g.top).find(|&k| {
        let l = g.group_len[k];
        let budget = cap.map_or(l, |c| c.min(l));
        if len > l || step > budget {
            return false;
        }
        let jmax = (g.zoom[k] - 1).min(3 * g.side[k] - l as u64) as i64;
        let first = g.first_block(k);
        (first..first + g.blocks(k) as i64).any(|b| {
            let z = g.zone_start(k, b);
            let j_lo = (lo + len as i64 - l as i64 - z).max(0);
            let j_hi = (lo - z).min(jmax);
            j_lo <= j_hi
        })
    })
}
