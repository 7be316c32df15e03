//! Overlapping normalised mutual information, LFK variant.
//!
//! Each community is a binary indicator over the vertices. For a community
//! `X_k` the best match in the other cover is the `Y_l` minimising
//! `H(X_k | Y_l)`, considering only candidates with
//! `h(P11) + h(P00) >= h(P10) + h(P01)` (positively correlated indicators). If
//! no candidate qualifies, `H(X_k | Y) = H(X_k)`. Then
//!
//! ```text
//! NMI = 1 - ½ [ mean_k H(X_k|Y)/H(X_k) + mean_l H(Y_l|X)/H(Y_l) ]
//! ```
//!
//! A community spanning every vertex has zero entropy. Its normalised term is
//! 0 when the other cover contains the same community and 1 otherwise.

use alloc::vec;

use super::{same_vertex_set, MetricError};
use crate::cover::Cover;

#[inline]
fn h(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * libm::log2(p)
    }
}

/// Mean normalised conditional entropy of `x`'s communities given `y`.
///
/// `inter[k * y_len + l]` is `|X_k ∩ Y_l|`.
fn normalized_conditional(x: &Cover, y: &Cover, inter: &[u32], transpose: bool, n: f64) -> f64 {
    let (kx, ky) = (x.community_count(), y.community_count());
    let at = |k: usize, l: usize| -> f64 {
        let idx = if transpose { l * kx + k } else { k * ky + l };
        f64::from(inter[idx])
    };
    let mut total = 0.0;
    for k in 0..kx {
        let size_x = x.communities()[k].len() as f64;
        let px = size_x / n;
        let hx = h(px) + h(1.0 - px);
        let mut best: Option<f64> = None;
        let mut perfect = false;
        for l in 0..ky {
            let size_y = y.communities()[l].len() as f64;
            let both = at(k, l);
            if both == size_x && both == size_y {
                perfect = true;
            }
            let p11 = both / n;
            let p10 = (size_x - both) / n;
            let p01 = (size_y - both) / n;
            let p00 = (n - size_x - size_y + both) / n;
            if h(p11) + h(p00) < h(p10) + h(p01) {
                continue;
            }
            let joint = h(p11) + h(p10) + h(p01) + h(p00);
            let hy = h(p11 + p01) + h(p10 + p00);
            let cond = joint - hy;
            best = Some(best.map_or(cond, |b: f64| b.min(cond)));
        }
        total += if hx == 0.0 {
            if perfect {
                0.0
            } else {
                1.0
            }
        } else {
            best.unwrap_or(hx).clamp(0.0, hx) / hx
        };
    }
    total / kx as f64
}

/// Overlapping NMI between two covers of the same vertex set, in `[0, 1]`.
pub fn overlapping_nmi(x: &Cover, y: &Cover) -> Result<f64, MetricError> {
    let n = same_vertex_set(x, y)?;
    let (kx, ky) = (x.community_count(), y.community_count());
    let mut inter = vec![0u32; kx * ky];
    for v in 0..n as u32 {
        for &a in x.memberships(v) {
            let row = a as usize * ky;
            for &b in y.memberships(v) {
                inter[row + b as usize] += 1;
            }
        }
    }
    let nf = n as f64;
    let hxy = normalized_conditional(x, y, &inter, false, nf);
    let hyx = normalized_conditional(y, x, &inter, true, nf);
    Ok((1.0 - 0.5 * (hxy + hyx)).clamp(0.0, 1.0))
}
