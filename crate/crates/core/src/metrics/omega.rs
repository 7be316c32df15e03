//! Omega index: chance-corrected agreement on how many communities each
//! vertex pair shares.
//!
//! Only pairs sharing at least one community are materialised, by expanding
//! every community into its member pairs and counting repeats, so the cost is
//! `O(Σ_c |c|²)` rather than `O(n²)`.

use alloc::vec::Vec;

use super::{same_vertex_set, MetricError};
use crate::cover::Cover;

/// `(pair key, number of shared communities)` sorted by key, for pairs
/// sharing at least one community.
fn shared_counts(cover: &Cover) -> Vec<(u64, u32)> {
    let mut keys: Vec<u64> = Vec::with_capacity(
        cover
            .communities()
            .iter()
            .map(|c| c.len() * c.len().saturating_sub(1) / 2)
            .sum(),
    );
    for members in cover.communities() {
        for (i, &u) in members.iter().enumerate() {
            keys.extend(members[i + 1..].iter().map(|&v| (u64::from(u) << 32) | u64::from(v)));
        }
    }
    keys.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for k in keys {
        match out.last_mut() {
            Some((last, count)) if *last == k => *count += 1,
            _ => out.push((k, 1)),
        }
    }
    out
}

/// `t[j]` = number of pairs sharing exactly `j` communities.
fn level_histogram(counts: &[(u64, u32)], pairs: u128) -> Vec<u128> {
    let top = counts.iter().map(|&(_, c)| c as usize).max().unwrap_or(0);
    let mut t = alloc::vec![0u128; top + 1];
    for &(_, c) in counts {
        t[c as usize] += 1;
    }
    t[0] = pairs - counts.len() as u128;
    t
}

/// Omega index of two covers of the same vertex set, in `(-1, 1]`.
///
/// When the expected agreement is exactly 1 (both covers put every pair at a
/// single, common sharing level) the index is 1 if the covers agree on every
/// pair and [`MetricError::DegenerateExpectedAgreement`] otherwise.
pub fn omega_index(x: &Cover, y: &Cover) -> Result<f64, MetricError> {
    let n = same_vertex_set(x, y)?;
    if n < 2 {
        return Err(MetricError::TooFewVertices(n));
    }
    let pairs = (n as u128) * (n as u128 - 1) / 2;
    let (cx, cy) = (shared_counts(x), shared_counts(y));

    let mut disagree = 0u128;
    let (mut i, mut j) = (0, 0);
    while i < cx.len() || j < cy.len() {
        match (cx.get(i), cy.get(j)) {
            (Some(a), Some(b)) if a.0 == b.0 => {
                if a.1 != b.1 {
                    disagree += 1;
                }
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a.0 < b.0 => {
                disagree += 1;
                i += 1;
            }
            (Some(_), None) => {
                disagree += 1;
                i += 1;
            }
            _ => {
                disagree += 1;
                j += 1;
            }
        }
    }
    let agree = pairs - disagree;

    let (tx, ty) = (level_histogram(&cx, pairs), level_histogram(&cy, pairs));
    // expected agreement scaled by pairs²
    let expected: u128 = tx.iter().zip(&ty).map(|(a, b)| a * b).sum();
    let scale = pairs * pairs;
    if expected == scale {
        return if agree == pairs {
            Ok(1.0)
        } else {
            Err(MetricError::DegenerateExpectedAgreement)
        };
    }
    // (agree/N - E/N²) / (1 - E/N²) = (agree·N - E) / (N² - E)
    let num = (agree * pairs) as i128 - expected as i128;
    let den = scale - expected;
    Ok(num as f64 / den as f64)
}
