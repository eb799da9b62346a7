use std::collections::HashMap;

use super::DominantWeight;
use crate::{Error, Result};

/// Number of semistandard tableaux of shape `shape` whose entries have multiplicities `content`
/// (entry `i + 1` appears `content[i]` times).
pub fn kostka_number(shape: &[u32], content: &[u32]) -> u64 {
    let shape: Vec<u32> = shape.iter().copied().filter(|&r| r > 0).collect();
    if shape.iter().sum::<u32>() != content.iter().sum::<u32>() {
        return 0;
    }
    let mut memo = HashMap::new();
    count(&shape, content, &mut memo)
}

// The boxes holding the largest entry form a horizontal strip on the rim; peel it
// off and recurse on the remaining letters.
fn count(shape: &[u32], content: &[u32], memo: &mut HashMap<(Vec<u32>, usize), u64>) -> u64 {
    let Some((&last, rest)) = content.split_last() else {
        return u64::from(shape.is_empty());
    };
    if shape.len() > content.len() {
        return 0;
    }
    let key = (shape.to_vec(), content.len());
    if let Some(&hit) = memo.get(&key) {
        return hit;
    }
    let mut total = 0;
    let mut inner = shape.to_vec();
    strips(shape, 0, last, &mut inner, &mut |sub| {
        let trimmed: Vec<u32> = sub.iter().copied().filter(|&r| r > 0).collect();
        total += count(&trimmed, rest, memo);
    });
    memo.insert(key, total);
    total
}

/// Calls `visit` for every `inner` with `shape / inner` a horizontal strip of `remaining` boxes.
fn strips(
    shape: &[u32],
    row: usize,
    remaining: u32,
    inner: &mut Vec<u32>,
    visit: &mut dyn FnMut(&[u32]),
) {
    if row == shape.len() {
        if remaining == 0 {
            visit(inner);
        }
        return;
    }
    let floor = shape.get(row + 1).copied().unwrap_or(0);
    let room = shape[row] - floor;
    for take in 0..=room.min(remaining) {
        inner[row] = shape[row] - take;
        strips(shape, row + 1, remaining - take, inner, visit);
    }
    inner[row] = shape[row];
}

/// Multiplicity of the weight `target` in the irreducible `lam`.
///
/// `target` has one entry per coordinate of `C^n`; it is read modulo the all-ones vector, so
/// any representative of the `SU(n)` weight may be passed.
pub fn weight_multiplicity(lam: &DominantWeight, target: &[i64]) -> Result<u64> {
    let n = lam.rank();
    if target.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: target.len(),
        });
    }
    let deficit = i64::from(lam.size()) - target.iter().sum::<i64>();
    if deficit.rem_euclid(n as i64) != 0 {
        return Ok(0);
    }
    let shift = deficit / n as i64;
    let content: Option<Vec<u32>> = target
        .iter()
        .map(|&t| u32::try_from(t + shift).ok())
        .collect();
    Ok(content.map_or(0, |c| kostka_number(lam.rows(), &c)))
}

/// `m_0(lam)`: dimension of the zero-weight space.
pub fn zero_weight_dim(lam: &DominantWeight) -> u64 {
    let n = lam.rank() as u32;
    let size = lam.size();
    if size % n != 0 {
        return 0;
    }
    kostka_number(lam.rows(), &vec![size / n; n as usize])
}
