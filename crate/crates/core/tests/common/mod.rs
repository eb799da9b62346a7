//! Brute-force character arithmetic used to cross-check the fusion code.
//!
//! Characters are multisets of contents of semistandard tableaux with entries in `1..=n`.
//! A tensor product is the convolution of characters; it is decomposed by repeatedly
//! stripping the character of the lexicographically largest remaining content.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use qboundary::weights::DominantWeight;

pub type Content = Vec<u32>;

/// All partitions of `size` with at most `max_rows` parts, padded with zeros to `max_rows`.
pub fn partitions(size: u32, max_rows: usize) -> Vec<Vec<u32>> {
    fn go(left: u32, cap: u32, rows: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == rows {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for part in (0..=left.min(cap)).rev() {
            cur.push(part);
            go(left - part, part, rows, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(size, size, max_rows, &mut Vec::new(), &mut out);
    out
}

/// Content multiplicities over all semistandard tableaux of `shape` with entries `<= n`.
pub fn character(shape: &[u32], n: usize) -> HashMap<Content, u64> {
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
        .collect();
    let mut grid: Vec<Vec<u32>> = shape.iter().map(|&len| vec![0; len as usize]).collect();
    let mut out = HashMap::new();
    fill(&cells, 0, &mut grid, n as u32, &mut out);
    out
}

fn fill(
    cells: &[(usize, usize)],
    at: usize,
    grid: &mut Vec<Vec<u32>>,
    n: u32,
    out: &mut HashMap<Content, u64>,
) {
    if at == cells.len() {
        let mut content = vec![0u32; n as usize];
        for row in grid.iter() {
            for &e in row {
                content[e as usize - 1] += 1;
            }
        }
        *out.entry(content).or_insert(0) += 1;
        return;
    }
    let (r, c) = cells[at];
    let lo_row = if c > 0 { grid[r][c - 1] } else { 1 };
    let lo_col = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
    for e in lo_row.max(lo_col)..=n {
        grid[r][c] = e;
        fill(cells, at + 1, grid, n, out);
    }
    grid[r][c] = 0;
}

/// Full partition (length `n`) of a reduced weight.
pub fn full_shape(w: &DominantWeight) -> Vec<u32> {
    let mut rows = w.rows().to_vec();
    rows.resize(w.rank(), 0);
    rows
}

/// Strips full columns and the trailing zero.
pub fn to_weight(shape: &[u32]) -> DominantWeight {
    let n = shape.len();
    let last = shape[n - 1];
    let rows: Vec<u32> = shape[..n - 1].iter().map(|&p| p - last).collect();
    DominantWeight::new(n, &rows).expect("oracle shapes are partitions")
}

/// The decomposition of `lam (x) mu` by character convolution and peeling.
pub fn tensor_by_peeling(lam: &DominantWeight, mu: &DominantWeight) -> BTreeMap<DominantWeight, u64> {
    let n = lam.rank();
    let a = character(&full_shape(lam), n);
    let b = character(&full_shape(mu), n);
    let mut total: BTreeMap<Content, i64> = BTreeMap::new();
    for (ca, ma) in &a {
        for (cb, mb) in &b {
            let c: Content = ca.iter().zip(cb).map(|(x, y)| x + y).collect();
            *total.entry(c).or_insert(0) += (ma * mb) as i64;
        }
    }
    let mut out = BTreeMap::new();
    loop {
        total.retain(|_, m| *m != 0);
        let Some((top, &mult)) = total.iter().next_back() else {
            break;
        };
        assert!(mult > 0, "negative leading multiplicity at {top:?}");
        let top = top.clone();
        for (c, m) in character(&top, n) {
            *total.entry(c).or_insert(0) -= mult * m as i64;
        }
        *out.entry(to_weight(&top)).or_insert(0) += mult as u64;
    }
    out
}

/// Number of tableaux whose content is balanced, i.e. the zero-weight space.
pub fn zero_weight_by_enumeration(w: &DominantWeight) -> u64 {
    let n = w.rank() as u32;
    let shape = full_shape(w);
    let size: u32 = shape.iter().sum();
    if size % n != 0 {
        return 0;
    }
    let balanced = vec![size / n; n as usize];
    character(&shape, n as usize).get(&balanced).copied().unwrap_or(0)
}

/// Reduced weights of rank `n` with `|w| <= radius`, generated independently of the library.
pub fn weights_up_to(n: usize, radius: u32) -> Vec<DominantWeight> {
    (0..=radius)
        .flat_map(|size| partitions(size, n - 1))
        .map(|rows| DominantWeight::new(n, &rows).expect("valid rows"))
        .collect()
}
