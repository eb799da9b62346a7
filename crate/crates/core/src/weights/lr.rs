use std::collections::BTreeMap;

use super::{reduce, DominantWeight, FusionResult};
use crate::Result;

/// Decomposes `lam (x) mu` into irreducibles of `SU(n)`.
///
/// Enumerates Littlewood–Richardson tableaux of shape `nu / lam` and content `mu`: skew
/// semistandard fillings whose reverse row reading word is a lattice word. Shapes with more
/// than `n` rows vanish; shapes with exactly `n` rows are reduced.
pub fn lr_coeffs(lam: &DominantWeight, mu: &DominantWeight) -> Result<FusionResult> {
    lam.check_rank(mu)?;
    let n = lam.rank();
    let mut entries: BTreeMap<DominantWeight, u64> = BTreeMap::new();
    for (nu, mult) in lr_partitions(&lam.parts(), &mu.parts(), n) {
        let reduced = reduce(&nu, n)?;
        *entries.entry(reduced).or_insert(0) += mult;
    }
    Ok(FusionResult::from_entries(n, entries))
}

/// `c^nu_{lam, mu}` for all partitions `nu` with at most `max_rows` rows.
pub(crate) fn lr_partitions(lam: &[u32], mu: &[u32], max_rows: usize) -> BTreeMap<Vec<u32>, u64> {
    let rows = max_rows.min(lam.len() + mu.len());
    let mut outer = lam.to_vec();
    outer.resize(rows.max(lam.len()), 0);
    let mut search = Search {
        lam: outer,
        mu,
        rows,
        counts: vec![vec![0; mu.len()]; rows],
        used: vec![0; mu.len()],
        found: BTreeMap::new(),
    };
    if mu.is_empty() {
        search.found.insert(lam.to_vec(), 1);
    } else if rows > 0 {
        search.fill(0, 0);
    }
    search.found
}

struct Search<'a> {
    lam: Vec<u32>,
    mu: &'a [u32],
    rows: usize,
    /// `counts[r][i]`: how many copies of letter `i` sit in row `r`.
    counts: Vec<Vec<u32>>,
    /// Letters placed so far, over all rows visited.
    used: Vec<u32>,
    found: BTreeMap<Vec<u32>, u64>,
}

impl Search<'_> {
    fn row_length(&self, r: usize) -> u32 {
        self.lam[r] + self.counts[r].iter().sum::<u32>()
    }

    fn record(&mut self, through_row: usize) {
        let mut nu: Vec<u32> = (0..=through_row).map(|r| self.row_length(r)).collect();
        nu.extend_from_slice(&self.lam[through_row + 1..]);
        while nu.last() == Some(&0) {
            nu.pop();
        }
        *self.found.entry(nu).or_insert(0) += 1;
    }

    fn complete(&self) -> bool {
        self.used.iter().zip(self.mu).all(|(u, m)| u == m)
    }

    fn fill(&mut self, r: usize, i: usize) {
        let letters = (r + 1).min(self.mu.len());
        if i == letters {
            let done = self.complete();
            // An empty row forces every later row to be empty as well.
            if done || r + 1 == self.rows || self.row_length(r) == 0 {
                if done {
                    self.record(r);
                }
                return;
            }
            self.fill(r + 1, 0);
            return;
        }

        let mut bound = self.mu[i] - self.used[i];
        if i > 0 {
            // Lattice condition: the reading word visits row r right to left, so the
            // copies of letter i here are read before the copies of i - 1 in this row.
            let prev_before_row = self.used[i - 1] - self.counts[r][i - 1];
            bound = bound.min(prev_before_row.saturating_sub(self.used[i]));
        }
        if r > 0 {
            // Column strictness against row r - 1.
            let placed_here: u32 = self.counts[r][..i].iter().sum();
            let above: u32 = self.lam[r - 1] + self.counts[r - 1][..i].iter().sum::<u32>();
            let here = self.lam[r] + placed_here;
            bound = bound.min(above.saturating_sub(here));
        }

        for x in 0..=bound {
            self.counts[r][i] = x;
            self.used[i] += x;
            self.fill(r, i + 1);
            self.used[i] -= x;
        }
        self.counts[r][i] = 0;
    }
}
