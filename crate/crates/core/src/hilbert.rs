//! Hilbert bases of `{z ∈ ℕ^k : A z = 0}` by completion.
//!
//! Level-wise completion in the style of Contejean and Devie: start from the
//! unit vectors and grow each non-solution `p` to `p + e_j` only when the
//! defect `A p` points against column `j` (`⟨A p, A e_j⟩ < 0`). Candidates
//! that dominate an already found solution are dropped. Every minimal
//! solution is reached along such a path, and the search terminates by
//! Dickson's lemma, so the result is the complete Hilbert basis.

use std::collections::HashSet;

use crate::{Error, Result};

/// Integer matrix stored by columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    rows: usize,
    columns: Vec<Vec<i64>>,
}

impl LinearSystem {
    pub fn new(rows: usize, columns: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(c) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::InvalidParameter(format!(
                "column of height {} in a system with {rows} rows",
                c.len()
            )));
        }
        Ok(LinearSystem { rows, columns })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn variables(&self) -> usize {
        self.columns.len()
    }

    pub fn evaluate(&self, z: &[u32]) -> Vec<i64> {
        let mut out = vec![0i64; self.rows];
        for (col, &k) in self.columns.iter().zip(z) {
            if k > 0 {
                for (o, &a) in out.iter_mut().zip(col) {
                    *o += a * k as i64;
                }
            }
        }
        out
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct CompletionStats {
    pub candidates: usize,
    pub levels: usize,
}

/// Minimal nonzero solutions of `A z = 0`, sorted by 1-norm then
/// lexicographically.
///
/// `cap` bounds the total number of candidate vectors; exceeding it returns
/// [`Error::ResourceCap`] and no partial answer.
pub fn hilbert_basis(system: &LinearSystem, cap: usize) -> Result<Vec<Vec<u32>>> {
    hilbert_basis_with_stats(system, cap).map(|(basis, _)| basis)
}

pub fn hilbert_basis_with_stats(
    system: &LinearSystem,
    cap: usize,
) -> Result<(Vec<Vec<u32>>, CompletionStats)> {
    let k = system.variables();
    // gram[i][j] = ⟨A e_i, A e_j⟩
    let gram: Vec<Vec<i64>> = system
        .columns
        .iter()
        .map(|ci| {
            system
                .columns
                .iter()
                .map(|cj| ci.iter().zip(cj).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();

    let mut basis: Vec<Vec<u32>> = Vec::new();
    // by_var[j]: basis elements with a nonzero entry at j
    let mut by_var: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut stats = CompletionStats::default();

    // frontier entries carry the candidate and ⟨A p, A e_j⟩ for every j
    let mut frontier: Vec<(Vec<u32>, Vec<i64>)> = Vec::with_capacity(k);
    for j in 0..k {
        let mut v = vec![0u32; k];
        v[j] = 1;
        frontier.push((v, gram[j].clone()));
    }
    stats.candidates = k;
    if stats.candidates > cap {
        return Err(Error::ResourceCap { cap });
    }

    while !frontier.is_empty() {
        stats.levels += 1;
        let mut open = Vec::with_capacity(frontier.len());
        for (v, scores) in frontier {
            // A p = 0 iff ⟨A p, A p⟩ = Σ_j p_j ⟨A p, A e_j⟩ = 0
            let norm: i64 = v.iter().zip(&scores).map(|(&p, &s)| p as i64 * s).sum();
            if norm == 0 {
                let id = basis.len();
                for (j, &x) in v.iter().enumerate() {
                    if x > 0 {
                        by_var[j].push(id);
                    }
                }
                basis.push(v);
            } else {
                open.push((v, scores));
            }
        }

        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut next = Vec::new();
        for (v, scores) in &open {
            for j in 0..k {
                if scores[j] >= 0 {
                    continue;
                }
                let mut w = v.clone();
                w[j] += 1;
                // w dominates a solution only through coordinate j
                let dominated = by_var[j].iter().any(|&b| {
                    let sol = &basis[b];
                    sol[j] == w[j] && sol.iter().zip(&w).all(|(s, x)| s <= x)
                });
                if dominated || seen.contains(&w) {
                    continue;
                }
                let ws: Vec<i64> = scores.iter().zip(&gram[j]).map(|(s, g)| s + g).collect();
                seen.insert(w.clone());
                next.push((w, ws));
                stats.candidates += 1;
                if stats.candidates > cap {
                    return Err(Error::ResourceCap { cap });
                }
            }
        }
        frontier = next;
    }
    basis.sort_by(|a, b| {
        let na: u32 = a.iter().sum();
        let nb: u32 = b.iter().sum();
        na.cmp(&nb).then_with(|| a.cmp(b))
    });
    Ok((basis, stats))
}
