//! The order-theoretic oracle: Bruhat-Chevalley comparison by entrywise
//! rank-matrix domination, independent of the rise-based cover generator.
//!
//! Entry `(i,j)` of the rank matrix counts the non-zero positions of the
//! permutation matrix inside the top-left `i x j` corner, and `x <= y` holds
//! iff the matrix of `x` dominates the matrix of `y` entrywise. This
//! orientation makes `j_2n` the minimum and `w_0` the maximum of `F_2n`.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::involution::{enumerate_fpf, FpfInvolution};
use crate::poset::GradedPoset;
use crate::rises::rise_covers;
use crate::Caps;

/// Corner-rank matrix of a permutation: `entry(i,j) = |{k <= i : x(k) <= j}|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankMatrix {
    size: usize,
    entries: Vec<u16>,
}

impl RankMatrix {
    pub fn of(x: &FpfInvolution) -> Self {
        let m = x.size();
        let mut entries = vec![0u16; m * m];
        for i in 0..m {
            let v = x.word()[i] as usize;
            for j in 0..m {
                let above = if i > 0 { entries[(i - 1) * m + j] } else { 0 };
                entries[i * m + j] = above + u16::from(v <= j + 1);
            }
        }
        RankMatrix { size: m, entries }
    }

    /// 1-based accessor.
    pub fn entry(&self, i: usize, j: usize) -> u16 {
        self.entries[(i - 1) * self.size + (j - 1)]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entrywise `self >= other`.
    pub fn dominates(&self, other: &RankMatrix) -> bool {
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| a >= b)
    }
}

/// The rank matrix of `x`.
pub fn rank_matrix(x: &FpfInvolution) -> RankMatrix {
    RankMatrix::of(x)
}

/// `x <= y` in the Bruhat-Chevalley order restricted to `F_2n`.
pub fn bruhat_leq(x: &FpfInvolution, y: &FpfInvolution) -> Result<bool> {
    check_sizes(x, y)?;
    Ok(RankMatrix::of(x).dominates(&RankMatrix::of(y)))
}

/// Three-way comparison: `None` means incomparable.
pub fn compare(x: &FpfInvolution, y: &FpfInvolution) -> Result<Option<Ordering>> {
    check_sizes(x, y)?;
    if x == y {
        return Ok(Some(Ordering::Equal));
    }
    let (rx, ry) = (RankMatrix::of(x), RankMatrix::of(y));
    if rx.dominates(&ry) {
        Ok(Some(Ordering::Less))
    } else if ry.dominates(&rx) {
        Ok(Some(Ordering::Greater))
    } else {
        Ok(None)
    }
}

fn check_sizes(x: &FpfInvolution, y: &FpfInvolution) -> Result<()> {
    if x.size() != y.size() {
        return Err(Error::SizeMismatch {
            left: x.size(),
            right: y.size(),
        });
    }
    Ok(())
}

/// Covers of `x` by brute force: elements one rank up that dominate `x`.
///
/// Valid because `F_2n` is graded with saturated chains inside `F_2n`, so
/// covers are exactly the comparable pairs one rank apart.
pub fn brute_covers(x: &FpfInvolution, caps: &Caps) -> Result<Vec<FpfInvolution>> {
    let n = x.half_size();
    let target = x.length() + 1;
    let rx = RankMatrix::of(x);
    Ok(enumerate_fpf(n, caps.enumeration_cap)?
        .into_iter()
        .filter(|y| y.length() == target && rx.dominates(&RankMatrix::of(y)))
        .collect())
}

/// The full poset `F_2n` built from the rank-matrix oracle alone (edges carry
/// no labels). Rank-stratified: only pairs one rank apart are compared.
pub fn build_f_poset_brute(n: usize, caps: &Caps) -> Result<GradedPoset> {
    let elements = enumerate_fpf(n, caps.enumeration_cap)?;
    let ranks: Vec<u32> = elements.iter().map(|x| x.length() as u32).collect();
    let matrices: Vec<RankMatrix> = elements.par_iter().map(RankMatrix::of).collect();

    let max_rank = *ranks.iter().max().expect("nonempty") as usize;
    let mut by_rank: Vec<Vec<usize>> = vec![Vec::new(); max_rank + 1];
    for (i, &r) in ranks.iter().enumerate() {
        by_rank[r as usize].push(i);
    }

    let mut edges = Vec::new();
    for r in 0..max_rank {
        let (lo, hi) = (&by_rank[r], &by_rank[r + 1]);
        let matrices = &matrices;
        let mut batch: Vec<(usize, usize, Option<_>)> = lo
            .par_iter()
            .flat_map_iter(move |&a| {
                hi.iter()
                    .filter(move |&&b| matrices[a].dominates(&matrices[b]))
                    .map(move |&b| (a, b, None))
            })
            .collect();
        edges.append(&mut batch);
    }
    GradedPoset::new(elements, ranks, edges)
}

/// The interval `[x, y]` as a labeled graded poset, rank normalized so that
/// `rank(x) = 0`. Edge labels come from the rise that realizes each cover.
pub fn interval(x: &FpfInvolution, y: &FpfInvolution, caps: &Caps) -> Result<GradedPoset> {
    check_sizes(x, y)?;
    if !bruhat_leq(x, y)? {
        return Err(Error::NotComparable {
            lower: x.to_string(),
            upper: y.to_string(),
        });
    }
    let n = x.half_size();
    let (rx, ry) = (RankMatrix::of(x), RankMatrix::of(y));
    let members: Vec<FpfInvolution> = enumerate_fpf(n, caps.enumeration_cap)?
        .into_iter()
        .filter(|z| {
            let rz = RankMatrix::of(z);
            rx.dominates(&rz) && rz.dominates(&ry)
        })
        .collect();
    let ranks: Vec<u32> = members.iter().map(|z| z.length() as u32).collect();

    let mut edges = Vec::new();
    for (i, z) in members.iter().enumerate() {
        for (w, label) in rise_covers(z) {
            if let Ok(j) = members.binary_search(&w) {
                edges.push((i, j, Some(label)));
            }
        }
    }
    GradedPoset::new(members, ranks, edges)
}
