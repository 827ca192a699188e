//! The Deodhar-Srinivasan poset on ordered bracket expressions, and its exact
//! comparison against `F_2n`.
//!
//! A type 1 move interchanges `b_i` with `a_j` (requires `b_i < a_j`); a type
//! 2 move interchanges `b_i` with `b_j` (requires `a_i < a_j < b_i < b_j`).
//! The relations live on ordered expressions: an interchange whose result
//! breaks the ordering `a_1 < ... < a_n` in place does not produce an element
//! of the poset, and this is exactly why the edge from `[1,2][3,6][4,5]` up
//! to `(1,4)(2,5)(3,6)` exists in `F_6` but not here. Covers additionally
//! require the length to grow by exactly one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::involution::{enumerate_fpf, FpfInvolution};
use crate::poset::GradedPoset;
use crate::rises::build_f_poset;
use crate::Caps;

/// Which interchange produced a relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterchangeKind {
    /// `b_i <-> a_j`: side-by-side arcs become crossing arcs.
    Type1,
    /// `b_i <-> b_j`: crossing arcs become nested arcs.
    Type2,
}

/// Every valid type 1 / type 2 interchange on the canonical brackets of `x`,
/// with its kind and length jump. Covers are the jump-1 entries; the others
/// are relations `x < y` that skip ranks.
pub fn ds_interchanges(x: &FpfInvolution) -> Vec<(FpfInvolution, InterchangeKind, u64)> {
    let pairs = x.to_brackets().pairs().to_vec();
    let n = pairs.len();
    let base = x.ds_length();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (ai, bi) = pairs[i];
            let (aj, bj) = pairs[j];
            if bi < aj {
                // type 1: [a_i,b_i]..[a_j,b_j] -> [a_i,a_j]..[b_i,b_j]
                let mut next = pairs.clone();
                next[i] = (ai, aj);
                next[j] = (bi, bj);
                push_if_ordered(&next, InterchangeKind::Type1, base, &mut out);
            }
            if aj < bi && bi < bj {
                // type 2: [a_i,b_i]..[a_j,b_j] -> [a_i,b_j]..[a_j,b_i]
                let mut next = pairs.clone();
                next[i] = (ai, bj);
                next[j] = (aj, bi);
                push_if_ordered(&next, InterchangeKind::Type2, base, &mut out);
            }
        }
    }
    out
}

/// Keeps an interchange only when the expression stays canonical in place.
fn push_if_ordered(
    pairs: &[(u32, u32)],
    kind: InterchangeKind,
    base_length: u64,
    out: &mut Vec<(FpfInvolution, InterchangeKind, u64)>,
) {
    let ordered = pairs.windows(2).all(|w| w[0].0 < w[1].0) && pairs.iter().all(|&(a, b)| a < b);
    if !ordered {
        return;
    }
    let y = FpfInvolution::from_pairs(pairs).expect("interchange preserves the matching");
    let jump = y.ds_length() - base_length;
    out.push((y, kind, jump));
}

/// Upper covers in the Deodhar-Srinivasan order, with the move kind.
pub fn ds_upper_covers_typed(x: &FpfInvolution) -> Vec<(FpfInvolution, InterchangeKind)> {
    ds_interchanges(x)
        .into_iter()
        .filter(|&(_, _, jump)| jump == 1)
        .map(|(y, kind, _)| (y, kind))
        .collect()
}

/// Upper covers in the Deodhar-Srinivasan order.
pub fn ds_upper_covers(x: &FpfInvolution) -> Vec<FpfInvolution> {
    ds_upper_covers_typed(x).into_iter().map(|(y, _)| y).collect()
}

/// The Deodhar-Srinivasan poset on the ground set of `F_2n`, ranked by the
/// Deodhar-Srinivasan length. Edges carry no labels.
pub fn build_ds_poset(n: usize, caps: &Caps) -> Result<GradedPoset> {
    let elements = enumerate_fpf(n, caps.enumeration_cap)?;
    let mut edges = Vec::new();
    for (i, x) in elements.iter().enumerate() {
        for y in ds_upper_covers(x) {
            let j = elements
                .binary_search(&y)
                .expect("interchange stays inside the ground set");
            edges.push((i, j, None));
        }
    }
    let ranks: Vec<u32> = elements.iter().map(|x| x.ds_length() as u32).collect();
    GradedPoset::new(elements, ranks, edges)
}

/// Structural diff of the Deodhar-Srinivasan poset against `F_2n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub n: usize,
    pub elements_equal: bool,
    pub rank_function_equal: bool,
    pub ds_edges: u64,
    pub f_edges: u64,
    /// Bruhat covers missing from the Deodhar-Srinivasan poset.
    pub edges_in_f_not_ds: Vec<(String, String)>,
    /// Must be empty: a nonempty list falsifies the subposet theorem.
    pub edges_in_ds_not_f: Vec<(String, String)>,
}

/// Builds both posets and diffs them. Errors with a subposet violation if a
/// Deodhar-Srinivasan cover is not a Bruhat cover; that error never fires
/// when the subposet theorem holds.
pub fn compare_posets(n: usize, caps: &Caps) -> Result<ComparisonReport> {
    let f = build_f_poset(n, caps)?;
    let ds = build_ds_poset(n, caps)?;

    let elements_equal = f.elements() == ds.elements();
    let rank_function_equal = elements_equal
        && (0..f.len()).all(|i| f.rank_of(i) == ds.rank_of(i));

    let edge_list = |p: &GradedPoset| -> Vec<(usize, usize)> {
        let mut v = Vec::with_capacity(p.edge_count());
        for a in 0..p.len() {
            for e in p.up_edges(a) {
                v.push((a, e.to));
            }
        }
        v.sort_unstable();
        v
    };
    let fe = edge_list(&f);
    let de = edge_list(&ds);

    let name = |i: usize| f.element(i).to_string();
    let edges_in_f_not_ds: Vec<(String, String)> = fe
        .iter()
        .filter(|e| de.binary_search(e).is_err())
        .map(|&(a, b)| (name(a), name(b)))
        .collect();
    let edges_in_ds_not_f: Vec<(String, String)> = de
        .iter()
        .filter(|e| fe.binary_search(e).is_err())
        .map(|&(a, b)| (name(a), name(b)))
        .collect();

    if let Some((from, to)) = edges_in_ds_not_f.first() {
        return Err(Error::SubposetViolation {
            from: from.clone(),
            to: to.clone(),
        });
    }

    Ok(ComparisonReport {
        n,
        elements_equal,
        rank_function_equal,
        ds_edges: de.len() as u64,
        f_edges: fe.len() as u64,
        edges_in_f_not_ds,
        edges_in_ds_not_f,
    })
}
