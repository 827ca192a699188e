//! Rises, covering transformations and edge labels.
//!
//! A rise of `x` is a pair `i1 < i2` with `x(i1) < x(i2)`; it is free when no
//! intermediate position maps between `x(i1)` and `x(i2)`. Inside `F_2n` only
//! two kinds of free rises generate covering relations: non-crossing ee-rises
//! and ed-rises. Applying the corresponding covering transformation and
//! labeling the new edge with the rise pair itself gives the edge labeling
//! that the EL machinery certifies.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::involution::{enumerate_fpf, FpfInvolution};
use crate::poset::GradedPoset;
use crate::Caps;

/// Rise type by the exceedance/defect classes of the two positions.
///
/// Fixed points cannot occur here, so the `f`-typed kinds of the general
/// involution case are structurally impossible. Only `EeNoncrossing` and `Ed`
/// admit covering transformations in `F_2n`; the rest exist so that rise
/// classification is total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiseKind {
    /// `i1 < i2 < x(i1) < x(i2)`, both exceedances.
    EeNoncrossing,
    /// `i1 < x(i1) < i2 < x(i2)`, both exceedances.
    EeCrossing,
    /// exceedance then defect.
    Ed,
    /// defect then exceedance.
    De,
    /// two defects.
    Dd,
}

/// A classified rise of a fixed-point-free involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rise {
    pub i1: u32,
    pub i2: u32,
    pub kind: RiseKind,
    pub free: bool,
}

impl Rise {
    /// Whether the rise generates a covering relation of `F_2n`.
    pub fn is_suitable(&self) -> bool {
        self.free && matches!(self.kind, RiseKind::EeNoncrossing | RiseKind::Ed)
    }

    pub fn label(&self) -> Label {
        Label {
            i1: self.i1,
            i2: self.i2,
        }
    }
}

/// An edge label: the rise pair, a point of the totally ordered set
/// `Gamma = [2n] x [2n]`.
///
/// The derived `Ord` is the standard lexicographic order; [`Direction`]
/// selects between it and its order-dual.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub i1: u32,
    pub i2: u32,
}

impl Label {
    /// Comparison in the chosen direction of `Gamma`.
    pub fn cmp_in(&self, other: &Label, direction: Direction) -> Ordering {
        match direction {
            Direction::Standard => self.cmp(other),
            Direction::Reversed => other.cmp(self),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i1, self.i2)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i1, self.i2)
    }
}

/// Direction of the total order on `Gamma`.
///
/// `Standard` is lexicographic; `Reversed` is its order-dual. The labeling is
/// an EL-labeling with respect to `Reversed`; under `Standard` the dual
/// statement holds (a unique weakly decreasing, lexicographically largest
/// chain per interval).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Standard,
    Reversed,
}

/// Classifies every rise of `x`, in lexicographic order of the pair.
pub fn classify_rises(x: &FpfInvolution) -> Vec<Rise> {
    let m = x.size() as u32;
    let mut out = Vec::new();
    for i1 in 1..=m {
        let v1 = x.image(i1);
        for i2 in i1 + 1..=m {
            let v2 = x.image(i2);
            if v1 >= v2 {
                continue;
            }
            let free = !(i1 + 1..i2).any(|k| {
                let vk = x.image(k);
                v1 < vk && vk < v2
            });
            let kind = match (v1 > i1, v2 > i2) {
                (true, true) => {
                    if i2 < v1 {
                        RiseKind::EeNoncrossing
                    } else {
                        RiseKind::EeCrossing
                    }
                }
                (true, false) => RiseKind::Ed,
                (false, true) => RiseKind::De,
                (false, false) => RiseKind::Dd,
            };
            out.push(Rise { i1, i2, kind, free });
        }
    }
    out
}

/// Applies the covering transformation of a suitable rise.
///
/// For a non-crossing ee-rise `(i,j)` the arcs `(i,x(i)), (j,x(j))` become
/// `(i,x(j)), (j,x(i))`; for an ed-rise `(i,j)` the arcs `(i,x(i)), (x(j),j)`
/// become `(i,x(j)), (x(i),j)`. The result covers `x` in `F_2n`.
pub fn apply_ct(x: &FpfInvolution, rise: &Rise) -> Result<FpfInvolution> {
    let unsuitable = |reason: &str| Error::UnsuitableRise {
        i1: rise.i1,
        i2: rise.i2,
        reason: reason.to_string(),
    };
    // Re-derive the classification so a stale Rise cannot corrupt anything.
    let fresh = classify_rises(x)
        .into_iter()
        .find(|r| r.i1 == rise.i1 && r.i2 == rise.i2)
        .ok_or_else(|| unsuitable("not a rise of this element"))?;
    if fresh.kind != rise.kind || fresh.free != rise.free {
        return Err(unsuitable("classification does not match this element"));
    }
    if !fresh.free {
        return Err(unsuitable("rise is not free"));
    }
    let (i, j) = (rise.i1, rise.i2);
    let (xi, xj) = (x.image(i), x.image(j));
    let mut untouched: Vec<(u32, u32)> = x
        .arcs()
        .into_iter()
        .filter(|&(a, b)| a != i && a != j && b != i && b != j)
        .collect();
    match fresh.kind {
        RiseKind::EeNoncrossing => {
            untouched.push((i, xj));
            untouched.push((j, xi));
        }
        RiseKind::Ed => {
            untouched.push((i, xj));
            untouched.push((xi, j));
        }
        RiseKind::EeCrossing => return Err(unsuitable("crossing ee-rise")),
        RiseKind::De | RiseKind::Dd => return Err(unsuitable("first position is a defect")),
    }
    let y = FpfInvolution::from_pairs(&untouched)?;
    debug_assert_eq!(y.length(), x.length() + 1);
    Ok(y)
}

/// The labeled upward star of `x`: every cover obtained from a suitable rise,
/// paired with its edge label.
pub fn rise_covers(x: &FpfInvolution) -> Vec<(FpfInvolution, Label)> {
    classify_rises(x)
        .into_iter()
        .filter(Rise::is_suitable)
        .map(|r| {
            let y = apply_ct(x, &r).expect("suitable rise");
            (y, r.label())
        })
        .collect()
}

/// Builds the full labeled poset `F_2n` from the covering transformations.
pub fn build_f_poset(n: usize, caps: &Caps) -> Result<GradedPoset> {
    let elements = enumerate_fpf(n, caps.enumeration_cap)?;
    let mut edges = Vec::new();
    for (i, x) in elements.iter().enumerate() {
        for (y, label) in rise_covers(x) {
            let j = elements
                .binary_search(&y)
                .expect("cover stays inside F_2n");
            edges.push((i, j, Some(label)));
        }
    }
    let ranks: Vec<u32> = elements.iter().map(|x| x.length() as u32).collect();
    GradedPoset::new(elements, ranks, edges)
}
