//! Graded-poset machinery shared by `F_2n` and the Deodhar-Srinivasan poset:
//! the Hasse container, Mobius function, rank generating function, order
//! complex facets and the ball certificate.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::el::ELReport;
use crate::error::{Error, Result};
use crate::involution::FpfInvolution;
use crate::rises::Label;

/// An upward cover edge. The label is the rise pair for edges of `F_2n`;
/// Deodhar-Srinivasan edges are unlabeled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverEdge {
    pub to: usize,
    pub label: Option<Label>,
}

/// A finite graded poset with a unique minimum and maximum, presented by its
/// Hasse diagram.
///
/// Invariants, checked at construction:
/// - every cover edge connects consecutive ranks;
/// - exactly one element of rank 0 and one of maximal rank;
/// - every element lies on some bottom-to-top saturated chain.
#[derive(Clone, Debug)]
pub struct GradedPoset {
    elements: Vec<FpfInvolution>,
    rank: Vec<u32>,
    up: Vec<Vec<CoverEdge>>,
    bottom: usize,
    top: usize,
}

impl GradedPoset {
    /// Builds and validates a poset. Ranks are normalized so the minimum is 0.
    pub fn new(
        elements: Vec<FpfInvolution>,
        rank: Vec<u32>,
        edges: Vec<(usize, usize, Option<Label>)>,
    ) -> Result<Self> {
        if elements.is_empty() || elements.len() != rank.len() {
            return Err(Error::InvalidPoset(
                "element and rank lists must be nonempty and equal length".into(),
            ));
        }
        let min_rank = *rank.iter().min().expect("nonempty");
        let rank: Vec<u32> = rank.iter().map(|r| r - min_rank).collect();
        let max_rank = *rank.iter().max().expect("nonempty");

        let bottoms: Vec<usize> = (0..rank.len()).filter(|&i| rank[i] == 0).collect();
        let tops: Vec<usize> = (0..rank.len()).filter(|&i| rank[i] == max_rank).collect();
        if bottoms.len() != 1 || tops.len() != 1 {
            return Err(Error::InvalidPoset(format!(
                "{} bottom elements and {} top elements",
                bottoms.len(),
                tops.len()
            )));
        }
        let (bottom, top) = (bottoms[0], tops[0]);

        let mut up: Vec<Vec<CoverEdge>> = vec![Vec::new(); elements.len()];
        for (from, to, label) in edges {
            if from >= elements.len() || to >= elements.len() {
                return Err(Error::InvalidPoset("edge index out of range".into()));
            }
            if rank[to] != rank[from] + 1 {
                return Err(Error::InvalidPoset(format!(
                    "edge {} -> {} skips ranks {} -> {}",
                    elements[from], elements[to], rank[from], rank[to]
                )));
            }
            up[from].push(CoverEdge { to, label });
        }
        for list in &mut up {
            list.sort_by_key(|e| e.to);
            list.dedup_by_key(|e| e.to);
        }

        let poset = Self {
            elements,
            rank,
            up,
            bottom,
            top,
        };
        poset.check_full_rank()?;
        Ok(poset)
    }

    /// Full-rank condition: reachable from the bottom and co-reachable from
    /// the top. With consecutive-rank edges this puts every element on a
    /// saturated bottom-to-top chain.
    fn check_full_rank(&self) -> Result<()> {
        let above = self.up_reachable(self.bottom);
        let mut below = vec![false; self.len()];
        below[self.top] = true;
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.rank[i]));
        for &i in &order {
            if self.up[i].iter().any(|e| below[e.to]) {
                below[i] = true;
            }
        }
        for i in 0..self.len() {
            if !above[i] || !below[i] {
                return Err(Error::InvalidPoset(format!(
                    "element {} is not on a bottom-to-top chain",
                    self.elements[i]
                )));
            }
        }
        Ok(())
    }

    fn up_reachable(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for e in &self.up[v] {
                if !seen[e.to] {
                    seen[e.to] = true;
                    stack.push(e.to);
                }
            }
        }
        seen
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &FpfInvolution {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[FpfInvolution] {
        &self.elements
    }

    pub fn rank_of(&self, i: usize) -> u32 {
        self.rank[i]
    }

    pub fn up_edges(&self, i: usize) -> &[CoverEdge] {
        &self.up[i]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Length of the poset: the rank of the top element.
    pub fn poset_length(&self) -> u32 {
        self.rank[self.top]
    }

    pub fn edge_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    /// Index of an element, if present.
    pub fn index_of(&self, x: &FpfInvolution) -> Option<usize> {
        self.elements.iter().position(|e| e == x)
    }

    /// Reachability over covers: `a <= b` in this poset.
    pub fn leq_idx(&self, a: usize, b: usize) -> bool {
        if self.rank[a] > self.rank[b] {
            return false;
        }
        if a == b {
            return true;
        }
        let mut stack = vec![a];
        let mut seen = vec![false; self.len()];
        seen[a] = true;
        while let Some(v) = stack.pop() {
            for e in &self.up[v] {
                if e.to == b {
                    return true;
                }
                if !seen[e.to] && self.rank[e.to] < self.rank[b] {
                    seen[e.to] = true;
                    stack.push(e.to);
                }
            }
        }
        false
    }

    /// Upward reachability bitsets for every element (`sets[v]` contains `w`
    /// iff `v <= w`). Row-major, `words_per_row` u64 words per element.
    pub(crate) fn above_sets(&self) -> BitMatrix {
        let mut m = BitMatrix::new(self.len());
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.rank[i]));
        for &v in &order {
            m.set(v, v);
            let targets: Vec<usize> = self.up[v].iter().map(|e| e.to).collect();
            for w in targets {
                m.union_row(v, w);
            }
        }
        m
    }
}

/// A square bit matrix; row `v` holds a subset of the element indices.
pub(crate) struct BitMatrix {
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        BitMatrix {
            words_per_row,
            bits: vec![0; words_per_row * n],
        }
    }

    pub fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.words_per_row + col / 64] |= 1 << (col % 64);
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.words_per_row + col / 64] & (1 << (col % 64)) != 0
    }

    /// `row dst |= row src`.
    pub fn union_row(&mut self, dst: usize, src: usize) {
        let (d, s) = (dst * self.words_per_row, src * self.words_per_row);
        for k in 0..self.words_per_row {
            let v = self.bits[s + k];
            self.bits[d + k] |= v;
        }
    }

    pub fn row_indices(&self, row: usize) -> Vec<usize> {
        let r = row * self.words_per_row;
        let mut out = Vec::new();
        for k in 0..self.words_per_row {
            let mut w = self.bits[r + k];
            while w != 0 {
                let t = w.trailing_zeros() as usize;
                out.push(k * 64 + t);
                w &= w - 1;
            }
        }
        out
    }
}

/// Mobius function of the interval `[x, y]`, by the defining recursion
/// `mu(x,x) = 1`, `mu(x,y) = -sum_{x <= z < y} mu(x,z)`.
pub fn mobius(p: &GradedPoset, x: usize, y: usize) -> Result<i64> {
    if x == y {
        return Ok(1);
    }
    if !p.leq_idx(x, y) {
        return Err(Error::NotComparable {
            lower: p.element(x).to_string(),
            upper: p.element(y).to_string(),
        });
    }
    // members of [x,y], by ascending rank
    let mut members: Vec<usize> = (0..p.len())
        .filter(|&z| p.leq_idx(x, z) && p.leq_idx(z, y))
        .collect();
    members.sort_by_key(|&z| (p.rank_of(z), z));
    let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &z)| (z, k)).collect();

    // reachability restricted to the interval
    let mut reach: Vec<Vec<bool>> = vec![vec![false; members.len()]; members.len()];
    for (k, &z) in members.iter().enumerate().rev() {
        reach[k][k] = true;
        for e in p.up_edges(z) {
            if let Some(&t) = pos.get(&e.to) {
                let (head, tail) = reach.split_at_mut(k + 1);
                let row = &mut head[k];
                for (c, &b) in tail[t - k - 1].iter().enumerate() {
                    row[c] = row[c] || b;
                }
            }
        }
    }

    let mut mu = vec![0i64; members.len()];
    mu[0] = 1; // members[0] == x
    for k in 1..members.len() {
        let mut s = 0i64;
        for j in 0..k {
            if reach[j][k] {
                s += mu[j];
            }
        }
        mu[k] = -s;
    }
    Ok(mu[pos[&y]])
}

/// Coefficient `k` is the number of elements of rank `k`.
pub fn rank_genfun(p: &GradedPoset) -> Vec<u64> {
    let mut coeffs = vec![0u64; p.poset_length() as usize + 1];
    for i in 0..p.len() {
        coeffs[p.rank_of(i) as usize] += 1;
    }
    coeffs
}

/// Coefficients of `[2n-1]_q!! = [2n-1]_q [2n-3]_q ... [1]_q`, where
/// `[m]_q = 1 + q + ... + q^(m-1)`.
pub fn q_double_factorial(n: usize) -> Vec<u64> {
    assert!(n >= 1, "q-double factorial needs n >= 1");
    let mut coeffs = vec![1u64];
    for k in 1..=n {
        let m = 2 * k - 1;
        let mut next = vec![0u64; coeffs.len() + m - 1];
        for (i, &c) in coeffs.iter().enumerate() {
            for j in 0..m {
                next[i + j] += c;
            }
        }
        coeffs = next;
    }
    coeffs
}

/// Facets of the order complex: maximal chains of `P` with the endpoints
/// dropped, as ascending element-index lists.
pub fn order_complex_facets(p: &GradedPoset) -> Result<Vec<Vec<u32>>> {
    let mut facets = Vec::new();
    for_each_facet(p, |chain| {
        facets.push(chain.to_vec());
        Ok(())
    })?;
    Ok(facets)
}

/// Streams the interior of every maximal chain, in DFS order (successor lists
/// are sorted, so the order is deterministic).
pub fn for_each_facet(
    p: &GradedPoset,
    mut visit: impl FnMut(&[u32]) -> Result<()>,
) -> Result<()> {
    if p.poset_length() < 2 {
        return Err(Error::Degenerate(format!(
            "poset length {} leaves no proper part",
            p.poset_length()
        )));
    }
    let mut chain: Vec<u32> = Vec::with_capacity(p.poset_length() as usize - 1);
    fn dfs(
        p: &GradedPoset,
        v: usize,
        chain: &mut Vec<u32>,
        visit: &mut impl FnMut(&[u32]) -> Result<()>,
    ) -> Result<()> {
        if v == p.top() {
            return visit(chain);
        }
        for e in p.up_edges(v) {
            if e.to != p.top() {
                chain.push(e.to as u32);
            }
            dfs(p, e.to, chain, visit)?;
            if e.to != p.top() {
                chain.pop();
            }
        }
        Ok(())
    }
    dfs(p, p.bottom(), &mut chain, &mut visit)
}

/// Number of maximal bottom-to-top chains, by dynamic programming.
pub fn maximal_chain_count(p: &GradedPoset) -> u128 {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(p.rank_of(i)));
    let mut cnt = vec![0u128; p.len()];
    cnt[p.top()] = 1;
    for &v in &order {
        if v != p.top() {
            cnt[v] = p.up_edges(v).iter().map(|e| cnt[e.to]).sum();
        }
    }
    cnt[p.bottom()]
}

/// Verdict of the order-complex certificate.
///
/// `BallConsistent` certifies exactly the combinatorial hypotheses of the
/// ball argument (pure shellable, ridges in at most two facets, a boundary
/// ridge, vanishing Mobius value) rather than a point-set homeomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    BallConsistent,
    SphereConsistent,
    Fail,
    Degenerate,
}

/// Outcome of the combinatorial ball check on an order complex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BallCertificate {
    pub n: usize,
    pub complex_dimension: i64,
    pub facet_count: u64,
    pub ridge_max_multiplicity: u32,
    pub boundary_ridge_exists: bool,
    pub mobius_bottom_top: i64,
    pub verdict: Verdict,
}

/// Computes the ball certificate of `Delta(P)`.
///
/// Requires a clean EL report for the same poset: shellability is an input to
/// the argument, not something the ridge table alone can supply. The ridge
/// table maps each codimension-1 face to the number of facets containing it;
/// `ridge_mem_cap` bounds the number of distinct entries.
pub fn ball_certificate(
    p: &GradedPoset,
    el: &ELReport,
    ridge_mem_cap: usize,
) -> Result<BallCertificate> {
    if !el.verified() {
        return Err(Error::ElNotVerified);
    }
    if el.n != p.element(0).half_size() {
        return Err(Error::InvalidPoset(format!(
            "EL report is for n = {}, poset has n = {}",
            el.n,
            p.element(0).half_size()
        )));
    }
    let n = p.element(0).half_size();
    let length = p.poset_length() as i64;
    if length < 2 {
        // proper part is empty: no complex to certify
        return Ok(BallCertificate {
            n,
            complex_dimension: length - 2,
            facet_count: 0,
            ridge_max_multiplicity: 0,
            boundary_ridge_exists: false,
            mobius_bottom_top: mobius(p, p.bottom(), p.top())?,
            verdict: Verdict::Degenerate,
        });
    }

    let facet_size = (length - 1) as usize;
    let mut ridges: HashMap<Box<[u32]>, u32> = HashMap::new();
    let mut facet_count = 0u64;
    let mut scratch: Vec<u32> = Vec::with_capacity(facet_size.saturating_sub(1));
    for_each_facet(p, |chain| {
        debug_assert_eq!(chain.len(), facet_size, "order complex must be pure");
        facet_count += 1;
        for drop in 0..chain.len() {
            scratch.clear();
            scratch.extend_from_slice(&chain[..drop]);
            scratch.extend_from_slice(&chain[drop + 1..]);
            if let Some(c) = ridges.get_mut(scratch.as_slice()) {
                *c += 1;
            } else {
                if ridges.len() >= ridge_mem_cap {
                    return Err(Error::RidgeCapExceeded { cap: ridge_mem_cap });
                }
                ridges.insert(scratch.as_slice().into(), 1);
            }
        }
        Ok(())
    })?;

    let ridge_max_multiplicity = ridges.values().copied().max().unwrap_or(0);
    let boundary_ridge_exists = ridges.values().any(|&c| c == 1);
    let mobius_bottom_top = mobius(p, p.bottom(), p.top())?;

    let verdict = if ridge_max_multiplicity <= 2 && boundary_ridge_exists && mobius_bottom_top == 0
    {
        Verdict::BallConsistent
    } else if ridge_max_multiplicity <= 2
        && !boundary_ridge_exists
        && mobius_bottom_top.abs() == 1
    {
        // untested by this poset family: every ridge in exactly two facets
        Verdict::SphereConsistent
    } else {
        Verdict::Fail
    };

    Ok(BallCertificate {
        n,
        complex_dimension: length - 2,
        facet_count,
        ridge_max_multiplicity,
        boundary_ridge_exists,
        mobius_bottom_top,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rises::build_f_poset;
    use crate::Caps;

    fn f(n: usize) -> GradedPoset {
        build_f_poset(n, &Caps::default()).unwrap()
    }

    #[test]
    fn q_double_factorial_small() {
        assert_eq!(q_double_factorial(1), vec![1]);
        assert_eq!(q_double_factorial(2), vec![1, 1, 1]);
        // (1+q+q^2)(1+q+q^2+q^3+q^4) expanded by hand
        assert_eq!(q_double_factorial(3), vec![1, 2, 3, 3, 3, 2, 1]);
    }

    #[test]
    fn rank_genfun_matches_q_double_factorial() {
        for n in 1..=5 {
            let p = f(n);
            let coeffs = rank_genfun(&p);
            assert_eq!(coeffs, q_double_factorial(n), "n = {n}");
            let total: u64 = coeffs.iter().sum();
            assert_eq!(total, crate::involution::double_factorial(n));
        }
    }

    #[test]
    fn genfun_figure3_layout() {
        assert_eq!(rank_genfun(&f(3)), vec![1, 2, 3, 3, 3, 2, 1]);
    }

    #[test]
    fn mobius_basics() {
        let p = f(2); // the 3-chain
        assert_eq!(mobius(&p, p.bottom(), p.bottom()).unwrap(), 1);
        let mid = p.up_edges(p.bottom())[0].to;
        assert_eq!(mobius(&p, p.bottom(), mid).unwrap(), -1);
        assert_eq!(mobius(&p, p.bottom(), p.top()).unwrap(), 0);
    }

    #[test]
    fn mobius_incomparable_errors() {
        let p = f(3);
        let a = p.index_of(&"(1,3)(2,4)(5,6)".parse().unwrap()).unwrap();
        let b = p.index_of(&"(1,2)(3,6)(4,5)".parse().unwrap()).unwrap();
        assert!(!p.leq_idx(a, b) && !p.leq_idx(b, a));
        assert!(matches!(
            mobius(&p, a, b),
            Err(Error::NotComparable { .. })
        ));
    }

    #[test]
    fn facets_of_f4_and_f6() {
        let p2 = f(2);
        let facets = order_complex_facets(&p2).unwrap();
        assert_eq!(facets.len(), 1);
        assert_eq!(facets[0].len(), 1); // single interior vertex, dimension 0

        let p3 = f(3);
        let facets = order_complex_facets(&p3).unwrap();
        assert_eq!(facets.len() as u128, maximal_chain_count(&p3));
        assert_eq!(facets.len(), 34);
        for ch in &facets {
            assert_eq!(ch.len(), 5); // dimension 4 = 3*2 - 2
        }
    }

    #[test]
    fn facets_degenerate_at_n1() {
        let p1 = f(1);
        assert!(matches!(
            order_complex_facets(&p1),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn poset_validation_rejects_rank_skips() {
        let elements = crate::involution::enumerate_fpf(2, 7).unwrap();
        let ranks = vec![0, 1, 2];
        // edge 0 -> 2 skips a rank
        let err = GradedPoset::new(elements, ranks, vec![(0, 2, None)]);
        assert!(matches!(err, Err(Error::InvalidPoset(_))));
    }
}
