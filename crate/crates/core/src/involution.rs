//! Fixed-point-free involutions of `[2n]` and their counting statistics.
//!
//! An element is stored by its one-line word, which is also its canonical
//! identity: equality, hashing and the enumeration order all go through the
//! word. The bracket sequence `[a_1,b_1]...[a_n,b_n]` (equivalently, the arc
//! diagram of the perfect matching) is derived on demand.
//!
//! All public positions and values are 1-based.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A fixed-point-free involution of `[2n]`.
///
/// Invariants, enforced at construction: the word is a permutation of
/// `{1,...,2n}`, `x(x(i)) = i`, and `x(i) != i` for every `i`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpfInvolution {
    map: Vec<u32>,
}

impl FpfInvolution {
    /// Builds an element from its one-line word (`map[i-1] = x(i)`, 1-based values).
    pub fn from_map(map: Vec<u32>) -> Result<Self> {
        let m = map.len();
        if m == 0 || m % 2 != 0 {
            return Err(Error::InvalidInvolution(format!(
                "word length {m} is not a positive even number"
            )));
        }
        for (i, &v) in map.iter().enumerate() {
            let i1 = (i + 1) as u32;
            if v < 1 || v as usize > m {
                return Err(Error::InvalidInvolution(format!(
                    "value {v} at position {i1} is outside [{m}]"
                )));
            }
            if v == i1 {
                return Err(Error::InvalidInvolution(format!("fixed point at {i1}")));
            }
            if map[(v - 1) as usize] != i1 {
                return Err(Error::InvalidInvolution(format!(
                    "not an involution: x({v}) != {i1}"
                )));
            }
        }
        Ok(Self { map })
    }

    /// Builds the element matching `a <-> b` for every listed pair.
    ///
    /// The pairs may come in any order and orientation, but must partition
    /// `{1,...,2n}` for some `n`.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self> {
        let m = pairs.len() * 2;
        let mut map = vec![0u32; m];
        for &(a, b) in pairs {
            for &(p, q) in &[(a, b), (b, a)] {
                if p < 1 || p as usize > m {
                    return Err(Error::InvalidInvolution(format!(
                        "entry {p} is outside [{m}]"
                    )));
                }
                if map[(p - 1) as usize] != 0 {
                    return Err(Error::InvalidInvolution(format!("entry {p} repeated")));
                }
                map[(p - 1) as usize] = q;
            }
        }
        Self::from_map(map)
    }

    /// `j_2n = (1,2)(3,4)...(2n-1,2n)`, the minimum of `F_2n`.
    pub fn minimum(n: usize) -> Self {
        let map = (0..2 * n as u32)
            .map(|i| if i % 2 == 0 { i + 2 } else { i })
            .collect();
        Self { map }
    }

    /// `w_0 = (1,2n)(2,2n-1)...`, the maximum of `F_2n`.
    pub fn maximum(n: usize) -> Self {
        let m = 2 * n as u32;
        Self {
            map: (0..m).map(|i| m - i).collect(),
        }
    }

    /// Half-size `n`.
    pub fn half_size(&self) -> usize {
        self.map.len() / 2
    }

    /// The degree `2n`.
    pub fn size(&self) -> usize {
        self.map.len()
    }

    /// The image `x(i)`, 1-based.
    pub fn image(&self, i: u32) -> u32 {
        self.map[(i - 1) as usize]
    }

    /// The one-line word `x(1), x(2), ..., x(2n)`.
    pub fn word(&self) -> &[u32] {
        &self.map
    }

    /// The canonical arc list: pairs `(i, x(i))` with `x(i) > i`, sorted by
    /// first coordinate.
    pub fn arcs(&self) -> Vec<(u32, u32)> {
        self.map
            .iter()
            .enumerate()
            .filter_map(|(i, &v)| {
                let i1 = (i + 1) as u32;
                (v > i1).then_some((i1, v))
            })
            .collect()
    }

    /// The canonical ordered bracket expression.
    pub fn to_brackets(&self) -> BracketSequence {
        BracketSequence {
            pairs: self.arcs(),
        }
    }

    /// Element described by a (validated) bracket sequence.
    pub fn from_brackets(b: &BracketSequence) -> Self {
        let mut map = vec![0u32; 2 * b.pairs.len()];
        for &(a, c) in &b.pairs {
            map[(a - 1) as usize] = c;
            map[(c - 1) as usize] = a;
        }
        Self { map }
    }

    /// Number of crossing arc pairs: `|{(s,t) : a_s < a_t < b_s < b_t}|`.
    pub fn crossings(&self) -> u64 {
        let arcs = self.arcs();
        let mut c = 0;
        for s in 0..arcs.len() {
            for t in s + 1..arcs.len() {
                // canonical order gives a_s < a_t already
                if arcs[t].0 < arcs[s].1 && arcs[s].1 < arcs[t].1 {
                    c += 1;
                }
            }
        }
        c
    }

    /// Classic inversion count of the one-line word.
    pub fn inversions(&self) -> u64 {
        inversions_of(&self.map)
    }

    /// Inversion count of the interleaved bracket word `a_1 b_1 a_2 b_2 ...`.
    pub fn modified_inversions(&self) -> u64 {
        let word: Vec<u32> = self.arcs().iter().flat_map(|&(a, b)| [a, b]).collect();
        inversions_of(&word)
    }

    /// Rank in `F_2n`: `(inv(x) - n) / 2`.
    pub fn length(&self) -> u64 {
        self.try_length()
            .expect("validated fixed-point-free involution")
    }

    /// Like [`length`](Self::length), surfacing the parity guard.
    ///
    /// `inv(x) - n` is even for every genuine fixed-point-free involution, so
    /// an error here means the element bypassed validation.
    pub fn try_length(&self) -> Result<u64> {
        let inv = self.inversions();
        let n = self.half_size() as u64;
        if inv < n || (inv - n) % 2 != 0 {
            return Err(Error::InvariantFailure(format!(
                "inv(x) = {inv} with n = {n}: corrupted element {self}"
            )));
        }
        Ok((inv - n) / 2)
    }

    /// The Deodhar-Srinivasan length: `sum_t (b_t - a_t - 1) - c(x)` over the
    /// canonical brackets.
    pub fn ds_length(&self) -> u64 {
        let span: u64 = self
            .arcs()
            .iter()
            .map(|&(a, b)| (b - a - 1) as u64)
            .sum();
        let c = self.crossings();
        debug_assert!(span >= c);
        span - c
    }
}

fn inversions_of(word: &[u32]) -> u64 {
    let mut inv = 0;
    for i in 0..word.len() {
        for j in i + 1..word.len() {
            if word[i] > word[j] {
                inv += 1;
            }
        }
    }
    inv
}

impl fmt::Display for FpfInvolution {
    /// Cycle form, e.g. `(1,6)(2,5)(3,8)(4,7)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in self.arcs() {
            write!(f, "({a},{b})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FpfInvolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpfInvolution({self})")
    }
}

impl FromStr for FpfInvolution {
    type Err = Error;

    /// Accepts cycle form `(1,6)(2,5)` and bracket form `1-6,2-5`.
    /// Whitespace is ignored everywhere. Cycle-form pairs may come in any
    /// order; bracket form must already be canonical.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::Parse("empty input".into()));
        }
        if t.starts_with('(') {
            parse_cycles(&t)
        } else {
            let b = parse_bracket_text(&t)?;
            Ok(Self::from_brackets(&b))
        }
    }
}

fn parse_cycles(t: &str) -> Result<FpfInvolution> {
    let mut pairs = Vec::new();
    let mut rest = t;
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| Error::Parse(format!("expected (a,b) at `{rest}`")))?;
        let (body, tail) = inner;
        let (a, b) = body
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("missing comma in `({body})`")))?;
        pairs.push((parse_pos(a)?, parse_pos(b)?));
        rest = tail;
    }
    FpfInvolution::from_pairs(&pairs)
}

fn parse_bracket_text(t: &str) -> Result<BracketSequence> {
    let mut pairs = Vec::new();
    for chunk in t.split(',') {
        let (a, b) = chunk
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("expected a-b, got `{chunk}`")))?;
        pairs.push((parse_pos(a)?, parse_pos(b)?));
    }
    BracketSequence::new(pairs)
}

fn parse_pos(s: &str) -> Result<u32> {
    s.parse::<u32>()
        .map_err(|_| Error::Parse(format!("bad position `{s}`")))
}

/// The canonical ordered transposition expression `[a_1,b_1]...[a_n,b_n]`.
///
/// Invariants: `a_t < b_t` within each pair, `a_1 < a_2 < ... < a_n`, and the
/// `2n` entries partition `{1,...,2n}`. Unlike cycle form, the expression is
/// ordered; the Deodhar-Srinivasan relations live on these expressions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BracketSequence {
    pairs: Vec<(u32, u32)>,
}

impl BracketSequence {
    pub fn new(pairs: Vec<(u32, u32)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::MalformedBrackets("empty sequence".into()));
        }
        let m = 2 * pairs.len() as u32;
        let mut seen = vec![false; m as usize];
        let mut prev_a = 0;
        for &(a, b) in &pairs {
            if a >= b {
                return Err(Error::MalformedBrackets(format!(
                    "pair [{a},{b}] is not increasing"
                )));
            }
            if a <= prev_a {
                return Err(Error::MalformedBrackets(format!(
                    "first coordinates not increasing at [{a},{b}]"
                )));
            }
            prev_a = a;
            for &p in &[a, b] {
                if p < 1 || p > m {
                    return Err(Error::MalformedBrackets(format!(
                        "entry {p} outside [{m}]"
                    )));
                }
                if seen[(p - 1) as usize] {
                    return Err(Error::MalformedBrackets(format!("entry {p} repeated")));
                }
                seen[(p - 1) as usize] = true;
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl fmt::Display for BracketSequence {
    /// Bracket text form, e.g. `1-6,2-5,3-8,4-7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, (a, b)) in self.pairs.iter().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}-{b}")?;
        }
        Ok(())
    }
}

/// All `(2n-1)!!` fixed-point-free involutions of `[2n]`, in lexicographic
/// order of the one-line word.
pub fn enumerate_fpf(n: usize, enumeration_cap: usize) -> Result<Vec<FpfInvolution>> {
    if n == 0 {
        return Err(Error::InvalidInvolution("n must be positive".into()));
    }
    if n > enumeration_cap {
        return Err(Error::EnumerationLimit {
            n,
            cap: enumeration_cap,
        });
    }
    let m = 2 * n;
    let mut out = Vec::with_capacity(double_factorial(n) as usize);
    let mut map = vec![0u32; m];
    fill(&mut map, &mut out);
    Ok(out)
}

/// Matching the smallest free position with each larger free position in
/// increasing order yields the words in lexicographic order.
fn fill(map: &mut Vec<u32>, out: &mut Vec<FpfInvolution>) {
    let i = match map.iter().position(|&v| v == 0) {
        None => {
            out.push(FpfInvolution { map: map.clone() });
            return;
        }
        Some(i) => i,
    };
    for j in i + 1..map.len() {
        if map[j] == 0 {
            map[i] = (j + 1) as u32;
            map[j] = (i + 1) as u32;
            fill(map, out);
            map[i] = 0;
            map[j] = 0;
        }
    }
}

/// `(2n-1)!! = 1 * 3 * 5 * ... * (2n-1)`.
pub fn double_factorial(n: usize) -> u64 {
    (0..n).map(|k| 2 * k as u64 + 1).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(s: &str) -> FpfInvolution {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration_base_cases() {
        let f2 = enumerate_fpf(1, 7).unwrap();
        assert_eq!(f2, vec![x("(1,2)")]);

        let f4 = enumerate_fpf(2, 7).unwrap();
        assert_eq!(f4, vec![x("(1,2)(3,4)"), x("(1,3)(2,4)"), x("(1,4)(2,3)")]);
    }

    #[test]
    fn enumeration_counts_and_invariants() {
        for n in 1..=5 {
            let all = enumerate_fpf(n, 7).unwrap();
            assert_eq!(all.len() as u64, double_factorial(n));
            // distinct and sorted (lex on word)
            for w in all.windows(2) {
                assert!(w[0] < w[1]);
            }
            for e in &all {
                // re-validate through the checked constructor
                FpfInvolution::from_map(e.word().to_vec()).unwrap();
                assert_eq!((e.inversions() - n as u64) % 2, 0);
            }
        }
        assert_eq!(double_factorial(5), 1 * 3 * 5 * 7 * 9);
    }

    #[test]
    fn enumeration_cap() {
        match enumerate_fpf(8, 7) {
            Err(Error::EnumerationLimit { n: 8, cap: 7 }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
        assert!(enumerate_fpf(8, 8).is_ok());
        assert!(enumerate_fpf(0, 7).is_err());
    }

    #[test]
    fn bracket_round_trip() {
        let a = x("(1,4)(2,5)(3,6)");
        assert_eq!(a.to_brackets().to_string(), "1-4,2-5,3-6");
        let b = x("(1,6)(2,5)(3,8)(4,7)");
        assert_eq!(b.to_brackets().to_string(), "1-6,2-5,3-8,4-7");

        let seq = BracketSequence::new(vec![(1, 3), (2, 4)]).unwrap();
        let c = FpfInvolution::from_brackets(&seq);
        assert_eq!(c.word(), &[3, 4, 1, 2]);

        for n in 1..=5 {
            for e in enumerate_fpf(n, 7).unwrap() {
                assert_eq!(FpfInvolution::from_brackets(&e.to_brackets()), e);
            }
        }
    }

    #[test]
    fn malformed_brackets() {
        assert!(matches!(
            BracketSequence::new(vec![(2, 4), (1, 3)]),
            Err(Error::MalformedBrackets(_))
        ));
        assert!(matches!(
            BracketSequence::new(vec![(1, 3), (3, 4)]),
            Err(Error::MalformedBrackets(_))
        ));
        assert!(matches!(
            BracketSequence::new(vec![(3, 1), (2, 4)]),
            Err(Error::MalformedBrackets(_))
        ));
        assert!(matches!(
            "2-5,1-6".parse::<FpfInvolution>(),
            Err(Error::MalformedBrackets(_))
        ));
    }

    #[test]
    fn crossing_counts() {
        assert_eq!(x("(1,6)(2,5)(3,8)(4,7)").crossings(), 4);
        assert_eq!(x("(1,2)(3,4)").crossings(), 0);
        assert_eq!(x("(1,3)(2,4)").crossings(), 1);
        for n in 1..=5 {
            let max = (n * (n - 1) / 2) as u64;
            for e in enumerate_fpf(n, 7).unwrap() {
                assert!(e.crossings() <= max);
            }
            assert_eq!(FpfInvolution::minimum(n).crossings(), 0);
            // the arcs of w_0 = (1,2n)(2,2n-1)... are pairwise nested
            assert_eq!(FpfInvolution::maximum(n).crossings(), 0);
            // the bound is attained by the shift matching (1,n+1)(2,n+2)...
            let shift = FpfInvolution::from_pairs(
                &(1..=n as u32).map(|t| (t, t + n as u32)).collect::<Vec<_>>(),
            )
            .unwrap();
            assert_eq!(shift.crossings(), max);
        }
    }

    #[test]
    fn inversion_counts() {
        assert_eq!(x("(1,2)(3,4)").inversions(), 2);
        assert_eq!(x("(1,4)(2,3)").inversions(), 6);
        // word 65872143, counted pair by pair
        assert_eq!(x("(1,6)(2,5)(3,8)(4,7)").word(), &[6, 5, 8, 7, 2, 1, 4, 3]);
        assert_eq!(x("(1,6)(2,5)(3,8)(4,7)").inversions(), 20);
    }

    #[test]
    fn modified_inversion_counts() {
        assert_eq!(x("(1,6)(2,5)(3,8)(4,7)").modified_inversions(), 8);
        for n in 1..=5 {
            assert_eq!(FpfInvolution::minimum(n).modified_inversions(), 0);
        }
        assert_eq!(x("(1,6)(2,5)(3,4)").modified_inversions(), 6);
    }

    #[test]
    fn length_examples() {
        for n in 1..=5 {
            assert_eq!(FpfInvolution::minimum(n).length(), 0);
            assert_eq!(FpfInvolution::maximum(n).length(), (n * (n - 1)) as u64);
        }
        assert_eq!(x("(1,6)(2,5)(3,8)(4,7)").length(), 8);
    }

    #[test]
    fn ds_length_examples() {
        assert_eq!(x("(1,6)(2,5)(3,8)(4,7)").ds_length(), (4 + 2 + 4 + 2) - 4);
        for n in 1..=5 {
            assert_eq!(FpfInvolution::minimum(n).ds_length(), 0);
        }
        assert_eq!(x("(1,3)(2,4)").ds_length(), 1);
    }

    #[test]
    fn length_identities_exhaustive() {
        // (inv-n)/2 = modified inversions = DS length, for all of F_2n, n <= 5
        for n in 1..=5 {
            for e in enumerate_fpf(n, 7).unwrap() {
                let l = e.length();
                assert_eq!(l, e.modified_inversions(), "{e}");
                assert_eq!(l, e.ds_length(), "{e}");
            }
        }
    }

    #[test]
    fn parsing_both_forms() {
        let a: FpfInvolution = " ( 1 , 6 ) (2,5)(3,8)(4,7) ".parse().unwrap();
        assert_eq!(a.to_string(), "(1,6)(2,5)(3,8)(4,7)");
        let b: FpfInvolution = "1-6, 2-5, 3-8, 4-7".parse().unwrap();
        assert_eq!(a, b);
        // cycle pairs in any order or orientation
        let c: FpfInvolution = "(3,8)(6,1)(2,5)(4,7)".parse().unwrap();
        assert_eq!(a, c);

        assert!("(1,2)(3,4".parse::<FpfInvolution>().is_err());
        assert!("(1 2)(3,4)".parse::<FpfInvolution>().is_err());
        assert!("(1,1)(2,3)".parse::<FpfInvolution>().is_err());
        assert!("(1,2)(2,3)".parse::<FpfInvolution>().is_err());
        assert!("".parse::<FpfInvolution>().is_err());
    }

    #[test]
    fn invalid_involutions() {
        assert!(FpfInvolution::from_map(vec![2, 1, 3, 4]).is_err()); // fixed points
        assert!(FpfInvolution::from_map(vec![2, 3, 1, 4]).is_err()); // not an involution
        assert!(FpfInvolution::from_map(vec![2, 1, 4]).is_err()); // odd length
        assert!(FpfInvolution::from_map(vec![2, 1, 5, 3]).is_err()); // out of range
    }

    #[test]
    fn try_length_on_valid_elements() {
        for n in 1..=3 {
            for e in enumerate_fpf(n, 7).unwrap() {
                assert!(e.try_length().is_ok());
            }
        }
    }
}
