//! Finite posets, monotone maps and up-sets.
//!
//! Elements are dense indices `0..n`. A [`Poset`] stores, for every element,
//! its principal up-set and down-set, which makes `≤`, up-set tests and
//! extremal-element queries cheap bitset operations.

use std::collections::{HashSet, VecDeque};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poset {
    n: usize,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
}

impl Poset {
    /// Builds the reflexive-transitive closure of `pairs` (`(a, b)` meaning
    /// `a ≤ b`). Rejects pairs that create a cycle.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut up: Vec<BitSet> = (0..n).map(|i| BitSet::from_indices(n, [i])).collect();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::NotPartialOrder(format!(
                    "pair ({a}, {b}) outside 0..{n}"
                )));
            }
            up[a].insert(b);
        }
        // Warshall on rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for a in 0..n {
            for b in up[a].iter() {
                if a != b && up[b].contains(a) {
                    return Err(Error::NotPartialOrder(format!(
                        "cycle through elements {a} and {b}"
                    )));
                }
            }
        }
        Ok(Self::from_up_sets(up))
    }

    /// Validates an explicit relation. No closure is taken.
    pub fn from_relation(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let up: Vec<BitSet> = (0..n)
            .map(|a| BitSet::from_indices(n, (0..n).filter(|&b| leq(a, b))))
            .collect();
        for a in 0..n {
            if !up[a].contains(a) {
                return Err(Error::NotPartialOrder(format!("not reflexive at {a}")));
            }
            for b in up[a].iter() {
                if a != b && up[b].contains(a) {
                    return Err(Error::NotPartialOrder(format!(
                        "not antisymmetric at ({a}, {b})"
                    )));
                }
                if !up[b].is_subset(&up[a]) {
                    return Err(Error::NotPartialOrder(format!(
                        "not transitive through ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Self::from_up_sets(up))
    }

    fn from_up_sets(up: Vec<BitSet>) -> Self {
        let n = up.len();
        let mut down: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for (a, row) in up.iter().enumerate() {
            for b in row.iter() {
                down[b].insert(a);
            }
        }
        Poset { n, up, down }
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_pairs(n, &[]).expect("antichain is a poset")
    }

    /// `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_pairs(n, &pairs).expect("chain is a poset")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// `↑a`
    pub fn up(&self, a: usize) -> &BitSet {
        &self.up[a]
    }

    /// `↓a`
    pub fn down(&self, a: usize) -> &BitSet {
        &self.down[a]
    }

    /// Strict order pairs `(a, b)` with `a < b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in self.up[a].iter() {
                if a != b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Covering pairs `(a, b)`: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(a, b)| {
                !(0..self.n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b))
            })
            .collect()
    }

    pub fn is_up_set(&self, s: &BitSet) -> bool {
        s.iter().all(|a| self.up[a].is_subset(s))
    }

    pub fn is_down_set(&self, s: &BitSet) -> bool {
        s.iter().all(|a| self.down[a].is_subset(s))
    }

    /// Least up-set containing `s`.
    pub fn up_closure(&self, s: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.n);
        for a in s.iter() {
            out.union_with(&self.up[a]);
        }
        out
    }

    /// The poset with the order reversed.
    pub fn dual(&self) -> Poset {
        Poset {
            n: self.n,
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// Disjoint union, with `other`'s elements shifted by `self.len()`.
    pub fn disjoint_union(&self, other: &Poset) -> Poset {
        let mut pairs = self.strict_pairs();
        pairs.extend(
            other
                .strict_pairs()
                .into_iter()
                .map(|(a, b)| (a + self.n, b + self.n)),
        );
        Poset::from_pairs(self.n + other.n, &pairs).expect("disjoint union of posets")
    }

    /// Induced subposet on `subset`; the second component lists the original
    /// index of each new element in increasing order.
    pub fn restrict(&self, subset: &BitSet) -> (Poset, Vec<usize>) {
        let keep = subset.to_vec();
        let m = keep.len();
        let up = keep
            .iter()
            .map(|&a| BitSet::from_indices(m, (0..m).filter(|&j| self.leq(a, keep[j]))))
            .collect();
        (Self::from_up_sets(up), keep)
    }

    /// Relabels by `perm`: element `i` of `self` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        let pairs: Vec<_> = self
            .strict_pairs()
            .into_iter()
            .map(|(a, b)| (perm[a], perm[b]))
            .collect();
        Poset::from_pairs(self.n, &pairs).expect("relabelled poset")
    }
}

/// An order-preserving map between two posets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonotoneMap {
    img: Vec<usize>,
    cod_len: usize,
}

impl MonotoneMap {
    pub fn new(dom: &Poset, cod: &Poset, img: Vec<usize>) -> Result<Self> {
        if img.len() != dom.len() {
            return Err(Error::InvalidMap(format!(
                "map has {} entries, domain has {}",
                img.len(),
                dom.len()
            )));
        }
        if let Some(&bad) = img.iter().find(|&&y| y >= cod.len()) {
            return Err(Error::InvalidMap(format!(
                "value {bad} outside codomain of size {}",
                cod.len()
            )));
        }
        for (a, b) in dom.strict_pairs() {
            if !cod.leq(img[a], img[b]) {
                return Err(Error::InvalidMap(format!(
                    "not order-preserving: {a} ≤ {b} but {} ≰ {}",
                    img[a], img[b]
                )));
            }
        }
        Ok(MonotoneMap {
            img,
            cod_len: cod.len(),
        })
    }

    pub fn identity(p: &Poset) -> Self {
        MonotoneMap {
            img: (0..p.len()).collect(),
            cod_len: p.len(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.img[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.img
    }

    /// `other ∘ self`
    pub fn then(&self, other: &MonotoneMap) -> MonotoneMap {
        MonotoneMap {
            img: self.img.iter().map(|&y| other.img[y]).collect(),
            cod_len: other.cod_len,
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BitSet::new(self.cod_len);
        self.img.iter().all(|&y| seen.insert(y))
    }

    pub fn is_surjective(&self) -> bool {
        BitSet::from_indices(self.cod_len, self.img.iter().copied()).is_full()
    }

    /// Injective and `img(a) ≤ img(b) ⇒ a ≤ b`.
    pub fn is_order_embedding(&self, dom: &Poset, cod: &Poset) -> bool {
        (0..dom.len()).all(|a| {
            (0..dom.len()).all(|b| dom.leq(a, b) == cod.leq(self.img[a], self.img[b]))
        })
    }
}

/// Every up-set of `p`, sorted as binary numbers (element `i` is bit `i`).
pub fn all_up_sets(p: &Poset, cap: usize) -> Result<Vec<BitSet>> {
    let n = p.len();
    // Maximal elements first, so inclusion of x can be decided from its
    // strict upper bounds.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (p.up(x).len(), x));
    let mut out = Vec::new();
    let mut current = BitSet::new(n);
    collect_up_sets(p, &order, 0, &mut current, &mut out, cap)?;
    out.sort();
    Ok(out)
}

fn collect_up_sets(
    p: &Poset,
    order: &[usize],
    depth: usize,
    current: &mut BitSet,
    out: &mut Vec<BitSet>,
    cap: usize,
) -> Result<()> {
    if depth == order.len() {
        if out.len() >= cap {
            return Err(Error::guard("up_sets", cap, out.len() + 1));
        }
        out.push(current.clone());
        return Ok(());
    }
    let x = order[depth];
    collect_up_sets(p, order, depth + 1, current, out, cap)?;
    if p.up(x).iter().all(|y| y == x || current.contains(y)) {
        current.insert(x);
        collect_up_sets(p, order, depth + 1, current, out, cap)?;
        current.remove(x);
    }
    Ok(())
}

/// Components of the comparability graph, each sorted, listed by least element.
pub fn connected_components(p: &Poset) -> Vec<Vec<usize>> {
    let n = p.len();
    let mut seen = BitSet::new(n);
    let mut out = Vec::new();
    for start in 0..n {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let nbrs = p.up(x).union(p.down(x));
            for y in nbrs.iter() {
                if seen.insert(y) {
                    comp.push(y);
                    queue.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn is_connected(p: &Poset) -> bool {
    connected_components(p).len() <= 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalProfile {
    pub maximal: BitSet,
    pub minimal: BitSet,
    /// Every element is maximal or minimal.
    pub all_extremal: bool,
}

pub fn extremal_profile(p: &Poset) -> ExtremalProfile {
    let n = p.len();
    let maximal = BitSet::from_indices(n, (0..n).filter(|&x| p.up(x).len() == 1));
    let minimal = BitSet::from_indices(n, (0..n).filter(|&x| p.down(x).len() == 1));
    let all_extremal = maximal.union(&minimal).is_full();
    ExtremalProfile {
        maximal,
        minimal,
        all_extremal,
    }
}

/// Maximal elements of `p` lying above `x`.
pub fn max_above(p: &Poset, x: usize) -> BitSet {
    let prof = extremal_profile(p);
    p.up(x).intersection(&prof.maximal)
}

/// Minimal elements of `p` lying below `x`.
pub fn min_below(p: &Poset, x: usize) -> BitSet {
    let prof = extremal_profile(p);
    p.down(x).intersection(&prof.minimal)
}

pub fn is_antichain(p: &Poset, s: &BitSet) -> bool {
    s.iter()
        .all(|a| p.up(a).intersection(s).len() == 1 && p.down(a).intersection(s).len() == 1)
}

/// First order-isomorphism `p → q` in lexicographic order of the image
/// sequence, if any. `limit` bounds the size for which the search runs.
pub fn poset_isomorphic(p: &Poset, q: &Poset, limit: usize) -> Result<Option<Vec<usize>>> {
    find_isomorphism(p, q, limit, |_, _| true)
}

/// Order-isomorphism search with an additional consistency check.
///
/// `consistent(prefix, k)` is called after element `k` has been assigned;
/// `prefix` holds the images of `0..=k`. It should only test constraints that
/// involve `k` and earlier elements. The first bijection (in lexicographic
/// order) passing every check is returned.
pub fn find_isomorphism(
    p: &Poset,
    q: &Poset,
    limit: usize,
    mut consistent: impl FnMut(&[usize], usize) -> bool,
) -> Result<Option<Vec<usize>>> {
    let n = p.len();
    if n != q.len() {
        return Ok(None);
    }
    if n > limit {
        return Err(Error::guard("iso_search", limit, n));
    }
    let sig = |r: &Poset, x: usize| (r.up(x).len(), r.down(x).len());
    let mut ps: Vec<_> = (0..n).map(|x| sig(p, x)).collect();
    let mut qs: Vec<_> = (0..n).map(|x| sig(q, x)).collect();
    ps.sort_unstable();
    qs.sort_unstable();
    if ps != qs {
        return Ok(None);
    }
    let mut img = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if iso_dfs(p, q, &mut img, &mut used, &mut consistent) {
        Ok(Some(img))
    } else {
        Ok(None)
    }
}

fn iso_dfs(
    p: &Poset,
    q: &Poset,
    img: &mut Vec<usize>,
    used: &mut [bool],
    consistent: &mut impl FnMut(&[usize], usize) -> bool,
) -> bool {
    let k = img.len();
    if k == p.len() {
        return true;
    }
    for y in 0..q.len() {
        if used[y] || p.up(k).len() != q.up(y).len() || p.down(k).len() != q.down(y).len() {
            continue;
        }
        let order_ok = (0..k).all(|x| {
            p.leq(x, k) == q.leq(img[x], y) && p.leq(k, x) == q.leq(y, img[x])
        });
        if !order_ok {
            continue;
        }
        img.push(y);
        used[y] = true;
        if consistent(img, k) && iso_dfs(p, q, img, used, consistent) {
            return true;
        }
        img.pop();
        used[y] = false;
    }
    false
}

/// Calls `f` on every permutation of `0..n` in lexicographic order.
pub(crate) fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        f(&perm);
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

/// Largest `n` accepted by [`posets_up_to_iso`].
pub const MAX_ENUMERATED_POSET: usize = 6;

/// One representative of every isomorphism class of `n`-element posets.
///
/// Representatives are in canonical form and sorted by their canonical
/// relation code, so the output is deterministic.
pub fn posets_up_to_iso(n: usize) -> Result<Vec<Poset>> {
    if n > MAX_ENUMERATED_POSET {
        return Err(Error::guard("poset_enumeration", MAX_ENUMERATED_POSET, n));
    }
    // Every poset has a natural labelling (a linear extension), so it is
    // enough to enumerate strict orders contained in `<` on indices.
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut seen: HashSet<u64> = HashSet::new();
    let mut codes = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let rel = |i: usize, j: usize| -> bool {
            i < j && mask >> pair_index(n, i, j) & 1 == 1
        };
        let transitive = (0..n).all(|i| {
            (i + 1..n).all(|j| !rel(i, j) || (j + 1..n).all(|k| !rel(j, k) || rel(i, k)))
        });
        if !transitive {
            continue;
        }
        let code = canonical_code(n, &rel);
        if seen.insert(code) {
            codes.push(code);
        }
    }
    codes.sort_unstable();
    Ok(codes
        .into_iter()
        .map(|code| {
            let pairs: Vec<_> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| code >> (i * n + j) & 1 == 1)
                .collect();
            Poset::from_pairs(n, &pairs).expect("canonical poset")
        })
        .collect())
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    // index of (i, j), i < j, in row-major upper-triangular order
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Minimum over relabellings of the strict relation as an `n×n` bit matrix.
fn canonical_code(n: usize, rel: &impl Fn(usize, usize) -> bool) -> u64 {
    let strict: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| rel(i, j))
        .collect();
    let mut best = u64::MAX;
    for_each_permutation(n, |perm| {
        let code = strict
            .iter()
            .fold(0u64, |acc, &(i, j)| acc | 1u64 << (perm[i] * n + perm[j]));
        best = best.min(code);
    });
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_up_sets(p: &Poset) -> Vec<BitSet> {
        (0u64..1 << p.len())
            .map(|bits| BitSet::from_bits(p.len(), bits))
            .filter(|s| {
                (0..p.len()).all(|x| {
                    (0..p.len()).all(|y| !(s.contains(x) && p.leq(x, y)) || s.contains(y))
                })
            })
            .collect()
    }

    #[test]
    fn up_sets_of_small_posets() {
        let single = Poset::antichain(1);
        assert_eq!(
            all_up_sets(&single, 16).unwrap(),
            vec![BitSet::new(1), BitSet::from_indices(1, [0])]
        );
        let chain = Poset::chain(2);
        assert_eq!(
            all_up_sets(&chain, 16).unwrap(),
            vec![
                BitSet::new(2),
                BitSet::from_indices(2, [1]),
                BitSet::from_indices(2, [0, 1])
            ]
        );
        let anti = Poset::antichain(2);
        assert_eq!(all_up_sets(&anti, 16).unwrap(), brute_up_sets(&anti));
        assert_eq!(all_up_sets(&anti, 16).unwrap().len(), 4);
    }

    #[test]
    fn up_set_guard() {
        let anti = Poset::antichain(5);
        let err = all_up_sets(&anti, 31).unwrap_err();
        assert!(err.is_guard());
        assert_eq!(all_up_sets(&anti, 32).unwrap().len(), 32);
    }

    #[test]
    fn cycles_are_rejected() {
        let err = Poset::from_pairs(2, &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, Error::NotPartialOrder(_)));
        assert!(Poset::from_relation(2, |a, b| a == b || (a, b) == (0, 1)).is_ok());
        assert!(Poset::from_relation(3, |a, b| a == b || (a, b) == (0, 1) || (a, b) == (1, 2))
            .is_err());
    }

    #[test]
    fn components() {
        assert_eq!(connected_components(&Poset::chain(2)), vec![vec![0, 1]]);
        assert_eq!(connected_components(&Poset::antichain(2)).len(), 2);
        // N poset: a<b, c<b, c<d with a=0 b=1 c=2 d=3
        let n = Poset::from_pairs(4, &[(0, 1), (2, 1), (2, 3)]).unwrap();
        assert_eq!(connected_components(&n), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn extremal() {
        assert!(extremal_profile(&Poset::chain(2)).all_extremal);
        assert!(!extremal_profile(&Poset::chain(3)).all_extremal);
        let uvw = Poset::chain(3);
        assert_eq!(max_above(&uvw, 0), BitSet::from_indices(3, [2]));
        assert_eq!(min_below(&uvw, 2), BitSet::from_indices(3, [0]));
    }

    #[test]
    fn antichains() {
        assert!(is_antichain(&Poset::chain(2), &BitSet::new(2)));
        assert!(!is_antichain(&Poset::chain(2), &BitSet::full(2)));
        assert!(is_antichain(&Poset::antichain(3), &BitSet::full(3)));
    }

    #[test]
    fn isomorphisms() {
        let c = Poset::chain(2);
        assert_eq!(poset_isomorphic(&c, &c, 12).unwrap(), Some(vec![0, 1]));
        assert_eq!(poset_isomorphic(&c, &Poset::antichain(2), 12).unwrap(), None);
        let v = Poset::from_pairs(3, &[(0, 2), (1, 2)]).unwrap();
        let v2 = v.relabel(&[2, 0, 1]);
        let iso = poset_isomorphic(&v, &v2, 12).unwrap().unwrap();
        for (a, b) in v.strict_pairs() {
            assert!(v2.lt(iso[a], iso[b]));
        }
        assert!(poset_isomorphic(&Poset::antichain(13), &Poset::antichain(13), 12)
            .unwrap_err()
            .is_guard());
    }

    /// Independent count: every reflexive relation on `n` points, filtered to
    /// partial orders, quotiented by sorted relabelled adjacency matrices.
    fn brute_iso_classes(n: usize) -> usize {
        let cells: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .collect();
        let mut classes: HashSet<Vec<Vec<bool>>> = HashSet::new();
        for mask in 0u64..1 << cells.len() {
            let mut m = vec![vec![false; n]; n];
            for i in 0..n {
                m[i][i] = true;
            }
            for (bit, &(i, j)) in cells.iter().enumerate() {
                m[i][j] = mask >> bit & 1 == 1;
            }
            let ok = (0..n).all(|a| {
                (0..n).all(|b| {
                    (a == b || !(m[a][b] && m[b][a]))
                        && (0..n).all(|c| !(m[a][b] && m[b][c]) || m[a][c])
                })
            });
            if !ok {
                continue;
            }
            let mut best: Option<Vec<Vec<bool>>> = None;
            for_each_permutation(n, |perm| {
                let mut r = vec![vec![false; n]; n];
                for a in 0..n {
                    for b in 0..n {
                        r[perm[a]][perm[b]] = m[a][b];
                    }
                }
                if best.as_ref().is_none_or(|cur| r < *cur) {
                    best = Some(r);
                }
            });
            classes.insert(best.unwrap());
        }
        classes.len()
    }

    #[test]
    fn poset_counts_match_brute_force() {
        for n in 1..=4 {
            assert_eq!(posets_up_to_iso(n).unwrap().len(), brute_iso_classes(n), "n={n}");
        }
        assert_eq!(posets_up_to_iso(1).unwrap().len(), 1);
        assert_eq!(posets_up_to_iso(2).unwrap().len(), 2);
        assert_eq!(posets_up_to_iso(3).unwrap().len(), 5);
        assert!(posets_up_to_iso(7).unwrap_err().is_guard());
    }

    #[test]
    fn chain_and_antichain_up_set_counts() {
        for n in 0..=6 {
            assert_eq!(all_up_sets(&Poset::chain(n), 1 << 10).unwrap().len(), n + 1);
            assert_eq!(all_up_sets(&Poset::antichain(n), 1 << 10).unwrap().len(), 1 << n);
        }
    }
}
