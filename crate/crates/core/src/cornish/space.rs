use std::collections::{HashMap, HashSet};

use super::signature::{Polarity, Signature, Word};
use crate::bitset::BitSet;
use crate::error::{ensure, Error, Result};
use crate::order::{find_isomorphism, is_antichain, Poset};

/// A poset with one self-map per symbol; plus-maps preserve the order and
/// minus-maps reverse it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CornishSpace {
    sig: Signature,
    poset: Poset,
    maps: Vec<Vec<usize>>,
}

impl CornishSpace {
    pub fn new(sig: Signature, poset: Poset, maps: Vec<Vec<usize>>) -> Result<Self> {
        let n = poset.len();
        if maps.len() != sig.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} maps for {} symbols",
                maps.len(),
                sig.len()
            )));
        }
        for (s, name, pol) in sig.symbols() {
            let map = &maps[s];
            if map.len() != n || map.iter().any(|&y| y >= n) {
                return Err(Error::InvalidMap(format!("`{name}` is not a total self-map")));
            }
            for (a, b) in poset.strict_pairs() {
                let ok = match pol {
                    Polarity::Plus => poset.leq(map[a], map[b]),
                    Polarity::Minus => poset.leq(map[b], map[a]),
                };
                if !ok {
                    let verb = match pol {
                        Polarity::Plus => "preserve",
                        Polarity::Minus => "reverse",
                    };
                    return Err(Error::Polarity {
                        symbol: name.to_string(),
                        detail: format!(
                            "{a} < {b} but {name}({a}) = {}, {name}({b}) = {} does not {verb} the order",
                            map[a], map[b]
                        ),
                    });
                }
            }
        }
        Ok(CornishSpace { sig, poset, maps })
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    pub fn map(&self, sym: usize) -> &[usize] {
        &self.maps[sym]
    }

    pub fn word_action(&self, w: &Word) -> Vec<usize> {
        w.action_table(&self.maps, self.len())
    }

    /// Disjoint union with the two injections; `other`'s points come second.
    pub fn disjoint_union(&self, other: &CornishSpace) -> Result<(CornishSpace, Vec<usize>, Vec<usize>)> {
        self.sig.require_same(&other.sig)?;
        let shift = self.len();
        let poset = self.poset.disjoint_union(&other.poset);
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(m1, m2)| m1.iter().copied().chain(m2.iter().map(|&y| y + shift)).collect())
            .collect();
        let space = CornishSpace::new(self.sig.clone(), poset, maps)?;
        let inj1 = (0..shift).collect();
        let inj2 = (shift..shift + other.len()).collect();
        Ok((space, inj1, inj2))
    }

    /// Least subset containing `seed` and closed under every map.
    pub fn closure(&self, seed: &BitSet) -> BitSet {
        let mut out = seed.clone();
        let mut stack = seed.to_vec();
        while let Some(x) = stack.pop() {
            for map in &self.maps {
                if out.insert(map[x]) {
                    stack.push(map[x]);
                }
            }
        }
        out
    }

    pub fn generated_substructure(&self, point: usize) -> BitSet {
        self.closure(&BitSet::from_indices(self.len(), [point]))
    }

    pub fn is_closed(&self, s: &BitSet) -> bool {
        s.iter().all(|x| self.maps.iter().all(|m| s.contains(m[x])))
    }

    /// Every closed subset, in canonical order. Closed subsets are exactly
    /// the unions of singly generated ones.
    pub fn substructures(&self, cap: usize) -> Result<Vec<BitSet>> {
        let n = self.len();
        let principals: Vec<BitSet> = {
            let set: HashSet<BitSet> = (0..n).map(|x| self.generated_substructure(x)).collect();
            let mut v: Vec<_> = set.into_iter().collect();
            v.sort();
            v
        };
        let empty = BitSet::new(n);
        let mut seen: HashSet<BitSet> = HashSet::from([empty.clone()]);
        let mut queue = vec![empty];
        while let Some(s) = queue.pop() {
            for p in &principals {
                if p.is_subset(&s) {
                    continue;
                }
                let t = s.union(p);
                if !seen.contains(&t) {
                    if seen.len() >= cap {
                        return Err(Error::guard("substructures", cap, seen.len() + 1));
                    }
                    seen.insert(t.clone());
                    queue.push(t);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// True iff every point generates the whole space (so the only closed
    /// subsets are `∅` and the space itself).
    pub fn has_no_proper_substructure(&self) -> bool {
        (0..self.len()).all(|x| self.generated_substructure(x).is_full())
    }

    /// The closed subset as a space in its own right, with the inclusion.
    pub fn subspace(&self, members: &BitSet) -> Result<(CornishSpace, Vec<usize>)> {
        if !self.is_closed(members) {
            return Err(Error::InvalidArgument("subset is not closed under the maps".into()));
        }
        let (poset, incl) = self.poset.restrict(members);
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &x) in incl.iter().enumerate() {
            pos[x] = i;
        }
        let maps = self
            .maps
            .iter()
            .map(|m| incl.iter().map(|&x| pos[m[x]]).collect())
            .collect();
        Ok((CornishSpace::new(self.sig.clone(), poset, maps)?, incl))
    }

    /// Isomorphism of Cornish spaces: an order-isomorphism commuting with
    /// every map. First such bijection in lexicographic order.
    pub fn isomorphism_to(&self, other: &CornishSpace, limit: usize) -> Result<Option<Vec<usize>>> {
        if self.sig != other.sig {
            return Ok(None);
        }
        find_isomorphism(&self.poset, &other.poset, limit, |img, k| {
            self.maps.iter().zip(&other.maps).all(|(m, m2)| {
                (0..=k).all(|i| {
                    let fi = m[i];
                    (i != k && fi != k) || fi > k || img[fi] == m2[img[i]]
                })
            })
        })
    }

    /// The orbit of `start` under the word's action.
    pub fn orbit(&self, start: usize, w: &Word) -> Orbit {
        let act = self.word_action(w);
        orbit_of(&act, start)
    }

    /// Union of all odd cycles of the word's action.
    pub fn odd_cycle_union(&self, w: &Word) -> BitSet {
        let act = self.word_action(w);
        let mut out = BitSet::new(self.len());
        for x in 0..self.len() {
            let o = orbit_of(&act, x);
            if o.is_odd() {
                out.union_with(&BitSet::from_indices(self.len(), o.cycle.iter().copied()));
            }
        }
        out
    }

    /// Checks that the odd cycles of a minus-polarity word form an antichain.
    /// A `false` result falsifies a lemma and is reported as an assertion
    /// failure.
    pub fn odd_cycle_union_antichain_check(&self, w: &Word) -> Result<bool> {
        if w.polarity(&self.sig) != Polarity::Minus {
            return Err(Error::Polarity {
                symbol: w.display(&self.sig).to_string(),
                detail: "the word must have minus polarity".into(),
            });
        }
        let union = self.odd_cycle_union(w);
        let ok = is_antichain(&self.poset, &union);
        ensure!(ok, "odd cycles {union:?} of an order-reversing map are not an antichain");
        Ok(ok)
    }
}

/// The orbit `a, t(a), t²(a), …`: the first `tail` points are visited once,
/// then `cycle` repeats forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub tail: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Orbit {
    pub fn tail_length(&self) -> usize {
        self.tail.len()
    }

    pub fn cycle_length(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_odd(&self) -> bool {
        self.cycle.len() % 2 == 1
    }
}

pub(crate) fn orbit_of(act: &[usize], start: usize) -> Orbit {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut seq = Vec::new();
    let mut x = start;
    while !seen.contains_key(&x) {
        seen.insert(x, seq.len());
        seq.push(x);
        x = act[x];
    }
    let n = seen[&x];
    let cycle = seq.split_off(n);
    Orbit { tail: seq, cycle }
}

/// An order-preserving map between spaces of the same signature that
/// commutes with every map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpaceMorphism {
    img: Vec<usize>,
}

impl SpaceMorphism {
    pub fn new(dom: &CornishSpace, cod: &CornishSpace, img: Vec<usize>) -> Result<Self> {
        dom.sig.require_same(&cod.sig)?;
        if img.len() != dom.len() || img.iter().any(|&y| y >= cod.len()) {
            return Err(Error::InvalidMap("table does not match the spaces".into()));
        }
        for (a, b) in dom.poset.strict_pairs() {
            if !cod.poset.leq(img[a], img[b]) {
                return Err(Error::InvalidMap(format!("not order-preserving at {a} < {b}")));
            }
        }
        for (s, name, _) in dom.sig.symbols() {
            for x in 0..dom.len() {
                if img[dom.maps[s][x]] != cod.maps[s][img[x]] {
                    return Err(Error::InvalidMap(format!(
                        "does not commute with `{name}` at point {x}"
                    )));
                }
            }
        }
        Ok(SpaceMorphism { img })
    }

    pub fn identity(x: &CornishSpace) -> Self {
        SpaceMorphism {
            img: (0..x.len()).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.img[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.img
    }

    pub fn image(&self, cod_len: usize) -> BitSet {
        BitSet::from_indices(cod_len, self.img.iter().copied())
    }

    /// `other ∘ self`
    pub fn then(&self, other: &SpaceMorphism) -> SpaceMorphism {
        SpaceMorphism {
            img: self.img.iter().map(|&y| other.img[y]).collect(),
        }
    }

    /// Splits the morphism into a surjection onto its image (a closed
    /// subspace of the codomain) followed by the inclusion.
    pub fn factorize(&self, cod: &CornishSpace) -> Result<Factorization> {
        let image = self.image(cod.len());
        ensure!(cod.is_closed(&image), "image of a morphism is not closed");
        let (space, inclusion) = cod.subspace(&image)?;
        let mut pos = vec![usize::MAX; cod.len()];
        for (i, &x) in inclusion.iter().enumerate() {
            pos[x] = i;
        }
        let surjection: Vec<usize> = self.img.iter().map(|&y| pos[y]).collect();
        ensure!(
            surjection.iter().map(|&i| inclusion[i]).eq(self.img.iter().copied()),
            "factorisation does not compose to the morphism"
        );
        Ok(Factorization {
            image: space,
            surjection,
            inclusion,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub image: CornishSpace,
    /// Domain point to image point.
    pub surjection: Vec<usize>,
    /// Image point to codomain point.
    pub inclusion: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(m: usize) -> CornishSpace {
        CornishSpace::new(
            Signature::ockham(),
            Poset::antichain(m),
            vec![(0..m).map(|i| (i + 1) % m).collect()],
        )
        .unwrap()
    }

    fn y2() -> CornishSpace {
        CornishSpace::new(
            Signature::parse("f+ g-").unwrap(),
            Poset::chain(2),
            vec![vec![1, 1], vec![1, 0]],
        )
        .unwrap()
    }

    #[test]
    fn polarity_is_enforced() {
        let err = CornishSpace::new(Signature::ockham(), Poset::chain(2), vec![vec![0, 1]])
            .unwrap_err();
        assert!(matches!(err, Error::Polarity { .. }));
        let sig = Signature::parse("f+").unwrap();
        assert!(CornishSpace::new(sig, Poset::chain(2), vec![vec![1, 0]]).is_err());
    }

    #[test]
    fn orbits() {
        let g = Word::letter(0);
        let c3 = cycle(3);
        let o = c3.orbit(0, &g);
        assert_eq!((o.tail_length(), o.cycle_length(), o.is_odd()), (0, 3, true));
        let o2 = cycle(2).orbit(0, &g);
        assert_eq!(o2.cycle_length(), 2);
        assert!(!o2.is_odd());
        let id = c3.orbit(1, &Word::empty());
        assert_eq!((id.tail_length(), id.is_odd()), (0, true));
        assert_eq!(id.cycle, vec![1]);
        let f = Word::letter(0);
        let of = y2().orbit(0, &f);
        assert_eq!((of.tail, of.cycle), (vec![0], vec![1]));
    }

    #[test]
    fn odd_cycles_form_antichains() {
        let g = Word::letter(0);
        assert!(cycle(3).odd_cycle_union_antichain_check(&g).unwrap());
        assert_eq!(cycle(3).odd_cycle_union(&g), BitSet::full(3));
        let y3 = CornishSpace::new(Signature::ockham(), Poset::chain(3), vec![vec![2, 1, 0]])
            .unwrap();
        assert_eq!(y3.odd_cycle_union(&g), BitSet::from_indices(3, [1]));
        assert!(y3.odd_cycle_union_antichain_check(&g).unwrap());
        assert!(y3.odd_cycle_union_antichain_check(&Word::empty()).is_err());
    }

    #[test]
    fn substructure_lattices() {
        assert_eq!(cycle(3).substructures(64).unwrap().len(), 2);
        let ident = CornishSpace::new(
            Signature::parse("f-").unwrap(),
            Poset::antichain(2),
            vec![vec![0, 1]],
        )
        .unwrap();
        assert_eq!(ident.substructures(64).unwrap().len(), 4);
        assert_eq!(y2().substructures(64).unwrap(), vec![BitSet::new(2), BitSet::full(2)]);
        assert!(y2().has_no_proper_substructure());
        assert!(!ident.has_no_proper_substructure());
    }

    #[test]
    fn disjoint_unions_and_isomorphisms() {
        let c1 = cycle(1);
        let (u, i1, i2) = c1.disjoint_union(&c1).unwrap();
        assert_eq!(u.map(0), &[0, 1]);
        assert_eq!((i1, i2), (vec![0], vec![1]));
        let empty = CornishSpace::new(Signature::ockham(), Poset::antichain(0), vec![vec![]]).unwrap();
        assert_eq!(c1.disjoint_union(&empty).unwrap().0, c1);
        assert!(c1.disjoint_union(&y2()).is_err());
        let c3 = cycle(3);
        assert_eq!(c3.isomorphism_to(&c3, 12).unwrap(), Some(vec![0, 1, 2]));
        let c3_rev = CornishSpace::new(Signature::ockham(), Poset::antichain(3), vec![vec![2, 0, 1]])
            .unwrap();
        let iso = c3.isomorphism_to(&c3_rev, 12).unwrap().unwrap();
        SpaceMorphism::new(&c3, &c3_rev, iso).unwrap();
        let three_fixed =
            CornishSpace::new(Signature::ockham(), Poset::antichain(3), vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(c3.isomorphism_to(&three_fixed, 12).unwrap(), None);
    }

    #[test]
    fn factorisation_of_constant_morphism() {
        let y3 = CornishSpace::new(Signature::ockham(), Poset::chain(3), vec![vec![2, 1, 0]])
            .unwrap();
        let c2 = cycle(2);
        let phi = SpaceMorphism::new(&c2, &y3, vec![1, 1]).unwrap();
        let fac = phi.factorize(&y3).unwrap();
        assert_eq!(fac.inclusion, vec![1]);
        assert_eq!(fac.surjection, vec![0, 0]);
        let id = SpaceMorphism::identity(&y3).factorize(&y3).unwrap();
        assert_eq!(id.inclusion, vec![0, 1, 2]);
    }
}
