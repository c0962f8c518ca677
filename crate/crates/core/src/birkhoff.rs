//! Finite Birkhoff duality between bounded distributive lattices and posets.
//!
//! `H` sends a lattice to the poset of its prime filters (equivalently, its
//! homomorphisms onto the two-element lattice) ordered by inclusion. `K`
//! sends a poset to the lattice of its up-sets. Both act contravariantly on
//! morphisms, and the evaluation maps `e: A → KH(A)` and `ε: X → HK(X)` are
//! isomorphisms.

use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::error::{ensure, Error, Result};
use crate::guards::Guards;
use crate::order::{all_up_sets, MonotoneMap, Poset};

/// A bounded distributive lattice stored as full operation tables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DistLattice {
    order: Poset,
    join: Vec<usize>,
    meet: Vec<usize>,
    bot: usize,
    top: usize,
    rank: Vec<usize>,
}

impl DistLattice {
    /// Computes joins and meets from the order and checks that the result is
    /// a bounded distributive lattice.
    pub fn from_poset(order: Poset) -> Result<Self> {
        let n = order.len();
        if n == 0 {
            return Err(Error::NotLattice("a lattice needs at least one element".into()));
        }
        let up_len: Vec<usize> = (0..n).map(|a| order.up(a).len()).collect();
        let down_len: Vec<usize> = (0..n).map(|a| order.down(a).len()).collect();
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let uppers = order.up(a).intersection(order.up(b));
                let lub = uppers.iter().find(|&c| up_len[c] == uppers.len());
                let lowers = order.down(a).intersection(order.down(b));
                let glb = lowers.iter().find(|&c| down_len[c] == lowers.len());
                let (Some(j), Some(m)) = (lub, glb) else {
                    return Err(Error::NotLattice(format!(
                        "elements {a} and {b} lack a least upper or greatest lower bound"
                    )));
                };
                join[a * n + b] = j;
                join[b * n + a] = j;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
            }
        }
        let lat = Self::from_parts(order, join, meet);
        lat.check_distributive()?;
        Ok(lat)
    }

    /// Validates explicit `n×n` join and meet tables (row-major).
    pub fn from_tables(n: usize, join: Vec<usize>, meet: Vec<usize>) -> Result<Self> {
        if join.len() != n * n || meet.len() != n * n {
            return Err(Error::NotLattice(format!("tables must have {} entries", n * n)));
        }
        if join.iter().chain(&meet).any(|&v| v >= n) {
            return Err(Error::NotLattice("table entry out of range".into()));
        }
        let order = Poset::from_relation(n, |a, b| join[a * n + b] == b)
            .map_err(|e| Error::NotLattice(format!("join table does not induce an order: {e}")))?;
        let lat = Self::from_poset(order)?;
        if lat.join != join || lat.meet != meet {
            return Err(Error::NotLattice(
                "tables are not the joins and meets of the order they induce".into(),
            ));
        }
        Ok(lat)
    }

    /// Assembles a lattice from tables already known to be correct.
    pub(crate) fn from_parts(order: Poset, join: Vec<usize>, meet: Vec<usize>) -> Self {
        let n = order.len();
        let bot = (0..n).find(|&a| order.down(a).len() == 1 && order.up(a).len() == n);
        let top = (0..n).find(|&a| order.up(a).len() == 1 && order.down(a).len() == n);
        let mut by_height: Vec<usize> = (0..n).collect();
        by_height.sort_by_key(|&a| order.down(a).len());
        let mut rank = vec![0; n];
        for &a in &by_height {
            rank[a] = order
                .down(a)
                .iter()
                .filter(|&b| b != a)
                .map(|b| rank[b] + 1)
                .max()
                .unwrap_or(0);
        }
        DistLattice {
            bot: bot.expect("lattice has a bottom"),
            top: top.expect("lattice has a top"),
            order,
            join,
            meet,
            rank,
        }
    }

    fn check_distributive(&self) -> Result<()> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for z in y + 1..n {
                    let lhs = self.meet(x, self.join(y, z));
                    let rhs = self.join(self.meet(x, y), self.meet(x, z));
                    if lhs != rhs {
                        return Err(Error::NotLattice(format!(
                            "distributive law fails at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Result<Self> {
        Self::from_poset(Poset::chain(n))
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order.leq(a, b)
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Length of the longest chain from the bottom to `a`.
    pub fn rank(&self, a: usize) -> usize {
        self.rank[a]
    }

    /// Elements with exactly one lower cover, in index order.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| {
                j != self.bot
                    && self
                        .order
                        .down(j)
                        .iter()
                        .filter(|&b| self.rank[b] + 1 == self.rank[j])
                        .count()
                        == 1
            })
            .collect()
    }

    /// Whether `chi` is the preimage of 1 under a bounded homomorphism onto
    /// the two-element lattice, i.e. a prime filter.
    pub fn is_prime_filter(&self, chi: &BitSet) -> bool {
        if !chi.contains(self.top) || chi.contains(self.bot) || !self.order.is_up_set(chi) {
            return false;
        }
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                chi.contains(self.meet(a, b)) == (chi.contains(a) && chi.contains(b))
                    && chi.contains(self.join(a, b)) == (chi.contains(a) || chi.contains(b))
            })
        })
    }
}

/// A bounded lattice homomorphism.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeHom {
    img: Vec<usize>,
    cod_len: usize,
}

impl LatticeHom {
    pub fn new(dom: &DistLattice, cod: &DistLattice, img: Vec<usize>) -> Result<Self> {
        if img.len() != dom.len() || img.iter().any(|&y| y >= cod.len()) {
            return Err(Error::InvalidMap("table does not match the lattices".into()));
        }
        if img[dom.bot()] != cod.bot() || img[dom.top()] != cod.top() {
            return Err(Error::InvalidMap("bounds are not preserved".into()));
        }
        for a in 0..dom.len() {
            for b in 0..dom.len() {
                if img[dom.join(a, b)] != cod.join(img[a], img[b])
                    || img[dom.meet(a, b)] != cod.meet(img[a], img[b])
                {
                    return Err(Error::InvalidMap(format!(
                        "join or meet not preserved at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(LatticeHom {
            img,
            cod_len: cod.len(),
        })
    }

    pub fn identity(a: &DistLattice) -> Self {
        LatticeHom {
            img: (0..a.len()).collect(),
            cod_len: a.len(),
        }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.img[a]
    }

    pub fn table(&self) -> &[usize] {
        &self.img
    }

    /// `other ∘ self`
    pub fn then(&self, other: &LatticeHom) -> LatticeHom {
        LatticeHom {
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

    /// Bijective homomorphisms between lattices are isomorphisms.
    pub fn is_isomorphism(&self) -> bool {
        self.img.len() == self.cod_len && self.is_injective()
    }
}

/// `K(X)`: the up-set lattice of a poset, together with the up-set each
/// element stands for. Elements are numbered in canonical up-set order, so
/// the empty set is element 0 and the full set is the last element.
#[derive(Clone, Debug)]
pub struct UpSetLattice {
    pub lattice: DistLattice,
    pub up_sets: Vec<BitSet>,
    index: HashMap<BitSet, usize>,
}

impl UpSetLattice {
    pub fn new(x: &Poset, guards: &Guards) -> Result<Self> {
        let cap = guards.up_sets.min(guards.lattice_elements);
        let up_sets = all_up_sets(x, cap).map_err(|e| match e {
            Error::GuardExceeded { actual, .. } if cap == guards.lattice_elements => {
                Error::guard("lattice_elements", cap, actual)
            }
            other => other,
        })?;
        let index: HashMap<BitSet, usize> =
            up_sets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let m = up_sets.len();
        let order_up: Vec<BitSet> = up_sets
            .iter()
            .map(|u| BitSet::from_indices(m, (0..m).filter(|&v| u.is_subset(&up_sets[v]))))
            .collect();
        let order = Poset::from_relation(m, |a, b| order_up[a].contains(b))?;
        let mut join = vec![0; m * m];
        let mut meet = vec![0; m * m];
        for a in 0..m {
            for b in a..m {
                let j = index[&up_sets[a].union(&up_sets[b])];
                let mt = index[&up_sets[a].intersection(&up_sets[b])];
                join[a * m + b] = j;
                join[b * m + a] = j;
                meet[a * m + b] = mt;
                meet[b * m + a] = mt;
            }
        }
        Ok(UpSetLattice {
            lattice: DistLattice::from_parts(order, join, meet),
            up_sets,
            index,
        })
    }

    pub fn element_of(&self, up_set: &BitSet) -> Option<usize> {
        self.index.get(up_set).copied()
    }
}

/// `H(A)`: the prime filters of a lattice ordered by inclusion, which is the
/// pointwise order on the corresponding homomorphisms into 2. Points are
/// numbered by the canonical order of their filters.
#[derive(Clone, Debug)]
pub struct PrimeFilterSpace {
    pub poset: Poset,
    pub filters: Vec<BitSet>,
    index: HashMap<BitSet, usize>,
}

impl PrimeFilterSpace {
    /// Uses the principal filters of join-irreducible elements.
    pub fn new(a: &DistLattice) -> Self {
        let filters: Vec<BitSet> = a
            .join_irreducibles()
            .into_iter()
            .map(|j| a.order().up(j).clone())
            .collect();
        Self::from_filters(filters)
    }

    fn from_filters(mut filters: Vec<BitSet>) -> Self {
        filters.sort();
        let k = filters.len();
        let poset = Poset::from_relation(k, |p, q| filters[p].is_subset(&filters[q]))
            .expect("inclusion is a partial order");
        let index = filters.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        PrimeFilterSpace {
            poset,
            filters,
            index,
        }
    }

    pub fn point_of(&self, filter: &BitSet) -> Option<usize> {
        self.index.get(filter).copied()
    }
}

/// Every homomorphism onto 2 found by testing all `2^n` characteristic
/// functions, returned as sorted prime filters. Only for `n ≤ limit`.
pub fn prime_filters_brute_force(a: &DistLattice, limit: usize) -> Result<Vec<BitSet>> {
    let n = a.len();
    if n > limit.min(24) {
        return Err(Error::guard("hom_brute_force", limit.min(24), n));
    }
    let mut out: Vec<BitSet> = (0u64..1 << n)
        .map(|bits| BitSet::from_bits(n, bits))
        .filter(|chi| a.is_prime_filter(chi))
        .collect();
    out.sort();
    Ok(out)
}

/// `H(φ)`: for `φ: A → B`, the map `H(B) → H(A)` sending a prime filter to
/// its preimage under `φ`.
pub fn h_mor(
    phi: &LatticeHom,
    dom_dual: &PrimeFilterSpace,
    cod_dual: &PrimeFilterSpace,
) -> Result<MonotoneMap> {
    let img = cod_dual
        .filters
        .iter()
        .map(|f| {
            let pre = f.preimage(phi.table());
            dom_dual.point_of(&pre).ok_or_else(|| {
                Error::Assertion("preimage of a prime filter is not prime".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    MonotoneMap::new(&cod_dual.poset, &dom_dual.poset, img)
}

/// `K(ψ)`: for `ψ: X → Y`, the homomorphism `K(Y) → K(X)` taking preimages.
pub fn k_mor(psi: &MonotoneMap, dom_k: &UpSetLattice, cod_k: &UpSetLattice) -> Result<LatticeHom> {
    let img = cod_k
        .up_sets
        .iter()
        .map(|u| {
            dom_k
                .element_of(&u.preimage(psi.table()))
                .ok_or_else(|| Error::Assertion("preimage of an up-set is not an up-set".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    LatticeHom::new(&cod_k.lattice, &dom_k.lattice, img)
}

/// `e_A: A → KH(A)`, `a ↦ { P ∈ H(A) : a ∈ P }`. Fails with an assertion
/// error if the result is not an isomorphism.
pub fn eval_e(
    a: &DistLattice,
    guards: &Guards,
) -> Result<(PrimeFilterSpace, UpSetLattice, LatticeHom)> {
    let h = PrimeFilterSpace::new(a);
    let kh = UpSetLattice::new(&h.poset, guards)?;
    let img = (0..a.len())
        .map(|x| {
            let members =
                BitSet::from_indices(h.filters.len(), (0..h.filters.len()).filter(|&p| h.filters[p].contains(x)));
            kh.element_of(&members)
                .ok_or_else(|| Error::Assertion("e_A(a) is not an up-set".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let e = LatticeHom::new(a, &kh.lattice, img)?;
    ensure!(e.is_isomorphism(), "e_A is not an isomorphism");
    Ok((h, kh, e))
}

/// `ε_X: X → HK(X)`, `x ↦ { U ∈ K(X) : x ∈ U }`. Fails with an assertion
/// error if the result is not an order-isomorphism.
pub fn eval_eps(
    x: &Poset,
    guards: &Guards,
) -> Result<(UpSetLattice, PrimeFilterSpace, MonotoneMap)> {
    let k = UpSetLattice::new(x, guards)?;
    let hk = PrimeFilterSpace::new(&k.lattice);
    let m = k.up_sets.len();
    let img = (0..x.len())
        .map(|p| {
            let filter = BitSet::from_indices(m, (0..m).filter(|&u| k.up_sets[u].contains(p)));
            hk.point_of(&filter)
                .ok_or_else(|| Error::Assertion("ε_X(x) is not a prime filter".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let eps = MonotoneMap::new(x, &hk.poset, img)?;
    ensure!(
        eps.is_surjective() && eps.is_order_embedding(x, &hk.poset),
        "ε_X is not an order-isomorphism"
    );
    Ok((k, hk, eps))
}

/// Whether `φ` and its dual `H(φ)` exchange surjectivity and embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransferReport {
    pub hom_surjective: bool,
    pub dual_order_embedding: bool,
    pub hom_injective: bool,
    pub dual_surjective: bool,
}

/// Computes both sides for `φ: dom → cod` and fails with an assertion error
/// unless `φ` surjective ⟺ `H(φ)` an order-embedding and `φ` injective ⟺
/// `H(φ)` surjective.
pub fn surjective_embedding_transfer(
    phi: &LatticeHom,
    dom: &DistLattice,
    cod: &DistLattice,
) -> Result<TransferReport> {
    let hd = PrimeFilterSpace::new(dom);
    let hc = PrimeFilterSpace::new(cod);
    let dual = h_mor(phi, &hd, &hc)?;
    let report = TransferReport {
        hom_surjective: phi.is_surjective(),
        dual_order_embedding: dual.is_order_embedding(&hc.poset, &hd.poset),
        hom_injective: phi.is_injective(),
        dual_surjective: dual.is_surjective(),
    };
    ensure!(
        report.hom_surjective == report.dual_order_embedding,
        "surjective homomorphism without embedding dual: {report:?}"
    );
    ensure!(
        report.hom_injective == report.dual_surjective,
        "injective homomorphism without surjective dual: {report:?}"
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boolean4() -> DistLattice {
        // 0 < a, b < 1 with a=1, b=2, 1=3
        DistLattice::from_poset(Poset::from_pairs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap())
            .unwrap()
    }

    #[test]
    fn rejects_non_distributive_and_non_lattices() {
        // M3
        let m3 = Poset::from_pairs(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
        assert!(matches!(DistLattice::from_poset(m3), Err(Error::NotLattice(_))));
        assert!(DistLattice::from_poset(Poset::antichain(2)).is_err());
    }

    #[test]
    fn tables_round_trip() {
        let b = boolean4();
        let again = DistLattice::from_tables(4, b.join.clone(), b.meet.clone()).unwrap();
        assert_eq!(again, b);
        let mut bad = b.join.clone();
        bad[1] = 2;
        assert!(DistLattice::from_tables(4, bad, b.meet.clone()).is_err());
    }

    #[test]
    fn dual_of_small_lattices() {
        let two = DistLattice::chain(2).unwrap();
        assert_eq!(PrimeFilterSpace::new(&two).poset.len(), 1);
        let three = DistLattice::chain(3).unwrap();
        let h = PrimeFilterSpace::new(&three);
        assert_eq!(h.filters, prime_filters_brute_force(&three, 12).unwrap());
        assert_eq!(h.poset.len(), 2);
        assert!(h.poset.comparable(0, 1));
        // {top} ⊂ {a, top}
        assert_eq!(h.filters[0], BitSet::from_indices(3, [2]));
        let hb = PrimeFilterSpace::new(&boolean4());
        assert_eq!(hb.filters, prime_filters_brute_force(&boolean4(), 12).unwrap());
        assert!(!hb.poset.comparable(0, 1));
    }

    #[test]
    fn up_set_lattices() {
        let g = Guards::default();
        assert_eq!(UpSetLattice::new(&Poset::antichain(0), &g).unwrap().lattice.len(), 1);
        let k2 = UpSetLattice::new(&Poset::chain(2), &g).unwrap();
        assert_eq!(k2.lattice.order(), DistLattice::chain(3).unwrap().order());
        let kb = UpSetLattice::new(&Poset::antichain(2), &g).unwrap();
        assert_eq!(kb.lattice, boolean4());
        let small = Guards {
            lattice_elements: 3,
            ..Guards::default()
        };
        assert!(UpSetLattice::new(&Poset::antichain(2), &small).unwrap_err().is_guard());
    }

    #[test]
    fn embedding_of_two_into_three_chain() {
        let two = DistLattice::chain(2).unwrap();
        let three = DistLattice::chain(3).unwrap();
        let phi = LatticeHom::new(&two, &three, vec![0, 2]).unwrap();
        let h2 = PrimeFilterSpace::new(&two);
        let h3 = PrimeFilterSpace::new(&three);
        let dual = h_mor(&phi, &h2, &h3).unwrap();
        assert_eq!(dual.table(), &[0, 0]);
        let rep = surjective_embedding_transfer(&phi, &two, &three).unwrap();
        assert!(rep.hom_injective && rep.dual_surjective);
        assert!(!rep.hom_surjective && !rep.dual_order_embedding);
    }

    #[test]
    fn surjection_of_three_chain_onto_two() {
        let two = DistLattice::chain(2).unwrap();
        let three = DistLattice::chain(3).unwrap();
        let phi = LatticeHom::new(&three, &two, vec![0, 1, 1]).unwrap();
        let rep = surjective_embedding_transfer(&phi, &three, &two).unwrap();
        assert_eq!(
            rep,
            TransferReport {
                hom_surjective: true,
                dual_order_embedding: true,
                hom_injective: false,
                dual_surjective: false
            }
        );
        let b = boolean4();
        let into_b = LatticeHom::new(&two, &b, vec![0, 3]).unwrap();
        let rep = surjective_embedding_transfer(&into_b, &two, &b).unwrap();
        assert!(rep.hom_injective && rep.dual_surjective);
    }

    #[test]
    fn k_of_constant_map() {
        let g = Guards::default();
        let x = Poset::chain(2);
        let y = Poset::antichain(2);
        let psi = MonotoneMap::new(&x, &y, vec![1, 1]).unwrap();
        let kx = UpSetLattice::new(&x, &g).unwrap();
        let ky = UpSetLattice::new(&y, &g).unwrap();
        let h = k_mor(&psi, &kx, &ky).unwrap();
        for (i, u) in ky.up_sets.iter().enumerate() {
            let expected = if u.contains(1) { BitSet::full(2) } else { BitSet::new(2) };
            assert_eq!(kx.up_sets[h.apply(i)], expected);
        }
    }

    #[test]
    fn evaluation_maps() {
        let g = Guards::default();
        let (_, kh, e) = eval_e(&DistLattice::chain(2).unwrap(), &g).unwrap();
        assert_eq!(kh.lattice.len(), 2);
        assert_eq!(e.table(), &[0, 1]);
        let three = DistLattice::chain(3).unwrap();
        let (_, kh, e) = eval_e(&three, &g).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(e.apply(three.join(a, b)), kh.lattice.join(e.apply(a), e.apply(b)));
            }
        }
        eval_eps(&Poset::antichain(2), &g).unwrap();
    }

    #[test]
    fn rank_and_join_irreducibles() {
        let b = boolean4();
        assert_eq!(b.join_irreducibles(), vec![1, 2]);
        assert_eq!((0..4).map(|a| b.rank(a)).collect::<Vec<_>>(), vec![0, 1, 1, 2]);
        assert_eq!(DistLattice::chain(4).unwrap().join_irreducibles(), vec![1, 2, 3]);
    }
}
