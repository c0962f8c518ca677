//! The acceptance suite: twelve exact checks over the built-in corpus, each
//! with a time limit.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::birkhoff::{eval_e, eval_eps, UpSetLattice};
use crate::cornish::{
    check_truncated_c, e_functor, eval_e_cornish, eval_eps_cornish, CornishAlgebra, CornishSpace,
    Signature, Word,
};
use crate::corpus;
use crate::ddp::{ddp_quasi_primal_family, ddp_simplicity_triple, DdpAlgebra};
use crate::duality_theorems::{b_of, canonical_pair, check_pair_criteria};
use crate::engine::{all_subuniverses, con_sub_duality_check, Product};
use crate::error::Result;
use crate::guards::Guards;
use crate::ockham::build_cm;
use crate::order::{extremal_profile, is_connected, posets_up_to_iso, Poset};
use crate::primality::{
    classify_product_subuniverses, even_cycle_witness, internal_sufficient,
    internal_sufficient_semiprimal, order_preserving_refutation, pixley_preservation_check,
    quasi_primal_pair, semi_primal, subuniverse_preservation_check, Outcome, PairCheck, TernaryOp,
    Witness,
};
use crate::text::{Document, Structure};

/// Seed for the random posets of criterion 10.
pub const RANDOM_SEED: u64 = 0x0dd_c7c1e;
pub const RANDOM_CASES: usize = 1000;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

impl CriterionResult {
    /// One line: `[PASS] 3 Ockham classification (0.41 s / 60 s): detail`.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({:.2} s / {} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed_ms as f64 / 1000.0,
            self.limit_ms / 1000,
            self.detail
        )
    }
}

struct Check {
    passed: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Result<Check> {
    Ok(Check {
        passed: true,
        detail: detail.into(),
    })
}

fn fail(detail: impl Into<String>) -> Result<Check> {
    Ok(Check {
        passed: false,
        detail: detail.into(),
    })
}

type CriterionFn = fn(&Guards) -> Result<Check>;

const CRITERIA: [(&str, u64, CriterionFn); 12] = [
    ("Duality round-trip", 10, duality_round_trip),
    ("Golden duals", 1, golden_duals),
    ("Ockham classification", 60, ockham_classification),
    ("Quasi-primal Cornish spaces", 30, quasi_primal_spaces),
    ("Semi-primal family", 10, semi_primal_family),
    ("Order-preserving refutation", 10, order_preserving),
    ("ddp equivalence", 120, ddp_equivalence),
    ("Subuniverse/pair bijection", 60, pair_bijection),
    ("Congruences and substructures", 10, con_sub),
    ("Odd-cycle antichain", 10, odd_cycle_antichain),
    ("Truncated word algebra", 10, truncated_words),
    ("Pixley preservation", 10, pixley),
];

pub const CRITERION_COUNT: usize = CRITERIA.len();

/// Runs criterion `id` (1-based). Errors count as failures.
pub fn run_criterion(id: usize, guards: &Guards) -> CriterionResult {
    let (title, limit_s, f) = CRITERIA[id - 1];
    let start = Instant::now();
    let outcome = f(guards);
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_s);
    let (mut passed, mut detail) = match outcome {
        Ok(c) => (c.passed, c.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if elapsed > limit {
        passed = false;
        detail = format!("over the time limit; {detail}");
    }
    CriterionResult {
        id,
        title,
        passed,
        detail,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.as_millis(),
    }
}

pub fn run_all(guards: &Guards) -> Vec<CriterionResult> {
    (1..=CRITERION_COUNT).map(|id| run_criterion(id, guards)).collect()
}

fn corpus_docs(guards: &Guards) -> Result<Vec<Document>> {
    corpus::all(guards)
}

fn corpus_algebras(guards: &Guards) -> Result<Vec<(String, CornishAlgebra)>> {
    Ok(corpus_docs(guards)?
        .into_iter()
        .filter_map(|d| match d.structure {
            Structure::Algebra(a) => Some((d.name, a)),
            _ => None,
        })
        .collect())
}

fn corpus_spaces(guards: &Guards) -> Result<Vec<(String, CornishSpace)>> {
    Ok(corpus_docs(guards)?
        .into_iter()
        .filter_map(|d| match d.structure {
            Structure::Space(x) => Some((d.name, x)),
            _ => None,
        })
        .collect())
}

fn space(name: &str, guards: &Guards) -> Result<CornishSpace> {
    Ok(corpus::get(name, guards)?
        .space()
        .expect("corpus entry is a space")
        .clone())
}

fn algebra(name: &str, guards: &Guards) -> Result<CornishAlgebra> {
    Ok(corpus::get(name, guards)?
        .algebra()
        .expect("corpus entry is an algebra")
        .clone())
}

fn duality_round_trip(guards: &Guards) -> Result<Check> {
    let mut posets = 0;
    for n in 0..=6 {
        for p in posets_up_to_iso(n)? {
            eval_eps(&p, guards)?;
            let k = UpSetLattice::new(&p, guards)?;
            eval_e(&k.lattice, guards)?;
            posets += 1;
        }
    }
    let (mut spaces, mut algebras) = (0, 0);
    for d in corpus_docs(guards)? {
        match &d.structure {
            Structure::Space(x) => {
                eval_eps_cornish(x, guards)?;
                spaces += 1;
            }
            Structure::Algebra(a) => {
                eval_e_cornish(a, guards)?;
                algebras += 1;
            }
            _ => {}
        }
    }
    pass(format!(
        "{posets} posets up to isomorphism, {spaces} spaces, {algebras} algebras"
    ))
}

fn golden_duals(guards: &Guards) -> Result<Check> {
    let mut mismatches = Vec::new();
    let rows = ["chain_f_plus", "chain_f_minus", "swap_f_plus", "swap_f_minus", "fixed_f_plus", "fixed_f_minus"];
    for row in rows {
        let computed = e_functor(&space(row, guards)?, guards)?.algebra;
        let expected = algebra(&format!("{row}_E"), guards)?;
        if computed != expected {
            mismatches.push(row);
        }
    }
    if mismatches.is_empty() {
        pass("6 of 6 duals match element for element")
    } else {
        fail(format!("mismatched rows: {mismatches:?}"))
    }
}

fn ockham_classification(guards: &Guards) -> Result<Check> {
    let mut problems = Vec::new();
    for m in [1, 3] {
        let a = e_functor(&build_cm(m)?, guards)?.algebra;
        if quasi_primal_pair(&a, &a, guards)?.outcome != Outcome::Yes {
            problems.push(format!("E(C{m}) is not yes"));
        }
    }
    for m in [2, 4] {
        let a = e_functor(&build_cm(m)?, guards)?.algebra;
        let n = a.len();
        let v = quasi_primal_pair(&a, &a, guards)?;
        let w = even_cycle_witness(m, guards)?;
        let pair_b = b_of(&w.pair, &e_functor(&w.pair.x1, guards)?, &e_functor(&w.pair.x2, guards)?, guards)?;
        let expected: Vec<(usize, usize)> = pair_b.iter().map(|x| (x / n, x % n)).collect();
        match v.witness {
            Some(Witness::BadSubuniverse { members, .. }) if v.outcome == Outcome::No => {
                if members != expected {
                    problems.push(format!("E(C{m}) witness differs from the even-cycle pair"));
                }
            }
            _ => problems.push(format!("E(C{m}) is not no with a subuniverse witness")),
        }
    }
    let g = Word::letter(0);
    for m in 1..=9 {
        let holds = internal_sufficient(&[build_cm(m)?], &g)?.is_yes();
        if holds != (m % 2 == 1) {
            problems.push(format!("orbit condition for C{m} is {holds}"));
        }
    }
    if problems.is_empty() {
        pass("C1, C3 yes; C2, C4 no with matching witness; orbit condition exactly for odd m ≤ 9")
    } else {
        fail(problems.join("; "))
    }
}

fn quasi_primal_spaces(guards: &Guards) -> Result<Check> {
    let names = ["X1", "X2", "X3"];
    let spaces: Vec<CornishSpace> = names.iter().map(|n| space(n, guards)).collect::<Result<_>>()?;
    let sig = spaces[0].sig().clone();
    let t = Word::parse(&sig, "f^2 g")?;
    let mut problems = Vec::new();
    if !internal_sufficient(&spaces, &t)?.is_yes() {
        problems.push("orbit condition fails for f^2 g".to_string());
    }
    let algs: Vec<CornishAlgebra> = spaces
        .iter()
        .map(|x| e_functor(x, guards).map(|e| e.algebra))
        .collect::<Result<_>>()?;
    let mut checked = Vec::new();
    for i in 0..algs.len() {
        for j in i..algs.len() {
            if algs[i].len() * algs[j].len() > guards.product {
                continue;
            }
            let v = quasi_primal_pair(&algs[i], &algs[j], guards)?;
            if v.outcome != Outcome::Yes {
                problems.push(format!("pair ({}, {}) is {:?}", names[i], names[j], v.outcome));
            }
            checked.push(format!("{}×{}", names[i], names[j]));
        }
        if order_preserving_refutation(&algs[i]).is_some() {
            problems.push(format!("refutation fires for {}", names[i]));
        }
    }
    if !checked.iter().any(|c| c == "X2×X2") {
        problems.push("X2×X2 was not checked".into());
    }
    if problems.is_empty() {
        pass(format!("orbit condition holds; brute force yes on {}", checked.join(", ")))
    } else {
        fail(problems.join("; "))
    }
}

fn semi_primal_family(guards: &Guards) -> Result<Check> {
    let mut problems = Vec::new();
    for (n, name) in [(2, "A2"), (3, "A3"), (4, "A4")] {
        let a = algebra(name, guards)?;
        let expected = e_functor(&space(&format!("Y{n}"), guards)?, guards)?.algebra;
        if a != expected {
            problems.push(format!("{name} differs from E(Y{n})"));
        }
        if a.len() != n + 1 {
            problems.push(format!("{name} has {} elements", a.len()));
        }
        let v = semi_primal(&a, None, guards)?;
        let brute = matches!(
            &v.certificate,
            Some(crate::primality::Certificate::Pairs { pairs, .. })
                if pairs.iter().all(|p| p.route == crate::primality::Route::BruteForce)
        );
        if !(v.is_yes() && brute) {
            problems.push(format!("{name} is not semi-primal by brute force"));
        }
        let y = space(&format!("Y{n}"), guards)?;
        let t = Word::from_letters(y.sig(), vec![0; n - 1])?;
        if !internal_sufficient_semiprimal(&[y], &t)?.is_yes() {
            problems.push(format!("constant-term condition fails for Y{n}"));
        }
    }
    if problems.is_empty() {
        pass("A2, A3, A4 semi-primal by brute force; f^(n-1) constant on Y2, Y3, Y4")
    } else {
        fail(problems.join("; "))
    }
}

fn order_preserving(guards: &Guards) -> Result<Check> {
    let mut problems = Vec::new();
    let mut count = 0;
    for (name, a) in corpus_algebras(guards)? {
        if a.sig().has_minus() || a.len() < 2 {
            continue;
        }
        count += 1;
        if order_preserving_refutation(&a).is_none() {
            problems.push(format!("no refutation for {name}"));
        }
        if a.len() * a.len() <= guards.product && quasi_primal_pair(&a, &a, guards)?.outcome != Outcome::No {
            problems.push(format!("brute force does not refute {name}"));
        }
    }
    if count == 0 {
        return fail("no plus-only algebras in the corpus");
    }
    if problems.is_empty() {
        pass(format!("{count} plus-only algebras refuted both ways"))
    } else {
        fail(problems.join("; "))
    }
}

fn ddp_equivalence(guards: &Guards) -> Result<Check> {
    let mut family: Vec<Poset> = Vec::new();
    let mut total = 0;
    for n in 1..=5 {
        for p in posets_up_to_iso(n)? {
            let t = ddp_simplicity_triple(&p, guards)?;
            total += 1;
            let k = UpSetLattice::new(&p, guards)?;
            if t.value && k.lattice.len() <= 16 {
                family.push(p);
            }
        }
    }
    let algs: Vec<DdpAlgebra> = family
        .iter()
        .map(|p| DdpAlgebra::of_poset(p, guards))
        .collect::<Result<_>>()?;
    let mut pairs = 0;
    for i in 0..algs.len() {
        for j in i..algs.len() {
            TernaryOp::median(algs[i].lattice())?;
            match classify_product_subuniverses(&algs[i], &algs[j], i == j, false, guards)? {
                PairCheck::Passed { .. } => pairs += 1,
                PairCheck::Failed { .. } => return fail(format!("pair ({i}, {j}) has a bad subuniverse")),
                PairCheck::Guard(g) => return fail(format!("pair ({i}, {j}) hit a guard: {g}")),
            }
        }
    }
    if !family.iter().all(|p| is_connected(p) && extremal_profile(p).all_extremal) {
        return fail("family member fails the order condition");
    }
    if !ddp_quasi_primal_family(&family, guards)?.is_yes() {
        return fail("family verdict is not yes");
    }
    pass(format!(
        "triples agree on {total} posets; {} qualifying posets, {pairs} pairs classified",
        family.len()
    ))
}

fn pair_bijection(guards: &Guards) -> Result<Check> {
    let names = ["C1", "C2", "Y2", "X2"];
    let spaces: Vec<CornishSpace> = names.iter().map(|n| space(n, guards)).collect::<Result<_>>()?;
    let duals: Vec<_> = spaces
        .iter()
        .map(|x| e_functor(x, guards))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = 0;
    let mut subs = 0;
    for i in 0..spaces.len() {
        for j in 0..spaces.len() {
            if spaces[i].sig() != spaces[j].sig() {
                continue;
            }
            pairs += 1;
            let prod = Product::new(&duals[i].algebra, &duals[j].algebra)?;
            for b in all_subuniverses(&prod, guards.product, guards.subuniverses)? {
                let pair = canonical_pair(&spaces[i], &spaces[j], &duals[i], &duals[j], &b, guards)?;
                if b_of(&pair, &duals[i], &duals[j], guards)? != b {
                    return fail(format!("round trip fails on {}×{}", names[i], names[j]));
                }
                check_pair_criteria(&pair, &duals[i], &duals[j], guards)?;
                subs += 1;
            }
        }
    }
    pass(format!("{pairs} ordered pairs, {subs} subuniverses round-tripped"))
}

fn con_sub(guards: &Guards) -> Result<Check> {
    let mut count = 0;
    for (name, a) in corpus_algebras(guards)? {
        if a.len() > 16 {
            continue;
        }
        let r = con_sub_duality_check(&a, guards)?;
        if !r.holds() {
            return fail(format!("fails on {name}"));
        }
        count += 1;
    }
    pass(format!("{count} algebras with at most 16 elements"))
}

/// A random poset on `n ≤ 8` points, naturally labelled.
pub fn random_poset(rng: &mut impl Rng, n: usize) -> Result<Poset> {
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(0.3) {
                pairs.push((a, b));
            }
        }
    }
    Poset::from_pairs(n, &pairs)
}

/// A random order-reversing self-map of a naturally labelled poset, built
/// point by point; restarts when the choices leave no candidate, falling
/// back to a constant map.
pub fn random_order_reversing(rng: &mut impl Rng, p: &Poset) -> Vec<usize> {
    let n = p.len();
    'attempt: for _ in 0..50 {
        let mut f: Vec<usize> = Vec::with_capacity(n);
        for x in 0..n {
            let candidates: Vec<usize> = (0..n)
                .filter(|&y| (0..x).all(|a| !p.lt(a, x) || p.leq(y, f[a])))
                .collect();
            if candidates.is_empty() {
                continue 'attempt;
            }
            f.push(candidates[rng.random_range(0..candidates.len())]);
        }
        return f;
    }
    vec![rng.random_range(0..n); n]
}

fn odd_cycle_antichain(_guards: &Guards) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let sig = Signature::ockham();
    let g = Word::letter(0);
    for case in 0..RANDOM_CASES {
        let n = rng.random_range(1..=8);
        let p = random_poset(&mut rng, n)?;
        let f = random_order_reversing(&mut rng, &p);
        let x = CornishSpace::new(sig.clone(), p, vec![f])?;
        if !x.odd_cycle_union_antichain_check(&g)? {
            return fail(format!("case {case} fails"));
        }
    }
    pass(format!("{RANDOM_CASES} random spaces, seed {RANDOM_SEED:#x}"))
}

fn truncated_words(guards: &Guards) -> Result<Check> {
    let mut count = 0;
    for (name, x) in corpus_spaces(guards)? {
        if x.sig().is_empty() {
            continue;
        }
        let r = check_truncated_c(&x, 4, guards)?;
        if !(r.separates && r.shift_compatible) {
            return fail(format!("fails on {name}: {r:?}"));
        }
        count += 1;
    }
    pass(format!("{count} spaces to depth 4"))
}

fn pixley(guards: &Guards) -> Result<Check> {
    let c1 = e_functor(&build_cm(1)?, guards)?.algebra;
    let c2 = e_functor(&build_cm(2)?, guards)?.algebra;
    let on_c1 = pixley_preservation_check(std::slice::from_ref(&c1), &[TernaryOp::discriminator(c1.len())], guards)?;
    let disc2 = [TernaryOp::discriminator(c2.len())];
    let on_c2 = pixley_preservation_check(std::slice::from_ref(&c2), &disc2, guards)?;
    let subs_c2 = subuniverse_preservation_check(std::slice::from_ref(&c2), &disc2, guards)?;
    let detail = format!(
        "E(C1): {} ({} graphs); E(C2): {} ({} graphs); E(C2) subuniverses preserved: {}",
        on_c1.holds, on_c1.relations_checked, on_c2.holds, on_c2.relations_checked, subs_c2.holds
    );
    if on_c1.holds && !on_c2.holds {
        pass(detail)
    } else {
        fail(format!("expected E(C1) true and E(C2) false; {detail}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_maps_reverse_the_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.random_range(1..=8);
            let p = random_poset(&mut rng, n).unwrap();
            let f = random_order_reversing(&mut rng, &p);
            assert!(CornishSpace::new(Signature::ockham(), p, vec![f]).is_ok());
        }
    }
}
