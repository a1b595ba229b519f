//! Formula corpora: exhaustive enumeration of small formulas and seeded
//! random generation, for systematic cross-engine testing.

use crate::formula::Formula;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;

fn literals(atoms: usize) -> Vec<Formula> {
    let mut out = Vec::new();
    for i in 1..=atoms {
        out.push(Formula::Atom(format!("p{i}")));
        out.push(Formula::NegAtom(format!("p{i}")));
    }
    out
}

/// Every formula over atoms `p1..p<atoms>` whose connective height is at
/// most `height` (literals have height 0), in a deterministic order.
///
/// Grows very fast: 4 for two atoms at height 0, 44 at height 1, 3964 at
/// height 2.
pub fn enumerate_nnf(atoms: usize, height: usize) -> Vec<Formula> {
    let mut level: BTreeSet<Formula> = literals(atoms).into_iter().collect();
    for _ in 0..height {
        let mut next = level.clone();
        for a in &level {
            next.insert(Formula::Box_(Box::new(a.clone())));
            next.insert(Formula::Dia(Box::new(a.clone())));
        }
        for a in &level {
            for b in &level {
                next.insert(Formula::And(Box::new(a.clone()), Box::new(b.clone())));
                next.insert(Formula::Or(Box::new(a.clone()), Box::new(b.clone())));
            }
        }
        level = next;
    }
    level.into_iter().collect()
}

fn random_nnf_into(rng: &mut StdRng, atoms: usize, depth: usize) -> Formula {
    let literal = |rng: &mut StdRng| {
        let name = format!("p{}", rng.gen_range(1..=atoms));
        if rng.gen_bool(0.5) {
            Formula::Atom(name)
        } else {
            Formula::NegAtom(name)
        }
    };
    if depth == 0 {
        return literal(rng);
    }
    // literal-heavy draw: half the nodes close off, so the propositional
    // block inside each world stays small (unrestricted saturation is
    // exponential in it) while modal chains still reach the depth cap
    match rng.gen_range(0..8) {
        0 => Formula::And(
            Box::new(random_nnf_into(rng, atoms, depth - 1)),
            Box::new(random_nnf_into(rng, atoms, depth - 1)),
        ),
        1 => Formula::Or(
            Box::new(random_nnf_into(rng, atoms, depth - 1)),
            Box::new(random_nnf_into(rng, atoms, depth - 1)),
        ),
        2 => Formula::Box_(Box::new(random_nnf_into(rng, atoms, depth - 1))),
        3 => Formula::Dia(Box::new(random_nnf_into(rng, atoms, depth - 1))),
        _ => literal(rng),
    }
}

/// `count` formulas over `p1..p<atoms>` of connective depth at most
/// `depth`, drawn deterministically from `seed`.
pub fn random_corpus(seed: u64, count: usize, atoms: usize, depth: usize) -> Vec<Formula> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_nnf_into(&mut rng, atoms, depth))
        .collect()
}

/// `count` formula pairs (input, global axiom) whose sizes sum to at most
/// `max_combined`, drawn deterministically from `seed` by rejection.
pub fn random_pair_corpus(
    seed: u64,
    count: usize,
    atoms: usize,
    depth: usize,
    max_combined: usize,
) -> Vec<(Formula, Formula)> {
    assert!(max_combined >= 2, "a pair of literals already has size 2");
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g = random_nnf_into(&mut rng, atoms, depth);
        let h = random_nnf_into(&mut rng, atoms, depth);
        if g.size() + h.size() <= max_combined {
            out.push((g, h));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn single_atom_base_level() {
        let fs = enumerate_nnf(1, 0);
        assert_eq!(
            fs,
            vec![Formula::Atom("p1".into()), Formula::NegAtom("p1".into())]
        );
    }

    #[test]
    fn enumeration_counts() {
        // at height 1 over two atoms: 4 literals, 8 modal wrappers, 2*4*4
        // binary combinations; at height 2 each new formula has a
        // height-exactly-1 part: 2*40 modal, 2*(44*44 - 4*4) binary
        assert_eq!(enumerate_nnf(2, 0).len(), 4);
        assert_eq!(enumerate_nnf(2, 1).len(), 44);
        assert_eq!(enumerate_nnf(2, 2).len(), 3964);
        assert_eq!(enumerate_nnf(1, 1).len(), 14);
    }

    #[test]
    fn enumeration_is_duplicate_free_and_bounded() {
        let fs = enumerate_nnf(2, 2);
        let distinct: BTreeSet<&Formula> = fs.iter().collect();
        assert_eq!(distinct.len(), fs.len());
        assert!(fs.iter().all(|f| f.size() < 2usize.pow(3)));
        // height grows by at most one connective level per round
        let smaller: BTreeSet<Formula> = enumerate_nnf(2, 1).into_iter().collect();
        assert!(smaller.iter().all(|f| distinct.contains(f)));
    }

    #[test]
    fn random_corpus_is_deterministic() {
        let a = random_corpus(7, 50, 3, 4);
        let b = random_corpus(7, 50, 3, 4);
        assert_eq!(a, b);
        let c = random_corpus(8, 50, 3, 4);
        assert_ne!(a, c);
        assert_eq!(a.len(), 50);
        assert!(a.iter().all(|f| f.size() < 2usize.pow(5)));
    }

    #[test]
    fn random_corpus_mentions_only_requested_atoms() {
        fn atoms_of(f: &Formula, out: &mut BTreeSet<String>) {
            match f {
                Formula::Atom(a) | Formula::NegAtom(a) => {
                    out.insert(a.clone());
                }
                Formula::And(a, b) | Formula::Or(a, b) => {
                    atoms_of(a, out);
                    atoms_of(b, out);
                }
                Formula::Box_(a) | Formula::Dia(a) => atoms_of(a, out),
            }
        }
        let mut seen = BTreeSet::new();
        for f in random_corpus(3, 200, 2, 3) {
            atoms_of(&f, &mut seen);
        }
        assert_eq!(seen, BTreeSet::from(["p1".to_string(), "p2".to_string()]));
    }

    #[test]
    fn pair_corpus_respects_the_combined_bound() {
        let pairs = random_pair_corpus(11, 40, 2, 2, 10);
        assert_eq!(pairs.len(), 40);
        for (g, h) in &pairs {
            assert!(g.size() + h.size() <= 10);
        }
        assert_eq!(pairs, random_pair_corpus(11, 40, 2, 2, 10));
    }
}
