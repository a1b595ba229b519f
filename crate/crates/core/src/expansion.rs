//! Sets of paths and their propositional expansion.
//!
//! A [`Sequent`] is a set of path ids over one fixed table, stored as a
//! bitmask. The same representation serves as saturation sequent and as
//! automaton state. A set is *propositionally expanded* when every `&`-path
//! in it has both children present and every `|`-path has at least one;
//! [`expansions`] computes the finitely many minimal propositionally
//! expanded supersets of a seed by walking an expansion tree that branches
//! exactly at `|`-paths.

use crate::optimize::{is_compact, select_succ, GOrdering};
use crate::paths::{PathId, PathKind, PathTable};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::fmt;

/// A set of paths, bit-indexed by path id. Ordering and hashing rely on the
/// canonical representation (no trailing zero words).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Sequent {
    words: SmallVec<[u64; 1]>,
}

impl Sequent {
    pub fn empty() -> Sequent {
        Sequent::default()
    }

    pub fn singleton(id: PathId) -> Sequent {
        let mut s = Sequent::empty();
        s.insert(id);
        s
    }

    pub(crate) fn from_mask(mask: u64) -> Sequent {
        let mut s = Sequent::empty();
        if mask != 0 {
            s.words.push(mask);
        }
        s
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, id: PathId) {
        let (w, b) = (id.index() / 64, id.index() % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << b;
    }

    pub fn remove(&mut self, id: PathId) {
        let (w, b) = (id.index() / 64, id.index() % 64);
        if w < self.words.len() {
            self.words[w] &= !(1 << b);
            self.trim();
        }
    }

    pub fn contains(&self, id: PathId) -> bool {
        let (w, b) = (id.index() / 64, id.index() % 64);
        w < self.words.len() && self.words[w] & (1 << b) != 0
    }

    /// Copy with `id` added.
    pub fn with(&self, id: PathId) -> Sequent {
        let mut s = self.clone();
        s.insert(id);
        s
    }

    /// Copy with `id` removed.
    pub fn without(&self, id: PathId) -> Sequent {
        let mut s = self.clone();
        s.remove(id);
        s
    }

    pub fn union(&self, other: &Sequent) -> Sequent {
        let (mut s, small) = if self.words.len() >= other.words.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (w, x) in small.words.iter().enumerate() {
            s.words[w] |= x;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_subset_of(&self, other: &Sequent) -> bool {
        if self.words.len() > other.words.len() {
            return false;
        }
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &Sequent) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    /// Ids in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = PathId> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut rest = bits;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(PathId::new(w * 64 + b))
            })
        })
    }

    pub fn from_ids<I: IntoIterator<Item = PathId>>(ids: I) -> Sequent {
        let mut s = Sequent::empty();
        for id in ids {
            s.insert(id);
        }
        s
    }
}

impl Ord for Sequent {
    // Lexicographic on the ascending id sequence, so `{0}` < `{0,1}` < `{1}`.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(&y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }
}

impl PartialOrd for Sequent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{{")?;
        for (i, id) in self.iter().enumerate() {
            if i > 0 {
                write!(out, ",")?;
            }
            write!(out, "{id}")?;
        }
        write!(out, "}}")
    }
}

/// Does the set address both `p` and `~p` for some atom?
pub fn contains_clash(s: &Sequent, t: &PathTable) -> bool {
    if t.atom_count() <= 128 {
        let (mut pos, mut neg) = (0u128, 0u128);
        for id in s.iter() {
            if let Some((atom, positive)) = t.literal_raw(id) {
                let bit = 1u128 << atom;
                if positive {
                    if neg & bit != 0 {
                        return true;
                    }
                    pos |= bit;
                } else {
                    if pos & bit != 0 {
                        return true;
                    }
                    neg |= bit;
                }
            }
        }
        false
    } else {
        let lits: Vec<_> = s.iter().filter_map(|id| t.literal_raw(id)).collect();
        lits.iter().any(|&(a, p)| lits.contains(&(a, !p)))
    }
}

/// Propositionally expanded: every `&`-path in `s` has both children in
/// `s`, every `|`-path has at least one. With a global axiom, a nonempty
/// set must additionally contain the axiom root.
pub fn is_prop_expanded(s: &Sequent, t: &PathTable) -> bool {
    if let Some(h) = t.root_h() {
        if !s.is_empty() && !s.contains(h) {
            return false;
        }
    }
    s.iter().all(|id| match t.kind(id) {
        PathKind::And => {
            let (l, r) = t.pair_children(id).unwrap();
            s.contains(l) && s.contains(r)
        }
        PathKind::Or => {
            let (l, r) = t.pair_children(id).unwrap();
            s.contains(l) || s.contains(r)
        }
        _ => true,
    })
}

/// Seed for the `i`-th successor of a state: the `<>`-child of the `i`-th
/// `<>`-path if that path is present (empty otherwise), plus the
/// `[]`-children of all `[]`-paths in `s`.
///
/// `i` is 1-based; panics when it is outside `1..=arity`.
pub fn box_seed(s: &Sequent, i: usize, t: &PathTable) -> Sequent {
    assert!(
        i >= 1 && i <= t.arity(),
        "diamond index {i} out of range 1..={}",
        t.arity()
    );
    let dia = t.diamonds()[i - 1];
    if !s.contains(dia) {
        return Sequent::empty();
    }
    let mut out = Sequent::singleton(t.modal_child(dia).unwrap());
    for id in s.iter() {
        if t.kind(id) == PathKind::Box {
            out.insert(t.modal_child(id).unwrap());
        }
    }
    out
}

/// Result of [`expansions`]: the minimal propositionally expanded
/// supersets of the seed, plus how many nodes of the expansion tree failed
/// the compactness check (only counted when an ordering was supplied).
#[derive(Debug, Clone)]
pub struct Expansions {
    pub sets: Vec<Sequent>,
    pub compact_violations: usize,
}

/// All minimal propositionally expanded supersets of `seed`, computed by
/// the expansion tree: `&`-paths add both children, `|`-paths branch on the
/// two children. Duplicate leaves are merged; the empty seed expands to
/// `{∅}`. With a global axiom, the axiom root is added to any nonempty
/// seed first.
///
/// When `ordering` is given, the path to expand next is chosen by
/// [`select_succ`] and every tree node is checked for compactness;
/// otherwise the unexpanded path with the lowest id is taken.
pub fn expansions(seed: &Sequent, t: &PathTable, ordering: Option<&GOrdering>) -> Expansions {
    let mut start = seed.clone();
    if let Some(h) = t.root_h() {
        if !start.is_empty() {
            start.insert(h);
        }
    }
    let mut leaves = std::collections::BTreeSet::new();
    let mut compact_violations = 0;
    let mut stack = vec![start];
    while let Some(node) = stack.pop() {
        if let Some(o) = ordering {
            if !is_compact(&node, o, t) {
                compact_violations += 1;
            }
        }
        let pick = match ordering {
            Some(o) => select_succ(&node, o, t),
            None => lowest_unexpanded(&node, t),
        };
        match pick {
            None => {
                debug_assert!(is_prop_expanded(&node, t));
                leaves.insert(node);
            }
            Some(id) => {
                let (l, r) = t.pair_children(id).unwrap();
                match t.kind(id) {
                    PathKind::And => {
                        let mut next = node;
                        next.insert(l);
                        next.insert(r);
                        stack.push(next);
                    }
                    PathKind::Or => {
                        stack.push(node.with(l));
                        stack.push(node.with(r));
                    }
                    _ => unreachable!("expansion picked a non-&/| path"),
                }
            }
        }
    }
    Expansions {
        sets: leaves.into_iter().collect(),
        compact_violations,
    }
}

/// The unexpanded `&`/`|`-path of `s` with the smallest id, if any.
pub(crate) fn lowest_unexpanded(s: &Sequent, t: &PathTable) -> Option<PathId> {
    s.iter().find(|&id| is_unexpanded(s, id, t))
}

/// Is `id` an `&`/`|`-path of `s` whose expansion condition is not yet met?
pub(crate) fn is_unexpanded(s: &Sequent, id: PathId, t: &PathTable) -> bool {
    match t.kind(id) {
        PathKind::And => {
            let (l, r) = t.pair_children(id).unwrap();
            !(s.contains(l) && s.contains(r))
        }
        PathKind::Or => {
            let (l, r) = t.pair_children(id).unwrap();
            !(s.contains(l) || s.contains(r))
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_nnf;

    fn g_star_table() -> PathTable {
        PathTable::build(&parse_nnf("<>~p1 & ([]p2 & [](~p2 | p1))").unwrap(), None)
    }

    fn seq(t: &PathTable, words: &[&str]) -> Sequent {
        Sequent::from_ids(
            words
                .iter()
                .map(|w| t.find(w).unwrap_or_else(|| panic!("no path for word {w}"))),
        )
    }

    #[test]
    fn sequent_set_operations() {
        let t = g_star_table();
        let a = seq(&t, &["e", "e.al"]);
        let b = seq(&t, &["e.al", "e.ar"]);
        assert_eq!(a.len(), 2);
        assert!(a.contains(t.find("e").unwrap()));
        assert!(!a.contains(t.find("e.ar").unwrap()));
        assert_eq!(a.union(&b).len(), 3);
        assert!(a.is_subset_of(&a.union(&b)));
        assert!(!a.is_subset_of(&b));
        assert!(a.intersects(&b));
        assert_eq!(a.without(t.find("e").unwrap()), seq(&t, &["e.al"]));
        assert_eq!(Sequent::empty().len(), 0);
        assert!(Sequent::empty().is_subset_of(&a));
    }

    #[test]
    fn sequent_removal_keeps_representation_canonical() {
        let mut s = Sequent::singleton(PathId::new(70));
        s.insert(PathId::new(3));
        s.remove(PathId::new(70));
        assert_eq!(s, Sequent::singleton(PathId::new(3)));
        let mut hasher_input = std::collections::HashSet::new();
        hasher_input.insert(s);
        assert!(hasher_input.contains(&Sequent::singleton(PathId::new(3))));
    }

    #[test]
    fn sequent_order_is_lexicographic_on_ids() {
        let s = |ids: &[usize]| Sequent::from_ids(ids.iter().map(|&i| PathId::new(i)));
        assert!(s(&[0]) < s(&[0, 1]));
        assert!(s(&[0, 1]) < s(&[1]));
        assert!(s(&[]) < s(&[0]));
        assert_eq!(s(&[2, 1]), s(&[1, 2]));
    }

    #[test]
    fn sequent_displays_sorted_ids() {
        let s = Sequent::from_ids([5, 0, 2].map(PathId::new));
        assert_eq!(s.to_string(), "{0,2,5}");
        assert_eq!(Sequent::empty().to_string(), "{}");
    }

    #[test]
    fn clash_detection_on_running_example() {
        let t = g_star_table();
        // p2 at e.ar.al.box against ~p2 at e.ar.ar.box.ol
        assert!(contains_clash(
            &seq(&t, &["e.ar.al.box", "e.ar.ar.box.ol"]),
            &t
        ));
        // ~p1 at e.al.dia against p1 at e.ar.ar.box.or
        assert!(contains_clash(
            &seq(&t, &["e.al.dia", "e.ar.ar.box.or"]),
            &t
        ));
        // same-polarity and non-literal sets are clash-free
        assert!(!contains_clash(
            &seq(&t, &["e.al.dia", "e.ar.ar.box.ol"]),
            &t
        ));
        assert!(!contains_clash(&seq(&t, &["e", "e.al", "e.ar"]), &t));
        assert!(!contains_clash(&Sequent::empty(), &t));
    }

    #[test]
    fn prop_expanded_examples() {
        let t = g_star_table();
        assert!(is_prop_expanded(&Sequent::empty(), &t));
        assert!(!is_prop_expanded(&Sequent::singleton(t.root_g()), &t));
        assert!(is_prop_expanded(
            &seq(&t, &["e", "e.al", "e.ar", "e.ar.al", "e.ar.ar"]),
            &t
        ));
        // an `|`-path with one child present is expanded ...
        assert!(is_prop_expanded(
            &seq(&t, &["e.ar.ar.box", "e.ar.ar.box.ol"]),
            &t
        ));
        // ... with none it is not
        assert!(!is_prop_expanded(&seq(&t, &["e.ar.ar.box"]), &t));
    }

    #[test]
    fn expansion_of_the_root() {
        let t = g_star_table();
        let exp = expansions(&Sequent::singleton(t.root_g()), &t, None);
        assert_eq!(
            exp.sets,
            vec![seq(&t, &["e", "e.al", "e.ar", "e.ar.al", "e.ar.ar"])]
        );
        assert_eq!(exp.compact_violations, 0);
    }

    #[test]
    fn expansion_branches_at_or_paths() {
        let t = g_star_table();
        let seed = seq(&t, &["e.al.dia", "e.ar.al.box", "e.ar.ar.box"]);
        let exp = expansions(&seed, &t, None);
        assert_eq!(
            exp.sets,
            vec![
                seq(
                    &t,
                    &["e.al.dia", "e.ar.al.box", "e.ar.ar.box", "e.ar.ar.box.ol"]
                ),
                seq(
                    &t,
                    &["e.al.dia", "e.ar.al.box", "e.ar.ar.box", "e.ar.ar.box.or"]
                ),
            ]
        );
    }

    #[test]
    fn empty_seed_expands_to_itself() {
        let t = g_star_table();
        let exp = expansions(&Sequent::empty(), &t, None);
        assert_eq!(exp.sets, vec![Sequent::empty()]);
    }

    #[test]
    fn nested_or_paths_multiply_leaves() {
        // (p | q) | (p | q): both occurrences branch independently, giving
        // four distinct leaves (occurrences are paths, not formulas).
        let t = PathTable::build(&parse_nnf("(p | q) | (p | q)").unwrap(), None);
        let exp = expansions(&Sequent::singleton(t.root_g()), &t, None);
        assert_eq!(exp.sets.len(), 4);
        let all_distinct: std::collections::BTreeSet<_> = exp.sets.iter().cloned().collect();
        assert_eq!(all_distinct.len(), exp.sets.len());
    }

    #[test]
    fn axiom_mode_adds_axiom_root_to_nonempty_seeds() {
        let g = parse_nnf("p1").unwrap();
        let h = parse_nnf("p2 | p3").unwrap();
        let t = PathTable::build(&g, Some(&h));
        let exp = expansions(&Sequent::singleton(t.root_g()), &t, None);
        assert_eq!(
            exp.sets,
            vec![
                seq(&t, &["eG", "eH", "eH.ol"]),
                seq(&t, &["eG", "eH", "eH.or"])
            ]
        );
        for s in &exp.sets {
            assert!(is_prop_expanded(s, &t));
        }
        // the empty seed stays empty even in axiom mode
        assert_eq!(
            expansions(&Sequent::empty(), &t, None).sets,
            vec![Sequent::empty()]
        );
    }

    #[test]
    fn box_seed_on_running_example() {
        let t = g_star_table();
        let state = seq(&t, &["e", "e.al", "e.ar", "e.ar.al", "e.ar.ar"]);
        assert_eq!(
            box_seed(&state, 1, &t),
            seq(&t, &["e.al.dia", "e.ar.al.box", "e.ar.ar.box"])
        );
        // a state without the diamond path seeds an empty successor
        let no_dia = seq(&t, &["e", "e.ar"]);
        assert_eq!(box_seed(&no_dia, 1, &t), Sequent::empty());
    }

    #[test]
    #[should_panic(expected = "diamond index")]
    fn box_seed_rejects_out_of_range_index() {
        let t = g_star_table();
        box_seed(&Sequent::singleton(t.root_g()), 2, &t);
    }

    /// Brute-force reference for `expansions`: enumerate every superset of
    /// the seed and keep the inclusion-minimal propositionally expanded
    /// ones. Only usable for tables with at most ~16 paths.
    pub(crate) fn expansions_brute(seed: &Sequent, t: &PathTable) -> Vec<Sequent> {
        assert!(t.len() <= 16);
        let mut pe: Vec<Sequent> = Vec::new();
        for mask in 0..(1u64 << t.len()) {
            let s = Sequent::from_mask(mask);
            if seed.is_subset_of(&s) && is_prop_expanded(&s, t) {
                pe.push(s);
            }
        }
        let minimal: Vec<Sequent> = pe
            .iter()
            .filter(|s| !pe.iter().any(|o| o != *s && o.is_subset_of(s)))
            .cloned()
            .collect();
        let mut out = minimal;
        out.sort();
        out
    }

    #[test]
    fn expansions_match_brute_force_on_running_example() {
        let t = g_star_table();
        let seeds = [
            Sequent::empty(),
            Sequent::singleton(t.root_g()),
            seq(&t, &["e.al.dia", "e.ar.al.box", "e.ar.ar.box"]),
            seq(&t, &["e.ar.ar.box"]),
            seq(&t, &["e.ar"]),
        ];
        for seed in &seeds {
            assert_eq!(
                expansions(seed, &t, None).sets,
                expansions_brute(seed, &t),
                "seed {seed}"
            );
        }
    }

    proptest::proptest! {
        #[test]
        fn expansions_match_brute_force(
            f in crate::formula::tests::arb_formula(),
            seed_bits in proptest::prelude::any::<u64>(),
        ) {
            let t = PathTable::build(&f, None);
            proptest::prop_assume!(t.len() <= 12);
            let mask = seed_bits & ((1u64 << t.len()) - 1);
            let seed = Sequent::from_mask(mask);
            proptest::prop_assert_eq!(
                expansions(&seed, &t, None).sets,
                expansions_brute(&seed, &t)
            );
        }

        #[test]
        fn expansion_leaves_are_expanded_supersets(
            f in crate::formula::tests::arb_formula(),
        ) {
            let t = PathTable::build(&f, None);
            let seed = Sequent::singleton(t.root_g());
            for leaf in expansions(&seed, &t, None).sets {
                proptest::prop_assert!(seed.is_subset_of(&leaf));
                proptest::prop_assert!(is_prop_expanded(&leaf, &t));
            }
        }
    }
}
