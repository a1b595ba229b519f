//! Search-space reductions shared by the automaton and the saturation
//! engine.
//!
//! Three cheap syntactic tests identify path sets that no reachable
//! automaton state can contain (and that saturation therefore never needs
//! to derive): sets mixing modal lengths, sets with two paths that diverge
//! at the same `|`-occurrence, and sets with two paths that entered
//! different `<>`-successors at the same depth. On top of that, a total
//! ranking of paths ([`GOrdering`]) restricts which inferences have to be
//! performed and drives the ordered expansion strategy.

use crate::expansion::{is_unexpanded, Sequent};
use crate::paths::{Edge, PathId, PathKind, PathTable, Root};

/// Do the two paths diverge at the two children of one `|`-occurrence?
pub fn is_vee_fork(a: PathId, b: PathId, t: &PathTable) -> bool {
    if t.root_of(a) != t.root_of(b) {
        return false;
    }
    let (wa, wb) = (t.word(a), t.word(b));
    let common = wa.iter().zip(wb.iter()).take_while(|(x, y)| x == y).count();
    match (wa.get(common), wb.get(common)) {
        (Some(&x), Some(&y)) => {
            matches!((x, y), (Edge::OrL, Edge::OrR) | (Edge::OrR, Edge::OrL))
        }
        _ => false,
    }
}

/// Do the two paths pass through *different* `<>`-occurrences at the same
/// modal depth? Reachable states describe a single world of a tree model,
/// so all their paths entered the same chain of successors.
pub fn is_diamond_separated(a: PathId, b: PathId, t: &PathTable) -> bool {
    let (wa, wb) = (t.word(a), t.word(b));
    let same_root = t.root_of(a) == t.root_of(b);
    let mut ml_a = 0u32;
    for (i, &ea) in wa.iter().enumerate() {
        if ea == Edge::Dia {
            let mut ml_b = 0u32;
            for (j, &eb) in wb.iter().enumerate() {
                if eb == Edge::Dia && ml_a == ml_b && !(same_root && wa[..i] == wb[..j]) {
                    return true;
                }
                ml_b += u32::from(eb.is_modal());
            }
        }
        ml_a += u32::from(ea.is_modal());
    }
    false
}

/// Is the pair excluded from every reachable state: different modal
/// lengths, a `|`-fork, or `<>`-separation?
pub fn conflicting(a: PathId, b: PathId, t: &PathTable) -> bool {
    t.modal_length(a) != t.modal_length(b) || is_vee_fork(a, b, t) || is_diamond_separated(a, b, t)
}

/// A set is redundant when some pair of its members is [`conflicting`].
/// Redundancy is monotone: every superset of a redundant set is redundant.
///
/// Redundant sets name only unreachable automaton states — but solely for
/// single-root tables. With a global axiom, reachable states mix the
/// modal-length-zero axiom root into every nonempty set, so redundancy
/// must not be used to discard states or sequents there.
pub fn redundant(s: &Sequent, t: &PathTable) -> bool {
    let ids: Vec<PathId> = s.iter().collect();
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            if conflicting(a, b, t) {
                return true;
            }
        }
    }
    false
}

/// Precomputed pairwise conflicts, for filtering many sets against one
/// table. Agrees with [`redundant`] by construction (and by test).
#[derive(Debug, Clone)]
pub struct RedundancyFilter {
    conflict: Vec<Sequent>,
}

impl RedundancyFilter {
    pub fn new(t: &PathTable) -> RedundancyFilter {
        let ids: Vec<PathId> = t.ids().collect();
        let mut conflict = vec![Sequent::empty(); ids.len()];
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                if conflicting(a, b, t) {
                    conflict[a.index()].insert(b);
                    conflict[b.index()].insert(a);
                }
            }
        }
        RedundancyFilter { conflict }
    }

    pub fn is_redundant(&self, s: &Sequent) -> bool {
        s.iter().any(|id| self.conflict[id.index()].intersects(s))
    }
}

/// Are the two paths the left and right child of one `&`/`|`-occurrence?
pub fn are_brothers(a: PathId, b: PathId, t: &PathTable) -> bool {
    a != b
        && t.parent(a).is_some()
        && t.parent(a) == t.parent(b)
        && matches!(t.kind(t.parent(a).unwrap()), PathKind::And | PathKind::Or)
}

/// A total ranking of the paths of one table (higher rank = greater path).
///
/// A valid ranking must place longer modal lengths higher, place
/// `&`/`|`-suffixed paths above `[]`/`<>`-suffixed ones of the same modal
/// length, place every path above its prefixes of the same modal length,
/// and keep brothers adjacent. With a global axiom, both roots sit below
/// all other modal-length-0 paths, the axiom root lowest.
#[derive(Debug, Clone)]
pub struct GOrdering {
    rank: Vec<u32>,
}

impl GOrdering {
    pub fn rank(&self, id: PathId) -> u32 {
        self.rank[id.index()]
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    /// The highest rank among members of `s`.
    pub fn max_rank(&self, s: &Sequent) -> Option<u32> {
        s.iter().map(|id| self.rank(id)).max()
    }

    /// Is `id` strictly greater than every *other* member of `s`?
    pub fn is_strict_max(&self, id: PathId, s: &Sequent) -> bool {
        let r = self.rank(id);
        s.iter().all(|o| o == id || self.rank(o) < r)
    }
}

/// Construct a valid [`GOrdering`] by sorting paths on (modal length,
/// suffix class, word length, root, word). The edge order declared in
/// [`Edge`] leaves nothing between the two symbols of a brother pair, so
/// brothers come out adjacent.
pub fn build_g_ordering(t: &PathTable) -> GOrdering {
    let mut ids: Vec<PathId> = t.ids().collect();
    ids.sort_by(|&a, &b| {
        let class = |id: PathId| match t.last_edge(id) {
            None | Some(Edge::Box) | Some(Edge::Dia) => 0u8,
            Some(Edge::AndL | Edge::AndR | Edge::OrL | Edge::OrR) => 1u8,
        };
        let root = |id: PathId| match t.root_of(id) {
            Root::H => 0u8,
            Root::G => 1u8,
        };
        (
            t.modal_length(a),
            class(a),
            t.word(a).len(),
            root(a),
            t.word(a),
        )
            .cmp(&(
                t.modal_length(b),
                class(b),
                t.word(b).len(),
                root(b),
                t.word(b),
            ))
    });
    let mut rank = vec![0u32; t.len()];
    for (pos, id) in ids.iter().enumerate() {
        rank[id.index()] = pos as u32;
    }
    GOrdering { rank }
}

/// Verify every defining condition of a valid ordering by brute force.
pub fn check_g_ordering(o: &GOrdering, t: &PathTable) -> bool {
    if o.len() != t.len() {
        return false;
    }
    let mut seen = vec![false; t.len()];
    for id in t.ids() {
        let r = o.rank(id) as usize;
        if r >= t.len() || seen[r] {
            return false;
        }
        seen[r] = true;
    }
    let class = |id: PathId| t.last_edge(id).map(|e| !e.is_modal());
    for a in t.ids() {
        for b in t.ids() {
            if a == b {
                continue;
            }
            let above = o.rank(a) > o.rank(b);
            if t.modal_length(a) > t.modal_length(b) && !above {
                return false;
            }
            if t.modal_length(a) == t.modal_length(b) {
                // `&`/`|`-suffixed above `[]`/`<>`-suffixed
                if class(a) == Some(true) && class(b) == Some(false) && !above {
                    return false;
                }
                // proper extensions above their prefixes
                if t.root_of(a) == t.root_of(b) && t.word(a).starts_with(t.word(b)) && !above {
                    return false;
                }
            }
            if t.has_axiom() {
                // both roots below every non-root path of modal length 0
                let a_root = t.parent(a).is_none();
                let b_root = t.parent(b).is_none();
                if b_root && !a_root && t.modal_length(a) == 0 && !above {
                    return false;
                }
                if a_root && b_root && t.root_of(a) == Root::G && !above {
                    return false;
                }
            }
        }
    }
    // brothers must be adjacent in the ranking
    for id in t.ids() {
        if matches!(t.kind(id), PathKind::And | PathKind::Or) {
            let (l, r) = t.pair_children(id).unwrap();
            if o.rank(l).abs_diff(o.rank(r)) != 1 {
                return false;
            }
        }
    }
    true
}

/// The unexpanded `&`/`|`-path of `s` whose two children are the two
/// smallest (by `o`) among all unexpanded paths' children. Returns `None`
/// when every `&`/`|`-path of `s` is already expanded.
pub fn select_succ(s: &Sequent, o: &GOrdering, t: &PathTable) -> Option<PathId> {
    s.iter()
        .filter(|&id| is_unexpanded(s, id, t))
        .min_by_key(|&id| {
            let (l, r) = t.pair_children(id).unwrap();
            o.rank(l).min(o.rank(r))
        })
}

/// Is `s` compact: do the children of every unexpanded `&`/`|`-path of `s`
/// outrank everything already in `s`?
pub fn is_compact(s: &Sequent, o: &GOrdering, t: &PathTable) -> bool {
    let Some(max) = o.max_rank(s) else {
        return true;
    };
    s.iter().filter(|&id| is_unexpanded(s, id, t)).all(|id| {
        let (l, r) = t.pair_children(id).unwrap();
        o.rank(l) > max && o.rank(r) > max
    })
}
