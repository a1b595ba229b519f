//! The explicit formula automaton and its emptiness test.
//!
//! States are the propositionally expanded path sets of one table. A
//! clash-free state `Φ` sends its `i`-th successor into any expansion of
//! the seed derived from `Φ`'s `[]`-paths and `i`-th `<>`-path; the
//! alternatives for each successor position are stored as one *bucket* per
//! position, never as a product. States containing a clash have no
//! transitions at all. The language is empty iff every initial state is
//! *inactive*, i.e. can never root an infinite run; inactive states are
//! computed by counter propagation and, independently, by a naive fixpoint
//! iteration kept around as a cross-check.
//!
//! Construction enumerates all `2^|paths|` candidate subsets, so it is
//! gated on the table size; larger inputs belong to the saturation engine,
//! which never materialises the state space.

use crate::expansion::{box_seed, contains_clash, expansions, is_prop_expanded, Sequent};
use crate::optimize::RedundancyFilter;
use crate::paths::PathTable;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// Index of a state in its automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(u32);

impl StateId {
    fn new(i: usize) -> StateId {
        StateId(i as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.0)
    }
}

/// Largest path table the explicit construction accepts by default.
pub const DEFAULT_PATH_BOUND: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error(
        "table has {paths} paths, explicit automaton construction is capped at {bound}; \
         use the saturation engine instead"
    )]
    TooManyPaths { paths: usize, bound: usize },
}

#[derive(Debug, Clone)]
pub struct FormulaAutomaton {
    states: Vec<Sequent>,
    clash: Vec<bool>,
    /// Per clash-free state: one bucket of alternative targets per
    /// successor position. Clash states carry an empty bucket list.
    buckets: Vec<Vec<Vec<StateId>>>,
    initial: Vec<StateId>,
    arity: usize,
    reduced: bool,
    paths_len: usize,
    index: HashMap<Sequent, StateId>,
}

/// Build the automaton for `t`, optionally dropping redundant states (and
/// the transitions through them).
///
/// The redundancy predicates characterize unreachable states only when
/// there is no global axiom — a two-root table legitimately reaches states
/// mixing modal lengths through the axiom root — so for axiom tables the
/// reduced automaton equals the full one.
pub fn build(t: &PathTable, reduced: bool) -> Result<FormulaAutomaton, AutomatonError> {
    build_with_bound(t, reduced, DEFAULT_PATH_BOUND)
}

/// As [`build`], with an explicit cap on the table size (the construction
/// enumerates `2^paths` subsets, so keep the cap well below 30).
pub fn build_with_bound(
    t: &PathTable,
    reduced: bool,
    bound: usize,
) -> Result<FormulaAutomaton, AutomatonError> {
    let n = t.len();
    if n > bound {
        return Err(AutomatonError::TooManyPaths { paths: n, bound });
    }
    let filter = (reduced && !t.has_axiom()).then(|| RedundancyFilter::new(t));
    let mut states = Vec::new();
    let mut clash = Vec::new();
    let mut index = HashMap::new();
    for mask in 0..(1u64 << n) {
        let s = Sequent::from_mask(mask);
        if !is_prop_expanded(&s, t) {
            continue;
        }
        if let Some(f) = &filter {
            if f.is_redundant(&s) {
                continue;
            }
        }
        let id = StateId::new(states.len());
        clash.push(contains_clash(&s, t));
        index.insert(s.clone(), id);
        states.push(s);
    }

    let arity = t.arity();
    let mut buckets = Vec::with_capacity(states.len());
    for (i, s) in states.iter().enumerate() {
        if clash[i] {
            buckets.push(Vec::new());
            continue;
        }
        let mut per_state = Vec::with_capacity(arity);
        for pos in 1..=arity {
            let seed = box_seed(s, pos, t);
            let mut bucket: Vec<StateId> = expansions(&seed, t, None)
                .sets
                .iter()
                // In reduced mode an expansion may hit a dropped state; the
                // transition through it disappears with it.
                .filter_map(|set| index.get(set).copied())
                .collect();
            bucket.sort_unstable();
            bucket.dedup();
            per_state.push(bucket);
        }
        buckets.push(per_state);
    }

    let initial: Vec<StateId> = expansions(&Sequent::singleton(t.root_g()), t, None)
        .sets
        .iter()
        .map(|set| {
            *index
                .get(set)
                .expect("initial expansions are never redundant")
        })
        .collect();

    Ok(FormulaAutomaton {
        states,
        clash,
        buckets,
        initial,
        arity,
        reduced,
        paths_len: n,
        index,
    })
}

/// One entry of the inactive-closure log: either a seed (a clash state,
/// `bucket == None`) or a propagation step justified by the 0-based bucket
/// whose members had all become inactive before.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InactiveStep {
    pub state: StateId,
    pub bucket: Option<usize>,
}

/// The set of inactive states together with the order and justification of
/// every addition.
#[derive(Debug, Clone)]
pub struct InactiveClosure {
    inactive: Vec<bool>,
    pub steps: Vec<InactiveStep>,
}

impl InactiveClosure {
    pub fn contains(&self, s: StateId) -> bool {
        self.inactive[s.index()]
    }

    pub fn set(&self) -> std::collections::BTreeSet<StateId> {
        self.steps.iter().map(|st| st.state).collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl FormulaAutomaton {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty_automaton(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId::new)
    }

    pub fn set(&self, s: StateId) -> &Sequent {
        &self.states[s.index()]
    }

    pub fn is_clash(&self, s: StateId) -> bool {
        self.clash[s.index()]
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn buckets(&self, s: StateId) -> &[Vec<StateId>] {
        &self.buckets[s.index()]
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn reduced(&self) -> bool {
        self.reduced
    }

    pub fn paths_len(&self) -> usize {
        self.paths_len
    }

    pub fn find_state(&self, set: &Sequent) -> Option<StateId> {
        self.index.get(set).copied()
    }

    /// Compute the inactive states by counter propagation: each (state,
    /// bucket) pair counts its remaining active members; when a counter
    /// reaches zero the state dies and is pushed through a reverse index.
    /// Clash states seed the closure. Runs in time linear in the total
    /// bucket size.
    pub fn inactive_closure(&self) -> InactiveClosure {
        let n = self.states.len();
        let mut inactive = vec![false; n];
        let mut steps = Vec::new();
        let mut queue = std::collections::VecDeque::new();

        // reverse index: member state -> (owner state, bucket position)
        let mut watchers: Vec<Vec<(StateId, usize)>> = vec![Vec::new(); n];
        let mut counters: Vec<Vec<usize>> = Vec::with_capacity(n);
        for (i, per_state) in self.buckets.iter().enumerate() {
            let mut cs = Vec::with_capacity(per_state.len());
            for (pos, bucket) in per_state.iter().enumerate() {
                cs.push(bucket.len());
                for &m in bucket {
                    watchers[m.index()].push((StateId::new(i), pos));
                }
            }
            counters.push(cs);
        }

        // Seeds: all clash states first, in id order.
        for (i, dead) in inactive.iter_mut().enumerate() {
            if self.clash[i] {
                *dead = true;
                steps.push(InactiveStep {
                    state: StateId::new(i),
                    bucket: None,
                });
                queue.push_back(StateId::new(i));
            }
        }
        // A clash-free state may start with an empty bucket (possible only
        // after reduction); it can never fire a transition there.
        for i in 0..n {
            if !inactive[i] {
                if let Some(pos) = counters[i].iter().position(|&c| c == 0) {
                    inactive[i] = true;
                    steps.push(InactiveStep {
                        state: StateId::new(i),
                        bucket: Some(pos),
                    });
                    queue.push_back(StateId::new(i));
                }
            }
        }

        while let Some(dead) = queue.pop_front() {
            for &(owner, pos) in &watchers[dead.index()] {
                if inactive[owner.index()] {
                    continue;
                }
                let c = &mut counters[owner.index()][pos];
                *c -= 1;
                if *c == 0 {
                    inactive[owner.index()] = true;
                    steps.push(InactiveStep {
                        state: owner,
                        bucket: Some(pos),
                    });
                    queue.push_back(owner);
                }
            }
        }

        InactiveClosure { inactive, steps }
    }

    /// Reference implementation of the inactive closure: iterate over all
    /// states until nothing changes. Quadratic, used to cross-check the
    /// counter version.
    pub fn inactive_closure_naive(&self) -> Vec<bool> {
        let mut inactive = self.clash.clone();
        loop {
            let mut changed = false;
            for i in 0..self.states.len() {
                if inactive[i] || self.clash[i] {
                    continue;
                }
                let dies = self.buckets[i]
                    .iter()
                    .any(|bucket| bucket.iter().all(|m| inactive[m.index()]));
                if dies {
                    inactive[i] = true;
                    changed = true;
                }
            }
            if !changed {
                return inactive;
            }
        }
    }

    /// Does the automaton accept no tree at all? True iff every initial
    /// state is inactive.
    pub fn is_empty(&self) -> bool {
        let closure = self.inactive_closure();
        self.initial.iter().all(|&s| closure.contains(s))
    }

    /// Re-check an inactive closure from first principles: the log must
    /// start with exactly the clash states, every later step must cite a
    /// bucket that was fully inactive at that point, and no inactive state
    /// may be missing from the result.
    pub fn verify_inactive_closure(&self, c: &InactiveClosure) -> Result<(), String> {
        let n = self.states.len();
        let mut seen = vec![false; n];
        let mut seeds_done = false;
        for step in &c.steps {
            let i = step.state.index();
            if seen[i] {
                return Err(format!("state {} added twice", step.state));
            }
            match step.bucket {
                None => {
                    if seeds_done {
                        return Err(format!("clash seed {} after propagation began", step.state));
                    }
                    if !self.clash[i] {
                        return Err(format!("state {} seeded without clash", step.state));
                    }
                }
                Some(pos) => {
                    seeds_done = true;
                    if self.clash[i] {
                        return Err(format!("clash state {} justified by a bucket", step.state));
                    }
                    let bucket = self.buckets[i].get(pos).ok_or_else(|| {
                        format!("state {} cites missing bucket {pos}", step.state)
                    })?;
                    if let Some(alive) = bucket.iter().find(|m| !seen[m.index()]) {
                        return Err(format!(
                            "state {} cites bucket {pos} but member {alive} was still active",
                            step.state
                        ));
                    }
                }
            }
            seen[i] = true;
        }
        for i in 0..n {
            if seen[i] != c.inactive[i] {
                return Err(format!("state {i} flag disagrees with the log"));
            }
            if self.clash[i] && !seen[i] {
                return Err(format!("clash state {i} missing from the closure"));
            }
            if !seen[i] {
                // completeness: some member of every bucket must be active
                for (pos, bucket) in self.buckets[i].iter().enumerate() {
                    if bucket.iter().all(|m| seen[m.index()]) {
                        return Err(format!("active state {i} has fully inactive bucket {pos}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Text dump: a header, one line per state, and (for clash-free
    /// states) one line per bucket with 1-based successor positions.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "states={} arity={} reduced={}\n",
            self.states.len(),
            self.arity,
            u8::from(self.reduced)
        );
        let initial: std::collections::BTreeSet<StateId> = self.initial.iter().copied().collect();
        for id in self.state_ids() {
            out.push_str(&format!(
                "state {} {} clash={} initial={}\n",
                id,
                self.states[id.index()],
                u8::from(self.clash[id.index()]),
                u8::from(initial.contains(&id)),
            ));
            for (pos, bucket) in self.buckets[id.index()].iter().enumerate() {
                let members: Vec<String> = bucket.iter().map(|m| m.to_string()).collect();
                out.push_str(&format!("bucket {}: {{{}}}\n", pos + 1, members.join(",")));
            }
        }
        out
    }
}
