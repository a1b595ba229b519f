//! Saturation with the inverse sequent calculus.
//!
//! Sequents are path sets read as "this combination is unsatisfiable".
//! Starting from the clashing literal pairs, rules rewrite occurrences
//! bottom-up:
//!
//! * `andl`/`andr` replace one `&`-child by its parent,
//! * `or` merges a sequent containing a left `|`-child with one containing
//!   the matching right child, replacing both by the parent,
//! * `dia` lifts a sequent of `[]`-children plus exactly one `<>`-child to
//!   the parents, `dia+` does the same for a sequent of `[]`-children only
//!   (adding an arbitrary `<>`-path),
//! * `ax` (only with a global axiom) drops the axiom root.
//!
//! The input is unsatisfiable iff saturation derives the root singleton
//! (with a global axiom: the main root singleton or the empty sequent).
//! The closure is a least fixpoint, so the kept set is independent of
//! scheduling; budgets guard against the exponential worst case.

use crate::automaton::{FormulaAutomaton, StateId};
use crate::expansion::Sequent;
use crate::optimize::{GOrdering, RedundancyFilter};
use crate::paths::{Edge, PathId, PathKind, PathTable};
use crate::Satisfiability;
use smallvec::SmallVec;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use thiserror::Error;

/// Index of a kept sequent within a [`Closure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeqId(u32);

impl SeqId {
    fn new(i: usize) -> SeqId {
        SeqId(i as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SeqId {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleTag {
    Axiom,
    AndL,
    AndR,
    Or,
    Dia,
    DiaPlus,
    Ax,
}

impl RuleTag {
    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Axiom => "axiom",
            RuleTag::AndL => "andl",
            RuleTag::AndR => "andr",
            RuleTag::Or => "or",
            RuleTag::Dia => "dia",
            RuleTag::DiaPlus => "dia+",
            RuleTag::Ax => "ax",
        }
    }
}

/// How a kept sequent was first derived. Re-derivations are counted in the
/// statistics but not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceRecord {
    pub rule: RuleTag,
    pub premises: SmallVec<[SeqId; 2]>,
    /// The path introduced by the inference (`None` for axioms).
    pub principal: Option<PathId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Discipline {
    #[default]
    Fifo,
    Lifo,
}

pub const DEFAULT_MAX_KEPT: usize = 1 << 20;
pub const DEFAULT_MAX_INFERENCES: usize = 1 << 24;

/// Knobs for [`saturate`].
#[derive(Debug, Clone)]
pub struct SaturationConfig {
    /// Restrict `andl`/`andr`/`or` to inferences whose principal child is
    /// the strict maximum of its premise.
    pub ordering: Option<GOrdering>,
    /// Discard redundant conclusions (and redundant axioms).
    pub filters: bool,
    /// Discard conclusions that are proper supersets of a kept sequent.
    /// Off by default; the full closure is what the correspondence results
    /// talk about.
    pub forward_subsumption: bool,
    pub max_kept: usize,
    pub max_inferences: usize,
    pub discipline: Discipline,
}

impl SaturationConfig {
    /// The unrestricted calculus.
    pub fn plain() -> SaturationConfig {
        SaturationConfig {
            ordering: None,
            filters: false,
            forward_subsumption: false,
            max_kept: DEFAULT_MAX_KEPT,
            max_inferences: DEFAULT_MAX_INFERENCES,
            discipline: Discipline::Fifo,
        }
    }

    /// Ordering restrictions plus redundancy filtering for `t`.
    ///
    /// Both optimizations are sound only without a global axiom: redundant
    /// sets do name reachable states of a two-root table, and ordering
    /// restrictions can block the one inference chain that descends into
    /// the axiom (the modal-length condition ranks deep input paths above
    /// every axiom path, yet refutations must still decompose the axiom).
    /// For axiom tables this therefore falls back to the unrestricted
    /// calculus.
    pub fn optimized(t: &PathTable) -> SaturationConfig {
        if t.has_axiom() {
            return SaturationConfig::plain();
        }
        SaturationConfig {
            ordering: Some(crate::optimize::build_g_ordering(t)),
            filters: true,
            ..SaturationConfig::plain()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SaturationStats {
    pub kept: usize,
    pub attempted: usize,
    pub duplicates: usize,
    pub filtered_ordering: usize,
    pub filtered_redundant: usize,
    pub subsumed: usize,
}

/// The saturated (or budget-truncated) set of derived sequents, with one
/// derivation record per kept sequent.
#[derive(Debug, Clone)]
pub struct Closure {
    sequents: Vec<Sequent>,
    records: Vec<InferenceRecord>,
    index: HashMap<Sequent, SeqId>,
    stats: SaturationStats,
    complete: bool,
}

impl Closure {
    pub fn len(&self) -> usize {
        self.sequents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequents.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = SeqId> {
        (0..self.sequents.len()).map(SeqId::new)
    }

    pub fn get(&self, id: SeqId) -> &Sequent {
        &self.sequents[id.index()]
    }

    pub fn record(&self, id: SeqId) -> &InferenceRecord {
        &self.records[id.index()]
    }

    pub fn sequents(&self) -> &[Sequent] {
        &self.sequents
    }

    pub fn find(&self, s: &Sequent) -> Option<SeqId> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Sequent) -> bool {
        self.index.contains_key(s)
    }

    pub fn stats(&self) -> &SaturationStats {
        &self.stats
    }

    /// False when a budget stopped saturation before the fixpoint.
    pub fn complete(&self) -> bool {
        self.complete
    }

    /// Every sequent the derivation of `goal` rests on, in an order that
    /// lists premises before conclusions (`goal` last).
    pub fn trace(&self, goal: SeqId) -> Vec<SeqId> {
        let mut needed = BTreeSet::new();
        let mut stack = vec![goal];
        while let Some(id) = stack.pop() {
            if needed.insert(id) {
                stack.extend(self.records[id.index()].premises.iter().copied());
            }
        }
        // ids grow monotonically along any derivation, so id order is a
        // topological order
        needed.into_iter().collect()
    }

    /// Render a trace as `<seq-id> <- <rule>(<premises>; pi=<path>) : {paths}`.
    pub fn trace_lines(&self, goal: SeqId) -> String {
        let mut out = String::new();
        for id in self.trace(goal) {
            let r = self.record(id);
            let premises: Vec<String> = r.premises.iter().map(|p| p.to_string()).collect();
            let pi = r
                .principal
                .map(|p| p.to_string())
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "{} <- {}({}; pi={}) : {}\n",
                id,
                r.rule.name(),
                premises.join(","),
                pi,
                self.get(id)
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InverseError {
    #[error(
        "saturation hit its budget ({kept} sequents kept, {attempted} inferences attempted) \
         before reaching a fixpoint"
    )]
    Inconclusive { kept: usize, attempted: usize },
}

/// The axioms of the calculus for `t`: every two-element set pairing an
/// atom occurrence with a negated occurrence of the same atom, in id order.
pub fn axioms(t: &PathTable) -> Vec<Sequent> {
    let lits: Vec<(PathId, (u32, bool))> = t
        .ids()
        .filter_map(|id| t.literal_raw(id).map(|l| (id, l)))
        .collect();
    let mut out = Vec::new();
    for (i, &(a, (atom_a, pos_a))) in lits.iter().enumerate() {
        for &(b, (atom_b, pos_b)) in &lits[i + 1..] {
            if atom_a == atom_b && pos_a != pos_b {
                out.push(Sequent::from_ids([a, b]));
            }
        }
    }
    out
}

struct Saturator<'a> {
    t: &'a PathTable,
    cfg: &'a SaturationConfig,
    filter: Option<RedundancyFilter>,
    sequents: Vec<Sequent>,
    records: Vec<InferenceRecord>,
    index: HashMap<Sequent, SeqId>,
    /// `or`-path id -> processed sequents containing it; pairing a popped
    /// sequent against processed ones only attempts each pair exactly once
    by_path: Vec<Vec<SeqId>>,
    queue: VecDeque<SeqId>,
    stats: SaturationStats,
    out_of_budget: bool,
}

impl<'a> Saturator<'a> {
    fn offer(
        &mut self,
        rule: RuleTag,
        premises: SmallVec<[SeqId; 2]>,
        principal: Option<PathId>,
        conclusion: Sequent,
        respects_ordering: bool,
    ) {
        if self.out_of_budget {
            return;
        }
        self.stats.attempted += 1;
        if self.stats.attempted > self.cfg.max_inferences {
            self.out_of_budget = true;
            return;
        }
        if !respects_ordering {
            self.stats.filtered_ordering += 1;
            return;
        }
        if let Some(f) = &self.filter {
            if f.is_redundant(&conclusion) {
                self.stats.filtered_redundant += 1;
                return;
            }
        }
        if self.index.contains_key(&conclusion) {
            self.stats.duplicates += 1;
            return;
        }
        if self.cfg.forward_subsumption && self.sequents.iter().any(|s| s.is_subset_of(&conclusion))
        {
            self.stats.subsumed += 1;
            return;
        }
        if self.sequents.len() >= self.cfg.max_kept {
            self.out_of_budget = true;
            return;
        }
        let id = SeqId::new(self.sequents.len());
        self.index.insert(conclusion.clone(), id);
        self.sequents.push(conclusion);
        self.records.push(InferenceRecord {
            rule,
            premises,
            principal,
        });
        self.stats.kept += 1;
        self.queue.push_back(id);
    }

    /// `id` strictly outranks the rest of `s` (vacuously true without an
    /// ordering).
    fn strict_max(&self, id: PathId, s: &Sequent) -> bool {
        match &self.cfg.ordering {
            Some(o) => o.is_strict_max(id, s),
            None => true,
        }
    }

    fn process(&mut self, g_id: SeqId) {
        let g = self.sequents[g_id.index()].clone();

        // register before pairing so a sequent holding both disjunct paths can
        // partner with itself
        for e in g.iter() {
            if matches!(self.t.last_edge(e), Some(Edge::OrL | Edge::OrR)) {
                self.by_path[e.index()].push(g_id);
            }
        }

        // modal rules look at the whole sequent
        let mut dia_elt = None;
        let mut dia_count = 0;
        let mut all_modal = true;
        for e in g.iter() {
            match self.t.last_edge(e) {
                Some(Edge::Dia) => {
                    dia_elt = Some(e);
                    dia_count += 1;
                }
                Some(Edge::Box) => {}
                _ => all_modal = false,
            }
        }
        if all_modal {
            let parents = Sequent::from_ids(g.iter().map(|e| self.t.parent(e).unwrap()));
            if dia_count == 1 {
                let pi = self.t.parent(dia_elt.unwrap()).unwrap();
                self.offer(
                    RuleTag::Dia,
                    SmallVec::from_slice(&[g_id]),
                    Some(pi),
                    parents,
                    true,
                );
            } else if dia_count == 0 {
                for &d in self.t.diamonds() {
                    self.offer(
                        RuleTag::DiaPlus,
                        SmallVec::from_slice(&[g_id]),
                        Some(d),
                        parents.with(d),
                        true,
                    );
                }
            }
        }

        // global-axiom rule
        if let Some(h) = self.t.root_h() {
            if g.contains(h) {
                self.offer(
                    RuleTag::Ax,
                    SmallVec::from_slice(&[g_id]),
                    Some(h),
                    g.without(h),
                    true,
                );
            }
        }

        // propositional rules, one per occurrence
        for e in g.iter() {
            match self.t.last_edge(e) {
                Some(edge @ (Edge::AndL | Edge::AndR)) => {
                    let pi = self.t.parent(e).unwrap();
                    let ok = self.strict_max(e, &g);
                    let rule = if edge == Edge::AndL {
                        RuleTag::AndL
                    } else {
                        RuleTag::AndR
                    };
                    self.offer(
                        rule,
                        SmallVec::from_slice(&[g_id]),
                        Some(pi),
                        g.without(e).with(pi),
                        ok,
                    );
                }
                Some(side @ (Edge::OrL | Edge::OrR)) => {
                    let pi = self.t.parent(e).unwrap();
                    let (l, r) = self.t.pair_children(pi).unwrap();
                    let sibling = if side == Edge::OrL { r } else { l };
                    // every kept sequent is processed eventually, so pairing
                    // against processed partners misses no pair
                    let partners = self.by_path[sibling.index()].clone();
                    for h_id in partners {
                        let h = self.sequents[h_id.index()].clone();
                        let (left, left_id, right, right_id) = if side == Edge::OrL {
                            (&g, g_id, &h, h_id)
                        } else {
                            (&h, h_id, &g, g_id)
                        };
                        let ok = self.strict_max(l, left) && self.strict_max(r, right);
                        let conclusion = left.without(l).union(&right.without(r)).with(pi);
                        self.offer(
                            RuleTag::Or,
                            SmallVec::from_slice(&[left_id, right_id]),
                            Some(pi),
                            conclusion,
                            ok,
                        );
                    }
                }
                _ => {}
            }
        }
    }
}

/// Compute the closure of the axioms under the calculus rules, subject to
/// `cfg`. The kept set of a completed run is scheduling-independent.
pub fn saturate(t: &PathTable, cfg: &SaturationConfig) -> Closure {
    if let Some(o) = &cfg.ordering {
        debug_assert!(crate::optimize::check_g_ordering(o, t));
    }
    let mut sat = Saturator {
        t,
        cfg,
        filter: cfg.filters.then(|| RedundancyFilter::new(t)),
        sequents: Vec::new(),
        records: Vec::new(),
        index: HashMap::new(),
        by_path: vec![Vec::new(); t.len()],
        queue: VecDeque::new(),
        stats: SaturationStats::default(),
        out_of_budget: false,
    };
    for ax in axioms(t) {
        sat.offer(RuleTag::Axiom, SmallVec::new(), None, ax, true);
    }
    loop {
        if sat.out_of_budget {
            break;
        }
        let next = match cfg.discipline {
            Discipline::Fifo => sat.queue.pop_front(),
            Discipline::Lifo => sat.queue.pop_back(),
        };
        match next {
            Some(id) => sat.process(id),
            None => break,
        }
    }
    Closure {
        sequents: sat.sequents,
        records: sat.records,
        index: sat.index,
        stats: sat.stats,
        complete: !sat.out_of_budget,
    }
}

/// Outcome of [`decide`]: the verdict, the sequent that settled it (for
/// unsatisfiable inputs), and the full closure for inspection.
#[derive(Debug, Clone)]
pub struct Decision {
    pub verdict: Satisfiability,
    pub goal: Option<SeqId>,
    pub closure: Closure,
}

/// Saturate and read off the verdict: without a global axiom the input is
/// unsatisfiable iff the root singleton was derived; with one, iff the
/// main-root singleton or the empty sequent was.
pub fn decide(t: &PathTable, cfg: &SaturationConfig) -> Result<Decision, InverseError> {
    let closure = saturate(t, cfg);
    if !closure.complete() {
        return Err(InverseError::Inconclusive {
            kept: closure.stats.kept,
            attempted: closure.stats.attempted,
        });
    }
    let goal = if t.has_axiom() {
        closure
            .find(&Sequent::empty())
            .or_else(|| closure.find(&Sequent::singleton(t.root_g())))
    } else {
        closure.find(&Sequent::singleton(t.root_g()))
    };
    Ok(Decision {
        verdict: if goal.is_some() {
            Satisfiability::Unsat
        } else {
            Satisfiability::Sat
        },
        goal,
        closure,
    })
}

/// States of `a` that contain a member of `seqs` as a subset. A derived
/// sequent means "every state above me is dead", so this is the state-level
/// reading of a set of sequents.
///
/// Panics if a sequent mentions a path outside the automaton's table.
pub fn concretization(seqs: &[Sequent], a: &FormulaAutomaton) -> BTreeSet<StateId> {
    for s in seqs {
        if let Some(max) = s.iter().last() {
            assert!(
                max.index() < a.paths_len(),
                "sequent {s} mentions a path outside the automaton's table"
            );
        }
    }
    a.state_ids()
        .filter(|&q| seqs.iter().any(|s| s.is_subset_of(a.set(q))))
        .collect()
}

/// Re-check every derivation record against the rule shapes. Catches
/// malformed premises, wrong principal paths, and conclusions that do not
/// follow from their premises.
pub fn verify_closure(c: &Closure, t: &PathTable) -> Result<(), String> {
    let parents_of = |s: &Sequent| -> Option<Sequent> {
        let mut out = Sequent::empty();
        for e in s.iter() {
            out.insert(t.parent(e)?);
        }
        Some(out)
    };
    for id in c.ids() {
        let seq = c.get(id);
        let r = c.record(id);
        for p in &r.premises {
            if p.index() >= id.index() {
                return Err(format!("sequent {id} cites a later premise {p}"));
            }
        }
        let fail = |why: &str| {
            Err(format!(
                "sequent {id} ({seq}) fails {}: {why}",
                r.rule.name()
            ))
        };
        match r.rule {
            RuleTag::Axiom => {
                if !r.premises.is_empty() || r.principal.is_some() {
                    return fail("axioms have no premises or principal path");
                }
                let ids: Vec<PathId> = seq.iter().collect();
                if ids.len() != 2 {
                    return fail("axioms are two-element sequents");
                }
                match (t.literal_raw(ids[0]), t.literal_raw(ids[1])) {
                    (Some((a, pa)), Some((b, pb))) if a == b && pa != pb => {}
                    _ => return fail("axiom literals must clash"),
                }
            }
            RuleTag::AndL | RuleTag::AndR => {
                let [p] = r.premises[..] else {
                    return fail("one premise required");
                };
                let pi = r.principal.ok_or("missing principal".to_string())?;
                if t.kind(pi) != PathKind::And {
                    return fail("principal must be an &-path");
                }
                let (l, rr) = t.pair_children(pi).unwrap();
                let child = if r.rule == RuleTag::AndL { l } else { rr };
                let prem = c.get(p);
                if !prem.contains(child) {
                    return fail("premise lacks the principal child");
                }
                if *seq != prem.without(child).with(pi) {
                    return fail("conclusion mismatch");
                }
            }
            RuleTag::Or => {
                let [p1, p2] = r.premises[..] else {
                    return fail("two premises required");
                };
                let pi = r.principal.ok_or("missing principal".to_string())?;
                if t.kind(pi) != PathKind::Or {
                    return fail("principal must be an |-path");
                }
                let (l, rr) = t.pair_children(pi).unwrap();
                let (prem1, prem2) = (c.get(p1), c.get(p2));
                if !prem1.contains(l) || !prem2.contains(rr) {
                    return fail("premises lack the principal children");
                }
                if *seq != prem1.without(l).union(&prem2.without(rr)).with(pi) {
                    return fail("conclusion mismatch");
                }
            }
            RuleTag::Dia => {
                let [p] = r.premises[..] else {
                    return fail("one premise required");
                };
                let pi = r.principal.ok_or("missing principal".to_string())?;
                let prem = c.get(p);
                let dias: Vec<PathId> = prem
                    .iter()
                    .filter(|&e| t.last_edge(e) == Some(Edge::Dia))
                    .collect();
                if dias.len() != 1 || t.parent(dias[0]) != Some(pi) {
                    return fail("premise must hold exactly one <>-child, of the principal");
                }
                if prem
                    .iter()
                    .any(|e| !matches!(t.last_edge(e), Some(Edge::Box | Edge::Dia)))
                {
                    return fail("premise must consist of []/<>-children");
                }
                if Some(seq.clone()) != parents_of(prem) {
                    return fail("conclusion must be the parents of the premise");
                }
            }
            RuleTag::DiaPlus => {
                let [p] = r.premises[..] else {
                    return fail("one premise required");
                };
                let pi = r.principal.ok_or("missing principal".to_string())?;
                if t.kind(pi) != PathKind::Dia {
                    return fail("principal must be a <>-path");
                }
                let prem = c.get(p);
                if prem.iter().any(|e| t.last_edge(e) != Some(Edge::Box)) {
                    return fail("premise must consist of []-children only");
                }
                if Some(seq.clone()) != parents_of(prem).map(|s| s.with(pi)) {
                    return fail("conclusion must be the parents plus the principal");
                }
            }
            RuleTag::Ax => {
                let [p] = r.premises[..] else {
                    return fail("one premise required");
                };
                let h = t.root_h().ok_or("ax rule without axiom".to_string())?;
                if r.principal != Some(h) {
                    return fail("principal must be the axiom root");
                }
                let prem = c.get(p);
                if !prem.contains(h) || *seq != prem.without(h) {
                    return fail("conclusion must be the premise minus the axiom root");
                }
            }
        }
    }
    Ok(())
}
