//! Cross-engine invariants: every structural claim that ties the
//! saturation calculus to the explicit automaton, checked on concrete
//! inputs from the outside (public API only).

use modalk::automaton::{self, FormulaAutomaton};
use modalk::expansion::{box_seed, expansions, Sequent};
use modalk::inverse::{self, RuleTag, SaturationConfig};
use modalk::oracle;
use modalk::paths::PathTable;
use modalk::{corpus, parse_nnf, Satisfiability};
use std::collections::BTreeSet;

const SAMPLES: &[&str] = &[
    "<>~p1 & ([]p2 & [](~p2 | p1))",
    "p1",
    "p1 & ~p1",
    "p1 | ~p1",
    "<>p1 & []~p1",
    "<>p1 & []p2",
    "(p1 | p2) & (~p1 | ~p2)",
    "<>(p1 & (p2 | ~p1)) & []~p2",
    "[](p1 | ~p1) & <>p2 & <>~p2",
];

const AXIOM_SAMPLES: &[(&str, &str)] = &[
    ("p1", "~p1"),
    ("p1", "p1"),
    ("p1", "p2 & ~p2"),
    ("<>p1", "~p1"),
    ("<>p1", "p1 | p2"),
    ("<>p1 & <>~p1", "p2"),
];

fn tables() -> Vec<PathTable> {
    let mut out: Vec<PathTable> = SAMPLES
        .iter()
        .map(|s| PathTable::build(&parse_nnf(s).unwrap(), None))
        .collect();
    out.extend(
        AXIOM_SAMPLES
            .iter()
            .map(|(g, h)| PathTable::build(&parse_nnf(g).unwrap(), Some(&parse_nnf(h).unwrap()))),
    );
    out
}

fn emptiness_verdict(a: &FormulaAutomaton) -> Satisfiability {
    if a.is_empty() {
        Satisfiability::Unsat
    } else {
        Satisfiability::Sat
    }
}

/// The automaton's initial states are exactly the minimal propositionally
/// expanded supersets of the root singleton.
#[test]
fn initial_states_are_the_root_expansions() {
    for t in tables() {
        let a = automaton::build(&t, false).unwrap();
        let initial: BTreeSet<&Sequent> = a.initial().iter().map(|&q| a.set(q)).collect();
        let exp = expansions(&Sequent::singleton(t.root_g()), &t, None);
        let expected: BTreeSet<&Sequent> = exp.sets.iter().collect();
        assert_eq!(initial, expected, "{}", t.g());
    }
}

/// Each bucket of each clash-free state holds exactly the expansions of
/// the corresponding box seed (full automaton).
#[test]
fn buckets_are_box_seed_expansions() {
    for t in tables() {
        let a = automaton::build(&t, false).unwrap();
        for q in a.state_ids() {
            if a.is_clash(q) {
                assert!(a.buckets(q).is_empty());
                continue;
            }
            for (pos, bucket) in a.buckets(q).iter().enumerate() {
                let seed = box_seed(a.set(q), pos + 1, &t);
                // the empty seed expands to the empty set only
                let exp = expansions(&seed, &t, None);
                let expected: BTreeSet<&Sequent> = exp.sets.iter().collect();
                let got: BTreeSet<&Sequent> = bucket.iter().map(|&m| a.set(m)).collect();
                assert_eq!(got, expected, "{} state {q} bucket {}", t.g(), pos + 1);
            }
        }
    }
}

/// Every derivation step is sound in the state-level reading: a state
/// containing the conclusion either contains a premise outright
/// (propositional rules) or is doomed through the relevant bucket
/// (modal rules).
#[test]
fn derivation_steps_are_sound_at_the_state_level() {
    for t in tables() {
        let a = automaton::build(&t, false).unwrap();
        let c = inverse::saturate(&t, &SaturationConfig::plain());
        assert!(c.complete());
        inverse::verify_closure(&c, &t).unwrap();
        for id in c.ids() {
            let conclusion = c.get(id);
            let r = c.record(id);
            match r.rule {
                RuleTag::Axiom => {
                    for q in a.state_ids() {
                        if conclusion.is_subset_of(a.set(q)) {
                            assert!(a.is_clash(q), "{} axiom {conclusion} in live {q}", t.g());
                        }
                    }
                }
                RuleTag::AndL | RuleTag::AndR | RuleTag::Or => {
                    for q in a.state_ids() {
                        if conclusion.is_subset_of(a.set(q)) {
                            let hit = r.premises.iter().any(|&p| c.get(p).is_subset_of(a.set(q)));
                            assert!(hit, "{} state {q} escapes premises of {conclusion}", t.g());
                        }
                    }
                }
                RuleTag::Dia | RuleTag::DiaPlus => {
                    let bucket = t.diamond_index(r.principal.unwrap()).unwrap() - 1;
                    let premise = c.get(r.premises[0]);
                    for q in a.state_ids() {
                        if a.is_clash(q) || !conclusion.is_subset_of(a.set(q)) {
                            continue;
                        }
                        for &succ in &a.buckets(q)[bucket] {
                            assert!(
                                premise.is_subset_of(a.set(succ)),
                                "{} successor {succ} of {q} escapes {premise}",
                                t.g()
                            );
                        }
                    }
                }
                RuleTag::Ax => {
                    let premise = c.get(r.premises[0]);
                    for q in a.state_ids() {
                        if !a.set(q).is_empty() && conclusion.is_subset_of(a.set(q)) {
                            assert!(
                                premise.is_subset_of(a.set(q)),
                                "{} nonempty state {q} escapes {premise}",
                                t.g()
                            );
                        }
                    }
                }
            }
        }
    }
}

/// On plain inputs the derived sequents pick out exactly the inactive
/// states; spot-check here, exhaustively in the acceptance suite.
#[test]
fn closure_matches_inactive_states_on_samples() {
    for src in SAMPLES {
        let t = PathTable::build(&parse_nnf(src).unwrap(), None);
        let a = automaton::build(&t, false).unwrap();
        let c = inverse::saturate(&t, &SaturationConfig::plain());
        let lifted = inverse::concretization(c.sequents(), &a);
        assert_eq!(lifted, a.inactive_closure().set(), "{src}");
    }
}

/// With a global axiom the verdicts still agree, but state-set equality
/// can genuinely fail: once the empty sequent is derivable, its
/// concretization covers the always-active empty state. This pins down
/// why the deep cross-check is restricted to plain inputs.
#[test]
fn axiom_mode_state_sets_can_differ_on_the_empty_sequent() {
    let g = parse_nnf("p1").unwrap();
    let h = parse_nnf("p2 & ~p2").unwrap();
    let t = PathTable::build(&g, Some(&h));
    let a = automaton::build(&t, false).unwrap();
    let c = inverse::saturate(&t, &SaturationConfig::plain());

    assert!(c.contains(&Sequent::empty()));
    let lifted = inverse::concretization(c.sequents(), &a);
    let inactive = a.inactive_closure().set();
    let empty_state = a.find_state(&Sequent::empty()).unwrap();
    assert!(lifted.contains(&empty_state));
    assert!(!inactive.contains(&empty_state));
    assert_ne!(lifted, inactive);

    // the disagreement never reaches the verdict: initial states are in both
    for &q in a.initial() {
        assert!(lifted.contains(&q) && inactive.contains(&q));
    }
    let d = inverse::decide(&t, &SaturationConfig::plain()).unwrap();
    assert_eq!(d.verdict, Satisfiability::Unsat);
    assert_eq!(emptiness_verdict(&a), Satisfiability::Unsat);
}

/// All three axiom-capable engines agree on every pair of height-one
/// single-atom formulas (196 pairs, exhaustive).
#[test]
fn tiny_axiom_pairs_agree_exhaustively() {
    let forms = corpus::enumerate_nnf(1, 1);
    let mut unsat = 0;
    for g in &forms {
        for h in &forms {
            let t = PathTable::build(g, Some(h));
            let d = inverse::decide(&t, &SaturationConfig::plain()).unwrap();
            let a = automaton::build(&t, false).unwrap();
            let te = oracle::decide_type_elimination(g, Some(h)).unwrap();
            assert_eq!(d.verdict, emptiness_verdict(&a), "{g} under {h}");
            assert_eq!(
                te.satisfiable,
                d.verdict == Satisfiability::Sat,
                "{g} under {h}"
            );
            if d.verdict == Satisfiability::Unsat {
                unsat += 1;
            }
        }
    }
    // sanity: the corpus exercises both verdicts
    assert!(unsat > 20, "only {unsat} unsatisfiable pairs");
}

/// Reduced automata keep exactly the irredundant states and preserve
/// emptiness on all samples.
#[test]
fn reduction_drops_only_redundant_states() {
    for t in tables() {
        let full = automaton::build(&t, false).unwrap();
        let reduced = automaton::build(&t, true).unwrap();
        let full_sets: BTreeSet<&Sequent> = full.state_ids().map(|q| full.set(q)).collect();
        for q in reduced.state_ids() {
            assert!(full_sets.contains(reduced.set(q)), "{}", t.g());
        }
        assert!(reduced.len() <= full.len());
        assert_eq!(full.is_empty(), reduced.is_empty(), "{}", t.g());
    }
}

/// The optimized saturation reaches the same verdict as the plain one and
/// the deciders outside the calculus, on samples from both modes.
#[test]
fn every_engine_agrees_on_the_samples() {
    for src in SAMPLES {
        let g = parse_nnf(src).unwrap();
        let t = PathTable::build(&g, None);
        let plain = inverse::decide(&t, &SaturationConfig::plain())
            .unwrap()
            .verdict;
        let opt = inverse::decide(&t, &SaturationConfig::optimized(&t))
            .unwrap()
            .verdict;
        let auto = emptiness_verdict(&automaton::build(&t, false).unwrap());
        let tab = if oracle::decide_tableau(&g).satisfiable {
            Satisfiability::Sat
        } else {
            Satisfiability::Unsat
        };
        assert_eq!(plain, opt, "{src}");
        assert_eq!(plain, auto, "{src}");
        assert_eq!(plain, tab, "{src}");
    }
    for (g_src, h_src) in AXIOM_SAMPLES {
        let g = parse_nnf(g_src).unwrap();
        let h = parse_nnf(h_src).unwrap();
        let t = PathTable::build(&g, Some(&h));
        let plain = inverse::decide(&t, &SaturationConfig::plain())
            .unwrap()
            .verdict;
        let auto = emptiness_verdict(&automaton::build(&t, false).unwrap());
        let te = if oracle::decide_type_elimination(&g, Some(&h))
            .unwrap()
            .satisfiable
        {
            Satisfiability::Sat
        } else {
            Satisfiability::Unsat
        };
        assert_eq!(plain, auto, "{g_src} under {h_src}");
        assert_eq!(plain, te, "{g_src} under {h_src}");
    }
}

/// Inactive-state logs replay cleanly for every sample, in both the full
/// and the reduced construction.
#[test]
fn emptiness_logs_replay() {
    for t in tables() {
        for reduced in [false, true] {
            let a = automaton::build(&t, reduced).unwrap();
            let closure = a.inactive_closure();
            a.verify_inactive_closure(&closure).unwrap();
            assert_eq!(closure.set(), {
                let naive = a.inactive_closure_naive();
                a.state_ids().filter(|q| naive[q.index()]).collect()
            });
        }
    }
}
