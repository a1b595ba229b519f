//! Independent reference deciders and Kripke-model checking.
//!
//! Two deciders that share no code with the saturation or automaton
//! engines, used to cross-check them:
//!
//! * [`decide_tableau`] — a textbook backtracking tableau. Fast on small
//!   inputs, produces a tree-shaped witness model, no global-axiom support.
//! * [`decide_type_elimination`] — enumerate downward-saturated, clash-free
//!   subsets of the subformula closure, then repeatedly eliminate subsets
//!   whose `<>`-members no surviving subset supports. Handles a global
//!   axiom by restricting to subsets that contain it. Exponential in the
//!   closure size, hence the bound.
//!
//! Both report satisfiability and, on the positive side, a model that
//! [`check_model`] can validate against the original formula.

use crate::formula::Formula;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

/// One world of a [`KripkeModel`]: the atoms true there and the indices of
/// its successors.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct World {
    pub atoms: BTreeSet<String>,
    pub succs: Vec<usize>,
}

/// A finite pointed-model candidate; worlds are indexed by position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KripkeModel {
    pub worlds: Vec<World>,
}

impl KripkeModel {
    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    /// One line per world: `world <id>: atoms={..} succ={..}`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, w) in self.worlds.iter().enumerate() {
            let atoms: Vec<&str> = w.atoms.iter().map(String::as_str).collect();
            let succs: Vec<String> = w.succs.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(
                out,
                "world {i}: atoms={{{}}} succ={{{}}}",
                atoms.join(","),
                succs.join(",")
            );
        }
        out
    }
}

/// Evaluate `f` at world `w`. Panics if `w` or a successor index is out of
/// range.
pub fn check_model(m: &KripkeModel, w: usize, f: &Formula) -> bool {
    assert!(w < m.worlds.len(), "world {w} out of range");
    let world = &m.worlds[w];
    match f {
        Formula::Atom(a) => world.atoms.contains(a),
        Formula::NegAtom(a) => !world.atoms.contains(a),
        Formula::And(a, b) => check_model(m, w, a) && check_model(m, w, b),
        Formula::Or(a, b) => check_model(m, w, a) || check_model(m, w, b),
        Formula::Box_(a) => world.succs.iter().all(|&s| check_model(m, s, a)),
        Formula::Dia(a) => world.succs.iter().any(|&s| check_model(m, s, a)),
    }
}

/// Verdict of an oracle, with a witness model and its root world when
/// satisfiable.
#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub satisfiable: bool,
    pub model: Option<(KripkeModel, usize)>,
}

/// Decide satisfiability of `g` by a backtracking tableau.
///
/// Sets of formulas are expanded propositionally (`&` adds both children,
/// `|` branches), clashing saturated sets fail, and each `<>`-member of a
/// saturated set spawns a successor set from its child plus all
/// `[]`-children. Worlds are allocated post-order, so the root is the last
/// world of the returned model.
pub fn decide_tableau(g: &Formula) -> OracleOutcome {
    let mut worlds = Vec::new();
    let mut start = BTreeSet::new();
    start.insert(g.clone());
    match expand(&start, &mut worlds) {
        Some(root) => OracleOutcome {
            satisfiable: true,
            model: Some((KripkeModel { worlds }, root)),
        },
        None => OracleOutcome {
            satisfiable: false,
            model: None,
        },
    }
}

/// Returns the root world of a model for `set`, appended to `worlds`.
/// Leaves `worlds` unchanged on failure.
fn expand(set: &BTreeSet<Formula>, worlds: &mut Vec<World>) -> Option<usize> {
    for f in set {
        match f {
            Formula::And(a, b) if !set.contains(a) || !set.contains(b) => {
                let mut next = set.clone();
                next.insert((**a).clone());
                next.insert((**b).clone());
                return expand(&next, worlds);
            }
            Formula::Or(a, b) if !set.contains(a) && !set.contains(b) => {
                let mut left = set.clone();
                left.insert((**a).clone());
                if let Some(w) = expand(&left, worlds) {
                    return Some(w);
                }
                let mut right = set.clone();
                right.insert((**b).clone());
                return expand(&right, worlds);
            }
            _ => {}
        }
    }
    // propositionally saturated: check literals, then recurse on diamonds
    let mut atoms = BTreeSet::new();
    for f in set {
        if let Formula::Atom(a) = f {
            atoms.insert(a.clone());
        }
    }
    for f in set {
        if let Formula::NegAtom(a) = f {
            if atoms.contains(a) {
                return None;
            }
        }
    }
    let boxes: Vec<&Formula> = set
        .iter()
        .filter_map(|f| match f {
            Formula::Box_(a) => Some(&**a),
            _ => None,
        })
        .collect();
    let mark = worlds.len();
    let mut succs = Vec::new();
    for f in set {
        if let Formula::Dia(a) = f {
            let mut child: BTreeSet<Formula> = boxes.iter().map(|&b| b.clone()).collect();
            child.insert((**a).clone());
            match expand(&child, worlds) {
                Some(w) => succs.push(w),
                None => {
                    worlds.truncate(mark);
                    return None;
                }
            }
        }
    }
    let id = worlds.len();
    worlds.push(World { atoms, succs });
    Some(id)
}

/// Largest subformula closure [`decide_type_elimination`] accepts.
pub const DEFAULT_CLOSURE_BOUND: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(
        "subformula closure has {size} members; type elimination enumerates subsets and is \
         capped at {bound}; use a saturation engine instead"
    )]
    ClosureTooLarge { size: usize, bound: usize },
}

/// Subformulas of `f` in first-visit order, deduplicated.
fn closure_of(f: &Formula, out: &mut Vec<Formula>) {
    if out.contains(f) {
        return;
    }
    out.push(f.clone());
    match f {
        Formula::Atom(_) | Formula::NegAtom(_) => {}
        Formula::And(a, b) | Formula::Or(a, b) => {
            closure_of(a, out);
            closure_of(b, out);
        }
        Formula::Box_(a) | Formula::Dia(a) => closure_of(a, out),
    }
}

/// Decide satisfiability of `g` (under the global axiom `h`, when given)
/// by type elimination with the default closure bound.
pub fn decide_type_elimination(
    g: &Formula,
    h: Option<&Formula>,
) -> Result<OracleOutcome, OracleError> {
    decide_type_elimination_with_bound(g, h, DEFAULT_CLOSURE_BOUND)
}

pub fn decide_type_elimination_with_bound(
    g: &Formula,
    h: Option<&Formula>,
    bound: usize,
) -> Result<OracleOutcome, OracleError> {
    let mut closure = Vec::new();
    closure_of(g, &mut closure);
    if let Some(h) = h {
        closure_of(h, &mut closure);
    }
    let n = closure.len();
    if n > bound {
        return Err(OracleError::ClosureTooLarge { size: n, bound });
    }
    let bit = |f: &Formula| closure.iter().position(|c| c == f).unwrap();
    let g_bit = bit(g);
    let h_bit = h.map(bit);

    // candidate types: downward-saturated, clash-free subsets (containing
    // the axiom, if any)
    assert!(n < 63, "closure bound too large for subset enumeration");
    let mut types: Vec<u64> = Vec::new();
    'mask: for mask in 0u64..1 << n {
        if let Some(hb) = h_bit {
            if mask & (1 << hb) == 0 {
                continue;
            }
        }
        for (i, f) in closure.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            match f {
                Formula::And(a, b) => {
                    if mask & (1 << bit(a)) == 0 || mask & (1 << bit(b)) == 0 {
                        continue 'mask;
                    }
                }
                Formula::Or(a, b) => {
                    if mask & (1 << bit(a)) == 0 && mask & (1 << bit(b)) == 0 {
                        continue 'mask;
                    }
                }
                Formula::NegAtom(a) => {
                    let pos = Formula::Atom(a.clone());
                    if closure
                        .iter()
                        .position(|c| *c == pos)
                        .is_some_and(|p| mask & (1 << p) != 0)
                    {
                        continue 'mask;
                    }
                }
                _ => {}
            }
        }
        types.push(mask);
    }

    // eliminate types whose <>-members lack a supporting survivor
    let supports = |t: u64, u: u64, closure: &[Formula], dia_child: usize| -> bool {
        if u & (1 << dia_child) == 0 {
            return false;
        }
        closure.iter().enumerate().all(|(i, f)| match f {
            Formula::Box_(a) if t & (1 << i) != 0 => u & (1 << bit(a)) != 0,
            _ => true,
        })
    };
    loop {
        let before = types.len();
        let snapshot = types.clone();
        types.retain(|&t| {
            closure.iter().enumerate().all(|(i, f)| match f {
                Formula::Dia(a) if t & (1 << i) != 0 => {
                    let child = bit(a);
                    snapshot.iter().any(|&u| supports(t, u, &closure, child))
                }
                _ => true,
            })
        });
        if types.len() == before {
            break;
        }
    }

    let root = types.iter().position(|&t| t & (1 << g_bit) != 0);
    let Some(root) = root else {
        return Ok(OracleOutcome {
            satisfiable: false,
            model: None,
        });
    };

    // witness model: one world per surviving type, each <>-member pointing
    // at the first supporting survivor
    let worlds = types
        .iter()
        .map(|&t| {
            let atoms = closure
                .iter()
                .enumerate()
                .filter_map(|(i, f)| match f {
                    Formula::Atom(a) if t & (1 << i) != 0 => Some(a.clone()),
                    _ => None,
                })
                .collect();
            let succs = closure
                .iter()
                .enumerate()
                .filter_map(|(i, f)| match f {
                    Formula::Dia(a) if t & (1 << i) != 0 => Some(
                        types
                            .iter()
                            .position(|&u| supports(t, u, &closure, bit(a)))
                            .expect("surviving types have supporting successors"),
                    ),
                    _ => None,
                })
                .collect();
            World { atoms, succs }
        })
        .collect();
    Ok(OracleOutcome {
        satisfiable: true,
        model: Some((KripkeModel { worlds }, root)),
    })
}
