//! Satisfiability for the modal logic K, with optional global axioms.
//!
//! The input is a formula in negation normal form (module [`formula`]);
//! with a global axiom, a second formula that must hold at every world.
//! Subformula occurrences are addressed by their paths from the root
//! (module [`paths`]), and everything downstream works on sets of paths
//! (module [`expansion`]).
//!
//! Engines, from primary to reference:
//!
//! * [`inverse`] — saturation with the inverse sequent calculus, plain or
//!   with ordering restrictions and redundancy filtering ([`optimize`]).
//!   This is the scalable decision procedure.
//! * [`automaton`] — build the formula automaton explicitly and test it
//!   for emptiness. Exponential in the number of paths, but its state
//!   space is what derived sequents talk about, which makes the
//!   correspondence between the two engines executable.
//! * [`oracle`] — a backtracking tableau and a type-elimination decider,
//!   sharing no code with the above, plus Kripke-model checking for
//!   positive verdicts.
//!
//! All engines agree on every input; the test suite and the `xcheck`
//! subcommand of the CLI exercise exactly that.

pub mod automaton;
pub mod corpus;
pub mod expansion;
pub mod formula;
pub mod inverse;
pub mod optimize;
pub mod oracle;
pub mod paths;

pub use expansion::Sequent;
pub use formula::{parse, parse_nnf, to_nnf, Ast, Formula, ParseError};
pub use paths::{PathId, PathTable};

/// What every engine ultimately reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Satisfiability {
    Sat,
    Unsat,
}

impl std::fmt::Display for Satisfiability {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        out.write_str(match self {
            Satisfiability::Sat => "SAT",
            Satisfiability::Unsat => "UNSAT",
        })
    }
}
