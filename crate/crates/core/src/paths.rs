//! Occurrence paths: every node of the input formula (and of the optional
//! global axiom) gets a dense integer id.
//!
//! A path is the word of edge symbols leading from a root to a subformula
//! occurrence, so two syntactically equal subformulas in different positions
//! get different ids. Ids are assigned breadth-first — main-formula root
//! before axiom root, left child before right child — and stay stable for
//! the lifetime of the table. Sequents, automaton states and the saturation
//! engine all address formulas through these ids.

use crate::formula::Formula;
use std::fmt;

/// Index of a path in its [`PathTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathId(u32);

impl PathId {
    pub(crate) fn new(i: usize) -> PathId {
        PathId(i as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PathId {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.0)
    }
}

/// Which root a path descends from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Root {
    /// The formula being decided.
    G,
    /// The global axiom, when one is present.
    H,
}

/// One step of a path word.
///
/// The declaration order doubles as the tie-break order used when ranking
/// paths: it keeps `AndL`/`AndR` (and `OrL`/`OrR`) adjacent so that sibling
/// occurrences end up next to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Edge {
    Box,
    Dia,
    AndL,
    AndR,
    OrL,
    OrR,
}

impl Edge {
    /// `[]`/`<>` edges contribute to modal length; `&`/`|` edges do not.
    pub fn is_modal(self) -> bool {
        matches!(self, Edge::Box | Edge::Dia)
    }

    fn token(self) -> &'static str {
        match self {
            Edge::AndL => "al",
            Edge::AndR => "ar",
            Edge::OrL => "ol",
            Edge::OrR => "or",
            Edge::Box => "box",
            Edge::Dia => "dia",
        }
    }

    fn from_token(tok: &str) -> Option<Edge> {
        Some(match tok {
            "al" => Edge::AndL,
            "ar" => Edge::AndR,
            "ol" => Edge::OrL,
            "or" => Edge::OrR,
            "box" => Edge::Box,
            "dia" => Edge::Dia,
            _ => return None,
        })
    }
}

/// Top connective of the subformula a path addresses. Atoms and negated
/// atoms are both `Literal`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathKind {
    And,
    Or,
    Box,
    Dia,
    Literal,
}

impl PathKind {
    fn token(self) -> &'static str {
        match self {
            PathKind::And => "and",
            PathKind::Or => "or",
            PathKind::Box => "box",
            PathKind::Dia => "dia",
            PathKind::Literal => "lit",
        }
    }
}

#[derive(Debug, Clone)]
struct Entry {
    parent: Option<PathId>,
    edge: Option<Edge>,
    root: Root,
    kind: PathKind,
    modal_length: u32,
    word: Vec<Edge>,
    children: [Option<PathId>; 2],
    /// `(atom id, positive)` for literal paths.
    literal: Option<(u32, bool)>,
    /// 1-based position in the fixed enumeration of `<>`-paths.
    diamond_index: Option<usize>,
}

/// The path table of a formula, or of a formula together with a global
/// axiom. Owns clones of both formulas.
#[derive(Debug, Clone)]
pub struct PathTable {
    g: Formula,
    h: Option<Formula>,
    entries: Vec<Entry>,
    diamonds: Vec<PathId>,
    atoms: Vec<String>,
}

impl PathTable {
    /// Number the subformula occurrences of `g` (and `h`, if given)
    /// breadth-first.
    pub fn build(g: &Formula, h: Option<&Formula>) -> PathTable {
        let mut t = PathTable {
            g: g.clone(),
            h: h.cloned(),
            entries: Vec::new(),
            diamonds: Vec::new(),
            atoms: Vec::new(),
        };
        // Seed the queue with the roots, then discover children in order.
        t.push_entry(None, None, Root::G);
        if h.is_some() {
            t.push_entry(None, None, Root::H);
        }
        let mut next = 0;
        while next < t.entries.len() {
            let id = PathId::new(next);
            next += 1;
            let sub = t.subformula(id).clone();
            match sub {
                Formula::And(..) => {
                    let l = t.push_entry(Some(id), Some(Edge::AndL), t.entries[id.index()].root);
                    let r = t.push_entry(Some(id), Some(Edge::AndR), t.entries[id.index()].root);
                    t.entries[id.index()].children = [Some(l), Some(r)];
                }
                Formula::Or(..) => {
                    let l = t.push_entry(Some(id), Some(Edge::OrL), t.entries[id.index()].root);
                    let r = t.push_entry(Some(id), Some(Edge::OrR), t.entries[id.index()].root);
                    t.entries[id.index()].children = [Some(l), Some(r)];
                }
                Formula::Box_(..) => {
                    let c = t.push_entry(Some(id), Some(Edge::Box), t.entries[id.index()].root);
                    t.entries[id.index()].children = [Some(c), None];
                }
                Formula::Dia(..) => {
                    let c = t.push_entry(Some(id), Some(Edge::Dia), t.entries[id.index()].root);
                    t.entries[id.index()].children = [Some(c), None];
                }
                Formula::Atom(_) | Formula::NegAtom(_) => {}
            }
        }
        // Classify each entry now that the whole tree is numbered.
        for i in 0..t.entries.len() {
            let id = PathId::new(i);
            let (kind, literal) = match t.subformula(id) {
                Formula::And(..) => (PathKind::And, None),
                Formula::Or(..) => (PathKind::Or, None),
                Formula::Box_(..) => (PathKind::Box, None),
                Formula::Dia(..) => (PathKind::Dia, None),
                Formula::Atom(p) => (PathKind::Literal, Some((p.clone(), true))),
                Formula::NegAtom(p) => (PathKind::Literal, Some((p.clone(), false))),
            };
            t.entries[i].kind = kind;
            if let Some((name, positive)) = literal {
                let atom = t.intern_atom(&name);
                t.entries[i].literal = Some((atom, positive));
            }
            if kind == PathKind::Dia {
                t.diamonds.push(id);
                t.entries[i].diamond_index = Some(t.diamonds.len());
            }
        }
        t
    }

    fn push_entry(&mut self, parent: Option<PathId>, edge: Option<Edge>, root: Root) -> PathId {
        let id = PathId::new(self.entries.len());
        let (modal_length, word) = match parent {
            Some(p) => {
                let pe = &self.entries[p.index()];
                let e = edge.unwrap();
                let mut word = pe.word.clone();
                word.push(e);
                (pe.modal_length + u32::from(e.is_modal()), word)
            }
            None => (0, Vec::new()),
        };
        self.entries.push(Entry {
            parent,
            edge,
            root,
            kind: PathKind::Literal, // fixed up after discovery
            modal_length,
            word,
            children: [None, None],
            literal: None,
            diamond_index: None,
        });
        id
    }

    fn intern_atom(&mut self, name: &str) -> u32 {
        match self.atoms.iter().position(|a| a == name) {
            Some(i) => i as u32,
            None => {
                self.atoms.push(name.to_string());
                (self.atoms.len() - 1) as u32
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a table always contains at least the root of `g`
    }

    pub fn ids(&self) -> impl Iterator<Item = PathId> {
        (0..self.entries.len()).map(PathId::new)
    }

    /// Root of the main formula; always id 0.
    pub fn root_g(&self) -> PathId {
        PathId::new(0)
    }

    /// Root of the global axiom, when the table was built with one.
    pub fn root_h(&self) -> Option<PathId> {
        self.h.as_ref().map(|_| PathId::new(1))
    }

    pub fn has_axiom(&self) -> bool {
        self.h.is_some()
    }

    pub fn g(&self) -> &Formula {
        &self.g
    }

    pub fn h(&self) -> Option<&Formula> {
        self.h.as_ref()
    }

    fn entry(&self, id: PathId) -> &Entry {
        &self.entries[id.index()]
    }

    pub fn kind(&self, id: PathId) -> PathKind {
        self.entry(id).kind
    }

    pub fn parent(&self, id: PathId) -> Option<PathId> {
        self.entry(id).parent
    }

    /// Final symbol of the path word; `None` exactly for the roots.
    pub fn last_edge(&self, id: PathId) -> Option<Edge> {
        self.entry(id).edge
    }

    pub fn root_of(&self, id: PathId) -> Root {
        self.entry(id).root
    }

    /// Count of `[]`/`<>` symbols in the path word.
    pub fn modal_length(&self, id: PathId) -> u32 {
        self.entry(id).modal_length
    }

    pub fn word(&self, id: PathId) -> &[Edge] {
        &self.entry(id).word
    }

    /// The subformula occurrence the path addresses.
    ///
    /// Panics if `id` does not belong to this table.
    pub fn subformula(&self, id: PathId) -> &Formula {
        let e = self.entry(id);
        let mut f = match e.root {
            Root::G => &self.g,
            Root::H => self
                .h
                .as_ref()
                .expect("axiom path in a table without axiom"),
        };
        for step in &e.word {
            f = match (step, f) {
                (Edge::AndL, Formula::And(a, _)) => a,
                (Edge::AndR, Formula::And(_, b)) => b,
                (Edge::OrL, Formula::Or(a, _)) => a,
                (Edge::OrR, Formula::Or(_, b)) => b,
                (Edge::Box, Formula::Box_(g)) => g,
                (Edge::Dia, Formula::Dia(g)) => g,
                _ => unreachable!("path word disagrees with formula shape"),
            };
        }
        f
    }

    /// `(atom name, positive)` for literal paths, `None` otherwise.
    pub fn literal(&self, id: PathId) -> Option<(&str, bool)> {
        self.entry(id)
            .literal
            .map(|(a, pos)| (self.atoms[a as usize].as_str(), pos))
    }

    pub(crate) fn literal_raw(&self, id: PathId) -> Option<(u32, bool)> {
        self.entry(id).literal
    }

    pub(crate) fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Both children of an `&`-path or `|`-path.
    pub fn pair_children(&self, id: PathId) -> Option<(PathId, PathId)> {
        match self.entry(id).children {
            [Some(l), Some(r)] => Some((l, r)),
            _ => None,
        }
    }

    /// The single child of a `[]`-path or `<>`-path.
    pub fn modal_child(&self, id: PathId) -> Option<PathId> {
        match (self.kind(id), self.entry(id).children) {
            (PathKind::Box | PathKind::Dia, [Some(c), None]) => Some(c),
            _ => None,
        }
    }

    /// The `<>`-paths in id order; their positions fix the successor
    /// numbering used by automaton buckets.
    pub fn diamonds(&self) -> &[PathId] {
        &self.diamonds
    }

    /// Number of `<>`-paths (= successor arity of the formula automaton).
    pub fn arity(&self) -> usize {
        self.diamonds.len()
    }

    /// 1-based position of a `<>`-path in the fixed enumeration.
    pub fn diamond_index(&self, id: PathId) -> Option<usize> {
        self.entry(id).diamond_index
    }

    /// Path word in dump notation: root token (`e`, or `eG`/`eH` when an
    /// axiom is present) followed by `.`-separated edge tokens.
    pub fn word_string(&self, id: PathId) -> String {
        let e = self.entry(id);
        let mut s = String::from(match (self.has_axiom(), e.root) {
            (false, _) => "e",
            (true, Root::G) => "eG",
            (true, Root::H) => "eH",
        });
        for step in &e.word {
            s.push('.');
            s.push_str(step.token());
        }
        s
    }

    /// Inverse of [`word_string`](Self::word_string); handy for tests and
    /// debugging sessions.
    pub fn find(&self, word: &str) -> Option<PathId> {
        let mut parts = word.split('.');
        let root = match (parts.next()?, self.has_axiom()) {
            ("e", false) | ("eG", true) => self.root_g(),
            ("eH", true) => self.root_h()?,
            _ => return None,
        };
        let mut id = root;
        for tok in parts {
            let edge = Edge::from_token(tok)?;
            let e = self.entry(id);
            id = match edge {
                Edge::AndL | Edge::OrL | Edge::Box | Edge::Dia => e.children[0]?,
                Edge::AndR | Edge::OrR => e.children[1]?,
            };
            if self.last_edge(id) != Some(edge) {
                return None;
            }
        }
        Some(id)
    }

    /// One line per path: `<id> <word> <kind> <modal_length> <subformula>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for id in self.ids() {
            out.push_str(&format!(
                "{} {} {} {} {}\n",
                id,
                self.word_string(id),
                self.kind(id).token(),
                self.modal_length(id),
                self.subformula(id)
            ));
        }
        out
    }
}
