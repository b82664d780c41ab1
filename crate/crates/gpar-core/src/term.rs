//! Interned labels for terms and variables.
//!
//! Every label is interned exactly once into a process-wide table, so
//! equality and hashing work on integer handles. Match enumeration is
//! handle-comparison bound; labels are only resolved for ordering and
//! output.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

struct Interner {
    ids: HashMap<&'static str, u32>,
    labels: Vec<&'static str>,
}

fn interner() -> &'static RwLock<Interner> {
    static TABLE: OnceLock<RwLock<Interner>> = OnceLock::new();
    TABLE.get_or_init(|| {
        RwLock::new(Interner {
            ids: HashMap::new(),
            labels: Vec::new(),
        })
    })
}

fn intern(label: &str) -> u32 {
    {
        let table = interner().read().unwrap();
        if let Some(&id) = table.ids.get(label) {
            return id;
        }
    }
    let mut table = interner().write().unwrap();
    if let Some(&id) = table.ids.get(label) {
        return id;
    }
    // Interned labels live for the whole process.
    let leaked: &'static str = Box::leak(label.to_owned().into_boxed_str());
    let id = table.labels.len() as u32;
    table.labels.push(leaked);
    table.ids.insert(leaked, id);
    id
}

fn resolve(id: u32) -> &'static str {
    interner().read().unwrap().labels[id as usize]
}

/// A term, identified by its label.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term(u32);

impl Term {
    pub fn new(label: &str) -> Term {
        Term(intern(label))
    }

    pub fn label(&self) -> &'static str {
        resolve(self.0)
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Terms order by label so that every sorted output is independent of
/// interning order.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.0 == other.0 {
            std::cmp::Ordering::Equal
        } else {
            self.label().cmp(other.label())
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A variable, identified by its name (written `?name` in text formats).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Variable(u32);

impl Variable {
    pub fn new(name: &str) -> Variable {
        Variable(intern(name))
    }

    pub fn name(&self) -> &'static str {
        resolve(self.0)
    }
}

impl PartialOrd for Variable {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Variable {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.0 == other.0 {
            std::cmp::Ordering::Equal
        } else {
            self.name().cmp(other.name())
        }
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.name())
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.name())
    }
}

/// One position of a triple pattern: either a fixed term or a variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermOrVar {
    Term(Term),
    Var(Variable),
}

impl TermOrVar {
    pub fn as_term(&self) -> Option<Term> {
        match self {
            TermOrVar::Term(t) => Some(*t),
            TermOrVar::Var(_) => None,
        }
    }

    pub fn as_var(&self) -> Option<Variable> {
        match self {
            TermOrVar::Term(_) => None,
            TermOrVar::Var(v) => Some(*v),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, TermOrVar::Var(_))
    }
}

impl From<Term> for TermOrVar {
    fn from(t: Term) -> Self {
        TermOrVar::Term(t)
    }
}

impl From<Variable> for TermOrVar {
    fn from(v: Variable) -> Self {
        TermOrVar::Var(v)
    }
}

impl fmt::Debug for TermOrVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermOrVar::Term(t) => write!(f, "{t}"),
            TermOrVar::Var(v) => write!(f, "{v}"),
        }
    }
}
