use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::ultrapower::{Structure, EQUALITY};

/// Binary relation rendered and parsed infix, as in `a in s`.
pub const MEMBERSHIP: &str = "in";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// `c<index>`, naming the base element with that index.
    Const(usize),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(i) => write!(f, "c{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom { relation: String, args: Vec<Term> },
    Equals(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `forall v. φ`, or `forall v in B. φ` with `B` a unary relation.
    ForAll {
        var: String,
        bound: Option<String>,
        body: Box<Formula>,
    },
    Exists {
        var: String,
        bound: Option<String>,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(relation: &str, args: Vec<Term>) -> Formula {
        Formula::Atom {
            relation: relation.to_string(),
            args,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(var: &str, bound: Option<&str>, body: Formula) -> Formula {
        Formula::ForAll {
            var: var.to_string(),
            bound: bound.map(str::to_string),
            body: Box::new(body),
        }
    }

    pub fn exists(var: &str, bound: Option<&str>, body: Formula) -> Formula {
        Formula::Exists {
            var: var.to_string(),
            bound: bound.map(str::to_string),
            body: Box::new(body),
        }
    }

    /// Number of formula nodes; terms are not counted.
    pub fn node_count(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::Equals(..) => 1,
            Formula::Not(a) => 1 + a.node_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.node_count() + b.node_count()
            }
            Formula::ForAll { body, .. } | Formula::Exists { body, .. } => 1 + body.node_count(),
        }
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::Equals(..) => 0,
            Formula::Not(a) => a.quantifier_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.quantifier_depth().max(b.quantifier_depth())
            }
            Formula::ForAll { body, .. } | Formula::Exists { body, .. } => {
                1 + body.quantifier_depth()
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut term = |t: &Term, bound: &Vec<&str>| {
            if let Term::Var(v) = t {
                if !bound.contains(&v.as_str()) {
                    out.insert(v.clone());
                }
            }
        };
        match self {
            Formula::Atom { args, .. } => args.iter().for_each(|t| term(t, bound)),
            Formula::Equals(a, b) => {
                term(a, bound);
                term(b, bound);
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::ForAll { var, body, .. } | Formula::Exists { var, body, .. } => {
                bound.push(var);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Whether `var` occurs free.
    pub fn mentions_free(&self, var: &str) -> bool {
        match self {
            Formula::Atom { args, .. } => args.iter().any(|t| matches!(t, Term::Var(v) if v == var)),
            Formula::Equals(a, b) => [a, b].iter().any(|t| matches!(t, Term::Var(v) if v == var)),
            Formula::Not(a) => a.mentions_free(var),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.mentions_free(var) || b.mentions_free(var)
            }
            Formula::ForAll { var: v, body, .. } | Formula::Exists { var: v, body, .. } => {
                v != var && body.mentions_free(var)
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::ForAll { .. } | Formula::Exists { .. } => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(_) => 4,
            Formula::Atom { .. } | Formula::Equals(..) => 5,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.precedence();
        if p == 0 || p < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { relation, args } if relation == MEMBERSHIP && args.len() == 2 => {
                write!(f, "{} in {}", args[0], args[1])
            }
            Formula::Atom { relation, args } => {
                let args: Vec<String> = args.iter().map(|t| t.to_string()).collect();
                write!(f, "{relation}({})", args.join(", "))
            }
            Formula::Equals(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(a) => {
                f.write_str("!")?;
                let infix = match &**a {
                    Formula::Equals(..) => true,
                    Formula::Atom { relation, .. } => relation == MEMBERSHIP,
                    _ => false,
                };
                if infix {
                    write!(f, "({a})")
                } else {
                    a.fmt_child(f, 4)
                }
            }
            Formula::And(a, b) => {
                a.fmt_child(f, 3)?;
                f.write_str(" & ")?;
                b.fmt_child(f, 4)
            }
            Formula::Or(a, b) => {
                a.fmt_child(f, 2)?;
                f.write_str(" | ")?;
                b.fmt_child(f, 3)
            }
            Formula::Implies(a, b) => {
                a.fmt_child(f, 2)?;
                f.write_str(" -> ")?;
                b.fmt_child(f, 1)
            }
            Formula::ForAll { var, bound, body } | Formula::Exists { var, bound, body } => {
                let q = if matches!(self, Formula::ForAll { .. }) {
                    "forall"
                } else {
                    "exists"
                };
                match bound {
                    Some(b) => write!(f, "{q} {var} in {b}. "),
                    None => write!(f, "{q} {var}. "),
                }?;
                if body.precedence() == 0 {
                    write!(f, "{body}")
                } else {
                    body.fmt_child(f, 1)
                }
            }
        }
    }
}

/// Relation symbols with arities, plus the number of constant symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub relations: BTreeMap<String, usize>,
    pub constants: usize,
}

impl Signature {
    pub fn of(structure: &Structure) -> Signature {
        Signature {
            relations: structure
                .relations()
                .iter()
                .map(|(n, r)| (n.clone(), r.arity))
                .collect(),
            constants: structure.size(),
        }
    }

    /// Keeps only the named relations; unknown names are returned as errors.
    pub fn restrict<'a>(
        &self,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Result<Signature, String> {
        let mut relations = BTreeMap::new();
        for n in names {
            let arity = self.relations.get(n).ok_or_else(|| n.to_string())?;
            relations.insert(n.to_string(), *arity);
        }
        Ok(Signature {
            relations,
            constants: self.constants,
        })
    }

    pub fn arity(&self, relation: &str) -> Option<usize> {
        if relation == EQUALITY {
            return Some(2);
        }
        self.relations.get(relation).copied()
    }
}
