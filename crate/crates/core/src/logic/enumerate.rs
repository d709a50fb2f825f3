//! Exhaustive sentence enumeration up to quantifier depth and node count.

use std::collections::HashMap;
use std::rc::Rc;

use super::formula::{Formula, Term};

/// Bound variables are named by binding depth: the outermost quantifier
/// binds `x`, the next `y`, and so on.
pub const VARIABLES: [&str; 8] = ["x", "y", "z", "u", "v", "w", "p", "q"];

/// Symmetry pruning applied by [`enumerate_sentences`], in report order.
pub const PRUNING_RULES: [&str; 7] = [
    "alpha: bound variables are named by binding depth (x, y, z, ...), so alpha-variants are generated once",
    "vacuous: a quantifier whose variable does not occur free in its body is skipped",
    "commutative: for & and |, the left operand precedes the right in generation order (no swapped duplicates, no p & p)",
    "equality: t1 = t2 only for distinct terms with t1 before t2",
    "double-negation: !!p is skipped",
    "implication: p -> p is skipped",
    "nodes: the node count covers connectives, quantifiers and atoms; terms are not counted",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceBounds {
    pub max_depth: usize,
    pub max_nodes: usize,
    /// Relation symbols (name, arity) usable in atoms.
    pub relations: Vec<(String, usize)>,
    pub equality: bool,
    /// Constant symbols `c0..c{constants-1}` usable as terms.
    pub constants: usize,
    /// Quantifier ranges: `None` is the whole universe, `Some(B)` a unary
    /// relation.
    pub ranges: Vec<Option<String>>,
}

impl SentenceBounds {
    pub fn new(max_depth: usize, max_nodes: usize, relations: Vec<(String, usize)>) -> Self {
        SentenceBounds {
            max_depth,
            max_nodes,
            relations,
            equality: true,
            constants: 0,
            ranges: vec![None],
        }
    }
}

type Key = (usize, usize, usize);

struct Generator<'b> {
    bounds: &'b SentenceBounds,
    memo: HashMap<Key, Rc<Vec<Formula>>>,
}

impl Generator<'_> {
    fn terms(&self, scope: usize) -> Vec<Term> {
        (0..scope)
            .map(|i| Term::var(VARIABLES[i]))
            .chain((0..self.bounds.constants).map(Term::Const))
            .collect()
    }

    fn atoms(&self, scope: usize) -> Vec<Formula> {
        let terms = self.terms(scope);
        let mut out = Vec::new();
        if terms.is_empty() {
            return out;
        }
        for (name, arity) in &self.bounds.relations {
            let mut idx = vec![0usize; *arity];
            loop {
                out.push(Formula::atom(
                    name,
                    idx.iter().map(|&i| terms[i].clone()).collect(),
                ));
                let mut k = *arity;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < terms.len() {
                        break;
                    }
                    idx[k] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
        if self.bounds.equality {
            for i in 0..terms.len() {
                for j in i + 1..terms.len() {
                    out.push(Formula::Equals(terms[i].clone(), terms[j].clone()));
                }
            }
        }
        out
    }

    /// Formulas with exactly `nodes` nodes, free variables among the first
    /// `scope`, and at most `depth` nested quantifiers.
    fn exact(&mut self, nodes: usize, scope: usize, depth: usize) -> Rc<Vec<Formula>> {
        if let Some(v) = self.memo.get(&(nodes, scope, depth)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if nodes == 1 {
            out = self.atoms(scope);
        } else if nodes >= 2 {
            for f in self.exact(nodes - 1, scope, depth).iter() {
                if !matches!(f, Formula::Not(_)) {
                    out.push(Formula::not(f.clone()));
                }
            }
            for i in 1..nodes - 1 {
                let j = nodes - 1 - i;
                let left = self.exact(i, scope, depth);
                let right = self.exact(j, scope, depth);
                for (a_idx, a) in left.iter().enumerate() {
                    for (b_idx, b) in right.iter().enumerate() {
                        if i < j || (i == j && a_idx < b_idx) {
                            out.push(Formula::and(a.clone(), b.clone()));
                            out.push(Formula::or(a.clone(), b.clone()));
                        }
                        if i != j || a_idx != b_idx {
                            out.push(Formula::implies(a.clone(), b.clone()));
                        }
                    }
                }
            }
            if depth > 0 && scope < VARIABLES.len() {
                let var = VARIABLES[scope];
                let bodies = self.exact(nodes - 1, scope + 1, depth - 1);
                for range in &self.bounds.ranges {
                    for body in bodies.iter().filter(|b| b.mentions_free(var)) {
                        out.push(Formula::forall(var, range.as_deref(), body.clone()));
                        out.push(Formula::exists(var, range.as_deref(), body.clone()));
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.memo.insert((nodes, scope, depth), out.clone());
        out
    }
}

/// All sentences within `bounds`, ordered by node count and then by
/// generation order.
pub fn enumerate_sentences(bounds: &SentenceBounds) -> Vec<Formula> {
    enumerate_formulas(bounds, 0)
}

/// All formulas within `bounds` whose free variables are among the first
/// `free` entries of [`VARIABLES`]; quantifiers bind the following ones.
pub fn enumerate_formulas(bounds: &SentenceBounds, free: usize) -> Vec<Formula> {
    let mut g = Generator {
        bounds,
        memo: HashMap::new(),
    };
    let mut out = Vec::new();
    for nodes in 1..=bounds.max_nodes {
        out.extend(g.exact(nodes, free, bounds.max_depth).iter().cloned());
    }
    out
}
