//! Superstructure levels `V_n(M)` over a finite base and their ultrapowers.
//!
//! A level is materialized as a finite structure whose universe is `V_n`
//! with the membership relation `in` and unary predicates `V0..Vn` for the
//! lower levels; its ultrapower is then an ordinary [`UltrapowerModel`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::filters::{ArraySpec, Domain, Verdict};
use crate::index_algebra::SupportedFunction;
use crate::logic::{
    enumerate_sentences, eval_base, eval_star, LogicError, SentenceBounds, StarValuation,
    TransferLine, TransferReport, Valuation, MEMBERSHIP, PRUNING_RULES,
};
use crate::ultrapower::{tuples, HyperElement, Structure, UltrapowerError, UltrapowerModel};

pub const MAX_BASE: usize = 3;
pub const MAX_LEVEL: usize = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SuperstructureError {
    #[error("level {level} over a base of size {size} is too large to enumerate (base ≤ {MAX_BASE}, level ≤ {MAX_LEVEL})")]
    LevelTooLarge { size: usize, level: usize },
    #[error("identification needs every ultrafilter of the array to be principal")]
    NotPrincipalRegime,
    #[error("level 0 has no lower level")]
    NoLowerLevel,
    #[error("`{0}` is not an element of the level")]
    NotInLevel(String),
    #[error(transparent)]
    Ultrapower(#[from] UltrapowerError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// A base atom or a finite set of lower-rank elements. Atoms precede sets;
/// sets compare lexicographically by their sorted members.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VElement {
    Atom(String),
    Set(BTreeSet<VElement>),
}

impl VElement {
    pub fn atom(name: &str) -> VElement {
        VElement::Atom(name.to_string())
    }

    pub fn set(members: impl IntoIterator<Item = VElement>) -> VElement {
        VElement::Set(members.into_iter().collect())
    }

    /// 0 for atoms, otherwise one more than the largest member rank (1 for
    /// the empty set).
    pub fn rank(&self) -> usize {
        match self {
            VElement::Atom(_) => 0,
            VElement::Set(s) => 1 + s.iter().map(VElement::rank).max().unwrap_or(0),
        }
    }

    /// Payload membership; nothing is a member of an atom.
    pub fn contains(&self, other: &VElement) -> bool {
        match self {
            VElement::Atom(_) => false,
            VElement::Set(s) => s.contains(other),
        }
    }

    pub fn is_set(&self) -> bool {
        matches!(self, VElement::Set(_))
    }
}

impl fmt::Display for VElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VElement::Atom(a) => f.write_str(a),
            VElement::Set(s) => {
                f.write_str("{")?;
                for (i, e) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// `V_n` over the universe of `base`, sorted.
pub fn build_v(base: &Structure, level: usize) -> Result<Vec<VElement>, SuperstructureError> {
    if base.size() > MAX_BASE || level > MAX_LEVEL {
        return Err(SuperstructureError::LevelTooLarge {
            size: base.size(),
            level,
        });
    }
    let mut current: Vec<VElement> = base.universe().iter().map(|a| VElement::atom(a)).collect();
    for _ in 0..level {
        let mut next: BTreeSet<VElement> = current.iter().cloned().collect();
        for mask in 0u64..(1u64 << current.len()) {
            next.insert(VElement::set(
                current
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, e)| e.clone()),
            ));
        }
        current = next.into_iter().collect();
    }
    current.sort();
    Ok(current)
}

pub fn level_predicate(k: usize) -> String {
    format!("V{k}")
}

/// `V_n` as a structure: `in` for membership and `V0..Vn` for rank.
pub fn level_structure(elements: &[VElement], level: usize) -> Result<Structure, UltrapowerError> {
    let index: BTreeMap<&VElement, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut membership = Vec::new();
    for (j, s) in elements.iter().enumerate() {
        if let VElement::Set(members) = s {
            for m in members {
                membership.push(vec![index[m], j]);
            }
        }
    }
    let mut relations = vec![(MEMBERSHIP.to_string(), 2, membership)];
    for k in 0..=level {
        let tuples = elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.rank() <= k)
            .map(|(i, _)| vec![i])
            .collect();
        relations.push((level_predicate(k), 1, tuples));
    }
    Structure::new(elements.iter().map(|e| e.to_string()), relations)
}

/// Outcome of [`StarSuperstructure::identify_as_subset`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Identification {
    /// The class lies in `*V_{n-1}` itself.
    Lower,
    /// The class is identified with the set of lower-level classes that are
    /// its members, each named by the standard element it collapses from.
    Extension(BTreeSet<VElement>),
}

/// `*V_n`, the ultrapower of one superstructure level.
#[derive(Clone, Debug)]
pub struct StarSuperstructure {
    level: usize,
    elements: Vec<VElement>,
    standard: Arc<Structure>,
    model: UltrapowerModel,
}

impl StarSuperstructure {
    pub fn new(
        base: &Structure,
        level: usize,
        array: Arc<ArraySpec>,
    ) -> Result<StarSuperstructure, SuperstructureError> {
        let elements = build_v(base, level)?;
        let standard = Arc::new(level_structure(&elements, level)?);
        let model = UltrapowerModel::new(standard.clone(), array);
        Ok(StarSuperstructure {
            level,
            elements,
            standard,
            model,
        })
    }

    /// Same level, but the ultrapower lifts membership with its arguments
    /// transposed. Only useful to show the checkers notice.
    #[doc(hidden)]
    pub fn with_mutated_membership(&self) -> Result<StarSuperstructure, SuperstructureError> {
        let relations = self.standard.relations().iter().map(|(name, rel)| {
            let tuples = rel
                .tuples
                .iter()
                .map(|t| {
                    if name == MEMBERSHIP {
                        vec![t[1], t[0]]
                    } else {
                        t.clone()
                    }
                })
                .collect();
            (name.clone(), rel.arity, tuples)
        });
        let mutated = Structure::new(self.standard.universe().to_vec(), relations)?;
        Ok(StarSuperstructure {
            model: UltrapowerModel::new(Arc::new(mutated), self.model.array().clone()),
            ..self.clone()
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn elements(&self) -> &[VElement] {
        &self.elements
    }

    pub fn standard(&self) -> &Arc<Structure> {
        &self.standard
    }

    pub fn model(&self) -> &UltrapowerModel {
        &self.model
    }

    pub fn index_of(&self, e: &VElement) -> Result<usize, SuperstructureError> {
        self.elements
            .binary_search(e)
            .map_err(|_| SuperstructureError::NotInLevel(e.to_string()))
    }

    pub fn star_embed(&self, e: &VElement) -> Result<HyperElement, SuperstructureError> {
        Ok(self.model.star_embed(self.index_of(e)?)?)
    }

    /// The class of a function into `V_n`, given by element values.
    pub fn element(&self, f: &SupportedFunction<VElement>) -> Result<HyperElement, SuperstructureError> {
        let mut indices = Vec::with_capacity(f.table().len());
        for v in f.table() {
            indices.push(self.index_of(v)?);
        }
        let mut k = 0;
        let g = f.map(|_| {
            k += 1;
            indices[k - 1]
        });
        Ok(self.model.element(g)?)
    }

    /// Whether `{x : f_e(x) ∈ f_s(x)}` is D-large.
    pub fn star_membership(
        &self,
        e: &HyperElement,
        s: &HyperElement,
    ) -> Result<Verdict, SuperstructureError> {
        Ok(self.model.relation_lift(MEMBERSHIP, &[e, s])?)
    }

    /// Identifies a class of `*V_n` with a subset of `*V_{n-1}`, level by
    /// level. In the all-principal regime the classes of `*V_{n-1}` are
    /// exactly the standard embeddings of `V_{n-1}`.
    pub fn identify_as_subset(&self, s: &HyperElement) -> Result<Identification, SuperstructureError> {
        if !self.model.array().all_principal() {
            return Err(SuperstructureError::NotPrincipalRegime);
        }
        if self.level == 0 {
            return Err(SuperstructureError::NoLowerLevel);
        }
        let lower = level_predicate(self.level - 1);
        if self.model.relation_lift(&lower, &[s])? == Verdict::In {
            return Ok(Identification::Lower);
        }
        let mut extension = BTreeSet::new();
        for (i, e) in self.elements.iter().enumerate() {
            if e.rank() > self.level - 1 {
                continue;
            }
            let c = self.model.star_embed(i)?;
            if self.star_membership(&c, s)? == Verdict::In {
                extension.insert(e.clone());
            }
        }
        Ok(Identification::Extension(extension))
    }

    /// Every class with a representative supported on at most one
    /// coordinate. In the all-principal regime over finite domains these
    /// already exhaust `*V_n`.
    pub fn single_support_classes(&self) -> Result<Vec<HyperElement>, SuperstructureError> {
        let array = self.model.array();
        let size = self.elements.len();
        let mut out: Vec<HyperElement> = (0..size)
            .map(|i| self.model.star_embed(i))
            .collect::<Result<_, _>>()?;
        for l in array.label_ids() {
            let n = match array.domain(l) {
                Domain::Finite(n) => n as usize,
                Domain::Omega => return Err(SuperstructureError::NotPrincipalRegime),
            };
            for table in tuples(size, n) {
                if table.iter().all(|&v| v == table[0]) {
                    continue;
                }
                let f = SupportedFunction::from_fn(array, &[l], |p| table[p[&l] as usize])
                    .map_err(UltrapowerError::from)?;
                out.push(self.model.element(f)?);
            }
        }
        Ok(out)
    }

    /// Checks that set-like classes with the same identified extension are
    /// equal, and that equal classes get the same identification.
    pub fn extensionality_check(
        &self,
        classes: &[HyperElement],
    ) -> Result<ExtensionalityReport, SuperstructureError> {
        let mut groups: BTreeMap<Option<BTreeSet<VElement>>, Vec<usize>> = BTreeMap::new();
        for (i, c) in classes.iter().enumerate() {
            let key = match self.identify_as_subset(c)? {
                Identification::Lower => None,
                Identification::Extension(e) => Some(e),
            };
            groups.entry(key).or_default().push(i);
        }
        let mut report = ExtensionalityReport {
            classes: classes.len(),
            extensions: 0,
            violations: Vec::new(),
        };
        let reps: Vec<usize> = groups.values().map(|g| g[0]).collect();
        for (key, members) in &groups {
            let Some(extension) = key else { continue };
            report.extensions += 1;
            let rep = &classes[members[0]];
            for &m in &members[1..] {
                if self.model.equal(rep, &classes[m])? != Verdict::In {
                    report.violations.push(format!(
                        "{} and {} share extension {} but differ",
                        rep,
                        classes[m],
                        render_set(extension)
                    ));
                }
            }
        }
        for (a, &i) in reps.iter().enumerate() {
            for &j in &reps[a + 1..] {
                if self.model.equal(&classes[i], &classes[j])? == Verdict::In {
                    report.violations.push(format!(
                        "{} and {} are equal but identified differently",
                        classes[i], classes[j]
                    ));
                }
            }
        }
        Ok(report)
    }

    /// Sentences with quantifiers bounded to `V0..Vn` over membership and
    /// equality, compared between `V_n` and `*V_n`.
    pub fn bounded_transfer_check(
        &self,
        max_depth: usize,
        max_nodes: usize,
    ) -> Result<TransferReport, SuperstructureError> {
        let mut bounds = SentenceBounds::new(max_depth, max_nodes, vec![(MEMBERSHIP.to_string(), 2)]);
        bounds.ranges = (0..=self.level).map(|k| Some(level_predicate(k))).collect();
        let mut lines = Vec::new();
        for sentence in enumerate_sentences(&bounds) {
            let base = eval_base(&self.standard, &sentence, &Valuation::new())?;
            let star = eval_star(&self.model, &sentence, &StarValuation::new())?;
            lines.push(TransferLine {
                sentence: sentence.to_string(),
                base,
                star,
                collapsed: None,
            });
        }
        Ok(TransferReport {
            lines,
            pruning: PRUNING_RULES.iter().map(|s| s.to_string()).collect(),
        })
    }
}

fn render_set(s: &BTreeSet<VElement>) -> String {
    VElement::Set(s.clone()).to_string()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionalityReport {
    pub classes: usize,
    /// Distinct extensions among set-like classes.
    pub extensions: usize,
    pub violations: Vec<String>,
}

impl ExtensionalityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::UltrafilterOracle;
    use crate::logic::{parse, Signature};

    fn two_atoms() -> Structure {
        Structure::new(["a", "b"], []).unwrap()
    }

    fn principal(n: u64, p: u64) -> Arc<ArraySpec> {
        Arc::new(
            ArraySpec::from_oracles([("l", UltrafilterOracle::principal(Domain::Finite(n), p).unwrap())])
                .unwrap(),
        )
    }

    #[test]
    fn level_sizes() {
        let m = two_atoms();
        assert_eq!(build_v(&m, 0).unwrap().len(), 2);
        assert_eq!(build_v(&m, 1).unwrap().len(), 6);
        // the four rank-1 sets lie in both V_1 and P(V_1)
        assert_eq!(build_v(&m, 2).unwrap().len(), 2 + 64);
        assert!(matches!(build_v(&m, 3), Err(SuperstructureError::LevelTooLarge { .. })));
        let four = Structure::numbered(4, []).unwrap();
        assert!(matches!(build_v(&four, 1), Err(SuperstructureError::LevelTooLarge { .. })));
    }

    #[test]
    fn canonical_order_and_rendering() {
        let v1: Vec<String> = build_v(&two_atoms(), 1).unwrap().iter().map(|e| e.to_string()).collect();
        assert_eq!(v1, ["a", "b", "{}", "{a}", "{a, b}", "{b}"]);
        let e = VElement::set([VElement::atom("a"), VElement::set([VElement::atom("a"), VElement::atom("b")])]);
        assert_eq!(e.to_string(), "{a, {a, b}}");
        assert_eq!(e.rank(), 2);
        assert_eq!(VElement::set([]).rank(), 1);
    }

    #[test]
    fn membership_examples() {
        let star = StarSuperstructure::new(&two_atoms(), 1, principal(2, 0)).unwrap();
        let a = VElement::atom("a");
        let b = VElement::atom("b");
        let ab = VElement::set([a.clone(), b.clone()]);
        let empty = VElement::set([]);
        let ca = star.star_embed(&a).unwrap();
        assert_eq!(star.star_membership(&ca, &star.star_embed(&ab).unwrap()).unwrap(), Verdict::In);
        for e in star.elements() {
            let ce = star.star_embed(e).unwrap();
            assert_eq!(star.star_membership(&ce, &star.star_embed(&empty).unwrap()).unwrap(), Verdict::Out);
        }
    }

    #[test]
    fn identification_examples() {
        let star = StarSuperstructure::new(&two_atoms(), 1, principal(2, 0)).unwrap();
        let a = VElement::atom("a");
        let b = VElement::atom("b");
        let sa = VElement::set([a.clone()]);
        let sb = VElement::set([b.clone()]);
        assert_eq!(
            star.identify_as_subset(&star.star_embed(&sa).unwrap()).unwrap(),
            Identification::Extension(BTreeSet::from([a.clone()]))
        );
        assert_eq!(
            star.identify_as_subset(&star.star_embed(&a).unwrap()).unwrap(),
            Identification::Lower
        );
        let array = star.model().array().clone();
        let l = array.label_id("l").unwrap();
        let f = SupportedFunction::from_fn(&array, &[l], |p| if p[&l] == 0 { sa.clone() } else { sb.clone() }).unwrap();
        let s = star.element(&f).unwrap();
        assert_eq!(
            star.identify_as_subset(&s).unwrap(),
            Identification::Extension(BTreeSet::from([a]))
        );
    }

    #[test]
    fn bounded_transfer_example() {
        let star = StarSuperstructure::new(&two_atoms(), 1, principal(3, 1)).unwrap();
        let sig = Signature::of(star.standard());
        let f = parse("forall s in V1. forall a in V0. a in s | !(a in s)", &sig).unwrap();
        assert!(eval_base(star.standard(), &f, &Valuation::new()).unwrap());
        assert_eq!(eval_star(star.model(), &f, &StarValuation::new()).unwrap(), Verdict::In);
    }

    #[test]
    fn mutated_membership_is_noticed() {
        let star = StarSuperstructure::new(&two_atoms(), 1, principal(2, 0)).unwrap();
        let report = star.with_mutated_membership().unwrap().bounded_transfer_check(2, 4).unwrap();
        assert!(report.counterexample_count() > 0);
    }
}
