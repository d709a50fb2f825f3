//! The ultrapower `F/D` of a finite relational structure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::filters::{ArraySpec, Classification, Domain, LabelId, OracleKind, PeriodicSet, Verdict};
use crate::index_algebra::{
    same_array, tabulate_set, AlgebraError, Cuts, Point, SupportedFunction, SupportedSet,
};

/// Name under which equality is available as a relation.
pub const EQUALITY: &str = "=";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UltrapowerError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("element index {0} is outside the universe")]
    ElementOutOfRange(usize),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("duplicate relation `{0}`")]
    DuplicateRelation(String),
    #[error("relation `{relation}` has arity {expected}, got {found} arguments")]
    ArityMismatch {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("arguments belong to a different array than the model")]
    ArrayMismatch,
    #[error("principal collapse needs every ultrafilter to be principal; `{0}` is not")]
    NotAllPrincipal(String),
    #[error("ultrafilter on `{0}` is principal, a free ultrafilter is needed")]
    NotFree(String),
    #[error("coordinate `{0}` must range over ω")]
    NotOmega(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

// ---------------------------------------------------------------------------
// Structures
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A finite relational structure; elements are referred to by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    universe: Vec<String>,
    relations: BTreeMap<String, Relation>,
}

impl Structure {
    pub fn new<S: Into<String>>(
        universe: impl IntoIterator<Item = S>,
        relations: impl IntoIterator<Item = (String, usize, Vec<Vec<usize>>)>,
    ) -> Result<Self, UltrapowerError> {
        let universe: Vec<String> = universe.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for e in &universe {
            if !seen.insert(e.as_str()) {
                return Err(UltrapowerError::DuplicateElement(e.clone()));
            }
        }
        let mut rels = BTreeMap::new();
        for (name, arity, tuples) in relations {
            if name == EQUALITY || rels.contains_key(&name) {
                return Err(UltrapowerError::DuplicateRelation(name));
            }
            let mut set = BTreeSet::new();
            for t in tuples {
                if t.len() != arity {
                    return Err(UltrapowerError::ArityMismatch {
                        relation: name,
                        expected: arity,
                        found: t.len(),
                    });
                }
                if let Some(&bad) = t.iter().find(|&&i| i >= universe.len()) {
                    return Err(UltrapowerError::ElementOutOfRange(bad));
                }
                set.insert(t);
            }
            rels.insert(name, Relation { arity, tuples: set });
        }
        Ok(Structure {
            universe,
            relations: rels,
        })
    }

    /// Universe named `0, 1, …, size-1`.
    pub fn numbered(
        size: usize,
        relations: impl IntoIterator<Item = (String, usize, Vec<Vec<usize>>)>,
    ) -> Result<Self, UltrapowerError> {
        Self::new((0..size).map(|i| i.to_string()), relations)
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn name(&self, element: usize) -> &str {
        &self.universe[element]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.universe.iter().position(|e| e == name)
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn arity(&self, relation: &str) -> Option<usize> {
        if relation == EQUALITY {
            return Some(2);
        }
        self.relations.get(relation).map(|r| r.arity)
    }

    pub fn holds(&self, relation: &str, args: &[usize]) -> Result<bool, UltrapowerError> {
        let arity = self
            .arity(relation)
            .ok_or_else(|| UltrapowerError::UnknownRelation(relation.to_string()))?;
        if arity != args.len() {
            return Err(UltrapowerError::ArityMismatch {
                relation: relation.to_string(),
                expected: arity,
                found: args.len(),
            });
        }
        if relation == EQUALITY {
            return Ok(args[0] == args[1]);
        }
        Ok(self.relations[relation].tuples.contains(args))
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "universe={{{}}}", self.universe.join(","))?;
        for (name, rel) in &self.relations {
            let tuples: Vec<String> = rel
                .tuples
                .iter()
                .map(|t| {
                    let names: Vec<&str> = t.iter().map(|&i| self.name(i)).collect();
                    format!("({})", names.join(","))
                })
                .collect();
            write!(f, " {name}/{}={{{}}}", rel.arity, tuples.join(","))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// The ultrapower
// ---------------------------------------------------------------------------

/// The class `[f]` of a finite-support function into the base universe.
#[derive(Clone, Debug)]
pub struct HyperElement {
    rep: SupportedFunction<usize>,
}

impl HyperElement {
    pub fn representative(&self) -> &SupportedFunction<usize> {
        &self.rep
    }

    pub fn array(&self) -> &Arc<ArraySpec> {
        self.rep.array()
    }
}

impl fmt::Display for HyperElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

#[derive(Clone, Debug)]
pub struct UltrapowerModel {
    base: Arc<Structure>,
    array: Arc<ArraySpec>,
}

impl UltrapowerModel {
    pub fn new(base: Arc<Structure>, array: Arc<ArraySpec>) -> Self {
        UltrapowerModel { base, array }
    }

    pub fn base(&self) -> &Arc<Structure> {
        &self.base
    }

    pub fn array(&self) -> &Arc<ArraySpec> {
        &self.array
    }

    /// `*r`, the class of the constant function `c_r`.
    pub fn star_embed(&self, r: usize) -> Result<HyperElement, UltrapowerError> {
        if r >= self.base.size() {
            return Err(UltrapowerError::ElementOutOfRange(r));
        }
        Ok(HyperElement {
            rep: SupportedFunction::constant(&self.array, r),
        })
    }

    pub fn star_embed_named(&self, name: &str) -> Result<HyperElement, UltrapowerError> {
        let r = self
            .base
            .index_of(name)
            .ok_or_else(|| UltrapowerError::UnknownElement(name.to_string()))?;
        self.star_embed(r)
    }

    /// The class of `f`, after checking it maps into the universe.
    pub fn element(&self, f: SupportedFunction<usize>) -> Result<HyperElement, UltrapowerError> {
        if !same_array(f.array(), &self.array) {
            return Err(UltrapowerError::ArrayMismatch);
        }
        if let Some(&bad) = f.table().iter().find(|&&v| v >= self.base.size()) {
            return Err(UltrapowerError::ElementOutOfRange(bad));
        }
        Ok(HyperElement { rep: f })
    }

    pub fn equal(&self, a: &HyperElement, b: &HyperElement) -> Result<Verdict, UltrapowerError> {
        self.relation_lift(EQUALITY, &[a, b])
    }

    /// `{x : R(f_1(x), …, f_k(x))}`.
    pub fn lift_set(
        &self,
        relation: &str,
        args: &[&HyperElement],
    ) -> Result<SupportedSet, UltrapowerError> {
        let arity = self
            .base
            .arity(relation)
            .ok_or_else(|| UltrapowerError::UnknownRelation(relation.to_string()))?;
        if arity != args.len() {
            return Err(UltrapowerError::ArityMismatch {
                relation: relation.to_string(),
                expected: arity,
                found: args.len(),
            });
        }
        let mut cuts = Cuts::new();
        for a in args {
            if !same_array(a.array(), &self.array) {
                return Err(UltrapowerError::ArrayMismatch);
            }
            cuts.add_function(&a.rep);
        }
        let mut values = Vec::with_capacity(args.len());
        tabulate_set(&self.array, &cuts, |p| {
            values.clear();
            values.extend(args.iter().map(|a| *a.rep.at(p)));
            self.base.holds(relation, &values)
        })
    }

    /// Whether the lifted relation holds of the classes.
    pub fn relation_lift(
        &self,
        relation: &str,
        args: &[&HyperElement],
    ) -> Result<Verdict, UltrapowerError> {
        Ok(self.lift_set(relation, args)?.fubini_member())
    }

    /// The coordinatewise principal point, when every oracle is principal.
    pub fn principal_point(&self) -> Result<Point, UltrapowerError> {
        self.array
            .label_ids()
            .map(|l| match self.array.oracle(l).kind() {
                OracleKind::Principal(p) => Ok((l, p)),
                OracleKind::FactorialTower => Err(UltrapowerError::NotAllPrincipal(
                    self.array.label(l).to_string(),
                )),
            })
            .collect()
    }

    /// Verifies that `[f] ↦ f(p̂)` is an isomorphism onto the base structure.
    pub fn principal_collapse(&self) -> Result<Collapse, UltrapowerError> {
        self.principal_collapse_with(&CollapseOptions::default())
    }

    pub fn principal_collapse_with(
        &self,
        options: &CollapseOptions,
    ) -> Result<Collapse, UltrapowerError> {
        let point = self.principal_point()?;
        let functions = self.collapse_sample(options)?;
        let size = self.base.size();
        let mut report = VerificationReport::default();
        let constants: Vec<HyperElement> =
            (0..size).map(|r| self.star_embed(r)).collect::<Result<_, _>>()?;

        // well-defined and injective: each f is equivalent to exactly one constant
        for f in functions.iter().chain(&constants) {
            let image = *f.rep.at(&point);
            for (s, c) in constants.iter().enumerate() {
                report.push(
                    EQUALITY,
                    vec![f.to_string(), c.to_string()],
                    self.equal(f, c)?,
                    Verdict::from_bool(s == image),
                );
            }
        }

        for (name, rel) in self.base.relations() {
            // every class has a constant representative, so constant tuples
            // exhaust the quotient
            for tuple in tuples(size, rel.arity) {
                let args: Vec<&HyperElement> = tuple.iter().map(|&i| &constants[i]).collect();
                report.push(
                    name,
                    args.iter().map(|a| a.to_string()).collect(),
                    self.relation_lift(name, &args)?,
                    Verdict::from_bool(self.base.holds(name, &tuple)?),
                );
            }
            // and lifting is computed correctly on non-constant representatives
            for f in &functions {
                let image = *f.rep.at(&point);
                for slot in 0..rel.arity {
                    for rest in tuples(size, rel.arity - 1) {
                        let mut values = rest.clone();
                        values.insert(slot, image);
                        let mut args: Vec<&HyperElement> =
                            rest.iter().map(|&i| &constants[i]).collect();
                        args.insert(slot, f);
                        report.push(
                            name,
                            args.iter().map(|a| a.to_string()).collect(),
                            self.relation_lift(name, &args)?,
                            Verdict::from_bool(self.base.holds(name, &values)?),
                        );
                    }
                }
            }
        }

        let surjective = constants
            .iter()
            .enumerate()
            .all(|(r, c)| *c.rep.at(&point) == r);
        Ok(Collapse {
            point,
            classes: size,
            functions_checked: functions.len() + constants.len(),
            surjective,
            report,
        })
    }

    /// Constants, all functions supported on one coordinate, and all (or a
    /// fixed-seed sample of) functions supported on every coordinate.
    fn collapse_sample(
        &self,
        options: &CollapseOptions,
    ) -> Result<Vec<HyperElement>, UltrapowerError> {
        let size = self.base.size();
        let labels: Vec<LabelId> = self.array.label_ids().collect();
        let domain_size = |l: LabelId| match self.array.domain(l) {
            Domain::Finite(n) => Ok(n as usize),
            Domain::Omega => Err(UltrapowerError::Algebra(AlgebraError::InfiniteDomain(
                self.array.label(l).to_string(),
            ))),
        };
        let mut out = Vec::new();
        for &l in &labels {
            let n = domain_size(l)?;
            for table in tuples(size, n) {
                let f = SupportedFunction::from_fn(&self.array, &[l], |p| table[p[&l] as usize])?;
                out.push(self.element(f)?);
            }
        }
        if labels.len() > 1 {
            let cells: usize = labels
                .iter()
                .map(|&l| domain_size(l))
                .product::<Result<usize, _>>()?;
            let total = (size as f64).powi(cells as i32);
            if total <= options.exhaustive_limit as f64 {
                for table in tuples(size, cells) {
                    out.push(self.tabulated(&labels, &table)?);
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
                for _ in 0..options.samples {
                    let table: Vec<usize> = (0..cells).map(|_| rng.gen_range(0..size)).collect();
                    out.push(self.tabulated(&labels, &table)?);
                }
            }
        }
        Ok(out)
    }

    fn tabulated(&self, labels: &[LabelId], table: &[usize]) -> Result<HyperElement, UltrapowerError> {
        let mut k = 0;
        let f = SupportedFunction::from_fn(&self.array, labels, |_| {
            k += 1;
            table[k - 1]
        })?;
        self.element(f)
    }
}

/// All tuples over `{0..size-1}` of the given length, lexicographically.
pub(crate) fn tuples(size: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..size).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug)]
pub struct CollapseOptions {
    /// Enumerate all full-support functions when there are at most this many.
    pub exhaustive_limit: usize,
    /// Otherwise check this many seeded random ones.
    pub samples: usize,
    pub seed: u64,
}

impl Default for CollapseOptions {
    fn default() -> Self {
        CollapseOptions {
            exhaustive_limit: 729,
            samples: 64,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub relation: String,
    pub args: Vec<String>,
    pub verdict: Verdict,
    pub expected: Verdict,
}

impl CheckLine {
    pub fn ok(&self) -> bool {
        self.verdict == self.expected
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} ({}) {} expected={}",
            if self.ok() { "ok" } else { "FAIL" },
            self.relation,
            self.args.join(", "),
            self.verdict,
            self.expected
        )
    }
}

/// One line per checked tuple.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub lines: Vec<CheckLine>,
}

impl VerificationReport {
    fn push(&mut self, relation: &str, args: Vec<String>, verdict: Verdict, expected: Verdict) {
        self.lines.push(CheckLine {
            relation: relation.to_string(),
            args,
            verdict,
            expected,
        });
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| !l.ok())
    }

    pub fn all_ok(&self) -> bool {
        self.lines.iter().all(CheckLine::ok)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Outcome of [`UltrapowerModel::principal_collapse`].
#[derive(Clone, Debug)]
pub struct Collapse {
    pub point: Point,
    pub classes: usize,
    pub functions_checked: usize,
    pub surjective: bool,
    pub report: VerificationReport,
}

impl Collapse {
    pub fn image(&self, element: &HyperElement) -> usize {
        *element.rep.at(&self.point)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.surjective && self.report.all_ok()
    }
}

// ---------------------------------------------------------------------------
// Properness
// ---------------------------------------------------------------------------

/// The class of the projection `x ↦ x(label)` into ω.
#[derive(Clone, Debug)]
pub struct Projection {
    array: Arc<ArraySpec>,
    label: LabelId,
}

impl Projection {
    pub fn label(&self) -> LabelId {
        self.label
    }

    fn query(&self, values: PeriodicSet) -> (SupportedSet, Verdict) {
        let set = SupportedSet::constraint(&self.array, self.label, values)
            .expect("label checked on construction")
            .normalize();
        let verdict = set.fubini_member();
        (set, verdict)
    }

    /// `[x ↦ x(a)] = *r`.
    pub fn equals_standard(&self, r: u64) -> Verdict {
        self.query(PeriodicSet::singleton(r)).1
    }

    /// `[x ↦ x(a)] > *r`.
    pub fn exceeds_standard(&self, r: u64) -> Verdict {
        self.query(PeriodicSet::above(r)).1
    }
}

#[derive(Clone, Debug)]
pub struct WitnessQuery {
    pub description: String,
    pub set: SupportedSet,
    pub verdict: Verdict,
    pub expected: Verdict,
}

#[derive(Clone, Debug)]
pub struct ProperWitness {
    pub element: Projection,
    pub log: Vec<WitnessQuery>,
}

impl ProperWitness {
    pub fn distinct_count(&self) -> usize {
        self.count("≠")
    }

    pub fn exceeds_count(&self) -> usize {
        self.count(">")
    }

    fn count(&self, tag: &str) -> usize {
        self.log
            .iter()
            .filter(|q| q.description.contains(tag) && q.verdict == q.expected)
            .count()
    }

    pub fn holds(&self) -> bool {
        self.log.iter().all(|q| q.verdict == q.expected)
    }
}

/// Shows that the projection onto a free ω-coordinate differs from, and
/// exceeds, every sampled standard element.
pub fn properness_witness(
    array: &Arc<ArraySpec>,
    label: LabelId,
    samples: impl IntoIterator<Item = u64>,
) -> Result<ProperWitness, UltrapowerError> {
    if !array.contains_label(label) {
        return Err(AlgebraError::UnknownLabel(label.0).into());
    }
    let name = array.label(label).to_string();
    if array.domain(label) != Domain::Omega {
        return Err(UltrapowerError::NotOmega(name));
    }
    if let Classification::Principal(_) = array.oracle(label).classify() {
        return Err(UltrapowerError::NotFree(name));
    }
    let element = Projection {
        array: array.clone(),
        label,
    };
    let mut log = Vec::new();
    for r in samples {
        let (set, verdict) = element.query(PeriodicSet::singleton(r));
        log.push(WitnessQuery {
            description: format!("[x({name})] ≠ *{r}: query {set}"),
            set,
            verdict,
            expected: Verdict::Out,
        });
        let (set, verdict) = element.query(PeriodicSet::above(r));
        log.push(WitnessQuery {
            description: format!("[x({name})] > *{r}: query {set}"),
            set,
            verdict,
            expected: Verdict::In,
        });
    }
    Ok(ProperWitness { element, log })
}
