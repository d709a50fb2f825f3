//! The index set `I = N^A`, its algebra of finite-support subsets, the
//! finite-support functions on it, and membership in the Fubini product
//! `D = ⊗ D_a`.
//!
//! A [`SupportedSet`] is a disjunction of clauses; a clause is a conjunction
//! of per-coordinate constraints `x(a) ∈ S` with `S` a [`PeriodicSet`]. All
//! Boolean operations go through a common tabulation step: the constraint
//! sets mentioned on each coordinate are refined into atoms, the set is
//! evaluated once per tuple of atoms, and the resulting truth table is
//! converted back into a canonical DNF over the coordinates it really
//! depends on.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::filters::{ArraySpec, Domain, LabelId, Mutation, PeriodicSet, Verdict};

pub type Point = BTreeMap<LabelId, u64>;
pub type Clause = BTreeMap<LabelId, PeriodicSet>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("operands are governed by different arrays")]
    ArrayMismatch,
    #[error("label #{0} does not exist in the array")]
    UnknownLabel(usize),
    #[error("point assigns no value to coordinate `{0}`")]
    MissingCoordinate(String),
    #[error("value {value} is outside the domain of coordinate `{label}`")]
    ValueOutsideDomain { label: String, value: u64 },
    #[error("guards on coordinate `{0}` do not partition its domain")]
    GuardsNotPartition(String),
    #[error("support labels must be distinct and listed in array order")]
    UnsortedSupport,
    #[error("table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("coordinate `{0}` ranges over ω and needs explicit guards")]
    InfiniteDomain(String),
}

pub(crate) fn same_array(a: &Arc<ArraySpec>, b: &Arc<ArraySpec>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn check_label(array: &ArraySpec, label: LabelId) -> Result<(), AlgebraError> {
    if array.contains_label(label) {
        Ok(())
    } else {
        Err(AlgebraError::UnknownLabel(label.0))
    }
}

// ---------------------------------------------------------------------------
// Atom grids
// ---------------------------------------------------------------------------

/// Sets that cut the domains of some coordinates.
#[derive(Clone, Debug, Default)]
pub struct Cuts(BTreeMap<LabelId, BTreeSet<PeriodicSet>>);

impl Cuts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, label: LabelId, set: PeriodicSet) {
        self.0.entry(label).or_default().insert(set);
    }

    pub fn touch(&mut self, label: LabelId) {
        self.0.entry(label).or_default();
    }

    pub fn add_set(&mut self, set: &SupportedSet) {
        for clause in &set.clauses {
            for (&label, values) in clause {
                self.add(label, values.clone());
            }
        }
    }

    pub fn add_function<T>(&mut self, f: &SupportedFunction<T>) {
        for (&label, guards) in f.labels.iter().zip(&f.guards) {
            for g in guards {
                self.add(label, g.clone());
            }
        }
    }
}

/// The coarsest partition of each cut coordinate's domain that refines
/// every cut on it.
#[derive(Clone, Debug)]
pub(crate) struct Grid {
    labels: Vec<LabelId>,
    atoms: Vec<Vec<PeriodicSet>>,
}

impl Grid {
    pub(crate) fn new(array: &ArraySpec, cuts: &Cuts) -> Grid {
        let mut labels = Vec::new();
        let mut atoms = Vec::new();
        for (&label, sets) in &cuts.0 {
            let domain = array.domain(label);
            let mut cells = vec![domain.full()];
            for s in sets {
                let s = domain.clip(s);
                cells = cells
                    .iter()
                    .flat_map(|c| [c.intersection(&s), c.difference(&s)])
                    .filter(|c| !c.is_empty())
                    .collect();
            }
            cells.sort();
            labels.push(label);
            atoms.push(cells);
        }
        Grid { labels, atoms }
    }

    fn len(&self) -> usize {
        self.atoms.iter().map(Vec::len).product()
    }

    /// Evaluates `f` at one representative point of every cell, row-major
    /// with the first label most significant.
    fn tabulate<T, E>(&self, mut f: impl FnMut(&Point) -> Result<T, E>) -> Result<Vec<T>, E> {
        let reps: Vec<Vec<u64>> = self
            .atoms
            .iter()
            .map(|cells| {
                cells
                    .iter()
                    .map(|c| c.min_element().expect("atoms are nonempty"))
                    .collect()
            })
            .collect();
        let mut out = Vec::with_capacity(self.len());
        let mut digits = vec![0usize; self.labels.len()];
        let mut point: Point = self
            .labels
            .iter()
            .zip(&reps)
            .map(|(&l, r)| (l, r[0]))
            .collect();
        loop {
            out.push(f(&point)?);
            // odometer increment, last coordinate fastest
            let mut i = self.labels.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < reps[i].len() {
                    point.insert(self.labels[i], reps[i][digits[i]]);
                    break;
                }
                digits[i] = 0;
                point.insert(self.labels[i], reps[i][0]);
            }
        }
    }
}

/// A truth table over atoms, convertible to canonical DNF.
struct Table {
    labels: Vec<LabelId>,
    atoms: Vec<Vec<PeriodicSet>>,
    cells: Vec<bool>,
}

impl Table {
    fn stride(&self, i: usize) -> usize {
        self.atoms[i + 1..].iter().map(Vec::len).product()
    }

    fn depends_on(&self, i: usize) -> bool {
        let stride = self.stride(i);
        let size = self.atoms[i].len();
        let block = stride * size;
        (0..self.cells.len())
            .filter(|c| (c % block) < stride)
            .any(|c| (1..size).any(|j| self.cells[c + j * stride] != self.cells[c]))
    }

    /// Drops coordinate `i`, keeping the cells where its digit is 0.
    fn project(self, i: usize) -> Table {
        let stride = self.stride(i);
        let block = stride * self.atoms[i].len();
        let cells = (0..self.cells.len())
            .filter(|c| (c % block) < stride)
            .map(|c| self.cells[c])
            .collect();
        let mut labels = self.labels;
        let mut atoms = self.atoms;
        labels.remove(i);
        atoms.remove(i);
        Table {
            labels,
            atoms,
            cells,
        }
    }

    fn into_dnf(mut self) -> Vec<Clause> {
        if self.cells.iter().all(|&b| !b) {
            return Vec::new();
        }
        if self.cells.iter().all(|&b| b) {
            return vec![Clause::new()];
        }
        let mut i = 0;
        while i < self.labels.len() {
            if self.depends_on(i) {
                i += 1;
            } else {
                self = self.project(i);
            }
        }
        let stride = self.stride(0);
        let mut groups: BTreeMap<&[bool], Vec<usize>> = BTreeMap::new();
        for j in 0..self.atoms[0].len() {
            groups
                .entry(&self.cells[j * stride..(j + 1) * stride])
                .or_default()
                .push(j);
        }
        let mut clauses = Vec::new();
        for (slice, members) in groups {
            if slice.iter().all(|&b| !b) {
                continue;
            }
            let values = members
                .iter()
                .fold(PeriodicSet::empty(), |acc, &j| acc.union(&self.atoms[0][j]));
            let rest = Table {
                labels: self.labels[1..].to_vec(),
                atoms: self.atoms[1..].to_vec(),
                cells: slice.to_vec(),
            };
            for mut clause in rest.into_dnf() {
                clause.insert(self.labels[0], values.clone());
                clauses.push(clause);
            }
        }
        clauses.sort();
        clauses
    }
}

/// Builds the set `{x : pred(x)}`, where `pred` must only depend on `x`
/// through the atoms generated by `cuts`.
pub fn tabulate_set<E>(
    array: &Arc<ArraySpec>,
    cuts: &Cuts,
    pred: impl FnMut(&Point) -> Result<bool, E>,
) -> Result<SupportedSet, E> {
    let grid = Grid::new(array, cuts);
    let cells = grid.tabulate(pred)?;
    let table = Table {
        labels: grid.labels,
        atoms: grid.atoms,
        cells,
    };
    Ok(SupportedSet {
        array: array.clone(),
        clauses: table.into_dnf(),
        normalized: true,
    })
}

/// Builds the function `x ↦ f(x)` with the atoms of `cuts` as guards.
pub fn tabulate_function<T, E>(
    array: &Arc<ArraySpec>,
    cuts: &Cuts,
    f: impl FnMut(&Point) -> Result<T, E>,
) -> Result<SupportedFunction<T>, E> {
    let grid = Grid::new(array, cuts);
    let table = grid.tabulate(f)?;
    Ok(SupportedFunction {
        array: array.clone(),
        labels: grid.labels,
        guards: grid.atoms,
        table,
    })
}

// ---------------------------------------------------------------------------
// SupportedSet
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersect,
    Complement,
}

/// A finite-support subset of `I`, as a DNF over coordinate constraints.
#[derive(Clone, Debug)]
pub struct SupportedSet {
    array: Arc<ArraySpec>,
    clauses: Vec<Clause>,
    normalized: bool,
}

impl PartialEq for SupportedSet {
    fn eq(&self, other: &Self) -> bool {
        same_array(&self.array, &other.array) && self.clauses == other.clauses
    }
}

impl Eq for SupportedSet {}

impl SupportedSet {
    pub fn full(array: &Arc<ArraySpec>) -> Self {
        SupportedSet {
            array: array.clone(),
            clauses: vec![Clause::new()],
            normalized: true,
        }
    }

    pub fn empty(array: &Arc<ArraySpec>) -> Self {
        SupportedSet {
            array: array.clone(),
            clauses: Vec::new(),
            normalized: true,
        }
    }

    /// `{x : x(label) ∈ values}`.
    pub fn constraint(
        array: &Arc<ArraySpec>,
        label: LabelId,
        values: PeriodicSet,
    ) -> Result<Self, AlgebraError> {
        Self::from_clauses(array, [vec![(label, values)]])
    }

    /// Builds a set from raw clauses; constraints on the same label within a
    /// clause are intersected. The result is not normalized.
    pub fn from_clauses(
        array: &Arc<ArraySpec>,
        clauses: impl IntoIterator<Item = Vec<(LabelId, PeriodicSet)>>,
    ) -> Result<Self, AlgebraError> {
        let mut out = Vec::new();
        for raw in clauses {
            let mut clause = Clause::new();
            for (label, values) in raw {
                check_label(array, label)?;
                let values = array.domain(label).clip(&values);
                let merged = match clause.get(&label) {
                    Some(prev) => prev.intersection(&values),
                    None => values,
                };
                clause.insert(label, merged);
            }
            out.push(clause);
        }
        Ok(SupportedSet {
            array: array.clone(),
            clauses: out,
            normalized: false,
        })
    }

    pub fn array(&self) -> &Arc<ArraySpec> {
        &self.array
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Labels mentioned by some clause. After [`normalize`](Self::normalize)
    /// this is the minimal support.
    pub fn support(&self) -> BTreeSet<LabelId> {
        self.clauses
            .iter()
            .flat_map(|c| c.keys().copied())
            .collect()
    }

    /// Canonical equivalent over the minimal support.
    pub fn normalize(&self) -> SupportedSet {
        if self.normalized {
            return self.clone();
        }
        let mut cuts = Cuts::new();
        cuts.add_set(self);
        tabulate_set::<std::convert::Infallible>(&self.array, &cuts, |p| Ok(self.eval(p)))
            .unwrap_or_else(|e| match e {})
    }

    /// Full set, after normalization.
    pub fn is_full(&self) -> bool {
        let n = self.normalize();
        n.clauses.len() == 1 && n.clauses[0].is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.normalize().clauses.is_empty()
    }

    fn combine(
        &self,
        other: &SupportedSet,
        op: impl Fn(bool, bool) -> bool,
    ) -> Result<SupportedSet, AlgebraError> {
        if !same_array(&self.array, &other.array) {
            return Err(AlgebraError::ArrayMismatch);
        }
        let mut cuts = Cuts::new();
        cuts.add_set(self);
        cuts.add_set(other);
        tabulate_set(&self.array, &cuts, |p| Ok(op(self.eval(p), other.eval(p))))
    }

    pub fn union(&self, other: &SupportedSet) -> Result<SupportedSet, AlgebraError> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &SupportedSet) -> Result<SupportedSet, AlgebraError> {
        self.combine(other, |a, b| a && b)
    }

    pub fn complement(&self) -> SupportedSet {
        let mut cuts = Cuts::new();
        cuts.add_set(self);
        tabulate_set::<std::convert::Infallible>(&self.array, &cuts, |p| Ok(!self.eval(p)))
            .unwrap_or_else(|e| match e {})
    }

    pub fn bool_op(
        op: BoolOp,
        x: &SupportedSet,
        y: Option<&SupportedSet>,
    ) -> Result<SupportedSet, AlgebraError> {
        match (op, y) {
            (BoolOp::Complement, _) => Ok(x.complement()),
            (BoolOp::Union, Some(y)) => x.union(y),
            (BoolOp::Intersect, Some(y)) => x.intersection(y),
            (_, None) => Ok(x.clone()),
        }
    }

    /// Semantic inclusion.
    pub fn is_subset(&self, other: &SupportedSet) -> Result<bool, AlgebraError> {
        Ok(self.intersection(&other.complement())?.is_empty())
    }

    /// DNF evaluation; `point` must cover the support.
    pub fn contains(&self, point: &Point) -> Result<bool, AlgebraError> {
        for label in self.support() {
            if !point.contains_key(&label) {
                return Err(AlgebraError::MissingCoordinate(
                    self.array.label(label).to_string(),
                ));
            }
        }
        Ok(self.eval(point))
    }

    fn eval(&self, point: &Point) -> bool {
        self.clauses
            .iter()
            .any(|c| c.iter().all(|(l, s)| s.contains(point[l])))
    }

    /// Membership in the Fubini product of the array's ultrafilters.
    ///
    /// With support `a_1 <_A … <_A a_n`, evaluates
    /// `D_{a_n} k_n … D_{a_1} k_1 (⟨k_1,…,k_n⟩ ∈_u X)` outermost first. At
    /// each level the truth set over the current coordinate is collected
    /// and submitted to that coordinate's oracle: by enumeration over a
    /// finite domain, and over ω as the union of the atoms (eventually
    /// periodic pieces) on which the inner condition holds.
    pub fn fubini_member(&self) -> Verdict {
        self.fubini_member_padded(&Cuts::new())
            .expect("own support is always valid")
    }

    /// Fubini membership evaluated over the support extended by the
    /// coordinates of `padding`, whose sets further refine the evaluation
    /// cells.
    pub fn fubini_member_padded(&self, padding: &Cuts) -> Result<Verdict, AlgebraError> {
        for &label in padding.0.keys() {
            check_label(&self.array, label)?;
        }
        let set = self.normalize();
        let mut cuts = Cuts::new();
        cuts.add_set(&set);
        for (&label, sets) in &padding.0 {
            cuts.touch(label);
            for s in sets {
                cuts.add(label, s.clone());
            }
        }
        let grid = Grid::new(&self.array, &cuts);
        let levels: Vec<(LabelId, Vec<PeriodicSet>)> = grid
            .labels
            .iter()
            .zip(grid.atoms)
            .map(|(&label, atoms)| {
                let cells = match self.array.domain(label) {
                    Domain::Finite(n) => (0..n).map(PeriodicSet::singleton).collect(),
                    Domain::Omega => atoms,
                };
                (label, cells)
            })
            .collect();
        let verdict = set.prefix(&levels, &mut Point::new());
        Ok(match self.array.mutation() {
            Mutation::None => verdict,
            Mutation::BrokenComplement => verdict.negate(),
        })
    }

    fn prefix(&self, levels: &[(LabelId, Vec<PeriodicSet>)], point: &mut Point) -> Verdict {
        let Some(((label, cells), inner)) = levels.split_last() else {
            return Verdict::from_bool(self.eval(point));
        };
        let mut truth = PeriodicSet::empty();
        for cell in cells {
            point.insert(*label, cell.min_element().expect("cells are nonempty"));
            match self.prefix(inner, point) {
                Verdict::In => truth = truth.union(cell),
                Verdict::Out => {}
                Verdict::Undecidable => return Verdict::Undecidable,
            }
        }
        point.remove(label);
        self.array.oracle(*label).membership(&truth)
    }
}

impl fmt::Display for SupportedSet {
    /// Sorted clauses joined by ` | `, each a ` & `-joined list of
    /// `label∈set` constraints; `⊤` and `⊥` for the full and empty set.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("⊥");
        }
        let clauses: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                if c.is_empty() {
                    "⊤".to_string()
                } else {
                    let parts: Vec<String> = c
                        .iter()
                        .map(|(l, s)| format!("{}∈{}", self.array.label(*l), s.compact()))
                        .collect();
                    parts.join(" & ")
                }
            })
            .collect();
        f.write_str(&clauses.join(" | "))
    }
}

// ---------------------------------------------------------------------------
// SupportedFunction
// ---------------------------------------------------------------------------

/// A finite-support function on `I`: a table indexed by one guard per
/// support coordinate; the guards of each coordinate partition its domain.
#[derive(Clone, Debug)]
pub struct SupportedFunction<T> {
    array: Arc<ArraySpec>,
    labels: Vec<LabelId>,
    guards: Vec<Vec<PeriodicSet>>,
    table: Vec<T>,
}

impl<T> SupportedFunction<T> {
    pub fn constant(array: &Arc<ArraySpec>, value: T) -> Self {
        SupportedFunction {
            array: array.clone(),
            labels: Vec::new(),
            guards: Vec::new(),
            table: vec![value],
        }
    }

    /// Builds a function from guards and a row-major table (first label most
    /// significant).
    pub fn from_guards(
        array: &Arc<ArraySpec>,
        coords: Vec<(LabelId, Vec<PeriodicSet>)>,
        table: Vec<T>,
    ) -> Result<Self, AlgebraError> {
        let mut labels = Vec::new();
        let mut guards = Vec::new();
        for (label, gs) in coords {
            check_label(array, label)?;
            if labels.last().is_some_and(|&prev| prev >= label) {
                return Err(AlgebraError::UnsortedSupport);
            }
            let domain = array.domain(label);
            let gs: Vec<PeriodicSet> = gs.iter().map(|g| domain.clip(g)).collect();
            let mut covered = PeriodicSet::empty();
            for g in &gs {
                if g.is_empty() || !covered.intersection(g).is_empty() {
                    return Err(AlgebraError::GuardsNotPartition(array.label(label).into()));
                }
                covered = covered.union(g);
            }
            if covered != domain.full() {
                return Err(AlgebraError::GuardsNotPartition(array.label(label).into()));
            }
            labels.push(label);
            guards.push(gs);
        }
        let expected: usize = guards.iter().map(Vec::len).product();
        if table.len() != expected {
            return Err(AlgebraError::TableSize {
                expected,
                found: table.len(),
            });
        }
        Ok(SupportedFunction {
            array: array.clone(),
            labels,
            guards,
            table,
        })
    }

    /// Tabulates `f` over finite-domain coordinates `labels`, one guard per value.
    pub fn from_fn(
        array: &Arc<ArraySpec>,
        labels: &[LabelId],
        mut f: impl FnMut(&Point) -> T,
    ) -> Result<Self, AlgebraError> {
        let mut cuts = Cuts::new();
        for &label in labels {
            check_label(array, label)?;
            let Domain::Finite(n) = array.domain(label) else {
                return Err(AlgebraError::InfiniteDomain(array.label(label).into()));
            };
            cuts.touch(label);
            for v in 0..n {
                cuts.add(label, PeriodicSet::singleton(v));
            }
        }
        tabulate_function::<T, std::convert::Infallible>(array, &cuts, |p| Ok(f(p)))
            .map_err(|e| match e {})
    }

    pub fn array(&self) -> &Arc<ArraySpec> {
        &self.array
    }

    pub fn support(&self) -> &[LabelId] {
        &self.labels
    }

    pub fn guards(&self) -> &[Vec<PeriodicSet>] {
        &self.guards
    }

    pub fn table(&self) -> &[T] {
        &self.table
    }

    pub fn is_constant(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn eval(&self, point: &Point) -> Result<&T, AlgebraError> {
        let mut index = 0;
        for (label, guards) in self.labels.iter().zip(&self.guards) {
            let name = || self.array.label(*label).to_string();
            let &value = point
                .get(label)
                .ok_or_else(|| AlgebraError::MissingCoordinate(name()))?;
            let j = guards
                .iter()
                .position(|g| g.contains(value))
                .ok_or_else(|| AlgebraError::ValueOutsideDomain {
                    label: name(),
                    value,
                })?;
            index = index * guards.len() + j;
        }
        Ok(&self.table[index])
    }

    /// Evaluates at a point already known to cover the support.
    pub(crate) fn at(&self, point: &Point) -> &T {
        self.eval(point).expect("point covers the support")
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> SupportedFunction<U> {
        SupportedFunction {
            array: self.array.clone(),
            labels: self.labels.clone(),
            guards: self.guards.clone(),
            table: self.table.iter().map(f).collect(),
        }
    }
}

impl<T: PartialEq> SupportedFunction<T> {
    /// `{x : f(x) = g(x)}`.
    pub fn agreement_set(&self, other: &Self) -> Result<SupportedSet, AlgebraError> {
        if !same_array(&self.array, &other.array) {
            return Err(AlgebraError::ArrayMismatch);
        }
        let mut cuts = Cuts::new();
        cuts.add_function(self);
        cuts.add_function(other);
        tabulate_set(&self.array, &cuts, |p| Ok(self.at(p) == other.at(p)))
    }
}

/// `f =^D g`: the agreement set belongs to the Fubini product.
pub fn equal_mod_d<T: PartialEq>(
    f: &SupportedFunction<T>,
    g: &SupportedFunction<T>,
) -> Result<Verdict, AlgebraError> {
    Ok(f.agreement_set(g)?.fubini_member())
}

impl<T: fmt::Display> fmt::Display for SupportedFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.labels.is_empty() {
            return write!(f, "{}", self.table[0]);
        }
        let names: Vec<&str> = self.labels.iter().map(|&l| self.array.label(l)).collect();
        write!(f, "λ({})[", names.join(","))?;
        let mut digits = vec![0usize; self.labels.len()];
        for (i, value) in self.table.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let key: Vec<String> = digits
                .iter()
                .zip(&self.guards)
                .map(|(&d, gs)| gs[d].compact())
                .collect();
            write!(f, "{}→{}", key.join("×"), value)?;
            for k in (0..digits.len()).rev() {
                digits[k] += 1;
                if digits[k] < self.guards[k].len() {
                    break;
                }
                digits[k] = 0;
            }
        }
        f.write_str("]")
    }
}
