//! Ultrafilters over finite domains and over ω.
//!
//! Subsets of ω are represented by [`PeriodicSet`], the Boolean algebra of
//! eventually periodic sets. It is closed under the Boolean operations and
//! every query an ultrafilter oracle receives lives in it, which keeps
//! membership decidable. Subsets of a finite domain `{0..N-1}` use the same
//! type, clipped to the domain.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FilterError {
    #[error("period must be positive")]
    ZeroPeriod,
    #[error("mask residue {residue} is not below the period {period}")]
    ResidueOutOfRange { residue: u64, period: u64 },
    #[error("filter base has an empty finite intersection")]
    EmptyIntersection,
    #[error("family is not an ultrafilter base: at least two ultrafilters extend it")]
    NotABase,
    #[error("filter base must contain at least one set")]
    EmptyBase,
    #[error("point {point} is outside the domain {domain}")]
    PointOutsideDomain { point: u64, domain: Domain },
    #[error("duplicate array label `{0}`")]
    DuplicateLabel(String),
    #[error("no map qualifies for the definable array")]
    EmptyArray,
    #[error("definable array parameters theta={theta}, n={n} are too large to enumerate")]
    ArrayTooLarge { theta: usize, n: usize },
}

// ---------------------------------------------------------------------------
// PeriodicSet
// ---------------------------------------------------------------------------

/// An eventually periodic subset of ω in canonical form.
///
/// For `n >= threshold`, `n` is a member iff `mask[n % period]`; below the
/// threshold membership is the periodic rule flipped wherever `overrides`
/// records a disagreeing value. The canonical form has the minimal period,
/// only disagreeing overrides, and `threshold = max(override) + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicSet {
    period: u64,
    mask: Vec<bool>,
    threshold: u64,
    overrides: BTreeMap<u64, bool>,
}

impl PeriodicSet {
    /// Builds a set from its raw fields, then canonicalizes.
    ///
    /// Overrides at or beyond `threshold` are ignored.
    pub fn new(
        period: u64,
        mask: impl IntoIterator<Item = u64>,
        threshold: u64,
        overrides: impl IntoIterator<Item = (u64, bool)>,
    ) -> Result<Self, FilterError> {
        if period == 0 {
            return Err(FilterError::ZeroPeriod);
        }
        let mut bits = vec![false; period as usize];
        for residue in mask {
            if residue >= period {
                return Err(FilterError::ResidueOutOfRange { residue, period });
            }
            bits[residue as usize] = true;
        }
        let overrides: BTreeMap<u64, bool> = overrides
            .into_iter()
            .filter(|&(n, _)| n < threshold)
            .collect();
        Ok(Self::from_fn(period, threshold, |n| {
            if n < threshold {
                if let Some(&b) = overrides.get(&n) {
                    return b;
                }
            }
            bits[(n % period) as usize]
        }))
    }

    /// Builds the set whose membership is `f`, assuming `f` is periodic with
    /// period `period` from `threshold` on.
    pub fn from_fn(period: u64, threshold: u64, f: impl Fn(u64) -> bool) -> Self {
        assert!(period > 0, "period must be positive");
        let mut mask = vec![false; period as usize];
        for n in threshold..threshold + period {
            mask[(n % period) as usize] = f(n);
        }
        let mut overrides = BTreeMap::new();
        for n in 0..threshold {
            let b = f(n);
            if b != mask[(n % period) as usize] {
                overrides.insert(n, b);
            }
        }
        let mut set = PeriodicSet {
            period,
            mask,
            threshold,
            overrides,
        };
        set.canonicalize();
        set
    }

    fn canonicalize(&mut self) {
        let p = self.period as usize;
        let minimal = (1..=p)
            .filter(|d| p % d == 0)
            .find(|&d| (0..p).all(|i| self.mask[i] == self.mask[i % d]))
            .unwrap_or(p);
        self.mask.truncate(minimal);
        self.period = minimal as u64;
        let period = self.period;
        let mask = &self.mask;
        self.overrides
            .retain(|&n, b| *b != mask[(n % period) as usize]);
        self.threshold = self.overrides.keys().next_back().map_or(0, |&n| n + 1);
    }

    pub fn empty() -> Self {
        PeriodicSet {
            period: 1,
            mask: vec![false],
            threshold: 0,
            overrides: BTreeMap::new(),
        }
    }

    pub fn full() -> Self {
        PeriodicSet {
            period: 1,
            mask: vec![true],
            threshold: 0,
            overrides: BTreeMap::new(),
        }
    }

    pub fn finite(members: impl IntoIterator<Item = u64>) -> Self {
        let overrides: BTreeMap<u64, bool> = members.into_iter().map(|n| (n, true)).collect();
        let threshold = overrides.keys().next_back().map_or(0, |&n| n + 1);
        PeriodicSet {
            period: 1,
            mask: vec![false],
            threshold,
            overrides,
        }
    }

    pub fn singleton(n: u64) -> Self {
        Self::finite([n])
    }

    pub fn cofinite(excluded: impl IntoIterator<Item = u64>) -> Self {
        Self::finite(excluded).complement()
    }

    /// `{n : n ≡ residue (mod modulus)}`.
    pub fn residue_class(modulus: u64, residue: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let r = residue % modulus;
        Self::from_fn(modulus, 0, |n| n % modulus == r)
    }

    /// `{n : n < bound}`.
    pub fn below(bound: u64) -> Self {
        Self::finite(0..bound)
    }

    /// `{n : n > bound}`.
    pub fn above(bound: u64) -> Self {
        Self::below(bound + 1).complement()
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    /// Residues `r < period` in the eventual periodic pattern.
    pub fn mask(&self) -> impl Iterator<Item = u64> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u64)
    }

    pub fn overrides(&self) -> &BTreeMap<u64, bool> {
        &self.overrides
    }

    pub fn contains(&self, n: u64) -> bool {
        if n < self.threshold {
            if let Some(&b) = self.overrides.get(&n) {
                return b;
            }
        }
        self.mask[(n % self.period) as usize]
    }

    pub fn complement(&self) -> Self {
        PeriodicSet {
            period: self.period,
            mask: self.mask.iter().map(|b| !b).collect(),
            threshold: self.threshold,
            overrides: self.overrides.iter().map(|(&n, &b)| (n, !b)).collect(),
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let period = self.period.lcm(&other.period);
        let threshold = self.threshold.max(other.threshold);
        Self::from_fn(period, threshold, |n| op(self.contains(n), other.contains(n)))
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.overrides.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.is_cofinite() && self.overrides.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.mask.iter().all(|b| !b)
    }

    pub fn is_cofinite(&self) -> bool {
        self.mask.iter().all(|&b| b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// Least member, if any.
    pub fn min_element(&self) -> Option<u64> {
        (0..self.threshold + self.period).find(|&n| self.contains(n))
    }

    /// Members of a finite set in increasing order; `None` for infinite sets.
    pub fn finite_members(&self) -> Option<Vec<u64>> {
        self.is_finite()
            .then(|| self.overrides.keys().copied().collect())
    }

    /// Short human-readable form used inside larger renderings.
    pub fn compact(&self) -> String {
        if let Some(members) = self.finite_members() {
            return brace_list(members.iter());
        }
        if self.is_cofinite() {
            let missing: Vec<u64> = self.overrides.keys().copied().collect();
            return if missing.is_empty() {
                "ω".to_string()
            } else {
                format!("ω∖{}", brace_list(missing.iter()))
            };
        }
        format!("[{self}]")
    }
}

fn brace_list<T: fmt::Display>(items: impl Iterator<Item = T>) -> String {
    let parts: Vec<String> = items.map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

impl fmt::Display for PeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let overrides: Vec<String> = self
            .overrides
            .iter()
            .map(|(n, b)| format!("{n}:{b}"))
            .collect();
        write!(
            f,
            "period={} mask={} threshold={} overrides={{{}}}",
            self.period,
            brace_list(self.mask()),
            self.threshold,
            overrides.join(",")
        )
    }
}

// ---------------------------------------------------------------------------
// Domains and verdicts
// ---------------------------------------------------------------------------

/// Value domain of one coordinate of the index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    /// `{0..N-1}`.
    Finite(u64),
    Omega,
}

impl Domain {
    pub fn full(self) -> PeriodicSet {
        match self {
            Domain::Finite(n) => PeriodicSet::below(n),
            Domain::Omega => PeriodicSet::full(),
        }
    }

    pub fn contains(self, n: u64) -> bool {
        match self {
            Domain::Finite(size) => n < size,
            Domain::Omega => true,
        }
    }

    /// Intersects `set` with the domain.
    pub fn clip(self, set: &PeriodicSet) -> PeriodicSet {
        match self {
            Domain::Finite(_) => set.intersection(&self.full()),
            Domain::Omega => set.clone(),
        }
    }

    /// Complement relative to the domain.
    pub fn complement(self, set: &PeriodicSet) -> PeriodicSet {
        self.clip(&set.complement())
    }

    /// The finite list of values, or `None` for ω.
    pub fn values(self) -> Option<std::ops::Range<u64>> {
        match self {
            Domain::Finite(n) => Some(0..n),
            Domain::Omega => None,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Finite(n) => write!(f, "Finite({n})"),
            Domain::Omega => write!(f, "Omega"),
        }
    }
}

/// Three-valued answer of an ultrafilter query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    In,
    Out,
    Undecidable,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::In
        } else {
            Verdict::Out
        }
    }

    pub fn is_in(self) -> bool {
        self == Verdict::In
    }

    pub fn is_decided(self) -> bool {
        self != Verdict::Undecidable
    }

    pub fn negate(self) -> Self {
        match self {
            Verdict::In => Verdict::Out,
            Verdict::Out => Verdict::In,
            Verdict::Undecidable => Verdict::Undecidable,
        }
    }

    /// Kleene conjunction.
    pub fn and(self, other: Self) -> Self {
        match (self, other) {
            (Verdict::Out, _) | (_, Verdict::Out) => Verdict::Out,
            (Verdict::In, Verdict::In) => Verdict::In,
            _ => Verdict::Undecidable,
        }
    }

    /// Kleene disjunction.
    pub fn or(self, other: Self) -> Self {
        self.negate().and(other.negate()).negate()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::In => "In",
            Verdict::Out => "Out",
            Verdict::Undecidable => "Undecidable",
        };
        f.write_str(s)
    }
}

// ---------------------------------------------------------------------------
// Ultrafilter oracles
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleKind {
    Principal(u64),
    /// `X ∈ U` iff for some `m ≥ 1` all sufficiently large multiples of `m!`
    /// lie in `X`.
    FactorialTower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    Principal(u64),
    Free,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Principal(p) => write!(f, "Principal({p})"),
            Classification::Free => write!(f, "Free"),
        }
    }
}

/// Membership decider for an ultrafilter over a finite domain or over ω.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UltrafilterOracle {
    domain: Domain,
    kind: OracleKind,
}

impl UltrafilterOracle {
    pub fn principal(domain: Domain, point: u64) -> Result<Self, FilterError> {
        if !domain.contains(point) {
            return Err(FilterError::PointOutsideDomain { point, domain });
        }
        Ok(UltrafilterOracle {
            domain,
            kind: OracleKind::Principal(point),
        })
    }

    pub fn factorial_tower() -> Self {
        UltrafilterOracle {
            domain: Domain::Omega,
            kind: OracleKind::FactorialTower,
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    /// Decides whether `set` (clipped to the domain) belongs to the ultrafilter.
    pub fn membership(&self, set: &PeriodicSet) -> Verdict {
        match self.kind {
            OracleKind::Principal(p) => Verdict::from_bool(set.contains(p)),
            OracleKind::FactorialTower => ft_membership(set),
        }
    }

    pub fn classify(&self) -> Classification {
        match self.kind {
            OracleKind::Principal(p) => Classification::Principal(p),
            OracleKind::FactorialTower => Classification::Free,
        }
    }

    pub fn is_principal(&self) -> bool {
        matches!(self.kind, OracleKind::Principal(_))
    }
}

impl fmt::Display for UltrafilterOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            OracleKind::Principal(p) => write!(f, "Principal({p}) over {}", self.domain),
            OracleKind::FactorialTower => write!(f, "FactorialTower over {}", self.domain),
        }
    }
}

/// Factorial-tower membership of an eventually periodic set.
///
/// With canonical period `p`, every multiple of `p!` is `≡ 0 (mod p)`, so the
/// multiples of `p!` are eventually inside `X` exactly when residue 0 is in the
/// mask. If residue 0 is not in the mask, every multiple of `lcm(m!, p)` is
/// eventually outside `X`, for every `m`.
pub fn ft_membership(set: &PeriodicSet) -> Verdict {
    Verdict::from_bool(set.mask[0])
}

// ---------------------------------------------------------------------------
// Filter bases
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterBase {
    domain: Domain,
    sets: Vec<PeriodicSet>,
}

impl FilterBase {
    /// Validates the finite intersection property. Sets are clipped to the domain.
    pub fn new(
        domain: Domain,
        sets: impl IntoIterator<Item = PeriodicSet>,
    ) -> Result<Self, FilterError> {
        let sets: Vec<PeriodicSet> = sets.into_iter().map(|s| domain.clip(&s)).collect();
        if sets.is_empty() {
            return Err(FilterError::EmptyBase);
        }
        let base = FilterBase { domain, sets };
        if base.intersection().is_empty() {
            return Err(FilterError::EmptyIntersection);
        }
        Ok(base)
    }

    /// Convenience constructor for explicit subsets of a finite domain.
    pub fn finite(
        size: u64,
        sets: impl IntoIterator<Item = Vec<u64>>,
    ) -> Result<Self, FilterError> {
        Self::new(
            Domain::Finite(size),
            sets.into_iter().map(PeriodicSet::finite),
        )
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn sets(&self) -> &[PeriodicSet] {
        &self.sets
    }

    fn intersection(&self) -> PeriodicSet {
        self.sets
            .iter()
            .fold(self.domain.full(), |acc, s| acc.intersection(s))
    }
}

/// The unique ultrafilter extending `base`, if there is exactly one.
///
/// The base is closed under finite intersections, so every extending
/// ultrafilter contains `K = ∩ base`. If `K = {p}` the only extension is
/// principal at `p`. Otherwise `K` has two points `p ≠ q` and the principal
/// ultrafilters at `p` and `q` both extend the base.
pub fn uob(base: &FilterBase) -> Result<UltrafilterOracle, FilterError> {
    let core = base.intersection();
    match core.finite_members().as_deref() {
        Some([]) => Err(FilterError::EmptyIntersection),
        Some([p]) => UltrafilterOracle::principal(base.domain, *p),
        _ => Err(FilterError::NotABase),
    }
}

// ---------------------------------------------------------------------------
// Arrays of ultrafilters
// ---------------------------------------------------------------------------

/// Test-only faults injected into Fubini evaluation to check that verifiers
/// actually notice broken ultrafilters.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mutation {
    #[default]
    None,
    /// Answers every Fubini query with the verdict of the complement.
    BrokenComplement,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArrayEntry {
    pub label: String,
    pub oracle: UltrafilterOracle,
}

/// A linearly ordered family of ultrafilters, one per label. Position in
/// the list is the order `<_A`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ArraySpec {
    entries: Vec<ArrayEntry>,
    mutation: Mutation,
}

impl ArraySpec {
    pub fn new(entries: impl IntoIterator<Item = ArrayEntry>) -> Result<Self, FilterError> {
        let entries: Vec<ArrayEntry> = entries.into_iter().collect();
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.label.as_str()) {
                return Err(FilterError::DuplicateLabel(e.label.clone()));
            }
        }
        Ok(ArraySpec {
            entries,
            mutation: Mutation::None,
        })
    }

    pub fn from_oracles<S: Into<String>>(
        entries: impl IntoIterator<Item = (S, UltrafilterOracle)>,
    ) -> Result<Self, FilterError> {
        Self::new(entries.into_iter().map(|(label, oracle)| ArrayEntry {
            label: label.into(),
            oracle,
        }))
    }

    #[doc(hidden)]
    pub fn with_mutation(mut self, mutation: Mutation) -> Self {
        self.mutation = mutation;
        self
    }

    pub fn mutation(&self) -> Mutation {
        self.mutation
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ArrayEntry] {
        &self.entries
    }

    pub fn label_id(&self, label: &str) -> Option<LabelId> {
        self.entries
            .iter()
            .position(|e| e.label == label)
            .map(LabelId)
    }

    pub fn label_ids(&self) -> impl Iterator<Item = LabelId> {
        (0..self.entries.len()).map(LabelId)
    }

    pub fn label(&self, id: LabelId) -> &str {
        &self.entries[id.0].label
    }

    pub fn oracle(&self, id: LabelId) -> &UltrafilterOracle {
        &self.entries[id.0].oracle
    }

    pub fn domain(&self, id: LabelId) -> Domain {
        self.entries[id.0].oracle.domain
    }

    pub fn contains_label(&self, id: LabelId) -> bool {
        id.0 < self.entries.len()
    }

    pub fn all_principal(&self) -> bool {
        self.entries.iter().all(|e| e.oracle.is_principal())
    }
}

/// Position of a label in its array; the derived order is `<_A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelId(pub usize);

/// A map `{0..theta-1} → P({0..n-1})`, listed by argument.
pub type SubsetMap = Vec<BTreeSet<u64>>;

/// Lexicographic order on characteristic sequences: at the least point of
/// the symmetric difference, the set not containing it is smaller.
pub fn lex_cmp_subsets(x: &BTreeSet<u64>, y: &BTreeSet<u64>) -> Ordering {
    match x.symmetric_difference(y).min() {
        None => Ordering::Equal,
        Some(first) if y.contains(first) => Ordering::Less,
        Some(_) => Ordering::Greater,
    }
}

/// `a <_A b` iff they agree below some `γ` and `a(γ) < b(γ)`.
pub fn lex_cmp_maps(a: &[BTreeSet<u64>], b: &[BTreeSet<u64>]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| lex_cmp_subsets(x, y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

fn render_map(map: &[BTreeSet<u64>]) -> String {
    let parts: Vec<String> = map.iter().map(|s| brace_list(s.iter())).collect();
    format!("a[{}]", parts.join(","))
}

const MAX_DEFINABLE_MAPS: u128 = 1 << 20;

/// All maps whose range is an ultrafilter base over `{0..n-1}`, in `<_A` order.
pub fn definable_maps(theta: usize, n: usize) -> Result<Vec<SubsetMap>, FilterError> {
    let too_large = FilterError::ArrayTooLarge { theta, n };
    if n >= 64 {
        return Err(too_large);
    }
    let subsets = 1u128 << n;
    let total = (0..theta).try_fold(1u128, |acc, _| {
        acc.checked_mul(subsets).filter(|&t| t <= MAX_DEFINABLE_MAPS)
    });
    let total = total.ok_or(too_large)?;
    let mut maps = Vec::new();
    for code in 0..total {
        let mut rest = code;
        let map: SubsetMap = (0..theta)
            .map(|_| {
                let bits = (rest % subsets) as u64;
                rest /= subsets;
                (0..n as u64).filter(|i| bits >> i & 1 == 1).collect()
            })
            .collect();
        let base = FilterBase::finite(n as u64, map.iter().map(|s| s.iter().copied().collect()));
        if base.and_then(|b| uob(&b)).is_ok() {
            maps.push(map);
        }
    }
    maps.sort_by(|a, b| lex_cmp_maps(a, b));
    Ok(maps)
}

/// The lexicographically ordered array of all ultrafilter-base maps
/// `{0..theta-1} → P({0..n-1})`, with `D_a = uob(range a)`.
pub fn build_definable_array(theta: usize, n: usize) -> Result<ArraySpec, FilterError> {
    let maps = definable_maps(theta, n)?;
    if maps.is_empty() {
        return Err(FilterError::EmptyArray);
    }
    let entries = maps
        .iter()
        .map(|map| {
            let base = FilterBase::finite(n as u64, map.iter().map(|s| s.iter().copied().collect()))?;
            Ok(ArrayEntry {
                label: render_map(map),
                oracle: uob(&base)?,
            })
        })
        .collect::<Result<Vec<_>, FilterError>>()?;
    ArraySpec::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn canonical_form_minimizes_period_and_threshold() {
        let s = PeriodicSet::new(4, [0, 2], 6, [(3, false), (5, true), (0, true)]).unwrap();
        assert_eq!(s.period(), 2);
        assert_eq!(s.threshold(), 6);
        assert_eq!(s.overrides().len(), 1);
        assert_eq!(s.to_string(), "period=2 mask={0} threshold=6 overrides={5:true}");
    }

    #[test]
    fn zero_period_rejected() {
        assert_eq!(PeriodicSet::new(0, [], 0, []), Err(FilterError::ZeroPeriod));
        assert!(matches!(
            PeriodicSet::new(3, [3], 0, []),
            Err(FilterError::ResidueOutOfRange { .. })
        ));
    }

    #[test]
    fn ft_examples() {
        let evens = PeriodicSet::residue_class(2, 0);
        assert_eq!(ft_membership(&evens), Verdict::In);
        let ones_mod_3 = PeriodicSet::residue_class(3, 1);
        assert_eq!(ft_membership(&ones_mod_3), Verdict::Out);
        assert_eq!(ft_membership(&ones_mod_3.complement()), Verdict::In);
        assert_eq!(ft_membership(&PeriodicSet::finite([0, 5])), Verdict::Out);
    }

    #[test]
    fn uob_examples() {
        let b = FilterBase::finite(5, [vec![3]]).unwrap();
        assert_eq!(uob(&b).unwrap().classify(), Classification::Principal(3));
        let b = FilterBase::finite(5, [vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(uob(&b).unwrap().classify(), Classification::Principal(2));
        let b = FilterBase::finite(5, [vec![1, 2]]).unwrap();
        assert_eq!(uob(&b), Err(FilterError::NotABase));
        assert_eq!(
            FilterBase::finite(5, [vec![1, 2], vec![3, 4]]),
            Err(FilterError::EmptyIntersection)
        );
    }

    #[test]
    fn uob_over_omega() {
        let b = FilterBase::new(
            Domain::Omega,
            [PeriodicSet::residue_class(2, 0), PeriodicSet::below(2)],
        )
        .unwrap();
        assert_eq!(uob(&b).unwrap().classify(), Classification::Principal(0));
        let b = FilterBase::new(Domain::Omega, [PeriodicSet::residue_class(2, 0)]).unwrap();
        assert_eq!(uob(&b), Err(FilterError::NotABase));
    }

    #[test]
    fn classify_by_queries() {
        let ft = UltrafilterOracle::factorial_tower();
        assert_eq!(ft.classify(), Classification::Free);
        for k in 0..=100 {
            assert_eq!(ft.membership(&PeriodicSet::singleton(k)), Verdict::Out);
            assert_eq!(ft.membership(&PeriodicSet::cofinite([k])), Verdict::In);
        }
        let p = UltrafilterOracle::principal(Domain::Finite(5), 3).unwrap();
        assert_eq!(p.classify(), Classification::Principal(3));
        assert_eq!(p.membership(&PeriodicSet::singleton(3)), Verdict::In);
        assert!(UltrafilterOracle::principal(Domain::Finite(2), 2).is_err());
    }

    #[test]
    fn subset_order_puts_first_difference_member_last() {
        assert_eq!(lex_cmp_subsets(&set(&[1]), &set(&[0])), Ordering::Less);
        assert_eq!(lex_cmp_subsets(&set(&[]), &set(&[1])), Ordering::Less);
        assert_eq!(lex_cmp_subsets(&set(&[0]), &set(&[0, 1])), Ordering::Less);
        assert_eq!(lex_cmp_subsets(&set(&[0, 1]), &set(&[0, 1])), Ordering::Equal);
    }

    #[test]
    fn definable_array_small_cases() {
        let a = build_definable_array(1, 1).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a.oracle(LabelId(0)).classify(), Classification::Principal(0));

        let a = build_definable_array(1, 2).unwrap();
        assert_eq!(a.len(), 2);
        let points: BTreeSet<_> = a.entries().iter().map(|e| e.oracle.classify()).collect();
        assert_eq!(
            points,
            [Classification::Principal(0), Classification::Principal(1)]
                .into_iter()
                .collect()
        );
        // {1} precedes {0}: they first differ at 0, which only {0} contains.
        assert_eq!(a.label(LabelId(0)), "a[{1}]");
        assert_eq!(a.label(LabelId(1)), "a[{0}]");
    }

    #[test]
    fn oversized_array_rejected() {
        assert!(matches!(
            build_definable_array(30, 30),
            Err(FilterError::ArrayTooLarge { .. })
        ));
    }

    #[test]
    fn kleene_connectives() {
        use Verdict::*;
        assert_eq!(In.and(Undecidable), Undecidable);
        assert_eq!(Out.and(Undecidable), Out);
        assert_eq!(In.or(Undecidable), In);
        assert_eq!(Undecidable.negate(), Undecidable);
    }
}
