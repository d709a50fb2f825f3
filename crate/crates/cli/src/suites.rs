//! The check suites behind each subcommand.
//!
//! Randomness: every suite draws from ChaCha8 seeded with the config seed,
//! on its own stream (see the `*_STREAM` constants), so adding cases to one
//! suite never shifts another.

use std::cmp::Ordering;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use ulab_core::filters::{ft_membership, lex_cmp_maps, definable_maps, ArraySpec, Classification, Domain, Mutation, UltrafilterOracle, Verdict};
use ulab_core::germs::{Germ, GermClass};
use ulab_core::index_algebra::Cuts;
use ulab_core::logic::{enumerate_sentences, transfer_check_sentences, SentenceBounds};
use ulab_core::random;
use ulab_core::superstructure::{build_v, StarSuperstructure};
use ulab_core::ultrapower::{properness_witness, CollapseOptions, HyperElement, Structure, UltrapowerModel};

use crate::config::{ArrayConfig, ConfigError, ExperimentConfig, SuperstructureMutation};
use crate::report::Report;

pub const TRANSFER_STREAM: u64 = 1;
pub const FUBINI_STREAM: u64 = 2;
pub const COLLAPSE_STREAM: u64 = 3;
pub const GERM_STREAM: u64 = 4;

/// Counterexample lines listed per case in the text report.
const LISTED_COUNTEREXAMPLES: usize = 5;

/// Above this many single-support classes the superstructure suite checks
/// extensionality on the standard classes only.
const SINGLE_SUPPORT_LIMIT: usize = 5000;

fn missing(origin: &str, field: &str, reason: &str) -> ConfigError {
    ConfigError {
        path: origin.to_string(),
        field: field.to_string(),
        reason: reason.to_string(),
    }
}

pub fn describe_array(array: &ArraySpec) -> String {
    let parts: Vec<String> = array
        .label_ids()
        .map(|l| format!("{}={}", array.label(l), array.oracle(l)))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn configured_array(config: &ExperimentConfig, origin: &str, suite: &str) -> Result<Arc<ArraySpec>, ConfigError> {
    let array = config
        .array
        .as_ref()
        .ok_or_else(|| missing(origin, "array", &format!("`{suite}` needs an [array] section")))?;
    array.build().map_err(|(f, r)| missing(origin, &format!("array.{f}"), &r))
}

/// The suite's own array if it has one, else the top-level one.
fn suite_array(
    config: &ExperimentConfig,
    own: Option<&ArrayConfig>,
    section: &str,
    origin: &str,
) -> Option<Result<Arc<ArraySpec>, ConfigError>> {
    match own {
        Some(a) => Some(a.build().map_err(|(f, r)| missing(origin, &format!("suite.{section}.array.{f}"), &r))),
        None => config.array.as_ref().map(|_| configured_array(config, origin, section)),
    }
}

fn configured_structure(config: &ExperimentConfig, origin: &str) -> Result<Option<Arc<Structure>>, ConfigError> {
    config
        .structure
        .as_ref()
        .map(|s| s.build().map(Arc::new).map_err(|(f, r)| missing(origin, &format!("structure.{f}"), &r)))
        .transpose()
}

/// Transfer over every configured (structure, array) pair. `progress` is
/// called after each structure with its name and elapsed time.
pub fn transfer_with_progress(
    config: &ExperimentConfig,
    origin: &str,
    mut progress: impl FnMut(&str, Duration),
) -> Result<Report, ConfigError> {
    let t = config.suite.transfer.clone().unwrap_or_default();
    let mut structures: Vec<(String, Arc<Structure>)> = Vec::new();
    if let Some(s) = configured_structure(config, origin)? {
        structures.push(("given".into(), s));
    }
    if t.random_structures > 0 {
        let mut rng = random::stream_rng(config.require_seed("transfer-check", origin)?, TRANSFER_STREAM);
        for i in 0..t.random_structures {
            let s = random::structure(&mut rng, t.max_size, t.max_relations, t.max_arity);
            structures.push((format!("s{i:02}"), Arc::new(s)));
        }
    }
    if structures.is_empty() {
        return Err(missing(
            origin,
            "structure",
            "transfer-check needs [structure] or suite.transfer.random_structures > 0",
        ));
    }
    let arrays: Vec<(String, Arc<ArraySpec>)> = match t.principal_sweep {
        Some(p) => random::all_principal_arrays(p.max_labels, p.max_domain)
            .into_iter()
            .enumerate()
            .map(|(i, a)| (format!("p{i:02}"), a))
            .collect(),
        None => vec![("array".into(), configured_array(config, origin, "transfer-check")?)],
    };
    let mutation: Mutation = t.mutation.into();
    let arrays: Vec<(String, Arc<ArraySpec>)> = arrays
        .into_iter()
        .map(|(n, a)| (n, Arc::new(a.as_ref().clone().with_mutation(mutation))))
        .collect();

    let mut report = Report::new("transfer-check");
    report.note(format!("bounds: depth ≤ {}, nodes ≤ {}, mutation {:?}", t.depth, t.nodes, t.mutation));
    for (name, s) in &structures {
        report.note(format!("structure {name}: {s}"));
    }
    for (name, a) in &arrays {
        report.note(format!("array {name}: {}", describe_array(a)));
    }
    let mut totals = (0, 0, 0);
    let mut listed = Vec::new();
    let mut pruning = Vec::new();
    for (sname, s) in &structures {
        let start = Instant::now();
        let relations: Vec<(String, usize)> = s
            .relations()
            .iter()
            .filter(|(n, _)| t.relations.as_ref().map_or(true, |keep| keep.contains(n)))
            .map(|(n, r)| (n.clone(), r.arity))
            .collect();
        let sentences = enumerate_sentences(&SentenceBounds::new(t.depth, t.nodes, relations));
        for (aname, a) in &arrays {
            let case = format!("{sname}/{aname}");
            let model = UltrapowerModel::new(s.clone(), a.clone());
            match transfer_check_sentences(&model, &sentences) {
                Ok(r) => {
                    let (n, c, u) = (r.sentences(), r.counterexample_count(), r.undecidable());
                    totals = (totals.0 + n, totals.1 + c, totals.2 + u);
                    report.check(&case, c == 0 && u == 0, format!("{n} sentences, {c} counterexamples, {u} undecidable"));
                    for line in r.counterexamples().take(LISTED_COUNTEREXAMPLES) {
                        listed.push(format!("counterexample {case}: {line}"));
                    }
                    if pruning.is_empty() {
                        pruning = r.pruning.clone();
                    }
                }
                Err(e) => report.check(&case, false, format!("evaluation error: {e}")),
            }
        }
        progress(sname, start.elapsed());
    }
    report.note(format!("{} sentences, {} counterexamples, {} undecidable", totals.0, totals.1, totals.2));
    for p in pruning {
        report.note(format!("pruning: {p}"));
    }
    report.notes.extend(listed);
    Ok(report)
}

pub fn transfer(config: &ExperimentConfig, origin: &str) -> Result<Report, ConfigError> {
    transfer_with_progress(config, origin, |_, _| {})
}

/// One Fubini fuzz case: verdicts of `X`, its complement, `X ∩ Y`, `X ∪ Y`
/// and `X` padded with irrelevant cuts.
pub fn fubini_case<R: Rng>(rng: &mut R, max_labels: usize, max_clauses: usize) -> (bool, String) {
    let array = random::mixed_array(rng, max_labels);
    let x = random::supported_set(rng, &array, max_clauses);
    let y = random::supported_set(rng, &array, max_clauses);
    let mut padding = Cuts::new();
    for l in array.label_ids() {
        if rng.gen_bool(0.7) {
            padding.touch(l);
            for _ in 0..rng.gen_range(0..3) {
                padding.add(l, random::domain_subset(rng, array.domain(l)));
            }
        }
    }
    let meet = x.intersection(&y).expect("same array");
    let join = x.union(&y).expect("same array");
    let vx = x.fubini_member();
    let vc = x.complement().fubini_member();
    let vy = y.fubini_member();
    let vm = meet.fubini_member();
    let vj = join.fubini_member();
    let vp = x.fubini_member_padded(&padding).expect("labels of the array");
    let mut failed = Vec::new();
    if [vx, vc, vy, vm, vj, vp].iter().any(|v| !v.is_decided()) {
        failed.push("undecidable");
    }
    if vx == vc {
        failed.push("complement dichotomy");
    }
    if vx.is_in() && vy.is_in() && !vm.is_in() {
        failed.push("intersection closure");
    }
    if !x.is_subset(&join).expect("same array") || (vx.is_in() && !vj.is_in()) {
        failed.push("upward closure");
    }
    if vp != vx {
        failed.push("support extension");
    }
    let detail = format!(
        "{}{} X={vx} X^c={vc} Y={vy} X∩Y={vm} X∪Y={vj} padded={vp} X: {x}",
        if failed.is_empty() { String::new() } else { format!("violated: {}; ", failed.join(", ")) },
        describe_array(&array),
    );
    (failed.is_empty(), detail)
}

pub fn fubini(config: &ExperimentConfig, origin: &str) -> Result<Report, ConfigError> {
    let f = config.suite.fubini.clone().unwrap_or_default();
    let mut rng = random::stream_rng(config.require_seed("fubini-check", origin)?, FUBINI_STREAM);
    let mut report = Report::new("fubini-check");
    report.note(format!("{} random sets, up to {} labels, up to {} clauses", f.count, f.max_labels, f.max_clauses));
    for i in 0..f.count {
        let (ok, detail) = fubini_case(&mut rng, f.max_labels, f.max_clauses);
        report.check(format!("set{i:04}"), ok, detail);
    }
    Ok(report)
}

fn collapse_record(report: &mut Report, case: String, model: &UltrapowerModel, seed: u64) {
    let options = CollapseOptions {
        seed,
        ..CollapseOptions::default()
    };
    match model.principal_collapse_with(&options) {
        Ok(c) => {
            let checked = c.report.lines.len();
            let bad = c.report.lines.iter().filter(|l| !l.ok()).count();
            report.check(
                case,
                c.is_isomorphism(),
                format!(
                    "{} classes for {} elements, {} functions checked, surjective {}, {} relation checks, {} wrong; array {}",
                    c.classes,
                    model.base().size(),
                    c.functions_checked,
                    c.surjective,
                    checked,
                    bad,
                    describe_array(model.array())
                ),
            );
        }
        Err(e) => report.check(case, false, e.to_string()),
    }
}

pub fn collapse(config: &ExperimentConfig, origin: &str) -> Result<Report, ConfigError> {
    let c = config.suite.collapse.clone().unwrap_or_default();
    let mut report = Report::new("collapse-check");
    if let (Some(s), Some(_)) = (configured_structure(config, origin)?, &config.array) {
        let array = configured_array(config, origin, "collapse-check")?;
        if !array.all_principal() {
            return Err(missing(origin, "array", "collapse-check needs every ultrafilter to be principal"));
        }
        collapse_record(&mut report, "given".into(), &UltrapowerModel::new(s, array), config.seed.unwrap_or(0));
    }
    if c.count > 0 {
        let mut rng = random::stream_rng(config.require_seed("collapse-check", origin)?, COLLAPSE_STREAM);
        let arrays = random::all_principal_arrays(c.max_labels, c.max_domain);
        for i in 0..c.count {
            let s = Arc::new(random::structure(&mut rng, c.max_size, c.max_relations, c.max_arity));
            let a = arrays[rng.gen_range(0..arrays.len())].clone();
            let seed = rng.gen();
            collapse_record(&mut report, format!("c{i:02}"), &UltrapowerModel::new(s, a), seed);
        }
    }
    if report.records.is_empty() {
        return Err(missing(origin, "suite.collapse.count", "nothing to check without [structure] and [array]"));
    }
    Ok(report)
}

pub fn properness(config: &ExperimentConfig, origin: &str) -> Result<Report, ConfigError> {
    let p = config.suite.properness.clone().unwrap_or_default();
    let array = match suite_array(config, p.array.as_ref(), "properness", origin) {
        Some(a) => a?,
        None => Arc::new(ArraySpec::from_oracles([("w", UltrafilterOracle::factorial_tower())]).expect("one label")),
    };
    let free = |l| array.domain(l) == Domain::Omega && array.oracle(l).classify() == Classification::Free;
    let label = match &p.label {
        Some(name) => array
            .label_id(name)
            .filter(|&l| free(l))
            .ok_or_else(|| missing(origin, "suite.properness.label", &format!("`{name}` is not a free ω-label of the array")))?,
        None => array
            .label_ids()
            .find(|&l| free(l))
            .ok_or_else(|| missing(origin, "array", "properness needs a factorial-tower label"))?,
    };
    let witness = properness_witness(&array, label, 0..p.samples)
        .map_err(|e| missing(origin, "suite.properness", &e.to_string()))?;
    let mut report = Report::new("properness");
    report.note(format!("array {}", describe_array(&array)));
    report.note(format!(
        "projection on {}: differs from {}/{} standard elements, exceeds {}/{}",
        array.label(label),
        witness.distinct_count(),
        p.samples,
        witness.exceeds_count(),
        p.samples
    ));
    for (i, q) in witness.log.iter().enumerate() {
        let kind = if i % 2 == 0 { "ne" } else { "gt" };
        report.check(
            format!("r{:03}/{kind}", i / 2),
            q.verdict == q.expected,
            format!("{} -> {} (expected {})", q.description, q.verdict, q.expected),
        );
    }
    Ok(report)
}

/// `f` and `g` compared by evaluation at a point past every root of the
/// denominators and of the numerator of `f - g`.
pub fn eventual_cmp(f: &Germ, g: &Germ) -> Ordering {
    let d = f.sub(g);
    let n0 = [d.numerator(), f.denominator(), g.denominator()]
        .iter()
        .map(|p| p.cauchy_bound())
        .max()
        .expect("three bounds")
        + BigInt::one();
    let fv = f.eval(&n0).expect("past the denominator roots");
    let gv = g.eval(&n0).expect("past the denominator roots");
    fv.cmp(&gv)
}

/// Ordered-field laws, trichotomy, the evaluation oracle, comparison sets
/// and classification for one triple; returns the violated properties.
pub fn germ_case(f: &Germ, g: &Germ, h: &Germ) -> Vec<String> {
    let mut failed = Vec::new();
    let mut expect = |ok: bool, what: &str| {
        if !ok {
            failed.push(what.to_string());
        }
    };
    expect(f.add(g) == g.add(f) && f.mul(g) == g.mul(f), "commutativity");
    expect(f.add(g).add(h) == f.add(&g.add(h)) && f.mul(g).mul(h) == f.mul(&g.mul(h)), "associativity");
    expect(f.mul(&g.add(h)) == f.mul(g).add(&f.mul(h)), "distributivity");
    expect(f.add(&Germ::zero()) == *f && f.mul(&Germ::one()) == *f, "identities");
    expect(f.add(&f.neg()).is_zero(), "additive inverse");
    expect(f.is_zero() || f.mul(&f.inv().expect("nonzero")) == Germ::one(), "multiplicative inverse");
    let ord = f.compare(g);
    let exactly_one = [Ordering::Less, Ordering::Equal, Ordering::Greater].iter().filter(|&&o| o == ord).count() == 1;
    expect(exactly_one && g.compare(f) == ord.reverse() && (ord == Ordering::Equal) == (f == g), "trichotomy");
    expect(ord == eventual_cmp(f, g), "evaluation oracle");
    if ord == Ordering::Less {
        expect(f.add(h).compare(&g.add(h)) == Ordering::Less, "order respects addition");
        if h.signum() == Ordering::Greater {
            expect(f.mul(h).compare(&g.mul(h)) == Ordering::Less, "order respects multiplication");
        }
        if g.compare(h) == Ordering::Less {
            expect(f.compare(h) == Ordering::Less, "transitivity");
        }
    }
    let lt = f.lt_set(g);
    expect(
        ft_membership(&lt) == Verdict::from_bool(ord == Ordering::Less) && (lt.is_finite() || lt.is_cofinite()),
        "comparison set",
    );
    expect(classify_by_definition(f) == f.classify(), "classification");
    failed
}

/// Infinitesimal if |f| is below every 10^k, infinite if above every 10^k,
/// for k in -6..=6, with comparisons by evaluation; otherwise the
/// standard part is the constant c with |f - c| below 10^-6.
pub fn classify_by_definition(f: &Germ) -> GermClass {
    let ten = BigRational::from_integer(BigInt::from(10));
    let abs = if eventual_cmp(f, &Germ::zero()) == Ordering::Less { f.neg() } else { f.clone() };
    let scales: Vec<Germ> = (-6..=6).map(|k| Germ::constant(&ten.pow(k))).collect();
    if f.is_zero() {
        return GermClass::Appreciable(BigRational::zero());
    }
    if scales.iter().all(|r| eventual_cmp(&abs, r) == Ordering::Less) {
        return GermClass::Infinitesimal;
    }
    if scales.iter().all(|r| eventual_cmp(&abs, r) == Ordering::Greater) {
        return GermClass::Infinite;
    }
    // the candidate is the ratio of leading coefficients; confirm it
    let c = BigRational::new(f.numerator().lead(), f.denominator().lead());
    let eps = Germ::constant(&ten.pow(-6));
    let diff = f.sub(&Germ::constant(&c));
    let diff = if eventual_cmp(&diff, &Germ::zero()) == Ordering::Less { diff.neg() } else { diff };
    if eventual_cmp(&diff, &eps) == Ordering::Less {
        GermClass::Appreciable(c)
    } else {
        GermClass::Infinite
    }
}

pub fn germ(config: &ExperimentConfig, origin: &str) -> Result<Report, ConfigError> {
    let g = config.suite.germ.clone().unwrap_or_default();
    let mut rng = random::stream_rng(config.require_seed("germ", origin)?, GERM_STREAM);
    let mut report = Report::new("germ");
    report.note(format!("{} random triples, degree ≤ {}, |coefficient| ≤ {}", g.count, g.max_degree, g.max_coeff));
    for (expr, expected) in [
        ("1/(n+1)", "Infinitesimal"),
        ("n^2", "Infinite"),
        ("(2*n+1)/(n+1)", "Appreciable(2)"),
    ] {
        let got = Germ::parse(expr).map(|x| x.classify().to_string()).unwrap_or_else(|e| e.to_string());
        report.check(format!("example {expr}"), got == expected, format!("classify -> {got} (expected {expected})"));
    }
    for i in 0..g.count {
        let f = random::germ(&mut rng, g.max_degree, g.max_coeff);
        let h1 = random::germ(&mut rng, g.max_degree, g.max_coeff);
        let h2 = random::germ(&mut rng, g.max_degree, g.max_coeff);
        let failed = germ_case(&f, &h1, &h2);
        let detail = if failed.is_empty() {
            format!("f={f} g={h1} h={h2} class(f)={}", f.classify())
        } else {
            format!("violated: {}; f={f} g={h1} h={h2}", failed.join(", "))
        };
        report.check(format!("triple{i:03}"), failed.is_empty(), detail);
    }
    Ok(report)
}

pub fn superstructure(config: &ExperimentConfig, origin: &str) -> Result<Report, ConfigError> {
    let s = config.suite.superstructure.clone().unwrap_or_default();
    let array = suite_array(config, s.array.as_ref(), "superstructure", origin)
        .ok_or_else(|| missing(origin, "suite.superstructure.array", "superstructure-check needs an array here or at the top level"))??;
    let names: Vec<String> = (0..s.atoms).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let base = Structure::new(names, []).expect("distinct atom names");
    let mut star = StarSuperstructure::new(&base, s.level, array.clone())
        .map_err(|e| missing(origin, "suite.superstructure", &e.to_string()))?;
    if s.mutation == SuperstructureMutation::TransposedMembership {
        star = star
            .with_mutated_membership()
            .map_err(|e| missing(origin, "suite.superstructure.mutation", &e.to_string()))?;
    }
    let mut report = Report::new("superstructure-check");
    report.note(format!("{} atoms, level {}, array {}", s.atoms, s.level, describe_array(&array)));
    if let Some(expected) = &s.expected_sizes {
        if expected.len() != s.level + 1 {
            return Err(missing(
                origin,
                "suite.superstructure.expected_sizes",
                &format!("{} entries for levels 0..={}", expected.len(), s.level),
            ));
        }
    }
    for k in 0..=s.level {
        let size = build_v(&base, k).expect("validated level").len();
        match s.expected_sizes.as_ref().map(|e| e[k]) {
            Some(e) => report.check(format!("size/V{k}"), size == e, format!("|V_{k}| = {size} (expected {e})")),
            None => report.check(format!("size/V{k}"), true, format!("|V_{k}| = {size}")),
        }
    }
    match star.bounded_transfer_check(s.depth, s.nodes) {
        Ok(r) => {
            let (n, c, u) = (r.sentences(), r.counterexample_count(), r.undecidable());
            report.check(
                "transfer",
                c == 0 && u == 0,
                format!("depth ≤ {}, nodes ≤ {}: {n} sentences, {c} counterexamples, {u} undecidable", s.depth, s.nodes),
            );
            for line in r.counterexamples().take(LISTED_COUNTEREXAMPLES) {
                report.note(format!("counterexample: {line}"));
            }
        }
        Err(e) => report.check("transfer", false, format!("evaluation error: {e}")),
    }
    if array.all_principal() {
        extensionality(&star, &mut report);
    } else {
        report.note("extensionality skipped: identification needs every ultrafilter to be principal");
    }
    Ok(report)
}

fn extensionality(star: &StarSuperstructure, report: &mut Report) {
    let size = star.elements().len();
    let array = star.model().array();
    let single: usize = array
        .label_ids()
        .map(|l| match array.domain(l) {
            Domain::Finite(n) => (size as f64).powi(n as i32) as usize,
            Domain::Omega => usize::MAX,
        })
        .fold(size, usize::saturating_add);
    let exhaustive = single <= SINGLE_SUPPORT_LIMIT;
    let classes: Vec<HyperElement> = if exhaustive {
        match star.single_support_classes() {
            Ok(c) => c,
            Err(e) => return report.check("extensionality", false, e.to_string()),
        }
    } else {
        star.elements().iter().map(|e| star.star_embed(e).expect("element of the level")).collect()
    };
    match star.extensionality_check(&classes) {
        Ok(r) => {
            report.check(
                "extensionality",
                r.holds(),
                format!(
                    "{} classes ({}), {} distinct extensions, {} violations",
                    r.classes,
                    if exhaustive { "every single-support class" } else { "standard classes only" },
                    r.extensions,
                    r.violations.len()
                ),
            );
            for v in r.violations.iter().take(LISTED_COUNTEREXAMPLES) {
                report.note(format!("violation: {v}"));
            }
        }
        Err(e) => report.check("extensionality", false, e.to_string()),
    }
    if exhaustive {
        let mut distinct: Vec<&HyperElement> = Vec::new();
        for c in &classes {
            if !distinct.iter().any(|d| star.model().equal(d, c).map_or(false, |v| v.is_in())) {
                distinct.push(c);
            }
        }
        report.check(
            "collapse-size",
            distinct.len() == size,
            format!("|*V_{}| = {} classes, |V_{}| = {size}", star.level(), distinct.len(), star.level()),
        );
    }
}

pub fn array_build(config: &ExperimentConfig, origin: &str) -> Result<Report, ConfigError> {
    let d = config
        .array
        .as_ref()
        .and_then(|a| a.definable)
        .ok_or_else(|| missing(origin, "array.definable", "array-build needs [array.definable] with theta and n"))?;
    let array = configured_array(config, origin, "array-build")?;
    let maps = definable_maps(d.theta, d.n).map_err(|e| missing(origin, "array.definable", &e.to_string()))?;
    let mut report = Report::new("array-build");
    report.note(format!("theta = {}, n = {}: {} ultrafilter-base maps", d.theta, d.n, maps.len()));
    let ordered = maps.windows(2).all(|w| lex_cmp_maps(&w[0], &w[1]) == Ordering::Less);
    report.check("order", ordered, "labels strictly increasing in the lexicographic order");
    for (i, l) in array.label_ids().enumerate() {
        let principal = matches!(array.oracle(l).classify(), Classification::Principal(_));
        report.check(
            format!("a{i:03}"),
            principal && array.domain(l) == Domain::Finite(d.n as u64),
            format!("{} -> {}", array.label(l), array.oracle(l)),
        );
    }
    Ok(report)
}

/// Suites with a section in the config, in a fixed order; `array-build`
/// runs when the array is definable.
pub fn all(config: &ExperimentConfig, origin: &str) -> Result<Vec<Report>, ConfigError> {
    let mut reports = Vec::new();
    let s = &config.suite;
    if s.transfer.is_some() {
        reports.push(transfer(config, origin)?);
    }
    if s.fubini.is_some() {
        reports.push(fubini(config, origin)?);
    }
    if s.collapse.is_some() {
        reports.push(collapse(config, origin)?);
    }
    if s.properness.is_some() {
        reports.push(properness(config, origin)?);
    }
    if s.germ.is_some() {
        reports.push(germ(config, origin)?);
    }
    if s.superstructure.is_some() {
        reports.push(superstructure(config, origin)?);
    }
    if config.array.as_ref().is_some_and(|a| a.definable.is_some()) {
        reports.push(array_build(config, origin)?);
    }
    if reports.is_empty() {
        return Err(missing(origin, "suite", "no suite sections to run"));
    }
    Ok(reports)
}
