use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use ulab_core::filters::*;
use ulab_core::index_algebra::*;
use ulab_core::random;
use ulab_core::superstructure::*;
use ulab_core::ultrapower::*;

fn atoms(n: usize) -> Structure {
    let names: Vec<String> = ["a", "b", "c"][..n].iter().map(|s| s.to_string()).collect();
    Structure::new(names, []).unwrap()
}

/// Levels as sets of hereditarily finite codes: atoms are the strings
/// themselves, sets are sorted member lists rendered with braces.
fn level_oracle(atom_names: &[&str], level: usize) -> BTreeSet<String> {
    let mut current: Vec<(String, BTreeSet<String>)> = atom_names.iter().map(|a| (a.to_string(), BTreeSet::new())).collect();
    let mut is_set: Vec<bool> = vec![false; current.len()];
    for _ in 0..level {
        let mut next = current.clone();
        let mut next_set = is_set.clone();
        for mask in 0u32..1 << current.len() {
            let members: BTreeSet<String> =
                (0..current.len()).filter(|i| mask >> i & 1 == 1).map(|i| current[i].0.clone()).collect();
            let name = format!("{{{}}}", members.iter().cloned().collect::<Vec<_>>().join("|"));
            if !next.iter().any(|(n, _)| *n == name) {
                next.push((name, members));
                next_set.push(true);
            }
        }
        current = next;
        is_set = next_set;
    }
    current.into_iter().map(|(n, _)| n).collect()
}

#[test]
fn level_sizes_match_an_independent_count() {
    for n in 1..=3 {
        let names = &["a", "b", "c"][..n];
        for level in 0..=2 {
            if n == 3 && level == 2 {
                continue;
            }
            let v = build_v(&atoms(n), level).unwrap();
            assert_eq!(v.len(), level_oracle(names, level).len(), "n={n} level={level}");
        }
    }
    assert_eq!(build_v(&atoms(2), 1).unwrap().len(), 6);
    assert_eq!(build_v(&atoms(2), 2).unwrap().len(), 66);
}

#[test]
fn embedding_preserves_membership_and_levels() {
    let mut rng = random::stream_rng(51, 0);
    for level in 1..=2 {
        for _ in 0..3 {
            let array = if rng.gen_bool(0.5) {
                random::all_principal_arrays(2, 2)[rng.gen_range(0..8)].clone()
            } else {
                random::mixed_array(&mut rng, 2)
            };
            let star = StarSuperstructure::new(&atoms(2), level, array).unwrap();
            let embedded: Vec<HyperElement> = star.elements().iter().map(|e| star.star_embed(e).unwrap()).collect();
            for (i, e) in star.elements().iter().enumerate() {
                for (j, s) in star.elements().iter().enumerate() {
                    assert_eq!(star.star_membership(&embedded[i], &embedded[j]).unwrap(), Verdict::from_bool(s.contains(e)));
                }
                for k in 0..=level {
                    assert_eq!(
                        star.model().relation_lift(&level_predicate(k), &[&embedded[i]]).unwrap(),
                        Verdict::from_bool(e.rank() <= k)
                    );
                }
            }
        }
    }
}

#[test]
fn membership_is_invariant_under_small_changes() {
    let mut rng = random::stream_rng(52, 0);
    for _ in 0..100 {
        let array = random::mixed_array(&mut rng, 3);
        let star = StarSuperstructure::new(&atoms(2), 1, array.clone()).unwrap();
        let size = star.elements().len();
        let f = random::supported_function(&mut rng, &array, size);
        let g = random::supported_function(&mut rng, &array, size);
        let small = loop {
            let s = random::supported_set(&mut rng, &array, 2);
            if s.fubini_member() == Verdict::Out {
                break s;
            }
        };
        let mut cuts = Cuts::new();
        cuts.add_set(&small);
        cuts.add_function(&f);
        let shift = rng.gen_range(1..size);
        let f2 = tabulate_function::<_, AlgebraError>(&array, &cuts, |p| {
            let v = *f.eval(p)?;
            Ok(if small.contains(p)? { (v + shift) % size } else { v })
        })
        .unwrap();
        let (ef, ef2, eg) = (star.model().element(f).unwrap(), star.model().element(f2).unwrap(), star.model().element(g).unwrap());
        assert_eq!(star.model().equal(&ef, &ef2).unwrap(), Verdict::In);
        let before = star.star_membership(&ef, &eg).unwrap();
        assert!(before.is_decided());
        assert_eq!(before, star.star_membership(&ef2, &eg).unwrap());
        assert_eq!(star.star_membership(&eg, &ef).unwrap(), star.star_membership(&eg, &ef2).unwrap());
    }
}

#[test]
fn principal_levels_collapse_to_their_standard_size() {
    for array in random::all_principal_arrays(2, 2) {
        let star = StarSuperstructure::new(&atoms(2), 1, array.clone()).unwrap();
        let classes = star.single_support_classes().unwrap();
        let mut distinct: Vec<&HyperElement> = Vec::new();
        for c in &classes {
            if !distinct.iter().any(|d| star.model().equal(d, c).unwrap() == Verdict::In) {
                distinct.push(c);
            }
        }
        assert_eq!(distinct.len(), 6);
        let collapse = star.model().principal_collapse().unwrap();
        assert!(collapse.is_isomorphism(), "{}", collapse.report);
        assert_eq!(collapse.classes, 6);
        // each class is identified with the extension of the element it collapses to
        for c in &classes {
            let e = &star.elements()[collapse.image(c)];
            let expected = match e {
                VElement::Atom(_) => Identification::Lower,
                VElement::Set(members) => Identification::Extension(members.clone()),
            };
            assert_eq!(star.identify_as_subset(c).unwrap(), expected);
        }
    }
}

#[test]
fn extensionality_holds_on_every_single_support_class() {
    for array in random::all_principal_arrays(2, 2).into_iter().step_by(3) {
        for level in 1..=2 {
            let star = StarSuperstructure::new(&atoms(2), level, array.clone()).unwrap();
            let classes = if level == 1 {
                star.single_support_classes().unwrap()
            } else {
                star.elements().iter().map(|e| star.star_embed(e).unwrap()).collect()
            };
            let report = star.extensionality_check(&classes).unwrap();
            assert!(report.holds(), "{:?}", report.violations);
            // rank-1 sets already lie in V_1 and are reported as lower at level 2
            assert_eq!(report.extensions, if level == 1 { 4 } else { 64 - 4 });
        }
    }
    let free = Arc::new(ArraySpec::from_oracles([("w", UltrafilterOracle::factorial_tower())]).unwrap());
    let star = StarSuperstructure::new(&atoms(2), 1, free).unwrap();
    assert_eq!(star.identify_as_subset(&star.star_embed(&VElement::atom("a")).unwrap()), Err(SuperstructureError::NotPrincipalRegime));
}

#[test]
fn bounded_transfer_has_no_counterexamples() {
    let mut rng = random::stream_rng(53, 0);
    for array in [
        random::all_principal_arrays(2, 2)[5].clone(),
        random::mixed_array(&mut rng, 2),
        Arc::new(ArraySpec::from_oracles([("w", UltrafilterOracle::factorial_tower())]).unwrap()),
    ] {
        let star = StarSuperstructure::new(&atoms(2), 1, array).unwrap();
        let report = star.bounded_transfer_check(2, 5).unwrap();
        assert!(report.sentences() > 100);
        assert_eq!(report.counterexample_count(), 0, "{}", report.render());
    }
    let star = StarSuperstructure::new(&atoms(2), 2, random::all_principal_arrays(1, 2)[1].clone()).unwrap();
    assert_eq!(star.bounded_transfer_check(2, 3).unwrap().counterexample_count(), 0);
}

#[test]
fn transposed_membership_is_caught() {
    let star = StarSuperstructure::new(&atoms(2), 1, random::all_principal_arrays(2, 2)[3].clone()).unwrap();
    let mutated = star.with_mutated_membership().unwrap();
    assert!(mutated.bounded_transfer_check(2, 4).unwrap().counterexample_count() > 0);
    let embedded: Vec<HyperElement> = star.elements().iter().map(|e| mutated.star_embed(e).unwrap()).collect();
    let a = mutated.index_of(&VElement::atom("a")).unwrap();
    let sa = mutated.index_of(&VElement::set([VElement::atom("a")])).unwrap();
    assert_eq!(mutated.star_membership(&embedded[a], &embedded[sa]).unwrap(), Verdict::Out);
}
