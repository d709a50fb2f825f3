use std::sync::Arc;

use rand::Rng;
use ulab_core::filters::*;
use ulab_core::index_algebra::*;
use ulab_core::random;
use ulab_core::ultrapower::*;

fn leq(size: usize) -> Arc<Structure> {
    let tuples = (0..size)
        .flat_map(|i| (i..size).map(move |j| vec![i, j]))
        .collect();
    Arc::new(Structure::numbered(size, [("R".to_string(), 2, tuples)]).unwrap())
}

fn all_tuples(size: usize, len: usize) -> Vec<Vec<usize>> {
    (0..size.pow(len as u32))
        .map(|mut k| {
            let mut t = vec![0; len];
            for slot in t.iter_mut().rev() {
                *slot = k % size;
                k /= size;
            }
            t
        })
        .collect()
}

#[test]
fn star_embed_is_an_embedding_in_both_regimes() {
    let mut rng = random::stream_rng(21, 0);
    for round in 0..40 {
        let m = Arc::new(random::structure(&mut rng, 3, 2, 2));
        let array = if round % 2 == 0 {
            random::all_principal_arrays(2, 3)[rng.gen_range(0..42)].clone()
        } else {
            random::mixed_array(&mut rng, 3)
        };
        let model = UltrapowerModel::new(m.clone(), array);
        for r in 0..m.size() {
            for s in 0..m.size() {
                let v = model.equal(&model.star_embed(r).unwrap(), &model.star_embed(s).unwrap()).unwrap();
                assert_eq!(v, Verdict::from_bool(r == s));
            }
        }
        for (name, rel) in m.relations() {
            for t in all_tuples(m.size(), rel.arity) {
                let args: Vec<HyperElement> = t.iter().map(|&r| model.star_embed(r).unwrap()).collect();
                let refs: Vec<&HyperElement> = args.iter().collect();
                assert_eq!(
                    model.relation_lift(name, &refs).unwrap(),
                    Verdict::from_bool(m.holds(name, &t).unwrap())
                );
            }
        }
    }
}

/// `f` changed to arbitrary values on a random D-small set.
fn perturb<R: Rng>(rng: &mut R, model: &UltrapowerModel, f: &HyperElement) -> HyperElement {
    let array = model.array();
    let small = loop {
        let s = random::supported_set(rng, array, 2);
        if s.fubini_member() == Verdict::Out {
            break s;
        }
    };
    let mut cuts = Cuts::new();
    cuts.add_set(&small);
    cuts.add_function(f.representative());
    let size = model.base().size();
    let g = tabulate_function::<_, AlgebraError>(array, &cuts, |p| {
        Ok(if small.contains(p)? {
            rng.gen_range(0..size)
        } else {
            *f.representative().eval(p)?
        })
    })
    .unwrap();
    model.element(g).unwrap()
}

#[test]
fn relation_lift_respects_equality_mod_d() {
    let mut rng = random::stream_rng(22, 0);
    for _ in 0..300 {
        let m = Arc::new(random::structure(&mut rng, 3, 2, 2));
        let model = UltrapowerModel::new(m.clone(), random::mixed_array(&mut rng, 3));
        let (name, rel) = m.relations().iter().next().unwrap();
        let args: Vec<HyperElement> = (0..rel.arity)
            .map(|_| model.element(random::supported_function(&mut rng, model.array(), m.size())).unwrap())
            .collect();
        let slot = rng.gen_range(0..rel.arity);
        let mut changed = args.clone();
        changed[slot] = perturb(&mut rng, &model, &args[slot]);
        assert_eq!(model.equal(&args[slot], &changed[slot]).unwrap(), Verdict::In);
        let before: Vec<&HyperElement> = args.iter().collect();
        let after: Vec<&HyperElement> = changed.iter().collect();
        let v = model.relation_lift(name, &before).unwrap();
        assert!(v.is_decided());
        assert_eq!(v, model.relation_lift(name, &after).unwrap());
    }
}

#[test]
fn principal_regime_reduces_to_the_principal_point() {
    let m = leq(3);
    for array in random::all_principal_arrays(2, 3) {
        let model = UltrapowerModel::new(m.clone(), array.clone());
        let point = model.principal_point().unwrap();
        let mut rng = random::stream_rng(23, array.len() as u64);
        for _ in 0..10 {
            let f = model.element(random::supported_function(&mut rng, &array, 3)).unwrap();
            let g = model.element(random::supported_function(&mut rng, &array, 3)).unwrap();
            let (fp, gp) = (*f.representative().eval(&point).unwrap(), *g.representative().eval(&point).unwrap());
            assert_eq!(model.relation_lift("R", &[&f, &g]).unwrap(), Verdict::from_bool(fp <= gp));
            assert_eq!(model.equal(&f, &model.star_embed(fp).unwrap()).unwrap(), Verdict::In);
        }
    }
}

#[test]
fn collapse_examples() {
    let one = Arc::new(ArraySpec::from_oracles([("a", UltrafilterOracle::principal(Domain::Finite(2), 1).unwrap())]).unwrap());
    let c = UltrapowerModel::new(leq(3), one).principal_collapse().unwrap();
    assert!(c.is_isomorphism());
    assert_eq!(c.classes, 3);
    // constants plus all 3^2 single-support tables
    assert_eq!(c.functions_checked, 3 + 9);

    let empty = Arc::new(ArraySpec::new([]).unwrap());
    let model = UltrapowerModel::new(leq(3), empty);
    let c = model.principal_collapse().unwrap();
    assert!(c.is_isomorphism());
    for r in 0..3 {
        assert_eq!(c.image(&model.star_embed(r).unwrap()), r);
    }

    let mut rng = random::stream_rng(24, 0);
    let two = random::all_principal_arrays(2, 2)
        .into_iter()
        .filter(|a| a.len() == 2 && a.label_ids().all(|l| a.domain(l) == Domain::Finite(2)))
        .collect::<Vec<_>>();
    assert_eq!(two.len(), 4);
    for array in two {
        let m = Arc::new(Structure::numbered(2, [("R".to_string(), 2, all_tuples(2, 2).into_iter().filter(|_| rng.gen_bool(0.5)).collect())]).unwrap());
        let c = UltrapowerModel::new(m, array).principal_collapse().unwrap();
        assert!(c.is_isomorphism(), "{}", c.report);
    }

    let free = Arc::new(ArraySpec::from_oracles([("w", UltrafilterOracle::factorial_tower())]).unwrap());
    assert!(matches!(
        UltrapowerModel::new(leq(2), free).principal_collapse(),
        Err(UltrapowerError::NotAllPrincipal(_))
    ));
}

#[test]
fn free_coordinate_lift_example() {
    let array = Arc::new(ArraySpec::from_oracles([("a", UltrafilterOracle::factorial_tower())]).unwrap());
    let m = Arc::new(Structure::numbered(2, [("P".to_string(), 1, vec![vec![1]])]).unwrap());
    let model = UltrapowerModel::new(m, array.clone());
    let evens = PeriodicSet::residue_class(2, 0);
    let f = SupportedFunction::from_guards(&array, vec![(LabelId(0), vec![evens.clone(), evens.complement()])], vec![1, 0]).unwrap();
    let f = model.element(f).unwrap();
    assert_eq!(model.relation_lift("P", &[&f]).unwrap(), Verdict::In);
    assert_eq!(model.lift_set("P", &[&f]).unwrap().to_string(), "a∈[period=2 mask={0} threshold=0 overrides={}]");
}

#[test]
fn properness_examples() {
    let array = Arc::new(
        ArraySpec::from_oracles([
            ("w", UltrafilterOracle::factorial_tower()),
            ("p", UltrafilterOracle::principal(Domain::Omega, 3).unwrap()),
        ])
        .unwrap(),
    );
    let w = properness_witness(&array, LabelId(0), 0..100).unwrap();
    assert!(w.holds());
    assert_eq!(w.distinct_count(), 100);
    assert_eq!(w.exceeds_count(), 100);
    assert!(matches!(properness_witness(&array, LabelId(1), 0..10), Err(UltrapowerError::NotFree(_))));
}
