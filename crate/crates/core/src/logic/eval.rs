//! Tarski evaluation over a finite structure and Łoś evaluation over its
//! ultrapower.

use std::collections::BTreeMap;

use crate::filters::Verdict;
use crate::index_algebra::{tabulate_function, tabulate_set, Cuts, Point, SupportedSet};
use crate::ultrapower::{HyperElement, Structure, UltrapowerModel};

use super::formula::{Formula, Term};
use super::LogicError;

pub type Valuation = BTreeMap<String, usize>;
pub type StarValuation = BTreeMap<String, HyperElement>;

fn lookup<'e, T>(env: &'e [(&str, T)], var: &str) -> Result<&'e T, LogicError> {
    env.iter()
        .rev()
        .find(|(v, _)| *v == var)
        .map(|(_, x)| x)
        .ok_or_else(|| LogicError::UnboundVariable(var.to_string()))
}

/// Truth of `formula` in `structure` under `valuation`; quantifiers range
/// over the whole (finite) universe, or over a unary relation when bounded.
pub fn eval_base(
    structure: &Structure,
    formula: &Formula,
    valuation: &Valuation,
) -> Result<bool, LogicError> {
    let mut env: Vec<(&str, usize)> = valuation.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    base(structure, formula, &mut env)
}

pub(crate) fn base<'f>(
    m: &Structure,
    formula: &'f Formula,
    env: &mut Vec<(&'f str, usize)>,
) -> Result<bool, LogicError> {
    let value = |t: &Term, env: &[(&str, usize)]| -> Result<usize, LogicError> {
        match t {
            Term::Var(v) => lookup(env, v).copied(),
            Term::Const(i) if *i < m.size() => Ok(*i),
            Term::Const(i) => Err(LogicError::UnknownConstant(*i)),
        }
    };
    Ok(match formula {
        Formula::Atom { relation, args } => {
            let vals = args
                .iter()
                .map(|t| value(t, env))
                .collect::<Result<Vec<_>, _>>()?;
            m.holds(relation, &vals)?
        }
        Formula::Equals(a, b) => value(a, env)? == value(b, env)?,
        Formula::Not(a) => !base(m, a, env)?,
        Formula::And(a, b) => base(m, a, env)? && base(m, b, env)?,
        Formula::Or(a, b) => base(m, a, env)? || base(m, b, env)?,
        Formula::Implies(a, b) => !base(m, a, env)? || base(m, b, env)?,
        Formula::ForAll { var, bound, body } | Formula::Exists { var, bound, body } => {
            let universal = matches!(formula, Formula::ForAll { .. });
            let mut result = universal;
            for e in 0..m.size() {
                if let Some(b) = bound {
                    if !m.holds(b, &[e])? {
                        continue;
                    }
                }
                env.push((var, e));
                let v = base(m, body, env);
                env.pop();
                if v? != universal {
                    result = !universal;
                    break;
                }
            }
            result
        }
    })
}

/// Truth of `formula` in the ultrapower, with the quantifiers handled as
/// in the proof of Łoś's lemma.
///
/// Atoms are decided by Fubini membership of their lifted defining sets and
/// connectives act on verdicts, so negation relies on the complement
/// dichotomy of `D` and conjunction on its closure under intersection. For
/// `∃y φ` a Skolem function is built pointwise: on each cell of the support
/// of the current assignment it picks the least element satisfying `φ`
/// there (the first element if none does), and `φ` is then evaluated at its
/// class. `∀y φ` uses the least counterexample instead.
pub fn eval_star(
    model: &UltrapowerModel,
    formula: &Formula,
    valuation: &StarValuation,
) -> Result<Verdict, LogicError> {
    let mut env: Vec<(&str, HyperElement)> = valuation
        .iter()
        .map(|(k, v)| (k.as_str(), v.clone()))
        .collect();
    star(model, formula, &mut env)
}

fn star<'f>(
    model: &UltrapowerModel,
    formula: &'f Formula,
    env: &mut Vec<(&'f str, HyperElement)>,
) -> Result<Verdict, LogicError> {
    let element = |t: &Term, env: &[(&str, HyperElement)]| -> Result<HyperElement, LogicError> {
        match t {
            Term::Var(v) => lookup(env, v).cloned(),
            Term::Const(i) => Ok(model.star_embed(*i)?),
        }
    };
    Ok(match formula {
        Formula::Atom { relation, args } => {
            let elems = args
                .iter()
                .map(|t| element(t, env))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&HyperElement> = elems.iter().collect();
            model.relation_lift(relation, &refs)?
        }
        Formula::Equals(a, b) => model.equal(&element(a, env)?, &element(b, env)?)?,
        Formula::Not(a) => star(model, a, env)?.negate(),
        Formula::And(a, b) => match star(model, a, env)? {
            Verdict::Out => Verdict::Out,
            v => v.and(star(model, b, env)?),
        },
        Formula::Or(a, b) => match star(model, a, env)? {
            Verdict::In => Verdict::In,
            v => v.or(star(model, b, env)?),
        },
        Formula::Implies(a, b) => match star(model, a, env)? {
            Verdict::Out => Verdict::In,
            v => v.negate().or(star(model, b, env)?),
        },
        Formula::ForAll { var, bound, body } | Formula::Exists { var, bound, body } => {
            let universal = matches!(formula, Formula::ForAll { .. });
            let witness = skolem(model, formula, var, bound.as_deref(), body, env, !universal)?;
            env.push((var, witness));
            let in_bound = match bound {
                Some(b) => {
                    let w = &env.last().expect("just pushed").1;
                    model.relation_lift(b, &[w])
                }
                None => Ok(Verdict::In),
            };
            let result = in_bound.map_err(LogicError::from).and_then(|in_bound| {
                Ok(if universal {
                    match in_bound {
                        Verdict::Out => Verdict::In,
                        v => v.negate().or(star(model, body, env)?),
                    }
                } else {
                    match in_bound {
                        Verdict::Out => Verdict::Out,
                        v => v.and(star(model, body, env)?),
                    }
                })
            });
            env.pop();
            result?
        }
    })
}

/// Pointwise witness for a quantifier: on each cell, the least element `b`
/// in the bound with `body[var := b]` equal to `want`.
fn skolem<'f>(
    model: &UltrapowerModel,
    quantified: &Formula,
    var: &'f str,
    bound: Option<&str>,
    body: &'f Formula,
    env: &[(&'f str, HyperElement)],
    want: bool,
) -> Result<HyperElement, LogicError> {
    let free = quantified.free_vars();
    let mut relevant: Vec<(&str, &HyperElement)> = Vec::new();
    let mut cuts = Cuts::new();
    for name in &free {
        let f = lookup(env, name)?;
        cuts.add_function(f.representative());
        relevant.push((name.as_str(), f));
    }
    let m = model.base();
    let mut local: Vec<(&str, usize)> = Vec::with_capacity(relevant.len() + 1);
    let f = tabulate_function(model.array(), &cuts, |p: &Point| -> Result<usize, LogicError> {
        local.clear();
        local.extend(relevant.iter().map(|(n, f)| (*n, *f.representative().eval(p).expect("cell covers support"))));
        for b in 0..m.size() {
            if let Some(bound) = bound {
                if !m.holds(bound, &[b])? {
                    continue;
                }
            }
            local.push((var, b));
            let v = base(m, body, &mut local);
            local.pop();
            if v? == want {
                return Ok(b);
            }
        }
        Ok(0)
    })?;
    Ok(model.element(f)?)
}

/// `{x : M ⊨ φ[f(x)]}`, computed pointwise.
pub fn truth_set(
    model: &UltrapowerModel,
    formula: &Formula,
    valuation: &StarValuation,
) -> Result<SupportedSet, LogicError> {
    let mut cuts = Cuts::new();
    for f in valuation.values() {
        cuts.add_function(f.representative());
    }
    let m = model.base();
    tabulate_set(model.array(), &cuts, |p| {
        let v: Valuation = valuation
            .iter()
            .map(|(k, f)| (k.clone(), *f.representative().eval(p).expect("cell covers support")))
            .collect();
        eval_base(m, formula, &v)
    })
}

/// Evaluation through the principal collapse: each class is replaced by its
/// value at the principal point and the formula is evaluated in the base.
pub fn eval_collapsed(
    model: &UltrapowerModel,
    formula: &Formula,
    valuation: &StarValuation,
) -> Result<Verdict, LogicError> {
    let point = model.principal_point()?;
    let v: Valuation = valuation
        .iter()
        .map(|(k, f)| Ok((k.clone(), *f.representative().eval(&point)?)))
        .collect::<Result<_, LogicError>>()?;
    Ok(Verdict::from_bool(eval_base(model.base(), formula, &v)?))
}
