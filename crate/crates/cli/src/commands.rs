//! One function per subcommand, each returning the output document.
//! Integers are emitted as decimal strings.

use std::collections::BTreeMap;

use endoring::curve::is_ordinary;
use endoring::endoring::EndRingResult;
use endoring::quadorder::{class_group_structure, enumerate_classes, prime_ideal_above};
use endoring::relations::{holds_in_order, RelationSampler, SmallNorm};
use endoring::{ascend, oracle_endring, Curve, Error, FrobeniusData, PrimeField, QuadOrder, RelationParams, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{CurveSpec, ParamOverrides, Which};

/// Largest `|D|` accepted by `classgroup`.
const CLASSGROUP_MAX: u64 = 1_000_000;

pub enum OrderSpec {
    Curve(CurveSpec),
    Disc { disc: i64, frobenius: Option<(i64, u64)> },
}

fn s<T: ToString>(x: T) -> Value {
    Value::String(x.to_string())
}

fn params_from(o: &ParamOverrides) -> RelationParams {
    let mut p = RelationParams {
        n_override: o.norm_bound,
        coord_bound: o.coord_bound,
        ..Default::default()
    };
    if let Some(b) = o.small_norm {
        p.small_norm = SmallNorm::Fixed(b);
    }
    if let Some(r) = o.r_min {
        p.r_min = r;
    }
    if let Some(m) = o.max_trials {
        p.max_trials = m;
    }
    p
}

fn ordinary_curve(c: &CurveSpec) -> Result<(Curve<PrimeField>, FrobeniusData)> {
    let e = Curve::over_prime(c.p, c.a, c.b)?;
    let fd = FrobeniusData::from_curve(&e)?;
    if !is_ordinary(&fd) {
        return Err(Error::NotOrdinary { p: c.p, t: fd.t });
    }
    Ok((e, fd))
}

fn levels(pairs: &[(u64, u32)]) -> Value {
    let m: BTreeMap<String, Value> = pairs.iter().map(|(p, l)| (p.to_string(), s(l))).collect();
    json!(m)
}

fn endring_doc(curve: &CurveSpec, fd: &FrobeniusData, r: &EndRingResult) -> serde_json::Map<String, Value> {
    let doc = json!({
        "p": s(curve.p),
        "a": s(curve.a),
        "b": s(curve.b),
        "t": s(fd.t),
        "delta": s(fd.delta),
        "delta_factorization": fd.delta_factorization.iter().map(|(p, e)| json!([s(p), s(e)])).collect::<Vec<_>>(),
        "d_K": s(fd.d_k),
        "f_max": s(fd.f_max),
        "conductor": s(r.conductor()),
        "discriminant": s(r.disc()),
        "lattice_path": r.path.iter().map(s).collect::<Vec<_>>(),
        "relations_used": s(r.relations_used()),
        "volcano_levels": levels(&r.volcano_levels),
        "local_valuations": levels(&r.local_valuations),
    });
    match doc {
        Value::Object(m) => m,
        _ => unreachable!("json! object literal"),
    }
}

pub fn compute(curve: &CurveSpec, params: &ParamOverrides, seed: u64) -> Result<Value> {
    let (e, fd) = ordinary_curve(curve)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = ascend(&e, &fd, &params_from(params), &mut rng)?;
    let mut doc = endring_doc(curve, &fd, &r);
    let tests: Vec<Value> = r
        .tests
        .iter()
        .map(|t| {
            json!({
                "conductor": s(t.conductor),
                "accepted": t.accepted,
                "relations": t.relations.len().to_string(),
                "local": levels(&t.local),
            })
        })
        .collect();
    doc.insert("tests".into(), json!(tests));
    doc.insert("seed".into(), s(seed));
    Ok(Value::Object(doc))
}

pub fn oracle(curve: &CurveSpec) -> Result<Value> {
    let (e, fd) = ordinary_curve(curve)?;
    let r = oracle_endring(&e, &fd)?;
    let mut doc = endring_doc(curve, &fd, &r);
    doc.insert("method".into(), s("oracle"));
    Ok(Value::Object(doc))
}

pub fn classgroup(disc: i64) -> Result<Value> {
    if disc.unsigned_abs() > CLASSGROUP_MAX {
        return Err(Error::OutOfScale(format!("|D| must be at most {CLASSGROUP_MAX}")));
    }
    let forms = enumerate_classes(disc)?;
    let structure = class_group_structure(disc)?;
    Ok(json!({
        "disc": s(disc),
        "h": s(forms.len()),
        "reduced_forms": forms.iter().map(|f| json!([s(f.a), s(f.b), s(f.c)])).collect::<Vec<_>>(),
        "structure": structure
            .iter()
            .map(|(g, n)| json!({ "form": [s(g.a), s(g.b), s(g.c)], "order": s(n) }))
            .collect::<Vec<_>>(),
    }))
}

fn resolve_order(spec: &OrderSpec) -> Result<(QuadOrder, FrobeniusData)> {
    match spec {
        OrderSpec::Curve(c) => {
            let (_, fd) = ordinary_curve(c)?;
            Ok((QuadOrder::from_frobenius(&fd)?, fd))
        }
        OrderSpec::Disc { disc, frobenius: None } => {
            let fd = FrobeniusData::synthetic(*disc)?;
            Ok((QuadOrder::from_frobenius(&fd)?, fd))
        }
        OrderSpec::Disc {
            disc,
            frobenius: Some((t, q)),
        } => {
            let fd = FrobeniusData::new(*q, *t)?;
            let top = QuadOrder::from_frobenius(&fd)?;
            let o = top.lattice().into_iter().find(|o| o.disc() == *disc).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "no order of discriminant {disc} contains Z[pi] for t = {t}, q = {q}"
                ))
            })?;
            Ok((o, fd))
        }
    }
}

pub fn relation(spec: &OrderSpec, params: &ParamOverrides, seed: u64) -> Result<Value> {
    let (o, fd) = resolve_order(spec)?;
    let sampler = RelationSampler::new(&o, &fd, &params_from(params))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r, trials) = sampler.find_counted(&mut rng)?;
    let verified = holds_in_order(&r, &sampler.base);
    if !verified {
        return Err(Error::Invariant("sampled relation does not hold".into()));
    }
    let support: BTreeMap<String, Value> = r
        .support()
        .into_iter()
        .map(|(i, n)| (sampler.base.primes[i].ell.to_string(), s(n)))
        .collect();
    Ok(json!({
        "disc": s(o.disc()),
        "conductor": s(o.f),
        "norm_bound": s(sampler.params.n),
        "factor_base": sampler.base.primes.iter().map(|p| json!([s(p.ell), s(p.lambda)])).collect::<Vec<_>>(),
        "relation": support,
        "verified": verified,
        "trials": s(trials),
        "seed": s(seed),
    }))
}

pub fn act(curve: &CurveSpec, ell: u64, which: Which, steps: u64, seed: u64) -> Result<Value> {
    let (e, fd) = ordinary_curve(curve)?;
    let o = QuadOrder::from_frobenius(&fd)?;
    let prime = prime_ideal_above(&o, &fd, ell)
        .ok_or_else(|| Error::InvalidArgument(format!("{ell} is not a split prime coprime to {}", fd.delta)))?;
    let prime = match which {
        Which::Plus => prime,
        Which::Minus => prime.conjugate(),
    };
    let mut walker = endoring::isogeny::Walker::new(&fd, seed);
    let start = e.j_invariant();
    let mut js = vec![start];
    let mut cycle_length = None;
    let mut cur = e;
    for n in 1..=steps {
        cur = walker.step(&cur, &prime)?;
        let j = cur.j_invariant();
        if j == start && cycle_length.is_none() {
            cycle_length = Some(n);
        }
        js.push(j);
    }
    Ok(json!({
        "p": s(curve.p),
        "ell": s(ell),
        "lambda": s(prime.lambda),
        "which": match which { Which::Plus => "plus", Which::Minus => "minus" },
        "steps": s(steps),
        "j_invariants": js.iter().map(s).collect::<Vec<_>>(),
        "cycle": cycle_length.is_some(),
        "cycle_length": cycle_length.map(s).unwrap_or(Value::Null),
        "final_curve": { "a": s(cur.a()), "b": s(cur.b()) },
        "seed": s(seed),
    }))
}
