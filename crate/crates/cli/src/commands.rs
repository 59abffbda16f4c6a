use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use moncomp_core::emx::{
    extract_compression, regret_experiment, sample_size, trial_rng, ConceptClass, Distribution, LooLearner,
    LwLearner, MaxLearner, RegretReport,
};
use moncomp_core::schemes::{exhaustive_validate_upto, validate, LadderScheme, TableScheme, Verdict};
use moncomp_core::search::{counting_bound, search_pqr, PqrInstance, PqrOutcome};
use moncomp_core::transforms::{
    decrease_size, imperfect_to_perfect, labeled_lift, uniformize, vc_dimension, GrowthFunction, PqrCompression,
    SchemeFamily,
};
use moncomp_core::{MonotoneScheme, Point, PointSet, Sample, Scaffold};

use crate::config::*;
use crate::CliError;

/// What a run produced, before anything is written.
#[derive(Clone, Debug, PartialEq)]
pub struct Execution {
    pub result: Value,
    pub csv: Option<String>,
    /// Extra output files, by name.
    pub artifacts: Vec<(String, String)>,
    /// Set when a check completed and failed; the report is still written.
    pub failure: Option<String>,
}

impl Execution {
    fn new(result: Value) -> Self {
        Execution { result, csv: None, artifacts: Vec::new(), failure: None }
    }
}

/// Runs a config. Pure apart from reading input files.
pub fn execute(config: &ExperimentConfig) -> Result<Execution, CliError> {
    let seed = config.seed;
    match &config.command {
        Command::Ladder(a) => ladder(a),
        Command::Validate(a) => validate_cmd(a),
        Command::Transform { op } => match op {
            TransformOp::Uniformize(a) => transform_uniformize(a),
            TransformOp::Decrease(a) => transform_decrease(a),
            TransformOp::Perfect(a) => transform_perfect(a),
            TransformOp::Lift(a) => transform_lift(a),
        },
        Command::Learn(a) => learn(a, seed),
        Command::LwLearn(a) => lw_learn(a, seed),
        Command::Extract(a) => extract(a, seed),
        Command::Pqr(a) => pqr(a),
        Command::Scaling(a) => scaling(a, seed),
    }
}

fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

/// The scheme and, for ladders, its depth.
fn build_scheme(a: &SchemeArgs) -> Result<(Arc<dyn MonotoneScheme>, Option<usize>), CliError> {
    match a.scheme {
        SchemeKind::Omega => match a.d {
            None | Some(1) => Ok((Arc::new(LadderScheme::omega()), Some(0))),
            Some(d) => Err(CliError::Config(format!("the omega scheme has size 1, not {d}"))),
        },
        SchemeKind::Ladder => match a.d {
            Some(d) if d >= 1 => Ok((Arc::new(LadderScheme::new(Scaffold::canonical(d - 1))), Some(d - 1))),
            _ => Err(CliError::Config("a ladder scheme needs --d of at least 1".into())),
        },
        SchemeKind::Table => {
            let path = a.table.as_ref().ok_or_else(|| CliError::Config("a table scheme needs --table".into()))?;
            let t: TableScheme = load_json(path)?;
            if let Some(d) = a.d.filter(|&d| d != t.size_bound()) {
                return Err(CliError::Config(format!("{} has size {}, not {d}", path.display(), t.size_bound())));
            }
            Ok((Arc::new(t), None))
        }
    }
}

/// `{0..n-1}` as naturals, or the grid `[0,n)^(depth+1)`.
fn pool_points(n: u64, depth: usize) -> Result<Vec<Point>, CliError> {
    let size = (n as u128).checked_pow(depth as u32 + 1).filter(|&s| s <= 1 << 20);
    if size.is_none() {
        return Err(CliError::Config(format!("pool of side {n} at depth {depth} is too large")));
    }
    let mut pts = vec![Vec::new()];
    for _ in 0..=depth {
        pts = pts
            .into_iter()
            .flat_map(|p: Vec<u64>| {
                (0..n).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    Ok(pts.into_iter().map(Point::new).collect())
}

fn distribution(a: &DistArgs, depth: usize) -> Result<Distribution, CliError> {
    match &a.dist_file {
        Some(path) => load_json(path),
        None => Ok(Distribution::uniform(pool_points(a.support, depth)?)?),
    }
}

fn class(a: &ClassArgs, depth: usize) -> Result<ConceptClass, CliError> {
    match &a.class_file {
        Some(path) => load_json(path),
        None => Ok(ConceptClass::fin_subsets(depth)),
    }
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Valid => json!({ "verdict": "valid" }),
        Verdict::Invalid(why) => json!({ "verdict": "invalid", "reason": why }),
    }
}

fn finish_verdict(mut exec: Execution, v: &Verdict) -> Execution {
    if let Verdict::Invalid(why) = v {
        exec.failure = Some(why.clone());
    }
    exec
}

fn ladder(a: &LadderArgs) -> Result<Execution, CliError> {
    let scheme = LadderScheme::new(Scaffold::canonical(a.depth));
    let sample = &a.sample.0;
    let (c, side) = scheme.compress(sample)?;
    let distinct: Vec<Point> = sample.to_set().into_iter().collect();
    let covered = scheme.count_covered(&c, side, &distinct)? == distinct.len();
    let verdict = validate(&scheme, sample);
    let mut result = json!({
        "depth": a.depth,
        "size_bound": scheme.size_bound(),
        "compression": to_json(&c),
        "side": to_json(&side),
        "covered": covered,
    });
    result.as_object_mut().unwrap().extend(verdict_json(&verdict).as_object().unwrap().clone());
    Ok(finish_verdict(Execution::new(result), &verdict))
}

fn validate_cmd(a: &ValidateArgs) -> Result<Execution, CliError> {
    let (scheme, depth) = build_scheme(&a.scheme)?;
    let (verdict, checked) = match &a.sample {
        Some(s) => (validate(scheme.as_ref(), &s.0), json!({ "sample": to_json(&s.0) })),
        None => {
            let pool: PointSet = pool_points(a.pool, depth.unwrap_or(0))?.into_iter().collect();
            let v = exhaustive_validate_upto(scheme.as_ref(), &pool, a.p, a.cap as u128)?;
            (v, json!({ "pool_size": pool.len(), "max_p": a.p }))
        }
    };
    let mut result = verdict_json(&verdict);
    result["checked"] = checked;
    result["size_bound"] = json!(scheme.size_bound());
    Ok(finish_verdict(Execution::new(result), &verdict))
}

fn nat_pool(n: u64) -> PointSet {
    (0..n).map(Point::nat).collect()
}

fn subsets_upto(pool: &PointSet, max: usize) -> Vec<Sample> {
    use itertools::Itertools;
    (0..=max.min(pool.len())).flat_map(|k| pool.iter().cloned().combinations(k).map(Sample)).collect()
}

fn transform_uniformize(a: &UniformizeArgs) -> Result<Execution, CliError> {
    let mut family = SchemeFamily::new(a.d);
    for (m, path) in &a.members {
        let t: TableScheme = load_json(path)?;
        family.insert(*m, Arc::new(t))?;
    }
    let f = match a.growth {
        GrowthKind::Identity => GrowthFunction::Identity,
        GrowthKind::Power => GrowthFunction::Power { base: a.base },
        GrowthKind::Tower => GrowthFunction::Tower { base: a.base },
    };
    let u = uniformize(family, f)?;
    let pool = nat_pool(a.pool);
    let verdict = exhaustive_validate_upto(&u, &pool, a.max_p, 1 << 24)?;
    let mut sides = BTreeMap::new();
    for m in 0..=a.max_p {
        sides.insert(m.to_string(), to_json(&u.side_for(m)?));
    }
    let mut exec = Execution::new(json!({
        "growth": to_json(&f),
        "side_info_by_size": sides,
        "validation": verdict_json(&verdict),
    }));
    if verdict.is_valid() {
        let table = TableScheme::tabulate(&u, &subsets_upto(&pool, a.max_p))?;
        exec.artifacts.push(("transform-uniformize.scheme.json".into(), pretty(&table)));
    }
    Ok(finish_verdict(exec, &verdict))
}

fn transform_decrease(a: &DecreaseArgs) -> Result<Execution, CliError> {
    let (scheme, _) = build_scheme(&a.scheme)?;
    let (pool, sub) = (nat_pool(a.pool), nat_pool(a.subpool));
    let reduced = decrease_size(scheme, &pool, &sub, a.k)?;
    let verdict = exhaustive_validate_upto(&reduced, &sub, a.k, 1 << 24)?;
    let mut exec = Execution::new(json!({
        "fresh_point": to_json(reduced.fresh()),
        "size_bound": reduced.size_bound(),
        "max_input": reduced.max_input(),
        "validation": verdict_json(&verdict),
    }));
    if verdict.is_valid() {
        let table = TableScheme::tabulate(&reduced, &subsets_upto(&sub, a.k))?;
        exec.artifacts.push(("transform-decrease.scheme.json".into(), pretty(&table)));
    }
    Ok(finish_verdict(exec, &verdict))
}

fn instance(a: &PqrArgs) -> Result<PqrInstance, CliError> {
    Ok(PqrInstance::new(a.n, a.p, a.q, a.r, a.budget)?)
}

fn transform_perfect(a: &PqrArgs) -> Result<Execution, CliError> {
    let inst = instance(a)?;
    let outcome = search_pqr(&inst, a.cap as u128)?;
    let Some(cert) = outcome.certificate() else {
        return Ok(Execution {
            failure: Some(format!("no ({}, {}, {}) pair with budget {} on {} points", a.p, a.q, a.r, a.budget, a.n)),
            ..Execution::new(json!({ "verdict": "infeasible" }))
        });
    };
    let perfected = imperfect_to_perfect(PqrCompression::from_certificate(&inst, cert)?)?;
    let pool = nat_pool(a.n as u64);
    let verdict = moncomp_core::schemes::exhaustive_validate(&perfected, &pool, a.p, a.cap as u128)?;
    let samples: Vec<Sample> = subsets_upto(&pool, a.p).into_iter().filter(|s| s.len() == a.p).collect();
    let mut exec = Execution::new(json!({
        "verdict": "feasible",
        "certificate": to_json(cert),
        "size_bound": perfected.size_bound(),
        "validation": verdict_json(&verdict),
    }));
    if verdict.is_valid() {
        let table = TableScheme::tabulate(&perfected, &samples)?;
        exec.artifacts.push(("transform-perfect.scheme.json".into(), pretty(&table)));
    }
    Ok(finish_verdict(exec, &verdict))
}

fn transform_lift(a: &LiftArgs) -> Result<Execution, CliError> {
    let h: ConceptClass = load_json(&a.class_file)?;
    let lifted = labeled_lift(&h)?;
    let (vc, vc_lifted) = (vc_dimension(&h)?, vc_dimension(&lifted)?);
    let mut exec = Execution::new(json!({
        "concepts": h.concepts().map_or(0, |c| c.len()),
        "lifted_concepts": lifted.concepts().map_or(0, |c| c.len()),
        "vc_dimension": vc,
        "lifted_vc_dimension": vc_lifted,
    }));
    exec.artifacts.push(("transform-lift.class.json".into(), pretty(&lifted)));
    if vc != vc_lifted {
        exec.failure = Some(format!("VC dimension {vc} became {vc_lifted}"));
    }
    Ok(exec)
}

fn regret_json(r: &RegretReport) -> Value {
    let mut v = to_json(r);
    v["within_bound"] = json!(r.within_bound());
    v
}

fn learn(a: &LearnArgs, seed: u64) -> Result<Execution, CliError> {
    let (scheme, depth) = build_scheme(&a.scheme)?;
    let depth = depth.unwrap_or(0);
    let (dist, class) = (distribution(&a.dist, depth)?, class(&a.class, depth)?);
    let learner = LooLearner::new(scheme, class.clone(), a.m);
    let r = regret_experiment(&learner, &dist, &class, a.m, a.trials, seed)?;
    let mut exec = Execution::new(regret_json(&r));
    exec.csv = Some(r.to_csv());
    Ok(exec)
}

fn scaling(a: &ScalingArgs, seed: u64) -> Result<Execution, CliError> {
    let (scheme, depth) = build_scheme(&a.scheme)?;
    let depth = depth.unwrap_or(0);
    let (dist, class) = (distribution(&a.dist, depth)?, class(&a.class, depth)?);
    let mut csv = String::from("m,mean_regret,stderr,bound\n");
    let mut rows = Vec::new();
    let mut logs = Vec::new();
    for &m in &a.ms {
        let learner = LooLearner::new(scheme.clone(), class.clone(), m);
        let r = regret_experiment(&learner, &dist, &class, m, a.trials, seed)?;
        let bound = r.bound.map_or(String::new(), |b| b.to_string());
        writeln!(csv, "{m},{},{},{bound}", r.mean_regret, r.stderr).unwrap();
        if r.mean_regret > 0.0 && m > 0 {
            logs.push(((m as f64).ln(), r.mean_regret.ln()));
        }
        rows.push(regret_json(&r));
    }
    let slope = (logs.len() >= 2).then(|| {
        let n = logs.len() as f64;
        let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
        let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
        logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / logs.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>()
    });
    let mut exec = Execution::new(json!({ "runs": rows, "log_log_slope": slope }));
    exec.csv = Some(csv);
    Ok(exec)
}

fn lw_learn(a: &LwLearnArgs, seed: u64) -> Result<Execution, CliError> {
    let (scheme, depth) = build_scheme(&a.scheme)?;
    let depth = depth.unwrap_or(0);
    let k = scheme.size_bound();
    let m = match a.m {
        Some(m) => m,
        None => sample_size(k, a.epsilon, a.delta)?,
    };
    let class = class(&a.class, depth)?;
    let dists = if a.random_dists == 0 {
        vec![distribution(&a.dist, depth)?]
    } else {
        let pool = pool_points(a.pool, depth)?;
        let mut rng = trial_rng(seed, u64::MAX);
        let max = a.max_support.min(pool.len());
        (0..a.random_dists)
            .map(|_| {
                use rand::Rng;
                let size = rng.gen_range(1..=max);
                Distribution::random(&pool, size, &mut rng)
            })
            .collect::<Result<_, _>>()?
    };
    let learner = LwLearner::new(scheme, class.clone(), m);
    let mut csv = String::from("trial,regret\n");
    let mut per = Vec::new();
    let (mut exceed, mut total) = (0usize, 0usize);
    for (i, dist) in dists.iter().enumerate() {
        let r = regret_experiment(&learner, dist, &class, m, a.trials, seed.wrapping_add(i as u64))?;
        for (t, x) in r.regrets.iter().enumerate() {
            writeln!(csv, "{},{x}", i * a.trials + t).unwrap();
        }
        let over = r.regrets.iter().filter(|&&x| x > a.epsilon).count();
        exceed += over;
        total += r.trials;
        per.push(json!({
            "support_size": dist.support().len(),
            "mean_regret": r.mean_regret,
            "stderr": r.stderr,
            "exceed_frequency": over as f64 / r.trials as f64,
        }));
    }
    let freq = exceed as f64 / total as f64;
    let mut exec = Execution::new(json!({
        "k": k,
        "m": m,
        "epsilon": a.epsilon,
        "delta": a.delta,
        "distributions": per,
        "exceed_frequency": freq,
        "within_delta": freq <= a.delta,
    }));
    exec.csv = Some(csv);
    Ok(exec)
}

fn extract(a: &ExtractArgs, seed: u64) -> Result<Execution, CliError> {
    let s = extract_compression(MaxLearner::new(a.d0), ConceptClass::fin_subsets(0), a.m)?;
    let dist = Distribution::uniform_nats(a.pool)?;
    let (mut largest, mut all_covered) = (0, true);
    for i in 0..a.samples {
        let sample = dist.sample(i % (a.m + 1), &mut trial_rng(seed, i as u64));
        let (c, side) = s.compress(&sample)?;
        largest = largest.max(c.len());
        all_covered &= s.count_covered(&c, side, &sample)? == sample.len();
    }
    let trace = match &a.sample {
        Some(sample) => {
            let (c, side) = s.compress(&sample.0)?;
            let rec = s.reconstruct(&c, side)?;
            json!({
                "sample": to_json(&sample.0),
                "compression": to_json(&c),
                "reconstruction": to_json(&rec),
                "covered": sample.0.iter().all(|p| rec.contains(p)),
            })
        }
        None => Value::Null,
    };
    let mut exec = Execution::new(json!({
        "size_bound": s.size_bound(),
        "samples": a.samples,
        "largest_compression": largest,
        "all_covered": all_covered,
        "trace": trace,
    }));
    if !all_covered {
        exec.failure = Some("some sample was not covered".into());
    }
    Ok(exec)
}

fn pqr(a: &PqrArgs) -> Result<Execution, CliError> {
    let inst = instance(a)?;
    let outcome = search_pqr(&inst, a.cap as u128)?;
    let bound = (inst.r == inst.p).then(|| counting_bound(&inst)).transpose()?;
    let mut result = to_json(&outcome);
    result["instance"] = to_json(&inst);
    result["counting_bound"] = json!(bound);
    if let PqrOutcome::Feasible { certificate } = &outcome {
        debug_assert!(moncomp_core::search::verify_certificate(&inst, certificate));
    }
    Ok(Execution::new(result))
}
