use std::process::ExitCode;

use parabolic_core::cones::{
    self, decompose, extremality_certificate, git_cone, git_cone_membership,
    moduli_effective_generators, surgery, Membership,
};
use parabolic_core::conformal::{
    enumerate_paths, height, rank_fusion, rank_sections, BlockSpec, CROSS_CHECK_POINT,
    DEFAULT_POINT,
};
use parabolic_core::models::{
    classify_model, theta_class, wall_walk, CrossingKind, ModelKind, Reduction, WalkEnd,
};
use parabolic_core::weights::{
    classify_linearization, picard_rank_git, stability, walls_containing, LinearizationClass,
    PointConfig, Stability,
};
use parabolic_core::{
    selftest, ConformalError, DivisorClass, DoubleSequence, Error, Limits, ParabolicWeight, Q,
};
use serde_json::{json, Map, Value};

use crate::json::{self, one_based, rational, rationals};
use crate::{BlockArgs, ClassArgs, Command, Method};

type Fields = Map<String, Value>;

fn fields(v: Value) -> Fields {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("result builders return objects"),
    }
}

fn emit(command: &str, input: Value, result: Result<Fields, Error>) -> ExitCode {
    let mut out = Fields::new();
    out.insert("schema".into(), json!(1));
    out.insert("command".into(), json!(command));
    out.insert("input".into(), input);
    let code = match result {
        Ok(body) => {
            out.extend(body);
            ExitCode::SUCCESS
        }
        Err(e) => {
            out.insert("error".into(), json::error(&e));
            ExitCode::from(1)
        }
    };
    println!("{}", Value::Object(out));
    code
}

fn usage(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn block_input(b: &BlockArgs) -> Value {
    json!({ "level": b.level, "shape": b.shape })
}

fn class_input(c: &ClassArgs) -> Value {
    json!({ "b": rationals(&c.b), "t": rational(&c.t) })
}

fn weight_of(entries: &[Q]) -> Result<ParabolicWeight, Error> {
    Ok(ParabolicWeight::new(entries.to_vec())?)
}

fn linearization_name(c: LinearizationClass) -> &'static str {
    match c {
        LinearizationClass::NotEffective => "NotEffective",
        LinearizationClass::EffectiveNotGeneral => "EffectiveNotGeneral",
        LinearizationClass::General => "General",
    }
}

fn membership_name(m: Membership) -> &'static str {
    match m {
        Membership::Interior => "Interior",
        Membership::Boundary => "Boundary",
        Membership::Outside => "Outside",
    }
}

fn rank(block: &BlockArgs, method: Method, limits: &Limits) -> Result<Fields, Error> {
    let spec = BlockSpec::new(block.level, block.shape.clone());
    match method {
        Method::Fusion => Ok(fields(
            json!({ "rank": json::big_count(rank_fusion(&spec).to_string()) }),
        )),
        Method::Paths => {
            let count = enumerate_paths(&spec, limits)?.len();
            Ok(fields(json!({ "rank": count })))
        }
        Method::Sections => {
            let n = spec.n();
            let points = [DEFAULT_POINT(n), CROSS_CHECK_POINT(n)];
            let first = rank_sections(&spec, &points[0], limits)?;
            let second = rank_sections(&spec, &points[1], limits)?;
            if first != second {
                return Err(ConformalError::NonGeneric {
                    first: first.rank,
                    second: second.rank,
                }
                .into());
            }
            Ok(fields(json!({
                "rank": first.rank,
                "points": [rationals(&points[0]), rationals(&points[1])],
            })))
        }
    }
}

fn paths(block: &BlockArgs, limits: &Limits) -> Result<Fields, Error> {
    let spec = BlockSpec::new(block.level, block.shape.clone());
    let all = enumerate_paths(&spec, limits)?;
    let list: Vec<Value> = all
        .iter()
        .map(|ds| json!({ "top": ds.top, "bottom": ds.bottom, "height": height(ds) }))
        .collect();
    Ok(fields(json!({ "count": all.len(), "paths": list })))
}

fn run_surgery(level: u32, top: &[u32], bottom: &[u32]) -> Result<Fields, Error> {
    let ds = DoubleSequence::new(top.to_vec(), bottom.to_vec(), level);
    let shape = if top.len() == bottom.len() {
        ds.shape()
    } else {
        Vec::new()
    };
    let cut = surgery(&ds, &shape)?;
    Ok(fields(json!({
        "height_in": height(&ds),
        "T": one_based(&cut.t),
        "output": json::sequence(&cut.ds_out),
        "height_out": height(&cut.ds_out),
        "shape_out": cut.ds_out.shape(),
    })))
}

fn class_of(c: &ClassArgs) -> DivisorClass {
    DivisorClass::new(c.b.clone(), c.t.clone())
}

fn run_decompose(c: &ClassArgs) -> Result<Fields, Error> {
    let d = class_of(c);
    let dec = decompose(&d)?;
    let terms: Vec<Value> = dec
        .terms
        .iter()
        .map(|(subset, count)| {
            if subset.is_empty() {
                json!({ "generator": "E", "count": count })
            } else {
                json!({ "generator": "G", "I": one_based(subset), "count": count })
            }
        })
        .collect();
    Ok(fields(
        json!({ "terms": terms, "reconstructed": json::class(&dec.reconstruct(d.n())) }),
    ))
}

fn generator_json(g: &DivisorClass) -> Value {
    match g.generator_subset() {
        Some(s) if s.is_empty() => json!({ "generator": "E", "class": json::class(g) }),
        Some(s) => json!({ "generator": "G", "I": one_based(&s), "class": json::class(g) }),
        None => json!({ "class": json::class(g) }),
    }
}

fn generators(n: usize, limits: &Limits) -> Result<Fields, Error> {
    let gens = moduli_effective_generators(n, limits)?;
    let list: Vec<Value> = gens.iter().map(generator_json).collect();
    Ok(fields(json!({ "count": gens.len(), "generators": list })))
}

fn certify(n: usize, subset: Option<&[u32]>, limits: &Limits) -> Result<Fields, Error> {
    let g = match subset {
        None => DivisorClass::exceptional(n),
        Some(s) => {
            let zero_based: Vec<usize> = s
                .iter()
                .map(|&i| (i as usize).checked_sub(1).filter(|&i| i < n))
                .collect::<Option<_>>()
                .ok_or(cones::ConesError::NotAGenerator)?;
            DivisorClass::generator(n, &zero_based)?
        }
    };
    let cert = extremality_certificate(&g, n, limits)?;
    let functionals: Vec<Value> = cert.functionals.iter().map(|f| rationals(f)).collect();
    Ok(fields(json!({
        "generator": generator_json(&g),
        "functionals": functionals,
        "separation": rationals(&cert.separation),
        "extremal": true,
    })))
}

fn parse_blocks(s: &str, n: usize) -> Option<Vec<Vec<usize>>> {
    s.split(';')
        .map(|block| {
            block
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .ok()
                        .and_then(|i| i.checked_sub(1))
                        .filter(|&i| i < n)
                })
                .collect::<Option<Vec<usize>>>()
        })
        .collect()
}

fn run_stability(entries: &[Q], blocks: Option<&Vec<Vec<usize>>>) -> Result<Fields, Error> {
    let w = weight_of(entries)?;
    let config = match blocks {
        Some(b) => PointConfig::new(w.n(), b.clone())?,
        None => PointConfig::distinct(w.n()),
    };
    let s = match stability(&config, &w)? {
        Stability::Stable => "Stable",
        Stability::StrictlySemistable => "StrictlySemistable",
        Stability::Unstable => "Unstable",
    };
    Ok(fields(json!({ "stability": s })))
}

fn classify_weight(entries: &[Q], limits: &Limits) -> Result<Fields, Error> {
    let w = weight_of(entries)?;
    let info = classify_linearization(&w, limits)?;
    let picard = picard_rank_git(&w, limits).ok().map(|p| {
        let pairs: Vec<Value> = p
            .unstable_pairs
            .iter()
            .map(|&(i, j)| json!([i + 1, j + 1]))
            .collect();
        json!({ "rank": p.rank, "unstable_pairs": pairs })
    });
    Ok(fields(json!({
        "sum": rational(&w.sum()),
        "linearization": linearization_name(info.class),
        "maximal_stable_locus": info.maximal_stable_locus,
        "off_all_walls": w.is_general(limits)?,
        "picard": picard,
    })))
}

fn walls(entries: &[Q], limits: &Limits) -> Result<Fields, Error> {
    let w = weight_of(entries)?;
    let list: Vec<Value> = walls_containing(&w, limits)?
        .iter()
        .map(json::wall)
        .collect();
    Ok(fields(json!({ "count": list.len(), "walls": list })))
}

fn walk(entries: &[Q], limits: &Limits) -> Result<Fields, Error> {
    let w = weight_of(entries)?;
    let walk = wall_walk(&w, limits)?;
    let events: Vec<Value> = walk
        .events
        .iter()
        .map(|e| {
            let kind = match e.kind {
                CrossingKind::BlowUp => "BlowUp",
                CrossingKind::Flip => "Flip",
                CrossingKind::BlowDown => "BlowDown",
            };
            json!({
                "c": rational(&e.c),
                "wall": json::wall(&e.wall),
                "dim_minus": e.dim_minus,
                "dim_plus": e.dim_plus,
                "kind": kind,
            })
        })
        .collect();
    let end = match &walk.end {
        WalkEnd::WeightBoundary { c } => json!({ "kind": "WeightBoundary", "c": rational(c) }),
        WalkEnd::EmptyModuli { c, wall } => {
            json!({ "kind": "EmptyModuli", "c": rational(c), "wall": json::wall(wall) })
        }
    };
    Ok(fields(json!({ "events": events, "end": end })))
}

fn theta(entries: &[Q]) -> Result<Fields, Error> {
    let w = weight_of(entries)?;
    let th = theta_class(&w);
    Ok(fields(json!({
        "k": json::big_count(th.k.to_string()),
        "class": json::class(&th.class),
        "e": rational(&th.e),
    })))
}

fn run_classify_model(c: &ClassArgs, limits: &Limits) -> Result<Fields, Error> {
    let m = classify_model(&class_of(c), limits)?;
    let kind = match m.kind {
        ModelKind::ParabolicModuli => "ParabolicModuli",
        ModelKind::GitQuotient => "GitQuotient",
        ModelKind::BoundaryReduction => "BoundaryReduction",
    };
    let reductions: Vec<Value> = m
        .reductions
        .iter()
        .map(|r| match r {
            Reduction::Vacua(p) => json!({ "kind": "Vacua", "points": one_based(p) }),
            Reduction::Saturation(p) => json!({ "kind": "Saturation", "points": one_based(p) }),
        })
        .collect();
    Ok(fields(json!({
        "kind": kind,
        "points": one_based(&m.points),
        "weight": rationals(&m.weight),
        "linearization": m.linearization.as_deref().map(rationals),
        "dropped_points": one_based(&m.dropped_points),
        "degree_shift": m.degree_shift,
        "reductions": reductions,
        "reduction_order": ["Vacua", "Saturation"],
    })))
}

fn run_git_cone(n: usize, b: Option<&[Q]>, limits: &Limits) -> Result<Fields, Error> {
    if n > limits.max_n {
        return Err(cones::ConesError::TooManyPoints {
            n,
            bound: limits.max_n,
        }
        .into());
    }
    let cone = git_cone(n);
    let facets = cone.facets()?;
    let mut out = fields(json!({
        "generators": cone.generators().len(),
        "facets": facets.iter().map(|f| rationals(f)).collect::<Vec<_>>(),
        "facet_count": facets.len(),
    }));
    if let Some(b) = b {
        if b.len() != n {
            return Err(cones::ConesError::DimensionMismatch {
                expected: n,
                got: b.len(),
            }
            .into());
        }
        out.insert(
            "membership".into(),
            json!(membership_name(git_cone_membership(b))),
        );
    }
    Ok(out)
}

fn run_selftest(limits: &Limits) -> ExitCode {
    let report = selftest::run(limits);
    print!("{}", report.table());
    if report.passed() {
        println!("all suites passed");
        ExitCode::SUCCESS
    } else {
        println!("some suites FAILED");
        ExitCode::from(1)
    }
}

pub fn run(command: &Command, limits: &Limits) -> ExitCode {
    match command {
        Command::Rank { block, method } => {
            let mut input = block_input(block);
            input["method"] = json!(format!("{method:?}").to_lowercase());
            emit("rank", input, rank(block, *method, limits))
        }
        Command::Paths { block } => emit("paths", block_input(block), paths(block, limits)),
        Command::Surgery { level, top, bottom } => emit(
            "surgery",
            json!({ "level": level, "top": top, "bottom": bottom }),
            run_surgery(*level, top, bottom),
        ),
        Command::Decompose { class } => emit("decompose", class_input(class), run_decompose(class)),
        Command::Generators { n } => emit("generators", json!({ "n": n }), generators(*n, limits)),
        Command::Certify { n, subset } => emit(
            "certify",
            json!({ "n": n, "subset": subset }),
            certify(*n, subset.as_deref(), limits),
        ),
        Command::Stability { weight, blocks } => {
            let n = weight.weight.len();
            let parsed = match blocks.as_deref().map(|s| parse_blocks(s, n)) {
                Some(None) => {
                    return usage("--blocks must be ';'-separated lists of indices in 1..=n")
                }
                Some(Some(b)) => Some(b),
                None => None,
            };
            let blocks_json = parsed
                .as_ref()
                .map(|b| b.iter().map(|x| one_based(x)).collect::<Vec<_>>());
            emit(
                "stability",
                json!({ "weight": rationals(&weight.weight), "blocks": blocks_json }),
                run_stability(&weight.weight, parsed.as_ref()),
            )
        }
        Command::ClassifyWeight { weight } => emit(
            "classify-weight",
            json!({ "weight": rationals(&weight.weight) }),
            classify_weight(&weight.weight, limits),
        ),
        Command::Walls { weight } => emit(
            "walls",
            json!({ "weight": rationals(&weight.weight) }),
            walls(&weight.weight, limits),
        ),
        Command::Walk { weight } => emit(
            "walk",
            json!({ "weight": rationals(&weight.weight) }),
            walk(&weight.weight, limits),
        ),
        Command::Theta { weight } => emit(
            "theta",
            json!({ "weight": rationals(&weight.weight) }),
            theta(&weight.weight),
        ),
        Command::ClassifyModel { class } => emit(
            "classify-model",
            class_input(class),
            run_classify_model(class, limits),
        ),
        Command::GitCone { n, b } => emit(
            "git-cone",
            json!({ "n": n, "b": b.as_deref().map(rationals) }),
            run_git_cone(*n, b.as_deref(), limits),
        ),
        Command::Selftest => run_selftest(limits),
    }
}
