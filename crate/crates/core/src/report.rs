//! Runs analysis requests against a loaded document and renders the
//! results as text or JSON. Output depends only on the document and the
//! request, never on scheduling.

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::abelian::FiniteAbelianGroup;
use crate::arith;
use crate::burnside::{finite_gset_fixed_points, homotopy_fixed_point_section};
use crate::cohomology::{cohomology_group, coboundary, restrict_cochain, transfer_cochain, Cochain};
use crate::document::{Request, TowerDocument};
use crate::error::{Error, Result};
use crate::gmodule::GModule;
use crate::groups::{enumerate_subgroups, image_subgroup, parse_builtin, sylow_subgroups, FiniteGroup};
use crate::nilpotent::{is_nilpotent_tower, p_completion, try_product_decomposition};
use crate::postnikov::{PostnikovTower, TowerMap};
use crate::sylow::{
    are_conjugate_sylow_maps, enumerate_sylow_maps, factor_through_sylow, normality_obstruction, sylow_map_defect,
    sylow_tower, QuotientOutcome,
};

pub const COMMANDS: &[&str] = &[
    "sylow",
    "sylow-count",
    "factor",
    "conjugate",
    "normality",
    "nilpotent-check",
    "decompose",
    "p-complete",
    "burnside",
    "cohomology",
    "selftest",
];

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub request: Request,
    /// Human-readable lines.
    pub lines: Vec<String>,
    pub data: Value,
}

fn need_prime(r: &Request) -> Result<u64> {
    let p = r.prime.ok_or_else(|| Error::input("/prime", format!("{} needs a prime", r.command), "pass --prime p"))?;
    if !arith::is_prime(p) {
        return Err(Error::input("/prime", format!("{p} is not prime"), "pass a prime"));
    }
    Ok(p)
}

fn tower_json(t: &PostnikovTower) -> Value {
    let stages: Vec<Value> = t
        .stages()
        .iter()
        .map(|s| {
            json!({
                "level": s.level,
                "factors": s.module.abelian().factors(),
                "trivial_action": s.module.is_trivial_action(),
                "k_zero": s.k.is_zero(),
            })
        })
        .collect();
    json!({
        "name": t.name(),
        "pi1": {"name": t.base().name(), "order": t.base().order()},
        "stages": stages,
    })
}

fn tower_line(t: &PostnikovTower) -> String {
    let mut s = format!("π₁ = {} (order {})", t.base().name(), t.base().order());
    for st in t.stages() {
        s.push_str(&format!(", π_{} = {}", st.level, st.module.abelian()));
    }
    s
}

fn map_json(m: &TowerMap) -> Value {
    let levels: Vec<Value> = m
        .levels
        .iter()
        .map(|l| {
            json!({
                "level": l.level,
                "matrix": l.matrix.to_i64_rows(),
                "witness_zero": l.witness.as_ref().is_none_or(Cochain::is_zero),
            })
        })
        .collect();
    json!({
        "source": m.source.name(),
        "target": m.target.name(),
        "phi1": m.phi1,
        "levels": levels,
    })
}

fn elements_of(m: &TowerMap) -> Vec<usize> {
    image_subgroup(&m.phi1).elements().to_vec()
}

pub fn run(doc: &TowerDocument, r: &Request) -> Result<Report> {
    doc.check_request(r)?;
    let (lines, data) = match r.command.as_str() {
        "sylow" => sylow(doc, r)?,
        "sylow-count" => sylow_count(doc, r)?,
        "factor" => factor(doc, r)?,
        "conjugate" => conjugate(doc, r)?,
        "normality" => normality(doc, r)?,
        "nilpotent-check" => nilpotent_check(doc, r)?,
        "decompose" => decompose(doc, r)?,
        "p-complete" => p_complete(doc, r)?,
        "burnside" => burnside(doc, r)?,
        "cohomology" => cohomology(doc, r)?,
        "selftest" => selftest()?,
        other => {
            return Err(Error::input(
                "/command",
                format!("unknown command '{other}'"),
                format!("one of {}", COMMANDS.join(", ")),
            ))
        }
    };
    Ok(Report {
        request: r.clone(),
        lines,
        data,
    })
}

/// Runs requests in parallel; results keep request order and the first
/// failing request in that order is reported.
pub fn run_all(doc: &TowerDocument, requests: &[Request]) -> Result<Vec<Report>> {
    let results: Vec<Result<Report>> = requests.par_iter().map(|r| run(doc, r)).collect();
    results
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| e.within(&format!("/requests/{i}"))))
        .collect()
}

pub fn emit(reports: &[Report], as_json: bool) -> String {
    if as_json {
        let items: Vec<Value> = reports
            .iter()
            .map(|r| json!({"request": r.request, "result": r.data}))
            .collect();
        let v = if items.len() == 1 { items[0].clone() } else { Value::Array(items) };
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        return s;
    }
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        if reports.len() > 1 {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("# {}\n", r.request.command));
        }
        for l in &r.lines {
            out.push_str(l);
            out.push('\n');
        }
    }
    out
}

type Outcome = Result<(Vec<String>, Value)>;

fn sylow(doc: &TowerDocument, r: &Request) -> Outcome {
    let p = need_prime(r)?;
    let t = doc.tower(r.tower.as_deref())?;
    let sub = sylow_subgroups(t.base(), p)?.into_iter().next().expect("a Sylow subgroup exists");
    let m = sylow_tower(t, p, &sub)?;
    let defect = sylow_map_defect(&m, p);
    let lines = vec![
        format!("{p}-Sylow map into {}", t.name()),
        format!("source: {}", tower_line(&m.source)),
        format!("π₁ image: {:?}", sub.elements()),
        format!("sylow: {}", defect.as_deref().unwrap_or("yes")),
    ];
    let data = json!({
        "tower": t.name(),
        "prime": p,
        "subgroup": sub.elements(),
        "source": tower_json(&m.source),
        "map": map_json(&m),
        "is_sylow": defect.is_none(),
    });
    Ok((lines, data))
}

fn sylow_count(doc: &TowerDocument, r: &Request) -> Outcome {
    let p = need_prime(r)?;
    let t = doc.tower(r.tower.as_deref())?;
    let set = enumerate_sylow_maps(t, p)?;
    let n = set.count();
    let lines = vec![format!("count: {n}")];
    let data = json!({
        "tower": t.name(),
        "prime": p,
        "count": n,
        "congruent": n as u64 % p == 1,
        "subgroups": set.subgroups.iter().map(|s| s.elements().to_vec()).collect::<Vec<_>>(),
    });
    Ok((lines, data))
}

fn factor(doc: &TowerDocument, r: &Request) -> Outcome {
    let p = need_prime(r)?;
    let f = doc.map(r.map.as_deref())?;
    let fac = factor_through_sylow(f, p)?;
    let valid = fac.composite.validate()?.is_valid();
    let homotopies: Vec<Value> = fac
        .homotopies
        .iter()
        .map(|(l, b)| json!({"level": l, "zero": b.is_zero()}))
        .collect();
    let lines = vec![
        format!("{} factors through the {p}-Sylow map onto {:?}", f.source.name(), elements_of(&fac.sylow)),
        format!("lift φ₁: {:?}", fac.lift.phi1),
        format!("composite matches with {} level homotopies", fac.homotopies.len()),
    ];
    let data = json!({
        "prime": p,
        "sylow_subgroup": elements_of(&fac.sylow),
        "lift": map_json(&fac.lift),
        "homotopies": homotopies,
        "composite_valid": valid,
    });
    Ok((lines, data))
}

fn conjugate(doc: &TowerDocument, r: &Request) -> Outcome {
    let p = need_prime(r)?;
    let t = doc.tower(r.tower.as_deref())?;
    let set = enumerate_sylow_maps(t, p)?;
    let mut pairs = Vec::new();
    let mut lines = vec![format!("{} {p}-Sylow maps", set.count())];
    for (i, m) in set.maps.iter().enumerate().skip(1) {
        let w = are_conjugate_sylow_maps(&set.maps[0], m, p)?
            .ok_or_else(|| Error::theory(format!("/sylow/{i}"), "two Sylow maps are not conjugate"))?;
        lines.push(format!("map {i} = conjugation by {} of map 0", t.base().label(w.element)));
        pairs.push(json!({"index": i, "element": w.element, "homotopies": w.homotopies.len()}));
    }
    let data = json!({"tower": t.name(), "prime": p, "count": set.count(), "conjugations": pairs});
    Ok((lines, data))
}

fn normality(doc: &TowerDocument, r: &Request) -> Outcome {
    let p = need_prime(r)?;
    let t = doc.tower(r.tower.as_deref())?;
    let set = enumerate_sylow_maps(t, p)?;
    let rep = normality_obstruction(&set.maps[0], p)?;
    let mut lines = vec![format!(
        "π₁: {}",
        match rep.pi1_witness {
            None => "image is normal".to_string(),
            Some((g, x)) => format!("not normal, {} conjugates {} out of the image", t.base().label(g), t.base().label(x)),
        }
    )];
    let mut levels = Vec::new();
    for l in &rep.levels {
        match &l.witness {
            None => lines.push(format!("level {}: trivial action on the prime-to-{p} part", l.level)),
            Some((g, a)) => lines.push(format!(
                "level {}: obstruction, {} acts nontrivially on {a:?} in the prime-to-{p} part",
                l.level,
                t.base().label(*g)
            )),
        }
        levels.push(json!({
            "level": l.level,
            "trivial_action": l.trivial_action,
            "witness": l.witness.as_ref().map(|(g, a)| json!({"element": g, "vector": a})),
        }));
    }
    let quotient = match &rep.quotient {
        QuotientOutcome::Obstructed => json!("obstructed"),
        QuotientOutcome::Undecided => json!("undecided"),
        QuotientOutcome::Constructed { tower, exact, .. } => {
            lines.push(format!("quotient: {}", tower_line(tower)));
            json!({"tower": tower_json(tower), "exact": exact})
        }
    };
    lines.push(format!("normal: {}", if rep.obstructed() { "no" } else { "not obstructed" }));
    let data = json!({
        "tower": t.name(),
        "prime": p,
        "pi1_normal": rep.pi1_normal,
        "pi1_witness": rep.pi1_witness,
        "levels": levels,
        "obstructed": rep.obstructed(),
        "quotient": quotient,
    });
    Ok((lines, data))
}

fn nilpotent_check(doc: &TowerDocument, r: &Request) -> Outcome {
    let t = doc.tower(r.tower.as_deref())?;
    let rep = is_nilpotent_tower(t);
    let series: Vec<usize> = rep.group.series.iter().map(|s| s.order()).collect();
    let mut lines = vec![
        format!("nilpotent: {}", rep.nilpotent),
        format!("π₁ lower central series orders: {series:?}"),
    ];
    let mut actions = Vec::new();
    for (level, f) in &rep.actions {
        let orders: Vec<u64> = f.chain.iter().map(|s| s.order).collect();
        lines.push(format!("level {level}: augmentation filtration orders {orders:?}"));
        actions.push(json!({"level": level, "nilpotent": f.nilpotent, "filtration": orders}));
    }
    let data = json!({
        "tower": t.name(),
        "nilpotent": rep.nilpotent,
        "pi1_nilpotent": rep.group.nilpotent,
        "lower_central_series": series,
        "actions": actions,
    });
    Ok((lines, data))
}

fn decompose(doc: &TowerDocument, r: &Request) -> Outcome {
    let t = doc.tower(r.tower.as_deref())?;
    let d = try_product_decomposition(t)?.map_err(|reason| {
        Error::precondition(
            format!("/towers/{}", crate::document::pointer_segment(t.name())),
            format!("no product decomposition: {reason}"),
            "only nilpotent towers split as products of their Sylow towers",
        )
    })?;
    let mut lines = vec![format!("{} factors", d.factors.len())];
    let mut factors = Vec::new();
    for (p, m) in &d.factors {
        lines.push(format!("p = {p}: {}", tower_line(&m.source)));
        factors.push(json!({"prime": p, "tower": tower_json(&m.source)}));
    }
    lines.push(format!("equivalence verified: {}", d.equivalence.is_equivalence()));
    let data = json!({
        "tower": t.name(),
        "factors": factors,
        "equivalence": d.equivalence.is_equivalence(),
    });
    Ok((lines, data))
}

fn p_complete(doc: &TowerDocument, r: &Request) -> Outcome {
    let p = need_prime(r)?;
    let t = doc.tower(r.tower.as_deref())?;
    let c = p_completion(t, p)?;
    let lines = vec![
        format!("{p}-completion: {}", tower_line(&c.completion)),
        format!("projection φ₁: {:?}", c.projection.phi1),
    ];
    let data = json!({
        "tower": t.name(),
        "prime": p,
        "completion": tower_json(&c.completion),
        "projection": map_json(&c.projection),
        "sylow_composite_equivalence": c.composite.is_equivalence(),
    });
    Ok((lines, data))
}

fn burnside(doc: &TowerDocument, r: &Request) -> Outcome {
    let p = need_prime(r)?;
    if r.gset.is_some() || (r.map.is_none() && doc.maps.is_empty()) {
        let x = doc.gset(r.gset.as_deref())?;
        let rep = finite_gset_fixed_points(x, p)?;
        let lines = vec![
            format!("|X| = {}, {} fixed points", rep.size, rep.fixed.len()),
            format!("fixed: {:?}", rep.fixed),
        ];
        let data = json!({"prime": p, "size": rep.size, "fixed": rep.fixed, "congruent": rep.congruent});
        return Ok((lines, data));
    }
    let gamma = doc.map(r.map.as_deref())?;
    let s = homotopy_fixed_point_section(gamma, p)?;
    let f = &s.fibration;
    let mut levels = vec![json!({"level": 1, "kernel": f.kernel_order(1), "cokernel": f.cokernel_order(1)})];
    levels.extend(
        f.levels
            .iter()
            .map(|l| json!({"level": l.level, "kernel": l.kernel.order(), "cokernel": l.cokernel.order()})),
    );
    let lines = vec![
        format!("section of {} -> {}", gamma.source.name(), gamma.target.name()),
        format!("s φ₁: {:?}", s.section.phi1),
        format!("γ ∘ s is an equivalence: {}", s.composite.is_equivalence()),
    ];
    let data = json!({
        "prime": p,
        "levels": levels,
        "section": map_json(&s.section),
        "composite_equivalence": s.composite.is_equivalence(),
    });
    Ok((lines, data))
}

/// A document module, or a comma-separated list of factor orders for the
/// trivial module.
fn resolve_module(doc: &TowerDocument, group: &Arc<FiniteGroup>, spec: &str) -> Result<GModule> {
    if let Some(m) = doc.modules.get(spec) {
        if **m.group() != **group {
            return Err(Error::input("/module", format!("module '{spec}' is over {}", m.group().name()), "pass the module's group"));
        }
        return Ok(m.clone());
    }
    let factors = spec
        .split(',')
        .map(|s| s.trim().parse::<u64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| {
            Error::input("/module", format!("'{spec}' is neither a document module nor a factor list"), "e.g. --module 2,4")
        })?;
    let a = FiniteAbelianGroup::new(factors).map_err(|e| e.within("/module"))?;
    Ok(GModule::trivial(group.clone(), a))
}

fn cohomology(doc: &TowerDocument, r: &Request) -> Outcome {
    let degree = r.degree.ok_or_else(|| Error::input("/degree", "cohomology needs a degree", "pass --degree n"))?;
    let mspec = r.module.as_deref().ok_or_else(|| Error::input("/module", "cohomology needs a module", "pass --module"))?;
    let group = match (&r.group, doc.modules.get(mspec)) {
        (Some(g), _) => doc.group(g)?,
        (None, Some(m)) => m.group().clone(),
        (None, None) => return Err(Error::input("/group", "no group given", "pass --group")),
    };
    let m = resolve_module(doc, &group, mspec)?;
    let h = cohomology_group(&m, degree)?;
    let lines = vec![format!("H^{degree}({}; {}) = {}", group.name(), m.abelian(), h.abelian())];
    let data = json!({
        "group": group.name(),
        "module": m.abelian().factors(),
        "degree": degree,
        "invariants": h.abelian().factors(),
        "order": h.abelian().order(),
    });
    Ok((lines, data))
}

/// Small deterministic versions of the invariant suites.
fn selftest() -> Outcome {
    let mut checks: Vec<(String, usize, usize)> = Vec::new();
    let specs = ["cyclic:4", "cyclic:6", "sym:3", "dihedral:4", "quaternion:8", "alternating:4"];
    let groups: Vec<Arc<FiniteGroup>> = specs.iter().map(|s| Arc::new(parse_builtin(s).expect("builtin"))).collect();

    let mut ok = 0;
    let mut total = 0;
    for g in &groups {
        for a in [FiniteAbelianGroup::cyclic(2), FiniteAbelianGroup::cyclic(3)] {
            let m = GModule::trivial(g.clone(), a);
            for n in 1..=2 {
                let c = Cochain::from_fn(&m, n, |t| vec![t.iter().enumerate().map(|(i, &x)| (i as i64 + 1) * x as i64).sum()])?;
                total += 1;
                ok += usize::from(coboundary(&coboundary(&c)?)?.is_zero());
            }
        }
    }
    checks.push(("coboundary squares to zero".into(), ok, total));

    let (mut ok, mut total) = (0, 0);
    for g in &groups {
        for p in arith::prime_divisors(g.order() as u64) {
            let t = Arc::new(PostnikovTower::make_bg(g.clone()));
            let count = enumerate_sylow_maps(&t, p)?.count();
            let subgroups = enumerate_subgroups(g)?;
            let pa = arith::p_part(g.order() as u64, p) as usize;
            let oracle = subgroups.iter().filter(|s| s.order() == pa).count();
            total += 1;
            ok += usize::from(count == oracle && count as u64 % p == 1);
        }
    }
    checks.push(("Sylow count congruence".into(), ok, total));

    let (mut ok, mut total) = (0, 0);
    for g in &groups[..4] {
        let m = GModule::trivial(g.clone(), FiniteAbelianGroup::cyclic(6));
        let z = cohomology_group(&m, 2)?;
        for h in enumerate_subgroups(g)? {
            let index = (g.order() / h.order()) as i64;
            for b in z.basis() {
                let back = transfer_cochain(&restrict_cochain(b, &h)?, &m, &h)?;
                total += 1;
                ok += usize::from(z.coordinates(&back)? == z.coordinates(&b.scale(index))?);
            }
        }
    }
    checks.push(("transfer after restriction is the index".into(), ok, total));

    let mut lines = Vec::new();
    let mut items = Vec::new();
    let mut failed = false;
    for (name, ok, total) in &checks {
        lines.push(format!("{}: {ok}/{total}", name));
        failed |= ok != total;
        items.push(json!({"check": name, "passed": ok, "total": total}));
    }
    if failed {
        return Err(Error::theory("/selftest", lines.join("; ")));
    }
    Ok((lines, json!({"checks": items})))
}
