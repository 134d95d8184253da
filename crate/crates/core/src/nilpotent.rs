//! Nilpotent towers: detection, the product decomposition into Sylow
//! towers, ample collections and algebraic `p`-completion.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::abelian::compose_maps;
use crate::arith;
use crate::error::{Error, ErrorClass, Result};
use crate::gmodule::{is_nilpotent_action, ActionFiltration};
use crate::groups::{image_subgroup, is_nilpotent_group, sylow_subgroups, NilpotencyCertificate};
use crate::linalg::Matrix;
use crate::postnikov::{product, PostnikovTower, TowerMap};
use crate::sylow::{normality_obstruction, sylow_map_defect, sylow_tower, enumerate_sylow_maps};

#[derive(Clone, Debug)]
pub struct NilpotencyReport {
    pub nilpotent: bool,
    pub group: NilpotencyCertificate,
    pub actions: Vec<(usize, ActionFiltration)>,
}

pub fn is_nilpotent_tower(t: &PostnikovTower) -> NilpotencyReport {
    let group = is_nilpotent_group(t.base());
    let actions: Vec<(usize, ActionFiltration)> =
        t.stages().iter().map(|s| (s.level, is_nilpotent_action(&s.module))).collect();
    NilpotencyReport {
        nilpotent: group.nilpotent && actions.iter().all(|(_, f)| f.nilpotent),
        group,
        actions,
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Ascending primes with the Sylow map used for each.
    pub factors: Vec<(u64, TowerMap)>,
    pub product: Arc<PostnikovTower>,
    /// `∏ 𝔓_p -> T`.
    pub equivalence: TowerMap,
}

/// Attempt `T ≃ ∏ 𝔓_p` without assuming nilpotency: one Sylow tower per
/// prime (the first in canonical order), their product, and the map that
/// multiplies the π₁ components and sums the module inclusions. `Err` with
/// the reason when that map is not an equivalence of towers.
pub fn try_product_decomposition(t: &Arc<PostnikovTower>) -> Result<std::result::Result<Decomposition, String>> {
    let g = t.base();
    let mut factors = Vec::new();
    for p in t.primes() {
        let sylow = sylow_subgroups(g, p)?.into_iter().next().expect("a Sylow subgroup exists");
        factors.push((p, sylow_tower(t, p, &sylow)?));
    }
    let Some(((_, first), rest)) = factors.split_first() else {
        let point = Arc::new(PostnikovTower::point());
        let e = TowerMap::new(point.clone(), t.clone(), vec![g.identity()], vec![], vec![])?;
        return Ok(Ok(Decomposition {
            factors,
            product: point,
            equivalence: e,
        }));
    };
    // coordinate tables from the running product to each factor, and per
    // level the projections of the product module onto each factor module
    let mut acc = (*first.source).clone();
    let mut coords: Vec<Vec<usize>> = vec![acc.base().elements().collect()];
    let mut projs: Vec<BTreeMap<usize, Matrix<i64>>> =
        vec![acc.stages().iter().map(|s| (s.level, Matrix::identity(s.module.abelian().rank()))).collect()];
    for (_, s) in rest {
        let pr = product(&acc, &s.source)?;
        for c in &mut coords {
            *c = pr.base_proj[0].iter().map(|&x| c[x]).collect();
        }
        coords.push(pr.base_proj[1].clone());
        let old = acc;
        for (i, proj) in projs.iter_mut().enumerate() {
            let mut next = BTreeMap::new();
            for (level, [p0, _]) in &pr.proj {
                let inner = proj
                    .get(level)
                    .cloned()
                    .unwrap_or_else(|| Matrix::zeros(0, old.homotopy(*level).rank()));
                let f = factors[i].1.source.homotopy(*level);
                next.insert(*level, compose_maps(&f, &inner, p0));
            }
            *proj = next;
        }
        projs.push(pr.proj.iter().map(|(l, [_, p1])| (*l, p1.clone())).collect());
        acc = pr.tower;
    }
    let names: Vec<String> = factors.iter().map(|(_, s)| s.source.name().to_string()).collect();
    let prod = Arc::new(acc.with_name(names.join(" x ")));
    let phi1: Vec<usize> = prod
        .base()
        .elements()
        .map(|x| {
            factors
                .iter()
                .zip(&coords)
                .fold(g.identity(), |y, ((_, s), c)| g.mul(y, s.phi1[c[x]]))
        })
        .collect();
    if let Err(e) = prod.base().check_homomorphism(g, &phi1) {
        return Ok(Err(format!("the Sylow subgroups do not multiply to a homomorphism: {e}")));
    }
    let mut maps = Vec::new();
    for level in prod.levels() {
        let m = t.homotopy(level);
        let mut total = Matrix::<i64>::zeros(m.rank(), prod.homotopy(level).rank());
        for ((_, s), proj) in factors.iter().zip(&projs) {
            let Some(pj) = proj.get(&level) else { continue };
            let part = compose_maps(&m, &s.matrix(level), pj);
            for i in 0..m.rank() {
                for j in 0..total.ncols() {
                    total[(i, j)] = (total[(i, j)] + part[(i, j)]).rem_euclid(m.factors()[i] as i64);
                }
            }
        }
        maps.push((level, total));
    }
    let e = match TowerMap::new(prod.clone(), t.clone(), phi1, maps, Vec::new()) {
        Ok(e) => e,
        Err(e) if e.class() == ErrorClass::UserInput => {
            return Ok(Err(format!("the product of the Sylow towers does not map to T ({} at {})", e.message(), e.location())))
        }
        Err(e) => return Err(e),
    };
    if !e.is_equivalence() {
        return Ok(Err("the product of the Sylow towers maps to T by a non-equivalence".into()));
    }
    Ok(Ok(Decomposition {
        factors,
        product: prod,
        equivalence: e,
    }))
}

/// `T ≃ ∏_p 𝔓_p` for a nilpotent tower.
pub fn decompose_nilpotent(t: &Arc<PostnikovTower>) -> Result<Decomposition> {
    let report = is_nilpotent_tower(t);
    if !report.nilpotent {
        let why = if report.group.nilpotent {
            let level = report.actions.iter().find(|(_, f)| !f.nilpotent).map_or(0, |(l, _)| *l);
            format!("π₁ does not act nilpotently on π_{level}")
        } else {
            "π₁ is not nilpotent".to_string()
        };
        return Err(Error::precondition("/tower", why, "decomposition applies to nilpotent towers only"));
    }
    try_product_decomposition(t)?.map_err(|why| Error::theory("/equivalence", why))
}

/// Whether every Sylow map for every prime passes the normality check.
pub fn all_sylow_maps_normal(t: &Arc<PostnikovTower>) -> Result<bool> {
    for p in t.primes() {
        for s in enumerate_sylow_maps(t, p)?.maps {
            if normality_obstruction(&s, p)?.obstructed() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct AmpleReport {
    pub ample: bool,
    pub reason: Option<String>,
}

/// Key identifying a Sylow map up to equivalence over the target: its
/// image on every homotopy group.
fn image_key(m: &TowerMap) -> (Vec<usize>, Vec<(usize, Vec<Vec<i64>>)>) {
    let pi1 = image_subgroup(&m.phi1).elements().to_vec();
    let levels = m
        .target
        .levels()
        .into_iter()
        .map(|l| {
            let (a, b) = (m.source.homotopy(l), m.target.homotopy(l));
            let mat = m.matrix(l);
            let mut img: Vec<Vec<i64>> = a.elements().iter().map(|x| a.apply(&b, &mat, x)).collect();
            img.sort();
            img.dedup();
            (l, img)
        })
        .collect();
    (pi1, levels)
}

/// A collection of Sylow maps is ample if no two are equivalent over `T`
/// and for each prime dividing `|π₁|` the π₁-images are exactly the Sylow
/// subgroups.
pub fn check_ample(t: &Arc<PostnikovTower>, maps: &[(u64, TowerMap)]) -> Result<AmpleReport> {
    for (i, (p, m)) in maps.iter().enumerate() {
        if *m.target != **t {
            return Err(Error::precondition(format!("/maps/{i}"), "map has a different target", "pass maps into T"));
        }
        if let Some(why) = sylow_map_defect(m, *p) {
            return Err(Error::precondition(format!("/maps/{i}"), why, "pass Sylow maps"));
        }
    }
    let keys: Vec<_> = maps.iter().map(|(_, m)| image_key(m)).collect();
    for i in 0..keys.len() {
        for j in 0..i {
            if keys[i] == keys[j] {
                return Ok(AmpleReport {
                    ample: false,
                    reason: Some(format!("maps {j} and {i} are equivalent over the target")),
                });
            }
        }
    }
    for p in arith::prime_divisors(t.base().order() as u64) {
        let want: Vec<Vec<usize>> = sylow_subgroups(t.base(), p)?.iter().map(|s| s.elements().to_vec()).collect();
        let mut have: Vec<Vec<usize>> =
            maps.iter().zip(&keys).filter(|((q, _), _)| *q == p).map(|(_, k)| k.0.clone()).collect();
        have.sort();
        let mut want_sorted = want.clone();
        want_sorted.sort();
        if have != want_sorted {
            return Ok(AmpleReport {
                ample: false,
                reason: Some(format!("the {p}-Sylow images are not exactly the Sylow {p}-subgroups")),
            });
        }
    }
    Ok(AmpleReport {
        ample: true,
        reason: None,
    })
}

#[derive(Clone, Debug)]
pub struct PCompletion {
    pub completion: Arc<PostnikovTower>,
    /// `T -> T^_p`.
    pub projection: TowerMap,
    pub sylow: TowerMap,
    /// `𝔓_p -> T -> T^_p`, an equivalence.
    pub composite: TowerMap,
}

/// The `p`-primary tower of a nilpotent tower with the projection onto it.
pub fn p_completion(t: &Arc<PostnikovTower>, p: u64) -> Result<PCompletion> {
    if !arith::is_prime(p) {
        return Err(Error::input("/prime", format!("{p} is not prime"), "pass a prime"));
    }
    if !is_nilpotent_tower(t).nilpotent {
        return Err(Error::precondition("/tower", "tower is not nilpotent", "p-completion is only defined for nilpotent towers"));
    }
    let g = t.base();
    let sylow = sylow_subgroups(g, p)?.into_iter().next().expect("a Sylow subgroup exists");
    let s = sylow_tower(t, p, &sylow)?;
    let completion = Arc::new((*s.source).clone().with_name(format!("{}^{p}", t.name())));
    let s = TowerMap {
        source: completion.clone(),
        ..s
    };
    // x -> x^u picks the p-component, with u = 1 mod p^a and 0 mod n / p^a
    let n = g.order() as u64;
    let q = arith::p_part(n, p);
    let rest = n / q;
    let u = if q == 1 {
        0
    } else {
        let inv = arith::inverse_mod((rest % q) as i64, q as i64).expect("coprime parts");
        (rest as i64 * inv).rem_euclid(n as i64) as usize
    };
    let els = sylow.elements();
    let phi1: Vec<usize> = g
        .elements()
        .map(|x| els.binary_search(&g.pow(x, u)).expect("the p-component lies in the Sylow subgroup"))
        .collect();
    let maps = t
        .stages()
        .iter()
        .map(|st| (st.level, crate::gmodule::primary_decompose(&st.module, p).proj_p))
        .collect();
    let projection = TowerMap::new(t.clone(), completion.clone(), phi1, maps, Vec::new())?;
    let composite = s.then(&projection)?;
    if !composite.is_equivalence() || !composite.validate()?.is_valid() {
        return Err(Error::theory("/composite", "the Sylow tower does not map isomorphically onto the completion"));
    }
    Ok(PCompletion {
        completion,
        projection,
        sylow: s,
        composite,
    })
}
