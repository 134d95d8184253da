//! Algebraic invariants on randomly drawn inputs.

mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use finsylow::abelian::FiniteAbelianGroup;
use finsylow::arith::prime_divisors;
use finsylow::burnside::GSet;
use finsylow::cohomology::{coboundary, cohomologous_witness, restrict_cochain, transfer_cochain, Cochain};
use finsylow::document::Request;
use finsylow::gmodule::{primary_decompose, GModule};
use finsylow::groups::{enumerate_subgroups, FiniteGroup};
use finsylow::postnikov::PostnikovTower;
use finsylow::sylow::enumerate_sylow_maps;

use common::{brute_sylow_count, cyclic_modules, group};

const GROUPS: &[&str] = &[
    "cyclic:4",
    "cyclic:6",
    "sym:3",
    "product:[cyclic:2,cyclic:2]",
    "dihedral:4",
    "quaternion:8",
    "alternating:4",
    "dihedral:5",
];

fn module(gi: usize, q: u64, pick: usize) -> GModule {
    let g = group(GROUPS[gi % GROUPS.len()]);
    let ms = cyclic_modules(&g, q, 4);
    ms[pick % ms.len()].clone()
}

fn random_cochain(m: &GModule, degree: usize, rng: &mut ChaCha8Rng) -> Cochain {
    let e = m.group().identity();
    Cochain::from_fn(m, degree, |t| {
        if t.contains(&e) {
            m.abelian().zero_element()
        } else {
            m.abelian().factors().iter().map(|&d| rng.gen_range(0..d as i64)).collect()
        }
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coboundary_squares_to_zero(gi in 0usize..8, q in 2u64..7, pick in 0usize..4, degree in 0usize..3, seed: u64) {
        let m = module(gi, q, pick);
        let c = random_cochain(&m, degree, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(coboundary(&coboundary(&c).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn cohomologous_witness_recovers_a_coboundary(gi in 0usize..8, q in 2u64..7, pick in 0usize..4, seed: u64) {
        let m = module(gi, q, pick);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = coboundary(&random_cochain(&m, 1, &mut rng)).unwrap();
        let shifted = z.add(&coboundary(&random_cochain(&m, 1, &mut rng)).unwrap());
        let b = cohomologous_witness(&shifted, &z).unwrap().expect("differ by a coboundary");
        prop_assert_eq!(coboundary(&b).unwrap(), shifted.sub(&z));
    }

    #[test]
    fn transfer_after_restriction_is_the_index(gi in 0usize..8, q in 2u64..7, pick in 0usize..4, hi: usize, seed: u64) {
        let m = module(gi, q, pick);
        let g = m.group().clone();
        let subs = enumerate_subgroups(&g).unwrap();
        let h = &subs[hi % subs.len()];
        let z = coboundary(&random_cochain(&m, 1, &mut ChaCha8Rng::seed_from_u64(seed))).unwrap();
        let back = transfer_cochain(&restrict_cochain(&z, h).unwrap(), &m, h).unwrap();
        let index = (g.order() / h.order()) as i64;
        prop_assert!(cohomologous_witness(&back, &z.scale(index)).unwrap().is_some());
    }

    #[test]
    fn invariant_factors_and_primary_parts(orders in prop::collection::vec(2u64..13, 0..4), gi in 0usize..8) {
        let a = FiniteAbelianGroup::from_orders(&orders);
        prop_assert_eq!(a.order(), orders.iter().product::<u64>());
        prop_assert!(a.factors().windows(2).all(|w| w[1] % w[0] == 0));
        prop_assert!(a.factors().iter().all(|&d| d > 1));
        let m = GModule::trivial(group(GROUPS[gi]), a.clone());
        for p in prime_divisors(a.order().max(1)) {
            let d = primary_decompose(&m, p);
            prop_assert_eq!(d.p_part.order() * d.prime_to_p.order(), a.order());
            prop_assert!(d.prime_to_p.order() % p != 0);
            let mut pp = d.p_part.order();
            while pp % p == 0 {
                pp /= p;
            }
            prop_assert_eq!(pp, 1);
        }
    }

    #[test]
    fn orbits_partition_and_divide(n in 1usize..13, lens in prop::collection::vec(0usize..6, 1..6)) {
        // Z/n acting through one permutation whose cycle lengths divide n
        let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
        let cycles: Vec<usize> = lens.iter().map(|&i| divisors[i % divisors.len()]).collect();
        let size: usize = cycles.iter().sum();
        let mut sigma = vec![0; size];
        let mut start = 0;
        for &c in &cycles {
            for i in 0..c {
                sigma[start + i] = start + (i + 1) % c;
            }
            start += c;
        }
        let g = group(&format!("cyclic:{n}"));
        let mut action = vec![(0..size).collect::<Vec<_>>()];
        for k in 1..n {
            let prev: &Vec<usize> = &action[k - 1];
            action.push(prev.iter().map(|&x| sigma[x]).collect());
        }
        // cyclic:n labels element k as the k-th power of the generator
        let x = GSet::new(g.clone(), action).unwrap();
        let orbits = x.orbits();
        let mut seen: Vec<usize> = orbits.iter().flatten().copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..size).collect::<Vec<_>>());
        prop_assert!(orbits.iter().all(|o| n % o.len() == 0));
        let singletons: Vec<usize> = orbits.iter().filter(|o| o.len() == 1).map(|o| o[0]).collect();
        prop_assert_eq!(x.fixed_points(), singletons);
    }

    #[test]
    fn sylow_maps_match_sylow_subgroups(a in 0usize..8, b in 0usize..4) {
        let small = ["cyclic:1", "cyclic:2", "cyclic:3", "sym:3"];
        let spec = format!("product:[{},{}]", GROUPS[a], small[b]);
        let g: Arc<FiniteGroup> = group(&spec);
        if g.order() > 24 {
            return Ok(());
        }
        let t = Arc::new(PostnikovTower::make_bg(g.clone()));
        for p in prime_divisors(g.order() as u64) {
            let count = enumerate_sylow_maps(&t, p).unwrap().count();
            prop_assert_eq!(count as u64 % p, 1);
            prop_assert_eq!(count, brute_sylow_count(&g, p));
        }
    }

    #[test]
    fn requests_round_trip_through_json(
        command in prop::sample::select(finsylow::report::COMMANDS.to_vec()),
        tower in prop::option::of("[A-Za-z0-9_]{1,8}"),
        prime in prop::option::of(2u64..50),
        degree in prop::option::of(0usize..6),
    ) {
        let r = Request { command: command.into(), tower, prime, degree, ..Default::default() };
        let text = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<Request>(&text).unwrap(), r);
    }
}

#[test]
fn reports_are_stable_across_runs() {
    let doc = finsylow::document::load(std::path::Path::new(&common::example("showcase.json"))).unwrap();
    let first = finsylow::report::run_all(&doc, &doc.requests).unwrap();
    for _ in 0..3 {
        let again = finsylow::report::run_all(&doc, &doc.requests).unwrap();
        for json in [false, true] {
            assert_eq!(finsylow::report::emit(&first, json), finsylow::report::emit(&again, json));
        }
    }
}

#[test]
fn order_16_corpus_has_no_repeats() {
    let groups: Vec<_> = common::p_groups_upto_16().into_iter().filter(|(_, g)| g.order() == 16).map(|(_, g)| g).collect();
    assert_eq!(groups.len(), 14);
    for (i, a) in groups.iter().enumerate() {
        for b in &groups[i + 1..] {
            assert!(
                finsylow::groups::find_isomorphism(a, b).unwrap().is_none(),
                "{} and {} are isomorphic",
                a.name(),
                b.name()
            );
        }
    }
}
