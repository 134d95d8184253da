//! Corpora and independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use finsylow::abelian::FiniteAbelianGroup;
use finsylow::cohomology::{cohomology_group, Cochain};
use finsylow::gmodule::GModule;
use finsylow::groups::{parse_builtin, FiniteGroup};
use finsylow::linalg::Matrix;
use finsylow::postnikov::{PostnikovTower, Stage};

pub fn group(spec: &str) -> Arc<FiniteGroup> {
    Arc::new(parse_builtin(spec).unwrap_or_else(|e| panic!("{spec}: {e}")))
}

pub fn table_group(name: &str, n: usize, mul: impl Fn(usize, usize) -> usize) -> Arc<FiniteGroup> {
    let table = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
    Arc::new(FiniteGroup::from_table(name, table).unwrap())
}

/// The three groups of order 16 without a builtin name: `Z/4 ⋊ Z/4`,
/// `(Z/2)² ⋊ Z/4` and the Pauli group.
pub fn extra_order_16() -> Vec<Arc<FiniteGroup>> {
    // (i, j) -> 4 i + j; b a b⁻¹ = a⁻¹
    let z4z4 = table_group("Z4:Z4", 16, |x, y| {
        let (i1, j1, i2, j2) = (x / 4, x % 4, y / 4, y % 4);
        let i = if j1 % 2 == 0 { i1 + i2 } else { i1 + 4 - i2 } % 4;
        4 * i + (j1 + j2) % 4
    });
    // (v, j) with v in (Z/2)², the generator of Z/4 swapping coordinates
    let swap = |v: usize, j: usize| if j % 2 == 1 { ((v & 1) << 1) | (v >> 1) } else { v };
    let v4z4 = table_group("V4:Z4", 16, |x, y| {
        let (v1, j1, v2, j2) = (x / 4, x % 4, y / 4, y % 4);
        4 * (v1 ^ swap(v2, j1)) + (j1 + j2) % 4
    });
    // i^k X^a Z^b with Z X = -X Z
    let pauli = table_group("Pauli", 16, |x, y| {
        let (k1, a1, b1) = (x / 4, (x / 2) % 2, x % 2);
        let (k2, a2, b2) = (y / 4, (y / 2) % 2, y % 2);
        let k = (k1 + k2 + 2 * b1 * a2) % 4;
        4 * k + 2 * ((a1 + a2) % 2) + (b1 + b2) % 2
    });
    vec![z4z4, v4z4, pauli]
}

/// Every group of prime-power order at most 16, up to isomorphism.
pub fn p_groups_upto_16() -> Vec<(u64, Arc<FiniteGroup>)> {
    let mut out: Vec<(u64, Arc<FiniteGroup>)> = Vec::new();
    for (p, specs) in [
        (2, vec!["cyclic:2", "cyclic:4", "product:[cyclic:2,cyclic:2]"]),
        (3, vec!["cyclic:3", "cyclic:9", "product:[cyclic:3,cyclic:3]"]),
        (5, vec!["cyclic:5"]),
        (7, vec!["cyclic:7"]),
        (11, vec!["cyclic:11"]),
        (13, vec!["cyclic:13"]),
        (
            2,
            vec![
                "cyclic:8",
                "product:[cyclic:4,cyclic:2]",
                "product:[cyclic:2,cyclic:2,cyclic:2]",
                "dihedral:4",
                "quaternion:8",
            ],
        ),
        (
            2,
            vec![
                "cyclic:16",
                "product:[cyclic:4,cyclic:4]",
                "product:[cyclic:8,cyclic:2]",
                "product:[cyclic:4,cyclic:2,cyclic:2]",
                "product:[cyclic:2,cyclic:2,cyclic:2,cyclic:2]",
                "dihedral:8",
                "quaternion:16",
                "semidihedral:16",
                "modular:16",
                "product:[dihedral:4,cyclic:2]",
                "product:[quaternion:8,cyclic:2]",
            ],
        ),
    ] {
        out.extend(specs.into_iter().map(|s| (p, group(s))));
    }
    out.extend(extra_order_16().into_iter().map(|g| (2, g)));
    out
}

pub fn mat(rows: &[Vec<i64>]) -> Matrix<i64> {
    Matrix::from_i64_rows(rows)
}

/// Modules on `A` obtained by sending each generator of `g` to one of the
/// candidate automorphisms, keeping those that define an action. Distinct
/// action tables only, at most `limit`, trivial action first.
pub fn actions(g: &Arc<FiniteGroup>, a: &FiniteAbelianGroup, candidates: &[Matrix<i64>], limit: usize) -> Vec<GModule> {
    let gens = g.generators();
    let mut out: Vec<GModule> = vec![GModule::trivial(g.clone(), a.clone())];
    if gens.is_empty() {
        return out;
    }
    let mut choice = vec![0usize; gens.len()];
    'outer: loop {
        let images: Vec<Matrix<i64>> = choice.iter().map(|&c| candidates[c].clone()).collect();
        if let Ok(m) = GModule::from_generators(g.clone(), a.clone(), &gens, &images) {
            if !out.contains(&m) {
                out.push(m);
                if out.len() >= limit {
                    break;
                }
            }
        }
        for c in choice.iter_mut() {
            *c += 1;
            if *c < candidates.len() {
                continue 'outer;
            }
            *c = 0;
        }
        break;
    }
    out
}

/// Units of `Z/q` as 1x1 matrices.
pub fn unit_candidates(q: u64) -> Vec<Matrix<i64>> {
    (1..q as i64)
        .filter(|&u| num_integer::Integer::gcd(&u, &(q as i64)) == 1)
        .map(|u| mat(&[vec![u]]))
        .collect()
}

pub fn cyclic_modules(g: &Arc<FiniteGroup>, q: u64, limit: usize) -> Vec<GModule> {
    actions(g, &FiniteAbelianGroup::cyclic(q), &unit_candidates(q), limit)
}

/// First nonzero class of `H^(level+1)(G; M)`, if any.
pub fn nonzero_k(m: &GModule, level: usize) -> Option<Cochain> {
    let h = cohomology_group(m, level + 1).unwrap();
    h.basis().first().cloned()
}

fn tower(name: String, g: &Arc<FiniteGroup>, stages: Vec<(usize, GModule, Option<Cochain>)>) -> Arc<PostnikovTower> {
    let stages = stages
        .into_iter()
        .map(|(level, module, k)| {
            let k = k.unwrap_or_else(|| Cochain::zero(&module, level + 1).unwrap());
            Stage { level, module, k }
        })
        .collect();
    Arc::new(PostnikovTower::new(name, g.clone(), stages).unwrap())
}

pub const CORPUS_GROUPS: &[&str] = &[
    "trivial",
    "cyclic:2",
    "cyclic:3",
    "cyclic:4",
    "cyclic:5",
    "cyclic:6",
    "cyclic:7",
    "cyclic:8",
    "cyclic:9",
    "cyclic:10",
    "cyclic:12",
    "cyclic:15",
    "cyclic:24",
    "sym:3",
    "sym:4",
    "dihedral:4",
    "dihedral:5",
    "dihedral:6",
    "dihedral:12",
    "quaternion:8",
    "alternating:4",
    "product:[cyclic:2,cyclic:2]",
    "product:[cyclic:2,cyclic:4]",
    "product:[cyclic:2,cyclic:2,cyclic:2]",
    "product:[cyclic:3,cyclic:3]",
    "product:[cyclic:2,sym:3]",
    "product:[cyclic:3,sym:3]",
    "product:[cyclic:4,sym:3]",
    "product:[cyclic:2,alternating:4]",
    "product:[quaternion:8,cyclic:3]",
    "product:[dihedral:4,cyclic:3]",
];

/// Towers with `|π₁| <= 24` and at most two stages: classifying spaces,
/// Eilenberg-MacLane stages with trivial and twisted actions, nonzero
/// k-invariants on the smaller groups and two-stage towers.
pub fn corpus() -> Vec<Arc<PostnikovTower>> {
    let mut out = Vec::new();
    for spec in CORPUS_GROUPS {
        let g = group(spec);
        let n = g.order();
        out.push(tower(format!("B {spec}"), &g, vec![]));
        if n == 1 {
            continue;
        }
        let z2 = GModule::trivial(g.clone(), FiniteAbelianGroup::cyclic(2));
        out.push(tower(format!("K(Z/2,2)//{spec}"), &g, vec![(2, z2.clone(), None)]));
        if let Some(m) = cyclic_modules(&g, 3, 2).into_iter().nth(1) {
            out.push(tower(format!("K(Z/3 twisted,2)//{spec}"), &g, vec![(2, m, None)]));
        }
        if n <= 12 {
            if let Some(k) = nonzero_k(&z2, 2) {
                out.push(tower(format!("K(Z/2,2)//{spec} k!=0"), &g, vec![(2, z2.clone(), Some(k))]));
            }
        }
        if n <= 8 {
            let z3 = GModule::trivial(g.clone(), FiniteAbelianGroup::cyclic(3));
            let k3 = nonzero_k(&z2, 3);
            out.push(tower(format!("two-stage {spec}"), &g, vec![(2, z3, None), (3, z2.clone(), k3)]));
        }
    }
    out
}

/// `X = K(Z/3, 2) // Z/2` with the sign action.
pub fn non_normal_example() -> Arc<PostnikovTower> {
    let g = group("cyclic:2");
    let a = GModule::from_generators(g.clone(), FiniteAbelianGroup::cyclic(3), &[1], &[mat(&[vec![2]])]).unwrap();
    tower("X".into(), &g, vec![(2, a, None)])
}

/// Closure of a set of elements under multiplication, by breadth-first
/// search on the table.
pub fn closure(g: &FiniteGroup, gens: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = BTreeSet::from([g.identity()]);
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Number of subgroups of order `p^a = |G|_p`, by closing every set of at
/// most three elements of `p`-power order. Groups of order at most 24 have
/// Sylow subgroups generated by three elements.
pub fn brute_sylow_count(g: &FiniteGroup, p: u64) -> usize {
    let mut n = g.order();
    let mut pa = 1;
    while n % p as usize == 0 {
        n /= p as usize;
        pa *= p as usize;
    }
    let pel: Vec<usize> = g
        .elements()
        .filter(|&x| {
            let o = g.element_order(x);
            o > 1 && pa % o == 0
        })
        .collect();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    if pa == 1 {
        return 1;
    }
    for i in 0..pel.len() {
        for j in i..pel.len() {
            for k in j..pel.len() {
                let c = closure(g, &[pel[i], pel[j], pel[k]]);
                if c.len() == pa {
                    found.insert(c.into_iter().collect());
                }
            }
        }
    }
    found.len()
}

/// `|H^n(Z/m; Z/k)|` for the trivial action, from the periodic resolution
/// `... -> Z[C] --N--> Z[C] --(t-1)--> Z[C] -> Z`: the cochain complex is
/// `A --0--> A --N--> A --0--> ...` with `N = m`, so odd degrees give the
/// `m`-torsion of `A` and positive even degrees give `A / mA`. Counted by
/// enumerating `A`.
pub fn cyclic_cohomology_order(m: u64, k: u64, n: usize) -> u64 {
    let torsion = (0..k).filter(|a| (m * a) % k == 0).count() as u64;
    let image: BTreeSet<u64> = (0..k).map(|a| (m * a) % k).collect();
    match n {
        0 => k,
        _ if n % 2 == 1 => torsion,
        _ => k / image.len() as u64,
    }
}

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn example(name: &str) -> String {
    repo_root().join("docs/examples").join(name).display().to_string()
}

#[derive(Debug, PartialEq, Eq)]
pub struct CliRun {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

impl CliRun {
    pub fn out(&self) -> String {
        String::from_utf8_lossy(&self.stdout).into_owned()
    }

    pub fn err(&self) -> String {
        String::from_utf8_lossy(&self.stderr).into_owned()
    }
}

pub fn cli(args: &[String], threads: Option<usize>) -> CliRun {
    match threads {
        Some(t) => cli_with_env(args, &[("RAYON_NUM_THREADS", &t.to_string())]),
        None => cli_with_env(args, &[]),
    }
}

pub fn cli_with_env(args: &[String], env: &[(&str, &str)]) -> CliRun {
    let mut c = Command::new(env!("CARGO_BIN_EXE_finsylow"));
    c.args(args).envs(env.iter().copied());
    let o = c.output().expect("the binary runs");
    CliRun {
        code: o.status.code().unwrap_or(-1),
        stdout: o.stdout,
        stderr: o.stderr,
    }
}

pub fn args(a: &[&str]) -> Vec<String> {
    a.iter().map(|s| s.to_string()).collect()
}

/// Every CLI invocation the test suites make.
pub fn cli_invocations() -> Vec<Vec<String>> {
    let x = example("non_normal_sylow.json");
    let s = example("showcase.json");
    let mut out = vec![
        args(&["sylow-count", &x, "--prime", "2"]),
        args(&["sylow-count", &x, "--prime", "2", "--json"]),
        args(&["normality", &x, "--prime", "2"]),
        args(&["normality", &x, "--prime", "2", "--json"]),
        args(&["sylow", &x, "--prime", "2", "--json"]),
        args(&["nilpotent-check", &x]),
        args(&["decompose", &x]),
        args(&["run", &x, "--json"]),
        args(&["run", &s]),
        args(&["run", &s, "--json"]),
        args(&["decompose", &s, "--tower", "BZ6", "--json"]),
        args(&["conjugate", &s, "--tower", "BS3", "--prime", "2"]),
        args(&["factor", &s, "--map", "into_s3", "--prime", "2", "--json"]),
        args(&["p-complete", &s, "--tower", "BZ6", "--prime", "3"]),
        args(&["burnside", &s, "--prime", "2", "--map", "sign"]),
        args(&["burnside", &s, "--prime", "2", "--gset", "triangle_edges", "--json"]),
        args(&["burnside", &s, "--prime", "2", "--map", "quotient"]),
        args(&["cohomology", "--group", "trivial", "--module", "7", "--degree", "2"]),
        args(&["cohomology", "--group", "sym:3", "--module", "3", "--degree", "4", "--json"]),
        args(&["cohomology", &s, "--module", "A", "--degree", "3"]),
        args(&["selftest"]),
    ];
    out.push(args(&["sylow-count", &repo_root().join("missing.json").display().to_string(), "--prime", "2"]));
    out
}
