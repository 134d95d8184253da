//! Named groups: `trivial`, `cyclic:n`, `sym:n`, `alternating:n`,
//! `dihedral:n` (symmetries of the n-gon, order 2n), `quaternion:n`,
//! `semidihedral:n`, `modular:n` (order n, a power of two) and
//! `product:[spec, spec, ...]`.

use super::FiniteGroup;
use crate::error::{Error, Result};

/// Largest group a builtin will construct; tables grow quadratically.
const MAX_BUILTIN_ORDER: usize = 4096;

pub fn parse_builtin(spec: &str) -> Result<FiniteGroup> {
    let spec = spec.trim();
    if spec == "trivial" {
        return Ok(FiniteGroup::trivial());
    }
    if let Some(rest) = spec.strip_prefix("product:") {
        let inner = rest
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| bad(spec, "product arguments must be bracketed: product:[a,b]"))?;
        let parts = split_top_level(inner);
        if parts.is_empty() {
            return Ok(FiniteGroup::trivial());
        }
        let mut g = parse_builtin(parts[0])?;
        for p in &parts[1..] {
            let h = parse_builtin(p)?;
            if g.order() * h.order() > MAX_BUILTIN_ORDER {
                return Err(too_big(spec));
            }
            g = g.product(&h);
        }
        return Ok(g.with_name(canonical_product_name(&parts)));
    }
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| bad(spec, "expected kind:n, e.g. cyclic:4"))?;
    let n: usize = arg
        .trim()
        .parse()
        .map_err(|_| bad(spec, "the size argument must be a positive integer"))?;
    if n == 0 {
        return Err(bad(spec, "the size argument must be positive"));
    }
    let g = match kind.trim() {
        "cyclic" => {
            if n > MAX_BUILTIN_ORDER {
                return Err(too_big(spec));
            }
            FiniteGroup::cyclic(n)
        }
        "sym" => {
            if n > 6 {
                return Err(too_big(spec));
            }
            permutation_group(n, false)
        }
        "alternating" => {
            if n > 7 {
                return Err(too_big(spec));
            }
            permutation_group(n, true)
        }
        "dihedral" => {
            if n < 1 || 2 * n > MAX_BUILTIN_ORDER {
                return Err(bad(spec, "dihedral:n needs 1 <= n"));
            }
            metacyclic(n, n - 1, 0)
        }
        "quaternion" | "semidihedral" | "modular" => {
            let min = if kind == "quaternion" { 8 } else { 16 };
            if !n.is_power_of_two() || n < min || n > MAX_BUILTIN_ORDER {
                return Err(bad(spec, &format!("{kind}:n needs n a power of two, n >= {min}")));
            }
            let m = n / 2;
            match kind {
                "quaternion" => metacyclic(m, m - 1, m / 2),
                "semidihedral" => metacyclic(m, m / 2 - 1, 0),
                _ => metacyclic(m, m / 2 + 1, 0),
            }
        }
        _ => return Err(bad(spec, "unknown group kind")),
    };
    Ok(g.with_name(spec.replace(' ', "")))
}

fn canonical_product_name(parts: &[&str]) -> String {
    let names: Vec<String> = parts.iter().map(|p| p.replace(' ', "")).collect();
    format!("product:[{}]", names.join(","))
}

fn bad(spec: &str, hint: &str) -> Error {
    Error::input("", format!("cannot parse group '{spec}'"), hint)
}

fn too_big(spec: &str) -> Error {
    Error::capacity(
        "",
        format!("builtin group '{spec}' exceeds the table size bound"),
        "use a smaller group",
    )
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if !last.is_empty() {
        parts.push(last);
    }
    parts
}

/// Symmetric (or alternating) group on `n` points. Elements are the
/// permutations in lexicographic order; `(s * t)(i) = s(t(i))`.
fn permutation_group(n: usize, even_only: bool) -> FiniteGroup {
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        if !even_only || is_even(&p) {
            perms.push(p.clone());
        }
        if !next_permutation(&mut p) {
            break;
        }
    }
    let index = |q: &[usize]| perms.binary_search_by(|x| x.as_slice().cmp(q)).expect("closed");
    let labels: Vec<String> = perms.iter().map(|q| cycle_notation(q)).collect();
    let order = perms.len();
    let kind = if even_only { "alternating" } else { "sym" };
    FiniteGroup::from_fn(
        format!("{kind}:{n}"),
        order,
        0,
        |a, b| {
            let comp: Vec<usize> = (0..n).map(|i| perms[a][perms[b][i]]).collect();
            index(&comp)
        },
        Some(labels),
    )
}

fn is_even(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x + 1);
            x = p[x];
        }
        let c: Vec<String> = cycle.iter().map(ToString::to_string).collect();
        out.push_str(&format!("({})", c.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// Groups `<a, b | a^m, b^2 = a^s, b a b^-1 = a^r>`; element `a^i b^j` has
/// index `j * m + i`.
fn metacyclic(m: usize, r: usize, s: usize) -> FiniteGroup {
    let order = 2 * m;
    let labels = (0..order)
        .map(|x| {
            let (i, j) = (x % m, x / m);
            match (i, j) {
                (0, 0) => "e".to_string(),
                (_, 0) => format!("a^{i}"),
                (0, _) => "b".to_string(),
                _ => format!("a^{i}b"),
            }
        })
        .collect();
    FiniteGroup::from_fn(
        "metacyclic",
        order,
        0,
        |x, y| {
            let (i1, j1) = (x % m, x / m);
            let (i2, j2) = (y % m, y / m);
            // a^i1 b^j1 a^i2 b^j2 = a^(i1 + r^j1 i2) b^(j1 + j2)
            let twisted = if j1 == 1 { (r * i2) % m } else { i2 };
            let mut i = (i1 + twisted) % m;
            let mut j = j1 + j2;
            if j == 2 {
                i = (i + s) % m;
                j = 0;
            }
            j * m + i
        },
        Some(labels),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_group(g: &FiniteGroup) {
        FiniteGroup::from_table("check", g.table()).expect("builtin violates group axioms");
    }

    #[test]
    fn builtins_are_groups() {
        for spec in [
            "trivial",
            "cyclic:1",
            "cyclic:6",
            "sym:3",
            "sym:4",
            "alternating:4",
            "dihedral:4",
            "dihedral:3",
            "quaternion:8",
            "quaternion:16",
            "semidihedral:16",
            "modular:16",
            "product:[cyclic:2,cyclic:3]",
            "product:[cyclic:2, product:[cyclic:2, cyclic:2]]",
        ] {
            let g = parse_builtin(spec).unwrap();
            check_group(&g);
        }
    }

    #[test]
    fn orders_and_shapes() {
        assert_eq!(parse_builtin("sym:4").unwrap().order(), 24);
        assert_eq!(parse_builtin("alternating:4").unwrap().order(), 12);
        assert_eq!(parse_builtin("dihedral:4").unwrap().order(), 8);
        let q8 = parse_builtin("quaternion:8").unwrap();
        // Q8 has a unique element of order 2
        assert_eq!(q8.elements().filter(|&g| q8.element_order(g) == 2).count(), 1);
        let d4 = parse_builtin("dihedral:4").unwrap();
        assert_eq!(d4.elements().filter(|&g| d4.element_order(g) == 2).count(), 5);
        assert!(!parse_builtin("modular:16").unwrap().is_abelian());
        assert_eq!(parse_builtin("sym:3").unwrap().label(1), "(2 3)");
    }

    #[test]
    fn rejects_malformed_specs() {
        assert!(parse_builtin("cyclic:x").is_err());
        assert!(parse_builtin("quaternion:12").is_err());
        assert!(parse_builtin("free:2").is_err());
        assert!(parse_builtin("product:cyclic:2").is_err());
        let err = parse_builtin("sym:9").unwrap_err();
        assert_eq!(err.class(), crate::error::ErrorClass::Capacity);
    }
}
