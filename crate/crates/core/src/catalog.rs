//! Built-in groups, plus lookup of user-supplied tables by catalog id.
//!
//! Names: `S3`, `S4`, `Z<n>`, `V4`, `D<2n>` for `3 <= n <= 12` (dihedral of
//! order `2n`), `Q8`, `SL2F3`, `Heis3`, and the exponent-3 family `Phi4`,
//! `Phi5`, `Phi6`, `Phi7`, `Phi9`, `Phi10` (order 243) and `Phi11` (order
//! 729).

use std::path::PathBuf;

use crate::error::Result;
use crate::group::input::GroupSpec;

/// Environment variable naming a directory of user-supplied group tables,
/// stored as `<order>_<id>.json`.
pub const CATALOG_ENV: &str = "RAMIFY_CATALOG";

const PHI: &[(&str, &str)] = &[
    ("Phi4", include_str!("../data/catalog/phi4.json")),
    ("Phi5", include_str!("../data/catalog/phi5.json")),
    ("Phi6", include_str!("../data/catalog/phi6.json")),
    ("Phi7", include_str!("../data/catalog/phi7.json")),
    ("Phi9", include_str!("../data/catalog/phi9.json")),
    ("Phi10", include_str!("../data/catalog/phi10.json")),
    ("Phi11", include_str!("../data/catalog/phi11.json")),
];

fn perm(name: &str, degree: usize, generators: Vec<Vec<u32>>) -> GroupSpec {
    GroupSpec::Permutation { degree, generators, name: Some(name.into()), generator_names: None }
}

fn matrices(name: &str, prime: u64, dim: usize, generators: Vec<Vec<u32>>) -> GroupSpec {
    GroupSpec::Matrix { prime, dim, generators, name: Some(name.into()) }
}

pub fn cyclic(n: usize) -> GroupSpec {
    let g = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    perm(&format!("Z{n}"), n, vec![g])
}

pub fn symmetric(n: usize) -> GroupSpec {
    let cycle = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    let mut t: Vec<u32> = (0..n as u32).collect();
    t.swap(0, 1);
    perm(&format!("S{n}"), n, vec![t, cycle])
}

/// Dihedral group of order `2n`, acting on the vertices of an `n`-gon.
pub fn dihedral(n: usize) -> GroupSpec {
    let r = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    let s = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
    perm(&format!("D{}", 2 * n), n, vec![r, s])
}

pub fn names() -> Vec<String> {
    let mut v: Vec<String> = ["S3", "S4", "V4", "Q8", "SL2F3", "Heis3"].iter().map(|s| s.to_string()).collect();
    v.extend((3..=12).map(|n| format!("D{}", 2 * n)));
    v.extend(PHI.iter().map(|(n, _)| n.to_string()));
    v
}

/// A built-in group description by name (case-insensitive).
pub fn get(name: &str) -> Option<GroupSpec> {
    let key = name.to_ascii_lowercase();
    let spec = match key.as_str() {
        "s3" => symmetric(3),
        "s4" => symmetric(4),
        "v4" => perm("V4", 4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]),
        "q8" => matrices("Q8", 3, 2, vec![vec![0, 2, 1, 0], vec![1, 1, 1, 2]]),
        "sl2f3" => matrices("SL2F3", 3, 2, vec![vec![1, 1, 0, 1], vec![1, 0, 1, 1]]),
        "heis3" => matrices("Heis3", 3, 3, vec![vec![1, 1, 0, 0, 1, 0, 0, 0, 1], vec![1, 0, 0, 0, 1, 1, 0, 0, 1]]),
        _ => {
            if let Some(rest) = key.strip_prefix('z') {
                let n: usize = rest.parse().ok()?;
                return (n >= 1).then(|| cyclic(n));
            }
            if let Some(rest) = key.strip_prefix('d') {
                let m: usize = rest.parse().ok()?;
                return (m >= 6 && m % 2 == 0).then(|| dihedral(m / 2));
            }
            let (_, text) = PHI.iter().find(|(n, _)| n.to_ascii_lowercase() == key)?;
            return GroupSpec::from_json(text).ok();
        }
    };
    Some(spec)
}

/// Location of a user-supplied table for catalog id `(order, id)`.
pub fn user_table_path(order: usize, id: usize) -> Option<PathBuf> {
    let dir = std::env::var_os(CATALOG_ENV)?;
    let path = PathBuf::from(dir).join(format!("{order}_{id}.json"));
    path.exists().then_some(path)
}

/// Loads a user-supplied table, or `None` if the catalog has no such file.
pub fn user_table(order: usize, id: usize) -> Option<Result<GroupSpec>> {
    let path = user_table_path(order, id)?;
    Some(std::fs::read_to_string(path).map_err(Into::into).and_then(|t| {
        let spec = GroupSpec::from_json(&t)?;
        if let GroupSpec::Table { order: o, .. } = &spec {
            if *o != order {
                return crate::error::input(format!("catalog file declares order {o}, expected {order}"));
            }
        }
        Ok(spec)
    }))
}
