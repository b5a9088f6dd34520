use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use super::{FiniteGroup, Provenance};
use crate::error::{input, Error, Result};

pub const DEFAULT_BUDGET: usize = 100_000;

/// A permutation of `0..degree`, composed right to left: `(g*h)(i) = g(h(i))`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation(pub Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Permutation {
        Permutation((0..degree as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn compose(&self, h: &Permutation) -> Permutation {
        Permutation(h.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u32;
        }
        Permutation(out)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation on points `1..=degree`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, ",")?;
                }
                first = false;
                write!(f, "{}", i + 1)?;
                i = self.0[i] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A `d x d` matrix over `F_p`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FpMatrix {
    pub p: u32,
    pub d: usize,
    pub data: Vec<u32>,
}

impl FpMatrix {
    pub fn identity(p: u32, d: usize) -> FpMatrix {
        let mut data = vec![0; d * d];
        for i in 0..d {
            data[i * d + i] = 1 % p;
        }
        FpMatrix { p, d, data }
    }

    pub fn mul(&self, o: &FpMatrix) -> FpMatrix {
        let (d, p) = (self.d, self.p as u64);
        let mut data = vec![0u32; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut s = 0u64;
                for k in 0..d {
                    s += self.data[i * d + k] as u64 * o.data[k * d + j] as u64;
                }
                data[i * d + j] = (s % p) as u32;
            }
        }
        FpMatrix { p: self.p, d, data }
    }

    pub fn is_invertible(&self) -> bool {
        let rows: Vec<Vec<u64>> = (0..self.d)
            .map(|i| self.data[i * self.d..(i + 1) * self.d].iter().map(|&x| x as u64).collect())
            .collect();
        let mut rows = rows;
        crate::modp::rref(&mut rows, self.p as u64).len() == self.d
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.d {
            if i > 0 {
                write!(f, ";")?;
            }
            let row: Vec<String> = self.data[i * self.d..(i + 1) * self.d].iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Breadth-first closure under right multiplication by the generators.
/// Returns the elements (identity first), the table, and generator indices.
fn closure<E, F>(identity: E, gens: &[E], mul: F, budget: usize) -> Result<(Vec<E>, Vec<u32>, Vec<usize>)>
where
    E: Clone + Eq + Hash,
    F: Fn(&E, &E) -> E,
{
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<E, usize> = HashMap::new();
    index.insert(identity, 0);
    let mut parent = vec![(0usize, 0usize)];
    // right[s][x] = index of x * gen_s
    let mut right: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
    let mut i = 0;
    while i < elements.len() {
        for (s, g) in gens.iter().enumerate() {
            let y = mul(&elements[i], g);
            let j = match index.get(&y) {
                Some(&j) => j,
                None => {
                    let j = elements.len();
                    if j >= budget {
                        return Err(Error::Resource(format!(
                            "group closure exceeded the budget of {budget} elements"
                        )));
                    }
                    index.insert(y.clone(), j);
                    elements.push(y);
                    parent.push((i, s));
                    j
                }
            };
            right[s].push(j as u32);
        }
        i += 1;
    }
    let n = elements.len();
    // column e of the table, from e = parent * gen: a*e = (a*parent)*gen
    let mut mul_t = vec![0u32; n * n];
    for a in 0..n {
        mul_t[a * n] = a as u32;
    }
    for e in 1..n {
        let (par, s) = parent[e];
        for a in 0..n {
            let ap = mul_t[a * n + par] as usize;
            mul_t[a * n + e] = right[s][ap];
        }
    }
    let gen_idx = (0..gens.len()).map(|s| right[s][0] as usize).collect();
    Ok((elements, mul_t, gen_idx))
}

impl FiniteGroup {
    /// Closure of a set of permutations of `0..degree`.
    pub fn from_permutations(degree: usize, gens: Vec<Permutation>, budget: usize) -> Result<FiniteGroup> {
        for g in &gens {
            if g.degree() != degree {
                return input(format!("generator has degree {}, expected {degree}", g.degree()));
            }
            let mut seen = vec![false; degree];
            for &x in &g.0 {
                if x as usize >= degree || seen[x as usize] {
                    return input("generator is not a permutation");
                }
                seen[x as usize] = true;
            }
        }
        let (elements, mul, gen_idx) = closure(Permutation::identity(degree), &gens, |a, b| a.compose(b), budget)?;
        let n = elements.len();
        let labels = elements.iter().map(|p| p.to_string()).collect();
        Ok(FiniteGroup::from_parts(n, mul, gen_idx, Provenance::Permutation { degree, generators: gens })
            .with_labels(labels)
            .with_perms(elements))
    }

    /// Closure of a set of invertible matrices over `F_p`.
    pub fn from_matrices(prime: u64, dim: usize, gens: Vec<FpMatrix>, budget: usize) -> Result<FiniteGroup> {
        if !crate::modp::is_prime(prime) || prime > u32::MAX as u64 {
            return input(format!("{prime} is not a supported prime"));
        }
        for g in &gens {
            if g.d != dim || g.data.len() != dim * dim || g.p as u64 != prime {
                return input("matrix generator has the wrong shape");
            }
            if g.data.iter().any(|&x| x as u64 >= prime) {
                return input("matrix entry out of range");
            }
            if !g.is_invertible() {
                return input("matrix generator is singular");
            }
        }
        let (elements, mul, gen_idx) = closure(FpMatrix::identity(prime as u32, dim), &gens, |a, b| a.mul(b), budget)?;
        let n = elements.len();
        let labels = elements.iter().map(|m| m.to_string()).collect();
        Ok(FiniteGroup::from_parts(n, mul, gen_idx, Provenance::Matrix { prime, dim, generators: gens })
            .with_labels(labels))
    }

    /// Validates an explicit multiplication table. If the identity is not
    /// element 0, it is swapped with element 0.
    pub fn from_table(n: usize, table: &[usize]) -> Result<FiniteGroup> {
        if n == 0 || table.len() != n * n {
            return input(format!("table for order {n} must have {} entries", n * n));
        }
        if table.iter().any(|&x| x >= n) {
            return input("table entry out of range");
        }
        let t = |a: usize, b: usize| table[a * n + b];
        for a in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                row[t(a, b)] = true;
                col[t(b, a)] = true;
            }
            if row.iter().any(|x| !x) || col.iter().any(|x| !x) {
                return input("table is not a Latin square");
            }
        }
        let Some(e) = (0..n).find(|&e| (0..n).all(|a| t(e, a) == a && t(a, e) == a)) else {
            return input("table has no identity");
        };
        // relabel so that the identity is 0
        let sw = |x: usize| if x == e { 0 } else if x == 0 { e } else { x };
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[sw(a) * n + sw(b)] = sw(t(a, b)) as u32;
            }
        }
        let m = |a: usize, b: usize| mul[a * n + b] as usize;
        // Light's test on a generating set: if (x s) y = x (s y) for all x, y
        // and every s in a set generating the table, the table is associative.
        let mut gens: Vec<usize> = Vec::new();
        let mut covered = vec![false; n];
        covered[0] = true;
        for cand in 1..n {
            if covered[cand] {
                continue;
            }
            gens.push(cand);
            covered = vec![false; n];
            let mut list: Vec<usize> = gens.clone();
            for &g in &gens {
                covered[g] = true;
            }
            let mut i = 0;
            while i < list.len() {
                for &s in &gens {
                    let y = m(list[i], s);
                    if !covered[y] {
                        covered[y] = true;
                        list.push(y);
                    }
                }
                i += 1;
            }
        }
        for &s in &gens {
            for x in 0..n {
                let xs = m(x, s);
                for y in 0..n {
                    if m(xs, y) != m(x, m(s, y)) {
                        return input("table is not associative");
                    }
                }
            }
        }
        let labels = (0..n).map(|x| sw(x).to_string()).collect();
        Ok(FiniteGroup::from_parts(n, mul, gens, Provenance::Table).with_labels(labels))
    }
}
