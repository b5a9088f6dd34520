//! Finite groups as dense multiplication tables.
//!
//! Every group produced here has the identity at index 0. Elements are
//! `usize` indices into the table.

mod build;
mod classes;
pub mod input;
mod normal;
mod quotient;
mod subgroup;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

pub use build::{FpMatrix, Permutation, DEFAULT_BUDGET};
pub use classes::ConjugacyClasses;
pub use quotient::QuotientGroup;
pub use subgroup::Subgroup;

use crate::error::{Error, Result};

/// Where a group came from. Kept for labels and for building natural
/// representations.
#[derive(Clone, Debug)]
pub enum Provenance {
    Permutation { degree: usize, generators: Vec<Permutation> },
    Matrix { prime: u64, dim: usize, generators: Vec<FpMatrix> },
    Table,
    Derived(String),
}

pub struct FiniteGroup {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    orders: Vec<u32>,
    generators: Vec<usize>,
    labels: Option<Vec<String>>,
    /// Permutation images of every element, when the group acts on points.
    perms: Option<Vec<Permutation>>,
    provenance: Provenance,
    fingerprint: u64,
    classes: OnceLock<ConjugacyClasses>,
    normals: OnceLock<Vec<Subgroup>>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.n)
            .field("generators", &self.generators)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from a multiplication table that is already known to
    /// be a group with identity 0.
    pub(crate) fn from_parts(
        n: usize,
        mul: Vec<u32>,
        generators: Vec<usize>,
        provenance: Provenance,
    ) -> FiniteGroup {
        debug_assert_eq!(mul.len(), n * n);
        let mut inv = vec![0u32; n];
        for a in 0..n {
            let row = &mul[a * n..(a + 1) * n];
            inv[a] = row.iter().position(|&x| x == 0).expect("inverse exists") as u32;
        }
        let mut orders = vec![0u32; n];
        for a in 0..n {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = mul[x * n + a] as usize;
                k += 1;
            }
            orders[a] = k;
        }
        let mut h = DefaultHasher::new();
        n.hash(&mut h);
        mul.hash(&mut h);
        FiniteGroup {
            n,
            mul,
            inv,
            orders,
            generators,
            labels: None,
            perms: None,
            provenance,
            fingerprint: h.finish(),
            classes: OnceLock::new(),
            normals: OnceLock::new(),
        }
    }

    pub(crate) fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub(crate) fn with_perms(mut self, perms: Vec<Permutation>) -> Self {
        self.perms = Some(perms);
        self
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a] as usize
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let o = self.element_order(a) as i64;
        let mut e = k.rem_euclid(o);
        let mut x = 0;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                x = self.mul(x, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        x
    }

    /// `g^-1 x g`.
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.inv(g), self.mul(x, g))
    }

    /// `a^-1 b^-1 a b`.
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => format!("g{a}"),
        }
    }

    /// The permutation of each element, for groups that act on points.
    pub fn permutations(&self) -> Option<&[Permutation]> {
        self.perms.as_deref()
    }

    pub fn table(&self) -> &[u32] {
        &self.mul
    }

    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1usize, |acc, &o| num_integer::lcm(acc, o as usize))
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders.iter().any(|&o| o as usize == self.n)
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| ConjugacyClasses::compute(self))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.n, (0..self.n).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_sorted(self.n, vec![0])
    }

    /// Subgroup generated by the given elements.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Subgroup {
        let mut mask = vec![false; self.n];
        mask[0] = true;
        let mut list = vec![0usize];
        let gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &s in &gens {
                let y = self.mul(x, s);
                if !mask[y] {
                    mask[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        Subgroup::from_parts(list, mask)
    }

    /// Checks closure and builds a subgroup from an explicit element set.
    pub fn subgroup_from_elements(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut els: Vec<usize> = elements.to_vec();
        els.sort_unstable();
        els.dedup();
        if els.iter().any(|&x| x >= self.n) {
            return Err(Error::NotSubgroup("element index out of range".into()));
        }
        let h = self.subgroup_generated(&els);
        if h.order() != els.len() {
            return Err(Error::NotSubgroup(format!(
                "{} elements generate a subgroup of order {}",
                els.len(),
                h.order()
            )));
        }
        Ok(h)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        h.elements()
            .iter()
            .all(|&x| self.generators.iter().all(|&g| h.contains(self.conj(x, g))))
    }

    /// Smallest normal subgroup containing the given elements.
    pub fn normal_closure(&self, elements: &[usize]) -> Subgroup {
        let mut gens: Vec<usize> = Vec::new();
        let mut mask = vec![false; self.n];
        let mut stack: Vec<usize> = elements.to_vec();
        while let Some(x) = stack.pop() {
            if mask[x] {
                continue;
            }
            mask[x] = true;
            gens.push(x);
            for &g in &self.generators {
                stack.push(self.conj(x, g));
            }
        }
        self.subgroup_generated(&gens)
    }

    /// Subgroup generated by all commutators `[a, b]`, `a` in `A`, `b` in `B`.
    pub fn commutator_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut mask = vec![false; self.n];
        let mut gens = Vec::new();
        for &x in a.elements() {
            for &y in b.elements() {
                let c = self.commutator(x, y);
                if !mask[c] {
                    mask[c] = true;
                    gens.push(c);
                }
            }
        }
        self.subgroup_generated(&gens)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let w = self.whole();
        self.commutator_subgroup(&w, &w)
    }

    pub fn center(&self) -> Subgroup {
        let els: Vec<usize> = (0..self.n)
            .filter(|&x| self.generators.iter().all(|&g| self.mul(x, g) == self.mul(g, x)))
            .collect();
        Subgroup::from_sorted(self.n, els)
    }

    /// `G = g_1 > g_2 > ...`, stopping when the series stabilizes.
    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        let w = self.whole();
        let mut series = vec![w.clone()];
        loop {
            let next = self.commutator_subgroup(series.last().unwrap(), &w);
            if next.order() == series.last().unwrap().order() {
                return series;
            }
            series.push(next);
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().order() == 1
    }

    /// The subgroup as a group in its own right, with the embedding that
    /// sends its element `i` to `h.elements()[i]`.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> (FiniteGroup, Vec<usize>) {
        let els = h.elements();
        let m = els.len();
        let mut pos = vec![u32::MAX; self.n];
        for (i, &x) in els.iter().enumerate() {
            pos[x] = i as u32;
        }
        let mut mul = vec![0u32; m * m];
        for (i, &a) in els.iter().enumerate() {
            for (j, &b) in els.iter().enumerate() {
                mul[i * m + j] = pos[self.mul(a, b)];
            }
        }
        let sub_gens: Vec<usize> = {
            // a small generating set, greedily
            let mut gens = Vec::new();
            let mut cur = self.trivial();
            for &x in els {
                if !cur.contains(x) {
                    gens.push(x);
                    cur = self.subgroup_generated(&gens);
                }
            }
            gens.iter().map(|&x| pos[x] as usize).collect()
        };
        let mut g = FiniteGroup::from_parts(m, mul, sub_gens, Provenance::Derived("subgroup".into()));
        if let Some(l) = &self.labels {
            g.labels = Some(els.iter().map(|&x| l[x].clone()).collect());
        }
        if let Some(p) = &self.perms {
            g.perms = Some(els.iter().map(|&x| p[x].clone()).collect());
        }
        (g, els.to_vec())
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (na, nb) = (a.n, b.n);
        let n = na * nb;
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            let (xa, xb) = (x / nb, x % nb);
            for y in 0..n {
                let (ya, yb) = (y / nb, y % nb);
                mul[x * n + y] = (a.mul(xa, ya) * nb + b.mul(xb, yb)) as u32;
            }
        }
        let mut gens: Vec<usize> = a.generators.iter().map(|&g| g * nb).collect();
        gens.extend(b.generators.iter().map(|&g| g));
        gens.retain(|&g| g != 0);
        let labels = (0..n).map(|x| format!("({},{})", a.label(x / nb), b.label(x % nb))).collect();
        FiniteGroup::from_parts(n, mul, gens, Provenance::Derived("direct product".into()))
            .with_labels(labels)
    }

    pub fn normal_subgroups(&self) -> &[Subgroup] {
        self.normals.get_or_init(|| normal::normal_subgroups(self))
    }
}
