use std::sync::{Arc, OnceLock};

use super::{CharacterTable, ClassFunction};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, QuotientGroup, Subgroup};
use crate::rational::Rational;

/// A subgroup of `G` with its own character table and the maps between the
/// two class structures.
pub struct SubgroupTable {
    subgroup: Subgroup,
    table: CharacterTable,
    embedding: Vec<usize>,
    /// `G`-element -> `H`-element, `u32::MAX` outside `H`.
    position: Vec<u32>,
    /// `H`-class -> `G`-class.
    fusion: Vec<usize>,
    parent: u64,
    induce_counts: OnceLock<Vec<Vec<u32>>>,
}

impl SubgroupTable {
    pub fn new(g: &FiniteGroup, h: &Subgroup) -> Result<SubgroupTable> {
        let (hg, embedding) = g.subgroup_as_group(h);
        let table = CharacterTable::compute(Arc::new(hg))?;
        let mut position = vec![u32::MAX; g.order()];
        for (i, &x) in embedding.iter().enumerate() {
            position[x] = i as u32;
        }
        let hcc = table.classes();
        let gcc = g.conjugacy_classes();
        let fusion = (0..hcc.len()).map(|i| gcc.class_of(embedding[hcc.representative(i)])).collect();
        Ok(SubgroupTable {
            subgroup: h.clone(),
            table,
            embedding,
            position,
            fusion,
            parent: g.fingerprint(),
            induce_counts: OnceLock::new(),
        })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn embedding(&self) -> &[usize] {
        &self.embedding
    }

    /// The `H`-index of a `G`-element, if it lies in `H`.
    pub fn position(&self, g: usize) -> Option<usize> {
        let p = self.position[g];
        (p != u32::MAX).then_some(p as usize)
    }

    /// `G`-class containing each `H`-class.
    pub fn fusion(&self) -> &[usize] {
        &self.fusion
    }

    fn counts(&self, g: &FiniteGroup) -> &[Vec<u32>] {
        self.induce_counts.get_or_init(|| {
            let gcc = g.conjugacy_classes();
            let hcc = self.table.classes();
            (0..gcc.len())
                .map(|c| {
                    let rep = gcc.representative(c);
                    let mut row = vec![0u32; hcc.len()];
                    for x in 0..g.order() {
                        if let Some(h) = self.position(g.conj(rep, x)) {
                            row[hcc.class_of(h)] += 1;
                        }
                    }
                    row
                })
                .collect()
        })
    }
}

pub fn restrict(g_table: &CharacterTable, chi: &ClassFunction, h: &SubgroupTable) -> Result<ClassFunction> {
    if chi.group != g_table.group().fingerprint() || h.parent != chi.group {
        return Err(Error::GroupMismatch);
    }
    let vals = h.fusion.iter().map(|&c| chi.values[c].clone()).collect();
    Ok(ClassFunction::raw(h.table.group().fingerprint(), vals))
}

/// `Ind_H^G mu (g) = (1/|H|) sum_{x : x^-1 g x in H} mu(x^-1 g x)`.
pub fn induce(h: &SubgroupTable, mu: &ClassFunction, g_table: &CharacterTable) -> Result<ClassFunction> {
    if mu.group != h.table.group().fingerprint() || h.parent != g_table.group().fingerprint() {
        return Err(Error::GroupMismatch);
    }
    let counts = h.counts(g_table.group());
    let inv_h = Rational::new(1, h.subgroup.order() as i64);
    let vals = counts
        .iter()
        .map(|row| {
            let mut acc = Cyclotomic::zero();
            for (c, &k) in row.iter().enumerate() {
                if k > 0 && !mu.values[c].is_zero() {
                    acc = &acc + &mu.values[c].scale(&Rational::from(k as usize));
                }
            }
            acc.scale(&inv_h)
        })
        .collect();
    Ok(ClassFunction::raw(g_table.group().fingerprint(), vals))
}

pub fn tensor(a: &ClassFunction, b: &ClassFunction) -> Result<ClassFunction> {
    a.check(b)?;
    Ok(ClassFunction::raw(a.group, a.values.iter().zip(&b.values).map(|(x, y)| x * y).collect()))
}

/// Lifts a class function of `G/N` to `G`.
pub fn inflate(
    q: &QuotientGroup,
    q_table: &CharacterTable,
    psi: &ClassFunction,
    g_table: &CharacterTable,
) -> Result<ClassFunction> {
    if psi.group != q_table.group().fingerprint() || q.group().fingerprint() != psi.group {
        return Err(Error::GroupMismatch);
    }
    let gcc = g_table.classes();
    let qcc = q_table.classes();
    let vals = (0..gcc.len())
        .map(|c| psi.values[qcc.class_of(q.project(gcc.representative(c)))].clone())
        .collect();
    Ok(ClassFunction::raw(g_table.group().fingerprint(), vals))
}

/// Pushes a class function of `G` that is trivial on `N` down to `G/N`.
pub fn deflate(
    g_table: &CharacterTable,
    chi: &ClassFunction,
    q: &QuotientGroup,
    q_table: &CharacterTable,
) -> Result<ClassFunction> {
    if chi.group != g_table.group().fingerprint() || q.group().fingerprint() != q_table.group().fingerprint() {
        return Err(Error::GroupMismatch);
    }
    if !g_table.is_trivial_on(chi, q.kernel()) {
        return Err(Error::NotTrivialOnKernel);
    }
    let gcc = g_table.classes();
    let qcc = q_table.classes();
    let vals = (0..qcc.len())
        .map(|c| chi.values[gcc.class_of(q.representatives()[qcc.representative(c)])].clone())
        .collect();
    Ok(ClassFunction::raw(q_table.group().fingerprint(), vals))
}

/// `I_G(mu) = {g : mu(g^-1 n g) = mu(n) for all n in N}` for normal `N`.
pub fn inertia_subgroup(g: &FiniteGroup, n: &SubgroupTable, mu: &ClassFunction) -> Result<Subgroup> {
    if mu.group != n.table.group().fingerprint() || n.parent != g.fingerprint() {
        return Err(Error::GroupMismatch);
    }
    if !g.is_normal(&n.subgroup) {
        return Err(Error::NotNormal);
    }
    let ncc = n.table.classes();
    let reps: Vec<usize> = (0..ncc.len()).map(|c| n.embedding[ncc.representative(c)]).collect();
    let els: Vec<usize> = (0..g.order())
        .filter(|&x| {
            reps.iter().enumerate().all(|(c, &h)| {
                let y = n.position(g.conj(h, x)).unwrap();
                mu.values[ncc.class_of(y)] == mu.values[c]
            })
        })
        .collect();
    g.subgroup_from_elements(&els)
}

/// Indices of the irreducibles of `G` whose restriction to `N` contains `mu`.
pub fn irr_over(g_table: &CharacterTable, n: &SubgroupTable, mu: &ClassFunction) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, chi) in g_table.irreducibles().iter().enumerate() {
        let r = restrict(g_table, chi, n)?;
        if !n.table.inner_product(&r, mu)?.is_zero() {
            out.push(i);
        }
    }
    Ok(out)
}
