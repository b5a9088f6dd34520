//! Definitional checks through explicit restriction to `N`, and the
//! inertia-group criterion. Both work on any group with a character table and
//! are independent of the lattice shortcuts in [`super::Analysis`].

use std::collections::HashMap;

use serde::Serialize;

use crate::chartheory::{inertia_subgroup, restrict, CharacterTable, SubgroupTable};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::rational::Rational;

/// Result of a local check. `witness` is an irreducible of `G` whose
/// restriction is ramified (unramified checks) or an irreducible of `N` that
/// lies under no multiplicity-free restriction (pseudo checks).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalVerdict {
    pub holds: bool,
    pub witness: Option<usize>,
}

fn check_abelian_normal(g: &FiniteGroup, n: &Subgroup) -> Result<()> {
    if n.elements().last().is_some_and(|&x| x >= g.order()) {
        return Err(Error::NotSubgroup("subgroup elements out of range".into()));
    }
    if n.is_trivial() {
        return Err(Error::Input("subgroup must be nontrivial".into()));
    }
    if !g.is_normal(n) {
        return Err(Error::NotNormal);
    }
    let els = n.elements();
    if els.iter().any(|&a| els.iter().any(|&b| g.mul(a, b) != g.mul(b, a))) {
        return Err(Error::NotAbelian);
    }
    Ok(())
}

/// Multiplicities of the irreducibles of `N` in each restricted irreducible.
fn restriction_multiplicities(table: &CharacterTable, nt: &SubgroupTable) -> Result<Vec<Vec<usize>>> {
    table
        .irreducibles()
        .iter()
        .map(|chi| nt.table().decompose(&restrict(table, chi, nt)?))
        .collect()
}

/// Every irreducible restricts to `N` multiplicity-freely or as a multiple of
/// the trivial character.
pub fn unramified_over(table: &CharacterTable, n: &Subgroup) -> Result<LocalVerdict> {
    let g = table.group();
    check_abelian_normal(g, n)?;
    let nt = SubgroupTable::new(g, n)?;
    for (i, mults) in restriction_multiplicities(table, &nt)?.iter().enumerate() {
        let free = mults.iter().all(|&m| m <= 1);
        let trivial_only = mults.iter().skip(1).all(|&m| m == 0);
        if !free && !trivial_only {
            return Ok(LocalVerdict { holds: false, witness: Some(i) });
        }
    }
    Ok(LocalVerdict { holds: true, witness: None })
}

/// Every linear character of `N` lies under an irreducible whose restriction
/// is multiplicity-free.
pub fn pseudo_unramified_over(table: &CharacterTable, n: &Subgroup) -> Result<LocalVerdict> {
    let g = table.group();
    check_abelian_normal(g, n)?;
    let nt = SubgroupTable::new(g, n)?;
    let all = restriction_multiplicities(table, &nt)?;
    let free: Vec<&Vec<usize>> = all.iter().filter(|m| m.iter().all(|&x| x <= 1)).collect();
    for mu in 0..nt.table().len() {
        if !free.iter().any(|m| m[mu] == 1) {
            return Ok(LocalVerdict { holds: false, witness: Some(mu) });
        }
    }
    Ok(LocalVerdict { holds: true, witness: None })
}

/// For each linear `mu` of `N`, whether the irreducibles of the inertia group
/// `I_G(mu)` lying over `mu` are linear: `(all linear, some linear)`.
fn inertia_profile(g: &FiniteGroup, n: &Subgroup) -> Result<Vec<(bool, bool)>> {
    check_abelian_normal(g, n)?;
    let nt = SubgroupTable::new(g, n)?;
    let ncc = nt.table().classes();
    let inv_n = Rational::new(1, n.order() as i64);
    let mut cache: HashMap<Vec<usize>, SubgroupTable> = HashMap::new();
    let mut out = Vec::new();
    for mu in nt.table().irreducibles() {
        let inertia = inertia_subgroup(g, &nt, mu)?;
        if !cache.contains_key(inertia.elements()) {
            cache.insert(inertia.elements().to_vec(), SubgroupTable::new(g, &inertia)?);
        }
        let it = &cache[inertia.elements()];
        let icc = it.table().classes();
        let mut all_linear = true;
        let mut some_linear = false;
        for psi in it.table().irreducibles() {
            let mut acc = Cyclotomic::zero();
            for &x in n.elements() {
                let a = psi.value(icc.class_of(it.position(x).unwrap()));
                let b = mu.value(ncc.class_of(nt.position(x).unwrap())).conjugate();
                acc = &acc + &(a * &b);
            }
            if acc.scale(&inv_n).is_zero() {
                continue;
            }
            if psi.degree().is_one() {
                some_linear = true;
            } else {
                all_linear = false;
            }
        }
        out.push((all_linear, some_linear));
    }
    Ok(out)
}

/// `G` is unramified over `N` iff for every nontrivial linear `mu` of `N`
/// all irreducibles of `I_G(mu)` over `mu` are linear.
pub fn unramified_by_inertia(g: &FiniteGroup, n: &Subgroup) -> Result<bool> {
    Ok(inertia_profile(g, n)?.iter().skip(1).all(|p| p.0))
}

/// `G` is pseudo-unramified over `N` iff every linear `mu` of `N` has a
/// linear irreducible of `I_G(mu)` over it.
pub fn pseudo_unramified_by_inertia(g: &FiniteGroup, n: &Subgroup) -> Result<bool> {
    Ok(inertia_profile(g, n)?.iter().all(|p| p.1))
}
