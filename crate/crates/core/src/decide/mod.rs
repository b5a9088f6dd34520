//! Decision procedures: (pseudo-)unramified over a normal subgroup, totally
//! (pseudo-)unramified with certificates, and completeness of
//! representations.
//!
//! All quotients `G/K` are handled inside the character table of `G`: the
//! irreducibles of `G/K` are the irreducibles of `G` with `K` in their
//! kernel, and a normal subgroup of `G/K` is a normal `M` of `G` containing
//! `K`. The explicit-quotient route in [`definition`] is used to replay
//! certificates independently.

mod complete;
pub mod definition;
mod search;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

pub use complete::{qpi_character, CompleteLevel, CompletenessOptions, CompletenessReport};
pub use definition::{
    pseudo_unramified_by_inertia, pseudo_unramified_over, unramified_by_inertia, unramified_over, LocalVerdict,
};
pub use search::{Counterexample, DecisionCertificate, Level};

use crate::chartheory::CharacterTable;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Property {
    #[serde(rename = "unramified")]
    Unramified,
    #[serde(rename = "pseudo-unramified")]
    PseudoUnramified,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Unramified => "unramified",
            Property::PseudoUnramified => "pseudo-unramified",
        })
    }
}

/// Sufficient and necessary conditions used to shortcut or prune a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleTag {
    /// `G/N` is cyclic, so `G` is unramified over `N`.
    #[serde(rename = "UNRAMIFIED-SUFFICIENT")]
    UnramifiedSufficient,
    /// `N` is central and `G` is nonabelian, so `G` is not unramified over `N`.
    #[serde(rename = "UNRAMIFIED-IMPOSSIBLE")]
    UnramifiedImpossible,
    /// `G` is nilpotent and `G'` is not strictly inside `N`.
    #[serde(rename = "SKIP")]
    Skip,
    /// Neither `N = [N,G]` nor `[N,G] = G'`, which every unramified `N` satisfies.
    #[serde(rename = "COMMUTATOR-NECESSARY")]
    CommutatorNecessary,
    /// `G` is nilpotent and `N` is not a maximal abelian normal subgroup.
    #[serde(rename = "NOT-MAXIMAL")]
    NotMaximal,
    /// `G/N` is abelian, ending the chain.
    #[serde(rename = "ABELIAN-QUOTIENT")]
    AbelianQuotient,
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).unwrap();
        f.write_str(s.as_str().unwrap())
    }
}

/// Outcome of a level check inside the lattice.
#[derive(Clone, Debug)]
pub(crate) struct LevelCheck {
    pub holds: bool,
    /// A violating irreducible of `G` (unramified), if any.
    pub violating: Option<usize>,
    /// One ramification-1 irreducible per orbit of `Lin(M/K)` (pseudo).
    pub chosen: Vec<usize>,
    /// Orbits of `Lin(M/K)` covered by ramification-1 irreducibles, with their sizes.
    pub covered: usize,
}

/// Precomputed lattice data for decisions about one group.
pub struct Analysis {
    table: CharacterTable,
    normals: Vec<Subgroup>,
    index: HashMap<Vec<usize>, usize>,
    /// Classes of `G` contained in each normal subgroup.
    class_sets: Vec<Vec<usize>>,
    /// `subset[a][b]`: normal `a` is contained in normal `b`.
    subset: Vec<Vec<bool>>,
    derived_of: Vec<usize>,
    comm_with_g: Vec<usize>,
    quotient_cyclic: Vec<bool>,
    derived: usize,
    lcs_bottom: usize,
    /// `|chi_i(c)|^2` per irreducible and class.
    sqnorm: Vec<Vec<Cyclotomic>>,
    /// `chi_i(c) == chi_i(1)`.
    kernel: Vec<Vec<bool>>,
    memo: Mutex<HashMap<(Property, bool, usize), Option<Vec<search::RawLevel>>>>,
}

impl fmt::Debug for Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Analysis")
            .field("order", &self.group().order())
            .field("normal_subgroups", &self.normals.len())
            .finish()
    }
}

impl Analysis {
    pub fn new(g: Arc<FiniteGroup>) -> Result<Analysis> {
        Ok(Analysis::from_table(CharacterTable::compute(g)?))
    }

    pub fn from_table(table: CharacterTable) -> Analysis {
        let g = table.group();
        let normals = g.normal_subgroups().to_vec();
        let index: HashMap<Vec<usize>, usize> =
            normals.iter().enumerate().map(|(i, n)| (n.elements().to_vec(), i)).collect();
        let find = |s: &Subgroup| index[s.elements()];
        let cc = g.conjugacy_classes();
        let class_sets = normals
            .iter()
            .map(|n| (0..cc.len()).filter(|&c| n.contains(cc.representative(c))).collect())
            .collect();
        let subset = normals.iter().map(|a| normals.iter().map(|b| a.is_subset_of(b)).collect()).collect();
        let whole = g.whole();
        let derived_of = normals.iter().map(|n| find(&g.commutator_subgroup(n, n))).collect();
        let comm_with_g = normals.iter().map(|n| find(&g.commutator_subgroup(n, &whole))).collect();
        let quotient_cyclic = normals.iter().map(|n| quotient_is_cyclic(g, n)).collect();
        let derived = find(&g.derived_subgroup());
        let lcs_bottom = find(g.lower_central_series().last().unwrap());
        let sqnorm = table
            .irreducibles()
            .iter()
            .map(|chi| chi.values().iter().map(|v| v * &v.conjugate()).collect())
            .collect();
        let kernel = table
            .irreducibles()
            .iter()
            .map(|chi| chi.values().iter().map(|v| v == chi.degree()).collect())
            .collect();
        Analysis {
            table,
            normals,
            index,
            class_sets,
            subset,
            derived_of,
            comm_with_g,
            quotient_cyclic,
            derived,
            lcs_bottom,
            sqnorm,
            kernel,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn group(&self) -> &FiniteGroup {
        self.table.group()
    }

    pub fn normal_subgroups(&self) -> &[Subgroup] {
        &self.normals
    }

    /// Index of a normal subgroup in [`Analysis::normal_subgroups`].
    pub fn normal_index(&self, n: &Subgroup) -> Result<usize> {
        self.index.get(n.elements()).copied().ok_or(Error::NotNormal)
    }

    fn order_of(&self, k: usize) -> usize {
        self.normals[k].order()
    }

    fn whole(&self) -> usize {
        self.normals.len() - 1
    }

    fn trivial(&self) -> usize {
        0
    }

    /// Smallest normal subgroup containing both.
    fn join(&self, a: usize, b: usize) -> usize {
        (0..self.normals.len())
            .filter(|&c| self.subset[a][c] && self.subset[b][c])
            .min_by_key(|&c| self.order_of(c))
            .unwrap()
    }

    /// Whether `K` is in the kernel of irreducible `i`.
    fn in_kernel(&self, i: usize, k: usize) -> bool {
        self.class_sets[k].iter().all(|&c| self.kernel[i][c])
    }

    /// Irreducibles of `G/K`.
    fn irr_mod(&self, k: usize) -> Vec<usize> {
        (0..self.table.len()).filter(|&i| self.in_kernel(i, k)).collect()
    }

    /// Ramification `e` of irreducible `i` over `M` (`M/K` abelian).
    fn ramification(&self, i: usize, m: usize) -> usize {
        let cc = self.table.classes();
        let mut acc = Cyclotomic::zero();
        for &c in &self.class_sets[m] {
            acc = &acc + &self.sqnorm[i][c].scale(&Rational::from(cc.size(c)));
        }
        let s = acc.to_i64().expect("norm sum is an integer") as usize;
        s / (self.order_of(m) * self.table.degree(i))
    }

    /// Values of irreducible `i` on the classes inside `M`.
    fn restriction_key(&self, i: usize, m: usize) -> Vec<Cyclotomic> {
        self.class_sets[m].iter().map(|&c| self.table.irreducible(i).value(c).clone()).collect()
    }

    fn is_abelian_section(&self, k: usize, m: usize) -> bool {
        self.subset[k][m] && self.subset[self.derived_of[m]][k]
    }

    /// Checks the property for `G/K` over `M/K`.
    pub(crate) fn check_level(&self, k: usize, m: usize, prop: Property) -> LevelCheck {
        let irr = self.irr_mod(k);
        let mut violating = None;
        let mut orbits: Vec<(Vec<Cyclotomic>, usize)> = Vec::new();
        let mut covered = 0;
        for &i in &irr {
            let trivial_on_m = self.in_kernel(i, m);
            let e = self.ramification(i, m);
            if e != 1 {
                if !trivial_on_m && violating.is_none() {
                    violating = Some(i);
                }
                continue;
            }
            let key = self.restriction_key(i, m);
            if !orbits.iter().any(|(o, _)| *o == key) {
                covered += self.table.degree(i);
                orbits.push((key, i));
            }
        }
        let index = self.order_of(m) / self.order_of(k);
        let holds = match prop {
            Property::Unramified => violating.is_none(),
            Property::PseudoUnramified => covered == index,
        };
        LevelCheck { holds, violating, chosen: orbits.into_iter().map(|(_, i)| i).collect(), covered }
    }

    /// Conditions that fire for `G/K` over `M/K`.
    pub(crate) fn flags(&self, k: usize, m: usize) -> Vec<RuleTag> {
        let mut tags = Vec::new();
        let gk_abelian = self.subset[self.derived][k];
        if self.quotient_cyclic[m] {
            tags.push(RuleTag::UnramifiedSufficient);
        }
        let central = self.subset[self.comm_with_g[m]][k];
        if central && !gk_abelian {
            tags.push(RuleTag::UnramifiedImpossible);
        }
        let dk = self.join(self.derived, k);
        let nilpotent = self.subset[self.lcs_bottom][k];
        if nilpotent && !gk_abelian && !(self.subset[dk][m] && dk != m) {
            tags.push(RuleTag::Skip);
        }
        let ck = self.join(self.comm_with_g[m], k);
        if ck != m && ck != dk {
            tags.push(RuleTag::CommutatorNecessary);
        }
        tags
    }

    /// Rule tags for `G` over a normal subgroup `N`.
    pub fn fast_path_flags(&self, n: &Subgroup) -> Result<Vec<RuleTag>> {
        let m = self.normal_index(n)?;
        Ok(self.flags(self.trivial(), m))
    }

    /// Lattice version of the unramified check for `G` over `N`.
    pub fn is_unramified_over(&self, n: &Subgroup) -> Result<bool> {
        let m = self.checked_abelian(n)?;
        Ok(self.check_level(self.trivial(), m, Property::Unramified).holds)
    }

    pub fn is_pseudo_unramified_over(&self, n: &Subgroup) -> Result<bool> {
        let m = self.checked_abelian(n)?;
        Ok(self.check_level(self.trivial(), m, Property::PseudoUnramified).holds)
    }

    fn checked_abelian(&self, n: &Subgroup) -> Result<usize> {
        let m = self.normal_index(n)?;
        if m == self.trivial() {
            return Err(Error::Input("subgroup must be nontrivial".into()));
        }
        if !self.is_abelian_section(self.trivial(), m) {
            return Err(Error::NotAbelian);
        }
        Ok(m)
    }
}

fn quotient_is_cyclic(g: &FiniteGroup, n: &Subgroup) -> bool {
    let index = g.order() / n.order();
    (0..g.order()).any(|x| {
        let mut y = x;
        let mut k = 1;
        while !n.contains(y) {
            y = g.mul(y, x);
            k += 1;
        }
        k == index
    })
}
