//! Search for totally (pseudo-)unramified towers, with certificates.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{definition, Analysis, Property, RuleTag};
use crate::chartheory::CharacterTable;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

#[derive(Clone, Debug)]
pub(crate) struct RawLevel {
    pub kernel: usize,
    pub sub: usize,
    pub tags: Vec<RuleTag>,
    pub chosen: Vec<usize>,
}

/// One step `K ⊂ M` of a tower: `G/K` has the property over `M/K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Level {
    /// `K` as elements of `G`.
    pub kernel: Vec<usize>,
    /// `M` as elements of `G`.
    pub subgroup: Vec<usize>,
    pub quotient_order: usize,
    /// `M/K` as elements of the explicit quotient `G/K` (cosets numbered by
    /// their smallest element).
    pub quotient_subgroup: Vec<usize>,
    pub tags: Vec<RuleTag>,
    /// For pseudo checks, one multiplicity-free irreducible of `G` per orbit
    /// of linear characters of `M/K`.
    pub chosen: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    /// The abelian normal subgroup examined, as elements of `G`.
    pub subgroup: Vec<usize>,
    /// An irreducible of `G` ramified over it, when the failure is local.
    pub character: Option<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionCertificate {
    pub property: Property,
    pub group_order: usize,
    pub group_fingerprint: u64,
    pub holds: bool,
    pub chain: Vec<Level>,
    pub counterexample: Option<Counterexample>,
    /// Candidates discarded by each rule before any character check.
    pub pruned: BTreeMap<RuleTag, usize>,
    pub candidates_checked: usize,
}

#[derive(Default)]
struct Stats {
    pruned: BTreeMap<RuleTag, usize>,
    checked: usize,
}

impl Analysis {
    /// Whether `G` is totally unramified, with a tower or a counterexample.
    pub fn totally_unramified(&self) -> Result<DecisionCertificate> {
        self.decide(Property::Unramified)
    }

    pub fn totally_pseudo_unramified(&self) -> Result<DecisionCertificate> {
        self.decide(Property::PseudoUnramified)
    }

    pub fn decide(&self, prop: Property) -> Result<DecisionCertificate> {
        self.decide_with(prop, true)
    }

    /// As [`Analysis::decide`]; `prune = false` tries every abelian section
    /// with the full character check, for cross-checking the shortcuts.
    pub fn decide_with(&self, prop: Property, prune: bool) -> Result<DecisionCertificate> {
        let g = self.group();
        let mut stats = Stats::default();
        let found =
            if g.is_abelian() { Some(vec![]) } else { self.search(prop, self.trivial(), 0, prune, &mut stats)? };
        let holds = found.is_some();
        let chain = found.unwrap_or_default().iter().map(|l| self.export_level(l)).collect::<Result<_>>()?;
        let counterexample = if holds { None } else { self.counterexample(prop) };
        Ok(DecisionCertificate {
            property: prop,
            group_order: g.order(),
            group_fingerprint: g.fingerprint(),
            holds,
            chain,
            counterexample,
            pruned: stats.pruned,
            candidates_checked: stats.checked,
        })
    }

    /// Whether `G/K` is totally pseudo-unramified (`K` a normal index).
    pub(crate) fn totally_from(&self, prop: Property, k: usize) -> Result<bool> {
        Ok(self.search(prop, k, 0, true, &mut Stats::default())?.is_some())
    }

    fn export_level(&self, l: &RawLevel) -> Result<Level> {
        let g = self.group();
        let q = g.quotient(&self.normals[l.kernel])?;
        Ok(Level {
            kernel: self.normals[l.kernel].elements().to_vec(),
            subgroup: self.normals[l.sub].elements().to_vec(),
            quotient_order: q.group().order(),
            quotient_subgroup: q.image(&self.normals[l.sub]).elements().to_vec(),
            tags: l.tags.clone(),
            chosen: l.chosen.clone(),
        })
    }

    fn counterexample(&self, prop: Property) -> Option<Counterexample> {
        let k = self.trivial();
        let m = self.candidates(prop, k, &mut Stats::default(), false).into_iter().next()?;
        let check = self.check_level(k, m, prop);
        let subgroup = self.normals[m].elements().to_vec();
        let order = self.order_of(m);
        Some(if check.holds {
            Counterexample {
                subgroup,
                character: None,
                reason: format!("G is {prop} over this subgroup of order {order} but the quotient is not totally {prop}"),
            }
        } else if prop == Property::Unramified {
            Counterexample {
                subgroup,
                character: check.violating,
                reason: format!("character ramifies over the largest abelian normal subgroup (order {order})"),
            }
        } else {
            Counterexample {
                subgroup,
                character: None,
                reason: format!(
                    "multiplicity-free restrictions reach {} of {order} linear characters of the largest abelian normal subgroup",
                    check.covered
                ),
            }
        })
    }

    /// Abelian sections `M/K`, largest first, after the applicable prunes.
    fn candidates(&self, prop: Property, k: usize, stats: &mut Stats, prune: bool) -> Vec<usize> {
        let mut all: Vec<usize> =
            (0..self.normals.len()).filter(|&m| m != k && self.is_abelian_section(k, m)).collect();
        all.sort_by_key(|&m| (Reverse(self.order_of(m)), m));
        if prop == Property::PseudoUnramified || !prune {
            return all;
        }
        let nilpotent = self.subset[self.lcs_bottom][k];
        let dk = self.join(self.derived, k);
        let mut out = Vec::new();
        for &m in &all {
            let tags = self.flags(k, m);
            if let Some(t) = [RuleTag::Skip, RuleTag::UnramifiedImpossible, RuleTag::CommutatorNecessary]
                .into_iter()
                .find(|t| tags.contains(t))
            {
                *stats.pruned.entry(t).or_default() += 1;
                continue;
            }
            if nilpotent {
                let dominated = all.iter().any(|&o| {
                    o != m && self.subset[m][o] && self.subset[dk][o] && dk != o
                });
                if dominated {
                    *stats.pruned.entry(RuleTag::NotMaximal).or_default() += 1;
                    continue;
                }
            }
            out.push(m);
        }
        out
    }

    fn search(
        &self,
        prop: Property,
        k: usize,
        depth: usize,
        prune: bool,
        stats: &mut Stats,
    ) -> Result<Option<Vec<RawLevel>>> {
        if let Some(hit) = self.memo.lock().unwrap().get(&(prop, prune, k)) {
            return Ok(hit.clone());
        }
        let limit = usize::BITS - self.group().order().leading_zeros();
        if depth > limit as usize {
            return Err(Error::Internal("tower deeper than log2 |G|".into()));
        }
        let result = if k == self.whole() {
            Some(vec![])
        } else if self.subset[self.derived][k] {
            let whole = self.whole();
            let chosen = match prop {
                Property::Unramified => vec![],
                Property::PseudoUnramified => self.check_level(k, whole, prop).chosen,
            };
            Some(vec![RawLevel { kernel: k, sub: whole, tags: vec![RuleTag::AbelianQuotient], chosen }])
        } else {
            let mut found = None;
            for m in self.candidates(prop, k, stats, prune) {
                let tags = self.flags(k, m);
                stats.checked += 1;
                let (holds, chosen) = match prop {
                    Property::Unramified if prune && tags.contains(&RuleTag::UnramifiedSufficient) => (true, vec![]),
                    Property::Unramified => (self.check_level(k, m, prop).holds, vec![]),
                    Property::PseudoUnramified => {
                        let c = self.check_level(k, m, prop);
                        (c.holds, c.chosen)
                    }
                };
                if !holds {
                    continue;
                }
                if let Some(rest) = self.search(prop, m, depth + 1, prune, stats)? {
                    let mut chain = vec![RawLevel { kernel: k, sub: m, tags, chosen }];
                    chain.extend(rest);
                    found = Some(chain);
                    break;
                }
            }
            found
        };
        self.memo.lock().unwrap().insert((prop, prune, k), result.clone());
        Ok(result)
    }
}

impl DecisionCertificate {
    /// Re-checks the certificate from scratch: each level is verified by
    /// building the explicit quotient `G/K`, its character table, and
    /// restricting to `M/K`.
    pub fn replay(&self, g: &Arc<FiniteGroup>) -> Result<bool> {
        if g.fingerprint() != self.group_fingerprint || g.order() != self.group_order {
            return Err(Error::GroupMismatch);
        }
        if !self.holds {
            return self.replay_counterexample(g);
        }
        if self.chain.is_empty() {
            return Ok(g.is_abelian());
        }
        let mut kernel = vec![0usize];
        for level in &self.chain {
            if level.kernel != kernel {
                return Ok(false);
            }
            let k = g.subgroup_from_elements(&level.kernel)?;
            let m = g.subgroup_from_elements(&level.subgroup)?;
            if !k.is_subset_of(&m) || k == m {
                return Ok(false);
            }
            let q = g.quotient(&k)?;
            let qm = q.group().subgroup_from_elements(&level.quotient_subgroup)?;
            if qm != q.image(&m) {
                return Ok(false);
            }
            let qt = CharacterTable::compute(q.group_arc().clone())?;
            let verdict = match self.property {
                Property::Unramified => definition::unramified_over(&qt, &qm),
                Property::PseudoUnramified => definition::pseudo_unramified_over(&qt, &qm),
            };
            match verdict {
                Ok(v) if v.holds => {}
                Ok(_) | Err(Error::NotAbelian) | Err(Error::NotNormal) => return Ok(false),
                Err(e) => return Err(e),
            }
            kernel = level.subgroup.clone();
        }
        Ok(kernel.len() == g.order())
    }

    fn replay_counterexample(&self, g: &Arc<FiniteGroup>) -> Result<bool> {
        let Some(ce) = &self.counterexample else { return Ok(true) };
        let Some(chi) = ce.character else { return Ok(true) };
        let table = CharacterTable::compute(g.clone())?;
        let n = g.subgroup_from_elements(&ce.subgroup)?;
        let v = definition::unramified_over(&table, &n)?;
        if v.holds {
            return Ok(false);
        }
        // The witness must itself be ramified, not just some character.
        let nt = crate::chartheory::SubgroupTable::new(g, &n)?;
        let r = crate::chartheory::restrict(&table, table.irreducible(chi), &nt)?;
        let mults = nt.table().decompose(&r)?;
        Ok(mults.iter().any(|&x| x > 1) && mults.iter().skip(1).any(|&x| x > 0))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<DecisionCertificate> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Display for DecisionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.holds { "yes" } else { "no" };
        writeln!(f, "group order: {}", self.group_order)?;
        writeln!(f, "totally {}: {verdict}", self.property)?;
        for (i, l) in self.chain.iter().enumerate() {
            write!(
                f,
                "  level {i}: |K| = {}, |M| = {}, |G/K| = {}, M/K = {:?}",
                l.kernel.len(),
                l.subgroup.len(),
                l.quotient_order,
                l.quotient_subgroup
            )?;
            if !l.tags.is_empty() {
                let t: Vec<String> = l.tags.iter().map(|t| t.to_string()).collect();
                write!(f, " [{}]", t.join(", "))?;
            }
            if !l.chosen.is_empty() {
                write!(f, " chosen {:?}", l.chosen)?;
            }
            writeln!(f)?;
        }
        if let Some(ce) = &self.counterexample {
            write!(f, "  counterexample: |N| = {}", ce.subgroup.len())?;
            if let Some(c) = ce.character {
                write!(f, ", character {c}")?;
            }
            writeln!(f, ": {}", ce.reason)?;
        }
        if !self.pruned.is_empty() {
            let p: Vec<String> = self.pruned.iter().map(|(t, n)| format!("{t} x{n}")).collect();
            writeln!(f, "  pruned: {}", p.join(", "))?;
        }
        Ok(())
    }
}
