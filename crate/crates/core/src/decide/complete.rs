//! Completeness of a representation, given by its multiplicities over the
//! irreducibles of `G`.
//!
//! A representation `pi` of `G/K` is complete when some nontrivial abelian
//! normal `M/K` admits a split `pi = pi_B + pi_J` where `pi_B` restricted to
//! `M/K` is the sum of all nontrivial linear characters, and either `M = G`
//! or the part of `Q(pi)` trivial on `M` is complete for `G/M`. Here
//! `Q(pi) = pi + pi_B^2 + 2 pi_B pi_J + pi_B^2 pi` as characters.

use std::cmp::Reverse;
use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::{Analysis, Property};
use crate::chartheory::{CharacterTable, ClassFunction};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CompletenessOptions {
    /// Discard `M` with `G/M` not totally pseudo-unramified, and stop early
    /// when `G/K` itself is not.
    pub prunes: bool,
    /// Only accept splits stable under complex conjugation.
    pub real: bool,
    pub node_budget: usize,
}

impl Default for CompletenessOptions {
    fn default() -> Self {
        CompletenessOptions { prunes: true, real: false, node_budget: 200_000 }
    }
}

/// One step of a completeness witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompleteLevel {
    pub kernel: Vec<usize>,
    pub subgroup: Vec<usize>,
    /// Multiplicities of `pi` over the irreducibles of `G`.
    pub pi: Vec<usize>,
    /// Irreducibles of `G` making up `pi_B`, one per orbit.
    pub basic: Vec<usize>,
    /// Multiplicities of the part of `Q(pi)` trivial on `M`.
    pub next: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompletenessReport {
    pub complete: bool,
    pub levels: Vec<CompleteLevel>,
    pub reason: Option<String>,
    pub nodes: usize,
}

impl fmt::Display for CompletenessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "complete: {}", if self.complete { "yes" } else { "no" })?;
        for (i, l) in self.levels.iter().enumerate() {
            writeln!(
                f,
                "  level {i}: |K| = {}, |M| = {}, pi = {:?}, basic = {:?}",
                l.kernel.len(),
                l.subgroup.len(),
                l.pi,
                l.basic
            )?;
        }
        if let Some(r) = &self.reason {
            writeln!(f, "  reason: {r}")?;
        }
        writeln!(f, "  nodes: {}", self.nodes)
    }
}

/// `Q(pi) = pi + pi_B^2 + 2 pi_B pi_J + pi_B^2 pi` for `pi` given by
/// multiplicities and `pi_B` by a list of irreducibles.
pub fn qpi_character(table: &CharacterTable, pi: &[usize], basic: &[usize]) -> Result<ClassFunction> {
    if pi.len() != table.len() || basic.iter().any(|&b| b >= table.len()) {
        return Err(Error::Input("multiplicity vector does not match the character table".into()));
    }
    let mut b_mults = vec![0usize; table.len()];
    for &b in basic {
        b_mults[b] += 1;
    }
    if b_mults.iter().zip(pi).any(|(b, p)| b > p) {
        return Err(Error::Input("basic part is not a subrepresentation".into()));
    }
    let rho = table.compose(pi);
    let b = table.compose(&b_mults);
    let two = Cyclotomic::from_int(2);
    let vals = (0..rho.values().len())
        .map(|c| {
            let r = rho.value(c);
            let bv = b.value(c);
            let j = r - bv;
            let b2 = bv * bv;
            &(&(r + &b2) + &(&two * &(bv * &j))) + &(&b2 * r)
        })
        .collect();
    table.class_function(vals)
}

struct Raw {
    kernel: usize,
    sub: usize,
    pi: Vec<usize>,
    basic: Vec<usize>,
    next: Vec<usize>,
}

struct Search<'a> {
    a: &'a Analysis,
    opts: &'a CompletenessOptions,
    nodes: usize,
    failed: HashMap<(usize, Vec<usize>), ()>,
}

impl Analysis {
    /// Decides whether the representation with the given multiplicities over
    /// the irreducibles of `G` is complete.
    pub fn is_complete(&self, pi: &[usize], opts: &CompletenessOptions) -> Result<CompletenessReport> {
        if pi.len() != self.table.len() {
            return Err(Error::Input(format!(
                "expected {} multiplicities, got {}",
                self.table.len(),
                pi.len()
            )));
        }
        if opts.real && (0..pi.len()).any(|i| pi[i] != pi[self.table.conjugate_index(i)]) {
            return Err(Error::Input("representation is not closed under complex conjugation".into()));
        }
        let mut s = Search { a: self, opts, nodes: 0, failed: HashMap::new() };
        if opts.prunes && !self.totally_from(Property::PseudoUnramified, self.trivial())? {
            return Ok(CompletenessReport {
                complete: false,
                levels: vec![],
                reason: Some("group is not totally pseudo-unramified".into()),
                nodes: 0,
            });
        }
        let found = s.run(self.trivial(), pi.to_vec())?;
        let complete = found.is_some();
        let levels = found
            .unwrap_or_default()
            .into_iter()
            .map(|r| CompleteLevel {
                kernel: self.normals[r.kernel].elements().to_vec(),
                subgroup: self.normals[r.sub].elements().to_vec(),
                pi: r.pi,
                basic: r.basic,
                next: r.next,
            })
            .collect();
        let reason = (!complete).then(|| "no abelian normal subgroup admits a complete split".to_string());
        Ok(CompletenessReport { complete, levels, reason, nodes: s.nodes })
    }

    /// Completeness of a character given by its values.
    pub fn is_complete_character(&self, chi: &ClassFunction, opts: &CompletenessOptions) -> Result<CompletenessReport> {
        let mults = self.table.decompose(chi)?;
        self.is_complete(&mults, opts)
    }
}

impl Search<'_> {
    fn run(&mut self, k: usize, pi: Vec<usize>) -> Result<Option<Vec<Raw>>> {
        self.nodes += 1;
        if self.nodes > self.opts.node_budget {
            return Err(Error::Resource(format!("completeness search exceeded {} nodes", self.opts.node_budget)));
        }
        let a = self.a;
        if k == a.whole() {
            return Ok(Some(vec![]));
        }
        let key = (k, pi.clone());
        if self.failed.contains_key(&key) {
            return Ok(None);
        }
        let mut cands: Vec<usize> =
            (0..a.normals.len()).filter(|&m| m != k && a.is_abelian_section(k, m)).collect();
        cands.sort_by_key(|&m| (Reverse(a.order_of(m)), m));
        for m in cands {
            if self.opts.prunes && !a.totally_from(Property::PseudoUnramified, m)? {
                continue;
            }
            let Some(options) = self.orbit_options(k, m, &pi) else { continue };
            let mut idx = vec![0usize; options.len()];
            loop {
                let basic: Vec<usize> = {
                    let mut b: Vec<usize> = idx.iter().zip(&options).flat_map(|(&i, o)| o[i].clone()).collect();
                    b.sort_unstable();
                    b
                };
                let next = if m == a.whole() { vec![0; pi.len()] } else { self.next_pi(m, &pi, &basic)? };
                let rest = if m == a.whole() { Some(vec![]) } else { self.run(m, next.clone())? };
                if let Some(rest) = rest {
                    let mut out = vec![Raw { kernel: k, sub: m, pi: pi.clone(), basic, next }];
                    out.extend(rest);
                    return Ok(Some(out));
                }
                // advance the odometer
                let mut p = 0;
                while p < idx.len() {
                    idx[p] += 1;
                    if idx[p] < options[p].len() {
                        break;
                    }
                    idx[p] = 0;
                    p += 1;
                }
                if p == idx.len() {
                    break;
                }
            }
        }
        self.failed.insert(key, ());
        Ok(None)
    }

    /// Per nontrivial orbit of `Lin(M/K)`, the admissible choices of basic
    /// constituents (a pair of conjugates in real mode). `None` when the
    /// constituents of `pi` do not cover every nontrivial linear character.
    fn orbit_options(&self, k: usize, m: usize, pi: &[usize]) -> Option<Vec<Vec<Vec<usize>>>> {
        let a = self.a;
        let t = &a.table;
        let mut orbits: Vec<(Vec<Cyclotomic>, Vec<usize>)> = Vec::new();
        for i in a.irr_mod(k) {
            if pi[i] == 0 || a.in_kernel(i, m) || a.ramification(i, m) != 1 {
                continue;
            }
            let key = a.restriction_key(i, m);
            match orbits.iter_mut().find(|(o, _)| *o == key) {
                Some((_, v)) => v.push(i),
                None => orbits.push((key, vec![i])),
            }
        }
        let covered: usize = orbits.iter().map(|(_, v)| t.degree(v[0])).sum();
        if covered + 1 != a.order_of(m) / a.order_of(k) {
            return None;
        }
        if !self.opts.real {
            return Some(orbits.into_iter().map(|(_, v)| v.into_iter().map(|i| vec![i]).collect()).collect());
        }
        let mut out = Vec::new();
        let mut done = vec![false; orbits.len()];
        for o in 0..orbits.len() {
            if done[o] {
                continue;
            }
            done[o] = true;
            let conj_key: Vec<Cyclotomic> = orbits[o].0.iter().map(|x| x.conjugate()).collect();
            let partner = orbits.iter().position(|(key, _)| *key == conj_key)?;
            if partner == o {
                let opts: Vec<Vec<usize>> = orbits[o]
                    .1
                    .iter()
                    .filter(|&&i| t.conjugate_index(i) == i && t.indicator(i) == 1)
                    .map(|&i| vec![i])
                    .collect();
                if opts.is_empty() {
                    return None;
                }
                out.push(opts);
            } else {
                done[partner] = true;
                out.push(orbits[o].1.iter().map(|&i| vec![i, t.conjugate_index(i)]).collect());
            }
        }
        Some(out)
    }

    fn next_pi(&self, m: usize, pi: &[usize], basic: &[usize]) -> Result<Vec<usize>> {
        let a = self.a;
        let q = qpi_character(&a.table, pi, basic)?;
        let mut out = vec![0; pi.len()];
        for i in a.irr_mod(m) {
            let c = a.table.inner_product(&q, a.table.irreducible(i))?;
            out[i] = c.to_i64().filter(|&x| x >= 0).ok_or_else(|| Error::Internal("Q(pi) is not a character".into()))?
                as usize;
        }
        Ok(out)
    }
}
