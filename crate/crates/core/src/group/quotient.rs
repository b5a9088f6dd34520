use std::sync::Arc;

use super::{FiniteGroup, Provenance, Subgroup};
use crate::error::{Error, Result};

/// `G/N` with the projection from `G`. Coset `i` has smallest element
/// `representatives()[i]`; cosets are numbered by that smallest element, so
/// the kernel is coset 0.
#[derive(Debug)]
pub struct QuotientGroup {
    group: Arc<FiniteGroup>,
    kernel: Subgroup,
    projection: Vec<u32>,
    reps: Vec<usize>,
}

impl QuotientGroup {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    #[inline]
    pub fn project(&self, g: usize) -> usize {
        self.projection[g] as usize
    }

    pub fn projection(&self) -> &[u32] {
        &self.projection
    }

    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    /// Full preimage in `G` of a subgroup of the quotient.
    pub fn preimage(&self, h: &Subgroup) -> Subgroup {
        let n = self.projection.len();
        let els: Vec<usize> = (0..n).filter(|&g| h.contains(self.project(g))).collect();
        Subgroup::from_sorted(n, els)
    }

    /// Image in the quotient of a subgroup of `G`.
    pub fn image(&self, h: &Subgroup) -> Subgroup {
        let mut els: Vec<usize> = h.elements().iter().map(|&g| self.project(g)).collect();
        els.sort_unstable();
        els.dedup();
        Subgroup::from_sorted(self.group.order(), els)
    }
}

impl FiniteGroup {
    pub fn quotient(&self, n: &Subgroup) -> Result<QuotientGroup> {
        if n.elements().last().is_some_and(|&x| x >= self.order()) || !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let mut projection = vec![u32::MAX; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if projection[g] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(g);
            for &k in n.elements() {
                projection[self.mul(g, k)] = c;
            }
        }
        let m = reps.len();
        let mut mul = vec![0u32; m * m];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                mul[i * m + j] = projection[self.mul(a, b)];
            }
        }
        let mut gens: Vec<usize> = self.generators().iter().map(|&g| projection[g] as usize).collect();
        gens.sort_unstable();
        gens.dedup();
        gens.retain(|&g| g != 0);
        let labels = reps.iter().map(|&r| format!("{}N", self.label(r))).collect();
        let group = FiniteGroup::from_parts(m, mul, gens, Provenance::Derived("quotient".into()))
            .with_labels(labels);
        Ok(QuotientGroup { group: Arc::new(group), kernel: n.clone(), projection, reps })
    }
}
