use std::collections::HashSet;

use super::{FiniteGroup, Subgroup};

/// All normal subgroups, sorted by order then element set.
///
/// Every normal subgroup is a product of normal closures of conjugacy
/// classes, so closing `{1}` under "multiply by one class closure" reaches
/// all of them.
pub(crate) fn normal_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let cc = g.conjugacy_classes();
    let mut found: Vec<Subgroup> = vec![g.trivial()];
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(vec![0]);
    let mut i = 0;
    while i < found.len() {
        let x = found[i].clone();
        for c in 1..cc.len() {
            if x.contains(cc.representative(c)) {
                continue;
            }
            let j = join_with_class(g, &x, cc.class(c));
            if seen.insert(j.elements().to_vec()) {
                found.push(j);
            }
        }
        i += 1;
    }
    found.sort();
    found
}

/// `X * <K>` for a normal subgroup `X` and a conjugacy class `K`, built one
/// coset of `X` at a time.
fn join_with_class(g: &FiniteGroup, x: &Subgroup, class: &[usize]) -> Subgroup {
    let mut mask = x.mask().to_vec();
    let mut elements: Vec<usize> = x.elements().to_vec();
    let mut reps = vec![0usize];
    let mut i = 0;
    while i < reps.len() {
        let r = reps[i];
        for &c in class {
            let y = g.mul(r, c);
            if mask[y] {
                continue;
            }
            for &h in x.elements() {
                let z = g.mul(y, h);
                mask[z] = true;
                elements.push(z);
            }
            reps.push(y);
        }
        i += 1;
    }
    elements.sort_unstable();
    Subgroup::from_parts(elements, mask)
}
