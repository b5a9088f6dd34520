use super::FiniteGroup;

/// Conjugacy classes in canonical order: by the order of the representative,
/// then class size, then smallest element. The representative of a class is
/// its smallest element, so the identity class always comes first.
#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    classes: Vec<Vec<usize>>,
    class_of: Vec<u32>,
    orders: Vec<usize>,
    inverse_class: Vec<usize>,
}

impl ConjugacyClasses {
    pub(crate) fn compute(g: &FiniteGroup) -> ConjugacyClasses {
        let n = g.order();
        let mut seen = vec![false; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            seen[x] = true;
            let mut orbit = vec![x];
            let mut i = 0;
            while i < orbit.len() {
                let y = orbit[i];
                for &s in g.generators() {
                    let z = g.conj(y, s);
                    if !seen[z] {
                        seen[z] = true;
                        orbit.push(z);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            classes.push(orbit);
        }
        classes.sort_by_key(|c| (g.element_order(c[0]), c.len(), c[0]));
        let mut class_of = vec![0u32; n];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = i as u32;
            }
        }
        let orders = classes.iter().map(|c| g.element_order(c[0])).collect();
        let inverse_class = classes.iter().map(|c| class_of[g.inv(c[0])] as usize).collect();
        ConjugacyClasses { classes, class_of, orders, inverse_class }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn representative(&self, i: usize) -> usize {
        self.classes[i][0]
    }

    pub fn size(&self, i: usize) -> usize {
        self.classes[i].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x] as usize
    }

    pub fn rep_order(&self, i: usize) -> usize {
        self.orders[i]
    }

    pub fn inverse_class(&self, i: usize) -> usize {
        self.inverse_class[i]
    }

    /// Class of `rep_i^k`.
    pub fn power_class(&self, g: &FiniteGroup, i: usize, k: i64) -> usize {
        self.class_of(g.pow(self.representative(i), k))
    }
}
