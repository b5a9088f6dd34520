use std::cmp::Ordering;

/// A subgroup as a sorted element set plus a membership mask.
#[derive(Clone, Debug)]
pub struct Subgroup {
    elements: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroup {
    pub(crate) fn from_parts(elements: Vec<usize>, mask: Vec<bool>) -> Subgroup {
        Subgroup { elements, mask }
    }

    pub(crate) fn from_sorted(n: usize, elements: Vec<usize>) -> Subgroup {
        let mut mask = vec![false; n];
        for &x in &elements {
            mask[x] = true;
        }
        Subgroup { elements, mask }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.order() <= other.order() && self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let els: Vec<usize> = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        Subgroup::from_sorted(self.mask.len(), els)
    }

    pub(crate) fn mask(&self) -> &[bool] {
        &self.mask
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, o: &Self) -> bool {
        self.elements == o.elements
    }
}

impl Eq for Subgroup {}

impl Ord for Subgroup {
    fn cmp(&self, o: &Self) -> Ordering {
        self.order().cmp(&o.order()).then_with(|| self.elements.cmp(&o.elements))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}
