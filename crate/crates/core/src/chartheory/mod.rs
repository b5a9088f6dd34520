//! Exact character tables and the standard operations on class functions.

mod dixon;
mod ops;
pub mod representation;

use std::sync::Arc;

use serde::Serialize;

pub use dixon::choose_prime;
pub use ops::{deflate, induce, inertia_subgroup, inflate, irr_over, restrict, tensor, SubgroupTable};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{ConjugacyClasses, FiniteGroup, Subgroup};
use crate::rational::Rational;

/// A class function, stored as one value per conjugacy class (canonical class
/// order) together with the fingerprint of the group it lives on.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassFunction {
    group: u64,
    values: Vec<Cyclotomic>,
}

impl ClassFunction {
    pub fn new(group: &FiniteGroup, values: Vec<Cyclotomic>) -> Result<ClassFunction> {
        if values.len() != group.conjugacy_classes().len() {
            return Err(Error::Input(format!(
                "class function needs {} values, got {}",
                group.conjugacy_classes().len(),
                values.len()
            )));
        }
        Ok(ClassFunction { group: group.fingerprint(), values })
    }

    pub(crate) fn raw(group: u64, values: Vec<Cyclotomic>) -> ClassFunction {
        ClassFunction { group, values }
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &Cyclotomic {
        &self.values[class]
    }

    pub fn degree(&self) -> &Cyclotomic {
        &self.values[0]
    }

    pub fn group_fingerprint(&self) -> u64 {
        self.group
    }

    fn check(&self, o: &ClassFunction) -> Result<()> {
        if self.group != o.group || self.values.len() != o.values.len() {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &ClassFunction) -> Result<ClassFunction> {
        self.check(o)?;
        Ok(ClassFunction::raw(self.group, self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, o: &ClassFunction) -> Result<ClassFunction> {
        self.check(o)?;
        Ok(ClassFunction::raw(self.group, self.values.iter().zip(&o.values).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, c: &Cyclotomic) -> ClassFunction {
        ClassFunction::raw(self.group, self.values.iter().map(|a| a * c).collect())
    }

    pub fn conjugate(&self) -> ClassFunction {
        ClassFunction::raw(self.group, self.values.iter().map(|a| a.conjugate()).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

pub struct CharacterTable {
    group: Arc<FiniteGroup>,
    irr: Vec<ClassFunction>,
    degrees: Vec<usize>,
    exponent: u32,
}

impl std::fmt::Debug for CharacterTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CharacterTable")
            .field("order", &self.group.order())
            .field("degrees", &self.degrees)
            .finish()
    }
}

impl CharacterTable {
    /// Computes the table. Irreducibles are ordered by degree, then by the
    /// coefficient vectors of their values, except that the trivial
    /// character always comes first.
    pub fn compute(group: Arc<FiniteGroup>) -> Result<CharacterTable> {
        let (mut rows, exponent) = dixon::irreducible_values(&group)?;
        rows.sort_by(|a, b| {
            let da = a[0].to_i64().unwrap();
            let db = b[0].to_i64().unwrap();
            let ta = a.iter().all(|v| v.is_one());
            let tb = b.iter().all(|v| v.is_one());
            da.cmp(&db).then(tb.cmp(&ta)).then_with(|| {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.cmp_coeffs(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
        });
        let fp = group.fingerprint();
        let degrees = rows.iter().map(|r| r[0].to_i64().unwrap() as usize).collect();
        let irr = rows.into_iter().map(|v| ClassFunction::raw(fp, v)).collect();
        Ok(CharacterTable { group, irr, degrees, exponent })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn classes(&self) -> &ConjugacyClasses {
        self.group.conjugacy_classes()
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irr
    }

    pub fn irreducible(&self, i: usize) -> &ClassFunction {
        &self.irr[i]
    }

    pub fn len(&self) -> usize {
        self.irr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irr.is_empty()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Exponent of the group; every value lies in `Q(zeta_exponent)`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn trivial(&self) -> &ClassFunction {
        &self.irr[0]
    }

    pub fn class_function(&self, values: Vec<Cyclotomic>) -> Result<ClassFunction> {
        ClassFunction::new(&self.group, values)
    }

    /// `(1/|G|) sum_g a(g) conj(b(g))`.
    pub fn inner_product(&self, a: &ClassFunction, b: &ClassFunction) -> Result<Cyclotomic> {
        if a.group != self.group.fingerprint() {
            return Err(Error::GroupMismatch);
        }
        a.check(b)?;
        let cc = self.classes();
        let mut acc = Cyclotomic::zero();
        for (i, (x, y)) in a.values.iter().zip(&b.values).enumerate() {
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let t = x * &y.conjugate();
            acc = &acc + &t.scale(&Rational::from(cc.size(i)));
        }
        Ok(acc.scale(&Rational::new(1, self.group.order() as i64)))
    }

    /// Multiplicities of the irreducibles in a character.
    pub fn decompose(&self, chi: &ClassFunction) -> Result<Vec<usize>> {
        self.irr
            .iter()
            .map(|psi| {
                let c = self.inner_product(chi, psi)?;
                match c.to_i64() {
                    Some(k) if k >= 0 => Ok(k as usize),
                    _ => Err(Error::NotCharacter(format!("multiplicity {c} is not a nonnegative integer"))),
                }
            })
            .collect()
    }

    /// `sum_i mult_i chi_i`.
    pub fn compose(&self, mults: &[usize]) -> ClassFunction {
        let mut vals = vec![Cyclotomic::zero(); self.classes().len()];
        for (chi, &m) in self.irr.iter().zip(mults) {
            if m == 0 {
                continue;
            }
            let s = Rational::from(m);
            for (v, x) in vals.iter_mut().zip(&chi.values) {
                *v = &*v + &x.scale(&s);
            }
        }
        ClassFunction::raw(self.group.fingerprint(), vals)
    }

    /// Kernel `{g : chi(g) = chi(1)}` of a character.
    pub fn kernel(&self, chi: &ClassFunction) -> Subgroup {
        let cc = self.classes();
        let d = chi.degree();
        let els: Vec<usize> = (0..self.group.order()).filter(|&g| chi.value(cc.class_of(g)) == d).collect();
        self.group.subgroup_from_elements(&els).expect("kernel is a subgroup")
    }

    /// Whether `N` lies in the kernel of `chi`.
    pub fn is_trivial_on(&self, chi: &ClassFunction, n: &Subgroup) -> bool {
        let cc = self.classes();
        let d = chi.degree();
        n.elements().iter().all(|&g| chi.value(cc.class_of(g)) == d)
    }

    /// Index of the irreducible equal to the complex conjugate of `chi_i`.
    pub fn conjugate_index(&self, i: usize) -> usize {
        let c = self.irr[i].conjugate();
        self.irr.iter().position(|x| *x == c).expect("conjugate of an irreducible is irreducible")
    }

    /// Frobenius-Schur indicator `(1/|G|) sum_g chi_i(g^2)`.
    pub fn indicator(&self, i: usize) -> i64 {
        let g = &self.group;
        let cc = self.classes();
        let mut acc = Cyclotomic::zero();
        for x in 0..g.order() {
            acc = &acc + self.irr[i].value(cc.class_of(g.mul(x, x)));
        }
        acc.scale(&Rational::new(1, g.order() as i64)).to_i64().expect("indicator is an integer")
    }

    pub fn export(&self) -> TableExport {
        let cc = self.classes();
        TableExport {
            order: self.group.order(),
            classes: (0..cc.len())
                .map(|i| ClassExport {
                    representative: cc.representative(i),
                    label: self.group.label(cc.representative(i)),
                    size: cc.size(i),
                    element_order: cc.rep_order(i),
                })
                .collect(),
            degrees: self.degrees.clone(),
            characters: self.irr.iter().map(|c| c.values.iter().map(|v| v.reduce_modulus()).collect()).collect(),
        }
    }
}

#[derive(Serialize, Debug)]
pub struct ClassExport {
    pub representative: usize,
    pub label: String,
    pub size: usize,
    pub element_order: usize,
}

#[derive(Serialize, Debug)]
pub struct TableExport {
    pub order: usize,
    pub classes: Vec<ClassExport>,
    pub degrees: Vec<usize>,
    pub characters: Vec<Vec<Cyclotomic>>,
}

impl std::fmt::Display for CharacterTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cc = self.classes();
        let header: Vec<String> = (0..cc.len())
            .map(|i| format!("{}[{}]", self.group.label(cc.representative(i)), cc.size(i)))
            .collect();
        writeln!(f, "order {}; classes: {}", self.group.order(), header.join("  "))?;
        for (k, chi) in self.irr.iter().enumerate() {
            let vals: Vec<String> = chi.values.iter().map(|v| v.to_string()).collect();
            writeln!(f, "X{}: {}", k + 1, vals.join(", "))?;
        }
        Ok(())
    }
}
