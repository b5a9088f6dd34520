//! Matrix representations of a finite group over cyclotomic fields.

use serde::Deserialize;

use super::{CharacterTable, ClassFunction};
use crate::cyclotomic::Cyclotomic;
use crate::error::{input, Error, Result};
use crate::group::FiniteGroup;
use crate::matrix::Matrix;

/// A homomorphism `G -> GL_d`, stored as the image of every element.
#[derive(Clone, Debug)]
pub struct Representation {
    dim: usize,
    images: Vec<Matrix>,
    generators: Vec<Matrix>,
}

impl Representation {
    /// Extends generator images (positional with `g.generators()`) to the
    /// whole group, checking that the result is a homomorphism.
    pub fn from_generators(g: &FiniteGroup, dim: usize, gens: Vec<Matrix>) -> Result<Representation> {
        if gens.len() != g.generators().len() {
            return input(format!(
                "representation has {} generator images, group has {} generators",
                gens.len(),
                g.generators().len()
            ));
        }
        for m in &gens {
            if m.rows() != dim || m.cols() != dim {
                return input(format!("generator image is not {dim} x {dim}"));
            }
        }
        let mut images: Vec<Option<Matrix>> = vec![None; g.order()];
        images[0] = Some(Matrix::identity(dim));
        let mut queue = vec![0usize];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for (s, m) in g.generators().iter().zip(&gens) {
                let y = g.mul(x, *s);
                let prod = images[x].as_ref().unwrap().mul(m);
                match &images[y] {
                    Some(existing) => {
                        if *existing != prod {
                            return input("generator images do not define a homomorphism");
                        }
                    }
                    None => {
                        images[y] = Some(prod);
                        queue.push(y);
                    }
                }
            }
            i += 1;
        }
        if queue.len() != g.order() {
            return input("group generators do not generate the group");
        }
        Ok(Representation { dim, images: images.into_iter().map(Option::unwrap).collect(), generators: gens })
    }

    /// The natural permutation representation, `rho(g) e_j = e_{g(j)}`.
    pub fn permutation(g: &FiniteGroup) -> Result<Representation> {
        let perms = g.permutations().ok_or_else(|| Error::Input("group does not act on points".into()))?;
        let d = perms[0].degree();
        let perm_matrix = |p: &crate::group::Permutation| {
            Matrix::from_fn(d, d, |i, j| Cyclotomic::from_int(i64::from(p.apply(j) == i)))
        };
        let gens = g.generators().iter().map(|&s| perm_matrix(&perms[s])).collect();
        let images = perms.iter().map(perm_matrix).collect();
        Ok(Representation { dim: d, images, generators: gens })
    }

    /// The natural permutation representation minus the trivial summand, on
    /// the basis `e_i - e_d` for `i < d`.
    pub fn standard(g: &FiniteGroup) -> Result<Representation> {
        let perms = g.permutations().ok_or_else(|| Error::Input("group does not act on points".into()))?;
        let d = perms[0].degree();
        if d < 2 {
            return Err(Error::Input("the standard representation needs at least two points".into()));
        }
        let last = d - 1;
        let mat = |p: &crate::group::Permutation| {
            Matrix::from_fn(last, last, |i, j| {
                let plus = i64::from(p.apply(j) == i);
                let minus = i64::from(p.apply(last) == i);
                Cyclotomic::from_int(plus - minus)
            })
        };
        let gens = g.generators().iter().map(|&s| mat(&perms[s])).collect();
        let images = perms.iter().map(mat).collect();
        Ok(Representation { dim: last, images, generators: gens })
    }

    /// The left regular representation.
    pub fn regular(g: &FiniteGroup) -> Representation {
        let n = g.order();
        let mat = |x: usize| Matrix::from_fn(n, n, |i, j| Cyclotomic::from_int(i64::from(g.mul(x, j) == i)));
        let images: Vec<Matrix> = (0..n).map(mat).collect();
        let generators = g.generators().iter().map(|&s| images[s].clone()).collect();
        Representation { dim: n, images, generators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image(&self, g: usize) -> &Matrix {
        &self.images[g]
    }

    pub fn images(&self) -> &[Matrix] {
        &self.images
    }

    pub fn generator_images(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn character(&self, table: &CharacterTable) -> ClassFunction {
        let cc = table.classes();
        let vals = (0..cc.len()).map(|c| self.images[cc.representative(c)].trace()).collect();
        ClassFunction::raw(table.group().fingerprint(), vals)
    }

    /// Whether every matrix has real entries.
    pub fn is_real(&self) -> bool {
        self.generators.iter().all(|m| m.is_real())
    }
}

/// Character of the regular representation, computed without matrices.
pub fn regular_character(table: &CharacterTable) -> ClassFunction {
    let g = table.group();
    let vals = (0..table.classes().len())
        .map(|c| Cyclotomic::from_int(if table.classes().representative(c) == g.identity() { g.order() as i64 } else { 0 }))
        .collect();
    ClassFunction::raw(g.fingerprint(), vals)
}

/// Character of the natural permutation action (fixed-point counts).
pub fn permutation_character(table: &CharacterTable) -> Result<ClassFunction> {
    let g = table.group();
    let perms = g.permutations().ok_or_else(|| Error::Input("group does not act on points".into()))?;
    let vals = (0..table.classes().len())
        .map(|c| {
            let p = &perms[table.classes().representative(c)];
            Cyclotomic::from_int((0..p.degree()).filter(|&j| p.apply(j) == j).count() as i64)
        })
        .collect();
    Ok(ClassFunction::raw(g.fingerprint(), vals))
}

/// Permutation character minus the trivial character.
pub fn standard_character(table: &CharacterTable) -> Result<ClassFunction> {
    permutation_character(table)?.sub(table.trivial())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixSpec {
    Rows(Vec<Vec<Cyclotomic>>),
    Flat(Vec<Cyclotomic>),
}

/// JSON description `{"dim": d, "m": m, "generators": [...]}` where each
/// generator is a list of rows or a flat row-major list of entries.
#[derive(Deserialize)]
pub struct RepresentationSpec {
    pub dim: usize,
    #[serde(default)]
    pub m: Option<u32>,
    generators: Vec<MatrixSpec>,
    #[serde(default)]
    pub variables: Option<Vec<String>>,
}

impl RepresentationSpec {
    pub fn from_json(text: &str) -> Result<RepresentationSpec> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self, g: &FiniteGroup) -> Result<Representation> {
        let d = self.dim;
        let mut mats = Vec::new();
        for spec in &self.generators {
            let rows = match spec {
                MatrixSpec::Rows(r) => r.clone(),
                MatrixSpec::Flat(f) => {
                    if f.len() != d * d {
                        return input(format!("flat matrix needs {} entries", d * d));
                    }
                    f.chunks(d).map(|c| c.to_vec()).collect()
                }
            };
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return input(format!("generator matrix is not {d} x {d}"));
            }
            if let Some(m) = self.m {
                if rows.iter().flatten().any(|x| m % x.reduce_modulus().modulus() != 0) {
                    return input(format!("matrix entry does not lie in Q(zeta_{m})"));
                }
            }
            mats.push(Matrix::from_rows(rows));
        }
        Representation::from_generators(g, d, mats)
    }
}
