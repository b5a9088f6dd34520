//! Generators for the ring of invariants of a finite group acting linearly
//! on the free algebra `C<x_1, ..., x_n>`.
//!
//! Two routes are available. For complete representations the generators
//! are built level by level along a completeness witness: at each level the
//! variables are split into eigenvectors `b_chi` (one per nontrivial
//! character of the abelian section) and `v_k`, the invariants of the section
//! are the words `b_chi b_mu b_(chi mu)^-1` and `b_theta v_k b_(theta mu_k)^-1`,
//! and the remaining quotient acts on these monomially. For abelian groups
//! that are not complete, the invariants are the kernel of the map from the
//! free group on the eigenvectors to the character group, given by Schreier
//! words.
//!
//! With real coefficients each level is realified: a generator `w` and its
//! conjugate `w'` are replaced by `w + w'` and `i (w - w')`.

mod expr;
mod verify;

#[cfg(test)]
mod tests;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use expr::{evaluate, Evaluator, Expr, NcPoly, Node};
pub use verify::{verify_invariance, InvarianceReport, VerifyOptions};

use crate::chartheory::representation::Representation;
use crate::chartheory::{CharacterTable, SubgroupTable};
use crate::cyclotomic::Cyclotomic;
use crate::decide::{Analysis, CompleteLevel, CompletenessOptions};
use crate::error::{Error, Result};
use crate::field;
use crate::freegroup::{kernel_generators_by, kernel_generators_symmetric, FreeWord, Letter};
use crate::group::{FiniteGroup, Subgroup};
use crate::matrix::Matrix;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldMode {
    Complex,
    Real,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// The group acts trivially; the variables themselves generate.
    Trivial,
    Complete,
    Abelian,
}

#[derive(Clone, Debug)]
pub struct InvariantOptions {
    pub field: FieldMode,
    /// Names of the original variables; defaults to `x, y, z` for three
    /// variables and `x1, ..., xn` otherwise.
    pub variables: Option<Vec<String>>,
    pub completeness: CompletenessOptions,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions { field: FieldMode::Complex, variables: None, completeness: CompletenessOptions::default() }
    }
}

/// An eigenvector of the abelian section, as a linear form in the
/// generators of the previous level.
#[derive(Clone, Debug, Serialize)]
pub struct EigenLetter {
    pub name: String,
    /// Index into the linear characters of the section, trivial first.
    pub character: usize,
    pub basic: bool,
    pub coords: Vec<Cyclotomic>,
}

#[derive(Clone, Debug)]
pub struct InvariantLevel {
    pub kernel: Vec<usize>,
    pub subgroup: Vec<usize>,
    pub letters: Vec<EigenLetter>,
    /// Complex generators as words in the letters.
    pub words: Vec<FreeWord>,
    pub names: Vec<String>,
    /// Generators over the letters.
    pub local: Vec<Expr>,
    /// Generators over the original variables.
    pub full: Vec<Expr>,
    /// Images of the group generators acting on this level's generators,
    /// column convention. Empty for the abelian route.
    pub action: Vec<Matrix>,
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub field: FieldMode,
    pub method: Method,
    pub variables: Vec<String>,
    pub group_order: usize,
    /// Order of the group acting faithfully.
    pub effective_order: usize,
    pub levels: Vec<InvariantLevel>,
    pub warnings: Vec<String>,
}

impl GeneratorSet {
    pub fn generators(&self) -> Vec<Expr> {
        match self.levels.last() {
            Some(l) => l.full.clone(),
            None => (0..self.variables.len()).map(Expr::var).collect(),
        }
    }

    pub fn names(&self) -> Vec<String> {
        match self.levels.last() {
            Some(l) => l.names.clone(),
            None => self.variables.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.names().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `|G|(n-1)+1` for the faithful quotient.
    pub fn expected_count(&self) -> usize {
        expected_count(self.effective_order, self.variables.len())
    }

    /// Names of the generators one level down, for rendering local forms.
    fn previous_names(&self, level: usize) -> Vec<String> {
        if level == 0 {
            self.variables.clone()
        } else {
            self.levels[level - 1].names.clone()
        }
    }

    fn letter_names(level: &InvariantLevel) -> Vec<String> {
        level.letters.iter().map(|l| l.name.clone()).collect()
    }

    /// Expanded polynomials over the original variables, when every
    /// generator has at most `max_terms` monomials.
    pub fn expanded(&self, max_terms: usize) -> Option<Vec<NcPoly>> {
        let mut cache = HashMap::new();
        let mut out = Vec::new();
        for e in self.generators() {
            let p = e.expand_cached(&mut cache).ok()?;
            if p.len() > max_terms {
                return None;
            }
            out.push(p);
        }
        Some(out)
    }

    pub fn to_json(&self) -> Value {
        let levels: Vec<Value> = self
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let prev = self.previous_names(i);
                let letter_names = Self::letter_names(l);
                json!({
                    "kernel_order": l.kernel.len(),
                    "subgroup_order": l.subgroup.len(),
                    "letters": l.letters.iter().map(|x| json!({
                        "name": x.name,
                        "character": x.character,
                        "basic": x.basic,
                        "definition": Expr::linear(&x.coords, &(0..prev.len()).map(Expr::var).collect::<Vec<_>>()).render(&prev),
                    })).collect::<Vec<_>>(),
                    "generators": l.names.iter().zip(&l.local).map(|(n, e)| json!({
                        "name": n,
                        "infix": e.render(&letter_names),
                        "tree": e.to_json(&letter_names),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        let expanded = self.expanded(500).map(|ps| {
            self.names()
                .iter()
                .zip(ps)
                .map(|(n, p)| json!({"name": n, "polynomial": p.render(&self.variables)}))
                .collect::<Vec<_>>()
        });
        json!({
            "field": self.field,
            "method": self.method,
            "variables": self.variables,
            "group_order": self.group_order,
            "effective_order": self.effective_order,
            "count": self.len(),
            "expected_count": self.expected_count(),
            "generators": self.names(),
            "levels": levels,
            "expanded": expanded,
            "warnings": self.warnings,
        })
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} invariant generators ({:?}, {:?} coefficients), expected {}",
            self.len(),
            self.method,
            self.field,
            self.expected_count()
        )?;
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        for (i, l) in self.levels.iter().enumerate() {
            let prev = self.previous_names(i);
            let vars: Vec<Expr> = (0..prev.len()).map(Expr::var).collect();
            writeln!(f, "level {}: |N| = {}", i + 1, l.subgroup.len() / l.kernel.len().max(1))?;
            for x in &l.letters {
                if prev.contains(&x.name) {
                    continue;
                }
                writeln!(f, "  {} = {}", x.name, Expr::linear(&x.coords, &vars).render(&prev))?;
            }
            let letter_names = Self::letter_names(l);
            for (n, e) in l.names.iter().zip(&l.local) {
                writeln!(f, "  {n} = {}", e.render(&letter_names))?;
            }
        }
        if let Some(ps) = self.expanded(60) {
            if !self.levels.is_empty() {
                writeln!(f, "expanded:")?;
                for (n, p) in self.names().iter().zip(ps) {
                    writeln!(f, "  {n} = {}", p.render(&self.variables))?;
                }
            }
        }
        Ok(())
    }
}

pub fn expected_count(order: usize, n: usize) -> usize {
    order * n.saturating_sub(1) + 1
}

pub fn default_variable_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

const LEVEL_PREFIXES: [&str; 6] = ["w", "u", "t", "s", "r", "q"];

fn level_names(level: usize, count: usize) -> Vec<String> {
    let prefix = LEVEL_PREFIXES.get(level).map_or_else(|| format!("y{}_", level + 1), |p| p.to_string());
    (1..=count).map(|j| format!("{prefix}{j}")).collect()
}

/// Letter names: a letter equal to a previous generator keeps its name,
/// others get `a, b, c, ...` avoiding clashes.
fn letter_names(coords: &[Vec<Cyclotomic>], prev: &[String]) -> Vec<String> {
    let mut pool = (0..).map(|i: usize| {
        if i < 26 {
            ((b'a' + i as u8) as char).to_string()
        } else {
            format!("{}{}", (b'a' + (i % 26) as u8) as char, i / 26)
        }
    });
    coords
        .iter()
        .map(|c| {
            let nz: Vec<usize> = (0..c.len()).filter(|&j| !c[j].is_zero()).collect();
            if nz.len() == 1 && c[nz[0]].is_one() {
                return prev[nz[0]].clone();
            }
            loop {
                let n = pool.next().unwrap();
                if !prev.contains(&n) {
                    return n;
                }
            }
        })
        .collect()
}

/// Invariant generators of the action `rep` of `group` on the variables.
pub fn invariant_generators(
    group: &Arc<FiniteGroup>,
    rep: &Representation,
    opts: &InvariantOptions,
) -> Result<GeneratorSet> {
    let n = rep.dim();
    let variables = match &opts.variables {
        Some(v) if v.len() == n => v.clone(),
        Some(v) => return Err(Error::Input(format!("{} variable names for {n} variables", v.len()))),
        None => default_variable_names(n),
    };
    if opts.field == FieldMode::Real && !rep.is_real() {
        return Err(Error::Input("real coefficients need a representation with real matrices".into()));
    }
    let mut warnings = Vec::new();
    let (q, qrep) = faithful(group, rep, &mut warnings)?;
    let mut set = GeneratorSet {
        field: opts.field,
        method: Method::Trivial,
        variables,
        group_order: group.order(),
        effective_order: q.order(),
        levels: Vec::new(),
        warnings,
    };
    if q.order() == 1 || n == 0 {
        return Ok(set);
    }
    let analysis = Analysis::new(q.clone())?;
    let chi = qrep.character(analysis.table());
    let mut copts = opts.completeness.clone();
    copts.real = opts.field == FieldMode::Real;
    let report = analysis.is_complete_character(&chi, &copts)?;
    if report.complete {
        set.method = Method::Complete;
        set.levels = complete_levels(analysis.table(), &qrep, &report.levels, opts.field, &set.variables)?;
    } else if q.is_abelian() {
        set.method = Method::Abelian;
        set.levels = vec![abelian_level(analysis.table(), &qrep, opts.field, &set.variables)?];
    } else {
        return Err(Error::Unsupported(format!(
            "the representation is not complete{} and the group is not abelian",
            report.reason.map(|r| format!(" ({r})")).unwrap_or_default()
        )));
    }
    let count = set.len();
    if count != set.expected_count() {
        return Err(Error::Internal(format!("{count} generators, expected {}", set.expected_count())));
    }
    Ok(set)
}

/// Passes to the quotient by the kernel of the action.
fn faithful(
    group: &Arc<FiniteGroup>,
    rep: &Representation,
    warnings: &mut Vec<String>,
) -> Result<(Arc<FiniteGroup>, Representation)> {
    let id = Matrix::identity(rep.dim());
    let kernel: Vec<usize> = (0..group.order()).filter(|&g| rep.image(g) == &id).collect();
    if kernel.len() == 1 {
        return Ok((group.clone(), rep.clone()));
    }
    warnings.push(format!(
        "the action is not faithful; working with the quotient by its kernel of order {}",
        kernel.len()
    ));
    let k = group.subgroup_from_elements(&kernel)?;
    let quot = group.quotient(&k)?;
    let q = quot.group_arc().clone();
    let gens = q.generators().iter().map(|&c| rep.image(quot.representatives()[c]).clone()).collect();
    let qrep = Representation::from_generators(&q, rep.dim(), gens)?;
    Ok((q, qrep))
}

/// Linear characters of `M/K` as functions on the elements of `M`.
struct SectionCharacters {
    members: Vec<usize>,
    /// `values[l][i]` is the value at `members[i]`.
    values: Vec<Vec<Cyclotomic>>,
    product: Vec<Vec<usize>>,
}

impl SectionCharacters {
    fn new(g: &FiniteGroup, m: &Subgroup, k: &[usize]) -> Result<SectionCharacters> {
        let st = SubgroupTable::new(g, m)?;
        let t = st.table();
        let cc = t.classes();
        let members = m.elements().to_vec();
        let pos: Vec<usize> = members.iter().map(|&x| st.position(x).unwrap()).collect();
        let mut values = Vec::new();
        for chi in t.irreducibles() {
            if !chi.degree().is_one() {
                continue;
            }
            let vals: Vec<Cyclotomic> = pos.iter().map(|&p| chi.value(cc.class_of(p)).clone()).collect();
            let trivial_on_k =
                members.iter().zip(&vals).all(|(x, v)| !k.contains(x) || v.is_one());
            if trivial_on_k {
                values.push(vals);
            }
        }
        let idx: HashMap<String, usize> = values.iter().enumerate().map(|(i, v)| (format!("{v:?}"), i)).collect();
        let mut product = vec![vec![0; values.len()]; values.len()];
        for a in 0..values.len() {
            for b in 0..values.len() {
                let v: Vec<Cyclotomic> = values[a].iter().zip(&values[b]).map(|(x, y)| x * y).collect();
                product[a][b] = *idx
                    .get(&format!("{v:?}"))
                    .ok_or_else(|| Error::Internal("characters of the section are not closed".into()))?;
            }
        }
        Ok(SectionCharacters { members, values, product })
    }

    fn len(&self) -> usize {
        self.values.len()
    }

    fn inverse(&self, a: usize) -> usize {
        (0..self.len()).find(|&b| self.product[a][b] == 0).unwrap()
    }

    fn value(&self, l: usize, x: usize) -> &Cyclotomic {
        let i = self.members.binary_search(&x).expect("element of the section");
        &self.values[l][i]
    }

    /// `(1/|M|) sum_x conj(l(x)) rho(x)`.
    fn projector(&self, l: usize, rho: &Representation) -> Matrix {
        let d = rho.dim();
        let mut acc = Matrix::zeros(d, d);
        for (i, &x) in self.members.iter().enumerate() {
            acc = acc.add(&rho.image(x).scale(&self.values[l][i].conjugate()));
        }
        acc.scale_rational(&Rational::new(1, self.members.len() as i64))
    }
}

fn columns(m: &Matrix) -> Vec<Vec<Cyclotomic>> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

/// Reduced echelon basis of the span of the vectors.
fn span_basis(vectors: Vec<Vec<Cyclotomic>>) -> Vec<Vec<Cyclotomic>> {
    let mut rows = vectors;
    field::rref(&mut rows);
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    rows
}

fn conj_vec(v: &[Cyclotomic]) -> Vec<Cyclotomic> {
    v.iter().map(|x| x.conjugate()).collect()
}

fn is_zero_vec(v: &[Cyclotomic]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// The smallest subspace containing `v` and stable under the generators.
fn cyclic_span(rho: &Representation, v: Vec<Cyclotomic>) -> Vec<Vec<Cyclotomic>> {
    let mut basis = vec![v];
    let mut i = 0;
    while i < basis.len() {
        for s in rho.generator_images() {
            let w = s.mul_vec(&basis[i]);
            let mut trial = basis.clone();
            trial.push(w.clone());
            if field::rank(&trial) > basis.len() {
                basis.push(w);
            }
        }
        i += 1;
    }
    basis
}

/// Splits the variables at one level into letters `b_chi` and `v_k`.
fn eigen_letters(
    table: &CharacterTable,
    rho: &Representation,
    sec: &SectionCharacters,
    basic: &[usize],
    real: bool,
) -> Result<Vec<(usize, bool, Vec<Cyclotomic>)>> {
    let g = table.group();
    let d = rho.dim();
    let cc = table.classes();
    let projectors: Vec<Matrix> = (0..sec.len()).map(|l| sec.projector(l, rho)).collect();
    let mut copies: HashMap<usize, Vec<Cyclotomic>> = HashMap::new();
    let mut vb: Vec<Vec<Cyclotomic>> = Vec::new();
    for &chi in basic {
        let irr = table.irreducible(chi);
        let partner = table.conjugate_index(chi);
        let seed = if real && partner != chi && copies.contains_key(&partner) {
            conj_vec(&copies[&partner])
        } else {
            let mut p = Matrix::zeros(d, d);
            for x in 0..g.order() {
                p = p.add(&rho.image(x).scale(&irr.value(cc.class_of(x)).conjugate()));
            }
            let p = p.scale_rational(&Rational::new(table.degree(chi) as i64, g.order() as i64));
            let (lam, w) = (0..sec.len())
                .find_map(|l| {
                    let rows = span_basis(columns(&projectors[l].mul(&p)));
                    rows.into_iter().next().map(|w| (l, w))
                })
                .ok_or_else(|| Error::Internal(format!("irreducible {chi} does not occur in the representation")))?;
            if real && partner == chi {
                real_seed(g, rho, sec, lam, w)?
            } else {
                w
            }
        };
        let copy = cyclic_span(rho, seed.clone());
        if copy.len() != table.degree(chi) {
            return Err(Error::Internal(format!(
                "copy of irreducible {chi} has dimension {} instead of {}",
                copy.len(),
                table.degree(chi)
            )));
        }
        copies.insert(chi, seed);
        vb.extend(copy);
    }
    if field::rank(&vb) != sec.len() - 1 {
        return Err(Error::Internal("the basic part does not match the section".into()));
    }
    // G-stable complement: orthogonal for the invariant Hermitian form.
    let mut h = Matrix::zeros(d, d);
    for x in 0..g.order() {
        let r = rho.image(x);
        h = h.add(&r.conjugate().transpose().mul(r));
    }
    let constraints: Vec<Vec<Cyclotomic>> = vb
        .iter()
        .map(|b| {
            let bc = conj_vec(b);
            (0..d)
                .map(|j| (0..d).fold(Cyclotomic::zero(), |acc, i| &acc + &(&bc[i] * h.get(i, j))))
                .collect()
        })
        .collect();
    let vj = field::nullspace(&constraints, d);
    let mut letters = Vec::new();
    for (l, p) in projectors.iter().enumerate() {
        if l != 0 {
            let b = span_basis(vb.iter().map(|v| p.mul_vec(v)).collect());
            if b.len() != 1 {
                return Err(Error::Internal(format!("character {l} occurs {} times in the basic part", b.len())));
            }
            letters.push((l, true, b.into_iter().next().unwrap()));
        }
        for v in span_basis(vj.iter().map(|v| p.mul_vec(v)).collect()) {
            letters.push((l, false, v));
        }
    }
    if letters.len() != d {
        return Err(Error::Internal("eigenvectors do not form a basis".into()));
    }
    Ok(letters)
}

/// A vector spanning an irreducible copy stable under conjugation, for a
/// real irreducible over the linear character `lam`.
fn real_seed(
    g: &FiniteGroup,
    rho: &Representation,
    sec: &SectionCharacters,
    lam: usize,
    w: Vec<Cyclotomic>,
) -> Result<Vec<Cyclotomic>> {
    let swap = (0..g.order())
        .find(|&x| {
            let xi = g.inv(x);
            sec.members.iter().all(|&m| sec.value(lam, g.mul(g.mul(xi, m), x)) == &sec.value(lam, m).conjugate())
        })
        .ok_or_else(|| Error::Internal("no element conjugates the character to its complex conjugate".into()))?;
    let back = rho.image(g.inv(swap));
    let j = |v: &[Cyclotomic]| back.mul_vec(&conj_vec(v));
    if j(&j(&w)) != w {
        return Err(Error::Internal("conjugation does not square to the identity on the eigenspace".into()));
    }
    let jw = j(&w);
    let plus: Vec<Cyclotomic> = w.iter().zip(&jw).map(|(a, b)| a + b).collect();
    if !is_zero_vec(&plus) {
        return Ok(plus);
    }
    let i = Cyclotomic::i();
    Ok(w.iter().zip(&jw).map(|(a, b)| &i * &(a - b)).collect())
}

/// The words `b_chi b_mu b_(chi mu)^-1` and `b_theta v_k b_(theta mu_k)^-1`,
/// in shortlex order.
fn section_words(letters: &[(usize, bool, Vec<Cyclotomic>)], sec: &SectionCharacters) -> Vec<FreeWord> {
    let mut b_of = vec![None; sec.len()];
    for (i, (l, basic, _)) in letters.iter().enumerate() {
        if *basic {
            b_of[*l] = Some(i);
        }
    }
    let b = |l: usize| b_of[l];
    let mut words: Vec<Vec<usize>> = Vec::new();
    for chi in 1..sec.len() {
        for mu in 1..sec.len() {
            let rest = sec.inverse(sec.product[chi][mu]);
            words.push([b(chi), b(mu), b(rest)].into_iter().flatten().collect());
        }
    }
    for theta in 0..sec.len() {
        for (k, (mu, basic, _)) in letters.iter().enumerate() {
            if *basic {
                continue;
            }
            let rest = sec.inverse(sec.product[theta][*mu]);
            words.push([b(theta), Some(k), b(rest)].into_iter().flatten().collect());
        }
    }
    words.sort_by(|a, c| a.len().cmp(&c.len()).then_with(|| a.cmp(c)));
    words.dedup();
    words
        .into_iter()
        .map(|w| FreeWord::from_signed(&w.iter().map(|&i| i as i64 + 1).collect::<Vec<_>>()))
        .collect()
}

fn word_poly(w: &FreeWord) -> NcPoly {
    NcPoly::monomial(w.letters().iter().map(|l| l.generator).collect(), Cyclotomic::one())
}

fn word_expr(w: &FreeWord, letters: &[Expr]) -> Expr {
    Expr::product(
        w.letters()
            .iter()
            .map(|l| if l.inverse { Expr::inverse(letters[l.generator].clone()) } else { letters[l.generator].clone() })
            .collect(),
    )
}

/// Real generators as combinations of words: `(word, coefficient)` lists.
type Combination = Vec<(usize, Cyclotomic)>;

/// Pairs each word with its conjugate. Self-conjugate words are kept;
/// pairs become `w + w'` and `i (w - w')`.
fn realify(words: &[FreeWord], letter_conj: &[usize]) -> Result<Vec<Combination>> {
    let index: HashMap<&FreeWord, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut done = vec![false; words.len()];
    let mut out = Vec::new();
    for (i, w) in words.iter().enumerate() {
        if done[i] {
            continue;
        }
        let c = FreeWord::from_letters(
            w.letters().iter().map(|l| Letter::new(letter_conj[l.generator], l.inverse)).collect(),
        );
        let j = *index
            .get(&c)
            .ok_or_else(|| Error::Unsupported(format!("generating set is not closed under conjugation: {w}")))?;
        done[i] = true;
        done[j] = true;
        if i == j {
            out.push(vec![(i, Cyclotomic::one())]);
        } else {
            out.push(vec![(i, Cyclotomic::one()), (j, Cyclotomic::one())]);
            out.push(vec![(i, Cyclotomic::i()), (j, -Cyclotomic::i())]);
        }
    }
    Ok(out)
}

/// Index of the letter whose coordinates are the conjugate of each letter's.
fn letter_conjugation(coords: &[Vec<Cyclotomic>]) -> Result<Vec<usize>> {
    coords
        .iter()
        .map(|c| {
            let cc = conj_vec(c);
            coords
                .iter()
                .position(|d| d == &cc)
                .ok_or_else(|| Error::Internal("eigenvectors are not closed under conjugation".into()))
        })
        .collect()
}

#[derive(Clone, Copy)]
enum Role {
    Single(usize),
    /// `w` in the pair `w + w', i (w - w')` starting at the given index.
    First(usize),
    Second(usize),
}

fn roles(combos: &[Combination], words: usize) -> Vec<Role> {
    let mut out = vec![Role::Single(0); words];
    for (r, c) in combos.iter().enumerate() {
        match c.len() {
            1 => out[c[0].0] = Role::Single(r),
            _ if c[1].1.is_one() => {
                out[c[0].0] = Role::First(r);
                out[c[1].0] = Role::Second(r);
            }
            _ => {}
        }
    }
    out
}

/// Coordinates over the generators of a polynomial in the letters that is a
/// combination of generator words.
fn coordinates(
    p: &NcPoly,
    word_index: &HashMap<Vec<usize>, usize>,
    combos: &[Combination],
    roles: &[Role],
) -> Result<Vec<Cyclotomic>> {
    let half = Rational::new(1, 2);
    let mut out = vec![Cyclotomic::zero(); combos.len()];
    for (w, a) in p.terms() {
        let i = *word_index
            .get(w)
            .ok_or_else(|| Error::Internal("the quotient does not act monomially on the generators".into()))?;
        // w = (r1 - i r2)/2 and w' = (r1 + i r2)/2.
        let (r, s) = match roles[i] {
            Role::Single(r) => {
                out[r] = &out[r] + &(a * &combos[r][0].1.inv()?);
                continue;
            }
            Role::First(r) => (r, -Cyclotomic::i()),
            Role::Second(r) => (r, Cyclotomic::i()),
        };
        out[r] = &out[r] + &a.scale(&half);
        out[r + 1] = &out[r + 1] + &(a * &s).scale(&half);
    }
    Ok(out)
}

fn complete_levels(
    table: &CharacterTable,
    rep: &Representation,
    chain: &[CompleteLevel],
    mode: FieldMode,
    variables: &[String],
) -> Result<Vec<InvariantLevel>> {
    let g = table.group();
    let real = mode == FieldMode::Real;
    let mut rho = rep.clone();
    let mut full: Vec<Expr> = (0..variables.len()).map(Expr::var).collect();
    let mut prev_names = variables.to_vec();
    let mut out = Vec::new();
    for (depth, lv) in chain.iter().enumerate() {
        let m = g.subgroup_from_elements(&lv.subgroup)?;
        let sec = SectionCharacters::new(g, &m, &lv.kernel)?;
        let raw = eigen_letters(table, &rho, &sec, &lv.basic, real)?;
        let coords: Vec<Vec<Cyclotomic>> = raw.iter().map(|x| x.2.clone()).collect();
        let names = letter_names(&coords, &prev_names);
        let letters: Vec<EigenLetter> = raw
            .iter()
            .zip(&names)
            .map(|((l, basic, c), n)| EigenLetter { name: n.clone(), character: *l, basic: *basic, coords: c.clone() })
            .collect();
        let words = section_words(&raw, &sec);
        let letter_full: Vec<Expr> = coords.iter().map(|c| Expr::linear(c, &full)).collect();
        let word_full: Vec<Expr> = words.iter().map(|w| word_expr(w, &letter_full)).collect();
        let letter_vars: Vec<Expr> = (0..letters.len()).map(Expr::var).collect();
        let word_local: Vec<Expr> = words.iter().map(|w| word_expr(w, &letter_vars)).collect();
        let combos: Vec<Combination> = if real {
            realify(&words, &letter_conjugation(&coords)?)?
        } else {
            (0..words.len()).map(|i| vec![(i, Cyclotomic::one())]).collect()
        };
        let build = |terms: &[Expr], c: &Combination| {
            Expr::linear(&c.iter().map(|x| x.1.clone()).collect::<Vec<_>>(), &c.iter().map(|x| terms[x.0].clone()).collect::<Vec<_>>())
        };
        let gen_full: Vec<Expr> = combos.iter().map(|c| build(&word_full, c)).collect();
        let gen_local: Vec<Expr> = combos.iter().map(|c| build(&word_local, c)).collect();

        // Action of the group generators on the new generators.
        let roles = roles(&combos, words.len());
        let word_index: HashMap<Vec<usize>, usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.letters().iter().map(|l| l.generator).collect(), i))
            .collect();
        let basis = Matrix::from_fn(coords.len(), coords.len(), |i, j| coords[j][i].clone());
        let basis_inv = basis.inverse().ok_or_else(|| Error::Internal("eigenvectors are dependent".into()))?;
        let word_polys: Vec<NcPoly> = words.iter().map(word_poly).collect();
        let mut action = Vec::new();
        for s in rho.generator_images() {
            let e = basis_inv.mul(s).mul(&basis);
            let cols: Vec<Vec<Cyclotomic>> = combos
                .iter()
                .map(|c| {
                    let p = c.iter().fold(NcPoly::zero(), |acc, (w, k)| acc.add(&word_polys[*w].scale(k)));
                    coordinates(&p.substitute(&e), &word_index, &combos, &roles)
                })
                .collect::<Result<_>>()?;
            action.push(Matrix::from_fn(combos.len(), combos.len(), |i, j| cols[j][i].clone()));
        }
        let next = Representation::from_generators(g, combos.len(), action.clone())?;
        let expected = if lv.subgroup.len() == g.order() {
            let mut m = vec![0; table.len()];
            m[0] = combos.len();
            table.compose(&m)
        } else {
            table.compose(&lv.next)
        };
        if next.character(table) != expected {
            return Err(Error::Internal(format!("action at level {} does not match Q(pi): {:?} vs {:?}", depth + 1, next.character(table).values(), expected.values())));
        }
        let gen_names = level_names(depth, combos.len());
        out.push(InvariantLevel {
            kernel: lv.kernel.clone(),
            subgroup: lv.subgroup.clone(),
            letters,
            words,
            names: gen_names.clone(),
            local: gen_local,
            full: gen_full.clone(),
            action,
        });
        rho = next;
        full = gen_full;
        prev_names = gen_names;
    }
    Ok(out)
}

/// Eigenvectors of the representation under the abelian normal subgroup `n`,
/// grouped by linear character of `n` (trivial first) and reduced.
pub fn isotypic_basis(
    group: &FiniteGroup,
    rep: &Representation,
    n: &Subgroup,
) -> Result<Vec<EigenLetter>> {
    if !group.is_normal(n) {
        return Err(Error::NotNormal);
    }
    let els = n.elements();
    if els.iter().any(|&a| els.iter().any(|&b| group.mul(a, b) != group.mul(b, a))) {
        return Err(Error::NotAbelian);
    }
    let sec = SectionCharacters::new(group, n, &[0])?;
    let mut out = Vec::new();
    let names = (1..=rep.dim()).map(|i| format!("e{i}")).collect::<Vec<_>>();
    for l in 0..sec.len() {
        for v in span_basis(columns(&sec.projector(l, rep))) {
            out.push(EigenLetter { name: names[out.len()].clone(), character: l, basic: false, coords: v });
        }
    }
    Ok(out)
}

fn abelian_level(
    table: &CharacterTable,
    rep: &Representation,
    mode: FieldMode,
    variables: &[String],
) -> Result<InvariantLevel> {
    let g = table.group();
    let whole = g.whole();
    let letters = isotypic_basis(g, rep, &whole)?;
    let sec = SectionCharacters::new(g, &whole, &[0])?;
    let coords: Vec<Vec<Cyclotomic>> = letters.iter().map(|l| l.coords.clone()).collect();
    let names = letter_names(&coords, variables);
    let letters: Vec<EigenLetter> =
        letters.into_iter().zip(names).map(|(l, name)| EigenLetter { name, ..l }).collect();
    let images: Vec<usize> = letters.iter().map(|l| l.character).collect();
    let mul = |a: &usize, b: &usize| sec.product[*a][*b];
    let inv = |a: &usize| sec.inverse(*a);
    let kg = match mode {
        FieldMode::Complex => kernel_generators_by(&images, 0usize, mul, inv),
        FieldMode::Real => {
            let lc = letter_conjugation(&coords)?;
            kernel_generators_symmetric(&images, 0usize, mul, inv, &lc, inv).ok_or_else(|| {
                Error::Unsupported(
                    "no Schreier transversal stable under conjugation; real generators are not available for this action"
                        .into(),
                )
            })?
        }
    };
    let words = kg.generators;
    let vars: Vec<Expr> = (0..variables.len()).map(Expr::var).collect();
    let letter_full: Vec<Expr> = coords.iter().map(|c| Expr::linear(c, &vars)).collect();
    let letter_vars: Vec<Expr> = (0..letters.len()).map(Expr::var).collect();
    let combos: Vec<Combination> = match mode {
        FieldMode::Real => realify(&words, &letter_conjugation(&coords)?)?,
        FieldMode::Complex => (0..words.len()).map(|i| vec![(i, Cyclotomic::one())]).collect(),
    };
    let build = |terms: &[Expr], c: &Combination| {
        Expr::linear(&c.iter().map(|x| x.1.clone()).collect::<Vec<_>>(), &c.iter().map(|x| terms[x.0].clone()).collect::<Vec<_>>())
    };
    let word_full: Vec<Expr> = words.iter().map(|w| word_expr(w, &letter_full)).collect();
    let word_local: Vec<Expr> = words.iter().map(|w| word_expr(w, &letter_vars)).collect();
    Ok(InvariantLevel {
        kernel: vec![0],
        subgroup: whole.elements().to_vec(),
        letters,
        names: level_names(0, combos.len()),
        local: combos.iter().map(|c| build(&word_local, c)).collect(),
        full: combos.iter().map(|c| build(&word_full, c)).collect(),
        words,
        action: Vec::new(),
    })
}
