//! Free groups: reduced words, kernels of maps onto finite abelian groups
//! through Schreier transversals, and Stallings folding.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{input, Error, Result};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    /// Position in the order `x1 < ... < xn < x1^-1 < ... < xn^-1`.
    fn rank(self, n: usize) -> usize {
        self.generator + if self.inverse { n } else { 0 }
    }
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> FreeWord {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    FreeWord { letters: out }
}

impl FreeWord {
    pub fn identity() -> FreeWord {
        FreeWord::default()
    }

    pub fn generator(i: usize) -> FreeWord {
        FreeWord { letters: vec![Letter::new(i, false)] }
    }

    /// From signed 1-based indices: `2` is `x2`, `-2` is `x2^-1`.
    pub fn from_signed(s: &[i64]) -> FreeWord {
        reduce(s.iter().map(|&x| {
            assert!(x != 0, "letter 0");
            Letter::new(x.unsigned_abs() as usize - 1, x < 0)
        }))
    }

    pub fn from_letters(letters: Vec<Letter>) -> FreeWord {
        reduce(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, o: &FreeWord) -> FreeWord {
        reduce(self.letters.iter().chain(&o.letters).copied())
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(FreeWord::identity(), |acc, _| acc.mul(&base))
    }

    /// Largest generator index used, plus one.
    pub fn rank_used(&self) -> usize {
        self.letters.iter().map(|l| l.generator + 1).max().unwrap_or(0)
    }

    /// Formats as e.g. `b a c^-1`, with runs collapsed to powers (`b^3`).
    pub fn format(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let e = (j - i) as i64 * if l.inverse { -1 } else { 1 };
            let name = names.get(l.generator).cloned().unwrap_or_else(|| format!("x{}", l.generator + 1));
            parts.push(if e == 1 { name } else { format!("{name}^{e}") });
            i = j;
        }
        parts.join(" ")
    }

    /// Parses space-separated tokens `name` or `name^k`; `1` is the identity.
    pub fn parse(text: &str, names: &[String]) -> Result<FreeWord> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| Error::Input(format!("bad exponent in {tok:?}")))?),
                None => (tok, 1),
            };
            let g = match names.iter().position(|x| x == name) {
                Some(g) => g,
                None => match name.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
                    Some(d) if d >= 1 && names.is_empty() => d - 1,
                    _ => return input(format!("unknown generator {name:?}")),
                },
            };
            for _ in 0..exp.unsigned_abs() {
                letters.push(Letter::new(g, exp < 0));
            }
        }
        Ok(reduce(letters))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(&[]))
    }
}

impl Serialize for FreeWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FreeWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FreeWord::parse(&s, &[]).map_err(serde::de::Error::custom)
    }
}

/// Default generator names: `a, b, c, ...` for up to 26 generators, else `x1, x2, ...`.
pub fn default_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// A finite abelian group `Z/d1 x ... x Z/dk`, elements as exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<AbelianGroup> {
        if factors.iter().any(|&d| d == 0) {
            return input("invariant factors must be positive");
        }
        Ok(AbelianGroup { factors })
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product::<u64>() as usize
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.factors.len()]
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.factors).map(|((x, y), d)| (x + y) % d).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.factors).map(|(x, d)| (d - x % d) % d).collect()
    }

    pub fn normalize(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.factors).map(|(x, d)| x % d).collect()
    }
}

/// A homomorphism from the free group of rank `n` onto a finite abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianMap {
    pub target: AbelianGroup,
    pub images: Vec<Vec<u64>>,
}

impl AbelianMap {
    pub fn new(target: AbelianGroup, images: Vec<Vec<u64>>) -> Result<AbelianMap> {
        if images.iter().any(|v| v.len() != target.factors.len()) {
            return input("generator image has the wrong number of coordinates");
        }
        let images = images.iter().map(|v| target.normalize(v)).collect();
        Ok(AbelianMap { target, images })
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, w: &FreeWord) -> Vec<u64> {
        w.letters.iter().fold(self.target.zero(), |acc, l| {
            let v = &self.images[l.generator];
            if l.inverse {
                self.target.add(&acc, &self.target.neg(v))
            } else {
                self.target.add(&acc, v)
            }
        })
    }

    /// The image subgroup, as a sorted list of elements.
    pub fn image(&self) -> Vec<Vec<u64>> {
        let mut seen = vec![self.target.zero()];
        let mut i = 0;
        while i < seen.len() {
            for v in &self.images {
                let y = self.target.add(&seen[i], v);
                if !seen.contains(&y) {
                    seen.push(y);
                }
            }
            i += 1;
        }
        seen.sort();
        seen
    }
}

/// A Schreier transversal of the kernel of an [`AbelianMap`] with the
/// resulting free generating set of the kernel.
#[derive(Clone, Debug, Serialize)]
pub struct KernelGenerators {
    /// Coset representative per element of the target, in shortlex order.
    pub transversal: Vec<FreeWord>,
    /// Nontrivial Schreier generators `t x rep(t x)^-1`.
    pub generators: Vec<FreeWord>,
    /// `(transversal index, generator)` that produced each generator.
    pub sources: Vec<(usize, usize)>,
}

/// Schreier generators of `ker(phi)` from the shortlex transversal with
/// letter order `x1 < ... < xn < x1^-1 < ... < xn^-1`. Returns exactly
/// `|A|(n-1)+1` words.
pub fn kernel_generators(phi: &AbelianMap) -> Result<KernelGenerators> {
    let n = phi.rank();
    let a = &phi.target;
    let image = phi.image();
    if image.len() != a.order() {
        let listed: Vec<String> = image.iter().map(|v| format!("{v:?}")).collect();
        return input(format!(
            "map is not surjective: image has order {} of {}: {}",
            image.len(),
            a.order(),
            listed.join(" ")
        ));
    }
    let images: Vec<Vec<u64>> = phi.images.iter().map(|v| a.normalize(v)).collect();
    let out = schreier(&images, a.zero(), |x, y| a.add(x, y), |x| a.neg(x));
    let expected = a.order() * (n.max(1) - 1) + 1;
    if n > 0 && out.generators.len() != expected {
        return Err(Error::Internal(format!("{} Schreier generators, expected {expected}", out.generators.len())));
    }
    Ok(out)
}

/// Schreier generators of the kernel of the map sending `x_i` to `images[i]`
/// in any finite group, onto the subgroup the images generate. The
/// transversal is shortlex as in [`kernel_generators`].
pub fn kernel_generators_by<T, M, I>(images: &[T], identity: T, mul: M, inv: I) -> KernelGenerators
where
    T: Clone + Eq + std::hash::Hash,
    M: Fn(&T, &T) -> T,
    I: Fn(&T) -> T,
{
    schreier(images, identity, mul, inv)
}

fn schreier<T, M, I>(images: &[T], identity: T, mul: M, inv: I) -> KernelGenerators
where
    T: Clone + Eq + std::hash::Hash,
    M: Fn(&T, &T) -> T,
    I: Fn(&T) -> T,
{
    build_kernel(images, identity, mul, inv, None::<(&[usize], fn(&T) -> T)>).expect("unconstrained transversal")
}

/// Like [`kernel_generators_by`], but with a transversal stable under an
/// involution of the letters (`letter_conj`, compatible with `conj` on the
/// target), so that the generating set is closed under it. Returns `None`
/// when no such transversal is found.
pub fn kernel_generators_symmetric<T, M, I, C>(
    images: &[T],
    identity: T,
    mul: M,
    inv: I,
    letter_conj: &[usize],
    conj: C,
) -> Option<KernelGenerators>
where
    T: Clone + Eq + std::hash::Hash,
    M: Fn(&T, &T) -> T,
    I: Fn(&T) -> T,
    C: Fn(&T) -> T,
{
    build_kernel(images, identity, mul, inv, Some((letter_conj, conj)))
}

fn build_kernel<T, M, I, C>(
    images: &[T],
    identity: T,
    mul: M,
    inv: I,
    symmetry: Option<(&[usize], C)>,
) -> Option<KernelGenerators>
where
    T: Clone + Eq + std::hash::Hash,
    M: Fn(&T, &T) -> T,
    I: Fn(&T) -> T,
    C: Fn(&T) -> T,
{
    let n = images.len();
    let mut letters: Vec<Letter> = (0..n).map(|g| Letter::new(g, false)).collect();
    letters.extend((0..n).map(|g| Letter::new(g, true)));
    letters.sort_by_key(|l| l.rank(n));
    let inverses: Vec<T> = images.iter().map(&inv).collect();
    let flip = |w: &FreeWord, lc: &[usize]| FreeWord {
        letters: w.letters.iter().map(|l| Letter::new(lc[l.generator], l.inverse)).collect(),
    };
    let mut rep: HashMap<T, usize> = HashMap::new();
    let mut transversal = vec![FreeWord::identity()];
    let mut elems = vec![identity.clone()];
    rep.insert(identity, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for &l in &letters {
            let v = if l.inverse { &inverses[l.generator] } else { &images[l.generator] };
            let y = mul(&elems[i], v);
            if rep.contains_key(&y) {
                continue;
            }
            let w = transversal[i].mul(&FreeWord { letters: vec![l] });
            let partner = match &symmetry {
                Some((lc, conj)) => {
                    let cy = conj(&y);
                    let cw = flip(&w, lc);
                    if cy == y {
                        if cw != w {
                            continue;
                        }
                        None
                    } else {
                        Some((cy, cw))
                    }
                }
                None => None,
            };
            rep.insert(y.clone(), transversal.len());
            transversal.push(w);
            elems.push(y);
            queue.push_back(transversal.len() - 1);
            if let Some((cy, cw)) = partner {
                if !rep.contains_key(&cy) {
                    rep.insert(cy.clone(), transversal.len());
                    transversal.push(cw);
                    elems.push(cy);
                    queue.push_back(transversal.len() - 1);
                }
            }
        }
    }
    // Elements skipped for lack of a self-conjugate word may still be
    // unreachable; check closure under the generators.
    for e in &elems {
        for v in images {
            if !rep.contains_key(&mul(e, v)) {
                return None;
            }
        }
    }
    let mut generators = Vec::new();
    let mut sources = Vec::new();
    for (i, t) in transversal.iter().enumerate() {
        for x in 0..n {
            let y = mul(&elems[i], &images[x]);
            let w = t.mul(&FreeWord::generator(x)).mul(&transversal[rep[&y]].inverse());
            if !w.is_empty() {
                generators.push(w);
                sources.push((i, x));
            }
        }
    }
    Some(KernelGenerators { transversal, generators, sources })
}

/// A folded graph representing a subgroup of a free group of rank `n`; the
/// basepoint is vertex 0. Edges are `(from, generator, to)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupGraph {
    rank: usize,
    vertices: usize,
    edges: Vec<(usize, usize, usize)>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        // keep the smaller root so the basepoint stays 0
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.0[hi] = lo;
        true
    }
}

/// Stallings folding of the bouquet of the given words, pruned to the core
/// graph at the basepoint.
pub fn fold(words: &[FreeWord], n: usize) -> SubgroupGraph {
    let mut vertices = 1;
    let mut edges = Vec::new();
    for w in words {
        let len = w.len();
        for (i, l) in w.letters.iter().enumerate() {
            let from = if i == 0 { 0 } else { vertices + i - 1 };
            let to = if i + 1 == len { 0 } else { vertices + i };
            edges.push(if l.inverse { (to, l.generator, from) } else { (from, l.generator, to) });
        }
        vertices += len.saturating_sub(1);
    }
    let mut uf = UnionFind((0..vertices).collect());
    loop {
        let mut changed = false;
        let mut out: HashMap<(usize, usize), usize> = HashMap::new();
        let mut inc: HashMap<(usize, usize), usize> = HashMap::new();
        for &(u, g, v) in &edges {
            let (u, v) = (uf.find(u), uf.find(v));
            match out.get(&(u, g)) {
                Some(&t) => changed |= uf.union(t, v),
                None => {
                    out.insert((u, g), v);
                }
            }
            let v = uf.find(v);
            let u = uf.find(u);
            match inc.get(&(v, g)) {
                Some(&s) => changed |= uf.union(s, u),
                None => {
                    inc.insert((v, g), u);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut merged: Vec<(usize, usize, usize)> = edges.iter().map(|&(u, g, v)| (uf.find(u), g, uf.find(v))).collect();
    merged.sort_unstable();
    merged.dedup();
    // prune hanging trees
    loop {
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for &(u, _, v) in &merged {
            *degree.entry(u).or_default() += 1;
            *degree.entry(v).or_default() += 1;
        }
        let before = merged.len();
        merged.retain(|&(u, _, v)| (u == 0 || degree[&u] > 1) && (v == 0 || degree[&v] > 1));
        if merged.len() == before {
            break;
        }
    }
    // renumber breadth-first from the basepoint
    let mut ids: HashMap<usize, usize> = HashMap::from([(uf.find(0), 0)]);
    let mut order = vec![uf.find(0)];
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        let mut nbrs: Vec<(usize, bool, usize)> = merged
            .iter()
            .filter_map(|&(u, g, v)| {
                if u == x {
                    Some((g, false, v))
                } else if v == x {
                    Some((g, true, u))
                } else {
                    None
                }
            })
            .collect();
        nbrs.sort_by_key(|&(g, inv, _)| (inv, g));
        for (_, _, y) in nbrs {
            if !ids.contains_key(&y) {
                ids.insert(y, order.len());
                order.push(y);
            }
        }
        i += 1;
    }
    let mut edges: Vec<(usize, usize, usize)> = merged.iter().map(|&(u, g, v)| (ids[&u], g, ids[&v])).collect();
    edges.sort_unstable();
    SubgroupGraph { rank: n, vertices: order.len(), edges }
}

impl SubgroupGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    /// Free rank of the subgroup, `E - V + 1`.
    pub fn subgroup_rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices
    }

    /// Index in the free group: the vertex count when every vertex has one
    /// outgoing and one incoming edge per generator, otherwise infinite.
    pub fn index(&self) -> Option<usize> {
        let mut out = vec![0usize; self.vertices * self.rank];
        let mut inc = vec![0usize; self.vertices * self.rank];
        for &(u, g, v) in &self.edges {
            out[u * self.rank + g] += 1;
            inc[v * self.rank + g] += 1;
        }
        let complete = out.iter().chain(&inc).all(|&c| c == 1);
        (complete && (self.rank > 0 || self.vertices == 1)).then_some(self.vertices)
    }

    fn step(&self, x: usize, l: Letter) -> Option<usize> {
        self.edges.iter().find_map(|&(u, g, v)| {
            if g != l.generator {
                None
            } else if !l.inverse && u == x {
                Some(v)
            } else if l.inverse && v == x {
                Some(u)
            } else {
                None
            }
        })
    }

    /// Membership of a word in the subgroup.
    pub fn accepts(&self, w: &FreeWord) -> bool {
        let mut x = 0;
        for &l in w.letters() {
            match self.step(x, l) {
                Some(y) => x = y,
                None => return false,
            }
        }
        x == 0
    }

    /// Whether two folded graphs describe the same subgroup (based
    /// isomorphism of core graphs; the numbering is canonical, so this is
    /// equality).
    pub fn same_subgroup(&self, o: &SubgroupGraph) -> bool {
        self == o
    }
}

/// `(rank, index)` of the subgroup generated by the words.
pub fn graph_rank_index(g: &SubgroupGraph) -> (usize, Option<usize>) {
    (g.subgroup_rank(), g.index())
}
