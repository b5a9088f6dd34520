//! Checks shared by the property suite and the acceptance run. Each check
//! returns `Err(description)` on the first violation.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ramify::chartheory::representation::{regular_character, Representation};
use ramify::chartheory::{deflate, induce, inflate, restrict, SubgroupTable};
use ramify::decide::{
    pseudo_unramified_by_inertia, pseudo_unramified_over, unramified_by_inertia, unramified_over, Analysis,
    CompletenessOptions, Property,
};
use ramify::freegroup::{fold, kernel_generators, AbelianGroup, AbelianMap, FreeWord};
use ramify::group::DEFAULT_BUDGET;
use ramify::invariants::{invariant_generators, verify_invariance, FieldMode, InvariantOptions, VerifyOptions};
use ramify::{catalog, CharacterTable, ClassFunction, Cyclotomic, Error, FiniteGroup, Subgroup};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}
#[allow(unused_imports)]
pub(crate) use ensure;

pub fn group(name: &str) -> Arc<FiniteGroup> {
    let spec = catalog::get(name).unwrap_or_else(|| panic!("no fixture {name}"));
    Arc::new(spec.build(DEFAULT_BUDGET).unwrap())
}

pub fn table(g: &Arc<FiniteGroup>) -> CharacterTable {
    CharacterTable::compute(g.clone()).unwrap()
}

/// Built-in fixtures of order at most `max`, in catalog order.
pub fn fixtures_upto(max: usize) -> Vec<(String, Arc<FiniteGroup>)> {
    catalog::names()
        .into_iter()
        .map(|n| {
            let g = group(&n);
            (n, g)
        })
        .filter(|(_, g)| g.order() <= max)
        .collect()
}

pub fn is_abelian_subgroup(g: &FiniteGroup, n: &Subgroup) -> bool {
    let els = n.elements();
    els.iter().all(|&a| els.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
}

/// Nontrivial abelian normal subgroups.
pub fn abelian_normals(g: &FiniteGroup) -> Vec<Subgroup> {
    g.normal_subgroups().iter().filter(|n| !n.is_trivial() && is_abelian_subgroup(g, n)).cloned().collect()
}

fn kronecker(i: usize, j: usize) -> Cyclotomic {
    Cyclotomic::from_int(i64::from(i == j))
}

pub fn group_axioms(g: &FiniteGroup, seed: u64) -> Check {
    let n = g.order();
    let assoc = |a: usize, b: usize, c: usize| g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c));
    if n <= 1000 {
        // Above 256 elements only generators are tried as the third factor.
        // That is equivalent: the set of c with (ab)c = a(bc) for all a, b
        // is closed under products.
        let thirds: Vec<usize> = if n <= 256 { (0..n).collect() } else { g.generators().to_vec() };
        for a in 0..n {
            for b in 0..n {
                for &c in &thirds {
                    ensure!(assoc(a, b, c), "({a} {b}) {c} != {a} ({b} {c})");
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10_000 {
        let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        ensure!(assoc(a, b, c), "({a} {b}) {c} != {a} ({b} {c})");
    }
    for nsub in g.normal_subgroups() {
        ensure!(n % nsub.order() == 0, "normal subgroup of order {} in group of order {n}", nsub.order());
        for &s in g.generators() {
            for &x in nsub.elements() {
                ensure!(nsub.contains(g.conj(x, s)), "normal subgroup not stable under generator {s}");
            }
        }
    }
    for h in [g.derived_subgroup(), g.center()] {
        ensure!(n % h.order() == 0, "subgroup order {} does not divide {n}", h.order());
    }
    let q = g.quotient(&g.derived_subgroup()).map_err(|e| e.to_string())?;
    ensure!(q.group().is_abelian(), "G/G' is not abelian");
    Ok(())
}

pub fn orthogonality(t: &CharacterTable) -> Check {
    let irr = t.irreducibles();
    ensure!(irr.len() == t.classes().len(), "{} irreducibles for {} classes", irr.len(), t.classes().len());
    for (i, a) in irr.iter().enumerate() {
        for (j, b) in irr.iter().enumerate() {
            let ip = t.inner_product(a, b).map_err(|e| e.to_string())?;
            ensure!(ip == kronecker(i, j), "<chi{i}, chi{j}> = {ip}");
        }
    }
    let order = t.group().order() as i64;
    let cc = t.classes();
    for a in 0..cc.len() {
        for b in 0..cc.len() {
            let mut s = Cyclotomic::zero();
            for chi in irr {
                s = &s + &(chi.value(a) * &chi.value(b).conjugate());
            }
            let want =
                if a == b { Cyclotomic::from_int(order / cc.size(a) as i64) } else { Cyclotomic::zero() };
            ensure!(s == want, "column sum over classes {a}, {b} is {s}");
        }
    }
    Ok(())
}

/// Frobenius reciprocity and the induced degree for every pair over `n`.
pub fn frobenius(t: &CharacterTable, n: &Subgroup) -> Check {
    let g = t.group();
    let nt = SubgroupTable::new(g, n).map_err(|e| e.to_string())?;
    let index = (g.order() / n.order()) as i64;
    for mu in nt.table().irreducibles() {
        let ind = induce(&nt, mu, t).map_err(|e| e.to_string())?;
        ensure!(*ind.degree() == mu.degree() * &Cyclotomic::from_int(index), "deg Ind mu != [G:N] deg mu");
        for chi in t.irreducibles() {
            let res = restrict(t, chi, &nt).map_err(|e| e.to_string())?;
            let lhs = t.inner_product(&ind, chi).map_err(|e| e.to_string())?;
            let rhs = nt.table().inner_product(mu, &res).map_err(|e| e.to_string())?;
            ensure!(lhs == rhs, "<Ind mu, chi> = {lhs} but <mu, Res chi> = {rhs}");
        }
    }
    Ok(())
}

/// `mu^g(x) = mu(g x g^-1)` as an index into the irreducibles of `N`.
fn conjugate_character(g: &FiniteGroup, nt: &SubgroupTable, mu: usize, x: usize) -> Option<usize> {
    let ntab = nt.table();
    let ncc = ntab.classes();
    let mu = ntab.irreducible(mu);
    let vals: Vec<Cyclotomic> = (0..ncc.len())
        .map(|c| {
            let h = nt.embedding()[ncc.representative(c)];
            let y = nt.position(g.mul(g.mul(x, h), g.inv(x))).unwrap();
            mu.value(ncc.class_of(y)).clone()
        })
        .collect();
    ntab.irreducibles().iter().position(|nu| nu.values() == vals.as_slice())
}

/// Constituents of each restriction to an abelian normal `n` form one orbit
/// with a common multiplicity.
pub fn clifford(t: &CharacterTable, n: &Subgroup) -> Check {
    let g = t.group();
    let nt = SubgroupTable::new(g, n).map_err(|e| e.to_string())?;
    for (i, chi) in t.irreducibles().iter().enumerate() {
        let m = nt.table().decompose(&restrict(t, chi, &nt).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let support: BTreeSet<usize> = (0..m.len()).filter(|&k| m[k] > 0).collect();
        let first = *support.iter().next().ok_or("empty restriction")?;
        let e = m[first];
        ensure!(support.iter().all(|&k| m[k] == e), "chi{i}: unequal multiplicities {m:?}");
        let orbit: BTreeSet<usize> =
            (0..g.order()).map(|x| conjugate_character(g, &nt, first, x).expect("conjugate is irreducible")).collect();
        ensure!(orbit == support, "chi{i}: constituents {support:?} are not the orbit {orbit:?}");
    }
    Ok(())
}

/// Deflation undoes inflation on `Irr(G/N)`, and inflation keeps inner
/// products.
pub fn inflate_deflate(t: &CharacterTable, n: &Subgroup) -> Check {
    let g = t.group();
    let q = g.quotient(n).map_err(|e| e.to_string())?;
    let qt = CharacterTable::compute(q.group_arc().clone()).map_err(|e| e.to_string())?;
    let lifted: Vec<ClassFunction> = qt
        .irreducibles()
        .iter()
        .map(|psi| inflate(&q, &qt, psi, t))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for (i, psi) in qt.irreducibles().iter().enumerate() {
        let back = deflate(t, &lifted[i], &q, &qt).map_err(|e| e.to_string())?;
        ensure!(&back == psi, "deflate(inflate(psi{i})) != psi{i}");
        for (j, phi) in qt.irreducibles().iter().enumerate() {
            let up = t.inner_product(&lifted[i], &lifted[j]).map_err(|e| e.to_string())?;
            let down = qt.inner_product(psi, phi).map_err(|e| e.to_string())?;
            ensure!(up == down, "inflation changes <psi{i}, psi{j}>");
        }
    }
    Ok(())
}

/// Every character-table property on `g` and its abelian normal subgroups.
pub fn character_laws(g: &Arc<FiniteGroup>) -> Check {
    let t = table(g);
    ensure!(t.len() == g.conjugacy_classes().len(), "class count differs from irreducible count");
    orthogonality(&t)?;
    for n in abelian_normals(g) {
        frobenius(&t, &n)?;
        clifford(&t, &n)?;
        inflate_deflate(&t, &n)?;
    }
    Ok(())
}

/// Local verdicts: lattice, definition and inertia agree; the commutator
/// necessary condition; the quotient correspondence over nested pairs.
pub fn local_laws(g: &Arc<FiniteGroup>) -> Check {
    let a = Analysis::new(g.clone()).map_err(|e| e.to_string())?;
    let t = a.table();
    let normals = abelian_normals(g);
    let derived = g.derived_subgroup();
    let whole = g.whole();
    let mut unram = Vec::new();
    for n in &normals {
        let u = a.is_unramified_over(n).map_err(|e| e.to_string())?;
        let p = a.is_pseudo_unramified_over(n).map_err(|e| e.to_string())?;
        let ud = unramified_over(t, n).map_err(|e| e.to_string())?.holds;
        let pd = pseudo_unramified_over(t, n).map_err(|e| e.to_string())?.holds;
        let ui = unramified_by_inertia(g, n).map_err(|e| e.to_string())?;
        let pi = pseudo_unramified_by_inertia(g, n).map_err(|e| e.to_string())?;
        ensure!(u == ud && ud == ui, "unramified over |N|={}: lattice {u}, definition {ud}, inertia {ui}", n.order());
        ensure!(p == pd && pd == pi, "pseudo over |N|={}: lattice {p}, definition {pd}, inertia {pi}", n.order());
        ensure!(!u || p, "unramified but not pseudo-unramified over |N|={}", n.order());
        if u {
            let c = g.commutator_subgroup(n, &whole);
            ensure!(c == *n || c == derived, "unramified over |N|={} but [N,G] is neither N nor G'", n.order());
        }
        unram.push(u);
    }
    for (i, n) in normals.iter().enumerate() {
        if !unram[i] {
            continue;
        }
        let q = g.quotient(n).map_err(|e| e.to_string())?;
        let qa = Analysis::new(q.group_arc().clone()).map_err(|e| e.to_string())?;
        for (j, m) in normals.iter().enumerate() {
            if i == j || !n.is_subset_of(m) {
                continue;
            }
            let below = qa.is_unramified_over(&q.image(m)).map_err(|e| e.to_string())?;
            ensure!(
                below == unram[j],
                "G unramified over |N|={}: over |M|={} gives {}, G/N over M/N gives {below}",
                n.order(),
                m.order(),
                unram[j]
            );
        }
    }
    Ok(())
}

/// Tower verdicts: implication, replay, quotient closure and the regular
/// representation equivalence.
pub fn tower_laws(g: &Arc<FiniteGroup>) -> Check {
    let a = Analysis::new(g.clone()).map_err(|e| e.to_string())?;
    let tu = a.decide(Property::Unramified).map_err(|e| e.to_string())?;
    let tp = a.decide(Property::PseudoUnramified).map_err(|e| e.to_string())?;
    ensure!(!tu.holds || tp.holds, "totally unramified but not totally pseudo-unramified");
    for c in [&tu, &tp] {
        if c.holds {
            ensure!(c.replay(g).map_err(|e| e.to_string())?, "{} certificate does not replay", c.property);
        }
    }
    let reg = a
        .is_complete_character(&regular_character(a.table()), &CompletenessOptions::default())
        .map_err(|e| e.to_string())?;
    ensure!(reg.complete == tp.holds, "regular complete = {}, totally pseudo = {}", reg.complete, tp.holds);
    if tu.holds {
        for k in g.normal_subgroups() {
            if k.is_trivial() || k.order() == g.order() {
                continue;
            }
            let q = g.quotient(k).map_err(|e| e.to_string())?;
            let qa = Analysis::new(q.group_arc().clone()).map_err(|e| e.to_string())?;
            let ok = qa.decide(Property::Unramified).map_err(|e| e.to_string())?.holds;
            ensure!(ok, "G/K with |K|={} is not totally unramified", k.order());
        }
    }
    Ok(())
}

/// Products of towers: pseudo x pseudo stays pseudo, unramified x abelian
/// stays unramified.
pub fn product_law(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> Check {
    let decide = |g: &Arc<FiniteGroup>, p: Property| -> Result<bool, String> {
        Ok(Analysis::new(g.clone()).map_err(|e| e.to_string())?.decide(p).map_err(|e| e.to_string())?.holds)
    };
    let ab = Arc::new(FiniteGroup::direct_product(a, b));
    if decide(a, Property::PseudoUnramified)? && decide(b, Property::PseudoUnramified)? {
        ensure!(decide(&ab, Property::PseudoUnramified)?, "product of totally pseudo-unramified groups is not");
    }
    if b.is_abelian() && decide(a, Property::Unramified)? {
        ensure!(decide(&ab, Property::Unramified)?, "totally unramified times abelian is not totally unramified");
    }
    Ok(())
}

/// A random surjection from a free group of rank `n <= 4` onto an abelian
/// group of order at most 12.
pub fn random_abelian_map(rng: &mut ChaCha8Rng) -> AbelianMap {
    loop {
        let n = rng.gen_range(1..=4);
        let mut factors = Vec::new();
        let mut order = 1u64;
        for _ in 0..rng.gen_range(1..=2) {
            let d = rng.gen_range(1..=6u64);
            if order * d <= 12 {
                factors.push(d);
                order *= d;
            }
        }
        if factors.is_empty() {
            factors.push(1);
        }
        let images: Vec<Vec<u64>> =
            (0..n).map(|_| factors.iter().map(|&d| rng.gen_range(0..d)).collect()).collect();
        let target = AbelianGroup::new(factors).unwrap();
        let phi = AbelianMap::new(target.clone(), images).unwrap();
        if phi.image().len() == target.order() {
            return phi;
        }
    }
}

/// Schreier generators lie in the kernel, the transversal is prefix-closed,
/// and the folded graph has index `|A|` and rank `|A|(n-1)+1`.
pub fn schreier_laws(phi: &AbelianMap) -> Check {
    let kg = kernel_generators(phi).map_err(|e| e.to_string())?;
    let a = phi.target.order();
    let n = phi.rank();
    let zero = phi.target.zero();
    for w in &kg.generators {
        ensure!(phi.apply(w) == zero, "generator {w} is not in the kernel");
    }
    ensure!(kg.transversal.len() == a, "transversal has {} words for |A| = {a}", kg.transversal.len());
    for t in &kg.transversal {
        let l = t.letters();
        for k in 0..l.len() {
            let prefix = FreeWord::from_letters(l[..k].to_vec());
            ensure!(kg.transversal.contains(&prefix), "prefix of {t} missing from the transversal");
        }
    }
    let expected = a * (n - 1) + 1;
    ensure!(kg.generators.len() == expected, "{} generators, expected {expected}", kg.generators.len());
    let graph = fold(&kg.generators, n);
    ensure!(graph.index() == Some(a), "folded index {:?}, expected {a}", graph.index());
    ensure!(graph.subgroup_rank() == expected, "folded rank {}, expected {expected}", graph.subgroup_rank());
    Ok(())
}

/// Count law per level, word shape, monomial residual action, invariance on
/// random matrices under every element, and real coefficients in real mode.
pub fn invariant_laws(g: &Arc<FiniteGroup>, rep: &Representation, field: FieldMode, verify: &VerifyOptions) -> Check {
    let opts = InvariantOptions { field, ..Default::default() };
    let set = invariant_generators(g, rep, &opts).map_err(|e| match e {
        Error::Unsupported(m) => format!("unsupported: {m}"),
        e => e.to_string(),
    })?;
    ensure!(set.len() == set.expected_count(), "{} generators, expected {}", set.len(), set.expected_count());
    let mut prev = set.variables.len();
    for (i, lv) in set.levels.iter().enumerate() {
        let acting = lv.subgroup.len() / lv.kernel.len().max(1);
        let want = acting * prev.saturating_sub(1) + 1;
        ensure!(lv.names.len() == want, "level {i}: {} generators, expected {want}", lv.names.len());
        if !lv.action.is_empty() {
            ensure!(lv.words.iter().all(|w| w.len() <= 3), "level {i}: word longer than 3");
            for m in &lv.action {
                for r in 0..m.rows() {
                    let nz = (0..m.cols()).filter(|&c| !m.get(r, c).is_zero()).count();
                    ensure!(nz == 1, "level {i}: residual action is not monomial");
                }
            }
        }
        prev = lv.names.len();
    }
    let report = verify_invariance(&set.generators(), rep, verify).map_err(|e| e.to_string())?;
    ensure!(report.elements == g.order(), "verified {} of {} elements", report.elements, g.order());
    ensure!(report.ok(), "generators {:?} are not invariant", report.failing_generators());
    if field == FieldMode::Real {
        if let Some(polys) = set.expanded(20_000) {
            for (i, p) in polys.iter().enumerate() {
                ensure!(&p.conjugate() == p, "generator {i} has non-real coefficients");
            }
        }
    }
    Ok(())
}
