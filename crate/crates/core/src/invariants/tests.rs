use std::sync::Arc;

use super::*;
use crate::catalog;
use crate::group::DEFAULT_BUDGET;

fn build(spec: crate::group::input::GroupSpec) -> Arc<FiniteGroup> {
    Arc::new(spec.build(DEFAULT_BUDGET).unwrap())
}

fn real() -> InvariantOptions {
    InvariantOptions { field: FieldMode::Real, ..Default::default() }
}

fn q(n: i64, d: i64) -> Cyclotomic {
    Cyclotomic::from_rational(Rational::new(n, d))
}

fn omega() -> Cyclotomic {
    Cyclotomic::root_of_unity(3, 1)
}

fn sqrt3() -> Cyclotomic {
    &Cyclotomic::root_of_unity(12, 1) + &Cyclotomic::root_of_unity(12, -1)
}

/// Exact oracle: every generator is fixed by the substitution of every group
/// element.
fn fixed_by_substitution(set: &GeneratorSet, rep: &Representation) -> bool {
    let polys = set.expanded(usize::MAX).expect("polynomial generators");
    polys.iter().all(|p| rep.images().iter().all(|m| &p.substitute(m) == p))
}

fn z3() -> (Arc<FiniteGroup>, Representation) {
    let g = build(catalog::cyclic(3));
    let rep = Representation::permutation(&g).unwrap();
    (g, rep)
}

fn s3() -> (Arc<FiniteGroup>, Representation) {
    let g = build(catalog::symmetric(3));
    let rep = Representation::permutation(&g).unwrap();
    (g, rep)
}

fn poly(e: &Expr) -> NcPoly {
    e.expand().unwrap()
}

fn x(i: usize) -> NcPoly {
    NcPoly::var(i)
}

fn sum(ps: &[NcPoly]) -> NcPoly {
    ps.iter().fold(NcPoly::zero(), |a, p| a.add(p))
}

fn prod(ps: &[&NcPoly]) -> NcPoly {
    ps.iter().fold(NcPoly::constant(Cyclotomic::one()), |a, p| a.mul(p))
}

fn f1(a: usize, b: usize, c: usize) -> NcPoly {
    sum(&[prod(&[&x(a), &x(b)]), prod(&[&x(b), &x(c)]), prod(&[&x(c), &x(a)])])
}

fn f2(a: usize, b: usize, c: usize) -> NcPoly {
    let v = [a, b, c];
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    sum(&perms.iter().map(|p| prod(&[&x(v[p[0]]), &x(v[p[1]]), &x(v[p[2]])])).collect::<Vec<_>>())
}

fn f3(a: usize, b: usize, c: usize) -> NcPoly {
    let s = sum(&[x(0), x(1), x(2)]);
    sum(&[prod(&[&x(a), &s, &x(b)]), prod(&[&x(b), &s, &x(c)]), prod(&[&x(c), &s, &x(a)])])
}

#[test]
fn z3_complex_generators_are_the_section_words() {
    let (g, rep) = z3();
    let set = invariant_generators(&g, &rep, &InvariantOptions::default()).unwrap();
    assert_eq!(set.method, Method::Complete);
    assert_eq!(set.len(), 7);
    let level = &set.levels[0];
    let names: Vec<String> = level.letters.iter().map(|l| l.name.clone()).collect();
    assert_eq!(names, ["a", "b", "c"]);
    let w = omega();
    let wb = w.conjugate();
    let one = Cyclotomic::one();
    assert_eq!(level.letters[0].coords, vec![one.clone(), one.clone(), one.clone()]);
    assert_eq!(level.letters[1].coords, vec![one.clone(), w.clone(), wb.clone()]);
    assert_eq!(level.letters[2].coords, vec![one, wb, w]);
    let words: Vec<String> = level.words.iter().map(|w| w.format(&names)).collect();
    let mut sorted = words.clone();
    sorted.sort();
    let mut expected = vec!["a", "b c", "b a c", "c b", "c a b", "b^3", "c^3"];
    expected.sort();
    assert_eq!(sorted, expected, "{words:?}");
    assert!(fixed_by_substitution(&set, &rep));
}

#[test]
fn z3_real_generators_match_closed_forms() {
    let (g, rep) = z3();
    let set = invariant_generators(&g, &rep, &real()).unwrap();
    assert_eq!(set.names(), ["w1", "w2", "w3", "w4", "w5", "w6", "w7"]);
    let local: Vec<String> = set.levels[0].local.iter().map(|e| e.render(&["a".into(), "b".into(), "c".into()])).collect();
    assert_eq!(local[0], "a");
    assert_eq!(local[1], "b c + c b");
    let gens = set.generators();
    let p: Vec<NcPoly> = gens.iter().map(poly).collect();
    for w in &p {
        assert_eq!(w, &w.conjugate(), "real coefficients");
    }
    let s = sqrt3();
    let (x0, x1, x2) = (x(0), x(1), x(2));
    let all = sum(&[x0.clone(), x1.clone(), x2.clone()]);
    let squares = sum(&[prod(&[&x0, &x0]), prod(&[&x1, &x1]), prod(&[&x2, &x2])]);
    let w1 = all.clone();
    let w2 = squares.scale(&q(2, 1)).sub(&f1(0, 1, 2)).sub(&f1(0, 2, 1));
    let w3 = f1(0, 1, 2).sub(&f1(0, 2, 1)).scale(&s);
    let w4 = sum(&[prod(&[&x0, &all, &x0]), prod(&[&x1, &all, &x1]), prod(&[&x2, &all, &x2])])
        .scale(&q(3, 1))
        .sub(&prod(&[&all, &all, &all]));
    let w5 = f3(0, 1, 2).sub(&f3(0, 2, 1)).scale(&s);
    let cubes = sum(&[prod(&[&x0, &x0, &x0]), prod(&[&x1, &x1, &x1]), prod(&[&x2, &x2, &x2])]);
    let mixed = sum(&[f2(0, 0, 1), f2(0, 0, 2), f2(0, 1, 1), f2(0, 2, 2), f2(1, 1, 2), f2(1, 2, 2)]);
    let w6 = cubes.add(&f2(0, 1, 2)).scale(&q(2, 1)).sub(&mixed.scale(&q(1, 2)));
    let w7 = sum(&[f2(0, 0, 2), f2(0, 1, 1), f2(1, 2, 2)])
        .sub(&sum(&[f2(0, 0, 1), f2(0, 2, 2), f2(1, 1, 2)]))
        .scale(&s.scale(&Rational::new(1, 2)));
    let expected = [w1, w2, w3, w4, w5, w6, w7];
    for (i, (got, want)) in p.iter().zip(&expected).enumerate() {
        assert_eq!(got, want, "w{}", i + 1);
    }
}

#[test]
fn s3_real_generators_match_the_example() {
    let (g, rep) = s3();
    let set = invariant_generators(&g, &rep, &real()).unwrap();
    assert_eq!(set.levels.len(), 2);
    assert_eq!(set.len(), 13);
    assert_eq!(set.levels[0].names, ["w1", "w2", "w3", "w4", "w5", "w6", "w7"]);
    // The transposition fixes w1, w2, w4, w6 and negates w3, w5, w7.
    let t = set.levels[0].action[0].clone();
    let signs: Vec<i64> = (0..7).map(|i| t.get(i, i).to_i64().unwrap()).collect();
    assert_eq!(signs, [1, 1, -1, 1, -1, 1, -1]);
    assert_eq!(t, Matrix::from_fn(7, 7, |i, j| if i == j { Cyclotomic::from_int(signs[i]) } else { Cyclotomic::zero() }));
    let names: Vec<String> = set.levels[1].letters.iter().map(|l| l.name.clone()).collect();
    let local: Vec<String> = set.levels[1].local.iter().map(|e| e.render(&names)).collect();
    assert_eq!(
        local,
        [
            "w1", "w2", "w4", "w6", "w3 w3", "w3 w5", "w3 w7", "w5 w3", "w7 w3", "w3 w1 w3", "w3 w2 w3", "w3 w4 w3",
            "w3 w6 w3"
        ]
    );
    assert!(fixed_by_substitution(&set, &rep));
    let report = verify_invariance(&set.generators(), &rep, &VerifyOptions::default()).unwrap();
    assert!(report.ok());
}

#[test]
fn s3_complex_count_and_invariance() {
    let (g, rep) = s3();
    let set = invariant_generators(&g, &rep, &InvariantOptions::default()).unwrap();
    assert_eq!(set.len(), 13);
    assert!(fixed_by_substitution(&set, &rep));
}

#[test]
fn s4_standard_has_49_generators() {
    let g = build(catalog::symmetric(4));
    let rep = Representation::standard(&g).unwrap();
    for opts in [InvariantOptions::default(), real()] {
        let set = invariant_generators(&g, &rep, &opts).unwrap();
        assert_eq!(set.levels.len(), 3);
        assert_eq!(set.levels.iter().map(|l| l.names.len()).collect::<Vec<_>>(), [9, 25, 49]);
        let vopts = VerifyOptions { trials: 1, dim: 2, seed: 7 };
        assert!(verify_invariance(&set.generators(), &rep, &vopts).unwrap().ok());
    }
}

#[test]
fn non_invariant_expression_is_flagged() {
    let (_, rep) = s3();
    let exprs = vec![Expr::var(0), Expr::sum(vec![Expr::var(0), Expr::var(1), Expr::var(2)])];
    let report = verify_invariance(&exprs, &rep, &VerifyOptions::default()).unwrap();
    assert!(!report.ok());
    assert_eq!(report.failing_generators(), [0]);
}

#[test]
fn klein_four_eigenvectors_in_s4() {
    let g = build(catalog::symmetric(4));
    let rep = Representation::standard(&g).unwrap();
    let v = g.normal_subgroups().iter().find(|n| n.order() == 4).unwrap().clone();
    let basis = isotypic_basis(&g, &rep, &v).unwrap();
    assert_eq!(basis.len(), 3);
    let mut chars: Vec<usize> = basis.iter().map(|b| b.character).collect();
    chars.sort_unstable();
    assert_eq!(chars, [1, 2, 3]);
}

fn diagonal_z4(k: usize) -> (Arc<FiniteGroup>, Representation) {
    let g = build(catalog::cyclic(4));
    let m = Matrix::scalar(k, &Cyclotomic::i());
    let rep = Representation::from_generators(&g, k, vec![m]).unwrap();
    (g, rep)
}

#[test]
fn abelian_route_uses_schreier_words() {
    let g = build(catalog::cyclic(3));
    let rep = Representation::from_generators(&g, 2, vec![Matrix::scalar(2, &omega())]).unwrap();
    let set = invariant_generators(&g, &rep, &InvariantOptions::default()).unwrap();
    assert_eq!(set.method, Method::Abelian);
    assert_eq!(set.len(), 4);
    assert!(set.levels[0].words.iter().any(|w| w.letters().iter().any(|l| l.inverse)));
    let report = verify_invariance(&set.generators(), &rep, &VerifyOptions::default()).unwrap();
    assert!(report.ok());

    let (g, rep) = diagonal_z4(1);
    let set = invariant_generators(&g, &rep, &InvariantOptions::default()).unwrap();
    assert_eq!(set.len(), 1);
    assert!(fixed_by_substitution(&set, &rep));
    assert_eq!(set.expanded(10).unwrap()[0], NcPoly::monomial(vec![0; 4], Cyclotomic::one()));
}

#[test]
fn kernel_of_the_action_is_factored_out() {
    let g = build(catalog::symmetric(3));
    // Generators are a transposition and a 3-cycle.
    let sign = vec![Matrix::scalar(1, &Cyclotomic::from_int(-1)), Matrix::identity(1)];
    let rep = Representation::from_generators(&g, 1, sign).unwrap();
    let set = invariant_generators(&g, &rep, &real()).unwrap();
    assert_eq!(set.effective_order, 2);
    assert_eq!(set.warnings.len(), 1);
    assert_eq!(set.expanded(10).unwrap(), vec![NcPoly::monomial(vec![0, 0], Cyclotomic::one())]);
}

#[test]
fn trivial_action_returns_the_variables() {
    let g = build(catalog::cyclic(1));
    let rep = Representation::from_generators(&g, 2, vec![Matrix::identity(2)]).unwrap();
    let set = invariant_generators(&g, &rep, &InvariantOptions::default()).unwrap();
    assert_eq!(set.method, Method::Trivial);
    assert_eq!(set.names(), ["x", "y"]);
}

#[test]
fn z4_scalar_action_is_complete() {
    let (g, rep) = diagonal_z4(2);
    let set = invariant_generators(&g, &rep, &InvariantOptions::default()).unwrap();
    assert_eq!(set.method, Method::Complete);
    assert_eq!(set.len(), 5);
    assert!(fixed_by_substitution(&set, &rep));
}

#[test]
fn real_mode_rejects_complex_matrices() {
    let (g, rep) = diagonal_z4(2);
    assert!(matches!(invariant_generators(&g, &rep, &real()), Err(Error::Input(_))));
}

#[test]
fn regular_representation_of_s3_is_complete() {
    let g = build(catalog::symmetric(3));
    let rep = Representation::regular(&g);
    let set = invariant_generators(&g, &rep, &real()).unwrap();
    assert_eq!(set.len(), 6 * 5 + 1);
    let vopts = VerifyOptions { trials: 1, dim: 2, seed: 1 };
    assert!(verify_invariance(&set.generators(), &rep, &vopts).unwrap().ok());
}

#[test]
fn expression_normalization_flattens() {
    let e = Expr::sum(vec![
        Expr::sum(vec![Expr::var(0), Expr::scalar(Cyclotomic::zero())]),
        Expr::scale(q(2, 1), Expr::scale(q(3, 1), Expr::var(1))),
    ]);
    let n = e.normalize();
    assert_eq!(n.render(&["x".into(), "y".into()]), "x + 6 y");
    assert_eq!(poly(&n), poly(&e));
}

fn rotation(order: usize, m: u32) -> (Arc<FiniteGroup>, Representation) {
    let g = build(catalog::cyclic(order));
    let z = Cyclotomic::root_of_unity(m, 1);
    let (c, s) = {
        let zi = z.conjugate();
        let half = Rational::new(1, 2);
        ((&z + &zi).scale(&half), (&(&z - &zi) * &(-Cyclotomic::i())).scale(&half))
    };
    let r = Matrix::from_rows(vec![vec![c.clone(), -s.clone()], vec![s, c]]);
    let rep = Representation::from_generators(&g, 2, vec![r]).unwrap();
    (g, rep)
}

#[test]
fn real_abelian_rotations() {
    // A fifth of a turn: a conjugation-stable transversal exists.
    let (g, rep) = rotation(5, 5);
    let set = invariant_generators(&g, &rep, &real()).unwrap();
    assert_eq!(set.method, Method::Abelian);
    assert_eq!(set.len(), 6);
    for e in set.generators() {
        let p = verify_invariance(&[e], &rep, &VerifyOptions { trials: 1, ..Default::default() }).unwrap();
        assert!(p.ok());
    }
    // A quarter turn: the element of order two has no self-conjugate word.
    let (g, rep) = rotation(4, 4);
    assert!(matches!(invariant_generators(&g, &rep, &real()), Err(Error::Unsupported(_))));
    assert_eq!(invariant_generators(&g, &rep, &InvariantOptions::default()).unwrap().len(), 5);
}
