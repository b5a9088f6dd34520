//! Character tables by simultaneous diagonalization of class matrices over a
//! prime field, followed by exact lifting of the values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::modp;
use crate::rational::Rational;

/// Smallest prime `p = 1 (mod e)` with `p > 2 sqrt(n)`.
pub fn choose_prime(e: u64, n: u64) -> u64 {
    let mut p = e + 1;
    while !(modp::is_prime(p) && (p as f64) > 2.0 * (n as f64).sqrt()) {
        p += e;
    }
    p
}

/// Class structure constants `c_ijk = #{(x, y) in K_i x K_j : xy = g_k}`,
/// stored per `j` as sparse `(i, k, c)` triples.
fn class_constants(g: &FiniteGroup) -> Vec<Vec<(u32, u32, u32)>> {
    let cc = g.conjugacy_classes();
    let r = cc.len();
    let mut out = Vec::with_capacity(r);
    let mut counts = vec![0u32; r];
    for j in 0..r {
        let mut entries = Vec::new();
        for k in 0..r {
            let gk = cc.representative(k);
            for &y in cc.class(j) {
                counts[cc.class_of(g.mul(gk, g.inv(y)))] += 1;
            }
            for (i, c) in counts.iter_mut().enumerate() {
                if *c > 0 {
                    entries.push((i as u32, k as u32, *c));
                    *c = 0;
                }
            }
        }
        out.push(entries);
    }
    out
}

/// Eigenvectors `w` (normalized so `w[0] = 1`) of the class algebra acting on
/// `F_p^r`: one per irreducible character, `w_i = omega_chi(K_i)`.
fn central_characters(g: &FiniteGroup, p: u64, seed: u64) -> Result<Vec<Vec<u64>>> {
    let r = g.conjugacy_classes().len();
    let constants = class_constants(g);
    let dense = |coef: &[u64]| -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; r]; r];
        for (j, entries) in constants.iter().enumerate() {
            if coef[j] == 0 {
                continue;
            }
            for &(i, k, c) in entries {
                let v = &mut m[i as usize][k as usize];
                *v = (*v + coef[j] * c as u64) % p;
            }
        }
        m
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut identity = vec![vec![0u64; r]; r];
    for (i, row) in identity.iter_mut().enumerate() {
        row[i] = 1;
    }
    let mut pending: Vec<Vec<Vec<u64>>> = vec![identity];
    let mut done: Vec<Vec<u64>> = Vec::new();
    while let Some(space) = pending.pop() {
        if space.len() == 1 {
            done.push(space.into_iter().next().unwrap());
            continue;
        }
        let mut split = None;
        // random combinations first, then single class matrices
        for attempt in 0..(20 + r) {
            let coef: Vec<u64> = if attempt < 20 {
                (0..r).map(|_| rng.gen_range(0..p)).collect()
            } else {
                (0..r).map(|j| u64::from(j == attempt - 20)).collect()
            };
            let parts = split_space(&dense(&coef), &space, p);
            if parts.len() > 1 {
                split = Some(parts);
                break;
            }
        }
        match split {
            Some(parts) => pending.extend(parts),
            None => return Err(Error::Internal("class algebra eigenspace did not split".into())),
        }
    }
    let mut out = Vec::with_capacity(done.len());
    for mut w in done {
        if w[0] == 0 {
            return Err(Error::Internal("eigenvector vanishes at the identity".into()));
        }
        let s = modp::inv(w[0], p);
        for x in w.iter_mut() {
            *x = *x * s % p;
        }
        out.push(w);
    }
    if out.len() != r {
        return Err(Error::Internal("wrong number of central characters".into()));
    }
    Ok(out)
}

/// Splits an invariant subspace (rows in reduced echelon form) into the
/// eigenspaces of `m` restricted to it.
fn split_space(m: &[Vec<u64>], space: &[Vec<u64>], p: u64) -> Vec<Vec<Vec<u64>>> {
    let d = space.len();
    let r = m.len();
    let pivots: Vec<usize> = space.iter().map(|v| v.iter().position(|&x| x != 0).unwrap()).collect();
    // a[row][col]: coordinate `row` of m * space[col]
    let mut a = vec![vec![0u64; d]; d];
    for (col, v) in space.iter().enumerate() {
        for (row, &pc) in pivots.iter().enumerate() {
            let mut s = 0u64;
            for k in 0..r {
                if v[k] != 0 && m[pc][k] != 0 {
                    s = (s + m[pc][k] * v[k]) % p;
                }
            }
            a[row][col] = s;
        }
    }
    let roots = modp::roots(&modp::charpoly(&a, p), p);
    if roots.len() <= 1 {
        return vec![space.to_vec()];
    }
    roots
        .into_iter()
        .map(|lambda| {
            let shifted: Vec<Vec<u64>> = a
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, &x)| if i == j { (x + p - lambda) % p } else { x })
                        .collect()
                })
                .collect();
            let mut vecs: Vec<Vec<u64>> = modp::nullspace(&shifted, p)
                .into_iter()
                .map(|coords| {
                    let mut v = vec![0u64; r];
                    for (c, b) in coords.iter().zip(space) {
                        if *c != 0 {
                            for (x, y) in v.iter_mut().zip(b) {
                                *x = (*x + c * y) % p;
                            }
                        }
                    }
                    v
                })
                .collect();
            modp::rref(&mut vecs, p);
            vecs
        })
        .collect()
}

/// Irreducible characters as value vectors over the classes, unsorted.
pub(crate) fn irreducible_values(g: &FiniteGroup) -> Result<(Vec<Vec<Cyclotomic>>, u32)> {
    let n = g.order() as u64;
    let cc = g.conjugacy_classes();
    let r = cc.len();
    let e = g.exponent() as u64;
    let p = choose_prime(e, n);
    let z = modp::root_of_unity(e, p);
    let omegas = central_characters(g, p, 0x5eed ^ n)?;
    let sizes: Vec<u64> = (0..r).map(|i| cc.size(i) as u64).collect();
    let mut out = Vec::with_capacity(r);
    for w in omegas {
        let s = (0..r).fold(0u64, |acc, i| {
            (acc + w[i] * w[cc.inverse_class(i)] % p * modp::inv(sizes[i] % p, p)) % p
        });
        if s == 0 {
            return Err(Error::Internal("degenerate degree equation".into()));
        }
        let target = n % p * modp::inv(s, p) % p;
        let degree = (1..=n)
            .take_while(|d| d * d <= n)
            .find(|d| n % d == 0 && d * d % p == target)
            .ok_or_else(|| Error::Internal("no degree solves the degree equation".into()))?;
        let modp_vals: Vec<u64> = (0..r).map(|i| w[i] * degree % p * modp::inv(sizes[i] % p, p) % p).collect();
        let mut vals = Vec::with_capacity(r);
        for i in 0..r {
            let o = cc.rep_order(i) as u64;
            let zo = modp::pow(z, e / o, p);
            let powers: Vec<u64> = (0..o).map(|l| modp_vals[cc.power_class(g, i, l as i64)]).collect();
            let inv_o = modp::inv(o % p, p);
            let mut terms = Vec::new();
            let mut total = 0u64;
            for k in 0..o {
                let zk_inv = modp::inv(modp::pow(zo, k, p), p);
                let mut acc = 0u64;
                let mut t = 1u64;
                for &v in &powers {
                    acc = (acc + v * t) % p;
                    t = t * zk_inv % p;
                }
                let mk = acc * inv_o % p;
                if mk > degree {
                    return Err(Error::Internal("eigenvalue multiplicity out of range".into()));
                }
                total += mk;
                if mk > 0 {
                    terms.push(((k * (e / o)) as i64, Rational::from_int(mk as i64)));
                }
            }
            if total != degree {
                return Err(Error::Internal("eigenvalue multiplicities do not sum to the degree".into()));
            }
            vals.push(Cyclotomic::from_exponents(e as u32, &terms));
        }
        out.push(vals);
    }
    Ok((out, e as u32))
}
