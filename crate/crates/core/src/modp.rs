//! Arithmetic and dense linear algebra over a prime field `F_p`, `p < 2^32`.

pub fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of exact multiplicative order `e` in `F_p^*`; requires `e | p-1`.
pub fn root_of_unity(e: u64, p: u64) -> u64 {
    assert_eq!((p - 1) % e, 0);
    let fs = prime_factors(p - 1);
    let g = (2..p)
        .find(|&g| fs.iter().all(|&q| pow(g, (p - 1) / q, p) != 1))
        .expect("primitive root exists");
    pow(g, (p - 1) / e, p)
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, i);
        let s = inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * s % p;
        }
        let pivot = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let f = p - row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + f * y) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of the right null space `{x : A x = 0}` of an `n x m` matrix.
pub fn nullspace(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let m = a.first().map_or(0, |r| r.len());
    let mut rows = a.to_vec();
    let pivots = rref(&mut rows, p);
    let mut out = Vec::new();
    for free in (0..m).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; m];
        v[free] = 1;
        for (row, &pc) in rows.iter().zip(&pivots) {
            v[pc] = (p - row[free]) % p;
        }
        out.push(v);
    }
    out
}

/// Characteristic polynomial `det(xI - A)`, coefficients from the constant
/// term up, computed through a Hessenberg reduction.
pub fn charpoly(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.to_vec();
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if i != j + 1 {
            h.swap(i, j + 1);
            for row in h.iter_mut() {
                row.swap(i, j + 1);
            }
        }
        let s = inv(h[j + 1][j], p);
        for i in j + 2..n {
            let f = h[i][j] * s % p;
            if f == 0 {
                continue;
            }
            for k in 0..n {
                let v = h[j + 1][k];
                h[i][k] = (h[i][k] + (p - f) * v) % p;
            }
            for row in h.iter_mut() {
                let v = row[i];
                row[j + 1] = (row[j + 1] + f * v) % p;
            }
        }
    }
    // p_k(x) = det(xI - H_k) for the leading k x k block.
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=n {
        let hk = k - 1;
        let mut next = vec![0u64; k + 1];
        for (d, &c) in polys[k - 1].iter().enumerate() {
            next[d + 1] = (next[d + 1] + c) % p;
            next[d] = (next[d] + (p - h[hk][hk]) * c) % p;
        }
        let mut prod = 1u64;
        for i in (0..hk).rev() {
            prod = prod * h[i + 1][i] % p;
            if prod == 0 {
                break;
            }
            let f = prod * h[i][hk] % p;
            if f != 0 {
                for (d, &c) in polys[i].iter().enumerate() {
                    next[d] = (next[d] + (p - f) * c) % p;
                }
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Roots of a polynomial by exhaustive evaluation.
pub fn roots(poly: &[u64], p: u64) -> Vec<u64> {
    (0..p)
        .filter(|&x| poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0)
        .collect()
}
