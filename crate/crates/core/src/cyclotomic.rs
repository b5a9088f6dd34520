//! Exact arithmetic in cyclotomic fields `Q(zeta_m)`.
//!
//! An element is stored in the power basis `1, z, ..., z^(phi(m)-1)` modulo
//! the cyclotomic polynomial. Operands with different moduli are lifted to
//! the lcm, with the compatible convention `zeta_m = zeta_(km)^k`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{self, Field};
use crate::rational::Rational;

struct Basis {
    m: u32,
    phi: usize,
    /// `z^k` in the power basis for `0 <= k < m`, as sparse integer vectors.
    powers: Vec<Vec<(usize, i64)>>,
}

fn cyclotomic_poly_int(m: u32) -> Vec<i64> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by every proper divisor's polynomial.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in (1..m).filter(|d| m % d == 0) {
        let den = cyclotomic_poly_int(d);
        num = exact_div(&num, &den);
    }
    cache.write().unwrap().insert(m, num.clone());
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd];
        q[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

/// The cyclotomic polynomial `Phi_m`, constant term first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    cyclotomic_poly_int(m.max(1))
}

pub fn euler_phi(m: u32) -> usize {
    (1..=m).filter(|k| k.gcd(&m) == 1).count()
}

fn basis(m: u32) -> Arc<Basis> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Basis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.read().unwrap().get(&m) {
        return b.clone();
    }
    let poly = cyclotomic_poly_int(m);
    let phi = poly.len() - 1;
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..m {
        powers.push(cur.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect());
        // multiply by z and reduce with z^phi = -sum poly[i] z^i
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1] - top * poly[i];
        }
        cur[0] = -top * poly[0];
    }
    let b = Arc::new(Basis { m, phi, powers });
    cache.write().unwrap().insert(m, b.clone());
    b
}

#[derive(Clone)]
pub struct Cyclotomic {
    m: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero() -> Cyclotomic {
        Cyclotomic { m: 1, coeffs: vec![Rational::ZERO] }
    }

    pub fn one() -> Cyclotomic {
        Self::from_rational(Rational::ONE)
    }

    pub fn from_int(n: i64) -> Cyclotomic {
        Self::from_rational(Rational::from_int(n))
    }

    pub fn from_rational(q: Rational) -> Cyclotomic {
        Cyclotomic { m: 1, coeffs: vec![q] }
    }

    /// `zeta_m^k`.
    pub fn root_of_unity(m: u32, k: i64) -> Cyclotomic {
        assert!(m >= 1);
        let b = basis(m);
        let k = k.rem_euclid(m as i64) as usize;
        let mut coeffs = vec![Rational::ZERO; b.phi];
        for &(i, c) in &b.powers[k] {
            coeffs[i] = Rational::from_int(c);
        }
        Cyclotomic { m, coeffs }
    }

    /// The imaginary unit `zeta_4`.
    pub fn i() -> Cyclotomic {
        Self::root_of_unity(4, 1)
    }

    /// Builds an element from power-basis coefficients.
    pub fn from_coeffs(m: u32, coeffs: Vec<Rational>) -> Result<Cyclotomic> {
        if m == 0 {
            return Err(Error::Input("modulus must be positive".into()));
        }
        let phi = basis(m).phi;
        if coeffs.len() != phi {
            return Err(Error::Input(format!(
                "modulus {m} needs {phi} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Cyclotomic { m, coeffs })
    }

    /// Sum of `c_k zeta_m^k` over arbitrary exponents.
    pub fn from_exponents(m: u32, terms: &[(i64, Rational)]) -> Cyclotomic {
        let b = basis(m);
        let mut coeffs = vec![Rational::ZERO; b.phi];
        for (k, c) in terms {
            if c.is_zero() {
                continue;
            }
            for &(i, v) in &b.powers[k.rem_euclid(m as i64) as usize] {
                coeffs[i] = &coeffs[i] + &(c * &Rational::from_int(v));
            }
        }
        Cyclotomic { m, coeffs }
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    pub fn is_rational_integer(&self) -> bool {
        self.is_rational() && self.coeffs[0].is_integer()
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_rational()?.to_i64()
    }

    pub fn is_real(&self) -> bool {
        *self == self.conjugate()
    }

    /// The same element written over `Q(zeta_target)`; `target` must be a
    /// multiple of the current modulus.
    pub fn lift(&self, target: u32) -> Cyclotomic {
        if target == self.m {
            return self.clone();
        }
        assert_eq!(target % self.m, 0, "lift target must be a multiple of the modulus");
        let k = (target / self.m) as i64;
        let terms: Vec<(i64, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 * k, c.clone()))
            .collect();
        Self::from_exponents(target, &terms)
    }

    /// The element written over `Q(zeta_target)` if it lies in that subfield;
    /// `target` must divide the current modulus.
    pub fn restrict_modulus(&self, target: u32) -> Option<Cyclotomic> {
        if target == self.m {
            return Some(self.clone());
        }
        if self.m % target != 0 {
            return None;
        }
        let phi_t = basis(target).phi;
        let rows: Vec<Vec<Rational>> = (0..phi_t)
            .map(|j| Cyclotomic::root_of_unity(target, j as i64).lift(self.m).coeffs)
            .collect();
        let x = field::solve_in_span(&rows, &self.coeffs)?;
        Some(Cyclotomic { m: target, coeffs: x })
    }

    /// Rewrites the element over the smallest modulus that contains it.
    pub fn reduce_modulus(&self) -> Cyclotomic {
        if self.is_rational() {
            return Cyclotomic::from_rational(self.coeffs[0].clone());
        }
        let mut divs: Vec<u32> = (1..self.m).filter(|d| self.m % d == 0).collect();
        divs.sort_unstable();
        for d in divs {
            if let Some(r) = self.restrict_modulus(d) {
                return r;
            }
        }
        self.clone()
    }

    fn common(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let m = a.m.lcm(&b.m);
        (a.lift(m), b.lift(m))
    }

    /// Applies the Galois automorphism `zeta_m -> zeta_m^k` (`k` coprime to m).
    pub fn galois(&self, k: i64) -> Cyclotomic {
        assert!(self.m == 1 || (k.rem_euclid(self.m as i64) as u32).gcd(&self.m) == 1, "exponent must be a unit");
        let terms: Vec<(i64, Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 * k, c.clone()))
            .collect();
        Self::from_exponents(self.m, &terms)
    }

    /// Complex conjugation `zeta -> zeta^-1`.
    pub fn conjugate(&self) -> Cyclotomic {
        if self.m <= 2 {
            return self.clone();
        }
        self.galois(-1)
    }

    pub fn scale(&self, q: &Rational) -> Cyclotomic {
        Cyclotomic { m: self.m, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn inv(&self) -> Result<Cyclotomic> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Cyclotomic::from_rational(self.coeffs[0].recip().unwrap()));
        }
        // Solve (self * x) = 1 through the multiplication matrix.
        let phi = self.coeffs.len();
        let rows: Vec<Vec<Rational>> = (0..phi)
            .map(|j| (self * &Cyclotomic::root_of_unity(self.m, j as i64)).coeffs)
            .collect();
        let mut one = vec![Rational::ZERO; phi];
        one[0] = Rational::ONE;
        let x = field::solve_in_span(&rows, &one)
            .ok_or_else(|| Error::Internal("cyclotomic inverse".into()))?;
        Ok(Cyclotomic { m: self.m, coeffs: x })
    }

    pub fn div(&self, o: &Cyclotomic) -> Result<Cyclotomic> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Cyclotomic {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under the ring map `zeta_M -> z`, where `z` has order `M` in
    /// `F_p` and `M` is a multiple of the modulus.
    pub fn to_mod_p(&self, big_m: u32, z: u64, p: u64) -> Option<u64> {
        assert_eq!(big_m % self.m, 0);
        let step = crate::modp::pow(z, (big_m / self.m) as u64, p);
        let mut acc = 0u64;
        let mut zk = 1u64;
        for c in &self.coeffs {
            if !c.is_zero() {
                acc = (acc + c.mod_p(p)? * zk) % p;
            }
            zk = zk * step % p;
        }
        Some(acc)
    }

    /// Numerical value, for display and sanity checks only.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let t = std::f64::consts::TAU * k as f64 / self.m as f64;
            re += c.to_f64() * t.cos();
            im += c.to_f64() * t.sin();
        }
        (re, im)
    }

    /// Lexicographic comparison of coefficient vectors over a common modulus.
    pub fn cmp_coeffs(&self, o: &Cyclotomic) -> std::cmp::Ordering {
        let (a, b) = Self::common(self, o);
        a.coeffs.cmp(&b.coeffs)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, o: &Cyclotomic) -> bool {
        if self.m == o.m {
            return self.coeffs == o.coeffs;
        }
        let (a, b) = Self::common(self, o);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: &Cyclotomic) -> Cyclotomic {
        if self.m != o.m {
            let (a, b) = Cyclotomic::common(self, o);
            return &a + &b;
        }
        Cyclotomic {
            m: self.m,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: &Cyclotomic) -> Cyclotomic {
        if self.m != o.m {
            let (a, b) = Cyclotomic::common(self, o);
            return &a - &b;
        }
        Cyclotomic {
            m: self.m,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: &Cyclotomic) -> Cyclotomic {
        if self.is_rational() {
            return o.scale(&self.coeffs[0]);
        }
        if o.is_rational() {
            return self.scale(&o.coeffs[0]);
        }
        if self.m != o.m {
            let (a, b) = Cyclotomic::common(self, o);
            return &a * &b;
        }
        let b = basis(self.m);
        let phi = b.phi;
        let mut acc = vec![Rational::ZERO; 2 * phi - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    acc[i + j] = &acc[i + j] + &(x * y);
                }
            }
        }
        let mut coeffs: Vec<Rational> = acc[..phi].to_vec();
        for (k, c) in acc.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for &(i, v) in &b.powers[k % b.m as usize] {
                coeffs[i] = &coeffs[i] + &(c * &Rational::from_int(v));
            }
        }
        Cyclotomic { m: self.m, coeffs }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, o: Cyclotomic) -> Cyclotomic { (&self).$f(&o) }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, o: &Cyclotomic) -> Cyclotomic { (&self).$f(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Cyclotomic::from_int(n)
    }
}

impl From<Rational> for Cyclotomic {
    fn from(q: Rational) -> Self {
        Cyclotomic::from_rational(q)
    }
}

impl Field for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn one() -> Self {
        Cyclotomic::one()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv_ref(&self) -> Option<Self> {
        self.inv().ok()
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduce_modulus();
        if r.is_rational() {
            return write!(f, "{}", r.coeffs[0]);
        }
        let mut first = true;
        for (k, c) in r.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let root = match k {
                0 => String::new(),
                1 => format!("z{}", r.m),
                _ => format!("z{}^{}", r.m, k),
            };
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "{root}")?,
                _ => write!(f, "{a}*{root}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    m: u32,
    coeffs: Vec<Rational>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire { m: self.m, coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Full(Wire),
            Scalar(Rational),
        }
        match Raw::deserialize(d)? {
            Raw::Full(w) => Cyclotomic::from_coeffs(w.m, w.coeffs).map_err(serde::de::Error::custom),
            Raw::Scalar(q) => Ok(Cyclotomic::from_rational(q)),
        }
    }
}
