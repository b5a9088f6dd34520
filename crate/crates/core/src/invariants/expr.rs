//! Noncommutative expressions over cyclotomic coefficients.
//!
//! Subexpressions are reference counted so that a generator built on top of
//! earlier generators shares their trees; evaluation and expansion cache
//! results per shared node.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, PartialEq)]
pub enum Node {
    Var(usize),
    Scalar(Cyclotomic),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Scale(Cyclotomic, Expr),
    Inverse(Expr),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr(Arc::new(Node::Var(i)))
    }

    pub fn scalar(c: Cyclotomic) -> Expr {
        Expr(Arc::new(Node::Scalar(c)))
    }

    pub fn one() -> Expr {
        Expr::scalar(Cyclotomic::one())
    }

    pub fn sum(terms: Vec<Expr>) -> Expr {
        match terms.len() {
            0 => Expr::scalar(Cyclotomic::zero()),
            1 => terms.into_iter().next().unwrap(),
            _ => Expr(Arc::new(Node::Sum(terms))),
        }
    }

    pub fn product(factors: Vec<Expr>) -> Expr {
        match factors.len() {
            0 => Expr::one(),
            1 => factors.into_iter().next().unwrap(),
            _ => Expr(Arc::new(Node::Product(factors))),
        }
    }

    pub fn scale(c: Cyclotomic, e: Expr) -> Expr {
        if c.is_one() {
            return e;
        }
        Expr(Arc::new(Node::Scale(c, e)))
    }

    pub fn inverse(e: Expr) -> Expr {
        Expr(Arc::new(Node::Inverse(e)))
    }

    /// `sum_j c_j * terms[j]`, skipping zero coefficients.
    pub fn linear(coeffs: &[Cyclotomic], terms: &[Expr]) -> Expr {
        Expr::sum(
            coeffs
                .iter()
                .zip(terms)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, t)| Expr::scale(c.clone(), t.clone()))
                .collect(),
        )
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Flattens nested sums and products, merges nested scales, and drops
    /// zero terms and unit factors.
    pub fn normalize(&self) -> Expr {
        match self.node() {
            Node::Var(_) | Node::Scalar(_) => self.clone(),
            Node::Sum(ts) => {
                let mut out = Vec::new();
                for t in ts {
                    let t = t.normalize();
                    match t.node() {
                        Node::Sum(inner) => out.extend(inner.iter().cloned()),
                        Node::Scalar(c) if c.is_zero() => {}
                        _ => out.push(t),
                    }
                }
                Expr::sum(out)
            }
            Node::Product(fs) => {
                let mut out = Vec::new();
                let mut coeff = Cyclotomic::one();
                for f in fs {
                    let f = f.normalize();
                    match f.node() {
                        Node::Product(inner) => out.extend(inner.iter().cloned()),
                        Node::Scalar(c) => coeff = &coeff * c,
                        Node::Scale(c, inner) => {
                            coeff = &coeff * c;
                            match inner.node() {
                                Node::Product(ii) => out.extend(ii.iter().cloned()),
                                _ => out.push(inner.clone()),
                            }
                        }
                        _ => out.push(f),
                    }
                }
                if coeff.is_zero() {
                    return Expr::scalar(coeff);
                }
                Expr::scale(coeff, Expr::product(out))
            }
            Node::Scale(c, e) => {
                let e = e.normalize();
                if c.is_zero() {
                    return Expr::scalar(Cyclotomic::zero());
                }
                match e.node() {
                    Node::Scale(d, inner) => Expr::scale(c * d, inner.clone()),
                    Node::Scalar(d) => Expr::scalar(c * d),
                    _ => Expr::scale(c.clone(), e),
                }
            }
            Node::Inverse(e) => Expr::inverse(e.normalize()),
        }
    }

    /// Expands into a noncommutative polynomial. Fails on inverses.
    pub fn expand(&self) -> Result<NcPoly> {
        let mut cache = HashMap::new();
        self.expand_cached(&mut cache)
    }

    pub(crate) fn expand_cached(&self, cache: &mut HashMap<usize, NcPoly>) -> Result<NcPoly> {
        if let Some(p) = cache.get(&self.key()) {
            return Ok(p.clone());
        }
        let p = match self.node() {
            Node::Var(i) => NcPoly::var(*i),
            Node::Scalar(c) => NcPoly::constant(c.clone()),
            Node::Sum(ts) => {
                let mut acc = NcPoly::zero();
                for t in ts {
                    acc = acc.add(&t.expand_cached(cache)?);
                }
                acc
            }
            Node::Product(fs) => {
                let mut acc = NcPoly::constant(Cyclotomic::one());
                for f in fs {
                    acc = acc.mul(&f.expand_cached(cache)?);
                }
                acc
            }
            Node::Scale(c, e) => e.expand_cached(cache)?.scale(c),
            Node::Inverse(_) => {
                return Err(Error::Unsupported("expressions with inverses have no polynomial expansion".into()))
            }
        };
        cache.insert(self.key(), p.clone());
        Ok(p)
    }

    /// Infix rendering with the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        self.render_prec(names, 0)
    }

    fn render_prec(&self, names: &[String], prec: u8) -> String {
        let name = |i: usize| names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
        let (s, p) = match self.node() {
            Node::Var(i) => (name(*i), 3),
            Node::Scalar(c) => (coefficient(c), if c.is_rational() && !c.to_rational().unwrap().is_negative() { 3 } else { 0 }),
            Node::Sum(ts) => {
                let mut s = String::new();
                for (k, t) in ts.iter().enumerate() {
                    let r = t.render_prec(names, 1);
                    if k == 0 {
                        s.push_str(&r);
                    } else if let Some(rest) = r.strip_prefix('-') {
                        s.push_str(" - ");
                        s.push_str(rest);
                    } else {
                        s.push_str(" + ");
                        s.push_str(&r);
                    }
                }
                (s, 0)
            }
            Node::Product(fs) => (fs.iter().map(|f| f.render_prec(names, 2)).collect::<Vec<_>>().join(" "), 2),
            Node::Scale(c, e) => {
                let inner = e.render_prec(names, 2);
                let s = if c == &Cyclotomic::from_int(-1) {
                    format!("-{inner}")
                } else if c.is_rational() {
                    format!("{} {inner}", c)
                } else {
                    format!("({}) {inner}", c)
                };
                (s, 1)
            }
            Node::Inverse(e) => (format!("{}^-1", e.render_prec(names, 3)), 3),
        };
        if p < prec || (p == 1 && prec > 1) {
            format!("({s})")
        } else {
            s
        }
    }

    /// A JSON tree with `VAR`, `SCALAR`, `SUM`, `PRODUCT`, `SCALE` and
    /// `INVERSE` nodes.
    pub fn to_json(&self, names: &[String]) -> Value {
        match self.node() {
            Node::Var(i) => json!({"op": "VAR", "index": i, "name": names.get(*i)}),
            Node::Scalar(c) => json!({"op": "SCALAR", "value": c.to_string()}),
            Node::Sum(ts) => json!({"op": "SUM", "terms": ts.iter().map(|t| t.to_json(names)).collect::<Vec<_>>()}),
            Node::Product(fs) => {
                json!({"op": "PRODUCT", "factors": fs.iter().map(|t| t.to_json(names)).collect::<Vec<_>>()})
            }
            Node::Scale(c, e) => json!({"op": "SCALE", "coefficient": c.to_string(), "expr": e.to_json(names)}),
            Node::Inverse(e) => json!({"op": "INVERSE", "expr": e.to_json(names)}),
        }
    }
}

fn coefficient(c: &Cyclotomic) -> String {
    if c.is_rational() {
        c.to_string()
    } else {
        format!("({c})")
    }
}

/// Evaluates expressions at a tuple of square matrices, sharing work across
/// expressions built from common subtrees.
pub struct Evaluator<'a> {
    vars: &'a [Matrix],
    dim: usize,
    cache: HashMap<usize, Matrix>,
}

impl<'a> Evaluator<'a> {
    pub fn new(vars: &'a [Matrix]) -> Evaluator<'a> {
        let dim = vars.first().map_or(1, |m| m.rows());
        Evaluator { vars, dim, cache: HashMap::new() }
    }

    pub fn eval(&mut self, e: &Expr) -> Result<Matrix> {
        if let Some(m) = self.cache.get(&e.key()) {
            return Ok(m.clone());
        }
        let m = match e.node() {
            Node::Var(i) => self
                .vars
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::Input(format!("expression uses variable {} of {}", i + 1, self.vars.len())))?,
            Node::Scalar(c) => Matrix::scalar(self.dim, c),
            Node::Sum(ts) => {
                let mut acc = Matrix::zeros(self.dim, self.dim);
                for t in ts {
                    acc = acc.add(&self.eval(t)?);
                }
                acc
            }
            Node::Product(fs) => {
                let mut acc = Matrix::identity(self.dim);
                for f in fs {
                    acc = acc.mul(&self.eval(f)?);
                }
                acc
            }
            Node::Scale(c, x) => self.eval(x)?.scale(c),
            Node::Inverse(x) => self
                .eval(x)?
                .inverse()
                .ok_or_else(|| Error::Input("singular matrix under an inverse".into()))?,
        };
        self.cache.insert(e.key(), m.clone());
        Ok(m)
    }
}

pub fn evaluate(e: &Expr, vars: &[Matrix]) -> Result<Matrix> {
    Evaluator::new(vars).eval(e)
}

/// A noncommutative polynomial: monomials (variable index sequences) with
/// nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NcPoly {
    terms: BTreeMap<Vec<usize>, Cyclotomic>,
}

impl NcPoly {
    pub fn zero() -> NcPoly {
        NcPoly::default()
    }

    pub fn constant(c: Cyclotomic) -> NcPoly {
        NcPoly::monomial(Vec::new(), c)
    }

    pub fn var(i: usize) -> NcPoly {
        NcPoly::monomial(vec![i], Cyclotomic::one())
    }

    pub fn monomial(word: Vec<usize>, c: Cyclotomic) -> NcPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(word, c);
        }
        NcPoly { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Cyclotomic> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &NcPoly) -> NcPoly {
        let mut terms = self.terms.clone();
        for (w, c) in &o.terms {
            let v = terms.get(w).map_or_else(|| c.clone(), |x| x + c);
            if v.is_zero() {
                terms.remove(w);
            } else {
                terms.insert(w.clone(), v);
            }
        }
        NcPoly { terms }
    }

    pub fn sub(&self, o: &NcPoly) -> NcPoly {
        self.add(&o.scale(&Cyclotomic::from_int(-1)))
    }

    pub fn scale(&self, c: &Cyclotomic) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn mul(&self, o: &NcPoly) -> NcPoly {
        let mut acc = NcPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend(w2);
                acc = acc.add(&NcPoly::monomial(w, c1 * c2));
            }
        }
        acc
    }

    /// Coefficientwise complex conjugate.
    pub fn conjugate(&self) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.conjugate())).collect() }
    }

    /// Applies the linear substitution `x_j -> sum_i m[i][j] x_i`.
    pub fn substitute(&self, m: &Matrix) -> NcPoly {
        let images: Vec<NcPoly> = (0..m.cols())
            .map(|j| {
                (0..m.rows()).fold(NcPoly::zero(), |acc, i| acc.add(&NcPoly::monomial(vec![i], m.get(i, j).clone())))
            })
            .collect();
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            let mut p = NcPoly::constant(c.clone());
            for &x in w {
                p = p.mul(&images[x]);
            }
            out = out.add(&p);
        }
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = w.iter().map(|&i| names.get(i).cloned().unwrap_or(format!("x{}", i + 1))).collect();
            let mono = mono.join(" ");
            let (neg, coef) = if c.is_rational() && c.to_rational().unwrap().is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            let body = if mono.is_empty() {
                coefficient(&coef)
            } else if coef.is_one() {
                mono
            } else {
                format!("{} {mono}", coefficient(&coef))
            };
            match (k, neg) {
                (0, true) => s.push_str(&format!("-{body}")),
                (0, false) => s.push_str(&body),
                (_, true) => s.push_str(&format!(" - {body}")),
                (_, false) => s.push_str(&format!(" + {body}")),
            }
        }
        s
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = Vec::new();
        write!(f, "{}", self.render(&names))
    }
}
