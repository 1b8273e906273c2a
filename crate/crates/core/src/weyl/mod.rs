//! The graded Weyl algebra `K<x_0..x_n, d_0..d_n>` with `deg x_i = d_i` and
//! `deg d_i = -d_i`.
//!
//! Elements are stored in normal order (every `x` left of every `d`) as a
//! map from monomials to nonzero coefficients, so equality of elements is
//! equality of maps.

mod modules;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::scalar::{Scalar, Q};
use crate::semigroup::WeightSystem;

pub use modules::{
    delta_action, euler_eigenvalue_delta, euler_eigenvalue_formal, formal_action, DeltaElement,
    FormalMonomialElement,
};
pub use parse::{parse_weyl, parse_weyl_nvars, ParseError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeylError {
    #[error("the zero element has no order")]
    ZeroElement,
    #[error("element mixes degrees {0} and {1}")]
    NotHomogeneous(i64, i64),
    #[error("arity mismatch: {0} vs {1} variables")]
    ArityMismatch(usize, usize),
}

/// `x^alpha d^beta`, stored as `alpha` followed by `beta`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(alpha: &[u32], beta: &[u32]) -> Self {
        assert_eq!(alpha.len(), beta.len());
        let mut exps = alpha.to_vec();
        exps.extend_from_slice(beta);
        Monomial { exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; 2 * nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len() / 2
    }

    pub fn alpha(&self) -> &[u32] {
        &self.exps[..self.nvars()]
    }

    pub fn beta(&self) -> &[u32] {
        &self.exps[self.nvars()..]
    }

    pub fn alpha_mut(&mut self) -> &mut [u32] {
        let n = self.nvars();
        &mut self.exps[..n]
    }

    pub fn beta_mut(&mut self) -> &mut [u32] {
        let n = self.nvars();
        &mut self.exps[n..]
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// `|beta|`, the order of the operator.
    pub fn order(&self) -> u32 {
        self.beta().iter().sum()
    }

    /// Weighted degree `sum d_i (alpha_i - beta_i)`.
    pub fn degree(&self, w: &WeightSystem) -> i64 {
        self.alpha()
            .iter()
            .zip(self.beta())
            .zip(w.weights())
            .map(|((&a, &b), &d)| d as i64 * (a as i64 - b as i64))
            .sum()
    }

    /// Multidegree `alpha - beta`.
    pub fn multidegree(&self) -> Vec<i64> {
        self.alpha()
            .iter()
            .zip(self.beta())
            .map(|(&a, &b)| a as i64 - b as i64)
            .collect()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

/// DegLex on `(alpha, beta)` jointly.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (prefix, exps) in [("x", self.alpha()), ("d", self.beta())] {
            for (i, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("{prefix}{i}")),
                    _ => parts.push(format!("{prefix}{i}^{e}")),
                }
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// `k! C(s, k) C(t, k)`: the coefficient of `x^(t-k) d^(s-k)` in `d^s x^t`.
fn reorder_coefficient(s: u32, t: u32, k: u32) -> BigInt {
    let mut c = BigInt::one();
    // s!/(s-k)! * t!/(t-k)! / k!
    for j in 0..k {
        c *= (s - j) as u64;
        c *= (t - j) as u64;
    }
    for j in 1..=k {
        c /= j as u64;
    }
    c
}

/// Product of two normal-ordered monomials, expanded in normal order.
pub(crate) fn monomial_product(a: &Monomial, b: &Monomial) -> Vec<(Monomial, BigInt)> {
    let n = a.nvars();
    // Per variable: the list of (k, coefficient) for d_i^s x_i^t.
    let per_var: Vec<Vec<(u32, BigInt)>> = (0..n)
        .map(|i| {
            let (s, t) = (a.beta()[i], b.alpha()[i]);
            (0..=s.min(t))
                .map(|k| (k, reorder_coefficient(s, t, k)))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut ks = vec![0usize; n];
    loop {
        let mut m = Monomial::one(n);
        let mut c = BigInt::one();
        for i in 0..n {
            let (k, ref ci) = per_var[i][ks[i]];
            m.alpha_mut()[i] = a.alpha()[i] + b.alpha()[i] - k;
            m.beta_mut()[i] = a.beta()[i] + b.beta()[i] - k;
            c *= ci;
        }
        out.push((m, c));
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            ks[i] += 1;
            if ks[i] < per_var[i].len() {
                break;
            }
            ks[i] = 0;
            i += 1;
        }
    }
}

/// A finite sum `sum c x^alpha d^beta` in normal order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylElement<C = Q> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> WeylElement<C> {
    pub fn zero(nvars: usize) -> Self {
        WeylElement {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::from_term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn from_term(m: Monomial, c: C) -> Self {
        let mut e = Self::zero(m.nvars());
        e.add_term(m, c);
        e
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut e = Self::zero(nvars);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    /// `c x^alpha d^beta`.
    pub fn monomial(alpha: &[u32], beta: &[u32], c: C) -> Self {
        Self::from_term(Monomial::new(alpha, beta), c)
    }

    pub fn x(nvars: usize, i: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.alpha_mut()[i] = 1;
        Self::from_term(m, C::one())
    }

    pub fn d(nvars: usize, i: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.beta_mut()[i] = 1;
        Self::from_term(m, C::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    /// Terms in ascending DegLex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        assert_eq!(m.nvars(), self.nvars, "monomial arity");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().plus(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "arity mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&C::one().negated())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        WeylElement {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.times(c)))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    /// Product in the Weyl algebra, normal-ordered with
    /// `d^s x^t = sum_k k! C(s,k) C(t,k) x^(t-k) d^(s-k)` per variable.
    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "arity mismatch");
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let cab = ca.times(cb);
                for (m, k) in monomial_product(ma, mb) {
                    out.add_term(m, cab.times(&C::from_bigint(&k)));
                }
            }
        }
        out
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.multiply(other).sub(&other.multiply(self))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.nvars), |acc, _| acc.multiply(self))
    }

    /// Maximum of `|beta|` over the terms.
    pub fn order(&self) -> Result<u32, WeylError> {
        self.terms
            .keys()
            .map(Monomial::order)
            .max()
            .ok_or(WeylError::ZeroElement)
    }

    /// The common weighted degree of all terms; `Ok(None)` for zero.
    pub fn homogeneous_degree(&self, w: &WeightSystem) -> Result<Option<i64>, WeylError> {
        let mut deg = None;
        for m in self.terms.keys() {
            let k = m.degree(w);
            match deg {
                None => deg = Some(k),
                Some(d) if d != k => return Err(WeylError::NotHomogeneous(d, k)),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn map_coefficients<D: Scalar>(&self, f: impl Fn(&C) -> D) -> WeylElement<D> {
        WeylElement::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }

    /// Splits into weighted-degree components.
    pub fn graded_components(&self, w: &WeightSystem) -> BTreeMap<i64, GradedPiece<C>> {
        let mut out: BTreeMap<i64, GradedPiece<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.degree(w);
            out.entry(k)
                .or_insert_with(|| GradedPiece {
                    degree: k,
                    element: Self::zero(self.nvars),
                })
                .element
                .add_term(m.clone(), c.clone());
        }
        out
    }
}

impl WeylElement<Q> {
    pub fn from_rational_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        Self::from_terms(nvars, terms)
    }
}

impl<C: Scalar> fmt::Display for WeylElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = c.split_sign();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// A homogeneous piece `D_k` of an element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedPiece<C = Q> {
    pub degree: i64,
    pub element: WeylElement<C>,
}

/// `E = sum_i d_i x_i d_i`.
pub fn euler_field<C: Scalar>(w: &WeightSystem) -> WeylElement<C> {
    let n = w.len();
    let mut e = WeylElement::zero(n);
    for (i, &d) in w.weights().iter().enumerate() {
        let mut m = Monomial::one(n);
        m.alpha_mut()[i] = 1;
        m.beta_mut()[i] = 1;
        e.add_term(m, C::from_i64(d as i64));
    }
    e
}

pub fn multiply<C: Scalar>(a: &WeylElement<C>, b: &WeylElement<C>) -> WeylElement<C> {
    a.multiply(b)
}

pub fn commutator<C: Scalar>(a: &WeylElement<C>, b: &WeylElement<C>) -> WeylElement<C> {
    a.commutator(b)
}

/// A polynomial in the commuting variables `x_0..x_n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial<C = Q> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exps: &[u32], c: C) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps.to_vec(), c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: C) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&exps) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(exps, s);
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.times(c));
        }
        out
    }
}

/// The natural action: `x_i` multiplies, `d_i` differentiates.
pub fn apply_to_polynomial<C: Scalar>(a: &WeylElement<C>, f: &Polynomial<C>) -> Polynomial<C> {
    assert_eq!(a.nvars(), f.nvars(), "arity mismatch");
    let mut out = Polynomial::zero(f.nvars());
    for (m, c) in a.terms() {
        'term: for (g, e) in f.terms() {
            let mut factor = BigInt::one();
            let mut exps = g.clone();
            for i in 0..exps.len() {
                let b = m.beta()[i];
                if exps[i] < b {
                    continue 'term;
                }
                for j in 0..b {
                    factor *= exps[i] - j;
                }
                exps[i] = exps[i] - b + m.alpha()[i];
            }
            out.add_term(exps, c.times(e).times(&C::from_bigint(&factor)));
        }
    }
    out
}
