//! Graded pieces of `A = K[x]` and of `D`, the quotient `D / D(E - lambda)`,
//! and the Koszul maps `phi_1`, `phi_2` on it.
//!
//! Residues are kept in a canonical normal form: a monomial `x^alpha d^beta`
//! is standard when `min(alpha_0, beta_0) = 0`, and the standard monomials
//! form a basis of `D / D(E - lambda)`. Non-standard monomials are rewritten
//! with `x^(alpha-e0) d^(beta-e0) (E - lambda) = 0`.

mod koszul;

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::{Poly, Scalar, Q};
use crate::semigroup::WeightSystem;
use crate::twist::TwistParameter;
use crate::weyl::{euler_field, Monomial, WeylElement};

pub use koszul::{
    block_matrices, koszul_homology_window, standard_basis, BlockMatrices, DegreeBlock,
    HomologyWitness, KoszulReport, PaperClassCheck, Phi1KernelVector,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GradedError {
    #[error("element mixes degrees {0} and {1}")]
    NotHomogeneous(i64, i64),
    #[error("degree {degree} or order {order} lies outside the window")]
    OutsideWindow { degree: i64, order: u32 },
    #[error("window padding {padding} is smaller than the largest weight {needed}")]
    WindowTooSmall { padding: u64, needed: u64 },
    #[error("empty degree range [{lo}, {hi}]")]
    InvalidWindow { lo: i64, hi: i64 },
    #[error("expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
}

/// Number of monomials `x^alpha` of weighted degree `k`.
pub fn hilbert_dim(w: &WeightSystem, k: i64) -> u64 {
    if k < 0 {
        return 0;
    }
    let k = k as usize;
    let mut ways = vec![0u64; k + 1];
    ways[0] = 1;
    for &d in w.weights() {
        let d = d as usize;
        for j in d..=k {
            ways[j] += ways[j - d];
        }
    }
    ways[k]
}

/// `dim Gamma_k(O(k)) = dim A_k`.
pub fn twisted_sheaf_sections(w: &WeightSystem, k: i64) -> u64 {
    hilbert_dim(w, k)
}

/// All `alpha` with `sum d_i alpha_i = target`.
pub(crate) fn exponents_of_degree(weights: &[u64], target: i64) -> Vec<Vec<u32>> {
    fn go(weights: &[u64], i: usize, rest: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == weights.len() {
            let d = weights[i] as i64;
            if rest % d == 0 {
                cur.push((rest / d) as u32);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let d = weights[i] as i64;
        let mut a = 0;
        while a * d <= rest {
            cur.push(a as u32);
            go(weights, i + 1, rest - a * d, cur, out);
            cur.pop();
            a += 1;
        }
    }
    let mut out = Vec::new();
    if target >= 0 && !weights.is_empty() {
        go(weights, 0, target, &mut Vec::new(), &mut out);
    }
    out
}

/// All `beta` with `|beta| <= bound`.
pub fn exponents_up_to_order(nvars: usize, bound: u32) -> Vec<Vec<u32>> {
    fn go(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == nvars {
            out.push(cur.clone());
            return;
        }
        for b in 0..=left {
            cur.push(b);
            go(nvars, left - b, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(nvars, bound, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn monomials_of_degree(w: &WeightSystem, k: i64, order_bound: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for beta in exponents_up_to_order(w.len(), order_bound) {
        let shift: i64 = beta
            .iter()
            .zip(w.weights())
            .map(|(&b, &d)| b as i64 * d as i64)
            .sum();
        for alpha in exponents_of_degree(w.weights(), k + shift) {
            out.push(Monomial::new(&alpha, &beta));
        }
    }
    out.sort();
    out
}

/// Monomials `x^alpha d^beta` of degree `k` with `|beta| <= order_bound`, in
/// ascending DegLex order.
pub fn basis_of_d_degree(w: &WeightSystem, k: i64, order_bound: u32) -> Vec<WeylElement<Q>> {
    monomials_of_degree(w, k, order_bound)
        .into_iter()
        .map(|m| WeylElement::from_term(m, Q::from_integer(1.into())))
        .collect()
}

/// A degree range with an order bound on `|beta|`. `padding` is the degree
/// slack below `degree_lo` used by Koszul computations so that every `C1`
/// term with degree in the range is covered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub degree_lo: i64,
    pub degree_hi: i64,
    pub order_bound: u32,
    pub padding: u64,
}

impl Window {
    pub fn new(degree_lo: i64, degree_hi: i64, order_bound: u32, padding: u64) -> Result<Self, GradedError> {
        if degree_lo > degree_hi {
            return Err(GradedError::InvalidWindow {
                lo: degree_lo,
                hi: degree_hi,
            });
        }
        Ok(Window {
            degree_lo,
            degree_hi,
            order_bound,
            padding,
        })
    }

    /// Degrees `[-2 sum d, 2 sum d]`, order 4, padding `max d`.
    pub fn default_for(w: &WeightSystem) -> Self {
        let s = 2 * w.weight_sum() as i64;
        Window {
            degree_lo: -s,
            degree_hi: s,
            order_bound: 4,
            padding: w.max_weight(),
        }
    }

    pub fn contains_degree(&self, k: i64) -> bool {
        self.degree_lo <= k && k <= self.degree_hi
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "degrees [{}, {}], order <= {}, padding {}",
            self.degree_lo, self.degree_hi, self.order_bound, self.padding
        )
    }
}

/// `lambda` as a scalar: a constant, or the indeterminate for the
/// symbolic class.
pub fn twist_as_poly(lam: &TwistParameter) -> Poly {
    match lam {
        TwistParameter::Rational(q) => Poly::constant(q.clone()),
        TwistParameter::Generic => Poly::var(),
    }
}

/// Normal forms modulo `D(E - lambda)` over a coefficient ring `S` in which
/// `lambda` is the given element.
pub struct EulerReducer<S: Scalar> {
    weights: Vec<i64>,
    lam: S,
    inv_d0: S,
    memo: HashMap<Monomial, Rc<Vec<(Monomial, S)>>>,
    cofactors: HashMap<Monomial, Rc<WeylElement<S>>>,
}

impl<S: Scalar> EulerReducer<S> {
    pub fn new(w: &WeightSystem, lam: S) -> Self {
        let d0 = w.weight(0);
        EulerReducer {
            weights: w.weights().iter().map(|&d| d as i64).collect(),
            lam,
            inv_d0: S::from_rational(&Q::new(1.into(), (d0 as i64).into())),
            memo: HashMap::new(),
            cofactors: HashMap::new(),
        }
    }

    pub fn lambda(&self) -> &S {
        &self.lam
    }

    pub fn is_standard(m: &Monomial) -> bool {
        m.alpha()[0] == 0 || m.beta()[0] == 0
    }

    /// For non-standard `u`: `m = u / (x_0 d_0)` in exponents, the lifts
    /// `u_i = m x_i d_i` for `i >= 1`, and `c = <d, beta(m)> - lambda`, so
    /// that `m (E - lambda) = d_0 u + sum d_i u_i + c m`.
    fn rewrite_step(&self, u: &Monomial) -> (Monomial, Vec<(Monomial, S)>, S) {
        let mut m = u.clone();
        m.alpha_mut()[0] -= 1;
        m.beta_mut()[0] -= 1;
        let lifts = (1..self.weights.len())
            .map(|i| {
                let mut ui = m.clone();
                ui.alpha_mut()[i] += 1;
                ui.beta_mut()[i] += 1;
                (ui, S::from_i64(self.weights[i]))
            })
            .collect();
        let shift: i64 = m
            .beta()
            .iter()
            .zip(&self.weights)
            .map(|(&b, &d)| b as i64 * d)
            .sum();
        let c = S::from_i64(shift).minus(&self.lam);
        (m, lifts, c)
    }

    /// Normal form of one monomial as a list of standard terms.
    pub fn reduce_monomial(&mut self, u: &Monomial) -> Rc<Vec<(Monomial, S)>> {
        if Self::is_standard(u) {
            return Rc::new(vec![(u.clone(), S::one())]);
        }
        if let Some(r) = self.memo.get(u) {
            return r.clone();
        }
        let (m, lifts, c) = self.rewrite_step(u);
        let mut acc: HashMap<Monomial, S> = HashMap::new();
        let push = |acc: &mut HashMap<Monomial, S>, terms: &[(Monomial, S)], k: &S| {
            for (t, a) in terms {
                let v = a.times(k);
                let e = acc.entry(t.clone()).or_insert_with(S::zero);
                *e = e.plus(&v);
            }
        };
        for (ui, di) in &lifts {
            let r = self.reduce_monomial(ui);
            push(&mut acc, &r, di);
        }
        let r = self.reduce_monomial(&m);
        push(&mut acc, &r, &c);
        let scale = self.inv_d0.negated();
        let mut out: Vec<(Monomial, S)> = acc
            .into_iter()
            .map(|(t, a)| (t, a.times(&scale)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        let out = Rc::new(out);
        self.memo.insert(u.clone(), out.clone());
        out
    }

    pub fn reduce(&mut self, a: &WeylElement<S>) -> WeylElement<S> {
        let mut out = WeylElement::zero(a.nvars());
        for (m, c) in a.terms() {
            for (t, k) in self.reduce_monomial(m).iter() {
                out.add_term(t.clone(), c.times(k));
            }
        }
        out
    }

    /// `b` with `u = NF(u) + b (E - lambda)`.
    fn cofactor_monomial(&mut self, u: &Monomial) -> Rc<WeylElement<S>> {
        let n = u.nvars();
        if Self::is_standard(u) {
            return Rc::new(WeylElement::zero(n));
        }
        if let Some(r) = self.cofactors.get(u) {
            return r.clone();
        }
        let (m, lifts, c) = self.rewrite_step(u);
        let mut inner = WeylElement::zero(n);
        for (ui, di) in &lifts {
            inner = inner.add(&self.cofactor_monomial(ui).scale(di));
        }
        inner = inner.add(&self.cofactor_monomial(&m).scale(&c));
        let out = WeylElement::from_term(m, self.inv_d0.clone()).sub(&inner.scale(&self.inv_d0));
        let out = Rc::new(out);
        self.cofactors.insert(u.clone(), out.clone());
        out
    }

    /// Normal form and cofactor: `a = nf + cofactor (E - lambda)`.
    pub fn reduce_with_cofactor(&mut self, a: &WeylElement<S>) -> (WeylElement<S>, WeylElement<S>) {
        let mut cof = WeylElement::zero(a.nvars());
        for (m, c) in a.terms() {
            cof = cof.add(&self.cofactor_monomial(m).scale(c));
        }
        (self.reduce(a), cof)
    }

    /// `E - lambda` with coefficients in `S`.
    pub fn euler_minus_lambda(&self, w: &WeightSystem) -> WeylElement<S> {
        euler_field::<S>(w).sub(&WeylElement::constant(w.len(), self.lam.clone()))
    }
}

/// `rep + D(E - lambda)`, with `rep` in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DQuotientResidue {
    weights: WeightSystem,
    twist: TwistParameter,
    rep: WeylElement<Poly>,
}

impl DQuotientResidue {
    /// The residue class of `a`.
    pub fn new(w: &WeightSystem, lam: &TwistParameter, a: &WeylElement<Q>) -> Result<Self, GradedError> {
        check_arity(w, a.nvars())?;
        let mut r = EulerReducer::new(w, twist_as_poly(lam));
        let rep = r.reduce(&a.map_coefficients(Poly::from_rational));
        Ok(DQuotientResidue {
            weights: w.clone(),
            twist: lam.clone(),
            rep,
        })
    }

    pub fn zero(w: &WeightSystem, lam: &TwistParameter) -> Self {
        DQuotientResidue {
            weights: w.clone(),
            twist: lam.clone(),
            rep: WeylElement::zero(w.len()),
        }
    }

    fn from_normal_form(w: &WeightSystem, lam: &TwistParameter, rep: WeylElement<Poly>) -> Self {
        DQuotientResidue {
            weights: w.clone(),
            twist: lam.clone(),
            rep,
        }
    }

    /// The normal-form representative; coefficients are polynomials in
    /// `lam` (constants for a rational twist).
    pub fn rep(&self) -> &WeylElement<Poly> {
        &self.rep
    }

    /// The representative with rational coefficients, when it has them.
    pub fn rep_rational(&self) -> Option<WeylElement<Q>> {
        let mut out = WeylElement::zero(self.rep.nvars());
        for (m, c) in self.rep.terms() {
            out.add_term(m.clone(), c.as_constant()?);
        }
        Some(out)
    }

    pub fn twist(&self) -> &TwistParameter {
        &self.twist
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

impl fmt::Display for DQuotientResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

fn check_arity(w: &WeightSystem, found: usize) -> Result<(), GradedError> {
    if w.len() != found {
        return Err(GradedError::ArityMismatch {
            expected: w.len(),
            found,
        });
    }
    Ok(())
}

/// Outcome of [`reduce_mod_euler`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub residue: DQuotientResidue,
    pub in_ideal: bool,
    /// `a = residue + cofactor (E - lambda)` exactly.
    pub cofactor: WeylElement<Poly>,
}

/// Decides whether the homogeneous element `a` lies in `D(E - lambda)`.
pub fn reduce_mod_euler(
    w: &WeightSystem,
    a: &WeylElement<Q>,
    lam: &TwistParameter,
    win: &Window,
) -> Result<Reduction, GradedError> {
    check_arity(w, a.nvars())?;
    let degree = match a.homogeneous_degree(w) {
        Ok(d) => d,
        Err(crate::weyl::WeylError::NotHomogeneous(x, y)) => {
            return Err(GradedError::NotHomogeneous(x, y))
        }
        Err(_) => None,
    };
    if let Some(k) = degree {
        let order = a.order().unwrap_or(0);
        if !win.contains_degree(k) || order > win.order_bound {
            return Err(GradedError::OutsideWindow { degree: k, order });
        }
    }
    let mut r = EulerReducer::new(w, twist_as_poly(lam));
    let (nf, cofactor) = r.reduce_with_cofactor(&a.map_coefficients(Poly::from_rational));
    Ok(Reduction {
        in_ideal: nf.is_zero(),
        residue: DQuotientResidue::from_normal_form(w, lam, nf),
        cofactor,
    })
}

/// The pairs `(i0, i1)` with `i0 < i1`, in lexicographic order.
pub fn koszul_pairs(nvars: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..nvars {
        for j in i + 1..nvars {
            out.push((i, j));
        }
    }
    out
}

fn left_x(rep: &WeylElement<Poly>, i: usize) -> WeylElement<Poly> {
    WeylElement::<Poly>::x(rep.nvars(), i).multiply(rep)
}

/// `m -> (x_i m)_i`.
pub fn koszul_phi1(m: &DQuotientResidue) -> Vec<DQuotientResidue> {
    let w = &m.weights;
    let mut r = EulerReducer::new(w, twist_as_poly(&m.twist));
    (0..w.len())
        .map(|i| DQuotientResidue::from_normal_form(w, &m.twist, r.reduce(&left_x(&m.rep, i))))
        .collect()
}

/// `(m_i) -> (x_i0 m_i1 - x_i1 m_i0)_(i0 < i1)`.
pub fn koszul_phi2(ms: &[DQuotientResidue]) -> Result<Vec<DQuotientResidue>, GradedError> {
    let first = ms.first().ok_or(GradedError::ArityMismatch {
        expected: 2,
        found: 0,
    })?;
    let w = &first.weights;
    check_arity(w, ms.len())?;
    let lam = &first.twist;
    let mut r = EulerReducer::new(w, twist_as_poly(lam));
    Ok(koszul_pairs(w.len())
        .into_iter()
        .map(|(i, j)| {
            let v = left_x(&ms[j].rep, i).sub(&left_x(&ms[i].rep, j));
            DQuotientResidue::from_normal_form(w, lam, r.reduce(&v))
        })
        .collect())
}
