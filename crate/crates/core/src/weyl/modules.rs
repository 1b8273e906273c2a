//! The two witness modules: `Delta = D / (D x_0 + ... + D x_n)`, realised as
//! `K[d_0..d_n]·delta`, and the module of formal monomials `x^(a+m)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{euler_field, WeylElement};
use crate::scalar::Q;
use crate::semigroup::WeightSystem;

/// `sum_beta c_beta d^beta · delta`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeltaElement {
    nvars: usize,
    poly: BTreeMap<Vec<u32>, Q>,
}

impl DeltaElement {
    pub fn zero(nvars: usize) -> Self {
        DeltaElement {
            nvars,
            poly: BTreeMap::new(),
        }
    }

    /// The generator `delta`.
    pub fn delta(nvars: usize) -> Self {
        Self::monomial(&vec![0; nvars], Q::one())
    }

    /// `c d^beta · delta`.
    pub fn monomial(beta: &[u32], c: Q) -> Self {
        let mut v = Self::zero(beta.len());
        v.add_term(beta.to_vec(), c);
        v
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.poly.iter()
    }

    pub fn coefficient(&self, beta: &[u32]) -> Q {
        self.poly.get(beta).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, beta: Vec<u32>, c: Q) {
        assert_eq!(beta.len(), self.nvars, "arity mismatch");
        if c.is_zero() {
            return;
        }
        let s = match self.poly.remove(&beta) {
            Some(old) => old + c,
            None => c,
        };
        if !s.is_zero() {
            self.poly.insert(beta, s);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.nvars);
        for (b, a) in &self.poly {
            out.add_term(b.clone(), a * c);
        }
        out
    }

    /// If `self` is a nonzero E-eigenvector, its eigenvalue.
    pub fn euler_eigenvalue(&self, w: &WeightSystem) -> Option<Q> {
        let ev = delta_action(&euler_field(w), self);
        proportionality(&self.poly, &ev.poly)
    }
}

impl fmt::Display for DeltaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let beta_only = |beta: &Vec<u32>| {
            let mut alpha_beta = vec![0; beta.len()];
            alpha_beta.extend_from_slice(beta);
            super::Monomial { exps: alpha_beta }
        };
        let e = WeylElement::from_terms(
            self.nvars,
            self.poly.iter().map(|(b, c)| (beta_only(b), c.clone())),
        );
        write!(f, "({e})·delta")
    }
}

/// `c · x^(base + m)` summed over offsets `m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalMonomialElement {
    base: Vec<Q>,
    offsets: BTreeMap<Vec<i64>, Q>,
}

impl FormalMonomialElement {
    pub fn zero(base: Vec<Q>) -> Self {
        FormalMonomialElement {
            base,
            offsets: BTreeMap::new(),
        }
    }

    /// The single formal monomial `x^base`.
    pub fn generator(base: Vec<Q>) -> Self {
        let n = base.len();
        let mut v = Self::zero(base);
        v.add_term(vec![0; n], Q::one());
        v
    }

    pub fn base(&self) -> &[Q] {
        &self.base
    }

    pub fn nvars(&self) -> usize {
        self.base.len()
    }

    pub fn is_zero(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Q)> {
        self.offsets.iter()
    }

    pub fn coefficient(&self, m: &[i64]) -> Q {
        self.offsets.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// The full exponent vector `base + m`.
    pub fn exponent(&self, m: &[i64]) -> Vec<Q> {
        self.base
            .iter()
            .zip(m)
            .map(|(a, &k)| a + Q::from_integer(BigInt::from(k)))
            .collect()
    }

    pub fn add_term(&mut self, m: Vec<i64>, c: Q) {
        assert_eq!(m.len(), self.base.len(), "arity mismatch");
        if c.is_zero() {
            return;
        }
        let s = match self.offsets.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !s.is_zero() {
            self.offsets.insert(m, s);
        }
    }

    pub fn euler_eigenvalue(&self, w: &WeightSystem) -> Option<Q> {
        let ev = formal_action(&euler_field(w), self);
        proportionality(&self.offsets, &ev.offsets)
    }
}

impl fmt::Display for FormalMonomialElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.offsets.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.offsets.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let exps: Vec<String> = self.exponent(m).iter().map(|e| e.to_string()).collect();
            write!(f, "{c}*x^({})", exps.join(","))?;
        }
        Ok(())
    }
}

/// `lambda` with `b = lambda a` when `a` is nonzero, else `None`.
fn proportionality<K: Ord>(a: &BTreeMap<K, Q>, b: &BTreeMap<K, Q>) -> Option<Q> {
    let (k0, a0) = a.iter().next()?;
    let lambda = b.get(k0).cloned().unwrap_or_else(Q::zero) / a0;
    let consistent = b.keys().all(|k| a.contains_key(k))
        && a.iter()
            .all(|(k, c)| b.get(k).cloned().unwrap_or_else(Q::zero) == c * &lambda);
    consistent.then_some(lambda)
}

/// Action on `K[d]·delta`: `d_i` multiplies, `x_i` acts as `-∂/∂(d_i)`.
pub fn delta_action(a: &WeylElement<Q>, v: &DeltaElement) -> DeltaElement {
    assert_eq!(a.nvars(), v.nvars(), "arity mismatch");
    let mut out = DeltaElement::zero(v.nvars());
    for (m, c) in a.terms() {
        'term: for (beta, e) in v.terms() {
            let mut exps = beta.clone();
            for i in 0..exps.len() {
                exps[i] += m.beta()[i];
            }
            let mut factor = BigInt::one();
            for i in 0..exps.len() {
                let k = m.alpha()[i];
                if exps[i] < k {
                    continue 'term;
                }
                for j in 0..k {
                    factor *= exps[i] - j;
                }
                exps[i] -= k;
            }
            if m.alpha().iter().sum::<u32>() % 2 == 1 {
                factor = -factor;
            }
            out.add_term(exps, c * e * Q::from_integer(factor));
        }
    }
    out
}

/// Action on formal monomials: `x_i` raises exponent `i`, `d_i` multiplies
/// by the current exponent and lowers it.
pub fn formal_action(a: &WeylElement<Q>, v: &FormalMonomialElement) -> FormalMonomialElement {
    assert_eq!(a.nvars(), v.nvars(), "arity mismatch");
    let mut out = FormalMonomialElement::zero(v.base.clone());
    for (m, c) in a.terms() {
        for (off, e) in v.terms() {
            let mut off = off.clone();
            let mut coeff = c * e;
            for i in 0..off.len() {
                for _ in 0..m.beta()[i] {
                    coeff *= &v.base[i] + Q::from_integer(BigInt::from(off[i]));
                    off[i] -= 1;
                }
                off[i] += m.alpha()[i] as i64;
            }
            out.add_term(off, coeff);
        }
    }
    out
}

/// `-sum_j d_j - sum_i beta_i d_i`, the E-eigenvalue of `d^beta · delta`.
pub fn euler_eigenvalue_delta(w: &WeightSystem, beta: &[u32]) -> i64 {
    let shift: i64 = beta
        .iter()
        .zip(w.weights())
        .map(|(&b, &d)| b as i64 * d as i64)
        .sum();
    -(w.weight_sum() as i64) - shift
}

/// `sum_i d_i (a_i + m_i)`, the E-eigenvalue of `x^(a+m)`.
pub fn euler_eigenvalue_formal(w: &WeightSystem, exponent: &[Q]) -> Q {
    exponent
        .iter()
        .zip(w.weights())
        .map(|(a, &d)| a * Q::from_integer(BigInt::from(d)))
        .fold(Q::zero(), |s, t| s + t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, q_frac};

    fn ws(w: &[u64]) -> WeightSystem {
        WeightSystem::new(w.to_vec()).unwrap()
    }

    type W = WeylElement<Q>;

    #[test]
    fn delta_examples() {
        let w = ws(&[1, 1, 1]);
        let delta = DeltaElement::delta(3);
        assert!(delta_action(&W::x(3, 0), &delta).is_zero());
        assert_eq!(delta_action(&euler_field(&w), &delta), delta.scale(&q(-3)));
        let d0 = DeltaElement::monomial(&[1, 0, 0], q(1));
        assert_eq!(delta_action(&W::x(3, 0), &d0), delta.scale(&q(-1)));
    }

    #[test]
    fn delta_eigenvalues() {
        let w = ws(&[2, 3]);
        for beta in [[0, 0], [1, 0], [0, 2], [3, 1]] {
            let v = DeltaElement::monomial(&beta, q(1));
            assert_eq!(
                v.euler_eigenvalue(&w),
                Some(q(euler_eigenvalue_delta(&w, &beta)))
            );
        }
    }

    #[test]
    fn formal_examples() {
        let w = ws(&[2, 4]);
        let v = FormalMonomialElement::generator(vec![q(1), q(0)]);
        let r = formal_action(&W::d(2, 0), &v);
        assert_eq!(r.coefficient(&[-1, 0]), q(1));
        assert_eq!(r.exponent(&[-1, 0]), vec![q(0), q(0)]);

        let lam = q(3);
        let base = vec![(&lam - q(1)) / q(2), q(0)];
        let g = FormalMonomialElement::generator(base);
        assert_eq!(g.euler_eigenvalue(&w), Some(lam - q(1)));

        let z = FormalMonomialElement::generator(vec![q(0), q(0)]);
        assert!(formal_action(&W::d(2, 0), &z).is_zero());
    }

    #[test]
    fn formal_fractional_eigenvalue() {
        let w = ws(&[3, 6, 9]);
        let g = FormalMonomialElement::generator(vec![q_frac(-2, 9), q(0), q(0)]);
        assert_eq!(g.euler_eigenvalue(&w), Some(q_frac(-2, 3)));
        assert_eq!(
            euler_eigenvalue_formal(&w, g.base()),
            q_frac(-2, 3)
        );
    }

    #[test]
    fn module_axiom_spot_check() {
        let a = W::x(2, 0).add(&W::d(2, 1));
        let b = W::d(2, 0).multiply(&W::x(2, 1));
        let v = DeltaElement::monomial(&[2, 1], q(1));
        assert_eq!(
            delta_action(&a.multiply(&b), &v),
            delta_action(&a, &delta_action(&b, &v))
        );
        let f = FormalMonomialElement::generator(vec![q_frac(1, 2), q(2)]);
        assert_eq!(
            formal_action(&a.multiply(&b), &f),
            formal_action(&a, &formal_action(&b, &f))
        );
    }
}
