//! Arithmetic of the numerical semigroup generated by a weight system.
//!
//! Membership is answered from the Apéry set with respect to the smallest
//! (reduced) weight: for each residue `r` modulo `m` the least element of the
//! semigroup congruent to `r`. An integer `k` is a member iff it is at least
//! the Apéry element of its residue class.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::twist::TwistParameter;

/// Weights above this bound are rejected; the Apéry table is linear in the
/// smallest weight.
pub const MAX_WEIGHT: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("a weight system needs at least two weights, got {0}")]
    TooFewWeights(usize),
    #[error("weights must be positive")]
    ZeroWeight,
    #[error("weight {0} exceeds the supported maximum {MAX_WEIGHT}")]
    WeightTooLarge(u64),
    #[error("weights have gcd {0} > 1; the semigroup has infinitely many gaps")]
    NotCoprime(u64),
    #[error("generator list is empty")]
    EmptyGenerators,
}

/// Weights `d_0 <= ... <= d_n` of a weighted projective stack.
#[derive(Clone, Serialize)]
pub struct WeightSystem {
    weights: Vec<u64>,
    gcd: u64,
    weight_sum: u64,
    #[serde(skip)]
    apery: OnceLock<Apery>,
}

impl WeightSystem {
    /// Builds a weight system; the input order is irrelevant.
    pub fn new(weights: impl Into<Vec<u64>>) -> Result<Self, SemigroupError> {
        let mut weights = weights.into();
        if weights.len() < 2 {
            return Err(SemigroupError::TooFewWeights(weights.len()));
        }
        if weights.contains(&0) {
            return Err(SemigroupError::ZeroWeight);
        }
        if let Some(&big) = weights.iter().find(|&&w| w > MAX_WEIGHT) {
            return Err(SemigroupError::WeightTooLarge(big));
        }
        weights.sort_unstable();
        let gcd = weights.iter().fold(0, |g, &w| g.gcd(&w));
        let weight_sum = weights.iter().sum();
        Ok(WeightSystem {
            weights,
            gcd,
            weight_sum,
            apery: OnceLock::new(),
        })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Number of variables, `n + 1`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `n`, the dimension of the weighted projective space.
    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn gcd(&self) -> u64 {
        self.gcd
    }

    pub fn weight_sum(&self) -> u64 {
        self.weight_sum
    }

    pub fn max_weight(&self) -> u64 {
        *self.weights.last().unwrap()
    }

    pub fn weight(&self, i: usize) -> u64 {
        self.weights[i]
    }

    fn apery(&self) -> &Apery {
        self.apery.get_or_init(|| Apery::new(&self.weights, self.gcd))
    }
}

impl PartialEq for WeightSystem {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights
    }
}

impl Eq for WeightSystem {}

impl Hash for WeightSystem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.weights.hash(state);
    }
}

impl fmt::Debug for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightSystem{:?}", self.weights)
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Apéry set of the reduced semigroup (weights divided by their gcd) with
/// respect to the smallest reduced weight, plus back-pointers for
/// reconstructing representations.
#[derive(Clone, Debug)]
struct Apery {
    gcd: u64,
    modulus: u64,
    reduced: Vec<u64>,
    least: Vec<u64>,
    // (previous residue, generator index) on a shortest path
    pred: Vec<Option<(usize, usize)>>,
}

impl Apery {
    fn new(weights: &[u64], gcd: u64) -> Self {
        let reduced: Vec<u64> = weights.iter().map(|w| w / gcd).collect();
        let modulus = reduced[0];
        let m = modulus as usize;
        let mut least = vec![u64::MAX; m];
        let mut pred = vec![None; m];
        least[0] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, 0usize)));
        while let Some(Reverse((dist, r))) = heap.pop() {
            if dist > least[r] {
                continue;
            }
            for (i, &g) in reduced.iter().enumerate().skip(1) {
                let next = (r + (g % modulus) as usize) % m;
                let nd = dist + g;
                if nd < least[next] {
                    least[next] = nd;
                    pred[next] = Some((r, i));
                    heap.push(Reverse((nd, next)));
                }
            }
        }
        Apery {
            gcd,
            modulus,
            reduced,
            least,
            pred,
        }
    }

    fn representation(&self, k: i64) -> Option<Vec<u64>> {
        if k < 0 || !(k as u64).is_multiple_of(self.gcd) {
            return None;
        }
        let k = k as u64 / self.gcd;
        let mut r = (k % self.modulus) as usize;
        if k < self.least[r] {
            return None;
        }
        let mut rep = vec![0u64; self.reduced.len()];
        rep[0] = (k - self.least[r]) / self.modulus;
        while let Some((prev, i)) = self.pred[r] {
            rep[i] += 1;
            r = prev;
        }
        Some(rep)
    }

    fn frobenius_reduced(&self) -> i64 {
        *self.least.iter().max().unwrap() as i64 - self.modulus as i64
    }
}

pub fn gcd_all(w: &WeightSystem) -> u64 {
    w.gcd()
}

/// A nonnegative representation `b` with `sum b_i d_i = k`, or `None` when
/// `k` is not in the semigroup. Negative `k` is never a member.
pub fn member_representation(w: &WeightSystem, k: i64) -> Option<Vec<u64>> {
    w.apery().representation(k)
}

pub fn is_member(w: &WeightSystem, k: i64) -> bool {
    member_representation(w, k).is_some()
}

/// Largest integer outside the semigroup; `-1` when the semigroup is all of
/// `Z>=0`.
pub fn frobenius(w: &WeightSystem) -> Result<i64, SemigroupError> {
    if w.gcd() != 1 {
        return Err(SemigroupError::NotCoprime(w.gcd()));
    }
    Ok(w.apery().frobenius_reduced())
}

pub fn gaps(w: &WeightSystem) -> Result<Vec<u64>, SemigroupError> {
    let f = frobenius(w)?;
    Ok((0..=f.max(-1))
        .filter(|&k| !is_member(w, k))
        .map(|k| k as u64)
        .collect())
}

/// Membership table over `0..=bound` with one representation per member.
#[derive(Clone, Debug)]
pub struct SemigroupTable {
    bound: u64,
    representation: Vec<Option<Vec<u64>>>,
}

impl SemigroupTable {
    /// Table up to `max(frobenius + 1, 4 * weight_sum)`; the Frobenius term is
    /// dropped when the weights are not coprime.
    pub fn new(w: &WeightSystem) -> Self {
        let base = 4 * w.weight_sum();
        let bound = match frobenius(w) {
            Ok(f) => base.max((f + 1) as u64),
            Err(_) => base,
        };
        Self::with_bound(w, bound)
    }

    pub fn with_bound(w: &WeightSystem, bound: u64) -> Self {
        let representation = (0..=bound)
            .map(|k| member_representation(w, k as i64))
            .collect();
        SemigroupTable {
            bound,
            representation,
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn is_member(&self, k: u64) -> bool {
        self.representation(k).is_some()
    }

    pub fn representation(&self, k: u64) -> Option<&[u64]> {
        assert!(k <= self.bound, "{k} outside table bound {}", self.bound);
        self.representation[k as usize].as_deref()
    }
}

/// Integers `r` with `r_0 <= 0`, `r_1, ..., r_k >= 0` and
/// `sum r_i c_i = gcd(c)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedSignRep {
    pub coefficients: Vec<i128>,
    /// Set for a single generator, where the only representation is `(1)`
    /// and the sign pattern cannot hold.
    pub degenerate: bool,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

pub fn mixed_sign_rep(c: &[u64]) -> Result<MixedSignRep, SemigroupError> {
    if c.is_empty() {
        return Err(SemigroupError::EmptyGenerators);
    }
    if c.contains(&0) {
        return Err(SemigroupError::ZeroWeight);
    }
    let c: Vec<i128> = c.iter().map(|&x| x as i128).collect();
    if c.len() == 1 {
        return Ok(MixedSignRep {
            coefficients: vec![1],
            degenerate: true,
        });
    }
    // Bezout coefficients by folding the extended Euclidean algorithm.
    let mut r = vec![0i128; c.len()];
    r[0] = 1;
    let mut g = c[0];
    for i in 1..c.len() {
        let (g2, x, y) = ext_gcd(g, c[i]);
        for v in r.iter_mut().take(i) {
            *v *= x;
        }
        r[i] = y;
        g = g2;
    }
    let l = c.iter().fold(1i128, |acc, &x| acc.lcm(&x));
    let step0 = l / c[0];
    for i in 1..c.len() {
        if r[i] < 0 {
            let step = l / c[i];
            let t = (-r[i] + step - 1) / step;
            r[i] += t * step;
            r[0] -= t * step0;
        }
    }
    if r[0] > 0 {
        // Only possible when every r_i (i >= 1) vanished and c_0 = g.
        r[1] += l / c[1];
        r[0] -= step0;
    }
    Ok(MixedSignRep {
        coefficients: r,
        degenerate: false,
    })
}

/// Every `n` of the `n + 1` weights are coprime.
pub fn is_well_formed(w: &WeightSystem) -> bool {
    (0..w.len()).all(|j| {
        w.weights()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .fold(0u64, |g, (_, &d)| g.gcd(&d))
            == 1
    })
}

/// Whether `λ` is an `E`-eigenvalue of the delta-module, i.e.
/// `-λ - sum d_i` lies in the semigroup.
pub fn is_delta_weight(w: &WeightSystem, lam: &TwistParameter) -> bool {
    match lam.as_integer() {
        Some(l) => is_member_int(w, &(-l - BigInt::from(w.weight_sum()))),
        None => false,
    }
}

/// Membership for integers of any size. Everything past `i64::MAX` lies
/// beyond the conductor, so only divisibility by the gcd matters there.
pub fn is_member_int(w: &WeightSystem, k: &BigInt) -> bool {
    if k.is_negative() {
        return false;
    }
    match i64::try_from(k) {
        Ok(k) => is_member(w, k),
        Err(_) => (k % BigInt::from(w.gcd())).is_zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(w: &[u64]) -> WeightSystem {
        WeightSystem::new(w.to_vec()).unwrap()
    }

    #[test]
    fn construction_sorts_and_validates() {
        let w = ws(&[3, 1, 2]);
        assert_eq!(w.weights(), &[1, 2, 3]);
        assert_eq!(w.weight_sum(), 6);
        assert_eq!(w.n(), 2);
        assert_eq!(WeightSystem::new(vec![1]).unwrap_err(), SemigroupError::TooFewWeights(1));
        assert_eq!(WeightSystem::new(vec![0, 1]).unwrap_err(), SemigroupError::ZeroWeight);
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd_all(&ws(&[1, 1, 1])), 1);
        assert_eq!(gcd_all(&ws(&[2, 4])), 2);
        assert_eq!(gcd_all(&ws(&[6, 9, 20])), 1);
    }

    #[test]
    fn membership_examples() {
        let w = ws(&[2, 3]);
        assert!(!is_member(&w, 1));
        let rep = member_representation(&w, 7).unwrap();
        assert_eq!(rep[0] * 2 + rep[1] * 3, 7);
        assert_eq!(member_representation(&w, 0), Some(vec![0, 0]));
        assert!(!is_member(&w, -3));
    }

    #[test]
    fn membership_with_common_factor() {
        let w = ws(&[4, 6]);
        assert!(!is_member(&w, 2));
        assert!(is_member(&w, 10));
        assert!(!is_member(&w, 11));
        assert!(is_member(&w, 16));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius(&ws(&[2, 3])), Ok(1));
        assert_eq!(frobenius(&ws(&[3, 5])), Ok(7));
        assert_eq!(frobenius(&ws(&[6, 9, 20])), Ok(43));
        assert_eq!(frobenius(&ws(&[1, 4])), Ok(-1));
        assert_eq!(frobenius(&ws(&[2, 4])), Err(SemigroupError::NotCoprime(2)));
    }

    #[test]
    fn gaps_examples() {
        assert_eq!(gaps(&ws(&[1, 2])).unwrap(), Vec::<u64>::new());
        assert_eq!(gaps(&ws(&[2, 3])).unwrap(), vec![1]);
        assert_eq!(gaps(&ws(&[3, 5])).unwrap(), vec![1, 2, 4, 7]);
    }

    #[test]
    fn mixed_sign_examples() {
        assert_eq!(mixed_sign_rep(&[2, 3]).unwrap().coefficients, vec![-1, 1]);
        assert_eq!(mixed_sign_rep(&[4, 6]).unwrap().coefficients, vec![-1, 1]);
        let single = mixed_sign_rep(&[5]).unwrap();
        assert_eq!(single.coefficients, vec![1]);
        assert!(single.degenerate);
        let r = mixed_sign_rep(&[1, 5]).unwrap();
        assert!(r.coefficients[0] <= 0 && r.coefficients[1] >= 0);
        assert_eq!(r.coefficients[0] + 5 * r.coefficients[1], 1);
        assert_eq!(mixed_sign_rep(&[]), Err(SemigroupError::EmptyGenerators));
    }

    #[test]
    fn well_formedness() {
        assert!(is_well_formed(&ws(&[1, 1, 1])));
        assert!(!is_well_formed(&ws(&[1, 2, 2])));
        assert!(is_well_formed(&ws(&[2, 3, 5])));
        assert!(is_well_formed(&ws(&[1, 1])));
        assert!(!is_well_formed(&ws(&[2, 3])));
    }

    #[test]
    fn delta_weights() {
        let w = ws(&[1, 1, 1]);
        assert!(is_delta_weight(&w, &TwistParameter::integer(-3)));
        assert!(!is_delta_weight(&w, &TwistParameter::integer(-2)));
        assert!(!is_delta_weight(&w, &TwistParameter::Generic));
        assert!(!is_delta_weight(&w, &TwistParameter::rational(-7, 2)));
    }

    #[test]
    fn table_default_bound() {
        let w = ws(&[6, 9, 20]);
        let t = SemigroupTable::new(&w);
        assert_eq!(t.bound(), 4 * 35);
        assert!(!t.is_member(43));
        assert!(t.is_member(44));
        let w = ws(&[11, 13]);
        // frobenius 119 > 4 * 24
        assert_eq!(SemigroupTable::new(&w).bound(), 120);
    }
}
