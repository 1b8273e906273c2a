//! Independent reference implementations used as oracles by the
//! integration tests. Nothing here calls into the library's algorithms
//! beyond constructing inputs.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use weylstack::weyl::Monomial;
use weylstack::{WeightSystem, WeylElement};

pub mod cli;
pub mod grid;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn ws(w: &[u64]) -> WeightSystem {
    WeightSystem::new(w.to_vec()).unwrap()
}

/// Plain boolean DP: `k` is a sum of weights.
pub fn brute_members(weights: &[u64], bound: usize) -> Vec<bool> {
    let mut member = vec![false; bound + 1];
    member[0] = true;
    for k in 1..=bound {
        member[k] = weights
            .iter()
            .any(|&d| d as usize <= k && member[k - d as usize]);
    }
    member
}

/// Exhaustive search over `0 <= b_i <= k / d_i`.
pub fn enumerate_member(weights: &[u64], k: u64) -> bool {
    fn go(weights: &[u64], i: usize, rest: u64) -> bool {
        if i == weights.len() {
            return rest == 0;
        }
        (0..=rest / weights[i]).any(|b| go(weights, i + 1, rest - b * weights[i]))
    }
    go(weights, 0, k)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Coefficients of `prod_i 1 / (1 - t^d_i)` up to `t^bound`, by multiplying
/// truncated geometric series.
pub fn hilbert_series(weights: &[u64], bound: usize) -> Vec<u64> {
    let mut series = vec![0u64; bound + 1];
    series[0] = 1;
    for &d in weights {
        let geometric: Vec<u64> = (0..=bound).map(|j| u64::from(j % d as usize == 0)).collect();
        let mut next = vec![0u64; bound + 1];
        for (i, &a) in series.iter().enumerate() {
            for (j, &g) in geometric.iter().enumerate().take(bound + 1 - i) {
                next[i + j] += a * g;
            }
        }
        series = next;
    }
    series
}

/// A polynomial in `x_0..x_n` with rational coefficients.
pub type Poly = BTreeMap<Vec<u32>, Q>;

pub fn poly_add(p: &mut Poly, e: Vec<u32>, c: Q) {
    let v = p.remove(&e).unwrap_or_else(Q::zero) + c;
    if !v.is_zero() {
        p.insert(e, v);
    }
}

/// `x^alpha d^beta` applied to `f`, differentiating first.
pub fn act_monomial(alpha: &[u32], beta: &[u32], f: &Poly) -> Poly {
    let mut out = Poly::new();
    for (e, c) in f {
        let mut e = e.clone();
        let mut c = c.clone();
        for i in 0..e.len() {
            for _ in 0..beta[i] {
                c *= q(e[i] as i64);
                if e[i] == 0 {
                    break;
                }
                e[i] -= 1;
            }
        }
        if c.is_zero() {
            continue;
        }
        for i in 0..e.len() {
            e[i] += alpha[i];
        }
        poly_add(&mut out, e, c);
    }
    out
}

pub fn act(a: &WeylElement, f: &Poly) -> Poly {
    let mut out = Poly::new();
    for (m, c) in a.terms() {
        for (e, v) in act_monomial(m.alpha(), m.beta(), f) {
            poly_add(&mut out, e, v * c);
        }
    }
    out
}

/// All exponent vectors of total degree `<= deg`.
pub fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Vec<u32>> {
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
    go(nvars, deg, &mut Vec::new(), &mut out);
    out
}

/// Uniform over the box, rejected until the total is `<= bound`.
pub fn bounded_exponents(nvars: usize, bound: u32, rng: &mut impl Rng) -> Vec<u32> {
    loop {
        let v: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=bound)).collect();
        if v.iter().sum::<u32>() <= bound {
            return v;
        }
    }
}

/// A random element with `|alpha|, |beta| <= bound` and small integer
/// coefficients.
pub fn random_element(nvars: usize, bound: u32, terms: usize, rng: &mut impl Rng) -> WeylElement {
    let mut e = WeylElement::zero(nvars);
    for _ in 0..terms {
        let alpha = bounded_exponents(nvars, bound, rng);
        let beta = bounded_exponents(nvars, bound, rng);
        let c = rng.gen_range(-5i64..=5);
        e.add_term(Monomial::new(&alpha, &beta), q(c));
    }
    e
}

/// A random element of degree `k` with `|beta| <= order`, built directly
/// from exponent vectors rather than the library's basis enumeration.
pub fn random_homogeneous(w: &WeightSystem, k: i64, order: u32, terms: usize, rng: &mut impl Rng) -> WeylElement {
    let n = w.len();
    let d = w.weights();
    let mut e = WeylElement::zero(n);
    let mut attempts = 0;
    while e.len() < terms && attempts < 2000 {
        attempts += 1;
        let mut beta = vec![0u32; n];
        let ord = rng.gen_range(0..=order);
        for _ in 0..ord {
            beta[rng.gen_range(0..n)] += 1;
        }
        // fill alpha greedily towards degree k + <d, beta>, then demand exactness
        let mut target = k + beta.iter().zip(d).map(|(&b, &w)| b as i64 * w as i64).sum::<i64>();
        if target < 0 {
            continue;
        }
        let mut alpha = vec![0u32; n];
        for _ in 0..64 {
            if target == 0 {
                break;
            }
            let i = rng.gen_range(0..n);
            if d[i] as i64 <= target {
                alpha[i] += 1;
                target -= d[i] as i64;
            }
        }
        if target != 0 {
            continue;
        }
        let c = rng.gen_range(1i64..=7) * if rng.gen_bool(0.5) { 1 } else { -1 };
        e.add_term(Monomial::new(&alpha, &beta), q(c));
    }
    e
}

pub fn one() -> Q {
    Q::one()
}
