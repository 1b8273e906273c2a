//! Coefficient domains.
//!
//! Everything in the crate is exact. Four domains are used:
//!
//! * [`Q`], arbitrary-precision rationals, for concrete twists;
//! * [`Poly`], polynomials in the twist `lam` over `Q`, for normal forms
//!   computed with a symbolic twist;
//! * [`RatFunc`], the field `Q(lam)`, for exact ranks with a symbolic twist;
//! * [`Fp`], integers modulo the Mersenne prime `2^61 - 1`, used only to
//!   certify rank lower bounds quickly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

/// A commutative ring containing a copy of the rationals with small
/// denominators.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_bigint(n: &BigInt) -> Self;
    fn from_rational(q: &Q) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Splits off a leading minus sign for printing: `(negative, magnitude)`.
    fn split_sign(&self) -> (bool, Self) {
        (false, self.clone())
    }
}

pub trait Field: Scalar {
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    fn divided(&self, other: &Self) -> Self {
        self.times(&other.inv())
    }

    /// A canonical nonzero multiple of `v`, for printing basis vectors.
    fn primitive(v: &[Self]) -> Vec<Self> {
        v.to_vec()
    }
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_bigint(n: &BigInt) -> Self {
        Q::from_integer(n.clone())
    }
    fn from_rational(q: &Q) -> Self {
        q.clone()
    }
    fn split_sign(&self) -> (bool, Self) {
        (self.is_negative(), self.abs())
    }
}

impl Field for Q {
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }

    /// Integer entries with content 1 and last nonzero entry positive.
    fn primitive(v: &[Self]) -> Vec<Self> {
        let den = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if content.is_zero() {
            return v.to_vec();
        }
        let last = ints.iter().rev().find(|x| !x.is_zero()).expect("nonzero vector");
        let scale = if last.is_negative() { -content } else { content };
        ints.into_iter().map(|x| Q::from_integer(x / &scale)).collect()
    }
}

/// Integers modulo `2^61 - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp(u64);

impl Fp {
    pub const MODULUS: u64 = (1 << 61) - 1;

    pub fn new(n: u64) -> Self {
        Fp(n % Self::MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn mul_raw(a: u64, b: u64) -> u64 {
        let p = a as u128 * b as u128;
        let lo = (p as u64) & Self::MODULUS;
        let hi = (p >> 61) as u64;
        let s = lo + hi;
        if s >= Self::MODULUS {
            s - Self::MODULUS
        } else {
            s
        }
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::mul_raw(acc, base);
            }
            base = Self::mul_raw(base, base);
            e >>= 1;
        }
        Fp(acc)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Scalar for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn plus(&self, other: &Self) -> Self {
        let s = self.0 + other.0;
        Fp(if s >= Self::MODULUS { s - Self::MODULUS } else { s })
    }
    fn minus(&self, other: &Self) -> Self {
        if self.0 >= other.0 {
            Fp(self.0 - other.0)
        } else {
            Fp(self.0 + Self::MODULUS - other.0)
        }
    }
    fn times(&self, other: &Self) -> Self {
        Fp(Self::mul_raw(self.0, other.0))
    }
    fn negated(&self) -> Self {
        if self.0 == 0 {
            *self
        } else {
            Fp(Self::MODULUS - self.0)
        }
    }
    fn from_bigint(n: &BigInt) -> Self {
        let m = BigInt::from(Self::MODULUS);
        let r = n.mod_floor(&m);
        Fp(r.to_u64().expect("residue fits in u64"))
    }
    fn from_rational(q: &Q) -> Self {
        let num = Self::from_bigint(q.numer());
        let den = Self::from_bigint(q.denom());
        assert!(!den.is_zero(), "denominator divisible by the modulus");
        num.times(&den.inv())
    }
}

impl Field for Fp {
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(Self::MODULUS - 2)
    }
}

/// Dense univariate polynomial over `Q` in the twist variable `lam`.
/// Coefficients are stored lowest degree first, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate `lam`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![q(0), q(1)])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.coeffs.len() {
            0 => Some(q(0)),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, at: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(q(0), |acc, c| acc * at + c)
    }

    pub fn eval_in<S: Scalar>(&self, at: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc.times(at).plus(&S::from_rational(c)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Euclidean division; panics when dividing by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![q(0); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] / &lc;
            let shift = top - dd;
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &c * dc;
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.coeffs.is_empty() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.as_constant() {
            return write!(f, "{c}");
        }
        write!(f, "(")?;
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if Zero::is_zero(c) {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = num_traits::One::is_one(&abs);
            match (deg, unit) {
                (0, _) => write!(f, "{abs}")?,
                (_, true) => {}
                (_, false) => write!(f, "{abs}*")?,
            }
            match deg {
                0 => {}
                1 => write!(f, "lam")?,
                _ => write!(f, "lam^{deg}")?,
            }
        }
        write!(f, ")")
    }
}

impl Scalar for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn one() -> Self {
        Poly::constant(q(1))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = q(0);
        Self::from_coeffs(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
    fn times(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::default();
        }
        let mut out = vec![q(0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }
    fn negated(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn from_bigint(n: &BigInt) -> Self {
        Poly::constant(Q::from_integer(n.clone()))
    }
    fn from_rational(q: &Q) -> Self {
        Poly::constant(q.clone())
    }
    fn split_sign(&self) -> (bool, Self) {
        match self.as_constant() {
            Some(c) if c.is_negative() => (true, Poly::constant(-c)),
            _ => (false, self.clone()),
        }
    }
}

/// An element of `Q(lam)`, kept as `num/den` with `den` monic and coprime
/// to `num`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc {
                num,
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let lc = d.leading().unwrap().recip();
        RatFunc {
            num: n.scale(&lc),
            den: d.scale(&lc),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    /// Evaluates at a rational point; `None` at a pole.
    pub fn eval(&self, at: &Q) -> Option<Q> {
        let d = self.den.eval(at);
        if Zero::is_zero(&d) {
            None
        } else {
            Some(self.num.eval(at) / d)
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Scalar for RatFunc {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        if self.den == other.den {
            return RatFunc::new(self.num.plus(&other.num), self.den.clone());
        }
        RatFunc::new(
            self.num
                .times(&other.den)
                .plus(&other.num.times(&self.den)),
            self.den.times(&other.den),
        )
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
    fn times(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        RatFunc::new(self.num.times(&other.num), self.den.times(&other.den))
    }
    fn negated(&self) -> Self {
        RatFunc {
            num: self.num.negated(),
            den: self.den.clone(),
        }
    }
    fn from_bigint(n: &BigInt) -> Self {
        Self::from_poly(Poly::from_bigint(n))
    }
    fn from_rational(q: &Q) -> Self {
        Self::from_poly(Poly::from_rational(q))
    }
}

impl Field for RatFunc {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        RatFunc::new(self.den.clone(), self.num.clone())
    }
}
