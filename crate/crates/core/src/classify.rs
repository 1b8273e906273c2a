//! Verdicts on `Gamma_lambda` for a weight system and twist, with the
//! witnesses that back them.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graded::{exponents_up_to_order, hilbert_dim, Window};
use crate::scalar::Q;
use crate::semigroup::{is_delta_weight, is_member, is_member_int, is_well_formed, WeightSystem};
use crate::twist::{congruent_mod, TwistParameter};
use crate::weyl::{
    delta_action, euler_eigenvalue_delta, euler_eigenvalue_formal, euler_field, formal_action,
    DeltaElement, FormalMonomialElement, WeylElement,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("no kernel witness applies: the kernel is {0}")]
    NoWitnessApplicable(&'static str),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Guaranteed,
    NotGuaranteedByPaper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StackEquivalence {
    Yes,
    QuotientEquivalenceOnly,
    No,
    OutsidePaperScope,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PushforwardEquivalence {
    Yes,
    NotWellFormed,
    NotApplicable,
}

fn ser_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_rationals<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

/// A nonzero object of `Ker Gamma_lambda`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessKind {
    /// `O(k)` for an integer `k` outside the semigroup.
    TwistingSheaf {
        #[serde(serialize_with = "ser_display")]
        k: BigInt,
    },
    /// `D x^base` inside the formal monomials, `base = ((lambda-1)/d_0, 0, ..., 0)`.
    FractionalModule {
        #[serde(serialize_with = "ser_rationals")]
        base: Vec<Q>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelWitness {
    #[serde(flatten)]
    pub kind: WitnessKind,
    pub verification_window: Window,
}

impl fmt::Display for KernelWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WitnessKind::TwistingSheaf { k } => write!(f, "TwistingSheaf({k})"),
            WitnessKind::FractionalModule { base } => {
                let b: Vec<String> = base.iter().map(|q| q.to_string()).collect();
                write!(f, "FractionalModule(base ({}))", b.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum KernelVerdict {
    Zero,
    NonzeroWitness { witness: KernelWitness },
    UnknownByPaper,
}

/// The facts the verdicts were derived from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub gcd: u64,
    pub weight_sum: u64,
    pub twist_integral: bool,
    /// `lambda` lies in the semigroup; `None` for non-integral twists.
    pub twist_in_semigroup: Option<bool>,
    /// `lambda` lies in `-sum d - semigroup`.
    pub delta_weight: bool,
    pub well_formed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub weights: Vec<u64>,
    pub twist: TwistParameter,
    pub exactness: Exactness,
    pub kernel: KernelVerdict,
    pub stack_equivalence: StackEquivalence,
    pub pushforward_equivalence: PushforwardEquivalence,
    /// Set for `n = 1`, where the saturation lemma behind equivalence fails.
    pub n_caveat: bool,
    pub evidence: Evidence,
}

impl Classification {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("classification serialises")
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(|d| d.to_string()).collect();
        writeln!(f, "weights: ({})", w.join(","))?;
        writeln!(f, "twist: {}", self.twist)?;
        writeln!(f, "exactness: {:?}", self.exactness)?;
        match &self.kernel {
            KernelVerdict::NonzeroWitness { witness } => writeln!(f, "kernel: NonzeroWitness({witness})")?,
            k => writeln!(f, "kernel: {k:?}")?,
        }
        writeln!(f, "stack_equivalence: {:?}", self.stack_equivalence)?;
        writeln!(f, "pushforward_equivalence: {:?}", self.pushforward_equivalence)?;
        write!(f, "n_caveat: {}", self.n_caveat)
    }
}

fn twist_in_semigroup(w: &WeightSystem, lam: &TwistParameter) -> Option<bool> {
    lam.as_integer().map(|k| is_member_int(w, &k))
}

/// Builds the kernel witness for `(w, lambda)`.
pub fn make_witness(w: &WeightSystem, lam: &TwistParameter) -> Result<KernelWitness, ClassifyError> {
    let verification_window = Window::default_for(w);
    if w.gcd() == 1 {
        return match lam.as_integer() {
            Some(k) if !is_member_int(w, &k) => Ok(KernelWitness {
                kind: WitnessKind::TwistingSheaf { k },
                verification_window,
            }),
            _ => Err(ClassifyError::NoWitnessApplicable("zero")),
        };
    }
    match lam {
        TwistParameter::Rational(l) => {
            let d0 = Q::from_integer(BigInt::from(w.weight(0)));
            let mut base = vec![Q::zero(); w.len()];
            base[0] = (l - Q::one()) / d0;
            Ok(KernelWitness {
                kind: WitnessKind::FractionalModule { base },
                verification_window,
            })
        }
        TwistParameter::Generic => Err(ClassifyError::NoWitnessApplicable("unknown")),
    }
}

pub fn classify(w: &WeightSystem, lam: &TwistParameter) -> Classification {
    let delta_weight = is_delta_weight(w, lam);
    let in_semigroup = twist_in_semigroup(w, lam);
    let well_formed = is_well_formed(w);
    let exactness = if delta_weight {
        Exactness::NotGuaranteedByPaper
    } else {
        Exactness::Guaranteed
    };
    let kernel = match make_witness(w, lam) {
        Ok(witness) => KernelVerdict::NonzeroWitness { witness },
        Err(ClassifyError::NoWitnessApplicable("unknown")) => KernelVerdict::UnknownByPaper,
        Err(_) => KernelVerdict::Zero,
    };
    let n_caveat = w.n() == 1;
    let stack_equivalence = match (exactness, &kernel) {
        (Exactness::Guaranteed, KernelVerdict::Zero) if n_caveat => StackEquivalence::OutsidePaperScope,
        (Exactness::Guaranteed, KernelVerdict::Zero) => StackEquivalence::Yes,
        (Exactness::Guaranteed, KernelVerdict::UnknownByPaper) => StackEquivalence::OutsidePaperScope,
        (Exactness::Guaranteed, _) => StackEquivalence::QuotientEquivalenceOnly,
        // a nonzero kernel object rules out an equivalence outright
        (Exactness::NotGuaranteedByPaper, KernelVerdict::NonzeroWitness { .. }) => StackEquivalence::No,
        (Exactness::NotGuaranteedByPaper, _) => StackEquivalence::OutsidePaperScope,
    };
    let pushforward_equivalence = match (stack_equivalence, well_formed) {
        (StackEquivalence::Yes, true) => PushforwardEquivalence::Yes,
        (StackEquivalence::Yes, false) => PushforwardEquivalence::NotWellFormed,
        _ => PushforwardEquivalence::NotApplicable,
    };
    Classification {
        weights: w.weights().to_vec(),
        twist: lam.clone(),
        exactness,
        kernel,
        stack_equivalence,
        pushforward_equivalence,
        n_caveat,
        evidence: Evidence {
            gcd: w.gcd(),
            weight_sum: w.weight_sum(),
            twist_integral: lam.is_integral(),
            twist_in_semigroup: in_semigroup,
            delta_weight,
            well_formed,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessVerification {
    TwistingSheaf {
        #[serde(serialize_with = "ser_display")]
        k: BigInt,
        /// `dim A_k`, which must vanish.
        degree_zero_dim: u64,
        /// A degree `j` in the window with `A_j != 0`.
        nonzero_degree: i64,
        nonzero_dim: u64,
    },
    FractionalModule {
        monomials_explored: usize,
        /// Distinct `E`-eigenvalues met, none congruent to `lambda` modulo
        /// the gcd.
        #[serde(serialize_with = "ser_rationals")]
        eigenvalues: Vec<Q>,
        gcd: u64,
    },
}

fn fail<T>(msg: impl Into<String>) -> Result<T, ClassifyError> {
    Err(ClassifyError::VerificationFailed(msg.into()))
}

/// Re-derives the witness's defining properties from scratch.
pub fn verify_witness(
    wit: &KernelWitness,
    w: &WeightSystem,
    lam: &TwistParameter,
    win: &Window,
) -> Result<WitnessVerification, ClassifyError> {
    match &wit.kind {
        WitnessKind::TwistingSheaf { k } => {
            if lam.as_integer().as_ref() != Some(k) {
                return fail(format!("witness O({k}) does not match twist {lam}"));
            }
            if is_member_int(w, k) {
                return fail(format!("precondition: {k} lies in the semigroup"));
            }
            let degree_zero_dim = match i64::try_from(k) {
                Ok(k) => hilbert_dim(w, k),
                Err(_) => 0,
            };
            if degree_zero_dim != 0 {
                return fail(format!("dim A_{k} = {degree_zero_dim}"));
            }
            // A_j != 0 exhibits O(k) as nonzero: prefer the first member above k
            let above = i64::try_from(k).map_or(win.degree_lo, |k| (k + 1).max(win.degree_lo));
            let j = (above..=win.degree_hi)
                .chain(win.degree_lo..above.min(win.degree_hi + 1))
                .find(|&j| is_member(w, j));
            let Some(j) = j else {
                return fail(format!("no nonzero A_j with j in [{}, {}]", win.degree_lo, win.degree_hi));
            };
            let nonzero_dim = hilbert_dim(w, j);
            if nonzero_dim == 0 {
                return fail(format!("dim A_{j} = 0 although {j} is a member"));
            }
            Ok(WitnessVerification::TwistingSheaf {
                k: k.clone(),
                degree_zero_dim,
                nonzero_degree: j,
                nonzero_dim,
            })
        }
        WitnessKind::FractionalModule { base } => {
            let TwistParameter::Rational(l) = lam else {
                return fail("precondition: the fractional witness needs a concrete twist");
            };
            let g = w.gcd();
            if g == 1 {
                return fail("precondition: the fractional witness needs gcd > 1");
            }
            let expected = (l - Q::one()) / Q::from_integer(BigInt::from(w.weight(0)));
            if base.len() != w.len() || base[0] != expected || base[1..].iter().any(|b| !b.is_zero()) {
                return fail("witness base does not match the twist");
            }
            explore_fractional(w, l, base, win.order_bound)
        }
    }
}

/// Breadth-first closure of `x^base` under the generators `x_i`, `d_i`,
/// `steps` levels deep, checking every monomial met.
fn explore_fractional(
    w: &WeightSystem,
    lam: &Q,
    base: &[Q],
    steps: u32,
) -> Result<WitnessVerification, ClassifyError> {
    let n = w.len();
    let euler: WeylElement<Q> = euler_field(w);
    let generators: Vec<WeylElement<Q>> = (0..n)
        .flat_map(|i| [WeylElement::x(n, i), WeylElement::d(n, i)])
        .collect();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(vec![0i64; n]);
    queue.push_back((vec![0i64; n], 0u32));
    let mut eigenvalues = BTreeSet::new();
    while let Some((m, depth)) = queue.pop_front() {
        let mut v = FormalMonomialElement::zero(base.to_vec());
        v.add_term(m.clone(), Q::one());
        let mu = euler_eigenvalue_formal(w, &v.exponent(&m));
        let mut expected = FormalMonomialElement::zero(base.to_vec());
        expected.add_term(m.clone(), mu.clone());
        if formal_action(&euler, &v) != expected {
            return fail(format!("{v} is not an E-eigenvector"));
        }
        if congruent_mod(&mu, lam, w.gcd()) {
            return fail(format!("eigenvalue {mu} of {v} is congruent to {lam} mod {}", w.gcd()));
        }
        eigenvalues.insert(mu);
        if depth == steps {
            continue;
        }
        for g in &generators {
            let image = formal_action(g, &v);
            for (off, _) in image.terms() {
                if seen.insert(off.clone()) {
                    queue.push_back((off.clone(), depth + 1));
                }
            }
        }
    }
    Ok(WitnessVerification::FractionalModule {
        monomials_explored: seen.len(),
        eigenvalues: eigenvalues.into_iter().collect(),
        gcd: w.gcd(),
    })
}

/// Enumerated `E`-eigenvalues of `d^beta delta`, `|beta| <= order_bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaCertificate {
    pub order_bound: u32,
    /// Whether `lambda` occurs among the enumerated weights.
    pub found: bool,
    /// The smallest `beta` (DegLex) realising `lambda`.
    pub beta: Option<Vec<u32>>,
    /// The enumeration decides the question: a hit, or a twist that no
    /// `|beta|` beyond the bound could reach.
    pub conclusive: bool,
    pub eigenvalues: Vec<i64>,
}

pub fn delta_exactness_certificate(w: &WeightSystem, lam: &TwistParameter, win: &Window) -> DeltaCertificate {
    let n = w.len();
    let euler: WeylElement<Q> = euler_field(w);
    let mut betas = exponents_up_to_order(n, win.order_bound);
    betas.sort_by(|a, b| a.iter().sum::<u32>().cmp(&b.iter().sum()).then_with(|| b.cmp(a)));
    let mut eigenvalues = BTreeSet::new();
    let mut beta_hit = None;
    for beta in betas {
        let v = DeltaElement::monomial(&beta, Q::one());
        let mu = euler_eigenvalue_delta(w, &beta);
        let image = delta_action(&euler, &v);
        assert_eq!(
            image,
            v.scale(&Q::from_integer(BigInt::from(mu))),
            "d^beta delta is an E-eigenvector"
        );
        if beta_hit.is_none() && lam.as_integer() == Some(BigInt::from(mu)) {
            beta_hit = Some(beta);
        }
        eigenvalues.insert(mu);
    }
    let found = beta_hit.is_some();
    let conclusive = found
        || match lam.as_integer() {
            None => true,
            Some(l) => {
                // any beta reaching lambda has |beta| <= (-lambda - sum d) / d_0
                let t = -l - BigInt::from(w.weight_sum());
                t < BigInt::zero() || t <= BigInt::from(win.order_bound as u64 * w.weight(0))
            }
        };
    DeltaCertificate {
        order_bound: win.order_bound,
        found,
        beta: beta_hit,
        conclusive,
        eigenvalues: eigenvalues.into_iter().rev().collect(),
    }
}
