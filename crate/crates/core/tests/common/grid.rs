//! Classification table worked out by hand from the theorem conditions.
//!
//! Per weight system: sum d, the semigroup, the twists in -sum d - A, and
//! whether the kernel witness applies. Columns are the twists
//! -7, -6, ..., 7, 1/2, generic.
//!
//! Codes:
//! - `Y` exactness guaranteed, kernel zero, stack yes, pushforward yes
//! - `W` as `Y` but pushforward not well formed
//! - `S` exactness guaranteed, kernel zero, outside scope (n = 1)
//! - `Q` exactness guaranteed, kernel nonzero, quotient equivalence only
//! - `N` exactness not guaranteed, kernel nonzero, no equivalence
//! - `U` exactness guaranteed, kernel unknown, outside scope

use num_bigint::BigInt;
use weylstack::classify::{
    classify, delta_exactness_certificate, make_witness, verify_witness, Exactness, KernelVerdict,
    PushforwardEquivalence, StackEquivalence, WitnessKind,
};
use weylstack::graded::Window;
use weylstack::TwistParameter;

use super::{brute_members, gcd, q, ws};

pub const WEIGHTS: [&[u64]; 6] = [&[1, 1, 1], &[2, 3], &[2, 4], &[1, 2, 2], &[2, 3, 5], &[3, 6, 9]];

// (1,1,1): A = N, delta twists <= -3, kernel nonzero for negative integers.
// (2,3): A = N \ {1}, delta twists -5, -7; n = 1 so never yes.
// (2,4): gcd 2, delta twist -6; every rational twist has the fractional
//        witness, generic is unknown.
// (1,2,2): A = N, delta twists <= -5, not well formed (2, 2 share 2).
// (2,3,5): A = N \ {1}, delta twists <= -10, none in range.
// (3,6,9): gcd 3, delta twists <= -18, none in range.
pub const TABLE: [&str; 6] = [
    "NNNNNQQYYYYYYYYYY",
    "NQNQQQQSQSSSSSSSS",
    "QNQQQQQQQQQQQQQQU",
    "NNNQQQQWWWWWWWWWW",
    "QQQQQQQYQYYYYYYYY",
    "QQQQQQQQQQQQQQQQU",
];

pub fn twists() -> Vec<TwistParameter> {
    let mut out: Vec<TwistParameter> = (-7..=7).map(TwistParameter::integer).collect();
    out.push(TwistParameter::rational(1, 2));
    out.push(TwistParameter::Generic);
    out
}

pub fn cells() -> Vec<(&'static [u64], TwistParameter, char)> {
    let mut out = Vec::new();
    for (w, row) in WEIGHTS.iter().zip(TABLE) {
        assert_eq!(row.len(), 17);
        for (lam, code) in twists().into_iter().zip(row.chars()) {
            out.push((*w, lam, code));
        }
    }
    out
}

/// Exactness fails to be guaranteed iff `-lambda - sum d` is a sum of
/// weights, decided by the test-side DP.
pub fn brute_delta_weight(w: &[u64], lam: &TwistParameter) -> bool {
    let Some(l) = lam.as_i64() else { return false };
    let t = -l - w.iter().sum::<u64>() as i64;
    t >= 0 && brute_members(w, t as usize)[t as usize]
}

/// Checks one grid cell against its code; `Err` carries the mismatch.
pub fn check_cell(w: &[u64], lam: &TwistParameter, code: char) -> Result<(), String> {
    let sys = ws(w);
    let c = classify(&sys, lam);
    let fail = |what: &str| Err(format!("{w:?} lambda={lam} code {code}: {what}"));

    let (exact, kernel, stack, push) = match code {
        'Y' => (true, "zero", StackEquivalence::Yes, PushforwardEquivalence::Yes),
        'W' => (true, "zero", StackEquivalence::Yes, PushforwardEquivalence::NotWellFormed),
        'S' => (true, "zero", StackEquivalence::OutsidePaperScope, PushforwardEquivalence::NotApplicable),
        'Q' => (true, "nonzero", StackEquivalence::QuotientEquivalenceOnly, PushforwardEquivalence::NotApplicable),
        'N' => (false, "nonzero", StackEquivalence::No, PushforwardEquivalence::NotApplicable),
        'U' => (true, "unknown", StackEquivalence::OutsidePaperScope, PushforwardEquivalence::NotApplicable),
        other => panic!("unknown code {other}"),
    };

    // three routes to exactness
    let from_classify = c.exactness == Exactness::Guaranteed;
    let brute = !brute_delta_weight(w, lam);
    let min = *w.iter().min().unwrap() as i64;
    let reach = lam.as_i64().map_or(0, |l| (-l - w.iter().sum::<u64>() as i64).max(0) / min);
    let mut win = Window::default_for(&sys);
    win.order_bound = win.order_bound.max(reach as u32 + 1);
    let cert = delta_exactness_certificate(&sys, lam, &win);
    if !cert.conclusive {
        return fail("delta certificate inconclusive");
    }
    if from_classify != brute || brute == cert.found || from_classify != exact {
        return fail(&format!(
            "exactness routes disagree: classify {from_classify}, brute {brute}, delta found {}, table {exact}",
            cert.found
        ));
    }

    let got_kernel = match &c.kernel {
        KernelVerdict::Zero => "zero",
        KernelVerdict::NonzeroWitness { .. } => "nonzero",
        KernelVerdict::UnknownByPaper => "unknown",
    };
    if got_kernel != kernel {
        return fail(&format!("kernel {got_kernel}"));
    }
    if c.stack_equivalence != stack {
        return fail(&format!("stack {:?}", c.stack_equivalence));
    }
    if c.pushforward_equivalence != push {
        return fail(&format!("pushforward {:?}", c.pushforward_equivalence));
    }
    if c.n_caveat != (w.len() == 2) {
        return fail("n caveat");
    }

    if let KernelVerdict::NonzeroWitness { witness } = &c.kernel {
        // the witness kind follows from gcd and lambda alone
        let g = w.iter().fold(0, |a, &b| gcd(a, b));
        let expected = if g == 1 {
            WitnessKind::TwistingSheaf {
                k: BigInt::from(lam.as_i64().expect("integral twist")),
            }
        } else {
            let l = lam.as_rational().expect("rational twist").clone();
            let mut base = vec![q(0); w.len()];
            base[0] = (l - q(1)) / q(w[0] as i64);
            WitnessKind::FractionalModule { base }
        };
        if witness.kind != expected {
            return fail(&format!("witness {witness}"));
        }
        if make_witness(&sys, lam).as_ref() != Ok(witness) {
            return fail("make_witness disagrees");
        }
        if let Err(e) = verify_witness(witness, &sys, lam, &Window::default_for(&sys)) {
            return fail(&format!("witness rejected: {e}"));
        }
    }
    Ok(())
}
