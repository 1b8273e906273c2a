//! Windowed homology of `0 -> D^lam -> (+)_i D^lam(d_i) -> (+)_(i<j) D^lam(d_i + d_j)`.
//!
//! Every map here is homogeneous for the `Z^(n+1)`-grading `deg x_i = e_i`,
//! `deg d_i = -e_i`, so each weighted-degree block splits into multidegree
//! blocks `nu`: `C0 = D^lam_nu`, `C1 = (+)_i D^lam_(nu+e_i)`,
//! `C2 = (+)_(i<j) D^lam_(nu+e_i+e_j)`, each truncated at `|beta| <= B`.
//! Left multiplication by `x_i` never raises the order of a normal form, so
//! the truncated maps are restrictions of the true ones, truncated kernels
//! are exact, and `Im phi_1` meets the truncation in exactly the image of
//! the truncated `C0`.
//!
//! Ranks are first computed modulo `2^61 - 1`. Since ranks can only drop
//! modulo `p` and `rk phi_1 + rk phi_2 <= dim C1`, a block with
//! `rk_p phi_1 = dim C0` and `rk_p phi_1 + rk_p phi_2 = dim C1` has
//! `Ker phi_1 = 0` and vanishing homology over `Q` (or `Q(lam)`). Other
//! blocks are recomputed exactly.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{koszul_pairs, EulerReducer, GradedError, Window};
use crate::linalg::{kernel_of_columns, rank_of_columns, solve_columns, Span};
use crate::scalar::{Field, Fp, RatFunc, Scalar};
use crate::semigroup::WeightSystem;
use crate::twist::TwistParameter;
use crate::weyl::{Monomial, WeylElement};

/// Stand-in for a transcendental `lam` in modular rank certificates.
const GENERIC_LAMBDA_MOD_P: u64 = 0x1d2c_3b4a_5968_7786;

/// Standard monomials (`min(alpha_0, beta_0) = 0`) of multidegree `nu` with
/// `|beta| <= order_bound`, ascending DegLex.
pub fn standard_basis(nu: &[i64], order_bound: u32) -> Vec<Monomial> {
    let n = nu.len();
    let min_beta: Vec<u32> = nu.iter().map(|&v| (-v).max(0) as u32).collect();
    let floor: u32 = min_beta.iter().sum();
    if floor > order_bound {
        return Vec::new();
    }
    let mut out = Vec::new();
    // beta_0 is pinned to its minimum; distribute the rest over 1..n
    let mut extra = vec![0u32; n];
    fn go(
        i: usize,
        left: u32,
        extra: &mut Vec<u32>,
        nu: &[i64],
        min_beta: &[u32],
        out: &mut Vec<Monomial>,
    ) {
        if i == nu.len() {
            let beta: Vec<u32> = min_beta.iter().zip(extra.iter()).map(|(a, b)| a + b).collect();
            let alpha: Vec<u32> = beta
                .iter()
                .zip(nu)
                .map(|(&b, &v)| (b as i64 + v) as u32)
                .collect();
            out.push(Monomial::new(&alpha, &beta));
            return;
        }
        for e in 0..=left {
            extra[i] = e;
            go(i + 1, left - e, extra, nu, min_beta, out);
        }
        extra[i] = 0;
    }
    go(1, order_bound - floor, &mut extra, nu, &min_beta, &mut out);
    out.sort();
    out
}

struct Space {
    parts: Vec<Vec<Monomial>>,
    offsets: Vec<usize>,
    index: Vec<HashMap<Monomial, usize>>,
    dim: usize,
}

impl Space {
    fn new(parts: Vec<Vec<Monomial>>) -> Self {
        let mut offsets = Vec::new();
        let mut dim = 0;
        let mut index = Vec::new();
        for p in &parts {
            offsets.push(dim);
            index.push(p.iter().enumerate().map(|(j, m)| (m.clone(), dim + j)).collect());
            dim += p.len();
        }
        Space {
            parts,
            offsets,
            index,
            dim,
        }
    }

    fn position(&self, part: usize, m: &Monomial) -> usize {
        *self.index[part]
            .get(m)
            .expect("normal form stays in the truncated block")
    }

    fn element<S: Scalar>(&self, part: usize, v: &[S], nvars: usize) -> WeylElement<S> {
        let off = self.offsets[part];
        WeylElement::from_terms(
            nvars,
            self.parts[part]
                .iter()
                .enumerate()
                .map(|(j, m)| (m.clone(), v[off + j].clone())),
        )
    }
}

fn shifted(nu: &[i64], idx: &[usize]) -> Vec<i64> {
    let mut v = nu.to_vec();
    for &i in idx {
        v[i] += 1;
    }
    v
}

struct BlockSpaces {
    c0: Space,
    c1: Space,
    c2: Space,
}

fn block_spaces(nu: &[i64], order_bound: u32) -> BlockSpaces {
    let n = nu.len();
    BlockSpaces {
        c0: Space::new(vec![standard_basis(nu, order_bound)]),
        c1: Space::new(
            (0..n)
                .map(|i| standard_basis(&shifted(nu, &[i]), order_bound))
                .collect(),
        ),
        c2: Space::new(
            koszul_pairs(n)
                .into_iter()
                .map(|(i, j)| standard_basis(&shifted(nu, &[i, j]), order_bound))
                .collect(),
        ),
    }
}

/// Matrices of the truncated `phi_1`, `phi_2` on one multidegree block, as
/// lists of columns.
pub struct BlockMatrices<S> {
    pub dims: [usize; 3],
    pub phi1: Vec<Vec<S>>,
    pub phi2: Vec<Vec<S>>,
}

fn add_x_image<S: Scalar>(
    reducer: &mut EulerReducer<S>,
    space: &Space,
    part: usize,
    s: &Monomial,
    i: usize,
    sign: &S,
    col: &mut [S],
) {
    let mut m = s.clone();
    m.alpha_mut()[i] += 1;
    for (t, c) in reducer.reduce_monomial(&m).iter() {
        let p = space.position(part, t);
        col[p] = col[p].plus(&c.times(sign));
    }
}

fn matrices<S: Scalar>(reducer: &mut EulerReducer<S>, sp: &BlockSpaces, n: usize) -> BlockMatrices<S> {
    let one = S::one();
    let minus_one = one.negated();
    let mut phi1 = Vec::with_capacity(sp.c0.dim);
    for s in &sp.c0.parts[0] {
        let mut col = vec![S::zero(); sp.c1.dim];
        for i in 0..n {
            add_x_image(reducer, &sp.c1, i, s, i, &one, &mut col);
        }
        phi1.push(col);
    }
    let pairs = koszul_pairs(n);
    let pair_index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut phi2 = Vec::with_capacity(sp.c1.dim);
    for i in 0..n {
        for s in &sp.c1.parts[i] {
            let mut col = vec![S::zero(); sp.c2.dim];
            for j in 0..n {
                if j == i {
                    continue;
                }
                // component (a, b) is x_a m_b - x_b m_a
                let (pair, sign) = if i < j {
                    ((i, j), &minus_one)
                } else {
                    ((j, i), &one)
                };
                add_x_image(reducer, &sp.c2, pair_index[&pair], s, j, sign, &mut col);
            }
            phi2.push(col);
        }
    }
    BlockMatrices {
        dims: [sp.c0.dim, sp.c1.dim, sp.c2.dim],
        phi1,
        phi2,
    }
}

/// The truncated Koszul matrices of multidegree `nu`, over a ring `S` in
/// which `lam` is the given element.
pub fn block_matrices<S: Scalar>(w: &WeightSystem, lam: S, nu: &[i64], order_bound: u32) -> BlockMatrices<S> {
    assert_eq!(nu.len(), w.len(), "multidegree arity");
    let mut reducer = EulerReducer::new(w, lam);
    let sp = block_spaces(nu, order_bound);
    matrices(&mut reducer, &sp, w.len())
}

/// One weighted-degree block, summed over its multidegrees.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeBlock {
    pub degree: i64,
    pub c0_dim: usize,
    pub c1_dim: usize,
    pub c2_dim: usize,
    pub ker_phi1_dim: usize,
    pub homology_dim: usize,
    pub multidegrees: usize,
    pub modular_certified: usize,
    pub exact: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyWitness {
    pub degree: i64,
    pub multidegree: Vec<i64>,
    pub components: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Phi1KernelVector {
    pub degree: i64,
    pub multidegree: Vec<i64>,
    pub element: String,
}

/// The `n = 1` class `(-d_1 d1, d_0 d0)` in block `-(d_0 + d_1)`.
#[derive(Clone, Debug, Serialize)]
pub struct PaperClassCheck {
    pub degree: i64,
    pub multidegree: Vec<i64>,
    pub components: Vec<String>,
    pub phi2_image: Vec<String>,
    pub in_ker_phi2: bool,
    /// No `c` in the truncated `C0` has `phi_1(c)` equal to the class.
    pub image_refuted: bool,
    pub order_bound: u32,
}

impl PaperClassCheck {
    pub fn detected(&self) -> bool {
        self.in_ker_phi2 && self.image_refuted
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulReport {
    pub weights: Vec<u64>,
    pub twist: TwistParameter,
    pub window: Window,
    pub ker_phi1_dim: usize,
    pub homology_dim: usize,
    /// `"window-relative"` when no homology was found, `"certified"`
    /// otherwise.
    pub homology_status: &'static str,
    pub blocks: Vec<DegreeBlock>,
    pub ker_phi1_basis: Vec<Phi1KernelVector>,
    pub witness_vectors: Vec<HomologyWitness>,
    pub paper_class: Option<PaperClassCheck>,
}

/// All `nu` with `sum d_i nu_i = k` and at most `budget` total negative part.
fn multidegrees(weights: &[u64], k: i64, budget: i64) -> Vec<Vec<i64>> {
    fn go(weights: &[u64], i: usize, rest: i64, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let d = weights[i] as i64;
        if i + 1 == weights.len() {
            if rest % d == 0 && (rest / d) >= -budget {
                cur.push(rest / d);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        // the remaining coordinates can absorb at most budget * max(d) of
        // negative degree
        let tail_max = weights[i + 1..].iter().copied().max().unwrap_or(0) as i64;
        let hi = (rest + budget * tail_max).div_euclid(d);
        for v in -budget..=hi {
            let spent = (-v).max(0);
            cur.push(v);
            go(weights, i + 1, rest - v * d, budget - spent, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(weights, 0, k, budget, &mut Vec::new(), &mut out);
    out
}

struct BlockOutcome {
    ker_phi1: Vec<String>,
    homology: Vec<Vec<String>>,
    modular: bool,
}

fn exact_block<F: Field>(w: &WeightSystem, lam: F, nu: &[i64], order_bound: u32) -> BlockOutcome {
    let n = w.len();
    let mut reducer = EulerReducer::new(w, lam);
    let sp = block_spaces(nu, order_bound);
    let mats = matrices(&mut reducer, &sp, n);
    let ker1 = kernel_of_columns(sp.c1.dim, &mats.phi1);
    let ker2 = kernel_of_columns(sp.c2.dim, &mats.phi2);
    let mut span = Span::new(sp.c1.dim);
    for c in &mats.phi1 {
        span.insert(c);
    }
    let mut homology = Vec::new();
    for v in &ker2 {
        if span.insert(v) {
            let v = F::primitive(v);
            homology.push((0..n).map(|i| sp.c1.element(i, &v, n).to_string()).collect());
        }
    }
    BlockOutcome {
        ker_phi1: ker1
            .iter()
            .map(|v| sp.c0.element(0, &F::primitive(v), n).to_string())
            .collect(),
        homology,
        modular: false,
    }
}

fn lambda_mod_p(lam: &TwistParameter) -> Option<Fp> {
    match lam {
        TwistParameter::Rational(q) => {
            let den = Fp::from_bigint(q.denom());
            (!den.is_zero()).then(|| Fp::from_rational(q))
        }
        TwistParameter::Generic => Some(Fp::new(GENERIC_LAMBDA_MOD_P)),
    }
}

fn analyse_block(
    w: &WeightSystem,
    lam: &TwistParameter,
    modular: &mut Option<EulerReducer<Fp>>,
    nu: &[i64],
    order_bound: u32,
) -> (BlockOutcome, [usize; 3]) {
    let sp = block_spaces(nu, order_bound);
    let dims = [sp.c0.dim, sp.c1.dim, sp.c2.dim];
    if let Some(reducer) = modular.as_mut() {
        let mats = matrices(reducer, &sp, w.len());
        let r1 = rank_of_columns(sp.c1.dim, &mats.phi1);
        let r2 = rank_of_columns(sp.c2.dim, &mats.phi2);
        if r1 == sp.c0.dim && r1 + r2 == sp.c1.dim {
            let out = BlockOutcome {
                ker_phi1: Vec::new(),
                homology: Vec::new(),
                modular: true,
            };
            return (out, dims);
        }
    }
    let out = match lam {
        TwistParameter::Rational(q) => exact_block(w, q.clone(), nu, order_bound),
        TwistParameter::Generic => exact_block(w, RatFunc::var(), nu, order_bound),
    };
    (out, dims)
}

fn paper_class_check<F: Field>(w: &WeightSystem, lam: F, order_bound: u32) -> PaperClassCheck {
    let (d0, d1) = (w.weight(0) as i64, w.weight(1) as i64);
    let nu = vec![-1, -1];
    let mut reducer = EulerReducer::new(w, lam);
    let sp = block_spaces(&nu, order_bound);
    let mats = matrices(&mut reducer, &sp, 2);
    let mut class = vec![F::zero(); sp.c1.dim];
    let d1_mono = Monomial::new(&[0, 0], &[0, 1]);
    let d0_mono = Monomial::new(&[0, 0], &[1, 0]);
    class[sp.c1.position(0, &d1_mono)] = F::from_i64(-d1);
    class[sp.c1.position(1, &d0_mono)] = F::from_i64(d0);
    let image: Vec<F> = (0..sp.c2.dim)
        .map(|r| {
            mats.phi2
                .iter()
                .zip(&class)
                .fold(F::zero(), |acc, (col, c)| acc.plus(&col[r].times(c)))
        })
        .collect();
    let in_ker_phi2 = image.iter().all(F::is_zero);
    let image_refuted = solve_columns(sp.c1.dim, &mats.phi1, &class).is_none();
    PaperClassCheck {
        degree: -(d0 + d1),
        multidegree: nu,
        components: (0..2).map(|i| sp.c1.element(i, &class, 2).to_string()).collect(),
        phi2_image: vec![sp.c2.element(0, &image, 2).to_string()],
        in_ker_phi2,
        image_refuted,
        order_bound,
    }
}

/// Truncated `Ker phi_1` and `Ker phi_2 / Im phi_1` for every block whose
/// `C0` degree lies in `[degree_lo - padding, degree_hi]`.
pub fn koszul_homology_window(
    w: &WeightSystem,
    lam: &TwistParameter,
    win: &Window,
) -> Result<KoszulReport, GradedError> {
    if win.padding < w.max_weight() {
        return Err(GradedError::WindowTooSmall {
            padding: win.padding,
            needed: w.max_weight(),
        });
    }
    let b = win.order_bound;
    let mut modular = lambda_mod_p(lam).map(|l| EulerReducer::new(w, l));
    let mut blocks = Vec::new();
    let mut ker_phi1_basis = Vec::new();
    let mut witness_vectors = Vec::new();
    let lo = win.degree_lo - win.padding as i64;
    for k in lo..=win.degree_hi {
        let mut block = DegreeBlock {
            degree: k,
            c0_dim: 0,
            c1_dim: 0,
            c2_dim: 0,
            ker_phi1_dim: 0,
            homology_dim: 0,
            multidegrees: 0,
            modular_certified: 0,
            exact: 0,
        };
        for nu in multidegrees(w.weights(), k, b as i64 + 1) {
            let (out, dims) = analyse_block(w, lam, &mut modular, &nu, b);
            if dims[0] + dims[1] == 0 {
                continue;
            }
            block.multidegrees += 1;
            block.c0_dim += dims[0];
            block.c1_dim += dims[1];
            block.c2_dim += dims[2];
            if out.modular {
                block.modular_certified += 1;
            } else {
                block.exact += 1;
            }
            block.ker_phi1_dim += out.ker_phi1.len();
            block.homology_dim += out.homology.len();
            for e in out.ker_phi1 {
                ker_phi1_basis.push(Phi1KernelVector {
                    degree: k,
                    multidegree: nu.clone(),
                    element: e,
                });
            }
            for c in out.homology {
                witness_vectors.push(HomologyWitness {
                    degree: k,
                    multidegree: nu.clone(),
                    components: c,
                });
            }
        }
        blocks.push(block);
    }
    let class_degree = -((w.weight_sum()) as i64);
    let paper_class = (w.len() == 2 && b >= 1 && lo <= class_degree && class_degree <= win.degree_hi)
        .then(|| match lam {
            TwistParameter::Rational(q) => paper_class_check(w, q.clone(), b),
            TwistParameter::Generic => paper_class_check(w, RatFunc::var(), b),
        });
    let ker_phi1_dim = blocks.iter().map(|b| b.ker_phi1_dim).sum();
    let homology_dim = blocks.iter().map(|b| b.homology_dim).sum();
    Ok(KoszulReport {
        weights: w.weights().to_vec(),
        twist: lam.clone(),
        window: win.clone(),
        ker_phi1_dim,
        homology_dim,
        homology_status: if homology_dim == 0 {
            "window-relative"
        } else {
            "certified"
        },
        blocks,
        ker_phi1_basis,
        witness_vectors,
        paper_class,
    })
}

impl KoszulReport {
    pub fn block(&self, degree: i64) -> Option<&DegreeBlock> {
        self.blocks.iter().find(|b| b.degree == degree)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialises")
    }

    /// Homology dimension per degree, omitting zeros.
    pub fn homology_by_degree(&self) -> BTreeMap<i64, usize> {
        self.blocks
            .iter()
            .filter(|b| b.homology_dim > 0)
            .map(|b| (b.degree, b.homology_dim))
            .collect()
    }
}
