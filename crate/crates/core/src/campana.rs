//! Rank and filtration combinatorics for symmetric powers of logarithmic
//! differential modules with fractional boundary coefficients.
//!
//! Everything here is dimension bookkeeping over an abstract local model:
//! N coordinates, the first r of them carrying rational coefficients in
//! (0, 1], a form degree i, a symmetric power m, and optionally a split
//! M that marks the first M coordinates as the residue-field direction.
//! Index sets are enumerated explicitly; closed-form counts exist for
//! everything and are kept to the test suite as cross-checks.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CampanaError {
    /// Enumeration would exceed the supported size; carries the
    /// stars-and-bars estimate of the index-set size.
    SizeEstimate { estimated: BigInt },
    /// Coefficients must lie in (0, 1].
    BadCoefficient,
    /// More coefficients than coordinates.
    TooManyCoefficients,
    /// The split must satisfy M <= N; filtration queries require one.
    BadSplit,
}

impl fmt::Display for CampanaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CampanaError::SizeEstimate { estimated } => {
                write!(f, "enumeration too large (about {} index functions)", estimated)
            }
            CampanaError::BadCoefficient => write!(f, "coefficients must lie in (0, 1]"),
            CampanaError::TooManyCoefficients => {
                write!(f, "more coefficients than coordinates")
            }
            CampanaError::BadSplit => write!(f, "split must satisfy M <= N"),
        }
    }
}

/// Caps on the enumeration domain.
pub const MAX_N: u32 = 6;
pub const MAX_M: u32 = 8;

/// Local model: N coordinates, coefficients on the first r, form degree
/// i, symmetric power m, optional coordinate split M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampanaLocalModel {
    pub n: u32,
    pub coeffs: Vec<Rat>,
    pub i: u32,
    pub m: u32,
    pub split: Option<u32>,
}

impl CampanaLocalModel {
    pub fn new(
        n: u32,
        coeffs: Vec<Rat>,
        i: u32,
        m: u32,
        split: Option<u32>,
    ) -> Result<Self, CampanaError> {
        if n > MAX_N || m > MAX_M {
            return Err(CampanaError::SizeEstimate {
                estimated: multiset_count(binom_big(n as u64, i as u64), m),
            });
        }
        if coeffs.len() as u32 > n {
            return Err(CampanaError::TooManyCoefficients);
        }
        let zero = crate::exact::rat_int(0);
        let one = crate::exact::rat_int(1);
        if coeffs.iter().any(|c| c <= &zero || c > &one) {
            return Err(CampanaError::BadCoefficient);
        }
        if let Some(msplit) = split {
            if msplit > n {
                return Err(CampanaError::BadSplit);
            }
        }
        Ok(CampanaLocalModel { n, coeffs, i, m, split })
    }
}

/// Exact binomial coefficient.
fn binom_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for t in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// Number of degree-m monomials in `vars` variables (vars given as a
/// BigInt to compose with binomial counts).
fn multiset_count(vars: BigInt, m: u32) -> BigInt {
    if vars.is_zero() {
        return if m == 0 { BigInt::one() } else { BigInt::zero() };
    }
    // C(vars + m - 1, m)
    let mut acc = BigInt::one();
    for t in 0..m {
        acc = acc * (&vars + BigInt::from(m - 1 - t)) / BigInt::from(t + 1);
    }
    acc
}

/// All increasing i-tuples from {1, .., n}, in lexicographic order.
pub fn sigma(i: u32, n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::with_capacity(i as usize);
    fn rec(start: u32, left: u32, n: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            if n - v + 1 < left {
                break;
            }
            cur.push(v);
            rec(v + 1, left - 1, n, cur, out);
            cur.pop();
        }
    }
    if i == 0 {
        out.push(Vec::new());
    } else if i <= n {
        rec(1, i, n, &mut cur, &mut out);
    }
    out
}

/// A monomial of degree m on the index set Sigma_i, stored as counts
/// parallel to [`sigma`]'s output order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexFunction {
    pub counts: Vec<u32>,
}

impl IndexFunction {
    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// A(s) = sum of A(a) over the tuples containing coordinate s.
    pub fn coordinate_mass(&self, sig: &[Vec<u32>], s: u32) -> u32 {
        self.counts
            .iter()
            .zip(sig)
            .filter(|(_, a)| a.contains(&s))
            .map(|(c, _)| *c)
            .sum()
    }
}

fn compositions_rec<F: FnMut(&[u32])>(buf: &mut [u32], idx: usize, rem: u32, f: &mut F) {
    if idx + 1 == buf.len() {
        buf[idx] = rem;
        f(buf);
        return;
    }
    for v in 0..=rem {
        buf[idx] = v;
        compositions_rec(buf, idx + 1, rem - v, f);
    }
}

/// Calls f on every vector of length k with entry sum m.
fn for_each_composition<F: FnMut(&[u32])>(k: usize, m: u32, f: &mut F) {
    if k == 0 {
        if m == 0 {
            f(&[]);
        }
        return;
    }
    let mut buf = alloc::vec![0u32; k];
    compositions_rec(&mut buf, 0, m, f);
}

/// All degree-m index functions on Sigma_i. For i > n the set of tuples
/// is empty, leaving exactly the empty function when m = 0 and nothing
/// otherwise.
pub fn theta(i: u32, m: u32, n: u32) -> Vec<IndexFunction> {
    let k = sigma(i, n).len();
    let mut out = Vec::new();
    for_each_composition(k, m, &mut |counts| {
        out.push(IndexFunction { counts: counts.to_vec() });
    });
    out
}

/// Rank and denominator report for the symmetric power with fractional
/// coefficients. The full per-monomial table is materialized only up to
/// [`TABLE_CAP`] rows; the rank is always exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymCRank {
    pub rank: BigInt,
    /// (index function, floor(c_s * A(s)) for s = 1..r); complete unless
    /// `truncated`.
    pub table: Vec<(IndexFunction, Vec<u64>)>,
    pub truncated: bool,
}

pub const TABLE_CAP: usize = 10_000;

/// Rank of the module: the number of degree-m index functions, each
/// contributing a basis element with denominator exponents
/// floor(c_s * A(s)) in the coordinates carrying coefficients.
pub fn rank_sym_c(model: &CampanaLocalModel) -> Result<SymCRank, CampanaError> {
    let sig = sigma(model.i, model.n);
    let mut rank: u64 = 0;
    let mut table = Vec::new();
    let mut truncated = false;
    for_each_composition(sig.len(), model.m, &mut |counts| {
        rank += 1;
        if table.len() < TABLE_CAP {
            let a = IndexFunction { counts: counts.to_vec() };
            let exps: Vec<u64> = model
                .coeffs
                .iter()
                .enumerate()
                .map(|(idx, c)| {
                    let mass = a.coordinate_mass(&sig, idx as u32 + 1);
                    floor_of_mul(c, mass as u64)
                })
                .collect();
            table.push((a, exps));
        } else {
            truncated = true;
        }
    });
    Ok(SymCRank { rank: BigInt::from(rank), table, truncated })
}

/// floor(c * b) for c a nonnegative rational.
fn floor_of_mul(c: &Rat, b: u64) -> u64 {
    use num_traits::ToPrimitive;
    let num = c.numer() * BigInt::from(b);
    (num / c.denom()).to_u64().expect("floor of c*b fits u64")
}

/// Cardinalities entering the filtration identity at one (p, l) cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationRecord {
    /// |Lambda^{p,l}_{i,m}|
    pub lambda: BigInt,
    /// |Lambda^{p,l+1}_{i,m}|
    pub lambda_next_l: BigInt,
    /// |Lambda^{p+1,0}_{i,l}|
    pub lambda_up: BigInt,
    /// |Delta^{p,l}_{i,m}|
    pub delta: BigInt,
    /// lambda - lambda_next_l == lambda_up * delta
    pub identity_holds: bool,
}

/// t(a) = |a intersect {1..M}| for each tuple in Sigma_i.
fn split_classes(sig: &[Vec<u32>], msplit: u32) -> Vec<u32> {
    sig.iter()
        .map(|a| a.iter().filter(|&&s| s <= msplit).count() as u32)
        .collect()
}

/// Counts index functions of degree `deg` supported on classes >= p with
/// mass at least l on classes >= p + 1, by enumeration.
fn count_lambda(classes: &[u32], deg: u32, p: u32, l: u32) -> BigInt {
    let mut count: u64 = 0;
    for_each_composition(classes.len(), deg, &mut |counts| {
        let mut mass: u32 = 0;
        for (c, t) in counts.iter().zip(classes) {
            if *c > 0 && *t < p {
                return;
            }
            if *t >= p + 1 {
                mass += *c;
            }
        }
        if mass >= l {
            count += 1;
        }
    });
    BigInt::from(count)
}

/// Counts index functions of degree `deg` supported on classes exactly
/// p, by enumeration.
fn count_delta(classes: &[u32], deg: u32, p: u32) -> BigInt {
    let exact: Vec<u32> = classes.iter().copied().filter(|&t| t == p).collect();
    let mut count: u64 = 0;
    for_each_composition(exact.len(), deg, &mut |_| count += 1);
    BigInt::from(count)
}

/// Enumerates the filtration cell (p_level, l): the graded piece of the
/// coefficient-field filtration has dimension |Lambda^{p,l}| -
/// |Lambda^{p,l+1}|, and the quotient identity factors it as
/// |Lambda^{p+1,0}_{i,l}| * |Delta^{p,l}_{i,m}|.
pub fn filtration_dims(
    model: &CampanaLocalModel,
    p_level: u32,
    l: u32,
) -> Result<FiltrationRecord, CampanaError> {
    let msplit = model.split.ok_or(CampanaError::BadSplit)?;
    let sig = sigma(model.i, model.n);
    let classes = split_classes(&sig, msplit);
    let lambda = count_lambda(&classes, model.m, p_level, l);
    let lambda_next_l = if l + 1 > model.m {
        BigInt::zero()
    } else {
        count_lambda(&classes, model.m, p_level, l + 1)
    };
    let lambda_up = count_lambda(&classes, l, p_level + 1, 0);
    let delta = if l > model.m {
        BigInt::zero()
    } else {
        count_delta(&classes, model.m - l, p_level)
    };
    let identity_holds = &lambda - &lambda_next_l == &lambda_up * &delta;
    Ok(FiltrationRecord { lambda, lambda_next_l, lambda_up, delta, identity_holds })
}

/// The two halves of the floor superadditivity bracket:
/// floor(cB) + floor(cC) <= floor(c(B+C)) <= floor(cB) + floor(cC) + 1.
pub fn floor_bracket_check(c: &Rat, b: u64, cc: u64) -> (bool, bool) {
    let fb = floor_of_mul(c, b);
    let fc = floor_of_mul(c, cc);
    let fbc = floor_of_mul(c, b + cc);
    (fb + fc <= fbc, fbc <= fb + fc + 1)
}

/// Degree obstruction for global sections of a line bundle twist on a
/// curve: sections vanish once floor(m * deg(K+D)) - deg(G) < 0.
pub fn curve_vanishing_certificate(deg_k_plus_d: &Rat, m: u64, deg_g: u64) -> bool {
    let scaled = deg_k_plus_d * Rat::from_integer(BigInt::from(m));
    let fl = crate::exact::floor_rat(&scaled);
    fl - BigInt::from(deg_g) < BigInt::zero()
}
