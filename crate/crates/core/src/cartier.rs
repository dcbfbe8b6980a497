//! Graded de Rham complex of a polynomial ring over a finite field,
//! with the Cartier operator and the iterated cycle and boundary
//! spaces it generates.
//!
//! Forms are finite sums of monomial terms x^a dx_I. Both the exterior
//! derivative and the Cartier operator respect the multidegree
//! v = a + 1_I (the derivative preserves it, the Cartier operator
//! divides it by p), so every space in sight splits into blocks indexed
//! by multidegree, each spanned by the masks I with I inside the
//! support of v. All ranks, kernels and images are computed by exact
//! Gaussian elimination on these small blocks; nothing is taken from
//! closed-form dimension counts, which live in the test suite instead.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::gf::{GfCtx, GfEl};
use crate::linalg::Mat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CartierError {
    /// A term exceeds the configured degree window.
    DegreeOverflow { degree: u32, max: u32 },
    /// The Cartier operator was applied to a non-closed form.
    NotClosed,
    /// The requested window is too large to enumerate.
    WindowTooLarge,
}

impl fmt::Display for CartierError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartierError::DegreeOverflow { degree, max } => {
                write!(f, "total degree {} exceeds the window bound {}", degree, max)
            }
            CartierError::NotClosed => write!(f, "form is not closed"),
            CartierError::WindowTooLarge => write!(f, "degree window too large to enumerate"),
        }
    }
}

/// A differential form: a finite sum of terms c * x^a dx_I, keyed by
/// (I as a bit mask, a as an exponent vector). Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Form {
    terms: BTreeMap<(u32, Vec<u16>), GfEl>,
}

impl Form {
    pub fn zero() -> Form {
        Form::default()
    }

    pub fn term(mask: u32, exps: Vec<u16>, c: GfEl) -> Form {
        let mut f = Form::zero();
        if !c.is_zero() {
            f.terms.insert((mask, exps), c);
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, Vec<u16>), &GfEl)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mask: u32, exps: &[u16]) -> GfEl {
        self.terms
            .get(&(mask, exps.to_vec()))
            .copied()
            .unwrap_or(GfEl::ZERO)
    }

    pub fn add_term(&mut self, mask: u32, exps: Vec<u16>, c: GfEl, ctx: &GfCtx) {
        if c.is_zero() {
            return;
        }
        let key = (mask, exps);
        let cur = self.terms.get(&key).copied().unwrap_or(GfEl::ZERO);
        let next = ctx.add(cur, c);
        if next.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, next);
        }
    }

    pub fn add(&self, other: &Form, ctx: &GfCtx) -> Form {
        let mut out = self.clone();
        for ((mask, exps), c) in &other.terms {
            out.add_term(*mask, exps.clone(), *c, ctx);
        }
        out
    }

    pub fn scale(&self, c: GfEl, ctx: &GfCtx) -> Form {
        let mut out = Form::zero();
        for ((mask, exps), t) in &self.terms {
            out.add_term(*mask, exps.clone(), ctx.mul(c, *t), ctx);
        }
        out
    }

    /// Exterior product, with the sign from sorting the wedge factors.
    pub fn wedge(&self, other: &Form, ctx: &GfCtx) -> Form {
        let mut out = Form::zero();
        for ((m1, e1), c1) in &self.terms {
            for ((m2, e2), c2) in &other.terms {
                if m1 & m2 != 0 {
                    continue;
                }
                let mut inversions = 0u32;
                for j in 0..32 {
                    if m2 >> j & 1 == 1 {
                        inversions += (m1 >> (j + 1)).count_ones();
                    }
                }
                let mut c = ctx.mul(*c1, *c2);
                if inversions % 2 == 1 {
                    c = ctx.neg(c);
                }
                let exps: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(m1 | m2, exps, c, ctx);
            }
        }
        out
    }
}

/// One multidegree block of a subspace: the ambient block basis is the
/// list of masks, and `rows` is a row-reduced coefficient matrix over
/// that basis.
#[derive(Debug, Clone)]
pub struct SubspaceBlock {
    pub multidegree: Vec<u16>,
    pub masks: Vec<u32>,
    pub rows: Vec<Vec<GfEl>>,
}

/// A subspace of the degree-m slice of i-forms, stored blockwise by
/// multidegree. Blocks with zero rows are omitted.
#[derive(Debug, Clone)]
pub struct FormSubspace {
    pub i: u32,
    pub m: u32,
    pub blocks: Vec<SubspaceBlock>,
}

impl FormSubspace {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.rows.len()).sum()
    }

    pub fn basis_forms(&self) -> Vec<Form> {
        let mut out = Vec::new();
        for block in &self.blocks {
            for row in &block.rows {
                let mut f = Form::zero();
                for (mask, c) in block.masks.iter().zip(row) {
                    if !c.is_zero() {
                        let exps = exps_of(&block.multidegree, *mask);
                        f.terms.insert((*mask, exps), *c);
                    }
                }
                out.push(f);
            }
        }
        out
    }

    /// Membership test, blockwise.
    pub fn contains(&self, w: &Form, ctx: &GfCtx) -> bool {
        let mut grouped: BTreeMap<Vec<u16>, Vec<(u32, GfEl)>> = BTreeMap::new();
        for ((mask, exps), c) in &w.terms {
            if mask.count_ones() != self.i {
                return false;
            }
            let v = multidegree_of(*mask, exps);
            grouped.entry(v).or_default().push((*mask, *c));
        }
        for (v, terms) in grouped {
            let block = match self.blocks.iter().find(|b| b.multidegree == v) {
                Some(b) => b,
                None => return false,
            };
            let mut coords = alloc::vec![GfEl::ZERO; block.masks.len()];
            for (mask, c) in terms {
                match block.masks.binary_search(&mask) {
                    Ok(idx) => coords[idx] = c,
                    Err(_) => return false,
                }
            }
            if !Mat::from_rows(block.rows.clone()).contains_row(&coords, ctx) {
                return false;
            }
        }
        true
    }
}

fn multidegree_of(mask: u32, exps: &[u16]) -> Vec<u16> {
    exps.iter()
        .enumerate()
        .map(|(j, e)| e + (mask >> j & 1) as u16)
        .collect()
}

fn exps_of(v: &[u16], mask: u32) -> Vec<u16> {
    v.iter()
        .enumerate()
        .map(|(j, x)| x - (mask >> j & 1) as u16)
        .collect()
}

/// Hard caps keeping enumeration finite.
const MAX_VARS: usize = 16;
const MAX_DEGREE_CAP: u32 = 1 << 14;
const MAX_MULTIDEGREES: u128 = 4_000_000;

/// One identity of the exactness report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub label: &'static str,
    pub checked: u64,
    pub failures: u64,
    /// (i, m, n) of the first failing instance.
    pub first_failure: Option<(u32, u32, u32)>,
}

/// Dimension table row for one (i, m) slice; the vectors are indexed by
/// the level n starting at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimRow {
    pub i: u32,
    pub m: u32,
    pub omega: u64,
    pub z: u64,
    pub b: u64,
    pub z_n: Vec<u64>,
    pub b_n: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct SequenceReport {
    pub identities: Vec<IdentityReport>,
    pub dims: Vec<DimRow>,
    pub all_pass: bool,
}

struct Check {
    label: &'static str,
    checked: u64,
    failures: u64,
    first: Option<(u32, u32, u32)>,
}

impl Check {
    fn new(label: &'static str) -> Check {
        Check { label, checked: 0, failures: 0, first: None }
    }

    fn record(&mut self, ok: bool, at: (u32, u32, u32)) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(at);
            }
        }
    }

    fn into_report(self) -> IdentityReport {
        IdentityReport {
            label: self.label,
            checked: self.checked,
            failures: self.failures,
            first_failure: self.first,
        }
    }
}

/// The de Rham complex of F_q[x_1..x_n] truncated at total degree
/// `max_degree`, with deg(x^a dx_I) = |a| + |I|.
pub struct FormEngine {
    ctx: GfCtx,
    n_vars: usize,
    max_degree: u32,
}

impl FormEngine {
    pub fn new(ctx: GfCtx, n_vars: usize, max_degree: u32) -> Result<FormEngine, CartierError> {
        if n_vars == 0 || n_vars > MAX_VARS || max_degree > MAX_DEGREE_CAP {
            return Err(CartierError::WindowTooLarge);
        }
        // Number of multidegrees of size <= max_degree.
        let mut count: u128 = 1;
        for t in 0..n_vars {
            count = count * (max_degree as u128 + 1 + t as u128) / (t as u128 + 1);
            if count > MAX_MULTIDEGREES {
                return Err(CartierError::WindowTooLarge);
            }
        }
        Ok(FormEngine { ctx, n_vars, max_degree })
    }

    pub fn ctx(&self) -> &GfCtx {
        &self.ctx
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    fn check_term(&self, mask: u32, exps: &[u16]) -> Result<u32, CartierError> {
        assert_eq!(exps.len(), self.n_vars, "exponent vector arity mismatch");
        assert_eq!(mask >> self.n_vars, 0, "mask uses variables out of range");
        let m = exps.iter().map(|&e| e as u32).sum::<u32>() + mask.count_ones();
        if m > self.max_degree {
            return Err(CartierError::DegreeOverflow { degree: m, max: self.max_degree });
        }
        Ok(m)
    }

    /// All multidegrees with entry sum m, lexicographically.
    fn compositions(&self, m: u32) -> Vec<Vec<u16>> {
        let mut out = Vec::new();
        let mut buf = alloc::vec![0u16; self.n_vars];
        fn rec(buf: &mut [u16], idx: usize, rem: u32, out: &mut Vec<Vec<u16>>) {
            if idx + 1 == buf.len() {
                buf[idx] = rem as u16;
                out.push(buf.to_vec());
                return;
            }
            for x in 0..=rem {
                buf[idx] = x as u16;
                rec(buf, idx + 1, rem - x, out);
            }
        }
        rec(&mut buf, 0, m, &mut out);
        out
    }

    /// Masks I with |I| = i entirely inside the support of v, ascending.
    fn masks(&self, v: &[u16], i: u32) -> Vec<u32> {
        let mut supp = 0u32;
        for (j, &x) in v.iter().enumerate() {
            if x >= 1 {
                supp |= 1 << j;
            }
        }
        (0..1u32 << self.n_vars)
            .filter(|mask| mask & !supp == 0 && mask.count_ones() == i)
            .collect()
    }

    pub fn omega_dim(&self, i: u32, m: u32) -> u64 {
        self.compositions(m)
            .iter()
            .map(|v| self.masks(v, i).len() as u64)
            .sum()
    }

    /// The monomial basis of the (i, m) slice as forms.
    pub fn omega_basis(&self, i: u32, m: u32) -> Vec<Form> {
        let mut out = Vec::new();
        for v in self.compositions(m) {
            for mask in self.masks(&v, i) {
                out.push(Form::term(mask, exps_of(&v, mask), self.ctx.one()));
            }
        }
        out
    }

    /// d(f dx_I) by the Leibniz rule on monomials; total degree is
    /// preserved.
    pub fn exterior_derivative(&self, w: &Form) -> Result<Form, CartierError> {
        let mut out = Form::zero();
        for ((mask, exps), c) in &w.terms {
            self.check_term(*mask, exps)?;
            for j in 0..self.n_vars {
                if mask >> j & 1 == 1 || exps[j] == 0 {
                    continue;
                }
                let coeff = self.ctx.mul(*c, self.ctx.from_int(exps[j] as i64));
                if coeff.is_zero() {
                    continue;
                }
                let signed = if (mask & ((1 << j) - 1)).count_ones() % 2 == 1 {
                    self.ctx.neg(coeff)
                } else {
                    coeff
                };
                let mut e = exps.clone();
                e[j] -= 1;
                out.add_term(mask | 1 << j, e, signed, &self.ctx);
            }
        }
        Ok(out)
    }

    /// The multiplicative lift f dx_I -> f^p (prod_{j in I} x_j^{p-1}) dx_I,
    /// which multiplies the total degree by p and lands in closed forms.
    pub fn inverse_cartier(&self, w: &Form) -> Result<Form, CartierError> {
        let p = self.ctx.p() as u32;
        let mut out = Form::zero();
        for ((mask, exps), c) in &w.terms {
            let m = self.check_term(*mask, exps)?;
            if p * m > self.max_degree {
                return Err(CartierError::DegreeOverflow {
                    degree: p * m,
                    max: self.max_degree,
                });
            }
            let e: Vec<u16> = exps
                .iter()
                .enumerate()
                .map(|(j, &a)| (p * a as u32 + (p - 1) * (mask >> j & 1)) as u16)
                .collect();
            out.add_term(*mask, e, self.ctx.frobenius(*c), &self.ctx);
        }
        Ok(out)
    }

    /// Block matrix of d on multidegree v from i-forms to (i+1)-forms,
    /// acting on coefficient row vectors.
    fn d_block(&self, v: &[u16], i: u32) -> Mat {
        let src = self.masks(v, i);
        let dst = self.masks(v, i + 1);
        let mut mat = Mat::zero(src.len(), dst.len());
        for (r, &mask) in src.iter().enumerate() {
            for j in 0..self.n_vars {
                if mask >> j & 1 == 1 || v[j] == 0 {
                    continue;
                }
                let coeff = self.ctx.from_int(v[j] as i64);
                if coeff.is_zero() {
                    continue;
                }
                let signed = if (mask & ((1 << j) - 1)).count_ones() % 2 == 1 {
                    self.ctx.neg(coeff)
                } else {
                    coeff
                };
                let col = dst.binary_search(&(mask | 1 << j)).unwrap();
                mat.set(r, col, self.ctx.add(mat.get(r, col), signed));
            }
        }
        mat
    }

    fn z_block(&self, v: &[u16], i: u32) -> Mat {
        self.d_block(v, i).left_kernel(&self.ctx)
    }

    fn b_block(&self, v: &[u16], i: u32) -> Mat {
        if i == 0 {
            return Mat::zero(0, self.masks(v, 0).len());
        }
        self.d_block(v, i - 1).row_space(&self.ctx)
    }

    fn divisible(&self, v: &[u16]) -> bool {
        let p = self.ctx.p() as u16;
        v.iter().all(|&x| x % p == 0)
    }

    /// Images under the Cartier operator of the given block basis rows,
    /// in coordinates over the masks of multidegree v/p. Zero-width when
    /// p does not divide v.
    fn cartier_rows(&self, v: &[u16], i: u32, basis: &Mat) -> Mat {
        let p = self.ctx.p() as u16;
        let masks_v = self.masks(v, i);
        let (vp, target) = if self.divisible(v) {
            let vp: Vec<u16> = v.iter().map(|&x| x / p).collect();
            let t = self.masks(&vp, i);
            (vp, t)
        } else {
            (Vec::new(), Vec::new())
        };
        let mut out = Mat::zero(basis.rows(), target.len());
        for r in 0..basis.rows() {
            let mut form = Form::zero();
            for (c, &mask) in basis.row(r).iter().zip(&masks_v) {
                if !c.is_zero() {
                    form.terms.insert((mask, exps_of(v, mask)), *c);
                }
            }
            let image = self.cartier(&form).expect("block basis forms are closed");
            for ((mask, exps), c) in &image.terms {
                debug_assert_eq!(multidegree_of(*mask, exps), vp);
                let col = target.binary_search(mask).unwrap();
                out.set(r, col, *c);
            }
        }
        out
    }

    /// Basis rows of { w in the row space of `basis` : C(w) in the row
    /// space of `w_target` }, accounting for the p^{-1}-semilinearity of
    /// the Cartier operator.
    fn pullback(&self, basis: &Mat, images: &Mat, w_target: &Mat) -> Mat {
        if basis.rows() == 0 {
            return basis.clone();
        }
        let stacked = Mat::stack(images, w_target);
        let kernel = stacked.left_kernel(&self.ctx);
        let mut out = Mat::zero(kernel.rows(), basis.cols());
        for r in 0..kernel.rows() {
            for k in 0..basis.rows() {
                let lambda = self.ctx.frobenius(kernel.get(r, k));
                if lambda.is_zero() {
                    continue;
                }
                for c in 0..basis.cols() {
                    let add = self.ctx.mul(lambda, basis.get(k, c));
                    out.set(r, c, self.ctx.add(out.get(r, c), add));
                }
            }
        }
        out.row_space(&self.ctx)
    }

    /// Iterated cycles: level 0 is everything, level 1 the closed
    /// forms, and level n + 1 the closed forms whose Cartier image lies
    /// in level n of multidegree v/p.
    fn zn_block(&self, v: &[u16], i: u32, n: u32) -> Mat {
        if n == 0 {
            return Mat::identity(self.masks(v, i).len(), &self.ctx);
        }
        let z = self.z_block(v, i);
        if n == 1 {
            return z;
        }
        let images = self.cartier_rows(v, i, &z);
        let w = if self.divisible(v) {
            let p = self.ctx.p() as u16;
            let vp: Vec<u16> = v.iter().map(|&x| x / p).collect();
            self.zn_block(&vp, i, n - 1)
        } else {
            Mat::zero(0, 0)
        };
        self.pullback(&z, &images, &w)
    }

    /// Iterated boundaries: level 0 is zero, and level n + 1 the closed
    /// forms whose Cartier image lies in level n of multidegree v/p.
    fn bn_block(&self, v: &[u16], i: u32, n: u32) -> Mat {
        if n == 0 {
            return Mat::zero(0, self.masks(v, i).len());
        }
        let z = self.z_block(v, i);
        let images = self.cartier_rows(v, i, &z);
        let w = if self.divisible(v) {
            let p = self.ctx.p() as u16;
            let vp: Vec<u16> = v.iter().map(|&x| x / p).collect();
            self.bn_block(&vp, i, n - 1)
        } else {
            Mat::zero(0, 0)
        };
        self.pullback(&z, &images, &w)
    }

    fn slice_space<F>(&self, i: u32, m: u32, f: F) -> Result<FormSubspace, CartierError>
    where
        F: Fn(&FormEngine, &[u16], u32) -> Mat,
    {
        if m > self.max_degree {
            return Err(CartierError::DegreeOverflow { degree: m, max: self.max_degree });
        }
        let mut blocks = Vec::new();
        for v in self.compositions(m) {
            let mat = f(self, &v, i);
            if mat.rows() > 0 {
                let rows: Vec<Vec<GfEl>> = (0..mat.rows()).map(|r| mat.row(r).to_vec()).collect();
                blocks.push(SubspaceBlock { masks: self.masks(&v, i), multidegree: v, rows });
            }
        }
        Ok(FormSubspace { i, m, blocks })
    }

    /// Closed i-forms of total degree m (kernel of d).
    pub fn z_space(&self, i: u32, m: u32) -> Result<FormSubspace, CartierError> {
        self.slice_space(i, m, |e, v, i| e.z_block(v, i))
    }

    /// Exact i-forms of total degree m (image of d).
    pub fn b_space(&self, i: u32, m: u32) -> Result<FormSubspace, CartierError> {
        self.slice_space(i, m, |e, v, i| e.b_block(v, i))
    }

    /// Level-n cycles Z_n; level 1 is `z_space`.
    pub fn z_n_space(&self, i: u32, m: u32, n: u32) -> Result<FormSubspace, CartierError> {
        self.slice_space(i, m, |e, v, i| e.zn_block(v, i, n))
    }

    /// Level-n boundaries B_n; level 1 is the kernel of the Cartier
    /// operator on cycles, which must coincide with `b_space`.
    pub fn b_n_space(&self, i: u32, m: u32, n: u32) -> Result<FormSubspace, CartierError> {
        self.slice_space(i, m, |e, v, i| e.bn_block(v, i, n))
    }

    /// The Cartier operator: the inverse of `inverse_cartier` modulo
    /// exact forms, extended by zero to multidegrees not divisible by p.
    /// Closedness of the input is checked; the coefficient solve happens
    /// blockwise against the lift images and the boundary basis, and the
    /// solved scalars receive the inverse Frobenius.
    pub fn cartier(&self, w: &Form) -> Result<Form, CartierError> {
        for ((mask, exps), _) in &w.terms {
            self.check_term(*mask, exps)?;
        }
        if !self.exterior_derivative(w)?.is_zero() {
            return Err(CartierError::NotClosed);
        }
        let p = self.ctx.p() as u16;
        let mut grouped: BTreeMap<(u32, Vec<u16>), Vec<(u32, GfEl)>> = BTreeMap::new();
        for ((mask, exps), c) in &w.terms {
            let v = multidegree_of(*mask, exps);
            grouped.entry((mask.count_ones(), v)).or_default().push((*mask, *c));
        }
        let mut out = Form::zero();
        for ((i, v), terms) in grouped {
            let masks_v = self.masks(&v, i);
            let mut coords = alloc::vec![GfEl::ZERO; masks_v.len()];
            for (mask, c) in terms {
                coords[masks_v.binary_search(&mask).unwrap()] = c;
            }
            let boundaries = self.b_block(&v, i);
            if !self.divisible(&v) {
                assert!(
                    boundaries.contains_row(&coords, &self.ctx),
                    "closed block outside boundaries in non-divisible multidegree"
                );
                continue;
            }
            let vp: Vec<u16> = v.iter().map(|&x| x / p).collect();
            let target = self.masks(&vp, i);
            let mut lift = Mat::zero(target.len(), masks_v.len());
            for (r, &mask) in target.iter().enumerate() {
                let basis = Form::term(mask, exps_of(&vp, mask), self.ctx.one());
                let image = self.inverse_cartier(&basis)?;
                for ((im_mask, im_exps), c) in &image.terms {
                    debug_assert_eq!(multidegree_of(*im_mask, im_exps), v);
                    lift.set(r, masks_v.binary_search(im_mask).unwrap(), *c);
                }
            }
            let stacked = Mat::stack(&lift, &boundaries);
            let sol = stacked
                .solve_row(&coords, &self.ctx)
                .expect("closed block solvable against lift and boundaries");
            for (idx, &mask) in target.iter().enumerate() {
                let c = self.ctx.inv_frobenius(sol[idx]);
                out.add_term(mask, exps_of(&vp, mask), c, &self.ctx);
            }
        }
        Ok(out)
    }

    fn b_dim(&self, i: u32, m: u32) -> u64 {
        self.compositions(m)
            .iter()
            .map(|v| self.b_block(v, i).rows() as u64)
            .sum()
    }

    fn z_dim(&self, i: u32, m: u32) -> u64 {
        self.compositions(m)
            .iter()
            .map(|v| self.z_block(v, i).rows() as u64)
            .sum()
    }

    /// Checks every exactness and filtration identity over the window
    /// i <= i_max, m <= m_max, n <= n_max, returning per-identity
    /// counters and the full dimension table.
    pub fn verify_sequences(
        &self,
        i_max: u32,
        m_max: u32,
        n_max: u32,
    ) -> Result<SequenceReport, CartierError> {
        if m_max > self.max_degree || n_max == 0 {
            return Err(CartierError::DegreeOverflow { degree: m_max, max: self.max_degree });
        }
        let p = self.ctx.p();
        let mut splits = Check::new("omega-splits-as-z-plus-b");
        let mut bijective = Check::new("inverse-cartier-bijective");
        let mut z_step = Check::new("cycle-step-kernel-is-boundaries");
        let mut quotient = Check::new("cycles-split-as-boundaries-plus-quotient");
        let mut b_step = Check::new("boundary-step-kernel-is-boundaries");
        let mut dd = Check::new("d-squared-zero");
        let mut inverts = Check::new("cartier-inverts-lift");
        let mut kills = Check::new("cartier-kills-boundaries");
        let mut level_one = Check::new("level-one-boundaries-match-image");
        let mut stabilizes = Check::new("boundary-filtration-stabilizes");
        let mut dims = Vec::new();
        for i in 0..=i_max {
            for m in 0..=m_max {
                let mut omega = 0u64;
                let mut z_d = 0u64;
                let mut b_d = 0u64;
                let mut zn_d = alloc::vec![0u64; n_max as usize];
                let mut bn_d = alloc::vec![0u64; n_max as usize];
                let mut ker_z = alloc::vec![0u64; n_max as usize];
                let mut ker_b = alloc::vec![0u64; n_max as usize];
                let mut b1_ok = true;
                for v in self.compositions(m) {
                    omega += self.masks(&v, i).len() as u64;
                    let z = self.z_block(&v, i);
                    let b = self.b_block(&v, i);
                    z_d += z.rows() as u64;
                    b_d += b.rows() as u64;
                    for n in 1..=n_max {
                        let zn = self.zn_block(&v, i, n);
                        let bn = self.bn_block(&v, i, n);
                        let rz = self.cartier_rows(&v, i, &zn);
                        let rb = self.cartier_rows(&v, i, &bn);
                        ker_z[n as usize - 1] +=
                            zn.rows() as u64 - rz.rank(&self.ctx) as u64;
                        ker_b[n as usize - 1] +=
                            bn.rows() as u64 - rb.rank(&self.ctx) as u64;
                        if n == 1 {
                            b1_ok &= bn.rows() == b.rows()
                                && (0..bn.rows())
                                    .all(|r| b.contains_row(bn.row(r), &self.ctx))
                                && (0..b.rows())
                                    .all(|r| bn.contains_row(b.row(r), &self.ctx));
                        }
                        zn_d[n as usize - 1] += zn.rows() as u64;
                        bn_d[n as usize - 1] += bn.rows() as u64;
                    }
                }
                splits.record(omega == z_d + self.b_dim(i + 1, m), (i, m, 0));
                if p as u128 * m as u128 <= m_max as u128 {
                    let pm = p as u32 * m;
                    bijective.record(
                        self.z_dim(i, pm) - self.b_dim(i, pm) == omega,
                        (i, m, 0),
                    );
                }
                for n in 1..=n_max {
                    z_step.record(ker_z[n as usize - 1] == b_d, (i, m, n));
                    b_step.record(ker_b[n as usize - 1] == b_d, (i, m, n));
                    let quot = if m as u64 % (p as u64).pow(n) == 0 {
                        self.omega_dim(i, m / (p as u32).pow(n))
                    } else {
                        0
                    };
                    quotient.record(
                        zn_d[n as usize - 1] == bn_d[n as usize - 1] + quot,
                        (i, m, n),
                    );
                    if n < n_max && (p as u64).pow(n) > m as u64 {
                        stabilizes.record(
                            bn_d[n as usize - 1] == bn_d[n as usize],
                            (i, m, n),
                        );
                    }
                }
                level_one.record(b1_ok, (i, m, 1));
                for basis in self.omega_basis(i, m) {
                    let d1 = self.exterior_derivative(&basis)?;
                    dd.record(self.exterior_derivative(&d1)?.is_zero(), (i, m, 0));
                    kills.record(self.cartier(&d1)? == Form::zero(), (i, m, 0));
                    if p as u128 * m as u128 <= m_max as u128 {
                        let lifted = self.inverse_cartier(&basis)?;
                        inverts.record(self.cartier(&lifted)? == basis, (i, m, 0));
                    }
                }
                dims.push(DimRow { i, m, omega, z: z_d, b: b_d, z_n: zn_d, b_n: bn_d });
            }
        }
        let identities: Vec<IdentityReport> = alloc::vec![
            splits, bijective, z_step, quotient, b_step, dd, inverts, kills, level_one,
            stabilizes,
        ]
        .into_iter()
        .map(Check::into_report)
        .collect();
        let all_pass = identities.iter().all(|r| r.failures == 0);
        Ok(SequenceReport { identities, dims, all_pass })
    }
}
