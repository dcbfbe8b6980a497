//! Dense row-echelon linear algebra over a finite field.
//!
//! Vectors are rows. A linear map from an r-dimensional source to a
//! c-dimensional target is an r x c matrix applied as v * M.

use alloc::vec::Vec;

use crate::gf::{GfCtx, GfEl};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<GfEl>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: alloc::vec![GfEl::ZERO; rows * cols] }
    }

    pub fn identity(n: usize, ctx: &GfCtx) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GfEl>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            debug_assert_eq!(row.len(), c);
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> GfEl {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GfEl) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[GfEl] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn mul(&self, other: &Mat, ctx: &GfCtx) -> Mat {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Mat::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = ctx.add(out.get(r, c), ctx.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Apply the map to a row vector: returns v * self.
    pub fn apply(&self, v: &[GfEl], ctx: &GfCtx) -> Vec<GfEl> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = alloc::vec![GfEl::ZERO; self.cols];
        for (r, &x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for c in 0..self.cols {
                out[c] = ctx.add(out[c], ctx.mul(x, self.get(r, c)));
            }
        }
        out
    }

    /// Stack two matrices with equal column counts, top over bottom.
    pub fn stack(top: &Mat, bottom: &Mat) -> Mat {
        debug_assert_eq!(top.cols, bottom.cols);
        let mut data = Vec::with_capacity((top.rows + bottom.rows) * top.cols);
        data.extend_from_slice(&top.data);
        data.extend_from_slice(&bottom.data);
        Mat { rows: top.rows + bottom.rows, cols: top.cols, data }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, ctx: &GfCtx) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let mut pivot = None;
            for r in row..self.rows {
                if !self.get(r, col).is_zero() {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            if p != row {
                for c in 0..self.cols {
                    let a = self.get(row, c);
                    let b = self.get(p, c);
                    self.set(row, c, b);
                    self.set(p, c, a);
                }
            }
            let inv = ctx.inv(self.get(row, col));
            for c in col..self.cols {
                let v = ctx.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col);
                if f.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let v = ctx.sub(self.get(r, c), ctx.mul(f, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, ctx: &GfCtx) -> usize {
        let mut m = self.clone();
        m.rref(ctx).len()
    }

    /// Row-space basis in reduced echelon form (zero rows dropped).
    pub fn row_space(&self, ctx: &GfCtx) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref(ctx);
        let rank = pivots.len();
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        m
    }

    /// Basis of { x : self * x^T = 0 }, returned as rows of length cols().
    pub fn right_kernel(&self, ctx: &GfCtx) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref(ctx);
        let mut is_pivot = alloc::vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = alloc::vec![GfEl::ZERO; self.cols];
            v[free] = ctx.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = ctx.neg(m.get(r, free));
            }
            basis.push(v);
        }
        if basis.is_empty() {
            Mat::zero(0, self.cols)
        } else {
            Mat::from_rows(basis)
        }
    }

    /// Basis of { v : v * self = 0 }, returned as rows of length rows().
    pub fn left_kernel(&self, ctx: &GfCtx) -> Mat {
        self.transpose().right_kernel(ctx)
    }

    /// Solve x * self = target for a row vector x, if consistent.
    pub fn solve_row(&self, target: &[GfEl], ctx: &GfCtx) -> Option<Vec<GfEl>> {
        debug_assert_eq!(target.len(), self.cols);
        // Transpose to a column problem and eliminate on [self^T | target^T].
        let mut aug = Mat::zero(self.cols, self.rows + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(c, r, self.get(r, c));
            }
        }
        for (c, &t) in target.iter().enumerate() {
            aug.set(c, self.rows, t);
        }
        let pivots = aug.rref(ctx);
        if pivots.contains(&self.rows) {
            return None;
        }
        let mut x = alloc::vec![GfEl::ZERO; self.rows];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.rows);
        }
        Some(x)
    }

    /// Is the row vector v inside the row space of self?
    pub fn contains_row(&self, v: &[GfEl], ctx: &GfCtx) -> bool {
        self.solve_row(v, ctx).is_some()
    }
}
