//! Dense matrices over a field: row reduction, kernels, linear solves,
//! determinants and characteristic polynomials.

use std::fmt;

use crate::gfq::Poly;
use crate::ring::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    ctx: F::Ctx,
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zero(ctx: &F::Ctx, rows: usize, cols: usize) -> Self {
        Matrix { ctx: ctx.clone(), rows, cols, data: vec![F::zero(ctx); rows * cols] }
    }

    pub fn identity(ctx: &F::Ctx, n: usize) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            m.set(i, i, F::one(ctx));
        }
        m
    }

    pub fn from_rows(ctx: &F::Ctx, rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { ctx: ctx.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_cols(ctx: &F::Ctx, cols: Vec<Vec<F>>) -> Self {
        Self::from_rows(ctx, cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx_ref(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zero(&self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).add(&a.mul(other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(F::zero(&self.ctx), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Matrix { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F) -> Self {
        let data = self.data.iter().map(|a| a.mul(c)).collect();
        Matrix { ctx: self.ctx.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in c..self.cols {
                let v = self.get(r, j).mul(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(i, j).sub(&f.mul(self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(&self.ctx); self.cols];
                v[f] = F::one(&self.ctx);
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = m.get(r, f).neg();
                }
                v
            })
            .collect()
    }

    /// One solution of `A x = b` and the kernel dimension, or `None` when the
    /// system is inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<(Vec<F>, usize)> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zero(&self.ctx, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(&self.ctx); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols).clone();
        }
        Some((x, self.cols - pivots.len()))
    }

    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one(&self.ctx);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return F::zero(&self.ctx);
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = det.neg();
            }
            let pivot = m.get(c, c).clone();
            det = det.mul(&pivot);
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let f = m.get(i, c).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zero(&self.ctx, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one(&self.ctx));
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zero(&self.ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial `det(x I - A)`, via reduction to upper
    /// Hessenberg form.
    pub fn charpoly(&self) -> Poly<F> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let ctx = &self.ctx;
        let mut h = self.clone();
        for c in 0..n.saturating_sub(2) {
            let Some(p) = (c + 1..n).find(|&i| !h.get(i, c).is_zero()) else { continue };
            if p != c + 1 {
                // Similarity by a transposition.
                for j in 0..n {
                    h.data.swap(p * n + j, (c + 1) * n + j);
                }
                for i in 0..n {
                    h.data.swap(i * n + p, i * n + c + 1);
                }
            }
            let inv = h.get(c + 1, c).inv().expect("nonzero pivot");
            for i in c + 2..n {
                let f = h.get(i, c).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                // Row_i -= f Row_{c+1}; Col_{c+1} += f Col_i.
                for j in 0..n {
                    let v = h.get(i, j).sub(&f.mul(h.get(c + 1, j)));
                    h.set(i, j, v);
                }
                for k in 0..n {
                    let v = h.get(k, c + 1).add(&f.mul(h.get(k, i)));
                    h.set(k, c + 1, v);
                }
            }
        }
        // p_k = det(x I - H[0..k, 0..k]).
        let x = Poly::x(ctx);
        let mut p: Vec<Poly<F>> = vec![Poly::one(ctx)];
        for k in 1..=n {
            let mut pk = (&x - &Poly::constant(h.get(k - 1, k - 1).clone())) * p[k - 1].clone();
            let mut prod = F::one(ctx);
            for i in (1..k).rev() {
                prod = prod.mul(h.get(i, i - 1));
                let term = p[i - 1].scale(&prod.mul(h.get(i - 1, k - 1)));
                pk = pk - term;
            }
            p.push(pk);
        }
        p.pop().expect("nonempty")
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<&F>> = (0..self.rows).map(|i| self.row(i).iter().collect()).collect();
        write!(f, "{rows:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::{FieldSpec, FqElem};
    use crate::ring::Ring;

    fn m(f: &'static FieldSpec, rows: &[&[u64]]) -> Matrix<FqElem> {
        Matrix::from_rows(&f, rows.iter().map(|r| r.iter().map(|&x| f.elem(x)).collect()).collect())
    }

    #[test]
    fn charpoly_matches_cayley_hamilton_and_det() {
        let f = FieldSpec::new(5, 1).unwrap();
        let a = m(f, &[&[1, 2, 3, 0], &[4, 0, 1, 2], &[0, 3, 3, 1], &[2, 2, 0, 4]]);
        let cp = a.charpoly();
        assert_eq!(cp.degree(), Some(4));
        // Cayley–Hamilton.
        let mut acc = Matrix::zero(&f, 4, 4);
        let mut pw = Matrix::identity(&f, 4);
        for c in cp.coeffs() {
            acc = acc.add(&pw.scale(c));
            pw = pw.mul(&a);
        }
        assert!(acc.data.iter().all(|x| x.is_zero()));
        // Constant term is det(-A) = det(A) for even n.
        assert_eq!(cp.coeff(0), a.det());
    }

    #[test]
    fn kernel_and_solve() {
        let f = FieldSpec::new(3, 1).unwrap();
        let a = m(f, &[&[1, 2, 0], &[2, 1, 0]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        let (x, dim) = a.solve(&[f.elem(1), f.elem(2)]).unwrap();
        assert_eq!(dim, 2);
        assert_eq!(a.mul_vec(&x), vec![f.elem(1), f.elem(2)]);
        let b = m(f, &[&[1, 1], &[1, 1]]);
        assert!(b.solve(&[f.elem(0), f.elem(1)]).is_none());
        assert!(b.inverse().is_none());
        let c = m(f, &[&[1, 1], &[0, 2]]);
        assert!(c.mul(&c.inverse().unwrap()).is_identity());
    }
}
