use super::poly::SparsePoly;
use super::scalar::Ring;

/// Dense matrix of sparse polynomials, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix<C: Ring> {
    rows: usize,
    cols: usize,
    entries: Vec<SparsePoly<C>>,
}

impl<C: Ring> PolyMatrix<C> {
    pub fn from_rows(rows: Vec<Vec<SparsePoly<C>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        assert!(rows.iter().all(|v| v.len() == c), "ragged matrix rows");
        PolyMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn zero(rows: usize, cols: usize, nvars: usize, ctx: &C::Ctx) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![SparsePoly::zero(nvars, ctx); rows * cols],
        }
    }

    pub fn identity(n: usize, nvars: usize, ctx: &C::Ctx) -> Self {
        let mut m = Self::zero(n, n, nvars, ctx);
        for i in 0..n {
            m.entries[i * n + i] = SparsePoly::one(nvars, ctx);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &SparsePoly<C> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: SparsePoly<C>) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[SparsePoly<C>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&SparsePoly<C>) -> SparsePoly<D>) -> PolyMatrix<D> {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map<D: Ring, E>(
        &self,
        f: impl Fn(&SparsePoly<C>) -> Result<SparsePoly<D>, E>,
    ) -> Result<PolyMatrix<D>, E> {
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    fn zip(&self, o: &Self, f: impl Fn(&SparsePoly<C>, &SparsePoly<C>) -> SparsePoly<C>) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }

    pub fn scale(&self, p: &SparsePoly<C>) -> Self {
        self.map(|e| e.mul(p))
    }

    pub fn derivative(&self, var: usize) -> Self {
        self.map(|e| e.derivative(var))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let nv = self.entries.first().map(|e| e.nvars()).unwrap_or(0);
        let ctx = self.entries[0].ctx().clone();
        let mut out = Self::zero(self.rows, o.cols, nv, &ctx);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = SparsePoly::zero(nv, &ctx);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = o.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}
