use crate::error::Result;
use crate::polyring::Poly;

/// Square matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for k in 0..n {
            m.entries[k * n + k] = Poly::one();
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        PolyMatrix {
            n,
            entries: vec![Poly::zero(); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        PolyMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        self.entries[r * self.n + c] = p;
    }

    /// Drops row `r` and column `c`.
    pub fn minor(&self, r: usize, c: usize) -> PolyMatrix {
        let n = self.n - 1;
        PolyMatrix::from_fn(n, |i, j| {
            let (si, sj) = (i + usize::from(i >= r), j + usize::from(j >= c));
            self.get(si, sj).clone()
        })
    }

    /// Contiguous principal block on rows and columns `from..to`.
    pub fn block(&self, from: usize, to: usize) -> PolyMatrix {
        PolyMatrix::from_fn(to - from, |i, j| self.get(from + i, from + j).clone())
    }

    /// Determinant by fraction-free (Bareiss) elimination. Every division
    /// is exact in the polynomial ring.
    pub fn det_bareiss(&self) -> Poly {
        let n = self.n;
        if n == 0 {
            return Poly::one();
        }
        let mut a = self.entries.clone();
        let mut negate = false;
        let mut prev = Poly::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return Poly::zero();
                };
                for c in 0..n {
                    a.swap(k * n + c, r * n + c);
                }
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let cross = &(&a[i * n + j] * &a[k * n + k]) - &(&a[i * n + k] * &a[k * n + j]);
                    a[i * n + j] = exact(&cross, &prev);
                }
            }
            prev = a[k * n + k].clone();
        }
        let det = a[n * n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    /// Determinant by Laplace expansion along the first row. Exponential in
    /// `n`; used for tiny matrices and as a cross-check.
    pub fn det_cofactor(&self) -> Poly {
        match self.n {
            0 => Poly::one(),
            1 => self.entries[0].clone(),
            2 => &(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0)),
            n => (0..n).fold(Poly::zero(), |acc, c| {
                if self.get(0, c).is_zero() {
                    return acc;
                }
                let term = self.get(0, c) * &self.minor(0, c).det_cofactor();
                if c % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                }
            }),
        }
    }

    pub fn det(&self) -> Poly {
        if self.n <= 3 {
            self.det_cofactor()
        } else {
            self.det_bareiss()
        }
    }

    /// Signed cofactor `(-1)^(r+c) det(minor(r, c))`.
    pub fn cofactor(&self, r: usize, c: usize) -> Poly {
        let d = self.minor(r, c).det();
        if (r + c) % 2 == 0 {
            d
        } else {
            -d
        }
    }

    /// Row `r` of the adjugate, i.e. the cofactors of column `r`.
    pub fn adjugate_row(&self, r: usize) -> Vec<Poly> {
        (0..self.n).map(|c| self.cofactor(c, r)).collect()
    }

    /// Transposed cofactor matrix: `adj(A) A = det(A) I`.
    pub fn adjugate(&self) -> PolyMatrix {
        if self.n == 1 {
            return PolyMatrix::identity(1);
        }
        PolyMatrix::from_fn(self.n, |r, c| self.cofactor(c, r))
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Vec<Poly> {
        (0..self.n)
            .map(|r| {
                (0..self.n).fold(Poly::zero(), |acc, c| &acc + &(self.get(r, c) * &v[c]))
            })
            .collect()
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        PolyMatrix::from_fn(self.n, |r, c| {
            (0..self.n).fold(Poly::zero(), |acc, k| &acc + &(self.get(r, k) * rhs.get(k, c)))
        })
    }

    pub fn rows(&self) -> Vec<Vec<Poly>> {
        self.entries.chunks(self.n.max(1)).map(<[Poly]>::to_vec).collect()
    }
}

fn exact(num: &Poly, den: &Poly) -> Poly {
    let q: Result<Poly> = num.div_exact(den);
    q.expect("Bareiss step divides exactly")
}
