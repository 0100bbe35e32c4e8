//! Banded Gaussian elimination with partial pivoting.

use num_complex::Complex64;

/// Square matrix with `kl` sub- and `ku` super-diagonals, stored with `kl`
/// extra super-diagonals for pivoting fill-in.
#[derive(Debug, Clone)]
pub(crate) struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SingularPivot {
    pub column: usize,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self { n, kl, ku, width, data: vec![Complex64::new(0.0, 0.0); n * width] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku + self.kl);
        i * self.width + (j + self.kl - i)
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "({i}, {j}) outside the band");
        let k = self.idx(i, j);
        self.data[k] = value;
    }

    /// Clear row `i` inside the band.
    pub fn clear_row(&mut self, i: usize) {
        let start = i * self.width;
        self.data[start..start + self.width].fill(Complex64::new(0.0, 0.0));
    }

    /// Solve `A x = b` in place. Pivots with magnitude at or below
    /// `pivot_floor` are reported as singular.
    pub fn solve(mut self, mut rhs: Vec<Complex64>, pivot_floor: f64) -> Result<Vec<Complex64>, SingularPivot> {
        let n = self.n;
        assert_eq!(rhs.len(), n);
        let reach = self.ku + self.kl;
        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let last_col = (k + reach).min(n - 1);
            let (mut piv, mut best) = (k, 0.0);
            for r in k..=last_row {
                let v = self.data[self.idx(r, k)].norm();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best <= pivot_floor {
                return Err(SingularPivot { column: k });
            }
            if piv != k {
                for j in k..=last_col {
                    let a = self.idx(k, j);
                    let b = self.idx(piv, j);
                    self.data.swap(a, b);
                }
                rhs.swap(k, piv);
            }
            let pivot = self.data[self.idx(k, k)];
            for r in k + 1..=last_row {
                let lead = self.data[self.idx(r, k)];
                if lead == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let f = lead / pivot;
                let src = self.idx(k, k);
                let dst = self.idx(r, k);
                let span = last_col - k + 1;
                for t in 1..span {
                    let v = self.data[src + t];
                    self.data[dst + t] -= f * v;
                }
                self.data[dst] = Complex64::new(0.0, 0.0);
                let rk = rhs[k];
                rhs[r] -= f * rk;
            }
        }
        for k in (0..n).rev() {
            let last_col = (k + reach).min(n - 1);
            let mut acc = rhs[k];
            for j in k + 1..=last_col {
                acc -= self.data[self.idx(k, j)] * rhs[j];
            }
            rhs[k] = acc / self.data[self.idx(k, k)];
        }
        Ok(rhs)
    }
}
