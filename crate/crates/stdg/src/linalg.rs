//! Banded matrices and a banded LU factorization with partial pivoting.
//!
//! The 1D space-time block systems are banded once the degrees of freedom
//! are ordered by position, so a band solver in LAPACK `gbtrf` style covers
//! every system size this crate produces. Dense factorizations (nalgebra)
//! remain in use for the small moment systems and as cross-check oracles in
//! the tests.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Square banded matrix with `kl` sub- and `ku` super-diagonals.
///
/// Storage is LAPACK band layout with `kl` extra super-diagonals reserved for
/// pivoting fill, so a matrix can be factorized in place.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    /// stored upper bandwidth, `ku + kl`
    kus: usize,
    ldab: usize,
    ab: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let kus = ku + kl;
        let ldab = kl + kus + 1;
        BandMatrix { n, kl, ku, kus, ldab, ab: vec![0.0; ldab * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> Option<usize> {
        let d = i as isize - j as isize;
        if d > self.kl as isize || d < -(self.kus as isize) {
            return None;
        }
        Some(j * self.ldab + (self.kus as isize + d) as usize)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self.offset(i, j) {
            Some(o) => self.ab[o],
            None => 0.0,
        }
    }

    /// Adds `v` to entry `(i, j)`. Panics outside the declared band.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let d = i as isize - j as isize;
        assert!(
            d <= self.kl as isize && d >= -(self.ku as isize),
            "entry ({i}, {j}) outside band (kl={}, ku={})",
            self.kl,
            self.ku
        );
        let o = j * self.ldab + (self.kus as isize + d) as usize;
        self.ab[o] += v;
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let d = i as isize - j as isize;
        assert!(d <= self.kl as isize && d >= -(self.ku as isize));
        let o = j * self.ldab + (self.kus as isize + d) as usize;
        self.ab[o] = v;
    }

    pub fn matvec(&self, x: &DVector<f64>) -> DVector<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = DVector::zeros(self.n);
        for j in 0..self.n {
            let xj = x[j];
            if xj == 0.0 {
                continue;
            }
            let i_lo = j.saturating_sub(self.kus);
            let i_hi = (j + self.kl).min(self.n - 1);
            for i in i_lo..=i_hi {
                y[i] += self.ab[j * self.ldab + (self.kus + i - j)] * xj;
            }
        }
        y
    }

    /// `x^T A y`, used for the energy products in the stability checks.
    pub fn bilinear(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&self.matvec(y))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for j in 0..self.n {
            for i in j.saturating_sub(self.kus)..=(j + self.kl).min(self.n - 1) {
                m[(i, j)] = self.get(i, j);
            }
        }
        m
    }

    pub fn from_dense(m: &DMatrix<f64>, kl: usize, ku: usize) -> Self {
        let n = m.nrows();
        let mut b = BandMatrix::zeros(n, kl, ku);
        for j in 0..n {
            for i in j.saturating_sub(ku)..=(j + kl).min(n - 1) {
                if m[(i, j)] != 0.0 {
                    b.set(i, j, m[(i, j)]);
                }
            }
        }
        b
    }

    /// LU factorization with partial pivoting, consuming the matrix.
    pub fn factorize(mut self) -> Result<BandLu> {
        let n = self.n;
        let kl = self.kl;
        let kus = self.kus;
        let mut ipiv = vec![0usize; n];
        for k in 0..n {
            let km = kl.min(n - 1 - k);
            // pivot search in column k
            let mut jp = 0;
            let mut pmax = 0.0;
            for i in 0..=km {
                let v = self.ab[k * self.ldab + kus + i].abs();
                if v > pmax {
                    pmax = v;
                    jp = i;
                }
            }
            if pmax == 0.0 || !pmax.is_finite() {
                return Err(Error::Singular(format!(
                    "zero pivot in banded LU at column {k} of {n}"
                )));
            }
            ipiv[k] = k + jp;
            let ju = (k + kus).min(n - 1);
            if jp != 0 {
                for j in k..=ju {
                    let oa = self.offset(k, j).unwrap();
                    let ob = self.offset(k + jp, j).unwrap();
                    self.ab.swap(oa, ob);
                }
            }
            let piv = self.ab[k * self.ldab + kus];
            for i in 1..=km {
                self.ab[k * self.ldab + kus + i] /= piv;
            }
            for j in (k + 1)..=ju {
                let akj = self.ab[j * self.ldab + kus + k - j];
                if akj == 0.0 {
                    continue;
                }
                for i in 1..=km {
                    let l = self.ab[k * self.ldab + kus + i];
                    self.ab[j * self.ldab + kus + k + i - j] -= l * akj;
                }
            }
        }
        Ok(BandLu { mat: self, ipiv })
    }
}

/// Factorized banded matrix; solves by forward/backward substitution.
#[derive(Debug, Clone)]
pub struct BandLu {
    mat: BandMatrix,
    ipiv: Vec<usize>,
}

impl BandLu {
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let mut x = b.clone();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_in_place(&self, b: &mut DVector<f64>) {
        let n = self.mat.n;
        let kl = self.mat.kl;
        let kus = self.mat.kus;
        let ldab = self.mat.ldab;
        assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.ipiv[k];
            if p != k {
                b.swap_rows(k, p);
            }
            let bk = b[k];
            if bk != 0.0 {
                let km = kl.min(n - 1 - k);
                for i in 1..=km {
                    b[k + i] -= self.mat.ab[k * ldab + kus + i] * bk;
                }
            }
        }
        for k in (0..n).rev() {
            let j_hi = (k + kus).min(n - 1);
            let mut s = b[k];
            for j in (k + 1)..=j_hi {
                s -= self.mat.ab[j * ldab + kus + k - j] * b[j];
            }
            b[k] = s / self.mat.ab[k * ldab + kus];
        }
    }
}

/// Smallest eigenvalue of the pencil `(A, B)` with `A` symmetric and `B`
/// symmetric positive definite, via a Cholesky reduction of `B`.
pub fn smallest_generalized_eigenvalue(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    let chol = b
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Singular("Gram matrix not positive definite".into()))?;
    let l = chol.l();
    // C = L^{-1} A L^{-T}
    let mut x = a.clone();
    l.solve_lower_triangular_mut(&mut x);
    let mut xt = x.transpose();
    l.solve_lower_triangular_mut(&mut xt);
    let c = (&xt + xt.transpose()) * 0.5;
    let eig = c.symmetric_eigen();
    Ok(eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min))
}
