use nalgebra::DMatrix;
pub use num_complex::Complex64 as C64;

pub type Mat = DMatrix<C64>;

pub const DEFAULT_TOL: f64 = 1e-9;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn zeros(r: usize, c: usize) -> Mat {
    Mat::zeros(r, c)
}

pub fn eye(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn inverse(m: &Mat) -> Option<Mat> {
    if m.nrows() != m.ncols() {
        return None;
    }
    if m.nrows() == 0 {
        return Some(m.clone());
    }
    let inv = m.clone().try_inverse()?;
    if inv.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }
    Some(inv)
}

/// Eigenvalues of a square complex matrix via the Schur form.
pub fn eigenvalues(m: &Mat) -> Vec<C64> {
    if m.nrows() == 0 {
        return vec![];
    }
    let schur = nalgebra::Schur::new(m.clone());
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

/// Representative of x modulo 8 in (-4, 4].
pub fn mod8_centered(x: f64) -> f64 {
    let mut y = x.rem_euclid(8.0);
    if y > 4.0 + 1e-12 {
        y -= 8.0;
    }
    y
}
