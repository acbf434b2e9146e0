//! Stack-allocated 3×3 complex dyadics.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::Position;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexTensor3 {
    pub m: [[Complex64; 3]; 3],
}

impl ComplexTensor3 {
    pub const ZERO: ComplexTensor3 = ComplexTensor3 { m: [[ZERO; 3]; 3] };

    pub fn identity() -> Self {
        Self::diag([1.0, 1.0, 1.0])
    }

    pub fn diag(d: [f64; 3]) -> Self {
        let mut t = Self::ZERO;
        for (i, v) in d.into_iter().enumerate() {
            t.m[i][i] = Complex64::new(v, 0.0);
        }
        t
    }

    /// u ⊗ v
    pub fn outer(u: Position, v: Position) -> Self {
        let (u, v) = (u.to_array(), v.to_array());
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.m[i][j] = Complex64::new(u[i] * v[j], 0.0);
            }
        }
        t
    }

    /// a·I + b·(e ⊗ e)
    pub fn isotropic_plus_dyad(a: Complex64, b: Complex64, e: Position) -> Self {
        let e = e.to_array();
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.m[i][j] = b * (e[i] * e[j]);
            }
            t.m[i][i] += a;
        }
        t
    }

    pub fn from_real(r: [[f64; 3]; 3]) -> Self {
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.m[i][j] = Complex64::new(r[i][j], 0.0);
            }
        }
        t
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.m[i][j] = self.m[j][i];
            }
        }
        t
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let mut t = *self;
        for row in t.m.iter_mut() {
            for z in row.iter_mut() {
                *z = f(*z);
            }
        }
        t
    }

    /// Frobenius inner product Tr[A · B†].
    pub fn inner(&self, other: &Self) -> Complex64 {
        let mut s = ZERO;
        for i in 0..3 {
            for j in 0..3 {
                s += self.m[i][j] * other.m[i][j].conj();
            }
        }
        s
    }

    /// Σ|a_ij|² = Tr[A · A†].
    pub fn norm_sqr(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_real(&self) -> bool {
        self.m.iter().flatten().all(|z| z.im == 0.0)
    }

    /// R · A · Rᵀ for a real rotation matrix R.
    pub fn rotated(&self, r: &[[f64; 3]; 3]) -> Self {
        let rot = Self::from_real(*r);
        rot * *self * rot.transpose()
    }

    /// ‖A − B‖ / ‖B‖ in the Frobenius norm.
    pub fn relative_distance(&self, reference: &Self) -> f64 {
        (*self - *reference).norm() / reference.norm()
    }

    /// Applies the tensor to a complex vector.
    pub fn apply(&self, v: [Complex64; 3]) -> [Complex64; 3] {
        let mut out = [ZERO; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|j| self.m[i][j] * v[j]).sum();
        }
        out
    }

    pub fn column(&self, j: usize) -> [Complex64; 3] {
        [self.m[0][j], self.m[1][j], self.m[2][j]]
    }
}

impl Add for ComplexTensor3 {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..3 {
            for j in 0..3 {
                self.m[i][j] += rhs.m[i][j];
            }
        }
        self
    }
}

impl Sub for ComplexTensor3 {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..3 {
            for j in 0..3 {
                self.m[i][j] -= rhs.m[i][j];
            }
        }
        self
    }
}

impl Mul for ComplexTensor3 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.m[i][j] = (0..3).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_trace_and_adjoint() {
        let a = ComplexTensor3::diag([1.0, 1.0, -2.0]);
        assert_eq!((a * a).trace(), Complex64::new(6.0, 0.0));
        assert_eq!(a.norm_sqr(), 6.0);

        let mut b = ComplexTensor3::ZERO;
        b.m[0][1] = Complex64::new(1.0, 2.0);
        assert_eq!(b.adjoint().m[1][0], Complex64::new(1.0, -2.0));
        assert_eq!((b * b.adjoint()).trace().re, b.norm_sqr());
        assert_eq!(b.inner(&b).re, b.norm_sqr());
    }

    #[test]
    fn dyad_builder_matches_outer() {
        let e = Position::new(0.6, 0.0, 0.8);
        let t = ComplexTensor3::isotropic_plus_dyad(Complex64::new(1.0, 0.0), Complex64::new(-3.0, 0.0), e);
        let u = ComplexTensor3::identity() - ComplexTensor3::outer(e, e).scale_real(3.0);
        assert!(t.relative_distance(&u) < 1e-15);
        assert!(t.trace().norm() < 1e-15);
    }
}
