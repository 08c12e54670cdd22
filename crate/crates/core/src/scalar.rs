//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All physics is written against [`Real`], which is implemented for `f32`
//! and `f64`. Complex amplitudes use [`num_complex::Complex`] over the same
//! real type. Dense Hermitian diagonalization is routed through the trait so
//! that generic code never has to name the linear-algebra backend.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Complex amplitude over a [`Real`] scalar.
pub type Cplx<T> = Complex<T>;

/// Real floating-point scalar used throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Machine epsilon as a plain `f64`, for tolerance bookkeeping.
    const EPS_F64: f64;

    /// Full eigen-decomposition of a dense Hermitian matrix given in
    /// row-major order. Eigenvalues come back ascending; eigenvector `j`
    /// occupies `vectors[j * n .. (j + 1) * n]`.
    fn hermitian_eigh(n: usize, row_major: &[Cplx<Self>]) -> (Vec<Self>, Vec<Cplx<Self>>);
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            const EPS_F64: f64 = <$t>::EPSILON as f64;

            fn hermitian_eigh(n: usize, row_major: &[Cplx<Self>]) -> (Vec<Self>, Vec<Cplx<Self>>) {
                assert_eq!(row_major.len(), n * n, "dense matrix has wrong length");
                if n == 0 {
                    return (Vec::new(), Vec::new());
                }
                let m = DMatrix::<nalgebra::Complex<$t>>::from_row_slice(n, n, row_major);
                let eig = m.symmetric_eigen();
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
                let values = order.iter().map(|&j| eig.eigenvalues[j]).collect();
                let mut vectors = Vec::with_capacity(n * n);
                for &j in &order {
                    vectors.extend(eig.eigenvectors.column(j).iter().copied());
                }
                (values, vectors)
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// Lossy literal conversion into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal not representable")
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Cplx<T> {
    Complex::new(re, im)
}

#[inline]
pub fn czero<T: Real>() -> Cplx<T> {
    Complex::new(T::zero(), T::zero())
}

/// `<a|b>` with the conjugate on the left.
pub fn inner<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>]) -> Cplx<T> {
    debug_assert_eq!(a.len(), b.len());
    let mut re = T::zero();
    let mut im = T::zero();
    for (x, y) in a.iter().zip(b) {
        re = re + x.re * y.re + x.im * y.im;
        im = im + x.re * y.im - x.im * y.re;
    }
    Complex::new(re, im)
}

pub fn norm<T: Real>(a: &[Cplx<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// `y += alpha * x`
pub fn axpy<T: Real>(alpha: Cplx<T>, x: &[Cplx<T>], y: &mut [Cplx<T>]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * *xi;
    }
}

pub fn scale<T: Real>(alpha: T, x: &mut [Cplx<T>]) {
    for xi in x.iter_mut() {
        *xi = xi.scale(alpha);
    }
}
