//! Seeded random generators for test inputs and verification suites.
//!
//! Every generator draws from a caller-supplied RNG so suites stay
//! reproducible for a fixed seed.

use nalgebra::{DMatrix, Matrix4, Matrix5, Vector4, Vector5};
use rand::Rng;

use crate::bases::BasisChange;
use crate::numeric::condition;
use crate::pentaspace::{Bivector5, FiveVector};
use crate::poincare::PoincareTransform;

pub fn five_vector<R: Rng + ?Sized>(rng: &mut R) -> FiveVector {
    FiveVector::new(Vector5::from_fn(|_, _| rng.random_range(-1.0..1.0)))
}

pub fn vector4<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Vector4<f64> {
    Vector4::from_fn(|_, _| rng.random_range(-scale..scale))
}

pub fn bivector<R: Rng + ?Sized>(rng: &mut R) -> Bivector5 {
    let mut c = [0.0; 10];
    c.iter_mut().for_each(|x| *x = rng.random_range(-1.0..1.0));
    Bivector5::from_components(&c)
}

/// Random 5x5 matrix with condition number below 50.
pub fn invertible5<R: Rng + ?Sized>(rng: &mut R) -> Matrix5<f64> {
    loop {
        let m = Matrix5::from_fn(|_, _| rng.random_range(-1.0..1.0));
        if condition(&DMatrix::from_column_slice(5, 5, m.as_slice())) < 50.0 {
            return m;
        }
    }
}

/// Random 4x4 matrix with condition number below 50.
pub fn invertible4<R: Rng + ?Sized>(rng: &mut R) -> Matrix4<f64> {
    loop {
        let m = Matrix4::from_fn(|_, _| rng.random_range(-1.0..1.0));
        if condition(&DMatrix::from_column_slice(4, 4, m.as_slice())) < 50.0 {
            return m;
        }
    }
}

pub fn antisymmetric4<R: Rng + ?Sized>(rng: &mut R) -> Matrix4<f64> {
    let m = Matrix4::from_fn(|_, _| rng.random_range(-1.0..1.0));
    m - m.transpose()
}

fn plane_rotation4(i: usize, j: usize, angle: f64, hyperbolic: bool) -> Matrix4<f64> {
    let mut r = Matrix4::identity();
    let (c, s) = if hyperbolic { (angle.cosh(), angle.sinh()) } else { (angle.cos(), angle.sin()) };
    r[(i, i)] = c;
    r[(j, j)] = c;
    r[(i, j)] = if hyperbolic { s } else { -s };
    r[(j, i)] = s;
    r
}

fn plane_rotation5(i: usize, j: usize, angle: f64, hyperbolic: bool) -> Matrix5<f64> {
    let mut r = Matrix5::identity();
    let (c, s) = if hyperbolic { (angle.cosh(), angle.sinh()) } else { (angle.cos(), angle.sin()) };
    r[(i, i)] = c;
    r[(j, j)] = c;
    r[(i, j)] = if hyperbolic { s } else { -s };
    r[(j, i)] = s;
    r
}

/// Proper orthochronous Lorentz matrix: three rotations and three boosts
/// with rapidities in `[-1, 1]`.
pub fn lorentz<R: Rng + ?Sized>(rng: &mut R) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        m *= plane_rotation4(i, j, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI), false);
    }
    for j in 1..4 {
        m *= plane_rotation4(0, j, rng.random_range(-1.0..1.0), true);
    }
    m
}

/// Product of elementary `eta`-rotations, one per plane of `so(3,2)`.
pub fn o32<R: Rng + ?Sized>(rng: &mut R) -> Matrix5<f64> {
    let mut m = Matrix5::identity();
    // planes whose axes share the sign of eta rotate elliptically
    for (i, j) in [(0, 4), (1, 2), (1, 3), (2, 3)] {
        m *= plane_rotation5(i, j, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI), false);
    }
    for (i, j) in [(0, 1), (0, 2), (0, 3), (4, 1), (4, 2), (4, 3)] {
        m *= plane_rotation5(i, j, rng.random_range(-1.0..1.0), true);
    }
    m
}

/// Random basis change between standard bases (`L^a_5 = 0`).
pub fn standard_change<R: Rng + ?Sized>(rng: &mut R) -> BasisChange {
    let mut l = Matrix5::zeros();
    l.fixed_view_mut::<4, 4>(0, 0).copy_from(&invertible4(rng));
    for b in 0..4 {
        l[(4, b)] = rng.random_range(-1.0..1.0);
    }
    let a: f64 = rng.random_range(0.5..2.0);
    l[(4, 4)] = if rng.random_bool(0.5) { a } else { -a };
    BasisChange::new(l).expect("well-conditioned by construction")
}

pub fn poincare<R: Rng + ?Sized>(rng: &mut R) -> PoincareTransform {
    PoincareTransform::new(lorentz(rng), vector4(rng, 2.0)).expect("Lorentz by construction")
}
