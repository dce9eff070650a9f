//! The five-vector space `V5`, its inner product `h`, bivectors, and the
//! identification of four-vectors with a maximal space of simple bivectors.

use nalgebra::{DMatrix, Matrix5, SymmetricEigen, Vector4, Vector5};

use crate::bases::Basis5;
use crate::index::{eta5, FIFTH};
use crate::numeric::{self, max_norm, Tolerance};
use crate::{Error, Result};

/// Identifier of the basis a set of components refers to. `BasisId(0)` is the
/// fixed reference basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BasisId(pub u32);

impl BasisId {
    pub const REFERENCE: BasisId = BasisId(0);
}

/// Contravariant five-vector components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveVector {
    pub components: Vector5<f64>,
    pub basis: BasisId,
}

impl FiveVector {
    pub fn new(components: Vector5<f64>) -> Self {
        FiveVector { components, basis: BasisId::REFERENCE }
    }

    pub fn in_basis(components: Vector5<f64>, basis: BasisId) -> Self {
        FiveVector { components, basis }
    }

    /// Unit vector `e_A` of the reference basis, addressed by storage slot.
    pub fn unit(slot: usize) -> Self {
        let mut c = Vector5::zeros();
        c[slot] = 1.0;
        FiveVector::new(c)
    }
}

/// Covariant five-vector (1-form) components against a dual basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveForm {
    pub components: Vector5<f64>,
    pub basis: BasisId,
}

impl FiveForm {
    pub fn new(components: Vector5<f64>) -> Self {
        FiveForm { components, basis: BasisId::REFERENCE }
    }

    /// Pairing `w_A v^A`.
    pub fn pair(&self, v: &FiveVector) -> f64 {
        self.components.dot(&v.components)
    }
}

/// Four-vector components against an associated four-basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector {
    pub components: Vector4<f64>,
    pub basis: BasisId,
}

impl FourVector {
    pub fn new(components: Vector4<f64>) -> Self {
        FourVector { components, basis: BasisId::REFERENCE }
    }
}

/// Symmetric nondegenerate inner product on `V5` with two positive and three
/// negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricH {
    h: Matrix5<f64>,
}

impl MetricH {
    pub fn new(h: Matrix5<f64>) -> Result<Self> {
        if h.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("metric"));
        }
        let scale = max_norm(&h);
        if max_norm(&(h - h.transpose())) > 1e-12 * scale.max(1.0) {
            return Err(Error::InvalidMetric("not symmetric"));
        }
        let eig = SymmetricEigen::new(h);
        let cutoff = 1e-12 * scale;
        if eig.eigenvalues.iter().any(|l| l.abs() <= cutoff) {
            return Err(Error::InvalidMetric("degenerate"));
        }
        let positive = eig.eigenvalues.iter().filter(|&&l| l > 0.0).count();
        if positive != 2 {
            return Err(Error::InvalidMetric("signature is not (+---+)"));
        }
        Ok(MetricH { h })
    }

    /// `eta_AB = diag(+1, -1, -1, -1, +1)`.
    pub fn eta() -> Self {
        MetricH { h: eta5() }
    }

    pub fn matrix(&self) -> &Matrix5<f64> {
        &self.h
    }

    pub fn inner(&self, u: &Vector5<f64>, v: &Vector5<f64>) -> f64 {
        u.dot(&(self.h * v))
    }
}

/// Antisymmetric rank-2 contravariant five-tensor `b^{AB}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bivector5 {
    b: Matrix5<f64>,
}

/// Storage-slot pairs `(A, B)` with `A < B`, in row-major order.
pub const PAIRS: [(usize, usize); 10] =
    [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

const TRIPLES: [(usize, usize, usize); 10] = [
    (0, 1, 2),
    (0, 1, 3),
    (0, 1, 4),
    (0, 2, 3),
    (0, 2, 4),
    (0, 3, 4),
    (1, 2, 3),
    (1, 2, 4),
    (1, 3, 4),
    (2, 3, 4),
];

const QUADRUPLES: [(usize, usize, usize, usize); 5] =
    [(0, 1, 2, 3), (0, 1, 2, 4), (0, 1, 3, 4), (0, 2, 3, 4), (1, 2, 3, 4)];

impl Bivector5 {
    pub fn new(b: Matrix5<f64>) -> Result<Self> {
        if b.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("bivector"));
        }
        let asym = max_norm(&(b + b.transpose()));
        if asym > 1e-12 * max_norm(&b).max(1.0) {
            return Err(Error::NotAntisymmetric(asym));
        }
        Ok(Bivector5 { b: (b - b.transpose()) * 0.5 })
    }

    pub fn zero() -> Self {
        Bivector5 { b: Matrix5::zeros() }
    }

    /// Builds from the ten upper-triangle components in [`PAIRS`] order.
    pub fn from_components(c: &[f64; 10]) -> Self {
        let mut b = Matrix5::zeros();
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            b[(i, j)] = c[k];
            b[(j, i)] = -c[k];
        }
        Bivector5 { b }
    }

    pub fn components(&self) -> [f64; 10] {
        PAIRS.map(|(i, j)| self.b[(i, j)])
    }

    pub fn matrix(&self) -> &Matrix5<f64> {
        &self.b
    }

    /// Component `b^{AB}` by storage slot.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.b[(a, b)]
    }

    pub fn scaled(&self, s: f64) -> Self {
        Bivector5 { b: self.b * s }
    }

    /// Components in the basis whose vectors are the columns of `basis`
    /// (both expressed in the same frame as `self`).
    pub fn in_basis(&self, basis_inv: &Matrix5<f64>) -> Matrix5<f64> {
        basis_inv * self.b * basis_inv.transpose()
    }

    /// The five independent components of the 4-form `B ∧ B`, indexed by the
    /// omitted slot order of `(0123), (0125), (0135), (0235), (1235)`.
    pub fn square_four_form(&self) -> [f64; 5] {
        let b = &self.b;
        QUADRUPLES.map(|(p, q, r, s)| {
            2.0 * (b[(p, q)] * b[(r, s)] - b[(p, r)] * b[(q, s)] + b[(p, s)] * b[(q, r)])
        })
    }

    /// Matrix of the linear map `w ↦ B ∧ w` onto the ten trivector components.
    pub fn wedge_vector_map(&self) -> nalgebra::SMatrix<f64, 10, 5> {
        let b = &self.b;
        let mut m = nalgebra::SMatrix::<f64, 10, 5>::zeros();
        for (k, &(p, q, r)) in TRIPLES.iter().enumerate() {
            // T^{pqr} = b^{pq} w^r + b^{qr} w^p + b^{rp} w^q
            m[(k, r)] += b[(p, q)];
            m[(k, p)] += b[(q, r)];
            m[(k, q)] += b[(r, p)];
        }
        m
    }
}

impl std::ops::Add for Bivector5 {
    type Output = Bivector5;
    fn add(self, rhs: Bivector5) -> Bivector5 {
        Bivector5 { b: self.b + rhs.b }
    }
}

impl std::ops::Sub for Bivector5 {
    type Output = Bivector5;
    fn sub(self, rhs: Bivector5) -> Bivector5 {
        Bivector5 { b: self.b - rhs.b }
    }
}

/// `b^{AB} = u^A v^B − u^B v^A`.
pub fn wedge(u: &FiveVector, v: &FiveVector) -> Result<Bivector5> {
    if u.basis != v.basis {
        return Err(Error::BasisMismatch { left: u.basis.0, right: v.basis.0 });
    }
    Ok(wedge_components(&u.components, &v.components))
}

pub(crate) fn wedge_components(u: &Vector5<f64>, v: &Vector5<f64>) -> Bivector5 {
    Bivector5 { b: u * v.transpose() - v * u.transpose() }
}

/// `B ∧ B = 0`, tested relative to `‖B‖²` so the answer is scale invariant.
pub fn is_simple(b: &Bivector5, tol: Tolerance) -> bool {
    let norm = max_norm(b.matrix());
    let worst = b.square_four_form().iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    worst <= tol.rel * norm * norm
}

/// The directional vector shared by a maximal space of simple bivectors.
///
/// Solves `B_i ∧ w = 0` for all inputs at once as the null space of the
/// stacked trivector maps. The result is Euclidean-unit with its first
/// nonzero component positive.
pub fn directional_vector(bivectors: &[Bivector5], tol: Tolerance) -> Result<FiveVector> {
    for (index, b) in bivectors.iter().enumerate() {
        if !is_simple(b, tol) {
            return Err(Error::NotSimple { index });
        }
    }
    let span = DMatrix::from_fn(bivectors.len(), 10, |i, k| bivectors[i].components()[k]);
    let dim = if bivectors.is_empty() { 0 } else { numeric::rank(&span, tol) };
    if dim < 4 {
        return Err(Error::DimensionTooSmall { dim });
    }
    let mut stacked = DMatrix::<f64>::zeros(10 * bivectors.len(), 5);
    for (i, b) in bivectors.iter().enumerate() {
        stacked.view_mut((10 * i, 0), (10, 5)).copy_from(&b.wedge_vector_map());
    }
    let ns = numeric::null_space(&stacked, tol);
    if ns.len() != 1 {
        return Err(Error::NotMaximalSpace { null_dim: ns.len() });
    }
    let mut w = Vector5::from_iterator(ns[0].iter().copied());
    w /= w.norm();
    if let Some(first) = w.iter().find(|x| x.abs() > tol.rel) {
        if *first < 0.0 {
            w = -w;
        }
    }
    Ok(FiveVector::new(w))
}

/// `g(B1, B2) = ½ h_AC h_BD B1^{AB} B2^{CD}`.
///
/// For `B1 = u∧w`, `B2 = v∧w` this equals `h(u,v)h(w,w) − h(u,w)h(v,w)`.
pub fn g_from_h(b1: &Bivector5, b2: &Bivector5, h: &MetricH) -> f64 {
    let hm = h.matrix();
    0.5 * (b1.matrix() * hm * b2.matrix().transpose() * hm).trace()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionalClass {
    Positive,
    Null,
    Negative,
}

/// Sign of `h(w, w)` with a tolerance band around zero.
pub fn classify_directional(w: &FiveVector, h: &MetricH, tol: Tolerance) -> Result<DirectionalClass> {
    let n2 = w.components.norm_squared();
    if n2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    let q = h.inner(&w.components, &w.components);
    let scale = n2 * max_norm(h.matrix());
    Ok(if tol.accepts(q, scale) {
        DirectionalClass::Null
    } else if q > 0.0 {
        DirectionalClass::Positive
    } else {
        DirectionalClass::Negative
    })
}

/// Four-vector `U` with `B = U^μ (e_μ ∧ e_5)` for a standard basis.
pub fn four_from_bivector(b: &Bivector5, basis: &Basis5, tol: Tolerance) -> Result<FourVector> {
    let coords = b.in_basis(basis.inverse());
    let u = Vector4::new(coords[(0, FIFTH)], coords[(1, FIFTH)], coords[(2, FIFTH)], coords[(3, FIFTH)]);
    let residual = max_norm(&coords.fixed_view::<4, 4>(0, 0));
    if !tol.accepts(residual, max_norm(&coords)) {
        return Err(Error::NotInMaximalSpace { residual });
    }
    Ok(FourVector { components: u, basis: basis.id() })
}

/// `U^μ (e_μ ∧ e_5)` in the frame the basis vectors are expressed in.
pub fn bivector_from_four(u: &FourVector, basis: &Basis5) -> Bivector5 {
    let mut c = Matrix5::zeros();
    for mu in 0..4 {
        c[(mu, FIFTH)] = u.components[mu];
        c[(FIFTH, mu)] = -u.components[mu];
    }
    let e = basis.matrix();
    Bivector5 { b: e * c * e.transpose() }
}
