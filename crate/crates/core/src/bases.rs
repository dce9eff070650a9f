//! Standard, regular and orthonormal five-vector bases, basis changes and
//! their `U·P·M` factorisation, and the constructive basis lemmas.

use nalgebra::{DMatrix, DVector, Matrix4, Matrix5, SymmetricEigen, Vector4, Vector5};

use crate::index::{eta4, eta5, FIFTH};
use crate::numeric::{invert_fixed, max_norm, Tolerance};
use crate::pentaspace::{directional_vector, g_from_h, wedge_components, BasisId, Bivector5, MetricH};
use crate::{Error, Result};

/// Cached classification of a [`Basis5`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BasisFlags {
    pub standard: bool,
    pub regular: bool,
    pub orthonormal: bool,
}

/// Five basis vectors, stored as the columns of an invertible matrix in a
/// fixed reference frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis5 {
    matrix: Matrix5<f64>,
    inverse: Matrix5<f64>,
    id: BasisId,
    flags: BasisFlags,
}

impl Basis5 {
    pub fn new(matrix: Matrix5<f64>) -> Result<Self> {
        let inverse = invert_fixed(&matrix)?;
        Ok(Basis5 { matrix, inverse, id: BasisId::REFERENCE, flags: BasisFlags::default() })
    }

    /// The reference orthonormal basis `e_A`.
    pub fn reference() -> Self {
        Basis5 {
            matrix: Matrix5::identity(),
            inverse: Matrix5::identity(),
            id: BasisId::REFERENCE,
            flags: BasisFlags { standard: true, regular: true, orthonormal: true },
        }
    }

    pub fn with_id(mut self, id: BasisId) -> Self {
        self.id = id;
        self
    }

    /// Recomputes the flags against `h` and the designated directional vector.
    pub fn classified(mut self, h: &MetricH, directional: &Vector5<f64>, tol: Tolerance) -> Self {
        let e5 = self.vector(FIFTH);
        let cross = e5 * directional.transpose() - directional * e5.transpose();
        let standard = max_norm(&cross) <= tol.rel * e5.norm() * directional.norm();
        let gram = self.gram(h);
        self.flags = BasisFlags {
            standard,
            regular: standard && is_regular_gram(&gram, tol),
            orthonormal: standard && max_norm(&(gram - eta5())) <= tol.abs + tol.rel,
        };
        self
    }

    pub fn id(&self) -> BasisId {
        self.id
    }

    pub fn flags(&self) -> BasisFlags {
        self.flags
    }

    pub fn matrix(&self) -> &Matrix5<f64> {
        &self.matrix
    }

    pub fn inverse(&self) -> &Matrix5<f64> {
        &self.inverse
    }

    /// Basis vector by storage slot.
    pub fn vector(&self, slot: usize) -> Vector5<f64> {
        self.matrix.column(slot).into_owned()
    }

    /// `h(e_A, e_B)`.
    pub fn gram(&self, h: &MetricH) -> Matrix5<f64> {
        self.matrix.transpose() * h.matrix() * self.matrix
    }

    /// Associated four-basis `E_μ = e_μ ∧ e_5`.
    pub fn associated(&self) -> [Bivector5; 4] {
        let e5 = self.vector(FIFTH);
        [0, 1, 2, 3].map(|mu| wedge_components(&self.vector(mu), &e5))
    }

    /// `e'_A = e_B L^B_A`.
    pub fn transformed(&self, l: &BasisChange) -> Result<Basis5> {
        Ok(Basis5::new(self.matrix * l.matrix())?.with_id(self.id))
    }

    pub fn negated(&self) -> Basis5 {
        Basis5 { matrix: -self.matrix, inverse: -self.inverse, id: self.id, flags: self.flags }
    }
}

/// Invertible `L^B_A` with `e'_A = e_B L^B_A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisChange {
    l: Matrix5<f64>,
}

impl BasisChange {
    pub fn new(l: Matrix5<f64>) -> Result<Self> {
        invert_fixed(&l)?;
        Ok(BasisChange { l })
    }

    pub fn identity() -> Self {
        BasisChange { l: Matrix5::identity() }
    }

    /// `L^5_5 = a`, `L^a_b = δ/a`.
    pub fn u(a: f64) -> Result<Self> {
        let mut l = Matrix5::identity() / a;
        l[(FIFTH, FIFTH)] = a;
        BasisChange::new(l)
    }

    /// `L^5_b = p_b`, otherwise identity.
    pub fn p(p: &Vector4<f64>) -> Self {
        let mut l = Matrix5::identity();
        for b in 0..4 {
            l[(FIFTH, b)] = p[b];
        }
        BasisChange { l }
    }

    /// `L^a_b = t^a_b`, otherwise identity.
    pub fn m(t: &Matrix4<f64>) -> Result<Self> {
        let mut l = Matrix5::identity();
        l.fixed_view_mut::<4, 4>(0, 0).copy_from(t);
        BasisChange::new(l)
    }

    pub fn matrix(&self) -> &Matrix5<f64> {
        &self.l
    }

    pub fn inverse(&self) -> Matrix5<f64> {
        invert_fixed(&self.l).expect("checked at construction")
    }

    pub fn block(&self) -> Matrix4<f64> {
        self.l.fixed_view::<4, 4>(0, 0).into_owned()
    }

    /// `L^5_b`.
    pub fn fifth_row(&self) -> Vector4<f64> {
        Vector4::from_fn(|b, _| self.l[(FIFTH, b)])
    }

    pub fn compose(&self, then: &BasisChange) -> BasisChange {
        BasisChange { l: self.l * then.l }
    }
}

/// `L^a_5 = 0` for all `a`: the change maps standard bases to standard bases.
pub fn is_standard_change(l: &BasisChange, tol: Tolerance) -> bool {
    let worst = (0..4).fold(0.0_f64, |a, alpha| a.max(l.l[(alpha, FIFTH)].abs()));
    tol.accepts(worst, max_norm(&l.l))
}

fn require_standard(l: &BasisChange, tol: Tolerance) -> Result<()> {
    if is_standard_change(l, tol) {
        Ok(())
    } else {
        Err(Error::NotStandard((0..4).fold(0.0_f64, |a, alpha| a.max(l.l[(alpha, FIFTH)].abs()))))
    }
}

/// Four-basis change `Λ^ν_μ = L^5_5 L^ν_μ` induced on the associated bases.
pub fn induced_lambda(l: &BasisChange, tol: Tolerance) -> Result<Matrix4<f64>> {
    require_standard(l, tol)?;
    Ok(l.block() * l.l[(FIFTH, FIFTH)])
}

/// Factors `L = U(a)·P(p)·M(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpmDecomposition {
    pub a: f64,
    pub p: Vector4<f64>,
    pub t: Matrix4<f64>,
}

impl UpmDecomposition {
    pub fn reassemble(&self) -> Result<BasisChange> {
        Ok(BasisChange::u(self.a)?.compose(&BasisChange::p(&self.p)).compose(&BasisChange::m(&self.t)?))
    }
}

/// `U·P·M = [[t/a, 0], [a pᵀ t, a]]`, so every factor is a closed-form read-off.
pub fn decompose_upm(l: &BasisChange, tol: Tolerance) -> Result<UpmDecomposition> {
    require_standard(l, tol)?;
    let a = l.l[(FIFTH, FIFTH)];
    let t = l.block() * a;
    let t_inv = invert_fixed(&t).map_err(|_| Error::SingularBlock)?;
    let p = t_inv.transpose() * l.fifth_row() / a;
    Ok(UpmDecomposition { a, p, t })
}

fn orthonormality_gap(e: &[Bivector5; 4], h: &MetricH) -> f64 {
    let eta = eta4();
    let mut worst = 0.0_f64;
    for a in 0..4 {
        for b in 0..4 {
            worst = worst.max((g_from_h(&e[a], &e[b], h) - eta[(a, b)]).abs());
        }
    }
    worst
}

/// Orthonormal standard basis with `e_a ∧ e_5 = E_a` for an orthonormal
/// four-basis. The global sign follows the directional-vector sign rule.
pub fn lemma1_construct(e: &[Bivector5; 4], h: &MetricH, tol: Tolerance) -> Result<Basis5> {
    let gap = orthonormality_gap(e, h);
    if gap > tol.abs + tol.rel {
        return Err(Error::NotOrthonormalInput(gap));
    }
    let w = directional_vector(e, tol).map_err(|_| Error::NoCommonDirection)?;
    lemma1_with_direction(e, h, &w.components, tol)
}

/// [`lemma1_construct`] with the directional vector supplied by the caller.
/// Flipping the sign of `w` flips the sign of every output vector.
pub fn lemma1_with_direction(
    e: &[Bivector5; 4],
    h: &MetricH,
    w: &Vector5<f64>,
    tol: Tolerance,
) -> Result<Basis5> {
    // u ↦ u ∧ w as a 10x5 map; its kernel is span(w)
    let mut map = DMatrix::<f64>::zeros(10, 5);
    for (k, &(i, j)) in crate::pentaspace::PAIRS.iter().enumerate() {
        map[(k, i)] += w[j];
        map[(k, j)] -= w[i];
    }
    let svd = map.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let mut primed = Matrix5::zeros();
    primed.set_column(FIFTH, w);
    for (alpha, b) in e.iter().enumerate() {
        let rhs = DVector::from_row_slice(&b.components());
        let u = svd.solve(&rhs, tol.rel * smax).map_err(|_| Error::NoCommonDirection)?;
        let fit = (&map * &u - &rhs).amax();
        if !tol.accepts(fit, rhs.amax()) {
            return Err(Error::NoCommonDirection);
        }
        primed.set_column(alpha, &Vector5::from_iterator(u.iter().copied()));
    }
    let hp = primed.transpose() * h.matrix() * primed;
    let h55 = hp[(FIFTH, FIFTH)];
    if h55 <= 0.0 {
        return Err(Error::NotOrthonormalInput(h55));
    }
    let root = h55.sqrt();
    let mut out = Matrix5::zeros();
    for alpha in 0..4 {
        let col = (primed.column(alpha) - primed.column(FIFTH) * (hp[(alpha, FIFTH)] / h55)) * root;
        out.set_column(alpha, &col);
    }
    out.set_column(FIFTH, &(primed.column(FIFTH) / root));
    Ok(Basis5::new(out)?.classified(h, w, tol))
}

/// Regular standard basis (`h_55 = 1`, `h_a5 = 0`) with `e_a ∧ e_5 = E_a` for
/// an arbitrary four-basis.
pub fn lemma2_construct(e: &[Bivector5; 4], h: &MetricH, tol: Tolerance) -> Result<Basis5> {
    let gram = Matrix4::from_fn(|a, b| g_from_h(&e[a], &e[b], h));
    let eig = SymmetricEigen::new(gram);
    let scale = eig.eigenvalues.amax();
    if eig.eigenvalues.iter().any(|l| l.abs() <= tol.rel * scale) {
        return Err(Error::DegenerateInducedMetric);
    }
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let signs: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i].signum()).collect();
    if signs != [1.0, -1.0, -1.0, -1.0] {
        return Err(Error::DegenerateInducedMetric);
    }
    // Λ^β_α: columns are eigenvectors scaled to unit |g|-norm
    let mut lambda = Matrix4::zeros();
    for (alpha, &i) in order.iter().enumerate() {
        let q = eig.eigenvectors.column(i) / eig.eigenvalues[i].abs().sqrt();
        lambda.set_column(alpha, &q);
    }
    let ortho: [Bivector5; 4] = std::array::from_fn(|alpha| {
        (0..4).fold(Bivector5::zero(), |acc, beta| acc + e[beta].scaled(lambda[(beta, alpha)]))
    });
    let primed = lemma1_construct(&ortho, h, tol)?;
    let lambda_inv = invert_fixed(&lambda).map_err(|_| Error::DegenerateInducedMetric)?;
    let mut out = Matrix5::zeros();
    let first4 = primed.matrix().fixed_view::<5, 4>(0, 0) * lambda_inv;
    out.fixed_view_mut::<5, 4>(0, 0).copy_from(&first4);
    out.set_column(FIFTH, &primed.vector(FIFTH));
    let w = primed.vector(FIFTH);
    Ok(Basis5::new(out)?.classified(h, &w, tol))
}

/// Max `|e_a ∧ e_5 − E_a|` over the four associated bivectors.
pub fn wedge_residual(basis: &Basis5, e: &[Bivector5; 4]) -> f64 {
    basis
        .associated()
        .iter()
        .zip(e)
        .map(|(a, b)| max_norm(&(a.matrix() - b.matrix())))
        .fold(0.0, f64::max)
}

/// Max `|h(e_A, e_B) − η_AB|`.
pub fn orthonormality_residual(basis: &Basis5, h: &MetricH) -> f64 {
    max_norm(&(basis.gram(h) - eta5()))
}

/// Max of `|h_55 − 1|` and `|h_a5|`.
pub fn regularity_residual(basis: &Basis5, h: &MetricH) -> f64 {
    regularity_gap(&basis.gram(h))
}

fn regularity_gap(gram: &Matrix5<f64>) -> f64 {
    (0..4).fold((gram[(FIFTH, FIFTH)] - 1.0).abs(), |a, alpha| a.max(gram[(alpha, FIFTH)].abs()))
}

pub fn is_regular(basis: &Basis5, h: &MetricH, tol: Tolerance) -> bool {
    is_regular_gram(&basis.gram(h), tol)
}

/// Regularity read off an inner-product matrix `h_AB` directly.
pub fn is_regular_gram(gram: &Matrix5<f64>, tol: Tolerance) -> bool {
    regularity_gap(gram) <= tol.abs + tol.rel
}

/// Levi-Civita type symbol on `V5`, fixed by `ε_01235 = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientationTensor {
    sign: i8,
}

impl Default for OrientationTensor {
    fn default() -> Self {
        OrientationTensor { sign: 1 }
    }
}

impl OrientationTensor {
    pub fn new(positive: bool) -> Self {
        OrientationTensor { sign: if positive { 1 } else { -1 } }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// `ε_{ABCDE}` for storage slots; zero on repeated slots.
    pub fn component(&self, slots: [usize; 5]) -> i8 {
        let mut seen = [false; 5];
        for &s in &slots {
            if s >= 5 || std::mem::replace(&mut seen[s], true) {
                return 0;
            }
        }
        let mut inversions = 0;
        for i in 0..5 {
            for j in i + 1..5 {
                if slots[i] > slots[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            self.sign
        } else {
            -self.sign
        }
    }
}

/// `sign(det E) · ε_01235`.
pub fn orientation_sign(basis: &Basis5, eps: &OrientationTensor) -> i8 {
    if basis.matrix().determinant() > 0.0 {
        eps.sign
    } else {
        -eps.sign
    }
}
