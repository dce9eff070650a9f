//! Five-vector connection coefficients, the flat space-time O- and P-bases,
//! parallel transport and covariant derivatives of sampled fields.

use nalgebra::{Matrix4, Matrix5, Vector4, Vector5};

use crate::bases::BasisChange;
use crate::grid::{FieldOnGrid, Grid, Scheme};
use crate::index::{eta4, eta5, lower, FIFTH};
use crate::numeric::{invert_fixed, max_norm, Tolerance};
use crate::pentaspace::{g_from_h, wedge_components, BasisId, FourVector, MetricH};
use crate::poincare::PoincareTransform;
use crate::{Error, Result};

pub use crate::grid::BasisFlag;

/// `G^A_{Bμ}` with `∇_μ e_A = e_B G^B_{Aμ}`; `g[μ][(A, B)]` is `G^A_{Bμ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionCoeffs {
    pub g: [Matrix5<f64>; 4],
    pub basis: BasisId,
}

impl Default for ConnectionCoeffs {
    fn default() -> Self {
        ConnectionCoeffs::zero()
    }
}

impl ConnectionCoeffs {
    pub fn new(g: [Matrix5<f64>; 4], basis: BasisId) -> Result<Self> {
        if g.iter().any(|m| m.iter().any(|x| !x.is_finite())) {
            return Err(Error::NonFinite("connection coefficients"));
        }
        Ok(ConnectionCoeffs { g, basis })
    }

    pub fn zero() -> Self {
        ConnectionCoeffs { g: [Matrix5::zeros(); 4], basis: BasisId::REFERENCE }
    }

    pub fn get(&self, a: usize, b: usize, mu: usize) -> f64 {
        self.g[mu][(a, b)]
    }

    pub fn set(&mut self, a: usize, b: usize, mu: usize, value: f64) {
        self.g[mu][(a, b)] = value;
    }

    /// Largest `|G^α_{5μ}|`; zero for coefficients of a standard basis.
    pub fn standard_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for g in &self.g {
            for alpha in 0..4 {
                worst = worst.max(g[(alpha, FIFTH)].abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.g.iter().map(max_norm).fold(0.0, f64::max)
    }
}

/// `Γ^α_{βμ}`; `g[μ][(α, β)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourConnection {
    pub g: [Matrix4<f64>; 4],
}

impl FourConnection {
    pub fn zero() -> Self {
        FourConnection { g: [Matrix4::zeros(); 4] }
    }
}

/// Residuals of the two relations tying five- and four-vector transport.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompatibilityReport {
    /// `max |G^α_{5μ}|`.
    pub fifth_column: f64,
    /// `max |Γ^α_{βμ} − G^α_{βμ} − δ^α_β G^5_{5μ}|`.
    pub four_block: f64,
    pub passed: bool,
}

pub fn check_transport_compatibility(
    g: &ConnectionCoeffs,
    gamma: &FourConnection,
    tol: Tolerance,
) -> CompatibilityReport {
    let fifth_column = g.standard_residual();
    let mut four_block = 0.0_f64;
    for mu in 0..4 {
        for alpha in 0..4 {
            for beta in 0..4 {
                let delta = if alpha == beta { g.g[mu][(FIFTH, FIFTH)] } else { 0.0 };
                let r = gamma.g[mu][(alpha, beta)] - g.g[mu][(alpha, beta)] - delta;
                four_block = four_block.max(r.abs());
            }
        }
    }
    let scale = g.max_abs();
    CompatibilityReport {
        fifth_column,
        four_block,
        passed: tol.accepts(fifth_column, scale) && tol.accepts(four_block, scale),
    }
}

/// Flat space-time coefficients in an O-basis: only `G^5_{βμ} = −κη_{βμ}`.
pub fn flat_h(kappa: f64) -> ConnectionCoeffs {
    let eta = eta4();
    let mut c = ConnectionCoeffs::zero();
    for mu in 0..4 {
        for beta in 0..4 {
            c.g[mu][(FIFTH, beta)] = -kappa * eta[(beta, mu)];
        }
    }
    c
}

/// A Lorentz chart `y = Λ x + a` relative to the reference chart `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzChart {
    pub lambda: Matrix4<f64>,
    pub offset: Vector4<f64>,
    pub kappa: f64,
}

impl Default for LorentzChart {
    fn default() -> Self {
        LorentzChart { lambda: Matrix4::identity(), offset: Vector4::zeros(), kappa: 1.0 }
    }
}

impl LorentzChart {
    pub fn new(lambda: Matrix4<f64>, offset: Vector4<f64>, kappa: f64) -> Result<Self> {
        PoincareTransform::new(lambda, offset)?;
        if !kappa.is_finite() {
            return Err(Error::NonFinite("kappa"));
        }
        Ok(LorentzChart { lambda, offset, kappa })
    }

    pub fn reference(kappa: f64) -> Self {
        LorentzChart { kappa, ..LorentzChart::default() }
    }

    pub fn from_transform(t: &PoincareTransform, kappa: f64) -> Self {
        LorentzChart { lambda: *t.lambda(), offset: *t.offset(), kappa }
    }

    pub fn transform(&self) -> PoincareTransform {
        PoincareTransform::new(self.lambda, self.offset).expect("validated at construction")
    }

    /// Chart coordinates of a point given in reference coordinates.
    pub fn coords(&self, x_ref: &Vector4<f64>) -> Vector4<f64> {
        self.lambda * x_ref + self.offset
    }
}

/// `N(x)` with `p_A = e_B N^B_A`: `p_α = e_α + κ x_α e_5`, `p_5 = e_5`.
pub fn p_from_o(x: &Vector4<f64>, kappa: f64) -> BasisChange {
    BasisChange::p(&(lower(x) * kappa))
}

/// `h(p_A, p_B)` at chart point `x`.
pub fn pbasis_metric(x: &Vector4<f64>, kappa: f64) -> Matrix5<f64> {
    let xl = lower(x);
    let mut h = eta5();
    for a in 0..4 {
        for b in 0..4 {
            h[(a, b)] += kappa * kappa * xl[a] * xl[b];
        }
        h[(a, FIFTH)] = kappa * xl[a];
        h[(FIFTH, a)] = kappa * xl[a];
    }
    h
}

/// Parallel transport of five-vector components between two points.
///
/// P-basis components are constant. O-basis (and regular-basis) components
/// are mapped through the P-basis at both ends.
pub fn transport(
    v: &Vector5<f64>,
    from: &Vector4<f64>,
    to: &Vector4<f64>,
    basis: BasisFlag,
    kappa: f64,
) -> Vector5<f64> {
    match basis {
        BasisFlag::P => *v,
        BasisFlag::O | BasisFlag::Regular => {
            let n_from = p_from_o(from, kappa);
            let n_to = p_from_o(to, kappa);
            n_to.matrix() * (n_from.inverse() * v)
        }
    }
}

/// Covariant derivative of a five-vector field. Component `A*4 + μ` of each
/// sample holds `u^A_{;μ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariantDerivative {
    pub field: FieldOnGrid,
    pub boundary: Vec<bool>,
}

impl CovariantDerivative {
    pub fn at(&self, sample: usize, a: usize, mu: usize) -> f64 {
        self.field.data[sample * 20 + a * 4 + mu]
    }

    /// Largest component over samples that are not flagged as boundary.
    pub fn interior_max(&self) -> f64 {
        interior_max(&self.field, &self.boundary)
    }
}

pub(crate) fn interior_max(field: &FieldOnGrid, boundary: &[bool]) -> f64 {
    let mut worst = 0.0_f64;
    for (s, b) in boundary.iter().enumerate() {
        if !b {
            worst = field.sample(s).iter().fold(worst, |a, x| a.max(x.abs()));
        }
    }
    worst
}

/// `u^A_{;μ} = ∂_μ u^A + G^A_{Bμ} u^B` with finite-difference `∂_μ`.
pub fn covariant_derivative(
    field: &FieldOnGrid,
    g: &ConnectionCoeffs,
    scheme: Scheme,
) -> Result<CovariantDerivative> {
    if field.ncomp != 5 {
        return Err(Error::ShapeMismatch { left: (field.ncomp, 1), right: (5, 1) });
    }
    let grad = field.gradient(scheme)?;
    let grid = field.grid;
    let mut data = Vec::with_capacity(grid.len() * 20);
    for s in 0..grid.len() {
        let u = Vector5::from_column_slice(field.sample(s));
        for a in 0..5 {
            for mu in 0..4 {
                let gu = (g.g[mu] * u)[a];
                data.push(grad[mu][s * 5 + a] + gu);
            }
        }
    }
    Ok(CovariantDerivative {
        field: FieldOnGrid { grid, ncomp: 20, basis: field.basis, data },
        boundary: grid.boundary_mask(scheme),
    })
}

/// Connection coefficients sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionField {
    pub grid: Grid,
    pub coeffs: Vec<ConnectionCoeffs>,
    pub boundary: Vec<bool>,
}

impl ConnectionField {
    pub fn uniform(grid: Grid, g: ConnectionCoeffs) -> Self {
        ConnectionField { grid, coeffs: vec![g; grid.len()], boundary: vec![false; grid.len()] }
    }

    /// Largest coefficient over interior samples.
    pub fn interior_max(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(&self.boundary)
            .filter(|(_, b)| !**b)
            .map(|(c, _)| c.max_abs())
            .fold(0.0, f64::max)
    }
}

/// Row-major `5×5` matrices as a 25-component field.
pub fn matrix_field(grid: Grid, basis: BasisFlag, m: &[Matrix5<f64>]) -> Result<FieldOnGrid> {
    if m.len() != grid.len() {
        return Err(Error::GridMismatch);
    }
    let mut data = Vec::with_capacity(m.len() * 25);
    for x in m {
        data.extend(x.transpose().iter());
    }
    FieldOnGrid::new(grid, 25, basis, data)
}

fn matrix_at(data: &[f64], s: usize) -> Matrix5<f64> {
    Matrix5::from_row_slice(&data[s * 25..(s + 1) * 25])
}

/// Coefficients after the frame change `e'_A = e_B L^B_A(x)` and four-basis
/// change `Λ`:
/// `G'_μ = (L⁻¹ G_ν L + L⁻¹ ∂_ν L) Λ^ν_μ`.
///
/// `lambda` holds one matrix for the whole grid or one per sample. The
/// discrepancy between the second- and fourth-order derivative of `L` on
/// interior samples estimates the truncation error; above `fd_tol` the call
/// fails with `GridTooCoarse`.
pub fn connection_transform(
    g: &ConnectionField,
    l: &[Matrix5<f64>],
    lambda: &[Matrix4<f64>],
    scheme: Scheme,
    fd_tol: f64,
) -> Result<ConnectionField> {
    let grid = g.grid;
    if l.len() != grid.len() || g.coeffs.len() != grid.len() {
        return Err(Error::GridMismatch);
    }
    if lambda.len() != 1 && lambda.len() != grid.len() {
        return Err(Error::GridMismatch);
    }
    let lf = matrix_field(grid, BasisFlag::O, l)?;
    let dl = lf.gradient(scheme)?;
    if grid.check_scheme(Scheme::Central4).is_ok() && grid.active_axes().next().is_some() {
        let other = match scheme {
            Scheme::Central2 => Scheme::Central4,
            Scheme::Central4 => Scheme::Central2,
        };
        let dl_other = lf.gradient(other)?;
        let mut estimate = 0.0_f64;
        for s in 0..grid.len() {
            if grid.is_boundary(s, Scheme::Central4) {
                continue;
            }
            for mu in 0..4 {
                for c in 0..25 {
                    let k = s * 25 + c;
                    estimate = estimate.max((dl[mu][k] - dl_other[mu][k]).abs());
                }
            }
        }
        if estimate > fd_tol {
            return Err(Error::GridTooCoarse(format!(
                "derivative truncation estimate {estimate:.3e} exceeds {fd_tol:.3e}"
            )));
        }
    }
    let mut coeffs = Vec::with_capacity(grid.len());
    for s in 0..grid.len() {
        let lm = l[s];
        let linv = invert_fixed(&lm)?;
        let lam = if lambda.len() == 1 { lambda[0] } else { lambda[s] };
        let mut per_nu = [Matrix5::zeros(); 4];
        for (nu, p) in per_nu.iter_mut().enumerate() {
            *p = linv * g.coeffs[s].g[nu] * lm + linv * matrix_at(&dl[nu], s);
        }
        let mut out = [Matrix5::zeros(); 4];
        for (mu, o) in out.iter_mut().enumerate() {
            for nu in 0..4 {
                *o += per_nu[nu] * lam[(nu, mu)];
            }
        }
        coeffs.push(ConnectionCoeffs { g: out, basis: g.coeffs[s].basis });
    }
    Ok(ConnectionField { grid, coeffs, boundary: grid.boundary_mask(scheme) })
}

/// `h_{AB;μ} = ∂_μ h_AB − h_CB G^C_{Aμ} − h_AC G^C_{Bμ}`.
pub fn nabla_h_pointwise(h: &Matrix5<f64>, dh: &[Matrix5<f64>; 4], g: &ConnectionCoeffs) -> [Matrix5<f64>; 4] {
    std::array::from_fn(|mu| dh[mu] - g.g[mu].transpose() * h - h * g.g[mu])
}

/// Residuals of the three component relations for `∇h`, maximised over
/// interior samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NablaHReport {
    /// `|h_{55;μ}|`.
    pub fifth: f64,
    /// `|h_{α5;μ} − κ g_{αμ}|`.
    pub mixed: f64,
    /// `|h_55 h_{αβ;μ} − κ(g_{αμ} h_{β5} + g_{βμ} h_{α5})|`.
    pub four_block: f64,
    pub passed: bool,
}

impl NablaHReport {
    pub fn max(&self) -> f64 {
        self.fifth.max(self.mixed).max(self.four_block)
    }
}

/// Checks the covariant form of `∇h` for a metric field `h` (25 components,
/// row-major) and four-metric field `g` (16 components) in a standard basis.
pub fn nabla_h_check(
    g: &ConnectionCoeffs,
    h_field: &FieldOnGrid,
    kappa: f64,
    g_field: &FieldOnGrid,
    scheme: Scheme,
    tol: Tolerance,
) -> Result<NablaHReport> {
    if h_field.ncomp != 25 || g_field.ncomp != 16 || h_field.grid != g_field.grid {
        return Err(Error::GridMismatch);
    }
    let grid = h_field.grid;
    let dh = h_field.gradient(scheme)?;
    let boundary = grid.boundary_mask(scheme);
    let (mut fifth, mut mixed, mut four_block, mut scale) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for s in 0..grid.len() {
        if boundary[s] {
            continue;
        }
        let h = matrix_at(&h_field.data, s);
        let dhs: [Matrix5<f64>; 4] = std::array::from_fn(|mu| matrix_at(&dh[mu], s));
        let nh = nabla_h_pointwise(&h, &dhs, g);
        let gm = Matrix4::from_row_slice(g_field.sample(s));
        scale = scale.max(max_norm(&h)).max(max_norm(&gm) * kappa.abs());
        for mu in 0..4 {
            fifth = fifth.max(nh[mu][(FIFTH, FIFTH)].abs());
            for a in 0..4 {
                mixed = mixed.max((nh[mu][(a, FIFTH)] - kappa * gm[(a, mu)]).abs());
                for b in 0..4 {
                    let rhs = kappa * (gm[(a, mu)] * h[(b, FIFTH)] + gm[(b, mu)] * h[(a, FIFTH)]);
                    four_block = four_block.max((h[(FIFTH, FIFTH)] * nh[mu][(a, b)] - rhs).abs());
                }
            }
        }
    }
    let passed = [fifth, mixed, four_block].iter().all(|r| tol.accepts(*r, scale));
    Ok(NablaHReport { fifth, mixed, four_block, passed })
}

/// Point data for the abstract `∇h` identity, all in one standard basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eq25Data {
    pub h: Matrix5<f64>,
    pub nabla_h: [Matrix5<f64>; 4],
    pub kappa: f64,
}

/// `|h(e,e)(∇_U h)(v,w) − κ g(U, v∧e) h(w,e) − κ g(U, w∧e) h(v,e)|`, with
/// `U` identified with the bivector `U^μ e_μ∧e_5` of the working basis.
pub fn abstract_eq25_check(
    u4: &FourVector,
    v: &Vector5<f64>,
    w: &Vector5<f64>,
    e: &Vector5<f64>,
    data: &Eq25Data,
    tol: Tolerance,
) -> Result<f64> {
    let metric = MetricH::new(data.h)?;
    let spatial = e.fixed_rows::<4>(0).amax();
    let hee = metric.inner(e, e);
    if e.norm() == 0.0 || !tol.accepts(spatial, e.norm()) || hee <= tol.abs {
        return Err(Error::NotDirectional);
    }
    let mut ub = crate::pentaspace::Bivector5::zero();
    let mut nabla_u = Matrix5::zeros();
    for mu in 0..4 {
        let mut unit = Vector5::zeros();
        unit[mu] = 1.0;
        ub = ub + wedge_components(&unit, &Vector5::from_fn(|a, _| if a == FIFTH { 1.0 } else { 0.0 }))
            .scaled(u4.components[mu]);
        nabla_u += data.nabla_h[mu] * u4.components[mu];
    }
    let lhs = hee * (v.transpose() * nabla_u * w)[0];
    let rhs = data.kappa * g_from_h(&ub, &wedge_components(v, e), &metric) * metric.inner(w, e)
        + data.kappa * g_from_h(&ub, &wedge_components(w, e), &metric) * metric.inner(v, e);
    Ok((lhs - rhs).abs())
}
