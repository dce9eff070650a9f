//! The five-tensor `𝓜^μ_{AB}` combining canonical stress-energy, orbital
//! and spin angular momentum, and its conservation law.

use nalgebra::{Matrix4, Matrix5, Vector4};

use crate::connection::{flat_h, p_from_o, ConnectionCoeffs};
use crate::grid::{BasisFlag, Grid, Scheme};
use crate::index::{eta4, lower, FIFTH};
use crate::numeric::max_norm;
use crate::poincare::{appendix_rep, PoincareTransform};
use crate::{Error, Result};

/// `Θ^μ_α` per sample; row `μ`, column `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaField {
    pub grid: Grid,
    pub values: Vec<Matrix4<f64>>,
}

impl ThetaField {
    pub fn new(grid: Grid, values: Vec<Matrix4<f64>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        if values.iter().any(|m| m.iter().any(|x| !x.is_finite())) {
            return Err(Error::NonFinite("Θ field"));
        }
        Ok(ThetaField { grid, values })
    }

    pub fn from_fn<F: FnMut(&Vector4<f64>) -> Matrix4<f64>>(grid: Grid, mut f: F) -> Self {
        ThetaField { grid, values: (0..grid.len()).map(|s| f(&grid.coords(s))).collect() }
    }

    pub fn constant(grid: Grid, theta: Matrix4<f64>) -> Self {
        ThetaField { grid, values: vec![theta; grid.len()] }
    }
}

/// `Σ^μ_{αβ}` per sample; `values[s][μ]` is antisymmetric in `(α, β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaField {
    pub grid: Grid,
    pub values: Vec<[Matrix4<f64>; 4]>,
}

impl SigmaField {
    pub fn new(grid: Grid, values: Vec<[Matrix4<f64>; 4]>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        for v in &values {
            for m in v {
                let asym = max_norm(&(m + m.transpose()));
                if asym > 1e-12 * max_norm(m).max(1.0) {
                    return Err(Error::NotAntisymmetric(asym));
                }
            }
        }
        Ok(SigmaField { grid, values })
    }

    pub fn zero(grid: Grid) -> Self {
        SigmaField { grid, values: vec![[Matrix4::zeros(); 4]; grid.len()] }
    }
}

/// `𝓜^μ_{AB}` per sample; `values[s][μ]` is antisymmetric in `(A, B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MTensorField {
    pub grid: Grid,
    pub basis: BasisFlag,
    pub kappa: f64,
    pub values: Vec<[Matrix5<f64>; 4]>,
}

impl MTensorField {
    pub fn new(grid: Grid, basis: BasisFlag, kappa: f64, values: Vec<[Matrix5<f64>; 4]>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        let f = MTensorField { grid, basis, kappa, values };
        let asym = f.antisymmetry_residual();
        if asym > 1e-12 * f.max_abs().max(1.0) {
            return Err(Error::NotAntisymmetric(asym));
        }
        Ok(f)
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|v| v.iter())
            .map(|m| max_norm(&(m + m.transpose())))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flat_map(|v| v.iter()).map(max_norm).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &MTensorField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| a.iter().zip(b.iter()))
            .map(|(a, b)| max_norm(&(a - b)))
            .fold(0.0, f64::max)
    }
}

/// P-basis components at the chart point `x`:
/// `𝓜^μ_{αβ} = x_α Θ^μ_β − x_β Θ^μ_α + Σ^μ_{αβ}`, `𝓜^μ_{5α} = −𝓜^μ_{α5} = Θ^μ_α / κ`.
pub fn assemble_sample(theta: &Matrix4<f64>, sigma: &[Matrix4<f64>; 4], x: &Vector4<f64>, kappa: f64) -> [Matrix5<f64>; 4] {
    let xl = lower(x);
    std::array::from_fn(|mu| {
        let mut m = Matrix5::zeros();
        for a in 0..4 {
            for b in 0..4 {
                m[(a, b)] = xl[a] * theta[(mu, b)] - xl[b] * theta[(mu, a)] + sigma[mu][(a, b)];
            }
            m[(FIFTH, a)] = theta[(mu, a)] / kappa;
            m[(a, FIFTH)] = -theta[(mu, a)] / kappa;
        }
        m
    })
}

/// Assembles the P-basis field; grid coordinates are the chart coordinates.
pub fn assemble_m_p(theta: &ThetaField, sigma: &SigmaField, kappa: f64) -> Result<MTensorField> {
    if theta.grid != sigma.grid {
        return Err(Error::GridMismatch);
    }
    if kappa == 0.0 {
        return Err(Error::KappaZero);
    }
    let grid = theta.grid;
    let values = (0..grid.len())
        .map(|s| assemble_sample(&theta.values[s], &sigma.values[s], &grid.coords(s), kappa))
        .collect();
    Ok(MTensorField { grid, basis: BasisFlag::P, kappa, values })
}

fn change_basis(m: &MTensorField, to: BasisFlag) -> MTensorField {
    let values = (0..m.grid.len())
        .map(|s| {
            let n = p_from_o(&m.grid.coords(s), m.kappa);
            // lower five-indices: M_new = Lᵀ M_old L with e_new = e_old L
            let l = if to == BasisFlag::P { *n.matrix() } else { n.inverse() };
            std::array::from_fn(|mu| l.transpose() * m.values[s][mu] * l)
        })
        .collect();
    MTensorField { grid: m.grid, basis: to, kappa: m.kappa, values }
}

/// P-basis to O-basis components.
pub fn to_o_basis(m: &MTensorField) -> MTensorField {
    match m.basis {
        BasisFlag::P => change_basis(m, BasisFlag::O),
        _ => m.clone(),
    }
}

/// O-basis to P-basis components.
pub fn to_p_basis(m: &MTensorField) -> MTensorField {
    match m.basis {
        BasisFlag::P => m.clone(),
        _ => change_basis(m, BasisFlag::P),
    }
}

/// Blockwise transformation of the components under a chart change. Sample
/// positions keep their description; only components change.
///
/// `Θ' = ΛΘΛ⁻¹` and
/// `M'^μ_{αβ} = Λ^μ_ν M^ν_{στ}(Λ⁻¹)^σ_α(Λ⁻¹)^τ_β + a_α Θ'^μ_β − a_β Θ'^μ_α`,
/// with `Θ = κ𝓜_{5·}` and the translation terms absent in the O-basis.
pub fn transform_m(m: &MTensorField, t: &PoincareTransform) -> MTensorField {
    let lam = t.lambda();
    let li = t.lambda_inverse();
    let ka = if m.basis.is_parallel() { t.offset_lower() * m.kappa } else { Vector4::zeros() };
    let values = m
        .values
        .iter()
        .map(|v| {
            let fifth: Matrix4<f64> = Matrix4::from_fn(|mu, a| v[mu][(FIFTH, a)]);
            let fifth_new = lam * fifth * li;
            std::array::from_fn(|mu| {
                let mut orbital = Matrix4::zeros();
                for nu in 0..4 {
                    let block = v[nu].fixed_view::<4, 4>(0, 0).into_owned();
                    orbital += li.transpose() * block * li * lam[(mu, nu)];
                }
                let mut out = Matrix5::zeros();
                for a in 0..4 {
                    for b in 0..4 {
                        out[(a, b)] = orbital[(a, b)] + ka[a] * fifth_new[(mu, b)] - ka[b] * fifth_new[(mu, a)];
                    }
                    out[(FIFTH, a)] = fifth_new[(mu, a)];
                    out[(a, FIFTH)] = -fifth_new[(mu, a)];
                }
                out
            })
        })
        .collect();
    MTensorField { grid: m.grid, basis: m.basis, kappa: m.kappa, values }
}

/// Generic tensor law `𝓜'^μ = Λ^μ_ν Rᵀ 𝓜^ν R` with `R` the appendix
/// representation (P-basis) or `diag(Λ⁻¹, 1)` (O-basis).
pub fn transform_m_tensor_law(m: &MTensorField, t: &PoincareTransform) -> MTensorField {
    let kappa = if m.basis.is_parallel() { m.kappa } else { 0.0 };
    let r = *appendix_rep(t, kappa).matrix();
    let lam = t.lambda();
    let values = m
        .values
        .iter()
        .map(|v| {
            std::array::from_fn(|mu| {
                let mut acc = Matrix5::zeros();
                for nu in 0..4 {
                    acc += r.transpose() * v[nu] * r * lam[(mu, nu)];
                }
                acc
            })
        })
        .collect();
    MTensorField { grid: m.grid, basis: m.basis, kappa: m.kappa, values }
}

/// Interior maxima of the covariant divergence `𝓜^μ_{AB;μ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationReport {
    /// `max |D_{5α}|`: energy-momentum.
    pub energy_momentum: f64,
    /// `max |D_{αβ}|`: angular momentum.
    pub angular_momentum: f64,
    /// `D_AB` per sample.
    pub divergence: Vec<Matrix5<f64>>,
    pub boundary: Vec<bool>,
}

impl ConservationReport {
    pub fn max(&self) -> f64 {
        self.energy_momentum.max(self.angular_momentum)
    }
}

fn connection_for(basis: BasisFlag, kappa: f64) -> ConnectionCoeffs {
    match basis {
        BasisFlag::P => ConnectionCoeffs::zero(),
        BasisFlag::O | BasisFlag::Regular => flat_h(kappa),
    }
}

/// `D_AB = ∂_μ𝓜^μ_AB − G^C_{Aμ}𝓜^μ_CB − G^C_{Bμ}𝓜^μ_AC` with the connection
/// of the field's basis.
pub fn conservation_check(m: &MTensorField, scheme: Scheme) -> Result<ConservationReport> {
    let grid = m.grid;
    grid.check_scheme(scheme)?;
    let g = connection_for(m.basis, m.kappa);
    let mut data = vec![0.0; grid.len() * 25];
    let mut divergence: Vec<Matrix5<f64>> = vec![Matrix5::zeros(); grid.len()];
    for mu in 0..4 {
        for (s, v) in m.values.iter().enumerate() {
            data[s * 25..(s + 1) * 25].copy_from_slice(v[mu].as_slice());
        }
        let d = grid.partial(&data, 25, mu, scheme)?;
        for (s, div) in divergence.iter_mut().enumerate() {
            let mv = &m.values[s][mu];
            *div += Matrix5::from_column_slice(&d[s * 25..(s + 1) * 25]) - g.g[mu].transpose() * mv - mv * g.g[mu];
        }
    }
    let boundary = grid.boundary_mask(scheme);
    let (mut energy_momentum, mut angular_momentum) = (0.0_f64, 0.0_f64);
    for (div, b) in divergence.iter().zip(&boundary) {
        if *b {
            continue;
        }
        for a in 0..4 {
            energy_momentum = energy_momentum.max(div[(FIFTH, a)].abs());
            for c in 0..4 {
                angular_momentum = angular_momentum.max(div[(a, c)].abs());
            }
        }
    }
    Ok(ConservationReport { energy_momentum, angular_momentum, divergence, boundary })
}

/// `max |D_P − Nᵀ D_O N|` over interior samples.
pub fn basis_agreement(p: &ConservationReport, o: &ConservationReport, grid: &Grid, kappa: f64) -> f64 {
    let mut worst = 0.0_f64;
    for s in 0..grid.len() {
        if p.boundary[s] || o.boundary[s] {
            continue;
        }
        let n = *p_from_o(&grid.coords(s), kappa).matrix();
        worst = worst.max(max_norm(&(p.divergence[s] - n.transpose() * o.divergence[s] * n)));
    }
    worst
}

/// Constant dust `Θ^μ_α = ρ u^μ u_α`.
pub fn dust_theta(rho: f64, u: &Vector4<f64>) -> Matrix4<f64> {
    u * lower(u).transpose() * rho
}

/// Free massless scalar plane wave `φ = cos(k_μ x^μ)` with `k` given
/// contravariantly: `Θ^μ_α = ∂^μφ ∂_αφ − ½ δ^μ_α ∂^νφ ∂_νφ`.
pub fn plane_wave_theta(k: &Vector4<f64>, x: &Vector4<f64>) -> Matrix4<f64> {
    let kl = lower(k);
    let phase = kl.dot(x);
    // ∂_αφ = −k_α sin, ∂^μφ = −k^μ sin
    let s = phase.sin();
    let d_lower = -kl * s;
    let d_upper = -k * s;
    let square = d_upper.dot(&d_lower);
    d_upper * d_lower.transpose() - Matrix4::identity() * (0.5 * square)
}

/// Null wave vector `ω(1, cos θ, sin θ, 0)`.
pub fn null_wave_vector(omega: f64, theta: f64) -> Vector4<f64> {
    Vector4::new(omega, omega * theta.cos(), omega * theta.sin(), 0.0)
}

/// `ηΘ − (ηΘ)ᵀ`, the angular-momentum source of a constant `Θ`.
pub fn theta_asymmetry(theta: &Matrix4<f64>) -> Matrix4<f64> {
    let lowered = eta4() * theta;
    lowered - lowered.transpose()
}
