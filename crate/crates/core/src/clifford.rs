//! The five `SO(3,2)` Clifford constituents `Γ_A` in a concrete 4x4 complex
//! representation, and the γ-matrices rebuilt from them.

use nalgebra::{Complex, Matrix4, Matrix5};

use crate::index::{eta4, eta5, FIFTH};
use crate::numeric::max_norm;
use crate::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix4 = Matrix4<C64>;

const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
const ONE: C64 = Complex { re: 1.0, im: 0.0 };
const I: C64 = Complex { re: 0.0, im: 1.0 };

/// Five constituents indexed by storage slot (label 5 in slot 4).
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    pub gamma: [CMatrix4; 5],
}

/// Real 5x5 matrix with `Oᵀ η O = η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct O32Matrix {
    o: Matrix5<f64>,
}

impl O32Matrix {
    pub fn new(o: Matrix5<f64>) -> Result<Self> {
        let eta = eta5();
        let residual = max_norm(&(o.transpose() * eta * o - eta));
        if residual > 1e-12 * max_norm(&o).powi(2).max(1.0) {
            return Err(Error::NotO32(residual));
        }
        Ok(O32Matrix { o })
    }

    pub fn matrix(&self) -> &Matrix5<f64> {
        &self.o
    }
}

fn cmax_norm(m: &CMatrix4) -> f64 {
    m.iter().fold(0.0_f64, |a, z| a.max(z.norm()))
}

fn cidentity() -> CMatrix4 {
    CMatrix4::identity()
}

/// Dirac representation, signature `(+---)`.
pub fn dirac_gammas() -> [CMatrix4; 4] {
    let o = ZERO;
    let g0 = CMatrix4::new(ONE, o, o, o, o, ONE, o, o, o, o, -ONE, o, o, o, o, -ONE);
    // [[0, σ_k], [−σ_k, 0]]
    let g1 = CMatrix4::new(o, o, o, ONE, o, o, ONE, o, o, -ONE, o, o, -ONE, o, o, o);
    let g2 = CMatrix4::new(o, o, o, -I, o, o, I, o, o, I, o, o, -I, o, o, o);
    let g3 = CMatrix4::new(o, o, ONE, o, o, o, o, -ONE, -ONE, o, o, o, o, ONE, o, o);
    [g0, g1, g2, g3]
}

/// Chirality matrix `i γ0 γ1 γ2 γ3`.
pub fn chirality() -> CMatrix4 {
    let g = dirac_gammas();
    g[0] * g[1] * g[2] * g[3] * I
}

/// Max over `A, B` of `‖Γ_A Γ_B + Γ_B Γ_A + 2 η_AB I‖` (max-abs entry norm).
pub fn verify_anticommutation(set: &GammaSet) -> f64 {
    let eta = eta5();
    let mut worst = 0.0_f64;
    for a in 0..5 {
        for b in a..5 {
            let (ga, gb) = (&set.gamma[a], &set.gamma[b]);
            let r = ga * gb + gb * ga + cidentity() * C64::new(2.0 * eta[(a, b)], 0.0);
            worst = worst.max(cmax_norm(&r));
        }
    }
    worst
}

fn reconstruct(set: &GammaSet) -> [CMatrix4; 4] {
    let g5 = &set.gamma[FIFTH];
    std::array::from_fn(|mu| {
        let gm = &set.gamma[mu];
        (gm * g5 - g5 * gm) * C64::new(0.0, 0.5)
    })
}

/// Max over `μ, ν` of `‖γ_μ γ_ν + γ_ν γ_μ − 2 η_μν I‖`.
pub fn dirac_residual(gammas: &[CMatrix4; 4]) -> f64 {
    let eta = eta4();
    let mut worst = 0.0_f64;
    for mu in 0..4 {
        for nu in 0..4 {
            let r = gammas[mu] * gammas[nu] + gammas[nu] * gammas[mu]
                - cidentity() * C64::new(2.0 * eta[(mu, nu)], 0.0);
            worst = worst.max(cmax_norm(&r));
        }
    }
    worst
}

/// Constituent set compatible with the Dirac-representation γ-matrices.
///
/// Candidates are `Γ_5 = s·γ5` and `Γ_μ = c·γ_μ Γ_5` with `s, c ∈ {±1, ±i}`;
/// the first pair satisfying both the anticommutation relations and
/// `γ_μ = (i/2)(Γ_μ Γ_5 − Γ_5 Γ_μ)` exactly is returned.
pub fn construct_standard_gammaset() -> GammaSet {
    let phases = [ONE, -ONE, I, -I];
    let gammas = dirac_gammas();
    let chi = chirality();
    for s in phases {
        for c in phases {
            let g5 = chi * s;
            let set = GammaSet {
                gamma: [
                    gammas[0] * g5 * c,
                    gammas[1] * g5 * c,
                    gammas[2] * g5 * c,
                    gammas[3] * g5 * c,
                    g5,
                ],
            };
            if verify_anticommutation(&set) == 0.0 && reconstruct(&set) == gammas {
                return set;
            }
        }
    }
    unreachable!("the phase search always succeeds for the Dirac representation")
}

/// `γ_μ = (i/2)(Γ_μ Γ_5 − Γ_5 Γ_μ)`.
pub fn gamma_from_gamma(set: &GammaSet, tol: f64) -> Result<[CMatrix4; 4]> {
    let r = verify_anticommutation(set);
    if r > tol {
        return Err(Error::InvalidGammaSet(r));
    }
    Ok(reconstruct(set))
}

/// `Γ'_A = O^B_A Γ_B`.
pub fn apply_o32(set: &GammaSet, o: &O32Matrix) -> GammaSet {
    let m = o.matrix();
    GammaSet {
        gamma: std::array::from_fn(|a| {
            (0..5).fold(CMatrix4::zeros(), |acc, b| acc + set.gamma[b] * C64::new(m[(b, a)], 0.0))
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn trace(m: &CMatrix4) -> C64 {
        (0..4).map(|i| m[(i, i)]).sum()
    }

    #[test]
    fn dirac_representation_is_a_clifford_set() {
        assert_eq!(dirac_residual(&dirac_gammas()), 0.0);
        let chi = chirality();
        assert_eq!(chi * chi, cidentity());
    }

    #[test]
    fn standard_set_is_exact() {
        let set = construct_standard_gammaset();
        assert_eq!(verify_anticommutation(&set), 0.0);
        assert_eq!(set.gamma[FIFTH] * set.gamma[FIFTH], -cidentity());
        assert_eq!(set.gamma[0] * set.gamma[0], -cidentity());
        for g in &set.gamma {
            for z in g.iter() {
                let allowed = [ZERO, ONE, -ONE, I, -I];
                assert!(allowed.contains(z));
            }
        }
    }

    #[test]
    fn doubled_constituent_breaks_relations() {
        let mut set = construct_standard_gammaset();
        set.gamma[0] *= C64::new(2.0, 0.0);
        assert_eq!(verify_anticommutation(&set), 6.0);
    }

    #[test]
    fn reconstructed_gammas() {
        let set = construct_standard_gammaset();
        let g = gamma_from_gamma(&set, 1e-12).unwrap();
        assert_eq!(g, dirac_gammas());
        assert!(dirac_residual(&g) <= 1e-12);
        assert_eq!(g[0] * g[0], cidentity());
        assert_eq!(g[1] * g[1], -cidentity());
        let eta = eta4();
        for mu in 0..4 {
            // anticommutation collapses the commutator
            assert_eq!(g[mu], set.gamma[mu] * set.gamma[FIFTH] * I);
            for nu in 0..4 {
                assert_eq!(trace(&(g[mu] * g[nu])), C64::new(4.0 * eta[(mu, nu)], 0.0));
                assert_eq!(trace(&(g[mu] * g[nu] + g[nu] * g[mu])), C64::new(8.0 * eta[(mu, nu)], 0.0));
            }
        }
    }

    #[test]
    fn gamma_from_gamma_rejects_invalid_set() {
        let mut set = construct_standard_gammaset();
        set.gamma[2] *= C64::new(3.0, 0.0);
        assert!(matches!(gamma_from_gamma(&set, 1e-12), Err(Error::InvalidGammaSet(_))));
    }

    #[test]
    fn o32_action() {
        let set = construct_standard_gammaset();
        assert_eq!(apply_o32(&set, &O32Matrix::new(Matrix5::identity()).unwrap()), set);
        let mut refl = Matrix5::identity();
        refl[(FIFTH, FIFTH)] = -1.0;
        let out = apply_o32(&set, &O32Matrix::new(refl).unwrap());
        assert_eq!(out.gamma[FIFTH], -set.gamma[FIFTH]);
        assert_eq!(verify_anticommutation(&out), 0.0);
        assert!(matches!(O32Matrix::new(Matrix5::identity() * 2.0), Err(Error::NotO32(_))));
    }

    #[test]
    fn closure_under_random_o32() {
        let set = construct_standard_gammaset();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let o = O32Matrix::new(sample::o32(&mut rng)).unwrap();
            assert!(verify_anticommutation(&apply_o32(&set, &o)) < 1e-11);
        }
    }

    #[test]
    fn gammas_transform_as_four_vector_under_lorentz_block() {
        let set = construct_standard_gammaset();
        let base = gamma_from_gamma(&set, 1e-12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..50 {
            let lam = sample::lorentz(&mut rng);
            let mut o = Matrix5::identity();
            o.fixed_view_mut::<4, 4>(0, 0).copy_from(&lam);
            let out = gamma_from_gamma(&apply_o32(&set, &O32Matrix::new(o).unwrap()), 1e-11).unwrap();
            for mu in 0..4 {
                let expect = (0..4).fold(CMatrix4::zeros(), |acc, nu| acc + base[nu] * C64::new(lam[(nu, mu)], 0.0));
                assert!(cmax_norm(&(out[mu] - expect)) < 1e-11);
            }
        }
    }
}
