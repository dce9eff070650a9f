//! Five-dimensional tangent vectors in flat space-time.
//!
//! The crate covers the algebra of the five-vector space `V5` (inner product
//! `h` of signature `(+---+)`), the identification of four-vectors with a
//! maximal space of simple bivectors, standard/regular basis construction,
//! the `SO(3,2)` Clifford constituents, the flat-space-time transport rules
//! in orthonormal (O) and self-parallel (P) frames, Poincare transformation
//! laws for five-tensor components, and the stress-energy-angular-momentum
//! five-tensor together with its conservation law.
//!
//! Index convention: five-vector labels run `0, 1, 2, 3, 5`. The label `5`
//! lives in storage slot `4` of every array and matrix (see [`index`]).
//!
//! Matrix convention: a basis change `e'_A = e_B L^B_A` is stored with the
//! upper index as the row, so basis vectors are the columns of a basis
//! matrix and `E' = E * L`.

#![forbid(unsafe_code)]

pub mod bases;
pub mod clifford;
pub mod connection;
mod error;
pub mod format;
pub mod grid;
pub mod index;
pub mod numeric;
pub mod pentaspace;
pub mod poincare;
pub mod sample;
pub mod stress_energy;
pub mod suite;

pub use error::{Error, Result};
pub use index::{eta4, eta5, FIFTH, LABELS};
pub use numeric::Tolerance;

pub use nalgebra::{Matrix4, Matrix5, Vector4, Vector5};

pub use bases::{Basis5, BasisChange, BasisFlags, OrientationTensor, UpmDecomposition};
pub use clifford::{GammaSet, O32Matrix};
pub use connection::{BasisFlag, ConnectionCoeffs, FourConnection, LorentzChart};
pub use grid::{FieldOnGrid, Grid, Scheme};
pub use pentaspace::{Bivector5, DirectionalClass, FiveForm, FiveVector, FourVector, MetricH};
pub use poincare::{CovCoordForm, FiveDRep, ParamTensorR, ParamTensorT, PoincareTransform};
pub use stress_energy::{MTensorField, SigmaField, ThetaField};
pub use suite::{Check, Suite, SuiteConfig, SuiteReport};
