//! Label/slot conventions shared by every module.

use nalgebra::{Matrix4, Matrix5};

/// Storage slot of the five-vector label `5`.
pub const FIFTH: usize = 4;

/// Five-vector labels in storage order.
pub const LABELS: [u8; 5] = [0, 1, 2, 3, 5];

/// Storage slot of a five-vector label; `None` for anything outside `{0,1,2,3,5}`.
pub fn slot(label: u8) -> Option<usize> {
    match label {
        0..=3 => Some(label as usize),
        5 => Some(FIFTH),
        _ => None,
    }
}

/// Label of a storage slot.
pub fn label(slot: usize) -> u8 {
    LABELS[slot]
}

/// `diag(+1, -1, -1, -1, +1)`.
pub fn eta5() -> Matrix5<f64> {
    Matrix5::from_diagonal(&nalgebra::Vector5::new(1.0, -1.0, -1.0, -1.0, 1.0))
}

/// Minkowski metric `diag(+1, -1, -1, -1)`.
pub fn eta4() -> Matrix4<f64> {
    Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// Diagonal entry of the Minkowski metric.
#[inline]
pub fn eta_diag(mu: usize) -> f64 {
    if mu == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Lowers a contravariant four-vector index with `eta`.
pub fn lower(x: &nalgebra::Vector4<f64>) -> nalgebra::Vector4<f64> {
    nalgebra::Vector4::new(x[0], -x[1], -x[2], -x[3])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_five_is_last_slot() {
        assert_eq!(slot(5), Some(4));
        assert_eq!(slot(4), None);
        assert_eq!(label(4), 5);
        for (s, &l) in LABELS.iter().enumerate() {
            assert_eq!(slot(l), Some(s));
        }
    }
}
