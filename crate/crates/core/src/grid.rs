//! Regular sample lattices over chart coordinates and finite-difference
//! partial derivatives.

use nalgebra::Vector4;

use crate::{Error, Result};

/// Which special frame the components of a field refer to.
///
/// In a Lorentz chart of flat space-time the regular frame associated with
/// the coordinate four-basis is the O-basis, so `Regular` behaves as `O`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisFlag {
    O,
    P,
    Regular,
}

impl BasisFlag {
    pub fn is_parallel(self) -> bool {
        self == BasisFlag::P
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BasisFlag::O => "O",
            BasisFlag::P => "P",
            BasisFlag::Regular => "regular",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "O" | "o" => Some(BasisFlag::O),
            "P" | "p" => Some(BasisFlag::P),
            "regular" => Some(BasisFlag::Regular),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    Central2,
    Central4,
}

impl Scheme {
    /// Samples needed along an active axis.
    pub fn min_samples(self) -> usize {
        match self {
            Scheme::Central2 => 3,
            Scheme::Central4 => 5,
        }
    }

    /// Samples at each end of an axis that need a one-sided stencil.
    pub fn halo(self) -> usize {
        match self {
            Scheme::Central2 => 1,
            Scheme::Central4 => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Central2 => "central2",
            Scheme::Central4 => "central4",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "central2" => Some(Scheme::Central2),
            "central4" => Some(Scheme::Central4),
            _ => None,
        }
    }

    /// `(first sample offset, weights, denominator in units of the spacing)`.
    fn stencil(self, n: usize, i: usize) -> (isize, &'static [f64], f64) {
        match self {
            Scheme::Central2 => {
                if i == 0 {
                    (0, &[-3.0, 4.0, -1.0], 2.0)
                } else if i == n - 1 {
                    (-2, &[1.0, -4.0, 3.0], 2.0)
                } else {
                    (-1, &[-1.0, 0.0, 1.0], 2.0)
                }
            }
            Scheme::Central4 => {
                if i == 0 {
                    (0, &[-25.0, 48.0, -36.0, 16.0, -3.0], 12.0)
                } else if i == 1 {
                    (-1, &[-3.0, -10.0, 18.0, -6.0, 1.0], 12.0)
                } else if i == n - 2 {
                    (-3, &[-1.0, 6.0, -18.0, 10.0, 3.0], 12.0)
                } else if i == n - 1 {
                    (-4, &[3.0, -16.0, 36.0, -48.0, 25.0], 12.0)
                } else {
                    (-2, &[1.0, -8.0, 0.0, 8.0, -1.0], 12.0)
                }
            }
        }
    }
}

/// Axis-aligned lattice `origin + i·spacing` over the four chart coordinates.
///
/// An axis with a single sample is suppressed: fields are taken to be
/// constant along it and its partial derivative is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub origin: [f64; 4],
    pub spacing: [f64; 4],
    pub counts: [usize; 4],
}

impl Grid {
    pub fn new(origin: [f64; 4], spacing: [f64; 4], counts: [usize; 4]) -> Result<Self> {
        if spacing.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
            return Err(Error::GridTooCoarse("spacing must be positive".into()));
        }
        if counts.contains(&0) {
            return Err(Error::GridTooCoarse("every axis needs at least one sample".into()));
        }
        if origin.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("grid origin"));
        }
        Ok(Grid { origin, spacing, counts })
    }

    /// A single sample at `x`.
    pub fn point(x: [f64; 4]) -> Self {
        Grid { origin: x, spacing: [1.0; 4], counts: [1; 4] }
    }

    /// Grid of `n` samples on every non-suppressed axis spanning `[lo, hi]`.
    pub fn cube(lo: f64, hi: f64, n: usize, active: [bool; 4]) -> Result<Self> {
        let h = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 1.0 };
        let counts = active.map(|a| if a { n } else { 1 });
        let origin = active.map(|a| if a { lo } else { 0.0 });
        Grid::new(origin, [h; 4], counts)
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn stride(&self, axis: usize) -> usize {
        self.counts[axis + 1..].iter().product()
    }

    pub fn multi_index(&self, flat: usize) -> [usize; 4] {
        let mut rem = flat;
        let mut out = [0; 4];
        for axis in (0..4).rev() {
            out[axis] = rem % self.counts[axis];
            rem /= self.counts[axis];
        }
        out
    }

    /// Chart coordinates `x^μ` of a sample.
    pub fn coords(&self, flat: usize) -> Vector4<f64> {
        let idx = self.multi_index(flat);
        Vector4::from_fn(|mu, _| self.origin[mu] + idx[mu] as f64 * self.spacing[mu])
    }

    pub fn active_axes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..4).filter(|&a| self.counts[a] > 1)
    }

    pub fn check_scheme(&self, scheme: Scheme) -> Result<()> {
        for axis in self.active_axes() {
            if self.counts[axis] < scheme.min_samples() {
                return Err(Error::GridTooCoarse(format!(
                    "axis {axis} has {} samples; {} needs {}",
                    self.counts[axis],
                    scheme.as_str(),
                    scheme.min_samples()
                )));
            }
        }
        Ok(())
    }

    /// True where some active axis needs a one-sided stencil.
    pub fn is_boundary(&self, flat: usize, scheme: Scheme) -> bool {
        let idx = self.multi_index(flat);
        let w = scheme.halo();
        self.active_axes().any(|a| idx[a] < w || idx[a] + w >= self.counts[a])
    }

    pub fn boundary_mask(&self, scheme: Scheme) -> Vec<bool> {
        (0..self.len()).map(|s| self.is_boundary(s, scheme)).collect()
    }

    /// Partial derivative along `axis` of interleaved data with `ncomp`
    /// components per sample.
    pub fn partial(&self, data: &[f64], ncomp: usize, axis: usize, scheme: Scheme) -> Result<Vec<f64>> {
        if data.len() != self.len() * ncomp {
            return Err(Error::GridMismatch);
        }
        let n = self.counts[axis];
        let mut out = vec![0.0; data.len()];
        if n == 1 {
            return Ok(out);
        }
        self.check_scheme(scheme)?;
        let stride = self.stride(axis);
        let h = self.spacing[axis];
        for s in 0..self.len() {
            let i = self.multi_index(s)[axis];
            let (start, weights, denom) = scheme.stencil(n, i);
            for c in 0..ncomp {
                let mut acc = 0.0;
                for (k, w) in weights.iter().enumerate() {
                    if *w != 0.0 {
                        let j = (s as isize + (start + k as isize) * stride as isize) as usize;
                        acc += w * data[j * ncomp + c];
                    }
                }
                out[s * ncomp + c] = acc / (denom * h);
            }
        }
        Ok(out)
    }
}

/// Sampled field with `ncomp` real components per grid sample.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldOnGrid {
    pub grid: Grid,
    pub ncomp: usize,
    pub basis: BasisFlag,
    pub data: Vec<f64>,
}

impl FieldOnGrid {
    pub fn new(grid: Grid, ncomp: usize, basis: BasisFlag, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() * ncomp {
            return Err(Error::GridMismatch);
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("field data"));
        }
        Ok(FieldOnGrid { grid, ncomp, basis, data })
    }

    pub fn from_fn<F>(grid: Grid, ncomp: usize, basis: BasisFlag, mut f: F) -> Self
    where
        F: FnMut(&Vector4<f64>) -> Vec<f64>,
    {
        let mut data = Vec::with_capacity(grid.len() * ncomp);
        for s in 0..grid.len() {
            let v = f(&grid.coords(s));
            assert_eq!(v.len(), ncomp, "sample function returned wrong component count");
            data.extend(v);
        }
        FieldOnGrid { grid, ncomp, basis, data }
    }

    pub fn sample(&self, s: usize) -> &[f64] {
        &self.data[s * self.ncomp..(s + 1) * self.ncomp]
    }

    /// `∂_μ` of every component, for μ = 0..3.
    pub fn gradient(&self, scheme: Scheme) -> Result<[Vec<f64>; 4]> {
        self.grid.check_scheme(scheme)?;
        Ok([
            self.grid.partial(&self.data, self.ncomp, 0, scheme)?,
            self.grid.partial(&self.data, self.ncomp, 1, scheme)?,
            self.grid.partial(&self.data, self.ncomp, 2, scheme)?,
            self.grid.partial(&self.data, self.ncomp, 3, scheme)?,
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> Grid {
        Grid::new([0.0; 4], [0.1, 1.0, 1.0, 1.0], [n, 1, 1, 1]).unwrap()
    }

    #[test]
    fn index_round_trip() {
        let g = Grid::new([0.0; 4], [1.0; 4], [2, 3, 4, 5]).unwrap();
        for s in 0..g.len() {
            let i = g.multi_index(s);
            assert_eq!(((i[0] * 3 + i[1]) * 4 + i[2]) * 5 + i[3], s);
        }
    }

    #[test]
    fn stencils_are_exact_on_polynomials() {
        // central2 (and its one-sided ends) is exact up to quadratics, central4 up to quartics
        for (scheme, degree) in [(Scheme::Central2, 2), (Scheme::Central4, 4)] {
            let g = line(9);
            let f: Vec<f64> = (0..9).map(|i| (0.3 + 0.1 * i as f64).powi(degree)).collect();
            let d = g.partial(&f, 1, 0, scheme).unwrap();
            for i in 0..9 {
                let x = 0.3 + 0.1 * i as f64;
                let exact = degree as f64 * x.powi(degree - 1);
                assert!((d[i] - exact).abs() < 1e-10, "{scheme:?} at {i}: {} vs {exact}", d[i]);
            }
        }
    }

    #[test]
    fn second_order_convergence() {
        let err = |n: usize| {
            let h = 1.0 / (n - 1) as f64;
            let g = Grid::new([0.0; 4], [h, 1.0, 1.0, 1.0], [n, 1, 1, 1]).unwrap();
            let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).sin()).collect();
            let d = g.partial(&f, 1, 0, Scheme::Central2).unwrap();
            (1..n - 1).map(|i| (d[i] - (i as f64 * h).cos()).abs()).fold(0.0, f64::max)
        };
        let order = (err(17) / err(33)).log2();
        assert!(order > 1.9 && order < 2.1, "order {order}");
    }

    #[test]
    fn suppressed_axis_has_zero_derivative() {
        let g = Grid::new([0.0; 4], [1.0; 4], [3, 1, 1, 1]).unwrap();
        let d = g.partial(&[1.0, 2.0, 3.0], 1, 1, Scheme::Central2).unwrap();
        assert_eq!(d, vec![0.0; 3]);
    }

    #[test]
    fn coarse_grids_are_rejected() {
        let g = line(4);
        assert!(g.partial(&[0.0; 4], 1, 0, Scheme::Central2).is_ok());
        assert!(matches!(g.partial(&[0.0; 4], 1, 0, Scheme::Central4), Err(Error::GridTooCoarse(_))));
        assert!(matches!(line(2).check_scheme(Scheme::Central2), Err(Error::GridTooCoarse(_))));
        assert!(Grid::new([0.0; 4], [0.0, 1.0, 1.0, 1.0], [3, 1, 1, 1]).is_err());
    }

    #[test]
    fn boundary_flags() {
        let g = Grid::new([0.0; 4], [1.0; 4], [5, 5, 1, 1]).unwrap();
        let mask = g.boundary_mask(Scheme::Central2);
        assert_eq!(mask.iter().filter(|b| !**b).count(), 9);
        let mask = g.boundary_mask(Scheme::Central4);
        assert_eq!(mask.iter().filter(|b| !**b).count(), 1);
    }

    #[test]
    fn field_shape_is_validated() {
        let g = line(3);
        assert_eq!(FieldOnGrid::new(g, 2, BasisFlag::O, vec![0.0; 5]), Err(Error::GridMismatch));
        assert!(FieldOnGrid::new(g, 2, BasisFlag::O, vec![0.0; 6]).is_ok());
    }
}
