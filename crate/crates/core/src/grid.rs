//! Row-major scalar fields and boolean masks.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("grid dimensions must be at least 1x1, got {width}x{height}")]
    Empty { width: usize, height: usize },
    #[error("expected {expected} values for the grid, got {actual}")]
    Length { expected: usize, actual: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl Grid2D {
    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self, GridError> {
        if width == 0 || height == 0 {
            return Err(GridError::Empty { width, height });
        }
        Ok(Self {
            width,
            height,
            values: vec![value; width * height],
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self, GridError> {
        Self::filled(width, height, 0.0)
    }

    pub fn from_vec(width: usize, height: usize, values: Vec<f64>) -> Result<Self, GridError> {
        if width == 0 || height == 0 {
            return Err(GridError::Empty { width, height });
        }
        if values.len() != width * height {
            return Err(GridError::Length {
                expected: width * height,
                actual: values.len(),
            });
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    /// Builds a grid by evaluating `f(x, y)` at every cell.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self, GridError> {
        let mut g = Self::zeros(width, height)?;
        for y in 0..height {
            for x in 0..width {
                g.values[y * width + x] = f(x, y);
            }
        }
        Ok(g)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.values[y * self.width + x] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Clamped lookup; coordinates outside the grid read the nearest edge.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.get(cx, cy)
    }

    /// Bilinear sample at continuous cell coordinates, clamped to the border.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> f64 {
        let x = x.clamp(0.0, (self.width - 1) as f64);
        let y = y.clamp(0.0, (self.height - 1) as f64);
        let x0 = x.floor() as usize;
        let y0 = y.floor() as usize;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let fx = x - x0 as f64;
        let fy = y - y0 as f64;
        let top = self.get(x0, y0) * (1.0 - fx) + self.get(x1, y0) * fx;
        let bottom = self.get(x0, y1) * (1.0 - fx) + self.get(x1, y1) * fx;
        top * (1.0 - fy) + bottom * fy
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            width: self.width,
            height: self.height,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Rescales values linearly onto `[0, 1]`; a constant grid maps to zeros.
    pub fn normalized(&self) -> Self {
        let (lo, hi) = (self.min(), self.max());
        let span = hi - lo;
        if span <= 0.0 {
            return self.map(|_| 0.0);
        }
        self.map(|v| (v - lo) / span)
    }

    /// Cell indices sorted by ascending value, ties by row-major index.
    pub fn rank_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]).then(a.cmp(&b)));
        order
    }

    pub fn same_dims(&self, other: &Grid2D) -> bool {
        self.dims() == other.dims()
    }

    /// Bilinear resize to new dimensions.
    pub fn resized(&self, width: usize, height: usize) -> Result<Self, GridError> {
        let sx = if width > 1 {
            (self.width - 1) as f64 / (width - 1) as f64
        } else {
            0.0
        };
        let sy = if height > 1 {
            (self.height - 1) as f64 / (height - 1) as f64
        } else {
            0.0
        };
        Self::from_fn(width, height, |x, y| {
            self.sample_bilinear(x as f64 * sx, y as f64 * sy)
        })
    }
}

/// Boolean field with the same layout as [`Grid2D`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    cells: Vec<bool>,
}

impl Mask {
    pub fn filled(width: usize, height: usize, value: bool) -> Result<Self, GridError> {
        if width == 0 || height == 0 {
            return Err(GridError::Empty { width, height });
        }
        Ok(Self {
            width,
            height,
            cells: vec![value; width * height],
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self, GridError> {
        let mut m = Self::filled(width, height, false)?;
        for y in 0..height {
            for x in 0..width {
                m.cells[y * width + x] = f(x, y);
            }
        }
        Ok(m)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.cells[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.cells[y * self.width + x] = v;
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_wrong_length() {
        assert!(Grid2D::zeros(0, 3).is_err());
        assert!(Grid2D::from_vec(2, 2, vec![0.0; 3]).is_err());
        assert!(Mask::filled(3, 0, true).is_err());
    }

    #[test]
    fn bilinear_hits_cell_values_at_integer_points() {
        let g = Grid2D::from_fn(4, 3, |x, y| (x * 10 + y) as f64).unwrap();
        for y in 0..3 {
            for x in 0..4 {
                assert_eq!(g.sample_bilinear(x as f64, y as f64), g.get(x, y));
            }
        }
        assert_eq!(g.sample_bilinear(0.5, 0.0), 5.0);
        assert_eq!(g.sample_bilinear(-4.0, 99.0), g.get(0, 2));
    }

    #[test]
    fn normalized_constant_is_zero() {
        let g = Grid2D::filled(3, 3, 7.0).unwrap();
        assert!(g.normalized().values().iter().all(|&v| v == 0.0));
    }
}
