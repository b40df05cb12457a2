use crate::{Error, Result};

/// A row-major set of points in ℝ^d.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// An empty set of `dim`-dimensional points.
    pub fn empty(dim: usize) -> Self {
        Self { dim, coords: Vec::new() }
    }

    /// Builds a set from a flat row-major coordinate buffer.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("point dimension must be >= 1"));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: coords.len() % dim });
        }
        if let Some(bad) = coords.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("point coordinates must be finite, got {bad}")));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(1, Vec::len);
        let mut set = Self::empty(dim.max(1));
        for r in rows {
            set.push(r)?;
        }
        Ok(set)
    }

    /// Regular grid with `per_dim` points per axis on `[0, r]^d`.
    ///
    /// Axis values are `r·i/(per_dim − 1)`; a single point per axis sits at `r/2`.
    /// The last axis varies fastest.
    pub fn grid(d: usize, per_dim: usize, r: f64) -> Result<Self> {
        if d == 0 || per_dim == 0 {
            return Err(Error::domain("grid needs d >= 1 and per_dim >= 1"));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::domain(format!("box radius must be > 0, got {r}")));
        }
        let axis: Vec<f64> = if per_dim == 1 {
            vec![0.5 * r]
        } else {
            (0..per_dim).map(|i| r * i as f64 / (per_dim - 1) as f64).collect()
        };
        let n = per_dim
            .checked_pow(d as u32)
            .ok_or_else(|| Error::domain("grid size overflows"))?;
        let mut coords = Vec::with_capacity(n * d);
        for flat in 0..n {
            let mut rem = flat;
            let mut row = vec![0.0; d];
            for k in (0..d).rev() {
                row[k] = axis[rem % per_dim];
                rem /= per_dim;
            }
            coords.extend_from_slice(&row);
        }
        Ok(Self { dim: d, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn push(&mut self, x: &[f64]) -> Result<()> {
        self.check_dim(x)?;
        if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("point coordinates must be finite, got {bad}")));
        }
        self.coords.extend_from_slice(x);
        Ok(())
    }

    pub(crate) fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, got: x.len() })
        }
    }

    /// Subset of rows selected by index, in the given order.
    pub fn select(&self, idx: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(idx.len() * self.dim);
        for &i in idx {
            coords.extend_from_slice(self.row(i));
        }
        Self { dim: self.dim, coords }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_layout() {
        let g = PointSet::grid(2, 3, 2.0).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g.row(0), &[0.0, 0.0]);
        assert_eq!(g.row(1), &[0.0, 1.0]);
        assert_eq!(g.row(8), &[2.0, 2.0]);
        let single = PointSet::grid(1, 1, 1.0).unwrap();
        assert_eq!(single.row(0), &[0.5]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PointSet::from_flat(2, vec![1.0, 2.0, 3.0]).is_err());
        assert!(PointSet::from_flat(1, vec![f64::NAN]).is_err());
        let mut p = PointSet::empty(2);
        assert!(matches!(p.push(&[1.0]), Err(Error::DimensionMismatch { expected: 2, got: 1 })));
        assert!(PointSet::grid(1, 5, 0.0).is_err());
    }
}
