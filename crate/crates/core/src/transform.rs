//! Analysis transforms: a stack of atoms (rows) with one display frequency
//! per atom and an optional mask of highlighted entries.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;
use crate::spectral::Spectrum;

/// What a transform row represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AtomLabel {
    /// GFT basis vector `u_k`.
    Gft { k: usize },
    /// SGWT atom of filter `filter` (0 = scaling function, `m >= 1` = wavelet
    /// scale `m`, coarse to fine) centred at `center`.
    Sgwt { filter: usize, center: usize },
    /// `g_m(lambda_k) u_k` for filter `filter`.
    Filtered { filter: usize, k: usize },
}

/// Boolean `rows x cols` mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighlightMask {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl HighlightMask {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            bits: vec![false; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::new(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            check_len(cols, row.len())?;
            for (c, &b) in row.iter().enumerate() {
                m.set(r, c, b);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "mask index out of range");
        self.bits[r * self.cols + c] = value;
    }

    /// Column indices set in row `r`, ascending.
    pub fn row_indices(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    fn top_rows(&self, count: usize) -> Self {
        let count = count.min(self.rows);
        Self {
            rows: count,
            cols: self.cols,
            bits: self.bits[..count * self.cols].to_vec(),
        }
    }
}

/// `M x n` analysis matrix whose rows are atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct Transform<T> {
    h: DenseMatrix<T>,
    frequencies: Vec<T>,
    labels: Vec<AtomLabel>,
    highlight: Option<HighlightMask>,
}

impl<T: Scalar> Transform<T> {
    pub fn new(h: DenseMatrix<T>, frequencies: Vec<T>, labels: Vec<AtomLabel>) -> Result<Self> {
        check_len(h.rows(), frequencies.len())?;
        check_len(h.rows(), labels.len())?;
        if let Some(k) = frequencies
            .iter()
            .position(|f| !f.is_finite() || *f < T::zero())
        {
            return Err(Error::input(format!(
                "frequency of row {k} must be finite and nonnegative, got {}",
                frequencies[k]
            )));
        }
        Ok(Self {
            h,
            frequencies,
            labels,
            highlight: None,
        })
    }

    /// The GFT as a transform: `H = U^T`, frequencies = eigenvalues.
    pub fn gft(s: &Spectrum<T>) -> Self {
        Self {
            h: s.basis().transpose(),
            frequencies: s.eigvals().to_vec(),
            labels: (0..s.n()).map(|k| AtomLabel::Gft { k }).collect(),
            highlight: None,
        }
    }

    pub fn with_highlight(mut self, mask: HighlightMask) -> Result<Self> {
        check_len(self.h.rows(), mask.rows())?;
        check_len(self.h.cols(), mask.cols())?;
        self.highlight = Some(mask);
        Ok(self)
    }

    /// Keeps the first `count` atoms.
    pub fn top_rows(&self, count: usize) -> Self {
        let count = count.min(self.h.rows());
        Self {
            h: self.h.top_rows(count),
            frequencies: self.frequencies[..count].to_vec(),
            labels: self.labels[..count].to_vec(),
            highlight: self.highlight.as_ref().map(|m| m.top_rows(count)),
        }
    }

    /// Concatenates the rows of several transforms over the same vertices.
    /// Highlight masks are dropped.
    pub fn stack(parts: &[Transform<T>]) -> Result<Self> {
        let cols = parts.first().map_or(0, Transform::cols);
        let mut rows = Vec::new();
        let mut frequencies = Vec::new();
        let mut labels = Vec::new();
        for p in parts {
            check_len(cols, p.cols())?;
            rows.extend((0..p.rows()).map(|r| p.h.row(r).to_vec()));
            frequencies.extend_from_slice(&p.frequencies);
            labels.extend_from_slice(&p.labels);
        }
        let h = if rows.is_empty() {
            DenseMatrix::zeros(0, cols)
        } else {
            DenseMatrix::from_rows(&rows)?
        };
        Self::new(h, frequencies, labels)
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.h
    }

    pub fn frequencies(&self) -> &[T] {
        &self.frequencies
    }

    pub fn labels(&self) -> &[AtomLabel] {
        &self.labels
    }

    pub fn highlight(&self) -> Option<&HighlightMask> {
        self.highlight.as_ref()
    }

    pub fn rows(&self) -> usize {
        self.h.rows()
    }

    pub fn cols(&self) -> usize {
        self.h.cols()
    }

    /// `H x`.
    pub fn analyze(&self, x: &[T]) -> Result<Vec<T>> {
        self.h.matvec(x)
    }

    pub fn cast<U: Scalar>(&self) -> Transform<U> {
        Transform {
            h: self.h.cast(),
            frequencies: self
                .frequencies
                .iter()
                .map(|&f| U::lit(f.as_f64()))
                .collect(),
            labels: self.labels.clone(),
            highlight: self.highlight.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, OperatorKind};

    #[test]
    fn gft_transform_is_basis_transpose() {
        let g = Graph::new(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        let s = Spectrum::of(&g, OperatorKind::Combinatorial).unwrap();
        let t = Transform::gft(&s);
        assert_eq!(t.frequencies(), s.eigvals());
        assert_eq!(t.matrix(), &s.basis().transpose());
        let top = t.top_rows(2);
        assert_eq!(top.rows(), 2);
        assert_eq!(
            top.labels(),
            &[AtomLabel::Gft { k: 0 }, AtomLabel::Gft { k: 1 }]
        );
    }

    #[test]
    fn highlight_dimensions_are_checked() {
        let h = DenseMatrix::<f64>::zeros(2, 3);
        let t = Transform::new(h, vec![0.0, 1.0], vec![AtomLabel::Gft { k: 0 }; 2]).unwrap();
        assert!(t.clone().with_highlight(HighlightMask::new(2, 2)).is_err());
        let mut m = HighlightMask::new(2, 3);
        m.set(1, 2, true);
        let t = t.with_highlight(m).unwrap();
        assert_eq!(t.highlight().unwrap().row_indices(1), vec![2]);
    }

    #[test]
    fn negative_frequency_rejected() {
        let h = DenseMatrix::<f64>::zeros(1, 1);
        assert!(Transform::new(h, vec![-1.0], vec![AtomLabel::Gft { k: 0 }]).is_err());
    }
}
