//! Cluster description: weighted adjacency matrix, local phase rotations and
//! the nullifier coefficient map, plus the plain-text graph file format.
//!
//! Graph files are UTF-8 text. The first non-comment line holds the mode count
//! `N`; every following non-comment line is an edge `i j w` with 0-based node
//! indices and a real weight. `i == j` sets a self-loop. Lines starting with
//! `#` and blank lines are ignored; an unordered pair may appear only once.

use std::collections::HashSet;
use std::fmt::Write as _;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matfun::ComplexMatrix;
use crate::scalar::{phase, wrap_angle, Real};

/// Real symmetric weighted-graph matrix `A`; diagonal entries are self-loops.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix<T> {
    n: usize,
    weights: Vec<T>,
}

impl<T: Real> AdjacencyMatrix<T> {
    /// Builds `A` from row-major weights, symmetrizing exactly via `(A + Aᵀ)/2`.
    ///
    /// Asymmetry above `tol · max(1, ‖A‖_max)` is rejected.
    pub fn new(n: usize, weights: Vec<T>, tol: T) -> Result<Self> {
        if n == 0 || weights.len() != n * n {
            return Err(Error::DimensionMismatch { expected: format!("{n}x{n} weights"), found: format!("{}", weights.len()) });
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = weights.iter().fold(T::one(), |m, w| m.max(w.abs()));
        let mut asym = T::zero();
        for i in 0..n {
            for j in 0..n {
                asym = asym.max((weights[i * n + j] - weights[j * n + i]).abs());
            }
        }
        if asym > tol * scale {
            return Err(Error::NotSymmetric { residual: asym.as_f64() });
        }
        let mut sym = weights.clone();
        for i in 0..n {
            for j in 0..n {
                sym[i * n + j] = (weights[i * n + j] + weights[j * n + i]) * T::lit(0.5);
            }
        }
        Ok(Self { n, weights: sym })
    }

    /// Takes the real part of a complex matrix that must be real within `real_tol`
    /// and symmetric within `sym_tol` (both relative to `max(1, ‖M‖_max)`).
    pub fn from_complex(m: &ComplexMatrix<T>, real_tol: T, sym_tol: T) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: "square matrix".into(), found: format!("{}x{}", m.rows(), m.cols()) });
        }
        if !m.is_real(real_tol) {
            return Err(Error::NonRealResult { residual: m.max_imag().as_f64() });
        }
        Self::new(m.rows(), m.real_parts(), sym_tol)
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, weights: vec![T::zero(); n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.weights[i * self.n + j]
    }

    /// Row-major weights.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn to_complex(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(self.n, self.n, |i, j| Complex::new(self.get(i, j), T::zero()))
    }

    /// Upper-triangle entries `(i, j, w)` with `i ≤ j` and `w ≠ 0`.
    pub fn edges(&self) -> Vec<(usize, usize, T)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i..self.n {
                let w = self.get(i, j);
                if w != T::zero() {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.weights.iter().zip(&other.weights).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }
}

/// Local rotation angles `θ_j`, the diagonal of `Θ`, stored in (−π, π].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector<T> {
    theta: Vec<T>,
}

impl<T: Real> PhaseVector<T> {
    pub fn new(theta: Vec<T>) -> Result<Self> {
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { theta: theta.into_iter().map(wrap_angle).collect() })
    }

    pub fn zeros(n: usize) -> Self {
        Self { theta: vec![T::zero(); n] }
    }

    /// Same angle on every mode.
    pub fn uniform(n: usize, theta: T) -> Self {
        Self { theta: vec![wrap_angle(theta); n] }
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn angles(&self) -> &[T] {
        &self.theta
    }

    pub fn is_zero(&self) -> bool {
        self.theta.iter().all(|t| *t == T::zero())
    }

    /// Diagonal of `e^{i·k·Θ}`.
    pub fn exp_i(&self, k: T) -> Vec<Complex<T>> {
        self.theta.iter().map(|&t| phase(k * t)).collect()
    }
}

/// `N × 2N` matrix `Q` mapping the operator vector `(b, b†)` to the nullifiers.
///
/// Left block `−(A + i·1)·e^{iΘ}`, right block `−(A − i·1)·e^{−iΘ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NullifierMap<T> {
    q: ComplexMatrix<T>,
}

impl<T: Real> NullifierMap<T> {
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.q.rows()
    }

    /// Coefficients of `b`.
    pub fn left(&self) -> ComplexMatrix<T> {
        let n = self.n();
        self.q.submatrix(0, 0, n, n)
    }

    /// Coefficients of `b†`.
    pub fn right(&self) -> ComplexMatrix<T> {
        let n = self.n();
        self.q.submatrix(0, n, n, n)
    }
}

pub(crate) fn check_dims<T: Real>(a: &AdjacencyMatrix<T>, theta: &PhaseVector<T>) -> Result<()> {
    if a.n() != theta.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} phases", a.n()),
            found: format!("{}", theta.len()),
        });
    }
    Ok(())
}

/// `(A + s·i·1)·e^{s·iΘ}` for `s = ±1`.
pub(crate) fn shifted_rotated<T: Real>(a: &AdjacencyMatrix<T>, theta: &PhaseVector<T>, sign: T) -> ComplexMatrix<T> {
    a.to_complex().add_diagonal(Complex::new(T::zero(), sign)).mul_diag_right(&theta.exp_i(sign))
}

pub fn nullifier_map<T: Real>(a: &AdjacencyMatrix<T>, theta: &PhaseVector<T>) -> Result<NullifierMap<T>> {
    check_dims(a, theta)?;
    let left = -&shifted_rotated(a, theta, T::one());
    let right = -&shifted_rotated(a, theta, -T::one());
    Ok(NullifierMap { q: ComplexMatrix::hstack(&left, &right) })
}

/// Parses the graph file format into an adjacency matrix.
pub fn parse_graph<T: Real>(text: &str) -> Result<AdjacencyMatrix<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(Error::Parse { line: 0, message: "missing mode count".into() })?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse { line: header_line, message: format!("expected mode count, found {header:?}") })?;
    if n == 0 {
        return Err(Error::Parse { line: header_line, message: "mode count must be positive".into() });
    }

    let mut weights = vec![T::zero(); n * n];
    let mut seen = HashSet::new();
    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse { line, message: format!("expected `i j w`, found {content:?}") });
        }
        let index = |s: &str| -> Result<usize> {
            let idx: usize = s.parse().map_err(|_| Error::Parse { line, message: format!("invalid node index {s:?}") })?;
            if idx >= n {
                return Err(Error::IndexOutOfRange { line, index: idx, n });
            }
            Ok(idx)
        };
        let i = index(fields[0])?;
        let j = index(fields[1])?;
        let w: f64 = fields[2].parse().map_err(|_| Error::Parse { line, message: format!("invalid weight {:?}", fields[2]) })?;
        if !w.is_finite() {
            return Err(Error::Parse { line, message: format!("weight must be finite, found {}", fields[2]) });
        }
        let key = (i.min(j), i.max(j));
        if !seen.insert(key) {
            return Err(Error::DuplicateEdge { line, i: key.0, j: key.1 });
        }
        let w = T::lit(w);
        weights[i * n + j] = w;
        weights[j * n + i] = w;
    }
    Ok(AdjacencyMatrix { n, weights })
}

/// Writes `A` in the graph file format; `parse_graph` inverts it exactly.
pub fn serialize_graph<T: Real>(a: &AdjacencyMatrix<T>) -> String {
    let mut out = format!("{}\n", a.n());
    for (i, j, w) in a.edges() {
        let _ = writeln!(out, "{i} {j} {w:?}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn parse_single_node() {
        let a: AdjacencyMatrix<f64> = parse_graph("1\n").unwrap();
        assert_eq!(a, AdjacencyMatrix::zeros(1));
    }

    #[test]
    fn parse_single_edge() {
        let a: AdjacencyMatrix<f64> = parse_graph("2\n0 1 1.0\n").unwrap();
        assert_eq!(a.weights(), &[0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn parse_triangle_with_negative_weight() {
        let a: AdjacencyMatrix<f64> = parse_graph("3\n0 1 1\n1 2 1\n0 2 -0.5\n").unwrap();
        assert_eq!(a.weights(), &[0.0, 1.0, -0.5, 1.0, 0.0, 1.0, -0.5, 1.0, 0.0]);
    }

    #[test]
    fn comments_blank_lines_and_self_loops() {
        let a: AdjacencyMatrix<f64> = parse_graph("# header\n\n2\n# edge list\n1 1 0.25\n").unwrap();
        assert_eq!(a.get(1, 1), 0.25);
        assert_eq!(a.get(0, 1), 0.0);
    }

    #[test]
    fn parse_errors_report_lines() {
        assert_eq!(parse_graph::<f64>("2\n0 1\n").unwrap_err(), Error::Parse { line: 2, message: "expected `i j w`, found \"0 1\"".into() });
        assert!(matches!(parse_graph::<f64>("x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph::<f64>("2\n0 1 abc\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph::<f64>(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph::<f64>("0\n"), Err(Error::Parse { .. })));
        assert_eq!(parse_graph::<f64>("2\n0 2 1\n").unwrap_err(), Error::IndexOutOfRange { line: 2, index: 2, n: 2 });
        assert_eq!(parse_graph::<f64>("3\n0 1 1\n# c\n1 0 2\n").unwrap_err(), Error::DuplicateEdge { line: 4, i: 0, j: 1 });
    }

    #[test]
    fn serialize_round_trip() {
        let text = "3\n0 1 0.1\n1 2 -3.3333333333333335\n2 2 7\n";
        let a: AdjacencyMatrix<f64> = parse_graph(text).unwrap();
        let b: AdjacencyMatrix<f64> = parse_graph(&serialize_graph(&a)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn asymmetric_input_rejected_and_small_asymmetry_symmetrized() {
        assert!(matches!(AdjacencyMatrix::new(2, vec![0.0, 1.0, 0.9, 0.0], 1e-12), Err(Error::NotSymmetric { .. })));
        let a = AdjacencyMatrix::new(2, vec![0.0, 1.0, 1.0 + 1e-14, 0.0], 1e-12).unwrap();
        assert_eq!(a.get(0, 1), a.get(1, 0));
    }

    #[test]
    fn phases_are_wrapped() {
        let p = PhaseVector::new(vec![3.0 * std::f64::consts::PI, -std::f64::consts::PI]).unwrap();
        assert!((p.angles()[0] - std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(p.angles()[1], std::f64::consts::PI);
        assert!(PhaseVector::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn nullifier_map_single_mode() {
        let q = nullifier_map(&AdjacencyMatrix::<f64>::zeros(1), &PhaseVector::zeros(1)).unwrap();
        assert!((q.matrix()[(0, 0)] - cx(0.0, -1.0)).norm() < 1e-15);
        assert!((q.matrix()[(0, 1)] - cx(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn nullifier_map_quarter_turn() {
        let theta = PhaseVector::new(vec![std::f64::consts::FRAC_PI_2]).unwrap();
        let q = nullifier_map(&AdjacencyMatrix::<f64>::zeros(1), &theta).unwrap();
        // −i·e^{iπ/2} = 1 and i·e^{−iπ/2} = 1
        assert!((q.matrix()[(0, 0)] - cx(1.0, 0.0)).norm() < 1e-15);
        assert!((q.matrix()[(0, 1)] - cx(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn nullifier_map_epr_pair() {
        let a: AdjacencyMatrix<f64> = parse_graph("2\n0 1 1\n").unwrap();
        let q = nullifier_map(&a, &PhaseVector::zeros(2)).unwrap();
        let left = ComplexMatrix::new(2, 2, vec![cx(0.0, -1.0), cx(-1.0, 0.0), cx(-1.0, 0.0), cx(0.0, -1.0)]).unwrap();
        let right = ComplexMatrix::new(2, 2, vec![cx(0.0, 1.0), cx(-1.0, 0.0), cx(-1.0, 0.0), cx(0.0, 1.0)]).unwrap();
        assert!(q.left().max_diff(&left) < 1e-15);
        assert!(q.right().max_diff(&right) < 1e-15);
        assert!(q.right().max_diff(&q.left().conj()) < 1e-15);
    }

    #[test]
    fn nullifier_map_dimension_mismatch() {
        assert!(matches!(nullifier_map(&AdjacencyMatrix::<f64>::zeros(2), &PhaseVector::zeros(3)), Err(Error::DimensionMismatch { .. })));
    }
}
