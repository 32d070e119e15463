//! Spin–charge frame decompositions of a gauge snapshot.
//!
//! Two factorizations at a single spacetime point:
//!
//! - color-symmetric: `A^a_μ = Φ^{ai} e^i_μ` with three orthonormal frame
//!   vectors `e^i` in four Euclidean dimensions ([`decompose_su2`]);
//! - off-diagonal: `W = A¹ + iA² = ψ₁ e + ψ₂* e*` with a complex null
//!   vector, `e·e = 0` and `e·e* = 1` ([`extract_offdiagonal`],
//!   [`fit_null_frame`]).

use std::fmt;

use nalgebra::{Matrix3, Matrix3x4, Matrix4, RowVector4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use thiserror::Error;

use crate::numfmt::sci;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Entries below this magnitude are skipped when fixing frame signs.
const SIGN_EPS: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("input contains a non-finite entry")]
    NonFiniteInput,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("frame violates e.e = 0 by {null} and e.e* = 1 by {norm}")]
    InvalidFrame { null: f64, norm: f64 },
    #[error("line {line}: {reason}")]
    Snapshot { line: usize, reason: String },
}

impl FrameError {
    pub fn kind(&self) -> &'static str {
        match self {
            FrameError::NonFiniteInput => "NonFiniteInput",
            FrameError::InvalidTolerance(_) => "InvalidTolerance",
            FrameError::InvalidFrame { .. } => "InvalidFrame",
            FrameError::Snapshot { .. } => "SnapshotFormat",
        }
    }
}

/// Gauge field `A^a_μ` at one point: rows are colors, columns Euclidean
/// directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeSnapshot(pub Matrix3x4<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct FrameDecomposition {
    pub phi: Matrix3<f64>,
    /// Rows are the frame vectors `e^i`.
    pub frame: Matrix3x4<f64>,
    /// Number of frame rows taken from nonzero singular directions.
    pub rank: usize,
    /// `‖A − Φ·frame‖_F`.
    pub residual: f64,
}

impl FrameDecomposition {
    pub fn reconstruct(&self) -> Matrix3x4<f64> {
        self.phi * self.frame
    }

    /// `‖frame·frameᵀ − I₃‖_F`.
    pub fn orthonormality_error(&self) -> f64 {
        (self.frame * self.frame.transpose() - Matrix3::identity()).norm()
    }
}

impl fmt::Display for FrameDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Phi")?;
        for r in 0..3 {
            let row: Vec<String> = (0..3).map(|c| sci(self.phi[(r, c)])).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        writeln!(f, "frame")?;
        for r in 0..3 {
            let row: Vec<String> = (0..4).map(|c| sci(self.frame[(r, c)])).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        writeln!(f, "residual={}", sci(self.residual))
    }
}

fn fix_sign(v: RowVector4<f64>) -> RowVector4<f64> {
    match v.iter().find(|x| x.abs() > SIGN_EPS) {
        Some(x) if *x < 0.0 => -v,
        _ => v,
    }
}

/// Extends orthonormal rows with coordinate axes, taken in `order`, by
/// Gram–Schmidt until `target` rows exist.
fn complete_with_axes(rows: &mut Vec<RowVector4<f64>>, order: &[usize], target: usize) {
    for &axis in order {
        if rows.len() == target {
            break;
        }
        let mut v = RowVector4::zeros();
        v[axis] = 1.0;
        for r in rows.iter() {
            v -= r * r.dot(&v);
        }
        // At least one axis keeps norm ≥ √(1/2) against two or fewer rows.
        if v.norm() > 0.5 {
            rows.push(v / v.norm());
        }
    }
}

/// Factorizes `A = Φ·frame`.
///
/// The frame rows are the right singular directions of `A` in order of
/// decreasing singular value, each signed so its first nonzero entry is
/// positive. Directions whose singular value is at most `tol·‖A‖` are
/// replaced by coordinate axes made orthonormal by Gram–Schmidt. Then
/// `Φ = A·frameᵀ`, and reconstruction is exact because the row space of
/// `A` lies in the span of the frame.
pub fn decompose_su2(a: &GaugeSnapshot, tol: f64) -> Result<FrameDecomposition, FrameError> {
    if !(tol > 0.0) {
        return Err(FrameError::InvalidTolerance(tol));
    }
    let a = a.0;
    if a.iter().any(|x| !x.is_finite()) {
        return Err(FrameError::NonFiniteInput);
    }
    let norm = a.norm();
    let mut rows: Vec<RowVector4<f64>> = Vec::with_capacity(3);
    if norm > 0.0 {
        let svd = a.svd(false, true);
        let v_t = svd.v_t.expect("requested right singular vectors");
        let mut dirs: Vec<(f64, RowVector4<f64>)> = svd
            .singular_values
            .iter()
            .copied()
            .zip(v_t.row_iter().map(|r| r.into_owned()))
            .collect();
        dirs.sort_by(|x, y| y.0.total_cmp(&x.0));
        rows.extend(
            dirs.into_iter()
                .filter(|(s, _)| *s > tol * norm)
                .map(|(_, v)| fix_sign(v)),
        );
    }
    let rank = rows.len();
    complete_with_axes(&mut rows, &[0, 1, 2, 3], 3);
    for r in rows.iter_mut().skip(rank) {
        *r = fix_sign(*r);
    }
    let frame = Matrix3x4::from_rows(&rows);
    let phi = a * frame.transpose();
    let residual = (a - phi * frame).norm();
    Ok(FrameDecomposition {
        phi,
        frame,
        rank,
        residual,
    })
}

/// Parses whitespace-separated snapshot blocks: three rows of four reals
/// each, blocks separated by blank lines.
pub fn parse_snapshots(text: &str) -> Result<Vec<GaugeSnapshot>, FrameError> {
    let mut out = Vec::new();
    let mut block: Vec<[f64; 4]> = Vec::new();
    let mut block_start = 0;
    let flush = |block: &mut Vec<[f64; 4]>, start: usize, out: &mut Vec<GaugeSnapshot>| {
        if block.is_empty() {
            return Ok(());
        }
        if block.len() != 3 {
            return Err(FrameError::Snapshot {
                line: start,
                reason: format!("block has {} rows, expected 3", block.len()),
            });
        }
        let rows: Vec<RowVector4<f64>> = block.iter().map(|r| RowVector4::from_row_slice(r)).collect();
        out.push(GaugeSnapshot(Matrix3x4::from_rows(&rows)));
        block.clear();
        Ok(())
    };
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() {
            flush(&mut block, block_start, &mut out)?;
            continue;
        }
        if block.is_empty() {
            block_start = line_no;
        }
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| FrameError::Snapshot {
                    line: line_no,
                    reason: format!("`{tok}` is not a number"),
                })
            })
            .collect::<Result<_, _>>()?;
        if values.len() != 4 {
            return Err(FrameError::Snapshot {
                line: line_no,
                reason: format!("row has {} entries, expected 4", values.len()),
            });
        }
        if block.len() == 3 {
            return Err(FrameError::Snapshot {
                line: line_no,
                reason: "block has more than 3 rows".into(),
            });
        }
        block.push([values[0], values[1], values[2], values[3]]);
    }
    flush(&mut block, block_start, &mut out)?;
    Ok(out)
}

pub type ComplexVector4 = Vector4<Complex64>;

/// Bilinear product without conjugation.
pub fn dot(x: &ComplexVector4, y: &ComplexVector4) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b).sum()
}

/// Hermitian product `Σ x̄_μ y_μ`.
pub fn hdot(x: &ComplexVector4, y: &ComplexVector4) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

pub fn conj(x: &ComplexVector4) -> ComplexVector4 {
    x.map(|z| z.conj())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OffDiagonalSplit {
    pub psi1: Complex64,
    pub psi2: Complex64,
    pub e: ComplexVector4,
    /// `‖W − ψ₁e − ψ₂*e*‖`.
    pub residual: f64,
}

impl OffDiagonalSplit {
    pub fn reconstruct(&self) -> ComplexVector4 {
        self.e * self.psi1 + conj(&self.e) * self.psi2.conj()
    }
}

impl fmt::Display for OffDiagonalSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |z: Complex64| format!("{} {}", sci(z.re), sci(z.im));
        writeln!(f, "psi1={}", c(self.psi1))?;
        writeln!(f, "psi2={}", c(self.psi2))?;
        let e: Vec<String> = self.e.iter().map(|z| c(*z)).collect();
        writeln!(f, "e={}", e.join(" "))?;
        writeln!(f, "residual={}", sci(self.residual))
    }
}

fn check_frame(e: &ComplexVector4, tol: f64) -> Result<(), FrameError> {
    let null = dot(e, e).norm();
    let norm = (hdot(e, e) - Complex64::new(1.0, 0.0)).norm();
    if null > tol || norm > tol {
        return Err(FrameError::InvalidFrame { null, norm });
    }
    Ok(())
}

/// `ψ₁ = e*·W`, `ψ₂ = (e·W)*`, from contracting `W = ψ₁e + ψ₂*e*` with
/// `e*` and `e`.
pub fn extract_offdiagonal(w: &ComplexVector4, e: &ComplexVector4, tol: f64) -> Result<OffDiagonalSplit, FrameError> {
    if !(tol > 0.0) {
        return Err(FrameError::InvalidTolerance(tol));
    }
    if w.iter().chain(e.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(FrameError::NonFiniteInput);
    }
    check_frame(e, tol)?;
    let psi1 = hdot(e, w);
    let psi2 = dot(e, w).conj();
    let mut split = OffDiagonalSplit {
        psi1,
        psi2,
        e: *e,
        residual: 0.0,
    };
    split.residual = (w - split.reconstruct()).norm();
    Ok(split)
}

/// `e = (u + iv)/√2` for real orthonormal `u`, `v`.
pub fn null_frame(u: &Vector4<f64>, v: &Vector4<f64>) -> ComplexVector4 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexVector4::from_fn(|i, _| Complex64::new(u[i] * s, v[i] * s))
}

/// Fits a null frame to `W` and splits it.
///
/// With `e = (u + iv)/√2`, the span of `{e, e*}` is the complexified real
/// plane `span{u, v}`, so the best frame spans the dominant 2-plane of
/// `Re(W)Re(W)ᵀ + Im(W)Im(W)ᵀ`. When that matrix has rank below 2 the
/// plane is completed with coordinate axes, taken in order of decreasing
/// weight in the dominant direction. Each of `u`, `v` is signed so its
/// first nonzero entry is positive. `W = 0` gives `u = x̂₁`, `v = x̂₂`.
pub fn fit_null_frame(w: &ComplexVector4, tol: f64) -> Result<OffDiagonalSplit, FrameError> {
    if !(tol > 0.0) {
        return Err(FrameError::InvalidTolerance(tol));
    }
    if w.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(FrameError::NonFiniteInput);
    }
    let re: Vector4<f64> = w.map(|z| z.re);
    let im: Vector4<f64> = w.map(|z| z.im);
    let m: Matrix4<f64> = re * re.transpose() + im * im.transpose();

    let mut rows: Vec<RowVector4<f64>> = Vec::with_capacity(2);
    let mut order = vec![0, 1, 2, 3];
    if m.norm() > 0.0 {
        let eig = SymmetricEigen::new(m);
        let mut pairs: Vec<(f64, RowVector4<f64>)> = eig
            .eigenvalues
            .iter()
            .copied()
            .zip(eig.eigenvectors.column_iter().map(|c| c.transpose()))
            .collect();
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
        let top = pairs[0].0;
        rows.extend(
            pairs
                .into_iter()
                .take(2)
                .filter(|(l, _)| *l > tol * top)
                .map(|(_, v)| fix_sign(v)),
        );
        let lead = rows[0];
        order.sort_by(|&i, &j| lead[j].abs().total_cmp(&lead[i].abs()).then(i.cmp(&j)));
    }
    let kept = rows.len();
    complete_with_axes(&mut rows, &order, 2);
    for r in rows.iter_mut().skip(kept) {
        *r = fix_sign(*r);
    }
    let e = null_frame(&rows[0].transpose(), &rows[1].transpose());
    extract_offdiagonal(w, &e, tol)
}
