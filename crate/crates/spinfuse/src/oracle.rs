//! Dense reference unitaries for small chains.
//!
//! Spin 1 is the most significant bit of a basis index. Gates are applied
//! column by column as in-place updates on pairs or quadruples of entries,
//! so no Kronecker product is ever formed.

use crate::circuit::{Circuit, Frame};
use crate::error::{Error, Result};
use crate::gates::{rotation_matrix, Gate, TfxyGate, M4};
use crate::su2::Su2;
use num_complex::Complex64 as C;
use rayon::prelude::*;

pub const MAX_SPINS: usize = 12;

/// A `2^N × 2^N` matrix stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary {
    n_spins: usize,
    data: Vec<C>,
}

impl DenseUnitary {
    pub fn identity(n_spins: usize) -> Result<DenseUnitary> {
        check_size(n_spins)?;
        let dim = 1usize << n_spins;
        let mut data = vec![C::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = C::new(1.0, 0.0);
        }
        Ok(DenseUnitary { n_spins, data })
    }

    /// Builds from row-major entries.
    pub fn from_rows(rows: &[Vec<C>]) -> Result<DenseUnitary> {
        let dim = rows.len();
        if !dim.is_power_of_two() || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument(format!("{dim}-row matrix is not square of size 2^N")));
        }
        let n_spins = dim.trailing_zeros() as usize;
        check_size(n_spins)?;
        let mut data = vec![C::new(0.0, 0.0); dim * dim];
        for (r, row) in rows.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                data[c * dim + r] = x;
            }
        }
        Ok(DenseUnitary { n_spins, data })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        1 << self.n_spins
    }

    pub fn get(&self, row: usize, col: usize) -> C {
        self.data[col * self.dim() + row]
    }

    pub fn adjoint(&self) -> DenseUnitary {
        let dim = self.dim();
        let mut data = vec![C::new(0.0, 0.0); dim * dim];
        for c in 0..dim {
            for r in 0..dim {
                data[r * dim + c] = self.data[c * dim + r].conj();
            }
        }
        DenseUnitary { n_spins: self.n_spins, data }
    }

    /// `‖U†U − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        let dim = self.dim();
        let cols: Vec<&[C]> = self.data.chunks(dim).collect();
        let mut acc = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let dot: C = cols[i].iter().zip(cols[j]).map(|(a, b)| a.conj() * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                acc += (dot - target).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Applies `gates` after the current contents.
    pub fn apply(&mut self, gates: &[Gate], frame: Frame) -> Result<()> {
        let n = self.n_spins;
        let ops = gates.iter().map(|g| LocalOp::of(g, frame, n)).collect::<Result<Vec<_>>>()?;
        let dim = self.dim();
        self.data.par_chunks_mut(dim).for_each(|col| {
            for op in &ops {
                op.apply(col, n);
            }
        });
        Ok(())
    }
}

impl DenseUnitary {
    /// Applies a 2×2 matrix to spin `q` after the current contents.
    pub fn apply_one(&mut self, q: usize, m: [[C; 2]; 2]) -> Result<()> {
        self.check_spin(q)?;
        let op = LocalOp::One { site: q, m };
        let (n, dim) = (self.n_spins, self.dim());
        self.data.par_chunks_mut(dim).for_each(|col| op.apply(col, n));
        Ok(())
    }

    /// Applies a 4×4 matrix to spins `(q1, q2)`, `q1` the more significant
    /// index of `m`. The spins need not be adjacent.
    pub fn apply_two(&mut self, q1: usize, q2: usize, m: M4) -> Result<()> {
        self.check_spin(q1)?;
        self.check_spin(q2)?;
        if q1 == q2 {
            return Err(Error::InvalidSite(format!("two-spin operator on spin {q1} twice")));
        }
        let n = self.n_spins;
        let (hi, lo) = (1usize << (n - q1), 1usize << (n - q2));
        self.data.par_chunks_mut(1 << n).for_each(|col| {
            for i in (0..col.len()).filter(|i| i & (hi | lo) == 0) {
                let idx = [i, i | lo, i | hi, i | hi | lo];
                let v = idx.map(|k| col[k]);
                for (r, &k) in idx.iter().enumerate() {
                    col[k] = m[r].iter().zip(&v).map(|(a, b)| a * b).sum();
                }
            }
        });
        Ok(())
    }

    fn check_spin(&self, q: usize) -> Result<()> {
        if q == 0 || q > self.n_spins {
            return Err(Error::InvalidSite(format!("spin {q} outside 1..={}", self.n_spins)));
        }
        Ok(())
    }
}

fn check_size(n_spins: usize) -> Result<()> {
    if n_spins > MAX_SPINS {
        return Err(Error::SizeLimit(format!("dense oracle supports at most {MAX_SPINS} spins, got {n_spins}")));
    }
    Ok(())
}

enum LocalOp {
    One { site: usize, m: [[C; 2]; 2] },
    Two { site: usize, m: M4 },
    Match { site: usize, g: TfxyGate },
}

impl LocalOp {
    fn of(g: &Gate, frame: Frame, n: usize) -> Result<LocalOp> {
        let (s, w) = (g.site(), g.span());
        if s == 0 || s + w - 1 > n {
            return Err(Error::InvalidSite(format!("{g:?} does not fit on {n} spins")));
        }
        Ok(match g {
            Gate::Rot(r) if r.arity == 1 => {
                let m = rotation_matrix(r);
                LocalOp::One { site: s, m: [[m[0][0], m[0][1]], [m[1][0], m[1][1]]] }
            }
            Gate::Rot(r) => LocalOp::Two { site: s, m: to4(&rotation_matrix(r)) },
            Gate::TwoAxis(t) => {
                let (a, b) = t.parts();
                LocalOp::Two { site: s, m: mul4(&to4(&rotation_matrix(&b)), &to4(&rotation_matrix(&a))) }
            }
            Gate::Tfxy(t) if frame == Frame::Xy => LocalOp::Match { site: s, g: *t },
            Gate::Tfxy(t) => LocalOp::Two { site: s, m: conjugate(&t.dense(), &frame.conjugator()) },
        })
    }

    fn apply(&self, col: &mut [C], n: usize) {
        match self {
            LocalOp::One { site, m } => {
                let bit = 1usize << (n - site);
                for i in (0..col.len()).filter(|i| i & bit == 0) {
                    let (x, y) = (col[i], col[i | bit]);
                    col[i] = m[0][0] * x + m[0][1] * y;
                    col[i | bit] = m[1][0] * x + m[1][1] * y;
                }
            }
            LocalOp::Two { site, m } => {
                let (hi, lo) = (1usize << (n - site), 1usize << (n - site - 1));
                for i in (0..col.len()).filter(|i| i & (hi | lo) == 0) {
                    let idx = [i, i | lo, i | hi, i | hi | lo];
                    let v = idx.map(|k| col[k]);
                    for (r, &k) in idx.iter().enumerate() {
                        col[k] = m[r].iter().zip(&v).map(|(a, b)| a * b).sum();
                    }
                }
            }
            LocalOp::Match { site, g } => {
                let (hi, lo) = (1usize << (n - site), 1usize << (n - site - 1));
                for i in (0..col.len()).filter(|i| i & (hi | lo) == 0) {
                    let (k00, k01, k10, k11) = (i, i | lo, i | hi, i | hi | lo);
                    let (x, y) = (col[k00], col[k11]);
                    col[k00] = g.a * x - g.d.conj() * y;
                    col[k11] = g.d * x + g.a.conj() * y;
                    let (x, y) = (col[k01], col[k10]);
                    col[k01] = g.b * x - g.g.conj() * y;
                    col[k10] = g.g * x + g.b.conj() * y;
                }
            }
        }
    }
}

fn to4(m: &[Vec<C>]) -> M4 {
    let mut out = [[C::new(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        out[r].copy_from_slice(&m[r]);
    }
    out
}

fn mul4(a: &M4, b: &M4) -> M4 {
    let mut out = [[C::new(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = (0..4).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    out
}

// (V⊗V)·m·(V⊗V)†
fn conjugate(m: &M4, v: &Su2) -> M4 {
    let v2 = v.matrix();
    let mut vv = [[C::new(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            vv[r][c] = v2[r >> 1][c >> 1] * v2[r & 1][c & 1];
        }
    }
    let mut vh = [[C::new(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            vh[r][c] = vv[c][r].conj();
        }
    }
    mul4(&mul4(&vv, m), &vh)
}

/// Unitary of a gate list in time order (the last gate is the leftmost factor).
pub fn gates_unitary(n_spins: usize, frame: Frame, gates: &[Gate]) -> Result<DenseUnitary> {
    let mut u = DenseUnitary::identity(n_spins)?;
    u.apply(gates, frame)?;
    Ok(u)
}

pub fn circuit_unitary(c: &Circuit) -> Result<DenseUnitary> {
    gates_unitary(c.n_spins, c.frame, &c.gates)
}

pub fn frobenius_distance(u: &DenseUnitary, v: &DenseUnitary) -> Result<f64> {
    check_dims(u, v)?;
    Ok(u.data.iter().zip(&v.data).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
}

/// `min_φ ‖U − e^{iφ}V‖_F`.
pub fn phase_aligned_distance(u: &DenseUnitary, v: &DenseUnitary) -> Result<f64> {
    check_dims(u, v)?;
    let overlap: C = u.data.iter().zip(&v.data).map(|(a, b)| b.conj() * a).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { C::new(1.0, 0.0) };
    Ok(u.data.iter().zip(&v.data).map(|(a, b)| (a - phase * b).norm_sqr()).sum::<f64>().sqrt())
}

fn check_dims(u: &DenseUnitary, v: &DenseUnitary) -> Result<()> {
    if u.n_spins != v.n_spins {
        return Err(Error::InvalidArgument(format!("dimension mismatch: {} vs {} spins", u.n_spins, v.n_spins)));
    }
    Ok(())
}
