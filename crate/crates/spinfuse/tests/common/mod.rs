#![allow(dead_code)]

use num_complex::Complex64 as C;
use spinfuse::gates::PauliAxis;

pub type Mat = Vec<Vec<C>>;

pub fn zeros(n: usize) -> Mat {
    vec![vec![C::new(0.0, 0.0); n]; n]
}

pub fn eye(n: usize) -> Mat {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C::new(1.0, 0.0);
    }
    m
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut r = zeros(n);
    for i in 0..n {
        for k in 0..n {
            let x = a[i][k];
            if x == C::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                r[i][j] += x * b[k][j];
            }
        }
    }
    r
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (n, m) = (a.len(), b.len());
    let mut r = zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    r[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    r
}

pub fn dist(a: &Mat, b: &Mat) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn adjoint(a: &Mat) -> Mat {
    let n = a.len();
    let mut r = zeros(n);
    for i in 0..n {
        for j in 0..n {
            r[i][j] = a[j][i].conj();
        }
    }
    r
}

pub fn pauli(axis: PauliAxis) -> Mat {
    let o = C::new(0.0, 0.0);
    let one = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    match axis {
        PauliAxis::X => vec![vec![o, one], vec![one, o]],
        PauliAxis::Y => vec![vec![o, -i], vec![i, o]],
        PauliAxis::Z => vec![vec![one, o], vec![o, -one]],
    }
}

/// `exp(−i θ/2 · P)` for an involutory Hermitian `P`, via trig.
pub fn expi(p: &Mat, theta: f64) -> Mat {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let n = p.len();
    let mut r = zeros(n);
    for i in 0..n {
        for j in 0..n {
            r[i][j] = C::new(0.0, -s) * p[i][j];
        }
        r[i][i] += c;
    }
    r
}

pub fn rot1(axis: PauliAxis, theta: f64) -> Mat {
    expi(&pauli(axis), theta)
}

pub fn rot2(axis: PauliAxis, theta: f64) -> Mat {
    expi(&kron(&pauli(axis), &pauli(axis)), theta)
}

/// Embeds a `2^k × 2^k` operator acting on spins `site..site+k` of `n` spins.
pub fn embed(op: &Mat, site: usize, n: usize) -> Mat {
    let k = op.len().trailing_zeros() as usize;
    let left = eye(1 << (site - 1));
    let right = eye(1 << (n + 1 - site - k));
    kron(&kron(&left, op), &right)
}

pub fn from4(m: &[[C; 4]; 4]) -> Mat {
    m.iter().map(|r| r.to_vec()).collect()
}

/// Product of operators given in time order.
pub fn time_product(ops: &[Mat]) -> Mat {
    let mut u = eye(ops[0].len());
    for op in ops {
        u = mul(op, &u);
    }
    u
}

pub fn gate_dense(g: &spinfuse::gates::Gate, n: usize) -> Mat {
    use spinfuse::gates::{rotation_matrix, Gate};
    match g {
        Gate::Rot(r) => embed(&rotation_matrix(r), r.site, n),
        Gate::TwoAxis(t) => {
            let (a, b) = t.parts();
            mul(&embed(&rotation_matrix(&b), b.site, n), &embed(&rotation_matrix(&a), a.site, n))
        }
        Gate::Tfxy(t) => embed(&from4(&t.dense()), t.site, n),
    }
}

pub fn gates_dense(gates: &[spinfuse::gates::Gate], n: usize) -> Mat {
    let mut u = eye(1 << n);
    for g in gates {
        u = mul(&gate_dense(g, n), &u);
    }
    u
}

pub fn scale(a: &Mat, s: C) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, q)| r.iter().zip(q).map(|(x, y)| x + y).collect()).collect()
}

/// `exp(−i t H)` by scaling and squaring a Taylor series.
pub fn expm_herm(h: &Mat, t: f64) -> Mat {
    let norm: f64 = h.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt() * t.abs();
    let k = ((2.0 * norm).log2().ceil() as i32).max(0);
    let a = scale(h, C::new(0.0, -t / f64::powi(2.0, k)));
    let mut term = eye(h.len());
    let mut sum = eye(h.len());
    for j in 1..30 {
        term = scale(&mul(&term, &a), C::new(1.0 / j as f64, 0.0));
        sum = add(&sum, &term);
    }
    for _ in 0..k {
        sum = mul(&sum, &sum);
    }
    sum
}

/// `σ^α_i` on `n` spins.
pub fn sigma(axis: PauliAxis, i: usize, n: usize) -> Mat {
    embed(&pauli(axis), i, n)
}

/// `σ^α_i σ^α_{i+1}` on `n` spins.
pub fn sigma2(axis: PauliAxis, i: usize, n: usize) -> Mat {
    embed(&kron(&pauli(axis), &pauli(axis)), i, n)
}
