//! Scalar kernels on half-angle pairs and SU(2) first columns.
//!
//! An [`Angle`] stores `(cos θ/2, sin θ/2)`. An [`Su2`] stores the first
//! column `(α, β)` of `[[α, −β̄], [β, ᾱ]]`. Rotations follow
//! `R^a(θ) = exp(−i σ^a θ/2)`.
//!
//! Euler factorizations are computed natively for the ZYZ and YZY patterns;
//! the remaining four patterns are conjugated onto them by a cyclic
//! relabeling of the Pauli axes. Nothing here calls a trigonometric
//! function except [`Angle::from_radians`] and [`Angle::radians`].

use crate::error::{Error, Result};
use crate::gates::PauliAxis;
use num_complex::Complex64 as C;

const DEGENERATE: f64 = 1e-13;

/// Half-angle pair `(cos θ/2, sin θ/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    c: f64,
    s: f64,
}

impl Angle {
    pub const ZERO: Angle = Angle { c: 1.0, s: 0.0 };

    pub fn from_radians(theta: f64) -> Result<Angle> {
        if !theta.is_finite() {
            return Err(Error::InvalidArgument(format!("angle {theta} is not finite")));
        }
        let h = 0.5 * theta;
        Ok(Angle { c: h.cos(), s: h.sin() })
    }

    /// Builds a pair from unnormalized components. `(0, 0)` maps to zero.
    pub fn from_pair(c: f64, s: f64) -> Angle {
        givens(c, s)
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Radian value in `(−2π, 2π]`. Boundary use only.
    pub fn radians(&self) -> f64 {
        2.0 * self.s.atan2(self.c)
    }

    pub fn fuse(self, other: Angle) -> Angle {
        fuse_angles(self, other)
    }

    pub fn neg(self) -> Angle {
        Angle { c: self.c, s: -self.s }
    }

    /// The angle θ/2, on the branch with `cos θ/4 ≥ 0` up to the choice of
    /// the better-conditioned normalization vector.
    pub fn half(self) -> Angle {
        if self.c >= 0.0 {
            givens(1.0 + self.c, self.s)
        } else {
            givens(self.s, 1.0 - self.c)
        }
    }

    /// `e^{iθ/2}` as a complex number.
    pub fn phasor(self) -> C {
        C::new(self.c, self.s)
    }

    pub fn from_phasor(z: C) -> Angle {
        givens(z.re, z.im)
    }

    fn renorm(c: f64, s: f64) -> Angle {
        let n = (c * c + s * s).sqrt();
        Angle { c: c / n, s: s / n }
    }
}

pub fn fuse_angles(a: Angle, b: Angle) -> Angle {
    Angle::renorm(a.c * b.c - a.s * b.s, a.s * b.c + a.c * b.s)
}

/// `√(x² + y²)` without `hypot` on unit-scale inputs.
#[inline]
pub fn hyp(x: f64, y: f64) -> f64 {
    let r = (x * x + y * y).sqrt();
    if r > 1e-150 && r < 1e150 {
        r
    } else {
        x.hypot(y)
    }
}

#[inline]
pub fn cabs(z: C) -> f64 {
    hyp(z.re, z.im)
}

/// `Σ x² − 1` in double-double arithmetic.
fn unit_defect(xs: [f64; 4]) -> f64 {
    let (mut hi, mut lo) = (-1.0f64, 0.0f64);
    for x in xs {
        let p = x * x;
        let e = x.mul_add(x, -p);
        let s = hi + p;
        let bb = s - hi;
        lo += (hi - (s - bb)) + (p - bb) + e;
        hi = s;
    }
    hi + lo
}

/// Rotation `(c, s)` with `[[c, s], [−s, c]]·(x, y)ᵀ = (r, 0)ᵀ`, `r ≥ 0`.
/// `givens(0, 0)` is the identity.
pub fn givens(x: f64, y: f64) -> Angle {
    if y == 0.0 {
        return if x >= 0.0 { Angle { c: 1.0, s: 0.0 } } else { Angle { c: -1.0, s: 0.0 } };
    }
    if x == 0.0 {
        return if y > 0.0 { Angle { c: 0.0, s: 1.0 } } else { Angle { c: 0.0, s: -1.0 } };
    }
    let r = hyp(x, y);
    Angle { c: x / r, s: y / r }
}

/// Unit-determinant 2×2 unitary stored by its first column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2 {
    pub alpha: C,
    pub beta: C,
}

impl Su2 {
    pub fn new(alpha: C, beta: C) -> Su2 {
        Su2 { alpha, beta }
    }

    pub fn identity() -> Su2 {
        Su2 { alpha: C::new(1.0, 0.0), beta: C::new(0.0, 0.0) }
    }

    /// Builds from a nonzero column, rescaled to unit norm.
    pub fn from_column(alpha: C, beta: C) -> Su2 {
        let n = hyp(cabs(alpha), cabs(beta));
        if n == 0.0 {
            return Su2::identity();
        }
        let (a, b) = (alpha / n, beta / n);
        let f = 1.0 - 0.5 * unit_defect([a.re, a.im, b.re, b.im]);
        Su2 { alpha: a * f, beta: b * f }
    }

    pub fn normalized(self) -> Su2 {
        Su2::from_column(self.alpha, self.beta)
    }

    pub fn matrix(&self) -> [[C; 2]; 2] {
        [[self.alpha, -self.beta.conj()], [self.beta, self.alpha.conj()]]
    }

    pub fn adjoint(&self) -> Su2 {
        Su2 { alpha: self.alpha.conj(), beta: -self.beta }
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Su2) -> Su2 {
        let (a, b) = (self.alpha, self.beta);
        let (c, d) = (rhs.alpha, rhs.beta);
        Su2 { alpha: a * c - b.conj() * d, beta: b * c + a.conj() * d }
    }

    pub fn rotation(axis: PauliAxis, t: Angle) -> Su2 {
        match axis {
            PauliAxis::X => Su2 { alpha: C::new(t.c, 0.0), beta: C::new(0.0, -t.s) },
            PauliAxis::Y => Su2 { alpha: C::new(t.c, 0.0), beta: C::new(t.s, 0.0) },
            PauliAxis::Z => Su2 { alpha: C::new(t.c, -t.s), beta: C::new(0.0, 0.0) },
        }
    }

    pub fn norm_defect(&self) -> f64 {
        (self.alpha.norm_sqr() + self.beta.norm_sqr() - 1.0).abs()
    }
}

/// Outer and middle axes of an Euler pattern such as ZYZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AxisPattern {
    pub outer: PauliAxis,
    pub middle: PauliAxis,
}

impl AxisPattern {
    pub const ZYZ: AxisPattern = AxisPattern { outer: PauliAxis::Z, middle: PauliAxis::Y };
    pub const YZY: AxisPattern = AxisPattern { outer: PauliAxis::Y, middle: PauliAxis::Z };

    pub fn new(outer: PauliAxis, middle: PauliAxis) -> Result<AxisPattern> {
        if outer == middle {
            return Err(Error::InvalidArgument(format!("Euler pattern needs two distinct axes, got {outer:?}{outer:?}")));
        }
        Ok(AxisPattern { outer, middle })
    }

    pub fn swapped(self) -> AxisPattern {
        AxisPattern { outer: self.middle, middle: self.outer }
    }
}

/// `R^outer(t1) · R^middle(t2) · R^outer(t3)` in matrix order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerTriple {
    pub pattern: AxisPattern,
    pub t1: Angle,
    pub t2: Angle,
    pub t3: Angle,
}

fn cycle(a: PauliAxis) -> PauliAxis {
    match a {
        PauliAxis::X => PauliAxis::Y,
        PauliAxis::Y => PauliAxis::Z,
        PauliAxis::Z => PauliAxis::X,
    }
}

// V σx V† = σy, V σy V† = σz, V σz V† = σx.
fn cycler() -> Su2 {
    Su2 { alpha: C::new(0.5, -0.5), beta: C::new(0.5, -0.5) }
}

/// Number of cyclic shifts that carry `p` onto ZYZ or YZY.
fn shifts(p: AxisPattern) -> usize {
    let mut q = p;
    for k in 0..3 {
        if q == AxisPattern::ZYZ || q == AxisPattern::YZY {
            return k;
        }
        q = AxisPattern { outer: cycle(q.outer), middle: cycle(q.middle) };
    }
    unreachable!("every pattern of distinct axes is a cyclic image of ZYZ or YZY")
}

fn shifted(p: AxisPattern, k: usize) -> AxisPattern {
    let mut q = p;
    for _ in 0..k {
        q = AxisPattern { outer: cycle(q.outer), middle: cycle(q.middle) };
    }
    q
}

/// `V^k M V^{−k}`.
fn conj_shift(m: &Su2, k: usize) -> Su2 {
    let v = cycler();
    let mut out = *m;
    for _ in 0..k {
        out = v.mul(&out).mul(&v.adjoint());
    }
    out
}

/// `V^{−k} M V^k`.
fn unconj_shift(m: &Su2, k: usize) -> Su2 {
    let v = cycler();
    let mut out = *m;
    for _ in 0..k {
        out = v.adjoint().mul(&out).mul(&v);
    }
    out
}

pub fn su2_from_euler(t: &EulerTriple) -> Su2 {
    let k = shifts(t.pattern);
    let native = shifted(t.pattern, k);
    let (c1, s1) = (t.t1.c, t.t1.s);
    let (c2, s2) = (t.t2.c, t.t2.s);
    let (c3, s3) = (t.t3.c, t.t3.s);
    let m = if native == AxisPattern::ZYZ {
        let (p, q) = (c1 * c3 - s1 * s3, s1 * c3 + c1 * s3);
        let (r, u) = (c1 * c3 + s1 * s3, s1 * c3 - c1 * s3);
        Su2 { alpha: C::new(c2 * p, -c2 * q), beta: C::new(s2 * r, s2 * u) }
    } else {
        let (p, q) = (c1 * c3 - s1 * s3, c1 * c3 + s1 * s3);
        let (r, u) = (s1 * c3 + c1 * s3, s1 * c3 - c1 * s3);
        Su2 { alpha: C::new(c2 * p, -s2 * q), beta: C::new(c2 * r, -s2 * u) }
    };
    unconj_shift(&m, k)
}

pub fn euler_from_su2(m: &Su2, target: AxisPattern) -> EulerTriple {
    let k = shifts(target);
    let native = shifted(target, k);
    let n = conj_shift(m, k);
    let (t1, t2, t3) = if native == AxisPattern::ZYZ { zyz_angles(&n) } else { yzy_angles(&n) };
    EulerTriple { pattern: target, t1, t2, t3 }
}

fn unit(z: C, r: f64) -> C {
    if r == 0.0 {
        C::new(1.0, 0.0)
    } else {
        z / r
    }
}

// α = c2·ū·w, β = s2·u·w with u = e^{iθ1/2}, w = e^{−iθ3/2}.
fn zyz_angles(m: &Su2) -> (Angle, Angle, Angle) {
    let (ar, br) = (cabs(m.alpha), cabs(m.beta));
    let t2 = givens(ar, br);
    let (p, q) = (unit(m.alpha, ar), unit(m.beta, br));
    let u = if br == 0.0 {
        p.conj()
    } else if ar == 0.0 {
        q
    } else {
        let v1 = (p.re + q.re, q.im - p.im);
        let v1p = (-(p.im + q.im), q.re - p.re);
        let (n1, n1p) = (hyp(v1.0, v1.1), hyp(v1p.0, v1p.1));
        if n1.max(n1p) < DEGENERATE {
            C::new(1.0, 0.0)
        } else if n1 >= n1p {
            givens(v1.0, v1.1).phasor()
        } else {
            givens(v1p.0, v1p.1).phasor()
        }
    };
    let u = Angle::from_phasor(u);
    let w = if br == 0.0 || ar == 0.0 { C::new(1.0, 0.0) } else { u.phasor() * p };
    let t3 = Angle::from_pair(w.re, -w.im);
    (u, t2, t3)
}

// α = cb·cos((a+c)/2) − i·sb·cos((a−c)/2), β = cb·sin((a+c)/2) − i·sb·sin((a−c)/2).
fn yzy_angles(m: &Su2) -> (Angle, Angle, Angle) {
    let (ar, ai, br, bi) = (m.alpha.re, m.alpha.im, m.beta.re, m.beta.im);
    let cb = hyp(ar, br);
    let sb = hyp(ai, bi);
    let tb = givens(cb, sb);
    let plus = givens(ar, br);
    let minus = givens(-ai, -bi);
    if sb == 0.0 {
        return (plus, tb, Angle::ZERO);
    }
    if cb == 0.0 {
        return (minus, tb, Angle::ZERO);
    }
    let e = plus.phasor() * minus.phasor();
    let a = Angle::from_phasor(e).half();
    let c = Angle::from_phasor(plus.phasor() * a.phasor().conj());
    (a, tb, c)
}

/// Dual Euler triple with outer and middle axes swapped and equal product.
pub fn turnover_euler(t: &EulerTriple) -> EulerTriple {
    euler_from_su2(&su2_from_euler(t), t.pattern.swapped())
}
