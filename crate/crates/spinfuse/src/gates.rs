//! Gate algebra on nearest-neighbor spin chains.
//!
//! Sites are 1-based. A two-spin gate at site `i` acts on spins `i, i+1`.
//! Triples passed to turnovers are in time order (first applied first).
//! A V pattern has the outer gates at `i` and the middle one at `i+1`;
//! a hat pattern mirrors it.
//!
//! Three families reduce to one generic rewrite on a *generator chain*:
//! Kitaev rotations, TFIM rotations (field on spin `j` at chain position
//! `2j−1`, coupling on bond `j` at `2j`) and two-axis XY gates (two commuting
//! Kitaev chains). TFXY matchgates carry their own block turnover.

use crate::error::{Error, Result};
use crate::su2::{cabs, euler_from_su2, hyp, su2_from_euler, turnover_euler, Angle, AxisPattern, EulerTriple, Su2};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::fmt;

pub type M2 = [[C; 2]; 2];
pub type M4 = [[C; 4]; 4];

const BLOCK_NORM_TOL: f64 = 1e-10;
const MATCHGATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn letter(self) -> char {
        match self {
            PauliAxis::X => 'x',
            PauliAxis::Y => 'y',
            PauliAxis::Z => 'z',
        }
    }

    pub fn from_char(c: char) -> Result<PauliAxis> {
        match c.to_ascii_lowercase() {
            'x' => Ok(PauliAxis::X),
            'y' => Ok(PauliAxis::Y),
            'z' => Ok(PauliAxis::Z),
            _ => Err(Error::InvalidArgument(format!("unknown Pauli axis '{c}'"))),
        }
    }

    pub fn matrix(self) -> M2 {
        let o = C::new(0.0, 0.0);
        let one = C::new(1.0, 0.0);
        let i = C::new(0.0, 1.0);
        match self {
            PauliAxis::X => [[o, one], [one, o]],
            PauliAxis::Y => [[o, -i], [i, o]],
            PauliAxis::Z => [[one, o], [o, -one]],
        }
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Order of the three gates relative to the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    VeeToHat,
    HatToVee,
}

impl Direction {
    fn check(self, outer: usize, middle: usize) -> Result<()> {
        let ok = match self {
            Direction::VeeToHat => middle == outer + 1,
            Direction::HatToVee => middle + 1 == outer,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidTurnover(format!("positions ({outer}, {middle}, {outer}) do not form a {self:?} pattern")))
        }
    }
}

/// `R^α_i(θ)` (arity 1) or `R^{αα}_i(θ)` (arity 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationGate {
    pub axis: PauliAxis,
    pub arity: u8,
    pub site: usize,
    pub angle: Angle,
}

impl RotationGate {
    pub fn one(axis: PauliAxis, site: usize, angle: Angle) -> RotationGate {
        RotationGate { axis, arity: 1, site, angle }
    }

    pub fn two(axis: PauliAxis, site: usize, angle: Angle) -> RotationGate {
        RotationGate { axis, arity: 2, site, angle }
    }

    pub fn with_angle(&self, angle: Angle) -> RotationGate {
        RotationGate { angle, ..*self }
    }

    fn same_slot(&self, other: &RotationGate) -> bool {
        self.axis == other.axis && self.arity == other.arity && self.site == other.site
    }
}

/// Dense matrix of a rotation gate, 2×2 or 4×4 (first spin most significant).
pub fn rotation_matrix(g: &RotationGate) -> Vec<Vec<C>> {
    let (c, s) = (g.angle.c(), g.angle.s());
    let p = g.axis.matrix();
    let dim = if g.arity == 1 { 2 } else { 4 };
    let mut out = vec![vec![C::new(0.0, 0.0); dim]; dim];
    for r in 0..dim {
        for k in 0..dim {
            let sigma = if g.arity == 1 { p[r][k] } else { p[r >> 1][k >> 1] * p[r & 1][k & 1] };
            let id = if r == k { c } else { 0.0 };
            out[r][k] = C::new(id, 0.0) - C::new(0.0, s) * sigma;
        }
    }
    out
}

/// Fuses two gates on the same slot. Rotations about one axis commute.
pub fn fuse_same(g1: &RotationGate, g2: &RotationGate) -> Result<RotationGate> {
    if !g1.same_slot(g2) {
        return Err(Error::InvalidFusion(format!("{g1:?} and {g2:?} do not share axis, arity and site")));
    }
    Ok(g1.with_angle(g1.angle.fuse(g2.angle)))
}

/// Generic turnover on a generator chain: `(t1@p, t2@q, t3@p) → (c@q, b@p, a@q)`.
fn chain_turnover(t1: Angle, t2: Angle, t3: Angle) -> (Angle, Angle, Angle) {
    let t = EulerTriple { pattern: AxisPattern::ZYZ, t1: t3, t2, t3: t1 };
    let d = turnover_euler(&t);
    (d.t3, d.t2, d.t1)
}

fn check_pauli_triple(a: &RotationGate, b: &RotationGate, c: &RotationGate) -> Result<()> {
    if !a.same_slot(c) {
        return Err(Error::InvalidTurnover(format!("outer gates {a:?} and {c:?} differ")));
    }
    if a.arity != 2 || b.arity != 2 {
        return Err(Error::InvalidTurnover("Pauli turnover needs two-spin gates".into()));
    }
    if a.axis == b.axis {
        return Err(Error::InvalidTurnover(format!("middle axis equals outer axis {}", a.axis)));
    }
    Ok(())
}

/// Turnover of `R^{αα}_i R^{ββ}_{i±1} R^{αα}_i` (time order).
pub fn turnover_pauli(
    first: &RotationGate,
    second: &RotationGate,
    third: &RotationGate,
    direction: Direction,
) -> Result<(RotationGate, RotationGate, RotationGate)> {
    check_pauli_triple(first, second, third)?;
    direction.check(first.site, second.site)?;
    let (c, b, a) = chain_turnover(first.angle, second.angle, third.angle);
    Ok((second.with_angle(c), first.with_angle(b), second.with_angle(a)))
}

/// TFIM chain position of a rotation gate.
pub fn tfim_pos(g: &RotationGate) -> usize {
    if g.arity == 1 {
        2 * g.site - 1
    } else {
        2 * g.site
    }
}

/// Turnover of a mixed one-/two-spin sandwich, e.g. `R^{αα}_i R^β_{i+1} R^{αα}_i`.
pub fn turnover_tfim(
    first: &RotationGate,
    second: &RotationGate,
    third: &RotationGate,
) -> Result<(RotationGate, RotationGate, RotationGate)> {
    if !first.same_slot(third) {
        return Err(Error::InvalidTurnover(format!("outer gates {first:?} and {third:?} differ")));
    }
    if first.arity == second.arity || first.axis == second.axis {
        return Err(Error::InvalidTurnover("TFIM turnover needs a one-spin and a two-spin gate on distinct axes".into()));
    }
    let (p, q) = (tfim_pos(first), tfim_pos(second));
    if p.abs_diff(q) != 1 {
        return Err(Error::InvalidTurnover(format!("gates at chain positions {p} and {q} are not neighbors")));
    }
    let (c, b, a) = chain_turnover(first.angle, second.angle, third.angle);
    Ok((second.with_angle(c), first.with_angle(b), second.with_angle(a)))
}

/// `R^{aa}(θ_a)·R^{bb}(θ_b)` on spins `site, site+1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAxisGate {
    pub axis_a: PauliAxis,
    pub axis_b: PauliAxis,
    pub angle_a: Angle,
    pub angle_b: Angle,
    pub site: usize,
}

impl TwoAxisGate {
    pub fn new(axis_a: PauliAxis, axis_b: PauliAxis, angle_a: Angle, angle_b: Angle, site: usize) -> Result<TwoAxisGate> {
        if axis_a == axis_b {
            return Err(Error::InvalidArgument(format!("two-axis gate needs distinct axes, got {axis_a}{axis_b}")));
        }
        Ok(TwoAxisGate { axis_a, axis_b, angle_a, angle_b, site })
    }

    pub fn parts(&self) -> (RotationGate, RotationGate) {
        (
            RotationGate::two(self.axis_a, self.site, self.angle_a),
            RotationGate::two(self.axis_b, self.site, self.angle_b),
        )
    }

    pub fn fuse(&self, other: &TwoAxisGate) -> Result<TwoAxisGate> {
        if self.site != other.site || self.axis_a != other.axis_a || self.axis_b != other.axis_b {
            return Err(Error::InvalidFusion(format!("{self:?} and {other:?} are not on the same slot")));
        }
        Ok(TwoAxisGate { angle_a: self.angle_a.fuse(other.angle_a), angle_b: self.angle_b.fuse(other.angle_b), ..*self })
    }
}

/// Two independent chain turnovers, one per commuting Kitaev chain.
pub fn turnover_two_axis(
    first: &TwoAxisGate,
    second: &TwoAxisGate,
    third: &TwoAxisGate,
    direction: Direction,
) -> Result<(TwoAxisGate, TwoAxisGate, TwoAxisGate)> {
    if first.site != third.site || first.axis_a != third.axis_a || first.axis_b != third.axis_b {
        return Err(Error::InvalidTurnover(format!("outer gates {first:?} and {third:?} differ")));
    }
    if first.axis_a != second.axis_a || first.axis_b != second.axis_b {
        return Err(Error::InvalidTurnover("two-axis gates must share their axis pair".into()));
    }
    direction.check(first.site, second.site)?;
    let (c1, b1, a1) = chain_turnover(first.angle_a, second.angle_b, third.angle_a);
    let (c2, b2, a2) = chain_turnover(first.angle_b, second.angle_a, third.angle_b);
    let at = |site, angle_a, angle_b| TwoAxisGate { angle_a, angle_b, site, ..*first };
    Ok((at(second.site, c2, c1), at(first.site, b1, b2), at(second.site, a2, a1)))
}

/// Nearest-neighbor matchgate with outer block `[[α, −δ̄], [δ, ᾱ]]` on
/// `|00⟩, |11⟩` and inner block `[[β, −γ̄], [γ, β̄]]` on `|01⟩, |10⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfxyGate {
    pub a: C,
    pub b: C,
    pub g: C,
    pub d: C,
    pub site: usize,
}

impl TfxyGate {
    pub fn identity(site: usize) -> TfxyGate {
        TfxyGate { a: C::new(1.0, 0.0), b: C::new(1.0, 0.0), g: C::new(0.0, 0.0), d: C::new(0.0, 0.0), site }
    }

    pub fn from_blocks(outer: Su2, inner: Su2, site: usize) -> TfxyGate {
        let (o, i) = (outer.normalized(), inner.normalized());
        TfxyGate { a: o.alpha, d: o.beta, b: i.alpha, g: i.beta, site }
    }

    pub fn outer(&self) -> Su2 {
        Su2::new(self.a, self.d)
    }

    pub fn inner(&self) -> Su2 {
        Su2::new(self.b, self.g)
    }

    /// Same gate with the two spins exchanged.
    pub fn flipped(&self) -> TfxyGate {
        TfxyGate { b: self.b.conj(), g: -self.g.conj(), ..*self }
    }

    pub fn norm_defect(&self) -> f64 {
        self.outer().norm_defect().max(self.inner().norm_defect())
    }

    pub fn dense(&self) -> M4 {
        let z = C::new(0.0, 0.0);
        let mut m = [[z; 4]; 4];
        m[0][0] = self.a;
        m[0][3] = -self.d.conj();
        m[3][0] = self.d;
        m[3][3] = self.a.conj();
        m[1][1] = self.b;
        m[1][2] = -self.g.conj();
        m[2][1] = self.g;
        m[2][2] = self.b.conj();
        m
    }
}

/// Builds the matchgate `Rz⊗Rz(θ5, θ6) · Rxx(θ3) Ryy(θ4) · Rz⊗Rz(θ1, θ2)`.
/// `θ1, θ2` act first, on spins `site` and `site+1`.
pub fn tfxy_from_angles(t: [Angle; 6], site: usize) -> TfxyGate {
    let zx = AxisPattern { outer: PauliAxis::Z, middle: PauliAxis::X };
    let outer = su2_from_euler(&EulerTriple { pattern: zx, t1: t[4].fuse(t[5]), t2: t[2].fuse(t[3].neg()), t3: t[0].fuse(t[1]) });
    let inner = su2_from_euler(&EulerTriple { pattern: zx, t1: t[4].fuse(t[5].neg()), t2: t[2].fuse(t[3]), t3: t[0].fuse(t[1].neg()) });
    TfxyGate::from_blocks(outer, inner, site)
}

// Angles x, y with x + y = p and x − y = q.
fn split_pair(p: Angle, q: Angle) -> (Angle, Angle) {
    let x = p.fuse(q).half();
    (x, p.fuse(x.neg()))
}

pub fn tfxy_to_angles(g: &TfxyGate) -> [Angle; 6] {
    let zx = AxisPattern { outer: PauliAxis::Z, middle: PauliAxis::X };
    let o = euler_from_su2(&g.outer(), zx);
    let i = euler_from_su2(&g.inner(), zx);
    let (t1, t2) = split_pair(o.t3, i.t3);
    let (t3, t4n) = split_pair(o.t2, i.t2);
    let (t5, t6) = split_pair(o.t1, i.t1);
    [t1, t2, t3, t4n.neg(), t5, t6]
}

/// Time-ordered fusion: `first` then `second`.
pub fn tfxy_fuse(first: &TfxyGate, second: &TfxyGate) -> Result<TfxyGate> {
    if first.site != second.site {
        return Err(Error::InvalidFusion(format!("TFXY gates at sites {} and {}", first.site, second.site)));
    }
    let outer = second.outer().mul(&first.outer());
    let inner = second.inner().mul(&first.inner());
    Ok(TfxyGate::from_blocks(outer, inner, first.site))
}

pub fn matchgate_split(m: &M4) -> Result<(Su2, Su2)> {
    let off = [(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)];
    for (r, c) in off {
        if m[r][c].norm() > MATCHGATE_TOL {
            return Err(Error::NotAMatchgate(format!("entry ({r}, {c}) = {} is off the matchgate pattern", m[r][c])));
        }
    }
    let pairs = [
        (m[3][3], m[0][0].conj()),
        (m[0][3], -m[3][0].conj()),
        (m[2][2], m[1][1].conj()),
        (m[1][2], -m[2][1].conj()),
    ];
    for (x, y) in pairs {
        if (x - y).norm() > MATCHGATE_TOL {
            return Err(Error::NotAMatchgate("blocks are not unit-determinant 2×2 unitaries".into()));
        }
    }
    let outer = Su2::new(m[0][0], m[3][0]);
    let inner = Su2::new(m[1][1], m[2][1]);
    if outer.norm_defect() > MATCHGATE_TOL || inner.norm_defect() > MATCHGATE_TOL {
        return Err(Error::NotAMatchgate("block columns are not unit vectors".into()));
    }
    Ok((outer, inner))
}

fn zero2() -> M2 {
    [[C::new(0.0, 0.0); 2]; 2]
}

fn mul2(a: &M2, b: &M2) -> M2 {
    let mut r = zero2();
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

fn add2(a: &M2, b: &M2) -> M2 {
    let mut r = *a;
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] += b[i][j];
        }
    }
    r
}

fn adj2(a: &M2) -> M2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn mul3(a: &M2, b: &M2, c: &M2) -> M2 {
    mul2(&mul2(a, b), c)
}

fn fro2(a: &M2) -> f64 {
    a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn spectral2(a: &M2) -> f64 {
    let h = mul2(&adj2(a), a);
    let d = 0.5 * (h[0][0].re - h[1][1].re);
    (0.5 * (h[0][0].re + h[1][1].re) + hyp(d, cabs(h[0][1]))).max(0.0).sqrt()
}

fn diag2(x: C, y: C) -> M2 {
    [[x, C::new(0.0, 0.0)], [C::new(0.0, 0.0), y]]
}

fn anti2(x: C, y: C) -> M2 {
    [[C::new(0.0, 0.0), x], [y, C::new(0.0, 0.0)]]
}

fn unit_pair(x: C, y: C) -> Option<(C, C)> {
    let n = hyp(cabs(x), cabs(y));
    if n == 0.0 {
        None
    } else {
        Some((x / n, y / n))
    }
}

/// The four stored blocks of a V-pattern product in the permuted basis
/// `{000, 011}, {001, 010}, {100, 111}, {101, 110}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurnoverBlocks {
    pub q11: M2,
    pub q22: M2,
    pub q23: M2,
    pub q14: M2,
}

impl TurnoverBlocks {
    /// Blocks of `g3·g2·g1` with `g1, g3` at site `i` and `g2` at `i+1`.
    pub fn from_vee(g1: &TfxyGate, g2: &TfxyGate, g3: &TfxyGate) -> TurnoverBlocks {
        let d = |g: &TfxyGate| diag2(g.a, g.b);
        let dp = |g: &TfxyGate| diag2(g.b.conj(), g.a.conj());
        let k = |g: &TfxyGate| anti2(-g.d.conj(), -g.g.conj());
        let kp = |g: &TfxyGate| anti2(g.g, g.d);
        let c = g2.outer().matrix();
        let dm = g2.inner().matrix();
        let (d1, d3, k1, k3) = (d(g1), d(g3), k(g1), k(g3));
        let (d1p, k1p) = (dp(g1), kp(g1));
        TurnoverBlocks {
            q11: add2(&mul3(&d3, &c, &d1), &mul3(&k3, &dm, &k1p)),
            q14: add2(&mul3(&d3, &c, &k1), &mul3(&k3, &dm, &d1p)),
            q22: add2(&mul3(&d3, &dm, &d1), &mul3(&k3, &c, &k1p)),
            q23: add2(&mul3(&d3, &dm, &k1), &mul3(&k3, &c, &d1p)),
        }
    }

    pub fn diagonal_norm(&self) -> f64 {
        spectral2(&self.q11)
    }

    pub fn anti_norm(&self) -> f64 {
        spectral2(&self.q23)
    }

    pub fn check(&self) -> Result<()> {
        let dd = (fro2(&self.q11) - fro2(&self.q22)).abs();
        let da = (fro2(&self.q23) - fro2(&self.q14)).abs();
        if dd > BLOCK_NORM_TOL || da > BLOCK_NORM_TOL {
            return Err(Error::NumericalConsistency(format!("paired block norms differ by {dd:.3e} / {da:.3e}")));
        }
        Ok(())
    }
}

/// Which block pair the TFXY turnover factored first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TurnoverBranch {
    Diagonal,
    AntiDiagonal,
}

fn su2_from_first_col(x: C, y: C) -> Su2 {
    match unit_pair(x, y) {
        Some((x, y)) => Su2::new(x, y),
        None => Su2::identity(),
    }
}

// L with N = L·diag: take the larger column of N.
fn left_diag(n: &M2) -> Su2 {
    let c0 = hyp(cabs(n[0][0]), cabs(n[1][0]));
    let c1 = hyp(cabs(n[0][1]), cabs(n[1][1]));
    if c0 >= c1 {
        su2_from_first_col(n[0][0], n[1][0])
    } else {
        su2_from_first_col(n[1][1].conj(), -n[0][1].conj())
    }
}

// L with N = L·anti.
fn left_anti(n: &M2) -> Su2 {
    let c0 = hyp(cabs(n[0][0]), cabs(n[1][0]));
    let c1 = hyp(cabs(n[0][1]), cabs(n[1][1]));
    if c1 >= c0 {
        su2_from_first_col(n[0][1], n[1][1])
    } else {
        su2_from_first_col(n[1][0].conj(), -n[0][0].conj())
    }
}

/// `R ∈ SU(2)` diagonalizing `M†M`, larger eigenvalue first.
fn right_factor(m: &M2) -> Su2 {
    let h = mul2(&adj2(m), m);
    let d = 0.5 * (h[0][0].re - h[1][1].re);
    let r = hyp(d, cabs(h[0][1]));
    // first column of R† is the leading eigenvector
    let v = if d >= 0.0 { su2_from_first_col(C::new(r + d, 0.0), h[1][0]) } else { su2_from_first_col(h[0][1], C::new(r - d, 0.0)) };
    v.adjoint()
}

fn j_matrix() -> Su2 {
    Su2::new(C::new(0.0, 0.0), C::new(-1.0, 0.0))
}

fn solve_r2(p: &M2, s: &M2, d: [C; 2], k: [C; 2]) -> Su2 {
    // P = D·R2, S = K·R2, R2 = [[r0, −r̄1], [r1, r̄0]]
    let cands = [(cabs(d[0]), 0), (cabs(d[1]), 1), (cabs(k[0]), 2), (cabs(k[1]), 3)];
    let best = cands.iter().fold(cands[0], |a, &b| if b.0 > a.0 { b } else { a }).1;
    let (r0, r1) = match best {
        0 => (p[0][0] / d[0], -(p[0][1] / d[0]).conj()),
        1 => ((p[1][1] / d[1]).conj(), p[1][0] / d[1]),
        2 => ((s[0][1] / k[0]).conj(), s[0][0] / k[0]),
        _ => (s[1][0] / k[1], -(s[1][1] / k[1]).conj()),
    };
    su2_from_first_col(r0, r1)
}

fn vee_to_hat(g1: &TfxyGate, g2: &TfxyGate, g3: &TfxyGate) -> Result<((TfxyGate, TfxyGate, TfxyGate), TurnoverBranch)> {
    let q = TurnoverBlocks::from_vee(g1, g2, g3);
    q.check()?;
    let (r1, branch);
    if q.diagonal_norm() <= q.anti_norm() {
        r1 = right_factor(&q.q11);
        branch = TurnoverBranch::Diagonal;
    } else {
        // Q23·J† = L2·diag(k1, −k2)·(J·R1·J†)
        let j = j_matrix();
        let jt = j.adjoint();
        r1 = jt.mul(&right_factor(&mul2(&q.q23, &jt.matrix()))).mul(&j);
        branch = TurnoverBranch::AntiDiagonal;
    }
    let r1h = r1.adjoint().matrix();
    let n1 = mul2(&q.q11, &r1h);
    let n2 = mul2(&q.q23, &r1h);
    let (l1, l2) = (left_diag(&n1), left_anti(&n2));
    let dm = mul2(&l1.adjoint().matrix(), &n1);
    let km = mul2(&l2.adjoint().matrix(), &n2);
    let (d, k) = ([dm[0][0], dm[1][1]], [km[0][1], km[1][0]]);
    let p = mul2(&l2.adjoint().matrix(), &q.q22);
    let s = mul2(&l1.adjoint().matrix(), &q.q14);
    let r2 = solve_r2(&p, &s, d, k);
    let (i, ip) = (g1.site, g2.site);
    let w = Su2::from_column(d[0], -k[0].conj());
    let x = Su2::from_column(d[1], -k[1].conj());
    let h1 = TfxyGate::from_blocks(r1, r2, ip);
    let h2 = TfxyGate::from_blocks(w, x, i);
    let h3 = TfxyGate::from_blocks(l1, l2, ip);
    Ok(((h1, h2, h3), branch))
}

/// TFXY turnover that also reports the factorization branch taken.
pub fn tfxy_turnover_with_branch(
    first: &TfxyGate,
    second: &TfxyGate,
    third: &TfxyGate,
    direction: Direction,
) -> Result<((TfxyGate, TfxyGate, TfxyGate), TurnoverBranch)> {
    if first.site != third.site {
        return Err(Error::InvalidTurnover(format!("outer TFXY gates at sites {} and {}", first.site, third.site)));
    }
    direction.check(first.site, second.site)?;
    match direction {
        Direction::VeeToHat => vee_to_hat(first, second, third),
        Direction::HatToVee => {
            let at = |g: &TfxyGate, site| TfxyGate { site, ..g.flipped() };
            let (p, q) = (second.site, first.site);
            let ((h1, h2, h3), branch) = vee_to_hat(&at(first, p), &at(second, q), &at(third, p))?;
            Ok(((at(&h1, p), at(&h2, q), at(&h3, p)), branch))
        }
    }
}

pub fn tfxy_turnover(
    first: &TfxyGate,
    second: &TfxyGate,
    third: &TfxyGate,
    direction: Direction,
) -> Result<(TfxyGate, TfxyGate, TfxyGate)> {
    tfxy_turnover_with_branch(first, second, third, direction).map(|(g, _)| g)
}

/// A gate living on a generator chain with positions `1..=M`.
pub trait ChainGate: Clone + Send + Sync + fmt::Debug {
    fn pos(&self) -> usize;
    /// `first` then `second`, both at the same position.
    fn fuse(first: &Self, second: &Self) -> Result<Self>;
    /// Time-ordered triple at `(p, p±1, p)` to its dual at `(p±1, p, p±1)`.
    fn turnover(first: &Self, second: &Self, third: &Self) -> Result<(Self, Self, Self)>;
    fn identity_like(&self) -> Self;
    fn to_gate(&self) -> Gate;
}

/// Any gate that can appear in a circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rot(RotationGate),
    TwoAxis(TwoAxisGate),
    Tfxy(TfxyGate),
}

impl Gate {
    pub fn site(&self) -> usize {
        match self {
            Gate::Rot(g) => g.site,
            Gate::TwoAxis(g) => g.site,
            Gate::Tfxy(g) => g.site,
        }
    }

    /// Number of spins acted on.
    pub fn span(&self) -> usize {
        match self {
            Gate::Rot(g) => g.arity as usize,
            _ => 2,
        }
    }
}

fn direction_of(first: usize, second: usize) -> Direction {
    if second > first {
        Direction::VeeToHat
    } else {
        Direction::HatToVee
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KitaevGate(pub RotationGate);

impl ChainGate for KitaevGate {
    fn pos(&self) -> usize {
        self.0.site
    }

    fn fuse(first: &Self, second: &Self) -> Result<Self> {
        fuse_same(&first.0, &second.0).map(KitaevGate)
    }

    fn turnover(first: &Self, second: &Self, third: &Self) -> Result<(Self, Self, Self)> {
        let d = direction_of(first.0.site, second.0.site);
        let (a, b, c) = turnover_pauli(&first.0, &second.0, &third.0, d)?;
        Ok((KitaevGate(a), KitaevGate(b), KitaevGate(c)))
    }

    fn identity_like(&self) -> Self {
        KitaevGate(self.0.with_angle(Angle::ZERO))
    }

    fn to_gate(&self) -> Gate {
        Gate::Rot(self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfimGate(pub RotationGate);

impl ChainGate for TfimGate {
    fn pos(&self) -> usize {
        tfim_pos(&self.0)
    }

    fn fuse(first: &Self, second: &Self) -> Result<Self> {
        fuse_same(&first.0, &second.0).map(TfimGate)
    }

    fn turnover(first: &Self, second: &Self, third: &Self) -> Result<(Self, Self, Self)> {
        let (a, b, c) = turnover_tfim(&first.0, &second.0, &third.0)?;
        Ok((TfimGate(a), TfimGate(b), TfimGate(c)))
    }

    fn identity_like(&self) -> Self {
        TfimGate(self.0.with_angle(Angle::ZERO))
    }

    fn to_gate(&self) -> Gate {
        Gate::Rot(self.0)
    }
}

impl ChainGate for TwoAxisGate {
    fn pos(&self) -> usize {
        self.site
    }

    fn fuse(first: &Self, second: &Self) -> Result<Self> {
        first.fuse(second)
    }

    fn turnover(first: &Self, second: &Self, third: &Self) -> Result<(Self, Self, Self)> {
        turnover_two_axis(first, second, third, direction_of(first.site, second.site))
    }

    fn identity_like(&self) -> Self {
        TwoAxisGate { angle_a: Angle::ZERO, angle_b: Angle::ZERO, ..*self }
    }

    fn to_gate(&self) -> Gate {
        Gate::TwoAxis(*self)
    }
}

impl ChainGate for TfxyGate {
    fn pos(&self) -> usize {
        self.site
    }

    fn fuse(first: &Self, second: &Self) -> Result<Self> {
        tfxy_fuse(first, second)
    }

    fn turnover(first: &Self, second: &Self, third: &Self) -> Result<(Self, Self, Self)> {
        tfxy_turnover(first, second, third, direction_of(first.site, second.site))
    }

    fn identity_like(&self) -> Self {
        TfxyGate::identity(self.site)
    }

    fn to_gate(&self) -> Gate {
        Gate::Tfxy(*self)
    }
}
