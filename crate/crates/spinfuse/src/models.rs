//! Hamiltonian schedules and first-order Trotter circuits.
//!
//! A step applies its terms in a fixed order: one-spin fields, then the
//! couplings on odd bonds, then the couplings on even bonds. All rotation
//! angles are `2·parameter·Δt`.
//!
//! Parameter arrays are indexed `[axis slot][step][bond or site]`:
//!
//! | model  | coupling slots | field slots |
//! |--------|----------------|-------------|
//! | Ising  | `J^α`          | `h^α`       |
//! | Kitaev | `J` (bond axis from the pattern) | none |
//! | XY     | `J^α, J^β`     | none        |
//! | TFIM   | `J^α`          | `h^β`       |
//! | TFXY   | two couplings  | one field   |
//!
//! TFXY gates are stored in the XY frame: slots are `J^x, J^y, h^z` there
//! and the frame relabels them (`J^x, J^z, h^y` for XZ, `J^y, J^z, h^x` for YZ).

use crate::circuit::{Frame, GateLayer};
use crate::error::{Error, Result};
use crate::gates::{tfxy_from_angles, Gate, PauliAxis, RotationGate, TfimGate, TwoAxisGate};
use crate::su2::Angle;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelKind {
    Ising { axis: PauliAxis },
    Kitaev { axes: Vec<PauliAxis> },
    Xy { a: PauliAxis, b: PauliAxis },
    Tfim { coupling: PauliAxis, field: PauliAxis },
    Tfxy { frame: Frame },
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Ising { .. } => "ising",
            ModelKind::Kitaev { .. } => "kitaev",
            ModelKind::Xy { .. } => "xy",
            ModelKind::Tfim { .. } => "tfim",
            ModelKind::Tfxy { .. } => "tfxy",
        }
    }

    /// `(coupling slots, field slots)`.
    pub fn slots(&self) -> (usize, usize) {
        match self {
            ModelKind::Ising { .. } => (1, 1),
            ModelKind::Kitaev { .. } => (1, 0),
            ModelKind::Xy { .. } => (2, 0),
            ModelKind::Tfim { .. } => (1, 1),
            ModelKind::Tfxy { .. } => (2, 1),
        }
    }

    pub fn frame(&self) -> Frame {
        match self {
            ModelKind::Tfxy { frame } => *frame,
            _ => Frame::Xy,
        }
    }

    /// Alternating `x, y` bond axes.
    pub fn default_kitaev(n_spins: usize) -> ModelKind {
        let axes = (0..n_spins.saturating_sub(1)).map(|i| if i % 2 == 0 { PauliAxis::X } else { PauliAxis::Y }).collect();
        ModelKind::Kitaev { axes }
    }

    pub fn validate(&self, n_spins: usize) -> Result<()> {
        match self {
            ModelKind::Kitaev { axes } => {
                if axes.len() + 1 != n_spins {
                    return Err(Error::InvalidArgument(format!(
                        "Kitaev pattern has {} axes, {n_spins} spins need {}",
                        axes.len(),
                        n_spins.saturating_sub(1)
                    )));
                }
                if let Some(i) = axes.windows(2).position(|w| w[0] == w[1]) {
                    return Err(Error::InvalidArgument(format!(
                        "Kitaev bonds {} and {} share axis {}; neighboring bonds need different axes",
                        i + 1,
                        i + 2,
                        axes[i]
                    )));
                }
            }
            ModelKind::Xy { a, b } if a == b => {
                return Err(Error::InvalidArgument(format!("XY model needs two distinct axes, got {a}{b}")));
            }
            ModelKind::Tfim { coupling, field } if coupling == field => {
                return Err(Error::InvalidArgument(format!("TFIM coupling and field axes coincide ({coupling})")));
            }
            _ => {}
        }
        Ok(())
    }
}

/// Piecewise-constant parameters over `n_steps` slices of length `dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSchedule {
    pub model: ModelKind,
    pub n_spins: usize,
    pub n_steps: usize,
    pub dt: f64,
    pub couplings: Vec<Vec<Vec<f64>>>,
    pub fields: Vec<Vec<Vec<f64>>>,
}

impl HamiltonianSchedule {
    pub fn new(
        model: ModelKind,
        n_spins: usize,
        dt: f64,
        couplings: Vec<Vec<Vec<f64>>>,
        fields: Vec<Vec<Vec<f64>>>,
    ) -> Result<HamiltonianSchedule> {
        let n_steps = couplings.first().map_or(0, |c| c.len());
        let s = HamiltonianSchedule { model, n_spins, n_steps, dt, couplings, fields };
        s.validate()?;
        Ok(s)
    }

    /// Same parameters at every step.
    pub fn constant(
        model: ModelKind,
        n_spins: usize,
        n_steps: usize,
        dt: f64,
        couplings: Vec<Vec<f64>>,
        fields: Vec<Vec<f64>>,
    ) -> Result<HamiltonianSchedule> {
        let rep = |v: Vec<Vec<f64>>| v.into_iter().map(|row| vec![row; n_steps]).collect();
        let s = HamiltonianSchedule { model, n_spins, n_steps, dt, couplings: rep(couplings), fields: rep(fields) };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_spins;
        if n < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 spins, got {n}")));
        }
        if self.n_steps == 0 {
            return Err(Error::InvalidArgument("schedule has no time steps".into()));
        }
        if !self.dt.is_finite() {
            return Err(Error::InvalidArgument(format!("time step {} is not finite", self.dt)));
        }
        self.model.validate(n)?;
        let (nc, nf) = self.model.slots();
        check_shape("couplings", &self.couplings, nc, self.n_steps, n - 1)?;
        check_shape("fields", &self.fields, nf, self.n_steps, n)
    }

    fn angle(&self, x: f64) -> Angle {
        Angle::from_radians(2.0 * x * self.dt).unwrap_or(Angle::ZERO)
    }

    fn coupling(&self, slot: usize, tau: usize, bond: usize) -> Angle {
        self.angle(self.couplings[slot][tau - 1][bond - 1])
    }

    fn field(&self, slot: usize, tau: usize, site: usize) -> Angle {
        self.angle(self.fields[slot][tau - 1][site - 1])
    }
}

fn check_shape(name: &str, a: &[Vec<Vec<f64>>], slots: usize, steps: usize, width: usize) -> Result<()> {
    if a.len() != slots {
        return Err(Error::InvalidArgument(format!("{name}: expected {slots} axis slots, got {}", a.len())));
    }
    for (k, slot) in a.iter().enumerate() {
        if slot.len() != steps {
            return Err(Error::InvalidArgument(format!("{name}[{k}]: expected {steps} steps, got {}", slot.len())));
        }
        for (t, row) in slot.iter().enumerate() {
            if row.len() != width {
                return Err(Error::InvalidArgument(format!("{name}[{k}][{t}]: expected {width} entries, got {}", row.len())));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name}[{k}][{t}] holds a non-finite value")));
            }
        }
    }
    Ok(())
}

fn bonds(n: usize, parity: usize) -> impl Iterator<Item = usize> {
    (if parity == 1 { 1 } else { 2 }..n).step_by(2)
}

fn layer(gates: Vec<Gate>) -> GateLayer {
    GateLayer::new(gates).expect("bonds of one parity never overlap")
}

/// Layers of step `tau` (1-based) in time order.
pub fn trotter_step(s: &HamiltonianSchedule, tau: usize) -> Result<Vec<GateLayer>> {
    if tau == 0 || tau > s.n_steps {
        return Err(Error::InvalidStep(format!("step {tau} outside 1..={}", s.n_steps)));
    }
    let n = s.n_spins;
    let two = |axis, b| Gate::Rot(RotationGate::two(axis, b, s.coupling(0, tau, b)));
    Ok(match &s.model {
        ModelKind::Ising { axis } => {
            let fields = (1..=n).map(|i| Gate::Rot(RotationGate::one(*axis, i, s.field(0, tau, i)))).collect();
            vec![layer(fields), layer(bonds(n, 1).map(|b| two(*axis, b)).collect()), layer(bonds(n, 0).map(|b| two(*axis, b)).collect())]
        }
        ModelKind::Tfim { coupling, field } => {
            let fields = (1..=n).map(|i| Gate::Rot(RotationGate::one(*field, i, s.field(0, tau, i)))).collect();
            vec![
                layer(fields),
                layer(bonds(n, 1).map(|b| two(*coupling, b)).collect()),
                layer(bonds(n, 0).map(|b| two(*coupling, b)).collect()),
            ]
        }
        ModelKind::Kitaev { axes } => {
            [1, 0].iter().map(|&p| layer(bonds(n, p).map(|b| two(axes[b - 1], b)).collect())).collect()
        }
        ModelKind::Xy { a, b } => [1, 0]
            .iter()
            .map(|&p| {
                layer(
                    bonds(n, p)
                        .map(|k| Gate::TwoAxis(TwoAxisGate { axis_a: *a, axis_b: *b, angle_a: s.coupling(0, tau, k), angle_b: s.coupling(1, tau, k), site: k }))
                        .collect(),
                )
            })
            .collect(),
        ModelKind::Tfxy { .. } => [1, 0]
            .iter()
            .map(|&p| layer(bonds(n, p).map(|k| Gate::Tfxy(tfxy_step_gate(s, tau, k))).collect()))
            .collect(),
    })
}

// Odd bonds carry the fields of both their spins; with odd N the last
// spin's field rides on the final even bond.
fn tfxy_step_gate(s: &HamiltonianSchedule, tau: usize, k: usize) -> crate::gates::TfxyGate {
    let n = s.n_spins;
    let (mut f1, mut f2) = (Angle::ZERO, Angle::ZERO);
    if k % 2 == 1 {
        f1 = s.field(0, tau, k);
        f2 = s.field(0, tau, k + 1);
    } else if n % 2 == 1 && k == n - 1 {
        f2 = s.field(0, tau, n);
    }
    let t = [f1, f2, s.coupling(0, tau, k), s.coupling(1, tau, k), Angle::ZERO, Angle::ZERO];
    tfxy_from_angles(t, k)
}

/// All steps concatenated in time order.
pub fn full_trotter_circuit(s: &HamiltonianSchedule) -> Result<Vec<GateLayer>> {
    s.validate()?;
    let mut out = Vec::new();
    for tau in 1..=s.n_steps {
        out.extend(trotter_step(s, tau)?);
    }
    Ok(out)
}

/// Fuses every step of a classical Ising schedule into three layers.
pub fn ising_compress(s: &HamiltonianSchedule) -> Result<Vec<GateLayer>> {
    let ModelKind::Ising { axis } = s.model else {
        return Err(Error::WrongModel(format!("ising_compress needs an Ising schedule, got {}", s.model.name())));
    };
    s.validate()?;
    let n = s.n_spins;
    let sum = |f: &dyn Fn(usize) -> Angle| (1..=s.n_steps).map(f).fold(Angle::ZERO, Angle::fuse);
    let fields = (1..=n).map(|i| Gate::Rot(RotationGate::one(axis, i, sum(&|t| s.field(0, t, i))))).collect();
    let two = |b: usize| Gate::Rot(RotationGate::two(axis, b, sum(&|t| s.coupling(0, t, b))));
    Ok(vec![layer(fields), layer(bonds(n, 1).map(two).collect()), layer(bonds(n, 0).map(two).collect())])
}

/// TFIM steps as layers on the `2N − 1` position generator chain:
/// a field layer (odd positions) then a coupling layer (even positions).
pub fn tfim_circuit_mode(s: &HamiltonianSchedule) -> Result<Vec<Vec<TfimGate>>> {
    let ModelKind::Tfim { coupling, field } = s.model else {
        return Err(Error::WrongModel(format!("TFIM chain mode needs a TFIM schedule, got {}", s.model.name())));
    };
    s.validate()?;
    let n = s.n_spins;
    let mut out = Vec::with_capacity(2 * s.n_steps);
    for tau in 1..=s.n_steps {
        out.push((1..=n).map(|i| TfimGate(RotationGate::one(field, i, s.field(0, tau, i)))).collect());
        out.push((1..n).map(|b| TfimGate(RotationGate::two(coupling, b, s.coupling(0, tau, b)))).collect());
    }
    Ok(out)
}

/// I.i.d. standard-normal parameters. Each array draws from its own
/// ChaCha8 stream: coupling slot `k` uses stream `k`, field slot `k`
/// uses stream `16 + k`.
pub fn random_schedule(model: ModelKind, n_spins: usize, n_steps: usize, dt: f64, seed: u64) -> Result<HamiltonianSchedule> {
    if n_spins < 2 || n_steps == 0 {
        return Err(Error::InvalidArgument(format!("need N ≥ 2 and n_t ≥ 1, got N={n_spins}, n_t={n_steps}")));
    }
    let (nc, nf) = model.slots();
    let draw = |stream: u64, width: usize| -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        (0..n_steps).map(|_| (0..width).map(|_| StandardNormal.sample(&mut rng)).collect()).collect()
    };
    let couplings = (0..nc).map(|k| draw(k as u64, n_spins - 1)).collect();
    let fields = (0..nf).map(|k| draw(16 + k as u64, n_spins)).collect();
    HamiltonianSchedule::new(model, n_spins, dt, couplings, fields)
}
