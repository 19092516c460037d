//! End-to-end compression drivers.
//!
//! Input gates are first regrouped into complete chain layers: each gate
//! moves to the earliest layer after everything it touches on the generator
//! chain, same-slot neighbors are fused on the way, and the holes are
//! filled with identities. Layer `0` always carries the odd positions.

use crate::circuit::{square_to_triangle, triangle_to_square, Circuit, Frame, GateLayer, OpLog, SquareCircuit, TriangleCircuit};
use crate::error::{Error, Result};
use crate::gates::{ChainGate, Gate, KitaevGate, PauliAxis, RotationGate, TfimGate, TfxyGate, TwoAxisGate};
use crate::su2::Angle;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CompressionReport {
    pub input_depth: usize,
    pub output_depth: usize,
    pub turnovers: u64,
    pub fusions: u64,
    pub triangle_merges: usize,
    /// Trotter steps represented by the output; zero when not known.
    pub steps: usize,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Kitaev,
    Tfim,
    TwoAxis,
    Tfxy,
}

/// A square in one of the compressible families.
#[derive(Debug, Clone)]
pub enum CompressedSquare {
    Kitaev(SquareCircuit<KitaevGate>),
    Tfim(SquareCircuit<TfimGate>),
    TwoAxis(SquareCircuit<TwoAxisGate>),
    Tfxy(SquareCircuit<TfxyGate>),
}

impl CompressedSquare {
    pub fn family(&self) -> Family {
        match self {
            CompressedSquare::Kitaev(_) => Family::Kitaev,
            CompressedSquare::Tfim(_) => Family::Tfim,
            CompressedSquare::TwoAxis(_) => Family::TwoAxis,
            CompressedSquare::Tfxy(_) => Family::Tfxy,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            CompressedSquare::Kitaev(s) => s.n(),
            CompressedSquare::Tfim(s) => s.n(),
            CompressedSquare::TwoAxis(s) => s.n(),
            CompressedSquare::Tfxy(s) => s.n(),
        }
    }

    pub fn n_spins(&self) -> usize {
        match self {
            CompressedSquare::Tfim(s) => s.n() / 2,
            _ => self.depth(),
        }
    }

    pub fn layers(&self) -> Vec<GateLayer> {
        fn conv<G: ChainGate>(s: &SquareCircuit<G>) -> Vec<GateLayer> {
            s.layers().iter().map(|l| GateLayer { gates: l.iter().map(ChainGate::to_gate).collect() }).collect()
        }
        match self {
            CompressedSquare::Kitaev(s) => conv(s),
            CompressedSquare::Tfim(s) => conv(s),
            CompressedSquare::TwoAxis(s) => conv(s),
            CompressedSquare::Tfxy(s) => conv(s),
        }
    }

    pub fn to_circuit(&self, frame: Frame) -> Circuit {
        let gates = self.layers().into_iter().flat_map(|l| l.gates).collect();
        Circuit { n_spins: self.n_spins(), frame, gates }
    }
}

/// Regroups time-ordered chain gates into complete alternating layers.
/// Returns the layers and the number of fusions performed.
pub fn chain_layers<G: ChainGate>(gates: &[G], m: usize, fill: impl Fn(usize) -> G) -> Result<(Vec<Vec<G>>, u64)> {
    let mut slots: Vec<Vec<Option<G>>> = Vec::new();
    let mut last: Vec<Option<usize>> = vec![None; m + 2];
    let mut fusions = 0;
    for g in gates {
        let p = g.pos();
        if p == 0 || p > m {
            return Err(Error::InvalidSite(format!("chain position {p} outside 1..={m}")));
        }
        let block = [last[p - 1], last[p], last[p + 1]].into_iter().flatten().max();
        if let Some(l) = block.filter(|&l| last[p] == Some(l)) {
            let slot = &mut slots[l][(p - 1) / 2];
            *slot = Some(G::fuse(slot.as_ref().expect("occupied"), g)?);
            fusions += 1;
            continue;
        }
        let parity = (p + 1) % 2;
        let mut l = block.map_or(0, |b| b + 1);
        if l % 2 != parity {
            l += 1;
        }
        while slots.len() <= l {
            let k = slots.len();
            let width = if k % 2 == 0 { m.div_ceil(2) } else { m / 2 };
            slots.push(vec![None; width]);
        }
        slots[l][(p - 1) / 2] = Some(g.clone());
        last[p] = Some(l);
    }
    let layers = slots
        .into_iter()
        .enumerate()
        .map(|(k, row)| {
            row.into_iter().enumerate().map(|(j, g)| g.unwrap_or_else(|| fill(2 * j + 1 + k % 2))).collect()
        })
        .collect();
    Ok((layers, fusions))
}

/// Time-dependent compression on complete chain layers of an `n`-spin generator chain.
pub fn compress_chain<G: ChainGate>(layers: &[Vec<G>], n: usize, log: &mut OpLog) -> Result<SquareCircuit<G>> {
    let mut layers = layers.to_vec();
    if n == 2 && layers.len() == 1 {
        layers.push(Vec::new());
    }
    if layers.len() < n {
        return Err(Error::Precondition(format!(
            "compression needs at least {n} chain layers (n_t ≥ {} steps), got {}",
            n.div_ceil(2),
            layers.len()
        )));
    }
    let square = SquareCircuit::new(n, layers[..n].to_vec())?;
    let mut tri = square_to_triangle(&square, log)?;
    for layer in &layers[n..] {
        tri.merge_layer(layer, log)?;
    }
    triangle_to_square(&tri, log)
}

fn doubling<G: ChainGate>(layers: &[Vec<G>], n: usize, tau: u32, log: &mut OpLog) -> Result<SquareCircuit<G>> {
    let square = SquareCircuit::new(n, layers[..n].to_vec())?;
    let mut tri: TriangleCircuit<G> = square_to_triangle(&square, log)?;
    for layer in &layers[n..] {
        tri.merge_layer(layer, log)?;
    }
    for _ in 0..tau {
        let copy = tri.clone();
        tri.merge_triangle(&copy, log)?;
    }
    triangle_to_square(&tri, log)
}

/// Gates of one family lifted to the generator chain.
enum Lifted {
    Kitaev(Vec<KitaevGate>, Vec<PauliAxis>),
    Tfim(Vec<TfimGate>, PauliAxis, PauliAxis),
    TwoAxis(Vec<TwoAxisGate>, PauliAxis, PauliAxis),
    Tfxy(Vec<TfxyGate>),
}

fn lift(gates: &[Gate], n_spins: usize) -> Result<Lifted> {
    let mixed = || Error::WrongModel("circuit mixes incompatible gate families".into());
    let Some(first) = gates.first() else {
        return Err(Error::InvalidStep("no gates to compress".into()));
    };
    for g in gates {
        if g.site() == 0 || g.site() + g.span() - 1 > n_spins {
            return Err(Error::InvalidStep(format!("{g:?} does not fit on {n_spins} spins")));
        }
    }
    match first {
        Gate::Tfxy(_) => gates
            .iter()
            .map(|g| if let Gate::Tfxy(t) = g { Ok(*t) } else { Err(mixed()) })
            .collect::<Result<Vec<_>>>()
            .map(Lifted::Tfxy),
        Gate::TwoAxis(t0) => {
            let v = gates
                .iter()
                .map(|g| match g {
                    Gate::TwoAxis(t) if t.axis_a == t0.axis_a && t.axis_b == t0.axis_b => Ok(*t),
                    _ => Err(mixed()),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Lifted::TwoAxis(v, t0.axis_a, t0.axis_b))
        }
        Gate::Rot(_) => {
            let rots: Vec<RotationGate> =
                gates.iter().map(|g| if let Gate::Rot(r) = g { Ok(*r) } else { Err(mixed()) }).collect::<Result<_>>()?;
            if rots.iter().any(|r| r.arity == 1) {
                lift_tfim(rots)
            } else {
                lift_kitaev(rots, n_spins)
            }
        }
    }
}

fn lift_tfim(rots: Vec<RotationGate>) -> Result<Lifted> {
    let axis_of = |arity| {
        let mut it = rots.iter().filter(move |r| r.arity == arity).map(|r| r.axis);
        let a = it.next();
        match a {
            Some(a) if it.all(|b| b == a) => Ok(Some(a)),
            Some(_) => Err(Error::WrongModel(format!("{arity}-spin rotations use several axes"))),
            None => Ok(None),
        }
    };
    let (field, coupling) = (axis_of(1)?.expect("has fields"), axis_of(2)?);
    let coupling = coupling.unwrap_or(if field == PauliAxis::X { PauliAxis::Z } else { PauliAxis::X });
    if field == coupling {
        return Err(Error::WrongModel(format!(
            "fields and couplings share axis {field}: a classical Ising circuit, use the Ising fast path"
        )));
    }
    Ok(Lifted::Tfim(rots.into_iter().map(TfimGate).collect(), coupling, field))
}

fn lift_kitaev(rots: Vec<RotationGate>, n_spins: usize) -> Result<Lifted> {
    let mut axes: Vec<Option<PauliAxis>> = vec![None; n_spins.saturating_sub(1)];
    for r in &rots {
        match axes[r.site - 1] {
            Some(a) if a != r.axis => {
                return Err(Error::WrongModel(format!("bond {} carries both {a}{a} and {}{} rotations", r.site, r.axis, r.axis)));
            }
            _ => axes[r.site - 1] = Some(r.axis),
        }
    }
    let mut chosen = Vec::with_capacity(axes.len());
    for i in 0..axes.len() {
        let a = match axes[i] {
            Some(a) => a,
            None => {
                let left = chosen.last().copied();
                let right = axes.get(i + 1).copied().flatten();
                *PauliAxis::ALL.iter().find(|&&a| Some(a) != left && Some(a) != right).expect("three axes")
            }
        };
        if chosen.last() == Some(&a) {
            return Err(Error::WrongModel(format!(
                "bonds {i} and {} share axis {a}; not a Kitaev chain (a classical Ising circuit uses the Ising fast path)",
                i + 1
            )));
        }
        chosen.push(a);
    }
    Ok(Lifted::Kitaev(rots.into_iter().map(KitaevGate).collect(), chosen))
}

fn run<G: ChainGate>(
    gates: &[G],
    n: usize,
    fill: impl Fn(usize) -> G,
    f: impl FnOnce(&[Vec<G>], &mut OpLog) -> Result<SquareCircuit<G>>,
    report: &mut CompressionReport,
) -> Result<SquareCircuit<G>> {
    let (layers, fused) = chain_layers(gates, n - 1, fill)?;
    let mut log = OpLog::default();
    let sq = f(&layers, &mut log)?;
    report.turnovers = log.turnovers;
    report.fusions = log.fusions + fused;
    report.triangle_merges = log.count(|e| *e == crate::circuit::LogEvent::MergeTriangle);
    report.output_depth = sq.n();
    Ok(sq)
}

macro_rules! dispatch {
    ($lifted:expr, $n_spins:expr, $report:expr, $f:expr) => {
        match $lifted {
            Lifted::Kitaev(g, axes) => {
                let fill = |p: usize| KitaevGate(RotationGate::two(axes[p - 1], p, Angle::ZERO));
                CompressedSquare::Kitaev(run(&g, $n_spins, fill, $f, $report)?)
            }
            Lifted::Tfim(g, coupling, field) => {
                let fill = |p: usize| {
                    TfimGate(if p % 2 == 1 {
                        RotationGate::one(field, (p + 1) / 2, Angle::ZERO)
                    } else {
                        RotationGate::two(coupling, p / 2, Angle::ZERO)
                    })
                };
                CompressedSquare::Tfim(run(&g, 2 * $n_spins, fill, $f, $report)?)
            }
            Lifted::TwoAxis(g, a, b) => {
                let fill = |p: usize| TwoAxisGate { axis_a: a, axis_b: b, angle_a: Angle::ZERO, angle_b: Angle::ZERO, site: p };
                CompressedSquare::TwoAxis(run(&g, $n_spins, fill, $f, $report)?)
            }
            Lifted::Tfxy(g) => CompressedSquare::Tfxy(run(&g, $n_spins, TfxyGate::identity, $f, $report)?),
        }
    };
}

/// Compresses a full Trotter circuit to a square of minimal depth.
pub fn compress_time_dependent(layers: &[GateLayer], n_spins: usize) -> Result<(CompressedSquare, CompressionReport)> {
    let start = Instant::now();
    let gates: Vec<Gate> = layers.iter().flat_map(|l| l.gates.iter().copied()).collect();
    let mut report = CompressionReport { input_depth: layers.len(), ..Default::default() };
    let lifted = lift(&gates, n_spins)?;
    let n_chain = if matches!(lifted, Lifted::Tfim(..)) { 2 * n_spins } else { n_spins };
    let out = dispatch!(lifted, n_spins, &mut report, |l: &[Vec<_>], log: &mut OpLog| compress_chain(l, n_chain, log));
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok((out, report))
}

/// Squares the smallest number of repeated steps that fills the
/// square, then merges the triangle with itself `tau` times.
pub fn compress_time_independent(step: &[GateLayer], tau: u32, n_spins: usize) -> Result<(CompressedSquare, CompressionReport)> {
    let start = Instant::now();
    let gates: Vec<Gate> = step.iter().flat_map(|l| l.gates.iter().copied()).collect();
    let lifted = lift(&gates, n_spins)?;
    let n_chain = if matches!(lifted, Lifted::Tfim(..)) { 2 * n_spins } else { n_spins };
    let reps = fill_steps(&lifted, n_chain)?;
    let repeated: Vec<Gate> = (0..reps).flat_map(|_| gates.iter().copied()).collect();
    let mut report = CompressionReport { input_depth: step.len(), steps: reps << tau, ..Default::default() };
    let lifted = lift(&repeated, n_spins)?;
    let out = dispatch!(lifted, n_spins, &mut report, |l: &[Vec<_>], log: &mut OpLog| doubling(l, n_chain, tau, log));
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok((out, report))
}

fn fill_steps(lifted: &Lifted, n: usize) -> Result<usize> {
    fn depth<G: ChainGate>(g: &[G], n: usize, reps: usize) -> Result<usize> {
        let rep: Vec<G> = (0..reps).flat_map(|_| g.iter().cloned()).collect();
        let m = n - 1;
        let mut last: Vec<Option<usize>> = vec![None; m + 2];
        let mut depth = 0;
        for g in &rep {
            let p = g.pos();
            if p == 0 || p > m {
                return Err(Error::InvalidStep(format!("chain position {p} outside 1..={m}")));
            }
            let block = [last[p - 1], last[p], last[p + 1]].into_iter().flatten().max();
            if block.is_some() && block == last[p] {
                continue;
            }
            let mut l = block.map_or(0, |b| b + 1);
            if l % 2 != (p + 1) % 2 {
                l += 1;
            }
            last[p] = Some(l);
            depth = depth.max(l + 1);
        }
        Ok(depth)
    }
    let d = |reps| match lifted {
        Lifted::Kitaev(g, _) => depth(g, n, reps),
        Lifted::Tfim(g, ..) => depth(g, n, reps),
        Lifted::TwoAxis(g, ..) => depth(g, n, reps),
        Lifted::Tfxy(g) => depth(g, n, reps),
    };
    for reps in 1..=n {
        if d(reps)? >= n {
            return Ok(reps);
        }
    }
    Err(Error::InvalidStep(format!("repeating the step never reaches depth {n}; it must touch both bond parities")))
}
