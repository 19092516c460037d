//! Fixed-topology containers and their structural rewrites.
//!
//! Everything here works on a generator chain with bond positions `1..=M`
//! and `n = M + 1` virtual spins. For Kitaev, XY and TFXY chains the bonds
//! are the physical bonds; a TFIM chain of `N` spins has `M = 2N − 1`.
//!
//! A square holds `n` layers; layer `l` carries the bonds `≡ l (mod 2)`.
//! A triangle holds `M` descending cascades; cascade `i` covers bonds
//! `M−i+1 ..= M` and the cascades are applied in the order `1, 2, …, M`.
//! Both hold `n(n−1)/2` gates.
//!
//! Merging on the left means the incoming gate acts *before* the triangle;
//! merging on the right means it acts after.

use crate::error::{Error, Result};
use crate::gates::{ChainGate, Gate, PauliAxis};
use crate::su2::Su2;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

/// Axis relabeling for TFXY circuits. Gates are stored in the XY frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    #[default]
    Xy,
    Xz,
    Yz,
}

impl Frame {
    /// `V` with physical gate `= (V⊗V)·G·(V⊗V)†`.
    pub fn conjugator(self) -> Su2 {
        match self {
            Frame::Xy => Su2::identity(),
            Frame::Xz => Su2::new(C::new(0.0, -FRAC_1_SQRT_2), C::new(FRAC_1_SQRT_2, 0.0)),
            Frame::Yz => Su2::new(C::new(0.5, -0.5), C::new(0.5, -0.5)),
        }
    }

    /// Physical axis and sign of a stored axis: `V σ V† = sign · σ'`.
    pub fn map_axis(self, a: PauliAxis) -> (PauliAxis, f64) {
        use PauliAxis::*;
        match (self, a) {
            (Frame::Xy, a) => (a, 1.0),
            (Frame::Xz, X) => (X, -1.0),
            (Frame::Xz, Y) => (Z, 1.0),
            (Frame::Xz, Z) => (Y, 1.0),
            (Frame::Yz, X) => (Y, 1.0),
            (Frame::Yz, Y) => (Z, 1.0),
            (Frame::Yz, Z) => (X, 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Frame::Xy => "xy",
            Frame::Xz => "xz",
            Frame::Yz => "yz",
        }
    }
}

/// A flat gate list in time order.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n_spins: usize,
    pub frame: Frame,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_spins: usize, gates: Vec<Gate>) -> Result<Circuit> {
        let c = Circuit { n_spins, frame: Frame::Xy, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn from_layers(n_spins: usize, frame: Frame, layers: &[GateLayer]) -> Result<Circuit> {
        let gates = layers.iter().flat_map(|l| l.gates.iter().copied()).collect();
        let c = Circuit { n_spins, frame, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_spins == 0 {
            return Err(Error::InvalidCircuit("circuit needs at least one spin".into()));
        }
        for g in &self.gates {
            let (s, w) = (g.site(), g.span());
            if s == 0 || s + w - 1 > self.n_spins {
                return Err(Error::InvalidSite(format!("{g:?} does not fit on {} spins", self.n_spins)));
            }
        }
        Ok(())
    }

    pub fn count_by_span(&self) -> (usize, usize) {
        let one = self.gates.iter().filter(|g| g.span() == 1).count();
        (one, self.gates.len() - one)
    }

    /// Packs the gate list into as-soon-as-possible layers.
    pub fn layers(&self) -> Vec<GateLayer> {
        let mut front = vec![0usize; self.n_spins + 1];
        let mut out: Vec<GateLayer> = Vec::new();
        for g in &self.gates {
            let cover = g.site()..g.site() + g.span();
            let l = front[cover.clone()].iter().copied().max().unwrap_or(0);
            if l == out.len() {
                out.push(GateLayer::default());
            }
            out[l].gates.push(g.clone());
            front[cover].fill(l + 1);
        }
        out
    }

    pub fn depth(&self) -> usize {
        self.layers().len()
    }
}

/// Non-overlapping gates applied simultaneously.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GateLayer {
    pub gates: Vec<Gate>,
}

impl GateLayer {
    pub fn new(gates: Vec<Gate>) -> Result<GateLayer> {
        let mut occupied: Vec<(usize, usize)> = gates.iter().map(|g| (g.site(), g.site() + g.span() - 1)).collect();
        occupied.sort();
        for w in occupied.windows(2) {
            if w[1].0 <= w[0].1 {
                return Err(Error::InvalidLayer(format!("gates on spins {:?} and {:?} overlap", w[0], w[1])));
            }
        }
        Ok(GateLayer { gates })
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

/// Counters and coarse events of structural rewrites.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OpLog {
    pub turnovers: u64,
    pub fusions: u64,
    pub events: Vec<LogEvent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogEvent {
    SquareToTriangle,
    TriangleToSquare,
    MergeGate { side: Side, pos: usize },
    MergeLayer { parity: usize },
    MergeTriangle,
}

impl OpLog {
    pub fn count(&self, f: impl Fn(&LogEvent) -> bool) -> usize {
        self.events.iter().filter(|e| f(e)).count()
    }

    fn turn<G: ChainGate>(&mut self, a: &G, b: &G, c: &G) -> Result<(G, G, G)> {
        self.turnovers += 1;
        G::turnover(a, b, c)
    }

    fn fuse<G: ChainGate>(&mut self, first: &G, second: &G) -> Result<G> {
        self.fusions += 1;
        G::fuse(first, second)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Bond index increases with time.
    Descending,
    /// Bond index decreases with time.
    Ascending,
}

/// A run of gates on consecutive bonds `start ..` in time order.
#[derive(Debug, Clone, PartialEq)]
pub struct Cascade<G> {
    pub start: usize,
    pub orientation: Orientation,
    /// Indexed by bond offset from `start`, regardless of orientation.
    pub gates: Vec<G>,
}

impl<G: ChainGate> Cascade<G> {
    pub fn new(orientation: Orientation, gates_in_time_order: Vec<G>) -> Result<Cascade<G>> {
        let mut gates = gates_in_time_order;
        if orientation == Orientation::Ascending {
            gates.reverse();
        }
        let start = gates.first().map(|g| g.pos()).ok_or_else(|| Error::InvalidCircuit("empty cascade".into()))?;
        for (k, g) in gates.iter().enumerate() {
            if g.pos() != start + k {
                return Err(Error::InvalidCircuit(format!("cascade gate at {} breaks the run from {start}", g.pos())));
            }
        }
        Ok(Cascade { start, orientation, gates })
    }

    pub fn end(&self) -> usize {
        self.start + self.gates.len() - 1
    }

    pub fn at(&self, bond: usize) -> &G {
        &self.gates[bond - self.start]
    }

    fn set(&mut self, bond: usize, g: G) {
        let s = self.start;
        self.gates[bond - s] = g;
    }

    pub fn in_time_order(&self) -> Vec<G> {
        let mut v = self.gates.clone();
        if self.orientation == Orientation::Ascending {
            v.reverse();
        }
        v
    }
}

/// Moves `free` across `cascade` with one turnover and returns it on the
/// other side, shifted by one bond.
pub fn pass_through_cascade<G: ChainGate>(free: &G, cascade: &mut Cascade<G>, side: Side, log: &mut OpLog) -> Result<G> {
    let k = free.pos();
    let (s, e) = (cascade.start, cascade.end());
    let bad = || Error::InvalidPass(format!("gate at bond {k} cannot enter cascade [{s}..{e}] from the {side:?}"));
    use Orientation::*;
    match (cascade.orientation, side) {
        (Descending, Side::Right) => {
            if k < s || k >= e {
                return Err(bad());
            }
            let (u1, u2, u3) = log.turn(cascade.at(k), cascade.at(k + 1), free)?;
            cascade.set(k, u2);
            cascade.set(k + 1, u3);
            Ok(u1)
        }
        (Descending, Side::Left) => {
            if k <= s || k > e {
                return Err(bad());
            }
            let (u1, u2, u3) = log.turn(free, cascade.at(k - 1), cascade.at(k))?;
            cascade.set(k - 1, u1);
            cascade.set(k, u2);
            Ok(u3)
        }
        (Ascending, Side::Left) => {
            if k < s || k >= e {
                return Err(bad());
            }
            let (u1, u2, u3) = log.turn(free, cascade.at(k + 1), cascade.at(k))?;
            cascade.set(k + 1, u1);
            cascade.set(k, u2);
            Ok(u3)
        }
        (Ascending, Side::Right) => {
            if k <= s || k > e {
                return Err(bad());
            }
            let (u1, u2, u3) = log.turn(cascade.at(k), cascade.at(k - 1), free)?;
            cascade.set(k, u2);
            cascade.set(k - 1, u3);
            Ok(u1)
        }
    }
}

fn layer_start(l: usize) -> usize {
    if l % 2 == 1 {
        1
    } else {
        2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SquareCircuit<G> {
    n: usize,
    layers: Vec<Vec<G>>,
}

impl<G: ChainGate> SquareCircuit<G> {
    /// `layers[l−1]` holds the gates of layer `l` sorted by bond.
    pub fn new(n: usize, layers: Vec<Vec<G>>) -> Result<SquareCircuit<G>> {
        if n < 2 {
            return Err(Error::InvalidCircuit(format!("square needs at least 2 spins, got {n}")));
        }
        if layers.len() != n {
            return Err(Error::InvalidCircuit(format!("square on {n} spins needs {n} layers, got {}", layers.len())));
        }
        let m = n - 1;
        for (idx, layer) in layers.iter().enumerate() {
            let want: Vec<usize> = (layer_start(idx + 1)..=m).step_by(2).collect();
            let got: Vec<usize> = layer.iter().map(|g| g.pos()).collect();
            if want != got {
                return Err(Error::InvalidCircuit(format!("layer {} has bonds {got:?}, expected {want:?}", idx + 1)));
            }
        }
        Ok(SquareCircuit { n, layers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[Vec<G>] {
        &self.layers
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn gates(&self) -> Vec<G> {
        self.layers.iter().flatten().cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriangleCircuit<G> {
    n: usize,
    slots: Vec<G>,
}

impl<G: ChainGate> TriangleCircuit<G> {
    /// `cascades[i−1]` holds cascade `i` in time order.
    pub fn new(n: usize, cascades: Vec<Vec<G>>) -> Result<TriangleCircuit<G>> {
        if n < 2 {
            return Err(Error::InvalidCircuit(format!("triangle needs at least 2 spins, got {n}")));
        }
        let m = n - 1;
        if cascades.len() != m {
            return Err(Error::InvalidCircuit(format!("triangle on {n} spins needs {m} cascades, got {}", cascades.len())));
        }
        for (idx, c) in cascades.iter().enumerate() {
            let i = idx + 1;
            let want: Vec<usize> = (m - i + 1..=m).collect();
            let got: Vec<usize> = c.iter().map(|g| g.pos()).collect();
            if want != got {
                return Err(Error::InvalidCircuit(format!("cascade {i} has bonds {got:?}, expected {want:?}")));
            }
        }
        let mut slots = Vec::with_capacity(m * (m + 1) / 2);
        for r in 0..m {
            for i in (r + 1..=m).rev() {
                slots.push(cascades[i - 1][r].clone());
            }
        }
        Ok(TriangleCircuit { n, slots })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn m(&self) -> usize {
        self.n - 1
    }

    // Offset-major: all cascades' r-th gates together, cascade index
    // decreasing, so right merges walk memory forward.
    fn slot(&self, i: usize, b: usize) -> usize {
        let m = self.m();
        let r = b + i - m - 1;
        r * (2 * m + 1 - r) / 2 + m - i
    }

    pub fn get(&self, cascade: usize, bond: usize) -> &G {
        &self.slots[self.slot(cascade, bond)]
    }

    pub fn gate_count(&self) -> usize {
        self.slots.len()
    }

    pub fn cascades(&self) -> Vec<Vec<G>> {
        let m = self.m();
        (1..=m).map(|i| (m - i + 1..=m).map(|b| self.get(i, b).clone()).collect()).collect()
    }

    /// Gates in time order.
    pub fn gates(&self) -> Vec<G> {
        self.cascades().into_iter().flatten().collect()
    }

    fn check_pos(&self, g: &G) -> Result<usize> {
        let k = g.pos();
        if k == 0 || k > self.m() {
            return Err(Error::InvalidSite(format!("bond {k} outside 1..={}", self.m())));
        }
        Ok(k)
    }

    /// Absorbs `g` acting before (left) or after (right) the triangle.
    pub fn merge_gate(&mut self, g: &G, side: Side, log: &mut OpLog) -> Result<()> {
        let k = self.check_pos(g)?;
        let m = self.m();
        log.events.push(LogEvent::MergeGate { side, pos: k });
        let mut g = g.clone();
        match side {
            Side::Left => {
                // ascending cascade j holds bond b in descending cascade j + M − b
                for j in 1.. {
                    let kk = k + j - 1;
                    if kk == m {
                        let s = self.slot(j, m);
                        self.slots[s] = log.fuse(&g, &self.slots[s])?;
                        return Ok(());
                    }
                    let (s_hi, s_lo) = (self.slot(j + m - kk - 1, kk + 1), self.slot(j + m - kk, kk));
                    let (u1, u2, u3) = log.turn(&g, &self.slots[s_hi], &self.slots[s_lo])?;
                    self.slots[s_hi] = u1;
                    self.slots[s_lo] = u2;
                    g = u3;
                }
            }
            Side::Right => {
                for t in 0.. {
                    let (i, kk) = (m - t, k + t);
                    if kk == m {
                        let s = self.slot(i, m);
                        self.slots[s] = log.fuse(&self.slots[s], &g)?;
                        return Ok(());
                    }
                    let (s_lo, s_hi) = (self.slot(i, kk), self.slot(i, kk + 1));
                    let (u1, u2, u3) = log.turn(&self.slots[s_lo], &self.slots[s_hi], &g)?;
                    self.slots[s_lo] = u2;
                    self.slots[s_hi] = u3;
                    g = u1;
                }
            }
        }
        unreachable!()
    }

    /// Right-merges one layer of non-overlapping gates.
    pub fn merge_layer(&mut self, layer: &[G], log: &mut OpLog) -> Result<()> {
        let mut pos: Vec<usize> = layer.iter().map(|g| g.pos()).collect();
        pos.sort_unstable();
        if pos.windows(2).any(|w| w[1] < w[0] + 2) {
            return Err(Error::InvalidLayer(format!("layer bonds {pos:?} overlap")));
        }
        let parity = pos.first().map_or(0, |p| p % 2);
        log.events.push(LogEvent::MergeLayer { parity });
        let mut sorted: Vec<&G> = layer.iter().collect();
        sorted.sort_by_key(|g| g.pos());
        for g in sorted {
            self.merge_gate(g, Side::Right, log)?;
        }
        Ok(())
    }

    /// Appends `src` after `self`, gate by gate.
    pub fn merge_triangle(&mut self, src: &TriangleCircuit<G>, log: &mut OpLog) -> Result<()> {
        if src.n != self.n {
            return Err(Error::InvalidMerge(format!("triangles on {} and {} spins", self.n, src.n)));
        }
        log.events.push(LogEvent::MergeTriangle);
        for g in &src.gates() {
            self.merge_gate(g, Side::Right, log)?;
        }
        Ok(())
    }
}

fn diagonal_cascades<G: ChainGate>(sq: &SquareCircuit<G>) -> Vec<Cascade<G>> {
    let n = sq.n as isize;
    let m = n - 1;
    let mut out = Vec::new();
    // square = product of diagonals d = b − l, highest d first
    let mut d = m - 1;
    while d > -n {
        let gates: Vec<G> = (1..=n)
            .filter_map(|l| {
                let b = l + d;
                if b >= 1 && b <= m && (b - l) % 2 == 0 {
                    let layer = &sq.layers[(l - 1) as usize];
                    Some(layer[((b - layer_start(l as usize) as isize) / 2) as usize].clone())
                } else {
                    None
                }
            })
            .collect();
        if !gates.is_empty() {
            out.push(Cascade::new(Orientation::Descending, gates).expect("diagonal is a run"));
        }
        d -= 1;
    }
    out
}

/// Rewrites a square into a triangle with `Σ (2j−1)(M+1−2j)` turnovers.
pub fn square_to_triangle<G: ChainGate>(sq: &SquareCircuit<G>, log: &mut OpLog) -> Result<TriangleCircuit<G>> {
    let m = sq.n - 1;
    let mut list = diagonal_cascades(sq);
    log.events.push(LogEvent::SquareToTriangle);
    let tops: usize = list.iter().filter(|c| c.end() < m).count();
    let first_top = list.len() - tops;
    for j in 0..tops {
        let mut idx = first_top + j;
        while list[idx].end() < m {
            let (head, tail) = list.split_at_mut(idx);
            let (d, c) = (&mut head[idx - 1], &mut tail[0]);
            if d.start != c.start || d.end() < c.end() + 1 {
                return Err(Error::InvalidPass(format!(
                    "cascade [{}..{}] cannot pass [{}..{}]",
                    c.start,
                    c.end(),
                    d.start,
                    d.end()
                )));
            }
            let mut moved = Vec::with_capacity(c.gates.len());
            for b in c.start..=c.end() {
                let (u1, u2, u3) = log.turn(d.at(b), d.at(b + 1), c.at(b))?;
                d.set(b, u2);
                d.set(b + 1, u3);
                moved.push(u1);
            }
            c.start += 1;
            c.gates = moved;
            list.swap(idx - 1, idx);
            idx -= 1;
        }
    }
    TriangleCircuit::new(sq.n, list.into_iter().map(|c| c.gates).collect())
}

/// Inverse of [`square_to_triangle`].
pub fn triangle_to_square<G: ChainGate>(tri: &TriangleCircuit<G>, log: &mut OpLog) -> Result<SquareCircuit<G>> {
    let n = tri.n;
    let m = n - 1;
    log.events.push(LogEvent::TriangleToSquare);
    let mut list: Vec<Cascade<G>> = tri
        .cascades()
        .into_iter()
        .map(|g| Cascade::new(Orientation::Descending, g).expect("triangle cascade is a run"))
        .collect();
    let mut len = if m % 2 == 0 { 1 } else { 2 };
    while len < m {
        let mut idx = list.iter().position(|c| c.gates.len() == len && c.end() == m).expect("cascade of this length");
        while list[idx].start > 1 {
            let (head, tail) = list.split_at_mut(idx + 1);
            let (c, d) = (&mut head[idx], &mut tail[0]);
            if d.start + 1 != c.start || d.end() < c.end() {
                return Err(Error::InvalidPass(format!(
                    "cascade [{}..{}] cannot pass [{}..{}]",
                    c.start,
                    c.end(),
                    d.start,
                    d.end()
                )));
            }
            let mut moved = vec![c.gates[0].clone(); c.gates.len()];
            for b in (c.start..=c.end()).rev() {
                let (u1, u2, u3) = log.turn(c.at(b), d.at(b - 1), d.at(b))?;
                d.set(b - 1, u1);
                d.set(b, u2);
                moved[b - c.start] = u3;
            }
            c.start -= 1;
            c.gates = moved;
            list.swap(idx, idx + 1);
            idx += 1;
        }
        len += 2;
    }
    let mut layers: Vec<Vec<G>> = vec![Vec::new(); n];
    for c in list {
        let d = if c.end() == m { c.start as isize - 1 } else { c.end() as isize - m as isize - 1 };
        for (k, g) in c.gates.into_iter().enumerate() {
            let b = (c.start + k) as isize;
            let l = b - d;
            if l < 1 || l > n as isize {
                return Err(Error::InvalidCircuit(format!("gate at bond {b} maps to layer {l}")));
            }
            layers[(l - 1) as usize].push(g);
        }
    }
    for layer in &mut layers {
        layer.sort_by_key(|g| g.pos());
    }
    SquareCircuit::new(n, layers)
}
