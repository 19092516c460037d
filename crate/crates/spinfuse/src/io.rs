//! JSON circuit files.
//!
//! Angles are stored in radians. TFXY gates also carry their raw block
//! entries `[α, β, γ, δ]` as `[re, im]` pairs, which take precedence over
//! the six angles when reading so that files roundtrip exactly.

use crate::circuit::{Circuit, Frame};
use crate::error::{Error, Result};
use crate::gates::{tfxy_from_angles, tfxy_to_angles, Gate, PauliAxis, RotationGate, TfxyGate, TwoAxisGate};
use crate::models::ModelKind;
use crate::su2::Angle;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const VERSION: &str = "spinfuse-circuit/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    Rot,
    TwoAxis,
    Tfxy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub kind: GateKind,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub axes: String,
    pub sites: Vec<usize>,
    pub angles: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<[[f64; 2]; 4]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compressed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitFile {
    pub version: String,
    pub n_spins: usize,
    #[serde(default)]
    pub frame: Frame,
    pub gates: Vec<GateRecord>,
    #[serde(default)]
    pub metadata: Metadata,
}

fn sites(site: usize, span: usize) -> Vec<usize> {
    (site..site + span).collect()
}

fn record(g: &Gate) -> GateRecord {
    match g {
        Gate::Rot(r) => {
            let axes = std::iter::repeat(r.axis.letter()).take(r.arity as usize).collect();
            GateRecord { kind: GateKind::Rot, axes, sites: sites(r.site, r.arity as usize), angles: vec![r.angle.radians()], blocks: None }
        }
        Gate::TwoAxis(t) => GateRecord {
            kind: GateKind::TwoAxis,
            axes: format!("{}{}", t.axis_a.letter(), t.axis_b.letter()),
            sites: sites(t.site, 2),
            angles: vec![t.angle_a.radians(), t.angle_b.radians()],
            blocks: None,
        },
        Gate::Tfxy(t) => GateRecord {
            kind: GateKind::Tfxy,
            axes: String::new(),
            sites: sites(t.site, 2),
            angles: tfxy_to_angles(t).iter().map(Angle::radians).collect(),
            blocks: Some([t.a, t.b, t.g, t.d].map(|z| [z.re, z.im])),
        },
    }
}

fn angle(x: f64) -> Result<Angle> {
    Angle::from_radians(x).map_err(|_| Error::Parse(format!("angle {x} is not finite")))
}

fn axis_letters(r: &GateRecord, n: usize) -> Result<Vec<PauliAxis>> {
    let v = r.axes.chars().map(PauliAxis::from_char).collect::<Result<Vec<_>>>()?;
    if v.len() != n {
        return Err(Error::Parse(format!("{:?} gate needs {n} axis letters, got {:?}", r.kind, r.axes)));
    }
    Ok(v)
}

fn parse_record(r: &GateRecord, n_spins: usize) -> Result<Gate> {
    let span = match r.kind {
        GateKind::Rot => r.axes.len(),
        _ => 2,
    };
    let site = *r.sites.first().ok_or_else(|| Error::Parse("gate without sites".into()))?;
    if r.sites != sites(site, span) || site == 0 || site + span - 1 > n_spins {
        return Err(Error::InvalidSite(format!("sites {:?} invalid for a {span}-spin gate on {n_spins} spins", r.sites)));
    }
    let want = match r.kind {
        GateKind::Rot => 1,
        GateKind::TwoAxis => 2,
        GateKind::Tfxy => 6,
    };
    if r.angles.len() != want {
        return Err(Error::Parse(format!("{:?} gate needs {want} angles, got {}", r.kind, r.angles.len())));
    }
    let ang = r.angles.iter().map(|&x| angle(x)).collect::<Result<Vec<_>>>()?;
    Ok(match r.kind {
        GateKind::Rot => {
            let axes = axis_letters(r, span)?;
            if !(1..=2).contains(&span) || axes.iter().any(|&a| a != axes[0]) {
                return Err(Error::Parse(format!("rotation axes {:?} must be one letter or a repeated pair", r.axes)));
            }
            Gate::Rot(RotationGate { axis: axes[0], arity: span as u8, site, angle: ang[0] })
        }
        GateKind::TwoAxis => {
            let axes = axis_letters(r, 2)?;
            Gate::TwoAxis(TwoAxisGate::new(axes[0], axes[1], ang[0], ang[1], site)?)
        }
        GateKind::Tfxy => match r.blocks {
            Some(b) => {
                if b.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(Error::Parse("TFXY block entries must be finite".into()));
                }
                let [a, bb, g, d] = b.map(|[re, im]| C::new(re, im));
                let gate = TfxyGate { a, b: bb, g, d, site };
                if gate.norm_defect() > 1e-10 {
                    return Err(Error::Parse(format!("TFXY blocks at site {site} are not special unitary")));
                }
                Gate::Tfxy(gate)
            }
            None => Gate::Tfxy(tfxy_from_angles([ang[0], ang[1], ang[2], ang[3], ang[4], ang[5]], site)),
        },
    })
}

impl CircuitFile {
    pub fn from_circuit(c: &Circuit, metadata: Metadata) -> CircuitFile {
        CircuitFile {
            version: VERSION.into(),
            n_spins: c.n_spins,
            frame: c.frame,
            gates: c.gates.iter().map(record).collect(),
            metadata,
        }
    }

    pub fn to_circuit(&self) -> Result<Circuit> {
        if self.version != VERSION {
            return Err(Error::Parse(format!("unsupported file version {:?}, expected {VERSION:?}", self.version)));
        }
        let gates = self.gates.iter().map(|r| parse_record(r, self.n_spins)).collect::<Result<Vec<_>>>()?;
        let c = Circuit { n_spins: self.n_spins, frame: self.frame, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<CircuitFile> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<CircuitFile> {
        CircuitFile::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}
