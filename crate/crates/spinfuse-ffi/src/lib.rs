//! C ABI over `spinfuse`.
//!
//! Circuits are passed as opaque `SfCircuit` handles. Every fallible call
//! returns an `SfStatus`; the message of the last failure on the calling
//! thread is available from `sf_last_error`. Strings returned through out
//! parameters are owned by the caller and released with `sf_string_free`.

use spinfuse::circuit::{Circuit, Frame, GateLayer};
use spinfuse::compress::{compress_time_dependent, compress_time_independent};
use spinfuse::gates::PauliAxis;
use spinfuse::io::{CircuitFile, Metadata};
use spinfuse::models::{full_trotter_circuit, random_schedule, ModelKind};
use spinfuse::oracle::{circuit_unitary, frobenius_distance, phase_aligned_distance};
use spinfuse::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Precondition = 3,
    WrongModel = 4,
    SizeLimit = 5,
    Parse = 6,
    Io = 7,
    Internal = 8,
}

/// Opaque circuit handle.
pub struct SfCircuit {
    circuit: Circuit,
    metadata: Metadata,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(e: Error) -> SfStatus {
    set_error(&e.to_string());
    match e {
        Error::Precondition(_) => SfStatus::Precondition,
        Error::WrongModel(_) => SfStatus::WrongModel,
        Error::SizeLimit(_) => SfStatus::SizeLimit,
        Error::Parse(_) | Error::Json(_) => SfStatus::Parse,
        Error::Io(_) => SfStatus::Io,
        Error::NumericalConsistency(_) => SfStatus::Internal,
        _ => SfStatus::InvalidArgument,
    }
}

fn null_arg(name: &str) -> SfStatus {
    set_error(&format!("{name} is null"));
    SfStatus::NullPointer
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, SfStatus> {
    if p.is_null() {
        return Err(null_arg(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(&format!("{name} is not valid UTF-8"));
        SfStatus::InvalidArgument
    })
}

fn into_handle(circuit: Circuit, metadata: Metadata) -> *mut SfCircuit {
    Box::into_raw(Box::new(SfCircuit { circuit, metadata }))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> SfStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            SfStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte");
            SfStatus::Internal
        }
    }
}

fn parse_model(name: &str, axes: Option<&str>, n_spins: usize) -> Result<ModelKind, Error> {
    let letters = |s: &str| s.chars().map(PauliAxis::from_char).collect::<Result<Vec<_>, _>>();
    let pair = |s: Option<&str>, d: [PauliAxis; 2]| -> Result<[PauliAxis; 2], Error> {
        match s.map(letters).transpose()?.as_deref() {
            None => Ok(d),
            Some(&[a, b]) => Ok([a, b]),
            Some(_) => Err(Error::InvalidArgument("axes must be two letters".into())),
        }
    };
    let m = match name {
        "ising" => match axes.map(letters).transpose()?.as_deref() {
            None => ModelKind::Ising { axis: PauliAxis::Z },
            Some(&[a]) => ModelKind::Ising { axis: a },
            Some(_) => return Err(Error::InvalidArgument("ising axes must be one letter".into())),
        },
        "kitaev" => match axes {
            None => ModelKind::default_kitaev(n_spins),
            Some(s) => ModelKind::Kitaev { axes: letters(s)? },
        },
        "xy" => {
            let [a, b] = pair(axes, [PauliAxis::X, PauliAxis::Y])?;
            ModelKind::Xy { a, b }
        }
        "tfim" => {
            let [coupling, field] = pair(axes, [PauliAxis::X, PauliAxis::Z])?;
            ModelKind::Tfim { coupling, field }
        }
        "tfxy" => ModelKind::Tfxy {
            frame: match axes {
                None | Some("xy") => Frame::Xy,
                Some("xz") => Frame::Xz,
                Some("yz") => Frame::Yz,
                Some(s) => return Err(Error::InvalidArgument(format!("unknown frame {s:?}"))),
            },
        },
        _ => return Err(Error::InvalidArgument(format!("unknown model {name:?}"))),
    };
    m.validate(n_spins)?;
    Ok(m)
}

/// Message of the last failed call on this thread. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn sf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Random-parameter Trotter circuit. `model` is one of `ising`, `kitaev`,
/// `xy`, `tfim`, `tfxy`; `axes` may be null for the model default.
///
/// # Safety
/// `model` and a non-null `axes` must be NUL-terminated strings; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_generate(
    model: *const c_char,
    axes: *const c_char,
    n_spins: usize,
    n_steps: usize,
    dt: f64,
    seed: u64,
    out: *mut *mut SfCircuit,
) -> SfStatus {
    if out.is_null() {
        return null_arg("out");
    }
    let name = match read_str(model, "model") {
        Ok(s) => s,
        Err(s) => return s,
    };
    let axes = if axes.is_null() {
        None
    } else {
        match read_str(axes, "axes") {
            Ok(s) => Some(s),
            Err(s) => return s,
        }
    };
    let built = parse_model(name, axes, n_spins).and_then(|m| {
        let s = random_schedule(m, n_spins, n_steps, dt, seed)?;
        let c = Circuit::from_layers(n_spins, s.model.frame(), &full_trotter_circuit(&s)?)?;
        let meta = Metadata { model: Some(s.model), seed: Some(seed), n_t: Some(n_steps), dt: Some(dt), compressed: None };
        Ok((c, meta))
    });
    match built {
        Ok((c, meta)) => {
            *out = into_handle(c, meta);
            SfStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_circuit_from_json(json: *const c_char, out: *mut *mut SfCircuit) -> SfStatus {
    if out.is_null() {
        return null_arg("out");
    }
    let text = match read_str(json, "json") {
        Ok(s) => s,
        Err(s) => return s,
    };
    match CircuitFile::from_json(text).and_then(|f| Ok((f.to_circuit()?, f.metadata))) {
        Ok((c, meta)) => {
            *out = into_handle(c, meta);
            SfStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_circuit_to_json(c: *const SfCircuit, out: *mut *mut c_char) -> SfStatus {
    if c.is_null() || out.is_null() {
        return null_arg("circuit or out");
    }
    let c = &*c;
    match CircuitFile::from_circuit(&c.circuit, c.metadata.clone()).to_json() {
        Ok(s) => put_string(out, s),
        Err(e) => fail(e),
    }
}

/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_circuit_to_qasm(c: *const SfCircuit, out: *mut *mut c_char) -> SfStatus {
    if c.is_null() || out.is_null() {
        return null_arg("circuit or out");
    }
    match spinfuse::qasm::export(&(*c).circuit) {
        Ok(s) => put_string(out, s),
        Err(e) => fail(e),
    }
}

/// Compresses to a square of depth N. A negative `tau` treats the input as
/// a time-dependent schedule; `tau ≥ 0` treats it as one repeated step and
/// applies that many self-merges.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_circuit_compress(c: *const SfCircuit, tau: i32, out: *mut *mut SfCircuit) -> SfStatus {
    if c.is_null() || out.is_null() {
        return null_arg("circuit or out");
    }
    let c = &*c;
    let layers: Vec<GateLayer> = c.circuit.layers();
    let res = if tau < 0 {
        compress_time_dependent(&layers, c.circuit.n_spins)
    } else {
        compress_time_independent(&layers, tau as u32, c.circuit.n_spins)
    };
    match res {
        Ok((sq, report)) => {
            let n_t = if tau < 0 { c.metadata.n_t } else { Some(report.steps * c.metadata.n_t.unwrap_or(1)) };
            let meta = Metadata { n_t, compressed: Some(true), ..c.metadata.clone() };
            *out = into_handle(sq.to_circuit(c.circuit.frame), meta);
            SfStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `c` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sf_circuit_n_spins(c: *const SfCircuit) -> usize {
    if c.is_null() {
        0
    } else {
        (*c).circuit.n_spins
    }
}

/// # Safety
/// `c` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sf_circuit_gate_count(c: *const SfCircuit) -> usize {
    if c.is_null() {
        0
    } else {
        (*c).circuit.gates.len()
    }
}

/// # Safety
/// `c` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sf_circuit_depth(c: *const SfCircuit) -> usize {
    if c.is_null() {
        0
    } else {
        (*c).circuit.depth()
    }
}

/// Frobenius distance between the dense unitaries of two circuits.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_circuit_distance(a: *const SfCircuit, b: *const SfCircuit, phase_align: bool, out: *mut f64) -> SfStatus {
    if a.is_null() || b.is_null() || out.is_null() {
        return null_arg("circuit or out");
    }
    let (a, b) = (&(*a).circuit, &(*b).circuit);
    if a.n_spins != b.n_spins {
        return fail(Error::InvalidArgument(format!("circuits act on {} and {} spins", a.n_spins, b.n_spins)));
    }
    let d = circuit_unitary(a).and_then(|ua| {
        let ub = circuit_unitary(b)?;
        if phase_align {
            phase_aligned_distance(&ua, &ub)
        } else {
            frobenius_distance(&ua, &ub)
        }
    });
    match d {
        Ok(d) => {
            *out = d;
            SfStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `c` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_circuit_free(c: *mut SfCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
