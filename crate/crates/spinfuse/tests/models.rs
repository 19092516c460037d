mod common;

use common::*;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use spinfuse::circuit::{Circuit, Frame, GateLayer};
use spinfuse::gates::*;
use spinfuse::models::*;
use spinfuse::oracle::{circuit_unitary, frobenius_distance, gates_unitary};
use spinfuse::Error;
use PauliAxis::*;

fn flat(layers: &[GateLayer]) -> Vec<Gate> {
    layers.iter().flat_map(|l| l.gates.iter().copied()).collect()
}

fn circ(s: &HamiltonianSchedule, layers: &[GateLayer]) -> Circuit {
    Circuit::from_layers(s.n_spins, s.model.frame(), layers).unwrap()
}

fn to_mat(u: &spinfuse::oracle::DenseUnitary) -> Mat {
    (0..u.dim()).map(|r| (0..u.dim()).map(|c| u.get(r, c)).collect()).collect()
}

fn sum(terms: Vec<Mat>, dim: usize) -> Mat {
    terms.into_iter().fold(zeros(dim), |acc, t| add(&acc, &t))
}

/// Physical axes `(coupling 1, coupling 2, field)` of a TFXY frame.
fn tfxy_axes(frame: Frame) -> (PauliAxis, PauliAxis, PauliAxis) {
    match frame {
        Frame::Xy => (X, Y, Z),
        Frame::Xz => (X, Z, Y),
        Frame::Yz => (Y, Z, X),
    }
}

/// Field, odd-bond and even-bond Hamiltonians of step `tau`, each as a list of terms.
fn split_terms(s: &HamiltonianSchedule, tau: usize) -> [Vec<Mat>; 3] {
    let n = s.n_spins;
    let t = tau - 1;
    let w = |x: f64, m: Mat| scale(&m, C::new(x, 0.0));
    let bond = |b: usize| -> Vec<Mat> {
        match &s.model {
            ModelKind::Ising { axis } => vec![w(s.couplings[0][t][b - 1], sigma2(*axis, b, n))],
            ModelKind::Tfim { coupling, .. } => vec![w(s.couplings[0][t][b - 1], sigma2(*coupling, b, n))],
            ModelKind::Kitaev { axes } => vec![w(s.couplings[0][t][b - 1], sigma2(axes[b - 1], b, n))],
            ModelKind::Xy { a, b: bb } => vec![
                w(s.couplings[0][t][b - 1], sigma2(*a, b, n)),
                w(s.couplings[1][t][b - 1], sigma2(*bb, b, n)),
            ],
            ModelKind::Tfxy { frame } => {
                let (a, bb, _) = tfxy_axes(*frame);
                vec![w(s.couplings[0][t][b - 1], sigma2(a, b, n)), w(s.couplings[1][t][b - 1], sigma2(bb, b, n))]
            }
        }
    };
    let field_axis = match &s.model {
        ModelKind::Ising { axis } => Some(*axis),
        ModelKind::Tfim { field, .. } => Some(*field),
        ModelKind::Tfxy { frame } => Some(tfxy_axes(*frame).2),
        _ => None,
    };
    let fields = field_axis.map_or(vec![], |ax| (1..=n).map(|i| w(s.fields[0][t][i - 1], sigma(ax, i, n))).collect());
    let odd = (1..n).step_by(2).flat_map(bond).collect();
    let even = (2..n).step_by(2).flat_map(bond).collect();
    [fields, odd, even]
}

fn reference_step(s: &HamiltonianSchedule, tau: usize) -> Mat {
    let dim = 1 << s.n_spins;
    let ops: Vec<Mat> = split_terms(s, tau).into_iter().map(|h| expm_herm(&sum(h, dim), s.dt)).collect();
    time_product(&ops)
}

fn all_models(n: usize) -> Vec<ModelKind> {
    vec![
        ModelKind::Ising { axis: Z },
        ModelKind::default_kitaev(n),
        ModelKind::Kitaev { axes: (0..n - 1).map(|i| [Y, X, Z, X][i % 4]).collect() },
        ModelKind::Xy { a: X, b: Y },
        ModelKind::Xy { a: Y, b: Z },
        ModelKind::Tfim { coupling: X, field: Z },
        ModelKind::Tfim { coupling: Z, field: Y },
        ModelKind::Tfxy { frame: Frame::Xy },
        ModelKind::Tfxy { frame: Frame::Xz },
        ModelKind::Tfxy { frame: Frame::Yz },
    ]
}

#[test]
fn step_matches_split_exponentials_for_every_model() {
    for n in 2..=7 {
        for model in all_models(n) {
            let s = random_schedule(model.clone(), n, 2, 0.3, 40 + n as u64).unwrap();
            for tau in 1..=2 {
                let u = to_mat(&circuit_unitary(&circ(&s, &trotter_step(&s, tau).unwrap())).unwrap());
                let d = dist(&u, &reference_step(&s, tau));
                assert!(d < 1e-13, "{model:?} n={n} tau={tau}: {d:e}");
            }
        }
    }
}

#[test]
fn zero_ising_is_identity() {
    let s = HamiltonianSchedule::constant(ModelKind::Ising { axis: X }, 4, 3, 0.1, vec![vec![0.0; 3]], vec![vec![0.0; 4]]).unwrap();
    for g in flat(&full_trotter_circuit(&s).unwrap()) {
        let Gate::Rot(r) = g else { panic!() };
        assert_eq!(r.angle, spinfuse::su2::Angle::ZERO);
    }
    let u = circuit_unitary(&circ(&s, &full_trotter_circuit(&s).unwrap())).unwrap();
    assert_eq!(frobenius_distance(&u, &spinfuse::oracle::DenseUnitary::identity(4).unwrap()).unwrap(), 0.0);
}

#[test]
fn kitaev_example_layout() {
    let (j, dt) = ([0.3, -0.5, 0.7, 1.1], 0.2);
    let model = ModelKind::Kitaev { axes: vec![Y, X, Z, X] };
    let s = HamiltonianSchedule::constant(model, 5, 1, dt, vec![j.to_vec()], vec![]).unwrap();
    let gates = flat(&trotter_step(&s, 1).unwrap());
    let got: Vec<(PauliAxis, usize, f64)> = gates
        .iter()
        .map(|g| match g {
            Gate::Rot(r) => (r.axis, r.site, r.angle.radians()),
            _ => panic!(),
        })
        .collect();
    let want = [(Y, 1, 2.0 * j[0] * dt), (Z, 3, 2.0 * j[2] * dt), (X, 2, 2.0 * j[1] * dt), (X, 4, 2.0 * j[3] * dt)];
    for (g, w) in got.iter().zip(&want) {
        assert_eq!((g.0, g.1), (w.0, w.1));
        assert!((g.2 - w.2).abs() < 1e-15);
    }
    assert_eq!(got.len(), 4);
}

#[test]
fn tfxy_step_layout() {
    use spinfuse::su2::Angle;
    for n in [4, 5] {
        let s = random_schedule(ModelKind::Tfxy { frame: Frame::Xy }, n, 1, 0.1, 3).unwrap();
        let layers = trotter_step(&s, 1).unwrap();
        let sites: Vec<Vec<usize>> = layers.iter().map(|l| l.gates.iter().map(|g| g.site()).collect()).collect();
        assert_eq!(sites, if n == 4 { vec![vec![1, 3], vec![2]] } else { vec![vec![1, 3], vec![2, 4]] });
        let rad = |x: f64| Angle::from_radians(2.0 * x * s.dt).unwrap();
        for g in flat(&layers) {
            let Gate::Tfxy(t) = g else { panic!() };
            let k = t.site;
            let (f1, f2) = match (k % 2, k == n - 1 && n % 2 == 1) {
                (1, _) => (rad(s.fields[0][0][k - 1]), rad(s.fields[0][0][k])),
                (_, true) => (Angle::ZERO, rad(s.fields[0][0][k])),
                _ => (Angle::ZERO, Angle::ZERO),
            };
            let want = tfxy_from_angles([f1, f2, rad(s.couplings[0][0][k - 1]), rad(s.couplings[1][0][k - 1]), Angle::ZERO, Angle::ZERO], k);
            assert!(dist(&from4(&want.dense()), &from4(&t.dense())) < 1e-15);
        }
    }
}

#[test]
fn full_circuit_is_ordered_product_of_steps() {
    let s = random_schedule(ModelKind::Xy { a: X, b: Y }, 6, 10, 0.05, 9).unwrap();
    let full = flat(&full_trotter_circuit(&s).unwrap());
    let u = gates_unitary(6, Frame::Xy, &full).unwrap();
    let steps: Vec<Mat> = (1..=10).map(|t| to_mat(&circuit_unitary(&circ(&s, &trotter_step(&s, t).unwrap())).unwrap())).collect();
    assert!(dist(&to_mat(&u), &time_product(&steps)) < 1e-13);

    let one = random_schedule(ModelKind::Tfxy { frame: Frame::Xy }, 4, 1, 0.1, 2).unwrap();
    assert_eq!(full_trotter_circuit(&one).unwrap(), trotter_step(&one, 1).unwrap());

    let ising = HamiltonianSchedule::constant(ModelKind::Ising { axis: Z }, 3, 3, 0.1, vec![vec![1.0, 2.0]], vec![vec![0.5; 3]]).unwrap();
    let layers = full_trotter_circuit(&ising).unwrap();
    assert_eq!(layers.len(), 9);
    assert_eq!(layers[0..3], layers[3..6]);
    assert_eq!(layers[3..6], layers[6..9]);
}

#[test]
fn step_index_is_checked() {
    let s = random_schedule(ModelKind::Xy { a: X, b: Y }, 4, 3, 0.1, 1).unwrap();
    assert!(matches!(trotter_step(&s, 0), Err(Error::InvalidStep(_))));
    assert!(matches!(trotter_step(&s, 4), Err(Error::InvalidStep(_))));
}

#[test]
fn ising_compress_is_exact() {
    for n in [4, 6] {
        let s = random_schedule(ModelKind::Ising { axis: Z }, n, 50, 0.1, 77).unwrap();
        let full = circuit_unitary(&circ(&s, &full_trotter_circuit(&s).unwrap())).unwrap();
        let fused = ising_compress(&s).unwrap();
        assert_eq!(fused.len(), 3);
        let d = frobenius_distance(&full, &circuit_unitary(&circ(&s, &fused)).unwrap()).unwrap();
        assert!(d < 1e-13, "{d:e}");
    }
    let th = 0.37;
    let s = HamiltonianSchedule::constant(ModelKind::Ising { axis: X }, 3, 7, 1.0, vec![vec![th / 2.0; 2]], vec![vec![0.0; 3]]).unwrap();
    let fused = ising_compress(&s).unwrap();
    for g in &fused[1].gates {
        let Gate::Rot(r) = g else { panic!() };
        assert!((r.angle.radians() - 7.0 * th).abs() < 1e-14);
    }
    let xy = random_schedule(ModelKind::Xy { a: X, b: Y }, 3, 2, 0.1, 1).unwrap();
    assert!(matches!(ising_compress(&xy), Err(Error::WrongModel(_))));
}

#[test]
fn tfim_chain_mode() {
    let s = HamiltonianSchedule::constant(ModelKind::Tfim { coupling: X, field: Z }, 3, 3, 0.1, vec![vec![0.0; 2]], vec![vec![0.0; 3]]).unwrap();
    let layers = tfim_circuit_mode(&s).unwrap();
    assert_eq!(layers.len(), 6);
    for (l, layer) in layers.iter().enumerate() {
        let pos: Vec<usize> = layer.iter().map(ChainGate::pos).collect();
        assert_eq!(pos, if l % 2 == 0 { vec![1, 3, 5] } else { vec![2, 4] });
        assert!(layer.iter().all(|g| g.0.angle == spinfuse::su2::Angle::ZERO));
    }
    let s = random_schedule(ModelKind::Tfim { coupling: X, field: Z }, 4, 3, 0.2, 5).unwrap();
    let chain: Vec<Gate> = tfim_circuit_mode(&s).unwrap().iter().flatten().map(ChainGate::to_gate).collect();
    let full = flat(&full_trotter_circuit(&s).unwrap());
    let d = frobenius_distance(&gates_unitary(4, Frame::Xy, &chain).unwrap(), &gates_unitary(4, Frame::Xy, &full).unwrap()).unwrap();
    assert!(d < 1e-13);
    assert!(matches!(tfim_circuit_mode(&random_schedule(ModelKind::Ising { axis: Z }, 3, 1, 0.1, 0).unwrap()), Err(Error::WrongModel(_))));
}

#[test]
fn random_schedules_are_seeded() {
    let m = ModelKind::Tfxy { frame: Frame::Xy };
    let a = random_schedule(m.clone(), 5, 4, 0.1, 11).unwrap();
    assert_eq!(a, random_schedule(m.clone(), 5, 4, 0.1, 11).unwrap());
    let b = random_schedule(m, 5, 4, 0.1, 12).unwrap();
    assert_ne!(a.couplings, b.couplings);
    assert_ne!(a.fields, b.fields);
    assert_ne!(a.couplings[0], a.couplings[1]);

    let big = random_schedule(ModelKind::Xy { a: X, b: Y }, 2, 100_000, 0.1, 5).unwrap();
    let xs: Vec<f64> = big.couplings[0].iter().flatten().copied().collect();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!(mean.abs() < 3.0 / n.sqrt());
    assert!((var - 1.0).abs() < 3.0 * (2.0 / n).sqrt());
    assert!(matches!(random_schedule(ModelKind::Xy { a: X, b: Y }, 1, 1, 0.1, 0), Err(Error::InvalidArgument(_))));
}

#[test]
fn model_validation() {
    let bad = ModelKind::Kitaev { axes: vec![X, X, Z] };
    assert!(matches!(random_schedule(bad, 4, 1, 0.1, 0), Err(Error::InvalidArgument(_))));
    assert!(random_schedule(ModelKind::Kitaev { axes: vec![Y, X, Z, X] }, 5, 1, 0.1, 0).is_ok());
    assert!(random_schedule(ModelKind::Kitaev { axes: vec![Y, X] }, 5, 1, 0.1, 0).is_err());
    assert!(random_schedule(ModelKind::Xy { a: X, b: X }, 3, 1, 0.1, 0).is_err());
    assert!(random_schedule(ModelKind::Tfim { coupling: Z, field: Z }, 3, 1, 0.1, 0).is_err());
    let s = HamiltonianSchedule::new(ModelKind::Xy { a: X, b: Y }, 3, 0.1, vec![vec![vec![0.0; 2]]], vec![]);
    assert!(s.is_err());
}

#[test]
fn xy_chains_commute() {
    let s = random_schedule(ModelKind::Xy { a: X, b: Y }, 5, 1, 0.3, 8).unwrap();
    let gates = flat(&trotter_step(&s, 1).unwrap());
    let (mut ga, mut gb) = (vec![], vec![]);
    for g in gates {
        let Gate::TwoAxis(t) = g else { panic!() };
        let (a, b) = t.parts();
        let (x, y) = if t.site % 2 == 1 { (a, b) } else { (b, a) };
        ga.push(Gate::Rot(x));
        gb.push(Gate::Rot(y));
    }
    let ua = to_mat(&gates_unitary(5, Frame::Xy, &ga).unwrap());
    let ub = to_mat(&gates_unitary(5, Frame::Xy, &gb).unwrap());
    assert!(dist(&mul(&ua, &ub), &mul(&ub, &ua)) < 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn kitaev_rejects_equal_neighbors(axes in prop::collection::vec(0usize..3, 1..8)) {
        let axes: Vec<PauliAxis> = axes.into_iter().map(|i| PauliAxis::ALL[i]).collect();
        let ok = axes.windows(2).all(|w| w[0] != w[1]);
        let n = axes.len() + 1;
        prop_assert_eq!(ModelKind::Kitaev { axes }.validate(n).is_ok(), ok);
    }

    #[test]
    fn ising_fast_path_agrees(seed in any::<u64>(), n in 2usize..7, steps in 1usize..40) {
        let s = random_schedule(ModelKind::Ising { axis: Y }, n, steps, 0.07, seed).unwrap();
        let full = circuit_unitary(&circ(&s, &full_trotter_circuit(&s).unwrap())).unwrap();
        let fused = circuit_unitary(&circ(&s, &ising_compress(&s).unwrap())).unwrap();
        prop_assert!(frobenius_distance(&full, &fused).unwrap() < 1e-13);
    }
}
