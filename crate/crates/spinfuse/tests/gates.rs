mod common;

use common::*;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spinfuse::gates::*;
use spinfuse::su2::{Angle, Su2};
use std::f64::consts::PI;

fn ang(t: f64) -> Angle {
    Angle::from_radians(t).unwrap()
}

fn rnd(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-2.0 * PI..2.0 * PI)
}

fn rot_dense(g: &RotationGate, n: usize) -> Mat {
    embed(&rotation_matrix(g), g.site, n)
}

fn two_axis_dense(g: &TwoAxisGate, n: usize) -> Mat {
    let (a, b) = g.parts();
    mul(&rot_dense(&b, n), &rot_dense(&a, n))
}

fn tfxy_dense(g: &TfxyGate, n: usize) -> Mat {
    embed(&from4(&g.dense()), g.site, n)
}

fn random_su2(rng: &mut ChaCha8Rng) -> Su2 {
    let mut z = || C::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    Su2::from_column(z(), z())
}

fn random_tfxy(rng: &mut ChaCha8Rng, site: usize) -> TfxyGate {
    TfxyGate::from_blocks(random_su2(rng), random_su2(rng), site)
}

fn random_tfxy_angles(rng: &mut ChaCha8Rng, site: usize, scale: f64) -> TfxyGate {
    let t: [Angle; 6] = std::array::from_fn(|_| ang(scale * rnd(rng)));
    tfxy_from_angles(t, site)
}

#[test]
fn rotation_matrix_examples() {
    let id = rotation_matrix(&RotationGate::one(PauliAxis::X, 1, Angle::ZERO));
    assert!(dist(&id, &eye(2)) == 0.0);

    let th = 0.83;
    let zz = rotation_matrix(&RotationGate::two(PauliAxis::Z, 1, ang(th)));
    let (m, p) = (C::new(0.0, -th / 2.0).exp(), C::new(0.0, th / 2.0).exp());
    let want = vec![
        vec![m, C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)],
        vec![C::new(0.0, 0.0), p, C::new(0.0, 0.0), C::new(0.0, 0.0)],
        vec![C::new(0.0, 0.0), C::new(0.0, 0.0), p, C::new(0.0, 0.0)],
        vec![C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), m],
    ];
    assert!(dist(&zz, &want) < 1e-15);

    let xx = rotation_matrix(&RotationGate::two(PauliAxis::X, 1, ang(PI)));
    for i in 0..4 {
        for j in 0..4 {
            let want = if i + j == 3 { C::new(0.0, -1.0) } else { C::new(0.0, 0.0) };
            assert!((xx[i][j] - want).norm() < 1e-15);
        }
    }
}

#[test]
fn rotation_matrix_matches_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for axis in PauliAxis::ALL {
        for _ in 0..200 {
            let t = rnd(&mut rng);
            assert!(dist(&rotation_matrix(&RotationGate::one(axis, 1, ang(t))), &rot1(axis, t)) < 1e-15);
            assert!(dist(&rotation_matrix(&RotationGate::two(axis, 1, ang(t))), &rot2(axis, t)) < 1e-15);
        }
    }
}

#[test]
fn commutation_relations_hold_densely() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 3;
    for _ in 0..50 {
        let (t1, t2) = (rnd(&mut rng), rnd(&mut rng));
        for a in PauliAxis::ALL {
            for b in PauliAxis::ALL {
                // different sites commute
                let g = rot_dense(&RotationGate::one(a, 1, ang(t1)), n);
                let h = rot_dense(&RotationGate::one(b, 2, ang(t2)), n);
                assert!(dist(&mul(&g, &h), &mul(&h, &g)) < 1e-14);
                // two-spin gates on disjoint bonds commute
                let g = rot_dense(&RotationGate::two(a, 1, ang(t1)), 4);
                let h = rot_dense(&RotationGate::two(b, 3, ang(t2)), 4);
                assert!(dist(&mul(&g, &h), &mul(&h, &g)) < 1e-14);
                // overlapping two-spin gates of equal axis commute
                if a == b {
                    let g = rot_dense(&RotationGate::two(a, 1, ang(t1)), n);
                    let h = rot_dense(&RotationGate::two(b, 2, ang(t2)), n);
                    assert!(dist(&mul(&g, &h), &mul(&h, &g)) < 1e-14);
                }
            }
        }
    }
}

#[test]
fn fuse_same_examples() {
    let th = 0.4;
    let f = fuse_same(&RotationGate::one(PauliAxis::Z, 1, ang(th)), &RotationGate::one(PauliAxis::Z, 1, ang(-th))).unwrap();
    assert!((f.angle.c() - 1.0).abs() < 1e-15 && f.angle.s().abs() < 1e-15);
    let q = RotationGate::two(PauliAxis::X, 3, ang(PI / 2.0));
    let f = fuse_same(&q, &q).unwrap();
    assert!(f.angle.c().abs() < 1e-15 && (f.angle.s() - 1.0).abs() < 1e-15);
    assert!(matches!(
        fuse_same(&q, &RotationGate::two(PauliAxis::Y, 3, Angle::ZERO)),
        Err(spinfuse::Error::InvalidFusion(_))
    ));
    assert!(fuse_same(&q, &RotationGate::two(PauliAxis::X, 2, Angle::ZERO)).is_err());
}

#[test]
fn fuse_same_matches_dense_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let axis = PauliAxis::ALL[rng.gen_range(0..3)];
        let g1 = RotationGate::two(axis, 1, ang(rnd(&mut rng)));
        let g2 = RotationGate::two(axis, 1, ang(rnd(&mut rng)));
        let f = fuse_same(&g1, &g2).unwrap();
        let want = mul(&rot_dense(&g2, 2), &rot_dense(&g1, 2));
        assert!(dist(&rot_dense(&f, 2), &want) < 1e-14);
    }
}

#[test]
fn turnover_pauli_examples() {
    let (x, y) = (PauliAxis::X, PauliAxis::Y);
    let phi = 1.1;
    let (a, b, c) = turnover_pauli(
        &RotationGate::two(x, 1, Angle::ZERO),
        &RotationGate::two(y, 2, ang(phi)),
        &RotationGate::two(x, 1, Angle::ZERO),
        Direction::VeeToHat,
    )
    .unwrap();
    assert_eq!((a.axis, a.site, b.axis, b.site, c.axis, c.site), (y, 2, x, 1, y, 2));
    assert!((c.angle.radians() - phi).abs() < 1e-15);
    assert!(a.angle.radians().abs() < 1e-15 && b.angle.radians().abs() < 1e-15);

    let z = RotationGate::two(x, 1, Angle::ZERO);
    let m = RotationGate::two(y, 2, Angle::ZERO);
    let (a, b, c) = turnover_pauli(&z, &m, &z, Direction::VeeToHat).unwrap();
    for g in [a, b, c] {
        assert_eq!(g.angle.radians(), 0.0);
    }
}

#[test]
fn turnover_pauli_rejects_bad_patterns() {
    let (x, y) = (PauliAxis::X, PauliAxis::Y);
    let g = RotationGate::two(x, 1, Angle::ZERO);
    let same = RotationGate::two(x, 2, Angle::ZERO);
    assert!(matches!(turnover_pauli(&g, &same, &g, Direction::VeeToHat), Err(spinfuse::Error::InvalidTurnover(_))));
    let far = RotationGate::two(y, 3, Angle::ZERO);
    assert!(turnover_pauli(&g, &far, &g, Direction::VeeToHat).is_err());
    let mid = RotationGate::two(y, 2, Angle::ZERO);
    assert!(turnover_pauli(&g, &mid, &g, Direction::HatToVee).is_err());
    assert!(turnover_pauli(&g, &mid, &RotationGate::two(x, 1, ang(0.1)), Direction::VeeToHat).is_ok());
    assert!(turnover_pauli(&g, &mid, &RotationGate::two(x, 3, Angle::ZERO), Direction::VeeToHat).is_err());
}

#[test]
fn turnover_pauli_matches_dense_both_directions() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10_000 {
        let a = PauliAxis::ALL[rng.gen_range(0..3)];
        let b = PauliAxis::ALL[(a as usize + rng.gen_range(1..3)) % 3];
        let vee = rng.gen_bool(0.5);
        let (p, q, dir) = if vee { (1, 2, Direction::VeeToHat) } else { (2, 1, Direction::HatToVee) };
        let g1 = RotationGate::two(a, p, ang(rnd(&mut rng)));
        let g2 = RotationGate::two(b, q, ang(rnd(&mut rng)));
        let g3 = RotationGate::two(a, p, ang(rnd(&mut rng)));
        let (h1, h2, h3) = turnover_pauli(&g1, &g2, &g3, dir).unwrap();
        assert_eq!((h1.axis, h2.axis, h3.axis), (b, a, b));
        assert_eq!((h1.site, h2.site, h3.site), (q, p, q));
        let lhs = time_product(&[rot_dense(&g1, 3), rot_dense(&g2, 3), rot_dense(&g3, 3)]);
        let rhs = time_product(&[rot_dense(&h1, 3), rot_dense(&h2, 3), rot_dense(&h3, 3)]);
        assert!(dist(&lhs, &rhs) < 1e-13);
    }
}

#[test]
fn turnover_tfim_examples_and_dense() {
    let (x, z) = (PauliAxis::X, PauliAxis::Z);
    let th = 0.7;
    let (a, b, c) = turnover_tfim(
        &RotationGate::two(x, 1, ang(th)),
        &RotationGate::one(z, 1, Angle::ZERO),
        &RotationGate::two(x, 1, ang(0.2)),
    )
    .unwrap();
    assert!(a.angle.radians().abs() < 1e-15 && c.angle.radians().abs() < 1e-15);
    assert!((b.angle.radians() - (th + 0.2)).abs() < 1e-14);
    assert_eq!((a.arity, b.arity, c.arity), (1, 2, 1));

    let zero = RotationGate::two(x, 1, Angle::ZERO);
    let (a, b, c) = turnover_tfim(&zero, &RotationGate::one(z, 2, Angle::ZERO), &zero).unwrap();
    for g in [a, b, c] {
        assert_eq!(g.angle.radians(), 0.0);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5000 {
        let field_site = rng.gen_range(1..=2);
        let two = RotationGate::two(x, 1, ang(rnd(&mut rng)));
        let one = RotationGate::one(z, field_site, ang(rnd(&mut rng)));
        let two3 = two.with_angle(ang(rnd(&mut rng)));
        for (g1, g2, g3) in [(two, one, two3), (one, two, one.with_angle(ang(rnd(&mut rng))))] {
            let (h1, h2, h3) = turnover_tfim(&g1, &g2, &g3).unwrap();
            let lhs = time_product(&[rot_dense(&g1, 2), rot_dense(&g2, 2), rot_dense(&g3, 2)]);
            let rhs = time_product(&[rot_dense(&h1, 2), rot_dense(&h2, 2), rot_dense(&h3, 2)]);
            assert!(dist(&lhs, &rhs) < 1e-13);
        }
    }
    assert!(turnover_tfim(&zero, &RotationGate::one(x, 1, Angle::ZERO), &zero).is_err());
    assert!(turnover_tfim(&zero, &RotationGate::one(z, 3, Angle::ZERO), &zero).is_err());
}

#[test]
fn turnover_two_axis_examples_and_dense() {
    let (x, y) = (PauliAxis::X, PauliAxis::Y);
    let mk = |s, a: f64, b: f64| TwoAxisGate::new(x, y, ang(a), ang(b), s).unwrap();
    let (a, b, c) = turnover_two_axis(&mk(1, 0.0, 0.0), &mk(2, 0.0, 0.0), &mk(1, 0.0, 0.0), Direction::VeeToHat).unwrap();
    for g in [a, b, c] {
        assert_eq!((g.angle_a.radians(), g.angle_b.radians()), (0.0, 0.0));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    // θ_b components zero: reduces to the Pauli turnover on the θ_a chain
    let (t1, t2, t3) = (rnd(&mut rng), rnd(&mut rng), rnd(&mut rng));
    let (a, b, c) = turnover_two_axis(&mk(1, t1, 0.0), &mk(2, 0.0, t2), &mk(1, t3, 0.0), Direction::VeeToHat).unwrap();
    let (pa, pb, pc) = turnover_pauli(
        &RotationGate::two(x, 1, ang(t1)),
        &RotationGate::two(y, 2, ang(t2)),
        &RotationGate::two(x, 1, ang(t3)),
        Direction::VeeToHat,
    )
    .unwrap();
    assert_eq!((a.angle_b, b.angle_a, c.angle_b), (pa.angle, pb.angle, pc.angle));
    assert_eq!((a.angle_a.radians(), b.angle_b.radians(), c.angle_a.radians()), (0.0, 0.0, 0.0));

    for _ in 0..10_000 {
        let vee = rng.gen_bool(0.5);
        let (p, q, dir) = if vee { (1, 2, Direction::VeeToHat) } else { (2, 1, Direction::HatToVee) };
        let g1 = mk(p, rnd(&mut rng), rnd(&mut rng));
        let g2 = mk(q, rnd(&mut rng), rnd(&mut rng));
        let g3 = mk(p, rnd(&mut rng), rnd(&mut rng));
        let (h1, h2, h3) = turnover_two_axis(&g1, &g2, &g3, dir).unwrap();
        assert_eq!((h1.site, h2.site, h3.site), (q, p, q));
        let lhs = time_product(&[two_axis_dense(&g1, 3), two_axis_dense(&g2, 3), two_axis_dense(&g3, 3)]);
        let rhs = time_product(&[two_axis_dense(&h1, 3), two_axis_dense(&h2, 3), two_axis_dense(&h3, 3)]);
        assert!(dist(&lhs, &rhs) < 1e-13);
    }
}

#[test]
fn tfxy_from_angles_examples() {
    let id = tfxy_from_angles([Angle::ZERO; 6], 1);
    assert_eq!((id.a, id.b, id.g, id.d), (C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)));
    let th = 0.9;
    let mut t = [Angle::ZERO; 6];
    t[2] = ang(th);
    let g = tfxy_from_angles(t, 1);
    let (c, s) = ((th / 2.0).cos(), (th / 2.0).sin());
    assert!((g.a - c).norm() < 1e-16 && (g.b - c).norm() < 1e-16);
    assert!((g.g - C::new(0.0, -s)).norm() < 1e-16 && (g.d - C::new(0.0, -s)).norm() < 1e-16);
    assert!(dist(&from4(&g.dense()), &rot2(PauliAxis::X, th)) < 1e-15);
}

#[test]
fn tfxy_from_angles_matches_dense_composition() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (x, y, z) = (PauliAxis::X, PauliAxis::Y, PauliAxis::Z);
    for _ in 0..2000 {
        let t: [f64; 6] = std::array::from_fn(|_| rnd(&mut rng));
        let g = tfxy_from_angles(t.map(ang), 1);
        let early = kron(&rot1(z, t[0]), &rot1(z, t[1]));
        let late = kron(&rot1(z, t[4]), &rot1(z, t[5]));
        let mid = mul(&rot2(x, t[2]), &rot2(y, t[3]));
        let want = mul(&late, &mul(&mid, &early));
        assert!(dist(&from4(&g.dense()), &want) < 1e-13);
        assert!(g.norm_defect() < 1e-14);
    }
}

#[test]
fn tfxy_to_angles_roundtrip() {
    let id = tfxy_to_angles(&TfxyGate::identity(1));
    for a in id {
        assert_eq!((a.c(), a.s()), (1.0, 0.0));
    }
    let th = 1.3;
    let mut t = [Angle::ZERO; 6];
    t[2] = ang(th);
    let back = tfxy_to_angles(&tfxy_from_angles(t, 1));
    assert!((back[2].radians() - th).abs() < 1e-14);
    assert!(back[3].radians().abs() < 1e-14);
    let rebuilt = tfxy_from_angles(back, 1);
    assert!(dist(&from4(&rebuilt.dense()), &rot2(PauliAxis::X, th)) < 1e-14);

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5000 {
        let g = random_tfxy(&mut rng, 1);
        let r = tfxy_from_angles(tfxy_to_angles(&g), 1);
        assert!(dist(&from4(&r.dense()), &from4(&g.dense())) < 1e-13);
    }
}

#[test]
fn tfxy_fuse_examples_and_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = random_tfxy(&mut rng, 2);
    let f = tfxy_fuse(&TfxyGate::identity(2), &g).unwrap();
    assert!(dist(&from4(&f.dense()), &from4(&g.dense())) < 1e-15);
    let inv = TfxyGate::from_blocks(g.outer().adjoint(), g.inner().adjoint(), 2);
    let f = tfxy_fuse(&g, &inv).unwrap();
    assert!(dist(&from4(&f.dense()), &eye(4)) < 1e-15);
    assert!(matches!(tfxy_fuse(&g, &TfxyGate::identity(1)), Err(spinfuse::Error::InvalidFusion(_))));
    for _ in 0..2000 {
        let (g1, g2) = (random_tfxy(&mut rng, 1), random_tfxy(&mut rng, 1));
        let f = tfxy_fuse(&g1, &g2).unwrap();
        let want = mul(&from4(&g2.dense()), &from4(&g1.dense()));
        assert!(dist(&from4(&f.dense()), &want) < 1e-14);
    }
}

#[test]
fn matchgate_split_examples() {
    let mut id = [[C::new(0.0, 0.0); 4]; 4];
    for (i, row) in id.iter_mut().enumerate() {
        row[i] = C::new(1.0, 0.0);
    }
    let (o, i) = matchgate_split(&id).unwrap();
    assert_eq!((o, i), (Su2::identity(), Su2::identity()));

    let th = 0.6;
    let zz = rotation_matrix(&RotationGate::two(PauliAxis::Z, 1, ang(th)));
    let m: [[C; 4]; 4] = std::array::from_fn(|r| std::array::from_fn(|c| zz[r][c]));
    assert!(matches!(matchgate_split(&m), Err(spinfuse::Error::NotAMatchgate(_))));

    let mut t = [Angle::ZERO; 6];
    t[1] = ang(th);
    let (o, i) = matchgate_split(&tfxy_from_angles(t, 1).dense()).unwrap();
    assert!((o.alpha - C::new(0.0, -th / 2.0).exp()).norm() < 1e-15 && o.beta.norm() == 0.0);
    assert!((i.alpha - C::new(0.0, th / 2.0).exp()).norm() < 1e-15 && i.beta.norm() == 0.0);
    let iz = kron(&eye(2), &rot1(PauliAxis::Z, th));
    assert!(dist(&from4(&tfxy_from_angles(t, 1).dense()), &iz) < 1e-15);

    let mut bad = id;
    bad[0][1] = C::new(0.1, 0.0);
    assert!(matches!(matchgate_split(&bad), Err(spinfuse::Error::NotAMatchgate(_))));

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..1000 {
        let g = random_tfxy(&mut rng, 1);
        let (o, i) = matchgate_split(&g.dense()).unwrap();
        let back = TfxyGate::from_blocks(o, i, 1);
        assert!((back.a - g.a).norm() < 1e-14 && (back.b - g.b).norm() < 1e-14);
        assert!((back.g - g.g).norm() < 1e-14 && (back.d - g.d).norm() < 1e-14);
    }
}

fn tfxy_turnover_err(g1: &TfxyGate, g2: &TfxyGate, g3: &TfxyGate, dir: Direction) -> (f64, TurnoverBranch, [TfxyGate; 3]) {
    let ((h1, h2, h3), branch) = tfxy_turnover_with_branch(g1, g2, g3, dir).unwrap();
    let lhs = time_product(&[tfxy_dense(g1, 3), tfxy_dense(g2, 3), tfxy_dense(g3, 3)]);
    let rhs = time_product(&[tfxy_dense(&h1, 3), tfxy_dense(&h2, 3), tfxy_dense(&h3, 3)]);
    (dist(&lhs, &rhs), branch, [h1, h2, h3])
}

#[test]
fn tfxy_turnover_examples() {
    let id = |s| TfxyGate::identity(s);
    let (e, _, hs) = tfxy_turnover_err(&id(1), &id(2), &id(1), Direction::VeeToHat);
    assert!(e < 1e-15);
    for h in hs {
        assert!(dist(&from4(&h.dense()), &eye(4)) < 1e-15);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (g1, g3) = (random_tfxy(&mut rng, 1), random_tfxy(&mut rng, 1));
    let (e, _, hs) = tfxy_turnover_err(&g1, &id(2), &g3, Direction::VeeToHat);
    assert!(e < 1e-12);
    assert_eq!(hs.map(|h| h.site), [2, 1, 2]);
    assert!(matches!(
        tfxy_turnover(&g1, &id(3), &g3, Direction::VeeToHat),
        Err(spinfuse::Error::InvalidTurnover(_))
    ));
    assert!(tfxy_turnover(&g1, &id(2), &id(2), Direction::VeeToHat).is_err());
}

#[test]
fn tfxy_turnover_random_both_directions_and_branches() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut counts = [0usize; 2];
    let mut worst = 0.0f64;
    for k in 0..10_000 {
        let vee = k % 2 == 0;
        let (p, q, dir) = if vee { (1, 2, Direction::VeeToHat) } else { (2, 1, Direction::HatToVee) };
        let scale = [1.0, 1e-3, 0.3, 1e-8][k % 4];
        let (g1, g2, g3) = if k % 3 == 0 {
            (random_tfxy(&mut rng, p), random_tfxy(&mut rng, q), random_tfxy(&mut rng, p))
        } else {
            (
                random_tfxy_angles(&mut rng, p, scale),
                random_tfxy_angles(&mut rng, q, scale),
                random_tfxy_angles(&mut rng, p, 1.0),
            )
        };
        let (e, branch, hs) = tfxy_turnover_err(&g1, &g2, &g3, dir);
        counts[branch as usize] += 1;
        worst = worst.max(e);
        for h in hs {
            assert!(h.norm_defect() < 1e-13);
        }
    }
    assert!(worst < 1e-12, "worst {worst:e}");
    assert!(counts[0] >= 1000 && counts[1] >= 1000, "{counts:?}");
}

#[test]
fn tfxy_turnover_roundtrip_restores_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..2000 {
        let (g1, g2, g3) = (random_tfxy(&mut rng, 1), random_tfxy(&mut rng, 2), random_tfxy(&mut rng, 1));
        let (h1, h2, h3) = tfxy_turnover(&g1, &g2, &g3, Direction::VeeToHat).unwrap();
        let (k1, k2, k3) = tfxy_turnover(&h1, &h2, &h3, Direction::HatToVee).unwrap();
        let lhs = time_product(&[tfxy_dense(&g1, 3), tfxy_dense(&g2, 3), tfxy_dense(&g3, 3)]);
        let rhs = time_product(&[tfxy_dense(&k1, 3), tfxy_dense(&k2, 3), tfxy_dense(&k3, 3)]);
        assert!(dist(&lhs, &rhs) < 1e-12);
    }
}

#[test]
fn tfxy_turnover_degenerate_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let z = PauliAxis::Z;
    for _ in 0..500 {
        // diagonal-only gates (field rotations) and pure hopping gates
        let zonly = |rng: &mut ChaCha8Rng, s| {
            let mut t = [Angle::ZERO; 6];
            t[0] = ang(rnd(rng));
            t[1] = ang(rnd(rng));
            tfxy_from_angles(t, s)
        };
        let xx = |rng: &mut ChaCha8Rng, s| {
            let mut t = [Angle::ZERO; 6];
            t[2] = ang(rnd(rng));
            tfxy_from_angles(t, s)
        };
        let cases = [
            (zonly(&mut rng, 1), zonly(&mut rng, 2), zonly(&mut rng, 1)),
            (xx(&mut rng, 1), xx(&mut rng, 2), xx(&mut rng, 1)),
            (xx(&mut rng, 1), zonly(&mut rng, 2), xx(&mut rng, 1)),
            (TfxyGate::identity(1), xx(&mut rng, 2), TfxyGate::identity(1)),
            (zonly(&mut rng, 1), TfxyGate::identity(2), xx(&mut rng, 1)),
        ];
        for (g1, g2, g3) in cases {
            let (e, _, _) = tfxy_turnover_err(&g1, &g2, &g3, Direction::VeeToHat);
            assert!(e < 1e-12, "{e:e}");
        }
    }
    let _ = z;
}

#[test]
fn turnover_blocks_have_paired_norms() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..1000 {
        let q = TurnoverBlocks::from_vee(&random_tfxy(&mut rng, 1), &random_tfxy(&mut rng, 2), &random_tfxy(&mut rng, 1));
        q.check().unwrap();
    }
}

#[test]
fn chain_gate_trait_dispatches_by_position() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let (g1, g2, g3) = (random_tfxy(&mut rng, 2), random_tfxy(&mut rng, 1), random_tfxy(&mut rng, 2));
    let (h1, h2, h3) = <TfxyGate as ChainGate>::turnover(&g1, &g2, &g3).unwrap();
    assert_eq!([h1.pos(), h2.pos(), h3.pos()], [1, 2, 1]);
    let t = TfimGate(RotationGate::one(PauliAxis::Z, 2, Angle::ZERO));
    assert_eq!(t.pos(), 3);
    assert_eq!(TfimGate(RotationGate::two(PauliAxis::X, 2, Angle::ZERO)).pos(), 4);
}

proptest! {
    #[test]
    fn tfxy_fuse_preserves_block_norms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = random_tfxy(&mut rng, 1);
        for _ in 0..50 {
            g = tfxy_fuse(&g, &random_tfxy(&mut rng, 1)).unwrap();
        }
        prop_assert!(g.norm_defect() < 1e-13);
    }

    #[test]
    fn pauli_turnover_axis_bookkeeping(a in 0usize..3, off in 1usize..3, t1 in -7.0f64..7.0, t2 in -7.0f64..7.0, t3 in -7.0f64..7.0) {
        let (ax, bx) = (PauliAxis::ALL[a], PauliAxis::ALL[(a + off) % 3]);
        let (h1, h2, h3) = turnover_pauli(
            &RotationGate::two(ax, 4, ang(t1)),
            &RotationGate::two(bx, 5, ang(t2)),
            &RotationGate::two(ax, 4, ang(t3)),
            Direction::VeeToHat,
        ).unwrap();
        prop_assert_eq!((h1.axis, h2.axis, h3.axis), (bx, ax, bx));
        prop_assert_eq!((h1.site, h2.site, h3.site), (5, 4, 5));
    }
}
