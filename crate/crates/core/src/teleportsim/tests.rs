use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::qstate::{random_density, standard_inputs};

type C = Complex<f64>;

fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

fn random_qubit(rng: &mut ChaCha8Rng) -> PureQubit<f64> {
    let v: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>() * 2.0 - 1.0);
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    PureQubit::new(c(v[0] / n, v[1] / n), c(v[2] / n, v[3] / n)).unwrap()
}

fn random_arrangement(rng: &mut ChaCha8Rng, wires: usize) -> InputArrangement<f64> {
    InputArrangement::new((0..wires).map(|_| random_qubit(rng)).collect())
}

fn psi(wires: usize) -> OutcomeTuple {
    OutcomeTuple::uniform(BellOutcome::PsiMinus, wires)
}

fn one_wire(q: PureQubit<f64>) -> InputArrangement<f64> {
    InputArrangement::new(vec![q])
}

fn bell_density(o: BellOutcome) -> Density<f64> {
    Density::from_pure(&o.state::<f64>()).unwrap()
}

#[test]
fn dense_and_effect_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 2..=4 {
        for seed in 0..4 {
            let rho = random_density::<f64>(n, 1 + seed as usize % (1 << n), seed).unwrap();
            let arr = random_arrangement(&mut rng, n - 1);
            let joint = joint_state(&arr, &rho).unwrap();
            for t in OutcomeTuple::enumerate(n - 1)
                .iter()
                .step_by(if n == 4 { 7 } else { 1 })
            {
                let dense = bob_unnormalized(&joint, t).unwrap();
                let rec = exact_record(&rho, &arr, t).unwrap();
                assert!(dense.max_abs_diff(&rec.tilde) < 1e-12, "n={n} {t:?}");
                let q = bm_probability(&joint, t).unwrap();
                assert!((q - rec.q).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn two_qubit_formula_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for seed in 0..20 {
        let rho = random_density::<f64>(2, 1 + seed as usize % 4, seed).unwrap();
        let m = |i: usize, j: usize| rho.matrix()[(i - 1, j - 1)];
        let input = random_qubit(&mut rng);
        let (a, b) = (input.alpha(), input.beta());
        let (aa, bb) = (a.norm_sqr(), b.norm_sqr());
        let ab = a.conj() * b;
        let b11 = (m(3, 3).re * aa + m(1, 1).re * bb) / 2.0 - (m(1, 3) * ab).re;
        let b22 = (m(4, 4).re * aa + m(2, 2).re * bb) / 2.0 - (m(2, 4) * ab).re;
        let b12 =
            (m(3, 4) * aa + m(1, 2) * bb - m(1, 4) * ab - m(2, 3).conj() * a * b.conj()) / 2.0;
        let q = ((m(3, 3) + m(4, 4)).re * aa + (m(1, 1) + m(2, 2)).re * bb) / 2.0
            - ((m(1, 3) + m(2, 4)) * ab).re;
        let rec = exact_record(&rho, &one_wire(input), &psi(1)).unwrap();
        assert!((rec.tilde[(0, 0)].re - b11).abs() < 1e-12);
        assert!((rec.tilde[(1, 1)].re - b22).abs() < 1e-12);
        assert!((rec.tilde[(0, 1)] - b12).norm() < 1e-12);
        assert!((rec.q - q).abs() < 1e-12);
    }
}

/// Entry `m_ij` of the three-qubit state in the layout with Bob in the middle.
fn middle_layout(rho: &Density<f64>) -> CMatrix<f64> {
    permute_subsystems(rho.matrix(), &[2, 2, 2], &[0, 2, 1]).unwrap()
}

#[test]
fn three_qubit_formula_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for seed in 0..20 {
        let rho = random_density::<f64>(3, 1 + seed as usize % 8, seed).unwrap();
        let mid = middle_layout(&rho);
        let m = |i: usize, j: usize| mid[(i - 1, j - 1)];
        let arr = random_arrangement(&mut rng, 2);
        let (a, b) = (arr.inputs()[0].alpha(), arr.inputs()[0].beta());
        let (g, d) = (arr.inputs()[1].alpha(), arr.inputs()[1].beta());
        let n2 = |z: C| z.norm_sqr();
        let (ag, ad, bg, bd) = (n2(a * g), n2(a * d), n2(b * g), n2(b * d));
        let dg = d * g.conj();
        let ba = b * a.conj();
        let x1 = b * d * a.conj() * g.conj();
        let x2 = a.conj() * d.conj() * b * g;
        let diag = |p: [usize; 4], off: [(usize, usize); 6]| {
            let r = |k: (usize, usize)| m(k.0, k.1);
            (m(p[0], p[0]).re * ag
                + m(p[1], p[1]).re * ad
                + m(p[2], p[2]).re * bg
                + m(p[3], p[3]).re * bd
                - 2.0 * (r(off[0]) * dg).re * n2(a)
                - 2.0 * (r(off[1]) * dg).re * n2(b)
                - 2.0 * (r(off[2]) * ba).re * n2(g)
                - 2.0 * (r(off[3]) * ba).re * n2(d)
                + 2.0 * (r(off[4]) * x1).re
                + 2.0 * (r(off[5]) * x2).re)
                / 4.0
        };
        let b11 = diag(
            [6, 5, 2, 1],
            [(5, 6), (1, 2), (2, 6), (1, 5), (1, 6), (2, 5)],
        );
        let b22 = diag(
            [8, 7, 4, 3],
            [(7, 8), (3, 4), (4, 8), (3, 7), (3, 8), (4, 7)],
        );
        let b12 = (m(6, 8) * ag + m(5, 7) * ad + m(2, 4) * bg + m(1, 3) * bd
            - m(5, 8) * dg * n2(a)
            - m(6, 7) * g * d.conj() * n2(a)
            - m(1, 4) * dg * n2(b)
            - m(2, 3) * g * d.conj() * n2(b)
            - m(2, 8) * ba * n2(g)
            - m(4, 6).conj() * a * b.conj() * n2(g)
            - m(1, 7) * ba * n2(d)
            - m(3, 5).conj() * a * b.conj() * n2(d)
            + m(1, 8) * x1
            + m(2, 7) * b * g * a.conj() * d.conj()
            + m(3, 6).conj() * a * g * b.conj() * d.conj()
            + m(4, 5).conj() * a * d * b.conj() * g.conj())
            / 4.0;
        let rec = exact_record(&rho, &arr, &psi(2)).unwrap();
        assert!((rec.tilde[(0, 0)].re - b11).abs() < 1e-12, "seed {seed}");
        assert!((rec.tilde[(1, 1)].re - b22).abs() < 1e-12, "seed {seed}");
        assert!((rec.tilde[(0, 1)] - b12).norm() < 1e-12, "seed {seed}");
    }
}

/// `(α, β) ↦` substituted amplitudes turning outcome `o` data into Ψ⁻ data.
fn substitute(o: BellOutcome, q: &PureQubit<f64>) -> PureQubit<f64> {
    let (a, b) = (q.alpha(), q.beta());
    let (a, b) = match o {
        BellOutcome::PsiMinus => (a, b),
        BellOutcome::PsiPlus => (-a, b),
        BellOutcome::PhiMinus => (b, a),
        BellOutcome::PhiPlus => (-b, a),
    };
    PureQubit::new(a, b).unwrap()
}

#[test]
fn outcome_substitution_symmetries() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for seed in 0..200 {
        let rho = random_density::<f64>(2, 1 + seed as usize % 4, seed).unwrap();
        let input = random_qubit(&mut rng);
        for o in BellOutcome::ALL {
            let direct = exact_record(&rho, &one_wire(input), &OutcomeTuple(vec![o])).unwrap();
            let sub = exact_record(&rho, &one_wire(substitute(o, &input)), &psi(1)).unwrap();
            assert!((direct.q - sub.q).abs() < 1e-12);
            assert!(direct.tilde.max_abs_diff(&sub.tilde) < 1e-12);
        }
    }
}

#[test]
fn completeness_and_pinching() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 2..=4 {
        for seed in 0..5 {
            let rho = random_density::<f64>(n, 1 << n, 50 + seed).unwrap();
            let arr = random_arrangement(&mut rng, n - 1);
            let table = outcome_table(&rho, &arr).unwrap();
            assert_eq!(table.len(), 4usize.pow(n as u32 - 1));
            let total: f64 = table.iter().map(|r| r.q).sum();
            assert!((total - 1.0).abs() < 1e-9);
            let mut sum = CMatrix::zeros(2, 2);
            for r in &table {
                assert!((r.tilde.trace().re - r.q).abs() < 1e-12);
                sum = &sum + &r.tilde;
            }
            let bob = rho.reduced(&[n - 1]).unwrap();
            assert!(sum.max_abs_diff(bob.matrix()) < 1e-9);
        }
    }
}

/// Explicit basis permutation from `[A₁, 1, 2, 3, A₃]` (Bob = 2) to the
/// canonical `[A₁, 1, A₃, 3, 2]`.
fn middle_to_canonical(m: &CMatrix<f64>) -> CMatrix<f64> {
    let bit = |x: usize, k: usize| (x >> (4 - k)) & 1;
    let map = |canon: usize| {
        // canonical positions hold middle-layout subsystems [0, 1, 4, 3, 2]
        let src = [0, 1, 4, 3, 2];
        (0..5).fold(0, |acc, k| acc | (bit(canon, k) << (4 - src[k])))
    };
    CMatrix::from_fn(32, 32, |r, col| m[(map(r), map(col))])
}

#[test]
fn joint_state_matches_permuted_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for seed in 0..5 {
        let rho = random_density::<f64>(3, 8, seed).unwrap();
        let arr = random_arrangement(&mut rng, 2);
        let middle_rho = middle_layout(&rho);
        let product = crate::qla::tensor_all([
            &arr.inputs()[0].projector(),
            &middle_rho,
            &arr.inputs()[1].projector(),
        ])
        .unwrap();
        let joint = joint_state(&arr, &rho).unwrap();
        assert!(joint.max_abs_diff(&middle_to_canonical(&product)) < 1e-15);
        assert!((joint.trace().re - 1.0).abs() < 1e-12);
    }
}

#[test]
fn bm_projector_structure() {
    let p = bm_projector::<f64>(&psi(1), 2).unwrap();
    let expected =
        crate::qla::tensor(&BellOutcome::PsiMinus.projector(), &CMatrix::identity(2)).unwrap();
    assert!(p.max_abs_diff(&expected) < 1e-15);
    for n in 2..=3 {
        let d = 1 << (2 * n - 1);
        let mut sum = CMatrix::zeros(d, d);
        for t in OutcomeTuple::enumerate(n - 1) {
            let p = bm_projector::<f64>(&t, n).unwrap();
            assert!(p.is_hermitian(0.0));
            assert!(p.matmul(&p).max_abs_diff(&p) < 1e-15);
            sum = &sum + &p;
        }
        assert!(sum.max_abs_diff(&CMatrix::identity(d)) < 1e-14);
    }
}

#[test]
fn wire_effects_sum_to_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let q = random_qubit(&mut rng);
        let mut sum = CMatrix::zeros(2, 2);
        for o in BellOutcome::ALL {
            sum = &sum + &wire_effect(&q, o);
        }
        assert!(sum.max_abs_diff(&CMatrix::identity(2)) < 1e-15);
    }
}

#[test]
fn maximally_mixed_channel() {
    let shared = Density::<f64>::maximally_mixed(2);
    for input in standard_inputs::<f64>() {
        for o in BellOutcome::ALL {
            let t = OutcomeTuple(vec![o]);
            let joint = joint_state(&one_wire(input), &shared).unwrap();
            assert!((bm_probability(&joint, &t).unwrap() - 0.25).abs() < 1e-15);
            let bob = bob_normalized(&joint, &t).unwrap();
            assert!(
                bob.matrix()
                    .max_abs_diff(Density::maximally_mixed(1).matrix())
                    < 1e-15
            );
        }
    }
}

#[test]
fn phi_plus_channel_with_zero_input() {
    let shared = bell_density(BellOutcome::PhiPlus);
    let zero = one_wire(PureQubit::standard(InputLabel::Zero));
    let joint = joint_state(&zero, &shared).unwrap();
    assert!((bm_probability(&joint, &psi(1)).unwrap() - 0.25).abs() < 1e-15);
    let tilde = bob_unnormalized(&joint, &psi(1)).unwrap();
    assert!(tilde.max_abs_diff(&CMatrix::from_real_diagonal(&[0.0, 0.25])) < 1e-15);
    let bob = bob_normalized(&joint, &psi(1)).unwrap();
    assert!(bob.matrix().max_abs_diff(Density::basis(1, 1).matrix()) < 1e-15);
    for r in outcome_table(&shared, &zero).unwrap() {
        assert!((r.q - 0.25).abs() < 1e-15);
    }
}

#[test]
fn singlet_channel_teleports_input() {
    let shared = bell_density(BellOutcome::PsiMinus);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let q = random_qubit(&mut rng);
        let joint = joint_state(&one_wire(q), &shared).unwrap();
        let tilde = bob_unnormalized(&joint, &psi(1)).unwrap();
        assert!(tilde.max_abs_diff(&q.projector().scale_real(0.25)) < 1e-15);
        let bob = bob_normalized(&joint, &psi(1)).unwrap();
        assert!(bob.matrix().max_abs_diff(&q.projector()) < 1e-12);
    }
}

#[test]
fn size_and_wire_errors() {
    let rho = random_density::<f64>(3, 2, 1).unwrap();
    let one = one_wire(PureQubit::standard(InputLabel::Zero));
    assert!(matches!(
        joint_state(&one, &rho),
        Err(SimError::WireCount {
            expected: 2,
            got: 1
        })
    ));
    assert!(matches!(
        exact_record(&rho, &one, &psi(1)),
        Err(SimError::WireCount { .. })
    ));
    let single = Density::<f64>::maximally_mixed(1);
    assert!(matches!(
        joint_state(&InputArrangement::new(vec![]), &single),
        Err(SimError::UnsupportedSize { qubits: 1, .. })
    ));
    assert!(matches!(
        tilde_map(&CMatrix::<f64>::identity(8), &one, &psi(1)),
        Err(SimError::OperatorSize { dim: 8, wires: 1 })
    ));
    assert!(matches!(
        bm_probability(&CMatrix::<f64>::identity(4), &psi(1)),
        Err(SimError::JointDimension(4))
    ));
}

#[test]
fn impossible_outcome_cannot_be_conditioned_on() {
    let shared = Density::<f64>::basis(2, 0);
    let joint = joint_state(&one_wire(PureQubit::standard(InputLabel::Zero)), &shared).unwrap();
    assert_eq!(bm_probability(&joint, &psi(1)).unwrap(), 0.0);
    assert!(matches!(
        bob_normalized(&joint, &psi(1)),
        Err(SimError::ImprobableOutcome { .. })
    ));
}

#[test]
fn single_precision_tracks_double() {
    let rho64 = random_density::<f64>(3, 8, 3).unwrap();
    let rho32 = Density::<f32>::new(CMatrix::from_fn(8, 8, |r, col| {
        let z = rho64.matrix()[(r, col)];
        Complex::new(z.re as f32, z.im as f32)
    }))
    .unwrap();
    let arr64 = InputArrangement::enumerate(&standard_inputs::<f64>(), 2);
    let arr32 = InputArrangement::enumerate(&standard_inputs::<f32>(), 2);
    for (a64, a32) in arr64.iter().zip(&arr32) {
        let t64 = exact_record(&rho64, a64, &psi(2)).unwrap().tilde;
        let t32 = exact_record(&rho32, a32, &psi(2)).unwrap().tilde;
        for r in 0..2 {
            for col in 0..2 {
                assert!(
                    (t64[(r, col)]
                        - Complex::new(t32[(r, col)].re as f64, t32[(r, col)].im as f64))
                    .norm()
                        < 1e-6
                );
            }
        }
    }
}

#[test]
fn enumeration_orders() {
    let arrs = InputArrangement::enumerate(&standard_inputs::<f64>(), 2);
    assert_eq!(arrs.len(), 16);
    assert_eq!(arrs[1].inputs()[0].label(), Some(InputLabel::Zero));
    assert_eq!(arrs[1].inputs()[1].label(), Some(InputLabel::One));
    assert_eq!(arrs[4].inputs()[0].label(), Some(InputLabel::One));
    for (i, t) in OutcomeTuple::enumerate(3).iter().enumerate() {
        assert_eq!(t.index(), i);
    }
    assert_eq!(canonical_order(2), vec![0, 2, 1, 3, 4]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_records_are_physical(seed in 0u64..10_000, n in 2usize..=3, rank_pick in 0usize..8, input_seed in 0u64..1000) {
        let rank = 1 + rank_pick % (1 << n);
        let rho = random_density::<f64>(n, rank, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(input_seed);
        let arr = random_arrangement(&mut rng, n - 1);
        let mut total = 0.0;
        for r in outcome_table(&rho, &arr).unwrap() {
            prop_assert!((r.tilde.trace().re - r.q).abs() < 1e-9);
            prop_assert!(r.tilde.is_hermitian(1e-12));
            let eig = crate::qla::hermitian_eigen(&r.tilde).unwrap();
            prop_assert!(eig.values[0] >= -1e-9);
            total += r.q;
        }
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tilde_map_is_linear(s1 in 0u64..1000, s2 in 0u64..1000, w in 0.0f64..1.0, input_seed in 0u64..1000) {
        let a = random_density::<f64>(2, 4, s1).unwrap();
        let b = random_density::<f64>(2, 4, s2).unwrap();
        let mix = &a.matrix().scale_real(w) + &b.matrix().scale_real(1.0 - w);
        let mut rng = ChaCha8Rng::seed_from_u64(input_seed);
        let arr = random_arrangement(&mut rng, 1);
        for t in OutcomeTuple::enumerate(1) {
            let lhs = tilde_map(&mix, &arr, &t).unwrap();
            let ta = tilde_map(a.matrix(), &arr, &t).unwrap();
            let tb = tilde_map(b.matrix(), &arr, &t).unwrap();
            let rhs = &ta.scale_real(w) + &tb.scale_real(1.0 - w);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        }
    }
}
