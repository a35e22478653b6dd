//! Closed-form inversions for one, two and three qubits.
//!
//! Each works on Ψ⁻-conditioned data at the standard inputs. Below, an input
//! is written by its amplitudes: `(1,0)` = |0⟩, `(0,1)` = |1⟩, `+` =
//! (|0⟩+|1⟩)/√2 and `R` = (|0⟩+i|1⟩)/√2. Matrix parameters `m_ij` are 1-based.

use num_complex::Complex;

use crate::qla::CMatrix;
use crate::scalar::Real;

const ZERO: usize = 0; // (1, 0)
const ONE: usize = 1; // (0, 1)
const PLUS: usize = 2;
const RIGHT: usize = 3;

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

fn real<T: Real>(v: f64) -> Complex<T> {
    c(v, 0.0)
}

/// Fills the lower triangle from the upper one and drops imaginary parts on the
/// diagonal.
fn hermitian_from_upper<T: Real>(mut m: CMatrix<T>) -> CMatrix<T> {
    let n = m.rows();
    for r in 0..n {
        m[(r, r)].im = T::zero();
        for col in (r + 1)..n {
            m[(col, r)] = m[(r, col)].conj();
        }
    }
    m
}

/// Single-qubit state from Ψ⁻ probabilities of a Bell measurement against each
/// standard probe, indexed in standard-input order:
///
/// `a₁₁ = 2Q(0,1)`, `a₂₂ = 2Q(1,0)`,
/// `a₁₂ = (1−i)[Q(1,0) + Q(0,1)] + 2iQ(R) − 2Q(+)`.
pub fn single_qubit_raw<T: Real>(q: &[T; 4]) -> CMatrix<T> {
    let q = q.map(|v| Complex::new(v, T::zero()));
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 0)] = real::<T>(2.0) * q[ONE];
    m[(1, 1)] = real::<T>(2.0) * q[ZERO];
    m[(0, 1)] = c::<T>(1.0, -1.0) * (q[ZERO] + q[ONE]) + c::<T>(0.0, 2.0) * q[RIGHT]
        - real::<T>(2.0) * q[PLUS];
    hermitian_from_upper(m)
}

#[derive(Clone, Copy)]
enum Entry {
    B11,
    B22,
    B12,
    B12Conj,
}

fn entry<T: Real>(t: &CMatrix<T>, e: Entry) -> Complex<T> {
    match e {
        Entry::B11 => t[(0, 0)],
        Entry::B22 => t[(1, 1)],
        Entry::B12 => t[(0, 1)],
        Entry::B12Conj => t[(0, 1)].conj(),
    }
}

/// Two-qubit state from Ψ⁻ tildes at the four standard inputs:
///
/// ```text
/// m11 = 2b̃11(0,1)   m22 = 2b̃22(0,1)   m33 = 2b̃11(1,0)   m44 = 2b̃22(1,0)
/// m12 = 2b̃12(0,1)   m34 = 2b̃12(1,0)
/// m13 = (1−i)[b̃11(0,1) + b̃11(1,0)] + 2i b̃11(R) − 2b̃11(+)
/// ```
/// and likewise `m24` from b̃22, `m14` from b̃12 and `m23` from b̃12*.
pub fn two_qubit_raw<T: Real>(tilde: &[CMatrix<T>]) -> CMatrix<T> {
    assert_eq!(tilde.len(), 4);
    let b = |e: Entry, input: usize| entry(&tilde[input], e);
    let mixed = |e: Entry| {
        c::<T>(1.0, -1.0) * (b(e, ONE) + b(e, ZERO)) + c::<T>(0.0, 2.0) * b(e, RIGHT)
            - real::<T>(2.0) * b(e, PLUS)
    };
    let two = real::<T>(2.0);
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = two * b(Entry::B11, ONE);
    m[(1, 1)] = two * b(Entry::B22, ONE);
    m[(2, 2)] = two * b(Entry::B11, ZERO);
    m[(3, 3)] = two * b(Entry::B22, ZERO);
    m[(0, 1)] = two * b(Entry::B12, ONE);
    m[(2, 3)] = two * b(Entry::B12, ZERO);
    m[(0, 2)] = mixed(Entry::B11);
    m[(1, 3)] = mixed(Entry::B22);
    m[(0, 3)] = mixed(Entry::B12);
    m[(1, 2)] = mixed(Entry::B12Conj);
    hermitian_from_upper(m)
}

/// Three-qubit state from Ψ⁻Ψ⁻ tildes on the 16 standard input pairs, grid
/// index `4·wire1 + wire2`.
///
/// The inversion is expressed in the layout where Bob's qubit sits between the
/// two wires (basis `|q₁ q_Bob q₂⟩`); the result is returned in the canonical
/// layout `|q₁ q₂ q_Bob⟩`. Parameters are evaluated in two stages: the 48
/// entries reachable from single-equator inputs first, then the 16 entries
/// that need both wires on the equator, which reuse the first stage.
pub fn three_qubit_raw<T: Real>(tilde: &[CMatrix<T>]) -> CMatrix<T> {
    assert_eq!(tilde.len(), 16);
    let b = |e: Entry, w1: usize, w2: usize| entry(&tilde[4 * w1 + w2], e);
    let (o, z, p, r) = (ONE, ZERO, PLUS, RIGHT);
    let four = real::<T>(4.0);
    let eight = real::<T>(8.0);
    let i = c::<T>(0.0, 1.0);

    // 2(1 ∓ i)[b̃(a) + b̃(b)] − 4[b̃(c) ∓ i b̃(d)]
    let pair_form = |e: Entry,
                     a: (usize, usize),
                     bb: (usize, usize),
                     cc: (usize, usize),
                     d: (usize, usize),
                     plus: bool| {
        let s = if plus { 1.0 } else { -1.0 };
        c::<T>(2.0, 2.0 * s) * (b(e, a.0, a.1) + b(e, bb.0, bb.1))
            - four * (b(e, cc.0, cc.1) + c::<T>(0.0, s) * b(e, d.0, d.1))
    };

    // m[k] holds 1-based m_{ij} at key 10·i + j
    let mut m = [Complex::new(T::zero(), T::zero()); 89];
    m[11] = four * b(Entry::B11, o, o);
    m[22] = four * b(Entry::B11, o, z);
    m[33] = four * b(Entry::B22, o, o);
    m[44] = four * b(Entry::B22, o, z);
    m[55] = four * b(Entry::B11, z, o);
    m[66] = four * b(Entry::B11, z, z);
    m[77] = four * b(Entry::B22, z, o);
    m[88] = four * b(Entry::B22, z, z);
    m[13] = four * b(Entry::B12, o, o);
    m[24] = four * b(Entry::B12, o, z);
    m[57] = four * b(Entry::B12, z, o);
    m[68] = four * b(Entry::B12, z, z);

    m[12] = pair_form(Entry::B11, (o, o), (o, z), (o, p), (o, r), false);
    m[34] = pair_form(Entry::B22, (o, o), (o, z), (o, p), (o, r), false);
    m[56] = pair_form(Entry::B11, (z, o), (z, z), (z, p), (z, r), false);
    m[78] = pair_form(Entry::B22, (z, o), (z, z), (z, p), (z, r), false);
    m[15] = pair_form(Entry::B11, (o, o), (z, o), (p, o), (r, o), false);
    m[37] = pair_form(Entry::B22, (o, o), (z, o), (p, o), (r, o), false);
    m[26] = pair_form(Entry::B11, (o, z), (z, z), (p, z), (r, z), false);
    m[48] = pair_form(Entry::B22, (o, z), (z, z), (p, z), (r, z), false);
    m[17] = pair_form(Entry::B12, (o, o), (z, o), (p, o), (r, o), false);
    m[35] = pair_form(Entry::B12Conj, (o, o), (z, o), (p, o), (r, o), false);
    m[28] = pair_form(Entry::B12, (o, z), (z, z), (p, z), (r, z), false);
    m[46] = pair_form(Entry::B12Conj, (o, z), (z, z), (p, z), (r, z), false);
    m[58] = pair_form(Entry::B12, (z, o), (z, z), (z, p), (z, r), false);
    m[67] = pair_form(Entry::B12, (z, o), (z, z), (z, p), (z, r), true);
    m[14] = pair_form(Entry::B12, (o, o), (o, z), (o, p), (o, r), false);
    m[23] = pair_form(Entry::B12, (o, o), (o, z), (o, p), (o, r), true);

    let one_plus_i = c::<T>(1.0, 1.0);
    let one_minus_i = c::<T>(1.0, -1.0);
    let two_i = c::<T>(0.0, 2.0);
    let two = real::<T>(2.0);
    // 8b̃(x₁) + 8b̃(x₂) + 8i[b̃(x₃) − b̃(x₄)]
    let equator = |e: Entry,
                   x1: (usize, usize),
                   x2: (usize, usize),
                   x3: (usize, usize),
                   x4: (usize, usize)| {
        eight * (b(e, x1.0, x1.1) + b(e, x2.0, x2.1))
            + eight * i * (b(e, x3.0, x3.1) - b(e, x4.0, x4.1))
    };
    let cross = |e: Entry| equator(e, (r, p), (p, r), (p, p), (r, r));
    let straight = |e: Entry| equator(e, (p, p), (r, r), (p, r), (r, p));

    m[16] = (one_plus_i * (m[12] + m[15] + m[26] + m[56]) - (m[11] + m[22] + m[55] + m[66])
        + cross(Entry::B11))
        / two_i;
    m[25] = (one_plus_i * (m[15] + m[26]) + one_minus_i * (m[12].conj() + m[56].conj())
        - (m[11] + m[22] + m[55] + m[66])
        + straight(Entry::B11))
        / two;
    m[38] = (one_plus_i * (m[34] + m[37] + m[48] + m[78]) - (m[33] + m[44] + m[77] + m[88])
        + cross(Entry::B22))
        / two_i;
    m[47] = (one_plus_i * (m[37] + m[48]) + one_minus_i * (m[34].conj() + m[78].conj())
        - (m[33] + m[44] + m[77] + m[88])
        + straight(Entry::B22))
        / two;
    m[18] = (one_plus_i * (m[14] + m[17] + m[28] + m[58]) - (m[13] + m[24] + m[57] + m[68])
        + cross(Entry::B12))
        / two_i;
    m[27] = (one_plus_i * (m[17] + m[28]) + one_minus_i * (m[23] + m[67])
        - (m[13] + m[24] + m[57] + m[68])
        + straight(Entry::B12))
        / two;
    m[36] = (one_plus_i * (m[35] + m[46] + m[23].conj() + m[67].conj())
        - (m[13].conj() + m[24].conj() + m[57].conj() + m[68].conj())
        + cross(Entry::B12Conj))
        / two_i;
    m[45] = (one_plus_i * (m[35] + m[46]) + one_minus_i * (m[14].conj() + m[58].conj())
        - (m[13].conj() + m[24].conj() + m[57].conj() + m[68].conj())
        + straight(Entry::B12Conj))
        / two;

    let mut mid = CMatrix::zeros(8, 8);
    for row in 1..=8 {
        for col in row..=8 {
            mid[(row - 1, col - 1)] = m[10 * row + col];
        }
    }
    let mid = hermitian_from_upper(mid);
    // |q₁ q_Bob q₂⟩ → |q₁ q₂ q_Bob⟩
    crate::qla::permute_subsystems(&mid, &[2, 2, 2], &[0, 2, 1]).expect("fixed 3-qubit layout")
}
