//! Matrix exponential by scaling-and-squaring with the degree-13 Pade
//! approximant (Higham 2005).

use nalgebra::DMatrix;
use num_complex::Complex64;

const THETA_13: f64 = 5.371920351148152;

const B: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let norm = one_norm(a);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.map(|z| z / 2f64.powi(s as i32));

    let eye = DMatrix::<Complex64>::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u_inner = &a6 * (a6.map(|z| z * B[13]) + a4.map(|z| z * B[11]) + a2.map(|z| z * B[9]))
        + a6.map(|z| z * B[7])
        + a4.map(|z| z * B[5])
        + a2.map(|z| z * B[3])
        + eye.map(|z| z * B[1]);
    let u = &scaled * u_inner;
    let v = &a6 * (a6.map(|z| z * B[12]) + a4.map(|z| z * B[10]) + a2.map(|z| z * B[8]))
        + a6.map(|z| z * B[6])
        + a4.map(|z| z * B[4])
        + a2.map(|z| z * B[2])
        + eye.map(|z| z * B[0]);

    let lhs = &v - &u;
    let rhs = &v + &u;
    let mut result = lhs
        .lu()
        .solve(&rhs)
        .expect("Pade denominator is nonsingular for scaled inputs");
    for _ in 0..s {
        result = &result * &result;
    }
    result
}
