//! Gauss-Hermite nodes and weights via the Golub-Welsch eigenproblem.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes t_k and weights w_k for Int f(t) e^{-t^2} dt ~= sum w_k f(t_k).
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 2);
    // Jacobi matrix of the Hermite recurrence: off-diagonal sqrt(k/2)
    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        let beta = (k as f64 / 2.0).sqrt();
        jacobi[(k - 1, k)] = beta;
        jacobi[(k, k - 1)] = beta;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|k| {
            let node = eig.eigenvalues[k];
            let first = eig.eigenvectors[(0, k)];
            (node, std::f64::consts::PI.sqrt() * first * first)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}
