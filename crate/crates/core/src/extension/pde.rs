//! Finite-element minimization of the weighted extension energy
//! ∬ (|∂_x v|² + |∂_z v|²) z^{1−s} dγ(x) dz on [−L, L] × (0, Z] with v = χ_E
//! at z = 0 and natural boundary conditions elsewhere.
//!
//! Bilinear elements on a tensor mesh make the stiffness matrix
//! K_x ⊗ M_z + M_x ⊗ K_z. Diagonalizing the x-pencil (K_x v = λ M_x v) splits
//! the problem into one tridiagonal system per x-mode, A(λ) = λ M_z + K_z,
//! whose minimum energy with prescribed boundary value ĝ is ĝ² S(λ), S
//! being the Schur complement onto the boundary node.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::gauss_core::{gauss_density, gauss_legendre_rule, FractionalOrder};
use crate::set_model::GaussianSet;

pub const DEFAULT_X_GRADING: f64 = 3.0;

/// Domain and mesh of a finite-element energy solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdeMesh {
    /// Half-width L of the x-interval.
    pub half_width: f64,
    /// Height Z of the z-interval.
    pub height: f64,
    pub n_x: usize,
    pub n_z: usize,
    /// Exponent g of the z-grading z_j = Z (j/n_z)^g; `None` means 2/s.
    pub grading: Option<f64>,
    /// Exponent of the x-grading towards the jump points of the data
    /// (1 = uniform).
    pub x_grading: f64,
}

impl PdeMesh {
    pub fn new(n_x: usize, n_z: usize) -> Self {
        Self {
            half_width: 6.0,
            height: 4.0,
            n_x,
            n_z,
            grading: None,
            x_grading: DEFAULT_X_GRADING,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.half_width >= 6.0) {
            return Err(Error::domain("pde half-width L", self.half_width, "[6, ∞)"));
        }
        if !(self.height >= 4.0) {
            return Err(Error::domain("pde height Z", self.height, "[4, ∞)"));
        }
        if self.n_x < 64 || self.n_z < 64 {
            return Err(Error::domain(
                "pde mesh size",
                self.n_x.min(self.n_z) as f64,
                "at least 64 cells per direction",
            ));
        }
        if !(self.x_grading >= 1.0) {
            return Err(Error::domain("pde x-grading exponent", self.x_grading, "[1, ∞)"));
        }
        if let Some(g) = self.grading {
            if !(g >= 1.0) {
                return Err(Error::domain("pde grading exponent", g, "[1, ∞)"));
            }
        }
        Ok(())
    }
}

/// Symmetric tridiagonal matrix: diagonal and superdiagonal.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

/// Nodes on [−L, L]: the jump points inside the interval split it into
/// segments, each segment gets cells in proportion to its length, and cells
/// are graded towards segment ends that are jump points.
fn x_nodes(half_width: f64, n: usize, jumps: &[f64], grading: f64) -> Vec<f64> {
    let mut breaks = vec![-half_width];
    breaks.extend(jumps.iter().copied().filter(|p| p.abs() < half_width));
    breaks.push(half_width);
    breaks.dedup();
    let segments = breaks.len() - 1;
    let mut counts: Vec<usize> = breaks
        .windows(2)
        .map(|w| (((w[1] - w[0]) / (2.0 * half_width) * n as f64).round() as usize).max(4))
        .collect();
    // Fix rounding so the total is exactly n (or the minimum possible).
    let total: usize = counts.iter().sum();
    if total > n {
        let mut excess = total - n;
        while excess > 0 {
            let i = (0..segments).max_by_key(|&i| counts[i]).expect("nonempty");
            if counts[i] <= 4 {
                break;
            }
            counts[i] -= 1;
            excess -= 1;
        }
    } else {
        let i = (0..segments).max_by_key(|&i| counts[i]).expect("nonempty");
        counts[i] += n - total;
    }
    let is_jump = |x: f64| jumps.contains(&x);
    let mut nodes = vec![breaks[0]];
    for (w, &m) in breaks.windows(2).zip(&counts) {
        let (p, q) = (w[0], w[1]);
        let map = |u: f64| -> f64 {
            match (is_jump(p), is_jump(q)) {
                (true, true) if u < 0.5 => p + 0.5 * (q - p) * (2.0 * u).powf(grading),
                (true, true) => q - 0.5 * (q - p) * (2.0 * (1.0 - u)).powf(grading),
                (true, false) => p + (q - p) * u.powf(grading),
                (false, true) => q - (q - p) * (1.0 - u).powf(grading),
                (false, false) => p + (q - p) * u,
            }
        };
        for j in 1..m {
            nodes.push(map(j as f64 / m as f64));
        }
        nodes.push(q);
    }
    nodes
}

/// Stiffness and mass matrices of P1 elements on the given nodes, weighted
/// by the Gaussian density.
fn x_matrices(nodes: &[f64]) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = nodes.len() - 1;
    let reference = gauss_legendre_rule(8, 0.0, 1.0);
    let mut k = DMatrix::zeros(n + 1, n + 1);
    let mut m = DMatrix::zeros(n + 1, n + 1);
    for e in 0..n {
        let x0 = nodes[e];
        let h = nodes[e + 1] - x0;
        let (mut mass, mut m00, mut m01, mut m11) = (0.0, 0.0, 0.0, 0.0);
        for (&t, &w) in reference.nodes.iter().zip(&reference.weights) {
            let rho = w * h * gauss_density(x0 + t * h);
            mass += rho;
            m00 += rho * (1.0 - t) * (1.0 - t);
            m01 += rho * (1.0 - t) * t;
            m11 += rho * t * t;
        }
        let stiff = mass / (h * h);
        k[(e, e)] += stiff;
        k[(e + 1, e + 1)] += stiff;
        k[(e, e + 1)] -= stiff;
        k[(e + 1, e)] -= stiff;
        m[(e, e)] += m00;
        m[(e + 1, e + 1)] += m11;
        m[(e, e + 1)] += m01;
        m[(e + 1, e)] += m01;
    }
    (k, m)
}

fn jump_points(e: &GaussianSet) -> Vec<f64> {
    e.signed_endpoints().into_iter().map(|(p, _)| p).collect()
}

/// ∫_{z1}^{z2} z^a (φ_0², φ_0 φ_1, φ_1², 1) dz for the hat functions of
/// [z1, z2], from exact power moments. Only used where z2/z1 is large, so
/// the moment differences do not cancel.
fn z_element_exact(z1: f64, z2: f64, a: f64) -> [f64; 4] {
    let moment = |p: f64| (z2.powf(a + p + 1.0) - z1.powf(a + p + 1.0)) / (a + p + 1.0);
    let (m0, m1, m2) = (moment(0.0), moment(1.0), moment(2.0));
    let d2 = (z2 - z1) * (z2 - z1);
    [
        (z2 * z2 * m0 - 2.0 * z2 * m1 + m2) / d2,
        (-m2 + (z1 + z2) * m1 - z1 * z2 * m0) / d2,
        (m2 - 2.0 * z1 * m1 + z1 * z1 * m0) / d2,
        m0,
    ]
}

fn z_element_gauss(z1: f64, z2: f64, a: f64) -> [f64; 4] {
    let rule = gauss_legendre_rule(10, 0.0, 1.0);
    let d = z2 - z1;
    let mut out = [0.0; 4];
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let wz = w * d * (z1 + t * d).powf(a);
        out[0] += wz * (1.0 - t) * (1.0 - t);
        out[1] += wz * (1.0 - t) * t;
        out[2] += wz * t * t;
        out[3] += wz;
    }
    out
}

/// Stiffness and mass matrices of P1 elements on the graded z-grid, weighted
/// by z^{1−s}.
fn z_matrices(height: f64, n: usize, grading: f64, s: f64) -> (Tridiagonal, Tridiagonal) {
    let a = 1.0 - s;
    let nodes: Vec<f64> = (0..=n)
        .map(|j| height * (j as f64 / n as f64).powf(grading))
        .collect();
    let mut k = Tridiagonal {
        diag: vec![0.0; n + 1],
        off: vec![0.0; n],
    };
    let mut m = Tridiagonal {
        diag: vec![0.0; n + 1],
        off: vec![0.0; n],
    };
    for e in 0..n {
        let (z1, z2) = (nodes[e], nodes[e + 1]);
        let ints = if z1 == 0.0 || z2 > 1.5 * z1 {
            z_element_exact(z1, z2, a)
        } else {
            z_element_gauss(z1, z2, a)
        };
        let d = z2 - z1;
        let stiff = ints[3] / (d * d);
        k.diag[e] += stiff;
        k.diag[e + 1] += stiff;
        k.off[e] -= stiff;
        m.diag[e] += ints[0];
        m.off[e] += ints[1];
        m.diag[e + 1] += ints[2];
    }
    (k, m)
}

/// Minimum energy per unit boundary value² of the mode with x-eigenvalue λ:
/// backward elimination of λ M_z + K_z onto node 0.
fn schur(lambda: f64, kz: &Tridiagonal, mz: &Tridiagonal) -> f64 {
    let n = kz.diag.len() - 1;
    let mut d = lambda * mz.diag[n] + kz.diag[n];
    for j in (0..n).rev() {
        let off = lambda * mz.off[j] + kz.off[j];
        d = lambda * mz.diag[j] + kz.diag[j] - off * off / d;
    }
    d.max(0.0)
}

/// Generalized eigenpairs of (K, M) as (λ, Qᵀ Lᵀ) where M = L Lᵀ; the
/// second factor maps nodal data g to modal data ĝ = Vᵀ M g.
fn x_modes(k: DMatrix<f64>, m: DMatrix<f64>, what: &str) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let chol = m.cholesky().ok_or_else(|| Error::LinearSolve {
        detail: format!("{what}: Gaussian mass matrix is not positive definite"),
    })?;
    let l = chol.l();
    let l_inv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::LinearSolve {
            detail: format!("{what}: singular Cholesky factor"),
        })?;
    let c = &l_inv * k * l_inv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(c, 1e-14, 10_000).ok_or_else(|| Error::LinearSolve {
        detail: format!("{what}: symmetric eigensolver did not converge"),
    })?;
    let to_modal = eig.eigenvectors.transpose() * l.transpose();
    let lambdas = eig.eigenvalues.iter().map(|v| v.max(0.0)).collect();
    Ok((lambdas, to_modal))
}

fn boundary_data(e: &GaussianSet, nodes: &[f64]) -> DVector<f64> {
    let edges = jump_points(e);
    DVector::from_iterator(
        nodes.len(),
        nodes.iter().map(|&x| {
            if edges.iter().any(|&p| (p - x).abs() < 1e-12) {
                0.5
            } else if e.contains(x) {
                1.0
            } else {
                0.0
            }
        }),
    )
}

fn describe(mesh: &PdeMesh) -> String {
    format!(
        "L={}, Z={}, n_x={}, n_z={}, grading={:?}, x_grading={}",
        mesh.half_width, mesh.height, mesh.n_x, mesh.n_z, mesh.grading, mesh.x_grading
    )
}

/// Half the discrete minimum energy: a finite-element approximation of the
/// with-constant perimeter of E.
pub fn pde_energy(e: &GaussianSet, s: FractionalOrder, mesh: &PdeMesh) -> Result<f64> {
    mesh.validate()?;
    let grading = mesh.grading.unwrap_or(2.0 / s.value());
    let nodes = x_nodes(mesh.half_width, mesh.n_x, &jump_points(e), mesh.x_grading);
    let (kx, mx) = x_matrices(&nodes);
    let g = boundary_data(e, &nodes);
    if g.iter().all(|&v| v == g[0]) && (g[0] == 0.0 || g[0] == 1.0) {
        return Ok(0.0);
    }
    let (kz, mz) = z_matrices(mesh.height, mesh.n_z, grading, s.value());
    let (lambdas, to_modal) = x_modes(kx, mx, &describe(mesh))?;
    let g_hat = to_modal * g;
    let energy: f64 = lambdas
        .iter()
        .zip(g_hat.iter())
        .map(|(&lam, &gh)| gh * gh * schur(lam, &kz, &mz))
        .sum();
    Ok(0.5 * energy)
}

/// [`pde_energy`] for the cylinder ℝ × E ⊂ ℝ², discretized on a tensor mesh
/// in (x₁, x₂) with `n_transverse` cells along the dummy coordinate x₁.
pub fn pde_energy_cylinder(
    e: &GaussianSet,
    s: FractionalOrder,
    mesh: &PdeMesh,
    n_transverse: usize,
) -> Result<f64> {
    mesh.validate()?;
    if n_transverse < 8 {
        return Err(Error::domain("transverse mesh size", n_transverse as f64, "at least 8 cells"));
    }
    let grading = mesh.grading.unwrap_or(2.0 / s.value());
    let nodes = x_nodes(mesh.half_width, mesh.n_x, &jump_points(e), mesh.x_grading);
    let (kx, mx) = x_matrices(&nodes);
    let transverse = x_nodes(mesh.half_width, n_transverse, &[], 1.0);
    let (kt, mt) = x_matrices(&transverse);
    let g = boundary_data(e, &nodes);
    let ones = DVector::from_element(n_transverse + 1, 1.0);
    let (kz, mz) = z_matrices(mesh.height, mesh.n_z, grading, s.value());
    let (lx, to_x) = x_modes(kx, mx, &describe(mesh))?;
    let (lt, to_t) = x_modes(kt, mt, "transverse pencil")?;
    let gx = to_x * g;
    let gt = to_t * ones;
    let mut energy = 0.0;
    for (&l1, &c1) in lt.iter().zip(gt.iter()) {
        for (&l2, &c2) in lx.iter().zip(gx.iter()) {
            let a = c1 * c2;
            if a != 0.0 {
                energy += a * a * schur(l1 + l2, &kz, &mz);
            }
        }
    }
    Ok(0.5 * energy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_data_has_no_energy() {
        let s = FractionalOrder::new(0.5).unwrap();
        let mesh = PdeMesh::new(64, 64);
        assert_eq!(pde_energy(&GaussianSet::empty(), s, &mesh).unwrap(), 0.0);
        assert_eq!(pde_energy(&GaussianSet::real_line(), s, &mesh).unwrap(), 0.0);
    }

    #[test]
    fn mesh_validation() {
        let s = FractionalOrder::new(0.5).unwrap();
        let mut mesh = PdeMesh::new(32, 64);
        assert!(pde_energy(&GaussianSet::left_halfline(0.0), s, &mesh).is_err());
        mesh.n_x = 64;
        mesh.half_width = 5.0;
        assert!(pde_energy(&GaussianSet::left_halfline(0.0), s, &mesh).is_err());
    }

    #[test]
    fn exact_and_gauss_element_integrals_agree() {
        let a = z_element_exact(1.0, 1.4, 0.3);
        let b = z_element_gauss(1.0, 1.4, 0.3);
        for i in 0..4 {
            assert!((a[i] - b[i]).abs() < 1e-13);
        }
    }
}
