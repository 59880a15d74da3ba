//! Exact algebra of the isotropic 2-D oscillator inside one degenerate shell.
//!
//! A shell `n` is spanned by `|n_x, n_y⟩` with `n_x + n_y = n`. Coefficient
//! vectors are indexed by `n_y` (so index 0 is `|n, 0⟩`), and
//! `L_z = i (a_x a_y† - a_x† a_y)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{LandauError, Result};
use crate::params::PhysicalParams;
use crate::special::{log_binomial, log_factorial};
use crate::C64;

/// Coefficients over `|n - k, k⟩`, `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockVector2D {
    pub shell: usize,
    pub coeffs: Vec<C64>,
}

impl FockVector2D {
    pub fn new(shell: usize, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != shell + 1 {
            return Err(LandauError::InvalidQuantumNumbers(format!(
                "shell {shell} needs {} coefficients, got {}",
                shell + 1,
                coeffs.len()
            )));
        }
        Ok(FockVector2D { shell, coeffs })
    }

    /// Coefficient of `|n_x, n_y⟩`.
    pub fn coefficient(&self, n_x: usize, n_y: usize) -> C64 {
        if n_x + n_y != self.shell {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[n_y]
        }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Unit norm with the first nonzero coefficient real and positive.
    pub fn phase_fixed(mut self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            return self;
        }
        let tol = 1e-12 * n;
        if let Some(c) = self.coeffs.iter().find(|c| c.norm() > tol) {
            let phase = c.conj() / c.norm();
            self.coeffs.iter_mut().for_each(|v| *v *= phase / n);
        }
        self
    }

    pub fn to_dvector(&self) -> DVector<C64> {
        DVector::from_vec(self.coeffs.clone())
    }

    pub fn distance(&self, other: &FockVector2D) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Matrix of `L_z` in the shell `n`.
pub fn lz_matrix(n: usize) -> DMatrix<C64> {
    let mut m = DMatrix::from_element(n + 1, n + 1, C64::new(0.0, 0.0));
    for ny in 0..=n {
        let nx = n - ny;
        // a_x a_y† |nx, ny⟩ = √(nx (ny+1)) |nx-1, ny+1⟩
        if nx > 0 {
            m[(ny + 1, ny)] = C64::new(0.0, ((nx * (ny + 1)) as f64).sqrt());
        }
        // a_x† a_y |nx, ny⟩ = √((nx+1) ny) |nx+1, ny-1⟩
        if ny > 0 {
            m[(ny - 1, ny)] = C64::new(0.0, -(((nx + 1) * ny) as f64).sqrt());
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeemanSplit {
    pub shell: usize,
    pub lambda: f64,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<FockVector2D>,
}

/// Degenerate first-order perturbation `λ L_z` inside shell `n`.
pub fn zeeman_split(n: usize, lambda: f64) -> ZeemanSplit {
    let eig = lz_matrix(n).symmetric_eigen();
    let mut pairs: Vec<(f64, FockVector2D)> = (0..=n)
        .map(|k| {
            let v = eig.eigenvectors.column(k).iter().copied().collect();
            (
                eig.eigenvalues[k],
                FockVector2D {
                    shell: n,
                    coeffs: v,
                }
                .phase_fixed(),
            )
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    // λ may be negative, which reverses the order of λ m
    let mut scaled: Vec<(f64, FockVector2D)> =
        pairs.into_iter().map(|(m, v)| (lambda * m, v)).collect();
    scaled.sort_by(|a, b| b.0.total_cmp(&a.0));
    ZeemanSplit {
        shell: n,
        lambda,
        eigenvalues: scaled.iter().map(|p| p.0).collect(),
        eigenvectors: scaled.into_iter().map(|p| p.1).collect(),
    }
}

/// Spherical label: `n = n_+ + n_-`, `m = n_+ - n_-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphericalLabel {
    pub n: usize,
    pub m: i64,
}

impl SphericalLabel {
    pub fn new(n: usize, m: i64) -> Result<Self> {
        let n_i = n as i64;
        if m.abs() > n_i || (n_i + m) % 2 != 0 {
            return Err(LandauError::InvalidQuantumNumbers(format!(
                "m = {m} is not one of n, n-2, ..., -n for n = {n}"
            )));
        }
        Ok(SphericalLabel { n, m })
    }

    pub fn n_plus(&self) -> usize {
        ((self.n as i64 + self.m) / 2) as usize
    }

    pub fn n_minus(&self) -> usize {
        ((self.n as i64 - self.m) / 2) as usize
    }

    /// All labels of shell `n`, `m` descending.
    pub fn shell(n: usize) -> Vec<SphericalLabel> {
        (0..=n)
            .map(|k| SphericalLabel {
                n,
                m: n as i64 - 2 * k as i64,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisChange {
    pub label: SphericalLabel,
    /// Normalized and phase-fixed.
    pub vector: FockVector2D,
    /// Norm of the double sum before normalization.
    pub raw_norm: f64,
}

/// `|n, m⟩` expanded in `|n_x, n_y⟩` by the double sum over `(k, j)` with
/// binomials, `i^{k-j}` and `√((n-k-j)! (k+j)!)` weights.
pub fn basis_change(n: usize, m: i64) -> Result<BasisChange> {
    let label = SphericalLabel::new(n, m)?;
    let (np, nm) = (label.n_plus(), label.n_minus());
    let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
    let ln_pref = -0.5 * (log_factorial(np) + log_factorial(nm) + n as f64 * 2f64.ln());
    let i_pow = |p: i64| match p.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    };
    for k in 0..=np {
        for j in 0..=nm {
            // terms with a negative oscillator count vanish
            let Some(nx) = n.checked_sub(k + j) else {
                continue;
            };
            let ln_w = ln_pref
                + log_binomial(np, k)
                + log_binomial(nm, j)
                + 0.5 * (log_factorial(nx) + log_factorial(k + j));
            coeffs[k + j] += i_pow(k as i64 - j as i64) * ln_w.exp();
        }
    }
    let raw = FockVector2D { shell: n, coeffs };
    let raw_norm = raw.norm();
    Ok(BasisChange {
        label,
        vector: raw.phase_fixed(),
        raw_norm,
    })
}

/// Columns `basis_change(n, m)` for `m = n, n-2, ..., -n`.
pub fn basis_change_matrix(n: usize) -> Result<DMatrix<C64>> {
    let cols: Vec<DVector<C64>> = SphericalLabel::shell(n)
        .iter()
        .map(|l| basis_change(n, l.m).map(|b| b.vector.to_dvector()))
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_columns(&cols))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandauRow {
    pub m: i32,
    pub energy_unperturbed: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonSplittingTable {
    pub n: u32,
    pub delta_b: f64,
    pub rows: Vec<LandauRow>,
    /// `max E - min E` across the `m` rows.
    pub spread: f64,
    /// Oscillator contrast: `zeeman_split(1, e ΔB / 2m_e)` eigenvalues.
    pub oscillator_n1: Vec<f64>,
}

/// Landau energies `(2n+1) e (B + ΔB)/(2 m_e)` for each `m`, which carry no
/// `m` dependence, next to the split oscillator shell `n = 1`.
pub fn landau_nonsplitting_check(
    n: u32,
    ms: &[i32],
    delta_b: f64,
    params: &PhysicalParams,
) -> Result<NonSplittingTable> {
    if !(delta_b > -params.b) {
        return Err(LandauError::InvalidParams(format!(
            "ΔB = {delta_b} must exceed -B = {}",
            -params.b
        )));
    }
    let shifted = params.with_field(params.b + delta_b)?;
    let mut rows = Vec::with_capacity(ms.len());
    for &m in ms {
        if m > n as i32 {
            return Err(LandauError::InvalidQuantumNumbers(format!(
                "m = {m} exceeds n = {n}"
            )));
        }
        rows.push(LandauRow {
            m,
            energy_unperturbed: params.landau_energy(n),
            energy: shifted.landau_energy(n),
        });
    }
    let max = rows
        .iter()
        .map(|r| r.energy)
        .fold(f64::NEG_INFINITY, f64::max);
    let min = rows.iter().map(|r| r.energy).fold(f64::INFINITY, f64::min);
    let lambda = params.e * delta_b / (2.0 * params.m_e);
    Ok(NonSplittingTable {
        n,
        delta_b,
        spread: if rows.is_empty() { 0.0 } else { max - min },
        rows,
        oscillator_n1: zeeman_split(1, lambda).eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn lz_small_shells() {
        let m0 = lz_matrix(0);
        assert_eq!(m0[(0, 0)], c(0.0, 0.0));
        let m1 = lz_matrix(1);
        assert_eq!(m1[(0, 0)], c(0.0, 0.0));
        assert_eq!(m1[(0, 1)], c(0.0, -1.0));
        assert_eq!(m1[(1, 0)], c(0.0, 1.0));
        assert_eq!(m1[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn lz_is_hermitian_with_zero_diagonal() {
        for n in 0..=8 {
            let m = lz_matrix(n);
            assert_eq!(m.adjoint(), m);
            for k in 0..=n {
                assert_eq!(m[(k, k)], c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn zeeman_shell_one_and_two() {
        let z = zeeman_split(1, 0.3);
        assert!((z.eigenvalues[0] - 0.3).abs() < 1e-12 && (z.eigenvalues[1] + 0.3).abs() < 1e-12);
        let plus =
            FockVector2D::new(1, vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap();
        let minus =
            FockVector2D::new(1, vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2)]).unwrap();
        assert!(z.eigenvectors[0].distance(&plus) < 1e-12);
        assert!(z.eigenvectors[1].distance(&minus) < 1e-12);
        let z2 = zeeman_split(2, 0.1);
        for (a, b) in z2.eigenvalues.iter().zip([0.2, 0.0, -0.2]) {
            assert!((a - b).abs() < 1e-12);
        }
        let z3 = zeeman_split(3, 1.0);
        for (a, b) in z3.eigenvalues.iter().zip([3.0, 1.0, -1.0, -3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        // negative λ keeps the descending order
        let zn = zeeman_split(1, -0.5);
        assert!(zn.eigenvalues[0] > zn.eigenvalues[1]);
    }

    #[test]
    fn basis_change_examples() {
        let b = basis_change(1, 1).unwrap();
        let want =
            FockVector2D::new(1, vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap();
        assert!(b.vector.distance(&want) < 1e-14);
        let b = basis_change(2, 0).unwrap();
        let want = FockVector2D::new(
            2,
            vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)],
        )
        .unwrap();
        assert!(b.vector.distance(&want) < 1e-14);
        assert!((b.raw_norm - 1.0).abs() < 1e-14);
        // |2,2⟩ = (|2,0⟩ + √2 i |1,1⟩ - |0,2⟩)/2
        let b = basis_change(2, 2).unwrap();
        let want =
            FockVector2D::new(2, vec![c(0.5, 0.0), c(0.0, FRAC_1_SQRT_2), c(-0.5, 0.0)]).unwrap();
        assert!(b.vector.distance(&want) < 1e-14);
        assert!(basis_change(2, 1).is_err());
        assert!(basis_change(2, 4).is_err());
    }

    #[test]
    fn top_state_is_single_sum() {
        // (a_+†)^n |0⟩ / √n! has coefficients √C(n,k) i^k / √2^n
        for n in 0..=8usize {
            let b = basis_change(n, n as i64).unwrap();
            for k in 0..=n {
                let mag = (log_binomial(n, k) - n as f64 * 2f64.ln()).exp().sqrt();
                let phase = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][k % 4];
                assert!((b.vector.coeffs[k] - phase * mag).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn basis_change_diagonalizes_and_is_unitary() {
        for n in 0..=8 {
            let lz = lz_matrix(n);
            for l in SphericalLabel::shell(n) {
                let b = basis_change(n, l.m).unwrap();
                let v = b.vector.to_dvector();
                let r = &lz * &v - v.scale(l.m as f64);
                assert!(r.norm() < 1e-12, "n={n} m={}", l.m);
                assert!((b.raw_norm - 1.0).abs() < 1e-12);
            }
            let u = basis_change_matrix(n).unwrap();
            let id = DMatrix::<C64>::identity(n + 1, n + 1);
            assert!((u.adjoint() * &u - id).norm() < 1e-12);
        }
    }

    #[test]
    fn nonsplitting_table() {
        let p = PhysicalParams::default();
        let t = landau_nonsplitting_check(0, &[0, -5, -20], 0.5, &p).unwrap();
        assert_eq!(t.spread, 0.0);
        assert_eq!(t.rows[0].energy, 0.75);
        assert!((t.oscillator_n1[0] - t.oscillator_n1[1] - 0.5).abs() < 1e-12);
        let t0 = landau_nonsplitting_check(2, &[0, 1], 0.0, &p).unwrap();
        assert_eq!(t0.rows[0].energy, p.landau_energy(2));
        assert!(landau_nonsplitting_check(0, &[0], -1.0, &p).is_err());
    }
}
