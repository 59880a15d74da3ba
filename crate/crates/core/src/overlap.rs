//! Expansion of symmetric-gauge eigenstates in first-gauge eigenstates, and
//! the comparison of mechanical and conserved quantities across gauge classes.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LandauError, Result};
use crate::exec::Exec;
use crate::field::WaveField;
use crate::gauge::{chi_between, transform_wavefield, GaugeBase, PolynomialGaugeFunction};
use crate::operators::{Engine, FdOrder, OperatorKind, OperatorSpec};
use crate::params::{GridSpec, PhysicalParams};
use crate::states::{
    auto_grid_packet, auto_grid_symmetric, class_member, landau_y_factor, packet_state_with,
    symmetric_mean_r2, symmetric_state_with, PacketSpec, QuantumNumbers,
};
use crate::C64;

/// Momentum sampling `k ∈ [-k_max, k_max]` with `n_k` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KSampling {
    pub k_max: f64,
    pub n_k: usize,
}

impl Default for KSampling {
    fn default() -> Self {
        KSampling {
            k_max: 8.0,
            n_k: 257,
        }
    }
}

impl KSampling {
    pub fn new(k_max: f64, n_k: usize) -> Result<Self> {
        if !(k_max > 0.0 && k_max.is_finite()) || n_k < 3 {
            return Err(LandauError::InvalidParams(format!(
                "k sampling needs k_max > 0 and at least 3 points, got {k_max}, {n_k}"
            )));
        }
        Ok(KSampling { k_max, n_k })
    }

    pub fn dk(&self) -> f64 {
        2.0 * self.k_max / (self.n_k - 1) as f64
    }

    pub fn k(&self, q: usize) -> f64 {
        -self.k_max + q as f64 * self.dk()
    }

    pub fn ks(&self) -> Vec<f64> {
        (0..self.n_k).map(|q| self.k(q)).collect()
    }

    /// Trapezoid weight of sample `q`.
    pub fn weight(&self, q: usize) -> f64 {
        if q == 0 || q + 1 == self.n_k {
            0.5 * self.dk()
        } else {
            self.dk()
        }
    }

    /// Period in `x` of any finite superposition on this sampling.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.dk()
    }
}

/// Square window of at least `40 l_B` and spacing at most `l_B/12`.
pub fn auto_grid_overlap(n: u32, m: i32, params: &PhysicalParams) -> Result<GridSpec> {
    QuantumNumbers::SymmetricNM { n, m }.validate()?;
    let l = params.l_b();
    let half = (20.0 * l).max(symmetric_mean_r2(n, m, params).sqrt() + 8.0 * l);
    let points = ((2.0 * half / (l / 12.0)).ceil() as usize + 1).max(512);
    GridSpec::square(half, points)
}

/// `U_0 Ψ^S_{n,m}`: the symmetric state carried into the first Landau gauge.
pub fn symmetric_in_landau1(
    exec: Exec,
    n: u32,
    m: i32,
    params: &PhysicalParams,
    grid: &GridSpec,
) -> Result<WaveField> {
    let psi = symmetric_state_with(exec, n, m, params, grid)?;
    let chi = chi_between(GaugeBase::Symmetric, GaugeBase::Landau1, params)?;
    Ok(transform_wavefield(&psi, &chi))
}

fn trapezoid_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i + 1 == n {
        0.5
    } else {
        1.0
    }
}

/// `⟨Ψ^{L1}_{level,k} | φ⟩` for every `k`, where `φ` is expressed in the first
/// gauge, by trapezoidal quadrature over the whole grid.
pub fn overlap_coefficients(exec: Exec, phi: &WaveField, level: u32, ks: &[f64]) -> Vec<C64> {
    let g = phi.grid;
    let p = phi.params;
    let l2 = p.l_b2();
    let scale = g.dx() * g.dy() / (2.0 * PI).sqrt();
    exec.map(ks.len(), |q| {
        let k = ks[q];
        let phase: Vec<C64> = (0..g.nx)
            .map(|i| C64::from_polar(trapezoid_weight(i, g.nx), -k * g.x(i)))
            .collect();
        let mut total = C64::new(0.0, 0.0);
        for j in 0..g.ny {
            let yf = landau_y_factor(level, g.y(j) - l2 * k, &p);
            if yf == 0.0 {
                continue;
            }
            let row = &phi.values[j * g.nx..(j + 1) * g.nx];
            let s: C64 = row.iter().zip(&phase).map(|(v, e)| v * e).sum();
            total += s * (yf * trapezoid_weight(j, g.ny));
        }
        total * scale
    })
}

/// `Σ_q w_q U(k_q) Ψ^{L1}_{level,k_q}` on the grid of `like`.
pub fn reconstruct(
    exec: Exec,
    like: &WaveField,
    level: u32,
    sampling: &KSampling,
    coeffs: &[C64],
) -> WaveField {
    let g = like.grid;
    let p = like.params;
    let l2 = p.l_b2();
    let ks = sampling.ks();
    let c: Vec<C64> = coeffs
        .iter()
        .enumerate()
        .map(|(q, u)| u * (sampling.weight(q) / (2.0 * PI).sqrt()))
        .collect();
    let phases: Vec<Vec<C64>> = exec.map(ks.len(), |q| {
        (0..g.nx)
            .map(|i| C64::from_polar(1.0, ks[q] * g.x(i)))
            .collect()
    });
    let mut out = like.clone();
    out.band = 0;
    exec.fill_rows(&mut out.values, g.nx, |j, row| {
        row.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        let y = g.y(j);
        for (q, ph) in phases.iter().enumerate() {
            let a = c[q] * landau_y_factor(level, y - l2 * ks[q], &p);
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            for (v, e) in row.iter_mut().zip(ph) {
                *v += a * e;
            }
        }
    });
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapTable {
    pub n: u32,
    pub m: i32,
    pub level: u32,
    pub sampling: KSampling,
    pub ks: Vec<f64>,
    pub values: Vec<C64>,
    /// `Σ_q w_q |U(k_q)|²`, which is 1 when the expansion is complete.
    pub parseval: f64,
}

pub fn overlap_table(
    exec: Exec,
    n: u32,
    m: i32,
    level: u32,
    params: &PhysicalParams,
    grid: &GridSpec,
    sampling: &KSampling,
) -> Result<OverlapTable> {
    check_window(grid, sampling, params)?;
    let phi = symmetric_in_landau1(exec, n, m, params, grid)?;
    let ks = sampling.ks();
    let values = overlap_coefficients(exec, &phi, level, &ks);
    let parseval = values
        .iter()
        .enumerate()
        .map(|(q, u)| sampling.weight(q) * u.norm_sqr())
        .sum();
    Ok(OverlapTable {
        n,
        m,
        level,
        sampling: *sampling,
        ks,
        values,
        parseval,
    })
}

fn check_window(grid: &GridSpec, sampling: &KSampling, params: &PhysicalParams) -> Result<()> {
    let l = params.l_b();
    let width = (grid.x_max - grid.x_min).min(grid.y_max - grid.y_min);
    if width < 40.0 * l - 1e-9 {
        return Err(LandauError::WindowTooSmall(format!(
            "overlap window {width:.3} is narrower than 40 l_B = {:.3}",
            40.0 * l
        )));
    }
    let reach = sampling.k_max * params.l_b2();
    if reach > grid.y_max.min(-grid.y_min) {
        return Err(LandauError::WindowTooSmall(format!(
            "guiding lines up to |y| = {reach:.3} leave the window"
        )));
    }
    if sampling.period() < grid.x_max - grid.x_min {
        return Err(LandauError::WindowTooSmall(format!(
            "k spacing {:.4} repeats with period {:.3}, shorter than the window",
            sampling.dk(),
            sampling.period()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionCheck {
    pub n: u32,
    pub m: i32,
    pub sampling: KSampling,
    /// `‖U_0 Ψ^S - Σ w U Ψ^{L1}‖ / ‖Ψ^S‖`.
    pub residual: f64,
    pub parseval: f64,
}

/// Rebuilds `U_0 Ψ^S_{n,m}` from its first-gauge expansion in level `n`.
pub fn verify_superposition(
    exec: Exec,
    n: u32,
    m: i32,
    params: &PhysicalParams,
    grid: &GridSpec,
    sampling: &KSampling,
) -> Result<SuperpositionCheck> {
    check_window(grid, sampling, params)?;
    let phi = symmetric_in_landau1(exec, n, m, params, grid)?;
    let ks = sampling.ks();
    let coeffs = overlap_coefficients(exec, &phi, n, &ks);
    let rebuilt = reconstruct(exec, &phi, n, sampling, &coeffs);
    let parseval = coeffs
        .iter()
        .enumerate()
        .map(|(q, u)| sampling.weight(q) * u.norm_sqr())
        .sum();
    Ok(SuperpositionCheck {
        n,
        m,
        sampling: *sampling,
        residual: phi.distance(&rebuilt)? / phi.norm()?,
        parseval,
    })
}

/// [`verify_superposition`] for each sampling in turn.
pub fn refinement_scan(
    exec: Exec,
    n: u32,
    m: i32,
    params: &PhysicalParams,
    grid: &GridSpec,
    samplings: &[KSampling],
) -> Result<Vec<SuperpositionCheck>> {
    samplings
        .iter()
        .map(|s| verify_superposition(exec, n, m, params, grid, s))
        .collect()
}

/// Widens `k_max` from 2 by doubling (at fixed spacing `1/16`) until the
/// residual drops below `tolerance`.
pub fn converge_superposition(
    exec: Exec,
    n: u32,
    m: i32,
    params: &PhysicalParams,
    grid: &GridSpec,
    tolerance: f64,
) -> Result<SuperpositionCheck> {
    let mut last = f64::INFINITY;
    let mut k_max = 2.0;
    while k_max <= 16.0 {
        let n_k = (2.0 * k_max * 16.0) as usize + 1;
        let s = KSampling::new(k_max, n_k)?;
        if check_window(grid, &s, params).is_err() {
            break;
        }
        let c = verify_superposition(exec, n, m, params, grid, &s)?;
        if c.residual < tolerance {
            return Ok(c);
        }
        last = c.residual;
        k_max *= 2.0;
    }
    Err(LandauError::Stagnated {
        residual: last,
        tolerance,
    })
}

/// `max_k |⟨Ψ^{L1}_{level,k} | U_0 Ψ^S_{n,m}⟩|`, zero for `level ≠ n`.
pub fn cross_level_overlap(
    exec: Exec,
    n: u32,
    m: i32,
    level: u32,
    params: &PhysicalParams,
    grid: &GridSpec,
    sampling: &KSampling,
) -> Result<f64> {
    let t = overlap_table(exec, n, m, level, params, grid, sampling)?;
    Ok(t.values.iter().map(|u| u.norm()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Equal,
    Unequal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub operator: String,
    pub class: String,
    pub value: f64,
    pub abs_err: f64,
    /// Difference between two members of the class (two random `χ`).
    pub chi_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassComparison {
    pub operator: String,
    pub relation: Relation,
    pub difference: f64,
    /// Equal rows: the largest allowed difference. Unequal rows: the
    /// smallest required difference.
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub symmetric_class: String,
    pub packet_class: String,
    pub rows: Vec<ClassRow>,
    pub comparisons: Vec<ClassComparison>,
    pub max_chi_spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassConfig {
    pub n: u32,
    pub m: i32,
    pub k_x: f64,
    pub sigma_k: f64,
    pub chi_degree: usize,
    pub seed: u64,
    /// Agreement required of the mechanical rows.
    pub equal_tolerance: f64,
}

impl Default for ClassConfig {
    fn default() -> Self {
        ClassConfig {
            n: 1,
            m: -1,
            k_x: 2.0,
            sigma_k: 0.05,
            chi_degree: 3,
            seed: 7,
            equal_tolerance: 1e-4,
        }
    }
}

/// Evaluates `p^mech_x`, `L^mech_z`, `P^cons_x`, `L^cons_z` on two members of
/// the symmetric-eigenstate class and two of the first-gauge packet class.
/// Mechanical values must agree across the classes; conserved ones must not.
pub fn class_inequality_report(
    engine: &Engine,
    cfg: &ClassConfig,
    params: &PhysicalParams,
) -> Result<ClassReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sym_grid = auto_grid_symmetric(cfg.n, cfg.m, params)?;
    let sym = symmetric_state_with(engine.exec, cfg.n, cfg.m, params, &sym_grid)?;
    let packet = PacketSpec::new(cfg.sigma_k)?;
    let pk_grid = auto_grid_packet(
        cfg.n,
        params.l_b2() * cfg.k_x,
        &packet,
        params,
        params.l_b() / 16.0,
    )?;
    let pk = packet_state_with(engine.exec, cfg.n, cfg.k_x, &packet, params, &pk_grid)?;

    let kinds = [
        OperatorKind::PMechX,
        OperatorKind::LMechZ,
        OperatorKind::PConsX,
        OperatorKind::LConsZ,
    ];
    let mut rows = Vec::with_capacity(8);
    let mut per_class: Vec<Vec<(f64, f64)>> = Vec::new();
    for base in [&sym, &pk] {
        let length = base.grid.max_radius();
        let chi1 =
            PolynomialGaugeFunction::random_on_length(&mut rng, cfg.chi_degree, 1.0, length)?;
        let chi2 =
            PolynomialGaugeFunction::random_on_length(&mut rng, cfg.chi_degree, 1.0, length)?;
        let a = class_member(base, &chi1);
        let b = class_member(base, &chi2);
        let mut vals = Vec::with_capacity(kinds.len());
        for kind in &kinds {
            let ra = engine.expectation(&OperatorSpec::for_field(kind.clone(), &a), &a)?;
            let rb = engine.expectation(&OperatorSpec::for_field(kind.clone(), &b), &b)?;
            rows.push(ClassRow {
                operator: kind.name(),
                class: base.label.describe(),
                value: ra.value.re,
                abs_err: ra.abs_err,
                chi_spread: (ra.value - rb.value).norm(),
            });
            vals.push((ra.value.re, ra.abs_err));
        }
        per_class.push(vals);
    }

    let comparisons = kinds
        .iter()
        .enumerate()
        .map(|(i, kind)| {
            let (va, ea) = per_class[0][i];
            let (vb, eb) = per_class[1][i];
            let difference = (va - vb).abs();
            let mechanical = matches!(kind, OperatorKind::PMechX | OperatorKind::LMechZ);
            if mechanical {
                ClassComparison {
                    operator: kind.name(),
                    relation: Relation::Equal,
                    difference,
                    threshold: cfg.equal_tolerance,
                    pass: difference <= cfg.equal_tolerance,
                }
            } else {
                let combined = if (ea + eb).is_finite() {
                    ea + eb
                } else {
                    f64::INFINITY
                };
                let threshold = 10.0 * combined;
                ClassComparison {
                    operator: kind.name(),
                    relation: Relation::Unequal,
                    difference,
                    threshold,
                    pass: difference > threshold,
                }
            }
        })
        .collect();

    let max_chi_spread = rows.iter().map(|r| r.chi_spread).fold(0.0, f64::max);
    Ok(ClassReport {
        symmetric_class: sym.label.describe(),
        packet_class: pk.label.describe(),
        rows,
        comparisons,
        max_chi_spread,
    })
}

/// Engine used by the class comparison and the guiding-centre checks.
pub fn accurate_engine() -> Engine {
    Engine::with_order(FdOrder::Eight)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_geometry() {
        let s = KSampling::default();
        assert_eq!(s.dk(), 1.0 / 16.0);
        assert_eq!(s.k(0), -8.0);
        assert_eq!(s.k(256), 8.0);
        assert!((s.period() - 32.0 * PI).abs() < 1e-12);
        assert!(KSampling::new(0.0, 10).is_err());
    }

    #[test]
    fn window_is_checked() {
        let p = PhysicalParams::default();
        let g = GridSpec::square(10.0, 256).unwrap();
        let e = overlap_table(Exec::default(), 0, 0, 0, &p, &g, &KSampling::default());
        assert!(matches!(e, Err(LandauError::WindowTooSmall(_))));
    }

    #[test]
    fn lowest_state_coefficients() {
        // |U(k)| = e^{-k²/2} / π^{1/4} for (0,0) with unit magnetic length
        let p = PhysicalParams::default();
        let g = auto_grid_overlap(0, 0, &p).unwrap();
        let t = overlap_table(
            Exec::default(),
            0,
            0,
            0,
            &p,
            &g,
            &KSampling::new(6.0, 97).unwrap(),
        )
        .unwrap();
        for (k, u) in t.ks.iter().zip(&t.values) {
            let want = (-k * k / 2.0).exp() / PI.powf(0.25);
            assert!((u.norm() - want).abs() < 1e-9, "k={k} {u} {want}");
        }
        assert!((t.parseval - 1.0).abs() < 1e-9);
    }
}
