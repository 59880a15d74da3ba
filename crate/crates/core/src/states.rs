//! Analytic Landau eigenstates in the symmetric and Landau gauges, gauge-class
//! members and normalizable wave packets.

use std::f64::consts::PI;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::error::{LandauError, Result};
use crate::exec::Exec;
use crate::field::WaveField;
use crate::gauge::{transform_wavefield, GaugeSpec, PolynomialGaugeFunction};
use crate::params::{GridSpec, PhysicalParams};
use crate::special::{assoc_laguerre, hermite_function, log_factorial, DEGREE_CAP};
use crate::C64;

/// Points per axis of the automatically sized symmetric-gauge grids.
pub const AUTO_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum QuantumNumbers {
    /// Landau level `n`, canonical angular momentum `m ≤ n`.
    SymmetricNM { n: u32, m: i32 },
    /// Landau level `n`, momentum `k_x` along x (first Landau gauge).
    Landau1NK { n: u32, k_x: f64 },
    /// Landau level `n`, momentum `k_y` along y (second Landau gauge).
    Landau2NK { n: u32, k_y: f64 },
}

impl QuantumNumbers {
    pub fn n(&self) -> u32 {
        match *self {
            QuantumNumbers::SymmetricNM { n, .. }
            | QuantumNumbers::Landau1NK { n, .. }
            | QuantumNumbers::Landau2NK { n, .. } => n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            QuantumNumbers::SymmetricNM { n, m } => {
                if m > n as i32 {
                    return Err(LandauError::InvalidQuantumNumbers(format!(
                        "m = {m} exceeds n = {n}"
                    )));
                }
                if n as usize + m.unsigned_abs() as usize > DEGREE_CAP {
                    return Err(LandauError::CapExceeded {
                        degree: n as usize + m.unsigned_abs() as usize,
                        cap: DEGREE_CAP,
                    });
                }
            }
            QuantumNumbers::Landau1NK { n, k_x: k } | QuantumNumbers::Landau2NK { n, k_y: k } => {
                if !k.is_finite() {
                    return Err(LandauError::InvalidQuantumNumbers(format!("momentum {k}")));
                }
                if n as usize > DEGREE_CAP {
                    return Err(LandauError::CapExceeded {
                        degree: n as usize,
                        cap: DEGREE_CAP,
                    });
                }
            }
        }
        Ok(())
    }

    /// Radial node count `n_r = n - (|m| + m)/2` of a symmetric-gauge label.
    pub fn n_r(&self) -> Option<u32> {
        match *self {
            QuantumNumbers::SymmetricNM { n, m } => {
                let nr = n as i64 - (m.unsigned_abs() as i64 + m as i64) / 2;
                u32::try_from(nr).ok()
            }
            _ => None,
        }
    }

    /// Guiding-centre line: `y_0 = l_B² k_x` (first gauge) or
    /// `x_0 = -l_B² k_y` (second gauge).
    pub fn guiding_line(&self, params: &PhysicalParams) -> Option<f64> {
        match *self {
            QuantumNumbers::Landau1NK { k_x, .. } => Some(params.l_b2() * k_x),
            QuantumNumbers::Landau2NK { k_y, .. } => Some(-params.l_b2() * k_y),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PacketForm {
    /// `∫ dk g(k - k_x) Ψ^{(L1)}_{n,k}`: stays inside Landau level `n`.
    #[default]
    Superposition,
    /// `F_{k_x}(x) · Y_n(y - l_B² k_x)` with the transform of `g` in closed form.
    Product,
}

/// Gaussian momentum profile `g(k) = (π σ²)^{-1/4} e^{-k²/(2σ²)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketSpec {
    pub sigma_k: f64,
    pub form: PacketForm,
}

impl PacketSpec {
    pub fn new(sigma_k: f64) -> Result<Self> {
        if !(sigma_k.is_finite() && sigma_k > 0.0) {
            return Err(LandauError::InvalidParams(format!(
                "packet width must be > 0, got {sigma_k}"
            )));
        }
        Ok(PacketSpec {
            sigma_k,
            form: PacketForm::Superposition,
        })
    }

    pub fn with_form(self, form: PacketForm) -> Self {
        PacketSpec { form, ..self }
    }

    pub fn weight(&self, k: f64) -> f64 {
        let s = self.sigma_k;
        (PI * s * s).powf(-0.25) * (-(k * k) / (2.0 * s * s)).exp()
    }

    /// `F_{k_x}(x) = e^{i k_x x} (σ²/π)^{1/4} e^{-σ² x²/2}`.
    pub fn envelope(&self, k_x: f64, x: f64) -> C64 {
        let s = self.sigma_k;
        let a = (s * s / PI).powf(0.25) * (-0.5 * s * s * x * x).exp();
        C64::from_polar(a, k_x * x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StateLabel {
    Eigen(QuantumNumbers),
    Packet {
        n: u32,
        k_x: f64,
        sigma_k: f64,
        form: PacketForm,
    },
    Hall {
        n: u32,
        k_x: f64,
        sigma_k: f64,
        e_field: f64,
    },
    Probe(String),
}

impl StateLabel {
    pub fn is_plane_wave(&self) -> bool {
        matches!(
            self,
            StateLabel::Eigen(QuantumNumbers::Landau1NK { .. })
                | StateLabel::Eigen(QuantumNumbers::Landau2NK { .. })
        )
    }

    pub fn describe(&self) -> String {
        match self {
            StateLabel::Eigen(QuantumNumbers::SymmetricNM { n, m }) => format!("S(n={n};m={m})"),
            StateLabel::Eigen(QuantumNumbers::Landau1NK { n, k_x }) => {
                format!("L1(n={n};kx={k_x})")
            }
            StateLabel::Eigen(QuantumNumbers::Landau2NK { n, k_y }) => {
                format!("L2(n={n};ky={k_y})")
            }
            StateLabel::Packet {
                n,
                k_x,
                sigma_k,
                form,
            } => {
                let tag = match form {
                    PacketForm::Superposition => "packet",
                    PacketForm::Product => "product-packet",
                };
                format!("{tag}(n={n};kx={k_x};sigma={sigma_k})")
            }
            StateLabel::Hall {
                n,
                k_x,
                sigma_k,
                e_field,
            } => format!("hall(n={n};kx={k_x};sigma={sigma_k};E={e_field})"),
            StateLabel::Probe(s) => s.clone(),
        }
    }
}

/// Radial factor `R_{n,m}(r)` of the symmetric-gauge eigenstate, evaluated
/// with log-space normalization.
#[derive(Debug, Clone, Copy)]
pub struct SymmetricRadial {
    nr: usize,
    am: usize,
    l2: f64,
    ln_norm: f64,
}

impl SymmetricRadial {
    pub fn new(n: u32, m: i32, params: &PhysicalParams) -> Result<Self> {
        let q = QuantumNumbers::SymmetricNM { n, m };
        q.validate()?;
        let nr = q.n_r().expect("validated") as usize;
        let am = m.unsigned_abs() as usize;
        let l2 = params.l_b2();
        let ln_norm = 0.5 * (log_factorial(nr) - log_factorial(nr + am) - l2.ln());
        Ok(SymmetricRadial {
            nr,
            am,
            l2,
            ln_norm,
        })
    }

    pub fn eval(&self, r: f64) -> f64 {
        let xi = r * r / (2.0 * self.l2);
        if xi == 0.0 {
            return if self.am == 0 {
                self.ln_norm.exp() * assoc_laguerre(self.nr, 0.0, 0.0).expect("validated")
            } else {
                0.0
            };
        }
        let lag = assoc_laguerre(self.nr, self.am as f64, xi).expect("validated");
        (self.ln_norm + 0.5 * self.am as f64 * xi.ln() - 0.5 * xi).exp() * lag
    }
}

/// Pointwise `Ψ^{(S)}_{n,m}(x, y)`.
pub fn symmetric_value(radial: &SymmetricRadial, m: i32, x: f64, y: f64) -> C64 {
    let r = x.hypot(y);
    let phi = y.atan2(x);
    C64::from_polar(radial.eval(r) / (2.0 * PI).sqrt(), m as f64 * phi)
}

/// `Y_n(y)` centred at zero, unit-normalized in one dimension.
pub fn landau_y_factor(n: u32, y: f64, params: &PhysicalParams) -> f64 {
    let l = params.l_b();
    hermite_function(n as usize, y / l) / l.sqrt()
}

/// Pointwise `Ψ^{(L1)}_{n,k_x}(x, y) = e^{i k_x x}/√(2π) · Y_n(y - l_B² k_x)`.
pub fn landau1_value(n: u32, k_x: f64, params: &PhysicalParams, x: f64, y: f64) -> C64 {
    let y0 = params.l_b2() * k_x;
    C64::from_polar(
        landau_y_factor(n, y - y0, params) / (2.0 * PI).sqrt(),
        k_x * x,
    )
}

/// Pointwise `Ψ^{(L2)}_{n,k_y}(x, y) = Ψ^{(L1)}_{n,k_y}(y, -x)`.
pub fn landau2_value(n: u32, k_y: f64, params: &PhysicalParams, x: f64, y: f64) -> C64 {
    landau1_value(n, k_y, params, y, -x)
}

/// Mean squared radius `⟨r²⟩ = 2(2n - m + 1) l_B²` of a symmetric state.
pub fn symmetric_mean_r2(n: u32, m: i32, params: &PhysicalParams) -> f64 {
    2.0 * (2.0 * n as f64 - m as f64 + 1.0) * params.l_b2()
}

/// Square grid of [`AUTO_POINTS`]² points around the origin that contains
/// the symmetric state `(n, m)` down to below double-precision density.
pub fn auto_grid_symmetric(n: u32, m: i32, params: &PhysicalParams) -> Result<GridSpec> {
    QuantumNumbers::SymmetricNM { n, m }.validate()?;
    let l = params.l_b();
    let half = symmetric_mean_r2(n, m, params).sqrt() + 7.0 * l;
    GridSpec::square(half, AUTO_POINTS)
}

pub fn symmetric_state(
    n: u32,
    m: i32,
    params: &PhysicalParams,
    grid: &GridSpec,
) -> Result<WaveField> {
    symmetric_state_with(Exec::default(), n, m, params, grid)
}

pub fn symmetric_state_with(
    exec: Exec,
    n: u32,
    m: i32,
    params: &PhysicalParams,
    grid: &GridSpec,
) -> Result<WaveField> {
    let radial = SymmetricRadial::new(n, m, params)?;
    let need = 1.5 * symmetric_mean_r2(n, m, params).sqrt();
    if grid.inscribed_radius() < need {
        return Err(LandauError::GridTooSmall(format!(
            "symmetric state ({n},{m}) needs radius {need:.3}, grid covers {:.3}",
            grid.inscribed_radius()
        )));
    }
    Ok(WaveField::from_fn(
        exec,
        *grid,
        GaugeSpec::symmetric(),
        *params,
        StateLabel::Eigen(QuantumNumbers::SymmetricNM { n, m }),
        |x, y| symmetric_value(&radial, m, x, y),
    ))
}

fn check_band_coverage(lo: f64, hi: f64, center: f64, half: f64, axis: &str) -> Result<()> {
    if center - half < lo || center + half > hi {
        return Err(LandauError::GridTooSmall(format!(
            "{axis} range [{lo}, {hi}] does not cover {center} ± {half}"
        )));
    }
    Ok(())
}

/// Plane-wave normalized first-gauge eigenstate.
pub fn landau1_state(
    n: u32,
    k_x: f64,
    params: &PhysicalParams,
    grid: &GridSpec,
) -> Result<WaveField> {
    let q = QuantumNumbers::Landau1NK { n, k_x };
    q.validate()?;
    let y0 = q.guiding_line(params).expect("landau label");
    check_band_coverage(grid.y_min, grid.y_max, y0, 8.0 * params.l_b(), "y")?;
    Ok(WaveField::from_fn(
        Exec::default(),
        *grid,
        GaugeSpec::landau1(),
        *params,
        StateLabel::Eigen(q),
        |x, y| landau1_value(n, k_x, params, x, y),
    ))
}

/// Plane-wave normalized second-gauge eigenstate, obtained from the first
/// gauge by `(x, y) → (y, -x)`.
pub fn landau2_state(
    n: u32,
    k_y: f64,
    params: &PhysicalParams,
    grid: &GridSpec,
) -> Result<WaveField> {
    let q = QuantumNumbers::Landau2NK { n, k_y };
    q.validate()?;
    let x0 = q.guiding_line(params).expect("landau label");
    check_band_coverage(grid.x_min, grid.x_max, x0, 8.0 * params.l_b(), "x")?;
    Ok(WaveField::from_fn(
        Exec::default(),
        *grid,
        GaugeSpec::landau2(),
        *params,
        StateLabel::Eigen(q),
        |x, y| landau2_value(n, k_y, params, x, y),
    ))
}

/// Grid for a plane-wave first-gauge state: the band `y_0 ± (8 + √(2n+1)) l_B`
/// and `|x| ≤ half_x`, spacing `l_B/16`.
pub fn auto_grid_landau1(
    n: u32,
    k_x: f64,
    half_x: f64,
    params: &PhysicalParams,
) -> Result<GridSpec> {
    let l = params.l_b();
    let y0 = params.l_b2() * k_x;
    let half_y = (8.0 + (2.0 * n as f64 + 1.0).sqrt()) * l;
    GridSpec::covering(0.0, y0, half_x, half_y, l / 16.0)
}

/// Rotated counterpart of [`auto_grid_landau1`]: band around `x_0 = -l_B² k_y`,
/// `|y| ≤ half_y`.
pub fn auto_grid_landau2(
    n: u32,
    k_y: f64,
    half_y: f64,
    params: &PhysicalParams,
) -> Result<GridSpec> {
    let l = params.l_b();
    let x0 = -params.l_b2() * k_y;
    let half_x = (8.0 + (2.0 * n as f64 + 1.0).sqrt()) * l;
    GridSpec::covering(x0, 0.0, half_x, half_y, l / 16.0)
}

/// Grid for a packet (or Hall packet) with guiding centres spread around
/// `y_c`: `|x| ≤ 6/σ`, `y_c ± (8σ l_B² + 8 l_B + √(2n+1) l_B)`.
pub fn auto_grid_packet(
    n: u32,
    y_c: f64,
    packet: &PacketSpec,
    params: &PhysicalParams,
    spacing: f64,
) -> Result<GridSpec> {
    let l = params.l_b();
    let half_x = 6.0 / packet.sigma_k;
    let half_y = 8.0 * packet.sigma_k * params.l_b2() + (8.0 + (2.0 * n as f64 + 1.0).sqrt()) * l;
    GridSpec::covering(0.0, y_c, half_x, half_y, spacing)
}

fn check_packet_grid(
    grid: &GridSpec,
    packet: &PacketSpec,
    y_c: f64,
    params: &PhysicalParams,
) -> Result<()> {
    if grid.x_max - grid.x_min < 10.0 / packet.sigma_k {
        return Err(LandauError::GridTooSmall(format!(
            "packet of width {} needs an x-extent of at least {}",
            packet.sigma_k,
            10.0 / packet.sigma_k
        )));
    }
    let half = packet.sigma_k * params.l_b2() * 6.0 + 7.0 * params.l_b();
    check_band_coverage(grid.y_min, grid.y_max, y_c, half, "y")
}

/// First-gauge wave packet of Landau level `n` built on guiding centres
/// `y_0(k) = l_B² k + shift`. Shared by plain and Hall packets.
pub(crate) fn landau1_packet_values(
    exec: Exec,
    n: u32,
    k_x: f64,
    shift: f64,
    packet: &PacketSpec,
    params: &PhysicalParams,
    grid: &GridSpec,
) -> Vec<C64> {
    let l2 = params.l_b2();
    let mut values = vec![C64::new(0.0, 0.0); grid.len()];
    match packet.form {
        PacketForm::Product => {
            let y0 = l2 * k_x + shift;
            let env: Vec<C64> = (0..grid.nx)
                .map(|i| packet.envelope(k_x, grid.x(i)))
                .collect();
            exec.fill_rows(&mut values, grid.nx, |j, row| {
                let yf = landau_y_factor(n, grid.y(j) - y0, params);
                for (v, e) in row.iter_mut().zip(&env) {
                    *v = e * yf;
                }
            });
        }
        PacketForm::Superposition => {
            let s = packet.sigma_k;
            let dk = s.min(1.0 / params.l_b()) / 4.0;
            let q_max = (8.0 * s / dk).ceil() as i64;
            let ks: Vec<f64> = (-q_max..=q_max).map(|q| k_x + q as f64 * dk).collect();
            let norm = dk / (2.0 * PI).sqrt();
            // phase[q][i] = w_q g(k_q - k_x) e^{i k_q x_i} / √(2π)
            let phases: Vec<Vec<C64>> = exec.map(ks.len(), |q| {
                let w = packet.weight(ks[q] - k_x) * norm;
                (0..grid.nx)
                    .map(|i| C64::from_polar(w, ks[q] * grid.x(i)))
                    .collect()
            });
            debug!(
                "packet superposition: {} momenta, dk = {dk:.4e}, period {:.1}",
                ks.len(),
                2.0 * PI / dk
            );
            exec.fill_rows(&mut values, grid.nx, |j, row| {
                let y = grid.y(j);
                for (q, ph) in phases.iter().enumerate() {
                    let yf = landau_y_factor(n, y - (l2 * ks[q] + shift), params);
                    if yf == 0.0 {
                        continue;
                    }
                    for (v, p) in row.iter_mut().zip(ph) {
                        *v += p * yf;
                    }
                }
            });
        }
    }
    values
}

/// Normalizable first-gauge packet of Landau level `n` centred on `k_x`.
pub fn packet_state(
    n: u32,
    k_x: f64,
    packet: &PacketSpec,
    params: &PhysicalParams,
    grid: &GridSpec,
) -> Result<WaveField> {
    packet_state_with(Exec::default(), n, k_x, packet, params, grid)
}

pub fn packet_state_with(
    exec: Exec,
    n: u32,
    k_x: f64,
    packet: &PacketSpec,
    params: &PhysicalParams,
    grid: &GridSpec,
) -> Result<WaveField> {
    QuantumNumbers::Landau1NK { n, k_x }.validate()?;
    PacketSpec::new(packet.sigma_k)?;
    check_packet_grid(grid, packet, params.l_b2() * k_x, params)?;
    let values = landau1_packet_values(exec, n, k_x, 0.0, packet, params, grid);
    WaveField::new(
        *grid,
        values,
        GaugeSpec::landau1(),
        *params,
        StateLabel::Packet {
            n,
            k_x,
            sigma_k: packet.sigma_k,
            form: packet.form,
        },
    )
}

/// Gauge-class member `U^{(χ)} ψ`: same labels, phase `e^{-ieχ}`.
pub fn class_member(state: &WaveField, chi: &PolynomialGaugeFunction) -> WaveField {
    transform_wavefield(state, chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::hermite;

    #[test]
    fn labels_validate() {
        assert!(QuantumNumbers::SymmetricNM { n: 1, m: 2 }
            .validate()
            .is_err());
        assert!(QuantumNumbers::SymmetricNM { n: 0, m: -20 }
            .validate()
            .is_ok());
        assert_eq!(QuantumNumbers::SymmetricNM { n: 3, m: 1 }.n_r(), Some(2));
        assert_eq!(QuantumNumbers::SymmetricNM { n: 0, m: -20 }.n_r(), Some(0));
        assert_eq!(QuantumNumbers::SymmetricNM { n: 20, m: 20 }.n_r(), Some(0));
        let p = PhysicalParams::default();
        assert_eq!(
            QuantumNumbers::Landau1NK { n: 0, k_x: 5.0 }.guiding_line(&p),
            Some(5.0)
        );
    }

    #[test]
    fn radial_identity() {
        let p = PhysicalParams::default();
        for n in 0..=10u32 {
            for m in -10..=n as i32 {
                let a = SymmetricRadial::new(n, m, &p).unwrap();
                let b = match SymmetricRadial::new((n as i32 - m) as u32, -m, &p) {
                    Ok(b) => b,
                    Err(_) => continue,
                };
                for k in 0..100 {
                    let r = 0.15 * k as f64;
                    let (va, vb) = (a.eval(r), b.eval(r));
                    assert!(
                        (va - vb).abs() <= 1e-10 * va.abs().max(1e-300),
                        "n={n} m={m} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn lowest_level_closed_form() {
        // Ψ_{0,m} for m ≤ 0: r^{|m|} e^{-r²/4} e^{imφ} / √(2π 2^{|m|} |m|!)
        let p = PhysicalParams::default();
        for m in [0, -1, -5] {
            let rad = SymmetricRadial::new(0, m, &p).unwrap();
            let am = m.unsigned_abs() as i32;
            for &r in &[0.3f64, 1.0, 2.7] {
                let exact = r.powi(am) * (-r * r / 4.0).exp()
                    / (2f64.powi(am) * (log_factorial(am as usize)).exp()).sqrt();
                assert!((rad.eval(r) - exact).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn radial_normalization_quadrature() {
        let p = PhysicalParams::new(1.0, 2.0, 1.0).unwrap();
        for (n, m) in [(0, 0), (3, 1), (2, -3), (5, 5)] {
            let rad = SymmetricRadial::new(n, m, &p).unwrap();
            let h = 1e-3;
            let s: f64 = (0..20_000)
                .map(|k| {
                    let r = (k as f64 + 0.5) * h;
                    rad.eval(r).powi(2) * r
                })
                .sum::<f64>()
                * h;
            assert!((s - 1.0).abs() < 1e-6, "({n},{m}) -> {s}");
        }
    }

    #[test]
    fn rotational_invariance_of_symmetric_density() {
        let p = PhysicalParams::default();
        let rad = SymmetricRadial::new(2, -1, &p).unwrap();
        for k in 0..20 {
            let (x, y) = (0.3 + 0.2 * k as f64, -0.5 + 0.1 * k as f64);
            let d0 = symmetric_value(&rad, -1, x, y).norm_sqr();
            for t in [0.4, 1.9, 3.0] {
                let (c, s) = (f64::cos(t), f64::sin(t));
                let d1 = symmetric_value(&rad, -1, c * x - s * y, s * x + c * y).norm_sqr();
                assert!((d0 - d1).abs() < 1e-6 * d0.max(1e-12));
            }
        }
    }

    #[test]
    fn landau_y_factor_matches_hermite_formula() {
        let p = PhysicalParams::new(2.0, 0.5, 1.0).unwrap();
        let l = p.l_b();
        for n in 0..8u32 {
            for &y in &[-3.0, -0.4, 0.0, 1.1, 2.5] {
                let xi = y / l;
                let ln_norm = -0.5
                    * (0.5 * PI.ln() + n as f64 * 2f64.ln() + log_factorial(n as usize) + l.ln());
                let v = ln_norm.exp() * hermite(n as usize, xi).unwrap() * (-0.5 * xi * xi).exp();
                assert!((landau_y_factor(n, y, &p) - v).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn landau1_band_location_and_nodes() {
        let p = PhysicalParams::default();
        let g = auto_grid_landau1(0, 5.0, 4.0, &p).unwrap();
        let f = landau1_state(0, 5.0, &p, &g).unwrap();
        let col: Vec<f64> = (0..g.ny).map(|j| f.at(10, j).norm_sqr()).collect();
        let jmax = (0..g.ny)
            .max_by(|&a, &b| col[a].total_cmp(&col[b]))
            .unwrap();
        assert!((g.y(jmax) - 5.0).abs() <= g.dy());

        let g = auto_grid_landau1(0, -5.0, 4.0, &p).unwrap();
        let f = landau1_state(0, -5.0, &p, &g).unwrap();
        let col: Vec<f64> = (0..g.ny).map(|j| f.at(3, j).norm_sqr()).collect();
        let jmax = (0..g.ny)
            .max_by(|&a, &b| col[a].total_cmp(&col[b]))
            .unwrap();
        assert!((g.y(jmax) + 5.0).abs() <= g.dy());

        // one sign change of Y_1 across the band
        let sign_changes = (1..400)
            .map(|k| -8.0 + 0.04 * k as f64)
            .collect::<Vec<_>>()
            .windows(2)
            .filter(|w| {
                landau_y_factor(1, w[0], &p).signum() != landau_y_factor(1, w[1], &p).signum()
            })
            .count();
        assert_eq!(sign_changes, 1);
    }

    #[test]
    fn landau1_density_independent_of_x() {
        let p = PhysicalParams::default();
        let g = auto_grid_landau1(2, 1.5, 6.0, &p).unwrap();
        let f = landau1_state(2, 1.5, &p, &g).unwrap();
        for j in (0..g.ny).step_by(7) {
            let d0 = f.at(0, j).norm_sqr();
            for i in 1..g.nx {
                assert!((f.at(i, j).norm_sqr() - d0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn landau2_is_rotated_landau1() {
        let p = PhysicalParams::default();
        for &(x, y) in &[(0.3, 1.0), (-2.0, 0.5)] {
            assert_eq!(
                landau2_value(1, 2.0, &p, x, y),
                landau1_value(1, 2.0, &p, y, -x)
            );
        }
        // band centred at x = -l² k_y
        let v0 = landau2_value(0, 2.0, &p, -2.0, 0.7).norm();
        assert!(landau2_value(0, 2.0, &p, -1.5, 0.7).norm() < v0);
        assert!(landau2_value(0, 2.0, &p, -2.5, 0.7).norm() < v0);
    }

    #[test]
    fn grid_coverage_is_enforced() {
        let p = PhysicalParams::default();
        let small = GridSpec::square(2.0, 64).unwrap();
        assert!(matches!(
            symmetric_state(0, -20, &p, &small),
            Err(LandauError::GridTooSmall(_))
        ));
        assert!(matches!(
            landau1_state(0, 5.0, &p, &small),
            Err(LandauError::GridTooSmall(_))
        ));
        assert!(matches!(
            symmetric_state(0, 1, &p, &small),
            Err(LandauError::InvalidQuantumNumbers(_))
        ));
        let pk = PacketSpec::new(0.2).unwrap();
        let narrow = GridSpec::new(-10.0, 10.0, -10.0, 10.0, 64, 64).unwrap();
        assert!(packet_state(0, 0.0, &pk, &p, &narrow).is_err());
    }

    #[test]
    fn packet_profile_is_unit_normalized() {
        let pk = PacketSpec::new(0.3).unwrap();
        let h = 1e-3;
        let s: f64 = (-5000..=5000)
            .map(|k| pk.weight(k as f64 * h).powi(2))
            .sum::<f64>()
            * h;
        assert!((s - 1.0).abs() < 1e-12);
        let s: f64 = (-50_000..=50_000)
            .map(|k| pk.envelope(1.0, k as f64 * h).norm_sqr())
            .sum::<f64>()
            * h;
        assert!((s - 1.0).abs() < 1e-12);
        assert!(PacketSpec::new(0.0).is_err());
    }
}
