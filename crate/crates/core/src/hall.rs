//! Crossed electric and magnetic fields in the first Landau gauge: shifted
//! eigenstates, current decomposition and the drift velocity.

use serde::{Deserialize, Serialize};

use crate::error::{LandauError, Result};
use crate::exec::Exec;
use crate::field::WaveField;
use crate::gauge::GaugeSpec;
use crate::operators::{CustomFn, Engine, OperatorKind, OperatorSpec};
use crate::params::{GridSpec, PhysicalParams};
use crate::states::{
    auto_grid_packet, landau1_packet_values, PacketSpec, QuantumNumbers, StateLabel,
};
use crate::C64;

/// Magnetic parameters plus the electric field `E` entering `H' = H - eEy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HallParams {
    pub base: PhysicalParams,
    pub e_field: f64,
}

impl HallParams {
    pub fn new(base: PhysicalParams, e_field: f64) -> Result<Self> {
        if !e_field.is_finite() {
            return Err(LandauError::InvalidParams(format!(
                "electric field {e_field}"
            )));
        }
        Ok(HallParams { base, e_field })
    }

    /// `m_e E / (e B²)`: displacement of every guiding centre.
    pub fn center_shift(&self) -> f64 {
        let p = &self.base;
        p.m_e * self.e_field / (p.e * p.b * p.b)
    }

    /// `y'_0(k) = k/(eB) + m_e E/(eB²)`.
    pub fn guiding_center(&self, k_x: f64) -> f64 {
        k_x / (self.base.e * self.base.b) + self.center_shift()
    }

    /// Constant left over after completing the square: `-m_e E²/(2B²)`.
    pub fn energy_offset(&self) -> f64 {
        let p = &self.base;
        -p.m_e * self.e_field * self.e_field / (2.0 * p.b * p.b)
    }

    /// `E_n(k) = (n + 1/2) ω_c - E k / B - m_e E²/(2B²)`.
    pub fn energy(&self, n: u32, k_x: f64) -> f64 {
        (n as f64 + 0.5) * self.base.omega_c() - self.e_field * k_x / self.base.b
            + self.energy_offset()
    }

    /// `-E/B`.
    pub fn drift_velocity(&self) -> f64 {
        -self.e_field / self.base.b
    }
}

/// Grid for [`hall_state`] at spacing `l_B/16`.
pub fn auto_grid_hall(n: u32, k_x: f64, hp: &HallParams, packet: &PacketSpec) -> Result<GridSpec> {
    auto_grid_packet(
        n,
        hp.guiding_center(k_x),
        packet,
        &hp.base,
        hp.base.l_b() / 16.0,
    )
}

pub fn hall_state(
    n: u32,
    k_x: f64,
    hp: &HallParams,
    packet: &PacketSpec,
    grid: &GridSpec,
) -> Result<WaveField> {
    hall_state_with(Exec::default(), n, k_x, hp, packet, grid)
}

/// Normalizable eigen-packet of `H'` in the first Landau gauge, built on the
/// shifted centres `y'_0(k)`.
pub fn hall_state_with(
    exec: Exec,
    n: u32,
    k_x: f64,
    hp: &HallParams,
    packet: &PacketSpec,
    grid: &GridSpec,
) -> Result<WaveField> {
    QuantumNumbers::Landau1NK { n, k_x }.validate()?;
    PacketSpec::new(packet.sigma_k)?;
    let p = hp.base;
    if grid.x_max - grid.x_min < 10.0 / packet.sigma_k {
        return Err(LandauError::GridTooSmall(format!(
            "Hall packet of width {} needs an x-extent of at least {}",
            packet.sigma_k,
            10.0 / packet.sigma_k
        )));
    }
    let yc = hp.guiding_center(k_x);
    let half = 6.0 * packet.sigma_k * p.l_b2() + 7.0 * p.l_b();
    if yc - half < grid.y_min || yc + half > grid.y_max {
        return Err(LandauError::GridTooSmall(format!(
            "y range [{}, {}] does not cover {yc} ± {half}",
            grid.y_min, grid.y_max
        )));
    }
    let values = landau1_packet_values(exec, n, k_x, hp.center_shift(), packet, &p, grid);
    WaveField::new(
        *grid,
        values,
        GaugeSpec::landau1(),
        p,
        StateLabel::Hall {
            n,
            k_x,
            sigma_k: packet.sigma_k,
            e_field: hp.e_field,
        },
    )
}

/// Expectation values of the current decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    /// `(e/m_e)⟨Π_x⟩`.
    pub j_x: f64,
    pub j_y: f64,
    /// `(e/m_e)⟨p_x⟩`.
    pub j_can_x: f64,
    /// `(e/m_e)⟨eA_x⟩`.
    pub j_gauge_x: f64,
    /// `⟨j_x⟩/e`.
    pub v_x: f64,
    /// `⟨j^can_x⟩ + ⟨j^gauge_x⟩ + eE/B`, zero when the two parts cancel.
    pub cancellation: f64,
    /// `⟨y⟩`.
    pub mean_y: f64,
}

pub fn drift_report(engine: &Engine, psi: &WaveField, hp: &HallParams) -> Result<DriftReport> {
    let p = psi.params;
    let s = p.e / p.m_e;
    let ev = |kind: OperatorKind| -> Result<C64> {
        Ok(engine
            .expectation(&OperatorSpec::for_field(kind, psi), psi)?
            .value)
    };
    let gauge = psi.gauge;
    let e = p.e;
    let eax = CustomFn::new("eA_x", move |x, y| {
        C64::new(e * gauge.potential_at(&p, x, y).0, 0.0)
    });
    let j_x = s * ev(OperatorKind::PMechX)?.re;
    let j_y = s * ev(OperatorKind::PMechY)?.re;
    let j_can_x = s * ev(OperatorKind::PCanX)?.re;
    let j_gauge_x = s * ev(OperatorKind::Custom(eax))?.re;
    let mean_y = ev(OperatorKind::Position(crate::operators::PositionKind::Y))?.re;
    Ok(DriftReport {
        j_x,
        j_y,
        j_can_x,
        j_gauge_x,
        v_x: j_x / p.e,
        cancellation: j_can_x + j_gauge_x + p.e * hp.e_field / p.b,
        mean_y,
    })
}

/// `‖H'ψ - E_n(p_x)ψ‖/‖ψ‖` where `E_n(p_x)` is the level dispersion applied
/// as an operator, so the finite packet width does not enter.
pub fn hall_eigen_residual(
    engine: &Engine,
    psi: &WaveField,
    hp: &HallParams,
    n: u32,
) -> Result<f64> {
    let h = engine.apply(
        &OperatorSpec::for_field(
            OperatorKind::HallHamiltonian {
                e_field: hp.e_field,
            },
            psi,
        ),
        psi,
    )?;
    let px = engine.apply(&OperatorSpec::plain(OperatorKind::PCanX), psi)?;
    let c = hp.energy(n, 0.0);
    let r = h
        .axpy(C64::new(-c, 0.0), psi)?
        .axpy(C64::new(hp.e_field / hp.base.b, 0.0), &px)?;
    Ok(r.norm()? / psi.norm()?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub rows: Vec<(f64, f64)>,
    /// `max v_x - min v_x` over the scan.
    pub spread: f64,
}

/// `⟨v_x⟩` for each `k_x`.
pub fn kx_independence_scan(
    engine: &Engine,
    n: u32,
    hp: &HallParams,
    packet: &PacketSpec,
    k_values: &[f64],
) -> Result<ScanTable> {
    let mut distinct: Vec<f64> = k_values.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(LandauError::InvalidParams(
            "a k_x scan needs at least three distinct values".into(),
        ));
    }
    let mut rows = Vec::with_capacity(k_values.len());
    for &k in k_values {
        let grid = auto_grid_hall(n, k, hp, packet)?;
        let psi = hall_state_with(engine.exec, n, k, hp, packet, &grid)?;
        rows.push((k, drift_report(engine, &psi, hp)?.v_x));
    }
    let max = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let min = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    Ok(ScanTable {
        rows,
        spread: max - min,
    })
}
