use serde::{Deserialize, Serialize};

use crate::error::{LandauError, Result};

/// Charge magnitude, field strength and mass in natural units (ħ = 1).
///
/// The particle carries charge `-e`; `e`, `b` and `m_e` are all positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub e: f64,
    pub b: f64,
    pub m_e: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            e: 1.0,
            b: 1.0,
            m_e: 1.0,
        }
    }
}

impl PhysicalParams {
    pub fn new(e: f64, b: f64, m_e: f64) -> Result<Self> {
        for (name, v) in [("e", e), ("B", b), ("m_e", m_e)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(LandauError::InvalidParams(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(PhysicalParams { e, b, m_e })
    }

    /// Same charge and mass in the field `b`.
    pub fn with_field(&self, b: f64) -> Result<Self> {
        Self::new(self.e, b, self.m_e)
    }

    pub fn omega_c(&self) -> f64 {
        self.e * self.b / self.m_e
    }

    pub fn omega_l(&self) -> f64 {
        self.omega_c() / 2.0
    }

    pub fn l_b(&self) -> f64 {
        1.0 / (self.e * self.b).sqrt()
    }

    pub fn l_b2(&self) -> f64 {
        1.0 / (self.e * self.b)
    }

    /// Landau level energy `(2n + 1) ω_L`.
    pub fn landau_energy(&self, n: u32) -> f64 {
        (2 * n + 1) as f64 * self.omega_l()
    }
}

/// Uniform rectangular grid; values are stored row-major with `x` fastest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

pub const MIN_POINTS: usize = 16;

impl GridSpec {
    pub fn new(
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self> {
        if nx < MIN_POINTS || ny < MIN_POINTS {
            return Err(LandauError::InvalidGrid(format!(
                "need at least {MIN_POINTS} points per axis, got {nx}x{ny}"
            )));
        }
        if !(x_max > x_min)
            || !(y_max > y_min)
            || !(x_max - x_min).is_finite()
            || !(y_max - y_min).is_finite()
        {
            return Err(LandauError::InvalidGrid(format!(
                "empty extent [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(GridSpec {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        })
    }

    /// `[-half, half]²` with `n` points per axis.
    pub fn square(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, -half, half, n, n)
    }

    /// Grid centred on `(cx, cy)` with the requested half-extents and spacing
    /// no larger than `max_spacing`.
    pub fn covering(cx: f64, cy: f64, half_x: f64, half_y: f64, max_spacing: f64) -> Result<Self> {
        let nx = ((2.0 * half_x / max_spacing).ceil() as usize + 1).max(MIN_POINTS);
        let ny = ((2.0 * half_y / max_spacing).ceil() as usize + 1).max(MIN_POINTS);
        Self::new(cx - half_x, cx + half_x, cy - half_y, cy + half_y, nx, ny)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + j as f64 * self.dy()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Largest radius around the origin fully contained in the grid.
    pub fn inscribed_radius(&self) -> f64 {
        self.x_max.min(-self.x_min).min(self.y_max).min(-self.y_min)
    }

    pub fn max_radius(&self) -> f64 {
        let xm = self.x_max.abs().max(self.x_min.abs());
        let ym = self.y_max.abs().max(self.y_min.abs());
        xm.hypot(ym)
    }

    /// Grid made of every second point (both axes), used for refinement error
    /// estimates. `None` when the result would fall below the minimum size.
    pub fn coarsened(&self) -> Option<GridSpec> {
        let nx = (self.nx - 1) / 2 + 1;
        let ny = (self.ny - 1) / 2 + 1;
        if nx < MIN_POINTS || ny < MIN_POINTS {
            return None;
        }
        let x_max = self.x_min + 2.0 * (nx - 1) as f64 * self.dx();
        let y_max = self.y_min + 2.0 * (ny - 1) as f64 * self.dy();
        GridSpec::new(self.x_min, x_max, self.y_min, y_max, nx, ny).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_give_unit_magnetic_length() {
        let p = PhysicalParams::default();
        assert_eq!(p.l_b(), 1.0);
        assert_eq!(p.omega_l(), 0.5);
        assert_eq!(p.landau_energy(20), 20.5);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(PhysicalParams::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, -1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(-1.0, 1.0, -1.0, 1.0, 0, 32).is_err());
        assert!(GridSpec::new(-1.0, 1.0, -1.0, 1.0, 15, 32).is_err());
        assert!(GridSpec::new(1.0, 1.0, -1.0, 1.0, 32, 32).is_err());
        let g = GridSpec::square(4.0, 17).unwrap();
        assert_eq!(g.dx(), 0.5);
        assert_eq!(g.x(16), 4.0);
    }

    #[test]
    fn coarsening_keeps_points() {
        let g = GridSpec::square(8.0, 65).unwrap();
        let c = g.coarsened().unwrap();
        assert_eq!(c.nx, 33);
        assert_eq!(c.dx(), 2.0 * g.dx());
        assert_eq!(c.x(5), g.x(10));
    }

    proptest! {
        #[test]
        fn derived_constants(e in 0.1f64..10.0, b in 0.1f64..10.0, m in 0.1f64..10.0) {
            let p = PhysicalParams::new(e, b, m).unwrap();
            prop_assert_eq!(p.omega_c(), 2.0 * p.omega_l());
            prop_assert!((p.l_b() * p.l_b() * e * b - 1.0).abs() < 4.0 * f64::EPSILON);
        }
    }
}
