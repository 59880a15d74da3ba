//! Complex fields sampled on a uniform grid, with trapezoidal quadrature over
//! the valid interior.

use crate::error::{LandauError, Result};
use crate::exec::Exec;
use crate::gauge::GaugeSpec;
use crate::params::{GridSpec, PhysicalParams};
use crate::states::StateLabel;
use crate::C64;

/// A sampled wavefunction together with the gauge it is expressed in.
///
/// `band` counts the boundary cells (on every side) whose values are not
/// trustworthy, typically because a finite-difference stencil reached past
/// the edge. Those cells are zeroed and excluded from every integral.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub grid: GridSpec,
    pub values: Vec<C64>,
    pub gauge: GaugeSpec,
    pub params: PhysicalParams,
    pub label: StateLabel,
    pub band: usize,
}

impl WaveField {
    pub fn new(
        grid: GridSpec,
        values: Vec<C64>,
        gauge: GaugeSpec,
        params: PhysicalParams,
        label: StateLabel,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LandauError::InvalidGrid(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.nx,
                grid.ny
            )));
        }
        Ok(WaveField {
            grid,
            values,
            gauge,
            params,
            label,
            band: 0,
        })
    }

    /// Samples `f(x, y)` on every grid point.
    pub fn from_fn<F>(
        exec: Exec,
        grid: GridSpec,
        gauge: GaugeSpec,
        params: PhysicalParams,
        label: StateLabel,
        f: F,
    ) -> Self
    where
        F: Fn(f64, f64) -> C64 + Sync + Send,
    {
        let mut values = vec![C64::new(0.0, 0.0); grid.len()];
        exec.fill_rows(&mut values, grid.nx, |j, row| {
            let y = grid.y(j);
            for (i, v) in row.iter_mut().enumerate() {
                *v = f(grid.x(i), y);
            }
        });
        WaveField {
            grid,
            values,
            gauge,
            params,
            label,
            band: 0,
        }
    }

    /// Off-centre Gaussian `exp(-((x-x0)²+(y-y0)²)/(2w²) + i(kx x + ky y))`,
    /// normalised on the grid. Used as a smooth probe for operator identities.
    #[allow(clippy::too_many_arguments)]
    pub fn gaussian(
        grid: GridSpec,
        gauge: GaugeSpec,
        params: PhysicalParams,
        center: (f64, f64),
        width: f64,
        momentum: (f64, f64),
    ) -> Result<Self> {
        let (x0, y0) = center;
        let (kx, ky) = momentum;
        let f = WaveField::from_fn(
            Exec::default(),
            grid,
            gauge,
            params,
            StateLabel::Probe(format!("gaussian(w={width})")),
            |x, y| {
                let r2 = (x - x0).powi(2) + (y - y0).powi(2);
                C64::from_polar((-r2 / (2.0 * width * width)).exp(), kx * x + ky * y)
            },
        );
        f.normalized()
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn is_plane_wave(&self) -> bool {
        self.label.is_plane_wave()
    }

    /// Index range `[lo, hi]` of valid cells along an axis with `n` points.
    fn interior(n: usize, band: usize) -> Option<(usize, usize)> {
        if 2 * band + 2 > n {
            None
        } else {
            Some((band, n - 1 - band))
        }
    }

    fn check_compatible(&self, other: &WaveField) -> Result<()> {
        if self.grid != other.grid {
            return Err(LandauError::GridMismatch);
        }
        Ok(())
    }

    /// Trapezoidal `∫ conj(a) b` over the common valid interior.
    fn integrate<F>(&self, exec: Exec, band: usize, f: F) -> Result<C64>
    where
        F: Fn(usize) -> C64 + Sync + Send,
    {
        let g = &self.grid;
        let (Some((i0, i1)), Some((j0, j1))) =
            (Self::interior(g.nx, band), Self::interior(g.ny, band))
        else {
            return Err(LandauError::GridTooSmall(format!(
                "boundary band {band} leaves no interior on a {}x{} grid",
                g.nx, g.ny
            )));
        };
        let rows: Vec<C64> = exec.map(j1 - j0 + 1, |r| {
            let j = j0 + r;
            let base = j * g.nx;
            let mut s = 0.5 * (f(base + i0) + f(base + i1));
            for i in i0 + 1..i1 {
                s += f(base + i);
            }
            let w = if j == j0 || j == j1 { 0.5 } else { 1.0 };
            s * w
        });
        let total: C64 = rows.into_iter().sum();
        Ok(total * (g.dx() * g.dy()))
    }

    /// `⟨self|other⟩`.
    pub fn inner_with(&self, exec: Exec, other: &WaveField) -> Result<C64> {
        self.check_compatible(other)?;
        let band = self.band.max(other.band);
        self.integrate(exec, band, |k| self.values[k].conj() * other.values[k])
    }

    pub fn inner(&self, other: &WaveField) -> Result<C64> {
        self.inner_with(Exec::default(), other)
    }

    pub fn norm_sqr_with(&self, exec: Exec) -> Result<f64> {
        Ok(self
            .integrate(exec, self.band, |k| {
                C64::new(self.values[k].norm_sqr(), 0.0)
            })?
            .re)
    }

    pub fn norm_sqr(&self) -> Result<f64> {
        self.norm_sqr_with(Exec::default())
    }

    pub fn norm(&self) -> Result<f64> {
        Ok(self.norm_sqr()?.sqrt())
    }

    /// `‖self - other‖` over the common valid interior.
    pub fn distance(&self, other: &WaveField) -> Result<f64> {
        self.check_compatible(other)?;
        let band = self.band.max(other.band);
        Ok(self
            .integrate(Exec::default(), band, |k| {
                C64::new((self.values[k] - other.values[k]).norm_sqr(), 0.0)
            })?
            .re
            .sqrt())
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm()?;
        if !(n > 0.0 && n.is_finite()) {
            return Err(LandauError::InvalidParams(format!(
                "cannot normalize a field with norm {n}"
            )));
        }
        let s = 1.0 / n;
        self.values.iter_mut().for_each(|v| *v *= s);
        Ok(self)
    }

    pub fn scaled(&self, s: C64) -> WaveField {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `self + s·other` on the same grid; the result has the wider band.
    pub fn axpy(&self, s: C64, other: &WaveField) -> Result<WaveField> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (v, o) in out.values.iter_mut().zip(&other.values) {
            *v += s * o;
        }
        out.set_band(self.band.max(other.band));
        Ok(out)
    }

    /// Widens the invalid band to at least `band` and zeroes those cells.
    pub fn set_band(&mut self, band: usize) {
        let band = band.max(self.band);
        self.band = band;
        if band == 0 {
            return;
        }
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        for j in 0..ny {
            for i in 0..nx {
                if i < band || j < band || i + band >= nx || j + band >= ny {
                    self.values[j * nx + i] = C64::new(0.0, 0.0);
                }
            }
        }
    }

    /// Every second sample on both axes, on [`GridSpec::coarsened`].
    pub fn coarsened(&self) -> Option<WaveField> {
        let grid = self.grid.coarsened()?;
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                values.push(self.at(2 * i, 2 * j));
            }
        }
        Some(WaveField {
            grid,
            values,
            gauge: self.gauge,
            params: self.params,
            label: self.label.clone(),
            band: self.band.div_ceil(2),
        })
    }

    /// Largest `| |a|² - |b|² |` over the grid.
    pub fn max_density_difference(&self, other: &WaveField) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
            .fold(0.0, f64::max))
    }

    pub fn max_density(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn probe() -> WaveField {
        let grid = GridSpec::square(8.0, 129).unwrap();
        WaveField::gaussian(
            grid,
            GaugeSpec::symmetric(),
            PhysicalParams::default(),
            (0.5, -0.25),
            1.2,
            (0.7, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn gaussian_norm_and_inner() {
        let f = probe();
        assert!((f.norm_sqr().unwrap() - 1.0).abs() < 1e-13);
        let z = f.inner(&f).unwrap();
        assert!((z.re - 1.0).abs() < 1e-13 && z.im.abs() < 1e-15);
    }

    #[test]
    fn trapezoid_integrates_gaussian_exactly() {
        // ∫∫ e^{-(x²+y²)} = π, spectrally accurate on the trapezoid rule
        let grid = GridSpec::square(9.0, 97).unwrap();
        let f = WaveField::from_fn(
            Exec::Sequential,
            grid,
            GaugeSpec::symmetric(),
            PhysicalParams::default(),
            StateLabel::Probe("g".into()),
            |x, y| C64::new((-(x * x + y * y) / 2.0).exp(), 0.0),
        );
        assert!((f.norm_sqr().unwrap() - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn band_excludes_cells() {
        let mut f = probe();
        f.set_band(3);
        assert_eq!(f.at(2, 60), C64::new(0.0, 0.0));
        assert_eq!(f.at(60, 126), C64::new(0.0, 0.0));
        assert!(f.at(60, 60).norm() > 0.0);
        assert!((f.norm_sqr().unwrap() - 1.0).abs() < 1e-12);
        f.set_band(70);
        assert!(f.norm_sqr().is_err());
    }

    #[test]
    fn coarsened_keeps_samples() {
        let f = probe();
        let c = f.coarsened().unwrap();
        assert_eq!(c.at(10, 20), f.at(20, 40));
        assert!((c.norm_sqr().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn grid_mismatch_rejected() {
        let f = probe();
        let g = WaveField::gaussian(
            GridSpec::square(8.0, 65).unwrap(),
            GaugeSpec::symmetric(),
            PhysicalParams::default(),
            (0.0, 0.0),
            1.0,
            (0.0, 0.0),
        )
        .unwrap();
        assert_eq!(f.inner(&g), Err(LandauError::GridMismatch));
    }

    #[test]
    fn policies_give_identical_sums() {
        let f = probe();
        let a = f.norm_sqr_with(Exec::Sequential).unwrap();
        let b = f.norm_sqr_with(Exec::Parallel).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
