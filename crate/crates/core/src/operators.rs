//! Gauge-covariant finite-difference operators, quadrature expectation values,
//! commutator residuals and guiding-centre observables.
//!
//! Every derivative that involves a vector potential is taken on the
//! covariant form `∂ + i e a`, discretised with exact link phases: along a
//! grid line the field is first multiplied by `v = exp(i e ∫ a)`, an ordinary
//! central stencil is applied, and the result is multiplied by `conj(v)`.
//! The gauge-function part of `a` is folded into `v` through `e^{ieχ}`, so a
//! gauge transformation commutes with the discrete operators to rounding.

use std::fmt;
use std::sync::Arc;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{LandauError, Result};
use crate::exec::Exec;
use crate::field::WaveField;
use crate::gauge::{gauss_legendre8, FluxTable, GaugeBase, GaugeSpec, RadialProfile};
use crate::params::GridSpec;
use crate::C64;

const FIRST_2: [f64; 3] = [-0.5, 0.0, 0.5];
const FIRST_4: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
const FIRST_6: [f64; 7] = [
    -1.0 / 60.0,
    3.0 / 20.0,
    -3.0 / 4.0,
    0.0,
    3.0 / 4.0,
    -3.0 / 20.0,
    1.0 / 60.0,
];
const FIRST_8: [f64; 9] = [
    1.0 / 280.0,
    -4.0 / 105.0,
    1.0 / 5.0,
    -4.0 / 5.0,
    0.0,
    4.0 / 5.0,
    -1.0 / 5.0,
    4.0 / 105.0,
    -1.0 / 280.0,
];
const SECOND_2: [f64; 3] = [1.0, -2.0, 1.0];
const SECOND_4: [f64; 5] = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
const SECOND_6: [f64; 7] = [
    1.0 / 90.0,
    -3.0 / 20.0,
    3.0 / 2.0,
    -49.0 / 18.0,
    3.0 / 2.0,
    -3.0 / 20.0,
    1.0 / 90.0,
];
const SECOND_8: [f64; 9] = [
    -1.0 / 560.0,
    8.0 / 315.0,
    -1.0 / 5.0,
    8.0 / 5.0,
    -205.0 / 72.0,
    8.0 / 5.0,
    -1.0 / 5.0,
    8.0 / 315.0,
    -1.0 / 560.0,
];

/// Accuracy order of the central difference stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FdOrder {
    Two,
    #[default]
    Four,
    Six,
    Eight,
}

impl FdOrder {
    pub fn accuracy(&self) -> u32 {
        match self {
            FdOrder::Two => 2,
            FdOrder::Four => 4,
            FdOrder::Six => 6,
            FdOrder::Eight => 8,
        }
    }

    pub fn half_width(&self) -> usize {
        self.accuracy() as usize / 2
    }

    pub fn first(&self) -> &'static [f64] {
        match self {
            FdOrder::Two => &FIRST_2,
            FdOrder::Four => &FIRST_4,
            FdOrder::Six => &FIRST_6,
            FdOrder::Eight => &FIRST_8,
        }
    }

    pub fn second(&self) -> &'static [f64] {
        match self {
            FdOrder::Two => &SECOND_2,
            FdOrder::Four => &SECOND_4,
            FdOrder::Six => &SECOND_6,
            FdOrder::Eight => &SECOND_8,
        }
    }

    pub fn from_accuracy(p: u32) -> Result<Self> {
        match p {
            2 => Ok(FdOrder::Two),
            4 => Ok(FdOrder::Four),
            6 => Ok(FdOrder::Six),
            8 => Ok(FdOrder::Eight),
            _ => Err(LandauError::InvalidParams(format!(
                "finite-difference order must be 2, 4, 6 or 8, got {p}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PositionKind {
    X,
    Y,
    R2,
}

/// Pointwise multiplication by a user function.
#[derive(Clone)]
pub struct CustomFn {
    pub name: String,
    f: Arc<dyn Fn(f64, f64) -> C64 + Send + Sync>,
}

impl CustomFn {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64, f64) -> C64 + Send + Sync + 'static,
    {
        CustomFn {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> C64 {
        (self.f)(x, y)
    }
}

impl fmt::Debug for CustomFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomFn({})", self.name)
    }
}

#[derive(Debug, Clone)]
pub enum OperatorKind {
    PCanX,
    PCanY,
    LCanZ,
    PMechX,
    PMechY,
    LMechZ,
    /// `Π_x + eBy`.
    PConsX,
    /// `Π_y - eBx`.
    PConsY,
    /// `L^mech_z - eBr²/2`.
    LConsZ,
    /// `L^mech_z - eΦ(r)` for an axially symmetric field.
    LConsZInhomog(RadialProfile),
    XGuiding,
    YGuiding,
    Rc2,
    R2,
    Hamiltonian,
    /// Hamiltonian with the potential `-eEy` of an electric field along `-y`.
    HallHamiltonian {
        e_field: f64,
    },
    Position(PositionKind),
    Custom(CustomFn),
}

impl OperatorKind {
    pub fn name(&self) -> String {
        match self {
            OperatorKind::PCanX => "Pcan_x".into(),
            OperatorKind::PCanY => "Pcan_y".into(),
            OperatorKind::LCanZ => "Lcan_z".into(),
            OperatorKind::PMechX => "Pmech_x".into(),
            OperatorKind::PMechY => "Pmech_y".into(),
            OperatorKind::LMechZ => "Lmech_z".into(),
            OperatorKind::PConsX => "Pcons_x".into(),
            OperatorKind::PConsY => "Pcons_y".into(),
            OperatorKind::LConsZ => "Lcons_z".into(),
            OperatorKind::LConsZInhomog(_) => "Lcons_z_inhomog".into(),
            OperatorKind::XGuiding => "X".into(),
            OperatorKind::YGuiding => "Y".into(),
            OperatorKind::Rc2 => "Rc2".into(),
            OperatorKind::R2 => "R2".into(),
            OperatorKind::Hamiltonian => "H".into(),
            OperatorKind::HallHamiltonian { .. } => "H_hall".into(),
            OperatorKind::Position(PositionKind::X) => "x".into(),
            OperatorKind::Position(PositionKind::Y) => "y".into(),
            OperatorKind::Position(PositionKind::R2) => "r2".into(),
            OperatorKind::Custom(c) => c.name.clone(),
        }
    }

    /// Whether the operator involves the vector potential.
    pub fn needs_gauge(&self) -> bool {
        !matches!(
            self,
            OperatorKind::PCanX
                | OperatorKind::PCanY
                | OperatorKind::LCanZ
                | OperatorKind::Position(_)
                | OperatorKind::Custom(_)
        )
    }

    pub fn is_self_adjoint(&self) -> bool {
        !matches!(self, OperatorKind::Custom(_))
    }

    fn needs_uniform_field(&self) -> bool {
        matches!(
            self,
            OperatorKind::PConsX
                | OperatorKind::PConsY
                | OperatorKind::LConsZ
                | OperatorKind::XGuiding
                | OperatorKind::YGuiding
                | OperatorKind::R2
                | OperatorKind::Rc2
        )
    }

    fn uses_derivatives(&self) -> bool {
        !matches!(self, OperatorKind::Position(_) | OperatorKind::Custom(_))
    }
}

/// An operator kind together with the gauge it is written in.
#[derive(Debug, Clone)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub gauge: Option<GaugeSpec>,
}

impl OperatorSpec {
    pub fn new(kind: OperatorKind, gauge: GaugeSpec) -> Self {
        OperatorSpec {
            kind,
            gauge: Some(gauge),
        }
    }

    /// Gauge-free operator (canonical, position, custom).
    pub fn plain(kind: OperatorKind) -> Self {
        OperatorSpec { kind, gauge: None }
    }

    /// Operator written in the gauge that `psi` carries.
    pub fn for_field(kind: OperatorKind, psi: &WaveField) -> Self {
        Self::new(kind, psi.gauge)
    }
}

/// Result of a quadrature expectation value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationReport {
    pub operator: String,
    pub state: String,
    pub value: C64,
    /// Richardson-style estimate from the same computation on the grid
    /// coarsened by two; `NaN` when the grid is too small to coarsen.
    pub abs_err: f64,
    pub grid: GridSpec,
    pub order: FdOrder,
}

/// Right-hand side of a commutator identity.
#[derive(Debug, Clone)]
pub enum Expected {
    Scalar(C64),
    /// `c · B` for an operator `B`.
    Operator(C64, OperatorSpec),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorReport {
    /// `‖[A,B]ψ - expected ψ‖ / ‖ψ‖`.
    pub residual: f64,
    pub commutator_norm: f64,
    pub psi_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidingCenterReport {
    pub rc2: ScalarEstimate,
    pub r2: ScalarEstimate,
    pub lcan: ScalarEstimate,
    /// `|⟨L^can_z⟩ - (⟨r_c²⟩ - ⟨R²⟩)/(2 l_B²)|`.
    pub johnson_lippmann_residual: f64,
}

/// Real part and error of an expectation, for compact reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarEstimate {
    pub value: f64,
    pub abs_err: f64,
}

impl From<&ExpectationReport> for ScalarEstimate {
    fn from(r: &ExpectationReport) -> Self {
        ScalarEstimate {
            value: r.value.re,
            abs_err: r.abs_err,
        }
    }
}

/// Probability density and current density on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurrent {
    pub grid: GridSpec,
    pub band: usize,
    pub density: Vec<f64>,
    pub jx: Vec<f64>,
    pub jy: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    Y,
}

/// Connection `a = A - A_ref` entering a covariant derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Conn {
    /// Plain canonical derivative.
    Zero,
    /// Full potential (mechanical).
    Full,
    /// `A - A^{(L1)}`.
    MinusL1,
    /// `A - A^{(L2)}`.
    MinusL2,
}

/// Finite-difference operator engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Engine {
    pub order: FdOrder,
    pub exec: Exec,
}

impl Engine {
    pub fn new(order: FdOrder, exec: Exec) -> Self {
        Engine { order, exec }
    }

    pub fn with_order(order: FdOrder) -> Self {
        Engine {
            order,
            exec: Exec::default(),
        }
    }

    fn check_spec(&self, op: &OperatorSpec, psi: &WaveField) -> Result<()> {
        let kind = &op.kind;
        if kind.needs_gauge() {
            let Some(g) = op.gauge else {
                return Err(LandauError::MissingGauge(kind.name()));
            };
            if g != psi.gauge {
                return Err(LandauError::GaugeMismatch {
                    operator: g.describe(),
                    field: psi.gauge.describe(),
                });
            }
        }
        if kind.needs_uniform_field() && !psi.gauge.is_uniform() {
            return Err(LandauError::UniformFieldRequired(kind.name()));
        }
        if let OperatorKind::LConsZInhomog(profile) = kind {
            profile.validate()?;
            let consistent = match psi.gauge.base {
                GaugeBase::Axial(p) => p == *profile,
                _ => matches!(profile, RadialProfile::Uniform { b }
                    if (b - psi.params.b).abs() <= 1e-12 * psi.params.b),
            };
            if !consistent {
                return Err(LandauError::GaugeMismatch {
                    operator: format!("{profile:?}"),
                    field: psi.gauge.describe(),
                });
            }
        }
        Ok(())
    }

    fn check_spacing(&self, kind: &OperatorKind, psi: &WaveField) -> Result<()> {
        if !kind.uses_derivatives() {
            return Ok(());
        }
        let limit = psi.params.l_b() / 8.0;
        let spacing = psi.grid.dx().max(psi.grid.dy());
        if spacing > limit {
            if matches!(
                kind,
                OperatorKind::Hamiltonian | OperatorKind::HallHamiltonian { .. }
            ) {
                return Err(LandauError::GridTooCoarse { spacing, limit });
            }
            warn!(
                "{}: grid spacing {spacing:.4} exceeds l_B/8 = {limit:.4}",
                kind.name()
            );
        }
        Ok(())
    }

    /// Applies `op` to `psi`. The result carries a boundary band widened by
    /// the stencil half-width per derivative.
    pub fn apply(&self, op: &OperatorSpec, psi: &WaveField) -> Result<WaveField> {
        self.check_spec(op, psi)?;
        self.check_spacing(&op.kind, psi)?;
        self.apply_unchecked(&op.kind, psi)
    }

    fn apply_unchecked(&self, kind: &OperatorKind, psi: &WaveField) -> Result<WaveField> {
        let g = psi.grid;
        let p = psi.params;
        let mi = C64::new(0.0, -1.0);
        let hw = self.order.half_width();
        let eb = p.e * p.b;
        let l2 = p.l_b2();
        let (values, extra) = match kind {
            OperatorKind::PCanX => (
                self.scale(self.deriv(psi, Axis::X, Conn::Zero, false)?, mi),
                hw,
            ),
            OperatorKind::PCanY => (
                self.scale(self.deriv(psi, Axis::Y, Conn::Zero, false)?, mi),
                hw,
            ),
            OperatorKind::PMechX => (
                self.scale(self.deriv(psi, Axis::X, Conn::Full, false)?, mi),
                hw,
            ),
            OperatorKind::PMechY => (
                self.scale(self.deriv(psi, Axis::Y, Conn::Full, false)?, mi),
                hw,
            ),
            OperatorKind::PConsX => (
                self.scale(self.deriv(psi, Axis::X, Conn::MinusL1, false)?, mi),
                hw,
            ),
            OperatorKind::PConsY => (
                self.scale(self.deriv(psi, Axis::Y, Conn::MinusL2, false)?, mi),
                hw,
            ),
            OperatorKind::XGuiding => (
                self.scale(self.deriv(psi, Axis::Y, Conn::MinusL2, false)?, mi * (-l2)),
                hw,
            ),
            OperatorKind::YGuiding => (
                self.scale(self.deriv(psi, Axis::X, Conn::MinusL1, false)?, mi * l2),
                hw,
            ),
            OperatorKind::LCanZ => (self.angular(psi, Conn::Zero)?, hw),
            OperatorKind::LMechZ => (self.angular(psi, Conn::Full)?, hw),
            OperatorKind::LConsZ => {
                let mut v = self.angular(psi, Conn::Full)?;
                self.add_multiple(&mut v, psi, |x, y| -0.5 * eb * (x * x + y * y));
                (v, hw)
            }
            OperatorKind::LConsZInhomog(profile) => {
                let table = FluxTable::build(*profile, g.max_radius() + 1.0, 0.05)?;
                let mut v = self.angular(psi, Conn::Full)?;
                self.add_multiple(&mut v, psi, |x, y| -p.e * table.flux(x.hypot(y)));
                (v, hw)
            }
            OperatorKind::Rc2 => (
                self.laplacian(psi, Conn::Full, Conn::Full, -1.0 / (eb * eb))?,
                hw,
            ),
            OperatorKind::R2 => (
                self.laplacian(psi, Conn::MinusL1, Conn::MinusL2, -l2 * l2)?,
                hw,
            ),
            OperatorKind::Hamiltonian => (
                self.laplacian(psi, Conn::Full, Conn::Full, -0.5 / p.m_e)?,
                hw,
            ),
            OperatorKind::HallHamiltonian { e_field } => {
                let mut v = self.laplacian(psi, Conn::Full, Conn::Full, -0.5 / p.m_e)?;
                let ee = p.e * e_field;
                self.add_multiple(&mut v, psi, |_, y| -ee * y);
                (v, hw)
            }
            OperatorKind::Position(which) => {
                let mut v = vec![C64::new(0.0, 0.0); g.len()];
                let which = *which;
                self.add_multiple(&mut v, psi, move |x, y| match which {
                    PositionKind::X => x,
                    PositionKind::Y => y,
                    PositionKind::R2 => x * x + y * y,
                });
                (v, 0)
            }
            OperatorKind::Custom(c) => {
                let mut v = psi.values.clone();
                self.exec.fill_rows(&mut v, g.nx, |j, row| {
                    let y = g.y(j);
                    for (i, val) in row.iter_mut().enumerate() {
                        *val *= c.eval(g.x(i), y);
                    }
                });
                (v, 0)
            }
        };
        let mut out = psi.clone();
        out.values = values;
        out.set_band(psi.band + extra);
        Ok(out)
    }

    fn scale(&self, mut v: Vec<C64>, s: C64) -> Vec<C64> {
        v.iter_mut().for_each(|z| *z *= s);
        v
    }

    /// `out += f(x, y) ψ`.
    fn add_multiple<F>(&self, out: &mut [C64], psi: &WaveField, f: F)
    where
        F: Fn(f64, f64) -> f64 + Sync + Send,
    {
        let g = psi.grid;
        self.exec.fill_rows(out, g.nx, |j, row| {
            let y = g.y(j);
            let src = &psi.values[j * g.nx..(j + 1) * g.nx];
            for (i, (o, s)) in row.iter_mut().zip(src).enumerate() {
                *o += s * f(g.x(i), y);
            }
        });
    }

    /// `x Π_y - y Π_x` for the connection `conn`.
    fn angular(&self, psi: &WaveField, conn: Conn) -> Result<Vec<C64>> {
        let g = psi.grid;
        let dx = self.deriv(psi, Axis::X, conn, false)?;
        let mut out = self.deriv(psi, Axis::Y, conn, false)?;
        self.exec.fill_rows(&mut out, g.nx, |j, row| {
            let y = g.y(j);
            let rx = &dx[j * g.nx..(j + 1) * g.nx];
            for (i, (o, d)) in row.iter_mut().zip(rx).enumerate() {
                // -i (x D_y - y D_x)
                let v = g.x(i) * *o - y * d;
                *o = C64::new(v.im, -v.re);
            }
        });
        Ok(out)
    }

    /// `s · (D_xx^{cx} + D_yy^{cy}) ψ`.
    fn laplacian(&self, psi: &WaveField, cx: Conn, cy: Conn, s: f64) -> Result<Vec<C64>> {
        let mut out = self.deriv(psi, Axis::X, cx, true)?;
        let yy = self.deriv(psi, Axis::Y, cy, true)?;
        for (o, v) in out.iter_mut().zip(&yy) {
            *o = (*o + v) * s;
        }
        Ok(out)
    }

    /// Link phases `v = exp(i e [χ + ∫ a_axis])` along grid lines of `axis`,
    /// or `None` for the plain derivative.
    fn line_phases(&self, psi: &WaveField, axis: Axis, conn: Conn) -> Result<Option<Vec<C64>>> {
        if conn == Conn::Zero {
            return Ok(None);
        }
        let g = psi.grid;
        let p = psi.params;
        let chi = psi.gauge.chi;
        let with_chi = !chi.is_zero();
        let mut v = vec![C64::new(0.0, 0.0); g.len()];
        match psi.gauge.base.uniform_coefficients() {
            Some((alpha, beta)) => {
                let (ar, br) = match conn {
                    Conn::Full => (0.0, 0.0),
                    Conn::MinusL1 => (1.0, 0.0),
                    Conn::MinusL2 => (0.0, 1.0),
                    Conn::Zero => unreachable!(),
                };
                let cx = -(alpha - ar) * p.b;
                let cy = (beta - br) * p.b;
                self.exec.fill_rows(&mut v, g.nx, |j, row| {
                    let y = g.y(j);
                    for (i, val) in row.iter_mut().enumerate() {
                        let x = g.x(i);
                        let line = match axis {
                            Axis::X => cx * y * (x - g.x_min),
                            Axis::Y => cy * x * (y - g.y_min),
                        };
                        let c = if with_chi { chi.value(x, y) } else { 0.0 };
                        *val = C64::from_polar(1.0, p.e * (c + line));
                    }
                });
            }
            None => {
                let GaugeBase::Axial(profile) = psi.gauge.base else {
                    unreachable!()
                };
                if conn != Conn::Full {
                    return Err(LandauError::UniformFieldRequired(
                        "conserved momentum".into(),
                    ));
                }
                let table = FluxTable::build(profile, g.max_radius() + 1.0, 0.05)?;
                let e = p.e;
                match axis {
                    Axis::X => self.exec.fill_rows(&mut v, g.nx, |j, row| {
                        let y = g.y(j);
                        let ax = |x: f64| -y * table.flux_over_r2(x.hypot(y));
                        let mut acc = 0.0;
                        for (i, val) in row.iter_mut().enumerate() {
                            let x = g.x(i);
                            if i > 0 {
                                acc += gauss_legendre8(ax, g.x(i - 1), x);
                            }
                            let c = if with_chi { chi.value(x, y) } else { 0.0 };
                            *val = C64::from_polar(1.0, e * (c + acc));
                        }
                    }),
                    Axis::Y => {
                        // cumulative integrals along columns, computed per column
                        let cols: Vec<Vec<f64>> = self.exec.map(g.nx, |i| {
                            let x = g.x(i);
                            let ay = |y: f64| x * table.flux_over_r2(x.hypot(y));
                            let mut acc = 0.0;
                            let mut col = Vec::with_capacity(g.ny);
                            for j in 0..g.ny {
                                if j > 0 {
                                    acc += gauss_legendre8(ay, g.y(j - 1), g.y(j));
                                }
                                col.push(acc);
                            }
                            col
                        });
                        self.exec.fill_rows(&mut v, g.nx, |j, row| {
                            let y = g.y(j);
                            for (i, val) in row.iter_mut().enumerate() {
                                let c = if with_chi { chi.value(g.x(i), y) } else { 0.0 };
                                *val = C64::from_polar(1.0, e * (c + cols[i][j]));
                            }
                        });
                    }
                }
            }
        }
        Ok(Some(v))
    }

    /// Covariant first (`second = false`) or second derivative along `axis`.
    /// Cells within the widened band are zero.
    fn deriv(&self, psi: &WaveField, axis: Axis, conn: Conn, second: bool) -> Result<Vec<C64>> {
        let g = psi.grid;
        let (nx, ny) = (g.nx, g.ny);
        let hw = self.order.half_width();
        let band = psi.band + hw;
        let stencil = if second {
            self.order.second()
        } else {
            self.order.first()
        };
        let h = match axis {
            Axis::X => g.dx(),
            Axis::Y => g.dy(),
        };
        let inv = if second { 1.0 / (h * h) } else { 1.0 / h };
        let phases = self.line_phases(psi, axis, conn)?;
        let w: Vec<C64> = match &phases {
            Some(v) => v.iter().zip(&psi.values).map(|(a, b)| a * b).collect(),
            None => psi.values.clone(),
        };
        let mut out = vec![C64::new(0.0, 0.0); g.len()];
        if 2 * band + 1 > nx.min(ny) {
            return Ok(out);
        }
        self.exec.fill_rows(&mut out, nx, |j, row| {
            if j < band || j + band >= ny {
                return;
            }
            for i in band..nx - band {
                let mut acc = C64::new(0.0, 0.0);
                for (t, &c) in stencil.iter().enumerate() {
                    if c == 0.0 {
                        continue;
                    }
                    let k = match axis {
                        Axis::X => j * nx + i + t - hw,
                        Axis::Y => (j + t - hw) * nx + i,
                    };
                    acc += w[k] * c;
                }
                acc *= inv;
                row[i] = match &phases {
                    Some(v) => v[j * nx + i].conj() * acc,
                    None => acc,
                };
            }
        });
        Ok(out)
    }

    fn raw_expectation(&self, kind: &OperatorKind, psi: &WaveField) -> Result<C64> {
        let a = self.apply_unchecked(kind, psi)?;
        let num = psi.inner_with(self.exec, &a)?;
        let den = psi.norm_sqr_with(self.exec)?;
        Ok(num / den)
    }

    /// `⟨ψ|A|ψ⟩ / ⟨ψ|ψ⟩` with an error estimate from the grid coarsened by two.
    pub fn expectation(&self, op: &OperatorSpec, psi: &WaveField) -> Result<ExpectationReport> {
        if psi.is_plane_wave() {
            return Err(LandauError::PlaneWaveExpectation);
        }
        self.check_spec(op, psi)?;
        self.check_spacing(&op.kind, psi)?;
        let value = self.raw_expectation(&op.kind, psi)?;
        let abs_err = match psi.coarsened() {
            Some(c) => match self.raw_expectation(&op.kind, &c) {
                Ok(vc) => {
                    let p = if op.kind.uses_derivatives() {
                        self.order.accuracy()
                    } else {
                        2
                    };
                    (value - vc).norm() / (2f64.powi(p as i32) - 1.0)
                }
                Err(_) => f64::NAN,
            },
            None => f64::NAN,
        };
        Ok(ExpectationReport {
            operator: op.kind.name(),
            state: psi.label.describe(),
            value,
            abs_err,
            grid: psi.grid,
            order: self.order,
        })
    }

    /// `‖Aψ - λψ‖ / ‖ψ‖` over the valid interior.
    pub fn eigen_residual(&self, op: &OperatorSpec, psi: &WaveField, lambda: C64) -> Result<f64> {
        let a = self.apply(op, psi)?;
        let r = a.axpy(-lambda, psi)?;
        Ok(r.norm()? / psi.norm()?)
    }

    fn apply_expected(&self, expected: &Expected, psi: &WaveField) -> Result<WaveField> {
        match expected {
            Expected::Scalar(c) => Ok(psi.scaled(*c)),
            Expected::Operator(c, op) => Ok(self.apply(op, psi)?.scaled(*c)),
        }
    }

    pub fn commutator_report(
        &self,
        a: &OperatorSpec,
        b: &OperatorSpec,
        psi: &WaveField,
        expected: &Expected,
    ) -> Result<CommutatorReport> {
        let ab = self.apply(a, &self.apply(b, psi)?)?;
        let ba = self.apply(b, &self.apply(a, psi)?)?;
        let comm = ab.axpy(C64::new(-1.0, 0.0), &ba)?;
        let rhs = self.apply_expected(expected, psi)?;
        let diff = comm.axpy(C64::new(-1.0, 0.0), &rhs)?;
        let psi_norm = psi.norm()?;
        Ok(CommutatorReport {
            residual: diff.norm()? / psi_norm,
            commutator_norm: comm.norm()?,
            psi_norm,
        })
    }

    /// `‖(AB - BA)ψ - expected ψ‖ / ‖ψ‖`.
    pub fn commutator_residual(
        &self,
        a: &OperatorSpec,
        b: &OperatorSpec,
        psi: &WaveField,
        expected: &Expected,
    ) -> Result<f64> {
        Ok(self.commutator_report(a, b, psi, expected)?.residual)
    }

    pub fn guiding_center_report(&self, psi: &WaveField) -> Result<GuidingCenterReport> {
        let rc2 = self.expectation(&OperatorSpec::for_field(OperatorKind::Rc2, psi), psi)?;
        let r2 = self.expectation(&OperatorSpec::for_field(OperatorKind::R2, psi), psi)?;
        let lcan = self.expectation(&OperatorSpec::plain(OperatorKind::LCanZ), psi)?;
        let jl = (lcan.value.re - (rc2.value.re - r2.value.re) / (2.0 * psi.params.l_b2())).abs();
        Ok(GuidingCenterReport {
            rc2: (&rc2).into(),
            r2: (&r2).into(),
            lcan: (&lcan).into(),
            johnson_lippmann_residual: jl,
        })
    }

    /// `|ψ|²` and `j = (e/m_e) Re[ψ* (p + eA) ψ]`.
    pub fn density_current_maps(&self, psi: &WaveField) -> Result<DensityCurrent> {
        let p = psi.params;
        let px = self.apply_unchecked(&OperatorKind::PMechX, psi)?;
        let py = self.apply_unchecked(&OperatorKind::PMechY, psi)?;
        let s = p.e / p.m_e;
        let jx = psi
            .values
            .iter()
            .zip(&px.values)
            .map(|(a, b)| s * (a.conj() * b).re)
            .collect();
        let jy = psi
            .values
            .iter()
            .zip(&py.values)
            .map(|(a, b)| s * (a.conj() * b).re)
            .collect();
        Ok(DensityCurrent {
            grid: psi.grid,
            band: px.band,
            density: psi.density(),
            jx,
            jy,
        })
    }

    /// `⟨L^mech_z - eΦ(r)⟩` for the axially symmetric field `profile`.
    pub fn conserved_oam_inhomogeneous(
        &self,
        profile: RadialProfile,
        psi: &WaveField,
    ) -> Result<ExpectationReport> {
        let op = OperatorSpec::for_field(OperatorKind::LConsZInhomog(profile), psi);
        self.expectation(&op, psi)
    }
}

/// [`Engine::apply`] with the default engine.
pub fn apply(op: &OperatorSpec, psi: &WaveField) -> Result<WaveField> {
    Engine::default().apply(op, psi)
}

/// [`Engine::expectation`] with the default engine.
pub fn expectation(op: &OperatorSpec, psi: &WaveField) -> Result<ExpectationReport> {
    Engine::default().expectation(op, psi)
}
