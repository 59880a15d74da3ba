//! Vector potentials, polynomial gauge functions and U(1) phase transformations.
//!
//! Sign convention: a gauge function `χ` shifts the potential `A → A + ∇χ`
//! and the wavefunction `ψ → e^{-ieχ} ψ`.

use std::ops::{Add, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LandauError, Result};
use crate::exec::Exec;
use crate::field::WaveField;
use crate::params::PhysicalParams;
use crate::C64;

pub const MAX_GAUGE_DEGREE: usize = 6;
const DIM: usize = MAX_GAUGE_DEGREE + 1;

/// `χ(x, y) = Σ c_ij x^i y^j` with total degree at most 6.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PolynomialGaugeFunction {
    coeffs: [[f64; DIM]; DIM],
}

impl PolynomialGaugeFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds `χ` from `(i, j, c_ij)` terms; repeated monomials accumulate.
    pub fn from_terms(terms: &[(usize, usize, f64)]) -> Result<Self> {
        let mut chi = Self::zero();
        for &(i, j, c) in terms {
            if i + j > MAX_GAUGE_DEGREE {
                return Err(LandauError::GaugeDegree(i + j));
            }
            chi.coeffs[i][j] += c;
        }
        Ok(chi)
    }

    /// `c · x y`.
    pub fn xy(c: f64) -> Self {
        let mut chi = Self::zero();
        chi.coeffs[1][1] = c;
        chi
    }

    /// Random polynomial with every monomial of total degree `1..=degree`
    /// drawn uniformly from `[-scale, scale]`. The constant term stays zero.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, degree: usize, scale: f64) -> Result<Self> {
        if degree > MAX_GAUGE_DEGREE {
            return Err(LandauError::GaugeDegree(degree));
        }
        let mut chi = Self::zero();
        for d in 1..=degree {
            for i in 0..=d {
                chi.coeffs[i][d - i] = rng.random_range(-scale..=scale);
            }
        }
        Ok(chi)
    }

    /// Like [`random`](Self::random) but with the `x^i y^j` coefficient drawn
    /// from `±amplitude / length^{i+j}`, so each monomial stays of order
    /// `amplitude` for `|x|, |y| ≤ length`.
    pub fn random_on_length<R: Rng + ?Sized>(
        rng: &mut R,
        degree: usize,
        amplitude: f64,
        length: f64,
    ) -> Result<Self> {
        let mut chi = Self::random(rng, degree, amplitude)?;
        for i in 0..DIM {
            for j in 0..DIM - i {
                chi.coeffs[i][j] /= length.powi((i + j) as i32);
            }
        }
        Ok(chi)
    }

    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        if i < DIM && j < DIM {
            self.coeffs[i][j]
        } else {
            0.0
        }
    }

    /// Nonzero terms as `(i, j, c_ij)`.
    pub fn terms(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..DIM {
            for j in 0..DIM - i {
                if self.coeffs[i][j] != 0.0 {
                    out.push((i, j, self.coeffs[i][j]));
                }
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.terms()
            .iter()
            .map(|&(i, j, _)| i + j)
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms().is_empty()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.coeffs.iter_mut().flatten().for_each(|c| *c *= s);
        out
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for i in (0..DIM).rev() {
            let mut row = 0.0;
            for j in (0..DIM - i).rev() {
                row = row * y + self.coeffs[i][j];
            }
            acc = acc * x + row;
        }
        acc
    }

    /// `∂χ/∂x` as a polynomial.
    pub fn dx(&self) -> Self {
        let mut out = Self::zero();
        for i in 1..DIM {
            for j in 0..DIM - i {
                out.coeffs[i - 1][j] = i as f64 * self.coeffs[i][j];
            }
        }
        out
    }

    /// `∂χ/∂y` as a polynomial.
    pub fn dy(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..DIM {
            for j in 1..DIM - i {
                out.coeffs[i][j - 1] = j as f64 * self.coeffs[i][j];
            }
        }
        out
    }

    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        (self.dx().value(x, y), self.dy().value(x, y))
    }

    pub fn laplacian(&self, x: f64, y: f64) -> f64 {
        self.dx().dx().value(x, y) + self.dy().dy().value(x, y)
    }
}

impl Add for PolynomialGaugeFunction {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..DIM {
            for j in 0..DIM {
                out.coeffs[i][j] += rhs.coeffs[i][j];
            }
        }
        out
    }
}

impl Neg for PolynomialGaugeFunction {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Sub for PolynomialGaugeFunction {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

/// Axially symmetric magnetic field profile `B(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RadialProfile {
    Uniform {
        b: f64,
    },
    /// `B(r) = b0 · exp(-r²/width²)`.
    Gaussian {
        b0: f64,
        width: f64,
    },
}

impl RadialProfile {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            RadialProfile::Uniform { b } => b.is_finite() && b > 0.0,
            RadialProfile::Gaussian { b0, width } => {
                b0.is_finite() && b0 > 0.0 && width.is_finite() && width > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(LandauError::InvalidParams(format!(
                "radial profile must be positive and finite: {self:?}"
            )))
        }
    }

    pub fn field(&self, r: f64) -> f64 {
        match *self {
            RadialProfile::Uniform { b } => b,
            RadialProfile::Gaussian { b0, width } => b0 * (-(r * r) / (width * width)).exp(),
        }
    }

    /// Enclosed flux per 2π, `Φ(r) = ∫₀^r B(r') r' dr'`, by adaptive quadrature.
    pub fn flux(&self, r: f64) -> Result<f64> {
        adaptive_simpson(&|s| self.field(s) * s, 0.0, r.abs(), 1e-14)
    }
}

const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Eight-point Gauss–Legendre rule on `[a, b]`.
pub(crate) fn gauss_legendre8<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for k in 0..4 {
        let d = h * GL8_NODES[k];
        s += GL8_WEIGHTS[k] * (f(c - d) + f(c + d));
    }
    s * h
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    simpson_step(f, a, b, fa, fm, fb, whole, tol * scale.max(1.0), 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let floor = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if delta.abs() <= 15.0 * tol || delta.abs() <= floor {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(LandauError::Quadrature(format!(
            "adaptive Simpson did not converge on [{a}, {b}] (error {:e})",
            delta.abs() / 15.0
        )));
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

/// Tabulated enclosed flux: prefix integrals at uniform radii, with the
/// remainder inside a cell done by Gauss–Legendre.
#[derive(Debug, Clone)]
pub struct FluxTable {
    profile: RadialProfile,
    step: f64,
    prefix: Vec<f64>,
}

impl FluxTable {
    pub fn build(profile: RadialProfile, r_max: f64, step: f64) -> Result<Self> {
        profile.validate()?;
        if !(step > 0.0 && r_max.is_finite()) {
            return Err(LandauError::InvalidParams(format!(
                "flux table needs step > 0 and finite radius, got {step}, {r_max}"
            )));
        }
        let cells = (r_max / step).ceil() as usize + 1;
        let f = |s: f64| profile.field(s) * s;
        let mut prefix = Vec::with_capacity(cells + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for k in 0..cells {
            let a = k as f64 * step;
            acc += adaptive_simpson(&f, a, a + step, 1e-15)?;
            prefix.push(acc);
        }
        Ok(FluxTable {
            profile,
            step,
            prefix,
        })
    }

    pub fn profile(&self) -> RadialProfile {
        self.profile
    }

    pub fn flux(&self, r: f64) -> f64 {
        let r = r.abs();
        let k = ((r / self.step) as usize).min(self.prefix.len() - 1);
        let a = k as f64 * self.step;
        self.prefix[k] + gauss_legendre8(|s| self.profile.field(s) * s, a, r)
    }

    /// `Φ(r)/r²`, regular at the origin.
    pub fn flux_over_r2(&self, r: f64) -> f64 {
        if r < 1e-12 {
            0.5 * self.profile.field(0.0)
        } else {
            self.flux(r) / (r * r)
        }
    }
}

/// Named vector potential before any gauge function is added.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GaugeBase {
    /// `(B/2)(-y, x)`.
    Symmetric,
    /// `B(-y, 0)`.
    Landau1,
    /// `B(0, x)`.
    Landau2,
    /// `(Φ(r)/r²)(-y, x)` for a radial profile; `Uniform` reproduces the
    /// symmetric gauge of that field.
    Axial(RadialProfile),
}

impl GaugeBase {
    /// For the uniform-field bases `A = B(-α y, β x)`; returns `(α, β)`.
    pub fn uniform_coefficients(&self) -> Option<(f64, f64)> {
        match self {
            GaugeBase::Symmetric => Some((0.5, 0.5)),
            GaugeBase::Landau1 => Some((1.0, 0.0)),
            GaugeBase::Landau2 => Some((0.0, 1.0)),
            GaugeBase::Axial(_) => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GaugeBase::Symmetric => "symmetric",
            GaugeBase::Landau1 => "landau1",
            GaugeBase::Landau2 => "landau2",
            GaugeBase::Axial(_) => "axial",
        }
    }
}

/// A base potential plus a polynomial gauge function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeSpec {
    pub base: GaugeBase,
    pub chi: PolynomialGaugeFunction,
}

impl GaugeSpec {
    pub fn new(base: GaugeBase) -> Self {
        GaugeSpec {
            base,
            chi: PolynomialGaugeFunction::zero(),
        }
    }

    pub fn symmetric() -> Self {
        Self::new(GaugeBase::Symmetric)
    }

    pub fn landau1() -> Self {
        Self::new(GaugeBase::Landau1)
    }

    pub fn landau2() -> Self {
        Self::new(GaugeBase::Landau2)
    }

    pub fn with_chi(self, chi: PolynomialGaugeFunction) -> Self {
        GaugeSpec { chi, ..self }
    }

    /// Same base with `chi` added to the existing gauge function.
    pub fn shifted(self, chi: &PolynomialGaugeFunction) -> Self {
        GaugeSpec {
            chi: self.chi + *chi,
            ..self
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.base.uniform_coefficients().is_some()
    }

    pub fn describe(&self) -> String {
        if self.chi.is_zero() {
            self.base.name().to_string()
        } else {
            format!("{}+chi(deg {})", self.base.name(), self.chi.degree())
        }
    }

    /// Realized potential `A_base + ∇χ` at `(x, y)`.
    pub fn potential_at(&self, params: &PhysicalParams, x: f64, y: f64) -> (f64, f64) {
        let (gx, gy) = self.chi.gradient(x, y);
        let (ax, ay) = match self.base.uniform_coefficients() {
            Some((alpha, beta)) => (-alpha * params.b * y, beta * params.b * x),
            None => {
                let GaugeBase::Axial(profile) = self.base else {
                    unreachable!()
                };
                let r = x.hypot(y);
                let g = if r < 1e-12 {
                    0.5 * profile.field(0.0)
                } else {
                    let phi = gauss_legendre_composite(|s| profile.field(s) * s, 0.0, r, 64);
                    phi / (r * r)
                };
                (-g * y, g * x)
            }
        };
        (ax + gx, ay + gy)
    }

    /// `∂_x A_y - ∂_y A_x` from the coefficients, for uniform bases. The
    /// gauge-function part enters through the mixed partials of `χ`, which are
    /// compared as polynomials.
    pub fn symbolic_curl(&self, params: &PhysicalParams) -> Option<f64> {
        let (alpha, beta) = self.base.uniform_coefficients()?;
        let mixed = self.chi.dy().dx() - self.chi.dx().dy();
        let residual = if mixed.is_zero() { 0.0 } else { f64::NAN };
        Some(params.b * (alpha + beta) + residual)
    }
}

fn gauss_legendre_composite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| gauss_legendre8(&f, a + k as f64 * h, a + (k + 1) as f64 * h))
        .sum()
}

/// Gauge function taking the uniform base `from` to `to`: `A_to = A_from + ∇χ`
/// with `χ(0, 0) = 0`.
pub fn chi_between(
    from: GaugeBase,
    to: GaugeBase,
    params: &PhysicalParams,
) -> Result<PolynomialGaugeFunction> {
    let (Some((a1, b1)), Some((a2, b2))) = (from.uniform_coefficients(), to.uniform_coefficients())
    else {
        return Err(LandauError::InvalidGaugePair(format!(
            "{} -> {}: only the uniform-field bases are connected by a polynomial",
            from.name(),
            to.name()
        )));
    };
    if from == to {
        return Err(LandauError::InvalidGaugePair(format!(
            "{} -> {}: identical bases",
            from.name(),
            to.name()
        )));
    }
    // B(-α y, β x) differs by ∇(c x y) = (c y, c x) with α + β = 1 on both sides.
    let c = params.b * (b2 - b1);
    debug_assert!((params.b * (a1 - a2) - c).abs() <= 1e-15 * params.b);
    Ok(PolynomialGaugeFunction::xy(c))
}

/// Multiplies `psi` by `e^{-ieχ}` pointwise and shifts its gauge tag by `χ`.
pub fn transform_wavefield(psi: &WaveField, chi: &PolynomialGaugeFunction) -> WaveField {
    if chi.is_zero() {
        return psi.clone();
    }
    let e = psi.params.e;
    let grid = psi.grid;
    let mut out = psi.clone();
    out.gauge = psi.gauge.shifted(chi);
    Exec::default().fill_rows(&mut out.values, grid.nx, |j, row| {
        let y = grid.y(j);
        let src = &psi.values[j * grid.nx..(j + 1) * grid.nx];
        for (i, (v, s)) in row.iter_mut().zip(src).enumerate() {
            *v = s * C64::from_polar(1.0, -e * chi.value(grid.x(i), y));
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn potential_examples() {
        let p = PhysicalParams::default();
        assert_eq!(
            GaugeSpec::symmetric().potential_at(&p, 1.0, 2.0),
            (-1.0, 0.5)
        );
        assert_eq!(GaugeSpec::landau1().potential_at(&p, 1.0, 2.0), (-2.0, 0.0));
        assert_eq!(GaugeSpec::landau2().potential_at(&p, 1.0, 2.0), (0.0, 1.0));
        let g = GaugeSpec::symmetric().with_chi(PolynomialGaugeFunction::xy(-0.5));
        assert_eq!(g.potential_at(&p, 1.0, 2.0), (-2.0, 0.0));
    }

    #[test]
    fn chi_between_examples() {
        let p = PhysicalParams::default();
        let s1 = chi_between(GaugeBase::Symmetric, GaugeBase::Landau1, &p).unwrap();
        assert_eq!(s1.terms(), vec![(1, 1, -0.5)]);
        let s2 = chi_between(GaugeBase::Symmetric, GaugeBase::Landau2, &p).unwrap();
        assert_eq!(s2.terms(), vec![(1, 1, 0.5)]);
        assert!(chi_between(GaugeBase::Landau1, GaugeBase::Landau1, &p).is_err());
        let axial = GaugeBase::Axial(RadialProfile::Uniform { b: 1.0 });
        assert!(chi_between(axial, GaugeBase::Landau1, &p).is_err());
    }

    #[test]
    fn chi_between_connects_potentials() {
        let p = PhysicalParams::new(1.3, 0.7, 2.0).unwrap();
        let bases = [GaugeBase::Symmetric, GaugeBase::Landau1, GaugeBase::Landau2];
        for from in bases {
            for to in bases {
                if from == to {
                    continue;
                }
                let chi = chi_between(from, to, &p).unwrap();
                assert_eq!(chi.value(0.0, 0.0), 0.0);
                let back = chi_between(to, from, &p).unwrap();
                assert!((chi + back).is_zero());
                for &(x, y) in &[(0.3, -1.2), (2.0, 5.0), (-4.0, 0.1)] {
                    let a = GaugeSpec::new(from).with_chi(chi).potential_at(&p, x, y);
                    let b = GaugeSpec::new(to).potential_at(&p, x, y);
                    assert!((a.0 - b.0).abs() < 1e-14 && (a.1 - b.1).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn polynomial_calculus() {
        // χ = 2x³y - xy² + 4y
        let chi =
            PolynomialGaugeFunction::from_terms(&[(3, 1, 2.0), (1, 2, -1.0), (0, 1, 4.0)]).unwrap();
        let (x, y) = (0.7, -1.3);
        assert!((chi.value(x, y) - (2.0 * x * x * x * y - x * y * y + 4.0 * y)).abs() < 1e-14);
        let (gx, gy) = chi.gradient(x, y);
        assert!((gx - (6.0 * x * x * y - y * y)).abs() < 1e-14);
        assert!((gy - (2.0 * x * x * x - 2.0 * x * y + 4.0)).abs() < 1e-14);
        assert!((chi.laplacian(x, y) - (12.0 * x * y - 2.0 * x)).abs() < 1e-14);
        assert_eq!(chi.degree(), 4);
        assert!(PolynomialGaugeFunction::from_terms(&[(4, 3, 1.0)]).is_err());
    }

    #[test]
    fn flux_of_profiles() {
        let u = RadialProfile::Uniform { b: 2.0 };
        assert!((u.flux(3.0).unwrap() - 9.0).abs() < 1e-13);
        let g = RadialProfile::Gaussian {
            b0: 1.0,
            width: 1.0,
        };
        for &r in &[0.1f64, 1.0, 2.5, 7.0] {
            let exact = 0.5 * (1.0 - (-r * r).exp());
            assert!((g.flux(r).unwrap() - exact).abs() < 1e-13, "r={r}");
        }
        let table = FluxTable::build(g, 10.0, 0.01).unwrap();
        for &r in &[0.0f64, 1e-7, 0.013, 1.0, 3.33, 9.99] {
            let exact = 0.5 * (1.0 - (-r * r).exp());
            assert!((table.flux(r) - exact).abs() < 1e-14, "r={r}");
        }
        assert!((table.flux_over_r2(1e-4) - 0.5).abs() < 1e-8);
    }

    #[test]
    fn axial_uniform_matches_symmetric() {
        let p = PhysicalParams::default();
        let ax = GaugeSpec::new(GaugeBase::Axial(RadialProfile::Uniform { b: 1.0 }));
        for &(x, y) in &[(0.0, 0.0), (1.0, 2.0), (-3.0, 0.5)] {
            let a = ax.potential_at(&p, x, y);
            let s = GaugeSpec::symmetric().potential_at(&p, x, y);
            assert!((a.0 - s.0).abs() < 1e-13 && (a.1 - s.1).abs() < 1e-13);
        }
    }

    #[test]
    fn axial_curl_is_profile() {
        let p = PhysicalParams::default();
        let prof = RadialProfile::Gaussian {
            b0: 1.0,
            width: 1.0,
        };
        let ax = GaugeSpec::new(GaugeBase::Axial(prof));
        let h = 1e-4;
        for &(x, y) in &[(0.5, 0.2), (1.0, -1.0), (-0.3, 1.7)] {
            let day =
                (ax.potential_at(&p, x + h, y).1 - ax.potential_at(&p, x - h, y).1) / (2.0 * h);
            let dax =
                (ax.potential_at(&p, x, y + h).0 - ax.potential_at(&p, x, y - h).0) / (2.0 * h);
            assert!((day - dax - prof.field(x.hypot(y))).abs() < 1e-7);
        }
    }

    proptest! {
        #[test]
        fn round_trip_and_curl(seed in any::<u64>(), deg in 0usize..=6) {
            let p = PhysicalParams::default();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let chi = PolynomialGaugeFunction::random(&mut rng, deg, 1.0).unwrap();
            prop_assert_eq!(chi.value(0.0, 0.0), 0.0);
            prop_assert!(chi.degree() <= deg);
            for base in [GaugeBase::Symmetric, GaugeBase::Landau1, GaugeBase::Landau2] {
                let curl = GaugeSpec::new(base).with_chi(chi).symbolic_curl(&p).unwrap();
                prop_assert_eq!(curl, p.b);
            }
            prop_assert!((chi - chi).is_zero());
        }
    }
}
