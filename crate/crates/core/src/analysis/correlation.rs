//! Spin correlations along directions in the Z–X plane and CHSH values.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analysis::density::{reduced_density_matrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::lattice::SiteId;
use crate::state::PureState;

/// Observable `cos θ·Z + sin θ·X` on one site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetting {
    pub site: SiteId,
    pub theta: f64,
}

impl MeasurementSetting {
    pub fn new(site: impl Into<SiteId>, theta: f64) -> Self {
        MeasurementSetting { site: site.into(), theta }
    }
}

pub(crate) fn observable(theta: f64) -> DMatrix<Complex64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(2, 2, &[Complex64::new(c, 0.0), Complex64::new(s, 0.0), Complex64::new(s, 0.0), Complex64::new(-c, 0.0)])
}

/// `⟨σ(θ₁) ⊗ σ(θ₂)⟩`.
pub fn correlation(state: &PureState, s1: MeasurementSetting, s2: MeasurementSetting) -> Result<f64> {
    if s1.site == s2.site {
        return Err(Error::SameSite(s1.site));
    }
    let rho = reduced_density_matrix(state, &[s1.site, s2.site])?;
    let op = observable(s1.theta).kronecker(&observable(s2.theta));
    Ok(rho.expectation(&op).re)
}

/// Correlation tensor `T[p][q] = ⟨P ⊗ Q⟩` for `P, Q ∈ {Z, X}`. Every
/// in-plane correlation follows from it:
/// `E(a, b) = Σ T[p][q] f_p(a) f_q(b)` with `f = (cos, sin)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationTensor {
    t: [[f64; 2]; 2],
}

impl CorrelationTensor {
    pub fn from_rdm(rho: &DensityMatrix) -> Self {
        let z = observable(0.0);
        let x = observable(PI / 2.0);
        let ops = [&z, &x];
        let mut t = [[0.0; 2]; 2];
        for (p, a) in ops.iter().enumerate() {
            for (q, b) in ops.iter().enumerate() {
                t[p][q] = rho.expectation(&a.kronecker(b)).re;
            }
        }
        CorrelationTensor { t }
    }

    pub fn of_sites(state: &PureState, a: SiteId, b: SiteId) -> Result<Self> {
        if a == b {
            return Err(Error::SameSite(a));
        }
        Ok(Self::from_rdm(&reduced_density_matrix(state, &[a, b])?))
    }

    pub fn correlation(&self, theta_a: f64, theta_b: f64) -> f64 {
        let (sa, ca) = theta_a.sin_cos();
        let (sb, cb) = theta_b.sin_cos();
        self.t[0][0] * ca * cb + self.t[0][1] * ca * sb + self.t[1][0] * sa * cb + self.t[1][1] * sa * sb
    }

    pub fn chsh(&self, s: ChshSettings) -> f64 {
        (self.correlation(s.a, s.b) - self.correlation(s.a, s.b_prime)
            + self.correlation(s.a_prime, s.b)
            + self.correlation(s.a_prime, s.b_prime))
        .abs()
    }
}

/// Angles in radians for the two settings on each side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSettings {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl ChshSettings {
    pub fn new(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Self {
        ChshSettings { a, a_prime, b, b_prime }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.a_prime, self.b, self.b_prime]
    }

    fn from_array(v: [f64; 4]) -> Self {
        ChshSettings::new(v[0], v[1], v[2], v[3])
    }
}

/// `|E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)|`.
pub fn chsh(state: &PureState, site_a: SiteId, site_b: SiteId, settings: ChshSettings) -> Result<f64> {
    let e = |x: f64, y: f64| correlation(state, MeasurementSetting::new(site_a, x), MeasurementSetting::new(site_b, y));
    Ok((e(settings.a, settings.b)? - e(settings.a, settings.b_prime)? + e(settings.a_prime, settings.b)? + e(settings.a_prime, settings.b_prime)?).abs())
}

/// Best CHSH value for one choice of `(b, b′)` on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshGridRow {
    pub b: f64,
    pub b_prime: f64,
    pub a: f64,
    pub a_prime: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChshScan {
    pub resolution_deg: f64,
    pub points_per_angle: usize,
    pub rows: Vec<ChshGridRow>,
    pub grid_max: f64,
    pub grid_argmax: ChshSettings,
    pub refined_max: f64,
    pub refined_argmax: ChshSettings,
}

/// Exhaustive CHSH search over a grid of angles in `[0, 2π)` spaced by
/// `resolution_deg`, followed by a pattern-search refinement from the best
/// grid point.
///
/// For fixed `(b, b′)` the expression splits into a term in `a` and a term
/// in `a′`, so each is maximized independently and the full four-angle grid
/// is covered exactly in O(n³).
pub fn chsh_scan(state: &PureState, site_a: SiteId, site_b: SiteId, resolution_deg: f64) -> Result<ChshScan> {
    if !(resolution_deg > 0.0 && resolution_deg <= 90.0) {
        return Err(Error::InvalidArgument(format!("resolution {resolution_deg}° outside (0, 90]")));
    }
    let tensor = CorrelationTensor::of_sites(state, site_a, site_b)?;
    let n = ((360.0 / resolution_deg) + 1e-9).floor() as usize;
    let angles: Vec<f64> = (0..n).map(|i| (i as f64 * resolution_deg).to_radians()).collect();
    let table: Vec<Vec<f64>> = angles.iter().map(|&a| angles.iter().map(|&b| tensor.correlation(a, b)).collect()).collect();

    let mut rows = Vec::with_capacity(n * n);
    let mut best = ChshGridRow { b: 0.0, b_prime: 0.0, a: 0.0, a_prime: 0.0, value: f64::NEG_INFINITY };
    for j in 0..n {
        for k in 0..n {
            // f(a) = E(a,b) − E(a,b′), g(a′) = E(a′,b) + E(a′,b′)
            let (mut fmax, mut fmin, mut gmax, mut gmin) = ((f64::NEG_INFINITY, 0), (f64::INFINITY, 0), (f64::NEG_INFINITY, 0), (f64::INFINITY, 0));
            for (i, row) in table.iter().enumerate() {
                let f = row[j] - row[k];
                let g = row[j] + row[k];
                if f > fmax.0 {
                    fmax = (f, i);
                }
                if f < fmin.0 {
                    fmin = (f, i);
                }
                if g > gmax.0 {
                    gmax = (g, i);
                }
                if g < gmin.0 {
                    gmin = (g, i);
                }
            }
            let up = fmax.0 + gmax.0;
            let down = -(fmin.0 + gmin.0);
            let (value, i, ip) = if up >= down { (up, fmax.1, gmax.1) } else { (down, fmin.1, gmin.1) };
            let row = ChshGridRow { b: angles[j], b_prime: angles[k], a: angles[i], a_prime: angles[ip], value };
            if value > best.value {
                best = row;
            }
            rows.push(row);
        }
    }
    let start = ChshSettings::new(best.a, best.a_prime, best.b, best.b_prime);
    let (refined_argmax, refined_max) = refine(&tensor, start, resolution_deg.to_radians());
    Ok(ChshScan {
        resolution_deg,
        points_per_angle: n,
        rows,
        grid_max: best.value,
        grid_argmax: start,
        refined_max,
        refined_argmax,
    })
}

/// Compass search on the four angles, halving the step on stalls.
fn refine(tensor: &CorrelationTensor, start: ChshSettings, initial_step: f64) -> (ChshSettings, f64) {
    let mut x = start.as_array();
    let mut fx = tensor.chsh(start);
    let mut step = initial_step / 2.0;
    while step > 1e-10 {
        let mut improved = false;
        for d in 0..4 {
            for sign in [1.0, -1.0] {
                let mut y = x;
                y[d] += sign * step;
                let fy = tensor.chsh(ChshSettings::from_array(y));
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    (ChshSettings::from_array(x), fx)
}
