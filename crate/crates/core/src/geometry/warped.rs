use crate::error::{Error, Result};

/// Surface area of the unit n-sphere.
pub fn unit_sphere_area(n: usize) -> f64 {
    // A_0 = 2, A_1 = 2π, A_n = 2π/(n-1) · A_{n-2}
    match n {
        0 => 2.0,
        1 => std::f64::consts::TAU,
        _ => std::f64::consts::TAU / (n as f64 - 1.0) * unit_sphere_area(n - 2),
    }
}

/// A warped product over [0, L] with round n-sphere fibres: g = dt² + f(t)² g_{S^n}.
/// The warp is sampled on a uniform grid.
#[derive(Debug, Clone)]
pub struct WarpedInterval {
    length: f64,
    fibre_dim: usize,
    warp: Vec<f64>,
    /// Whether each end closes smoothly (f -> 0 there) or is a boundary fibre.
    cap_flags: (bool, bool),
}

/// Measurements of a warped interval between two levels.
#[derive(Debug, Clone, Copy)]
pub struct WarpedMeasurements {
    /// Fibre area at t = c1.
    pub area_start: f64,
    /// Fibre area at t = c2.
    pub area_end: f64,
    /// Volume of the slab {c1 <= t <= c2} (trapezoid rule).
    pub volume: f64,
    /// Distance between the two level sets along the interval.
    pub distance: f64,
}

impl WarpedInterval {
    pub fn new(length: f64, fibre_dim: usize, warp: Vec<f64>, cap_flags: (bool, bool)) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::input("interval length must be positive"));
        }
        if fibre_dim == 0 {
            return Err(Error::input("fibre dimension must be positive"));
        }
        if warp.len() < 2 {
            return Err(Error::input("warp needs at least two samples"));
        }
        let n = warp.len();
        for (i, &f) in warp.iter().enumerate() {
            let interior = i > 0 && i < n - 1;
            if interior && !(f > 0.0) {
                return Err(Error::metric(format!("warp must be positive inside: f[{i}] = {f}")));
            }
            if !f.is_finite() || f < 0.0 {
                return Err(Error::metric(format!("bad warp sample f[{i}] = {f}")));
            }
        }
        if cap_flags.0 && warp[0] != 0.0 {
            return Err(Error::metric("capped start requires f -> 0"));
        }
        if !cap_flags.0 && !(warp[0] > 0.0) {
            return Err(Error::metric("boundary fibre requires f > 0 at start"));
        }
        if cap_flags.1 && warp[n - 1] != 0.0 {
            return Err(Error::metric("capped end requires f -> 0"));
        }
        if !cap_flags.1 && !(warp[n - 1] > 0.0) {
            return Err(Error::metric("boundary fibre requires f > 0 at end"));
        }
        Ok(WarpedInterval {
            length,
            fibre_dim,
            warp,
            cap_flags,
        })
    }

    /// Sample a closure on a uniform grid with `cells` intervals.
    pub fn from_fn(
        length: f64,
        fibre_dim: usize,
        cells: usize,
        cap_flags: (bool, bool),
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if cells == 0 {
            return Err(Error::input("grid needs at least one cell"));
        }
        let h = length / cells as f64;
        let mut warp = Vec::with_capacity(cells + 1);
        for i in 0..=cells {
            let t = if i == cells { length } else { i as f64 * h };
            let mut v = f(t);
            // Snap tiny cap values so sin(pi) == 0 exactly.
            if v.abs() < 1e-14 && ((i == 0 && cap_flags.0) || (i == cells && cap_flags.1)) {
                v = 0.0;
            }
            warp.push(v);
        }
        WarpedInterval::new(length, fibre_dim, warp, cap_flags)
    }

    pub fn length(&self) -> f64 {
        self.length
    }
    pub fn fibre_dim(&self) -> usize {
        self.fibre_dim
    }
    pub fn samples(&self) -> &[f64] {
        &self.warp
    }
    pub fn cap_flags(&self) -> (bool, bool) {
        self.cap_flags
    }
    pub fn grid_spacing(&self) -> f64 {
        self.length / (self.warp.len() - 1) as f64
    }

    fn check_param(&self, c: f64) -> Result<()> {
        if !(0.0..=self.length).contains(&c) {
            return Err(Error::input(format!(
                "parameter {c} outside [0, {}]",
                self.length
            )));
        }
        Ok(())
    }

    /// Warp value at t by linear interpolation between grid samples.
    pub fn warp_at(&self, t: f64) -> f64 {
        let h = self.grid_spacing();
        let x = (t / h).clamp(0.0, (self.warp.len() - 1) as f64);
        let i = (x.floor() as usize).min(self.warp.len() - 2);
        let frac = x - i as f64;
        self.warp[i] * (1.0 - frac) + self.warp[i + 1] * frac
    }

    /// Central-difference f'(t) at the grid point nearest to t.
    pub fn warp_derivative(&self, t: f64) -> f64 {
        let h = self.grid_spacing();
        let n = self.warp.len();
        let i = ((t / h).round() as usize).clamp(1, n - 2);
        (self.warp[i + 1] - self.warp[i - 1]) / (2.0 * h)
    }

    /// Central-difference f''(t) at the grid point nearest to t.
    pub fn warp_second_derivative(&self, t: f64) -> f64 {
        let h = self.grid_spacing();
        let n = self.warp.len();
        let i = ((t / h).round() as usize).clamp(1, n - 2);
        (self.warp[i + 1] - 2.0 * self.warp[i] + self.warp[i - 1]) / (h * h)
    }

    /// Fibre area at level t: ω_n f(t)^n.
    pub fn fibre_area(&self, t: f64) -> Result<f64> {
        self.check_param(t)?;
        Ok(unit_sphere_area(self.fibre_dim) * self.warp_at(t).powi(self.fibre_dim as i32))
    }

    /// Trapezoid quadrature of an integrand sampled from the grid over [c1, c2].
    pub(crate) fn trapezoid(&self, c1: f64, c2: f64, integrand: impl Fn(f64) -> f64) -> f64 {
        if c2 <= c1 {
            return 0.0;
        }
        let h = self.grid_spacing();
        let first = (c1 / h).ceil() as usize;
        let last = (c2 / h).floor() as usize;
        let mut total = 0.0;
        let mut prev_t = c1;
        let mut prev_v = integrand(c1);
        for i in first..=last.min(self.warp.len() - 1) {
            let t = i as f64 * h;
            if t <= prev_t {
                continue;
            }
            let v = integrand(t);
            total += 0.5 * (prev_v + v) * (t - prev_t);
            prev_t = t;
            prev_v = v;
        }
        if c2 > prev_t {
            let v = integrand(c2);
            total += 0.5 * (prev_v + v) * (c2 - prev_t);
        }
        total
    }

    /// Area at the two levels, slab volume, and level-set distance for the
    /// unstretched metric (longitudinal factor 1).
    pub fn measurements(&self, c1: f64, c2: f64) -> Result<WarpedMeasurements> {
        self.check_param(c1)?;
        self.check_param(c2)?;
        if c1 > c2 {
            return Err(Error::input(format!("c1 = {c1} exceeds c2 = {c2}")));
        }
        let omega = unit_sphere_area(self.fibre_dim);
        let n = self.fibre_dim as i32;
        let volume = omega * self.trapezoid(c1, c2, |t| self.warp_at(t).powi(n));
        Ok(WarpedMeasurements {
            area_start: omega * self.warp_at(c1).powi(n),
            area_end: omega * self.warp_at(c2).powi(n),
            volume,
            distance: c2 - c1,
        })
    }
}
