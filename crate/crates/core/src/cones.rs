//! Minimal hypercone stability: closed-form link spectra for products of
//! spheres, a numerical spectrum for meshed links, and the classification of
//! cones against the threshold −(n−2)²/4 with radial growth exponents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::TriangulatedSurface;

/// Link description of a regular minimal hypercone.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum LinkSpec {
    /// S^p(r1) × S^q(r2) ⊂ S^{p+q+1} with the minimality radii
    /// r1 = √(p/(p+q)), r2 = √(q/(p+q)).
    ProductOfSpheres { p: usize, q: usize },
    /// A triangulated link with a per-vertex |II|² field. Held out of the
    /// serialized config; meshed links are built programmatically.
    #[serde(skip)]
    Meshed(MeshedLink),
}

/// A triangulated link with the squared second fundamental form sampled at
/// vertices.
#[derive(Debug, Clone)]
pub struct MeshedLink {
    pub mesh: TriangulatedSurface,
    pub second_fundamental_sq: Vec<f64>,
}

/// A regular minimal hypercone C ⊂ ℝ^{n+1}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinimalCone {
    /// Ambient dimension n+1 (≥ 3).
    pub ambient_dim: usize,
    pub link: LinkSpec,
    /// Literature-sourced flag; never computed here.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strictly_minimising: Option<StrictlyMinimising>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrictlyMinimising {
    pub value: bool,
    pub citation: String,
}

impl MinimalCone {
    pub fn product(p: usize, q: usize) -> Self {
        MinimalCone {
            ambient_dim: p + q + 2,
            link: LinkSpec::ProductOfSpheres { p, q },
            strictly_minimising: None,
        }
    }
}

/// Eigenvalues μ₁ < μ₂ ≤ ... of −(Δ_Σ + |II|²) on the link, with harmonic
/// indices and multiplicities when they come from a closed form.
#[derive(Debug, Clone, Serialize)]
pub struct LinkSpectrum {
    pub eigenvalues: Vec<f64>,
    /// For closed-form product links: (k, m, multiplicity) per eigenvalue.
    pub modes: Option<Vec<(usize, usize, usize)>>,
}

/// Dimension of the space of degree-k spherical harmonics on S^p.
fn harmonic_multiplicity(p: usize, k: usize) -> usize {
    fn binom(n: usize, r: usize) -> usize {
        if r > n {
            return 0;
        }
        let r = r.min(n - r);
        let mut acc: u128 = 1;
        for i in 0..r {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc as usize
    }
    if k == 0 {
        return 1;
    }
    binom(p + k, k) - binom(p + k - 2, k.wrapping_sub(2).min(p + k - 2))
}

/// Closed-form spectrum of −(Δ + |II|²) on S^p(r1) × S^q(r2) with the minimal
/// radii: eigenvalues k(k+p−1)/r1² + m(m+q−1)/r2² − (p+q) over harmonic
/// bidegrees (k, m), sorted, complete for the requested number of modes.
pub fn product_link_spectrum(p: usize, q: usize, modes: usize) -> Result<LinkSpectrum> {
    if p < 1 || q < 1 {
        return Err(Error::input("sphere factors need dimension at least 1"));
    }
    if modes < 1 {
        return Err(Error::input("need at least one mode"));
    }
    let d = (p + q) as f64;
    // 1/r1² = (p+q)/p, 1/r2² = (p+q)/q
    let inv_r1 = d / p as f64;
    let inv_r2 = d / q as f64;
    let lambda = |k: usize, m: usize| -> f64 {
        let k = k as f64;
        let m = m as f64;
        k * (k + p as f64 - 1.0) * inv_r1 + m * (m + q as f64 - 1.0) * inv_r2 - d
    };

    // Enumerate bidegrees up to a bound that provably covers the lowest modes:
    // eigenvalues grow monotonically in k and m, so once the K-th pure modes
    // exceed the current modes-th candidate the enumeration is complete.
    let mut boxsize = 4usize;
    loop {
        let mut entries: Vec<(f64, usize, usize, usize)> = Vec::new();
        for k in 0..=boxsize {
            for m in 0..=boxsize {
                entries.push((
                    lambda(k, m),
                    k,
                    m,
                    harmonic_multiplicity(p, k) * harmonic_multiplicity(q, m),
                ));
            }
        }
        entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let mut count = 0usize;
        let mut cutoff_value = f64::INFINITY;
        for e in &entries {
            count += e.3;
            if count >= modes {
                cutoff_value = e.0;
                break;
            }
        }
        let frontier = lambda(boxsize + 1, 0).min(lambda(0, boxsize + 1));
        if count >= modes && frontier > cutoff_value {
            let mut eigenvalues = Vec::with_capacity(modes);
            let mut mode_list = Vec::with_capacity(modes);
            'outer: for e in &entries {
                for _ in 0..e.3 {
                    eigenvalues.push(e.0);
                    mode_list.push((e.1, e.2, e.3));
                    if eigenvalues.len() == modes {
                        break 'outer;
                    }
                }
            }
            return Ok(LinkSpectrum {
                eigenvalues,
                modes: Some(mode_list),
            });
        }
        boxsize *= 2;
        if boxsize > 1 << 20 {
            return Err(Error::input("mode enumeration bound exceeded"));
        }
    }
}

/// Numerical spectrum of −(Δ + |II|²) on a meshed link: piecewise-linear
/// cotangent stiffness and lumped mass, dense generalized symmetric solve.
pub fn meshed_link_spectrum(link: &MeshedLink, modes: usize) -> Result<LinkSpectrum> {
    let mesh = &link.mesh;
    let nv = mesh.vertex_count();
    if link.second_fundamental_sq.len() != nv {
        return Err(Error::input(format!(
            "|II|² field has {} samples for {} vertices",
            link.second_fundamental_sq.len(),
            nv
        )));
    }
    if modes < 1 || modes > nv {
        return Err(Error::input("mode count out of range"));
    }

    let mut stiff = nalgebra::DMatrix::<f64>::zeros(nv, nv);
    let mut mass = vec![0.0f64; nv];
    for f in 0..mesh.face_count() {
        let [a, b, c] = mesh.faces()[f];
        let la = mesh.edge_length(mesh.edge_id(b, c).unwrap());
        let lb = mesh.edge_length(mesh.edge_id(a, c).unwrap());
        let lc = mesh.edge_length(mesh.edge_id(a, b).unwrap());
        let area = mesh.face_area(f);
        // Intrinsic cotangents via the law of cosines.
        let cot = |opp: f64, x: f64, y: f64| (x * x + y * y - opp * opp) / (4.0 * area);
        let (ca, cb, cc) = (cot(la, lb, lc), cot(lb, la, lc), cot(lc, la, lb));
        for ((i, j), w) in [((b, c), ca), ((a, c), cb), ((a, b), cc)] {
            stiff[(i, j)] -= 0.5 * w;
            stiff[(j, i)] -= 0.5 * w;
            stiff[(i, i)] += 0.5 * w;
            stiff[(j, j)] += 0.5 * w;
        }
        for v in [a, b, c] {
            mass[v] += area / 3.0;
        }
    }
    // A = stiffness − M·|II|², generalized against the lumped mass.
    for v in 0..nv {
        stiff[(v, v)] -= mass[v] * link.second_fundamental_sq[v];
    }
    let inv_sqrt_m: Vec<f64> = mass.iter().map(|&m| 1.0 / m.sqrt()).collect();
    for i in 0..nv {
        for j in 0..nv {
            stiff[(i, j)] *= inv_sqrt_m[i] * inv_sqrt_m[j];
        }
    }
    let eig = nalgebra::SymmetricEigen::new(stiff);
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.truncate(modes);
    Ok(LinkSpectrum {
        eigenvalues: values,
        modes: None,
    })
}

/// Stability class of a cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StabilityClass {
    StrictlyStable,
    StableBorderline,
    Unstable,
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StabilityClass::StrictlyStable => write!(f, "strictly-stable"),
            StabilityClass::StableBorderline => write!(f, "stable-borderline"),
            StabilityClass::Unstable => write!(f, "unstable"),
        }
    }
}

/// Radial growth exponents γ± of a Jacobi-field mode.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RadialExponents {
    pub mode: usize,
    pub gamma_minus: f64,
    pub gamma_plus: f64,
}

/// Verdict of the threshold comparison.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityVerdict {
    pub threshold: f64,
    pub mu_1: f64,
    pub class: StabilityClass,
    /// γ±_i = −(n−2)/2 ± √((n−2)²/4 + μ_i), for the modes with μ_i ≥ threshold.
    pub radial_exponents: Vec<RadialExponents>,
}

/// Compare μ₁ against −(n−2)²/4 where n = ambient_dim − 1.
pub fn classify_stability(cone: &MinimalCone, spectrum: &LinkSpectrum) -> Result<StabilityVerdict> {
    if cone.ambient_dim < 3 {
        return Err(Error::input("ambient dimension must be at least 3"));
    }
    if let LinkSpec::ProductOfSpheres { p, q } = cone.link {
        if p + q + 2 != cone.ambient_dim {
            return Err(Error::input(format!(
                "product link S^{p}×S^{q} does not match ambient dimension {}",
                cone.ambient_dim
            )));
        }
    }
    let n = (cone.ambient_dim - 1) as f64;
    let half = (n - 2.0) / 2.0;
    let threshold = -half * half;
    let mu_1 = *spectrum
        .eigenvalues
        .first()
        .ok_or_else(|| Error::input("empty spectrum"))?;
    let class = if mu_1 > threshold {
        StabilityClass::StrictlyStable
    } else if mu_1 == threshold {
        StabilityClass::StableBorderline
    } else {
        StabilityClass::Unstable
    };
    let mut radial_exponents = Vec::new();
    for (i, &mu) in spectrum.eigenvalues.iter().enumerate() {
        let disc = half * half + mu;
        if disc >= 0.0 {
            let root = disc.sqrt();
            radial_exponents.push(RadialExponents {
                mode: i,
                gamma_minus: -half - root,
                gamma_plus: -half + root,
            });
        }
    }
    Ok(StabilityVerdict {
        threshold,
        mu_1,
        class,
        radial_exponents,
    })
}

/// Meshed flat torus with side lengths `a` × `b` on an N×N grid, as a
/// triangulated surface with the abstract flat metric.
pub fn flat_torus_mesh(n: usize, a: f64, b: f64) -> Result<TriangulatedSurface> {
    if n < 3 {
        return Err(Error::input("torus grid needs at least 3 cells per side"));
    }
    let idx = |i: usize, j: usize| (i % n) * n + (j % n);
    let (dx, dy) = (a / n as f64, b / n as f64);
    let diag = (dx * dx + dy * dy).sqrt();
    let mut faces = Vec::with_capacity(2 * n * n);
    let mut lengths = std::collections::HashMap::new();
    let mut edge = |u: usize, v: usize, l: f64| {
        lengths.insert((u.min(v), u.max(v)), l);
    };
    for i in 0..n {
        for j in 0..n {
            let v00 = idx(i, j);
            let v10 = idx(i + 1, j);
            let v01 = idx(i, j + 1);
            let v11 = idx(i + 1, j + 1);
            edge(v00, v10, dx);
            edge(v00, v01, dy);
            edge(v00, v11, diag);
            faces.push([v00, v10, v11]);
            faces.push([v00, v11, v01]);
        }
    }
    TriangulatedSurface::from_edge_lengths(faces, &lengths)
}

/// The meshed Clifford-torus link: flat square torus of side 2π/√2 with
/// |II|² ≡ 2.
pub fn clifford_torus_link(n: usize) -> Result<MeshedLink> {
    let side = std::f64::consts::TAU / 2f64.sqrt();
    let mesh = flat_torus_mesh(n, side, side)?;
    let field = vec![2.0; mesh.vertex_count()];
    Ok(MeshedLink {
        mesh,
        second_fundamental_sq: field,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_spectrum_ground_modes() {
        // constant eigenfunction: μ₁ = −(p+q), simple
        let s33 = product_link_spectrum(3, 3, 4).unwrap();
        assert_eq!(s33.eigenvalues[0], -6.0);
        let modes = s33.modes.as_ref().unwrap();
        assert_eq!(modes[0], (0, 0, 1));
        assert!(s33.eigenvalues[1] > s33.eigenvalues[0]);

        let s11 = product_link_spectrum(1, 1, 4).unwrap();
        assert_eq!(s11.eigenvalues[0], -2.0);
        // next Clifford modes: k=1,m=0 and k=0,m=1 give 1·1·2 − 2 = 0
        assert_eq!(s11.eigenvalues[1], 0.0);
    }

    #[test]
    fn spectrum_nondecreasing_after_first() {
        let s = product_link_spectrum(2, 5, 40).unwrap();
        for w in s.eigenvalues.windows(2) {
            assert!(w[1] >= w[0]);
        }
        assert!(s.eigenvalues[1] > s.eigenvalues[0], "μ₁ must be simple");
    }

    #[test]
    fn simons_cone_exponents() {
        let cone = MinimalCone::product(3, 3);
        let spec = product_link_spectrum(3, 3, 3).unwrap();
        let v = classify_stability(&cone, &spec).unwrap();
        assert_eq!(v.threshold, -6.25);
        assert_eq!(v.class, StabilityClass::StrictlyStable);
        let g = v.radial_exponents[0];
        assert!((g.gamma_minus + 3.0).abs() < 1e-12);
        assert!((g.gamma_plus + 2.0).abs() < 1e-12);
    }

    #[test]
    fn low_dimensional_cones_unstable() {
        for p in [1usize, 2] {
            let cone = MinimalCone::product(p, p);
            let spec = product_link_spectrum(p, p, 2).unwrap();
            let v = classify_stability(&cone, &spec).unwrap();
            assert_eq!(v.class, StabilityClass::Unstable, "p = q = {p}");
        }
    }

    #[test]
    fn exponents_real_iff_above_threshold() {
        let cone = MinimalCone::product(2, 2);
        let spec = product_link_spectrum(2, 2, 6).unwrap();
        let v = classify_stability(&cone, &spec).unwrap();
        // μ₁ = −4 < −2.25: no exponents for mode 0
        assert!(v.radial_exponents.iter().all(|e| e.mode != 0));
        for e in &v.radial_exponents {
            assert!(e.gamma_plus >= e.gamma_minus);
        }
    }

    #[test]
    fn threshold_monotone_in_dimension() {
        // −(n−2)²/4 strictly decreases with n, so for a fixed spectrum a
        // strictly stable verdict can never flip to unstable in higher
        // dimension.
        let mut prev = f64::INFINITY;
        for n in 3..=12 {
            let half = (n as f64 - 2.0) / 2.0;
            let thr = -half * half;
            assert!(thr < prev);
            prev = thr;
        }
        let mu1 = -6.0;
        for n in 7..=12 {
            let half = (n as f64 - 2.0) / 2.0;
            if n >= 7 {
                assert!(mu1 > -half * half, "stability must persist at n = {n}");
            }
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let mut cone = MinimalCone::product(2, 3);
        cone.ambient_dim = 9;
        let spec = product_link_spectrum(2, 3, 2).unwrap();
        assert!(classify_stability(&cone, &spec).is_err());
    }

    #[test]
    fn flat_torus_zero_potential() {
        let link = MeshedLink {
            mesh: flat_torus_mesh(8, 1.0, 1.0).unwrap(),
            second_fundamental_sq: vec![0.0; 64],
        };
        let s = meshed_link_spectrum(&link, 3).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-10);
    }

    #[test]
    fn flat_torus_constant_shift() {
        let link = MeshedLink {
            mesh: flat_torus_mesh(8, 1.0, 1.0).unwrap(),
            second_fundamental_sq: vec![2.0; 64],
        };
        let s = meshed_link_spectrum(&link, 1).unwrap();
        assert!((s.eigenvalues[0] + 2.0).abs() < 1e-10);
    }

    #[test]
    fn clifford_numeric_matches_closed_form() {
        let link = clifford_torus_link(12).unwrap();
        let s = meshed_link_spectrum(&link, 2).unwrap();
        assert!((s.eigenvalues[0] + 2.0).abs() < 1e-2);
        let closed = product_link_spectrum(1, 1, 2).unwrap();
        assert!((s.eigenvalues[0] - closed.eigenvalues[0]).abs() < 1e-2);
    }
}
