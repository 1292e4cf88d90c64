//! Mesh generators: the dumbbell family used by the stretching experiments and
//! a few small closed meshes with hand-checkable measurements.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::collar::Collar;
use crate::geometry::product_diagonal;
use crate::geometry::region::Cycle;
use crate::geometry::TriangulatedSurface;

/// A dumbbell mesh together with its neck cycle Σ and the collar band.
#[derive(Debug, Clone)]
pub struct Dumbbell {
    pub surface: TriangulatedSurface,
    pub sigma: Cycle,
    pub collar: Collar,
}

/// Regular unit tetrahedron: 4 faces, all edges length 1.
pub fn tetrahedron() -> TriangulatedSurface {
    let faces = vec![[0, 1, 2], [0, 3, 1], [1, 3, 2], [2, 3, 0]];
    let mut lengths = HashMap::new();
    for e in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
        lengths.insert(e, 1.0);
    }
    TriangulatedSurface::from_edge_lengths(faces, &lengths).unwrap()
}

/// Regular unit octahedron: 8 faces, all edges length 1. Vertices: 0 north,
/// 1-4 equator, 5 south.
pub fn octahedron() -> TriangulatedSurface {
    let faces = vec![
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 1],
        [5, 2, 1],
        [5, 3, 2],
        [5, 4, 3],
        [5, 1, 4],
    ];
    let mut lengths = HashMap::new();
    for f in &faces {
        for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            lengths.insert((a.min(b), a.max(b)), 1.0);
        }
    }
    TriangulatedSurface::from_edge_lengths(faces, &lengths).unwrap()
}

/// The 7-vertex Möbius triangulation of the torus (14 faces, 21 unit edges).
pub fn moebius_torus() -> TriangulatedSurface {
    let mut faces = Vec::new();
    for i in 0..7usize {
        faces.push([i, (i + 1) % 7, (i + 3) % 7]);
        faces.push([i, (i + 2) % 7, (i + 3) % 7]);
    }
    let mut lengths = HashMap::new();
    for f in &faces {
        for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            lengths.insert((a.min(b), a.max(b)), 1.0);
        }
    }
    TriangulatedSurface::from_edge_lengths(faces, &lengths).unwrap()
}

/// How the ends of the neck band are closed off.
#[derive(Debug, Clone, Copy)]
enum Cap {
    /// A fan to an apex with the given lateral edge length.
    Fan(f64),
    /// Fill the ring with a single triangle (rings of size 3 only).
    Fill,
}

struct NeckBuilder {
    faces: Vec<[usize; 3]>,
    lengths: HashMap<(usize, usize), f64>,
    next_vertex: usize,
    rings: Vec<Vec<usize>>,
}

impl NeckBuilder {
    fn new() -> Self {
        NeckBuilder {
            faces: Vec::new(),
            lengths: HashMap::new(),
            next_vertex: 0,
            rings: Vec::new(),
        }
    }

    fn edge(&mut self, a: usize, b: usize, len: f64) {
        self.lengths.insert((a.min(b), a.max(b)), len);
    }

    fn new_ring(&mut self, m: usize, fibre: f64) -> Vec<usize> {
        let ring: Vec<usize> = (0..m).map(|j| self.next_vertex + j).collect();
        self.next_vertex += m;
        for j in 0..m {
            self.edge(ring[j], ring[(j + 1) % m], fibre);
        }
        self.rings.push(ring.clone());
        ring
    }

    /// Product band between the last ring and a new ring of fibre length
    /// `fibre_hi`, with longitudinal spacing `long`.
    fn add_band(&mut self, m: usize, fibre_lo: f64, fibre_hi: f64, long: f64) -> Vec<usize> {
        let lo = self.rings.last().unwrap().clone();
        let hi = self.new_ring(m, fibre_hi);
        let diag = product_diagonal(fibre_lo, fibre_hi, long);
        for j in 0..m {
            let jn = (j + 1) % m;
            self.edge(lo[j], hi[j], long);
            self.edge(lo[j], hi[jn], diag);
            self.faces.push([lo[j], hi[j], hi[jn]]);
            self.faces.push([lo[j], hi[jn], lo[jn]]);
        }
        hi
    }

    fn add_cap(&mut self, ring: &[usize], fibre: f64, cap: Cap) -> Result<()> {
        match cap {
            Cap::Fan(lateral) => {
                if fibre >= 2.0 * lateral {
                    return Err(Error::Structure(format!(
                        "cap fan degenerate: fibre edge {fibre} vs lateral {lateral}"
                    )));
                }
                let apex = self.next_vertex;
                self.next_vertex += 1;
                for (j, &v) in ring.iter().enumerate() {
                    let w = ring[(j + 1) % ring.len()];
                    self.edge(apex, v, lateral);
                    self.faces.push([apex, v, w]);
                }
            }
            Cap::Fill => {
                if ring.len() != 3 {
                    return Err(Error::Structure(
                        "filled cap requires rings of exactly three vertices".into(),
                    ));
                }
                self.faces.push([ring[0], ring[1], ring[2]]);
            }
        }
        Ok(())
    }

    fn finish(self, neck_rings: std::ops::Range<usize>, sigma_offset: usize) -> Result<Dumbbell> {
        let surface = TriangulatedSurface::from_edge_lengths(self.faces, &self.lengths)?;
        let collar_rings: Vec<Vec<usize>> = self.rings[neck_rings].to_vec();
        let collar = Collar::from_rings(&surface, collar_rings, sigma_offset)?;
        let sigma = collar.sigma_cycle();
        Ok(Dumbbell {
            surface,
            sigma,
            collar,
        })
    }
}

fn check_dumbbell_params(neck_fibre_size: f64, neck_bands: usize, cap_resolution: usize) -> Result<()> {
    if !(neck_fibre_size > 0.0) {
        return Err(Error::input("neck fibre size must be positive"));
    }
    if neck_bands < 3 || neck_bands % 2 == 0 {
        return Err(Error::input(
            "neck_bands must be an odd ring count of at least 3 so Σ is the middle ring",
        ));
    }
    if cap_resolution < 3 {
        return Err(Error::input("cap_resolution must be at least 3"));
    }
    Ok(())
}

/// Two fan caps joined by a cylindrical product band of `neck_bands` rings,
/// each of total circumference `neck_fibre_size`; the middle ring is Σ. Each
/// collar side has length 3 in normalized units, so the standard pipeline has
/// ℓ = 1.
pub fn dumbbell(neck_fibre_size: f64, neck_bands: usize, cap_resolution: usize) -> Result<Dumbbell> {
    dumbbell_with(neck_fibre_size, neck_bands, cap_resolution, 3.0, 1.0)
}

/// `dumbbell` with explicit per-side collar width and cap lateral length.
pub fn dumbbell_with(
    neck_fibre_size: f64,
    neck_bands: usize,
    cap_resolution: usize,
    half_length: f64,
    cap_lateral: f64,
) -> Result<Dumbbell> {
    check_dumbbell_params(neck_fibre_size, neck_bands, cap_resolution)?;
    if !(half_length > 0.0) {
        return Err(Error::input("collar half length must be positive"));
    }
    let m = cap_resolution;
    let f = neck_fibre_size / m as f64;
    let b = (neck_bands - 1) / 2;
    let long = half_length / b as f64;

    let mut nb = NeckBuilder::new();
    let first = nb.new_ring(m, f);
    for _ in 1..neck_bands {
        nb.add_band(m, f, f, long);
    }
    let last = nb.rings.last().unwrap().clone();
    nb.add_cap(&first, f, Cap::Fan(cap_lateral))?;
    nb.add_cap(&last, f, Cap::Fan(cap_lateral))?;
    nb.finish(0..neck_bands, b)
}

/// Like `dumbbell` but the ends are closed by single triangles instead of fans
/// (requires `cap_resolution == 3`). Keeps the face count minimal for
/// exhaustive solving.
pub fn triangle_cap_dumbbell(
    neck_fibre_size: f64,
    neck_bands: usize,
    half_length: f64,
) -> Result<Dumbbell> {
    check_dumbbell_params(neck_fibre_size, neck_bands, 3)?;
    let m = 3;
    let f = neck_fibre_size / m as f64;
    let b = (neck_bands - 1) / 2;
    let long = half_length / b as f64;

    let mut nb = NeckBuilder::new();
    let first = nb.new_ring(m, f);
    for _ in 1..neck_bands {
        nb.add_band(m, f, f, long);
    }
    let last = nb.rings.last().unwrap().clone();
    nb.add_cap(&first, f, Cap::Fill)?;
    nb.add_cap(&last, f, Cap::Fill)?;
    nb.finish(0..neck_bands, b)
}

/// Five rings with uneven band spacing: a long outer gap and a short gap next
/// to Σ on each side (28 faces). With the standard cutoff the outer gaps carry
/// the stretch while the rings adjacent to Σ stay put, which keeps the mesh
/// exhaustively solvable with competitor rings strictly inside the collar.
/// The caps differ (a filled triangle vs a fan) so parallel ring cuts never
/// tie in volume.
pub fn uneven_dumbbell(
    neck_fibre_size: f64,
    outer_gap: f64,
    inner_gap: f64,
) -> Result<Dumbbell> {
    if !(neck_fibre_size > 0.0) || !(outer_gap > 0.0) || !(inner_gap > 0.0) {
        return Err(Error::input("dumbbell lengths must be positive"));
    }
    let m = 3;
    let f = neck_fibre_size / m as f64;
    let mut nb = NeckBuilder::new();
    let first = nb.new_ring(m, f);
    nb.add_band(m, f, f, outer_gap);
    nb.add_band(m, f, f, inner_gap);
    nb.add_band(m, f, f, inner_gap);
    nb.add_band(m, f, f, outer_gap);
    let last = nb.rings.last().unwrap().clone();
    nb.add_cap(&first, f, Cap::Fill)?;
    nb.add_cap(&last, f, Cap::Fan(0.8))?;
    nb.finish(0..5, 2)
}

/// A dumbbell whose second cap is a "balloon on a string": behind the far end
/// of the neck sits a narrow ring (circumference `string_ratio` times the
/// neck's) closed by a fan whose area equals the enclosed volume of Ω at the
/// base metric. Unstretched, cutting the string beats cutting Σ at volume
/// Vol(Ω); once the neck is stretched the balloon no longer matches the target
/// volume and Σ takes over.
pub fn balloon_dumbbell(
    neck_fibre_size: f64,
    neck_bands: usize,
    cap_resolution: usize,
    string_ratio: f64,
    half_length: f64,
    cap_lateral: f64,
) -> Result<Dumbbell> {
    check_dumbbell_params(neck_fibre_size, neck_bands, cap_resolution)?;
    if !(0.0 < string_ratio && string_ratio < 1.0) {
        return Err(Error::input("string_ratio must lie in (0, 1)"));
    }
    let m = cap_resolution;
    let f = neck_fibre_size / m as f64;
    let b = (neck_bands - 1) / 2;
    let long = half_length / b as f64;
    let f2 = string_ratio * f;
    // Keeps the trapezoid quads of the shrinking band non-degenerate.
    let l2 = {
        let min = (f * f - f2 * f2) / (4.0 * f2);
        (0.6 * f).max(1.25 * min)
    };

    let mut nb = NeckBuilder::new();
    let first = nb.new_ring(m, f);
    for _ in 1..neck_bands {
        nb.add_band(m, f, f, long);
    }
    nb.add_cap(&first, f, Cap::Fan(cap_lateral))?;

    // Vol(Ω): the first cap plus one side of the neck band at the base metric.
    let cap1_area = {
        let face = crate::geometry::surface::triangle_area(cap_lateral, cap_lateral, f)?;
        m as f64 * face
    };
    let gap_face = crate::geometry::surface::triangle_area(f, long, product_diagonal(f, f, long))?;
    let omega_volume = cap1_area + (b * 2 * m) as f64 * gap_face;

    // Balloon fan sized so its total area equals Vol(Ω).
    let face_target = omega_volume / m as f64;
    let s2 = 0.5 * (f2 * f2 + 16.0 * face_target * face_target / (f2 * f2)).sqrt();

    nb.add_band(m, f, f2, l2);
    let string_ring = nb.rings.last().unwrap().clone();
    nb.add_cap(&string_ring, f2, Cap::Fan(s2))?;
    nb.finish(0..neck_bands, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::region::Region;

    #[test]
    fn spec_dumbbell_shape() {
        let d = dumbbell(0.5, 9, 16).unwrap();
        let (sep, _, _) = d.surface.separates(&d.sigma).unwrap();
        assert!(sep);
        assert!((d.sigma.total_length(&d.surface) - 0.5).abs() < 1e-15);
        assert_eq!(d.surface.face_count(), 2 * 16 + 8 * 2 * 16);
    }

    #[test]
    fn coarse_dumbbell_is_brute_forceable() {
        let d = dumbbell(0.5, 3, 3).unwrap();
        assert_eq!(d.surface.face_count(), 18);
        let (sep, a, b) = d.surface.separates(&d.sigma).unwrap();
        assert!(sep);
        assert_eq!(a.len() + b.len(), 18);
    }

    #[test]
    fn triangle_cap_dumbbell_counts() {
        let d = triangle_cap_dumbbell(1.0, 5, 3.0).unwrap();
        assert_eq!(d.surface.face_count(), 2 + 4 * 6);
        assert!(d.collar.is_cylindrical(&d.surface));
    }

    #[test]
    fn balloon_equalizes_omega_volume() {
        let d = balloon_dumbbell(1.0, 3, 3, 0.6, 3.0, 1.0).unwrap();
        assert_eq!(d.surface.face_count(), 24);
        let (sep, a, b) = d.surface.separates(&d.sigma).unwrap();
        assert!(sep);
        // Ω = the plain-cap side.
        let omega = if a.contains(d.surface.face_count() - 1) { b } else { a };
        let vol = d.surface.volume(&omega).unwrap();
        // Balloon fan = the last m faces.
        let nf = d.surface.face_count();
        let fan = Region::new((nf - 3..nf).collect());
        let fan_vol = d.surface.volume(&fan).unwrap();
        assert!(
            (vol - fan_vol).abs() < 1e-9 * vol,
            "fan {fan_vol} vs omega {vol}"
        );
        // The string is cheaper than Σ.
        let fan_per = d.surface.perimeter(&fan).unwrap();
        let sigma_per = d.sigma.total_length(&d.surface);
        assert!(fan_per < sigma_per);
    }

    #[test]
    fn parameter_validation() {
        assert!(dumbbell(0.5, 4, 8).is_err());
        assert!(dumbbell(0.5, 3, 2).is_err());
        assert!(dumbbell(-1.0, 3, 3).is_err());
        // fibre too large for the default cap lateral
        assert!(dumbbell(7.0, 3, 3).is_err());
    }
}
