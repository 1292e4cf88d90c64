use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geometry::region::{Cycle, Region};
use crate::geometry::TriangulatedSurface;

/// Which half of the collar a band belongs to, relative to Σ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollarSide {
    /// Rings with index below Σ's.
    Minus,
    /// Rings with index above Σ's.
    Plus,
}

/// A banded tubular neighbourhood of Σ: an ordered stack of combinatorially
/// isomorphic rings realising Γ × {t_0, ..., t_k}, with Σ strictly between the
/// two boundary rings. All surgery acts on this structure.
#[derive(Debug, Clone)]
pub struct Collar {
    /// rings[i][j] is a vertex id; the j-alignment is consistent across rings
    /// (rings[i][j] and rings[i+1][j] are joined by a longitudinal edge).
    rings: Vec<Vec<usize>>,
    sigma_index: usize,
    /// fibre_edges[i][j]: edge (rings[i][j], rings[i][j+1]).
    fibre_edges: Vec<Vec<usize>>,
    /// longitudinal_edges[g][j]: edge (rings[g][j], rings[g+1][j]).
    longitudinal_edges: Vec<Vec<usize>>,
    /// diagonal_edges[g][j]: the diagonal of quad j in gap g.
    diagonal_edges: Vec<Vec<usize>>,
    /// Length of each gap (uniform across the ring by the product invariant).
    gap_lengths: Vec<f64>,
    /// Per-side collar width ε (equal on both sides).
    epsilon: f64,
}

impl Collar {
    /// Assemble a collar from explicit rings. Validates the product structure.
    pub fn from_rings(
        surface: &TriangulatedSurface,
        rings: Vec<Vec<usize>>,
        sigma_index: usize,
    ) -> Result<Self> {
        if rings.len() < 3 {
            return Err(Error::Structure("collar needs at least three rings".into()));
        }
        if sigma_index == 0 || sigma_index + 1 >= rings.len() {
            return Err(Error::Structure(
                "Σ must lie strictly between the collar boundary rings".into(),
            ));
        }
        let m = rings[0].len();
        if m < 3 {
            return Err(Error::Structure("collar rings need at least three vertices".into()));
        }
        let mut seen = HashSet::new();
        for ring in &rings {
            if ring.len() != m {
                return Err(Error::Structure("collar rings have mismatched sizes".into()));
            }
            for &v in ring {
                if !seen.insert(v) {
                    return Err(Error::Structure(format!(
                        "collar rings are not pairwise disjoint (vertex {v})"
                    )));
                }
            }
        }

        let mut fibre_edges = Vec::with_capacity(rings.len());
        for ring in &rings {
            let mut es = Vec::with_capacity(m);
            for j in 0..m {
                es.push(surface.edge_id_checked(ring[j], ring[(j + 1) % m])?);
            }
            fibre_edges.push(es);
        }

        let mut longitudinal_edges = Vec::new();
        let mut diagonal_edges = Vec::new();
        let mut gap_lengths = Vec::new();
        for g in 0..rings.len() - 1 {
            let (lo, hi) = (&rings[g], &rings[g + 1]);
            let mut longs = Vec::with_capacity(m);
            for j in 0..m {
                longs.push(surface.edge_id_checked(lo[j], hi[j]).map_err(|_| {
                    Error::Structure(format!(
                        "collar is not a product band: no longitudinal edge at gap {g}, fibre {j}"
                    ))
                })?);
            }
            // Diagonal orientation is uniform within a gap: quad j carries either
            // (lo[j], hi[j+1]) or (lo[j+1], hi[j]).
            let plus = surface.edge_id(lo[0], hi[1 % m]).is_some();
            let minus = surface.edge_id(lo[1 % m], hi[0]).is_some();
            let offset = match (plus, minus) {
                (true, false) => 1,
                (false, true) => 0,
                _ => {
                    return Err(Error::Structure(format!(
                        "collar gap {g} has ambiguous or missing diagonals"
                    )))
                }
            };
            let mut diags = Vec::with_capacity(m);
            for j in 0..m {
                let e = if offset == 1 {
                    surface.edge_id_checked(lo[j], hi[(j + 1) % m])
                } else {
                    surface.edge_id_checked(lo[(j + 1) % m], hi[j])
                };
                diags.push(e.map_err(|_| {
                    Error::Structure(format!(
                        "collar is not a product band: missing diagonal at gap {g}, quad {j}"
                    ))
                })?);
            }
            // Longitudinal lengths must agree within each gap for the band
            // coordinate to be well defined.
            let l0 = surface.edge_length(longs[0]);
            for &e in &longs {
                let l = surface.edge_length(e);
                if (l - l0).abs() > 1e-6 * l0.max(1.0) {
                    return Err(Error::Structure(format!(
                        "collar gap {g} has non-uniform longitudinal lengths ({l0} vs {l})"
                    )));
                }
            }
            longitudinal_edges.push(longs);
            diagonal_edges.push(diags);
            gap_lengths.push(l0);
        }

        let eps_minus: f64 = gap_lengths[..sigma_index].iter().sum();
        let eps_plus: f64 = gap_lengths[sigma_index..].iter().sum();
        if (eps_minus - eps_plus).abs() > 1e-6 * eps_minus.max(eps_plus) {
            return Err(Error::Structure(format!(
                "collar sides have different widths: {eps_minus} vs {eps_plus}"
            )));
        }

        Ok(Collar {
            rings,
            sigma_index,
            fibre_edges,
            longitudinal_edges,
            diagonal_edges,
            gap_lengths,
            epsilon: eps_minus,
        })
    }

    /// Detect the maximal symmetric product band around a separating cycle.
    /// Meshes without a product band structure around Σ are rejected.
    pub fn around(surface: &TriangulatedSurface, sigma: &Cycle) -> Result<Self> {
        let loop_vertices = sigma.vertex_loop(surface)?;
        let (separates, side_a, _side_b) = surface.separates(sigma)?;
        if !separates {
            return Err(Error::Structure("Σ does not separate the mesh".into()));
        }
        let mask_a = side_a.face_mask(surface.face_count());

        let grow = |toward_a: bool| -> Vec<Vec<usize>> {
            let mut rings: Vec<Vec<usize>> = Vec::new();
            let mut prev: Vec<usize> = loop_vertices.clone();
            let mut used: HashSet<usize> = loop_vertices.iter().copied().collect();
            let mut prev_gap_faces: HashSet<usize> = HashSet::new();
            loop {
                match next_ring(surface, &prev, toward_a, &mask_a, &rings, &prev_gap_faces, &mut used) {
                    Some((ring, gap_faces)) => {
                        prev_gap_faces = gap_faces;
                        prev = ring.clone();
                        rings.push(ring);
                    }
                    None => break,
                }
            }
            rings
        };

        let rings_a = grow(true);
        let rings_b = grow(false);
        let b = rings_a.len().min(rings_b.len());
        if b == 0 {
            return Err(Error::Structure(
                "no product band found around Σ on at least one side".into(),
            ));
        }
        let mut rings: Vec<Vec<usize>> = Vec::with_capacity(2 * b + 1);
        for i in (0..b).rev() {
            rings.push(rings_a[i].clone());
        }
        rings.push(loop_vertices);
        for ring in rings_b.iter().take(b) {
            rings.push(ring.clone());
        }
        Collar::from_rings(surface, rings, b)
    }

    pub fn ring_count(&self) -> usize {
        self.rings.len()
    }
    pub fn fibre_count(&self) -> usize {
        self.rings[0].len()
    }
    pub fn sigma_index(&self) -> usize {
        self.sigma_index
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn gap_count(&self) -> usize {
        self.gap_lengths.len()
    }
    pub fn gap_length(&self, g: usize) -> f64 {
        self.gap_lengths[g]
    }
    pub fn rings(&self) -> &[Vec<usize>] {
        &self.rings
    }
    pub fn fibre_edge(&self, ring: usize, j: usize) -> usize {
        self.fibre_edges[ring][j]
    }
    pub fn fibre_edges_of_ring(&self, ring: usize) -> &[usize] {
        &self.fibre_edges[ring]
    }
    pub fn longitudinal_edges_of_gap(&self, g: usize) -> &[usize] {
        &self.longitudinal_edges[g]
    }
    pub fn diagonal_edges_of_gap(&self, g: usize) -> &[usize] {
        &self.diagonal_edges[g]
    }

    /// Bands per side (minus, plus).
    pub fn bands_per_side(&self) -> (usize, usize) {
        (self.sigma_index, self.gap_lengths.len() - self.sigma_index)
    }

    pub fn sigma_cycle(&self) -> Cycle {
        Cycle::new(self.fibre_edges[self.sigma_index].clone())
    }

    pub fn ring_cycle(&self, ring: usize) -> Cycle {
        Cycle::new(self.fibre_edges[ring].clone())
    }

    pub fn side_of_gap(&self, g: usize) -> CollarSide {
        if g < self.sigma_index {
            CollarSide::Minus
        } else {
            CollarSide::Plus
        }
    }

    /// Collar coordinate of a ring, measured from its side's outer boundary
    /// (u = 0 at the boundary ring, u = ε at Σ). Σ reports ε.
    pub fn ring_u(&self, ring: usize) -> f64 {
        if ring <= self.sigma_index {
            self.gap_lengths[..ring].iter().sum()
        } else {
            self.gap_lengths[ring..].iter().sum()
        }
    }

    /// Collar coordinate of a gap midpoint on its own side.
    pub fn gap_mid_u(&self, g: usize) -> f64 {
        let (u0, u1) = (self.ring_u(g), self.ring_u(g + 1));
        0.5 * (u0 + u1)
    }

    /// Faces of gap g (the 2m triangles of the band).
    pub fn gap_faces(&self, surface: &TriangulatedSurface, g: usize) -> Vec<usize> {
        let mut faces: Vec<usize> = self.diagonal_edges[g]
            .iter()
            .flat_map(|&e| surface.edge_face_pair(e))
            .collect();
        faces.sort_unstable();
        faces.dedup();
        faces
    }

    /// All faces contained in the collar band.
    pub fn all_faces(&self, surface: &TriangulatedSurface) -> Region {
        let mut faces = Vec::new();
        for g in 0..self.gap_count() {
            faces.extend(self.gap_faces(surface, g));
        }
        Region::new(faces)
    }

    /// All vertices of the collar rings.
    pub fn all_vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.rings.iter().flatten().copied().collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// True when every aligned fibre edge has the same length in all rings,
    /// i.e. the band is already cylindrical and interpolation is the identity.
    pub fn is_cylindrical(&self, surface: &TriangulatedSurface) -> bool {
        let m = self.fibre_count();
        for j in 0..m {
            let l0 = surface.edge_length(self.fibre_edges[0][j]);
            for es in &self.fibre_edges {
                let l = surface.edge_length(es[j]);
                if (l - l0).abs() > 1e-12 * l0.max(1.0) {
                    return false;
                }
            }
        }
        true
    }

    /// Signed collar distance of a ring from Σ: negative on the minus side,
    /// positive on the plus side, zero at Σ.
    pub fn ring_signed_distance(&self, ring: usize) -> f64 {
        let d = self.epsilon - self.ring_u(ring);
        if ring < self.sigma_index {
            -d
        } else if ring == self.sigma_index {
            0.0
        } else {
            d
        }
    }
}

/// Grow one ring outward from `prev`. Returns the aligned next ring and the
/// faces of the crossed gap, or None when the product structure ends.
fn next_ring(
    surface: &TriangulatedSurface,
    prev: &[usize],
    toward_a: bool,
    mask_a: &[bool],
    grown: &[Vec<usize>],
    prev_gap_faces: &HashSet<usize>,
    used: &mut HashSet<usize>,
) -> Option<(Vec<usize>, HashSet<usize>)> {
    let m = prev.len();
    // Apex of the fibre-adjacent face on the requested side of each fibre edge.
    let mut apexes = Vec::with_capacity(m);
    let mut gap_faces = HashSet::new();
    for j in 0..m {
        let e = surface.edge_id(prev[j], prev[(j + 1) % m])?;
        let side_face = if grown.is_empty() && prev_gap_faces.is_empty() {
            // First step away from Σ: pick by the separation mask.
            surface
                .edge_face_pair(e)
                .into_iter()
                .find(|&f| mask_a[f] == toward_a)?
        } else {
            // Later steps: pick the face not in the previous gap.
            surface
                .edge_face_pair(e)
                .into_iter()
                .find(|&f| !prev_gap_faces.contains(&f))?
        };
        gap_faces.insert(side_face);
        let apex = *surface.faces()[side_face]
            .iter()
            .find(|&&v| v != prev[j] && v != prev[(j + 1) % m])?;
        apexes.push(apex);
    }
    let distinct: HashSet<usize> = apexes.iter().copied().collect();
    if distinct.len() != m {
        return None; // fan cap or broken band
    }
    if distinct.iter().any(|v| used.contains(v)) {
        return None; // wrapped around
    }
    // Align: next[j] is the longitudinal neighbour of prev[j]. Each band
    // vertex touches the next ring via one longitudinal and one diagonal edge;
    // in a product metric the longitudinal one is strictly shorter.
    let mut next = Vec::with_capacity(m);
    for &v in prev.iter().take(m) {
        let mut touching: Vec<(f64, usize)> = distinct
            .iter()
            .copied()
            .filter_map(|w| surface.edge_id(v, w).map(|e| (surface.edge_length(e), w)))
            .collect();
        touching.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        match touching.as_slice() {
            [(la, w), (lb, _), ..] if la < lb => next.push(*w),
            [(_, w)] => next.push(*w),
            _ => return None,
        }
    }
    let aligned: HashSet<usize> = next.iter().copied().collect();
    if aligned.len() != m {
        return None;
    }
    // Ring closure: fibre edges must exist on the new ring.
    for j in 0..m {
        surface.edge_id(next[j], next[(j + 1) % m])?;
    }
    // Complete the gap face set with the diagonal-adjacent triangles.
    for j in 0..m {
        let diag = surface
            .edge_id(prev[j], next[(j + 1) % m])
            .or_else(|| surface.edge_id(prev[(j + 1) % m], next[j]))?;
        for f in surface.edge_face_pair(diag) {
            gap_faces.insert(f);
        }
    }
    if gap_faces.len() != 2 * m {
        return None;
    }
    for &v in &next {
        used.insert(v);
    }
    Some((next, gap_faces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;

    #[test]
    fn dumbbell_collar_structure() {
        let d = fixtures::dumbbell(0.5, 9, 16).unwrap();
        let c = &d.collar;
        assert_eq!(c.ring_count(), 9);
        assert_eq!(c.fibre_count(), 16);
        assert_eq!(c.sigma_index(), 4);
        assert_eq!(c.bands_per_side(), (4, 4));
        let (sep, _, _) = d.surface.separates(&d.sigma).unwrap();
        assert!(sep);
        // Boundary rings on opposite sides of Σ.
        let rim_a = c.ring_cycle(0);
        let rim_b = c.ring_cycle(c.ring_count() - 1);
        let (_, sa, _) = d.surface.separates(&d.sigma).unwrap();
        let mask = sa.face_mask(d.surface.face_count());
        let side_of = |cycle: &Cycle| {
            let e = cycle.edges()[0];
            let fs = d.surface.edge_face_pair(e);
            (mask[fs[0]], mask[fs[1]])
        };
        let (a0, a1) = side_of(&rim_a);
        let (b0, b1) = side_of(&rim_b);
        // rim cycles are interior to one side each, and the sides differ
        assert_eq!(a0, a1);
        assert_eq!(b0, b1);
        assert_ne!(a0, b0);
    }

    #[test]
    fn detection_matches_builder() {
        let d = fixtures::dumbbell(0.5, 9, 8).unwrap();
        let detected = Collar::around(&d.surface, &d.sigma).unwrap();
        assert_eq!(detected.ring_count(), d.collar.ring_count());
        assert_eq!(detected.sigma_index(), d.collar.sigma_index());
        assert!((detected.epsilon() - d.collar.epsilon()).abs() < 1e-12);
        assert!(detected.is_cylindrical(&d.surface));
    }

    #[test]
    fn collar_coordinates() {
        let d = fixtures::dumbbell(0.5, 13, 6).unwrap();
        let c = &d.collar;
        assert_eq!(c.bands_per_side(), (6, 6));
        assert!((c.epsilon() - 3.0).abs() < 1e-12);
        assert!((c.ring_u(0) - 0.0).abs() < 1e-12);
        assert!((c.ring_u(6) - 3.0).abs() < 1e-12);
        assert!((c.ring_u(12) - 0.0).abs() < 1e-12);
        assert!((c.gap_mid_u(0) - 0.25).abs() < 1e-12);
        assert!((c.gap_mid_u(11) - 0.25).abs() < 1e-12);
        assert!((c.ring_signed_distance(5) + 0.5).abs() < 1e-12);
        assert!((c.ring_signed_distance(7) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn band_region_has_two_rim_components() {
        let d = fixtures::dumbbell(0.5, 9, 8).unwrap();
        let band = d.collar.all_faces(&d.surface);
        let comps = d.surface.boundary_components(&band).unwrap();
        assert_eq!(comps.len(), 2);
        for c in &comps {
            assert!((c.length - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn non_separating_cycle_rejected() {
        let s = fixtures::moebius_torus();
        let edges: Vec<usize> = (0..7).map(|i| s.edge_id(i, (i + 1) % 7).unwrap()).collect();
        let cycle = Cycle::new(edges);
        assert!(Collar::around(&s, &cycle).is_err());
    }
}
