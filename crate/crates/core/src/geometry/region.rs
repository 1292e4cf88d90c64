use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::TriangulatedSurface;

/// A candidate enclosed set: a subset of face indices in canonical (sorted,
/// deduplicated) form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Region {
    faces: Vec<usize>,
}

impl Region {
    pub fn new(mut faces: Vec<usize>) -> Self {
        faces.sort_unstable();
        faces.dedup();
        Region { faces }
    }

    pub fn empty() -> Self {
        Region { faces: Vec::new() }
    }

    pub fn full(surface: &TriangulatedSurface) -> Self {
        Region {
            faces: (0..surface.face_count()).collect(),
        }
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        Region {
            faces: mask
                .iter()
                .enumerate()
                .filter_map(|(i, &b)| b.then_some(i))
                .collect(),
        }
    }

    pub fn faces(&self) -> &[usize] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, face: usize) -> bool {
        self.faces.binary_search(&face).is_ok()
    }

    pub fn face_mask(&self, n_faces: usize) -> Vec<bool> {
        let mut mask = vec![false; n_faces];
        for &f in &self.faces {
            if f < n_faces {
                mask[f] = true;
            }
        }
        mask
    }

    pub fn complement(&self, surface: &TriangulatedSurface) -> Region {
        let mask = self.face_mask(surface.face_count());
        Region {
            faces: (0..surface.face_count()).filter(|&f| !mask[f]).collect(),
        }
    }
}

/// A closed edge loop (or union of loops) stored as canonical edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    edges: Vec<usize>,
}

impl Cycle {
    pub fn new(mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Cycle { edges }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn total_length(&self, surface: &TriangulatedSurface) -> f64 {
        self.edges.iter().map(|&e| surface.edge_length(e)).sum()
    }

    /// From vertex pairs, resolving each against the surface's edge table.
    pub fn from_vertex_pairs(surface: &TriangulatedSurface, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut edges = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            edges.push(surface.edge_id_checked(a, b)?);
        }
        Ok(Cycle::new(edges))
    }

    pub fn to_vertex_pairs(&self, surface: &TriangulatedSurface) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&e| surface.edges()[e]).collect()
    }

    /// Every vertex on the loop must have even incidence with loop edges.
    pub fn validate(&self, surface: &TriangulatedSurface) -> Result<()> {
        use std::collections::HashMap;
        let mut deg: HashMap<usize, usize> = HashMap::new();
        for &e in &self.edges {
            if e >= surface.edge_count() {
                return Err(Error::input(format!("edge id {e} out of range")));
            }
            let (a, b) = surface.edges()[e];
            *deg.entry(a).or_insert(0) += 1;
            *deg.entry(b).or_insert(0) += 1;
        }
        for (v, d) in deg {
            if d % 2 != 0 {
                return Err(Error::Structure(format!(
                    "cycle is not closed: vertex {v} has odd incidence {d}"
                )));
            }
        }
        Ok(())
    }

    /// The boundary cycle of a region (all cut edges, possibly several loops).
    pub fn boundary_of(surface: &TriangulatedSurface, region: &Region) -> Result<Self> {
        Ok(Cycle::new(surface.boundary_edges(region)?))
    }

    /// Orders the loop as a closed vertex walk. Fails unless the cycle is one
    /// simple loop.
    pub fn vertex_loop(&self, surface: &TriangulatedSurface) -> Result<Vec<usize>> {
        use std::collections::HashMap;
        if self.edges.is_empty() {
            return Err(Error::input("empty cycle"));
        }
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        for &e in &self.edges {
            let (a, b) = surface.edges()[e];
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        for (v, ns) in &adj {
            if ns.len() != 2 {
                return Err(Error::Structure(format!(
                    "cycle is not a simple loop at vertex {v}"
                )));
            }
        }
        let start = *adj.keys().min().unwrap();
        let mut walk = vec![start];
        // Deterministic orientation: step to the smaller neighbour first.
        let mut prev = start;
        let mut cur = {
            let mut ns = adj[&start].clone();
            ns.sort_unstable();
            ns[0]
        };
        while cur != start {
            walk.push(cur);
            let ns = &adj[&cur];
            let next = if ns[0] == prev { ns[1] } else { ns[0] };
            prev = cur;
            cur = next;
        }
        if walk.len() != adj.len() {
            return Err(Error::Structure("cycle has several loops".into()));
        }
        Ok(walk)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;

    #[test]
    fn region_canonical_form() {
        let r = Region::new(vec![3, 1, 1, 0]);
        assert_eq!(r.faces(), &[0, 1, 3]);
    }

    #[test]
    fn boundary_roundtrip_on_octahedron() {
        let s = fixtures::octahedron();
        let region = Region::new(vec![0, 1, 2, 3]);
        let cycle = Cycle::boundary_of(&s, &region).unwrap();
        let (sep, a, b) = s.separates(&cycle).unwrap();
        assert!(sep);
        let side = if a == region { &a } else { &b };
        assert_eq!(side, &region);
        assert_eq!(Cycle::boundary_of(&s, side).unwrap(), cycle);
    }

    #[test]
    fn vertex_loop_is_closed_walk() {
        let s = fixtures::octahedron();
        let cycle = Cycle::boundary_of(&s, &Region::new(vec![0, 1, 2, 3])).unwrap();
        let walk = cycle.vertex_loop(&s).unwrap();
        assert_eq!(walk.len(), 4);
    }
}
