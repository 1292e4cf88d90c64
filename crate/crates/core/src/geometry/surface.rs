use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::region::{Cycle, Region};

/// A closed triangulated 2-manifold carrying a discrete metric as per-edge lengths.
///
/// The metric is abstract: vertex coordinates are optional and only used to
/// derive edge lengths at construction time. All measurements (perimeter,
/// volume, distances) are intrinsic.
#[derive(Debug, Clone)]
pub struct TriangulatedSurface {
    faces: Vec<[usize; 3]>,
    vertex_count: usize,
    coordinates: Option<Vec<[f64; 3]>>,
    /// Canonical edge list: sorted vertex pairs in lexicographic order.
    edges: Vec<(usize, usize)>,
    edge_lengths: Vec<f64>,
    edge_faces: Vec<[usize; 2]>,
    face_edges: Vec<[usize; 3]>,
    face_areas: Vec<f64>,
    vertex_edges: Vec<Vec<usize>>,
    edge_index: HashMap<(usize, usize), usize>,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Numerically stable Heron formula (Kahan's ordering).
pub fn triangle_area(a: f64, b: f64, c: f64) -> Result<f64> {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let [a, b, c] = s;
    if c <= 0.0 || c - (a - b) <= 0.0 {
        return Err(Error::metric(format!(
            "triangle inequality violated for edge lengths ({a}, {b}, {c})"
        )));
    }
    let t = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    Ok(0.25 * t.sqrt())
}

impl TriangulatedSurface {
    /// Build a surface from faces and an abstract metric given per edge.
    pub fn from_edge_lengths(
        faces: Vec<[usize; 3]>,
        lengths: &HashMap<(usize, usize), f64>,
    ) -> Result<Self> {
        Self::build(faces, None, |e| {
            lengths
                .get(&e)
                .copied()
                .ok_or_else(|| Error::input(format!("missing length for edge {:?}", e)))
        })
    }

    /// Build a surface from an embedding; edge lengths are Euclidean distances.
    pub fn from_coordinates(coordinates: Vec<[f64; 3]>, faces: Vec<[usize; 3]>) -> Result<Self> {
        let coords = coordinates.clone();
        Self::build(faces, Some(coordinates), |(u, v)| {
            let p = coords
                .get(u)
                .ok_or_else(|| Error::input(format!("vertex {u} out of range")))?;
            let q = coords
                .get(v)
                .ok_or_else(|| Error::input(format!("vertex {v} out of range")))?;
            let d = [(p[0] - q[0]), (p[1] - q[1]), (p[2] - q[2])];
            Ok((d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt())
        })
    }

    fn build(
        faces: Vec<[usize; 3]>,
        coordinates: Option<Vec<[f64; 3]>>,
        mut length_of: impl FnMut((usize, usize)) -> Result<f64>,
    ) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::input("mesh has no faces"));
        }
        let vertex_count = faces.iter().flatten().copied().max().unwrap() + 1;
        if let Some(c) = &coordinates {
            if c.len() < vertex_count {
                return Err(Error::input(format!(
                    "face references vertex {} but only {} coordinates given",
                    vertex_count - 1,
                    c.len()
                )));
            }
        }

        // Canonical edge enumeration.
        let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for f in &faces {
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::Structure(format!("degenerate face {:?}", f)));
            }
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                let k = edge_key(a, b);
                edge_index.entry(k).or_insert_with(|| {
                    edges.push(k);
                    edges.len() - 1
                });
            }
        }
        // Re-sort edges lexicographically so ids are independent of face order.
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by_key(|&i| edges[i]);
        let edges: Vec<(usize, usize)> = order.iter().map(|&i| edges[i]).collect();
        let mut edge_index = HashMap::with_capacity(edges.len());
        for (i, &e) in edges.iter().enumerate() {
            edge_index.insert(e, i);
        }

        let mut edge_face_lists: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
        let mut face_edges = Vec::with_capacity(faces.len());
        for (fi, f) in faces.iter().enumerate() {
            let mut fe = [0usize; 3];
            for (slot, (a, b)) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])].into_iter().enumerate()
            {
                let ei = edge_index[&edge_key(a, b)];
                edge_face_lists[ei].push(fi);
                fe[slot] = ei;
            }
            face_edges.push(fe);
        }

        // Closed manifold: every edge bounds exactly two faces.
        let mut edge_faces = Vec::with_capacity(edges.len());
        for (ei, fl) in edge_face_lists.iter().enumerate() {
            if fl.len() != 2 {
                return Err(Error::Structure(format!(
                    "edge {:?} has {} incident faces (closed manifold requires 2)",
                    edges[ei],
                    fl.len()
                )));
            }
            edge_faces.push([fl[0], fl[1]]);
        }

        let mut edge_lengths = Vec::with_capacity(edges.len());
        for &e in &edges {
            let len = length_of(e)?;
            if !(len > 0.0) || !len.is_finite() {
                return Err(Error::metric(format!("edge {:?} has length {}", e, len)));
            }
            edge_lengths.push(len);
        }

        let mut face_areas = Vec::with_capacity(faces.len());
        for fe in &face_edges {
            face_areas.push(triangle_area(
                edge_lengths[fe[0]],
                edge_lengths[fe[1]],
                edge_lengths[fe[2]],
            )?);
        }

        let mut vertex_edges = vec![Vec::new(); vertex_count];
        for (ei, &(a, b)) in edges.iter().enumerate() {
            vertex_edges[a].push(ei);
            vertex_edges[b].push(ei);
        }

        let surface = TriangulatedSurface {
            faces,
            vertex_count,
            coordinates,
            edges,
            edge_lengths,
            edge_faces,
            face_edges,
            face_areas,
            vertex_edges,
            edge_index,
        };
        surface.check_vertex_links()?;
        surface.check_connected()?;
        Ok(surface)
    }

    /// Vertex links must be single cycles: at each vertex the incident faces
    /// close into one fan.
    fn check_vertex_links(&self) -> Result<()> {
        let mut incident_faces: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count];
        for (fi, f) in self.faces.iter().enumerate() {
            for &v in f {
                incident_faces[v].push(fi);
            }
        }
        for v in 0..self.vertex_count {
            let fl = &incident_faces[v];
            if fl.is_empty() {
                return Err(Error::Structure(format!("isolated vertex {v}")));
            }
            // Walk the fan: faces adjacent iff they share an edge through v.
            let mut visited = vec![false; fl.len()];
            let mut stack = vec![0usize];
            visited[0] = true;
            let mut seen = 1;
            while let Some(i) = stack.pop() {
                let fi = fl[i];
                for (j, vis) in visited.iter_mut().enumerate() {
                    if *vis {
                        continue;
                    }
                    let fj = fl[j];
                    if self.faces_share_edge_through(fi, fj, v) {
                        *vis = true;
                        seen += 1;
                        stack.push(j);
                    }
                }
            }
            if seen != fl.len() {
                return Err(Error::Structure(format!(
                    "vertex {v} link is not a single cycle"
                )));
            }
            // Single closed fan: #edges through v equals #faces through v.
            let deg = self.vertex_edges[v].len();
            if deg != fl.len() {
                return Err(Error::Structure(format!(
                    "vertex {v} link is not closed ({deg} edges vs {} faces)",
                    fl.len()
                )));
            }
        }
        Ok(())
    }

    fn faces_share_edge_through(&self, fi: usize, fj: usize, v: usize) -> bool {
        self.face_edges[fi].iter().any(|&e| {
            let (a, b) = self.edges[e];
            (a == v || b == v) && self.face_edges[fj].contains(&e)
        })
    }

    fn check_connected(&self) -> Result<()> {
        let mut seen = vec![false; self.faces.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(f) = stack.pop() {
            for &e in &self.face_edges[f] {
                for &g in &self.edge_faces[e] {
                    if !seen[g] {
                        seen[g] = true;
                        count += 1;
                        stack.push(g);
                    }
                }
            }
        }
        if count != self.faces.len() {
            return Err(Error::Structure("mesh is not connected".into()));
        }
        Ok(())
    }

    /// Same combinatorics, new metric. Revalidates triangle inequalities.
    pub fn with_edge_lengths(&self, lengths: Vec<f64>) -> Result<Self> {
        if lengths.len() != self.edges.len() {
            return Err(Error::input(format!(
                "expected {} edge lengths, got {}",
                self.edges.len(),
                lengths.len()
            )));
        }
        for (i, &l) in lengths.iter().enumerate() {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::metric(format!(
                    "edge {:?} has length {}",
                    self.edges[i], l
                )));
            }
        }
        let mut face_areas = Vec::with_capacity(self.faces.len());
        for fe in &self.face_edges {
            face_areas.push(triangle_area(lengths[fe[0]], lengths[fe[1]], lengths[fe[2]])?);
        }
        let mut out = self.clone();
        out.edge_lengths = lengths;
        out.face_areas = face_areas;
        // A changed metric invalidates any stored embedding.
        out.coordinates = None;
        Ok(out)
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
    pub fn edge_lengths(&self) -> &[f64] {
        &self.edge_lengths
    }
    pub fn edge_length(&self, e: usize) -> f64 {
        self.edge_lengths[e]
    }
    pub fn coordinates(&self) -> Option<&[[f64; 3]]> {
        self.coordinates.as_deref()
    }
    pub fn face_area(&self, f: usize) -> f64 {
        self.face_areas[f]
    }
    pub fn face_edge_ids(&self, f: usize) -> [usize; 3] {
        self.face_edges[f]
    }
    pub fn edge_face_pair(&self, e: usize) -> [usize; 2] {
        self.edge_faces[e]
    }
    pub fn vertex_edge_ids(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&edge_key(a, b)).copied()
    }

    pub fn edge_id_checked(&self, a: usize, b: usize) -> Result<usize> {
        self.edge_id(a, b)
            .ok_or_else(|| Error::input(format!("({a}, {b}) is not an edge of the mesh")))
    }

    /// Minimum face area; half of it is the default volume quantum for solvers.
    pub fn min_face_area(&self) -> f64 {
        self.face_areas.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Total 2-dimensional volume: the sum of all face areas in index order.
    pub fn total_area(&self) -> f64 {
        self.face_areas.iter().sum()
    }

    fn check_region(&self, region: &Region) -> Result<()> {
        if let Some(&f) = region.faces().last() {
            if f >= self.faces.len() {
                return Err(Error::input(format!(
                    "region references face {f}, mesh has {}",
                    self.faces.len()
                )));
            }
        }
        Ok(())
    }

    /// Boundary edges of a region: edges with exactly one incident face inside.
    pub fn boundary_edges(&self, region: &Region) -> Result<Vec<usize>> {
        self.check_region(region)?;
        let mask = region.face_mask(self.faces.len());
        let mut out = Vec::new();
        for (ei, ef) in self.edge_faces.iter().enumerate() {
            if mask[ef[0]] != mask[ef[1]] {
                out.push(ei);
            }
        }
        Ok(out)
    }

    /// Sum of boundary edge lengths, accumulated in canonical edge order so the
    /// value is bit-identical for a region and its complement.
    pub fn perimeter(&self, region: &Region) -> Result<f64> {
        let p: f64 = self
            .boundary_edges(region)?
            .iter()
            .map(|&e| self.edge_lengths[e])
            .sum();
        Ok(p + 0.0) // normalizes the empty sum's -0.0
    }

    /// Region area, accumulated in ascending face order.
    pub fn volume(&self, region: &Region) -> Result<f64> {
        self.check_region(region)?;
        let v: f64 = region.faces().iter().map(|&f| self.face_areas[f]).sum();
        Ok(v + 0.0)
    }

    /// Edge-weighted shortest-path distances from a set of source vertices.
    pub fn vertex_distances(&self, sources: &[usize]) -> Vec<f64> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        #[derive(PartialEq)]
        struct Entry(f64, usize);
        impl Eq for Entry {}
        impl PartialOrd for Entry {
            fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for Entry {
            fn cmp(&self, other: &Self) -> std::cmp::Ordering {
                self.0
                    .partial_cmp(&other.0)
                    .unwrap()
                    .then(self.1.cmp(&other.1))
            }
        }

        let mut dist = vec![f64::INFINITY; self.vertex_count];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s] = 0.0;
            heap.push(Reverse(Entry(0.0, s)));
        }
        while let Some(Reverse(Entry(d, v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &e in &self.vertex_edges[v] {
                let (a, b) = self.edges[e];
                let w = if a == v { b } else { a };
                let nd = d + self.edge_lengths[e];
                if nd < dist[w] {
                    dist[w] = nd;
                    heap.push(Reverse(Entry(nd, w)));
                }
            }
        }
        dist
    }

    /// Splits the boundary of a region into connected cycles with lengths and
    /// extrinsic diameters (max pairwise shortest-path distance in the whole mesh).
    pub fn boundary_components(&self, region: &Region) -> Result<Vec<BoundaryComponent>> {
        let boundary = self.boundary_edges(region)?;
        if boundary.is_empty() {
            return Ok(Vec::new());
        }
        // Union edges sharing a vertex.
        let pos: HashMap<usize, usize> = boundary.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut vertex_first: HashMap<usize, usize> = HashMap::new();
        let mut parent: Vec<usize> = (0..boundary.len()).collect();
        fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for (i, &e) in boundary.iter().enumerate() {
            let (a, b) = self.edges[e];
            for v in [a, b] {
                match vertex_first.entry(v) {
                    std::collections::hash_map::Entry::Occupied(o) => {
                        let j = *o.get();
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        if ri != rj {
                            parent[ri.max(rj)] = ri.min(rj);
                        }
                    }
                    std::collections::hash_map::Entry::Vacant(slot) => {
                        slot.insert(i);
                    }
                }
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, &e) in boundary.iter().enumerate() {
            groups.entry(find(&mut parent, i)).or_default().push(e);
        }
        let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
        comps.sort_by_key(|c| c[0]);
        let _ = pos;

        let mut out = Vec::new();
        for edges in comps {
            let cycle = Cycle::new(edges.clone());
            cycle.validate(self)?;
            let length = edges.iter().map(|&e| self.edge_lengths[e]).sum();
            let mut verts: Vec<usize> = edges
                .iter()
                .flat_map(|&e| {
                    let (a, b) = self.edges[e];
                    [a, b]
                })
                .collect();
            verts.sort_unstable();
            verts.dedup();
            let mut diameter: f64 = 0.0;
            for &v in &verts {
                let dist = self.vertex_distances(&[v]);
                for &w in &verts {
                    diameter = diameter.max(dist[w]);
                }
            }
            out.push(BoundaryComponent {
                cycle,
                length,
                diameter,
            });
        }
        Ok(out)
    }

    /// True iff deleting the cycle's edges from the dual graph leaves exactly
    /// two components; returns them ordered by smallest face index.
    pub fn separates(&self, cycle: &Cycle) -> Result<(bool, Region, Region)> {
        cycle.validate(self)?;
        let cut: Vec<bool> = {
            let mut m = vec![false; self.edges.len()];
            for &e in cycle.edges() {
                m[e] = true;
            }
            m
        };
        let mut comp = vec![usize::MAX; self.faces.len()];
        let mut n_comp = 0;
        for start in 0..self.faces.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = n_comp;
            n_comp += 1;
            let mut stack = vec![start];
            comp[start] = id;
            while let Some(f) = stack.pop() {
                for &e in &self.face_edges[f] {
                    if cut[e] {
                        continue;
                    }
                    for &g in &self.edge_faces[e] {
                        if comp[g] == usize::MAX {
                            comp[g] = id;
                            stack.push(g);
                        }
                    }
                }
            }
        }
        if n_comp != 2 {
            return Ok((false, Region::empty(), Region::empty()));
        }
        let side_a: Vec<usize> = (0..self.faces.len()).filter(|&f| comp[f] == 0).collect();
        let side_b: Vec<usize> = (0..self.faces.len()).filter(|&f| comp[f] == 1).collect();
        Ok((true, Region::new(side_a), Region::new(side_b)))
    }
}

/// One connected boundary cycle of a region, with its measured length and
/// extrinsic diameter.
#[derive(Debug, Clone)]
pub struct BoundaryComponent {
    pub cycle: Cycle,
    pub length: f64,
    pub diameter: f64,
}
