//! Mesh ingestion (OFF text files and a native JSON schema that allows
//! abstract metrics with no embedding) plus JSON export with provenance.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::region::{Cycle, Region};
use crate::geometry::TriangulatedSurface;

/// Native JSON mesh schema:
/// `{vertices?, faces, edge_lengths?, scalar_fields?, provenance?}`.
/// Either `vertices` (lengths derived from coordinates) or `edge_lengths`
/// must be present. Scalar fields are per-vertex samples keyed by name
/// (conformal factors export this way).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeshJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 3]>>,
    pub faces: Vec<[usize; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_lengths: Option<Vec<(usize, usize, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar_fields: Option<std::collections::BTreeMap<String, Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

/// Surgery provenance attached to exported meshes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub epsilon: f64,
    pub ell: f64,
    pub r: f64,
    pub eta_spec: String,
}

pub fn parse_off(text: &str) -> Result<TriangulatedSurface> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split_whitespace())
        .peekable();
    let header = tokens.next().ok_or_else(|| Error::format("empty OFF file"))?;
    if header != "OFF" {
        return Err(Error::format(format!("expected OFF header, found {header:?}")));
    }
    let mut next_usize = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::format(format!("unexpected end of OFF file reading {what}")))?
            .parse::<usize>()
            .map_err(|e| Error::format(format!("bad {what}: {e}")))
    };
    let nv = next_usize("vertex count")?;
    let nf = next_usize("face count")?;
    let _ne = next_usize("edge count")?;
    let mut take = |what: &str| -> Result<f64> {
        tokens
            .next()
            .ok_or_else(|| Error::format(format!("unexpected end of OFF file reading {what}")))?
            .parse::<f64>()
            .map_err(|e| Error::format(format!("bad {what}: {e}")))
    };
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        vertices.push([take("coordinate")?, take("coordinate")?, take("coordinate")?]);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let arity = take("face arity")? as usize;
        if arity != 3 {
            return Err(Error::format(format!(
                "only triangle faces supported, found {arity}-gon"
            )));
        }
        let a = take("vertex index")? as usize;
        let b = take("vertex index")? as usize;
        let c = take("vertex index")? as usize;
        faces.push([a, b, c]);
    }
    TriangulatedSurface::from_coordinates(vertices, faces)
}

pub fn mesh_from_json(json: &MeshJson) -> Result<TriangulatedSurface> {
    if let Some(lengths) = &json.edge_lengths {
        let mut map = HashMap::new();
        for &(u, v, len) in lengths {
            map.insert((u.min(v), u.max(v)), len);
        }
        TriangulatedSurface::from_edge_lengths(json.faces.clone(), &map)
    } else if let Some(vertices) = &json.vertices {
        TriangulatedSurface::from_coordinates(vertices.clone(), json.faces.clone())
    } else {
        Err(Error::format(
            "mesh JSON needs either vertices or edge_lengths",
        ))
    }
}

pub fn mesh_to_json(surface: &TriangulatedSurface, provenance: Option<Provenance>) -> MeshJson {
    let edge_lengths = surface
        .edges()
        .iter()
        .zip(surface.edge_lengths())
        .map(|(&(u, v), &l)| (u, v, l))
        .collect();
    MeshJson {
        vertices: surface.coordinates().map(|c| c.to_vec()),
        faces: surface.faces().to_vec(),
        edge_lengths: Some(edge_lengths),
        scalar_fields: None,
        provenance,
    }
}

/// Export a mesh with named per-vertex scalar fields (e.g. conformal factors).
pub fn save_mesh_json_with_fields(
    surface: &TriangulatedSurface,
    fields: std::collections::BTreeMap<String, Vec<f64>>,
    path: &Path,
) -> Result<()> {
    for (name, values) in &fields {
        if values.len() != surface.vertex_count() {
            return Err(Error::input(format!(
                "scalar field {name:?} has {} samples for {} vertices",
                values.len(),
                surface.vertex_count()
            )));
        }
    }
    let mut json = mesh_to_json(surface, None);
    json.scalar_fields = Some(fields);
    let mut text = serde_json::to_string_pretty(&json)
        .map_err(|e| Error::format(format!("serialize mesh: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Load a mesh from `.off` or `.json` by extension.
pub fn load_mesh(path: &Path) -> Result<TriangulatedSurface> {
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|s| s.to_str()) {
        Some("off") | Some("OFF") => parse_off(&text),
        _ => {
            let json: MeshJson = serde_json::from_str(&text)
                .map_err(|e| Error::format(format!("{}: {e}", path.display())))?;
            mesh_from_json(&json)
        }
    }
}

pub fn save_mesh_json(
    surface: &TriangulatedSurface,
    provenance: Option<Provenance>,
    path: &Path,
) -> Result<()> {
    let json = mesh_to_json(surface, provenance);
    let mut text = serde_json::to_string_pretty(&json)
        .map_err(|e| Error::format(format!("serialize mesh: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Regions serialize as bare face-index lists.
pub fn region_to_json(region: &Region) -> String {
    serde_json::to_string(region.faces()).unwrap()
}

pub fn region_from_json(text: &str) -> Result<Region> {
    let faces: Vec<usize> =
        serde_json::from_str(text).map_err(|e| Error::format(format!("region JSON: {e}")))?;
    Ok(Region::new(faces))
}

/// Cycles serialize as lists of vertex-index pairs.
pub fn cycle_to_json(surface: &TriangulatedSurface, cycle: &Cycle) -> String {
    let pairs: Vec<(usize, usize)> = cycle.to_vertex_pairs(surface);
    serde_json::to_string(&pairs).unwrap()
}

pub fn cycle_from_json(surface: &TriangulatedSurface, text: &str) -> Result<Cycle> {
    let pairs: Vec<(usize, usize)> =
        serde_json::from_str(text).map_err(|e| Error::format(format!("cycle JSON: {e}")))?;
    Cycle::from_vertex_pairs(surface, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;

    #[test]
    fn off_round_square() {
        let text = "OFF\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n3 0 3 1\n3 1 3 2\n3 2 3 0\n";
        let s = parse_off(text).unwrap();
        assert_eq!(s.face_count(), 4);
        assert_eq!(s.vertex_count(), 4);
        // edge (0,1) has unit length from the embedding
        let e = s.edge_id(0, 1).unwrap();
        assert!((s.edge_length(e) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn off_rejects_quads() {
        let text = "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n";
        assert!(parse_off(text).is_err());
    }

    #[test]
    fn json_roundtrip_preserves_metric() {
        let s = fixtures::octahedron();
        let json = mesh_to_json(&s, None);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: MeshJson = serde_json::from_str(&text).unwrap();
        let s2 = mesh_from_json(&parsed).unwrap();
        assert_eq!(s2.face_count(), s.face_count());
        assert_eq!(s2.edge_lengths(), s.edge_lengths());
    }

    #[test]
    fn abstract_metric_without_embedding() {
        let json: MeshJson = serde_json::from_str(
            r#"{"faces":[[0,1,2],[0,3,1],[1,3,2],[2,3,0]],
                "edge_lengths":[[0,1,1.0],[0,2,1.0],[0,3,1.0],[1,2,1.0],[1,3,1.0],[2,3,1.0]]}"#,
        )
        .unwrap();
        let s = mesh_from_json(&json).unwrap();
        assert_eq!(s.face_count(), 4);
        assert!(s.coordinates().is_none());
    }

    #[test]
    fn scalar_field_export() {
        let s = fixtures::tetrahedron();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mesh.json");
        let mut fields = std::collections::BTreeMap::new();
        fields.insert("factor".to_string(), vec![0.0, 0.1, 0.2, 0.3]);
        save_mesh_json_with_fields(&s, fields, &path).unwrap();
        let parsed: MeshJson =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(parsed.scalar_fields.unwrap()["factor"], vec![0.0, 0.1, 0.2, 0.3]);
        // size mismatch rejected
        let mut bad = std::collections::BTreeMap::new();
        bad.insert("f".to_string(), vec![1.0]);
        assert!(save_mesh_json_with_fields(&s, bad, &path).is_err());
    }

    #[test]
    fn region_and_cycle_json() {
        let s = fixtures::octahedron();
        let r = region_from_json("[2,0,1]").unwrap();
        assert_eq!(r.faces(), &[0, 1, 2]);
        assert_eq!(region_to_json(&r), "[0,1,2]");
        let cyc = Cycle::boundary_of(&s, &Region::new(vec![0, 1, 2, 3])).unwrap();
        let text = cycle_to_json(&s, &cyc);
        let back = cycle_from_json(&s, &text).unwrap();
        assert_eq!(back, cyc);
    }
}
