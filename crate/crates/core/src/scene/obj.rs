//! Wavefront OBJ subset: `v` and `f` records only, polygons fan-triangulated.

use std::path::Path;

use nalgebra::Point3;

use super::Mesh;
use crate::{Error, Result};

pub fn load_mesh(path: impl AsRef<Path>) -> Result<Mesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_obj(&text, path)
}

/// Parses OBJ text; `origin` is only used in error messages.
pub fn parse_obj(text: &str, origin: &Path) -> Result<Mesh> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut vertices = Vec::new();
    let mut faces: Vec<(usize, Vec<i64>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let coords: Vec<f64> = tokens
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| parse_err(line_no, format!("bad vertex coordinate: {e}")))?;
                if !(3..=4).contains(&coords.len()) {
                    return Err(parse_err(
                        line_no,
                        format!("vertex needs 3 coordinates, found {}", coords.len()),
                    ));
                }
                if coords.iter().any(|c| !c.is_finite()) {
                    return Err(parse_err(line_no, "non-finite vertex coordinate".into()));
                }
                vertices.push(Point3::new(coords[0], coords[1], coords[2]));
            }
            Some("f") => {
                let mut idx = Vec::new();
                for t in tokens {
                    let head = t.split('/').next().unwrap_or("");
                    let v: i64 = head
                        .parse()
                        .map_err(|_| parse_err(line_no, format!("bad face index `{t}`")))?;
                    if v == 0 {
                        return Err(parse_err(line_no, "face index 0 is invalid (OBJ is 1-based)".into()));
                    }
                    idx.push(v);
                }
                if idx.len() < 3 {
                    return Err(parse_err(
                        line_no,
                        format!("face needs at least 3 vertices, found {}", idx.len()),
                    ));
                }
                // Negative indices are relative to the vertices read so far.
                let seen = vertices.len() as i64;
                let resolved = idx
                    .into_iter()
                    .map(|v| if v < 0 { seen + v + 1 } else { v })
                    .collect();
                faces.push((line_no, resolved));
            }
            // Normals, texture coordinates, groups and materials carry nothing for shadows.
            _ => {}
        }
    }

    let n = vertices.len() as i64;
    let mut triangles = Vec::new();
    for (line_no, idx) in faces {
        if let Some(bad) = idx.iter().find(|&&v| v < 1 || v > n) {
            return Err(Error::validation(format!(
                "{}:{line_no}: face index {bad} out of range (mesh has {n} vertices)",
                origin.display()
            )));
        }
        let zero_based: Vec<u32> = idx.iter().map(|&v| (v - 1) as u32).collect();
        for k in 1..zero_based.len() - 1 {
            triangles.push([zero_based[0], zero_based[k], zero_based[k + 1]]);
        }
    }
    Mesh::new(vertices, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Mesh> {
        parse_obj(text, Path::new("test.obj"))
    }

    #[test]
    fn minimal_triangle() {
        let m = parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n").unwrap();
        assert_eq!(m.vertices.len(), 3);
        assert_eq!(m.triangles, vec![[0, 1, 2]]);
    }

    #[test]
    fn quad_is_fan_triangulated() {
        let m = parse("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n").unwrap();
        assert_eq!(m.triangles, vec![[0, 1, 2], [0, 2, 3]]);
    }

    #[test]
    fn slashes_comments_and_negative_indices() {
        let text = "# cube corner\nv 0 0 0\nv 1 0 0\nvn 0 0 1\nv 0 1 0 # trailing\ng part\nf -3/1/1 -2//1 -1\n";
        let m = parse(text).unwrap();
        assert_eq!(m.triangles, vec![[0, 1, 2]]);
    }

    #[test]
    fn out_of_range_index_is_validation_error() {
        let err = parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n").unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err:?}");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse("v 0 0 0\nv 1 zero 0\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse("v 0 0 0\nv 1 0 0\nf 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_mesh("/definitely/not/here.obj").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert!(err.to_string().contains("/definitely/not/here.obj"));
    }
}
