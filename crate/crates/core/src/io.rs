//! File formats: edge-list graphs, vertex functions, CSV tables with fixed
//! significant digits, content digests, and partial-artifact handling.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::IoError;
use crate::function::VertexFunction;
use crate::generate::ExpectedExponents;
use crate::graph::WeightedGraph;

/// Formats a number at 12 significant digits, the fixed precision of every
/// emitted decimal (below fit tolerance, above round-trip loss).
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Writes the edge-list format: a header `graph <n_vertices> <n_edges>`, an
/// optional `# expected D=<val> beta=<val>` sidecar comment, then one line
/// `u v mu` per edge (self-loops as u == v).
pub fn write_graph(
    path: &Path,
    g: &WeightedGraph,
    expected: Option<&ExpectedExponents>,
) -> Result<(), IoError> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "graph {} {}", g.n_vertices(), g.n_edges())?;
    if let Some(e) = expected {
        writeln!(w, "# expected D={} beta={}", fmt_sig(e.growth), fmt_sig(e.escape))?;
    }
    for &(u, v, mu) in g.edges() {
        writeln!(w, "{} {} {}", u, v, fmt_sig(mu))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the edge-list format back, returning the graph and the expected
/// exponents when the sidecar comment is present.
pub fn read_graph(path: &Path) -> Result<(WeightedGraph, Option<ExpectedExponents>), IoError> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut header: Option<(usize, usize)> = None;
    let mut expected: Option<ExpectedExponents> = None;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if expected.is_none() {
                expected = parse_expected_comment(comment);
            }
            continue;
        }
        if header.is_none() {
            let mut parts = trimmed.split_whitespace();
            if parts.next() != Some("graph") {
                return Err(parse_err(path, lineno, "expected header `graph <n> <m>`"));
            }
            let n = parts
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| parse_err(path, lineno, "bad vertex count"))?;
            let m = parts
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| parse_err(path, lineno, "bad edge count"))?;
            header = Some((n, m));
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let u = parts
            .next()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| parse_err(path, lineno, "bad edge endpoint"))?;
        let v = parts
            .next()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| parse_err(path, lineno, "bad edge endpoint"))?;
        let mu = parts
            .next()
            .and_then(|s| s.parse::<f64>().ok())
            .ok_or_else(|| parse_err(path, lineno, "bad edge weight"))?;
        if parts.next().is_some() {
            return Err(parse_err(path, lineno, "trailing tokens on edge line"));
        }
        edges.push((u, v, mu));
    }
    let (n, m) = header.ok_or_else(|| parse_err(path, 1, "missing `graph` header"))?;
    if edges.len() != m {
        return Err(parse_err(
            path,
            0,
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    let g = WeightedGraph::from_edges(n, &edges)?;
    Ok((g, expected))
}

fn parse_expected_comment(comment: &str) -> Option<ExpectedExponents> {
    let tokens: Vec<&str> = comment.split_whitespace().collect();
    if tokens.first() != Some(&"expected") {
        return None;
    }
    let mut d = None;
    let mut beta = None;
    for t in &tokens[1..] {
        if let Some(v) = t.strip_prefix("D=") {
            d = v.parse::<f64>().ok();
        } else if let Some(v) = t.strip_prefix("beta=") {
            beta = v.parse::<f64>().ok();
        }
    }
    Some(ExpectedExponents {
        growth: d?,
        escape: beta?,
    })
}

/// Writes a vertex function: one decimal per line, line i = value at vertex i.
pub fn write_function(path: &Path, f: &VertexFunction) -> Result<(), IoError> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    for &v in f.values() {
        writeln!(w, "{}", fmt_sig(v))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a vertex function for the given graph; the line count must match.
pub fn read_function(path: &Path, g: &WeightedGraph) -> Result<VertexFunction, IoError> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut values = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let v = trimmed
            .parse::<f64>()
            .map_err(|e| parse_err(path, idx + 1, e.to_string()))?;
        values.push(v);
    }
    VertexFunction::new(g, values).map_err(|_| {
        parse_err(
            path,
            0,
            format!("expected {} values for this graph", g.n_vertices()),
        )
    })
}

/// Writes a CSV table with a header row; all cells are pre-formatted strings.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), IoError> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Hex SHA-256 digest of a file's bytes.
pub fn sha256_digest(path: &Path) -> Result<String, IoError> {
    let bytes = fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let digest = hasher.finalize();
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// An output file written under a `.partial` suffix and renamed into place on
/// success. A stage failure leaves the `.partial` file behind for inspection.
pub struct Artifact {
    final_path: PathBuf,
    partial_path: PathBuf,
}

impl Artifact {
    pub fn new(final_path: impl Into<PathBuf>) -> Self {
        let final_path = final_path.into();
        let mut partial = final_path.clone().into_os_string();
        partial.push(".partial");
        Self {
            final_path,
            partial_path: PathBuf::from(partial),
        }
    }

    /// Path to write while the stage is in flight.
    pub fn partial_path(&self) -> &Path {
        &self.partial_path
    }

    pub fn final_path(&self) -> &Path {
        &self.final_path
    }

    /// Promotes the partial file to its final name.
    pub fn finalize(&self) -> Result<(), IoError> {
        fs::rename(&self.partial_path, &self.final_path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family, GeneratorSpec};
    use crate::graph::WeightedGraph;
    use approx::assert_relative_eq;
    use tempfile::tempdir;

    #[test]
    fn graph_round_trip_preserves_structure() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let (g, exp) = generate(&GeneratorSpec::new(Family::Vicsek, 3, 2)).unwrap();
        let g = g.lazify(0.5).unwrap();
        write_graph(&path, &g, Some(&exp)).unwrap();
        let (h, exp2) = read_graph(&path).unwrap();
        assert_eq!(g.n_vertices(), h.n_vertices());
        assert_eq!(g.n_edges(), h.n_edges());
        for (a, b) in g.edges().iter().zip(h.edges()) {
            assert_eq!(a.0, b.0);
            assert_eq!(a.1, b.1);
            assert_relative_eq!(a.2, b.2, max_relative = 1e-11);
        }
        for x in 0..g.n_vertices() {
            assert_relative_eq!(g.measure(x), h.measure(x), max_relative = 1e-11);
        }
        let exp2 = exp2.unwrap();
        assert_relative_eq!(exp2.growth, exp.growth, max_relative = 1e-11);
        assert_relative_eq!(exp2.escape, exp.escape, max_relative = 1e-11);
    }

    #[test]
    fn malformed_header_reports_line() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        fs::write(&path, "grph 3 2\n0 1 1.0\n1 2 1.0\n").unwrap();
        match read_graph(&path) {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn edge_count_mismatch_detected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        fs::write(&path, "graph 3 5\n0 1 1.0\n1 2 1.0\n").unwrap();
        assert!(matches!(read_graph(&path), Err(IoError::Parse { .. })));
    }

    #[test]
    fn function_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("f.txt");
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let f = VertexFunction::new(&g, vec![1.5, -2.25, 1e-7]).unwrap();
        write_function(&path, &f).unwrap();
        let f2 = read_function(&path, &g).unwrap();
        for (a, b) in f.values().iter().zip(f2.values()) {
            assert_relative_eq!(a, b, max_relative = 1e-11);
        }
    }

    #[test]
    fn digest_is_stable_and_sensitive() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("x.csv");
        fs::write(&path, "a,b\n1,2\n").unwrap();
        let d1 = sha256_digest(&path).unwrap();
        let d2 = sha256_digest(&path).unwrap();
        assert_eq!(d1, d2);
        assert_eq!(d1.len(), 64);
        fs::write(&path, "a,b\n1,3\n").unwrap();
        assert_ne!(d1, sha256_digest(&path).unwrap());
    }

    #[test]
    fn artifact_partial_then_finalize() {
        let dir = tempdir().unwrap();
        let art = Artifact::new(dir.path().join("out.csv"));
        fs::write(art.partial_path(), "data").unwrap();
        assert!(!art.final_path().exists());
        art.finalize().unwrap();
        assert!(art.final_path().exists());
        assert!(!art.partial_path().exists());
    }

    #[test]
    fn fmt_sig_round_trips_doubles() {
        for &x in &[1.0, -0.3333333333333, 1.4649735207179269, 2.5e-13] {
            let s = fmt_sig(x);
            let y: f64 = s.parse().unwrap();
            assert_relative_eq!(x, y, max_relative = 1e-11);
        }
    }
}
