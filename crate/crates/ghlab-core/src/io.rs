//! File formats: distance matrices (JSON and CSV), point clouds with a
//! metric selector, relations as cell lists, topologies, set-valued maps,
//! and the JSON wire form of solver results.

use crate::family::FamilyTag;
use crate::gh::{BoundStatus, GhResult};
use crate::metric::{FiniteMetricSpace, PointMetric, ValidationReport};
use crate::relation::{IncidenceMatrix, RelationJson};
use crate::topology::{FiniteTopology, TopologyError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot parse {path}: {detail}")]
    Parse { path: String, detail: String },
    #[error("{path}: {report}")]
    Invalid { path: String, report: ValidationReport },
    #[error("{path}: {source}")]
    InvalidTopology { path: String, source: TopologyError },
}

/// JSON form of a distance matrix: labels plus the square matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub labels: Vec<String>,
    pub dist: Vec<Vec<f64>>,
}

/// JSON form of a point cloud: coordinate vectors plus the metric used to
/// turn them into a distance matrix on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointCloudJson {
    pub metric: PointMetric,
    pub points: Vec<Vec<f64>>,
}

/// JSON form of a finite topology: labels plus minimal open neighborhoods.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopologyJson {
    pub points: Vec<String>,
    pub min_open: Vec<Vec<usize>>,
}

/// JSON form of a set-valued map: one image set per source point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetValuedMapJson {
    pub image: Vec<Vec<usize>>,
}

/// Wire form of a solver result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GhResultJson {
    pub value: f64,
    pub status: BoundStatus,
    pub family: FamilyTag,
    pub certificate: Option<RelationJson>,
}

impl From<&GhResult> for GhResultJson {
    fn from(r: &GhResult) -> Self {
        GhResultJson {
            value: r.value,
            status: r.status,
            family: r.family.clone(),
            certificate: r
                .certificate
                .as_ref()
                .map(|c| RelationJson::from(c.as_relation().incidence())),
        }
    }
}

fn read_file(path: &str) -> Result<String, IoError> {
    std::fs::read_to_string(path)
        .map_err(|source| IoError::Read { path: path.to_string(), source })
}

fn parse_err(path: &str, detail: impl std::fmt::Display) -> IoError {
    IoError::Parse { path: path.to_string(), detail: detail.to_string() }
}

/// Loads a metric space from a file, dispatching on content: CSV matrices
/// (by extension), JSON matrices { labels, dist }, or JSON point clouds
/// { metric, points }. Validation failures are reported with every violated
/// axiom.
pub fn load_space(path: &str) -> Result<FiniteMetricSpace, IoError> {
    let text = read_file(path)?;
    if path.ends_with(".csv") {
        return space_from_csv(path, &text);
    }
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    if value.get("dist").is_some() {
        let m: MatrixJson = serde_json::from_value(value).map_err(|e| parse_err(path, e))?;
        FiniteMetricSpace::new(m.labels, m.dist)
            .map_err(|report| IoError::Invalid { path: path.to_string(), report })
    } else if value.get("points").is_some() {
        let c: PointCloudJson = serde_json::from_value(value).map_err(|e| parse_err(path, e))?;
        FiniteMetricSpace::from_points(&c.points, c.metric)
            .map_err(|report| IoError::Invalid { path: path.to_string(), report })
    } else {
        Err(parse_err(path, "expected a {labels, dist} matrix or a {metric, points} cloud"))
    }
}

fn space_from_csv(path: &str, text: &str) -> Result<FiniteMetricSpace, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let labels: Vec<String> = reader
        .headers()
        .map_err(|e| parse_err(path, e))?
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_err(path, e))?;
        let row: Result<Vec<f64>, _> = record.iter().map(|s| s.parse::<f64>()).collect();
        rows.push(row.map_err(|e| parse_err(path, e))?);
    }
    FiniteMetricSpace::new(labels, rows)
        .map_err(|report| IoError::Invalid { path: path.to_string(), report })
}

pub fn space_to_csv(space: &FiniteMetricSpace) -> String {
    let mut out = space.labels().join(",");
    out.push('\n');
    for row in space.matrix() {
        let cells: Vec<String> = row.iter().map(|d| d.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn space_to_json(space: &FiniteMetricSpace) -> MatrixJson {
    MatrixJson { labels: space.labels().to_vec(), dist: space.matrix() }
}

/// Loads a relation incidence from JSON { rows, cols, cells }.
pub fn load_incidence(path: &str) -> Result<IncidenceMatrix, IoError> {
    let text = read_file(path)?;
    let j: RelationJson = serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    IncidenceMatrix::try_from(&j).map_err(|e| parse_err(path, e))
}

/// Loads a topology from JSON { points, min_open }, validating the
/// Alexandrov axioms.
pub fn load_topology(path: &str) -> Result<FiniteTopology, IoError> {
    let text = read_file(path)?;
    let j: TopologyJson = serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    FiniteTopology::new(j.points, j.min_open)
        .map_err(|source| IoError::InvalidTopology { path: path.to_string(), source })
}

/// Loads the image sets of a set-valued map from JSON { image }.
pub fn load_images(path: &str) -> Result<Vec<Vec<usize>>, IoError> {
    let text = read_file(path)?;
    let j: SetValuedMapJson = serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    Ok(j.image)
}

/// Loads a subset of point indices from a plain JSON array.
pub fn load_subset(path: &str) -> Result<Vec<usize>, IoError> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(name: &str, content: &str) -> String {
        let dir = std::env::temp_dir().join("ghlab-io-tests");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path.to_string_lossy().into_owned()
    }

    #[test]
    fn json_matrix_roundtrip() {
        let path = write_temp(
            "m.json",
            r#"{"labels": ["a", "b"], "dist": [[0.0, 2.0], [2.0, 0.0]]}"#,
        );
        let space = load_space(&path).unwrap();
        assert_eq!(space.labels(), &["a".to_string(), "b".to_string()]);
        assert_eq!(space.dist(0, 1), 2.0);
        let json = serde_json::to_string(&space_to_json(&space)).unwrap();
        let path2 = write_temp("m2.json", &json);
        let again = load_space(&path2).unwrap();
        assert_eq!(again.matrix(), space.matrix());
    }

    #[test]
    fn csv_matrix_roundtrip() {
        let path = write_temp("m.csv", "a,b,c\n0,1,3\n1,0,2\n3,2,0\n");
        let space = load_space(&path).unwrap();
        assert_eq!(space.len(), 3);
        assert_eq!(space.dist(0, 2), 3.0);
        let path2 = write_temp("m2.csv", &space_to_csv(&space));
        let again = load_space(&path2).unwrap();
        assert_eq!(again.matrix(), space.matrix());
    }

    #[test]
    fn point_cloud_loading() {
        let path = write_temp(
            "cloud.json",
            r#"{"metric": "euclidean", "points": [[0, 0], [3, 4]]}"#,
        );
        let space = load_space(&path).unwrap();
        assert_eq!(space.dist(0, 1), 5.0);
    }

    #[test]
    fn invalid_matrix_reports_axioms() {
        let path = write_temp(
            "bad.json",
            r#"{"labels": ["a", "b"], "dist": [[0.0, 1.0], [2.0, 0.0]]}"#,
        );
        match load_space(&path) {
            Err(IoError::Invalid { report, .. }) => {
                assert!(!report.violations.is_empty());
            }
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn garbage_is_a_parse_error() {
        let path = write_temp("garbage.json", "not json at all");
        assert!(matches!(load_space(&path), Err(IoError::Parse { .. })));
    }

    #[test]
    fn topology_and_map_loading() {
        let tpath = write_temp(
            "top.json",
            r#"{"points": ["a", "b"], "min_open": [[0], [0, 1]]}"#,
        );
        let top = load_topology(&tpath).unwrap();
        assert_eq!(top.min_open(1), vec![0, 1]);
        let mpath = write_temp("map.json", r#"{"image": [[1], [0, 1]]}"#);
        assert_eq!(load_images(&mpath).unwrap(), vec![vec![1], vec![0, 1]]);
        let bad = write_temp(
            "badtop.json",
            r#"{"points": ["a"], "min_open": [[]]}"#,
        );
        assert!(matches!(load_topology(&bad), Err(IoError::InvalidTopology { .. })));
    }

    #[test]
    fn incidence_loading() {
        let path = write_temp("rel.json", r#"{"rows": 2, "cols": 3, "cells": [[0,0],[1,2]]}"#);
        let inc = load_incidence(&path).unwrap();
        assert!(inc.get(1, 2));
        assert_eq!(inc.count(), 2);
    }

    #[test]
    fn subset_loading() {
        let path = write_temp("subset.json", "[0, 2, 5]");
        assert_eq!(load_subset(&path).unwrap(), vec![0, 2, 5]);
    }
}
