//! Text and JSON file formats.
//!
//! Edge lists are lines `u v` of non-negative integer ids; `#` and `%` start
//! comment lines. Ids are remapped to a dense range on load and translated
//! back on output through [`LabeledGraph`].
//!
//! Covers come in two text layouts:
//!
//! - community-per-line: each line lists the members of one community;
//! - membership (LFR `community.dat`): each line is `vertex cid [cid ...]`.
//!
//! [`read_cover`] reads community-per-line unless the first line is
//! [`MEMBERSHIP_HEADER`].

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use locness_core::graph::BuildReport;
use locness_core::{Cover, CoverError, Graph, GraphError, VertexId};
use serde::{Deserialize, Serialize};

/// First line marking a cover file as vertex-per-line memberships.
pub const MEMBERSHIP_HEADER: &str = "# cover-format: membership";

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{source}")]
    Stream {
        #[from]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("edge list contains no edges")]
    EmptyGraph,
    #[error("vertex {label} is not in the graph")]
    UnknownVertex { label: u64 },
    #[error("invalid cover: {0}")]
    Cover(#[from] CoverError),
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl IoError {
    fn file(path: &Path, source: io::Error) -> Self {
        Self::File {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// A graph together with the original id of every dense vertex.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: Graph,
    labels: Vec<u64>,
    index: HashMap<u64, VertexId>,
    pub report: BuildReport,
}

impl LabeledGraph {
    /// Wrap a graph whose vertex ids are their own labels.
    pub fn identity(graph: Graph) -> Self {
        let labels: Vec<u64> = (0..graph.vertex_count() as u64).collect();
        let index = labels.iter().map(|&l| (l, l as VertexId)).collect();
        Self {
            graph,
            labels,
            index,
            report: BuildReport::default(),
        }
    }

    pub fn label(&self, v: VertexId) -> u64 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn vertex(&self, label: u64) -> Option<VertexId> {
        self.index.get(&label).copied()
    }

    fn vertex_or_err(&self, label: u64) -> Result<VertexId, IoError> {
        self.vertex(label).ok_or(IoError::UnknownVertex { label })
    }
}

fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String), IoError>> {
    reader.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(IoError::from(e))),
        Ok(line) => {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
                None
            } else {
                Some(Ok((i + 1, t.to_owned())))
            }
        }
    })
}

fn parse_id(token: &str, line: usize) -> Result<u64, IoError> {
    token.parse().map_err(|_| IoError::Parse {
        line,
        message: format!("expected a non-negative integer vertex id, found {token:?}"),
    })
}

/// Parse an edge list, remapping ids densely in order of first appearance.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<LabeledGraph, IoError> {
    let mut labels: Vec<u64> = Vec::new();
    let mut index: HashMap<u64, VertexId> = HashMap::new();
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut intern = |label: u64| {
        *index.entry(label).or_insert_with(|| {
            labels.push(label);
            (labels.len() - 1) as VertexId
        })
    };
    for item in content_lines(reader) {
        let (line, text) = item?;
        let mut tokens = text.split_whitespace();
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(IoError::Parse {
                line,
                message: String::from("expected two vertex ids"),
            });
        };
        // a third column (weight, timestamp) is tolerated and ignored
        let (u, v) = (parse_id(a, line)?, parse_id(b, line)?);
        edges.push((intern(u), intern(v)));
    }
    if edges.is_empty() {
        return Err(IoError::EmptyGraph);
    }
    let (graph, report) = Graph::from_edges(labels.len(), edges)?;
    if graph.edge_count() == 0 {
        return Err(IoError::EmptyGraph);
    }
    Ok(LabeledGraph {
        graph,
        labels,
        index,
        report,
    })
}

pub fn load_edge_list(path: &Path) -> Result<LabeledGraph, IoError> {
    let file = fs::File::open(path).map_err(|e| IoError::file(path, e))?;
    read_edge_list(BufReader::new(file))
}

/// Write one `u v` line per edge, `u < v` in dense order, using labels.
pub fn write_edge_list<W: Write>(g: &LabeledGraph, mut out: W) -> io::Result<()> {
    for (u, v) in g.graph.edges() {
        writeln!(out, "{} {}", g.label(u), g.label(v))?;
    }
    Ok(())
}

/// Parse a cover in either text layout over the vertices of `g`.
pub fn read_cover<R: Read>(g: &LabeledGraph, mut reader: R) -> Result<Cover, IoError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    // the header is itself a comment line, so line numbers stay file-relative
    if text.lines().next().map(str::trim) == Some(MEMBERSHIP_HEADER) {
        read_memberships(g, text.as_bytes())
    } else {
        read_communities(g, text.as_bytes())
    }
}

pub fn load_cover(g: &LabeledGraph, path: &Path) -> Result<Cover, IoError> {
    let file = fs::File::open(path).map_err(|e| IoError::file(path, e))?;
    read_cover(g, BufReader::new(file))
}

/// Community-per-line layout.
pub fn read_communities<R: BufRead>(g: &LabeledGraph, reader: R) -> Result<Cover, IoError> {
    let mut communities = Vec::new();
    for item in content_lines(reader) {
        let (line, text) = item?;
        let members = text
            .split_whitespace()
            .map(|t| parse_id(t, line).and_then(|l| g.vertex_or_err(l)))
            .collect::<Result<Vec<_>, _>>()?;
        communities.push(members);
    }
    Ok(Cover::new(g.graph.vertex_count(), communities)?)
}

/// Membership layout (`vertex cid [cid ...]`), as written by the LFR tools.
/// Community ids are arbitrary integers; communities are numbered in
/// ascending id order.
pub fn read_memberships<R: BufRead>(g: &LabeledGraph, reader: R) -> Result<Cover, IoError> {
    let mut by_id: BTreeMap<u64, Vec<VertexId>> = BTreeMap::new();
    for item in content_lines(reader) {
        let (line, text) = item?;
        let mut tokens = text.split_whitespace();
        let v = g.vertex_or_err(parse_id(tokens.next().expect("line is non-empty"), line)?)?;
        let mut any = false;
        for t in tokens {
            by_id.entry(parse_id(t, line)?).or_default().push(v);
            any = true;
        }
        if !any {
            return Err(IoError::Parse {
                line,
                message: String::from("vertex has no community id"),
            });
        }
    }
    Ok(Cover::new(g.graph.vertex_count(), by_id.into_values().collect())?)
}

/// Load an LFR community file for the graph loaded from its companion edge
/// list. Every vertex named must exist in the graph.
pub fn load_lfr_truth(g: &LabeledGraph, path: &Path) -> Result<Cover, IoError> {
    let file = fs::File::open(path).map_err(|e| IoError::file(path, e))?;
    read_memberships(g, BufReader::new(file))
}

/// Community-per-line text, members as labels in ascending dense order.
pub fn format_communities(g: &LabeledGraph, cover: &Cover) -> String {
    let mut out = String::new();
    for members in cover.communities() {
        let line: Vec<String> = members.iter().map(|&v| g.label(v).to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

/// JSON form of a cover, in labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverJson {
    pub communities: Vec<Vec<u64>>,
    pub overlapping: Vec<u64>,
}

impl CoverJson {
    pub fn new(g: &LabeledGraph, cover: &Cover) -> Self {
        Self {
            communities: cover
                .communities()
                .iter()
                .map(|c| c.iter().map(|&v| g.label(v)).collect())
                .collect(),
            overlapping: cover.overlapping_vertices().into_iter().map(|v| g.label(v)).collect(),
        }
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), IoError> {
    fs::write(path, contents).map_err(|e| IoError::file(path, e))
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|e| IoError::file(path, e))
}
