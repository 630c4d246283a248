//! JSON and GraphML documents for graphs, scores and layouts. Output is
//! byte-for-byte reproducible for identical inputs.

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytics::{Analysis, Measure, Partition};
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::layout::{Layout3D, LayoutKind, LayoutParams};
use crate::rin::{Graph, Rin, RinConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    JsonGraph,
    GraphMl,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::JsonGraph),
            "graphml" => Ok(Self::GraphMl),
            other => Err(Error::InvalidConfig(format!("unknown graph format {other:?}"))),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDoc {
    n: usize,
    edges: Vec<(usize, usize)>,
    config: RinConfig,
    frame: usize,
}

pub fn graph_to_json(rin: &Rin) -> String {
    let doc = GraphDoc { n: rin.node_count(), edges: rin.graph().edge_vec(), config: *rin.config(), frame: rin.frame_index() };
    serde_json::to_string(&doc).expect("graph document is always serialisable")
}

pub fn graph_from_json(bytes: &[u8]) -> Result<Rin> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let doc: GraphDoc = serde_path_to_error::deserialize(de)
        .map_err(|e| Error::SchemaViolation { path: e.path().to_string(), reason: e.into_inner().to_string() })?;
    let graph = Graph::from_edges(doc.n, doc.edges.iter().copied())
        .map_err(|e| Error::SchemaViolation { path: "edges".into(), reason: e.to_string() })?;
    Ok(Rin::new(graph, doc.config, doc.frame))
}

pub fn graph_to_graphml(rin: &Rin) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" \
         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n",
    );
    out.push_str("  <key id=\"criterion\" for=\"graph\" attr.name=\"criterion\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"cutoff\" for=\"graph\" attr.name=\"cutoff\" attr.type=\"double\"/>\n");
    out.push_str("  <key id=\"frame\" for=\"graph\" attr.name=\"frame\" attr.type=\"int\"/>\n");
    out.push_str("  <graph id=\"rin\" edgedefault=\"undirected\">\n");
    let config = rin.config();
    let _ = writeln!(out, "    <data key=\"criterion\">{}</data>", config.criterion);
    let _ = writeln!(out, "    <data key=\"cutoff\">{}</data>", config.cutoff);
    let _ = writeln!(out, "    <data key=\"frame\">{}</data>", rin.frame_index());
    for v in 0..rin.node_count() {
        let _ = writeln!(out, "    <node id=\"n{v}\"/>");
    }
    for (k, (i, j)) in rin.graph().edges().enumerate() {
        let _ = writeln!(out, "    <edge id=\"e{k}\" source=\"n{i}\" target=\"n{j}\"/>");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

pub fn export_graph(rin: &Rin, format: GraphFormat, sink: &mut impl Write) -> Result<()> {
    let doc = match format {
        GraphFormat::JsonGraph => graph_to_json(rin),
        GraphFormat::GraphMl => graph_to_graphml(rin),
    };
    sink.write_all(doc.as_bytes())?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnalysisDoc {
    Scores { measure: Measure, values: Vec<f64> },
    Communities { measure: Measure, labels: Vec<usize>, community_count: usize },
}

pub fn analysis_to_json(measure: Measure, analysis: &Analysis) -> String {
    let doc = match analysis {
        Analysis::Scores(s) => AnalysisDoc::Scores { measure, values: s.values.clone() },
        Analysis::Communities(p) => {
            AnalysisDoc::Communities { measure, labels: p.labels().to_vec(), community_count: p.community_count() }
        }
    };
    serde_json::to_string(&doc).expect("analysis document is always serialisable")
}

pub fn partition_from_labels_json(bytes: &[u8]) -> Result<Partition> {
    let labels: Vec<usize> =
        serde_json::from_slice(bytes).map_err(|e| Error::SchemaViolation { path: String::new(), reason: e.to_string() })?;
    Ok(Partition::from_labels(&labels))
}

#[derive(Debug, Serialize, Deserialize)]
struct LayoutDoc {
    kind: LayoutKind,
    coords: Vec<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<LayoutParams>,
}

pub fn layout_to_json(layout: &Layout3D, params: Option<&LayoutParams>) -> String {
    let doc = LayoutDoc { kind: layout.kind, coords: layout.coords.clone(), params: params.copied() };
    serde_json::to_string(&doc).expect("layout document is always serialisable")
}

pub fn layout_from_json(bytes: &[u8]) -> Result<Layout3D> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let doc: LayoutDoc = serde_path_to_error::deserialize(de)
        .map_err(|e| Error::SchemaViolation { path: e.path().to_string(), reason: e.into_inner().to_string() })?;
    Ok(Layout3D { kind: doc.kind, coords: doc.coords })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rin::DistanceCriterion;

    fn sample() -> Rin {
        let g = Graph::from_edges(4, [(2, 3), (0, 1), (1, 3)]).unwrap();
        Rin::new(g, RinConfig::new(DistanceCriterion::CAlpha, 6.5), 2)
    }

    #[test]
    fn json_graph_layout() {
        let json = graph_to_json(&sample());
        assert_eq!(
            json,
            r#"{"n":4,"edges":[[0,1],[1,3],[2,3]],"config":{"criterion":"calpha","cutoff":6.5,"exclude_backbone_neighbors":false},"frame":2}"#
        );
        assert_eq!(graph_from_json(json.as_bytes()).unwrap(), sample());
    }

    #[test]
    fn json_graph_rejects_bad_edges() {
        let doc = r#"{"n":2,"edges":[[0,2]],"config":{"criterion":"min","cutoff":4.5},"frame":0}"#;
        assert!(matches!(graph_from_json(doc.as_bytes()), Err(Error::SchemaViolation { .. })));
    }

    #[test]
    fn graphml_is_well_formed() {
        let xml = graph_to_graphml(&sample());
        let doc = roxmltree::Document::parse(&xml).unwrap();
        let nodes: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("node")).map(|n| n.attribute("id").unwrap()).collect();
        assert_eq!(nodes, vec!["n0", "n1", "n2", "n3"]);
        let edges: Vec<_> =
            doc.descendants().filter(|n| n.has_tag_name("edge")).map(|n| (n.attribute("source").unwrap(), n.attribute("target").unwrap())).collect();
        assert_eq!(edges, vec![("n0", "n1"), ("n1", "n3"), ("n2", "n3")]);
    }

    #[test]
    fn empty_graph_documents() {
        let rin = Rin::new(Graph::empty(3), RinConfig::default(), 0);
        assert_eq!(graph_from_json(graph_to_json(&rin).as_bytes()).unwrap().node_count(), 3);
        let xml = graph_to_graphml(&rin);
        let doc = roxmltree::Document::parse(&xml).unwrap();
        assert_eq!(doc.descendants().filter(|n| n.has_tag_name("edge")).count(), 0);
        assert_eq!(doc.descendants().filter(|n| n.has_tag_name("node")).count(), 3);
    }

    #[test]
    fn layout_round_trip() {
        let layout = Layout3D { kind: LayoutKind::MaxentStress, coords: vec![[0.1, 0.2, 0.3], [1.0 / 3.0, -2.0, 1e-7]] };
        let json = layout_to_json(&layout, Some(&LayoutParams::default()));
        assert_eq!(layout_from_json(json.as_bytes()).unwrap(), layout);
    }

    #[test]
    fn analysis_documents() {
        let scores = Analysis::Scores(crate::analytics::NodeScores::new(crate::analytics::MeasureId::Degree, vec![1.0, 2.0]));
        assert_eq!(analysis_to_json(Measure::Degree, &scores), r#"{"measure":"degree","values":[1.0,2.0]}"#);
        let part = Analysis::Communities(Partition::from_labels(&[0, 0, 1]));
        assert_eq!(analysis_to_json(Measure::Plm, &part), r#"{"measure":"plm","labels":[0,0,1],"community_count":2}"#);
    }
}
