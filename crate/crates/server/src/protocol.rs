//! JSON wire documents exchanged with clients.

use rinx_core::analytics::{Analysis, Measure};
use rinx_core::geometry::Vec3;
use rinx_core::rin::{CUTOFF_SLIDER_RANGE, CUTOFF_SLIDER_STEP};
use rinx_core::{DistanceCriterion, RinConfig};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::color;
use crate::error::SessionError;
use crate::session::{SessionState, Target, TimingBreakdown, UpdateEvent};

#[derive(Deserialize)]
struct RawMessage {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    value: Value,
}

fn value_as<T: serde::de::DeserializeOwned>(kind: &str, value: Value) -> Result<T, SessionError> {
    serde_json::from_value(value).map_err(|e| SessionError::InvalidPayload(format!("{kind}: {e}")))
}

fn optional_flag(kind: &str, value: Value) -> Result<Option<bool>, SessionError> {
    match value {
        Value::Null => Ok(None),
        Value::Bool(b) => Ok(Some(b)),
        other => Err(SessionError::InvalidPayload(format!("{kind}: expected a boolean or nothing, got {other}"))),
    }
}

/// Parses a client message `{"type": ..., "value": ...}`.
pub fn parse_client_message(text: &str) -> Result<UpdateEvent, SessionError> {
    let raw: RawMessage = serde_json::from_str(text).map_err(|e| SessionError::InvalidMessage(e.to_string()))?;
    let kind = raw.kind.as_str();
    Ok(match kind {
        "set_frame" => UpdateEvent::SetFrame(value_as(kind, raw.value)?),
        "set_cutoff" => UpdateEvent::SetCutoff(value_as(kind, raw.value)?),
        "set_criterion" => UpdateEvent::SetCriterion(value_as(kind, raw.value)?),
        "set_measure" => UpdateEvent::SetMeasure(value_as(kind, raw.value)?),
        "toggle_auto" => UpdateEvent::ToggleAuto(optional_flag(kind, raw.value)?),
        "toggle_delta" => UpdateEvent::ToggleDelta(optional_flag(kind, raw.value)?),
        "recompute" => UpdateEvent::Recompute,
        "get_snapshot" => UpdateEvent::GetSnapshot,
        other => return Err(SessionError::InvalidMessage(format!("unknown message type {other:?}"))),
    })
}

/// Inverse of [`parse_client_message`].
pub fn client_message(event: &UpdateEvent) -> String {
    let (kind, value) = match *event {
        UpdateEvent::SetFrame(f) => ("set_frame", Value::from(f)),
        UpdateEvent::SetCutoff(c) => ("set_cutoff", Value::from(c)),
        UpdateEvent::SetCriterion(c) => ("set_criterion", Value::from(c.as_str())),
        UpdateEvent::SetMeasure(m) => ("set_measure", Value::from(m.as_str())),
        UpdateEvent::ToggleAuto(v) => ("toggle_auto", v.map_or(Value::Null, Value::from)),
        UpdateEvent::ToggleDelta(v) => ("toggle_delta", v.map_or(Value::Null, Value::from)),
        UpdateEvent::Recompute => ("recompute", Value::Null),
        UpdateEvent::GetSnapshot => ("get_snapshot", Value::Null),
    };
    let mut doc = serde_json::Map::new();
    doc.insert("type".into(), kind.into());
    if !value.is_null() {
        doc.insert("value".into(), value);
    }
    Value::Object(doc).to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeInfo {
    pub id: usize,
    pub residue: String,
    pub chain: String,
    pub seq: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliderRange {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Scores,
    Communities,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub nodes: Vec<NodeInfo>,
    pub edges: Vec<(usize, usize)>,
    pub protein_layout: Vec<Vec3>,
    pub maxent_layout: Vec<Vec3>,
    /// Displayed values: scores, community labels, or the delta.
    pub scores: Vec<f64>,
    pub colors: Vec<String>,
    pub color_positions: Vec<f64>,
    pub timing: TimingBreakdown,
    pub stale: bool,
    pub frame: usize,
    pub frame_count: usize,
    pub criterion: DistanceCriterion,
    pub cutoff: f64,
    pub exclude_backbone_neighbors: bool,
    pub measure: Measure,
    pub measure_kind: MeasureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub community_count: Option<usize>,
    pub auto_recompute: bool,
    pub delta_view: bool,
    pub has_buffer: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pending: Option<Target>,
    pub cutoff_range: SliderRange,
}

impl Snapshot {
    pub fn config(&self) -> RinConfig {
        RinConfig { criterion: self.criterion, cutoff: self.cutoff, exclude_backbone_neighbors: self.exclude_backbone_neighbors }
    }

    /// The snapshot with timings zeroed and the delta-related fields reset,
    /// i.e. only what is determined by the committed parameters.
    pub fn view(&self) -> Snapshot {
        let mut v = self.clone();
        v.timing = TimingBreakdown::default();
        v.has_buffer = false;
        v.auto_recompute = true;
        v
    }
}

/// Messages sent to clients, tagged by `"type"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    Snapshot(Box<Snapshot>),
    Error { code: String, message: String },
}

impl ServerMessage {
    pub fn error(err: &SessionError) -> Self {
        Self::Error { code: err.code().to_string(), message: err.to_string() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("server messages are always serialisable")
    }
}

pub fn snapshot(state: &SessionState) -> Snapshot {
    let trajectory = state.trajectory();
    let nodes = trajectory
        .residues()
        .iter()
        .map(|r| NodeInfo { id: r.index, residue: r.name.clone(), chain: r.chain_id.to_string(), seq: r.seq_number })
        .collect();
    let values = state.displayed_values();
    let positions = color::normalize(&values);
    let colors = positions.iter().map(|&t| color::hex(color::spectral(t))).collect();
    let (measure_kind, community_count) = match state.scores() {
        Analysis::Scores(_) => (MeasureKind::Scores, None),
        Analysis::Communities(p) => (MeasureKind::Communities, Some(p.community_count())),
    };
    let config = state.config();
    Snapshot {
        nodes,
        edges: state.rin().graph().edge_vec(),
        protein_layout: state.layouts().protein.coords.clone(),
        maxent_layout: state.layouts().maxent.coords.clone(),
        scores: values,
        colors,
        color_positions: positions,
        timing: state.last_timing(),
        stale: state.is_stale(),
        frame: state.frame_index(),
        frame_count: trajectory.frame_count(),
        criterion: config.criterion,
        cutoff: config.cutoff,
        exclude_backbone_neighbors: config.exclude_backbone_neighbors,
        measure: state.measure(),
        measure_kind,
        community_count,
        auto_recompute: state.auto_recompute(),
        delta_view: state.delta_view(),
        has_buffer: state.score_buffer().is_some(),
        pending: state.pending().copied(),
        cutoff_range: SliderRange { min: CUTOFF_SLIDER_RANGE.0, max: CUTOFF_SLIDER_RANGE.1, step: CUTOFF_SLIDER_STEP },
    }
}
