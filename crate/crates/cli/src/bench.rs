//! Phase timings of headless sessions.
//!
//! Every cell of the `cutoffs × measures` matrix yields three records, one
//! per event kind. Each record holds per-phase medians over the repetitions.

use std::fmt::Write as _;
use std::io::Write;
use std::sync::Arc;

use rinx_core::analytics::{AnalysisParams, Measure};
use rinx_core::layout::LayoutParams;
use rinx_core::{DistanceCriterion, Error, Result, RinConfig, Trajectory};
use rinx_server::{create_session, handle_event, SessionOptions, SessionState, Target, TimingBreakdown, UpdateEvent};
use serde::{Deserialize, Serialize};

pub const CSV_HEADER: &str =
    "protein_id,n_nodes,n_edges,event_kind,cutoff,measure,edge_update_ms,layout_ms,measure_ms,total_ms,repetitions";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    MeasureSwitch,
    CutoffSwitch,
    FrameSwitch,
}

impl EventKind {
    pub const ALL: [EventKind; 3] = [Self::MeasureSwitch, Self::CutoffSwitch, Self::FrameSwitch];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub protein_id: String,
    pub n_nodes: usize,
    pub n_edges: usize,
    pub event_kind: EventKind,
    pub cutoff: f64,
    pub measure: Measure,
    pub edge_update_ms: f64,
    pub layout_ms: f64,
    pub measure_ms: f64,
    pub total_ms: f64,
    pub repetitions: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    pub event_kind: EventKind,
    pub cutoff: f64,
    pub measure: Measure,
    pub error: String,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub protein_id: String,
    pub criterion: DistanceCriterion,
    pub cutoffs: Vec<f64>,
    pub measures: Vec<Measure>,
    /// Frames visited by frame-switch cells, cyclically. Measure and
    /// cut-off cells run on the first one.
    pub frames: Vec<usize>,
    pub repetitions: usize,
    /// Never warm-start the Maxent-Stress layout.
    pub cold: bool,
    pub layout: LayoutParams,
    pub analysis: AnalysisParams,
}

impl BenchConfig {
    pub fn new(protein_id: impl Into<String>) -> Self {
        Self {
            protein_id: protein_id.into(),
            criterion: DistanceCriterion::MinimumAtomDistance,
            cutoffs: vec![4.5, 8.0],
            measures: Measure::ALL.to_vec(),
            frames: vec![0, 1],
            repetitions: 5,
            cold: false,
            layout: LayoutParams::default(),
            analysis: AnalysisParams::default(),
        }
    }

    fn options(&self) -> SessionOptions {
        SessionOptions { layout: self.layout, analysis: self.analysis, warm_start: !self.cold }
    }
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub failures: Vec<CellFailure>,
}

fn dedup<T: PartialEq + Copy>(items: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(items.len());
    for &x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

fn median_timing(samples: &[TimingBreakdown]) -> TimingBreakdown {
    let pick = |f: fn(&TimingBreakdown) -> f64| median(&mut samples.iter().map(f).collect::<Vec<_>>());
    TimingBreakdown {
        edge_update_ms: pick(|t| t.edge_update_ms),
        layout_ms: pick(|t| t.layout_ms),
        measure_ms: pick(|t| t.measure_ms),
        total_ms: pick(|t| t.total_ms),
    }
}

fn step(state: &SessionState, event: UpdateEvent) -> std::result::Result<(SessionState, TimingBreakdown), String> {
    handle_event(state, &event).map_err(|e| e.to_string())
}

/// Measure the cell's event starts from: anything but `measure`.
fn other_measure(measure: Measure) -> Measure {
    if measure == Measure::Degree {
        Measure::Closeness
    } else {
        Measure::Degree
    }
}

struct Cell<'a> {
    config: &'a BenchConfig,
    base: &'a SessionState,
    cutoff: f64,
    previous_cutoff: f64,
    frames: &'a [usize],
}

impl Cell<'_> {
    /// Source states plus the event that leaves each of them.
    fn plan(&self, kind: EventKind) -> std::result::Result<Vec<(SessionState, UpdateEvent)>, String> {
        let base = self.base;
        Ok(match kind {
            EventKind::MeasureSwitch => {
                let from = step(base, UpdateEvent::SetMeasure(other_measure(base.measure())))?.0;
                vec![(from, UpdateEvent::SetMeasure(base.measure()))]
            }
            EventKind::CutoffSwitch => {
                let from = step(base, UpdateEvent::SetCutoff(self.previous_cutoff))?.0;
                vec![(from, UpdateEvent::SetCutoff(self.cutoff))]
            }
            EventKind::FrameSwitch => {
                let k = self.frames.len();
                let mut plan = Vec::with_capacity(k);
                for i in 0..k {
                    let from = step(base, UpdateEvent::SetFrame(self.frames[i]))?.0;
                    plan.push((from, UpdateEvent::SetFrame(self.frames[(i + 1) % k])));
                }
                plan
            }
        })
    }

    fn run(&self, kind: EventKind) -> std::result::Result<BenchRecord, String> {
        let plan = self.plan(kind)?;
        let mut samples = Vec::with_capacity(self.config.repetitions);
        let mut size = None;
        for rep in 0..self.config.repetitions {
            let (from, event) = &plan[rep % plan.len()];
            let (to, timing) = step(from, *event)?;
            size.get_or_insert((to.rin().node_count(), to.rin().edge_count()));
            samples.push(timing);
        }
        let (n_nodes, n_edges) = size.unwrap_or_default();
        let t = median_timing(&samples);
        Ok(BenchRecord {
            protein_id: self.config.protein_id.clone(),
            n_nodes,
            n_edges,
            event_kind: kind,
            cutoff: self.cutoff,
            measure: self.base.measure(),
            edge_update_ms: t.edge_update_ms,
            layout_ms: t.layout_ms,
            measure_ms: t.measure_ms,
            total_ms: t.total_ms,
            repetitions: samples.len(),
        })
    }
}

/// Runs the matrix strictly sequentially. Measure and cut-off switches
/// start on the first listed frame; a cut-off switch arrives from the
/// previous cut-off in the list (cyclically, or `cutoff + 0.5` Å when only
/// one is given). Frame switches cycle through the listed frames.
///
/// A failing cell is reported in [`BenchReport::failures`] and the run
/// continues.
pub fn run_benchmark(trajectory: Arc<Trajectory>, config: &BenchConfig) -> Result<BenchReport> {
    if trajectory.frame_count() < 2 {
        return Err(Error::InvalidConfig("benchmark needs a trajectory with at least 2 frames".into()));
    }
    if config.repetitions < 3 {
        return Err(Error::InvalidConfig("benchmark needs at least 3 repetitions".into()));
    }
    let frames = dedup(&config.frames);
    if frames.len() < 2 {
        return Err(Error::InvalidConfig("benchmark needs at least 2 distinct frames".into()));
    }
    if let Some(&f) = frames.iter().find(|&&f| f >= trajectory.frame_count()) {
        return Err(Error::InvalidConfig(format!("frame {f} out of range (trajectory has {})", trajectory.frame_count())));
    }
    let cutoffs = dedup(&config.cutoffs);
    if cutoffs.is_empty() || cutoffs.iter().any(|c| !(*c > 0.0 && c.is_finite())) {
        return Err(Error::InvalidConfig("cut-offs must be a non-empty list of positive values".into()));
    }
    let measures = dedup(&config.measures);
    if measures.is_empty() {
        return Err(Error::InvalidConfig("no measures selected".into()));
    }

    let mut report = BenchReport::default();
    for (ci, &cutoff) in cutoffs.iter().enumerate() {
        let previous_cutoff = if cutoffs.len() > 1 { cutoffs[(ci + cutoffs.len() - 1) % cutoffs.len()] } else { cutoff + 0.5 };
        for &measure in &measures {
            let fail = |report: &mut BenchReport, kinds: &[EventKind], error: String| {
                for &event_kind in kinds {
                    tracing::warn!(?event_kind, cutoff, %measure, %error, "benchmark cell failed");
                    report.failures.push(CellFailure { event_kind, cutoff, measure, error: error.clone() });
                }
            };
            let target = Target {
                frame: frames[0],
                config: RinConfig { criterion: config.criterion, cutoff, exclude_backbone_neighbors: false },
                measure,
            };
            let base = match create_session(Arc::clone(&trajectory), target, config.options()) {
                Ok(base) => base,
                Err(e) => {
                    fail(&mut report, &EventKind::ALL, e.to_string());
                    continue;
                }
            };
            let cell = Cell { config, base: &base, cutoff, previous_cutoff, frames: &frames };
            for kind in EventKind::ALL {
                match cell.run(kind) {
                    Ok(record) => {
                        tracing::info!(?kind, cutoff, %measure, total_ms = record.total_ms, "cell done");
                        report.records.push(record);
                    }
                    Err(e) => fail(&mut report, &[kind], e),
                }
            }
        }
    }
    Ok(report)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.into())
}

pub fn write_csv(records: &[BenchRecord], sink: impl Write) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(sink);
    writer.write_record(CSV_HEADER.split(',')).map_err(csv_error)?;
    for record in records {
        writer.serialize(record).map_err(csv_error)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv(source: impl std::io::Read) -> Result<Vec<BenchRecord>> {
    csv::Reader::from_reader(source).deserialize().map(|r| r.map_err(csv_error)).collect()
}

/// Plain-text table of total times, grouped by event kind, with low and
/// high cut-offs in separate columns.
pub fn summary(records: &[BenchRecord]) -> String {
    let mut cutoffs: Vec<f64> = records.iter().map(|r| r.cutoff).collect();
    cutoffs.sort_by(f64::total_cmp);
    cutoffs.dedup();
    let mut out = String::new();
    for kind in EventKind::ALL {
        let rows: Vec<&BenchRecord> = records.iter().filter(|r| r.event_kind == kind).collect();
        if rows.is_empty() {
            continue;
        }
        let _ = write!(out, "{kind:?} total_ms (median)\n  {:<14}", "measure");
        for c in &cutoffs {
            let _ = write!(out, "{:>12}", format!("{c} Å"));
        }
        out.push('\n');
        let measures = dedup(&rows.iter().map(|r| r.measure).collect::<Vec<_>>());
        for m in measures {
            let _ = write!(out, "  {:<14}", m.as_str());
            for &c in &cutoffs {
                match rows.iter().find(|r| r.measure == m && r.cutoff == c) {
                    Some(r) => write!(out, "{:>12.2}", r.total_ms),
                    None => write!(out, "{:>12}", "-"),
                }
                .ok();
            }
            out.push('\n');
        }
    }
    out
}
