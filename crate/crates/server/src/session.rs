//! Session state machine. Events never mutate a state in place:
//! [`handle_event`] returns a new state, so a failed event leaves the caller's
//! state (and anything published from it) untouched.

use std::sync::Arc;
use std::time::Instant;

use rinx_core::analytics::{compute_measure, Analysis, AnalysisParams, Measure, NodeScores};
use rinx_core::layout::{maxent_stress_layout, protein_layout, Layout3D, LayoutParams};
use rinx_core::rin::{apply_cutoff_change, apply_frame_change, build_rin};
use rinx_core::{DistanceCriterion, Rin, RinConfig, Trajectory};
use serde::{Deserialize, Serialize};

use crate::error::SessionError;

/// Per-session knobs that are not driven by events.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SessionOptions {
    pub layout: LayoutParams,
    pub analysis: AnalysisParams,
    /// Seed each Maxent-Stress recomputation with the previous layout.
    pub warm_start: bool,
}

impl Default for SessionOptions {
    fn default() -> Self {
        Self { layout: LayoutParams::default(), analysis: AnalysisParams::default(), warm_start: true }
    }
}

/// The parameters a view is computed for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub frame: usize,
    pub config: RinConfig,
    pub measure: Measure,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingBreakdown {
    pub edge_update_ms: f64,
    pub layout_ms: f64,
    pub measure_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpdateEvent {
    SetFrame(usize),
    SetCutoff(f64),
    SetCriterion(DistanceCriterion),
    SetMeasure(Measure),
    /// Flip the flag, or set it when a value is given.
    ToggleAuto(Option<bool>),
    ToggleDelta(Option<bool>),
    Recompute,
    GetSnapshot,
}

impl UpdateEvent {
    pub fn is_mutating(&self) -> bool {
        !matches!(self, Self::GetSnapshot)
    }
}

#[derive(Debug, Clone)]
pub struct Layouts {
    pub protein: Arc<Layout3D>,
    pub maxent: Arc<Layout3D>,
}

#[derive(Debug, Clone)]
pub struct SessionState {
    trajectory: Arc<Trajectory>,
    trajectory_ref: String,
    options: SessionOptions,
    config: RinConfig,
    frame_index: usize,
    measure: Measure,
    rin: Arc<Rin>,
    scores: Arc<Analysis>,
    score_buffer: Option<Arc<NodeScores>>,
    layouts: Layouts,
    auto_recompute: bool,
    delta_view: bool,
    pending: Option<Target>,
    last_timing: TimingBreakdown,
}

fn elapsed_ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn check_frame(trajectory: &Trajectory, frame: usize) -> Result<(), SessionError> {
    if frame >= trajectory.frame_count() {
        return Err(SessionError::InvalidPayload(format!("frame {frame} out of range (trajectory has {})", trajectory.frame_count())));
    }
    Ok(())
}

fn check_cutoff(cutoff: f64) -> Result<(), SessionError> {
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(SessionError::InvalidPayload(format!("cut-off must be a positive number of Å, got {cutoff}")));
    }
    Ok(())
}

/// Builds the initial view for `target`: RIN, both layouts and the measure.
/// Auto recompute starts on and the delta view off.
pub fn create_session(trajectory: Arc<Trajectory>, target: Target, options: SessionOptions) -> Result<SessionState, SessionError> {
    check_frame(&trajectory, target.frame)?;
    check_cutoff(target.config.cutoff)?;
    target.config.validate()?;
    options.layout.validate()?;
    let start = Instant::now();
    let topo = trajectory.topology();
    let frame = &trajectory.frames()[target.frame];

    let t = Instant::now();
    let rin = build_rin(frame, topo, &target.config)?;
    let edge_update_ms = elapsed_ms(t);

    let t = Instant::now();
    let protein = protein_layout(frame, topo)?;
    let (maxent, _) = maxent_stress_layout(rin.graph(), &options.layout, None)?;
    let layout_ms = elapsed_ms(t);

    let t = Instant::now();
    let scores = compute_measure(rin.graph(), target.measure, &options.analysis)?;
    let measure_ms = elapsed_ms(t);

    Ok(SessionState {
        trajectory_ref: trajectory.source_path().to_string(),
        trajectory,
        options,
        config: target.config,
        frame_index: target.frame,
        measure: target.measure,
        rin: Arc::new(rin),
        scores: Arc::new(scores),
        score_buffer: None,
        layouts: Layouts { protein: Arc::new(protein), maxent: Arc::new(maxent) },
        auto_recompute: true,
        delta_view: false,
        pending: None,
        last_timing: TimingBreakdown { edge_update_ms, layout_ms, measure_ms, total_ms: elapsed_ms(start) },
    })
}

/// Applies one event. Identity events (setting a parameter to its current
/// value) return an unchanged state with zero timings. With auto recompute
/// off, parameter changes only record the pending target; `Recompute` (or
/// switching auto back on) commits it.
pub fn handle_event(state: &SessionState, event: &UpdateEvent) -> Result<(SessionState, TimingBreakdown), SessionError> {
    let mut next = state.clone();
    let mut target = state.target();
    match *event {
        UpdateEvent::SetFrame(f) => {
            check_frame(&state.trajectory, f)?;
            target.frame = f;
        }
        UpdateEvent::SetCutoff(c) => {
            check_cutoff(c)?;
            target.config.cutoff = c;
        }
        UpdateEvent::SetCriterion(c) => target.config.criterion = c,
        UpdateEvent::SetMeasure(m) => target.measure = m,
        UpdateEvent::ToggleAuto(value) => next.auto_recompute = value.unwrap_or(!state.auto_recompute),
        UpdateEvent::ToggleDelta(value) => {
            let wanted = value.unwrap_or(!state.delta_view);
            next.delta_view = wanted && !state.measure.is_community();
        }
        UpdateEvent::Recompute | UpdateEvent::GetSnapshot => {}
    }
    if matches!(event, UpdateEvent::GetSnapshot) {
        return Ok((next, TimingBreakdown::default()));
    }

    next.pending = (target != state.committed()).then_some(target);
    let run = next.auto_recompute || matches!(event, UpdateEvent::Recompute);
    match next.pending {
        Some(t) if run => {
            let timing = next.commit(t)?;
            Ok((next, timing))
        }
        _ => Ok((next, TimingBreakdown::default())),
    }
}

impl SessionState {
    /// Recomputes exactly what `target` invalidates, on `self`.
    fn commit(&mut self, target: Target) -> Result<TimingBreakdown, SessionError> {
        let start = Instant::now();
        let trajectory = Arc::clone(&self.trajectory);
        let topo = trajectory.topology();
        let frame = &trajectory.frames()[target.frame];

        let frame_changed = target.frame != self.frame_index;
        let graph_kind_changed = target.config.criterion != self.config.criterion
            || target.config.exclude_backbone_neighbors != self.config.exclude_backbone_neighbors;
        let cutoff_changed = target.config.cutoff != self.config.cutoff;
        let graph_changed = frame_changed || graph_kind_changed || cutoff_changed;
        let measure_changed = target.measure != self.measure;

        let t = Instant::now();
        let rin = if frame_changed {
            Arc::new(apply_frame_change(&target.config, topo, frame)?)
        } else if graph_kind_changed {
            Arc::new(build_rin(frame, topo, &target.config)?)
        } else if cutoff_changed {
            Arc::new(apply_cutoff_change(&self.rin, frame, topo, target.config.cutoff)?.0)
        } else {
            Arc::clone(&self.rin)
        };
        let edge_update_ms = if graph_changed { elapsed_ms(t) } else { 0.0 };

        let t = Instant::now();
        let protein = if frame_changed { Arc::new(protein_layout(frame, topo)?) } else { Arc::clone(&self.layouts.protein) };
        let maxent = if graph_changed {
            let warm = self.options.warm_start.then_some(&*self.layouts.maxent);
            Arc::new(maxent_stress_layout(rin.graph(), &self.options.layout, warm)?.0)
        } else {
            Arc::clone(&self.layouts.maxent)
        };
        let layout_ms = if graph_changed { elapsed_ms(t) } else { 0.0 };

        let t = Instant::now();
        let (scores, buffer) = if graph_changed || measure_changed {
            let scores = Arc::new(compute_measure(rin.graph(), target.measure, &self.options.analysis)?);
            let buffer = match (&*self.scores, measure_changed) {
                (Analysis::Scores(old), false) => Some(Arc::new(old.clone())),
                _ => None,
            };
            (scores, buffer)
        } else {
            (Arc::clone(&self.scores), self.score_buffer.clone())
        };
        let measure_ms = if graph_changed || measure_changed { elapsed_ms(t) } else { 0.0 };

        self.config = target.config;
        self.frame_index = target.frame;
        self.measure = target.measure;
        self.rin = rin;
        self.layouts = Layouts { protein, maxent };
        self.scores = scores;
        self.score_buffer = buffer;
        if target.measure.is_community() {
            self.delta_view = false;
        }
        self.pending = None;
        let timing = TimingBreakdown { edge_update_ms, layout_ms, measure_ms, total_ms: elapsed_ms(start) };
        self.last_timing = timing;
        Ok(timing)
    }

    /// Parameters of the committed view.
    pub fn committed(&self) -> Target {
        Target { frame: self.frame_index, config: self.config, measure: self.measure }
    }

    /// Parameters the next recompute will produce: the pending target if the
    /// view is stale, the committed one otherwise.
    pub fn target(&self) -> Target {
        self.pending.unwrap_or_else(|| self.committed())
    }

    pub fn trajectory(&self) -> &Arc<Trajectory> {
        &self.trajectory
    }

    pub fn trajectory_ref(&self) -> &str {
        &self.trajectory_ref
    }

    pub fn options(&self) -> &SessionOptions {
        &self.options
    }

    pub fn config(&self) -> &RinConfig {
        &self.config
    }

    pub fn frame_index(&self) -> usize {
        self.frame_index
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn rin(&self) -> &Rin {
        &self.rin
    }

    pub fn scores(&self) -> &Analysis {
        &self.scores
    }

    pub fn score_buffer(&self) -> Option<&NodeScores> {
        self.score_buffer.as_deref()
    }

    pub fn layouts(&self) -> &Layouts {
        &self.layouts
    }

    pub fn auto_recompute(&self) -> bool {
        self.auto_recompute
    }

    pub fn delta_view(&self) -> bool {
        self.delta_view
    }

    pub fn pending(&self) -> Option<&Target> {
        self.pending.as_ref()
    }

    pub fn is_stale(&self) -> bool {
        self.pending.is_some()
    }

    pub fn last_timing(&self) -> TimingBreakdown {
        self.last_timing
    }

    /// Values shown in the view: the scores, or `scores - buffer` in delta
    /// view (all zeros while no buffer exists).
    pub fn displayed_values(&self) -> Vec<f64> {
        match (&*self.scores, self.delta_view) {
            (Analysis::Scores(current), true) => match &self.score_buffer {
                Some(buffer) => current.values.iter().zip(&buffer.values).map(|(a, b)| a - b).collect(),
                None => vec![0.0; current.len()],
            },
            (analysis, _) => analysis.values(),
        }
    }
}
