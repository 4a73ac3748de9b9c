//! Corpus summaries and deterministic SVG figures.
//!
//! The renderer emits standalone SVG 1.1 with all pixel coordinates
//! rounded to two decimals, styles embedded, and no timestamps, so the
//! same plot specification always produces byte-identical output.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use crate::ca::CaResult;
use crate::chrono::PioneerReport;
use crate::corpus::{Corpus, Vocabulary};
use crate::error::{Error, Result};
use crate::mfact::{MfactResult, YearTrajectory};

// ---------- corpus summary ----------

/// Headline counts describing a tokenized corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSummary {
    /// Number of documents.
    pub documents: usize,
    /// Kept token occurrences across all documents.
    pub token_total: usize,
    /// Documents per year, ascending by year; counts sum to
    /// `documents`.
    pub per_year: Vec<(i32, usize)>,
    /// Documents per journal, descending by count (ties by label).
    pub per_journal: Vec<(String, usize)>,
    /// Distinct words before frequency filtering.
    pub vocabulary_before: usize,
    /// Words retained by the frequency thresholds.
    pub vocabulary_after: usize,
}

/// Exact corpus counts: per-year and per-journal document totals,
/// token totals, and vocabulary sizes before/after filtering.
///
/// Errors when the corpus has not been tokenized yet.
pub fn summarize(corpus: &Corpus, vocab: &Vocabulary) -> Result<CorpusSummary> {
    if !corpus.is_tokenized() {
        return Err(Error::InvalidParameter(
            "summaries need a tokenized corpus".into(),
        ));
    }
    let mut per_year: BTreeMap<i32, usize> = BTreeMap::new();
    let mut per_journal: BTreeMap<&str, usize> = BTreeMap::new();
    for document in &corpus.documents {
        *per_year.entry(document.year).or_default() += 1;
        *per_journal.entry(document.journal.as_str()).or_default() += 1;
    }
    let mut journals: Vec<(String, usize)> = per_journal
        .into_iter()
        .map(|(label, count)| (label.to_string(), count))
        .collect();
    journals.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let distinct: BTreeSet<&str> = corpus.tokens.iter().flatten().map(|t| t.as_str()).collect();
    Ok(CorpusSummary {
        documents: corpus.len(),
        token_total: corpus.token_total,
        per_year: per_year.into_iter().collect(),
        per_journal: journals,
        vocabulary_before: distinct.len(),
        vocabulary_after: vocab.entries.len(),
    })
}

// ---------- plot specification ----------

/// What a figure draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Free points in the plane.
    Scatter,
    /// Points joined by a line, in the given order.
    Trajectory,
    /// Vertical bars, one per point, `y` giving the height.
    Bar,
}

/// Which points get text labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelPolicy {
    /// Label every point.
    All,
    /// Label the N points with the highest importance.
    TopN(usize),
    /// No labels.
    None,
}

impl Default for LabelPolicy {
    fn default() -> Self {
        LabelPolicy::TopN(40)
    }
}

/// One plotted point.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    /// Text label (also the bar category).
    pub label: String,
    /// Horizontal data coordinate (ignored for bars).
    pub x: f64,
    /// Vertical data coordinate (the bar height for bars).
    pub y: f64,
    /// Class tag controlling the point's style (`word`, `doc`,
    /// `year`, `pioneer`, …).
    pub class: String,
    /// Ranking value for the label policy (e.g. a contribution).
    pub importance: f64,
}

/// A complete figure description; rendering is a pure function of it.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    /// Figure kind.
    pub kind: PlotKind,
    /// Title drawn above the plot.
    pub title: String,
    /// The points, in draw order.
    pub points: Vec<PlotPoint>,
    /// Horizontal axis label.
    pub x_label: String,
    /// Vertical axis label.
    pub y_label: String,
    /// Pixel width.
    pub width: u32,
    /// Pixel height.
    pub height: u32,
    /// Which points get labels.
    pub label_policy: LabelPolicy,
}

/// Axis caption carrying the axis number and its share of inertia.
pub fn axis_label(axis: usize, percent: f64) -> String {
    format!("axis {} ({percent:.2}%)", axis + 1)
}

// ---------- plot builders ----------

fn coord(matrix: &nalgebra::DMatrix<f64>, i: usize, k: usize) -> f64 {
    if k < matrix.ncols() {
        matrix[(i, k)]
    } else {
        0.0
    }
}

fn percent_or_zero(eigenvalues: &[f64], total: f64, axis: usize) -> f64 {
    if axis < eigenvalues.len() && total > 0.0 {
        100.0 * eigenvalues[axis] / total
    } else {
        0.0
    }
}

/// Word map of a correspondence analysis on axes (1, 2); importance is
/// the summed contribution on the two axes.
pub fn ca_word_map(result: &CaResult) -> PlotSpec {
    let points = (0..result.col_words.len())
        .map(|j| PlotPoint {
            label: result.col_words[j].clone(),
            x: coord(&result.col_coords, j, 0),
            y: coord(&result.col_coords, j, 1),
            class: "word".into(),
            importance: coord(&result.col_contrib, j, 0) + coord(&result.col_contrib, j, 1),
        })
        .collect();
    PlotSpec {
        kind: PlotKind::Scatter,
        title: "Words on the first plane".into(),
        points,
        x_label: axis_label(
            0,
            percent_or_zero(&result.eigenvalues, result.total_inertia, 0),
        ),
        y_label: axis_label(
            1,
            percent_or_zero(&result.eigenvalues, result.total_inertia, 1),
        ),
        width: 720,
        height: 540,
        label_policy: LabelPolicy::default(),
    }
}

/// Document map of a correspondence analysis on axes (1, 2).
pub fn ca_document_map(result: &CaResult) -> PlotSpec {
    let points = (0..result.row_ids.len())
        .map(|i| PlotPoint {
            label: result.row_ids[i].clone(),
            x: coord(&result.row_coords, i, 0),
            y: coord(&result.row_coords, i, 1),
            class: "doc".into(),
            importance: coord(&result.row_contrib, i, 0) + coord(&result.row_contrib, i, 1),
        })
        .collect();
    PlotSpec {
        kind: PlotKind::Scatter,
        title: "Documents on the first plane".into(),
        points,
        x_label: axis_label(
            0,
            percent_or_zero(&result.eigenvalues, result.total_inertia, 0),
        ),
        y_label: axis_label(
            1,
            percent_or_zero(&result.eigenvalues, result.total_inertia, 1),
        ),
        width: 720,
        height: 540,
        label_policy: LabelPolicy::default(),
    }
}

/// Word map of the joint analysis: the frequency group's columns on
/// axes (1, 2); importance is the squared coordinate length.
pub fn mfact_word_map(result: &MfactResult) -> PlotSpec {
    let mut points = Vec::new();
    let mut column = 0;
    for group in &result.groups {
        for label in &group.columns {
            if group.kind == crate::mfact::GroupKind::Frequency {
                let x = coord(&result.col_coords, column, 0);
                let y = coord(&result.col_coords, column, 1);
                points.push(PlotPoint {
                    label: label.clone(),
                    x,
                    y,
                    class: "word".into(),
                    importance: x * x + y * y,
                });
            }
            column += 1;
        }
    }
    PlotSpec {
        kind: PlotKind::Scatter,
        title: "Words on the first joint plane".into(),
        points,
        x_label: axis_label(
            0,
            percent_or_zero(&result.eigenvalues, result.total_inertia, 0),
        ),
        y_label: axis_label(
            1,
            percent_or_zero(&result.eigenvalues, result.total_inertia, 1),
        ),
        width: 720,
        height: 540,
        label_policy: LabelPolicy::default(),
    }
}

/// Year trajectory under the vocabulary viewpoint on axes (1, 2),
/// joined in year order; every year is labelled.
pub fn trajectory_plot(trajectory: &YearTrajectory, result: &MfactResult) -> PlotSpec {
    let points = trajectory
        .points
        .iter()
        .map(|point| PlotPoint {
            label: point.year.to_string(),
            x: point.coords.first().copied().unwrap_or(0.0),
            y: point.coords.get(1).copied().unwrap_or(0.0),
            class: "year".into(),
            importance: point.weight,
        })
        .collect();
    PlotSpec {
        kind: PlotKind::Trajectory,
        title: "Year trajectory (vocabulary viewpoint)".into(),
        points,
        x_label: axis_label(
            0,
            percent_or_zero(&result.eigenvalues, result.total_inertia, 0),
        ),
        y_label: axis_label(
            1,
            percent_or_zero(&result.eigenvalues, result.total_inertia, 1),
        ),
        width: 720,
        height: 480,
        label_policy: LabelPolicy::All,
    }
}

/// Pioneer view: chronology partial coordinate against vocabulary
/// partial coordinate (axis 1). Flagged documents carry the `pioneer`
/// class and get labelled first (importance = gap).
pub fn pioneer_plot(report: &PioneerReport) -> PlotSpec {
    let points = report
        .scores
        .iter()
        .map(|score| PlotPoint {
            label: score.id.clone(),
            x: score.chronology_coord,
            y: score.vocabulary_coord,
            class: if score.pioneer { "pioneer" } else { "doc" }.into(),
            importance: score.gap,
        })
        .collect();
    PlotSpec {
        kind: PlotKind::Scatter,
        title: "Vocabulary lead per document (axis 1)".into(),
        points,
        x_label: "chronology viewpoint".into(),
        y_label: "vocabulary viewpoint".into(),
        width: 720,
        height: 540,
        label_policy: LabelPolicy::TopN(15),
    }
}

/// Documents-per-year bar chart.
pub fn year_bar_chart(summary: &CorpusSummary) -> PlotSpec {
    let points = summary
        .per_year
        .iter()
        .map(|&(year, count)| PlotPoint {
            label: year.to_string(),
            x: 0.0,
            y: count as f64,
            class: "bar".into(),
            importance: count as f64,
        })
        .collect();
    PlotSpec {
        kind: PlotKind::Bar,
        title: "Documents per year".into(),
        points,
        x_label: "year".into(),
        y_label: "documents".into(),
        width: 640,
        height: 400,
        label_policy: LabelPolicy::All,
    }
}

/// Documents-per-journal bar chart (journals in descending count
/// order).
pub fn journal_bar_chart(summary: &CorpusSummary) -> PlotSpec {
    let points = summary
        .per_journal
        .iter()
        .map(|(journal, count)| PlotPoint {
            label: journal.clone(),
            x: 0.0,
            y: *count as f64,
            class: "bar".into(),
            importance: *count as f64,
        })
        .collect();
    PlotSpec {
        kind: PlotKind::Bar,
        title: "Documents per journal".into(),
        points,
        x_label: "journal".into(),
        y_label: "documents".into(),
        width: 640,
        height: 400,
        label_policy: LabelPolicy::All,
    }
}

// ---------- SVG rendering ----------

fn xml_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Data value shown on a tick: integers plain, everything else with
/// two decimals.
fn tick(value: f64) -> String {
    if (value - value.round()).abs() < 1e-9 && value.abs() < 1e9 {
        format!("{}", value.round() as i64)
    } else {
        format!("{value:.2}")
    }
}

/// Linear map from a data interval to a pixel interval. The data
/// interval is padded by 5% on each side (or half a unit when
/// degenerate), so the transform is affine and strictly increasing.
struct Scale {
    data_lo: f64,
    data_hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Scale {
    fn new(data_lo: f64, data_hi: f64, px_lo: f64, px_hi: f64) -> Self {
        let span = data_hi - data_lo;
        let pad = if span > 0.0 { 0.05 * span } else { 0.5 };
        Scale {
            data_lo: data_lo - pad,
            data_hi: data_hi + pad,
            px_lo,
            px_hi,
        }
    }

    fn apply(&self, value: f64) -> f64 {
        let t = (value - self.data_lo) / (self.data_hi - self.data_lo);
        self.px_lo + t * (self.px_hi - self.px_lo)
    }

    fn covers(&self, value: f64) -> bool {
        self.data_lo <= value && value <= self.data_hi
    }
}

const STYLE: &str = "\
text { font-family: Helvetica, Arial, sans-serif; font-size: 11px; fill: #222222; }\n\
.title { font-size: 14px; font-weight: bold; }\n\
.axis-label { fill: #444444; }\n\
.tick { font-size: 9px; fill: #666666; }\n\
.frame { fill: none; stroke: #888888; stroke-width: 1; }\n\
.origin { stroke: #bbbbbb; stroke-width: 1; stroke-dasharray: 4 3; }\n\
.line { fill: none; stroke: #2a6fb0; stroke-width: 1.5; }\n\
.pt { fill: #2a6fb0; }\n\
.pt.word { fill: #2a6fb0; }\n\
.pt.doc { fill: #7f7f7f; }\n\
.pt.year { fill: #b0482a; }\n\
.pt.pioneer { fill: #c21807; }\n\
.bar { fill: #2a6fb0; }\n\
.pt-label { font-size: 10px; fill: #333333; }\n";

/// Which point indices receive labels, honoring the policy and
/// dropping duplicate label texts (highest importance wins; draw
/// order breaks exact ties).
fn select_labels(spec: &PlotSpec) -> Vec<bool> {
    let budget = match spec.label_policy {
        LabelPolicy::All => spec.points.len(),
        LabelPolicy::TopN(n) => n,
        LabelPolicy::None => 0,
    };
    let mut order: Vec<usize> = (0..spec.points.len()).collect();
    order.sort_by(|&a, &b| {
        spec.points[b]
            .importance
            .total_cmp(&spec.points[a].importance)
            .then_with(|| a.cmp(&b))
    });
    let mut selected = vec![false; spec.points.len()];
    let mut used: BTreeSet<&str> = BTreeSet::new();
    let mut granted = 0;
    for index in order {
        if granted == budget {
            break;
        }
        let label = spec.points[index].label.as_str();
        if used.insert(label) {
            selected[index] = true;
            granted += 1;
        }
    }
    selected
}

fn validate(spec: &PlotSpec) -> Result<()> {
    if spec.points.is_empty() {
        return Err(Error::EmptyPlot(spec.title.clone()));
    }
    if spec.width < 160 || spec.height < 120 {
        return Err(Error::InvalidParameter(format!(
            "plot `{}`: dimensions {}x{} below the 160x120 minimum",
            spec.title, spec.width, spec.height
        )));
    }
    for point in &spec.points {
        if !(point.x.is_finite() && point.y.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "plot `{}`: non-finite coordinates for `{}`",
                spec.title, point.label
            )));
        }
    }
    Ok(())
}

/// Renders the figure to a standalone SVG 1.1 document string.
///
/// Rendering is deterministic: identical specifications produce
/// byte-identical output. Errors on an empty point set, non-finite
/// coordinates, or degenerate dimensions.
pub fn render_svg_string(spec: &PlotSpec) -> Result<String> {
    validate(spec)?;
    let width = f64::from(spec.width);
    let height = f64::from(spec.height);
    let (left, right, top, bottom) = (56.0, 24.0, 40.0, 52.0);
    let frame = (left, top, width - right, height - bottom);

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        spec.width, spec.height, spec.width, spec.height
    ));
    svg.push_str(&format!("<style>\n{STYLE}</style>\n"));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
        spec.width, spec.height
    ));
    svg.push_str(&format!(
        "<text class=\"title\" x=\"{:.2}\" y=\"24\" text-anchor=\"middle\">{}</text>\n",
        width / 2.0,
        xml_escape(&spec.title)
    ));
    svg.push_str(&format!(
        "<rect class=\"frame\" x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\"/>\n",
        frame.0,
        frame.1,
        frame.2 - frame.0,
        frame.3 - frame.1
    ));
    svg.push_str(&format!(
        "<text class=\"axis-label\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n",
        (frame.0 + frame.2) / 2.0,
        height - 10.0,
        xml_escape(&spec.x_label)
    ));
    svg.push_str(&format!(
        "<text class=\"axis-label\" x=\"14\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2})\">{}</text>\n",
        (frame.1 + frame.3) / 2.0,
        (frame.1 + frame.3) / 2.0,
        xml_escape(&spec.y_label)
    ));

    match spec.kind {
        PlotKind::Scatter | PlotKind::Trajectory => {
            render_plane(spec, frame, &mut svg);
        }
        PlotKind::Bar => {
            render_bars(spec, frame, &mut svg);
        }
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn render_plane(spec: &PlotSpec, frame: (f64, f64, f64, f64), svg: &mut String) {
    let xs: Vec<f64> = spec.points.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = spec.points.iter().map(|p| p.y).collect();
    let x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let x_max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let y_min = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let y_max = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sx = Scale::new(x_min, x_max, frame.0, frame.2);
    // Pixel y grows downward; flip the output interval.
    let sy = Scale::new(y_min, y_max, frame.3, frame.1);

    // Dashed origin lines when zero is inside the padded range.
    if sx.covers(0.0) {
        let x = sx.apply(0.0);
        svg.push_str(&format!(
            "<line class=\"origin\" x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\"/>\n",
            frame.1, frame.3
        ));
    }
    if sy.covers(0.0) {
        let y = sy.apply(0.0);
        svg.push_str(&format!(
            "<line class=\"origin\" x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\"/>\n",
            frame.0, frame.2
        ));
    }
    // Corner ticks with the data extremes.
    svg.push_str(&format!(
        "<text class=\"tick\" x=\"{:.2}\" y=\"{:.2}\">{}</text>\n",
        frame.0,
        frame.3 + 12.0,
        tick(x_min)
    ));
    svg.push_str(&format!(
        "<text class=\"tick\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
        frame.2,
        frame.3 + 12.0,
        tick(x_max)
    ));
    svg.push_str(&format!(
        "<text class=\"tick\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
        frame.0 - 4.0,
        frame.3,
        tick(y_min)
    ));
    svg.push_str(&format!(
        "<text class=\"tick\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
        frame.0 - 4.0,
        frame.1 + 8.0,
        tick(y_max)
    ));

    if spec.kind == PlotKind::Trajectory {
        let path: Vec<String> = spec
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", sx.apply(p.x), sy.apply(p.y)))
            .collect();
        svg.push_str(&format!(
            "<polyline class=\"line\" points=\"{}\"/>\n",
            path.join(" ")
        ));
    }
    for point in &spec.points {
        svg.push_str(&format!(
            "<circle class=\"pt {}\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\"/>\n",
            xml_escape(&point.class),
            sx.apply(point.x),
            sy.apply(point.y)
        ));
    }
    let selected = select_labels(spec);
    for (point, &keep) in spec.points.iter().zip(&selected) {
        if keep {
            svg.push_str(&format!(
                "<text class=\"pt-label\" x=\"{:.2}\" y=\"{:.2}\">{}</text>\n",
                sx.apply(point.x) + 4.0,
                sy.apply(point.y) - 4.0,
                xml_escape(&point.label)
            ));
        }
    }
}

fn render_bars(spec: &PlotSpec, frame: (f64, f64, f64, f64), svg: &mut String) {
    let y_top = spec.points.iter().map(|p| p.y).fold(0.0, f64::max);
    let y_bottom = spec.points.iter().map(|p| p.y).fold(0.0, f64::min);
    let sy = Scale::new(y_bottom, y_top, frame.3, frame.1);
    let baseline = sy.apply(0.0);
    let slot = (frame.2 - frame.0) / spec.points.len() as f64;
    let bar_width = 0.7 * slot;

    svg.push_str(&format!(
        "<text class=\"tick\" x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
        frame.0 - 4.0,
        frame.1 + 8.0,
        tick(y_top)
    ));
    svg.push_str(&format!(
        "<line class=\"origin\" x1=\"{:.2}\" y1=\"{baseline:.2}\" x2=\"{:.2}\" y2=\"{baseline:.2}\"/>\n",
        frame.0, frame.2
    ));
    for (i, point) in spec.points.iter().enumerate() {
        let center = frame.0 + (i as f64 + 0.5) * slot;
        let top = sy.apply(point.y);
        let (y, h) = if top <= baseline {
            (top, baseline - top)
        } else {
            (baseline, top - baseline)
        };
        svg.push_str(&format!(
            "<rect class=\"bar {}\" x=\"{:.2}\" y=\"{y:.2}\" width=\"{bar_width:.2}\" height=\"{h:.2}\"/>\n",
            xml_escape(&point.class),
            center - bar_width / 2.0,
        ));
    }
    let selected = select_labels(spec);
    for (i, (point, &keep)) in spec.points.iter().zip(&selected).enumerate() {
        if keep {
            let center = frame.0 + (i as f64 + 0.5) * slot;
            svg.push_str(&format!(
                "<text class=\"pt-label\" x=\"{center:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n",
                frame.3 + 14.0,
                xml_escape(&point.label)
            ));
        }
    }
}

/// Renders the figure and writes it to `path`.
pub fn render_svg<P: AsRef<Path>>(spec: &PlotSpec, path: P) -> Result<()> {
    let svg = render_svg_string(spec)?;
    let mut file = std::fs::File::create(path)?;
    file.write_all(svg.as_bytes())?;
    Ok(())
}
