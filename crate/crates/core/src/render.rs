//! Text and SVG pictures of configuration diagrams and cylindric diagrams.
//!
//! Text legend, top row first:
//!
//! ```text
//! +  lattice point          -  |  grid edge
//! R  red path edge          G  green path edge      B  both paths
//! #### intersection cell    NNNr / NNNl  label right / left of the red cut
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::config::{Configuration, GraphShape};
use crate::cylindric::{Cylinder, Side};
use crate::error::{Result, SandpileError};
use crate::rank::r_vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Step {
    N,
    E,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticePath {
    pub start: (i64, i64),
    pub steps: Vec<Step>,
}

impl LatticePath {
    /// Unit edges as `(from, to)` pairs.
    fn edges(&self) -> Vec<((i64, i64), (i64, i64))> {
        let mut p = self.start;
        self.steps
            .iter()
            .map(|s| {
                let q = match s {
                    Step::N => (p.0, p.1 + 1),
                    Step::E => (p.0 + 1, p.1),
                };
                let e = (p, q);
                p = q;
                e
            })
            .collect()
    }

    fn points(&self) -> Vec<(i64, i64)> {
        let mut pts = vec![self.start];
        pts.extend(self.edges().into_iter().map(|e| e.1));
        pts
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Annotation {
    pub column: i64,
    pub row: i64,
    pub text: String,
    pub side: Option<Side>,
}

/// Everything the renderers draw. Columns run over `first_column..first_column + width`
/// and rows over `0..height`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramSpec {
    pub shape: GraphShape,
    pub first_column: i64,
    pub width: i64,
    pub height: i64,
    pub red: LatticePath,
    pub green: LatticePath,
    pub shaded: Vec<(i64, i64)>,
    pub annotations: Vec<Annotation>,
}

fn require_stable_sorted(u: &Configuration) -> Result<()> {
    if !u.is_stable() || !u.is_sorted() {
        return Err(SandpileError::Precondition(format!("diagram needs a stable sorted configuration, got {u}")));
    }
    Ok(())
}

/// Green path with its north step in row `i` at distance `b_i + 1` from the west edge.
fn green_path(b: &[i64], m: i64) -> LatticePath {
    let mut steps = Vec::new();
    let mut x = 0;
    for &bi in b {
        while x < bi + 1 {
            steps.push(Step::E);
            x += 1;
        }
        steps.push(Step::N);
    }
    steps.extend(std::iter::repeat(Step::E).take((m - x).max(0) as usize));
    LatticePath { start: (0, 0), steps }
}

/// Red path with its east step in column `j` at height `a_j + 1`, the last column at the top.
fn red_path(a: &[i64], n: i64) -> LatticePath {
    let mut steps = Vec::new();
    let mut y = 0;
    for h in a.iter().map(|&aj| aj + 1).chain(std::iter::once(n)) {
        while y < h {
            steps.push(Step::N);
            y += 1;
        }
        steps.push(Step::E);
    }
    LatticePath { start: (0, 0), steps }
}

/// The diagram of a stable sorted configuration, with its intersection area shaded.
pub fn diagram_of(u: &Configuration) -> Result<DiagramSpec> {
    require_stable_sorted(u)?;
    let shape = u.shape();
    let (m, n) = (shape.m as i64, shape.n as i64);
    let heights: Vec<i64> = u.a().iter().map(|&x| x + 1).chain(std::iter::once(n)).collect();
    let mut shaded = Vec::new();
    for (row, &bj) in u.b().iter().enumerate() {
        for col in 0..=bj.min(m - 1) {
            if (row as i64) < heights[col as usize] {
                shaded.push((col, row as i64));
            }
        }
    }
    Ok(DiagramSpec {
        shape,
        first_column: 0,
        width: m,
        height: n,
        red: red_path(u.a(), n),
        green: green_path(u.b(), m),
        shaded,
        annotations: Vec::new(),
    })
}

/// Reads the partial configuration back off a plain diagram.
pub fn configuration_of(spec: &DiagramSpec) -> Result<Configuration> {
    let bad = |why: &str| SandpileError::Precondition(format!("not a configuration diagram: {why}"));
    let (m, n) = (spec.shape.m as i64, spec.shape.n as i64);
    if spec.red.start != (0, 0) || spec.green.start != (0, 0) {
        return Err(bad("paths must start at the origin"));
    }
    for path in [&spec.red, &spec.green] {
        let norths = path.steps.iter().filter(|&&s| s == Step::N).count() as i64;
        if norths != n || path.steps.len() as i64 != m + n {
            return Err(bad("paths must have n north and m east steps"));
        }
    }
    let b: Vec<i64> = spec.green.edges().iter().filter(|e| e.1 .0 == e.0 .0).map(|e| e.0 .0 - 1).collect();
    let mut a: Vec<i64> = spec.red.edges().iter().filter(|e| e.1 .1 == e.0 .1).map(|e| e.0 .1 - 1).collect();
    if a.pop() != Some(n - 1) {
        return Err(bad("the sink column must sit on the top edge"));
    }
    Configuration::new(spec.shape, a, None, b)
}

/// Cylindric diagram of a parking sorted configuration labelled by `0..=sink`.
///
/// The green path is the usual one; the red path is the cut at `ρ(t)` in row `t`.
pub fn cylindric_diagram(u: &Configuration) -> Result<DiagramSpec> {
    let cyl = Cylinder::new(u)?;
    let r = r_vector(u)?;
    let shape = u.shape();
    let (m, n) = (shape.m as i64, shape.n as i64);
    let sink = u.sink_value()?;
    let annotations: Vec<Annotation> = (0..=sink.max(-1))
        .map(|s| {
            let c = cyl.label(s);
            Annotation { column: c.column, row: c.row as i64, text: s.to_string(), side: Some(c.side) }
        })
        .collect();
    let rho: Vec<i64> = u.b().iter().zip(r.entries()).map(|(b, r)| b + 1 - r).collect();
    let mut red_steps = Vec::new();
    for t in 0..rho.len() {
        red_steps.push(Step::N);
        if t + 1 < rho.len() {
            red_steps.extend(std::iter::repeat(Step::E).take((rho[t + 1] - rho[t]) as usize));
        }
    }
    let red = LatticePath { start: (rho[0], 0), steps: red_steps };
    let green = green_path(u.b(), m);
    let lo = annotations.iter().map(|a| a.column).chain([0, rho[0]]).min().unwrap_or(0);
    let hi = annotations.iter().map(|a| a.column + 1).chain([m, rho[rho.len() - 1]]).max().unwrap_or(m);
    Ok(DiagramSpec { shape, first_column: lo, width: hi - lo, height: n, red, green, shaded: Vec::new(), annotations })
}

/// Characters per cell in text output, counting the left grid line.
const PITCH: usize = 5;

fn edge_glyphs(spec: &DiagramSpec) -> BTreeMap<((i64, i64), (i64, i64)), char> {
    let mut glyphs = BTreeMap::new();
    for (path, glyph) in [(&spec.red, 'R'), (&spec.green, 'G')] {
        for e in path.edges() {
            glyphs
                .entry(e)
                .and_modify(|g: &mut char| {
                    if *g != glyph {
                        *g = 'B'
                    }
                })
                .or_insert(glyph);
        }
    }
    glyphs
}

pub fn render_text(spec: &DiagramSpec) -> String {
    let glyphs = edge_glyphs(spec);
    let cols = spec.width.max(0) as usize;
    let rows = spec.height.max(0) as usize;
    let mut canvas = vec![vec![' '; cols * PITCH + 1]; 2 * rows + 1];
    let line_of = |y: i64| 2 * (spec.height - y) as usize;
    let char_of = |x: i64| (x - spec.first_column) as usize * PITCH;
    for y in 0..=spec.height {
        for x in spec.first_column..=spec.first_column + spec.width {
            let (l, c) = (line_of(y), char_of(x));
            canvas[l][c] = '+';
            if x < spec.first_column + spec.width {
                let g = glyphs.get(&((x, y), (x + 1, y))).copied().unwrap_or('-');
                canvas[l][c + 1..c + PITCH].fill(g);
            }
            if y < spec.height {
                canvas[l - 1][c] = glyphs.get(&((x, y), (x, y + 1))).copied().unwrap_or('|');
            }
        }
    }
    let inside = |x: i64, y: i64| x >= spec.first_column && x < spec.first_column + spec.width && y >= 0 && y < spec.height;
    for &(x, y) in spec.shaded.iter().filter(|&&(x, y)| inside(x, y)) {
        let (l, c) = (line_of(y) - 1, char_of(x));
        canvas[l][c + 1..c + PITCH].fill('#');
    }
    for a in spec.annotations.iter().filter(|a| inside(a.column, a.row)) {
        let marker = match a.side {
            Some(Side::Right) => "r",
            Some(Side::Left) => "l",
            None => " ",
        };
        let cell: Vec<char> = format!("{:>3.3}{marker}", a.text).chars().collect();
        let (l, c) = (line_of(a.row) - 1, char_of(a.column));
        canvas[l][c + 1..c + PITCH].copy_from_slice(&cell);
    }
    let mut out = String::new();
    for line in canvas {
        let s: String = line.into_iter().collect();
        writeln!(out, "{}", s.trim_end()).expect("write to string");
    }
    out
}

const CELL_PX: i64 = 20;
const MARGIN_PX: i64 = 20;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg(spec: &DiagramSpec) -> String {
    let px = |x: i64| MARGIN_PX + (x - spec.first_column) * CELL_PX;
    let py = |y: i64| MARGIN_PX + (spec.height - y) * CELL_PX;
    let (w, h) = (spec.width * CELL_PX + 2 * MARGIN_PX, spec.height * CELL_PX + 2 * MARGIN_PX);
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(r#"<?xml version="1.0" encoding="UTF-8"?>"#.to_string());
    line(format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    ));
    line(r#"<rect width="100%" height="100%" fill="white"/>"#.to_string());
    let shaded: BTreeSet<(i64, i64)> = spec.shaded.iter().copied().collect();
    for (x, y) in shaded {
        line(format!(
            r##"<rect class="intersection" x="{}" y="{}" width="{CELL_PX}" height="{CELL_PX}" fill="#d9d9d9"/>"##,
            px(x),
            py(y + 1)
        ));
    }
    for x in spec.first_column..=spec.first_column + spec.width {
        line(format!(r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#bbbbbb" stroke-width="1"/>"##, px(x), py(0), py(spec.height)));
    }
    for y in 0..=spec.height {
        line(format!(
            r##"<line x1="{0}" y1="{2}" x2="{1}" y2="{2}" stroke="#bbbbbb" stroke-width="1"/>"##,
            px(spec.first_column),
            px(spec.first_column + spec.width),
            py(y)
        ));
    }
    for (path, color, offset) in [(&spec.green, "green", 2), (&spec.red, "red", -2)] {
        let pts: Vec<String> = path.points().iter().map(|&(x, y)| format!("{},{}", px(x) + offset, py(y) + offset)).collect();
        line(format!(
            r#"<polyline class="{color}-path" points="{}" fill="none" stroke="{color}" stroke-width="3"/>"#,
            pts.join(" ")
        ));
    }
    for a in &spec.annotations {
        let (class, color) = match a.side {
            Some(Side::Right) => ("right", "red"),
            Some(Side::Left) => ("left", "green"),
            None => ("label", "black"),
        };
        line(format!(
            r#"<text class="{class}" x="{}" y="{}" fill="{color}" font-family="monospace" font-size="10" text-anchor="middle">{}</text>"#,
            px(a.column) + CELL_PX / 2,
            py(a.row) - CELL_PX / 2 + 4,
            escape(&a.text)
        ));
    }
    line("</svg>".to_string());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    #[test]
    fn paths_of_example() {
        let d = diagram_of(&cfg("<0,0,0,2,2,2;*|0,0,4,4,4>")).unwrap();
        use Step::{E, N};
        assert_eq!(d.green.steps, vec![E, N, N, E, E, E, E, N, N, N, E, E]);
        assert_eq!(d.red.steps, vec![N, E, E, E, N, N, E, E, E, N, N, E]);
        assert_eq!(d.red.steps.first(), Some(&N));
        assert_eq!(d.red.steps.last(), Some(&E));
        assert_eq!(configuration_of(&d).unwrap(), cfg("<0,0,0,2,2,2;*|0,0,4,4,4>"));
    }

    #[test]
    fn parking_rows_hold_at_most_one_cell() {
        let d = diagram_of(&cfg("<0,0,0,3,3,3;*|0,0,0,3,3>")).unwrap();
        for row in 0..5 {
            assert!(d.shaded.iter().filter(|c| c.1 == row).count() <= 1);
        }
    }

    #[test]
    fn plain_text_picture() {
        let d = diagram_of(&cfg("<0;*|0,0>")).unwrap();
        let expected = "\
+----+BBBB+
|    B    |
+RRRR+----+
R####G    |
+GGGG+----+
";
        assert_eq!(render_text(&d), expected);
    }

    #[test]
    fn cylindric_right_labels() {
        let d = cylindric_diagram(&cfg("<0,0,0,3,3,3;21|0,0,0,3,3>")).unwrap();
        let right = d.annotations.iter().filter(|a| a.side == Some(Side::Right)).count();
        assert_eq!(right, 13);
        let svg = render_svg(&d);
        assert_eq!(svg.matches(r#"class="right""#).count(), 13);
        assert_eq!(svg.matches(r#"class="left""#).count(), 9);
        let text = render_text(&d);
        let marked = text.split(|c| c == '|' || c == 'R' || c == 'G').filter(|cell| cell.trim_start().ends_with('r')).count();
        assert_eq!(marked, 13);
    }
}
