//! Text bands for type-A friezes and SVG drawings of (punctured) polygons.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write;

use crate::error::{FriezeError, Result};
use crate::frieze::Frieze;
use crate::frieze_a::AFrieze;
use crate::frieze_d::DFrieze;
use crate::labeling::SignLabeling;
use crate::polygon::{Arc, Triangulation};
use crate::punctured::{TaggedArc, TaggedTriangulation};
use crate::ring::RingElement;

/// Frieze pattern layout: row `r` holds the arcs of span `r + 1`, so the first
/// and last rows are the boundary. Entry `k` of row `r` is the arc starting at
/// `k − ⌊(r−1)/2⌋`, which staggers consecutive rows by half a cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Band {
    pub n: usize,
    pub rows: Vec<Vec<RingElement>>,
}

fn row_start(r: usize, k: usize, n: usize) -> usize {
    let shift = (r as isize - 1).div_euclid(2);
    (k as isize - shift).rem_euclid(n as isize) as usize
}

/// Horizontal position in half-cells of entry `k` of row `r`.
fn half_position(r: usize, k: usize, n: usize) -> usize {
    let s = row_start(r, k, n);
    (2 * s + r + 1) % (2 * n)
}

pub fn band(f: &AFrieze) -> Band {
    let n = f.n();
    let rows = (0..n - 1)
        .map(|r| {
            (0..n)
                .map(|k| {
                    let s = row_start(r, k, n);
                    f.label(Arc::wrapping(s, s + r + 1, n)).clone()
                })
                .collect()
        })
        .collect();
    Band { n, rows }
}

pub fn band_of(f: &Frieze) -> Result<Band> {
    match f {
        Frieze::A(a) => Ok(band(a)),
        Frieze::D(_) => Err(FriezeError::InvalidInput("type-D friezes have no planar band".into())),
    }
}

impl Band {
    /// Entries by (row, half-cell position).
    fn grid(&self) -> BTreeMap<(usize, usize), &RingElement> {
        let mut out = BTreeMap::new();
        for (r, row) in self.rows.iter().enumerate() {
            for (k, x) in row.iter().enumerate() {
                out.insert((r, half_position(r, k, self.n)), x);
            }
        }
        out
    }

    /// Diamonds (a above, b left, c right, d below) with `bc − ad ≠ 1`, as
    /// (row of b and c, half-cell of a and d).
    pub fn diamond_violations(&self) -> Vec<(usize, usize)> {
        let grid = self.grid();
        let m = 2 * self.n;
        let mut out = Vec::new();
        for r in 1..self.rows.len().saturating_sub(1) {
            for p in 0..m {
                let (Some(a), Some(d)) = (grid.get(&(r - 1, p)), grid.get(&(r + 1, p))) else {
                    continue;
                };
                let b = grid[&(r, (p + m - 1) % m)];
                let c = grid[&(r, (p + 1) % m)];
                if &(b * c) - &(*a * *d) != a.ring().one() {
                    out.push((r, p));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "rows": self.rows.iter()
                .map(|row| row.iter().map(RingElement::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// `periods` copies of the period-`n` pattern, one row per line.
    pub fn to_text(&self, periods: usize) -> String {
        let width = self
            .rows
            .iter()
            .flatten()
            .map(|x| x.to_string().chars().count())
            .max()
            .unwrap_or(1);
        let cell = (width + 2) & !1;
        let half = cell / 2;
        let mut out = String::new();
        for (r, row) in self.rows.iter().enumerate() {
            let indent = if half_position(r, 0, self.n) % 2 == 1 { half } else { 0 };
            let mut line = " ".repeat(indent);
            for _ in 0..periods.max(1) {
                for x in row {
                    let _ = write!(line, "{:>cell$}", x.to_string());
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

const SIZE: f64 = 400.0;
const RADIUS: f64 = 160.0;

fn vertex(v: usize, n: usize) -> (f64, f64) {
    let t = 2.0 * PI * v as f64 / n as f64 - PI / 2.0;
    (SIZE / 2.0 + RADIUS * t.cos(), SIZE / 2.0 + RADIUS * t.sin())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Svg(String);

impl Svg {
    fn new() -> Self {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="13">"#
        );
        Svg(s)
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), class: &str) {
        let _ = writeln!(
            self.0,
            r#"  <line class="{class}" x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black" stroke-width="{}"/>"#,
            a.0,
            a.1,
            b.0,
            b.1,
            if class == "boundary" { 2 } else { 1 }
        );
    }

    fn curve(&mut self, a: (f64, f64), ctrl: (f64, f64), b: (f64, f64)) {
        let _ = writeln!(
            self.0,
            r#"  <path class="chord" d="M {:.1} {:.1} Q {:.1} {:.1} {:.1} {:.1}" fill="none" stroke="black"/>"#,
            a.0, a.1, ctrl.0, ctrl.1, b.0, b.1
        );
    }

    fn text(&mut self, at: (f64, f64), label: &str) {
        let _ = writeln!(
            self.0,
            r#"  <text x="{:.1}" y="{:.1}" text-anchor="middle" dominant-baseline="middle" fill="darkred">{}</text>"#,
            at.0,
            at.1,
            escape(label)
        );
    }

    fn dot(&mut self, at: (f64, f64), r: f64, fill: &str) {
        let _ = writeln!(self.0, r#"  <circle cx="{:.1}" cy="{:.1}" r="{r}" fill="{fill}"/>"#, at.0, at.1);
    }

    fn vertices(&mut self, n: usize) {
        for v in 0..n {
            let p = vertex(v, n);
            self.dot(p, 3.0, "black");
            let (dx, dy) = (p.0 - SIZE / 2.0, p.1 - SIZE / 2.0);
            let s = 1.0 + 16.0 / RADIUS;
            let _ = writeln!(
                self.0,
                r#"  <text x="{:.1}" y="{:.1}" text-anchor="middle" dominant-baseline="middle">{v}</text>"#,
                SIZE / 2.0 + dx * s,
                SIZE / 2.0 + dy * s
            );
        }
    }

    fn finish(mut self) -> String {
        self.0.push_str("</svg>\n");
        self.0
    }
}

fn midpoint(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)
}

/// A convex `n`-gon with the given arcs drawn and optionally labelled.
pub fn svg_polygon(n: usize, arcs: &[(Arc, Option<String>)]) -> String {
    let mut svg = Svg::new();
    for (arc, _) in arcs {
        let class = if arc.is_boundary(n) { "boundary" } else { "arc" };
        svg.line(vertex(arc.from, n), vertex(arc.to, n), class);
    }
    for (arc, label) in arcs {
        if let Some(label) = label {
            svg.text(midpoint(vertex(arc.from, n), vertex(arc.to, n)), label);
        }
    }
    svg.vertices(n);
    svg.finish()
}

pub fn svg_triangulation(t: &Triangulation) -> String {
    let arcs: Vec<_> = t.all_edges().into_iter().map(|a| (a, None)).collect();
    svg_polygon(t.n(), &arcs)
}

pub fn svg_labeling(l: &SignLabeling) -> String {
    let arcs: Vec<_> = l
        .triangulation()
        .all_edges()
        .into_iter()
        .map(|a| (a, l.sign(a).map(|s| if s.value() > 0 { "+".to_string() } else { "−".to_string() })))
        .collect();
    svg_polygon(l.triangulation().n(), &arcs)
}

/// The frieze's labels on the edges of `t` (the fan when `None`).
pub fn svg_frieze_a(f: &AFrieze, t: Option<&Triangulation>) -> Result<String> {
    let fan;
    let t = match t {
        Some(t) => t,
        None => {
            fan = Triangulation::fan(f.n())?;
            &fan
        }
    };
    if t.n() != f.n() {
        return Err(FriezeError::LengthMismatch { expected: f.n(), got: t.n() });
    }
    let arcs: Vec<_> = t.all_edges().into_iter().map(|a| (a, Some(f.label(a).to_string()))).collect();
    Ok(svg_polygon(f.n(), &arcs))
}

/// A punctured `n`-gon; tagged spokes carry a bow-tie near the puncture and
/// chords bulge away from it.
pub fn svg_punctured(n: usize, arcs: &[(TaggedArc, Option<String>)]) -> String {
    let centre = (SIZE / 2.0, SIZE / 2.0);
    let mut svg = Svg::new();
    let mut labels = Vec::new();
    for (arc, label) in arcs {
        let at = match *arc {
            TaggedArc::Boundary(i) => {
                let (a, b) = (vertex(i, n), vertex((i + 1) % n, n));
                svg.line(a, b, "boundary");
                midpoint(a, b)
            }
            TaggedArc::PlainSpoke(v) | TaggedArc::TaggedSpoke(v) => {
                let p = vertex(v, n);
                // offset a plain/tagged pair so both stay visible
                let bend = if matches!(arc, TaggedArc::TaggedSpoke(_)) { 6.0 } else { -6.0 };
                let (dx, dy) = (p.0 - centre.0, p.1 - centre.1);
                let len = (dx * dx + dy * dy).sqrt();
                let (nx, ny) = (-dy / len * bend, dx / len * bend);
                let ctrl = (centre.0 + dx / 2.0 + nx, centre.1 + dy / 2.0 + ny);
                svg.curve(p, ctrl, centre);
                if matches!(arc, TaggedArc::TaggedSpoke(_)) {
                    let tip = (centre.0 + dx * 0.12 + nx * 0.3, centre.1 + dy * 0.12 + ny * 0.3);
                    let _ = writeln!(
                        svg.0,
                        r#"  <text x="{:.1}" y="{:.1}" text-anchor="middle" dominant-baseline="middle">⋈</text>"#,
                        tip.0, tip.1
                    );
                }
                (ctrl.0 + nx, ctrl.1 + ny)
            }
            TaggedArc::Chord { start, len } => {
                let (a, b) = (vertex(start, n), vertex((start + len) % n, n));
                // the puncture lies on the far side from the enclosed vertices
                let mid = vertex_mid(start, len, n);
                let ctrl = (centre.0 + (mid.0 - centre.0) * 1.1, centre.1 + (mid.1 - centre.1) * 1.1);
                svg.curve(a, ctrl, b);
                midpoint(midpoint(a, b), ctrl)
            }
        };
        if let Some(label) = label {
            labels.push((at, label.clone()));
        }
    }
    for (at, label) in labels {
        svg.text(at, &label);
    }
    svg.dot(centre, 4.0, "white");
    let _ = writeln!(
        svg.0,
        r#"  <circle cx="{:.1}" cy="{:.1}" r="4" fill="none" stroke="black"/>"#,
        centre.0, centre.1
    );
    svg.vertices(n);
    svg.finish()
}

fn vertex_mid(start: usize, len: usize, n: usize) -> (f64, f64) {
    let t = 2.0 * PI * (start as f64 + len as f64 / 2.0) / n as f64 - PI / 2.0;
    let r = RADIUS * (0.25 + 0.5 * (1.0 - len as f64 / n as f64));
    (SIZE / 2.0 + r * t.cos(), SIZE / 2.0 + r * t.sin())
}

pub fn svg_tagged_triangulation(t: &TaggedTriangulation) -> String {
    let n = t.n();
    let arcs: Vec<_> = (0..n).map(TaggedArc::Boundary).chain(t.arcs().iter().copied()).map(|a| (a, None)).collect();
    svg_punctured(n, &arcs)
}

pub fn svg_frieze_d(f: &DFrieze, t: Option<&TaggedTriangulation>) -> Result<String> {
    let fan;
    let t = match t {
        Some(t) => t,
        None => {
            fan = TaggedTriangulation::spoke_fan(f.n())?;
            &fan
        }
    };
    if t.n() != f.n() {
        return Err(FriezeError::LengthMismatch { expected: f.n(), got: t.n() });
    }
    let n = f.n();
    let arcs: Vec<_> = (0..n)
        .map(TaggedArc::Boundary)
        .chain(t.arcs().iter().copied())
        .map(|a| (a, Some(f.label(a).to_string())))
        .collect();
    Ok(svg_punctured(n, &arcs))
}

pub fn svg_frieze(f: &Frieze) -> Result<String> {
    match f {
        Frieze::A(a) => svg_frieze_a(a, None),
        Frieze::D(d) => svg_frieze_d(d, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frieze_a::{enumerate_nonzero_a, sigma, tests::hexagon_from_rows};
    use crate::labeling::Sign;
    use crate::ring::Ring;

    fn ints(row: &[RingElement]) -> Vec<i64> {
        row.iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn hexagon_band() {
        let b = band(&hexagon_from_rows());
        assert_eq!(b.rows.len(), 5);
        assert_eq!(ints(&b.rows[0]), vec![1; 6]);
        assert_eq!(ints(&b.rows[1]), vec![4, 1, 2, 2, 2, 1]);
        assert_eq!(ints(&b.rows[2]), vec![3, 1, 3, 3, 1, 3]);
        assert_eq!(ints(&b.rows[3]), vec![2, 2, 1, 4, 1, 2]);
        assert_eq!(ints(&b.rows[4]), vec![1; 6]);
        assert!(b.diamond_violations().is_empty());
        let text = b.to_text(1);
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().nth(1).unwrap().split_whitespace().eq(["4", "1", "2", "2", "2", "1"]));
    }

    #[test]
    fn sigma_negates_even_rows() {
        let f = hexagon_from_rows();
        let (b, s) = (band(&f), band(&sigma(&f).unwrap()));
        for (r, (x, y)) in b.rows.iter().zip(&s.rows).enumerate() {
            // row r holds span r + 1
            let sign = if (r + 1) % 2 == 0 { -1 } else { 1 };
            assert_eq!(ints(y), ints(x).iter().map(|v| v * sign).collect::<Vec<_>>());
        }
    }

    #[test]
    fn diamonds_hold_on_positive_bands() {
        for n in 4..=8 {
            for f in enumerate_nonzero_a(n, Ring::Z).unwrap().iter().filter(|f| f.is_positive()) {
                assert!(band(f).diamond_violations().is_empty(), "n={n}");
            }
        }
        let mut b = band(&hexagon_from_rows());
        b.rows[2][0] = Ring::Z.int(7);
        assert!(!b.diamond_violations().is_empty());
    }

    #[test]
    fn d_band_refused() {
        let d = crate::frieze_d::enumerate_positive_d(3).unwrap().remove(0);
        assert!(band_of(&Frieze::D(d.clone())).is_err());
        assert!(svg_frieze(&Frieze::D(d)).unwrap().starts_with("<svg"));
        let tagged = crate::punctured::enumerate_tagged_triangulations(3)
            .unwrap()
            .into_iter()
            .find(|t| !t.tagged_spokes().is_empty())
            .unwrap();
        assert!(svg_tagged_triangulation(&tagged).contains("⋈"));
    }

    #[test]
    fn svgs_are_well_formed() {
        let t = Triangulation::new(6, [Arc::new(0, 2), Arc::new(0, 3), Arc::new(3, 5)]).unwrap();
        let mut signs = BTreeMap::new();
        signs.insert(Arc::new(0, 2), Sign::Minus);
        signs.insert(Arc::new(0, 3), Sign::Plus);
        signs.insert(Arc::new(3, 5), Sign::Minus);
        for a in crate::polygon::boundary_arcs(6) {
            signs.insert(a, Sign::Plus);
        }
        let l = SignLabeling::new(t.clone(), signs).unwrap();
        let svg = svg_labeling(&l);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<line").count(), 9);
        assert_eq!(svg.matches(">−<").count(), 2);
        let f = svg_frieze_a(&hexagon_from_rows(), Some(&t)).unwrap();
        assert_eq!(f.matches("<line").count(), 9);
        let d = svg_tagged_triangulation(&TaggedTriangulation::spoke_fan(4).unwrap());
        assert_eq!(d.matches("class=\"boundary\"").count(), 4);
    }
}
