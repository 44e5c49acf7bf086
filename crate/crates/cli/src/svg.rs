//! Deterministic SVG rendering of concave polygons on a lattice grid.
//!
//! One lattice unit is 40 px, origin at the bottom left with the y axis
//! pointing up. All coordinates are integers, so equal inputs produce
//! byte-equal output.

use newton_strata::ConcavePolygon;

use crate::literal::parse_polygon;

const CELL: i64 = 40;
const MARGIN: i64 = 40;
const LEGEND_ROW: i64 = 18;
const COLORS: [&str; 6] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub struct PlotSpec {
    polygon: ConcavePolygon,
    label: String,
    color: Option<String>,
}

/// Parses one `--polygons` entry: `literal`, `literal:label`, or
/// `literal:label:color`. Polygon literals never contain `:`.
pub fn parse_plot_spec(entry: &str) -> Result<PlotSpec, String> {
    let parts: Vec<&str> = entry.split(':').collect();
    if parts.len() > 3 {
        return Err(format!("{entry:?}: expected literal[:label[:color]]"));
    }
    let polygon = parse_polygon(parts[0])?;
    let label = match parts.get(1) {
        Some(l) if !l.is_empty() => l.to_string(),
        _ => parts[0].to_string(),
    };
    let color = match parts.get(2) {
        Some(c) if !c.is_empty() => Some(c.to_string()),
        Some(_) => return Err(format!("{entry:?}: empty color")),
        None => None,
    };
    Ok(PlotSpec { polygon, label, color })
}

pub fn render(specs: &[PlotSpec]) -> String {
    let labels = dedup_labels(specs);
    let x_max = specs.iter().map(|s| s.polygon.rank() as i64).max().unwrap_or(1).max(1);
    let mut y_min = 0i64;
    let mut y_max = 0i64;
    for spec in specs {
        for (_, y) in spec.polygon.vertices() {
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    // One cell of padding above and below so markers at extreme heights
    // stay clear of the legend and the bottom edge.
    let y_lo = y_min - 1;
    let y_hi = y_max + 1;

    let legend_height = LEGEND_ROW * specs.len() as i64 + 8;
    let width = 2 * MARGIN + CELL * x_max;
    let height = legend_height + 2 * MARGIN + CELL * (y_hi - y_lo);
    let px = |x: i64| MARGIN + CELL * x;
    let py = |y: i64| legend_height + MARGIN + CELL * (y_hi - y);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>\n"
    ));

    for gx in 0..=x_max {
        out.push_str(&line(px(gx), py(y_lo), px(gx), py(y_hi), "#dddddd", 1));
    }
    for gy in y_lo..=y_hi {
        out.push_str(&line(px(0), py(gy), px(x_max), py(gy), "#dddddd", 1));
    }
    // Axes on top of the light grid.
    out.push_str(&line(px(0), py(y_lo), px(0), py(y_hi), "#888888", 2));
    out.push_str(&line(px(0), py(0), px(x_max), py(0), "#888888", 2));

    for (i, spec) in specs.iter().enumerate() {
        let color = spec.color.as_deref().unwrap_or(COLORS[i % COLORS.len()]);
        let vertices = spec.polygon.vertices();
        let points: Vec<String> = vertices
            .iter()
            .map(|&(x, y)| format!("{},{}", px(x as i64), py(y)))
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            points.join(" "),
            escape(color)
        ));
        for &(x, y) in &vertices {
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n",
                px(x as i64),
                py(y),
                escape(color)
            ));
        }
        let row_y = 16 + LEGEND_ROW * i as i64;
        out.push_str(&line(8, row_y - 4, 36, row_y - 4, color, 2));
        out.push_str(&format!(
            "<text x=\"42\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" \
             fill=\"#222222\">{}</text>\n",
            row_y,
            escape(&labels[i])
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn dedup_labels(specs: &[PlotSpec]) -> Vec<String> {
    let mut seen: std::collections::HashMap<&str, usize> = std::collections::HashMap::new();
    specs
        .iter()
        .map(|spec| {
            let n = seen.entry(spec.label.as_str()).or_insert(0);
            *n += 1;
            if *n == 1 { spec.label.clone() } else { format!("{} ({})", spec.label, n) }
        })
        .collect()
}

fn line(x1: i64, y1: i64, x2: i64, y2: i64, color: &str, width: i64) -> String {
    format!(
        "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" \
         stroke=\"{}\" stroke-width=\"{width}\"/>\n",
        escape(color)
    )
}

fn escape(text: &str) -> String {
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
