use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use formflux_core::kinematics::Worldline;

/// Float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn worldline_csv(w: &Worldline, coords: &[&str]) -> String {
    let mut out = String::from("param");
    for c in coords {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for (s, p) in w.params.iter().zip(&w.points) {
        out.push_str(&fmt_f64(*s));
        for v in p {
            out.push(',');
            out.push_str(&fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Static SVG of worldlines in the `(t, first spatial coordinate)` plane over
/// the given plot box.
pub fn worldlines_svg(
    lines: &[Worldline],
    t_range: (f64, f64),
    y_range: (f64, f64),
    labels: (&str, &str),
) -> String {
    let sx = (WIDTH - 2.0 * MARGIN) / (t_range.1 - t_range.0);
    let sy = (HEIGHT - 2.0 * MARGIN) / (y_range.1 - y_range.0);
    let px = |t: f64| MARGIN + (t - t_range.0) * sx;
    let py = |y: f64| HEIGHT - MARGIN - (y - y_range.0) * sy;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0,
        labels.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
        HEIGHT / 2.0,
        labels.1
    );
    for (i, (v, x)) in [
        (t_range.0, px(t_range.0)),
        (t_range.1, px(t_range.1)),
    ]
    .iter()
    .enumerate()
    {
        let anchor = if i == 0 { "start" } else { "end" };
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{}" text-anchor="{anchor}" font-size="11">{v}</text>"#,
            HEIGHT - MARGIN + 14.0
        );
    }
    for (v, y) in [(y_range.0, py(y_range.0)), (y_range.1, py(y_range.1))] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y:.2}" text-anchor="end" font-size="11">{v}</text>"#,
            MARGIN - 4.0
        );
    }
    for (i, w) in lines.iter().enumerate() {
        let pts: Vec<String> = w
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", px(p[0]), py(p[1])))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            COLORS[i % COLORS.len()],
            pts.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use formflux_core::kinematics::WorldlineStatus;

    fn line() -> Worldline {
        Worldline {
            params: vec![0.0, 0.5],
            points: vec![vec![0.0, 1.0], vec![1.0, 0.5]],
            seed: vec![0.0, 1.0],
            step: 0.5,
            status: WorldlineStatus::LeftDomain,
        }
    }

    #[test]
    fn csv_layout() {
        let csv = worldline_csv(&line(), &["t", "x"]);
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "param,t,x");
        assert_eq!(rows[2], "5.0000000000000000e-1,1.0000000000000000e0,5.0000000000000000e-1");
        assert!(!csv.contains('\r'));
        // 17 significant digits survive a round trip
        let v = 0.1 + 0.2;
        assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn svg_has_one_polyline_per_worldline() {
        let svg = worldlines_svg(&[line(), line()], (0.0, 2.0), (-2.0, 2.0), ("t", "x"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(r#"version="1.1""#));
        assert!(svg.ends_with("</svg>\n"));
    }
}
