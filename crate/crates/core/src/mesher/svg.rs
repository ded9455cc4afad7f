//! SVG cutting templates.

use std::fmt::Write as _;

use crate::geodata::Polyline2D;

/// One-path SVG in millimeter user units. The outline's y axis points up
/// and is flipped into SVG's downward y.
pub fn export_svg_outline(outline: &Polyline2D, frame: (f64, f64)) -> String {
    let (w, h) = frame;
    let pts = outline.vertices();
    let closed = outline.is_closed();
    let shown = if closed { &pts[..pts.len() - 1] } else { pts };
    let mut d = String::new();
    for (k, p) in shown.iter().enumerate() {
        let _ = write!(d, "{}{} {}", if k == 0 { "M" } else { " L" }, num(p[0]), num(h - p[1]));
    }
    if closed {
        d.push_str(" Z");
    }
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}mm\" height=\"{h}mm\" viewBox=\"0 0 {w} {h}\">\n  \
         <path d=\"{d}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"0.1\"/>\n\
         </svg>\n",
        w = num(w),
        h = num(h),
    )
}

fn num(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_points(svg: &str) -> Vec<[f64; 2]> {
        let d = svg.split("d=\"").nth(1).unwrap().split('"').next().unwrap();
        let nums: Vec<f64> = d
            .split(|c: char| c == ' ' || c.is_ascii_alphabetic())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().unwrap())
            .collect();
        nums.chunks(2).map(|c| [c[0], c[1]]).collect()
    }

    #[test]
    fn square_in_frame() {
        let square = Polyline2D::new(vec![[80.0, 80.0], [180.0, 80.0], [180.0, 180.0], [80.0, 180.0], [80.0, 80.0]]).unwrap();
        let svg = export_svg_outline(&square, (260.0, 260.0));
        assert!(svg.contains("viewBox=\"0 0 260 260\""));
        assert!(svg.contains("width=\"260mm\""));
        assert_eq!(svg.matches("<path").count(), 1);
        let d = svg.split("d=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(d.matches('L').count() + d.matches('Z').count(), 4);
    }

    #[test]
    fn coordinates_round_trip() {
        let line = Polyline2D::new(vec![[1.23456, 7.0], [100.5, 3.25917], [42.0, 250.9999]]).unwrap();
        let pts = path_points(&export_svg_outline(&line, (260.0, 260.0)));
        assert_eq!(pts.len(), 3);
        for (p, q) in pts.iter().zip(line.vertices()) {
            assert!((p[0] - q[0]).abs() < 1e-3);
            assert!((260.0 - p[1] - q[1]).abs() < 1e-3);
        }
    }
}
