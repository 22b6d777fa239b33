//! Static SVG rendering of quadrature rules.
//!
//! Each point becomes a circle centred at its coordinates with area
//! proportional to its weight; the largest circle has radius 0.06 in unit
//! coordinates. The emitted bytes are deterministic for a given rule.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::polyspace::Dim;
use crate::quadrature::QuadratureRule;

const PANEL: f64 = 480.0;
const MARGIN: f64 = 30.0;
const MAX_RADIUS_UNIT: f64 = 0.06;

/// Renders a 2D rule. 3D rules are rejected; use
/// [`rule_to_svg_projections`] for their axis projections.
pub fn rule_to_svg(rule: &QuadratureRule) -> Result<String> {
    if rule.dim() != Dim::Two {
        return Err(Error::invalid(
            "only 2D rules have a direct plot; render 3D rules as projections",
        ));
    }
    let width = PANEL + 2.0 * MARGIN;
    let height = PANEL + 2.0 * MARGIN;
    let mut svg = svg_header(width, height);
    draw_panel(&mut svg, rule, 0, 1, MARGIN, MARGIN, None);
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders a 3D rule as three side-by-side axis projections (xy, xz, yz).
pub fn rule_to_svg_projections(rule: &QuadratureRule) -> Result<String> {
    if rule.dim() != Dim::Three {
        return Err(Error::invalid("projection rendering expects a 3D rule"));
    }
    let width = 3.0 * PANEL + 6.0 * MARGIN;
    let height = PANEL + 2.0 * MARGIN + 18.0;
    let mut svg = svg_header(width, height);
    let panels = [(0usize, 1usize, "xy"), (0, 2, "xz"), (1, 2, "yz")];
    for (slot, (ax, ay, label)) in panels.iter().enumerate() {
        let x0 = MARGIN + slot as f64 * (PANEL + 2.0 * MARGIN);
        draw_panel(&mut svg, rule, *ax, *ay, x0, MARGIN + 18.0, Some(label));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn svg_header(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    )
}

fn draw_panel(
    svg: &mut String,
    rule: &QuadratureRule,
    axis_x: usize,
    axis_y: usize,
    x0: f64,
    y0: f64,
    label: Option<&str>,
) {
    let _ = writeln!(
        svg,
        "  <rect x=\"{x0:.1}\" y=\"{y0:.1}\" width=\"{PANEL:.1}\" height=\"{PANEL:.1}\" \
         fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>"
    );
    if let Some(text) = label {
        let _ = writeln!(
            svg,
            "  <text x=\"{x0:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"14\">{text}</text>",
            y0 - 6.0
        );
    }
    let w_max = rule.weights().iter().fold(f64::MIN, |m, &w| m.max(w));
    for j in 0..rule.num_points() {
        let point = rule.point(j);
        let w = rule.weights()[j];
        // area proportional to weight: radius scales with sqrt(w)
        let radius = MAX_RADIUS_UNIT * (w / w_max).max(0.0).sqrt() * PANEL;
        let cx = x0 + point[axis_x] * PANEL;
        // SVG y grows downward
        let cy = y0 + (1.0 - point[axis_y]) * PANEL;
        let _ = writeln!(
            svg,
            "  <circle cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"{radius:.3}\" \
             fill=\"#4878a8\" fill-opacity=\"0.55\" stroke=\"#1f3a5f\" stroke-width=\"1\"/>"
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::tensor_gauss;

    fn gauss_2x2() -> QuadratureRule {
        let (coords, weights) = tensor_gauss(2, 2).unwrap();
        QuadratureRule::new(Dim::Two, coords, weights).unwrap()
    }

    fn circle_radii(svg: &str) -> Vec<f64> {
        svg.lines()
            .filter(|l| l.contains("<circle"))
            .map(|l| {
                let start = l.find("r=\"").unwrap() + 3;
                let end = l[start..].find('"').unwrap() + start;
                l[start..end].parse().unwrap()
            })
            .collect()
    }

    #[test]
    fn equal_weights_equal_circles() {
        let svg = rule_to_svg(&gauss_2x2()).unwrap();
        let radii = circle_radii(&svg);
        assert_eq!(radii.len(), 4);
        for r in &radii {
            assert!((r - radii[0]).abs() < 1e-9);
        }
        // the largest circle uses the full 0.06 unit radius
        assert!((radii[0] - 0.06 * PANEL).abs() < 0.01);
    }

    #[test]
    fn area_ratio_tracks_weight_ratio() {
        let rule = QuadratureRule::new(
            Dim::Two,
            vec![0.25, 0.25, 0.75, 0.75],
            vec![0.8, 0.2],
        )
        .unwrap();
        let svg = rule_to_svg(&rule).unwrap();
        let radii = circle_radii(&svg);
        let area_ratio = (radii[1] / radii[0]).powi(2);
        assert!((area_ratio - 0.25).abs() < 1e-2, "{area_ratio}");
    }

    #[test]
    fn deterministic_bytes() {
        let a = rule_to_svg(&gauss_2x2()).unwrap();
        let b = rule_to_svg(&gauss_2x2()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn three_d_needs_projection_path() {
        let rule = QuadratureRule::new(Dim::Three, vec![0.5, 0.5, 0.5], vec![1.0]).unwrap();
        assert!(rule_to_svg(&rule).is_err());
        let svg = rule_to_svg_projections(&rule).unwrap();
        assert_eq!(circle_radii(&svg).len(), 3);
        assert!(svg.contains(">xy<") && svg.contains(">xz<") && svg.contains(">yz<"));
    }
}
