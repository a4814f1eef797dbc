//! Minimal SVG plots: modulus and phase of a sampled signal, stacked.

use std::fmt::Write as _;
use std::path::Path;

use lctb_core::SampledSignal;

use crate::error::CliError;

const W: f64 = 720.0;
const PANEL: f64 = 220.0;
const PAD: f64 = 40.0;

fn polyline(xs: &[f64], ys: &[f64], top: f64, lo: f64, hi: f64, colour: &str) -> String {
    let (x0, x1) = (xs[0], xs[xs.len() - 1]);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut pts = String::new();
    for (x, y) in xs.iter().zip(ys) {
        let px = PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
        let py = top + PANEL - (y - lo) / span * PANEL;
        let _ = write!(pts, "{px:.2},{py:.2} ");
    }
    format!(r#"<polyline fill="none" stroke="{colour}" stroke-width="1.2" points="{}"/>"#, pts.trim_end())
}

pub fn render(s: &SampledSignal, title: &str) -> String {
    let xs: Vec<f64> = s.iter().map(|(t, _)| t).collect();
    let mods: Vec<f64> = s.samples().iter().map(|z| z.norm()).collect();
    let args: Vec<f64> = s.samples().iter().map(|z| z.arg()).collect();
    let peak = mods.iter().cloned().fold(0.0, f64::max);
    let height = 2.0 * PANEL + 3.0 * PAD;
    let top2 = 2.0 * PAD + PANEL;
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{height}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{PAD}" y="{}">{title}: |F| (max {peak:.4e})</text>"#, PAD - 10.0);
    let _ = writeln!(svg, r#"<text x="{PAD}" y="{}">arg F in [-pi, pi]</text>"#, top2 - 10.0);
    for top in [PAD, top2] {
        let _ = writeln!(svg, r##"<rect x="{PAD}" y="{top}" width="{}" height="{PANEL}" fill="none" stroke="#999"/>"##, W - 2.0 * PAD);
    }
    let _ = writeln!(svg, r#"<text x="{PAD}" y="{}">{:.4}</text>"#, height - 10.0, xs[0]);
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{:.4}</text>"#, W - PAD, height - 10.0, xs[xs.len() - 1]);
    let _ = writeln!(svg, "{}", polyline(&xs, &mods, PAD, 0.0, peak, "#1f5fa8"));
    let _ = writeln!(svg, "{}", polyline(&xs, &args, top2, -std::f64::consts::PI, std::f64::consts::PI, "#b3411b"));
    svg.push_str("</svg>\n");
    svg
}

pub fn write_plot(path: &Path, s: &SampledSignal, title: &str) -> Result<(), CliError> {
    std::fs::write(path, render(s, title)).map_err(|e| CliError::output(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use lctb_core::Grid;

    #[test]
    fn renders_two_panels() {
        let g = Grid::linspace(-1.0, 1.0, 11).unwrap();
        let svg = render(&SampledSignal::from_real_fn(&g, |t| 1.0 - t * t), "demo");
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
