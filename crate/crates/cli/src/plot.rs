use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use l1spectral::bench::read_curves_csv;
use l1spectral::{Algorithm, CurvePoint, Error, Result};

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// Curves CSV produced by the bench command.
    #[arg(long)]
    input: PathBuf,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: &PlotArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.input)?;
    let points = read_curves_csv(text.as_bytes()).map_err(as_malformed)?;
    if points.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{}: no curve points to plot",
            args.input.display()
        )));
    }
    std::fs::write(&args.out, render(&points))?;
    println!("wrote {}", args.out.display());
    Ok(())
}

/// The file itself was readable, so anything the CSV layer rejects is a
/// content problem (usage-class exit), not an I/O one.
fn as_malformed(err: Error) -> Error {
    match err {
        e @ (Error::Parse { .. } | Error::InvalidInput(_)) => e,
        other => Error::Parse {
            line: 1,
            message: other.to_string(),
        },
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = WIDTH - 24.0;
const TOP: f64 = 24.0;
const BOTTOM: f64 = HEIGHT - 56.0;

fn color(algorithm: Algorithm) -> &'static str {
    match algorithm {
        Algorithm::Spectral => "#d62728",
        Algorithm::L1Spectral => "#1f77b4",
    }
}

/// One mean polyline plus one confidence-band polygon per algorithm,
/// with fixed y range [0,1] and x spanning the probability grid. No
/// external assets; everything is inline SVG.
fn render(points: &[CurvePoint]) -> String {
    let mut series: Vec<(Algorithm, Vec<&CurvePoint>)> = Vec::new();
    for point in points {
        match series.iter_mut().find(|(a, _)| *a == point.algorithm) {
            Some((_, list)) => list.push(point),
            None => series.push((point.algorithm, vec![point])),
        }
    }
    for (_, list) in &mut series {
        list.sort_by(|a, b| a.p.total_cmp(&b.p));
    }

    let mut p_min = f64::INFINITY;
    let mut p_max = f64::NEG_INFINITY;
    for point in points {
        p_min = p_min.min(point.p);
        p_max = p_max.max(point.p);
    }
    if p_min == p_max {
        p_min -= 0.05;
        p_max += 0.05;
    }
    let sx = move |p: f64| LEFT + (p - p_min) / (p_max - p_min) * (RIGHT - LEFT);
    let sy = move |v: f64| BOTTOM - v * (BOTTOM - TOP);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"13\">"
    );
    let _ = writeln!(
        svg,
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>"
    );

    // Horizontal gridlines with y tick labels.
    for i in 0..=4 {
        let v = i as f64 * 0.25;
        let y = sy(v);
        let _ = writeln!(
            svg,
            "  <line x1=\"{LEFT:.2}\" y1=\"{y:.2}\" x2=\"{RIGHT:.2}\" y2=\"{y:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>"
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" fill=\"#333333\">{v:.2}</text>",
            LEFT - 8.0,
            y + 4.0
        );
    }

    // X ticks on the data grid when it is small, else evenly spaced.
    let mut ticks: Vec<f64> = points.iter().map(|c| c.p).collect();
    ticks.sort_by(f64::total_cmp);
    ticks.dedup();
    if ticks.len() > 11 {
        ticks = (0..=5)
            .map(|i| p_min + i as f64 * (p_max - p_min) / 5.0)
            .collect();
    }
    for &p in &ticks {
        let x = sx(p);
        let _ = writeln!(
            svg,
            "  <line x1=\"{x:.2}\" y1=\"{BOTTOM:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" \
             stroke=\"#333333\" stroke-width=\"1\"/>",
            BOTTOM + 5.0
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\" fill=\"#333333\">{p}</text>",
            BOTTOM + 20.0
        );
    }

    // Axes.
    let _ = writeln!(
        svg,
        "  <line x1=\"{LEFT:.2}\" y1=\"{TOP:.2}\" x2=\"{LEFT:.2}\" y2=\"{BOTTOM:.2}\" \
         stroke=\"#333333\" stroke-width=\"1.5\"/>"
    );
    let _ = writeln!(
        svg,
        "  <line x1=\"{LEFT:.2}\" y1=\"{BOTTOM:.2}\" x2=\"{RIGHT:.2}\" y2=\"{BOTTOM:.2}\" \
         stroke=\"#333333\" stroke-width=\"1.5\"/>"
    );
    let _ = writeln!(
        svg,
        "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" fill=\"#333333\">\
         edge-flip probability p</text>",
        (LEFT + RIGHT) / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        svg,
        "  <text x=\"18\" y=\"{:.2}\" text-anchor=\"middle\" fill=\"#333333\" \
         transform=\"rotate(-90 18 {0:.2})\">correct fraction</text>",
        (TOP + BOTTOM) / 2.0
    );

    // Confidence bands underneath, mean lines on top.
    for (algorithm, list) in &series {
        let mut band = String::new();
        for point in list {
            let _ = write!(band, "{:.2},{:.2} ", sx(point.p), sy(point.ci95_high));
        }
        for point in list.iter().rev() {
            let _ = write!(band, "{:.2},{:.2} ", sx(point.p), sy(point.ci95_low));
        }
        let _ = writeln!(
            svg,
            "  <polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.15\" stroke=\"none\"/>",
            band.trim_end(),
            color(*algorithm)
        );
    }
    for (algorithm, list) in &series {
        let line: Vec<String> = list
            .iter()
            .map(|point| format!("{:.2},{:.2}", sx(point.p), sy(point.mean_correct)))
            .collect();
        let _ = writeln!(
            svg,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>",
            line.join(" "),
            color(*algorithm)
        );
    }

    // Legend in the lower-left corner of the plot area, clear of the
    // curves (which start near 1.0).
    for (i, (algorithm, _)) in series.iter().enumerate() {
        let y = BOTTOM - 20.0 - i as f64 * 20.0;
        let _ = writeln!(
            svg,
            "  <rect x=\"{:.2}\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"{}\"/>",
            LEFT + 12.0,
            y,
            color(*algorithm)
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\" fill=\"#333333\">{algorithm}</text>",
            LEFT + 30.0,
            y + 11.0
        );
    }

    svg.push_str("</svg>\n");
    svg
}
