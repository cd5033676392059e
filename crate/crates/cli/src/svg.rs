//! Deterministic SVG rendering of the S-plot: one point per group, a
//! horizontal decision-limit line, flagged points highlighted.

use splot_core::SPlotReport;
use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;

/// Renders the report as an SVG 1.1 document with a fixed 800×500 viewBox.
/// Byte-identical for identical reports.
pub fn render_splot_svg(report: &SPlotReport) -> String {
    let s = &report.components.s;
    let labels = &report.components.group_labels;
    let dl = report.decision_limit;
    let y_max = s.iter().copied().fold(dl, f64::max) * 1.15;
    let y_max = if y_max > 0.0 { y_max } else { 1.0 };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let y_of = |v: f64| TOP + plot_h * (1.0 - v / y_max);
    let x_of = |i: usize| LEFT + plot_w * (i as f64 + 0.5) / s.len() as f64;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    )
    .unwrap();
    out.push_str("<rect width=\"800\" height=\"500\" fill=\"#ffffff\"/>\n");
    writeln!(
        out,
        "<text x=\"{:.2}\" y=\"28\" font-family=\"sans-serif\" font-size=\"18\" \
         text-anchor=\"middle\">S-plot (family alpha {:.4})</text>",
        LEFT + plot_w / 2.0,
        report.family_alpha.value()
    )
    .unwrap();

    // Axes.
    writeln!(
        out,
        "<line x1=\"{LEFT:.2}\" y1=\"{:.2}\" x2=\"{LEFT:.2}\" y2=\"{TOP:.2}\" \
         stroke=\"#000000\" stroke-width=\"1\"/>",
        TOP + plot_h
    )
    .unwrap();
    writeln!(
        out,
        "<line x1=\"{LEFT:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
         stroke=\"#000000\" stroke-width=\"1\"/>",
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    )
    .unwrap();
    // Y ticks.
    for k in 0..=4 {
        let v = y_max * k as f64 / 4.0;
        let y = y_of(v);
        writeln!(
            out,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{LEFT:.2}\" y2=\"{y:.2}\" \
             stroke=\"#000000\" stroke-width=\"1\"/>",
            LEFT - 6.0
        )
        .unwrap();
        writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"end\">{v:.2}</text>",
            LEFT - 10.0,
            y + 4.0
        )
        .unwrap();
    }
    // Axis titles.
    writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"14\" \
         text-anchor=\"middle\">group</text>",
        LEFT + plot_w / 2.0,
        HEIGHT - 18.0
    )
    .unwrap();
    writeln!(
        out,
        "<text x=\"22\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"14\" \
         text-anchor=\"middle\" transform=\"rotate(-90 22 {:.2})\">S_g</text>",
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    )
    .unwrap();

    // Decision limit.
    let y_dl = y_of(dl);
    writeln!(
        out,
        "<line x1=\"{LEFT:.2}\" y1=\"{y_dl:.2}\" x2=\"{:.2}\" y2=\"{y_dl:.2}\" \
         stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>",
        LEFT + plot_w
    )
    .unwrap();
    writeln!(
        out,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
         fill=\"#d62728\" text-anchor=\"end\">DL = {dl:.4}</text>",
        LEFT + plot_w - 4.0,
        y_dl - 6.0
    )
    .unwrap();

    // Points and x tick labels.
    for (i, (value, label)) in s.iter().zip(labels).enumerate() {
        let x = x_of(i);
        let y = y_of(*value);
        let flagged = report.flagged.iter().any(|f| f == label);
        let fill = if flagged { "#d62728" } else { "#1f77b4" };
        writeln!(
            out,
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"6\" fill=\"{fill}\"/>"
        )
        .unwrap();
        if flagged {
            writeln!(
                out,
                "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" \
                 fill=\"#d62728\" text-anchor=\"middle\">{label} = {value:.4}</text>",
                y - 12.0
            )
            .unwrap();
        }
        writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" \
             text-anchor=\"middle\">{label}</text>",
            TOP + plot_h + 22.0
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
