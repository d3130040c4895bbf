//! Dependency-free SVG charts for regret trajectories and sweep summaries.
//!
//! Output is a pure function of the input summary, so identical inputs
//! give byte-identical SVG. Line styling follows the comparison-figure
//! convention: solid for sup-klucb, dashed for rucb, dotted for dts.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::experiment::{PolicySummary, SweepSummary};

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 170.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 55.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn dash_for(policy: &str) -> &'static str {
    match policy {
        "sup-klucb" => "none",
        "rucb" => "10 5",
        "dts" => "2 5",
        _ => "10 4 2 4",
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

struct Axes {
    x_min: f64,
    x_max: f64,
    y_max: f64,
    x_log: bool,
}

impl Axes {
    fn x(&self, v: f64) -> f64 {
        let (v, lo, hi) = if self.x_log {
            (v.ln(), self.x_min.ln(), self.x_max.ln())
        } else {
            (v, self.x_min, self.x_max)
        };
        let frac = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
        MARGIN_LEFT + frac * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        let frac = if self.y_max > 0.0 { v / self.y_max } else { 0.0 };
        HEIGHT - MARGIN_BOTTOM - frac * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn svg_open(out: &mut String) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(out, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
}

fn draw_frame(out: &mut String, x_label: &str, y_label: &str) {
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{x_label}</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        out,
        "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {})\">{y_label}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
}

fn draw_y_ticks(out: &mut String, axes: &Axes) {
    for i in 0..=5 {
        let v = axes.y_max * i as f64 / 5.0;
        let y = axes.y(v);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\
             <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
            MARGIN_LEFT - 5.0,
            fmt(y),
            MARGIN_LEFT,
            fmt(y),
            MARGIN_LEFT - 8.0,
            fmt(y + 4.0),
            fmt(v)
        );
    }
}

fn draw_legend(out: &mut String, policies: &[&str]) {
    let lx = WIDTH - MARGIN_RIGHT + 15.0;
    for (idx, policy) in policies.iter().enumerate() {
        let y = MARGIN_TOP + 20.0 + idx as f64 * 22.0;
        let color = PALETTE[idx % PALETTE.len()];
        let _ = writeln!(
            out,
            "<line x1=\"{lx}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{color}\" \
             stroke-width=\"2\" stroke-dasharray=\"{}\"/>\
             <text x=\"{}\" y=\"{}\">{policy}</text>",
            lx + 34.0,
            dash_for(policy),
            lx + 42.0,
            y + 4.0
        );
    }
}

fn polyline_points(xs: &[f64], ys: &[f64], axes: &Axes) -> String {
    xs.iter()
        .zip(ys)
        .map(|(&x, &y)| format!("{},{}", fmt(axes.x(x)), fmt(axes.y(y))))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Mean cumulative regret vs. round per policy, with shaded 25-75% bands.
pub fn render_regret_curves(summary: &BTreeMap<String, PolicySummary>) -> String {
    let mut out = String::new();
    svg_open(&mut out);
    draw_frame(&mut out, "round", "cumulative Copeland regret");

    let x_min = summary
        .values()
        .filter_map(|s| s.rounds.first())
        .map(|&r| r as f64)
        .fold(f64::INFINITY, f64::min)
        .max(1.0);
    let x_max = summary
        .values()
        .filter_map(|s| s.rounds.last())
        .map(|&r| r as f64)
        .fold(1.0, f64::max);
    let y_max = summary
        .values()
        .flat_map(|s| s.p75.iter().chain(&s.mean))
        .cloned()
        .fold(0.0, f64::max)
        .max(1e-9);
    let axes = Axes { x_min, x_max, y_max, x_log: true };

    draw_y_ticks(&mut out, &axes);
    // decade ticks on the log x axis
    let mut decade = 1.0f64;
    while decade <= x_max {
        if decade >= x_min {
            let x = axes.x(decade);
            let y0 = HEIGHT - MARGIN_BOTTOM;
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\
                 <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
                fmt(x),
                fmt(y0),
                fmt(x),
                fmt(y0 + 5.0),
                fmt(x),
                fmt(y0 + 20.0),
                decade
            );
        }
        decade *= 10.0;
    }

    for (idx, (policy, s)) in summary.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let xs: Vec<f64> = s.rounds.iter().map(|&r| r as f64).collect();
        // band: p25 forward then p75 backward
        let mut band = polyline_points(&xs, &s.p25, &axes);
        let xs_rev: Vec<f64> = xs.iter().rev().cloned().collect();
        let p75_rev: Vec<f64> = s.p75.iter().rev().cloned().collect();
        band.push(' ');
        band.push_str(&polyline_points(&xs_rev, &p75_rev, &axes));
        let _ = writeln!(
            out,
            "<polygon points=\"{band}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"none\"/>"
        );
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" \
             stroke-dasharray=\"{}\"/>",
            polyline_points(&xs, &s.mean, &axes),
            dash_for(policy)
        );
    }

    let policies: Vec<&str> = summary.keys().map(|s| s.as_str()).collect();
    draw_legend(&mut out, &policies);
    out.push_str("</svg>\n");
    out
}

/// Final mean regret vs. arm count per policy, from a sweep summary.
pub fn render_sweep_chart(sweep: &BTreeMap<String, SweepSummary>) -> String {
    let mut out = String::new();
    svg_open(&mut out);
    draw_frame(&mut out, "number of arms K", "mean cumulative regret at horizon");

    let x_min = sweep
        .values()
        .filter_map(|s| s.arms.first())
        .map(|&k| k as f64)
        .fold(f64::INFINITY, f64::min)
        .min(1e18);
    let x_max = sweep
        .values()
        .filter_map(|s| s.arms.last())
        .map(|&k| k as f64)
        .fold(1.0, f64::max);
    let y_max = sweep
        .values()
        .flat_map(|s| &s.final_mean_regret)
        .cloned()
        .fold(0.0, f64::max)
        .max(1e-9);
    let axes = Axes { x_min, x_max, y_max, x_log: false };

    draw_y_ticks(&mut out, &axes);
    for (idx, (policy, s)) in sweep.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let xs: Vec<f64> = s.arms.iter().map(|&k| k as f64).collect();
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" \
             stroke-dasharray=\"{}\"/>",
            polyline_points(&xs, &s.final_mean_regret, &axes),
            dash_for(policy)
        );
        for (&x, &y) in xs.iter().zip(&s.final_mean_regret) {
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{color}\"/>",
                fmt(axes.x(x)),
                fmt(axes.y(y))
            );
        }
    }
    // x ticks at each arm count present anywhere
    let mut ticks: Vec<usize> = sweep.values().flat_map(|s| s.arms.iter().cloned()).collect();
    ticks.sort_unstable();
    ticks.dedup();
    for k in ticks {
        let x = axes.x(k as f64);
        let y0 = HEIGHT - MARGIN_BOTTOM;
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\
             <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{k}</text>",
            fmt(x),
            fmt(y0),
            fmt(x),
            fmt(y0 + 5.0),
            fmt(x),
            fmt(y0 + 20.0)
        );
    }

    let policies: Vec<&str> = sweep.keys().map(|s| s.as_str()).collect();
    draw_legend(&mut out, &policies);
    out.push_str("</svg>\n");
    out
}
