//! Minimal SVG line charts for trace and solution CSV files.

use std::fmt::Write;

use femlearn_core::{Error, Result};

use crate::output::{Table, SOLUTION_HEADER, TRACE_HEADER};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 500.0;
pub const TICKS: usize = 5;

const LEFT: f64 = 90.0;
const RIGHT: f64 = 90.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const COLORS: [&str; 2] = ["#1f77b4", "#d62728"];

#[derive(Debug, Clone, Copy, PartialEq)]
enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    scale: Scale,
}

impl Axis {
    fn fit(values: &[f64], scale: Scale) -> Self {
        let finite = values.iter().copied().filter(|v| match scale {
            Scale::Linear => v.is_finite(),
            Scale::Log => v.is_finite() && *v > 0.0,
        });
        let (mut lo, mut hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
        if lo > hi {
            (lo, hi) = match scale {
                Scale::Linear => (0.0, 1.0),
                Scale::Log => (1e-1, 1e1),
            };
        }
        if lo == hi {
            (lo, hi) = match scale {
                Scale::Linear => (lo - 0.5, hi + 0.5),
                Scale::Log => (lo / 10.0, hi * 10.0),
            };
        }
        Self { lo, hi, scale }
    }

    /// Position of `v` in `[0, 1]` along the axis; non-positive values on a
    /// log axis clamp to the bottom.
    fn unit(&self, v: f64) -> f64 {
        match self.scale {
            Scale::Linear => (v - self.lo) / (self.hi - self.lo),
            Scale::Log => {
                let v = if v > 0.0 { v } else { self.lo };
                (v.log10() - self.lo.log10()) / (self.hi.log10() - self.lo.log10())
            }
        }
    }

    fn ticks(&self) -> Vec<f64> {
        (0..TICKS)
            .map(|i| {
                let t = i as f64 / (TICKS - 1) as f64;
                match self.scale {
                    Scale::Linear => self.lo + t * (self.hi - self.lo),
                    Scale::Log => {
                        10f64.powf(self.lo.log10() + t * (self.hi.log10() - self.lo.log10()))
                    }
                }
            })
            .collect()
    }
}

fn px(axis: &Axis, v: f64) -> f64 {
    LEFT + axis.unit(v) * (WIDTH - LEFT - RIGHT)
}

fn py(axis: &Axis, v: f64) -> f64 {
    HEIGHT - BOTTOM - axis.unit(v) * (HEIGHT - TOP - BOTTOM)
}

fn label(v: f64) -> String {
    if v == 0.0 || (1e-2..1e4).contains(&v.abs()) {
        format!("{}", (v * 1e4).round() / 1e4)
    } else {
        format!("{v:.2e}")
    }
}

struct Series<'a> {
    name: &'a str,
    xs: Vec<f64>,
    ys: Vec<f64>,
    axis: Axis,
}

fn render(title: &str, x_name: &str, x_axis: Axis, series: &[Series<'_>], dual: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{title}</text>"#,
        WIDTH / 2.0
    );

    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        s,
        r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y1 - y0
    );

    let _ = writeln!(
        s,
        r#"<g class="x-axis" font-family="sans-serif" font-size="11" text-anchor="middle">"#
    );
    for t in x_axis.ticks() {
        let x = px(&x_axis, t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y1}" x2="{x:.2}" y2="{}" stroke="black"/>"#,
            y1 + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{}">{}</text>"#,
            y1 + 18.0,
            label(t)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}">{x_name}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(s, "</g>");

    let sides: &[(&Axis, f64, &str, &str)] = if dual {
        &[
            (&series[0].axis, x0, "end", series[0].name),
            (&series[1].axis, x1, "start", series[1].name),
        ]
    } else {
        &[(&series[0].axis, x0, "end", "")]
    };
    for (i, &(axis, x, anchor, name)) in sides.iter().enumerate() {
        let dir = if anchor == "end" { -1.0 } else { 1.0 };
        let color = if dual { COLORS[i] } else { "black" };
        let _ = writeln!(
            s,
            r#"<g class="y-axis" font-family="sans-serif" font-size="11" text-anchor="{anchor}" fill="{color}">"#
        );
        for t in axis.ticks() {
            let y = py(axis, t);
            let _ = writeln!(
                s,
                r#"<line x1="{x}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="{color}"/>"#,
                x + 5.0 * dir
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{:.2}">{}</text>"#,
                x + 8.0 * dir,
                y + 4.0,
                label(t)
            );
        }
        if !name.is_empty() {
            let scale = if axis.scale == Scale::Log {
                " (log)"
            } else {
                ""
            };
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}">{name}{scale}</text>"#,
                x,
                y0 - 8.0
            );
        }
        let _ = writeln!(s, "</g>");
    }

    for (i, ser) in series.iter().enumerate() {
        let points: Vec<String> = ser
            .xs
            .iter()
            .zip(&ser.ys)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(&x_axis, x), py(&ser.axis, y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline id="{0}" class="series" fill="none" stroke="{1}" stroke-width="1.5" points="{2}"><title>{0}</title></polyline>"#,
            ser.name,
            COLORS[i % COLORS.len()],
            points.join(" ")
        );
        let ly = y0 + 16.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<g class="legend" font-family="sans-serif" font-size="12"><line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="{3}" stroke-width="2"/><text x="{4}" y="{5}">{6}</text></g>"#,
            x1 - 130.0,
            ly,
            x1 - 110.0,
            COLORS[i % COLORS.len()],
            x1 - 105.0,
            ly + 4.0,
            ser.name
        );
    }
    s.push_str("</svg>\n");
    s
}

fn columns(table: &Table, names: [&str; 3]) -> [Vec<f64>; 3] {
    names.map(|n| table.column(n).expect("header checked"))
}

/// Dual-axis chart: cost on a log scale on the left, L2 error on the right.
pub fn trace_svg(table: &Table) -> String {
    let [it, cost, err] = columns(table, ["iter", "cost", "l2_error"]);
    let x_axis = Axis::fit(&it, Scale::Linear);
    let series = [
        Series {
            name: "cost",
            axis: Axis::fit(&cost, Scale::Log),
            xs: it.clone(),
            ys: cost,
        },
        Series {
            name: "l2_error",
            axis: Axis::fit(&err, Scale::Linear),
            xs: it,
            ys: err,
        },
    ];
    render("Training history", "iteration", x_axis, &series, true)
}

/// Exact and approximate solution on a shared linear axis.
pub fn solution_svg(table: &Table) -> String {
    let [x, exact, approx] = columns(table, ["x", "u_exact", "u_approx"]);
    let both: Vec<f64> = exact.iter().chain(&approx).copied().collect();
    let y_axis = Axis::fit(&both, Scale::Linear);
    let x_axis = Axis::fit(&x, Scale::Linear);
    let series = [
        Series {
            name: "u_exact",
            axis: y_axis,
            xs: x.clone(),
            ys: exact,
        },
        Series {
            name: "u_approx",
            axis: y_axis,
            xs: x,
            ys: approx,
        },
    ];
    render("Solution", "x", x_axis, &series, false)
}

/// Chooses the chart from the CSV header.
pub fn render_csv(table: &Table) -> Result<String> {
    let header = table.header.join(",");
    if header == TRACE_HEADER {
        Ok(trace_svg(table))
    } else if header == SOLUTION_HEADER {
        Ok(solution_svg(table))
    } else {
        Err(Error::Parse {
            line: 1,
            message: format!(
                "unrecognized header `{header}`; expected `{TRACE_HEADER}` or `{SOLUTION_HEADER}`"
            ),
        })
    }
}
