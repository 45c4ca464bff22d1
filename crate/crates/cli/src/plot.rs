//! Orthographic SVG projection of trajectory CSVs.

use std::fmt::Write;

use spinray_core::io::TrajectoryRow;
use spinray_core::Vec3;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 70.0;
const AXIS_NAMES: [&str; 3] = ["x", "y", "z"];

pub struct Svg {
    pub text: String,
    pub horizontal: &'static str,
    pub vertical: &'static str,
    pub splitting: Option<f64>,
}

fn stroke(lambda: i8) -> (&'static str, &'static str, &'static str) {
    match lambda {
        1 => ("#1f5fbf", "", "λ = +1"),
        -1 => ("#c8321e", " stroke-dasharray=\"8 5\"", "λ = −1"),
        _ => ("#555555", " stroke-dasharray=\"2 3\"", "λ = 0"),
    }
}

/// Index of the `+1`/`−1` pair when both are present with matching sample counts.
fn helicity_pair(series: &[Vec<TrajectoryRow>]) -> Option<(usize, usize)> {
    let plus = series.iter().position(|s| s[0].lambda == 1)?;
    let minus = series.iter().position(|s| s[0].lambda == -1)?;
    (series[plus].len() == series[minus].len()).then_some((plus, minus))
}

fn extent(points: &[Vec<Vec3>], axis: usize) -> (f64, f64) {
    points
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p[axis]), hi.max(p[axis]))
        })
}

pub fn render(series: &[Vec<TrajectoryRow>], magnify: f64) -> Svg {
    let pair = helicity_pair(series);
    let mut points: Vec<Vec<Vec3>> = series
        .iter()
        .map(|rows| rows.iter().map(TrajectoryRow::position).collect())
        .collect();
    if let Some((a, b)) = pair {
        for k in 0..points[a].len() {
            let mean = (points[a][k] + points[b][k]) * 0.5;
            points[a][k] = mean + (points[a][k] - mean) * magnify;
            points[b][k] = mean + (points[b][k] - mean) * magnify;
        }
    }

    let spans = [0, 1, 2].map(|i| {
        let (lo, hi) = extent(&points, i);
        hi - lo
    });
    let horizontal = (0..3)
        .max_by(|&i, &j| spans[i].total_cmp(&spans[j]))
        .unwrap_or(0);
    let others: Vec<usize> = (0..3).filter(|&i| i != horizontal).collect();
    let separation = |axis: usize| {
        pair.map_or(0.0, |(a, b)| {
            points[a]
                .iter()
                .zip(&points[b])
                .map(|(u, v)| (u[axis] - v[axis]).abs())
                .fold(0.0, f64::max)
        })
    };
    let vertical = if separation(others[0]).max(separation(others[1])) > 0.0 {
        if separation(others[0]) >= separation(others[1]) {
            others[0]
        } else {
            others[1]
        }
    } else if spans[others[0]] >= spans[others[1]] {
        others[0]
    } else {
        others[1]
    };

    let range = |axis: usize| {
        let (lo, hi) = extent(&points, axis);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, lo + 0.5)
        }
    };
    let (h_lo, h_hi) = range(horizontal);
    let (v_lo, v_hi) = range(vertical);
    let sx = |v: f64| MARGIN + (v - h_lo) / (h_hi - h_lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |v: f64| HEIGHT - MARGIN - (v - v_lo) / (v_hi - v_lo) * (HEIGHT - 2.0 * MARGIN);

    let splitting = pair.map(|(a, b)| {
        let (pa, pb) = (series[a].last().unwrap(), series[b].last().unwrap());
        (pa.hall_shift() - pb.hall_shift()).norm()
    });

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(
        s,
        r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="gray"/>"#,
        x1 - x0,
        y0 - y1
    );
    let (hn, vn) = (AXIS_NAMES[horizontal], AXIS_NAMES[vertical]);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{hn}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 25.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">{vn}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (v, x, anchor) in [(h_lo, x0, "start"), (h_hi, x1, "end")] {
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{}" text-anchor="{anchor}">{v:.4e}</text>"#,
            y0 + 18.0
        );
    }
    for (v, y) in [(v_lo, y0), (v_hi, y1 + 10.0)] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}" text-anchor="end">{v:.4e}</text>"#,
            x0 - 6.0
        );
    }

    for (k, (rows, pts)) in series.iter().zip(&points).enumerate() {
        let (color, dash, label) = stroke(rows[0].lambda);
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let _ = write!(
                d,
                "{}{:.2},{:.2}",
                if i == 0 { "M" } else { " L" },
                sx(p[horizontal]),
                sy(p[vertical])
            );
        }
        let _ = writeln!(
            s,
            r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.6"{dash}/>"#
        );
        let ly = MARGIN + 20.0 + 18.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="1.6"{dash}/>"#,
            x0 + 12.0,
            x0 + 42.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{label}</text>"#,
            x0 + 50.0,
            ly + 4.0
        );
    }

    let mut note = String::new();
    if let Some(split) = splitting {
        let _ = write!(note, "|δr(+1) − δr(−1)| = {split:.6e}");
    }
    if magnify != 1.0 {
        let _ = write!(
            note,
            "{}helicity deviation ×{magnify}",
            if note.is_empty() { "" } else { ", " }
        );
    }
    if !note.is_empty() {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="40" text-anchor="middle">{note}</text>"#,
            WIDTH / 2.0
        );
    }
    s.push_str("</svg>\n");

    Svg {
        text: s,
        horizontal: hn,
        vertical: vn,
        splitting,
    }
}
