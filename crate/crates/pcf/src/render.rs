//! Output formats: JSON shapes, promenade TSV and SVG.

use std::fmt::Write as _;

use num_traits::ToPrimitive;
use puiseux_cf::berkovich::{Promenade, PromenadeTail};
use puiseux_cf::cf::{ContinuedFraction, ExpansionStatus};
use puiseux_cf::{Exponent, Field};
use serde_json::{json, Value};

pub fn cf_json<F: Field>(cf: &ContinuedFraction<F>, status: ExpansionStatus) -> Value {
    json!({
        "f0": cf.f0().map(|f| f.to_string()),
        "partials": cf.partials().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "finite": cf.is_finite(),
        "status": status.as_str(),
    })
}

pub fn tail_str(tail: &PromenadeTail) -> String {
    match tail {
        PromenadeTail::AscendsForever => "ascends-forever".into(),
        PromenadeTail::TruncatedAtBudget => "truncated-at-budget".into(),
        PromenadeTail::Accumulates { limit: Some(l) } => format!("accumulates at {}", l),
        PromenadeTail::Accumulates { limit: None } => "accumulates".into(),
    }
}

pub fn promenade_json(w: &Promenade) -> Value {
    let limit = match w.tail() {
        PromenadeTail::Accumulates { limit } => limit.as_ref().map(|l| l.to_string()),
        _ => None,
    };
    json!({
        "breakpoints": w.breakpoints().iter().map(|(t, v)| [t.to_string(), v.to_string()]).collect::<Vec<_>>(),
        "tail": match w.tail() {
            PromenadeTail::AscendsForever => "ascends-forever",
            PromenadeTail::TruncatedAtBudget => "truncated-at-budget",
            PromenadeTail::Accumulates { .. } => "accumulates",
        },
        "limit": limit,
    })
}

pub fn promenade_tsv(w: &Promenade) -> String {
    let mut out = String::from("t\tv\n");
    for (t, v) in w.breakpoints() {
        let _ = writeln!(out, "{}\t{}", t, v);
    }
    out
}

fn f(e: &Exponent) -> f64 {
    e.as_ratio().to_f64().unwrap_or(0.0)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const PAD: f64 = 40.0;

/// A fixed-size plot of `w(t)` with ticks at the zeros `T_n` and labels at
/// the maxima.
pub fn promenade_svg(w: &Promenade) -> String {
    let pts = w.breakpoints();
    let t_last = pts.last().map_or(1.0, |(t, _)| f(t));
    let t_lo = -1.0_f64.max(t_last / 8.0);
    let mut t_hi = t_last.max(1.0);
    let mut line: Vec<(f64, f64)> = vec![(t_lo, -t_lo)];
    line.extend(pts.iter().map(|(t, v)| (f(t), f(v))));
    if let PromenadeTail::AscendsForever = w.tail() {
        let (t, v) = *line.last().expect("nonempty");
        let ext = (t_hi - t_lo) / 6.0;
        line.push((t + ext, v + ext));
        t_hi = t + ext;
    }
    let v_hi = line.iter().map(|p| p.1).fold(1.0_f64, f64::max) * 1.1;
    let x = |t: f64| PAD + (t - t_lo) / (t_hi - t_lo) * (WIDTH - 2.0 * PAD);
    let y = |v: f64| HEIGHT - PAD - v / v_hi * (HEIGHT - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = WIDTH,
        h = HEIGHT
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{y0:.2}" x2="{}" y2="{y0:.2}" stroke="black"/>"#,
        PAD,
        WIDTH - PAD,
        y0 = y(0.0)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.2}" y1="{}" x2="{x0:.2}" y2="{}" stroke="black"/>"#,
        PAD,
        HEIGHT - PAD,
        x0 = x(0.0)
    );
    for z in w.zeros() {
        let _ = writeln!(
            s,
            r#"<line x1="{xz:.2}" y1="{:.2}" x2="{xz:.2}" y2="{:.2}" stroke="gray"/><text x="{xz:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"#,
            y(0.0) - 4.0,
            y(0.0) + 4.0,
            y(0.0) + 16.0,
            z,
            xz = x(f(&z))
        );
    }
    for (t, v) in w.maxima() {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"#,
            x(f(&t)),
            y(f(&v)) - 6.0,
            v
        );
    }
    let poly: Vec<String> = line.iter().map(|&(t, v)| format!("{:.2},{:.2}", x(t), y(v))).collect();
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#,
        poly.join(" ")
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use puiseux_cf::q;

    #[test]
    fn svg_has_ticks_and_labels() {
        let w = Promenade::from_degrees(&[q(1, 1), q(1, 2)], PromenadeTail::AscendsForever, None);
        let s = promenade_svg(&w);
        assert!(s.starts_with("<svg"));
        assert_eq!(s.matches("<polyline").count(), 1);
        assert!(s.contains(">2</text>"));
        assert!(s.contains(">3</text>"));
        assert!(s.contains(">1/2</text>"));
    }

    #[test]
    fn tsv_lists_breakpoints() {
        let w = Promenade::from_degrees(&[q(1, 1)], PromenadeTail::AscendsForever, None);
        assert_eq!(promenade_tsv(&w), "t\tv\n0\t0\n1\t1\n2\t0\n");
    }
}
