//! Standalone SVG of the generating curve in the `(t, rho)` plane.

use std::fmt::Write as _;

use ewmt_core::ProfileSolution;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 50.0;

/// Tick positions covering `[lo, hi]` at a 1-2-5 step, about `target` of them.
pub fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) || !span.is_finite() {
        return vec![lo];
    }
    let raw = span / target.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn label(x: f64) -> String {
    let s = format!("{:.6}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Renders the profile; dashed lines mark `t = +-t0` when it is finite.
pub fn render_svg(sol: &ProfileSolution) -> String {
    let pts: Vec<(f64, f64)> = sol
        .samples
        .iter()
        .filter(|a| a.t.is_finite() && a.rho.is_finite())
        .map(|a| (a.t, a.rho))
        .collect();
    let t0 = sol.t0_estimate.and_then(|a| a.t0.finite());

    let (mut t_lo, mut t_hi) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.0), hi.max(p.0))
        });
    if let Some(t0) = t0 {
        t_lo = t_lo.min(-t0);
        t_hi = t_hi.max(t0);
    }
    let rho_hi = pts.iter().fold(0.0f64, |m, p| m.max(p.1));
    let pad = 0.05 * (t_hi - t_lo).max(1e-12);
    let (t_lo, t_hi) = (t_lo - pad, t_hi + pad);
    let (r_lo, r_hi) = (0.0, if rho_hi > 0.0 { 1.05 * rho_hi } else { 1.0 });

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |t: f64| LEFT + (t - t_lo) / (t_hi - t_lo) * plot_w;
    let y = |r: f64| TOP + plot_h - (r - r_lo) / (r_hi - r_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let m = &sol.metadata;
    let _ = writeln!(
        s,
        r#"<text x="{}" y="28" text-anchor="middle" font-family="sans-serif" font-size="16">Generating curve: rho0 = {}, h = {}, f = {}</text>"#,
        WIDTH / 2.0,
        label(sol.rho0),
        m.warping.family(),
        m.elliptic.family_name()
    );

    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        s,
        r#"<g class="axes" stroke="black" stroke-width="1"><line x1="{x0:.3}" y1="{y1:.3}" x2="{x1:.3}" y2="{y1:.3}"/><line x1="{x0:.3}" y1="{y0:.3}" x2="{x0:.3}" y2="{y1:.3}"/></g>"#
    );
    let _ = writeln!(
        s,
        r#"<g class="ticks" font-family="sans-serif" font-size="11">"#
    );
    for t in ticks(t_lo, t_hi, 8) {
        let px = x(t);
        let _ = writeln!(
            s,
            r#"<line x1="{px:.3}" y1="{y1:.3}" x2="{px:.3}" y2="{:.3}" stroke="black"/><text x="{px:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
            y1 + 5.0,
            y1 + 18.0,
            label(t)
        );
    }
    for r in ticks(r_lo, r_hi, 6) {
        let py = y(r);
        let _ = writeln!(
            s,
            r#"<line x1="{:.3}" y1="{py:.3}" x2="{x0:.3}" y2="{py:.3}" stroke="black"/><text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0,
            label(r)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="13">t</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="13">rho</text>"#,
        (y0 + y1) / 2.0
    );

    if let Some(t0) = t0 {
        for (name, t) in [("asymptote-minus", -t0), ("asymptote-plus", t0)] {
            let px = x(t);
            let _ = writeln!(
                s,
                r#"<line class="{name}" data-t="{}" x1="{px:.3}" y1="{y0:.3}" x2="{px:.3}" y2="{y1:.3}" stroke="gray" stroke-dasharray="6 4"/>"#,
                label(t)
            );
        }
    }

    let mut poly = String::with_capacity(pts.len() * 18);
    for (i, (t, r)) in pts.iter().enumerate() {
        if i > 0 {
            poly.push(' ');
        }
        let _ = write!(poly, "{:.3},{:.3}", x(*t), y(*r));
    }
    let _ = writeln!(
        s,
        r#"<polyline class="profile" fill="none" stroke="steelblue" stroke-width="1.5" points="{poly}"/>"#
    );
    s.push_str("</svg>\n");
    s
}
