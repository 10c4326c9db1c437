//! Hand-written SVG: one panel per `(example, ρ, ν, μ)`, error against `n` on
//! a logarithmic axis, one polyline per representation. Values above 1 are
//! not drawn.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hermite::ReprKind;

use super::sweep::{SweepResult, SweepRow};

const PANEL_W: f64 = 380.0;
const PANEL_H: f64 = 280.0;
const MARGIN_L: f64 = 58.0;
const MARGIN_R: f64 = 118.0;
const MARGIN_T: f64 = 34.0;
const MARGIN_B: f64 = 40.0;
const COLUMNS: usize = 2;
/// Exact zeros are drawn at this floor.
const FLOOR: f64 = 1e-18;

fn color(kind: ReprKind) -> &'static str {
    match kind {
        ReprKind::Multicentric => "#1f77b4",
        ReprKind::Special => "#2ca02c",
        ReprKind::Parallel => "#d62728",
        ReprKind::Hermite => "#9467bd",
    }
}

fn legend_order() -> [ReprKind; 4] {
    [ReprKind::Multicentric, ReprKind::Special, ReprKind::Parallel, ReprKind::Hermite]
}

type PanelKey = (u32, f64, f64, f64);

fn panel_key(r: &SweepRow) -> PanelKey {
    (r.example, r.rho, r.nu, r.mu)
}

fn same(a: &PanelKey, b: &PanelKey) -> bool {
    a.0 == b.0 && a.1.to_bits() == b.1.to_bits() && a.2.to_bits() == b.2.to_bits() && a.3.to_bits() == b.3.to_bits()
}

fn panels(result: &SweepResult) -> Vec<(PanelKey, Vec<&SweepRow>)> {
    let mut keys: Vec<PanelKey> = Vec::new();
    for r in &result.rows {
        let k = panel_key(r);
        if !keys.iter().any(|x| same(x, &k)) {
            keys.push(k);
        }
    }
    keys.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
            .then(a.3.total_cmp(&b.3))
    });
    keys.into_iter()
        .map(|k| {
            let mut rows: Vec<&SweepRow> = result.rows.iter().filter(|r| same(&panel_key(r), &k)).collect();
            rows.sort_by(|a, b| a.repr.tag().cmp(&b.repr.tag()).then(a.n.cmp(&b.n)));
            (k, rows)
        })
        .collect()
}

fn drawable(r: &SweepRow) -> Option<f64> {
    (!r.clipped && r.max_abs_error.is_finite() && r.max_abs_error <= 1.0).then(|| r.max_abs_error.max(FLOOR))
}

fn render_panel(out: &mut String, ox: f64, oy: f64, key: &PanelKey, rows: &[&SweepRow]) {
    let (example, rho, nu, mu) = *key;
    let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let n_min = rows.iter().map(|r| r.n).min().unwrap_or(0) as f64;
    let n_max = rows.iter().map(|r| r.n).max().unwrap_or(1) as f64;
    let n_span = if n_max > n_min { n_max - n_min } else { 1.0 };
    let lowest = rows.iter().filter_map(|r| drawable(r)).fold(1.0f64, f64::min);
    let y_lo = lowest.log10().floor().min(-1.0);
    let y_hi = 0.0;
    let x_of = |n: f64| ox + MARGIN_L + (n - n_min) / n_span * plot_w;
    let y_of = |v: f64| oy + MARGIN_T + (y_hi - v.log10()) / (y_hi - y_lo) * plot_h;

    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">Example {example}, ρ = {rho:.4}, ν = {nu:e}, μ = {mu:e}</text>"#,
        ox + MARGIN_L + plot_w / 2.0,
        oy + 18.0
    );
    let _ = writeln!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black"/>"#,
        ox + MARGIN_L,
        oy + MARGIN_T
    );
    let step = if y_hi - y_lo > 10.0 { 2 } else { 1 };
    let mut e = y_hi as i32;
    while e as f64 >= y_lo {
        let y = y_of(10f64.powi(e));
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">1e{e}</text>"##,
            ox + MARGIN_L,
            ox + MARGIN_L + plot_w,
            ox + MARGIN_L - 4.0,
            y + 3.0
        );
        e -= step;
    }
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let every = ns.len().div_ceil(8).max(1);
    for n in ns.iter().step_by(every) {
        let x = x_of(*n as f64);
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" font-size="10" text-anchor="middle">{n}</text>"#,
            oy + MARGIN_T + plot_h + 14.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">n</text>"#,
        ox + MARGIN_L + plot_w / 2.0,
        oy + PANEL_H - 8.0
    );

    let mut legend_y = oy + MARGIN_T + 8.0;
    for kind in legend_order() {
        let series: Vec<&&SweepRow> = rows.iter().filter(|r| r.repr == kind).collect();
        if series.is_empty() {
            continue;
        }
        let mut segments: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for r in &series {
            match drawable(r) {
                Some(v) => segments.last_mut().unwrap().push((x_of(r.n as f64), y_of(v))),
                None => segments.push(Vec::new()),
            }
        }
        let all_clipped = segments.iter().all(Vec::is_empty);
        for seg in segments.iter().filter(|s| !s.is_empty()) {
            let pts: Vec<String> = seg.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                pts.join(" "),
                color(kind)
            );
            for (x, y) in seg {
                let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2" fill="{}"/>"#, color(kind));
            }
        }
        let lx = ox + PANEL_W - MARGIN_R + 8.0;
        let label = if all_clipped { format!("{} (all > 1)", kind.name()) } else { kind.name().to_string() };
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{legend_y:.2}" x2="{:.2}" y2="{legend_y:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}" font-size="10">{label}</text>"#,
            lx + 14.0,
            color(kind),
            lx + 18.0,
            legend_y + 3.0
        );
        legend_y += 16.0;
    }
}

pub fn render_svg(result: &SweepResult) -> Result<String> {
    let panels = panels(result);
    if panels.is_empty() {
        return Err(Error::InvalidArgument("nothing to plot: the sweep has no rows".into()));
    }
    let cols = panels.len().min(COLUMNS);
    let rows = panels.len().div_ceil(cols);
    let (w, h) = (cols as f64 * PANEL_W, rows as f64 * PANEL_H);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, (key, rows)) in panels.iter().enumerate() {
        let ox = (i % cols) as f64 * PANEL_W;
        let oy = (i / cols) as f64 * PANEL_H;
        render_panel(&mut out, ox, oy, key, rows);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_plot(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(result)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(repr: ReprKind, n: usize, err: f64) -> SweepRow {
        SweepRow { example: 1, repr, n, rho: 0.35, nu: 0.0, mu: 0.0, max_abs_error: err, clipped: !(err <= 1.0) }
    }

    #[test]
    fn clipped_series_has_no_polyline() {
        let rows = [4, 8, 12]
            .iter()
            .flat_map(|&n| [row(ReprKind::Multicentric, n, 3e-16), row(ReprKind::Hermite, n, 10f64.powi(n as i32))])
            .collect();
        let svg = render_svg(&SweepResult { rows, diagnostics: Vec::new() }).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("Hermite (all > 1)"));
        assert!(svg.contains(">Multicentric<"));
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn clipped_points_split_a_series() {
        let rows = vec![
            row(ReprKind::Parallel, 4, 1e-10),
            row(ReprKind::Parallel, 8, 5.0),
            row(ReprKind::Parallel, 12, 1e-6),
            row(ReprKind::Parallel, 16, 1e-5),
        ];
        let svg = render_svg(&SweepResult { rows, diagnostics: Vec::new() }).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 3);
    }

    #[test]
    fn one_panel_per_level() {
        let mut rows = vec![row(ReprKind::Special, 4, 1e-12)];
        rows.push(SweepRow { rho: 0.1, ..row(ReprKind::Special, 4, 1e-12) });
        let svg = render_svg(&SweepResult { rows, diagnostics: Vec::new() }).unwrap();
        assert_eq!(svg.matches("Example 1, ρ").count(), 2);
    }

    #[test]
    fn empty_result_is_an_error() {
        assert!(render_svg(&SweepResult::default()).is_err());
    }
}
