//! Self-contained SVG diagnostics plot (no plotting dependency): residual
//! and kernel error versus trace step. The CSV next to it is the canonical
//! data; the SVG is a convenience view.

use gibbsddrm::ddrm::StepRecord;

/// Two polylines (log10 residual, kernel error vs the true kernel when
/// available) over the trace index.
pub fn trace_svg(trace: &[StepRecord], kernel_errors: Option<&[f64]>) -> String {
    let (w, h) = (720.0, 360.0);
    let margin = 48.0;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<line x1=\"{margin}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"#444\"/>\n",
        h - margin,
        w - margin
    ));
    svg.push_str(&format!(
        "<line x1=\"{margin}\" y1=\"{margin}\" x2=\"{margin}\" y2=\"{0}\" stroke=\"#444\"/>\n",
        h - margin
    ));

    if trace.is_empty() {
        svg.push_str("<text x=\"60\" y=\"60\" font-size=\"14\">empty trace</text>\n</svg>\n");
        return svg;
    }

    let series = |values: &[f64], color: &str, label: &str, offset: f64| -> String {
        let finite: Vec<f64> = values.iter().cloned().filter(|v| v.is_finite()).collect();
        if finite.is_empty() {
            return String::new();
        }
        let lo = finite.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = finite.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let span = (hi - lo).max(1e-12);
        let n = values.len().max(2) as f64;
        let pts: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let x = margin + (w - 2.0 * margin) * i as f64 / (n - 1.0);
                let t = ((v - lo) / span).clamp(0.0, 1.0);
                let y = (h - margin) - (h - 2.0 * margin) * t;
                format!("{x:.1},{y:.1}")
            })
            .collect();
        format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{label} [{lo:.3e}, {hi:.3e}]</text>\n",
            pts.join(" "),
            margin + 4.0,
            margin - 8.0 + offset,
        )
    };

    let residuals: Vec<f64> = trace.iter().map(|r| r.residual.max(1e-300).log10()).collect();
    svg.push_str(&series(&residuals, "#1f77b4", "log10 residual", 0.0));
    if let Some(errors) = kernel_errors {
        svg.push_str(&series(errors, "#d62728", "kernel error", 16.0));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Per-trace-record CSV: `cycle,t,inner,evals,residual[,kernel_error]`.
pub fn trace_csv(trace: &[StepRecord], kernel_errors: Option<&[f64]>) -> String {
    let mut out = String::from(match kernel_errors {
        Some(_) => "cycle,t,inner,evals,residual,kernel_error\n",
        None => "cycle,t,inner,evals,residual\n",
    });
    for (i, rec) in trace.iter().enumerate() {
        match kernel_errors {
            Some(errors) => out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                rec.cycle, rec.t, rec.inner, rec.evals, rec.residual, errors[i]
            )),
            None => out.push_str(&format!(
                "{},{},{},{},{}\n",
                rec.cycle, rec.t, rec.inner, rec.evals, rec.residual
            )),
        }
    }
    out
}
