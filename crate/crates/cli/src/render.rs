//! Text renderers for the CLI: fixed-precision numbers, the CSV schemas,
//! and contour SVG.
//!
//! Every number in CSV and JSON output goes through [`num`], which prints
//! 17 significant digits so a double round-trips bit-exactly through the
//! decimal form. All renderers are pure functions of their inputs, which is
//! what makes reruns byte-identical.

use hill4bp::equilibria::EquilibriumSet;
use hill4bp::hill::{self, MassRatio};
use hill4bp::integrate::Trajectory;
use hill4bp::regions::{ContourSet, RegionGrid};
use hill4bp::stability::{characteristic_coefficients, classify, StabilityReport};
use hill4bp::{Error, PointLabel, Result};

/// Lossless decimal form of a double: 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Root `k` of a stability report as a coordinate pair `(re, im)`.
fn cnum(report: &StabilityReport, k: usize) -> String {
    let root = report.roots[k];
    format!("({}, {})", num(root.re), num(root.im))
}

/// `name,x,y,grad_norm,A,B,D,class` rows for the four libration points.
pub fn equilibria_csv(mu: MassRatio, set: &EquilibriumSet) -> Result<String> {
    let mut out = String::from("name,x,y,grad_norm,A,B,D,class\n");
    for (label, point) in set.iter() {
        let report = classify(point, mu)?;
        let c = report.coefficients;
        out.push_str(&format!(
            "{label},{},{},{},{},{},{},{}\n",
            num(point.x),
            num(point.y),
            num(report.grad_norm),
            num(c.a),
            num(c.b),
            num(c.d),
            report.class
        ));
    }
    Ok(out)
}

/// Hand-rolled JSON so the numbers keep the fixed 17-digit form; serde_json
/// would reformat them as shortest round-trip decimals.
pub fn equilibria_json(mu: MassRatio, set: &EquilibriumSet) -> Result<String> {
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"mu\": {},\n", num(mu.value())));
    out.push_str("  \"points\": [\n");
    for (k, (label, point)) in set.iter().into_iter().enumerate() {
        let g = hill::grad_omega_planar(point, mu)?;
        out.push_str(&format!(
            "    {{\"name\": \"{label}\", \"x\": {}, \"y\": {}, \"norm\": {}, \"grad_norm\": {}}}{}\n",
            num(point.x),
            num(point.y),
            num(point.norm()),
            num(g[0].hypot(g[1])),
            if k < 3 { "," } else { "" }
        ));
    }
    out.push_str("  ]\n}\n");
    Ok(out)
}

/// Human-readable listing: position, radius, and gradient residual per point.
pub fn equilibria_table(mu: MassRatio, set: &EquilibriumSet) -> Result<String> {
    let mut out = format!("mu = {}\n", num(mu.value()));
    for (label, point) in set.iter() {
        let g = hill::grad_omega_planar(point, mu)?;
        out.push_str(&format!(
            "{label}: x = {}, y = {}, |L| = {}, |grad| = {}\n",
            num(point.x),
            num(point.y),
            num(point.norm()),
            num(g[0].hypot(g[1]))
        ));
    }
    Ok(out)
}

/// Stability block for one point: class, coefficients, and the four roots.
pub fn stability_block(label: PointLabel, report: &StabilityReport) -> String {
    format!(
        "{label}: class = {}\n  A = {}, B = {}, D = {}\n  roots: {} {} {} {}\n",
        report.class,
        num(report.coefficients.a),
        num(report.coefficients.b),
        num(report.coefficients.d),
        cnum(report, 0),
        cnum(report, 1),
        cnum(report, 2),
        cnum(report, 3),
    )
}

/// `mu,A_L1,B_L1,D_L1,A_L3,B_L3,D_L3` at `n` mass ratios 0.5 (i+1)/n.
pub fn sweep_csv(n: usize) -> Result<String> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sweep needs at least one sample".into(),
        ));
    }
    let mut out = String::from("mu,A_L1,B_L1,D_L1,A_L3,B_L3,D_L3\n");
    for i in 0..n {
        let mu = MassRatio::new(0.5 * (i as f64 + 1.0) / n as f64)?;
        let l1 = hill4bp::equilibria::libration_point(mu, PointLabel::L1)?;
        let l3 = hill4bp::equilibria::libration_point(mu, PointLabel::L3)?;
        let c1 = characteristic_coefficients(l1, mu)?;
        let c3 = characteristic_coefficients(l3, mu)?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            num(mu.value()),
            num(c1.a),
            num(c1.b),
            num(c1.d),
            num(c3.a),
            num(c3.b),
            num(c3.d)
        ));
    }
    Ok(out)
}

/// `t,x,y,z,vx,vy,vz,C` rows, one per recorded state.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,x,y,z,vx,vy,vz,C\n");
    for k in 0..traj.len() {
        let s = traj.states[k];
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            num(traj.times[k]),
            num(s.x),
            num(s.y),
            num(s.z),
            num(s.vx),
            num(s.vy),
            num(s.vz),
            num(traj.jacobi[k])
        ));
    }
    out
}

/// `x,y,value,allowed` rows in row-major node order; flagged singular nodes
/// carry `NaN` in the value column and count as allowed.
pub fn region_csv(grid: &RegionGrid) -> String {
    let mut out = String::from("x,y,value,allowed\n");
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let p = grid.node(i, j);
            let value = grid.value(i, j).unwrap_or(f64::NAN);
            out.push_str(&format!(
                "{},{},{},{}\n",
                num(p.x),
                num(p.y),
                num(value),
                u8::from(grid.allowed(i, j))
            ));
        }
    }
    out
}

/// Shorter decimal form for SVG path data.
fn svg_num(v: f64) -> String {
    format!("{v:.6e}")
}

/// Contour polylines as one `<path>` each; the viewBox spans the grid
/// bounds, so the y axis points down as usual for SVG.
pub fn contours_svg(grid: &RegionGrid, set: &ContourSet) -> String {
    let [x0, x1] = grid.x_bounds;
    let [y0, y1] = grid.y_bounds;
    let (w, h) = (x1 - x0, y1 - y0);
    let stroke = 0.002 * w.max(h);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        svg_num(x0),
        svg_num(y0),
        svg_num(w),
        svg_num(h)
    );
    out.push_str(&format!(
        "  <g fill=\"none\" stroke=\"#1f6feb\" stroke-width=\"{}\">\n",
        svg_num(stroke)
    ));
    for line in &set.polylines {
        let d: Vec<String> = line
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let op = if k == 0 { "M" } else { "L" };
                format!("{op}{} {}", svg_num(v.x), svg_num(v.y))
            })
            .collect();
        out.push_str(&format!("    <path d=\"{}\"/>\n", d.join(" ")));
    }
    out.push_str("  </g>\n</svg>\n");
    out
}
