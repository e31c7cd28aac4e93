use graph_zeta::classical::{build_m, build_m_sharp, evolve, mixing_gap, spectrum_entries, ClassicalMap};
use graph_zeta::laplacian::{build_laplacian, LaplacianKind};
use graph_zeta::orbits::{enumerate_orbits, enumerate_orbits_with, OrbitOptions};
use graph_zeta::scattering::secular_zeros_expanded;
use graph_zeta::trace::{linear_grid, trace_formula_report};
use graph_zeta::zeta::{
    constant_eta, corrected_identity_ratio, identity_ratio, ihara_counts_from_det, ihara_zeta_product, stark_zeta,
    zeta_s_det, zeta_s_product, ZetaEvaluation,
};
use graph_zeta::{Complex64, ComplexMatrix, Graph, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::Format;
use crate::output::{complex, complexes, float, Csv, Report};

pub fn spectrum(g: &Graph, kind: LaplacianKind, with_zeros: bool, format: Format) -> Result<Report> {
    let values = build_laplacian(g, kind)?.spectrum()?.real_values();
    let zeros = if with_zeros { Some(secular_zeros_expanded(g, kind)?) } else { None };
    let deviation = zeros.as_ref().map(|z| {
        if z.len() != values.len() {
            f64::INFINITY
        } else {
            z.iter().zip(&values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        }
    });
    if format == Format::Csv {
        let mut csv = Csv::new(if with_zeros { &["index", "eigenvalue", "zero"] } else { &["index", "eigenvalue"] });
        for (k, &x) in values.iter().enumerate() {
            let mut row = vec![k.to_string(), float(x)];
            if let Some(z) = &zeros {
                row.push(z.get(k).map(|&x| float(x)).unwrap_or_default());
            }
            csv.row(&row);
        }
        return Ok(csv.finish());
    }
    let mut report = json!({
        "kind": kind,
        "num_vertices": g.num_vertices(),
        "num_edges": g.num_edges(),
        "connected": g.is_connected(),
        "eigenvalues": values,
    });
    if let (Some(z), Some(d)) = (zeros, deviation) {
        report["secular_zeros"] = json!(z);
        report["zero_count_matches"] = json!(z.len() == values.len());
        report["max_deviation"] = if d.is_finite() { json!(d) } else { Value::Null };
    }
    Ok(Report::Json(report))
}

pub fn orbits(g: &Graph, max_len: usize, non_backtracking: bool, list: bool, cap: usize, format: Format) -> Result<Report> {
    let opts = OrbitOptions {
        cap,
        non_backtracking_only: non_backtracking,
    };
    let cat = enumerate_orbits_with(&g.directed_bonds(), max_len, opts)?;
    if list {
        let mut buf = Vec::new();
        cat.write_jsonl(&mut buf)?;
        return Ok(Report::Raw(String::from_utf8(buf).expect("orbit lines are ASCII")));
    }
    let rows: Vec<(usize, usize, usize)> = (1..=max_len).map(|n| (n, cat.count(n), cat.count_no_backtrack(n))).collect();
    if format == Format::Csv {
        let mut csv = Csv::new(&["length", "primitive", "non_backtracking"]);
        for (n, all, nb) in rows {
            csv.row(&[n.to_string(), all.to_string(), nb.to_string()]);
        }
        return Ok(csv.finish());
    }
    Ok(Report::Json(json!({
        "max_length": max_len,
        "non_backtracking_only": non_backtracking,
        "total": cat.total(),
        "counts": rows
            .iter()
            .map(|&(n, all, nb)| json!({ "length": n, "primitive": all, "non_backtracking": nb }))
            .collect::<Vec<_>>(),
    })))
}

fn evaluation(e: &ZetaEvaluation) -> Value {
    json!({
        "product": complex(e.value),
        "determinant": complex(e.det_value),
        "truncation_length": e.truncation_length,
        "relative_error": e.relative_error,
        "convergence_gap": e.convergence_gap,
        "spectral_radius": e.spectral_radius,
        "warning": e.warning,
    })
}

fn evaluation_csv(e: &ZetaEvaluation) -> Report {
    let mut csv = Csv::new(&[
        "product_re",
        "product_im",
        "det_re",
        "det_im",
        "relative_error",
        "convergence_gap",
        "spectral_radius",
    ]);
    csv.row(&[
        float(e.value.re),
        float(e.value.im),
        float(e.det_value.re),
        float(e.det_value.im),
        float(e.relative_error),
        float(e.convergence_gap),
        e.spectral_radius.map(float).unwrap_or_default(),
    ]);
    csv.finish()
}

pub fn zeta(g: &Graph, lambda: Complex64, max_len: usize, kind: LaplacianKind, format: Format) -> Result<Report> {
    let cat = enumerate_orbits(&g.directed_bonds(), max_len)?;
    let e = zeta_s_product(&cat, g, lambda, max_len, kind)?;
    if let Some(w) = &e.warning {
        eprintln!("warning: {w}");
    }
    if format == Format::Csv {
        return Ok(evaluation_csv(&e));
    }
    let mut report = evaluation(&e);
    report["lambda"] = complex(lambda);
    report["kind"] = json!(kind);
    report["determinant_form"] = complex(zeta_s_det(g, lambda, kind)?);
    report["identity_ratio"] = complex(identity_ratio(g, lambda, kind)?);
    report["corrected_identity_ratio"] = complex(corrected_identity_ratio(g, lambda, kind)?);
    Ok(Report::Json(report))
}

pub fn ihara(g: &Graph, u: Complex64, max_len: usize, counts: Option<usize>, format: Format) -> Result<Report> {
    let opts = OrbitOptions {
        non_backtracking_only: true,
        ..Default::default()
    };
    let cat = enumerate_orbits_with(&g.directed_bonds(), max_len, opts)?;
    let e = ihara_zeta_product(&cat, g, u, max_len)?;
    if let Some(w) = &e.warning {
        eprintln!("warning: {w}");
    }
    if format == Format::Csv {
        return Ok(evaluation_csv(&e));
    }
    let mut report = evaluation(&e);
    report["u"] = complex(u);
    report["enumerated_counts"] = json!((1..=max_len).map(|n| cat.count_no_backtrack(n)).collect::<Vec<_>>());
    if let Some(m) = counts {
        report["determinant_counts"] = json!(ihara_counts_from_det(g, m)?);
    }
    Ok(Report::Json(report))
}

pub fn stark(g: &Graph, u: Option<Complex64>, random_max: Option<f64>, max_len: usize, seed: u64, format: Format) -> Result<Report> {
    let space = g.directed_bonds();
    let n = space.len();
    let eta = match (u, random_max) {
        (Some(u), _) => constant_eta(&space, u),
        (None, Some(max)) if max.is_finite() && max >= 0.0 => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen::<f64>() * max, 0.0))
        }
        _ => {
            return Err(graph_zeta::Error::InvalidArgument(
                "give --u or a non-negative --random-eta".into(),
            ))
        }
    };
    let opts = OrbitOptions {
        non_backtracking_only: true,
        ..Default::default()
    };
    let cat = enumerate_orbits_with(&space, max_len, opts)?;
    let e = stark_zeta(&space, &eta, &cat, max_len)?;
    if let Some(w) = &e.warning {
        eprintln!("warning: {w}");
    }
    if format == Format::Csv {
        return Ok(evaluation_csv(&e));
    }
    let mut report = evaluation(&e);
    report["weights"] = match u {
        Some(u) => json!({ "constant": complex(u) }),
        None => json!({ "uniform_max": random_max, "seed": seed }),
    };
    Ok(Report::Json(report))
}

#[allow(clippy::too_many_arguments)]
pub fn trace(
    g: &Graph,
    eps: f64,
    grid: Option<(f64, f64, usize)>,
    max_len: usize,
    max_rep: usize,
    kind: LaplacianKind,
    format: Format,
) -> Result<Report> {
    let (min, max, steps) = match grid {
        Some(bounds) => bounds,
        None => {
            let values = build_laplacian(g, kind)?.spectrum()?.real_values();
            (values[0] - 1.0, values[values.len() - 1] + 1.0, 200)
        }
    };
    let grid = linear_grid(min, max, steps)?;
    let cat = enumerate_orbits(&g.directed_bonds(), max_len)?;
    let rep = trace_formula_report(&cat, g, &grid, eps, max_len, max_rep, kind)?;
    if format == Format::Csv {
        let mut buf = Vec::new();
        rep.write_csv(&mut buf)?;
        return Ok(Report::Csv(String::from_utf8(buf).expect("CSV is ASCII")));
    }
    Ok(Report::Json(json!({
        "summary": rep.summary(),
        "kind": kind,
        "lambda": rep.lambda_grid,
        "exact": rep.exact_density,
        "weyl": rep.weyl_term,
        "orbit": rep.orbit_term,
        "residual": rep.residual,
        "reference": rep.reference_density,
    })))
}

pub fn classical(
    g: &Graph,
    lambda: Option<Complex64>,
    sharp: bool,
    steps: Option<usize>,
    kind: LaplacianKind,
    format: Format,
) -> Result<Report> {
    let map: ClassicalMap = if sharp {
        build_m_sharp(g)?
    } else {
        let lambda = lambda.ok_or_else(|| graph_zeta::Error::InvalidArgument("--lambda or --sharp required".into()))?;
        build_m(g, lambda, kind)?
    };
    let values = map.eigenvalues()?;
    let mixing = mixing_gap(&map)?;
    let evolved = match steps {
        Some(t) => {
            let mut rho = vec![0.0; map.dim()];
            rho[0] = 1.0;
            Some(evolve(&map, &rho, t)?)
        }
        None => None,
    };
    if format == Format::Csv {
        let mut csv = Csv::new(&["re", "im", "modulus"]);
        for e in spectrum_entries(&values) {
            csv.row(&[float(e.re), float(e.im), float(e.modulus)]);
        }
        return Ok(csv.finish());
    }
    let mut report = json!({
        "lambda": complex(map.lambda),
        "sharp": sharp,
        "bistochastic_defect": map.bistochastic_defect(),
        "eigenvalues": complexes(&values),
        "gap": mixing.gap,
        "second_modulus": mixing.second_modulus,
        "non_mixing": mixing.non_mixing,
        "equilibrium": mixing.equilibrium,
    });
    if let (Some(t), Some(rho)) = (steps, evolved) {
        let uniform = 1.0 / rho.len() as f64;
        let distance: f64 = rho.iter().map(|p| (p - uniform).abs()).sum();
        report["evolution"] = json!({ "steps": t, "distribution": rho, "l1_from_uniform": distance });
    }
    Ok(Report::Json(report))
}
