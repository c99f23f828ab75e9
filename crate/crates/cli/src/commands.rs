use std::path::Path;

use quadcalc::checks::identity_suite;
use quadcalc::elliptic::{solve_dirichlet_with, DirichletProblem, Method, SolverOptions};
use quadcalc::forms::Cochain;
use quadcalc::kernels::{
    binned_decay, cauchy_integral, cauchy_kernel_face, cauchy_kernel_face_derivative, cauchy_kernel_vertex,
    green_free, skew_kernel_table, KernelOptions, KernelTable, KernelTableFile,
};
use quadcalc::lattices::{self, Family, Fixture, LatticeSpec};
use quadcalc::operators::{
    check_holomorphic_vertex, d_lambda, dirichlet_energy, harmonic_conjugate, laplacian, laplacian_at, Basepoints,
};
use quadcalc::{Contour, QuadGraph, Site, VertexField, C64};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::{CauchyInput, Command, Common, ExportWhat, FamilyArg, FieldArg, KernelArg, MethodArg};
use crate::error::{usage, CliError, Result};
use crate::fields::{parse_complex, parse_complex_list, Symbolic};
use crate::output::{num, Report, Table};

const ORIGIN: C64 = C64::new(0.0, 0.0);

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// The payload under `result.<key>` when `value` is a result block.
fn unwrap_block(value: Value, key: &str) -> Value {
    match value.get("result").and_then(|r| r.get(key)) {
        Some(inner) => inner.clone(),
        None => value,
    }
}

pub fn load_graph(spec: &str) -> Result<QuadGraph> {
    match spec {
        "fixture:fig3" => return Ok(lattices::fixture(Fixture::Fig3)?),
        "fixture:unit-square" => return Ok(lattices::fixture(Fixture::UnitSquare)?),
        _ => {}
    }
    let value: Value = serde_json::from_str(&read(Path::new(spec))?)?;
    let graph = unwrap_block(value, "graph");
    Ok(QuadGraph::from_json(&graph.to_string())?)
}

fn require_graph(common: &Common) -> Result<QuadGraph> {
    load_graph(common.graph.as_deref().ok_or_else(|| usage("--graph is required"))?)
}

pub fn graph_summary(g: &QuadGraph) -> Value {
    json!({
        "vertices": g.num_vertices(),
        "quads": g.num_quads(),
        "interiorVertices": g.interior_vertices().count(),
        "parallelogramGraph": g.is_parallelogram_graph(),
    })
}

#[derive(Deserialize)]
struct CsvRow {
    id: usize,
    re: f64,
    im: f64,
}

fn read_field_csv(path: &Path, len: usize) -> Result<VertexField> {
    let mut values = vec![None; len];
    let text = read(path)?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for row in reader.deserialize() {
        let row: CsvRow = row?;
        let slot = values.get_mut(row.id).ok_or_else(|| usage(format!("{}: vertex {} does not exist", path.display(), row.id)))?;
        *slot = Some(C64::new(row.re, row.im));
    }
    Ok(VertexField::from_options(values))
}

fn field(g: &QuadGraph, arg: &FieldArg) -> Result<VertexField> {
    match (&arg.expr, &arg.csv) {
        (Some(expr), _) => Symbolic::parse(expr)?.sample(g),
        (None, Some(path)) => read_field_csv(path, g.num_vertices()),
        (None, None) => Err(usage("a field is required: --f EXPR or --f-csv PATH")),
    }
}

fn vertex_or_default(g: &QuadGraph, v: Option<usize>) -> Result<usize> {
    match v {
        Some(v) if v < g.num_vertices() => Ok(v),
        Some(v) => Err(usage(format!("vertex {v} does not exist"))),
        None => Ok(g.nearest_vertex(ORIGIN)),
    }
}

fn quad_or_default(g: &QuadGraph, q: Option<usize>) -> Result<usize> {
    match q {
        Some(q) if q < g.num_quads() => Ok(q),
        Some(q) => Err(usage(format!("quad {q} does not exist"))),
        None => Ok(g.nearest_quad(ORIGIN)),
    }
}

pub fn parse_contour(g: &QuadGraph, spec: &str, center: Site) -> Result<Contour> {
    if let Some(r) = spec.strip_prefix("ring:") {
        let r: usize = r.trim().parse().map_err(|_| usage(format!("bad ring radius in {spec:?}")))?;
        return Ok(Contour::ring(g, center, r)?);
    }
    if let Some(list) = spec.strip_prefix("quads:") {
        let quads = list
            .split(',')
            .map(|q| q.trim().parse::<usize>().map_err(|_| usage(format!("bad quad id in {spec:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(&q) = quads.iter().find(|&&q| q >= g.num_quads()) {
            return Err(usage(format!("quad {q} does not exist")));
        }
        return Ok(Contour::from_quads(g, &quads)?);
    }
    Err(usage(format!("unknown contour {spec:?}; expected ring:R or quads:ID,...")))
}

fn kernel_options(radius: Option<f64>) -> KernelOptions {
    KernelOptions { radius, ..Default::default() }
}

fn table_report(g: &QuadGraph, t: &KernelTable) -> Result<Report> {
    let file = t.to_file(g);
    let mut table = Table::new(&["id", "x", "y", "re", "im", "predicted_re", "predicted_im"]);
    for e in &file.entries {
        let (pr, pi) = e.predicted.map_or((String::new(), String::new()), |p| (num(p.re), num(p.im)));
        table.push(vec![e.id.to_string(), num(e.position.re), num(e.position.im), num(e.value.re), num(e.value.im), pr, pi]);
    }
    Ok(Report::new(json!({ "table": file }))?.with_table(table))
}

fn gen(common: &Common, cmd: &Command) -> Result<Report> {
    let Command::Gen { family, m, n, e1, e2, radius, dirs, offsets, jitter } = cmd else { unreachable!() };
    let (e1, e2, radius) = (parse_complex(e1)?, parse_complex(e2)?, *radius);
    let dirs = || -> Result<Vec<C64>> {
        match dirs {
            Some(d) => parse_complex_list(d),
            None => Ok(vec![C64::new(1.0, 0.0), C64::new(0.3, 0.8), C64::new(-0.6, 0.9)]),
        }
    };
    let family = match family {
        FamilyArg::Skew => Family::Skew { e1, e2, m: *m, n: *n },
        FamilyArg::SkewDisk => Family::SkewDisk { e1, e2, radius },
        FamilyArg::Rhombic => Family::RhombicStrips { dirs: dirs()?, radius },
        FamilyArg::DeBruijn => {
            let offsets = offsets
                .as_deref()
                .map(|o| o.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| usage(format!("bad offset {x:?}")))).collect())
                .transpose()?;
            Family::DeBruijn { dirs: dirs()?, radius, offsets }
        }
        FamilyArg::Perturbed => Family::PerturbedSquare { m: *m, n: *n, jitter: *jitter },
        FamilyArg::Fig3 => Family::Fixture(Fixture::Fig3),
        FamilyArg::UnitSquare => Family::Fixture(Fixture::UnitSquare),
    };
    let g = lattices::generate(&LatticeSpec::new(family).with_seed(common.seed))?;
    let graph: Value = serde_json::from_str(&g.to_json())?;
    let stats = lattices::stats(&g);
    Report::new(json!({ "graph": graph, "summary": graph_summary(&g), "alpha0": stats.alpha0, "q0": stats.q0 }))
}

fn solve(common: &Common, g: &QuadGraph, boundary: &FieldArg, method: MethodArg) -> Result<Report> {
    let values = field(g, boundary)?;
    let data: Vec<Option<f64>> =
        (0..g.num_vertices()).map(|v| if g.is_boundary(v) { values.get(v).map(|z| z.re) } else { None }).collect();
    let problem = DirichletProblem::new(g, data, common.tol.unwrap_or(1e-9))?;
    let method = match method {
        MethodArg::Auto => Method::Auto,
        MethodArg::Direct => Method::Direct,
        MethodArg::Iterative => Method::Iterative,
    };
    let sol = solve_dirichlet_with(g, &problem, &SolverOptions { method, ..Default::default() })?;
    let result = json!({
        "field": sol.field.options(),
        "diagnostics": sol.diagnostics,
        "laplacianResidual": sol.laplacian_residual,
    });
    Ok(Report::new(result)?.with_table(Table::vertex_field(&sol.field)))
}

fn deriv(g: &QuadGraph, arg: &FieldArg) -> Result<Report> {
    let (d, db) = d_lambda(g, &field(g, arg)?)?;
    let mut table = Table::new(&["quad", "d_re", "d_im", "dbar_re", "dbar_im"]);
    for q in 0..g.num_quads() {
        if let (Some(a), Some(b)) = (d.get(q), db.get(q)) {
            table.push(vec![q.to_string(), num(a.re), num(a.im), num(b.re), num(b.im)]);
        }
    }
    Ok(Report::new(json!({ "d": d.options(), "dbar": db.options() }))?.with_table(table))
}

fn laplacian_cmd(g: &QuadGraph, arg: &FieldArg, at: Option<usize>) -> Result<Report> {
    let f = field(g, arg)?;
    if let Some(v) = at {
        if v >= g.num_vertices() {
            return Err(usage(format!("vertex {v} does not exist")));
        }
        let z = laplacian_at(g, &f, v)?;
        let mut table = Table::new(&["id", "re", "im"]);
        table.push(vec![v.to_string(), num(z.re), num(z.im)]);
        return Ok(Report::new(json!({ "vertex": v, "value": z }))?.with_table(table));
    }
    let lap = laplacian(g, &f)?;
    Ok(Report::new(json!({ "laplacian": lap.options(), "maxAbs": lap.max_abs() }))?.with_table(Table::vertex_field(&lap)))
}

fn energy(g: &QuadGraph, arg: &FieldArg) -> Result<Report> {
    let e = dirichlet_energy(g, &field(g, arg)?)?;
    let mut table = Table::new(&["energy"]);
    table.push(vec![num(e)]);
    Ok(Report::new(json!({ "energy": e }))?.with_table(table))
}

fn conjugate(common: &Common, g: &QuadGraph, arg: &FieldArg) -> Result<Report> {
    let f = field(g, arg)?.re();
    let conj = harmonic_conjugate(g, &f, &Basepoints::first(g))?;
    let sum = f.zip_with(&conj, |a, b| a + C64::new(0.0, 1.0) * b);
    let defect = check_holomorphic_vertex(g, &sum)?.relative_defect();
    let tol = common.tol.unwrap_or(1e-10);
    let result = json!({ "conjugate": conj.options(), "holomorphicDefect": defect, "holomorphic": defect < tol, "tolerance": tol });
    Ok(Report::new(result)?.with_table(Table::vertex_field(&conj)))
}

fn kernel(g: &QuadGraph, kind: KernelArg, v0: Option<usize>, q0: Option<usize>, n: usize, radius: Option<f64>) -> Result<Report> {
    let opts = kernel_options(radius);
    let t = match kind {
        KernelArg::Vertex => cauchy_kernel_vertex(g, vertex_or_default(g, v0)?, &opts)?,
        KernelArg::Face => cauchy_kernel_face(g, quad_or_default(g, q0)?, &opts)?,
        KernelArg::FaceDerivative => cauchy_kernel_face_derivative(g, &cauchy_kernel_face(g, quad_or_default(g, q0)?, &opts)?)?,
        KernelArg::Skew => skew_kernel_table(g, quad_or_default(g, q0)?, n, &opts)?,
    };
    table_report(g, &t)
}

fn cauchy(common: &Common, g: &QuadGraph, cmd: &Command) -> Result<Report> {
    let Command::Cauchy { field: arg, v0, q0, contour, input } = cmd else { unreachable!() };
    let f = field(g, arg)?;
    let opts = KernelOptions::default();
    let (d, _) = d_lambda(g, &f)?;
    let (formula, base, value, direct) = match (q0, input) {
        (None, CauchyInput::Vertex) => {
            let v0 = vertex_or_default(g, *v0)?;
            let ring = parse_contour(g, contour, Site::Vertex(v0))?;
            let k = cauchy_kernel_vertex(g, v0, &opts)?;
            ("f(v0)", Site::Vertex(v0), cauchy_integral(g, &Cochain::Vertex(f.clone()), &k, &ring)?, f.at(v0)?)
        }
        (_, input) => {
            let q0 = quad_or_default(g, *q0)?;
            let ring = parse_contour(g, contour, Site::Quad(q0))?;
            let k = cauchy_kernel_face(g, q0, &opts)?;
            if *input == CauchyInput::Face {
                ("h(Q0)", Site::Quad(q0), cauchy_integral(g, &Cochain::Face(d.clone()), &k, &ring)?, d.at(q0)?)
            } else {
                let dk = cauchy_kernel_face_derivative(g, &k)?;
                ("∂f(Q0)", Site::Quad(q0), cauchy_integral(g, &Cochain::Vertex(f.clone()), &dk, &ring)?, d.at(q0)?)
            }
        }
    };
    let tol = common.tol.unwrap_or(1e-9);
    let defect = (value - direct).norm();
    let mut table = Table::new(&["formula", "value_re", "value_im", "direct_re", "direct_im", "defect"]);
    table.push(vec![formula.into(), num(value.re), num(value.im), num(direct.re), num(direct.im), num(defect)]);
    let result = json!({
        "formula": formula,
        "base": base,
        "basePosition": g.site_position(base),
        "value": value,
        "direct": direct,
        "defect": defect,
        "agrees": defect < tol,
        "tolerance": tol,
    });
    Ok(Report::new(result)?.with_table(table))
}

fn asym(table: &Path, bins: &str) -> Result<Report> {
    let value: Value = serde_json::from_str(&read(table)?)?;
    let file = KernelTableFile::from_json(&unwrap_block(value, "table").to_string())?;
    let edges = bins
        .split(',')
        .map(|b| b.trim().parse::<f64>().map_err(|_| usage(format!("bad bin edge {b:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if edges.len() < 2 || edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(usage("bin edges must be increasing and at least two"));
    }
    let rows = file.asymptote_rows();
    let report = binned_decay(&rows, &edges);
    let mut t = Table::new(&["id", "distance", "defect", "scaled"]);
    for r in &rows {
        t.push(vec![r.id.to_string(), num(r.distance), num(r.defect), num(r.scaled)]);
    }
    let result = json!({ "kind": file.kind, "power": file.kind.decay_power(), "rows": rows, "decay": report });
    Ok(Report::new(result)?.with_table(t))
}

fn default_graphs(seed: u64) -> Result<Vec<(String, QuadGraph)>> {
    Ok(vec![
        ("skew".into(), lattices::skew(C64::new(1.0, 0.0), C64::new(0.35, 0.85), 12, 12)?),
        (
            "deBruijn".into(),
            lattices::de_bruijn(&[C64::new(1.0, 0.0), C64::new(0.3, 0.8), C64::new(-0.6, 0.9)], 6.0, None, seed)?,
        ),
        ("perturbedSquare".into(), lattices::perturbed_square(12, 12, 0.2, seed)?),
        ("fig3".into(), lattices::fixture(Fixture::Fig3)?),
    ])
}

fn verify(common: &Common) -> Result<Report> {
    let graphs = match &common.graph {
        Some(spec) => vec![(spec.clone(), load_graph(spec)?)],
        None => default_graphs(common.seed)?,
    };
    let mut table = Table::new(&["graph", "check", "residual", "tolerance", "passed"]);
    let mut out = Vec::new();
    let mut failures = 0;
    for (name, g) in &graphs {
        let checks = identity_suite(g, common.seed)?;
        for c in &checks {
            failures += usize::from(!c.passed);
            table.push(vec![name.clone(), c.name.clone(), num(c.residual), num(c.tolerance), c.passed.to_string()]);
        }
        // △(v²) at the vertex nearest 0 vanishes on parallelogram-graphs only
        let v = g.nearest_vertex(ORIGIN);
        let sq = VertexField::from_fn(g.num_vertices(), |k| g.position(k) * g.position(k));
        let lap = if g.is_interior(v) { Some(laplacian_at(g, &sq, v)?) } else { None };
        out.push(json!({
            "name": name,
            "summary": graph_summary(g),
            "checks": checks,
            "laplacianOfSquareAtOrigin": lap.map(|z| json!({ "vertex": v, "value": z, "modulus": z.norm() })),
        }));
    }
    let mut report = Report::new(json!({ "graphs": out, "failures": failures, "passed": failures == 0 }))?.with_table(table);
    report.failures = failures;
    Ok(report)
}

fn export(common: &Common, what: ExportWhat, arg: &FieldArg) -> Result<Report> {
    let g = require_graph(common)?;
    let f = if arg.expr.is_some() || arg.csv.is_some() { Some(field(&g, arg)?) } else { None };
    let cell = |z: Option<C64>| z.map_or([String::new(), String::new()], |z| [num(z.re), num(z.im)]);
    let table = match what {
        ExportWhat::Vertices => {
            let mut t = Table::new(&["id", "x", "y", "color", "boundary", "f_re", "f_im"]);
            for v in 0..g.num_vertices() {
                let p = g.position(v);
                let [re, im] = cell(f.as_ref().and_then(|f| f.get(v)));
                let color = format!("{:?}", g.color(v)).to_lowercase();
                t.push(vec![v.to_string(), num(p.re), num(p.im), color, g.is_boundary(v).to_string(), re, im]);
            }
            t
        }
        ExportWhat::Quads => {
            let (d, db) = match &f {
                Some(f) => {
                    let (d, db) = d_lambda(&g, f)?;
                    (Some(d), Some(db))
                }
                None => (None, None),
            };
            let mut t = Table::new(&[
                "id", "b_minus", "w_minus", "b_plus", "w_plus", "cx", "cy", "d_re", "d_im", "dbar_re", "dbar_im",
            ]);
            for q in 0..g.num_quads() {
                let c = g.center(q);
                let mut row: Vec<String> = g.quad(q).iter().map(|v| v.to_string()).collect();
                row.insert(0, q.to_string());
                row.extend([num(c.re), num(c.im)]);
                row.extend(cell(d.as_ref().and_then(|d| d.get(q))));
                row.extend(cell(db.as_ref().and_then(|d| d.get(q))));
                t.push(row);
            }
            t
        }
        ExportWhat::Edges => {
            let mut t = Table::new(&["id", "from", "to", "x0", "y0", "x1", "y1"]);
            for (e, &[a, b]) in g.edges().iter().enumerate() {
                let (p, r) = (g.position(a), g.position(b));
                t.push(vec![e.to_string(), a.to_string(), b.to_string(), num(p.re), num(p.im), num(r.re), num(r.im)]);
            }
            t
        }
    };
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| Value::Object(table.header.iter().cloned().zip(r.iter().map(|c| json!(c))).collect()))
        .collect();
    Ok(Report::new(json!({ "what": format!("{what:?}").to_lowercase(), "rows": rows }))?.with_table(table))
}

/// Runs one subcommand. Returns the report and, if a graph was involved,
/// its summary for the result block.
pub fn run(common: &Common, cmd: &Command) -> Result<(Report, Option<Value>)> {
    let with_graph = |f: &dyn Fn(&QuadGraph) -> Result<Report>| -> Result<(Report, Option<Value>)> {
        let g = require_graph(common)?;
        Ok((f(&g)?, Some(graph_summary(&g))))
    };
    match cmd {
        Command::Gen { .. } => Ok((gen(common, cmd)?, None)),
        Command::Solve { boundary, method } => with_graph(&|g| solve(common, g, boundary, *method)),
        Command::Deriv { field } => with_graph(&|g| deriv(g, field)),
        Command::Laplacian { field, at } => with_graph(&|g| laplacian_cmd(g, field, *at)),
        Command::Energy { field } => with_graph(&|g| energy(g, field)),
        Command::Conjugate { field } => with_graph(&|g| conjugate(common, g, field)),
        Command::Green { v0, radius } => {
            with_graph(&|g| table_report(g, &green_free(g, vertex_or_default(g, *v0)?, &kernel_options(*radius))?))
        }
        Command::Kernel { kind, v0, q0, n, radius } => with_graph(&|g| kernel(g, *kind, *v0, *q0, *n, *radius)),
        Command::Cauchy { .. } => with_graph(&|g| cauchy(common, g, cmd)),
        Command::Asym { table, bins } => Ok((asym(table, bins)?, None)),
        Command::Verify => Ok((verify(common)?, None)),
        Command::Export { what, field } => Ok((export(common, *what, field)?, None)),
    }
}
