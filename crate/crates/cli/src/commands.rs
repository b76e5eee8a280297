use std::io::Write as _;

use qmv_core::azumaya::{abelian_reduction, build_module_for, is_matrix_algebra};
use qmv_core::classical::{classical_consistency, classical_samples};
use qmv_core::ncalg::subalgebra_membership;
use qmv_core::poisson::{compare_bivector_form, compare_with_degeneration, torus_bracket_scaling, verify_hayashi_closure, BivectorForm, PoissonOrderCtx};
use qmv_core::qalgebras::{build_quiver, frobenius_center, moment_map, verify_moment_algebra_map, Quiver, QuiverAlgebra, QuiverMode};
use qmv_core::scalars::{check_assumption, expand_label, CycScalar};
use serde_json::json;

use crate::report::Report;
use crate::{Classical, Cli, Command, Fiber, Format, QuiverArgs, Reduce, Torus, Verify};

type Res<T> = Result<T, String>;

fn err(e: qmv_core::Error) -> String {
    e.to_string()
}

/// Runs a command, prints its report and writes the report files; returns
/// whether every check passed.
pub fn run(cli: &Cli) -> Res<bool> {
    let (stem, report) = match &cli.command {
        Command::Verify { what: Verify::Center(q) } => ("verify-center", verify_center(q)?),
        Command::Verify { what: Verify::Bivector(q) } => ("verify-bivector", verify_bivector(q)?),
        Command::Verify { what: Verify::Moment(q) } => ("verify-moment", verify_moment(q)?),
        Command::Fiber { what: Fiber::Zero(q) } => ("fiber-zero", fiber_zero(q)?),
        Command::Reduce { what: Reduce::Abelian { quiver, xi, chi } } => ("reduce-abelian", reduce_abelian(quiver, xi, chi)?),
        Command::Classical { what: Classical::Sample { quiver, samples, theta } } => {
            let (r, lines) = classical_sample(quiver, *samples, theta, cli.global.seed)?;
            if let Some(dir) = &cli.global.out {
                std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
                std::fs::write(dir.join("classical-sample.jsonl"), lines).map_err(|e| e.to_string())?;
            }
            ("classical-sample", r)
        }
        Command::Assumption { what: crate::Assumption::Check { kind, ell } } => ("assumption-check", assumption(kind, *ell)?),
        Command::Torus { what: Torus::Scaling { skew, ells } } => ("torus-scaling", torus_scaling(skew, ells)?),
    };
    if let Some(dir) = &cli.global.out {
        report.write_files(dir, stem).map_err(|e| e.to_string())?;
    }
    let text = match cli.global.format {
        Format::Json => report.json(),
        Format::Md => report.markdown(),
    };
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    Ok(report.passed)
}

fn check_ell(ell: u32) -> Res<()> {
    if ell < 3 || ell % 2 == 0 {
        return Err(format!("ell must be odd and greater than 1, got {ell}"));
    }
    Ok(())
}

fn load_quiver(args: &QuiverArgs) -> Res<Quiver> {
    let mut q = match Quiver::builtin(&args.quiver) {
        Some(q) => q,
        None => {
            let text = std::fs::read_to_string(&args.quiver).map_err(|e| {
                format!("{}: {e} (bundled quivers: {})", args.quiver, Quiver::builtin_names().join(", "))
            })?;
            Quiver::from_toml(&text).map_err(err)?
        }
    };
    if let Some(ell) = args.ell {
        q.ell = ell;
    }
    check_ell(q.ell)?;
    q.validate().map_err(err)?;
    Ok(q)
}

fn config(q: &Quiver, args: &QuiverArgs) -> serde_json::Value {
    json!({
        "quiver": args.quiver,
        "dims": q.dims,
        "edges": q.edges.iter().map(|e| [e.source, e.target]).collect::<Vec<_>>(),
        "ell": q.ell,
        "mode": q.mode,
    })
}

fn root_algebra(q: &Quiver) -> Res<QuiverAlgebra<CycScalar>> {
    if q.mode != QuiverMode::Root {
        return Err("this command works at a root of unity; set mode = \"root\"".into());
    }
    build_quiver(q, &CycScalar::zeta(q.ell)).map_err(err)
}

/// The quiver must be one non-loop edge; returns its (source, target) ranks.
fn single_edge(q: &Quiver) -> Res<(usize, usize)> {
    match q.edges.as_slice() {
        [e] if !e.is_loop => Ok((q.dims[e.source], q.dims[e.target])),
        _ => Err("this command needs a quiver with a single non-loop edge".into()),
    }
}

fn verify_center(args: &QuiverArgs) -> Res<Report> {
    let q = load_quiver(args)?;
    let mut r = Report::new("verify center", "frobenius-center-generated-by-lth-powers", config(&q, args));
    let qa = root_algebra(&q)?;
    let conf = qa.alg.spec.confluence_report().map_err(err)?;
    r.line(conf.passed(), "rewriting system is confluent");
    let (_, entries) = frobenius_center(&qa.alg, q.ell).map_err(err)?;
    let central = entries.iter().filter(|e| e.central).count();
    r.line(central == entries.len(), format!("{central} central generators out of {}", entries.len()));
    r.detail("central_generators", central);
    r.detail("entries", &entries);
    Ok(r)
}

fn verify_bivector(args: &QuiverArgs) -> Res<Report> {
    let q = load_quiver(args)?;
    let (n, m) = single_edge(&q)?;
    let mut r = Report::new("verify bivector", "degeneration-bracket-is-edge-bivector", config(&q, args));
    let ctx = PoissonOrderCtx::kronecker(n, m, q.ell).map_err(err)?;
    let closure = verify_hayashi_closure(&ctx).map_err(err)?;
    r.line(closure.closed, "brackets of central generators are central, with witnesses");
    r.line(closure.antisymmetric && closure.jacobi && closure.leibniz, "antisymmetry, Jacobi and Leibniz");
    let printed = compare_with_degeneration(n, m, q.ell).map_err(err)?;
    r.line(
        printed.proportional,
        format!("printed bivector proportional to the bracket (constant {})", printed.constant.clone().unwrap_or_else(|| "none".into())),
    );
    let halved = compare_bivector_form(n, m, q.ell, BivectorForm::HalvedDiagonal).map_err(err)?;
    r.note(format!(
        "diagnostic: with the mixed diagonal term halved, proportional = {} (constant {})",
        halved.proportional,
        halved.constant.clone().unwrap_or_else(|| "none".into())
    ));
    r.detail("closure", &closure);
    r.detail("printed", &printed);
    r.detail("halved_diagonal", &halved);
    Ok(r)
}

fn verify_moment(args: &QuiverArgs) -> Res<Report> {
    let q = load_quiver(args)?;
    let mut r = Report::new("verify moment", "moment-map-lands-in-center", config(&q, args));
    let qa = root_algebra(&q)?;
    let spec = &*qa.alg.spec;
    let (zs, _) = frobenius_center(&qa.alg, q.ell).map_err(err)?;
    let mut edges = Vec::new();
    for (k, e) in q.edges.iter().enumerate() {
        if e.is_loop {
            r.note(format!("edge {k}: loop, no α/β moment matrices"));
            continue;
        }
        let chk = verify_moment_algebra_map(&qa.alg, k as u32).map_err(err)?;
        r.line(chk.passed(), format!("edge {k}: moment matrices satisfy the exchange relations ({} identities)", chk.identities));
        let mm = moment_map(&qa.alg, k as u32).map_err(err)?;
        let mut witness = None;
        if mm.n == 1 {
            let power = spec.pow(mm.alpha.get(0, 0), q.ell).map_err(err)?;
            let w = subalgebra_membership(spec, &power, &zs).map_err(err)?;
            r.line(w.is_some(), format!("edge {k}: (g^α)^ℓ lies in the Frobenius center"));
            witness = w.map(|w| w.words.iter().map(|(word, c)| (word.clone(), c.to_string())).collect::<Vec<_>>());
        }
        edges.push(json!({ "edge": k, "check": chk, "power_witness": witness }));
    }
    r.detail("edges", edges);
    Ok(r)
}

fn fiber_zero(args: &QuiverArgs) -> Res<Report> {
    let q = load_quiver(args)?;
    let mut r = Report::new("fiber zero", "zero-fiber-is-a-matrix-algebra", config(&q, args));
    let qa = root_algebra(&q)?;
    let module = build_module_for(qa.alg, q.ell).map_err(err)?;
    r.line(module.relations.passed(), format!("module satisfies {} relation identities", module.relations.identities));
    let cert = is_matrix_algebra(&module).map_err(err)?;
    r.line(
        cert.is_matrix_algebra,
        format!("certificate (dim {}, span {} of {})", cert.module_dim, cert.span_dim, cert.target_dim),
    );
    if !cert.witnesses.is_empty() {
        r.line(cert.all_reduced, format!("every basis vector reduces to 1 ({} witnesses)", cert.witnesses.len()));
    }
    r.detail("module_dim", cert.module_dim);
    r.detail("span_dim", cert.span_dim);
    r.detail("span", &cert.span);
    r.detail("witnesses", &cert.witnesses);
    Ok(r)
}

pub fn parse_scalar(ell: u32, s: &str) -> Res<CycScalar> {
    let s = s.trim();
    if s.starts_with('(') {
        return CycScalar::parse(ell, s);
    }
    if s == "z" {
        return Ok(CycScalar::zeta(ell));
    }
    if let Some(k) = s.strip_prefix("z^") {
        let k: i64 = k.parse().map_err(|_| format!("bad power in {s}"))?;
        return Ok(CycScalar::zeta_pow(ell, k));
    }
    s.parse::<i64>().map(|n| CycScalar::from_int(ell, n)).map_err(|_| format!("cannot read scalar {s}"))
}

fn reduce_abelian(args: &QuiverArgs, xi: &[String], chi: &[String]) -> Res<Report> {
    let q = load_quiver(args)?;
    let mut cfg = config(&q, args);
    cfg["xi"] = json!(xi);
    cfg["chi"] = json!(chi);
    let mut r = Report::new("reduce abelian", "reduction-of-matrix-fiber-is-matrix-algebra", cfg);
    let qa = root_algebra(&q)?;
    let ell = q.ell;
    let xi: Vec<CycScalar> = if xi.is_empty() {
        vec![CycScalar::one(ell); q.dims.len()]
    } else {
        xi.iter().map(|s| parse_scalar(ell, s)).collect::<Res<_>>()?
    };
    let chi: Vec<CycScalar> = if chi.is_empty() {
        qa.alg.spec.gens().iter().map(|g| if g.invertible { CycScalar::one(ell) } else { CycScalar::zero(ell) }).collect()
    } else {
        chi.iter().map(|s| parse_scalar(ell, s)).collect::<Res<_>>()?
    };
    let rep = abelian_reduction(&qa, &chi, &xi, ell).map_err(err)?;
    r.note(format!("fiber dim {}, weight-zero dim {}, ideal dim {}", rep.fiber_dim, rep.weight_zero_dim, rep.ideal_dim));
    r.line(rep.associative, format!("quotient of dimension {} is associative", rep.dim));
    r.line(rep.center_central, "image of the center is central");
    let k = (rep.dim as f64).sqrt().round() as usize;
    r.note(if k * k == rep.dim { format!("dimension is the square {k}²") } else { "dimension is not a square".into() });
    r.detail("reduction", &rep);
    Ok(r)
}

fn classical_sample(args: &QuiverArgs, samples: usize, theta: &[i64], seed: u64) -> Res<(Report, String)> {
    let q = load_quiver(args)?;
    let theta = if theta.is_empty() { vec![0; q.dims.len()] } else { theta.to_vec() };
    let mut cfg = config(&q, args);
    cfg["samples"] = json!(samples);
    cfg["seed"] = json!(seed);
    cfg["theta"] = json!(theta);
    let mut r = Report::new("classical sample", "multiplicative-moment-map-and-big-cell", cfg);
    let records = classical_samples(&q, &theta, samples, seed).map_err(err)?;
    let consistency = classical_consistency(&q, samples, seed).map_err(err)?;
    r.line(consistency.equivariance_failures.is_empty(), format!("moment map equivariant on {samples} samples"));
    r.line(consistency.big_cell_failures.is_empty(), "big-cell test agrees with the dual-group factorization");
    let open = records.iter().filter(|s| s.big_cell).count();
    r.note(format!("{open} of {samples} samples on the open leaf"));
    let mut lines = String::new();
    for s in &records {
        lines.push_str(&serde_json::to_string(s).map_err(|e| e.to_string())?);
        lines.push('\n');
    }
    r.detail("consistency", &consistency);
    r.detail("samples", &records);
    Ok((r, lines))
}

fn assumption(kind: &str, ell: u32) -> Res<Report> {
    check_ell(ell)?;
    let mut r = Report::new("assumption check", "pairing-nondegenerate-mod-ell", json!({ "type": kind, "ell": ell }));
    let data = expand_label(kind).map_err(err)?;
    let mut reports = Vec::new();
    for g in &data {
        let a = check_assumption(g, ell).map_err(err)?;
        r.line(a.holds, format!("{} at ℓ = {ell}", a.label));
        reports.push(a);
    }
    r.detail("reports", reports);
    Ok(r)
}

fn parse_skew(s: &str) -> Res<Vec<Vec<i64>>> {
    s.split(';')
        .map(|row| row.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| format!("bad skew entry in {s}"))).collect())
        .collect()
}

fn torus_scaling(skew: &[String], ells: &[u32]) -> Res<Report> {
    for &l in ells {
        check_ell(l)?;
    }
    let skews: Vec<Vec<Vec<i64>>> = if skew.is_empty() {
        vec![
            vec![vec![0, 1], vec![-1, 0]],
            vec![vec![0, 2, -1], vec![-2, 0, 3], vec![1, -3, 0]],
            vec![vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, -1, 0]],
        ]
    } else {
        skew.iter().map(|s| parse_skew(s)).collect::<Res<_>>()?
    };
    let mut r = Report::new("torus scaling", "torus-bracket-independent-of-ell-up-to-factor", json!({ "skew": skews, "ells": ells }));
    let mut out = Vec::new();
    for s in &skews {
        let t = torus_bracket_scaling(s, ells).map_err(err)?;
        let scalars: Vec<String> = t.scalars.iter().map(|(l, c)| format!("ℓ={l}: {}", c.as_deref().unwrap_or("none"))).collect();
        r.line(t.proportional, format!("skew {s:?}: {}", scalars.join(", ")));
        out.push(t);
    }
    r.detail("results", out);
    Ok(r)
}

