//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero when any fails.
//!
//! `ACCEPTANCE_ONLY=3,4` restricts the run to the listed criteria.

use std::time::Instant;

use bsfem::assembly::coupling_stiffness_1d;
use bsfem::basis::{LagrangeBasis1D, Eval1D};
use bsfem::mesh::{BasisFamily, Case, StructuredAxis, SuperposedModel};
use bsfem::quadrature::{gauss_rule, tensor3};
use bsfem::solver::CgSettings;
use bsfem::verify::{
    all_pairings, convergence_study, error_distribution_experiment, quadrature_sensitivity, run_point, ManufacturedCase, Method, PointSpec, STABLE_CHANGE,
};
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { pass: true, lines: Vec::new() }
    }

    fn check(&mut self, ok: bool, line: String) {
        if !ok {
            self.pass = false;
        }
        self.lines.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.lines.push(format!("     {line}"));
    }
}

const PROPOSED: [(BasisFamily, usize); 6] = [
    (BasisFamily::BSpline(2), 1),
    (BasisFamily::BSpline(2), 2),
    (BasisFamily::BSpline(2), 3),
    (BasisFamily::BSpline(3), 1),
    (BasisFamily::BSpline(3), 2),
    (BasisFamily::BSpline(3), 3),
];

fn eval_poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

/// `∫_{-1}^{1} Σ c_k x^k` and the same integral of `Σ |c_k| |x|^k`.
fn poly_integral(c: &[f64]) -> (f64, f64) {
    let mut exact = 0.0;
    let mut scale = 0.0;
    for (k, a) in c.iter().enumerate() {
        let m = 2.0 / (k + 1) as f64;
        if k % 2 == 0 {
            exact += a * m;
        }
        scale += a.abs() * m;
    }
    (exact, scale)
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = rand::rngs::StdRng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for n in 1..=16 {
        let rule = gauss_rule(n).unwrap();
        for _ in 0..20 {
            let c: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let got: f64 = rule.iter().map(|(x, w)| w * eval_poly(&c, x)).sum();
            let (exact, scale) = poly_integral(&c);
            worst = worst.max((got - exact).abs() / scale.max(exact.abs()));
        }
    }
    out.check(worst <= 1e-10, format!("1D rules n = 1..16, degree 2n-1: worst relative error {worst:.2e}"));
    let mut worst3: f64 = 0.0;
    for n in 1..=6 {
        let r = gauss_rule(n).unwrap();
        let rule = tensor3(&r, &r, &r);
        for _ in 0..5 {
            let cs: Vec<Vec<f64>> = (0..3).map(|_| (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
            let got: f64 = rule.iter().map(|(x, w)| w * (0..3).map(|a| eval_poly(&cs[a], x[a])).product::<f64>()).sum();
            let (exact, scale) = cs.iter().map(|c| poly_integral(c)).fold((1.0, 1.0), |acc, v| (acc.0 * v.0, acc.1 * v.1));
            worst3 = worst3.max((got - exact).abs() / scale.max(exact.abs()));
        }
    }
    out.check(worst3 <= 1e-10, format!("tensor rules n = 1..6: worst relative error {worst3:.2e}"));
    out
}

fn window_value(e: &Eval1D, i: usize) -> (f64, f64) {
    e.indices().position(|j| j == i).map_or((0.0, 0.0), |m| (e.values()[m], e.derivatives()[m]))
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let mut interp: f64 = 0.0;
    for p in 1..=3 {
        let b = LagrangeBasis1D::new(p).unwrap();
        for (j, &node) in b.nodes().iter().enumerate() {
            for (i, v) in b.eval(node).unwrap().values().iter().enumerate() {
                interp = interp.max((v - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    out.check(interp <= 1e-14, format!("Lagrange interpolation property: max defect {interp:.1e}"));

    let families = [
        BasisFamily::Lagrange(1),
        BasisFamily::Lagrange(2),
        BasisFamily::Lagrange(3),
        BasisFamily::BSpline(1),
        BasisFamily::BSpline(2),
        BasisFamily::BSpline(3),
    ];
    let mut rng = rand::rngs::StdRng::seed_from_u64(2);
    for family in families {
        let axis = StructuredAxis::new(family, 0.0, 2.0, 7).unwrap();
        let (mut unity, mut negative, mut fd): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for _ in 0..100 {
            let x = rng.gen_range(0.0..2.0);
            let e = axis.eval(x).unwrap();
            unity = unity.max((e.values().iter().sum::<f64>() - 1.0).abs());
            negative = negative.min(e.values().iter().copied().fold(0.0, f64::min));
            let (el, xi) = axis.locate(x).unwrap();
            if xi.abs() > 1.0 - 1e-4 {
                continue;
            }
            let step = 1e-6;
            let at = axis.eval_in_element(el, x);
            let (plus, minus) = (axis.eval_in_element(el, x + step), axis.eval_in_element(el, x - step));
            for k in 0..at.len {
                fd = fd.max(((plus.values()[k] - minus.values()[k]) / (2.0 * step) - at.derivatives()[k]).abs());
            }
        }
        let mut jump: f64 = 0.0;
        if family.is_bspline() && family.order() >= 2 {
            for k in 1..7 {
                let x = axis.element_start(k);
                let (l, r) = (axis.eval_in_element(k - 1, x), axis.eval_in_element(k, x));
                for i in 0..axis.n_dofs() {
                    let (a, b) = (window_value(&l, i), window_value(&r, i));
                    jump = jump.max((a.0 - b.0).abs()).max((a.1 - b.1).abs());
                }
            }
        }
        let mut ok = unity <= 1e-13 && fd <= 1e-6 && jump <= 1e-10;
        if family.is_bspline() {
            ok &= negative >= 0.0;
        }
        out.check(
            ok,
            format!("{family}: unity {unity:.1e}, min value {negative:.1e}, FD gradient {fd:.1e}, C^(p-1) jump {jump:.1e}"),
        );
    }
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    for case in [Case::A, Case::B] {
        for (family, q) in all_pairings() {
            let mut spec = PointSpec::new(family, q, case, 6);
            spec.problem = ManufacturedCase::Constant { value: 10.0 };
            let r = run_point(&spec).unwrap();
            out.check(
                r.error.relative <= 1e-10,
                format!("{case} {family} q{q}: eps {:.2e} ({} CG iterations)", r.error.relative, r.solve.iterations),
            );
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let global = StructuredAxis::new(BasisFamily::Lagrange(1), 0.0, 1.0, 2).unwrap();
    let local = StructuredAxis::new(BasisFamily::Lagrange(1), 0.25, 0.75, 1).unwrap();
    let got = coupling_stiffness_1d(&global, &local, &gauss_rule(9).unwrap());
    // Piecewise constant slopes: ±2 on each half of [0, 1] and on [1/4, 3/4].
    let exact = [[1.0, -1.0], [0.0, 0.0], [-1.0, 1.0]];
    let gap = (0..3).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| (got[i][j] - exact[i][j]).abs()).fold(0.0, f64::max);
    out.check(gap <= 1e-10, format!("2 global / 1 local linear elements, 9-point Gauss: max gap {gap:.1e}"));
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    for n in [6, 9] {
        for (family, q) in all_pairings() {
            let mut spec = PointSpec::new(family, q, Case::A, n);
            spec.spd = true;
            let r = run_point(&spec).unwrap();
            let v = r.spd.unwrap();
            let want = Method::of(family) == Method::Proposed;
            let pivot = v.failure.map(|f| format!(", pivot {} = {:.2e}", f.pivot_index, f.value)).unwrap_or_default();
            out.check(
                v.positive_definite == want,
                format!("{n}^3 {family} q{q}: {} (expected {}){pivot}", v.label(), if want { "positive-definite" } else { "not-positive-definite" }),
            );
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    for n in [6, 9, 12] {
        let before = out.pass;
        for case in [Case::A, Case::B] {
            for (family, q) in PROPOSED {
                let mut spec = PointSpec::new(family, q, case, n);
                let dim = spec.model().map(|m| bsfem::assembly::DofPartition::new(&m, &|_| 0.0).dim()).unwrap();
                let limit = (0.2 * dim as f64).ceil() as usize;
                spec.cg = CgSettings { max_iterations: Some(limit), ..CgSettings::default() };
                let r = run_point(&spec).unwrap();
                out.check(
                    r.solve.converged,
                    format!(
                        "{n}^3 {case} {family} q{q}: {} within 0.2 n = {limit} (n = {dim}, {} iterations)",
                        if r.solve.converged { "converged" } else { "not converged" },
                        r.solve.iterations
                    ),
                );
            }
        }
        if before && !out.pass {
            out.note(format!("stopping after {n}^3: larger meshes cannot change the verdict"));
            break;
        }
    }
    for n in [6, 9] {
        for p in 1..=3 {
            let r = run_point(&PointSpec::new(BasisFamily::Lagrange(p), p, Case::B, n)).unwrap();
            out.check(
                !r.solve.converged,
                format!(
                    "{n}^3 B lagrange:{p} q{p}: {} after {} of n = {} iterations",
                    if r.solve.converged { "converged" } else { "not converged" },
                    r.solve.iterations,
                    r.dofs
                ),
            );
        }
    }
    out
}

const DESK: [usize; 4] = [6, 9, 12, 15];

/// Iteration budget for the slope series. The largest converged count seen on
/// the desk meshes is about 6300; points that need more are reported as not
/// converged and left out of the fit, like any non-converged point.
const SERIES_CG_BUDGET: usize = 10_000;

fn series(out: &mut Outcome, family: BasisFamily, q: usize) -> f64 {
    let mut template = PointSpec::new(family, q, Case::A, DESK[0]);
    template.cg = CgSettings { max_iterations: Some(SERIES_CG_BUDGET), ..CgSettings::default() };
    let (s, failures) = convergence_study(&template, &DESK);
    assert!(failures.is_empty(), "{failures:?}");
    let points: Vec<String> = s
        .entries
        .iter()
        .map(|e| format!("{}:{:.3e}{}", e.elements, e.l2_error, if e.cg_converged { "" } else { "(nc)" }))
        .collect();
    let slope = s.slope.unwrap_or(f64::NAN);
    out.note(format!("A {family} q{q}: slope {slope:.3} from {}", points.join(" ")));
    slope
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    // Case A against Case B at matched h.
    for n in DESK {
        let before = out.pass;
        for (family, q) in PROPOSED {
            let a = run_point(&PointSpec::new(family, q, Case::A, n)).unwrap();
            let b = run_point(&PointSpec::new(family, q, Case::B, n)).unwrap();
            let gap = (a.error.relative - b.error.relative).abs() / a.error.relative;
            out.check(
                gap <= 0.10,
                format!(
                    "{n}^3 {family} q{q}: eps A {:.4e}, B {:.4e}{} (gap {:.1}%)",
                    a.error.relative,
                    b.error.relative,
                    if b.solve.converged { "" } else { " (B not converged)" },
                    100.0 * gap
                ),
            );
        }
        if before && !out.pass {
            out.note(format!("stopping the A/B comparison after {n}^3: larger meshes cannot change the verdict"));
            break;
        }
    }
    for p in 2..=3 {
        for q in 1..=3 {
            let sp = series(&mut out, BasisFamily::BSpline(p), q);
            let sc = series(&mut out, BasisFamily::Lagrange(p), q);
            if p == 3 {
                out.check(sp >= 3.5, format!("A bspline:3 q{q}: slope {sp:.3} >= 3.5"));
            }
            out.check(sp >= sc, format!("A p={p} q{q}: proposed slope {sp:.3} >= conventional {sc:.3}"));
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    // 12^3 global elements, a box of 3 of them, 10:3 refinement, linear local basis.
    let lagrange = error_distribution_experiment(BasisFamily::Lagrange(3), 12, 3, (10, 3)).unwrap();
    let spline = error_distribution_experiment(BasisFamily::BSpline(3), 12, 3, (10, 3)).unwrap();
    for d in [&lagrange, &spline] {
        out.note(format!(
            "{}: eps {:.3e}, max crossing {:.3e}, max non-crossing {:.3e}, ratio {:.3}",
            d.global,
            d.l2_error,
            d.max_crossing,
            d.max_non_crossing,
            d.crossing_ratio()
        ));
    }
    out.check(lagrange.max_crossing > spline.max_crossing, "crossing elements: lagrange:3 max error above bspline:3".into());
    out.check(lagrange.crossing_ratio() > spline.crossing_ratio(), "crossing / non-crossing ratio: lagrange:3 above bspline:3".into());
    out
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::new();
    for (family, q) in all_pairings() {
        let model = SuperposedModel::for_case(family, 6, q, Case::A).unwrap();
        let p = family.order().max(q);
        let table = quadrature_sensitivity(&model, p + 1..=p + 10, &ManufacturedCase::Sine, &CgSettings::default()).unwrap();
        let bound = match Method::of(family) {
            Method::Conventional => p + 8,
            Method::Proposed => p + 2,
        };
        let changes: Vec<String> = table
            .rows
            .iter()
            .filter_map(|r| r.change.map(|c| format!("{}:{:.1}%", r.points, 100.0 * c)))
            .collect();
        let settled = table.stabilization_order.is_some_and(|s| s <= bound);
        out.check(
            settled,
            format!(
                "6^3 A {family} q{q}: below {:.0}% from {} points (required by {bound}); changes {}",
                100.0 * STABLE_CHANGE,
                table.stabilization_order.map_or("never".into(), |s| s.to_string()),
                changes.join(" ")
            ),
        );
    }
    out
}

type Criterion = (usize, &'static str, fn() -> Outcome);

fn main() {
    let only: Option<Vec<usize>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let criteria: [Criterion; 9] = [
        (1, "quadrature exactness", criterion_1),
        (2, "basis correctness", criterion_2),
        (3, "patch test", criterion_3),
        (4, "1D coupling oracle", criterion_4),
        (5, "SPD pattern", criterion_5),
        (6, "CG convergence pattern", criterion_6),
        (7, "convergence slopes", criterion_7),
        (8, "error distribution", criterion_8),
        (9, "quadrature sensitivity", criterion_9),
    ];
    let mut summary = Vec::new();
    for (id, name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let clock = Instant::now();
        let outcome = run();
        println!("criterion {id} ({name}), {:.1} s", clock.elapsed().as_secs_f64());
        for line in &outcome.lines {
            println!("  {line}");
        }
        let verdict = format!("criterion {id}: {} {name}", if outcome.pass { "PASS" } else { "FAIL" });
        println!("{verdict}\n");
        summary.push((outcome.pass, verdict));
    }
    println!("summary");
    for (_, line) in &summary {
        println!("  {line}");
    }
    if summary.iter().any(|(pass, _)| !pass) {
        std::process::exit(1);
    }
}
