//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so every line reaches the terminal. The process
//! fails when a criterion fails, except for failures listed as known deviations,
//! which are still reported as FAIL.

use std::time::Instant;

use gauss_riesz::bounds::{
    decomposition_rows, domination_report, global_bound_check, kernel_geometry, lemma23_refinement, lemma_gamma,
    lemma_gamma_closed_form, phib0_batch, t0_minimizer_batch, Domination, Region,
};
use gauss_riesz::hermite::{HermiteExpansion, MultiIndex};
use gauss_riesz::quadrature::gaussian_rule;
use gauss_riesz::sampling::{standard_normal, substream, uniform};
use gauss_riesz::varlp::{luxemburg_norm, modular, pinfty_gamma_check, ExponentField};
use griesz::report::render_json;
use griesz::suite::{kernel_agreement_error, spectral_multiplier_error};
use griesz::{run_suite, theorem_experiment, ExperimentConfig, Suite, TheoremData};

const SEED: u64 = 20240611;

struct Outcome {
    pass: bool,
    detail: String,
    /// A documented failure that does not fail the run.
    known: bool,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self {
            pass,
            detail,
            known: false,
        }
    }
}

fn spectral_action() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut zero = true;
    for d in 1..=3 {
        for beta in [1.0, 2.0, 3.0] {
            let (e, z) = spectral_multiplier_error(d, beta, 8).unwrap();
            worst = worst.max(e);
            zero &= z;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        worst <= 4.0 * f64::EPSILON && zero && secs < 1.0,
        format!("max relative error {worst:.2e}, H_0 annihilated {zero}, {secs:.3} s"),
    )
}

fn kernel_agreement() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;
    for (d, order, tol) in [(1usize, 4u32, 1e-5), (2, 2, 1e-3)] {
        for beta in [1.0, 2.0, 3.0] {
            let e = kernel_agreement_error(d, beta, order, 20, SEED).unwrap();
            pass &= e <= tol;
            parts.push(format!("d={d} b={beta} {e:.1e}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(pass && secs < 600.0, format!("{}; {secs:.1} s", parts.join(", ")))
}

fn lemma_gamma_values() -> Outcome {
    let mut worst = 0.0f64;
    for alpha in [0.5, 1.5, 2.0, 3.0] {
        let exact = lemma_gamma_closed_form(alpha);
        worst = worst.max((lemma_gamma(alpha).unwrap() - exact).abs() / exact);
    }
    let one = (lemma_gamma(1.0).unwrap() - 1.0).abs();
    Outcome::new(
        worst <= 1e-6 && one <= 1e-12,
        format!("max relative error {worst:.2e}, alpha = 1 error {one:.1e}"),
    )
}

fn lemma23() -> Outcome {
    let mut steps = Vec::new();
    let mut pass = true;
    for beta in [1.0, 2.0, 4.0] {
        let r = lemma23_refinement(beta, &[1, 2, 4, 8]).unwrap();
        pass &= r.converged(1e-8) && r.i.iter().chain(&r.ii).all(|v| v.is_finite());
        steps.push(format!("b={beta} step {:.1e}", r.max_step));
    }
    Outcome::new(pass, steps.join(", "))
}

fn t0_geometry() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for d in 1..=3 {
        let r = t0_minimizer_batch(d, 1000, 2000, SEED).unwrap();
        pass &= r.clean();
        parts.push(format!(
            "d={d}: {} violations, {} argmin misses",
            r.bound.violations, r.argmin_misses
        ));
    }
    let mut rng = substream(SEED, "orthogonal-pairs");
    let mut orthogonal_ok = 0;
    for k in 0..100 {
        let x = standard_normal(&mut rng, 2);
        let s = 2f64.powi(k % 5 - 2);
        let y = [-x[1] * s, x[0] * s];
        let g = kernel_geometry(&x, &y).unwrap();
        if g.b == 0.0 && g.t0 == 1.0 {
            orthogonal_ok += 1;
        }
    }
    pass &= orthogonal_ok == 100;
    parts.push(format!("t0 = 1 at {orthogonal_ok}/100 orthogonal pairs"));
    let g = kernel_geometry(&[1.0f64], &[2.0]).unwrap();
    let worked = (g.a, g.b, g.t0, g.u_t0);
    pass &= g.a == 5.0 && g.b == 4.0 && (g.t0 - 0.75).abs() < 1e-15 && (g.u_t0 - 3.0).abs() < 1e-14;
    parts.push(format!("worked example {worked:?}"));
    Outcome::new(pass, parts.join("; "))
}

/// The displayed `I + II + III` bound is checked as stated. At `d = 1`, `β ≤ 2` it fails
/// by a few percent at a handful of pairs; the bound with the full quotient-rule
/// coefficient and normalising constant is checked alongside and must hold everywhere.
fn master_decomposition() -> Outcome {
    let mut terms_fail = Vec::new();
    let mut derived_ok = true;
    let mut worst_derived = 0.0f64;
    for d in 1..=3 {
        for beta in [1.0, 2.0, 3.0] {
            let rows = decomposition_rows(d, beta, 1000, SEED).unwrap();
            let t = domination_report(d, beta, &rows, Domination::Terms);
            let v = domination_report(d, beta, &rows, Domination::Derived);
            if !t.clean() {
                terms_fail.push(format!(
                    "d={d} b={beta}: {} violations, C {:.4}",
                    t.violations, t.empirical_constant
                ));
            }
            derived_ok &= v.clean();
            worst_derived = worst_derived.max(v.empirical_constant);
        }
    }
    let derived = format!("corrected bound: violations {}, C <= {worst_derived:.4}", if derived_ok { 0 } else { 1 });
    if terms_fail.is_empty() {
        return Outcome::new(derived_ok, format!("displayed bound holds at 9 (d, beta); {derived}"));
    }
    Outcome {
        pass: false,
        detail: format!("displayed bound fails at {}; {derived}", terms_fail.join(", ")),
        known: derived_ok,
    }
}

fn phib0() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for d in 1..=3 {
        let r = phib0_batch(d, 1000, 100, SEED).unwrap();
        pass &= r.clean() && r.samples == 100_000;
        parts.push(format!("d={d}: {} violations, sup {:.4}", r.violations, r.empirical_constant));
    }
    Outcome::new(pass, parts.join("; "))
}

fn global_bounds() -> Outcome {
    let mut pass = true;
    let mut worst = 0.0f64;
    for d in [1, 2] {
        for beta in [1.0, 2.0] {
            for region in Region::ALL {
                let r = global_bound_check(d, beta, region, None, 1000, SEED).unwrap();
                pass &= r.is_stable(1.5);
                worst = worst.max(r.stability);
            }
        }
    }
    Outcome::new(pass, format!("12 (d, beta, region) cells, worst half-vs-full factor {worst:.4}"))
}

fn luxemburg() -> Outcome {
    let rule = gaussian_rule(40, 1).unwrap();
    let mut rng = substream(SEED, "luxemburg");
    let expansion = |rng: &mut gauss_riesz::sampling::SampleRng| {
        let terms: Vec<(MultiIndex, f64)> = (0..=4).map(|k| (MultiIndex::from([k]), uniform(rng, -1.0, 1.0))).collect();
        HermiteExpansion::from_terms(1, terms).unwrap()
    };
    let mut lq = 0.0f64;
    for q in [1.25, 1.5, 2.0, 3.0, 4.0] {
        let e = expansion(&mut rng);
        let f = |x: &[f64]| e.eval(x).unwrap();
        let n = luxemburg_norm(f, &ExponentField::constant(q).unwrap(), &rule, 1e-12).unwrap();
        let direct = rule.integrate_gaussian(|x| f(x).abs().powf(q)).powf(1.0 / q);
        lq = lq.max((n - direct).abs() / direct);
    }
    let presets = ["decay:2,1", "decay:3,0.5", "logdecay:2,1", "constant:1.5"];
    let (mut homog, mut unit) = (0.0f64, 0.0f64);
    for k in 0..500 {
        let p: ExponentField = presets[k % presets.len()].parse().unwrap();
        let e = expansion(&mut rng);
        let s = uniform(&mut rng, -5.0, 5.0);
        let f = |x: &[f64]| e.eval(x).unwrap();
        let n = luxemburg_norm(f, &p, &rule, 1e-12).unwrap();
        let ns = luxemburg_norm(|x: &[f64]| s * f(x), &p, &rule, 1e-12).unwrap();
        homog = homog.max((ns - s.abs() * n).abs() / (s.abs() * n));
        unit = unit.max((modular(|x: &[f64]| f(x) / n, &p, &rule) - 1.0).abs());
    }
    let h1 = luxemburg_norm(|x: &[f64]| 2.0 * x[0], &ExponentField::constant(2.0).unwrap(), &rule, 1e-12).unwrap();
    let h1_err = (h1 - 2f64.sqrt()).abs();
    Outcome::new(
        lq <= 1e-8 && homog <= 1e-8 && unit <= 1e-8 && h1_err <= 1e-8,
        format!("L^q {lq:.1e}, homogeneity {homog:.1e}, unit ball {unit:.1e}, |H_1| - sqrt 2 {h1_err:.1e}"),
    )
}

fn pinfty() -> Outcome {
    let p: ExponentField = "decay:2,1".parse().unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for d in [1, 2, 3] {
        let r = pinfty_gamma_check(&p, d, 10_000, 50.0, SEED).unwrap();
        pass &= r.c_gamma_hat <= 1.0 && r.lemma14_ok;
        parts.push(format!("d={d}: C {:.6}, C1 {:.4}, C2 {:.4}", r.c_gamma_hat, r.c1, r.c2));
    }
    Outcome::new(pass, parts.join("; "))
}

fn theorem() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for d in [1, 2] {
        for beta in [1.0, 2.0] {
            let c = ExperimentConfig {
                dim: d,
                beta,
                samples: 200,
                seed: SEED,
                ..Default::default()
            };
            let data = TheoremData::prepare(&c).unwrap();
            for e in ["decay:2,1", "decay:3,0.5"] {
                let p: ExponentField = e.parse().unwrap();
                let c = ExperimentConfig {
                    exponent: e.into(),
                    ..c.clone()
                };
                c.validate_theorem().unwrap();
                let s = data.report(&p, &c).summary;
                pass &= s.passed && s.functions == 200;
                parts.push(format!("d={d} b={beta} {e}: sup {:.4} x{:.3}", s.sup_ratio, s.stability_factor));
            }
            let s = data.report(&ExponentField::constant(2.0).unwrap(), &c).summary;
            pass &= s.contraction == Some(true) && s.flagged == 0;
            parts.push(format!("d={d} b={beta} p=2: sup {:.9}", s.sup_ratio));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(pass && secs < 1800.0, format!("{}; {secs:.0} s", parts.join(", ")))
}

fn without_timing(mut v: serde_json::Value) -> serde_json::Value {
    fn strip(v: &mut serde_json::Value) {
        match v {
            serde_json::Value::Object(m) => {
                m.remove("timing");
                m.values_mut().for_each(strip);
            }
            serde_json::Value::Array(a) => a.iter_mut().for_each(strip),
            _ => {}
        }
    }
    strip(&mut v);
    v
}

fn determinism() -> Outcome {
    let c = ExperimentConfig {
        samples: 30,
        pairs: 200,
        seed: SEED,
        suites: vec![Suite::Hermite, Suite::Varlp, Suite::Bounds, Suite::Theorem],
        ..Default::default()
    };
    let render = || -> (String, String) {
        let t = render_json(&theorem_experiment(&c).unwrap()).unwrap();
        let s = render_json(&run_suite(&c).unwrap()).unwrap();
        (t, s)
    };
    let (a, b) = (render(), render());
    let same = |x: &str, y: &str| {
        let timing = |l: &&str| !l.contains("runtime_seconds") && !l.contains("generated_at_unix");
        let parsed = |s: &str| without_timing(serde_json::from_str(s).unwrap());
        parsed(x) == parsed(y) && x.lines().filter(timing).eq(y.lines().filter(timing))
    };
    Outcome::new(
        same(&a.0, &b.0) && same(&a.1, &b.1),
        format!("theorem and suite reports identical apart from timing ({} and {} bytes)", a.0.len(), a.1.len()),
    )
}

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("spectral action", spectral_action),
        ("kernel-spectral agreement", kernel_agreement),
        ("lemma gamma", lemma_gamma_values),
        ("lemma integrals refinement", lemma23),
        ("t0 geometry", t0_geometry),
        ("master decomposition", master_decomposition),
        ("minimiser inequality", phib0),
        ("global bounds", global_bounds),
        ("Luxemburg norm", luxemburg),
        ("P-infinity class", pinfty),
        ("boundedness experiment", theorem),
        ("determinism", determinism),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| *f == id || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let status = match (o.pass, o.known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known deviation)",
            (false, false) => "FAIL",
        };
        if !o.pass && !o.known {
            unexpected += 1;
        }
        println!(
            "criterion {id:>2} {name}: {status} [{:.1} s] {}",
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if unexpected > 0 {
        eprintln!("{unexpected} acceptance criteria failed");
        std::process::exit(1);
    }
}
