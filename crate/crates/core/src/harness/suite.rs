//! The acceptance battery: ten criteria, each reduced to a pass/fail
//! outcome with a one-line summary and machine-readable data.

use std::time::Instant;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::free::operator_identities;
use super::{
    moment_checks, naor_terms, random_matrices, riesz_equivalence_ratio, rosenthal_linear_ratio,
    sample_element, scan, xp_linear_ratio, DerivativeChoice, Ensemble, Experiment, ScanSpec,
};
use crate::algebra::GroupAlgebraElement;
use crate::cocycle::{random_sample, CocycleFamily, LengthCocycle};
use crate::error::Result;
use crate::group::{GroupDescriptor, GroupElement};
use crate::norms::{lp_norm_torus_even, lp_norm_torus_grid, schatten_norm};
use crate::tolerance::{EVEN_P_GRID, EXACT_F64, PSD_MIN_EIGENVALUE, REPRODUCE};

/// Budget of the whole battery.
pub const SUITE_BUDGET_MS: u64 = 300_000;

/// Budget of the Gromov exactness criterion.
pub const GROMOV_BUDGET_MS: u64 = 10_000;

pub const SCAN_TRIALS: usize = 500;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub summary: String,
    pub runtime_ms: u64,
    pub data: Value,
}

impl CriterionOutcome {
    /// `PASS criterion 3 (Schoenberg PSD): ...`
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} ({}): {} [{} ms]",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.summary,
            self.runtime_ms
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionOutcome>,
    pub runtime_ms: u64,
    pub pass: bool,
}

pub const TITLES: [&str; 10] = [
    "Gromov exactness",
    "ONB certification",
    "Schoenberg PSD",
    "operator identities",
    "exact p=2 closures",
    "moment formulas",
    "boundedness scans",
    "even-p torus norms",
    "linear-model consistency",
    "suite runtime",
];

struct Partial {
    pass: bool,
    summary: String,
    data: Value,
}

/// Run criterion `id` in `1..=9`; criterion 10 is the runtime of the others.
pub fn run_criterion(id: u8) -> CriterionOutcome {
    let start = Instant::now();
    let result = match id {
        1 => gromov_exactness(),
        2 => onb_certification(),
        3 => schoenberg(),
        4 => operator_checks(),
        5 => p2_closures(),
        6 => moments(),
        7 => boundedness_scans(),
        8 => even_p_torus(),
        9 => linear_model(),
        _ => Ok(Partial { pass: false, summary: format!("no criterion {id}"), data: Value::Null }),
    };
    let runtime_ms = start.elapsed().as_millis() as u64;
    let partial = result.unwrap_or_else(|e| Partial { pass: false, summary: format!("error: {e}"), data: Value::Null });
    let title = TITLES.get(id as usize - 1).copied().unwrap_or("unknown");
    let mut pass = partial.pass;
    let mut summary = partial.summary;
    if id == 1 && runtime_ms >= GROMOV_BUDGET_MS {
        pass = false;
        summary.push_str(&format!("; over the {GROMOV_BUDGET_MS} ms budget"));
    }
    CriterionOutcome { id, title, pass, summary, runtime_ms, data: partial.data }
}

/// All ten criteria; `progress` sees each outcome as it completes.
pub fn run_suite(mut progress: impl FnMut(&CriterionOutcome)) -> SuiteReport {
    let start = Instant::now();
    let mut criteria = Vec::new();
    for id in 1..=9 {
        let outcome = run_criterion(id);
        progress(&outcome);
        criteria.push(outcome);
    }
    let runtime_ms = start.elapsed().as_millis() as u64;
    let last = CriterionOutcome {
        id: 10,
        title: TITLES[9],
        pass: runtime_ms < SUITE_BUDGET_MS,
        summary: format!("criteria 1-9 took {:.1} s (budget {} s)", runtime_ms as f64 / 1e3, SUITE_BUDGET_MS / 1000),
        runtime_ms,
        data: json!({"budget_ms": SUITE_BUDGET_MS}),
    };
    progress(&last);
    criteria.push(last);
    let pass = criteria.iter().all(|c| c.pass);
    SuiteReport { criteria, runtime_ms, pass }
}

fn tuple(t: &[i64]) -> GroupElement {
    GroupElement::Tuple(t.to_vec())
}

fn torus_box(rank: usize, bound: u32) -> Result<Vec<GroupElement>> {
    GroupDescriptor::Torus { rank, bound }.box_points()
}

/// The domains shared by criteria 1 and 2.
fn exact_domains() -> Result<Vec<(LengthCocycle, Vec<GroupElement>, u64)>> {
    let words = |c: &LengthCocycle, len: u64| -> Vec<GroupElement> {
        c.group().word_kind().unwrap().words_up_to(len).into_iter().map(GroupElement::Word).collect()
    };
    let z2 = LengthCocycle::build(CocycleFamily::ZnWord { rank: 2 })?;
    let z4 = LengthCocycle::build(CocycleFamily::Z2mWord { rank: 2, m: 2 })?;
    let z6 = LengthCocycle::build(CocycleFamily::Z2mWord { rank: 2, m: 3 })?;
    let f2 = LengthCocycle::build(CocycleFamily::Free { rank: 2 })?;
    let fp = LengthCocycle::build(CocycleFamily::FreeProduct { rank: 2, m: 2 })?;
    let z4_elements = z4.group().elements()?;
    let z6_elements = z6.group().elements()?;
    let f2_words = words(&f2, 4);
    let fp_words = words(&fp, 3);
    Ok(vec![
        (z2, torus_box(2, 3)?, 3),
        (z4, z4_elements, 2),
        (z6, z6_elements, 3),
        (f2, f2_words, 4),
        (fp, fp_words, 3),
    ])
}

fn gromov_exactness() -> Result<Partial> {
    let mut pairs = 0;
    let mut failures = Vec::new();
    for (c, domain, _) in exact_domains()? {
        for g in &domain {
            for h in &domain {
                pairs += 1;
                if c.gromov_form_exact(g, h)? != c.gromov_defining_exact(g, h)? {
                    failures.push(format!("{}: {g}, {h}", c.family()));
                }
            }
        }
    }
    Ok(Partial {
        pass: failures.is_empty(),
        summary: format!("{pairs} pairs over 5 domains, {} mismatches", failures.len()),
        data: json!({"pairs": pairs, "failures": failures.iter().take(20).collect::<Vec<_>>()}),
    })
}

fn onb_certification() -> Result<Partial> {
    let mut gram_failures = 0;
    let mut gram_entries = 0;
    let mut completeness_failures = 0;
    let mut completeness_cases = 0;
    for (c, domain, size) in exact_domains()? {
        let basis = c.basis_slice(size)?;
        for (i, row) in c.gram_exact(&basis)?.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                gram_entries += 1;
                if *x != Rational64::from_integer((i == j) as i64) {
                    gram_failures += 1;
                }
            }
        }
        for g in &domain {
            completeness_cases += 1;
            let mut sum = 0i64;
            for u in c.basis_for_element(g)? {
                sum += c.pairing_exact(g, &u)?.pow(2);
            }
            if Some(Rational64::from_integer(sum)) != c.psi_exact(g) {
                completeness_failures += 1;
            }
        }
    }
    // <u_w, u_{w g^m}> = -1 on Z_4^{*2}, words of length <= 3
    let fp = LengthCocycle::build(CocycleFamily::FreeProduct { rank: 2, m: 2 })?;
    let kind = fp.group().word_kind().unwrap();
    let mut sign_cases = 0;
    let mut sign_failures = 0;
    for w in kind.words_up_to(3) {
        let Some((gen, l)) = w.last_block() else { continue };
        if l == 2 {
            continue;
        }
        sign_cases += 1;
        let shifted = kind.mul(&w, &kind.generator_power(gen, 2)?);
        let a = fp.word_edge(&w)?;
        let b = fp.word_edge(&shifted)?;
        if fp.form_exact(&a, &b)? != Rational64::from_integer(-1) {
            sign_failures += 1;
        }
    }
    let pass = gram_failures == 0 && completeness_failures == 0 && sign_failures == 0 && sign_cases > 0;
    Ok(Partial {
        pass,
        summary: format!(
            "Gram {gram_failures}/{gram_entries} off, completeness {completeness_failures}/{completeness_cases} off, \
             sign relation {sign_failures}/{sign_cases} off"
        ),
        data: json!({
            "gram_entries": gram_entries,
            "gram_failures": gram_failures,
            "completeness_cases": completeness_cases,
            "completeness_failures": completeness_failures,
            "sign_cases": sign_cases,
            "sign_failures": sign_failures,
        }),
    })
}

fn schoenberg() -> Result<Partial> {
    let t_grid = [0.1, 1.0, 10.0];
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    let families = CocycleFamily::all_builtin(4);
    for family in &families {
        let c = LengthCocycle::build(family.clone())?;
        for seed in 0..20u64 {
            let sample = random_sample(&c, 12, seed)?;
            let report = c.negativity_check(&sample, &t_grid, seed)?;
            let min = report.min_eigenvalues.iter().map(|&(_, l)| l).fold(f64::INFINITY, f64::min);
            worst = worst.min(min);
            if sample.len() != 12 || min < PSD_MIN_EIGENVALUE || !report.pass {
                failures.push(format!("{family} seed {seed}"));
            }
        }
    }
    Ok(Partial {
        pass: failures.is_empty(),
        summary: format!("{} families x 20 seeds, smallest kernel eigenvalue {worst:.3e}", families.len()),
        data: json!({"min_eigenvalue": worst, "failures": failures}),
    })
}

fn operator_checks() -> Result<Partial> {
    let mut cases: Vec<(LengthCocycle, Vec<GroupElement>)> = Vec::new();
    for m in 1..=3 {
        let c = LengthCocycle::build(CocycleFamily::Z2mWord { rank: 2, m })?;
        let domain = c.group().elements()?;
        cases.push((c, domain));
    }
    for family in [CocycleFamily::Euclidean { rank: 2 }, CocycleFamily::ZnWord { rank: 2 }] {
        cases.push((LengthCocycle::build(family)?, torus_box(2, 3)?));
    }
    let cube = LengthCocycle::build(CocycleFamily::WeightedCube { alpha: vec![0.5, 1.0, 2.0] })?;
    let cube_domain = cube.group().elements()?;
    cases.push((cube, cube_domain));
    for family in [
        CocycleFamily::Free { rank: 2 },
        CocycleFamily::FreeProduct { rank: 2, m: 1 },
        CocycleFamily::FreeProduct { rank: 2, m: 2 },
    ] {
        let c = LengthCocycle::build(family)?;
        // supports of at most 50 elements
        let words: Vec<GroupElement> =
            c.group().word_kind().unwrap().words_up_to(3).into_iter().take(50).map(GroupElement::Word).collect();
        cases.push((c, words));
    }
    let mut failures = Vec::new();
    let mut total = 0;
    let mut worst: f64 = 0.0;
    for (c, domain) in &cases {
        for check in operator_identities(c, domain)? {
            total += check.cases;
            worst = worst.max(check.max_error);
            if !check.pass {
                failures.push(format!("{}: {} (error {:.2e})", c.family(), check.name, check.max_error));
            }
        }
    }
    Ok(Partial {
        pass: failures.is_empty(),
        summary: format!("{} families, {total} symbol comparisons, largest error {worst:.2e}", cases.len()),
        data: json!({"failures": failures, "max_error": worst}),
    })
}

fn normalized(f: GroupAlgebraElement) -> GroupAlgebraElement {
    let s = f.coeff_l2_sq().sqrt();
    f.scale(Complex64::new(1.0 / s, 0.0))
}

fn p2_closures() -> Result<Partial> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);

    // (a) sign orthogonality
    let mut xp_err: f64 = 0.0;
    for n in [4, 6, 8] {
        for _ in 0..100 {
            let xs = random_matrices(n, 4, &mut rng);
            let frob: f64 = xs.iter().map(|x| schatten_norm(x, 2.0).map(|s| s * s)).sum::<Result<f64>>()?;
            for k in 1..=n {
                let r = xp_linear_ratio(&xs, 2.0, k)?;
                xp_err = xp_err.max((r.lhs - k as f64 / n as f64 * frob).abs());
            }
        }
    }

    // (b) hypergeometric inclusion probabilities
    let mut hyper_err: f64 = 0.0;
    let mut hyper_ratio: f64 = 0.0;
    for n in 1..=10 {
        let c = LengthCocycle::build(CocycleFamily::Z2mWord { rank: n, m: 1 })?;
        for _ in 0..10 {
            let f = normalized(sample_element(c.group(), Ensemble::Gaussian, &mut rng)?);
            let terms = naor_terms(&f, 2.0, &c, DerivativeChoice::Walsh)?;
            for k in 1..=n {
                let oracle: f64 = f
                    .iter()
                    .map(|(g, coeff)| {
                        let a = g.as_tuple().unwrap().iter().filter(|&&x| x != 0).count();
                        let prob: f64 = (0..a).map(|i| (k as f64 - i as f64).max(0.0) / (n - i) as f64).product();
                        coeff.norm_sqr() * prob
                    })
                    .sum();
                hyper_err = hyper_err.max((terms.lhs(k) - oracle).abs());
                hyper_ratio = hyper_ratio.max(terms.ratio(k));
            }
        }
    }

    // (c) Riesz normalization
    let mut riesz_err: f64 = 0.0;
    for family in [
        CocycleFamily::Z2mWord { rank: 2, m: 2 },
        CocycleFamily::Z2mWord { rank: 3, m: 3 },
        CocycleFamily::Z2mWord { rank: 5, m: 1 },
        CocycleFamily::WeightedCube { alpha: vec![0.25, 1.0, 3.0] },
    ] {
        let c = LengthCocycle::build(family)?;
        for _ in 0..20 {
            let f = sample_element(c.group(), Ensemble::Gaussian, &mut rng)?;
            riesz_err = riesz_err.max((riesz_equivalence_ratio(&f, 2.0, &c)?.ratio - 1.0).abs());
        }
    }
    let z = LengthCocycle::build(CocycleFamily::ZnWord { rank: 2 })?;
    for _ in 0..20 {
        let f = sample_element(&GroupDescriptor::Torus { rank: 2, bound: 3 }, Ensemble::Gaussian, &mut rng)?;
        riesz_err = riesz_err.max((riesz_equivalence_ratio(&f, 2.0, &z)?.ratio - 1.0).abs());
    }

    let pass = xp_err <= REPRODUCE && hyper_err <= EXACT_F64 && hyper_ratio <= 1.0 + EXACT_F64 && riesz_err <= REPRODUCE;
    Ok(Partial {
        pass,
        summary: format!(
            "(a) xp error {xp_err:.1e}; (b) hypergeometric error {hyper_err:.1e}, max ratio {hyper_ratio:.4}; \
             (c) Riesz error {riesz_err:.1e}"
        ),
        data: json!({"xp_error": xp_err, "hypergeometric_error": hyper_err, "max_ratio": hyper_ratio, "riesz_error": riesz_err}),
    })
}

fn moments() -> Result<Partial> {
    let mut cases = 0;
    let mut failures = Vec::new();
    for n in 1..=10 {
        for k in 1..=n {
            for p in [2.0, 4.0, 6.0] {
                let r = moment_checks(n, k, p)?;
                cases += 1;
                let expected_square = (k as f64).powf(p / 2.0);
                let ok = r.pass
                    && r.exact
                    && r.sigma_moments.iter().all(|&s| s == k as f64 / n as f64)
                    && r.square_moment == expected_square;
                if !ok {
                    failures.push(format!("n={n} k={k} p={p}"));
                }
            }
        }
    }
    Ok(Partial {
        pass: failures.is_empty(),
        summary: format!("{cases} (n, k, p) cases in exact arithmetic, {} failures", failures.len()),
        data: json!({"cases": cases, "failures": failures}),
    })
}

#[derive(Serialize)]
struct ScanRow {
    experiment: &'static str,
    family: String,
    derivative: &'static str,
    n: usize,
    p: f64,
    max_ratio: f64,
    witness_k: Value,
    reproduced: bool,
}

fn boundedness_scans() -> Result<Partial> {
    let mut specs = Vec::new();
    for derivative in [DerivativeChoice::Walsh, DerivativeChoice::Absorbent] {
        for n in [4, 6, 8, 10] {
            for p in [2.0, 4.0] {
                let mut s = ScanSpec::new(Experiment::Naor, n);
                s.derivative = Some(derivative);
                s.p = p;
                specs.push(s);
            }
        }
    }
    for m in [2, 3] {
        for n in [2, 3, 4] {
            for p in [2.0, 4.0] {
                let mut s = ScanSpec::new(Experiment::Ztorus, n);
                s.family = Some(CocycleFamily::Z2mWord { rank: n, m });
                s.p = p;
                specs.push(s);
            }
        }
    }
    for n in [1, 2] {
        for derivative in [DerivativeChoice::Euclidean, DerivativeChoice::Absorbent] {
            let mut s = ScanSpec::new(Experiment::Torus, n);
            s.derivative = Some(derivative);
            s.bound = 3;
            s.p = 4.0;
            specs.push(s);
        }
    }
    let mut rows = Vec::new();
    let mut pass = true;
    let mut problems = Vec::new();
    for (i, s) in specs.iter_mut().enumerate() {
        s.trials = SCAN_TRIALS;
        s.seed = 1000 + i as u64;
        let r = scan(s)?;
        let again = s.evaluate_witness(&r.witness)?;
        let reproduced = (again.ratio - r.ratio).abs() <= REPRODUCE && (again.lhs - r.lhs).abs() <= REPRODUCE * r.lhs.max(1.0);
        if !(r.max_ratio.is_finite() && r.max_ratio > 0.0 && reproduced) {
            pass = false;
            problems.push(format!("{} n={} p={}", s.experiment, s.n, s.p));
        }
        rows.push(ScanRow {
            experiment: s.experiment.name(),
            family: s.family().to_string(),
            derivative: s.derivative().name(),
            n: s.n,
            p: s.p,
            max_ratio: r.max_ratio,
            witness_k: r.witness["k"].clone(),
            reproduced,
        });
    }
    // dimension-free sanity on the hypercube at p = 4
    let mut growth = Vec::new();
    for derivative in ["walsh", "absorbent"] {
        let at = |n: usize| {
            rows.iter()
                .find(|r| r.experiment == "naor" && r.derivative == derivative && r.p == 4.0 && r.n == n)
                .map(|r| r.max_ratio)
                .unwrap_or(f64::NAN)
        };
        let base = at(4);
        let top = [6, 8, 10].into_iter().map(at).fold(f64::NEG_INFINITY, f64::max);
        if base.is_nan() || top.is_nan() || top > 10.0 * base {
            pass = false;
            problems.push(format!("{derivative}: max {top} exceeds 10 x {base}"));
        }
        growth.push(json!({"derivative": derivative, "n4": base, "max_above": top}));
    }
    let largest = rows.iter().map(|r| r.max_ratio).fold(0.0, f64::max);
    Ok(Partial {
        pass,
        summary: format!(
            "{} scans x {SCAN_TRIALS} trials, largest ratio {largest:.4}, witnesses reproduced{}",
            rows.len(),
            if problems.is_empty() { String::new() } else { format!("; problems: {}", problems.join(", ")) }
        ),
        data: json!({"scans": rows, "growth": growth}),
    })
}

fn even_p_torus() -> Result<Partial> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for _ in 0..200 {
        let rank = rng.random_range(1..=2);
        let bound = rng.random_range(1..=3);
        let f = sample_element(&GroupDescriptor::Torus { rank, bound }, Ensemble::Gaussian, &mut rng)?;
        for p in [2.0, 4.0, 6.0] {
            let exact = lp_norm_torus_even(&f, p)?;
            let grid = lp_norm_torus_grid(&f, p, 4)?;
            worst = worst.max((exact - grid).abs());
            count += 1;
        }
    }
    Ok(Partial {
        pass: worst <= EVEN_P_GRID,
        summary: format!("200 polynomials, {count} norms, largest exact-vs-grid gap {worst:.2e}"),
        data: json!({"max_gap": worst}),
    })
}

fn linear_model() -> Result<Partial> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 2..=10 {
        let c = LengthCocycle::build(CocycleFamily::Z2mWord { rank: n, m: 1 })?;
        for _ in 0..3 {
            let f = normalized(sample_element(c.group(), Ensemble::Linear, &mut rng)?);
            let a: Vec<Complex64> = (0..n)
                .map(|j| {
                    let mut t = vec![0; n];
                    t[j] = 1;
                    f.coeff(&tuple(&t))
                })
                .collect();
            for p in [2.0, 3.0, 4.0] {
                let terms = naor_terms(&f, p, &c, DerivativeChoice::Walsh)?;
                for k in 1..=n {
                    let r = rosenthal_linear_ratio(&a, p, k)?;
                    worst = worst.max((terms.lhs(k) - r.lhs.powf(p)).abs());
                    cases += 1;
                }
            }
        }
    }
    Ok(Partial {
        pass: worst <= EXACT_F64,
        summary: format!("{cases} (f, p, k) cases, largest gap {worst:.2e}"),
        data: json!({"max_gap": worst}),
    })
}
