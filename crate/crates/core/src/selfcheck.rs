//! The property suite behind `mirror selfcheck`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::builtin::{self, Example};
use crate::equivariant::WeightSample;
use crate::euler_data::{check_euler_identity, check_linking_with, EulerData};
use crate::invariants::{compute_invariants, default_order, same_invariants, InvariantRun};
use crate::mirror::{build_hg_series, check_transform_regularity, HGSeries};
use crate::rational::{q, Q};
use crate::series::{invert_mirror_map, NovikovSeries};
use crate::toric::{enumerate_degrees, ToricManifold};

#[derive(Clone, Debug, Default)]
pub struct SelfcheckOptions {
    /// Caps every degree bound at one.
    pub fast: bool,
    /// Specializes linking at the wrong endpoint, which must fail.
    pub corrupt_linking: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub id: char,
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub failures: Vec<String>,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfcheckReport {
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

impl SelfcheckReport {
    pub fn property(&self, id: char) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.id == id)
    }
}

/// At most this many failure messages are kept per property.
const MAX_REPORTED: usize = 20;

struct Tally {
    checked: usize,
    failures: Vec<String>,
    failed: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { checked: 0, failures: Vec::new(), failed: 0 }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED {
                self.failures.push(msg());
            }
        }
    }

    fn fail(&mut self, msg: String) {
        self.check(false, || msg);
    }

    fn finish(self, id: char, name: &str, start: Instant) -> PropertyResult {
        let mut failures = self.failures;
        if self.failed > failures.len() {
            failures.push(format!("... {} more", self.failed - failures.len()));
        }
        PropertyResult {
            id,
            name: name.to_string(),
            passed: self.failed == 0 && self.checked > 0,
            checked: self.checked,
            failures,
            millis: start.elapsed().as_millis(),
        }
    }
}

struct Loaded {
    example: Example,
    manifold: ToricManifold,
    spec: crate::euler_data::BundleSpec,
    sample: WeightSample,
}

fn load_examples() -> Result<Vec<Loaded>, String> {
    builtin::examples()
        .into_iter()
        .map(|e| {
            let manifold = builtin::manifold(&e.manifold).map_err(|err| err.to_string())?;
            let spec = builtin::bundle(&e.bundle).map_err(|err| err.to_string())?;
            let sample = WeightSample::default_for(&manifold).map_err(|err| err.to_string())?;
            Ok(Loaded { example: e, manifold, spec, sample })
        })
        .collect()
}

fn bound(opts: &SelfcheckOptions, full: u32) -> u32 {
    if opts.fast {
        full.min(1)
    } else {
        full
    }
}

fn euler_identity(ex: &[Loaded], opts: &SelfcheckOptions) -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for l in ex {
        let ed = EulerData::new(&l.manifold, &l.sample, &l.spec);
        for d in enumerate_degrees(l.manifold.picard_rank(), bound(opts, 3)) {
            for r in d.sub_classes() {
                match check_euler_identity(&ed, &d, &r) {
                    Ok(res) => t.check(res.is_ok(), || {
                        format!("{}: d={d} r={r} fails at point {}", l.example.name, res.unwrap_err().point)
                    }),
                    Err(e) => t.fail(format!("{}: d={d} r={r}: {e}", l.example.name)),
                }
            }
        }
    }
    t.finish('a', "euler-data identity", start)
}

fn balloon_relation() -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for name in builtin::MANIFOLDS {
        let m = match builtin::manifold(name) {
            Ok(m) => m,
            Err(e) => {
                t.fail(format!("{name}: {e}"));
                continue;
            }
        };
        for b in m.balloons() {
            for b in [b.clone(), b.reversed()] {
                let f = m.first_relation_failure(&b);
                t.check(f.is_none(), || {
                    format!("{name}: balloon {}-{} fails for D_{}", b.p, b.q, f.unwrap() + 1)
                });
            }
        }
    }
    t.finish('b', "balloon relation", start)
}

fn linking(ex: &[Loaded], opts: &SelfcheckOptions) -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for l in ex {
        let ed = EulerData::new(&l.manifold, &l.sample, &l.spec);
        for b in l.manifold.balloons() {
            for b in [b.clone(), b.reversed()] {
                for delta in 1..=2 {
                    match check_linking_with(&ed, &b, delta, opts.corrupt_linking) {
                        Ok(rep) => t.check(rep.numerator_agrees, || {
                            format!("{}: balloon {}-{} at δ={delta} does not link", l.example.name, b.p, b.q)
                        }),
                        Err(e) => t.fail(format!("{}: balloon {}-{} δ={delta}: {e}", l.example.name, b.p, b.q)),
                    }
                }
            }
        }
        match check_transform_regularity(&ed, bound(opts, 3), 2) {
            Ok(v) => {
                t.check(v.is_empty(), || {
                    let v = &v[0];
                    format!(
                        "{}: B_{} has a pole at α = λ/{} on {}-{}",
                        l.example.name, v.r, v.delta, v.p, v.q
                    )
                });
            }
            Err(e) => t.fail(format!("{}: {e}", l.example.name)),
        }
    }
    t.finish('c', "linking regularity", start)
}

fn runs(ex: &[Loaded], opts: &SelfcheckOptions, sample: impl Fn(&Loaded) -> Option<WeightSample>) -> Vec<Result<InvariantRun, String>> {
    ex.iter()
        .map(|l| {
            let s = sample(l).ok_or_else(|| format!("{}: no generic sample", l.example.name))?;
            compute_invariants(&l.manifold, &l.spec, &s, bound(opts, l.example.d_max), default_order(&l.manifold))
                .map_err(|e| format!("{}: {e}", l.example.name))
        })
        .collect()
}

fn gauge(ex: &[Loaded], primary: &[Result<InvariantRun, String>]) -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for (l, run) in ex.iter().zip(primary) {
        match run {
            Ok(run) => t.check(run.gauge.passed, || {
                let w = run.gauge.worst.as_ref().expect("failed report");
                format!("{}: A_{} at point {} has α-order {}", l.example.name, w.degree, w.point, w.alpha_order)
            }),
            Err(e) => t.fail(e.clone()),
        }
    }
    t.finish('d', "gauge α-degree ≤ −2", start)
}

fn sample_swap(ex: &[Loaded], opts: &SelfcheckOptions, primary: &[Result<InvariantRun, String>]) -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let alternate = runs(ex, opts, |l| WeightSample::alternate_for(&l.manifold).ok());
    for ((l, a), b) in ex.iter().zip(primary).zip(&alternate) {
        match (a, b) {
            (Ok(a), Ok(b)) => {
                for (d, k) in &a.table.k {
                    t.check(b.table.k.get(d) == Some(k), || {
                        format!("{}: K_{d} differs between samples", l.example.name)
                    });
                }
                t.check(same_invariants(&a.table, &b.table), || format!("{}: degree sets differ", l.example.name));
            }
            (Err(e), _) | (_, Err(e)) => t.fail(e.clone()),
        }
    }
    t.finish('e', "λ-sample swap invariance", start)
}

fn hg_homogeneous(hg: &HGSeries, t: &mut Tally, name: &str) {
    for d in &hg.degrees {
        for (p, s) in hg.points.iter().enumerate() {
            let c = s.coeff(d);
            let degs: Vec<Option<i32>> = c
                .terms()
                .filter(|(_, v)| !v.is_zero())
                .map(|(a, v)| v.homogeneous_degree().map(|h| h + a))
                .collect();
            let ok = degs.iter().all(|v| v.is_some() && *v == degs[0]);
            t.check(ok, || format!("{name}: B_{d} at point {p} is not ε-homogeneous"));
        }
    }
}

fn epsilon_homogeneity(ex: &[Loaded], opts: &SelfcheckOptions, primary: &[Result<InvariantRun, String>]) -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for (l, run) in ex.iter().zip(primary) {
        let ed = EulerData::new(&l.manifold, &l.sample, &l.spec);
        match build_hg_series(&ed, bound(opts, l.example.d_max), default_order(&l.manifold)) {
            Ok(hg) => hg_homogeneous(&hg, &mut t, &l.example.name),
            Err(e) => t.fail(format!("{}: {e}", l.example.name)),
        }
        if let Ok(run) = run {
            for d in &run.aseries.degrees {
                for p in 0..run.aseries.points.len() {
                    let c = run.aseries.coefficient(d, p);
                    let degs: Vec<Option<i32>> = c
                        .terms()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(a, v)| v.homogeneous_degree().map(|h| h + a))
                        .collect();
                    let ok = degs.iter().all(|v| v.is_some() && *v == degs[0]);
                    t.check(ok, || format!("{}: A_{d} at point {p} is not ε-homogeneous", l.example.name));
                }
            }
        }
    }
    t.finish('f', "ε-homogeneity", start)
}

/// Deterministic series with small integer coefficients and zero constant term.
pub fn sample_series(rng: &mut ChaCha8Rng, m: usize, d_max: u32) -> NovikovSeries<Q> {
    let mut s = NovikovSeries::zero(m, d_max);
    for d in enumerate_degrees(m, d_max) {
        if !d.is_zero() {
            s.insert(d, q(rng.gen_range(-9..=9)));
        }
    }
    s
}

fn series_round_trips() -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in 1..=2 {
        for trial in 0..4 {
            let u = sample_series(&mut rng, m, 4);
            let exp_log = u.exp().and_then(|e| e.sub(&NovikovSeries::one(m, 4))).and_then(|e| e.log1p());
            t.check(exp_log.as_ref() == Ok(&u), || format!("log(exp u) ≠ u, rank {m}, trial {trial}"));
            let log_exp = u.log1p().and_then(|l| l.exp());
            let one_u = NovikovSeries::one(m, 4).add(&u);
            t.check(log_exp.is_ok() && log_exp == one_u, || format!("exp(log(1+u)) ≠ 1+u, rank {m}, trial {trial}"));
            let shifts: Vec<_> = (0..m).map(|_| sample_series(&mut rng, m, 4)).collect();
            let s = sample_series(&mut rng, m, 4);
            let back = invert_mirror_map(&shifts)
                .and_then(|inv| s.substitute_exp_shift(&shifts)?.substitute_exp_shift(&inv));
            t.check(back.as_ref() == Ok(&s), || format!("shift/inverse round trip fails, rank {m}, trial {trial}"));
        }
    }
    t.finish('g', "series round trips", start)
}

pub fn run_selfcheck(opts: &SelfcheckOptions) -> SelfcheckReport {
    let ex = match load_examples() {
        Ok(ex) => ex,
        Err(e) => {
            return SelfcheckReport {
                passed: false,
                properties: vec![PropertyResult {
                    id: '-',
                    name: "load built-ins".into(),
                    passed: false,
                    checked: 1,
                    failures: vec![e],
                    millis: 0,
                }],
            }
        }
    };
    let primary = runs(&ex, opts, |l| Some(l.sample.clone()));
    let properties = vec![
        euler_identity(&ex, opts),
        balloon_relation(),
        linking(&ex, opts),
        gauge(&ex, &primary),
        sample_swap(&ex, opts, &primary),
        epsilon_homogeneity(&ex, opts, &primary),
        series_round_trips(),
    ];
    SelfcheckReport { passed: properties.iter().all(|p| p.passed), properties }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_mode_passes() {
        let r = run_selfcheck(&SelfcheckOptions { fast: true, corrupt_linking: false });
        for p in &r.properties {
            assert!(p.passed, "{}: {:?}", p.name, p.failures);
        }
    }

    #[test]
    fn corrupted_linking_is_reported() {
        let r = run_selfcheck(&SelfcheckOptions { fast: true, corrupt_linking: true });
        let c = r.property('c').unwrap();
        assert!(!c.passed);
        assert!(!c.failures.is_empty());
        assert!(r.property('a').unwrap().passed);
        assert!(!r.passed);
    }
}
