use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use mirror_core::builtin;
use mirror_core::cache::Cache;
use mirror_core::equivariant::WeightSample;
use mirror_core::euler_data::formal::formal_b_expansion;
use mirror_core::euler_data::{BundleSpec, EulerData, EulerError};
use mirror_core::invariants::{compute_invariants, default_order, t_linear_consistency, InvariantsError};
use mirror_core::io::{self, SpecError};
use mirror_core::mirror::{build_hg_series, extract_mirror_data, transform_with_gauge_sign, MirrorError};
use mirror_core::oracle::{self, OracleError};
use mirror_core::rational::{fmt_q, Q, RationalRepr};
use mirror_core::results::{
    input_hash, text_hash, FixedPointDoc, MirrorDataDoc, ResultDoc, ResultMeta, ResultRow, SeriesDoc,
    SignConventions, CODE_VERSION,
};
use mirror_core::selfcheck::{run_selfcheck, SelfcheckOptions};
use mirror_core::toric::{enumerate_degrees, CurveClass, ToricManifold};

use crate::{Command, Format, InputArgs, LinesArgs, OracleCommand, RunArgs};

pub const EXIT_IO: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_GAUGE: u8 = 3;
pub const EXIT_CONSISTENCY: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

fn fail(code: u8, message: impl ToString) -> Failure {
    Failure { code, message: message.to_string() }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Io { .. } => fail(EXIT_IO, e),
            _ => fail(EXIT_VALIDATION, e),
        }
    }
}

impl From<InvariantsError> for Failure {
    fn from(e: InvariantsError) -> Self {
        match e {
            InvariantsError::GaugeCheckFailed(_) => fail(EXIT_GAUGE, e),
            InvariantsError::NegativeS(_) | InvariantsError::Euler(_) => fail(EXIT_VALIDATION, e),
            InvariantsError::Mirror(MirrorError::TruncationOverflow(_) | MirrorError::Euler(_)) => {
                fail(EXIT_VALIDATION, e)
            }
            InvariantsError::Mirror(MirrorError::NoGaugeSign) => fail(EXIT_GAUGE, e),
            _ => fail(EXIT_CONSISTENCY, e),
        }
    }
}

impl From<MirrorError> for Failure {
    fn from(e: MirrorError) -> Self {
        InvariantsError::from(e).into()
    }
}

impl From<EulerError> for Failure {
    fn from(e: EulerError) -> Self {
        fail(EXIT_VALIDATION, e)
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        fail(EXIT_VALIDATION, e)
    }
}

fn builtin_name(arg: &str) -> Option<&str> {
    arg.strip_prefix("builtin:")
}

fn load_manifold(arg: &str) -> Result<ToricManifold, Failure> {
    Ok(match builtin_name(arg) {
        Some(name) => builtin::manifold(name)?,
        None => io::load_manifold(Path::new(arg))?,
    })
}

fn load_bundle(arg: &str) -> Result<BundleSpec, Failure> {
    Ok(match builtin_name(arg) {
        Some(name) => builtin::bundle(name)?,
        None => io::load_bundle(Path::new(arg))?,
    })
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| fail(EXIT_IO, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(doc: &ResultDoc, format: Format) -> String {
    match format {
        Format::Csv => doc.to_csv(),
        Format::Json => doc.to_json(),
    }
}

pub fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Validate(a) => validate(&a),
        Command::FixedPoints(a) => {
            let m = load_manifold(&a.manifold)?;
            emit(&a.output, &FixedPointDoc::new(&m).to_json())
        }
        Command::Series(a) => series(&a),
        Command::MirrorData(a) => mirror_data(&a),
        Command::Invariants(a) => invariants(&a),
        Command::Oracle { which } => oracle_cmd(which),
        Command::Selfcheck { fast, corrupt_linking } => selfcheck(fast, corrupt_linking),
    }
}

fn validate(a: &InputArgs) -> Result<(), Failure> {
    let m = load_manifold(&a.manifold)?;
    let mut report = format!(
        "manifold {}: ok (dim {}, rank {}, {} fixed points, {} balloons)\n",
        m.name(),
        m.dim(),
        m.picard_rank(),
        m.fixed_points().len(),
        m.balloons().len()
    );
    if let Some(b) = &a.bundle {
        let spec = load_bundle(b)?;
        let warnings = spec.validate(&m)?;
        let s = spec.s(m.dim());
        report.push_str(&format!("bundle: ok (case {:?}, s = {s})\n", spec.case()));
        for w in warnings {
            report.push_str(&format!("warning: {w}\n"));
        }
        if s < 0 {
            emit(&a.output, &report)?;
            return Err(fail(EXIT_VALIDATION, InvariantsError::NegativeS(s)));
        }
    }
    emit(&a.output, &report)
}

struct Prepared {
    manifold: ToricManifold,
    spec: BundleSpec,
    sample: WeightSample,
    order: i32,
}

fn prepare(a: &RunArgs) -> Result<Prepared, Failure> {
    let manifold = load_manifold(&a.manifold)?;
    let spec = load_bundle(&a.bundle)?;
    for w in spec.validate(&manifold)? {
        eprintln!("warning: {w}");
    }
    let sample = match a.seed {
        Some(seed) => WeightSample::from_seed(&manifold, seed),
        None => WeightSample::default_for(&manifold),
    }
    .map_err(|e| fail(EXIT_VALIDATION, e))?;
    let order = a.order.unwrap_or_else(|| default_order(&manifold));
    Ok(Prepared { manifold, spec, sample, order })
}

fn series(a: &RunArgs) -> Result<(), Failure> {
    let p = prepare(a)?;
    let doc = if p.spec.manual_euler.is_some() {
        let mut exps = Vec::new();
        for d in enumerate_degrees(p.manifold.picard_rank(), a.d_max) {
            let e = formal_b_expansion(&p.spec, &d, p.order)?;
            exps.push((d, e));
        }
        SeriesDoc::formal(p.manifold.name(), a.d_max, p.order, &exps)
    } else {
        let ed = EulerData::new(&p.manifold, &p.sample, &p.spec);
        let hg = build_hg_series(&ed, a.d_max, p.order)?;
        SeriesDoc::localized(p.manifold.name(), &hg)
    };
    emit(&a.output, &doc.to_json())
}

fn mirror_data(a: &RunArgs) -> Result<(), Failure> {
    let p = prepare(a)?;
    let ed = EulerData::new(&p.manifold, &p.sample, &p.spec);
    let hg = build_hg_series(&ed, a.d_max, p.order)?;
    let md = extract_mirror_data(&hg)?;
    let (md, _, _) = transform_with_gauge_sign(&hg, &md)?;
    emit(&a.output, &MirrorDataDoc::new(p.manifold.name(), &md, &hg.degrees).to_json())
}

fn invariants(a: &RunArgs) -> Result<(), Failure> {
    let p = prepare(a)?;
    let s = p.spec.s(p.manifold.dim());
    if s < 0 {
        return Err(InvariantsError::NegativeS(s).into());
    }
    let hash = input_hash(&p.manifold, &p.spec, a.d_max, p.sample.lambda(), p.order);
    let cache = a.cache_dir.as_ref().map(Cache::at).unwrap_or_else(Cache::disabled);
    if let Some(doc) = cache.get("invariants", &hash).and_then(|t| ResultDoc::from_json(&t).ok()) {
        return emit(&a.output, &render(&doc, a.format));
    }
    let mut run = compute_invariants(&p.manifold, &p.spec, &p.sample, a.d_max, p.order)?;
    run.table = run.table.clone().with_instanton_numbers()?;
    for d in run.table.k.keys().filter(|d| !d.is_zero()) {
        let rep = t_linear_consistency(&run, d)?;
        if !rep.passed {
            return Err(fail(EXIT_CONSISTENCY, format!("t-linear consistency fails at degree {d}")));
        }
    }
    let doc = ResultDoc::from_table(p.manifold.name(), &run.table, hash.clone());
    for d in &doc.non_integral {
        eprintln!("note: n_{} is not integral", CurveClass(d.clone()));
    }
    if let Err(e) = cache.put("invariants", &hash, &doc.to_json()) {
        eprintln!("note: cache write failed: {e}");
    }
    emit(&a.output, &render(&doc, a.format))
}

fn oracle_doc(name: &str, description: &str, rank: usize, lambda: &[Q], x_power: i64, rows: Vec<ResultRow>) -> ResultDoc {
    ResultDoc {
        metadata: ResultMeta {
            manifold: name.to_string(),
            rank,
            d_max: rows.iter().map(|r| r.degree.iter().sum::<i64>()).max().unwrap_or(0).max(0) as u32,
            lambda0: lambda.iter().map(RationalRepr::from).collect(),
            case: None,
            conventions: SignConventions::oracle(x_power),
            input_hash: text_hash(description),
            oracle: true,
            code_version: CODE_VERSION.to_string(),
        },
        rows,
        non_integral: Vec::new(),
    }
}

fn lines(a: &LinesArgs, concave: bool) -> Result<(), Failure> {
    if a.n < 1 {
        return Err(fail(EXIT_VALIDATION, "n must be at least 1"));
    }
    let lambda = oracle::default_weights(a.n);
    let v = if concave {
        oracle::lines_concave_with(a.n, a.k, &lambda)?
    } else {
        oracle::lines_convex_with(a.n, a.k, &lambda)?
    };
    let rank = if concave { a.k - 1 } else { a.k + 1 };
    let kind = if concave { "lines-concave" } else { "lines-convex" };
    let row = ResultRow { degree: vec![1], k: RationalRepr::from(&v), n: Some(RationalRepr::from(&v)) };
    let doc = oracle_doc(
        &format!("G(2,{})", a.n + 1),
        &format!("{kind} n={} k={}", a.n, a.k),
        1,
        &lambda,
        rank - 2 * (a.n as i64 - 1),
        vec![row],
    );
    emit(&a.output, &render(&doc, a.format))
}

fn oracle_cmd(which: OracleCommand) -> Result<(), Failure> {
    match which {
        OracleCommand::LinesConvex(a) => lines(&a, false),
        OracleCommand::LinesConcave(a) => lines(&a, true),
        OracleCommand::GraphSum { manifold, bundle, d_max, format, output } => {
            let m = load_manifold(&manifold)?;
            let spec = load_bundle(&bundle)?;
            spec.validate(&m)?;
            let n = match oracle::product_dimensions(&m).as_deref() {
                Some([n]) => *n,
                _ => return Err(fail(EXIT_VALIDATION, "graph sums need a projective space")),
            };
            let lambda = oracle::default_weights(n);
            let mut k = BTreeMap::new();
            for d in 1..=d_max {
                k.insert(CurveClass(vec![d as i64]), oracle::graph_sum_kd_with(n, &spec, d, &lambda)?);
            }
            let inst = mirror_core::invariants::instanton_numbers(&k)?;
            let rows = k
                .iter()
                .map(|(d, v)| ResultRow { degree: d.0.clone(), k: v.into(), n: inst.get(d).map(RationalRepr::from) })
                .collect();
            let description = format!(
                "graph-sum {} {} d_max={d_max}",
                io::ManifoldFile::from_manifold(&m).to_canonical_string().trim_end(),
                serde_json_string(&spec)
            );
            let doc = oracle_doc(m.name(), &description, 1, &lambda, spec.s(m.dim()), rows);
            emit(&output, &render(&doc, format))
        }
        OracleCommand::Intersection { manifold, exponents, format, output } => {
            let m = load_manifold(&manifold)?;
            if exponents.len() != m.picard_rank() {
                return Err(fail(EXIT_VALIDATION, format!("expected {} exponents", m.picard_rank())));
            }
            if exponents.iter().sum::<u32>() as usize != m.dim() {
                return Err(fail(EXIT_VALIDATION, format!("monomial degree must be {}", m.dim())));
            }
            let sample = WeightSample::default_for(&m).map_err(|e| fail(EXIT_VALIDATION, e))?;
            let v = oracle::intersection_oracle(&m, &sample, &exponents)?;
            if let Some(dims) = oracle::product_dimensions(&m) {
                let c = oracle::combinatorial_intersection(&dims, &exponents);
                if c != v {
                    return Err(fail(
                        EXIT_CONSISTENCY,
                        format!("localization gives {} but the product ring gives {}", fmt_q(&v), fmt_q(&c)),
                    ));
                }
            }
            let row = ResultRow { degree: exponents.iter().map(|&e| e as i64).collect(), k: (&v).into(), n: None };
            let description = format!(
                "intersection {} {:?}",
                io::ManifoldFile::from_manifold(&m).to_canonical_string().trim_end(),
                exponents
            );
            let doc = oracle_doc(m.name(), &description, m.picard_rank(), sample.lambda(), 0, vec![row]);
            emit(&output, &render(&doc, format))
        }
    }
}

fn serde_json_string(spec: &BundleSpec) -> String {
    serde_json::to_string(spec).expect("bundle serializes")
}

fn selfcheck(fast: bool, corrupt_linking: bool) -> Result<(), Failure> {
    let report = run_selfcheck(&SelfcheckOptions { fast, corrupt_linking });
    for p in &report.properties {
        eprintln!(
            "{} ({}) {}: {} checks, {} ms",
            if p.passed { "PASS" } else { "FAIL" },
            p.id,
            p.name,
            p.checked,
            p.millis
        );
        for f in &p.failures {
            eprintln!("    {f}");
        }
    }
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    if report.passed {
        Ok(())
    } else {
        Err(fail(EXIT_CONSISTENCY, "selfcheck failed"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mirror_core::mirror::GaugeViolation;

    #[test]
    fn exit_code_contract() {
        let v = GaugeViolation { degree: CurveClass(vec![1]), point: 0, alpha_order: 0 };
        assert_eq!(Failure::from(InvariantsError::GaugeCheckFailed(v)).code, EXIT_GAUGE);
        assert_eq!(Failure::from(InvariantsError::NegativeS(-1)).code, EXIT_VALIDATION);
        assert_eq!(Failure::from(MirrorError::NoGaugeSign).code, EXIT_GAUGE);
        assert_eq!(
            Failure::from(InvariantsError::MissingDivisorDegree(CurveClass(vec![1]))).code,
            EXIT_CONSISTENCY
        );
        let io = SpecError::Io { path: "x".into(), source: std::io::Error::other("gone") };
        assert_eq!(Failure::from(io).code, EXIT_IO);
    }
}
