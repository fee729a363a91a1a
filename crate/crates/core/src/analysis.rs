//! Measurement harness: log-log exponent fits, bound-ratio rows and the
//! named suites that compare exact counts with the asymptotic bounds.
//!
//! This is the only module that uses floating point. Counts enter exact and
//! are converted to `f64` only when forming ratios and fits.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cluster::{choose_m, slope_fibers};
use crate::equations::count_teq;
use crate::error::{Error, Result};
use crate::formstats::{fibers, form_energy, split_by_line_richness, value_set};
use crate::generators::erdos_construction;
use crate::geom::{BilinearForm, FormKind};
use crate::io::{format_points, format_scalars};
use crate::par::Ctx;
use crate::scalar::Scalar;
use crate::setops::{combine, weak_es_report, SetOp};
use crate::sets::{PointSet, ScalarSet};
use crate::Count;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    #[serde(rename = "rms")]
    pub rms_residual: f64,
    pub points: Vec<(u64, Count)>,
}

/// Least-squares line through `(ln size, ln value)`.
pub fn fit_exponent(records: &[(u64, Count)]) -> Result<FitResult> {
    if records.len() < 2 {
        return Err(Error::precondition("a fit needs at least two records"));
    }
    if records.iter().any(|&(s, v)| s == 0 || v == 0) {
        return Err(Error::precondition("fit records need positive sizes and values"));
    }
    let xs: Vec<f64> = records.iter().map(|r| (r.0 as f64).ln()).collect();
    let ys: Vec<f64> = records.iter().map(|r| (r.1 as f64).ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::precondition("fit records need at least two distinct sizes"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(FitResult { slope, intercept, rms_residual: (sse / n).sqrt(), points: records.to_vec() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Measured {
    Count(Count),
    Real(f64),
}

impl Measured {
    pub fn as_f64(self) -> f64 {
        match self {
            Measured::Count(c) => c as f64,
            Measured::Real(x) => x,
        }
    }
}

impl From<Count> for Measured {
    fn from(c: Count) -> Self {
        Measured::Count(c)
    }
}

impl From<usize> for Measured {
    fn from(c: usize) -> Self {
        Measured::Count(c as Count)
    }
}

impl From<u64> for Measured {
    fn from(c: u64) -> Self {
        Measured::Count(c as Count)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
    /// Reported for reference only; never flagged.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub name: String,
    pub measured: Measured,
    pub bound: f64,
    pub ratio: f64,
    pub kind: BoundKind,
    pub flagged: bool,
}

/// Compares `measured` with `sum coefficient * value` over `terms`.
pub fn bound_ratio_report(
    name: &str,
    measured: impl Into<Measured>,
    terms: &[(f64, f64)],
    kind: BoundKind,
) -> Result<Row> {
    let measured = measured.into();
    let bound: f64 = terms.iter().map(|(c, v)| c * v).sum();
    if !(bound > 0.0 && bound.is_finite()) {
        return Err(Error::precondition(format!("bound for {name} must be positive and finite, got {bound}")));
    }
    let ratio = measured.as_f64() / bound;
    let flagged = match kind {
        BoundKind::Lower => ratio < 1.0,
        BoundKind::Upper => ratio > 1.0,
        BoundKind::Info => false,
    };
    Ok(Row { name: name.to_string(), measured, bound, ratio, kind, flagged })
}

fn row(name: &str, measured: impl Into<Measured>, bound: f64, kind: BoundKind) -> Result<Row> {
    bound_ratio_report(name, measured, &[(1.0, bound)], kind)
}

/// Hex SHA-256 of a canonical input rendering.
pub fn content_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn hash_scalars(a: &ScalarSet) -> String {
    content_hash(&format_scalars(a))
}

pub fn hash_points(p: &PointSet) -> String {
    content_hash(&format_points(p))
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub inputs: BTreeMap<String, Value>,
    pub rows: Vec<Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitResult>,
    pub notes: Vec<String>,
    pub version: String,
    pub seed: u64,
}

impl Report {
    fn new(suite: Suite, seed: u64) -> Self {
        Report {
            suite: suite.to_string(),
            inputs: BTreeMap::new(),
            rows: Vec::new(),
            fit: None,
            notes: Vec::new(),
            version: crate::VERSION.to_string(),
            seed,
        }
    }

    pub fn row(&self, name: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn flagged(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.flagged)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Thm34,
    Eps1,
    Eps2,
    Construction,
    WeakEs,
    EUpper,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Thm34, Suite::Eps1, Suite::Eps2, Suite::Construction, Suite::WeakEs, Suite::EUpper];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm34 => "thm34",
            Suite::Eps1 => "eps1",
            Suite::Eps2 => "eps2",
            Suite::Construction => "construction",
            Suite::WeakEs => "weak-es",
            Suite::EUpper => "e-upper",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum SuiteInput {
    Points { points: PointSet, form: BilinearForm },
    Scalars(ScalarSet),
    Sizes(Vec<u64>),
}

#[derive(Clone, Debug)]
pub struct SuiteParams {
    pub seed: u64,
    pub c_param: Scalar,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams { seed: 0, c_param: Scalar::one() }
    }
}

pub fn run_suite(suite: Suite, input: &SuiteInput, params: &SuiteParams, ctx: &Ctx) -> Result<Report> {
    match (suite, input) {
        (Suite::Thm34, SuiteInput::Points { points, form }) => thm34_suite(points, form, params, ctx),
        (Suite::EUpper, SuiteInput::Points { points, form }) => e_upper_suite(points, form, params, ctx),
        (Suite::Eps1, SuiteInput::Scalars(a)) => eps1_suite(a, params, ctx),
        (Suite::Eps2, SuiteInput::Scalars(a)) => eps2_suite(a, params, ctx),
        (Suite::WeakEs, SuiteInput::Scalars(a)) => weak_es_suite(a, params, ctx),
        (Suite::Construction, SuiteInput::Sizes(ns)) => construction_suite(ns, params),
        (s, _) => Err(Error::precondition(format!("suite {s} does not accept this kind of input"))),
    }
}

/// `ceil(n^{8/13})`, the smallest `w` with `w^13 >= n^8`.
pub fn richness_threshold(n: u64) -> u64 {
    let target = BigUint::from(n).pow(8);
    let (mut lo, mut hi) = (0u64, n.max(1));
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if BigUint::from(mid).pow(13) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if n == 0 {
        0
    } else {
        hi
    }
}

fn form_name(form: &BilinearForm) -> &'static str {
    match form.kind() {
        FormKind::Symmetric => "symmetric",
        FormKind::SkewSymmetric => "skew-symmetric",
    }
}

fn point_inputs(r: &mut Report, p: &PointSet, form: &BilinearForm) {
    r.inputs.insert("hash".into(), json!(hash_points(p)));
    r.inputs.insert("points".into(), json!(p.len()));
    r.inputs.insert("form".into(), json!(form_name(form)));
    let m: Vec<String> = form.matrix().iter().map(|x| x.to_string()).collect();
    r.inputs.insert("matrix".into(), json!(m));
}

fn scalar_inputs(r: &mut Report, a: &ScalarSet) {
    r.inputs.insert("hash".into(), json!(hash_scalars(a)));
    r.inputs.insert("size".into(), json!(a.len()));
}

fn origin_lines(p: &PointSet) -> Result<usize> {
    Ok(fibers(p)?.len())
}

/// Value-set growth, energy and pinned counts, with the rich/poor split
/// at `w0 = ceil(N^{8/13})`.
pub fn thm34_suite(p: &PointSet, form: &BilinearForm, params: &SuiteParams, ctx: &Ctx) -> Result<Report> {
    let mut r = Report::new(Suite::Thm34, params.seed);
    point_inputs(&mut r, p, form);
    let n = p.len();
    if n < 2 {
        return Err(Error::precondition("thm34 needs at least two points"));
    }
    let nf = n as f64;
    let t = value_set(p, form, ctx)?;
    let lines = origin_lines(p)?;
    if lines <= 1 && form.kind() == FormKind::SkewSymmetric {
        r.notes.push("excluded case: P is supported on a single line through the origin, T is empty".into());
        r.rows.push(row("T", t.len(), nf.powf(9.0 / 13.0), BoundKind::Info)?);
        return Ok(r);
    }
    r.rows.push(row("T", t.len(), nf.powf(9.0 / 13.0), BoundKind::Lower)?);
    r.rows.push(row("T/N", t.len(), nf, BoundKind::Info)?);
    r.rows.push(row("T*logN/N", t.len(), nf / nf.ln(), BoundKind::Info)?);

    let w0 = richness_threshold(n as u64);
    r.inputs.insert("w0".into(), json!(w0));
    let split = split_by_line_richness(p, w0)?;
    let (n1, n2) = (split.poor.len(), split.rich.len());
    r.inputs.insert("N1".into(), json!(n1));
    r.inputs.insert("N2".into(), json!(n2));
    let (n1f, n2f, wf) = (n1 as f64, n2 as f64, w0 as f64);

    let poor_lines = split.poor_directions();
    if n1 > 0 && poor_lines > 1 {
        let t1 = value_set(&split.poor, form, ctx)?;
        r.rows.push(row("T1", t1.len(), n1f / wf.sqrt(), BoundKind::Lower)?);
    } else {
        r.notes.push(format!("T1 row skipped: P1 lies on {poor_lines} line(s) through the origin"));
    }

    let rich_lines = split.rich_directions();
    if rich_lines >= 4 {
        let t2 = value_set(&split.rich, form, ctx)?;
        let k = t2.len() as f64;
        r.rows.push(row("T2", t2.len(), (n2f * wf).powf(3.0 / 7.0), BoundKind::Lower)?);
        let teq = count_teq(&t2, ctx)?;
        r.rows.push(row("teq", teq, n2f * n2f * wf * wf, BoundKind::Lower)?);
        r.rows.push(row("teq-upper", teq, k.powf(14.0 / 3.0), BoundKind::Upper)?);
    } else {
        r.notes.push(format!("T2 and teq rows skipped: P2 lies on {rich_lines} line(s) through the origin, fewer than four"));
    }
    Ok(r)
}

fn nonzero(a: &ScalarSet) -> Result<()> {
    if a.len() < 2 {
        return Err(Error::precondition("sum-product suites need |A| >= 2"));
    }
    if a.contains(&Scalar::zero()) {
        return Err(Error::precondition("sum-product suites assume 0 is not in A"));
    }
    Ok(())
}

pub fn eps1_suite(a: &ScalarSet, params: &SuiteParams, ctx: &Ctx) -> Result<Report> {
    nonzero(a)?;
    let mut r = Report::new(Suite::Eps1, params.seed);
    scalar_inputs(&mut r, a);
    let n = a.len() as f64;
    let aa = combine(a, a, SetOp::Product, ctx)?;
    let ratio = combine(a, a, SetOp::Ratio, ctx)?;
    let sp = combine(&aa, &aa, SetOp::Sum, ctx)?;
    let q = ratio.len() as f64;
    r.rows.push(row("AA+AA vs |A|^(19/12)", sp.len(), n.powf(19.0 / 12.0), BoundKind::Lower)?);
    r.rows.push(row("AA+AA vs |A|^(5/4)|A:A|^(1/3)", sp.len(), n.powf(1.25) * q.cbrt(), BoundKind::Lower)?);
    r.rows.push(row("AA+AA vs |A||A:A|^(1/2)", sp.len(), n * q.sqrt(), BoundKind::Lower)?);
    r.rows.push(row("A:A vs |A|", ratio.len(), n, BoundKind::Lower)?);
    r.rows.push(row("AA", aa.len(), n, BoundKind::Info)?);
    if a.min().expect("nonempty").is_positive() {
        let f = slope_fibers(a)?;
        let m = choose_m(a, &f, &params.c_param)?;
        r.inputs.insert("c_param".into(), json!(params.c_param.to_string()));
        r.notes.push(format!(
            "dhat = {}, cluster size M = {} (raw {}{})",
            m.dhat,
            m.m,
            m.raw,
            if m.clamped { ", clamped" } else { "" }
        ));
    }
    Ok(r)
}

pub fn eps2_suite(a: &ScalarSet, params: &SuiteParams, ctx: &Ctx) -> Result<Report> {
    nonzero(a)?;
    let mut r = Report::new(Suite::Eps2, params.seed);
    scalar_inputs(&mut r, a);
    let n = a.len() as f64;
    let aa = combine(a, a, SetOp::Product, ctx)?;
    let ratio = combine(a, a, SetOp::Ratio, ctx)?;
    let diff = combine(a, a, SetOp::Difference, ctx)?;
    let dp = combine(&aa, &aa, SetOp::Difference, ctx)?;
    let (q, d, log) = (ratio.len() as f64, diff.len() as f64, n.ln());
    r.rows.push(row(
        "AA-AA vs |A|^(26/17)/log^(2/17)|A|",
        dp.len(),
        n.powf(26.0 / 17.0) / log.powf(2.0 / 17.0),
        BoundKind::Lower,
    )?);
    r.rows.push(row("AA-AA vs |A||A:A|^(1/2)", dp.len(), n * q.sqrt(), BoundKind::Lower)?);
    let lhs = 6.0 * q.ln() + 5.0 * d.ln();
    let rhs = 14.0 * n.ln() - 2.0 * log.ln();
    r.rows.push(row("|A:A|^6|A-A|^5 vs |A|^14/log^2|A| (log scale)", Measured::Real(lhs), rhs, BoundKind::Lower)?);
    r.rows.push(row("A-A vs |AA-AA|", diff.len(), dp.len() as f64, BoundKind::Upper)?);
    Ok(r)
}

pub fn weak_es_suite(a: &ScalarSet, params: &SuiteParams, ctx: &Ctx) -> Result<Report> {
    let w = weak_es_report(a, ctx)?;
    let mut r = Report::new(Suite::WeakEs, params.seed);
    scalar_inputs(&mut r, a);
    let n = a.len() as f64;
    let cs = n.powi(4) / w.energy as f64;
    let mut plus = row("A+A vs |A|^4/E(A)", w.sum_set, cs, BoundKind::Lower)?;
    plus.flagged = !w.cauchy_schwarz_sum;
    let mut minus = row("A-A vs |A|^4/E(A)", w.difference_set, cs, BoundKind::Lower)?;
    minus.flagged = !w.cauchy_schwarz_difference;
    r.rows.push(plus);
    r.rows.push(minus);
    r.rows.push(row("E(A) vs |A|^3", w.energy, n.powi(3), BoundKind::Upper)?);
    r.rows.push(row("E(A)|A| vs |AA|^3", Measured::Real(w.energy_ratio), 1.0, BoundKind::Info)?);
    r.rows.push(row("AA", w.product_set, n, BoundKind::Info)?);
    Ok(r)
}

pub fn e_upper_suite(p: &PointSet, form: &BilinearForm, params: &SuiteParams, ctx: &Ctx) -> Result<Report> {
    let mut r = Report::new(Suite::EUpper, params.seed);
    point_inputs(&mut r, p, form);
    let n = p.len() as f64;
    if p.is_empty() {
        return Err(Error::precondition("e-upper needs a nonempty point set"));
    }
    let e = form_energy(p, form, ctx)?;
    let cube = row("E vs N^3", e, n.powi(3), BoundKind::Upper)?;
    if cube.ratio > 2.0 {
        r.notes.push(format!("finding: form energy is {:.3} N^3", cube.ratio));
    }
    r.rows.push(cube);
    r.rows.push(row("E vs N^(10/3)", e, n.powf(10.0 / 3.0), BoundKind::Upper)?);
    Ok(r)
}

/// Grid-and-pencil configurations for each `N`, counted analytically.
pub fn construction_suite(ns: &[u64], params: &SuiteParams) -> Result<Report> {
    if ns.is_empty() {
        return Err(Error::precondition("construction suite needs at least one N"));
    }
    let mut r = Report::new(Suite::Construction, params.seed);
    r.inputs.insert("N".into(), json!(ns));
    let mut records = Vec::new();
    for &n in ns {
        let b = erdos_construction(n)?;
        let nf = n as f64;
        let third = nf.cbrt();
        let support = b.pencil_support().into_iter().min().unwrap_or(0);
        let s = b.dot_one_count();
        r.rows.push(row(&format!("support(N={n})"), support, 2.0 * third, BoundKind::Lower)?);
        r.rows.push(row(&format!("S(N={n})"), s, nf * third, BoundKind::Lower)?);
        r.rows.push(row(&format!("pinned(N={n})"), b.pinned_count(), nf * nf * third, BoundKind::Lower)?);
        r.inputs.insert(format!("sizes(N={n})"), json!({"p1": b.p1.len(), "p2": b.p2.len(), "lines": b.lines.len()}));
        records.push((n, s));
    }
    if records.len() >= 2 {
        r.fit = Some(fit_exponent(&records)?);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::make_progression;
    use crate::generators::ProgressionKind;

    #[test]
    fn fit_examples() {
        let f = fit_exponent(&[(10, 100), (100, 10_000)]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        let f = fit_exponent(&[(10, 100), (100, 10_000), (1000, 1_000_000)]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && f.rms_residual < 1e-12);
        let f = fit_exponent(&[(3, 21), (9, 63), (27, 189)]).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12);
        assert!((f.intercept - 7f64.ln()).abs() < 1e-12);
        assert!(fit_exponent(&[(10, 100)]).is_err());
        assert!(fit_exponent(&[(10, 100), (20, 0)]).is_err());
        assert!(fit_exponent(&[(10, 100), (10, 200)]).is_err());
    }

    #[test]
    fn ratio_examples() {
        let p = 9f64;
        let terms = [(4.0, p.powf(2.0 / 3.0) * p.powf(2.0 / 3.0)), (4.0, p), (4.0, p)];
        let r = bound_ratio_report("st", 8u64, &terms, BoundKind::Upper).unwrap();
        assert!((r.ratio - 0.0545).abs() < 5e-4, "{}", r.ratio);
        assert!(!r.flagged);
        let r = bound_ratio_report("eq", 5u64, &[(1.0, 5.0)], BoundKind::Lower).unwrap();
        assert_eq!((r.ratio, r.flagged), (1.0, false));
        assert!(bound_ratio_report("zero", 0u64, &[(1.0, 5.0)], BoundKind::Lower).unwrap().flagged);
        assert!(bound_ratio_report("bad", 1u64, &[(1.0, 0.0)], BoundKind::Lower).is_err());
    }

    #[test]
    fn threshold_is_exact_ceiling() {
        assert_eq!(richness_threshold(1), 1);
        assert_eq!(richness_threshold(500), 46);
        assert_eq!(richness_threshold(8192), 256);
        assert_eq!(richness_threshold(8193), 257);
        for n in [2u64, 10, 100, 1000, 12345] {
            let w = richness_threshold(n);
            let t = BigUint::from(n).pow(8);
            assert!(BigUint::from(w).pow(13) >= t);
            assert!(BigUint::from(w - 1).pow(13) < t);
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("thm35".parse::<Suite>(), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn eps1_geometric_sixteen() {
        let a = make_progression(ProgressionKind::Geometric, &Scalar::one(), &Scalar::from(2), 16).unwrap();
        let r = eps1_suite(&a, &SuiteParams::default(), &Ctx::default()).unwrap();
        let row = r.row("AA+AA vs |A|^(19/12)").unwrap();
        assert_eq!(row.measured, Measured::Count(496));
        assert!((row.bound - 80.6349).abs() < 1e-3);
        assert!(row.ratio > 1.0 && !row.flagged);
    }

    #[test]
    fn thm34_single_line_is_excluded() {
        let p = PointSet::from_int_pairs((1..=10).map(|i| (i, 2 * i)));
        let r = thm34_suite(&p, &BilinearForm::cross(), &SuiteParams::default(), &Ctx::default()).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].measured, Measured::Count(0));
        assert!(r.notes[0].contains("single line"));
    }

    #[test]
    fn hash_is_stable() {
        let a = ScalarSet::from_ints([3, 1, 2]);
        assert_eq!(hash_scalars(&a), content_hash("1\n2\n3\n"));
        assert_eq!(content_hash("").len(), 64);
    }
}
