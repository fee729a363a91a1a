//! Slope fibers of `A x A`, clusters of consecutive slopes, and the
//! vector-sum point sets whose overlaps are controlled by the ternary
//! linear equation.
//!
//! For each slope `λ` in `A:A` the fiber `A_λ = {x in A : λx in A}` has a
//! fixed representative `a_λ = min A_λ`, giving the vector
//! `v_λ = a_λ (1, λ)`. Two slopes `λ1 < λ2` produce the `|A|^2` points
//! `a v_λ1 + b v_λ2`, all strictly inside the wedge between the two lines.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::par::{map_ranges, Ctx};
use crate::scalar::Scalar;
use crate::setops::{combine, SetOp};
use crate::sets::{FxMap, FxSet, PointSet, ScalarSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlopeFiber {
    pub slope: Scalar,
    pub members: ScalarSet,
    pub representative: Scalar,
}

impl SlopeFiber {
    fn vector(&self) -> Point {
        Point { x: self.representative.clone(), y: &self.slope * &self.representative }
    }
}

fn check_positive(a: &ScalarSet) -> Result<()> {
    if a.is_empty() {
        return Err(Error::precondition("slope fibers need a nonempty set"));
    }
    if !a.min().expect("nonempty").is_positive() {
        return Err(Error::precondition("slope fibers need a strictly positive set"));
    }
    Ok(())
}

/// One fiber per element of `A:A`, in increasing slope order.
pub fn slope_fibers(a: &ScalarSet) -> Result<Vec<SlopeFiber>> {
    check_positive(a)?;
    let mut by_slope: FxMap<Scalar, Vec<Scalar>> = FxMap::default();
    for x in a {
        for y in a {
            by_slope.entry(y / x).or_default().push(x.clone());
        }
    }
    let mut out: Vec<SlopeFiber> = by_slope
        .into_iter()
        .map(|(slope, xs)| {
            let members = ScalarSet::from_vec(xs);
            let representative = members.min().expect("nonempty fiber").clone();
            SlopeFiber { slope, members, representative }
        })
        .collect();
    out.sort_by(|f, g| f.slope.cmp(&g.slope));
    Ok(out)
}

/// Upper bound `|A:A|^2 / |A|^2` standing in for the multiplicative
/// doubling statistic `d(A)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoublingStat {
    pub dhat: Scalar,
}

impl DoublingStat {
    pub fn from_sizes(ratio_set: usize, size: usize) -> Self {
        let q = Scalar::from(ratio_set as i64) / Scalar::from(size as i64);
        DoublingStat { dhat: &q * &q }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MChoice {
    pub m: usize,
    /// `floor(|A|^{1/6} / (sqrt(8 C) dhat^{1/6}))`, capped at `|A:A| + 1`.
    pub raw: u64,
    pub clamped: bool,
    pub dhat: Scalar,
    pub c_param: Scalar,
}

/// Cluster size from the doubling bound: the largest integer `m` with
/// `512 C^3 dhat m^6 <= |A|`, evaluated exactly, then clamped into
/// `[2, |A:A|]`.
pub fn choose_m(a: &ScalarSet, fibers: &[SlopeFiber], c_param: &Scalar) -> Result<MChoice> {
    if !c_param.is_positive() {
        return Err(Error::precondition("cluster constant must be positive"));
    }
    let slopes = fibers.len();
    if slopes < 2 {
        return Err(Error::precondition("clusters need at least two slopes"));
    }
    let dhat = DoublingStat::from_sizes(slopes, a.len()).dhat;
    let scale = Scalar::from(512) * c_param.pow(3) * &dhat;
    let size = Scalar::from(a.len() as i64);
    let fits = |m: u64| &scale * &Scalar::from(m as i64).pow(6) <= size;
    let (mut lo, mut hi) = (0u64, slopes as u64 + 1);
    if fits(hi) {
        lo = hi;
    } else {
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if fits(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let m = (lo as usize).clamp(2, slopes);
    Ok(MChoice { m, raw: lo, clamped: m as u64 != lo, dhat, c_param: c_param.clone() })
}

#[derive(Clone, Debug, Serialize)]
pub struct Cluster {
    pub fibers: Vec<SlopeFiber>,
    pub full: bool,
}

impl Cluster {
    pub fn min_slope(&self) -> &Scalar {
        &self.fibers.first().expect("nonempty cluster").slope
    }

    pub fn max_slope(&self) -> &Scalar {
        &self.fibers.last().expect("nonempty cluster").slope
    }
}

/// Consecutive blocks of `m` slopes; a shorter trailing block is not full.
pub fn build_clusters(fibers: &[SlopeFiber], m: usize) -> Result<Vec<Cluster>> {
    if m < 2 {
        return Err(Error::precondition("cluster size must be at least 2"));
    }
    Ok(fibers
        .chunks(m)
        .map(|c| Cluster { fibers: c.to_vec(), full: c.len() == m })
        .collect())
}

fn sum_points_indexed(f1: &SlopeFiber, f2: &SlopeFiber, a: &ScalarSet) -> FxMap<Point, (Scalar, Scalar)> {
    let (v1, v2) = (f1.vector(), f2.vector());
    let mut out = FxMap::default();
    for x in a {
        let p1 = v1.scale(x);
        for y in a {
            let p = Point { x: &p1.x + &(&v2.x * y), y: &p1.y + &(&v2.y * y) };
            out.insert(p, (x.clone(), y.clone()));
        }
    }
    out
}

/// `A v_λ1 + A v_λ2` for `λ1 < λ2`.
pub fn cluster_sum_points(f1: &SlopeFiber, f2: &SlopeFiber, a: &ScalarSet) -> Result<PointSet> {
    check_positive(a)?;
    if f1.slope >= f2.slope {
        return Err(Error::precondition("cluster_sum_points needs strictly increasing slopes"));
    }
    Ok(PointSet::from_vec(sum_points_indexed(f1, f2, a).into_keys().collect()))
}

#[derive(Clone, Debug, Serialize)]
pub struct PairIntersection {
    pub count: u64,
    /// Positions of the input fibers after relabeling, so that the last
    /// slope differs from the other three.
    pub labeling: [usize; 4],
    /// `a_λ1 (λ1 - λ4)`, `a_λ2 (λ2 - λ4)`, `a_λ3 (λ4 - λ3)`.
    pub coefficients: [Scalar; 3],
    /// `(a, b, c)` with `k1 a + k2 b + k3 c = 0`, one per common point.
    pub solutions: Vec<[Scalar; 3]>,
    pub injective: bool,
}

const RELABELINGS: [[usize; 4]; 4] = [[0, 1, 2, 3], [0, 1, 3, 2], [2, 3, 0, 1], [2, 3, 1, 0]];

/// Common points of `A v_λ1 + A v_λ2` and `A v_λ3 + A v_λ4`, each mapped
/// to a solution of the ternary linear equation.
pub fn pair_intersection_energy(fibers: [&SlopeFiber; 4], a: &ScalarSet) -> Result<PairIntersection> {
    check_positive(a)?;
    let s: Vec<&Scalar> = fibers.iter().map(|f| &f.slope).collect();
    if s[0] == s[1] || s[2] == s[3] {
        return Err(Error::precondition("each pair needs two distinct slopes"));
    }
    if (s[0] == s[2] && s[1] == s[3]) || (s[0] == s[3] && s[1] == s[2]) {
        return Err(Error::precondition("the two slope pairs must differ"));
    }
    let labeling = *RELABELINGS
        .iter()
        .find(|l| {
            let last = s[l[3]];
            last != s[l[0]] && last != s[l[1]] && last != s[l[2]]
        })
        .expect("distinct pairs always leave one slope outside the others");
    let f = labeling.map(|i| fibers[i]);
    let (l1, l2, l3, l4) = (&f[0].slope, &f[1].slope, &f[2].slope, &f[3].slope);
    let coefficients = [
        &f[0].representative * &(l1 - l4),
        &f[1].representative * &(l2 - l4),
        &f[2].representative * &(l4 - l3),
    ];
    if coefficients.iter().any(Scalar::is_zero) {
        return Err(Error::precondition("ternary coefficients vanished"));
    }
    let first = sum_points_indexed(f[0], f[1], a);
    let second = sum_points_indexed(f[2], f[3], a);
    let mut solutions = Vec::new();
    for (p, (x, y)) in &first {
        if let Some((z, _)) = second.get(p) {
            let sol = [x.clone(), y.clone(), z.clone()];
            let residual = &coefficients[0] * &sol[0] + &coefficients[1] * &sol[1] + &coefficients[2] * &sol[2];
            if !residual.is_zero() {
                return Err(Error::precondition(format!("collision at {p:?} does not solve the ternary equation")));
            }
            solutions.push(sol);
        }
    }
    solutions.sort();
    let injective = solutions.windows(2).all(|w| w[0] != w[1]);
    Ok(PairIntersection { count: solutions.len() as u64, labeling, coefficients, solutions, injective })
}

#[derive(Clone, Debug, Serialize)]
pub struct MuReport {
    pub min_slope: Scalar,
    pub max_slope: Scalar,
    pub m: usize,
    /// Distinct sum points over all slope pairs of the cluster.
    pub mu: u64,
    /// `|A|^2 C(M, 2)`.
    pub union_bound: u64,
    /// `sum` of `|S_p ∩ S_p'|` over unordered pairs of distinct slope pairs.
    pub pairwise_overlap: u64,
    /// `|A|^2 C(M, 2)` minus the overlap summed over ordered slope
    /// quadruples with `λ1 != λ2`, `λ3 != λ4`, `{λ1, λ2} != {λ3, λ4}`
    /// (eight times `pairwise_overlap`).
    pub ie_lower_bound: i128,
    /// `mu / (M^2 |A|^2 / 8)`.
    pub ratio: f64,
    /// Number of slope-pair pairs with a nonempty overlap.
    pub collisions: u64,
    /// Every collision mapped injectively to ternary solutions.
    pub injective: bool,
    /// Every sum point lies strictly between its two generating slopes.
    pub between_slopes: bool,
}

pub fn cluster_mu(u: &Cluster, a: &ScalarSet) -> Result<MuReport> {
    check_positive(a)?;
    if !u.full {
        return Err(Error::precondition("mu is defined for full clusters only"));
    }
    let m = u.fibers.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let sets: Vec<FxSet<Point>> = pairs
        .iter()
        .map(|&(i, j)| sum_points_indexed(&u.fibers[i], &u.fibers[j], a).into_keys().collect())
        .collect();
    let mut between = true;
    for (&(i, j), set) in pairs.iter().zip(&sets) {
        let (lo, hi) = (&u.fibers[i].slope, &u.fibers[j].slope);
        between &= set.iter().all(|p| {
            let s = &p.y / &p.x;
            p.x.is_positive() && lo < &s && &s < hi
        });
    }
    let mut union: FxSet<&Point> = FxSet::default();
    for s in &sets {
        union.extend(s.iter());
    }
    let (mut overlap, mut collisions, mut injective) = (0u64, 0u64, true);
    for x in 0..pairs.len() {
        for y in x + 1..pairs.len() {
            let common = sets[x].iter().filter(|p| sets[y].contains(*p)).count() as u64;
            if common > 0 {
                collisions += 1;
                let (i, j) = pairs[x];
                let (k, l) = pairs[y];
                let f = &u.fibers;
                let pi = pair_intersection_energy([&f[i], &f[j], &f[k], &f[l]], a)?;
                injective &= pi.injective && pi.count == common;
            }
            overlap += common;
        }
    }
    let n2 = (a.len() * a.len()) as u64;
    let union_bound = n2 * pairs.len() as u64;
    let mu = union.len() as u64;
    Ok(MuReport {
        min_slope: u.min_slope().clone(),
        max_slope: u.max_slope().clone(),
        m,
        mu,
        union_bound,
        pairwise_overlap: overlap,
        ie_lower_bound: union_bound as i128 - 8 * overlap as i128,
        ratio: mu as f64 / ((m * m) as f64 * n2 as f64 / 8.0),
        collisions,
        injective,
        between_slopes: between,
    })
}

/// How the cluster size is picked.
#[derive(Clone, Debug)]
pub enum ClusterSize {
    Fixed(usize),
    FromConstant(Scalar),
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterReport {
    pub size: usize,
    pub ratio_set: usize,
    pub dhat: Scalar,
    pub m: usize,
    pub m_choice: Option<MChoice>,
    pub clusters: usize,
    pub full_clusters: usize,
    /// `#full >= |A:A| / (2M)`.
    pub full_cluster_bound_holds: bool,
    /// `sum |A_λ| = |A|^2`.
    pub mass_identity: bool,
    pub between_slopes: bool,
    pub collisions: u64,
    pub injective: bool,
    pub mu_total: u64,
    /// `|AA + AA|`.
    pub sum_product: usize,
    /// `sum_U mu(U) <= |AA + AA|^2`.
    pub mu_within_square: bool,
    pub min_ratio: Option<f64>,
    pub mu: Vec<MuReport>,
}

/// Full pipeline: fibers, cluster size, clusters, `mu` per full cluster,
/// and the structural checks.
pub fn cluster_pipeline(a: &ScalarSet, size: &ClusterSize, ctx: &Ctx) -> Result<ClusterReport> {
    let fibers = slope_fibers(a)?;
    let (m, m_choice) = match size {
        ClusterSize::Fixed(m) => (*m, None),
        ClusterSize::FromConstant(c) => {
            let ch = choose_m(a, &fibers, c)?;
            (ch.m, Some(ch))
        }
    };
    let n2 = (a.len() * a.len()) as u128;
    let pairs = (m * m.saturating_sub(1) / 2) as u128;
    ctx.guard("cluster_pipeline", fibers.len() as u128 * pairs * pairs.max(1) * n2 / m.max(1) as u128)?;
    let clusters = build_clusters(&fibers, m)?;
    let full: Vec<&Cluster> = clusters.iter().filter(|c| c.full).collect();
    let mu: Vec<MuReport> = map_ranges(ctx.exec, full.len(), |r| {
        full[r].iter().map(|c| cluster_mu(c, a)).collect::<Result<Vec<_>>>()
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?
    .into_iter()
    .flatten()
    .collect();
    let aa = combine(a, a, SetOp::Product, ctx)?;
    let sum_product = combine(&aa, &aa, SetOp::Sum, ctx)?.len();
    let mass: u128 = fibers.iter().map(|f| f.members.len() as u128).sum();
    let mu_total: u64 = mu.iter().map(|r| r.mu).sum();
    Ok(ClusterReport {
        size: a.len(),
        ratio_set: fibers.len(),
        dhat: DoublingStat::from_sizes(fibers.len(), a.len()).dhat,
        m,
        m_choice,
        clusters: clusters.len(),
        full_clusters: full.len(),
        full_cluster_bound_holds: 2 * m * full.len() >= fibers.len(),
        mass_identity: mass == n2,
        between_slopes: mu.iter().all(|r| r.between_slopes),
        collisions: mu.iter().map(|r| r.collisions).sum(),
        injective: mu.iter().all(|r| r.injective),
        mu_total,
        sum_product,
        mu_within_square: (mu_total as u128) <= (sum_product as u128).pow(2),
        min_ratio: mu.iter().map(|r| r.ratio).reduce(f64::min),
        mu,
    })
}
