//! Machine checks of the moment / Perron-value inequalities, the ratio
//! experiments and the log-order scan.
//!
//! Every report is normalised to `lhs ≤ rhs` (or `lhs < rhs`, or an exact
//! identity `lhs = rhs`) with `slack = rhs − lhs`.

use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::corpus::{self, CorpusTree};
use crate::error::{invalid, Error, Result};
use crate::fiedler::bethe_alg_conn_lower;
use crate::fiedler::bethe_rho_upper;
use crate::format::g12;
use crate::rng::SplitMix64;
use crate::spectral::{
    perron_entropy, perron_value, rho_bethe_levels, rho_path_closed, rho_star_closed,
};
use crate::tree::{
    bethe_order, make_bethe, make_path, make_star, moment, moment_bethe_closed,
    moment_power_identity, moment_product_identity, moment_sum_identity, rooted_power_capped,
    rooted_product, rooted_sum, RootedTree, DEFAULT_VERTEX_CAP,
};

/// Relative tolerance for float comparisons, applied as `TOL · max(1, |rhs|)`.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundId {
    /// ρ − f(n) ≤ μ, equality exactly on stars.
    MomentAboveRhoMinusF,
    /// ρ − 2 < μ.
    MomentAboveRhoMinusTwo,
    /// μ ≤ (n − 1)², equality exactly on paths.
    MomentAtMostSquare,
    /// μ < (4/7) n ρ.
    MomentBelowFourSevenths,
    SumLower,
    SumUpper,
    /// Exact moment of a rooted sum.
    SumMoment,
    BetheRhoUpper,
    BetheConnectivityLower,
    ProductLowerOrder,
    ProductLowerEntropy,
    ProductUpper,
    /// Exact moment of a rooted product.
    ProductMoment,
    PowerLower,
    PowerUpper,
    /// Exact moment of a rooted power.
    PowerMoment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Lt,
    Eq,
}

impl BoundId {
    pub const ALL: [BoundId; 16] = [
        BoundId::MomentAboveRhoMinusF,
        BoundId::MomentAboveRhoMinusTwo,
        BoundId::MomentAtMostSquare,
        BoundId::MomentBelowFourSevenths,
        BoundId::SumLower,
        BoundId::SumUpper,
        BoundId::SumMoment,
        BoundId::BetheRhoUpper,
        BoundId::BetheConnectivityLower,
        BoundId::ProductLowerOrder,
        BoundId::ProductLowerEntropy,
        BoundId::ProductUpper,
        BoundId::ProductMoment,
        BoundId::PowerLower,
        BoundId::PowerUpper,
        BoundId::PowerMoment,
    ];

    /// Identifier written to CSV.
    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::MomentAboveRhoMinusF => "THM_5_1",
            BoundId::MomentAboveRhoMinusTwo => "COR_5_1",
            BoundId::MomentAtMostSquare => "PROP_5_3",
            BoundId::MomentBelowFourSevenths => "THM_5_4",
            BoundId::SumLower => "PROP_4_1_LO",
            BoundId::SumUpper => "PROP_4_1_HI",
            BoundId::SumMoment => "PROP_4_2",
            BoundId::BetheRhoUpper => "PROP_4_3",
            BoundId::BetheConnectivityLower => "EQ_14",
            BoundId::ProductLowerOrder => "PROP_4_7_I",
            BoundId::ProductLowerEntropy => "PROP_4_7_II",
            BoundId::ProductUpper => "PROP_4_7_III",
            BoundId::ProductMoment => "PROP_4_8",
            BoundId::PowerLower => "PROP_4_9_LO",
            BoundId::PowerUpper => "PROP_4_9_HI",
            BoundId::PowerMoment => "PROP_4_10",
        }
    }

    pub fn relation(self) -> Relation {
        match self {
            BoundId::MomentAboveRhoMinusTwo
            | BoundId::MomentBelowFourSevenths
            | BoundId::ProductUpper => Relation::Lt,
            BoundId::SumMoment | BoundId::ProductMoment | BoundId::PowerMoment => Relation::Eq,
            _ => Relation::Le,
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown bound id {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Exact(i128),
    Float(f64),
}

impl Value {
    pub fn as_f64(self) -> f64 {
        match self {
            Value::Exact(v) => v as f64,
            Value::Float(v) => v,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(v) => write!(f, "{v}"),
            Value::Float(v) => f.write_str(&g12(*v)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub tree_id: String,
    pub n: usize,
    pub bound: BoundId,
    pub lhs: Value,
    pub rhs: Value,
    pub slack: Value,
    pub pass: bool,
    pub equality: bool,
}

impl BoundReport {
    fn exact(bound: BoundId, n: usize, lhs: i128, rhs: i128) -> Self {
        let slack = rhs - lhs;
        let pass = match bound.relation() {
            Relation::Le => slack >= 0,
            Relation::Lt => slack > 0,
            Relation::Eq => slack == 0,
        };
        BoundReport {
            tree_id: String::new(),
            n,
            bound,
            lhs: Value::Exact(lhs),
            rhs: Value::Exact(rhs),
            slack: Value::Exact(slack),
            pass,
            equality: slack == 0,
        }
    }

    fn float(bound: BoundId, n: usize, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        let tol = TOL * rhs.abs().max(1.0);
        let equality = slack.abs() <= tol;
        let pass = slack.is_finite()
            && match bound.relation() {
                Relation::Le => slack >= -tol,
                Relation::Lt => slack > 0.0,
                Relation::Eq => equality,
            };
        BoundReport {
            tree_id: String::new(),
            n,
            bound,
            lhs: Value::Float(lhs),
            rhs: Value::Float(rhs),
            slack: Value::Float(slack),
            pass,
            equality,
        }
    }

    /// Bounds whose equality case is known exactly: equality must occur on
    /// the extremal trees and nowhere else.
    fn with_equality_case(mut self, extremal: bool) -> Self {
        let strictly_positive = self.slack.as_f64() > 0.0;
        self.pass = if extremal {
            self.equality
        } else {
            strictly_positive && !self.equality
        };
        self
    }
}

/// Sets `tree_id` on every report.
pub fn labelled(mut reports: Vec<BoundReport>, id: &str) -> Vec<BoundReport> {
    for r in &mut reports {
        r.tree_id = id.to_string();
    }
    reports
}

/// f(n) = (√(n² + 2n − 3) − n + 3) / 2, evaluated without cancellation.
pub fn f_of(n: u64) -> Result<f64> {
    if n == 0 {
        return invalid("f(n) needs n >= 1");
    }
    let x = n as f64;
    let root = (x * x + 2.0 * x - 3.0).sqrt();
    Ok(0.5 * ((2.0 * x - 3.0) / (root + x) + 3.0))
}

/// The four universal moment bounds for a single rooted tree.
pub fn check_tree(t: &RootedTree) -> Result<Vec<BoundReport>> {
    let n = t.order();
    let mu = moment(t);
    let rho = perron_value(t)?.rho;
    let muf = mu as f64;
    let square = (n as i128 - 1).pow(2);
    Ok(vec![
        BoundReport::float(BoundId::MomentAboveRhoMinusF, n, rho - f_of(n as u64)?, muf)
            .with_equality_case(t.is_star()),
        BoundReport::float(BoundId::MomentAboveRhoMinusTwo, n, rho - 2.0, muf),
        BoundReport::exact(BoundId::MomentAtMostSquare, n, mu as i128, square)
            .with_equality_case(t.is_path()),
        BoundReport::float(
            BoundId::MomentBelowFourSevenths,
            n,
            muf,
            4.0 / 7.0 * n as f64 * rho,
        ),
    ])
}

/// Perron-value bounds for the rooted sum plus its exact moment identity.
pub fn check_sum(parts: &[RootedTree]) -> Result<Vec<BoundReport>> {
    let sum = rooted_sum(parts)?;
    let n = sum.order();
    let mut max_rho = f64::NEG_INFINITY;
    for p in parts {
        max_rho = max_rho.max(perron_value(p)?.rho);
    }
    let rho = perron_value(&sum)?.rho;
    Ok(vec![
        BoundReport::float(BoundId::SumLower, n, max_rho, rho),
        BoundReport::float(BoundId::SumUpper, n, rho, max_rho + n as f64),
        BoundReport::exact(
            BoundId::SumMoment,
            n,
            moment_sum_identity(parts)?,
            moment(&sum) as i128,
        ),
    ])
}

/// The two lower bounds on ρ(T1 ⊠ T2): `n2 ρ(T1)` and
/// `ρ(T2) + (ρ(T1) − 1) H(T2)`. Neither dominates the other in general.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductLowerBounds {
    pub by_order: f64,
    pub by_entropy: f64,
}

pub fn product_lower_bounds(t1: &RootedTree, t2: &RootedTree) -> Result<ProductLowerBounds> {
    let rho1 = perron_value(t1)?.rho;
    let ent2 = perron_entropy(t2)?;
    Ok(ProductLowerBounds {
        by_order: t2.order() as f64 * rho1,
        by_entropy: ent2.spectral.rho + (rho1 - 1.0) * ent2.h,
    })
}

pub fn check_product(t1: &RootedTree, t2: &RootedTree) -> Result<Vec<BoundReport>> {
    let prod = rooted_product(t1, t2)?;
    let n = prod.order();
    let lower = product_lower_bounds(t1, t2)?;
    let rho1 = perron_value(t1)?.rho;
    let rho2 = perron_value(t2)?.rho;
    let rho = perron_value(&prod)?.rho;
    Ok(vec![
        BoundReport::float(BoundId::ProductLowerOrder, n, lower.by_order, rho),
        BoundReport::float(BoundId::ProductLowerEntropy, n, lower.by_entropy, rho),
        BoundReport::float(
            BoundId::ProductUpper,
            n,
            rho,
            t2.order() as f64 * rho1 + rho2,
        ),
        BoundReport::exact(
            BoundId::ProductMoment,
            n,
            moment_product_identity(t1, t2),
            moment(&prod) as i128,
        ),
    ])
}

/// Bounds on ρ(T^{⊠k}) plus the exact moment of the power.
pub fn check_power(t: &RootedTree, k: u32) -> Result<Vec<BoundReport>> {
    if t.is_trivial() {
        return invalid("power bounds need a nontrivial tree");
    }
    if k == 0 {
        return invalid("power bounds need k >= 1");
    }
    let power = rooted_power_capped(t, k, DEFAULT_VERTEX_CAP)?;
    let n = t.order() as f64;
    let order = power.order();
    let rho_t = perron_value(t)?.rho;
    let rho = perron_value(&power)?.rho;
    let geometric = (order as f64 - 1.0) / (n - 1.0);
    Ok(vec![
        BoundReport::float(
            BoundId::PowerLower,
            order,
            rho_t * n.powi(k as i32 - 1),
            rho,
        ),
        BoundReport::float(BoundId::PowerUpper, order, rho, rho_t * geometric),
        BoundReport::exact(
            BoundId::PowerMoment,
            order,
            moment_power_identity(t, k)?,
            moment(&power) as i128,
        ),
    ])
}

/// Closed-form Bethe bounds on ρ(B_{p,k}) and, for p ≥ 2, on a(B_{p,k}).
pub fn check_bethe(p: u32, k: u64) -> Result<Vec<BoundReport>> {
    let tree = make_bethe(p, k)?;
    let n = tree.order();
    let rho = perron_value(&tree)?.rho;
    let mut out = vec![BoundReport::float(
        BoundId::BetheRhoUpper,
        n,
        rho,
        bethe_rho_upper(p, k)?,
    )];
    if p >= 2 {
        let exact = 1.0 / perron_value(&make_bethe(p - 1, k)?)?.rho;
        out.push(BoundReport::float(
            BoundId::BetheConnectivityLower,
            n,
            bethe_alg_conn_lower(p, k)?,
            exact,
        ));
    }
    Ok(out)
}

/// Largest μ / (ρ ln n) over the given trees.
pub fn conjecture_scan(trees: &[RootedTree]) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for t in trees {
        if t.order() < 2 {
            return invalid("log-order scan needs trees of order >= 2");
        }
        let rho = perron_value(t)?.rho;
        best = best.max(moment(t) as f64 / (rho * (t.order() as f64).ln()));
    }
    if trees.is_empty() {
        return invalid("log-order scan needs at least one tree");
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Star,
    Path,
    Bethe { k: u64 },
    Power { base: RootedTree, label: String },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Star => f.write_str("STAR"),
            Family::Path => f.write_str("PATH"),
            Family::Bethe { k } => write!(f, "BETHE(k={k})"),
            Family::Power { label, .. } => write!(f, "POWER({label})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioPoint {
    /// Order for STAR/PATH, depth p for BETHE, exponent k for POWER.
    pub param: u64,
    pub n: u128,
    pub mu: i128,
    pub rho: f64,
    pub ratio: f64,
    pub ratio_over_ln_n: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioSeries {
    pub family: Family,
    pub points: Vec<RatioPoint>,
}

impl RatioSeries {
    /// True when every point after index `skip` has a larger ratio than
    /// its predecessor.
    pub fn increasing_after(&self, skip: usize) -> bool {
        self.points
            .windows(2)
            .skip(skip.saturating_sub(1))
            .all(|w| w[1].ratio > w[0].ratio)
    }
}

/// Orders up to this use a spectral ρ for stars and paths; larger orders
/// use the closed forms.
pub const SPECTRAL_ORDER_LIMIT: u64 = 10_000;

fn point(param: u64, n: u128, mu: i128, rho: f64) -> RatioPoint {
    let ratio = mu as f64 / rho;
    RatioPoint {
        param,
        n,
        mu,
        rho,
        ratio,
        ratio_over_ln_n: ratio / (n as f64).ln(),
    }
}

fn family_point(family: &Family, param: u64) -> Result<RatioPoint> {
    match family {
        Family::Star | Family::Path => {
            if param < 2 {
                return invalid(format!("{family} ratio needs n >= 2, got {param}"));
            }
            let n = param as usize;
            let star = matches!(family, Family::Star);
            let (mu, rho) = if param <= SPECTRAL_ORDER_LIMIT {
                let t = if star { make_star(n)? } else { make_path(n)? };
                (moment(&t) as i128, perron_value(&t)?.rho)
            } else if star {
                (n as i128 - 1, rho_star_closed(n)?)
            } else {
                ((n as i128 - 1).pow(2), rho_path_closed(n)?)
            };
            Ok(point(param, n as u128, mu, rho))
        }
        Family::Bethe { k } => {
            let p = u32::try_from(param)
                .map_err(|_| Error::InvalidArgument(format!("depth {param} too large")))?;
            if p < 2 {
                return invalid(format!("BETHE ratio needs p >= 2, got {p}"));
            }
            Ok(point(
                param,
                bethe_order(p, *k)?,
                moment_bethe_closed(p, *k)?,
                rho_bethe_levels(p, *k)?,
            ))
        }
        Family::Power { base, .. } => {
            let k = u32::try_from(param)
                .map_err(|_| Error::InvalidArgument(format!("exponent {param} too large")))?;
            if k == 0 {
                return invalid("POWER ratio needs k >= 1");
            }
            let t = rooted_power_capped(base, k, DEFAULT_VERTEX_CAP)?;
            let mu = moment_power_identity(base, k)?;
            Ok(point(param, t.order() as u128, mu, perron_value(&t)?.rho))
        }
    }
}

/// μ/ρ along a family; `params` are sorted and deduplicated first.
pub fn ratio_series(family: &Family, params: &[u64]) -> Result<RatioSeries> {
    let mut params = params.to_vec();
    params.sort_unstable();
    params.dedup();
    let points = params
        .iter()
        .map(|&p| family_point(family, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioSeries {
        family: family.clone(),
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Tree,
    Sum,
    Product,
    Power,
    Bethe,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "tree" => Suite::Tree,
            "sum" => Suite::Sum,
            "product" => Suite::Product,
            "power" => Suite::Power,
            "bethe" => Suite::Bethe,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

/// Operand draws for the composite suites.
const SUITE_SEED: u64 = 0x5017_E5EE_D000_0002;
const SUITE_DRAWS: usize = 200;
const PRODUCT_ORDER_LIMIT: usize = 2_000;
const POWER_ORDER_LIMIT: usize = 10_000;
/// Draws rejected by the order limits do not count; stop after this many.
const MAX_ATTEMPTS: usize = 100_000;

fn pick<'a>(rng: &mut SplitMix64, trees: &'a [CorpusTree]) -> &'a CorpusTree {
    &trees[rng.below(trees.len() as u64) as usize]
}

fn tree_suite(trees: &[CorpusTree]) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for c in trees {
        out.extend(labelled(check_tree(&c.tree)?, &c.id));
    }
    Ok(out)
}

fn sum_suite(trees: &[CorpusTree]) -> Result<Vec<BoundReport>> {
    let mut rng = SplitMix64::new(SUITE_SEED ^ 1);
    let mut out = labelled(check_sum(&vec![RootedTree::trivial(); 9])?, "sum(E x 9)");
    out.extend(labelled(check_sum(&[make_path(3)?])?, "sum(path-3)"));
    out.extend(labelled(
        check_sum(&[make_star(3)?, make_star(3)?])?,
        "sum(star-3,star-3)",
    ));
    for _ in 0..SUITE_DRAWS {
        let k = 1 + rng.below(4) as usize;
        let parts: Vec<&CorpusTree> = (0..k).map(|_| pick(&mut rng, trees)).collect();
        let ids: Vec<&str> = parts.iter().map(|c| c.id.as_str()).collect();
        let owned: Vec<RootedTree> = parts.iter().map(|c| c.tree.clone()).collect();
        out.extend(labelled(
            check_sum(&owned)?,
            &format!("sum({})", ids.join(",")),
        ));
    }
    Ok(out)
}

fn product_suite(trees: &[CorpusTree]) -> Result<Vec<BoundReport>> {
    let mut rng = SplitMix64::new(SUITE_SEED ^ 2);
    let mut out = Vec::new();
    let p6 = make_path(6)?;
    for (id, t1, t2) in [
        ("product(path-6,star-1)", p6.clone(), RootedTree::trivial()),
        ("product(path-6,star-3)", p6.clone(), make_star(3)?),
        ("product(path-6,star-4)", p6, make_star(4)?),
    ] {
        out.extend(labelled(check_product(&t1, &t2)?, id));
    }
    let mut accepted = 0;
    for _ in 0..MAX_ATTEMPTS {
        if accepted == SUITE_DRAWS {
            break;
        }
        let a = pick(&mut rng, trees);
        let b = pick(&mut rng, trees);
        if a.tree.order() * b.tree.order() > PRODUCT_ORDER_LIMIT {
            continue;
        }
        accepted += 1;
        out.extend(labelled(
            check_product(&a.tree, &b.tree)?,
            &format!("product({},{})", a.id, b.id),
        ));
    }
    Ok(out)
}

fn power_suite(trees: &[CorpusTree]) -> Result<Vec<BoundReport>> {
    let mut rng = SplitMix64::new(SUITE_SEED ^ 3);
    let mut out = Vec::new();
    for (id, t, k) in [
        ("power(path-2,1)", make_path(2)?, 1),
        ("power(star-3,3)", make_star(3)?, 3),
        ("power(path-3,4)", make_path(3)?, 4),
    ] {
        out.extend(labelled(check_power(&t, k)?, id));
    }
    let mut accepted = 0;
    for _ in 0..MAX_ATTEMPTS {
        if accepted == SUITE_DRAWS {
            break;
        }
        let c = pick(&mut rng, trees);
        let k = 1 + rng.below(4) as u32;
        let n = c.tree.order();
        if n < 2 || (n as f64).powi(k as i32) > POWER_ORDER_LIMIT as f64 {
            continue;
        }
        accepted += 1;
        out.extend(labelled(
            check_power(&c.tree, k)?,
            &format!("power({},{k})", c.id),
        ));
    }
    Ok(out)
}

fn bethe_suite() -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for p in 1..=6 {
        for k in 2..=6 {
            out.extend(labelled(check_bethe(p, k)?, &format!("bethe-{p}-{k}")));
        }
    }
    Ok(out)
}

/// Runs a suite over the committed corpus.
pub fn run_suite(suite: Suite) -> Result<Vec<BoundReport>> {
    let full = corpus::full_corpus()?;
    let random = corpus::random_corpus()?;
    run_suite_on(suite, &full, &random)
}

/// Runs a suite with `trees` for the single-tree checks and `operands` as
/// the pool for sums, products and powers.
pub fn run_suite_on(
    suite: Suite,
    trees: &[CorpusTree],
    operands: &[CorpusTree],
) -> Result<Vec<BoundReport>> {
    if operands.is_empty() && !matches!(suite, Suite::Tree | Suite::Bethe) {
        return invalid("composite suites need at least one operand tree");
    }
    let mut out = Vec::new();
    if matches!(suite, Suite::All | Suite::Tree) {
        out.extend(tree_suite(trees)?);
    }
    if matches!(suite, Suite::All | Suite::Sum) {
        out.extend(sum_suite(operands)?);
    }
    if matches!(suite, Suite::All | Suite::Product) {
        out.extend(product_suite(operands)?);
    }
    if matches!(suite, Suite::All | Suite::Power) {
        out.extend(power_suite(operands)?);
    }
    if matches!(suite, Suite::All | Suite::Bethe) {
        out.extend(bethe_suite()?);
    }
    Ok(out)
}

#[derive(Serialize)]
struct ReportRow<'a> {
    tree_id: &'a str,
    n: usize,
    bound_id: &'static str,
    lhs: String,
    rhs: String,
    slack: String,
    pass: bool,
    equality: bool,
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("writing CSV: {e}"))
}

pub fn write_reports<W: Write>(w: W, reports: &[BoundReport]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in reports {
        out.serialize(ReportRow {
            tree_id: &r.tree_id,
            n: r.n,
            bound_id: r.bound.as_str(),
            lhs: r.lhs.to_string(),
            rhs: r.rhs.to_string(),
            slack: r.slack.to_string(),
            pass: r.pass,
            equality: r.equality,
        })
        .map_err(csv_error)?;
    }
    out.flush()
        .map_err(|e| Error::InvalidArgument(format!("writing CSV: {e}")))
}

#[derive(Serialize)]
struct SeriesRow {
    family: String,
    param: u64,
    n: u128,
    mu: i128,
    rho: String,
    ratio: String,
    ratio_over_ln_n: String,
}

pub fn write_series<W: Write>(w: W, series: &RatioSeries) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let family = series.family.to_string();
    for p in &series.points {
        out.serialize(SeriesRow {
            family: family.clone(),
            param: p.param,
            n: p.n,
            mu: p.mu,
            rho: g12(p.rho),
            ratio: g12(p.ratio),
            ratio_over_ln_n: g12(p.ratio_over_ln_n),
        })
        .map_err(csv_error)?;
    }
    out.flush()
        .map_err(|e| Error::InvalidArgument(format!("writing CSV: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::make_broom;

    fn find(reports: &[BoundReport], id: BoundId) -> &BoundReport {
        reports.iter().find(|r| r.bound == id).unwrap()
    }

    #[test]
    fn f_values() {
        assert_eq!(f_of(1).unwrap(), 1.0);
        assert!((f_of(3).unwrap() - 3f64.sqrt()).abs() < 1e-14);
        assert!(f_of(0).is_err());
        let mut prev = f_of(1).unwrap();
        for n in 2..=10_000 {
            let cur = f_of(n).unwrap();
            assert!(cur > prev, "n = {n}");
            prev = cur;
        }
    }

    #[test]
    fn star_ten_is_extremal() {
        let r = check_tree(&make_star(10).unwrap()).unwrap();
        let thm = find(&r, BoundId::MomentAboveRhoMinusF);
        assert!(thm.pass && thm.equality);
        assert!(thm.slack.as_f64().abs() < 1e-9);
        assert!(r.iter().all(|x| x.pass));
    }

    #[test]
    fn path_ten_is_extremal() {
        let r = check_tree(&make_path(10).unwrap()).unwrap();
        let prop = find(&r, BoundId::MomentAtMostSquare);
        assert_eq!(prop.lhs, Value::Exact(81));
        assert!(prop.pass && prop.equality);
        assert!(!find(&r, BoundId::MomentAboveRhoMinusF).equality);
        assert!(r.iter().all(|x| x.pass));
    }

    #[test]
    fn trivial_tree() {
        let r = check_tree(&RootedTree::trivial()).unwrap();
        assert!(r.iter().all(|x| x.pass));
        assert!(find(&r, BoundId::MomentAboveRhoMinusF).equality);
        let thm = find(&r, BoundId::MomentBelowFourSevenths);
        assert_eq!(thm.lhs, Value::Float(0.0));
        assert!((thm.rhs.as_f64() - 4.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn brooms_pass() {
        for x in 1..6 {
            for y in 0..6 {
                let r = check_tree(&make_broom(x, y).unwrap()).unwrap();
                assert!(r.iter().all(|b| b.pass), "broom {x} {y}: {r:?}");
            }
        }
    }

    #[test]
    fn sum_examples() {
        let r = check_sum(&vec![RootedTree::trivial(); 9]).unwrap();
        let hi = find(&r, BoundId::SumUpper);
        assert_eq!(hi.rhs, Value::Float(11.0));
        assert!(r.iter().all(|x| x.pass));
        assert!(check_sum(&[make_path(3).unwrap()])
            .unwrap()
            .iter()
            .all(|x| x.pass));
        let s3 = make_star(3).unwrap();
        assert!(check_sum(&[s3.clone(), s3]).unwrap().iter().all(|x| x.pass));
    }

    #[test]
    fn product_with_trivial_is_sharp() {
        let r = check_product(&make_path(5).unwrap(), &RootedTree::trivial()).unwrap();
        assert!(find(&r, BoundId::ProductLowerOrder).equality);
        assert!(find(&r, BoundId::ProductLowerEntropy).equality);
        assert!(r.iter().all(|x| x.pass));
    }

    #[test]
    fn power_examples() {
        let r = check_power(&make_path(2).unwrap(), 1).unwrap();
        assert!(r.iter().all(|x| x.pass && x.equality));
        let r = check_power(&make_star(3).unwrap(), 3).unwrap();
        assert_eq!(r[0].n, 27);
        assert!(r.iter().all(|x| x.pass));
        let r = check_power(&make_path(3).unwrap(), 4).unwrap();
        assert_eq!(r[0].n, 81);
        assert!(r.iter().all(|x| x.pass));
        assert!(check_power(&RootedTree::trivial(), 2).is_err());
    }

    #[test]
    fn bethe_base_cases() {
        let r = check_bethe(1, 3).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].pass && r[0].equality);
        let r = check_bethe(2, 2).unwrap();
        assert!(r.iter().all(|x| x.pass));
        assert!(find(&r, BoundId::BetheConnectivityLower).equality);
        assert!(!find(&r, BoundId::BetheRhoUpper).equality);
    }

    #[test]
    fn conjecture_scan_two_path() {
        let v = conjecture_scan(&[make_path(2).unwrap()]).unwrap();
        let expected = 1.0 / ((3.0 + 5f64.sqrt()) / 2.0 * 2f64.ln());
        assert!((v - expected).abs() < 1e-12);
        assert!((v - 0.551).abs() < 1e-3);
        assert!(conjecture_scan(&[RootedTree::trivial()]).is_err());
        assert!(conjecture_scan(&[]).is_err());
    }

    #[test]
    fn ratio_series_sorted_and_monotone() {
        let s = ratio_series(&Family::Bethe { k: 2 }, &[5, 2, 3, 4, 3]).unwrap();
        assert_eq!(
            s.points.iter().map(|p| p.param).collect::<Vec<_>>(),
            vec![2, 3, 4, 5]
        );
        assert!(s.increasing_after(2));
        assert!(ratio_series(&Family::Star, &[1]).is_err());
        assert!(ratio_series(&Family::Bethe { k: 2 }, &[1]).is_err());
    }

    #[test]
    fn ratio_series_closed_form_switch() {
        let lo = SPECTRAL_ORDER_LIMIT;
        let s = ratio_series(&Family::Path, &[lo, lo + 1]).unwrap();
        let (a, b) = (&s.points[0], &s.points[1]);
        assert!((a.rho - rho_path_closed(lo as usize).unwrap()).abs() / a.rho < 1e-9);
        assert!(b.ratio > a.ratio);
    }

    #[test]
    fn bound_ids_round_trip() {
        for b in BoundId::ALL {
            assert_eq!(b.as_str().parse::<BoundId>().unwrap(), b);
        }
    }

    #[test]
    fn csv_shape() {
        let mut buf = Vec::new();
        write_reports(
            &mut buf,
            &labelled(check_tree(&make_star(3).unwrap()).unwrap(), "s3"),
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("tree_id,n,bound_id,lhs,rhs,slack,pass,equality")
        );
        assert!(lines.next().unwrap().starts_with("s3,3,THM_5_1,"));
    }
}
