//! Claim registry: the inequalities and structural statements the extremal
//! results rest on, each re-checked on an explicit parameter grid.
//!
//! Every verdict is exact (`BigInt`/`BigRational` comparison) or a certified
//! dyadic-interval separation; nothing is trusted from a table. Default grids
//! sit inside each claim's hypotheses by construction. Explicit grids are
//! validated point by point: a hypothesis-violating point whose axes were all
//! given explicitly rejects the whole grid rather than being clipped, while
//! points produced by a default axis are simply skipped.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::covers::covering_number;
use crate::error::Error;
use crate::families::{self, materialize, Family, FamilySpec};
use crate::interval::{log2_int, DyadicInterval};
use crate::parallel::map_ordered;
use crate::partition::{Block, GroundParams, PartialPartition, SetPartition};
use crate::stirling::{
    binomial, meets_l, min_n_for_2l, min_n_for_l, ratio_bound_sides, rennie_dobson_lower, stirling,
};
use crate::Result;

/// How a verdict was settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Interval,
}

/// One checked point of one claim. (claim, point) identifies a record
/// uniquely within a run; the result cache keys on the pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub claim: String,
    pub point: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    pub mode: Mode,
    pub tight: bool,
    pub note: String,
}

/// Per-claim rollup of a verdict list.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimSummary {
    pub claim: String,
    pub total: u64,
    pub passes: u64,
    pub failures: u64,
    pub tight_points: u64,
}

/// Registered claim identifiers, in canonical run order.
pub const CLAIM_IDS: [&str; 17] = [
    "L2.1-ratio",
    "L2.2-inductive",
    "L2.3-key",
    "L4.1-binom",
    "L4.2-Q",
    "L4.3-RD",
    "L4.4-mono",
    "L4.5-t2small",
    "L4.6-qt",
    "L4.7-gap",
    "L3.2-gap",
    "L3.3-rlb",
    "L4.8-u1u2",
    "L4.9-hh1",
    "L4.10-trichotomy",
    "C3.2-shape",
    "F-sizes",
];

/// The outermost iteration axis of a claim's grid. Slicing an explicit grid
/// along this axis and concatenating the slices in ascending order
/// reproduces the unsliced record order, which is what lets long runs
/// checkpoint per slice.
pub fn outer_axis(claim: &str) -> Result<&'static str> {
    match claim {
        "L2.1-ratio" => Ok("k"),
        "L4.1-binom" => Ok("l"),
        "L4.3-RD" => Ok("n"),
        "L2.2-inductive" | "L2.3-key" | "L4.2-Q" | "L4.4-mono" | "L4.5-t2small" | "L4.6-qt"
        | "L4.7-gap" | "L3.2-gap" | "L3.3-rlb" | "L4.8-u1u2" | "L4.9-hh1"
        | "L4.10-trichotomy" | "C3.2-shape" | "F-sizes" => Ok("t"),
        other => Err(Error::UnknownClaim(other.to_string())),
    }
}

/// Grid axes: name -> inclusive (lo, hi).
pub type Ranges = BTreeMap<String, (i64, i64)>;

/// Parse a grid spec like `t=1..6,k=3..16,n=10..25`. A bare `k=4` is the
/// one-point range 4..4.
pub fn parse_ranges(spec: &str) -> Result<Ranges> {
    let bad = |reason: String| Error::BadGrid {
        spec: spec.to_string(),
        reason,
    };
    let mut out = Ranges::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, range) = part
            .split_once('=')
            .ok_or_else(|| bad(format!("expected name=lo..hi, got {part:?}")))?;
        let name = name.trim();
        if name.is_empty() {
            return Err(bad(format!("missing axis name in {part:?}")));
        }
        let (lo, hi) = match range.split_once("..") {
            Some((lo, hi)) => (lo, hi),
            None => (range, range),
        };
        let lo: i64 = lo
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad integer {lo:?} in {part:?}")))?;
        let hi: i64 = hi
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad integer {hi:?} in {part:?}")))?;
        if lo > hi {
            return Err(bad(format!("empty range {lo}..{hi} in {part:?}")));
        }
        if out.insert(name.to_string(), (lo, hi)).is_some() {
            return Err(bad(format!("duplicate axis {name:?}")));
        }
    }
    if out.is_empty() {
        return Err(bad("no axes given".to_string()));
    }
    Ok(out)
}

/// Tally records claim by claim, preserving first-appearance order.
pub fn summarize(records: &[VerdictRecord]) -> Vec<ClaimSummary> {
    let mut out: Vec<ClaimSummary> = Vec::new();
    for r in records {
        if !out.iter().any(|s| s.claim == r.claim) {
            out.push(ClaimSummary {
                claim: r.claim.clone(),
                total: 0,
                passes: 0,
                failures: 0,
                tight_points: 0,
            });
        }
        let entry = out.iter_mut().find(|s| s.claim == r.claim).unwrap();
        entry.total += 1;
        if r.pass {
            entry.passes += 1;
        } else {
            entry.failures += 1;
        }
        if r.tight {
            entry.tight_points += 1;
        }
    }
    out
}

/// Run one claim on its default grid (`grid: None`) or an explicit one.
/// `seed` feeds the randomized sub-family generator claims, `budget` caps
/// any enumeration, `workers` parallelizes across grid points with
/// deterministic output order.
pub fn check(
    claim: &str,
    grid: Option<&Ranges>,
    seed: u64,
    budget: u64,
    workers: usize,
) -> Result<Vec<VerdictRecord>> {
    match claim {
        "L2.1-ratio" => l21_ratio(grid, workers),
        "L2.2-inductive" => l22_inductive(grid, seed, budget, workers),
        "L2.3-key" => l23_key(grid, budget, workers),
        "L4.1-binom" => l41_binom(grid, workers),
        "L4.2-Q" => l42_q(grid, workers),
        "L4.3-RD" => l43_rd(grid, workers),
        "L4.4-mono" => l44_mono(grid, workers),
        "L4.5-t2small" => l45_t2small(grid, workers),
        "L4.6-qt" => l46_qt(grid, workers),
        "L4.7-gap" => l47_gap(grid, workers),
        "L3.2-gap" => l32_gap(grid, workers),
        "L3.3-rlb" => l33_rlb(grid, workers),
        "L4.8-u1u2" => l48_u1u2(grid, workers),
        "L4.9-hh1" => l49_hh1(grid, workers),
        "L4.10-trichotomy" => l410_trichotomy(grid, workers),
        "C3.2-shape" => c32_shape(grid, workers),
        "F-sizes" => f_sizes(grid, budget, workers),
        other => Err(Error::UnknownClaim(other.to_string())),
    }
}

/// Every registered claim on its default grid, concatenated in registry
/// order.
pub fn check_all(seed: u64, budget: u64, workers: usize) -> Result<Vec<VerdictRecord>> {
    let mut out = Vec::new();
    for id in CLAIM_IDS {
        out.extend(check(id, None, seed, budget, workers)?);
    }
    Ok(out)
}

/// Axis lookup plus the hypothesis gate described in the module docs.
struct Axes<'a> {
    claim: &'static str,
    grid: Option<&'a Ranges>,
}

impl<'a> Axes<'a> {
    fn new(claim: &'static str, grid: Option<&'a Ranges>, allowed: &[&str]) -> Result<Self> {
        if let Some(g) = grid {
            for key in g.keys() {
                if !allowed.contains(&key.as_str()) {
                    return Err(Error::BadGrid {
                        spec: key.clone(),
                        reason: format!("{claim} accepts axes {allowed:?}"),
                    });
                }
            }
        }
        Ok(Axes { claim, grid })
    }

    fn axis(&self, key: &str, default: (i64, i64)) -> (i64, i64) {
        self.grid
            .and_then(|g| g.get(key).copied())
            .unwrap_or(default)
    }

    fn is_explicit(&self, key: &str) -> bool {
        self.grid.is_some_and(|g| g.contains_key(key))
    }

    /// Ok(true) keeps the point. A violated constraint rejects the grid when
    /// every axis it involves was explicit, and skips the point otherwise
    /// (a default axis ranged past the hypothesis).
    fn admit(&self, ok: bool, axes: &[&str], msg: impl FnOnce() -> String) -> Result<bool> {
        if ok {
            Ok(true)
        } else if axes.iter().all(|a| self.is_explicit(a)) {
            Err(Error::HypothesisViolated(format!("{}: {}", self.claim, msg())))
        } else {
            Ok(false)
        }
    }
}

/// (t, k, n) grids for the threshold claims: k at least t + gap_lo, n at
/// least thr(k, t), with defaults t in 1..=6, k up to t + gap_hi, n spanning
/// `span` past the threshold.
fn threshold_points(
    ax: &Axes,
    gap_lo: i64,
    gap_hi: i64,
    thr: fn(i64, i64) -> i64,
    span: i64,
) -> Result<Vec<(i64, i64, i64)>> {
    let (tlo, thi) = ax.axis("t", (1, 6));
    let mut points = Vec::new();
    for t in tlo..=thi {
        if !ax.admit(t >= 1, &["t"], || format!("needs t >= 1, got t={t}"))? {
            continue;
        }
        let (klo, khi) = ax.axis("k", (t + gap_lo, t + gap_hi));
        for k in klo..=khi {
            if !ax.admit(k >= t + gap_lo, &["t", "k"], || {
                format!("needs k >= t+{gap_lo}, got t={t},k={k}")
            })? {
                continue;
            }
            let m = thr(k, t);
            let (nlo, nhi) = ax.axis("n", (m, m + span));
            for n in nlo..=nhi {
                if !ax.admit(n >= m, &["t", "k", "n"], || {
                    format!("needs n >= {m} at t={t},k={k}, got n={n}")
                })? {
                    continue;
                }
                points.push((t, k, n));
            }
        }
    }
    Ok(points)
}

fn tkn(t: i64, k: i64, n: i64) -> String {
    format!("t={t},k={k},n={n}")
}

/// (S(n,k) + S(n-1,k-1))^(k-1) >= 2^(n-1) S(n-1,k-1)^(k-1), the cleared form
/// of the column ratio bound. Tight exactly at k = n and at (n, k) = (4, 2).
fn l21_ratio(grid: Option<&Ranges>, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L2.1-ratio", grid, &["k", "n"])?;
    let (klo, khi) = ax.axis("k", (2, 10));
    let mut points = Vec::new();
    for k in klo..=khi {
        if !ax.admit(k >= 2, &["k"], || format!("needs k >= 2, got k={k}"))? {
            continue;
        }
        let (nlo, nhi) = ax.axis("n", (k, k + 10));
        for n in nlo..=nhi {
            if !ax.admit(n >= k, &["k", "n"], || format!("needs n >= k, got k={k},n={n}"))? {
                continue;
            }
            if !ax.admit(n <= 4096, &["n"], || format!("n={n} past the supported 4096"))? {
                continue;
            }
            points.push((k, n));
        }
    }
    Ok(map_ordered(points, workers, |_, (k, n)| {
        let (lhs, rhs) = ratio_bound_sides(n as u32, k as u32);
        VerdictRecord {
            claim: "L2.1-ratio".to_string(),
            point: format!("k={k},n={n}"),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass: lhs >= rhs,
            mode: Mode::Exact,
            tight: lhs == rhs,
            note: "(S(n,k)+S(n-1,k-1))^(k-1) vs 2^(n-1) S(n-1,k-1)^(k-1)".to_string(),
        }
    }))
}

/// Randomized instances of the cover induction step: for a sub-family F',
/// a member T reused as a t-cover (l = k blocks), and an s-partial S built
/// from another member F* with exactly r < t blocks inside T,
/// |F'_S| <= C(l-r, t-r) max |F'_H| over the (t+s-r)-partials H containing
/// S with their remaining blocks drawn from T.
fn l22_inductive(
    grid: Option<&Ranges>,
    seed: u64,
    budget: u64,
    workers: usize,
) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L2.2-inductive", grid, &["t", "k", "n"])?;
    let mut points: Vec<(i64, i64, i64)> = Vec::new();
    if grid.is_none() {
        points = vec![(1, 3, 7), (1, 4, 8), (2, 4, 8)];
    } else {
        let (tlo, thi) = ax.axis("t", (1, 2));
        for t in tlo..=thi {
            if !ax.admit(t >= 1, &["t"], || format!("needs t >= 1, got t={t}"))? {
                continue;
            }
            let (klo, khi) = ax.axis("k", (3, 4));
            for k in klo..=khi {
                if !ax.admit(k >= t + 2, &["t", "k"], || {
                    format!("needs k >= t+2, got t={t},k={k}")
                })? {
                    continue;
                }
                if !ax.admit(k <= 4, &["k"], || format!("generator caps k at 4, got k={k}"))? {
                    continue;
                }
                let (nlo, nhi) = ax.axis("n", (7, 8));
                for n in nlo..=nhi {
                    if !ax.admit(n > k, &["k", "n"], || {
                        format!("needs n >= k+1, got k={k},n={n}")
                    })? {
                        continue;
                    }
                    if !ax.admit(n <= 8, &["n"], || {
                        format!("generator caps n at 8, got n={n}")
                    })? {
                        continue;
                    }
                    points.push((t, k, n));
                }
            }
        }
    }
    let mut tasks = Vec::new();
    for (t, k, n) in points {
        for kind in ["star", "alpha", "hm"] {
            for trial in 0..3u32 {
                tasks.push((t, k, n, kind, trial));
            }
        }
    }
    collect(map_ordered(tasks, workers, move |_, (t, k, n, kind, trial)| {
        l22_point(t, k, n, kind, trial, seed, budget)
    }))
}

fn l22_point(
    t: i64,
    k: i64,
    n: i64,
    kind: &'static str,
    trial: u32,
    seed: u64,
    budget: u64,
) -> Result<VerdictRecord> {
    let params = GroundParams::new(n as u32, k as u32, t as u32)?;
    let family = materialize(&named_spec(kind, params)?, budget)?;
    let point = format!("kind={kind},t={t},k={k},n={n},trial={trial}");
    let derived = seed ^ fnv1a64(point.as_bytes());
    let mut rng = ChaCha8Rng::seed_from_u64(derived);
    let members = family.members();
    let ti = rng.gen_range(0..members.len());
    let mut fi = rng.gen_range(0..members.len());
    if members.len() > 1 && fi == ti {
        fi = (fi + 1) % members.len();
    }
    let kept: Vec<SetPartition> = members
        .iter()
        .enumerate()
        .filter(|(i, _)| *i == ti || *i == fi || rng.gen_bool(0.5))
        .map(|(_, m)| m.clone())
        .collect();
    let sub = Family::new(params, kept)?;
    let cover = &members[ti];
    let fstar = &members[fi];
    let r = rng.gen_range(0..t);
    let (in_t, out_t): (Vec<Block>, Vec<Block>) = fstar
        .blocks()
        .iter()
        .copied()
        .partition(|b| cover.blocks().contains(b));
    // Distinct partitions differ in at least two blocks, so out_t has room.
    let mut s_blocks: Vec<Block> = in_t
        .choose_multiple(&mut rng, r as usize)
        .copied()
        .collect();
    let extra = rng.gen_range(1..=2usize.min(out_t.len()));
    s_blocks.extend(out_t.choose_multiple(&mut rng, extra).copied());
    let s_part = PartialPartition::new(params.n, s_blocks)?;
    let s = s_part.len();
    let f_s = sub.members().iter().filter(|m| m.contains(&s_part)).count() as u64;
    // H candidates: S plus t-r blocks of T that avoid S's support.
    let s_mask = s_part.union_mask();
    let avail: Vec<Block> = cover
        .blocks()
        .iter()
        .copied()
        .filter(|b| b.mask() & s_mask == 0)
        .collect();
    let mut h_best = 0u64;
    let mut h_count = 0u64;
    combinations(&avail, (t - r) as usize, &mut |chosen| {
        let mut blocks = s_part.blocks().to_vec();
        blocks.extend_from_slice(chosen);
        let hits = sub
            .members()
            .iter()
            .filter(|m| blocks.iter().all(|b| m.blocks().contains(b)))
            .count() as u64;
        h_best = h_best.max(hits);
        h_count += 1;
    });
    let bound = binomial(k - r, t - r) * BigInt::from(h_best);
    let lhs = BigInt::from(f_s);
    let pass = h_count > 0 && lhs <= bound;
    Ok(VerdictRecord {
        claim: "L2.2-inductive".to_string(),
        point,
        lhs: lhs.to_string(),
        rhs: bound.to_string(),
        pass,
        mode: Mode::Exact,
        tight: pass && lhs == bound,
        note: format!(
            "seed={derived:#018x} |F'|={} T={} F*={} S={} r={r} s={s} max|F'_H|={h_best} over {h_count} candidates",
            sub.len(),
            cover.to_literal(),
            fstar.to_literal(),
            s_part,
        ),
    })
}

/// For a family with covering number tau on a threshold-sized ground set,
/// every t-partial H obeys
/// |F_H| <= max((k-t+1)^(tau-t) S(n-tau, k-tau), (k-t+1)^(k-t)).
fn l23_key(grid: Option<&Ranges>, budget: u64, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L2.3-key", grid, &["t", "k", "n"])?;
    let mut points: Vec<(i64, i64, i64)> = Vec::new();
    if grid.is_none() {
        points = vec![(1, 3, 10), (1, 3, 11), (1, 3, 12), (2, 4, 13)];
    } else {
        let (tlo, thi) = ax.axis("t", (1, 2));
        for t in tlo..=thi {
            if !ax.admit(t >= 1, &["t"], || format!("needs t >= 1, got t={t}"))? {
                continue;
            }
            let (klo, khi) = ax.axis("k", (t + 2, 4));
            for k in klo..=khi {
                if !ax.admit(k >= t + 2, &["t", "k"], || {
                    format!("needs k >= t+2, got t={t},k={k}")
                })? {
                    continue;
                }
                let m = min_n_for_l(k, t);
                let (nlo, nhi) = ax.axis("n", (m, m));
                for n in nlo..=nhi {
                    if !ax.admit(meets_l(n, k, t), &["t", "k", "n"], || {
                        format!("needs n >= {m} at t={t},k={k}, got n={n}")
                    })? {
                        continue;
                    }
                    if !ax.admit(n <= 64, &["n"], || format!("ground set caps n at 64, got n={n}"))? {
                        continue;
                    }
                    points.push((t, k, n));
                }
            }
        }
    }
    let mut tasks = Vec::new();
    for (t, k, n) in points {
        for kind in ["star", "alpha", "hm"] {
            tasks.push((t, k, n, kind));
        }
    }
    collect(map_ordered(tasks, workers, move |_, (t, k, n, kind)| {
        l23_point(t, k, n, kind, budget)
    }))
}

fn l23_point(t: i64, k: i64, n: i64, kind: &'static str, budget: u64) -> Result<VerdictRecord> {
    let params = GroundParams::new(n as u32, k as u32, t as u32)?;
    let family = materialize(&named_spec(kind, params)?, budget)?;
    let report = covering_number(&family, params.t)?;
    let tau = report.tau as i64;
    let mut counts: HashMap<Vec<u64>, u64> = HashMap::new();
    for m in family.members() {
        combinations(m.blocks(), t as usize, &mut |chosen| {
            let mut key: Vec<u64> = chosen.iter().map(|b| b.mask()).collect();
            key.sort_unstable();
            *counts.entry(key).or_default() += 1;
        });
    }
    let lhs = BigInt::from(counts.values().max().copied().unwrap_or(0));
    let arm_tau = BigInt::from(k - t + 1).pow((tau - t) as u64) * stirling(n - tau, k - tau);
    let arm_flat = BigInt::from(k - t + 1).pow((k - t) as u64);
    let (rhs, arm) = if arm_tau >= arm_flat {
        (arm_tau, "(k-t+1)^(tau-t) S(n-tau,k-tau)")
    } else {
        (arm_flat, "(k-t+1)^(k-t)")
    };
    let pass = lhs <= rhs;
    Ok(VerdictRecord {
        claim: "L2.3-key".to_string(),
        point: format!("kind={kind},t={t},k={k},n={n}"),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        pass,
        mode: Mode::Exact,
        tight: pass && lhs == rhs,
        note: format!(
            "|F|={} tau={tau} witness={} t-partials hit={} binding arm: {arm}",
            family.len(),
            report.witness,
            counts.len(),
        ),
    })
}

/// C(l-r, t-r) <= (l-t+1)^(t-r) for l >= t >= r >= 1; tight at r = t and at
/// t - r = 1.
fn l41_binom(grid: Option<&Ranges>, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L4.1-binom", grid, &["l", "t", "r"])?;
    let (llo, lhi) = ax.axis("l", (1, 12));
    let mut points = Vec::new();
    for l in llo..=lhi {
        if !ax.admit(l >= 1, &["l"], || format!("needs l >= 1, got l={l}"))? {
            continue;
        }
        let (tlo, thi) = ax.axis("t", (1, l));
        for t in tlo..=thi {
            if !ax.admit(t >= 1, &["t"], || format!("needs t >= 1, got t={t}"))? {
                continue;
            }
            if !ax.admit(t <= l, &["l", "t"], || format!("needs t <= l, got l={l},t={t}"))? {
                continue;
            }
            let (rlo, rhi) = ax.axis("r", (1, t));
            for r in rlo..=rhi {
                if !ax.admit(r >= 1, &["r"], || format!("needs r >= 1, got r={r}"))? {
                    continue;
                }
                if !ax.admit(r <= t, &["t", "r"], || format!("needs r <= t, got t={t},r={r}"))? {
                    continue;
                }
                points.push((l, t, r));
            }
        }
    }
    Ok(map_ordered(points, workers, |_, (l, t, r)| {
        let lhs = binomial(l - r, t - r);
        let rhs = BigInt::from(l - t + 1).pow((t - r) as u64);
        VerdictRecord {
            claim: "L4.1-binom".to_string(),
            point: format!("l={l},t={t},r={r}"),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass: lhs <= rhs,
            mode: Mode::Exact,
            tight: lhs == rhs,
            note: "C(l-r,t-r) vs (l-t+1)^(t-r)".to_string(),
        }
    }))
}

/// Q(s,t) = s^(2-2s) ((t+1)(s+1))^((s+1) log2 s) / C(s+t,t) is increasing in
/// s >= 2 and at least 18, with equality exactly at (s,t) = (2,1). Exact
/// rational verdicts where log2 s is an integer, certified intervals
/// otherwise.
fn l42_q(grid: Option<&Ranges>, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L4.2-Q", grid, &["t", "s"])?;
    let (tlo, thi) = ax.axis("t", (1, 6));
    let (slo, shi) = ax.axis("s", (2, 11));
    let mut tasks: Vec<(i64, i64, bool)> = Vec::new();
    for t in tlo..=thi {
        if !ax.admit(t >= 1, &["t"], || format!("needs t >= 1, got t={t}"))? {
            continue;
        }
        for s in slo..=shi {
            if !ax.admit(s >= 2, &["s"], || format!("needs s >= 2, got s={s}"))? {
                continue;
            }
            if s < shi {
                tasks.push((t, s, true));
            }
            tasks.push((t, s, false));
        }
    }
    collect(map_ordered(tasks, workers, |_, (t, s, mono)| {
        if mono {
            l42_mono(t, s)
        } else {
            l42_ge18(t, s)
        }
    }))
}

const INTERVAL_BITS: [u32; 5] = [64, 128, 256, 512, 1024];

fn l42_mono(t: i64, s: i64) -> Result<VerdictRecord> {
    for bits in INTERVAL_BITS {
        let a = log2_q(s, t, bits);
        let b = log2_q(s + 1, t, bits);
        if let Some(pass) = a.lt(&b) {
            return Ok(VerdictRecord {
                claim: "L4.2-Q".to_string(),
                point: format!("t={t},s={s},part=mono"),
                lhs: fmt_interval(&a),
                rhs: fmt_interval(&b),
                pass,
                mode: Mode::Interval,
                tight: false,
                note: format!("log2 Q(s,t) < log2 Q(s+1,t) at {bits} fraction bits"),
            });
        }
    }
    Err(Error::Indeterminate(*INTERVAL_BITS.last().unwrap()))
}

fn l42_ge18(t: i64, s: i64) -> Result<VerdictRecord> {
    let point = format!("t={t},s={s},part=floor");
    if s & (s - 1) == 0 {
        // Integral log2 s, so Q is an exact rational.
        let e = 63 - (s as u64).leading_zeros() as i64;
        let j = ((s + 1) * e) as u64;
        let q = BigRational::new(
            BigInt::from((t + 1) * (s + 1)).pow(j),
            BigInt::from(s).pow((2 * s - 2) as u64) * binomial(s + t, t),
        );
        let floor18 = BigRational::from_integer(BigInt::from(18));
        return Ok(VerdictRecord {
            claim: "L4.2-Q".to_string(),
            point,
            lhs: q.to_string(),
            rhs: "18".to_string(),
            pass: q >= floor18,
            mode: Mode::Exact,
            tight: q == floor18,
            note: "Q(s,t) >= 18, exact rational (integral exponent)".to_string(),
        });
    }
    for bits in INTERVAL_BITS {
        let lq = log2_q(s, t, bits);
        let l18 = log2_int(&BigInt::from(18), bits);
        if let Some(pass) = lq.ge(&l18) {
            return Ok(VerdictRecord {
                claim: "L4.2-Q".to_string(),
                point,
                lhs: fmt_interval(&lq),
                rhs: fmt_interval(&l18),
                pass,
                mode: Mode::Interval,
                tight: false,
                note: format!("log2 Q(s,t) >= log2 18 at {bits} fraction bits"),
            });
        }
    }
    Err(Error::Indeterminate(*INTERVAL_BITS.last().unwrap()))
}

/// Certified enclosure of log2 Q(s, t).
fn log2_q(s: i64, t: i64, bits: u32) -> DyadicInterval {
    let ls = log2_int(&BigInt::from(s), bits);
    let la = log2_int(&BigInt::from((t + 1) * (s + 1)), bits);
    let lc = log2_int(&binomial(s + t, t), bits);
    let linear = ls.scale(&BigRational::from_integer(BigInt::from(2 - 2 * s)));
    let product = ls
        .mul(&la)
        .scale(&BigRational::from_integer(BigInt::from(s + 1)));
    linear.add(&product).sub(&lc)
}

fn fmt_interval(x: &DyadicInterval) -> String {
    let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
    format!("[{:.6},{:.6}]", f(&x.lo), f(&x.hi))
}

/// S(n,r) >= (r^2+r+2) r^(n-r-1) / 2 - 1 for 1 <= r < n; tight at r = n-1
/// and at (n,r) = (10,2).
fn l43_rd(grid: Option<&Ranges>, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L4.3-RD", grid, &["n", "r"])?;
    let (nlo, nhi) = ax.axis("n", (2, 30));
    let mut points = Vec::new();
    for n in nlo..=nhi {
        if !ax.admit(n >= 2, &["n"], || format!("needs n >= 2, got n={n}"))? {
            continue;
        }
        if !ax.admit(n <= 4096, &["n"], || format!("n={n} past the supported 4096"))? {
            continue;
        }
        let (rlo, rhi) = ax.axis("r", (1, n - 1));
        for r in rlo..=rhi {
            if !ax.admit(r >= 1, &["r"], || format!("needs r >= 1, got r={r}"))? {
                continue;
            }
            if !ax.admit(r < n, &["n", "r"], || format!("needs r < n, got n={n},r={r}"))? {
                continue;
            }
            points.push((n, r));
        }
    }
    Ok(map_ordered(points, workers, |_, (n, r)| {
        let s = BigRational::from_integer(stirling(n, r));
        let bound = rennie_dobson_lower(n as u32, r as u32);
        VerdictRecord {
            claim: "L4.3-RD".to_string(),
            point: format!("n={n},r={r}"),
            lhs: s.to_string(),
            rhs: bound.to_string(),
            pass: s >= bound,
            mode: Mode::Exact,
            tight: s == bound,
            note: "S(n,r) vs (r^2+r+2) r^(n-r-1)/2 - 1".to_string(),
        }
    }))
}

/// f(m,k,t,n) and (k-t+1)^(m-t) S(n-m,k-m) strictly decrease over
/// m in t..=k-1 once n clears the threshold, and f never exceeds its value
/// at m = t, which equals S(n-t,k-t).
fn l44_mono(grid: Option<&Ranges>, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L4.4-mono", grid, &["t", "k", "n"])?;
    let points = threshold_points(&ax, 2, 10, min_n_for_l, 15)?;
    Ok(map_ordered(points, workers, |_, (t, k, n)| {
        let top = stirling(n - t, k - t);
        let f = |m| families::f_value(m, k, t, n);
        let g = |m: i64| BigInt::from(k - t + 1).pow((m - t) as u64) * stirling(n - m, k - m);
        let mut pass = f(t) == top;
        for m in t..=(k - 2) {
            pass = pass && f(m) > f(m + 1) && g(m) > g(m + 1);
        }
        for m in (t + 1)..=(k - 1) {
            pass = pass && f(m) < top;
        }
        VerdictRecord {
            claim: "L4.4-mono".to_string(),
            point: tkn(t, k, n),
            lhs: f(t).to_string(),
            rhs: top.to_string(),
            pass,
            mode: Mode::Exact,
            tight: true,
            note: format!(
                "f and (k-t+1)^(m-t) S(n-m,k-m) strictly decrease over m={t}..{}; f(t) = S(n-t,k-t)",
                k - 1
            ),
        }
    }))
}

/// For k >= t+4 past the doubled threshold, f(k) < f(t+2) < r.
fn l45_t2small(grid: Option<&Ranges>, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L4.5-t2small", grid, &["t", "k", "n"])?;
    let points = threshold_points(&ax, 4, 10, min_n_for_2l, 15)?;
    Ok(map_ordered(points, workers, |_, (t, k, n)| {
        let f_top = families::f_value(k, k, t, n);
        let f_mid = families::f_value(t + 2, k, t, n);
        let r = families::r_value(n, k, t);
        VerdictRecord {
            claim: "L4.5-t2small".to_string(),
            point: tkn(t, k, n),
            lhs: f_mid.to_string(),
            rhs: r.to_string(),
            pass: f_top < f_mid && f_mid < r,
            mode: Mode::Exact,
            tight: false,
            note: format!("also f(k)={f_top} < f(t+2)"),
        }
    }))
}

/// S(n-t-s, k-t-s) + s t strictly decreases over s in 2..=k-t-1 past the
/// doubled threshold (vacuous when that range is a single point).
fn l46_qt(grid: Option<&Ranges>, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L4.6-qt", grid, &["t", "k", "n"])?;
    let points = threshold_points(&ax, 3, 10, min_n_for_2l, 15)?;
    Ok(map_ordered(points, workers, |_, (t, k, n)| {
        let phi = |s: i64| stirling(n - t - s, k - t - s) + BigInt::from(s * t);
        if k - t == 3 {
            return VerdictRecord {
                claim: "L4.6-qt".to_string(),
                point: tkn(t, k, n),
                lhs: phi(2).to_string(),
                rhs: "-".to_string(),
                pass: true,
                mode: Mode::Exact,
                tight: false,
                note: "vacuous: s ranges over the single point 2".to_string(),
            };
        }
        let mut pass = true;
        for s in 2..=(k - t - 2) {
            pass = pass && phi(s) > phi(s + 1);
        }
        VerdictRecord {
            claim: "L4.6-qt".to_string(),
            point: tkn(t, k, n),
            lhs: phi(2).to_string(),
            rhs: phi(3).to_string(),
            pass,
            mode: Mode::Exact,
            tight: false,
            note: format!("S(n-t-s,k-t-s)+st strictly decreases over s=2..{}", k - t - 1),
        }
    }))
}

/// Two growth gaps past the doubled threshold:
/// S(n-t-s-1, k-t-s) > (t+1)^2 (k-t+1) S(n-t-s-1, k-t-s-1) for
/// s in 0..=k-t-2, and S(n-t-3, k-t-1) > t S(n-t-2, k-t-2).
fn l47_gap(grid: Option<&Ranges>, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L4.7-gap", grid, &["t", "k", "n"])?;
    let points = threshold_points(&ax, 3, 10, min_n_for_2l, 15)?;
    Ok(map_ordered(points, workers, |_, (t, k, n)| {
        let factor = BigInt::from((t + 1) * (t + 1) * (k - t + 1));
        let mut pass = true;
        for s in 0..=(k - t - 2) {
            pass = pass
                && stirling(n - t - s - 1, k - t - s) > &factor * stirling(n - t - s - 1, k - t - s - 1);
        }
        pass = pass && stirling(n - t - 3, k - t - 1) > BigInt::from(t) * stirling(n - t - 2, k - t - 2);
        VerdictRecord {
            claim: "L4.7-gap".to_string(),
            point: tkn(t, k, n),
            lhs: stirling(n - t - 1, k - t).to_string(),
            rhs: (&factor * stirling(n - t - 1, k - t - 1)).to_string(),
            pass,
            mode: Mode::Exact,
            tight: false,
            note: format!(
                "gap factor (t+1)^2 (k-t+1) = {factor} over offsets 0..={}, plus the tail pair",
                k - t - 2
            ),
        }
    }))
}

/// The squared-factor gap past the doubled threshold:
/// S(n-t-s, k-t-s) > (t+1)^2 (k-t+1)^2 S(n-t-s-1, k-t-s-1) for
/// s in 0..=k-t-2.
fn l32_gap(grid: Option<&Ranges>, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L3.2-gap", grid, &["t", "k", "n"])?;
    let points = threshold_points(&ax, 2, 10, min_n_for_2l, 15)?;
    Ok(map_ordered(points, workers, |_, (t, k, n)| {
        let factor = BigInt::from((t + 1) * (t + 1)) * BigInt::from((k - t + 1) * (k - t + 1));
        let mut pass = true;
        for s in 0..=(k - t - 2) {
            pass = pass && stirling(n - t - s, k - t - s) > &factor * stirling(n - t - s - 1, k - t - s - 1);
        }
        VerdictRecord {
            claim: "L3.2-gap".to_string(),
            point: tkn(t, k, n),
            lhs: stirling(n - t, k - t).to_string(),
            rhs: (&factor * stirling(n - t - 1, k - t - 1)).to_string(),
            pass,
            mode: Mode::Exact,
            tight: false,
            note: format!(
                "gap factor (t+1)^2 (k-t+1)^2 = {factor} over offsets 0..={}",
                k - t - 2
            ),
        }
    }))
}

/// Lower bounds for the benchmark size r past the doubled threshold:
/// r > (k-t-1 - 1/(t+1)^2) S(n-t-1,k-t-1) + t, and for k = t+3 also
/// r > (9/4) S(n-t-1,2) + t.
fn l33_rlb(grid: Option<&Ranges>, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L3.3-rlb", grid, &["t", "k", "n"])?;
    let points = threshold_points(&ax, 2, 10, min_n_for_2l, 15)?;
    Ok(map_ordered(points, workers, |_, (t, k, n)| {
        let r = BigRational::from_integer(families::r_value(n, k, t));
        let coef = BigRational::new(
            BigInt::from((k - t - 1) * (t + 1) * (t + 1) - 1),
            BigInt::from((t + 1) * (t + 1)),
        );
        let s_mid = BigRational::from_integer(stirling(n - t - 1, k - t - 1));
        let t_rat = BigRational::from_integer(BigInt::from(t));
        let bound = coef * s_mid + &t_rat;
        let mut pass = r > bound;
        let mut note = "r vs (k-t-1 - 1/(t+1)^2) S(n-t-1,k-t-1) + t".to_string();
        if k == t + 3 {
            let alt = BigRational::new(BigInt::from(9), BigInt::from(4))
                * BigRational::from_integer(stirling(n - t - 1, 2))
                + &t_rat;
            pass = pass && r > alt;
            note.push_str("; k=t+3 also checked against (9/4) S(n-t-1,2) + t");
        }
        VerdictRecord {
            claim: "L3.3-rlb".to_string(),
            point: tkn(t, k, n),
            lhs: r.to_string(),
            rhs: bound.to_string(),
            pass,
            mode: Mode::Exact,
            tight: false,
            note,
        }
    }))
}

/// max(u1, u2) < r past the doubled threshold for k >= t+3.
fn l48_u1u2(grid: Option<&Ranges>, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L4.8-u1u2", grid, &["t", "k", "n"])?;
    let points = threshold_points(&ax, 3, 10, min_n_for_2l, 15)?;
    Ok(map_ordered(points, workers, |_, (t, k, n)| {
        let u1 = families::u1_value(n, k, t);
        let u2 = families::u2_value(n, k, t);
        let r = families::r_value(n, k, t);
        let (lhs, which) = if u1 >= u2 { (&u1, "u1") } else { (&u2, "u2") };
        VerdictRecord {
            claim: "L4.8-u1u2".to_string(),
            point: tkn(t, k, n),
            lhs: lhs.to_string(),
            rhs: r.to_string(),
            pass: *lhs < r,
            mode: Mode::Exact,
            tight: false,
            note: format!("max attained by {which}; u1={u1} u2={u2}"),
        }
    }))
}

/// r <= |H1| < |H| past the doubled threshold for k >= t+3, and |A| < r
/// once k >= 2t+3.
fn l49_hh1(grid: Option<&Ranges>, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L4.9-hh1", grid, &["t", "k", "n"])?;
    let points = threshold_points(&ax, 3, 10, min_n_for_2l, 15)?;
    Ok(map_ordered(points, workers, |_, (t, k, n)| {
        let h1 = families::size_h1(n, k, t);
        let h = families::size_hm_named(n, k, t);
        let r = families::r_value(n, k, t);
        let mut pass = r <= h1 && h1 < h;
        let mut note = format!("r={r}");
        if k >= 2 * t + 3 {
            let a = families::size_alpha_named(n, k, t);
            pass = pass && a < r;
            note.push_str(&format!("; k >= 2t+3 so also |A|={a} < r"));
        }
        VerdictRecord {
            claim: "L4.9-hh1".to_string(),
            point: tkn(t, k, n),
            lhs: h1.to_string(),
            rhs: h.to_string(),
            pass,
            mode: Mode::Exact,
            tight: r == h1,
            note,
        }
    }))
}

/// Which of |H| and |A| is larger, past the doubled threshold for k >= t+3:
/// |H| wins for k >= 2t+3, they are equal exactly at (k,t) = (4,1), and |A|
/// wins for t+3 <= k <= 2t+2 otherwise.
fn l410_trichotomy(grid: Option<&Ranges>, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("L4.10-trichotomy", grid, &["t", "k", "n"])?;
    let points = threshold_points(&ax, 3, 10, min_n_for_2l, 15)?;
    Ok(map_ordered(points, workers, |_, (t, k, n)| {
        let a = families::size_alpha_named(n, k, t);
        let h = families::size_hm_named(n, k, t);
        let (pass, regime) = if k >= 2 * t + 3 {
            (h > a, "k >= 2t+3: |H| > |A|")
        } else if (k, t) == (4, 1) {
            (h == a, "(k,t) = (4,1): |H| = |A|")
        } else {
            (a > h, "k <= 2t+2: |A| > |H|")
        };
        VerdictRecord {
            claim: "L4.10-trichotomy".to_string(),
            point: tkn(t, k, n),
            lhs: a.to_string(),
            rhs: h.to_string(),
            pass,
            mode: Mode::Exact,
            tight: a == h,
            note: regime.to_string(),
        }
    }))
}

/// Star sizes ranked by anchor union size: the second-largest value sits at
/// union size t+1, whose only anchor shape is t-1 singletons plus one
/// doubleton.
fn c32_shape(grid: Option<&Ranges>, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("C3.2-shape", grid, &["t", "k", "n"])?;
    let (tlo, thi) = ax.axis("t", (1, 2));
    let mut points = Vec::new();
    for t in tlo..=thi {
        if !ax.admit(t >= 1, &["t"], || format!("needs t >= 1, got t={t}"))? {
            continue;
        }
        let (klo, khi) = ax.axis("k", (t + 2, 5));
        for k in klo..=khi {
            if !ax.admit(k > t, &["t", "k"], || {
                format!("needs k >= t+1, got t={t},k={k}")
            })? {
                continue;
            }
            let (nlo, nhi) = ax.axis("n", (k, 11));
            for n in nlo..=nhi {
                if !ax.admit(n >= k, &["k", "n"], || format!("needs n >= k, got k={k},n={n}"))? {
                    continue;
                }
                if !ax.admit(n <= 64, &["n"], || format!("ground set caps n at 64, got n={n}"))? {
                    continue;
                }
                points.push((t, k, n));
            }
        }
    }
    collect(map_ordered(points, workers, |_, (t, k, n)| {
        let params = GroundParams::new(n as u32, k as u32, t as u32)?;
        Ok(crate::search::second_largest_trivial_check(params))
    }))
}

/// Closed-form construction sizes against brute-force materialization:
/// named and doubleton-anchored stars and alpha families, the named
/// Hilton-Milner style family, and its doubleton variant.
fn f_sizes(grid: Option<&Ranges>, budget: u64, workers: usize) -> Result<Vec<VerdictRecord>> {
    let ax = Axes::new("F-sizes", grid, &["t", "k", "n"])?;
    let (tlo, thi) = ax.axis("t", (1, 2));
    let mut tasks: Vec<(i64, i64, i64, &'static str)> = Vec::new();
    for t in tlo..=thi {
        if !ax.admit(t >= 1, &["t"], || format!("needs t >= 1, got t={t}"))? {
            continue;
        }
        let (klo, khi) = ax.axis("k", (t + 2, 4));
        for k in klo..=khi {
            if !ax.admit(k >= t + 2, &["t", "k"], || {
                format!("needs k >= t+2, got t={t},k={k}")
            })? {
                continue;
            }
            let (nlo, nhi) = ax.axis("n", (k, 9));
            for n in nlo..=nhi {
                if !ax.admit(n >= k, &["k", "n"], || format!("needs n >= k, got k={k},n={n}"))? {
                    continue;
                }
                if !ax.admit(n <= 64, &["n"], || format!("ground set caps n at 64, got n={n}"))? {
                    continue;
                }
                tasks.push((t, k, n, "star/named"));
                tasks.push((t, k, n, "alpha/named"));
                if n > k {
                    tasks.push((t, k, n, "star/doubleton"));
                    tasks.push((t, k, n, "alpha/doubleton"));
                    tasks.push((t, k, n, "hm/named"));
                }
                if n >= k + 2 {
                    tasks.push((t, k, n, "h1/named"));
                }
            }
        }
    }
    collect(map_ordered(tasks, workers, move |_, (t, k, n, variant)| {
        f_sizes_point(t, k, n, variant, budget)
    }))
}

fn f_sizes_point(t: i64, k: i64, n: i64, variant: &'static str, budget: u64) -> Result<VerdictRecord> {
    let params = GroundParams::new(n as u32, k as u32, t as u32)?;
    let spec = match variant {
        "star/named" => FamilySpec::named_star(params),
        "star/doubleton" => FamilySpec::star(params, doubleton_anchor(params.n, params.t)?),
        "alpha/named" => FamilySpec::named_alpha(params),
        "alpha/doubleton" => FamilySpec::alpha(params, doubleton_anchor(params.n, params.t + 2)?),
        "hm/named" => FamilySpec::named_hm(params),
        "h1/named" => FamilySpec::named_h1(params),
        other => return Err(Error::BadFamilySpec(format!("unknown variant {other:?}"))),
    }?;
    let fam = materialize(&spec, budget)?;
    let point = format!("variant={variant},t={t},k={k},n={n}");
    match spec.closed_form_size() {
        Some(size) => Ok(VerdictRecord {
            claim: "F-sizes".to_string(),
            point,
            lhs: fam.len().to_string(),
            rhs: size.to_string(),
            pass: BigInt::from(fam.len()) == size,
            mode: Mode::Exact,
            tight: false,
            note: spec.describe(),
        }),
        None => Ok(VerdictRecord {
            claim: "F-sizes".to_string(),
            point,
            lhs: fam.len().to_string(),
            rhs: "-".to_string(),
            pass: false,
            mode: Mode::Exact,
            tight: false,
            note: format!("no closed form here: {}", spec.describe()),
        }),
    }
}

/// Anchor of `blocks` blocks: blocks-1 singletons then one doubleton.
fn doubleton_anchor(n: u32, blocks: u32) -> Result<PartialPartition> {
    let mut v: Vec<Block> = (1..blocks).map(Block::singleton).collect();
    v.push(Block::from_elements(&[blocks, blocks + 1])?);
    PartialPartition::new(n, v)
}

fn named_spec(kind: &str, params: GroundParams) -> Result<FamilySpec> {
    match kind {
        "star" => FamilySpec::named_star(params),
        "alpha" => FamilySpec::named_alpha(params),
        "hm" => FamilySpec::named_hm(params),
        "h1" => FamilySpec::named_h1(params),
        other => Err(Error::BadFamilySpec(format!("unknown family kind {other:?}"))),
    }
}

fn collect(results: Vec<Result<VerdictRecord>>) -> Result<Vec<VerdictRecord>> {
    results.into_iter().collect()
}

/// Visit every `pick`-subset of `items` in ascending index order.
fn combinations(items: &[Block], pick: usize, f: &mut impl FnMut(&[Block])) {
    fn go(items: &[Block], pick: usize, acc: &mut Vec<Block>, f: &mut impl FnMut(&[Block])) {
        if pick == 0 {
            f(acc);
            return;
        }
        if items.len() < pick {
            return;
        }
        for i in 0..=(items.len() - pick) {
            acc.push(items[i]);
            go(&items[i + 1..], pick - 1, acc, f);
            acc.pop();
        }
    }
    go(items, pick, &mut Vec::new(), f)
}

/// FNV-1a, for deriving per-point seeds and cache keys deterministically.
pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Intersection sizes of m sets, keyed by non-empty subset bitmask over
/// 0..m. Fuel for the truncated inclusion-exclusion bounds.
#[derive(Debug, Clone)]
pub struct IntersectionTable {
    m: u32,
    sizes: HashMap<u32, BigInt>,
}

impl IntersectionTable {
    pub fn new(m: u32) -> Self {
        assert!((1..=20).contains(&m), "need 1 <= m <= 20 sets");
        IntersectionTable {
            m,
            sizes: HashMap::new(),
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn set(&mut self, subset: u32, size: BigInt) {
        assert!(subset != 0 && subset < (1 << self.m), "subset out of range");
        self.sizes.insert(subset, size);
    }

    pub fn get(&self, subset: u32) -> Option<&BigInt> {
        self.sizes.get(&subset)
    }

    /// Full table for sets given as element bitmasks.
    pub fn from_masks(masks: &[u64]) -> Self {
        let mut table = IntersectionTable::new(masks.len() as u32);
        for subset in 1u32..(1 << masks.len()) {
            let mut inter = u64::MAX;
            for (i, mask) in masks.iter().enumerate() {
                if subset & (1 << i) != 0 {
                    inter &= mask;
                }
            }
            table.set(subset, BigInt::from(inter.count_ones()));
        }
        table
    }

    /// Exact union size by full inclusion-exclusion.
    pub fn union_size(&self) -> Result<BigInt> {
        truncated(self, self.m)
    }
}

/// Truncated inclusion-exclusion bounds on the union size: the sum cut
/// after j-set terms overshoots for odd j and undershoots for even j, so
/// depth s yields the sandwich (lower, upper). Depth at or past m is exact
/// on both sides.
pub fn bonferroni(table: &IntersectionTable, s: u32) -> Result<(BigInt, BigInt)> {
    assert!(s >= 1, "depth starts at 1");
    if s >= table.m {
        let exact = truncated(table, table.m)?;
        return Ok((exact.clone(), exact));
    }
    if s % 2 == 1 {
        Ok((truncated(table, s - 1)?, truncated(table, s)?))
    } else {
        Ok((truncated(table, s)?, truncated(table, s - 1)?))
    }
}

fn truncated(table: &IntersectionTable, depth: u32) -> Result<BigInt> {
    let mut acc = BigInt::zero();
    for subset in 1u32..(1 << table.m) {
        let bits = subset.count_ones();
        if bits > depth {
            continue;
        }
        let v = table
            .get(subset)
            .ok_or(Error::IncompleteTable(subset))?;
        if bits % 2 == 1 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ranges(spec: &str) -> Ranges {
        parse_ranges(spec).unwrap()
    }

    fn run(claim: &str, spec: &str) -> Vec<VerdictRecord> {
        check(claim, Some(&ranges(spec)), 42, 10_000_000, 1).unwrap()
    }

    #[test]
    fn parse_ranges_forms() {
        let g = ranges("t=1..6, k=3..16,n=10..25");
        assert_eq!(g["t"], (1, 6));
        assert_eq!(g["k"], (3, 16));
        assert_eq!(g["n"], (10, 25));
        assert_eq!(ranges("k=4")["k"], (4, 4));
        assert!(parse_ranges("").is_err());
        assert!(parse_ranges("k").is_err());
        assert!(parse_ranges("k=5..3").is_err());
        assert!(parse_ranges("k=1..2,k=3..4").is_err());
        assert!(parse_ranges("k=x..2").is_err());
    }

    #[test]
    fn unknown_claim_and_axis_are_rejected() {
        assert!(matches!(
            check("L9.9-made-up", None, 0, 1000, 1),
            Err(Error::UnknownClaim(_))
        ));
        assert!(matches!(
            check("L2.1-ratio", Some(&ranges("z=1..2")), 0, 1000, 1),
            Err(Error::BadGrid { .. })
        ));
    }

    #[test]
    fn ratio_claim_passes_and_marks_tight_points() {
        let records = run("L2.1-ratio", "k=2..4,n=4..8");
        assert!(!records.is_empty());
        assert!(records.iter().all(|r| r.pass));
        let tight: Vec<&str> = records
            .iter()
            .filter(|r| r.tight)
            .map(|r| r.point.as_str())
            .collect();
        assert!(tight.contains(&"k=2,n=4"), "tight at (4,2): {tight:?}");
        assert!(tight.contains(&"k=4,n=4"), "tight on the diagonal: {tight:?}");
    }

    #[test]
    fn binom_claim_and_rejection() {
        let records = run("L4.1-binom", "l=5..6,t=2..3,r=1..2");
        assert_eq!(records.len(), 8);
        assert!(records.iter().all(|r| r.pass));
        assert!(records
            .iter()
            .any(|r| r.tight && r.point == "l=5,t=2,r=1"));
        assert!(matches!(
            check("L4.1-binom", Some(&ranges("l=4..4,t=2..2,r=3..3")), 0, 0, 1),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn rennie_dobson_claim_tight_cases() {
        let records = run("L4.3-RD", "n=5..10,r=1..4");
        assert!(records.iter().all(|r| r.pass));
        assert!(records.iter().any(|r| r.tight && r.point == "n=5,r=4"));
        assert!(records.iter().any(|r| r.tight && r.point == "n=10,r=2"));
    }

    #[test]
    fn q_claim_exact_values_and_intervals() {
        let records = run("L4.2-Q", "t=1..2,s=2..3");
        // Per t: one monotonicity pair (2 vs 3) and two floor checks.
        assert_eq!(records.len(), 6);
        assert!(records.iter().all(|r| r.pass));
        let q21 = records
            .iter()
            .find(|r| r.point == "t=1,s=2,part=floor")
            .unwrap();
        assert_eq!(q21.lhs, "18");
        assert!(q21.tight && q21.mode == Mode::Exact);
        // Q(2,t) = 27 (t+1)^2 / (2 (t+2)) for the exact s = 2 records.
        for t in 1..=2i64 {
            let expect = BigRational::new(
                BigInt::from(27 * (t + 1) * (t + 1)),
                BigInt::from(2 * (t + 2)),
            );
            let rec = records
                .iter()
                .find(|r| r.point == format!("t={t},s=2,part=floor"))
                .unwrap();
            assert_eq!(rec.lhs, expect.to_string());
        }
        assert!(records
            .iter()
            .any(|r| r.mode == Mode::Interval && r.point == "t=1,s=2,part=mono"));
    }

    #[test]
    fn threshold_claims_at_single_points() {
        let l = |k: i64, t: i64| min_n_for_l(k, t);
        let l2 = |k: i64, t: i64| min_n_for_2l(k, t);

        let recs = run("L4.4-mono", &format!("t=1..1,k=3..3,n={0}..{0}", l(3, 1)));
        assert_eq!(recs.len(), 1);
        assert!(recs[0].pass && recs[0].tight);

        let recs = run("L4.5-t2small", &format!("t=1..1,k=5..5,n={0}..{0}", l2(5, 1)));
        assert!(recs[0].pass);

        for claim in ["L4.6-qt", "L4.7-gap", "L4.8-u1u2", "L4.9-hh1"] {
            let recs = run(claim, &format!("t=1..1,k=4..4,n={0}..{0}", l2(4, 1)));
            assert!(recs[0].pass, "{claim}: {:?}", recs[0]);
        }
        // k - t = 3 puts the qt range on a single point.
        let recs = run("L4.6-qt", &format!("t=1..1,k=4..4,n={0}..{0}", l2(4, 1)));
        assert!(recs[0].note.contains("vacuous"));
        // r = |H1| exactly when k - t = 3.
        let recs = run("L4.9-hh1", &format!("t=1..1,k=4..4,n={0}..{0}", l2(4, 1)));
        assert!(recs[0].tight);

        let recs = run("L3.2-gap", &format!("t=1..1,k=3..3,n={0}..{0}", l2(3, 1)));
        assert!(recs[0].pass);
        let recs = run("L3.3-rlb", &format!("t=1..1,k=4..4,n={0}..{0}", l2(4, 1)));
        assert!(recs[0].pass && recs[0].note.contains("k=t+3"));

        let recs = run("L4.10-trichotomy", &format!("t=1..1,k=4..4,n={0}..{1}", l2(4, 1), l2(4, 1) + 1));
        assert!(recs.iter().all(|r| r.pass && r.tight), "(4,1) equality");
        let recs = run("L4.10-trichotomy", &format!("t=2..2,k=5..5,n={0}..{0}", l2(5, 2)));
        assert!(recs[0].pass && !recs[0].tight && recs[0].note.contains("|A| > |H|"));
        let recs = run("L4.10-trichotomy", &format!("t=1..1,k=5..5,n={0}..{0}", l2(5, 1)));
        assert!(recs[0].pass && recs[0].note.contains("|H| > |A|"));
    }

    #[test]
    fn threshold_violation_rejects_explicit_grid() {
        assert!(matches!(
            check("L4.4-mono", Some(&ranges("t=1..1,k=4..4,n=10..10")), 0, 0, 1),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn inductive_claim_smoke() {
        let records = run("L2.2-inductive", "t=1..1,k=3..3,n=7..7");
        assert_eq!(records.len(), 9);
        for r in &records {
            assert!(r.pass, "{}: {}", r.point, r.note);
            assert!(r.note.contains("seed="));
        }
    }

    #[test]
    fn key_claim_smoke() {
        let records = run("L2.3-key", "t=1..1,k=3..3,n=10..10");
        assert_eq!(records.len(), 3);
        assert!(records.iter().all(|r| r.pass));
        let star = records.iter().find(|r| r.point.contains("star")).unwrap();
        assert!(star.tight, "star saturates the tau = t arm");
        assert_eq!(star.lhs, stirling(9, 2).to_string());
    }

    #[test]
    fn shape_and_sizes_claims_smoke() {
        let records = run("C3.2-shape", "t=1..1,k=3..3,n=6..8");
        assert_eq!(records.len(), 3);
        assert!(records.iter().all(|r| r.pass));

        let records = run("F-sizes", "t=1..1,k=3..3,n=5..6");
        assert_eq!(records.len(), 12);
        for r in &records {
            assert!(r.pass, "{}: {} vs {}", r.point, r.lhs, r.rhs);
        }
    }

    #[test]
    fn summary_counts() {
        let records = run("L2.1-ratio", "k=2..2,n=2..6");
        let summary = summarize(&records);
        assert_eq!(summary.len(), 1);
        assert_eq!(summary[0].claim, "L2.1-ratio");
        assert_eq!(summary[0].total, 5);
        assert_eq!(summary[0].passes, 5);
        assert_eq!(summary[0].failures, 0);
        assert!(summary[0].tight_points >= 1);
    }

    #[test]
    fn workers_do_not_change_records() {
        let grid = ranges("t=1..2,k=3..4,n=8..9");
        let one = check("C3.2-shape", Some(&grid), 7, 1000, 1).unwrap();
        let eight = check("C3.2-shape", Some(&grid), 7, 1000, 8).unwrap();
        let dump = |rs: &[VerdictRecord]| {
            rs.iter()
                .map(|r| serde_json::to_string(r).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(dump(&one), dump(&eight));
    }

    #[test]
    fn outer_axis_slices_concatenate() {
        assert_eq!(outer_axis("L2.1-ratio").unwrap(), "k");
        let full = run("L2.1-ratio", "k=2..4,n=4..8");
        let mut sliced = Vec::new();
        for k in 2..=4 {
            sliced.extend(run("L2.1-ratio", &format!("k={k},n=4..8")));
        }
        let dump = |rs: &[VerdictRecord]| {
            rs.iter()
                .map(|r| serde_json::to_string(r).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(dump(&full), dump(&sliced));
    }

    #[test]
    fn bonferroni_sandwich_and_exactness() {
        let masks = [0b0111u64, 0b1010, 0b1100];
        let table = IntersectionTable::from_masks(&masks);
        let union = BigInt::from((masks[0] | masks[1] | masks[2]).count_ones());
        assert_eq!(table.union_size().unwrap(), union);
        for s in 1..=4u32 {
            let (lo, hi) = bonferroni(&table, s).unwrap();
            assert!(lo <= union && union <= hi, "depth {s}");
        }
        let (lo, hi) = bonferroni(&table, 3).unwrap();
        assert_eq!(lo, union);
        assert_eq!(hi, union);
        let mut sparse = IntersectionTable::new(2);
        sparse.set(0b01, BigInt::from(4));
        assert!(matches!(
            bonferroni(&sparse, 1),
            Err(Error::IncompleteTable(0b10))
        ));
    }
}
