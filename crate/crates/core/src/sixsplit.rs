//! Splitting a weighted point set into six wedges by three concurrent lines.
//!
//! Given targets `alpha, beta, gamma` with `2(alpha + beta + gamma)` equal to
//! the total weight, a six-way split is an apex point and three lines through
//! it whose six wedges carry, in counterclockwise order, exactly the weights
//! `alpha, beta, gamma, alpha, beta, gamma`. Voters strictly inside a wedge
//! count fully toward it; a voter on a ray may divide its weight between the
//! two adjacent wedges, and a voter at the apex across all six.
//!
//! The search follows the structure of the problem. Any valid first line
//! halves the total weight, so the apex is scanned over weight-halving lines:
//! an outer grid over the line direction and an inner scan along the line.
//! At each position a floating-point residual measures how far the best
//! achievable opposite-wedge weights are from their targets; near-zero spots
//! seed exact candidates. Since hitting fractional targets generally forces
//! rays through voters, candidate apexes are generated as intersections of
//! lines through nearly-antipodal voter pairs. Each candidate goes to an
//! exact oracle that enumerates ray placements in the merged direction
//! arrangement, prunes with exact per-wedge windows, and decides boundary
//! credit feasibility by a small rational max flow, which also yields the
//! weight assignment. Every returned split passes [`verify_six_split`].

use crate::angles::{between, cross, dir_cmp, dot, opp, Dir};
use crate::flow::{EdgeId, FlowNet};
use crate::geometry::{Point, WeightedPointSet};
use crate::num::{rat, rat_to_f64, Rat};
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::HashSet;

/// A six-way split: apex, the six rays counterclockwise (ray `j + 3` is
/// opposite ray `j`), the targets, and the weight assignment. `portions[i]`
/// lists `(wedge, weight)` shares for voter `i`, summing to the voter's
/// weight; wedge `j` spans from ray `j` counterclockwise to ray `j + 1`.
#[derive(Clone, Debug)]
pub struct SixSplit {
    pub apex: Point,
    pub rays: [Dir; 6],
    pub targets: (Rat, Rat, Rat),
    pub portions: Vec<Vec<(usize, Rat)>>,
}

/// Search effort for [`six_split`].
#[derive(Clone, Debug)]
pub struct SplitBudget {
    /// Scan passes over direction grids of increasing resolution.
    pub restarts: usize,
    /// Residual evaluations allowed per pass.
    pub steps: usize,
    /// Exact feasibility checks allowed in total.
    pub exact_checks: usize,
}

impl Default for SplitBudget {
    fn default() -> Self {
        SplitBudget { restarts: 64, steps: 40_000, exact_checks: 400 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SixSplitError {
    #[error("wedge targets must be nonnegative with 2(alpha+beta+gamma) = total weight")]
    BadTargets,
    #[error("no exact split found; best residual {best_residual}")]
    SearchExhausted { best_residual: f64 },
}

/// Ways a claimed split can fail verification.
#[derive(Debug, thiserror::Error)]
pub enum SplitAuditError {
    #[error("wedge targets must be nonnegative with 2(alpha+beta+gamma) = total weight")]
    BadTargets,
    #[error("ray {0} is the zero vector")]
    ZeroRay(usize),
    #[error("ray {0} is not opposite ray {1}")]
    NotOpposite(usize, usize),
    #[error("rays {0} and {1} are not in strict counterclockwise order")]
    NotCounterclockwise(usize, usize),
    #[error("voter {0} has an empty or nonpositive portion list")]
    BadPortion(usize),
    #[error("portions of voter {voter} sum to {got} instead of its weight {want}")]
    PortionSum { voter: usize, got: Rat, want: Rat },
    #[error("voter {voter} is assigned to wedge {wedge} but lies outside it")]
    OutsideWedge { voter: usize, wedge: usize },
    #[error("wedge {wedge} carries weight {got}, target {want}")]
    WedgeMass { wedge: usize, got: Rat, want: Rat },
}

/// The six wedge targets in counterclockwise order.
pub fn wedge_targets(alpha: &Rat, beta: &Rat, gamma: &Rat) -> [Rat; 6] {
    [
        alpha.clone(),
        beta.clone(),
        gamma.clone(),
        alpha.clone(),
        beta.clone(),
        gamma.clone(),
    ]
}

fn targets_ok(set: &WeightedPointSet, alpha: &Rat, beta: &Rat, gamma: &Rat) -> bool {
    !alpha.is_negative()
        && !beta.is_negative()
        && !gamma.is_negative()
        && rat(2) * (alpha + beta + gamma) == *set.total()
}

/// Finds a six-way split with counterclockwise wedge weights
/// `alpha, beta, gamma, alpha, beta, gamma`, using the default budget.
pub fn six_split(
    set: &WeightedPointSet,
    alpha: &Rat,
    beta: &Rat,
    gamma: &Rat,
) -> Result<SixSplit, SixSplitError> {
    six_split_budgeted(set, alpha, beta, gamma, &SplitBudget::default())
}

/// [`six_split`] with an explicit search budget.
pub fn six_split_budgeted(
    set: &WeightedPointSet,
    alpha: &Rat,
    beta: &Rat,
    gamma: &Rat,
    budget: &SplitBudget,
) -> Result<SixSplit, SixSplitError> {
    if !targets_ok(set, alpha, beta, gamma) {
        return Err(SixSplitError::BadTargets);
    }
    let targets = (alpha.clone(), beta.clone(), gamma.clone());
    let tau = wedge_targets(alpha, beta, gamma);
    if set.total().is_zero() {
        return Ok(SixSplit {
            apex: Point::new(rat(0), rat(0)),
            rays: default_rays(),
            targets,
            portions: vec![Vec::new(); set.len()],
        });
    }

    // Floating mirror of the instance.
    let pf: Vec<(f64, f64, f64)> = set
        .points()
        .iter()
        .zip(set.weights())
        .map(|(p, w)| {
            let (x, y) = p.to_f64();
            (x, y, rat_to_f64(w))
        })
        .collect();
    let tau_f: [f64; 6] = std::array::from_fn(|j| rat_to_f64(&tau[j]));
    let w_half = rat_to_f64(set.total()) / 2.0;

    let mut rng = ChaCha8Rng::seed_from_u64(0x6a3f_9b2d);
    let mut best_residual = f64::INFINITY;
    let reserve = 12.min(budget.exact_checks / 4);
    let mut exact_left = budget.exact_checks.saturating_sub(reserve);
    let mut seen: HashSet<Point> = HashSet::new();

    let gate = 1e-6 * (1.0 + rat_to_f64(set.total()));

    // On small sets an exact attempt at every voter is cheaper than scanning.
    if set.len() <= 12 {
        for i in 0..set.len() {
            let apex = set.points()[i].clone();
            if !seen.insert(apex.clone()) {
                continue;
            }
            if let Some(split) = exact_split_at(set, &apex, &tau, &targets, None) {
                return Ok(split);
            }
        }
    } else {
        // Coincidences concentrate at voters, so they make natural apexes.
        // Check the ones the float residual clears, steered by its direction.
        let mut vr: Vec<(f64, f64, usize)> = (0..set.len())
            .map(|i| {
                let (score, phi) = residual_free_phi(&pf, &tau_f, w_half, (pf[i].0, pf[i].1));
                (score, phi, i)
            })
            .collect();
        vr.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        let cap = 24.min(exact_left / 2 + 1);
        let mut taken = 0usize;
        for &(score, phi, i) in &vr {
            if score > gate || taken >= cap || exact_left == 0 {
                best_residual = best_residual.min(score);
                break;
            }
            let apex = set.points()[i].clone();
            if !seen.insert(apex.clone()) {
                continue;
            }
            taken += 1;
            exact_left -= 1;
            let hint = (phi.cos(), phi.sin());
            if let Some(split) = exact_split_at(set, &apex, &tau, &targets, Some((hint, 12))) {
                return Ok(split);
            }
        }
    }
    for restart in 0..budget.restarts.max(1) {
        let theta_steps = match restart {
            0 => 48,
            1 => 96,
            2 => 192,
            _ => 192,
        };
        let regions = scan_halving_lines(&pf, &tau_f, w_half, theta_steps, budget.steps, &mut rng);
        if let Some(r) = regions.first() {
            best_residual = best_residual.min(r.score);
        }
        for region in regions.iter().take(12) {
            let mut cands = region_candidates(set, &pf, &tau_f, w_half, region.apex, region.span);
            cands.extend(incidence_apexes(set, &pf, region.apex, region.span));
            cands.extend(snapped_apexes(region.apex));
            cands.retain(|p| seen.insert(p.clone()));
            // Cheapest first: rank by the free-direction residual.
            let mut ranked: Vec<(f64, Point)> = cands
                .into_iter()
                .map(|p| {
                    let pf64 = p.to_f64();
                    (residual_free(&pf, &tau_f, w_half, pf64), p)
                })
                .collect();
            ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
            for (ci, (score, apex)) in ranked.into_iter().take(10).enumerate() {
                best_residual = best_residual.min(score);
                if exact_left == 0 || (ci > 0 && score > gate) {
                    break;
                }
                exact_left -= 1;
                let hint = (region.theta.cos(), region.theta.sin());
                if let Some(split) =
                    exact_split_at(set, &apex, &tau, &targets, Some((hint, 10)))
                {
                    return Ok(split);
                }
            }
            if exact_left == 0 {
                break;
            }
        }
        // One thorough unhinted attempt per pass at the most promising spot.
        if let Some(region) = regions.first() {
            if exact_left > 0 {
                exact_left -= 1;
                for apex in snapped_apexes(region.apex).into_iter().take(1) {
                    if let Some(split) = exact_split_at(set, &apex, &tau, &targets, None) {
                        return Ok(split);
                    }
                }
            }
        }
        // Once the first scan comes up dry, look for apexes pinned by two
        // voter pairs; fractional targets often admit nothing else.
        if restart == 0 && exact_left > 0 {
            let cands = crossing_apexes(set, &pf, &tau_f, w_half, 800, &mut rng);
            let mut ranked: Vec<(f64, Point)> = cands
                .into_iter()
                .filter(|p| seen.insert(p.clone()))
                .map(|p| {
                    let pf64 = p.to_f64();
                    (residual_free(&pf, &tau_f, w_half, pf64), p)
                })
                .collect();
            ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
            for (ci, (score, apex)) in ranked.into_iter().take(8).enumerate() {
                best_residual = best_residual.min(score);
                if exact_left == 0 || (ci > 0 && score > gate) {
                    break;
                }
                exact_left -= 1;
                if let Some(split) = exact_split_at(set, &apex, &tau, &targets, None) {
                    return Ok(split);
                }
            }
        }
        if exact_left == 0 {
            break;
        }
    }

    // Last resort: voters as apexes, using the reserved budget.
    exact_left += reserve;
    let mut ranked: Vec<(f64, usize)> = (0..set.len())
        .map(|i| (residual_free(&pf, &tau_f, w_half, (pf[i].0, pf[i].1)), i))
        .collect();
    ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    for (score, i) in ranked.into_iter().take(12.min(exact_left)) {
        best_residual = best_residual.min(score);
        let apex = set.points()[i].clone();
        if !seen.insert(apex.clone()) {
            continue;
        }
        if let Some(split) = exact_split_at(set, &apex, &tau, &targets, None) {
            return Ok(split);
        }
    }
    Err(SixSplitError::SearchExhausted { best_residual })
}

fn default_rays() -> [Dir; 6] {
    [
        (rat(1), rat(0)),
        (rat(1), rat(1)),
        (rat(0), rat(1)),
        (rat(-1), rat(0)),
        (rat(-1), rat(-1)),
        (rat(0), rat(-1)),
    ]
}

// ---------------------------------------------------------------------------
// Exact feasibility at a fixed apex.
// ---------------------------------------------------------------------------

struct Group {
    dir: Dir,
    mass: Rat,
    members: Vec<usize>,
}

struct Star {
    groups: Vec<Group>,
    apex_mass: Rat,
    apex_members: Vec<usize>,
}

fn build_star(set: &WeightedPointSet, apex: &Point) -> Star {
    let mut items: Vec<(Dir, usize)> = Vec::new();
    let mut apex_mass = Rat::zero();
    let mut apex_members = Vec::new();
    for (i, v) in set.points().iter().enumerate() {
        if v == apex {
            apex_mass += set.weight(i);
            apex_members.push(i);
        } else {
            let (dx, dy) = v.sub(apex);
            items.push(((dx, dy), i));
        }
    }
    items.sort_by(|a, b| dir_cmp(&a.0, &b.0));
    let mut groups: Vec<Group> = Vec::new();
    for (dir, i) in items {
        match groups.last_mut() {
            Some(g) if dir_cmp(&g.dir, &dir) == Ordering::Equal => {
                g.mass += set.weight(i);
                g.members.push(i);
            }
            _ => groups.push(Group { dir, mass: set.weight(i).clone(), members: vec![i] }),
        }
    }
    Star { groups, apex_mass, apex_members }
}

/// First-line direction candidates at an apex: every voter direction plus a
/// representative per gap, all taken modulo a half turn.
fn first_ray_candidates(star: &Star) -> Vec<Dir> {
    let mut e: Vec<Dir> = star
        .groups
        .iter()
        .map(|gr| {
            if crate::angles::half(&gr.dir) == 1 {
                opp(&gr.dir)
            } else {
                gr.dir.clone()
            }
        })
        .collect();
    e.sort_by(dir_cmp);
    e.dedup_by(|a, b| dir_cmp(a, b) == Ordering::Equal);
    let mut psi1: Vec<Dir> = Vec::new();
    if e.is_empty() {
        psi1.push((rat(1), rat(0)));
        return psi1;
    }
    for i in 0..e.len() {
        psi1.push(e[i].clone());
        let next = if i + 1 < e.len() { e[i + 1].clone() } else { opp(&e[0]) };
        let mut rep = between(&e[i], &next);
        if crate::angles::half(&rep) == 1 {
            rep = opp(&rep);
        }
        psi1.push(rep);
    }
    psi1
}

/// A candidate ray position in the open first half, in the merged
/// arrangement of first-half voter directions and antipodes of second-half
/// voter directions. `at1`/`at2` are masses exactly on the ray and its
/// antipode; `cum1`/`cum2` are prefix masses strictly before this position.
#[derive(Clone)]
struct Slot {
    dir: Dir,
    at1: Rat,
    at2: Rat,
    cum1: Rat,
    cum2: Rat,
}

struct HalfArrangement {
    m_r0: Rat,
    m_r3: Rat,
    side1_total: Rat,
    side2_total: Rat,
    slots: Vec<Slot>,
}

/// Splits the star by the line through `r0`, keying each second-half group
/// by its antipodal position so both halves share one arrangement, and lays
/// out the candidate ray slots: a gap before each event, the event itself,
/// and a trailing gap.
fn slot_arrangement(groups: &[Group], r0: &Dir) -> HalfArrangement {
    let r3 = opp(r0);
    let mut m_r0 = Rat::zero();
    let mut m_r3 = Rat::zero();
    let mut events: Vec<(Dir, Rat, Rat)> = Vec::new();
    for gr in groups {
        let c = cross(r0, &gr.dir);
        if c.is_zero() {
            if dot(r0, &gr.dir).is_positive() {
                m_r0 += &gr.mass;
            } else {
                m_r3 += &gr.mass;
            }
        } else if c.is_positive() {
            events.push((gr.dir.clone(), gr.mass.clone(), Rat::zero()));
        } else {
            events.push((opp(&gr.dir), Rat::zero(), gr.mass.clone()));
        }
    }
    // All positions sit in the open half turn past r0, where the cross
    // product is a total order; coincident positions merge.
    events.sort_by(|a, b| {
        let c = cross(&a.0, &b.0);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    });
    events.dedup_by(|next, prev| {
        if cross(&prev.0, &next.0).is_zero() {
            prev.1 += std::mem::take(&mut next.1);
            prev.2 += std::mem::take(&mut next.2);
            true
        } else {
            false
        }
    });
    let side1_total: Rat = events.iter().map(|e| e.1.clone()).sum();
    let side2_total: Rat = events.iter().map(|e| e.2.clone()).sum();
    let mut slots: Vec<Slot> = Vec::with_capacity(2 * events.len() + 1);
    let mut cum1 = Rat::zero();
    let mut cum2 = Rat::zero();
    for i in 0..=events.len() {
        let prev = if i == 0 { r0 } else { &events[i - 1].0 };
        let next = if i == events.len() { &r3 } else { &events[i].0 };
        slots.push(Slot {
            dir: between(prev, next),
            at1: Rat::zero(),
            at2: Rat::zero(),
            cum1: cum1.clone(),
            cum2: cum2.clone(),
        });
        if i < events.len() {
            slots.push(Slot {
                dir: events[i].0.clone(),
                at1: events[i].1.clone(),
                at2: events[i].2.clone(),
                cum1: cum1.clone(),
                cum2: cum2.clone(),
            });
            cum1 += &events[i].1;
            cum2 += &events[i].2;
        }
    }
    HalfArrangement { m_r0, m_r3, side1_total, side2_total, slots }
}

/// Attempts an exact split at the given apex. `hint` orders and limits the
/// first-line candidates by angular proximity to a direction.
fn exact_split_at(
    set: &WeightedPointSet,
    apex: &Point,
    tau: &[Rat; 6],
    targets: &(Rat, Rat, Rat),
    hint: Option<((f64, f64), usize)>,
) -> Option<SixSplit> {
    let star = build_star(set, apex);
    let g = &star.groups;

    let mut psi1 = first_ray_candidates(&star);
    if let Some(((hx, hy), limit)) = hint {
        let href = hy.atan2(hx);
        let key = |d: &Dir| -> f64 {
            let a = rat_to_f64(&d.1).atan2(rat_to_f64(&d.0));
            let mut delta = (a - href).abs() % std::f64::consts::PI;
            if delta > std::f64::consts::FRAC_PI_2 {
                delta = std::f64::consts::PI - delta;
            }
            delta
        };
        psi1.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(Ordering::Equal));
        psi1.truncate(limit);
    }

    let half_mass = &tau[0] + &tau[1] + &tau[2];
    for r0 in &psi1 {
        let r3 = opp(r0);
        let ha = slot_arrangement(g, r0);
        let (side1_total, side2_total) = (&ha.side1_total, &ha.side2_total);
        let (m_r0, m_r3) = (&ha.m_r0, &ha.m_r3);
        let slots = &ha.slots;

        // Halving feasibility of the first line, with all credits available.
        let flex_all = m_r0 + m_r3 + &star.apex_mass;
        if *side1_total > half_mass || half_mass > side1_total + &flex_all {
            continue;
        }

        // Candidate second rays: wedge-one and wedge-four windows must both
        // admit their targets. Both strict prefixes grow along the sweep.
        let mut psi2_cands: Vec<usize> = Vec::new();
        for (si, slot) in slots.iter().enumerate() {
            if slot.cum1 > tau[0] || slot.cum2 > tau[3] {
                break;
            }
            let a_hi = &slot.cum1 + m_r0 + &slot.at1 + &star.apex_mass;
            let b_hi = &slot.cum2 + m_r3 + &slot.at2 + &star.apex_mass;
            if tau[0] <= a_hi && tau[3] <= b_hi {
                psi2_cands.push(si);
            }
        }
        thin(&mut psi2_cands, 12);

        for &s2 in &psi2_cands {
            let slot2 = slots[s2].clone();
            let base1 = &slot2.cum1 + &slot2.at1;
            let base2 = &slot2.cum2 + &slot2.at2;

            // Candidate third rays: the remaining slots, plus a synthetic
            // trailing gap when the second ray took the last slot.
            let mut third: Vec<Slot> = slots[s2 + 1..].to_vec();
            if third.is_empty() {
                third.push(Slot {
                    dir: between(&slot2.dir, &r3),
                    at1: Rat::zero(),
                    at2: Rat::zero(),
                    cum1: slot2.cum1.clone(),
                    cum2: slot2.cum2.clone(),
                });
            }
            let mut psi3_cands: Vec<Slot> = Vec::new();
            for slot in &third {
                let w2_strict = &slot.cum1 - &base1;
                let w5_strict = &slot.cum2 - &base2;
                if w2_strict > tau[1] || w5_strict > tau[4] {
                    break;
                }
                let w2_hi = &w2_strict + &slot2.at1 + &slot.at1 + &star.apex_mass;
                let w5_hi = &w5_strict + &slot2.at2 + &slot.at2 + &star.apex_mass;
                if tau[1] > w2_hi || tau[4] > w5_hi {
                    continue;
                }
                // Windows for the remaining pair of wedges.
                let w3_strict = side1_total - &slot.cum1 - &slot.at1;
                let w6_strict = side2_total - &slot.cum2 - &slot.at2;
                let w3_hi = &w3_strict + &slot.at1 + m_r3 + &star.apex_mass;
                let w6_hi = &w6_strict + &slot.at2 + m_r0 + &star.apex_mass;
                if w3_strict > tau[2]
                    || tau[2] > w3_hi
                    || w6_strict > tau[5]
                    || tau[5] > w6_hi
                {
                    continue;
                }
                psi3_cands.push(slot.clone());
            }
            thin(&mut psi3_cands, 12);

            for slot3 in &psi3_cands {
                let rays: [Dir; 6] = [
                    r0.clone(),
                    slot2.dir.clone(),
                    slot3.dir.clone(),
                    r3.clone(),
                    opp(&slot2.dir),
                    opp(&slot3.dir),
                ];
                if let Some(split) = credit_flow(set, apex, &star, &rays, tau, targets) {
                    return Some(split);
                }
            }
        }
    }
    None
}

/// Keeps at most `cap` entries, evenly spread, preserving order.
fn thin<T>(v: &mut Vec<T>, cap: usize) {
    if v.len() <= cap {
        return;
    }
    let n = v.len();
    let mut keep = vec![false; n];
    for i in 0..cap {
        keep[i * (n - 1) / (cap - 1)] = true;
    }
    let mut it = keep.iter();
    v.retain(|_| *it.next().unwrap());
}

/// Decides boundary-credit feasibility for fixed rays via max flow and, on
/// success, extracts a per-voter assignment.
fn credit_flow(
    set: &WeightedPointSet,
    apex: &Point,
    star: &Star,
    rays: &[Dir; 6],
    tau: &[Rat; 6],
    targets: &(Rat, Rat, Rat),
) -> Option<SixSplit> {
    // Classify each group: exactly on some ray, or strictly inside a wedge.
    let mut on_ray: Vec<Vec<usize>> = vec![Vec::new(); 6];
    let mut strict: [Rat; 6] = std::array::from_fn(|_| Rat::zero());
    let mut in_wedge: Vec<Vec<usize>> = vec![Vec::new(); 6];
    'groups: for (gi, gr) in star.groups.iter().enumerate() {
        for j in 0..6 {
            if dir_cmp(&gr.dir, &rays[j]) == Ordering::Equal {
                on_ray[j].push(gi);
                continue 'groups;
            }
        }
        for j in 0..6 {
            let a = &rays[j];
            let b = &rays[(j + 1) % 6];
            if cross(a, &gr.dir).is_positive() && cross(&gr.dir, b).is_positive() {
                strict[j] += &gr.mass;
                in_wedge[j].push(gi);
                continue 'groups;
            }
        }
        unreachable!("group direction falls on no ray and in no wedge");
    }

    let mut deficits: [Rat; 6] = std::array::from_fn(|_| Rat::zero());
    for j in 0..6 {
        if strict[j] > tau[j] {
            return None;
        }
        deficits[j] = &tau[j] - &strict[j];
    }

    // Nodes: 0 source, 1..=6 rays, 7 apex, 8..=13 wedges, 14 sink.
    let mut net = FlowNet::new(15);
    let big: Rat = set.total() + rat(1);
    let mut ray_edges: Vec<Option<(EdgeId, EdgeId)>> = vec![None; 6];
    let mut total_flex = Rat::zero();
    for j in 0..6 {
        let mass: Rat = on_ray[j].iter().map(|&gi| star.groups[gi].mass.clone()).sum();
        if mass.is_positive() {
            net.add_edge(0, 1 + j, mass.clone());
            let ccw = net.add_edge(1 + j, 8 + j, big.clone());
            let cw = net.add_edge(1 + j, 8 + (j + 5) % 6, big.clone());
            ray_edges[j] = Some((ccw, cw));
            total_flex += mass;
        }
    }
    let mut apex_edges: Vec<EdgeId> = Vec::new();
    if star.apex_mass.is_positive() {
        net.add_edge(0, 7, star.apex_mass.clone());
        for j in 0..6 {
            apex_edges.push(net.add_edge(7, 8 + j, big.clone()));
        }
        total_flex += &star.apex_mass;
    }
    for (j, deficit) in deficits.iter().enumerate() {
        net.add_edge(8 + j, 14, deficit.clone());
    }
    if net.max_flow(0, 14) != total_flex {
        return None;
    }

    // Build per-voter portions.
    let mut portions: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); set.len()];
    for (j, wedge) in in_wedge.iter().enumerate() {
        for &gi in wedge {
            for &m in &star.groups[gi].members {
                portions[m].push((j, set.weight(m).clone()));
            }
        }
    }
    for j in 0..6 {
        let Some((ccw, cw)) = ray_edges[j] else { continue };
        let mut fills =
            [(8 + j, net.flow_on(ccw).clone()), (8 + (j + 5) % 6, net.flow_on(cw).clone())];
        let members: Vec<usize> =
            on_ray[j].iter().flat_map(|&gi| star.groups[gi].members.iter().copied()).collect();
        distribute(&mut portions, set, &members, &mut fills);
    }
    if !apex_edges.is_empty() {
        let mut fills: Vec<(usize, Rat)> =
            (0..6).map(|j| (8 + j, net.flow_on(apex_edges[j]).clone())).collect();
        distribute(&mut portions, set, &star.apex_members, &mut fills);
    }

    Some(SixSplit {
        apex: apex.clone(),
        rays: rays.clone(),
        targets: targets.clone(),
        portions,
    })
}

/// Greedily fills wedge quotas (`fills` pairs node index with remaining
/// quota, node `8 + j` standing for wedge `j`) from the given voters,
/// splitting a voter across quotas where needed.
fn distribute(
    portions: &mut [Vec<(usize, Rat)>],
    set: &WeightedPointSet,
    members: &[usize],
    fills: &mut [(usize, Rat)],
) {
    let mut fi = 0;
    for &m in members {
        let mut left = set.weight(m).clone();
        while left.is_positive() {
            debug_assert!(fi < fills.len(), "flow conservation guarantees enough quota");
            let (node, quota) = &mut fills[fi];
            if quota.is_positive() {
                let take = if *quota < left { quota.clone() } else { left.clone() };
                portions[m].push((*node - 8, take.clone()));
                *quota -= &take;
                left -= &take;
            }
            if !quota.is_positive() && left.is_positive() {
                fi += 1;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Verification.
// ---------------------------------------------------------------------------

/// Checks a claimed split exactly: targets, ray structure, assignment
/// geometry, and wedge weights.
#[allow(clippy::result_large_err)]
pub fn verify_six_split(set: &WeightedPointSet, split: &SixSplit) -> Result<(), SplitAuditError> {
    let (alpha, beta, gamma) = &split.targets;
    if alpha.is_negative()
        || beta.is_negative()
        || gamma.is_negative()
        || rat(2) * (alpha + beta + gamma) != *set.total()
    {
        return Err(SplitAuditError::BadTargets);
    }
    for j in 0..6 {
        let r = &split.rays[j];
        if r.0.is_zero() && r.1.is_zero() {
            return Err(SplitAuditError::ZeroRay(j));
        }
    }
    for j in 0..3 {
        let r = &split.rays[j];
        let o = &split.rays[j + 3];
        if !cross(r, o).is_zero() || !dot(r, o).is_negative() {
            return Err(SplitAuditError::NotOpposite(j, j + 3));
        }
    }
    for j in 0..6 {
        let a = &split.rays[j];
        let b = &split.rays[(j + 1) % 6];
        if !cross(a, b).is_positive() {
            return Err(SplitAuditError::NotCounterclockwise(j, (j + 1) % 6));
        }
    }
    if split.portions.len() != set.len() {
        return Err(SplitAuditError::BadPortion(split.portions.len().min(set.len())));
    }
    let mut wedge_mass: [Rat; 6] = std::array::from_fn(|_| Rat::zero());
    for (i, shares) in split.portions.iter().enumerate() {
        if shares.is_empty() || shares.iter().any(|(_, m)| !m.is_positive()) {
            return Err(SplitAuditError::BadPortion(i));
        }
        let total: Rat = shares.iter().map(|(_, m)| m.clone()).sum();
        if total != *set.weight(i) {
            return Err(SplitAuditError::PortionSum {
                voter: i,
                got: total,
                want: set.weight(i).clone(),
            });
        }
        let v = &set.points()[i];
        let at_apex = *v == split.apex;
        for (j, m) in shares {
            wedge_mass[*j] += m;
            if at_apex {
                continue;
            }
            let d: Dir = v.sub(&split.apex);
            let a = &split.rays[*j];
            let b = &split.rays[(*j + 1) % 6];
            if cross(a, &d).is_negative() || cross(&d, b).is_negative() {
                return Err(SplitAuditError::OutsideWedge { voter: i, wedge: *j });
            }
        }
    }
    let tau = wedge_targets(alpha, beta, gamma);
    for j in 0..6 {
        if wedge_mass[j] != tau[j] {
            return Err(SplitAuditError::WedgeMass {
                wedge: j,
                got: wedge_mass[j].clone(),
                want: tau[j].clone(),
            });
        }
    }
    Ok(())
}

/// Exact wedge weights carried by the split's assignment.
pub fn wedge_masses(split: &SixSplit) -> [Rat; 6] {
    let mut out: [Rat; 6] = std::array::from_fn(|_| Rat::zero());
    for shares in &split.portions {
        for (j, m) in shares {
            out[*j] += m;
        }
    }
    out
}

/// The weighted voter population of each wedge under the split's assignment.
pub fn wedge_subsets(set: &WeightedPointSet, split: &SixSplit) -> [Vec<(Point, Rat)>; 6] {
    let mut out: [Vec<(Point, Rat)>; 6] = Default::default();
    for (i, shares) in split.portions.iter().enumerate() {
        for (j, m) in shares {
            out[*j].push((set.points()[i].clone(), m.clone()));
        }
    }
    out
}

/// Which wedge sectors the open halfplane `normal . x > offset` meets, or
/// `None` if the halfplane contains the apex (where the consecutive-wedge
/// bound is vacuous). A sector is met exactly when some direction strictly
/// entering the halfplane exists inside its closed angular span.
pub fn halfplane_wedges(split: &SixSplit, normal: &Dir, offset: &Rat) -> Option<[bool; 6]> {
    let at_apex = &normal.0 * &split.apex.x + &normal.1 * &split.apex.y;
    if at_apex > *offset {
        return None;
    }
    let mut out = [false; 6];
    for (j, hit) in out.iter_mut().enumerate() {
        let a = &split.rays[j];
        let b = &split.rays[(j + 1) % 6];
        *hit = dot(normal, a).is_positive()
            || dot(normal, b).is_positive()
            || (cross(a, normal).is_positive() && cross(normal, b).is_positive());
    }
    Some(out)
}

/// True when the met wedges fit inside four consecutive ones, equivalently
/// when at least two consecutive wedges are untouched. Every halfplane
/// avoiding the apex satisfies this.
pub fn four_consecutive(flags: &[bool; 6]) -> bool {
    (0..6).any(|j| !flags[j] && !flags[(j + 1) % 6])
}

// ---------------------------------------------------------------------------
// Floating-point search over halving lines.
// ---------------------------------------------------------------------------

const FEPS: f64 = 1e-9;

/// Angular sweep data at a fixed apex and first-line direction: merged
/// events in the open first half with prefix masses per side.
/// Two voters antipodal through the apex land at the same position; the
/// split search pins apexes exactly so that coincidence is the common case,
/// and the ray there must see both sides as one flexible group.
const MERGE_EPS: f64 = 1e-7;

struct FSweep {
    /// Merged events: (position, side-one mass, side-two mass), by position.
    ev: Vec<(f64, f64, f64)>,
    /// Raw (position, voter index) pairs behind the events.
    atoms: Vec<(f64, usize)>,
    cum1: Vec<f64>,
    cum2: Vec<f64>,
    m_r0: f64,
    m_r3: f64,
    apexm: f64,
    s1: f64,
    s2: f64,
    on_r0: Vec<usize>,
    on_r3: Vec<usize>,
}

fn build_fsweep(pf: &[(f64, f64, f64)], p: (f64, f64), phi: f64) -> FSweep {
    let pi = std::f64::consts::PI;
    let mut raw: Vec<(f64, f64, f64, usize)> = Vec::with_capacity(pf.len());
    let (mut m_r0, mut m_r3, mut apexm) = (0.0, 0.0, 0.0);
    let mut on_r0 = Vec::new();
    let mut on_r3 = Vec::new();
    for (i, &(x, y, w)) in pf.iter().enumerate() {
        let (dx, dy) = (x - p.0, y - p.1);
        if dx == 0.0 && dy == 0.0 {
            apexm += w;
            continue;
        }
        let mut d = (dy.atan2(dx) - phi) % (2.0 * pi);
        if d < -pi {
            d += 2.0 * pi;
        }
        if d >= pi {
            d -= 2.0 * pi;
        }
        if d.abs() < FEPS {
            m_r0 += w;
            on_r0.push(i);
        } else if (d.abs() - pi).abs() < FEPS {
            m_r3 += w;
            on_r3.push(i);
        } else if d > 0.0 {
            raw.push((d, w, 0.0, i));
        } else {
            raw.push((d + pi, 0.0, w, i));
        }
    }
    raw.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    let mut ev: Vec<(f64, f64, f64)> = Vec::with_capacity(raw.len());
    let mut atoms: Vec<(f64, usize)> = Vec::with_capacity(raw.len());
    for &(d, a1, a2, i) in &raw {
        atoms.push((d, i));
        match ev.last_mut() {
            Some(last) if d - last.0 <= MERGE_EPS => {
                last.1 += a1;
                last.2 += a2;
            }
            _ => ev.push((d, a1, a2)),
        }
    }
    let mut cum1 = Vec::with_capacity(ev.len() + 1);
    let mut cum2 = Vec::with_capacity(ev.len() + 1);
    cum1.push(0.0);
    cum2.push(0.0);
    for e in &ev {
        cum1.push(cum1.last().unwrap() + e.1);
        cum2.push(cum2.last().unwrap() + e.2);
    }
    let s1 = *cum1.last().unwrap();
    let s2 = *cum2.last().unwrap();
    FSweep { ev, atoms, cum1, cum2, m_r0, m_r3, apexm, s1, s2, on_r0, on_r3 }
}

fn interval_dist(x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo {
        lo - x
    } else if x > hi {
        x - hi
    } else {
        0.0
    }
}

fn signed_interval_dist(x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo {
        x - lo
    } else if x > hi {
        x - hi
    } else {
        0.0
    }
}

/// Infeasibility estimate at a fixed apex and first-line direction.
/// `pen` collects one-sided requirements that some ray choice must satisfy;
/// `r1`/`r2` are signed misses of the two opposite-side wedge targets.
struct Resid {
    pen: f64,
    r1: f64,
    r2: f64,
}

impl Resid {
    fn total(&self) -> f64 {
        self.pen + self.r1.abs() + self.r2.abs()
    }
}

/// Slot access helper: slot `2*i` is the gap before event `i`, slot `2*i+1`
/// the event itself; the final gap is slot `2*len`.
fn slot_fields(sw: &FSweep, s: usize) -> (f64, f64, f64, f64) {
    let i = s / 2;
    if s.is_multiple_of(2) {
        (sw.cum1[i], sw.cum2[i], 0.0, 0.0)
    } else {
        (sw.cum1[i], sw.cum2[i], sw.ev[i].1, sw.ev[i].2)
    }
}

/// Third-ray sweep from a fixed second-ray slot: the least achievable sum of
/// the deeper wedge penalties, the signed wedge-five miss attaining it, and
/// the slot doing so.
fn f_third_sweep(sw: &FSweep, tau: &[f64; 6], s2: usize) -> (f64, f64, usize) {
    let nslots = 2 * sw.ev.len() + 1;
    let (b1, b2, a1s, a2s) = slot_fields(sw, s2);
    let base1 = b1 + a1s;
    let base2 = b2 + a2s;
    let mut fallback = f64::INFINITY;
    let mut best: Option<(f64, f64, usize)> = None;
    for s in s2 + 1..nslots + 1 {
        // Slot `nslots` is the synthetic trailing gap.
        let (c1, c2, a1, a2) = if s < nslots {
            slot_fields(sw, s)
        } else {
            (sw.s1, sw.s2, 0.0, 0.0)
        };
        let w2 = c1 - base1;
        if w2 > tau[1] + FEPS {
            break;
        }
        let d2 = interval_dist(tau[1], w2, w2 + a1s + a1 + sw.apexm);
        fallback = fallback.min(d2 + tau[4].max(FEPS));
        if d2 <= FEPS {
            let w5 = c2 - base2;
            let miss = signed_interval_dist(tau[4], w5, w5 + a2s + a2 + sw.apexm);
            let w3 = sw.s1 - c1 - a1;
            let w6 = sw.s2 - c2 - a2;
            let pen3 = interval_dist(tau[2], w3, w3 + a1 + sw.m_r3 + sw.apexm);
            let pen6 = interval_dist(tau[5], w6, w6 + a2 + sw.m_r0 + sw.apexm);
            // A ray's credit is shared by its two wedges, so windows alone
            // overpromise. Check joint supply against demand for every wedge
            // subset; single wedges and five-wedge sets reduce to the window
            // checks above, leaving sizes two through four.
            let ints = [b1, w2, w3, b2, w5, w6];
            let caps = [sw.m_r0, a1s, a1, sw.m_r3, a2s, a2];
            let mut hall = 0.0f64;
            for mask in 0u32..64 {
                if !(2..=4).contains(&mask.count_ones()) {
                    continue;
                }
                let mut demand = 0.0;
                let mut supply = sw.apexm;
                for j in 0..6 {
                    if mask & (1 << j) != 0 {
                        demand += tau[j] - ints[j];
                    }
                    if mask & (1 << j) != 0 || mask & (1 << ((j + 5) % 6)) != 0 {
                        supply += caps[j];
                    }
                }
                hall = hall.max(demand - supply);
            }
            let pen = pen3 + pen6 + (hall - FEPS).max(0.0);
            if best.is_none_or(|(bp, bm, _): (f64, f64, usize)| pen + miss.abs() < bp + bm.abs()) {
                best = Some((pen, miss, s));
            }
        }
    }
    match best {
        Some(b) => b,
        None => (fallback.min(tau[1] + tau[4]).max(FEPS), tau[4].max(FEPS), s2 + 1),
    }
}

/// Residual plus the slot pair attaining it, for incidence extraction.
fn f_resid_slots(sw: &FSweep, tau: &[f64; 6], w_half: f64) -> (Resid, Option<(usize, usize)>) {
    let nslots = 2 * sw.ev.len() + 1;
    let pen_half = interval_dist(w_half, sw.s1, sw.s1 + sw.m_r0 + sw.m_r3 + sw.apexm);

    // Second-ray sweep: collect slots whose wedge-one window admits tau[0],
    // with the signed wedge-four miss of each. The miss flips sign as
    // windows slide past the target, which the scan uses to bracket roots.
    let mut pen1 = f64::INFINITY;
    let mut elig: Vec<(usize, f64)> = Vec::new();
    for s in 0..nslots {
        let (c1, c2, a1, a2) = slot_fields(sw, s);
        if c1 > tau[0] + FEPS {
            break;
        }
        let d1 = interval_dist(tau[0], c1, c1 + sw.m_r0 + a1 + sw.apexm);
        pen1 = pen1.min(d1);
        if d1 <= FEPS {
            let miss = signed_interval_dist(tau[3], c2, c2 + sw.m_r3 + a2 + sw.apexm);
            elig.push((s, miss));
        }
    }
    if pen1 == f64::INFINITY {
        pen1 = tau[0];
    }
    if elig.is_empty() {
        let r = tau[3].max(FEPS);
        return (Resid { pen: pen_half + pen1 + tau[1] + tau[4], r1: r, r2: r }, None);
    }

    // Descend into the best dozen second rays and keep the cheapest overall.
    elig.sort_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap_or(Ordering::Equal));
    let mut best: Option<(f64, f64, f64, usize, usize)> = None;
    for &(s, miss4) in elig.iter().take(12) {
        let (deep_pen, miss5, s3) = f_third_sweep(sw, tau, s);
        let total = miss4.abs() + deep_pen + miss5.abs();
        if best.is_none_or(|(bt, ..)| total < bt) {
            best = Some((total, miss4, miss5, s, s3));
        }
        if total <= 0.0 {
            break;
        }
    }
    let (total, r1, r2, s2, s3) = best.unwrap();
    let deep = total - r1.abs() - r2.abs();
    (Resid { pen: pen_half + pen1 + deep.max(0.0), r1, r2 }, Some((s2, s3)))
}

fn f_resid(sw: &FSweep, tau: &[f64; 6], w_half: f64) -> Resid {
    f_resid_slots(sw, tau, w_half).0
}

/// Best residual over all first-line directions at an apex.
fn residual_free(pf: &[(f64, f64, f64)], tau_f: &[f64; 6], w_half: f64, p: (f64, f64)) -> f64 {
    residual_free_phi(pf, tau_f, w_half, p).0
}

/// Least residual over first-line directions, and the direction attaining it.
fn residual_free_phi(
    pf: &[(f64, f64, f64)],
    tau_f: &[f64; 6],
    w_half: f64,
    p: (f64, f64),
) -> (f64, f64) {
    let mut angles: Vec<f64> = Vec::with_capacity(pf.len());
    for &(x, y, _) in pf {
        let (dx, dy) = (x - p.0, y - p.1);
        if dx != 0.0 || dy != 0.0 {
            let mut a = dy.atan2(dx) % std::f64::consts::PI;
            if a < 0.0 {
                a += std::f64::consts::PI;
            }
            angles.push(a);
        }
    }
    if angles.is_empty() {
        return (0.0, 0.0);
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    angles.dedup_by(|a, b| (*a - *b).abs() < FEPS);
    let mut cands: Vec<f64> = Vec::with_capacity(2 * angles.len());
    for i in 0..angles.len() {
        cands.push(angles[i]);
        let next =
            if i + 1 < angles.len() { angles[i + 1] } else { angles[0] + std::f64::consts::PI };
        cands.push(0.5 * (angles[i] + next));
    }
    let mut best = (f64::INFINITY, cands[0]);
    for &phi in &cands {
        let score = f_resid(&build_fsweep(pf, p, phi), tau_f, w_half).total();
        if score < best.0 {
            best = (score, phi);
        }
        if best.0 <= 0.0 {
            break;
        }
    }
    best
}

/// Apexes forced by ray-atom incidences near an estimate. Fractional targets
/// pin each ray against a voter, so the true apex sits where lines through
/// those voters cross. Re-derives the winning slot pair of the float
/// residual, gathers the voters each ray brushes against, and intersects the
/// lines they determine.
fn region_candidates(
    set: &WeightedPointSet,
    pf: &[(f64, f64, f64)],
    tau_f: &[f64; 6],
    w_half: f64,
    q: (f64, f64),
    span: f64,
) -> Vec<Point> {
    let pi = std::f64::consts::PI;
    let mut angles: Vec<f64> = Vec::with_capacity(pf.len());
    for &(x, y, _) in pf {
        let (dx, dy) = (x - q.0, y - q.1);
        if dx != 0.0 || dy != 0.0 {
            let mut a = dy.atan2(dx) % pi;
            if a < 0.0 {
                a += pi;
            }
            angles.push(a);
        }
    }
    if angles.is_empty() {
        return Vec::new();
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    angles.dedup_by(|a, b| (*a - *b).abs() < FEPS);
    let mut phis: Vec<f64> = Vec::with_capacity(2 * angles.len());
    for i in 0..angles.len() {
        phis.push(angles[i]);
        let next = if i + 1 < angles.len() { angles[i + 1] } else { angles[0] + pi };
        phis.push(0.5 * (angles[i] + next));
    }
    let mut best: Option<(f64, f64, usize, usize)> = None;
    for &phi in &phis {
        let sw = build_fsweep(pf, q, phi);
        let (r, slots) = f_resid_slots(&sw, tau_f, w_half);
        if let Some((s2, s3)) = slots {
            let t = r.total();
            if best.as_ref().is_none_or(|&(bt, ..)| t < bt) {
                best = Some((t, phi, s2, s3));
            }
        }
    }
    let (_, phi, s2, s3) = match best {
        Some(b) => b,
        None => return Vec::new(),
    };
    let sw = build_fsweep(pf, q, phi);

    // Angular slack a voter can have while still being the pinned one: the
    // apex estimate is off by up to the sample spacing, which subtends a
    // larger angle the closer the voter sits.
    let ang_tol = |i: usize| -> f64 {
        let (x, y, _) = pf[i];
        let dist = ((x - q.0).powi(2) + (y - q.1).powi(2)).sqrt().max(1e-9);
        (4.0 * span / dist).clamp(1e-4, 0.4)
    };

    // Voters brushing the halving line, nearest first. A voter on either ray
    // of the line, or an event within tolerance of ray zero or ray three,
    // qualifies; side-two events store the antipode of their true direction.
    let mut near_line: Vec<(f64, usize)> = Vec::new();
    for &i in sw.on_r0.iter().chain(sw.on_r3.iter()) {
        near_line.push((0.0, i));
    }
    for &(d, i) in &sw.atoms {
        let delta = d.min(pi - d);
        if delta < ang_tol(i) {
            near_line.push((delta, i));
        }
    }
    near_line.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    near_line.truncate(4);

    // Voters brushing the ray in a given slot. Every qualifying voter lies
    // on one line through the apex regardless of side, so any pair of them
    // determines that line.
    let m = sw.ev.len();
    let slot_pos = |s: usize| -> f64 {
        if s >= 2 * m {
            if m == 0 {
                0.5 * pi
            } else {
                0.5 * (sw.ev[m - 1].0 + pi)
            }
        } else if s % 2 == 1 {
            sw.ev[s / 2].0
        } else {
            let i = s / 2;
            let lo = if i == 0 { 0.0 } else { sw.ev[i - 1].0 };
            let hi = if i < m { sw.ev[i].0 } else { pi };
            0.5 * (lo + hi)
        }
    };
    let slot_atoms = |s: usize| -> Vec<(f64, usize)> {
        let pos = slot_pos(s);
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &(d, i) in &sw.atoms {
            let delta = (d - pos).abs().min(pi - (d - pos).abs());
            if delta < ang_tol(i) {
                out.push((delta, i));
            }
        }
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        out.truncate(4);
        out
    };

    let pair_up = |fam: &[(f64, usize)]| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..fam.len() {
            for b in a + 1..fam.len() {
                if fam[a].1 != fam[b].1 {
                    out.push((fam[a].1, fam[b].1));
                }
            }
        }
        out.truncate(6);
        out
    };
    let fam1 = pair_up(&near_line);
    let fam2 = pair_up(&slot_atoms(s2));
    let fam3 = pair_up(&slot_atoms(s3));

    let mut out: Vec<Point> = Vec::new();
    let mut cross = |fa: &[(usize, usize)], fb: &[(usize, usize)]| {
        for &(i1, j1) in fa {
            for &(i2, j2) in fb {
                if out.len() >= 36 {
                    return;
                }
                if (i1, j1) == (i2, j2) || (i1, j1) == (j2, i2) {
                    continue;
                }
                if let Some(p) = line_intersection_f64(pf, i1, j1, i2, j2) {
                    let d = ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt();
                    if d > (6.0 * span).max(1e-6) {
                        continue;
                    }
                } else {
                    continue;
                }
                if let Some(p) = rational_intersection(set, i1, j1, i2, j2) {
                    if !out.contains(&p) {
                        out.push(p);
                    }
                }
            }
        }
    };
    cross(&fam1, &fam2);
    cross(&fam1, &fam3);
    cross(&fam2, &fam3);
    out
}

/// A promising apex estimate from the halving-line scan.
struct Region {
    score: f64,
    apex: (f64, f64),
    theta: f64,
    /// Local length scale for candidate generation.
    span: f64,
}

/// Scans apexes over weight-halving lines on a direction grid, returning
/// low-residual regions sorted best first.
fn scan_halving_lines(
    pf: &[(f64, f64, f64)],
    tau_f: &[f64; 6],
    w_half: f64,
    theta_steps: usize,
    step_budget: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Region> {
    let pi = std::f64::consts::PI;
    let jitter: f64 = rng.gen_range(0.0..1.0);
    let mut regions: Vec<Region> = Vec::new();
    let mut steps_used = 0usize;

    for k in 0..theta_steps {
        if steps_used >= step_budget {
            break;
        }
        let theta = (k as f64 + jitter) * pi / theta_steps as f64;
        let u = (theta.cos(), theta.sin());
        let nrm = (-u.1, u.0);
        // Weight-halving offsets along the normal direction.
        let mut proj: Vec<(f64, f64)> = pf.iter().map(|&(x, y, w)| (nrm.0 * x + nrm.1 * y, w)).collect();
        proj.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        let mut offsets: Vec<f64> = Vec::new();
        let mut acc = 0.0;
        for i in 0..proj.len() {
            let before = acc;
            acc += proj[i].1;
            if before < w_half + FEPS && w_half < acc + FEPS {
                offsets.push(proj[i].0);
                // A boundary tie admits any offset up to the next voter.
                if (acc - w_half).abs() < FEPS && i + 1 < proj.len() {
                    offsets.push(0.5 * (proj[i].0 + proj[i + 1].0));
                }
            }
        }
        offsets.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

        for &c in &offsets {
            let anchor = (c * nrm.0, c * nrm.1);
            // Apex samples along the line: voter projections plus midpoints.
            let mut ts: Vec<f64> = pf.iter().map(|&(x, y, _)| u.0 * (x - anchor.0) + u.1 * (y - anchor.1)).collect();
            ts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            ts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            let span = (ts.last().unwrap_or(&1.0) - ts.first().unwrap_or(&0.0)).max(1e-6);
            let mut samples: Vec<f64> = Vec::with_capacity(2 * ts.len() + 2);
            samples.push(ts.first().unwrap_or(&0.0) - 0.05 * span);
            for i in 0..ts.len() {
                samples.push(ts[i]);
                if i + 1 < ts.len() {
                    samples.push(0.5 * (ts[i] + ts[i + 1]));
                }
            }
            samples.push(ts.last().unwrap_or(&0.0) + 0.05 * span);

            let local_span = span / (ts.len().max(2) as f64);
            let eval = |t: f64| -> Resid {
                let p = (anchor.0 + t * u.0, anchor.1 + t * u.1);
                let sw = build_fsweep(pf, p, theta);
                f_resid(&sw, tau_f, w_half)
            };
            let mut prev: Option<(f64, Resid)> = None;
            for &t in &samples {
                if steps_used >= step_budget {
                    break;
                }
                steps_used += 1;
                let r = eval(t);
                regions.push(Region {
                    score: r.total(),
                    apex: (anchor.0 + t * u.0, anchor.1 + t * u.1),
                    theta,
                    span: local_span,
                });
                // A sign change of either miss between neighbours brackets a
                // root crossing; bisect it down before recording a region.
                if let Some((pt, pr)) = &prev {
                    let flip1 = pr.r1.signum() * r.r1.signum() < 0.0;
                    let flip2 = pr.r2.signum() * r.r2.signum() < 0.0;
                    if pr.pen <= FEPS && r.pen <= FEPS && (flip1 || flip2) {
                        let key = |x: &Resid| if flip1 { x.r1 } else { x.r2 };
                        let (mut a, mut sa) = (*pt, key(pr));
                        let mut b = t;
                        let mut best = if pr.total() < r.total() {
                            (a, pr.total())
                        } else {
                            (b, r.total())
                        };
                        for _ in 0..14 {
                            if steps_used >= step_budget {
                                break;
                            }
                            steps_used += 1;
                            let m = 0.5 * (a + b);
                            let rm = eval(m);
                            if rm.total() < best.1 {
                                best = (m, rm.total());
                            }
                            if sa.signum() * key(&rm).signum() < 0.0 {
                                b = m;
                            } else {
                                a = m;
                                sa = key(&rm);
                            }
                        }
                        // The capture radius stays at the sample spacing: the
                        // two-dimensional root can sit a full cell away along
                        // the curve this bracket pinned.
                        regions.push(Region {
                            score: 0.5 * best.1,
                            apex: (anchor.0 + best.0 * u.0, anchor.1 + best.0 * u.1),
                            theta,
                            span: local_span,
                        });
                    }
                }
                prev = Some((t, r));
            }
        }
    }
    regions.sort_by(|a, b| a.score.partial_cmp(&b.score).unwrap_or(Ordering::Equal));
    regions
}

/// Exact apex candidates near an estimate: intersections of lines through
/// nearly-antipodal voter pairs, the geometry that lets rays pick up the
/// boundary credit needed for fractional targets.
fn incidence_apexes(
    set: &WeightedPointSet,
    pf: &[(f64, f64, f64)],
    q: (f64, f64),
    radius: f64,
) -> Vec<Point> {
    let mut angs: Vec<(f64, usize)> = Vec::with_capacity(pf.len());
    for (i, &(x, y, _)) in pf.iter().enumerate() {
        let (dx, dy) = (x - q.0, y - q.1);
        if dx.abs() + dy.abs() > 1e-12 {
            angs.push((dy.atan2(dx), i));
        }
    }
    angs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    let pi = std::f64::consts::PI;

    // Pairs whose connecting line passes close to the estimate.
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for &(a, i) in &angs {
        let target = if a > 0.0 { a - pi } else { a + pi };
        for &(b, j) in &angs {
            if j <= i {
                continue;
            }
            let mut delta = (b - target).abs();
            if delta > pi {
                delta = 2.0 * pi - delta;
            }
            if delta < 0.3 {
                pairs.push((delta, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    pairs.truncate(18);

    let mut out: Vec<Point> = Vec::new();
    let lines: Vec<(usize, usize)> = pairs.iter().map(|&(_, i, j)| (i, j)).collect();
    for a in 0..lines.len() {
        for b in a + 1..lines.len() {
            if out.len() >= 40 {
                break;
            }
            let (i1, j1) = lines[a];
            let (i2, j2) = lines[b];
            // Quick reject in floats before the exact solve.
            if let Some(p) = line_intersection_f64(pf, i1, j1, i2, j2) {
                let d = ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt();
                if d > (radius * 4.0).max(1e-6) {
                    continue;
                }
            } else {
                continue;
            }
            if let Some(p) = rational_intersection(set, i1, j1, i2, j2) {
                out.push(p);
            }
        }
    }
    out
}

/// Candidate apexes at crossings of two voter-pair lines, for targets
/// whose fractional parts no subset of whole voters can reach. Such
/// targets force boundary voters to split, a line can only carry a split
/// if it levels the free weight on its two sides up to its own on-line
/// mass, and thirds-like deficits in every wedge need two such lines
/// crossed strictly between their defining pairs. Pairs are screened by
/// side sums, crossings by their two uncut opposite sectors.
fn crossing_apexes(
    set: &WeightedPointSet,
    pf: &[(f64, f64, f64)],
    tau_f: &[f64; 6],
    w_half: f64,
    cap: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Point> {
    let n = pf.len();
    let side_eps = 1e-9 * (1.0 + 2.0 * w_half);

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (x1, y1, _) = pf[i];
            let (x2, y2, _) = pf[j];
            let (dx, dy) = (x2 - x1, y2 - y1);
            let scale = 1e-9 * (dx.abs() + dy.abs());
            let (mut sa, mut sb) = (0.0, 0.0);
            for (k, &(x, y, w)) in pf.iter().enumerate() {
                if k == i || k == j {
                    continue;
                }
                let s = dx * (y - y1) - dy * (x - x1);
                let tol = scale * (1.0 + (x - x1).abs() + (y - y1).abs());
                if s > tol {
                    sa += w;
                } else if s < -tol {
                    sb += w;
                }
            }
            // The on-line mass is total - sa - sb, so sb within the half
            // already keeps the halving window sa..sa+on over it.
            if sa <= w_half + side_eps && sb <= w_half + side_eps {
                pairs.push((i, j));
            }
        }
    }
    if pairs.len() > 2000 {
        for i in 0..2000 {
            let j = rng.gen_range(i..pairs.len());
            pairs.swap(i, j);
        }
        pairs.truncate(2000);
    }

    let sector_ok = |i1: usize, j1: usize, i2: usize, j2: usize| -> bool {
        let (x1, y1, _) = pf[i1];
        let (x2, y2, _) = pf[j1];
        let (d1x, d1y) = (x2 - x1, y2 - y1);
        let (x3, y3, _) = pf[i2];
        let (x4, y4, _) = pf[j2];
        let (d2x, d2y) = (x4 - x3, y4 - y3);
        let scale1 = 1e-9 * (d1x.abs() + d1y.abs());
        let scale2 = 1e-9 * (d2x.abs() + d2y.abs());
        let mut sector = [[0.0f64; 2]; 2];
        let mut slack = 0.0;
        for &(x, y, w) in pf {
            let s1 = d1x * (y - y1) - d1y * (x - x1);
            let s2 = d2x * (y - y3) - d2y * (x - x3);
            let t1 = scale1 * (1.0 + (x - x1).abs() + (y - y1).abs());
            let t2 = scale2 * (1.0 + (x - x3).abs() + (y - y3).abs());
            if s1.abs() <= t1 || s2.abs() <= t2 {
                slack += w;
            } else {
                sector[usize::from(s1 > 0.0)][usize::from(s2 > 0.0)] += w;
            }
        }
        let fits = |u: f64, v: f64| {
            (0..3).any(|x| {
                let t = tau_f[x];
                u >= t - slack - side_eps
                    && u <= t + side_eps
                    && v >= t - slack - side_eps
                    && v <= t + side_eps
            })
        };
        fits(sector[0][0], sector[1][1]) || fits(sector[0][1], sector[1][0])
    };

    let mut out: Vec<Point> = Vec::new();
    for a in 0..pairs.len() {
        for b in a + 1..pairs.len() {
            let (i1, j1) = pairs[a];
            let (i2, j2) = pairs[b];
            if i1 == i2 || i1 == j2 || j1 == i2 || j1 == j2 {
                continue;
            }
            let (x1, y1, _) = pf[i1];
            let (x2, y2, _) = pf[j1];
            let (x3, y3, _) = pf[i2];
            let (x4, y4, _) = pf[j2];
            let (d1x, d1y) = (x2 - x1, y2 - y1);
            let (d2x, d2y) = (x4 - x3, y4 - y3);
            let den = d1x * d2y - d1y * d2x;
            if den.abs() < 1e-15 {
                continue;
            }
            let s = ((x3 - x1) * d2y - (y3 - y1) * d2x) / den;
            let t = ((x3 - x1) * d1y - (y3 - y1) * d1x) / den;
            if !(1e-9..=1.0 - 1e-9).contains(&s) || !(1e-9..=1.0 - 1e-9).contains(&t) {
                continue;
            }
            if !sector_ok(i1, j1, i2, j2) {
                continue;
            }
            if let Some(p) = rational_intersection(set, i1, j1, i2, j2) {
                out.push(p);
            }
        }
    }
    if out.len() > cap {
        for i in 0..cap {
            let j = rng.gen_range(i..out.len());
            out.swap(i, j);
        }
        out.truncate(cap);
    }
    out
}

fn line_intersection_f64(
    pf: &[(f64, f64, f64)],
    i1: usize,
    j1: usize,
    i2: usize,
    j2: usize,
) -> Option<(f64, f64)> {
    let (x1, y1, _) = pf[i1];
    let (x2, y2, _) = pf[j1];
    let (x3, y3, _) = pf[i2];
    let (x4, y4, _) = pf[j2];
    let (d1x, d1y) = (x2 - x1, y2 - y1);
    let (d2x, d2y) = (x4 - x3, y4 - y3);
    let den = d1x * d2y - d1y * d2x;
    if den.abs() < 1e-15 {
        return None;
    }
    let s = ((x3 - x1) * d2y - (y3 - y1) * d2x) / den;
    Some((x1 + s * d1x, y1 + s * d1y))
}

/// The exact intersection of the lines through two voter pairs, resolved
/// from the original rational coordinates, so it is exact regardless of
/// float error in the estimate.
fn rational_intersection(
    set: &WeightedPointSet,
    i1: usize,
    j1: usize,
    i2: usize,
    j2: usize,
) -> Option<Point> {
    let pts = set.points();
    let (p1, q1) = (&pts[i1], &pts[j1]);
    let (p2, q2) = (&pts[i2], &pts[j2]);
    let d1 = q1.sub(p1);
    let d2 = q2.sub(p2);
    let den = &d1.0 * &d2.1 - &d1.1 * &d2.0;
    if den.is_zero() {
        return None;
    }
    let s = ((&p2.x - &p1.x) * &d2.1 - (&p2.y - &p1.y) * &d2.0) / den;
    Some(Point::new(&p1.x + &s * &d1.0, &p1.y + &s * &d1.1))
}

/// Dyadic rational snaps of a floating apex at several precisions.
fn snapped_apexes(p: (f64, f64)) -> Vec<Point> {
    let mut out = Vec::new();
    for bits in [8i32, 14, 20] {
        let snap = |v: f64| -> Option<Rat> {
            let s = (v * f64::powi(2.0, bits)).round();
            if s.is_finite() && s.abs() < 9e17 {
                Some(Rat::new((s as i64).into(), (1i64 << bits).into()))
            } else {
                None
            }
        };
        if let (Some(x), Some(y)) = (snap(p.0), snap(p.1)) {
            let q = Point::new(x, y);
            if !out.contains(&q) {
                out.push(q);
            }
        }
    }
    if let (Some(x), Some(y)) = (Rat::from_float(p.0), Rat::from_float(p.1)) {
        let q = Point::new(x, y);
        if !out.contains(&q) {
            out.push(q);
        }
    }
    out
}
