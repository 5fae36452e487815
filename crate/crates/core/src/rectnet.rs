//! Nets against open axis-parallel rectangles.
//!
//! A net is a point set meant to keep the voter weight inside any open
//! axis-parallel rectangle that avoids it below a fraction of the total.
//! The evaluator is exact over all such rectangles. Searches place net
//! points only on the grid of voter coordinates, which loses nothing:
//! sliding a net coordinate onto the nearest voter coordinate below it
//! maps every rectangle avoiding the moved net to an equally heavy one
//! avoiding the original, so the grid always holds an optimal net.

use crate::geometry::{Point, WeightedPointSet};
use crate::num::{frac, rat, rat_to_f64, Rat};
use num_traits::Zero;
use std::cmp::Ordering;

/// A rectangle net together with its exactly measured worst case.
#[derive(Debug, Clone)]
pub struct RectNet {
    pub points: Vec<Point>,
    /// Largest weight fraction an open rectangle avoiding the net holds.
    pub measured_eps: Rat,
    /// Published guarantee for this size, when the table has one.
    pub target_eps: Option<Rat>,
}

/// How `search_rect_net` hunts for its points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Best net on the voter-coordinate grid; sizes one and two.
    Exact,
    /// Greedy placement plus local swaps; any size.
    Heuristic,
}

/// Worst open axis-parallel rectangle avoiding every net point: the
/// weight of the voters strictly inside, as a fraction of the total.
///
/// Only a net point whose x lies strictly inside a rectangle constrains
/// its y-extent, so rectangles fall into classes by the run of net
/// x-values they straddle. Within a class the x-extent widens to the
/// neighboring net x-values for free, and the best y-extent is a gap
/// between consecutive blocked y-values, which cuts the search to
/// O(k^2 (n + k)) without changing the maximum.
pub fn rect_net_quality(set: &WeightedPointSet, net: &[Point]) -> Rat {
    if set.total().is_zero() {
        return rat(0);
    }
    best_avoiding_weight(set, net) / set.total()
}

fn best_avoiding_weight(set: &WeightedPointSet, net: &[Point]) -> Rat {
    let mut nxs: Vec<&Rat> = net.iter().map(|p| &p.x).collect();
    nxs.sort();
    nxs.dedup();
    let m = nxs.len();
    let mut best = Rat::zero();
    for lo in 0..=m {
        for hi in lo..=m {
            // Net x-values nxs[lo..hi] sit strictly inside; the x-window
            // runs between the neighbors just outside the run.
            let left = lo.checked_sub(1).map(|i| nxs[i]);
            let right = nxs.get(hi).copied();
            let mut blocked: Vec<&Rat> = net
                .iter()
                .filter(|p| nxs[lo..hi].binary_search(&&p.x).is_ok())
                .map(|p| &p.y)
                .collect();
            blocked.sort();
            blocked.dedup();
            let mut sums: Vec<Rat> = vec![Rat::zero(); blocked.len() + 1];
            for (v, w) in set.points().iter().zip(set.weights()) {
                if left.is_some_and(|c| v.x <= *c) || right.is_some_and(|c| v.x >= *c) {
                    continue;
                }
                match blocked.binary_search(&&v.y) {
                    Ok(_) => {}
                    Err(pos) => sums[pos] += w,
                }
            }
            for s in sums {
                if s > best {
                    best = s;
                }
            }
        }
    }
    best
}

/// Float twin of `best_avoiding_weight` for search inner loops.
fn best_avoiding_weight_f64(pf: &[(f64, f64, f64)], net: &[(f64, f64)]) -> f64 {
    let mut nxs: Vec<f64> = net.iter().map(|p| p.0).collect();
    nxs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    nxs.dedup();
    let m = nxs.len();
    let mut best = 0.0f64;
    for lo in 0..=m {
        for hi in lo..=m {
            let left = lo.checked_sub(1).map(|i| nxs[i]);
            let right = nxs.get(hi).copied();
            let mut blocked: Vec<f64> = net
                .iter()
                .filter(|p| nxs[lo..hi].iter().any(|&x| x == p.0))
                .map(|p| p.1)
                .collect();
            blocked.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            blocked.dedup();
            let mut sums = vec![0.0f64; blocked.len() + 1];
            for &(x, y, w) in pf {
                if left.is_some_and(|c| x <= c) || right.is_some_and(|c| x >= c) {
                    continue;
                }
                match blocked.binary_search_by(|b| b.partial_cmp(&y).unwrap_or(Ordering::Equal)) {
                    Ok(_) => {}
                    Err(pos) => sums[pos] += w,
                }
            }
            for s in sums {
                best = best.max(s);
            }
        }
    }
    best
}

/// Single point at the weighted x- and y-medians, with its exact quality.
/// The median is the smallest coordinate whose cumulative weight reaches
/// half the total, so both open halfplanes beyond it stay at or under a
/// half, and so does every avoiding rectangle.
pub fn median_point_net(set: &WeightedPointSet) -> RectNet {
    assert!(!set.total().is_zero(), "median needs voters with weight");
    let point = Point::new(axis_median(set, |p| &p.x), axis_median(set, |p| &p.y));
    let eps = rect_net_quality(set, std::slice::from_ref(&point));
    assert!(eps <= frac(1, 2));
    RectNet { points: vec![point], measured_eps: eps, target_eps: Some(frac(1, 2)) }
}

fn axis_median(set: &WeightedPointSet, coord: fn(&Point) -> &Rat) -> Rat {
    let mut idx: Vec<usize> = (0..set.len()).collect();
    idx.sort_by(|&a, &b| coord(&set.points()[a]).cmp(coord(&set.points()[b])));
    let half = set.total() / rat(2);
    let mut cum = Rat::zero();
    for &i in &idx {
        cum += set.weight(i);
        if cum >= half {
            return coord(&set.points()[i]).clone();
        }
    }
    unreachable!("cumulative weight reaches the total");
}

/// Best published guarantees by net size, indexed by point count up to
/// twenty; entry zero is the vacuous 1. Gaps inherit the last smaller
/// size so the sequence never worsens.
pub fn rect_eps_table() -> Vec<Rat> {
    let anchors: [(usize, i64, i64); 13] = [
        (1, 1, 2),
        (2, 2, 5),
        (3, 1, 3),
        (4, 2, 7),
        (5, 1, 4),
        (7, 2, 9),
        (8, 1, 5),
        (10, 1, 6),
        (12, 2, 13),
        (14, 1, 7),
        (16, 2, 15),
        (17, 1, 8),
        (19, 2, 17),
    ];
    let mut out = vec![rat(1); 21];
    for (k, n, d) in anchors {
        out[k] = frac(n, d);
    }
    for k in 1..=20 {
        if out[k] > out[k - 1] {
            out[k] = out[k - 1].clone();
        }
    }
    out
}

/// Net of `k` points over the voter-coordinate grid. Exact mode returns
/// a grid-optimal net and is sized for k of one or two; heuristic mode
/// (greedy then local swaps) returns its best find. Either way the
/// quality field is measured exactly on the instance.
pub fn search_rect_net(set: &WeightedPointSet, k: usize, mode: SearchMode) -> RectNet {
    assert!(k >= 1, "a net needs at least one point");
    assert!(!set.total().is_zero(), "search needs voters with weight");
    let target = rect_eps_table().get(k).cloned();
    match mode {
        SearchMode::Exact => {
            assert!(k <= 2, "exact search is sized for one or two points");
            if k == 1 {
                // The minimax of the four outer halfplanes separates by
                // axis and each axis bottoms out at its weighted median.
                median_point_net(set)
            } else {
                exact_two(set, target)
            }
        }
        SearchMode::Heuristic => heuristic_net(set, k, target),
    }
}

/// Exact two-point search. A rectangle avoids a point through one of its
/// four sides, so over two net points the worst avoiding rectangle is the
/// heaviest of fourteen outer regions (four halfplanes, two strips, eight
/// quadrants), each readable from rank-space prefix sums. The scan runs
/// in floats and the few best pairs are re-measured exactly.
fn exact_two(set: &WeightedPointSet, target: Option<Rat>) -> RectNet {
    let xs = distinct_sorted(set, |p| &p.x);
    let ys = distinct_sorted(set, |p| &p.y);
    let (mx, my) = (xs.len(), ys.len());
    let xrank: Vec<usize> =
        set.points().iter().map(|p| xs.binary_search(&&p.x).unwrap()).collect();
    let yrank: Vec<usize> =
        set.points().iter().map(|p| ys.binary_search(&&p.y).unwrap()).collect();

    // dom[i][j]: weight with x-rank below i and y-rank below j.
    let mut dom = vec![vec![0.0f64; my + 1]; mx + 1];
    for (v, w) in xrank.iter().zip(&yrank).map(|(&a, &b)| (a, b)).zip(set.weights()) {
        dom[v.0 + 1][v.1 + 1] += rat_to_f64(w);
    }
    for i in 1..=mx {
        for j in 1..=my {
            dom[i][j] += dom[i][j - 1];
        }
    }
    for j in 0..=my {
        for i in 1..=mx {
            dom[i][j] += dom[i - 1][j];
        }
    }
    let total = dom[mx][my];
    let slack = 1e-9 * (1.0 + total);

    let wx_lt = |i: usize| dom[i][my];
    let wx_gt = |i: usize| total - dom[i + 1][my];
    let wy_lt = |j: usize| dom[mx][j];
    let wy_gt = |j: usize| total - dom[mx][j + 1];

    let mut bestv = f64::INFINITY;
    let mut tied: Vec<(usize, usize, usize, usize)> = Vec::new();
    let mut fq = vec![0.0f64; my];
    let mut bq = vec![0.0f64; my];
    for ia in 0..mx {
        if wx_lt(ia) > bestv + slack {
            break;
        }
        for ie in ia..mx {
            let strip = dom[ie][my] - dom[ia + 1][my];
            if strip > bestv + slack {
                break;
            }
            let part_x = wx_lt(ia).max(wx_gt(ie)).max(strip);
            if part_x > bestv + slack {
                continue;
            }
            for j in 0..my {
                let a_lt = dom[ia][j].max(dom[ia][my] - dom[ia][j + 1]);
                let a_gt = (dom[mx][j] - dom[ia + 1][j])
                    .max(total - dom[ia + 1][my] - dom[mx][j + 1] + dom[ia + 1][j + 1]);
                fq[j] = a_lt.max(a_gt);
                let e_lt = dom[ie][j].max(dom[ie][my] - dom[ie][j + 1]);
                let e_gt = (dom[mx][j] - dom[ie + 1][j])
                    .max(total - dom[ie + 1][my] - dom[mx][j + 1] + dom[ie + 1][j + 1]);
                bq[j] = e_lt.max(e_gt);
            }
            for jb in 0..my {
                if bq[jb] > bestv + slack {
                    continue;
                }
                for jf in 0..my {
                    let base = part_x.max(bq[jb]).max(fq[jf]);
                    if base > bestv + slack {
                        continue;
                    }
                    let (jlo, jhi) = (jb.min(jf), jb.max(jf));
                    let ystrip =
                        if jhi > jlo { dom[mx][jhi] - dom[mx][jlo + 1] } else { 0.0 };
                    let q = base.max(wy_lt(jlo)).max(wy_gt(jhi)).max(ystrip);
                    if q < bestv - slack {
                        bestv = q;
                        tied.clear();
                    }
                    if q <= bestv + slack && tied.len() < 64 {
                        tied.push((ia, jb, ie, jf));
                    }
                }
            }
        }
    }

    let mut best: Option<(Rat, Vec<Point>)> = None;
    for (ia, jb, ie, jf) in tied {
        let c = Point::new(xs[ia].clone(), ys[jb].clone());
        let d = Point::new(xs[ie].clone(), ys[jf].clone());
        let mut pts = vec![c, d];
        pts.dedup();
        let eps = rect_net_quality(set, &pts);
        if best.as_ref().is_none_or(|(b, _)| eps < *b) {
            best = Some((eps, pts));
        }
    }
    let (measured_eps, points) = best.expect("scan visits at least one pair");
    RectNet { points, measured_eps, target_eps: target }
}

fn distinct_sorted(set: &WeightedPointSet, coord: fn(&Point) -> &Rat) -> Vec<&Rat> {
    let mut out: Vec<&Rat> = set.points().iter().map(coord).collect();
    out.sort();
    out.dedup();
    out
}

/// Greedy construction: add the pool point that helps most, then local
/// swaps until nothing improves. The pool is the full voter-coordinate
/// grid on small instances and a quantile grid on large ones; the final
/// quality is measured exactly either way.
fn heuristic_net(set: &WeightedPointSet, k: usize, target: Option<Rat>) -> RectNet {
    let pf: Vec<(f64, f64, f64)> = set
        .points()
        .iter()
        .zip(set.weights())
        .map(|(p, w)| {
            let (x, y) = p.to_f64();
            (x, y, rat_to_f64(w))
        })
        .collect();
    let xs = distinct_sorted(set, |p| &p.x);
    let ys = distinct_sorted(set, |p| &p.y);
    let pool: Vec<Point> = if xs.len() * ys.len() <= 6400 {
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for x in &xs {
            for y in &ys {
                out.push(Point::new((*x).clone(), (*y).clone()));
            }
        }
        out
    } else {
        let quantile = |coord: fn(&Point) -> &Rat, q: i64| -> Rat {
            let mut idx: Vec<usize> = (0..set.len()).collect();
            idx.sort_by(|&a, &b| coord(&set.points()[a]).cmp(coord(&set.points()[b])));
            let goal = set.total() * frac(q, 18);
            let mut cum = Rat::zero();
            for &i in &idx {
                cum += set.weight(i);
                if cum >= goal {
                    return coord(&set.points()[i]).clone();
                }
            }
            coord(&set.points()[*idx.last().unwrap()]).clone()
        };
        let qx: Vec<Rat> = (1..18).map(|q| quantile(|p| &p.x, q)).collect();
        let qy: Vec<Rat> = (1..18).map(|q| quantile(|p| &p.y, q)).collect();
        let mut out = Vec::new();
        for x in &qx {
            for y in &qy {
                let p = Point::new(x.clone(), y.clone());
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    };
    let pool_f: Vec<(f64, f64)> = pool.iter().map(|p| p.to_f64()).collect();

    let mut chosen: Vec<usize> = Vec::new();
    let mut net_f: Vec<(f64, f64)> = Vec::new();
    for _ in 0..k.min(pool.len()) {
        let mut pick = None;
        net_f.push((0.0, 0.0));
        for (ci, &cand) in pool_f.iter().enumerate() {
            if chosen.contains(&ci) {
                continue;
            }
            *net_f.last_mut().unwrap() = cand;
            let q = best_avoiding_weight_f64(&pf, &net_f);
            if pick.is_none_or(|(bq, _)| q < bq) {
                pick = Some((q, ci));
            }
        }
        let (_, ci) = pick.expect("pool is nonempty");
        *net_f.last_mut().unwrap() = pool_f[ci];
        chosen.push(ci);
    }

    for _ in 0..4 {
        let mut improved = false;
        for slot in 0..chosen.len() {
            let mut cur = best_avoiding_weight_f64(&pf, &net_f);
            let keep = net_f[slot];
            let mut swap = None;
            for (ci, &cand) in pool_f.iter().enumerate() {
                if chosen.contains(&ci) {
                    continue;
                }
                net_f[slot] = cand;
                let q = best_avoiding_weight_f64(&pf, &net_f);
                if q < cur {
                    cur = q;
                    swap = Some(ci);
                }
            }
            match swap {
                Some(ci) => {
                    net_f[slot] = pool_f[ci];
                    chosen[slot] = ci;
                    improved = true;
                }
                None => net_f[slot] = keep,
            }
        }
        if !improved {
            break;
        }
    }

    let mut points: Vec<Point> = chosen.iter().map(|&ci| pool[ci].clone()).collect();
    points.sort_by(|a, b| a.x.cmp(&b.x).then_with(|| a.y.cmp(&b.y)));
    points.dedup();
    let measured_eps = rect_net_quality(set, &points);
    RectNet { points, measured_eps, target_eps: target }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, rat};
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_square_corners() -> WeightedPointSet {
        WeightedPointSet::unweighted(vec![
            Point::new(rat(0), rat(0)),
            Point::new(rat(1), rat(0)),
            Point::new(rat(0), rat(1)),
            Point::new(rat(1), rat(1)),
        ])
        .unwrap()
    }

    fn random_set(seed: u64, n: usize) -> WeightedPointSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts: Vec<Point> = Vec::new();
        let mut ws: Vec<Rat> = Vec::new();
        while pts.len() < n {
            let p = Point::new(
                frac(rng.gen_range(-60..=60), rng.gen_range(1..=3)),
                frac(rng.gen_range(-60..=60), rng.gen_range(1..=3)),
            );
            if pts.contains(&p) {
                continue;
            }
            pts.push(p);
            ws.push(frac(rng.gen_range(1..=9), 2));
        }
        WeightedPointSet::new(pts, ws).unwrap()
    }

    fn random_unit_set(seed: u64, n: usize) -> WeightedPointSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts: Vec<Point> = Vec::new();
        while pts.len() < n {
            let p = Point::new(
                frac(rng.gen_range(-60..=60), rng.gen_range(1..=3)),
                frac(rng.gen_range(-60..=60), rng.gen_range(1..=3)),
            );
            if pts.contains(&p) {
                continue;
            }
            pts.push(p);
        }
        WeightedPointSet::unweighted(pts).unwrap()
    }

    /// Literal evaluator: every pair of side gaps per axis, checked for
    /// net avoidance point by point.
    fn plain_quality(set: &WeightedPointSet, net: &[Point]) -> Rat {
        let mut xs: Vec<&Rat> = set.points().iter().map(|p| &p.x).collect();
        xs.extend(net.iter().map(|p| &p.x));
        xs.sort();
        xs.dedup();
        let mut ys: Vec<&Rat> = set.points().iter().map(|p| &p.y).collect();
        ys.extend(net.iter().map(|p| &p.y));
        ys.sort();
        ys.dedup();
        let inside = |v: &Rat, lo: usize, hi: usize, cs: &[&Rat]| -> bool {
            (lo == 0 || *cs[lo - 1] < *v) && (hi == cs.len() || *v < *cs[hi])
        };
        let mut best = Rat::zero();
        for x1 in 0..=xs.len() {
            for x2 in x1 + 1..=xs.len() {
                for y1 in 0..=ys.len() {
                    'rect: for y2 in y1 + 1..=ys.len() {
                        for p in net {
                            if inside(&p.x, x1, x2, &xs) && inside(&p.y, y1, y2, &ys) {
                                continue 'rect;
                            }
                        }
                        let mut sum = Rat::zero();
                        for (v, w) in set.points().iter().zip(set.weights()) {
                            if inside(&v.x, x1, x2, &xs) && inside(&v.y, y1, y2, &ys) {
                                sum += w;
                            }
                        }
                        if sum > best {
                            best = sum;
                        }
                    }
                }
            }
        }
        best / set.total()
    }

    #[test]
    fn empty_net_concedes_everything() {
        let set = random_set(5, 12);
        assert_eq!(rect_net_quality(&set, &[]), rat(1));
    }

    #[test]
    fn net_on_every_voter_concedes_nothing() {
        let set = random_set(6, 10);
        assert_eq!(rect_net_quality(&set, set.points()), rat(0));
    }

    #[test]
    fn center_of_a_square_leaves_half() {
        let set = unit_square_corners();
        let net = [Point::new(frac(1, 2), frac(1, 2))];
        assert_eq!(rect_net_quality(&set, &net), frac(1, 2));
    }

    #[test]
    fn quality_matches_plain_enumeration() {
        for seed in 0u64..6 {
            let set = random_set(seed, 8);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
            let mut net = Vec::new();
            for _ in 0..3 {
                net.push(Point::new(
                    frac(rng.gen_range(-60..=60), rng.gen_range(1..=3)),
                    frac(rng.gen_range(-60..=60), rng.gen_range(1..=3)),
                ));
            }
            assert_eq!(
                rect_net_quality(&set, &net),
                plain_quality(&set, &net),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn random_rectangles_never_beat_the_measure() {
        let set = random_set(11, 16);
        let net: Vec<Point> = set.points()[..3].to_vec();
        let bound = rect_net_quality(&set, &net) * set.total();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100_000 {
            let mut c = [0.0f64; 4];
            for v in &mut c {
                *v = rng.gen_range(-61.0..61.0);
            }
            let (x1, x2) = (c[0].min(c[1]), c[0].max(c[1]));
            let (y1, y2) = (c[2].min(c[3]), c[2].max(c[3]));
            if net.iter().any(|p| {
                let (px, py) = p.to_f64();
                x1 < px && px < x2 && y1 < py && py < y2
            }) {
                continue;
            }
            let w: f64 = set
                .points()
                .iter()
                .zip(set.weights())
                .filter(|(v, _)| {
                    let (vx, vy) = v.to_f64();
                    x1 < vx && vx < x2 && y1 < vy && vy < y2
                })
                .map(|(_, w)| rat_to_f64(w))
                .sum();
            assert!(w <= rat_to_f64(&bound) + 1e-6);
        }
    }

    #[test]
    fn median_of_square_corners_sits_on_the_low_corner() {
        let net = median_point_net(&unit_square_corners());
        assert_eq!(net.points, vec![Point::new(rat(0), rat(0))]);
        assert_eq!(net.measured_eps, frac(1, 2));
    }

    #[test]
    fn median_of_a_single_voter_is_that_voter() {
        let set =
            WeightedPointSet::new(vec![Point::new(rat(3), rat(-2))], vec![rat(5)]).unwrap();
        let net = median_point_net(&set);
        assert_eq!(net.points, vec![Point::new(rat(3), rat(-2))]);
        assert_eq!(net.measured_eps, rat(0));
    }

    #[test]
    fn median_of_five_collinear_voters_is_the_middle_one() {
        let pts: Vec<Point> = (0..5).map(|i| Point::new(rat(i), rat(0))).collect();
        let set = WeightedPointSet::unweighted(pts).unwrap();
        let net = median_point_net(&set);
        assert_eq!(net.points, vec![Point::new(rat(2), rat(0))]);
        assert_eq!(net.measured_eps, frac(2, 5));
    }

    #[test]
    fn exact_one_point_search_is_the_median() {
        for seed in 0u64..4 {
            let set = random_set(seed, 14);
            let search = search_rect_net(&set, 1, SearchMode::Exact);
            let median = median_point_net(&set);
            assert_eq!(search.measured_eps, median.measured_eps);
            assert_eq!(search.points, median.points);
        }
    }

    #[test]
    fn exact_two_points_on_square_corners_leave_a_quarter() {
        let net = search_rect_net(&unit_square_corners(), 2, SearchMode::Exact);
        assert_eq!(net.measured_eps, frac(1, 4));
    }

    #[test]
    fn exact_two_matches_brute_force_on_small_sets() {
        for seed in 0u64..5 {
            let set = random_set(seed, 6);
            let xs = distinct_sorted(&set, |p| &p.x);
            let ys = distinct_sorted(&set, |p| &p.y);
            let mut best = rat(1);
            for xa in &xs {
                for ya in &ys {
                    for xb in &xs {
                        for yb in &ys {
                            let mut net = vec![
                                Point::new((*xa).clone(), (*ya).clone()),
                                Point::new((*xb).clone(), (*yb).clone()),
                            ];
                            net.dedup();
                            let q = plain_quality(&set, &net);
                            if q < best {
                                best = q;
                            }
                        }
                    }
                }
            }
            let search = search_rect_net(&set, 2, SearchMode::Exact);
            assert_eq!(search.measured_eps, best, "seed {seed}");
        }
    }

    #[test]
    fn exact_two_stays_within_the_published_pair_guarantee() {
        for seed in 0u64..5 {
            let set = random_unit_set(seed, 10);
            let net = search_rect_net(&set, 2, SearchMode::Exact);
            assert!(net.measured_eps <= frac(2, 5), "seed {seed}: {}", net.measured_eps);
        }
    }

    #[test]
    fn heuristic_nets_never_lose_to_the_median() {
        for seed in 0u64..3 {
            let set = random_unit_set(seed, 40);
            let median = median_point_net(&set);
            for k in 3..=5 {
                let net = search_rect_net(&set, k, SearchMode::Heuristic);
                assert!(net.points.len() <= k);
                assert!(
                    net.measured_eps <= median.measured_eps,
                    "seed {seed} k {k}: {} vs {}",
                    net.measured_eps,
                    median.measured_eps
                );
                if let Some(target) = &net.target_eps {
                    if net.measured_eps > *target {
                        eprintln!(
                            "seed {seed} k {k}: measured {} over target {target}",
                            net.measured_eps
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn guarantee_table_holds_its_anchors_and_fills() {
        let t = rect_eps_table();
        assert_eq!(t.len(), 21);
        assert_eq!(t[0], rat(1));
        for (k, v) in [
            (1, frac(1, 2)),
            (2, frac(2, 5)),
            (3, frac(1, 3)),
            (4, frac(2, 7)),
            (5, frac(1, 4)),
            (6, frac(1, 4)),
            (7, frac(2, 9)),
            (8, frac(1, 5)),
            (9, frac(1, 5)),
            (10, frac(1, 6)),
            (11, frac(1, 6)),
            (12, frac(2, 13)),
            (13, frac(2, 13)),
            (14, frac(1, 7)),
            (15, frac(1, 7)),
            (16, frac(2, 15)),
            (17, frac(1, 8)),
            (18, frac(1, 8)),
            (19, frac(2, 17)),
            (20, frac(2, 17)),
        ] {
            assert_eq!(t[k], v, "size {k}");
        }
        for k in 1..=20 {
            assert!(t[k] <= t[k - 1]);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn medians_hold_half_on_random_weighted_sets(seed in 0u64..500, n in 3usize..20) {
            let set = random_set(seed, n);
            let net = median_point_net(&set);
            prop_assert!(net.measured_eps <= frac(1, 2));
        }
    }
}
