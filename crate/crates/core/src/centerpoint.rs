//! Exact centerpoints of weighted planar point sets.
//!
//! A centerpoint of a set with total mass `W` is a point `p` such that every
//! closed halfplane containing `p` carries at least `W / 3` of the mass. One
//! always exists. [`centerpoint`] constructs one exactly; [`halfplane_depth`]
//! independently measures the smallest mass over all closed halfplanes
//! through a query point, so results can be audited.
//!
//! Construction: for a fixed direction `u`, the deepest admissible position
//! along `u` is the projection of the voter `v*(u)` where the mass counted
//! from the top of the `u`-ordering first reaches `W / 3`, giving the
//! constraint `u . p <= u . v*(u)`. The voter `v*(u)` only changes when the
//! projection order changes, which happens at directions perpendicular to
//! voter differences. A rotational sweep over those critical directions
//! yields finitely many halfplane constraints whose intersection is exactly
//! the centerpoint region, and a two-variable LP picks its lexicographically
//! smallest point.

use crate::angles::{between, dir_cmp, Dir};
use crate::geometry::{Point, WeightedPointSet};
use crate::lp::{lex_min_point, Box2, Halfplane};
use crate::num::Rat;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

/// Fenwick tree over rational weights, indexed by sweep position.
struct WeightTree {
    tree: Vec<Rat>,
}

impl WeightTree {
    fn new(n: usize) -> WeightTree {
        WeightTree { tree: vec![Rat::zero(); n + 1] }
    }

    fn add(&mut self, mut pos: usize, delta: &Rat) {
        pos += 1;
        while pos < self.tree.len() {
            self.tree[pos] += delta;
            pos += pos & pos.wrapping_neg();
        }
    }

    /// Smallest position `i` such that the weights at positions `0..=i` sum
    /// to at least `target`. Requires `target` to be positive and at most the
    /// total weight.
    fn first_reaching(&self, target: &Rat) -> usize {
        let mut pos = 0usize;
        let mut remaining = target.clone();
        let mut step = 1usize;
        while step * 2 < self.tree.len() {
            step *= 2;
        }
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] < remaining {
                remaining -= &self.tree[next];
                pos = next;
            }
            step /= 2;
        }
        // `pos` is the largest index with prefix sum strictly below target.
        pos
    }
}

/// Computes an exact centerpoint of `set`: the lexicographically smallest
/// point whose every containing closed halfplane carries at least a third of
/// the total mass.
///
/// # Panics
///
/// Panics if the sweep produces an empty region, which would contradict the
/// centerpoint theorem and therefore indicates a bug.
pub fn centerpoint(set: &WeightedPointSet) -> Point {
    let pts = set.points();
    let n = pts.len();
    assert!(n > 0, "centerpoint of an empty set");
    if n == 1 {
        return pts[0].clone();
    }
    let target = set.total() / crate::num::rat(3);

    // Critical directions: both normals of every voter difference, plus the
    // four axis directions so that no arc between consecutive critical
    // directions spans more than a quarter turn.
    struct Event {
        dir: Dir,
        pair: Option<(usize, usize)>,
    }
    let mut events: Vec<Event> = Vec::with_capacity(n * (n - 1) + 4);
    for i in 0..n {
        for j in (i + 1)..n {
            let (dx, dy) = pts[i].sub(&pts[j]);
            let u = (-dy.clone(), dx.clone());
            events.push(Event { dir: (-u.0.clone(), -u.1.clone()), pair: Some((i, j)) });
            events.push(Event { dir: u, pair: Some((i, j)) });
        }
    }
    let one = crate::num::rat(1);
    let zero = Rat::zero();
    for axis in [
        (one.clone(), zero.clone()),
        (zero.clone(), one.clone()),
        (-one.clone(), zero.clone()),
        (zero.clone(), -one.clone()),
    ] {
        events.push(Event { dir: axis, pair: None });
    }
    events.sort_by(|a, b| dir_cmp(&a.dir, &b.dir));

    // Group events sharing a direction.
    let mut groups: Vec<(Dir, Vec<(usize, usize)>)> = Vec::new();
    for ev in events {
        match groups.last_mut() {
            Some((d, pairs)) if dir_cmp(d, &ev.dir) == Ordering::Equal => {
                if let Some(p) = ev.pair {
                    pairs.push(p);
                }
            }
            _ => groups.push((ev.dir, ev.pair.into_iter().collect())),
        }
    }

    // Initial order: descending projection onto a direction strictly inside
    // the arc between the last and first critical directions. Projections
    // there are pairwise distinct.
    let start_dir = between(&groups[groups.len() - 1].0, &groups[0].0);
    let proj = |u: &Dir, v: &Point| -> Rat { &u.0 * &v.x + &u.1 * &v.y };
    let mut order: Vec<usize> = (0..n).collect();
    let start_proj: Vec<Rat> = pts.iter().map(|v| proj(&start_dir, v)).collect();
    order.sort_by(|&a, &b| start_proj[b].cmp(&start_proj[a]));
    let mut pos_of = vec![0usize; n];
    for (posn, &v) in order.iter().enumerate() {
        pos_of[v] = posn;
    }
    let mut tree = WeightTree::new(n);
    for (posn, &v) in order.iter().enumerate() {
        tree.add(posn, set.weight(v));
    }

    let mut constraints: Vec<Halfplane> = Vec::with_capacity(2 * groups.len());
    let mut prev_dir = groups[groups.len() - 1].0.clone();
    for group in &groups {
        // Emit the constraints for the open arc ending at this group, valid
        // at both closed endpoints by continuity.
        let quant_pos = tree.first_reaching(&target);
        let vstar = &pts[order[quant_pos]];
        for u in [&prev_dir, &group.0] {
            constraints.push(Halfplane::new(u.0.clone(), u.1.clone(), proj(u, vstar)));
        }

        // Cross the critical direction: every maximal run of voters tied in
        // projection reverses. Tied runs are contiguous just before the
        // event.
        let u = &group.0;
        let mut involved: Vec<usize> = Vec::new();
        for &(i, j) in &group.1 {
            involved.push(i);
            involved.push(j);
        }
        involved.sort_unstable();
        involved.dedup();
        if !involved.is_empty() {
            let mut keyed: Vec<(Rat, usize)> =
                involved.iter().map(|&v| (proj(u, &pts[v]), v)).collect();
            keyed.sort_by(|a, b| a.0.cmp(&b.0));
            let mut i = 0;
            while i < keyed.len() {
                let mut j = i + 1;
                while j < keyed.len() && keyed[j].0 == keyed[i].0 {
                    j += 1;
                }
                let run: Vec<usize> = keyed[i..j].iter().map(|e| e.1).collect();
                if run.len() >= 2 {
                    reverse_run(&run, &mut order, &mut pos_of, &mut tree, set);
                }
                i = j;
            }
        }
        prev_dir = group.0.clone();
    }

    // The region sits inside the bounding box of the voters.
    let mut xs: Vec<&Rat> = pts.iter().map(|p| &p.x).collect();
    let mut ys: Vec<&Rat> = pts.iter().map(|p| &p.y).collect();
    xs.sort();
    ys.sort();
    let bounds = Box2::new(
        xs[0].clone(),
        xs[xs.len() - 1].clone(),
        ys[0].clone(),
        ys[ys.len() - 1].clone(),
    );
    lex_min_point(&bounds, &constraints)
        .expect("centerpoint region is provably nonempty; an empty LP means a sweep bug")
}

/// Reverses the contiguous block of positions holding `run`, updating the
/// order, the position index, and the weight tree.
fn reverse_run(
    run: &[usize],
    order: &mut [usize],
    pos_of: &mut [usize],
    tree: &mut WeightTree,
    set: &WeightedPointSet,
) {
    let mut positions: Vec<usize> = run.iter().map(|&v| pos_of[v]).collect();
    positions.sort_unstable();
    debug_assert!(
        positions.windows(2).all(|w| w[1] == w[0] + 1),
        "tied voters must be contiguous at their critical direction"
    );
    let lo = positions[0];
    let hi = positions[positions.len() - 1];
    let mut a = lo;
    let mut b = hi;
    while a < b {
        let va = order[a];
        let vb = order[b];
        let wa = set.weight(va).clone();
        let wb = set.weight(vb).clone();
        tree.add(a, &(&wb - &wa));
        tree.add(b, &(&wa - &wb));
        order.swap(a, b);
        pos_of[va] = b;
        pos_of[vb] = a;
        a += 1;
        b -= 1;
    }
}

/// Smallest mass, over all closed halfplanes containing `p`, of the voters in
/// that halfplane. `p` is a centerpoint exactly when this is at least a third
/// of the total mass.
pub fn halfplane_depth(set: &WeightedPointSet, p: &Point) -> Rat {
    let pts = set.points();
    // The minimal halfplane has its boundary through `p`; its mass changes
    // only at directions perpendicular to some voter offset, so checking
    // those directions and one interior direction per gap is exact.
    let mut dirs: Vec<Dir> = Vec::new();
    for v in pts {
        if v == p {
            continue;
        }
        let (dx, dy) = v.sub(p);
        let u = (-dy.clone(), dx);
        dirs.push((-u.0.clone(), -u.1.clone()));
        dirs.push(u);
    }
    if dirs.is_empty() {
        // Every voter coincides with p; any halfplane through p holds all.
        return set.total().clone();
    }
    dirs.sort_by(dir_cmp);
    dirs.dedup_by(|a, b| dir_cmp(a, b) == Ordering::Equal);
    let mut candidates: Vec<Dir> = Vec::with_capacity(2 * dirs.len());
    for i in 0..dirs.len() {
        let next = &dirs[(i + 1) % dirs.len()];
        candidates.push(between(&dirs[i], next));
        candidates.push(dirs[i].clone());
    }
    let mut best: Option<Rat> = None;
    for u in &candidates {
        let mut mass = Rat::zero();
        for (i, v) in pts.iter().enumerate() {
            let (dx, dy) = v.sub(p);
            if !(&u.0 * &dx + &u.1 * &dy).is_negative() {
                mass += set.weight(i);
            }
        }
        if best.as_ref().is_none_or(|b| mass < *b) {
            best = Some(mass);
        }
    }
    best.expect("at least one candidate direction")
}
