//! Independent oracles shared by the integration tests and the acceptance
//! runner. Nothing here calls the code under test.
#![allow(dead_code)]

use std::collections::BTreeSet;

use nalgebra::{UnitQuaternion, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topoplan::geometry::{Pose, Primitive};

pub type V3 = Vector3<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- distance

/// Signed distance from `p` to a posed primitive, from the textbook closed
/// forms. Capsule axis is the local z axis.
pub fn point_signed_distance(prim: &Primitive, pose: &Pose, p: &V3) -> f64 {
    let local = pose.orientation.inverse() * (p - pose.position);
    match *prim {
        Primitive::Sphere { radius } => local.norm() - radius,
        Primitive::Capsule { radius, half_length } => {
            let z = local.z.clamp(-half_length, half_length);
            (local - V3::new(0.0, 0.0, z)).norm() - radius
        }
        Primitive::Box { half_extents } => {
            let q = local.abs() - half_extents;
            let outside = q.map(|v| v.max(0.0)).norm();
            let inside = q.x.max(q.y).max(q.z).min(0.0);
            outside + inside
        }
    }
}

/// Points covering a primitive's surface, parameterised by `(s, t)` in the
/// unit square plus a patch index. Capsule end caps are sampled as whole
/// spheres; their inner halves lie inside the solid, which leaves the
/// minimum distance to a separate convex body unchanged.
struct Surface<'a> {
    prim: &'a Primitive,
    pose: &'a Pose,
}

impl Surface<'_> {
    fn patches(&self) -> usize {
        match self.prim {
            Primitive::Sphere { .. } => 1,
            Primitive::Capsule { .. } => 3,
            Primitive::Box { .. } => 6,
        }
    }

    fn point(&self, patch: usize, s: f64, t: f64) -> V3 {
        let s = s.clamp(0.0, 1.0);
        let t = t.clamp(0.0, 1.0);
        let dir = |s: f64, t: f64| {
            let theta = std::f64::consts::PI * s;
            let phi = 2.0 * std::f64::consts::PI * t;
            V3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
        };
        let local = match *self.prim {
            Primitive::Sphere { radius } => dir(s, t) * radius,
            Primitive::Capsule { radius, half_length } => match patch {
                // Side wall.
                0 => {
                    let phi = 2.0 * std::f64::consts::PI * t;
                    V3::new(radius * phi.cos(), radius * phi.sin(), -half_length + 2.0 * half_length * s)
                }
                1 => V3::new(0.0, 0.0, half_length) + dir(s, t) * radius,
                _ => V3::new(0.0, 0.0, -half_length) + dir(s, t) * radius,
            },
            Primitive::Box { half_extents: h } => {
                let u = 2.0 * s - 1.0;
                let v = 2.0 * t - 1.0;
                match patch {
                    0 => V3::new(h.x, u * h.y, v * h.z),
                    1 => V3::new(-h.x, u * h.y, v * h.z),
                    2 => V3::new(u * h.x, h.y, v * h.z),
                    3 => V3::new(u * h.x, -h.y, v * h.z),
                    4 => V3::new(u * h.x, v * h.y, h.z),
                    _ => V3::new(u * h.x, v * h.y, -h.z),
                }
            }
        };
        self.pose.position + self.pose.orientation * local
    }
}

/// Minimum over a dense grid on `a`'s surface of the signed distance to `b`,
/// refined by pattern search around the best grid points.
fn one_sided(a: &Primitive, pa: &Pose, b: &Primitive, pb: &Pose, samples: usize) -> f64 {
    let surf = Surface { prim: a, pose: pa };
    let per_patch = samples / surf.patches();
    let k = (per_patch as f64).sqrt().ceil() as usize;
    let f = |patch: usize, s: f64, t: f64| point_signed_distance(b, pb, &surf.point(patch, s, t));
    let mut best: Vec<(f64, usize, f64, f64)> = Vec::new();
    for patch in 0..surf.patches() {
        for i in 0..=k {
            for j in 0..=k {
                let s = i as f64 / k as f64;
                let t = j as f64 / k as f64;
                let d = f(patch, s, t);
                if best.len() < 8 || d < best[best.len() - 1].0 {
                    best.push((d, patch, s, t));
                    best.sort_by(|x, y| x.0.total_cmp(&y.0));
                    best.truncate(8);
                }
            }
        }
    }
    let mut out = best[0].0;
    for &(d0, patch, s0, t0) in &best {
        let (mut d, mut s, mut t) = (d0, s0, t0);
        let mut h = 1.0 / k as f64;
        while h > 1e-9 {
            let mut moved = false;
            for (ds, dt) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h), (h, h), (-h, -h), (h, -h), (-h, h)] {
                let (ns, nt) = ((s + ds).clamp(0.0, 1.0), (t + dt).clamp(0.0, 1.0));
                let nd = f(patch, ns, nt);
                if nd < d {
                    d = nd;
                    s = ns;
                    t = nt;
                    moved = true;
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        out = out.min(d);
    }
    out
}

/// Dense surface-sampling distance between two posed primitives: positive
/// when apart, at most zero when they overlap. `samples` grid points on each
/// surface.
pub fn sampled_distance(a: &Primitive, pa: &Pose, b: &Primitive, pb: &Pose, samples: usize) -> f64 {
    one_sided(a, pa, b, pb, samples).min(one_sided(b, pb, a, pa, samples))
}

pub fn random_rotation<R: Rng>(r: &mut R) -> UnitQuaternion<f64> {
    // Uniform unit quaternion (Shoemake).
    let (u1, u2, u3): (f64, f64, f64) = (r.gen(), r.gen(), r.gen());
    let tau = 2.0 * std::f64::consts::PI;
    let q = nalgebra::Quaternion::new(
        (1.0 - u1).sqrt() * (tau * u2).sin(),
        (1.0 - u1).sqrt() * (tau * u2).cos(),
        u1.sqrt() * (tau * u3).sin(),
        u1.sqrt() * (tau * u3).cos(),
    );
    UnitQuaternion::from_quaternion(q)
}

pub fn random_primitive<R: Rng>(r: &mut R) -> Primitive {
    match r.gen_range(0..3) {
        0 => Primitive::sphere(r.gen_range(0.05..0.4)).unwrap(),
        1 => Primitive::capsule(r.gen_range(0.02..0.3), r.gen_range(0.05..0.5)).unwrap(),
        _ => Primitive::cuboid(r.gen_range(0.02..0.4), r.gen_range(0.02..0.4), r.gen_range(0.02..0.4)).unwrap(),
    }
}

pub fn random_pose<R: Rng>(r: &mut R, extent: f64) -> Pose {
    let p = V3::new(
        r.gen_range(-extent..extent),
        r.gen_range(-extent..extent),
        r.gen_range(-extent..extent),
    );
    Pose::new(p, random_rotation(r))
}

// ------------------------------------------------------------------ graphs

/// Random simple undirected graph with `n` nodes and at most `max_edges`
/// edges.
pub fn random_graph<R: Rng>(r: &mut R, n: usize, max_edges: usize) -> Vec<(usize, usize)> {
    let mut all = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            all.push((a, b));
        }
    }
    let m = r.gen_range(0..=max_edges.min(all.len()));
    let mut edges = Vec::new();
    for _ in 0..m {
        let i = r.gen_range(0..all.len());
        edges.push(all.swap_remove(i));
    }
    edges
}

fn has_edge(edges: &BTreeSet<(usize, usize)>, a: usize, b: usize) -> bool {
    edges.contains(&(a.min(b), a.max(b)))
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|i| mask & (1 << i) != 0).collect());
        }
    }
    out
}

/// Every simple cycle of 3..=max_len nodes by testing all vertex orderings,
/// in canonical form: smallest node first, second node smaller than last.
pub fn brute_force_cycles(n: usize, edges: &[(usize, usize)], max_len: usize) -> BTreeSet<Vec<usize>> {
    let set: BTreeSet<(usize, usize)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut out = BTreeSet::new();
    for k in 3..=max_len.min(n) {
        for sub in subsets(n, k) {
            let first = sub[0];
            for rest in permutations(&sub[1..]) {
                if rest[0] > rest[rest.len() - 1] {
                    continue;
                }
                let mut cyc = vec![first];
                cyc.extend(rest);
                if (0..k).all(|i| has_edge(&set, cyc[i], cyc[(i + 1) % k])) {
                    out.insert(cyc);
                }
            }
        }
    }
    out
}

/// Every simple path from node `s` to node `t` visiting at most `max_inner`
/// other nodes, by testing all ordered subsets of the inner nodes.
pub fn brute_force_paths(
    n: usize,
    edges: &[(usize, usize)],
    s: usize,
    t: usize,
    max_inner: usize,
) -> BTreeSet<Vec<usize>> {
    let set: BTreeSet<(usize, usize)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let inner: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut out = BTreeSet::new();
    for k in 0..=max_inner.min(inner.len()) {
        for pick in subsets(inner.len(), k) {
            let chosen: Vec<usize> = pick.iter().map(|&i| inner[i]).collect();
            for order in permutations(&chosen) {
                let mut p = vec![s];
                p.extend(order);
                p.push(t);
                if p.windows(2).all(|w| has_edge(&set, w[0], w[1])) {
                    out.insert(p);
                }
            }
        }
    }
    out
}

// ------------------------------------------------------------------- score

/// W(P) = (sum_{i=1}^{g-1} w_{v_i} * w_{e_{i,i+1}} + w_{v_g}) / |P|^gamma,
/// written out term by term.
pub fn path_score(node_w: &[f64], edge_w: &[f64], gamma: f64) -> f64 {
    let g = node_w.len();
    let mut numerator = node_w[g - 1];
    let mut i = 0;
    while i + 1 < g {
        numerator += node_w[i] * edge_w[i];
        i += 1;
    }
    numerator / (g as f64).powf(gamma)
}

// -------------------------------------------------------------- dispersion

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn min_pairwise(points: &[Vec<f64>], pick: &[usize]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..pick.len() {
        for j in (i + 1)..pick.len() {
            m = m.min(euclid(&points[pick[i]], &points[pick[j]]));
        }
    }
    m
}

/// Largest achievable minimum pairwise distance over all k-subsets.
pub fn best_dispersion(points: &[Vec<f64>], k: usize) -> f64 {
    let n = points.len();
    let mut best = 0.0f64;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        best = best.max(min_pairwise(points, &idx));
        // Next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
