//! Brute-force oracles written independently of the library's recursions.
#![allow(dead_code)]

use private_littlestone::classes::{Hypothesis, HypothesisClass, Label};

/// Classes as plain sign vectors so nothing here leans on library logic.
pub type Fns = Vec<Vec<i8>>;

pub fn fns(class: &HypothesisClass) -> Fns {
    class.iter().map(|h| h.signs()).collect()
}

pub fn restrict(f: &Fns, x: usize, b: i8) -> Fns {
    f.iter().filter(|h| h[x] == b).cloned().collect()
}

pub fn restrict_all(f: &Fns, path: &[(usize, i8)]) -> Fns {
    f.iter()
        .filter(|h| path.iter().all(|&(x, b)| h[x] == b))
        .cloned()
        .collect()
}

/// Every complete depth-`depth` tree as a heap-ordered list of points.
fn trees(n: usize, depth: usize) -> Vec<Vec<usize>> {
    let nodes = (1usize << depth) - 1;
    let total = n.pow(nodes as u32);
    (0..total)
        .map(|mut code| {
            (0..nodes)
                .map(|_| {
                    let x = code % n;
                    code /= n;
                    x
                })
                .collect()
        })
        .collect()
}

/// Root-to-leaf constraint sequences of a heap-ordered tree.
fn paths(tree: &[usize], depth: usize) -> Vec<Vec<(usize, i8)>> {
    (0..1usize << depth)
        .map(|bits| {
            let mut i = 0;
            let mut p = Vec::new();
            for level in 0..depth {
                let b: i8 = if bits >> level & 1 == 1 { 1 } else { -1 };
                p.push((tree[i], b));
                i = 2 * i + if b == -1 { 1 } else { 2 };
            }
            p
        })
        .collect()
}

/// Littlestone dimension by enumerating complete trees: the largest depth
/// with a tree all of whose paths are realized.
pub fn ldim_by_trees(f: &Fns) -> i32 {
    if f.is_empty() {
        return -1;
    }
    let n = f[0].len();
    let mut d = 0;
    while 1usize << (d + 1) <= f.len() && n > 0 {
        let depth = d + 1;
        let shattered = trees(n, depth)
            .iter()
            .any(|t| paths(t, depth).iter().all(|p| !restrict_all(f, p).is_empty()));
        if !shattered {
            break;
        }
        d = depth;
    }
    d as i32
}

/// VC dimension by checking every subset for all sign patterns.
pub fn vc_brute(f: &Fns) -> i32 {
    if f.is_empty() {
        return -1;
    }
    let n = f[0].len();
    let mut best = 0;
    for s in 0u32..1 << n {
        let pts: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
        let mut seen = std::collections::BTreeSet::new();
        for h in f {
            seen.insert(pts.iter().map(|&x| h[x]).collect::<Vec<_>>());
        }
        if seen.len() == 1 << pts.len() {
            best = best.max(pts.len() as i32);
        }
    }
    best
}

/// Definition of k-irreducibility: every complete depth-k tree has a path
/// along which the restricted class keeps its Littlestone dimension.
pub fn irreducible_by_trees(f: &Fns, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if f.is_empty() {
        return false;
    }
    let d = ldim_by_trees(f);
    let n = f[0].len();
    trees(n, k)
        .iter()
        .all(|t| paths(t, k).iter().any(|p| ldim_by_trees(&restrict_all(f, p)) == d))
}

/// SOA classifier computed from the tree-enumeration Ldim.
pub fn soa_by_trees(f: &Fns) -> Vec<i8> {
    let n = f[0].len();
    (0..n)
        .map(|x| {
            if ldim_by_trees(&restrict(f, x, 1)) >= ldim_by_trees(&restrict(f, x, -1)) {
                1
            } else {
                -1
            }
        })
        .collect()
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-10 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Value of `min_D max_x P_{h~D}[h(x) != f(x)]` by support enumeration:
/// for every pair of equal-size supports solve the indifference equations
/// and keep the first pair that forms an equilibrium.
pub fn game_value_by_supports(f: &Fns, f_hat: &[i8]) -> f64 {
    let rows = f.len();
    let cols = f_hat.len();
    let loss = |h: usize, x: usize| (f[h][x] != f_hat[x]) as u8 as f64;
    let subsets = |n: usize, s: usize| -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == s)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    };
    for s in 1..=rows.min(cols) {
        for rs in subsets(rows, s) {
            for cs in subsets(cols, s) {
                // D on rs equalizes the columns in cs at value v:
                // sum_h D_h loss(h, x) - v = 0 for x in cs, sum_h D_h = 1
                let mut a = vec![vec![0.0; s + 1]; s + 1];
                let mut b = vec![0.0; s + 1];
                for (i, &x) in cs.iter().enumerate() {
                    for (j, &h) in rs.iter().enumerate() {
                        a[i][j] = loss(h, x);
                    }
                    a[i][s] = -1.0;
                }
                a[s][..s].fill(1.0);
                b[s] = 1.0;
                let Some(dv) = solve(a, b) else { continue };
                // P on cs equalizes the rows in rs at value w
                let mut a = vec![vec![0.0; s + 1]; s + 1];
                let mut b = vec![0.0; s + 1];
                for (i, &h) in rs.iter().enumerate() {
                    for (j, &x) in cs.iter().enumerate() {
                        a[i][j] = loss(h, x);
                    }
                    a[i][s] = -1.0;
                }
                a[s][..s].fill(1.0);
                b[s] = 1.0;
                let Some(pw) = solve(a, b) else { continue };
                let (d, v) = (&dv[..s], dv[s]);
                let (p, w) = (&pw[..s], pw[s]);
                if d.iter().chain(p).any(|&q| q < -1e-9) || (v - w).abs() > 1e-9 {
                    continue;
                }
                let row_max = (0..cols)
                    .map(|x| rs.iter().zip(d).map(|(&h, q)| q * loss(h, x)).sum::<f64>())
                    .fold(f64::NEG_INFINITY, f64::max);
                let col_min = (0..rows)
                    .map(|h| cs.iter().zip(p).map(|(&x, q)| q * loss(h, x)).sum::<f64>())
                    .fold(f64::INFINITY, f64::min);
                if row_max <= v + 1e-9 && col_min >= v - 1e-9 {
                    return v;
                }
            }
        }
    }
    panic!("no equilibrium found by support enumeration")
}

pub fn hyp(signs: &[i8]) -> Hypothesis {
    Hypothesis::new(
        signs
            .iter()
            .map(|&s| if s > 0 { Label::Pos } else { Label::Neg })
            .collect(),
    )
}

/// Every subclass of the `2^n` functions on `n` points with at most
/// `max_size` members.
pub fn all_small_classes(n: usize, max_size: usize) -> Vec<HypothesisClass> {
    let total = 1usize << n;
    let all: Vec<Vec<i8>> = (0..total)
        .map(|c| (0..n).map(|x| if c >> x & 1 == 1 { 1 } else { -1 }).collect())
        .collect();
    (0u32..1 << total)
        .filter(|m| m.count_ones() as usize <= max_size)
        .map(|m| {
            HypothesisClass::new(
                n,
                (0..total).filter(|i| m >> i & 1 == 1).map(|i| hyp(&all[i])),
            )
            .expect("valid class")
        })
        .collect()
}
