//! Reference implementations shared by the integration tests. They avoid
//! the crate's own elimination and graph code on purpose.

#![allow(dead_code)]

use std::collections::VecDeque;

use morsereduce::{BinaryImage, Gf2Matrix, ReductionTriple};
use rand::Rng;

/// Rank by textbook elimination on a `Vec<Vec<bool>>` copy.
pub fn naive_rank(m: &Gf2Matrix) -> usize {
    let mut a: Vec<Vec<bool>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..a.len()).find(|&r| a[r][c]) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && a[r][c] {
                let pivot = a[rank].clone();
                for (x, y) in a[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Entrywise product over GF(2) without the packed kernels.
pub fn naive_mul(a: &Gf2Matrix, b: &Gf2Matrix) -> Gf2Matrix {
    assert_eq!(a.cols(), b.rows());
    Gf2Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols())
            .filter(|&k| a.get(i, k) && b.get(k, j))
            .count()
            % 2
            == 1
    })
}

/// 8-connected components of the black pixels by breadth-first search.
pub fn flood_components(img: &BinaryImage) -> usize {
    let (w, h) = (img.width(), img.height());
    let mut seen = vec![false; w * h];
    let mut count = 0;
    for start in 0..w * h {
        if seen[start] || !img.get(start / w, start % w) {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            let (r, c) = ((p / w) as isize, (p % w) as isize);
            for dr in -1..=1 {
                for dc in -1..=1 {
                    let (nr, nc) = (r + dr, c + dc);
                    if nr < 0 || nc < 0 || nr >= h as isize || nc >= w as isize {
                        continue;
                    }
                    let q = nr as usize * w + nc as usize;
                    if !seen[q] && img.get(nr as usize, nc as usize) {
                        seen[q] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
    }
    count
}

/// Cell counts read straight off the pixel grid.
pub fn grid_counts(img: &BinaryImage) -> [usize; 3] {
    let (w, h) = (img.width() as isize, img.height() as isize);
    let px =
        |r: isize, c: isize| r >= 0 && c >= 0 && r < h && c < w && img.get(r as usize, c as usize);
    let mut counts = [0; 3];
    for r in 0..=h {
        for c in 0..=w {
            if px(r - 1, c - 1) || px(r - 1, c) || px(r, c - 1) || px(r, c) {
                counts[0] += 1;
            }
            if c < w && (px(r - 1, c) || px(r, c)) {
                counts[1] += 1;
            }
            if r < h && (px(r, c - 1) || px(r, c)) {
                counts[1] += 1;
            }
        }
    }
    counts[2] = img.black_count();
    counts
}

/// Betti numbers of a planar pixel set: components, then the Euler
/// characteristic fixes the number of holes.
pub fn topological_betti(img: &BinaryImage) -> [usize; 3] {
    let [v, e, f] = grid_counts(img);
    let b0 = flood_components(img);
    let chi = v as isize - e as isize + f as isize;
    [b0, (b0 as isize - chi) as usize, 0]
}

/// The reduction identities and chain-map conditions, spelled out.
pub fn reduction_identities_hold(r: &ReductionTriple) -> bool {
    let (big, small) = (r.big(), r.small());
    let (lo, hi) = (big.lo(), big.hi());
    let eq = |a: Gf2Matrix, b: Gf2Matrix| a == b;
    let mul = |a: &Gf2Matrix, b: &Gf2Matrix| a.mul(b).expect("shapes");
    let add = |a: &Gf2Matrix, b: &Gf2Matrix| a.add(b).expect("shapes");
    for k in lo..=hi {
        let (f, g, h) = (r.f(k), r.g(k), r.h(k));
        let fg = mul(&f, &g);
        if !fg.is_identity() {
            return false;
        }
        let homotopy = add(&mul(&big.d(k + 1), &h), &mul(&r.h(k - 1), &big.d(k)));
        if !add(&mul(&g, &f), &homotopy).is_identity() {
            return false;
        }
        if !mul(&f, &r.h(k - 1)).is_zero()
            || !mul(&h, &g).is_zero()
            || !mul(&r.h(k + 1), &h).is_zero()
        {
            return false;
        }
        if k > lo {
            if !eq(mul(&small.d(k), &f), mul(&r.f(k - 1), &big.d(k))) {
                return false;
            }
            if !eq(mul(&big.d(k), &g), mul(&r.g(k - 1), &small.d(k))) {
                return false;
            }
        }
    }
    true
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, density: f64) -> Gf2Matrix {
    Gf2Matrix::from_fn(rows, cols, |_, _| rng.gen_bool(density))
}

/// `I + N` with `N` random strictly lower triangular.
pub fn random_unit_lower(rng: &mut impl Rng, n: usize, density: f64) -> Gf2Matrix {
    Gf2Matrix::from_fn(n, n, |i, j| i == j || (j < i && rng.gen_bool(density)))
}

/// A random invertible matrix: a product of unit triangular factors with
/// the rows shuffled.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> Gf2Matrix {
    let lower = random_unit_lower(rng, n, 0.3);
    let upper = random_unit_lower(rng, n, 0.3).transpose();
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let p = Gf2Matrix::from_fn(n, n, |i, j| order[i] == j);
    p.mul(&lower).unwrap().mul(&upper).unwrap()
}
