//! Small dense determinants and triangular solves.
//!
//! Matrices are row-major `Vec`s; sizes here never exceed a few dozen.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

/// Determinant of an `n × n` lower-Hessenberg matrix (`a[i][j] = 0` for
/// `j > i + 1`) given entrywise, by the leading-principal-minor recurrence
///
/// `D_k = Σ_{i=1}^{k} (-1)^{k-i} a_{k,i} (Π_{m=i}^{k-1} a_{m,m+1}) D_{i-1}`
///
/// in O(n²) entry reads. Entries above the superdiagonal are never read.
pub fn hessenberg_det<T, F>(n: usize, entry: F) -> T
where
    T: Copy + Zero + One + core::ops::Sub<Output = T>,
    F: Fn(usize, usize) -> T,
{
    let mut minors: Vec<T> = Vec::with_capacity(n + 1);
    minors.push(T::one());
    for k in 1..=n {
        let mut acc = T::zero();
        let mut chain = T::one();
        let mut positive = true;
        for i in (1..=k).rev() {
            let term = entry(k - 1, i - 1) * chain * minors[i - 1];
            acc = if positive { acc + term } else { acc - term };
            positive = !positive;
            if i > 1 {
                chain = chain * entry(i - 2, i - 1);
            }
        }
        minors.push(acc);
    }
    minors[n]
}

/// Determinant by LU factorisation with partial pivoting. Consumes `a`.
pub fn lu_det(mut a: Vec<f64>, n: usize) -> f64 {
    assert_eq!(a.len(), n * n, "matrix is not {n}×{n}");
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| {
                libm::fabs(a[r * n + col]).total_cmp(&libm::fabs(a[s * n + col]))
            })
            .expect("non-empty range");
        let pv = a[pivot * n + col];
        if pv == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        det *= pv;
        for r in col + 1..n {
            let factor = a[r * n + col] / pv;
            if factor != 0.0 {
                for j in col + 1..n {
                    a[r * n + j] -= factor * a[col * n + j];
                }
            }
        }
    }
    det
}

/// Solves `L y = b` for lower-triangular `L` given entrywise.
pub fn forward_substitute<T, F>(n: usize, entry: F, b: &[T]) -> Vec<T>
where
    T: Copy + Zero + core::ops::Sub<Output = T> + core::ops::Mul<Output = T> + core::ops::Div<Output = T>,
    F: Fn(usize, usize) -> T,
{
    let mut y: Vec<T> = vec![T::zero(); n];
    for i in 0..n {
        let mut r = b[i];
        for (j, &yj) in y.iter().enumerate().take(i) {
            r = r - entry(i, j) * yj;
        }
        y[i] = r / entry(i, i);
    }
    y
}

/// Solves `R y = b` for upper-triangular `R` given entrywise.
pub fn back_substitute<T, F>(n: usize, entry: F, b: &[T]) -> Vec<T>
where
    T: Copy + Zero + core::ops::Sub<Output = T> + core::ops::Mul<Output = T> + core::ops::Div<Output = T>,
    F: Fn(usize, usize) -> T,
{
    let mut y: Vec<T> = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut r = b[i];
        for (j, &yj) in y.iter().enumerate().skip(i + 1) {
            r = r - entry(i, j) * yj;
        }
        y[i] = r / entry(i, i);
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    /// Leibniz expansion over all permutations; independent of both routes.
    fn leibniz(a: &[f64], n: usize) -> f64 {
        fn permutations(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == n {
                out.push(prefix.clone());
                return;
            }
            for c in 0..n {
                if !prefix.contains(&c) {
                    prefix.push(c);
                    permutations(prefix, n, out);
                    prefix.pop();
                }
            }
        }
        let mut perms = Vec::new();
        permutations(&mut Vec::new(), n, &mut perms);
        perms
            .iter()
            .map(|perm| {
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| perm[i] > perm[j])
                    .count();
                let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
                sign * (0..n).map(|r| a[r * n + perm[r]]).product::<f64>()
            })
            .sum()
    }

    fn sample_hessenberg(n: usize) -> Vec<f64> {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if j <= i + 1 {
                    a[i * n + j] = ((i * 7 + j * 3) % 11) as f64 / 3.0 - 1.4 + if i == j { 2.0 } else { 0.0 };
                }
            }
        }
        a
    }

    #[test]
    fn leibniz_sanity() {
        assert_eq!(leibniz(&[1.0, 2.0, 3.0, 4.0], 2), -2.0);
        assert_eq!(leibniz(&[2.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 4.0], 3), 24.0);
        assert_eq!(leibniz(&[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0], 3), 1.0);
    }

    #[test]
    fn hessenberg_recurrence_matches_leibniz() {
        for n in 1..=7 {
            let a = sample_hessenberg(n);
            let h = hessenberg_det(n, |i, j| a[i * n + j]);
            let l = leibniz(&a, n);
            assert!((h - l).abs() <= 1e-10 * l.abs().max(1.0), "n={n}: {h} vs {l}");
        }
    }

    #[test]
    fn lu_matches_leibniz_on_dense() {
        for n in 1..=6 {
            let a: Vec<f64> = (0..n * n).map(|k| ((k * 13 + 5) % 17) as f64 - 8.0).collect();
            let d = lu_det(a.clone(), n);
            let l = leibniz(&a, n);
            assert!((d - l).abs() <= 1e-9 * l.abs().max(1.0), "n={n}: {d} vs {l}");
        }
    }

    #[test]
    fn lu_detects_singular() {
        assert_eq!(lu_det(vec![1.0, 2.0, 2.0, 4.0], 2), 0.0);
    }

    #[test]
    fn hessenberg_accepts_complex_entries() {
        let n = 3;
        let a = sample_hessenberg(n);
        let h: Complex64 = hessenberg_det(n, |i, j| Complex64::new(a[i * n + j], 0.0));
        assert!((h.re - leibniz(&a, n)).abs() < 1e-12);
        assert_eq!(h.im, 0.0);
    }

    #[test]
    fn triangular_solves_invert() {
        let l = [2.0, 0.0, 0.0, 1.0, 3.0, 0.0, -1.0, 0.5, 4.0];
        let b = [2.0, 5.0, 3.0];
        let y = forward_substitute(3, |i, j| l[i * 3 + j], &b);
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| l[i * 3 + j] * y[j]).sum();
            assert!((r - b[i]).abs() < 1e-14);
        }
        let y = back_substitute(3, |i, j| l[j * 3 + i], &b);
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| l[j * 3 + i] * y[j]).sum();
            assert!((r - b[i]).abs() < 1e-14);
        }
    }
}
