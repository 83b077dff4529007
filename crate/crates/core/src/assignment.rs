//! O(n^3) Hungarian algorithm (shortest augmenting path formulation) for the
//! square linear assignment problem. Used to match components across
//! modalities, runs, and against simulation ground truth.

use crate::matrix::Mat;
use crate::real::Real;

/// Minimize the total cost of a square assignment; returns `assign` where
/// row `i` is assigned to column `assign[i]`.
pub fn solve_min<T: Real>(cost: &Mat<T>) -> Vec<usize> {
    let n = cost.rows();
    assert_eq!(n, cost.cols(), "assignment expects a square cost matrix");
    // Jonker-Volgenant style shortest augmenting paths with potentials,
    // 1-indexed internally to keep the sentinel column 0.
    let inf = T::infinity();
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut way = vec![0usize; n + 1];
    let mut match_col = vec![0usize; n + 1]; // column -> row (1-indexed, 0 = free)

    for i in 1..=n {
        match_col[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = match_col[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1, j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[match_col[j]] = u[match_col[j]] + delta;
                    v[j] = v[j] - delta;
                } else {
                    minv[j] = minv[j] - delta;
                }
            }
            j0 = j1;
            if match_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            match_col[j0] = match_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assign = vec![0usize; n];
    for j in 1..=n {
        if match_col[j] > 0 {
            assign[match_col[j] - 1] = j - 1;
        }
    }
    assign
}

/// Maximize total similarity: row `i` paired with column `result[i]`.
pub fn solve_max<T: Real>(similarity: &Mat<T>) -> Vec<usize> {
    solve_min(&similarity.map(|x| -x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_on_diagonal_dominant() {
        let sim = Mat::from_vec(3, 3, vec![0.9, 0.1, 0.0, 0.2, 0.8, 0.1, 0.0, 0.3, 0.7]).unwrap();
        assert_eq!(solve_max(&sim), vec![0, 1, 2]);
    }

    #[test]
    fn recovers_reversal() {
        let sim = Mat::from_vec(3, 3, vec![0.0, 0.1, 0.9, 0.1, 0.9, 0.0, 0.9, 0.0, 0.1]).unwrap();
        assert_eq!(solve_max(&sim), vec![2, 1, 0]);
    }

    #[test]
    fn minimizes_known_cost() {
        // Classic example: optimal assignment is (0,1), (1,0), (2,2) = 5.
        let cost = Mat::from_vec(3, 3, vec![4.0, 1.0, 3.0, 2.0, 0.0, 5.0, 3.0, 2.0, 2.0]).unwrap();
        let a = solve_min(&cost);
        let total: f64 = a.iter().enumerate().map(|(i, &j)| cost[(i, j)]).sum();
        assert_eq!(total, 5.0);
    }

    #[test]
    fn brute_force_agreement_on_random_4x4() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let data: Vec<f64> = (0..16).map(|_| rng.random_range(0.0..1.0)).collect();
            let cost = Mat::from_vec(4, 4, data).unwrap();
            let a = solve_min(&cost);
            let got: f64 = a.iter().enumerate().map(|(i, &j)| cost[(i, j)]).sum();
            // Brute force over all 24 permutations.
            let mut best = f64::INFINITY;
            let perms = [
                [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2],
                [0, 3, 2, 1], [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0],
                [1, 3, 0, 2], [1, 3, 2, 0], [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3],
                [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0], [3, 0, 1, 2], [3, 0, 2, 1],
                [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
            ];
            for p in &perms {
                let s: f64 = p.iter().enumerate().map(|(i, &j)| cost[(i, j)]).sum();
                best = best.min(s);
            }
            assert!((got - best).abs() < 1e-12, "suboptimal: {got} vs {best}");
        }
    }
}
