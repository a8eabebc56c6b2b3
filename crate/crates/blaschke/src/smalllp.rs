//! Randomized incremental linear programming in dimension <= 4.
//!
//! Solves  maximize c.x  subject to  a_i.x <= b_i  and  |x_j| <= box_bound,
//! by Seidel's algorithm: insert constraints in a deterministic shuffled
//! order; when the current optimum violates a constraint, the new optimum
//! lies on that constraint's hyperplane, so eliminate one variable and
//! recurse on the constraints seen so far.
//!
//! Expected O(d! n) time. Used for largest-inscribed-disk and
//! largest-inscribed-ball centers, where the constraint rows are unit
//! normals and the pivot choice (largest |a_j|) keeps elimination stable.

use crate::rng::SplitMix64;

#[derive(Clone, Copy, Debug)]
pub struct Constraint {
    pub a: [f64; 4],
    pub b: f64,
}

/// `None` means infeasible. `dim` in 1..=4; only the first `dim` entries of
/// the rows and of the objective are read.
pub fn maximize(
    dim: usize,
    objective: &[f64; 4],
    cons: &[Constraint],
    box_bound: f64,
) -> Option<[f64; 4]> {
    assert!((1..=4).contains(&dim));
    assert!(box_bound > 0.0 && box_bound.is_finite());
    let mut order: Vec<usize> = (0..cons.len()).collect();
    let mut rng = SplitMix64::new(0x5e1de1 ^ (cons.len() as u64) << 8 ^ dim as u64);
    for i in (1..order.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    let shuffled: Vec<Constraint> = order.iter().map(|&i| cons[i]).collect();
    solve(dim, objective, &shuffled, box_bound)
}

fn feas_eps(b: f64, box_bound: f64) -> f64 {
    1e-11 * (b.abs() + box_bound)
}

fn solve(dim: usize, c: &[f64; 4], cons: &[Constraint], m: f64) -> Option<[f64; 4]> {
    if dim == 1 {
        let (mut lo, mut hi) = (-m, m);
        for con in cons {
            let a = con.a[0];
            if a.abs() < 1e-300 {
                if con.b < -feas_eps(con.b, m) {
                    return None;
                }
                continue;
            }
            let t = con.b / a;
            if a > 0.0 {
                hi = hi.min(t);
            } else {
                lo = lo.max(t);
            }
        }
        if lo > hi + feas_eps(lo.abs().max(hi.abs()), m) {
            return None;
        }
        let x0 = if c[0] > 0.0 {
            hi
        } else if c[0] < 0.0 {
            lo
        } else {
            0f64.clamp(lo.min(hi), hi.max(lo))
        };
        let mut x = [0.0; 4];
        x[0] = x0;
        return Some(x);
    }

    // Start at the box vertex maximizing the objective.
    let mut x = [0.0; 4];
    for j in 0..dim {
        x[j] = if c[j] > 0.0 {
            m
        } else if c[j] < 0.0 {
            -m
        } else {
            0.0
        };
    }

    for (i, con) in cons.iter().enumerate() {
        let val: f64 = (0..dim).map(|j| con.a[j] * x[j]).sum();
        if val <= con.b + feas_eps(con.b, m) {
            continue;
        }
        // Optimum of the first i+1 constraints lies on this hyperplane.
        let piv = (0..dim)
            .max_by(|&p, &q| con.a[p].abs().partial_cmp(&con.a[q].abs()).unwrap())
            .unwrap();
        let apiv = con.a[piv];
        if apiv.abs() < 1e-300 {
            // All-zero row that is violated: infeasible.
            return None;
        }
        // x_piv = (b - sum_{k != piv} a_k x_k) / a_piv. Substitute into the
        // objective, the previous constraints, and the box bounds of x_piv.
        let reduce_row = |a: &[f64; 4], b: f64| -> Constraint {
            let f = a[piv] / apiv;
            let mut ra = [0.0; 4];
            let mut t = 0;
            for k in 0..dim {
                if k != piv {
                    ra[t] = a[k] - f * con.a[k];
                    t += 1;
                }
            }
            Constraint {
                a: ra,
                b: b - f * con.b,
            }
        };
        let mut reduced: Vec<Constraint> = Vec::with_capacity(i + 2);
        for prev in &cons[..i] {
            reduced.push(reduce_row(&prev.a, prev.b));
        }
        for sign in [1.0, -1.0] {
            let mut row = [0.0; 4];
            row[piv] = sign;
            reduced.push(reduce_row(&row, m));
        }
        let mut rc = [0.0; 4];
        {
            let f = c[piv] / apiv;
            let mut t = 0;
            for k in 0..dim {
                if k != piv {
                    rc[t] = c[k] - f * con.a[k];
                    t += 1;
                }
            }
        }
        let sub = solve(dim - 1, &rc, &reduced, m)?;
        // Expand back to `dim` coordinates.
        let mut t = 0;
        for k in 0..dim {
            if k != piv {
                x[k] = sub[t];
                t += 1;
            }
        }
        let rest: f64 = (0..dim).filter(|&k| k != piv).map(|k| con.a[k] * x[k]).sum();
        x[piv] = (con.b - rest) / apiv;
    }
    Some(x)
}
