//! Exact feasibility oracle: phase-one simplex over the rationals with
//! Bland's rule. All variables are implicitly nonnegative.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rel {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub(crate) struct LpProblem {
    nvars: usize,
    rows: Vec<(Vec<BigRational>, Rel, BigRational)>,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl LpProblem {
    pub(crate) fn new(nvars: usize) -> Self {
        LpProblem {
            nvars,
            rows: Vec::new(),
        }
    }

    pub(crate) fn add(&mut self, coeffs: &[i64], rel: Rel, rhs: i64) {
        self.add_rational(coeffs.iter().map(|&c| rat(c)).collect(), rel, rat(rhs));
    }

    pub(crate) fn add_rational(&mut self, coeffs: Vec<BigRational>, rel: Rel, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.nvars);
        self.rows.push((coeffs, rel, rhs));
    }

    pub(crate) fn feasible(&self) -> bool {
        self.solve().is_some()
    }

    /// A feasible point, or `None` if the system is infeasible.
    pub(crate) fn solve(&self) -> Option<Vec<BigRational>> {
        let m = self.rows.len();
        if m == 0 {
            return Some(vec![BigRational::zero(); self.nvars]);
        }
        let nslack = self.rows.iter().filter(|r| r.1 != Rel::Eq).count();
        let art0 = self.nvars + nslack;
        let ncols = art0 + m;
        // Tableau rows: [coefficients | rhs].
        let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
        let mut basis = Vec::with_capacity(m);
        let mut s = self.nvars;
        for (i, (a, rel, b)) in self.rows.iter().enumerate() {
            let mut row = vec![BigRational::zero(); ncols + 1];
            row[..self.nvars].clone_from_slice(a);
            match rel {
                Rel::Le => {
                    row[s] = BigRational::one();
                    s += 1;
                }
                Rel::Ge => {
                    row[s] = -BigRational::one();
                    s += 1;
                }
                Rel::Eq => {}
            }
            row[ncols] = b.clone();
            if b.is_negative() {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
            }
            row[art0 + i] = BigRational::one();
            basis.push(art0 + i);
            t.push(row);
        }
        // Objective: minimize the sum of artificials, stored as reduced costs.
        let mut obj = vec![BigRational::zero(); ncols + 1];
        for row in &t {
            for j in 0..art0 {
                obj[j] -= &row[j];
            }
            obj[ncols] -= &row[ncols];
        }
        t.push(obj);

        loop {
            let z = &t[m];
            let Some(enter) = (0..ncols).find(|&j| z[j].is_negative()) else {
                break;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..m {
                if t[i][enter].is_positive() {
                    let ratio = &t[i][ncols] / &t[i][enter];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                // Phase one is bounded below by zero.
                unreachable!("unbounded phase-one objective");
            };
            pivot(&mut t, r, enter);
            basis[r] = enter;
        }

        if !t[m][ncols].is_zero() {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.nvars];
        for (i, &b) in basis.iter().enumerate() {
            if b < self.nvars {
                x[b] = t[i][ncols].clone();
            }
        }
        Some(x)
    }
}

fn pivot(t: &mut [Vec<BigRational>], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        *v = &*v / &p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, pv) in row.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_systems() {
        let mut lp = LpProblem::new(2);
        lp.add(&[1, 1], Rel::Eq, 1);
        lp.add(&[1, 0], Rel::Ge, 2);
        assert!(!lp.feasible());

        let mut lp = LpProblem::new(2);
        lp.add(&[1, -1], Rel::Eq, 0);
        lp.add(&[1, 0], Rel::Ge, 1);
        lp.add(&[1, 1], Rel::Le, 5);
        let x = lp.solve().unwrap();
        assert_eq!(x[0], x[1]);
        assert!(x[0] >= rat(1));

        let mut lp = LpProblem::new(1);
        lp.add(&[-1], Rel::Ge, -3);
        lp.add(&[2], Rel::Eq, 3);
        assert_eq!(
            lp.solve().unwrap(),
            vec![BigRational::new(3.into(), 2.into())]
        );
    }

    #[test]
    fn degenerate_cycling_instance_terminates() {
        // Beale-style degenerate system; Bland's rule must not cycle.
        let mut lp = LpProblem::new(4);
        lp.add(&[1, -2, -1, 1], Rel::Eq, 0);
        lp.add(&[3, -1, -4, 2], Rel::Le, 0);
        lp.add(&[1, 1, 1, 1], Rel::Eq, 1);
        assert!(lp.feasible());
    }
}
