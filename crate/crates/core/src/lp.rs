//! Small exact linear programs (two-phase tableau simplex, Bland's rule).
//!
//! Only used for feasibility and bounded-objective questions on tiny systems,
//! such as the supporting-cap checks.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Q, x: Vec<Q> },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

/// `maximize ⟨objective, x⟩` subject to linear constraints and per-variable bounds.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    lower: Vec<Option<Q>>,
    upper: Vec<Option<Q>>,
    constraints: Vec<(Vec<Q>, Relation, Q)>,
    objective: Vec<Q>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable with optional bounds and returns its index.
    pub fn var(&mut self, lower: Option<Q>, upper: Option<Q>) -> usize {
        self.lower.push(lower);
        self.upper.push(upper);
        self.objective.push(Q::zero());
        self.lower.len() - 1
    }

    pub fn nonneg(&mut self) -> usize {
        self.var(Some(Q::zero()), None)
    }

    pub fn free(&mut self) -> usize {
        self.var(None, None)
    }

    pub fn n_vars(&self) -> usize {
        self.lower.len()
    }

    /// Adds `Σ coeffs[j]·x_j (rel) rhs` from sparse `(index, coefficient)` pairs.
    pub fn constrain(&mut self, coeffs: &[(usize, Q)], rel: Relation, rhs: Q) {
        let mut row = vec![Q::zero(); self.n_vars()];
        for (j, c) in coeffs {
            row[*j] += c.clone();
        }
        self.constraints.push((row, rel, rhs));
    }

    pub fn maximize(&mut self, coeffs: &[(usize, Q)]) {
        self.objective = vec![Q::zero(); self.n_vars()];
        for (j, c) in coeffs {
            self.objective[*j] += c.clone();
        }
    }

    pub fn solve(&self) -> LpOutcome {
        let nv = self.n_vars();
        // x_j = shift_j + Σ sign·(standard column)
        let mut cols_of: Vec<Vec<(usize, Q)>> = Vec::with_capacity(nv);
        let mut shift: Vec<Q> = Vec::with_capacity(nv);
        let mut ncols = 0usize;
        let mut extra: Vec<(Vec<(usize, Q)>, Q)> = Vec::new();
        for j in 0..nv {
            match (&self.lower[j], &self.upper[j]) {
                (Some(l), u) => {
                    cols_of.push(vec![(ncols, Q::one())]);
                    shift.push(l.clone());
                    if let Some(u) = u {
                        extra.push((vec![(ncols, Q::one())], u - l));
                    }
                    ncols += 1;
                }
                (None, Some(u)) => {
                    cols_of.push(vec![(ncols, -Q::one())]);
                    shift.push(u.clone());
                    ncols += 1;
                }
                (None, None) => {
                    cols_of.push(vec![(ncols, Q::one()), (ncols + 1, -Q::one())]);
                    shift.push(Q::zero());
                    ncols += 2;
                }
            }
        }
        let mut rows: Vec<(Vec<Q>, Relation, Q)> = Vec::new();
        for (a, rel, b) in &self.constraints {
            let mut row = vec![Q::zero(); ncols];
            let mut rhs = b.clone();
            for j in 0..nv {
                if a[j].is_zero() {
                    continue;
                }
                rhs -= &a[j] * &shift[j];
                for (c, s) in &cols_of[j] {
                    row[*c] += &a[j] * s;
                }
            }
            rows.push((row, *rel, rhs));
        }
        for (sparse, b) in extra {
            let mut row = vec![Q::zero(); ncols];
            for (c, s) in sparse {
                row[c] += s;
            }
            rows.push((row, Relation::Le, b));
        }
        let mut obj = vec![Q::zero(); ncols];
        let mut obj_shift = Q::zero();
        for j in 0..nv {
            if self.objective[j].is_zero() {
                continue;
            }
            obj_shift += &self.objective[j] * &shift[j];
            for (c, s) in &cols_of[j] {
                obj[*c] += &self.objective[j] * s;
            }
        }

        match standard_simplex(&rows, ncols, &obj) {
            Standard::Infeasible => LpOutcome::Infeasible,
            Standard::Unbounded => LpOutcome::Unbounded,
            Standard::Optimal(z) => {
                let x: Vec<Q> =
                    (0..nv).map(|j| cols_of[j].iter().fold(shift[j].clone(), |acc, (c, s)| acc + s * &z[*c])).collect();
                let value = self.objective.iter().zip(&x).fold(Q::zero(), |acc, (c, v)| acc + c * v);
                debug_assert_eq!(
                    value.clone(),
                    obj_shift + obj.iter().zip(&z).fold(Q::zero(), |acc, (c, v)| acc + c * v)
                );
                LpOutcome::Optimal { value, x }
            }
        }
    }
}

enum Standard {
    Infeasible,
    Unbounded,
    Optimal(Vec<Q>),
}

/// `max ⟨obj, z⟩`, `z ≥ 0`, rows `a·z (rel) b`.
fn standard_simplex(rows: &[(Vec<Q>, Relation, Q)], n: usize, obj: &[Q]) -> Standard {
    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let slack0 = n;
    let art0 = n + n_slack;
    let total = art0 + m;
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut s = 0;
    for (i, (a, rel, b)) in rows.iter().enumerate() {
        let mut row = vec![Q::zero(); total + 1];
        row[..n].clone_from_slice(a);
        match rel {
            Relation::Le => {
                row[slack0 + s] = Q::one();
                s += 1;
            }
            Relation::Ge => {
                row[slack0 + s] = -Q::one();
                s += 1;
            }
            Relation::Eq => {}
        }
        row[total] = b.clone();
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[art0 + i] = Q::one();
        basis.push(art0 + i);
        t.push(row);
    }

    let mut phase1 = vec![Q::zero(); total];
    for c in phase1.iter_mut().skip(art0) {
        *c = -Q::one();
    }
    let allowed_all = vec![true; total];
    if run(&mut t, &mut basis, &phase1, &allowed_all).is_err() {
        unreachable!("phase one is bounded");
    }
    let infeasibility: Q = (0..m).filter(|&i| basis[i] >= art0).map(|i| t[i][total].clone()).sum();
    if infeasibility.is_positive() {
        return Standard::Infeasible;
    }
    // Drive remaining (zero-level) artificials out of the basis.
    let mut i = 0;
    while i < t.len() {
        if basis[i] >= art0 {
            if let Some(c) = (0..art0).find(|&c| !t[i][c].is_zero()) {
                pivot(&mut t, &mut basis, i, c);
            } else {
                t.remove(i);
                basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    let mut phase2 = vec![Q::zero(); total];
    phase2[..n].clone_from_slice(obj);
    let allowed: Vec<bool> = (0..total).map(|c| c < art0).collect();
    if run(&mut t, &mut basis, &phase2, &allowed).is_err() {
        return Standard::Unbounded;
    }
    let mut z = vec![Q::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            z[b] = t[i][total].clone();
        }
    }
    Standard::Optimal(z)
}

fn pivot(t: &mut [Vec<Q>], basis: &mut [usize], r: usize, c: usize) {
    let width = t[r].len();
    let p = t[r][c].clone();
    for j in 0..width {
        if !t[r][j].is_zero() {
            t[r][j] = &t[r][j] / &p;
        }
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for j in 0..width {
            if !prow[j].is_zero() {
                row[j] = &row[j] - &f * &prow[j];
            }
        }
    }
    basis[r] = c;
}

fn run(t: &mut [Vec<Q>], basis: &mut [usize], obj: &[Q], allowed: &[bool]) -> Result<(), ()> {
    let total = obj.len();
    loop {
        let entering = (0..total).find(|&j| {
            if !allowed[j] || basis.contains(&j) {
                return false;
            }
            let mut r = obj[j].clone();
            for (i, &b) in basis.iter().enumerate() {
                if !t[i][j].is_zero() && !obj[b].is_zero() {
                    r -= &obj[b] * &t[i][j];
                }
            }
            r.is_positive()
        });
        let Some(c) = entering else { return Ok(()) };
        let mut best: Option<(usize, Q)> = None;
        for i in 0..t.len() {
            if t[i][c].is_positive() {
                let ratio = &t[i][total] / &t[i][c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = best else { return Err(()) };
        pivot(t, basis, r, c);
    }
}
