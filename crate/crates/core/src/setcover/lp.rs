//! Exact LP relaxation. The dual packing problem
//! `max sum y  s.t.  sum_{w covered by g} y_w <= 1, y >= 0`
//! starts from the feasible slack basis, so a single simplex phase with
//! Bland's rule suffices. Covering values are read off the slack reduced
//! costs. Arithmetic runs on `i128` ratios and is redone with big rationals
//! if anything overflows.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

use super::ScpInstance;
use crate::geometry::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult {
    pub value: Rat,
    /// Covering value per column.
    pub primal: Vec<Rat>,
    /// Packing value per row.
    pub duals: Vec<Rat>,
}

impl LpResult {
    pub fn is_integral(&self) -> bool {
        self.primal.iter().all(|x| x.is_integer())
    }
}

struct Overflow;

trait Field: Clone + PartialOrd + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Result<Self, Overflow>;
    fn sub(&self, o: &Self) -> Result<Self, Overflow>;
    fn mul(&self, o: &Self) -> Result<Self, Overflow>;
    fn div(&self, o: &Self) -> Result<Self, Overflow>;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn to_rat(&self) -> Rat;
}

impl Field for Ratio<i128> {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_add(o).ok_or(Overflow)
    }
    fn sub(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_sub(o).ok_or(Overflow)
    }
    fn mul(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_mul(o).ok_or(Overflow)
    }
    fn div(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_div(o).ok_or(Overflow)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn to_rat(&self) -> Rat {
        Rat::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl Field for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self + o)
    }
    fn sub(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self - o)
    }
    fn mul(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self * o)
    }
    fn div(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self / o)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn to_rat(&self) -> Rat {
        self.clone()
    }
}

/// Solves the LP relaxation exactly.
pub fn lp_solve(inst: &ScpInstance) -> LpResult {
    match simplex::<Ratio<i128>>(inst) {
        Ok(r) => r,
        Err(Overflow) => simplex::<Rat>(inst).unwrap_or_else(|_| unreachable!("big rationals do not overflow")),
    }
}

fn simplex<T: Field>(inst: &ScpInstance) -> Result<LpResult, Overflow> {
    let nr = inst.n_rows();
    let nc = inst.n_cols();
    let width = nr + nc;
    // One constraint per column; variables are the row duals then slacks.
    let mut tab: Vec<Vec<T>> = vec![vec![T::zero(); width]; nc];
    let mut rhs: Vec<T> = vec![T::one(); nc];
    for (w, r) in inst.rows().iter().enumerate() {
        for &g in r {
            tab[g][w] = T::one();
        }
    }
    for (g, row) in tab.iter_mut().enumerate() {
        row[nr + g] = T::one();
    }
    let mut basis: Vec<usize> = (0..nc).map(|g| nr + g).collect();
    let mut cost: Vec<T> = (0..width).map(|j| if j < nr { T::one() } else { T::zero() }).collect();
    let mut value = T::zero();

    while let Some(enter) = (0..width).find(|&j| cost[j].is_positive()) {
        let mut leave: Option<(usize, T)> = None;
        for i in 0..nc {
            let a = &tab[i][enter];
            if !a.is_positive() {
                continue;
            }
            let ratio = rhs[i].div(a)?;
            let better = match &leave {
                None => true,
                Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (p, _) = leave.expect("packing LP is bounded when every row is coverable");
        pivot(&mut tab, &mut rhs, &mut cost, &mut value, p, enter)?;
        basis[p] = enter;
    }

    let mut duals = vec![<Rat as Zero>::zero(); nr];
    for (i, &b) in basis.iter().enumerate() {
        if b < nr {
            duals[b] = rhs[i].to_rat();
        }
    }
    let primal = (0..nc).map(|g| -cost[nr + g].to_rat()).collect();
    Ok(LpResult {
        value: value.to_rat(),
        primal,
        duals,
    })
}

fn pivot<T: Field>(
    tab: &mut [Vec<T>],
    rhs: &mut [T],
    cost: &mut [T],
    value: &mut T,
    p: usize,
    enter: usize,
) -> Result<(), Overflow> {
    let a = tab[p][enter].clone();
    let nz: Vec<usize> = (0..tab[p].len()).filter(|&j| !tab[p][j].is_zero()).collect();
    for &j in &nz {
        tab[p][j] = tab[p][j].div(&a)?;
    }
    rhs[p] = rhs[p].div(&a)?;
    let prow: Vec<(usize, T)> = nz.iter().map(|&j| (j, tab[p][j].clone())).collect();
    let prhs = rhs[p].clone();
    for i in 0..tab.len() {
        if i == p || tab[i][enter].is_zero() {
            continue;
        }
        let f = tab[i][enter].clone();
        for (j, v) in &prow {
            tab[i][*j] = tab[i][*j].sub(&f.mul(v)?)?;
        }
        rhs[i] = rhs[i].sub(&f.mul(&prhs)?)?;
    }
    if !cost[enter].is_zero() {
        let f = cost[enter].clone();
        for (j, v) in &prow {
            cost[*j] = cost[*j].sub(&f.mul(v)?)?;
        }
        *value = value.add(&f.mul(&prhs)?)?;
    }
    Ok(())
}
