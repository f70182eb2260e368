//! Self-contained LP solver: two-phase revised simplex over equality
//! constraints with nonnegative variables, Dantzig pricing with a Bland's
//! rule fallback once pivoting degenerates, and an explicitly maintained
//! dense basis inverse.
//!
//! A simplex method is used deliberately: it terminates at a vertex, and for
//! the totally unimodular pruning constraints every vertex is 0/1. An
//! interior-point method could legally return a fractional point in the
//! middle of a degenerate optimal face.

use std::io::Write;

use crate::error::SolveError;

/// `min cost' x  s.t.  A x = b, x >= 0`, with A stored column-major sparse.
/// Upper bounds are intentionally absent: the pruning objectives are
/// minimized with nonnegative costs, so they are never active.
#[derive(Debug, Clone)]
pub struct StandardLP {
    pub n_rows: usize,
    pub n_cols: usize,
    cols: Vec<Vec<(usize, f64)>>,
    pub b: Vec<f64>,
    pub cost: Vec<f64>,
}

impl StandardLP {
    pub fn new(
        n_rows: usize,
        cols: Vec<Vec<(usize, f64)>>,
        b: Vec<f64>,
        cost: Vec<f64>,
    ) -> Result<Self, String> {
        if b.len() != n_rows {
            return Err(format!("b has {} entries, expected {n_rows}", b.len()));
        }
        if cost.len() != cols.len() {
            return Err(format!("cost has {} entries, expected {}", cost.len(), cols.len()));
        }
        for (j, col) in cols.iter().enumerate() {
            for &(r, v) in col {
                if r >= n_rows {
                    return Err(format!("column {j}: row index {r} out of range"));
                }
                if !v.is_finite() {
                    return Err(format!("column {j}: non-finite entry"));
                }
            }
        }
        if b.iter().chain(cost.iter()).any(|v| !v.is_finite()) {
            return Err("b and cost must be finite".into());
        }
        let n_cols = cols.len();
        Ok(StandardLP { n_rows, n_cols, cols, b, cost })
    }

    pub fn col(&self, j: usize) -> &[(usize, f64)] {
        &self.cols[j]
    }

    /// Writes the program in LP text format with fixed-point coefficients at
    /// 12 significant digits, for cross-checks with external solvers.
    pub fn write_lp_text(&self, out: &mut impl Write) -> std::io::Result<()> {
        fn sig(v: f64) -> String {
            if v == 0.0 {
                return "0".to_string();
            }
            let mag = v.abs().log10().floor() as i32;
            let decimals = (11 - mag).max(0) as usize;
            format!("{v:.decimals$}")
        }
        writeln!(out, "Minimize")?;
        let mut obj = String::from(" obj:");
        let mut any = false;
        for (j, &c) in self.cost.iter().enumerate() {
            if c != 0.0 {
                obj.push_str(&format!(" {} {} x{j}", if c < 0.0 { "-" } else { "+" }, sig(c.abs())));
                any = true;
            }
        }
        if !any {
            obj.push_str(" 0 x0");
        }
        writeln!(out, "{obj}")?;
        writeln!(out, "Subject To")?;
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.n_rows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                rows[r].push((j, v));
            }
        }
        for (r, row) in rows.iter().enumerate() {
            let mut line = format!(" c{r}:");
            for &(j, v) in row {
                line.push_str(&format!(" {} {} x{j}", if v < 0.0 { "-" } else { "+" }, sig(v.abs())));
            }
            line.push_str(&format!(" = {}", sig(self.b[r])));
            writeln!(out, "{line}")?;
        }
        writeln!(out, "End")
    }
}

/// Feasibility and optimality tolerances.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub feas_tol: f64,
    pub opt_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { feas_tol: 1e-8, opt_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LPSolution {
    pub status: SolveStatus,
    /// Primal point (only meaningful when optimal).
    pub x: Vec<f64>,
    /// One dual multiplier per row.
    pub duals: Vec<f64>,
    pub objective: f64,
    /// Basic column per row. Entries >= n_cols encode leftover artificials
    /// of redundant rows.
    pub basis: Vec<usize>,
    pub iterations: usize,
    /// Set when a warm start had to fall back to a cold two-phase solve.
    pub warm_start_fallback: bool,
}

/// A basis together with its factorized inverse, resumable across solves
/// that keep the same constraint matrix (or append columns to it). Reusing
/// it skips both phase 1 and the O(m^3) refactorization on re-solves with a
/// changed objective, which is what makes lambda sweeps and restricted
/// master iterations cheap.
#[derive(Debug, Clone)]
pub struct BasisState {
    basis: Vec<usize>,
    binv: Vec<f64>,
    n_rows: usize,
}

impl BasisState {
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }
}

/// Largest violation of `A x = b`.
pub fn max_abs_residual(lp: &StandardLP, x: &[f64]) -> f64 {
    let mut res: Vec<f64> = lp.b.iter().map(|&v| -v).collect();
    for (j, col) in (0..lp.n_cols).map(|j| (j, lp.col(j))) {
        if x[j] != 0.0 {
            for &(r, v) in col {
                res[r] += v * x[j];
            }
        }
    }
    res.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

const PIVOT_TOL: f64 = 1e-9;
const DEGEN_STEP: f64 = 1e-12;
const BLAND_TRIGGER: usize = 300;
const REFRESH_EVERY: usize = 128;

enum PhaseEnd {
    Optimal,
    Unbounded,
}

struct Simplex<'a> {
    lp: &'a StandardLP,
    m: usize,
    n: usize,
    tol: Tolerances,
    /// Row flips that make the working right-hand side nonnegative.
    sign: Vec<f64>,
    bw: Vec<f64>,
    binv: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    xb: Vec<f64>,
    iterations: usize,
    bland: bool,
    degen_streak: usize,
    // Scratch buffers.
    y: Vec<f64>,
    abar: Vec<f64>,
    phase1: bool,
}

impl<'a> Simplex<'a> {
    fn artificial_start(lp: &'a StandardLP, tol: Tolerances) -> Self {
        let m = lp.n_rows;
        let n = lp.n_cols;
        let sign: Vec<f64> = lp.b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
        let bw: Vec<f64> = lp.b.iter().zip(&sign).map(|(&v, &s)| v * s).collect();
        let mut binv = vec![0.0; m * m];
        for r in 0..m {
            binv[r * m + r] = 1.0;
        }
        let basis: Vec<usize> = (0..m).map(|r| n + r).collect();
        let mut in_basis = vec![false; n + m];
        for &j in &basis {
            in_basis[j] = true;
        }
        let xb = bw.clone();
        Simplex {
            lp,
            m,
            n,
            tol,
            sign,
            bw,
            binv,
            basis,
            in_basis,
            xb,
            iterations: 0,
            bland: false,
            degen_streak: 0,
            y: vec![0.0; m],
            abar: vec![0.0; m],
            phase1: true,
        }
    }

    /// Builds the state for a caller-supplied structural basis. Returns
    /// `None` when the basis is singular or its basic point is infeasible.
    fn from_basis(lp: &'a StandardLP, tol: Tolerances, basis: &[usize]) -> Option<Self> {
        let mut s = Self::prepare(lp, tol, basis)?;
        if !s.reinvert() {
            return None;
        }
        s.accept_if_feasible()
    }

    /// Resumes from a previously factorized basis; valid as long as the
    /// constraint rows are unchanged (appended columns are fine).
    fn from_state(lp: &'a StandardLP, tol: Tolerances, state: BasisState) -> Option<Self> {
        if state.n_rows != lp.n_rows {
            return None;
        }
        let mut s = Self::prepare(lp, tol, &state.basis)?;
        s.binv = state.binv;
        s.refresh_xb();
        // The inverse came from an earlier solve; confirm it still matches
        // the basis columns before trusting it.
        let scale = 1.0 + s.bw.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if s.basis_residual() > 1e-7 * scale && !s.reinvert() {
            return None;
        }
        s.accept_if_feasible()
    }

    fn prepare(lp: &'a StandardLP, tol: Tolerances, basis: &[usize]) -> Option<Self> {
        let m = lp.n_rows;
        let n = lp.n_cols;
        if basis.len() != m {
            return None;
        }
        let mut in_basis = vec![false; n + m];
        for &j in basis {
            if j >= n || in_basis[j] {
                return None;
            }
            in_basis[j] = true;
        }
        let sign: Vec<f64> = lp.b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
        let bw: Vec<f64> = lp.b.iter().zip(&sign).map(|(&v, &s)| v * s).collect();
        Some(Simplex {
            lp,
            m,
            n,
            tol,
            sign,
            bw,
            binv: vec![0.0; m * m],
            basis: basis.to_vec(),
            in_basis,
            xb: vec![0.0; m],
            iterations: 0,
            bland: false,
            degen_streak: 0,
            y: vec![0.0; m],
            abar: vec![0.0; m],
            phase1: false,
        })
    }

    fn accept_if_feasible(mut self) -> Option<Self> {
        if self.xb.iter().any(|&v| v < -self.tol.feas_tol) {
            return None;
        }
        for v in &mut self.xb {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Some(self)
    }

    fn into_state(self) -> BasisState {
        BasisState { basis: self.basis, binv: self.binv, n_rows: self.m }
    }

    fn col_cost(&self, j: usize) -> f64 {
        if self.phase1 {
            if j >= self.n {
                1.0
            } else {
                0.0
            }
        } else if j >= self.n {
            0.0
        } else {
            self.lp.cost[j]
        }
    }

    /// Recomputes the basis inverse from scratch with Gauss-Jordan and
    /// partial pivoting; refreshes the basic point. Returns false when the
    /// basis is numerically singular.
    fn reinvert(&mut self) -> bool {
        let m = self.m;
        // work = [B | I] reduced in place.
        let mut work = vec![0.0; m * 2 * m];
        for (pos, &j) in self.basis.iter().enumerate() {
            if j >= self.n {
                work[(j - self.n) * 2 * m + pos] = 1.0;
            } else {
                for &(r, v) in self.lp.col(j) {
                    work[r * 2 * m + pos] = v * self.sign[r];
                }
            }
        }
        for r in 0..m {
            work[r * 2 * m + m + r] = 1.0;
        }
        for c in 0..m {
            let mut piv = c;
            let mut best = work[c * 2 * m + c].abs();
            for r in c + 1..m {
                let v = work[r * 2 * m + c].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-11 {
                return false;
            }
            if piv != c {
                for k in 0..2 * m {
                    work.swap(c * 2 * m + k, piv * 2 * m + k);
                }
            }
            let d = work[c * 2 * m + c];
            for k in 0..2 * m {
                work[c * 2 * m + k] /= d;
            }
            for r in 0..m {
                if r != c {
                    let f = work[r * 2 * m + c];
                    if f != 0.0 {
                        for k in 0..2 * m {
                            work[r * 2 * m + k] -= f * work[c * 2 * m + k];
                        }
                    }
                }
            }
        }
        for r in 0..m {
            for k in 0..m {
                self.binv[r * m + k] = work[r * 2 * m + m + k];
            }
        }
        self.refresh_xb();
        true
    }

    fn refresh_xb(&mut self) {
        for r in 0..self.m {
            let row = &self.binv[r * self.m..(r + 1) * self.m];
            self.xb[r] = row.iter().zip(&self.bw).map(|(a, b)| a * b).sum();
        }
    }

    /// `|B xb - b|` in the working space, using the true basis columns.
    fn basis_residual(&self) -> f64 {
        let mut res = self.bw.clone();
        for (pos, &j) in self.basis.iter().enumerate() {
            let v = self.xb[pos];
            if v != 0.0 {
                if j >= self.n {
                    res[j - self.n] -= v;
                } else {
                    for &(r, a) in self.lp.col(j) {
                        res[r] -= a * self.sign[r] * v;
                    }
                }
            }
        }
        res.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    fn compute_duals(&mut self) {
        self.y.iter_mut().for_each(|v| *v = 0.0);
        for (pos, &j) in self.basis.iter().enumerate() {
            let c = self.col_cost(j);
            if c != 0.0 {
                let row = &self.binv[pos * self.m..(pos + 1) * self.m];
                for (yv, &bv) in self.y.iter_mut().zip(row) {
                    *yv += c * bv;
                }
            }
        }
    }

    fn reduced_cost(&self, j: usize) -> f64 {
        let mut d = self.col_cost(j);
        for &(r, v) in self.lp.col(j) {
            d -= self.y[r] * v * self.sign[r];
        }
        d
    }

    fn ftran(&mut self, j: usize) {
        self.abar.iter_mut().for_each(|v| *v = 0.0);
        for &(r, v) in self.lp.col(j) {
            let vs = v * self.sign[r];
            if vs != 0.0 {
                for i in 0..self.m {
                    self.abar[i] += self.binv[i * self.m + r] * vs;
                }
            }
        }
    }

    fn pivot(&mut self, row: usize, entering: usize) {
        let m = self.m;
        let alpha = self.abar[row];
        let theta = self.xb[row] / alpha;
        // Update the inverse: row `row` scaled, others eliminated.
        let inv_alpha = 1.0 / alpha;
        for k in 0..m {
            self.binv[row * m + k] *= inv_alpha;
        }
        for i in 0..m {
            if i != row {
                let f = self.abar[i];
                if f != 0.0 {
                    for k in 0..m {
                        self.binv[i * m + k] -= f * self.binv[row * m + k];
                    }
                    self.xb[i] -= f * theta;
                    if self.xb[i] < 0.0 && self.xb[i] > -self.tol.feas_tol {
                        self.xb[i] = 0.0;
                    }
                }
            }
        }
        self.xb[row] = theta;
        let leaving = self.basis[row];
        self.in_basis[leaving] = false;
        self.basis[row] = entering;
        self.in_basis[entering] = true;

        if theta.abs() <= DEGEN_STEP {
            self.degen_streak += 1;
            if self.degen_streak > BLAND_TRIGGER {
                self.bland = true;
            }
        } else {
            self.degen_streak = 0;
        }
    }

    fn select_entering(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.n {
            if self.in_basis[j] {
                continue;
            }
            let d = self.reduced_cost(j);
            if d < -self.tol.opt_tol {
                if self.bland {
                    return Some(j);
                }
                if best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
        }
        best.map(|(j, _)| j)
    }

    /// Ratio test over `abar`. Rows holding a zero-level artificial variable
    /// are also eligible on negative entries: leaving at a zero step keeps
    /// feasibility and drives the artificial out. Ties prefer leaving
    /// artificials, then the larger pivot magnitude, then the lowest basis
    /// column, which keeps pivoting deterministic.
    fn select_leaving(&self) -> Option<usize> {
        let mut best_row: Option<usize> = None;
        let mut best_theta = f64::INFINITY;
        for i in 0..self.m {
            let a = self.abar[i];
            let artificial = self.basis[i] >= self.n;
            let eligible =
                a > PIVOT_TOL || (artificial && a < -PIVOT_TOL && self.xb[i] <= self.tol.feas_tol);
            if !eligible {
                continue;
            }
            let theta = (self.xb[i] / a).max(0.0);
            let cur = match best_row {
                None => {
                    best_row = Some(i);
                    best_theta = theta;
                    continue;
                }
                Some(cur) => cur,
            };
            let tie_tol = 1e-9 * (1.0 + best_theta.abs());
            if theta < best_theta - tie_tol {
                best_row = Some(i);
                best_theta = theta;
            } else if theta <= best_theta + tie_tol {
                let cur_art = self.basis[cur] >= self.n;
                let take = match (artificial, cur_art) {
                    (true, false) => true,
                    (false, true) => false,
                    _ => {
                        let mine = a.abs();
                        let theirs = self.abar[cur].abs();
                        if (mine - theirs).abs() > 1e-12 {
                            mine > theirs
                        } else {
                            self.basis[i] < self.basis[cur]
                        }
                    }
                };
                if take {
                    best_row = Some(i);
                    best_theta = best_theta.min(theta);
                }
            }
        }
        best_row
    }

    fn run_phase(&mut self) -> Result<PhaseEnd, SolveError> {
        let max_iterations = 50 * (self.m + self.n) + 10_000;
        loop {
            self.iterations += 1;
            if self.iterations > max_iterations {
                return Err(SolveError::Stalled { iterations: self.iterations, bland: self.bland });
            }
            if self.iterations > 20 * (self.m + self.n) {
                self.bland = true;
            }
            if self.iterations % REFRESH_EVERY == 0 {
                let scale = 1.0 + self.bw.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                if self.basis_residual() > 1e-7 * scale && !self.reinvert() {
                    return Err(SolveError::Numerical("basis became singular during refresh".into()));
                }
            }
            self.compute_duals();
            let entering = match self.select_entering() {
                None => return Ok(PhaseEnd::Optimal),
                Some(j) => j,
            };
            self.ftran(entering);
            match self.select_leaving() {
                None => return Ok(PhaseEnd::Unbounded),
                Some(row) => self.pivot(row, entering),
            }
        }
    }

    /// Degenerate pivots that remove zero-level artificials from the basis
    /// where a structural column is available; rows with none are redundant
    /// and keep their artificial locked at zero.
    fn pivot_out_artificials(&mut self) {
        for row in 0..self.m {
            if self.basis[row] < self.n {
                continue;
            }
            let mut chosen = None;
            for j in 0..self.n {
                if self.in_basis[j] {
                    continue;
                }
                let mut v = 0.0;
                for &(r, a) in self.lp.col(j) {
                    v += self.binv[row * self.m + r] * a * self.sign[r];
                }
                if v.abs() > 1e-7 {
                    chosen = Some(j);
                    break;
                }
            }
            if let Some(j) = chosen {
                self.ftran(j);
                self.pivot(row, j);
            }
        }
    }

    fn phase1_objective(&self) -> f64 {
        self.basis
            .iter()
            .zip(&self.xb)
            .filter(|(&j, _)| j >= self.n)
            .map(|(_, &v)| v)
            .sum()
    }

    fn finish(&mut self, warm_start_fallback: bool) -> Result<LPSolution, SolveError> {
        for attempt in 0..2 {
            let mut x = vec![0.0; self.n];
            let mut drift = false;
            for (pos, &j) in self.basis.iter().enumerate() {
                let v = self.xb[pos];
                if j < self.n {
                    if v < -self.tol.feas_tol {
                        drift = true;
                    }
                    x[j] = v.max(0.0);
                } else if v.abs() > self.tol.feas_tol {
                    drift = true;
                }
            }
            let b_scale = 1.0 + self.lp.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if !drift && max_abs_residual(self.lp, &x) > self.tol.feas_tol * b_scale {
                drift = true;
            }

            self.compute_duals();
            let duals: Vec<f64> = self.y.iter().zip(&self.sign).map(|(&y, &s)| y * s).collect();
            let c_scale = 1.0 + self.lp.cost.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if !drift {
                for j in 0..self.n {
                    if !self.in_basis[j] && self.reduced_cost(j) < -self.tol.opt_tol * c_scale {
                        drift = true;
                        break;
                    }
                }
            }
            let objective: f64 = x.iter().zip(&self.lp.cost).map(|(a, b)| a * b).sum();
            if !drift {
                let dual_obj: f64 = duals.iter().zip(&self.lp.b).map(|(a, b)| a * b).sum();
                if (objective - dual_obj).abs() > self.tol.opt_tol * (1.0 + objective.abs()) {
                    drift = true;
                }
            }

            if !drift {
                return Ok(LPSolution {
                    status: SolveStatus::Optimal,
                    x,
                    duals,
                    objective,
                    basis: self.basis.clone(),
                    iterations: self.iterations,
                    warm_start_fallback,
                });
            }
            if attempt == 0 {
                // One recovery attempt: refactorize and re-optimize.
                if !self.reinvert() {
                    return Err(SolveError::Numerical("singular basis at solution check".into()));
                }
                match self.run_phase()? {
                    PhaseEnd::Optimal => continue,
                    PhaseEnd::Unbounded => {
                        return Err(SolveError::Numerical(
                            "solution check re-optimization diverged".into(),
                        ))
                    }
                }
            }
        }
        Err(SolveError::Numerical(
            "KKT residuals exceeded tolerances after refactorization".into(),
        ))
    }

    fn non_optimal(&self, status: SolveStatus, warm_start_fallback: bool) -> LPSolution {
        LPSolution {
            status,
            x: vec![0.0; self.n],
            duals: vec![0.0; self.m],
            objective: 0.0,
            basis: self.basis.clone(),
            iterations: self.iterations,
            warm_start_fallback,
        }
    }
}

/// Solves the LP with a cold two-phase start.
pub fn solve(lp: &StandardLP, tol: Tolerances) -> Result<LPSolution, SolveError> {
    solve_inner(lp, tol, false).map(|(sol, _)| sol)
}

fn solve_inner(
    lp: &StandardLP,
    tol: Tolerances,
    fallback: bool,
) -> Result<(LPSolution, Option<BasisState>), SolveError> {
    if lp.n_rows == 0 {
        let status = if lp.cost.iter().any(|&c| c < -tol.opt_tol) {
            SolveStatus::Unbounded
        } else {
            SolveStatus::Optimal
        };
        return Ok((
            LPSolution {
                status,
                x: vec![0.0; lp.n_cols],
                duals: vec![],
                objective: 0.0,
                basis: vec![],
                iterations: 0,
                warm_start_fallback: fallback,
            },
            None,
        ));
    }
    let mut s = Simplex::artificial_start(lp, tol);
    match s.run_phase()? {
        PhaseEnd::Unbounded => {
            return Err(SolveError::Numerical(
                "phase 1 reported an unbounded direction; its objective is bounded below".into(),
            ))
        }
        PhaseEnd::Optimal => {}
    }
    let b_scale = 1.0 + lp.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if s.phase1_objective() > tol.feas_tol * b_scale {
        return Ok((s.non_optimal(SolveStatus::Infeasible, fallback), None));
    }
    s.pivot_out_artificials();
    s.phase1 = false;
    s.degen_streak = 0;
    match s.run_phase()? {
        PhaseEnd::Unbounded => Ok((s.non_optimal(SolveStatus::Unbounded, fallback), None)),
        PhaseEnd::Optimal => {
            let sol = s.finish(fallback)?;
            let state = (sol.status == SolveStatus::Optimal
                && sol.basis.iter().all(|&j| j < lp.n_cols))
            .then(|| s.into_state());
            Ok((sol, state))
        }
    }
}

fn run_warm(mut s: Simplex<'_>) -> Result<(LPSolution, Option<BasisState>), SolveError> {
    match s.run_phase()? {
        PhaseEnd::Unbounded => Ok((s.non_optimal(SolveStatus::Unbounded, false), None)),
        PhaseEnd::Optimal => {
            let sol = s.finish(false)?;
            let state = (sol.status == SolveStatus::Optimal).then(|| s.into_state());
            Ok((sol, state))
        }
    }
}

/// Solves starting from a caller-supplied basis. Falls back to a cold start
/// (reported on the solution) when the basis is unusable: wrong length,
/// duplicated or out-of-range columns, singular, or primal infeasible.
pub fn warm_start_solve(
    lp: &StandardLP,
    basis: &[usize],
    tol: Tolerances,
) -> Result<LPSolution, SolveError> {
    if lp.n_rows == 0 {
        return solve_inner(lp, tol, false).map(|(sol, _)| sol);
    }
    match Simplex::from_basis(lp, tol, basis) {
        Some(s) => run_warm(s).map(|(sol, _)| sol),
        None => {
            log::warn!("warm start basis rejected; falling back to a cold start");
            solve_inner(lp, tol, true).map(|(sol, _)| sol)
        }
    }
}

/// Solves while maintaining a resumable factorized basis in `cache`.
///
/// On a hit (same row count, basis still valid for the column set) the solve
/// resumes from the cached factorization with no refactorization and no
/// phase 1; this is the intended path for objective-only changes such as
/// lambda sweeps, budget bisection and restricted-master reoptimization. On
/// a miss it falls back to `hint` (a plain basis, factorized once) and then
/// to a cold two-phase start. The cache is refreshed with the final state of
/// whichever path ran.
pub fn solve_reusing(
    lp: &StandardLP,
    cache: &mut Option<BasisState>,
    hint: Option<&[usize]>,
    tol: Tolerances,
) -> Result<LPSolution, SolveError> {
    if lp.n_rows == 0 {
        return solve_inner(lp, tol, false).map(|(sol, _)| sol);
    }
    if let Some(state) = cache.take() {
        if let Some(s) = Simplex::from_state(lp, tol, state) {
            let (sol, state) = run_warm(s)?;
            *cache = state;
            return Ok(sol);
        }
    }
    if let Some(basis) = hint {
        if let Some(s) = Simplex::from_basis(lp, tol, basis) {
            let (sol, state) = run_warm(s)?;
            *cache = state;
            return Ok(sol);
        }
        log::warn!("starting basis hint rejected; falling back to a cold start");
    }
    let (sol, state) = solve_inner(lp, tol, hint.is_some())?;
    *cache = state;
    Ok(sol)
}
