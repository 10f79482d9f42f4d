//! Dense primal–dual interior-point method (Nesterov–Todd scaling, Mehrotra
//! predictor–corrector) on a real block-diagonal standard form
//!
//! ```text
//! min ⟨C, X⟩  s.t.  ⟨A_i, X⟩ = b_i,  X ⪰ 0       max bᵀy  s.t.  C − Σ y_i A_i = S ⪰ 0
//! ```
//!
//! Complex Hermitian blocks enter through `X ↦ [[Re X, −Im X], [Im X, Re X]]`,
//! scalars as 1×1 blocks (free scalars split into two nonnegative parts), and
//! each matrix equality is expanded in an orthonormal Hermitian basis.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::problem::{IterateRecord, SdpProblem, SdpSolution, SdpStatus, StartPoint, Term};
use crate::error::Result;
use crate::numerics::{c, ComplexMatrix};

type Mat = DMatrix<f64>;

/// Stopping and safeguard parameters of [`solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub gap_tol: f64,
    pub max_iter: usize,
    /// Fraction of the step to the boundary of the cone.
    pub step_fraction: f64,
    /// Iterates beyond this norm are taken as evidence of infeasibility.
    pub divergence: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            gap_tol: 1e-8,
            max_iter: 200,
            step_fraction: 0.98,
            divergence: 1e12,
        }
    }
}

/// Solves `p` to the given absolute gap and residual tolerance.
pub fn solve(p: &SdpProblem, gap_tol: f64, max_iter: usize) -> Result<SdpSolution> {
    solve_with(
        p,
        &SolverOptions {
            gap_tol,
            max_iter,
            ..SolverOptions::default()
        },
    )
}

pub fn solve_with(p: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    p.check()?;
    let form = RealForm::build(p);
    if !form.consistent {
        return Ok(form.failed_solution(p));
    }
    let (x, y, s) = form.initial_point(p.start.as_ref());
    Ok(form.run(p, x, y, s, opts))
}

/// Orthonormal basis of `s×s` Hermitian matrices under `Re Tr(A B)`.
pub(crate) fn hermitian_basis(s: usize) -> Vec<ComplexMatrix> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(s * s);
    for p in 0..s {
        for q in p..s {
            if p == q {
                out.push(ComplexMatrix::unit(s, p, p));
            } else {
                let mut sym = ComplexMatrix::zeros(s, s);
                sym[(p, q)] = c(r, 0.0);
                sym[(q, p)] = c(r, 0.0);
                out.push(sym);
                let mut anti = ComplexMatrix::zeros(s, s);
                anti[(p, q)] = c(0.0, -r);
                anti[(q, p)] = c(0.0, r);
                out.push(anti);
            }
        }
    }
    out
}

pub(crate) fn embed(f: &ComplexMatrix) -> Mat {
    let n = f.rows();
    Mat::from_fn(2 * n, 2 * n, |i, j| {
        let z = f[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

pub(crate) fn unembed(x: &Mat) -> ComplexMatrix {
    let n = x.nrows() / 2;
    ComplexMatrix::from_fn(n, n, |i, j| {
        c(
            0.5 * (x[(i, j)] + x[(i + n, j + n)]),
            0.5 * (x[(i + n, j)] - x[(i, j + n)]),
        )
    })
}

#[derive(Debug, Clone)]
enum Slot {
    Complex(String),
    Scalar(String, f64),
}

type Row = Vec<Option<Mat>>;

struct RealForm {
    slots: Vec<Slot>,
    sizes: Vec<usize>,
    c: Vec<Mat>,
    rows: Vec<Row>,
    b: DVector<f64>,
    /// `(equality index, basis element)` of every kept row.
    origin: Vec<(usize, ComplexMatrix)>,
    /// Every row before dependency removal.
    all_rows: Vec<(usize, ComplexMatrix, Row)>,
    eq_names: Vec<String>,
    consistent: bool,
}

fn dot(a: &Mat, b: &Mat) -> f64 {
    a.component_mul(b).sum()
}

fn row_vector(row: &Row, sizes: &[usize]) -> Vec<f64> {
    let mut v = Vec::new();
    for (blk, &n) in row.iter().zip(sizes) {
        match blk {
            Some(m) => v.extend(m.iter().copied()),
            None => v.extend(std::iter::repeat_n(0.0, n * n)),
        }
    }
    v
}

impl RealForm {
    fn build(p: &SdpProblem) -> Self {
        let mut slots = Vec::new();
        let mut sizes = Vec::new();
        let mut index: BTreeMap<String, Vec<(usize, f64)>> = BTreeMap::new();
        for blk in &p.psd_blocks {
            index.insert(blk.name.clone(), vec![(slots.len(), 1.0)]);
            slots.push(Slot::Complex(blk.name.clone()));
            sizes.push(2 * blk.size);
        }
        for sc in &p.scalars {
            let mut e = vec![(slots.len(), 1.0)];
            slots.push(Slot::Scalar(sc.name.clone(), 1.0));
            sizes.push(1);
            if !sc.nonnegative {
                e.push((slots.len(), -1.0));
                slots.push(Slot::Scalar(sc.name.clone(), -1.0));
                sizes.push(1);
            }
            index.insert(sc.name.clone(), e);
        }

        let mut cmat: Vec<Mat> = sizes.iter().map(|&n| Mat::zeros(n, n)).collect();
        for (name, coeff) in &p.objective.blocks {
            let k = index[name][0].0;
            cmat[k] += embed(coeff) * 0.5;
        }
        for (name, coeff) in &p.objective.scalars {
            for &(k, sign) in &index[name] {
                cmat[k][(0, 0)] += sign * coeff;
            }
        }

        let mut all_rows = Vec::new();
        for (e, eq) in p.equalities.iter().enumerate() {
            for basis in hermitian_basis(eq.rhs.rows()) {
                let mut row: Row = vec![None; slots.len()];
                for t in &eq.terms {
                    match t {
                        Term::Block { var, .. } => {
                            let k = index[var][0].0;
                            let a = embed(&t.adjoint_block(&basis)) * 0.5;
                            row[k] = Some(match row[k].take() {
                                Some(prev) => prev + a,
                                None => a,
                            });
                        }
                        Term::Scalar { var, coeff } => {
                            let v = basis.inner_re(coeff);
                            for &(k, sign) in &index[var] {
                                let prev = row[k].take().map_or(0.0, |m| m[(0, 0)]);
                                row[k] = Some(Mat::from_element(1, 1, prev + sign * v));
                            }
                        }
                    }
                }
                all_rows.push((e, basis, row));
            }
        }

        // Gram–Schmidt selection of independent rows
        let mut q: Vec<Vec<f64>> = Vec::new();
        let mut kept = Vec::new();
        let mut removed = Vec::new();
        for (idx, (_, _, row)) in all_rows.iter().enumerate() {
            let mut v = row_vector(row, &sizes);
            let norm0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for _ in 0..2 {
                for u in &q {
                    let d: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(u).for_each(|(vi, ui)| *vi -= d * ui);
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm0 > 0.0 && norm > 1e-9 * norm0.max(1.0) {
                v.iter_mut().for_each(|x| *x /= norm);
                q.push(v);
                kept.push(idx);
            } else {
                removed.push(idx);
            }
        }

        let rhs_all: Vec<f64> = all_rows
            .iter()
            .map(|(e, basis, _)| basis.inner_re(&p.equalities[*e].rhs))
            .collect();
        let b = DVector::from_iterator(kept.len(), kept.iter().map(|&i| rhs_all[i]));
        let rows: Vec<Row> = kept.iter().map(|&i| all_rows[i].2.clone()).collect();
        let origin = kept
            .iter()
            .map(|&i| (all_rows[i].0, all_rows[i].1.clone()))
            .collect();

        let mut form = RealForm {
            slots,
            sizes,
            c: cmat,
            rows,
            b,
            origin,
            all_rows,
            eq_names: p.equalities.iter().map(|e| e.name.clone()).collect(),
            consistent: true,
        };
        for &r in &removed {
            let target = row_vector(&form.all_rows[r].2, &form.sizes);
            let coeffs = form.express(&target);
            let predicted: f64 = coeffs.iter().zip(form.b.iter()).map(|(a, b)| a * b).sum();
            let actual = rhs_all[r];
            if (predicted - actual).abs() > 1e-8 * (1.0 + actual.abs()) {
                form.consistent = false;
            }
        }
        form
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    fn n_total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Least-squares coefficients of `target` in the span of the kept rows.
    fn express(&self, target: &[f64]) -> DVector<f64> {
        let vecs: Vec<Vec<f64>> = self.rows.iter().map(|r| row_vector(r, &self.sizes)).collect();
        let m = vecs.len();
        let gram = Mat::from_fn(m, m, |i, j| vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).sum());
        let rhs = DVector::from_iterator(
            m,
            vecs.iter().map(|v| v.iter().zip(target).map(|(a, b)| a * b).sum()),
        );
        gram.cholesky()
            .map(|ch| ch.solve(&rhs))
            .unwrap_or_else(|| DVector::zeros(m))
    }

    fn apply_a(&self, x: &[Mat]) -> DVector<f64> {
        DVector::from_iterator(
            self.m(),
            self.rows.iter().map(|row| {
                row.iter()
                    .zip(x)
                    .filter_map(|(a, xb)| a.as_ref().map(|a| dot(a, xb)))
                    .sum()
            }),
        )
    }

    fn apply_at(&self, y: &DVector<f64>) -> Vec<Mat> {
        let mut out: Vec<Mat> = self.sizes.iter().map(|&n| Mat::zeros(n, n)).collect();
        for (row, &yi) in self.rows.iter().zip(y.iter()) {
            for (o, a) in out.iter_mut().zip(row) {
                if let Some(a) = a {
                    *o += a * yi;
                }
            }
        }
        out
    }


    fn initial_point(&self, start: Option<&StartPoint>) -> (Vec<Mat>, DVector<f64>, Vec<Mat>) {
        let scale = self
            .b
            .iter()
            .fold(1.0f64, |m, v| m.max(v.abs()))
            .max(self.c.iter().fold(1.0, |m, cb| m.max(cb.amax())));
        let mut x: Vec<Mat> = self.sizes.iter().map(|&n| Mat::identity(n, n) * scale).collect();
        let mut y = DVector::zeros(self.m());
        let mut have_dual = false;

        if let Some(st) = start {
            for (k, slot) in self.slots.iter().enumerate() {
                match slot {
                    Slot::Complex(name) => {
                        if let Some(m) = st.blocks.get(name) {
                            if m.shape() == (self.sizes[k] / 2, self.sizes[k] / 2) {
                                x[k] = embed(&m.hermitian_part());
                            }
                        }
                    }
                    Slot::Scalar(name, sign) => {
                        if let Some(&v) = st.scalars.get(name) {
                            let split = self
                                .slots
                                .iter()
                                .filter(|s| matches!(s, Slot::Scalar(n, _) if n == name))
                                .count()
                                > 1;
                            let part = if *sign > 0.0 { v.max(0.0) } else { (-v).max(0.0) };
                            x[k][(0, 0)] = if split { part + 1.0 } else { part };
                        }
                    }
                }
            }
            if !st.multipliers.is_empty() {
                // A*y of the supplied multipliers, re-expressed on the kept rows
                let len: usize = self.sizes.iter().map(|n| n * n).sum();
                let mut full = vec![0.0; len];
                for (e, basis, row) in &self.all_rows {
                    if let Some(ym) = st.multipliers.get(&self.eq_names[*e]) {
                        let yk = basis.inner_re(ym);
                        for (f, v) in full.iter_mut().zip(row_vector(row, &self.sizes)) {
                            *f += yk * v;
                        }
                    }
                }
                y = self.express(&full);
                have_dual = true;
            }
        }
        for xb in x.iter_mut() {
            ensure_pd(xb, scale);
        }
        let mut s: Vec<Mat> = if have_dual {
            let aty = self.apply_at(&y);
            self.c.iter().zip(&aty).map(|(c, a)| c - a).collect()
        } else {
            self.sizes.iter().map(|&n| Mat::identity(n, n) * scale).collect()
        };
        for sb in s.iter_mut() {
            ensure_pd(sb, scale);
        }
        (x, y, s)
    }

    fn run(
        &self,
        p: &SdpProblem,
        mut x: Vec<Mat>,
        mut y: DVector<f64>,
        mut s: Vec<Mat>,
        opts: &SolverOptions,
    ) -> SdpSolution {
        let n = self.n_total() as f64;
        let mut history = Vec::new();
        let mut status = SdpStatus::MaxIter;
        let mut iterations = 0;

        for iter in 0..=opts.max_iter {
            iterations = iter;
            let rp = &self.b - self.apply_a(&x);
            let aty = self.apply_at(&y);
            let rd: Vec<Mat> = (0..x.len()).map(|k| &self.c[k] - &aty[k] - &s[k]).collect();
            let pobj: f64 = self.c.iter().zip(&x).map(|(c, x)| dot(c, x)).sum();
            let dobj = self.b.dot(&y);
            let rp_norm = rp.norm();
            let rd_norm = rd.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt();
            let mu = x.iter().zip(&s).map(|(x, s)| dot(x, s)).sum::<f64>() / n;
            history.push(IterateRecord {
                primal_objective: pobj,
                dual_objective: dobj,
                primal_residual: rp_norm,
                dual_residual: rd_norm,
                mu,
            });
            if (pobj - dobj).abs() <= opts.gap_tol
                && rp_norm <= opts.gap_tol
                && rd_norm <= opts.gap_tol
            {
                status = SdpStatus::Optimal;
                break;
            }
            let size = x
                .iter()
                .chain(&s)
                .map(|m| m.amax())
                .fold(y.amax(), f64::max);
            if !size.is_finite() || size > opts.divergence {
                status = SdpStatus::Infeasible;
                break;
            }
            if iter == opts.max_iter {
                break;
            }

            let Some(scaling) = x
                .iter()
                .zip(&s)
                .map(|(x, s)| NtScaling::new(x, s))
                .collect::<Option<Vec<_>>>()
            else {
                break;
            };
            let Some(schur) = self.schur(&scaling) else {
                break;
            };

            // predictor
            let r_aff: Vec<Mat> = x.iter().map(|x| -x).collect();
            let (dx_a, _, ds_a) = self.direction(&scaling, &schur, &rp, &rd, &r_aff);
            let ap = max_step(&x, &dx_a).min(1.0);
            let ad = max_step(&s, &ds_a).min(1.0);
            let mu_aff = x
                .iter()
                .zip(&dx_a)
                .zip(s.iter().zip(&ds_a))
                .map(|((x, dx), (s, ds))| dot(&(x + dx * ap), &(s + ds * ad)))
                .sum::<f64>()
                / n;
            let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

            // corrector
            let r_cor: Vec<Mat> = scaling
                .iter()
                .zip(dx_a.iter().zip(&ds_a))
                .map(|(sc, (dx, ds))| sc.corrector(dx, ds, sigma * mu))
                .collect();
            let (dx, dy, ds) = self.direction(&scaling, &schur, &rp, &rd, &r_cor);
            let ap = (opts.step_fraction * max_step(&x, &dx)).min(1.0);
            let ad = (opts.step_fraction * max_step(&s, &ds)).min(1.0);
            for k in 0..x.len() {
                x[k] += &dx[k] * ap;
                s[k] += &ds[k] * ad;
                symmetrize(&mut x[k]);
                symmetrize(&mut s[k]);
            }
            y += dy * ad;
        }

        self.solution(p, &x, &y, &s, status, iterations, history)
    }

    /// Schur complement `M_ij = Σ_b ⟨A_i, W A_j W⟩`, Cholesky-factored.
    fn schur(&self, scaling: &[NtScaling]) -> Option<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
        let m = self.m();
        let wajw: Vec<Vec<Option<Mat>>> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(scaling)
                    .map(|(a, sc)| a.as_ref().map(|a| &sc.w * a * &sc.w))
                    .collect()
            })
            .collect();
        let mut mm = Mat::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v: f64 = self.rows[i]
                    .iter()
                    .zip(&wajw[j])
                    .filter_map(|(a, b)| match (a, b) {
                        (Some(a), Some(b)) => Some(dot(a, b)),
                        _ => None,
                    })
                    .sum();
                mm[(i, j)] = v;
                mm[(j, i)] = v;
            }
        }
        let scale = mm.diagonal().amax().max(1e-300);
        mm.clone().cholesky().or_else(|| {
            let reg = mm + Mat::identity(m, m) * (1e-14 * scale);
            reg.cholesky()
        })
    }

    /// Solves the scaled Newton system for a given complementarity target `R`.
    fn direction(
        &self,
        scaling: &[NtScaling],
        schur: &nalgebra::Cholesky<f64, nalgebra::Dyn>,
        rp: &DVector<f64>,
        rd: &[Mat],
        r: &[Mat],
    ) -> (Vec<Mat>, DVector<f64>, Vec<Mat>) {
        let wrdw: Vec<Mat> = scaling.iter().zip(rd).map(|(sc, rd)| &sc.w * rd * &sc.w).collect();
        let rhs = rp - self.apply_a(r) + self.apply_a(&wrdw);
        let dy = schur.solve(&rhs);
        let atdy = self.apply_at(&dy);
        let ds: Vec<Mat> = rd.iter().zip(&atdy).map(|(rd, a)| rd - a).collect();
        let dx: Vec<Mat> = scaling
            .iter()
            .zip(r.iter().zip(&ds))
            .map(|(sc, (r, ds))| r - &sc.w * ds * &sc.w)
            .collect();
        (dx, dy, ds)
    }

    #[allow(clippy::too_many_arguments)]
    fn solution(
        &self,
        p: &SdpProblem,
        x: &[Mat],
        y: &DVector<f64>,
        s: &[Mat],
        status: SdpStatus,
        iterations: usize,
        history: Vec<IterateRecord>,
    ) -> SdpSolution {
        let mut primal_blocks = BTreeMap::new();
        let mut dual_slacks = BTreeMap::new();
        let mut scalars: BTreeMap<String, f64> = BTreeMap::new();
        for (k, slot) in self.slots.iter().enumerate() {
            match slot {
                Slot::Complex(name) => {
                    primal_blocks.insert(name.clone(), unembed(&x[k]));
                    dual_slacks.insert(name.clone(), unembed(&s[k]).scale(2.0));
                }
                Slot::Scalar(name, sign) => {
                    *scalars.entry(name.clone()).or_insert(0.0) += sign * x[k][(0, 0)];
                }
            }
        }
        let mut dual_multipliers: BTreeMap<String, ComplexMatrix> = p
            .equalities
            .iter()
            .map(|eq| (eq.name.clone(), ComplexMatrix::zeros(eq.rhs.rows(), eq.rhs.rows())))
            .collect();
        for ((e, basis), &yk) in self.origin.iter().zip(y.iter()) {
            *dual_multipliers.get_mut(&self.eq_names[*e]).unwrap() += &basis.scale(yk);
        }
        let primal_objective = p.primal_objective(&primal_blocks, &scalars);
        let dual_objective = p.dual_objective(&dual_multipliers);
        let last = history.last().copied();
        SdpSolution {
            primal_blocks,
            scalars,
            dual_multipliers,
            dual_slacks,
            primal_objective,
            dual_objective,
            gap: primal_objective - dual_objective,
            feasibility_residual: last.map_or(f64::INFINITY, |h| {
                h.primal_residual.max(h.dual_residual)
            }),
            status,
            iterations,
            history,
        }
    }

    fn failed_solution(&self, p: &SdpProblem) -> SdpSolution {
        let x: Vec<Mat> = self.sizes.iter().map(|&n| Mat::zeros(n, n)).collect();
        let mut sol = self.solution(
            p,
            &x,
            &DVector::zeros(self.m()),
            &x,
            SdpStatus::Infeasible,
            0,
            Vec::new(),
        );
        sol.feasibility_residual = f64::INFINITY;
        sol
    }
}

fn symmetrize(m: &mut Mat) {
    let t = m.transpose();
    *m += t;
    *m *= 0.5;
}

fn ensure_pd(m: &mut Mat, scale: f64) {
    symmetrize(m);
    let min = m.clone().symmetric_eigenvalues().min();
    let floor = 1e-8 * scale;
    if min < floor {
        let n = m.nrows();
        *m += Mat::identity(n, n) * (floor - min + 1e-3 * scale);
    }
}

/// Largest `α` with `X + αΔX ⪰ 0` (infinite when `ΔX ⪰ 0`).
fn max_step(x: &[Mat], dx: &[Mat]) -> f64 {
    let mut alpha = f64::INFINITY;
    for (x, dx) in x.iter().zip(dx) {
        let lmin = match x.clone().cholesky() {
            Some(ch) => {
                let l = ch.l();
                let linv = l.clone().try_inverse().unwrap_or_else(|| Mat::zeros(l.nrows(), l.ncols()));
                let mut t = &linv * dx * linv.transpose();
                symmetrize(&mut t);
                t.symmetric_eigenvalues().min()
            }
            None => return 0.0,
        };
        if lmin < 0.0 {
            alpha = alpha.min(-1.0 / lmin);
        }
    }
    alpha
}

/// Nesterov–Todd scaling `W = G Gᵀ` with `Gᵀ S G = G⁻¹ X G⁻ᵀ = Λ`.
struct NtScaling {
    g: Mat,
    g_inv: Mat,
    lambda: DVector<f64>,
    w: Mat,
}

impl NtScaling {
    fn new(x: &Mat, s: &Mat) -> Option<Self> {
        let lx = x.clone().cholesky()?.l();
        let ls = s.clone().cholesky()?.l();
        let svd = (ls.transpose() * &lx).svd(true, true);
        let u = svd.u?;
        let vt = svd.v_t?;
        let lambda = svd.singular_values;
        if lambda.iter().any(|&l| l.is_nan() || l <= 0.0) {
            return None;
        }
        let inv_sqrt = DMatrix::from_diagonal(&lambda.map(|l| 1.0 / l.sqrt()));
        let g = &lx * vt.transpose() * &inv_sqrt;
        let g_inv = &inv_sqrt * u.transpose() * ls.transpose();
        let w = &g * g.transpose();
        Some(Self { g, g_inv, lambda, w })
    }

    /// `R = G U Gᵀ` with `ΛU + UΛ = 2(τI − Λ² − ½(ΔX̃ΔS̃ + ΔS̃ΔX̃))`.
    fn corrector(&self, dx: &Mat, ds: &Mat, target: f64) -> Mat {
        let dxt = &self.g_inv * dx * self.g_inv.transpose();
        let dst = self.g.transpose() * ds * &self.g;
        let cross = &dxt * &dst + &dst * &dxt;
        let n = self.lambda.len();
        let u = Mat::from_fn(n, n, |i, j| {
            let li = self.lambda[i];
            let lj = self.lambda[j];
            let mut rhs = -0.5 * cross[(i, j)];
            if i == j {
                rhs += target - li * li;
            }
            2.0 * rhs / (li + lj)
        });
        &self.g * u * self.g.transpose()
    }
}
