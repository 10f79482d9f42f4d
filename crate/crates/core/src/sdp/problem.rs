//! Block-structured semidefinite programs over Hermitian matrices.
//!
//! A problem has Hermitian PSD blocks and real scalars (free or nonnegative).
//! Every equality is matrix valued:
//!
//! ```text
//! Σ_terms L_t(var_t) = rhs,   L_t(X) = Σ_k w_k A_k X A_k†   or   L_t(s) = s·C
//! ```
//!
//! so partial traces, identities and scaled copies are all expressed as
//! weighted conjugations. The objective `Σ Re Tr(C_b X_b) + Σ c_s s` is minimised.
//!
//! The dual reads: maximise `Σ_eq Re Tr(rhs_eq Y_eq)` subject to
//! `C_b − Σ_eq L*_{eq,b}(Y_eq) ⪰ 0` for every block, and
//! `c_s − Σ_eq Re Tr(C_{eq,s} Y_eq)` being zero (free scalar) or nonnegative.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, ComplexMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct BlockVar {
    pub name: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarVar {
    pub name: String,
    pub nonnegative: bool,
}

/// One summand of an equality.
#[derive(Debug, Clone)]
pub enum Term {
    /// `Σ_k w_k A_k X A_k†` applied to a block.
    Block {
        var: String,
        ops: Vec<(f64, ComplexMatrix)>,
    },
    /// `s · C` for a scalar.
    Scalar { var: String, coeff: ComplexMatrix },
}

impl Term {
    pub fn block(var: &str, weight: f64, op: ComplexMatrix) -> Self {
        Term::Block {
            var: var.into(),
            ops: vec![(weight, op)],
        }
    }

    /// `weight · X` on a block of the given size.
    pub fn identity(var: &str, weight: f64, size: usize) -> Self {
        Self::block(var, weight, ComplexMatrix::identity(size))
    }

    pub fn block_ops(var: &str, weight: f64, ops: Vec<ComplexMatrix>) -> Self {
        Term::Block {
            var: var.into(),
            ops: ops.into_iter().map(|a| (weight, a)).collect(),
        }
    }

    pub fn scalar(var: &str, coeff: ComplexMatrix) -> Self {
        Term::Scalar {
            var: var.into(),
            coeff,
        }
    }

    pub fn var(&self) -> &str {
        match self {
            Term::Block { var, .. } | Term::Scalar { var, .. } => var,
        }
    }

    /// Output size of the term.
    fn out_size(&self) -> usize {
        match self {
            Term::Block { ops, .. } => ops[0].1.rows(),
            Term::Scalar { coeff, .. } => coeff.rows(),
        }
    }

    /// `L(X)` for a block term.
    pub fn apply_block(&self, x: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Term::Block { ops, .. } => {
                let mut out = ComplexMatrix::zeros(ops[0].1.rows(), ops[0].1.rows());
                for (w, a) in ops {
                    out += &a.conjugate(x).scale(*w);
                }
                out
            }
            Term::Scalar { .. } => panic!("apply_block on a scalar term"),
        }
    }

    /// `L*(Y) = Σ w A† Y A` for a block term.
    pub fn adjoint_block(&self, y: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Term::Block { ops, .. } => {
                let n = ops[0].1.cols();
                let mut out = ComplexMatrix::zeros(n, n);
                for (w, a) in ops {
                    out += &a.adjoint().conjugate(y).scale(*w);
                }
                out
            }
            Term::Scalar { .. } => panic!("adjoint_block on a scalar term"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Equality {
    pub name: String,
    pub terms: Vec<Term>,
    pub rhs: ComplexMatrix,
}

#[derive(Debug, Clone, Default)]
pub struct Objective {
    pub blocks: Vec<(String, ComplexMatrix)>,
    pub scalars: Vec<(String, f64)>,
}

/// Optional initial point; the solver falls back to a scaled identity for anything missing.
#[derive(Debug, Clone, Default)]
pub struct StartPoint {
    pub blocks: BTreeMap<String, ComplexMatrix>,
    pub scalars: BTreeMap<String, f64>,
    pub multipliers: BTreeMap<String, ComplexMatrix>,
}

#[derive(Debug, Clone, Default)]
pub struct SdpProblem {
    pub psd_blocks: Vec<BlockVar>,
    pub scalars: Vec<ScalarVar>,
    pub objective: Objective,
    pub equalities: Vec<Equality>,
    pub start: Option<StartPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    MaxIter,
    Infeasible,
}

/// Objectives and residuals of one interior-point iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterateRecord {
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub mu: f64,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub primal_blocks: BTreeMap<String, ComplexMatrix>,
    pub scalars: BTreeMap<String, f64>,
    /// One Hermitian multiplier per equality.
    pub dual_multipliers: BTreeMap<String, ComplexMatrix>,
    /// Dual slack `C_b − Σ L*(Y)` per block.
    pub dual_slacks: BTreeMap<String, ComplexMatrix>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub feasibility_residual: f64,
    pub status: SdpStatus,
    pub iterations: usize,
    pub history: Vec<IterateRecord>,
}

impl SdpSolution {
    pub fn block(&self, name: &str) -> &ComplexMatrix {
        &self.primal_blocks[name]
    }

    pub fn multiplier(&self, name: &str) -> &ComplexMatrix {
        &self.dual_multipliers[name]
    }
}

impl SdpProblem {
    pub fn block_size(&self, name: &str) -> Option<usize> {
        self.psd_blocks.iter().find(|b| b.name == name).map(|b| b.size)
    }

    pub fn scalar_var(&self, name: &str) -> Option<&ScalarVar> {
        self.scalars.iter().find(|s| s.name == name)
    }

    /// Checks names, shapes and Hermiticity of all data.
    pub fn check(&self) -> Result<()> {
        let mut names = std::collections::BTreeSet::new();
        for b in &self.psd_blocks {
            if b.size == 0 || !names.insert(b.name.as_str()) {
                return Err(Error::InvalidArgument(format!("bad or duplicate block {:?}", b.name)));
            }
        }
        for s in &self.scalars {
            if !names.insert(s.name.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate variable {:?}", s.name)));
            }
        }
        for (name, c) in &self.objective.blocks {
            let n = self
                .block_size(name)
                .ok_or_else(|| Error::InvalidArgument(format!("objective names unknown block {name:?}")))?;
            if c.shape() != (n, n) || !c.is_hermitian(1e-12) {
                return Err(Error::InvalidArgument(format!(
                    "objective coefficient of {name:?} must be a Hermitian {n}x{n} matrix"
                )));
            }
        }
        for (name, _) in &self.objective.scalars {
            if self.scalar_var(name).is_none() {
                return Err(Error::InvalidArgument(format!("objective names unknown scalar {name:?}")));
            }
        }
        for eq in &self.equalities {
            let s = eq.rhs.rows();
            if !eq.rhs.is_square() || !eq.rhs.is_hermitian(1e-12) {
                return Err(Error::InvalidArgument(format!(
                    "right-hand side of {:?} must be Hermitian",
                    eq.name
                )));
            }
            for t in &eq.terms {
                if t.out_size() != s {
                    return Err(Error::Dimension(format!(
                        "term on {:?} in {:?} maps to size {} instead of {s}",
                        t.var(),
                        eq.name,
                        t.out_size()
                    )));
                }
                match t {
                    Term::Block { var, ops } => {
                        let n = self.block_size(var).ok_or_else(|| {
                            Error::InvalidArgument(format!("{:?} uses unknown block {var:?}", eq.name))
                        })?;
                        if ops.iter().any(|(w, a)| a.shape() != (s, n) || !w.is_finite()) {
                            return Err(Error::Dimension(format!(
                                "operator on {var:?} in {:?} must be {s}x{n}",
                                eq.name
                            )));
                        }
                    }
                    Term::Scalar { var, coeff } => {
                        if self.scalar_var(var).is_none() {
                            return Err(Error::InvalidArgument(format!(
                                "{:?} uses unknown scalar {var:?}",
                                eq.name
                            )));
                        }
                        if !coeff.is_hermitian(1e-12) {
                            return Err(Error::InvalidArgument(format!(
                                "scalar coefficient in {:?} must be Hermitian",
                                eq.name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `Σ_terms L_t(var_t)` for one equality at the given point.
    pub fn equality_lhs(
        &self,
        eq: &Equality,
        blocks: &BTreeMap<String, ComplexMatrix>,
        scalars: &BTreeMap<String, f64>,
    ) -> ComplexMatrix {
        let s = eq.rhs.rows();
        let mut out = ComplexMatrix::zeros(s, s);
        for t in &eq.terms {
            match t {
                Term::Block { var, .. } => out += &t.apply_block(&blocks[var]),
                Term::Scalar { var, coeff } => out += &coeff.scale(scalars[var]),
            }
        }
        out
    }

    pub fn primal_objective(
        &self,
        blocks: &BTreeMap<String, ComplexMatrix>,
        scalars: &BTreeMap<String, f64>,
    ) -> f64 {
        let b: f64 = self
            .objective
            .blocks
            .iter()
            .map(|(n, c)| c.inner_re(&blocks[n]))
            .sum();
        let s: f64 = self
            .objective
            .scalars
            .iter()
            .map(|(n, c)| c * scalars[n])
            .sum();
        b + s
    }

    pub fn dual_objective(&self, multipliers: &BTreeMap<String, ComplexMatrix>) -> f64 {
        self.equalities
            .iter()
            .map(|eq| eq.rhs.inner_re(&multipliers[&eq.name]))
            .sum()
    }

    /// Dual slacks `C_b − Σ L*(Y)` per block and `c_s − Σ ⟨C, Y⟩` per scalar.
    pub fn dual_slacks(
        &self,
        multipliers: &BTreeMap<String, ComplexMatrix>,
    ) -> (BTreeMap<String, ComplexMatrix>, BTreeMap<String, f64>) {
        let mut blocks: BTreeMap<String, ComplexMatrix> = self
            .psd_blocks
            .iter()
            .map(|b| (b.name.clone(), ComplexMatrix::zeros(b.size, b.size)))
            .collect();
        let mut scalars: BTreeMap<String, f64> =
            self.scalars.iter().map(|s| (s.name.clone(), 0.0)).collect();
        for (name, c) in &self.objective.blocks {
            *blocks.get_mut(name).unwrap() += c;
        }
        for (name, c) in &self.objective.scalars {
            *scalars.get_mut(name).unwrap() += c;
        }
        for eq in &self.equalities {
            let y = &multipliers[&eq.name];
            for t in &eq.terms {
                match t {
                    Term::Block { var, .. } => {
                        *blocks.get_mut(var).unwrap() -= &t.adjoint_block(y);
                    }
                    Term::Scalar { var, coeff } => {
                        *scalars.get_mut(var).unwrap() -= coeff.inner_re(y);
                    }
                }
            }
        }
        (blocks, scalars)
    }

    /// Debug dump; complex entries as `[re, im]` pairs.
    pub fn to_debug_json(&self) -> Value {
        json!({
            "psd_blocks": self.psd_blocks.iter().map(|b| json!({"name": b.name, "size": b.size})).collect::<Vec<_>>(),
            "scalars": self.scalars.iter().map(|s| json!({"name": s.name, "nonnegative": s.nonnegative})).collect::<Vec<_>>(),
            "objective": {
                "blocks": self.objective.blocks.iter().map(|(n, c)| json!({"var": n, "coeff": matrix_json(c)})).collect::<Vec<_>>(),
                "scalars": self.objective.scalars.iter().map(|(n, c)| json!({"var": n, "coeff": c})).collect::<Vec<_>>(),
            },
            "equalities": self.equalities.iter().map(|eq| json!({
                "name": eq.name,
                "rhs": matrix_json(&eq.rhs),
                "terms": eq.terms.iter().map(|t| match t {
                    Term::Block { var, ops } => json!({
                        "var": var,
                        "ops": ops.iter().map(|(w, a)| json!({"weight": w, "op": matrix_json(a)})).collect::<Vec<_>>(),
                    }),
                    Term::Scalar { var, coeff } => json!({"var": var, "coeff": matrix_json(coeff)}),
                }).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl SdpSolution {
    pub fn to_debug_json(&self) -> Value {
        json!({
            "status": format!("{:?}", self.status),
            "primal_objective": self.primal_objective,
            "dual_objective": self.dual_objective,
            "gap": self.gap,
            "feasibility_residual": self.feasibility_residual,
            "iterations": self.iterations,
            "primal_blocks": self.primal_blocks.iter().map(|(n, m)| (n.clone(), matrix_json(m))).collect::<serde_json::Map<_, _>>(),
            "scalars": self.scalars,
            "dual_multipliers": self.dual_multipliers.iter().map(|(n, m)| (n.clone(), matrix_json(m))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

pub(crate) fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|z| json!([z.re, z.im])).collect()))
            .collect(),
    )
}

/// Residuals recomputed from the raw solution matrices.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    /// Frobenius residual of each equality plus `psd:<block>` / `nonneg:<scalar>` violations.
    pub primal_residuals: BTreeMap<String, f64>,
    /// Negative part of each dual slack (`psd:<block>`) and scalar dual constraint.
    pub dual_residuals: BTreeMap<String, f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
}

impl ResidualReport {
    pub fn max_primal(&self) -> f64 {
        self.primal_residuals.values().cloned().fold(0.0, f64::max)
    }

    pub fn max_dual(&self) -> f64 {
        self.dual_residuals.values().cloned().fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.max_primal().max(self.max_dual())
    }
}

fn psd_violation(m: &ComplexMatrix) -> f64 {
    match hermitian_eig(&m.hermitian_part()) {
        Ok(e) => (-e.min()).max(0.0),
        Err(_) => f64::INFINITY,
    }
}

/// Re-checks every constraint of `p` at the point stored in `s`, without
/// using anything computed inside the solver except the raw matrices.
pub fn verify(p: &SdpProblem, s: &SdpSolution) -> Result<ResidualReport> {
    for b in &p.psd_blocks {
        let m = s
            .primal_blocks
            .get(&b.name)
            .ok_or_else(|| Error::Dimension(format!("solution lacks block {:?}", b.name)))?;
        if m.shape() != (b.size, b.size) {
            return Err(Error::Dimension(format!("block {:?} has wrong shape", b.name)));
        }
    }
    for sc in &p.scalars {
        if !s.scalars.contains_key(&sc.name) {
            return Err(Error::Dimension(format!("solution lacks scalar {:?}", sc.name)));
        }
    }
    for eq in &p.equalities {
        let y = s
            .dual_multipliers
            .get(&eq.name)
            .ok_or_else(|| Error::Dimension(format!("solution lacks multiplier {:?}", eq.name)))?;
        if y.shape() != eq.rhs.shape() {
            return Err(Error::Dimension(format!("multiplier {:?} has wrong shape", eq.name)));
        }
    }

    let mut primal = BTreeMap::new();
    for eq in &p.equalities {
        let lhs = p.equality_lhs(eq, &s.primal_blocks, &s.scalars);
        primal.insert(eq.name.clone(), lhs.distance(&eq.rhs));
    }
    for b in &p.psd_blocks {
        primal.insert(format!("psd:{}", b.name), psd_violation(&s.primal_blocks[&b.name]));
    }
    for sc in p.scalars.iter().filter(|sc| sc.nonnegative) {
        primal.insert(format!("nonneg:{}", sc.name), (-s.scalars[&sc.name]).max(0.0));
    }

    let (slacks, scalar_slacks) = p.dual_slacks(&s.dual_multipliers);
    let mut dual = BTreeMap::new();
    for (name, m) in &slacks {
        dual.insert(format!("psd:{name}"), psd_violation(m));
    }
    for sc in &p.scalars {
        let v = scalar_slacks[&sc.name];
        let r = if sc.nonnegative { (-v).max(0.0) } else { v.abs() };
        dual.insert(format!("scalar:{}", sc.name), r);
    }

    let po = p.primal_objective(&s.primal_blocks, &s.scalars);
    let d = p.dual_objective(&s.dual_multipliers);
    Ok(ResidualReport {
        primal_residuals: primal,
        dual_residuals: dual,
        primal_objective: po,
        dual_objective: d,
        gap: po - d,
    })
}
