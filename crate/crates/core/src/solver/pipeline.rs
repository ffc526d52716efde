use crate::expr::{Expr, Symbol};
use crate::lie::{determining_system, symmetry_condition, DeterminingSystem, Generator, OdeSpec};
use crate::solver::ansatz::instantiate_ansatz;
use crate::solver::{
    eliminate, t_reduce, x_reduce, LinearSystem, RowOrigin, SolverError, SymmetryBasis,
    TOdeSystem, XAnsatz,
};

/// Ansatz degrees: `deg_x` in `x` for both `xi` and `eta`, `deg_t` in `t`
/// for every coefficient function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub deg_x: u32,
    pub deg_t: u32,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig { deg_x: 4, deg_t: 6 }
    }
}

/// Two-stage view of the elimination.
///
/// Stage 1 solves the equations from `ẋ¹, ẋ², …` and names the free
/// constants of the resulting family `c1, c2, …`. Stage 2 substitutes that
/// family into the `ẋ⁰` equation and solves for the `cₖ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageTrace {
    pub stage1_rows: usize,
    pub stage1: SymmetryBasis,
    pub free_constants: Vec<Symbol>,
    /// `xi` and `eta` of the stage-1 family in terms of `free_constants`.
    pub family: Vec<(String, Expr)>,
    pub stage2_system: LinearSystem,
    pub stage2: SymmetryBasis,
}

impl StageTrace {
    /// Free constants of stage 1 that stage 2 forces to vanish.
    pub fn forced_zero(&self) -> Vec<Symbol> {
        self.stage2.forced_zero()
    }
}

/// Residuals of `symmetry_condition` on each basis generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub residuals: Vec<Expr>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(Expr::is_zero)
    }

    /// Indices of generators with nonzero residual.
    pub fn failures(&self) -> Vec<usize> {
        (0..self.residuals.len())
            .filter(|&i| !self.residuals[i].is_zero())
            .collect()
    }
}

/// Recomputes the symmetry condition for every generator of `basis`.
pub fn verify_basis(basis: &SymmetryBasis, ode: &OdeSpec) -> Result<Verification, SolverError> {
    let residuals = basis
        .generators()?
        .iter()
        .map(|g| Ok(symmetry_condition(ode, g)?.expr))
        .collect::<Result<_, SolverError>>()?;
    Ok(Verification { residuals })
}

/// Everything computed by [`analyze`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub ode: OdeSpec,
    pub config: AnalysisConfig,
    pub det: DeterminingSystem,
    pub ansatz: XAnsatz,
    pub tsys: TOdeSystem,
    pub linear: LinearSystem,
    pub basis: SymmetryBasis,
    pub trace: StageTrace,
    pub verification: Verification,
}

impl Analysis {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn generators(&self) -> Vec<Generator> {
        self.basis.generators().expect("analysis targets are xi, eta")
    }

    pub fn verdict(&self) -> String {
        format!(
            "symmetry space dimension {} within ansatz ({},{})",
            self.dim(),
            self.config.deg_x,
            self.config.deg_t
        )
    }
}

fn reserved_names(ode: &OdeSpec) -> Vec<&str> {
    let mut r: Vec<&str> = ode.params().iter().map(|p| &**p).collect();
    r.push(&ode.names().indep);
    r.push(&ode.names().dep);
    r
}

fn free_constant_names(ode: &OdeSpec, k: usize) -> Vec<Symbol> {
    let reserved = reserved_names(ode);
    let prefix = ["c", "k", "C"]
        .into_iter()
        .find(|p| !reserved.iter().any(|r| r.starts_with(p)))
        .unwrap_or("c");
    (1..=k).map(|i| Symbol::from(format!("{prefix}{i}"))).collect()
}

fn staged(
    ode: &OdeSpec,
    det: &DeterminingSystem,
    tsys: &TOdeSystem,
    deg_t: u32,
) -> Result<StageTrace, SolverError> {
    let sys1 = t_reduce(&tsys.filtered(|p| p >= 1), deg_t)?;
    let stage1 = eliminate(&sys1);
    let free_constants = free_constant_names(ode, stage1.dim());
    let family = stage1.general_solution(&free_constants);
    let (xi, eta) = (&family[0].1, &family[1].1);
    let equations = det
        .equations
        .iter()
        .filter(|e| e.xdot_power == 0)
        .map(|e| {
            let origin = RowOrigin {
                xdot_power: 0,
                x_power: 0,
                t_power: 0,
            };
            Ok((origin, instantiate_ansatz(&e.expr, xi, eta)?))
        })
        .collect::<Result<Vec<_>, SolverError>>()?;
    let stage2_system =
        LinearSystem::from_polynomials(free_constants.clone(), &equations, family.clone())?;
    let stage2 = eliminate(&stage2_system);
    Ok(StageTrace {
        stage1_rows: sys1.rows().len(),
        stage1,
        free_constants,
        family,
        stage2_system,
        stage2,
    })
}

/// Determining system, ansatz reduction, elimination, staged trace and
/// verification for a second-order ODE.
pub fn analyze(ode: &OdeSpec, config: AnalysisConfig) -> Result<Analysis, SolverError> {
    let det = determining_system(ode)?;
    let ansatz = XAnsatz::polynomial(config.deg_x, config.deg_x, &reserved_names(ode))?;
    let tsys = x_reduce(&det, &ansatz)?;
    let linear = t_reduce(&tsys, config.deg_t)?;
    let basis = eliminate(&linear);
    let trace = staged(ode, &det, &tsys, config.deg_t)?;
    if trace.stage2.dim() != basis.dim() {
        return Err(SolverError::Invariant(format!(
            "staged elimination gives dimension {} but direct elimination gives {}",
            trace.stage2.dim(),
            basis.dim()
        )));
    }
    let verification = verify_basis(&basis, ode)?;
    Ok(Analysis {
        ode: ode.clone(),
        config,
        det,
        ansatz,
        tsys,
        linear,
        basis,
        trace,
        verification,
    })
}
