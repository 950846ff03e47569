use super::plot::Series;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// One side-by-side comparison of two computed quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// Claim being tested, e.g. `"mu1 >= 1"`.
    pub claim: String,
    pub lhs: f64,
    pub rhs: f64,
    /// One of `>=`, `<=`, `<`, `==`.
    pub relation: String,
    pub tolerance: f64,
    pub pass: bool,
    /// Disabled checks are reported but do not affect the exit status.
    pub enforced: bool,
}

impl BoundCheck {
    pub fn at_least(claim: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::new(claim, lhs, rhs, ">=", tolerance, lhs >= rhs - tolerance)
    }

    pub fn at_most(claim: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::new(claim, lhs, rhs, "<=", tolerance, lhs <= rhs + tolerance)
    }

    pub fn below(claim: &str, lhs: f64, rhs: f64) -> Self {
        Self::new(claim, lhs, rhs, "<", 0.0, lhs < rhs)
    }

    pub fn equal(claim: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::new(claim, lhs, rhs, "==", tolerance, (lhs - rhs).abs() <= tolerance)
    }

    fn new(claim: &str, lhs: f64, rhs: f64, relation: &str, tolerance: f64, pass: bool) -> Self {
        Self { claim: claim.into(), lhs, rhs, relation: relation.into(), tolerance, pass: pass && lhs.is_finite() && rhs.is_finite(), enforced: true }
    }

    pub fn advisory(mut self) -> Self {
        self.enforced = false;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshStats {
    pub h: f64,
    pub vertices: usize,
    pub cells: usize,
    pub max_cell_diameter: f64,
    pub min_angle_degrees: f64,
}

/// Values computed at one refinement level (or one parameter value).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub label: String,
    pub h: f64,
    pub dofs: usize,
    pub mu1: Option<f64>,
    pub lambda1: Option<f64>,
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub schema_version: u32,
    pub scenario_id: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub levels: Vec<Level>,
    /// `(4 μ_fine − μ_coarse) / 3` from the two finest levels.
    pub richardson_mu1: Option<f64>,
    pub richardson_lambda1: Option<f64>,
    pub values: BTreeMap<String, f64>,
    pub bound_checks: Vec<BoundCheck>,
    pub mesh_statistics: Vec<MeshStats>,
    pub series: Vec<Series>,
    pub passed: bool,
}

impl ScenarioReport {
    pub fn new(id: &str, parameters: BTreeMap<String, String>, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            scenario_id: id.into(),
            parameters,
            seed,
            levels: Vec::new(),
            richardson_mu1: None,
            richardson_lambda1: None,
            values: BTreeMap::new(),
            bound_checks: Vec::new(),
            mesh_statistics: Vec::new(),
            series: Vec::new(),
            passed: true,
        }
    }

    pub fn check(&mut self, c: BoundCheck) {
        self.bound_checks.push(c);
    }

    /// Recomputes `passed` from the enforced checks.
    pub fn finalize(&mut self) {
        self.passed = self.bound_checks.iter().all(|c| c.pass || !c.enforced);
        if self.levels.len() >= 2 {
            let n = self.levels.len();
            let (c, f) = (&self.levels[n - 2], &self.levels[n - 1]);
            let rich = |a: Option<f64>, b: Option<f64>| Some((4.0 * b? - a?) / 3.0);
            if (c.h / f.h - 2.0).abs() < 1e-9 {
                self.richardson_mu1 = rich(c.mu1, f.mu1);
                self.richardson_lambda1 = rich(c.lambda1, f.lambda1);
            }
        }
    }

    pub fn find_check(&self, claim: &str) -> Option<&BoundCheck> {
        self.bound_checks.iter().find(|c| c.claim == claim)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Levels table followed by the bound checks.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.15e}")).unwrap_or_default();
        let mut s = String::from("label,h,dofs,mu1,lambda1,residual\n");
        for l in &self.levels {
            let _ = writeln!(s, "{},{},{},{},{},{}", l.label, l.h, l.dofs, opt(l.mu1), opt(l.lambda1), opt(l.residual));
        }
        s.push_str("\nclaim,lhs,relation,rhs,tolerance,pass,enforced\n");
        for c in &self.bound_checks {
            let _ = writeln!(s, "\"{}\",{:.15e},{},{:.15e},{:e},{},{}", c.claim, c.lhs, c.relation, c.rhs, c.tolerance, c.pass, c.enforced);
        }
        s
    }
}
