//! The full Cartan run for one branch.

use serde_json::{json, Map, Value};

use super::absorb::{absorb, normalize_parameters, AbsorptionSolution, Assignment, Essential};
use super::group::{Branch, StructureGroup};
use super::lift::{lift, structure_equations, Lifted, McCoefficients, TorsionTable};
use super::reform::{check_reduction, prolong, reduce, reform, Reformed};
use super::CartanError;
use crate::exterior::StructureEquationSet;
use crate::model::CRModel;

#[derive(Clone, Debug)]
pub struct CartanRun {
    pub branch: Branch,
    pub lifted: Lifted,
    pub structure: StructureEquationSet,
    pub torsion: TorsionTable,
    pub mc_coefficients: McCoefficients,
    pub absorption: AbsorptionSolution,
    pub essential: Essential,
    pub assignment: Assignment,
    pub reduced: StructureEquationSet,
    pub prolonged: StructureEquationSet,
    pub reformed: Reformed,
}

pub fn run_cartan(m: &CRModel, branch: Branch) -> Result<CartanRun, CartanError> {
    let group = StructureGroup::new(branch);
    let lifted = lift(m, &group)?;
    let (structure, torsion, mcc) = structure_equations(&lifted)?;
    let (absorption, essential) = absorb(&torsion, &mcc);
    let assignment = normalize_parameters(&essential, &group)?;
    check_reduction(&lifted.mc.coefficients(), &assignment)?;
    if !lifted.coframe.structure()[6].is_zero() {
        return Err(CartanError::UnexpectedShape(format!("d(alpha1) = {}", lifted.coframe.structure()[6])));
    }
    let reduced = reduce(&structure, &assignment)?;
    let prolonged = prolong(&reduced);
    let reformed = reform(&prolonged)?;
    Ok(CartanRun {
        branch,
        lifted,
        structure,
        torsion,
        mc_coefficients: mcc,
        absorption,
        essential,
        assignment,
        reduced,
        prolonged,
        reformed,
    })
}

impl CartanRun {
    fn assignment_json(&self) -> Value {
        let m: Map<String, Value> = self.assignment.iter().map(|(v, x)| (v.name(), Value::String(x.to_string()))).collect();
        Value::Object(m)
    }

    /// Stage dumps in pipeline order.
    pub fn stages_json(&self) -> Vec<Value> {
        let with = |s: &StructureEquationSet, torsions: Value, assignments: Value| {
            let mut v = s.to_json();
            v["torsions"] = torsions;
            v["assignments"] = assignments;
            v
        };
        let mut out = vec![
            self.lifted.base.to_json(),
            with(&self.structure, self.torsion.to_json(), json!({})),
            json!({
                "stage": "absorbed",
                "equations": [],
                "torsions": self.essential.table.to_json(),
                "assignments": self.absorption.to_json(),
            }),
            with(&self.reduced, json!({}), self.assignment_json()),
            with(&self.prolonged, json!({}), self.assignment_json()),
        ];
        out.extend(self.reformed.stages.iter().map(|s| s.to_json()));
        out
    }

    pub fn to_json(&self) -> Value {
        let inv: Map<String, Value> =
            self.reformed.invariants.iter().map(|(k, v)| (k.clone(), Value::String(v.to_string()))).collect();
        json!({
            "branch": self.branch.eps(),
            "class": self.reformed.class.tag(),
            "invariants": inv,
            "stages": self.stages_json(),
        })
    }
}
