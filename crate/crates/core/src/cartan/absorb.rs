//! Absorption of torsion into the Maurer–Cartan forms and normalization of
//! group parameters.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::Value;

use super::group::{StructureGroup, GROUP_PARAMS, LIFTED, MC_SYMBOLS};
use super::lift::{McCoefficients, TorsionTable};
use super::CartanError;
use crate::algebra::{RatFn, Scalar, Var};
use crate::linalg::{RowReducer, RowStatus};

/// Replacements `alpha_s -> alpha_s + sum_j z[(s, j)] theta_j`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AbsorptionSolution {
    pub z: BTreeMap<(usize, usize), Scalar>,
    /// Number of independent absorption conditions.
    pub rank: usize,
}

impl AbsorptionSolution {
    pub fn get(&self, s: usize, j: usize) -> Scalar {
        self.z.get(&(s, j)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .z
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(&(s, j), v)| (format!("{}[{}]", MC_SYMBOLS[s], LIFTED[j]), Value::String(v.to_string())))
            .collect();
        Value::Object(map)
    }
}

/// Torsions left after absorption: the nonzero residue at every position
/// whose condition depends on earlier ones.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Essential {
    pub table: TorsionTable,
    /// Positions in elimination order.
    pub order: Vec<(usize, usize, usize)>,
}

const N: usize = 6;
const NMC: usize = 12;

fn column(s: usize, j: usize) -> usize {
    s * N + j
}

/// Change in `T^k_ij` per unit of each `z^s_m`.
fn absorption_row(mcc: &McCoefficients, k: usize, i: usize, j: usize) -> Vec<Scalar> {
    let mut row = vec![Scalar::zero(); NMC * N];
    for s in 0..NMC {
        if let Some(c) = mcc.get(&(k, s, j)) {
            let col = column(s, i);
            row[col] = &row[col] + c;
        }
        if let Some(c) = mcc.get(&(k, s, i)) {
            let col = column(s, j);
            row[col] = &row[col] - c;
        }
    }
    row
}

/// Solves for `z` killing as many torsions as possible. Rows are processed in
/// coframe order and lexicographic wedge order; each row either becomes a
/// pivot (its torsion is absorbed) or depends on earlier pivots, in which
/// case the corresponding combination of torsions is essential.
pub fn absorb(t: &TorsionTable, mcc: &McCoefficients) -> (AbsorptionSolution, Essential) {
    let mut reducer = RowReducer::new(NMC * N);
    let mut pivot_keys = Vec::new();
    let mut essential = Essential::default();
    for k in 0..N {
        for i in 0..N {
            for j in i + 1..N {
                let row = absorption_row(mcc, k, i, j);
                let tv = t.get(k, i, j);
                match reducer.push(&row) {
                    RowStatus::Pivot(_) => pivot_keys.push((k, i, j)),
                    RowStatus::Dependent(lambda) => {
                        let mut v = tv.clone();
                        for (l, key) in lambda.iter().zip(&pivot_keys) {
                            if !l.is_zero() {
                                v = &v - &(l * &t.get(key.0, key.1, key.2));
                            }
                        }
                        if !v.is_zero() {
                            essential.order.push((k, i, j));
                            essential.table.entries.insert((k, i, j), v);
                        }
                    }
                }
            }
        }
    }
    let rhs: Vec<Scalar> = pivot_keys.iter().map(|&(k, i, j)| -t.get(k, i, j)).collect();
    let x = reducer.particular_solution(&rhs);
    let mut sol = AbsorptionSolution { z: BTreeMap::new(), rank: reducer.rank() };
    for s in 0..NMC {
        for j in 0..N {
            let v = &x[column(s, j)];
            if !v.is_zero() {
                sol.z.insert((s, j), v.clone());
            }
        }
    }
    (sol, essential)
}

/// Torsion after absorbing with `z`.
pub fn absorbed_torsion(t: &TorsionTable, mcc: &McCoefficients, z: &AbsorptionSolution) -> TorsionTable {
    let mut out = TorsionTable::default();
    for k in 0..N {
        for i in 0..N {
            for j in i + 1..N {
                let row = absorption_row(mcc, k, i, j);
                let mut v = t.get(k, i, j);
                for (col, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        v = &v + &(c * &z.get(col / N, col % N));
                    }
                }
                if !v.is_zero() {
                    out.entries.insert((k, i, j), v);
                }
            }
        }
    }
    out
}

/// Values of the normalized group parameters.
pub type Assignment = BTreeMap<Var, Scalar>;

/// Makes every parameter-dependent essential torsion vanish by triangular
/// back-substitution: repeatedly pick a torsion that is linear in exactly one
/// unassigned parameter, solve for it and assign its conjugate too.
/// Essential torsions free of group parameters other than `a1` are left
/// alone; they are the candidates for invariants.
pub fn normalize_parameters(ess: &Essential, g: &StructureGroup) -> Result<Assignment, CartanError> {
    let unknowns: BTreeSet<Var> = GROUP_PARAMS[1..].iter().copied().collect();
    let mut assign = Assignment::new();
    let subst = |x: &Scalar, a: &Assignment| x.substitute(&|v| a.get(&v).cloned());
    loop {
        let mut progress = false;
        for key in &ess.order {
            let v = subst(&ess.table.entries[key], &assign)?;
            if v.is_zero() {
                continue;
            }
            let open: Vec<Var> = v.vars().into_iter().filter(|x| unknowns.contains(x) && !assign.contains_key(x)).collect();
            if open.len() != 1 {
                continue;
            }
            let p = open[0];
            if v.num().degree_in(p) != 1 || v.den().contains_var(p) {
                continue;
            }
            let coeffs = v.num().coeffs_in(p);
            let value = -&RatFn::from_poly(coeffs[0].clone()).checked_div(&RatFn::from_poly(coeffs[1].clone()))?;
            let pc = p.conj();
            let cv = g.conj_scalar(&value);
            assign.insert(p, value);
            if pc != p && unknowns.contains(&pc) {
                if let Some(old) = assign.get(&pc) {
                    if *old != cv {
                        return Err(CartanError::NormalizationFailed(format!("conflicting values for {}", pc.name())));
                    }
                }
                assign.insert(pc, cv);
            }
            progress = true;
        }
        if !progress {
            break;
        }
    }
    // Every essential torsion must now be free of unassigned parameters, and
    // the parameter-dependent ones must vanish.
    let mut dump = Vec::new();
    for key in &ess.order {
        let v = subst(&ess.table.entries[key], &assign)?;
        let open: Vec<String> =
            v.vars().into_iter().filter(|x| unknowns.contains(x) && !assign.contains_key(x)).map(|x| x.name()).collect();
        if !open.is_empty() {
            dump.push(format!("{} = {} (free: {})", super::lift::torsion_label(key.0, key.1, key.2), v, open.join(", ")));
        }
    }
    if !dump.is_empty() {
        return Err(CartanError::NormalizationFailed(dump.join("; ")));
    }
    Ok(assign)
}
