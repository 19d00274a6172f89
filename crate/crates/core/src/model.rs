//! CR model definitions: the text DSL, validation, and the built-in type
//! (1,4) family `M(a,b)`.

use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::algebra::var::{self, Z, Z_BAR};
use crate::algebra::{parse_with, AlgebraError, Gaussian, Monomial, Poly, Reality, Scalar, Var, VarKind};

/// Source text of the shipped `m14.model`.
pub const M14_MODEL_TEXT: &str = include_str!("../models/m14.model");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("right-hand side of Xi{j} is not purely imaginary (P must equal -conj(P))")]
    RealityViolation { j: usize },
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Syntax { line, col, msg: msg.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamDecl {
    pub name: String,
    pub var: Var,
    pub reality: Reality,
    pub nonzero: bool,
}

/// `w_j - conj(w_j) = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningEquation {
    pub j: usize,
    pub rhs: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CRModel {
    pub name: String,
    pub cr_dimension: usize,
    pub codimension: usize,
    pub params: Vec<ParamDecl>,
    pub xi: Vec<DefiningEquation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelDiagnostics {
    Ok,
    NotTotallyNondegenerate,
    ReducesToM01,
    /// Outside the (1,4) family: only grammar and reality were checked.
    Unchecked,
}

impl ModelDiagnostics {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelDiagnostics::Ok => "ok",
            ModelDiagnostics::NotTotallyNondegenerate => "not_totally_nondegenerate",
            ModelDiagnostics::ReducesToM01 => "reduces_to_M01",
            ModelDiagnostics::Unchecked => "unchecked",
        }
    }
}

fn two_i() -> Poly {
    Poly::constant(Gaussian::complex(0, 2))
}

fn zm(p: u32, q: u32) -> Monomial {
    Monomial::var(Z, p).mul(&Monomial::var(Z_BAR, q))
}

fn zpoly(terms: &[(Gaussian, u32, u32)]) -> Poly {
    Poly::from_terms(terms.iter().map(|(c, p, q)| (zm(*p, *q), c.clone())))
}

/// The three model polynomials shared by every member of the family.
fn m14_lower() -> [Poly; 3] {
    let i2 = Gaussian::complex(0, 2);
    let two = Gaussian::int(2);
    [
        zpoly(&[(i2.clone(), 1, 1)]),
        zpoly(&[(i2.clone(), 2, 1), (i2, 1, 2)]),
        zpoly(&[(two.clone(), 2, 1), (-two, 1, 2)]),
    ]
}

/// `2i(a z^3 zbar + conj(a) z zbar^3) + 2i b z^2 zbar^2` with scalar `a`, `b`.
fn m14_top(a: &Scalar, b: &Scalar) -> Poly {
    let a = a.as_poly().expect("polynomial parameter").clone();
    let ab = a.conj();
    let b = b.as_poly().expect("polynomial parameter").clone();
    let unit = |m: Monomial| Poly::term(Gaussian::one(), m);
    &two_i() * &(&(&(&a * &unit(zm(3, 1))) + &(&ab * &unit(zm(1, 3)))) + &(&b * &unit(zm(2, 2))))
}

/// The family member `M(a,b)`. Parameters that are plain registry
/// variables (symbolic use) are declared; numeric values need no declaration.
pub fn builtin_m14(a: &Scalar, b: &Scalar) -> CRModel {
    let mut params = Vec::new();
    if a == &Scalar::var(var::A) || b == &Scalar::var(var::B) {
        params.push(ParamDecl { name: "a".into(), var: var::A, reality: Reality::Complex, nonzero: true });
        params.push(ParamDecl { name: "b".into(), var: var::B, reality: Reality::Real, nonzero: false });
    }
    let [p1, p2, p3] = m14_lower();
    let p4 = m14_top(a, b);
    CRModel {
        name: "M14".into(),
        cr_dimension: 1,
        codimension: 4,
        params,
        xi: [p1, p2, p3, p4].into_iter().enumerate().map(|(k, rhs)| DefiningEquation { j: k + 1, rhs }).collect(),
    }
}

/// `M(a,b)` with symbolic parameters `a` (complex) and `b` (real).
pub fn builtin_m14_symbolic() -> CRModel {
    builtin_m14(&Scalar::var(var::A), &Scalar::var(var::B))
}

impl CRModel {
    pub fn rhs(&self, j: usize) -> Option<&Poly> {
        self.xi.iter().find(|e| e.j == j).map(|e| &e.rhs)
    }

    /// Reads `(a, b)` off a type (1,4) model of the family, or `None` when
    /// the defining polynomials do not have the family's shape.
    pub fn m14_parameters(&self) -> Option<(Scalar, Scalar)> {
        if (self.cr_dimension, self.codimension) != (1, 4) {
            return None;
        }
        let lower = m14_lower();
        for (k, p) in lower.iter().enumerate() {
            if self.rhs(k + 1)? != p {
                return None;
            }
        }
        let p4 = self.rhs(4)?;
        let coeff = |p: u32, q: u32| -> Poly {
            let mut acc = Vec::new();
            for (m, c) in p4.terms() {
                if m.degree_in(Z) == p && m.degree_in(Z_BAR) == q {
                    acc.push((m.without(Z).without(Z_BAR), c.clone()));
                }
            }
            Poly::from_terms(acc)
        };
        let half_i_inv = Gaussian::complex(0, 2).inv().expect("nonzero");
        let a = Scalar::from_poly(coeff(3, 1).scale(&half_i_inv));
        let b = Scalar::from_poly(coeff(2, 2).scale(&half_i_inv));
        if &m14_top(&a, &b) != p4 {
            return None;
        }
        Some((a, b))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "name": self.name,
            "type": [self.cr_dimension, self.codimension],
            "params": self.params.iter().map(|p| json!({
                "name": p.name,
                "reality": match p.reality { Reality::Real => "real", Reality::Complex => "complex" },
                "nonzero": p.nonzero,
            })).collect::<Vec<_>>(),
            "xi": self.xi.iter().map(|e| json!({"j": e.j, "rhs": e.rhs.to_string()})).collect::<Vec<_>>(),
        })
    }
}

/// Classification of a type (1,4) family member.
pub fn validate_model(m: &CRModel) -> ModelDiagnostics {
    let Some((a, b)) = m.m14_parameters() else { return ModelDiagnostics::Unchecked };
    match (a.is_zero(), b.is_zero()) {
        (true, true) => ModelDiagnostics::NotTotallyNondegenerate,
        (true, false) => ModelDiagnostics::ReducesToM01,
        _ => ModelDiagnostics::Ok,
    }
}

impl fmt::Display for CRModel {
    /// DSL rendering; `parse_model` reads it back to an equal model.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model {} type ({},{})", self.name, self.cr_dimension, self.codimension)?;
        for p in &self.params {
            let r = match p.reality {
                Reality::Real => "real",
                Reality::Complex => "complex",
            };
            writeln!(f, "param {} {}{}", p.name, r, if p.nonzero { " nonzero" } else { "" })?;
        }
        for e in &self.xi {
            writeln!(f, "Xi{}: w{} - conj(w{}) = {}", e.j, e.j, e.j, e.rhs)?;
        }
        Ok(())
    }
}

fn parse_index(s: &str, line: usize, col: usize) -> Result<usize, ModelError> {
    s.parse().map_err(|_| syntax(line, col, format!("expected integer, found '{s}'")))
}

/// Parses the model DSL.
pub fn parse_model(text: &str) -> Result<CRModel, ModelError> {
    let mut header: Option<(String, usize, usize)> = None;
    let mut params: Vec<ParamDecl> = Vec::new();
    let mut xi: Vec<DefiningEquation> = Vec::new();
    let mut last_line = 0;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len() + 1;
        let words: Vec<&str> = trimmed.split_whitespace().collect();
        match words[0] {
            "model" => {
                if header.is_some() {
                    return Err(syntax(line, indent, "duplicate model header"));
                }
                if !params.is_empty() || !xi.is_empty() {
                    return Err(syntax(line, indent, "model header must come first"));
                }
                let rest = trimmed["model".len()..].trim_start();
                let (name, after) = rest.split_once(char::is_whitespace).ok_or_else(|| syntax(line, indent, "expected 'model NAME type (n,k)'"))?;
                if !var::is_identifier(name) {
                    return Err(syntax(line, indent + 6, format!("invalid model name '{name}'")));
                }
                let after = after.trim_start();
                let ty = after.strip_prefix("type").ok_or_else(|| syntax(line, indent, "expected 'type'"))?.trim();
                let inner = ty
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| syntax(line, indent, "expected '(n,k)'"))?;
                let (n, k) = inner.split_once(',').ok_or_else(|| syntax(line, indent, "expected '(n,k)'"))?;
                let n = parse_index(n.trim(), line, indent)?;
                let k = parse_index(k.trim(), line, indent)?;
                if n == 0 || k == 0 {
                    return Err(syntax(line, indent, "type entries must be positive"));
                }
                header = Some((name.to_string(), n, k));
            }
            "param" => {
                if header.is_none() {
                    return Err(syntax(line, indent, "param before model header"));
                }
                if !xi.is_empty() {
                    return Err(syntax(line, indent, "param after defining equations"));
                }
                if words.len() < 3 || words.len() > 4 {
                    return Err(syntax(line, indent, "expected 'param NAME real|complex [nonzero]'"));
                }
                let name = words[1];
                if !var::is_identifier(name) || ["i", "z", "conj"].contains(&name) {
                    return Err(syntax(line, indent + 6, format!("invalid parameter name '{name}'")));
                }
                let reality = match words[2] {
                    "real" => Reality::Real,
                    "complex" => Reality::Complex,
                    w => return Err(syntax(line, indent, format!("expected 'real' or 'complex', found '{w}'"))),
                };
                let nonzero = match words.get(3) {
                    None => false,
                    Some(&"nonzero") => true,
                    Some(w) => return Err(syntax(line, indent, format!("unexpected '{w}'"))),
                };
                if params.iter().any(|p| p.name == name) {
                    return Err(syntax(line, indent, format!("parameter '{name}' declared twice")));
                }
                let v = Var::declare(name, reality, VarKind::Parameter, 0).map_err(|e| syntax(line, indent, e.to_string()))?;
                if v.kind() != VarKind::Parameter {
                    return Err(syntax(line, indent, format!("'{name}' is a coordinate")));
                }
                params.push(ParamDecl { name: name.to_string(), var: v, reality, nonzero });
            }
            w if w.starts_with("Xi") => {
                let Some((_, n, k)) = &header else {
                    return Err(syntax(line, indent, "defining equation before model header"));
                };
                let (_, k) = (*n, *k);
                let (lhs, rhs) = trimmed.split_once('=').ok_or_else(|| syntax(line, indent, "expected '='"))?;
                let rhs_col = indent + lhs.len() + 1;
                let (label, wpart) = lhs.split_once(':').ok_or_else(|| syntax(line, indent, "expected ':' after XiN"))?;
                let j = parse_index(label.trim().trim_start_matches("Xi"), line, indent)?;
                let compact: String = wpart.chars().filter(|c| !c.is_whitespace()).collect();
                let expected = format!("w{j}-conj(w{j})");
                if compact != expected {
                    return Err(syntax(line, indent + label.len() + 1, format!("expected 'w{j} - conj(w{j})'")));
                }
                if j == 0 || j > k {
                    return Err(syntax(line, indent, format!("index {j} outside 1..{k}")));
                }
                if xi.iter().any(|e| e.j == j) {
                    return Err(syntax(line, indent, format!("Xi{j} defined twice")));
                }
                let resolve = |name: &str| -> Option<Var> {
                    if name == "z" {
                        return Some(Z);
                    }
                    params.iter().find(|p| p.name == name).map(|p| p.var)
                };
                let value = parse_with(rhs, &resolve).map_err(|e| match e {
                    AlgebraError::Parse { pos, msg } => syntax(line, rhs_col + pos, msg),
                    other => syntax(line, rhs_col, other.to_string()),
                })?;
                let poly = value
                    .as_poly()
                    .cloned()
                    .ok_or_else(|| syntax(line, rhs_col, "right-hand side must be a polynomial"))?;
                if poly.conj() != -&poly {
                    return Err(ModelError::RealityViolation { j });
                }
                xi.push(DefiningEquation { j, rhs: poly });
            }
            w => return Err(syntax(line, indent, format!("unexpected '{w}'"))),
        }
    }
    let Some((name, n, k)) = header else {
        return Err(syntax(last_line.max(1), 1, "missing model header"));
    };
    if xi.is_empty() {
        return Err(syntax(last_line.max(1), 1, "at least one defining equation required"));
    }
    if xi.len() != k {
        return Err(syntax(last_line, 1, format!("type ({n},{k}) needs {k} defining equations, found {}", xi.len())));
    }
    xi.sort_by_key(|e| e.j);
    Ok(CRModel { name, cr_dimension: n, codimension: k, params, xi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_number;

    fn num(s: &str) -> Scalar {
        Scalar::constant(parse_number(s).unwrap())
    }

    #[test]
    fn shipped_file_matches_builtin() {
        let m = parse_model(M14_MODEL_TEXT).unwrap();
        assert_eq!(m, builtin_m14_symbolic());
        assert_eq!(m.xi[1].rhs.to_string(), "2*i*z^2*conj(z) + 2*i*z*conj(z)^2");
    }

    #[test]
    fn heisenberg_is_valid() {
        let m = parse_model("model H type (1,1)\nXi1: w1 - conj(w1) = 2i*z*conj(z)\n").unwrap();
        assert_eq!(m.codimension, 1);
        assert_eq!(validate_model(&m), ModelDiagnostics::Unchecked);
    }

    #[test]
    fn syntax_errors_are_reported() {
        let e = parse_model("model H type (1,1)\nXi1: w1 - conj(w1) = 2i*(z*conj(z)\n").unwrap_err();
        assert!(matches!(e, ModelError::Syntax { line: 2, .. }), "{e}");
        let e = parse_model("model H type (1,1)\nXi1: w1 - conj(w1) = 2*z*conj(z)\n").unwrap_err();
        assert_eq!(e, ModelError::RealityViolation { j: 1 });
        assert!(parse_model("model H type (1,1)\nXi1: w1 - conj(w1) = 2i*w1\n").is_err());
        assert!(parse_model("model H type (1,1)\nXi1: w1 - conj(w1) = 2i*q*z\n").is_err());
    }

    #[test]
    fn numeric_members() {
        let m = builtin_m14(&num("0"), &num("1"));
        assert_eq!(m.rhs(4).unwrap().to_string(), "2*i*z^2*conj(z)^2");
        let m = builtin_m14(&num("1"), &num("0"));
        assert_eq!(m.rhs(4).unwrap().to_string(), "2*i*z^3*conj(z) + 2*i*z*conj(z)^3");
        assert_eq!(validate_model(&builtin_m14(&num("0"), &num("0"))), ModelDiagnostics::NotTotallyNondegenerate);
        assert_eq!(validate_model(&builtin_m14(&num("0"), &num("5"))), ModelDiagnostics::ReducesToM01);
        assert_eq!(validate_model(&builtin_m14(&num("1+1i"), &num("2"))), ModelDiagnostics::Ok);
        assert_eq!(validate_model(&builtin_m14_symbolic()), ModelDiagnostics::Ok);
    }

    #[test]
    fn render_parse_roundtrip() {
        for m in [builtin_m14_symbolic(), builtin_m14(&num("2/3-1/5i"), &num("-7/2"))] {
            let text = m.to_string();
            assert_eq!(parse_model(&text).unwrap(), m, "{text}");
        }
        let json = builtin_m14_symbolic().to_json();
        assert_eq!(json["type"], json!([1, 4]));
        assert_eq!(json["xi"][0]["rhs"], "2*i*z*conj(z)");
    }
}
