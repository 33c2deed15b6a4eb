//! Command dispatch: parse the document, call the library, serialize the
//! verdict document.
//!
//! Exit codes report completion status only, never the mathematical verdict:
//! 0 = analysis completed (verdict inside the document, positive or
//! negative), 2 = malformed input, 3 = internal numerical failure.

use serde_json::{json, Map, Value};

use cdv_core::formal::{
    exp_gauge_reduce, formal_reduce, gauge_equation_residual, FormalError, RankOneSystem,
};
use cdv_core::frobenius::{dim2_criterion, tate_structure_check, v_from_potential, FrobeniusPoint};
use cdv_core::matrix::{frobenius_distance, Matrix};
use cdv_core::monodromy::{equivalence_verdict, monodromy_numeric, MonodromyError};
use cdv_core::potentiality::{
    solve_potentiality, verify_cgf, NoSolutionReason, PotentialityError, SolveOutcome,
};
use cdv_core::scalar::{exact_to_c64, Exact, C64};
use cdv_core::AlgebraError;

use crate::doc::*;

pub struct Flags {
    pub order: Option<usize>,
    pub max_degree: usize,
    pub tolerance: f64,
    pub radius: f64,
    pub mode: Option<Mode>,
}

pub enum RunError {
    Malformed(String),
    Numerical(String),
}

impl From<DocError> for RunError {
    fn from(e: DocError) -> Self {
        RunError::Malformed(e.0)
    }
}

impl From<FormalError> for RunError {
    fn from(e: FormalError) -> Self {
        match e {
            FormalError::Algebra(AlgebraError::Overflow) => RunError::Numerical(e.to_string()),
            _ => RunError::Malformed(e.to_string()),
        }
    }
}

impl From<MonodromyError> for RunError {
    fn from(e: MonodromyError) -> Self {
        match e {
            MonodromyError::ToleranceNotMet => RunError::Numerical(e.to_string()),
            MonodromyError::Algebra(AlgebraError::Overflow) => RunError::Numerical(e.to_string()),
            _ => RunError::Malformed(e.to_string()),
        }
    }
}

impl From<PotentialityError> for RunError {
    fn from(e: PotentialityError) -> Self {
        RunError::Malformed(e.to_string())
    }
}

/// Analysis sections of a completed run.
struct Sections {
    input: Value,
    derived: Value,
    verdicts: Value,
    diagnostics: Value,
}

/// Run a command against a parsed document. Returns the output document and
/// the process exit code.
pub fn run(command: &str, doc: &InputDocument, flags: &Flags) -> (Value, i32) {
    let mut out = Map::new();
    out.insert("command".into(), json!(command));
    out.insert("mode".into(), json!(doc.mode));
    match dispatch(command, doc, flags) {
        Ok(sections) => {
            out.insert("input".into(), sections.input);
            out.insert("derived".into(), sections.derived);
            out.insert("verdicts".into(), sections.verdicts);
            out.insert("diagnostics".into(), sections.diagnostics);
            out.insert("error".into(), Value::Null);
            (Value::Object(out), 0)
        }
        Err(RunError::Malformed(msg)) => {
            out.insert("error".into(), json!(msg));
            (Value::Object(out), 2)
        }
        Err(RunError::Numerical(msg)) => {
            out.insert("error".into(), json!(msg));
            (Value::Object(out), 3)
        }
    }
}

fn dispatch(command: &str, doc: &InputDocument, flags: &Flags) -> Result<Sections, RunError> {
    validate_document(doc, flags)?;
    match command {
        "vmatrix" => cmd_vmatrix(doc),
        "check-tate" => cmd_check_tate(doc),
        "criterion-2d" => cmd_criterion_2d(doc),
        "reduce" => cmd_reduce(doc, flags),
        "monodromy" => cmd_monodromy(doc, flags),
        "potential" => cmd_potential(doc, flags),
        other => Err(RunError::Malformed(format!("unknown command {other}"))),
    }
}

fn validate_document(doc: &InputDocument, flags: &Flags) -> Result<(), RunError> {
    if let Some(mode) = flags.mode {
        if mode != doc.mode {
            return Err(RunError::Malformed(format!(
                "--mode {mode:?} disagrees with the document mode {:?}",
                doc.mode
            )));
        }
    }
    match (&doc.frobenius_point, &doc.raw_system) {
        (Some(_), Some(_)) => Err(RunError::Malformed(
            "exactly one of frobenius_point and raw_system must be present".into(),
        )),
        (None, None) => Err(RunError::Malformed(
            "the document carries neither frobenius_point nor raw_system".into(),
        )),
        _ => Ok(()),
    }
}

fn require_exact(doc: &InputDocument, what: &str) -> Result<(), RunError> {
    if doc.mode != Mode::Exact {
        return Err(RunError::Malformed(format!("{what} requires exact mode")));
    }
    Ok(())
}

fn build_point(doc: &InputDocument) -> Result<(FrobeniusPoint, Value), RunError> {
    let fp = doc
        .frobenius_point
        .as_ref()
        .ok_or_else(|| RunError::Malformed("this command needs a frobenius_point".into()))?;
    let u: Vec<Exact> = fp.u.iter().map(parse_exact).collect::<Result<_, _>>()?;
    let eta_first: Vec<Exact> = fp
        .eta_first
        .iter()
        .map(parse_exact)
        .collect::<Result<_, _>>()?;
    let eta_second = parse_exact_matrix(&fp.eta_second)?;
    let d = parse_rational(&fp.d)?;
    let kappa = fp
        .kappa
        .as_ref()
        .map(|k| parse_exact_matrix(k))
        .transpose()?;
    if fp.m != u.len() {
        return Err(RunError::Malformed(format!(
            "m = {} disagrees with {} canonical coordinates",
            fp.m,
            u.len()
        )));
    }
    let echo = json!({
        "m": fp.m,
        "u": exact_vec_json(&u),
        "eta_first": exact_vec_json(&eta_first),
        "eta_second": exact_matrix_json(&eta_second),
        "d": rational_json(&d),
        "kappa": kappa.as_ref().map(exact_matrix_json),
    });
    let point = FrobeniusPoint::new(u, eta_first, eta_second, d, kappa)
        .map_err(|e| RunError::Malformed(e.to_string()))?;
    Ok((point, echo))
}

enum SystemInput {
    Uv(Matrix<Exact>, Matrix<Exact>),
    UqUdag(Matrix<Exact>, Matrix<Exact>, Matrix<Exact>),
}

fn resolve_system(doc: &InputDocument) -> Result<(SystemInput, Value), RunError> {
    if doc.frobenius_point.is_some() {
        let (point, echo) = build_point(doc)?;
        let u = point.u_matrix();
        let v = v_from_potential(&point);
        return Ok((SystemInput::Uv(u, v), echo));
    }
    let raw = doc.raw_system.as_ref().expect("validated");
    let u = parse_exact_matrix(&raw.u)?;
    match (&raw.v, &raw.q, &raw.udag) {
        (Some(v), None, None) => {
            let v = parse_exact_matrix(v)?;
            if v.dim() != u.dim() {
                return Err(RunError::Malformed("U and V dimensions differ".into()));
            }
            let echo = json!({ "U": exact_matrix_json(&u), "V": exact_matrix_json(&v) });
            Ok((SystemInput::Uv(u, v), echo))
        }
        (None, Some(q), Some(udag)) => {
            let q = parse_exact_matrix(q)?;
            let udag = parse_exact_matrix(udag)?;
            if q.dim() != u.dim() || udag.dim() != u.dim() {
                return Err(RunError::Malformed("U, Q, Udag dimensions differ".into()));
            }
            let echo = json!({
                "U": exact_matrix_json(&u),
                "Q": exact_matrix_json(&q),
                "Udag": exact_matrix_json(&udag),
            });
            Ok((SystemInput::UqUdag(u, q, udag), echo))
        }
        _ => Err(RunError::Malformed(
            "raw_system needs either {U, V} or {U, Q, Udag}".into(),
        )),
    }
}

fn cmd_vmatrix(doc: &InputDocument) -> Result<Sections, RunError> {
    require_exact(doc, "vmatrix")?;
    let (point, echo) = build_point(doc)?;
    let v = v_from_potential(&point);
    Ok(Sections {
        input: echo,
        derived: json!({ "V": exact_matrix_json(&v) }),
        verdicts: json!({ "diagonal_is_zero": v.has_zero_diagonal() }),
        diagnostics: json!({}),
    })
}

fn cmd_check_tate(doc: &InputDocument) -> Result<Sections, RunError> {
    require_exact(doc, "check-tate")?;
    let (point, echo) = build_point(doc)?;
    let report = tate_structure_check(&point).map_err(|e| RunError::Malformed(e.to_string()))?;
    Ok(Sections {
        input: echo,
        derived: json!({}),
        verdicts: json!({
            "kappa_diagonal": report.kappa_diagonal,
            "kappa_unimodular": report.kappa_unimodular,
            "h_matches_abs_eta": report.h_matches_abs_eta,
            "commutators_vanish": report.commutators_vanish,
            "overall": report.overall,
        }),
        diagnostics: json!({}),
    })
}

fn cmd_criterion_2d(doc: &InputDocument) -> Result<Sections, RunError> {
    require_exact(doc, "criterion-2d")?;
    let (point, echo) = build_point(doc)?;
    let criterion = dim2_criterion(&point).map_err(|e| RunError::Malformed(e.to_string()))?;
    let v = v_from_potential(&point);
    Ok(Sections {
        input: echo,
        derived: json!({
            "n": rational_json(&criterion.n),
            "predicted_V": exact_matrix_json(&criterion.predicted_v),
            "V": exact_matrix_json(&v),
        }),
        verdicts: json!({
            "strongly_potential": criterion.strongly_potential,
            "v_matches_prediction": v == criterion.predicted_v,
        }),
        diagnostics: json!({}),
    })
}

fn cmd_reduce(doc: &InputDocument, flags: &Flags) -> Result<Sections, RunError> {
    require_exact(doc, "reduce")?;
    let (input, echo) = resolve_system(doc)?;
    let (system, exp_gauge_extra) = match &input {
        SystemInput::Uv(u, v) => (RankOneSystem::from_uv(u, v), None),
        SystemInput::UqUdag(u, q, udag) => {
            let system = RankOneSystem::from_uq_udag(u, q, udag);
            // the explicit exponential gauge applies to the Tate case Q = 0
            let extra = if q.is_zero() {
                Some((u.clone(), udag.clone()))
            } else {
                None
            };
            (system, extra)
        }
    };
    let order = flags.order.unwrap_or(2 * system.dim() + 4);
    let (gauge, nf) = formal_reduce(&system, order)?;
    let residual = gauge_equation_residual(&system, &gauge, &nf);
    let residual_zero = residual.iter().all(|r| r.is_zero());

    let mut derived = json!({
        "normal_form": {
            "exponents": exact_vec_json(&nf.exponents),
            "residues": exact_vec_json(&nf.residues),
        },
        "gauge": Value::Array(
            gauge.series().coeffs().iter().map(exact_matrix_json).collect(),
        ),
    });
    let mut diagnostics = json!({
        "order": gauge.order(),
        "gauge_equation_exact": residual_zero,
    });
    if let Some((u, udag)) = exp_gauge_extra {
        let exp_gauge = exp_gauge_reduce(&u, &udag, gauge.order())?;
        derived["exp_gauge"] = Value::Array(
            exp_gauge
                .series()
                .coeffs()
                .iter()
                .map(exact_matrix_json)
                .collect(),
        );
        diagnostics["exp_gauge_spot_defect"] = json!(exp_gauge_spot_defect(&u, &udag, 0.5));
    }
    Ok(Sections {
        input: echo,
        derived,
        verdicts: json!({
            "residues_all_zero": nf.residues.iter().all(|r| {
                use num_traits::Zero;
                r.is_zero()
            }),
        }),
        diagnostics,
    })
}

/// Float defect of the analytic exponential gauge at one sample point:
/// `g^{-1} A g - z^2 g^{-1} g' - U` with `g = diag(exp(-z conj(u)))`.
fn exp_gauge_spot_defect(u: &Matrix<Exact>, udag: &Matrix<Exact>, z: f64) -> f64 {
    let z = C64::new(z, 0.0);
    let uf = u.to_c64();
    let udagf = udag.to_c64();
    let g_entries: Vec<C64> = udag
        .diag()
        .iter()
        .map(|d| (-z * exact_to_c64(d)).exp())
        .collect();
    let g = Matrix::from_diag(&g_entries);
    let g_inv = g.inverse().expect("diagonal exponential is invertible");
    // A(z) = U - z^2 Udag; g' = -Udag g, so z^2 g^{-1} g' = -z^2 Udag
    let a = &uf - &udagf.scale(&(z * z));
    let transformed = &(&(&g_inv * &a) * &g) + &udagf.scale(&(z * z));
    frobenius_distance(&transformed, &uf)
}

fn cmd_monodromy(doc: &InputDocument, flags: &Flags) -> Result<Sections, RunError> {
    match doc.mode {
        Mode::Exact => {
            let (input, echo) = resolve_system(doc)?;
            let SystemInput::Uv(u, v) = input else {
                return Err(RunError::Malformed(
                    "monodromy applies to {U, V} systems".into(),
                ));
            };
            let report = equivalence_verdict(&u, &v)?;
            let identity: Matrix<C64> = Matrix::identity(u.dim()).to_c64();
            let distance = frobenius_distance(&report.monodromy_numeric, &identity);
            let mut diagnostics = json!({
                "numeric_defect": report.numeric_defect,
                "numeric_distance_to_identity": distance,
                "tolerance": cdv_core::monodromy::VERDICT_NUMERIC_TOL,
                "radius": 1.0,
            });
            if flags.radius != 1.0 || flags.tolerance != 1e-10 {
                let extra =
                    monodromy_numeric(&u.to_c64(), &v.to_c64(), flags.radius, flags.tolerance)?;
                diagnostics["numeric_at_flags"] = json!({
                    "radius": flags.radius,
                    "tolerance": flags.tolerance,
                    "monodromy": c64_matrix_json(&extra.matrix),
                    "distance_to_identity": frobenius_distance(&extra.matrix, &identity),
                });
            }
            Ok(Sections {
                input: echo,
                derived: json!({
                    "levelt_residue": exact_matrix_json(&report.levelt_residue),
                    "monodromy_exact": c64_matrix_json(&report.monodromy_exact),
                    "monodromy_numeric": c64_matrix_json(&report.monodromy_numeric),
                }),
                verdicts: json!({
                    "necessary_integrality": report.verdicts.necessary_integrality,
                    "diag_zero": report.verdicts.diag_zero,
                    "monodromy_identity": report.verdicts.monodromy_identity,
                    "holomorphic_equivalent": report.verdicts.holomorphic_equivalent,
                    "meromorphic_equivalent": report.verdicts.meromorphic_equivalent,
                }),
                diagnostics,
            })
        }
        Mode::Float => {
            let raw = doc
                .raw_system
                .as_ref()
                .ok_or_else(|| RunError::Malformed("float mode needs a raw_system".into()))?;
            let u = parse_c64_matrix(&raw.u)?;
            let v = raw
                .v
                .as_ref()
                .ok_or_else(|| RunError::Malformed("float monodromy needs U and V".into()))?;
            let v = parse_c64_matrix(v)?;
            if v.dim() != u.dim() {
                return Err(RunError::Malformed("U and V dimensions differ".into()));
            }
            let out = monodromy_numeric(&u, &v, flags.radius, flags.tolerance)?;
            let identity: Matrix<C64> = Matrix::identity(u.dim()).to_c64();
            let distance = frobenius_distance(&out.matrix, &identity);
            Ok(Sections {
                input: json!({ "U": c64_matrix_json(&u), "V": c64_matrix_json(&v) }),
                derived: json!({ "monodromy_numeric": c64_matrix_json(&out.matrix) }),
                verdicts: json!({
                    // numeric-only flag; the exact Levelt route needs exact input
                    "numeric_identity_at_1e-6": distance < 1e-6,
                }),
                diagnostics: json!({
                    "numeric_defect": out.defect,
                    "numeric_distance_to_identity": distance,
                    "steps": out.steps,
                    "tolerance": flags.tolerance,
                    "radius": flags.radius,
                }),
            })
        }
    }
}

fn cmd_potential(doc: &InputDocument, flags: &Flags) -> Result<Sections, RunError> {
    require_exact(doc, "potential")?;
    let (input, echo) = resolve_system(doc)?;
    let SystemInput::Uv(u, v) = input else {
        return Err(RunError::Malformed(
            "potential applies to {U, V} systems".into(),
        ));
    };
    match solve_potentiality(&u, &v, flags.max_degree)? {
        SolveOutcome::Solution(sol) => {
            let residual = verify_cgf(&sol.psi, &u, &v);
            Ok(Sections {
                input: echo,
                derived: json!({
                    "psi": poly_matrix_json(&sol.psi),
                    "degree": sol.degree,
                    "ubar": exact_vec_json(&sol.ubar),
                }),
                verdicts: json!({ "strongly_potential": true }),
                diagnostics: json!({
                    "residual_is_zero": residual.is_zero(),
                    "max_degree": flags.max_degree,
                }),
            })
        }
        SolveOutcome::NoSolution(ns) => {
            let reason = match ns.reason {
                NoSolutionReason::DegreeExceeded { k_max } => {
                    format!("recursion did not terminate within degree {k_max}")
                }
                NoSolutionReason::NonzeroDiagonalV => {
                    "diagonal solvability fails at step 0: diag(V) != 0".into()
                }
            };
            Ok(Sections {
                input: echo,
                derived: json!({}),
                verdicts: json!({ "strongly_potential": false }),
                diagnostics: json!({
                    "no_solution_reason": reason,
                    "failed_at_step": ns.step,
                    "max_degree": flags.max_degree,
                }),
            })
        }
    }
}
