use std::f64::consts::PI;

use serde_json::json;

use super::RatioReport;
use crate::algebra::GroupAlgebraElement;
use crate::cocycle::LengthCocycle;
use crate::error::{Error, Result};
use crate::norms::{lp_norm, square_function_norm, SquareFunctionOperand};
use crate::operators::riesz_transform;

/// `||f||_p` against `||(sum_u |R_u f|^2)^{1/2}||_p / 2 pi`, both ways. On
/// abelian groups the column and row square functions coincide. Equal to 1
/// at `p = 2`.
pub fn riesz_equivalence_ratio(f: &GroupAlgebraElement, p: f64, c: &LengthCocycle) -> Result<RatioReport> {
    c.check_group(f.group())?;
    f.require_mean_zero()?;
    if f.is_zero() {
        return Err(Error::Precondition("Riesz ratio of the zero element".into()));
    }
    let components: Vec<GroupAlgebraElement> = c
        .basis_for_support(f.support())?
        .iter()
        .map(|u| riesz_transform(f, u, c))
        .filter(|r| !r.as_ref().is_ok_and(|r| r.is_zero()))
        .collect::<Result<_>>()?;
    let square = square_function_norm(&SquareFunctionOperand::abelian(components)?, p)?;
    let lhs = lp_norm(f, p)?;
    let rhs = square / (2.0 * PI);
    let params = json!({"n": f.group().rank(), "p": p, "family": c.family()});
    let mut report = RatioReport::single("riesz", params, lhs, rhs, json!({"input": f}))?.two_sided();
    report.details = json!({"square_function": square});
    Ok(report)
}
