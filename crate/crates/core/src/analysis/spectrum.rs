use crate::error::{invalid, Result};
use crate::hermite::{build_operators, FilterSpec, HermiteParams};
use crate::linalg::{eig_hessenberg, expm, EigenReport};

/// Eigenvalues of `A_m = -imkA + H`, or of `G_m = -imk(A + (mk)^-2 G) + H` when `with_g`.
pub fn eigen_report_filtered(
    params: &HermiteParams,
    filter: &FilterSpec,
    dt: f64,
    m: i32,
    with_g: bool,
) -> Result<EigenReport> {
    if with_g && m == 0 {
        return invalid("the G coupling needs m != 0");
    }
    let ops = build_operators(*params, *filter, dt)?;
    eig_hessenberg(&ops.mode_generator(m, with_g)?)
}

/// `||exp(t A_m)||_2` for each `t`.
pub fn propagator_norms(
    params: &HermiteParams,
    filter: &FilterSpec,
    dt: f64,
    m: i32,
    times: &[f64],
) -> Result<Vec<f64>> {
    let ops = build_operators(*params, *filter, dt)?;
    let gen = ops.mode_generator(m, false)?;
    times.iter().map(|&t| Ok(expm(&gen, t)?.norm2())).collect()
}
