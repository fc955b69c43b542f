use crate::error::{Result, TorusError};

/// Root of `f` on `[a, b]` by bisection; `f(a)` and `f(b)` must differ in
/// sign (or one of them vanish).
///
/// Stops once `|f(x)| ≤ f_tol` or the bracket is narrower than `x_tol`.
pub fn bisect<F>(mut f: F, mut a: f64, mut b: f64, x_tol: f64, f_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut fa = f(a)?;
    if fa.abs() <= f_tol {
        return Ok(a);
    }
    let fb = f(b)?;
    if fb.abs() <= f_tol {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(TorusError::NoSolution(format!(
            "no sign change on [{a}, {b}]: f = {fa:.3e}, {fb:.3e}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = f(mid)?;
        if fm.abs() <= f_tol || (b - a).abs() <= x_tol || mid == a || mid == b {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Err(TorusError::Tolerance("bisection did not converge".into()))
}
