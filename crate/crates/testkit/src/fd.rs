//! Central finite differences of a black-box function.

/// `(f(x + h e_i) − f(x − h e_i)) / 2h`, with `i` 0-based.
pub fn central_first(
    f: &impl Fn(&[f64]) -> Option<f64>,
    pt: &[f64],
    i: usize,
    h: f64,
) -> Option<f64> {
    let mut plus = pt.to_vec();
    let mut minus = pt.to_vec();
    plus[i] += h;
    minus[i] -= h;
    Some((f(&plus)? - f(&minus)?) / (2.0 * h))
}

/// Second partial `∂_i ∂_j f` by the standard central stencils.
pub fn central_second(
    f: &impl Fn(&[f64]) -> Option<f64>,
    pt: &[f64],
    i: usize,
    j: usize,
    h: f64,
) -> Option<f64> {
    let at = |di: f64, dj: f64| {
        let mut q = pt.to_vec();
        q[i] += di;
        q[j] += dj;
        f(&q)
    };
    if i == j {
        let mut plus = pt.to_vec();
        let mut minus = pt.to_vec();
        plus[i] += h;
        minus[i] -= h;
        Some((f(&plus)? - 2.0 * f(pt)? + f(&minus)?) / (h * h))
    } else {
        Some((at(h, h)? - at(h, -h)? - at(-h, h)? + at(-h, -h)?) / (4.0 * h * h))
    }
}

/// Richardson-extrapolated first partial: `(4 D(h/2) − D(h)) / 3`.
pub fn richardson_first(
    f: &impl Fn(&[f64]) -> Option<f64>,
    pt: &[f64],
    i: usize,
    h: f64,
) -> Option<f64> {
    let coarse = central_first(f, pt, i, h)?;
    let fine = central_first(f, pt, i, h / 2.0)?;
    Some((4.0 * fine - coarse) / 3.0)
}

/// Richardson-extrapolated second partial.
pub fn richardson_second(
    f: &impl Fn(&[f64]) -> Option<f64>,
    pt: &[f64],
    i: usize,
    j: usize,
    h: f64,
) -> Option<f64> {
    let coarse = central_second(f, pt, i, j, h)?;
    let fine = central_second(f, pt, i, j, h / 2.0)?;
    Some((4.0 * fine - coarse) / 3.0)
}
