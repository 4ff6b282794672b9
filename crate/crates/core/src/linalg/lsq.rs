use crate::error::{invalid, Result};

/// Ordinary least-squares line `y = slope * t + intercept`.
pub fn fit_line(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return invalid(format!(
            "line fit needs at least 2 points, got {}",
            points.len()
        ));
    }
    let n = points.len() as f64;
    let t_mean = points.iter().map(|p| p.0).sum::<f64>() / n;
    let y_mean = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (sxx, sxy) = points.iter().fold((0.0, 0.0), |(sxx, sxy), &(t, y)| {
        let dt = t - t_mean;
        (sxx + dt * dt, sxy + dt * (y - y_mean))
    });
    if sxx == 0.0 {
        return invalid("line fit needs at least two distinct abscissae");
    }
    let slope = sxy / sxx;
    Ok((slope, y_mean - slope * t_mean))
}
