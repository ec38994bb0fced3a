use super::ConfigError;
use crate::quantum::PauliParams;

/// Lattice points of the Pauli simplex at fixed total error `total`.
///
/// Returns `(px, py, pz) = (a, b, c) * total / resolution` for all
/// non-negative integers with `a + b + c = resolution`, ordered by `a`
/// then `b`. There are `(resolution + 1)(resolution + 2) / 2` points.
pub fn ternary_grid(total: f64, resolution: usize) -> Result<Vec<PauliParams>, ConfigError> {
    if !(total > 0.0 && total < 1.0) {
        return Err(ConfigError::new("ternary_total", format!("{total} outside (0, 1)")));
    }
    if resolution == 0 {
        return Err(ConfigError::new("ternary_resolution", "must be at least 1"));
    }
    let step = total / resolution as f64;
    let mut out = Vec::with_capacity((resolution + 1) * (resolution + 2) / 2);
    for a in 0..=resolution {
        for b in 0..=resolution - a {
            let c = resolution - a - b;
            let params = PauliParams::new(
                1.0 - total,
                a as f64 * step,
                b as f64 * step,
                c as f64 * step,
            )
            .map_err(|e| ConfigError::new("ternary_total", e.to_string()))?;
            out.push(params);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(ternary_grid(0.025, 13).unwrap().len(), 105);
        for r in 1..20 {
            assert_eq!(ternary_grid(0.1, r).unwrap().len(), (r + 1) * (r + 2) / 2);
        }
    }

    #[test]
    fn resolution_one_is_the_vertices() {
        let g = ternary_grid(0.3, 1).unwrap();
        let v: Vec<_> = g.iter().map(|p| (p.px, p.py, p.pz)).collect();
        assert_eq!(v, vec![(0.0, 0.0, 0.3), (0.0, 0.3, 0.0), (0.3, 0.0, 0.0)]);
    }

    #[test]
    fn points_on_simplex() {
        for p in ternary_grid(0.025, 13).unwrap() {
            assert!((p.p0 + p.px + p.py + p.pz - 1.0).abs() < 1e-12);
            assert!((p.p0 - 0.975).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ternary_grid(0.0, 3).is_err());
        assert!(ternary_grid(1.0, 3).is_err());
        assert!(ternary_grid(0.1, 0).is_err());
    }
}
