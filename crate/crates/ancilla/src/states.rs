use std::fmt;
use std::str::FromStr;

use ancilla_core::DensityMatrix;

use crate::Error;

/// Initial single-qubit state selector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateSpec {
    Ground,
    Excited,
    Plus,
    Minus,
    Mixed,
    /// Bloch vector, `z = +1` excited.
    Bloch([f64; 3]),
}

impl StateSpec {
    pub fn density_matrix(&self) -> crate::Result<DensityMatrix> {
        Ok(match *self {
            StateSpec::Ground => DensityMatrix::ground(),
            StateSpec::Excited => DensityMatrix::excited(),
            StateSpec::Plus => DensityMatrix::plus(),
            StateSpec::Minus => DensityMatrix::minus(),
            StateSpec::Mixed => DensityMatrix::maximally_mixed(2),
            StateSpec::Bloch([x, y, z]) => DensityMatrix::from_bloch(x, y, z)?,
        })
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    /// `g`, `e`, `plus`, `minus`, `mixed` or `bloch:x:y:z`.
    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim() {
            "g" => Ok(StateSpec::Ground),
            "e" => Ok(StateSpec::Excited),
            "plus" | "+" => Ok(StateSpec::Plus),
            "minus" | "-" => Ok(StateSpec::Minus),
            "mixed" => Ok(StateSpec::Mixed),
            other => {
                let body = other
                    .strip_prefix("bloch:")
                    .ok_or_else(|| Error::config(format!("unknown state '{other}'")))?;
                let v: Vec<f64> = body
                    .split(':')
                    .map(|x| x.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| Error::config(format!("bad Bloch vector '{body}': {e}")))?;
                let [x, y, z] = v[..] else {
                    return Err(Error::config(format!("Bloch vector needs 3 components, got '{body}'")));
                };
                if x * x + y * y + z * z > 1.0 + 1e-12 {
                    return Err(Error::config(format!("Bloch vector '{body}' lies outside the ball")));
                }
                Ok(StateSpec::Bloch([x, y, z]))
            }
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Ground => f.write_str("g"),
            StateSpec::Excited => f.write_str("e"),
            StateSpec::Plus => f.write_str("plus"),
            StateSpec::Minus => f.write_str("minus"),
            StateSpec::Mixed => f.write_str("mixed"),
            StateSpec::Bloch([x, y, z]) => write!(f, "bloch:{x}:{y}:{z}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_states() {
        let e: StateSpec = "e".parse().unwrap();
        assert_eq!(e.density_matrix().unwrap().get(1, 1).re, 1.0);
        let m: StateSpec = "mixed".parse().unwrap();
        assert_eq!(m.density_matrix().unwrap().get(0, 0).re, 0.5);
        let p: StateSpec = "plus".parse().unwrap();
        assert!((p.density_matrix().unwrap().get(0, 1).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bloch_parsing() {
        let b: StateSpec = "bloch:0.1:0:-0.5".parse().unwrap();
        assert_eq!(b, StateSpec::Bloch([0.1, 0.0, -0.5]));
        assert_eq!(b.to_string().parse::<StateSpec>().unwrap(), b);
        assert!("bloch:1:1:0".parse::<StateSpec>().is_err());
        assert!("bloch:1:0".parse::<StateSpec>().is_err());
        assert!("up".parse::<StateSpec>().is_err());
    }
}
