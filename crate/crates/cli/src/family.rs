//! Inline channel specs such as `depolarizing:n=3,q=0.2`.
//!
//! | spec | channel |
//! |---|---|
//! | `identity:n=N` | ρ ↦ ρ |
//! | `dephasing:n=N` | complete dephasing, K_j = \|j⟩⟨j\| |
//! | `depolarizing:n=N,q=Q` | ρ ↦ qρ + (1 − q)I/n |
//! | `bitflip` | U = exp(−i(π/2)σ_X) |
//! | `phase:theta=T` | U = diag(1, e^{−iT}) |
//! | `random:n=N,d=D,seed=S` | Haar-isometry random channel |
//! | `random-unitary:n=N,seed=S` | Haar-random unitary channel |

use std::collections::BTreeMap;

use tecost_core::matcore::matrix::pauli;
use tecost_core::matcore::random::random_unitary;
use tecost_core::{Complex64, ComplexMatrix, KrausChannel};

use crate::error::{CliError, CliResult};

struct Params<'a> {
    family: &'a str,
    values: BTreeMap<&'a str, &'a str>,
}

impl<'a> Params<'a> {
    fn parse(spec: &'a str) -> CliResult<Self> {
        let (family, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut values = BTreeMap::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("family parameter `{item}` is not key=value")))?;
            if values.insert(k.trim(), v.trim()).is_some() {
                return Err(CliError::Usage(format!("family parameter `{}` given twice", k.trim())));
            }
        }
        Ok(Self {
            family: family.trim(),
            values,
        })
    }

    fn get<T: std::str::FromStr>(&mut self, key: &str) -> CliResult<T> {
        let raw = self
            .values
            .remove(key)
            .ok_or_else(|| CliError::Usage(format!("family `{}` needs parameter `{key}`", self.family)))?;
        raw.parse()
            .map_err(|_| CliError::Usage(format!("family `{}`: cannot parse {key}=`{raw}`", self.family)))
    }

    fn get_or<T: std::str::FromStr>(&mut self, key: &str, default: T) -> CliResult<T> {
        if self.values.contains_key(key) {
            self.get(key)
        } else {
            Ok(default)
        }
    }

    fn finish(self) -> CliResult<()> {
        match self.values.keys().next() {
            Some(k) => Err(CliError::Usage(format!(
                "family `{}` has no parameter `{k}`",
                self.family
            ))),
            None => Ok(()),
        }
    }
}

/// Builds the channel named by `spec`.
pub fn build(spec: &str) -> CliResult<KrausChannel> {
    let mut p = Params::parse(spec)?;
    let channel = match p.family {
        "identity" => KrausChannel::identity(p.get("n")?)?,
        "dephasing" => KrausChannel::dephasing(p.get("n")?)?,
        "depolarizing" => {
            let n = p.get("n")?;
            KrausChannel::depolarizing(n, p.get("q")?)?
        }
        "bitflip" => KrausChannel::unitary(&pauli::x().scale(Complex64::new(0.0, -1.0)))?,
        "phase" => {
            let theta: f64 = p.get("theta")?;
            let one = Complex64::new(1.0, 0.0);
            KrausChannel::unitary(&ComplexMatrix::from_diag(&[one, Complex64::from_polar(1.0, -theta)]))?
        }
        "random" => {
            let (n, d) = (p.get("n")?, p.get("d")?);
            KrausChannel::random(n, d, p.get_or("seed", 0)?)?
        }
        "random-unitary" => {
            let n = p.get("n")?;
            KrausChannel::unitary(&random_unitary(n, p.get_or("seed", 0)?))?
        }
        other => return Err(CliError::Usage(format!("unknown channel family `{other}`"))),
    };
    p.finish()?;
    Ok(channel)
}
