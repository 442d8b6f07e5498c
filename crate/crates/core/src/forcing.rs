//! Right-hand sides `f : J -> E0` in closed form or as samples.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, TimeGrid};
use crate::scalar::{axpy, C64, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub enum Forcing {
    Zero,
    /// `f(t) = e^{-rate t} direction`
    Exp { rate: C64, direction: Vec<C64> },
    /// `f(t) = (sum_k coeffs[k] t^k) direction`
    Poly { coeffs: Vec<C64>, direction: Vec<C64> },
    /// Samples on the nodes of a grid; usable only on that grid.
    Samples(GridFunction),
    Sum(Vec<Forcing>),
}

impl Forcing {
    pub fn exp(rate: C64, direction: Vec<C64>) -> Self {
        Forcing::Exp { rate, direction }
    }

    pub fn poly(coeffs: Vec<C64>, direction: Vec<C64>) -> Self {
        Forcing::Poly { coeffs, direction }
    }

    pub fn constant(direction: Vec<C64>) -> Self {
        Forcing::Poly { coeffs: alloc::vec![C64::new(1.0, 0.0)], direction }
    }

    /// `None` for [`Forcing::Zero`] (and sums of zeros).
    pub fn dim(&self) -> Option<usize> {
        match self {
            Forcing::Zero => None,
            Forcing::Exp { direction, .. } | Forcing::Poly { direction, .. } => Some(direction.len()),
            Forcing::Samples(g) => Some(g.dim()),
            Forcing::Sum(parts) => parts.iter().find_map(Forcing::dim),
        }
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        let bad = match self {
            Forcing::Zero => None,
            Forcing::Exp { direction, .. } | Forcing::Poly { direction, .. } => Some(direction.len()),
            Forcing::Samples(g) => Some(g.dim()),
            Forcing::Sum(parts) => {
                for p in parts {
                    p.check_dim(n)?;
                }
                None
            }
        };
        match bad {
            Some(d) if d != n => Err(Error::DimensionMismatch { expected: n, actual: d }),
            _ => Ok(()),
        }
    }

    /// Scalar profile times direction; `Samples` only resolve on their own
    /// nodes.
    pub fn eval(&self, t: f64, n: usize) -> Option<Vec<C64>> {
        match self {
            Forcing::Zero => Some(alloc::vec![ZERO; n]),
            Forcing::Exp { rate, direction } => {
                let c = (-rate * t).exp();
                Some(direction.iter().map(|v| c * v).collect())
            }
            Forcing::Poly { coeffs, direction } => {
                let c = horner(coeffs, C64::new(t, 0.0));
                Some(direction.iter().map(|v| c * v).collect())
            }
            Forcing::Samples(g) => g.at(t).map(<[C64]>::to_vec),
            Forcing::Sum(parts) => {
                let mut acc = alloc::vec![ZERO; n];
                for p in parts {
                    axpy(&mut acc, C64::new(1.0, 0.0), &p.eval(t, n)?);
                }
                Some(acc)
            }
        }
    }

    /// Values on every node of `grid`.
    pub fn sample(&self, grid: &TimeGrid, n: usize) -> Result<Vec<Vec<C64>>> {
        if let Forcing::Samples(g) = self {
            if &g.grid != grid {
                return Err(Error::GridMismatch);
            }
            return Ok(g.values.clone());
        }
        grid.nodes()
            .iter()
            .enumerate()
            .map(|(i, t)| match self {
                Forcing::Sum(parts) => {
                    let mut acc = alloc::vec![ZERO; n];
                    for p in parts {
                        let v = match p {
                            Forcing::Samples(g) if &g.grid == grid => g.values[i].clone(),
                            Forcing::Samples(_) => return Err(Error::GridMismatch),
                            other => other.sample_at(*t, n)?,
                        };
                        axpy(&mut acc, C64::new(1.0, 0.0), &v);
                    }
                    Ok(acc)
                }
                _ => self.sample_at(*t, n),
            })
            .collect()
    }

    fn sample_at(&self, t: f64, n: usize) -> Result<Vec<C64>> {
        self.eval(t, n).ok_or(Error::GridMismatch)
    }

    pub fn scaled(&self, c: C64) -> Self {
        match self {
            Forcing::Zero => Forcing::Zero,
            Forcing::Exp { rate, direction } => Forcing::Exp {
                rate: *rate,
                direction: direction.iter().map(|v| c * v).collect(),
            },
            Forcing::Poly { coeffs, direction } => Forcing::Poly {
                coeffs: coeffs.clone(),
                direction: direction.iter().map(|v| c * v).collect(),
            },
            Forcing::Samples(g) => Forcing::Samples(GridFunction {
                grid: g.grid.clone(),
                values: g.values.iter().map(|v| v.iter().map(|x| c * x).collect()).collect(),
                derivatives: g
                    .derivatives
                    .as_ref()
                    .map(|d| d.iter().map(|v| v.iter().map(|x| c * x).collect()).collect()),
            }),
            Forcing::Sum(parts) => Forcing::Sum(parts.iter().map(|p| p.scaled(c)).collect()),
        }
    }

    /// Flattens nested sums into a list of non-sum, non-zero terms.
    pub(crate) fn terms(&self) -> Vec<&Forcing> {
        let mut out = Vec::new();
        self.collect_terms(&mut out);
        out
    }

    fn collect_terms<'a>(&'a self, out: &mut Vec<&'a Forcing>) {
        match self {
            Forcing::Zero => {}
            Forcing::Sum(parts) => parts.iter().for_each(|p| p.collect_terms(out)),
            other => out.push(other),
        }
    }
}

pub(crate) fn horner(coeffs: &[C64], t: C64) -> C64 {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * t + c)
}

/// Coefficients of `p(a + s)` in powers of `s`.
pub(crate) fn taylor_shift(coeffs: &[C64], a: f64) -> Vec<C64> {
    let mut d = coeffs.to_vec();
    let n = d.len();
    // repeated synthetic division by (s + a)
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let next = d[j + 1];
            d[j] += next * a;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::re;

    #[test]
    fn taylor_shift_matches_direct_expansion() {
        // p(t) = 1 + 2t + 3t^2, p(2 + s) = 17 + 14 s + 3 s^2
        let d = taylor_shift(&[re(1.0), re(2.0), re(3.0)], 2.0);
        assert_eq!(d, alloc::vec![re(17.0), re(14.0), re(3.0)]);
    }

    #[test]
    fn eval_and_sample() {
        let f = Forcing::Sum(alloc::vec![
            Forcing::exp(re(1.0), alloc::vec![re(1.0)]),
            Forcing::poly(alloc::vec![re(0.0), re(1.0)], alloc::vec![re(2.0)]),
            Forcing::Zero,
        ]);
        let v = f.eval(0.5, 1).unwrap();
        assert!((v[0] - re((-0.5f64).exp() + 1.0)).norm() < 1e-15);
        let g = TimeGrid::uniform(1.0, 2, 4).unwrap();
        let s = f.sample(&g, 1).unwrap();
        assert_eq!(s.len(), g.len());
        assert_eq!(f.terms().len(), 2);
        assert!(f.check_dim(2).is_err());
    }

    #[test]
    fn samples_only_live_on_their_grid() {
        let g = TimeGrid::uniform(1.0, 2, 4).unwrap();
        let other = TimeGrid::uniform(1.0, 3, 4).unwrap();
        let f = Forcing::Samples(GridFunction::from_fn(g.clone(), |t| alloc::vec![re(t)]).unwrap());
        assert!(f.sample(&g, 1).is_ok());
        assert!(matches!(f.sample(&other, 1), Err(Error::GridMismatch)));
    }
}
