//! Simultaneous polynomial root finding (Aberth–Ehrlich) with Newton
//! polishing and clustering of multiple roots.

use std::f64::consts::PI;

use super::poly::Polynomial;
use crate::error::{Error, Result};
use crate::signal::ComplexValue;

/// Roots closer than this are always reported as one root.
pub const CLUSTER_DISTANCE: f64 = 1e-8;

/// Residual bound `|p(r)| <= RESIDUAL_BOUND * Σ|c_k||r|^k` every reported root meets.
pub const RESIDUAL_BOUND: f64 = 1e-10;

/// Candidate radius (relative) inside which perturbed copies of a multiple
/// root are looked for; merges are only accepted after a derivative test.
const MERGE_RADIUS: f64 = 1e-2;

/// Acceptance level for the derivative test of a merged cluster.
const MERGE_TEST: f64 = 1e-9;

const MAX_ITERATIONS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: ComplexValue,
    pub multiplicity: usize,
}

/// All complex roots of `p` with multiplicities summing to its degree,
/// sorted by real then imaginary part.
pub fn polynomial_roots(p: &Polynomial) -> Result<Vec<Root>> {
    let degree = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Domain("root finding needs a polynomial of degree >= 1".into())),
    };
    let mut roots = Vec::new();
    let zeros = p.zero_root_multiplicity();
    if zeros > 0 {
        roots.push(Root {
            value: ComplexValue::default(),
            multiplicity: zeros,
        });
    }
    let q = p.shift_down(zeros);
    let approx = match q.degree().unwrap_or(0) {
        0 => Vec::new(),
        1 => vec![-q.coeffs()[0] / q.coeffs()[1]],
        _ => aberth(&q),
    };
    let mut clustered = cluster(&q, approx);
    for r in &mut clustered {
        r.value = polish(&q, r.value, r.multiplicity);
    }
    roots.extend(clustered);

    for r in &roots {
        let residual = p.eval(r.value).norm();
        let scale = p.eval_abs(r.value);
        if !(residual <= RESIDUAL_BOUND * scale) || !r.value.re.is_finite() || !r.value.im.is_finite() {
            return Err(Error::Numeric(format!(
                "root finder did not converge: |p({})| = {residual:e}",
                r.value
            )));
        }
    }
    debug_assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<usize>(), degree);
    roots.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
    Ok(roots)
}

fn aberth(p: &Polynomial) -> Vec<ComplexValue> {
    let n = p.degree().expect("nonzero polynomial");
    let monic = p.scaled(p.leading().inv());
    let dp = monic.derivative();
    let c0 = monic.coeffs()[0].norm();
    // geometric-mean radius; nonzero since zero roots were removed
    let radius = c0.powf(1.0 / n as f64).max(f64::MIN_POSITIVE);
    let mut z: Vec<ComplexValue> = (0..n)
        .map(|k| ComplexValue::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();

    for _ in 0..MAX_ITERATIONS {
        let mut largest_step: f64 = 0.0;
        for i in 0..n {
            let zi = z[i];
            let pv = monic.eval(zi);
            if pv.norm() == 0.0 {
                continue;
            }
            let dv = dp.eval(zi);
            let ratio = if dv.norm() == 0.0 {
                // stationary point: nudge off it
                ComplexValue::new(1e-3 * (1.0 + zi.norm()), 0.0)
            } else {
                pv / dv
            };
            let repulsion: ComplexValue = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = zi - z[j];
                    if d.norm() == 0.0 {
                        ComplexValue::default()
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = ComplexValue::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            z[i] = zi - step;
            largest_step = largest_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if largest_step <= 4.0 * f64::EPSILON {
            break;
        }
    }
    z
}

/// Coefficient-size estimate for `p^{(j)}(z) / j!`.
fn derivative_scale(p: &Polynomial, z: ComplexValue, j: usize) -> f64 {
    let r = z.norm();
    p.coeffs()
        .iter()
        .enumerate()
        .skip(j)
        .map(|(k, c)| c.norm() * binomial(k, j) * r.powi((k - j) as i32))
        .sum()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// True when the polished `center` behaves like a root of multiplicity `m`:
/// the Taylor coefficients of order `< m` all vanish to working accuracy.
fn is_multiple_root(p: &Polynomial, center: ComplexValue, m: usize) -> bool {
    let center = polish(p, center, m);
    let taylor = p.taylor_at(center);
    (0..m).all(|j| taylor.get(j).is_none_or(|c| c.norm() <= MERGE_TEST * derivative_scale(p, center, j)))
}

struct Cluster {
    sum: ComplexValue,
    count: usize,
}

impl Cluster {
    fn center(&self) -> ComplexValue {
        self.sum / self.count as f64
    }
}

fn cluster(p: &Polynomial, approx: Vec<ComplexValue>) -> Vec<Root> {
    let mut clusters: Vec<Cluster> = approx.into_iter().map(|z| Cluster { sum: z, count: 1 }).collect();

    // unconditional merge of near-coincident roots
    loop {
        let pair = closest_pair(&clusters, |a, b, d| d < CLUSTER_DISTANCE * (1.0 + a.center().norm().max(b.center().norm())));
        let Some((i, j)) = pair else { break };
        merge(&mut clusters, i, j);
    }

    // candidate merges, accepted only when the derivative test passes
    let mut rejected: Vec<(ComplexValue, ComplexValue)> = Vec::new();
    loop {
        let pair = closest_pair(&clusters, |a, b, d| {
            d < MERGE_RADIUS * (1.0 + a.center().norm().max(b.center().norm()))
                && !rejected.contains(&(a.center(), b.center()))
        });
        let Some((i, j)) = pair else { break };
        let (a, b) = (&clusters[i], &clusters[j]);
        let merged = Cluster {
            sum: a.sum + b.sum,
            count: a.count + b.count,
        };
        if is_multiple_root(p, merged.center(), merged.count) {
            merge(&mut clusters, i, j);
        } else {
            rejected.push((a.center(), b.center()));
        }
    }

    clusters
        .into_iter()
        .map(|c| Root {
            value: c.center(),
            multiplicity: c.count,
        })
        .collect()
}

fn closest_pair<F>(clusters: &[Cluster], admissible: F) -> Option<(usize, usize)>
where
    F: Fn(&Cluster, &Cluster, f64) -> bool,
{
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            let d = (clusters[i].center() - clusters[j].center()).norm();
            if admissible(&clusters[i], &clusters[j], d) && best.is_none_or(|(_, _, bd)| d < bd) {
                best = Some((i, j, d));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn merge(clusters: &mut Vec<Cluster>, i: usize, j: usize) {
    let b = clusters.remove(j);
    clusters[i].sum += b.sum;
    clusters[i].count += b.count;
}

/// Newton on `p^{(m-1)}`, for which a root of multiplicity `m` is simple.
/// Steps are kept only while they reduce the residual.
fn polish(p: &Polynomial, start: ComplexValue, m: usize) -> ComplexValue {
    let mut g = p.clone();
    for _ in 1..m {
        g = g.derivative();
    }
    let dg = g.derivative();
    let mut z = start;
    let mut residual = g.eval(z).norm();
    for _ in 0..8 {
        let d = dg.eval(z);
        if residual == 0.0 || d.norm() == 0.0 {
            break;
        }
        let next = z - g.eval(z) / d;
        let r = g.eval(next).norm();
        if !(r < residual) {
            break;
        }
        z = next;
        residual = r;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn sorted(p: &Polynomial) -> Vec<(ComplexValue, usize)> {
        polynomial_roots(p)
            .unwrap()
            .into_iter()
            .map(|r| (r.value, r.multiplicity))
            .collect()
    }

    #[test]
    fn unit_circle_pair() {
        let r = sorted(&Polynomial::from_real(&[1.0, 0.0, 1.0]));
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - c(0.0, -1.0)).norm() < 1e-14 && r[0].1 == 1);
        assert!((r[1].0 - c(0.0, 1.0)).norm() < 1e-14 && r[1].1 == 1);
    }

    #[test]
    fn double_root_at_zero() {
        assert_eq!(sorted(&Polynomial::from_real(&[0.0, 0.0, 1.0])), vec![(c(0.0, 0.0), 2)]);
    }

    #[test]
    fn quadratic_formula_oracle() {
        // s^2 + 3s + 2: (-3 ± sqrt(9 - 8)) / 2
        let disc: f64 = (9.0f64 - 8.0).sqrt();
        let expected = [(-3.0 - disc) / 2.0, (-3.0 + disc) / 2.0];
        let r = sorted(&Polynomial::from_real(&[2.0, 3.0, 1.0]));
        for ((z, m), e) in r.iter().zip(expected) {
            assert!((z - c(e, 0.0)).norm() < 1e-14);
            assert_eq!(*m, 1);
        }
    }

    #[test]
    fn repeated_nonzero_roots_are_clustered() {
        for (root, m) in [(c(-1.0, 0.0), 2), (c(0.0, 1.0), 3), (c(2.0, -1.0), 4)] {
            let p = Polynomial::from_roots(&vec![root; m]) * Polynomial::from_real(&[5.0, 1.0]);
            let r = sorted(&p);
            assert_eq!(r.len(), 2, "{r:?}");
            let (z, mm) = r.iter().find(|(_, mm)| *mm == m).copied().expect("clustered root");
            assert!((z - root).norm() < 1e-9, "{z} vs {root}");
            assert_eq!(mm, m);
        }
    }

    #[test]
    fn close_but_distinct_roots_stay_separate() {
        let p = Polynomial::from_roots(&[c(1.0, 0.0), c(1.001, 0.0), c(-2.0, 0.5)]);
        let r = sorted(&p);
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn reconstruction_on_random_polynomials() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for trial in 0..50 {
            let degree = rng.gen_range(1..=8);
            let coeffs: Vec<ComplexValue> = (0..=degree)
                .map(|_| c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
                .collect();
            let p = Polynomial::new(coeffs);
            let roots = polynomial_roots(&p).unwrap();
            assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<usize>(), p.degree().unwrap());
            let lead = p.leading();
            for _ in 0..20 {
                let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let rebuilt: ComplexValue = roots
                    .iter()
                    .map(|r| (z - r.value).powu(r.multiplicity as u32))
                    .product::<ComplexValue>()
                    * lead;
                let direct = p.eval(z);
                assert!(
                    (rebuilt - direct).norm() <= 1e-9 * direct.norm().max(p.eval_abs(z) * 1e-3),
                    "trial {trial}: {rebuilt} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn constant_is_rejected() {
        assert!(polynomial_roots(&Polynomial::from_real(&[3.0])).is_err());
        assert!(polynomial_roots(&Polynomial::zero()).is_err());
    }
}
