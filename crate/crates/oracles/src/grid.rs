//! Dense grid evaluation of the sequential posterior of (ρ, φ).
//!
//! The joint law is stored as masses on a grid in standardized coordinates
//! z = (ρ − a)·√φ and u = ln φ, where `a` is the current centre. Each day:
//!
//! 1. precision shock: φ ← γ φ / δ with γ ~ Beta(δn/2, (1 − δ)n/2), holding the
//!    standardized state deviation (ρ − m)·√φ fixed;
//! 2. state innovation: z ← z + N(0, w*);
//! 3. Bayes update with the likelihood N(y; ρ, 1/φ);
//! 4. moments, then re-centring of z on the new posterior mean.
//!
//! Probability masses from the Gamma prior and Beta shock are spread over the
//! φ nodes with linear hat functions, which preserves E[φ] exactly.

use statrs::distribution::{Beta, ContinuousCDF, Gamma, Normal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMoments {
    /// E[ρ | D]
    pub m: f64,
    /// s · E[φ (ρ − m)²], the Student-t scale² of the conjugate posterior.
    pub c: f64,
    /// 1 / E[φ | D]
    pub s: f64,
    /// Discounted degrees of freedom used for the shock on this day.
    pub n: f64,
}

#[derive(Debug, Clone)]
pub struct DiscountGrid {
    pub delta: f64,
    pub w_star: f64,
    pub m0: f64,
    pub c0_star: f64,
    pub n0: f64,
    pub s0: f64,
    pub z_nodes: usize,
    pub z_half_width: f64,
    pub u_nodes: usize,
    pub u_min: f64,
    pub u_max: f64,
}

impl DiscountGrid {
    pub fn new(delta: f64, w_star: f64, m0: f64, c0_star: f64, n0: f64, s0: f64) -> Self {
        DiscountGrid {
            delta,
            w_star,
            m0,
            c0_star,
            n0,
            s0,
            z_nodes: 401,
            z_half_width: 9.0,
            u_nodes: 800,
            u_min: -14.0,
            u_max: 5.5,
        }
    }

    /// Posterior moments after each observation in `ys`.
    pub fn run(&self, ys: &[f64]) -> Vec<GridMoments> {
        let nz = self.z_nodes;
        let nu = self.u_nodes;
        let dz = 2.0 * self.z_half_width / (nz - 1) as f64;
        let du = (self.u_max - self.u_min) / (nu - 1) as f64;
        let z: Vec<f64> = (0..nz)
            .map(|i| -self.z_half_width + i as f64 * dz)
            .collect();
        let phi: Vec<f64> = (0..nu)
            .map(|j| (self.u_min + j as f64 * du).exp())
            .collect();
        let sqrt_phi: Vec<f64> = phi.iter().map(|p| p.sqrt()).collect();

        // mass[i * nu + j] at (z_i, φ_j)
        let z_prior = cell_masses_normal(&z, dz, self.c0_star.sqrt());
        let shape0 = self.n0 / 2.0;
        let rate0 = self.n0 * self.s0 / 2.0;
        let g0 = Gamma::new(shape0, rate0).unwrap();
        let g1 = Gamma::new(shape0 + 1.0, rate0).unwrap();
        let mean0 = shape0 / rate0;
        let phi_prior = hat_weights(&phi, |x| g0.cdf(x), |x| mean0 * g1.cdf(x));
        let mut mass = vec![0.0; nz * nu];
        for i in 0..nz {
            for j in 0..nu {
                mass[i * nu + j] = z_prior[i] * phi_prior[j];
            }
        }

        let innovation = gaussian_cell_kernel(dz, self.w_star.sqrt());
        let mut centre = self.m0;
        let mut n = self.n0;
        let mut out = Vec::with_capacity(ys.len());

        for &y in ys {
            mass = self.apply_shock(&mass, nz, nu, du, n);
            mass = convolve_z(&mass, nz, nu, &innovation);

            let offset = y - centre;
            for i in 0..nz {
                for j in 0..nu {
                    let r = sqrt_phi[j] * offset - z[i];
                    mass[i * nu + j] *= sqrt_phi[j] * (-0.5 * r * r).exp();
                }
            }
            let total: f64 = mass.iter().sum();
            mass.iter_mut().for_each(|v| *v /= total);
            n = self.delta * n + 1.0;

            let mut e_rho = 0.0;
            let mut e_phi = 0.0;
            for i in 0..nz {
                for j in 0..nu {
                    let w = mass[i * nu + j];
                    e_rho += w * z[i] / sqrt_phi[j];
                    e_phi += w * phi[j];
                }
            }
            let m = centre + e_rho;
            let shift = m - centre;
            let mut scale_free = 0.0;
            for i in 0..nz {
                for j in 0..nu {
                    let d = z[i] - shift * sqrt_phi[j];
                    scale_free += mass[i * nu + j] * d * d;
                }
            }
            let s = 1.0 / e_phi;
            out.push(GridMoments {
                m,
                c: s * scale_free,
                s,
                n,
            });

            mass = recentre(&mass, &z, dz, nu, &sqrt_phi, shift);
            centre = m;
        }
        out
    }

    fn apply_shock(&self, mass: &[f64], nz: usize, nu: usize, du: f64, n: f64) -> Vec<f64> {
        let a = self.delta * n / 2.0;
        let b = (1.0 - self.delta) * n / 2.0;
        let beta = Beta::new(a, b).unwrap();
        let beta_up = Beta::new(a + 1.0, b).unwrap();
        let mean = a / (a + b);
        // Nodes in γ = δ φ_new / φ_old for offsets d = j_new − j_old.
        let d_max = ((1.0 / self.delta).ln() / du).ceil() as i64 + 1;
        let d_min = -(nu as i64);
        let gammas: Vec<f64> = (d_min..=d_max)
            .map(|d| self.delta * (d as f64 * du).exp())
            .collect();
        let weights = hat_weights(
            &gammas,
            |x| beta.cdf(x.min(1.0)),
            |x| mean * beta_up.cdf(x.min(1.0)),
        );

        let mut out = vec![0.0; nz * nu];
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let d = d_min + k as i64;
            for j_old in 0..nu {
                let j_new = (j_old as i64 + d).clamp(0, nu as i64 - 1) as usize;
                for i in 0..nz {
                    out[i * nu + j_new] += w * mass[i * nu + j_old];
                }
            }
        }
        out
    }
}

/// Probability mass of each node under linear interpolation in x, given the
/// CDF and the partial first moment G(x) = ∫₀ˣ t dF(t). Mass outside the
/// node range goes to the end nodes.
fn hat_weights(
    nodes: &[f64],
    cdf: impl Fn(f64) -> f64,
    partial_mean: impl Fn(f64) -> f64,
) -> Vec<f64> {
    let k = nodes.len();
    let f: Vec<f64> = nodes.iter().map(|&x| cdf(x)).collect();
    let g: Vec<f64> = nodes.iter().map(|&x| partial_mean(x)).collect();
    let mut w = vec![0.0; k];
    w[0] += f[0];
    w[k - 1] += 1.0 - f[k - 1];
    for j in 0..k - 1 {
        let mass = f[j + 1] - f[j];
        let moment = g[j + 1] - g[j];
        let width = nodes[j + 1] - nodes[j];
        w[j] += (nodes[j + 1] * mass - moment) / width;
        w[j + 1] += (moment - nodes[j] * mass) / width;
    }
    w.iter_mut().for_each(|v| *v = v.max(0.0));
    w
}

fn cell_masses_normal(z: &[f64], dz: f64, sd: f64) -> Vec<f64> {
    let nd = Normal::new(0.0, sd).unwrap();
    z.iter()
        .map(|&x| nd.cdf(x + 0.5 * dz) - nd.cdf(x - 0.5 * dz))
        .collect()
}

fn gaussian_cell_kernel(dz: f64, sd: f64) -> Vec<(i64, f64)> {
    let nd = Normal::new(0.0, sd).unwrap();
    let reach = (10.0 * sd / dz).ceil() as i64;
    (-reach..=reach)
        .map(|k| {
            let x = k as f64 * dz;
            (k, nd.cdf(x + 0.5 * dz) - nd.cdf(x - 0.5 * dz))
        })
        .collect()
}

fn convolve_z(mass: &[f64], nz: usize, nu: usize, kernel: &[(i64, f64)]) -> Vec<f64> {
    let mut out = vec![0.0; nz * nu];
    for i in 0..nz {
        let src = &mass[i * nu..(i + 1) * nu];
        for &(k, w) in kernel {
            let t = i as i64 + k;
            if t < 0 || t >= nz as i64 {
                continue;
            }
            let dst = &mut out[t as usize * nu..(t as usize + 1) * nu];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += w * s;
            }
        }
    }
    out
}

/// Moves the mass at z to z − shift·√φ in each φ column (cloud-in-cell).
fn recentre(mass: &[f64], z: &[f64], dz: f64, nu: usize, sqrt_phi: &[f64], shift: f64) -> Vec<f64> {
    let nz = z.len();
    let mut out = vec![0.0; mass.len()];
    for j in 0..nu {
        let d = shift * sqrt_phi[j];
        for i in 0..nz {
            let w = mass[i * nu + j];
            if w == 0.0 {
                continue;
            }
            let pos = (z[i] - d - z[0]) / dz;
            let lo = pos.floor();
            let frac = pos - lo;
            let lo = lo as i64;
            if lo >= 0 && lo < nz as i64 - 1 {
                out[lo as usize * nu + j] += w * (1.0 - frac);
                out[(lo as usize + 1) * nu + j] += w * frac;
            }
        }
    }
    out
}
