use crate::error::{domain, Result};

/// Distribution function tabulated by Simpson's rule on a uniform grid,
/// linear or logarithmic, and interpolated linearly in the grid variable.
#[derive(Clone, Debug)]
pub struct TabulatedCdf {
    nodes: Vec<f64>,
    cumulative: Vec<f64>,
    log_scale: bool,
}

impl TabulatedCdf {
    /// Tabulate ∫_lo^x density over [lo, hi] with `panels` Simpson panels.
    pub fn from_density(
        density: impl Fn(f64) -> Result<f64>,
        lo: f64,
        hi: f64,
        panels: usize,
        log_scale: bool,
    ) -> Result<Self> {
        if !(hi > lo) || panels == 0 || (log_scale && !(lo > 0.0)) {
            return domain(format!("bad table range [{lo}, {hi}] with {panels} panels"));
        }
        let (a, b) = if log_scale { (lo.ln(), hi.ln()) } else { (lo, hi) };
        let f = |s: f64| -> Result<f64> {
            if log_scale {
                let x = s.exp();
                Ok(density(x)? * x)
            } else {
                density(s)
            }
        };
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels + 1);
        let mut cumulative = Vec::with_capacity(panels + 1);
        nodes.push(a);
        cumulative.push(0.0);
        let mut left = f(a)?;
        let mut acc = 0.0;
        for i in 1..=panels {
            let s = a + h * i as f64;
            let mid = f(s - 0.5 * h)?;
            let right = f(s)?;
            acc += h / 6.0 * (left + 4.0 * mid + right);
            nodes.push(s);
            cumulative.push(acc);
            left = right;
        }
        Ok(Self { nodes, cumulative, log_scale })
    }

    pub fn range(&self) -> (f64, f64) {
        let (a, b) = (self.nodes[0], self.nodes[self.nodes.len() - 1]);
        if self.log_scale {
            (a.exp(), b.exp())
        } else {
            (a, b)
        }
    }

    /// Tabulated mass over the whole range.
    pub fn mass(&self) -> f64 {
        self.cumulative[self.cumulative.len() - 1]
    }

    /// ∫_lo^x density, clamped to the table ends.
    pub fn cdf(&self, x: f64) -> f64 {
        let s = if self.log_scale {
            if x <= 0.0 {
                return 0.0;
            }
            x.ln()
        } else {
            x
        };
        let g = &self.nodes;
        if s <= g[0] {
            return 0.0;
        }
        if s >= g[g.len() - 1] {
            return self.mass();
        }
        let h = g[1] - g[0];
        let i = (((s - g[0]) / h) as usize).min(g.len() - 2);
        let w = (s - g[i]) / h;
        self.cumulative[i] * (1.0 - w) + self.cumulative[i + 1] * w
    }

    /// cdf(x) divided by the tabulated mass.
    pub fn conditional(&self, x: f64) -> f64 {
        self.cdf(x) / self.mass()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_table() {
        let tab = TabulatedCdf::from_density(|x| Ok((-x).exp()), 0.0, 40.0, 4000, false).unwrap();
        for &x in &[0.1, 1.0, 3.3] {
            assert!((tab.cdf(x) - (1.0 - (-x).exp())).abs() < 1e-5);
        }
        let log_tab = TabulatedCdf::from_density(|x| Ok((-x).exp()), 1e-8, 40.0, 4000, true).unwrap();
        assert!((log_tab.mass() - 1.0).abs() < 1e-7);
        assert!((log_tab.cdf(2.0) - (1.0 - (-2.0f64).exp())).abs() < 1e-5);
        assert_eq!(tab.cdf(-1.0), 0.0);
    }
}
