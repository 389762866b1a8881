use serde::Serialize;

/// One simulated variable: its true values and which cells are observed.
///
/// Unobserved cells keep their true value so that full-data fits remain
/// possible; estimators must only read cells where `observed` is set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
    pub observed: Vec<bool>,
}

impl Column {
    pub fn observed_count(&self) -> usize {
        self.observed.iter().filter(|&&o| o).count()
    }

    pub fn is_complete(&self) -> bool {
        self.observed.iter().all(|&o| o)
    }
}

/// `n` rows of named numeric columns with a per-cell observed mask.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub columns: Vec<Column>,
}

impl Dataset {
    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Rows where every named column is observed.
    pub fn rows_observed(&self, names: &[&str]) -> Vec<usize> {
        let cols: Vec<&Column> = names.iter().filter_map(|n| self.column(n)).collect();
        (0..self.rows()).filter(|&i| cols.iter().all(|c| c.observed[i])).collect()
    }

    /// A copy with every cell marked observed.
    pub fn unmasked(&self) -> Dataset {
        let mut d = self.clone();
        for c in &mut d.columns {
            c.observed.iter_mut().for_each(|o| *o = true);
        }
        d
    }
}

/// Sample quantile with linear interpolation between order statistics
/// (the "type 7" definition used by R and NumPy by default).
pub fn quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of an empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type7_quantiles() {
        let v = [3.0, 1.0, 4.0, 2.0];
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
        // h = 3 * 0.7 = 2.1 -> 3 + 0.1 * (4 - 3)
        assert!((quantile(&v, 0.7) - 3.1).abs() < 1e-12);
        assert_eq!(quantile(&[5.0, 1.0, 3.0], 0.5), 3.0);
    }
}
