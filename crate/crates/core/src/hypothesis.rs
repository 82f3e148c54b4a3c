use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::boosting::weighted_median;
use crate::error::{Error, Result};
use crate::sample::Instance;

/// A `[0, 1]`-valued predictor over a finite domain.
///
/// The variant and its parameters double as the descriptor used for equality
/// testing and compression. Class rows carry their values but only the row
/// index is serialized.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Hypothesis {
    Row {
        index: usize,
        #[serde(skip)]
        values: Arc<[f64]>,
    },
    Constant {
        value: f64,
    },
    /// Lower weighted median of the members.
    Median {
        members: Vec<Hypothesis>,
        weights: Vec<f64>,
    },
    /// Equal-weight average of the members.
    Average {
        members: Vec<Hypothesis>,
    },
}

impl Hypothesis {
    pub fn row(index: usize, values: impl Into<Arc<[f64]>>) -> Self {
        Hypothesis::Row {
            index,
            values: values.into(),
        }
    }

    pub fn constant(value: f64) -> Self {
        Hypothesis::Constant {
            value: value.clamp(0.0, 1.0),
        }
    }

    pub fn median(members: Vec<Hypothesis>, weights: Vec<f64>) -> Result<Self> {
        if members.is_empty() || members.len() != weights.len() {
            return Err(Error::param(
                "weights",
                "need one weight per member, at least one member",
            ));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::param("weights", "weights must be finite and nonnegative"));
        }
        if weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::DegenerateWeights);
        }
        Ok(Hypothesis::Median { members, weights })
    }

    pub fn unweighted_median(members: Vec<Hypothesis>) -> Result<Self> {
        let weights = vec![1.0; members.len()];
        Self::median(members, weights)
    }

    pub fn average(members: Vec<Hypothesis>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::param("members", "average of zero members"));
        }
        Ok(Hypothesis::Average { members })
    }

    /// Evaluates at `x`. Panics if a class row is asked about an instance
    /// outside its domain.
    pub fn eval(&self, x: Instance) -> f64 {
        match self {
            Hypothesis::Row { values, .. } => values[x.0],
            Hypothesis::Constant { value } => *value,
            Hypothesis::Median { members, weights } => {
                let vals: Vec<f64> = members.iter().map(|h| h.eval(x)).collect();
                weighted_median(&vals, weights).expect("median weights validated at construction")
            }
            Hypothesis::Average { members } => members.iter().map(|h| h.eval(x)).sum::<f64>() / members.len() as f64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    WeightedMedian,
    Average,
}

/// Output of a boosting run: members, their coefficients, and the original
/// sample indices each member was fit on.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedEnsemble {
    pub members: Vec<Hypothesis>,
    pub alphas: Vec<f64>,
    pub sources: Vec<Vec<usize>>,
    pub aggregation: Aggregation,
}

impl WeightedEnsemble {
    pub fn new(
        members: Vec<Hypothesis>,
        alphas: Vec<f64>,
        sources: Vec<Vec<usize>>,
        aggregation: Aggregation,
    ) -> Result<Self> {
        if members.is_empty() || members.len() != alphas.len() || members.len() != sources.len() {
            return Err(Error::param(
                "ensemble",
                "members, alphas and sources must have equal nonzero length",
            ));
        }
        if alphas.iter().any(|a| !(*a >= 0.0) || !a.is_finite()) {
            return Err(Error::param("alphas", "coefficients must be finite and nonnegative"));
        }
        if aggregation == Aggregation::WeightedMedian && alphas.iter().sum::<f64>() <= 0.0 {
            return Err(Error::DegenerateWeights);
        }
        Ok(WeightedEnsemble {
            members,
            alphas,
            sources,
            aggregation,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn eval(&self, x: Instance) -> f64 {
        let vals: Vec<f64> = self.members.iter().map(|h| h.eval(x)).collect();
        match self.aggregation {
            Aggregation::WeightedMedian => weighted_median(&vals, &self.alphas).expect("validated alphas"),
            Aggregation::Average => vals.iter().sum::<f64>() / vals.len() as f64,
        }
    }

    /// The aggregate as a single hypothesis.
    pub fn to_hypothesis(&self) -> Hypothesis {
        match self.aggregation {
            Aggregation::WeightedMedian => Hypothesis::Median {
                members: self.members.clone(),
                weights: self.alphas.clone(),
            },
            Aggregation::Average => Hypothesis::Average {
                members: self.members.clone(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_clamped() {
        assert_eq!(Hypothesis::constant(1.3).eval(Instance(0)), 1.0);
    }

    #[test]
    fn ensemble_matches_hypothesis_view() {
        let members = vec![
            Hypothesis::row(0, vec![0.1, 0.9]),
            Hypothesis::row(1, vec![0.5, 0.2]),
            Hypothesis::constant(0.7),
        ];
        let e = WeightedEnsemble::new(
            members,
            vec![0.2, 0.5, 0.4],
            vec![vec![0], vec![1], vec![0, 1]],
            Aggregation::WeightedMedian,
        )
        .unwrap();
        let h = e.to_hypothesis();
        for x in [Instance(0), Instance(1)] {
            assert_eq!(e.eval(x), h.eval(x));
        }
    }

    #[test]
    fn zero_alpha_median_rejected() {
        let r = WeightedEnsemble::new(
            vec![Hypothesis::constant(0.5)],
            vec![0.0],
            vec![vec![0]],
            Aggregation::WeightedMedian,
        );
        assert!(matches!(r, Err(Error::DegenerateWeights)));
        assert!(WeightedEnsemble::new(
            vec![Hypothesis::constant(0.5)],
            vec![0.0],
            vec![vec![0]],
            Aggregation::Average,
        )
        .is_ok());
    }
}
