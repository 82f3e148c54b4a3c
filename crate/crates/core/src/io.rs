//! JSON problem files and CSV class matrices.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracles::FiniteClass;
use crate::pipelines::LearnerConfig;
use crate::sample::{Instance, LabeledExample, PerturbationMap};

/// On-disk problem layout. Perturbation keys are instance ids as strings;
/// instances without an entry get `U(x) = {x}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub domain_size: usize,
    pub samples: Vec<(usize, f64)>,
    #[serde(default)]
    pub perturbations: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holdout: Option<Vec<(usize, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learner: Option<LearnerConfig>,
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub domain_size: usize,
    pub sample: Vec<LabeledExample>,
    pub holdout: Vec<LabeledExample>,
    pub u: PerturbationMap,
    pub class: Option<FiniteClass>,
    pub learner: LearnerConfig,
}

fn examples(pairs: &[(usize, f64)], n: usize) -> Result<Vec<LabeledExample>> {
    pairs
        .iter()
        .map(|&(x, y)| {
            if x >= n {
                return Err(Error::param(
                    "samples",
                    format!("instance {x} outside domain of size {n}"),
                ));
            }
            LabeledExample::new(x, y)
        })
        .collect()
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn into_problem(self) -> Result<Problem> {
        let n = self.domain_size;
        if n == 0 {
            return Err(Error::param("domain_size", "must be at least 1"));
        }
        let mut table: BTreeMap<Instance, Vec<Instance>> = (0..n).map(|x| (Instance(x), vec![Instance(x)])).collect();
        for (key, ids) in &self.perturbations {
            let x: usize = key
                .parse()
                .map_err(|_| Error::param("perturbations", format!("key {key:?} is not an instance id")))?;
            if x >= n || ids.iter().any(|&z| z >= n) {
                return Err(Error::param("perturbations", format!("entry {key} leaves the domain")));
            }
            table.insert(Instance(x), ids.iter().map(|&z| Instance(z)).collect());
        }
        let u = PerturbationMap::from_table(table)?;
        let class = match self.class_matrix {
            Some(rows) => {
                let c = FiniteClass::new(rows)?;
                if c.domain_size() != n {
                    return Err(Error::param("class_matrix", "row length must equal domain_size"));
                }
                Some(c)
            }
            None => None,
        };
        Ok(Problem {
            domain_size: n,
            sample: examples(&self.samples, n)?,
            holdout: examples(self.holdout.as_deref().unwrap_or(&[]), n)?,
            u,
            class,
            learner: self.learner.unwrap_or_default(),
        })
    }
}

impl Problem {
    pub fn to_file(&self) -> ProblemFile {
        let pairs = |s: &[LabeledExample]| s.iter().map(|e| (e.x.0, e.y)).collect::<Vec<_>>();
        ProblemFile {
            domain_size: self.domain_size,
            samples: pairs(&self.sample),
            perturbations: self
                .u
                .iter()
                .map(|(x, set)| (x.0.to_string(), set.iter().map(|z| z.0).collect()))
                .collect(),
            class_matrix: self.class.as_ref().map(|c| c.rows().map(<[f64]>::to_vec).collect()),
            holdout: (!self.holdout.is_empty()).then(|| pairs(&self.holdout)),
            learner: None,
        }
    }
}

pub fn load_problem(path: &Path) -> Result<Problem> {
    ProblemFile::from_json(&fs::read_to_string(path)?)?.into_problem()
}

/// Reads a class matrix: a header of instance ids, then one row per
/// hypothesis.
pub fn read_class_csv<R: Read>(reader: R) -> Result<FiniteClass> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<usize> = rdr
        .headers()?
        .iter()
        .map(|h| {
            h.parse()
                .map_err(|_| Error::param("class csv", format!("header {h:?} is not an instance id")))
        })
        .collect::<Result<_>>()?;
    let n = header.len();
    let mut seen = vec![false; n];
    for &id in &header {
        if id >= n || std::mem::replace(&mut seen[id], true) {
            return Err(Error::param("class csv", "header must list ids 0..n once each"));
        }
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let mut row = vec![0.0; n];
        for (col, field) in rec.iter().enumerate() {
            row[header[col]] = field
                .parse()
                .map_err(|_| Error::param("class csv", format!("value {field:?} is not a number")))?;
        }
        rows.push(row);
    }
    FiniteClass::new(rows)
}

pub fn load_class_csv(path: &Path) -> Result<FiniteClass> {
    read_class_csv(fs::File::open(path)?)
}
