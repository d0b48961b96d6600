//! The JSON instance file and its canonical form.

use std::collections::BTreeMap;

use edist_core::instance::Provenance;
use edist_core::solver::{MultivaluedMap, SelfMap};
use edist_core::{
    DistanceFunction, FiniteMetricSpace, FiniteSubset, Instance, PiecewiseLinearGauge, SquareMatrix,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema_version `{0}`, expected `{SCHEMA_VERSION}`")]
    Schema(String),
    #[error("unknown point label `{0}`")]
    UnknownLabel(String),
    #[error("map_T has no image for `{0}`")]
    MissingImage(String),
    #[error("phi has no value for `{0}`")]
    MissingPhi(String),
    #[error("the file has no `{0}`")]
    Missing(&'static str),
    #[error(transparent)]
    Invalid(#[from] edist_core::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeFile {
    pub lambda: f64,
    pub breakpoints: Vec<f64>,
    pub point_values: Vec<f64>,
    pub right_intercepts: Vec<f64>,
    pub slopes: Vec<f64>,
}

impl GaugeFile {
    pub fn to_gauge(&self) -> Result<PiecewiseLinearGauge, FormatError> {
        Ok(PiecewiseLinearGauge::new(
            self.lambda,
            self.breakpoints.clone(),
            self.point_values.clone(),
            self.right_intercepts.clone(),
            self.slopes.clone(),
        )?)
    }

    pub fn from_gauge(mu: &PiecewiseLinearGauge) -> Self {
        Self {
            lambda: mu.lambda(),
            breakpoints: mu.breakpoints().to_vec(),
            point_values: mu.point_values().to_vec(),
            right_intercepts: mu.right_intercepts().to_vec(),
            slopes: mu.slopes().to_vec(),
        }
    }
}

/// On-disk instance. Points are referred to by label everywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: String,
    pub points: Vec<String>,
    pub metric: Vec<Vec<f64>>,
    pub kappa: Vec<Vec<f64>>,
    #[serde(rename = "map_T", default, skip_serializing_if = "Option::is_none")]
    pub map_t: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<GaugeFile>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

/// A parsed file. Only the space and `κ` are mandatory.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub space: FiniteMetricSpace,
    pub kappa: DistanceFunction,
    pub map: Option<MultivaluedMap>,
    pub phi: Option<SelfMap>,
    pub mu: Option<PiecewiseLinearGauge>,
    pub lipschitz: Option<f64>,
    pub provenance: Option<Provenance>,
    pub hash: String,
}

impl Loaded {
    pub fn labels(&self) -> &[String] {
        self.space.labels()
    }

    pub fn index(&self, label: &str) -> Result<usize, FormatError> {
        self.space
            .index_of(label)
            .ok_or_else(|| FormatError::UnknownLabel(label.to_string()))
    }

    pub fn subset(&self, labels: &[String]) -> Result<FiniteSubset, FormatError> {
        let idx = labels
            .iter()
            .map(|l| self.index(l))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteSubset::new(idx)?)
    }

    pub fn instance(&self) -> Result<Instance, FormatError> {
        let map = self.map.clone().ok_or(FormatError::Missing("map_T"))?;
        let mut inst = Instance::new(self.space.clone(), self.kappa.clone(), map)?;
        inst.phi = self.phi.clone();
        inst.mu = self.mu.clone();
        inst.lipschitz = self.lipschitz;
        inst.provenance = self.provenance.clone();
        inst.validate()?;
        Ok(inst)
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let file: InstanceFile = serde_json::from_str(text)?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(FormatError::Schema(file.schema_version));
        }
        Ok(file)
    }

    pub fn load(&self) -> Result<Loaded, FormatError> {
        let space =
            FiniteMetricSpace::new(self.points.clone(), SquareMatrix::from_rows(&self.metric)?)?;
        let kappa = DistanceFunction::for_space(&space, SquareMatrix::from_rows(&self.kappa)?)?;
        let index = |l: &str| {
            space
                .index_of(l)
                .ok_or_else(|| FormatError::UnknownLabel(l.to_string()))
        };
        for key in self
            .map_t
            .iter()
            .flat_map(|m| m.keys())
            .chain(self.phi.iter().flat_map(|m| m.keys()))
        {
            index(key)?;
        }
        let map = match &self.map_t {
            None => None,
            Some(m) => {
                let mut images = Vec::with_capacity(space.len());
                for label in space.labels() {
                    let image = m
                        .get(label)
                        .ok_or_else(|| FormatError::MissingImage(label.clone()))?;
                    let idx = image
                        .iter()
                        .map(|l| index(l))
                        .collect::<Result<Vec<_>, _>>()?;
                    images.push(FiniteSubset::new(idx)?);
                }
                Some(MultivaluedMap::new(images)?)
            }
        };
        let phi = match &self.phi {
            None => None,
            Some(m) => {
                let mut image = Vec::with_capacity(space.len());
                for label in space.labels() {
                    let target = m
                        .get(label)
                        .ok_or_else(|| FormatError::MissingPhi(label.clone()))?;
                    image.push(index(target)?);
                }
                Some(SelfMap::new(image)?)
            }
        };
        let mu = self.mu.as_ref().map(GaugeFile::to_gauge).transpose()?;
        if let Some(l) = self.l {
            if !l.is_finite() {
                return Err(edist_core::Error::Malformed("L must be finite".into()).into());
            }
        }
        Ok(Loaded {
            space,
            kappa,
            map,
            phi,
            mu,
            lipschitz: self.l,
            provenance: self.provenance.clone(),
            hash: self.hash(),
        })
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let labels = inst.space.labels();
        let map_t = (0..inst.len())
            .map(|x| {
                (
                    labels[x].clone(),
                    inst.map
                        .image(x)
                        .iter()
                        .map(|y| labels[y].clone())
                        .collect(),
                )
            })
            .collect();
        let phi = inst.phi.as_ref().map(|p| {
            (0..inst.len())
                .map(|x| (labels[x].clone(), labels[p.apply(x)].clone()))
                .collect()
        });
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            points: labels.to_vec(),
            metric: inst.space.matrix().to_rows(),
            kappa: inst.kappa.matrix().to_rows(),
            map_t: Some(map_t),
            phi,
            mu: inst.mu.as_ref().map(GaugeFile::from_gauge),
            l: inst.lipschitz,
            provenance: inst.provenance.clone(),
        }
    }

    /// Sorted keys, no whitespace, shortest round-trip number rendering.
    pub fn canonical(&self) -> String {
        let value = serde_json::to_value(self).expect("instance files are plain data");
        serde_json::to_string(&value).expect("values serialize")
    }

    /// Hex SHA-256 of the canonical form.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

pub fn parse_and_load(text: &str) -> Result<Loaded, FormatError> {
    InstanceFile::parse(text)?.load()
}
