use serde::{Deserialize, Serialize};

use crate::data::Normalization;
use crate::error::{invalid, Result};

/// Which restriction of the full model to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ablation {
    /// Learned feature weights and spectral-norm regularization.
    #[default]
    #[serde(alias = "full")]
    FullEq8,
    /// Feature weights frozen uniform.
    #[serde(alias = "eq7")]
    UniformWeightsEq7,
    /// Feature weights frozen uniform and `λ₂ = 0`.
    #[serde(alias = "eq6")]
    NoSpectralNormEq6,
}

impl Ablation {
    pub fn learns_weights(self) -> bool {
        self == Self::FullEq8
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Self::FullEq8 => "full",
            Self::UniformWeightsEq7 => "eq7",
            Self::NoSpectralNormEq6 => "eq6",
        }
    }
}

impl std::str::FromStr for Ablation {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" | "full_eq8" => Ok(Self::FullEq8),
            "eq7" | "uniform_weights_eq7" => Ok(Self::UniformWeightsEq7),
            "eq6" | "no_spectral_norm_eq6" => Ok(Self::NoSpectralNormEq6),
            other => Err(invalid(format!("unknown ablation mode {other:?}"))),
        }
    }
}

/// Where final labels come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelSource {
    /// k-means on the rows of the shared embedding `Q`.
    #[default]
    Embedding,
    /// Normalized spectral clustering of the fused local graphs.
    Graph,
}

impl std::str::FromStr for LabelSource {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "embedding" => Ok(Self::Embedding),
            "graph" => Ok(Self::Graph),
            other => Err(invalid(format!("unknown label source {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Weight of the shared-embedding smoothness term.
    pub lambda1: f64,
    /// Weight of the spectral norm on `U`.
    pub lambda2: f64,
    /// Weight of the ℓ1 norm on `E`.
    pub lambda3: f64,
    pub mu0: f64,
    pub rho: f64,
    pub mu_max: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub k_init: usize,
    pub n_clusters: usize,
    pub ablation: Ablation,
    pub labels_from: LabelSource,
    pub seed: u64,
    /// Run the per-view block updates on the rayon pool.
    pub parallel_views: bool,
    /// Preprocessing applied to every view before solving.
    pub normalize: Normalization,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda1: 1.0,
            lambda2: 0.1,
            lambda3: 0.01,
            mu0: 1e-3,
            rho: 1.1,
            mu_max: 1e6,
            max_iter: 200,
            tol: 1e-6,
            k_init: 5,
            n_clusters: 2,
            ablation: Ablation::FullEq8,
            labels_from: LabelSource::Embedding,
            seed: 0,
            parallel_views: true,
            normalize: Normalization::UnitL2PerSample,
        }
    }
}

impl SolverConfig {
    pub fn with_clusters(n_clusters: usize) -> Self {
        Self {
            n_clusters,
            ..Self::default()
        }
    }

    /// `λ₂` after the ablation mode is applied.
    pub fn effective_lambda2(&self) -> f64 {
        match self.ablation {
            Ablation::NoSpectralNormEq6 => 0.0,
            _ => self.lambda2,
        }
    }

    /// Checks every constraint that does not depend on the dataset.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("lambda3", self.lambda3),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !(self.mu0 > 0.0 && self.mu0.is_finite()) {
            return Err(invalid(format!("mu0 must be positive, got {}", self.mu0)));
        }
        if !(self.rho > 1.0 && self.rho.is_finite()) {
            return Err(invalid(format!("rho must exceed 1, got {}", self.rho)));
        }
        if !(self.mu_max >= self.mu0 && self.mu_max.is_finite()) {
            return Err(invalid(format!(
                "mu_max ({}) must be finite and >= mu0 ({})",
                self.mu_max, self.mu0
            )));
        }
        if !(self.tol > 0.0) {
            return Err(invalid(format!("tol must be positive, got {}", self.tol)));
        }
        if self.n_clusters < 2 {
            return Err(invalid(format!("need at least 2 clusters, got {}", self.n_clusters)));
        }
        if self.k_init == 0 {
            return Err(invalid("k_init must be at least 1"));
        }
        Ok(())
    }
}
