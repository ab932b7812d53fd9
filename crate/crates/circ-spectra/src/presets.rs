//! Named model and graph configurations.

use circ_spectra_core::graphs::DEFAULT_EPSILON;
use circ_spectra_core::{surrogate_params, GraphSpec, ModelParams, Observable, TauScenario};

#[derive(Debug, Clone, PartialEq)]
pub enum PresetModel {
    Matrix {
        params: ModelParams,
        observable: Observable,
        ordered: bool,
    },
    Graph(GraphSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    /// Default ensemble size.
    pub m: usize,
    pub model: PresetModel,
}

impl Preset {
    /// Gaussian parameters: the model itself, or a graph's surrogate.
    pub fn params(&self) -> ModelParams {
        match &self.model {
            PresetModel::Matrix { params, .. } => params.clone(),
            PresetModel::Graph(spec) => surrogate_params(spec),
        }
    }

    pub fn graph(&self) -> Option<&GraphSpec> {
        match &self.model {
            PresetModel::Graph(spec) => Some(spec),
            PresetModel::Matrix { .. } => None,
        }
    }
}

pub const PRESET_NAMES: [&str; 10] = [
    "fig1", "fig4", "fig5", "fig7", "fig10a", "fig10b", "fig12", "fig13", "fig14", "fig15",
];

fn fig1_params() -> ModelParams {
    ModelParams::from_std_devs(
        vec![2.0, 9.0, -7.0, -19.0 / 2.0, -5.0 / 3.0],
        vec![4.0, 8.0, -15.0 / 2.0, 3.0, 20.0 / 3.0],
        vec![1.0, 2.0, 1.0 / 2.0, 2.0 / 7.0, 4.0 / 5.0],
        vec![6.0 / 5.0, 2.0 / 3.0, 3.0 / 4.0, 4.0 / 7.0, 3.0 / 5.0],
    )
    .expect("valid preset")
}

fn fig14_params(v: Vec<f64>, tau: Vec<f64>) -> ModelParams {
    ModelParams::from_std_devs(vec![2.0, 6.0, -7.0, -5.0], v, vec![5.0, 2.0, 1.0 / 2.0, 4.0 / 3.0], tau)
        .expect("valid preset")
}

fn matrix(params: ModelParams, observable: Observable, ordered: bool) -> PresetModel {
    PresetModel::Matrix {
        params,
        observable,
        ordered,
    }
}

pub fn preset(name: &str) -> Option<Preset> {
    let p = match name {
        "fig1" => Preset {
            name: "fig1",
            description: "ordered eigenvalues, N = 5, non-identical means and variances",
            m: 100_000,
            model: matrix(fig1_params(), Observable::EtaFull, true),
        },
        "fig4" => Preset {
            name: "fig4",
            description: "unordered eigenvalue, fig1 parameters",
            m: 100_000,
            model: matrix(fig1_params(), Observable::EtaFull, false),
        },
        "fig5" => Preset {
            name: "fig5",
            description: "unordered eigenvalue of HH†, N = 3, zero means",
            m: 20_000,
            model: matrix(
                ModelParams::from_std_devs(
                    vec![0.0; 3],
                    vec![0.0; 3],
                    vec![1.0, 7.0 / 2.0, 3.0 / 4.0],
                    vec![4.0 / 3.0, 2.0 / 3.0, 9.0 / 2.0],
                )
                .expect("valid preset"),
                Observable::WishartW,
                false,
            ),
        },
        "fig7" => Preset {
            name: "fig7",
            description: "directed circulant graph, N = 100, p = 1/10",
            m: 2000,
            model: PresetModel::Graph(
                GraphSpec::directed(100, 0.1)
                    .and_then(|s| s.with_tau_scenario(TauScenario::Epsilon(DEFAULT_EPSILON)))
                    .expect("valid preset"),
            ),
        },
        "fig10a" => Preset {
            name: "fig10a",
            description: "undirected circulant graph, N = 50, p = 1/3",
            m: 5000,
            model: PresetModel::Graph(GraphSpec::undirected(50, 1.0 / 3.0).expect("valid preset")),
        },
        "fig10b" => Preset {
            name: "fig10b",
            description: "undirected circulant graph, N = 101, p = 1/5",
            m: 2000,
            model: PresetModel::Graph(GraphSpec::undirected(101, 0.2).expect("valid preset")),
        },
        "fig12" => Preset {
            name: "fig12",
            description: "double-edged directed graph, N = 100, p1 = 1/2, p2 = 1/10",
            m: 3000,
            model: PresetModel::Graph(GraphSpec::double_directed(100, 0.5, 0.1).expect("valid preset")),
        },
        "fig13" => Preset {
            name: "fig13",
            description: "double-edged directed graph, N = 100, p1 = p2 = 1/2",
            m: 3000,
            model: PresetModel::Graph(GraphSpec::double_directed(100, 0.5, 0.5).expect("valid preset")),
        },
        "fig14" => Preset {
            name: "fig14",
            description: "unordered eigenvalue, N = 4",
            m: 20_000,
            model: matrix(
                fig14_params(
                    vec![-3.0, 2.0, 1.0, 3.0],
                    vec![7.0 / 4.0, 3.0 / 2.0, 1.0 / 4.0, 5.0 / 6.0],
                ),
                Observable::EtaFull,
                false,
            ),
        },
        "fig15" => Preset {
            name: "fig15",
            description: "fig14 with the imaginary part nearly switched off",
            m: 20_000,
            model: matrix(fig14_params(vec![0.1; 4], vec![0.1; 4]), Observable::EtaFull, false),
        },
        _ => return None,
    };
    Some(p)
}
