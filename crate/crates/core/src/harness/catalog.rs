use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generator::{example_files, ExampleGraphId};
use crate::graph::{scale_of, size_class, write_evlp_files, Graph, Scale, ScaleError, SizeClass};
use crate::kernels::{run_kernel, Algorithm, ParameterSet};
use crate::validator::write_output_file;

/// Environment variable naming the default catalog file.
pub const CATALOG_ENV: &str = "GRAPHALYTICS_CATALOG";

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("dataset {0:?} listed twice")]
    Duplicate(String),
    #[error("unknown dataset {0:?}")]
    Unknown(String),
    #[error("dataset {name:?}: reference {algorithm}: {reason}")]
    Reference {
        name: String,
        algorithm: Algorithm,
        reason: String,
    },
    #[error("dataset {name:?}: {source}")]
    Scale {
        name: String,
        #[source]
        source: ScaleError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    #[serde(rename = "realworld")]
    RealWorld,
    Datagen,
    Graph500,
    Example,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub name: String,
    pub kind: DatasetKind,
    pub directed: bool,
    pub weighted: bool,
    pub vertex_file: PathBuf,
    pub edge_file: PathBuf,
    /// Holds one reference output (file or directory) per algorithm, named like `BFS`.
    pub reference_dir: PathBuf,
    pub vertices: u64,
    pub edges: u64,
    /// Class the dataset stands in for, overriding the one implied by its size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_class: Option<SizeClass>,
    pub parameters: ParameterSet,
}

impl DatasetEntry {
    pub fn scale(&self) -> Result<Scale, CatalogError> {
        scale_of(self.vertices, self.edges).map_err(|source| CatalogError::Scale {
            name: self.name.clone(),
            source,
        })
    }

    /// Declared class, else the one computed from `vertices + edges`.
    pub fn class(&self) -> Option<SizeClass> {
        self.target_class
            .or_else(|| self.scale().ok().and_then(|s| size_class(s).ok()))
    }

    pub fn reference_path(&self, algorithm: Algorithm) -> PathBuf {
        self.reference_dir.join(algorithm.to_string())
    }

    pub fn supports(&self, algorithm: Algorithm) -> bool {
        !algorithm.needs_weights() || self.weighted
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Catalog {
    pub datasets: Vec<DatasetEntry>,
}

impl Catalog {
    pub fn new(datasets: Vec<DatasetEntry>) -> Result<Catalog, CatalogError> {
        let mut seen = std::collections::HashSet::new();
        for d in &datasets {
            if !seen.insert(d.name.as_str()) {
                return Err(CatalogError::Duplicate(d.name.clone()));
            }
        }
        Ok(Catalog { datasets })
    }

    pub fn get(&self, name: &str) -> Result<&DatasetEntry, CatalogError> {
        self.datasets
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| CatalogError::Unknown(name.to_string()))
    }

    /// Reads a catalog file. Relative paths inside it are resolved against
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Catalog, CatalogError> {
        let text = fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut cat: Catalog = serde_json::from_str(&text).map_err(|source| CatalogError::Json {
            path: path.display().to_string(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        for d in &mut cat.datasets {
            for p in [&mut d.vertex_file, &mut d.edge_file, &mut d.reference_dir] {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Catalog::new(cat.datasets)
    }

    pub fn save(&self, path: &Path) -> Result<(), CatalogError> {
        let io_err = |source| CatalogError::Io {
            path: path.display().to_string(),
            source,
        };
        let json = serde_json::to_string_pretty(self).expect("catalog serializes");
        fs::write(path, json + "\n").map_err(io_err)
    }

    /// Adds or replaces the entry with the same name.
    pub fn upsert(&mut self, entry: DatasetEntry) {
        match self.datasets.iter_mut().find(|d| d.name == entry.name) {
            Some(slot) => *slot = entry,
            None => self.datasets.push(entry),
        }
    }

    pub fn merge(&mut self, other: Catalog) {
        for d in other.datasets {
            self.upsert(d);
        }
    }
}

/// Writes `graph` under `dir/name/` together with reference outputs
/// computed by the built-in kernels, and returns its catalog entry.
///
/// SSSP references are only produced for weighted graphs.
pub fn write_dataset(
    dir: &Path,
    name: &str,
    kind: DatasetKind,
    graph: &Graph,
    parameters: ParameterSet,
    target_class: Option<SizeClass>,
) -> Result<DatasetEntry, CatalogError> {
    let io_err = |p: &Path| {
        let path = p.display().to_string();
        move |source| CatalogError::Io { path, source }
    };
    let base = dir.join(name);
    let refs = base.join("reference");
    fs::create_dir_all(&refs).map_err(io_err(&refs))?;
    let vertex_file = base.join(format!("{name}.v"));
    let edge_file = base.join(format!("{name}.e"));
    write_evlp_files(graph, &vertex_file, &edge_file).map_err(io_err(&base))?;
    let entry = DatasetEntry {
        name: name.to_string(),
        kind,
        directed: graph.is_directed(),
        weighted: graph.is_weighted(),
        vertex_file,
        edge_file,
        reference_dir: refs.clone(),
        vertices: graph.vertex_count() as u64,
        edges: graph.edge_count() as u64,
        target_class,
        parameters,
    };
    for a in Algorithm::ALL.into_iter().filter(|a| entry.supports(*a)) {
        let out = run_kernel(graph, &parameters.for_algorithm(a)).map_err(|e| CatalogError::Reference {
            name: name.to_string(),
            algorithm: a,
            reason: e.to_string(),
        })?;
        let p = entry.reference_path(a);
        write_output_file(&out, &p).map_err(io_err(&p))?;
    }
    Ok(entry)
}

/// Writes both example graphs and their reference outputs under `dir`.
pub fn materialize_examples(dir: &Path) -> Result<Catalog, CatalogError> {
    let io_err = |p: &Path| {
        let path = p.display().to_string();
        move |source| CatalogError::Io { path, source }
    };
    let mut datasets = Vec::new();
    for id in ExampleGraphId::ALL {
        let files = example_files(id);
        let base = dir.join(id.name());
        let refs = base.join("reference");
        fs::create_dir_all(&refs).map_err(io_err(&refs))?;
        let vertex_file = base.join(format!("{}.v", id.name()));
        let edge_file = base.join(format!("{}.e", id.name()));
        fs::write(&vertex_file, files.vertices).map_err(io_err(&vertex_file))?;
        fs::write(&edge_file, files.edges).map_err(io_err(&edge_file))?;
        for (a, text) in files.references {
            let p = refs.join(a.to_string());
            fs::write(&p, text).map_err(io_err(&p))?;
        }
        datasets.push(DatasetEntry {
            name: id.name().to_string(),
            kind: DatasetKind::Example,
            directed: id.is_directed(),
            weighted: true,
            vertex_file,
            edge_file,
            reference_dir: refs,
            vertices: files.vertices.lines().count() as u64,
            edges: files.edges.lines().count() as u64,
            target_class: None,
            parameters: id.parameters(),
        });
    }
    Catalog::new(datasets)
}
