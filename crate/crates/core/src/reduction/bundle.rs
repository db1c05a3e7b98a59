//! Instance bundles: a directory with the graph, optional weights, the two
//! trees and a `meta.json` whose big numbers are decimal strings.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::elim::ElimTree;
use crate::error::{Error, Result};
use crate::flip::WeightFn;
use crate::graph::Graph;

use super::blowup::BlowupInstance;
use super::cut::WeightedInstance;

pub const GRAPH_FILE: &str = "graph.txt";
pub const WEIGHTS_FILE: &str = "weights.txt";
pub const T_INI_FILE: &str = "t_ini.tree";
pub const T_TAR_FILE: &str = "t_tar.tree";
pub const META_FILE: &str = "meta.json";

#[derive(Debug, Clone)]
pub struct Bundle {
    pub graph: Graph,
    pub weights: Option<WeightFn>,
    pub t_ini: ElimTree,
    pub t_tar: ElimTree,
    pub meta: Map<String, Value>,
}

impl Bundle {
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(GRAPH_FILE), self.graph.to_text())?;
        if let Some(w) = &self.weights {
            fs::write(dir.join(WEIGHTS_FILE), w.to_text(&self.graph))?;
        }
        fs::write(dir.join(T_INI_FILE), self.t_ini.to_text(&self.graph))?;
        fs::write(dir.join(T_TAR_FILE), self.t_tar.to_text(&self.graph))?;
        let meta = serde_json::to_string_pretty(&Value::Object(self.meta.clone()))
            .map_err(|e| Error::Io(e.to_string()))?;
        fs::write(dir.join(META_FILE), meta + "\n")?;
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let graph = Graph::parse(&fs::read_to_string(dir.join(GRAPH_FILE))?)?;
        let weights_path = dir.join(WEIGHTS_FILE);
        let weights = if weights_path.exists() {
            Some(WeightFn::parse(&graph, &fs::read_to_string(weights_path)?)?)
        } else {
            None
        };
        let t_ini = ElimTree::parse(&graph, &fs::read_to_string(dir.join(T_INI_FILE))?)?;
        let t_tar = ElimTree::parse(&graph, &fs::read_to_string(dir.join(T_TAR_FILE))?)?;
        let meta = match serde_json::from_str(&fs::read_to_string(dir.join(META_FILE))?) {
            Ok(Value::Object(map)) => map,
            Ok(_) => return Err(Error::parse(1, "meta.json is not an object")),
            Err(e) => return Err(Error::parse(e.line(), e.to_string())),
        };
        Ok(Bundle {
            graph,
            weights,
            t_ini,
            t_tar,
            meta,
        })
    }
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("json! object literal"),
    }
}

impl From<&WeightedInstance> for Bundle {
    fn from(inst: &WeightedInstance) -> Self {
        let meta = json!({
            "kind": "cut",
            "n": inst.n.to_string(),
            "m": inst.m.to_string(),
            "N": inst.big_n.to_string(),
            "lambda": inst.lambda.to_string(),
            "threshold": inst.threshold().to_string(),
            "s": inst.source.label(inst.s),
            "t": inst.source.label(inst.t),
            "vertices": inst.h.n().to_string(),
            "edges": inst.h.m().to_string(),
        });
        Bundle {
            graph: inst.h.clone(),
            weights: Some(inst.w.clone()),
            t_ini: inst.t_ini.clone(),
            t_tar: inst.t_tar.clone(),
            meta: object(meta),
        }
    }
}

impl From<&BlowupInstance> for Bundle {
    fn from(inst: &BlowupInstance) -> Self {
        let total: usize = inst.weights().iter().sum();
        let meta = json!({
            "kind": "blowup",
            "source_vertices": inst.weights().len().to_string(),
            "total_weight": total.to_string(),
            "vertices": inst.g_prime.n().to_string(),
            "edges": inst.g_prime.m().to_string(),
        });
        Bundle {
            graph: inst.g_prime.clone(),
            weights: None,
            t_ini: inst.t_ini.clone(),
            t_tar: inst.t_tar.clone(),
            meta: object(meta),
        }
    }
}
