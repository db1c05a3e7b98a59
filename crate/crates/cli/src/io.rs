use std::fs;
use std::path::Path;

use gassoc::{ElimTree, Graph, Result, WeightFn};
use serde_json::Value;

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| gassoc::Error::Io(format!("{}: {e}", path.display())))
}

pub fn graph(path: &Path) -> Result<Graph> {
    Graph::parse(&read(path)?)
}

pub fn tree(g: &Graph, path: &Path) -> Result<ElimTree> {
    ElimTree::parse(g, &read(path)?)
}

pub fn weights(g: &Graph, path: &Path) -> Result<WeightFn> {
    WeightFn::parse(g, &read(path)?)
}

pub fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values always serialize"));
}
