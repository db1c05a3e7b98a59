use std::fs;
use std::path::Path;
use std::time::Instant;

use gassoc::flip::{self, FlipGraph};
use gassoc::polymatroid::{GraphAssocRank, RankOracle};
use gassoc::reduction::{self, Bundle};
use gassoc::{Error, Result};
use serde_json::{json, Value};

use crate::io;
use crate::RunConfig;

pub const SUFFICIENCY_FILE: &str = "sufficiency.moves";

pub fn dist(
    cfg: &RunConfig,
    graph: &Path,
    t1: &Path,
    t2: &Path,
    weights: Option<&Path>,
    show_path: bool,
) -> Result<()> {
    let g = io::graph(graph)?;
    let a = io::tree(&g, t1)?;
    let b = io::tree(&g, t2)?;
    let (distance, seq, expanded) = match weights {
        Some(p) => {
            let w = io::weights(&g, p)?;
            flip::weighted_shortest_path(&g, &w, &a, &b, &cfg.limits)?
        }
        None => {
            let (seq, expanded) = flip::shortest_path(&g, &a, &b, &cfg.limits, cfg.exec)?;
            (seq.len().into(), seq, expanded)
        }
    };
    if cfg.json {
        let mut out = json!({
            "distance": distance.to_string(),
            "weighted": weights.is_some(),
            "expanded": expanded,
        });
        if show_path {
            out["path"] = json!(seq.label_pairs(&g));
        }
        io::print_json(&out);
    } else {
        println!("{distance}");
        if show_path {
            print!("{}", seq.moves_to_text(&g));
        }
    }
    Ok(())
}

pub fn diameter(cfg: &RunConfig, graph: &Path, all_pairs: bool, dot: bool) -> Result<()> {
    let g = io::graph(graph)?;
    let start = Instant::now();
    let fg = FlipGraph::build(&g, &cfg.limits, cfg.exec)?;
    if dot {
        print!("{}", fg.to_dot(&g));
        return Ok(());
    }
    let rep = if all_pairs {
        fg.diameter_all_pairs(cfg.exec)
    } else {
        fg.diameter_pruned(cfg.exec)
    };
    // wall-clock time goes to stderr so stdout stays reproducible
    eprintln!("runtime: {:.3}s", start.elapsed().as_secs_f64());
    if cfg.json {
        io::print_json(&json!(rep));
    } else {
        println!("diameter {}", rep.diameter);
        println!("vertices {}", rep.vertices);
    }
    Ok(())
}

pub fn enumerate(cfg: &RunConfig, graph: &Path, dot: bool) -> Result<()> {
    let g = io::graph(graph)?;
    let fg = FlipGraph::build(&g, &cfg.limits, cfg.exec)?;
    if dot {
        print!("{}", fg.to_dot(&g));
    } else if cfg.json {
        io::print_json(&json!({ "trees": fg.len(), "edges": fg.edge_count() }));
    } else {
        println!("trees {}", fg.len());
        println!("edges {}", fg.edge_count());
    }
    Ok(())
}

pub fn reduce_cut(
    cfg: &RunConfig,
    graph: &Path,
    s: &str,
    t: &str,
    big_n: usize,
    out: &Path,
    sufficiency: Option<&[String]>,
) -> Result<()> {
    let g = io::graph(graph)?;
    let inst = reduction::build_weighted_instance(&g, g.index_of(s)?, g.index_of(t)?, big_n)?;
    let mut bundle = Bundle::from(&inst);
    let mut report = json!({
        "out": out.display().to_string(),
        "vertices": inst.h.n(),
        "edges": inst.h.m(),
        "lambda": inst.lambda,
        "threshold": inst.threshold().to_string(),
        "margin_holds": inst.margin_holds(),
    });
    let suff = match sufficiency {
        Some(side) => Some(inst.sufficiency_sequence(&g.vertex_set(side)?)?),
        None => None,
    };
    if let Some(rep) = &suff {
        let below = rep.total < inst.threshold();
        let entry = json!({
            "moves": rep.sequence.len(),
            "weight": rep.total.to_string(),
            "below_threshold": below,
        });
        bundle.meta.insert("sufficiency".into(), entry.clone());
        report["sufficiency"] = entry;
    }
    bundle.write(out)?;
    if let Some(rep) = &suff {
        fs::write(out.join(SUFFICIENCY_FILE), rep.sequence.moves_to_text(&inst.h))?;
    }
    if cfg.json {
        io::print_json(&report);
    } else {
        println!("wrote {} ({} vertices, {} edges)", out.display(), inst.h.n(), inst.h.m());
        println!("lambda {}", inst.lambda);
        println!("threshold {}", inst.threshold());
        if let Some(rep) = &suff {
            println!("sufficiency weight {} ({} moves)", rep.total, rep.sequence.len());
        }
    }
    Ok(())
}

pub fn reduce_blowup(
    cfg: &RunConfig,
    graph: &Path,
    weights: &Path,
    ini: &Path,
    tar: &Path,
    out: &Path,
) -> Result<()> {
    let g = io::graph(graph)?;
    let w = io::weights(&g, weights)?;
    let t_ini = io::tree(&g, ini)?;
    let t_tar = io::tree(&g, tar)?;
    let inst = reduction::build_unweighted_instance(&g, &w, &t_ini, &t_tar)?;
    Bundle::from(&inst).write(out)?;
    if cfg.json {
        io::print_json(&json!({
            "out": out.display().to_string(),
            "vertices": inst.g_prime.n(),
            "edges": inst.g_prime.m(),
        }));
    } else {
        println!(
            "wrote {} ({} vertices, {} edges)",
            out.display(),
            inst.g_prime.n(),
            inst.g_prime.m()
        );
    }
    Ok(())
}

pub fn rank(cfg: &RunConfig, graph: &Path, labels: &[String]) -> Result<()> {
    let g = io::graph(graph)?;
    let set = g.vertex_set(labels)?;
    let r = GraphAssocRank::new(&g)?.rank(&set)?;
    if cfg.json {
        io::print_json(&json!({ "rank": r.to_string() }));
    } else {
        println!("{r}");
    }
    Ok(())
}

pub fn project(cfg: &RunConfig, graph: &Path, tree: &Path, labels: &[String]) -> Result<()> {
    let g = io::graph(graph)?;
    let t = io::tree(&g, tree)?;
    if !t.is_valid(&g) {
        return Err(Error::InvalidArgument(
            "tree is not an elimination tree of the graph".into(),
        ));
    }
    let u = g.vertex_set(labels)?;
    let sub = g.induced_subgraph(&u)?;
    let p = t.project(&g, &u)?;
    if cfg.json {
        let parents: Vec<Value> = (0..sub.n())
            .map(|v| json!([sub.label(v), p.parent(v).map(|q| sub.label(q))]))
            .collect();
        io::print_json(&json!({ "tree": parents }));
    } else {
        print!("{}", p.to_text(&sub));
    }
    Ok(())
}
