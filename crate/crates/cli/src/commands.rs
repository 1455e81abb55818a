use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use log::info;
use rayon::prelude::*;
use tsgn_core::features::{FeatureVector, Source};
use tsgn_core::ingest::{
    dataset_stats, generate_synthetic_dataset, graph_ids, read_dataset, write_dataset, SynthConfig,
};
use tsgn_core::ml::EvalRecord;
use tsgn_core::{
    evaluate as run_eval, handcrafted_features, DatasetManifest, EvalOptions, EvalReport,
    FeatureMatrix, ForestConfig, TsgnGraph, Variant,
};

use crate::{EvaluateArgs, FeaturesArgs, ShapeArgs, StatsArgs, SynthArgs, TransformArgs};

pub const REPORT_TEXT: &str = "report.toml";
pub const REPORT_CSV: &str = "report.csv";
pub const SUMMARY_CSV: &str = "summary.csv";

fn load(dir: &Path, shape: &ShapeArgs) -> Result<DatasetManifest> {
    read_dataset(dir, shape.form, shape.tier)
        .with_context(|| format!("loading dataset {}", dir.display()))
}

fn dir_name(dir: &Path) -> String {
    dir.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

pub fn synth(a: &SynthArgs) -> Result<()> {
    if a.n_per_class == 0 {
        bail!("--n-per-class must be at least 1");
    }
    let m = generate_synthetic_dataset(&SynthConfig {
        n_per_class: a.n_per_class,
        profile: a.profile,
        seed: a.seed,
    });
    write_dataset(&a.out, &m)?;
    println!("wrote {} graphs to {}", m.graphs.len(), a.out.display());
    Ok(())
}

pub fn stats(a: &StatsArgs) -> Result<()> {
    let m = load(&a.dataset, &a.shape)?;
    let name = a.name.clone().unwrap_or_else(|| dir_name(&a.dataset));
    print!("{}", dataset_stats(&m, &name)?.to_table());
    Ok(())
}

/// Maps every graph, failing on the first incompatible one.
fn map_all(m: &DatasetManifest, ids: &[String], v: Variant) -> Result<Vec<TsgnGraph>> {
    m.graphs
        .par_iter()
        .zip(ids)
        .map(|(g, id)| {
            v.build(g)
                .with_context(|| format!("{} on graph {id}", v.short_name()))
        })
        .collect()
}

fn write_mapped(dir: &Path, id: &str, t: &TsgnGraph) -> Result<()> {
    let mut w = create(&dir.join(format!("{id}.csv")))?;
    writeln!(w, "from,to,weight")?;
    for e in t.edges() {
        let (from, to) = (&t.nodes()[e.from], &t.nodes()[e.to]);
        writeln!(w, "{},{},{}", from.edge_id, to.edge_id, e.weight)?;
    }
    w.flush()?;

    let mut w = create(&dir.join(format!("{id}.nodes.csv")))?;
    writeln!(w, "edge_id,src,dst,amount,timestamp")?;
    for r in t.nodes() {
        let ts = r.timestamp.map(|t| t.to_string()).unwrap_or_default();
        writeln!(w, "{},{},{},{},{ts}", r.edge_id, r.src, r.dst, r.amount)?;
    }
    w.flush()?;
    Ok(())
}

pub fn transform(a: &TransformArgs) -> Result<()> {
    let mut variants = a.variants.clone();
    variants.sort();
    variants.dedup();
    if variants.is_empty() {
        info!("no variant requested, nothing to do");
        return Ok(());
    }
    let m = load(&a.dataset, &a.shape)?;
    let ids = graph_ids(&a.dataset)?;

    // map everything first so an incompatible variant fails before any output
    let mut results = Vec::new();
    for v in variants {
        let start = Instant::now();
        let mapped = map_all(&m, &ids, v)?;
        results.push((v, mapped, start.elapsed().as_secs_f64()));
    }

    let mut summary = Vec::new();
    println!(
        "{:<8} {:>7} {:>10} {:>12} {:>10}",
        "variant", "graphs", "nodes", "edges", "seconds"
    );
    for (v, mapped, secs) in results {
        let dir = a.out.join(v.short_name());
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        for (t, id) in mapped.iter().zip(&ids) {
            write_mapped(&dir, id, t)?;
        }
        let nodes: usize = mapped.iter().map(|t| t.node_count()).sum();
        let edges: usize = mapped.iter().map(|t| t.edge_count()).sum();
        println!(
            "{:<8} {:>7} {:>10} {:>12} {:>10.4}",
            v.short_name(),
            mapped.len(),
            nodes,
            edges,
            secs
        );
        summary.push((v, mapped.len(), nodes, edges));
    }

    let mut w = create(&a.out.join(SUMMARY_CSV))?;
    writeln!(w, "variant,graphs,nodes,edges")?;
    for (v, g, n, e) in summary {
        writeln!(w, "{},{g},{n},{e}", v.short_name())?;
    }
    w.flush()?;
    Ok(())
}

fn feature_matrix(m: &DatasetManifest, source: Source) -> Result<FeatureMatrix> {
    let vectors = m
        .graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let v = match source {
                Source::Tn => handcrafted_features(g)?,
                Source::Mapped(v) => handcrafted_features(&v.build(g)?)?,
            };
            Ok::<FeatureVector, anyhow::Error>(v)
                .with_context(|| format!("{} features of graph {i}", source.short_name()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureMatrix::from_vectors(&vectors, m.labels())?)
}

fn unique_sources(sources: &[Source]) -> Vec<Source> {
    let mut out: Vec<Source> = Vec::new();
    for s in sources {
        if !out.contains(s) {
            out.push(*s);
        }
    }
    out
}

pub fn features(a: &FeaturesArgs) -> Result<()> {
    let m = load(&a.dataset, &a.shape)?;
    let sources = if a.sources.is_empty() {
        vec![Source::Tn]
    } else {
        unique_sources(&a.sources)
    };
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    for s in sources {
        let x = feature_matrix(&m, s)?;
        let path = a.out.join(format!("features_{}.csv", s.short_name()));
        let mut w = create(&path)?;
        x.write_csv(&mut w)?;
        w.flush()?;
        println!("wrote {} rows to {}", x.n_rows(), path.display());
    }
    Ok(())
}

pub fn evaluate(a: &EvaluateArgs) -> Result<()> {
    let (m, name) = match (&a.dataset, a.profile) {
        (Some(dir), _) => (
            load(dir, &a.shape)?,
            a.name.clone().unwrap_or_else(|| dir_name(dir)),
        ),
        (None, Some(profile)) => {
            if a.n_per_class == 0 {
                bail!("--n-per-class must be at least 1");
            }
            let m = generate_synthetic_dataset(&SynthConfig {
                n_per_class: a.n_per_class,
                profile,
                seed: a.seed,
            })
            .reshape(a.shape.form, a.shape.tier)?;
            (
                m,
                a.name.clone().unwrap_or_else(|| profile.name().to_string()),
            )
        }
        (None, None) => bail!("either --dataset or --profile is required"),
    };
    let variants: Vec<Variant> = unique_sources(&a.sources)
        .into_iter()
        .filter_map(|s| match s {
            Source::Tn => None,
            Source::Mapped(v) => Some(v),
        })
        .collect();

    let cfg = ForestConfig {
        n_trees: a.trees,
        seed: a.seed,
        ..ForestConfig::default()
    };
    let opts = EvalOptions {
        n_repeats: a.repeats,
        train_fraction: a.train_fraction,
        ..EvalOptions::default()
    };

    let tn = feature_matrix(&m, Source::Tn)?;
    let mut runs = vec![("tn".to_string(), run_eval(&tn, &cfg, &opts)?)];
    for v in variants {
        let fused = tn.concat(&feature_matrix(&m, Source::Mapped(v))?)?;
        let fused_opts = EvalOptions {
            projection_dim: Some(tn.width()),
            ..opts.clone()
        };
        runs.push((
            format!("tn+{}", v.short_name()),
            run_eval(&fused, &cfg, &fused_opts)?,
        ));
    }

    let records = runs
        .into_iter()
        .map(|(variant, s)| EvalRecord {
            dataset: name.clone(),
            variant,
            mean_f1: s.mean_f1,
            std_f1: s.std_f1,
            n_repeats: s.n_repeats,
            percent_increase: None,
            seed: a.seed,
        })
        .collect();
    let report = EvalReport::new("tn", records)?;

    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let text_path = a.out.join(REPORT_TEXT);
    fs::write(&text_path, report.to_text()?)
        .with_context(|| format!("writing {}", text_path.display()))?;
    let mut w = create(&a.out.join(REPORT_CSV))?;
    report.write_csv(&mut w)?;
    w.flush()?;

    println!(
        "{:<12} {:<10} {:>8} {:>8} {:>10}",
        "dataset", "variant", "mean_f1", "std_f1", "%increase"
    );
    for r in &report.records {
        println!(
            "{:<12} {:<10} {:>8.4} {:>8.4} {:>10.2}",
            r.dataset,
            r.variant,
            r.mean_f1,
            r.std_f1,
            r.percent_increase.unwrap_or(0.0)
        );
    }
    Ok(())
}
