//! `spheres-lab`: runs scene files through the equirep engine.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use equirep::algebra::{cohomology, homology};
use equirep::bredon::{bredon_cohomology, bredon_homology, TrivialModule};
use equirep::duality::verify_lefschetz_capped;
use equirep::functor::{
    check_bounds, check_cobar_bounds, group_homology, tor_over_category, AbFunctor, FiniteCategory,
    Variance,
};
use equirep::g_complex::{singular_subcomplex, GComplex, Subcomplex};
use equirep::lab::{
    emit_many, key_lemma_experiment, orbit_filtration, parse_coefficients, DualitySubcomplex,
    ExperimentBlock, ExperimentConfig, Format, Scene, SceneFile,
};
use equirep::perm_group::conjugacy_classes_of_subgroups;
use equirep::Subgroup;

#[derive(Parser)]
#[command(
    name = "spheres-lab",
    version,
    about = "Equivariant simplicial experiments from scene files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order and conjugacy classes of subgroups of the scene group.
    Group(Common),
    /// Builds every complex and reports f-vectors and regularity.
    Build(Common),
    /// Simplicial homology and cohomology.
    Homology(Common),
    /// Bredon homology and cohomology with trivial coefficients.
    Bredon(Common),
    /// Duality pipeline for the scene's duality experiments.
    Duality(Common),
    /// Group homology of the scene group by the bar and cobar routes.
    Tor(Common),
    /// Orbit-type filtrations and their fixed-point identities.
    Filtration(Common),
    /// Join stabilization experiments.
    Stabilize(Common),
}

#[derive(Args)]
struct Common {
    /// Scene file (JSON, schema equirep/1).
    scene: PathBuf,
    /// Restrict to one named complex.
    #[arg(long)]
    complex: Option<String>,
    /// Restrict to one named experiment.
    #[arg(long)]
    experiment: Option<String>,
    /// Coefficient groups such as Z, Z/2 or "Z + Z/2" (repeat or comma-separate).
    #[arg(long, value_delimiter = ',')]
    coeff: Vec<String>,
    #[arg(long)]
    kmax: Option<usize>,
    /// Inclusive range of join powers: `a..b` or a single `n`.
    #[arg(long)]
    n_range: Option<String>,
    #[arg(long)]
    max_simplices: Option<usize>,
    /// Compare the output byte-for-byte with this file.
    #[arg(long)]
    golden: Option<PathBuf>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
    /// Print elapsed time to stderr.
    #[arg(long)]
    timing: bool,
}

/// Rendered output and whether every verdict in it passed.
struct Report {
    json: Value,
    csv: Vec<Vec<String>>,
    pass: bool,
    gated: bool,
}

impl Report {
    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json)? + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in &self.csv {
                    w.write_record(r)?;
                }
                Ok(String::from_utf8(
                    w.into_inner().map_err(|e| anyhow!(e.to_string()))?,
                )?)
            }
        }
    }
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let b = b.trim_start_matches('=');
        Ok((a.trim().parse()?, b.trim().parse()?))
    } else {
        let n = s.parse()?;
        Ok((n, n))
    }
}

fn load(path: &Path, cap: Option<usize>) -> Result<Scene> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = SceneFile::parse(&text)?;
    Ok(match cap {
        Some(c) => file.load_capped(c)?,
        None => file.load()?,
    })
}

fn selected<'a>(
    scene: &'a Scene,
    only: &Option<String>,
) -> Result<Vec<(&'a String, &'a Arc<GComplex>)>> {
    match only {
        Some(name) => {
            let (k, v) = scene
                .complexes
                .get_key_value(name)
                .ok_or_else(|| anyhow!("unknown complex {name:?}"))?;
            Ok(vec![(k, v)])
        }
        None => Ok(scene.complexes.iter().collect()),
    }
}

fn coefficients(list: &[String], default: &[&str]) -> Result<Vec<TrivialModule>> {
    if list.is_empty() {
        Ok(default
            .iter()
            .map(|s| s.parse())
            .collect::<equirep::Result<_>>()?)
    } else {
        Ok(parse_coefficients(list)?)
    }
}

fn row<I: IntoIterator<Item = S>, S: ToString>(items: I) -> Vec<String> {
    items.into_iter().map(|s| s.to_string()).collect()
}

fn cmd_group(scene: &Scene) -> Report {
    let g = &scene.group;
    let classes = conjugacy_classes_of_subgroups(g);
    let mut csv = vec![row(["class", "order", "conjugates"])];
    let list: Vec<Value> = classes
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            csv.push(row([
                classes.label(i),
                c.representative.order().to_string(),
                c.conjugates.len().to_string(),
            ]));
            json!({
                "label": classes.label(i),
                "order": c.representative.order(),
                "conjugates": c.conjugates.len(),
                "representative": c.representative.members(),
            })
        })
        .collect();
    let gens: Vec<Vec<u32>> = g
        .generators()
        .iter()
        .map(|&i| g.element(i).images().to_vec())
        .collect();
    Report {
        json: json!({ "order": g.order(), "degree": g.degree(), "abelian": g.is_abelian(), "generators": gens, "classes": list }),
        csv,
        pass: true,
        gated: false,
    }
}

fn cmd_build(scene: &Scene, c: &Common) -> Result<Report> {
    let mut csv = vec![row([
        "complex",
        "dim",
        "f_vector",
        "fixed_sets_full",
        "pointwise_fixing",
        "quotient_safe",
        "free",
    ])];
    let mut out = serde_json::Map::new();
    for (name, x) in selected(scene, &c.complex)? {
        let r = x.validate();
        let fv = x
            .f_vector()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        csv.push(row([
            name.clone(),
            x.dim().to_string(),
            fv,
            r.fixed_sets_full.to_string(),
            r.pointwise_fixing.to_string(),
            r.quotient_safe.to_string(),
            x.is_free().to_string(),
        ]));
        let mut v = json!({ "dim": x.dim(), "f_vector": x.f_vector(), "regularity": r, "free": x.is_free() });
        if c.complex.is_some() {
            v["spec"] = serde_json::to_value(x.to_spec())?;
        }
        out.insert(name.clone(), v);
    }
    Ok(Report {
        json: Value::Object(out),
        csv,
        pass: true,
        gated: false,
    })
}

fn cmd_homology(scene: &Scene, c: &Common, bredon: bool) -> Result<Report> {
    let coeffs = coefficients(&c.coeff, &["Z"])?;
    let mut csv = vec![row(["complex", "coefficient", "kind", "degree", "group"])];
    let mut out = serde_json::Map::new();
    for (name, x) in selected(scene, &c.complex)? {
        let mut per = serde_json::Map::new();
        for m in &coeffs {
            let (h, co) = if bredon {
                (bredon_homology(x, None, m)?, bredon_cohomology(x, None, m)?)
            } else {
                let ch = x.chain_complex();
                (homology(&ch, &m.underlying), cohomology(&ch, &m.underlying))
            };
            for (kind, v) in [("homology", &h), ("cohomology", &co)] {
                for (d, g) in v.iter().enumerate() {
                    csv.push(row([
                        name.clone(),
                        m.to_string(),
                        kind.into(),
                        d.to_string(),
                        g.to_string(),
                    ]));
                }
            }
            per.insert(m.to_string(), json!({ "homology": h, "cohomology": co }));
        }
        out.insert(name.clone(), Value::Object(per));
    }
    Ok(Report {
        json: Value::Object(out),
        csv,
        pass: true,
        gated: false,
    })
}

fn cmd_duality(scene: &Scene, c: &Common) -> Result<Report> {
    let mut csv = vec![row([
        "experiment",
        "coefficient",
        "p",
        "cohomology_b",
        "homology_b_d",
        "homology_y_ubar",
        "homology_b",
        "cohomology_b_d",
        "cohomology_y_ubar",
        "holds",
    ])];
    let mut out = serde_json::Map::new();
    let mut pass = true;
    for e in &scene.file.experiments {
        let ExperimentBlock::Duality {
            name,
            complex,
            subcomplex,
            coefficients: cs,
            max_simplices,
        } = e
        else {
            continue;
        };
        if c.experiment.as_ref().is_some_and(|x| x != name) {
            continue;
        }
        let y = scene.complex(complex)?;
        let a = match subcomplex {
            DualitySubcomplex::Empty => Subcomplex::empty(y),
            DualitySubcomplex::Singular => singular_subcomplex(y, &Subgroup::trivial(y.group()))?,
        };
        let coeffs = if c.coeff.is_empty() {
            parse_coefficients(cs)?
        } else {
            parse_coefficients(&c.coeff)?
        };
        let report =
            verify_lefschetz_capped(y, &a, &coeffs, c.max_simplices.unwrap_or(*max_simplices))?;
        pass &= report.holds();
        for cr in &report.coefficients {
            for r in &cr.rows {
                csv.push(row([
                    name.clone(),
                    cr.coefficient.clone(),
                    r.p.to_string(),
                    r.cohomology_b.to_string(),
                    r.homology_b_d.to_string(),
                    r.homology_y_ubar.to_string(),
                    r.homology_b.to_string(),
                    r.cohomology_b_d.to_string(),
                    r.cohomology_y_ubar.to_string(),
                    (r.duality && r.excision && r.dual_duality && r.dual_excision).to_string(),
                ]));
            }
        }
        let mut v = serde_json::to_value(&report)?;
        v["holds"] = json!(report.holds());
        out.insert(name.clone(), v);
    }
    Ok(Report {
        json: Value::Object(out),
        csv,
        pass,
        gated: false,
    })
}

fn cmd_tor(scene: &Scene, c: &Common) -> Result<Report> {
    let coeffs = coefficients(&c.coeff, &["Z", "Z/2", "Z/3"])?;
    let k_max = c.kmax.unwrap_or(3);
    let g = &scene.group;
    let cat = FiniteCategory::from_group(g);
    let mut csv = vec![row([
        "coefficient",
        "k",
        "bar",
        "cobar",
        "agree",
        "order_bound",
        "rank_bound",
    ])];
    let mut out = serde_json::Map::new();
    let mut pass = true;
    for m in &coeffs {
        let bar = group_homology(g, &m.underlying, k_max)?;
        let f = AbFunctor::constant(&cat, Variance::Contra, &"Z".parse()?);
        let gm = AbFunctor::constant(&cat, Variance::Co, &m.underlying);
        let cobar = tor_over_category(&cat, &f, &gm, k_max)?;
        let bounds = check_cobar_bounds(&cat, &f, &gm, &cobar);
        let group_bounds = check_bounds(&bar, g.order(), &m.underlying);
        let agree = bar == cobar;
        pass &= agree
            && group_bounds
            && bounds
                .iter()
                .all(|b| b.rank_bound && b.order_bound != Some(false));
        for (k, b) in bounds.iter().enumerate() {
            let ob = b.order_bound.map_or("n/a".to_string(), |x| x.to_string());
            csv.push(row([
                m.to_string(),
                k.to_string(),
                bar[k].to_string(),
                cobar[k].to_string(),
                (bar[k] == cobar[k]).to_string(),
                ob,
                b.rank_bound.to_string(),
            ]));
        }
        out.insert(
            m.to_string(),
            json!({ "bar": bar, "cobar": cobar, "agree": agree, "cobar_bounds": bounds, "group_bounds": group_bounds }),
        );
    }
    Ok(Report {
        json: Value::Object(out),
        csv,
        pass,
        gated: false,
    })
}

fn cmd_filtration(scene: &Scene, c: &Common) -> Result<Report> {
    let mut csv = vec![row([
        "complex",
        "s",
        "class",
        "f_vector",
        "fixed_identity",
        "singular_identity",
    ])];
    let mut out = serde_json::Map::new();
    let mut pass = true;
    for (name, x) in selected(scene, &c.complex)? {
        let f = orbit_filtration(x)?;
        pass &= f.identities_hold();
        for s in 0..f.layers.len() {
            let fv = f.layers[s]
                .f_vector()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            csv.push(row([
                name.clone(),
                (s + 1).to_string(),
                f.labels[s].clone(),
                fv,
                f.fixed_identity[s].to_string(),
                f.singular_identity[s].to_string(),
            ]));
        }
        out.insert(name.clone(), f.to_json());
    }
    Ok(Report {
        json: Value::Object(out),
        csv,
        pass,
        gated: false,
    })
}

fn cmd_stabilize(scene: &Scene, c: &Common, format: Format) -> Result<(String, bool, bool)> {
    let mut tables = Vec::new();
    for e in &scene.file.experiments {
        let ExperimentBlock::Stabilize {
            name,
            complex,
            subgroup,
            n_range,
            k_max,
            coefficients: cs,
            max_simplices,
        } = e
        else {
            continue;
        };
        if c.experiment.as_ref().is_some_and(|x| x != name) {
            continue;
        }
        let cfg = ExperimentConfig {
            n_range: match &c.n_range {
                Some(r) => parse_range(r)?,
                None => *n_range,
            },
            k_max: c.kmax.unwrap_or(*k_max),
            coefficients: if c.coeff.is_empty() {
                parse_coefficients(cs)?
            } else {
                parse_coefficients(&c.coeff)?
            },
            max_simplices: c.max_simplices.unwrap_or(*max_simplices),
        };
        let x = scene.complex(complex)?;
        let k = scene.subgroup(subgroup)?;
        tables.push((name.clone(), key_lemma_experiment(x, &k, &cfg)?));
    }
    if tables.is_empty() {
        bail!("no stabilize experiment selected");
    }
    let pass = tables.iter().all(|(_, t)| t.passes());
    let gated = tables.iter().any(|(_, t)| t.gated());
    Ok((emit_many(&tables, format)?, pass, gated))
}

fn run(cli: Cli) -> Result<u8> {
    let start = Instant::now();
    let (c, kind) = match &cli.command {
        Command::Group(c) => (c, "group"),
        Command::Build(c) => (c, "build"),
        Command::Homology(c) => (c, "homology"),
        Command::Bredon(c) => (c, "bredon"),
        Command::Duality(c) => (c, "duality"),
        Command::Tor(c) => (c, "tor"),
        Command::Filtration(c) => (c, "filtration"),
        Command::Stabilize(c) => (c, "stabilize"),
    };
    let format: Format = c.format.parse()?;
    let scene = load(&c.scene, c.max_simplices)?;
    let (text, pass, gated) = match &cli.command {
        Command::Stabilize(_) => cmd_stabilize(&scene, c, format)?,
        cmd => {
            let r = match cmd {
                Command::Group(_) => cmd_group(&scene),
                Command::Build(_) => cmd_build(&scene, c)?,
                Command::Homology(_) => cmd_homology(&scene, c, false)?,
                Command::Bredon(_) => cmd_homology(&scene, c, true)?,
                Command::Duality(_) => cmd_duality(&scene, c)?,
                Command::Tor(_) => cmd_tor(&scene, c)?,
                Command::Filtration(_) => cmd_filtration(&scene, c)?,
                Command::Stabilize(_) => unreachable!(),
            };
            (r.render(format)?, r.pass, r.gated)
        }
    };
    match &c.out {
        Some(p) => std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    if c.timing {
        eprintln!("{kind}: {:.3}s", start.elapsed().as_secs_f64());
    }
    if let Some(g) = &c.golden {
        let want = std::fs::read_to_string(g)
            .with_context(|| format!("reading golden file {}", g.display()))?;
        if want != text {
            eprintln!("output differs from golden file {}", g.display());
            return Ok(1);
        }
    }
    Ok(if gated {
        2
    } else if pass {
        0
    } else {
        1
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            // caps, hypothesis gates and malformed input all stop the run
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
