//! Subcommand bodies. Each one builds a [`Report`] from library calls.

use std::collections::BTreeSet;
use std::path::Path;

use digifix::generate::generate;
use digifix::spectrum::{fixed_point_spectrum_with, pull_index_with, pull_indices};
use digifix::{
    articulation_fixed_points, fix_structure, forced_fixed_points, homotopy_class, homotopy_classes, is_deformation_retraction,
    is_rigid_map, lasso_rigidity_certificate, nminus1_criterion, save_image, find_retraction, Deformation,
    DigitalImage, Error, FixStructure, HomotopyOptions, LassoCertificate, LassoOptions, Report, Result, SearchOptions,
    SelfMap, Spectrum,
};
use serde_json::{json, Value};

/// Budgets shared by all commands of one invocation.
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub search: SearchOptions,
    pub homotopy: HomotopyOptions,
    pub lasso: LassoOptions,
}

impl Settings {
    pub fn with_budget(node_budget: u64) -> Self {
        Settings {
            search: SearchOptions { node_budget },
            homotopy: HomotopyOptions {
                node_budget,
                ..HomotopyOptions::default()
            },
            lasso: LassoOptions {
                node_budget,
                ..LassoOptions::default()
            },
        }
    }
}

impl Default for Settings {
    fn default() -> Self {
        Settings::with_budget(SearchOptions::default().node_budget)
    }
}

fn values(s: &Spectrum) -> Value {
    json!(s.values())
}

pub fn gen(family: &str, params: &[i64], out: &Path) -> Result<Report> {
    let image = generate(family, params)?;
    save_image(out, &image)?;
    Ok(Report::new(
        "gen",
        Some(&image),
        json!({
            "family": family,
            "params": params,
            "size": image.len(),
            "edges": image.edge_count(),
            "name": image.name(),
        }),
    ))
}

pub fn spectrum(image: &DigitalImage, s: &Settings) -> Result<Report> {
    let (f, stats) = fixed_point_spectrum_with(image, &s.search)?;
    Ok(Report::new("spectrum", Some(image), json!({"size": image.len(), "spectrum": values(&f)})).with_stats(stats))
}

/// `S(f)`, failing with a budget error unless the whole class was explored.
pub fn sfix(f: &SelfMap<'_>, s: &Settings) -> Result<Report> {
    let class = homotopy_class(f, &s.homotopy)?;
    if !class.complete {
        return Err(Error::BudgetExceeded {
            budget: s.homotopy.max_maps as u64,
        });
    }
    Ok(Report::new(
        "sfix",
        Some(f.image()),
        json!({
            "fixed_points": f.fix_count(),
            "spectrum": values(&class.fix_counts),
            "min": class.min_fixed(),
            "max": class.max_fixed(),
            "class_size": class.size,
            "rigid": class.size == 1,
        }),
    ))
}

pub fn rigid(image: &DigitalImage, s: &Settings) -> Result<Report> {
    let rigid = is_rigid_map(&SelfMap::identity(image), &s.homotopy)?;
    Ok(Report::new("rigid", Some(image), json!({"rigid": rigid, "size": image.len()})))
}

pub fn pull(image: &DigitalImage, point: Option<usize>, s: &Settings) -> Result<Report> {
    let n = image.len();
    let result = match point {
        Some(x) => {
            let (p, witness) = pull_index_with(image, x, &s.search)?;
            json!({"point": x, "pull_index": p, "witness": witness.targets()})
        }
        None => {
            let p = pull_indices(image, &s.search)?;
            let least = p.iter().copied().min();
            // counts strictly between #X - min P and #X cannot be realised
            let excluded: Vec<usize> = least.map_or(Vec::new(), |m| (n + 1 - m..n).collect());
            json!({"pull_indices": p, "min": least, "excluded": excluded, "size": n})
        }
    };
    Ok(Report::new("pull", Some(image), result))
}

pub fn classes(image: &DigitalImage, s: &Settings) -> Result<Report> {
    let classes = homotopy_classes(image, &s.homotopy)?;
    let list: Vec<Value> = classes
        .iter()
        .map(|c| {
            json!({
                "representative": c.representative.targets(),
                "size": c.size,
                "spectrum": values(&c.fix_counts),
            })
        })
        .collect();
    Ok(Report::new("classes", Some(image), json!({"count": classes.len(), "classes": list})))
}

pub fn fixset(f: &SelfMap<'_>) -> Result<Report> {
    let structure = fix_structure(f)?;
    let forced = forced_fixed_points(f)?;
    let art = articulation_fixed_points(f)?;
    let (kind, components, pair) = match structure {
        FixStructure::Empty => ("empty", Vec::new(), None),
        FixStructure::Connected => ("connected", vec![f.fix().into_iter().collect()], None),
        FixStructure::Disconnected {
            components,
            antipodal_pair,
        } => ("disconnected", components, antipodal_pair.map(|(a, b)| [a, b])),
    };
    Ok(Report::new(
        "fixset",
        Some(f.image()),
        json!({
            "fixed": f.fix(),
            "structure": kind,
            "components": components,
            "antipodal_pair": pair,
            "forced": forced.forced,
            "confirmed": forced.confirmed && art.confirmed,
            "articulation_forced": art.forced,
        }),
    ))
}

pub fn lasso(image: &DigitalImage, s: &Settings) -> Result<Report> {
    let result = match lasso_rigidity_certificate(image, &s.lasso)? {
        LassoCertificate::Certified(lassos) => {
            let list: Vec<Value> = lassos
                .iter()
                .map(|l| json!({"start": [l.start().0, l.start().1], "path": l.path, "loop": l.loop_}))
                .collect();
            json!({"certified": true, "pairs": list.len(), "lassos": list})
        }
        LassoCertificate::NotCertified { missing } => {
            json!({"certified": false, "pairs": 2 * image.edge_count(), "missing": missing})
        }
    };
    Ok(Report::new("lasso", Some(image), result))
}

pub fn retract(image: &DigitalImage, subset: &BTreeSet<usize>, s: &Settings) -> Result<Report> {
    let witness = find_retraction(image, subset, &s.search)?;
    let result = match witness {
        None => json!({"subset": subset, "retract": false, "map": null, "deformation": null}),
        Some(w) => {
            let (deformation, steps) = match is_deformation_retraction(&w, &s.homotopy)? {
                Deformation::Yes(path) => ("yes", Some(path.steps.len() - 1)),
                Deformation::No => ("no", None),
                Deformation::Inconclusive => ("inconclusive", None),
            };
            json!({
                "subset": subset,
                "retract": true,
                "map": w.map.targets(),
                "deformation": deformation,
                "homotopy_steps": steps,
            })
        }
    };
    Ok(Report::new("retract", Some(image), result))
}

/// Whether `#X - 1` is a fixed point count, by the neighborhood criterion.
pub fn criterion(image: &DigitalImage) -> Result<Report> {
    let n = image.len();
    let applicable = n > 1 && image.is_connected();
    let witness = nminus1_criterion(image);
    Ok(Report::new(
        "criterion",
        Some(image),
        json!({
            "size": n,
            "applicable": applicable,
            "n_minus_1_in_spectrum": applicable.then_some(witness.is_some()),
            "witness": witness.map(|(a, b)| [a, b]),
        }),
    ))
}

/// Exit status for a library error: 3 for an exhausted budget, 2 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}
