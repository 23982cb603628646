//! Command-line surface: validation, info tables, isomorphism tests,
//! deformation checks, rationalization, the orbifold pipeline, construction
//! data, level-set sampling (CSV), and SVG plots.
//!
//! Exit codes: 0 on success (including a definite "not isomorphic" answer),
//! 1 on semantic failure (invalid datum, unmet preconditions), 2 on parse
//! errors (malformed documents).

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num::{BigInt, BigRational, One, Signed};
use serde_json::json;

use quasipoly::decorated::DecoratedPolytope;
use quasipoly::deformation::{rationalize, to_orbifold_pipeline};
use quasipoly::delzant::{compile, sample_level_set};
use quasipoly::isomorphism::{are_isomorphic, IsoError, IsoWitness};
use quasipoly::scalar::FieldElement;

mod document;
mod svg;

use document::{
    element_to_strings, emit_document, family_to_document, matrix_to_columns, parse_document,
    to_decorated, to_family, Document,
};

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Semantic(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Semantic(m) => write!(f, "error: {m}"),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Doc,
}

#[derive(Parser)]
#[command(
    name = "quasipoly",
    about = "Exact toolkit for quasilattices and decorated moment polytopes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check all structural invariants of a document and classify it
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Classification, facet labels, and the per-face isotropy table
    Info {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Decide whether two documents are isomorphic; prints a witness if so
    Isom {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Validate a deformation family on a sample grid
    DeformValidate {
        file: PathBuf,
        /// Number of sample parameters, spread evenly over [0, 1]
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Deform the datum to one with standard-lattice image, bounding the
    /// denominators of the rounded data
    Rationalize {
        file: PathBuf,
        /// Largest denominator allowed in the rounded generators/offsets
        #[arg(long)]
        denom: u64,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Escalate rationalize until a valid family exists; report the endpoint
    Orbifoldize {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Emit the cut-construction data (normal map, kernel, quadrics)
    Delzant {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Sample the level set; emits CSV with 12-digit decimal approximations
    Sample {
        file: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Render a 2-dimensional polytope (or family frame strip) as SVG
    Plot {
        file: PathBuf,
        /// Output path; stdout when omitted
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Frame count for documents with a deformation section
        #[arg(long, default_value_t = 5)]
        frames: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Semantic(_) => ExitCode::from(1),
                CliError::Parse(_) => ExitCode::from(2),
            }
        }
    }
}

fn load(path: &PathBuf) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_document(&text)
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate { file, format } => cmd_validate(&load(&file)?, format),
        Command::Info { file, format } => cmd_info(&load(&file)?, format),
        Command::Isom {
            file1,
            file2,
            format,
        } => cmd_isom(&load(&file1)?, &load(&file2)?, format),
        Command::DeformValidate {
            file,
            samples,
            format,
        } => cmd_deform_validate(&load(&file)?, samples, format),
        Command::Rationalize {
            file,
            denom,
            format,
        } => cmd_rationalize(&load(&file)?, denom, format),
        Command::Orbifoldize { file, format } => cmd_orbifoldize(&load(&file)?, format),
        Command::Delzant { file, format } => cmd_delzant(&load(&file)?, format),
        Command::Sample { file, count, seed } => cmd_sample(&load(&file)?, count, seed),
        Command::Plot {
            file,
            output,
            frames,
        } => cmd_plot(&load(&file)?, output.as_ref(), frames),
    }
}

fn cmd_validate(doc: &Document, format: Format) -> Result<(), CliError> {
    let d = to_decorated(doc, None)?;
    let report = d.validate();
    let classification = if report.is_valid() {
        Some(
            d.classify()
                .map_err(|e| CliError::Semantic(e.to_string()))?,
        )
    } else {
        None
    };
    match format {
        Format::Doc => {
            let out = json!({
                "valid": report.is_valid(),
                "classification": classification.as_ref().map(|c| c.to_string()),
                "checks": report.checks.iter().map(|c| json!({
                    "name": c.name,
                    "passed": c.passed,
                    "detail": c.detail,
                })).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Format::Human => {
            print!("{report}");
            if let Some(c) = &classification {
                println!("valid; classification: {c}");
            }
            if doc.deformation.is_some() {
                println!("note: document also has a deformation section; see deform-validate");
            }
        }
    }
    if report.is_valid() {
        Ok(())
    } else {
        Err(CliError::Semantic(format!(
            "invalid datum ({})",
            report
                .first_failure()
                .map(|c| c.name.clone())
                .unwrap_or_default()
        )))
    }
}

fn require_valid(d: &DecoratedPolytope) -> Result<(), CliError> {
    let report = d.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(CliError::Semantic(format!(
            "invalid datum: {}",
            report
                .first_failure()
                .map(|c| format!("{}: {}", c.name, c.detail))
                .unwrap_or_default()
        )))
    }
}

fn cmd_info(doc: &Document, format: Format) -> Result<(), CliError> {
    let d = to_decorated(doc, None)?;
    require_valid(&d)?;
    let classification = d
        .classify()
        .map_err(|e| CliError::Semantic(e.to_string()))?;
    let labels = d.lt_labels();
    let faces = d
        .face_lattice()
        .map_err(|e| CliError::Semantic(e.to_string()))?;
    let rows: Vec<(Vec<usize>, usize, String)> = faces
        .iter()
        .map(|f| (f.active_set.clone(), f.dim, d.face_isotropy(f).to_string()))
        .collect();
    match format {
        Format::Doc => {
            let out = json!({
                "classification": classification.to_string(),
                "global_isotropy": d.lattice().kernel().to_string(),
                "facet_labels": labels.as_ref().ok().map(|ls| {
                    ls.iter().map(|l| l.to_string()).collect::<Vec<_>>()
                }),
                "faces": rows.iter().map(|(active, dim, iso)| json!({
                    "active_set": active,
                    "dim": dim,
                    "isotropy": iso,
                })).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Format::Human => {
            println!("classification: {classification}");
            println!("global isotropy: {}", d.lattice().kernel());
            match &labels {
                Ok(ls) => println!(
                    "facet labels: ({})",
                    ls.iter()
                        .map(|l| l.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
                Err(e) => println!("facet labels: not defined ({e})"),
            }
            println!("faces (dim | active facets | isotropy):");
            for (active, dim, iso) in &rows {
                let set = if active.is_empty() {
                    "interior".to_string()
                } else {
                    format!(
                        "{{{}}}",
                        active
                            .iter()
                            .map(|i| i.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    )
                };
                println!("  {dim} | {set:<12} | {iso}");
            }
        }
    }
    Ok(())
}

fn witness_json(w: &IsoWitness) -> serde_json::Value {
    json!({
        "sigma": w.sigma,
        "t_rows": (0..w.t.rows()).map(|i| {
            (0..w.t.cols()).map(|j| element_to_strings(w.t.get(i, j))).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
        "c": w.c.iter().map(element_to_strings).collect::<Vec<_>>(),
        "kernel_iso_note": w.kernel_iso_note,
    })
}

fn cmd_isom(doc1: &Document, doc2: &Document, format: Format) -> Result<(), CliError> {
    // embed a rational document into the other document's field if needed
    let f1 = document::build_field(&doc1.field)?;
    let f2 = document::build_field(&doc2.field)?;
    let (a, b) = if f1.same_field(&f2) {
        (to_decorated(doc1, None)?, to_decorated(doc2, Some(&f1))?)
    } else if f1.is_rational_field() {
        (to_decorated(doc1, Some(&f2))?, to_decorated(doc2, None)?)
    } else if f2.is_rational_field() {
        (to_decorated(doc1, None)?, to_decorated(doc2, Some(&f1))?)
    } else {
        return Err(CliError::Semantic(
            "the two documents use different non-rational fields; compare them over a common field"
                .into(),
        ));
    };
    let witness = match are_isomorphic(&a, &b) {
        Ok(w) => w,
        Err(IsoError::FacetLimit(d)) => {
            return Err(CliError::Semantic(format!(
                "facet count {d} exceeds the isomorphism search limit"
            )))
        }
        Err(IsoError::InvalidInput(m)) => return Err(CliError::Semantic(m)),
    };
    match format {
        Format::Doc => {
            let out = json!({
                "isomorphic": witness.is_some(),
                "witness": witness.as_ref().map(witness_json),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Format::Human => match &witness {
            None => println!("isomorphic: no"),
            Some(w) => {
                println!("isomorphic: yes");
                println!("facet bijection: {:?}", w.sigma);
                for i in 0..w.t.rows() {
                    let row: Vec<String> =
                        (0..w.t.cols()).map(|j| w.t.get(i, j).to_string()).collect();
                    println!("T row {i}: {}", row.join(" "));
                }
                println!(
                    "translation c: {}",
                    w.c.iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                );
                println!("{}", w.kernel_iso_note);
            }
        },
    }
    Ok(())
}

fn cmd_deform_validate(doc: &Document, samples: usize, format: Format) -> Result<(), CliError> {
    let family = to_family(doc)?;
    match family.validate_family(samples) {
        Ok(report) => {
            match format {
                Format::Doc => {
                    let out = json!({
                        "valid": true,
                        "samples": report.samples,
                        "vertex_sets": report.vertex_sets,
                        "start_classification": report.start_classification.to_string(),
                        "end_classification": report.end_classification.to_string(),
                    });
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                }
                Format::Human => {
                    println!(
                        "family valid at {} samples; constant face lattice with {} vertices",
                        report.samples,
                        report.vertex_sets.len()
                    );
                    println!("start classification: {}", report.start_classification);
                    println!("end classification: {}", report.end_classification);
                }
            }
            Ok(())
        }
        Err(e) => Err(CliError::Semantic(e.to_string())),
    }
}

fn cmd_rationalize(doc: &Document, denom: u64, format: Format) -> Result<(), CliError> {
    if denom == 0 {
        return Err(CliError::Semantic("--denom must be at least 1".into()));
    }
    let d = to_decorated(doc, None)?;
    let family = rationalize(&d, denom).map_err(|e| CliError::Semantic(e.to_string()))?;
    let out_doc = family_to_document(&family, &doc.field);
    match format {
        Format::Doc => print!("{}", emit_document(&out_doc)),
        Format::Human => {
            println!("rationalized with denominator bound {denom}");
            let end = family.end();
            println!("endpoint generators (columns):");
            for j in 0..end.generator_matrix().cols() {
                let col: Vec<String> = (0..end.generator_matrix().rows())
                    .map(|i| end.generator_matrix().get(i, j).to_string())
                    .collect();
                println!("  g{j} = ({})", col.join(", "));
            }
            let endpoint = family
                .evaluate(&BigRational::one())
                .map_err(|e| CliError::Semantic(e.to_string()))?;
            let class = endpoint
                .classify()
                .map_err(|e| CliError::Semantic(e.to_string()))?;
            println!("endpoint classification: {class}");
        }
    }
    Ok(())
}

fn cmd_orbifoldize(doc: &Document, format: Format) -> Result<(), CliError> {
    let d = to_decorated(doc, None)?;
    let report = to_orbifold_pipeline(&d).map_err(|e| CliError::Semantic(e.to_string()))?;
    match format {
        Format::Doc => {
            let out = json!({
                "denom_bound": report.denom_bound,
                "endpoint_classification": report.endpoint_classification.to_string(),
                "global_isotropy": report.endpoint_global_isotropy.to_string(),
                "family": serde_json::to_value(family_to_document(&report.family, &doc.field)).unwrap(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Format::Human => {
            println!("denominator bound: {}", report.denom_bound);
            println!(
                "endpoint: {}, global isotropy {}",
                report.endpoint_classification.name(),
                report.endpoint_global_isotropy
            );
        }
    }
    Ok(())
}

fn cmd_delzant(doc: &Document, format: Format) -> Result<(), CliError> {
    let d = to_decorated(doc, None)?;
    let data = compile(&d).map_err(|e| CliError::Semantic(e.to_string()))?;
    match format {
        Format::Doc => {
            let out = json!({
                "dimension": data.dim(),
                "facet_count": data.facet_count(),
                "lambda_columns": matrix_to_columns(data.lambda()),
                "offsets": data.offsets().iter().map(element_to_strings).collect::<Vec<_>>(),
                "kernel_basis": data.kernel_basis().iter().map(|v| {
                    v.iter().map(element_to_strings).collect::<Vec<_>>()
                }).collect::<Vec<_>>(),
                "quadrics": data.quadrics().iter().map(|q| json!({
                    "coeffs": q.coeffs.iter().map(element_to_strings).collect::<Vec<_>>(),
                    "rhs": element_to_strings(&q.rhs),
                })).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Format::Human => {
            println!(
                "normal map: {} facets in dimension {}",
                data.facet_count(),
                data.dim()
            );
            for j in 0..data.facet_count() {
                let col: Vec<String> = (0..data.dim())
                    .map(|i| data.lambda().get(i, j).to_string())
                    .collect();
                println!(
                    "  lambda_{j} = ({})  offset {}",
                    col.join(", "),
                    data.offsets()[j]
                );
            }
            println!("kernel basis ({} vectors):", data.kernel_basis().len());
            for v in data.kernel_basis() {
                let coords: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                println!("  ({})", coords.join(", "));
            }
            println!("level-set relations (in t_j = L_j - <xi, lambda_j>):");
            for q in data.quadrics() {
                let lhs: Vec<String> = q
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| format!("{c}*t{j}"))
                    .collect();
                println!("  {} = {}", lhs.join(" + "), q.rhs);
            }
        }
    }
    Ok(())
}

/// Decimal form with exactly 12 fractional digits, rounded half away from
/// zero; deterministic because the upstream approximation is exact.
fn decimal12_rational(r: &BigRational) -> String {
    let scale = BigInt::from(10u64).pow(12);
    let scaled = (r * BigRational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let abs = scaled.abs();
    let int = &abs / &scale;
    let frac = &abs % &scale;
    format!("{sign}{int}.{:0>12}", frac.to_string())
}

fn decimal12(x: &FieldElement) -> String {
    let eps = BigRational::new(BigInt::one(), BigInt::from(10u64).pow(14));
    decimal12_rational(&x.approx(&eps))
}

fn cmd_sample(doc: &Document, count: usize, seed: u64) -> Result<(), CliError> {
    let d = to_decorated(doc, None)?;
    let data = compile(&d).map_err(|e| CliError::Semantic(e.to_string()))?;
    let samples =
        sample_level_set(&data, count, seed).map_err(|e| CliError::Semantic(e.to_string()))?;
    let mut header = vec!["seed".to_string(), "index".to_string()];
    header.extend((1..=data.facet_count()).map(|j| format!("t{j}")));
    header.extend((1..=data.dim()).map(|i| format!("xi{i}")));
    header.push("exact".to_string());
    println!("{}", header.join(","));
    for (idx, s) in samples.iter().enumerate() {
        let mut row = vec![seed.to_string(), idx.to_string()];
        row.extend(s.t.iter().map(decimal12));
        row.extend(s.xi.iter().map(decimal12_rational));
        row.push(s.exact.to_string());
        println!("{}", row.join(","));
    }
    Ok(())
}

fn cmd_plot(doc: &Document, output: Option<&PathBuf>, frames: usize) -> Result<(), CliError> {
    let svg = if doc.deformation.is_some() {
        let family = to_family(doc)?;
        svg::plot_family(&family, frames)?
    } else {
        let d = to_decorated(doc, None)?;
        svg::plot_polytope(&d)?
    };
    match output {
        Some(path) => std::fs::write(path, svg)
            .map_err(|e| CliError::Semantic(format!("{}: {e}", path.display()))),
        None => {
            print!("{svg}");
            Ok(())
        }
    }
}
