//! `limsp`: command-line front end for finite limit spaces.
//!
//! Exit codes: 0 affirmative or success, 1 negative verdict, 2 indeterminate
//! (homotopy budget exhausted), 3 input error.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use limit_spaces::connectivity::{chain_between, components, connectedness, Connectedness, LocalCover};
use limit_spaces::constructions::{
    function_space, product, quotient_limit, quotient_pstop, subspace, QuotientSpec, SizeLimits,
};
use limit_spaces::covering::{search_atlas, AtlasDefect, LiftOutcome};
use limit_spaces::homotopy::HomotopySystem;
use limit_spaces::io::{
    from_cloud, from_edges, AtlasDocument, CoverDocument, Decoded, EdgeList, EdgeMode, MapDocument, ScaledCloud,
    SpaceDocument,
};
use limit_spaces::paths::{path_components, Walk};
use limit_spaces::universal::{build_fragment, pi1_probe, verify_universal, Pi1Verdict};
use limit_spaces::{Error, LimitSpace, PointSet};

#[derive(Parser)]
#[command(
    name = "limsp",
    version,
    about = "Finite limit spaces: constructions, connectedness, coverings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuotientMode {
    Limit,
    Pstop,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Directed,
    Symmetric,
}

#[derive(Subcommand)]
enum Command {
    /// Check a document and report its axioms and modifications.
    Validate {
        doc: PathBuf,
    },
    /// Print the closed form of a document.
    Close {
        doc: PathBuf,
    },
    /// Product of one or more spaces.
    Product {
        #[arg(required = true)]
        docs: Vec<PathBuf>,
    },
    /// Subspace on a comma-separated list of points.
    Subspace {
        doc: PathBuf,
        #[arg(long, value_delimiter = ',')]
        points: Vec<String>,
    },
    /// Quotient by a JSON object assigning a class label to every point.
    Quotient {
        doc: PathBuf,
        #[arg(long)]
        projection: PathBuf,
        #[arg(long, value_enum, default_value = "limit")]
        mode: QuotientMode,
    },
    /// The space C(X, Y) of continuous maps.
    FunctionSpace {
        domain: PathBuf,
        codomain: PathBuf,
    },
    Components {
        doc: PathBuf,
    },
    PathComponents {
        doc: PathBuf,
    },
    IsConnected {
        doc: PathBuf,
    },
    /// Chain of covering-system sets linking two points.
    Chain {
        doc: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// `balls`, `whole`, or a cover document.
        #[arg(long, default_value = "balls")]
        cover: String,
    },
    IsCovering {
        #[arg(long)]
        atlas: PathBuf,
    },
    /// Search an atlas for a map document.
    SearchAtlas {
        map: PathBuf,
    },
    LiftPath {
        #[arg(long)]
        atlas: PathBuf,
        /// Comma-separated points of the base.
        #[arg(long, value_delimiter = ',')]
        walk: Vec<String>,
        #[arg(long)]
        start: String,
    },
    LiftMap {
        #[arg(long)]
        atlas: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// `y0,e0`: base points of the domain and of the total space.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        basepoints: Vec<String>,
        #[arg(long, default_value = "balls")]
        cover: String,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },
    UniversalCover {
        doc: PathBuf,
        #[arg(long)]
        base: String,
        #[arg(long, default_value = "balls")]
        cover: String,
        #[arg(long, default_value_t = 8)]
        radius: usize,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        /// Longest loop of classes checked for simple connectivity.
        #[arg(long, default_value_t = 8)]
        loop_len: usize,
    },
    Pi1 {
        doc: PathBuf,
        #[arg(long)]
        base: String,
        #[arg(long, default_value = "balls")]
        cover: String,
        #[arg(long, default_value_t = 16)]
        max_len: usize,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },
    /// Space from a CSV point cloud: `id,x1,x2,…` per line.
    FromCloud {
        csv: PathBuf,
        #[arg(long)]
        scale: String,
    },
    /// Space from an edge list.
    FromEdges {
        edges: PathBuf,
        #[arg(long, value_enum, default_value = "symmetric")]
        mode: Mode,
    },
}

enum Verdict {
    Yes,
    No,
    Unknown,
}

struct Outcome {
    stdout: String,
    verdict: Verdict,
}

fn yes(stdout: String) -> Outcome {
    Outcome {
        stdout,
        verdict: Verdict::Yes,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<LimitSpace, Error> {
    SpaceDocument::parse(&read(path)?)?.space()
}

fn cover_sets(space: &LimitSpace, spec: &str) -> Result<Vec<PointSet>, Error> {
    match spec {
        "balls" => Ok(LocalCover::balls(space).sets),
        "whole" => Ok(LocalCover::whole(space).sets),
        path => CoverDocument::parse(&read(Path::new(path))?)?.decode(space),
    }
}

fn names(space: &LimitSpace, set: &PointSet) -> String {
    let mut v = space.carrier().names_of(set);
    v.sort();
    v.join(" ")
}

fn walk_text(space: &LimitSpace, w: &Walk) -> String {
    let mut s = space.name(w.start()).to_string();
    for (&v, f) in w.values()[1..].iter().zip(w.flags()) {
        s.push_str(&format!(" -{}- {}", f.letter(), space.name(v)));
    }
    s
}

fn defect_text(a: &limit_spaces::covering::CoveringAtlas, d: &AtlasDefect) -> String {
    let (e, b) = (a.total(), a.base());
    match d {
        AtlasDefect::MapNotContinuous { point } => format!("map not continuous at {}", e.name(*point)),
        AtlasDefect::MapNotSurjective { point } => format!("map misses {}", b.name(*point)),
        AtlasDefect::CoverNotLocal { point } => format!("charts do not form a covering system at {}", b.name(*point)),
        AtlasDefect::ChartSetOutsideBase { chart } => format!("chart {chart}: set outside the base"),
        AtlasDefect::ChartDomain { chart, point } => format!("chart {chart}: domain wrong at {}", e.name(*point)),
        AtlasDefect::ChartProjection { chart, point } => {
            format!("chart {chart}: first coordinate differs from p at {}", e.name(*point))
        }
        AtlasDefect::ChartNotBijective { chart } => format!("chart {chart}: not a bijection onto U x F"),
        AtlasDefect::ChartDiscontinuous { chart, point } => {
            format!("chart {chart}: not continuous at {}", e.name(*point))
        }
        AtlasDefect::ChartInverseDiscontinuous {
            chart,
            base_point,
            sheet,
        } => format!(
            "chart {chart}: inverse not continuous at ({}, {sheet})",
            b.name(*base_point)
        ),
        AtlasDefect::FiberNotDiscrete { point } => format!("fiber through {} is not discrete", e.name(*point)),
    }
}

fn run(cmd: Command) -> Result<Outcome, Error> {
    let limits = SizeLimits::default();
    match cmd {
        Command::Validate { doc } => {
            let parsed = SpaceDocument::parse(&read(&doc)?)?;
            let mut out = String::new();
            let (space, ok) = match parsed.decode()? {
                Decoded::Closed(s) => {
                    out.push_str("form: closed\n");
                    (s, true)
                }
                Decoded::Raw(raw) => {
                    let ax = raw.axioms();
                    out.push_str("form: raw\n");
                    out.push_str(&format!(
                        "point filters: {}\nintersections: {}\nrefinements: {}\n",
                        ax.point_filters, ax.intersections, ax.refinements
                    ));
                    (raw.close(), ax.all())
                }
            };
            out.insert_str(0, &format!("points: {}\n", space.len()));
            out.push_str(&format!(
                "pretopological: {}\npseudotopological: {}\n",
                space.is_pretopological(),
                space.is_pseudotopological()
            ));
            Ok(Outcome {
                stdout: out,
                verdict: if ok { Verdict::Yes } else { Verdict::No },
            })
        }
        Command::Close { doc } => Ok(yes(SpaceDocument::from_space(&load(&doc)?).to_json())),
        Command::Product { docs } => {
            let spaces = docs.iter().map(|d| load(d)).collect::<Result<Vec<_>, _>>()?;
            Ok(yes(
                SpaceDocument::from_space(&product(&spaces, limits)?.space).to_json()
            ))
        }
        Command::Subspace { doc, points } => {
            let s = load(&doc)?;
            let m = s.carrier().subset(&points)?;
            Ok(yes(SpaceDocument::from_space(&subspace(&s, &m)?.space).to_json()))
        }
        Command::Quotient { doc, projection, mode } => {
            let s = load(&doc)?;
            let labels: std::collections::BTreeMap<String, String> =
                serde_json::from_str(&read(&projection)?).map_err(|e| Error::Parse(e.to_string()))?;
            let per_point = s
                .carrier()
                .names()
                .iter()
                .map(|x| {
                    labels
                        .get(x)
                        .cloned()
                        .ok_or_else(|| Error::Parse(format!("no class for `{x}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let spec = QuotientSpec::onto_image(s, &per_point)?;
            let q = match mode {
                QuotientMode::Limit => quotient_limit(&spec),
                QuotientMode::Pstop => quotient_pstop(&spec),
            };
            Ok(yes(SpaceDocument::from_space(&q).to_json()))
        }
        Command::FunctionSpace { domain, codomain } => {
            let fs = function_space(&load(&domain)?, &load(&codomain)?, limits)?;
            Ok(yes(SpaceDocument::from_space(&fs.space).to_json()))
        }
        Command::Components { doc } => {
            let s = load(&doc)?;
            Ok(yes(components(&s).iter().map(|c| names(&s, c) + "\n").collect()))
        }
        Command::PathComponents { doc } => {
            let s = load(&doc)?;
            Ok(yes(path_components(&s).iter().map(|c| names(&s, c) + "\n").collect()))
        }
        Command::IsConnected { doc } => {
            let s = load(&doc)?;
            Ok(match connectedness(&s) {
                Connectedness::Connected => yes("connected\n".into()),
                Connectedness::Disconnected { a, b } => Outcome {
                    stdout: format!("disconnected\n{{{}}} | {{{}}}\n", names(&s, &a), names(&s, &b)),
                    verdict: Verdict::No,
                },
            })
        }
        Command::Chain { doc, from, to, cover } => {
            let s = load(&doc)?;
            let c = LocalCover::global(&s, cover_sets(&s, &cover)?);
            let (x, y) = (s.index_of(&from)?, s.index_of(&to)?);
            Ok(match chain_between(&s, x, y, &c)? {
                Some(chain) => yes(chain.iter().map(|u| format!("{{{}}}\n", names(&s, u))).collect()),
                None => Outcome {
                    stdout: "no chain\n".into(),
                    verdict: Verdict::No,
                },
            })
        }
        Command::IsCovering { atlas } => {
            let a = AtlasDocument::parse(&read(&atlas)?)?.decode()?;
            let report = a.verify();
            if report.is_covering() {
                return Ok(yes("covering\n".into()));
            }
            let mut out = String::from("not a covering\n");
            for d in &report.defects {
                out.push_str(&defect_text(&a, d));
                out.push('\n');
            }
            Ok(Outcome {
                stdout: out,
                verdict: Verdict::No,
            })
        }
        Command::SearchAtlas { map } => {
            let p = MapDocument::parse(&read(&map)?)?.decode()?;
            Ok(match search_atlas(&p)? {
                Some(a) => yes(AtlasDocument::from_atlas(&a).to_json()),
                None => Outcome {
                    stdout: "no atlas\n".into(),
                    verdict: Verdict::No,
                },
            })
        }
        Command::LiftPath { atlas, walk, start } => {
            let a = AtlasDocument::parse(&read(&atlas)?)?.decode()?;
            let w = Walk::from_names(a.base(), &walk)?;
            let e0 = a.total().index_of(&start)?;
            let lift = a.lift_path(&w, e0)?;
            Ok(yes(walk_text(a.total(), &lift) + "\n"))
        }
        Command::LiftMap {
            atlas,
            map,
            basepoints,
            cover,
            budget,
        } => {
            let a = AtlasDocument::parse(&read(&atlas)?)?.decode()?;
            let f = MapDocument::parse(&read(&map)?)?.decode()?;
            let [y0, e0] = &basepoints[..] else {
                return Err(Error::Parse("--basepoints takes `y0,e0`".into()));
            };
            let (y0, e0) = (f.domain().index_of(y0)?, a.total().index_of(e0)?);
            let sys = HomotopySystem::new(a.base().clone(), cover_sets(a.base(), &cover)?, budget)?;
            Ok(match a.lift_map(&f, y0, e0, &sys)? {
                LiftOutcome::Lifted(m) => yes(MapDocument::from_map(&m).to_json()),
                LiftOutcome::Obstruction {
                    domain_loop,
                    image,
                    lift,
                } => Outcome {
                    stdout: format!(
                        "obstruction\nloop: {}\nimage: {}\nlift: {}\n",
                        walk_text(f.domain(), &domain_loop),
                        walk_text(a.base(), &image),
                        walk_text(a.total(), &lift)
                    ),
                    verdict: Verdict::No,
                },
                LiftOutcome::Indeterminate { domain_loop, image } => Outcome {
                    stdout: format!(
                        "indeterminate\nloop: {}\nimage: {}\n",
                        walk_text(f.domain(), &domain_loop),
                        walk_text(a.base(), &image)
                    ),
                    verdict: Verdict::Unknown,
                },
            })
        }
        Command::UniversalCover {
            doc,
            base,
            cover,
            radius,
            budget,
            loop_len,
        } => {
            let s = load(&doc)?;
            let x0 = s.index_of(&base)?;
            let sys = HomotopySystem::new(s.clone(), cover_sets(&s, &cover)?, budget)?;
            let frag = build_fragment(&sys, x0, radius)?;
            let report = verify_universal(&frag, loop_len)?;
            let phi = frag.phi_bar();
            let fs = frag.space();
            let projection: serde_json::Map<String, Value> = (0..fs.len())
                .map(|i| (fs.name(i).to_string(), json!(s.name(phi.apply(i)))))
                .collect();
            let stipulated: Vec<Value> = report
                .cover_stipulates_contractibility
                .iter()
                .map(|u| json!(names(&s, u)))
                .collect();
            let doc = SpaceDocument::from_space(fs)
                .with_metadata("base", json!(base))
                .with_metadata("radius", json!(radius))
                .with_metadata("projection", Value::Object(projection))
                .with_metadata("boundary_classes", json!(frag.boundary().len()))
                .with_metadata("uncertified_classes", json!(report.uncertified_classes))
                .with_metadata(
                    "verification",
                    json!({
                        "charts_checked": report.charts.len(),
                        "charts_truncated": report.truncated_charts,
                        "atlas": report.atlas_ok(),
                        "fibers_discrete": report.fibers_discrete,
                        "loops_checked": report.loops_checked,
                        "simply_connected": report.simply_connected,
                        "path_connected": report.path_connected,
                        "cover_stipulates_contractibility": stipulated,
                    }),
                );
            let verdict = if report.uncertified_classes > 0 {
                Verdict::Unknown
            } else if report.passes() {
                Verdict::Yes
            } else {
                Verdict::No
            };
            Ok(Outcome {
                stdout: doc.to_json(),
                verdict,
            })
        }
        Command::Pi1 {
            doc,
            base,
            cover,
            max_len,
            budget,
        } => {
            let s = load(&doc)?;
            let x0 = s.index_of(&base)?;
            let sys = HomotopySystem::new(s.clone(), cover_sets(&s, &cover)?, budget)?;
            let r = pi1_probe(&sys, x0, max_len)?;
            let mut out = format!(
                "base: {base}\nmax-len: {max_len}\nloop classes: {}\ngenerators: {}\n",
                r.loop_classes.len(),
                r.generators.len()
            );
            for g in &r.generators {
                out.push_str(&format!("generator: {}\n", walk_text(&s, g)));
            }
            match r.shift_chain {
                Some(n) => out.push_str(&format!("shift chain: {n}\n")),
                None => out.push_str("shift chain: none\n"),
            }
            out.push_str(&format!("uncertified classes: {}\n", r.uncertified_classes));
            let (word, verdict) = match r.verdict {
                Pi1Verdict::Trivial => ("trivial", Verdict::Yes),
                Pi1Verdict::InfiniteCyclicCompatible => ("infinite-cyclic-compatible", Verdict::Yes),
                Pi1Verdict::Inconclusive => ("inconclusive", Verdict::Unknown),
            };
            out.push_str(&format!("verdict: {word}\n"));
            Ok(Outcome { stdout: out, verdict })
        }
        Command::FromCloud { csv, scale } => {
            let cloud = ScaledCloud::from_csv(&read(&csv)?, &scale)?;
            Ok(yes(SpaceDocument::from_space(&from_cloud(&cloud)?).to_json()))
        }
        Command::FromEdges { edges, mode } => {
            let list = EdgeList::parse(&read(&edges)?)?;
            let mode = match mode {
                Mode::Directed => EdgeMode::Directed,
                Mode::Symmetric => EdgeMode::Symmetric,
            };
            Ok(yes(SpaceDocument::from_space(&from_edges(
                &list.points,
                &list.edges,
                mode,
            )?)
            .to_json()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(match out.verdict {
                Verdict::Yes => 0,
                Verdict::No => 1,
                Verdict::Unknown => 2,
            })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
